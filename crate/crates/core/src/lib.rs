//! Certification of CAT(-1) metrics on presentation complexes of uniformly
//! C'(1/6) small cancellation groups.
//!
//! The pipeline runs bottom-up through the modules:
//!
//! - [`words`]: letters, free and cyclic reduction, presentation parsing.
//! - [`pieces`]: maximal pieces and the C'(1/6) / uniform C'(1/6) checks.
//! - [`hypgeom`]: regular hyperbolic polygon trigonometry and the
//!   conformal-disk embedding used for crossings.
//! - [`complexfold`]: metrized singular discs and the fold schedule.
//! - [`linkcert`]: vertex links as metric graphs, girth, and the final
//!   [`linkcert::Certificate`].
//! - [`randomgroups`]: density-model sampling and pass-rate experiments.

pub mod complexfold;
pub mod hypgeom;
pub mod linkcert;
pub mod pieces;
pub mod randomgroups;
pub mod words;

pub use complexfold::{Disc, FoldSchedule, MetricParams};
pub use linkcert::{certify, CertifyOptions, Certificate, LinkGraph, Verdict};
pub use pieces::{check_conditions, enumerate_pieces, Piece, SmallCancellationReport};
pub use words::{CyclicWord, Letter, Presentation, Word};
