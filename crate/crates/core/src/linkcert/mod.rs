//! Vertex links of the folded complex and the Link Condition.
//!
//! The folded complex has three kinds of vertex: the image of the
//! 1-skeleton ([`build_type1_link`]), the cone points at disc centres (whose
//! links are circles of length `g_i·2π/g`), and images of interior points
//! lying on fold diagonals ([`build_type2_link`]). All links are checked once
//! in the base complex; lifts to the universal cover have isometric links.

mod graph;
mod type1;
mod type2;

use std::f64::consts::TAU;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use graph::{girth, Girth, LinkEdge, LinkGraph};
pub use type1::{build_type1_link, Stub, Type1Link};
pub use type2::{
    build_type2_link, enumerate_interior_points, DiscPoint, Gluing, InteriorPointClass, PointKind,
    Type2Link,
};

use crate::complexfold::{
    area_estimate, build_discs, check_fold_maximality, choose_radius, segments_from_pieces,
    AreaEstimate, Disc, FoldSchedule, MaximalityReport, MetricParams, DEFAULT_RADIUS_FACTOR,
};
use crate::pieces::{check_conditions_with, enumerate_pieces, Piece, SmallCancellationReport};
use crate::words::Presentation;

/// Required slack of the type-1 girth above `2π`.
pub const TYPE1_MARGIN: f64 = 1e-6;
/// Default allowance below `2π` for type-2 girths.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;
/// Girths this close to `2π` count as exactly `2π`.
const ROUNDING: f64 = 1e-12;
/// Tolerance for the arc bounds on type-2 links.
const ARC_TOL: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinkError {
    #[error("corners {first} and {second} were identified but join different link vertices")]
    InconsistentCorners { first: String, second: String },
    #[error("parallel edges survive in the intermediate type-1 link")]
    IntermediateBigon,
    #[error("stub length {delta} for a piece of length {k} is not shorter than the corner angle {corner}")]
    StubTooLong { k: usize, delta: f64, corner: f64 },
    #[error("central path of edge {edge} has length {length}, not above 2π/3")]
    ShortCentralPath { edge: String, length: f64 },
    #[error("inconsistent circle gluing: {0}")]
    InconsistentGluing(String),
    #[error("interior point class exceeds {0} elements")]
    ClassTooLarge(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertifyOptions {
    pub radius_factor: f64,
    /// Allowed shortfall of type-2 girths below `2π`.
    pub tolerance: f64,
    /// Build type-2 links on the rayon pool.
    pub parallel: bool,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self {
            radius_factor: DEFAULT_RADIUS_FACTOR,
            tolerance: DEFAULT_TOLERANCE,
            parallel: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "stage", rename_all = "snake_case")]
pub enum Refusal {
    /// The presentation fails the uniform C'(1/6) condition.
    Condition { reason: String },
    /// A link violates the Link Condition.
    Link { reason: String },
    /// The construction itself is inconsistent.
    Internal { reason: String },
}

impl Refusal {
    pub fn reason(&self) -> &str {
        match self {
            Refusal::Condition { reason } | Refusal::Link { reason } | Refusal::Internal { reason } => {
                reason
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Certified,
    /// All girths pass numerically, but an arc bound of the type-2 analysis fails.
    Marginal { reason: String },
    Refused(Refusal),
}

impl Verdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, Verdict::Certified)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PresentationSummary {
    pub generators: usize,
    pub relators: usize,
    pub relator_lengths: Vec<usize>,
    pub total_length: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Type1Summary {
    pub girth: Girth,
    /// `girth - 2π`.
    #[serde(with = "graph::finite_or_null")]
    pub margin: f64,
    pub min_central_path: f64,
    pub edges_before_folding: usize,
    pub stubs: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Type2Summary {
    pub kind: PointKind,
    pub representative: DiscPoint,
    pub circles: usize,
    pub groups: usize,
    pub girth: Girth,
    #[serde(with = "graph::finite_or_null")]
    pub margin: f64,
    pub alpha_min: Option<f64>,
    pub beta_min: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub presentation: PresentationSummary,
    pub conditions: SmallCancellationReport,
    pub params: Option<MetricParams>,
    pub maximality: Option<MaximalityReport>,
    pub type1: Option<Type1Summary>,
    pub type2: Vec<Type2Summary>,
    pub center_link_lengths: Vec<f64>,
    pub area: Option<AreaEstimate>,
    /// Smallest slack over every inequality checked.
    pub worst_margin: Option<f64>,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

/// Every intermediate object of a certification run.
#[derive(Clone, Debug)]
pub struct Pipeline {
    pub pieces: Vec<Piece>,
    pub report: SmallCancellationReport,
    pub params: MetricParams,
    pub discs: Vec<Disc>,
    pub folds: FoldSchedule,
    pub maximality: MaximalityReport,
    pub type1: Type1Link,
    pub classes: Vec<InteriorPointClass>,
    pub type2: Vec<Type2Link>,
}

/// Builds discs, folds, and every link; stops at the first failing stage.
pub fn run_pipeline(p: &Presentation, options: &CertifyOptions) -> Result<Pipeline, Refusal> {
    let pieces = enumerate_pieces(p);
    let report = check_conditions_with(p, &pieces);
    let params = choose_radius(&report, options.radius_factor).map_err(|e| Refusal::Condition {
        reason: e.to_string(),
    })?;
    let maximal: Vec<Piece> = pieces.iter().filter(|x| x.maximal).cloned().collect();
    let discs = build_discs(p, &params);
    let folds = segments_from_pieces(&discs, &maximal);
    let maximality = check_fold_maximality(&folds, &discs);
    if !maximality.passed {
        return Err(Refusal::Internal {
            reason: format!("fold schedule is not maximal: {:?}", maximality.witness),
        });
    }
    let internal = |e: LinkError| Refusal::Internal {
        reason: e.to_string(),
    };
    let type1 = build_type1_link(p, &discs, &folds, &params).map_err(internal)?;
    let classes = enumerate_interior_points(&folds, &discs, &params).map_err(internal)?;
    let type2: Result<Vec<Type2Link>, LinkError> = if options.parallel {
        classes.par_iter().map(build_type2_link).collect()
    } else {
        classes.iter().map(build_type2_link).collect()
    };
    let type2 = type2.map_err(internal)?;
    Ok(Pipeline {
        pieces: maximal,
        report,
        params,
        discs,
        folds,
        maximality,
        type1,
        classes,
        type2,
    })
}

fn summary(p: &Presentation) -> PresentationSummary {
    let relator_lengths: Vec<usize> = p.relators.iter().map(|r| r.len()).collect();
    PresentationSummary {
        generators: p.num_generators(),
        relators: p.relators.len(),
        total_length: relator_lengths.iter().sum(),
        relator_lengths,
    }
}

fn witness_text(g: &Girth) -> String {
    g.cycle.join(" → ")
}

/// Runs the full pipeline and decides whether the Link Condition holds at
/// every vertex. Refusal is reported in the verdict, never as an error.
pub fn certify(p: &Presentation, options: &CertifyOptions) -> Certificate {
    let mut notes = vec![
        "links are checked once in the base complex; every lift has an isometric link".to_string(),
    ];
    if options.radius_factor == DEFAULT_RADIUS_FACTOR {
        notes.push(format!(
            "disc radius uses the default factor {DEFAULT_RADIUS_FACTOR} of r_max"
        ));
    }
    let mut cert = Certificate {
        presentation: summary(p),
        conditions: check_conditions_with(p, &enumerate_pieces(p)),
        params: None,
        maximality: None,
        type1: None,
        type2: Vec::new(),
        center_link_lengths: Vec::new(),
        area: None,
        worst_margin: None,
        verdict: Verdict::Certified,
        notes,
    };
    if !cert.conditions.passes_c16 {
        cert.notes.push("presentation is not C'(1/6)".into());
    }
    let pipe = match run_pipeline(p, options) {
        Ok(pipe) => pipe,
        Err(refusal) => {
            cert.verdict = Verdict::Refused(refusal);
            return cert;
        }
    };
    cert.area = Some(area_estimate(p, &pipe.params));
    cert.center_link_lengths = pipe.discs.iter().map(|d| d.center_link_length).collect();
    cert.maximality = Some(pipe.maximality.clone());
    let t1 = &pipe.type1;
    let t1_margin = t1.girth.length - TAU;
    cert.type1 = Some(Type1Summary {
        girth: t1.girth.clone(),
        margin: t1_margin,
        min_central_path: t1.min_central_path(),
        edges_before_folding: t1.intermediate.edges.len(),
        stubs: t1.stubs.len(),
    });
    cert.type2 = pipe
        .type2
        .iter()
        .map(|l| Type2Summary {
            kind: l.kind,
            representative: l.representative,
            circles: l.circles,
            groups: l.groups,
            girth: l.girth.clone(),
            margin: l.girth.length - TAU,
            alpha_min: l.alpha_min,
            beta_min: l.beta_min,
        })
        .collect();

    let mut margins = vec![t1.min_central_path() - TAU / 3.0];
    if t1_margin.is_finite() {
        margins.push(t1_margin);
    }
    margins.extend(cert.center_link_lengths.iter().map(|c| c - TAU));
    for s in &cert.type2 {
        if s.margin.is_finite() {
            margins.push(s.margin);
        }
        if let Some(a) = s.alpha_min {
            margins.push(a - TAU / 3.0);
        }
        if let Some(b) = s.beta_min {
            margins.push(b - TAU / 3.0);
        }
    }
    cert.worst_margin = margins.iter().copied().reduce(f64::min);
    cert.params = Some(pipe.params.clone());
    cert.verdict = decide(&cert, &pipe, options);
    cert
}

fn decide(cert: &Certificate, pipe: &Pipeline, options: &CertifyOptions) -> Verdict {
    let link = |reason: String| Verdict::Refused(Refusal::Link { reason });
    let t1 = &pipe.type1.girth;
    if t1.length <= TAU + TYPE1_MARGIN {
        return link(format!(
            "vertex link of the 1-skeleton has girth {:.12} ≤ 2π + {TYPE1_MARGIN}; witness {}",
            t1.length,
            witness_text(t1)
        ));
    }
    for (i, c) in cert.center_link_lengths.iter().enumerate() {
        if *c < TAU - ROUNDING {
            return link(format!("centre link of relator {} has length {c:.12} < 2π", i + 1));
        }
    }
    for (i, l) in pipe.type2.iter().enumerate() {
        if l.girth.length < TAU - options.tolerance {
            return link(format!(
                "interior vertex class {i} has link girth {:.12} < 2π; witness {}",
                l.girth.length,
                witness_text(&l.girth)
            ));
        }
        if l.circle_error > 1e-9 {
            return Verdict::Refused(Refusal::Internal {
                reason: format!("link circles of class {i} are off 2π by {}", l.circle_error),
            });
        }
    }
    for (i, l) in pipe.type2.iter().enumerate() {
        if l.girth.length < TAU - ROUNDING {
            return Verdict::Marginal {
                reason: format!(
                    "interior vertex class {i} has link girth {:.15}, within tolerance of 2π",
                    l.girth.length
                ),
            };
        }
        if let Some(a) = l.alpha_min {
            if a < TAU / 3.0 - ARC_TOL {
                return Verdict::Marginal {
                    reason: format!("interior vertex class {i} has common arc {a:.9} < 2π/3"),
                };
            }
        }
        if let Some(b) = l.beta_min {
            if b <= TAU / 3.0 - ARC_TOL {
                return Verdict::Marginal {
                    reason: format!("interior vertex class {i} has unshared arc {b:.9} ≤ 2π/3"),
                };
            }
        }
    }
    Verdict::Certified
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::words::parse_presentation;

    fn pres(text: &str) -> Presentation {
        parse_presentation(text).unwrap()
    }

    const GENUS2: &str = "generators: a b c d\nrelator: a b a- b- c d c- d-\n";

    #[test]
    fn genus_two_certified() {
        let c = certify(&pres(GENUS2), &CertifyOptions::default());
        assert_eq!(c.verdict, Verdict::Certified, "{c:?}");
        let t1 = c.type1.unwrap();
        assert!(t1.margin > TYPE1_MARGIN);
        assert!(c.type2.is_empty());
        assert_eq!(t1.stubs, 0);
        assert_eq!(t1.edges_before_folding, 8);
    }

    #[test]
    fn genus_two_link_is_an_octagon() {
        let pipe = run_pipeline(&pres(GENUS2), &CertifyOptions::default()).unwrap();
        let l = &pipe.type1;
        assert_eq!(l.intermediate.vertices.len(), 8);
        assert!(l.intermediate.degrees().iter().all(|&d| d == 2));
        let expected = 8.0 * pipe.params.corner_angle();
        assert!((l.girth.length - expected).abs() < 1e-12);
    }

    #[test]
    fn proper_power_refused() {
        let c = certify(&pres("generators: a b\nrelator: a b a b a b\n"), &CertifyOptions::default());
        match c.verdict {
            Verdict::Refused(Refusal::Condition { reason }) => assert!(reason.contains("proper power")),
            v => panic!("unexpected verdict {v:?}"),
        }
    }

    #[test]
    fn commutator_refused() {
        let c = certify(&pres("generators: a b\nrelator: a b a- b-\n"), &CertifyOptions::default());
        assert!(matches!(c.verdict, Verdict::Refused(Refusal::Condition { .. })));
    }

    const CROSSING: &str = "generators: a b c d e f g h i j k l m n o p q r s t u v w x y z A B C D E F G H I\n\
         relator: a b c d e f g h i j k l m\n\
         relator: a b n o p q r s t u v w x\n\
         relator: b c y z A B C D E F G H I\n";

    #[test]
    fn overlapping_pieces_build_type2_links() {
        let p = pres(CROSSING);
        let c = certify(&p, &CertifyOptions::default());
        assert!(c.conditions.passes_uniform, "{:?}", c.conditions);
        assert!(c.type1.as_ref().unwrap().stubs > 0);
        assert!(c.type2.iter().any(|t| t.kind == PointKind::Crossing));
        assert!(c.type2.iter().any(|t| t.kind == PointKind::Diagonal));
        assert_eq!(c.verdict, Verdict::Certified, "{c:#?}");
        for t in &c.type2 {
            assert!(t.margin >= -1e-9);
            assert!(t.alpha_min.unwrap() >= TAU / 3.0);
        }
    }

    #[test]
    fn shared_pair_gives_two_circles_glued_on_a_half() {
        let p = pres(
            "generators: a b c d e f g h i j k l m n o p q r s t u v w x\n\
             relator: a b c d e f g h i j k l m\n\
             relator: a b n o p q r s t u v w x\n",
        );
        let pipe = run_pipeline(&p, &CertifyOptions::default()).unwrap();
        assert_eq!(pipe.type2.len(), 1);
        let l = &pipe.type2[0];
        assert_eq!(l.circles, 2);
        assert_eq!(l.groups, 2);
        assert!((l.girth.length - TAU).abs() < 1e-12);
        assert!((l.beta_min.unwrap() - PI).abs() < 1e-9);
    }

    #[test]
    fn certificate_round_trips_through_json() {
        let c = certify(&pres(GENUS2), &CertifyOptions::default());
        let s = serde_json::to_string(&c).unwrap();
        let back: Certificate = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
    }
}
