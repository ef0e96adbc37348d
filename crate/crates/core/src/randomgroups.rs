//! Random presentations in the density model and pass-rate experiments.
//!
//! A sample at density `d` has `⌊(2m−1)^{d·l}⌋` (at least one) relators,
//! each a random cyclically reduced word of length exactly `l`. Words are
//! drawn as uniform reduced words, rejecting those whose last letter cancels
//! the first. Sample `i` draws from a ChaCha stream keyed by `(seed, i)`, so
//! results do not depend on scheduling.

use std::fmt::Write as _;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linkcert::{certify, CertifyOptions, Verdict};
use crate::pieces::check_conditions;
use crate::words::{Letter, Presentation, Word};

/// Printed above every table.
pub const TABLE_NOTE: &str = "density-model sampling at desk scale; the d < 1/12 statement is asymptotic in l, these rows show finite-l trends only";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RandomError {
    #[error("need at least 2 generators, got {0}")]
    TooFewGenerators(usize),
    #[error("relator length must be positive")]
    ZeroLength,
    #[error("density {0} must lie in (0, 1)")]
    InvalidDensity(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityParams {
    pub m: usize,
    pub l: usize,
    pub d: f64,
    pub seed: u64,
    pub samples: usize,
}

impl DensityParams {
    pub fn validate(&self) -> Result<(), RandomError> {
        if self.m < 2 {
            return Err(RandomError::TooFewGenerators(self.m));
        }
        if self.l == 0 {
            return Err(RandomError::ZeroLength);
        }
        if !(self.d > 0.0 && self.d < 1.0) {
            return Err(RandomError::InvalidDensity(self.d));
        }
        Ok(())
    }

    pub fn relator_count(&self) -> usize {
        relator_count(self.m, self.l, self.d)
    }
}

/// `⌊(2m−1)^{d·l}⌋`, at least 1.
pub fn relator_count(m: usize, l: usize, d: f64) -> usize {
    let x = ((2 * m - 1) as f64).powf(d * l as f64);
    // Guard exact integer powers against rounding just below.
    (x * (1.0 + 1e-12)).floor().max(1.0) as usize
}

pub fn generator_names(m: usize) -> Vec<String> {
    if m <= 26 {
        (0..m).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
    } else {
        (0..m).map(|i| format!("x{}", i + 1)).collect()
    }
}

/// A uniformly random reduced word of length `l` whose cyclic closure is reduced.
pub fn random_cyclic_word<R: Rng>(rng: &mut R, m: usize, l: usize) -> Word {
    loop {
        let mut letters: Vec<Letter> = Vec::with_capacity(l);
        let first = rng.gen_range(0..2 * m);
        letters.push(Letter::new(first / 2, first % 2 == 1));
        while letters.len() < l {
            let prev = *letters.last().unwrap();
            // Index among the 2m − 1 letters other than prev⁻¹.
            let mut x = rng.gen_range(0..2 * m - 1);
            let banned = 2 * prev.generator_id + usize::from(!prev.inverted);
            if x >= banned {
                x += 1;
            }
            letters.push(Letter::new(x / 2, x % 2 == 1));
        }
        if l < 2 || !letters[l - 1].cancels(letters[0]) {
            return Word(letters);
        }
    }
}

fn rng_for(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// The `index`-th sample of `dp`.
pub fn sample_at(dp: &DensityParams, index: u64) -> Presentation {
    let mut rng = rng_for(dp.seed, index);
    let words = (0..dp.relator_count())
        .map(|_| random_cyclic_word(&mut rng, dp.m, dp.l))
        .collect();
    Presentation::new(generator_names(dp.m), words)
        .expect("sampled relators are nonempty and cyclically reduced")
}

/// The first sample of `dp`.
pub fn sample_presentation(dp: &DensityParams) -> Presentation {
    sample_at(dp, 0)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleOutcome {
    pub index: u64,
    pub relators: usize,
    pub passes_c16: bool,
    pub passes_uniform: bool,
    pub max_piece_length: usize,
    /// Present when certification ran on a sample that passed the gate.
    pub verdict: Option<Verdict>,
    pub type1_margin: Option<f64>,
    pub min_central_path: Option<f64>,
    pub min_type2_margin: Option<f64>,
}

pub fn evaluate_sample(dp: &DensityParams, index: u64, certify_with: Option<&CertifyOptions>) -> SampleOutcome {
    let p = sample_at(dp, index);
    let report = check_conditions(&p);
    let mut out = SampleOutcome {
        index,
        relators: p.relators.len(),
        passes_c16: report.passes_c16,
        passes_uniform: report.passes_uniform,
        max_piece_length: report.max_piece_length,
        verdict: None,
        type1_margin: None,
        min_central_path: None,
        min_type2_margin: None,
    };
    if let (Some(opts), true) = (certify_with, report.passes_uniform) {
        let cert = certify(&p, opts);
        if let Some(t1) = &cert.type1 {
            out.type1_margin = Some(t1.margin);
            out.min_central_path = Some(t1.min_central_path);
        }
        out.min_type2_margin = cert.type2.iter().map(|t| t.margin).reduce(f64::min);
        out.verdict = Some(cert.verdict);
    }
    out
}

/// Evaluates every sample of `dp`, in index order.
pub fn run_samples(dp: &DensityParams, certify_with: Option<&CertifyOptions>) -> Vec<SampleOutcome> {
    // Links inside each sample stay sequential; samples are the parallel unit.
    let inner = certify_with.map(|o| CertifyOptions {
        parallel: false,
        ..*o
    });
    (0..dp.samples as u64)
        .into_par_iter()
        .map(|i| evaluate_sample(dp, i, inner.as_ref()))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatsRow {
    pub m: usize,
    pub l: usize,
    pub d: f64,
    pub samples: usize,
    pub pass_c16: f64,
    pub pass_uniform: f64,
    /// Fraction of all samples certified; `None` when certification was not run.
    pub certified: Option<f64>,
    /// Mean type-1 girth margin over certified samples with a cycle in the link.
    pub mean_margin: Option<f64>,
    pub max_piece_mean: f64,
    /// `max_piece_histogram[k]` samples had longest piece `k`.
    pub max_piece_histogram: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct StatsTable {
    pub note: String,
    pub rows: Vec<StatsRow>,
}

pub const CSV_HEADER: &str = "m,l,d,samples,pass_c16,pass_uniform,certified,mean_margin,max_piece_mean";

impl StatsTable {
    pub fn new() -> Self {
        StatsTable {
            note: TABLE_NOTE.to_string(),
            rows: Vec::new(),
        }
    }

    pub fn extend(&mut self, other: StatsTable) {
        self.rows.extend(other.rows);
    }

    /// CSV with a leading `#` comment line carrying the table note.
    pub fn to_csv(&self) -> String {
        let mut s = format!("# {}\n{CSV_HEADER}\n", self.note);
        let opt = |x: Option<f64>| x.map(|v| format!("{v:.6}")).unwrap_or_default();
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{},{},{},{},{:.6},{:.6},{},{},{:.6}",
                r.m,
                r.l,
                r.d,
                r.samples,
                r.pass_c16,
                r.pass_uniform,
                opt(r.certified),
                opt(r.mean_margin),
                r.max_piece_mean
            );
        }
        s
    }
}

pub fn summarize(dp: &DensityParams, outcomes: &[SampleOutcome], certified_run: bool) -> StatsRow {
    let n = outcomes.len().max(1) as f64;
    let frac = |f: &dyn Fn(&SampleOutcome) -> bool| outcomes.iter().filter(|o| f(o)).count() as f64 / n;
    let mut hist = Vec::new();
    for o in outcomes {
        if hist.len() <= o.max_piece_length {
            hist.resize(o.max_piece_length + 1, 0);
        }
        hist[o.max_piece_length] += 1;
    }
    let margins: Vec<f64> = outcomes
        .iter()
        .filter(|o| o.verdict.as_ref().is_some_and(Verdict::is_certified))
        .filter_map(|o| o.type1_margin)
        .filter(|x| x.is_finite())
        .collect();
    StatsRow {
        m: dp.m,
        l: dp.l,
        d: dp.d,
        samples: outcomes.len(),
        pass_c16: frac(&|o| o.passes_c16),
        pass_uniform: frac(&|o| o.passes_uniform),
        certified: certified_run
            .then(|| frac(&|o| o.verdict.as_ref().is_some_and(Verdict::is_certified))),
        mean_margin: (!margins.is_empty()).then(|| margins.iter().sum::<f64>() / margins.len() as f64),
        max_piece_mean: outcomes.iter().map(|o| o.max_piece_length as f64).sum::<f64>() / n,
        max_piece_histogram: hist,
    }
}

/// Runs every sample of `dp` and aggregates one row; zero samples give an empty table.
pub fn experiment(dp: &DensityParams, certify_with: Option<&CertifyOptions>) -> Result<StatsTable, RandomError> {
    dp.validate()?;
    let mut table = StatsTable::new();
    if dp.samples > 0 {
        let outcomes = run_samples(dp, certify_with);
        table.rows.push(summarize(dp, &outcomes, certify_with.is_some()));
    }
    Ok(table)
}
