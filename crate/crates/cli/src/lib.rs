//! Command-line front end for `sccat`: condition checks, certification,
//! parameter tables, density-model experiments and SVG figures.

pub mod report;
pub mod svg;

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use sccat::complexfold::{choose_radius, DEFAULT_RADIUS_FACTOR};
use sccat::hypgeom::{base_angle_theta, edge_length_lambda, r_max};
use sccat::linkcert::{run_pipeline, Refusal, DEFAULT_TOLERANCE};
use sccat::pieces::check_conditions;
use sccat::randomgroups::{experiment, DensityParams, StatsTable};
use sccat::words::{parse_presentation_named, WordsError};
use sccat::{certify, CertifyOptions, Presentation, Verdict};

pub use report::{Report, Timings, REPORT_VERSION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REFUSED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: WordsError },
    #[error("{0}")]
    InvalidArgument(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        EXIT_INPUT
    }
}

#[derive(Debug, Parser)]
#[command(name = "sccat", version, about = "CAT(-1) certificates for uniformly C'(1/6) presentations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    Discs,
    Links,
    Folds,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the C'(1/6) and uniform C'(1/6) conditions.
    Check {
        file: PathBuf,
        /// Write the JSON report here.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Build the metrized complex and verify the Link Condition.
    Certify {
        file: PathBuf,
        #[arg(long, env = "SC_RADIUS_FACTOR")]
        radius_factor: Option<f64>,
        #[arg(long, env = "SC_TOLERANCE")]
        tolerance: Option<f64>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Print r_max(n), θ and λ for the (6n+1)-gon at 0.9·r_max(n).
    Params {
        #[arg(long, short = 'n', default_value_t = 10)]
        n: u32,
    },
    /// Sample presentations in the density model and tabulate pass rates.
    Random {
        #[arg(short = 'm')]
        m: usize,
        #[arg(short = 'l')]
        l: usize,
        #[arg(short = 'd')]
        d: f64,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also certify every sample that passes the uniform condition.
        #[arg(long)]
        certify: bool,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Draw discs, folds or links as a standalone SVG.
    Svg {
        #[arg(required_unless_present = "demo")]
        file: Option<PathBuf>,
        #[arg(short = 'o', long)]
        output: PathBuf,
        #[arg(long, value_enum, default_value_t = Figure::Discs)]
        what: Figure,
        /// Diagonal fan of the regular M-gon with diagonals up to length K.
        #[arg(long, num_args = 2, value_names = ["M", "K"], conflicts_with = "file")]
        demo: Option<Vec<usize>>,
    },
}

pub struct Loaded {
    pub presentation: Presentation,
    pub digest: String,
    pub parse_ms: f64,
}

fn ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

pub fn load(path: &Path) -> Result<Loaded, CliError> {
    let start = Instant::now();
    let bytes = std::fs::read(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let text = String::from_utf8_lossy(&bytes);
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or_default();
    let presentation = parse_presentation_named(name, &text).map_err(|source| CliError::Parse {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(Loaded {
        presentation,
        digest: report::digest(&bytes),
        parse_ms: ms(start),
    })
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Builds the report for `check` (`options == None`) or `certify`.
pub fn build_report(loaded: &Loaded, options: Option<&CertifyOptions>) -> Report {
    let p = &loaded.presentation;
    let start = Instant::now();
    let conditions = check_conditions(p);
    let check_ms = ms(start);
    let mut timings = Timings {
        parse_ms: loaded.parse_ms,
        check_ms,
        certify_ms: None,
    };
    let radius = options.map_or(DEFAULT_RADIUS_FACTOR, |o| o.radius_factor);
    let params = choose_radius(&conditions, radius).ok();
    let certificate = options.map(|o| {
        let start = Instant::now();
        let cert = certify(p, o);
        timings.certify_ms = Some(ms(start));
        cert
    });
    Report {
        report_version: REPORT_VERSION,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        input_digest: loaded.digest.clone(),
        generators: p.generator_names.clone(),
        relators: (0..p.relators.len()).map(|i| p.relator_string(i)).collect(),
        normalization_log: p.normalization_log.clone(),
        conditions,
        params,
        certificate,
        timings,
    }
}

fn print_conditions(r: &Report) {
    for e in &r.normalization_log {
        eprintln!("warning: {e}");
    }
    let c = &r.conditions;
    println!("generators: {}, relators: {}, g = {}", r.generators.len(), r.relators.len(), c.g);
    println!("longest piece: {}", c.max_piece_length);
    if c.short_relators {
        println!("note: g < 7, only piece-free presentations can pass");
    }
    println!("C'(1/6): {}", if c.passes_c16 { "pass" } else { "fail" });
    match c.uniform_failure() {
        None => println!("uniform C'(1/6): pass"),
        Some(reason) => println!("uniform C'(1/6): fail ({reason})"),
    }
}

pub fn cmd_check(file: &Path, json: Option<&Path>) -> Result<i32, CliError> {
    let loaded = load(file)?;
    let report = build_report(&loaded, None);
    print_conditions(&report);
    if let Some(out) = json {
        write_file(out, &report.to_json())?;
    }
    Ok(if report.conditions.passes_uniform {
        EXIT_OK
    } else {
        EXIT_REFUSED
    })
}

pub fn certify_options(radius_factor: Option<f64>, tolerance: Option<f64>) -> Result<CertifyOptions, CliError> {
    let radius_factor = radius_factor.unwrap_or(DEFAULT_RADIUS_FACTOR);
    if !(radius_factor > 0.0 && radius_factor < 1.0) {
        return Err(CliError::InvalidArgument(format!(
            "radius factor {radius_factor} must lie in (0, 1)"
        )));
    }
    let tolerance = tolerance.unwrap_or(DEFAULT_TOLERANCE);
    if !(tolerance >= 0.0 && tolerance.is_finite()) {
        return Err(CliError::InvalidArgument(format!("tolerance {tolerance} must be non-negative")));
    }
    Ok(CertifyOptions {
        radius_factor,
        tolerance,
        parallel: true,
    })
}

pub fn verdict_exit_code(v: &Verdict) -> i32 {
    match v {
        Verdict::Certified => EXIT_OK,
        Verdict::Marginal { .. } | Verdict::Refused(Refusal::Condition { .. } | Refusal::Link { .. }) => {
            EXIT_REFUSED
        }
        Verdict::Refused(Refusal::Internal { .. }) => EXIT_INTERNAL,
    }
}

pub fn cmd_certify(file: &Path, options: &CertifyOptions, json: Option<&Path>) -> Result<i32, CliError> {
    let loaded = load(file)?;
    let report = build_report(&loaded, Some(options));
    print_conditions(&report);
    let cert = report.certificate.as_ref().expect("certify always yields a certificate");
    if let Some(mp) = &cert.params {
        println!(
            "radius r = {:.6} ({} · r_max({}) = {} · {:.6}), corner angle 2θ = {:.6}",
            mp.r, mp.radius_factor, mp.n_eff, mp.radius_factor, mp.r_max, mp.corner_angle()
        );
    }
    if let Some(t1) = &cert.type1 {
        println!(
            "type-1 link: girth {:.9}, margin {:.3e}, shortest central path {:.6}",
            t1.girth.length, t1.margin, t1.min_central_path
        );
    }
    if !cert.type2.is_empty() {
        let worst = cert.type2.iter().map(|t| t.girth.length).fold(f64::INFINITY, f64::min);
        println!("type-2 links: {} classes, smallest girth {worst:.9}", cert.type2.len());
    }
    if let Some(a) = &cert.area {
        println!("area: {:.6} (chosen r), {:.6} (r_max({}))", a.approx_area, a.formula_area, a.formula_n);
    }
    match &cert.verdict {
        Verdict::Certified => println!("verdict: certified"),
        Verdict::Marginal { reason } => println!("verdict: marginal ({reason})"),
        Verdict::Refused(r) => println!("verdict: refused ({})", r.reason()),
    }
    if let Some(out) = json {
        write_file(out, &report.to_json())?;
    }
    Ok(verdict_exit_code(&cert.verdict))
}

pub fn params_table(n: u32) -> String {
    let mut s = format!("{:>5} {:>12} {:>12} {:>12}\n", "n", "r_max", "theta", "lambda");
    for k in 1..=n {
        let rm = r_max(k);
        let r = DEFAULT_RADIUS_FACTOR * rm;
        let m = 6 * k + 1;
        s.push_str(&format!(
            "{k:>5} {rm:>12.6} {:>12.6} {:>12.6}\n",
            base_angle_theta(r, m),
            edge_length_lambda(r, m)
        ));
    }
    s
}

pub fn cmd_params(n: u32) -> Result<i32, CliError> {
    if n == 0 {
        return Err(CliError::InvalidArgument("n must be at least 1".into()));
    }
    print!("{}", params_table(n));
    Ok(EXIT_OK)
}

pub fn random_table(dp: &DensityParams, certify_samples: bool) -> Result<StatsTable, CliError> {
    let opts = CertifyOptions::default();
    experiment(dp, certify_samples.then_some(&opts)).map_err(|e| CliError::InvalidArgument(e.to_string()))
}

pub fn cmd_random(dp: &DensityParams, certify_samples: bool, output: Option<&Path>) -> Result<i32, CliError> {
    let csv = random_table(dp, certify_samples)?.to_csv();
    match output {
        Some(out) => write_file(out, &csv)?,
        None => print!("{csv}"),
    }
    Ok(EXIT_OK)
}

pub fn cmd_svg(file: Option<&Path>, output: &Path, what: Figure, demo: Option<&[usize]>) -> Result<i32, CliError> {
    if let Some(d) = demo {
        let (m, k) = (d[0], d[1]);
        if m < 3 || k == 0 {
            return Err(CliError::InvalidArgument("demo needs M >= 3 and K >= 1".into()));
        }
        write_file(output, &svg::demo_svg(m, k))?;
        return Ok(EXIT_OK);
    }
    let file = file.ok_or_else(|| CliError::InvalidArgument("an input file is required".into()))?;
    let loaded = load(file)?;
    let p = &loaded.presentation;
    let pipe = match run_pipeline(p, &CertifyOptions::default()) {
        Ok(pipe) => pipe,
        Err(r) => {
            eprintln!("cannot draw: {}", r.reason());
            return Ok(match r {
                Refusal::Internal { .. } => EXIT_INTERNAL,
                _ => EXIT_REFUSED,
            });
        }
    };
    let doc = match what {
        Figure::Discs => svg::discs_svg(p, &pipe, false),
        Figure::Folds => svg::discs_svg(p, &pipe, true),
        Figure::Links => svg::links_svg(&pipe),
    };
    write_file(output, &doc)?;
    Ok(EXIT_OK)
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let result = match cli.command {
        Command::Check { file, json } => cmd_check(&file, json.as_deref()),
        Command::Certify {
            file,
            radius_factor,
            tolerance,
            json,
        } => certify_options(radius_factor, tolerance).and_then(|o| cmd_certify(&file, &o, json.as_deref())),
        Command::Params { n } => cmd_params(n),
        Command::Random {
            m,
            l,
            d,
            samples,
            seed,
            certify,
            output,
        } => cmd_random(
            &DensityParams { m, l, d, seed, samples },
            certify,
            output.as_deref(),
        ),
        Command::Svg {
            file,
            output,
            what,
            demo,
        } => cmd_svg(file.as_deref(), &output, what, demo.as_deref()),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        e.exit_code()
    })
}
