//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

mod common;

use std::f64::consts::{PI, TAU};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sccat::complexfold::{area_estimate, build_discs, choose_radius};
use sccat::hypgeom::{
    angle_at, base_angle_theta, chord_angle_beta, embed_polygon, euclidean_min_internal_angle,
    euclidean_min_internal_angle_config, r_max,
};
use sccat::linkcert::{girth, Refusal};
use sccat::pieces::{check_conditions, enumerate_pieces};
use sccat::randomgroups::{run_samples, DensityParams};
use sccat::words::parse_presentation;
use sccat::{certify, CertifyOptions, Verdict};

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn secs(d: Duration) -> String {
    format!("{:.3}s", d.as_secs_f64())
}

fn rmax_table() -> Outcome {
    let start = Instant::now();
    let values = [r_max(1), r_max(10), r_max(100), r_max(1000)];
    let elapsed = start.elapsed();
    let expected = [0.62, 0.20, 0.06, 0.02];
    let ok = values.iter().zip(expected).all(|(v, p)| (v - p).abs() <= 0.01);
    let fast = elapsed < Duration::from_millis(1);
    outcome(
        ok && fast,
        format!(
            "r_max(1,10,100,1000) = {:.4}, {:.4}, {:.4}, {:.4} in {:?}",
            values[0], values[1], values[2], values[3], elapsed
        ),
    )
}

fn proposition() -> Outcome {
    let mut first_bad = None;
    let mut worst = 0.0f64;
    let mut beta_worst = 0.0f64;
    let mut beta_strict = true;
    for n in 1..=200u32 {
        let m = 6 * n + 1;
        let r = r_max(n);
        let err = (base_angle_theta(r, m) - PI / 3.0).abs();
        let strict = base_angle_theta(0.999 * r, m) > PI / 3.0 && base_angle_theta(1.001 * r, m) < PI / 3.0;
        if (err > 1e-9 || !strict) && first_bad.is_none() {
            first_bad = Some((n, base_angle_theta(r, m)));
        }
        worst = worst.max(err);
        let phi = TAU * f64::from(n) / f64::from(m);
        beta_worst = beta_worst.max((chord_angle_beta(r, phi) - PI / 3.0).abs());
        beta_strict &= chord_angle_beta(0.999 * r, phi) > PI / 3.0 && chord_angle_beta(1.001 * r, phi) < PI / 3.0;
    }
    let beta_note = format!(
        "chord angle of the length-n diagonal at r_max(n) is π/3 within {beta_worst:.1e} (strict transition: {beta_strict})"
    );
    match first_bad {
        None => outcome(true, format!("θ(r_max(n), 6n+1) = π/3 within {worst:.1e}; {beta_note}")),
        Some((n, theta)) => outcome(
            false,
            format!(
                "θ(r_max(n), 6n+1) = π/3 holds only at n = 1; n = {n} gives θ = {theta:.9}, worst error {worst:.3}; {beta_note}"
            ),
        ),
    }
}

fn lemma() -> Outcome {
    let start = Instant::now();
    let mut low = f64::INFINITY;
    let mut bad = Vec::new();
    for n in 6..=60 {
        let angle = euclidean_min_internal_angle(n);
        let c = euclidean_min_internal_angle_config(n);
        low = low.min(angle);
        if angle <= TAU / 3.0 || !c.shared_endpoint || c.lengths != (n / 6, n / 6) {
            bad.push(n);
        }
    }
    let elapsed = start.elapsed();
    outcome(
        bad.is_empty() && elapsed < Duration::from_secs(10),
        format!("min angle over n ∈ [6, 60] = {low:.6} > 2π/3, bad n: {bad:?}, {}", secs(elapsed)),
    )
}

fn lemma_transfer() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let mut min_beta = f64::INFINITY;
    let mut max_err = 0.0f64;
    for _ in 0..200 {
        let n = rng.gen_range(1..=20u32);
        let k = rng.gen_range(1..=n);
        let g = rng.gen_range(6 * n + 1..=6 * n + 30);
        let r = rng.gen_range(0.05..0.999) * r_max(n);
        let phi = |j: u32| TAU * f64::from(j) / f64::from(g);
        min_beta = min_beta.min(chord_angle_beta(r, phi(k)) - PI / 3.0);
        let e = embed_polygon(g as usize, r);
        let v = &e.vertices;
        let corner = angle_at(v[0], v[1], v[g as usize - 1]);
        max_err = max_err.max((corner - 2.0 * base_angle_theta(r, g)).abs());
        if k >= 2 {
            let measured = angle_at(v[0], v[1], v[k as usize]);
            max_err = max_err.max((measured - (chord_angle_beta(r, phi(1)) - chord_angle_beta(r, phi(k)))).abs());
        }
        let radial = angle_at(v[0], e.center, v[k as usize]);
        max_err = max_err.max((radial - chord_angle_beta(r, phi(k))).abs());
    }
    outcome(
        min_beta > 0.0 && max_err < 1e-6,
        format!("min β − π/3 = {min_beta:.4}, max embedding error {max_err:.1e}"),
    )
}

fn piece_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(555);
    let (mut checked, mut disagreements) = (0, 0);
    while checked < 500 {
        let Some(p) = common::random_presentation(&mut rng, 200) else {
            continue;
        };
        let mut fast: Vec<_> = enumerate_pieces(&p).into_iter().map(|x| (x.word, x.occurrences)).collect();
        fast.sort();
        if fast != common::brute_force_pieces(&p) {
            disagreements += 1;
        }
        checked += 1;
    }
    outcome(disagreements == 0, format!("{checked} presentations, {disagreements} disagreements"))
}

fn girth_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(666);
    let mut disagreements = 0;
    for _ in 0..1000 {
        let g = common::random_multigraph(&mut rng);
        let (a, b) = (girth(&g).length, common::brute_force_girth(&g));
        let same = (a.is_infinite() && b.is_infinite()) || (a - b).abs() <= 1e-9 * b.max(1.0);
        if !same {
            disagreements += 1;
        }
    }
    outcome(disagreements == 0, format!("1000 multigraphs, {disagreements} disagreements"))
}

fn end_to_end() -> Outcome {
    let mut gate = 0;
    let mut total = 0;
    let mut failures = Vec::new();
    for l in [14, 20] {
        let dp = DensityParams {
            m: 2,
            l,
            d: 0.05,
            seed: 7,
            samples: 300,
        };
        for s in run_samples(&dp, Some(&CertifyOptions::default())) {
            total += 1;
            if !s.passes_uniform {
                continue;
            }
            gate += 1;
            let ok = matches!(s.verdict, Some(Verdict::Certified))
                && s.type1_margin.is_some_and(|m| m > 0.0)
                && s.min_central_path.is_some_and(|c| c > TAU / 3.0)
                && s.min_type2_margin.is_none_or(|m| m >= -1e-9);
            if !ok {
                failures.push((l, s.index));
            }
        }
    }
    let detail = if gate == 0 {
        format!("{total} samples, none pass the uniform gate; holds vacuously")
    } else {
        format!("{total} samples, {gate} pass the gate, refused after the gate: {failures:?}")
    };
    outcome(failures.is_empty(), detail)
}

fn negative_controls() -> Outcome {
    let opts = CertifyOptions::default();
    let power = parse_presentation("generators: a b\nrelator: a b a b a b\n").unwrap();
    let power_ok = matches!(
        certify(&power, &opts).verdict,
        Verdict::Refused(Refusal::Condition { ref reason }) if reason.contains("proper power")
    );
    let dup = parse_presentation(
        "generators: a b c d\nrelator: a b a- b- c d c- d-\nrelator: c d c- d- a b a- b-\n",
    )
    .unwrap();
    let dup_ok = dup.relators.len() == 1 && certify(&dup, &opts).verdict.is_certified();
    // g = 12 and the shared subword "a b" has length exactly g/6.
    let strict = parse_presentation(
        "generators: a b c d e f g h i j k l m n o p q r s t u v\n\
         relator: a b c d e f g h i j k l\n\
         relator: a b m n o p q r s t u v\n",
    )
    .unwrap();
    let rep = check_conditions(&strict);
    let strict_ok = rep.max_piece_length == 2
        && rep.g == 12
        && matches!(certify(&strict, &opts).verdict, Verdict::Refused(Refusal::Condition { .. }));
    outcome(
        power_ok && dup_ok && strict_ok,
        format!("proper power refused: {power_ok}, duplicate normalized and certified: {dup_ok}, piece of length g/6 refused: {strict_ok}"),
    )
}

fn corollary_trend() -> Outcome {
    let start = Instant::now();
    let rate = |l: usize, d: f64| {
        let dp = DensityParams {
            m: 2,
            l,
            d,
            seed: 2,
            samples: 200,
        };
        let out = run_samples(&dp, None);
        out.iter().filter(|s| s.passes_uniform).count() as f64 / out.len() as f64
    };
    let rates: Vec<f64> = [16, 20, 24].iter().map(|&l| rate(l, 0.05)).collect();
    let dense = rate(24, 0.3);
    let elapsed = start.elapsed();
    let monotone = rates.windows(2).all(|w| w[0] <= w[1]);
    outcome(
        monotone && dense < 0.05 && elapsed < Duration::from_secs(300),
        format!(
            "uniform pass rates at d=0.05, l=16/20/24: {:.3}/{:.3}/{:.3}; at d=0.3, l=24: {dense:.3}; {}",
            rates[0],
            rates[1],
            rates[2],
            secs(elapsed)
        ),
    )
}

fn area() -> Outcome {
    let p = parse_presentation("generators: a b c d\nrelator: a b a- b- c d c- d-\n").unwrap();
    let mp = choose_radius(&check_conditions(&p), 0.9).unwrap();
    let est = area_estimate(&p, &mp);
    let r1 = ((PI / 7.0).cos() / (PI / 7.0).sin() / 3f64.sqrt()).acosh();
    let r = 0.9 * r1;
    let (total, g) = (8.0, 8.0);
    let hand = total / g * PI * r * r;
    let discs = build_discs(&p, &mp);
    let approx_ok = (est.approx_area - hand).abs() < 1e-9 && discs.len() == 1;
    let formula_ok = (est.formula_area - 1.22).abs() <= 0.02 && est.formula_n == 1;
    outcome(
        approx_ok && formula_ok,
        format!(
            "approx_area = {:.12} (hand {hand:.12}), formula_area = {:.4}",
            est.approx_area, est.formula_area
        ),
    )
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("r_max table", rmax_table),
        ("radius fixed point", proposition),
        ("Euclidean angle sweep", lemma),
        ("hyperbolic angle bound", lemma_transfer),
        ("piece oracle equivalence", piece_oracle),
        ("girth oracle equivalence", girth_oracle),
        ("end-to-end consistency", end_to_end),
        ("negative controls", negative_controls),
        ("density trend", corollary_trend),
        ("area estimate", area),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {tag}: {name}: {}", i + 1, o.detail);
        failed += usize::from(!o.pass);
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
