//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.
//!
//! Set `SPECDIM_ZEROS_FILE` to a level file of at least 10⁴ consecutive
//! Riemann-zero ordinates to run the optional part of criterion 6.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use specdim::boxcount::{averaged_box_count, count_boxes, empirical_dimension, empirical_gap_probability, SlopeConfig};
use specdim::spectra::{decimate, goe_spectrum, ingest_levels, renewal_spectrum, rescale_to_unit_mean, unfold_semicircle, Parity, Spectrum};
use specdim::theory::{closed_form, dimension_transform, find_crossing, gap_probability, QuadratureConfig};
use specdim::{DimensionCurve, Result, RngSeed, SpacingModel};

const SEED_POISSON: u64 = 20_001;
const SEED_GOE_SURMISE: u64 = 20_002;
const SEED_GOE_MATRIX: u64 = 20_003;
const SEED_GUE_SURMISE: u64 = 20_004;
const SEED_PROPERTIES: u64 = 20_005;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { pass, detail })
}

/// Largest |D_b − closed form| over the grid points with r/s̄ in `range`.
fn worst_deviation(curve: &DimensionCurve, model: &SpacingModel, range: (f64, f64)) -> Result<(f64, f64)> {
    let mut worst = (0.0, f64::NAN);
    for p in curve.points() {
        if p.r_over_sbar < range.0 || p.r_over_sbar > range.1 {
            continue;
        }
        let dev = (p.d_b - closed_form(model, p.r_over_sbar)?).abs();
        if dev > worst.0 {
            worst = (dev, p.r_over_sbar);
        }
    }
    Ok(worst)
}

fn analyze_against(spectrum: &Spectrum, model: &SpacingModel, range: (f64, f64), tol: f64) -> Result<Outcome> {
    let (_, dims) = empirical_dimension(spectrum, &SlopeConfig::default())?;
    let (dev, at) = worst_deviation(&dims, model, range)?;
    outcome(
        dev <= tol,
        format!("n={} max |dev| {dev:.4} at r/s̄={at:.3} (tol {tol})", spectrum.len()),
    )
}

fn criterion_1() -> Result<Outcome> {
    let q = QuadratureConfig::default();
    let grid: Vec<f64> = (0..200).map(|i| 0.01 * 500f64.powf(i as f64 / 199.0)).collect();
    let mut worst: f64 = 0.0;
    for model in [
        SpacingModel::poisson(1.0)?,
        SpacingModel::goe(1.0)?,
        SpacingModel::gue(1.0)?,
        SpacingModel::gse(1.0)?,
    ] {
        for &x in &grid {
            worst = worst.max((dimension_transform(&model, x, &q)? - closed_form(&model, x)?).abs());
        }
    }
    outcome(worst <= 1e-8, format!("max |transform − closed form| {worst:.2e} over 4 × 200 points"))
}

fn poisson_spectrum() -> Result<Spectrum> {
    renewal_spectrum(&SpacingModel::poisson(1.0)?, 100_000, RngSeed(SEED_POISSON))
}

fn goe_surmise_spectrum() -> Result<Spectrum> {
    renewal_spectrum(&SpacingModel::goe(1.0)?, 100_000, RngSeed(SEED_GOE_SURMISE))
}

fn decimated_goe_spectrum() -> Result<Spectrum> {
    let raw = goe_spectrum(20_000, RngSeed(SEED_GOE_MATRIX))?;
    let unfolded = unfold_semicircle(&raw, 0.05)?;
    rescale_to_unit_mean(&decimate(&unfolded, Parity::Even)?)
}

fn criterion_2() -> Result<Outcome> {
    analyze_against(&poisson_spectrum()?, &SpacingModel::poisson(1.0)?, (0.05, 3.0), 0.02)
}

fn criterion_3() -> Result<Outcome> {
    analyze_against(&goe_surmise_spectrum()?, &SpacingModel::goe(1.0)?, (0.05, 3.0), 0.02)
}

fn criterion_4() -> Result<Outcome> {
    let r = find_crossing(&SpacingModel::poisson(1.0)?, &SpacingModel::goe(1.0)?, (0.1, 1.0))?;
    outcome((r - 1.0).abs() > 0.01, format!("r*/s̄ = {r:.10}, |r*/s̄ − 1| = {:.4}", (r - 1.0).abs()))
}

fn criterion_5() -> Result<Outcome> {
    analyze_against(&decimated_goe_spectrum()?, &SpacingModel::gse(1.0)?, (0.1, 3.0), 0.03)
}

fn criterion_6() -> Result<Outcome> {
    let gue = SpacingModel::gue(1.0)?;
    let surrogate = renewal_spectrum(&gue, 10_000, RngSeed(SEED_GUE_SURMISE))?;
    let mut result = analyze_against(&surrogate, &gue, (0.1, 3.0), 0.03)?;
    result.detail = format!("GUE surmise {}", result.detail);
    match std::env::var_os("SPECDIM_ZEROS_FILE") {
        Some(path) => {
            let zeros = rescale_to_unit_mean(&ingest_levels(&PathBuf::from(path))?)?;
            if zeros.len() < 10_000 {
                result.pass = false;
                result.detail.push_str(&format!("; zeros file has only {} levels", zeros.len()));
            } else {
                let z = analyze_against(&zeros, &gue, (0.1, 3.0), 0.03)?;
                result.pass &= z.pass;
                result.detail.push_str(&format!("; zeros {}", z.detail));
            }
        }
        None => result.detail.push_str("; no zeros file supplied"),
    }
    Ok(result)
}

/// Levels, window and shifts on a 2⁻¹⁰ grid, so translations and
/// power-of-two scalings are exact in floating point.
fn random_spectrum(rng: &mut ChaCha8Rng) -> Spectrum {
    let tick = 1.0 / 1024.0;
    let n = rng.random_range(1..200);
    let mut x = rng.random_range(-50_000i64..50_000) as f64 * tick;
    let mut levels = Vec::with_capacity(n);
    for _ in 0..n {
        levels.push(x);
        x += rng.random_range(10i64..3000) as f64 * tick;
    }
    let lo = levels[0] - rng.random_range(0i64..2000) as f64 * tick;
    let hi = levels[n - 1] + rng.random_range(0i64..2000) as f64 * tick;
    Spectrum::with_window(levels, lo, hi, "random").unwrap()
}

fn criterion_7() -> Result<Outcome> {
    let q = QuadratureConfig::default();
    let mut failures = Vec::new();
    let models = [
        SpacingModel::poisson(1.0)?,
        SpacingModel::goe(1.0)?,
        SpacingModel::gue(1.0)?,
        SpacingModel::gse(1.0)?,
    ];

    for m in &models {
        let small = closed_form(m, 1e-6)?;
        let large = closed_form(m, 50.0)?;
        if !(small >= 0.0 && small < 1e-5) || (1.0 - large).abs() > 1e-6 {
            failures.push(format!("{} limits: D(1e-6)={small:e}, D(50)={large}", m.kind().name()));
        }
        let h = 1e-4;
        for i in 1..=60 {
            let r = 0.05 * i as f64;
            let fd = (gap_probability(m, r + h, &q)? - gap_probability(m, r - h, &q)?) / (2.0 * h);
            let exact = -m.survival(r) / m.mean_spacing();
            if (fd - exact).abs() > 1e-6 {
                failures.push(format!("{} dE/dr at r={r}: {fd} vs {exact}", m.kind().name()));
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(SEED_PROPERTIES);
    for case in 0..1000 {
        let s = random_spectrum(&mut rng);
        let r: f64 = rng.random_range(0.05..10.0);
        let k = rng.random_range(2..6) as f64;
        let n1 = count_boxes(&s, r)?;
        if count_boxes(&s, k * r)? > n1 {
            failures.push(format!("case {case}: N({}) > N({r})", k * r));
        }
        if averaged_box_count(&s, k * r)? > averaged_box_count(&s, r)? {
            failures.push(format!("case {case}: averaged count increased"));
        }
        let shift = rng.random_range(-100_000i64..100_000) as f64 / 1024.0;
        let shifted = Spectrum::with_window(
            s.levels().iter().map(|x| x + shift).collect(),
            s.e_min() + shift,
            s.e_max() + shift,
            "shifted",
        )?;
        if count_boxes(&shifted, r)? != n1 {
            failures.push(format!("case {case}: translation by {shift} changed N"));
        }
        let lambda = 2f64.powi(rng.random_range(-3..4));
        let scaled = Spectrum::with_window(
            s.levels().iter().map(|x| x * lambda).collect(),
            s.e_min() * lambda,
            s.e_max() * lambda,
            "scaled",
        )?;
        if count_boxes(&scaled, r * lambda)? != n1 {
            failures.push(format!("case {case}: scaling by {lambda} changed N"));
        }
        let length = s.window_length();
        let q_occ = r / length * n1 as f64;
        if q_occ <= 1.0 && q_occ + empirical_gap_probability(&s, r)? != 1.0 {
            failures.push(format!("case {case}: (r/L)N + E_emp != 1"));
        }
    }

    let detail = if failures.is_empty() {
        "limits, dE/dr to 1e-6, 1000 random box-count cases".to_string()
    } else {
        format!("{} failures, first: {}", failures.len(), failures[0])
    };
    outcome(failures.is_empty(), detail)
}

fn csvs(spectrum: &Spectrum) -> Result<(String, String)> {
    let (counts, dims) = empirical_dimension(spectrum, &SlopeConfig::default())?;
    Ok((counts.to_csv(), dims.to_csv()))
}

fn criterion_8() -> Result<Outcome> {
    let builders: [(&str, fn() -> Result<Spectrum>); 3] = [
        ("poisson", poisson_spectrum),
        ("goe surmise", goe_surmise_spectrum),
        ("decimated goe", decimated_goe_spectrum),
    ];
    let mut mismatched = Vec::new();
    for (name, build) in builders {
        if csvs(&build()?)? != csvs(&build()?)? {
            mismatched.push(name);
        }
    }
    let detail = if mismatched.is_empty() {
        "box-count and dimension CSVs byte-identical across two runs of criteria 2, 3, 5".to_string()
    } else {
        format!("CSV mismatch for {}", mismatched.join(", "))
    };
    outcome(mismatched.is_empty(), detail)
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Result<Outcome>); 8] = [
        ("closed form equals quadrature transform", criterion_1),
        ("Poisson renewal n=1e5 vs closed form", criterion_2),
        ("GOE surmise renewal n=1e5 vs closed form", criterion_3),
        ("Poisson/GOE crossing away from r = s̄", criterion_4),
        ("decimated GOE matrix vs GSE closed form", criterion_5),
        ("GUE spectrum vs closed form", criterion_6),
        ("property suites", criterion_7),
        ("determinism", criterion_8),
    ];
    let mut all = true;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (pass, detail) = match run() {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        all &= pass;
        println!(
            "criterion {}: {} {name}: {detail} [{:.1}s]",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
