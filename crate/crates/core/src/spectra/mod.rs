//! Level sequences: construction, generation and preprocessing.

pub mod io;
pub mod tridiag;

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{ChiSquared, StandardNormal};

use crate::error::{Error, Result};
use crate::nnsd::{RngSeed, SpacingModel};

pub use io::{format_levels, ingest_levels, parse_levels, write_levels};

/// A finite, strictly increasing sequence of levels observed on the window
/// `[e_min, e_max]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    levels: Vec<f64>,
    e_min: f64,
    e_max: f64,
    label: String,
}

impl Spectrum {
    /// Spectrum whose window is `[first level, last level]`.
    pub fn new(levels: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        let (lo, hi) = match (levels.first(), levels.last()) {
            (Some(&lo), Some(&hi)) => (lo, hi),
            _ => return Err(Error::InvalidSpectrum("no levels".into())),
        };
        Self::with_window(levels, lo, hi, label)
    }

    pub fn with_window(
        levels: Vec<f64>,
        e_min: f64,
        e_max: f64,
        label: impl Into<String>,
    ) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::InvalidSpectrum("no levels".into()));
        }
        if let Some(bad) = levels.iter().find(|x| !x.is_finite()) {
            return Err(Error::InvalidSpectrum(format!("non-finite level {bad}")));
        }
        if let Some(i) = levels.windows(2).position(|w| w[0] >= w[1]) {
            let kind = if levels[i] == levels[i + 1] { "duplicate" } else { "unsorted" };
            return Err(Error::InvalidSpectrum(format!(
                "{kind} levels at index {i}: {} then {}",
                levels[i],
                levels[i + 1]
            )));
        }
        if !(e_min <= levels[0] && levels[levels.len() - 1] <= e_max) {
            return Err(Error::InvalidSpectrum(format!(
                "window [{e_min}, {e_max}] does not contain all levels"
            )));
        }
        Ok(Self { levels, e_min, e_max, label: label.into() })
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn e_min(&self) -> f64 {
        self.e_min
    }

    pub fn e_max(&self) -> f64 {
        self.e_max
    }

    /// Window length `L = e_max − e_min`.
    pub fn window_length(&self) -> f64 {
        self.e_max - self.e_min
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// `(last − first)/(n − 1)`.
    pub fn mean_spacing(&self) -> Result<f64> {
        let n = self.levels.len();
        if n < 2 {
            return Err(Error::NoSpacings(n));
        }
        Ok((self.levels[n - 1] - self.levels[0]) / (n - 1) as f64)
    }

    pub fn spacings(&self) -> impl Iterator<Item = f64> + '_ {
        self.levels.windows(2).map(|w| w[1] - w[0])
    }
}

/// Levels at the partial sums of i.i.d. spacings drawn from `model`,
/// starting at 0.
pub fn renewal_spectrum(model: &SpacingModel, n: usize, seed: RngSeed) -> Result<Spectrum> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("need at least 2 levels, got {n}")));
    }
    let spacings = model.sample_spacings(n - 1, seed)?;
    let mut levels = Vec::with_capacity(n);
    let mut x = 0.0;
    levels.push(x);
    for s in spacings {
        x += s;
        levels.push(x);
    }
    Spectrum::new(levels, format!("renewal-{}-n{n}-seed{}", model.kind().name(), seed.0))
}

/// Diagonal and off-diagonal of a β = 1 Hermite-ensemble tridiagonal
/// matrix, whose eigenvalues are distributed as those of an `n × n` GOE
/// matrix with unit diagonal variance: diagonal `N(0, 1)`, off-diagonal
/// `χ_{n−1}, …, χ_1` scaled by `1/√2`.
pub fn goe_tridiagonal(n: usize, seed: RngSeed) -> Result<(Vec<f64>, Vec<f64>)> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("need at least 2 levels, got {n}")));
    }
    let mut rng = seed.rng();
    let diagonal: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
    let off_diagonal = (1..n)
        .rev()
        .map(|dof| {
            let chi2 = ChiSquared::new(dof as f64)
                .map_err(|e| Error::InvalidParameter(format!("chi-squared({dof}): {e}")))?;
            Ok((rng.sample(chi2) / 2.0).sqrt())
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok((diagonal, off_diagonal))
}

/// Eigenvalues of an `n`-level GOE matrix, sorted ascending. The semicircle
/// radius is `√(2n)`.
pub fn goe_spectrum(n: usize, seed: RngSeed) -> Result<Spectrum> {
    let (d, e) = goe_tridiagonal(n, seed)?;
    let eigenvalues = tridiag::eigenvalues_ql(&d, &e)?;
    Spectrum::new(eigenvalues, format!("goe-n{n}-seed{}", seed.0))
}

/// Semicircle radius of [`goe_spectrum`] at size `n`.
pub fn goe_semicircle_radius(n: usize) -> f64 {
    (2.0 * n as f64).sqrt()
}

/// Expected number of semicircle-distributed levels below `e`, for `n`
/// levels on `[−radius, radius]`.
pub fn semicircle_counting(e: f64, n: usize, radius: f64) -> f64 {
    let t = (e / radius).clamp(-1.0, 1.0);
    n as f64 * (0.5 + (t * (1.0 - t * t).sqrt() + t.asin()) / PI)
}

/// Unfolds with an arbitrary mean counting function: drops
/// `floor(trim_fraction·n)` levels at each edge, maps the rest through
/// `counting`, and rescales to unit mean spacing.
pub fn unfold<F: Fn(f64) -> f64>(
    spectrum: &Spectrum,
    trim_fraction: f64,
    counting: F,
) -> Result<Spectrum> {
    if !(0.0..=0.25).contains(&trim_fraction) {
        return Err(Error::InvalidParameter(format!(
            "trim fraction must be in [0, 0.25], got {trim_fraction}"
        )));
    }
    let n = spectrum.len();
    let cut = (trim_fraction * n as f64).floor() as usize;
    let kept = &spectrum.levels()[cut..n.saturating_sub(cut).max(cut)];
    if kept.len() < 2 {
        return Err(Error::InvalidSpectrum(format!(
            "trimming {cut} levels per edge leaves {} of {n}",
            kept.len()
        )));
    }
    let mapped: Vec<f64> = kept.iter().map(|&e| counting(e)).collect();
    let unfolded = Spectrum::new(mapped, format!("{}+unfolded", spectrum.label()))
        .map_err(|e| Error::InvalidSpectrum(format!("unfolding is not strictly monotone here: {e}")))?;
    rescale_to_unit_mean(&unfolded)
}

/// Unfolds a [`goe_spectrum`] output with the integrated semicircle law of
/// radius `√(2n)`. The semicircle is centred on the mean level, so spectra
/// that were shifted (for example by writing and re-reading a level file)
/// unfold the same way.
pub fn unfold_semicircle(spectrum: &Spectrum, trim_fraction: f64) -> Result<Spectrum> {
    let n = spectrum.len();
    let radius = goe_semicircle_radius(n);
    let center = spectrum.levels().iter().sum::<f64>() / n as f64;
    unfold(spectrum, trim_fraction, |e| semicircle_counting(e - center, n, radius))
}

/// Which alternate levels [`decimate`] keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// Keeps every other level, starting at index 0 (`Even`) or 1 (`Odd`). The
/// window shrinks to the surviving levels.
pub fn decimate(spectrum: &Spectrum, parity: Parity) -> Result<Spectrum> {
    if spectrum.len() < 4 {
        return Err(Error::InvalidParameter(format!(
            "decimation needs at least 4 levels, got {}",
            spectrum.len()
        )));
    }
    let start = match parity {
        Parity::Even => 0,
        Parity::Odd => 1,
    };
    let kept: Vec<f64> = spectrum.levels().iter().skip(start).step_by(2).copied().collect();
    let tag = match parity {
        Parity::Even => "even",
        Parity::Odd => "odd",
    };
    Spectrum::new(kept, format!("{}+{tag}", spectrum.label()))
}

/// Affine map sending the first level to 0 and the mean spacing to exactly
/// 1 (the last level lands on `n − 1`). The window is mapped with it.
pub fn rescale_to_unit_mean(spectrum: &Spectrum) -> Result<Spectrum> {
    let n = spectrum.len();
    let levels = spectrum.levels();
    let sbar = spectrum.mean_spacing()?;
    let origin = levels[0];
    if sbar == 1.0 && origin == 0.0 {
        return Ok(spectrum.clone());
    }
    let scale = (n - 1) as f64 / (levels[n - 1] - origin);
    let mut mapped: Vec<f64> = levels.iter().map(|&x| (x - origin) * scale).collect();
    mapped[n - 1] = (n - 1) as f64;
    let e_min = ((spectrum.e_min() - origin) * scale).min(0.0);
    let e_max = ((spectrum.e_max() - origin) * scale).max((n - 1) as f64);
    Spectrum::with_window(mapped, e_min, e_max, spectrum.label())
}
