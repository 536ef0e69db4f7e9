//! Nearest-neighbor spacing distributions.
//!
//! Every built-in model is parameterized by its mean spacing `s̄` and is a
//! rescaling of a unit-mean density: `P(s; s̄) = P₁(s/s̄)/s̄`. The Wigner
//! surmises share the form `A x^β exp(-a x²)` with `x = s/s̄`.

use std::f64::consts::PI;
use std::path::Path;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Open01, StandardNormal};

use crate::error::{Error, Result};
use crate::special::erfc;
use crate::spectra::Spectrum;

/// Seed for every randomized operation. Streams are ChaCha8 keyed by the seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngSeed(pub u64);

impl RngSeed {
    pub(crate) fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }
}

impl From<u64> for RngSeed {
    fn from(seed: u64) -> Self {
        RngSeed(seed)
    }
}

/// Gaussian ensemble symmetry class of a Wigner surmise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ensemble {
    Goe,
    Gue,
    Gse,
}

impl Ensemble {
    pub fn beta(self) -> u32 {
        match self {
            Ensemble::Goe => 1,
            Ensemble::Gue => 2,
            Ensemble::Gse => 4,
        }
    }

    /// Prefactor `A` of the unit-mean surmise.
    fn prefactor(self) -> f64 {
        match self {
            Ensemble::Goe => PI / 2.0,
            Ensemble::Gue => 32.0 / (PI * PI),
            Ensemble::Gse => 262_144.0 / (729.0 * PI * PI * PI),
        }
    }

    /// Gaussian exponent `a` of the unit-mean surmise.
    fn exponent(self) -> f64 {
        match self {
            Ensemble::Goe => PI / 4.0,
            Ensemble::Gue => 4.0 / PI,
            Ensemble::Gse => 64.0 / (9.0 * PI),
        }
    }

    fn density_unit(self, x: f64) -> f64 {
        self.prefactor() * x.powi(self.beta() as i32) * (-self.exponent() * x * x).exp()
    }

    fn survival_unit(self, x: f64) -> f64 {
        let a = self.exponent();
        let g = (-a * x * x).exp();
        match self {
            Ensemble::Goe => g,
            Ensemble::Gue => erfc(2.0 * x / PI.sqrt()) + 4.0 / PI * x * g,
            Ensemble::Gse => {
                erfc(8.0 * x / (3.0 * PI.sqrt()))
                    + (16.0 / (3.0 * PI) * x + 2048.0 / (81.0 * PI * PI) * x * x * x) * g
            }
        }
    }

    fn cdf_unit(self, x: f64) -> f64 {
        match self {
            Ensemble::Goe => -(-self.exponent() * x * x).exp_m1(),
            _ => 1.0 - self.survival_unit(x),
        }
    }
}

/// Discriminant of a [`SpacingModel`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpacingKind {
    Poisson,
    WignerGoe,
    WignerGue,
    WignerGse,
    EqualSpacing,
    Tabulated,
}

impl SpacingKind {
    pub fn name(self) -> &'static str {
        match self {
            SpacingKind::Poisson => "poisson",
            SpacingKind::WignerGoe => "goe",
            SpacingKind::WignerGue => "gue",
            SpacingKind::WignerGse => "gse",
            SpacingKind::EqualSpacing => "equal",
            SpacingKind::Tabulated => "tabulated",
        }
    }
}

/// Piecewise-constant density on bins `[edges[j], edges[j+1])`, with the
/// CDF linear inside each bin.
#[derive(Debug, Clone, PartialEq)]
pub struct SpacingTable {
    edges: Vec<f64>,
    density: Vec<f64>,
    cdf: Vec<f64>,
}

impl SpacingTable {
    /// Builds a table from bin edges and (unnormalized) bin heights.
    pub fn from_bins(edges: Vec<f64>, heights: Vec<f64>) -> Result<Self> {
        if edges.len() < 2 || heights.len() + 1 != edges.len() {
            return Err(Error::InvalidTable(format!(
                "{} edges for {} bins",
                edges.len(),
                heights.len()
            )));
        }
        if edges[0] < 0.0 || edges.iter().any(|e| !e.is_finite()) {
            return Err(Error::InvalidTable("edges must be finite and non-negative".into()));
        }
        if edges.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidTable("edges must be strictly increasing".into()));
        }
        if heights.iter().any(|h| !(h.is_finite() && *h >= 0.0)) {
            return Err(Error::InvalidTable("densities must be finite and non-negative".into()));
        }
        let mass: f64 =
            heights.iter().zip(edges.windows(2)).map(|(h, w)| h * (w[1] - w[0])).sum();
        if !(mass > 0.0) {
            return Err(Error::InvalidTable("table has zero total mass".into()));
        }
        let density: Vec<f64> = heights.iter().map(|h| h / mass).collect();
        Ok(Self::with_density(edges, density))
    }

    fn with_density(edges: Vec<f64>, density: Vec<f64>) -> Self {
        let mut cdf = Vec::with_capacity(edges.len());
        cdf.push(0.0);
        let mut acc = 0.0;
        for (p, w) in density.iter().zip(edges.windows(2)) {
            acc += p * (w[1] - w[0]);
            cdf.push(acc);
        }
        // Pin the top so the CDF reaches 1 exactly.
        if let Some(last) = cdf.last_mut() {
            *last = 1.0;
        }
        Self { edges, density, cdf }
    }

    /// Builds bins around sampled points `(s, P(s))`: bin boundaries sit at
    /// midpoints between neighbors, and the outer bins are mirrored (the
    /// first one clipped at 0). Uniform bin centers reproduce their bins.
    pub fn from_points(points: &[(f64, f64)]) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidTable(format!(
                "need at least 2 points, got {}",
                points.len()
            )));
        }
        if points.windows(2).any(|w| !(w[0].0 < w[1].0)) {
            return Err(Error::InvalidTable("s values must be strictly ascending".into()));
        }
        let n = points.len();
        let mut edges = Vec::with_capacity(n + 1);
        edges.push((points[0].0 - 0.5 * (points[1].0 - points[0].0)).max(0.0));
        for w in points.windows(2) {
            edges.push(0.5 * (w[0].0 + w[1].0));
        }
        edges.push(points[n - 1].0 + 0.5 * (points[n - 1].0 - points[n - 2].0));
        Self::from_bins(edges, points.iter().map(|p| p.1).collect())
    }

    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    pub fn density_values(&self) -> &[f64] {
        &self.density
    }

    pub fn range(&self) -> (f64, f64) {
        (self.edges[0], self.edges[self.edges.len() - 1])
    }

    /// Mean of the tabulated density.
    pub fn mean(&self) -> f64 {
        self.density
            .iter()
            .zip(self.edges.windows(2))
            .map(|(p, w)| 0.5 * p * (w[1] * w[1] - w[0] * w[0]))
            .sum()
    }

    fn bin_of(&self, s: f64) -> usize {
        let m = self.density.len();
        match self.edges.partition_point(|&e| e <= s) {
            0 => 0,
            k => (k - 1).min(m - 1),
        }
    }

    fn density(&self, s: f64) -> Result<f64> {
        let (lo, hi) = self.range();
        if !(lo..=hi).contains(&s) {
            return Err(Error::Extrapolation { s, lo, hi });
        }
        Ok(self.density[self.bin_of(s)])
    }

    fn cdf(&self, x: f64) -> f64 {
        let (lo, hi) = self.range();
        if x <= lo {
            return 0.0;
        }
        if x >= hi {
            return 1.0;
        }
        let j = self.bin_of(x);
        let t = (x - self.edges[j]) / (self.edges[j + 1] - self.edges[j]);
        self.cdf[j] + t * (self.cdf[j + 1] - self.cdf[j])
    }

    fn inverse_cdf(&self, u: f64) -> Result<f64> {
        if self.cdf.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::CannotInvertCdf("tabulated CDF is not monotone".into()));
        }
        let k = self.cdf.partition_point(|&c| c <= u).clamp(1, self.cdf.len() - 1);
        let (c0, c1) = (self.cdf[k - 1], self.cdf[k]);
        let (e0, e1) = (self.edges[k - 1], self.edges[k]);
        if c1 <= c0 {
            return Ok(e0);
        }
        Ok(e0 + (u - c0) / (c1 - c0) * (e1 - e0))
    }

    /// Two-column `s P(s)` text with bin centers.
    pub fn to_text(&self) -> String {
        let mut out = String::from("# s P(s)\n");
        for (p, w) in self.density.iter().zip(self.edges.windows(2)) {
            out.push_str(&format!("{:.16e} {:.16e}\n", 0.5 * (w[0] + w[1]), p));
        }
        out
    }
}

/// A nearest-neighbor spacing distribution `P(s)` with mean spacing `s̄`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpacingModel {
    kind: SpacingKind,
    mean_spacing: f64,
    table: Option<Arc<SpacingTable>>,
}

fn check_mean(mean: f64) -> Result<f64> {
    if mean.is_finite() && mean > 0.0 {
        Ok(mean)
    } else {
        Err(Error::InvalidParameter(format!("mean spacing must be positive, got {mean}")))
    }
}

impl SpacingModel {
    pub fn poisson(mean: f64) -> Result<Self> {
        Ok(Self { kind: SpacingKind::Poisson, mean_spacing: check_mean(mean)?, table: None })
    }

    pub fn wigner(ensemble: Ensemble, mean: f64) -> Result<Self> {
        let kind = match ensemble {
            Ensemble::Goe => SpacingKind::WignerGoe,
            Ensemble::Gue => SpacingKind::WignerGue,
            Ensemble::Gse => SpacingKind::WignerGse,
        };
        Ok(Self { kind, mean_spacing: check_mean(mean)?, table: None })
    }

    pub fn goe(mean: f64) -> Result<Self> {
        Self::wigner(Ensemble::Goe, mean)
    }

    pub fn gue(mean: f64) -> Result<Self> {
        Self::wigner(Ensemble::Gue, mean)
    }

    pub fn gse(mean: f64) -> Result<Self> {
        Self::wigner(Ensemble::Gse, mean)
    }

    pub fn equal_spacing(mean: f64) -> Result<Self> {
        Ok(Self { kind: SpacingKind::EqualSpacing, mean_spacing: check_mean(mean)?, table: None })
    }

    /// Tabulated model with an explicit mean spacing (e.g. a sample mean).
    pub fn tabulated(table: SpacingTable, mean: f64) -> Result<Self> {
        Ok(Self {
            kind: SpacingKind::Tabulated,
            mean_spacing: check_mean(mean)?,
            table: Some(Arc::new(table)),
        })
    }

    /// Tabulated model whose mean spacing is the table's own mean.
    pub fn from_table(table: SpacingTable) -> Result<Self> {
        let mean = table.mean();
        Self::tabulated(table, mean)
    }

    /// Built-in model selected by its short name.
    pub fn by_name(name: &str, mean: f64) -> Result<Self> {
        match name {
            "poisson" => Self::poisson(mean),
            "goe" => Self::goe(mean),
            "gue" => Self::gue(mean),
            "gse" => Self::gse(mean),
            "equal" => Self::equal_spacing(mean),
            other => Err(Error::InvalidParameter(format!("unknown model '{other}'"))),
        }
    }

    /// Loads a two-column `s P(s)` table file.
    pub fn load_table(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
        let mut points = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parse_err =
                || Error::Parse { path: path.display().to_string(), line: i + 1, text: line.into() };
            let mut cols = line.split_whitespace();
            let s: f64 = cols.next().and_then(|c| c.parse().ok()).ok_or_else(parse_err)?;
            let p: f64 = cols.next().and_then(|c| c.parse().ok()).ok_or_else(parse_err)?;
            if cols.next().is_some() {
                return Err(parse_err());
            }
            points.push((s, p));
        }
        if points.is_empty() {
            return Err(Error::EmptyInput(path.display().to_string()));
        }
        Self::from_table(SpacingTable::from_points(&points)?)
    }

    pub fn kind(&self) -> SpacingKind {
        self.kind
    }

    pub fn mean_spacing(&self) -> f64 {
        self.mean_spacing
    }

    pub fn table(&self) -> Option<&SpacingTable> {
        self.table.as_deref()
    }

    pub fn ensemble(&self) -> Option<Ensemble> {
        match self.kind {
            SpacingKind::WignerGoe => Some(Ensemble::Goe),
            SpacingKind::WignerGue => Some(Ensemble::Gue),
            SpacingKind::WignerGse => Some(Ensemble::Gse),
            _ => None,
        }
    }

    /// Poisson and the three Wigner surmises.
    pub fn has_closed_form_density(&self) -> bool {
        matches!(
            self.kind,
            SpacingKind::Poisson
                | SpacingKind::WignerGoe
                | SpacingKind::WignerGue
                | SpacingKind::WignerGse
        )
    }

    /// Same family with a different mean spacing. Tabulated models keep
    /// their table and only change the recorded mean.
    pub fn with_mean(&self, mean: f64) -> Result<Self> {
        Ok(Self { mean_spacing: check_mean(mean)?, ..self.clone() })
    }

    pub fn density(&self, s: f64) -> Result<f64> {
        if !(s >= 0.0) {
            return Err(Error::InvalidParameter(format!("spacing must be >= 0, got {s}")));
        }
        let sbar = self.mean_spacing;
        let x = s / sbar;
        match self.kind {
            SpacingKind::Poisson => Ok((-x).exp() / sbar),
            SpacingKind::EqualSpacing => Err(Error::PointMass { at: sbar }),
            SpacingKind::Tabulated => self.table.as_ref().expect("tabulated model").density(s),
            _ => Ok(self.ensemble().expect("wigner").density_unit(x) / sbar),
        }
    }

    /// Ψ(x): probability that a spacing is at most `x`.
    pub fn cdf(&self, x: f64) -> f64 {
        if !(x > 0.0) {
            return 0.0;
        }
        let u = x / self.mean_spacing;
        match self.kind {
            SpacingKind::Poisson => -(-u).exp_m1(),
            SpacingKind::EqualSpacing => {
                if u < 1.0 {
                    0.0
                } else {
                    1.0
                }
            }
            SpacingKind::Tabulated => self.table.as_ref().expect("tabulated model").cdf(x),
            _ => self.ensemble().expect("wigner").cdf_unit(u),
        }
    }

    /// F(x) = 1 − Ψ(x), computed directly where a closed form exists so
    /// the tail keeps relative precision.
    pub fn survival(&self, x: f64) -> f64 {
        if !(x > 0.0) {
            return 1.0;
        }
        let u = x / self.mean_spacing;
        match self.kind {
            SpacingKind::Poisson => (-u).exp(),
            SpacingKind::WignerGoe | SpacingKind::WignerGue | SpacingKind::WignerGse => {
                self.ensemble().expect("wigner").survival_unit(u)
            }
            _ => 1.0 - self.cdf(x),
        }
    }

    /// `n` independent spacings drawn from the model.
    pub fn sample_spacings(&self, n: usize, seed: RngSeed) -> Result<Vec<f64>> {
        if n == 0 {
            return Err(Error::InvalidParameter("sample count must be >= 1".into()));
        }
        let sbar = self.mean_spacing;
        let mut rng = seed.rng();
        match self.kind {
            SpacingKind::EqualSpacing => Ok(vec![sbar; n]),
            SpacingKind::Poisson => Ok((0..n)
                .map(|_| {
                    let u: f64 = rng.sample(Open01);
                    -sbar * u.ln()
                })
                .collect()),
            SpacingKind::Tabulated => {
                let table = self.table.as_ref().expect("tabulated model");
                (0..n).map(|_| table.inverse_cdf(rng.random::<f64>())).collect()
            }
            _ => {
                // The β surmise is a chi distribution with β+1 degrees of
                // freedom, rescaled: s = s̄·χ/√(2a).
                let ensemble = self.ensemble().expect("wigner");
                let dof = ensemble.beta() + 1;
                let scale = sbar / (2.0 * ensemble.exponent()).sqrt();
                Ok((0..n)
                    .map(|_| {
                        let sum_sq: f64 = (0..dof)
                            .map(|_| {
                                let z: f64 = rng.sample(StandardNormal);
                                z * z
                            })
                            .sum();
                        scale * sum_sq.sqrt()
                    })
                    .collect())
            }
        }
    }
}

pub const DEFAULT_NNSD_BINS: usize = 50;

/// Histogram estimate of a spectrum's spacing distribution: `bins` uniform
/// bins over `[0, max spacing]`, normalized to unit mass, with the mean
/// spacing set to the sample mean.
pub fn empirical_nnsd(spectrum: &Spectrum, bins: usize) -> Result<SpacingModel> {
    if spectrum.len() < 2 {
        return Err(Error::NoSpacings(spectrum.len()));
    }
    if bins < 4 {
        return Err(Error::InvalidParameter(format!("need at least 4 bins, got {bins}")));
    }
    let spacings: Vec<f64> = spectrum.spacings().collect();
    let max = spacings.iter().copied().fold(0.0, f64::max);
    let width = max / bins as f64;
    let mut counts = vec![0.0; bins];
    for &s in &spacings {
        let k = ((s / width) as usize).min(bins - 1);
        counts[k] += 1.0;
    }
    let edges: Vec<f64> = (0..=bins).map(|k| k as f64 * width).collect();
    let table = SpacingTable::from_bins(edges, counts)?;
    let mean = spacings.iter().sum::<f64>() / spacings.len() as f64;
    SpacingModel::tabulated(table, mean)
}
