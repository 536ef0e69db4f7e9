//! Covering a spectrum with an r-mesh and reading off the local slope of
//! `ln N(r)` against `ln r`.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::spectra::Spectrum;
use crate::theory::{log_grid, CurveSource, DimensionCurve, DimensionPoint};

/// How the mesh is placed on the line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum MeshMode {
    /// One mesh with a box edge at `e_min` ([`count_boxes`]).
    Anchored,
    /// Expected count over a uniformly random mesh origin
    /// ([`averaged_box_count`]).
    #[default]
    OriginAveraged,
}

impl MeshMode {
    pub fn as_str(self) -> &'static str {
        match self {
            MeshMode::Anchored => "anchored",
            MeshMode::OriginAveraged => "averaged",
        }
    }
}

impl fmt::Display for MeshMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MeshMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "anchored" => Ok(MeshMode::Anchored),
            "averaged" => Ok(MeshMode::OriginAveraged),
            other => Err(Error::InvalidParameter(format!(
                "unknown mesh mode '{other}' (expected anchored or averaged)"
            ))),
        }
    }
}

/// Grid and slope-window settings for the empirical pipeline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopeConfig {
    /// Least-squares window, an odd number of grid points.
    pub window: usize,
    pub points_per_decade: usize,
    pub r_min_over_sbar: f64,
    pub r_max_over_sbar: f64,
    pub mesh: MeshMode,
}

impl Default for SlopeConfig {
    fn default() -> Self {
        Self {
            window: 5,
            points_per_decade: 48,
            r_min_over_sbar: 0.02,
            r_max_over_sbar: 5.0,
            mesh: MeshMode::OriginAveraged,
        }
    }
}

impl SlopeConfig {
    pub fn validate(&self) -> Result<()> {
        if self.window < 3 || self.window % 2 == 0 {
            return Err(Error::InvalidParameter(format!(
                "slope window must be odd and at least 3, got {}",
                self.window
            )));
        }
        if self.points_per_decade == 0 {
            return Err(Error::InvalidParameter("points per decade must be positive".into()));
        }
        if !(self.r_min_over_sbar > 0.0
            && self.r_max_over_sbar > self.r_min_over_sbar
            && self.r_max_over_sbar.is_finite())
        {
            return Err(Error::DegenerateGrid(format!(
                "need 0 < r_min < r_max, got [{}, {}]",
                self.r_min_over_sbar, self.r_max_over_sbar
            )));
        }
        Ok(())
    }

    /// Reduced scales `r/s̄` of the grid.
    pub fn grid(&self) -> Result<Vec<f64>> {
        self.validate()?;
        let grid = log_grid(self.r_min_over_sbar, self.r_max_over_sbar, self.points_per_decade)?;
        if grid.len() < self.window {
            return Err(Error::DegenerateGrid(format!(
                "{} grid points is fewer than the slope window {}",
                grid.len(),
                self.window
            )));
        }
        Ok(grid)
    }
}

/// Number of boxes `[e_min + k·r, e_min + (k+1)·r)` holding at least one
/// level, for `k < ceil(L/r)`. A level on the far edge of the window is
/// counted in the last box.
pub fn count_boxes(spectrum: &Spectrum, r: f64) -> Result<u64> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidParameter(format!("box size must be positive, got {r}")));
    }
    let length = spectrum.window_length();
    if r >= length {
        return Ok(1);
    }
    let last_box = ((length / r).ceil() as u64).max(1) - 1;
    let e_min = spectrum.e_min();
    let mut count = 0;
    let mut previous = None;
    for &x in spectrum.levels() {
        let k = (((x - e_min) / r).floor() as u64).min(last_box);
        if previous != Some(k) {
            count += 1;
            previous = Some(k);
        }
    }
    Ok(count)
}

/// Mean number of occupied boxes when the mesh origin is uniformly random:
/// `1 + Σ min(gᵢ/r, 1)` over the spacings `gᵢ`. Non-increasing in `r`.
pub fn averaged_box_count(spectrum: &Spectrum, r: f64) -> Result<f64> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidParameter(format!("box size must be positive, got {r}")));
    }
    Ok(1.0 + spectrum.spacings().map(|g| (g / r).min(1.0)).sum::<f64>())
}

/// `1 − (r/L)·N(r)` with the anchored count, clamped to `[0, 1]`.
pub fn empirical_gap_probability(spectrum: &Spectrum, r: f64) -> Result<f64> {
    let n = count_boxes(spectrum, r)? as f64;
    let length = spectrum.window_length();
    if length == 0.0 {
        return Ok(0.0);
    }
    Ok((1.0 - r / length * n).clamp(0.0, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxCountPoint {
    pub r: f64,
    pub n_boxes: f64,
}

pub const BOX_CSV_HEADER: &str = "r,n_boxes,r_over_sbar,ln_r_over_sbar,ln_n";

/// `N(r)` over a log grid of box sizes.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxCountCurve {
    points: Vec<BoxCountPoint>,
    spectrum_id: String,
    sbar: f64,
    window_length: f64,
    mesh: MeshMode,
}

impl BoxCountCurve {
    pub fn new(
        points: Vec<BoxCountPoint>,
        spectrum_id: impl Into<String>,
        sbar: f64,
        window_length: f64,
        mesh: MeshMode,
    ) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::DegenerateGrid("box-count curve has no points".into()));
        }
        if !(sbar > 0.0 && sbar.is_finite()) {
            return Err(Error::InvalidParameter(format!("mean spacing must be positive, got {sbar}")));
        }
        if points.iter().any(|p| !(p.r > 0.0 && p.r.is_finite() && p.n_boxes >= 1.0)) {
            return Err(Error::InvalidParameter("box sizes must be positive and counts at least 1".into()));
        }
        if points.windows(2).any(|w| w[0].r >= w[1].r) {
            return Err(Error::InvalidParameter("box sizes must be strictly increasing".into()));
        }
        if let Some(w) = points.windows(2).find(|w| w[1].n_boxes > w[0].n_boxes) {
            return Err(Error::InvalidParameter(format!(
                "box count increases from {} at r={} to {} at r={}",
                w[0].n_boxes, w[0].r, w[1].n_boxes, w[1].r
            )));
        }
        Ok(Self { points, spectrum_id: spectrum_id.into(), sbar, window_length, mesh })
    }

    pub fn points(&self) -> &[BoxCountPoint] {
        &self.points
    }

    pub fn spectrum_id(&self) -> &str {
        &self.spectrum_id
    }

    pub fn sbar(&self) -> f64 {
        self.sbar
    }

    pub fn window_length(&self) -> f64 {
        self.window_length
    }

    pub fn mesh(&self) -> MeshMode {
        self.mesh
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(BOX_CSV_HEADER);
        out.push('\n');
        for p in &self.points {
            let x = p.r / self.sbar;
            out.push_str(&format!(
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n",
                p.r,
                p.n_boxes,
                x,
                x.ln(),
                p.n_boxes.ln()
            ));
        }
        out
    }
}

/// Box counts of `spectrum` on the configured grid of `r = (r/s̄)·s̄`, with
/// `s̄` the sample mean spacing.
pub fn count_curve(spectrum: &Spectrum, cfg: &SlopeConfig) -> Result<BoxCountCurve> {
    if spectrum.len() < 2 {
        return Err(Error::NoSpacings(spectrum.len()));
    }
    let grid = cfg.grid()?;
    let sbar = spectrum.mean_spacing()?;
    let points = grid
        .par_iter()
        .map(|&x| {
            let r = x * sbar;
            let n_boxes = match cfg.mesh {
                MeshMode::Anchored => count_boxes(spectrum, r)? as f64,
                MeshMode::OriginAveraged => averaged_box_count(spectrum, r)?,
            };
            Ok(BoxCountPoint { r, n_boxes })
        })
        .collect::<Result<Vec<_>>>()?;
    BoxCountCurve::new(points, spectrum.label(), sbar, spectrum.window_length(), cfg.mesh)
}

/// Least-squares slope of `y` against `x`.
fn ls_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().map(|b| b - y[0]).sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - y[0] - my);
        sxx += (a - mx) * (a - mx);
    }
    sxy / sxx
}

/// `D_b = −d ln N / d ln r`, fitted over `cfg.window` neighbouring grid
/// points. Windows near the ends are shifted inwards rather than truncated.
pub fn local_slope_curve(curve: &BoxCountCurve, cfg: &SlopeConfig) -> Result<DimensionCurve> {
    if cfg.window < 3 || cfg.window % 2 == 0 {
        return Err(Error::InvalidParameter(format!(
            "slope window must be odd and at least 3, got {}",
            cfg.window
        )));
    }
    let m = curve.len();
    if m < cfg.window {
        return Err(Error::DegenerateGrid(format!(
            "{m} curve points is fewer than the slope window {}",
            cfg.window
        )));
    }
    let ln_r: Vec<f64> = curve.points().iter().map(|p| p.r.ln()).collect();
    let ln_n: Vec<f64> = curve.points().iter().map(|p| p.n_boxes.ln()).collect();
    let half = cfg.window / 2;
    let points = (0..m)
        .map(|i| {
            let start = i.saturating_sub(half).min(m - cfg.window);
            let range = start..start + cfg.window;
            let slope = ls_slope(&ln_r[range.clone()], &ln_n[range]);
            DimensionPoint { r_over_sbar: curve.points()[i].r / curve.sbar(), d_b: -slope }
        })
        .collect();
    DimensionCurve::new(points, CurveSource::BoxCounting, curve.spectrum_id())
}

/// [`count_curve`] followed by [`local_slope_curve`].
pub fn empirical_dimension(spectrum: &Spectrum, cfg: &SlopeConfig) -> Result<(BoxCountCurve, DimensionCurve)> {
    let counts = count_curve(spectrum, cfg)?;
    let dims = local_slope_curve(&counts, cfg)?;
    Ok((counts, dims))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nnsd::{RngSeed, SpacingModel};
    use crate::spectra::renewal_spectrum;
    use crate::theory::{closed_form_poisson, gap_probability, QuadratureConfig};

    fn windowed(levels: &[f64], lo: f64, hi: f64) -> Spectrum {
        Spectrum::with_window(levels.to_vec(), lo, hi, "t").unwrap()
    }

    #[test]
    fn count_examples() {
        assert_eq!(count_boxes(&windowed(&[0.5], 0.0, 1.0), 1.0).unwrap(), 1);
        let s = windowed(&[0.5, 1.5, 2.5, 3.5], 0.0, 4.0);
        assert_eq!(count_boxes(&s, 1.0).unwrap(), 4);
        assert_eq!(count_boxes(&s, 2.0).unwrap(), 2);
        assert_eq!(count_boxes(&s, 4.0).unwrap(), 1);
        assert_eq!(count_boxes(&windowed(&[0.1, 0.2], 0.0, 1.0), 0.5).unwrap(), 1);
        assert!(count_boxes(&s, 0.0).is_err());
    }

    #[test]
    fn far_edge_level_falls_in_last_box() {
        let s = Spectrum::new(vec![0.0, 1.0, 2.0, 3.0], "t").unwrap();
        assert_eq!(count_boxes(&s, 1.0).unwrap(), 3);
        assert_eq!(count_boxes(&s, 6.0).unwrap(), 1);
    }

    #[test]
    fn averaged_count_examples() {
        let s = Spectrum::new(vec![0.0, 1.0, 2.0, 3.0], "t").unwrap();
        assert_eq!(averaged_box_count(&s, 0.5).unwrap(), 4.0);
        assert_eq!(averaged_box_count(&s, 2.0).unwrap(), 2.5);
        assert!((averaged_box_count(&s, 1e9).unwrap() - 1.0 - 3e-9).abs() < 1e-15);
    }

    #[test]
    fn averaged_count_is_the_mean_over_offsets() {
        let s = windowed(&[0.0, 0.3, 1.1, 1.25, 2.9, 3.0, 4.7], -10.0, 10.0);
        let r = 0.7;
        let offsets = 20_000;
        let mean = (0..offsets)
            .map(|k| {
                let shift = r * (k as f64 + 0.5) / offsets as f64;
                let shifted: Vec<f64> = s.levels().iter().map(|x| x + shift).collect();
                count_boxes(&windowed(&shifted, -10.0, 20.0), r).unwrap() as f64
            })
            .sum::<f64>()
            / offsets as f64;
        assert!((mean - averaged_box_count(&s, r).unwrap()).abs() < 1e-3);
    }

    #[test]
    fn gap_probability_examples() {
        let levels: Vec<f64> = (0..1001).map(f64::from).collect();
        let s = Spectrum::new(levels, "t").unwrap();
        assert!((empirical_gap_probability(&s, 0.5).unwrap() - 0.5).abs() < 1e-3);
        assert_eq!(empirical_gap_probability(&s, 2000.0).unwrap(), 0.0);

        let p = SpacingModel::poisson(1.0).unwrap();
        let s = renewal_spectrum(&p, 100_000, RngSeed(5)).unwrap();
        let sbar = s.mean_spacing().unwrap();
        let e = empirical_gap_probability(&s, sbar).unwrap();
        let oracle = gap_probability(&p, 1.0, &QuadratureConfig::default()).unwrap();
        assert!((e - oracle).abs() < 0.01, "{e} vs {oracle}");
    }

    #[test]
    fn equally_spaced_count_curve() {
        let levels: Vec<f64> = (0..1001).map(f64::from).collect();
        let s = Spectrum::new(levels, "t").unwrap();
        let cfg = SlopeConfig { mesh: MeshMode::Anchored, ..SlopeConfig::default() };
        let c = count_curve(&s, &cfg).unwrap();
        for p in c.points() {
            let bound = (1000.0 / p.r).ceil().min(1001.0);
            assert!(p.n_boxes >= 1.0 && p.n_boxes <= bound);
            if p.r <= 0.5 {
                assert_eq!(p.n_boxes, 1001.0);
            }
        }
        let d = local_slope_curve(&c, &cfg).unwrap();
        assert!(d.points().iter().filter(|p| p.r_over_sbar < 0.5).all(|p| p.d_b.abs() < 1e-12));
        let single = count_boxes(&s, 2000.0).unwrap();
        assert_eq!(single, 1);
    }

    #[test]
    fn slope_of_exact_power_law_and_plateau() {
        let cfg = SlopeConfig::default();
        let grid = cfg.grid().unwrap();
        let power: Vec<BoxCountPoint> =
            grid.iter().map(|&r| BoxCountPoint { r, n_boxes: 1e6 / r }).collect();
        let c = BoxCountCurve::new(power, "p", 1.0, 1.0, MeshMode::Anchored).unwrap();
        let d = local_slope_curve(&c, &cfg).unwrap();
        assert_eq!(d.source(), CurveSource::BoxCounting);
        assert!(d.points().iter().all(|p| (p.d_b - 1.0).abs() < 1e-12));

        let flat: Vec<BoxCountPoint> = grid.iter().map(|&r| BoxCountPoint { r, n_boxes: 7.0 }).collect();
        let c = BoxCountCurve::new(flat, "f", 1.0, 1.0, MeshMode::Anchored).unwrap();
        let d = local_slope_curve(&c, &cfg).unwrap();
        assert!(d.points().iter().all(|p| p.d_b == 0.0));
    }

    #[test]
    fn slope_normalizes_by_recorded_sbar() {
        let cfg = SlopeConfig::default();
        let pts: Vec<BoxCountPoint> = cfg
            .grid()
            .unwrap()
            .iter()
            .map(|&x| BoxCountPoint { r: 2.5 * x, n_boxes: 1e6 / x })
            .collect();
        let c = BoxCountCurve::new(pts, "p", 2.5, 1.0, MeshMode::Anchored).unwrap();
        let d = local_slope_curve(&c, &cfg).unwrap();
        assert!((d.points()[0].r_over_sbar - cfg.grid().unwrap()[0]).abs() < 1e-12);
    }

    #[test]
    fn curve_rejects_increasing_counts_and_bad_configs() {
        let pts = vec![BoxCountPoint { r: 1.0, n_boxes: 3.0 }, BoxCountPoint { r: 2.0, n_boxes: 4.0 }];
        assert!(BoxCountCurve::new(pts, "x", 1.0, 1.0, MeshMode::Anchored).is_err());
        let bad = SlopeConfig { window: 4, ..SlopeConfig::default() };
        assert!(bad.grid().is_err());
        let inverted = SlopeConfig { r_min_over_sbar: 5.0, r_max_over_sbar: 0.02, ..SlopeConfig::default() };
        assert!(matches!(inverted.grid(), Err(Error::DegenerateGrid(_))));
        let narrow = SlopeConfig { r_min_over_sbar: 1.0, r_max_over_sbar: 1.05, ..SlopeConfig::default() };
        assert!(narrow.grid().is_err());
        let one = Spectrum::new(vec![1.0], "x").unwrap();
        assert!(count_curve(&one, &SlopeConfig::default()).is_err());
    }

    #[test]
    fn csv_layout() {
        let s = Spectrum::new(vec![0.0, 1.0, 2.0, 3.0], "t").unwrap();
        let c = count_curve(&s, &SlopeConfig::default()).unwrap();
        let csv = c.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some(BOX_CSV_HEADER));
        let first: Vec<f64> = lines.next().unwrap().split(',').map(|f| f.parse().unwrap()).collect();
        assert_eq!(first.len(), 5);
        let x0 = SlopeConfig::default().grid().unwrap()[0];
        assert!((first[2] - x0).abs() < 1e-15);
        assert!((first[3] - x0.ln()).abs() < 1e-14);
        assert_eq!(csv.lines().count(), c.len() + 1);
    }

    #[test]
    fn poisson_counts_follow_gap_probability() {
        let p = SpacingModel::poisson(1.0).unwrap();
        let s = renewal_spectrum(&p, 100_000, RngSeed(21)).unwrap();
        let q = QuadratureConfig::default();
        for mesh in [MeshMode::Anchored, MeshMode::OriginAveraged] {
            let cfg = SlopeConfig { mesh, ..SlopeConfig::default() };
            let c = count_curve(&s, &cfg).unwrap();
            let length = c.window_length();
            for pt in c.points() {
                let x = pt.r / c.sbar();
                let e = gap_probability(&p, x, &q).unwrap();
                let predicted = length.ln() - pt.r.ln() + (1.0 - e).ln();
                let dev = (pt.n_boxes.ln() - predicted).abs();
                assert!(dev < 0.02, "{mesh}: r/s̄ {x}: {dev}");
            }
            let d = local_slope_curve(&c, &cfg).unwrap();
            let worst = d
                .points()
                .iter()
                .filter(|pt| (0.05..=3.0).contains(&pt.r_over_sbar))
                .map(|pt| (pt.d_b - closed_form_poisson(pt.r_over_sbar, 1.0)).abs())
                .fold(0.0, f64::max);
            if mesh == MeshMode::OriginAveraged {
                assert!(worst < 0.02, "{worst}");
            }
        }
    }
}
