//! `D_b` as a function of the reduced scale `r/s̄`.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use super::{closed_form, dimension_transform, QuadratureConfig};
use crate::error::{Error, Result};
use crate::nnsd::SpacingModel;

/// Where a dimension curve came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CurveSource {
    ClosedForm,
    Transform,
    BoxCounting,
}

impl CurveSource {
    pub fn as_str(self) -> &'static str {
        match self {
            CurveSource::ClosedForm => "closed_form",
            CurveSource::Transform => "transform",
            CurveSource::BoxCounting => "box_counting",
        }
    }
}

impl fmt::Display for CurveSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CurveSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "closed_form" => Ok(CurveSource::ClosedForm),
            "transform" => Ok(CurveSource::Transform),
            "box_counting" => Ok(CurveSource::BoxCounting),
            other => Err(Error::InvalidParameter(format!("unknown curve source '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionPoint {
    pub r_over_sbar: f64,
    pub d_b: f64,
}

/// Local box-counting dimension sampled at strictly increasing `r/s̄`.
#[derive(Debug, Clone, PartialEq)]
pub struct DimensionCurve {
    points: Vec<DimensionPoint>,
    source: CurveSource,
    id: String,
}

pub const CSV_HEADER: &str = "r_over_sbar,d_b,source";

impl DimensionCurve {
    pub fn new(points: Vec<DimensionPoint>, source: CurveSource, id: impl Into<String>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::DegenerateGrid("dimension curve has no points".into()));
        }
        if points.iter().any(|p| !(p.r_over_sbar > 0.0 && p.r_over_sbar.is_finite() && p.d_b.is_finite())) {
            return Err(Error::InvalidParameter("curve points must be finite with r/s̄ > 0".into()));
        }
        if points.windows(2).any(|w| w[0].r_over_sbar >= w[1].r_over_sbar) {
            return Err(Error::InvalidParameter("curve r/s̄ values must be strictly increasing".into()));
        }
        Ok(Self { points, source, id: id.into() })
    }

    pub fn points(&self) -> &[DimensionPoint] {
        &self.points
    }

    pub fn source(&self) -> CurveSource {
        self.source
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn range(&self) -> (f64, f64) {
        (self.points[0].r_over_sbar, self.points[self.points.len() - 1].r_over_sbar)
    }

    /// Points whose `D_b` lies outside `[−0.05, 1.05]`.
    pub fn range_violations(&self) -> Vec<DimensionPoint> {
        self.points.iter().copied().filter(|p| !(-0.05..=1.05).contains(&p.d_b)).collect()
    }

    /// Linear interpolation in `ln(r/s̄)`; `None` outside the sampled range.
    pub fn interpolate(&self, r_over_sbar: f64) -> Option<f64> {
        let (lo, hi) = self.range();
        if !(lo..=hi).contains(&r_over_sbar) {
            return None;
        }
        let k = self.points.partition_point(|p| p.r_over_sbar < r_over_sbar);
        if self.points[k].r_over_sbar == r_over_sbar {
            return Some(self.points[k].d_b);
        }
        let (a, b) = (self.points[k - 1], self.points[k]);
        let t = (r_over_sbar.ln() - a.r_over_sbar.ln()) / (b.r_over_sbar.ln() - a.r_over_sbar.ln());
        Some(a.d_b + t * (b.d_b - a.d_b))
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(64 * (self.points.len() + 1));
        out.push_str(CSV_HEADER);
        out.push('\n');
        for p in &self.points {
            out.push_str(&format!("{:.16e},{:.16e},{}\n", p.r_over_sbar, p.d_b, self.source));
        }
        out
    }

    /// Parses the CSV written by [`to_csv`](Self::to_csv). `origin` names the
    /// input in error messages and becomes the curve id.
    pub fn from_csv(text: &str, origin: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        match lines.next() {
            Some((_, header)) if header.trim() == CSV_HEADER => {}
            Some((i, header)) => {
                return Err(Error::Parse { path: origin.into(), line: i + 1, text: header.into() })
            }
            None => return Err(Error::EmptyInput(origin.into())),
        }
        let mut points = Vec::new();
        let mut source = None;
        for (i, line) in lines {
            let err = || Error::Parse { path: origin.into(), line: i + 1, text: line.into() };
            let cols: Vec<&str> = line.trim().split(',').collect();
            if cols.len() != 3 {
                return Err(err());
            }
            let r: f64 = cols[0].parse().map_err(|_| err())?;
            let d: f64 = cols[1].parse().map_err(|_| err())?;
            let s: CurveSource = cols[2].parse().map_err(|_| err())?;
            if source.is_some_and(|prev| prev != s) {
                return Err(err());
            }
            source = Some(s);
            points.push(DimensionPoint { r_over_sbar: r, d_b: d });
        }
        let source = source.ok_or_else(|| Error::EmptyInput(origin.into()))?;
        Self::new(points, source, origin)
    }
}

/// Log-spaced reduced scales `10^(k/points_per_decade)` covering
/// `[lo, hi]`. Aligning the grid to decades puts `r/s̄ = 1` on it.
pub fn log_grid(lo: f64, hi: f64, points_per_decade: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi > lo && hi.is_finite()) || points_per_decade == 0 {
        return Err(Error::DegenerateGrid(format!(
            "need 0 < lo < hi and points per decade >= 1 (lo {lo}, hi {hi}, ppd {points_per_decade})"
        )));
    }
    let ppd = points_per_decade as f64;
    let first = (lo.log10() * ppd - 1e-9).ceil() as i64;
    let last = (hi.log10() * ppd + 1e-9).floor() as i64;
    if last < first {
        return Err(Error::DegenerateGrid(format!("no grid point in [{lo}, {hi}]")));
    }
    Ok((first..=last).map(|k| 10f64.powf(k as f64 / ppd)).collect())
}

/// How a theoretical curve is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Evaluation {
    ClosedForm,
    Transform,
}

/// Theoretical `D_b` on a grid of reduced scales `r/s̄`.
pub fn curve(
    model: &SpacingModel,
    evaluation: Evaluation,
    grid: &[f64],
    q: &QuadratureConfig,
) -> Result<DimensionCurve> {
    if grid.is_empty() {
        return Err(Error::DegenerateGrid("empty r grid".into()));
    }
    if grid.iter().any(|&x| !(x > 0.0)) || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::DegenerateGrid("r grid must be positive and strictly increasing".into()));
    }
    let sbar = model.mean_spacing();
    let points = grid
        .par_iter()
        .map(|&x| {
            let r = x * sbar;
            let d = match evaluation {
                Evaluation::ClosedForm => closed_form(model, r),
                Evaluation::Transform => dimension_transform(model, r, q),
            }
            .map_err(|e| match e {
                Error::AtScale { .. } => e,
                other => other.at_scale(r),
            })?;
            Ok(DimensionPoint { r_over_sbar: x, d_b: d })
        })
        .collect::<Result<Vec<_>>>()?;
    let source = match evaluation {
        Evaluation::ClosedForm => CurveSource::ClosedForm,
        Evaluation::Transform => CurveSource::Transform,
    };
    DimensionCurve::new(points, source, model.kind().name())
}
