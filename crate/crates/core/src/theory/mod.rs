//! Analytic side: gap probability, the NNSD → `D_b` integral transform and
//! its closed-form instances.
//!
//! With `S(x) = ∫ₓ^∞ P(s) ds` the survival function of the spacing law,
//!
//! ```text
//! E(r)   = 1 − (1/s̄) ∫₀ʳ S(x) dx
//! D_b(r) = 1 − r·S(r) / ∫₀ʳ S(x) dx
//! ```
//!
//! [`gap_probability`] uses the analytic antiderivatives of the built-in
//! survival functions. [`dimension_transform`] always integrates `S` by
//! adaptive quadrature, so comparing it against the closed forms in
//! [`closed_form`] checks one route against an independent one.

mod closed_form;
mod crossing;
mod curve;

use std::f64::consts::PI;

pub use closed_form::{
    closed_form, closed_form_equal_spacing, closed_form_goe, closed_form_gse, closed_form_gue,
    closed_form_poisson, small_scale_series, StepValue, SMALL_SCALE,
};
pub use crossing::find_crossing;
pub use curve::{curve, log_grid, CurveSource, DimensionCurve, DimensionPoint, Evaluation};

pub use crate::quadrature::QuadratureConfig;
use crate::error::{Error, Result};
use crate::nnsd::{SpacingKind, SpacingModel};
use crate::quadrature::integrate_with_breaks;
use crate::special::erfc;

impl QuadratureConfig {
    /// Smallest scale `T` with `survival(T) < tail_survival`.
    pub fn tail_cut(&self, model: &SpacingModel) -> f64 {
        let sbar = model.mean_spacing();
        match model.kind() {
            SpacingKind::Poisson => -sbar * self.tail_survival.ln(),
            SpacingKind::EqualSpacing => sbar,
            SpacingKind::Tabulated => model.table().expect("tabulated model").range().1,
            _ => {
                let mut t = sbar;
                while model.survival(t) >= self.tail_survival {
                    t *= 1.25;
                }
                t
            }
        }
    }
}

fn check_scale(r: f64) -> Result<()> {
    if r.is_finite() && r >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("scale must be finite and >= 0, got {r}")))
    }
}

/// `∫₀ʳ S(x) dx` by adaptive quadrature of the survival function. The
/// integration stops at the tail cut, beyond which `S` is below the
/// configured survival threshold.
pub fn integrated_survival(model: &SpacingModel, r: f64, q: &QuadratureConfig) -> Result<f64> {
    check_scale(r)?;
    if model.kind() == SpacingKind::EqualSpacing {
        return Ok(r.min(model.mean_spacing()));
    }
    let upper = r.min(q.tail_cut(model));
    let mut breaks = vec![0.0];
    if let Some(table) = model.table() {
        breaks.extend(table.edges().iter().copied().filter(|&e| e > 0.0 && e < upper));
    }
    breaks.push(upper);
    integrate_with_breaks(|x| model.survival(x), &breaks, q)
}

/// E(r): probability that an interval of length `r` holds no level.
pub fn gap_probability(model: &SpacingModel, r: f64, q: &QuadratureConfig) -> Result<f64> {
    check_scale(r)?;
    if r == 0.0 {
        return Ok(1.0);
    }
    let x = r / model.mean_spacing();
    let e = match model.kind() {
        SpacingKind::Poisson => (-x).exp(),
        SpacingKind::WignerGoe => erfc(PI.sqrt() / 2.0 * x),
        SpacingKind::WignerGue => {
            (-4.0 / PI * x * x).exp() - x * erfc(2.0 / PI.sqrt() * x)
        }
        SpacingKind::WignerGse => {
            let a = 64.0 / (9.0 * PI);
            (1.0 + 16.0 / (9.0 * PI) * x * x) * (-a * x * x).exp()
                - x * erfc(8.0 / (3.0 * PI.sqrt()) * x)
        }
        SpacingKind::EqualSpacing => 1.0 - x.min(1.0),
        SpacingKind::Tabulated => {
            1.0 - integrated_survival(model, r, q).map_err(|e| e.at_scale(r))?
                / model.mean_spacing()
        }
    };
    Ok(e.clamp(0.0, 1.0))
}

/// `D_b(r)` from the spacing distribution by numerical integration.
pub fn dimension_transform(model: &SpacingModel, r: f64, q: &QuadratureConfig) -> Result<f64> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidParameter(format!("scale must be positive, got {r}")));
    }
    if model.kind() == SpacingKind::EqualSpacing {
        return Err(Error::PointMassTransform);
    }
    if let Some(table) = model.table() {
        // Inside the first bin S is linear and the ratio has a closed form
        // free of the 0/0 cancellation.
        let (e0, e1) = (table.edges()[0], table.edges()[1]);
        if r <= e1 {
            if r <= e0 {
                return Ok(0.0);
            }
            let p0 = table.density_values()[0];
            let integral = r - 0.5 * p0 * (r - e0) * (r - e0);
            return Ok(0.5 * p0 * (r * r - e0 * e0) / integral);
        }
    } else if r / model.mean_spacing() < SMALL_SCALE {
        let x = r / model.mean_spacing();
        return Ok(small_scale_series(model.kind(), x).expect("built-in model"));
    }
    let integral = integrated_survival(model, r, q).map_err(|e| e.at_scale(r))?;
    Ok(1.0 - r * model.survival(r) / integral)
}
