//! Closed-form local box-counting dimensions for the built-in spacing laws.
//!
//! Each function takes the scale `r` and mean spacing `sbar` and works in
//! the reduced variable `x = r/sbar`. Below [`SMALL_SCALE`] the expressions
//! are a 0/0 form in floating point, so the leading Taylor terms are used.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::nnsd::{SpacingKind, SpacingModel};
use crate::special::{erf, erfc};

/// Reduced scale `r/s̄` below which series expansions replace the closed forms.
pub const SMALL_SCALE: f64 = 1e-4;

/// Leading small-scale behavior of `D_b` for a built-in model, at reduced
/// scale `x`.
pub fn small_scale_series(kind: SpacingKind, x: f64) -> Option<f64> {
    match kind {
        SpacingKind::Poisson => Some(x / 2.0 - x * x / 12.0),
        SpacingKind::WignerGoe => Some(PI * x * x / 6.0),
        SpacingKind::WignerGue => Some(8.0 / (PI * PI) * x.powi(3)),
        SpacingKind::WignerGse => Some(131_072.0 / (2187.0 * PI.powi(3)) * x.powi(5)),
        SpacingKind::EqualSpacing => Some(0.0),
        SpacingKind::Tabulated => None,
    }
}

pub fn closed_form_poisson(r: f64, sbar: f64) -> f64 {
    let x = r / sbar;
    if x < SMALL_SCALE {
        return small_scale_series(SpacingKind::Poisson, x).unwrap();
    }
    // x e^{-x} / (1 - e^{-x}) = x / (e^x - 1)
    1.0 - x / x.exp_m1()
}

pub fn closed_form_goe(r: f64, sbar: f64) -> f64 {
    let x = r / sbar;
    if x < SMALL_SCALE {
        return small_scale_series(SpacingKind::WignerGoe, x).unwrap();
    }
    1.0 - x * (-PI / 4.0 * x * x).exp() / erf(PI.sqrt() / 2.0 * x)
}

pub fn closed_form_gue(r: f64, sbar: f64) -> f64 {
    let x = r / sbar;
    if x < SMALL_SCALE {
        return small_scale_series(SpacingKind::WignerGue, x).unwrap();
    }
    let g = (-4.0 / PI * x * x).exp();
    let c = erfc(2.0 / PI.sqrt() * x);
    let numerator = x * (c + 4.0 / PI * x * g);
    let denominator = -(-4.0 / PI * x * x).exp_m1() + x * c;
    (1.0 - numerator / denominator).max(0.0)
}

pub fn closed_form_gse(r: f64, sbar: f64) -> f64 {
    let x = r / sbar;
    if x < SMALL_SCALE {
        return small_scale_series(SpacingKind::WignerGse, x).unwrap();
    }
    let a = 64.0 / (9.0 * PI);
    let g = (-a * x * x).exp();
    let c = erfc(8.0 / (3.0 * PI.sqrt()) * x);
    let numerator = x * (c + (16.0 / (3.0 * PI) * x + 2048.0 / (81.0 * PI * PI) * x.powi(3)) * g);
    let denominator = -(-a * x * x).exp_m1() - 16.0 / (9.0 * PI) * x * x * g + x * c;
    (1.0 - numerator / denominator).max(0.0)
}

/// Value of a step function, with a flag set when evaluated exactly on the
/// jump (where the left limit is reported).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepValue {
    pub value: f64,
    pub at_discontinuity: bool,
}

/// Equally spaced levels: `D_b` is 0 below `s̄` and 1 above it.
pub fn closed_form_equal_spacing(r: f64, sbar: f64) -> StepValue {
    let x = r / sbar;
    StepValue { value: if x > 1.0 { 1.0 } else { 0.0 }, at_discontinuity: x == 1.0 }
}

/// Dispatches to the closed form of a built-in model.
pub fn closed_form(model: &SpacingModel, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::InvalidParameter(format!("scale must be positive, got {r}")));
    }
    let sbar = model.mean_spacing();
    Ok(match model.kind() {
        SpacingKind::Poisson => closed_form_poisson(r, sbar),
        SpacingKind::WignerGoe => closed_form_goe(r, sbar),
        SpacingKind::WignerGue => closed_form_gue(r, sbar),
        SpacingKind::WignerGse => closed_form_gse(r, sbar),
        SpacingKind::EqualSpacing => closed_form_equal_spacing(r, sbar).value,
        SpacingKind::Tabulated => {
            return Err(Error::InvalidParameter(
                "tabulated models have no closed form; use the integral transform".into(),
            ))
        }
    })
}
