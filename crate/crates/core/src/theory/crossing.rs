use super::closed_form;
use crate::error::{Error, Result};
use crate::nnsd::SpacingModel;

const CROSSING_TOL: f64 = 1e-10;

/// Scale `r*` in `bracket` where the closed-form curves of `a` and `b`
/// cross, by bisection to an absolute width of 1e-10.
pub fn find_crossing(a: &SpacingModel, b: &SpacingModel, bracket: (f64, f64)) -> Result<f64> {
    let (mut lo, mut hi) = bracket;
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "bracket must satisfy 0 < lo < hi, got ({lo}, {hi})"
        )));
    }
    let diff = |r: f64| -> Result<f64> { Ok(closed_form(a, r)? - closed_form(b, r)?) };
    let mut f_lo = diff(lo)?;
    let f_hi = diff(hi)?;
    if !(f_lo * f_hi < 0.0) {
        return Err(Error::Bracketing { lo, hi, f_lo, f_hi });
    }
    while hi - lo > CROSSING_TOL {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = diff(mid)?;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theory::{closed_form_goe, closed_form_poisson};

    #[test]
    fn poisson_goe_crossing_agrees_with_dense_scan() {
        let p = SpacingModel::poisson(1.0).unwrap();
        let g = SpacingModel::goe(1.0).unwrap();
        let r = find_crossing(&p, &g, (0.1, 1.0)).unwrap();
        // Dense scan: locate the sign change of the difference on a 1e-6 grid.
        let f = |x: f64| closed_form_poisson(x, 1.0) - closed_form_goe(x, 1.0);
        let mut scan = None;
        let n = 900_000;
        for i in 0..n {
            let x0 = 0.1 + 0.9 * i as f64 / n as f64;
            let x1 = 0.1 + 0.9 * (i + 1) as f64 / n as f64;
            if f(x0) * f(x1) <= 0.0 {
                scan = Some((x0, x1));
                break;
            }
        }
        let (x0, x1) = scan.expect("sign change");
        assert!(r >= x0 - 1e-10 && r <= x1 + 1e-10, "r* = {r}, scan [{x0}, {x1}]");
        assert!((r - 1.0).abs() > 0.01);
    }

    #[test]
    fn identical_models_have_no_bracket() {
        let p = SpacingModel::poisson(1.0).unwrap();
        assert!(matches!(find_crossing(&p, &p, (0.1, 1.0)), Err(Error::Bracketing { .. })));
    }

    #[test]
    fn equal_spacing_vs_poisson_has_no_bracket() {
        let e = SpacingModel::equal_spacing(1.0).unwrap();
        let p = SpacingModel::poisson(1.0).unwrap();
        assert!(matches!(find_crossing(&e, &p, (0.1, 0.9)), Err(Error::Bracketing { .. })));
    }

    #[test]
    fn inverted_bracket_is_invalid() {
        let p = SpacingModel::poisson(1.0).unwrap();
        let g = SpacingModel::goe(1.0).unwrap();
        assert!(matches!(find_crossing(&p, &g, (1.0, 0.1)), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn crossing_scales_with_mean_spacing() {
        let p = SpacingModel::poisson(3.0).unwrap();
        let g = SpacingModel::goe(3.0).unwrap();
        let unit = find_crossing(
            &SpacingModel::poisson(1.0).unwrap(),
            &SpacingModel::goe(1.0).unwrap(),
            (0.1, 1.0),
        )
        .unwrap();
        let scaled = find_crossing(&p, &g, (0.3, 3.0)).unwrap();
        assert!((scaled / 3.0 - unit).abs() < 1e-9);
    }
}
