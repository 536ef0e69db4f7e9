//! Globally adaptive Gauss–Kronrod (7/15) quadrature.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Tolerances for the integral transform and the gap probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    /// Tail truncation: integrals to infinity stop where the survival
    /// function drops below this value.
    pub tail_survival: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self { abs_tol: 1e-10, rel_tol: 1e-10, max_subdivisions: 200, tail_survival: 1e-16 }
    }
}

impl QuadratureConfig {
    pub fn new(abs_tol: f64, rel_tol: f64, max_subdivisions: usize) -> Result<Self> {
        if !(abs_tol > 0.0 && rel_tol > 0.0) || max_subdivisions == 0 {
            return Err(Error::InvalidParameter(format!(
                "quadrature tolerances must be positive (abs {abs_tol}, rel {rel_tol}, max {max_subdivisions})"
            )));
        }
        Ok(Self { abs_tol, rel_tol, max_subdivisions, ..Self::default() })
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the odd-indexed Kronrod nodes.
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (j, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = half * x;
        let pair = f(center - dx) + f(center + dx);
        kronrod += w * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Segment { a, b, value: kronrod * half, error: ((kronrod - gauss) * half).abs() }
}

/// Integrates `f` over `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<f64> {
    integrate_with_breaks(f, &[a, b], cfg)
}

/// Integrates `f` over `[breaks[0], breaks.last()]`, starting from one segment
/// per consecutive pair of break points. Breaks at kinks of `f` let the rule
/// stay exact on piecewise-polynomial integrands.
pub fn integrate_with_breaks<F: Fn(f64) -> f64>(
    f: F,
    breaks: &[f64],
    cfg: &QuadratureConfig,
) -> Result<f64> {
    if breaks.len() < 2 || breaks.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(Error::InvalidParameter("quadrature breaks must be non-decreasing".into()));
    }
    let mut heap = BinaryHeap::new();
    for w in breaks.windows(2) {
        if w[0] < w[1] {
            heap.push(kronrod15(&f, w[0], w[1]));
        }
    }
    let mut subdivisions = 0;
    loop {
        let (value, error) =
            heap.iter().fold((0.0, 0.0), |(v, e), s| (v + s.value, e + s.error));
        if error <= cfg.abs_tol.max(cfg.rel_tol * value.abs()) {
            return Ok(value);
        }
        if subdivisions >= cfg.max_subdivisions {
            return Err(Error::Convergence { subdivisions, estimate: error });
        }
        let worst = heap.pop().expect("non-empty while error is positive");
        let mid = 0.5 * (worst.a + worst.b);
        if !(worst.a < mid && mid < worst.b) {
            // Segment no longer splittable in f64.
            return Err(Error::Convergence { subdivisions, estimate: error });
        }
        heap.push(kronrod15(&f, worst.a, mid));
        heap.push(kronrod15(&f, mid, worst.b));
        subdivisions += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_are_exact() {
        let cfg = QuadratureConfig::default();
        let v = integrate(|x| 3.0 * x * x - 2.0 * x + 1.0, -1.0, 2.0, &cfg).unwrap();
        assert!((v - 9.0).abs() < 1e-13);
    }

    #[test]
    fn smooth_decaying_integrand() {
        let cfg = QuadratureConfig::default();
        let v = integrate(|x| (-x).exp(), 0.0, 40.0, &cfg).unwrap();
        assert!((v - (1.0 - (-40.0f64).exp())).abs() < 1e-12);
    }

    #[test]
    fn empty_interval_is_zero() {
        let cfg = QuadratureConfig::default();
        assert_eq!(integrate(|x| x, 1.0, 1.0, &cfg).unwrap(), 0.0);
    }

    #[test]
    fn breaks_handle_kinks() {
        let cfg = QuadratureConfig::default();
        let v = integrate_with_breaks(|x: f64| (x - 0.3).abs(), &[0.0, 0.3, 1.0], &cfg).unwrap();
        assert!((v - (0.045 + 0.245)).abs() < 1e-14);
    }

    #[test]
    fn non_convergence_reports_estimate() {
        let cfg = QuadratureConfig::new(1e-14, 1e-14, 3).unwrap();
        let err = integrate(|x: f64| x.sqrt().sin() / x.sqrt(), 1e-12, 1000.0, &cfg).unwrap_err();
        match err {
            Error::Convergence { subdivisions, estimate } => {
                assert_eq!(subdivisions, 3);
                assert!(estimate > 0.0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_config() {
        assert!(QuadratureConfig::new(0.0, 1e-10, 10).is_err());
        assert!(QuadratureConfig::new(1e-10, 1e-10, 0).is_err());
    }
}
