//! Eigenvalues of real symmetric tridiagonal matrices.
//!
//! [`eigenvalues_ql`] is the production path (implicit QL with Wilkinson
//! shifts, O(n²) for eigenvalues only). [`eigenvalues_bisection`] counts
//! Sturm sign changes and bisects each eigenvalue separately; it is slower
//! but shares no code with QL, so each checks the other.

use crate::error::{Error, Result};

const MAX_QL_ITERATIONS: usize = 60;

fn check_shape(diagonal: &[f64], off_diagonal: &[f64]) -> Result<()> {
    if diagonal.is_empty() || off_diagonal.len() + 1 != diagonal.len() {
        return Err(Error::InvalidParameter(format!(
            "tridiagonal shape mismatch: {} diagonal, {} off-diagonal entries",
            diagonal.len(),
            off_diagonal.len()
        )));
    }
    Ok(())
}

/// All eigenvalues in ascending order, by the implicit QL algorithm.
///
/// Rotations use `sqrt(f² + g²)` directly, so entries must stay well below
/// `1e150` in magnitude.
pub fn eigenvalues_ql(diagonal: &[f64], off_diagonal: &[f64]) -> Result<Vec<f64>> {
    check_shape(diagonal, off_diagonal)?;
    let n = diagonal.len();
    let mut d = diagonal.to_vec();
    let mut e = off_diagonal.to_vec();
    e.push(0.0);

    for l in 0..n {
        let mut iterations = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iterations += 1;
            if iterations > MAX_QL_ITERATIONS {
                return Err(Error::Eigensolver { index: l, iterations, residual: e[l].abs() });
            }

            // Wilkinson shift from the leading 2x2 block.
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = (f * f + g * g).sqrt();
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// Number of eigenvalues strictly below `lambda` (Sturm sequence / LDLᵀ
/// pivot signs).
pub fn sturm_count(diagonal: &[f64], off_diagonal: &[f64], lambda: f64) -> usize {
    let mut count = 0;
    let mut q: f64 = 1.0;
    for (i, &di) in diagonal.iter().enumerate() {
        let coupling = if i == 0 { 0.0 } else { off_diagonal[i - 1] * off_diagonal[i - 1] };
        let safe = if q.abs() < f64::MIN_POSITIVE { f64::MIN_POSITIVE.copysign(q) } else { q };
        q = di - lambda - coupling / safe;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// All eigenvalues in ascending order by Sturm bisection inside the
/// Gershgorin interval.
pub fn eigenvalues_bisection(diagonal: &[f64], off_diagonal: &[f64]) -> Result<Vec<f64>> {
    check_shape(diagonal, off_diagonal)?;
    let n = diagonal.len();
    let radius = |i: usize| {
        let left = if i > 0 { off_diagonal[i - 1].abs() } else { 0.0 };
        let right = if i + 1 < n { off_diagonal[i].abs() } else { 0.0 };
        left + right
    };
    let lo = (0..n).map(|i| diagonal[i] - radius(i)).fold(f64::INFINITY, f64::min);
    let hi = (0..n).map(|i| diagonal[i] + radius(i)).fold(f64::NEG_INFINITY, f64::max);
    let pad = 1e-12 * (hi - lo).max(1.0);
    let (lo, hi) = (lo - pad, hi + pad);

    Ok((0..n)
        .map(|k| {
            let (mut a, mut b) = (lo, hi);
            loop {
                let mid = 0.5 * (a + b);
                if mid <= a || mid >= b {
                    break;
                }
                if sturm_count(diagonal, off_diagonal, mid) <= k {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            0.5 * (a + b)
        })
        .collect())
}
