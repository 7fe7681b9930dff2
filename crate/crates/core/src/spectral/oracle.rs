//! Floating-point cross-check: eigenvalues of `L_SS`, each tested for an
//! eigenvector in `ker K` by the smallest singular value of `[L_SS − λ; K]`.

use nalgebra::{Complex, DMatrix};

use super::operator::{EllipticOperator, SupportSet};
use crate::rational::to_f64;

#[derive(Clone, Debug, PartialEq)]
pub struct FloatCandidate {
    pub lambda: Complex<f64>,
    pub sigma_min: f64,
}

/// Eigenvalues λ of `L_SS` for which `[L_SS − λ; K]` has a singular value
/// at most `tolerance` times the matrix scale.
pub fn cse_search_float(op: &EllipticOperator<'_>, s: &SupportSet, tolerance: f64) -> Vec<FloatCandidate> {
    let sv = s.vertices();
    let (n, m) = (sv.len(), s.outer().len());
    if n == 0 {
        return Vec::new();
    }
    let lss = DMatrix::<f64>::from_fn(n, n, |i, j| to_f64(&op.get(sv[i], sv[j])));
    let k = DMatrix::<f64>::from_fn(m, n, |i, j| to_f64(&op.get(s.outer()[i], sv[j])));
    let scale = 1.0f64.max(lss.norm()).max(k.norm());

    let mut eigen: Vec<Complex<f64>> = lss.clone().complex_eigenvalues().iter().copied().collect();
    eigen.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    eigen.dedup_by(|a, b| (*a - *b).norm() <= 1e-9 * scale);

    let mut out = Vec::new();
    for lambda in eigen {
        let stacked = DMatrix::<Complex<f64>>::from_fn(n + m, n, |i, j| {
            if i < n {
                let diag = if i == j { lambda } else { Complex::new(0.0, 0.0) };
                Complex::new(lss[(i, j)], 0.0) - diag
            } else {
                Complex::new(k[(i - n, j)], 0.0)
            }
        });
        let sigma_min = stacked.singular_values().iter().copied().fold(f64::INFINITY, f64::min);
        if sigma_min <= tolerance * scale {
            out.push(FloatCandidate { lambda, sigma_min });
        }
    }
    out
}
