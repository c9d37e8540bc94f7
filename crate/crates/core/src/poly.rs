//! Polynomial evaluation and roots through the companion matrix.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::linalg::ComplexMatrix;
use crate::{Error, Result, C64};

/// Value and derivative of `sum_j coeffs[j] z^j` (Horner).
pub fn eval(coeffs: &[C64], z: C64) -> (C64, C64) {
    let mut p = C64::new(0.0, 0.0);
    let mut dp = C64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// All roots of `sum_j coeffs[j] z^j` (ascending coefficients, leading
/// coefficient non-zero), as eigenvalues of the companion matrix followed
/// by Newton polishing. A polish step is kept only if it lowers `|p|`.
pub fn roots(coeffs: &[C64]) -> Result<Vec<C64>> {
    let degree = coeffs.len().saturating_sub(1);
    if degree == 0 {
        return Ok(Vec::new());
    }
    let lead = coeffs[degree];
    if lead.norm() == 0.0 {
        return Err(Error::InvalidParameter("leading coefficient must be non-zero"));
    }
    let mut companion = ComplexMatrix::zeros(degree);
    for j in 0..degree {
        companion[(0, j)] = -coeffs[degree - 1 - j] / lead;
    }
    for i in 1..degree {
        companion[(i, i - 1)] = C64::new(1.0, 0.0);
    }
    let mut found = companion.eigenvalues()?;
    for z in found.iter_mut() {
        *z = polish(coeffs, *z, 3);
    }
    Ok(found)
}

/// Up to `steps` Newton steps, stopping as soon as a step fails to reduce
/// the residual.
pub fn polish(coeffs: &[C64], mut z: C64, steps: usize) -> C64 {
    let (mut p, mut dp) = eval(coeffs, z);
    for _ in 0..steps {
        if dp.norm() == 0.0 || p.norm() == 0.0 {
            break;
        }
        let candidate = z - p / dp;
        let (cp, cdp) = eval(coeffs, candidate);
        if cp.norm() < p.norm() {
            z = candidate;
            p = cp;
            dp = cdp;
        } else {
            break;
        }
    }
    z
}

/// Real-coefficient convenience wrapper around [`roots`].
pub fn real_roots_of(coeffs: &[f64]) -> Result<Vec<C64>> {
    let c: Vec<C64> = coeffs.iter().map(|&x| C64::new(x, 0.0)).collect();
    roots(&c)
}
