//! Small dense complex solves shared by the scattering models.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

/// Responses with a 1-norm condition number above this are rejected.
pub const MAX_CONDITION: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Singular {
    pub condition: f64,
}

fn norm1(a: &CMatrix) -> f64 {
    (0..a.ncols())
        .map(|j| a.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Inverse of `a` by partially pivoted LU, together with its 1-norm
/// condition number. Fails when the matrix is singular or the condition
/// exceeds [`MAX_CONDITION`].
pub fn inverse_checked(a: &CMatrix) -> Result<(CMatrix, f64), Singular> {
    let lu = a.clone().lu();
    let Some(inv) = lu.try_inverse() else {
        return Err(Singular {
            condition: f64::INFINITY,
        });
    };
    let condition = norm1(a) * norm1(&inv);
    if !condition.is_finite() || condition > MAX_CONDITION {
        return Err(Singular { condition });
    }
    Ok((inv, condition))
}

/// `L (M - i w I)^{-1} R` with diagonal `L`.
pub fn sandwich(l: &[f64], inv: &CMatrix, right: &CMatrix) -> CMatrix {
    let mut out = inv * right;
    for (i, li) in l.iter().enumerate() {
        out.row_mut(i).scale_mut(*li);
    }
    out
}

/// `M - i w I`.
pub fn shifted(m: &CMatrix, omega: f64) -> CMatrix {
    let mut a = m.clone();
    for i in 0..a.nrows() {
        a[(i, i)] -= Complex64::new(0.0, omega);
    }
    a
}
