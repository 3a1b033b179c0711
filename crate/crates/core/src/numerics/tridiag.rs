//! Complex tridiagonal solver: Gaussian elimination with partial pivoting
//! (LAPACK `gtsv` layout, one extra super-diagonal of fill-in) followed by one
//! step of iterative refinement and a backward-error acceptance check.

use num_complex::Complex64;

use super::NumericsError;

/// Normwise backward error accepted by [`solve_tridiagonal`].
pub const BACKWARD_ERROR_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexTridiagonal {
    pub sub: Vec<Complex64>,
    pub diag: Vec<Complex64>,
    pub sup: Vec<Complex64>,
}

impl ComplexTridiagonal {
    pub fn new(sub: Vec<Complex64>, diag: Vec<Complex64>, sup: Vec<Complex64>) -> Result<Self, NumericsError> {
        let n = diag.len();
        if n == 0 || sub.len() + 1 != n || sup.len() + 1 != n {
            return Err(NumericsError::Dimension(format!(
                "diag {}, sub {}, sup {}",
                n,
                sub.len(),
                sup.len()
            )));
        }
        Ok(ComplexTridiagonal { sub, diag, sup })
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i] * x[i];
                if i > 0 {
                    s += self.sub[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    s += self.sup[i] * x[i + 1];
                }
                s
            })
            .collect()
    }

    /// Infinity norm (max absolute row sum).
    pub fn norm_inf(&self) -> f64 {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i].norm();
                if i > 0 {
                    s += self.sub[i - 1].norm();
                }
                if i + 1 < n {
                    s += self.sup[i].norm();
                }
                s
            })
            .fold(0.0, f64::max)
    }
}

struct Factor {
    // U has three diagonals d, du, du2; L multipliers in dl; row swaps in swapped.
    d: Vec<Complex64>,
    du: Vec<Complex64>,
    du2: Vec<Complex64>,
    dl: Vec<Complex64>,
    swapped: Vec<bool>,
}

fn factor(a: &ComplexTridiagonal) -> Option<Factor> {
    let n = a.len();
    let mut d = a.diag.clone();
    let mut du = a.sup.clone();
    let mut dl = a.sub.clone();
    let mut du2 = vec![Complex64::new(0.0, 0.0); n.saturating_sub(2)];
    let mut swapped = vec![false; n.saturating_sub(1)];
    for i in 0..n.saturating_sub(1) {
        if d[i].l1_norm() >= dl[i].l1_norm() {
            if d[i].l1_norm() == 0.0 {
                return None;
            }
            let m = dl[i] / d[i];
            dl[i] = m;
            d[i + 1] -= m * du[i];
        } else {
            let m = d[i] / dl[i];
            d[i] = dl[i];
            dl[i] = m;
            let t = du[i];
            du[i] = d[i + 1];
            d[i + 1] = t - m * d[i + 1];
            if i + 2 < n {
                du2[i] = du[i + 1];
                du[i + 1] = -m * du[i + 1];
            }
            swapped[i] = true;
        }
    }
    if d[n - 1].l1_norm() == 0.0 {
        return None;
    }
    Some(Factor { d, du, du2, dl, swapped })
}

impl Factor {
    fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.d.len();
        let mut x = b.to_vec();
        for i in 0..n.saturating_sub(1) {
            if self.swapped[i] {
                x.swap(i, i + 1);
            }
            let t = x[i];
            x[i + 1] -= self.dl[i] * t;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            if i + 1 < n {
                s -= self.du[i] * x[i + 1];
            }
            if i + 2 < n {
                s -= self.du2[i] * x[i + 2];
            }
            x[i] = s / self.d[i];
        }
        x
    }
}

fn max_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Solves `A x = b`. Accepts the result when the normwise backward error
/// `|Ax - b| / (|A| |x| + |b|)` is at most [`BACKWARD_ERROR_TOL`].
pub fn solve_tridiagonal(a: &ComplexTridiagonal, b: &[Complex64]) -> Result<Vec<Complex64>, NumericsError> {
    solve_tridiagonal_report(a, b).map(|(x, _)| x)
}

/// [`solve_tridiagonal`] that also returns the achieved backward error.
pub fn solve_tridiagonal_report(
    a: &ComplexTridiagonal,
    b: &[Complex64],
) -> Result<(Vec<Complex64>, f64), NumericsError> {
    let n = a.len();
    if b.len() != n {
        return Err(NumericsError::Dimension(format!("rhs {} for n {}", b.len(), n)));
    }
    let anorm = a.norm_inf();
    let fac = factor(a).ok_or(NumericsError::Singular { condition: f64::INFINITY })?;
    let mut x = fac.solve(b);

    let residual = |x: &[Complex64]| -> Vec<Complex64> {
        a.mul_vec(x).iter().zip(b).map(|(ax, bi)| ax - bi).collect()
    };
    let r = residual(&x);
    let dx = fac.solve(&r);
    for (xi, di) in x.iter_mut().zip(&dx) {
        *xi -= di;
    }

    let r = residual(&x);
    let xnorm = max_norm(&x);
    let bnorm = max_norm(b);
    let rnorm = max_norm(&r);
    let denom = anorm * xnorm + bnorm;
    let backward = if denom > 0.0 { rnorm / denom } else { 0.0 };
    if !backward.is_finite() || x.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) || backward > BACKWARD_ERROR_TOL {
        let condition = if bnorm > 0.0 { anorm * xnorm / bnorm } else { f64::INFINITY };
        return Err(NumericsError::Singular { condition });
    }
    debug_assert!(backward <= BACKWARD_ERROR_TOL);
    Ok((x, backward))
}
