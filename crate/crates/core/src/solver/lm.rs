//! Levenberg-Marquardt least squares on real parameter vectors.

use nalgebra::{DMatrix, DVector};

/// Stopping rules for [`levenberg_marquardt`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LmOptions {
    pub max_iterations: usize,
    /// Stop once the objective `|r|^2` falls below this value.
    pub objective_tol: f64,
    /// Stop when a step changes the parameters by less than this (relative).
    pub step_tol: f64,
}

impl Default for LmOptions {
    fn default() -> Self {
        Self {
            max_iterations: 500,
            objective_tol: 1e-24,
            step_tol: 1e-15,
        }
    }
}

/// Final state of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct LmResult {
    pub x: DVector<f64>,
    /// `|r(x)|^2`.
    pub objective: f64,
    pub iterations: usize,
}

/// Minimizes `|r(x)|^2` where `eval(x)` returns the residual vector and its
/// Jacobian.
pub fn levenberg_marquardt<F>(x0: DVector<f64>, mut eval: F, opts: LmOptions) -> LmResult
where
    F: FnMut(&DVector<f64>) -> (DVector<f64>, DMatrix<f64>),
{
    let mut x = x0;
    let (mut r, mut j) = eval(&x);
    let mut cost = r.norm_squared();
    let mut lambda = 1e-3;
    let mut iterations = 0;
    while iterations < opts.max_iterations && cost > opts.objective_tol && cost.is_finite() {
        iterations += 1;
        let jt = j.transpose();
        let jtj = &jt * &j;
        let g = &jt * &r;
        let mut accepted = false;
        for _ in 0..30 {
            let mut a = jtj.clone();
            for i in 0..a.nrows() {
                a[(i, i)] += lambda * (jtj[(i, i)] + 1e-12);
            }
            let Some(step) = a.cholesky().map(|c| c.solve(&(-&g))) else {
                lambda *= 10.0;
                continue;
            };
            let candidate = &x + &step;
            let (rc, jc) = eval(&candidate);
            let cc = rc.norm_squared();
            if cc.is_finite() && cc < cost {
                let small = step.norm() <= opts.step_tol * (1.0 + x.norm());
                x = candidate;
                r = rc;
                j = jc;
                cost = cc;
                lambda = (lambda / 3.0).max(1e-15);
                accepted = !small;
                break;
            }
            lambda *= 4.0;
            if lambda > 1e16 {
                break;
            }
        }
        if !accepted {
            break;
        }
    }
    LmResult {
        x,
        objective: cost,
        iterations,
    }
}

/// Forward-difference Jacobian of `f` at `x`.
pub fn numeric_jacobian<F>(x: &DVector<f64>, r0: &DVector<f64>, mut f: F) -> DMatrix<f64>
where
    F: FnMut(&DVector<f64>) -> DVector<f64>,
{
    let mut j = DMatrix::zeros(r0.len(), x.len());
    let mut xp = x.clone();
    for c in 0..x.len() {
        let h = 1e-7 * (1.0 + x[c].abs());
        xp[c] = x[c] + h;
        let rp = f(&xp);
        xp[c] = x[c];
        j.set_column(c, &((rp - r0) / h));
    }
    j
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rosenbrock_reaches_minimum() {
        let eval = |x: &DVector<f64>| {
            let r = DVector::from_vec(vec![10.0 * (x[1] - x[0] * x[0]), 1.0 - x[0]]);
            let j = DMatrix::from_row_slice(2, 2, &[-20.0 * x[0], 10.0, -1.0, 0.0]);
            (r, j)
        };
        let res = levenberg_marquardt(
            DVector::from_vec(vec![-1.2, 1.0]),
            eval,
            LmOptions::default(),
        );
        assert!(res.objective < 1e-20, "{res:?}");
        assert!((res.x[0] - 1.0).abs() < 1e-9);
    }
}
