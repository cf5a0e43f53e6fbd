use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{exp_action, full_svd};
use crate::repbuilder::LinearRepresentation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HeightKind {
    Height,
    SquaredDistance,
}

/// `h(x) = ⟨x, q⟩`, or `L_q(x) = ‖x − q‖²` which has the same critical set on
/// an orbit (the orbit lies in a sphere) and the opposite Hessian.
#[derive(Debug, Clone)]
pub struct HeightSpec {
    pub q: DVector<f64>,
    pub kind: HeightKind,
}

impl HeightSpec {
    pub fn height(q: DVector<f64>) -> Self {
        HeightSpec {
            q,
            kind: HeightKind::Height,
        }
    }

    pub fn value(&self, x: &DVector<f64>) -> f64 {
        match self.kind {
            HeightKind::Height => x.dot(&self.q),
            HeightKind::SquaredDistance => (x - &self.q).norm_squared(),
        }
    }
}

/// Residuals `f_i(x) = ⟨q, X_i x⟩ = ⟨X_iᵀ q, x⟩` of the critical-point
/// equations on the orbit and their derivatives in the exponential chart
/// `t ↦ exp(Σ t_j X_j) x`, whose Jacobian is `J_ij = ⟨X_iᵀ q, X_j x⟩`.
pub struct HeightProblem<'a> {
    pub rep: &'a LinearRepresentation,
    pub spec: HeightSpec,
    w: Vec<DVector<f64>>,
}

impl<'a> HeightProblem<'a> {
    pub fn new(rep: &'a LinearRepresentation, spec: HeightSpec) -> Result<Self> {
        if spec.q.len() != rep.dim() {
            return Err(Error::InvalidArgument(format!(
                "height direction has {} coordinates, representation space has {}",
                spec.q.len(),
                rep.dim()
            )));
        }
        let w = rep.basis.iter().map(|x| x.tr_mul(&spec.q)).collect();
        Ok(HeightProblem { rep, spec, w })
    }

    pub fn q(&self) -> &DVector<f64> {
        &self.spec.q
    }

    pub fn residuals(&self, x: &DVector<f64>) -> DVector<f64> {
        DVector::from_iterator(self.w.len(), self.w.iter().map(|w| w.dot(x)))
    }

    /// `r(x) = Σ f_i(x)²`.
    pub fn residual(&self, x: &DVector<f64>) -> f64 {
        self.residuals(x).norm_squared()
    }

    pub fn jacobian(&self, x: &DVector<f64>) -> DMatrix<f64> {
        let g = self.w.len();
        let u: Vec<DVector<f64>> = self.rep.basis.iter().map(|m| m * x).collect();
        DMatrix::from_fn(g, g, |i, j| self.w[i].dot(&u[j]))
    }

    /// `(r, ∇r)` with `∂r/∂t_j = 2 Σ_i f_i ⟨q, X_i X_j x⟩`.
    pub fn residual_and_gradient(&self, x: &DVector<f64>) -> (f64, DVector<f64>) {
        let f = self.residuals(x);
        let j = self.jacobian(x);
        (f.norm_squared(), j.tr_mul(&f) * 2.0)
    }

    /// Hessian of `h_q` in the exponential chart:
    /// `H_ij = ⟨q, ½(X_i X_j + X_j X_i) x⟩`, scaled by `-2` for `L_q`.
    pub fn hessian(&self, x: &DVector<f64>) -> DMatrix<f64> {
        let j = self.jacobian(x);
        let h = (&j + j.transpose()) * 0.5;
        match self.spec.kind {
            HeightKind::Height => h,
            HeightKind::SquaredDistance => h * -2.0,
        }
    }

    pub fn step(&self, x: &DVector<f64>, delta: &DVector<f64>) -> DVector<f64> {
        exp_action(&self.rep.element(delta.as_slice()), x)
    }

    /// Levenberg–Marquardt on the residuals over the group, starting at `x`.
    pub fn solve(&self, x0: &DVector<f64>, opts: &SolveOptions) -> Solved {
        let g = self.w.len();
        let mut x = x0.clone();
        let mut f = self.residuals(&x);
        let mut r = f.norm_squared();
        let mut lambda = opts.initial_damping;
        let mut iterations = 0;
        while iterations < opts.max_iterations && r > opts.polish_target {
            iterations += 1;
            let j = self.jacobian(&x);
            let jt = j.transpose();
            let a = &jt * &j;
            let b = -(&jt * &f);
            let mut improved = false;
            while lambda < 1e10 {
                let mut m = a.clone();
                for k in 0..g {
                    m[(k, k)] += lambda;
                }
                let Some(chol) = m.cholesky() else {
                    lambda *= 10.0;
                    continue;
                };
                let mut delta = chol.solve(&b);
                let n = delta.norm();
                if n > opts.trust_radius {
                    delta *= opts.trust_radius / n;
                }
                let xn = self.step(&x, &delta);
                let fn_ = self.residuals(&xn);
                let rn = fn_.norm_squared();
                if rn < r {
                    x = xn;
                    f = fn_;
                    let gain = r - rn;
                    r = rn;
                    lambda = (lambda * 0.1).max(1e-14);
                    improved = gain > 0.0;
                    break;
                }
                lambda *= 10.0;
            }
            if !improved {
                break;
            }
        }
        Solved {
            converged: r < opts.tol,
            x,
            residual: r,
            iterations,
        }
    }

    /// Orthonormal coefficient vectors (columns) of a complement of the
    /// isotropy subalgebra at `x`, assuming the orbit dimension is `rank`.
    pub fn isotropy_complement(&self, x: &DVector<f64>, rank: usize) -> DMatrix<f64> {
        let a = self.rep.action_matrix(x);
        full_svd(&a).v.columns(0, rank).into_owned()
    }

    /// Normal Hessian `Cᵀ H C` on a complement of the isotropy directions.
    pub fn reduced_hessian(&self, x: &DVector<f64>, rank: usize) -> (DMatrix<f64>, DMatrix<f64>) {
        let c = self.isotropy_complement(x, rank);
        let h = self.hessian(x);
        (c.transpose() * h * &c, c)
    }
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    /// Acceptance threshold on `r`.
    pub tol: f64,
    /// Iterate until `r` falls below this (or stalls).
    pub polish_target: f64,
    pub max_iterations: usize,
    pub trust_radius: f64,
    pub initial_damping: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            tol: 1e-14,
            polish_target: 1e-28,
            max_iterations: 200,
            trust_radius: 1.0,
            initial_damping: 1e-3,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Solved {
    pub converged: bool,
    pub x: DVector<f64>,
    pub residual: f64,
    pub iterations: usize,
}

/// Index and nullity of a symmetric matrix with the relative band `rel`;
/// `ambiguous` is set when an eigenvalue lies within a factor `10³` above
/// the band.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Signature {
    pub index: usize,
    pub nullity: usize,
    pub positive: usize,
    pub ambiguous: bool,
}

pub fn signature_of(h: &DMatrix<f64>, rel: f64) -> Signature {
    let ev = crate::linalg::symmetric_eigenvalues(h);
    let scale = ev.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let cut = rel * scale;
    let mut s = Signature {
        index: 0,
        nullity: 0,
        positive: 0,
        ambiguous: false,
    };
    for v in ev {
        if v.abs() <= cut || scale == 0.0 {
            s.nullity += 1;
        } else if v < 0.0 {
            s.index += 1;
        } else {
            s.positive += 1;
        }
        if v.abs() > cut && v.abs() < cut * 1e3 {
            s.ambiguous = true;
        }
    }
    s
}
