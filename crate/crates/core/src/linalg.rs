//! Dense linear algebra helpers shared by every module: rank decisions with a
//! gap check, null spaces, orthonormal complements and matrix exponentials.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Relative singular-value cutoff for rank decisions.
pub const RANK_CUTOFF: f64 = 1e-8;
/// Minimum ratio `σ_r / σ_{r+1}` across the cutoff.
pub const RANK_GAP: f64 = 1e3;

/// Singular values (descending), thin left singular vectors and a complete
/// orthonormal basis of right singular vectors.
pub struct FullSvd {
    /// `nrows × min(nrows, ncols)`.
    pub u: DMatrix<f64>,
    /// `min(nrows, ncols)` values.
    pub singular_values: Vec<f64>,
    /// Columns are right singular vectors, `ncols × ncols`.
    pub v: DMatrix<f64>,
}

fn sorted_order(values: &DVector<f64>) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&x, &y| values[y].partial_cmp(&values[x]).unwrap_or(std::cmp::Ordering::Equal));
    order
}

pub fn full_svd(a: &DMatrix<f64>) -> FullSvd {
    let (m, n) = a.shape();
    let k = m.min(n);
    if k == 0 {
        return FullSvd {
            u: DMatrix::zeros(m, 0),
            singular_values: Vec::new(),
            v: DMatrix::identity(n, n),
        };
    }
    // Work on the tall orientation; for a wide `a` the roles of U and V swap.
    let wide = m < n;
    let tall = if wide { a.transpose() } else { a.clone() };
    let svd = tall.svd(true, true);
    let left = svd.u.expect("svd u");
    let right = svd.v_t.expect("svd v_t").transpose();
    let order = sorted_order(&svd.singular_values);
    let singular_values: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();
    let (u_src, v_src) = if wide { (&right, &left) } else { (&left, &right) };
    let u = DMatrix::from_fn(m, k, |r, c| u_src[(r, order[c])]);
    let vs: Vec<DVector<f64>> = order.iter().map(|&i| v_src.column(i).into_owned()).collect();
    let basis = orthonormalize_in_order(&vs, n);
    let v = DMatrix::from_columns(&basis);
    FullSvd {
        u,
        singular_values,
        v,
    }
}

/// Gram–Schmidt in the given order, skipping vectors that become negligible,
/// completed with standard basis vectors until `dim` vectors are produced.
fn orthonormalize_in_order(vs: &[DVector<f64>], dim: usize) -> Vec<DVector<f64>> {
    let mut out: Vec<DVector<f64>> = Vec::with_capacity(dim);
    let push = |v: &DVector<f64>, out: &mut Vec<DVector<f64>>| {
        let mut w = v.clone();
        for _ in 0..2 {
            for b in out.iter() {
                let c = b.dot(&w);
                w.axpy(-c, b, 1.0);
            }
        }
        let nrm = w.norm();
        if nrm > 1e-6 {
            out.push(w / nrm);
        }
    };
    for v in vs {
        if out.len() == dim {
            break;
        }
        push(v, &mut out);
    }
    let mut e = 0;
    while out.len() < dim && e < dim {
        let mut v = DVector::zeros(dim);
        v[e] = 1.0;
        push(&v, &mut out);
        e += 1;
    }
    out
}

/// Rank from a descending singular-value list using the relative cutoff and
/// the mandatory gap check.
pub fn numeric_rank(singular_values: &[f64]) -> Result<usize> {
    numeric_rank_with(singular_values, RANK_CUTOFF, RANK_GAP)
}

pub fn numeric_rank_with(singular_values: &[f64], cutoff: f64, gap: f64) -> Result<usize> {
    let smax = singular_values.first().copied().unwrap_or(0.0);
    if smax <= f64::MIN_POSITIVE {
        return Ok(0);
    }
    let threshold = cutoff * smax;
    let rank = singular_values.iter().filter(|s| **s > threshold).count();
    if rank < singular_values.len() {
        let above = singular_values[rank - 1];
        let below = singular_values[rank];
        let ratio = if below > 0.0 { above / below } else { f64::INFINITY };
        if ratio <= gap {
            return Err(Error::AmbiguousRank {
                cutoff: threshold,
                above,
                below,
                ratio,
            });
        }
    }
    Ok(rank)
}

/// Orthonormal basis of the null space of `a` (columns).
pub fn null_space(a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = a.ncols();
    if a.nrows() == 0 {
        return Ok(DMatrix::identity(n, n));
    }
    let svd = full_svd(a);
    let rank = numeric_rank(&svd.singular_values)?;
    Ok(svd.v.columns(rank, n - rank).into_owned())
}

/// Orthonormal basis of the column span of `a`.
pub fn column_span(a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if a.ncols() == 0 {
        return Ok(DMatrix::zeros(a.nrows(), 0));
    }
    let svd = a.clone().svd(true, false);
    let order = sorted_order(&svd.singular_values);
    let values: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();
    let rank = numeric_rank(&values)?;
    let u = svd.u.expect("svd u");
    Ok(DMatrix::from_fn(a.nrows(), rank, |r, c| u[(r, order[c])]))
}

/// Orthonormal basis of the orthogonal complement of the span of the
/// orthonormal columns of `basis` inside `R^dim`.
pub fn orthogonal_complement(basis: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let dim = basis.nrows();
    if basis.ncols() == 0 {
        return Ok(DMatrix::identity(dim, dim));
    }
    null_space(&basis.transpose())
}

/// Residual of projecting `target` onto the span of `columns` (least squares).
pub fn projection_residual(columns: &DMatrix<f64>, target: &DVector<f64>) -> f64 {
    if columns.ncols() == 0 {
        return target.norm();
    }
    match column_span(columns) {
        Ok(q) => {
            let proj = &q * (q.transpose() * target);
            (target - proj).norm()
        }
        Err(_) => {
            let svd = columns.clone().svd(true, true);
            let x = svd.solve(target, 1e-12).unwrap_or_else(|_| DVector::zeros(columns.ncols()));
            (target - columns * x).norm()
        }
    }
}

pub fn flatten(m: &DMatrix<f64>) -> DVector<f64> {
    DVector::from_iterator(m.len(), m.iter().copied())
}

/// Matrix whose columns are the flattened inputs.
pub fn flatten_all(ms: &[DMatrix<f64>]) -> DMatrix<f64> {
    let len = ms.first().map(|m| m.len()).unwrap_or(0);
    let mut out = DMatrix::zeros(len, ms.len());
    for (c, m) in ms.iter().enumerate() {
        out.set_column(c, &flatten(m));
    }
    out
}

pub fn commutator(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    a * b - b * a
}

pub fn skew_defect(x: &DMatrix<f64>) -> f64 {
    (x + x.transpose()).norm()
}

/// `exp(X)` by scaling and squaring with a Taylor kernel.
pub fn expm(x: &DMatrix<f64>) -> DMatrix<f64> {
    let n = x.nrows();
    let norm = x.norm();
    let mut squarings = 0u32;
    let mut scaled = x.clone();
    if norm > 0.25 {
        squarings = (norm / 0.25).log2().ceil() as u32;
        scaled /= 2f64.powi(squarings as i32);
    }
    let mut result = DMatrix::identity(n, n);
    let mut term = DMatrix::identity(n, n);
    for k in 1..=18 {
        term = &term * &scaled / k as f64;
        result += &term;
        if term.norm() < 1e-18 {
            break;
        }
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

/// `exp(Y) v` without forming the exponential, for the small steps taken by
/// the critical-point search.
pub fn exp_action(y: &DMatrix<f64>, v: &DVector<f64>) -> DVector<f64> {
    let norm = y.norm();
    let steps = if norm > 0.5 { (norm / 0.5).ceil() as usize } else { 1 };
    let h = 1.0 / steps as f64;
    let mut out = v.clone();
    for _ in 0..steps {
        let mut term = out.clone();
        let mut acc = out.clone();
        for k in 1..=24 {
            term = y * &term * (h / k as f64);
            acc += &term;
            if term.norm() <= 1e-17 * acc.norm().max(1e-300) {
                break;
            }
        }
        out = acc;
    }
    out
}

/// Symmetric eigenvalues in ascending order.
pub fn symmetric_eigenvalues(h: &DMatrix<f64>) -> Vec<f64> {
    let sym = (h + h.transpose()) * 0.5;
    let mut ev: Vec<f64> = sym.symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    ev
}

/// Least-squares coordinates of the flattened `target` in the span of the
/// flattened `basis` matrices, plus the residual norm.
pub fn span_coordinates(basis: &[DMatrix<f64>], target: &DMatrix<f64>) -> (DVector<f64>, f64) {
    let a = flatten_all(basis);
    let b = flatten(target);
    if a.ncols() == 0 {
        return (DVector::zeros(0), b.norm());
    }
    let svd = a.clone().svd(true, true);
    let x = svd
        .solve(&b, 1e-12)
        .unwrap_or_else(|_| DVector::zeros(basis.len()));
    let res = (&b - &a * &x).norm();
    (x, res)
}
