//! Standard matrix bases of `so(n)`, `su(n)` and `sp(n)` and the adjoint
//! representation.

use nalgebra::{DMatrix, DVector};

use super::rep::{LinearRepresentation, Summand};
use crate::algebra::hypercomplex::{left_mul, quat, right_mul};
use crate::error::{Error, Result};
use crate::linalg::{commutator, span_coordinates};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    So,
    Su,
    Sp,
}

impl Family {
    pub fn label(self) -> &'static str {
        match self {
            Family::So => "so",
            Family::Su => "su",
            Family::Sp => "sp",
        }
    }

    /// Dimension of the Lie algebra of rank-tag `n`.
    pub fn algebra_dim(self, n: usize) -> usize {
        match self {
            Family::So => n * (n.saturating_sub(1)) / 2,
            Family::Su => (n * n).saturating_sub(1),
            Family::Sp => n * (2 * n + 1),
        }
    }
}

/// Generator of `so(n)` rotating `e_a` toward `e_b`.
pub fn rotation_generator(n: usize, a: usize, b: usize) -> DMatrix<f64> {
    let mut x = DMatrix::zeros(n, n);
    x[(b, a)] = 1.0;
    x[(a, b)] = -1.0;
    x
}

/// The vector representation of `so(n)`, `su(n)` or `sp(n)`.
///
/// `su(n)` acts on `C^n` realified as `R^{2n}` with coordinates interleaved
/// `(re z_1, im z_1, …)`; `sp(n)` acts on `H^n = R^{4n}` by left
/// multiplication, commuting with the right multiplications by `i` and `j`.
/// `realified = false` is only meaningful for `so`.
pub fn classical_basis(family: Family, n: usize, realified: bool) -> Result<LinearRepresentation> {
    if n == 0 || (family == Family::So && n < 2) {
        return Err(Error::InvalidArgument(format!(
            "{}({n}) is not a valid classical algebra here",
            family.label()
        )));
    }
    if !realified && family != Family::So {
        return Err(Error::InvalidArgument(format!(
            "{}({n}) has to be realified to act on a real space",
            family.label()
        )));
    }
    match family {
        Family::So => so_basis(n),
        Family::Su => su_basis(n),
        Family::Sp => sp_basis(n),
    }
}

fn so_basis(n: usize) -> Result<LinearRepresentation> {
    let mut basis = Vec::new();
    for a in 0..n {
        for b in (a + 1)..n {
            basis.push(rotation_generator(n, a, b));
        }
    }
    let labels = (1..=n).map(|i| format!("e{i}")).collect();
    LinearRepresentation::new(format!("so-{n}"), basis, format!("R{n}"), labels)
}

/// Realification of an `n × n` complex matrix given by real and imaginary parts.
fn realify(re: &DMatrix<f64>, im: &DMatrix<f64>) -> DMatrix<f64> {
    let n = re.nrows();
    let mut out = DMatrix::zeros(2 * n, 2 * n);
    for r in 0..n {
        for c in 0..n {
            let (a, b) = (re[(r, c)], im[(r, c)]);
            out[(2 * r, 2 * c)] = a;
            out[(2 * r, 2 * c + 1)] = -b;
            out[(2 * r + 1, 2 * c)] = b;
            out[(2 * r + 1, 2 * c + 1)] = a;
        }
    }
    out
}

/// Complex structure `i·I` on `C^n` realified.
pub fn complex_structure(n: usize) -> DMatrix<f64> {
    realify(&DMatrix::zeros(n, n), &DMatrix::identity(n, n))
}

fn su_basis(n: usize) -> Result<LinearRepresentation> {
    let zero = DMatrix::zeros(n, n);
    let mut basis = Vec::new();
    for a in 0..n {
        for b in (a + 1)..n {
            let mut re = DMatrix::zeros(n, n);
            re[(a, b)] = 1.0;
            re[(b, a)] = -1.0;
            basis.push(realify(&re, &zero));
            let mut im = DMatrix::zeros(n, n);
            im[(a, b)] = 1.0;
            im[(b, a)] = 1.0;
            basis.push(realify(&zero, &im));
        }
    }
    for a in 0..n.saturating_sub(1) {
        let mut im = DMatrix::zeros(n, n);
        im[(a, a)] = 1.0;
        im[(a + 1, a + 1)] = -1.0;
        basis.push(realify(&zero, &im));
    }
    let labels = (1..=n)
        .flat_map(|i| [format!("e{i}"), format!("ie{i}")])
        .collect();
    Ok(
        LinearRepresentation::new(format!("su-{n}"), basis, format!("C{n}"), labels)?
            .with_structure("J", complex_structure(n)),
    )
}

fn quaternion_labels(n: usize) -> Vec<String> {
    if n == 1 {
        return ["1", "i", "j", "k"].iter().map(|s| s.to_string()).collect();
    }
    (1..=n)
        .flat_map(|m| ["1", "i", "j", "k"].map(|u| format!("{u}.{m}")))
        .collect()
}

fn sp_basis(n: usize) -> Result<LinearRepresentation> {
    let d = 4 * n;
    let units = [quat(0.0, 1.0, 0.0, 0.0), quat(0.0, 0.0, 1.0, 0.0), quat(0.0, 0.0, 0.0, 1.0)];
    let place = |m: &mut DMatrix<f64>, r: usize, c: usize, block: &DMatrix<f64>| {
        m.view_mut((4 * r, 4 * c), (4, 4)).copy_from(block);
    };
    let mut basis = Vec::new();
    for r in 0..n {
        for u in &units {
            let mut m = DMatrix::zeros(d, d);
            place(&mut m, r, r, &left_mul(u));
            basis.push(m);
        }
    }
    let one = DMatrix::<f64>::identity(4, 4);
    for r in 0..n {
        for c in (r + 1)..n {
            let mut m = DMatrix::zeros(d, d);
            place(&mut m, r, c, &one);
            place(&mut m, c, r, &(-&one));
            basis.push(m);
            for u in &units {
                let lu = left_mul(u);
                let mut m = DMatrix::zeros(d, d);
                place(&mut m, r, c, &lu);
                place(&mut m, c, r, &lu);
                basis.push(m);
            }
        }
    }
    let block_diag = |b: &DMatrix<f64>| {
        let mut m = DMatrix::zeros(d, d);
        for r in 0..n {
            place(&mut m, r, r, b);
        }
        m
    };
    let label = if n == 1 { "H".to_string() } else { format!("H{n}") };
    Ok(
        LinearRepresentation::new(format!("sp-{n}"), basis, label, quaternion_labels(n))?
            .with_structure("J", block_diag(&right_mul(&units[0])))
            .with_structure("K", block_diag(&right_mul(&units[1]))),
    )
}

/// Killing form `B(X_i, X_j) = tr(ad X_i ad X_j)` and the structure-constant
/// matrices `ad X_k` in the coordinates of the given basis.
pub fn structure_constants(basis: &[DMatrix<f64>]) -> Result<(Vec<DMatrix<f64>>, DMatrix<f64>)> {
    let n = basis.len();
    let mut ads = Vec::with_capacity(n);
    for xk in basis {
        let mut ad = DMatrix::zeros(n, n);
        for (l, xl) in basis.iter().enumerate() {
            let (coords, res) = span_coordinates(basis, &commutator(xk, xl));
            if res > 1e-9 {
                return Err(Error::InvalidArgument(format!(
                    "basis is not closed under the bracket (residual {res:e})"
                )));
            }
            ad.set_column(l, &coords);
        }
        ads.push(ad);
    }
    let mut killing = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            killing[(i, j)] = (&ads[i] * &ads[j]).trace();
        }
    }
    Ok((ads, killing))
}

/// Adjoint representation, written in a basis orthonormal for `-B`. The
/// algebra basis indexing of `rep` is kept so the result can be summed with it.
pub fn adjoint(rep: &LinearRepresentation) -> Result<LinearRepresentation> {
    let (ads, killing) = structure_constants(&rep.basis)?;
    let neg = -killing;
    let chol = neg.cholesky().ok_or_else(|| {
        Error::InvalidArgument("Killing form is not negative definite (not compact semisimple)".into())
    })?;
    // -B = L Lᵀ; new coordinates y = Lᵀ x are orthonormal.
    let l = chol.l();
    let lt = l.transpose();
    let lt_inv = lt
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Internal("Cholesky factor not invertible".into()))?;
    let basis: Vec<DMatrix<f64>> = ads.iter().map(|a| &lt * a * &lt_inv).collect();
    let n = basis.len();
    Ok(LinearRepresentation {
        group_label: rep.group_label.clone(),
        basis,
        summands: vec![Summand {
            offset: 0,
            len: n,
            label: "ad".into(),
            basis_labels: (1..=n).map(|i| format!("y{i}")).collect(),
        }],
        structure: Vec::new(),
    })
}

/// Coordinates `(re, im)` interleaved for a complex vector.
pub fn complex_vector(entries: &[(f64, f64)]) -> DVector<f64> {
    DVector::from_iterator(entries.len() * 2, entries.iter().flat_map(|(a, b)| [*a, *b]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_skew(rep: &LinearRepresentation) -> bool {
        rep.max_skew_defect() < 1e-12
    }

    #[test]
    fn so3_brackets_cycle() {
        let so3 = classical_basis(Family::So, 3, false).unwrap();
        assert_eq!(so3.group_dim(), 3);
        let b = &so3.basis;
        // X01, X02, X12: [X01, X02] = -X12 etc., each bracket is ± another generator
        for (i, j, k) in [(0, 1, 2), (1, 2, 0), (0, 2, 1)] {
            let c = commutator(&b[i], &b[j]);
            assert!((&c - &b[k]).norm() < 1e-14 || (&c + &b[k]).norm() < 1e-14);
        }
    }

    #[test]
    fn su4_commutes_with_j() {
        let su4 = classical_basis(Family::Su, 4, true).unwrap();
        assert_eq!(su4.group_dim(), 15);
        assert!(all_skew(&su4));
        let j = &su4.structure[0].1;
        for x in &su4.basis {
            assert!(commutator(x, j).norm() < 1e-14);
        }
        assert!(su4.closure_residual().unwrap() < 1e-9);
    }

    #[test]
    fn sp2_commutes_with_j_and_k() {
        let sp2 = classical_basis(Family::Sp, 2, true).unwrap();
        assert_eq!(sp2.group_dim(), 10);
        assert!(all_skew(&sp2));
        for (_, s) in &sp2.structure {
            for x in &sp2.basis {
                assert!(commutator(x, s).norm() < 1e-14);
            }
        }
        assert!(sp2.closure_residual().unwrap() < 1e-9);
    }

    #[test]
    fn dimensions_match_abstract_formulas() {
        for n in 2..6 {
            assert_eq!(classical_basis(Family::So, n, false).unwrap().group_dim(), Family::So.algebra_dim(n));
            assert_eq!(classical_basis(Family::Su, n, true).unwrap().group_dim(), Family::Su.algebra_dim(n));
            assert_eq!(classical_basis(Family::Sp, n, true).unwrap().group_dim(), Family::Sp.algebra_dim(n));
        }
    }

    #[test]
    fn invalid_rank_rejected() {
        assert!(classical_basis(Family::So, 1, false).is_err());
        assert!(classical_basis(Family::Su, 0, true).is_err());
        assert!(classical_basis(Family::Su, 3, false).is_err());
    }

    #[test]
    fn adjoint_is_skew_and_a_representation() {
        let su3 = classical_basis(Family::Su, 3, true).unwrap();
        let ad = adjoint(&su3).unwrap();
        assert_eq!(ad.dim(), 8);
        assert!(ad.max_skew_defect() < 1e-10);
        // ad respects brackets with the same structure constants
        let (consts, _) = structure_constants(&su3.basis).unwrap();
        for i in 0..8 {
            for j in 0..8 {
                let lhs = commutator(&ad.basis[i], &ad.basis[j]);
                let mut rhs = DMatrix::zeros(8, 8);
                for k in 0..8 {
                    rhs += &ad.basis[k] * consts[i][(k, j)];
                }
                assert!((lhs - rhs).norm() < 1e-10);
            }
        }
    }
}
