//! `spin(8)` as triples `(a, b, c)` of `so(8)` elements with
//! `a(ξη) = b(ξ)η + ξc(η)`, its subalgebras `spin(7)`, `spin(6)` and `g₂`.

use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector};

use super::classical::rotation_generator;
use super::rep::{LinearRepresentation, Summand};
use crate::algebra::hypercomplex::{HypercomplexElement, Level, OCTONION_LABELS};
use crate::error::{Error, Result};
use crate::linalg::null_space;

/// Infinitesimal triality triple.
#[derive(Debug, Clone)]
pub struct TrialityTriple {
    pub a: DMatrix<f64>,
    pub b: DMatrix<f64>,
    pub c: DMatrix<f64>,
}

/// Index pairs `(p, q)`, `p < q`, of the standard `so(8)` basis.
pub fn so8_pairs() -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(28);
    for p in 0..8 {
        for q in (p + 1)..8 {
            out.push((p, q));
        }
    }
    out
}

pub fn so8_basis() -> Vec<DMatrix<f64>> {
    so8_pairs()
        .into_iter()
        .map(|(p, q)| rotation_generator(8, p, q))
        .collect()
}

fn oct(v: &DVector<f64>) -> HypercomplexElement {
    HypercomplexElement::new(v.iter().copied().collect()).expect("octonion coordinates")
}

fn vec_of(x: &HypercomplexElement) -> DVector<f64> {
    DVector::from_column_slice(x.coords())
}

/// `basis[s] · basis[t]` for the standard octonion basis.
fn product_table() -> Vec<Vec<DVector<f64>>> {
    (0..8)
        .map(|s| {
            (0..8)
                .map(|t| {
                    let x = HypercomplexElement::basis(Level::Octonion, s);
                    let y = HypercomplexElement::basis(Level::Octonion, t);
                    vec_of(&(&x * &y))
                })
                .collect()
        })
        .collect()
}

fn mul(x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
    vec_of(&(&oct(x) * &oct(y)))
}

fn basis_vec(s: usize) -> DVector<f64> {
    let mut v = DVector::zeros(8);
    v[s] = 1.0;
    v
}

/// Rows `(s, t, component)`; columns `β_m` then `γ_m` for `b = Σβ_m E_m`,
/// `c = Σγ_m E_m`. The right-hand side is `a(ξ_s ξ_t)`.
struct TrialitySystem {
    pinv: DMatrix<f64>,
    table: Vec<Vec<DVector<f64>>>,
    so8: Vec<DMatrix<f64>>,
}

fn system() -> &'static TrialitySystem {
    static SYSTEM: OnceLock<TrialitySystem> = OnceLock::new();
    SYSTEM.get_or_init(|| {
        let so8 = so8_basis();
        let table = product_table();
        let mut m = DMatrix::zeros(512, 56);
        for s in 0..8 {
            for t in 0..8 {
                let row = 64 * s + 8 * t;
                for (k, e) in so8.iter().enumerate() {
                    let lhs = mul(&(e * basis_vec(s)), &basis_vec(t));
                    let rhs = mul(&basis_vec(s), &(e * basis_vec(t)));
                    for comp in 0..8 {
                        m[(row + comp, k)] = lhs[comp];
                        m[(row + comp, 28 + k)] = rhs[comp];
                    }
                }
            }
        }
        let pinv = m
            .pseudo_inverse(1e-10)
            .expect("pseudo-inverse of the triality system");
        TrialitySystem { pinv, table, so8 }
    })
}

fn rhs_for(a: &DMatrix<f64>, table: &[Vec<DVector<f64>>]) -> DVector<f64> {
    let mut rhs = DVector::zeros(512);
    for s in 0..8 {
        for t in 0..8 {
            let v = a * &table[s][t];
            rhs.rows_mut(64 * s + 8 * t, 8).copy_from(&v);
        }
    }
    rhs
}

impl TrialityTriple {
    /// Largest violation of `a(ξη) = b(ξ)η + ξc(η)` over basis pairs.
    pub fn residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for s in 0..8 {
            for t in 0..8 {
                let (xs, xt) = (basis_vec(s), basis_vec(t));
                let lhs = &self.a * mul(&xs, &xt);
                let rhs = mul(&(&self.b * &xs), &xt) + mul(&xs, &(&self.c * &xt));
                worst = worst.max((lhs - rhs).amax());
            }
        }
        worst
    }
}

/// The unique `(b, c)` completing `a ∈ so(8)` to a triality triple.
///
/// `b` and `c` are sought inside `so(8)`: on the full space of 8×8 matrices
/// the system has the one-dimensional kernel `(b, c) = (-γI, γI)`.
pub fn triality_lift(a: &DMatrix<f64>) -> Result<TrialityTriple> {
    if a.shape() != (8, 8) {
        return Err(Error::InvalidArgument("triality lift needs an 8×8 matrix".into()));
    }
    if (a + a.transpose()).amax() > 1e-10 {
        return Err(Error::InvalidArgument("triality lift needs a skew matrix".into()));
    }
    let sys = system();
    let x = &sys.pinv * rhs_for(a, &sys.table);
    let mut b = DMatrix::zeros(8, 8);
    let mut c = DMatrix::zeros(8, 8);
    for (k, e) in sys.so8.iter().enumerate() {
        b += e * x[k];
        c += e * x[28 + k];
    }
    let triple = TrialityTriple { a: a.clone(), b, c };
    let res = triple.residual();
    if res > 1e-8 {
        return Err(Error::Internal(format!("triality system residual {res:e}")));
    }
    Ok(triple)
}

/// Triples whose `a`-component annihilates the given octonion basis elements
/// (by index into the standard basis), spanned by standard rotations.
pub fn spin_triples(annihilated: &[usize]) -> Result<Vec<TrialityTriple>> {
    if let Some(bad) = annihilated.iter().find(|&&i| i >= 8) {
        return Err(Error::InvalidArgument(format!("octonion index {bad} out of range")));
    }
    so8_pairs()
        .into_iter()
        .filter(|(p, q)| !annihilated.contains(p) && !annihilated.contains(q))
        .map(|(p, q)| triality_lift(&rotation_generator(8, p, q)))
        .collect()
}

fn octonion_labels() -> Vec<String> {
    OCTONION_LABELS.iter().map(|s| s.to_string()).collect()
}

/// Representation of the subalgebra `{(a, b, c) : a(v) = 0 for v in constraints}`
/// on `R⁸₀ ⊕ R⁸₊ ⊕ R⁸₋` (the `a`, `b` and `c` slots). Constraints must be
/// standard basis elements of `Ca`, up to sign.
pub fn spin_subalgebra(constraints: &[HypercomplexElement]) -> Result<LinearRepresentation> {
    let mut idx = Vec::new();
    for v in constraints {
        let nz: Vec<usize> = (0..8).filter(|&m| v.coords()[m].abs() > 1e-12).collect();
        if v.level() != Level::Octonion || nz.len() != 1 {
            return Err(Error::InvalidArgument(format!(
                "constraint {v:?} is not a basis element of Ca"
            )));
        }
        idx.push(nz[0]);
    }
    let triples = spin_triples(&idx)?;
    let n = 8 - idx.len();
    let label = format!("spin-{n}");
    let basis = triples
        .iter()
        .map(|t| {
            let mut m = DMatrix::zeros(24, 24);
            m.view_mut((0, 0), (8, 8)).copy_from(&t.a);
            m.view_mut((8, 8), (8, 8)).copy_from(&t.b);
            m.view_mut((16, 16), (8, 8)).copy_from(&t.c);
            m
        })
        .collect();
    let summands = ["R8_0", "R8_+", "R8_-"]
        .iter()
        .enumerate()
        .map(|(k, l)| Summand {
            offset: 8 * k,
            len: 8,
            label: l.to_string(),
            basis_labels: octonion_labels(),
        })
        .collect();
    Ok(LinearRepresentation {
        group_label: label,
        basis,
        summands,
        structure: Vec::new(),
    })
}

/// Derivations of `Ca`: the compact Lie algebra `g₂`, acting on `R⁸ = R ⊕ R⁷`.
pub fn g2_basis() -> Result<LinearRepresentation> {
    let so8 = so8_basis();
    let table = product_table();
    let mut m = DMatrix::zeros(512, 28);
    for (k, e) in so8.iter().enumerate() {
        for s in 0..8 {
            for t in 0..8 {
                let (xs, xt) = (basis_vec(s), basis_vec(t));
                let v = e * &table[s][t] - mul(&(e * &xs), &xt) - mul(&xs, &(e * &xt));
                m.view_mut((64 * s + 8 * t, k), (8, 1)).copy_from(&v);
            }
        }
    }
    let ns = null_space(&m)?;
    let basis = (0..ns.ncols())
        .map(|c| {
            let mut x = DMatrix::zeros(8, 8);
            for (k, e) in so8.iter().enumerate() {
                x += e * ns[(k, c)];
            }
            x
        })
        .collect();
    LinearRepresentation::new("g2", basis, "R8", octonion_labels())
}

/// Compression of a single-summand representation to the span of some of its
/// coordinate vectors, which must be invariant.
pub fn restrict_to_coordinates(
    rep: &LinearRepresentation,
    coords: &[usize],
    label: &str,
) -> Result<LinearRepresentation> {
    let d = rep.dim();
    let sub = &rep.summands[0];
    for x in &rep.basis {
        for &c in coords {
            for r in 0..d {
                if !coords.contains(&r) && x[(r, c)].abs() > 1e-10 {
                    return Err(Error::InvalidArgument(format!(
                        "coordinate span is not invariant under {}",
                        rep.group_label
                    )));
                }
            }
        }
    }
    let basis = rep
        .basis
        .iter()
        .map(|x| DMatrix::from_fn(coords.len(), coords.len(), |i, j| x[(coords[i], coords[j])]))
        .collect();
    let labels = coords
        .iter()
        .map(|&c| sub.basis_labels.get(c).cloned().unwrap_or_else(|| format!("x{c}")))
        .collect();
    LinearRepresentation::new(rep.group_label.clone(), basis, label, labels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::commutator;

    #[test]
    fn lift_of_zero_is_zero() {
        let t = triality_lift(&DMatrix::zeros(8, 8)).unwrap();
        assert!(t.b.amax() < 1e-14 && t.c.amax() < 1e-14);
    }

    #[test]
    fn lift_rejects_non_skew() {
        assert!(triality_lift(&DMatrix::identity(8, 8)).is_err());
    }

    #[test]
    fn all_generators_satisfy_derivation_identity() {
        for x in so8_basis() {
            assert!(triality_lift(&x).unwrap().residual() < 1e-10);
        }
    }

    #[test]
    fn subalgebra_dimensions() {
        let one = HypercomplexElement::octonion("1").unwrap();
        let i = HypercomplexElement::octonion("i").unwrap();
        assert_eq!(spin_subalgebra(&[]).unwrap().group_dim(), 28);
        assert_eq!(spin_subalgebra(&[one.clone()]).unwrap().group_dim(), 21);
        assert_eq!(spin_subalgebra(&[one, i]).unwrap().group_dim(), 15);
        assert_eq!(g2_basis().unwrap().group_dim(), 14);
    }

    #[test]
    fn spin7_has_c_equal_to_twisted_b() {
        // C = B̃ with B̃(x) = conj(B(conj x))
        let conj = DMatrix::from_diagonal(&DVector::from_iterator(
            8,
            (0..8).map(|m| if m == 0 { 1.0 } else { -1.0 }),
        ));
        for t in spin_triples(&[0]).unwrap() {
            assert!((&t.c - &conj * &t.b * &conj).amax() < 1e-10);
        }
    }

    #[test]
    fn g2_kills_unit_and_closes() {
        let g2 = g2_basis().unwrap();
        for x in &g2.basis {
            assert!(x.column(0).amax() < 1e-12);
        }
        assert!(g2.closure_residual().unwrap() < 1e-9);
    }

    #[test]
    fn lift_is_a_homomorphism() {
        let basis = so8_basis();
        let t1 = triality_lift(&basis[3]).unwrap();
        let t2 = triality_lift(&basis[17]).unwrap();
        let t12 = triality_lift(&commutator(&basis[3], &basis[17])).unwrap();
        assert!((commutator(&t1.b, &t2.b) - t12.b).amax() < 1e-10);
        assert!((commutator(&t1.c, &t2.c) - t12.c).amax() < 1e-10);
    }
}
