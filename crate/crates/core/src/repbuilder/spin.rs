//! Spin representations from explicit Clifford module generators.
//!
//! A model either carries matrices for all `n` generators of a Clifford
//! algebra (the Lie algebra is spanned by `½ γ_a γ_b`), or matrices for the
//! `n - 1` generators of `Cl(n-1)`, in which case `Cl⁰(n)` acts through the
//! isomorphism `e_a e_b ↦ e_a e_b`, `e_a e_{n-1} ↦ e_a`.

use nalgebra::DMatrix;
use num_rational::Rational64;

use super::rep::{LinearRepresentation, Summand};
use crate::algebra::clifford::{
    blade_indices, clifford_product, even_iso, CliffordElement, Signature,
};
use crate::algebra::hypercomplex::{
    left_mul, quat, right_mul, HypercomplexElement, Level, OCTONION_LABELS,
    OCTONION_LABELS_ALT,
};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    /// Generators of `Cl(n)` or `Cl₊(n)`.
    Direct,
    /// Generators of `Cl(n-1)`, used through the even-subalgebra isomorphism.
    Even,
}

#[derive(Debug, Clone)]
pub struct CliffordModel {
    /// The group is `Spin(n)`.
    pub n: usize,
    pub signature: Signature,
    pub route: Route,
    pub generators: Vec<DMatrix<f64>>,
}

/// Index pairs `(a, b)`, `a < b < n`, in the order used for every `spin(n)` basis.
pub fn spin_pairs(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for a in 0..n {
        for b in (a + 1)..n {
            out.push((a, b));
        }
    }
    out
}

fn one() -> Rational64 {
    Rational64::from_integer(1)
}

impl CliffordModel {
    pub fn new(n: usize, signature: Signature, route: Route, generators: Vec<DMatrix<f64>>) -> Result<Self> {
        let expected = match route {
            Route::Direct => n,
            Route::Even => n - 1,
        };
        if generators.len() != expected {
            return Err(Error::InvalidArgument(format!(
                "Spin({n}) via {route:?} needs {expected} generators, got {}",
                generators.len()
            )));
        }
        if route == Route::Even && signature != Signature::Negative {
            return Err(Error::InvalidArgument(
                "the even route uses Cl(n-1) with e_i² = -1".into(),
            ));
        }
        Ok(CliffordModel {
            n,
            signature,
            route,
            generators,
        })
    }

    pub fn module_dim(&self) -> usize {
        self.generators[0].nrows()
    }

    /// Largest violation of `γ_a γ_b + γ_b γ_a = 2 s δ_ab`.
    pub fn relation_defect(&self) -> f64 {
        let s = match (self.route, self.signature) {
            (Route::Even, _) | (_, Signature::Negative) => -1.0,
            (_, Signature::Positive) => 1.0,
        };
        let d = self.module_dim();
        let mut worst: f64 = 0.0;
        for (a, ga) in self.generators.iter().enumerate() {
            for (b, gb) in self.generators.iter().enumerate() {
                let mut m = ga * gb + gb * ga;
                if a == b {
                    m -= DMatrix::<f64>::identity(d, d) * (2.0 * s);
                }
                worst = worst.max(m.amax());
            }
        }
        worst
    }

    fn product_of(&self, indices: &[usize]) -> DMatrix<f64> {
        let d = self.module_dim();
        let mut m = DMatrix::identity(d, d);
        for &i in indices {
            m = m * &self.generators[i];
        }
        m
    }

    /// Image of a Clifford element of `Cl(n)` (or `Cl₊(n)`) on the module.
    /// On the even route only even elements have an image.
    pub fn element_matrix(&self, x: &CliffordElement) -> Result<DMatrix<f64>> {
        if x.n() != self.n || x.signature() != self.signature {
            return Err(Error::InvalidArgument(format!(
                "element of Cl({}) does not act on a Spin({}) model",
                x.n(),
                self.n
            )));
        }
        let image = match self.route {
            Route::Direct => x.clone(),
            Route::Even => even_iso(x)?,
        };
        let d = self.module_dim();
        let mut m = DMatrix::zeros(d, d);
        for (blade, c) in image.terms() {
            let c = *c.numer() as f64 / *c.denom() as f64;
            m += self.product_of(&blade_indices(blade)) * c;
        }
        Ok(m)
    }

    /// Image of the ordered generator word `e_{i_1} e_{i_2} ⋯`.
    pub fn word_matrix(&self, word: &[usize]) -> Result<DMatrix<f64>> {
        let x = CliffordElement::generator_product(self.n, self.signature, word)?;
        self.element_matrix(&x)
    }

    /// Basis `½ e_a e_b`, `a < b`, of `spin(n)` on the module.
    pub fn spin_algebra(&self) -> Vec<DMatrix<f64>> {
        spin_pairs(self.n)
            .into_iter()
            .map(|(a, b)| match self.route {
                Route::Direct => &self.generators[a] * &self.generators[b] * 0.5,
                Route::Even if b == self.n - 1 => &self.generators[a] * 0.5,
                Route::Even => &self.generators[a] * &self.generators[b] * 0.5,
            })
            .collect()
    }

    pub fn spin_rep(&self, summand: &str, labels: Vec<String>) -> Result<LinearRepresentation> {
        LinearRepresentation::new(format!("spin-{}", self.n), self.spin_algebra(), summand, labels)
    }

    /// The vector representation `R^n` on the same algebra basis.
    pub fn vector_rep(&self, labels: Vec<String>) -> Result<LinearRepresentation> {
        vector_rep(self.n, self.signature, labels)
    }
}

/// `spin(n)` acting on `R^n = span{e_c}` by `X ↦ [X, ·]`, with the basis
/// `½ e_a e_b` computed exactly in the Clifford algebra.
pub fn vector_rep(n: usize, signature: Signature, labels: Vec<String>) -> Result<LinearRepresentation> {
    let half = Rational64::new(1, 2);
    let gens: Vec<CliffordElement> = (0..n)
        .map(|c| CliffordElement::generator(n, signature, c))
        .collect::<Result<_>>()?;
    let mut basis = Vec::new();
    for (a, b) in spin_pairs(n) {
        let x = CliffordElement::generator_product(n, signature, &[a, b])?.scale(half);
        let mut m = DMatrix::zeros(n, n);
        for (c, ec) in gens.iter().enumerate() {
            let br = clifford_product(&x, ec)?.sub(&clifford_product(ec, &x)?)?;
            for (blade, coeff) in br.terms() {
                if blade.count_ones() != 1 {
                    return Err(Error::Internal(format!("bracket left the vector space: {br:?}")));
                }
                let d = blade.trailing_zeros() as usize;
                m[(d, c)] = *coeff.numer() as f64 / *coeff.denom() as f64;
            }
        }
        basis.push(m);
    }
    LinearRepresentation::new(format!("spin-{n}"), basis, format!("R{n}"), labels)
}

/// Twisted conjugation `v ↦ g v g⁻¹` on `R^n` of an invertible versor `g`.
pub fn vector_action(g: &CliffordElement) -> Result<DMatrix<f64>> {
    let n = g.n();
    let norm = clifford_product(g, &g.reverse())?;
    let scalar = norm.coeff(0);
    if norm.terms().any(|(b, _)| b != 0) || scalar == Rational64::from_integer(0) {
        return Err(Error::InvalidArgument(format!("{g:?} is not a versor")));
    }
    let inv = g.reverse().scale(one() / scalar);
    let parity = if g.is_even() { 1 } else { -1 };
    let mut m = DMatrix::zeros(n, n);
    for c in 0..n {
        let ec = CliffordElement::generator(n, g.signature(), c)?;
        let img = clifford_product(&clifford_product(g, &ec)?, &inv)?;
        for (blade, coeff) in img.terms() {
            if blade.count_ones() != 1 {
                return Err(Error::InvalidArgument(format!("{g:?} does not preserve R^n")));
            }
            let d = blade.trailing_zeros() as usize;
            m[(d, c)] = parity as f64 * *coeff.numer() as f64 / *coeff.denom() as f64;
        }
    }
    Ok(m)
}

/// `φ(r, u) = [[r I, R_u], [R_ū, -r I]]` on `Ca ⊕ Ca`.
pub fn phi(r: f64, u: &HypercomplexElement) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(16, 16);
    m.view_mut((0, 0), (8, 8)).copy_from(&(DMatrix::identity(8, 8) * r));
    m.view_mut((8, 8), (8, 8)).copy_from(&(DMatrix::identity(8, 8) * -r));
    m.view_mut((0, 8), (8, 8)).copy_from(&right_mul(u));
    m.view_mut((8, 0), (8, 8)).copy_from(&right_mul(&u.conj()));
    m
}

/// Generators `φ(e_0), …, φ(e_8)` of `Cl₊(9)` on `R¹⁶`, with `e_0 = (1, 0)`
/// and `e_m = (0, ε_m)` for the ordering `ε = ⟨1, e, i, j, k, ei, ej, ek⟩`.
pub fn spin9_generators() -> Vec<DMatrix<f64>> {
    let zero = HypercomplexElement::zero(Level::Octonion);
    let mut gens = vec![phi(1.0, &zero)];
    for m in 0..8 {
        gens.push(phi(0.0, &HypercomplexElement::octonion_alt(m)));
    }
    gens
}

/// Labels of `R⁹ = {e_0; e_1, …, e_8}`.
pub fn r9_labels() -> Vec<String> {
    (0..9).map(|i| format!("e{i}")).collect()
}

/// Labels of `Ca ⊕ Ca`: `(x, 0)` and `(0, x)` written `x.1` and `x.2`.
pub fn ca2_labels() -> Vec<String> {
    (1..=2)
        .flat_map(|s| OCTONION_LABELS.iter().map(move |l| format!("{l}.{s}")))
        .collect()
}

pub fn spin9_model() -> Result<CliffordModel> {
    CliffordModel::new(9, Signature::Positive, Route::Direct, spin9_generators())
}

/// The spin representation `Δ₉` of `spin(9)` on `R¹⁶ = Ca ⊕ Ca`.
pub fn spin9_rep() -> Result<LinearRepresentation> {
    spin9_model()?.spin_rep("R16", ca2_labels())
}

/// Vector representation `R⁹` matched to [`spin9_rep`].
pub fn spin9_vector_rep() -> Result<LinearRepresentation> {
    vector_rep(9, Signature::Positive, r9_labels())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HalfSpin {
    Plus,
    Minus,
}

/// Complex structure on `R³² = R¹⁶ ⊕ R¹⁶`.
pub fn spin10_complex_structure() -> DMatrix<f64> {
    let mut j = DMatrix::zeros(32, 32);
    j.view_mut((16, 0), (16, 16)).copy_from(&DMatrix::identity(16, 16));
    j.view_mut((0, 16), (16, 16)).copy_from(&(-DMatrix::<f64>::identity(16, 16)));
    j
}

/// Generators `γ_a = ±[[0, -φ_a], [φ_a, 0]]` (`a = 0..8`) of `Cl(9)` on
/// `R³²`; `spin(10)` acts through `Cl⁰(10) ≅ Cl(9)`.
pub fn spin10_model(sign: HalfSpin) -> Result<CliffordModel> {
    let s = match sign {
        HalfSpin::Plus => 1.0,
        HalfSpin::Minus => -1.0,
    };
    let gens = spin9_generators()
        .into_iter()
        .map(|p| {
            let mut m = DMatrix::zeros(32, 32);
            m.view_mut((0, 16), (16, 16)).copy_from(&(&p * -s));
            m.view_mut((16, 0), (16, 16)).copy_from(&(&p * s));
            m
        })
        .collect();
    CliffordModel::new(10, Signature::Negative, Route::Even, gens)
}

/// Labels of `C¹⁶ = R¹⁶ ⊕ J R¹⁶`.
pub fn c16_labels() -> Vec<String> {
    ca2_labels()
        .into_iter()
        .chain(ca2_labels().into_iter().map(|l| format!("J{l}")))
        .collect()
}

/// The half-spin representation `Δ₁₀^±` on `C¹⁶ = R³²`.
pub fn spin10_halfspin(sign: HalfSpin) -> Result<LinearRepresentation> {
    let label = match sign {
        HalfSpin::Plus => "C16+",
        HalfSpin::Minus => "C16-",
    };
    Ok(spin10_model(sign)?
        .spin_rep(label, c16_labels())?
        .with_structure("J", spin10_complex_structure()))
}

pub fn spin10_vector_rep() -> Result<LinearRepresentation> {
    vector_rep(10, Signature::Negative, (0..10).map(|i| format!("e{i}")).collect())
}

/// `ω = e_0 e_1 ⋯ e_{n-1}` in `Cl(n)`.
pub fn volume_element(n: usize) -> Result<CliffordElement> {
    CliffordElement::generator_product(n, Signature::Negative, &(0..n).collect::<Vec<_>>())
}

/// `Cl(4)` generators `[[0, L_u], [-L_ū, 0]]`, `u ∈ {1, i, j, k}`, on `H²`;
/// `spin(5) = sp(2)` acts through `Cl⁰(5) ≅ Cl(4)`.
pub fn spin5_model() -> Result<CliffordModel> {
    let units = [
        quat(1.0, 0.0, 0.0, 0.0),
        quat(0.0, 1.0, 0.0, 0.0),
        quat(0.0, 0.0, 1.0, 0.0),
        quat(0.0, 0.0, 0.0, 1.0),
    ];
    let gens = units
        .iter()
        .map(|u| {
            let mut m = DMatrix::zeros(8, 8);
            m.view_mut((0, 4), (4, 4)).copy_from(&left_mul(u));
            m.view_mut((4, 0), (4, 4)).copy_from(&(-left_mul(&u.conj())));
            m
        })
        .collect();
    CliffordModel::new(5, Signature::Negative, Route::Even, gens)
}

/// `sp(2)` on `H² = C⁴` from [`spin5_model`], with the quaternionic
/// structure given by right multiplications.
pub fn spin5_spinor_rep() -> Result<LinearRepresentation> {
    let labels = (1..=2)
        .flat_map(|m| ["1", "i", "j", "k"].map(|u| format!("{u}.{m}")))
        .collect();
    let block = |u: &HypercomplexElement| {
        let mut m = DMatrix::zeros(8, 8);
        let r = right_mul(u);
        m.view_mut((0, 0), (4, 4)).copy_from(&r);
        m.view_mut((4, 4), (4, 4)).copy_from(&r);
        m
    };
    Ok(spin5_model()?
        .spin_rep("C4", labels)?
        .with_structure("J", block(&quat(0.0, 1.0, 0.0, 0.0)))
        .with_structure("K", block(&quat(0.0, 0.0, 1.0, 0.0))))
}

/// Octonionic generators `γ(u) = [[0, R_u], [-R_ū, 0]]` of `Cl(8)` on `R¹⁶`.
pub fn cl8_generators() -> Vec<DMatrix<f64>> {
    (0..8)
        .map(|m| {
            let u = HypercomplexElement::basis(Level::Octonion, m);
            let mut g = DMatrix::zeros(16, 16);
            g.view_mut((0, 8), (8, 8)).copy_from(&right_mul(&u));
            g.view_mut((8, 0), (8, 8)).copy_from(&(-right_mul(&u.conj())));
            g
        })
        .collect()
}

/// `Cl(16)` acting on `R¹⁶ ⊗ R¹⁶` by `G_a = γ_a ⊗ I` and `G_{8+b} = Γ ⊗ γ_b`
/// (`Γ = γ_0 ⋯ γ_7`), restricted to the `+1` eigenspace `S⁺` of the volume
/// element `Γ ⊗ Γ`.
#[derive(Debug, Clone)]
pub struct Spin16Model {
    factors: Vec<(DMatrix<f64>, DMatrix<f64>)>,
    /// Index pairs `(i, j)` of `R¹⁶ ⊗ R¹⁶` spanning `S⁺`.
    plus: Vec<(usize, usize)>,
}

impl Spin16Model {
    pub fn new() -> Result<Self> {
        let g = cl8_generators();
        let id = DMatrix::<f64>::identity(16, 16);
        let mut gamma = id.clone();
        for x in &g {
            gamma *= x;
        }
        let off_diag = (0..16)
            .flat_map(|i| (0..16).map(move |j| (i, j)))
            .filter(|(i, j)| i != j)
            .map(|(i, j)| gamma[(i, j)].abs())
            .fold(0.0, f64::max);
        if off_diag > 1e-12 {
            return Err(Error::Internal("octonionic Cl(8) volume element is not diagonal".into()));
        }
        let signs: Vec<f64> = (0..16).map(|i| gamma[(i, i)]).collect();
        let mut factors: Vec<(DMatrix<f64>, DMatrix<f64>)> =
            g.iter().map(|x| (x.clone(), id.clone())).collect();
        factors.extend(g.iter().map(|x| (gamma.clone(), x.clone())));
        let plus = (0..16)
            .flat_map(|i| (0..16).map(move |j| (i, j)))
            .filter(|&(i, j)| signs[i] * signs[j] > 0.0)
            .collect();
        Ok(Spin16Model { factors, plus })
    }

    pub fn dim(&self) -> usize {
        self.plus.len()
    }

    fn restrict(&self, a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
        let n = self.plus.len();
        DMatrix::from_fn(n, n, |r, c| {
            let (i, j) = self.plus[r];
            let (k, l) = self.plus[c];
            a[(i, k)] * b[(j, l)]
        })
    }

    /// Image on `S⁺` of an even word `e_{i_1} ⋯ e_{i_m}`.
    pub fn word_matrix(&self, word: &[usize]) -> Result<DMatrix<f64>> {
        if word.len() % 2 != 0 {
            return Err(Error::InvalidArgument("odd words do not preserve S⁺".into()));
        }
        let mut a = DMatrix::<f64>::identity(16, 16);
        let mut b = DMatrix::<f64>::identity(16, 16);
        for &w in word {
            let (x, y) = self.factors.get(w).ok_or_else(|| {
                Error::InvalidArgument(format!("generator e{w} out of range for Cl(16)"))
            })?;
            a *= x;
            b *= y;
        }
        Ok(self.restrict(&a, &b))
    }

    /// `spin(16)` on the half-spin space `S⁺ = R¹²⁸`.
    pub fn spin_rep(&self) -> Result<LinearRepresentation> {
        let basis = spin_pairs(16)
            .into_iter()
            .map(|(a, b)| Ok(self.word_matrix(&[a, b])? * 0.5))
            .collect::<Result<Vec<_>>>()?;
        let labels = self.plus.iter().map(|(i, j)| format!("s{i}_{j}")).collect();
        LinearRepresentation::new("spin-16", basis, "R128", labels)
    }
}

/// Labels `e0..e{n-1}` for a vector representation.
pub fn vector_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("e{i}")).collect()
}

/// Labels of the alternative octonion ordering, as used for `R⁹`.
pub fn alt_labels() -> Vec<String> {
    OCTONION_LABELS_ALT.iter().map(|s| s.to_string()).collect()
}

/// Single-summand helper for summing models with custom labels.
pub fn relabel(mut rep: LinearRepresentation, label: &str) -> LinearRepresentation {
    if let Some(Summand { label: l, .. }) = rep.summands.first_mut() {
        *l = label.to_string();
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::commutator;

    #[test]
    fn clifford_relations_hold() {
        assert!(spin9_model().unwrap().relation_defect() < 1e-12);
        assert!(spin10_model(HalfSpin::Plus).unwrap().relation_defect() < 1e-12);
        assert!(spin5_model().unwrap().relation_defect() < 1e-12);
    }

    #[test]
    fn spin9_dimensions() {
        let d9 = spin9_rep().unwrap();
        assert_eq!((d9.group_dim(), d9.dim()), (36, 16));
        assert!(d9.max_skew_defect() < 1e-12);
        assert!(d9.closure_residual().unwrap() < 1e-9);
        let r9 = spin9_vector_rep().unwrap();
        assert_eq!(r9.dim(), 9);
        assert!(r9.max_skew_defect() < 1e-12);
    }

    #[test]
    fn volume_element_is_a_complex_structure() {
        let j = spin10_complex_structure();
        let omega = volume_element(10).unwrap();
        let plus = spin10_model(HalfSpin::Plus).unwrap().element_matrix(&omega).unwrap();
        let minus = spin10_model(HalfSpin::Minus).unwrap().element_matrix(&omega).unwrap();
        assert!((&plus - &j).amax() < 1e-12);
        assert!((&minus + &j).amax() < 1e-12);
    }

    #[test]
    fn halfspin_commutes_with_j() {
        let rep = spin10_halfspin(HalfSpin::Minus).unwrap();
        assert_eq!(rep.group_dim(), 45);
        let j = spin10_complex_structure();
        for x in &rep.basis {
            assert!(commutator(x, &j).amax() < 1e-12);
        }
    }

    #[test]
    fn vector_reps_are_skew() {
        for n in [3, 5, 10] {
            let r = vector_rep(n, Signature::Negative, vector_labels(n)).unwrap();
            assert_eq!(r.group_dim(), n * (n - 1) / 2);
            assert!(r.max_skew_defect() < 1e-14);
        }
    }

    #[test]
    fn vector_action_of_bivector_product() {
        // e0 e1 acts on R^n by -1 on span{e0, e1}
        let g = CliffordElement::generator_product(4, Signature::Negative, &[0, 1]).unwrap();
        let m = vector_action(&g).unwrap();
        let expected = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![-1.0, -1.0, 1.0, 1.0]));
        assert!((m - expected).amax() < 1e-14);
    }

    #[test]
    fn spin16_halfspin_shape() {
        let model = Spin16Model::new().unwrap();
        assert_eq!(model.dim(), 128);
        let g = model.word_matrix(&[0, 1, 2, 3]).unwrap();
        let sq = &g * &g;
        assert!((sq - DMatrix::<f64>::identity(128, 128)).amax() < 1e-12);
    }
}
