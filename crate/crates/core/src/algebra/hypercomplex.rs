//! Quaternions and octonions built by the Cayley–Dickson doubling
//! `(a, b)(c, d) = (ac - d̄b, da + bc̄)`.
//!
//! Coordinates are stored in the standard ordering `⟨1, i, j, k⟩` for `H` and
//! `⟨1, i, j, k, e, ie, je, ke⟩` for `Ca = H ⊕ He`. With this convention
//! `i(ke) = je`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Doubling level: 2 for quaternions, 3 for octonions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Level {
    Quaternion,
    Octonion,
}

impl Level {
    pub fn dim(self) -> usize {
        match self {
            Level::Quaternion => 4,
            Level::Octonion => 8,
        }
    }

    fn from_dim(dim: usize) -> Option<Level> {
        match dim {
            4 => Some(Level::Quaternion),
            8 => Some(Level::Octonion),
            _ => None,
        }
    }
}

/// Labels of the standard octonion basis.
pub const OCTONION_LABELS: [&str; 8] = ["1", "i", "j", "k", "e", "ie", "je", "ke"];

/// Labels of the alternative ordering `⟨1, e, i, j, k, ei, ej, ek⟩` used to
/// name the generators `e_1, …, e_8` of the Clifford model of `Spin(9)`.
pub const OCTONION_LABELS_ALT: [&str; 8] = ["1", "e", "i", "j", "k", "ei", "ej", "ek"];

/// Signed permutation taking the alternative basis to standard coordinates:
/// `ALT_TO_STD[m] = (index, sign)` means `alt_m = sign * std_index`.
/// Note `ei = -ie` and similarly for `j`, `k`.
pub const ALT_TO_STD: [(usize, f64); 8] = [
    (0, 1.0),
    (4, 1.0),
    (1, 1.0),
    (2, 1.0),
    (3, 1.0),
    (5, -1.0),
    (6, -1.0),
    (7, -1.0),
];

#[derive(Clone, PartialEq)]
pub struct HypercomplexElement {
    coords: Vec<f64>,
    level: Level,
}

impl fmt::Debug for HypercomplexElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{:?}", self.level, self.coords)
    }
}

fn cd_mul_slice(x: &[f64], y: &[f64], out: &mut [f64]) {
    let n = x.len();
    if n == 1 {
        out[0] = x[0] * y[0];
        return;
    }
    let h = n / 2;
    let (a, b) = x.split_at(h);
    let (c, d) = y.split_at(h);
    let cbar = conj_vec(c);
    let dbar = conj_vec(d);
    let mut t1 = vec![0.0; h];
    let mut t2 = vec![0.0; h];
    // first half: ac - d̄b
    cd_mul_slice(a, c, &mut t1);
    cd_mul_slice(&dbar, b, &mut t2);
    for m in 0..h {
        out[m] = t1[m] - t2[m];
    }
    // second half: da + bc̄
    cd_mul_slice(d, a, &mut t1);
    cd_mul_slice(b, &cbar, &mut t2);
    for m in 0..h {
        out[h + m] = t1[m] + t2[m];
    }
}

fn conj_vec(x: &[f64]) -> Vec<f64> {
    x.iter()
        .enumerate()
        .map(|(m, v)| if m == 0 { *v } else { -*v })
        .collect()
}

impl HypercomplexElement {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        let level = Level::from_dim(coords.len()).ok_or_else(|| {
            Error::InvalidArgument(format!(
                "hypercomplex element needs 4 or 8 coordinates, got {}",
                coords.len()
            ))
        })?;
        Ok(HypercomplexElement { coords, level })
    }

    pub fn zero(level: Level) -> Self {
        HypercomplexElement {
            coords: vec![0.0; level.dim()],
            level,
        }
    }

    pub fn one(level: Level) -> Self {
        Self::basis(level, 0)
    }

    pub fn basis(level: Level, index: usize) -> Self {
        let mut coords = vec![0.0; level.dim()];
        coords[index] = 1.0;
        HypercomplexElement { coords, level }
    }

    /// Standard octonion basis element by label (`"1"`, `"i"`, …, `"ke"`),
    /// also accepting the alternative names `ei`, `ej`, `ek`.
    pub fn octonion(label: &str) -> Result<Self> {
        if let Some(m) = OCTONION_LABELS.iter().position(|l| *l == label) {
            return Ok(Self::basis(Level::Octonion, m));
        }
        if let Some(m) = OCTONION_LABELS_ALT.iter().position(|l| *l == label) {
            let (idx, sign) = ALT_TO_STD[m];
            let mut x = Self::basis(Level::Octonion, idx);
            x.coords[idx] = sign;
            return Ok(x);
        }
        Err(Error::InvalidArgument(format!("unknown octonion label `{label}`")))
    }

    /// The `m`-th element of the alternative ordering `⟨1, e, i, j, k, ei, ej, ek⟩`.
    pub fn octonion_alt(m: usize) -> Self {
        let (idx, sign) = ALT_TO_STD[m];
        let mut x = Self::basis(Level::Octonion, idx);
        x.coords[idx] = sign;
        x
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coords.iter().map(|c| c * c).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn conj(&self) -> Self {
        HypercomplexElement {
            coords: conj_vec(&self.coords),
            level: self.level,
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        HypercomplexElement {
            coords: self.coords.iter().map(|c| c * s).collect(),
            level: self.level,
        }
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn distance(&self, other: &Self) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }
}

/// Cayley–Dickson product.
pub fn cd_mul(x: &HypercomplexElement, y: &HypercomplexElement) -> Result<HypercomplexElement> {
    if x.level != y.level {
        return Err(Error::InvalidArgument(format!(
            "level mismatch: {:?} vs {:?}",
            x.level, y.level
        )));
    }
    let mut out = vec![0.0; x.coords.len()];
    cd_mul_slice(&x.coords, &y.coords, &mut out);
    Ok(HypercomplexElement {
        coords: out,
        level: x.level,
    })
}

impl Mul for &HypercomplexElement {
    type Output = HypercomplexElement;

    /// Panics on a level mismatch; use [`cd_mul`] for the fallible form.
    fn mul(self, rhs: Self) -> HypercomplexElement {
        cd_mul(self, rhs).expect("hypercomplex level mismatch")
    }
}

impl Add for &HypercomplexElement {
    type Output = HypercomplexElement;

    fn add(self, rhs: Self) -> HypercomplexElement {
        assert_eq!(self.level, rhs.level, "hypercomplex level mismatch");
        HypercomplexElement {
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a + b).collect(),
            level: self.level,
        }
    }
}

impl Sub for &HypercomplexElement {
    type Output = HypercomplexElement;

    fn sub(self, rhs: Self) -> HypercomplexElement {
        assert_eq!(self.level, rhs.level, "hypercomplex level mismatch");
        HypercomplexElement {
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a - b).collect(),
            level: self.level,
        }
    }
}

impl Neg for &HypercomplexElement {
    type Output = HypercomplexElement;

    fn neg(self) -> HypercomplexElement {
        self.scale(-1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Matrix of `x ↦ u·x` (left) or `x ↦ x·u` (right) in the standard basis.
#[derive(Debug, Clone)]
pub struct MultOperator {
    pub matrix: DMatrix<f64>,
    pub side: Side,
    pub u: HypercomplexElement,
}

/// Multiplication operator of an octonion; quaternions are accepted as well
/// since the quaternionic models (`l_p`, `r_q`) use the same construction.
pub fn mul_operator(u: &HypercomplexElement, side: Side) -> MultOperator {
    let n = u.level.dim();
    let mut matrix = DMatrix::zeros(n, n);
    for col in 0..n {
        let b = HypercomplexElement::basis(u.level, col);
        let img = match side {
            Side::Left => u * &b,
            Side::Right => &b * u,
        };
        for row in 0..n {
            matrix[(row, col)] = img.coords[row];
        }
    }
    MultOperator {
        matrix,
        side,
        u: u.clone(),
    }
}

/// Shorthand for the left multiplication matrix `L_u`.
pub fn left_mul(u: &HypercomplexElement) -> DMatrix<f64> {
    mul_operator(u, Side::Left).matrix
}

/// Shorthand for the right multiplication matrix `R_u`.
pub fn right_mul(u: &HypercomplexElement) -> DMatrix<f64> {
    mul_operator(u, Side::Right).matrix
}

/// Quaternion from its four coordinates.
pub fn quat(w: f64, x: f64, y: f64, z: f64) -> HypercomplexElement {
    HypercomplexElement {
        coords: vec![w, x, y, z],
        level: Level::Quaternion,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn oct(label: &str) -> HypercomplexElement {
        HypercomplexElement::octonion(label).unwrap()
    }

    #[test]
    fn unit_law() {
        let x = HypercomplexElement::new(vec![0.3, -1.0, 2.0, 0.5, 0.1, 0.0, -0.7, 4.0]).unwrap();
        let one = HypercomplexElement::one(Level::Octonion);
        assert_eq!(&one * &x, x);
        assert_eq!(&x * &one, x);
    }

    #[test]
    fn i_times_ke_is_je() {
        assert_eq!(&oct("i") * &oct("ke"), oct("je"));
    }

    #[test]
    fn quaternion_table() {
        let i = quat(0.0, 1.0, 0.0, 0.0);
        let j = quat(0.0, 0.0, 1.0, 0.0);
        let k = quat(0.0, 0.0, 0.0, 1.0);
        assert_eq!(&i * &j, k);
        assert_eq!(&j * &k, i);
        assert_eq!(&k * &i, j);
        assert_eq!(&i * &i, quat(-1.0, 0.0, 0.0, 0.0));
    }

    #[test]
    fn level_mismatch_rejected() {
        let q = quat(1.0, 0.0, 0.0, 0.0);
        let o = HypercomplexElement::one(Level::Octonion);
        assert!(matches!(cd_mul(&q, &o), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn alt_basis_signs() {
        // e·i = -(i·e) in the doubling convention
        assert_eq!(&oct("e") * &oct("i"), oct("ie").scale(-1.0));
        assert_eq!(oct("ei"), oct("ie").scale(-1.0));
    }

    #[test]
    fn non_associativity_witness() {
        let lhs = &(&oct("i") * &oct("j")) * &oct("e");
        let rhs = &oct("i") * &(&oct("j") * &oct("e"));
        assert!(lhs.distance(&rhs) > 1.0);
    }

    #[test]
    fn conjugate_product_is_norm() {
        let x = HypercomplexElement::new(vec![1.0, 2.0, -1.0, 0.5, 3.0, 0.0, 1.0, -2.0]).unwrap();
        let p = &x * &x.conj();
        assert!((p.coords()[0] - x.norm_sqr()).abs() < 1e-12);
        assert!(p.coords()[1..].iter().all(|c| c.abs() < 1e-12));
    }

    #[test]
    fn mul_operator_identity_and_square() {
        let one = HypercomplexElement::one(Level::Octonion);
        for side in [Side::Left, Side::Right] {
            let m = mul_operator(&one, side).matrix;
            assert_eq!(m, DMatrix::identity(8, 8));
        }
        let li = left_mul(&oct("i"));
        let sq = &li * &li;
        assert!((sq + DMatrix::<f64>::identity(8, 8)).norm() < 1e-14);
    }
}
