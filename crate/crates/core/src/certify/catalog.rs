//! `Z₂` Poincaré polynomials of the spaces that occur as orbits, built from
//! a small atom table and the Künneth formula.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PoincarePoly {
    /// `b₀, b₁, …` over `Z₂`.
    pub coeffs: Vec<usize>,
}

impl PoincarePoly {
    pub fn one() -> Self {
        PoincarePoly { coeffs: vec![1] }
    }

    /// `1 + t^n`.
    pub fn sphere(n: usize) -> Self {
        let mut coeffs = vec![0; n + 1];
        coeffs[0] += 1;
        coeffs[n] += 1;
        PoincarePoly { coeffs }
    }

    /// `1 + t^step + t^{2 step} + … + t^{top}`.
    fn ladder(step: usize, count: usize) -> Self {
        let mut coeffs = vec![0; step * count + 1];
        for k in 0..=count {
            coeffs[k * step] = 1;
        }
        PoincarePoly { coeffs }
    }

    pub fn product(&self, other: &PoincarePoly) -> PoincarePoly {
        let mut coeffs = vec![0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        PoincarePoly { coeffs }
    }

    fn product_of(factors: impl IntoIterator<Item = PoincarePoly>) -> PoincarePoly {
        factors.into_iter().fold(PoincarePoly::one(), |acc, f| acc.product(&f))
    }

    pub fn total(&self) -> usize {
        self.coeffs.iter().sum()
    }

    pub fn b1(&self) -> usize {
        self.coeffs.get(1).copied().unwrap_or(0)
    }

    pub fn top_degree(&self) -> usize {
        self.coeffs.iter().rposition(|c| *c > 0).unwrap_or(0)
    }
}

impl fmt::Display for PoincarePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().filter(|(_, c)| **c > 0) {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (k, *c) {
                (0, c) => write!(f, "{c}")?,
                (k, 1) => write!(f, "t^{k}")?,
                (k, c) => write!(f, "{c}t^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// An atom of the catalog.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "atom", content = "n", rename_all = "kebab-case")]
pub enum Atom {
    Point,
    Sphere(usize),
    Rp(usize),
    Cp(usize),
    Hp(usize),
    Torus(usize),
    So(usize),
    Su(usize),
    U(usize),
    Sp(usize),
    G2,
    /// Real Stiefel manifold `V_k(Rⁿ)`.
    RealStiefel(usize, usize),
    ComplexStiefel(usize, usize),
}

impl Atom {
    pub fn poincare(&self) -> PoincarePoly {
        use PoincarePoly as P;
        match *self {
            Atom::Point => P::one(),
            Atom::Sphere(n) => P::sphere(n),
            Atom::Rp(n) => P::ladder(1, n),
            Atom::Cp(n) => P::ladder(2, n),
            Atom::Hp(n) => P::ladder(4, n),
            Atom::Torus(n) => P::product_of((0..n).map(|_| P::sphere(1))),
            // H*(SO(n); Z₂) has a simple system of generators in degrees 1..n-1
            Atom::So(n) => P::product_of((1..n).map(P::sphere)),
            Atom::Su(n) => P::product_of((2..=n).map(|k| P::sphere(2 * k - 1))),
            Atom::U(n) => P::product_of((1..=n).map(|k| P::sphere(2 * k - 1))),
            Atom::Sp(n) => P::product_of((1..=n).map(|k| P::sphere(4 * k - 1))),
            // Z₂[x₃]/(x₃⁴) ⊗ Λ(x₅)
            Atom::G2 => P::ladder(3, 3).product(&P::sphere(5)),
            Atom::RealStiefel(n, k) => P::product_of((n - k..n).map(P::sphere)),
            Atom::ComplexStiefel(n, k) => P::product_of((n - k + 1..=n).map(|i| P::sphere(2 * i - 1))),
        }
    }

    fn parse(s: &str) -> Result<Atom> {
        let unknown = || Error::UnknownAtom(s.to_string());
        let num = |t: &str| t.parse::<usize>().map_err(|_| unknown());
        let arg = |prefix: &str| -> Option<&str> {
            s.strip_prefix(prefix)?.strip_prefix('(')?.strip_suffix(')')
        };
        let atom = if s == "pt" || s == "point" {
            Atom::Point
        } else if s == "G2" {
            Atom::G2
        } else if let Some(a) = arg("SO") {
            Atom::So(num(a)?)
        } else if let Some(a) = arg("SU") {
            Atom::Su(num(a)?)
        } else if let Some(a) = arg("Sp") {
            Atom::Sp(num(a)?)
        } else if let Some(a) = arg("U") {
            Atom::U(num(a)?)
        } else if let Some(rest) = s.strip_prefix('V') {
            // V2(R8), V3(C4)
            let (k, inner) = rest.split_once('(').ok_or_else(unknown)?;
            let inner = inner.strip_suffix(')').ok_or_else(unknown)?;
            let k = num(k)?;
            if let Some(n) = inner.strip_prefix('R') {
                Atom::RealStiefel(num(n)?, k)
            } else if let Some(n) = inner.strip_prefix('C') {
                Atom::ComplexStiefel(num(n)?, k)
            } else {
                return Err(unknown());
            }
        } else if let Some(n) = s.strip_prefix("RP") {
            Atom::Rp(num(n)?)
        } else if let Some(n) = s.strip_prefix("CP") {
            Atom::Cp(num(n)?)
        } else if let Some(n) = s.strip_prefix("HP") {
            Atom::Hp(num(n)?)
        } else if let Some(n) = s.strip_prefix('S') {
            Atom::Sphere(num(n)?)
        } else if let Some(n) = s.strip_prefix('T') {
            Atom::Torus(num(n)?)
        } else {
            return Err(unknown());
        };
        match atom {
            Atom::RealStiefel(n, k) | Atom::ComplexStiefel(n, k) if k == 0 || k > n => Err(unknown()),
            Atom::So(0) | Atom::Su(0) | Atom::U(0) | Atom::Sp(0) => Err(unknown()),
            a => Ok(a),
        }
    }
}

/// A product of catalog atoms, written `S3 x S5` or `SO(3) x S3`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpaceDescriptor {
    pub factors: Vec<Atom>,
}

impl SpaceDescriptor {
    pub fn parse(s: &str) -> Result<Self> {
        let factors = s
            .split(" x ")
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(Atom::parse)
            .collect::<Result<Vec<_>>>()?;
        if factors.is_empty() {
            return Err(Error::UnknownAtom(s.to_string()));
        }
        Ok(SpaceDescriptor { factors })
    }
}

pub fn poincare_data(space: &SpaceDescriptor) -> PoincarePoly {
    PoincarePoly::product_of(space.factors.iter().map(Atom::poincare))
}

/// Total `Z₂` Betti number of a descriptor string.
pub fn betti_total(descriptor: &str) -> Result<usize> {
    Ok(poincare_data(&SpaceDescriptor::parse(descriptor)?).total())
}
