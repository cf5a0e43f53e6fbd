//! Exact sparse Clifford algebra arithmetic.
//!
//! Generators are indexed from `0`; a blade is a bitmask of generator indices
//! kept in increasing order. `Cl(n)` has `e_i² = -1` and `Cl₊(n)` has
//! `e_i² = +1`. Coefficients are exact rationals.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Rational64;

use crate::error::{Error, Result};

pub type Blade = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Signature {
    /// `e_i² = -1`
    Negative,
    /// `e_i² = +1`
    Positive,
}

impl Signature {
    fn square(self) -> i64 {
        match self {
            Signature::Negative => -1,
            Signature::Positive => 1,
        }
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct CliffordElement {
    n: usize,
    signature: Signature,
    blades: BTreeMap<Blade, Rational64>,
}

impl fmt::Debug for CliffordElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.blades.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (blade, c) in &self.blades {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            if *blade != 0 {
                for i in blade_indices(*blade) {
                    write!(f, "·e{i}")?;
                }
            }
        }
        Ok(())
    }
}

pub fn blade_indices(blade: Blade) -> Vec<usize> {
    (0..32).filter(|i| blade & (1 << i) != 0).collect()
}

pub fn grade(blade: Blade) -> u32 {
    blade.count_ones()
}

/// Sign and resulting blade of the product of two basis blades.
pub fn blade_product(a: Blade, b: Blade, signature: Signature) -> (i64, Blade) {
    // swaps needed to move each generator of b past the higher generators of a
    let mut swaps = 0u32;
    let mut rest = a >> 1;
    while rest != 0 {
        swaps += (rest & b).count_ones();
        rest >>= 1;
    }
    let mut sign = if swaps % 2 == 0 { 1 } else { -1 };
    let common = (a & b).count_ones();
    if common % 2 == 1 {
        sign *= signature.square();
    }
    (sign, a ^ b)
}

impl CliffordElement {
    pub fn zero(n: usize, signature: Signature) -> Self {
        CliffordElement {
            n,
            signature,
            blades: BTreeMap::new(),
        }
    }

    pub fn scalar(n: usize, signature: Signature, value: Rational64) -> Self {
        Self::blade(n, signature, 0, value)
    }

    pub fn blade(n: usize, signature: Signature, blade: Blade, coeff: Rational64) -> Self {
        let mut blades = BTreeMap::new();
        if coeff != Rational64::from_integer(0) {
            blades.insert(blade, coeff);
        }
        CliffordElement { n, signature, blades }
    }

    /// Ordered product `e_{i_1} e_{i_2} ⋯` of generators (indices may repeat).
    pub fn generator_product(n: usize, signature: Signature, indices: &[usize]) -> Result<Self> {
        let mut acc = Self::scalar(n, signature, Rational64::from_integer(1));
        for &i in indices {
            if i >= n {
                return Err(Error::InvalidArgument(format!(
                    "generator e{i} out of range for n = {n}"
                )));
            }
            let g = Self::blade(n, signature, 1 << i, Rational64::from_integer(1));
            acc = clifford_product(&acc, &g)?;
        }
        Ok(acc)
    }

    pub fn generator(n: usize, signature: Signature, i: usize) -> Result<Self> {
        Self::generator_product(n, signature, &[i])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    pub fn terms(&self) -> impl Iterator<Item = (Blade, Rational64)> + '_ {
        self.blades.iter().map(|(b, c)| (*b, *c))
    }

    pub fn coeff(&self, blade: Blade) -> Rational64 {
        self.blades
            .get(&blade)
            .copied()
            .unwrap_or_else(|| Rational64::from_integer(0))
    }

    pub fn is_zero(&self) -> bool {
        self.blades.is_empty()
    }

    pub fn is_even(&self) -> bool {
        self.blades.keys().all(|b| grade(*b) % 2 == 0)
    }

    pub fn scale(&self, s: Rational64) -> Self {
        let mut out = Self::zero(self.n, self.signature);
        for (b, c) in &self.blades {
            out.add_term(*b, *c * s);
        }
        out
    }

    fn add_term(&mut self, blade: Blade, coeff: Rational64) {
        let zero = Rational64::from_integer(0);
        let entry = self.blades.entry(blade).or_insert(zero);
        *entry += coeff;
        if *entry == zero {
            self.blades.remove(&blade);
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.n != other.n || self.signature != other.signature {
            return Err(Error::InvalidArgument(format!(
                "Clifford algebras differ: ({}, {:?}) vs ({}, {:?})",
                self.n, self.signature, other.n, other.signature
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (b, c) in &other.blades {
            out.add_term(*b, *c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(Rational64::from_integer(-1)))
    }

    /// Reversion: reverses the order of generators in every blade.
    pub fn reverse(&self) -> Self {
        let mut out = Self::zero(self.n, self.signature);
        for (b, c) in &self.blades {
            let g = grade(*b) as i64;
            let sign = if (g * (g - 1) / 2) % 2 == 0 { 1 } else { -1 };
            out.add_term(*b, *c * Rational64::from_integer(sign));
        }
        out
    }
}

/// Product in `Cl(n)` or `Cl₊(n)`.
pub fn clifford_product(a: &CliffordElement, b: &CliffordElement) -> Result<CliffordElement> {
    a.check_compatible(b)?;
    let mut out = CliffordElement::zero(a.n, a.signature);
    for (ba, ca) in &a.blades {
        for (bb, cb) in &b.blades {
            let (sign, blade) = blade_product(*ba, *bb, a.signature);
            out.add_term(blade, *ca * *cb * Rational64::from_integer(sign));
        }
    }
    Ok(out)
}

/// The isomorphism `Cl⁰(n) → Cl(n-1)` given on generators by
/// `e_i e_j ↦ e_i e_j` (`i < j < n-1`) and `e_i e_{n-1} ↦ e_i`.
///
/// On an even blade this drops the top generator when present, with sign `+1`:
/// `e_{a_1}⋯e_{a_{2k-1}} e_{n-1} = (e_{a_1}⋯e_{a_{2k-2}})(e_{a_{2k-1}} e_{n-1})`.
pub fn even_iso(x: &CliffordElement) -> Result<CliffordElement> {
    if x.signature != Signature::Negative {
        return Err(Error::InvalidArgument(
            "even isomorphism is defined on Cl(n) with e_i² = -1".into(),
        ));
    }
    if x.n < 2 {
        return Err(Error::InvalidArgument("even isomorphism needs n ≥ 2".into()));
    }
    if !x.is_even() {
        return Err(Error::InvalidArgument(format!(
            "element has odd-degree blades: {x:?}"
        )));
    }
    let top: Blade = 1 << (x.n - 1);
    let mut out = CliffordElement::zero(x.n - 1, Signature::Negative);
    for (b, c) in &x.blades {
        out.add_term(b & !top, *c);
    }
    Ok(out)
}
