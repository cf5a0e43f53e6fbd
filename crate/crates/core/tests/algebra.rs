use nalgebra::DMatrix;
use num_rational::Rational64;
use proptest::prelude::*;
use taut_core::algebra::{clifford_product, cd_mul, even_iso, CliffordElement, HypercomplexElement, Signature};
use taut_core::repbuilder::spin::phi;
use taut_core::repbuilder::triality::{so8_basis, triality_lift};

/// Sign of `e_A e_B` by writing out both index lists, bubble-sorting with a
/// sign flip per transposition and contracting equal neighbours.
fn sign_by_sorting(a: u32, b: u32, square: i64) -> (i64, u32) {
    let mut word: Vec<usize> = (0..32).filter(|i| a & (1 << i) != 0).collect();
    word.extend((0..32).filter(|i| b & (1 << i) != 0));
    let mut sign = 1;
    let mut changed = true;
    while changed {
        changed = false;
        for k in 0..word.len().saturating_sub(1) {
            if word[k] > word[k + 1] {
                word.swap(k, k + 1);
                sign = -sign;
                changed = true;
            }
        }
    }
    let mut out = Vec::new();
    for g in word {
        if out.last() == Some(&g) {
            out.pop();
            sign *= square;
        } else {
            out.push(g);
        }
    }
    (sign, out.iter().fold(0, |acc, g| acc | (1 << g)))
}

fn blade(n: usize, sig: Signature, b: u32) -> CliffordElement {
    CliffordElement::blade(n, sig, b, Rational64::from_integer(1))
}

#[test]
fn blade_products_agree_with_sorting() {
    let n = 5;
    for (sig, square) in [(Signature::Negative, -1), (Signature::Positive, 1)] {
        for a in 0..(1u32 << n) {
            for b in 0..(1u32 << n) {
                let (sign, res) = sign_by_sorting(a, b, square);
                let prod = clifford_product(&blade(n, sig, a), &blade(n, sig, b)).unwrap();
                assert_eq!(prod.coeff(res), Rational64::from_integer(sign), "{a:b} * {b:b}");
                assert_eq!(prod.terms().count(), 1);
            }
        }
    }
}

#[test]
fn volume_element_squares() {
    for n in 1..=10usize {
        let word: Vec<usize> = (0..n).collect();
        for (sig, square) in [(Signature::Negative, -1i64), (Signature::Positive, 1)] {
            let w = CliffordElement::generator_product(n, sig, &word).unwrap();
            let sq = clifford_product(&w, &w).unwrap();
            // reversal sign times e_i² for every generator
            let expected = if (n * (n - 1) / 2) % 2 == 0 { 1 } else { -1 } * square.pow(n as u32);
            assert_eq!(sq, CliffordElement::scalar(n, sig, Rational64::from_integer(expected)), "n = {n}");
        }
    }
}

#[test]
fn even_iso_sends_top_pairs_to_generators() {
    let n = 6;
    for i in 0..n - 1 {
        let x = CliffordElement::generator_product(n, Signature::Negative, &[i, n - 1]).unwrap();
        let y = CliffordElement::generator(n - 1, Signature::Negative, i).unwrap();
        assert_eq!(even_iso(&x).unwrap(), y);
    }
    let odd = CliffordElement::generator(n, Signature::Negative, 0).unwrap();
    assert!(even_iso(&odd).is_err());
}

#[test]
fn even_iso_is_multiplicative_on_even_blades() {
    let n = 5;
    let even: Vec<u32> = (0..(1u32 << n)).filter(|b| b.count_ones() % 2 == 0).collect();
    for &a in &even {
        for &b in &even {
            let x = blade(n, Signature::Negative, a);
            let y = blade(n, Signature::Negative, b);
            let lhs = even_iso(&clifford_product(&x, &y).unwrap()).unwrap();
            let rhs = clifford_product(&even_iso(&x).unwrap(), &even_iso(&y).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn octonions_are_not_associative() {
    let o = |s| HypercomplexElement::octonion(s).unwrap();
    let left = cd_mul(&cd_mul(&o("i"), &o("j")).unwrap(), &o("e")).unwrap();
    let right = cd_mul(&o("i"), &cd_mul(&o("j"), &o("e")).unwrap()).unwrap();
    assert!(left.distance(&right) > 1.0);
    assert!((left.distance(&right.scale(-1.0))).abs() < 1e-15);
}

fn octonion() -> impl Strategy<Value = HypercomplexElement> {
    prop::collection::vec(-2.0f64..2.0, 8).prop_map(|c| HypercomplexElement::new(c).unwrap())
}

fn quaternion() -> impl Strategy<Value = HypercomplexElement> {
    prop::collection::vec(-2.0f64..2.0, 4).prop_map(|c| HypercomplexElement::new(c).unwrap())
}

fn mul(x: &HypercomplexElement, y: &HypercomplexElement) -> HypercomplexElement {
    cd_mul(x, y).unwrap()
}

proptest! {
    #[test]
    fn octonion_norm_is_multiplicative(x in octonion(), y in octonion()) {
        prop_assert!((mul(&x, &y).norm() - x.norm() * y.norm()).abs() < 1e-12);
    }

    #[test]
    fn octonions_are_alternative(x in octonion(), y in octonion()) {
        prop_assert!(mul(&x, &mul(&x, &y)).distance(&mul(&mul(&x, &x), &y)) < 1e-11);
        prop_assert!(mul(&mul(&y, &x), &x).distance(&mul(&y, &mul(&x, &x))) < 1e-11);
    }

    #[test]
    fn moufang_identity(x in octonion(), y in octonion(), z in octonion()) {
        let lhs = mul(&mul(&z, &x), &mul(&y, &z));
        let rhs = mul(&mul(&z, &mul(&x, &y)), &z);
        prop_assert!(lhs.distance(&rhs) < 1e-10);
    }

    #[test]
    fn conjugation_reverses_products(x in octonion(), y in octonion()) {
        prop_assert!(mul(&x, &y).conj().distance(&mul(&y.conj(), &x.conj())) < 1e-12);
    }

    #[test]
    fn quaternions_are_associative(x in quaternion(), y in quaternion(), z in quaternion()) {
        prop_assert!(mul(&mul(&x, &y), &z).distance(&mul(&x, &mul(&y, &z))) < 1e-12);
    }

    #[test]
    fn phi_squares_to_a_scalar(r in -2.0f64..2.0, u in octonion()) {
        let m = phi(r, &u);
        let target = DMatrix::<f64>::identity(16, 16) * (r * r + u.norm_sqr());
        prop_assert!((&m * &m - target).amax() < 1e-12);
    }

    #[test]
    fn triality_lift_is_linear(c in prop::collection::vec(-1.0f64..1.0, 28), s in -2.0f64..2.0) {
        let basis = so8_basis();
        let a = basis.iter().zip(&c).fold(DMatrix::zeros(8, 8), |acc, (e, x)| acc + e * *x);
        let whole = triality_lift(&(&a * s)).unwrap();
        let parts = basis.iter().zip(&c).fold(DMatrix::zeros(8, 8), |acc, (e, x)| {
            acc + triality_lift(e).unwrap().b * (*x * s)
        });
        prop_assert!((&whole.b - parts).amax() < 1e-10);
        prop_assert!(whole.residual() < 1e-10);
    }
}

#[test]
fn triality_residual_on_every_generator() {
    for a in so8_basis() {
        let t = triality_lift(&a).unwrap();
        assert!(t.residual() < 1e-10);
        assert!((&t.b + t.b.transpose()).amax() < 1e-12);
        assert!((&t.c + t.c.transpose()).amax() < 1e-12);
    }
}

#[test]
fn phi_on_unit_basis_gives_clifford_relations() {
    let gens = taut_core::repbuilder::spin::spin9_generators();
    for (a, x) in gens.iter().enumerate() {
        for (b, y) in gens.iter().enumerate() {
            let anti = x * y + y * x;
            let expected = if a == b { DMatrix::identity(16, 16) * 2.0 } else { DMatrix::zeros(16, 16) };
            assert!((anti - expected).amax() < 1e-12);
        }
    }
}
