//! Named representations, built from strings such as `su3: C3 + C3 + C3`,
//! `spin7: R7 + R8 + R8` or `model: sp1-cubed`.
//!
//! All summands of one string share the algebra basis of the group, so the
//! direct sum is a representation of that algebra.

use nalgebra::DMatrix;

use super::classical::{adjoint, classical_basis, Family};
use super::rep::{direct_sum, LinearRepresentation, Summand};
use super::spin::{
    self, spin10_halfspin, spin5_model, spin5_spinor_rep, spin9_rep, spin9_vector_rep, HalfSpin, Spin16Model,
};
use super::triality::{g2_basis, restrict_to_coordinates, spin_subalgebra};
use crate::algebra::{HypercomplexElement, Signature};
use crate::error::{Error, Result};
use crate::reduction::models;

/// Groups understood by [`build_rep`], with their summand names.
pub const GROUPS: &[(&str, &str)] = &[
    ("so<n>", "R<n>, S2R<n>, ad"),
    ("su<n>", "C<n>, ad"),
    ("sp1 | su2", "C2, R3, ad"),
    ("sp2", "C4, R5, ad"),
    ("sp<n>", "H<n>, ad"),
    ("g2", "R7, ad"),
    ("spin6 | su4", "C4, R6"),
    ("spin7", "R7, R8"),
    ("spin8", "R8_0, R8_+, R8_-"),
    ("spin9", "R1, R9, R16"),
    ("spin10", "R10, C16+, C16-"),
    ("spin16", "R128, R16"),
    ("model", MODELS),
];

const MODELS: &str = "torus-lemma-a, quaternion-lemma-b, sp1-cubed, spin10-reduced, spin7-r7r8r8-reduced, \
                      spin7-r7r7r8-reduced, spin8-000p-reduced, spin8-00p-reduced, spin8-0pm-reduced";

fn bad(msg: String) -> Error {
    Error::InvalidArgument(msg)
}

/// Build the representation named by `spec`.
pub fn build_rep(spec: &str) -> Result<LinearRepresentation> {
    let (group, summands) = spec
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("representation `{spec}` needs the form `group: summand + …`")))?;
    let group = group.trim();
    if group == "model" {
        return model(summands.trim());
    }
    let names: Vec<&str> = summands.split(" + ").map(str::trim).collect();
    if names.iter().any(|s| s.is_empty()) {
        return Err(Error::Parse(format!("empty summand in `{spec}`")));
    }
    let builder = GroupBuilder::new(group)?;
    let parts = names.iter().map(|s| builder.summand(s)).collect::<Result<Vec<_>>>()?;
    let mut rep = direct_sum(&parts)?;
    rep.group_label = group.to_string();
    Ok(rep)
}

fn model(name: &str) -> Result<LinearRepresentation> {
    match name {
        "torus-lemma-a" => models::torus_lemma_a(),
        "quaternion-lemma-b" => models::quaternion_lemma_b(),
        "sp1-cubed" => models::sp1_cubed(),
        "spin10-reduced" => models::spin10_reduced(),
        "spin7-r7r8r8-reduced" => models::spin7_r7r8r8_reduced(),
        "spin7-r7r7r8-reduced" => models::spin7_r7r7r8_reduced(),
        "spin8-000p-reduced" => models::spin8_000p_reduced(),
        "spin8-00p-reduced" => models::spin8_00p_reduced(),
        "spin8-0pm-reduced" => models::spin8_0pm_reduced(),
        _ => Err(bad(format!("unknown model `{name}`"))),
    }
}

enum GroupBuilder {
    Classical(Family, usize, LinearRepresentation),
    Sp2,
    G2(LinearRepresentation),
    Triality(usize, LinearRepresentation),
    Spin9,
    Spin10,
    Spin16,
}

fn octonion(label: &str) -> Result<HypercomplexElement> {
    HypercomplexElement::octonion(label)
}

impl GroupBuilder {
    fn new(group: &str) -> Result<Self> {
        let num = |prefix: &str| group.strip_prefix(prefix).and_then(|n| n.parse::<usize>().ok());
        Ok(match group {
            "sp1" | "su2" => GroupBuilder::Classical(Family::Sp, 1, classical_basis(Family::Sp, 1, true)?),
            "sp2" => GroupBuilder::Sp2,
            "g2" => GroupBuilder::G2(g2_basis()?),
            "spin6" | "su4" => GroupBuilder::Triality(6, spin_subalgebra(&[octonion("1")?, octonion("i")?])?),
            "spin7" => GroupBuilder::Triality(7, spin_subalgebra(&[octonion("1")?])?),
            "spin8" => GroupBuilder::Triality(8, spin_subalgebra(&[])?),
            "spin9" => GroupBuilder::Spin9,
            "spin10" => GroupBuilder::Spin10,
            "spin16" => GroupBuilder::Spin16,
            _ => {
                let (family, n) = if let Some(n) = num("so") {
                    (Family::So, n)
                } else if let Some(n) = num("su") {
                    (Family::Su, n)
                } else if let Some(n) = num("sp") {
                    (Family::Sp, n)
                } else {
                    return Err(bad(format!("unknown group `{group}`")));
                };
                GroupBuilder::Classical(family, n, classical_basis(family, n, family != Family::So)?)
            }
        })
    }

    fn summand(&self, name: &str) -> Result<LinearRepresentation> {
        let unknown = || bad(format!("unknown summand `{name}` for this group"));
        match self {
            GroupBuilder::Classical(family, n, vector) => {
                let vector_name = match (family, n) {
                    (Family::So, n) => format!("R{n}"),
                    (Family::Su, n) => format!("C{n}"),
                    (Family::Sp, 1) => "C2".to_string(),
                    (Family::Sp, n) => format!("H{n}"),
                };
                if name == vector_name {
                    let mut v = vector.clone();
                    v.summands[0].label = vector_name;
                    Ok(v)
                } else if name == "ad" || (*family == Family::Sp && *n == 1 && name == "R3") {
                    let mut a = adjoint(vector)?;
                    a.summands[0].label = name.to_string();
                    Ok(a)
                } else if *family == Family::So && name == format!("S2R{n}") {
                    traceless_symmetric(vector, *n)
                } else {
                    Err(unknown())
                }
            }
            GroupBuilder::Sp2 => match name {
                "C4" => spin5_spinor_rep(),
                "R5" => spin5_model()?.vector_rep(spin::vector_labels(5)).map(|r| spin::relabel(r, "R5")),
                "ad" => adjoint(&spin5_spinor_rep()?),
                _ => Err(unknown()),
            },
            GroupBuilder::G2(g2) => match name {
                "R7" => restrict_to_coordinates(g2, &[1, 2, 3, 4, 5, 6, 7], "R7"),
                "ad" => adjoint(g2),
                _ => Err(unknown()),
            },
            GroupBuilder::Triality(n, full) => {
                let block = |k: usize, label: &str| spin::relabel(full.summand_block(k), label);
                match (n, name) {
                    (8, "R8_0") => Ok(block(0, name)),
                    (8, "R8_+") => Ok(block(1, name)),
                    (8, "R8_-") => Ok(block(2, name)),
                    (7, "R8") => Ok(block(1, name)),
                    (7, "R7") => restrict_to_coordinates(&full.summand_block(0), &[1, 2, 3, 4, 5, 6, 7], name),
                    (6, "C4") => Ok(block(1, name)),
                    (6, "R6") => restrict_to_coordinates(&full.summand_block(0), &[2, 3, 4, 5, 6, 7], name),
                    _ => Err(unknown()),
                }
            }
            GroupBuilder::Spin9 => match name {
                "R1" => trivial("spin-9", 36, name),
                "R9" => spin9_vector_rep(),
                "R16" => spin9_rep(),
                _ => Err(unknown()),
            },
            GroupBuilder::Spin10 => match name {
                "R10" => spin::spin10_vector_rep(),
                "C16+" => spin10_halfspin(HalfSpin::Plus),
                "C16-" => spin10_halfspin(HalfSpin::Minus),
                _ => Err(unknown()),
            },
            GroupBuilder::Spin16 => match name {
                "R128" => Spin16Model::new()?.spin_rep(),
                "R16" => spin::vector_rep(16, Signature::Negative, spin::vector_labels(16)),
                _ => Err(unknown()),
            },
        }
    }
}

/// `R` with the zero action of an algebra of dimension `group_dim`.
fn trivial(group: &str, group_dim: usize, label: &str) -> Result<LinearRepresentation> {
    LinearRepresentation::new(group, vec![DMatrix::zeros(1, 1); group_dim], label, vec!["1".into()])
}

/// Orthonormal basis of traceless symmetric `n × n` matrices: `s{a}{b}` for
/// the off-diagonal pairs, then `d1..d{n-1}` for the diagonal part.
fn traceless_symmetric_basis(n: usize) -> (Vec<DMatrix<f64>>, Vec<String>) {
    let mut mats = Vec::new();
    let mut labels = Vec::new();
    for a in 0..n {
        for b in (a + 1)..n {
            let mut m = DMatrix::zeros(n, n);
            m[(a, b)] = std::f64::consts::FRAC_1_SQRT_2;
            m[(b, a)] = std::f64::consts::FRAC_1_SQRT_2;
            mats.push(m);
            labels.push(format!("s{}{}", a + 1, b + 1));
        }
    }
    for k in 1..n {
        let norm = ((k * (k + 1)) as f64).sqrt();
        let mut m = DMatrix::zeros(n, n);
        for i in 0..k {
            m[(i, i)] = 1.0 / norm;
        }
        m[(k, k)] = -(k as f64) / norm;
        mats.push(m);
        labels.push(format!("d{k}"));
    }
    (mats, labels)
}

/// `so(n)` acting on traceless symmetric matrices by `S ↦ XS − SX`.
fn traceless_symmetric(vector: &LinearRepresentation, n: usize) -> Result<LinearRepresentation> {
    let (mats, labels) = traceless_symmetric_basis(n);
    let d = mats.len();
    let basis = vector
        .basis
        .iter()
        .map(|x| {
            DMatrix::from_fn(d, d, |r, c| {
                let image = x * &mats[c] - &mats[c] * x;
                mats[r].dot(&image)
            })
        })
        .collect();
    Ok(LinearRepresentation {
        group_label: vector.group_label.clone(),
        basis,
        summands: vec![Summand {
            offset: 0,
            len: d,
            label: format!("S2R{n}"),
            basis_labels: labels,
        }],
        structure: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repbuilder::rep::bracket_closure_residual;

    #[test]
    fn dimensions() {
        for (spec, d, g) in [
            ("so3: R3 + R3", 6, 3),
            ("so3: S2R3 + R3", 8, 3),
            ("su3: ad + C3", 14, 8),
            ("su2: C2 + R3", 7, 3),
            ("sp2: C4 + R5", 13, 10),
            ("g2: R7 + R7 + R7", 21, 14),
            ("spin6: C4 + R6", 14, 15),
            ("spin7: R7 + R8 + R8", 23, 21),
            ("spin8: R8_0 + R8_+ + R8_-", 24, 28),
            ("spin9: R1 + R9 + R16", 26, 36),
            ("spin10: R10 + C16+", 42, 45),
            ("model: sp1-cubed", 12, 9),
        ] {
            let rep = build_rep(spec).unwrap();
            assert_eq!((rep.dim(), rep.group_dim()), (d, g), "{spec}");
            assert!(bracket_closure_residual(&rep.basis).unwrap() < 1e-10, "{spec}");
            assert!(rep.max_skew_defect() < 1e-12, "{spec}");
        }
    }

    #[test]
    fn traceless_symmetric_is_invariant_and_orthonormal() {
        let (mats, _) = traceless_symmetric_basis(4);
        assert_eq!(mats.len(), 9);
        for (i, a) in mats.iter().enumerate() {
            assert!(a.trace().abs() < 1e-14);
            for (j, b) in mats.iter().enumerate() {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((a.dot(b) - expect).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn unknown_names() {
        assert!(build_rep("e8: R248").is_err());
        assert!(build_rep("so3: C3").is_err());
        assert!(build_rep("so3 R3").is_err());
        assert!(build_rep("model: nothing").is_err());
    }
}
