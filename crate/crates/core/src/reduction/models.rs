//! Explicit reduced actions: products of unit quaternions and circles acting
//! on sums of quaternion lines by `x ↦ l_a x r_b`, and tori acting on `Cⁿ`.

use nalgebra::DMatrix;

use crate::algebra::hypercomplex::{left_mul, quat, right_mul};
use crate::error::{Error, Result};
use crate::repbuilder::{LinearRepresentation, Summand};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Factor {
    /// `Sp(1)`, three generators `i, j, k`.
    Sp1,
    /// The circle `e^{uθ}` for a unit imaginary quaternion `u = (x, y, z)`.
    Circle([f64; 3]),
}

impl Factor {
    fn directions(&self) -> Vec<[f64; 3]> {
        match self {
            Factor::Sp1 => vec![[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
            Factor::Circle(u) => vec![*u],
        }
    }
}

/// Multiplication by a factor or its conjugate on one side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mult {
    pub factor: usize,
    pub conj: bool,
}

pub const fn by(factor: usize) -> Option<Mult> {
    Some(Mult { factor, conj: false })
}

pub const fn by_conj(factor: usize) -> Option<Mult> {
    Some(Mult { factor, conj: true })
}

/// One summand `x ↦ l_a x r_b` on `H`, or on `Im H` when `imaginary` is set
/// (which requires `b = ā`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Line {
    pub left: Option<Mult>,
    pub right: Option<Mult>,
    pub imaginary: bool,
}

pub const fn line(left: Option<Mult>, right: Option<Mult>) -> Line {
    Line {
        left,
        right,
        imaginary: false,
    }
}

pub const fn im_line(left: Option<Mult>, right: Option<Mult>) -> Line {
    Line {
        left,
        right,
        imaginary: true,
    }
}

const H_LABELS: [&str; 4] = ["1", "i", "j", "k"];

/// The representation of `∏ factors` on `⊕ lines`.
pub fn quaternionic_model(label: &str, factors: &[Factor], lines: &[Line]) -> Result<LinearRepresentation> {
    let sizes: Vec<usize> = lines.iter().map(|l| if l.imaginary { 3 } else { 4 }).collect();
    let d: usize = sizes.iter().sum();
    for l in lines {
        for m in [l.left, l.right].into_iter().flatten() {
            if m.factor >= factors.len() {
                return Err(Error::InvalidArgument(format!("line refers to factor {}", m.factor)));
            }
        }
    }
    let mut basis = Vec::new();
    for (f, factor) in factors.iter().enumerate() {
        for u in factor.directions() {
            let q = quat(0.0, u[0], u[1], u[2]);
            let mut m = DMatrix::zeros(d, d);
            let mut off = 0;
            for (l, size) in lines.iter().zip(&sizes) {
                let mut block = DMatrix::<f64>::zeros(4, 4);
                if let Some(a) = l.left.filter(|a| a.factor == f) {
                    // d/dt l_{e^{ut}} = L_u, l_{conj} gives -L_u
                    block += left_mul(&q) * if a.conj { -1.0 } else { 1.0 };
                }
                if let Some(b) = l.right.filter(|b| b.factor == f) {
                    block += right_mul(&q) * if b.conj { -1.0 } else { 1.0 };
                }
                if l.imaginary {
                    if block.row(0).amax() > 1e-12 || block.column(0).amax() > 1e-12 {
                        return Err(Error::InvalidArgument(
                            "an imaginary line needs the conjugation action l_a r_ā".into(),
                        ));
                    }
                    m.view_mut((off, off), (3, 3)).copy_from(&block.view((1, 1), (3, 3)));
                } else {
                    m.view_mut((off, off), (4, 4)).copy_from(&block);
                }
                off += size;
            }
            basis.push(m);
        }
    }
    let mut summands = Vec::new();
    let mut off = 0;
    for (n, (l, size)) in lines.iter().zip(&sizes).enumerate() {
        let labels = if l.imaginary { &H_LABELS[1..] } else { &H_LABELS[..] };
        summands.push(Summand {
            offset: off,
            len: *size,
            label: format!("{}{}", if l.imaginary { "ImH" } else { "H" }, n + 1),
            basis_labels: labels.iter().map(|s| s.to_string()).collect(),
        });
        off += size;
    }
    Ok(LinearRepresentation {
        group_label: label.to_string(),
        basis,
        summands,
        structure: Vec::new(),
    })
}

/// A torus acting on `Cⁿ`, generator `g` rotating the `m`-th line with speed
/// `weights[g][m]`.
pub fn torus_model(label: &str, weights: &[Vec<f64>]) -> Result<LinearRepresentation> {
    let n = weights.first().map(Vec::len).unwrap_or(0);
    if n == 0 || weights.iter().any(|w| w.len() != n) {
        return Err(Error::InvalidArgument("torus weights must form a nonempty rectangle".into()));
    }
    let basis = weights
        .iter()
        .map(|w| {
            let mut m = DMatrix::zeros(2 * n, 2 * n);
            for (k, s) in w.iter().enumerate() {
                m[(2 * k + 1, 2 * k)] = *s;
                m[(2 * k, 2 * k + 1)] = -*s;
            }
            m
        })
        .collect();
    let summands = (0..n)
        .map(|k| Summand {
            offset: 2 * k,
            len: 2,
            label: format!("C{}", k + 1),
            basis_labels: vec!["1".into(), "i".into()],
        })
        .collect();
    Ok(LinearRepresentation {
        group_label: label.to_string(),
        basis,
        summands,
        structure: Vec::new(),
    })
}

/// `(e^{iα}, e^{iβ}) ↦ (e^{iα}, e^{iβ}, e^{i(α+β)})`.
pub fn torus_lemma_a() -> Result<LinearRepresentation> {
    torus_model("t2", &[vec![1.0, 0.0, 1.0], vec![0.0, 1.0, 1.0]])
}

/// `(p, q) ↦ (l_p, r_q̄, l_p r_q̄)` on `H³`.
pub fn quaternion_lemma_b() -> Result<LinearRepresentation> {
    quaternionic_model(
        "sp1xsp1",
        &[Factor::Sp1, Factor::Sp1],
        &[line(by(0), None), line(None, by_conj(1)), line(by(0), by_conj(1))],
    )
}

/// `(p, q, s) ↦ (l_p r_q̄, l_p r_s̄, l_q r_s̄)` on `H³`.
pub fn sp1_cubed() -> Result<LinearRepresentation> {
    quaternionic_model(
        "sp1^3",
        &[Factor::Sp1, Factor::Sp1, Factor::Sp1],
        &[
            line(by(0), by_conj(1)),
            line(by(0), by_conj(2)),
            line(by(1), by_conj(2)),
        ],
    )
}

/// `(e^{jθ}, p, q) ↦ (l_p r_{e^{−jθ}}, l_q r_{e^{jθ}}, l_p r_q̄)` on `H³`.
pub fn spin10_reduced() -> Result<LinearRepresentation> {
    quaternionic_model(
        "u1xsp1xsp1",
        &[Factor::Circle([0.0, 1.0, 0.0]), Factor::Sp1, Factor::Sp1],
        &[
            line(by(1), by_conj(0)),
            line(by(2), by(0)),
            line(by(1), by_conj(2)),
        ],
    )
}

/// `(q, s) ↦ (l_s r_s̄, l_s r_q̄, l_s r_q̄)` on `R³ ⊕ H ⊕ H`.
pub fn spin7_r7r8r8_reduced() -> Result<LinearRepresentation> {
    quaternionic_model(
        "sp1xsp1",
        &[Factor::Sp1, Factor::Sp1],
        &[
            im_line(by(1), by_conj(1)),
            line(by(1), by_conj(0)),
            line(by(1), by_conj(0)),
        ],
    )
}

/// `(q, s) ↦ (l_s r_s̄, l_s r_s̄, l_s r_q̄)` on `R³ ⊕ R³ ⊕ H`.
pub fn spin7_r7r7r8_reduced() -> Result<LinearRepresentation> {
    quaternionic_model(
        "sp1xsp1",
        &[Factor::Sp1, Factor::Sp1],
        &[
            im_line(by(1), by_conj(1)),
            im_line(by(1), by_conj(1)),
            line(by(1), by_conj(0)),
        ],
    )
}

/// `(q, s, t) ↦ (l_s r_t̄, l_s r_t̄, l_s r_t̄, l_s r_q̄)` on `H⁴`.
pub fn spin8_000p_reduced() -> Result<LinearRepresentation> {
    quaternionic_model(
        "sp1^3",
        &[Factor::Sp1, Factor::Sp1, Factor::Sp1],
        &[
            line(by(1), by_conj(2)),
            line(by(1), by_conj(2)),
            line(by(1), by_conj(2)),
            line(by(1), by_conj(0)),
        ],
    )
}

/// `(t_θ, s_φ) ↦ (e^{iθ}, e^{iθ}, e^{i(θ/2+φ)})`.
pub fn spin8_00p_reduced() -> Result<LinearRepresentation> {
    torus_model("t2", &[vec![1.0, 1.0, 0.5], vec![0.0, 0.0, 1.0]])
}

/// `(t_θ, s_φ) ↦ (e^{iθ}, e^{i(θ/2+φ)}, e^{i(θ/2−φ)})`.
pub fn spin8_0pm_reduced() -> Result<LinearRepresentation> {
    torus_model("t2", &[vec![1.0, 0.5, 0.5], vec![0.0, 1.0, -1.0]])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repbuilder::rep::bracket_closure_residual;

    #[test]
    fn models_are_skew_and_closed() {
        for rep in [
            sp1_cubed().unwrap(),
            spin10_reduced().unwrap(),
            spin7_r7r8r8_reduced().unwrap(),
            spin7_r7r7r8_reduced().unwrap(),
            spin8_000p_reduced().unwrap(),
            quaternion_lemma_b().unwrap(),
        ] {
            assert!(rep.max_skew_defect() < 1e-14, "{}", rep.group_label);
            assert!(bracket_closure_residual(&rep.basis).unwrap() < 1e-12, "{}", rep.group_label);
        }
        assert_eq!(spin7_r7r8r8_reduced().unwrap().dim(), 11);
        assert_eq!(spin10_reduced().unwrap().group_dim(), 7);
    }

    #[test]
    fn imaginary_line_needs_conjugation() {
        assert!(quaternionic_model("x", &[Factor::Sp1, Factor::Sp1], &[im_line(by(0), by_conj(1))]).is_err());
    }
}
