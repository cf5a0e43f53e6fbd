use std::fmt;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, commutator, flatten, flatten_all, skew_defect};

/// One summand `V_k` of `V = V_1 ⊕ ⋯ ⊕ V_m`, occupying coordinates
/// `offset..offset + len`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summand {
    pub offset: usize,
    pub len: usize,
    pub label: String,
    /// Names of the coordinate vectors, used to parse point literals.
    #[serde(default)]
    pub basis_labels: Vec<String>,
}

/// A Lie algebra basis realized as skew-symmetric matrices on `R^d`.
#[derive(Clone)]
pub struct LinearRepresentation {
    pub group_label: String,
    pub basis: Vec<DMatrix<f64>>,
    pub summands: Vec<Summand>,
    /// Named structure matrices (complex or quaternionic structures).
    pub structure: Vec<(String, DMatrix<f64>)>,
}

impl fmt::Debug for LinearRepresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<&str> = self.summands.iter().map(|s| s.label.as_str()).collect();
        write!(
            f,
            "LinearRepresentation({}, d = {}, dim = {}, {:?})",
            self.group_label,
            self.dim(),
            self.group_dim(),
            labels
        )
    }
}

pub fn default_labels(len: usize) -> Vec<String> {
    (0..len).map(|i| format!("x{i}")).collect()
}

impl LinearRepresentation {
    /// Single-summand representation.
    pub fn new(
        group_label: impl Into<String>,
        basis: Vec<DMatrix<f64>>,
        summand_label: impl Into<String>,
        basis_labels: Vec<String>,
    ) -> Result<Self> {
        let d = basis.first().map(|m| m.nrows()).unwrap_or(0);
        if basis.iter().any(|m| m.nrows() != d || m.ncols() != d) {
            return Err(Error::InvalidArgument(
                "basis matrices must be square of one size".into(),
            ));
        }
        let basis_labels = if basis_labels.len() == d {
            basis_labels
        } else {
            default_labels(d)
        };
        Ok(LinearRepresentation {
            group_label: group_label.into(),
            basis,
            summands: vec![Summand {
                offset: 0,
                len: d,
                label: summand_label.into(),
                basis_labels,
            }],
            structure: Vec::new(),
        })
    }

    pub fn with_structure(mut self, name: impl Into<String>, m: DMatrix<f64>) -> Self {
        self.structure.push((name.into(), m));
        self
    }

    pub fn dim(&self) -> usize {
        self.summands.iter().map(|s| s.len).sum()
    }

    pub fn group_dim(&self) -> usize {
        self.basis.len()
    }

    /// `Σ c_i X_i`.
    pub fn element(&self, coeffs: &[f64]) -> DMatrix<f64> {
        let d = self.dim();
        let mut out = DMatrix::zeros(d, d);
        for (c, x) in coeffs.iter().zip(&self.basis) {
            if *c != 0.0 {
                out += x * *c;
            }
        }
        out
    }

    /// Matrix with columns `X_i p`.
    pub fn action_matrix(&self, p: &DVector<f64>) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.dim(), self.group_dim());
        for (i, x) in self.basis.iter().enumerate() {
            m.set_column(i, &(x * p));
        }
        m
    }

    pub fn max_skew_defect(&self) -> f64 {
        self.basis.iter().map(skew_defect).fold(0.0, f64::max)
    }

    /// Largest residual of projecting `[X_i, X_j]` onto the span of the basis.
    pub fn closure_residual(&self) -> Result<f64> {
        bracket_closure_residual(&self.basis)
    }

    pub fn summand(&self, label: &str) -> Option<&Summand> {
        self.summands.iter().find(|s| s.label == label)
    }

    /// Parse a point literal of the form `summand-term; summand-term; …`, one
    /// group per summand, each a `+`-separated list of `coeff*label` terms
    /// (`0` for the zero vector). Labels refer to the summand's basis labels.
    pub fn parse_point(&self, literal: &str) -> Result<DVector<f64>> {
        let groups: Vec<&str> = literal.split(';').map(str::trim).collect();
        if groups.len() != self.summands.len() {
            return Err(Error::Parse(format!(
                "point `{literal}` has {} groups, representation has {} summands",
                groups.len(),
                self.summands.len()
            )));
        }
        let mut p = DVector::zeros(self.dim());
        for (group, s) in groups.iter().zip(&self.summands) {
            if group.is_empty() || *group == "0" {
                continue;
            }
            for term in split_terms(group) {
                let (coeff, label) = parse_term(&term)?;
                let idx = s.basis_labels.iter().position(|l| *l == label).ok_or_else(|| {
                    Error::Parse(format!("unknown basis label `{label}` in summand {}", s.label))
                })?;
                p[s.offset + idx] += coeff;
            }
        }
        Ok(p)
    }

    pub fn to_document(&self) -> RepDocument {
        RepDocument {
            group_label: self.group_label.clone(),
            d: self.dim(),
            basis: self
                .basis
                .iter()
                .map(|m| m.transpose().iter().copied().collect())
                .collect(),
            summands: self.summands.clone(),
            structure_matrices: self
                .structure
                .iter()
                .map(|(name, m)| NamedMatrix {
                    name: name.clone(),
                    data: m.transpose().iter().copied().collect(),
                })
                .collect(),
        }
    }

    pub fn from_document(doc: &RepDocument) -> Result<Self> {
        let d = doc.d;
        let to_matrix = |data: &[f64]| -> Result<DMatrix<f64>> {
            if data.len() != d * d {
                return Err(Error::Parse(format!(
                    "matrix has {} entries, expected {}",
                    data.len(),
                    d * d
                )));
            }
            Ok(DMatrix::from_row_slice(d, d, data))
        };
        let basis = doc
            .basis
            .iter()
            .map(|m| to_matrix(m))
            .collect::<Result<Vec<_>>>()?;
        let structure = doc
            .structure_matrices
            .iter()
            .map(|nm| Ok((nm.name.clone(), to_matrix(&nm.data)?)))
            .collect::<Result<Vec<_>>>()?;
        let total: usize = doc.summands.iter().map(|s| s.len).sum();
        if total != d {
            return Err(Error::Parse(format!(
                "summands cover {total} coordinates, d = {d}"
            )));
        }
        Ok(LinearRepresentation {
            group_label: doc.group_label.clone(),
            basis,
            summands: doc.summands.clone(),
            structure,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_document())?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: RepDocument = serde_json::from_str(s)?;
        Self::from_document(&doc)
    }

    /// Restriction of every basis matrix to the coordinates of one summand.
    pub fn summand_block(&self, index: usize) -> LinearRepresentation {
        let s = &self.summands[index];
        let basis = self
            .basis
            .iter()
            .map(|m| m.view((s.offset, s.offset), (s.len, s.len)).into_owned())
            .collect();
        LinearRepresentation {
            group_label: self.group_label.clone(),
            basis,
            summands: vec![Summand {
                offset: 0,
                ..s.clone()
            }],
            structure: Vec::new(),
        }
    }
}

fn split_terms(group: &str) -> Vec<String> {
    // split on '+' and on '-' that starts a new term, keeping the sign
    let mut terms = Vec::new();
    let mut current = String::new();
    let mut prev: Option<char> = None;
    for ch in group.chars() {
        if ch == '+' || (ch == '-' && !current.trim().is_empty() && prev != Some('*') && prev != Some('e')) {
            if !current.trim().is_empty() {
                terms.push(current.trim().to_string());
            }
            current.clear();
            if ch == '-' {
                current.push('-');
            }
        } else {
            current.push(ch);
        }
        if !ch.is_whitespace() {
            prev = Some(ch);
        }
    }
    if !current.trim().is_empty() {
        terms.push(current.trim().to_string());
    }
    terms
}

fn parse_term(term: &str) -> Result<(f64, String)> {
    let term = term.replace(' ', "");
    if let Some((c, label)) = term.split_once('*') {
        let coeff: f64 = c
            .parse()
            .map_err(|_| Error::Parse(format!("bad coefficient in `{term}`")))?;
        Ok((coeff, label.to_string()))
    } else if let Some(rest) = term.strip_prefix('-') {
        Ok((-1.0, rest.to_string()))
    } else {
        Ok((1.0, term))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NamedMatrix {
    pub name: String,
    pub data: Vec<f64>,
}

/// JSON document for a serialized representation; matrices are row-major.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RepDocument {
    pub group_label: String,
    pub d: usize,
    pub basis: Vec<Vec<f64>>,
    pub summands: Vec<Summand>,
    pub structure_matrices: Vec<NamedMatrix>,
}

/// Largest residual of projecting pairwise brackets onto the span.
pub fn bracket_closure_residual(basis: &[DMatrix<f64>]) -> Result<f64> {
    if basis.is_empty() {
        return Ok(0.0);
    }
    let q = linalg::column_span(&flatten_all(basis))?;
    let mut worst: f64 = 0.0;
    for i in 0..basis.len() {
        for j in (i + 1)..basis.len() {
            let b = flatten(&commutator(&basis[i], &basis[j]));
            let proj = &q * (q.transpose() * &b);
            worst = worst.max((b - proj).norm());
        }
    }
    Ok(worst)
}

/// Block-diagonal sum of representations of the same group with identically
/// indexed algebra bases.
pub fn direct_sum(reps: &[LinearRepresentation]) -> Result<LinearRepresentation> {
    let first = reps
        .first()
        .ok_or_else(|| Error::InvalidArgument("direct sum of no representations".into()))?;
    for r in reps {
        if r.group_label != first.group_label || r.group_dim() != first.group_dim() {
            return Err(Error::InvalidArgument(format!(
                "group mismatch in direct sum: {} (dim {}) vs {} (dim {})",
                r.group_label,
                r.group_dim(),
                first.group_label,
                first.group_dim()
            )));
        }
    }
    let d: usize = reps.iter().map(|r| r.dim()).sum();
    let mut basis = vec![DMatrix::zeros(d, d); first.group_dim()];
    let mut summands = Vec::new();
    let mut structure = Vec::new();
    let mut offset = 0;
    for (k, r) in reps.iter().enumerate() {
        let rd = r.dim();
        for (dst, src) in basis.iter_mut().zip(&r.basis) {
            dst.view_mut((offset, offset), (rd, rd)).copy_from(src);
        }
        for s in &r.summands {
            summands.push(Summand {
                offset: offset + s.offset,
                ..s.clone()
            });
        }
        for (name, m) in &r.structure {
            let mut big = DMatrix::zeros(d, d);
            big.view_mut((offset, offset), (rd, rd)).copy_from(m);
            structure.push((format!("{name}@{k}"), big));
        }
        offset += rd;
    }
    Ok(LinearRepresentation {
        group_label: first.group_label.clone(),
        basis,
        summands,
        structure,
    })
}

/// Orthogonal matrix `exp(tX)` of a skew matrix.
pub fn exp_map(x: &DMatrix<f64>, t: f64) -> Result<DMatrix<f64>> {
    if skew_defect(x) >= 1e-10 {
        return Err(Error::InvalidArgument(format!(
            "exp_map needs a skew matrix, ‖X + Xᵀ‖ = {:e}",
            skew_defect(x)
        )));
    }
    Ok(linalg::expm(&(x * t)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repbuilder::classical::{classical_basis, Family};

    #[test]
    fn exp_zero_is_identity() {
        let z = DMatrix::zeros(4, 4);
        assert_eq!(exp_map(&z, 1.0).unwrap(), DMatrix::identity(4, 4));
    }

    #[test]
    fn exp_rejects_non_skew() {
        let m = DMatrix::identity(3, 3);
        assert!(exp_map(&m, 1.0).is_err());
    }

    #[test]
    fn direct_sum_of_one_is_identity_operation() {
        let so3 = classical_basis(Family::So, 3, false).unwrap();
        let s = direct_sum(std::slice::from_ref(&so3)).unwrap();
        assert_eq!(s.basis, so3.basis);
        assert_eq!(s.summands, so3.summands);
    }

    #[test]
    fn direct_sum_group_mismatch() {
        let so3 = classical_basis(Family::So, 3, false).unwrap();
        let so4 = classical_basis(Family::So, 4, false).unwrap();
        assert!(direct_sum(&[so3, so4]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let su2 = classical_basis(Family::Su, 2, true).unwrap();
        let sum = direct_sum(&[su2.clone(), su2]).unwrap();
        let back = LinearRepresentation::from_json(&sum.to_json().unwrap()).unwrap();
        assert_eq!(back.basis, sum.basis);
        assert_eq!(back.summands, sum.summands);
        assert_eq!(back.structure.len(), sum.structure.len());
    }

    #[test]
    fn point_literal_parsing() {
        let so3 = classical_basis(Family::So, 3, false).unwrap();
        let sum = direct_sum(&[so3.clone(), so3]).unwrap();
        let p = sum.parse_point("e1; 2*e2 - 0.5*e3").unwrap();
        assert_eq!(p.as_slice(), &[1.0, 0.0, 0.0, 0.0, 2.0, -0.5]);
        assert!(sum.parse_point("e1").is_err());
        assert!(sum.parse_point("e1; q").is_err());
    }
}
