//! Orbit geometry at a point: tangent and normal spaces, isotropy
//! subalgebra, cohomogeneity, affine span and discrete isotropy probes.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, full_svd, numeric_rank};
use crate::repbuilder::LinearRepresentation;
use crate::sampling::{self, derive_seed};

#[derive(Debug, Clone)]
pub struct OrbitChart {
    pub base_point: DVector<f64>,
    /// Orthonormal columns spanning `{X p}`.
    pub tangent_basis: DMatrix<f64>,
    pub normal_basis: DMatrix<f64>,
    /// Orthonormal coefficient vectors (columns) of the isotropy subalgebra.
    pub isotropy_coeffs: DMatrix<f64>,
    pub isotropy_basis: Vec<DMatrix<f64>>,
    pub orbit_dim: usize,
    pub isotropy_dim: usize,
}

pub fn orbit_chart(rep: &LinearRepresentation, p: &DVector<f64>) -> Result<OrbitChart> {
    if p.len() != rep.dim() {
        return Err(Error::InvalidArgument(format!(
            "point has {} coordinates, representation space has {}",
            p.len(),
            rep.dim()
        )));
    }
    let a = rep.action_matrix(p);
    let svd = full_svd(&a);
    let rank = numeric_rank(&svd.singular_values)?;
    let g = rep.group_dim();
    let isotropy_coeffs = svd.v.columns(rank, g - rank).into_owned();
    let tangent_basis = linalg::column_span(&a)?;
    let normal_basis = linalg::orthogonal_complement(&tangent_basis)?;
    let isotropy_basis = (0..isotropy_coeffs.ncols())
        .map(|c| rep.element(isotropy_coeffs.column(c).as_slice()))
        .collect();
    Ok(OrbitChart {
        base_point: p.clone(),
        orbit_dim: tangent_basis.ncols(),
        isotropy_dim: g - rank,
        tangent_basis,
        normal_basis,
        isotropy_coeffs,
        isotropy_basis,
    })
}

/// Cohomogeneity estimate with the random point that witnesses it.
#[derive(Debug, Clone, Serialize)]
pub struct Cohomogeneity {
    pub value: usize,
    pub principal_orbit_dim: usize,
    pub witness: Vec<f64>,
    /// Trials whose rank decision was ambiguous and were skipped.
    pub ambiguous_trials: usize,
}

/// `min (d - dim G·x)` over random unit points `x`.
pub fn cohomogeneity(rep: &LinearRepresentation, trials: usize, seed: u64) -> Result<Cohomogeneity> {
    if trials == 0 {
        return Err(Error::InvalidArgument("cohomogeneity needs at least one trial".into()));
    }
    let d = rep.dim();
    let results: Vec<Option<(usize, DVector<f64>)>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut r = sampling::rng(derive_seed(seed, &format!("cohomogeneity-{t}")));
            let x = sampling::unit_vector(&mut r, d);
            orbit_chart(rep, &x).ok().map(|c| (c.orbit_dim, x))
        })
        .collect();
    let ambiguous_trials = results.iter().filter(|r| r.is_none()).count();
    let (dim, witness) = results
        .into_iter()
        .flatten()
        .max_by_key(|(dim, _)| *dim)
        .ok_or_else(|| Error::Internal("every cohomogeneity trial had an ambiguous rank".into()))?;
    Ok(Cohomogeneity {
        value: d - dim,
        principal_orbit_dim: dim,
        witness: witness.iter().copied().collect(),
        ambiguous_trials,
    })
}

/// Dimension of the affine span of the orbit through `p`, from `samples`
/// random orbit points.
pub fn substantial_span(rep: &LinearRepresentation, p: &DVector<f64>, samples: usize, seed: u64) -> Result<usize> {
    let d = rep.dim();
    if samples < d + 1 {
        return Err(Error::InvalidArgument(format!(
            "substantial span needs at least d + 1 = {} samples",
            d + 1
        )));
    }
    let mut r = sampling::rng(seed);
    let pts: Vec<DVector<f64>> = (0..samples)
        .map(|_| sampling::random_orbit_point(rep, p, &mut r, 3, std::f64::consts::PI))
        .collect();
    let mean = pts.iter().fold(DVector::zeros(d), |acc, x| acc + x) / samples as f64;
    let mut m = DMatrix::zeros(d, samples);
    for (c, x) in pts.iter().enumerate() {
        m.set_column(c, &(x - &mean));
    }
    let svd = full_svd(&m.transpose());
    numeric_rank(&svd.singular_values)
}

/// Named candidates `g` with `‖g p − p‖ < 1e−9`.
pub fn discrete_isotropy_probe<'a>(
    p: &DVector<f64>,
    candidates: &'a [(String, DMatrix<f64>)],
) -> Result<Vec<&'a str>> {
    let mut out = Vec::new();
    for (name, g) in candidates {
        if g.shape() != (p.len(), p.len()) {
            return Err(Error::InvalidArgument(format!("candidate {name} has the wrong shape")));
        }
        let orth = (g.transpose() * g - DMatrix::<f64>::identity(p.len(), p.len())).amax();
        if orth > 1e-9 {
            return Err(Error::InvalidArgument(format!("candidate {name} is not orthogonal")));
        }
        if (g * p - p).norm() < 1e-9 {
            out.push(name.as_str());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repbuilder::{classical_basis, Family};

    #[test]
    fn so3_on_r3() {
        let so3 = classical_basis(Family::So, 3, false).unwrap();
        let p = DVector::from_vec(vec![1.0, 0.0, 0.0]);
        let c = orbit_chart(&so3, &p).unwrap();
        assert_eq!((c.orbit_dim, c.isotropy_dim), (2, 1));
        assert_eq!(c.normal_basis.ncols(), 1);
        for x in &c.isotropy_basis {
            assert!((x * &p).norm() < 1e-10);
        }
        assert_eq!(substantial_span(&so3, &p, 10, 3).unwrap(), 3);
    }

    #[test]
    fn zero_point_is_a_point_orbit() {
        let so3 = classical_basis(Family::So, 3, false).unwrap();
        let c = orbit_chart(&so3, &DVector::zeros(3)).unwrap();
        assert_eq!((c.orbit_dim, c.isotropy_dim), (0, 3));
    }

    #[test]
    fn identity_candidate_fixes_everything() {
        let p = DVector::from_vec(vec![0.3, 0.1]);
        let cands = vec![("I".to_string(), DMatrix::identity(2, 2))];
        assert_eq!(discrete_isotropy_probe(&p, &cands).unwrap(), vec!["I"]);
    }
}
