//! Fixed-point subspaces of principal isotropy algebras, normalizers and the
//! reduced representations of `N̄ = N(H)/H` on `V^H`.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, column_span, commutator, flatten, flatten_all, null_space};
use crate::morse::{HeightProblem, HeightSpec, SolveOptions};
use crate::orbit::orbit_chart;
use crate::repbuilder::{LinearRepresentation, Summand};
use crate::sampling::{self, derive_seed};

pub mod models;

#[derive(Debug, Clone)]
pub struct ReductionData {
    /// Isotropy algebra `h` as matrices on `V`.
    pub h_basis: Vec<DMatrix<f64>>,
    /// Coefficients of `h` in the algebra basis (columns).
    pub h_coeffs: DMatrix<f64>,
    pub h_discrete: Vec<(String, DMatrix<f64>)>,
    /// Orthonormal basis of `V^H` (columns).
    pub fixed_basis: DMatrix<f64>,
    /// Coefficients of the normalizer `n(h)` (columns).
    pub normalizer_coeffs: DMatrix<f64>,
    /// Coefficients of a complement of `h` in `n(h)`.
    pub quotient_coeffs: DMatrix<f64>,
    pub dim_nbar: usize,
    /// Elements of `n(h)` modulo `h`, as matrices on `V`.
    pub normalizer_basis: Vec<DMatrix<f64>>,
    /// `N̄⁰` acting on `V^H`, one basis matrix per quotient coefficient column.
    pub reduced_rep: LinearRepresentation,
    /// Dimension of the span of the reduced basis matrices.
    pub effective_dim: usize,
    /// Optional sign automorphisms `L` with `V^L = V^H`.
    pub l_generators: Vec<(String, DMatrix<f64>)>,
}

/// Intersection of the kernels of `h_basis` and the fixed spaces of the
/// discrete elements.
pub fn fixed_subspace(
    rep: &LinearRepresentation,
    h_basis: &[DMatrix<f64>],
    h_discrete: &[(String, DMatrix<f64>)],
) -> Result<DMatrix<f64>> {
    let d = rep.dim();
    if !h_basis.is_empty() {
        let res = crate::repbuilder::rep::bracket_closure_residual(h_basis)?;
        if res > 1e-9 {
            return Err(Error::InvalidArgument(format!(
                "isotropy basis is not a subalgebra (residual {res:e})"
            )));
        }
    }
    let blocks = h_basis.len() + h_discrete.len();
    if blocks == 0 {
        return Ok(DMatrix::identity(d, d));
    }
    let mut stacked = DMatrix::zeros(blocks * d, d);
    for (k, x) in h_basis.iter().enumerate() {
        stacked.view_mut((k * d, 0), (d, d)).copy_from(x);
    }
    for (k, (_, g)) in h_discrete.iter().enumerate() {
        let off = (h_basis.len() + k) * d;
        stacked
            .view_mut((off, 0), (d, d))
            .copy_from(&(g - DMatrix::<f64>::identity(d, d)));
    }
    null_space(&stacked)
}

/// `n(h) = {X : [X, h] ⊆ h}` as coefficient vectors (columns) in the algebra
/// basis of `rep`.
pub fn normalizer_algebra(rep: &LinearRepresentation, h_basis: &[DMatrix<f64>]) -> Result<DMatrix<f64>> {
    let g = rep.group_dim();
    if h_basis.is_empty() {
        return Ok(DMatrix::identity(g, g));
    }
    let d2 = rep.dim() * rep.dim();
    let q = column_span(&flatten_all(h_basis))?;
    let mut m = DMatrix::zeros(h_basis.len() * d2, g);
    for (j, hj) in h_basis.iter().enumerate() {
        for (i, xi) in rep.basis.iter().enumerate() {
            let b = flatten(&commutator(xi, hj));
            let perp = &b - &q * (q.tr_mul(&b));
            m.view_mut((j * d2, i), (d2, 1)).copy_from(&perp);
        }
    }
    null_space(&m)
}

/// Full reduction at a principal point `p`: `h` is its isotropy algebra.
pub fn reduce(
    rep: &LinearRepresentation,
    p: &DVector<f64>,
    h_discrete: Vec<(String, DMatrix<f64>)>,
) -> Result<ReductionData> {
    let chart = orbit_chart(rep, p)?;
    let h_coeffs = chart.isotropy_coeffs.clone();
    let h_basis = chart.isotropy_basis.clone();
    let fixed_basis = fixed_subspace(rep, &h_basis, &h_discrete)?;
    if fixed_basis.ncols() == 0 {
        return Err(Error::InvalidArgument("the fixed subspace is zero".into()));
    }
    let normalizer_coeffs = normalizer_algebra(rep, &h_basis)?;
    // complement of h inside n(h)
    let quotient_coeffs = if h_coeffs.ncols() == 0 {
        normalizer_coeffs.clone()
    } else {
        let proj = &normalizer_coeffs - &h_coeffs * h_coeffs.tr_mul(&normalizer_coeffs);
        column_span(&proj)?
    };
    let dim_nbar = normalizer_coeffs.ncols() - h_coeffs.ncols();
    if quotient_coeffs.ncols() != dim_nbar {
        return Err(Error::Internal(format!(
            "h is not contained in its normalizer: dim n(h) = {}, dim h = {}, complement {}",
            normalizer_coeffs.ncols(),
            h_coeffs.ncols(),
            quotient_coeffs.ncols()
        )));
    }
    let normalizer_basis = (0..quotient_coeffs.ncols())
        .map(|c| rep.element(quotient_coeffs.column(c).as_slice()))
        .collect();
    let reduced_rep = compress(rep, &fixed_basis, &quotient_coeffs)?;
    let effective_dim = if reduced_rep.basis.is_empty() {
        0
    } else {
        column_span(&flatten_all(&reduced_rep.basis))?.ncols()
    };
    Ok(ReductionData {
        h_basis,
        h_coeffs,
        h_discrete,
        fixed_basis,
        normalizer_coeffs,
        quotient_coeffs,
        dim_nbar,
        normalizer_basis,
        reduced_rep,
        effective_dim,
        l_generators: Vec::new(),
    })
}

/// Restriction of the algebra elements with the given coefficient columns to
/// the invariant subspace spanned by the orthonormal columns of `f`.
pub fn compress(
    rep: &LinearRepresentation,
    f: &DMatrix<f64>,
    coeffs: &DMatrix<f64>,
) -> Result<LinearRepresentation> {
    let mut basis = Vec::with_capacity(coeffs.ncols());
    for c in 0..coeffs.ncols() {
        let y = rep.element(coeffs.column(c).as_slice());
        let yf = &y * f;
        let small = f.tr_mul(&yf);
        let res = (&yf - f * &small).amax();
        if res > 1e-9 {
            return Err(Error::Internal(format!(
                "normalizer element does not preserve V^H (residual {res:e})"
            )));
        }
        basis.push(small);
    }
    let k = f.ncols();
    Ok(LinearRepresentation {
        group_label: format!("{}-reduced", rep.group_label),
        basis,
        summands: vec![Summand {
            offset: 0,
            len: k,
            label: "VH".into(),
            basis_labels: (0..k).map(|i| format!("f{i}")).collect(),
        }],
        structure: Vec::new(),
    })
}

impl ReductionData {
    pub fn with_l_generators(mut self, generators: Vec<(String, DMatrix<f64>)>) -> Self {
        self.l_generators = generators;
        self
    }

    /// Largest `‖Y v − P Y v‖` over normalizer elements `Y` and `v ∈ V^H`.
    pub fn normalizer_defect(&self) -> f64 {
        let f = &self.fixed_basis;
        self.normalizer_basis
            .iter()
            .map(|y| {
                let yf = y * f;
                (&yf - f * f.tr_mul(&yf)).amax()
            })
            .fold(0.0, f64::max)
    }

    /// Principal orbit dimension of the reduced action, from random points
    /// of `V^H`.
    pub fn reduced_principal_orbit_dim(&self, trials: usize, seed: u64) -> Result<usize> {
        if self.reduced_rep.basis.is_empty() {
            return Ok(0);
        }
        Ok(crate::orbit::cohomogeneity(&self.reduced_rep, trials, seed)?.principal_orbit_dim)
    }

    /// Largest distance from `n̄ x` to `G x` over random `x ∈ V^H` and random
    /// reduced group elements `n̄`.
    pub fn membership_defect(&self, rep: &LinearRepresentation, samples: usize, seed: u64) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for s in 0..samples {
            let mut r = sampling::rng(derive_seed(seed, &format!("membership-{s}")));
            let y = sampling::unit_vector(&mut r, self.fixed_basis.ncols());
            let x = self.from_fixed(&y);
            let moved = if self.reduced_rep.basis.is_empty() {
                y.clone()
            } else {
                sampling::random_orbit_point(&self.reduced_rep, &y, &mut r, 2, 1.0)
            };
            let target = self.from_fixed(&moved);
            worst = worst.max(orbit_distance(rep, &x, &target, 12, derive_seed(seed, &format!("distance-{s}")))?);
        }
        Ok(worst)
    }

    /// Coordinates in `V^H` of a point of `V` (which should lie in `V^H`).
    pub fn to_fixed(&self, x: &DVector<f64>) -> DVector<f64> {
        self.fixed_basis.tr_mul(x)
    }

    pub fn from_fixed(&self, y: &DVector<f64>) -> DVector<f64> {
        &self.fixed_basis * y
    }

    /// Distance from `x` to `V^H`.
    pub fn fixed_residual(&self, x: &DVector<f64>) -> f64 {
        (x - self.from_fixed(&self.to_fixed(x))).norm()
    }

    /// Largest `‖X v‖` and `‖g v − v‖` over `h`, the discrete elements and
    /// the basis of `V^H`.
    pub fn fixed_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for x in &self.h_basis {
            worst = worst.max((x * &self.fixed_basis).amax());
        }
        for (_, g) in &self.h_discrete {
            worst = worst.max((g * &self.fixed_basis - &self.fixed_basis).amax());
        }
        worst
    }

    /// Restriction to `V^H` of an algebra element given by coefficients,
    /// which must normalize `h`.
    pub fn reduced_element(&self, rep: &LinearRepresentation, coeffs: &DVector<f64>) -> Result<DMatrix<f64>> {
        let c = DMatrix::from_column_slice(coeffs.len(), 1, coeffs.as_slice());
        let res = linalg::projection_residual(&self.normalizer_coeffs, coeffs);
        if res > 1e-9 * coeffs.norm().max(1.0) {
            return Err(Error::InvalidArgument(format!(
                "element does not normalize h (residual {res:e})"
            )));
        }
        Ok(compress(rep, &self.fixed_basis, &c)?.basis.remove(0))
    }
}

/// Rotation speeds `⟨v, Y u⟩` of algebra elements on oriented planes
/// `(u, v)`, and their expression as integer weights.
#[derive(Debug, Clone, Serialize)]
pub struct WeightTable {
    /// `speeds[generator][plane]`
    pub speeds: Vec<Vec<f64>>,
    /// `weights[plane][generator]`, integers after dividing by `unit`.
    pub weights: Option<Vec<Vec<i64>>>,
    pub unit: f64,
    /// Largest deviation of a plane from invariance.
    pub invariance_defect: f64,
}

fn rationalize(x: f64, max_den: i64, tol: f64) -> Option<(i64, i64)> {
    (1..=max_den).find_map(|den| {
        let num = (x * den as f64).round();
        ((x * den as f64 - num).abs() < tol * den as f64).then_some((num as i64, den))
    })
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Speeds of each generator on each plane, rationalized with denominators
/// at most 12 and scaled to coprime integers.
pub fn weight_table(generators: &[DMatrix<f64>], planes: &[(DVector<f64>, DVector<f64>)]) -> Result<WeightTable> {
    let mut speeds = vec![vec![0.0; planes.len()]; generators.len()];
    let mut invariance_defect: f64 = 0.0;
    for (pi, (u, v)) in planes.iter().enumerate() {
        let nu = u.norm();
        let un = u / nu;
        let vv = v - &un * un.dot(v);
        let vn = &vv / vv.norm();
        if !(nu > 1e-12 && vv.norm() > 1e-12) {
            return Err(Error::InvalidArgument(format!("plane {pi} is degenerate")));
        }
        for (gi, y) in generators.iter().enumerate() {
            let yu = y * &un;
            let s = vn.dot(&yu);
            let in_plane = &un * un.dot(&yu) + &vn * s;
            invariance_defect = invariance_defect.max((&yu - in_plane).norm());
            let yv = y * &vn;
            let back = &un * un.dot(&yv) + &vn * vn.dot(&yv);
            invariance_defect = invariance_defect.max((&yv - back).norm());
            speeds[gi][pi] = s;
        }
    }
    let unit = speeds
        .iter()
        .flatten()
        .map(|s| s.abs())
        .filter(|s| *s > 1e-9)
        .fold(f64::INFINITY, f64::min);
    let weights = if unit.is_finite() && invariance_defect < 1e-9 {
        let mut rats = Vec::new();
        let mut ok = true;
        for pi in 0..planes.len() {
            for row in &speeds {
                match rationalize(row[pi] / unit, 12, 1e-9) {
                    Some(r) => rats.push(r),
                    None => ok = false,
                }
            }
        }
        ok.then(|| {
            let lcm = rats.iter().fold(1i64, |l, (_, d)| l / gcd(l, *d) * d);
            let ints: Vec<i64> = rats.iter().map(|(n, d)| n * (lcm / d)).collect();
            let g = ints.iter().fold(0i64, |g, x| gcd(g, *x)).max(1);
            ints.chunks(generators.len())
                .map(|c| c.iter().map(|x| x / g).collect())
                .collect()
        })
    } else {
        None
    };
    Ok(WeightTable {
        speeds,
        weights,
        unit,
        invariance_defect,
    })
}

/// Ratios `|speed_k| : |speed_0|` of one generator over the planes, as
/// reduced fractions; `None` when a ratio is not rational with denominator ≤ 12.
pub fn weight_ratio(
    generator: &DMatrix<f64>,
    planes: &[(DVector<f64>, DVector<f64>)],
) -> Result<Option<Vec<(i64, i64)>>> {
    let table = weight_table(std::slice::from_ref(generator), planes)?;
    if table.invariance_defect > 1e-9 {
        return Ok(None);
    }
    let s = &table.speeds[0];
    if s[0].abs() < 1e-12 {
        return Ok(None);
    }
    Ok(s.iter()
        .map(|x| {
            rationalize(x.abs() / s[0].abs(), 12, 1e-9).map(|(n, d)| {
                let g = gcd(n, d).max(1);
                (n / g, d / g)
            })
        })
        .collect())
}

/// Checks on a finite set `L` of orthogonal automorphisms: squares central,
/// algebra preserved, `V^L = V^H`.
#[derive(Debug, Clone, Serialize)]
pub struct LCheck {
    pub generators: Vec<String>,
    pub squares_central: bool,
    pub normalizes_algebra: bool,
    pub dim_vl: usize,
    pub matches_vh: bool,
    pub max_defect: f64,
}

pub fn l_check(
    rep: &LinearRepresentation,
    red: &ReductionData,
    generators: &[(String, DMatrix<f64>)],
) -> Result<LCheck> {
    let d = rep.dim();
    let id = DMatrix::<f64>::identity(d, d);
    let mut max_defect: f64 = 0.0;
    let mut squares_central = true;
    let mut normalizes_algebra = true;
    let flat = flatten_all(&rep.basis);
    let q = column_span(&flat)?;
    for (_, g) in generators {
        let orth = (g.transpose() * g - &id).amax();
        if orth > 1e-9 {
            return Err(Error::InvalidArgument("L generator is not orthogonal".into()));
        }
        let sq = g * g;
        for x in &rep.basis {
            let c = commutator(&sq, x).amax();
            max_defect = max_defect.max(c);
            if c > 1e-9 {
                squares_central = false;
            }
            let conj = flatten(&(g * x * g.transpose()));
            let res = (&conj - &q * q.tr_mul(&conj)).norm();
            if res > 1e-9 {
                normalizes_algebra = false;
            }
        }
    }
    let vl = fixed_subspace(rep, &[], generators)?;
    let matches_vh = vl.ncols() == red.fixed_basis.ncols() && {
        let res = (&vl - &red.fixed_basis * red.fixed_basis.tr_mul(&vl)).amax();
        max_defect = max_defect.max(res);
        res < 1e-10
    };
    Ok(LCheck {
        generators: generators.iter().map(|(n, _)| n.clone()).collect(),
        squares_central,
        normalizes_algebra,
        dim_vl: vl.ncols(),
        matches_vh,
        max_defect,
    })
}

/// A discrete element's relation to the reduction: does it preserve `V^H`,
/// normalize `h`, and with which determinant does it act on a subspace of
/// `V^H` (an invariant subspace on which `N̄⁰` acts with determinant 1)?
#[derive(Debug, Clone, Serialize)]
pub struct DiscreteNormalizerCheck {
    pub name: String,
    pub preserves_fixed: bool,
    pub normalizes_h: bool,
    pub det_on_subspace: f64,
}

pub fn discrete_normalizer_check(
    red: &ReductionData,
    name: &str,
    g: &DMatrix<f64>,
    subspace: &DMatrix<f64>,
) -> Result<DiscreteNormalizerCheck> {
    let f = &red.fixed_basis;
    let gf = g * f;
    let preserves_fixed = (&gf - f * f.tr_mul(&gf)).amax() < 1e-9;
    let normalizes_h = if red.h_basis.is_empty() {
        true
    } else {
        let q = column_span(&flatten_all(&red.h_basis))?;
        red.h_basis.iter().all(|x| {
            let c = flatten(&(g * x * g.transpose()));
            (&c - &q * q.tr_mul(&c)).norm() < 1e-9
        })
    };
    let s = column_span(subspace)?;
    let restricted = s.transpose() * g * &s;
    let gs = g * &s;
    if (&gs - &s * s.tr_mul(&gs)).amax() > 1e-9 {
        return Err(Error::InvalidArgument(format!("{name} does not preserve the subspace")));
    }
    Ok(DiscreteNormalizerCheck {
        name: name.to_string(),
        preserves_fixed,
        normalizes_h,
        det_on_subspace: restricted.determinant(),
    })
}

/// Gradient ascent of `g ↦ ⟨g x, y⟩` in exponential steps with backtracking.
fn ascend(rep: &LinearRepresentation, x0: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
    let w: Vec<DVector<f64>> = rep.basis.iter().map(|m| m.tr_mul(y)).collect();
    let mut x = x0.clone();
    let mut eta = 1.0;
    'outer: for _ in 0..2000 {
        let g = DVector::from_iterator(w.len(), w.iter().map(|wi| wi.dot(&x)));
        let gn2 = g.norm_squared();
        if gn2 < 1e-26 {
            break;
        }
        let h = x.dot(y);
        loop {
            let xn = linalg::exp_action(&rep.element((&g * eta).as_slice()), &x);
            if xn.dot(y) > h + 1e-4 * eta * gn2 {
                x = xn;
                eta = (eta * 2.0).min(1e3);
                break;
            }
            eta *= 0.5;
            if eta < 1e-14 {
                break 'outer;
            }
        }
    }
    x
}

/// `min_g ‖g x − y‖` estimated by maximizing `⟨g x, y⟩` from random starts,
/// each ascent polished by Levenberg–Marquardt on the critical equations.
pub fn orbit_distance(
    rep: &LinearRepresentation,
    x: &DVector<f64>,
    y: &DVector<f64>,
    starts: usize,
    seed: u64,
) -> Result<f64> {
    let problem = HeightProblem::new(rep, HeightSpec::height(y.clone()))?;
    let opts = SolveOptions::default();
    let mut best = f64::NEG_INFINITY;
    for s in 0..starts.max(1) {
        let mut r = sampling::rng(derive_seed(seed, &format!("orbit-distance-{s}")));
        let x0 = if s == 0 {
            x.clone()
        } else {
            sampling::random_orbit_point(rep, x, &mut r, 4, std::f64::consts::PI)
        };
        let top = ascend(rep, &x0, y);
        let solved = problem.solve(&top, &opts);
        best = best.max(top.dot(y)).max(solved.x.dot(y));
    }
    Ok((x.norm_squared() + y.norm_squared() - 2.0 * best).max(0.0).sqrt())
}

#[derive(Debug, Clone, Serialize)]
pub struct ReductionReport {
    pub case: String,
    #[serde(rename = "dim_VH")]
    pub dim_vh: usize,
    #[serde(rename = "dim_Nbar")]
    pub dim_nbar: usize,
    pub cohomogeneity: usize,
    pub weights: Option<WeightTable>,
    pub l_check: Option<LCheck>,
}
