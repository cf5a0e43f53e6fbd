//! Certificate logic: each registered case is dispatched to one of the
//! obstruction or consistency checks below.

use std::collections::BTreeMap;
use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;
use serde_json::{json, Value};

use super::catalog::{poincare_data, PoincarePoly, SpaceDescriptor};
use super::registry::{
    CandidateSpec, CaseSpec, CertificateKind, ConsistencySpec, InventorySpec, ProbeSpec, ReducedMode, ReductionSpec,
    Registry, Verdict,
};
use crate::algebra::{CliffordElement, Signature};
use crate::error::{Error, Result};
use crate::linalg::{column_span, commutator, flatten, flatten_all, null_space, RANK_CUTOFF, RANK_GAP};
use crate::morse::{find_critical_set, generic_morse_count, BettiTag, HeightSpec, SearchConfig};
use crate::orbit::{cohomogeneity, discrete_isotropy_probe, orbit_chart, substantial_span};
use crate::reduction::{discrete_normalizer_check, reduce, weight_ratio, weight_table};
use crate::repbuilder::spin::{self, HalfSpin, Spin16Model};
use crate::repbuilder::{build_rep, LinearRepresentation};
use crate::sampling::{self, derive_seed};

/// Numerical settings recorded with every certificate.
#[derive(Debug, Clone, Serialize)]
pub struct Tolerances {
    pub rank_cutoff: f64,
    pub rank_gap: f64,
    pub solve_tol: f64,
    pub dedup_radius: f64,
    pub link_radius: f64,
    pub hessian_band: f64,
}

/// Run-wide settings.
#[derive(Debug, Clone)]
pub struct RunOptions {
    pub master_seed: u64,
    /// Overrides every registered multi-start count.
    pub starts: Option<usize>,
    /// Overrides the acceptance threshold of the critical-point solver.
    pub solve_tol: Option<f64>,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            master_seed: DEFAULT_SEED,
            starts: None,
            solve_tol: None,
        }
    }
}

pub const DEFAULT_SEED: u64 = 20_240_601;

impl RunOptions {
    /// Defaults, with the master seed taken from `TAUT_SEED` when set.
    pub fn from_env() -> Result<Self> {
        let mut opts = RunOptions::default();
        if let Ok(s) = std::env::var("TAUT_SEED") {
            opts.master_seed = s
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("TAUT_SEED `{s}` is not an unsigned integer")))?;
        }
        Ok(opts)
    }

    fn search(&self, rep: &LinearRepresentation, seed: u64, starts: usize) -> SearchConfig {
        let mut cfg = SearchConfig::for_rep(rep, seed).with_starts(self.starts.unwrap_or(starts));
        if let Some(tol) = self.solve_tol {
            cfg.solve.tol = tol;
        }
        cfg
    }

    fn tolerances(&self, rep: &LinearRepresentation) -> Tolerances {
        let cfg = self.search(rep, 0, 0);
        Tolerances {
            rank_cutoff: RANK_CUTOFF,
            rank_gap: RANK_GAP,
            solve_tol: cfg.solve.tol,
            dedup_radius: cfg.dedup_radius,
            link_radius: cfg.link_radius,
            hessian_band: cfg.hessian_band,
        }
    }
}

/// The registered expectation a certificate is compared against.
#[derive(Debug, Clone, Serialize)]
pub struct Expected {
    pub verdict: Verdict,
    pub table_row: bool,
    pub orbit: Option<String>,
    pub values: Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct TautnessCertificate {
    pub case: String,
    pub title: String,
    pub certificate: CertificateKind,
    pub verdict: Verdict,
    pub expected: Expected,
    pub matches: bool,
    pub evidence: BTreeMap<String, Value>,
    pub diagnostics: Vec<String>,
    pub seed: u64,
    pub tolerances: Tolerances,
    pub runtime_ms: u64,
}

/// A strict comparison carried as evidence.
fn inequality(lhs: usize, rhs: usize, lhs_meaning: &str, rhs_meaning: &str) -> Value {
    json!({
        "lhs": lhs,
        "relation": if lhs > rhs { ">" } else if lhs == rhs { "=" } else { "<" },
        "rhs": rhs,
        "lhs_meaning": lhs_meaning,
        "rhs_meaning": rhs_meaning,
    })
}

struct Outcome {
    verdict: Verdict,
    evidence: BTreeMap<String, Value>,
    diagnostics: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            verdict: Verdict::Inconclusive,
            evidence: BTreeMap::new(),
            diagnostics: Vec::new(),
        }
    }

    fn put(&mut self, key: &str, v: impl Serialize) -> Result<()> {
        self.evidence.insert(key.to_string(), serde_json::to_value(v)?);
        Ok(())
    }

    /// Records a mismatch between a computed and a registered value.
    fn expect<T: PartialEq + std::fmt::Debug>(&mut self, what: &str, got: T, want: T) -> bool {
        if got != want {
            self.diagnostics.push(format!("{what}: computed {got:?}, registered {want:?}"));
            false
        } else {
            true
        }
    }
}

fn required<'a, T>(x: &'a Option<T>, case: &str, what: &str) -> Result<&'a T> {
    x.as_ref()
        .ok_or_else(|| Error::Parse(format!("case `{case}` needs `{what}` for its certificate")))
}

fn orbit_poly(case: &CaseSpec) -> Result<PoincarePoly> {
    Ok(poincare_data(&SpaceDescriptor::parse(required(&case.orbit, &case.id, "orbit")?)?))
}

/// Run one case. Cases that defer to another case run it first.
pub fn run_case(registry: &Registry, id: &str, opts: &RunOptions) -> Result<TautnessCertificate> {
    let resolve = |target: &str| run_case(registry, target, opts);
    certify(registry.get(id)?, opts, &resolve)
}

/// Certificate for `case`, with `resolve` supplying certificates of cases it
/// defers to.
pub fn certify(
    case: &CaseSpec,
    opts: &RunOptions,
    resolve: &dyn Fn(&str) -> Result<TautnessCertificate>,
) -> Result<TautnessCertificate> {
    let start = Instant::now();
    let seed = derive_seed(opts.master_seed, &case.id);
    let rep = build_rep(&case.rep)?;
    let point = case.point.as_deref().map(|s| rep.parse_point(s)).transpose()?;
    let mut expected_values = BTreeMap::new();
    let out = match case.certificate {
        CertificateKind::BettiMismatch => {
            let p = required(&point, &case.id, "point")?;
            let inv = required(&case.inventory, &case.id, "inventory")?;
            expected_values.insert("inventory", json!(inv));
            let bound = orbit_poly(case)?.total();
            betti_mismatch(&rep, p, inv, 1, bound, seed, opts)?
        }
        CertificateKind::TautConsistency => {
            let p = required(&point, &case.id, "point")?;
            let cons = required(&case.consistency, &case.id, "consistency")?;
            let poly = orbit_poly(case)?;
            expected_values.insert("orbit_total", json!(poly.total()));
            let mut out = taut_consistency(&rep, p, &poly, cons, seed, opts)?;
            if let Some(f) = &case.factorization {
                factorization(&mut out, &poly, &f.first, &f.second)?;
            }
            out
        }
        CertificateKind::SphereCodim => {
            let p = required(&point, &case.id, "point")?;
            let s = required(&case.sphere, &case.id, "sphere")?;
            expected_values.insert("sphere", json!(s));
            sphere_codim(&rep, p, s.span, s.orbit_dim, seed)?
        }
        CertificateKind::DisconnectedIsotropy | CertificateKind::IsotropyB1 => {
            let probe = required(&case.probe, &case.id, "probe")?;
            expected_values.insert("isotropy_dim", json!(probe.isotropy_dim));
            if case.certificate == CertificateKind::IsotropyB1 {
                isotropy_b1(&rep, probe, seed)?
            } else {
                disconnected_isotropy(&rep, probe, seed)?
            }
        }
        CertificateKind::Reduction => {
            let p = required(&point, &case.id, "point")?;
            let r = required(&case.reduction, &case.id, "reduction")?;
            expected_values.insert("reduction", json!({"dim_VH": r.vh, "dim_Nbar": r.nbar, "cohomogeneity": r.cohomogeneity}));
            reduction_case(&rep, p, r, seed, opts)?
        }
        CertificateKind::CitedTheory => {
            let c = required(&case.cited, &case.id, "cited")?;
            expected_values.insert("cited", json!(c));
            cited(case, &rep, point.as_ref(), seed, resolve)?
        }
        CertificateKind::Slice => {
            let p = required(&point, &case.id, "point")?;
            let s = required(&case.slice, &case.id, "slice")?;
            expected_values.insert("slice", json!(s));
            slice(&rep, p, s, resolve)?
        }
    };
    let matches = out.verdict == case.expected;
    Ok(TautnessCertificate {
        case: case.id.clone(),
        title: case.title.clone(),
        certificate: case.certificate,
        verdict: out.verdict,
        expected: Expected {
            verdict: case.expected,
            table_row: case.table,
            orbit: case.orbit.clone(),
            values: serde_json::to_value(expected_values)?,
        },
        matches,
        evidence: out.evidence,
        diagnostics: out.diagnostics,
        seed,
        tolerances: opts.tolerances(&rep),
        runtime_ms: start.elapsed().as_millis() as u64,
    })
}

fn tag_hints(spec: &InventorySpec) -> Result<Vec<BettiTag>> {
    spec.tag_hints
        .iter()
        .map(|t| BettiTag::parse(t).ok_or_else(|| Error::Parse(format!("unknown topology tag `{t}`"))))
        .collect()
}

/// Critical set of the height function, compared with the registered
/// inventory; obstruction when `multiplier · total > bound`.
fn betti_mismatch(
    rep: &LinearRepresentation,
    p: &DVector<f64>,
    spec: &InventorySpec,
    multiplier: usize,
    bound: usize,
    seed: u64,
    opts: &RunOptions,
) -> Result<Outcome> {
    let mut out = Outcome::new();
    let q = match &spec.height {
        Some(h) => rep.parse_point(h)?,
        None => p.clone(),
    };
    let cfg = opts.search(rep, seed, spec.starts).with_tag_hints(tag_hints(spec)?);
    let inv = find_critical_set(rep, p, &HeightSpec::height(q), &cfg)?;
    let profile = inv.dimension_profile();
    let total = inv.total_betti_sum;
    out.put("inventory", inv.record())?;
    out.put("dimension_profile", &profile)?;
    let mut ok = out.expect("dimension profile", profile, spec.dims.clone());
    ok &= out.expect("critical Betti sum", total, spec.total);
    if inv.stats.low_convergence {
        out.diagnostics.push("fewer than half of the starts converged".into());
    }
    for c in &inv.components {
        for f in &c.flags {
            out.diagnostics.push(format!("component of dim {} at value {:.6}: {f}", c.dim_estimate, c.value));
        }
    }
    let lower = multiplier * total;
    out.put(
        "inequality",
        inequality(lower, bound, "critical-set Betti sum (lower bound)", "Betti sum required of a taut orbit"),
    )?;
    out.verdict = if !ok {
        out.diagnostics.push("inventory differs from the registered one; verdict withheld".into());
        Verdict::Inconclusive
    } else if lower > bound {
        Verdict::ObstructionFound
    } else {
        Verdict::Consistent
    };
    Ok(out)
}

/// Generic height functions must be perfect: the number of critical points
/// of each index equals the corresponding Betti number.
fn taut_consistency(
    rep: &LinearRepresentation,
    p: &DVector<f64>,
    poly: &PoincarePoly,
    spec: &ConsistencySpec,
    seed: u64,
    opts: &RunOptions,
) -> Result<Outcome> {
    let mut out = Outcome::new();
    if spec.trials < 20 {
        return Err(Error::Parse("consistency checks need at least 20 directions".into()));
    }
    let cfg = opts.search(rep, seed, spec.starts);
    let report = generic_morse_count(rep, p, spec.trials, &cfg)?;
    let total = poly.total();
    let counts: Vec<usize> = report.counts.iter().map(|c| c.count).collect();
    let excess = counts.iter().filter(|c| **c > total).count();
    let deficit = counts.iter().filter(|c| **c < total).count();
    let index_mismatch = report
        .counts
        .iter()
        .filter(|c| {
            let n = c.by_index.len().max(poly.coeffs.len());
            (0..n).any(|k| c.by_index.get(k).copied().unwrap_or(0) != poly.coeffs.get(k).copied().unwrap_or(0))
        })
        .count();
    out.put("counts", &counts)?;
    out.put("by_index", report.counts.iter().map(|c| &c.by_index).collect::<Vec<_>>())?;
    out.put("betti_numbers", &poly.coeffs)?;
    out.put("skipped", &report.skipped)?;
    out.put("exceptions", excess + deficit)?;
    out.diagnostics.extend(report.skipped.iter().cloned());
    out.verdict = if counts.is_empty() {
        out.diagnostics.push("every direction was degenerate".into());
        Verdict::Inconclusive
    } else if excess > 0 {
        out.diagnostics.push(format!(
            "{excess} directions have more critical points than the catalog total {total}: escalate"
        ));
        out.put(
            "inequality",
            inequality(*counts.iter().max().unwrap_or(&0), total, "critical points", "catalog Betti sum"),
        )?;
        Verdict::ObstructionFound
    } else if deficit > 0 || index_mismatch > 0 {
        out.diagnostics.push(format!(
            "{deficit} directions with too few critical points, {index_mismatch} with an index profile off the Betti numbers"
        ));
        Verdict::Inconclusive
    } else {
        Verdict::Consistent
    };
    Ok(out)
}

/// Catalog check of `p(G(v₁,v₂)) = p(G v₁) p(G_{v₁} v₂)`.
fn factorization(out: &mut Outcome, orbit: &PoincarePoly, first: &str, second: &str) -> Result<()> {
    let a = poincare_data(&SpaceDescriptor::parse(first)?);
    let b = poincare_data(&SpaceDescriptor::parse(second)?);
    let holds = a.product(&b) == *orbit;
    out.put(
        "factorization",
        json!({"first": first, "second": second, "product": a.product(&b).coeffs, "orbit": orbit.coeffs, "holds": holds}),
    )?;
    if !holds {
        out.diagnostics.push("Poincaré factorization fails in the catalog".into());
        out.verdict = Verdict::Inconclusive;
    }
    Ok(())
}

fn sphere_codim(
    rep: &LinearRepresentation,
    p: &DVector<f64>,
    span_expected: usize,
    dim_expected: usize,
    seed: u64,
) -> Result<Outcome> {
    let mut out = Outcome::new();
    let chart = orbit_chart(rep, p)?;
    let span = substantial_span(rep, p, 4 * rep.dim() + 8, seed)?;
    out.put(
        "span",
        json!({"substantial_span": span, "orbit_dim": chart.orbit_dim, "isotropy_dim": chart.isotropy_dim}),
    )?;
    let mut ok = out.expect("isotropy dimension", chart.isotropy_dim, 0);
    ok &= out.expect("orbit dimension", chart.orbit_dim, dim_expected);
    ok &= out.expect("substantial span", span, span_expected);
    out.put(
        "inequality",
        inequality(span - chart.orbit_dim, 1, "substantial codimension", "codimension of a taut sphere"),
    )?;
    out.verdict = if !ok {
        Verdict::Inconclusive
    } else if span - chart.orbit_dim > 1 {
        Verdict::ObstructionFound
    } else {
        Verdict::Consistent
    };
    Ok(out)
}

/// Orthogonal matrix of a Clifford word on each summand of a spin-group
/// representation.
pub fn word_element(rep: &LinearRepresentation, word: &[usize]) -> Result<DMatrix<f64>> {
    let d = rep.dim();
    let mut g = DMatrix::zeros(d, d);
    for s in &rep.summands {
        let block = match (rep.group_label.as_str(), s.label.as_str()) {
            ("spin16", "R128") => Spin16Model::new()?.word_matrix(word)?,
            ("spin16", "R16") => {
                spin::vector_action(&CliffordElement::generator_product(16, Signature::Negative, word)?)?
            }
            ("spin10", "R10") => {
                spin::vector_action(&CliffordElement::generator_product(10, Signature::Negative, word)?)?
            }
            ("spin10", "C16+") => spin::spin10_model(HalfSpin::Plus)?.word_matrix(word)?,
            ("spin10", "C16-") => spin::spin10_model(HalfSpin::Minus)?.word_matrix(word)?,
            (group, label) => {
                return Err(Error::InvalidArgument(format!("no Clifford words for summand {label} of {group}")))
            }
        };
        g.view_mut((s.offset, s.offset), (s.len, s.len)).copy_from(&block);
    }
    Ok(g)
}

fn candidate_matrix(rep: &LinearRepresentation, c: &CandidateSpec) -> Result<DMatrix<f64>> {
    match (&c.signs, &c.word) {
        (Some(signs), None) => {
            if signs.len() != rep.summands.len() {
                return Err(Error::Parse(format!("candidate {} needs one sign pattern per summand", c.name)));
            }
            let mut diag = Vec::with_capacity(rep.dim());
            for (pattern, s) in signs.iter().zip(&rep.summands) {
                if pattern.chars().count() != s.len {
                    return Err(Error::Parse(format!("sign pattern of {} has the wrong length", c.name)));
                }
                for ch in pattern.chars() {
                    diag.push(match ch {
                        '+' => 1.0,
                        '-' => -1.0,
                        _ => return Err(Error::Parse(format!("bad sign `{ch}` in {}", c.name))),
                    });
                }
            }
            Ok(DMatrix::from_diagonal(&DVector::from_vec(diag)))
        }
        (None, Some(word)) => word_element(rep, word),
        _ => Err(Error::Parse(format!("candidate {} needs exactly one of signs, word", c.name))),
    }
}

/// Largest deviation of `g X gᵀ` from the span of the algebra.
fn normalizer_residual(rep: &LinearRepresentation, g: &DMatrix<f64>) -> Result<f64> {
    let q = column_span(&flatten_all(&rep.basis))?;
    Ok(rep
        .basis
        .iter()
        .map(|x| {
            let c = flatten(&(g * x * g.transpose()));
            (&c - &q * q.tr_mul(&c)).amax()
        })
        .fold(0.0, f64::max))
}

/// A point literal, or `random@k` for a seeded random unit vector in summand `k`.
fn probe_point(rep: &LinearRepresentation, literal: &str, seed: u64) -> Result<DVector<f64>> {
    if let Some(k) = literal.strip_prefix("random@") {
        let k: usize = k.parse().map_err(|_| Error::Parse(format!("bad summand in `{literal}`")))?;
        let s = rep
            .summands
            .get(k)
            .ok_or_else(|| Error::Parse(format!("no summand {k} in `{literal}`")))?;
        let mut r = sampling::rng(derive_seed(seed, "v1"));
        let mut v = DVector::zeros(rep.dim());
        v.rows_mut(s.offset, s.len).copy_from(&sampling::unit_vector(&mut r, s.len));
        Ok(v)
    } else {
        rep.parse_point(literal)
    }
}

fn random_in_summands(rep: &LinearRepresentation, summands: &[usize], r: &mut sampling::SeededRng) -> DVector<f64> {
    let mut v = DVector::zeros(rep.dim());
    for &k in summands {
        let s = &rep.summands[k];
        v.rows_mut(s.offset, s.len).copy_from(&sampling::gaussian_vector(r, s.len));
    }
    v
}

fn disconnected_isotropy(rep: &LinearRepresentation, probe: &ProbeSpec, seed: u64) -> Result<Outcome> {
    let mut out = Outcome::new();
    let mut v1 = probe_point(rep, &probe.v1, seed)?;
    let mut named = Vec::new();
    let mut normalizer_defect: f64 = 0.0;
    for c in &probe.candidates {
        let g = candidate_matrix(rep, c)?;
        normalizer_defect = normalizer_defect.max(normalizer_residual(rep, &g)?);
        if c.project_v1 {
            let fix = null_space(&(&g - DMatrix::identity(rep.dim(), rep.dim())))?;
            v1 = &fix * fix.tr_mul(&v1);
            v1.normalize_mut();
        }
        named.push((c.name.clone(), g));
    }
    let fixing: Vec<String> = discrete_isotropy_probe(&v1, &named)?.into_iter().map(String::from).collect();
    let chart = orbit_chart(rep, &v1)?;
    out.put(
        "probe",
        json!({
            "candidates": named.iter().map(|(n, _)| n).collect::<Vec<_>>(),
            "fixing_v1": fixing,
            "isotropy_dim_at_v1": chart.isotropy_dim,
            "normalizer_defect": normalizer_defect,
        }),
    )?;
    let mut ok = out.expect("isotropy dimension at v1", chart.isotropy_dim, probe.isotropy_dim);
    ok &= out.expect("candidates normalize the group", normalizer_defect < 1e-9, true);
    ok &= out.expect("some candidate fixes v1", !fixing.is_empty(), true);
    if chart.isotropy_dim != 0 {
        out.diagnostics.push("the isotropy group at v1 is not discrete".into());
        ok = false;
    }
    let mut r = sampling::rng(derive_seed(seed, "v2"));
    let mut moved = 0;
    let mut min_shift = f64::INFINITY;
    for _ in 0..probe.samples {
        let v2 = random_in_summands(rep, &probe.v2_summands, &mut r);
        let shift = named
            .iter()
            .filter(|(n, _)| fixing.contains(n))
            .map(|(_, g)| (g * &v2 - &v2).norm() / v2.norm())
            .fold(0.0, f64::max);
        if shift > 1e-6 {
            moved += 1;
            min_shift = min_shift.min(shift);
        }
    }
    out.put("samples", json!({"v2_samples": probe.samples, "moved": moved, "min_relative_shift": min_shift}))?;
    // G_{v1} is finite, so G_{v1} v2 is a finite set with at least two points
    out.put("inequality", inequality(if moved > 0 { 2 } else { 1 }, 1, "points of the finite orbit G_{v1} v2 (lower bound)", "components of a connected orbit"))?;
    out.verdict = if !ok {
        Verdict::Inconclusive
    } else if moved > 0 {
        Verdict::ObstructionFound
    } else {
        out.diagnostics.push("every sampled v2 is fixed: no obstruction found".into());
        Verdict::Consistent
    };
    Ok(out)
}

/// Regular `v₁` with torus isotropy `T`; `T v₂` is a torus of rank `r`, so
/// `b₁(G_{v₁} v₂) = r` against the registered bound for `b₁(G(v₁, v₂))`.
fn isotropy_b1(rep: &LinearRepresentation, probe: &ProbeSpec, seed: u64) -> Result<Outcome> {
    let mut out = Outcome::new();
    let bound = probe
        .b1_bound
        .ok_or_else(|| Error::Parse("b1 certificate needs b1_bound".into()))?;
    let v1 = probe_point(rep, &probe.v1, seed)?;
    let chart = orbit_chart(rep, &v1)?;
    let t = &chart.isotropy_basis;
    let abelian_defect = t
        .iter()
        .flat_map(|a| t.iter().map(move |b| commutator(a, b).amax()))
        .fold(0.0, f64::max);
    let mut r = sampling::rng(derive_seed(seed, "v2"));
    let mut torus_dims = Vec::new();
    for _ in 0..probe.samples {
        let v2 = random_in_summands(rep, &probe.v2_summands, &mut r);
        let mut m = DMatrix::zeros(rep.dim(), t.len());
        for (c, x) in t.iter().enumerate() {
            m.set_column(c, &(x * &v2));
        }
        torus_dims.push(column_span(&m)?.ncols());
    }
    let rank = chart.isotropy_dim;
    out.put(
        "probe",
        json!({
            "isotropy_dim_at_v1": rank,
            "abelian_defect": abelian_defect,
            "torus_orbit_dims": torus_dims,
            "b1_bound": bound,
            "b1_reason": probe.b1_reason,
        }),
    )?;
    let mut ok = out.expect("isotropy dimension at v1", rank, probe.isotropy_dim);
    ok &= out.expect("isotropy algebra abelian", abelian_defect < 1e-9, true);
    ok &= out.expect("torus acts locally freely on v2", torus_dims.iter().all(|d| *d == rank), true);
    out.put("inequality", inequality(rank, bound, "b1 of the torus orbit G_{v1} v2", "bound on b1 of G(v1, v2)"))?;
    out.verdict = if !ok {
        Verdict::Inconclusive
    } else if rank > bound {
        Verdict::ObstructionFound
    } else {
        Verdict::Consistent
    };
    Ok(out)
}

fn parse_planes(rep: &LinearRepresentation, planes: &[(String, String)]) -> Result<Vec<(DVector<f64>, DVector<f64>)>> {
    planes
        .iter()
        .map(|(a, b)| Ok((rep.parse_point(a)?, rep.parse_point(b)?)))
        .collect()
}

fn reduction_case(
    rep: &LinearRepresentation,
    p: &DVector<f64>,
    spec: &ReductionSpec,
    seed: u64,
    opts: &RunOptions,
) -> Result<Outcome> {
    let mut out = Outcome::new();
    let red = reduce(rep, p, Vec::new())?;
    let coh = cohomogeneity(rep, spec.cohomogeneity_trials, derive_seed(seed, "cohomogeneity"))?;
    let vh = red.fixed_basis.ncols();
    out.put(
        "reduction",
        json!({
            "dim_VH": vh,
            "dim_Nbar": red.dim_nbar,
            "effective_dim": red.effective_dim,
            "cohomogeneity": coh.value,
            "fixed_defect": red.fixed_defect(),
        }),
    )?;
    let mut ok = out.expect("dim V^H", vh, spec.vh);
    ok &= out.expect("dim Nbar", red.dim_nbar, spec.nbar);
    ok &= out.expect("cohomogeneity", coh.value, spec.cohomogeneity);
    ok &= out.expect("cohomogeneity from V^H", vh - red.effective_dim.min(red.dim_nbar), spec.cohomogeneity);

    if let Some(w) = &spec.weights {
        let gens: Vec<DMatrix<f64>> = w
            .generators
            .iter()
            .map(|c| {
                // must normalize h; the weights are read on V
                red.reduced_element(rep, &DVector::from_column_slice(c))?;
                Ok(rep.element(c))
            })
            .collect::<Result<_>>()?;
        let table = weight_table(&gens, &parse_planes(rep, &w.planes)?)?;
        out.put("weights", &table)?;
        ok &= out.expect("weights", table.weights.clone(), Some(w.expected.clone()));
    }
    if let Some(rs) = &spec.ratio {
        let g = red
            .normalizer_basis
            .get(rs.generator)
            .ok_or_else(|| Error::Parse(format!("no complement generator {}", rs.generator)))?;
        let ratio = weight_ratio(g, &parse_planes(rep, &rs.planes)?)?;
        out.put("ratio", &ratio)?;
        ok &= out.expect("speed ratio", ratio, Some(rs.expected.clone()));
    }
    let mut discrete = Vec::new();
    for d in &spec.discrete {
        let g = word_element(rep, &d.word)?;
        let mut proj = red.fixed_basis.clone();
        for (k, s) in rep.summands.iter().enumerate() {
            if !d.summands.contains(&k) {
                proj.rows_mut(s.offset, s.len).fill(0.0);
            }
        }
        let sub = column_span(&proj)?;
        let check = discrete_normalizer_check(&red, &d.name, &g, &sub)?;
        ok &= out.expect(&format!("{} preserves V^H", d.name), check.preserves_fixed, true);
        ok &= out.expect(&format!("{} normalizes h", d.name), check.normalizes_h, true);
        ok &= out.expect(&format!("det of {}", d.name), check.det_on_subspace.round(), d.det);
        discrete.push(check);
    }
    if !discrete.is_empty() {
        out.put("discrete", &discrete)?;
    }

    let r = &spec.reduced;
    let (rrep, rp) = match &r.model {
        Some(m) => {
            let mrep = build_rep(m)?;
            let literal = r.point.as_deref().ok_or_else(|| Error::Parse("a reduced model needs a point".into()))?;
            let mp = mrep.parse_point(literal)?;
            (mrep, mp)
        }
        None => (red.reduced_rep.clone(), red.to_fixed(p)),
    };
    out.put("reduced_rep", json!({"model": r.model, "dim": rrep.dim(), "group_dim": rrep.group_dim()}))?;
    let inner = match r.mode {
        ReducedMode::BettiMismatch => {
            let inv = r
                .inventory
                .as_ref()
                .ok_or_else(|| Error::Parse("reduced betti mismatch needs an inventory".into()))?;
            let bound = poincare_data(&SpaceDescriptor::parse(
                r.bound.as_deref().ok_or_else(|| Error::Parse("reduced betti mismatch needs a bound".into()))?,
            )?)
            .total();
            betti_mismatch(&rrep, &rp, inv, r.multiplier, bound, derive_seed(seed, "reduced"), opts)?
        }
        ReducedMode::TautConsistency => {
            let poly = poincare_data(&SpaceDescriptor::parse(
                r.orbit.as_deref().ok_or_else(|| Error::Parse("reduced consistency needs an orbit".into()))?,
            )?);
            let cons = r
                .consistency
                .as_ref()
                .ok_or_else(|| Error::Parse("reduced consistency needs trial counts".into()))?;
            taut_consistency(&rrep, &rp, &poly, cons, derive_seed(seed, "reduced"), opts)?
        }
    };
    for (k, v) in inner.evidence {
        out.evidence.insert(k, v);
    }
    out.diagnostics.extend(inner.diagnostics);
    out.verdict = if ok { inner.verdict } else { Verdict::Inconclusive };
    if !ok {
        out.diagnostics.push("reduction data differ from the registered values; verdict withheld".into());
    }
    Ok(out)
}

fn deferred(out: &mut Outcome, target: &str, resolve: &dyn Fn(&str) -> Result<TautnessCertificate>) -> Result<Verdict> {
    let cert = resolve(target)?;
    out.put(
        "deferred",
        json!({
            "case": target,
            "verdict": cert.verdict,
            "inequality": cert
                .evidence
                .get("inequality")
                .or_else(|| cert.evidence.get("deferred").and_then(|d| d.get("inequality"))),
            "citation": cert
                .evidence
                .get("citation")
                .or_else(|| cert.evidence.get("deferred").and_then(|d| d.get("citation"))),
        }),
    )?;
    Ok(cert.verdict)
}

fn cited(
    case: &CaseSpec,
    rep: &LinearRepresentation,
    point: Option<&DVector<f64>>,
    seed: u64,
    resolve: &dyn Fn(&str) -> Result<TautnessCertificate>,
) -> Result<Outcome> {
    let mut out = Outcome::new();
    let c = required(&case.cited, &case.id, "cited")?;
    let mut ok = true;
    out.put("citation", &c.citation)?;
    if !c.summand_dims.is_empty() {
        let dims: Vec<usize> = rep.summands.iter().map(|s| s.len).collect();
        out.put("summand_dims", &dims)?;
        ok &= out.expect("summand dimensions", dims, c.summand_dims.clone());
    }
    if let Some(p) = point {
        let chart = orbit_chart(rep, p)?;
        out.put("orbit", json!({"orbit_dim": chart.orbit_dim, "isotropy_dim": chart.isotropy_dim}))?;
        if let Some(i) = c.isotropy_dim {
            ok &= out.expect("isotropy dimension", chart.isotropy_dim, i);
        }
        if let Some(o) = c.orbit_dim {
            ok &= out.expect("orbit dimension", chart.orbit_dim, o);
        }
        if let Some(s) = c.span {
            let span = substantial_span(rep, p, 4 * rep.dim() + 8, seed)?;
            out.put("span", span)?;
            // the orbit lies in a round sphere of dimension span - 1
            out.put("sphere_codimension", (span - 1).saturating_sub(chart.orbit_dim))?;
            ok &= out.expect("substantial span", span, s);
        }
    }
    if let Some(t) = c.orbit_total {
        let total = orbit_poly(case)?.total();
        out.put("orbit_total", total)?;
        ok &= out.expect("catalog Betti sum of the orbit", total, t);
    }
    if let Some(target) = &c.defers_to {
        let v = deferred(&mut out, target, resolve)?;
        ok &= out.expect("deferred verdict", v, Verdict::ObstructionFound);
    }
    out.verdict = if ok { Verdict::CitedTheory } else { Verdict::Inconclusive };
    Ok(out)
}

/// The isotropy algebra at `p` acting on the normal space (or on chosen
/// summands): its dimension, and the dimension of the fixed vectors.
fn slice(
    rep: &LinearRepresentation,
    p: &DVector<f64>,
    spec: &super::registry::SliceSpec,
    resolve: &dyn Fn(&str) -> Result<TautnessCertificate>,
) -> Result<Outcome> {
    let mut out = Outcome::new();
    let chart = orbit_chart(rep, p)?;
    let space = if spec.on_summands.is_empty() {
        chart.normal_basis.clone()
    } else {
        let cols: Vec<usize> = spec
            .on_summands
            .iter()
            .flat_map(|&k| {
                let s = &rep.summands[k];
                s.offset..s.offset + s.len
            })
            .collect();
        DMatrix::from_fn(rep.dim(), cols.len(), |r, c| if r == cols[c] { 1.0 } else { 0.0 })
    };
    let k = space.ncols();
    let mut invariance: f64 = 0.0;
    let mut stacked = DMatrix::zeros(rep.dim() * chart.isotropy_basis.len().max(1), k);
    for (i, x) in chart.isotropy_basis.iter().enumerate() {
        let image = x * &space;
        invariance = invariance.max((&image - &space * space.tr_mul(&image)).amax());
        stacked.view_mut((i * rep.dim(), 0), (rep.dim(), k)).copy_from(&image);
    }
    let trivial = if chart.isotropy_basis.is_empty() { k } else { null_space(&stacked)?.ncols() };
    out.put(
        "slice",
        json!({
            "isotropy_dim": chart.isotropy_dim,
            "space_dim": k,
            "trivial_dim": trivial,
            "invariance_defect": invariance,
            "reason": spec.reason,
        }),
    )?;
    let mut ok = out.expect("isotropy dimension", chart.isotropy_dim, spec.isotropy_dim);
    ok &= out.expect("dimension of the slice space", k, spec.space_dim);
    ok &= out.expect("dimension of its fixed vectors", trivial, spec.trivial_dim);
    ok &= out.expect("slice space invariant", invariance < 1e-9, true);
    let v = deferred(&mut out, &spec.defers_to, resolve)?;
    out.verdict = if ok { v } else { Verdict::Inconclusive };
    Ok(out)
}
