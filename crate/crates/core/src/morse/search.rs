use std::cmp::Ordering;
use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use super::problem::{signature_of, HeightProblem, HeightSpec, Signature, SolveOptions};
use super::{BettiTag, CriticalComponent, CriticalInventory, SearchStats};
use crate::error::{Error, Result};
use crate::linalg::full_svd;
use crate::orbit::orbit_chart;
use crate::repbuilder::LinearRepresentation;
use crate::sampling::{self, derive_seed};

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub starts: usize,
    pub seed: u64,
    pub solve: SolveOptions,
    /// Converged points closer than this are merged.
    pub dedup_radius: f64,
    /// Points closer than this are linked into one component directly.
    pub link_radius: f64,
    /// Number of random exponential factors in a start.
    pub start_factors: usize,
    pub start_scale: f64,
    /// Relative eigenvalue band for Hessian nullity.
    pub hessian_band: f64,
    /// Representatives per signature group used for linking walks.
    pub max_representatives: usize,
    pub walk_step: f64,
    pub walk_max_steps: usize,
    /// Topology labels for components of dimension ≥ 2, matched by dimension.
    pub tag_hints: Vec<BettiTag>,
}

impl SearchConfig {
    /// Defaults with 2000 starts for groups of dimension ≤ 15 and 8000 above.
    pub fn for_rep(rep: &LinearRepresentation, seed: u64) -> Self {
        SearchConfig {
            starts: if rep.group_dim() <= 15 { 2000 } else { 8000 },
            seed,
            solve: SolveOptions::default(),
            dedup_radius: 1e-5,
            link_radius: 1e-2,
            start_factors: 4,
            start_scale: PI,
            hessian_band: 1e-8,
            max_representatives: 24,
            walk_step: 0.05,
            walk_max_steps: 400,
            tag_hints: Vec::new(),
        }
    }

    pub fn with_starts(mut self, starts: usize) -> Self {
        self.starts = starts;
        self
    }

    pub fn with_tag_hints(mut self, tags: Vec<BettiTag>) -> Self {
        self.tag_hints = tags;
        self
    }
}

/// `r(x) = Σ ⟨q, X_i x⟩²` and its gradient in the exponential chart at `x`.
pub fn criticality_residual(
    rep: &LinearRepresentation,
    x: &DVector<f64>,
    q: &DVector<f64>,
) -> Result<(f64, DVector<f64>)> {
    let problem = HeightProblem::new(rep, HeightSpec::height(q.clone()))?;
    Ok(problem.residual_and_gradient(x))
}

/// Index and nullity of the normal Hessian of `h_q` at a critical point `x`.
pub fn morse_index(rep: &LinearRepresentation, x: &DVector<f64>, spec: &HeightSpec) -> Result<Signature> {
    let problem = HeightProblem::new(rep, spec.clone())?;
    let r = problem.residual(x);
    if r >= 1e-12 {
        return Err(Error::InvalidArgument(format!(
            "point is not critical (residual {r:e})"
        )));
    }
    let rank = orbit_chart(rep, x)?.orbit_dim;
    let (h, _) = problem.reduced_hessian(x, rank);
    Ok(signature_of(&h, 1e-8))
}

fn lexicographic(a: &DVector<f64>, b: &DVector<f64>) -> Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        match x.total_cmp(y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

struct Classified {
    x: DVector<f64>,
    value: f64,
    sig: Signature,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, i: usize) -> usize {
        let mut r = i;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut c = i;
        while self.0[c] != r {
            let next = self.0[c];
            self.0[c] = r;
            c = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi] = lo;
        }
    }
}

/// Null directions of the normal Hessian at `c` as algebra elements, with
/// the tangent vectors `X c` they produce.
fn null_directions(
    problem: &HeightProblem,
    c: &DVector<f64>,
    rank: usize,
    nullity: usize,
) -> (Vec<DMatrix<f64>>, DMatrix<f64>) {
    let (h, comp) = problem.reduced_hessian(c, rank);
    let eig = ((&h + h.transpose()) * 0.5).symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].abs().total_cmp(&eig.eigenvalues[b].abs()));
    let mut dirs = Vec::with_capacity(nullity);
    let mut tangent = DMatrix::zeros(c.len(), nullity);
    for (k, &col) in order.iter().take(nullity).enumerate() {
        let coeffs = &comp * eig.eigenvectors.column(col);
        let y = problem.rep.element(coeffs.as_slice());
        tangent.set_column(k, &(&y * c));
        dirs.push(y);
    }
    (dirs, tangent)
}

fn polish_options(base: &SolveOptions) -> SolveOptions {
    SolveOptions {
        max_iterations: 40,
        ..base.clone()
    }
}

/// Follow the critical manifold through `a` toward `b`: step along Hessian
/// null directions, re-project onto the critical set, stop when within the
/// link radius of `b` or when progress stalls.
fn walk_links(
    problem: &HeightProblem,
    a: &DVector<f64>,
    b: &DVector<f64>,
    rank: usize,
    nullity: usize,
    cfg: &SearchConfig,
) -> bool {
    let opts = polish_options(&cfg.solve);
    let mut c = a.clone();
    let mut best = (&c - b).norm();
    let mut stalled = 0;
    for _ in 0..cfg.walk_max_steps {
        let dist = (&c - b).norm();
        if dist < cfg.link_radius {
            return true;
        }
        let (dirs, tangent) = null_directions(problem, &c, rank, nullity);
        let w = b - &c;
        let svd = tangent.clone().svd(true, true);
        let Ok(alpha) = svd.solve(&w, 1e-10) else {
            return false;
        };
        let move_vec = &tangent * &alpha;
        let mv = move_vec.norm();
        if mv < 1e-3 * dist {
            return false;
        }
        let scale = cfg.walk_step.min(dist) / mv;
        let mut y = DMatrix::zeros(c.len(), c.len());
        for (k, d) in dirs.iter().enumerate() {
            y += d * (alpha[k] * scale);
        }
        let next = crate::linalg::exp_action(&y, &c);
        let solved = problem.solve(&next, &opts);
        if !solved.converged {
            return false;
        }
        c = solved.x;
        let nd = (&c - b).norm();
        if nd < best - 1e-3 * cfg.walk_step {
            best = nd;
            stalled = 0;
        } else {
            stalled += 1;
            if stalled > 8 {
                return false;
            }
        }
    }
    false
}

/// Does stepping along each null direction lead to other critical points?
fn verify_null_directions(
    problem: &HeightProblem,
    x: &DVector<f64>,
    rank: usize,
    nullity: usize,
    cfg: &SearchConfig,
) -> bool {
    let opts = polish_options(&cfg.solve);
    let (dirs, tangent) = null_directions(problem, x, rank, nullity);
    let step = 0.02;
    dirs.iter().enumerate().all(|(k, y)| {
        let len = tangent.column(k).norm();
        if len < 1e-12 {
            return false;
        }
        let moved = crate::linalg::exp_action(&(y * (step / len)), x);
        let solved = problem.solve(&moved, &opts);
        solved.converged && (&solved.x - x).norm() > 0.5 * step
    })
}

fn local_pca_dim(points: &[DVector<f64>], center: &DVector<f64>, dim: usize) -> Option<usize> {
    let near: Vec<&DVector<f64>> = points.iter().filter(|p| (*p - center).norm() < 0.25).collect();
    if near.len() < 2 * dim + 4 {
        return None;
    }
    let d = center.len();
    let mean = near.iter().fold(DVector::zeros(d), |acc, p| acc + *p) / near.len() as f64;
    let mut m = DMatrix::zeros(near.len(), d);
    for (r, p) in near.iter().enumerate() {
        m.set_row(r, &(*p - &mean).transpose());
    }
    let sv = full_svd(&m).singular_values;
    let top = sv.first().copied().unwrap_or(0.0);
    Some(sv.iter().filter(|s| **s > 0.1 * top).count())
}

/// Multi-start enumeration of the critical set of `spec` on the orbit of `p`.
pub fn find_critical_set(
    rep: &LinearRepresentation,
    p: &DVector<f64>,
    spec: &HeightSpec,
    cfg: &SearchConfig,
) -> Result<CriticalInventory> {
    if cfg.starts == 0 {
        return Err(Error::InvalidArgument("critical-set search needs starts".into()));
    }
    let chart = orbit_chart(rep, p)?;
    let rank = chart.orbit_dim;
    let problem = HeightProblem::new(rep, spec.clone())?;

    let solved: Vec<Option<DVector<f64>>> = (0..=cfg.starts)
        .into_par_iter()
        .map(|i| {
            let x0 = if i == 0 {
                p.clone()
            } else {
                let mut r = sampling::rng(derive_seed(cfg.seed, &format!("start-{i}")));
                sampling::random_orbit_point(rep, p, &mut r, cfg.start_factors, cfg.start_scale)
            };
            let s = problem.solve(&x0, &cfg.solve);
            s.converged.then_some(s.x)
        })
        .collect();
    let mut stats = SearchStats {
        starts: cfg.starts + 1,
        ..Default::default()
    };
    let mut converged: Vec<DVector<f64>> = solved.into_iter().flatten().collect();
    stats.converged = converged.len();
    stats.low_convergence = 2 * stats.converged < stats.starts;
    converged.sort_by(lexicographic);

    let mut distinct: Vec<DVector<f64>> = Vec::new();
    for x in converged {
        if !distinct.iter().any(|y| (y - &x).norm() < cfg.dedup_radius) {
            distinct.push(x);
        }
    }
    stats.deduped = distinct.len();

    let classified: Vec<Classified> = distinct
        .into_par_iter()
        .map(|x| {
            let (h, _) = problem.reduced_hessian(&x, rank);
            let sig = signature_of(&h, cfg.hessian_band);
            let value = spec.value(&x);
            Classified { x, value, sig }
        })
        .collect();
    stats.ambiguous_hessians = classified.iter().filter(|c| c.sig.ambiguous).count();

    // groups of equal signature and critical value
    let mut order: Vec<usize> = (0..classified.len()).collect();
    order.sort_by(|&a, &b| {
        let (ca, cb) = (&classified[a], &classified[b]);
        (ca.sig.nullity, ca.sig.index)
            .cmp(&(cb.sig.nullity, cb.sig.index))
            .then(ca.value.total_cmp(&cb.value))
            .then(lexicographic(&ca.x, &cb.x))
    });
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for &i in &order {
        let c = &classified[i];
        let same = groups.last().map(|g| {
            let last = &classified[*g.last().unwrap()];
            last.sig.nullity == c.sig.nullity
                && last.sig.index == c.sig.index
                && (last.value - c.value).abs() < 1e-6
        });
        match same {
            Some(true) => groups.last_mut().unwrap().push(i),
            _ => groups.push(vec![i]),
        }
    }

    let mut components = Vec::new();
    for group in groups {
        let nullity = classified[group[0]].sig.nullity;
        if nullity == 0 {
            for i in group {
                components.push(build_component(&problem, &classified, vec![i], rank, cfg));
            }
            continue;
        }
        let sets = link_group(&problem, &classified, &group, rank, nullity, cfg, &mut stats);
        let many = sets.len() > 1;
        for members in sets {
            let mut comp = build_component(&problem, &classified, members, rank, cfg);
            if many {
                comp.flags.push("same-signature-unlinked".into());
            }
            components.push(comp);
        }
    }
    components.sort_by(|a, b| {
        a.dim_estimate
            .cmp(&b.dim_estimate)
            .then(a.value.total_cmp(&b.value))
            .then(lexicographic(&a.representative, &b.representative))
    });
    let total_betti_sum = components.iter().map(|c| c.betti_tag.betti_sum()).sum();
    Ok(CriticalInventory {
        components,
        total_betti_sum,
        stats,
    })
}

fn link_group(
    problem: &HeightProblem,
    classified: &[Classified],
    group: &[usize],
    rank: usize,
    nullity: usize,
    cfg: &SearchConfig,
    stats: &mut SearchStats,
) -> Vec<Vec<usize>> {
    let n = group.len();
    let pts: Vec<&DVector<f64>> = group.iter().map(|&i| &classified[i].x).collect();
    let mut uf = UnionFind::new(n);
    for a in 0..n {
        for b in (a + 1)..n {
            if (pts[a] - pts[b]).norm() < cfg.link_radius {
                uf.union(a, b);
            }
        }
    }
    // farthest-point representatives
    let mut reps = vec![0usize];
    let mut dist: Vec<f64> = pts.iter().map(|p| (*p - pts[0]).norm()).collect();
    while reps.len() < cfg.max_representatives.min(n) {
        let (far, d) = dist
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, d)| (i, *d))
            .unwrap();
        if d < cfg.link_radius {
            break;
        }
        reps.push(far);
        for (i, p) in pts.iter().enumerate() {
            dist[i] = dist[i].min((*p - pts[far]).norm());
        }
    }
    let mut edges: Vec<(f64, usize, usize)> = Vec::new();
    for (ai, &a) in reps.iter().enumerate() {
        for &b in &reps[ai + 1..] {
            edges.push(((pts[a] - pts[b]).norm(), a, b));
        }
    }
    edges.sort_by(|x, y| x.0.total_cmp(&y.0).then((x.1, x.2).cmp(&(y.1, y.2))));
    let mut failures: Vec<(usize, usize)> = Vec::new();
    let try_link = |a: usize, b: usize, uf: &mut UnionFind, failures: &mut Vec<(usize, usize)>, stats: &mut SearchStats| {
        let (ra, rb) = (uf.find(a), uf.find(b));
        if ra == rb {
            return true;
        }
        let key = (ra.min(rb), ra.max(rb));
        if failures.iter().filter(|k| **k == key).count() >= 2 {
            return false;
        }
        stats.walks += 1;
        if walk_links(problem, pts[a], pts[b], rank, nullity, cfg)
            || walk_links(problem, pts[b], pts[a], rank, nullity, cfg)
        {
            uf.union(a, b);
            true
        } else {
            failures.push(key);
            false
        }
    };
    for &(_, a, b) in &edges {
        try_link(a, b, &mut uf, &mut failures, stats);
    }
    // remaining points: attach through the nearest representatives
    for i in 0..n {
        if reps.iter().any(|&r| uf.find(r) == uf.find(i)) {
            continue;
        }
        let mut by_dist: Vec<usize> = reps.clone();
        by_dist.sort_by(|&a, &b| (pts[i] - pts[a]).norm().total_cmp(&(pts[i] - pts[b]).norm()));
        let mut tried_sets: Vec<usize> = Vec::new();
        for r in by_dist {
            let set = uf.find(r);
            if tried_sets.contains(&set) {
                continue;
            }
            tried_sets.push(set);
            if try_link(i, r, &mut uf, &mut failures, stats) {
                break;
            }
        }
        if !reps.iter().any(|&r| uf.find(r) == uf.find(i)) {
            reps.push(i);
        }
    }
    let mut sets: Vec<(usize, Vec<usize>)> = Vec::new();
    for (k, &i) in group.iter().enumerate() {
        let root = uf.find(k);
        match sets.iter_mut().find(|(r, _)| *r == root) {
            Some((_, v)) => v.push(i),
            None => sets.push((root, vec![i])),
        }
    }
    sets.into_iter().map(|(_, v)| v).collect()
}

fn build_component(
    problem: &HeightProblem,
    classified: &[Classified],
    members: Vec<usize>,
    rank: usize,
    cfg: &SearchConfig,
) -> CriticalComponent {
    let rep_idx = members[0];
    let first = &classified[rep_idx];
    let nullity = first.sig.nullity;
    let points: Vec<DVector<f64>> = members.iter().map(|&i| classified[i].x.clone()).collect();
    let mut flags = Vec::new();
    if members.iter().any(|&i| classified[i].sig.ambiguous) {
        flags.push("ambiguous-hessian".into());
    }
    let (verified, pca_dim) = if nullity > 0 {
        let v = verify_null_directions(problem, &first.x, rank, nullity, cfg);
        if !v {
            flags.push("null-directions-unverified".into());
        }
        (v, local_pca_dim(&points, &first.x, nullity))
    } else {
        (true, None)
    };
    let betti_tag = match nullity {
        0 => BettiTag::Point,
        1 => BettiTag::Circle,
        k => cfg
            .tag_hints
            .iter()
            .find(|t| t.dim() == k)
            .cloned()
            .unwrap_or(BettiTag::Unidentified(k)),
    };
    CriticalComponent {
        representative: first.x.clone(),
        value: first.value,
        dim_estimate: nullity,
        hessian_nullity: nullity,
        morse_index: first.sig.index,
        betti_tag,
        null_directions_verified: verified,
        pca_dim,
        flags,
        points,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GenericCount {
    pub q: Vec<f64>,
    pub count: usize,
    /// Number of critical points of each Morse index.
    pub by_index: Vec<usize>,
    pub perturbations: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct GenericCountReport {
    pub counts: Vec<GenericCount>,
    pub skipped: Vec<String>,
}

/// Critical-point counts of height functions in random directions, skipping
/// directions that stay degenerate after five perturbations.
pub fn generic_morse_count(
    rep: &LinearRepresentation,
    p: &DVector<f64>,
    trials: usize,
    cfg: &SearchConfig,
) -> Result<GenericCountReport> {
    if trials == 0 {
        return Err(Error::InvalidArgument("generic count needs at least one trial".into()));
    }
    let rank = orbit_chart(rep, p)?.orbit_dim;
    let mut counts = Vec::new();
    let mut skipped = Vec::new();
    for t in 0..trials {
        let mut r = sampling::rng(derive_seed(cfg.seed, &format!("direction-{t}")));
        let mut q = sampling::unit_vector(&mut r, rep.dim());
        let mut done = false;
        for attempt in 0..=5 {
            let sub = SearchConfig {
                seed: derive_seed(cfg.seed, &format!("direction-{t}-{attempt}")),
                ..cfg.clone()
            };
            let inv = find_critical_set(rep, p, &HeightSpec::height(q.clone()), &sub)?;
            let degenerate = inv
                .components
                .iter()
                .any(|c| c.dim_estimate > 0 || c.flags.iter().any(|f| f == "ambiguous-hessian"));
            if !degenerate {
                let mut by_index = vec![0; rank + 1];
                for c in &inv.components {
                    by_index[c.morse_index] += 1;
                }
                counts.push(GenericCount {
                    q: q.iter().copied().collect(),
                    count: inv.components.len(),
                    by_index,
                    perturbations: attempt,
                });
                done = true;
                break;
            }
            q += sampling::unit_vector(&mut r, rep.dim()) * 1e-3;
            q.normalize_mut();
        }
        if !done {
            skipped.push(format!("direction {t}: degenerate after 5 perturbations"));
        }
    }
    Ok(GenericCountReport { counts, skipped })
}
