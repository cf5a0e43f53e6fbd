//! Critical sets of height functions on orbits: multi-start search over the
//! group, Morse–Bott classification and generic critical-point counts.

mod problem;
mod search;

pub use problem::{signature_of, HeightKind, HeightProblem, HeightSpec, Signature, SolveOptions, Solved};
pub use search::{
    criticality_residual, find_critical_set, generic_morse_count, morse_index, GenericCount,
    GenericCountReport, SearchConfig,
};

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

/// Topology label of a critical component, with its `Z₂` Betti sum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BettiTag {
    Point,
    Circle,
    /// `S^k`
    Sphere(usize),
    Cp2,
    /// A closed connected manifold of the given dimension; counted with the
    /// lower bound `b₀ + b_top = 2`.
    Unidentified(usize),
}

impl BettiTag {
    pub fn betti_sum(&self) -> usize {
        match self {
            BettiTag::Point => 1,
            BettiTag::Circle | BettiTag::Sphere(_) | BettiTag::Unidentified(_) => 2,
            BettiTag::Cp2 => 3,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            BettiTag::Point => 0,
            BettiTag::Circle => 1,
            BettiTag::Sphere(k) => *k,
            BettiTag::Cp2 => 4,
            BettiTag::Unidentified(k) => *k,
        }
    }

    pub fn label(&self) -> String {
        match self {
            BettiTag::Point => "point".into(),
            BettiTag::Circle => "circle".into(),
            BettiTag::Sphere(k) => format!("sphere-{k}"),
            BettiTag::Cp2 => "cp2".into(),
            BettiTag::Unidentified(k) => format!("unidentified-{k}"),
        }
    }

    pub fn parse(s: &str) -> Option<BettiTag> {
        match s {
            "point" => Some(BettiTag::Point),
            "circle" => Some(BettiTag::Circle),
            "cp2" => Some(BettiTag::Cp2),
            _ => {
                if let Some(k) = s.strip_prefix("sphere-") {
                    k.parse().ok().map(BettiTag::Sphere)
                } else if let Some(k) = s.strip_prefix("unidentified-") {
                    k.parse().ok().map(BettiTag::Unidentified)
                } else {
                    None
                }
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct CriticalComponent {
    pub points: Vec<DVector<f64>>,
    pub representative: DVector<f64>,
    pub value: f64,
    pub dim_estimate: usize,
    pub hessian_nullity: usize,
    pub morse_index: usize,
    pub betti_tag: BettiTag,
    /// Null directions were followed and led to nearby critical points.
    pub null_directions_verified: bool,
    /// Local principal-component dimension of the sampled points, when there
    /// are enough samples near the representative.
    pub pca_dim: Option<usize>,
    pub flags: Vec<String>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct SearchStats {
    pub starts: usize,
    pub converged: usize,
    pub deduped: usize,
    pub walks: usize,
    pub ambiguous_hessians: usize,
    /// Fewer than half of the starts converged.
    pub low_convergence: bool,
}

#[derive(Debug, Clone)]
pub struct CriticalInventory {
    pub components: Vec<CriticalComponent>,
    pub total_betti_sum: usize,
    pub stats: SearchStats,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComponentRecord {
    pub dim: usize,
    pub size: usize,
    pub index: usize,
    pub betti_tag: String,
    pub value: f64,
    pub representative: Vec<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub flags: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct InventoryRecord {
    pub components: Vec<ComponentRecord>,
    pub total_betti_sum: usize,
    pub stats: SearchStats,
}

impl CriticalInventory {
    /// `(dim, count)` pairs sorted by dimension.
    pub fn dimension_profile(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        let mut dims: Vec<usize> = self.components.iter().map(|c| c.dim_estimate).collect();
        dims.sort_unstable();
        for d in dims {
            match out.last_mut() {
                Some((dd, n)) if *dd == d => *n += 1,
                _ => out.push((d, 1)),
            }
        }
        out
    }

    pub fn count_of_dim(&self, dim: usize) -> usize {
        self.components.iter().filter(|c| c.dim_estimate == dim).count()
    }

    pub fn isolated_indices(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self
            .components
            .iter()
            .filter(|c| c.dim_estimate == 0)
            .map(|c| c.morse_index)
            .collect();
        v.sort_unstable();
        v
    }

    pub fn record(&self) -> InventoryRecord {
        InventoryRecord {
            components: self
                .components
                .iter()
                .map(|c| ComponentRecord {
                    dim: c.dim_estimate,
                    size: c.points.len(),
                    index: c.morse_index,
                    betti_tag: c.betti_tag.label(),
                    value: c.value,
                    representative: c.representative.iter().copied().collect(),
                    flags: c.flags.clone(),
                })
                .collect(),
            total_betti_sum: self.total_betti_sum,
            stats: self.stats.clone(),
        }
    }
}
