//! The case registry: a checked-in TOML manifest, one entry per
//! representation, naming its constructor, base point, certificate and
//! expected values.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const MANIFEST: &str = include_str!("cases.toml");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, PartialOrd, Ord)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    ObstructionFound,
    Consistent,
    CitedTheory,
    /// Verdict withheld: the computation disagreed with the registered
    /// values or the search reported problems.
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::ObstructionFound => "obstruction-found",
            Verdict::Consistent => "consistent",
            Verdict::CitedTheory => "cited-theory",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateKind {
    BettiMismatch,
    DisconnectedIsotropy,
    IsotropyB1,
    SphereCodim,
    TautConsistency,
    Reduction,
    CitedTheory,
    Slice,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseSpec {
    pub id: String,
    pub title: String,
    /// Constructor string for [`crate::repbuilder::build_rep`].
    pub rep: String,
    pub point: Option<String>,
    pub certificate: CertificateKind,
    /// Descriptor of the orbit through `point`, or of the homology it must
    /// have if the representation were taut.
    pub orbit: Option<String>,
    pub expected: Verdict,
    /// Whether the representation is a row of the classification table.
    pub table: bool,
    pub inventory: Option<InventorySpec>,
    pub consistency: Option<ConsistencySpec>,
    pub reduction: Option<ReductionSpec>,
    pub probe: Option<ProbeSpec>,
    pub sphere: Option<SphereSpec>,
    pub cited: Option<CitedSpec>,
    pub slice: Option<SliceSpec>,
    pub factorization: Option<FactorizationSpec>,
}

/// Expected critical set of a height function.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InventorySpec {
    /// Height direction literal; the base point when absent.
    pub height: Option<String>,
    /// `(dimension, number of components)` pairs.
    pub dims: Vec<(usize, usize)>,
    pub total: usize,
    pub starts: usize,
    #[serde(default)]
    pub tag_hints: Vec<String>,
    /// Registered values that are known not to be reproducible, with the
    /// reason; the certificate then reports the mismatch without withholding.
    pub known_deviation: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConsistencySpec {
    pub trials: usize,
    pub starts: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReductionSpec {
    pub vh: usize,
    pub nbar: usize,
    pub cohomogeneity: usize,
    #[serde(default = "default_trials")]
    pub cohomogeneity_trials: usize,
    pub weights: Option<WeightsSpec>,
    pub ratio: Option<RatioSpec>,
    #[serde(default)]
    pub discrete: Vec<DiscreteSpec>,
    pub reduced: ReducedSpec,
}

fn default_trials() -> usize {
    10
}

/// Integer weights of algebra elements (coefficient vectors) on planes.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightsSpec {
    pub generators: Vec<Vec<f64>>,
    pub planes: Vec<(String, String)>,
    /// `[plane][generator]`.
    pub expected: Vec<Vec<i64>>,
}

/// Speed ratios of one complement generator over planes, relative to the
/// first plane.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RatioSpec {
    pub generator: usize,
    pub planes: Vec<(String, String)>,
    pub expected: Vec<(i64, i64)>,
}

/// An element `e_{w_1} ⋯ e_{w_m}` of the spin group, checked against `V^H`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiscreteSpec {
    pub name: String,
    pub word: Vec<usize>,
    /// Summands whose intersection with `V^H` carries the determinant.
    pub summands: Vec<usize>,
    pub det: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReducedMode {
    BettiMismatch,
    TautConsistency,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReducedSpec {
    pub mode: ReducedMode,
    /// Explicit model of the reduced action; the computed compression
    /// otherwise.
    pub model: Option<String>,
    pub point: Option<String>,
    pub inventory: Option<InventorySpec>,
    /// Betti sum the orbit would need if taut.
    pub bound: Option<String>,
    /// Lower bound factor for the critical Betti sum (components of `N̄`).
    #[serde(default = "one")]
    pub multiplier: usize,
    /// Descriptor of the reduced orbit, for consistency checks.
    pub orbit: Option<String>,
    pub consistency: Option<ConsistencySpec>,
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeSpec {
    /// Point literal with `v₁` in one summand and zeros elsewhere.
    pub v1: String,
    /// Summand indices in which `v₂` is sampled.
    pub v2_summands: Vec<usize>,
    pub samples: usize,
    #[serde(default)]
    pub candidates: Vec<CandidateSpec>,
    /// Expected dimension of the isotropy algebra at `v₁`.
    pub isotropy_dim: usize,
    /// For the `b₁` variant: upper bound on `b₁` of a principal orbit.
    pub b1_bound: Option<usize>,
    pub b1_reason: Option<String>,
}

/// A discrete isotropy candidate: a sign pattern per summand (`+`/`-`), or a
/// Clifford word.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CandidateSpec {
    pub name: String,
    pub signs: Option<Vec<String>>,
    pub word: Option<Vec<usize>>,
    /// Take `v₁` inside the fixed space of this candidate, by projection.
    #[serde(default)]
    pub project_v1: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SphereSpec {
    pub span: usize,
    pub orbit_dim: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CitedSpec {
    pub citation: String,
    pub isotropy_dim: Option<usize>,
    pub orbit_dim: Option<usize>,
    pub span: Option<usize>,
    pub orbit_total: Option<usize>,
    /// Dimensions of the summands, checked against the built representation.
    #[serde(default)]
    pub summand_dims: Vec<usize>,
    pub defers_to: Option<String>,
}

/// Isotropy algebra at `point` and its action on the normal space (or on the
/// listed summands), followed by deferral to a registered case.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SliceSpec {
    pub isotropy_dim: usize,
    /// Dimension of the space the isotropy acts on.
    pub space_dim: usize,
    /// Dimension of its fixed vectors.
    pub trivial_dim: usize,
    /// Summand indices; the normal space of the orbit when empty.
    #[serde(default)]
    pub on_summands: Vec<usize>,
    pub defers_to: String,
    pub reason: String,
}

/// `p(G(v₁, v₂)) = p(G v₁) p(G_{v₁} v₂)` for a taut two-summand case.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorizationSpec {
    pub first: String,
    pub second: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Registry {
    #[serde(rename = "case")]
    pub cases: Vec<CaseSpec>,
}

impl Registry {
    pub fn load() -> Result<Self> {
        Self::parse(MANIFEST)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let reg: Registry = toml::from_str(text).map_err(|e| Error::Parse(format!("case registry: {e}")))?;
        let mut ids: Vec<&str> = reg.cases.iter().map(|c| c.id.as_str()).collect();
        ids.sort_unstable();
        if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Parse(format!("duplicate case id `{}`", w[0])));
        }
        for c in &reg.cases {
            for target in c.slice.iter().map(|s| &s.defers_to).chain(c.cited.iter().flat_map(|s| &s.defers_to)) {
                if !reg.cases.iter().any(|o| &o.id == target) {
                    return Err(Error::Parse(format!("case `{}` defers to unknown case `{target}`", c.id)));
                }
            }
        }
        Ok(reg)
    }

    pub fn get(&self, id: &str) -> Result<&CaseSpec> {
        self.cases
            .iter()
            .find(|c| c.id == id)
            .ok_or_else(|| Error::UnknownCase(id.to_string()))
    }

    pub fn ids(&self) -> Vec<&str> {
        self.cases.iter().map(|c| c.id.as_str()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_loads() {
        let reg = Registry::load().unwrap();
        assert!(reg.cases.len() >= 30);
        assert!(reg.get("lemma31a").is_ok());
        assert!(matches!(reg.get("nope"), Err(Error::UnknownCase(_))));
    }

    #[test]
    fn table_rows_expect_consistency() {
        let reg = Registry::load().unwrap();
        for c in &reg.cases {
            if c.table {
                assert_eq!(c.expected, Verdict::Consistent, "{}", c.id);
            } else if c.expected == Verdict::Consistent {
                // only non-simple groups may be taut outside the table
                assert!(c.rep.starts_with("so4"), "{}", c.id);
            }
        }
    }

    #[test]
    fn duplicate_ids_are_rejected() {
        let one = r#"
[[case]]
id = "a"
title = "t"
rep = "so3: R3"
certificate = "slice"
expected = "consistent"
table = false
"#;
        let text = format!("{one}{one}");
        assert!(Registry::parse(&text).is_err());
    }
}
