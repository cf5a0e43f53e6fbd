//! Running the whole registry and writing the results.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use super::certificates::{certify, RunOptions, TautnessCertificate};
use super::registry::{CaseSpec, Registry, Verdict};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub master_seed: u64,
    pub certificates: Vec<TautnessCertificate>,
}

fn deferral(case: &CaseSpec) -> Option<&str> {
    case.slice
        .as_ref()
        .map(|s| s.defers_to.as_str())
        .or_else(|| case.cited.as_ref().and_then(|c| c.defers_to.as_deref()))
}

/// Length of the deferral chain below each case.
fn depths(registry: &Registry) -> Result<BTreeMap<&str, usize>> {
    let mut out = BTreeMap::new();
    for c in &registry.cases {
        let mut depth = 0;
        let mut cur = c;
        while let Some(next) = deferral(cur) {
            depth += 1;
            if depth > registry.cases.len() {
                return Err(Error::Parse(format!("deferral cycle through `{}`", c.id)));
            }
            cur = registry.get(next)?;
        }
        out.insert(c.id.as_str(), depth);
    }
    Ok(out)
}

/// Certificates for the selected cases (all when `only` is empty), computed
/// in deferral order so that every deferred verdict is computed once.
pub fn run_all(registry: &Registry, only: &[String], opts: &RunOptions) -> Result<RunSummary> {
    let depth = depths(registry)?;
    let mut wanted: Vec<&CaseSpec> = if only.is_empty() {
        registry.cases.iter().collect()
    } else {
        only.iter().map(|id| registry.get(id)).collect::<Result<_>>()?
    };
    // pull in deferral targets
    let mut k = 0;
    while k < wanted.len() {
        if let Some(t) = deferral(wanted[k]) {
            if !wanted.iter().any(|c| c.id == t) {
                wanted.push(registry.get(t)?);
            }
        }
        k += 1;
    }
    let max_depth = wanted.iter().map(|c| depth[c.id.as_str()]).max().unwrap_or(0);
    let mut done: BTreeMap<String, TautnessCertificate> = BTreeMap::new();
    for level in 0..=max_depth {
        let batch: Vec<&CaseSpec> = wanted.iter().copied().filter(|c| depth[c.id.as_str()] == level).collect();
        let resolve = |id: &str| {
            done.get(id)
                .cloned()
                .ok_or_else(|| Error::Internal(format!("deferred case `{id}` has not been run")))
        };
        let certs = batch
            .par_iter()
            .map(|c| certify(c, opts, &resolve))
            .collect::<Result<Vec<_>>>()?;
        for cert in certs {
            done.insert(cert.case.clone(), cert);
        }
    }
    let order: Vec<&str> = if only.is_empty() {
        registry.ids()
    } else {
        only.iter().map(String::as_str).collect()
    };
    let certificates = order.iter().filter_map(|id| done.remove(*id)).collect();
    Ok(RunSummary {
        master_seed: opts.master_seed,
        certificates,
    })
}

impl RunSummary {
    /// Sets every runtime to zero; the remaining fields are a function of the
    /// seed and the options.
    pub fn without_timings(mut self) -> Self {
        for c in &mut self.certificates {
            c.runtime_ms = 0;
        }
        self
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("case,verdict,expected,matches,table_row,runtime_ms,seed\n");
        for c in &self.certificates {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{}",
                c.case,
                c.verdict.as_str(),
                c.expected.verdict.as_str(),
                c.matches,
                c.expected.table_row,
                c.runtime_ms,
                c.seed
            );
        }
        s
    }

    /// 0 when every verdict matches, 3 when some are inconclusive, 2 for any
    /// other disagreement.
    pub fn exit_code(&self) -> i32 {
        if self.certificates.iter().all(|c| c.matches) {
            0
        } else if self
            .certificates
            .iter()
            .filter(|c| !c.matches)
            .all(|c| c.verdict == Verdict::Inconclusive)
        {
            3
        } else {
            2
        }
    }
}
