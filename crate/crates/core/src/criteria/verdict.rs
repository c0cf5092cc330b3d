use std::fmt;

use serde::Serialize;

use crate::numerics::{Exact, LogMagnitude};

use super::config::HorizonConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum VerdictKind {
    CertifiedUnbounded,
    BoundedWitness,
    Inconclusive,
    /// Every threshold `1/M` was undercut for good within the horizon.
    CertifiedNull,
}

impl fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            VerdictKind::CertifiedUnbounded => "CertifiedUnbounded",
            VerdictKind::BoundedWitness => "BoundedWitness",
            VerdictKind::Inconclusive => "Inconclusive",
            VerdictKind::CertifiedNull => "CertifiedNull",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Left,
    Right,
    Both,
    None,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Branch::Left => "left",
            Branch::Right => "right",
            Branch::Both => "both",
            Branch::None => "none",
        };
        f.write_str(s)
    }
}

/// First step at which a threshold is reached (and, for limit-type checks, kept).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Crossing {
    #[serde(rename = "M")]
    pub m: Exact,
    pub first_n: Option<u64>,
}

/// Outcome for a single aggregate at a fixed level (or level pair).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LevelEvidence {
    pub label: String,
    pub k: u32,
    pub l: Option<u32>,
    pub certified: bool,
    pub crossings: Vec<Crossing>,
    /// Horizon actually reached (smaller than `n_max` when weights are only tabulated).
    pub horizon: u64,
    /// `log2` of the final aggregate value.
    pub last_log2: Option<f64>,
    pub bound: Option<LogMagnitude>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub criterion: String,
    pub property: Option<String>,
    pub kind: VerdictKind,
    pub k: Option<u32>,
    pub l: Option<u32>,
    pub branch: Option<Branch>,
    pub crossings: Vec<Crossing>,
    pub bound: Option<LogMagnitude>,
    pub attestation: Option<String>,
    pub upe: Option<bool>,
    pub evidence: Vec<LevelEvidence>,
    pub notes: Vec<String>,
    pub config: HorizonConfig,
}

impl Verdict {
    pub fn new(criterion: impl Into<String>, cfg: &HorizonConfig) -> Self {
        Verdict {
            criterion: criterion.into(),
            property: None,
            kind: VerdictKind::Inconclusive,
            k: None,
            l: None,
            branch: None,
            crossings: Vec::new(),
            bound: None,
            attestation: None,
            upe: None,
            evidence: Vec::new(),
            notes: Vec::new(),
            config: cfg.clone(),
        }
    }

    pub fn is_certified(&self) -> bool {
        self.kind == VerdictKind::CertifiedUnbounded
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("verdict serializes")
    }
}

/// Per-`n` values of an aggregate, stored as `log2` (`-inf` for zero, `+inf` for an empty infimum).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriterionTrace {
    pub label: String,
    pub first_n: u64,
    pub log2_values: Vec<f64>,
}

impl CriterionTrace {
    pub fn value_at(&self, n: u64) -> Option<f64> {
        let i = n.checked_sub(self.first_n)? as usize;
        self.log2_values.get(i).copied()
    }

    pub fn values(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.log2_values.iter().enumerate().map(move |(i, v)| (self.first_n + i as u64, *v))
    }
}

// comparisons of log2 values tolerate rounding of long sums
pub(crate) const LOG_TOL: f64 = 1e-9;

pub(crate) fn at_least(v: f64, m: f64) -> bool {
    v >= m - LOG_TOL
}

/// Sup-type schedule: first `n` (1-based) with `g(n) >= M`.
pub(crate) fn sup_crossings(g: &[f64], grid: &[Exact], grid_log2: &[f64]) -> Vec<Crossing> {
    let mut out = Vec::with_capacity(grid.len());
    let mut i = 0usize;
    for (m, &lm) in grid.iter().zip(grid_log2) {
        while i < g.len() && !(g[i] >= lm - LOG_TOL) {
            i += 1;
        }
        out.push(Crossing { m: m.clone(), first_n: (i < g.len()).then_some(i as u64 + 1) });
    }
    out
}

/// Limit-type schedule: smallest `n_M` with `v(n) >= M` for every `n` in `[n_M, len]`.
pub(crate) fn lim_crossings(v: &[f64], first_n: u64, grid: &[Exact], grid_log2: &[f64]) -> Vec<Crossing> {
    let mut out: Vec<Crossing> = grid.iter().map(|m| Crossing { m: m.clone(), first_n: None }).collect();
    // walk down from the horizon; the threshold index only moves down
    let mut idx = grid_log2.len();
    let mut n = v.len();
    while n > 0 && idx > 0 {
        let x = v[n - 1];
        while idx > 0 && !at_least(x, grid_log2[idx - 1]) {
            idx -= 1;
        }
        for c in out.iter_mut().take(idx) {
            c.first_n = Some(first_n + n as u64 - 1);
        }
        n -= 1;
    }
    out
}

/// Null schedule: smallest `n_M` with `v(n) <= 1/M` on `[n_M, len]`.
pub(crate) fn null_crossings(v: &[f64], first_n: u64, grid: &[Exact], grid_log2: &[f64]) -> Vec<Crossing> {
    let neg: Vec<f64> = v.iter().map(|x| -x).collect();
    let mut c = lim_crossings(&neg, first_n, grid, grid_log2);
    for x in c.iter_mut() {
        x.m = x.m.recip().expect("thresholds are positive");
    }
    c
}

pub(crate) fn all_crossed(c: &[Crossing]) -> bool {
    c.iter().all(|x| x.first_n.is_some())
}
