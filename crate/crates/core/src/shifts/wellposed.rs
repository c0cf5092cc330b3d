//! Window checks for continuity and invertibility of weighted shifts on Köthe spaces.

use serde::Serialize;

use crate::criteria::HorizonConfig;
use crate::error::Result;
use crate::numerics::Exact;

use super::operator::{Direction, ShiftOperator};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessStatus {
    /// A level `ℓ` with a stable window sup and a tail attestation was found.
    Holds,
    /// The zero-pattern implication fails on the window; this is definitive.
    Fails,
    /// No level in `[k, ℓ_max]` gave a stable, attested window sup.
    Inconclusive,
    /// Unilateral shifts are never invertible.
    StructurallyNonInvertible,
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessReport {
    pub condition: &'static str,
    pub status: WitnessStatus,
    pub k: u32,
    pub l: Option<u32>,
    /// Window supremum of the ratio at the reported level.
    pub window_sup: Option<Exact>,
    pub attestation: Option<String>,
    /// First index where the zero pattern fails.
    pub violation: Option<i64>,
    pub notes: Vec<String>,
}

impl WitnessReport {
    pub fn holds(&self) -> bool {
        self.status == WitnessStatus::Holds
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Condition {
    Defined,
    Invertible,
}

/// Sup of the condition ratio over `j ∈ [lo, hi]`, or the first zero-pattern violation.
fn window_sup(op: &ShiftOperator, cond: Condition, k: u32, l: u32, lo: i64, hi: i64) -> Result<Result<Exact, i64>> {
    let a = &op.space.matrix;
    let mut sup: Option<Exact> = None;
    for j in lo..=hi {
        let (num, den) = match (op.direction, cond) {
            (Direction::Backward, Condition::Defined) => (a.entry(j, k)? * op.weights.value(j + 1)?, a.entry(j + 1, l)?),
            (Direction::Backward, Condition::Invertible) => (a.entry(j + 1, k)?, a.entry(j, l)? * op.weights.value(j + 1)?),
            (Direction::Forward, Condition::Defined) => (a.entry(j + 1, k)? * op.weights.value(j)?, a.entry(j, l)?),
            (Direction::Forward, Condition::Invertible) => (a.entry(j, k)?, a.entry(j + 1, l)? * op.weights.value(j)?),
        };
        let r = if den.is_zero() {
            if !num.is_zero() {
                return Ok(Err(j));
            }
            Exact::one()
        } else {
            num.checked_div(&den)?
        };
        if sup.as_ref().map_or(true, |s| &r > s) {
            sup = Some(r);
        }
    }
    Ok(Ok(sup.unwrap_or_else(Exact::zero)))
}

fn window_bounds(op: &ShiftOperator, radius: i64) -> (i64, i64) {
    let mut lo = -radius;
    let mut hi = radius;
    if let Some(l) = op.index_set().lower() {
        lo = lo.max(l);
    }
    let (dl, dh) = op.domain();
    // both j and j+1 enter each ratio
    if let Some(d) = dl {
        lo = lo.max(d);
    }
    if let Some(d) = dh {
        hi = hi.min(d - 1);
    }
    (lo, hi)
}

fn search(op: &ShiftOperator, cond: Condition, k: u32, cfg: &HorizonConfig) -> Result<WitnessReport> {
    let name = match (op.direction, cond) {
        (Direction::Backward, Condition::Defined) => "Bw-Defined",
        (Direction::Backward, Condition::Invertible) => "Bw-Invertible",
        (Direction::Forward, Condition::Defined) => "Fw-Defined",
        (Direction::Forward, Condition::Invertible) => "Fw-Invertible",
    };
    let mut report = WitnessReport {
        condition: name,
        status: WitnessStatus::Inconclusive,
        k,
        l: None,
        window_sup: None,
        attestation: op.tail_attestation(),
        violation: None,
        notes: Vec::new(),
    };
    if op.stride != 1 {
        report.notes.push(format!("checked on the base shift; T^{} inherits the property", op.stride));
    }
    let (lo, hi) = window_bounds(op, cfg.w);
    let (ilo, ihi) = window_bounds(op, (cfg.w / 2).max(1));
    if lo > hi {
        report.notes.push("empty window".into());
        return Ok(report);
    }
    let l_max = cfg.l_max.max(k);
    let mut first_violation = None;
    let mut unstable = Vec::new();
    for l in k..=l_max {
        let full = match window_sup(op, cond, k, l, lo, hi)? {
            Ok(s) => s,
            Err(j) => {
                first_violation.get_or_insert((l, j));
                continue;
            }
        };
        let inner = match window_sup(op, cond, k, l, ilo, ihi)? {
            Ok(s) => s,
            Err(_) => continue,
        };
        if full == inner {
            report.l = Some(l);
            report.window_sup = Some(full);
            report.status = if report.attestation.is_some() { WitnessStatus::Holds } else { WitnessStatus::Inconclusive };
            if report.attestation.is_none() {
                report.notes.push("window sup is stable but the tails carry no attestation".into());
            }
            return Ok(report);
        }
        unstable.push((l, full));
    }
    if let Some((l, j)) = first_violation {
        if unstable.is_empty() {
            report.status = WitnessStatus::Fails;
            report.l = Some(l);
            report.violation = Some(j);
            report.notes.push(format!("zero pattern fails at j = {j} for every l in [{k}, {l_max}]"));
            return Ok(report);
        }
        report.notes.push(format!("zero pattern fails at j = {j} for l = {l}"));
    }
    if let Some((l, s)) = unstable.last() {
        report.l = Some(*l);
        report.window_sup = Some(s.clone());
        report.notes.push(format!(
            "window sup keeps growing between radius {} and {} for every l <= {l_max}; tends to failure",
            cfg.w / 2,
            cfg.w
        ));
    }
    Ok(report)
}

/// Window check of the continuity condition for `op` at level `k`.
pub fn check_operator_wellposed(op: &ShiftOperator, k: u32, cfg: &HorizonConfig) -> Result<WitnessReport> {
    search(op, Condition::Defined, k, cfg)
}

/// Window check of the invertibility condition for `op` at level `k`.
pub fn check_invertible(op: &ShiftOperator, k: u32, cfg: &HorizonConfig) -> Result<WitnessReport> {
    if !op.is_bilateral() {
        return Ok(WitnessReport {
            condition: match op.direction {
                Direction::Backward => "Bw-Invertible",
                Direction::Forward => "Fw-Invertible",
            },
            status: WitnessStatus::StructurallyNonInvertible,
            k,
            l: None,
            window_sup: None,
            attestation: None,
            violation: None,
            notes: vec!["unilateral shift: not surjective / not injective".into()],
        });
    }
    search(op, Condition::Invertible, k, cfg)
}
