//! Basis-orbit expansivity diagnostic, mixing check and the hierarchy audit.

use serde::Serialize;

use crate::error::Result;
use crate::numerics::LogMagnitude;
use crate::shifts::ShiftOperator;

use super::average::{avg_expansive, avg_pos_expansive, branch_series, BranchSpec, Side};
use super::config::HorizonConfig;
use super::grid::OrbitGrid;
use super::uniform::{unif_expansive, unif_pos_expansive, UeProperty};
use super::verdict::{all_crossed, null_crossings, sup_crossings, Branch, Crossing, LevelEvidence, Verdict, VerdictKind, LOG_TOL};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BasisOrbitStatus {
    pub j0: i64,
    /// Smallest level whose orbit sup crosses every threshold.
    pub k: Option<u32>,
    pub crossings: Vec<Crossing>,
    pub bound: Option<LogMagnitude>,
    pub horizon: u64,
}

fn basis_status(op: &ShiftOperator, grid: &OrbitGrid, j0: i64, cfg: &HorizonConfig, grid_log2: &[f64]) -> Result<BasisOrbitStatus> {
    let two_sided = op.is_bilateral();
    let mut out = BasisOrbitStatus { j0, k: None, crossings: Vec::new(), bound: None, horizon: cfg.n_max };
    for k in 1..=cfg.k_max {
        // running sup over |n| <= m, both directions merged
        let mut sups = Vec::with_capacity(cfg.n_max as usize + 1);
        let mut fwd = Vec::new();
        let mut bwd = Vec::new();
        let mut best = grid.orbit_log2(j0, 0, k).unwrap_or(f64::NEG_INFINITY);
        sups.push(best);
        for m in 1..=cfg.n_max as i64 {
            let Some(a) = grid.orbit_log2(j0, m, k) else { break };
            fwd.push(a);
            best = best.max(a);
            if two_sided {
                let Some(b) = grid.orbit_log2(j0, -m, k) else {
                    fwd.pop();
                    break;
                };
                bwd.push(b);
                best = best.max(b);
            }
            sups.push(best);
        }
        let horizon = (sups.len() - 1) as u64;
        out.horizon = out.horizon.min(horizon);
        let c = sup_crossings(&sups[1..], &cfg.m_grid, grid_log2);
        if !c.is_empty() && all_crossed(&c) {
            out.k = Some(k);
            out.crossings = c;
            return Ok(out);
        }
        if k == cfg.k_max && horizon == cfg.n_max {
            out.bound = orbit_bound(op, j0, k, &sups, &fwd, &bwd, cfg.n_max)?;
        }
    }
    Ok(out)
}

fn orbit_bound(op: &ShiftOperator, j0: i64, k: u32, sups: &[f64], fwd: &[f64], bwd: &[f64], n: u64) -> Result<Option<LogMagnitude>> {
    if op.tail_attestation().is_none() {
        return Ok(None);
    }
    let bound = *sups.last().expect("nonempty");
    for side in [fwd, bwd] {
        if side.is_empty() {
            continue;
        }
        let q = side.len() * 3 / 4;
        if side[q..].windows(2).any(|p| p[1] > p[0] + LOG_TOL) {
            return Ok(None);
        }
    }
    let n = n as i64;
    for f in [2i64, 4, 8, 16, 32, 64, 128, 256] {
        let mut steps = vec![f * n];
        if op.is_bilateral() {
            steps.push(-f * n);
        }
        for s in steps {
            if op.basis_orbit_log(j0, s, k)?.log2() > bound + LOG_TOL {
                return Ok(None);
            }
        }
    }
    Ok(Some(LogMagnitude::from_log2(bound)))
}

/// Per-index detail behind [`expansive_basis_diagnostic`].
pub fn basis_orbit_statuses(op: &ShiftOperator, cfg: &HorizonConfig) -> Result<Vec<BasisOrbitStatus>> {
    cfg.validate()?;
    let radius = cfg.w.saturating_add((cfg.n_max as i64 + 2).saturating_mul(op.stride as i64));
    let grid = OrbitGrid::build(op, radius, cfg.k_max)?;
    let grid_log2 = cfg.grid_log2();
    let idx: Vec<i64> = (-cfg.w..=cfg.w).filter(|&j| op.index_set().contains(j) && grid.contains(j)).collect();
    crate::par_map(&idx, |&j| basis_status(op, &grid, j, cfg, &grid_log2)).into_iter().collect()
}

/// Does every basis orbit `(‖T^n e_j‖_k)_{|n| ≤ N}` with `|j| ≤ W` cross all thresholds for some `k`?
///
/// A diagnostic only: condition (E) quantifies over all vectors, not just the basis.
pub fn expansive_basis_diagnostic(op: &ShiftOperator, cfg: &HorizonConfig) -> Result<Verdict> {
    let st = basis_orbit_statuses(op, cfg)?;
    let mut v = Verdict::new("E-diag", cfg);
    v.attestation = op.tail_attestation();
    let certified = st.iter().filter(|s| s.k.is_some()).count();
    let bounded = st.iter().filter(|s| s.bound.is_some()).count();
    v.notes.push(format!(
        "DIAGNOSTIC on basis vectors only: {certified} of {} orbits certified unbounded, {bounded} bounded",
        st.len()
    ));
    if !st.is_empty() && certified == st.len() {
        v.kind = VerdictKind::CertifiedUnbounded;
        v.k = st.iter().filter_map(|s| s.k).max();
        // slowest index: latest crossing of the top threshold
        let worst = st.iter().max_by_key(|s| s.crossings.last().and_then(|c| c.first_n)).expect("nonempty");
        v.crossings = worst.crossings.clone();
    } else if !st.is_empty() && bounded == st.len() {
        v.kind = VerdictKind::BoundedWitness;
        v.bound = st.iter().filter_map(|s| s.bound).fold(None, |m: Option<LogMagnitude>, b| match m {
            Some(x) if x >= b => Some(x),
            _ => Some(b),
        });
    } else if let Some(s) = st.iter().find(|s| s.k.is_none()) {
        v.notes.push(format!("first uncertified index j = {}", s.j0));
    }
    if let Some(h) = st.iter().map(|s| s.horizon).min() {
        if h < cfg.n_max {
            v.notes.push(format!("weights only tabulated: horizon reduced to n = {h}"));
        }
    }
    Ok(v)
}

/// Do both `‖T^j e_0‖_k` and `‖T^{-j} e_0‖_k` tend to 0 for every `k`?
pub fn mixing_check(op: &ShiftOperator, cfg: &HorizonConfig) -> Result<Verdict> {
    cfg.validate()?;
    let mut v = Verdict::new("mixing", cfg);
    v.attestation = op.tail_attestation();
    if !op.is_bilateral() {
        v.notes.push("mixing check covers bilateral shifts only".into());
        return Ok(v);
    }
    let radius = (cfg.n_max as i64 + 2).saturating_mul(op.stride as i64);
    let grid = OrbitGrid::build(op, radius, cfg.k_max)?;
    let grid_log2 = cfg.grid_log2();
    let mut all_null = true;
    for k in 1..=cfg.k_max {
        for (label, sign) in [("left", 1i64), ("right", -1i64)] {
            let s = branch_series(&grid, BranchSpec { base: 0, sign, offset: 1 }, k, cfg.n_max);
            let c = null_crossings(&s.terms, 1, &cfg.m_grid, &grid_log2);
            let certified = !s.terms.is_empty() && all_crossed(&c);
            if !certified {
                all_null = false;
                let q = s.terms.len() * 3 / 4;
                if s.terms[q..].iter().any(|&t| t >= -LOG_TOL) {
                    v.notes.push(format!("k={k}: {label} terms return to values >= 1 near the horizon"));
                }
            }
            v.evidence.push(LevelEvidence {
                label: label.into(),
                k,
                l: None,
                certified,
                crossings: c,
                horizon: s.terms.len() as u64,
                last_log2: s.terms.last().copied(),
                bound: None,
            });
        }
    }
    v.branch = Some(if all_null { Branch::Both } else { Branch::None });
    if all_null {
        if v.attestation.is_some() {
            v.kind = VerdictKind::CertifiedNull;
            v.crossings = v.evidence[0].crossings.clone();
        } else {
            v.notes.push("both sequences look null on the window, but the tails carry no attestation".into());
        }
    }
    Ok(v)
}

#[derive(Clone, Debug, Serialize)]
pub struct HierarchyReport {
    pub ue_property: Option<UeProperty>,
    pub ue: Verdict,
    pub ae: Verdict,
    pub ediag: Verdict,
    pub mixing: Option<Verdict>,
    pub violations: Vec<String>,
}

/// Runs UE (UPE on `N`), AE (APE on `N`), the basis diagnostic and the mixing check,
/// and lists every broken implication UE ⇒ AE ⇒ E-diag and AE ⇒ not mixing.
pub fn hierarchy_audit(op: &ShiftOperator, cfg: &HorizonConfig) -> Result<HierarchyReport> {
    let (ue_property, ue, ae, mixing) = if op.is_bilateral() {
        let (p, ue) = unif_expansive(op, cfg)?;
        (p, ue, avg_expansive(op, cfg)?, Some(mixing_check(op, cfg)?))
    } else {
        (None, unif_pos_expansive(op, cfg)?, avg_pos_expansive(op, Side::Op, cfg)?, None)
    };
    let ediag = expansive_basis_diagnostic(op, cfg)?;
    let mut violations = Vec::new();
    if ue.is_certified() && !ae.is_certified() {
        violations.push(format!("{} certified but {} is {}", ue.criterion, ae.criterion, ae.kind));
    }
    if ae.is_certified() && !ediag.is_certified() {
        violations.push(format!("{} certified but E-diag is {}", ae.criterion, ediag.kind));
    }
    if let Some(m) = &mixing {
        if ae.is_certified() && m.kind == VerdictKind::CertifiedNull {
            violations.push("AE certified together with both mixing sequences null".into());
        }
    }
    Ok(HierarchyReport { ue_property, ue, ae, ediag, mixing, violations })
}
