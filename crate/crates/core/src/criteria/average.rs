//! Cesàro-average criteria: AE for bilateral shifts and APE for either side.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{LogAccumulator, LogMagnitude};
use crate::shifts::{Direction, ShiftOperator};

use super::config::HorizonConfig;
use super::grid::OrbitGrid;
use super::verdict::{all_crossed, sup_crossings, Branch, Crossing, CriterionTrace, LevelEvidence, Verdict, VerdictKind, LOG_TOL};

/// Which orbit an APE check follows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// Orbit under `T`.
    Op,
    /// Orbit under `T^{-1}`.
    Inverse,
}

impl std::str::FromStr for Side {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "op" => Ok(Side::Op),
            "inverse" | "inv" => Ok(Side::Inverse),
            _ => Err(Error::Parse(format!("side must be op or inverse, got {s:?}"))),
        }
    }
}

/// One Cesàro branch: terms `‖T^{±i} e_base‖_k` and their running means, in `log2`.
pub(crate) struct BranchSeries {
    pub terms: Vec<f64>,
    pub means: Vec<f64>,
}

/// Steps used for term `i` (1-based): `sign·(i - 1 + offset)`.
#[derive(Clone, Copy)]
pub(crate) struct BranchSpec {
    pub base: i64,
    pub sign: i64,
    pub offset: i64,
}

pub(crate) fn branch_series(grid: &OrbitGrid, spec: BranchSpec, k: u32, n_max: u64) -> BranchSeries {
    let mut terms = Vec::with_capacity(n_max as usize);
    let mut means = Vec::with_capacity(n_max as usize);
    let mut acc = LogAccumulator::new();
    for i in 1..=n_max as i64 {
        let Some(t) = grid.orbit_log2(spec.base, spec.sign * (i - 1 + spec.offset), k) else { break };
        terms.push(t);
        acc.push(LogMagnitude::from_log2(t));
        means.push(acc.log2_total() - (i as f64).log2());
    }
    BranchSeries { terms, means }
}

/// Per-term bound valid for every `n`: window max, nonincreasing last quarter, far probes.
pub(crate) fn term_bound(op: &ShiftOperator, spec: BranchSpec, k: u32, terms: &[f64], full: bool) -> Result<Option<f64>> {
    if !full || terms.is_empty() || op.tail_attestation().is_none() {
        return Ok(None);
    }
    let bound = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let q = terms.len() * 3 / 4;
    if terms[q..].windows(2).any(|p| p[1] > p[0] + LOG_TOL) {
        return Ok(None);
    }
    let n = terms.len() as i64;
    for f in [2i64, 4, 8, 16, 32, 64, 128, 256] {
        let step = spec.sign * (f * n - 1 + spec.offset);
        let v = op.basis_orbit_log(spec.base, step, k)?.log2();
        if v > bound + LOG_TOL {
            return Ok(None);
        }
    }
    Ok(Some(bound))
}

struct BranchOutcome {
    evidence: LevelEvidence,
    bound: Option<f64>,
}

fn evaluate_branch(
    op: &ShiftOperator,
    grid: &OrbitGrid,
    label: &str,
    specs: &[BranchSpec],
    k: u32,
    cfg: &HorizonConfig,
    grid_log2: &[f64],
) -> Result<BranchOutcome> {
    let mut crossings: Option<Vec<Crossing>> = None;
    let mut horizon = cfg.n_max;
    let mut bound: Option<f64> = Some(f64::NEG_INFINITY);
    let mut last = None;
    for &spec in specs {
        let s = branch_series(grid, spec, k, cfg.n_max);
        horizon = horizon.min(s.terms.len() as u64);
        let c = sup_crossings(&s.means, &cfg.m_grid, grid_log2);
        crossings = Some(match crossings {
            None => c,
            // every residue must cross; keep the latest first crossing
            Some(prev) => prev
                .into_iter()
                .zip(c)
                .map(|(a, b)| Crossing { m: a.m, first_n: a.first_n.zip(b.first_n).map(|(x, y)| x.max(y)) })
                .collect(),
        });
        last = s.means.last().copied().or(last);
        let full = s.terms.len() as u64 == cfg.n_max;
        bound = match (bound, term_bound(op, spec, k, &s.terms, full)?) {
            (Some(a), Some(b)) => Some(a.max(b)),
            _ => None,
        };
    }
    let crossings = crossings.unwrap_or_default();
    Ok(BranchOutcome {
        evidence: LevelEvidence {
            label: label.to_string(),
            k,
            l: None,
            certified: !crossings.is_empty() && all_crossed(&crossings),
            crossings,
            horizon,
            last_log2: last,
            bound: bound.map(LogMagnitude::from_log2),
        },
        bound,
    })
}

fn grid_for(op: &ShiftOperator, cfg: &HorizonConfig, extra: i64) -> Result<OrbitGrid> {
    let radius = (cfg.n_max as i64 + 2).saturating_mul(op.stride as i64).saturating_add(extra);
    OrbitGrid::build(op, radius, cfg.k_max)
}

fn bilateral_specs(op: &ShiftOperator, sign: i64) -> Vec<BranchSpec> {
    (0..op.stride as i64).map(|r| BranchSpec { base: r, sign, offset: 1 }).collect()
}

fn note_truncation(v: &mut Verdict, evidence: &[LevelEvidence], n_max: u64) {
    if let Some(h) = evidence.iter().map(|e| e.horizon).min() {
        if h < n_max {
            v.notes.push(format!("weights only tabulated: horizon reduced to n = {h}"));
        }
    }
}

fn run_branches(op: &ShiftOperator, cfg: &HorizonConfig, criterion: &str, sides: &[Side]) -> Result<Verdict> {
    cfg.validate()?;
    let mut v = Verdict::new(criterion, cfg);
    v.attestation = op.tail_attestation();
    let grid = grid_for(op, cfg, 0)?;
    let grid_log2 = cfg.grid_log2();
    let jobs: Vec<(u32, Side)> = (1..=cfg.k_max).flat_map(|k| sides.iter().map(move |s| (k, *s))).collect();
    let outcomes = crate::par_map(&jobs, |&(k, side)| {
        let (label, specs) = match side {
            Side::Op => ("left", bilateral_specs(op, 1)),
            Side::Inverse => ("right", bilateral_specs(op, -1)),
        };
        evaluate_branch(op, &grid, label, &specs, k, cfg, &grid_log2)
    });
    let outcomes: Vec<BranchOutcome> = outcomes.into_iter().collect::<Result<_>>()?;
    finish(&mut v, &jobs, outcomes, cfg);
    Ok(v)
}

fn finish(v: &mut Verdict, jobs: &[(u32, Side)], outcomes: Vec<BranchOutcome>, cfg: &HorizonConfig) {
    let mut certified_k = None;
    for k in 1..=cfg.k_max {
        let hits: Vec<&BranchOutcome> =
            jobs.iter().zip(&outcomes).filter(|((kk, _), o)| *kk == k && o.evidence.certified).map(|(_, o)| o).collect();
        if hits.is_empty() {
            continue;
        }
        let left = hits.iter().any(|o| o.evidence.label == "left");
        let right = hits.iter().any(|o| o.evidence.label == "right");
        v.branch = Some(match (left, right) {
            (true, true) => Branch::Both,
            (true, false) => Branch::Left,
            _ => Branch::Right,
        });
        v.crossings = hits[0].evidence.crossings.clone();
        certified_k = Some(k);
        break;
    }
    if let Some(k) = certified_k {
        v.kind = VerdictKind::CertifiedUnbounded;
        v.k = Some(k);
    } else if !outcomes.is_empty() && outcomes.iter().all(|o| o.bound.is_some()) {
        v.kind = VerdictKind::BoundedWitness;
        v.branch = Some(Branch::None);
        let b = outcomes.iter().filter_map(|o| o.bound).fold(f64::NEG_INFINITY, f64::max);
        v.bound = Some(LogMagnitude::from_log2(b));
    } else {
        v.branch = Some(Branch::None);
        if v.attestation.is_none() {
            v.notes.push("no tail attestation: the bounded side cannot be witnessed".into());
        }
    }
    let evidence: Vec<LevelEvidence> = outcomes.into_iter().map(|o| o.evidence).collect();
    note_truncation(v, &evidence, cfg.n_max);
    v.evidence = evidence;
}

fn require(op: &ShiftOperator, dir: Direction) -> Result<()> {
    if op.direction != dir {
        return Err(Error::InvalidSpec(format!("expected a {dir} shift, got {}", op.direction)));
    }
    Ok(())
}

fn average_expansive(op: &ShiftOperator, cfg: &HorizonConfig) -> Result<Verdict> {
    if !op.is_bilateral() {
        let mut v = Verdict::new("AE", cfg);
        v.notes.push("average expansivity needs an invertible operator; unilateral shifts are not".into());
        return Ok(v);
    }
    run_branches(op, cfg, "AE", &[Side::Op, Side::Inverse])
}

/// AE for `B_w`: left terms `‖B^j e_0‖_k`, right terms `‖B^{-j} e_0‖_k`.
pub fn avg_expansive_backward(op: &ShiftOperator, cfg: &HorizonConfig) -> Result<Verdict> {
    require(op, Direction::Backward)?;
    average_expansive(op, cfg)
}

/// AE for `F_w`: left terms `‖F^j e_0‖_k`, right terms `‖F^{-j} e_0‖_k`.
pub fn avg_expansive_forward(op: &ShiftOperator, cfg: &HorizonConfig) -> Result<Verdict> {
    require(op, Direction::Forward)?;
    average_expansive(op, cfg)
}

/// AE for either direction.
pub fn avg_expansive(op: &ShiftOperator, cfg: &HorizonConfig) -> Result<Verdict> {
    average_expansive(op, cfg)
}

/// APE of `T` (`side = Op`) or of `T^{-1}` (`side = Inverse`).
pub fn avg_pos_expansive(op: &ShiftOperator, side: Side, cfg: &HorizonConfig) -> Result<Verdict> {
    let name = match side {
        Side::Op => "APE",
        Side::Inverse => "APE-inverse",
    };
    if op.is_bilateral() {
        let mut v = run_branches(op, cfg, name, &[side])?;
        v.criterion = name.into();
        return Ok(v);
    }
    cfg.validate()?;
    if side == Side::Inverse {
        return Err(Error::NotInvertible("unilateral shifts have no inverse".into()));
    }
    let mut v = Verdict::new(name, cfg);
    if op.direction == Direction::Backward {
        v.kind = VerdictKind::BoundedWitness;
        v.branch = Some(Branch::None);
        v.bound = Some(op.matrix().entry_log(1, cfg.k_max)?);
        v.attestation = Some("B e_1 = 0, so every orbit of e_1 vanishes after one step".into());
        return Ok(v);
    }
    v.attestation = op.tail_attestation();
    let grid = grid_for(op, cfg, 0)?;
    let grid_log2 = cfg.grid_log2();
    let jobs: Vec<(u32, Side)> = (1..=cfg.k_max).map(|k| (k, Side::Op)).collect();
    // j-th term is |w_1 ⋯ w_{j-1}| a_{j,k} = ‖F^{j-1} e_1‖_k
    let specs = (0..op.stride as i64).map(|r| BranchSpec { base: 1 + r, sign: 1, offset: 0 }).collect::<Vec<_>>();
    let outcomes: Vec<BranchOutcome> = jobs
        .iter()
        .map(|&(k, _)| evaluate_branch(op, &grid, "left", &specs, k, cfg, &grid_log2))
        .collect::<Result<_>>()?;
    finish(&mut v, &jobs, outcomes, cfg);
    Ok(v)
}

/// Running means `(1/n) Σ_{i=1}^n ‖T^{±i} e_base‖_k` for `n = 1..=n_max`, in `log2`.
pub fn cesaro_branch_trace(op: &ShiftOperator, base: i64, side: Side, k: u32, n_max: u64) -> Result<CriterionTrace> {
    let cfg = HorizonConfig { n_max, k_max: k, l_max: k, ..HorizonConfig::default() };
    let grid = OrbitGrid::build(op, (n_max as i64 + 2) * op.stride as i64 + base.abs(), k)?;
    let sign = if side == Side::Op { 1 } else { -1 };
    let s = branch_series(&grid, BranchSpec { base, sign, offset: 1 }, k, cfg.n_max);
    Ok(CriterionTrace { label: format!("cesaro {side:?} e_{base} k={k}"), first_n: 1, log2_values: s.means })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::preset;

    fn op(dir: Direction, w: &str, sp: &str) -> ShiftOperator {
        ShiftOperator::new(dir, w.parse().unwrap(), preset(sp).unwrap()).unwrap()
    }

    fn small() -> HorizonConfig {
        HorizonConfig { n_max: 400, ..HorizonConfig::default() }.with_grid_top(20)
    }

    #[test]
    fn doubling_backward_is_left_certified() {
        let v = avg_expansive_backward(&op(Direction::Backward, "constant:2", "c0_Z"), &small()).unwrap();
        assert_eq!(v.kind, VerdictKind::CertifiedUnbounded);
        assert_eq!(v.branch, Some(Branch::Left));
        assert_eq!(v.k, Some(1));
        // g(n) = (2^{n+1} - 2)/n crosses 2^20 first at n = 24
        let oracle = (1u64..).find(|&n| ((1u64 << (n + 1)) - 2) >= (1u64 << 20) * n).unwrap();
        assert_eq!(v.crossings.last().unwrap().first_n, Some(oracle));
    }

    #[test]
    fn identity_weights_are_bounded() {
        for (dir, sp) in [(Direction::Backward, "c0_Z"), (Direction::Forward, "lp_Z:1")] {
            let v = avg_expansive(&op(dir, "constant:1", sp), &small()).unwrap();
            assert_eq!(v.kind, VerdictKind::BoundedWitness);
            assert_eq!(v.bound.unwrap().log2(), 0.0);
        }
    }

    #[test]
    fn forward_branches() {
        let v = avg_expansive_forward(&op(Direction::Forward, "constant:2", "lp_Z:1"), &small()).unwrap();
        assert_eq!((v.kind, v.branch), (VerdictKind::CertifiedUnbounded, Some(Branch::Left)));
        let v = avg_expansive_forward(&op(Direction::Forward, "constant:1/2", "lp_Z:1"), &small()).unwrap();
        assert_eq!((v.kind, v.branch), (VerdictKind::CertifiedUnbounded, Some(Branch::Right)));
        let cfg = HorizonConfig { n_max: 10_000, ..HorizonConfig::default() }.with_grid_top(10);
        let v = avg_expansive_forward(&op(Direction::Forward, "constant:1", "s_Z"), &cfg).unwrap();
        assert_eq!((v.kind, v.branch, v.k), (VerdictKind::CertifiedUnbounded, Some(Branch::Both), Some(1)));
    }

    #[test]
    fn means_match_polynomial_oracle() {
        // s(Z), F, k = 2: (1/n) Σ_{i=1}^n (i+1)^2
        let t = cesaro_branch_trace(&op(Direction::Forward, "constant:1", "s_Z"), 0, Side::Op, 2, 50).unwrap();
        for n in [1u64, 7, 50] {
            let s: u64 = (1..=n).map(|i| (i + 1) * (i + 1)).sum();
            let want = (s as f64 / n as f64).log2();
            assert!((t.value_at(n).unwrap() - want).abs() < 1e-12);
        }
    }

    #[test]
    fn pos_expansive_sides() {
        let b = op(Direction::Backward, "constant:2", "c0_Z");
        let cfg = small();
        assert!(avg_pos_expansive(&b, Side::Op, &cfg).unwrap().is_certified());
        assert_eq!(avg_pos_expansive(&b, Side::Inverse, &cfg).unwrap().kind, VerdictKind::BoundedWitness);
        let uni = op(Direction::Forward, "constant:2", "lp_N:1");
        let v = avg_pos_expansive(&uni, Side::Op, &cfg).unwrap();
        assert!(v.is_certified());
        assert!(avg_pos_expansive(&uni, Side::Inverse, &cfg).is_err());
        let id = op(Direction::Forward, "constant:1", "lp_N:1");
        assert_eq!(avg_pos_expansive(&id, Side::Op, &cfg).unwrap().kind, VerdictKind::BoundedWitness);
        let ub = op(Direction::Backward, "constant:3", "lp_N:1");
        assert_eq!(avg_pos_expansive(&ub, Side::Op, &cfg).unwrap().kind, VerdictKind::BoundedWitness);
    }

    #[test]
    fn stride_uses_every_residue() {
        let b = op(Direction::Backward, "constant:2", "c0_Z").power(3).unwrap();
        let v = avg_expansive(&b, &small()).unwrap();
        assert_eq!((v.kind, v.branch), (VerdictKind::CertifiedUnbounded, Some(Branch::Left)));
    }

    #[test]
    fn unattested_weights_never_bounded() {
        let b = op(Direction::Backward, "constant:1", "c0_Z");
        let w = crate::shifts::WeightSequence::table(
            crate::shifts::WeightTable::new(
                -500,
                vec![crate::numerics::Exact::one(); 1001],
                crate::shifts::WeightTail::Undefined,
                crate::spaces::IndexSet::Z,
            )
            .unwrap(),
        );
        let t = ShiftOperator::backward(w, b.space.clone()).unwrap();
        let v = avg_expansive(&t, &small()).unwrap();
        assert_eq!(v.kind, VerdictKind::Inconclusive);
    }
}
