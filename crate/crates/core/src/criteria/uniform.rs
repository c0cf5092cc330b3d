//! Uniform expansivity: properties (A), (B), (C) and their backward duals.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::shifts::{Direction, ShiftOperator};

use super::average::Side;
use super::config::HorizonConfig;
use super::grid::OrbitGrid;
use super::verdict::{all_crossed, at_least, lim_crossings, Branch, Crossing, CriterionTrace, LevelEvidence, Verdict, VerdictKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum UeProperty {
    A,
    B,
    C,
    #[serde(rename = "a")]
    LowerA,
    #[serde(rename = "b")]
    LowerB,
    #[serde(rename = "c")]
    LowerC,
}

impl UeProperty {
    /// Property of `B_w` corresponding to property `self` of its inverse `F_{w'}`.
    pub fn backward_of_dual(self) -> UeProperty {
        match self {
            UeProperty::A => UeProperty::LowerB,
            UeProperty::B => UeProperty::LowerA,
            UeProperty::C => UeProperty::LowerC,
            p => p,
        }
    }
}

impl fmt::Display for UeProperty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            UeProperty::A => "A",
            UeProperty::B => "B",
            UeProperty::C => "C",
            UeProperty::LowerA => "a",
            UeProperty::LowerB => "b",
            UeProperty::LowerC => "c",
        };
        f.write_str(s)
    }
}

/// Which indices `j` the infimum runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Region {
    All,
    /// `j >= 1`
    Pos,
    /// `j <= -1`
    Neg,
}

impl Region {
    fn bounds(self) -> (i64, i64) {
        match self {
            Region::All => (i64::MIN / 4, i64::MAX / 4),
            Region::Pos => (1, i64::MAX / 4),
            Region::Neg => (i64::MIN / 4, -1),
        }
    }

    fn contains(self, j: i64) -> bool {
        let (a, b) = self.bounds();
        j >= a && j <= b
    }
}

struct Sweep<'a> {
    op: &'a ShiftOperator,
    grid: &'a OrbitGrid,
    w: i64,
    sign: i64,
    region: Region,
    k: u32,
    l: u32,
    // r[j] + log2 a_{j,k}
    rk: Vec<f64>,
    probes: bool,
}

impl<'a> Sweep<'a> {
    fn new(op: &'a ShiftOperator, grid: &'a OrbitGrid, w: i64, side: Side, region: Region, k: u32, l: u32) -> Self {
        let rk = grid.r().iter().zip(grid.la(k)).map(|(r, a)| r + a).collect();
        Sweep {
            op,
            grid,
            w,
            sign: if side == Side::Op { 1 } else { -1 },
            region,
            k,
            l,
            rk,
            probes: op.tail_attestation().is_some(),
        }
    }

    /// Min over sources `j ∈ [a, b]` of `log2(‖T^{±n} e_j‖_ℓ / a_{j,k})`; `None` if the grid is too small.
    fn range_min(&self, a: i64, b: i64, d: i64) -> Option<f64> {
        let (ra, rb) = self.region.bounds();
        let mut a = a.max(ra);
        let b = b.min(rb);
        if let Some(low) = self.grid.index_lo {
            // indices outside the index set simply do not exist
            a = a.max(low);
            if a + d < low {
                a = low - d;
            }
        }
        if a > b {
            return Some(f64::INFINITY);
        }
        let g = self.grid;
        if a < g.lo || b > g.hi || a + d < g.lo || b + d > g.hi {
            return None;
        }
        let q = &g.q(self.l)[(a + d - g.lo) as usize..=(b + d - g.lo) as usize];
        let r = &self.rk[(a - g.lo) as usize..=(b - g.lo) as usize];
        Some(q.iter().zip(r).fold(f64::INFINITY, |m, (q, r)| m.min(q - r)))
    }

    fn value(&self, n: u64) -> Result<Option<f64>> {
        let n = n as i64;
        let d = self.sign * self.grid.step() * n;
        let w = self.w;
        let Some(near) = self.range_min(-w, w, d) else { return Ok(None) };
        // sources whose images land in the window
        let Some(far) = self.range_min(-w - d, w - d, d) else { return Ok(None) };
        let mut best = near.min(far);
        if self.probes {
            for j in probe_indices(w, n) {
                if !self.region.contains(j) || !self.op.index_set().contains(j) {
                    continue;
                }
                let a = self.op.matrix().entry_log2(j, self.k)?;
                if a == f64::NEG_INFINITY {
                    continue;
                }
                let v = self.op.basis_orbit_log(j, self.sign * n, self.l)?.log2() - a;
                best = best.min(v);
            }
        }
        Ok(Some(best))
    }

    fn horizon(&self, n_max: u64) -> Result<u64> {
        if self.value(n_max)?.is_some() {
            return Ok(n_max);
        }
        let (mut lo, mut hi) = (0u64, n_max);
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if self.value(mid)?.is_some() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(lo)
    }
}

fn probe_indices(w: i64, n: i64) -> Vec<i64> {
    let mut v = vec![w + 1, w + 2, -(w + 1), -(w + 2)];
    for m in 0..=8 {
        let x = (w + n) << m;
        v.push(x);
        v.push(-x);
    }
    v
}

/// Outcome of one limit-type trace at a fixed `(k, ℓ)`.
struct TraceCheck {
    certified: bool,
    crossings: Vec<Crossing>,
    horizon: u64,
    last: Option<f64>,
}

fn check_trace(s: &Sweep, cfg: &HorizonConfig, grid_log2: &[f64]) -> Result<TraceCheck> {
    let horizon = s.horizon(cfg.n_max)?;
    let top = *grid_log2.last().expect("validated grid");
    let bottom = grid_log2[0];
    let fail = |last| TraceCheck { certified: false, crossings: Vec::new(), horizon, last };
    if horizon == 0 {
        return Ok(fail(None));
    }
    let last = s.value(horizon)?.expect("inside horizon");
    if !at_least(last, top) {
        return Ok(fail(Some(last)));
    }
    // walk back until the trace drops below the smallest threshold
    let mut tail = vec![last];
    let mut n = horizon;
    while n > 1 {
        n -= 1;
        let v = s.value(n)?.expect("inside horizon");
        tail.push(v);
        if !at_least(v, bottom) {
            break;
        }
    }
    tail.reverse();
    let crossings = lim_crossings(&tail, n, &cfg.m_grid, grid_log2);
    Ok(TraceCheck { certified: all_crossed(&crossings), crossings, horizon, last: Some(last) })
}

/// Window-infimum trace `n ↦ inf_j ‖T^{±n}(e_j / a_{j,k})‖_ℓ` for `n = 1..=n_max`.
///
/// The infimum runs over `I_k ∩ region` restricted to sources in `[-W, W]`,
/// sources whose images fall in `[-W, W]`, and (for attested families) far
/// probes at `±(W+1), ±(W+2), ±2^m (W+n)`.
pub fn ue_trace(
    op: &ShiftOperator,
    side: Side,
    region: Region,
    k: u32,
    l: u32,
    n_max: u64,
    cfg: &HorizonConfig,
) -> Result<CriterionTrace> {
    let grid = build_grid(op, cfg, n_max, k.max(l))?;
    let s = Sweep::new(op, &grid, cfg.w, side, region, k, l);
    let mut values = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max {
        match s.value(n)? {
            Some(v) => values.push(v),
            None => break,
        }
    }
    Ok(CriterionTrace { label: format!("ue {side:?} {region:?} k={k} l={l}"), first_n: 1, log2_values: values })
}

fn build_grid(op: &ShiftOperator, cfg: &HorizonConfig, n_max: u64, levels: u32) -> Result<OrbitGrid> {
    let radius = cfg.w.saturating_add((n_max as i64 + 2).saturating_mul(2 * op.stride as i64));
    OrbitGrid::build(op, radius, levels)
}

/// Per-property ingredients: (side, region) pairs that must all certify at one `ℓ`.
fn components(op: &ShiftOperator, prop: UeProperty) -> Vec<(Side, Region)> {
    // the (C) split follows where the forward orbit of T travels
    let (away, toward) = match op.direction {
        Direction::Forward => (Region::Pos, Region::Neg),
        Direction::Backward => (Region::Neg, Region::Pos),
    };
    match prop {
        UeProperty::A | UeProperty::LowerA => vec![(Side::Op, Region::All)],
        UeProperty::B | UeProperty::LowerB => vec![(Side::Inverse, Region::All)],
        UeProperty::C | UeProperty::LowerC => vec![(Side::Op, away), (Side::Inverse, toward)],
    }
}

struct PropertyOutcome {
    prop: UeProperty,
    /// Smallest `ℓ` per `k`, when found.
    levels: Vec<Option<u32>>,
    evidence: Vec<LevelEvidence>,
    crossings: Vec<Crossing>,
    min_horizon: u64,
}

impl PropertyOutcome {
    fn holds(&self) -> bool {
        self.levels.iter().all(|l| l.is_some())
    }
}

fn search_property(op: &ShiftOperator, grid: &OrbitGrid, prop: UeProperty, cfg: &HorizonConfig) -> Result<PropertyOutcome> {
    let grid_log2 = cfg.grid_log2();
    let parts = components(op, prop);
    let per_k = crate::par_map(&(1..=cfg.k_max).collect::<Vec<u32>>(), |&k| -> Result<(Option<u32>, LevelEvidence, u64)> {
        let mut last_ev = None;
        let mut min_h = cfg.n_max;
        for l in k..=cfg.l_max.max(k) {
            let mut ok = true;
            let mut merged: Option<Vec<Crossing>> = None;
            let mut horizon = cfg.n_max;
            let mut last = None;
            for &(side, region) in &parts {
                let s = Sweep::new(op, grid, cfg.w, side, region, k, l);
                let t = check_trace(&s, cfg, &grid_log2)?;
                horizon = horizon.min(t.horizon);
                last = match (last, t.last) {
                    (Some(a), Some(b)) => Some(f64::min(a, b)),
                    (a, b) => a.or(b),
                };
                if !t.certified {
                    ok = false;
                    break;
                }
                merged = Some(match merged {
                    None => t.crossings,
                    Some(prev) => prev
                        .into_iter()
                        .zip(t.crossings)
                        .map(|(a, b)| Crossing { m: a.m, first_n: a.first_n.zip(b.first_n).map(|(x, y)| x.max(y)) })
                        .collect(),
                });
            }
            min_h = min_h.min(horizon);
            let ev = LevelEvidence {
                label: prop.to_string(),
                k,
                l: Some(l),
                certified: ok,
                crossings: if ok { merged.unwrap_or_default() } else { Vec::new() },
                horizon,
                last_log2: last,
                bound: None,
            };
            if ok {
                return Ok((Some(l), ev, min_h));
            }
            last_ev = Some(ev);
        }
        let ev = last_ev.expect("l range is nonempty");
        Ok((None, ev, min_h))
    });
    let mut out = PropertyOutcome { prop, levels: Vec::new(), evidence: Vec::new(), crossings: Vec::new(), min_horizon: cfg.n_max };
    for r in per_k {
        let (l, ev, h) = r?;
        if out.crossings.is_empty() && ev.certified {
            out.crossings = ev.crossings.clone();
        }
        out.levels.push(l);
        out.evidence.push(ev);
        out.min_horizon = out.min_horizon.min(h);
    }
    Ok(out)
}

fn assemble(op: &ShiftOperator, outcomes: Vec<PropertyOutcome>, criterion: &str, cfg: &HorizonConfig) -> (Option<UeProperty>, Verdict) {
    let mut v = Verdict::new(criterion, cfg);
    v.attestation = op.tail_attestation();
    v.branch = Some(Branch::None);
    let held: Vec<&PropertyOutcome> = outcomes.iter().filter(|o| o.holds()).collect();
    let mut property = None;
    if held.len() > 1 {
        let names: Vec<String> = held.iter().map(|o| o.prop.to_string()).collect();
        v.notes.push(format!("exclusivity violated: properties {} all certified", names.join(", ")));
    } else if let Some(o) = held.first() {
        if v.attestation.is_some() {
            property = Some(o.prop);
            v.kind = VerdictKind::CertifiedUnbounded;
            v.property = Some(o.prop.to_string());
            v.k = Some(1);
            v.l = o.levels[0];
            v.crossings = o.crossings.clone();
        } else {
            v.notes.push(format!("window evidence suggests property {} but the tails carry no attestation", o.prop));
        }
    }
    if let Some(h) = outcomes.iter().map(|o| o.min_horizon).min() {
        if h < cfg.n_max {
            v.notes.push(format!("weights only tabulated: horizon reduced to n = {h}"));
        }
    }
    for o in outcomes {
        v.evidence.extend(o.evidence);
    }
    (property, v)
}

fn ue_generic(op: &ShiftOperator, cfg: &HorizonConfig, props: &[UeProperty], criterion: &str) -> Result<(Option<UeProperty>, Verdict)> {
    cfg.validate()?;
    let grid = build_grid(op, cfg, cfg.n_max, cfg.l_max)?;
    let outcomes = props.iter().map(|&p| search_property(op, &grid, p, cfg)).collect::<Result<Vec<_>>>()?;
    Ok(assemble(op, outcomes, criterion, cfg))
}

fn require_bilateral(op: &ShiftOperator, dir: Direction) -> Result<()> {
    if op.direction != dir {
        return Err(Error::InvalidSpec(format!("expected a {dir} shift, got {}", op.direction)));
    }
    if !op.is_bilateral() {
        return Err(Error::NotInvertible("uniform expansivity needs a bilateral (invertible) shift".into()));
    }
    Ok(())
}

/// UE of a bilateral `F_w`: which of (A), (B), (C) holds.
pub fn unif_expansive_forward(op: &ShiftOperator, cfg: &HorizonConfig) -> Result<(Option<UeProperty>, Verdict)> {
    require_bilateral(op, Direction::Forward)?;
    ue_generic(op, cfg, &[UeProperty::A, UeProperty::B, UeProperty::C], "UE")
}

/// UE of a bilateral `B_w`, decided on its inverse `F_{w'}`; (a) also flags UPE.
pub fn unif_expansive_backward(op: &ShiftOperator, cfg: &HorizonConfig) -> Result<(Option<UeProperty>, Verdict)> {
    require_bilateral(op, Direction::Backward)?;
    let dual = op.dual_form()?;
    let (p, mut v) = ue_generic(&dual, cfg, &[UeProperty::A, UeProperty::B, UeProperty::C], "UE")?;
    let p = p.map(UeProperty::backward_of_dual);
    v.property = p.map(|p| p.to_string());
    for e in v.evidence.iter_mut() {
        if let Some(q) = [UeProperty::A, UeProperty::B, UeProperty::C].iter().find(|q| q.to_string() == e.label) {
            e.label = q.backward_of_dual().to_string();
        }
    }
    v.upe = Some(p == Some(UeProperty::LowerA));
    Ok((p, v))
}

/// UE for either direction.
pub fn unif_expansive(op: &ShiftOperator, cfg: &HorizonConfig) -> Result<(Option<UeProperty>, Verdict)> {
    match op.direction {
        Direction::Forward => unif_expansive_forward(op, cfg),
        Direction::Backward => unif_expansive_backward(op, cfg),
    }
}

/// UPE: forward-orbit infimum over all of `I_k` (property (A) alone).
pub fn unif_pos_expansive(op: &ShiftOperator, cfg: &HorizonConfig) -> Result<Verdict> {
    cfg.validate()?;
    if !op.is_bilateral() && op.direction == Direction::Backward {
        let mut v = Verdict::new("UPE", cfg);
        v.kind = VerdictKind::BoundedWitness;
        v.branch = Some(Branch::None);
        v.bound = Some(crate::numerics::LogMagnitude::ZERO);
        v.attestation = Some("B e_1 = 0: the orbit of e_1 does not grow".into());
        return Ok(v);
    }
    let (p, mut v) = ue_generic(op, cfg, &[UeProperty::A], "UPE")?;
    v.property = None;
    v.upe = Some(p.is_some());
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criteria::config::pow2_grid;
    use crate::spaces::preset;

    fn op(dir: Direction, w: &str, sp: &str) -> ShiftOperator {
        ShiftOperator::new(dir, w.parse().unwrap(), preset(sp).unwrap()).unwrap()
    }

    fn quick() -> HorizonConfig {
        HorizonConfig { n_max: 300, w: 100, ..HorizonConfig::default() }.with_grid_top(20)
    }

    #[test]
    fn rapidly_decreasing_window_inf() {
        let f = op(Direction::Forward, "constant:1", "s_Z");
        let cfg = HorizonConfig { w: 100, ..HorizonConfig::default() };
        let t = ue_trace(&f, Side::Op, Region::Pos, 1, 2, 3, &cfg).unwrap();
        // (j+n+1)^2/(j+1) at n = 3 is minimal at j = 2
        assert!((t.value_at(3).unwrap() - 12f64.log2()).abs() < 1e-12);
        let brute = (1..=100i64).map(|j| ((j + 4) * (j + 4)) as f64 / (j + 1) as f64).fold(f64::INFINITY, f64::min);
        assert_eq!(brute, 12.0);
    }

    #[test]
    fn constant_two() {
        let f = op(Direction::Forward, "constant:2", "lp_Z:2");
        let (p, v) = unif_expansive_forward(&f, &quick()).unwrap();
        assert_eq!(p, Some(UeProperty::A));
        assert_eq!(v.l, Some(1));
        let t = ue_trace(&f, Side::Op, Region::All, 1, 1, 10, &quick()).unwrap();
        assert_eq!(t.value_at(10), Some(10.0));
        assert!(unif_pos_expansive(&f, &quick()).unwrap().upe.unwrap());

        let b = op(Direction::Backward, "constant:2", "lp_Z:2");
        let (p, v) = unif_expansive_backward(&b, &quick()).unwrap();
        assert_eq!(p, Some(UeProperty::LowerA));
        assert_eq!(v.upe, Some(true));
        let b = op(Direction::Backward, "constant:1/2", "lp_Z:2");
        let (p, v) = unif_expansive_backward(&b, &quick()).unwrap();
        assert_eq!(p, Some(UeProperty::LowerB));
        assert_eq!(v.upe, Some(false));
    }

    #[test]
    fn identity_has_no_property() {
        let f = op(Direction::Forward, "constant:1", "c0_Z");
        let (p, v) = unif_expansive_forward(&f, &quick()).unwrap();
        assert_eq!(p, None);
        assert_eq!(v.kind, VerdictKind::Inconclusive);
    }

    #[test]
    fn halfline_is_a() {
        let f = op(Direction::Forward, "constant:2", "halfline_Z");
        let (p, _) = unif_expansive_forward(&f, &quick()).unwrap();
        assert_eq!(p, Some(UeProperty::A));
    }

    #[test]
    fn rapidly_decreasing_is_c() {
        let f = op(Direction::Forward, "constant:1", "s_Z");
        let cfg = HorizonConfig { m_grid: pow2_grid(10), ..HorizonConfig::default() };
        let (p, v) = unif_expansive_forward(&f, &cfg).unwrap();
        assert_eq!(p, Some(UeProperty::C));
        for k in 1..=3 {
            let ev = v.evidence.iter().find(|e| e.label == "C" && e.k == k).unwrap();
            assert!(ev.certified);
            assert_eq!(ev.l, Some(k + 1));
        }
        assert!(!unif_pos_expansive(&f, &cfg).unwrap().upe.unwrap());
    }

    #[test]
    fn unilateral_upe() {
        let f = op(Direction::Forward, "constant:3", "lp_N:1");
        assert!(unif_pos_expansive(&f, &quick()).unwrap().upe.unwrap());
        let b = op(Direction::Backward, "constant:3", "lp_N:1");
        assert_eq!(unif_pos_expansive(&b, &quick()).unwrap().kind, VerdictKind::BoundedWitness);
        assert!(unif_expansive_forward(&f, &quick()).is_err());
    }

    #[test]
    fn direct_and_dual_agree_for_backward() {
        // running the generic check on B_w itself labels the same property in upper case
        let b = op(Direction::Backward, "constant:2", "c0_Z");
        let (p, _) = ue_generic(&b, &quick(), &[UeProperty::A, UeProperty::B, UeProperty::C], "UE").unwrap();
        assert_eq!(p, Some(UeProperty::A));
    }
}
