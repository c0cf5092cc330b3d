//! Upper-density estimates and distributional irregularity evidence for basis orbits.

use serde::Serialize;

use crate::criteria::{CriterionTrace, Side};
use crate::error::{Error, Result};
use crate::numerics::Exact;
use crate::shifts::ShiftOperator;

/// Finite surrogate of `limsup card(A ∩ [1,n])/n`: the largest ratio over `base ≤ n ≤ horizon`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityEstimate {
    pub horizon: u64,
    pub base: u64,
    pub value: Exact,
    pub argmax: u64,
    /// `card(A ∩ [1,n])/n` for `n = base..=horizon`.
    #[serde(skip)]
    pub ratios: Vec<Exact>,
}

impl DensityEstimate {
    pub fn ratio_at(&self, n: u64) -> Option<&Exact> {
        self.ratios.get(n.checked_sub(self.base)? as usize)
    }
}

/// Default base of the ratio window.
pub fn default_base(n: u64) -> u64 {
    (n / 10).max(1)
}

/// `indicator[n-1]` says whether `n ∈ A`.
pub fn upper_density(indicator: &[bool], base: u64) -> Result<DensityEstimate> {
    let horizon = indicator.len() as u64;
    if base < 1 || base > horizon {
        return Err(Error::InvalidSpec(format!("need 1 <= N0 <= N, got N0 = {base}, N = {horizon}")));
    }
    let mut count = 0i64;
    let mut ratios = Vec::with_capacity((horizon - base + 1) as usize);
    let mut best: Option<(Exact, u64)> = None;
    for (i, &hit) in indicator.iter().enumerate() {
        count += hit as i64;
        let n = i as u64 + 1;
        if n < base {
            continue;
        }
        let r = Exact::ratio(count, n as i64)?;
        if best.as_ref().map_or(true, |(b, _)| r > *b) {
            best = Some((r.clone(), n));
        }
        ratios.push(r);
    }
    let (value, argmax) = best.expect("nonempty window");
    Ok(DensityEstimate { horizon, base, value, argmax, ratios })
}

/// Exact `‖T^{±n} e_base‖_k` for `n = 1..=n_max`.
pub fn orbit_norms(op: &ShiftOperator, base: i64, side: Side, k: u32, n_max: u64) -> Result<Vec<Exact>> {
    let sign = if side == Side::Op { 1 } else { -1 };
    (1..=n_max as i64)
        .map(|n| {
            op.basis_orbit_norm(base, sign * n, k)?
                .into_exact()
                .map(|x| x.abs())
                .ok_or_else(|| Error::InvalidSpec("orbit norm has no exact value".into()))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LevelDensity {
    pub threshold: Exact,
    pub estimate: DensityEstimate,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DistributionalReport {
    pub base: i64,
    pub side: String,
    pub horizon: u64,
    /// Densities of `{n : ‖T^{±n} x‖ ≥ K}`.
    pub large: Vec<LevelDensity>,
    /// Densities of `{n : ‖T^{±n} x‖ ≤ τ}`.
    pub small: Vec<LevelDensity>,
    /// Levels `j` where both the `K = j+1` and `τ = 1/(j+1)` estimates reach `1 - 1/j`.
    pub irregular_levels: Vec<u32>,
}

/// Large- and small-norm densities along the orbit of `e_base` up to `n_max`.
pub fn distributional_report(
    op: &ShiftOperator,
    base: i64,
    side: Side,
    k_grid: &[Exact],
    tau_grid: &[Exact],
    n_max: u64,
) -> Result<DistributionalReport> {
    let norms = orbit_norms(op, base, side, 1, n_max)?;
    distributional_from_norms(&norms, base, side, k_grid, tau_grid)
}

pub fn distributional_from_norms(norms: &[Exact], base: i64, side: Side, k_grid: &[Exact], tau_grid: &[Exact]) -> Result<DistributionalReport> {
    let n0 = default_base(norms.len() as u64);
    let level = |thr: &Exact, large: bool| -> Result<LevelDensity> {
        let ind: Vec<bool> = norms.iter().map(|x| if large { x >= thr } else { x <= thr }).collect();
        Ok(LevelDensity { threshold: thr.clone(), estimate: upper_density(&ind, n0)? })
    };
    let large = k_grid.iter().map(|k| level(k, true)).collect::<Result<Vec<_>>>()?;
    let small = tau_grid.iter().map(|t| level(t, false)).collect::<Result<Vec<_>>>()?;
    let mut irregular_levels = Vec::new();
    for l in &large {
        let Some(kj) = l.threshold.numer().try_into().ok().filter(|_| l.threshold.denom() == &1.into()) else { continue };
        let kj: i64 = kj;
        if kj < 3 {
            continue;
        }
        let j = kj - 1;
        let tau = Exact::ratio(1, kj)?;
        let need = Exact::one() - Exact::ratio(1, j)?;
        if let Some(s) = small.iter().find(|s| s.threshold == tau) {
            if l.estimate.value >= need && s.estimate.value >= need {
                irregular_levels.push(j as u32);
            }
        }
    }
    Ok(DistributionalReport { base, side: format!("{side:?}").to_lowercase(), horizon: norms.len() as u64, large, small, irregular_levels })
}

/// Exact running means `(1/n) Σ_{i=1}^n ‖T^{±i} e_base‖_k`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CesaroTrace {
    pub base: i64,
    pub k: u32,
    pub averages: Vec<Exact>,
}

impl CesaroTrace {
    pub fn at(&self, n: u64) -> Option<&Exact> {
        self.averages.get(n.checked_sub(1)? as usize)
    }

    pub fn to_log_trace(&self) -> CriterionTrace {
        CriterionTrace {
            label: format!("cesaro e_{} k={}", self.base, self.k),
            first_n: 1,
            log2_values: self.averages.iter().map(|a| a.to_log().log2()).collect(),
        }
    }
}

pub fn cesaro_trace(op: &ShiftOperator, base: i64, side: Side, k: u32, n_max: u64) -> Result<CesaroTrace> {
    if n_max == 0 {
        return Err(Error::InvalidSpec("horizon must be >= 1".into()));
    }
    Ok(cesaro_from_norms(&orbit_norms(op, base, side, k, n_max)?, base, k))
}

pub fn cesaro_from_norms(norms: &[Exact], base: i64, k: u32) -> CesaroTrace {
    let mut acc = Exact::zero();
    let averages = norms
        .iter()
        .enumerate()
        .map(|(i, x)| {
            acc += x;
            acc.checked_div(&Exact::from_int(i as i64 + 1)).expect("n >= 1")
        })
        .collect();
    CesaroTrace { base, k, averages }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criteria::cesaro_branch_trace;
    use crate::spaces::preset;
    use crate::synthesis::build_blocks;
    use proptest::prelude::*;

    fn q(s: &str) -> Exact {
        s.parse().unwrap()
    }

    #[test]
    fn even_numbers_have_density_half() {
        let ind: Vec<bool> = (1..=1000).map(|n| n % 2 == 0).collect();
        let d = upper_density(&ind, 100).unwrap();
        assert_eq!(d.value, q("1/2"));
        assert_eq!(d.argmax % 2, 0);
        let all = upper_density(&vec![true; 50], 5).unwrap();
        assert_eq!(all.value, Exact::one());
        assert!(upper_density(&ind, 0).is_err());
        assert!(upper_density(&ind, 1001).is_err());
    }

    proptest! {
        #[test]
        fn subset_never_denser(bits in proptest::collection::vec((any::<bool>(), any::<bool>()), 1..200), base in 1u64..50) {
            let base = base.min(bits.len() as u64);
            let b: Vec<bool> = bits.iter().map(|(x, y)| *x || *y).collect();
            let a: Vec<bool> = bits.iter().map(|(x, _)| *x).collect();
            let da = upper_density(&a, base).unwrap();
            let db = upper_density(&b, base).unwrap();
            prop_assert!(da.value <= db.value);
            prop_assert!(db.value <= Exact::one());
        }
    }

    #[test]
    fn constant_weights() {
        let op = ShiftOperator::backward("constant:2".parse().unwrap(), preset("c0_Z").unwrap()).unwrap();
        let rep = distributional_report(&op, 0, Side::Op, &[Exact::one()], &[q("1/2")], 100).unwrap();
        assert_eq!(rep.large[0].estimate.value, Exact::one());
        assert_eq!(rep.small[0].estimate.value, Exact::zero());
        let id = ShiftOperator::backward("constant:1".parse().unwrap(), preset("c0_Z").unwrap()).unwrap();
        let c = cesaro_trace(&id, 3, Side::Inverse, 1, 20).unwrap();
        assert!(c.averages.iter().all(|a| *a == Exact::one()));
    }

    #[test]
    fn block_orbit_levels() {
        let (l, w) = build_blocks(4).unwrap();
        let op = ShiftOperator::backward(w.sequence.clone(), preset("c0_Z").unwrap()).unwrap();
        let c = cesaro_trace(&op, -1, Side::Op, 1, 40).unwrap();
        assert_eq!(c.at(8).unwrap(), &q("15/2"));
        let t3 = l.block(3).t;
        let rep = distributional_report(&op, -1, Side::Op, &[q("4")], &[q("1/4")], t3).unwrap();
        assert_eq!(rep.irregular_levels, vec![3]);
        let s4 = l.block(4).s;
        let small = distributional_report(&op, -1, Side::Op, &[], &[q("1/5")], s4).unwrap();
        assert!(small.small[0].estimate.value >= q("3/4"));
    }

    #[test]
    fn matches_log_means() {
        let op = ShiftOperator::forward("piecewise:3/2,1/2".parse().unwrap(), preset("s_Z").unwrap()).unwrap();
        for side in [Side::Op, Side::Inverse] {
            let exact = cesaro_trace(&op, 2, side, 2, 60).unwrap().to_log_trace();
            let fast = cesaro_branch_trace(&op, 2, side, 2, 60).unwrap();
            for (a, b) in exact.log2_values.iter().zip(&fast.log2_values) {
                assert!((a - b).abs() < 1e-9, "{a} vs {b}");
            }
        }
    }
}
