//! Exact reconstruction of the block weight `…B₂A₂B₁A₁ I C₁B₁C₂B₂…` and audits of its inequalities.
//!
//! Left of the origin the weights read (from `w_{-1}` outward) reversed `A_1`,
//! reversed `B_1`, reversed `A_2`, …; right of `w_1` they read `C_1, B_1, C_2, B_2, …`.
//! With this layout `‖B^n e_{-1}‖ = w_{-1}⋯w_{-n}` and `‖B^{-n} e_1‖ = (w_2⋯w_{n+1})^{-1}`.

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::Exact;
use crate::shifts::{WeightSequence, WeightTable, WeightTail};
use crate::spaces::IndexSet;

/// Smallest positive `r` with `r ≥ 2 log2(j+1)`, i.e. `2^r ≥ (j+1)^2`.
pub fn r_of(j: u32) -> u32 {
    let target = BigInt::from(j as u64 + 1).pow(2);
    let mut r = 1u32;
    while BigInt::from(1u8) << r < target {
        r += 1;
    }
    r
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SearchCaps {
    pub k_max: u32,
    pub i_max: u64,
}

impl Default for SearchCaps {
    fn default() -> Self {
        SearchCaps { k_max: 64, i_max: 10_000_000 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BlockParams {
    pub j: u32,
    pub k: u32,
    pub i: u64,
    pub r: u32,
    /// `|A_j| = |C_j| = 4k + 2^k`
    pub a: u64,
    /// `|B_j| = 2r + i - 1`
    pub b: u64,
    pub s: u64,
    pub t: u64,
    /// `t_{j-1} + 4k + 2^{k-1}`
    pub n: u64,
    pub alpha: Exact,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BlockLayout {
    pub blocks: Vec<BlockParams>,
}

impl BlockLayout {
    pub fn j_max(&self) -> u32 {
        self.blocks.len() as u32
    }

    pub fn block(&self, j: u32) -> &BlockParams {
        &self.blocks[j as usize - 1]
    }

    /// `t_j`, with `t_0 = 0`.
    pub fn t(&self, j: u32) -> u64 {
        if j == 0 {
            0
        } else {
            self.block(j).t
        }
    }
}

/// Exact weights on `[-t_J, t_J + 1]`.
#[derive(Clone, Debug)]
pub struct BlockWeights {
    pub j_max: u32,
    /// `w_{-1}, w_{-2}, …, w_{-t_J}`
    pub left: Vec<Exact>,
    /// `w_2, w_3, …, w_{t_J + 1}`
    pub right: Vec<Exact>,
    pub sequence: WeightSequence,
}

impl BlockWeights {
    pub fn value(&self, p: i64) -> Option<&Exact> {
        match p {
            0 | 1 => None,
            p if p < 0 => self.left.get((-p - 1) as usize),
            p => self.right.get((p - 2) as usize),
        }
    }

    pub fn t_max(&self) -> u64 {
        self.left.len() as u64
    }
}

pub fn a_block(j: u32, k: u32) -> Vec<Exact> {
    let mut v = vec![Exact::one(); (1usize << k) - 1];
    v.push(Exact::ratio(j as i64, 2 * (j as i64 + 1)).expect("nonzero"));
    v.extend(std::iter::repeat(half()).take(2 * k as usize - 1));
    v.push(Exact::one());
    v.extend(std::iter::repeat(Exact::from_int(2)).take(2 * k as usize));
    v
}

pub fn b_block(r: u32, i: u64) -> Vec<Exact> {
    let mut v = vec![half(); r as usize];
    v.extend(std::iter::repeat(Exact::one()).take(i as usize - 1));
    v.extend(std::iter::repeat(Exact::from_int(2)).take(r as usize));
    v
}

pub fn c_block(j: u32, k: u32) -> Vec<Exact> {
    let mut v = vec![half(); 2 * k as usize];
    v.push(Exact::one());
    v.extend(std::iter::repeat(Exact::from_int(2)).take(2 * k as usize - 1));
    v.push(Exact::ratio(2 * (j as i64 + 1), j as i64).expect("nonzero"));
    v.extend(std::iter::repeat(Exact::one()).take((1usize << k) - 1));
    v
}

fn half() -> Exact {
    Exact::ratio(1, 2).expect("nonzero")
}

// Run-length form of the left weights in the order w_{-1}, w_{-2}, …
type Runs = Vec<(Exact, u128)>;

fn reversed_a_runs(j: u32, k: u32) -> Runs {
    vec![
        (Exact::from_int(2), 2 * k as u128),
        (Exact::one(), 1),
        (half(), 2 * k as u128 - 1),
        (Exact::ratio(j as i64, 2 * (j as i64 + 1)).expect("nonzero"), 1),
        (Exact::one(), (1u128 << k) - 1),
    ]
}

fn reversed_b_runs(r: u32, i: u64) -> Runs {
    vec![(Exact::from_int(2), r as u128), (Exact::one(), i as u128 - 1), (half(), r as u128)]
}

/// Counts and sums of the norm sequence `n ↦ w_{-1}⋯w_{-n}` described by `runs`.
struct NormStats {
    len: u128,
    sum: Exact,
    small: u128,
    large: u128,
}

fn norm_stats(runs: &[Runs], small_at_most: &Exact, large_at_least: &Exact) -> NormStats {
    let mut st = NormStats { len: 0, sum: Exact::zero(), small: 0, large: 0 };
    let mut p = Exact::one();
    let tally = |st: &mut NormStats, v: &Exact, count: u128| {
        st.len += count;
        st.sum += &(v * &Exact::from_bigint(BigInt::from(count)));
        if v <= small_at_most {
            st.small += count;
        }
        if v >= large_at_least {
            st.large += count;
        }
    };
    for (w, count) in runs.iter().flatten() {
        if w == &Exact::one() {
            tally(&mut st, &p, *count);
        } else {
            for _ in 0..*count {
                p *= w;
                tally(&mut st, &p, 1);
            }
        }
    }
    st
}

fn big(x: u128) -> Exact {
    Exact::from_bigint(BigInt::from(x))
}

fn inv(j: u32) -> Exact {
    Exact::ratio(1, j as i64 + 1).expect("nonzero")
}

/// The layout parameters for blocks `1..=j_max`, with minimal admissible `k_j` and `i_j`.
pub fn build_layout(j_max: u32, caps: SearchCaps) -> Result<BlockLayout> {
    if j_max == 0 {
        return Err(Error::InvalidSpec("need at least one block".into()));
    }
    let mut runs: Vec<Runs> = Vec::new();
    let mut blocks: Vec<BlockParams> = Vec::new();
    let k_cap = caps.k_max.min(100);
    for j in 1..=j_max {
        let r = r_of(j);
        let (prev_k, prev_i, prev_t) = blocks.last().map_or((1, 1, 0), |b| (b.k, b.i, b.t));
        let one_minus = Exact::one() - Exact::ratio(1, j as i64).expect("nonzero");
        let jp1 = Exact::from_int(j as i64 + 1);
        let k = if j == 1 {
            2
        } else {
            let mut k = prev_k + 1;
            loop {
                if k > k_cap {
                    return Err(Error::SearchCap(format!("block {j}: no k <= {k_cap} satisfies Eq1 and Eq2")));
                }
                runs.push(reversed_a_runs(j, k));
                let st = norm_stats(&runs, &inv(j), &jp1);
                runs.pop();
                let eq1 = big(st.small) >= &one_minus * &big(st.len);
                let eq2 = st.sum >= &jp1 * &(big(st.len) + big(4 * r as u128));
                if eq1 && eq2 {
                    break k;
                }
                k += 1;
            }
        };
        runs.push(reversed_a_runs(j, k));
        let at_s = norm_stats(&runs, &inv(j), &jp1);
        let i = if j == 1 {
            2
        } else {
            // count and length are both affine in i with slope 1
            runs.push(reversed_b_runs(r, 1));
            let st = norm_stats(&runs, &inv(j), &jp1);
            runs.pop();
            let need = (j as i128 - 1) * st.len as i128 - j as i128 * st.large as i128 + 1;
            let i = need.max(prev_i as i128 + 1) as u128;
            if i > caps.i_max as u128 {
                return Err(Error::SearchCap(format!("block {j}: Eq3 needs i = {i} > {}", caps.i_max)));
            }
            i as u64
        };
        runs.push(reversed_b_runs(r, i));
        let a = 4 * k as u64 + (1u64 << k);
        let b = 2 * r as u64 + i - 1;
        let s = prev_t + a;
        let t = s + b;
        debug_assert_eq!(at_s.len, s as u128);
        let alpha = at_s.sum.checked_div(&big(s as u128))?;
        blocks.push(BlockParams { j, k, i, r, a, b, s, t, n: prev_t + 4 * k as u64 + (1u64 << (k - 1)), alpha });
    }
    Ok(BlockLayout { blocks })
}

/// Layout and exact weight table for blocks `1..=j_max`.
pub fn build_blocks(j_max: u32) -> Result<(BlockLayout, BlockWeights)> {
    build_blocks_with(j_max, SearchCaps::default())
}

pub fn build_blocks_with(j_max: u32, caps: SearchCaps) -> Result<(BlockLayout, BlockWeights)> {
    let layout = build_layout(j_max, caps)?;
    let weights = assemble(&layout)?;
    Ok((layout, weights))
}

fn assemble(layout: &BlockLayout) -> Result<BlockWeights> {
    let mut left = Vec::new();
    let mut right = Vec::new();
    for b in &layout.blocks {
        left.extend(a_block(b.j, b.k).into_iter().rev());
        left.extend(b_block(b.r, b.i).into_iter().rev());
        right.extend(c_block(b.j, b.k));
        right.extend(b_block(b.r, b.i));
    }
    let t = left.len() as i64;
    let mut values: Vec<Exact> = left.iter().rev().cloned().collect();
    values.push(Exact::one());
    values.push(Exact::one());
    values.extend(right.iter().cloned());
    let table = WeightTable::new(-t, values, WeightTail::Undefined, IndexSet::Z)?.with_label(format!("blocks:{}", layout.j_max()));
    Ok(BlockWeights { j_max: layout.j_max(), left, right, sequence: WeightSequence::table(table) })
}

/// The block weight sequence for `n` blocks, as used by the `blocks:n` weight family.
pub fn block_weights(n: usize) -> Result<WeightSequence> {
    let (_, w) = build_blocks(n as u32)?;
    Ok(w.sequence)
}

/// `‖B^n e_{-1}‖` for `n = 1..=n_max`, by prefix products of the weights.
pub fn left_norms(w: &BlockWeights, n_max: usize) -> Vec<Exact> {
    let mut p = Exact::one();
    w.left.iter().take(n_max).map(|x| {
        p *= x;
        p.clone()
    })
    .collect()
}

/// `‖B^{-n} e_1‖` for `n = 1..=n_max`, by prefix products of reciprocal weights.
pub fn right_norms(w: &BlockWeights, n_max: usize) -> Result<Vec<Exact>> {
    let mut p = Exact::one();
    w.right
        .iter()
        .take(n_max)
        .map(|x| {
            p = p.checked_div(x)?;
            Ok(p.clone())
        })
        .collect()
}

/// The displayed norm values on `(t_{j-1}, s_j]` and `(s_j, t_j]`, from the closed forms.
pub fn closed_form_norms(layout: &BlockLayout, j: u32) -> (Vec<Exact>, Vec<Exact>) {
    let b = layout.block(j);
    let over_j = |e: i64| Exact::pow2(e).checked_div(&Exact::from_int(j as i64)).expect("j >= 1");
    let over_j1 = |e: i64| Exact::pow2(e).checked_div(&Exact::from_int(j as i64 + 1)).expect("j >= 1");
    let k = b.k as i64;
    let mut first: Vec<Exact> = (1..=2 * k).map(over_j).collect();
    first.push(over_j(2 * k));
    first.extend((1..2 * k).rev().map(over_j));
    first.extend(std::iter::repeat(inv(j)).take(1usize << b.k));
    let r = b.r as i64;
    let mut second: Vec<Exact> = (1..r).map(over_j1).collect();
    second.extend(std::iter::repeat(over_j1(r)).take(b.i as usize));
    second.extend((0..r).rev().map(over_j1));
    (first, second)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InequalityCheck {
    pub name: String,
    pub j: u32,
    pub lhs: Exact,
    pub rhs: Exact,
    pub holds: bool,
    /// Reported for reference only when false.
    pub required: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CesaroCheck {
    pub j: u32,
    pub n_lo: u64,
    pub n_hi: u64,
    pub min_average: Exact,
    pub min_at: u64,
    pub violations: Vec<u64>,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditReport {
    pub eq1: Vec<InequalityCheck>,
    pub eq2: Vec<InequalityCheck>,
    pub eq3: Vec<InequalityCheck>,
    pub eq4: Vec<CesaroCheck>,
    /// Sufficient lower bounds from the construction, for cross-reference.
    pub bounds: Vec<InequalityCheck>,
}

impl AuditReport {
    pub fn all_pass(&self) -> bool {
        self.eq1.iter().chain(&self.eq2).chain(&self.eq3).all(|c| c.holds || !c.required) && self.eq4.iter().all(|c| c.holds)
    }
}

fn check(name: &str, j: u32, lhs: Exact, rhs: Exact, required: bool) -> InequalityCheck {
    InequalityCheck { name: name.into(), j, holds: lhs >= rhs, lhs, rhs, required }
}

/// Re-verifies Eq1–Eq4 from the norm sequence of the assembled weights, exactly.
pub fn verify_inequalities(layout: &BlockLayout, weights: &BlockWeights, j_max: u32) -> Result<AuditReport> {
    let j_max = j_max.min(layout.j_max());
    let norms = left_norms(weights, weights.left.len());
    let mut prefix = Vec::with_capacity(norms.len() + 1);
    let mut acc = Exact::zero();
    prefix.push(acc.clone());
    for x in &norms {
        acc += x;
        prefix.push(acc.clone());
    }
    let mut rep = AuditReport { eq1: vec![], eq2: vec![], eq3: vec![], eq4: vec![], bounds: vec![] };
    for j in 1..=j_max {
        let b = layout.block(j);
        let (s, t) = (b.s as usize, b.t as usize);
        let one_minus = Exact::one() - Exact::ratio(1, j as i64)?;
        let jp1 = Exact::from_int(j as i64 + 1);
        let small = norms[..s].iter().filter(|x| **x <= inv(j)).count();
        let large = norms[..t].iter().filter(|x| **x >= jp1).count();
        let sum_s = prefix[s].clone();
        let required = j >= 2;
        rep.eq1.push(check("Eq1", j, Exact::ratio(small as i64, s as i64)?, one_minus.clone(), required));
        rep.eq2.push(check("Eq2", j, sum_s.checked_div(&Exact::from_int((s + 4 * b.r as usize) as i64))?, jp1.clone(), required));
        rep.eq3.push(check("Eq3", j, Exact::ratio(large as i64, t as i64)?, one_minus.clone(), required));
        let prev_t = layout.t(j - 1) as i64;
        let k = b.k as i64;
        let denom = prev_t + 4 * k + (1i64 << k);
        rep.bounds.push(check("Eq1-bound", j, Exact::ratio(1i64 << k, denom)?, one_minus.clone(), false));
        rep.bounds.push(check(
            "alpha-bound",
            j,
            b.alpha.clone(),
            Exact::ratio((1i64 << (2 * k + 2)) - 4, j as i64 * denom)?,
            false,
        ));
        rep.bounds.push(check("Eq3-bound", j, Exact::ratio(b.i as i64, (b.s + 2 * b.r as u64 + b.i - 1) as i64)?, one_minus, false));
        if j < layout.j_max() {
            let lo = prev_t as u64 + 4 * b.k as u64;
            let hi = b.t + 4 * layout.block(j + 1).k as u64;
            let mut c = CesaroCheck { j, n_lo: lo, n_hi: hi, min_average: Exact::zero(), min_at: 0, violations: vec![], holds: true };
            for n in lo..=hi {
                let avg = prefix[n as usize].checked_div(&Exact::from_int(n as i64))?;
                if c.min_at == 0 || avg < c.min_average {
                    c.min_average = avg.clone();
                    c.min_at = n;
                }
                if avg < jp1 {
                    c.holds = false;
                    if c.violations.len() < 16 {
                        c.violations.push(n);
                    }
                }
            }
            rep.eq4.push(c);
        }
    }
    Ok(rep)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PlateauCheck {
    pub j: u32,
    /// Window `(n_lo, n_hi]`.
    pub n_lo: u64,
    pub n_hi: u64,
    pub value: Exact,
    pub left_ok: bool,
    pub right_ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShiftedProducts {
    pub t: i64,
    /// `|w_{t-n_j+1} ⋯ w_t|` for `j = 1..=J`.
    pub backward: Vec<Exact>,
    /// `|w_{t+1} ⋯ w_{t+n_j}|^{-1}` (checked by symmetry; not displayed in the construction).
    pub forward: Vec<Exact>,
    pub backward_certified: bool,
    pub forward_certified: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HcReport {
    pub plateaus: Vec<PlateauCheck>,
    pub threshold: Exact,
    pub shifted: Vec<ShiftedProducts>,
}

impl HcReport {
    pub fn plateaus_ok(&self) -> bool {
        self.plateaus.iter().all(|p| p.left_ok && p.right_ok)
    }

    pub fn shifted_ok(&self) -> bool {
        self.shifted.iter().all(|s| s.backward_certified && s.forward_certified)
    }
}

/// Nonincreasing from the first block whose plateau half-width exceeds `|t|`, and at most `threshold` at the end.
fn decreasing_below(values: &[Exact], from: usize, threshold: &Exact) -> bool {
    let tail = &values[from.min(values.len())..];
    !tail.is_empty() && tail.windows(2).all(|p| p[1] <= p[0]) && tail.last().is_some_and(|v| v <= threshold)
}

/// Plateau values around `n_j` and the shifted products `w_{t-n_j+1}⋯w_t` for `|t| ≤ t_range`.
pub fn hypercyclicity_witness(layout: &BlockLayout, weights: &BlockWeights, j_max: u32, t_range: i64, threshold: &Exact) -> Result<HcReport> {
    let j_max = j_max.min(layout.j_max());
    let w = &weights.sequence;
    let mut plateaus = Vec::new();
    for j in 1..=j_max {
        let b = layout.block(j);
        let h = 1u64 << (b.k - 1);
        let (lo, hi) = (b.n - h, b.n + h);
        let want = inv(j);
        let mut left_ok = true;
        let mut right_ok = true;
        for n in lo + 1..=hi {
            let n = n as i64;
            left_ok &= w.product(-n, -1)? == want;
            right_ok &= w.product(2, n + 1)?.recip()? == want;
        }
        plateaus.push(PlateauCheck { j, n_lo: lo, n_hi: hi, value: want, left_ok, right_ok });
    }
    let mut shifted = Vec::new();
    for t in -t_range..=t_range {
        let mut backward = Vec::new();
        let mut forward = Vec::new();
        for j in 1..=j_max {
            let n = layout.block(j).n as i64;
            backward.push(w.product(t - n + 1, t)?);
            forward.push(w.product(t + 1, t + n)?.recip()?);
        }
        // the case analysis applies once |t| < 2^{k_j - 1}
        let from = layout.blocks.iter().position(|b| (t.unsigned_abs()) < (1u64 << (b.k - 1))).unwrap_or(layout.blocks.len());
        shifted.push(ShiftedProducts {
            t,
            backward_certified: decreasing_below(&backward, from, threshold),
            forward_certified: decreasing_below(&forward, from, threshold),
            backward,
            forward,
        });
    }
    Ok(HcReport { plateaus, threshold: threshold.clone(), shifted })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex(s: &str) -> Exact {
        s.parse().unwrap()
    }

    fn exs(v: &[&str]) -> Vec<Exact> {
        v.iter().map(|s| ex(s)).collect()
    }

    #[test]
    fn r_values() {
        assert_eq!((r_of(1), r_of(2), r_of(3), r_of(4)), (2, 4, 4, 5));
        // integer test agrees with the ceiling of 2 log2(j+1) away from exact powers
        for j in 1..200u32 {
            let r = r_of(j);
            assert!(1u64 << r >= ((j + 1) * (j + 1)) as u64);
            assert!(r == 1 || (1u64 << (r - 1)) < ((j + 1) * (j + 1)) as u64);
        }
    }

    #[test]
    fn first_blocks_match_templates() {
        assert_eq!(a_block(1, 2), exs(&["1", "1", "1", "1/4", "1/2", "1/2", "1/2", "1", "2", "2", "2", "2"]));
        assert_eq!(b_block(2, 2), exs(&["1/2", "1/2", "1", "2", "2"]));
        assert_eq!(c_block(1, 2), exs(&["1/2", "1/2", "1/2", "1/2", "1", "2", "2", "2", "4", "1", "1", "1"]));
    }

    #[test]
    fn layout_goldens() {
        let l = build_layout(4, SearchCaps::default()).unwrap();
        let got: Vec<_> = l.blocks.iter().map(|b| (b.k, b.i, b.r, b.s, b.t)).collect();
        assert_eq!(got, vec![(2, 2, 2, 12, 17), (6, 60, 4, 105, 172), (9, 1106, 4, 720, 1833), (13, 29634, 5, 10077, 39720)]);
        assert_eq!(l.block(1).alpha, ex("31/6"));
        assert_eq!((l.block(1).a, l.block(1).b, l.block(1).n), (12, 5, 10));
    }

    #[test]
    fn weights_positions() {
        let (_, w) = build_blocks(1).unwrap();
        let s = &w.sequence;
        assert_eq!(s.value(-1).unwrap(), ex("2"));
        assert_eq!(s.value(-9).unwrap(), ex("1/4"));
        assert_eq!(s.value(0).unwrap(), Exact::one());
        assert_eq!(s.value(2).unwrap(), ex("1/2"));
        assert_eq!(s.product(-4, -1).unwrap(), ex("16"));
        assert!(s.value(-18).is_err());
        assert!(s.value(19).is_err());
    }

    #[test]
    fn first_norm_displays() {
        let (l, w) = build_blocks(2).unwrap();
        let (first, second) = closed_form_norms(&l, 1);
        assert_eq!(first, exs(&["2", "4", "8", "16", "16", "8", "4", "2", "1/2", "1/2", "1/2", "1/2"]));
        assert_eq!(second, exs(&["1", "2", "2", "1", "1/2"]));
        let sum: Exact = first.iter().sum();
        assert_eq!(sum, ex("62"));
        let norms = left_norms(&w, 17);
        assert_eq!(&norms[..12], &first[..]);
        assert_eq!(&norms[12..], &second[..]);
        assert_eq!(right_norms(&w, 17).unwrap(), norms);
    }

    #[test]
    fn audits_pass_to_four_blocks() {
        let (l, w) = build_blocks(4).unwrap();
        let rep = verify_inequalities(&l, &w, 4).unwrap();
        assert!(rep.all_pass());
        assert_eq!(rep.eq1[1].lhs, ex("64/105"));
        assert_eq!(rep.eq2[1].lhs.to_decimal_string(3), "68.428");
        assert!(rep.eq2[0].holds && !rep.eq2[0].required);
        let e = &rep.eq4[0];
        assert_eq!((e.n_lo, e.n_hi), (8, 17 + 24));
        assert_eq!(rep.eq4.len(), 3);
    }

    #[test]
    fn search_cap_is_reported() {
        let err = build_layout(3, SearchCaps { k_max: 6, i_max: 10_000_000 }).unwrap_err();
        assert_eq!(err.code(), "SL-E003");
        let err = build_layout(3, SearchCaps { k_max: 64, i_max: 100 }).unwrap_err();
        assert_eq!(err.code(), "SL-E003");
    }

    #[test]
    fn plateau_windows() {
        let (l, w) = build_blocks(2).unwrap();
        let hc = hypercyclicity_witness(&l, &w, 2, 2, &Exact::pow2(-10)).unwrap();
        assert!(hc.plateaus_ok());
        assert_eq!((hc.plateaus[0].n_lo, hc.plateaus[0].n_hi), (8, 12));
        let t_minus_one = hc.shifted.iter().find(|s| s.t == -1).unwrap();
        assert_eq!(t_minus_one.backward, exs(&["1/2", "1/3"]));
    }
}
