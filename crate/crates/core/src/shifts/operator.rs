use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::numerics::{Exact, LogMagnitude, Magnitude};
use crate::spaces::{seminorm, IndexSet, MatrixFamily, KotheMatrix, SpaceSpec, SparseVector};

use super::weights::{Diagonal, Lag, WeightSequence};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Backward,
    Forward,
}

impl Direction {
    pub fn opposite(self) -> Self {
        match self {
            Direction::Backward => Direction::Forward,
            Direction::Forward => Direction::Backward,
        }
    }
}

impl std::str::FromStr for Direction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "backward" | "B" => Ok(Direction::Backward),
            "forward" | "F" => Ok(Direction::Forward),
            other => Err(Error::Parse(format!("unknown direction {other:?}"))),
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Backward => "backward",
            Direction::Forward => "forward",
        })
    }
}

/// Unimodular scalar `re + i·im` with `re² + im² = 1` exactly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Phase {
    pub re: Exact,
    pub im: Exact,
}

impl Default for Phase {
    fn default() -> Self {
        Phase { re: Exact::one(), im: Exact::zero() }
    }
}

impl Phase {
    pub fn new(re: Exact, im: Exact) -> Result<Self> {
        let m = &(&re * &re) + &(&im * &im);
        if m != Exact::one() {
            return Err(Error::NotUnimodular(format!("{re} + {im}i")));
        }
        Ok(Phase { re, im })
    }

    pub fn mul(&self, o: &Phase) -> Phase {
        Phase {
            re: &(&self.re * &o.re) - &(&self.im * &o.im),
            im: &(&self.re * &o.im) + &(&self.im * &o.re),
        }
    }

    pub fn conj(&self) -> Phase {
        Phase { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn is_one(&self) -> bool {
        self.re == Exact::one() && self.im.is_zero()
    }
}

/// Weighted shift `B_w` or `F_w` on a Köthe space, possibly as an
/// `stride`-fold power and multiplied by a unimodular phase.
#[derive(Clone, Debug, PartialEq)]
pub struct ShiftOperator {
    pub direction: Direction,
    pub weights: WeightSequence,
    pub space: SpaceSpec,
    pub stride: u32,
    pub phase: Phase,
}

impl ShiftOperator {
    pub fn new(direction: Direction, weights: WeightSequence, space: SpaceSpec) -> Result<Self> {
        if let Some(ix) = weights.declared_index_set() {
            if ix != space.index_set() {
                return Err(Error::IncompatibleIndexSets { space: space.index_set().to_string(), other: ix.to_string() });
            }
        }
        Ok(ShiftOperator { direction, weights, space, stride: 1, phase: Phase::default() })
    }

    pub fn backward(weights: WeightSequence, space: SpaceSpec) -> Result<Self> {
        Self::new(Direction::Backward, weights, space)
    }

    pub fn forward(weights: WeightSequence, space: SpaceSpec) -> Result<Self> {
        Self::new(Direction::Forward, weights, space)
    }

    pub fn index_set(&self) -> IndexSet {
        self.space.index_set()
    }

    pub fn is_bilateral(&self) -> bool {
        self.index_set().is_bilateral()
    }

    pub fn matrix(&self) -> &KotheMatrix {
        &self.space.matrix
    }

    /// `T^m` as an `m·stride`-step shift with grouped weights.
    pub fn power(&self, m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidSpec("power must be >= 1".into()));
        }
        let mut out = self.clone();
        out.stride = self.stride.checked_mul(m).ok_or_else(|| Error::Overflow("stride".into()))?;
        Ok(out)
    }

    /// Weight of one step of the (possibly grouped) shift at index `j`.
    pub fn grouped_weight(&self, j: i64) -> Result<Exact> {
        let s = self.stride as i64;
        match self.direction {
            Direction::Backward => self.weights.product(j - s + 1, j),
            Direction::Forward => self.weights.product(j, j + s - 1),
        }
    }

    /// `T^{-1}` as the opposite-direction shift with reciprocal weights.
    pub fn dual_form(&self) -> Result<Self> {
        if !self.is_bilateral() {
            return Err(Error::NotInvertible("unilateral shifts have no inverse".into()));
        }
        let shift = match self.direction {
            Direction::Backward => 1,
            Direction::Forward => -1,
        };
        let weights = match &self.weights {
            WeightSequence::Constant(c) => WeightSequence::Constant(c.recip()?),
            WeightSequence::Reciprocal { base, shift: s } if *s == -shift => (**base).clone(),
            w => WeightSequence::Reciprocal { base: Box::new(w.clone()), shift },
        };
        Ok(ShiftOperator {
            direction: self.direction.opposite(),
            weights,
            space: self.space.clone(),
            stride: self.stride,
            phase: self.phase.conj(),
        })
    }

    /// `T^n e_j = c · e_target`, or `None` when the image is zero.
    pub fn basis_image(&self, j: i64, n: i64) -> Result<Option<(i64, Exact)>> {
        if !self.index_set().contains(j) {
            return Err(Error::OutOfDomain { what: format!("index set {}", self.index_set()), index: j });
        }
        if n == 0 {
            return Ok(Some((j, Exact::one())));
        }
        if n < 0 {
            return self.dual_form()?.basis_image(j, -n);
        }
        let m = n.checked_mul(self.stride as i64).ok_or_else(|| Error::Overflow("orbit length".into()))?;
        match self.direction {
            Direction::Backward => {
                let target = j - m;
                if !self.index_set().contains(target) {
                    return Ok(None);
                }
                Ok(Some((target, self.weights.product(target + 1, j)?)))
            }
            Direction::Forward => Ok(Some((j + m, self.weights.product(j, j + m - 1)?))),
        }
    }

    /// Log-domain companion of [`basis_image`](Self::basis_image).
    pub fn basis_image_log(&self, j: i64, n: i64) -> Result<Option<(i64, LogMagnitude)>> {
        if n == 0 {
            return Ok(Some((j, LogMagnitude::ONE)));
        }
        if n < 0 {
            return self.dual_form()?.basis_image_log(j, -n);
        }
        let m = n.checked_mul(self.stride as i64).ok_or_else(|| Error::Overflow("orbit length".into()))?;
        match self.direction {
            Direction::Backward => {
                let target = j - m;
                if !self.index_set().contains(target) {
                    return Ok(None);
                }
                Ok(Some((target, self.weights.log_product(target + 1, j)?)))
            }
            Direction::Forward => Ok(Some((j + m, self.weights.log_product(j, j + m - 1)?))),
        }
    }

    /// `T^n x`, exactly.
    pub fn apply(&self, x: &SparseVector, n: i64) -> Result<SparseVector> {
        let mut out = SparseVector::zero();
        for (j, c) in x.iter() {
            if let Some((t, w)) = self.basis_image(j, n)? {
                out.add_at(t, c * &w);
            }
        }
        Ok(out)
    }

    /// `‖T^n e_{j0}‖_k` as one weight product times one matrix entry.
    pub fn basis_orbit_norm(&self, j0: i64, n: i64, k: u32) -> Result<Magnitude> {
        Ok(Magnitude::Exact(match self.basis_image(j0, n)? {
            None => Exact::zero(),
            Some((t, w)) => w * self.space.matrix.entry(t, k)?,
        }))
    }

    pub fn basis_orbit_log(&self, j0: i64, n: i64, k: u32) -> Result<LogMagnitude> {
        Ok(match self.basis_image_log(j0, n)? {
            None => LogMagnitude::ZERO,
            Some((t, w)) => w.mul(self.space.matrix.entry_log(t, k)?),
        })
    }

    /// `‖T^n x‖_k` through the seminorm of the image.
    pub fn orbit_norm(&self, x: &SparseVector, n: i64, k: u32) -> Result<Magnitude> {
        seminorm(&self.apply(x, n)?, k, &self.space)
    }

    /// Index range where orbit computations are defined (weights and matrix).
    pub fn domain(&self) -> (Option<i64>, Option<i64>) {
        let (wl, wh) = self.weights.domain();
        let (ml, mh) = self.space.matrix.domain();
        let lo = match (wl, ml) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, None) => a,
            (None, b) => b,
        };
        let hi = match (wh, mh) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, None) => a,
            (None, b) => b,
        };
        (lo, hi)
    }

    /// Attestation for the tails of both the weights and the matrix.
    pub fn tail_attestation(&self) -> Option<String> {
        let w = self.weights.tail_attestation()?;
        let m = self.space.matrix.tail_attestation()?;
        Some(format!("{w}; {m}"))
    }

    pub fn describe(&self) -> String {
        let d = match self.direction {
            Direction::Backward => "B",
            Direction::Forward => "F",
        };
        let pow = if self.stride > 1 { format!("^{}", self.stride) } else { String::new() };
        format!("{d}_w{pow} [{}] on {}", self.weights, self.space.label())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "direction": self.direction,
            "weights": self.weights.to_json(),
            "space": self.space.to_json(),
            "stride": self.stride,
            "phase": self.phase,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Parse(format!("operator spec: {m}"));
        let direction: Direction = v
            .get("direction")
            .and_then(Value::as_str)
            .ok_or_else(|| bad("missing `direction`"))?
            .parse()?;
        let weights = WeightSequence::from_json(v.get("weights").ok_or_else(|| bad("missing `weights`"))?)?;
        let space = SpaceSpec::from_json(v.get("space").ok_or_else(|| bad("missing `space`"))?)?;
        let mut op = ShiftOperator::new(direction, weights, space)?;
        if let Some(s) = v.get("stride") {
            let s = s.as_u64().filter(|s| *s >= 1).ok_or_else(|| bad("`stride` must be a positive integer"))?;
            op.stride = u32::try_from(s).map_err(|_| bad("`stride` too large"))?;
        }
        if let Some(p) = v.get("phase") {
            let p: Phase = serde_json::from_value(p.clone()).map_err(|e| bad(&e.to_string()))?;
            op.phase = Phase::new(p.re, p.im)?;
        }
        Ok(op)
    }
}

/// Diagonal conjugate `φ_d^{-1} T φ_d` acting on the space with seminorms `‖φ_d x‖_k`.
pub fn conjugate_by(op: &ShiftOperator, diag: Diagonal) -> Result<ShiftOperator> {
    if op.stride != 1 {
        return Err(Error::InvalidSpec("conjugate the base shift, then take powers".into()));
    }
    let lag = match op.direction {
        Direction::Backward => Lag::Prev,
        Direction::Forward => Lag::Next,
    };
    let weights = WeightSequence::Conjugated { base: Box::new(op.weights.clone()), diag: Box::new(diag.clone()), lag };
    let matrix = KotheMatrix::new(
        op.index_set(),
        MatrixFamily::Rescaled { base: Box::new(op.space.matrix.clone()), diag },
    )?;
    let space = SpaceSpec { name: op.space.name.as_ref().map(|n| format!("{n} (rescaled)")), matrix, p: op.space.p };
    Ok(ShiftOperator { direction: op.direction, weights, space, stride: 1, phase: op.phase.clone() })
}

/// The unweighted backward shift `B` on `X_v` with `‖x‖'_k = ‖φ_v x‖_k`.
///
/// `‖B^n x‖' = ‖B_w^n φ_v x‖` for every `x`; in particular the orbit of
/// `e_j` in `X_v` matches the orbit of `v_j e_j` in the original space.
pub fn conjugate_to_unweighted(op: &ShiftOperator) -> Result<(SpaceSpec, ShiftOperator)> {
    if op.direction != Direction::Backward || !op.is_bilateral() {
        return Err(Error::InvalidSpec("conjugacy to the unweighted shift needs a bilateral backward shift".into()));
    }
    let diag = Diagonal::from_weights(&op.weights);
    let matrix = KotheMatrix::new(
        IndexSet::Z,
        MatrixFamily::Rescaled { base: Box::new(op.space.matrix.clone()), diag },
    )?;
    let space = SpaceSpec { name: op.space.name.as_ref().map(|n| format!("{n} (X_v)")), matrix, p: op.space.p };
    let b = ShiftOperator {
        direction: Direction::Backward,
        weights: WeightSequence::Constant(Exact::one()),
        space: space.clone(),
        stride: op.stride,
        phase: op.phase.clone(),
    };
    Ok((space, b))
}
