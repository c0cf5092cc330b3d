use std::fmt;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::numerics::{Exact, LogMagnitude};
use crate::spaces::IndexSet;

/// Continuation rule for tabulated weights.
#[derive(Clone, Debug, PartialEq)]
pub enum WeightTail {
    Constant(Exact),
    Undefined,
}

/// Weights `w_j` for `j ∈ [offset, offset + len)`, with exact and log prefix products.
#[derive(Clone, Debug)]
pub struct WeightTable {
    offset: i64,
    values: Vec<Exact>,
    tail: WeightTail,
    index_set: IndexSet,
    label: Option<String>,
    prefix: Vec<Exact>,
    prefix_log: Vec<(i64, f64)>,
}

impl PartialEq for WeightTable {
    fn eq(&self, other: &Self) -> bool {
        self.offset == other.offset
            && self.values == other.values
            && self.tail == other.tail
            && self.index_set == other.index_set
    }
}

impl WeightTable {
    pub fn new(offset: i64, values: Vec<Exact>, tail: WeightTail, index_set: IndexSet) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidSpec("weight table is empty".into()));
        }
        let values: Vec<Exact> = values.into_iter().map(|v| v.abs()).collect();
        if let Some(pos) = values.iter().position(Exact::is_zero) {
            return Err(Error::InvalidSpec(format!("weight at index {} is zero", offset + pos as i64)));
        }
        if let WeightTail::Constant(c) = &tail {
            if c.is_zero() {
                return Err(Error::InvalidSpec("weight tail must be nonzero".into()));
            }
        }
        let tail = match tail {
            WeightTail::Constant(c) => WeightTail::Constant(c.abs()),
            t => t,
        };
        let mut prefix = Vec::with_capacity(values.len() + 1);
        let mut prefix_log = Vec::with_capacity(values.len() + 1);
        let mut acc = Exact::one();
        let (mut li, mut lf) = (0i64, 0.0f64);
        prefix.push(acc.clone());
        prefix_log.push((li, lf));
        for v in &values {
            acc *= v;
            prefix.push(acc.clone());
            let l = v.to_log();
            li += l.int_part();
            lf += l.frac_part();
            prefix_log.push((li, lf));
        }
        Ok(WeightTable { offset, values, tail, index_set, label: None, prefix, prefix_log })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn values(&self) -> &[Exact] {
        &self.values
    }

    pub fn tail(&self) -> &WeightTail {
        &self.tail
    }

    pub fn index_set(&self) -> IndexSet {
        self.index_set
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    fn last(&self) -> i64 {
        self.offset + self.values.len() as i64 - 1
    }

    fn value(&self, j: i64) -> Result<Exact> {
        if j < self.offset || j > self.last() {
            return match &self.tail {
                WeightTail::Constant(c) => Ok(c.clone()),
                WeightTail::Undefined => Err(self.out_of_domain(j)),
            };
        }
        Ok(self.values[(j - self.offset) as usize].clone())
    }

    fn out_of_domain(&self, j: i64) -> Error {
        Error::OutOfDomain { what: self.label.clone().unwrap_or_else(|| "weight table".into()), index: j }
    }

    /// Splits `[a, b]` into (left tail count, table range, right tail count).
    fn split(&self, a: i64, b: i64) -> Result<(i64, Option<(usize, usize)>, i64)> {
        let (lo, hi) = (self.offset, self.last());
        if self.tail == WeightTail::Undefined {
            if a < lo {
                return Err(self.out_of_domain(a));
            }
            if b > hi {
                return Err(self.out_of_domain(b));
            }
        }
        let left = (b.min(lo - 1) - a + 1).max(0);
        let right = (b - a.max(hi + 1) + 1).max(0);
        let (ta, tb) = (a.max(lo), b.min(hi));
        let mid = if ta <= tb { Some(((ta - lo) as usize, (tb - lo) as usize + 1)) } else { None };
        Ok((left, mid, right))
    }

    fn product(&self, a: i64, b: i64) -> Result<Exact> {
        let (l, mid, r) = self.split(a, b)?;
        let mut out = match mid {
            Some((s, e)) => self.prefix[e].checked_div(&self.prefix[s])?,
            None => Exact::one(),
        };
        if l + r > 0 {
            if let WeightTail::Constant(c) = &self.tail {
                out *= &c.powi(l + r)?;
            }
        }
        Ok(out)
    }

    fn log_product(&self, a: i64, b: i64) -> Result<LogMagnitude> {
        let (l, mid, r) = self.split(a, b)?;
        let mut out = match mid {
            Some((s, e)) => {
                let (ei, ef) = self.prefix_log[e];
                let (si, sf) = self.prefix_log[s];
                LogMagnitude::power_of_two(ei - si).mul(LogMagnitude::from_log2(ef - sf))
            }
            None => LogMagnitude::ONE,
        };
        if l + r > 0 {
            if let WeightTail::Constant(c) = &self.tail {
                out = out.mul(c.to_log().pow_int(l + r)?);
            }
        }
        Ok(out)
    }
}

/// Diagonal `d = (d_j)` used for conjugacies `x ↦ (d_j x_j)`.
#[derive(Clone, Debug, PartialEq)]
pub enum Diagonal {
    /// `v_0 = 1`, `v_{-j} = w_{-j+1}⋯w_0`, `v_j = 1/(w_1⋯w_j)`.
    Potential(Box<WeightSequence>),
    /// `d_j = s_j` for a given nonvanishing sequence.
    Pointwise(Box<WeightSequence>),
}

impl Diagonal {
    pub fn from_weights(w: &WeightSequence) -> Self {
        Diagonal::Potential(Box::new(w.clone()))
    }

    pub fn value(&self, j: i64) -> Result<Exact> {
        match self {
            Diagonal::Potential(w) => {
                if j <= 0 {
                    w.product(j + 1, 0)
                } else {
                    w.product(1, j)?.recip()
                }
            }
            Diagonal::Pointwise(s) => s.value(j),
        }
    }

    pub fn log_value(&self, j: i64) -> Result<LogMagnitude> {
        match self {
            Diagonal::Potential(w) => {
                if j <= 0 {
                    w.log_product(j + 1, 0)
                } else {
                    w.log_product(1, j)?.recip()
                }
            }
            Diagonal::Pointwise(s) => s.log_product(j, j),
        }
    }

    pub fn log2_value(&self, j: i64) -> Result<f64> {
        Ok(self.log_value(j)?.log2())
    }

    pub fn tail_attestation(&self) -> Option<String> {
        match self {
            Diagonal::Potential(w) => w.tail_attestation().map(|a| format!("diagonal from weights ({a})")),
            Diagonal::Pointwise(s) => s.tail_attestation().map(|a| format!("diagonal ({a})")),
        }
    }

    pub fn domain(&self) -> (Option<i64>, Option<i64>) {
        match self {
            Diagonal::Potential(w) => {
                let (lo, hi) = w.domain();
                (lo.map(|l| l - 1), hi)
            }
            Diagonal::Pointwise(s) => s.domain(),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Diagonal::Potential(w) => json!({ "kind": "potential", "weights": w.to_json() }),
            Diagonal::Pointwise(s) => json!({ "kind": "pointwise", "values": s.to_json() }),
        }
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let kind = v.get("kind").and_then(Value::as_str).unwrap_or("pointwise");
        match kind {
            "potential" => Ok(Diagonal::Potential(Box::new(WeightSequence::from_json(
                v.get("weights").ok_or_else(|| Error::Parse("diagonal needs `weights`".into()))?,
            )?))),
            "pointwise" => Ok(Diagonal::Pointwise(Box::new(WeightSequence::from_json(
                v.get("values").ok_or_else(|| Error::Parse("diagonal needs `values`".into()))?,
            )?))),
            other => Err(Error::Parse(format!("unknown diagonal kind {other:?}"))),
        }
    }
}

/// Which neighbour a conjugated weight divides by: `w_j d_j / d_{j-1}`
/// (backward shifts) or `w_j d_j / d_{j+1}` (forward shifts).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Lag {
    Prev,
    Next,
}

/// Nonzero weight magnitudes `|w_j|`.
#[derive(Clone, Debug, PartialEq)]
pub enum WeightSequence {
    Constant(Exact),
    /// `w_j = base^{|j|}`.
    Geometric { base: Exact },
    /// `w_j = left` for `j <= split`, `right` otherwise.
    Piecewise { left: Exact, right: Exact, split: i64 },
    Table(Arc<WeightTable>),
    /// `w'_j = 1 / w_{j + shift}`.
    Reciprocal { base: Box<WeightSequence>, shift: i64 },
    /// Weights of `φ_d^{-1} T φ_d`.
    Conjugated { base: Box<WeightSequence>, diag: Box<Diagonal>, lag: Lag },
}

fn nonzero(x: Exact, what: &str) -> Result<Exact> {
    if x.is_zero() {
        Err(Error::InvalidSpec(format!("{what} must be nonzero")))
    } else {
        Ok(x.abs())
    }
}

/// `Σ_{j=a}^{b} |j|`.
fn sum_abs(a: i64, b: i64) -> i128 {
    if a > b {
        return 0;
    }
    let tri = |n: i128| n * (n + 1) / 2;
    let (a, b) = (a as i128, b as i128);
    if a >= 0 {
        tri(b) - tri(a - 1)
    } else if b <= 0 {
        tri(-a) - tri(-b - 1)
    } else {
        tri(-a) + tri(b)
    }
}

impl WeightSequence {
    pub fn constant(c: Exact) -> Result<Self> {
        Ok(WeightSequence::Constant(nonzero(c, "constant weight")?))
    }

    pub fn geometric(base: Exact) -> Result<Self> {
        Ok(WeightSequence::Geometric { base: nonzero(base, "geometric base")? })
    }

    pub fn piecewise(left: Exact, right: Exact, split: i64) -> Result<Self> {
        Ok(WeightSequence::Piecewise { left: nonzero(left, "left weight")?, right: nonzero(right, "right weight")?, split })
    }

    pub fn table(t: WeightTable) -> Self {
        WeightSequence::Table(Arc::new(t))
    }

    /// `|w_j|`.
    pub fn value(&self, j: i64) -> Result<Exact> {
        match self {
            WeightSequence::Constant(c) => Ok(c.clone()),
            WeightSequence::Geometric { base } => base.powi(j.abs()),
            WeightSequence::Piecewise { left, right, split } => Ok(if j <= *split { left.clone() } else { right.clone() }),
            WeightSequence::Table(t) => t.value(j),
            WeightSequence::Reciprocal { base, shift } => base.value(j + shift)?.recip(),
            WeightSequence::Conjugated { base, diag, lag } => {
                let nb = match lag {
                    Lag::Prev => j - 1,
                    Lag::Next => j + 1,
                };
                Ok(base.value(j)? * diag.value(j)?.abs()).and_then(|x| x.checked_div(&diag.value(nb)?.abs()))
            }
        }
    }

    /// `∏_{j=a}^{b} |w_j|`; the empty product is 1.
    pub fn product(&self, a: i64, b: i64) -> Result<Exact> {
        if a > b {
            return Ok(Exact::one());
        }
        let len = b - a + 1;
        match self {
            WeightSequence::Constant(c) => c.powi(len),
            WeightSequence::Geometric { base } => {
                let s = sum_abs(a, b);
                let s = i64::try_from(s).map_err(|_| Error::Overflow("geometric exponent".into()))?;
                base.powi(s)
            }
            WeightSequence::Piecewise { left, right, split } => {
                let nl = (b.min(*split) - a + 1).max(0);
                Ok(left.powi(nl)? * right.powi(len - nl)?)
            }
            WeightSequence::Table(t) => t.product(a, b),
            WeightSequence::Reciprocal { base, shift } => base.product(a + shift, b + shift)?.recip(),
            WeightSequence::Conjugated { base, diag, lag } => {
                let p = base.product(a, b)?;
                let (num, den) = match lag {
                    Lag::Prev => (diag.value(b)?, diag.value(a - 1)?),
                    Lag::Next => (diag.value(a)?, diag.value(b + 1)?),
                };
                (p * num.abs()).checked_div(&den.abs())
            }
        }
    }

    /// `log2 ∏_{j=a}^{b} |w_j|`, in O(1) for closed-form families and tables.
    pub fn log_product(&self, a: i64, b: i64) -> Result<LogMagnitude> {
        if a > b {
            return Ok(LogMagnitude::ONE);
        }
        let len = b - a + 1;
        match self {
            WeightSequence::Constant(c) => c.to_log().pow_int(len),
            WeightSequence::Geometric { base } => {
                let s = sum_abs(a, b);
                let s = i64::try_from(s).map_err(|_| Error::Overflow("geometric exponent".into()))?;
                base.to_log().pow_int(s)
            }
            WeightSequence::Piecewise { left, right, split } => {
                let nl = (b.min(*split) - a + 1).max(0);
                Ok(left.to_log().pow_int(nl)?.mul(right.to_log().pow_int(len - nl)?))
            }
            WeightSequence::Table(t) => t.log_product(a, b),
            WeightSequence::Reciprocal { base, shift } => base.log_product(a + shift, b + shift)?.recip(),
            WeightSequence::Conjugated { base, diag, lag } => {
                let p = base.log_product(a, b)?;
                let (num, den) = match lag {
                    Lag::Prev => (diag.log_value(b)?, diag.log_value(a - 1)?),
                    Lag::Next => (diag.log_value(a)?, diag.log_value(b + 1)?),
                };
                p.mul(num).div(den)
            }
        }
    }

    pub fn log2_value(&self, j: i64) -> Result<f64> {
        Ok(self.log_product(j, j)?.log2())
    }

    /// Index range on which the weights are defined.
    pub fn domain(&self) -> (Option<i64>, Option<i64>) {
        match self {
            WeightSequence::Table(t) if t.tail == WeightTail::Undefined => (Some(t.offset), Some(t.last())),
            WeightSequence::Reciprocal { base, shift } => {
                let (lo, hi) = base.domain();
                (lo.map(|l| l - shift), hi.map(|h| h - shift))
            }
            WeightSequence::Conjugated { base, diag, lag } => {
                let (bl, bh) = base.domain();
                let (dl, dh) = diag.domain();
                let (dl, dh) = match lag {
                    Lag::Prev => (dl.map(|l| l + 1), dh),
                    Lag::Next => (dl, dh.map(|h| h - 1)),
                };
                (opt_max(bl, dl), opt_min(bh, dh))
            }
            _ => (None, None),
        }
    }

    /// Index set a table was built for; closed forms fit either.
    pub fn declared_index_set(&self) -> Option<IndexSet> {
        match self {
            WeightSequence::Table(t) => Some(t.index_set),
            WeightSequence::Reciprocal { base, .. } | WeightSequence::Conjugated { base, .. } => base.declared_index_set(),
            _ => None,
        }
    }

    pub fn tail_attestation(&self) -> Option<String> {
        match self {
            WeightSequence::Constant(_) => Some("weights constant".into()),
            WeightSequence::Geometric { .. } => Some("weights geometric in |j|".into()),
            WeightSequence::Piecewise { .. } => Some("weights constant on each side of the split".into()),
            WeightSequence::Table(t) => match t.tail {
                WeightTail::Constant(_) => Some("weights constant beyond table".into()),
                WeightTail::Undefined => None,
            },
            WeightSequence::Reciprocal { base, .. } => base.tail_attestation(),
            WeightSequence::Conjugated { base, diag, .. } => {
                Some(format!("{}; {}", base.tail_attestation()?, diag.tail_attestation()?))
            }
        }
    }

    /// Exact magnitudes on `[lo, hi]`.
    pub fn window(&self, lo: i64, hi: i64) -> Result<Vec<Exact>> {
        (lo..=hi).map(|j| self.value(j)).collect()
    }

    pub fn describe(&self) -> String {
        match self {
            WeightSequence::Constant(c) => format!("constant:{c}"),
            WeightSequence::Geometric { base } => format!("geometric:{base}"),
            WeightSequence::Piecewise { left, right, split } => format!("piecewise:{left},{right},{split}"),
            WeightSequence::Table(t) => t.label.clone().unwrap_or_else(|| format!("table[{}..{}]", t.offset, t.last())),
            WeightSequence::Reciprocal { base, shift } => format!("1/({})[j{:+}]", base.describe(), shift),
            WeightSequence::Conjugated { base, .. } => format!("conjugated({})", base.describe()),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            WeightSequence::Constant(c) => json!({ "family": "constant", "value": c }),
            WeightSequence::Geometric { base } => json!({ "family": "geometric", "base": base }),
            WeightSequence::Piecewise { left, right, split } => {
                json!({ "family": "piecewise", "left": left, "right": right, "split": split })
            }
            WeightSequence::Table(t) => {
                if let Some(blocks) = t.label.as_deref().and_then(|l| l.strip_prefix("blocks:")) {
                    if let Ok(n) = blocks.parse::<u64>() {
                        return json!({ "family": "blocks", "blocks": n });
                    }
                }
                let tail = match &t.tail {
                    WeightTail::Constant(c) => json!({ "constant": c }),
                    WeightTail::Undefined => json!("error"),
                };
                json!({ "family": "table", "offset": t.offset, "values": t.values, "tail": tail, "index_set": t.index_set })
            }
            WeightSequence::Reciprocal { base, shift } => {
                json!({ "family": "reciprocal", "base": base.to_json(), "shift": shift })
            }
            WeightSequence::Conjugated { base, diag, lag } => json!({
                "family": "conjugated",
                "base": base.to_json(),
                "diag": diag.to_json(),
                "lag": match lag { Lag::Prev => "prev", Lag::Next => "next" },
            }),
        }
    }

    /// Parses the JSON weight format (fields either flat or under `params`),
    /// or a shorthand string such as `constant:2`.
    pub fn from_json(v: &Value) -> Result<Self> {
        if let Some(s) = v.as_str() {
            return s.parse();
        }
        let bad = |m: &str| Error::Parse(format!("weight spec: {m}"));
        let obj = v.as_object().ok_or_else(|| bad("expected an object"))?;
        let family = obj.get("family").and_then(Value::as_str).ok_or_else(|| bad("missing `family`"))?;
        let params = obj.get("params").and_then(Value::as_object);
        let field = |name: &str| -> Option<&Value> { obj.get(name).or_else(|| params.and_then(|p| p.get(name))) };
        let exact = |name: &str| -> Result<Exact> {
            let raw = field(name).ok_or_else(|| bad(&format!("missing `{name}`")))?;
            serde_json::from_value(raw.clone()).map_err(|e| bad(&format!("`{name}`: {e}")))
        };
        let int = |name: &str| -> Result<i64> {
            field(name).and_then(Value::as_i64).ok_or_else(|| bad(&format!("missing integer `{name}`")))
        };
        match family {
            "constant" => WeightSequence::constant(exact("value")?),
            "geometric" => WeightSequence::geometric(exact("base")?),
            "piecewise" => WeightSequence::piecewise(exact("left")?, exact("right")?, int("split").unwrap_or(0)),
            "table" => {
                let values: Vec<Exact> = serde_json::from_value(field("values").cloned().unwrap_or(Value::Null))
                    .map_err(|e| bad(&format!("`values`: {e}")))?;
                let tail = match field("tail") {
                    None => return Err(bad("tabulated weights must declare a `tail` rule")),
                    Some(Value::String(s)) if s == "error" || s == "undefined" => WeightTail::Undefined,
                    Some(t) => {
                        let c = t.get("constant").ok_or_else(|| bad("tail must be \"error\" or {\"constant\": x}"))?;
                        WeightTail::Constant(serde_json::from_value(c.clone()).map_err(|e| bad(&e.to_string()))?)
                    }
                };
                let offset = int("offset")?;
                let index_set = match field("index_set").and_then(Value::as_str) {
                    Some("N") => IndexSet::N,
                    Some("Z") => IndexSet::Z,
                    Some(other) => return Err(bad(&format!("unknown index set {other:?}"))),
                    None => {
                        if offset >= 1 {
                            IndexSet::N
                        } else {
                            IndexSet::Z
                        }
                    }
                };
                Ok(WeightSequence::table(WeightTable::new(offset, values, tail, index_set)?))
            }
            "blocks" => {
                let n = int("blocks")?;
                if n < 1 {
                    return Err(bad("`blocks` must be >= 1"));
                }
                crate::synthesis::block_weights(n as usize)
            }
            "reciprocal" => Ok(WeightSequence::Reciprocal {
                base: Box::new(WeightSequence::from_json(field("base").ok_or_else(|| bad("missing `base`"))?)?),
                shift: int("shift")?,
            }),
            "conjugated" => Ok(WeightSequence::Conjugated {
                base: Box::new(WeightSequence::from_json(field("base").ok_or_else(|| bad("missing `base`"))?)?),
                diag: Box::new(Diagonal::from_json(field("diag").ok_or_else(|| bad("missing `diag`"))?)?),
                lag: match field("lag").and_then(Value::as_str) {
                    Some("next") => Lag::Next,
                    _ => Lag::Prev,
                },
            }),
            other => Err(bad(&format!("unknown family {other:?}"))),
        }
    }
}

fn opt_max(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.max(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

fn opt_min(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl std::str::FromStr for WeightSequence {
    type Err = Error;

    /// `constant:c`, `geometric:b`, `piecewise:left,right[,split]`, `blocks:J`.
    fn from_str(s: &str) -> Result<Self> {
        let (fam, arg) = s.split_once(':').ok_or_else(|| Error::Parse(format!("weight shorthand {s:?} needs `family:args`")))?;
        match fam.trim() {
            "constant" => WeightSequence::constant(arg.parse()?),
            "geometric" => WeightSequence::geometric(arg.parse()?),
            "piecewise" => {
                let parts: Vec<&str> = arg.split(',').collect();
                if parts.len() < 2 || parts.len() > 3 {
                    return Err(Error::Parse("piecewise needs left,right[,split]".into()));
                }
                let split = match parts.get(2) {
                    Some(p) => p.trim().parse().map_err(|_| Error::Parse(format!("bad split {p:?}")))?,
                    None => 0,
                };
                WeightSequence::piecewise(parts[0].parse()?, parts[1].parse()?, split)
            }
            "blocks" => {
                let n: usize = arg.trim().parse().map_err(|_| Error::Parse(format!("bad block count {arg:?}")))?;
                if n == 0 {
                    return Err(Error::Parse("block count must be >= 1".into()));
                }
                crate::synthesis::block_weights(n)
            }
            other => Err(Error::Parse(format!("unknown weight family {other:?}"))),
        }
    }
}

impl fmt::Display for WeightSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

/// `∏_{j ∈ [a, b]} |w_j|`, exact.
pub fn weight_product(w: &WeightSequence, a: i64, b: i64) -> Result<Exact> {
    w.product(a, b)
}
