//! Köthe matrices, sequence spaces `λ_p(A, J)` and their seminorms.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::numerics::{compensated_sum, Exact, LogMagnitude, Magnitude};
use crate::shifts::Diagonal;

/// Index set of the sequence space: `N = {1, 2, ...}` or `Z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IndexSet {
    N,
    Z,
}

impl IndexSet {
    pub fn contains(self, j: i64) -> bool {
        match self {
            IndexSet::N => j >= 1,
            IndexSet::Z => true,
        }
    }

    pub fn is_bilateral(self) -> bool {
        self == IndexSet::Z
    }

    /// Smallest admissible index, if any.
    pub fn lower(self) -> Option<i64> {
        match self {
            IndexSet::N => Some(1),
            IndexSet::Z => None,
        }
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IndexSet::N => "N",
            IndexSet::Z => "Z",
        })
    }
}

/// What happens to a tabulated matrix outside its window.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatrixTail {
    /// Rows beyond the table repeat the nearest boundary row.
    Constant,
    /// Entries beyond the table are undefined.
    Error,
}

#[derive(Clone, Debug, PartialEq)]
pub enum MatrixFamily {
    /// `a_{j,k} = c` with `c > 0`.
    Constant(Exact),
    /// `a_{j,k} = (|j| + 1)^k`.
    Polynomial,
    /// `a_{j,k} = 1` if `j > -k`, else `0`.
    HalfLine,
    /// `rows[j - offset][k - 1]`; levels past the last column repeat it.
    Table { offset: i64, rows: Vec<Vec<Exact>>, tail: MatrixTail },
    Expr(Expr),
    /// `|d_j| · a_{j,k}`: the transferred seminorms of a diagonal conjugacy.
    Rescaled { base: Box<KotheMatrix>, diag: Diagonal },
}

#[derive(Clone, Debug, PartialEq)]
pub struct KotheMatrix {
    pub index_set: IndexSet,
    pub family: MatrixFamily,
}

impl KotheMatrix {
    pub fn new(index_set: IndexSet, family: MatrixFamily) -> Result<Self> {
        if let MatrixFamily::Constant(c) = &family {
            if !c.is_positive() {
                return Err(Error::InvalidSpec("constant matrix entry must be positive".into()));
            }
        }
        if let MatrixFamily::Table { rows, .. } = &family {
            if rows.is_empty() || rows.iter().any(|r| r.is_empty()) {
                return Err(Error::InvalidSpec("matrix table rows must be nonempty".into()));
            }
            for r in rows {
                if r.iter().any(|x| x.inner() < &num_rational::BigRational::from_integer(0.into())) {
                    return Err(Error::InvalidSpec("matrix entries must be nonnegative".into()));
                }
                if r.windows(2).any(|w| w[0] > w[1]) {
                    return Err(Error::InvalidSpec("matrix rows must be nondecreasing in k".into()));
                }
            }
        }
        Ok(KotheMatrix { index_set, family })
    }

    /// `a_{j,k}` exactly.
    pub fn entry(&self, j: i64, k: u32) -> Result<Exact> {
        debug_assert!(k >= 1);
        match &self.family {
            MatrixFamily::Constant(c) => Ok(c.clone()),
            MatrixFamily::Polynomial => Exact::from_int(j.abs() + 1).powi(k as i64),
            MatrixFamily::HalfLine => Ok(if j > -(k as i64) { Exact::one() } else { Exact::zero() }),
            MatrixFamily::Table { offset, rows, tail } => {
                let row = table_row(rows, *offset, *tail, j)?;
                let idx = (k as usize - 1).min(row.len() - 1);
                Ok(row[idx].clone())
            }
            MatrixFamily::Expr(e) => {
                let v = e.eval(j, k)?;
                if v.inner() < &num_rational::BigRational::from_integer(0.into()) {
                    return Err(Error::InvalidSpec(format!("matrix expression is negative at j={j}, k={k}")));
                }
                Ok(v)
            }
            MatrixFamily::Rescaled { base, diag } => Ok(base.entry(j, k)? * diag.value(j)?.abs()),
        }
    }

    /// `log2 a_{j,k}`, `-inf` for a zero entry.
    pub fn entry_log2(&self, j: i64, k: u32) -> Result<f64> {
        Ok(match &self.family {
            MatrixFamily::Constant(c) => c.to_log().log2(),
            MatrixFamily::Polynomial => k as f64 * ((j.unsigned_abs() + 1) as f64).log2(),
            MatrixFamily::HalfLine => {
                if j > -(k as i64) {
                    0.0
                } else {
                    f64::NEG_INFINITY
                }
            }
            MatrixFamily::Rescaled { base, diag } => {
                let b = base.entry_log2(j, k)?;
                if b == f64::NEG_INFINITY {
                    b
                } else {
                    b + diag.log2_value(j)?
                }
            }
            _ => self.entry(j, k)?.to_log().log2(),
        })
    }

    pub fn entry_log(&self, j: i64, k: u32) -> Result<LogMagnitude> {
        match &self.family {
            MatrixFamily::Polynomial => LogMagnitude::from_f64((j.unsigned_abs() + 1) as f64).pow_int(k as i64),
            MatrixFamily::Rescaled { base, diag } => Ok(base.entry_log(j, k)?.mul(diag.log_value(j)?)),
            MatrixFamily::Constant(_) | MatrixFamily::HalfLine => Ok(LogMagnitude::from_log2(self.entry_log2(j, k)?)),
            _ => Ok(self.entry(j, k)?.to_log()),
        }
    }

    /// Whether the family is closed-form with a tail profile known to be
    /// eventually monotone in `j`; `None` for tables without continuation and
    /// free-form expressions.
    pub fn tail_attestation(&self) -> Option<String> {
        match &self.family {
            MatrixFamily::Constant(_) => Some("matrix constant in j".into()),
            MatrixFamily::Polynomial => Some("matrix monotone in |j|".into()),
            MatrixFamily::HalfLine => Some("matrix constant on each side of -k".into()),
            MatrixFamily::Table { tail: MatrixTail::Constant, .. } => Some("matrix constant beyond table".into()),
            MatrixFamily::Table { tail: MatrixTail::Error, .. } | MatrixFamily::Expr(_) => None,
            MatrixFamily::Rescaled { base, diag } => {
                let b = base.tail_attestation()?;
                let d = diag.tail_attestation()?;
                Some(format!("{b}; {d}"))
            }
        }
    }

    /// Index range on which entries are defined.
    pub fn domain(&self) -> (Option<i64>, Option<i64>) {
        let (mut lo, mut hi) = match &self.family {
            MatrixFamily::Table { offset, rows, tail: MatrixTail::Error } => {
                (Some(*offset), Some(*offset + rows.len() as i64 - 1))
            }
            MatrixFamily::Rescaled { base, diag } => {
                let (bl, bh) = base.domain();
                let (dl, dh) = diag.domain();
                (max_opt(bl, dl), min_opt(bh, dh))
            }
            _ => (None, None),
        };
        if let Some(l) = self.index_set.lower() {
            lo = Some(lo.map_or(l, |x| x.max(l)));
        }
        if let (Some(l), Some(h)) = (lo, hi) {
            if h < l {
                hi = Some(l - 1);
            }
        }
        (lo, hi)
    }

    pub fn to_json(&self) -> Value {
        let (family, params) = match &self.family {
            MatrixFamily::Constant(c) => ("constant", json!({ "value": c })),
            MatrixFamily::Polynomial => ("polynomial", json!({})),
            MatrixFamily::HalfLine => ("halfline", json!({})),
            MatrixFamily::Table { offset, rows, tail } => {
                ("table", json!({ "offset": offset, "rows": rows, "tail": tail }))
            }
            MatrixFamily::Expr(e) => ("expr", json!({ "expr": e.to_string() })),
            MatrixFamily::Rescaled { base, diag } => {
                ("rescaled", json!({ "base": base.to_json(), "diag": diag.to_json() }))
            }
        };
        json!({ "family": family, "params": params, "index_set": self.index_set })
    }
}

fn max_opt(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.max(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

fn min_opt(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

fn table_row(rows: &[Vec<Exact>], offset: i64, tail: MatrixTail, j: i64) -> Result<&Vec<Exact>> {
    let last = offset + rows.len() as i64 - 1;
    if j < offset || j > last {
        if tail == MatrixTail::Error {
            return Err(Error::OutOfDomain { what: "matrix table".into(), index: j });
        }
        return Ok(if j < offset { &rows[0] } else { &rows[rows.len() - 1] });
    }
    Ok(&rows[(j - offset) as usize])
}

/// `p = 0` selects the sup seminorm, `p >= 1` the power sum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Exponent(f64);

impl Exponent {
    pub const SUP: Exponent = Exponent(0.0);

    pub fn new(p: f64) -> Result<Self> {
        if p == 0.0 || (p.is_finite() && p >= 1.0) {
            Ok(Exponent(p))
        } else {
            Err(Error::InvalidSpec(format!("exponent must be 0 or >= 1, got {p}")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_sup(self) -> bool {
        self.0 == 0.0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpaceSpec {
    pub name: Option<String>,
    pub matrix: KotheMatrix,
    pub p: Exponent,
}

impl SpaceSpec {
    pub fn new(matrix: KotheMatrix, p: f64) -> Result<Self> {
        Ok(SpaceSpec { name: None, matrix, p: Exponent::new(p)? })
    }

    pub fn index_set(&self) -> IndexSet {
        self.matrix.index_set
    }

    pub fn label(&self) -> String {
        self.name.clone().unwrap_or_else(|| "custom".into())
    }

    pub fn to_json(&self) -> Value {
        let mut v = self.matrix.to_json();
        v["p"] = json!(self.p.value());
        if let Some(n) = &self.name {
            v["preset"] = json!(n);
        }
        v
    }

    /// Parses the JSON space format, or a preset shorthand when given a string.
    pub fn from_json(v: &Value) -> Result<Self> {
        if let Some(s) = v.as_str() {
            return preset(s);
        }
        let bad = |m: &str| Error::Parse(format!("space spec: {m}"));
        let obj = v.as_object().ok_or_else(|| bad("expected an object"))?;
        if let Some(name) = obj.get("preset").and_then(Value::as_str) {
            if obj.get("family").is_none() {
                return preset(name);
            }
        }
        let family = obj.get("family").and_then(Value::as_str).ok_or_else(|| bad("missing `family`"))?;
        let params = obj.get("params").cloned().unwrap_or_else(|| json!({}));
        let index_set = match obj.get("index_set").and_then(Value::as_str).unwrap_or("Z") {
            "N" => IndexSet::N,
            "Z" => IndexSet::Z,
            other => return Err(bad(&format!("unknown index set {other:?}"))),
        };
        let p = match obj.get("p") {
            None => 1.0,
            Some(x) => x.as_f64().ok_or_else(|| bad("`p` must be a number"))?,
        };
        let fam = match family {
            "constant" => {
                let c = params.get("value").cloned().unwrap_or(json!(1));
                MatrixFamily::Constant(serde_json::from_value(c).map_err(|e| bad(&e.to_string()))?)
            }
            "polynomial" => MatrixFamily::Polynomial,
            "halfline" => MatrixFamily::HalfLine,
            "table" => {
                let offset = params.get("offset").and_then(Value::as_i64).ok_or_else(|| bad("table needs `offset`"))?;
                let rows: Vec<Vec<Exact>> = serde_json::from_value(params.get("rows").cloned().unwrap_or(Value::Null))
                    .map_err(|e| bad(&format!("table rows: {e}")))?;
                let tail: MatrixTail = match params.get("tail") {
                    None => return Err(bad("tabulated matrices must declare a `tail` rule")),
                    Some(t) => serde_json::from_value(t.clone()).map_err(|e| bad(&e.to_string()))?,
                };
                MatrixFamily::Table { offset, rows, tail }
            }
            "expr" => {
                let src = params.get("expr").and_then(Value::as_str).ok_or_else(|| bad("expr needs `expr`"))?;
                MatrixFamily::Expr(Expr::parse(src)?)
            }
            other => {
                if let Ok(mut sp) = preset(other) {
                    if obj.get("p").is_some() {
                        sp.p = Exponent::new(p)?;
                    }
                    return Ok(sp);
                }
                return Err(bad(&format!("unknown family {other:?}")));
            }
        };
        let mut sp = SpaceSpec::new(KotheMatrix::new(index_set, fam)?, p)?;
        sp.name = obj.get("preset").and_then(Value::as_str).map(str::to_string);
        Ok(sp)
    }
}

impl FromStr for SpaceSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        preset(s)
    }
}

/// Preset catalog: `c0_Z`, `lp_Z:p`, `c0_N`, `lp_N:p`, `s_Z`, `halfline_Z[:p]`.
///
/// `lp_Z(2)` is accepted as a spelling of `lp_Z:2`.
pub fn preset(name: &str) -> Result<SpaceSpec> {
    let raw = name.trim();
    let (base, arg) = if let Some((b, a)) = raw.split_once(':') {
        (b, Some(a))
    } else if let (Some(open), true) = (raw.find('('), raw.ends_with(')')) {
        (&raw[..open], Some(&raw[open + 1..raw.len() - 1]))
    } else {
        (raw, None)
    };
    let parse_p = |a: Option<&str>, default: Option<f64>| -> Result<f64> {
        match a {
            Some(s) => s.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad exponent in {raw:?}"))),
            None => default.ok_or_else(|| Error::Parse(format!("preset {base} needs an exponent, e.g. {base}:2"))),
        }
    };
    let one = || MatrixFamily::Constant(Exact::one());
    let (index_set, family, p, canonical) = match base {
        "c0_Z" => (IndexSet::Z, one(), 0.0, "c0_Z".to_string()),
        "c0_N" => (IndexSet::N, one(), 0.0, "c0_N".to_string()),
        "lp_Z" => {
            let p = parse_p(arg, None)?;
            (IndexSet::Z, one(), p, format!("lp_Z:{p}"))
        }
        "lp_N" => {
            let p = parse_p(arg, None)?;
            (IndexSet::N, one(), p, format!("lp_N:{p}"))
        }
        "s_Z" => (IndexSet::Z, MatrixFamily::Polynomial, parse_p(arg, Some(1.0))?, "s_Z".to_string()),
        "halfline_Z" => {
            let p = parse_p(arg, Some(1.0))?;
            (IndexSet::Z, MatrixFamily::HalfLine, p, format!("halfline_Z:{p}"))
        }
        _ => return Err(Error::UnknownPreset(raw.to_string())),
    };
    if (base == "lp_Z" || base == "lp_N") && p < 1.0 {
        return Err(Error::InvalidSpec(format!("ℓ^p needs p >= 1, got {p}")));
    }
    let mut sp = SpaceSpec::new(KotheMatrix::new(index_set, family)?, p)?;
    sp.name = Some(canonical);
    Ok(sp)
}

/// Names of the presets used by test batteries.
pub fn preset_names() -> &'static [&'static str] {
    &["c0_Z", "lp_Z:1", "lp_Z:2", "c0_N", "lp_N:1", "s_Z", "halfline_Z"]
}

/// Finitely supported vector with nonzero exact coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseVector {
    coeffs: BTreeMap<i64, Exact>,
}

impl SparseVector {
    pub fn zero() -> Self {
        SparseVector::default()
    }

    /// Canonical vector `e_j`.
    pub fn basis(j: i64) -> Self {
        let mut v = SparseVector::zero();
        v.coeffs.insert(j, Exact::one());
        v
    }

    pub fn from_pairs<I: IntoIterator<Item = (i64, Exact)>>(pairs: I) -> Self {
        let mut v = SparseVector::zero();
        for (j, c) in pairs {
            v.add_at(j, c);
        }
        v
    }

    pub fn add_at(&mut self, j: i64, c: Exact) {
        let entry = self.coeffs.entry(j).or_insert_with(Exact::zero);
        *entry += &c;
        if entry.is_zero() {
            self.coeffs.remove(&j);
        }
    }

    pub fn get(&self, j: i64) -> Exact {
        self.coeffs.get(&j).cloned().unwrap_or_else(Exact::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &Exact)> {
        self.coeffs.iter().map(|(j, c)| (*j, c))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, s: &Exact) -> SparseVector {
        SparseVector::from_pairs(self.iter().map(|(j, c)| (j, c * s)))
    }
}

impl fmt::Display for SparseVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "0");
        }
        for (i, (j, c)) in self.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if c == &Exact::one() {
                write!(f, "e_{j}")?;
            } else {
                write!(f, "{c}·e_{j}")?;
            }
        }
        Ok(())
    }
}

/// `‖x‖_k` on the given space.
///
/// Exact when `p ∈ {0, 1}` or `x` has at most one nonzero coordinate.
pub fn seminorm(x: &SparseVector, k: u32, space: &SpaceSpec) -> Result<Magnitude> {
    if k == 0 {
        return Err(Error::InvalidSpec("seminorm level must be >= 1".into()));
    }
    let mut terms = Vec::with_capacity(x.len());
    for (j, c) in x.iter() {
        if !space.index_set().contains(j) {
            return Err(Error::OutOfDomain { what: format!("index set {}", space.index_set()), index: j });
        }
        terms.push(space.matrix.entry(j, k)? * c.abs());
    }
    if terms.is_empty() {
        return Ok(Magnitude::Exact(Exact::zero()));
    }
    if terms.len() == 1 {
        return Ok(Magnitude::Exact(terms.pop().expect("one term")));
    }
    let p = space.p.value();
    if space.p.is_sup() {
        return Ok(Magnitude::Exact(terms.into_iter().max().expect("nonempty")));
    }
    if p == 1.0 {
        return Ok(Magnitude::Exact(terms.into_iter().sum()));
    }
    let powered: Vec<LogMagnitude> = terms.iter().map(|t| t.to_log().powf(p)).collect();
    Ok(Magnitude::Log(compensated_sum(&powered).powf(1.0 / p)))
}

/// `I_k ∩ [lo, hi]`, intersected with the index set.
pub fn index_support(space: &SpaceSpec, k: u32, lo: i64, hi: i64) -> Result<Vec<i64>> {
    let mut out = Vec::new();
    for j in lo..=hi {
        if space.index_set().contains(j) && !space.matrix.entry(j, k)?.is_zero() {
            out.push(j);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn seminorm_examples() {
        let s = preset("s_Z").unwrap();
        assert_eq!(seminorm(&SparseVector::basis(5), 2, &s).unwrap(), Magnitude::Exact(Exact::from_int(36)));
        let l1 = preset("lp_Z:1").unwrap();
        let x = SparseVector::from_pairs([(0, Exact::one()), (1, Exact::one())]);
        assert_eq!(seminorm(&x, 1, &l1).unwrap(), Magnitude::Exact(Exact::from_int(2)));
        let l2 = preset("lp_Z(2)").unwrap();
        let x = SparseVector::from_pairs([(0, Exact::from_int(3)), (1, Exact::from_int(4))]);
        assert!((seminorm(&x, 1, &l2).unwrap().to_log().to_f64() - 5.0).abs() < 1e-12);
        let c0 = preset("c0_Z").unwrap();
        assert_eq!(seminorm(&x, 3, &c0).unwrap(), Magnitude::Exact(Exact::from_int(4)));
    }

    #[test]
    fn support_examples() {
        let h = preset("halfline_Z").unwrap();
        assert_eq!(index_support(&h, 2, -5, 5).unwrap(), (-1..=5).collect::<Vec<_>>());
        let c = preset("c0_Z").unwrap();
        assert_eq!(index_support(&c, 4, -3, 3).unwrap(), (-3..=3).collect::<Vec<_>>());
        let s = preset("s_Z").unwrap();
        assert_eq!(index_support(&s, 1, -2, 2).unwrap(), (-2..=2).collect::<Vec<_>>());
        let n = preset("c0_N").unwrap();
        assert_eq!(index_support(&n, 1, -2, 2).unwrap(), vec![1, 2]);
    }

    #[test]
    fn preset_catalog() {
        let s = preset("s_Z").unwrap();
        assert_eq!(s.matrix.family, MatrixFamily::Polynomial);
        assert_eq!(s.p.value(), 1.0);
        let l = preset("lp_Z(2)").unwrap();
        assert_eq!(l.matrix.family, MatrixFamily::Constant(Exact::one()));
        assert_eq!(l.p.value(), 2.0);
        assert_eq!(preset("halfline_Z:3").unwrap().p.value(), 3.0);
        assert!(matches!(preset("bogus"), Err(Error::UnknownPreset(_))));
        assert!(preset("lp_Z").is_err());
        assert!(preset("lp_Z:0.5").is_err());
    }

    #[test]
    fn json_round_trip() {
        for name in preset_names() {
            let sp = preset(name).unwrap();
            let back = SpaceSpec::from_json(&sp.to_json()).unwrap();
            assert_eq!(back.matrix, sp.matrix);
            assert_eq!(back.p, sp.p);
        }
        let v = json!({"family": "expr", "params": {"expr": "(abs(j)+1)^k"}, "p": 0, "index_set": "Z"});
        let sp = SpaceSpec::from_json(&v).unwrap();
        assert_eq!(sp.matrix.entry(-2, 2).unwrap(), Exact::from_int(9));
        let t = json!({"family": "table", "params": {"offset": -1, "rows": [["1","2"],["1","1"],["0","1"]]}, "p": 1});
        assert!(SpaceSpec::from_json(&t).is_err(), "table without a tail rule");
        let t = json!({"family": "table", "params": {"offset": -1, "rows": [["1","2"],["1","1"],["0","1"]], "tail": "error"}, "p": 1});
        let sp = SpaceSpec::from_json(&t).unwrap();
        assert_eq!(sp.matrix.entry(-1, 5).unwrap(), Exact::from_int(2));
        assert!(sp.matrix.entry(2, 1).is_err());
        let bad = json!({"family": "table", "params": {"offset": 0, "rows": [["2","1"]], "tail": "constant"}, "p": 1});
        assert!(SpaceSpec::from_json(&bad).is_err(), "decreasing in k");
    }

    proptest! {
        #[test]
        fn presets_monotone_in_k(j in -200i64..200, k in 1u32..6, idx in 0usize..7) {
            let sp = preset(preset_names()[idx]).unwrap();
            if sp.index_set().contains(j) {
                prop_assert!(sp.matrix.entry(j, k).unwrap() <= sp.matrix.entry(j, k + 1).unwrap());
            }
        }

        #[test]
        fn seminorm_of_basis_vector_is_entry(j in -200i64..200, k in 1u32..6, idx in 0usize..7) {
            let sp = preset(preset_names()[idx]).unwrap();
            if sp.index_set().contains(j) {
                let s = seminorm(&SparseVector::basis(j), k, &sp).unwrap();
                prop_assert_eq!(s, Magnitude::Exact(sp.matrix.entry(j, k).unwrap()));
                let l = sp.matrix.entry_log2(j, k).unwrap();
                let e = sp.matrix.entry(j, k).unwrap().to_log().log2();
                prop_assert!(l == e || (l - e).abs() < 1e-12);
            }
        }

        #[test]
        fn sup_and_sum_agree_on_single_support(j in -50i64..50, c in -1000i64..1000, k in 1u32..5) {
            prop_assume!(c != 0);
            let x = SparseVector::from_pairs([(j, Exact::from_int(c))]);
            let mut s0 = preset("s_Z").unwrap();
            s0.p = Exponent::SUP;
            let s1 = preset("s_Z").unwrap();
            prop_assert_eq!(seminorm(&x, k, &s0).unwrap(), seminorm(&x, k, &s1).unwrap());
        }
    }
}
