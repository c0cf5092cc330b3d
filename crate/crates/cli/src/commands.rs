use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde_json::{json, Value};

use shiftlab::algebra::{run_props, suite_config, LawStatus};
use shiftlab::chaos::{cesaro_from_norms, distributional_from_norms, orbit_norms};
use shiftlab::criteria::{
    avg_expansive, avg_pos_expansive, expansive_basis_diagnostic, hierarchy_audit, mixing_check, pow2_grid, unif_expansive,
    unif_pos_expansive, HorizonConfig, Side, Verdict,
};
use shiftlab::shifts::{ShiftOperator, WeightSequence};
use shiftlab::spaces::{SpaceSpec, SparseVector};
use shiftlab::synthesis::{
    a_block, b_block, build_blocks_with, c_block, hypercyclicity_witness, verify_inequalities, SearchCaps,
};
use shiftlab::Exact;

use crate::args::{CheckArgs, Cli, Command, Criterion, DensityArgs, HorizonArgs, OperatorArgs, OrbitArgs, SynthArgs};
use crate::output::{emit, Report};

/// Exit status: 0 completed, 2 an audit or law failed.
pub fn run(cli: &Cli) -> Result<u8> {
    let (report, failed) = match &cli.command {
        Command::Check(a) => (check(a)?, false),
        Command::Synthesize(a) => synthesize(a)?,
        Command::Orbit(a) => (orbit(a)?, false),
        Command::Density(a) => (density(a)?, false),
        Command::Props(h) => props(h)?,
    };
    emit(cli, &report)?;
    Ok(if failed { 2 } else { 0 })
}

fn read_json(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| shiftlab::Error::Parse(format!("{}: {e}", path.display())).into())
}

fn load_operator(a: &OperatorArgs) -> Result<ShiftOperator> {
    let space = if Path::new(&a.space).is_file() {
        SpaceSpec::from_json(&read_json(Path::new(&a.space))?)?
    } else {
        a.space.parse()?
    };
    let weights: WeightSequence = if Path::new(&a.weights).is_file() {
        WeightSequence::from_json(&read_json(Path::new(&a.weights))?)?
    } else {
        a.weights.parse()?
    };
    if a.stride == 0 {
        bail!(shiftlab::Error::InvalidSpec("--stride must be >= 1".into()));
    }
    let op = ShiftOperator::new(a.side.parse()?, weights, space)?;
    Ok(if a.stride > 1 { op.power(a.stride)? } else { op })
}

fn horizon(h: &HorizonArgs, base: HorizonConfig) -> Result<HorizonConfig> {
    let mut cfg = base;
    if let Some(n) = h.n_max {
        cfg.n_max = n;
    }
    if let Some(w) = h.w {
        cfg.w = w;
    }
    if let Some(t) = h.grid_top {
        cfg.m_grid = pow2_grid(t);
    }
    if let Some(k) = h.k_max {
        cfg.k_max = k;
        cfg.l_max = cfg.l_max.max(k);
    }
    if let Some(l) = h.l_max {
        cfg.l_max = l;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn range(s: &str, what: &str) -> Result<(i64, i64)> {
    let (lo, hi) = s.split_once(':').with_context(|| format!("{what} must look like lo:hi"))?;
    let (lo, hi): (i64, i64) = (lo.trim().parse().context(what.to_string())?, hi.trim().parse().context(what.to_string())?);
    if lo > hi {
        bail!(shiftlab::Error::InvalidSpec(format!("{what}: empty range {s}")));
    }
    Ok((lo, hi))
}

fn parse_vector(s: &str) -> Result<SparseVector> {
    if let Some(j) = s.strip_prefix("e:") {
        return Ok(SparseVector::basis(j.trim().parse().context("basis index")?));
    }
    let mut pairs = Vec::new();
    for part in s.split(',').filter(|p| !p.trim().is_empty()) {
        let (j, c) = part.split_once('=').with_context(|| format!("vector entry {part:?} must be j=c"))?;
        pairs.push((j.trim().parse::<i64>().context("vector index")?, c.trim().parse::<Exact>()?));
    }
    let x = SparseVector::from_pairs(pairs);
    if x.is_empty() {
        bail!(shiftlab::Error::InvalidSpec("vector is zero".into()));
    }
    Ok(x)
}

fn op_config(a: &OperatorArgs, op: &ShiftOperator) -> Value {
    json!({ "operator": op.to_json(), "description": op.describe(), "space_arg": a.space, "weights_arg": a.weights })
}

fn verdict_row(v: &Verdict) -> Vec<String> {
    let last = v.crossings.iter().rev().find(|c| c.first_n.is_some());
    vec![
        v.criterion.clone(),
        v.kind.to_string(),
        v.property.clone().unwrap_or_default(),
        v.k.map(|k| k.to_string()).unwrap_or_default(),
        v.l.map(|l| l.to_string()).unwrap_or_default(),
        v.branch.map(|b| b.to_string()).unwrap_or_default(),
        v.upe.map(|u| u.to_string()).unwrap_or_default(),
        last.map(|c| c.m.to_string()).unwrap_or_default(),
        last.and_then(|c| c.first_n).map(|n| n.to_string()).unwrap_or_default(),
        v.notes.join(" | "),
    ]
}

fn check(a: &CheckArgs) -> Result<Report> {
    let op = load_operator(&a.op)?;
    let cfg = horizon(&a.horizon, HorizonConfig::default())?;
    let ape_side: Side = a.ape_side.parse()?;
    let bil = op.is_bilateral();
    let mut verdicts: Vec<Verdict> = Vec::new();
    let mut extra = serde_json::Map::new();
    let want = |c: Criterion| a.criterion == c || a.criterion == Criterion::All;
    if a.criterion == Criterion::Hierarchy {
        let h = hierarchy_audit(&op, &cfg)?;
        verdicts.extend([h.ue.clone(), h.ae.clone(), h.ediag.clone()]);
        verdicts.extend(h.mixing.clone());
        extra.insert("violations".into(), json!(h.violations));
    }
    if want(Criterion::Ae) && bil {
        verdicts.push(avg_expansive(&op, &cfg)?);
    }
    if want(Criterion::Ape) {
        if a.criterion == Criterion::All {
            verdicts.push(avg_pos_expansive(&op, Side::Op, &cfg)?);
            if bil {
                verdicts.push(avg_pos_expansive(&op, Side::Inverse, &cfg)?);
            }
        } else {
            verdicts.push(avg_pos_expansive(&op, ape_side, &cfg)?);
        }
    }
    if want(Criterion::Ue) {
        if bil || a.criterion == Criterion::Ue {
            let (p, v) = unif_expansive(&op, &cfg)?;
            extra.insert("ue_property".into(), json!(p.map(|p| p.to_string())));
            verdicts.push(v);
        }
    }
    if want(Criterion::Upe) {
        verdicts.push(unif_pos_expansive(&op, &cfg)?);
    }
    if want(Criterion::Ediag) {
        verdicts.push(expansive_basis_diagnostic(&op, &cfg)?);
    }
    if want(Criterion::Mixing) && (bil || a.criterion == Criterion::Mixing) {
        verdicts.push(mixing_check(&op, &cfg)?);
    }
    if a.criterion == Criterion::Ae && !bil {
        verdicts.push(avg_expansive(&op, &cfg)?);
    }
    let mut result = json!({ "verdicts": verdicts.iter().map(Verdict::to_json).collect::<Vec<_>>() });
    for (k, v) in extra {
        result[k] = v;
    }
    let mut config = op_config(&a.op, &op);
    config["criterion"] = json!(format!("{:?}", a.criterion).to_lowercase());
    config["ape_side"] = json!(a.ape_side);
    config["horizon"] = serde_json::to_value(&cfg)?;
    Ok(Report {
        command: "check",
        config,
        result,
        header: ["criterion", "kind", "property", "k", "l", "branch", "upe", "M", "first_n", "notes"].map(String::from).to_vec(),
        rows: verdicts.iter().map(verdict_row).collect(),
    })
}

fn synthesize(a: &SynthArgs) -> Result<(Report, bool)> {
    let caps = SearchCaps { k_max: a.k_cap, i_max: a.i_cap };
    let (layout, weights) = build_blocks_with(a.blocks, caps)?;
    let audit = verify_inequalities(&layout, &weights, a.blocks)?;
    let threshold = Exact::pow2(a.threshold_log2);
    let hc = hypercyclicity_witness(&layout, &weights, a.blocks, a.t_range, &threshold)?;
    let t = weights.t_max() as i64;
    let (lo, hi) = match &a.window {
        Some(s) => range(s, "--window")?,
        None => (-t.min(40), (t + 1).min(41)),
    };
    let window: Vec<Value> = (lo..=hi)
        .map(|j| Ok(json!({ "j": j, "w": weights.sequence.value(j)?.to_string() })))
        .collect::<shiftlab::Result<_>>()?;
    let pass = |ok: bool| if ok { "pass" } else { "fail" };
    let eq = |c: &[shiftlab::synthesis::InequalityCheck]| -> Value {
        json!({
            "status": pass(c.iter().all(|x| x.holds || !x.required)),
            "checks": c.iter().map(|x| json!({
                "j": x.j, "lhs": x.lhs.to_string(), "rhs": x.rhs.to_string(),
                "lhs_decimal": x.lhs.to_decimal_string(6), "holds": x.holds, "required": x.required,
            })).collect::<Vec<_>>(),
        })
    };
    let shifted_ok = hc.shifted_ok();
    let audits = json!({
        "eq1": eq(&audit.eq1),
        "eq2": eq(&audit.eq2),
        "eq3": eq(&audit.eq3),
        "eq4": {
            "status": pass(audit.eq4.iter().all(|c| c.holds)),
            "ranges": audit.eq4.iter().map(|c| json!({
                "j": c.j, "n_lo": c.n_lo, "n_hi": c.n_hi, "min_average": c.min_average.to_string(),
                "min_average_decimal": c.min_average.to_decimal_string(6), "min_at": c.min_at, "violations": c.violations,
            })).collect::<Vec<_>>(),
        },
        "bounds": audit.bounds.iter().map(|x| json!({
            "name": x.name, "j": x.j, "lhs": x.lhs.to_string(), "rhs": x.rhs.to_string(), "holds": x.holds,
        })).collect::<Vec<_>>(),
        "hc": {
            "status": pass(hc.plateaus_ok()),
            "plateaus": hc.plateaus.iter().map(|p| json!({
                "j": p.j, "n_lo": p.n_lo, "n_hi": p.n_hi, "value": p.value.to_string(), "left": p.left_ok, "right": p.right_ok,
            })).collect::<Vec<_>>(),
            "shifted_status": pass(shifted_ok),
            "threshold": threshold.to_string(),
            "shifted": hc.shifted.iter().map(|s| json!({
                "t": s.t,
                "backward": s.backward.iter().map(Exact::to_string).collect::<Vec<_>>(),
                "forward": s.forward.iter().map(Exact::to_string).collect::<Vec<_>>(),
                "backward_certified": s.backward_certified,
                "forward_certified": s.forward_certified,
            })).collect::<Vec<_>>(),
        },
    });
    let templates: Vec<Value> = layout
        .blocks
        .iter()
        .map(|b| {
            let s = |v: Vec<Exact>| v.iter().map(Exact::to_string).collect::<Vec<_>>();
            if b.a + b.b <= 200 {
                json!({ "j": b.j, "A": s(a_block(b.j, b.k)), "B": s(b_block(b.r, b.i)), "C": s(c_block(b.j, b.k)) })
            } else {
                json!({ "j": b.j, "A_len": b.a, "B_len": b.b })
            }
        })
        .collect();
    if let Some(p) = &a.weights_out {
        let mut file = weights.sequence.to_json();
        if let WeightSequence::Table(t) = &weights.sequence {
            file = json!({
                "family": "table",
                "offset": t.offset(),
                "values": t.values().iter().map(Exact::to_string).collect::<Vec<_>>(),
                "tail": "error",
                "index_set": "Z",
                "block_templates": templates,
            });
        }
        fs::write(p, serde_json::to_string_pretty(&file)? + "\n").with_context(|| format!("writing {}", p.display()))?;
    }
    let layout_json: Vec<Value> = layout
        .blocks
        .iter()
        .map(|b| {
            json!({ "j": b.j, "k": b.k, "i": b.i, "r": b.r, "a": b.a, "b": b.b, "s": b.s, "t": b.t, "n": b.n,
                    "alpha": b.alpha.to_string(), "alpha_decimal": b.alpha.to_decimal_string(6) })
        })
        .collect();
    let failed = !(audit.all_pass() && hc.plateaus_ok());
    let rows = layout
        .blocks
        .iter()
        .map(|b| {
            vec![b.j.to_string(), b.k.to_string(), b.i.to_string(), b.r.to_string(), b.a.to_string(), b.b.to_string(),
                 b.s.to_string(), b.t.to_string(), b.n.to_string(), b.alpha.to_string()]
        })
        .collect();
    Ok((
        Report {
            command: "synthesize",
            config: json!({ "blocks": a.blocks, "caps": caps, "window": [lo, hi], "t_range": a.t_range, "threshold_log2": a.threshold_log2 }),
            result: json!({ "layout": layout_json, "block_templates": templates, "weights_window": window, "audits": audits }),
            header: ["j", "k", "i", "r", "a", "b", "s", "t", "n", "alpha"].map(String::from).to_vec(),
            rows,
        },
        failed,
    ))
}

fn fmt_log2(x: f64) -> String {
    if x == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{x:.12}")
    }
}

fn orbit(a: &OrbitArgs) -> Result<Report> {
    let op = load_operator(&a.op)?;
    let x = parse_vector(&a.vector)?;
    let (n_lo, n_hi) = range(&a.n, "--n")?;
    let (k_lo, k_hi) = range(&a.k, "--k")?;
    if k_lo < 1 {
        bail!(shiftlab::Error::InvalidSpec("--k levels start at 1".into()));
    }
    let ks: Vec<u32> = (k_lo as u32..=k_hi as u32).collect();
    let mut rows = Vec::new();
    let mut points = Vec::new();
    for n in n_lo..=n_hi {
        let mut row = vec![n.to_string()];
        let mut pt = json!({ "n": n });
        for &k in &ks {
            let m = op.orbit_norm(&x, n, k)?;
            let cell = if a.exact {
                m.exact().map(|e| e.to_string()).unwrap_or_else(|| m.to_string())
            } else {
                fmt_log2(m.log2())
            };
            pt[format!("k{k}")] = json!(cell);
            row.push(cell);
        }
        rows.push(row);
        points.push(pt);
    }
    let col = if a.exact { "norm" } else { "log2_norm" };
    let mut header = vec!["n".to_string()];
    header.extend(ks.iter().map(|k| format!("{col}_{k}")));
    let mut config = op_config(&a.op, &op);
    config["vector"] = json!(x.to_string());
    config["n"] = json!([n_lo, n_hi]);
    config["k"] = json!([k_lo, k_hi]);
    config["exact"] = json!(a.exact);
    Ok(Report { command: "orbit", config, result: json!({ "columns": header, "points": points }), header, rows })
}

fn density(a: &DensityArgs) -> Result<Report> {
    let op = load_operator(&a.op)?;
    let side: Side = a.orbit.parse()?;
    if a.n_max == 0 {
        bail!(shiftlab::Error::InvalidSpec("--n-max must be >= 1".into()));
    }
    let large: Vec<Exact> = a.large.iter().map(|s| s.parse()).collect::<shiftlab::Result<_>>()?;
    let small: Vec<Exact> = a.small.iter().map(|s| s.parse()).collect::<shiftlab::Result<_>>()?;
    let norms = orbit_norms(&op, a.base, side, 1, a.n_max)?;
    let report = distributional_from_norms(&norms, a.base, side, &large, &small)?;
    let ces = cesaro_from_norms(&norms, a.base, 1);
    let mut header = vec!["n".to_string(), "norm".into(), "log2_norm".into(), "running_average".into()];
    header.extend(small.iter().map(|t| format!("ratio_small({t})")));
    header.extend(large.iter().map(|k| format!("ratio_large({k})")));
    let mut small_count = vec![0i64; small.len()];
    let mut large_count = vec![0i64; large.len()];
    let mut rows = Vec::with_capacity(norms.len());
    for (i, x) in norms.iter().enumerate() {
        let n = i as i64 + 1;
        let mut row = vec![n.to_string(), x.to_decimal_string(6), fmt_log2(x.to_log().log2()), ces.averages[i].to_decimal_string(6)];
        for (c, t) in small_count.iter_mut().zip(&small) {
            *c += (x <= t) as i64;
            row.push(Exact::ratio(*c, n)?.to_decimal_string(6));
        }
        for (c, k) in large_count.iter_mut().zip(&large) {
            *c += (x >= k) as i64;
            row.push(Exact::ratio(*c, n)?.to_decimal_string(6));
        }
        rows.push(row);
    }
    let mut config = op_config(&a.op, &op);
    config["base"] = json!(a.base);
    config["orbit"] = json!(a.orbit);
    config["n_max"] = json!(a.n_max);
    config["K"] = json!(a.large);
    config["tau"] = json!(a.small);
    let result = json!({
        "report": report,
        "final_average": ces.averages.last().map(|x| x.to_string()),
    });
    Ok(Report { command: "density", config, result, header, rows })
}

fn props(h: &HorizonArgs) -> Result<(Report, bool)> {
    let cfg = horizon(h, suite_config())?;
    let rep = run_props(&cfg)?;
    let failed = rep.results.iter().any(|r| r.status == LawStatus::Fail);
    let rows = rep
        .results
        .iter()
        .map(|r| vec![r.system.clone(), r.law.clone(), serde_json::to_value(r.status).unwrap().as_str().unwrap_or("").to_string(), r.detail.clone()])
        .collect();
    Ok((
        Report {
            command: "props",
            config: json!({ "horizon": cfg }),
            result: json!({ "all_pass": !failed, "matrix": rep.matrix(), "results": rep.results }),
            header: ["system", "law", "status", "detail"].map(String::from).to_vec(),
            rows,
        },
        failed,
    ))
}
