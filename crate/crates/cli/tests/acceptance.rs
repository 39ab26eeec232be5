//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure.

#[path = "../../core/tests/props/mod.rs"]
mod props;

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use delta_core::text::{parse_expr, Scope};
use delta_core::DiffPoly;
use serde_json::{json, Value};

const BIN: &str = env!("CARGO_BIN_EXE_delta-reduce");
const PROPERTY_CASES: u32 = 10_000;

fn systems_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../systems")
}

struct Run {
    stdout: String,
    code: i32,
    elapsed: Duration,
}

fn cli(args: &[&str]) -> Run {
    let start = Instant::now();
    let out = Command::new(BIN).args(args).output().expect("binary runs");
    Run {
        stdout: String::from_utf8(out.stdout).expect("utf-8 output"),
        code: out.status.code().unwrap_or(-1),
        elapsed: start.elapsed(),
    }
}

fn reduce_json(file: &str) -> Run {
    let path = systems_dir().join(file);
    cli(&["reduce", path.to_str().expect("utf-8 path"), "--format", "json"])
}

fn scope() -> Scope {
    Scope::new(&["nu"], &["u", "v", "w", "u'", "v'", "w'", "p"])
}

fn poly(text: &str) -> DiffPoly {
    parse_expr(text, &scope()).unwrap_or_else(|e| panic!("{text}: {e}"))
}

/// `leader = rhs` as `leader - (rhs)`.
fn relation(leader: &str, rhs: &str) -> DiffPoly {
    &poly(leader) - &poly(rhs)
}

/// Chain elements of every branch, read back from the JSON solved forms.
fn chains(v: &Value) -> Result<Vec<Vec<DiffPoly>>, String> {
    let chains = v["chains"].as_array().ok_or("no chains in output")?;
    chains
        .iter()
        .map(|c| {
            c.as_array()
                .ok_or("chain is not an array")?
                .iter()
                .map(|e| match (e["leader"].as_str(), e["rhs"].as_str()) {
                    (Some(l), Some(r)) => Ok(relation(l, r)),
                    _ => Err("chain entry without leader/rhs".to_string()),
                })
                .collect()
        })
        .collect()
}

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn parse_json(run: &Run) -> Result<Value, String> {
    serde_json::from_str(&run.stdout).map_err(|e| format!("bad JSON: {e}"))
}

fn stokes_chain_golden(json_out: &mut Vec<String>) -> Outcome {
    let run = reduce_json("stokes3d.sys");
    json_out.push(run.stdout.clone());
    check(run.code == 0, || format!("exit code {}", run.code))?;
    let v = parse_json(&run)?;
    let got = chains(&v)?;
    check(got.len() == 1, || format!("{} branches", got.len()))?;
    let expected = [
        relation("u_x", "-v_y - w_z"),
        relation("p_xx", "-p_yy - p_zz"),
        relation("w_xx", "-w_yy - w_zz + 1/nu*(p_z + w_t)"),
        relation("v_xx", "-v_yy - v_zz + 1/nu*(p_y + v_t)"),
        relation("u_yy", "-u_zz + v_xy + w_xz + 1/nu*(p_x + u_t)"),
    ];
    let chain = &got[0];
    check(chain.len() == expected.len(), || {
        format!("{} chain elements", chain.len())
    })?;
    for e in &expected {
        check(chain.contains(e), || format!("missing {e}"))?;
    }
    let limit = Duration::from_secs(5);
    check(run.elapsed < limit, || format!("took {:?}", run.elapsed))?;
    Ok(format!("5 exact relations, {:.2?}", run.elapsed))
}

fn rans_stokes_relations(json_out: &mut Vec<String>) -> Outcome {
    let run = reduce_json("rans_stokes.sys");
    json_out.push(run.stdout.clone());
    check(run.code == 0, || format!("exit code {}", run.code))?;
    let v = parse_json(&run)?;
    let got = chains(&v)?;
    check(got.len() == 1, || format!("{} branches", got.len()))?;
    let lap = |f: &str| format!("({f}_xx + {f}_yy + {f}_zz)");
    let expected = [
        relation("u_x", "-v_y - w_z"),
        relation(
            "u'_xxx",
            "-u'_xyy - u'_xzz - v'_xxy - v'_yyy - v'_yzz - w'_xxz - w'_yyz - w'_zzz \
             + 1/nu*(p_xx + p_yy + p_zz + u'_tx + v'_ty + w'_tz)",
        ),
        relation(
            "w_xx",
            &format!("-w_yy - w_zz - {} + 1/nu*(p_z + w'_t + w_t)", lap("w'")),
        ),
        relation(
            "v_xx",
            &format!("-v_yy - v_zz - {} + 1/nu*(p_y + v'_t + v_t)", lap("v'")),
        ),
        relation(
            "u_yy",
            &format!("-u_zz + v_xy + w_xz - {} + 1/nu*(p_x + u'_t + u_t)", lap("u'")),
        ),
    ];
    let chain = &got[0];
    for e in &expected {
        let neg = -e;
        check(chain.iter().any(|c| c == e || *c == neg), || format!("missing {e}"))?;
    }
    let limit = Duration::from_secs(10);
    check(run.elapsed < limit, || format!("took {:?}", run.elapsed))?;
    Ok(format!(
        "5 relations found in a {}-element chain, {:.2?}",
        chain.len(),
        run.elapsed
    ))
}

const TABLE: [(&str, [Option<&str>; 5]); 5] = [
    ("ns3d", [Some("I"), Some("I"), Some("R"), Some("I"), Some("I")]),
    ("rans3d", [Some("I"), Some("I"), Some("R"), Some("I"), Some("I")]),
    ("omega_rans", [Some("I"), Some("I"), Some("R"), Some("I"), Some("I")]),
    ("streamfunction2d", [None, Some("R"), None, None, Some("R")]),
    ("prandtl", [None, Some("R"), None, None, None]),
];
const CODES: [&str; 5] = ["C", "In", "S", "E", "St"];

fn model_table_grid(json_out: &mut Vec<String>) -> Outcome {
    let run = cli(&["table1", "--format", "json"]);
    json_out.push(run.stdout.clone());
    check(run.code == 0, || format!("exit code {}", run.code))?;
    let v = parse_json(&run)?;
    let rows = v["rows"].as_array().ok_or("no rows")?;
    let row = |m: &str| rows.iter().find(|r| r["model"] == m);
    for (model, expected) in TABLE {
        let r = row(model).ok_or_else(|| format!("no row for {model}"))?;
        for (i, exp) in expected.iter().enumerate() {
            let cell = &r["cells"][i];
            let status = cell["status"].as_str().unwrap_or("?");
            check(cell["code"] == CODES[i], || {
                format!("{model}: column {i} is {}", cell["code"])
            })?;
            match exp {
                Some(class) => check(status == *class, || {
                    format!("{model}/{}: {status}, expected {class}", CODES[i])
                })?,
                None => check(status == "not_applicable", || format!("{model}/{}: {status}", CODES[i]))?,
            }
        }
    }
    let busemann = row("busemann").ok_or("no busemann row")?;
    check(busemann["cells"][0]["status"] == "unsupported", || {
        "busemann not marked unsupported".into()
    })?;

    // Per-cell wall time, one process per populated cell.
    let mut slowest = (Duration::ZERO, String::new());
    for (model, expected) in TABLE {
        for (i, exp) in expected.iter().enumerate() {
            if let Some(class) = exp {
                let run = cli(&["classify", "--model", model, "--regime", CODES[i]]);
                let want = if *class == "R" { 0 } else { 1 };
                check(run.code == want, || {
                    format!("classify {model} {}: exit {}", CODES[i], run.code)
                })?;
                if run.elapsed > slowest.0 {
                    slowest = (run.elapsed, format!("{model}/{}", CODES[i]));
                }
            }
        }
    }
    check(slowest.0 < Duration::from_secs(60), || {
        format!("{} took {:?}", slowest.1, slowest.0)
    })?;
    Ok(format!(
        "17 cells match, busemann unsupported, slowest cell {} {:.2?}",
        slowest.1, slowest.0
    ))
}

fn kernel_properties(json_out: &mut Vec<String>) -> Outcome {
    let start = Instant::now();
    let results: Vec<(&str, Result<(), String>)> = std::thread::scope(|s| {
        let handles: Vec<_> = props::ALL
            .iter()
            .map(|&(name, f)| (name, s.spawn(move || f(PROPERTY_CASES))))
            .collect();
        handles
            .into_iter()
            .map(|(name, h)| (name, h.join().unwrap_or_else(|_| Err("panicked".into()))))
            .collect()
    });
    let summary: Vec<Value> = results
        .iter()
        .map(|(name, r)| {
            json!({
                "property": name,
                "cases": PROPERTY_CASES,
                "result": match r { Ok(()) => "pass".to_string(), Err(e) => e.clone() },
            })
        })
        .collect();
    json_out.push(serde_json::to_string_pretty(&summary).expect("serializable"));
    let failed: Vec<String> = results
        .iter()
        .filter_map(|(n, r)| r.as_ref().err().map(|e| format!("{n}: {e}")))
        .collect();
    check(failed.is_empty(), || failed.join("; "))?;
    Ok(format!(
        "{} properties x {PROPERTY_CASES} cases, {:.1?}",
        results.len(),
        start.elapsed()
    ))
}

fn numeric_identities(json_out: &mut Vec<String>) -> Outcome {
    let start = Instant::now();
    let mut gap3d = String::new();
    for dim in ["2", "3"] {
        let run = cli(&["verify", "all", "--dim", dim, "--grid", "16,31", "--format", "json"]);
        json_out.push(run.stdout.clone());
        check(run.code == 0, || format!("verify --dim {dim}: exit {}", run.code))?;
        let v = parse_json(&run)?;
        let reports = v["reports"].as_array().ok_or("no reports")?;
        for r in reports {
            let name = r["check"].as_str().unwrap_or("?");
            let (rc, rf) = (
                r["residual_coarse"].as_f64().unwrap_or(f64::NAN),
                r["residual_fine"].as_f64().unwrap_or(f64::NAN),
            );
            let order = r["observed_order"].as_f64();
            let class = r["classification"].as_str().unwrap_or("?");
            let tag = format!("{name} ({dim}-D)");
            match name {
                "curl_grad_zero" | "div_curl_zero" => {
                    check(rc <= 1e-12 && rf <= 1e-12, || format!("{tag}: {rc:e}, {rf:e}"))?
                }
                "id_time" => check(rc <= 1e-10 && rf <= 1e-10, || format!("{tag}: {rc:e}, {rf:e}"))?,
                "id_selfadv" | "id_skew" | "id_laplace" => {
                    check(order.is_some_and(|p| p >= 1.5), || format!("{tag}: order {order:?}"))?
                }
                "advection_curl_gap_2d_self" => check(class == "converging", || format!("{tag}: {class}"))?,
                "advection_curl_gap_3d" => {
                    check(rc.is_finite() && rf.is_finite(), || format!("{tag}: not reported"))?;
                    gap3d = format!("gap_3d {class} ({rc:.3e} -> {rf:.3e})");
                }
                other => return Err(format!("unexpected check {other}")),
            }
        }
        check(reports.len() == 7, || format!("{} reports in {dim}-D", reports.len()))?;
    }
    let elapsed = start.elapsed();
    check(elapsed < Duration::from_secs(30), || format!("took {elapsed:?}"))?;
    Ok(format!("all thresholds met, {gap3d}, {elapsed:.2?}"))
}

type Criterion = fn(&mut Vec<String>) -> Outcome;

const CRITERIA: [(&str, Criterion); 5] = [
    ("stokes chain golden", stokes_chain_golden),
    ("rans-stokes relations", rans_stokes_relations),
    ("model table grid", model_table_grid),
    ("kernel property suite", kernel_properties),
    ("numeric identity suite", numeric_identities),
];

fn report(n: usize, name: &str, outcome: &Outcome) -> bool {
    match outcome {
        Ok(detail) => {
            println!("criterion {n} {name}: PASS ({detail})");
            true
        }
        Err(why) => {
            println!("criterion {n} {name}: FAIL ({why})");
            false
        }
    }
}

fn main() {
    let mut ok = true;
    let mut first = Vec::new();
    for (i, (name, f)) in CRITERIA.iter().enumerate() {
        let mut out = Vec::new();
        ok &= report(i + 1, name, &f(&mut out));
        first.push(out);
    }
    let mut second = Vec::new();
    for (_, f) in CRITERIA.iter() {
        let mut out = Vec::new();
        let _ = f(&mut out);
        second.push(out);
    }
    let differing: Vec<&str> = CRITERIA
        .iter()
        .zip(first.iter().zip(&second))
        .filter(|(_, (a, b))| a != b)
        .map(|((name, _), _)| *name)
        .collect();
    let determinism = if differing.is_empty() {
        let docs: usize = first.iter().map(Vec::len).sum();
        Ok(format!("{docs} JSON documents byte-identical across two runs"))
    } else {
        Err(format!("output differs for {}", differing.join(", ")))
    };
    ok &= report(6, "determinism", &determinism);
    if !ok {
        std::process::exit(1);
    }
}
