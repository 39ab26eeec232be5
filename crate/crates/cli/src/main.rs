//! `delta-reduce`: differential elimination and identity checks from the
//! command line.
//!
//! Exit codes: 0 success, 1 verdict I (`classify` only), 2 input error,
//! 3 a budget cap stopped `reduce`.

use std::fmt::Write as _;
use std::fs;
use std::io::{ErrorKind, Write as _};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use delta_core::numeric::{check_identity, Check, Grid, IdentityReport, DEFAULT_LENGTHS, DEFAULT_SEED};
use delta_core::rg::DEFAULT_TERM_CAP;
use delta_core::text::{
    parse_ranking, parse_system_file, render_poly, render_verdict, verdict_json, VerdictJson, SCHEMA,
};
use delta_core::zoo::{build_with, table_rows, BuildOptions};
use delta_core::{rosenfeld_groebner, Budget, Derivation, ModelName, Ranking, Regime, StepUnit, Verdict};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "delta-reduce",
    version,
    about = "Differential elimination for polynomial PDE systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Triangularize the system in a file.
    Reduce {
        file: PathBuf,
        /// Elimination ranking such as "u>v>w>p"; overrides the file's ranking line.
        #[arg(long)]
        ranking: Option<String>,
        /// Derivation tie-break order such as "t,x,y,z".
        #[arg(long)]
        precedence: Option<String>,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long, value_enum, default_value_t = Format::Human)]
        format: Format,
    },
    /// Classify one cell of the model table.
    Classify {
        #[arg(long)]
        model: ModelName,
        /// Regime name or code (C, In, S, E, St).
        #[arg(long)]
        regime: Regime,
        #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
        with_curl_defs: bool,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long, value_enum, default_value_t = Format::Human)]
        format: Format,
    },
    /// Classify every populated cell of the model table.
    Table1 {
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long, value_enum, default_value_t = Format::Human)]
        format: Format,
    },
    /// Run a finite-difference identity check, or `all` of them.
    Verify {
        check: String,
        /// Coarse and fine points per axis.
        #[arg(long, default_value = "16,31")]
        grid: String,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Human)]
        format: Format,
    },
    /// Syntax-check a system file.
    Parse { file: PathBuf },
}

#[derive(Args, Clone, Copy)]
struct BudgetArgs {
    /// Quiescence window: steps without a new leader before a branch closes.
    #[arg(long, default_value_t = 400)]
    budget: usize,
    #[arg(long, default_value_t = 12)]
    order_cap: u32,
    #[arg(long, default_value_t = 100_000)]
    step_cap: usize,
    #[arg(long, default_value_t = DEFAULT_TERM_CAP)]
    term_cap: usize,
    #[arg(long, value_enum, default_value_t = UnitArg::Elimination)]
    step_unit: UnitArg,
}

#[derive(ValueEnum, Clone, Copy)]
enum UnitArg {
    Elimination,
    Pass,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum Format {
    Human,
    Json,
}

impl BudgetArgs {
    fn budget(&self) -> Result<Budget> {
        let unit = match self.step_unit {
            UnitArg::Elimination => StepUnit::Elimination,
            UnitArg::Pass => StepUnit::Pass,
        };
        Ok(Budget::new(self.budget, self.order_cap, self.step_cap)?
            .with_term_cap(self.term_cap)?
            .with_step_unit(unit))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = String::new();
    let code = match run(cli.command, &mut out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            2
        }
    };
    let mut stdout = std::io::stdout().lock();
    match stdout.write_all(out.as_bytes()).and_then(|()| stdout.flush()) {
        Err(e) if e.kind() != ErrorKind::BrokenPipe => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        _ => ExitCode::from(code),
    }
}

fn run(cmd: Command, out: &mut String) -> Result<u8> {
    match cmd {
        Command::Reduce {
            file,
            ranking,
            precedence,
            budget,
            format,
        } => reduce(
            out,
            &file,
            ranking.as_deref(),
            precedence.as_deref(),
            budget.budget()?,
            format,
        ),
        Command::Classify {
            model,
            regime,
            with_curl_defs,
            budget,
            format,
        } => classify(out, model, regime, with_curl_defs, budget.budget()?, format),
        Command::Table1 { budget, format } => table1(out, budget.budget()?, format),
        Command::Verify {
            check,
            grid,
            dim,
            seed,
            format,
        } => verify(out, &check, &grid, dim, seed, format),
        Command::Parse { file } => parse(out, &file),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn push_json(out: &mut String, v: &impl serde::Serialize) -> Result<()> {
    out.push_str(&serde_json::to_string_pretty(v)?);
    out.push('\n');
    Ok(())
}

fn parse_precedence(text: &str) -> Result<[Derivation; 4]> {
    let ds = text
        .split(',')
        .map(|s| {
            let s = s.trim();
            let mut chars = s.chars();
            match (chars.next().and_then(Derivation::from_letter), chars.next()) {
                (Some(d), None) => Ok(d),
                _ => bail!("`{s}` is not a derivation"),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out: Vec<Derivation> = Vec::with_capacity(4);
    for d in ds {
        if out.contains(&d) {
            bail!("derivation `{}` listed twice", d.letter());
        }
        out.push(d);
    }
    // Unlisted derivations keep their default relative order, after the listed ones.
    for d in Derivation::ALL {
        if !out.contains(&d) {
            out.push(d);
        }
    }
    Ok([out[0], out[1], out[2], out[3]])
}

fn reduce(
    out: &mut String,
    file: &Path,
    ranking: Option<&str>,
    precedence: Option<&str>,
    budget: Budget,
    format: Format,
) -> Result<u8> {
    let sys = parse_system_file(&read(file)?)?;
    let mut r = match (ranking, sys.ranking) {
        (Some(text), _) => parse_ranking(text, Some(&sys.vars))?,
        (None, Some(r)) => r,
        (None, None) => Ranking::new(sys.vars.clone())?,
    };
    if let Some(p) = precedence {
        r = r.with_precedence(parse_precedence(p)?)?;
    }
    let verdict = rosenfeld_groebner(&sys.equations, &r, budget)?;
    match format {
        Format::Json => push_json(out, &verdict_json(&verdict, &r, &budget))?,
        Format::Human => {
            writeln!(out, "ranking: {r}")?;
            out.push_str(&render_verdict(&verdict, &r));
        }
    }
    Ok(if verdict.is_reducible() { 0 } else { 3 })
}

fn classify(
    out: &mut String,
    model: ModelName,
    regime: Regime,
    with_curl_defs: bool,
    budget: Budget,
    format: Format,
) -> Result<u8> {
    let spec = build_with(model, regime, BuildOptions { with_curl_defs })?;
    let r = &spec.suggested_ranking;
    let verdict = rosenfeld_groebner(&spec.equations, r, budget)?;
    match format {
        Format::Json => push_json(
            out,
            &json!({
                "schema": SCHEMA,
                "model": model.as_str(),
                "regime": regime.as_str(),
                "best_effort": spec.best_effort,
                "verdict": verdict_json(&verdict, r, &budget),
            }),
        )?,
        Format::Human => {
            writeln!(
                out,
                "{} / {} ({} equations, ranking {r})",
                model.label(),
                regime.as_str(),
                spec.equations.len()
            )?;
            if spec.best_effort {
                writeln!(out, "note: best-effort equations")?;
            }
            out.push_str(&render_verdict(&verdict, r));
        }
    }
    Ok(if verdict.is_reducible() { 0 } else { 1 })
}

enum Cell {
    NotApplicable,
    Unsupported,
    Done {
        verdict: Box<Verdict>,
        ranking: Ranking,
        best_effort: bool,
    },
}

fn table1(out: &mut String, budget: Budget, format: Format) -> Result<u8> {
    let mut rows = Vec::new();
    for (model, cells) in table_rows() {
        let mut out = Vec::new();
        for (regime, applicable) in cells {
            let cell = if !applicable {
                Cell::NotApplicable
            } else {
                match build_with(model, regime, BuildOptions::default()) {
                    Ok(spec) => Cell::Done {
                        verdict: Box::new(rosenfeld_groebner(&spec.equations, &spec.suggested_ranking, budget)?),
                        ranking: spec.suggested_ranking,
                        best_effort: spec.best_effort,
                    },
                    Err(delta_core::Error::UnsupportedCell { .. }) => Cell::Unsupported,
                    Err(e) => return Err(e.into()),
                }
            };
            out.push((regime, cell));
        }
        rows.push((model, out));
    }
    match format {
        Format::Json => push_json(out, &table_json(&rows, &budget))?,
        Format::Human => out.push_str(&table_human(&rows)),
    }
    Ok(0)
}

fn table_json(rows: &[(ModelName, Vec<(Regime, Cell)>)], budget: &Budget) -> Value {
    let rows: Vec<Value> = rows
        .iter()
        .map(|(model, cells)| {
            let cells: Vec<Value> = cells
                .iter()
                .map(|(regime, cell)| {
                    let mut v = json!({ "regime": regime.as_str(), "code": regime.code() });
                    match cell {
                        Cell::NotApplicable => v["status"] = json!("not_applicable"),
                        Cell::Unsupported => v["status"] = json!("unsupported"),
                        Cell::Done {
                            verdict,
                            ranking,
                            best_effort,
                        } => {
                            let vj: VerdictJson = verdict_json(verdict, ranking, budget);
                            v["status"] = json!(vj.class);
                            v["best_effort"] = json!(best_effort);
                            v["reason"] = json!(vj.reason);
                            v["ranking"] = json!(vj.ranking);
                            v["stats"] = serde_json::to_value(vj.stats).expect("stats serialize");
                        }
                    }
                    v
                })
                .collect();
            json!({ "model": model.as_str(), "label": model.label(), "cells": cells })
        })
        .collect();
    json!({ "schema": SCHEMA, "budget": budget, "rows": rows })
}

fn table_human(rows: &[(ModelName, Vec<(Regime, Cell)>)]) -> String {
    let mut s = format!("{:<28}", "model");
    for r in Regime::ALL {
        s.push_str(&format!("{:>6}", r.code()));
    }
    s.push('\n');
    let mut any_best_effort = false;
    let mut any_unsupported = false;
    for (model, cells) in rows {
        s.push_str(&format!("{:<28}", model.label()));
        for (_, cell) in cells {
            let mark = match cell {
                Cell::NotApplicable => "-".to_string(),
                Cell::Unsupported => {
                    any_unsupported = true;
                    "n/s".to_string()
                }
                Cell::Done {
                    verdict, best_effort, ..
                } => {
                    any_best_effort |= best_effort;
                    format!("{}{}", verdict.class(), if *best_effort { "*" } else { "" })
                }
            };
            s.push_str(&format!("{mark:>6}"));
        }
        s.push('\n');
    }
    s.push_str("\nR: triangularized within the budget. I: stopped by a budget cap. -: no such variant.\n");
    if any_best_effort {
        s.push_str("*: best-effort equations (standard textbook form).\n");
    }
    if any_unsupported {
        s.push_str("n/s: unsupported, the equations are not specified.\n");
    }
    s
}

fn parse_grid(text: &str) -> Result<(usize, usize)> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let [c, f] = parts.as_slice() else {
        bail!("--grid expects two point counts such as 16,31");
    };
    let coarse: usize = c.parse().with_context(|| format!("bad point count `{c}`"))?;
    let fine: usize = f.parse().with_context(|| format!("bad point count `{f}`"))?;
    if fine <= coarse {
        bail!("the fine grid must have more points than the coarse grid");
    }
    if fine != 2 * coarse - 1 {
        eprintln!("warning: {fine} is not 2*{coarse}-1, so coarse points are not fine points");
    }
    Ok((coarse, fine))
}

fn verify(out: &mut String, check: &str, grid: &str, dim: usize, seed: u64, format: Format) -> Result<u8> {
    let (coarse, fine) = parse_grid(grid)?;
    let g = Grid::new(DEFAULT_LENGTHS, coarse, dim)?;
    let checks = if check == "all" {
        Check::for_dim(dim)
    } else {
        let c: Check = check.parse()?;
        if !c.supports(dim) {
            bail!("{c} does not run in {dim} dimensions");
        }
        vec![c]
    };
    let reports = checks
        .into_iter()
        .map(|c| check_identity(c, &g, fine, seed))
        .collect::<delta_core::Result<Vec<IdentityReport>>>()?;
    match format {
        Format::Json => push_json(
            out,
            &json!({
                "schema": SCHEMA,
                "dim": dim,
                "grid": [coarse, fine],
                "lengths": &DEFAULT_LENGTHS[..dim],
                "seed": seed,
                "reports": reports,
            }),
        )?,
        Format::Human => {
            writeln!(out, "dim {dim}, grid {coarse}/{fine}, seed {seed}")?;
            writeln!(
                out,
                "{:<28}{:>14}{:>14}{:>8}  classification",
                "check", "coarse", "fine", "order"
            )?;
            for r in &reports {
                let order = r.observed_order.map_or("-".to_string(), |p| format!("{p:.2}"));
                writeln!(
                    out,
                    "{:<28}{:>14.3e}{:>14.3e}{:>8}  {}",
                    r.check.as_str(),
                    r.residual_coarse,
                    r.residual_fine,
                    order,
                    r.classification
                )?;
            }
        }
    }
    Ok(0)
}

fn parse(out: &mut String, file: &Path) -> Result<u8> {
    let sys = parse_system_file(&read(file)?)?;
    let names = |v: &[delta_core::Symbol]| v.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(", ");
    writeln!(out, "ok: {} equations", sys.equations.len())?;
    writeln!(out, "params: {}", names(&sys.params))?;
    writeln!(out, "vars: {}", names(&sys.vars))?;
    if let Some(r) = &sys.ranking {
        writeln!(out, "ranking: {r}")?;
    }
    let r = match sys.ranking {
        Some(r) => r,
        None => Ranking::new(sys.vars.clone())?,
    };
    for e in &sys.equations {
        writeln!(out, "{} = 0", render_poly(e, &r))?;
    }
    Ok(0)
}
