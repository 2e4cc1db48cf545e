use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use cpskit::hierarchy::{hierarchy_partition, Depth};
use cpskit::json;
use cpskit::structure::{validate_structure, MorphismReport};
use cpskit::{
    check, check_isomorphism, check_morphism, check_morphism_preserves_descriptions, describe, evaluate,
    parse_formula, quotient, terminal_approximation, Coordinate, CpsViolation, Error, TypeStructure, Verdict,
};
use serde_json::{json, Value};

mod human;

use human::Style;

#[derive(Parser)]
#[command(name = "cpskit", version, about = "Type structures over conditional probability systems")]
struct Cli {
    /// Print prose instead of JSON.
    #[arg(long, global = true)]
    human: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the CPS axioms and the own-type condition.
    Validate {
        file: PathBuf,
        /// Skip the own-type (Harsanyi) check.
        #[arg(long)]
        no_harsanyi: bool,
    },
    /// Describe one type (or nature state, with player `0`) to a given
    /// depth; without `--player`, print the type partition instead.
    Describe {
        file: PathBuf,
        #[arg(long, requires = "ty")]
        player: Option<String>,
        #[arg(long = "type", requires = "player")]
        ty: Option<String>,
        /// Defaults to the fixpoint for partitions; required for descriptions.
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Merge types with identical descriptions.
    Quotient {
        file: PathBuf,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Check that a type map is a morphism and preserves descriptions.
    Morphism {
        source: PathBuf,
        target: PathBuf,
        map: PathBuf,
        /// Defaults to the number of source types plus one.
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Model-check a formula.
    Check {
        file: PathBuf,
        formula: String,
        /// Also print the full extension.
        #[arg(long)]
        all: bool,
    },
    /// Build the space of assignments to a list of propositions.
    Induce { file: PathBuf },
    /// Finite-depth terminal approximation over several structures.
    Approx {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long, default_value_t = 1)]
        depth: usize,
    },
}

/// Input errors; reported on stderr with exit code 2.
enum Failure {
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

struct Outcome {
    text: String,
    ok: bool,
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_structure(path: &Path) -> Result<TypeStructure, Failure> {
    json::structure_from_str(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn violation_json(player: &str, ty: &str, v: &CpsViolation) -> Value {
    let mut obj = json!({ "player": player, "type": ty, "axiom": v.axiom() });
    let extra = match v {
        CpsViolation::NegativeMass { event, state, mass } => {
            json!({ "kind": "negative_mass", "event": event, "state": state, "mass": mass.to_string() })
        }
        CpsViolation::NotNormalized { event, total } => {
            json!({ "kind": "not_normalized", "event": event, "total": total.to_string() })
        }
        CpsViolation::NotConcentrated { event, mass } => {
            json!({ "kind": "not_concentrated", "event": event, "mass": mass.to_string() })
        }
        CpsViolation::ChainRule { state, inner, outer, product, direct } => json!({
            "kind": "chain_rule",
            "A": [state],
            "B": inner,
            "C": outer,
            "product": product.to_string(),
            "direct": direct.to_string(),
        }),
    };
    if let (Value::Object(o), Value::Object(e)) = (&mut obj, extra) {
        o.extend(e);
    }
    obj
}

fn cmd_validate(file: &Path, harsanyi: bool, style: &Style) -> Result<Outcome, Failure> {
    let ts = load_structure(file)?;
    let report = validate_structure(&ts, harsanyi);
    let ok = report.is_ok();
    if style.human {
        if ok {
            return Ok(Outcome { text: format!("{}\n", style.good("OK")), ok });
        }
        let mut text = String::new();
        for v in &report.cps {
            text.push_str(&format!("{} player {} type {}: {}\n", style.bad("FAIL"), v.player, v.ty, v.violation));
        }
        for h in &report.harsanyi {
            let marginal: Vec<String> = h.marginal.iter().map(|(t, m)| format!("{t}: {m}")).collect();
            text.push_str(&format!(
                "{} player {} type {} under {}: own-type marginal is {{{}}}, not a point mass at itself\n",
                style.bad("FAIL"),
                h.player,
                h.ty,
                h.event,
                marginal.join(", ")
            ));
        }
        return Ok(Outcome { text, ok });
    }
    let cps: Vec<Value> = report.cps.iter().map(|v| violation_json(&v.player, &v.ty, &v.violation)).collect();
    let hars: Vec<Value> = report
        .harsanyi
        .iter()
        .map(|h| {
            let marginal: serde_json::Map<String, Value> =
                h.marginal.iter().map(|(t, m)| (t.clone(), Value::String(m.to_string()))).collect();
            json!({ "player": h.player, "type": h.ty, "event": h.event, "marginal": marginal })
        })
        .collect();
    let v = json!({ "ok": ok, "cps": cps, "harsanyi": hars });
    Ok(Outcome { text: json::to_pretty(&v), ok })
}

fn cmd_describe(
    file: &Path,
    player: Option<&str>,
    ty: Option<&str>,
    depth: Option<usize>,
    style: &Style,
) -> Result<Outcome, Failure> {
    let ts = load_structure(file)?;
    let (Some(player), Some(ty)) = (player, ty) else {
        let d = depth.map_or(Depth::Fixpoint, Depth::Finite);
        let result = hierarchy_partition(&ts, d);
        if style.human {
            let mut text = match result.stable_depth {
                Some(s) => format!("partition stable from depth {s}\n"),
                None => format!("partition at depth {}\n", result.depth),
            };
            for (j, blocks) in (0..ts.num_players()).map(|j| (j, result.partition.members(j))) {
                let parts: Vec<String> = blocks
                    .iter()
                    .map(|b| format!("{{{}}}", b.iter().map(|&t| ts.types(j)[t].as_str()).collect::<Vec<_>>().join(",")))
                    .collect();
                text.push_str(&format!("player {}: {}\n", ts.players()[j], parts.join(" ")));
            }
            return Ok(Outcome { text, ok: true });
        }
        let v = json!({
            "depth": result.depth,
            "stable_depth": result.stable_depth,
            "partition": result.partition.to_json(&ts),
        });
        return Ok(Outcome { text: json::to_pretty(&v), ok: true });
    };
    let depth = depth.ok_or_else(|| Failure::Input("--depth is required with --player".into()))?;
    let coord = ts.coordinate(player)?;
    let index = match coord {
        Coordinate::Nature => ts.space().state_index(ty).ok_or_else(|| Error::UnknownState(ty.to_string()))?,
        Coordinate::Player(j) => ts.type_index(j, ty)?,
    };
    let tree = describe(&ts, coord, index, depth)?;
    if style.human {
        let mut text = format!("player {player} type {ty}, depth {depth}\n");
        if let Some(top) = tree.top_belief() {
            for (event, m) in top {
                let parts: Vec<String> = m.iter().map(|(p, x)| format!("{p}: {x}")).collect();
                text.push_str(&format!("  under {event}: {}\n", parts.join(", ")));
            }
        }
        text.push_str(&format!("  {} distinct player descriptions referenced\n", tree.catalog().len()));
        return Ok(Outcome { text, ok: true });
    }
    Ok(Outcome { text: json::to_pretty(&tree.to_json()), ok: true })
}

fn cmd_quotient(file: &Path, output: Option<&Path>, style: &Style) -> Result<Outcome, Failure> {
    let ts = load_structure(file)?;
    let (qt, f) = quotient(&ts)?;
    let mut v = json::structure_to_json(&qt);
    if let Value::Object(o) = &mut v {
        o.insert("map".into(), json::morphism_to_json(&f, &ts, &qt));
    }
    let body = json::to_pretty(&v);
    let summary = |text: &mut String| {
        for j in 0..ts.num_players() {
            text.push_str(&format!(
                "player {}: {} types -> {} blocks\n",
                ts.players()[j],
                ts.types(j).len(),
                qt.types(j).len()
            ));
        }
    };
    match output {
        Some(path) => {
            fs::write(path, &body).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            let mut text = String::new();
            if style.human {
                summary(&mut text);
            } else {
                text = json::to_pretty(&json!({ "written": path.display().to_string() }));
            }
            Ok(Outcome { text, ok: true })
        }
        None if style.human => {
            let mut text = String::new();
            summary(&mut text);
            for (p, pairs) in f.to_labels(&ts, &qt) {
                for (a, b) in pairs {
                    text.push_str(&format!("  {p}: {a} -> {b}\n"));
                }
            }
            Ok(Outcome { text, ok: true })
        }
        None => Ok(Outcome { text: body, ok: true }),
    }
}

fn morphism_report_json(r: &MorphismReport) -> Value {
    match r {
        MorphismReport::Ok => json!({ "ok": true }),
        MorphismReport::Counterexample { player, ty, event, world, target_mass, pulled_mass } => json!({
            "ok": false,
            "player": player,
            "type": ty,
            "event": event,
            "world": world,
            "target_mass": target_mass.to_string(),
            "pulled_mass": pulled_mass.to_string(),
        }),
        MorphismReport::ValuationMismatch { state, prop } => {
            json!({ "ok": false, "valuation_mismatch": { "state": state, "proposition": prop } })
        }
    }
}

fn cmd_morphism(a: &Path, b: &Path, map: &Path, depth: Option<usize>, style: &Style) -> Result<Outcome, Failure> {
    let ts = load_structure(a)?;
    let ts2 = load_structure(b)?;
    let f = json::morphism_from_str(&ts, &ts2, &read(map)?)
        .map_err(|e| Failure::Input(format!("{}: {e}", map.display())))?;
    let report = check_morphism(&ts, &ts2, &f)?;
    let depth = depth.unwrap_or(ts.total_types() + 1);
    let (iso, preservation) = if report.is_ok() {
        let iso = check_isomorphism(&ts, &ts2, &f)?.isomorphic;
        (Some(iso), Some(check_morphism_preserves_descriptions(&ts, &ts2, &f, depth)?))
    } else {
        (None, None)
    };
    let ok = report.is_ok() && preservation.as_ref().is_some_and(|p| p.is_ok());
    if style.human {
        let mut text = match &report {
            MorphismReport::Ok => format!("{} type morphism\n", style.good("OK")),
            other => format!("{} not a type morphism: {other}\n", style.bad("FAIL")),
        };
        if let Some(iso) = iso {
            text.push_str(&format!("isomorphism: {}\n", if iso { "yes" } else { "no" }));
        }
        if let Some(p) = &preservation {
            text.push_str(&format!("descriptions preserved up to depth {depth}: {p}\n"));
        }
        return Ok(Outcome { text, ok });
    }
    let pres = preservation.map(|p| match p {
        cpskit::hierarchy::PreservationReport::Ok => json!({ "ok": true, "depth": depth }),
        cpskit::hierarchy::PreservationReport::Mismatch { player, ty, depth: at } => {
            json!({ "ok": false, "depth": depth, "player": player, "type": ty, "at_depth": at })
        }
    });
    let v = json!({
        "morphism": morphism_report_json(&report),
        "isomorphism": iso,
        "descriptions": pres,
    });
    Ok(Outcome { text: json::to_pretty(&v), ok })
}

fn cmd_check(file: &Path, formula: &str, all: bool, style: &Style) -> Result<Outcome, Failure> {
    let ts = load_structure(file)?;
    let f = parse_formula(formula)?;
    let verdict = check(&ts, &f)?;
    let ok = verdict != Verdict::Unsatisfiable;
    let extension: Option<Vec<String>> = if all {
        let ext = evaluate(&ts, &f)?;
        Some(ext.iter().map(|w| ts.world().domain().key(w).to_string()).collect())
    } else {
        None
    };
    if style.human {
        let word = match &verdict {
            Verdict::Unsatisfiable => style.bad(verdict.as_str()),
            _ => style.good(verdict.as_str()),
        };
        let mut text = format!("{f}: {word}");
        if let Verdict::Satisfiable { key, .. } = &verdict {
            text.push_str(&format!(" (holds at {key})"));
        }
        text.push('\n');
        if let Some(ext) = extension {
            text.push_str(&format!("extension: {{{}}}\n", ext.join(", ")));
        }
        return Ok(Outcome { text, ok });
    }
    let mut v = json!({ "formula": f.to_string(), "verdict": verdict.as_str() });
    if let (Verdict::Satisfiable { key, .. }, Value::Object(o)) = (&verdict, &mut v) {
        o.insert("witness".into(), Value::String(key.clone()));
    }
    if let (Some(ext), Value::Object(o)) = (extension, &mut v) {
        o.insert("extension".into(), json!(ext));
    }
    Ok(Outcome { text: json::to_pretty(&v), ok })
}

fn cmd_induce(file: &Path, style: &Style) -> Result<Outcome, Failure> {
    let (props, cond) =
        json::props_from_str(&read(file)?).map_err(|e| Failure::Input(format!("{}: {e}", file.display())))?;
    let ind = cpskit::space::induce_named(&props, &cond)?;
    if style.human {
        let mut text = format!("{} states over {} propositions\n", ind.space.len(), props.len());
        for (name, ev) in ind.space.conditioning() {
            let members: Vec<&str> = ev.iter().map(|i| ind.space.states()[i].as_str()).collect();
            text.push_str(&format!("  {name}: {}\n", members.join(" ")));
        }
        return Ok(Outcome { text, ok: true });
    }
    Ok(Outcome { text: json::to_pretty(&json::induced_to_json(&ind)), ok: true })
}

fn cmd_approx(files: &[PathBuf], depth: usize, style: &Style) -> Result<Outcome, Failure> {
    let structures = files.iter().map(|p| load_structure(p)).collect::<Result<Vec<_>, _>>()?;
    let approx = terminal_approximation(&structures, depth)?;
    if style.human {
        let mut text = format!("depth {depth}: {} types\n", approx.len());
        for (j, list) in approx.types.iter().enumerate() {
            text.push_str(&format!("  player {}: {}\n", approx.players[j], list.len()));
        }
        return Ok(Outcome { text, ok: true });
    }
    Ok(Outcome { text: json::to_pretty(&approx.to_json()), ok: true })
}

fn run(cli: &Cli, style: &Style) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Validate { file, no_harsanyi } => cmd_validate(file, !no_harsanyi, style),
        Command::Describe { file, player, ty, depth } => {
            cmd_describe(file, player.as_deref(), ty.as_deref(), *depth, style)
        }
        Command::Quotient { file, output } => cmd_quotient(file, output.as_deref(), style),
        Command::Morphism { source, target, map, depth } => cmd_morphism(source, target, map, *depth, style),
        Command::Check { file, formula, all } => cmd_check(file, formula, *all, style),
        Command::Induce { file } => cmd_induce(file, style),
        Command::Approx { files, depth } => cmd_approx(files, *depth, style),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let style = Style::from_env(cli.human);
    match run(&cli, &style) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.text.as_bytes());
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
