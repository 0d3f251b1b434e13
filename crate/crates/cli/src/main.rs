//! `streamprop`: check, unfold, compare and rewrite stream diagrams.
//!
//! Exit status: 0 for success or an affirmative verdict, 1 for a negative
//! verdict, 2 for errors.

use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use streamprop::approx::{self, ApproxError, Mode};
use streamprop::backend::{Backend, Gens};
use streamprop::classical::{FinSet, IntLin};
use streamprop::cpm::Cpm;
use streamprop::demos::{self, BackendKind};
use streamprop::dsl;
use streamprop::random::RandomMor;
use streamprop::rewrite::{self, AuditConfig, Direction, Oracle, RuleId, AX};
use streamprop::stateful;
use streamprop::Diagram;

#[derive(Parser)]
#[command(name = "streamprop", version, about = "Stream diagrams over quantum and classical base theories")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Base theory; defaults to the bundled example's, else cpm.
    #[arg(long, global = true, value_parser = parse_backend)]
    backend: Option<BackendKind>,
    /// Number of ticks [default: 5, or 4 for audit-rules]
    #[arg(long, global = true)]
    ticks: Option<usize>,
    #[arg(long, global = true, env = "STREAMPROP_TOL", default_value_t = 1e-9)]
    tol: f64,
    /// Machine-readable output on stdout.
    #[arg(long, global = true)]
    json: bool,
    /// Extra generator from a JSON morphism file, as NAME=PATH.
    #[arg(long = "gen", global = true, value_name = "NAME=PATH")]
    gens: Vec<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse and type-check a diagram.
    Check { file: String },
    /// Compile to a regular stateful sequence.
    Unfold { file: String },
    /// Finite approximations for ticks 1..K.
    Approx { file: String },
    /// Bounded observational equivalence of two diagrams.
    Equiv { left: String, right: String },
    /// Check that the finite approximations refine each other.
    Monotone {
        file: String,
        /// Defaults to lax where the backend has a lax order.
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
    },
    /// Rebuild a stateful sequence from the finite approximations.
    Reconstruct { file: String },
    /// List rule sites, or apply one.
    Rewrite {
        file: String,
        #[arg(long)]
        rule: String,
        /// Index into the site list.
        #[arg(long)]
        site: Option<usize>,
        #[arg(long, value_enum)]
        dir: Option<DirArg>,
    },
    /// Randomized soundness audit of the rewrite rules.
    AuditRules {
        /// Rule name or symbol; repeatable. Defaults to every axiom.
        #[arg(long)]
        rule: Vec<String>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long)]
        no_side_conditions: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run a bundled example and check its expected output.
    Demo {
        name: Option<String>,
        #[arg(long)]
        list: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Eq,
    Lax,
}

#[derive(Clone, Copy, ValueEnum)]
enum DirArg {
    Fwd,
    Bwd,
}

fn parse_backend(s: &str) -> Result<BackendKind, String> {
    BackendKind::from_name(s).ok_or_else(|| format!("unknown backend `{s}` (cpm, finset, intlin)"))
}

struct Report {
    json: Value,
    text: String,
    negative: bool,
}

impl Report {
    fn new(json: Value, text: impl Into<String>, negative: bool) -> Self {
        Report { json, text: text.into(), negative }
    }
}

type CResult<T> = Result<T, String>;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn stem(arg: &str) -> &str {
    let base = Path::new(arg).file_name().and_then(|s| s.to_str()).unwrap_or(arg);
    base.strip_suffix(".sexp").unwrap_or(base)
}

/// A file on disk, or else a bundled source of the same stem.
fn read_source(arg: &str) -> CResult<String> {
    if Path::new(arg).is_file() {
        return std::fs::read_to_string(arg).map_err(|e| format!("{arg}: {e}"));
    }
    demos::source(stem(arg))
        .map(str::to_string)
        .ok_or_else(|| format!("{arg}: no such file or bundled example"))
}

fn files(cmd: &Cmd) -> Vec<&str> {
    match cmd {
        Cmd::Check { file }
        | Cmd::Unfold { file }
        | Cmd::Approx { file }
        | Cmd::Monotone { file, .. }
        | Cmd::Reconstruct { file }
        | Cmd::Rewrite { file, .. } => vec![file],
        Cmd::Equiv { left, right } => vec![left, right],
        _ => vec![],
    }
}

fn backend_for(cli: &Cli) -> BackendKind {
    cli.backend
        .or_else(|| {
            files(&cli.cmd)
                .into_iter()
                .filter(|f| !Path::new(f).is_file())
                .find_map(|f| demos::spec(stem(f)).map(|d| d.backend))
        })
        .unwrap_or(BackendKind::Cpm)
}

fn load_gens<'a, B: Backend>(be: &'a B, specs: &[String]) -> CResult<Gens<'a, B>> {
    let mut gens = Gens::new(be);
    for s in specs {
        let (name, path) = s.split_once('=').ok_or_else(|| format!("--gen {s}: expected NAME=PATH"))?;
        let text = std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?;
        let v: Value = serde_json::from_str(&text).map_err(|e| format!("{path}: {e}"))?;
        gens.insert(name, be.from_json(&v).map_err(|e| format!("{path}: {e}"))?);
    }
    Ok(gens)
}

fn parse<B: Backend>(gens: &Gens<B>, arg: &str) -> CResult<Diagram> {
    dsl::parse(&read_source(arg)?, gens).map_err(|e| format!("{arg}:{e}"))
}

/// Compact JSON when short, a shape summary otherwise.
fn brief<B: Backend>(be: &B, f: &B::Mor) -> String {
    let s = be.to_json(f).to_string();
    if s.len() <= 400 {
        s
    } else {
        format!("{} -> {} (use --json for the full morphism)", be.dom(f), be.cod(f))
    }
}

fn run<B: RandomMor>(be: &B, cli: &Cli) -> CResult<Report> {
    let gens = load_gens(be, &cli.gens)?;
    let ticks = cli.ticks.unwrap_or(5);
    let tol = cli.tol;
    match &cli.cmd {
        Cmd::Check { file } => {
            let d = parse(&gens, file)?;
            let (a, b) = (dsl::print_type(d.dom()), dsl::print_type(d.cod()));
            Ok(Report::new(json!({ "dom": a, "cod": b, "size": d.size() }), format!("{a} -> {b}"), false))
        }
        Cmd::Unfold { file } => {
            let s = stateful::unfold(&gens, &parse(&gens, file)?).map_err(err)?;
            let mut text = String::new();
            for (i, l) in s.layers.iter().enumerate() {
                text += &format!("tick {}: in {}, out {}, memory {} -> {}\n", i + 1, l.a, l.b, l.m_in, l.m_out);
            }
            let r = &s.reg;
            text += &format!("tick {}+: in {}, out {}, memory {} -> {}", s.layers.len() + 1, r.a, r.b, r.m_in, r.m_out);
            Ok(Report::new(stateful::to_json(be, &s), text, false))
        }
        Cmd::Approx { file } => {
            let seq = approx::seq_of_diagram(&gens, &parse(&gens, file)?).map_err(err)?;
            let fs = approx::at_upto(be, &seq, ticks).map_err(err)?;
            let text: Vec<String> = fs.iter().enumerate().map(|(k, f)| format!("{}: {}", k + 1, brief(be, f))).collect();
            Ok(Report::new(Value::Array(fs.iter().map(|f| be.to_json(f)).collect()), text.join("\n"), false))
        }
        Cmd::Equiv { left, right } => {
            let (s, t) = (parse(&gens, left)?, parse(&gens, right)?);
            let v = rewrite::coinductive_equal(&gens, &s, &t, ticks, tol).map_err(err)?;
            Ok(Report::new(json!(v), v.to_string(), !v.is_equal()))
        }
        Cmd::Monotone { file, mode } => {
            let seq = approx::seq_of_diagram(&gens, &parse(&gens, file)?).map_err(err)?;
            let mode = match mode {
                Some(ModeArg::Eq) => Mode::Eq,
                Some(ModeArg::Lax) => Mode::Lax,
                None if be.caps().has_lax_order => Mode::Lax,
                None => Mode::Eq,
            };
            let v = approx::check_monotone(be, &seq, ticks, mode, tol).map_err(err)?;
            let text = match v.first_failure {
                None => format!("monotone ({mode:?}) up to tick {ticks}"),
                Some(k) => format!("not monotone ({mode:?}): fails between ticks {k} and {}", k + 1),
            };
            let j = json!({ "monotone": v.monotone, "mode": v.mode, "first_failure": v.first_failure });
            Ok(Report::new(j, text.to_lowercase(), !v.monotone))
        }
        Cmd::Reconstruct { file } => {
            let seq = approx::seq_of_diagram(&gens, &parse(&gens, file)?).map_err(err)?;
            let rebuilt = match approx::reconstruct(be, &seq, tol) {
                Ok(r) => r,
                Err(ApproxError::NotMonotone(k)) => {
                    let j = json!({ "reconstructed": false, "not_monotone_at": k });
                    return Ok(Report::new(j, format!("not monotone at tick {k}; nothing to reconstruct"), true));
                }
                Err(e) => return Err(err(e)),
            };
            let want = approx::at_upto(be, &seq, ticks).map_err(err)?;
            let got = stateful::fa_upto(be, &rebuilt, ticks).map_err(err)?;
            let mismatch = got.iter().zip(&want).position(|(g, w)| !be.equal(g, w, tol)).map(|i| i + 1);
            let mems: Vec<usize> = rebuilt.layers.iter().map(|l| l.m_out).chain([rebuilt.reg.m_out]).collect();
            let text = match mismatch {
                None => format!("reconstructed; memory profile {mems:?}; approximations agree up to tick {ticks}"),
                Some(k) => format!("reconstructed sequence differs at tick {k}"),
            };
            let j = json!({ "reconstructed": true, "agrees_up_to": ticks, "mismatch_at": mismatch, "sequence": stateful::to_json(be, &rebuilt) });
            Ok(Report::new(j, text, mismatch.is_some()))
        }
        Cmd::Rewrite { file, rule, site, dir } => {
            let d = parse(&gens, file)?;
            let rule = RuleId::from_name(rule).ok_or_else(|| format!("unknown rule `{rule}`"))?;
            let oracle = Oracle { gens: &gens, tol };
            let sites = match dir {
                Some(DirArg::Fwd) => rewrite::find_sites(rule, Direction::Forward, &d, &oracle),
                Some(DirArg::Bwd) => rewrite::find_sites(rule, Direction::Backward, &d, &oracle),
                None => rewrite::find_all_sites(rule, &d, &oracle),
            };
            match site {
                None => {
                    let lines: Vec<String> = sites
                        .iter()
                        .enumerate()
                        .map(|(i, s)| {
                            let span = if s.in_seq { format!(" steps {}..{}", s.start, s.start + s.len) } else { String::new() };
                            format!("{i}: {} {:?} at {:?}{span}", rule.name(), s.direction, s.path)
                        })
                        .collect();
                    let text = if lines.is_empty() { format!("no {} sites", rule.name()) } else { lines.join("\n") };
                    Ok(Report::new(json!(sites), text, sites.is_empty()))
                }
                Some(i) => {
                    let s = sites.get(*i).ok_or_else(|| format!("site {i} out of range ({} sites)", sites.len()))?;
                    let r = rewrite::apply(&d, s).map_err(err)?;
                    let text = dsl::print(&r);
                    Ok(Report::new(json!({ "site": s, "diagram": text }), text, false))
                }
            }
        }
        Cmd::AuditRules { rule, trials, no_side_conditions, seed } => {
            let rules: Vec<RuleId> = if rule.is_empty() {
                AX.to_vec()
            } else {
                rule.iter().map(|r| RuleId::from_name(r).ok_or_else(|| format!("unknown rule `{r}`"))).collect::<CResult<_>>()?
            };
            let cfg = AuditConfig {
                trials: *trials,
                ticks: cli.ticks.unwrap_or(4),
                tol,
                side_conditions: !no_side_conditions,
                seed: *seed,
            };
            let reports: Vec<_> = rules.iter().map(|&r| rewrite::verify_rule_soundness(be, r, &cfg)).collect();
            let text: Vec<String> = reports
                .iter()
                .map(|r| {
                    let first = r.earliest_tick.map_or(String::new(), |t| format!(", first difference at tick {t}"));
                    let status = if r.passed() { "ok" } else { "FAILED" };
                    format!("{:<16} {status}: {}/{} trials differ{first}", r.rule.name(), r.failures, r.trials)
                })
                .collect();
            let bad = reports.iter().any(|r| !r.passed());
            Ok(Report::new(json!(reports), text.join("\n"), bad))
        }
        Cmd::Demo { .. } => unreachable!("demos pick their own backend"),
    }
}

fn demo(cli: &Cli, name: Option<&str>, list: bool) -> CResult<Report> {
    let Some(name) = name.filter(|_| !list) else {
        let j: Vec<Value> = demos::DEMOS
            .iter()
            .map(|d| json!({ "name": d.name, "backend": d.backend.name(), "about": d.about }))
            .collect();
        let text: Vec<String> =
            demos::DEMOS.iter().map(|d| format!("{:<16} {:<7} {}", d.name, d.backend.name(), d.about)).collect();
        return Ok(Report::new(Value::Array(j), text.join("\n"), false));
    };
    let out = demos::run(name, cli.ticks.unwrap_or(5), cli.tol).map_err(err)?;
    let mut text = out.output.to_string();
    if !out.ok {
        text += &format!("\nexpected {}", out.expected);
    }
    Ok(Report::new(json!(out), text, !out.ok || out.negative))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match &cli.cmd {
        Cmd::Demo { name, list } => demo(&cli, name.as_deref(), *list),
        _ => match backend_for(&cli) {
            BackendKind::Cpm => run(&Cpm, &cli),
            BackendKind::FinSet => run(&FinSet, &cli),
            BackendKind::IntLin => run(&IntLin, &cli),
        },
    };
    match res {
        Ok(r) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&r.json).expect("JSON values serialize"));
            } else {
                println!("{}", r.text);
            }
            if r.negative {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
