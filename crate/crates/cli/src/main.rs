//! `lcc`: checks, normalizes and model-checks surface files.

use std::ops::ControlFlow;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use lcc_core::fin::{builtin_model, eval_mor, for_each_assignment, is_fibrant, to_dot, FinCat, MAX_ASSIGNMENTS};
use lcc_core::surface::{elaborate_source, ElabOptions, Elaborated, Outcome, Status};
use serde_json::json;

const EXIT_PASS: u8 = 0;
const EXIT_FAIL: u8 = 1;
const EXIT_UNKNOWN: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser, Debug)]
#[command(name = "lcc", version, about = "Extensional type theory in strict lcc categories")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Rewrite-step budget for the equality engine.
    #[arg(long, global = true, default_value_t = 10_000)]
    budget: usize,
    /// Seed, recorded in exported JSON.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Print rewrite traces.
    #[arg(long, global = true)]
    trace: bool,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Elaborate a file and run all its judgments.
    Check { file: PathBuf },
    /// Normal forms of the `norm` judgments in one context.
    Norm {
        file: PathBuf,
        #[arg(long)]
        target: String,
    },
    /// Decide the `eq` judgments of a file.
    Eq { file: PathBuf },
    /// Fibrancy of a finite marked category given as JSON.
    Fibrancy { file: PathBuf },
    /// Evaluate judgments under every admissible assignment into a built-in model.
    ModelCheck {
        file: PathBuf,
        #[arg(long)]
        model: String,
    },
    /// Judgment results, or a finite category, as JSON
    ExportJson { file: PathBuf },
    /// The sketch, or a finite category with its chosen structure, in Graphviz dot
    ExportDot { file: PathBuf },
}

struct Usage(String);

fn read(p: &Path) -> Result<String, Usage> {
    std::fs::read_to_string(p).map_err(|e| Usage(format!("cannot read {}: {e}", p.display())))
}

fn code(s: Status) -> u8 {
    match s {
        Status::Pass => EXIT_PASS,
        Status::Fail => EXIT_FAIL,
        Status::Unknown => EXIT_UNKNOWN,
    }
}

fn is_json(p: &Path) -> bool {
    p.extension().is_some_and(|e| e == "json")
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS });
        }
    };
    match run(&cli) {
        Ok(c) => ExitCode::from(c),
        Err(Usage(m)) => {
            eprintln!("lcc: {m}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn elab(cli: &Cli, file: &Path) -> Result<Elaborated, Usage> {
    let src = read(file)?;
    let opts = ElabOptions { budget: cli.budget, trace: cli.trace, ..Default::default() };
    let e = elaborate_source(&src, &opts);
    for d in &e.diagnostics {
        eprintln!("{}:{d}", file.display());
    }
    Ok(e)
}

fn report(cli: &Cli, o: &Outcome) {
    let tag = match o.status {
        Status::Pass => "ok",
        Status::Fail => "FAIL",
        Status::Unknown => "UNKNOWN",
    };
    println!("{tag} {} {}: {}", o.judgment, o.span, o.message);
    if let Some(nf) = &o.normal_form {
        println!("  normal form: {nf}");
    }
    if let Some(cm) = &o.countermodel {
        println!("  countermodel {cm}");
    }
    if cli.trace {
        for s in &o.trace {
            println!("  trace {s}");
        }
    }
}

fn status_of<'a>(e: &Elaborated, outcomes: impl Iterator<Item = &'a Outcome>) -> Status {
    let worst = outcomes.map(|o| o.status).max().unwrap_or(Status::Pass);
    worst.max(if e.diagnostics.iter().any(|d| d.severity == lcc_core::surface::Severity::Error) {
        e.status()
    } else {
        Status::Pass
    })
}

fn run(cli: &Cli) -> Result<u8, Usage> {
    match &cli.cmd {
        Cmd::Check { file } => {
            let e = elab(cli, file)?;
            e.outcomes.iter().for_each(|o| report(cli, o));
            println!("{} judgment(s), {:?}", e.outcomes.len(), e.status());
            Ok(code(e.status()))
        }
        Cmd::Eq { file } => {
            let e = elab(cli, file)?;
            let eqs: Vec<&Outcome> = e.outcomes.iter().filter(|o| o.judgment == "eq").collect();
            eqs.iter().for_each(|o| report(cli, o));
            Ok(code(status_of(&e, eqs.into_iter())))
        }
        Cmd::Norm { file, target } => {
            let e = elab(cli, file)?;
            if e.context(target).is_none() {
                return Err(Usage(format!("no context named `{target}`")));
            }
            let ns: Vec<&Outcome> =
                e.outcomes.iter().filter(|o| o.judgment == "norm" && o.context == *target).collect();
            ns.iter().for_each(|o| report(cli, o));
            Ok(code(status_of(&e, ns.into_iter())))
        }
        Cmd::Fibrancy { file } => {
            let c = FinCat::from_json(&read(file)?).map_err(|e| Usage(format!("{}: {e}", file.display())))?;
            let r = is_fibrant(&c);
            println!("{} objects, {} arrows, {} markings", c.n_objects(), c.arrows.len(), c.markings.len());
            for v in &r.violations {
                println!("  violation: {v}");
            }
            println!("{}", if r.fibrant { "fibrant" } else { "not fibrant" });
            Ok(if r.fibrant { EXIT_PASS } else { EXIT_FAIL })
        }
        Cmd::ModelCheck { file, model } => {
            let m = builtin_model(model).ok_or_else(|| Usage(format!("unknown model `{model}`")))?;
            let e = elab(cli, file)?;
            let mut status = if e.status() == Status::Fail { Status::Fail } else { Status::Pass };
            for o in e.outcomes.iter().filter(|o| o.judgment == "eq" && o.terms.len() == 2) {
                let ctx = o.scope.as_ref().expect("elaborated in a context");
                let p = ctx.presentation();
                let (mut seen, mut bad) = (0usize, None);
                for_each_assignment(p, &m, &ctx.facts.facts, MAX_ASSIGNMENTS, &mut |a| {
                    seen += 1;
                    match (eval_mor(p, &m, a, &o.terms[0]), eval_mor(p, &m, a, &o.terms[1])) {
                        (Ok(x), Ok(y)) if x == y => ControlFlow::Continue(()),
                        (l, r) => {
                            bad = Some(format!("{l:?} vs {r:?}"));
                            ControlFlow::Break(())
                        }
                    }
                });
                match bad {
                    None => println!("ok eq {}: holds under {seen} assignment(s) into {model}", o.span),
                    Some(b) => {
                        println!("FAIL eq {}: differs in {model}: {b}", o.span);
                        status = Status::Fail;
                    }
                }
            }
            Ok(code(status))
        }
        Cmd::ExportJson { file } => {
            if is_json(file) {
                let c = FinCat::from_json(&read(file)?).map_err(|e| Usage(e.to_string()))?;
                println!("{}", c.to_json());
                return Ok(EXIT_PASS);
            }
            let e = elab(cli, file)?;
            let sketches: Vec<_> = e
                .sketches
                .iter()
                .map(|(n, p)| json!({"name": n, "presentation": serde_json::from_str::<serde_json::Value>(&p.to_json()).unwrap_or_default()}))
                .collect();
            let contexts: Vec<_> = e
                .contexts
                .iter()
                .map(|c| {
                    json!({
                        "name": c.name,
                        "depth": c.context.depth(),
                        "variables": c.variables.iter().map(|(x, v)| json!({"name": x, "generator": v.to_string(), "type": c.context.type_of(v).map(|t| t.to_string()).unwrap_or_default()})).collect::<Vec<_>>(),
                        "facts": c.context.facts.facts.iter().map(|(l, r)| [l.to_string(), r.to_string()]).collect::<Vec<_>>(),
                    })
                })
                .collect();
            let out = json!({
                "seed": cli.seed,
                "budget": cli.budget,
                "status": e.status(),
                "models": e.models,
                "sketches": sketches,
                "contexts": contexts,
                "outcomes": e.outcomes,
                "diagnostics": e.diagnostics,
            });
            println!("{}", serde_json::to_string_pretty(&out).expect("json"));
            Ok(code(e.status()))
        }
        Cmd::ExportDot { file } => {
            if is_json(file) {
                let c = FinCat::from_json(&read(file)?).map_err(|e| Usage(e.to_string()))?;
                let chosen = lcc_core::fin::canonicalize(&c).ok();
                print!("{}", to_dot(&c, chosen.as_ref()));
                return Ok(EXIT_PASS);
            }
            let e = elab(cli, file)?;
            print!("{}", sketch_dot(&e));
            Ok(code(e.status()))
        }
    }
}

/// Generators of every sketch as a graph; compound objects become their own nodes.
fn sketch_dot(e: &Elaborated) -> String {
    let mut s = String::from("digraph sketch {\n");
    for (i, (name, p)) in e.sketches.iter().enumerate() {
        s.push_str(&format!("  subgraph cluster_{i} {{\n    label=\"{}\";\n", name.replace('"', "\\\"")));
        for o in p.all_obj_gens() {
            s.push_str(&format!("    \"{i}:{o}\" [label=\"{o}\"];\n"));
        }
        for a in p.all_mor_gens() {
            let node = |x: &lcc_core::Obj| format!("\"{i}:{}\"", x.to_string().replace('"', "\\\""));
            s.push_str(&format!("    {} -> {} [label=\"{}\"];\n", node(&a.dom), node(&a.cod), a.name));
        }
        s.push_str("  }\n");
    }
    s.push_str("}\n");
    s
}
