//! The `syn` command-line front end.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::models::{init_fold, BuiltinModel, Model, Order};
use crate::reduction::{trace_lines, NormStatus, Rewriter, Strategy};
use crate::report::Verdict;
use crate::sigspec::{lambda_beta, parse_signature_file, to_json, Signature2};
use crate::suite::run_laws;
use crate::term::{parse_term, print_term, subst_checked, validate_context, Ctx, SubstMap, Term};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_FUEL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "syn", version, about = "Binding signatures with reduction rules")]
pub struct Cli {
    /// Signature file (JSON). Defaults to the bundled untyped lambda calculus with beta.
    #[arg(long, global = true, env = "SYN_SIG")]
    pub sig: Option<PathBuf>,
    /// Comma-separated names of the free variables, outermost first.
    #[arg(long, global = true, default_value = "")]
    pub context: String,
    /// Machine-readable output.
    #[arg(long, global = true)]
    pub json: bool,
    /// Suppress timing fields.
    #[arg(long, global = true)]
    pub deterministic: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum StrategyArg {
    Outermost,
    Innermost,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Outermost => Strategy::Outermost,
            StrategyArg::Innermost => Strategy::Innermost,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate the signature.
    Check,
    /// Parse a term and print it back in canonical form.
    Parse { term: String },
    /// Apply a substitution `x=(term),...`; images live in `--target`.
    Subst {
        #[arg(long)]
        map: String,
        /// Target context; defaults to the source context.
        #[arg(long)]
        target: Option<String>,
        term: String,
    },
    /// All one-step reducts.
    Step { term: String },
    /// Reduce to normal form.
    Normalize {
        #[arg(long, value_enum, default_value = "outermost")]
        strategy: StrategyArg,
        #[arg(long, default_value_t = 1000)]
        fuel: usize,
        /// Print every step as a JSON line.
        #[arg(long)]
        trace: bool,
        term: String,
    },
    /// Search for a reduction path from X to Y.
    Leq {
        #[arg(long, default_value_t = 1000)]
        fuel: usize,
        /// Exit 3 when the answer is unknown.
        #[arg(long)]
        strict: bool,
        x: String,
        y: String,
    },
    /// Run the law suites.
    Laws {
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Fuel for the syntactic model's order.
        #[arg(long, default_value_t = 1000)]
        fuel: usize,
    },
    /// Test whether a model satisfies the inequations.
    Satisfies {
        #[arg(long)]
        model: String,
        /// Only this inequation.
        #[arg(long)]
        ineq: Option<String>,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        fuel: usize,
        /// Exit 3 when the verdict is inconclusive.
        #[arg(long)]
        strict: bool,
    },
    /// Fold a term into a model.
    Fold {
        #[arg(long)]
        model: String,
        #[arg(long, default_value_t = 1000)]
        fuel: usize,
        term: String,
    },
}

/// Runs `syn` with `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(Fail(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

/// A usage or input error; always exit 2.
#[derive(Debug)]
struct Fail(String);

impl<E: std::fmt::Display> From<E> for Fail {
    fn from(e: E) -> Self {
        Fail(e.to_string())
    }
}

fn load(cli: &Cli) -> Result<Signature2, Fail> {
    match &cli.sig {
        None => Ok(lambda_beta()),
        Some(path) => {
            let bytes = std::fs::read(path).map_err(|e| Fail(format!("{}: {e}", path.display())))?;
            parse_signature_file(&bytes).map_err(|e| Fail(format!("{}: {e}", path.display())))
        }
    }
}

fn names(spec: &str) -> Result<Vec<String>, Fail> {
    let v: Vec<String> = spec
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(String::from)
        .collect();
    validate_context(&v).map_err(Fail)?;
    Ok(v)
}

fn term_in(sig2: &Signature2, ctx: &[String], src: &str) -> Result<Term, Fail> {
    parse_term(&sig2.sig, ctx, src).map_err(|e| Fail(format!("in `{src}`: {e}")))
}

fn emit(out: &mut dyn Write, line: impl std::fmt::Display) -> Result<(), Fail> {
    writeln!(out, "{line}").map_err(Fail::from)
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32, Fail> {
    let sig2 = load(cli)?;
    let sig = &sig2.sig;
    let ctx = names(&cli.context)?;
    let n: Ctx = ctx.len();
    let show = |t: &Term| print_term(sig, &ctx, t);
    match &cli.command {
        Command::Check => {
            if cli.json {
                emit(out, to_json(&sig2))?;
            } else {
                emit(
                    out,
                    format!(
                        "ok: {} ({} operators, {} inequations)",
                        sig2.name,
                        sig.len(),
                        sig2.ineqs().len()
                    ),
                )?;
            }
            Ok(EXIT_OK)
        }
        Command::Parse { term } => {
            let t = term_in(&sig2, &ctx, term)?;
            if cli.json {
                emit(out, json!({ "context": ctx, "term": show(&t) }))?;
            } else {
                emit(out, show(&t))?;
            }
            Ok(EXIT_OK)
        }
        Command::Subst { map, target, term } => {
            let target = match target {
                Some(t) => names(t)?,
                None => ctx.clone(),
            };
            let t = term_in(&sig2, &ctx, term)?;
            let mut images: Vec<Option<Term>> = vec![None; n];
            for (name, src) in split_map(map)? {
                let Some(v) = ctx.iter().rposition(|x| *x == name) else {
                    return Err(Fail(format!("`{name}` is not in the context")));
                };
                images[v] = Some(term_in(&sig2, &target, &src)?);
            }
            let images =
                images
                    .into_iter()
                    .enumerate()
                    .map(|(v, img)| match img {
                        Some(img) => Ok(img),
                        None => target.iter().rposition(|x| *x == ctx[v]).map(Term::Var).ok_or_else(|| {
                            Fail(format!("`{}` is unmapped and absent from the target context", ctx[v]))
                        }),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
            let out_t = subst_checked(sig, &SubstMap::new(target.len(), images), &t)?;
            let printed = print_term(sig, &target, &out_t);
            if cli.json {
                emit(out, json!({ "context": target, "term": printed }))?;
            } else {
                emit(out, printed)?;
            }
            Ok(EXIT_OK)
        }
        Command::Step { term } => {
            let t = term_in(&sig2, &ctx, term)?;
            let rw = Rewriter::new(&sig2);
            let reducts: Vec<String> = rw.step(n, &t).iter().map(show).collect();
            if cli.json {
                emit(out, json!(reducts))?;
            } else {
                for r in reducts {
                    emit(out, r)?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Normalize {
            strategy,
            fuel,
            trace,
            term,
        } => {
            let t = term_in(&sig2, &ctx, term)?;
            let res = Rewriter::new(&sig2).normalize(n, &t, (*strategy).into(), *fuel);
            if *trace {
                for line in trace_lines(&sig2, &ctx, &res.trace) {
                    emit(out, serde_json::to_string(&line)?)?;
                }
            }
            let status = match res.status {
                NormStatus::NormalForm => "normal-form",
                NormStatus::FuelExhausted => "fuel-exhausted",
            };
            if cli.json {
                emit(
                    out,
                    json!({ "status": status, "steps": res.steps, "term": show(&res.term) }),
                )?;
            } else if res.status == NormStatus::NormalForm {
                emit(out, show(&res.term))?;
            } else {
                emit(
                    out,
                    format!("fuel exhausted after {} steps at {}", res.steps, show(&res.term)),
                )?;
            }
            Ok(match res.status {
                NormStatus::NormalForm => EXIT_OK,
                NormStatus::FuelExhausted => EXIT_FUEL,
            })
        }
        Command::Leq { fuel, strict, x, y } => {
            let (x, y) = (term_in(&sig2, &ctx, x)?, term_in(&sig2, &ctx, y)?);
            let res = Rewriter::new(&sig2).leq(n, &x, &y, *fuel);
            let path: Option<Vec<String>> = res.path.as_ref().map(|p| p.iter().map(show).collect());
            if cli.json {
                emit(
                    out,
                    json!({ "answer": res.answer.to_string(), "path": path, "visited": res.visited, "exhausted": res.exhausted }),
                )?;
            } else {
                emit(out, res.answer)?;
                for t in path.unwrap_or_default() {
                    emit(out, format!("  {t}"))?;
                }
            }
            Ok(if res.answer == Order::Unknown && *strict {
                EXIT_FUEL
            } else {
                EXIT_OK
            })
        }
        Command::Laws { samples, seed, fuel } => {
            let start = Instant::now();
            let reports = run_laws(&sig2, *samples, *seed, *fuel);
            let elapsed = start.elapsed().as_millis() as u64;
            let failed = reports.iter().filter(|r| !r.passed()).count();
            if cli.json {
                let mut doc = json!({ "reports": reports, "failed": failed });
                if !cli.deterministic {
                    doc["elapsed_ms"] = json!(elapsed);
                }
                emit(out, doc)?;
            } else {
                for r in &reports {
                    emit(out, r.summary())?;
                }
                let mut tail = format!("{} laws, {failed} failing", reports.len());
                if !cli.deterministic {
                    tail.push_str(&format!(", {elapsed} ms"));
                }
                emit(out, tail)?;
            }
            Ok(if failed == 0 { EXIT_OK } else { EXIT_FAILURE })
        }
        Command::Satisfies {
            model,
            ineq,
            samples,
            seed,
            fuel,
            strict,
        } => {
            let m = BuiltinModel::from_selector(&sig2, model, *fuel)?;
            let selected: Vec<_> = match ineq {
                Some(name) => vec![
                    sig2.ineq(name)
                        .ok_or_else(|| Fail(format!("no inequation named `{name}`")))?
                        .1,
                ],
                None => sig2.ineqs().iter().collect(),
            };
            let mut code = EXIT_OK;
            for q in selected {
                let v = crate::halfeq::satisfies(&m, q, *samples, *seed);
                match &v {
                    Verdict::Violated { .. } => code = EXIT_FAILURE,
                    Verdict::Inconclusive { .. } if *strict && code == EXIT_OK => code = EXIT_FUEL,
                    _ => {}
                }
                if cli.json {
                    let mut doc = serde_json::to_value(&v)?;
                    doc["inequation"] = json!(q.name);
                    emit(out, doc)?;
                } else {
                    emit(out, render_verdict(&q.name, &v))?;
                }
            }
            Ok(code)
        }
        Command::Fold { model, fuel, term } => {
            let m = BuiltinModel::from_selector(&sig2, model, *fuel)?;
            let t = term_in(&sig2, &ctx, term)?;
            let v = init_fold(&m, n, &t);
            let printed = print_term(m.signature(), &ctx, &v);
            if cli.json {
                emit(out, json!({ "model": model, "context": ctx, "term": printed }))?;
            } else {
                emit(out, printed)?;
            }
            Ok(EXIT_OK)
        }
    }
}

fn render_verdict(name: &str, v: &Verdict) -> String {
    match v {
        Verdict::Holds { samples } => format!("{name}: holds ({samples} samples)"),
        Verdict::Violated { samples, witness } => format!(
            "{name}: violated (after {samples} samples)\n  seed  {}\n  input {}\n  lhs   {}\n  rhs   {}",
            witness.seed, witness.input, witness.lhs, witness.rhs
        ),
        Verdict::Inconclusive { samples, witness } => format!(
            "{name}: inconclusive ({samples} samples)\n  seed  {}\n  input {}\n  lhs   {}\n  rhs   {}",
            witness.seed, witness.input, witness.lhs, witness.rhs
        ),
    }
}

/// Splits `x=(t),y=u` at top-level commas.
fn split_map(src: &str) -> Result<Vec<(String, String)>, Fail> {
    let mut entries = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let bytes = src.as_bytes();
    for (i, &b) in bytes.iter().enumerate().chain(std::iter::once((bytes.len(), &b','))) {
        match b {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b',' if depth == 0 => {
                let part = src[start..i].trim();
                start = i + 1;
                if part.is_empty() {
                    continue;
                }
                let Some((name, t)) = part.split_once('=') else {
                    return Err(Fail(format!("map entry `{part}` is not of the form name=term")));
                };
                entries.push((name.trim().to_string(), t.trim().to_string()));
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(Fail("unbalanced parentheses in --map".into()));
    }
    Ok(entries)
}
