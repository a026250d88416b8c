use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::thread;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::{json, Value};

use pif_cli::input::{envs_over, load_realizer, parse_counter, parse_literals, parse_numbers};
use pif_cli::schema::validate;
use pif_core::epsilon::dp_problem;
use pif_core::epsilon::dp_witness;
use pif_core::extract::{
    builtin_derivations, builtin_mr_realizer, dp_left_branch, dp_right_branch, extract_dialectica, verify_realizer,
    CounterSource, Realizer, VerificationReport, VerifyError,
};
use pif_core::game::{
    play, strategy_from_realizer, AbelardStrategy, Backtracking, Counter, EloiseStrategy, Exhaustive, GameInstance,
    Interactive, RealizerStrategy, Scripted, Winner,
};
use pif_core::kernel::{typecheck, SimpleType, TypingContext};
use pif_core::learning::{
    change_counts, dp_learn, dp_omega_solve, stateful_dp_realizer, stateful_dp_realizer_memo, Functional,
};
use pif_core::logic::{CounterFunction, Formula, PredicateEnv};
use pif_core::syntax::{parse_closed_term, parse_formula, parse_type};
use pif_core::trace::{Step, Trace};
use pif_core::translations::{
    dialectica_translate, mr_translate, negative_translate, simplify_double_neg, BotConfig, NegVariant,
};

const DP: &str = "exists n. forall m. P(n) -> P(m)";

/// Computational interpretations of classical proofs, run on finite models.
#[derive(Parser, Debug)]
#[command(name = "pif", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Negative translation, modified realizability or Dialectica reading of a formula.
    Translate(TranslateArgs),
    /// Extract a realizer from a built-in derivation.
    Extract(ExtractArgs),
    /// Check a realizer against its matrix on finite models.
    Verify(VerifyArgs),
    /// Solve the critical axioms of the drinker derivation by repair.
    Epsilon(EpsilonArgs),
    /// Run a learning procedure.
    Learn(LearnArgs),
    /// Play the Eloise/Abelard game on a prenex exists-forall matrix.
    Play(PlayArgs),
    /// Validate a trace document and print it in canonical form.
    Trace(TraceArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Interp {
    Nn,
    Mr,
    Dialectica,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Variant {
    Kuroda,
    Gg,
}

impl From<Variant> for NegVariant {
    fn from(v: Variant) -> Self {
        match v {
            Variant::Kuroda => NegVariant::Kuroda,
            Variant::Gg => NegVariant::GoedelGentzen,
        }
    }
}

#[derive(clap::Args, Debug)]
struct TranslateArgs {
    #[arg(long, value_enum)]
    interp: Interp,
    /// Formula to translate.
    #[arg(long, default_value = DP)]
    formula: String,
    /// Negative translation used by `nn` and by `--classical`.
    #[arg(long, value_enum, default_value = "kuroda")]
    variant: Variant,
    /// Realizer type of falsity for `mr`.
    #[arg(long, default_value = "Nat")]
    bot_type: String,
    /// Apply the negative translation before `mr` or `dialectica`.
    #[arg(long)]
    classical: bool,
    /// Remove double negations over atoms (on by default for `dialectica`).
    #[arg(long)]
    simplify: bool,
    /// Keep double negations for `dialectica`.
    #[arg(long, conflicts_with = "simplify")]
    no_simplify: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Proof {
    Dp,
    DpLeft,
    DpRight,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ExtractInterp {
    Dialectica,
    Mr,
}

#[derive(clap::Args, Debug)]
struct ExtractArgs {
    #[arg(long, value_enum, default_value = "dp")]
    proof: Proof,
    #[arg(long, value_enum, default_value = "dialectica")]
    interp: ExtractInterp,
    /// Realizer type of falsity for `mr`.
    #[arg(long, default_value = "Nat")]
    bot_type: String,
    /// Also write the realizer document here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args, Debug)]
struct VerifyArgs {
    /// Realizer document, or a file holding a bare closed term.
    #[arg(long)]
    realizer: PathBuf,
    /// Goal whose Dialectica reading a bare term realizes.
    #[arg(long, default_value = DP)]
    formula: String,
    /// Check every unary environment over this many elements.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..=12), default_value_t = 4, conflicts_with = "env")]
    domain: u64,
    /// Check a single environment instead.
    #[arg(long)]
    env: Option<PathBuf>,
    /// Try every counter value (the default).
    #[arg(long, conflicts_with = "sample")]
    exhaustive: bool,
    /// Try this many random counter tables per environment.
    #[arg(long)]
    sample: Option<usize>,
    /// Seed for `--sample`; PIF_SEED takes precedence.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum EpsilonProof {
    Dp,
}

#[derive(clap::Args, Debug)]
struct EpsilonArgs {
    #[arg(long, value_enum, default_value = "dp")]
    proof: EpsilonProof,
    #[arg(long)]
    env: PathBuf,
    /// Interpretation of the universal epsilon term, e.g. `5,0,0` or a term.
    #[arg(long)]
    counter: String,
    #[command(flatten)]
    out: TraceOut,
}

#[derive(clap::Args, Debug)]
struct TraceOut {
    /// Write the trace document here.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Write a DOT rendering of the trace here (`-` for stdout).
    #[arg(long)]
    dot: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Instance {
    Dp,
    Dpomega,
    DpState,
}

#[derive(clap::Args, Debug)]
struct LearnArgs {
    #[arg(long, value_enum)]
    instance: Instance,
    #[arg(long)]
    env: PathBuf,
    /// Counter function g for `dp` and `dp-state`.
    #[arg(long)]
    counter: Option<String>,
    /// Functional omega for `dpomega`, a closed term of type (Nat -> Nat) -> Nat.
    #[arg(long)]
    omega: Option<String>,
    /// Functional phi for `dpomega`.
    #[arg(long)]
    phi: Option<String>,
    /// Binary predicate holding the family P_n(m) for `dpomega`.
    #[arg(long, default_value = "P")]
    family: String,
    /// Starting query state for `dp-state`, e.g. `P(0), ~P(3)`.
    #[arg(long, default_value = "")]
    state: String,
    /// Answer `dp-state` tests from the state before asking the environment.
    #[arg(long)]
    memo: bool,
    #[arg(long, default_value_t = 64)]
    fuel: usize,
    #[command(flatten)]
    out: TraceOut,
}

#[derive(Clone, Debug)]
enum EloiseChoice {
    Realizer(PathBuf),
    Backtrack,
}

#[derive(Clone, Debug)]
enum AbelardChoice {
    Interactive,
    Script(PathBuf),
    Exhaustive,
    Counter(String),
}

fn eloise_choice(s: &str) -> Result<EloiseChoice, String> {
    match s.split_once(':') {
        Some(("realizer", p)) if !p.is_empty() => Ok(EloiseChoice::Realizer(p.into())),
        None if s == "backtrack" => Ok(EloiseChoice::Backtrack),
        _ => Err("expected `realizer:<file>` or `backtrack`".into()),
    }
}

fn abelard_choice(s: &str) -> Result<AbelardChoice, String> {
    match s.split_once(':') {
        Some(("script", p)) if !p.is_empty() => Ok(AbelardChoice::Script(p.into())),
        Some(("counter", t)) if !t.is_empty() => Ok(AbelardChoice::Counter(t.into())),
        None if s == "interactive" => Ok(AbelardChoice::Interactive),
        None if s == "exhaustive" => Ok(AbelardChoice::Exhaustive),
        _ => Err("expected `interactive`, `exhaustive`, `script:<file>` or `counter:<table>`".into()),
    }
}

#[derive(clap::Args, Debug)]
struct PlayArgs {
    /// Quantifier-free matrix in the variables n (Eloise) and m (Abelard).
    #[arg(long, default_value = "P(n) -> P(m)")]
    matrix: String,
    #[arg(long)]
    env: PathBuf,
    #[arg(long, value_parser = eloise_choice)]
    eloise: EloiseChoice,
    #[arg(long, value_parser = abelard_choice)]
    abelard: AbelardChoice,
    /// Round bound; defaults to the domain size plus one.
    #[arg(long)]
    max_rounds: Option<usize>,
}

#[derive(clap::Args, Debug)]
struct TraceArgs {
    file: PathBuf,
    /// Write a DOT rendering here (`-` for stdout).
    #[arg(long)]
    dot: Option<PathBuf>,
    /// Graph name used in the DOT output.
    #[arg(long, default_value = "trace")]
    name: String,
}

/// Bad input named by the flag it came from; exits with status 2.
#[derive(Debug)]
struct Usage(String);

impl fmt::Display for Usage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(flag: &str, e: impl fmt::Display) -> anyhow::Error {
    anyhow!(Usage(format!("{flag}: {e}")))
}

fn read_input(flag: &str, path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| usage(flag, format!("{}: {e}", path.display())))
}

fn load_env(flag: &str, path: &Path) -> Result<PredicateEnv> {
    let text = read_input(flag, path)?;
    let doc: Value = serde_json::from_str(&text).map_err(|e| usage(flag, e))?;
    validate("env", &doc).map_err(|e| usage(flag, e))?;
    PredicateEnv::from_json(&text).map_err(|e| usage(flag, e))
}

fn formula_arg(flag: &str, text: &str) -> Result<Formula> {
    parse_formula(text).map_err(|e| usage(flag, e))
}

fn bot_config(text: &str) -> Result<BotConfig> {
    Ok(BotConfig {
        bot_type: parse_type(text).map_err(|e| usage("--bot-type", e))?,
    })
}

/// Prints a document after checking it against its schema.
fn emit(schema: &str, doc: &Value) -> Result<()> {
    validate(schema, doc).with_context(|| format!("refusing to print an invalid {schema} document"))?;
    print_out(&(serde_json::to_string_pretty(doc)? + "\n"))
}

/// Writes to stdout; a closed pipe (as in `pif ... | head`) is not an error.
fn print_out(text: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn write_doc(path: &Path, doc: &Value) -> Result<()> {
    fs::write(path, serde_json::to_string_pretty(doc)? + "\n").with_context(|| format!("writing {}", path.display()))
}

fn write_trace(out: &TraceOut, trace: &Trace, name: &str) -> Result<()> {
    if let Some(p) = &out.trace {
        write_doc(p, &trace.to_json())?;
    }
    if let Some(p) = &out.dot {
        write_dot(p, trace, name)?;
    }
    Ok(())
}

fn write_dot(path: &Path, trace: &Trace, name: &str) -> Result<()> {
    let dot = trace.to_dot(name);
    if path == Path::new("-") {
        print_out(&dot)
    } else {
        fs::write(path, dot).with_context(|| format!("writing {}", path.display()))
    }
}

fn translate(a: TranslateArgs) -> Result<bool> {
    let f = formula_arg("--formula", &a.formula)?;
    let variant = NegVariant::from(a.variant);
    let mut doc = json!({"interp": format!("{:?}", a.interp).to_lowercase(), "formula": f.to_string()});
    match a.interp {
        Interp::Nn => {
            let mut t = negative_translate(&f, variant);
            if a.simplify {
                t = simplify_double_neg(&t, None);
            }
            doc["variant"] = json!(variant.to_string());
            doc["translation"] = json!(t.to_string());
        }
        Interp::Mr | Interp::Dialectica => {
            let mut g = f.clone();
            if a.classical {
                g = negative_translate(&g, variant);
                doc["variant"] = json!(variant.to_string());
            }
            let simplify = match a.interp {
                Interp::Dialectica => !a.no_simplify,
                _ => a.simplify,
            };
            if simplify {
                g = simplify_double_neg(&g, None);
            }
            let sig = if a.interp == Interp::Mr {
                let cfg = bot_config(&a.bot_type)?;
                doc["botType"] = json!(cfg.bot_type.to_string());
                mr_translate(&g, &cfg)
            } else {
                dialectica_translate(&g)
            };
            doc["translation"] = json!(g.to_string());
            doc["signature"] = sig.to_json();
        }
    }
    emit("translation", &doc)?;
    Ok(true)
}

fn extract(a: ExtractArgs) -> Result<bool> {
    let r = match a.interp {
        ExtractInterp::Mr => {
            if a.proof != Proof::Dp {
                return Err(usage(
                    "--proof",
                    "modified realizability extraction is only built in for `dp`",
                ));
            }
            builtin_mr_realizer(&bot_config(&a.bot_type)?)
        }
        ExtractInterp::Dialectica => {
            let d = match a.proof {
                Proof::Dp => builtin_derivations().dp,
                Proof::DpLeft => dp_left_branch()?,
                Proof::DpRight => dp_right_branch()?,
            };
            extract_dialectica(&d)?
        }
    };
    let doc = r.to_json();
    emit("realizer", &doc)?;
    if let Some(p) = &a.out {
        write_doc(p, &doc)?;
    }
    Ok(true)
}

fn seed(flag: Option<u64>) -> Result<u64> {
    match std::env::var("PIF_SEED") {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| usage("PIF_SEED", format!("`{s}` is not a seed"))),
        Err(_) => Ok(flag.unwrap_or_else(rand::random)),
    }
}

struct Sweep {
    envs: usize,
    checked: u64,
    /// Index of the first failing environment and its report.
    failure: Option<(usize, VerificationReport)>,
}

/// Checks each environment, fanning out across threads. Results are merged
/// in environment order, so the report does not depend on scheduling.
fn verify_all(r: &Realizer, envs: &[PredicateEnv], src: &CounterSource) -> Result<Sweep> {
    let workers = thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
        .min(envs.len().max(1));
    let chunk = envs.len().div_ceil(workers).max(1);
    let reports: Vec<VerificationReport> = thread::scope(|s| {
        let handles: Vec<_> = envs
            .chunks(chunk)
            .map(|part| {
                s.spawn(move || {
                    let mut out = Vec::new();
                    for env in part {
                        let rep = verify_realizer(r, env, src)?;
                        let failed = !rep.passed;
                        out.push(rep);
                        if failed {
                            break;
                        }
                    }
                    Ok::<_, anyhow::Error>(out)
                })
            })
            .collect();
        let mut all = Vec::new();
        for h in handles {
            let part = h.join().map_err(|_| anyhow!("verification worker panicked"))??;
            let failed = part.last().is_some_and(|r| !r.passed);
            all.extend(part);
            if failed {
                break;
            }
        }
        Ok::<_, anyhow::Error>(all)
    })?;
    let checked = reports.iter().map(|r| r.checked).sum();
    let failure = reports.iter().position(|r| !r.passed).map(|i| (i, reports[i].clone()));
    Ok(Sweep {
        envs: reports.len(),
        checked,
        failure,
    })
}

fn verify(a: VerifyArgs) -> Result<bool> {
    let goal = formula_arg("--formula", &a.formula)?;
    let text = read_input("--realizer", &a.realizer)?;
    let r = load_realizer(&text, &goal).map_err(|e| usage("--realizer", e))?;
    let envs = match &a.env {
        Some(p) => vec![load_env("--env", p)?],
        None => {
            let preds: Vec<String> = r.signature.matrix.predicates().into_iter().collect();
            envs_over(&preds, a.domain).map_err(|e| usage("--domain", e))?
        }
    };
    let domain = envs[0].domain();
    let (src, seed) = match a.sample {
        None => (CounterSource::Exhaustive, None),
        Some(n) => {
            let seed = seed(a.seed)?;
            eprintln!("seed: {seed}");
            let mut rng = StdRng::seed_from_u64(seed);
            let tables = (0..n)
                .map(|_| CounterFunction::Table((0..domain).map(|_| rng.gen_range(0..domain)).collect()))
                .collect();
            (CounterSource::Functions(tables), Some(seed))
        }
    };
    let Sweep {
        envs: count,
        checked,
        failure,
    } = verify_all(&r, &envs, &src).map_err(|e| match e.downcast_ref::<VerifyError>() {
        Some(VerifyError::CounterTypeNotEnumerable { .. }) if a.sample.is_none() => {
            e.context("exhaustive checking is out of reach here; try --sample N")
        }
        _ => e,
    })?;
    let counterexample = failure.as_ref().map(|(i, rep)| {
        let mut ce = rep.to_json()["counterexample"].clone();
        ce["env"] = envs[*i].to_json();
        ce
    });
    let doc = json!({
        "passed": failure.is_none(),
        "domain": domain,
        "envs": count,
        "checked": checked,
        "mode": if a.sample.is_some() { "sample" } else { "exhaustive" },
        "seed": seed,
        "counterexample": counterexample,
    });
    emit("report", &doc)?;
    Ok(failure.is_none())
}

fn counter_arg(flag: &str, text: Option<&str>) -> Result<CounterFunction> {
    let text = text.ok_or_else(|| usage(flag, "required for this instance"))?;
    parse_counter(text).map_err(|e| usage(flag, e))
}

fn epsilon(a: EpsilonArgs) -> Result<bool> {
    let EpsilonProof::Dp = a.proof;
    let env = load_env("--env", &a.env)?;
    let h = counter_arg("--counter", Some(&a.counter))?;
    let p = dp_problem();
    let (w, sol) = dp_witness(&env, &h)?;
    let axioms: Vec<Value> = p
        .axioms
        .iter()
        .map(|x| json!({"id": x.id, "formula": x.formula.to_string()}))
        .collect();
    let doc = json!({
        "proof": "dp",
        "conclusion": p.conclusion.to_string(),
        "axioms": axioms,
        "witness": w,
        "repairs": sol.repairs,
        "assignment": sol.assignment.to_json(),
        "trace": sol.trace.to_json(),
    });
    validate("trace", &doc["trace"])?;
    emit("epsilon", &doc)?;
    write_trace(&a.out, &sol.trace, "epsilon")?;
    Ok(true)
}

fn functional_arg<'a>(flag: &str, text: Option<&str>) -> Result<Functional<'a>> {
    let text = text.ok_or_else(|| usage(flag, "required for `dpomega`"))?;
    let t = parse_closed_term(text).map_err(|e| usage(flag, e))?;
    let ty = typecheck(&t, &TypingContext::new()).map_err(|e| usage(flag, e))?;
    let want = SimpleType::arrow(SimpleType::nat_to_nat(), SimpleType::Nat);
    if ty != want {
        return Err(usage(flag, format!("expected a term of type {want}, found {ty}")));
    }
    Ok(Functional::Term(t))
}

fn learn(a: LearnArgs) -> Result<bool> {
    let env = load_env("--env", &a.env)?;
    let (doc, trace, ok) = match a.instance {
        Instance::Dp => {
            let g = counter_arg("--counter", a.counter.as_deref())?;
            let t = dp_learn(&env, &g, a.fuel)?;
            let trace = t.to_trace();
            let doc = json!({
                "instance": "dp",
                "limit": t.limit,
                "updates": t.updates(),
                "terminated": t.terminated,
                "trace": trace.to_json(),
            });
            (doc, trace, t.terminated)
        }
        Instance::Dpomega => {
            if !env.is_family(&a.family) {
                return Err(usage(
                    "--family",
                    format!("`{}` is not a family in the environment", a.family),
                ));
            }
            let omega = functional_arg("--omega", a.omega.as_deref())?;
            let phi = functional_arg("--phi", a.phi.as_deref())?;
            let (f, t) = dp_omega_solve(&omega, &phi, &env, &a.family, a.fuel)?;
            let trace = t.to_trace();
            let changes: BTreeMap<String, usize> =
                change_counts(&t).into_iter().map(|(k, v)| (k.to_string(), v)).collect();
            let doc = json!({
                "instance": "dpomega",
                "limit": f.to_json(),
                "updates": t.updates(),
                "terminated": t.terminated,
                "changes": changes,
                "trace": trace.to_json(),
            });
            (doc, trace, t.terminated)
        }
        Instance::DpState => {
            let g = counter_arg("--counter", a.counter.as_deref())?;
            let s0 = parse_literals(&a.state).map_err(|e| usage("--state", e))?;
            let before = s0.literals.len();
            let (w, s, calls) = if a.memo {
                let (w, s, c) = stateful_dp_realizer_memo(&g, &env, s0.clone())?;
                (w, s, Some(c))
            } else {
                let (w, s) = stateful_dp_realizer(&g, &env, s0.clone())?;
                (w, s, None)
            };
            let mut trace = Trace::new();
            trace.push(Step::new("set").with("state", s0.to_strings()));
            for l in &s.literals[before..] {
                trace.push(
                    Step::new("query")
                        .with("literal", format!("{}({})", l.pred, join(&l.args)))
                        .with("value", l.polarity),
                );
            }
            trace.push(
                Step::new("end")
                    .with("limit", w.to_string())
                    .with("state", s.to_strings()),
            );
            let doc = json!({
                "instance": "dp-state",
                "witness": w,
                "state": s.to_strings(),
                "oracleCalls": calls,
                "trace": trace.to_json(),
            });
            (doc, trace, true)
        }
    };
    validate("trace", &doc["trace"])?;
    emit("learn", &doc)?;
    write_trace(&a.out, &trace, "learning")?;
    Ok(ok)
}

fn join(args: &[u64]) -> String {
    args.iter().map(u64::to_string).collect::<Vec<_>>().join(", ")
}

fn game(a: PlayArgs) -> Result<bool> {
    let matrix = formula_arg("--matrix", &a.matrix)?;
    let env = load_env("--env", &a.env)?;
    let mut g = GameInstance::new(matrix, env).map_err(|e| usage("--matrix", e))?;
    if let Some(n) = a.max_rounds {
        g = g.with_max_rounds(n);
    }
    let mut eloise: Box<dyn EloiseStrategy> = match &a.eloise {
        EloiseChoice::Backtrack => Box::new(Backtracking),
        EloiseChoice::Realizer(p) => {
            let text = read_input("--eloise", p)?;
            let strat = if text.trim_start().starts_with('{') {
                let doc: Value = serde_json::from_str(&text).map_err(|e| usage("--eloise", e))?;
                let r = Realizer::from_json(&doc).map_err(|e| usage("--eloise", e))?;
                strategy_from_realizer(&r)
            } else {
                RealizerStrategy::from_term(parse_closed_term(text.trim()).map_err(|e| usage("--eloise", e))?)
            };
            Box::new(strat.map_err(|e| usage("--eloise", e))?)
        }
    };
    let mut abelard: Box<dyn AbelardStrategy> = match &a.abelard {
        AbelardChoice::Interactive => Box::new(Interactive::new(std::io::stdin().lock(), std::io::stderr())),
        AbelardChoice::Exhaustive => Box::new(Exhaustive),
        AbelardChoice::Script(p) => {
            let moves = parse_numbers(&read_input("--abelard", p)?).map_err(|e| usage("--abelard", e))?;
            Box::new(Scripted::new(moves))
        }
        AbelardChoice::Counter(t) => match parse_counter(t).map_err(|e| usage("--abelard", e))? {
            CounterFunction::Table(v) => Box::new(Counter(v)),
            CounterFunction::Term(_) => return Err(usage("--abelard", "counter strategies take a table")),
        },
    };
    let t = play(&g, eloise.as_mut(), abelard.as_mut())?;
    emit("transcript", &t.to_json())?;
    Ok(t.winner == Winner::Eloise)
}

fn trace(a: TraceArgs) -> Result<bool> {
    let text = read_input("<FILE>", &a.file)?;
    let doc: Value = serde_json::from_str(&text).map_err(|e| usage("<FILE>", e))?;
    if let Err(e) = validate("trace", &doc) {
        eprintln!("error: {e}");
        return Ok(false);
    }
    let t = Trace::from_json(&doc)?;
    emit("trace", &t.to_json())?;
    if let Some(p) = &a.dot {
        write_dot(p, &t, &a.name)?;
    }
    Ok(true)
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Translate(a) => translate(a),
        Command::Extract(a) => extract(a),
        Command::Verify(a) => verify(a),
        Command::Epsilon(a) => epsilon(a),
        Command::Learn(a) => learn(a),
        Command::Play(a) => game(a),
        Command::Trace(a) => trace(a),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.is::<Usage>() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
