//! `aieo`: command-line front end for the epsilon/tau workbench.
//!
//! Exit status: 0 when a verdict was produced (and met any `--expect-*`
//! flag), 1 when the verdict is a failure, 2 on usage or input errors.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use aieo_core::kernel::{parse_script, Sequent};
use aieo_core::model::{entails_capped, ChoiceModel, EntailmentVerdict, ModelDoc, DEFAULT_BUDGET};
use aieo_core::montague::{demonstrate_inadequacy, Lexicon, MontagueError};
use aieo_core::square::{
    build_square, check_square, parse_theory, proposition_check, SemanticOracle, SquareError,
};
use aieo_core::syntax::{
    dual_normalize, expand_quantifiers, free_vars, parse_formula, Formula, ParseError, Signature,
    SignatureError, Term,
};
use aieo_core::translate::{translate, Mode, TranslateError};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use thiserror::Error;

#[derive(Parser, Debug)]
#[command(name = "aieo", version, about = "Epsilon/tau calculus workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse a formula and show its syntax tree.
    Parse {
        formula: String,
        #[arg(long)]
        json: bool,
    },
    /// Reprint formulas in concrete syntax, one per line.
    Print {
        /// Formulas; with none, read them from --file.
        formulas: Vec<String>,
        #[arg(long)]
        file: Option<PathBuf>,
        /// Rewrite tau x. F to eps x. ~F first.
        #[arg(long)]
        dual: bool,
        /// Replace quantifiers by their eps/tau expansions first.
        #[arg(long)]
        expand: bool,
    },
    /// Translate a controlled English A/E/I/O sentence.
    Translate {
        sentence: String,
        #[arg(long, value_enum, default_value_t = ModeArg::Epsilon)]
        mode: ModeArg,
        /// Extra lexicon file loaded on top of the standard one.
        #[arg(long)]
        lexicon: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Bounded semantic entailment over choice models.
    Entail {
        /// Premise; repeat for several.
        #[arg(long = "gamma")]
        gamma: Vec<String>,
        #[arg(long)]
        phi: String,
        #[arg(long, default_value_t = 3)]
        bound: usize,
        /// Exit 1 if a countermodel is found.
        #[arg(long)]
        expect_valid: bool,
        #[arg(long)]
        json: bool,
    },
    /// Check a proof script and print its end-sequent.
    Prove {
        #[arg(long)]
        script: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Check the square of opposition for subject S and predicate P.
    Square {
        #[arg(long = "s")]
        subject: String,
        #[arg(long = "p")]
        predicate: String,
        /// Use ~P in place of P.
        #[arg(long)]
        negate_p: bool,
        /// Let the bivalence hypothesis pick between P and ~P.
        #[arg(long, conflicts_with = "negate_p")]
        select: bool,
        /// File of formulas, one per line.
        #[arg(long)]
        theory: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        bound: usize,
        #[arg(long)]
        json: bool,
    },
    /// Show where the standard first-order readings fall short.
    DemoInadequacies {
        /// Run a single demonstration (1, 2 or 3).
        #[arg(long)]
        which: Option<u8>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Epsilon,
    Montague,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Epsilon => Mode::Epsilon,
            ModeArg::Montague => Mode::Montague,
        }
    }
}

#[derive(Debug, Error)]
enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{what}: {source}")]
    Parse { what: String, source: ParseError },
    #[error("AIEO_BUDGET must be a positive integer, got `{0}`")]
    Budget(String),
    #[error(transparent)]
    Signature(#[from] SignatureError),
    #[error(transparent)]
    Translate(#[from] TranslateError),
    #[error(transparent)]
    Montague(#[from] MontagueError),
    #[error(transparent)]
    Square(#[from] SquareError),
    #[error("{0}")]
    Other(String),
}

/// What a command produced: its output and whether the verdict was a success.
struct Outcome {
    text: String,
    ok: bool,
}

impl Outcome {
    fn ok(text: String) -> Outcome {
        Outcome { text, ok: true }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(out) => {
            let mut text = out.text;
            if !text.ends_with('\n') {
                text.push('\n');
            }
            // a closed pipe downstream is not an error worth reporting
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn formula(what: &str, src: &str) -> Result<Formula, CliError> {
    parse_formula(src).map_err(|source| CliError::Parse {
        what: format!("{what} `{src}`"),
        source,
    })
}

fn budget() -> Result<u64, CliError> {
    match std::env::var("AIEO_BUDGET") {
        Err(_) => Ok(DEFAULT_BUDGET),
        Ok(v) => match v.trim().parse::<u64>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(CliError::Budget(v)),
        },
    }
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize")
}

fn run(cmd: Command) -> Result<Outcome, CliError> {
    match cmd {
        Command::Parse { formula: src, json } => {
            let f = formula("formula", &src)?;
            if json {
                return Ok(Outcome::ok(pretty(&json!({
                    "formula": f,
                    "free_vars": free_vars(&f),
                    "depth": f.depth(),
                    "dual_normal_form": dual_normalize(&f),
                    "quantifier_free": expand_quantifiers(&f),
                }))));
            }
            let mut out = String::new();
            tree_formula(&f, 0, &mut out);
            Ok(Outcome::ok(out))
        }
        Command::Print {
            formulas,
            file,
            dual,
            expand,
        } => {
            let mut sources: Vec<String> = formulas;
            if let Some(path) = file {
                let text = read(&path)?;
                sources.extend(
                    text.lines()
                        .map(|l| l.split('#').next().unwrap_or("").trim())
                        .filter(|l| !l.is_empty())
                        .map(str::to_string),
                );
            }
            if sources.is_empty() {
                return Err(CliError::Other("nothing to print: give formulas or --file".into()));
            }
            let mut out = String::new();
            for src in &sources {
                let mut f = formula("formula", src)?;
                if expand {
                    f = expand_quantifiers(&f);
                }
                if dual {
                    f = dual_normalize(&f);
                }
                writeln!(out, "{f}").unwrap();
            }
            Ok(Outcome::ok(out))
        }
        Command::Translate {
            sentence,
            mode,
            lexicon,
            json,
        } => {
            let mut lex = Lexicon::standard();
            if let Some(path) = lexicon {
                lex.load(&read(&path)?)?;
            }
            let f = translate(&sentence, mode.into(), &lex)?;
            if json {
                return Ok(Outcome::ok(pretty(&json!({
                    "sentence": sentence,
                    "mode": Mode::from(mode).to_string(),
                    "formula": f,
                }))));
            }
            Ok(Outcome::ok(f.to_string()))
        }
        Command::Entail {
            gamma,
            phi,
            bound,
            expect_valid,
            json,
        } => {
            let premises = gamma
                .iter()
                .map(|g| formula("premise", g))
                .collect::<Result<Vec<_>, _>>()?;
            let goal = formula("goal", &phi)?;
            let sig = Signature::infer(premises.iter().chain([&goal]))?;
            let verdict = entails_capped(&premises, &goal, &sig, bound, budget()?).map_err(SquareError::from)?;
            let ok = verdict.is_valid() || !expect_valid;
            let sequent = Sequent::new(premises, goal);
            let text = if json {
                pretty(&match &verdict {
                    EntailmentVerdict::ValidUpTo(n) => json!({
                        "sequent": sequent.to_string(),
                        "verdict": "valid_up_to",
                        "bound": n,
                    }),
                    EntailmentVerdict::Countermodel(c) => json!({
                        "sequent": sequent.to_string(),
                        "verdict": "countermodel",
                        "countermodel": c,
                    }),
                })
            } else {
                let mut out = format!("{sequent}\n");
                match &verdict {
                    EntailmentVerdict::ValidUpTo(n) => writeln!(out, "valid in every model of size <= {n}").unwrap(),
                    EntailmentVerdict::Countermodel(c) => {
                        writeln!(out, "countermodel of size {}:", c.model.size()).unwrap();
                        out.push_str(&render_model(&c.model));
                        for (v, d) in &c.assignment {
                            writeln!(out, "  {v} := {d}").unwrap();
                        }
                    }
                }
                out
            };
            Ok(Outcome { text, ok })
        }
        Command::Prove { script, json } => {
            let text = read(&script)?;
            let parsed = parse_script(&text).map_err(|e| CliError::Other(format!("{}: {e}", script.display())))?;
            let result = parsed.root.check();
            let (text, ok) = match (&result, json) {
                (Ok(end), false) => (format!("ok: {end}"), true),
                (Ok(end), true) => (
                    pretty(&json!({
                        "valid": true,
                        "end_sequent": end.to_string(),
                        "steps": parsed.root.size(),
                    })),
                    true,
                ),
                (Err(e), false) => {
                    let at = e.label.as_deref().and_then(|l| parsed.line_of(l));
                    let line = at.map(|n| format!("line {n}: ")).unwrap_or_default();
                    (format!("rejected: {line}{e}"), false)
                }
                (Err(e), true) => (
                    pretty(&json!({
                        "valid": false,
                        "label": e.label,
                        "line": e.label.as_deref().and_then(|l| parsed.line_of(l)),
                        "rule": e.rule.name(),
                        "reason": e.kind.to_string(),
                    })),
                    false,
                ),
            };
            Ok(Outcome { text, ok })
        }
        Command::Square {
            subject,
            predicate,
            negate_p,
            select,
            theory,
            bound,
            json,
        } => {
            let theory = match theory {
                Some(path) => parse_theory(&read(&path)?)?,
                None => Vec::new(),
            };
            let sig = Signature::unary_predicates([subject.as_str(), predicate.as_str()]);
            let oracle = SemanticOracle::with_budget(&sig, theory, bound, budget()?)?;
            if select {
                let outcome = proposition_check(&subject, &predicate, &oracle)?;
                let ok = outcome.report.all_ok();
                let text = if json {
                    pretty(&serde_json::to_value(&outcome).expect("report serializes"))
                } else {
                    format!(
                        "bivalence: {}\nchosen: {}\n\n{}",
                        outcome.bivalence, outcome.chosen, outcome.report
                    )
                };
                return Ok(Outcome { text, ok });
            }
            let sq = build_square(oracle.signature(), &subject, &predicate, negate_p)?;
            let report = check_square(&sq, &oracle)?;
            let ok = report.all_ok();
            let text = if json {
                pretty(&serde_json::to_value(&report).expect("report serializes"))
            } else {
                report.to_string()
            };
            Ok(Outcome { text, ok })
        }
        Command::DemoInadequacies { which, json } => {
            let which: Vec<u8> = match which {
                Some(n) => vec![n],
                None => vec![1, 2, 3],
            };
            let reports = which
                .iter()
                .map(|&n| demonstrate_inadequacy(n))
                .collect::<Result<Vec<_>, _>>()?;
            let text = if json {
                pretty(&serde_json::to_value(&reports).expect("report serializes"))
            } else {
                let parts: Vec<String> = reports.iter().map(ToString::to_string).collect();
                parts.join("\n\n")
            };
            Ok(Outcome::ok(text))
        }
    }
}

fn set(xs: impl IntoIterator<Item = String>) -> String {
    format!("{{{}}}", xs.into_iter().collect::<Vec<_>>().join(", "))
}

fn render_model(m: &ChoiceModel) -> String {
    let doc = ModelDoc::from(m);
    let mut out = String::new();
    writeln!(out, "  domain = {}", set(doc.domain.iter().map(ToString::to_string))).unwrap();
    for (name, rel) in &doc.predicates {
        let tuples = rel.tuples.iter().map(|t| match t.as_slice() {
            [d] => d.to_string(),
            _ => format!("({})", t.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")),
        });
        writeln!(out, "  {name} = {}", set(tuples)).unwrap();
    }
    for (name, d) in &doc.constants {
        writeln!(out, "  {name} = {d}").unwrap();
    }
    for (name, f) in &doc.functions {
        let rows = f
            .table
            .iter()
            .map(|(args, v)| format!("{name}({}) = {v}", args.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")));
        writeln!(out, "  {}", rows.collect::<Vec<_>>().join(", ")).unwrap();
    }
    let mut choice: Vec<String> = doc
        .choice
        .iter()
        .map(|(s, e)| format!("{} -> {e}", set(s.iter().map(ToString::to_string))))
        .collect();
    choice.push(format!("{{}} -> {}", doc.default));
    writeln!(out, "  choice: {}", choice.join(", ")).unwrap();
    out
}

fn line(out: &mut String, depth: usize, text: &str) {
    writeln!(out, "{}{text}", "  ".repeat(depth)).unwrap();
}

fn tree_formula(f: &Formula, depth: usize, out: &mut String) {
    match f {
        Formula::True => line(out, depth, "true"),
        Formula::False => line(out, depth, "false"),
        Formula::Pred(p, args) => {
            line(out, depth, &format!("pred {p}/{}", args.len()));
            args.iter().for_each(|t| tree_term(t, depth + 1, out));
        }
        Formula::Eq(l, r) => {
            line(out, depth, "eq");
            tree_term(l, depth + 1, out);
            tree_term(r, depth + 1, out);
        }
        Formula::Not(a) => {
            line(out, depth, "not");
            tree_formula(a, depth + 1, out);
        }
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            let op = match f {
                Formula::And(..) => "and",
                Formula::Or(..) => "or",
                _ => "implies",
            };
            line(out, depth, op);
            tree_formula(a, depth + 1, out);
            tree_formula(b, depth + 1, out);
        }
        Formula::Exists(x, body) | Formula::Forall(x, body) => {
            let q = if matches!(f, Formula::Exists(..)) { "exists" } else { "forall" };
            line(out, depth, &format!("{q} {x}"));
            tree_formula(body, depth + 1, out);
        }
    }
}

fn tree_term(t: &Term, depth: usize, out: &mut String) {
    match t {
        Term::Var(x) => line(out, depth, &format!("var {x}")),
        Term::Const(c) => line(out, depth, &format!("const {c}")),
        Term::App(g, args) => {
            line(out, depth, &format!("fn {g}/{}", args.len()));
            args.iter().for_each(|a| tree_term(a, depth + 1, out));
        }
        Term::Eps(x, body) | Term::Tau(x, body) => {
            let b = if matches!(t, Term::Eps(..)) { "eps" } else { "tau" };
            line(out, depth, &format!("{b} {x}"));
            tree_formula(body, depth + 1, out);
        }
    }
}
