//! Command-line driver: law suites, the four calculi, and hom-set enumeration.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails (the report is
//! still written to standard output), 2 on usage, parse or configuration
//! errors.

use std::ffi::OsString;
use std::fmt::Display;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use classified::calculi::{typecheck, Calculus, DenEnv, SecurityPoset, TypeError};
use classified::cset::{enumerate_hom, ClassifiedSet, EnumCap, Morphism};
use classified::harness::{
    check_noninterference, run_law_suite, CheckReport, HarnessError, LawGroup, Program,
};
use classified::syntax::normalize;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "classified",
    version,
    about = "Classified sets, levelled cohesion and modal information-flow calculi"
)]
pub struct Cli {
    /// Security poset as JSON: {"labels": [...], "order": [[lower, higher], ...]}.
    /// Defaults to the chain L ⊑ H.
    #[arg(long, global = true)]
    pub poset: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,
    #[arg(long, global = true, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub fuel: u64,
    /// Largest number of candidate functions an enumeration may face.
    #[arg(long, global = true, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub cap: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a law suite: bcc, adjunction, corollary, levelled, strength, ideal,
    /// contractibility or constancy.
    Laws { group: String },
    /// Infer the type of a program.
    Typecheck { calculus: String, file: PathBuf },
    /// Print the normal form of a program.
    Normalize { file: PathBuf },
    /// Print the denotation of a program as a mapping table.
    Denote { calculus: String, file: PathBuf },
    /// Check noninterference for the hole declared in the file header.
    Nonint {
        calculus: String,
        file: PathBuf,
        /// Size bound for the closed instances substituted for the hole.
        #[arg(long, default_value_t = 7, value_parser = clap::value_parser!(u64).range(1..))]
        bound: u64,
    },
    /// Enumerate the morphisms between two classified sets given as JSON files.
    Hom { set_a: PathBuf, set_b: PathBuf },
}

/// A usage, parse or configuration error.
struct Usage(String);

impl<E: Display> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.to_string())
    }
}

struct Outcome {
    passed: bool,
    body: String,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return if code == 0 { EXIT_PASS } else { EXIT_USAGE };
        }
    };
    match dispatch(&cli) {
        Ok(o) => {
            let _ = out.write_all(o.body.as_bytes());
            if o.passed {
                EXIT_PASS
            } else {
                EXIT_FAIL
            }
        }
        Err(Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

fn dispatch(cli: &Cli) -> Result<Outcome, Usage> {
    let poset = load_poset(cli.poset.as_deref())?;
    let cap = EnumCap(cli.cap);
    match &cli.command {
        Command::Laws { group } => {
            let group: LawGroup = group.parse().map_err(Usage)?;
            let report = run_law_suite(group, cli.seed, cli.trials, cap).map_err(Usage::from)?;
            Ok(report_outcome(&report, cli.format))
        }
        Command::Typecheck { calculus, file } => {
            let calc: Calculus = calculus.parse().map_err(Usage)?;
            let p = load_program(file)?;
            let ctx = p.context(calc);
            let result = typecheck(&poset, &ctx, &p.term).and_then(|ty| match &p.result {
                Some(want) if *want != ty => Err(TypeError::TypeMismatch {
                    expected: want.to_string(),
                    got: Box::new(ty),
                    at: Box::new(p.term.clone()),
                }),
                _ => Ok(ty),
            });
            let body = match (&result, cli.format) {
                (Ok(ty), Format::Text) => format!("{} : {ty}\n", p.term),
                (Err(e), Format::Text) => format!("type error ({}): {e}\n", error_kind(e)),
                (Ok(ty), Format::Json) => json_body(json!({
                    "calculus": calc, "term": p.term.to_string(), "ok": true, "type": ty.to_string(),
                })),
                (Err(e), Format::Json) => json_body(json!({
                    "calculus": calc, "term": p.term.to_string(), "ok": false,
                    "error": {"kind": error_kind(e), "message": e.to_string()},
                })),
            };
            Ok(Outcome {
                passed: result.is_ok(),
                body,
            })
        }
        Command::Normalize { file } => {
            let p = load_program(file)?;
            let (passed, body) = match normalize(&p.term, cli.fuel) {
                Ok(nf) => (
                    true,
                    match cli.format {
                        Format::Text => format!("{nf}\n"),
                        Format::Json => json_body(
                            json!({"term": p.term.to_string(), "normal_form": nf.to_string()}),
                        ),
                    },
                ),
                Err(e) => (false, failure_body(cli.format, &e)),
            };
            Ok(Outcome { passed, body })
        }
        Command::Denote { calculus, file } => {
            let calc: Calculus = calculus.parse().map_err(Usage)?;
            let p = load_program(file)?;
            let env = DenEnv::with_cap(poset.clone(), cap);
            let ctx = p.context(calc);
            let result = match &p.result {
                Some(ty) => Ok(ty.clone()),
                None => typecheck(&poset, &ctx, &p.term),
            }
            .map_err(|e| e.to_string())
            .and_then(|ty| {
                env.denote_term(&ctx, &p.term, &ty)
                    .map(|m| (ty, m))
                    .map_err(|e| e.to_string())
            });
            Ok(match result {
                Ok((ty, m)) => Outcome {
                    passed: true,
                    body: denotation_body(cli.format, &p.term.to_string(), &ty.to_string(), &m),
                },
                Err(e) => Outcome {
                    passed: false,
                    body: failure_body(cli.format, &e),
                },
            })
        }
        Command::Nonint {
            calculus,
            file,
            bound,
        } => {
            let calc: Calculus = calculus.parse().map_err(Usage)?;
            let p = load_program(file)?;
            let env = DenEnv::with_cap(poset.clone(), cap);
            let result = match &p.result {
                Some(ty) => ty.clone(),
                None => match typecheck(&poset, &p.context(calc), &p.term) {
                    Ok(ty) => ty,
                    Err(e) => {
                        return Ok(Outcome {
                            passed: false,
                            body: failure_body(cli.format, &e),
                        })
                    }
                },
            };
            let q = p.ni_query(calc, result)?;
            match check_noninterference(&env, &q, *bound as usize, cli.fuel) {
                Ok(report) => Ok(report_outcome(&report, cli.format)),
                Err(HarnessError::InvalidArgument(msg)) => Err(Usage(msg)),
                Err(e) => Ok(Outcome {
                    passed: false,
                    body: failure_body(cli.format, &e),
                }),
            }
        }
        Command::Hom { set_a, set_b } => {
            let a = load_set(set_a)?;
            let b = load_set(set_b)?;
            Ok(match enumerate_hom(&a, &b, cap) {
                Ok(homs) => Outcome {
                    passed: true,
                    body: hom_body(cli.format, &homs),
                },
                Err(e) => Outcome {
                    passed: false,
                    body: failure_body(cli.format, &e),
                },
            })
        }
    }
}

fn load_poset(path: Option<&Path>) -> Result<SecurityPoset, Usage> {
    match path {
        None => Ok(SecurityPoset::low_high()),
        Some(p) => {
            let text =
                std::fs::read_to_string(p).map_err(|e| Usage(format!("{}: {e}", p.display())))?;
            SecurityPoset::from_json(&text).map_err(|e| Usage(format!("{}: {e}", p.display())))
        }
    }
}

fn load_program(path: &Path) -> Result<Program, Usage> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Usage(format!("{}: {e}", path.display())))?;
    Program::parse(&text).map_err(|e| Usage(format!("{}: {e}", path.display())))
}

fn load_set(path: &Path) -> Result<ClassifiedSet, Usage> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Usage(format!("{}: {e}", path.display())))
}

/// The variant name of a type error.
fn error_kind(e: &TypeError) -> String {
    let debug = format!("{e:?}");
    debug
        .split(|c: char| !c.is_alphanumeric())
        .next()
        .unwrap_or_default()
        .to_string()
}

fn json_body(v: Value) -> String {
    let mut s = serde_json::to_string_pretty(&v).expect("values serialize");
    s.push('\n');
    s
}

/// Renders a report. A vacuous report does not pass.
pub fn emit_report(report: &CheckReport, format: Format) -> String {
    match format {
        Format::Text => report.to_text(),
        Format::Json => {
            let mut s = report.to_json();
            s.push('\n');
            s
        }
    }
}

fn report_outcome(report: &CheckReport, format: Format) -> Outcome {
    Outcome {
        passed: report.passed,
        body: emit_report(report, format),
    }
}

fn failure_body(format: Format, e: &dyn Display) -> String {
    match format {
        Format::Text => format!("error: {e}\n"),
        Format::Json => json_body(json!({"ok": false, "error": e.to_string()})),
    }
}

fn pairs(m: &Morphism) -> Vec<[String; 2]> {
    m.mapping_table()
        .iter()
        .map(|(x, y)| [x.to_string(), y.to_string()])
        .collect()
}

fn denotation_body(format: Format, term: &str, ty: &str, m: &Morphism) -> String {
    match format {
        Format::Text => {
            let mut s = format!("{term} : {ty}\n");
            for [x, y] in pairs(m) {
                s.push_str(&format!("  {x} ↦ {y}\n"));
            }
            s
        }
        Format::Json => json_body(json!({
            "term": term,
            "type": ty,
            "domain": m.source(),
            "codomain": m.target(),
            "table": pairs(m),
        })),
    }
}

fn hom_body(format: Format, homs: &[Morphism]) -> String {
    match format {
        Format::Text => {
            let mut s = format!("{} morphisms\n", homs.len());
            for (i, h) in homs.iter().enumerate() {
                let cells: Vec<String> = pairs(h)
                    .into_iter()
                    .map(|[x, y]| format!("{x} ↦ {y}"))
                    .collect();
                s.push_str(&format!("  {i}: {}\n", cells.join(", ")));
            }
            s
        }
        Format::Json => json_body(json!({
            "count": homs.len(),
            "morphisms": homs.iter().map(pairs).collect::<Vec<_>>(),
        })),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut argv = vec!["classified"];
        argv.extend_from_slice(args);
        let code = run(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run_str(&["laws", "bogus"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["laws", "bcc", "--trials", "0"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["laws", "bcc", "--format", "yaml"]).0, EXIT_USAGE);
        assert_eq!(
            run_str(&["typecheck", "moggi", "/nonexistent.mml"]).0,
            EXIT_USAGE
        );
        assert_eq!(
            run_str(&["typecheck", "lisp", "/nonexistent.mml"]).0,
            EXIT_USAGE
        );
        assert_eq!(
            run_str(&["laws", "bcc", "--poset", "/nonexistent.json"]).0,
            EXIT_USAGE
        );
    }

    #[test]
    fn help_exits_0() {
        let (code, out, _) = run_str(&["--help"]);
        assert_eq!(code, EXIT_PASS);
        assert!(out.contains("laws"));
    }

    #[test]
    fn small_suite_text_and_json_agree() {
        let (code, text, _) = run_str(&["laws", "contractibility", "--trials", "5"]);
        assert_eq!(code, EXIT_PASS);
        assert!(text.starts_with("PASS contractibility: 15 cases"));
        let (code, json, _) = run_str(&[
            "laws",
            "contractibility",
            "--trials",
            "5",
            "--format",
            "json",
        ]);
        assert_eq!(code, EXIT_PASS);
        let r = CheckReport::from_json(&json).unwrap();
        assert_eq!(r.cases, 15);
        assert!(r.failures.is_empty());
    }

    #[test]
    fn error_kinds() {
        assert_eq!(
            error_kind(&TypeError::ModalViolation("f".into())),
            "ModalViolation"
        );
        assert_eq!(
            error_kind(&TypeError::NotCodiscrete(classified::syntax::Type::Bool)),
            "NotCodiscrete"
        );
    }
}
