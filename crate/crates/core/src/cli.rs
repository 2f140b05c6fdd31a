//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 when a verification report fails, 2 for
//! usage errors, unparsable input, and inputs outside an operation's domain
//! (infinite order, infinite generated group).

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::classify::{self, ElementClass};
use crate::expr::{parse_element, render_element, Style};
use crate::matrix::ProjectiveMatrix;
use crate::oracle::{self, EnumerationBound, VerificationReport};
use crate::subgroups::{self, FiniteSubgroup, SubgroupClass};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Parser)]
#[command(
    name = "pgl2z",
    version,
    about = "Torsion elements and finite subgroups of PGL(2, Z)"
)]
struct Cli {
    /// Emit JSON on stdout
    #[arg(long, global = true)]
    json: bool,
    /// Print only the essential result
    #[arg(long, short, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Order of an element (1, 2, 3 or infinite)
    Order {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Conjugacy class of a torsion element with a conjugator witness
    Classify {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// P·M·P⁻¹
    Conjugate {
        #[arg(allow_hyphen_values = true)]
        p: String,
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Finite subgroup generated by the given elements
    Closure {
        #[arg(required = true, allow_hyphen_values = true)]
        exprs: Vec<String>,
    },
    /// Closure followed by subgroup classification
    ClassifyGroup {
        #[arg(required = true, allow_hyphen_values = true)]
        exprs: Vec<String>,
    },
    /// Canonical representative of an element or subgroup class
    Canonical { kind: CanonicalKind, label: String },
    /// Re-check the classification by brute force
    Verify {
        #[arg(long, default_value_t = 10)]
        bound: u32,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CanonicalKind {
    Element,
    Group,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ElementJson {
    pub matrix: String,
    pub lft: String,
}

impl From<&ProjectiveMatrix> for ElementJson {
    fn from(m: &ProjectiveMatrix) -> Self {
        ElementJson {
            matrix: render_element(m, Style::Matrix),
            lft: render_element(m, Style::Lft),
        }
    }
}

#[derive(Debug, Default, Serialize)]
pub struct ResultJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elements: Option<Vec<ElementJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<ElementJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reports: Option<Vec<VerificationReport>>,
}

#[derive(Debug, Serialize)]
pub struct OutputJson {
    pub schema: u32,
    pub command: String,
    pub input: Vec<String>,
    pub result: ResultJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pass: Option<bool>,
}

struct Failure {
    code: i32,
    message: String,
}

fn usage(message: impl ToString) -> Failure {
    Failure {
        code: 2,
        message: message.to_string(),
    }
}

fn parse(text: &str) -> Result<ProjectiveMatrix, Failure> {
    parse_element(text).map_err(|e| usage(format!("{text:?}: {e}")))
}

fn both(m: &ProjectiveMatrix) -> String {
    format!(
        "{}  {}",
        render_element(m, Style::Lft),
        render_element(m, Style::Matrix)
    )
}

/// Runs one command line (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(hoist_global_flags(args)) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let rendered = e.to_string();
            let line = rendered.lines().next().unwrap_or("usage error");
            let _ = writeln!(err, "{line}");
            return 2;
        }
    };
    match execute(&cli) {
        Ok((output, text)) => {
            let written = if cli.json {
                serde_json::to_string_pretty(&output)
                    .map_err(std::io::Error::other)
                    .and_then(|s| writeln!(out, "{s}"))
            } else {
                write!(out, "{text}")
            };
            if let Err(e) = written {
                let _ = writeln!(err, "error: {e}");
                return 2;
            }
            match output.pass {
                Some(false) => 1,
                _ => 0,
            }
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

/// Moves global flags in front of the subcommand. Positionals accept
/// leading hyphens (`-x`, `-1/x`), which would otherwise swallow a trailing
/// `--json`.
fn hoist_global_flags<I, T>(args: I) -> Vec<OsString>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let mut args = args.into_iter().map(Into::into);
    let program = args.next();
    let mut flags = Vec::new();
    let mut rest = Vec::new();
    let mut literal = false;
    for arg in args {
        if !literal && matches!(arg.to_str(), Some("--json" | "--quiet" | "-q")) {
            flags.push(arg);
        } else {
            literal |= arg == "--";
            rest.push(arg);
        }
    }
    program.into_iter().chain(flags).chain(rest).collect()
}

fn execute(cli: &Cli) -> Result<(OutputJson, String), Failure> {
    let quiet = cli.quiet;
    let mut result = ResultJson::default();
    let mut text = String::new();
    let mut pass = None;
    let (command, input): (&str, Vec<String>) = match &cli.command {
        Command::Order { expr } => {
            let m = parse(expr)?;
            let order = m.order().to_string();
            text = format!("{order}\n");
            result.order = Some(order);
            ("order", vec![expr.clone()])
        }
        Command::Classify { expr } => {
            let m = parse(expr)?;
            let class = classify::classify_element(&m).map_err(usage)?;
            result.label = Some(class.to_string());
            result.order = Some(m.order().to_string());
            text.push_str(&format!("{class}\n"));
            if class != ElementClass::Identity {
                let w = classify::conjugator_to_canonical(&m).map_err(usage)?;
                if !quiet {
                    text.push_str(&format!("witness: {}\n", both(&w.conjugator())));
                    text.push_str(&format!("canonical: {}\n", both(&w.canonical())));
                }
                result.witness = Some((&w.conjugator()).into());
            }
            ("classify", vec![expr.clone()])
        }
        Command::Conjugate { p, expr } => {
            let (pm, m) = (parse(p)?, parse(expr)?);
            let c = pm.conjugate(&m).map_err(usage)?;
            text = format!("{}\n", both(&c));
            result.elements = Some(vec![(&c).into()]);
            ("conjugate", vec![p.clone(), expr.clone()])
        }
        Command::Closure { exprs } => {
            let g = closure_of(exprs)?;
            let ty = subgroups::isomorphism_type(&g).map_err(usage)?;
            if !quiet {
                text.push_str(&format!("{ty} ({} elements)\n", g.len()));
            }
            push_elements(&mut text, &g);
            result.label = Some(ty.to_string());
            result.elements = Some(g.elements().map(Into::into).collect());
            ("closure", exprs.clone())
        }
        Command::ClassifyGroup { exprs } => {
            let g = closure_of(exprs)?;
            let w = subgroups::classify_subgroup(&g).map_err(usage)?;
            text.push_str(&format!("{}\n", w.class()));
            if !quiet {
                text.push_str(&format!("witness: {}\n", both(&w.conjugator())));
                push_elements(&mut text, &g);
            }
            result.label = Some(w.class().to_string());
            result.witness = Some((&w.conjugator()).into());
            result.elements = Some(g.elements().map(Into::into).collect());
            ("classify-group", exprs.clone())
        }
        Command::Canonical { kind, label } => {
            match kind {
                CanonicalKind::Element => {
                    let class: ElementClass = label.parse().map_err(usage)?;
                    let rep = class.canonical_rep();
                    text = format!("{}\n", both(&rep));
                    result.label = Some(class.to_string());
                    result.order = Some(rep.order().to_string());
                    result.elements = Some(vec![(&rep).into()]);
                }
                CanonicalKind::Group => {
                    let class: SubgroupClass = label.parse().map_err(usage)?;
                    let g = class.canonical_group();
                    push_elements(&mut text, &g);
                    result.label = Some(class.to_string());
                    result.elements = Some(g.elements().map(Into::into).collect());
                }
            }
            let kind = match kind {
                CanonicalKind::Element => "element",
                CanonicalKind::Group => "group",
            };
            ("canonical", vec![kind.to_string(), label.clone()])
        }
        Command::Verify { bound } => {
            let bound = EnumerationBound::new(*bound).map_err(usage)?;
            let reports = oracle::verify_all(bound);
            let failed = reports.iter().filter(|r| !r.pass).count();
            for r in &reports {
                if quiet {
                    let status = if r.pass { "PASS" } else { "FAIL" };
                    text.push_str(&format!("{status} {:?}\n", r.theorem));
                } else {
                    text.push_str(&format!("{r}\n"));
                }
            }
            if !quiet {
                text.push_str(&format!(
                    "{} of {} reports passed at bound {bound}\n",
                    reports.len() - failed,
                    reports.len()
                ));
            }
            pass = Some(failed == 0);
            result.reports = Some(reports);
            ("verify", vec![format!("--bound={bound}")])
        }
    };
    let output = OutputJson {
        schema: SCHEMA_VERSION,
        command: command.to_string(),
        input,
        result,
        pass,
    };
    Ok((output, text))
}

fn closure_of(exprs: &[String]) -> Result<FiniteSubgroup, Failure> {
    let gens = exprs
        .iter()
        .map(|e| parse(e))
        .collect::<Result<Vec<_>, _>>()?;
    subgroups::closure(&gens).map_err(usage)
}

fn push_elements(text: &mut String, g: &FiniteSubgroup) {
    for e in g.elements() {
        text.push_str(&both(e));
        text.push('\n');
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("pgl2z").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn classify_rot_three() {
        let (code, out, _) = run_capture(&["classify", "(-x-1)/x"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("RotThree\n"));
        assert!(out.contains("witness: "));
    }

    #[test]
    fn closure_lists_g4() {
        let (code, out, _) = run_capture(&["-q", "closure", "1/x", "-x"]);
        assert_eq!(code, 0);
        let lines: Vec<_> = out
            .lines()
            .map(|l| l.split_whitespace().next().unwrap())
            .collect();
        assert_eq!(lines, ["-1/x", "1/x", "-x", "x"]);
    }

    #[test]
    fn flags_after_hyphenated_positionals() {
        let (code, out, err) = run_capture(&["closure", "1/x", "-x", "--json"]);
        assert_eq!(code, 0, "{err}");
        assert!(out.trim_start().starts_with('{'), "{out}");
    }

    #[test]
    fn parse_errors_exit_two() {
        let (code, out, err) = run_capture(&["order", "x+"]);
        assert_eq!(code, 2);
        assert!(out.is_empty());
        assert_eq!(err.lines().count(), 1);
        assert!(err.contains("byte 2"));
    }

    #[test]
    fn domain_errors_exit_two() {
        assert_eq!(run_capture(&["classify", "x+1"]).0, 2);
        assert_eq!(run_capture(&["closure", "x+1"]).0, 2);
        assert_eq!(run_capture(&["canonical", "element", "Nope"]).0, 2);
        assert_eq!(run_capture(&["verify", "--bound", "0"]).0, 2);
        assert_eq!(run_capture(&["frobnicate"]).0, 2);
    }

    #[test]
    fn help_exits_zero() {
        let (code, out, _) = run_capture(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("classify-group"));
    }

    #[test]
    fn order_and_conjugate() {
        assert_eq!(run_capture(&["order", "-1/(x+1)"]).1, "3\n");
        assert_eq!(run_capture(&["order", "x+1"]).1, "infinite\n");
        let (_, out, _) = run_capture(&["conjugate", "x+1", "-1/x"]);
        assert_eq!(out, "(x-2)/(x-1)  [[1,-2],[1,-1]]\n");
    }

    #[test]
    fn canonical_outputs() {
        let (_, out, _) = run_capture(&["canonical", "element", "RotThree"]);
        assert_eq!(out, "-1/(x+1)  [[0,1],[-1,-1]]\n");
        let (_, out, _) = run_capture(&["canonical", "group", "g3"]);
        assert_eq!(out.lines().count(), 3);
    }
}
