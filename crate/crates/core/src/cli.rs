//! The `fcart` command line.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand};
use serde_json::Value;

use crate::algebra::MonomialOrder;
use crate::error::Error;
use crate::job::{run_job, Command, JobSpec};
use crate::verify::Suite;

pub const EXIT_OK: i32 = 0;
pub const EXIT_MATH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAP: i32 = 3;

const GRAMMAR: &str = "polynomial grammar:
  expr   := sign? term (('+' | '-') term)*
  term   := coeff? ('*'? factor)*
  factor := var ('^' uint)?
  e.g. \"x^2+y^3\", \"3*x*y^2 - y\", \"2xy+1\"";

#[derive(Parser, Debug)]
#[command(name = "fcart", version, about = "Cartier operators, nu-invariants, Bernstein-Sato roots and test ideals over F_p")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Args, Debug)]
struct Common {
    /// Characteristic (a prime).
    #[arg(short = 'p', long)]
    p: u64,
    /// Cartier level: the operator is p^e-linear.
    #[arg(short = 'e', long, default_value_t = 1)]
    e: u32,
    /// The polynomial f.
    #[arg(short = 'f', long)]
    f: String,
    /// Twist g of the operator C(h) = C_std(g h).
    #[arg(long)]
    twist: Option<String>,
    /// Generator of the module N (repeatable; default: the whole ring).
    #[arg(long = "module")]
    module: Vec<String>,
    /// Variable names, comma separated (default: letters used in the inputs).
    #[arg(long, value_delimiter = ',')]
    vars: Option<Vec<String>>,
    #[arg(long, default_value = "grevlex")]
    order: MonomialOrder,
    #[command(flatten)]
    caps: Caps,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct Caps {
    /// Largest q^m allowed.
    #[arg(long, env = "FCART_EXP_CAP")]
    exp_cap: Option<u64>,
    /// Largest number of stabilization steps.
    #[arg(long, env = "FCART_ITER_CAP")]
    iter_cap: Option<usize>,
}

#[derive(Args, Debug, Default)]
struct Output {
    /// JSON report (default).
    #[arg(long, conflicts_with = "text")]
    json: bool,
    /// Plain `key: value` report.
    #[arg(long)]
    text: bool,
}

#[derive(Subcommand, Debug)]
enum Sub {
    /// ν(q^m): the levels n where C^m(f^n N) drops.
    Nu {
        #[command(flatten)]
        common: Common,
        #[arg(short = 'm', long, default_value_t = 1)]
        level: u32,
    },
    /// Bernstein–Sato roots certified from the ν-tree.
    Bsr {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 2)]
        max_level: u32,
    },
    /// The test ideal τ(N, f^t).
    Testideal {
        #[command(flatten)]
        common: Common,
        /// Exponent, "n" or "n/d".
        #[arg(short = 't')]
        t: String,
    },
    /// F-jumping exponents on the grid of level m, cross-checked with the roots.
    Fjn {
        #[command(flatten)]
        common: Common,
        #[arg(short = 'm', long, default_value_t = 2)]
        level: u32,
    },
    /// #ν(q^m) for each level.
    Probe {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 2)]
        max_level: u32,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        /// Random polynomials per case.
        #[arg(long)]
        count: Option<usize>,
        #[command(flatten)]
        output: Output,
    },
}

fn job_from(command: Command, common: Common) -> (JobSpec, Output) {
    let job = JobSpec {
        p: Some(common.p),
        e: common.e,
        f: Some(common.f),
        twist: common.twist,
        module: common.module,
        order: common.order,
        vars: common.vars,
        exp_cap: common.caps.exp_cap,
        iter_cap: common.caps.iter_cap,
        ..JobSpec::new(command)
    };
    (job, common.output)
}

fn to_job(sub: Sub) -> (JobSpec, Output) {
    match sub {
        Sub::Nu { common, level } => {
            let (job, out) = job_from(Command::Nu, common);
            (JobSpec { level: Some(level), ..job }, out)
        }
        Sub::Bsr { common, max_level } => {
            let (job, out) = job_from(Command::Bsr, common);
            (JobSpec { max_level: Some(max_level), ..job }, out)
        }
        Sub::Testideal { common, t } => {
            let (job, out) = job_from(Command::Testideal, common);
            (JobSpec { t: Some(t), ..job }, out)
        }
        Sub::Fjn { common, level } => {
            let (job, out) = job_from(Command::Fjn, common);
            (JobSpec { level: Some(level), ..job }, out)
        }
        Sub::Probe { common, max_level } => {
            let (job, out) = job_from(Command::Probe, common);
            (JobSpec { max_level: Some(max_level), ..job }, out)
        }
        Sub::Verify { suite, count, output } => (JobSpec { suite: Some(suite), count, ..JobSpec::new(Command::Verify) }, output),
    }
}

/// Exit status for an engine error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        _ if e.is_resource_cap() => EXIT_CAP,
        Error::NotCartierSubmodule | Error::NotFPure | Error::InternalMismatch(_) => EXIT_MATH,
        _ => EXIT_USAGE,
    }
}

fn is_input_error(e: &Error) -> bool {
    matches!(e, Error::Syntax { .. } | Error::UnknownVariable { .. } | Error::NegativeExponent { .. })
}

/// `key: value` lines, nested keys joined with dots.
pub fn render_text(value: &Value) -> String {
    fn walk(prefix: &str, v: &Value, out: &mut Vec<String>) {
        match v {
            Value::Object(map) => {
                for (k, x) in map {
                    let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                    walk(&key, x, out);
                }
            }
            Value::Array(items) if items.iter().any(|x| x.is_object()) => {
                for (i, x) in items.iter().enumerate() {
                    walk(&format!("{prefix}[{i}]"), x, out);
                }
            }
            Value::String(s) => out.push(format!("{prefix}: {s}")),
            other => out.push(format!("{prefix}: {other}")),
        }
    }
    let mut lines = Vec::new();
    walk("", value, &mut lines);
    lines.join("\n") + "\n"
}

/// A verify report in text mode: counts and failing cases only.
fn verify_text(value: &Value) -> String {
    let v = &value["verify"];
    let mut s = format!("suite: {}\npassed: {}\nfailed: {}\n", v["suite"].as_str().unwrap_or("?"), v["passed"], v["failed"]);
    if let Some(records) = v["records"].as_array() {
        for r in records.iter().filter(|r| r["ok"] == Value::Bool(false)) {
            s.push_str(&format!("FAIL {}: {}\n", r["case"].as_str().unwrap_or("?"), r["detail"]));
        }
    }
    s
}

/// Runs the command line; returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            let _ = if code == 0 { write!(out, "{rendered}") } else { write!(err, "{rendered}") };
            return code;
        }
    };
    let (job, output) = to_job(cli.command);
    match run_job(&job) {
        Ok(result) => {
            let text = if output.text {
                if job.command == Command::Verify {
                    verify_text(&result.report)
                } else {
                    render_text(&result.report)
                }
            } else {
                serde_json::to_string_pretty(&result.report).expect("reports serialize") + "\n"
            };
            if out.write_all(text.as_bytes()).is_err() {
                return EXIT_USAGE;
            }
            if result.ok {
                EXIT_OK
            } else {
                EXIT_MATH
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if is_input_error(&e) {
                let _ = writeln!(err, "{GRAMMAR}");
            }
            exit_code(&e)
        }
    }
}
