//! Job descriptions shared by the command line, the C interface and the
//! oracle runner, and the JSON reports they produce.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebra::{is_prime, parse_polynomial, Ideal, MonomialOrder, Polynomial, Ring, RingConfig};
use crate::cartier::CartierStructure;
use crate::config::Limits;
use crate::error::{Error, Result};
use crate::invariants::{self, parse_rational};
use crate::padic::{lucas_binomial, PadicRational};
use crate::verify::{self, Suite};

pub const SCHEMA: &str = "fcart/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Nu,
    Bsr,
    Testideal,
    Fjn,
    Probe,
    Verify,
    Lucas,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Nu => "nu",
            Command::Bsr => "bsr",
            Command::Testideal => "testideal",
            Command::Fjn => "fjn",
            Command::Probe => "probe",
            Command::Verify => "verify",
            Command::Lucas => "lucas",
        }
    }
}

/// One unit of work.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub command: Command,
    #[serde(default)]
    pub p: Option<u64>,
    #[serde(default = "default_e")]
    pub e: u32,
    #[serde(default)]
    pub f: Option<String>,
    #[serde(default)]
    pub twist: Option<String>,
    /// Generators of the module N ⊆ R; empty means R.
    #[serde(default)]
    pub module: Vec<String>,
    #[serde(default)]
    pub level: Option<u32>,
    #[serde(default)]
    pub max_level: Option<u32>,
    #[serde(default)]
    pub t: Option<String>,
    #[serde(default)]
    pub alpha: Option<String>,
    #[serde(default)]
    pub n: Option<u64>,
    #[serde(default)]
    pub suite: Option<Suite>,
    #[serde(default)]
    pub order: MonomialOrder,
    #[serde(default)]
    pub vars: Option<Vec<String>>,
    /// Random polynomials per case in the verify suites.
    #[serde(default)]
    pub count: Option<usize>,
    #[serde(default)]
    pub exp_cap: Option<u64>,
    #[serde(default)]
    pub iter_cap: Option<usize>,
}

fn default_e() -> u32 {
    1
}

impl JobSpec {
    pub fn new(command: Command) -> Self {
        JobSpec {
            command,
            p: None,
            e: 1,
            f: None,
            twist: None,
            module: Vec::new(),
            level: None,
            max_level: None,
            t: None,
            alpha: None,
            n: None,
            suite: None,
            order: MonomialOrder::default(),
            vars: None,
            count: None,
            exp_cap: None,
            iter_cap: None,
        }
    }

    pub fn prime(&self) -> Result<u64> {
        let p = self.p.ok_or_else(|| Error::InvalidArgument("-p is required".into()))?;
        if !is_prime(p) {
            return Err(Error::InvalidRing(format!("{p} is not prime")));
        }
        Ok(p)
    }

    pub fn limits(&self) -> Result<Limits> {
        let mut limits = Limits::from_env()?;
        if let Some(c) = self.exp_cap {
            limits.exp_cap = c;
        }
        if let Some(c) = self.iter_cap {
            limits.iter_cap = c;
        }
        Ok(limits)
    }

    fn texts(&self) -> impl Iterator<Item = &str> {
        self.f.iter().chain(self.twist.iter()).chain(self.module.iter()).map(String::as_str)
    }

    /// Variable names: `vars` if given, else every letter used in the inputs, sorted.
    pub fn variable_names(&self) -> Vec<String> {
        if let Some(v) = &self.vars {
            return v.clone();
        }
        let mut letters: Vec<char> = self.texts().flat_map(|s| s.chars()).filter(char::is_ascii_alphabetic).collect();
        letters.sort_unstable();
        letters.dedup();
        if letters.is_empty() {
            letters.push('x');
        }
        letters.into_iter().map(String::from).collect()
    }
}

/// The algebraic objects a job refers to.
#[derive(Clone, Debug)]
pub struct Context {
    pub ring: Ring,
    pub structure: CartierStructure,
    pub f: Option<Polynomial>,
    pub module: Ideal,
}

impl Context {
    pub fn from_job(job: &JobSpec) -> Result<Self> {
        let p = job.prime()?;
        let ring = RingConfig::new(p, &job.variable_names())?;
        let twist = match &job.twist {
            Some(t) => parse_polynomial(t, &ring)?,
            None => Polynomial::one(&ring),
        };
        let limits = job.limits()?;
        let structure = CartierStructure::new(job.e, twist)?.with_limits(limits);
        structure.q_power(1)?;
        let f = job.f.as_deref().map(|s| parse_polynomial(s, &ring)).transpose()?;
        let gens = if job.module.is_empty() {
            vec![Polynomial::one(&ring)]
        } else {
            job.module.iter().map(|s| parse_polynomial(s, &ring)).collect::<Result<_>>()?
        };
        let module = Ideal::with_order(&ring, gens, job.order)?;
        Ok(Context { ring, structure, f, module })
    }

    pub fn f(&self) -> Result<&Polynomial> {
        let f = self.f.as_ref().ok_or_else(|| Error::InvalidArgument("-f is required".into()))?;
        if f.is_zero() {
            return Err(Error::ZeroDivisorInput("f must be nonzero".into()));
        }
        Ok(f)
    }

    fn header(&self, job: &JobSpec) -> Value {
        json!({
            "schema": SCHEMA,
            "command": job.command.name(),
            "p": self.ring.p(),
            "e": self.structure.e(),
            "q": self.structure.q(),
            "vars": self.ring.var_names(),
            "order": job.order,
            "f": self.f.as_ref().map(|f| f.to_string()),
            "twist": self.structure.twist().to_string(),
            "module": ideal_strings(&self.module),
        })
    }
}

/// The reduced Gröbner basis as canonical strings.
pub fn ideal_strings(ideal: &Ideal) -> Vec<String> {
    ideal.reduced_gb().iter().map(|g| g.to_string()).collect()
}

/// A finished job: the JSON report and whether every internal check passed.
#[derive(Clone, Debug)]
pub struct JobOutput {
    pub report: Value,
    pub ok: bool,
}

fn merge(mut base: Value, extra: Value) -> Value {
    if let (Value::Object(b), Value::Object(e)) = (&mut base, extra) {
        b.extend(e);
    }
    base
}

fn level_arg(v: Option<u32>, default: u32, name: &str) -> Result<u32> {
    let v = v.unwrap_or(default);
    if v == 0 {
        return Err(Error::InvalidArgument(format!("{name} must be at least 1")));
    }
    Ok(v)
}

pub fn run_job(job: &JobSpec) -> Result<JobOutput> {
    match job.command {
        Command::Verify => {
            let suite = job.suite.unwrap_or(Suite::All);
            let mut config = verify::SuiteConfig::default();
            if let Some(c) = job.count {
                config.count = c;
            }
            let report = verify::run_suite(suite, config)?;
            let ok = report.failed == 0;
            let value = json!({"schema": SCHEMA, "command": "verify", "verify": report});
            return Ok(JobOutput { report: value, ok });
        }
        Command::Lucas => {
            let p = job.prime()?;
            let alpha = PadicRational::parse(job.alpha.as_deref().unwrap_or("0"), p as u32)?;
            let n = job.n.ok_or_else(|| Error::InvalidArgument("n is required".into()))?;
            let value = json!({
                "schema": SCHEMA, "command": "lucas", "p": p,
                "lucas": {"alpha": alpha, "n": n, "value": lucas_binomial(&alpha, n).value()},
            });
            return Ok(JobOutput { report: value, ok: true });
        }
        _ => {}
    }
    let ctx = Context::from_job(job)?;
    let s = &ctx.structure;
    let f = ctx.f()?;
    let header = ctx.header(job);
    let (body, ok) = match job.command {
        Command::Nu => {
            let m = level_arg(job.level, 1, "level")?;
            let set = invariants::nu_set(s, &ctx.module, f, m)?;
            (json!({ "nu": set }), true)
        }
        Command::Bsr => {
            let max_level = level_arg(job.max_level, 2, "max-level")?;
            let tree = invariants::nu_tree(s, &ctx.module, f, max_level)?;
            let certs = invariants::bsr_roots(s, &ctx.module, f, max_level)?;
            let certified = invariants::certified_values(&certs);
            (json!({"bsr": {"max_level": max_level, "certificates": certs, "certified_roots": certified, "tree": tree}}), true)
        }
        Command::Testideal => {
            let t = parse_rational(job.t.as_deref().ok_or_else(|| Error::InvalidArgument("-t is required".into()))?)?;
            let rec = invariants::test_ideal(s, &ctx.module, f, &t)?;
            let value = json!({
                "t": rec.t.to_string(),
                "ideal": ideal_strings(&rec.ideal),
                "witness_level": rec.witness_level,
            });
            (json!({ "testideal": value }), true)
        }
        Command::Fjn => {
            let level = level_arg(job.level, 2, "level")?;
            let fjn = invariants::fjn_exponents(s, &ctx.module, f, level)?;
            let cross = invariants::bsr_fjn_crosscheck(s, &ctx.module, f, level)?;
            let ok = cross.consistent;
            (json!({"fjn": fjn, "crosscheck": cross}), ok)
        }
        Command::Probe => {
            let max_level = level_arg(job.max_level, 2, "max-level")?;
            let probe = invariants::bound_assumption_probe(s, &ctx.module, f, max_level)?;
            (json!({ "probe": probe }), true)
        }
        Command::Verify | Command::Lucas => unreachable!("handled above"),
    };
    Ok(JobOutput { report: merge(header, body), ok })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn job(command: Command, p: u64, f: &str) -> JobSpec {
        JobSpec { p: Some(p), f: Some(f.into()), ..JobSpec::new(command) }
    }

    #[test]
    fn nu_job() {
        let out = run_job(&JobSpec { level: Some(2), ..job(Command::Nu, 3, "x") }).unwrap();
        assert_eq!(out.report["nu"]["members"], json!([8]));
        assert_eq!(out.report["schema"], json!("fcart/1"));
        assert_eq!(out.report["vars"], json!(["x"]));
    }

    #[test]
    fn bsr_job() {
        let out = run_job(&JobSpec { max_level: Some(2), ..job(Command::Bsr, 7, "x^2+y^3") }).unwrap();
        assert_eq!(out.report["bsr"]["certified_roots"], json!(["-5/6", "-1"]));
    }

    #[test]
    fn bad_inputs() {
        assert!(matches!(run_job(&job(Command::Nu, 4, "x")), Err(Error::InvalidRing(_))));
        assert!(matches!(run_job(&job(Command::Nu, 3, "0")), Err(Error::ZeroDivisorInput(_))));
        assert!(run_job(&JobSpec::new(Command::Nu)).is_err());
        let parsed: JobSpec = serde_json::from_str(r#"{"command":"nu","p":3,"f":"x","level":2}"#).unwrap();
        assert_eq!(parsed, JobSpec { level: Some(2), ..job(Command::Nu, 3, "x") });
    }

    #[test]
    fn variable_inference() {
        let j = JobSpec { twist: Some("z^2".into()), module: vec!["y".into()], ..job(Command::Nu, 3, "x+y") };
        assert_eq!(j.variable_names(), vec!["x", "y", "z"]);
    }
}
