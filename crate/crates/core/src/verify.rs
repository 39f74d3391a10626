//! Verification suites: identity sweeps, p-adic checks, the D-side
//! equivalence, test-ideal laws and the oracle jobs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebra::{Ideal, Polynomial, Ring, RingConfig};
use crate::cartier::{cartier_image, cartier_power_image, CartierStructure};
use crate::corpus::{random_cubics, standard_modules, DEFAULT_SEED};
use crate::error::Result;
use crate::graph;
use crate::invariants::{self, Rational};
use crate::job::{Command, JobSpec};
use crate::oracle::oracle_compare;
use crate::padic::{canonical_digit_block, from_periodic_digits, prime_power_exponent, t_map, PadicRational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Graph,
    Lucas,
    Dside,
    Tau,
    Oracle,
    All,
}

#[derive(Clone, Copy, Debug)]
pub struct SuiteConfig {
    /// Random polynomials per (p, m) case.
    pub count: usize,
    /// Random (α, n) pairs per prime in the Lucas suite.
    pub lucas_samples: usize,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { count: 20, lucas_samples: 500, seed: DEFAULT_SEED }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Record {
    pub suite: &'static str,
    pub case: String,
    pub ok: bool,
    pub detail: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub passed: usize,
    pub failed: usize,
    pub records: Vec<Record>,
}

impl SuiteReport {
    pub fn failures(&self) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(|r| !r.ok)
    }
}

pub fn run_suite(suite: Suite, config: SuiteConfig) -> Result<SuiteReport> {
    let records = match suite {
        Suite::Graph => graph_suite(&config)?,
        Suite::Lucas => lucas_suite(&config)?,
        Suite::Dside => dside_suite(&config)?,
        Suite::Tau => tau_suite(&config)?,
        Suite::Oracle => oracle_suite(&config)?,
        Suite::All => {
            let mut all = Vec::new();
            for s in [Suite::Graph, Suite::Lucas, Suite::Dside, Suite::Tau, Suite::Oracle] {
                all.extend(run_suite(s, config)?.records);
            }
            all
        }
    };
    let failed = records.iter().filter(|r| !r.ok).count();
    Ok(SuiteReport { suite, passed: records.len() - failed, failed, records })
}

fn two_var_ring(p: u64) -> Ring {
    RingConfig::new(p, &["x", "y"]).expect("valid ring")
}

fn outcome(r: Result<bool>) -> (bool, Value) {
    match r {
        Ok(b) => (b, Value::Null),
        Err(e) => (false, json!({ "error": e.to_string() })),
    }
}

/// Two-path agreement of Q_n^(m), the t-shift, the transition and the ϑ law.
pub fn graph_suite(config: &SuiteConfig) -> Result<Vec<Record>> {
    let mut cases = Vec::new();
    for p in [2u64, 3] {
        let ring = two_var_ring(p);
        for m in 1..=2u32 {
            for f in random_cubics(&ring, config.count, config.seed) {
                cases.push((p, m, f));
            }
        }
    }
    let records = cases
        .par_iter()
        .flat_map_iter(|(p, m, f)| {
            let (p, m) = (*p, *m);
            let mut out = Vec::new();
            for n in 0..p.pow(m) {
                let base = format!("p={p} m={m} f={f} n={n}");
                let checks: Vec<(String, Result<bool>)> = vec![
                    ("q_element".into(), graph::q_element(f, m, n).map(|_| true)),
                    ("t_shift".into(), graph::verify_t_shift(f, m, n)),
                    ("transition".into(), graph::verify_transition(f, m, n)),
                ]
                .into_iter()
                .chain((0..m).map(|i| (format!("theta_{i}"), graph::verify_theta_eigen(f, m, n, i))))
                .collect();
                for (name, r) in checks {
                    let (ok, detail) = outcome(r);
                    out.push(Record { suite: "graph", case: format!("{base} {name}"), ok, detail });
                }
            }
            out
        })
        .collect();
    Ok(records)
}

fn random_rational(rng: &mut ChaCha8Rng, p: u32) -> PadicRational {
    loop {
        let num = rng.gen_range(-50i128..=50);
        let den = rng.gen_range(1i128..=50);
        if den % p as i128 != 0 {
            return PadicRational::new(num, den, p).expect("denominator prime to p");
        }
    }
}

/// Lucas against exact integers, digit round trips and T fixed points.
pub fn lucas_suite(config: &SuiteConfig) -> Result<Vec<Record>> {
    let mut records = Vec::new();
    for p in [2u32, 3, 5, 7] {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ (p as u64) << 8);
        let (mut lucas_bad, mut trip_bad) = (Vec::new(), Vec::new());
        for _ in 0..config.lucas_samples {
            let alpha = random_rational(&mut rng, p);
            let n = rng.gen_range(0u64..=2000);
            let job = JobSpec {
                p: Some(p as u64),
                alpha: Some(alpha.to_string()),
                n: Some(n),
                ..JobSpec::new(Command::Lucas)
            };
            let report = oracle_compare(&job)?;
            if !report.agree {
                lucas_bad.push(json!({"alpha": alpha, "n": n, "main": report.main_result, "oracle": report.oracle_result}));
            }
            let block = canonical_digit_block(&alpha, p as u64)?;
            if from_periodic_digits(&block, p as u64, p)? != alpha {
                trip_bad.push(json!({"alpha": alpha, "block": block}));
            }
        }
        let samples = config.lucas_samples;
        records.push(Record {
            suite: "lucas",
            case: format!("p={p} lucas_vs_integer x{samples}"),
            ok: lucas_bad.is_empty(),
            detail: json!(lucas_bad),
        });
        records.push(Record {
            suite: "lucas",
            case: format!("p={p} digit_round_trip x{samples}"),
            ok: trip_bad.is_empty(),
            detail: json!(trip_bad),
        });
    }
    for (q, p) in [(2u64, 2u32), (3, 3), (4, 2), (7, 7), (9, 3)] {
        prime_power_exponent(q, p)?;
        let mut bad = Vec::new();
        let expected: Vec<PadicRational> =
            (0..q as i128).map(|a| PadicRational::new(-a, q as i128 - 1, p).expect("q - 1 prime to p")).collect();
        for a in &expected {
            if t_map(a, q)? != *a {
                bad.push(json!({"alpha": a, "reason": "expected fixed point moved"}));
            }
        }
        // Exhaustive over small fractions: fixed points are exactly the expected ones.
        for den in 1..=40i128 {
            if den % p as i128 == 0 {
                continue;
            }
            for num in -4 * den..=4 * den {
                let alpha = PadicRational::new(num, den, p)?;
                if alpha.den() != den {
                    continue;
                }
                let fixed = t_map(&alpha, q)? == alpha;
                if fixed != expected.contains(&alpha) {
                    bad.push(json!({"alpha": alpha, "fixed": fixed}));
                }
            }
        }
        records.push(Record { suite: "lucas", case: format!("q={q} t_map_fixed_points"), ok: bad.is_empty(), detail: json!(bad) });
    }
    Ok(records)
}

/// ν(q^m) against the bracket-power path on the random corpus.
pub fn dside_suite(config: &SuiteConfig) -> Result<Vec<Record>> {
    let mut cases = Vec::new();
    for p in [2u64, 3] {
        let ring = two_var_ring(p);
        let s = CartierStructure::standard(&ring, 1)?;
        for f in random_cubics(&ring, config.count, config.seed) {
            for (name, module) in standard_modules(&ring) {
                for m in 1..=2 {
                    cases.push((s.clone(), f.clone(), name, module.clone(), m));
                }
            }
        }
    }
    Ok(cases
        .par_iter()
        .map(|(s, f, name, module, m)| {
            let case = format!("p={} f={f} N={name} m={m}", s.ring().p());
            match invariants::dside_bsr_check(s, module, f, *m) {
                Ok(rep) => Record { suite: "dside", case, ok: rep.agree, detail: json!(rep) },
                Err(e) => Record { suite: "dside", case, ok: false, detail: json!({"error": e.to_string()}) },
            }
        })
        .collect())
}

/// The F-pure (structure, module) pairs used by the test-ideal laws.
pub fn pure_pairs(ring: &Ring) -> Result<Vec<(&'static str, CartierStructure, Ideal)>> {
    let std = CartierStructure::standard(ring, 1)?;
    let boundary = CartierStructure::new(1, Polynomial::var(ring, 0, ring.p() - 1))?;
    Ok(vec![
        ("std R", std, Ideal::unit(ring)),
        ("x^(p-1) R", boundary.clone(), Ideal::unit(ring)),
        ("x^(p-1) (x)", boundary, Ideal::principal(&Polynomial::var(ring, 0, 1))),
    ])
}

/// τ(t + 1) = f τ(t), C(τ(q t)) = τ(t) and τ(n/q^2) = C^2(f^n M) on the grid n/q^2 <= 2.
pub fn tau_laws(s: &CartierStructure, module: &Ideal, f: &Polynomial) -> Result<Vec<(&'static str, Vec<String>)>> {
    let q = s.q();
    let q2 = q * q;
    let grid: Vec<Ideal> = (0..=2 * q2)
        .into_par_iter()
        .map(|n| invariants::test_ideal(s, module, f, &Rational::new(n as i128, q2 as i128)).map(|r| r.ideal))
        .collect::<Result<_>>()?;
    let mut step = Vec::new();
    for n in 0..=q2 {
        if !grid[(n + q2) as usize].equals(&grid[n as usize].scale_by(f)?)? {
            step.push(format!("t={n}/{q2}"));
        }
    }
    let mut descent = Vec::new();
    for n in 0..=2 * q {
        if !cartier_image(s, &grid[(n * q) as usize])?.equals(&grid[n as usize])? {
            descent.push(format!("t={n}/{q2}"));
        }
    }
    let mut grid_value = Vec::new();
    let mut power = module.clone();
    for n in 0..=2 * q2 {
        if !cartier_power_image(s, &power, 2)?.equals(&grid[n as usize])? {
            grid_value.push(format!("t={n}/{q2}"));
        }
        power = Ideal::with_order(module.ring(), power.generators().iter().map(|g| g.mul(f)).collect(), module.order())?;
    }
    Ok(vec![("step", step), ("descent", descent), ("grid_value", grid_value)])
}

pub fn tau_suite(config: &SuiteConfig) -> Result<Vec<Record>> {
    let mut cases = Vec::new();
    for p in [2u64, 3] {
        let ring = two_var_ring(p);
        for f in random_cubics(&ring, config.count, config.seed) {
            for (name, s, module) in pure_pairs(&ring)? {
                cases.push((p, f.clone(), name, s, module));
            }
        }
    }
    let nested: Vec<Vec<Record>> = cases
        .par_iter()
        .map(|(p, f, name, s, module)| {
            let base = format!("p={p} f={f} S,M={name}");
            match tau_laws(s, module, f) {
                Ok(laws) => laws
                    .into_iter()
                    .map(|(law, bad)| Record { suite: "tau", case: format!("{base} {law}"), ok: bad.is_empty(), detail: json!(bad) })
                    .collect(),
                Err(e) => vec![Record { suite: "tau", case: base, ok: false, detail: json!({"error": e.to_string()}) }],
            }
        })
        .collect();
    Ok(nested.into_iter().flatten().collect())
}

fn oracle_jobs(config: &SuiteConfig) -> Vec<JobSpec> {
    let base = |command: Command, p: u64, f: &str| JobSpec { p: Some(p), f: Some(f.into()), ..JobSpec::new(command) };
    let mut jobs = vec![
        JobSpec { level: Some(3), ..base(Command::Nu, 3, "x") },
        JobSpec { level: Some(3), ..base(Command::Nu, 2, "x^3") },
        JobSpec { level: Some(2), twist: Some("x^2".into()), ..base(Command::Nu, 3, "x") },
        JobSpec { level: Some(2), module: vec!["x^2".into()], ..base(Command::Nu, 5, "x^3") },
        JobSpec { level: Some(2), module: vec!["x".into(), "y".into()], ..base(Command::Nu, 3, "x^2y") },
        JobSpec { level: Some(2), twist: Some("x^2y".into()), ..base(Command::Nu, 3, "xy^2") },
        JobSpec { max_level: Some(3), ..base(Command::Probe, 2, "x") },
        JobSpec { t: Some("1".into()), ..base(Command::Testideal, 2, "x") },
        JobSpec { t: Some("1/2".into()), module: vec!["x".into(), "y".into()], twist: Some("xy".into()), ..base(Command::Testideal, 2, "xy") },
        JobSpec { t: Some("5/9".into()), ..base(Command::Testideal, 3, "x^2y^3") },
        JobSpec { level: Some(1), ..base(Command::Nu, 7, "x^2+y^3") },
        JobSpec { level: Some(2), ..base(Command::Nu, 3, "x^2+xy+y^2") },
        JobSpec { p: Some(7), alpha: Some("-5/6".into()), n: Some(7), ..JobSpec::new(Command::Lucas) },
        JobSpec { p: Some(5), alpha: Some("-1".into()), n: Some(7), ..JobSpec::new(Command::Lucas) },
    ];
    for p in [2u64, 3] {
        let ring = two_var_ring(p);
        for f in random_cubics(&ring, config.count.min(10), config.seed) {
            jobs.push(JobSpec { level: Some(if p == 2 { 2 } else { 1 }), vars: Some(vec!["x".into(), "y".into()]), ..base(Command::Nu, p, &f.to_string()) });
        }
    }
    jobs
}

pub fn oracle_suite(config: &SuiteConfig) -> Result<Vec<Record>> {
    oracle_jobs(config)
        .par_iter()
        .map(|job| {
            let r = oracle_compare(job)?;
            Ok(Record { suite: "oracle", case: r.task.clone(), ok: r.agree, detail: json!(r) })
        })
        .collect()
}
