//! Independent reference computations, each sharing no code with the main
//! path beyond parsing: monomial exponent arithmetic, a dense coefficient
//! split, and exact integer binomials.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::{Ideal, Monomial, MonomialOrder, Polynomial};
use crate::error::{Error, Result};
use crate::invariants::{self, parse_rational, Rational};
use crate::job::{ideal_strings, Command, Context, JobSpec};
use crate::padic::PadicRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleKind {
    UnivariateClosedForm,
    DenseRootExtraction,
    MonomialIdealPath,
    IntegerBinomial,
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleReport {
    pub task: String,
    pub main_result: Value,
    pub oracle_result: Value,
    pub agree: bool,
    pub oracle_kind: OracleKind,
}

/// Runs the main path and a disjoint reference path on the same job.
pub fn oracle_compare(job: &JobSpec) -> Result<OracleReport> {
    if job.command == Command::Lucas {
        return lucas_compare(job);
    }
    let ctx = Context::from_job(job)?;
    let f = ctx.f()?;
    let monomial = f.is_monomial()
        && ctx.structure.twist().is_monomial()
        && ctx.module.generators().iter().all(Polynomial::is_monomial);
    let kind = match (monomial, ctx.ring.nvars()) {
        (true, 1) => OracleKind::UnivariateClosedForm,
        (true, _) => OracleKind::MonomialIdealPath,
        (false, _) => OracleKind::DenseRootExtraction,
    };
    let task = task_name(job);
    let (main_result, oracle_result) = match (job.command, kind) {
        (Command::Nu, OracleKind::UnivariateClosedForm) => {
            let m = job.level.unwrap_or(1);
            (json!(invariants::nu_set(&ctx.structure, &ctx.module, f, m)?.members), json!(univariate_nu(&ctx, m)?))
        }
        (Command::Nu, OracleKind::MonomialIdealPath) => {
            let m = job.level.unwrap_or(1);
            (json!(invariants::nu_set(&ctx.structure, &ctx.module, f, m)?.members), json!(monomial_nu(&ctx, m)?))
        }
        (Command::Nu, OracleKind::DenseRootExtraction) => {
            let m = job.level.unwrap_or(1);
            (json!(invariants::nu_set(&ctx.structure, &ctx.module, f, m)?.members), json!(dense_nu(&ctx, m)?))
        }
        (Command::Probe, OracleKind::UnivariateClosedForm) => {
            let max = job.max_level.unwrap_or(2);
            let main = invariants::bound_assumption_probe(&ctx.structure, &ctx.module, f, max)?.counts;
            let oracle = (1..=max).map(|m| univariate_nu(&ctx, m).map(|v| v.len())).collect::<Result<Vec<_>>>()?;
            (json!(main), json!(oracle))
        }
        (Command::Testideal, OracleKind::UnivariateClosedForm | OracleKind::MonomialIdealPath) => {
            let t = parse_rational(job.t.as_deref().ok_or_else(|| Error::InvalidArgument("-t is required".into()))?)?;
            let main = invariants::test_ideal(&ctx.structure, &ctx.module, f, &t)?;
            (json!(ideal_strings(&main.ideal)), json!(monomial_test_ideal(&ctx, &t, job.order)?))
        }
        _ => return Err(Error::UnsupportedRegime(format!("{task} with {kind:?}"))),
    };
    Ok(OracleReport { task, agree: main_result == oracle_result, main_result, oracle_result, oracle_kind: kind })
}

fn task_name(job: &JobSpec) -> String {
    let mut s = format!("{} p={}", job.command.name(), job.p.unwrap_or(0));
    if let Some(f) = &job.f {
        s.push_str(&format!(" f={f}"));
    }
    if let Some(t) = &job.twist {
        s.push_str(&format!(" twist={t}"));
    }
    if !job.module.is_empty() {
        s.push_str(&format!(" N=({})", job.module.join(",")));
    }
    if let Some(m) = job.level {
        s.push_str(&format!(" m={m}"));
    }
    if let Some(t) = &job.t {
        s.push_str(&format!(" t={t}"));
    }
    s
}

fn exponent_of(poly: &Polynomial) -> Vec<u64> {
    poly.terms()[0].0.exponents().iter().map(|&e| e as u64).collect()
}

fn q_and_power(ctx: &Context, m: u32) -> Result<(u64, u64)> {
    let q = (ctx.ring.p() as u64).pow(ctx.structure.e());
    let qm = q.checked_pow(m).ok_or(Error::ExponentCapExceeded { requested: u128::MAX, cap: 0 })?;
    if qm > ctx.structure.limits().exp_cap {
        return Err(Error::ExponentCapExceeded { requested: qm as u128, cap: ctx.structure.limits().exp_cap });
    }
    Ok((q, qm))
}

/// Jumps of ⌊(a + d n + W)/q^m⌋ with W = w (q^m - 1)/(q - 1).
fn univariate_nu(ctx: &Context, m: u32) -> Result<Vec<u64>> {
    let (q, qm) = q_and_power(ctx, m)?;
    let d = exponent_of(ctx.f()?)[0];
    let w = exponent_of(ctx.structure.twist())[0] * ((qm - 1) / (q - 1));
    let a = ctx.module.generators().iter().map(|g| exponent_of(g)[0]).min().unwrap_or(0);
    let image = |n: u64| (a + d * n + w) / qm;
    Ok((0..qm).filter(|&n| image(n) != image(n + 1)).collect())
}

type MonomialSet = Vec<Vec<u64>>;

/// Minimal generators, sorted by the monomial order, largest first.
fn minimalize(mut gens: MonomialSet, nvars: usize, order: MonomialOrder) -> MonomialSet {
    gens.sort();
    gens.dedup();
    let divides = |a: &[u64], b: &[u64]| a.iter().zip(b).all(|(x, y)| x <= y);
    let keep: MonomialSet =
        gens.iter().filter(|g| !gens.iter().any(|h| h != *g && divides(h, g))).cloned().collect();
    let to_mono = |e: &[u64]| Monomial::from_exponents(&e.iter().map(|&x| x as u32).collect::<Vec<_>>());
    let mut keep = keep;
    keep.sort_by(|a, b| order.cmp(&to_mono(b), &to_mono(a)));
    debug_assert!(keep.iter().all(|g| g.len() == nvars));
    keep
}

/// Image of the monomial ideal generated by `gens` under the q^m-root with twist exponent `w`.
fn monomial_image(gens: &MonomialSet, shift: &[u64], qm: u64, order: MonomialOrder) -> MonomialSet {
    let nvars = shift.len();
    let roots = gens.iter().map(|g| g.iter().zip(shift).map(|(a, s)| (a + s) / qm).collect()).collect();
    minimalize(roots, nvars, order)
}

fn scaled(v: &[u64], k: u64) -> Vec<u64> {
    v.iter().map(|x| x * k).collect()
}

fn added(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn monomial_nu(ctx: &Context, m: u32) -> Result<Vec<u64>> {
    let (q, qm) = q_and_power(ctx, m)?;
    let d = exponent_of(ctx.f()?);
    let w = scaled(&exponent_of(ctx.structure.twist()), (qm - 1) / (q - 1));
    let gens: MonomialSet = ctx.module.generators().iter().map(exponent_of).collect();
    let order = ctx.module.order();
    let image = |n: u64| monomial_image(&gens, &added(&w, &scaled(&d, n)), qm, order);
    Ok((0..qm).filter(|&n| image(n) != image(n + 1)).collect())
}

fn monomial_strings(ctx: &Context, set: &MonomialSet) -> Vec<String> {
    set.iter()
        .map(|e| {
            let m = Monomial::from_exponents(&e.iter().map(|&x| x as u32).collect::<Vec<_>>());
            Polynomial::monomial(&ctx.ring, m, 1).to_string()
        })
        .collect()
}

/// τ(t) for monomial data: C^m(f^⌈t q^m⌉ M) from the grid level upward until stable.
fn monomial_test_ideal(ctx: &Context, t: &Rational, order: MonomialOrder) -> Result<Vec<String>> {
    let q = (ctx.ring.p() as u64).pow(ctx.structure.e());
    let d = exponent_of(ctx.f()?);
    let w1 = exponent_of(ctx.structure.twist());
    let gens = minimalize(ctx.module.generators().iter().map(exponent_of).collect(), ctx.ring.nvars(), order);
    if monomial_image(&gens, &w1, q, order) != gens {
        return Err(Error::NotFPure);
    }
    let den = *t.denom() as u64;
    let start = (1..=40u32).find(|&m| q.checked_pow(m).is_some_and(|v| v % den == 0)).unwrap_or(1);
    let at = |m: u32| -> Result<MonomialSet> {
        let (_, qm) = q_and_power(ctx, m)?;
        let k = (*t.numer() as u64 * qm).div_ceil(den);
        let w = scaled(&w1, (qm - 1) / (q - 1));
        Ok(monomial_image(&gens, &added(&w, &scaled(&d, k)), qm, order))
    };
    let mut current = at(start)?;
    for m in (start..).take(ctx.structure.limits().iter_cap) {
        let next = at(m + 1)?;
        if next == current {
            return Ok(monomial_strings(ctx, &current));
        }
        current = next;
    }
    Err(Error::IterationCapExceeded { cap: ctx.structure.limits().iter_cap, context: "monomial test ideal".into() })
}

/// Splits `h` into its q-th root parts by walking the full exponent box.
fn dense_split(h: &Polynomial, q: u64) -> Vec<Polynomial> {
    let ring = h.ring();
    let n = ring.nvars();
    let mut maxdeg = vec![0usize; n];
    for (m, _) in h.terms() {
        for (i, &e) in m.exponents().iter().enumerate() {
            maxdeg[i] = maxdeg[i].max(e as usize);
        }
    }
    let dims: Vec<usize> = maxdeg.iter().map(|d| d + 1).collect();
    let size: usize = dims.iter().product();
    let mut grid = vec![0u32; size];
    let index = |e: &[u32]| e.iter().zip(&dims).rev().fold(0usize, |acc, (&x, &d)| acc * d + x as usize);
    for (m, c) in h.terms() {
        grid[index(m.exponents())] = *c;
    }
    let mut parts: BTreeMap<Vec<u64>, Vec<(Monomial, i64)>> = BTreeMap::new();
    for (flat, &c) in grid.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let mut rest = flat;
        let mut rem = Vec::with_capacity(n);
        let mut quo = Vec::with_capacity(n);
        for &d in &dims {
            let e = (rest % d) as u64;
            rest /= d;
            rem.push(e % q);
            quo.push((e / q) as u32);
        }
        parts.entry(rem).or_default().push((Monomial::from_exponents(&quo), c as i64));
    }
    parts.into_values().map(|terms| Polynomial::from_terms(ring, terms)).collect()
}

/// ν(q^m) with every extraction done by [`dense_split`].
fn dense_nu(ctx: &Context, m: u32) -> Result<Vec<u64>> {
    let (q, qm) = q_and_power(ctx, m)?;
    let f = ctx.f()?;
    let mut twist = Polynomial::one(&ctx.ring);
    for _ in 0..(qm - 1) / (q - 1) {
        twist = twist.mul(ctx.structure.twist());
    }
    let mut layer: Vec<Polynomial> = ctx.module.generators().iter().map(|g| g.mul(&twist)).collect();
    let mut images = Vec::with_capacity(qm as usize + 1);
    for _ in 0..=qm {
        let parts: Vec<Polynomial> = layer.iter().flat_map(|h| dense_split(h, qm)).collect();
        images.push(Ideal::with_order(&ctx.ring, parts, ctx.module.order())?);
        layer = layer.iter().map(|h| h.mul(f)).collect();
    }
    let mut out = Vec::new();
    for n in 0..qm as usize {
        if !images[n].equals(&images[n + 1])? {
            out.push(n as u64);
        }
    }
    Ok(out)
}

/// α_k = num·den^(φ(p^k) - 1) mod p^k, with p^k > n.
fn lucas_compare(job: &JobSpec) -> Result<OracleReport> {
    let p = job.prime()?;
    let alpha = PadicRational::parse(job.alpha.as_deref().unwrap_or("0"), p as u32)?;
    let n = job.n.ok_or_else(|| Error::InvalidArgument("n is required".into()))?;
    let main = crate::padic::lucas_binomial(&alpha, n).value();
    let mut k = 1u32;
    while (p as u128).pow(k) <= n as u128 {
        k += 1;
    }
    let modulus = BigInt::from(p).pow(k);
    let phi = BigInt::from(p).pow(k - 1) * (p - 1);
    let den_inv = BigInt::from(alpha.den()).modpow(&(phi - 1), &modulus);
    let mut ak = (BigInt::from(alpha.num()) * den_inv) % &modulus;
    if ak < BigInt::from(0) {
        ak += &modulus;
    }
    let ak = ak.to_biguint().expect("reduced to a nonnegative residue");
    let oracle = integer_binomial(&ak, n) % BigUint::from(p);
    let oracle: u64 = oracle.try_into().expect("below p");
    Ok(OracleReport {
        task: format!("lucas p={p} alpha={alpha} n={n}"),
        main_result: json!(main),
        oracle_result: json!(oracle),
        agree: main as u64 == oracle,
        oracle_kind: OracleKind::IntegerBinomial,
    })
}

/// binom(a, n) exactly.
pub fn integer_binomial(a: &BigUint, n: u64) -> BigUint {
    if BigUint::from(n) > *a {
        return BigUint::from(0u32);
    }
    let mut acc = BigUint::from(1u32);
    for i in 0..n {
        acc = acc * (a - BigUint::from(i)) / BigUint::from(i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn job(command: Command, p: u64, f: &str) -> JobSpec {
        JobSpec { p: Some(p), f: Some(f.into()), ..JobSpec::new(command) }
    }

    #[test]
    fn univariate_nu_agrees() {
        let r = oracle_compare(&JobSpec { level: Some(3), ..job(Command::Nu, 3, "x") }).unwrap();
        assert_eq!(r.oracle_kind, OracleKind::UnivariateClosedForm);
        assert!(r.agree);
        assert_eq!(r.oracle_result, json!([26]));
        let r = oracle_compare(&JobSpec { level: Some(2), twist: Some("x^2".into()), ..job(Command::Nu, 3, "x^2") })
            .unwrap();
        assert!(r.agree, "{r:?}");
    }

    #[test]
    fn monomial_test_ideal_agrees() {
        let j = JobSpec {
            t: Some("1/2".into()),
            module: vec!["x".into(), "y".into()],
            twist: Some("xy".into()),
            ..job(Command::Testideal, 2, "xy")
        };
        let r = oracle_compare(&j).unwrap();
        assert_eq!(r.oracle_kind, OracleKind::MonomialIdealPath);
        assert!(r.agree, "{r:?}");
    }

    #[test]
    fn dense_nu_agrees_on_cusp() {
        let r = oracle_compare(&JobSpec { level: Some(1), ..job(Command::Nu, 7, "x^2+y^3") }).unwrap();
        assert_eq!(r.oracle_kind, OracleKind::DenseRootExtraction);
        assert_eq!(r.oracle_result, json!([5, 6]));
        assert!(r.agree);
    }

    #[test]
    fn lucas_agrees() {
        let j = JobSpec { p: Some(7), alpha: Some("-5/6".into()), n: Some(7), ..JobSpec::new(Command::Lucas) };
        let r = oracle_compare(&j).unwrap();
        assert!(r.agree);
        assert_eq!(r.oracle_result, json!(5));
    }

    #[test]
    fn unsupported_regime() {
        let r = oracle_compare(&JobSpec { max_level: Some(2), ..job(Command::Bsr, 3, "x+y^2") });
        assert!(matches!(r, Err(Error::UnsupportedRegime(_))));
    }

    #[test]
    fn exact_binomials() {
        assert_eq!(integer_binomial(&BigUint::from(40u32), 7), BigUint::from(18643560u64));
        assert_eq!(integer_binomial(&BigUint::from(3u32), 5), BigUint::from(0u32));
    }
}
