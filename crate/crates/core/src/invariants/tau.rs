use rayon::prelude::*;
use serde::Serialize;

use super::nu::{certificates, nu_tree};
use super::{padded_digits, ser_display, Rational};
use crate::algebra::{Ideal, Polynomial};
use crate::cartier::{extract_generators, is_f_pure, zero_extension, CartierStructure};
use crate::error::{Error, Result};
use crate::padic::{detect_periodic, digits, from_periodic_digits, PadicRational};

#[derive(Clone, Debug, Serialize)]
pub struct TestIdealRecord {
    #[serde(serialize_with = "ser_display")]
    pub t: Rational,
    #[serde(serialize_with = "ser_display")]
    pub ideal: Ideal,
    pub witness_level: u32,
}

/// ⌈t q^m⌉ for t >= 0.
fn ceil_scaled(t: &Rational, qm: u64) -> Result<u64> {
    let num = t.numer().checked_mul(qm as i128).ok_or_else(|| Error::InvalidArgument("t q^m overflows".into()))?;
    let v = (num + t.denom() - 1) / t.denom();
    u64::try_from(v).map_err(|_| Error::InvalidArgument("t q^m overflows".into()))
}

/// Smallest m >= 1 with t q^m an integer, if t ∈ Z[1/p].
fn grid_level(t: &Rational, q: u64) -> Option<u32> {
    let mut qm = q as i128;
    for m in 1..=64 {
        if qm % t.denom() == 0 {
            return Some(m);
        }
        qm = qm.checked_mul(q as i128)?;
    }
    None
}

/// C^m(f^k M) in one extraction.
fn power_image(s: &CartierStructure, module: &Ideal, f: &Polynomial, k: u64, m: u32, fk: Option<&Polynomial>) -> Result<Ideal> {
    let qm = s.q_power(m)?;
    let owned;
    let fk = match fk {
        Some(p) => p,
        None => {
            owned = f.pow(k);
            &owned
        }
    };
    let twist = s.accumulated_twist(m)?.mul(fk);
    extract_generators(module.ring(), module.order(), module.compact_generators(), &twist, qm)
}

fn test_ideal_unchecked(s: &CartierStructure, module: &Ideal, f: &Polynomial, t: &Rational) -> Result<TestIdealRecord> {
    let start = grid_level(t, s.q()).unwrap_or(1);
    let mut level = start;
    let mut k = ceil_scaled(t, s.q_power(level)?)?;
    let mut fk = f.pow(k);
    let mut current = power_image(s, module, f, k, level, Some(&fk))?;
    for _ in 0..s.limits().iter_cap {
        let next_k = ceil_scaled(t, s.q_power(level + 1)?)?;
        let next_fk = if next_k == k * s.q() { fk.frobenius(s.q()) } else { f.pow(next_k) };
        let next = power_image(s, module, f, next_k, level + 1, Some(&next_fk))?;
        if next.equals(&current)? {
            return Ok(TestIdealRecord { t: *t, ideal: current, witness_level: level });
        }
        (level, k, fk, current) = (level + 1, next_k, next_fk, next);
    }
    Err(Error::IterationCapExceeded { cap: s.limits().iter_cap, context: format!("stabilizing the test ideal at t = {t}") })
}

fn check_module(s: &CartierStructure, module: &Ideal, f: &Polynomial) -> Result<()> {
    if **module.ring() != **s.ring() || **f.ring() != **s.ring() {
        return Err(Error::RingMismatch);
    }
    if f.is_zero() {
        return Err(Error::ZeroDivisorInput("f = 0".into()));
    }
    if !is_f_pure(s, module)? {
        return Err(Error::NotFPure);
    }
    Ok(())
}

/// τ(M, f^t): C^m(f^⌈t q^m⌉ M) for increasing m until two consecutive levels agree.
pub fn test_ideal(s: &CartierStructure, module: &Ideal, f: &Polynomial, t: &Rational) -> Result<TestIdealRecord> {
    if *t < Rational::from_integer(0) {
        return Err(Error::InvalidArgument(format!("t = {t} is negative")));
    }
    check_module(s, module, f)?;
    test_ideal_unchecked(s, module, f, t)
}

/// ψ^-(t) = ⌈t q^m⌉ - 1.
pub fn psi_minus(t: &Rational, qm: u64) -> Result<i128> {
    Ok(ceil_scaled(t, qm)? as i128 - 1)
}

/// ψ^+(t) = ⌊t q^m⌋.
pub fn psi_plus(t: &Rational, qm: u64) -> Result<i128> {
    Ok(t.numer() * qm as i128 / t.denom())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
    Both,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FjnExponent {
    #[serde(serialize_with = "ser_display")]
    pub t: Rational,
    pub side: Side,
    /// False when the value is only the upper end of a grid interval.
    pub resolved: bool,
    /// How the value was pinned down: "digits", "right_endpoint", "left_endpoint" or "grid".
    pub via: &'static str,
    /// Grid index n of the jump between n/q^L and (n+1)/q^L.
    pub grid_index: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct FjnReport {
    pub level: u32,
    pub q: u64,
    pub jumps: Vec<u64>,
    pub exponents: Vec<FjnExponent>,
}

impl FjnReport {
    pub fn left_exponents(&self) -> impl Iterator<Item = &FjnExponent> {
        self.exponents.iter().filter(|e| e.side != Side::Right)
    }

    pub fn right_exponents(&self) -> impl Iterator<Item = &FjnExponent> {
        self.exponents.iter().filter(|e| e.side != Side::Left)
    }
}

fn tau_values(s: &CartierStructure, module: &Ideal, f: &Polynomial, ts: Vec<Rational>) -> Result<Vec<Ideal>> {
    ts.into_par_iter().map(|t| test_ideal_unchecked(s, module, f, &t).map(|r| r.ideal)).collect()
}

/// F-jumping exponents in [0, 1] read off the grid t = n/q^L.
pub fn fjn_exponents(s: &CartierStructure, module: &Ideal, f: &Polynomial, level: u32) -> Result<FjnReport> {
    if level == 0 {
        return Err(Error::InvalidArgument("level must be at least 1".into()));
    }
    check_module(s, module, f)?;
    let q = s.q();
    let ql = s.q_power(level)?;
    s.q_power(level + 1)?;
    let grid = tau_values(s, module, f, (0..=ql).map(|n| Rational::new(n as i128, ql as i128)).collect())?;
    let differs = |a: u64, b: u64| -> Result<bool> { Ok(!grid[a as usize].equals(&grid[b as usize])?) };
    let mut jumps = Vec::new();
    for n in 0..ql {
        if differs(n, n + 1)? {
            jumps.push(n);
        }
    }
    let p = s.ring().p();
    let mut exponents = Vec::new();
    for &n in &jumps {
        let lo = Rational::new(n as i128, ql as i128);
        let hi = Rational::new(n as i128 + 1, ql as i128);
        if let Some(t) = digit_candidate(n, q, p, level, &lo, &hi, &differs)? {
            exponents.push(FjnExponent { t, side: Side::Left, resolved: true, via: "digits", grid_index: n });
            continue;
        }
        // Refine one level: which of the q sub-intervals carries the drop.
        let sub_ts = (1..q).map(|j| Rational::new((n * q + j) as i128, (ql * q) as i128)).collect();
        let mut sub = vec![grid[n as usize].clone()];
        sub.extend(tau_values(s, module, f, sub_ts)?);
        sub.push(grid[n as usize + 1].clone());
        let mut sub_jumps = Vec::new();
        for j in 0..q as usize {
            if !sub[j].equals(&sub[j + 1])? {
                sub_jumps.push(j as u64);
            }
        }
        let entry = if sub_jumps == [q - 1] {
            FjnExponent { t: hi, side: Side::Left, resolved: true, via: "right_endpoint", grid_index: n }
        } else if sub_jumps == [0] {
            FjnExponent { t: lo, side: Side::Right, resolved: true, via: "left_endpoint", grid_index: n }
        } else {
            FjnExponent { t: hi, side: Side::Left, resolved: false, via: "grid", grid_index: n }
        };
        exponents.push(entry);
    }
    Ok(FjnReport { level, q, jumps, exponents: merge_sides(exponents) })
}

/// The left exponent -α when the digits of n continue periodically to an α
/// whose truncations are grid jumps at every level and -α lies in (lo, hi].
fn digit_candidate(
    n: u64,
    q: u64,
    p: u32,
    level: u32,
    lo: &Rational,
    hi: &Rational,
    differs: &dyn Fn(u64, u64) -> Result<bool>,
) -> Result<Option<Rational>> {
    let Some(block) = detect_periodic(&padded_digits(n, q, level as usize)) else { return Ok(None) };
    let Ok(alpha) = from_periodic_digits(&block, q, p) else { return Ok(None) };
    let t = Rational::new(-alpha.num(), alpha.den());
    if t <= *lo || t > *hi {
        return Ok(None);
    }
    let ql = q.pow(level);
    for m in 1..=level {
        let qm = q.pow(m);
        let k = digits(&alpha, m, q)? as u64;
        let scale = ql / qm;
        if !differs(k * scale, (k + 1) * scale)? {
            return Ok(None);
        }
    }
    Ok(Some(t))
}

fn merge_sides(mut list: Vec<FjnExponent>) -> Vec<FjnExponent> {
    list.sort_by(|a, b| a.t.cmp(&b.t).then(a.side.cmp(&b.side)));
    let mut out: Vec<FjnExponent> = Vec::new();
    for e in list {
        match out.last_mut() {
            Some(last) if last.t == e.t && last.side != e.side && e.resolved && last.resolved => {
                last.side = Side::Both;
            }
            _ => out.push(e),
        }
    }
    out
}

/// 0 ∈ BSR, detected as M_{f!} ≠ M.
pub fn zero_root_test(s: &CartierStructure, module: &Ideal, f: &Polynomial) -> Result<bool> {
    let z = zero_extension(s, module, f)?;
    Ok(!z.record.stable_ideal.equals(module)?)
}

#[derive(Clone, Debug, Serialize)]
pub struct CrosscheckReport {
    pub max_level: u32,
    pub certified_roots: Vec<PadicRational>,
    /// Certified roots in [-1, 0).
    pub roots_in_window: Vec<PadicRational>,
    /// Resolved left exponents in (0, 1] with denominator prime to p, negated.
    #[serde(serialize_with = "ser_rationals")]
    pub negated_left_exponents: Vec<Rational>,
    pub zero_in_bsr: bool,
    pub right_jump_at_zero: bool,
    pub zero_root: bool,
    pub consistent: bool,
    pub discrepancies: Vec<String>,
}

fn ser_rationals<S: serde::Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|r| r.to_string()))
}

/// Compares the certified roots with the left F-jumping exponents and the
/// zero-root test.
pub fn bsr_fjn_crosscheck(s: &CartierStructure, module: &Ideal, f: &Polynomial, max_level: u32) -> Result<CrosscheckReport> {
    check_module(s, module, f)?;
    let p = s.ring().p();
    let (tree, fjn) = rayon::join(|| nu_tree(s, module, f, max_level), || fjn_exponents(s, module, f, max_level));
    let (tree, fjn) = (tree?, fjn?);
    let zero_root = zero_root_test(s, module, f)?;

    let mut certified_roots: Vec<PadicRational> = certificates(&tree, p).iter().filter_map(|c| c.value()).collect();
    certified_roots.sort();
    certified_roots.dedup();
    let minus_one = PadicRational::integer(-1, p)?;
    let zero = PadicRational::integer(0, p)?;
    let roots_in_window: Vec<PadicRational> =
        certified_roots.iter().copied().filter(|r| *r >= minus_one && *r < zero).collect();
    let mut negated_left_exponents: Vec<Rational> = fjn
        .left_exponents()
        .filter(|e| e.resolved && *e.t.numer() > 0 && e.t <= Rational::from_integer(1))
        .filter(|e| e.t.denom() % p as i128 != 0)
        .map(|e| -e.t)
        .collect();
    negated_left_exponents.sort();
    negated_left_exponents.dedup();
    let zero_in_bsr = certified_roots.contains(&zero);
    let right_jump_at_zero = fjn.right_exponents().any(|e| e.resolved && *e.t.numer() == 0);

    let mut discrepancies = Vec::new();
    let window: Vec<Rational> = roots_in_window.iter().map(|r| Rational::new(r.num(), r.den())).collect();
    if window != negated_left_exponents {
        discrepancies.push(format!(
            "roots in [-1,0) {:?} differ from negated left exponents {:?}",
            window.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
            negated_left_exponents.iter().map(|r| r.to_string()).collect::<Vec<_>>()
        ));
    }
    if zero_in_bsr != right_jump_at_zero || zero_in_bsr != zero_root {
        discrepancies.push(format!(
            "zero root: certified={zero_in_bsr}, right jump at 0={right_jump_at_zero}, M_f! != M={zero_root}"
        ));
    }
    Ok(CrosscheckReport {
        max_level,
        certified_roots,
        roots_in_window,
        negated_left_exponents,
        zero_in_bsr,
        right_jump_at_zero,
        zero_root,
        consistent: discrepancies.is_empty(),
        discrepancies,
    })
}
