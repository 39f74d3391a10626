//! Rational p-adic integers: Z_(p) = Z_p ∩ Q, their base-q digit streams,
//! Lucas binomials, ϑ eigenvalues and the digit shift T.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Serialize, Serializer};

use crate::algebra::{is_prime, FpElement};
use crate::error::{Error, Result};

/// Largest modulus q^m that digit computations accept (products stay in u128).
const MAX_MODULUS: u128 = 1 << 62;

fn gcd(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Inverse of `a` modulo `m` by extended Euclid, if it exists.
fn mod_inverse(a: i128, m: i128) -> Option<i128> {
    let (mut r0, mut r1) = (a.rem_euclid(m), m);
    let (mut s0, mut s1) = (1i128, 0i128);
    while r1 != 0 {
        let t = r0 / r1;
        (r0, r1) = (r1, r0 - t * r1);
        (s0, s1) = (s1, s0 - t * s1);
    }
    (r0 == 1).then(|| s0.rem_euclid(m))
}

/// e with q = p^e, e >= 1.
pub fn prime_power_exponent(q: u64, p: u32) -> Result<u32> {
    let p64 = p as u64;
    if p64 < 2 || q < p64 {
        return Err(Error::InvalidQ { q, p });
    }
    let (mut v, mut e) = (q, 0);
    while v % p64 == 0 {
        v /= p64;
        e += 1;
    }
    if v == 1 {
        Ok(e)
    } else {
        Err(Error::InvalidQ { q, p })
    }
}

fn modulus(q: u64, m: u32) -> Result<u128> {
    let mut v: u128 = 1;
    for _ in 0..m {
        v = v.saturating_mul(q as u128);
        if v > MAX_MODULUS {
            return Err(Error::ExponentCapExceeded { requested: v, cap: MAX_MODULUS as u64 });
        }
    }
    Ok(v)
}

/// A reduced fraction num/den with den > 0 prime to p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PadicRational {
    num: i128,
    den: i128,
    p: u32,
}

impl PadicRational {
    pub fn new(num: i128, den: i128, p: u32) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::InvalidArgument(format!("{p} is not prime")));
        }
        if den == 0 {
            return Err(Error::ZeroDivisorInput("zero denominator".into()));
        }
        let g = gcd(num, den);
        let sign = if den < 0 { -1 } else { 1 };
        let (num, den) = (sign * num / g, sign * den / g);
        if den % p as i128 == 0 {
            return Err(Error::DenominatorNotInvertible { den, modulus: p as u128 });
        }
        Ok(PadicRational { num, den, p })
    }

    pub fn integer(n: i128, p: u32) -> Result<Self> {
        Self::new(n, 1, p)
    }

    pub fn num(&self) -> i128 {
        self.num
    }

    pub fn den(&self) -> i128 {
        self.den
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn is_integer(&self) -> bool {
        self.den == 1
    }

    pub fn neg(&self) -> Self {
        PadicRational { num: -self.num, ..*self }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.p != other.p {
            return Err(Error::InvalidArgument("p-adic operands with different primes".into()));
        }
        let overflow = || Error::InvalidArgument("rational arithmetic overflow".into());
        let num = self
            .num
            .checked_mul(other.den)
            .and_then(|a| other.num.checked_mul(self.den).and_then(|b| a.checked_add(b)))
            .ok_or_else(overflow)?;
        let den = self.den.checked_mul(other.den).ok_or_else(overflow)?;
        Self::new(num, den, self.p)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// Parses "a" or "a/b".
    pub fn parse(text: &str, p: u32) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("`{text}` is not a rational literal"));
        let (n, d) = match text.trim().split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (text.trim(), "1"),
        };
        Self::new(n.parse().map_err(|_| bad())?, d.parse().map_err(|_| bad())?, p)
    }
}

impl Ord for PadicRational {
    /// Order as real numbers.
    fn cmp(&self, other: &Self) -> Ordering {
        let l = BigInt::from(self.num) * other.den;
        let r = BigInt::from(other.num) * self.den;
        l.cmp(&r).then(self.p.cmp(&other.p))
    }
}

impl PartialOrd for PadicRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PadicRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl Serialize for PadicRational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Eventually periodic digit stream: `preperiod` then `period` repeated forever.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct DigitBlock {
    pub preperiod: Vec<u64>,
    pub period: Vec<u64>,
}

impl DigitBlock {
    /// The first `len` digits of the stream.
    pub fn expand(&self, len: usize) -> Vec<u64> {
        if self.period.is_empty() {
            return self.preperiod.iter().copied().take(len).collect();
        }
        self.preperiod.iter().chain(self.period.iter().cycle()).copied().take(len).collect()
    }
}

impl FromStr for DigitBlock {
    type Err = Error;

    /// "d0,d1;d2,d3": preperiod before the semicolon, period after it.
    fn from_str(text: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("`{text}` is not a digit block"));
        let list = |s: &str| -> Result<Vec<u64>> {
            s.split(',').filter(|t| !t.trim().is_empty()).map(|t| t.trim().parse().map_err(|_| bad())).collect()
        };
        let (pre, per) = text.split_once(';').ok_or_else(bad)?;
        Ok(DigitBlock { preperiod: list(pre)?, period: list(per)? })
    }
}

/// α_m: the integer in [0, q^m) with α ≡ α_m mod q^m.
pub fn digits(alpha: &PadicRational, m: u32, q: u64) -> Result<u128> {
    prime_power_exponent(q, alpha.p)?;
    let modl = modulus(q, m)?;
    let mi = modl as i128;
    let inv = mod_inverse(alpha.den, mi).ok_or(Error::DenominatorNotInvertible { den: alpha.den, modulus: modl })?;
    let n = alpha.num.rem_euclid(mi) as u128;
    Ok(n * inv as u128 % modl)
}

/// The first `len` base-q digits of α, least significant first.
pub fn digit_prefix(alpha: &PadicRational, len: usize, q: u64) -> Result<Vec<u64>> {
    prime_power_exponent(q, alpha.p)?;
    let mut out = Vec::with_capacity(len);
    let mut state = *alpha;
    for _ in 0..len {
        let d = digits(&state, 1, q)? as u64;
        out.push(d);
        state = t_map_unchecked(&state, d, q);
    }
    Ok(out)
}

/// Base-p digits of n, least significant first (empty for n = 0).
pub fn base_digits(mut n: u128, base: u64) -> Vec<u64> {
    let mut out = Vec::new();
    while n > 0 {
        out.push((n % base as u128) as u64);
        n /= base as u128;
    }
    out
}

/// binom(a, b) mod p for 0 <= a, b < p.
fn small_binomial(a: u64, b: u64, p: u64) -> u64 {
    if b > a {
        return 0;
    }
    let (mut num, mut den) = (1u64, 1u64);
    for i in 0..b {
        num = num * ((a - i) % p) % p;
        den = den * ((i + 1) % p) % p;
    }
    let inv = mod_inverse(den as i128, p as i128).expect("nonzero below p") as u64;
    num * inv % p
}

/// binom(n, k) mod p by Lucas' theorem on nonnegative integers.
pub fn binomial_mod_p(n: u64, k: u64, p: u32) -> u32 {
    let p = p as u64;
    let (mut n, mut k, mut acc) = (n, k, 1u64);
    while k > 0 {
        acc = acc * small_binomial(n % p, k % p, p) % p;
        if acc == 0 {
            break;
        }
        n /= p;
        k /= p;
    }
    acc as u32
}

/// binom(α, n) mod p as the product of digit binomials.
pub fn lucas_binomial(alpha: &PadicRational, n: u64) -> FpElement {
    let p = alpha.p as u64;
    let nd = base_digits(n as u128, p);
    let value = if nd.is_empty() {
        1
    } else {
        let ad = digit_prefix(alpha, nd.len(), p).expect("p is a power of itself");
        nd.iter().zip(&ad).fold(1, |acc, (&ni, &ai)| acc * small_binomial(ai, ni, p) % p)
    };
    FpElement::new(value as i64, alpha.p)
}

/// Eigenvalue of ϑ_n on the point α: (-1)^n binom(α, n).
pub fn theta_eigenvalue(alpha: &PadicRational, n: u64) -> FpElement {
    let b = lucas_binomial(alpha, n).value() as i64;
    FpElement::new(if n.is_multiple_of(2) { b } else { -b }, alpha.p)
}

fn t_map_unchecked(alpha: &PadicRational, d: u64, q: u64) -> PadicRational {
    let num = alpha.num - d as i128 * alpha.den;
    debug_assert_eq!(num % q as i128, 0);
    PadicRational::new(num / q as i128, alpha.den, alpha.p).expect("den stays prime to p")
}

/// T(α) = (α - α_1)/q.
pub fn t_map(alpha: &PadicRational, q: u64) -> Result<PadicRational> {
    let d = digits(alpha, 1, q)? as u64;
    Ok(t_map_unchecked(alpha, d, q))
}

/// Minimal preperiod and period of the base-q expansion of α, found by
/// iterating T until a state repeats.
pub fn canonical_digit_block(alpha: &PadicRational, q: u64) -> Result<DigitBlock> {
    prime_power_exponent(q, alpha.p)?;
    let mut seen: HashMap<PadicRational, usize> = HashMap::new();
    let mut stream = Vec::new();
    let mut state = *alpha;
    loop {
        if let Some(&start) = seen.get(&state) {
            let period = stream.split_off(start);
            return Ok(DigitBlock { preperiod: stream, period });
        }
        seen.insert(state, stream.len());
        let d = digits(&state, 1, q)? as u64;
        stream.push(d);
        state = t_map_unchecked(&state, d, q);
    }
}

/// The rational whose base-q digits are `block.preperiod` followed by
/// `block.period` repeated.
pub fn from_periodic_digits(block: &DigitBlock, q: u64, p: u32) -> Result<PadicRational> {
    prime_power_exponent(q, p)?;
    if block.period.is_empty() {
        return Err(Error::EmptyPeriod);
    }
    if let Some(&d) = block.preperiod.iter().chain(&block.period).find(|&&d| d >= q) {
        return Err(Error::InvalidArgument(format!("digit {d} is not below {q}")));
    }
    let qb = BigInt::from(q);
    let horner = |ds: &[u64]| ds.iter().rev().fold(BigInt::from(0), |acc, &d| acc * &qb + d);
    let pre = horner(&block.preperiod);
    let per = horner(&block.period);
    let qs = big_pow(&qb, block.preperiod.len());
    let qk = big_pow(&qb, block.period.len());
    // pre + q^s per / (1 - q^k)
    let den = BigInt::from(1) - qk;
    let num = pre * &den + qs * per;
    let g = big_gcd(num.clone(), den.clone());
    let (num, den) = (num / &g, den / &g);
    let too_big = || Error::InvalidArgument("periodic digit block exceeds 128-bit range".into());
    let num = i128::try_from(num).map_err(|_| too_big())?;
    let den = i128::try_from(den).map_err(|_| too_big())?;
    PadicRational::new(num, den, p)
}

fn big_pow(base: &BigInt, exp: usize) -> BigInt {
    (0..exp).fold(BigInt::from(1), |acc, _| acc * base)
}

fn big_gcd(mut a: BigInt, mut b: BigInt) -> BigInt {
    let zero = BigInt::from(0);
    while b != zero {
        let r = &a % &b;
        a = b;
        b = r;
    }
    if a < zero {
        -a
    } else {
        a
    }
}

/// Smallest preperiod s, then smallest period k, such that the finite stream
/// repeats with period k after s and shows at least two full periods.
pub fn detect_periodic(stream: &[u64]) -> Option<DigitBlock> {
    let len = stream.len();
    for s in 0..len {
        for k in 1..=(len - s) / 2 {
            if (s..len - k).all(|i| stream[i] == stream[i + k]) {
                return Some(DigitBlock { preperiod: stream[..s].to_vec(), period: stream[s..s + k].to_vec() });
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i128, d: i128, p: u32) -> PadicRational {
        PadicRational::new(n, d, p).unwrap()
    }

    #[test]
    fn digit_examples() {
        assert_eq!(digits(&r(-1, 1, 3), 2, 3).unwrap(), 8);
        assert_eq!(digits(&r(-5, 6, 7), 2, 7).unwrap(), 40);
        assert_eq!(digits(&r(0, 1, 5), 3, 25).unwrap(), 0);
        assert_eq!(digit_prefix(&r(-5, 6, 7), 3, 7).unwrap(), vec![5, 5, 5]);
        assert_eq!(digits(&r(1, 3, 2), 4, 2).unwrap() * 3 % 16, 1);
        assert!(digits(&r(1, 3, 2), 2, 6).is_err());
    }

    #[test]
    fn rejects_bad_denominators() {
        assert!(matches!(PadicRational::new(1, 6, 3), Err(Error::DenominatorNotInvertible { .. })));
        assert!(PadicRational::new(1, 0, 3).is_err());
        assert_eq!(r(4, -6, 5), r(-2, 3, 5));
        assert_eq!(PadicRational::parse("-5/6", 7).unwrap(), r(-5, 6, 7));
        assert_eq!(r(-5, 6, 7).to_string(), "-5/6");
        assert_eq!(r(3, 1, 7).to_string(), "3");
    }

    #[test]
    fn lucas_examples() {
        assert_eq!(lucas_binomial(&r(-1, 1, 5), 7).value(), 4);
        assert_eq!(lucas_binomial(&r(-5, 6, 7), 7).value(), 5);
        assert_eq!(lucas_binomial(&r(3, 1, 5), 4).value(), 0);
        assert_eq!(lucas_binomial(&r(6, 1, 7), 0).value(), 1);
        assert_eq!(lucas_binomial(&r(5, 1, 2), 2).value(), 0);
    }

    #[test]
    fn theta_examples() {
        assert_eq!(theta_eigenvalue(&r(-5, 6, 7), 1).value(), 2);
        for p in [2u32, 3, 5, 7] {
            for i in 0..3 {
                assert_eq!(theta_eigenvalue(&r(-1, 1, p), (p as u64).pow(i)).value(), 1);
            }
            assert_eq!(theta_eigenvalue(&r(0, 1, p), 3).value(), 0);
        }
    }

    #[test]
    fn t_map_examples() {
        assert_eq!(t_map(&r(-5, 6, 7), 7).unwrap(), r(-5, 6, 7));
        assert_eq!(t_map(&r(-1, 1, 3), 9).unwrap(), r(-1, 1, 3));
        for k in 0..9 {
            assert!(t_map(&r(k, 1, 3), 9).unwrap().is_zero());
        }
    }

    #[test]
    fn periodic_examples() {
        let b = |pre: &[u64], per: &[u64]| DigitBlock { preperiod: pre.to_vec(), period: per.to_vec() };
        assert_eq!(from_periodic_digits(&b(&[], &[5]), 7, 7).unwrap(), r(-5, 6, 7));
        for (q, p) in [(2u64, 2u32), (4, 2), (9, 3), (7, 7)] {
            assert_eq!(from_periodic_digits(&b(&[], &[q - 1]), q, p).unwrap(), r(-1, 1, p));
        }
        assert_eq!(from_periodic_digits(&b(&[1], &[0]), 3, 3).unwrap(), r(1, 1, 3));
        assert!(matches!(from_periodic_digits(&b(&[1], &[]), 3, 3), Err(Error::EmptyPeriod)));
        assert_eq!(canonical_digit_block(&r(-5, 6, 7), 7).unwrap(), b(&[], &[5]));
        assert_eq!(canonical_digit_block(&r(1, 1, 3), 3).unwrap(), b(&[1], &[0]));
        assert_eq!(canonical_digit_block(&r(0, 1, 3), 3).unwrap(), b(&[], &[0]));
        assert_eq!("1,2;0".parse::<DigitBlock>().unwrap(), b(&[1, 2], &[0]));
    }

    #[test]
    fn periodic_detection() {
        assert_eq!(detect_periodic(&[5, 5]), Some(DigitBlock { preperiod: vec![], period: vec![5] }));
        assert_eq!(detect_periodic(&[1, 1, 0]), None);
        assert_eq!(detect_periodic(&[1, 0, 0]), Some(DigitBlock { preperiod: vec![1], period: vec![0] }));
        assert_eq!(detect_periodic(&[1, 2, 1, 2]), Some(DigitBlock { preperiod: vec![], period: vec![1, 2] }));
        assert_eq!(detect_periodic(&[3]), None);
    }

    #[test]
    fn integer_lucas() {
        assert_eq!(binomial_mod_p(40, 7, 7), 5);
        assert_eq!(binomial_mod_p(10, 3, 5), 0);
        assert_eq!(binomial_mod_p(6, 2, 7), 1);
        assert_eq!(binomial_mod_p(3, 5, 7), 0);
    }

    #[test]
    fn prime_power_check() {
        assert_eq!(prime_power_exponent(49, 7).unwrap(), 2);
        assert!(prime_power_exponent(1, 7).is_err());
        assert!(prime_power_exponent(12, 2).is_err());
    }
}
