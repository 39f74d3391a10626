//! A finite model of B_f = ⊕_{m>=0} R·δ_m, δ_m = (f - t)^(-m-1), with its
//! t-action and the elements Q_n^(m) = t^(p^m - n - 1)(f - t)^(-p^m).

use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::Polynomial;
use crate::config::Limits;
use crate::error::{Error, Result};
use crate::padic::{base_digits, binomial_mod_p};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BfElement {
    f: Polynomial,
    support: BTreeMap<u64, Polynomial>,
}

impl BfElement {
    pub fn zero(f: &Polynomial) -> Self {
        BfElement { f: f.clone(), support: BTreeMap::new() }
    }

    /// c·δ_m.
    pub fn delta(f: &Polynomial, m: u64, c: Polynomial) -> Self {
        let mut x = Self::zero(f);
        x.add_term(m, c);
        x
    }

    pub fn f(&self) -> &Polynomial {
        &self.f
    }

    pub fn support(&self) -> &BTreeMap<u64, Polynomial> {
        &self.support
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn coefficient(&self, m: u64) -> Polynomial {
        self.support.get(&m).cloned().unwrap_or_else(|| Polynomial::zero(self.f.ring()))
    }

    fn add_term(&mut self, m: u64, c: Polynomial) {
        if c.is_zero() {
            return;
        }
        let sum = match self.support.remove(&m) {
            Some(old) => old.add(&c),
            None => c,
        };
        if !sum.is_zero() {
            self.support.insert(m, sum);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&m, c) in &other.support {
            out.add_term(m, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&Polynomial::constant(self.f.ring(), -1)))
    }

    /// Multiplication by an element of R.
    pub fn scale(&self, c: &Polynomial) -> Self {
        let mut out = Self::zero(&self.f);
        for (&m, a) in &self.support {
            out.add_term(m, a.mul(c));
        }
        out
    }

    /// Largest δ index in the support, if any.
    pub fn top(&self) -> Option<u64> {
        self.support.keys().next_back().copied()
    }
}

impl std::fmt::Display for BfElement {
    fn fmt(&self, out: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.support.is_empty() {
            return write!(out, "0");
        }
        let parts: Vec<String> = self.support.iter().map(|(m, c)| format!("({c})*d{m}")).collect();
        write!(out, "{}", parts.join(" + "))
    }
}

impl Serialize for BfElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_map(self.support.iter().map(|(m, c)| (m.to_string(), c.to_string())))
    }
}

/// (f - t)·x: every δ_m moves to δ_(m-1), δ_0 dies.
pub fn fmt_action(x: &BfElement) -> BfElement {
    let mut out = BfElement::zero(&x.f);
    for (&m, c) in &x.support {
        if m > 0 {
            out.add_term(m - 1, c.clone());
        }
    }
    out
}

/// t·x = f·x - (f - t)·x.
pub fn t_action(x: &BfElement) -> BfElement {
    x.scale(&x.f).sub(&fmt_action(x))
}

fn check_f(f: &Polynomial) -> Result<()> {
    if f.is_zero() {
        return Err(Error::ZeroDivisorInput("B_f needs f != 0".into()));
    }
    Ok(())
}

fn p_power(f: &Polynomial, m: u32) -> Result<u64> {
    Limits::default().checked_power(f.ring().p() as u64, m)
}

fn check_index(f: &Polynomial, m: u32, n: u64) -> Result<u64> {
    check_f(f)?;
    let pm = p_power(f, m)?;
    if n >= pm {
        return Err(Error::IndexOutOfRange(format!("n = {n} is not below p^{m} = {pm}")));
    }
    Ok(pm)
}

/// Q_n^(m) as t^(p^m - n - 1) applied to δ_(p^m - 1).
pub fn q_element_iterated(f: &Polynomial, m: u32, n: u64) -> Result<BfElement> {
    let pm = check_index(f, m, n)?;
    let mut x = BfElement::delta(f, pm - 1, Polynomial::one(f.ring()));
    for _ in 0..pm - n - 1 {
        x = t_action(&x);
    }
    Ok(x)
}

/// Q_n^(m) = (-1)^n Σ_r Π_i binom(n_i + r_i, n_i) f^(Σ r_i p^i) δ_(n + Σ r_i p^i),
/// with 0 <= r_i <= p - 1 - n_i.
pub fn q_element_closed(f: &Polynomial, m: u32, n: u64) -> Result<BfElement> {
    check_index(f, m, n)?;
    let p = f.ring().p();
    let mut nd = base_digits(n as u128, p as u64);
    nd.resize(m as usize, 0);
    let sign = if n.is_multiple_of(2) { 1 } else { -1 };
    let mut out = BfElement::zero(f);
    let mut r = vec![0u64; m as usize];
    loop {
        let mut coeff = sign;
        let mut shift = 0u64;
        for i in 0..m as usize {
            coeff *= binomial_mod_p(nd[i] + r[i], nd[i], p) as i64;
            shift += r[i] * (p as u64).pow(i as u32);
        }
        if coeff != 0 {
            out.add_term(n + shift, f.pow(shift).scale(coeff));
        }
        // Odometer over the digit boxes.
        let mut i = 0;
        loop {
            if i == m as usize {
                return Ok(out);
            }
            if r[i] < p as u64 - 1 - nd[i] {
                r[i] += 1;
                break;
            }
            r[i] = 0;
            i += 1;
        }
    }
}

/// Q_n^(m) by both constructions, which must agree.
pub fn q_element(f: &Polynomial, m: u32, n: u64) -> Result<BfElement> {
    let a = q_element_iterated(f, m, n)?;
    let b = q_element_closed(f, m, n)?;
    if a != b {
        return Err(Error::InternalMismatch(format!("Q_{n}^({m}): iterated {a} but closed form {b}")));
    }
    Ok(a)
}

/// t·Q_n = Q_(n-1) for n >= 1, and t·Q_0 = f^(p^m) Q_(p^m - 1).
pub fn verify_t_shift(f: &Polynomial, m: u32, n: u64) -> Result<bool> {
    let pm = check_index(f, m, n)?;
    let lhs = t_action(&q_element(f, m, n)?);
    let rhs = if n == 0 {
        q_element(f, m, pm - 1)?.scale(&f.pow(pm))
    } else {
        q_element(f, m, n - 1)?
    };
    Ok(lhs == rhs)
}

/// Q_n^(m) = Σ_i (-1)^i binom(p-1, i) f^(i p^m) Q^(m+1)_(n + i p^m).
pub fn verify_transition(f: &Polynomial, m: u32, n: u64) -> Result<bool> {
    let pm = check_index(f, m, n)?;
    p_power(f, m + 1)?;
    let p = f.ring().p() as u64;
    let mut rhs = BfElement::zero(f);
    for i in 0..p {
        let c = binomial_mod_p(p - 1, i, p as u32) as i64 * if i % 2 == 0 { 1 } else { -1 };
        let term = q_element(f, m + 1, n + i * pm)?.scale(&f.pow(i * pm).scale(c));
        rhs = rhs.add(&term);
    }
    Ok(q_element(f, m, n)? == rhs)
}

/// ϑ_(p^i) = ∂^[p^i] t^(p^i) on an element supported below p^m, i < m.
///
/// The element is rewritten as P(t)(f - t)^(-p^m); since (f - t)^(p^m) is a
/// p^m-th power the operator only sees P, where it sends t^k to
/// binom(k + p^i, p^i) t^k.
pub fn theta_apply(x: &BfElement, m: u32, i: u32) -> Result<BfElement> {
    check_f(&x.f)?;
    if i >= m {
        return Err(Error::IndexOutOfRange(format!("ϑ_(p^{i}) needs i < m = {m}")));
    }
    let pm = p_power(&x.f, m)?;
    if x.top().is_some_and(|t| t >= pm) {
        return Err(Error::IndexOutOfRange(format!("support reaches past p^{m}")));
    }
    let p = x.f.ring().p();
    let pi = (p as u64).pow(i);
    let mut poly_t = to_t_polynomial(x, pm);
    for (k, a) in poly_t.iter_mut().enumerate() {
        *a = a.scale(binomial_mod_p(k as u64 + pi, pi, p) as i64);
    }
    Ok(from_t_polynomial(&x.f, &poly_t, pm))
}

/// Coefficients (in R, by t-degree) of P(t) = Σ_j c_j (f - t)^(p^m - j - 1).
fn to_t_polynomial(x: &BfElement, pm: u64) -> Vec<Polynomial> {
    let ring = x.f.ring();
    let p = ring.p();
    let mut out = vec![Polynomial::zero(ring); pm as usize];
    for (&j, c) in &x.support {
        let d = pm - j - 1;
        for k in 0..=d {
            let b = binomial_mod_p(d, k, p) as i64;
            if b == 0 {
                continue;
            }
            let sign = if k % 2 == 0 { 1 } else { -1 };
            let term = c.mul(&x.f.pow(d - k)).scale(b * sign);
            out[k as usize] = out[k as usize].add(&term);
        }
    }
    out
}

/// Inverse of [`to_t_polynomial`]: substitute t = f - s and read δ_(p^m - d - 1)
/// off the coefficient of s^d.
fn from_t_polynomial(f: &Polynomial, poly_t: &[Polynomial], pm: u64) -> BfElement {
    let p = f.ring().p();
    let mut out = BfElement::zero(f);
    for (k, a) in poly_t.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let k = k as u64;
        for d in 0..=k {
            let b = binomial_mod_p(k, d, p) as i64;
            if b == 0 {
                continue;
            }
            let sign = if d % 2 == 0 { 1 } else { -1 };
            out.add_term(pm - d - 1, a.mul(&f.pow(k - d)).scale(b * sign));
        }
    }
    out
}

/// ϑ_(p^i) Q_n^(m) = -n_i Q_n^(m).
pub fn verify_theta_eigen(f: &Polynomial, m: u32, n: u64, i: u32) -> Result<bool> {
    check_index(f, m, n)?;
    let p = f.ring().p();
    let q = q_element(f, m, n)?;
    let ni = (n / (p as u64).pow(i)) % p as u64;
    let expected = q.scale(&Polynomial::constant(f.ring(), -(ni as i64)));
    Ok(theta_apply(&q, m, i)? == expected)
}
