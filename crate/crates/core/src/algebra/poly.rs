use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};

use super::monomial::{Monomial, MonomialOrder};
use super::ring::{same_ring, Ring};

/// One term: monomial and a nonzero coefficient in `[0, p)`.
pub type Term = (Monomial, u32);

const CANONICAL: MonomialOrder = MonomialOrder::Grevlex;

/// Sparse polynomial over F_p with terms stored grevlex-descending.
#[derive(Clone, Debug)]
pub struct Polynomial {
    ring: Ring,
    terms: Vec<Term>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms && same_ring(&self.ring, &other.ring)
    }
}

impl Eq for Polynomial {}

impl Hash for Polynomial {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

impl Polynomial {
    /// Builds a polynomial from arbitrary (possibly repeated, unreduced) terms.
    pub fn from_terms(ring: &Ring, terms: impl IntoIterator<Item = (Monomial, i64)>) -> Self {
        let k = ring.field();
        let mut acc: HashMap<Monomial, u32> = HashMap::new();
        for (m, c) in terms {
            debug_assert_eq!(m.exponents().len(), ring.nvars());
            let c = k.reduce_i64(c);
            if c == 0 {
                continue;
            }
            let slot = acc.entry(m).or_insert(0);
            *slot = k.add(*slot, c);
        }
        let mut terms: Vec<Term> = acc.into_iter().filter(|(_, c)| *c != 0).collect();
        terms.sort_by(|a, b| CANONICAL.cmp(&b.0, &a.0));
        Polynomial { ring: ring.clone(), terms }
    }

    /// Trusts that `terms` is already canonical.
    pub(crate) fn from_sorted(ring: &Ring, terms: Vec<Term>) -> Self {
        debug_assert!(terms.windows(2).all(|w| CANONICAL.cmp(&w[0].0, &w[1].0) == Ordering::Greater));
        debug_assert!(terms.iter().all(|(_, c)| *c != 0));
        Polynomial { ring: ring.clone(), terms }
    }

    /// Terms sorted descending by an arbitrary order.
    pub(crate) fn from_ordered(ring: &Ring, mut terms: Vec<Term>, order: MonomialOrder) -> Self {
        if order != CANONICAL {
            terms.sort_by(|a, b| CANONICAL.cmp(&b.0, &a.0));
        }
        Polynomial { ring: ring.clone(), terms }
    }

    pub fn zero(ring: &Ring) -> Self {
        Polynomial { ring: ring.clone(), terms: Vec::new() }
    }

    pub fn one(ring: &Ring) -> Self {
        Self::constant(ring, 1)
    }

    pub fn constant(ring: &Ring, c: i64) -> Self {
        Self::monomial(ring, Monomial::one(ring.nvars()), c)
    }

    pub fn monomial(ring: &Ring, m: Monomial, c: i64) -> Self {
        let c = ring.field().reduce_i64(c);
        let terms = if c == 0 { Vec::new() } else { vec![(m, c)] };
        Polynomial { ring: ring.clone(), terms }
    }

    /// The variable x_index raised to `exp`.
    pub fn var(ring: &Ring, index: usize, exp: u32) -> Self {
        Self::monomial(ring, Monomial::variable(ring.nvars(), index, exp), 1)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// Terms sorted descending by `order`.
    pub(crate) fn ordered_terms(&self, order: MonomialOrder) -> Vec<Term> {
        let mut t = self.terms.clone();
        if order != CANONICAL {
            t.sort_by(|a, b| order.cmp(&b.0, &a.0));
        }
        t
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    /// A nonzero constant, i.e. a unit of the ring.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    pub fn leading_term(&self) -> Option<&Term> {
        self.terms.first()
    }

    /// Coefficient of a monomial (0 if absent).
    pub fn coefficient(&self, m: &Monomial) -> u32 {
        self.terms.iter().find(|(n, _)| n == m).map_or(0, |(_, c)| *c)
    }

    pub fn neg(&self) -> Self {
        let k = self.ring.field();
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), k.neg(*c))).collect();
        Polynomial { ring: self.ring.clone(), terms }
    }

    pub fn scale(&self, c: i64) -> Self {
        let k = self.ring.field();
        let c = k.reduce_i64(c);
        if c == 0 {
            return Self::zero(&self.ring);
        }
        let terms = self.terms.iter().map(|(m, d)| (m.clone(), k.mul(*d, c))).collect();
        Polynomial { ring: self.ring.clone(), terms }
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert!(same_ring(&self.ring, &other.ring));
        let terms = merge_add(&self.terms, &other.terms, self.ring.field().modulus(), CANONICAL, false);
        Polynomial { ring: self.ring.clone(), terms }
    }

    pub fn sub(&self, other: &Self) -> Self {
        debug_assert!(same_ring(&self.ring, &other.ring));
        let terms = merge_add(&self.terms, &other.terms, self.ring.field().modulus(), CANONICAL, true);
        Polynomial { ring: self.ring.clone(), terms }
    }

    /// Multiplication by c * x^m; order is preserved so no re-sort is needed.
    pub fn mul_term(&self, m: &Monomial, c: u32) -> Self {
        let k = self.ring.field();
        if c.is_multiple_of(k.modulus()) {
            return Self::zero(&self.ring);
        }
        let terms = self.terms.iter().map(|(n, d)| (n.mul(m), k.mul(*d, c))).collect();
        Polynomial { ring: self.ring.clone(), terms }
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert!(same_ring(&self.ring, &other.ring));
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.ring);
        }
        let (small, large) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        let p = self.ring.field().modulus();
        if small.len() <= 32 {
            let mut acc: Vec<Term> = Vec::new();
            for (m, c) in &small.terms {
                let shifted = large.mul_term(m, *c);
                acc = merge_add(&acc, &shifted.terms, p, CANONICAL, false);
            }
            return Polynomial { ring: self.ring.clone(), terms: acc };
        }
        let k = self.ring.field();
        let mut acc: HashMap<Monomial, u32> = HashMap::with_capacity(small.len() * large.len() / 2);
        for (m, c) in &small.terms {
            for (n, d) in &large.terms {
                let slot = acc.entry(m.mul(n)).or_insert(0);
                *slot = k.add(*slot, k.mul(*c, *d));
            }
        }
        let mut terms: Vec<Term> = acc.into_iter().filter(|(_, c)| *c != 0).collect();
        terms.sort_by(|a, b| CANONICAL.cmp(&b.0, &a.0));
        Polynomial { ring: self.ring.clone(), terms }
    }

    /// f(x) -> f(x^q) = f^q, the q-power Frobenius (coefficients in F_p are fixed).
    pub fn frobenius(&self, q: u64) -> Self {
        let q = u32::try_from(q).expect("Frobenius exponent fits in u32");
        let terms = self.terms.iter().map(|(m, c)| (m.scale(q), *c)).collect();
        Polynomial { ring: self.ring.clone(), terms }
    }

    /// f^k, using f^(sum k_i p^i) = prod_i Frob_{p^i}(f^{k_i}).
    pub fn pow(&self, k: u64) -> Self {
        let p = self.ring.p() as u64;
        let mut result = Self::one(&self.ring);
        let mut rest = k;
        let mut frob = 1u64;
        while rest > 0 {
            let digit = rest % p;
            if digit > 0 {
                let mut block = Self::one(&self.ring);
                for _ in 0..digit {
                    block = block.mul(self);
                }
                result = result.mul(&block.frobenius(frob));
            }
            rest /= p;
            frob *= p;
        }
        result
    }
}

/// Merges two descending term lists, computing a + b (or a - b).
pub(crate) fn merge_add(a: &[Term], b: &[Term], p: u32, order: MonomialOrder, subtract: bool) -> Vec<Term> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let negate = |c: u32| if subtract && c != 0 { p - c } else { c };
    while i < a.len() && j < b.len() {
        match order.cmp(&a[i].0, &b[j].0) {
            Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Less => {
                out.push((b[j].0.clone(), negate(b[j].1)));
                j += 1;
            }
            Ordering::Equal => {
                let s = (a[i].1 + negate(b[j].1)) % p;
                if s != 0 {
                    out.push((a[i].0.clone(), s));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend(b[j..].iter().map(|(m, c)| (m.clone(), negate(*c))));
    out
}

impl fmt::Display for Polynomial {
    /// Canonical form: grevlex-descending terms, coefficients in `[0, p)`,
    /// `*` omitted, exponents written with `^`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            if *c != 1 || m.is_one() {
                write!(f, "{c}")?;
            }
            for (name, &e) in self.ring.var_names().iter().zip(m.exponents()) {
                match e {
                    0 => {}
                    1 => write!(f, "{name}")?,
                    _ => write!(f, "{name}^{e}")?,
                }
            }
        }
        Ok(())
    }
}
