use std::collections::BTreeMap;

use super::monomial::Monomial;
use super::poly::{Polynomial, Term};
use crate::error::Result;

/// Writes `f = sum_a (h_a)^q x^a` over residues `a` in `[0, q)^n` and returns
/// the nonzero `h_a`, keyed by `a`.
///
/// Coefficients pass through unchanged since Frobenius fixes F_p.
pub fn root_decompose(f: &Polynomial, q: u64) -> Result<BTreeMap<Monomial, Polynomial>> {
    f.ring().power_exponent(q)?;
    let mut parts: BTreeMap<Monomial, Vec<Term>> = BTreeMap::new();
    // x^(qb + a) keeps the relative grevlex order of the b's, so each bucket stays sorted.
    for (m, c) in f.terms() {
        let (quot, rem) = m.split(q);
        parts.entry(rem).or_default().push((quot, *c));
    }
    Ok(parts.into_iter().map(|(a, terms)| (a, Polynomial::from_sorted(f.ring(), terms))).collect())
}

/// Inverse of [`root_decompose`]: `sum_a (h_a)^q x^a`.
pub fn root_recompose(parts: &BTreeMap<Monomial, Polynomial>, q: u64, like: &Polynomial) -> Polynomial {
    parts.iter().fold(Polynomial::zero(like.ring()), |acc, (a, h)| acc.add(&h.frobenius(q).mul_term(a, 1)))
}
