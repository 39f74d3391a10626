//! Buchberger's algorithm over F_p with the Gebauer-Möller pair criteria and
//! sugar-degree pair selection. Polynomials here are plain term vectors
//! sorted descending by the active order.

use std::cmp::Ordering;

use super::field::PrimeField;
use super::monomial::{Monomial, MonomialOrder};
use super::poly::{merge_add, Term};

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    sugar: u64,
}

struct Element {
    terms: Vec<Term>,
    sugar: u64,
}

struct Engine {
    field: PrimeField,
    order: MonomialOrder,
    basis: Vec<Element>,
    active: Vec<bool>,
    pairs: Vec<Pair>,
}

fn lead(t: &[Term]) -> &Monomial {
    &t[0].0
}

pub(crate) fn make_monic(terms: &mut [Term], field: PrimeField) {
    if let Some(&(_, c)) = terms.first() {
        if c != 1 {
            let inv = field.inv(c);
            for t in terms.iter_mut() {
                t.1 = field.mul(t.1, inv);
            }
        }
    }
}

/// `p - c * x^m * g` where the leading term cancels.
fn sub_multiple(p: &[Term], g: &[Term], m: &Monomial, c: u32, field: PrimeField, order: MonomialOrder) -> Vec<Term> {
    let shifted: Vec<Term> = g.iter().map(|(n, d)| (n.mul(m), field.mul(*d, c))).collect();
    merge_add(p, &shifted, field.modulus(), order, true)
}

/// Normal form of `p` against monic `divisors`. With `full = false` only the
/// leading term is reduced (enough inside Buchberger).
pub(crate) fn normal_form(
    mut p: Vec<Term>,
    divisors: &[&[Term]],
    field: PrimeField,
    order: MonomialOrder,
    full: bool,
) -> Vec<Term> {
    let mut rem: Vec<Term> = Vec::new();
    while let Some((m, c)) = p.first().cloned() {
        match divisors.iter().find(|g| lead(g).divides(&m)) {
            Some(g) => {
                let shift = m.div(lead(g));
                p = sub_multiple(&p, g, &shift, c, field, order);
            }
            None => {
                if !full {
                    rem.extend(p);
                    return rem;
                }
                // move the irreducible head into the remainder; it stays sorted
                let head_len = p
                    .iter()
                    .take_while(|(n, _)| !divisors.iter().any(|g| lead(g).divides(n)))
                    .count();
                rem.extend(p.drain(..head_len));
            }
        }
    }
    rem
}

impl Engine {
    fn active_divisors(&self) -> Vec<&[Term]> {
        self.basis
            .iter()
            .zip(&self.active)
            .filter(|(_, a)| **a)
            .map(|(e, _)| e.terms.as_slice())
            .collect()
    }

    fn insert(&mut self, terms: Vec<Term>, sugar: u64) {
        let h = self.basis.len();
        let lt_h = lead(&terms).clone();
        self.basis.push(Element { terms, sugar });
        self.active.push(false);

        // Candidate new pairs (g, h) for active g.
        let mut cands: Vec<(usize, Monomial, bool)> = Vec::new();
        for g in 0..h {
            if self.active[g] {
                let lt_g = lead(&self.basis[g].terms);
                cands.push((g, lt_g.lcm(&lt_h), lt_g.coprime(&lt_h)));
            }
        }
        // Criterion M / F: drop (g,h) if another candidate's lcm divides its lcm.
        let mut kept: Vec<(usize, Monomial, bool)> = Vec::new();
        let mut rest: Vec<(usize, Monomial, bool)> = cands;
        while let Some(c) = rest.pop() {
            let undominated = !c.2
                && !rest.iter().chain(kept.iter()).any(|other| other.1.divides(&c.1));
            if c.2 || undominated {
                kept.push(c);
            }
        }
        // Criterion B on old pairs.
        let basis = &self.basis;
        self.pairs.retain(|pr| {
            if !lt_h.divides(&pr.lcm) {
                return true;
            }
            let li = lead(&basis[pr.i].terms).lcm(&lt_h);
            let lj = lead(&basis[pr.j].terms).lcm(&lt_h);
            li == pr.lcm || lj == pr.lcm
        });
        // Product criterion: coprime pairs are never queued.
        for (g, lcm, coprime) in kept {
            if coprime {
                continue;
            }
            let lt_g = lead(&self.basis[g].terms);
            let sugar = (self.basis[g].sugar + lcm.degree() - lt_g.degree())
                .max(self.basis[h].sugar + lcm.degree() - lt_h.degree());
            self.pairs.push(Pair { i: g, j: h, lcm, sugar });
        }
        for g in 0..h {
            if self.active[g] && lt_h.divides(lead(&self.basis[g].terms)) {
                self.active[g] = false;
            }
        }
        self.active[h] = true;
    }

    fn s_polynomial(&self, pr: &Pair) -> Vec<Term> {
        let f = &self.basis[pr.i].terms;
        let g = &self.basis[pr.j].terms;
        let mf = pr.lcm.div(lead(f));
        let mg = pr.lcm.div(lead(g));
        let a: Vec<Term> = f.iter().map(|(n, c)| (n.mul(&mf), *c)).collect();
        let b: Vec<Term> = g.iter().map(|(n, c)| (n.mul(&mg), *c)).collect();
        merge_add(&a, &b, self.field.modulus(), self.order, true)
    }

    fn next_pair(&mut self) -> Option<Pair> {
        if self.pairs.is_empty() {
            return None;
        }
        let order = self.order;
        let best = (0..self.pairs.len())
            .min_by(|&a, &b| {
                let (pa, pb) = (&self.pairs[a], &self.pairs[b]);
                pa.sugar
                    .cmp(&pb.sugar)
                    .then_with(|| order.cmp(&pa.lcm, &pb.lcm))
                    .then_with(|| (pa.i, pa.j).cmp(&(pb.i, pb.j)))
            })
            .unwrap();
        Some(self.pairs.swap_remove(best))
    }
}

/// Reduced Gröbner basis of the ideal generated by `gens` (each sorted
/// descending by `order`). The output is monic, interreduced, and sorted by
/// leading monomial descending, so it is a canonical form of the ideal.
pub(crate) fn reduced_groebner_basis(gens: Vec<Vec<Term>>, field: PrimeField, order: MonomialOrder) -> Vec<Vec<Term>> {
    let nvars = match gens.iter().find(|g| !g.is_empty()) {
        None => return Vec::new(),
        Some(g) => g[0].0.exponents().len(),
    };
    if gens.iter().any(|g| g.len() == 1 && g[0].0.is_one()) {
        return vec![vec![(Monomial::one(nvars), 1)]];
    }
    let mut inputs: Vec<Vec<Term>> = gens.into_iter().filter(|g| !g.is_empty()).collect();
    inputs.sort_by(|a, b| order.cmp(lead(a), lead(b)).then_with(|| a.len().cmp(&b.len())));
    inputs.dedup();

    let mut engine = Engine { field, order, basis: Vec::new(), active: Vec::new(), pairs: Vec::new() };
    for g in inputs {
        let sugar = g.iter().map(|(m, _)| m.degree()).max().unwrap_or(0);
        let divisors = engine.active_divisors();
        let mut h = normal_form(g, &divisors, field, order, false);
        if h.is_empty() {
            continue;
        }
        make_monic(&mut h, field);
        if lead(&h).is_one() {
            return vec![h];
        }
        engine.insert(h, sugar);
    }
    while let Some(pr) = engine.next_pair() {
        let s = engine.s_polynomial(&pr);
        if s.is_empty() {
            continue;
        }
        let divisors = engine.active_divisors();
        let mut h = normal_form(s, &divisors, field, order, false);
        if h.is_empty() {
            continue;
        }
        make_monic(&mut h, field);
        if lead(&h).is_one() {
            return vec![h];
        }
        engine.insert(h, pr.sugar);
    }

    let mut minimal: Vec<Vec<Term>> = engine
        .basis
        .into_iter()
        .zip(engine.active)
        .filter(|(_, a)| *a)
        .map(|(e, _)| e.terms)
        .collect();
    minimal.sort_by(|a, b| order.cmp(lead(b), lead(a)));
    let mut reduced = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<&[Term]> = minimal
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, g)| g.as_slice())
            .collect();
        let (head, tail) = minimal[i].split_at(1);
        let mut r = head.to_vec();
        r.extend(normal_form(tail.to_vec(), &others, field, order, true));
        make_monic(&mut r, field);
        reduced.push(r);
    }
    debug_assert!(reduced.windows(2).all(|w| order.cmp(lead(&w[0]), lead(&w[1])) == Ordering::Greater));
    reduced
}
