use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::OnceLock;

use super::groebner::{normal_form, reduced_groebner_basis};
use super::monomial::MonomialOrder;
use super::poly::{Polynomial, Term};
use super::ring::{same_ring, Ring};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
struct Basis {
    ordered: Vec<Vec<Term>>,
    polys: Vec<Polynomial>,
}

/// A finitely generated ideal of F_p[x_1..x_n].
///
/// The reduced Gröbner basis is computed on first use and cached; equality and
/// hashing go through it, so two `Ideal`s compare equal exactly when they are
/// the same ideal.
#[derive(Clone, Debug)]
pub struct Ideal {
    ring: Ring,
    order: MonomialOrder,
    generators: Vec<Polynomial>,
    basis: OnceLock<Basis>,
}

impl Ideal {
    pub fn new(ring: &Ring, generators: Vec<Polynomial>) -> Result<Self> {
        Self::with_order(ring, generators, MonomialOrder::default())
    }

    pub fn with_order(ring: &Ring, generators: Vec<Polynomial>, order: MonomialOrder) -> Result<Self> {
        if generators.iter().any(|g| !same_ring(g.ring(), ring)) {
            return Err(Error::RingMismatch);
        }
        let generators = generators.into_iter().filter(|g| !g.is_zero()).collect();
        Ok(Ideal { ring: ring.clone(), order, generators, basis: OnceLock::new() })
    }

    pub fn zero(ring: &Ring) -> Self {
        Ideal { ring: ring.clone(), order: MonomialOrder::default(), generators: Vec::new(), basis: OnceLock::new() }
    }

    /// The whole ring R = (1).
    pub fn unit(ring: &Ring) -> Self {
        Self::principal(&Polynomial::one(ring))
    }

    pub fn principal(f: &Polynomial) -> Self {
        Ideal {
            ring: f.ring().clone(),
            order: MonomialOrder::default(),
            generators: if f.is_zero() { Vec::new() } else { vec![f.clone()] },
            basis: OnceLock::new(),
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    /// Same ideal under another monomial order.
    pub fn reorder(&self, order: MonomialOrder) -> Self {
        Ideal { ring: self.ring.clone(), order, generators: self.generators.clone(), basis: OnceLock::new() }
    }

    /// The generators this ideal was built from (zeros dropped).
    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    fn basis(&self) -> &Basis {
        self.basis.get_or_init(|| {
            let gens = self.generators.iter().map(|g| g.ordered_terms(self.order)).collect();
            let ordered = reduced_groebner_basis(gens, self.ring.field(), self.order);
            let polys = ordered.iter().map(|t| Polynomial::from_ordered(&self.ring, t.clone(), self.order)).collect();
            Basis { ordered, polys }
        })
    }

    /// Reduced Gröbner basis; monic, interreduced, sorted by leading monomial.
    pub fn reduced_gb(&self) -> &[Polynomial] {
        &self.basis().polys
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        if self.generators.iter().any(|g| g.is_unit()) {
            return true;
        }
        matches!(self.reduced_gb(), [g] if g.is_unit())
    }

    pub fn normal_form(&self, f: &Polynomial) -> Result<Polynomial> {
        if !same_ring(f.ring(), &self.ring) {
            return Err(Error::RingMismatch);
        }
        let divisors: Vec<&[Term]> = self.basis().ordered.iter().map(|t| t.as_slice()).collect();
        let r = normal_form(f.ordered_terms(self.order), &divisors, self.ring.field(), self.order, true);
        Ok(Polynomial::from_ordered(&self.ring, r, self.order))
    }

    pub fn contains_poly(&self, f: &Polynomial) -> Result<bool> {
        if f.is_zero() {
            return Ok(true);
        }
        if self.is_zero() {
            return Ok(false);
        }
        if self.is_unit() {
            return Ok(true);
        }
        Ok(self.normal_form(f)?.is_zero())
    }

    fn check_compatible(&self, other: &Ideal) -> Result<()> {
        if same_ring(&self.ring, &other.ring) && self.order == other.order {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    /// `other ⊆ self`.
    pub fn contains(&self, other: &Ideal) -> Result<bool> {
        self.check_compatible(other)?;
        if other.is_zero() || self.is_unit() {
            return Ok(true);
        }
        if self.is_zero() {
            return Ok(false);
        }
        for g in &other.generators {
            if !self.contains_poly(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn equals(&self, other: &Ideal) -> Result<bool> {
        self.check_compatible(other)?;
        match (self.is_zero(), other.is_zero()) {
            (true, true) => return Ok(true),
            (true, false) | (false, true) => return Ok(false),
            _ => {}
        }
        Ok(self.reduced_gb() == other.reduced_gb())
    }

    pub fn sum(&self, other: &Ideal) -> Result<Ideal> {
        self.check_compatible(other)?;
        let gens = self.generators.iter().chain(&other.generators).cloned().collect();
        Ideal::with_order(&self.ring, gens, self.order)
    }

    pub fn product(&self, other: &Ideal) -> Result<Ideal> {
        self.check_compatible(other)?;
        let gens = self
            .generators
            .iter()
            .flat_map(|a| other.generators.iter().map(move |b| a.mul(b)))
            .collect();
        Ideal::with_order(&self.ring, gens, self.order)
    }

    /// f·I, generated by f times the reduced basis of I.
    pub fn scale_by(&self, f: &Polynomial) -> Result<Ideal> {
        if !same_ring(f.ring(), &self.ring) {
            return Err(Error::RingMismatch);
        }
        let gens = self.compact_generators().iter().map(|g| g.mul(f)).collect();
        Ideal::with_order(&self.ring, gens, self.order)
    }

    /// Bracket power I^[q] = (g^q : g a generator).
    pub fn frobenius_power(&self, q: u64) -> Result<Ideal> {
        self.ring.power_exponent(q)?;
        let gens = self.generators.iter().map(|g| g.frobenius(q)).collect();
        Ideal::with_order(&self.ring, gens, self.order)
    }

    /// Whichever of the original generators or the reduced basis is shorter.
    pub fn compact_generators(&self) -> &[Polynomial] {
        match self.basis.get() {
            Some(b) if b.polys.len() <= self.generators.len() => &b.polys,
            _ => &self.generators,
        }
    }

    /// A copy whose generators are the reduced basis.
    pub fn canonical(&self) -> Ideal {
        let gb = self.reduced_gb().to_vec();
        Ideal { ring: self.ring.clone(), order: self.order, generators: gb, basis: self.basis.clone() }
    }
}

impl PartialEq for Ideal {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other).unwrap_or(false)
    }
}

impl Eq for Ideal {}

impl Hash for Ideal {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.reduced_gb().hash(state);
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gb = self.reduced_gb();
        if gb.is_empty() {
            return write!(f, "(0)");
        }
        write!(f, "(")?;
        for (i, g) in gb.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, ")")
    }
}
