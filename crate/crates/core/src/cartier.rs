//! Twisted q-Cartier operators on ideals of R = F_p[x_1..x_n].
//!
//! The standard operator is dual to the top monomial x^(q-1,...,q-1): writing
//! h = sum_a (h_a)^q x^a, it sends h to h_(q-1,...,q-1). The image of an ideal J
//! is therefore generated by every root coefficient h_a of every generator.
//! A twist g gives C_g(h) = C_std(g h).

use std::collections::HashMap;

use rayon::prelude::*;

use crate::algebra::{root_decompose, Ideal, Monomial, MonomialOrder, Polynomial, Ring};
use crate::config::Limits;
use crate::error::{Error, Result};

/// The pair (e, g): the q-Cartier operator C(h) = C_std^e(g h) with q = p^e.
#[derive(Clone, Debug)]
pub struct CartierStructure {
    e: u32,
    twist: Polynomial,
    limits: Limits,
}

impl CartierStructure {
    pub fn new(e: u32, twist: Polynomial) -> Result<Self> {
        if e == 0 {
            return Err(Error::InvalidArgument("Cartier level e must be at least 1".into()));
        }
        if twist.is_zero() {
            return Err(Error::ZeroDivisorInput("the twist of a Cartier structure must be nonzero".into()));
        }
        let limits = Limits::default();
        limits.checked_power(twist.ring().p() as u64, e)?;
        Ok(CartierStructure { e, twist, limits })
    }

    /// The untwisted operator of level e.
    pub fn standard(ring: &Ring, e: u32) -> Result<Self> {
        Self::new(e, Polynomial::one(ring))
    }

    pub fn with_limits(mut self, limits: Limits) -> Self {
        self.limits = limits;
        self
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn q(&self) -> u64 {
        (self.twist.ring().p() as u64).pow(self.e)
    }

    pub fn twist(&self) -> &Polynomial {
        &self.twist
    }

    pub fn ring(&self) -> &Ring {
        self.twist.ring()
    }

    pub fn limits(&self) -> Limits {
        self.limits
    }

    /// q^m, failing if it exceeds the exponent cap.
    pub fn q_power(&self, m: u32) -> Result<u64> {
        self.limits.checked_power(self.q(), m)
    }

    /// g^((q^m - 1)/(q - 1)), the twist of the one-shot m-fold operator.
    pub fn accumulated_twist(&self, m: u32) -> Result<Polynomial> {
        let qm = self.q_power(m)?;
        Ok(self.twist.pow((qm - 1) / (self.q() - 1)))
    }

    fn check_ring(&self, j: &Ideal) -> Result<()> {
        if **j.ring() == **self.ring() {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }
}

/// Ideal generated by all q-th root coefficients of `twist * g` for g in `gens`.
pub(crate) fn extract_generators(
    ring: &Ring,
    order: MonomialOrder,
    gens: &[Polynomial],
    twist: &Polynomial,
    q: u64,
) -> Result<Ideal> {
    let trivial = twist.is_constant() && twist.coefficient(&Monomial::one(ring.nvars())) == 1;
    let parts: Vec<Vec<Polynomial>> = gens
        .par_iter()
        .map(|g| {
            let h = if trivial { g.clone() } else { g.mul(twist) };
            Ok(root_decompose(&h, q)?.into_values().collect())
        })
        .collect::<Result<_>>()?;
    let image = Ideal::with_order(ring, parts.into_iter().flatten().collect(), order)?;
    Ok(image.canonical())
}

fn extract(j: &Ideal, twist: &Polynomial, q: u64) -> Result<Ideal> {
    extract_generators(j.ring(), j.order(), j.compact_generators(), twist, q)
}

/// C_S(J).
pub fn cartier_image(s: &CartierStructure, j: &Ideal) -> Result<Ideal> {
    s.check_ring(j)?;
    let q = s.q_power(1)?;
    extract(j, &s.twist, q)
}

/// C_S^m(J) by m successive applications of [`cartier_image`].
pub fn cartier_power_image(s: &CartierStructure, j: &Ideal, m: u32) -> Result<Ideal> {
    s.check_ring(j)?;
    if m == 0 {
        return Err(Error::InvalidArgument("Cartier power must be at least 1".into()));
    }
    s.q_power(m)?;
    let mut current = j.clone();
    for _ in 0..m {
        current = cartier_image(s, &current)?;
    }
    Ok(current)
}

/// C_S^m(J) in one extraction: modulus q^m with twist g^((q^m - 1)/(q - 1)).
pub fn cartier_power_image_one_shot(s: &CartierStructure, j: &Ideal, m: u32) -> Result<Ideal> {
    s.check_ring(j)?;
    if m == 0 {
        return Err(Error::InvalidArgument("Cartier power must be at least 1".into()));
    }
    let qm = s.q_power(m)?;
    extract(j, &s.accumulated_twist(m)?, qm)
}

/// A monotone chain of ideals and the value it stabilizes at.
#[derive(Clone, Debug)]
pub struct StabilizationRecord {
    pub stable_ideal: Ideal,
    /// First m >= 1 with C^m = C^(m+1) (for the chain in question).
    pub stable_level: u32,
    pub chain: Vec<Ideal>,
}

/// The largest F-pure submodule: the stable value of M ⊇ C(M) ⊇ C²(M) ⊇ ...
pub fn stabilized_image(s: &CartierStructure, m: &Ideal) -> Result<StabilizationRecord> {
    s.check_ring(m)?;
    let first = cartier_image(s, m)?;
    if !m.contains(&first)? {
        return Err(Error::NotCartierSubmodule);
    }
    let mut chain = vec![m.clone(), first];
    for level in 1..=s.limits.iter_cap {
        let next = cartier_image(s, chain.last().unwrap())?;
        let prev = chain.last().unwrap();
        if next.equals(prev)? {
            chain.push(next.clone());
            debug_assert!(cartier_image(s, &next)?.equals(&next)?);
            return Ok(StabilizationRecord { stable_ideal: next, stable_level: level as u32, chain });
        }
        chain.push(next);
    }
    Err(Error::IterationCapExceeded { cap: s.limits.iter_cap, context: "stabilizing C^m(M)".into() })
}

/// C_S(M) = M.
pub fn is_f_pure(s: &CartierStructure, m: &Ideal) -> Result<bool> {
    s.check_ring(m)?;
    cartier_image(s, m)?.equals(m)
}

/// The zero extension M_{f!} and the power k with f^k M ⊆ M_{f!}.
#[derive(Clone, Debug)]
pub struct ZeroExtension {
    pub record: StabilizationRecord,
    pub power: u32,
}

/// M_{f!}: the stable value of the ascending chain C(fM) ⊆ C²(fM) ⊆ ...
pub fn zero_extension(s: &CartierStructure, m: &Ideal, f: &Polynomial) -> Result<ZeroExtension> {
    s.check_ring(m)?;
    if f.is_zero() {
        return Err(Error::ZeroDivisorInput("zero extension along f = 0".into()));
    }
    if !is_f_pure(s, m)? {
        return Err(Error::NotFPure);
    }
    let fm = m.scale_by(f)?;
    let mut chain = vec![cartier_image(s, &fm)?];
    for level in 1..=s.limits.iter_cap {
        let prev = chain.last().unwrap();
        let next = cartier_image(s, prev)?;
        if !next.contains(prev)? {
            return Err(Error::InternalMismatch("C^m(fM) failed to ascend for an F-pure M".into()));
        }
        if next.equals(prev)? {
            chain.push(next.clone());
            if !is_f_pure(s, &next)? {
                return Err(Error::InternalMismatch("M_{f!} is not F-pure".into()));
            }
            let power = if next.equals(m)? {
                0
            } else if next.contains(&fm)? {
                1
            } else {
                return Err(Error::InternalMismatch("f M is not contained in M_{f!}".into()));
            };
            let record = StabilizationRecord { stable_ideal: next, stable_level: level as u32, chain };
            return Ok(ZeroExtension { record, power });
        }
        chain.push(next);
    }
    Err(Error::IterationCapExceeded { cap: s.limits.iter_cap, context: "ascending chain C^m(fM)".into() })
}

/// First (i, j) with C^i(N) = C^(i+j)(N), j >= 1, within `max_iter` images.
pub fn preperiodicity_detect(s: &CartierStructure, n: &Ideal, max_iter: usize) -> Result<Option<(usize, usize)>> {
    s.check_ring(n)?;
    // The cached basis is a pure function of the generators, so hashing is stable.
    #[allow(clippy::mutable_key_type)]
    let mut seen: HashMap<Ideal, usize> = HashMap::new();
    let mut current = n.canonical();
    for k in 0..=max_iter {
        if let Some(&i) = seen.get(&current) {
            return Ok(Some((i, k - i)));
        }
        if k == max_iter {
            break;
        }
        let next = cartier_image(s, &current)?;
        seen.insert(current, k);
        current = next;
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_polynomial, RingConfig};

    fn ring(p: u64, vars: &[&str]) -> Ring {
        RingConfig::new(p, vars).unwrap()
    }

    fn ideal(r: &Ring, gens: &[&str]) -> Ideal {
        Ideal::new(r, gens.iter().map(|s| parse_polynomial(s, r).unwrap()).collect()).unwrap()
    }

    fn boundary(r: &Ring) -> CartierStructure {
        let p = r.p();
        CartierStructure::new(1, Polynomial::var(r, 0, p - 1)).unwrap()
    }

    #[test]
    fn image_examples() {
        let r = ring(2, &["x", "y"]);
        let std = CartierStructure::standard(&r, 1).unwrap();
        assert_eq!(cartier_image(&std, &ideal(&r, &["x^3+y^3"])).unwrap(), ideal(&r, &["x", "y"]));
        for p in [2u64, 3, 5, 7] {
            let r = ring(p, &["x"]);
            let std = CartierStructure::standard(&r, 1).unwrap();
            let xp = Ideal::principal(&Polynomial::var(&r, 0, p as u32));
            assert_eq!(cartier_image(&std, &xp).unwrap(), ideal(&r, &["x"]));
            assert!(cartier_image(&std, &Ideal::unit(&r)).unwrap().is_unit());
        }
    }

    #[test]
    fn power_image_examples() {
        let r = ring(2, &["x"]);
        let std = CartierStructure::standard(&r, 1).unwrap();
        let x5 = ideal(&r, &["x^5"]);
        assert_eq!(cartier_power_image(&std, &x5, 2).unwrap(), ideal(&r, &["x"]));
        assert!(cartier_power_image(&std, &Ideal::zero(&r), 3).unwrap().is_zero());
        for p in [2u64, 3, 5] {
            let r = ring(p, &["x"]);
            let s = boundary(&r);
            for n in 0..(3 * p as u32) {
                let got = cartier_power_image(&s, &Ideal::principal(&Polynomial::var(&r, 0, n)), 1).unwrap();
                let want = Ideal::principal(&Polynomial::var(&r, 0, n.div_ceil(p as u32)));
                assert_eq!(got, want, "p={p} n={n}");
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        let r = ring(2, &["x"]);
        let std = CartierStructure::standard(&r, 1).unwrap().with_limits(Limits { exp_cap: 8, iter_cap: 64 });
        assert!(cartier_power_image(&std, &Ideal::unit(&r), 3).is_ok());
        assert!(matches!(
            cartier_power_image(&std, &Ideal::unit(&r), 4),
            Err(Error::ExponentCapExceeded { requested: 16, cap: 8 })
        ));
    }

    #[test]
    fn stabilization_examples() {
        for p in [2u64, 3] {
            let r = ring(p, &["x"]);
            let rec = stabilized_image(&boundary(&r), &ideal(&r, &["x"])).unwrap();
            assert_eq!(rec.stable_ideal, ideal(&r, &["x"]));
            assert_eq!(rec.stable_level, 1);
            let std = CartierStructure::standard(&r, 1).unwrap();
            let rec = stabilized_image(&std, &Ideal::unit(&r)).unwrap();
            assert!(rec.stable_ideal.is_unit());
            assert_eq!(rec.stable_level, 1);
        }
        let r = ring(2, &["x"]);
        let std = CartierStructure::standard(&r, 1).unwrap();
        assert!(matches!(stabilized_image(&std, &ideal(&r, &["x^2"])), Err(Error::NotCartierSubmodule)));
    }

    #[test]
    fn stabilization_descends_to_pure_part() {
        // Under the twist x^5 y^2 at p = 3 the chain is (1) ⊋ (x) ⊋ (x^2) = (x^2).
        let r = ring(3, &["x", "y"]);
        let s = CartierStructure::new(1, parse_polynomial("x^5y^2", &r).unwrap()).unwrap();
        let rec = stabilized_image(&s, &Ideal::unit(&r)).unwrap();
        assert!(is_f_pure(&s, &rec.stable_ideal).unwrap());
        assert_eq!(rec.stable_ideal, ideal(&r, &["x^2"]));
        assert_eq!(rec.stable_level, 2);
        assert_eq!(rec.chain[1], ideal(&r, &["x"]));
        for w in rec.chain.windows(2) {
            assert!(w[0].contains(&w[1]).unwrap());
        }
    }

    #[test]
    fn f_purity_examples() {
        for p in [2u64, 3, 5] {
            let r = ring(p, &["x"]);
            let std = CartierStructure::standard(&r, 1).unwrap();
            assert!(is_f_pure(&std, &Ideal::unit(&r)).unwrap());
            assert!(is_f_pure(&boundary(&r), &ideal(&r, &["x"])).unwrap());
            assert!(!is_f_pure(&std, &ideal(&r, &["x"])).unwrap());
        }
    }

    #[test]
    fn zero_extension_examples() {
        for p in [2u64, 3] {
            let r = ring(p, &["x"]);
            let x = Polynomial::var(&r, 0, 1);
            let std = CartierStructure::standard(&r, 1).unwrap();
            let z = zero_extension(&std, &Ideal::unit(&r), &x).unwrap();
            assert!(z.record.stable_ideal.is_unit());
            assert_eq!(z.power, 0);
            let z = zero_extension(&boundary(&r), &Ideal::unit(&r), &x).unwrap();
            assert_eq!(z.record.stable_ideal, ideal(&r, &["x"]));
            assert_eq!(z.power, 1);
            let z = zero_extension(&std, &Ideal::unit(&r), &Polynomial::one(&r)).unwrap();
            assert!(z.record.stable_ideal.is_unit());
            assert!(matches!(
                zero_extension(&std, &Ideal::unit(&r), &Polynomial::zero(&r)),
                Err(Error::ZeroDivisorInput(_))
            ));
            assert!(matches!(zero_extension(&std, &ideal(&r, &["x"]), &x), Err(Error::NotFPure)));
        }
    }

    #[test]
    fn preperiodicity_examples() {
        let r = ring(2, &["x"]);
        let std = CartierStructure::standard(&r, 1).unwrap();
        assert_eq!(preperiodicity_detect(&std, &ideal(&r, &["x^2"]), 10).unwrap(), Some((2, 1)));
        assert_eq!(preperiodicity_detect(&std, &Ideal::unit(&r), 10).unwrap(), Some((0, 1)));
        assert_eq!(preperiodicity_detect(&std, &Ideal::zero(&r), 10).unwrap(), Some((0, 1)));
        assert_eq!(preperiodicity_detect(&std, &ideal(&r, &["x^64"]), 3).unwrap(), None);
    }

    #[test]
    fn unit_rescaling_of_the_generator_is_invisible() {
        let r = ring(5, &["x", "y"]);
        let std = CartierStructure::standard(&r, 1).unwrap();
        let scaled = CartierStructure::new(1, Polynomial::constant(&r, 3)).unwrap();
        let j = ideal(&r, &["x^7+2x^3y^4+y^6", "xy^9"]);
        assert_eq!(cartier_image(&std, &j).unwrap(), cartier_image(&scaled, &j).unwrap());
    }

    #[test]
    fn iterated_and_one_shot_agree() {
        let r = ring(3, &["x", "y"]);
        let s = CartierStructure::new(1, parse_polynomial("x^2+xy", &r).unwrap()).unwrap();
        let j = ideal(&r, &["x^11y^3+y^13", "x^4y^9+2x^2"]);
        for m in 1..=3 {
            assert_eq!(cartier_power_image(&s, &j, m).unwrap(), cartier_power_image_one_shot(&s, &j, m).unwrap());
        }
    }
}
