//! The seeded random corpus: f of degree <= 3 in two variables.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Ideal, Monomial, Polynomial, Ring};

pub const DEFAULT_SEED: u64 = 0x5eed_f00d;

/// `count` nonconstant polynomials of degree <= 3 in the first two variables of `ring`.
pub fn random_cubics(ring: &Ring, count: usize, seed: u64) -> Vec<Polynomial> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ring.p() as u64);
    let p = ring.p() as i64;
    let n = ring.nvars();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let mut terms = Vec::new();
        for d in 0..=3u32 {
            for i in 0..=d {
                if rng.gen_bool(0.5) {
                    let mut e = vec![0u32; n];
                    e[0] = i;
                    if n > 1 {
                        e[1] = d - i;
                    } else {
                        e[0] = d;
                    }
                    terms.push((Monomial::from_exponents(&e), rng.gen_range(1..p)));
                }
            }
        }
        let f = Polynomial::from_terms(ring, terms);
        if !f.is_zero() && !f.is_constant() {
            out.push(f);
        }
    }
    out
}

/// The modules R, (x), (x, y) of a two-variable ring.
pub fn standard_modules(ring: &Ring) -> Vec<(&'static str, Ideal)> {
    let x = Polynomial::var(ring, 0, 1);
    let y = Polynomial::var(ring, 1, 1);
    vec![
        ("R", Ideal::unit(ring)),
        ("(x)", Ideal::principal(&x)),
        ("(x,y)", Ideal::new(ring, vec![x, y]).expect("same ring")),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::RingConfig;

    #[test]
    fn corpus_is_reproducible() {
        let r = RingConfig::new(3, &["x", "y"]).unwrap();
        let a = random_cubics(&r, 20, DEFAULT_SEED);
        assert_eq!(a, random_cubics(&r, 20, DEFAULT_SEED));
        assert!(a.iter().all(|f| f.total_degree().unwrap() <= 3 && !f.is_constant()));
        assert_ne!(a, random_cubics(&r, 20, DEFAULT_SEED + 1));
    }
}
