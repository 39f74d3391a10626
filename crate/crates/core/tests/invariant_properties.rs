use fcart::algebra::{Monomial, Polynomial, Ring, RingConfig};
use fcart::cartier::CartierStructure;
use fcart::invariants::{
    bsr_roots, certified_values, nu_scan, nu_set, nu_tree, psi_minus, psi_plus, test_ideal, Rational,
};
use fcart::padic::{digits, t_map};
use fcart::verify::pure_pairs;
use proptest::prelude::*;

fn build(r: &Ring, terms: &[(u32, u32, i64)]) -> Polynomial {
    Polynomial::from_terms(r, terms.iter().map(|&(a, b, c)| (Monomial::from_exponents(&[a, b]), c)))
}

/// A nonconstant polynomial of degree <= 3 in x, y with p in {2, 3}.
fn input() -> impl Strategy<Value = (u64, Vec<(u32, u32, i64)>, usize)> {
    (
        prop::sample::select(vec![2u64, 3]),
        prop::collection::vec((0u32..=3, 0u32..=3, 1i64..7), 1..=3),
        0usize..3,
    )
}

fn setup(p: u64, terms: &[(u32, u32, i64)], pair: usize) -> Option<(CartierStructure, fcart::algebra::Ideal, Polynomial)> {
    let r = RingConfig::new(p, &["x", "y"]).unwrap();
    let f = build(&r, terms);
    if f.is_zero() || f.is_constant() {
        return None;
    }
    let (_, s, m) = pure_pairs(&r).unwrap().swap_remove(pair);
    Some((s, m, f))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Levels truncate into each other and repeat with shift q^m past [0, q^m).
    #[test]
    fn nu_levels_nest_and_shift((p, terms, pair) in input()) {
        let Some((s, m, f)) = setup(p, &terms, pair) else { return Ok(()) };
        let tree = nu_tree(&s, &m, &f, 2).unwrap();
        let level1 = tree.level(1).unwrap();
        prop_assert!(!level1.members.is_empty());
        prop_assert!(level1.members.iter().all(|&n| n < p));
        let q = s.q();
        let wide = nu_scan(&s, &m, &f, 1, 3 * q).unwrap();
        let expected: Vec<u64> = (0..3).flat_map(|k| level1.members.iter().map(move |&n| n + k * q)).collect();
        prop_assert_eq!(wide, expected);
        for branch in &tree.branches {
            prop_assert_eq!(branch.digits.len(), branch.leaf_level as usize);
        }
    }

    /// Rescaling f by a unit leaves every level unchanged.
    #[test]
    fn nu_ignores_unit_rescaling((p, terms, pair) in input(), c in 1i64..3) {
        let Some((s, m, f)) = setup(p, &terms, pair) else { return Ok(()) };
        let g = f.scale(c + 1);
        prop_assume!(!g.is_zero());
        prop_assert_eq!(nu_set(&s, &m, &f, 2).unwrap().members, nu_set(&s, &m, &g, 2).unwrap().members);
    }

    /// τ is decreasing in t and τ(t + 1) = f τ(t).
    #[test]
    fn test_ideals_decrease((p, terms, pair) in input(), a in 0i128..12, b in 0i128..12) {
        let Some((s, m, f)) = setup(p, &terms, pair) else { return Ok(()) };
        let q2 = (p * p) as i128;
        let (lo, hi) = (a.min(b), a.max(b));
        let tau = |n: i128| test_ideal(&s, &m, &f, &Rational::new(n, q2)).unwrap().ideal;
        let (big, small) = (tau(lo), tau(hi));
        prop_assert!(big.contains(&small).unwrap());
        prop_assert!(tau(lo + q2).equals(&big.scale_by(&f).unwrap()).unwrap());
    }

    /// Certified roots are negative, with p-free denominators, and their
    /// truncations lie in the computed levels; T maps roots to roots.
    #[test]
    fn certified_roots_are_consistent((p, terms, pair) in input()) {
        let Some((s, m, f)) = setup(p, &terms, pair) else { return Ok(()) };
        let max_level = 3;
        let tree = nu_tree(&s, &m, &f, max_level).unwrap();
        let certs = bsr_roots(&s, &m, &f, max_level).unwrap();
        let roots = certified_values(&certs);
        for alpha in &roots {
            prop_assert!(alpha.num() < 0 || alpha.is_zero());
            prop_assert!(alpha.den() % p as i128 != 0);
            for level in 1..=max_level {
                let n = digits(alpha, level, p).unwrap() as u64;
                prop_assert!(tree.level(level).unwrap().contains(n));
            }
            let shifted = t_map(alpha, p).unwrap();
            for level in 1..max_level {
                let n = digits(&shifted, level, p).unwrap() as u64;
                prop_assert!(tree.level(level).unwrap().contains(n), "T({alpha}) leaves level {level}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    /// Every integer is hit by both ψ maps: ψ⁺(n/q^m) = n = ψ⁻((n+1)/q^m).
    #[test]
    fn psi_maps_are_surjective(q in prop::sample::select(vec![2u64, 3, 4, 5, 9]), m in 1u32..=4, n in 0i128..10_000) {
        let qm = q.pow(m);
        let scale = qm as i128;
        prop_assert_eq!(psi_plus(&Rational::new(n, scale), qm).unwrap(), n);
        prop_assert_eq!(psi_minus(&Rational::new(n + 1, scale), qm).unwrap(), n);
    }
}
