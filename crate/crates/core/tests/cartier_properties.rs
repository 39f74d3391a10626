use fcart::algebra::{parse_polynomial, root_decompose, root_recompose, Ideal, Monomial, Polynomial, Ring, RingConfig};
use fcart::cartier::{
    cartier_image, cartier_power_image, cartier_power_image_one_shot, is_f_pure, stabilized_image, zero_extension,
    CartierStructure,
};
use proptest::prelude::*;

fn ring(p: u64) -> Ring {
    RingConfig::new(p, &["x", "y"]).unwrap()
}

fn poly_strategy(max_exp: u32, max_terms: usize) -> impl Strategy<Value = Vec<(u32, u32, i64)>> {
    prop::collection::vec((0..=max_exp, 0..=max_exp, 1i64..100), 1..=max_terms)
}

fn build(r: &Ring, terms: &[(u32, u32, i64)]) -> Polynomial {
    Polynomial::from_terms(r, terms.iter().map(|&(a, b, c)| (Monomial::from_exponents(&[a, b]), c)))
}

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn polynomial_ring_laws(p in prime(), a in poly_strategy(4, 4), b in poly_strategy(4, 4), c in poly_strategy(4, 4)) {
        let r = ring(p);
        let (a, b, c) = (build(&r, &a), build(&r, &b), build(&r, &c));
        prop_assert_eq!(a.add(&b).mul(&c), a.mul(&c).add(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert!(a.sub(&a).is_zero());
        prop_assert_eq!(a.pow(p), a.frobenius(p));
        prop_assert_eq!(a.pow(3), a.mul(&a).mul(&a));
    }

    #[test]
    fn display_parses_back(p in prime(), a in poly_strategy(5, 5)) {
        let r = ring(p);
        let a = build(&r, &a);
        prop_assert_eq!(parse_polynomial(&a.to_string(), &r).unwrap(), a);
    }

    #[test]
    fn root_decomposition_recomposes(p in prime(), e in 1u32..=2, a in poly_strategy(9, 6)) {
        let r = ring(p);
        let a = build(&r, &a);
        let q = p.pow(e);
        let parts = root_decompose(&a, q).unwrap();
        prop_assert!(parts.keys().all(|k| k.exponents().iter().all(|&x| (x as u64) < q)));
        prop_assert!(parts.values().all(|h| !h.is_zero()));
        prop_assert_eq!(root_recompose(&parts, q, &a), a);
    }

    #[test]
    fn ideal_equality_ignores_presentation(p in prime(), g in prop::collection::vec(poly_strategy(3, 3), 1..=3), h in poly_strategy(2, 2)) {
        let r = ring(p);
        let gens: Vec<Polynomial> = g.iter().map(|t| build(&r, t)).collect();
        let i = Ideal::new(&r, gens.clone()).unwrap();
        let mut shuffled = gens.clone();
        shuffled.reverse();
        let combo = gens[0].mul(&build(&r, &h)).add(gens.last().unwrap());
        shuffled.push(combo.clone());
        let j = Ideal::new(&r, shuffled).unwrap();
        prop_assert!(i.equals(&j).unwrap());
        prop_assert!(i.contains_poly(&combo).unwrap());
        for b in i.reduced_gb() {
            prop_assert_eq!(i.normal_form(b).unwrap(), Polynomial::zero(&r));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    /// C(f^q J) = f C(J).
    #[test]
    fn projection_formula(p in prop::sample::select(vec![2u64, 3]), f in poly_strategy(2, 3), j in prop::collection::vec(poly_strategy(5, 3), 1..=2), g in poly_strategy(1, 2)) {
        let r = ring(p);
        let g = build(&r, &g);
        prop_assume!(!g.is_zero());
        let s = CartierStructure::new(1, g).unwrap();
        let f = build(&r, &f);
        let j = Ideal::new(&r, j.iter().map(|t| build(&r, t)).collect()).unwrap();
        let lhs = cartier_image(&s, &j.scale_by(&f.frobenius(p)).unwrap()).unwrap();
        let rhs = cartier_image(&s, &j).unwrap().scale_by(&f).unwrap();
        prop_assert!(lhs.equals(&rhs).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// g J ⊆ C(J)^[q].
    #[test]
    fn image_bracket_power_contains_twisted_ideal(p in prop::sample::select(vec![2u64, 3]), j in prop::collection::vec(poly_strategy(6, 3), 1..=2), g in poly_strategy(2, 2)) {
        let r = ring(p);
        let g = build(&r, &g);
        prop_assume!(!g.is_zero());
        let s = CartierStructure::new(1, g.clone()).unwrap();
        let j = Ideal::new(&r, j.iter().map(|t| build(&r, t)).collect()).unwrap();
        let bracket = cartier_image(&s, &j).unwrap().frobenius_power(p).unwrap();
        prop_assert!(bracket.contains(&j.scale_by(&g).unwrap()).unwrap());
    }

    #[test]
    fn iterated_and_one_shot_powers_agree(p in prop::sample::select(vec![2u64, 3]), m in 1u32..=3, j in prop::collection::vec(poly_strategy(8, 3), 1..=2), g in poly_strategy(2, 2)) {
        let r = ring(p);
        let g = build(&r, &g);
        prop_assume!(!g.is_zero());
        let s = CartierStructure::new(1, g).unwrap();
        let j = Ideal::new(&r, j.iter().map(|t| build(&r, t)).collect()).unwrap();
        let a = cartier_power_image(&s, &j, m).unwrap();
        let b = cartier_power_image_one_shot(&s, &j, m).unwrap();
        prop_assert!(a.equals(&b).unwrap());
    }

    /// With g = 1, C(J) is the smallest K with J ⊆ K^[q]: checked against every
    /// monomial ideal K generated in degree <= 4.
    #[test]
    fn image_is_minimal_root(p in prop::sample::select(vec![2u64, 3]), gens in prop::collection::vec((0u32..=9, 0u32..=9), 1..=3)) {
        let r = ring(p);
        let q = p as u32;
        let std = CartierStructure::standard(&r, 1).unwrap();
        let j = Ideal::new(&r, gens.iter().map(|&(a, b)| Polynomial::monomial(&r, Monomial::from_exponents(&[a, b]), 1)).collect()).unwrap();
        let image = cartier_image(&std, &j).unwrap();
        let image_gens: Vec<(u32, u32)> = image
            .reduced_gb()
            .iter()
            .map(|g| {
                assert!(g.is_monomial());
                let e = g.terms()[0].0.exponents();
                (e[0], e[1])
            })
            .collect();
        let candidates: Vec<(u32, u32)> = (0..=4).flat_map(|d| (0..=d).map(move |a| (a, d - a))).collect();
        let mask = |pred: &dyn Fn(&(u32, u32)) -> bool| -> u32 {
            candidates.iter().enumerate().filter(|(_, k)| pred(k)).fold(0, |m, (i, _)| m | 1 << i)
        };
        let j_masks: Vec<u32> = gens.iter().map(|&(a, b)| mask(&|k| q * k.0 <= a && q * k.1 <= b)).collect();
        let c_masks: Vec<u32> = image_gens.iter().map(|&(a, b)| mask(&|k| k.0 <= a && k.1 <= b)).collect();
        let mut valid = 0;
        for subset in 1u32..(1 << candidates.len()) {
            if j_masks.iter().all(|m| subset & m != 0) {
                valid += 1;
                prop_assert!(c_masks.iter().all(|m| subset & m != 0), "K = {subset:b} is a smaller root");
            }
        }
        if image_gens.iter().all(|&(a, b)| a + b <= 4) {
            prop_assert!(valid > 0);
        }
    }
}

/// Every F-pure (x^b) ⊆ M, b <= bound.
fn pure_monomial_submodules(s: &CartierStructure, a: u32, bound: u32) -> Vec<Ideal> {
    let r = s.ring();
    (a..=bound)
        .map(|b| Ideal::principal(&Polynomial::var(r, 0, b)))
        .filter(|k| is_f_pure(s, k).unwrap())
        .collect()
}

#[test]
fn stabilized_image_is_the_largest_pure_part() {
    for p in [2u64, 3] {
        let r = RingConfig::new(p, &["x"]).unwrap();
        for w in 0..=2 * p as u32 {
            let s = CartierStructure::new(1, Polynomial::var(&r, 0, w)).unwrap();
            for a in 0..=6 {
                let m = Ideal::principal(&Polynomial::var(&r, 0, a));
                let Ok(rec) = stabilized_image(&s, &m) else { continue };
                assert!(is_f_pure(&s, &rec.stable_ideal).unwrap());
                for k in pure_monomial_submodules(&s, a, 12) {
                    assert!(rec.stable_ideal.contains(&k).unwrap(), "p={p} w={w} a={a}");
                }
                for pair in rec.chain.windows(2) {
                    assert!(pair[0].contains(&pair[1]).unwrap());
                }
            }
        }
    }
}

#[test]
fn zero_extension_is_the_smallest_pure_submodule_catching_f_m() {
    for p in [2u64, 3] {
        let r = RingConfig::new(p, &["x"]).unwrap();
        for w in 0..=p as u32 - 1 {
            let s = CartierStructure::new(1, Polynomial::var(&r, 0, w)).unwrap();
            for d in 1..=3 {
                let f = Polynomial::var(&r, 0, d);
                for a in 0..=4 {
                    let m = Ideal::principal(&Polynomial::var(&r, 0, a));
                    if !is_f_pure(&s, &m).unwrap() {
                        continue;
                    }
                    let z = zero_extension(&s, &m, &f).unwrap();
                    let mk = m.scale_by(&f.pow(z.power as u64)).unwrap();
                    assert!(is_f_pure(&s, &z.record.stable_ideal).unwrap());
                    assert!(m.contains(&z.record.stable_ideal).unwrap());
                    assert!(z.record.stable_ideal.contains(&mk).unwrap());
                    for k in pure_monomial_submodules(&s, a, 16) {
                        if k.contains(&m.scale_by(&f).unwrap()).unwrap() {
                            assert!(k.contains(&z.record.stable_ideal).unwrap(), "p={p} w={w} d={d} a={a}");
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn unit_rescaled_generator_changes_nothing() {
    let r = ring(5);
    let j = Ideal::new(&r, vec![parse_polynomial("x^9y^2+3x^4+y^11", &r).unwrap()]).unwrap();
    let g = parse_polynomial("x^4+y", &r).unwrap();
    let a = CartierStructure::new(1, g.clone()).unwrap();
    for c in 2..5 {
        let b = CartierStructure::new(1, g.scale(c)).unwrap();
        for m in 1..=2 {
            assert!(cartier_power_image(&a, &j, m).unwrap().equals(&cartier_power_image(&b, &j, m).unwrap()).unwrap());
        }
    }
}
