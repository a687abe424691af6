mod common;

use pgs_core::constructions::{make_b2, make_mc, GroupDescription};
use pgs_core::cyclo::CycloRing;
use pgs_core::group::{direct_factor_search, direct_product, Group, GroupElement, QuotientGroup, SubgroupGroup};
use pgs_core::linalg::{echelonize, matrix_power_order, quotient_structure, submodule_member, ModMatrix};
use pgs_core::series::{
    lower_central_series, satisfies_ucs_characterization, satisfies_ucs_characterization_exhaustive, spectrum,
    upper_central_series, CentralSeriesChain, SeriesKind,
};
use pgs_core::verify::{random_recipes, verify_product_spectrum, verify_theorem_part1};
use pgs_core::Limits;
use proptest::prelude::*;
use std::collections::HashSet;

fn lim() -> Limits {
    Limits::default()
}

fn small_groups() -> Vec<GroupDescription> {
    use GroupDescription::*;
    vec![
        Dc { p: 3, c: 2 },
        Dc { p: 2, c: 3 },
        Mc { p: 2, c: 3 },
        Mc { p: 3, c: 3 },
        Mc { p: 5, c: 2 },
        Cyclic { p: 3, e: 2 },
        Homocyclic { p: 3, k: 2, e: 1, s: 0 },
        Homocyclic { p: 3, k: 2, e: 1, s: 1 },
        B2 { p: 3, k: 2 },
        SecondExample { p: 3, k: 2, c: 2 },
        Partb { p: 2, cs: vec![2], c: 3, indecomposable: true },
        Product(vec![Mc { p: 2, c: 2 }, Cyclic { p: 2, e: 2 }]),
        CentralQuotient {
            group: Box::new(Product(vec![Dc { p: 3, c: 2 }, Cyclic { p: 3, e: 2 }])),
            word: "f0.x^3*f1.d^3".into(),
        },
    ]
}

fn small_group() -> impl Strategy<Value = (GroupDescription, Group)> {
    (0..small_groups().len()).prop_map(|i| {
        let d = small_groups().swap_remove(i);
        let g = d.build(&lim()).unwrap();
        (d, g)
    })
}

fn pick(g: &Group, i: usize) -> GroupElement {
    let all = g.enumerate().unwrap();
    all.elements()[i % all.order()].clone()
}

/// Every `Z/p^N`-combination of `vs`, by brute force.
fn span_oracle(modulus: i64, ncols: usize, vs: &[Vec<i64>]) -> HashSet<Vec<u64>> {
    let mut span: HashSet<Vec<u64>> = HashSet::from([vec![0; ncols]]);
    for v in vs {
        let mut next = HashSet::new();
        for w in &span {
            for k in 0..modulus {
                next.insert((0..ncols).map(|j| (w[j] as i64 + k * v[j]).rem_euclid(modulus) as u64).collect());
            }
        }
        span = next;
    }
    span
}

fn module_case() -> impl Strategy<Value = (u64, u32, usize, Vec<Vec<i64>>)> {
    (prop_oneof![Just(2u64), Just(3)], 1u32..=2, 1usize..=3).prop_flat_map(|(p, n, cols)| {
        let vecs = prop::collection::vec(prop::collection::vec(-20i64..20, cols), 0..=3);
        (Just(p), Just(n), Just(cols), vecs)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn echelon_form_is_a_canonical_closure((p, n, cols, vs) in module_case(), seed in any::<u64>()) {
        let b = echelonize(p, n, cols, &vs).unwrap();
        let rows: Vec<Vec<i64>> = b.rows().iter().map(|r| r.iter().map(|&x| x as i64).collect()).collect();
        prop_assert_eq!(&echelonize(p, n, cols, &rows).unwrap(), &b);
        for v in &vs {
            let reduced: Vec<u64> = v.iter().map(|&x| x.rem_euclid(p.pow(n) as i64) as u64).collect();
            prop_assert!(submodule_member(&reduced, &b));
        }
        let mut shuffled = vs.clone();
        if !shuffled.is_empty() {
            let k = (seed as usize) % shuffled.len();
            shuffled.rotate_left(k);
            shuffled.push(shuffled[0].iter().map(|x| 2 * x).collect());
        }
        prop_assert_eq!(&echelonize(p, n, cols, &shuffled).unwrap(), &b);
        let span = span_oracle(p.pow(n) as i64, cols, &vs);
        prop_assert_eq!(b.span_order(), span.len() as u128);
        let inv = quotient_structure(&b);
        prop_assert_eq!(inv.order() * b.span_order(), (p.pow(n) as u128).pow(cols as u32));
    }

    #[test]
    fn unipotent_matrix_order_is_exact(p in prop_oneof![Just(2u64), Just(3)], upper in prop::collection::vec(0i64..9, 3)) {
        let rows = vec![vec![1, upper[0], upper[1]], vec![0, 1, upper[2]], vec![0, 0, 1]];
        let m = ModMatrix::from_rows(p, 2, &rows).unwrap();
        let t = matrix_power_order(&m).unwrap();
        prop_assert_eq!(p.pow(t.ilog(p)), t);
        prop_assert!(m.pow(t).unwrap().is_identity());
        if t > 1 {
            prop_assert!(!m.pow(t / p).unwrap().is_identity());
        }
    }

    #[test]
    fn s_sequence_law(p in prop_oneof![Just(2u64), Just(3), Just(5)], extra in 0u32..4) {
        let c = p as u32 + extra;
        let ring = CycloRing::new(p, c, lim().max_order).unwrap();
        let zeta = ring.eq_powers_witness().unwrap();
        let p_zeta = ring.scale(&zeta, p);
        for k in 1..=(c + 1 - p as u32) {
            prop_assert_eq!(ring.s(k + p as u32 - 1), ring.mul(&p_zeta, &ring.s(k)));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn group_axioms_hold((d, g) in small_group(), i in any::<usize>(), j in any::<usize>(), k in any::<usize>()) {
        let (a, b, c) = (pick(&g, i), pick(&g, j), pick(&g, k));
        let all = g.enumerate().unwrap();
        prop_assert_eq!(g.mul(&g.mul(&a, &b), &c), g.mul(&a, &g.mul(&b, &c)), "{}", d);
        prop_assert!(all.contains(&g.mul(&a, &b)) && all.contains(&g.inv(&a)));
        prop_assert!(g.is_identity(&g.mul(&a, &g.inv(&a))));
        prop_assert_eq!(g.mul(&g.identity(), &a), a.clone());
        prop_assert_eq!(g.prime().pow(all.order().ilog(g.prime() as usize)), all.order() as u64);
    }

    #[test]
    fn element_orders_are_consistent((_d, g) in small_group(), i in any::<usize>()) {
        let x = pick(&g, i);
        let p = g.prime();
        let o = g.element_order(&x);
        prop_assert_eq!(o, common::order_by_multiplication(&g, &x));
        prop_assert_eq!(g.order().unwrap() as u64 % o, 0);
        if o > 1 {
            prop_assert_eq!(g.element_order(&g.pow(&x, p as i64)), o / p);
        }
    }

    #[test]
    fn pth_power_test_matches_oracle((_d, g) in small_group(), i in any::<usize>()) {
        let x = pick(&g, i);
        let powers = common::pth_powers(&g);
        prop_assert_eq!(g.is_pth_power(&x).unwrap(), powers.contains(&x));
    }

    #[test]
    fn quotient_map_is_a_homomorphism((_d, g) in small_group(), i in any::<usize>(), j in any::<usize>()) {
        let z = g.center().unwrap();
        let zgen = z.iter().find(|x| g.element_order(x) == g.prime()).unwrap().clone();
        let q = g.quotient(&g.closure(&[zgen]).unwrap()).unwrap();
        let qg = q.downcast::<QuotientGroup>().unwrap();
        let (a, b) = (pick(&g, i), pick(&g, j));
        prop_assert_eq!(q.mul(&qg.project(&a), &qg.project(&b)), qg.project(&g.mul(&a, &b)));
        prop_assert_eq!(q.order().unwrap() * g.prime() as usize, g.order().unwrap());
    }

    #[test]
    fn series_match_oracles((d, g) in small_group()) {
        let ucs = upper_central_series(&g).unwrap();
        let lcs = lower_central_series(&g).unwrap();
        let as_sets = |c: &CentralSeriesChain| -> Vec<common::Set> {
            c.terms().iter().map(|t| t.iter().cloned().collect()).collect()
        };
        prop_assert_eq!(as_sets(&ucs), common::upper_series(&g), "{}", d);
        let mut lower = common::lower_series(&g);
        lower.reverse();
        prop_assert_eq!(as_sets(&lcs), lower, "{}", d);
        prop_assert_eq!(ucs.length(), lcs.length());
        prop_assert_eq!(spectrum(&g).unwrap().spectrum, common::spectrum(&g));
    }

    #[test]
    fn spectrum_ignores_generator_order((_d, g) in small_group(), rot in any::<usize>()) {
        let mut gens = g.generators();
        let k = rot % gens.len();
        gens.rotate_left(k);
        gens.reverse();
        let h = SubgroupGroup::build(&g, gens, "permuted");
        prop_assert_eq!(h.order().unwrap(), g.order().unwrap());
        let (a, b) = (spectrum(&g).unwrap(), spectrum(&h).unwrap());
        prop_assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn characterization_singles_out_the_upper_series((d, g) in small_group(), i in any::<usize>(), layer in any::<usize>()) {
        let ucs = upper_central_series(&g).unwrap();
        let mut chains = vec![ucs.clone(), lower_central_series(&g).unwrap()];
        // refine below Z_m by one element of Z_m: [x, G] ⊆ Z_{m-1}, so the chain stays central
        let t = ucs.terms();
        let m = 1 + layer % ucs.length().max(1);
        if m < t.len() {
            let x = t[m].elements()[i % t[m].order()].clone();
            let mut gens: Vec<GroupElement> = t[m - 1].elements().to_vec();
            gens.push(x);
            let mid = g.closure(&gens).unwrap();
            if mid != t[m - 1] && mid != t[m] {
                let mut terms = t.to_vec();
                terms.insert(m, mid);
                chains.push(CentralSeriesChain::new(SeriesKind::Custom, terms));
            }
        }
        for chain in &chains {
            let fast = satisfies_ucs_characterization(&g, chain).unwrap();
            let slow = satisfies_ucs_characterization_exhaustive(&g, chain).unwrap();
            let sets: Vec<common::Set> = chain.terms().iter().map(|t| t.iter().cloned().collect()).collect();
            prop_assert_eq!(fast, slow, "{}", d);
            prop_assert_eq!(fast, common::characterization(&g, &sets), "{}", d);
            prop_assert_eq!(fast, chain == &ucs, "{}", d);
        }
    }

    #[test]
    fn product_law_and_decomposition((_d1, g1) in small_group(), (_d2, g2) in small_group()) {
        prop_assume!(g1.prime() == g2.prime());
        let order = g1.order().unwrap() * g2.order().unwrap();
        prop_assume!(order <= 20_000);
        let r = verify_product_spectrum(&g1, &g2).unwrap();
        prop_assert!(r.pass && r.center_law);
        // the join-closure search is exponential in practice; keep it small
        if order <= 1_000 {
            let prod = direct_product(&[g1, g2]).unwrap();
            prop_assert!(direct_factor_search(&prod, lim().decompose_bound).unwrap().is_some());
        }
    }

    #[test]
    fn recipes_round_trip_through_json(i in 0usize..13) {
        let d = small_groups().swap_remove(i);
        let text = serde_json::to_string(&d.to_json()).unwrap();
        prop_assert_eq!(GroupDescription::from_json_str(&text).unwrap(), d);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn theorem_holds_on_random_recipes(seed in any::<u64>()) {
        for d in random_recipes(seed, 3, 5_000) {
            let g = d.build(&lim()).unwrap();
            prop_assert!(verify_theorem_part1(&g).unwrap().pass, "{}", d);
        }
    }
}

#[test]
fn maximal_class_centers_grow_by_p() {
    for (p, c) in [(2, 4), (3, 4), (5, 3)] {
        let g = make_mc(p, c, &lim()).unwrap();
        let orders = upper_central_series(&g).unwrap().orders();
        for (i, &o) in orders.iter().enumerate().take(c as usize) {
            assert_eq!(o as u64, p.pow(i as u32), "M_{c}({p})");
        }
    }
}

#[test]
fn b2_has_exponent_p() {
    for (p, k) in [(3, 2), (5, 2), (5, 3)] {
        let g = make_b2(p, k, &lim()).unwrap();
        let all = g.enumerate().unwrap();
        assert!(all.iter().all(|x| g.is_identity(&g.pow(x, p as i64))), "B2({p},{k})");
    }
}
