use proptest::prelude::*;

use frobcat::corpus::standard_corpus;
use frobcat::decision::{decide_mod, decide_set, RingSpec};
use frobcat::invariant::{brute_force_find_is, find_is, InvariantSystem};
use frobcat::linalg::MatrixFp;
use frobcat::rng::XorShift64Star;
use frobcat::set_oracle::{colimit_set, limit_set, random_set_functor};
use frobcat::FinCategory;

fn corpus_cat() -> impl Strategy<Value = FinCategory> {
    let corpus = standard_corpus();
    (0..corpus.len()).prop_map(move |k| corpus[k].category.clone())
}

fn preorder() -> impl Strategy<Value = FinCategory> {
    (1usize..=4).prop_flat_map(|n| {
        prop::collection::vec((0..n, 0..n), 0..6)
            .prop_map(move |rel| FinCategory::from_preorder(n, &rel).unwrap())
    })
}

/// Monoid of maps `{0,1,2} → {0,1,2}` generated by `gens`, when it has at
/// most 12 elements.
fn transformation_monoid(gens: &[[usize; 3]]) -> Option<FinCategory> {
    let mut elems: Vec<[usize; 3]> = vec![[0, 1, 2]];
    let mut k = 0;
    while k < elems.len() {
        let a = elems[k];
        for g in gens {
            let ga = [g[a[0]], g[a[1]], g[a[2]]];
            if !elems.contains(&ga) {
                elems.push(ga);
                if elems.len() > 12 {
                    return None;
                }
            }
        }
        k += 1;
    }
    let table: Vec<Vec<usize>> = elems
        .iter()
        .map(|a| {
            elems
                .iter()
                .map(|b| elems.iter().position(|c| *c == [a[b[0]], a[b[1]], a[b[2]]]).unwrap())
                .collect()
        })
        .collect();
    let names: Vec<String> = elems.iter().map(|a| format!("{}{}{}", a[0], a[1], a[2])).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    Some(FinCategory::from_monoid_table(&refs, &table).unwrap())
}

fn transformation() -> impl Strategy<Value = [usize; 3]> {
    [0usize..3, 0usize..3, 0usize..3]
}

fn matrix() -> impl Strategy<Value = MatrixFp> {
    (prop::sample::select(vec![2u64, 3, 5, 7]), 0usize..5, 0usize..5).prop_flat_map(|(p, r, c)| {
        prop::collection::vec(0..p, r * c).prop_map(move |d| MatrixFp::new(p, r, c, d).unwrap())
    })
}

proptest! {
    #[test]
    fn mutations_are_caught_locally(cat in corpus_cat(), g in any::<prop::sample::Index>(),
                                    f in any::<prop::sample::Index>(), h in any::<prop::sample::Index>(),
                                    delete in any::<bool>()) {
        prop_assume!(!cat.is_empty());
        let m = cat.n_morphisms();
        let (g, f) = (g.index(m), f.index(m));
        let new = if delete { None } else { Some(h.index(m)) };
        prop_assume!(cat.try_compose(g, f) != new);
        let mutated = cat.with_composite(g, f, new);
        let report = mutated.validate();
        let composable = cat.cod(f) == cat.dom(g);
        let bad_endpoints = new.is_some_and(|h| !composable || cat.dom(h) != cat.dom(f) || cat.cod(h) != cat.cod(g));
        if new.is_none() || bad_endpoints {
            prop_assert!(!report.is_valid());
        }
        for v in &report.violations {
            prop_assert!(v.touched_pairs(&mutated).contains(&(g, f)), "{v}");
        }
    }

    #[test]
    fn strong_connectivity_agrees_with_homs(cat in preorder()) {
        let parts = cat.connected_components();
        let sccs = cat.strongly_connected_components();
        prop_assert_eq!(sccs.len() == 1, cat.all_homs_nonempty());
        match cat.is_strongly_connected() {
            Ok(sc) => {
                prop_assert_eq!(parts.count, 1);
                prop_assert_eq!(sc.is_strong(), cat.all_homs_nonempty());
            }
            Err(_) => prop_assert!(parts.count > 1),
        }
    }

    #[test]
    fn disjoint_union_adds_components(a in corpus_cat(), b in preorder()) {
        let u = FinCategory::disjoint_union(&a, &b);
        prop_assert!(u.validate().is_valid());
        prop_assert_eq!(
            u.connected_components().count,
            a.connected_components().count + b.connected_components().count
        );
    }

    #[test]
    fn closure_search_matches_brute_force(gens in prop::collection::vec(transformation(), 1..3)) {
        let Some(cat) = transformation_monoid(&gens) else { return Ok(()) };
        let found = find_is(&cat).unwrap().found;
        let all = brute_force_find_is(&cat, 12).unwrap();
        prop_assert_eq!(found.is_empty(), all.is_empty());
        for s in &found {
            prop_assert!(all.contains(s));
        }
        prop_assert_eq!(
            found.iter().map(InvariantSystem::cardinality).min(),
            all.iter().map(InvariantSystem::cardinality).min()
        );
        let set_yes = all.iter().any(InvariantSystem::is_singleton);
        prop_assert_eq!(decide_set(&cat).unwrap().answer, set_yes);
        for p in [2u64, 3] {
            let ring = RingSpec::prime_field(p).unwrap();
            let expected = all.iter().any(|s| ring.invertible(s.cardinality() as u64));
            prop_assert_eq!(decide_mod(&cat, ring).unwrap().answer, expected);
        }
    }

    #[test]
    fn preorders_are_set_frobenius_iff_indiscrete(cat in preorder()) {
        // A preorder has singleton homs, so its only candidate system is all
        // of them; it qualifies exactly when every hom is inhabited.
        let expected = cat.is_connected() && cat.all_homs_nonempty();
        prop_assert_eq!(decide_set(&cat).unwrap().answer, expected);
    }

    #[test]
    fn limits_are_compatible_and_colimits_finest(cat in corpus_cat(), seed in any::<u64>()) {
        let mut rng = XorShift64Star::new(seed);
        let f = random_set_functor(&cat, &mut rng, 3).unwrap();
        for t in limit_set(&cat, &f) {
            for m in 0..cat.n_morphisms() {
                prop_assert_eq!(f.apply(m, t[cat.dom(m)]), t[cat.cod(m)]);
            }
        }
        let colim = colimit_set(&cat, &f);
        for m in 0..cat.n_morphisms() {
            for x in 0..f.size(cat.dom(m)) {
                prop_assert_eq!(colim.class(cat.dom(m), x), colim.class(cat.cod(m), f.apply(m, x)));
            }
        }
    }

    #[test]
    fn rank_nullity(a in matrix()) {
        let null = a.nullspace();
        prop_assert_eq!(a.rank() + null.cols(), a.cols());
        prop_assert!(a.mul(&null).unwrap().is_zero());
        prop_assert_eq!(a.rank(), a.transpose().rank());
    }

    #[test]
    fn rref_is_idempotent(a in matrix()) {
        let (r, pivots) = a.rref();
        let (rr, pivots2) = r.rref();
        prop_assert_eq!(rr, r);
        prop_assert_eq!(pivots, pivots2);
    }

    #[test]
    fn solve_inverts_products(a in matrix(), seed in any::<u64>()) {
        let mut rng = XorShift64Star::new(seed);
        let x: Vec<u64> = (0..a.cols()).map(|_| rng.below(a.p())).collect();
        let b = a.mul_vec(&x).unwrap();
        let y = a.solve(&b).unwrap().expect("b lies in the column space");
        prop_assert_eq!(a.mul_vec(&y).unwrap(), b);
        prop_assert_eq!(a.image().cols(), a.rank());
    }

    #[test]
    fn inverse_is_two_sided(a in matrix()) {
        if let Some(inv) = a.inverse() {
            let id = MatrixFp::identity(a.p(), a.rows()).unwrap();
            prop_assert_eq!(a.mul(&inv).unwrap(), id.clone());
            prop_assert_eq!(inv.mul(&a).unwrap(), id);
        } else {
            prop_assert!(!a.is_invertible());
        }
    }
}
