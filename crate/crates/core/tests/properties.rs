use std::collections::BTreeMap;

use proptest::prelude::*;

use commfam::exact::{rat, substitute, MatK, Monomial, Poly, RatFunc, Rational, VarId};
use commfam::liealg::{catalog, from_json_str, to_json_string};
use commfam::poisson::poisson_bracket;

fn poly(nvars: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(
        (prop::collection::vec((0..nvars, 1u32..3), 0..3), -5i64..=5),
        0..5,
    )
    .prop_map(|terms| {
        Poly::from_terms(terms.into_iter().map(|(vars, c)| {
            let m = Monomial::from_pairs(vars.into_iter().map(|(v, e)| (VarId::coord(v), e)));
            (m, rat(c))
        }))
    })
}

fn point(nvars: usize) -> impl Strategy<Value = BTreeMap<VarId, Rational>> {
    prop::collection::vec(-20i64..=20, nvars).prop_map(|xs| {
        xs.into_iter()
            .enumerate()
            .map(|(i, x)| (VarId::coord(i), rat(x)))
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in poly(3), b in poly(3), c in poly(3)) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in poly(3), b in poly(3), x in point(3)) {
        let av = a.eval(&x).unwrap();
        let bv = b.eval(&x).unwrap();
        prop_assert_eq!((&a * &b).eval(&x).unwrap(), &av * &bv);
        prop_assert_eq!((&a + &b).eval(&x).unwrap(), av + bv);
    }

    #[test]
    fn derivative_leibniz(a in poly(3), b in poly(3), v in 0usize..3) {
        let d = VarId::coord(v);
        prop_assert_eq!((&a * &b).diff(d), &(&a.diff(d) * &b) + &(&a * &b.diff(d)));
    }

    #[test]
    fn ratfunc_field_ops(a in poly(2), b in poly(2), c in poly(2)) {
        prop_assume!(!b.is_zero() && !c.is_zero());
        let f = RatFunc::new(a.clone(), b.clone()).unwrap();
        let g = RatFunc::new(c.clone(), b.clone()).unwrap();
        let sum = &f + &g;
        prop_assert_eq!(sum, RatFunc::new(&a + &c, b.clone()).unwrap());
        if !a.is_zero() {
            let one = &f / &f;
            prop_assert!(one.is_one());
        }
    }

    #[test]
    fn substitution_commutes_with_evaluation(p in poly(3), q in poly(2), r in poly(2), x in point(2)) {
        let map: BTreeMap<VarId, RatFunc> = [
            (VarId::coord(0), RatFunc::from_poly(q.clone())),
            (VarId::coord(1), RatFunc::from_poly(r.clone())),
            (VarId::coord(2), RatFunc::from_poly(Poly::coord(0))),
        ]
        .into_iter()
        .collect();
        let (num, den) = substitute(&p, &map);
        let mut inner = BTreeMap::new();
        inner.insert(VarId::coord(0), q.eval(&x).unwrap());
        inner.insert(VarId::coord(1), r.eval(&x).unwrap());
        inner.insert(VarId::coord(2), x[&VarId::coord(0)].clone());
        let direct = p.eval(&inner).unwrap();
        let dv = den.eval(&x).unwrap();
        prop_assert_eq!(num.eval(&x).unwrap(), direct * dv);
    }

    #[test]
    fn symbolic_rank_bounds_evaluated_rank(entries in prop::collection::vec(poly(2), 9), x in point(2)) {
        let mut m = MatK::zeros(3, 3);
        for (k, p) in entries.iter().enumerate() {
            m.set(k / 3, k % 3, RatFunc::from_poly(p.clone()));
        }
        let rows: Vec<Vec<Rational>> = (0..3)
            .map(|i| (0..3).map(|j| entries[i * 3 + j].eval(&x).unwrap()).collect())
            .collect();
        prop_assert!(commfam::exact::rank_q(&rows) <= m.rank());
    }

    #[test]
    fn poisson_bracket_axioms(f in poly(4), g in poly(4), h in poly(4)) {
        let alg = catalog("oscillator", 4).unwrap();
        let br = |a: &Poly, b: &Poly| poisson_bracket(&alg, a, b).numer().clone();
        prop_assert!((&br(&f, &g) + &br(&g, &f)).is_zero());
        let leibniz = &br(&f, &(&g * &h)) - &(&(&br(&f, &g) * &h) + &(&g * &br(&f, &h)));
        prop_assert!(leibniz.is_zero());
        let jacobi = &(&br(&f, &br(&g, &h)) + &br(&g, &br(&h, &f))) + &br(&h, &br(&f, &g));
        prop_assert!(jacobi.is_zero());
    }
}

#[test]
fn catalog_json_round_trip() {
    for name in commfam::liealg::catalog_names() {
        for size in 2..=4 {
            if let Ok(g) = catalog(name, size) {
                let text = to_json_string(&g, None);
                let (back, inv) = from_json_str(&text).unwrap();
                assert_eq!(back, g, "{name}{size}");
                assert!(inv.is_none());
            }
        }
    }
}
