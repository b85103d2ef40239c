use proptest::prelude::*;

use vext::lazy::{derivative, st_numeric, Derivative, UnivariateExpr, DEFAULT_HORIZON};
use vext::logic::{extend_relation, rel_combine, Connective, Relation};
use vext::oracle::{enumerate_fragment, small_universe};
use vext::seqcore::{canonicalize, end_equal, BranchTerm, Limits, RawSequence, UniverseElement, VirtualValue};
use vext::vreal::{standard_part, vr_compare, CmpOp, VirtualReal};
use vext::{LazySeq, Poly, RatFunc, Rational};

fn q(a: i64) -> Rational {
    Rational::from_integer(a.into())
}

fn small_term() -> impl Strategy<Value = BranchTerm> {
    (-2i64..=2).prop_map(|k| BranchTerm::real(q(k)))
}

fn raw_sequence() -> impl Strategy<Value = RawSequence> {
    (prop::collection::vec(small_term(), 0..4), prop::collection::vec(small_term(), 1..7))
        .prop_map(|(prefix, tail)| RawSequence::new(prefix, tail))
}

fn ratfunc(max_degree: usize) -> impl Strategy<Value = RatFunc> {
    (prop::collection::vec(-4i64..=4, 1..=max_degree + 1), prop::option::of(1i64..=4)).prop_map(|(cs, shift)| {
        let num = Poly::new(cs.into_iter().map(q).collect());
        let den = match shift {
            Some(s) => Poly::new(vec![q(s), q(1)]),
            None => Poly::one(),
        };
        RatFunc::new(num, den).expect("nonzero denominator")
    })
}

fn virtual_real() -> impl Strategy<Value = VirtualReal> {
    prop::collection::vec(ratfunc(3), 1..=3).prop_map(|bs| VirtualReal::cyclic(bs).expect("within caps"))
}

/// Bounded values: every branch has numerator degree at most the
/// denominator's.
fn finite_real() -> impl Strategy<Value = VirtualReal> {
    (-5i64..=5, -5i64..=5, 1i64..=5).prop_map(|(a, b, s)| {
        // a + b / (n + s)
        let f = RatFunc::constant(q(a)).add(&RatFunc::new(Poly::constant(q(b)), Poly::new(vec![q(s), q(1)])).unwrap());
        VirtualReal::from_ratfunc(f)
    })
}

fn relation(arity: usize) -> impl Strategy<Value = Relation> {
    let universe = small_universe(2);
    let tuples = vext::logic::power(&universe, arity);
    prop::collection::vec(any::<bool>(), tuples.len()).prop_map(move |mask| {
        let chosen = tuples.iter().zip(&mask).filter(|(_, m)| **m).map(|(t, _)| t.clone());
        Relation::extensional(universe.clone(), arity, chosen).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn canonical_form_is_idempotent_and_faithful(raw in raw_sequence()) {
        let limits = Limits::default();
        let v = canonicalize(&raw, &limits).unwrap();
        let again = canonicalize(&RawSequence::cyclic(v.branches().to_vec()), &limits).unwrap();
        prop_assert_eq!(&again, &v);
        let start = raw.prefix.len() as u64 + 1;
        for i in start..start + 24 {
            prop_assert_eq!(raw.term_at(i).value_at(i), v.value_at(i));
        }
    }

    #[test]
    fn end_equality_is_structural(a in raw_sequence(), b in raw_sequence()) {
        let limits = Limits::default();
        let (x, y) = (canonicalize(&a, &limits).unwrap(), canonicalize(&b, &limits).unwrap());
        // agreement on a full common period past both prefixes decides it
        let start = a.prefix.len().max(b.prefix.len()) as u64 + 1;
        let window = (a.tail.len() * b.tail.len()) as u64;
        let agree = (start..start + window).all(|i| a.term_at(i).value_at(i) == b.term_at(i).value_at(i));
        prop_assert_eq!(end_equal(&x, &y), agree);
        prop_assert_eq!(end_equal(&x, &y), x == y);
    }

    #[test]
    fn ring_laws(a in virtual_real(), b in virtual_real(), c in virtual_real()) {
        prop_assert_eq!(a.add(&b).unwrap().add(&c).unwrap(), a.add(&b.add(&c).unwrap()).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(
            a.mul(&b.add(&c).unwrap()).unwrap(),
            a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
        );
        prop_assert_eq!(a.sub(&a).unwrap(), VirtualReal::zero());
    }

    #[test]
    fn order_is_compatible_with_arithmetic(a in virtual_real(), b in virtual_real(), c in virtual_real()) {
        if vr_compare(&a, CmpOp::Le, &b).holds() {
            prop_assert!(vr_compare(&a.add(&c).unwrap(), CmpOp::Le, &b.add(&c).unwrap()).holds());
            let c2 = c.mul(&c).unwrap();
            prop_assert!(vr_compare(&a.mul(&c2).unwrap(), CmpOp::Le, &b.mul(&c2).unwrap()).holds());
        }
        // Lt and Ge never both hold
        prop_assert!(!(vr_compare(&a, CmpOp::Lt, &b).holds() && vr_compare(&a, CmpOp::Ge, &b).holds()));
    }

    #[test]
    fn standard_part_is_a_homomorphism(a in finite_real(), b in finite_real()) {
        let (sa, sb) = (standard_part(&a).unwrap(), standard_part(&b).unwrap());
        prop_assert_eq!(standard_part(&a.add(&b).unwrap()).unwrap(), &sa + &sb);
        prop_assert_eq!(standard_part(&a.mul(&b).unwrap()).unwrap(), &sa * &sb);
    }

    #[test]
    fn numeric_standard_part_agrees_with_exact(a in finite_real()) {
        let exact: f64 = num_traits::ToPrimitive::to_f64(&standard_part(&a).unwrap()).unwrap();
        let lazy: LazySeq = a.into();
        let st = st_numeric(&lazy, 1e-9, DEFAULT_HORIZON);
        prop_assert!((st.value - exact).abs() < 1e-6, "{} vs {}", st.value, exact);
    }

    #[test]
    fn exact_derivatives_follow_the_power_rule(cs in prop::collection::vec(-5i64..=5, 1..5), x0 in -3i64..=3) {
        let mut f = UnivariateExpr::constant(0);
        for (k, c) in cs.iter().enumerate() {
            let term = UnivariateExpr::Mul(
                Box::new(UnivariateExpr::constant(*c)),
                Box::new(UnivariateExpr::Pow(Box::new(UnivariateExpr::Var), k as u32)),
            );
            f = UnivariateExpr::Add(Box::new(f), Box::new(term));
        }
        let expected: i64 = cs.iter().enumerate().skip(1).map(|(k, c)| c * k as i64 * x0.pow(k as u32 - 1)).sum();
        prop_assert_eq!(derivative(&f, &q(x0), 0.0, DEFAULT_HORIZON).unwrap(), Derivative::Exact(q(expected)));
    }

    #[test]
    fn conjunction_transfers_and_disjunction_only_widens(p in relation(2), r in relation(2)) {
        let model = enumerate_fragment(&small_universe(2), 2).unwrap();
        let and = extend_relation(&rel_combine(Connective::And, &p, Some(&r)).unwrap());
        let or = extend_relation(&rel_combine(Connective::Or, &p, Some(&r)).unwrap());
        let (ep, er) = (extend_relation(&p), extend_relation(&r));
        for args in model.tuples(2) {
            let (a, b) = (ep.holds(&args).unwrap(), er.holds(&args).unwrap());
            prop_assert_eq!(and.holds(&args).unwrap(), a && b);
            prop_assert!(!(a || b) || or.holds(&args).unwrap());
        }
    }

    #[test]
    fn fragment_is_complete(word in prop::collection::vec(0i64..3, 1..=2)) {
        let model = enumerate_fragment(&small_universe(3), 2).unwrap();
        let v = VirtualValue::cyclic(word.iter().map(|&k| BranchTerm::Const(UniverseElement::small(k))).collect()).unwrap();
        prop_assert_eq!(model.elements.iter().filter(|e| end_equal(e, &v)).count(), 1);
    }
}
