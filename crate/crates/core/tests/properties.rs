use std::cmp::Ordering;

use proptest::prelude::*;

use hvir::algebra::{Convention, LieElement, Virasoro};
use hvir::intermediate::IntermediateModule;
use hvir::{GroupElement, GroupSpec, OrderSpec, QuadSurd, Scalar, TieBreak, Var};

fn element(n: usize, r: i64) -> impl Strategy<Value = GroupElement> {
    prop::collection::vec(-r..=r, n).prop_map(GroupElement::new)
}

/// Small rational functions in `α`, `β`, `b1`.
fn scalar() -> impl Strategy<Value = Scalar> {
    let atom = prop_oneof![
        (-5i64..=5, 1i64..=4).prop_map(|(n, d)| Scalar::rational(n, d)),
        Just(Scalar::var(Var::Alpha)),
        Just(Scalar::var(Var::Beta)),
        Just(Scalar::var(Var::Gen(0))),
    ];
    (atom.clone(), atom.clone(), atom, 0u8..3).prop_map(|(a, b, c, op)| match op {
        0 => &(&a * &b) + &c,
        1 => &a - &(&b * &c),
        _ => (&a + &b).checked_div(&(&c + &Scalar::from_i64(7))).unwrap_or(a),
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        if let Some(inv) = a.inv() {
            prop_assert!((&a * &inv).is_one());
        } else {
            prop_assert!(a.is_zero());
        }
    }

    #[test]
    fn lex_order_total_and_invariant(x in element(3, 5), y in element(3, 5), z in element(3, 5)) {
        let order = OrderSpec::lex(3);
        check_order(&order, &x, &y, &z)?;
    }

    #[test]
    fn functional_order_total_and_invariant(x in element(2, 6), y in element(2, 6), z in element(2, 6)) {
        let order = OrderSpec::functional(vec![QuadSurd::from_int(1, 2), QuadSurd::sqrt(2)], 2, TieBreak::Reject).unwrap();
        check_order(&order, &x, &y, &z)?;
    }

    #[test]
    fn jacobi_identity(x in element(2, 4), y in element(2, 4), z in element(2, 4)) {
        let vir = Virasoro::new(GroupSpec::symbolic(2).unwrap());
        let br = |a: &LieElement, b: &LieElement| vir.bracket(a, b).unwrap();
        let (dx, dy, dz) = (LieElement::d(x), LieElement::d(y), LieElement::d(z));
        let j = br(&dx, &br(&dy, &dz)).add(&br(&dy, &br(&dz, &dx))).add(&br(&dz, &br(&dx, &dy)));
        prop_assert!(j.is_zero());
    }

    #[test]
    fn jacobi_on_zero_sum_triples(x in element(2, 4), y in element(2, 4)) {
        let z = -&(&x + &y);
        let vir = Virasoro::new(GroupSpec::symbolic(2).unwrap());
        let br = |a: &LieElement, b: &LieElement| vir.bracket(a, b).unwrap();
        let (dx, dy, dz) = (LieElement::d(x), LieElement::d(y), LieElement::d(z));
        let j = br(&dx, &br(&dy, &dz)).add(&br(&dy, &br(&dz, &dx))).add(&br(&dz, &br(&dx, &dy)));
        prop_assert!(j.is_zero());
    }

    #[test]
    fn intermediate_module_axiom(x in element(2, 3), y in element(2, 3), w in element(2, 3)) {
        let m = IntermediateModule::new(GroupSpec::symbolic(2).unwrap(), Scalar::var(Var::Alpha), Scalar::var(Var::Beta));
        prop_assert!(m.module_axiom_defect(Convention::YMinusX, &x, &y, &w).is_zero());
    }
}

fn check_order(order: &OrderSpec, x: &GroupElement, y: &GroupElement, z: &GroupElement) -> Result<(), TestCaseError> {
    let xy = order.compare(x, y).unwrap();
    prop_assert_eq!(xy, order.compare(y, x).unwrap().reverse());
    prop_assert_eq!(xy == Ordering::Equal, x == y);
    prop_assert_eq!(order.compare(&(x + z), &(y + z)).unwrap(), xy);
    let yz = order.compare(y, z).unwrap();
    if xy == yz && xy != Ordering::Equal {
        prop_assert_eq!(order.compare(x, z).unwrap(), xy);
    }
    Ok(())
}
