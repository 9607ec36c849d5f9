//! Frozen values and brute-force cross-checks computed independently of the
//! library's own algorithms.

use hvir::algebra::{LieElement, Virasoro};
use hvir::classify::claim4_independence_verma;
use hvir::induced::{support_shape, InducedModule, InducedVector, SplitGroup, SupportKind};
use hvir::linalg;
use hvir::verma::VermaModule;
use hvir::{GroupElement, GroupSpec, OrderSpec, Scalar, Var};

fn ge(c: &[i64]) -> GroupElement {
    GroupElement::new(c.to_vec())
}

fn s(src: &str) -> Scalar {
    Scalar::parse(src).unwrap()
}

#[test]
fn bracket_structure_constants() {
    // Worked by hand from [d_x, d_y] = (y − x) d_{x+y} + δ_{x+y,0} (x³ − x)/12 · c
    // with x ↦ x·b1.
    let vir = Virasoro::new(GroupSpec::symbolic(1).unwrap());
    let br = |x: i64, y: i64| vir.bracket(&LieElement::d(ge(&[x])), &LieElement::d(ge(&[y]))).unwrap();

    let e = br(2, -2);
    assert_eq!(e.coefficient(&ge(&[0])), s("-4*b1"));
    assert_eq!(e.central(), &s("2/3*b1^3 - 1/6*b1"));

    let e = br(3, 1);
    assert_eq!(e.coefficient(&ge(&[4])), s("-2*b1"));
    assert!(e.central().is_zero());

    let e = br(1, -1);
    assert_eq!(e.coefficient(&ge(&[0])), s("-2*b1"));
    assert_eq!(e.central(), &s("1/12*b1^3 - 1/12*b1"));
}

fn top_coefficient(v: &InducedVector) -> Scalar {
    v.iter()
        .find(|(l, _)| l.is_empty())
        .map(|(_, c)| c.clone())
        .unwrap_or_default()
}

/// A level-one vector killed by every raising letter of a small box must be
/// killed by every raising letter and every two-letter raising word of a much
/// larger box (closure of J under the action), while a vector outside the
/// kernel is detected.
#[test]
fn level_one_kernel_is_closed_under_raising() {
    let split = SplitGroup::new(GroupSpec::symbolic(2).unwrap(), ge(&[1, 0]), vec![ge(&[0, 1])]).unwrap();
    let m = InducedModule::build(s("1/3"), s("1/2"), split);
    let radius = 2;
    let labels = m.labels_at(1, &[0], radius);
    assert_eq!(labels.len(), 5);
    let vectors: Vec<InducedVector> = labels
        .iter()
        .map(|l| [(l.clone(), Scalar::one())].into_iter().collect())
        .collect();
    let mut engine = m.engine();

    // Raising letters d_{b+h} written out by hand, |h| ≤ radius + 1.
    let small: Vec<Vec<GroupElement>> = (-(radius + 1)..=radius + 1).map(|h| vec![ge(&[1, h])]).collect();
    let matrix = m.functional_matrix(&mut engine, &small, &vectors);
    let kernel = linalg::nullspace(&matrix, vectors.len());
    assert_eq!(kernel.len(), 5 - 3);

    let combine = |coeffs: &[Scalar]| {
        let mut u = InducedVector::new();
        for (l, c) in labels.iter().zip(coeffs) {
            hvir::pbw::add_into(&mut u, l, c);
        }
        u
    };
    for k in &kernel {
        let u = combine(k);
        for h in -8..=8 {
            let r = engine.apply_vec(&ge(&[1, h]), &u);
            assert!(top_coefficient(&r).is_zero(), "d_(1,{h}) escapes");
        }
        // Two-letter words of b-degree one: lower then raise twice.
        for h1 in -3..=3 {
            let down = engine.apply_vec(&ge(&[-1, h1]), &u);
            for h2 in -4..=4 {
                let w = engine.apply_vec(&ge(&[2, h2]), &down);
                assert!(top_coefficient(&w).is_zero(), "d_(2,{h2}) d_(-1,{h1}) escapes");
            }
        }
    }

    let single: InducedVector = [(labels[0].clone(), Scalar::one())].into_iter().collect();
    assert!((-3..=3).any(|h| !top_coefficient(&engine.apply_vec(&ge(&[1, h]), &single)).is_zero()));
}

#[test]
fn small_label_window_leaves_support_holes() {
    let split = SplitGroup::canonical(GroupSpec::symbolic(2).unwrap(), &[1, 0]).unwrap();
    let m = InducedModule::build(s("1/3"), s("1/2"), split);
    // Label radius 0 cannot reach tops at a = ±1 on level one.
    let r = support_shape(&m, 1, 1, 0);
    assert_eq!(r.kind, SupportKind::Inconclusive);
    assert!(r.missing.contains(&(1, vec![1])));
    assert_eq!(support_shape(&m, 1, 1, 2).kind, SupportKind::FullCoset);
}

#[test]
fn claim4_degenerate_and_generic() {
    let g = GroupSpec::symbolic(2).unwrap();
    let zero = VermaModule::new(g.clone(), OrderSpec::lex(2), Scalar::zero(), Scalar::zero()).unwrap();
    let r = claim4_independence_verma(&zero, &ge(&[1, 1]), 2).unwrap();
    assert_eq!(r.h1, Scalar::zero());
    assert_eq!(r.entries.iter().map(|e| e.rank).collect::<Vec<_>>(), [0, 0]);
    assert!(r.entries.iter().all(|e| e.independent == Some(false)));

    let generic = VermaModule::new(g, OrderSpec::lex(2), Scalar::one(), Scalar::var(Var::H)).unwrap();
    let r = claim4_independence_verma(&generic, &ge(&[1, 1]), 3).unwrap();
    assert!(r.entries.iter().all(|e| e.independent == Some(true)));
    assert_eq!(r.entries.iter().map(|e| e.rank).collect::<Vec<_>>(), [1, 2, 3]);
}
