//! Randomized exactness suites for the bracket and the intermediate-series
//! action.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{central_term, Convention, LieElement, Virasoro};
use crate::foundation::{GroupElement, GroupSpec, Scalar, Var};
use crate::intermediate::IntermediateModule;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub cases: usize,
    pub failures: usize,
    /// First failing case, rendered.
    pub first_failure: Option<String>,
}

impl SuiteResult {
    fn new(name: &str) -> Self {
        SuiteResult {
            name: name.into(),
            cases: 0,
            failures: 0,
            first_failure: None,
        }
    }

    fn record(&mut self, ok: bool, case: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(case());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

fn random_element(rng: &mut ChaCha8Rng, n: usize, r: i64) -> GroupElement {
    GroupElement::new((0..n).map(|_| rng.gen_range(-r..=r)).collect())
}

/// Jacobi, antisymmetry and central-term suites on `triples` random basis
/// triples (every eighth with `x + y + z = 0`), plus the module axiom of
/// `V(α, β, G)` with symbolic `α, β`, all under `convention`.
pub fn algebra_check(group: &GroupSpec, convention: Convention, seed: u64, triples: usize) -> Vec<SuiteResult> {
    let n = group.rank();
    let vir = Virasoro::with_convention(group.clone(), convention);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let br = |a: &LieElement, b: &LieElement| vir.bracket(a, b).expect("ranks agree");
    let mut jacobi = SuiteResult::new("jacobi");
    let mut anti = SuiteResult::new("antisymmetry");
    let mut central = SuiteResult::new("central");
    let mut axiom = SuiteResult::new("module-axiom");
    let module = IntermediateModule::new(group.clone(), Scalar::var(Var::Alpha), Scalar::var(Var::Beta));
    for t in 0..triples {
        let x = random_element(&mut rng, n, 6);
        let y = random_element(&mut rng, n, 6);
        let z = if t % 8 == 0 {
            -&(&x + &y)
        } else {
            random_element(&mut rng, n, 6)
        };
        let (dx, dy, dz) = (LieElement::d(x.clone()), LieElement::d(y.clone()), LieElement::d(z.clone()));
        let j = br(&dx, &br(&dy, &dz))
            .add(&br(&dy, &br(&dz, &dx)))
            .add(&br(&dz, &br(&dx, &dy)));
        jacobi.record(j.is_zero(), || format!("x={x}, y={y}, z={z}: {j}"));
        anti.record(br(&dx, &dy).add(&br(&dy, &dx)).is_zero(), || format!("x={x}, y={y}"));
        let c = br(&dx, &LieElement::d(-&x));
        let ex = group.embed_unchecked(&x);
        let lin = match convention {
            Convention::YMinusX => &Scalar::from_i64(-2) * &ex,
            Convention::XMinusY => &Scalar::from_i64(2) * &ex,
        };
        central.record(
            c.central() == &central_term(&ex) && c.coefficient(&GroupElement::zero(n)) == lin,
            || format!("[d{x}, d{}] = {c}", -&x),
        );
        let (a, b, w) = (
            random_element(&mut rng, n, 2),
            random_element(&mut rng, n, 2),
            random_element(&mut rng, n, 2),
        );
        let d = module.module_axiom_defect(convention, &a, &b, &w);
        axiom.record(d.is_zero(), || format!("x={a}, y={b}, v_{w}: defect {d}"));
    }
    vec![jacobi, anti, central, axiom]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_pass_and_flipped_sign_fails() {
        let g = GroupSpec::symbolic(2).unwrap();
        assert!(algebra_check(&g, Convention::YMinusX, 7, 100).iter().all(SuiteResult::passed));
        let flipped = algebra_check(&g, Convention::XMinusY, 7, 100);
        let failed: Vec<&str> = flipped.iter().filter(|s| !s.passed()).map(|s| s.name.as_str()).collect();
        assert_eq!(failed, vec!["module-axiom"]);
    }
}
