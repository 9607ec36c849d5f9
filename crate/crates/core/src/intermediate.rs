//! Intermediate-series modules `V(α, β, G)`: basis `{v_y : y ∈ G}`,
//! `c v_y = 0`, `d_x v_y = (α + y + xβ) v_{x+y}`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::{Convention, Virasoro};
use crate::error::Error;
use crate::foundation::{GroupElement, GroupSpec, Scalar};

#[derive(Clone, Debug)]
pub struct IntermediateModule {
    group: GroupSpec,
    alpha: Scalar,
    beta: Scalar,
}

/// Why `V(α, β, G)` is reducible. `index` is the `y` with `α + y = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Witness {
    /// `C·v_index` is a trivial submodule (`β = 0`).
    TrivialLine { index: GroupElement },
    /// `span{v_y : y ≠ index}` is a submodule (`β = 1`).
    MissingLine { index: GroupElement },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Reducibility {
    Reducible(Witness),
    Irreducible,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SubquotientKind {
    Whole,
    QuotientByTrivialLine,
    SubmoduleMissingV0,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum SupportShape {
    /// `α + G`.
    Coset,
    /// `G ∖ {0}`.
    Punctured,
}

/// The unique nontrivial irreducible subquotient `V′(α, β, G)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubquotientDescriptor {
    pub kind: SubquotientKind,
    pub support: SupportShape,
    /// `α = embed(translation)` when `α ∈ G`; the module is then isomorphic
    /// to the one with `α = 0` via `v_y ↦ v_{y + translation}`.
    pub translation: Option<GroupElement>,
    /// Index `y` of the removed basis vector (weight 0) in the punctured case.
    pub puncture: Option<GroupElement>,
    /// Whether the trivial one-dimensional subquotient also occurs.
    pub has_trivial_factor: bool,
}

impl IntermediateModule {
    pub fn new(group: GroupSpec, alpha: Scalar, beta: Scalar) -> Self {
        IntermediateModule { group, alpha, beta }
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn alpha(&self) -> &Scalar {
        &self.alpha
    }

    pub fn beta(&self) -> &Scalar {
        &self.beta
    }

    /// `d_x v_y = coeff · v_{x+y}`.
    pub fn act(&self, x: &GroupElement, y: &GroupElement) -> Result<(GroupElement, Scalar), Error> {
        self.group.check(x)?;
        self.group.check(y)?;
        Ok((x + y, self.coefficient(x, y)))
    }

    pub fn coefficient(&self, x: &GroupElement, y: &GroupElement) -> Scalar {
        let ex = self.group.embed_unchecked(x);
        let ey = self.group.embed_unchecked(y);
        &(&self.alpha + &ey) + &(&ex * &self.beta)
    }

    /// d₀-eigenvalue of `v_y`.
    pub fn weight(&self, y: &GroupElement) -> Scalar {
        &self.alpha + &self.group.embed_unchecked(y)
    }

    /// Coefficient of `v_{x+y+z}` in `d_x d_y v_z − d_y d_x v_z − [d_x, d_y] v_z`;
    /// identically zero exactly when the action respects `convention`.
    pub fn module_axiom_defect(
        &self,
        convention: Convention,
        x: &GroupElement,
        y: &GroupElement,
        z: &GroupElement,
    ) -> Scalar {
        let vir = Virasoro::with_convention(self.group.clone(), convention);
        let xy = &(&self.coefficient(y, z) * &self.coefficient(x, &(y + z)))
            - &(&self.coefficient(x, z) * &self.coefficient(y, &(x + z)));
        // c acts by 0, so only the d_{x+y} part of the bracket contributes
        let (lin, _) = vir.structure(x, y);
        &xy - &(&lin * &self.coefficient(&(x + y), z))
    }

    fn beta_value(&self) -> Option<i64> {
        if self.beta.is_zero() {
            Some(0)
        } else if self.beta.is_one() {
            Some(1)
        } else {
            None
        }
    }

    pub fn is_reducible(&self) -> Reducibility {
        let Some(g) = self.group.locate(&self.alpha) else {
            return Reducibility::Irreducible;
        };
        let index = -&g;
        match self.beta_value() {
            Some(0) => Reducibility::Reducible(Witness::TrivialLine { index }),
            Some(1) => Reducibility::Reducible(Witness::MissingLine { index }),
            _ => Reducibility::Irreducible,
        }
    }

    pub fn irreducible_subquotient(&self) -> SubquotientDescriptor {
        let translation = self.group.locate(&self.alpha);
        match self.is_reducible() {
            Reducibility::Irreducible => SubquotientDescriptor {
                kind: SubquotientKind::Whole,
                support: SupportShape::Coset,
                translation,
                puncture: None,
                has_trivial_factor: false,
            },
            Reducibility::Reducible(Witness::TrivialLine { index }) => SubquotientDescriptor {
                kind: SubquotientKind::QuotientByTrivialLine,
                support: SupportShape::Punctured,
                translation,
                puncture: Some(index),
                has_trivial_factor: true,
            },
            Reducibility::Reducible(Witness::MissingLine { index }) => SubquotientDescriptor {
                kind: SubquotientKind::SubmoduleMissingV0,
                support: SupportShape::Punctured,
                translation,
                puncture: Some(index),
                has_trivial_factor: true,
            },
        }
    }

    /// The subquotient `V′` as a module in its own right.
    pub fn prime(&self) -> PrimeModule {
        PrimeModule {
            module: self.clone(),
            puncture: self.irreducible_subquotient().puncture,
        }
    }
}

/// `V′(α, β, G)`: the intermediate module with the weight-0 vector removed
/// when it is reducible.
#[derive(Clone, Debug)]
pub struct PrimeModule {
    module: IntermediateModule,
    puncture: Option<GroupElement>,
}

impl PrimeModule {
    pub fn module(&self) -> &IntermediateModule {
        &self.module
    }

    pub fn puncture(&self) -> Option<&GroupElement> {
        self.puncture.as_ref()
    }

    pub fn in_support(&self, y: &GroupElement) -> bool {
        self.puncture.as_ref() != Some(y)
    }

    /// `d_x v_y` in `V′`; `None` if `v_y` is not a basis vector of `V′`.
    /// A zero coefficient is returned when the target is the puncture.
    pub fn act(&self, x: &GroupElement, y: &GroupElement) -> Option<(GroupElement, Scalar)> {
        if !self.in_support(y) {
            return None;
        }
        let t = x + y;
        if !self.in_support(&t) {
            return Some((t, Scalar::zero()));
        }
        Some((t, self.module.coefficient(x, y)))
    }
}

/// Result of probing weight-space dimensions on a finite window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub max_dim: usize,
    /// Rays along which the probed dimensions strictly increase.
    pub growing_rays: Vec<GroupElement>,
}

impl BoundReport {
    pub fn is_bounded_by(&self, n: usize) -> bool {
        self.max_dim <= n && self.growing_rays.is_empty()
    }
}

/// Maximum dimension over the window, and the rays `r` for which the
/// dimensions at `base + k·r`, `k = 0, 1, 2, …` (as far as the window
/// reaches, at least three points) are strictly increasing.
pub fn uniform_bound_probe(
    dims: &BTreeMap<GroupElement, usize>,
    rays: &[GroupElement],
) -> Result<BoundReport, Error> {
    if dims.is_empty() {
        return Err(Error::EmptyWindow);
    }
    let max_dim = *dims.values().max().unwrap();
    let mut growing_rays = Vec::new();
    for r in rays {
        for base in dims.keys() {
            let seq: Vec<usize> = (0..)
                .map(|k| dims.get(&(base + &r.scale(k))))
                .take_while(Option::is_some)
                .map(Option::unwrap)
                .copied()
                .collect();
            if seq.len() >= 3 && seq.windows(2).all(|w| w[0] < w[1]) {
                growing_rays.push(r.clone());
                break;
            }
        }
    }
    Ok(BoundReport {
        max_dim,
        growing_rays,
    })
}

/// Dimension table of `V′` over a window of indices (all 1, except 0 at the
/// puncture).
pub fn prime_dims(module: &PrimeModule, window: &[GroupElement]) -> BTreeMap<GroupElement, usize> {
    window
        .iter()
        .map(|y| (y.clone(), usize::from(module.in_support(y))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foundation::Var;

    fn ge(v: &[i64]) -> GroupElement {
        GroupElement::new(v.to_vec())
    }

    fn z() -> GroupSpec {
        GroupSpec::with_values(vec![Scalar::one()]).unwrap()
    }

    #[test]
    fn action_examples() {
        let m = IntermediateModule::new(z(), Scalar::zero(), Scalar::zero());
        assert!(m.act(&ge(&[1]), &ge(&[0])).unwrap().1.is_zero());
        let m = IntermediateModule::new(z(), Scalar::zero(), Scalar::one());
        assert!(m.act(&ge(&[1]), &ge(&[-1])).unwrap().1.is_zero());
        let g = GroupSpec::symbolic(2).unwrap();
        let m = IntermediateModule::new(g, Scalar::var(Var::Alpha), Scalar::var(Var::Beta));
        let (t, c) = m.act(&ge(&[2, 0]), &ge(&[0, 3])).unwrap();
        assert_eq!(t, ge(&[2, 3]));
        assert_eq!(c, Scalar::parse("alpha + 3*b2 + 2*b1*beta").unwrap());
    }

    #[test]
    fn reducibility_examples() {
        let m = IntermediateModule::new(z(), Scalar::zero(), Scalar::zero());
        assert_eq!(
            m.is_reducible(),
            Reducibility::Reducible(Witness::TrivialLine { index: ge(&[0]) })
        );
        assert_eq!(m.irreducible_subquotient().kind, SubquotientKind::QuotientByTrivialLine);
        let m = IntermediateModule::new(z(), Scalar::zero(), Scalar::one());
        assert_eq!(
            m.is_reducible(),
            Reducibility::Reducible(Witness::MissingLine { index: ge(&[0]) })
        );
        let m = IntermediateModule::new(z(), Scalar::var(Var::Alpha), Scalar::from_i64(5));
        assert_eq!(m.is_reducible(), Reducibility::Irreducible);
        let d = IntermediateModule::new(z(), Scalar::var(Var::Alpha), Scalar::zero())
            .irreducible_subquotient();
        assert_eq!((d.kind, d.support), (SubquotientKind::Whole, SupportShape::Coset));
    }

    #[test]
    fn translated_puncture() {
        let m = IntermediateModule::new(z(), Scalar::from_i64(3), Scalar::one());
        let d = m.irreducible_subquotient();
        assert_eq!(d.translation, Some(ge(&[3])));
        assert_eq!(d.puncture, Some(ge(&[-3])));
    }

    #[test]
    fn bound_probe() {
        let p = IntermediateModule::new(z(), Scalar::var(Var::Alpha), Scalar::var(Var::Beta)).prime();
        let window: Vec<_> = (-6..=6).map(|i| ge(&[i])).collect();
        let r = uniform_bound_probe(&prime_dims(&p, &window), &[ge(&[1]), ge(&[-1])]).unwrap();
        assert!(r.is_bounded_by(1));
        assert!(uniform_bound_probe(&BTreeMap::new(), &[]).is_err());
    }
}
