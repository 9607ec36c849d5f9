//! Verma modules `M(ċ, h, ≻)` over `Vir[G]`, materialized on finite windows.
//!
//! A label is a multiset of positive parts `i₁ ≼ i₂ ≼ ⋯ ≼ i_k` and stands for
//! `d_{−i₁} d_{−i₂} ⋯ d_{−i_k} v_h`; its d₀-eigenvalue is `h − Σ i_j`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::algebra::central_term;
use crate::error::Error;
use crate::foundation::{GroupElement, GroupSpec, OrderKind, OrderSpec, Poly, Scalar};
use crate::linalg;
use crate::pbw::{self, Engine, Label, PbwContext};

#[derive(Clone, Debug)]
pub struct VermaModule {
    group: GroupSpec,
    order: OrderSpec,
    cdot: Scalar,
    h: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct VermaLabel {
    /// Positive parts, ascending in the order.
    pub parts: Vec<GroupElement>,
}

pub type VermaVector = BTreeMap<VermaLabel, Scalar>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Exactness {
    Exact,
    /// Some resulting label lies outside the window; the coefficients shown
    /// are still exact.
    Truncated,
    Unknown,
}

#[derive(Clone, Debug)]
pub struct VermaWindow {
    parts: Vec<GroupElement>,
    max_len: usize,
}

impl PbwContext for VermaModule {
    type Top = ();

    fn group(&self) -> &GroupSpec {
        &self.group
    }

    fn is_lowering(&self, x: &GroupElement) -> bool {
        self.order.sign(x) == Ordering::Less
    }

    fn cmp_lowering(&self, a: &GroupElement, b: &GroupElement) -> Ordering {
        // leftmost letter carries the smallest part, i.e. the largest index
        self.order.sign(&(b - a))
    }

    fn act_top(&self, x: &GroupElement, _t: &()) -> Vec<((), Scalar)> {
        debug_assert!(self.order.sign(x) == Ordering::Greater);
        Vec::new()
    }

    fn top_weight(&self, _t: &()) -> Scalar {
        self.h.clone()
    }

    fn central_charge(&self) -> Scalar {
        self.cdot.clone()
    }
}

impl VermaLabel {
    pub fn new(parts: Vec<GroupElement>) -> Self {
        VermaLabel { parts }
    }

    pub fn vacuum() -> Self {
        VermaLabel { parts: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `Σ i_j`.
    pub fn total(&self, n: usize) -> GroupElement {
        self.parts
            .iter()
            .fold(GroupElement::zero(n), |acc, p| &acc + p)
    }
}

impl VermaWindow {
    pub fn new(order: &OrderSpec, parts: Vec<GroupElement>, max_len: usize) -> Result<Self, Error> {
        let mut parts = parts;
        for p in &parts {
            if order.sign(p) != Ordering::Greater {
                return Err(Error::InvalidArgument(format!("part {p} is not positive")));
            }
        }
        parts.sort_by(|a, b| order.sign(&(a - b)));
        parts.dedup();
        Ok(VermaWindow { parts, max_len })
    }

    pub fn parts(&self) -> &[GroupElement] {
        &self.parts
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn labels(&self) -> Vec<VermaLabel> {
        pbw::multisets(&self.parts, self.max_len)
            .into_iter()
            .map(VermaLabel::new)
            .collect()
    }

    pub fn contains(&self, l: &VermaLabel) -> bool {
        l.len() <= self.max_len && l.parts.iter().all(|p| self.parts.contains(p))
    }

    /// Labels grouped by `Σ i_j`.
    pub fn labels_by_weight(&self, n: usize) -> BTreeMap<GroupElement, Vec<VermaLabel>> {
        let mut out: BTreeMap<GroupElement, Vec<VermaLabel>> = BTreeMap::new();
        for l in self.labels() {
            out.entry(l.total(n)).or_default().push(l);
        }
        out
    }
}

impl VermaModule {
    pub fn new(group: GroupSpec, order: OrderSpec, cdot: Scalar, h: Scalar) -> Result<Self, Error> {
        order.validate()?;
        if order.rank() != group.rank() {
            return Err(Error::RankMismatch {
                expected: group.rank(),
                got: order.rank(),
            });
        }
        Ok(VermaModule {
            group,
            order,
            cdot,
            h,
        })
    }

    pub fn order(&self) -> &OrderSpec {
        &self.order
    }

    pub fn group_spec(&self) -> &GroupSpec {
        &self.group
    }

    pub fn cdot(&self) -> &Scalar {
        &self.cdot
    }

    pub fn h(&self) -> &Scalar {
        &self.h
    }

    pub fn engine(&self) -> Engine<'_, VermaModule> {
        Engine::new(self)
    }

    pub fn weight(&self, l: &VermaLabel) -> Scalar {
        &self.h - &self.group.embed_unchecked(&l.total(self.group.rank()))
    }

    pub fn to_pbw(&self, l: &VermaLabel) -> Label<()> {
        Label::new(l.parts.iter().map(|p| -p).collect(), ())
    }

    pub fn from_pbw(&self, l: &Label<()>) -> VermaLabel {
        VermaLabel::new(l.word.iter().map(|z| -z).collect())
    }

    fn to_pbw_vec(&self, v: &VermaVector) -> pbw::Vector<()> {
        v.iter().map(|(l, c)| (self.to_pbw(l), c.clone())).collect()
    }

    fn from_pbw_vec(&self, v: &pbw::Vector<()>) -> VermaVector {
        v.iter().map(|(l, c)| (self.from_pbw(l), c.clone())).collect()
    }

    /// `d_x · v`, flagged `Truncated` if a resulting label leaves `window`.
    pub fn act(
        &self,
        engine: &mut Engine<'_, VermaModule>,
        x: &GroupElement,
        v: &VermaVector,
        window: &VermaWindow,
    ) -> (VermaVector, Exactness) {
        let out = self.from_pbw_vec(&engine.apply_vec(x, &self.to_pbw_vec(v)));
        let flag = if out.keys().all(|l| window.contains(l)) {
            Exactness::Exact
        } else {
            Exactness::Truncated
        };
        (out, flag)
    }

    pub fn check_same_weight(&self, labels: &[VermaLabel]) -> Result<(), Error> {
        let n = self.group.rank();
        if let Some(first) = labels.first() {
            let w = first.total(n);
            if labels.iter().any(|l| l.total(n) != w) {
                return Err(Error::WeightMismatch);
            }
        }
        Ok(())
    }

    /// `⟨u_i v_h, u_j v_h⟩` for the contravariant form with `ω(d_x) = d_{−x}`,
    /// `⟨v_h, v_h⟩ = 1`, by straightening `ω(u_i) u_j v_h` directly.
    pub fn gram_matrix(&self, labels: &[VermaLabel]) -> Result<Vec<Vec<Scalar>>, Error> {
        self.check_same_weight(labels)?;
        let mut engine = self.engine();
        let vac = Label::new(Vec::new(), ());
        let mut m = vec![vec![Scalar::zero(); labels.len()]; labels.len()];
        for (i, li) in labels.iter().enumerate() {
            for (j, lj) in labels.iter().enumerate().skip(i) {
                let mut v = pbw::Vector::new();
                v.insert(self.to_pbw(lj), Scalar::one());
                // ω(d_{−i₁} ⋯ d_{−i_k}) = d_{i_k} ⋯ d_{i₁}: d_{i₁} acts first
                let word: Vec<GroupElement> = li.parts.iter().rev().cloned().collect();
                let r = engine.apply_word(&word, &v);
                let e = r.get(&vac).cloned().unwrap_or_default();
                m[i][j] = e.clone();
                m[j][i] = e;
            }
        }
        Ok(m)
    }

    /// The same matrix, computed level by level: `⟨d_{−p} u v, w⟩ =
    /// ⟨u v, d_p w⟩` with `d_p w` expanded in the basis one level down.
    pub fn gram_matrix_recursive(&self, labels: &[VermaLabel]) -> Result<Vec<Vec<Scalar>>, Error> {
        self.check_same_weight(labels)?;
        let mut engine = self.engine();
        let mut memo: HashMap<(VermaLabel, VermaLabel), Scalar> = HashMap::new();
        let mut m = vec![vec![Scalar::zero(); labels.len()]; labels.len()];
        for (i, li) in labels.iter().enumerate() {
            for (j, lj) in labels.iter().enumerate() {
                m[i][j] = self.form(&mut engine, &mut memo, li, lj);
            }
        }
        Ok(m)
    }

    fn form(
        &self,
        engine: &mut Engine<'_, VermaModule>,
        memo: &mut HashMap<(VermaLabel, VermaLabel), Scalar>,
        a: &VermaLabel,
        b: &VermaLabel,
    ) -> Scalar {
        if a.is_empty() || b.is_empty() {
            return if a.is_empty() && b.is_empty() {
                Scalar::one()
            } else {
                Scalar::zero()
            };
        }
        let key = (a.clone(), b.clone());
        if let Some(v) = memo.get(&key) {
            return v.clone();
        }
        let p = &a.parts[0];
        let rest = VermaLabel::new(a.parts[1..].to_vec());
        let down = engine.apply(p, &self.to_pbw(b));
        let mut acc = Scalar::zero();
        for (l, c) in down {
            let lv = self.from_pbw(&l);
            acc += &(&c * &self.form(engine, memo, &rest, &lv));
        }
        memo.insert(key, acc.clone());
        acc
    }

    /// `⟨d_{−x} v_h, d_{−x} v_h⟩ = −2xh + (x³ − x)/12 · ċ`, by straightening.
    pub fn level_one_norm(&self, x: &GroupElement) -> Scalar {
        let g = self
            .gram_matrix(&[VermaLabel::new(vec![x.clone()])])
            .expect("single label");
        g[0][0].clone()
    }
}

/// The closed form of `level_one_norm`, for cross-checks.
pub fn level_one_formula(group: &GroupSpec, x: &GroupElement, cdot: &Scalar, h: &Scalar) -> Scalar {
    let ex = group.embed_unchecked(x);
    &(&Scalar::from_i64(-2) * &(&ex * h)) + &(&central_term(&ex) * cdot)
}

/// Result of closing `M′ = span{labels of length ≥ 1}` under probe actions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MPrimeReport {
    pub labels: usize,
    pub probes: usize,
    pub checked: usize,
    pub truncated: usize,
    pub closed: bool,
    /// First `(x, label)` whose image has a vacuum component, if any.
    pub escape: Option<(GroupElement, VermaLabel)>,
}

/// Checks that `M′ ⊂ M(0, 0, ≻)` is stable under `d_x` for every probe `x`,
/// on every window label of length ≥ 1 (truncated images are still checked
/// for a vacuum component, which is exact, and counted separately).
pub fn m_prime_view(
    module: &VermaModule,
    window: &VermaWindow,
    probes: &[GroupElement],
) -> Result<MPrimeReport, Error> {
    if !module.cdot.is_zero() || !module.h.is_zero() {
        return Err(Error::InvalidArgument("M′ requires (ċ, h) = (0, 0)".into()));
    }
    let labels: Vec<VermaLabel> = window.labels().into_iter().filter(|l| !l.is_empty()).collect();
    let mut engine = module.engine();
    let mut checked = 0;
    let mut truncated = 0;
    let mut escape = None;
    for x in probes {
        for l in &labels {
            let mut v = VermaVector::new();
            v.insert(l.clone(), Scalar::one());
            let (out, flag) = module.act(&mut engine, x, &v, window);
            if flag == Exactness::Truncated {
                truncated += 1;
            } else {
                checked += 1;
            }
            if out.keys().any(VermaLabel::is_empty) && escape.is_none() {
                escape = Some((x.clone(), l.clone()));
            }
        }
    }
    Ok(MPrimeReport {
        labels: labels.len(),
        probes: probes.len(),
        checked,
        truncated,
        closed: escape.is_none(),
        escape,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Theorem22Report {
    /// Dense order, `(ċ, h) = (0, 0)`: every probed level-one norm vanishes and
    /// `M′` is closed on the window.
    DenseDegenerate {
        probed: Vec<GroupElement>,
        all_norms_zero: bool,
        m_prime: MPrimeReport,
    },
    /// Dense order, `(ċ, h) ≠ (0, 0)`: a positive `x` with nonzero norm.
    DenseNondegenerate { witness: GroupElement, norm: String },
    /// Discrete order: Gram determinants of the rank-one Verma module over
    /// `Vir[Za]` at levels `1..=L`.
    Discrete {
        minimal_positive: GroupElement,
        determinants: Vec<(usize, String)>,
    },
}

/// Probes the irreducibility dichotomy for `M(ċ, h, ≻)` on the given
/// positive elements (dense case) or up to `levels` (discrete case).
pub fn theorem22_probe(
    module: &VermaModule,
    window: &VermaWindow,
    levels: usize,
) -> Result<Theorem22Report, Error> {
    match module.order.classify()? {
        OrderKind::Dense => {
            let degenerate = module.cdot.is_zero() && module.h.is_zero();
            if degenerate {
                let probed: Vec<GroupElement> = window.parts().to_vec();
                let all_norms_zero = probed.iter().all(|x| module.level_one_norm(x).is_zero());
                let probes: Vec<GroupElement> = probed.iter().flat_map(|p| [p.clone(), -p]).collect();
                let m_prime = m_prime_view(module, window, &probes)?;
                Ok(Theorem22Report::DenseDegenerate {
                    probed,
                    all_norms_zero,
                    m_prime,
                })
            } else {
                for x in window.parts() {
                    let n = module.level_one_norm(x);
                    if !n.is_zero() {
                        return Ok(Theorem22Report::DenseNondegenerate {
                            witness: x.clone(),
                            norm: n.to_string(),
                        });
                    }
                }
                Err(Error::WindowTooSmall(
                    "no positive part in the window has a nonzero level-one norm".into(),
                ))
            }
        }
        OrderKind::Discrete { minimal_positive } => {
            let dets = rank_one_determinants(module, &minimal_positive, levels)?;
            Ok(Theorem22Report::Discrete {
                minimal_positive,
                determinants: dets.into_iter().map(|(k, d)| (k, d.to_string())).collect(),
            })
        }
    }
}

/// Integer partitions of `k`, parts ascending.
pub fn partitions(k: usize) -> Vec<Vec<usize>> {
    fn go(rem: usize, min: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rem == 0 {
            out.push(cur.clone());
            return;
        }
        for p in min..=rem {
            cur.push(p);
            go(rem - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(k, 1, &mut Vec::new(), &mut out);
    out
}

/// Labels of weight `h − k·a` built from multiples of `a`.
pub fn rank_one_labels(a: &GroupElement, k: usize) -> Vec<VermaLabel> {
    partitions(k)
        .into_iter()
        .map(|p| VermaLabel::new(p.into_iter().map(|m| a.scale(m as i64)).collect()))
        .collect()
}

/// Gram determinants at levels `1..=levels` of the Verma module over
/// `Vir[Za]`, as exact polynomials.
pub fn rank_one_determinants(
    module: &VermaModule,
    a: &GroupElement,
    levels: usize,
) -> Result<Vec<(usize, Poly)>, Error> {
    let mut out = Vec::new();
    for k in 1..=levels {
        let g = module.gram_matrix(&rank_one_labels(a, k))?;
        let polys = linalg::to_poly_matrix(&g);
        out.push((k, linalg::det_bareiss(&polys)));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foundation::{QuadSurd, TieBreak, Var};

    fn ge(v: &[i64]) -> GroupElement {
        GroupElement::new(v.to_vec())
    }

    fn rank_one(cdot: Scalar, h: Scalar) -> VermaModule {
        let g = GroupSpec::with_values(vec![Scalar::one()]).unwrap();
        VermaModule::new(g, OrderSpec::lex(1), cdot, h).unwrap()
    }

    #[test]
    fn vacuum_relations() {
        let m = rank_one(Scalar::var(Var::CentralCharge), Scalar::var(Var::H));
        let mut e = m.engine();
        let vac = Label::new(vec![], ());
        assert!(e.apply(&ge(&[3]), &vac).is_empty());
        let r = e.apply(&ge(&[0]), &Label::new(vec![ge(&[-2])], ()));
        assert_eq!(
            r.get(&Label::new(vec![ge(&[-2])], ())).unwrap(),
            &Scalar::parse("h - 2").unwrap()
        );
        for a in 1..4 {
            let r = e.apply(&ge(&[a]), &Label::new(vec![ge(&[-a])], ()));
            let expect = Scalar::parse(&format!("-2*{a}*h + ({a}^3 - {a})/12*cdot")).unwrap();
            assert_eq!(r.get(&vac).cloned().unwrap_or_default(), expect);
        }
    }

    #[test]
    fn normal_order_puts_small_parts_left() {
        let m = rank_one(Scalar::var(Var::CentralCharge), Scalar::var(Var::H));
        let mut e = m.engine();
        let r = e.apply(&ge(&[-1]), &Label::new(vec![ge(&[-2])], ()));
        assert_eq!(r.len(), 1);
        assert!(r.contains_key(&Label::new(vec![ge(&[-1]), ge(&[-2])], ())));
        let r = e.apply(&ge(&[-2]), &Label::new(vec![ge(&[-1])], ()));
        // d_{-2} d_{-1} = d_{-1} d_{-2} + [d_{-2}, d_{-1}] = d_{-1}d_{-2} + d_{-3}
        assert_eq!(r.len(), 2);
        assert!(r.get(&Label::new(vec![ge(&[-3])], ())).unwrap().is_one());
    }

    #[test]
    fn gram_examples() {
        let m = rank_one(Scalar::var(Var::CentralCharge), Scalar::var(Var::H));
        let g = m.gram_matrix(&[VermaLabel::new(vec![ge(&[1])])]).unwrap();
        assert_eq!(g[0][0], Scalar::parse("-2*h").unwrap());
        let zero = rank_one(Scalar::zero(), Scalar::zero());
        assert!(zero.level_one_norm(&ge(&[5])).is_zero());
        let labels = rank_one_labels(&ge(&[1]), 3);
        assert_eq!(m.gram_matrix(&labels).unwrap(), m.gram_matrix_recursive(&labels).unwrap());
        assert!(m
            .gram_matrix(&[VermaLabel::new(vec![ge(&[1])]), VermaLabel::new(vec![ge(&[2])])])
            .is_err());
    }

    #[test]
    fn dense_probe() {
        let g = GroupSpec::symbolic(2).unwrap();
        let o = OrderSpec::functional(vec![QuadSurd::sqrt(2), QuadSurd::from_int(1, 2)], 2, TieBreak::Reject)
            .unwrap();
        let parts = vec![ge(&[1, -1]), ge(&[0, 1]), ge(&[1, 0])];
        let w = VermaWindow::new(&o, parts, 2).unwrap();
        let m = VermaModule::new(g.clone(), o.clone(), Scalar::zero(), Scalar::zero()).unwrap();
        match theorem22_probe(&m, &w, 0).unwrap() {
            Theorem22Report::DenseDegenerate { all_norms_zero, m_prime, .. } => {
                assert!(all_norms_zero);
                assert!(m_prime.closed);
            }
            other => panic!("{other:?}"),
        }
        let m = VermaModule::new(g, o, Scalar::zero(), Scalar::one()).unwrap();
        assert!(matches!(
            theorem22_probe(&m, &w, 0).unwrap(),
            Theorem22Report::DenseNondegenerate { .. }
        ));
    }
}
