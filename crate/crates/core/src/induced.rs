//! Induced modules `M̄(b, G₀, V′(α, β, G₀)) = U(L) ⊗_{U(L₊ + L₀)} V′` for a
//! splitting `G = Zb ⊕ G₀`, and their irreducible quotients `M = M̄ / J`.
//!
//! Internally every group element is written in split coordinates
//! `(i, a₁, …, a_{n−1})` meaning `i·b + Σ a_j g_j`; `i` is the b-level.
//! `J` at level `−i` is detected as the joint kernel of raising PBW words of
//! total b-degree `i` composed with projection to the top level, which is an
//! irreducible `L₀`-module with one-dimensional weight spaces.

use std::cmp::Ordering;

use serde::Serialize;

use crate::error::Error;
use crate::foundation::lattice::{self, bezout_min_norm, integer_kernel, vec_mat};
use crate::foundation::{GroupElement, GroupSpec, Scalar};
use crate::intermediate::{IntermediateModule, PrimeModule};
use crate::linalg;
use crate::pbw::{self, Engine, Label, PbwContext};
use crate::verma::Exactness;

/// `G = Zb ⊕ G₀` with `G₀ = Zg₁ ⊕ ⋯ ⊕ Zg_{n−1}`.
#[derive(Clone, Debug)]
pub struct SplitGroup {
    group: GroupSpec,
    /// Rows `b, g₁, …, g_{n−1}` in the coordinates of `G`.
    basis: Vec<Vec<i64>>,
    inverse: Vec<Vec<i64>>,
    split_spec: GroupSpec,
    g0_spec: GroupSpec,
}

impl SplitGroup {
    pub fn new(group: GroupSpec, b: GroupElement, g0: Vec<GroupElement>) -> Result<Self, Error> {
        let n = group.rank();
        if n < 2 {
            return Err(Error::InvalidSplit("G must have rank at least 2".into()));
        }
        group.check(&b)?;
        if g0.len() != n - 1 {
            return Err(Error::InvalidSplit(format!(
                "G₀ needs {} basis vectors, got {}",
                n - 1,
                g0.len()
            )));
        }
        for g in &g0 {
            group.check(g)?;
        }
        let mut basis = vec![b.coords().to_vec()];
        basis.extend(g0.iter().map(|g| g.coords().to_vec()));
        let inverse = lattice::unimodular_inverse(&basis).map_err(|_| {
            let g0_rows: Vec<Vec<i64>> = basis[1..].to_vec();
            let mut with_b = g0_rows.clone();
            with_b.push(basis[0].clone());
            if linalg::rank(&to_q(&with_b), n) == linalg::rank(&to_q(&g0_rows), n) {
                Error::InvalidSplit(format!("b = {b} lies in the span of G₀"))
            } else {
                Error::InvalidSplit("b and G₀ do not form a basis of G".into())
            }
        })?;
        let split_spec = GroupSpec::with_values(
            basis
                .iter()
                .map(|r| group.embed_unchecked(&GroupElement::new(r.clone())))
                .collect(),
        )?;
        let g0_spec = GroupSpec::with_values(split_spec.values()[1..].to_vec())?;
        Ok(SplitGroup {
            group,
            basis,
            inverse,
            split_spec,
            g0_spec,
        })
    }

    /// The canonical splitting along the level functional `k` (primitive):
    /// `G₀ = ker k` in Hermite form and `b` the minimal-norm element with
    /// `k·b = 1` (lexicographic tie-break).
    pub fn canonical(group: GroupSpec, k: &[i64]) -> Result<Self, Error> {
        let b = bezout_min_norm(k).map_err(|e| Error::InvalidSplit(e.to_string()))?;
        let g0 = integer_kernel(&[k.to_vec()], k.len());
        SplitGroup::new(
            group,
            GroupElement::new(b),
            g0.into_iter().map(GroupElement::new).collect(),
        )
    }

    /// The same splitting with `b` replaced by its canonical representative
    /// in `b + G₀` and `G₀` in Hermite form.
    pub fn normalized(&self) -> Result<Self, Error> {
        SplitGroup::canonical(self.group.clone(), &self.level_functional())
    }

    /// `k` with `level(x) = k·x`.
    pub fn level_functional(&self) -> Vec<i64> {
        self.inverse.iter().map(|r| r[0]).collect()
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn b(&self) -> GroupElement {
        GroupElement::new(self.basis[0].clone())
    }

    pub fn g0(&self) -> Vec<GroupElement> {
        self.basis[1..].iter().cloned().map(GroupElement::new).collect()
    }

    pub fn g0_spec(&self) -> &GroupSpec {
        &self.g0_spec
    }

    pub fn split_spec(&self) -> &GroupSpec {
        &self.split_spec
    }

    pub fn to_split(&self, x: &GroupElement) -> GroupElement {
        GroupElement::new(vec_mat(x.coords(), &self.inverse))
    }

    pub fn from_split(&self, c: &GroupElement) -> GroupElement {
        GroupElement::new(vec_mat(c.coords(), &self.basis))
    }

    pub fn level(&self, x: &GroupElement) -> i64 {
        self.to_split(x).coords()[0]
    }
}

fn to_q(m: &[Vec<i64>]) -> Vec<Vec<num_rational::BigRational>> {
    m.iter()
        .map(|r| r.iter().map(|&x| num_rational::BigRational::from_integer(x.into())).collect())
        .collect()
}

/// Finite part of the PBW basis: at most `depth` total b-degree, every
/// G₀-coordinate of every letter and of the top index within `radius`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct InducedWindow {
    pub depth: usize,
    pub radius: i64,
}

#[derive(Clone, Debug)]
pub struct InducedModule {
    split: SplitGroup,
    alpha: Scalar,
    beta: Scalar,
    prime: PrimeModule,
}

/// Labels use split coordinates; the top index is a `G₀`-coordinate vector.
pub type InducedLabel = Label<GroupElement>;
pub type InducedVector = pbw::Vector<GroupElement>;

impl PbwContext for InducedModule {
    type Top = GroupElement;

    fn group(&self) -> &GroupSpec {
        &self.split.split_spec
    }

    fn is_lowering(&self, x: &GroupElement) -> bool {
        x.coords()[0] < 0
    }

    fn cmp_lowering(&self, a: &GroupElement, b: &GroupElement) -> Ordering {
        (-a.coords()[0], &a.coords()[1..]).cmp(&(-b.coords()[0], &b.coords()[1..]))
    }

    fn act_top(&self, x: &GroupElement, t: &GroupElement) -> Vec<(GroupElement, Scalar)> {
        if x.coords()[0] > 0 {
            return Vec::new();
        }
        let a = GroupElement::new(x.coords()[1..].to_vec());
        match self.prime.act(&a, t) {
            Some((target, c)) if !c.is_zero() => vec![(target, c)],
            _ => Vec::new(),
        }
    }

    fn top_weight(&self, t: &GroupElement) -> Scalar {
        &self.alpha + &self.split.g0_spec.embed_unchecked(t)
    }

    fn central_charge(&self) -> Scalar {
        Scalar::zero()
    }
}

/// One row of a quotient dimension table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientRow {
    pub level: usize,
    /// `G₀`-coordinates of the weight `−ib + α + a`.
    pub a: Vec<i64>,
    /// `(radius, rank)` for each window tried.
    pub history: Vec<(i64, usize)>,
    pub dim_lower: usize,
    pub dim_upper: u64,
    pub stabilized: bool,
    pub monotone: bool,
}

impl QuotientRow {
    pub fn weight_key(&self) -> String {
        let a: Vec<String> = self.a.iter().map(i64::to_string).collect();
        format!("-{}b+alpha+({})", self.level, a.join(","))
    }

    pub fn status(&self) -> &'static str {
        if self.dim_lower as u64 == self.dim_upper {
            "exact"
        } else if self.stabilized {
            "stabilized"
        } else {
            "unstabilized"
        }
    }
}

/// `(2i + 1)!!`.
pub fn double_factorial_bound(i: usize) -> u64 {
    (0..=i as u64).map(|k| 2 * k + 1).product()
}

impl InducedModule {
    pub fn build(alpha: Scalar, beta: Scalar, split: SplitGroup) -> Self {
        let prime = IntermediateModule::new(split.g0_spec.clone(), alpha.clone(), beta.clone()).prime();
        InducedModule {
            split,
            alpha,
            beta,
            prime,
        }
    }

    pub fn split(&self) -> &SplitGroup {
        &self.split
    }

    pub fn alpha(&self) -> &Scalar {
        &self.alpha
    }

    pub fn beta(&self) -> &Scalar {
        &self.beta
    }

    pub fn prime(&self) -> &PrimeModule {
        &self.prime
    }

    pub fn engine(&self) -> Engine<'_, InducedModule> {
        Engine::new(self)
    }

    fn g0_rank(&self) -> usize {
        self.split.group.rank() - 1
    }

    /// All points of the box `[−r, r]^{n−1}`.
    pub fn g0_box(&self, r: i64) -> Vec<Vec<i64>> {
        let mut out = vec![Vec::new()];
        for _ in 0..self.g0_rank() {
            out = out
                .into_iter()
                .flat_map(|p| {
                    (-r..=r).map(move |x| {
                        let mut q = p.clone();
                        q.push(x);
                        q
                    })
                })
                .collect();
        }
        out
    }

    fn letters(&self, sign: i64, max_level: usize, r: i64) -> Vec<GroupElement> {
        let mut out = Vec::new();
        for j in 1..=max_level as i64 {
            for a in self.g0_box(r) {
                let mut c = vec![sign * j];
                c.extend(a);
                out.push(GroupElement::new(c));
            }
        }
        out.sort_by(|a, b| self.cmp_lowering(a, b));
        out
    }

    /// Window labels of weight `−ib + α + a` (split coordinates).
    pub fn labels_at(&self, level: usize, a: &[i64], radius: i64) -> Vec<InducedLabel> {
        let letters = self.letters(-1, level, radius);
        let mut out = Vec::new();
        let mut cur: Vec<GroupElement> = Vec::new();
        self.extend_labels(&letters, 0, level as i64, a, radius, &mut cur, &mut out);
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn extend_labels(
        &self,
        letters: &[GroupElement],
        start: usize,
        remaining: i64,
        a: &[i64],
        radius: i64,
        cur: &mut Vec<GroupElement>,
        out: &mut Vec<InducedLabel>,
    ) {
        if remaining == 0 {
            let mut t = a.to_vec();
            for z in cur.iter() {
                for (k, tk) in t.iter_mut().enumerate() {
                    *tk -= z.coords()[k + 1];
                }
            }
            let t = GroupElement::new(t);
            if t.coords().iter().all(|x| x.abs() <= radius) && self.prime.in_support(&t) {
                out.push(Label::new(cur.clone(), t));
            }
            return;
        }
        for (idx, z) in letters.iter().enumerate().skip(start) {
            let lvl = -z.coords()[0];
            if lvl > remaining {
                continue;
            }
            cur.push(z.clone());
            self.extend_labels(letters, idx, remaining - lvl, a, radius, cur, out);
            cur.pop();
        }
    }

    /// Multisets of raising letters `d_{jb+a′}` (`j ≥ 1`, `a′` in the box) of
    /// total b-degree `level`.
    pub fn raising_words(&self, level: usize, radius: i64) -> Vec<Vec<GroupElement>> {
        let letters = self.letters(1, level, radius);
        let mut out = Vec::new();
        fn go(
            letters: &[GroupElement],
            start: usize,
            remaining: i64,
            cur: &mut Vec<GroupElement>,
            out: &mut Vec<Vec<GroupElement>>,
        ) {
            if remaining == 0 {
                out.push(cur.clone());
                return;
            }
            for (idx, z) in letters.iter().enumerate().skip(start) {
                if z.coords()[0] > remaining {
                    continue;
                }
                cur.push(z.clone());
                go(letters, idx, remaining - z.coords()[0], cur, out);
                cur.pop();
            }
        }
        go(&letters, 0, level as i64, &mut Vec::new(), &mut out);
        out
    }

    /// Matrix of `vector ↦ top-level coefficient of (word · vector)` for the
    /// given raising words (rows) and vectors (columns), all of one weight.
    pub fn functional_matrix(
        &self,
        engine: &mut Engine<'_, InducedModule>,
        words: &[Vec<GroupElement>],
        vectors: &[InducedVector],
    ) -> Vec<Vec<Scalar>> {
        words
            .iter()
            .map(|w| {
                vectors
                    .iter()
                    .map(|v| {
                        let r = engine.apply_word(w, v);
                        debug_assert!(r.len() <= 1);
                        r.into_iter()
                            .find(|(l, _)| l.is_empty())
                            .map(|(_, c)| c)
                            .unwrap_or_default()
                    })
                    .collect()
            })
            .collect()
    }

    /// Lower bound on `dim M_{−ib+α+a}` from the window of the given radius:
    /// the rank (at seeded rational specializations) of the raising-word
    /// functionals on the window labels.
    pub fn quotient_rank(&self, level: usize, a: &[i64], radius: i64, seed: u64) -> usize {
        let labels = self.labels_at(level, a, radius);
        if labels.is_empty() {
            return 0;
        }
        if level == 0 {
            return labels.len();
        }
        let vectors: Vec<InducedVector> = labels
            .into_iter()
            .map(|l| [(l, Scalar::one())].into_iter().collect())
            .collect();
        let words = self.raising_words(level, radius + level as i64);
        let mut engine = self.engine();
        let m = self.functional_matrix(&mut engine, &words, &vectors);
        linalg::specialized_rank(&m, vectors.len(), seed, 2)
    }

    /// Quotient dimension at `−ib + α + a`, grown over `radii` until two
    /// consecutive windows agree.
    pub fn radical_quotient_dims(
        &self,
        level: usize,
        a: &[i64],
        radii: std::ops::RangeInclusive<i64>,
        window: &InducedWindow,
        seed: u64,
    ) -> Result<QuotientRow, Error> {
        if window.depth < level {
            return Err(Error::WindowTooSmall(format!(
                "window depth {} is below level {level}",
                window.depth
            )));
        }
        let mut history: Vec<(i64, usize)> = Vec::new();
        let mut stabilized = false;
        for r in radii {
            let d = self.quotient_rank(level, a, r, seed);
            if let Some(&(_, prev)) = history.last() {
                history.push((r, d));
                if prev == d && d > 0 {
                    stabilized = true;
                    break;
                }
            } else {
                history.push((r, d));
            }
        }
        let monotone = history.windows(2).all(|w| w[0].1 <= w[1].1);
        let dim_lower = history.iter().map(|h| h.1).max().unwrap_or(0);
        Ok(QuotientRow {
            level,
            a: a.to_vec(),
            history,
            dim_lower,
            dim_upper: double_factorial_bound(level),
            stabilized,
            monotone,
        })
    }

    /// `true` if the weight `−ib + α + a` is certified to carry a nonzero
    /// vector of `M`: some raising word maps some window label to a nonzero
    /// multiple of a top vector (an exact symbolic test).
    pub fn weight_present(&self, level: usize, a: &[i64], radius: i64) -> bool {
        if level == 0 {
            return self.prime.in_support(&GroupElement::new(a.to_vec()));
        }
        let mut engine = self.engine();
        let words = self.raising_words(level, radius + level as i64);
        for l in self.labels_at(level, a, radius) {
            let v: InducedVector = [(l, Scalar::one())].into_iter().collect();
            for w in &words {
                if engine.apply_word(w, &v).values().any(|c| !c.is_zero()) {
                    return true;
                }
            }
        }
        false
    }

    /// `d_x · v` with `x` in split coordinates, flagged against a window.
    pub fn act(
        &self,
        engine: &mut Engine<'_, InducedModule>,
        x: &GroupElement,
        v: &InducedVector,
        window: &InducedWindow,
    ) -> (InducedVector, Exactness) {
        let out = engine.apply_vec(x, v);
        let inside = out.keys().all(|l| {
            let depth: i64 = l.word.iter().map(|z| -z.coords()[0]).sum();
            depth <= window.depth as i64
                && l.word
                    .iter()
                    .all(|z| z.coords()[1..].iter().all(|c| c.abs() <= window.radius))
                && l.top.coords().iter().all(|c| c.abs() <= window.radius)
        });
        (out, if inside { Exactness::Exact } else { Exactness::Truncated })
    }

    /// d₀-eigenvalue of a label.
    pub fn weight_of(&self, l: &InducedLabel) -> Scalar {
        self.engine().weight(l)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum SupportKind {
    /// `(α + G₀) ∪ (α + G₀ − N·b)`.
    FullCoset,
    /// `(−Z⁺b + G₀) ∖ {0}`.
    Punctured,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShapeReport {
    pub kind: SupportKind,
    pub checked: usize,
    /// Weights `(level, a)` of the expected support found empty.
    pub missing: Vec<(usize, Vec<i64>)>,
}

/// Compares the window support with `supp V′ ∪ (α + G₀ − N·b)` for levels
/// `0..=depth` and `a` in the box of radius `box_radius`.
pub fn support_shape(
    module: &InducedModule,
    depth: usize,
    box_radius: i64,
    label_radius: i64,
) -> ShapeReport {
    let mut missing = Vec::new();
    let mut checked = 0;
    for level in 1..=depth {
        for a in module.g0_box(box_radius) {
            checked += 1;
            if !module.weight_present(level, &a, label_radius) {
                missing.push((level, a));
            }
        }
    }
    let punctured = module.prime.puncture().is_some();
    for a in module.g0_box(box_radius) {
        checked += 1;
        let t = GroupElement::new(a.clone());
        let expected = module.prime.puncture() != Some(&t);
        if module.weight_present(0, &a, label_radius) != expected {
            missing.push((0, a));
        }
    }
    let kind = if !missing.is_empty() {
        SupportKind::Inconclusive
    } else if punctured {
        SupportKind::Punctured
    } else {
        SupportKind::FullCoset
    };
    ShapeReport {
        kind,
        checked,
        missing,
    }
}

pub fn table_csv(rows: &[QuotientRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let _ = w.write_record(["weight_key", "level", "dim_lower", "dim_upper", "status"]);
    for r in rows {
        let _ = w.write_record([
            r.weight_key(),
            r.level.to_string(),
            r.dim_lower.to_string(),
            r.dim_upper.to_string(),
            r.status().to_string(),
        ]);
    }
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("UTF-8 fields")
}

pub fn table_json(rows: &[QuotientRow]) -> serde_json::Value {
    serde_json::Value::Array(
        rows.iter()
            .map(|r| {
                serde_json::json!({
                    "weight_key": r.weight_key(),
                    "level": r.level,
                    "a": r.a,
                    "dim_lower": r.dim_lower,
                    "dim_upper": r.dim_upper,
                    "status": r.status(),
                    "history": r.history,
                })
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foundation::Var;

    fn ge(v: &[i64]) -> GroupElement {
        GroupElement::new(v.to_vec())
    }

    fn z_plus_zb2() -> GroupSpec {
        GroupSpec::with_values(vec![Scalar::one(), Scalar::var(Var::Gen(1))]).unwrap()
    }

    fn generic() -> InducedModule {
        let split = SplitGroup::new(z_plus_zb2(), ge(&[1, 0]), vec![ge(&[0, 1])]).unwrap();
        InducedModule::build(Scalar::var(Var::Alpha), Scalar::var(Var::Beta), split)
    }

    #[test]
    fn split_validation() {
        assert!(SplitGroup::new(z_plus_zb2(), ge(&[0, 2]), vec![ge(&[0, 1])]).is_err());
        assert!(SplitGroup::new(z_plus_zb2(), ge(&[2, 0]), vec![ge(&[0, 1])]).is_err());
        let s = SplitGroup::new(z_plus_zb2(), ge(&[1, 5]), vec![ge(&[0, 1])]).unwrap();
        let n = s.normalized().unwrap();
        assert_eq!(n.b(), ge(&[1, 0]));
        assert_eq!(s.level(&ge(&[3, -7])), 3);
        let x = ge(&[2, 9]);
        assert_eq!(s.from_split(&s.to_split(&x)), x);
    }

    #[test]
    fn top_level_and_raising() {
        let m = generic();
        let mut e = m.engine();
        let top = Label::new(vec![], ge(&[0]));
        assert!(e.apply(&ge(&[1, 3]), &top).is_empty());
        let r = e.apply(&ge(&[0, 2]), &Label::new(vec![], ge(&[1])));
        assert_eq!(
            r.get(&Label::new(vec![], ge(&[3]))).unwrap(),
            &Scalar::parse("alpha + b2 + 2*b2*beta").unwrap()
        );
        assert_eq!(m.labels_at(0, &[0], 2).len(), 1);
        assert_eq!(m.labels_at(1, &[0], 1).len(), 3);
    }

    #[test]
    fn level_one_rank_is_three() {
        let m = generic();
        let w = InducedWindow { depth: 1, radius: 4 };
        let row = m.radical_quotient_dims(1, &[0], 1..=4, &w, 1).unwrap();
        assert!(row.stabilized && row.monotone);
        assert_eq!(row.dim_lower, 3);
        assert_eq!(row.status(), "exact");
        assert!(m.radical_quotient_dims(2, &[0], 1..=2, &w, 1).is_err());
    }

    #[test]
    fn double_factorials() {
        assert_eq!(
            (0..4).map(double_factorial_bound).collect::<Vec<_>>(),
            vec![1, 3, 15, 105]
        );
    }
}
