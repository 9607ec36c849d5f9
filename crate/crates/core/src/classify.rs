//! Executable classification probes over finite windows of weight modules:
//! generalized-highest-weight (GHW) vectors, support rays, the uniformly
//! bounded / GHW dichotomy, a dispatcher recovering the construction that
//! produced a window, and the independence family `d_{−ḡ}^{k−j} d_{−jḡ} v`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Error;
use crate::foundation::{GroupElement, GroupSpec, Scalar};
use crate::induced::{InducedModule, SplitGroup};
use crate::intermediate::PrimeModule;
use crate::linalg;
use crate::pbw::{self, Label};
use crate::verma::{Exactness, VermaModule, VermaWindow};

pub type ViewLabel = Label<GroupElement>;
pub type ViewVector = pbw::Vector<GroupElement>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Provenance {
    Intermediate,
    Induced,
    Verma,
    Trivial,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DimEntry {
    /// Certified lower bound.
    pub lower: usize,
    /// `lower` is the true dimension.
    pub exact: bool,
}

/// Uniform read-only access to a windowed weight module. Weights are
/// `base_weight() + embed(offset)`.
pub trait ModuleWindowView: Sync {
    fn provenance(&self) -> Provenance;
    fn group(&self) -> &GroupSpec;
    fn base_weight(&self) -> Scalar;
    fn offsets(&self) -> Vec<GroupElement>;
    fn dim(&self, offset: &GroupElement) -> DimEntry;
    /// Vectors spanning the weight space (within the window).
    fn spanning(&self, offset: &GroupElement) -> Vec<ViewVector>;
    fn act(&self, x: &GroupElement, v: &ViewVector) -> (ViewVector, Exactness);
    /// An injective linear image of the class of `v` (a vector of weight
    /// `offset`) in the module.
    fn coordinates(&self, offset: &GroupElement, v: &ViewVector) -> Vec<Scalar>;

    fn in_window(&self, offset: &GroupElement) -> bool {
        self.offsets().contains(offset)
    }

    fn weight(&self, offset: &GroupElement) -> Scalar {
        &self.base_weight() + &self.group().embed_unchecked(offset)
    }
}

fn single(label: ViewLabel) -> ViewVector {
    [(label, Scalar::one())].into_iter().collect()
}

fn box_points(n: usize, r: i64) -> Vec<GroupElement> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p: Vec<i64>| {
                (-r..=r).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out.into_iter().map(GroupElement::new).collect()
}

/// `V′(α, β, G)` on the box `[−r, r]^n` of indices `y` (`v_y` has offset `y`).
pub struct IntermediateView {
    pub module: PrimeModule,
    pub radius: i64,
}

impl ModuleWindowView for IntermediateView {
    fn provenance(&self) -> Provenance {
        Provenance::Intermediate
    }

    fn group(&self) -> &GroupSpec {
        self.module.module().group()
    }

    fn base_weight(&self) -> Scalar {
        self.module.module().alpha().clone()
    }

    fn offsets(&self) -> Vec<GroupElement> {
        box_points(self.group().rank(), self.radius)
    }

    fn in_window(&self, offset: &GroupElement) -> bool {
        offset.coords().iter().all(|c| c.abs() <= self.radius)
    }

    fn dim(&self, offset: &GroupElement) -> DimEntry {
        DimEntry {
            lower: usize::from(self.module.in_support(offset)),
            exact: true,
        }
    }

    fn spanning(&self, offset: &GroupElement) -> Vec<ViewVector> {
        if self.module.in_support(offset) {
            vec![single(Label::new(Vec::new(), offset.clone()))]
        } else {
            Vec::new()
        }
    }

    fn act(&self, x: &GroupElement, v: &ViewVector) -> (ViewVector, Exactness) {
        let mut out = ViewVector::new();
        let mut flag = Exactness::Exact;
        for (l, c) in v {
            if let Some((t, k)) = self.module.act(x, &l.top) {
                if !self.in_window(&t) {
                    flag = Exactness::Truncated;
                }
                pbw::add_into(&mut out, &Label::new(Vec::new(), t), &(c * &k));
            }
        }
        (out, flag)
    }

    fn coordinates(&self, offset: &GroupElement, v: &ViewVector) -> Vec<Scalar> {
        vec![v
            .get(&Label::new(Vec::new(), offset.clone()))
            .cloned()
            .unwrap_or_default()]
    }
}

/// The one-dimensional trivial module on the box `[−r, r]^n`.
pub struct TrivialView {
    pub group: GroupSpec,
    pub radius: i64,
}

impl ModuleWindowView for TrivialView {
    fn provenance(&self) -> Provenance {
        Provenance::Trivial
    }

    fn group(&self) -> &GroupSpec {
        &self.group
    }

    fn base_weight(&self) -> Scalar {
        Scalar::zero()
    }

    fn offsets(&self) -> Vec<GroupElement> {
        box_points(self.group.rank(), self.radius)
    }

    fn dim(&self, offset: &GroupElement) -> DimEntry {
        DimEntry {
            lower: usize::from(offset.is_zero()),
            exact: true,
        }
    }

    fn spanning(&self, offset: &GroupElement) -> Vec<ViewVector> {
        if offset.is_zero() {
            vec![single(Label::new(Vec::new(), offset.clone()))]
        } else {
            Vec::new()
        }
    }

    fn act(&self, _x: &GroupElement, _v: &ViewVector) -> (ViewVector, Exactness) {
        (ViewVector::new(), Exactness::Exact)
    }

    fn coordinates(&self, offset: &GroupElement, v: &ViewVector) -> Vec<Scalar> {
        vec![v
            .get(&Label::new(Vec::new(), offset.clone()))
            .cloned()
            .unwrap_or_default()]
    }
}

/// A Verma module on a part-set window; offsets are `−Σ parts`. Weight
/// spaces are those of the Verma module itself (no quotient is taken).
pub struct VermaView {
    pub module: VermaModule,
    pub window: VermaWindow,
}

impl VermaView {
    fn to_view(l: &Label<()>) -> ViewLabel {
        Label::new(l.word.clone(), GroupElement::new(Vec::new()))
    }

    fn from_view(l: &ViewLabel) -> Label<()> {
        Label::new(l.word.clone(), ())
    }

    fn by_weight(&self) -> BTreeMap<GroupElement, Vec<crate::verma::VermaLabel>> {
        self.window.labels_by_weight(self.group().rank())
    }
}

impl ModuleWindowView for VermaView {
    fn provenance(&self) -> Provenance {
        Provenance::Verma
    }

    fn group(&self) -> &GroupSpec {
        self.module.group_spec()
    }

    fn base_weight(&self) -> Scalar {
        self.module.h().clone()
    }

    fn offsets(&self) -> Vec<GroupElement> {
        self.by_weight().keys().map(|t| -t).collect()
    }

    fn dim(&self, offset: &GroupElement) -> DimEntry {
        DimEntry {
            lower: self.by_weight().get(&-offset).map_or(0, Vec::len),
            exact: false,
        }
    }

    fn spanning(&self, offset: &GroupElement) -> Vec<ViewVector> {
        self.by_weight()
            .get(&-offset)
            .map(|ls| {
                ls.iter()
                    .map(|l| single(Self::to_view(&self.module.to_pbw(l))))
                    .collect()
            })
            .unwrap_or_default()
    }

    fn act(&self, x: &GroupElement, v: &ViewVector) -> (ViewVector, Exactness) {
        let mut engine = self.module.engine();
        let vv = v
            .iter()
            .map(|(l, c)| (self.module.from_pbw(&Self::from_view(l)), c.clone()))
            .collect();
        let (out, flag) = self.module.act(&mut engine, x, &vv, &self.window);
        (
            out.iter()
                .map(|(l, c)| (Self::to_view(&self.module.to_pbw(l)), c.clone()))
                .collect(),
            flag,
        )
    }

    fn coordinates(&self, offset: &GroupElement, v: &ViewVector) -> Vec<Scalar> {
        self.spanning(offset)
            .iter()
            .map(|s| {
                let l = s.keys().next().unwrap();
                v.get(l).cloned().unwrap_or_default()
            })
            .collect()
    }
}

/// The irreducible quotient of an induced module on b-levels `+1, 0, −1, …,
/// −depth` and `G₀`-box `[−box_radius, box_radius]`. Offsets are in the
/// coordinates of `G`; vectors carry split-coordinate labels. Dimensions are
/// the ranks of raising functionals on labels of radius `label_radius`.
pub struct InducedView {
    pub module: InducedModule,
    pub depth: usize,
    pub box_radius: i64,
    pub label_radius: i64,
    pub seed: u64,
}

impl InducedView {
    fn split_of(&self, offset: &GroupElement) -> (i64, Vec<i64>) {
        let s = self.module.split().to_split(offset);
        (s.coords()[0], s.coords()[1..].to_vec())
    }
}

impl ModuleWindowView for InducedView {
    fn provenance(&self) -> Provenance {
        Provenance::Induced
    }

    fn group(&self) -> &GroupSpec {
        self.module.split().group()
    }

    fn base_weight(&self) -> Scalar {
        self.module.alpha().clone()
    }

    fn offsets(&self) -> Vec<GroupElement> {
        let mut out = Vec::new();
        for level in (-(self.depth as i64)..=1).rev() {
            for a in self.module.g0_box(self.box_radius) {
                let mut c = vec![level];
                c.extend(a);
                out.push(self.module.split().from_split(&GroupElement::new(c)));
            }
        }
        out
    }

    fn dim(&self, offset: &GroupElement) -> DimEntry {
        let (level, a) = self.split_of(offset);
        if level > 0 {
            return DimEntry { lower: 0, exact: true };
        }
        let i = (-level) as usize;
        let lower = self.module.quotient_rank(i, &a, self.label_radius, self.seed);
        DimEntry {
            lower,
            exact: i == 0 || lower as u64 == crate::induced::double_factorial_bound(i),
        }
    }

    fn spanning(&self, offset: &GroupElement) -> Vec<ViewVector> {
        let (level, a) = self.split_of(offset);
        if level > 0 {
            return Vec::new();
        }
        self.module
            .labels_at((-level) as usize, &a, self.label_radius)
            .into_iter()
            .map(single)
            .collect()
    }

    fn act(&self, x: &GroupElement, v: &ViewVector) -> (ViewVector, Exactness) {
        let mut engine = self.module.engine();
        let window = crate::induced::InducedWindow {
            depth: self.depth,
            radius: self.label_radius,
        };
        self.module
            .act(&mut engine, &self.module.split().to_split(x), v, &window)
    }

    fn coordinates(&self, offset: &GroupElement, v: &ViewVector) -> Vec<Scalar> {
        let (level, _) = self.split_of(offset);
        if level > 0 {
            return Vec::new();
        }
        if level == 0 {
            return vec![v.iter().find(|(l, _)| l.is_empty()).map(|(_, c)| c.clone()).unwrap_or_default()];
        }
        let i = (-level) as usize;
        let words = self.module.raising_words(i, self.label_radius + i as i64);
        let mut engine = self.module.engine();
        self.module
            .functional_matrix(&mut engine, &words, std::slice::from_ref(v))
            .into_iter()
            .map(|mut r| r.pop().unwrap())
            .collect()
    }
}

fn is_zero_vec(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

// ---------------------------------------------------------------------------
// GHW vectors

#[derive(Clone, Debug, Serialize)]
pub struct GhwVector {
    pub offset: GroupElement,
    pub vector: Vec<(String, Scalar)>,
    /// `false` if some annihilation was only observed through a truncated
    /// action.
    pub exact: bool,
}

/// Nonzero elements `Σ n_i B′_i` with `n_i ≥ 0`, `1 ≤ Σ n_i ≤ cone_depth`.
pub fn cone_elements(basis: &[GroupElement], cone_depth: usize) -> Vec<GroupElement> {
    let n = basis.first().map_or(0, GroupElement::rank);
    let mut out = Vec::new();
    let mut frontier = vec![(GroupElement::zero(n), 0usize)];
    for _ in 0..cone_depth {
        let mut next = Vec::new();
        for (x, start) in &frontier {
            for (i, b) in basis.iter().enumerate().skip(*start) {
                let y = x + b;
                out.push(y.clone());
                next.push((y, i));
            }
        }
        frontier = next;
    }
    out
}

fn label_string(l: &ViewLabel) -> String {
    let w: Vec<String> = l.word.iter().map(|z| format!("d{z}")).collect();
    format!("{} v{}", w.join(" "), l.top)
}

/// Window vectors killed by every `d_x`, `x` a nonzero element of the
/// positive cone of `basis` (up to `cone_depth`), at the given offsets (all
/// window offsets if `None`). One representative per independent class.
/// A nontrivial kernel is computed over rational functions, whose cost grows
/// quickly with the weight-space size; restrict `offsets` on deep windows.
pub fn find_ghw_vectors(
    view: &dyn ModuleWindowView,
    basis: &[GroupElement],
    cone_depth: usize,
    offsets: Option<&[GroupElement]>,
) -> Vec<GhwVector> {
    let cone = cone_elements(basis, cone_depth);
    let offsets = offsets.map(<[GroupElement]>::to_vec).unwrap_or_else(|| view.offsets());
    let per: Vec<Vec<GhwVector>> = offsets
        .par_iter()
        .map(|w| ghw_at(view, &cone, w))
        .collect();
    per.into_iter().flatten().collect()
}

fn ghw_at(view: &dyn ModuleWindowView, cone: &[GroupElement], w: &GroupElement) -> Vec<GhwVector> {
    let span = view.spanning(w);
    if span.is_empty() {
        return Vec::new();
    }
    let m = span.len();
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    let mut exact = true;
    for x in cone {
        let target = w + x;
        let mut cols: Vec<Vec<Scalar>> = Vec::with_capacity(m);
        for s in &span {
            let (img, flag) = view.act(x, s);
            let c = view.coordinates(&target, &img);
            if flag != Exactness::Exact && is_zero_vec(&c) {
                exact = false;
            }
            cols.push(c);
        }
        let len = cols.iter().map(Vec::len).max().unwrap_or(0);
        for r in 0..len {
            rows.push(cols.iter().map(|c| c.get(r).cloned().unwrap_or_default()).collect());
        }
    }
    let kernel = if rows.is_empty() {
        (0..m)
            .map(|j| (0..m).map(|k| if j == k { Scalar::one() } else { Scalar::zero() }).collect())
            .collect()
    } else {
        linalg::nullspace(&rows, m)
    };
    // keep combinations that are independent modulo zero classes
    let combos: Vec<ViewVector> = kernel
        .iter()
        .map(|c| {
            let mut v = ViewVector::new();
            for (cj, s) in c.iter().zip(&span) {
                for (l, a) in s {
                    pbw::add_into(&mut v, l, &(cj * a));
                }
            }
            v
        })
        .collect();
    let images: Vec<Vec<Scalar>> = combos.iter().map(|v| view.coordinates(w, v)).collect();
    let len = images.iter().map(Vec::len).max().unwrap_or(0);
    let keep = linalg::independent_rows(
        &images
            .iter()
            .map(|r| (0..len).map(|k| r.get(k).cloned().unwrap_or_default()).collect())
            .collect::<Vec<_>>(),
        len,
    );
    keep.into_iter()
        .map(|i| GhwVector {
            offset: w.clone(),
            vector: combos[i].iter().map(|(l, c)| (label_string(l), c.clone())).collect(),
            exact,
        })
        .collect()
}

// ---------------------------------------------------------------------------
// support rays and the dichotomy

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RayReport {
    /// `x ∈ [−D, D]` with `base + x·g` in the support.
    pub present: Vec<i64>,
    /// `x` certified absent from the support.
    pub absent: Vec<i64>,
    /// `x` whose weight lies outside the window.
    pub outside: Vec<i64>,
    /// `x` whose presence could not be certified either way.
    pub uncertain: Vec<i64>,
    /// Present points form `[−D, m]` (or are empty) within the window.
    pub downward_closed: bool,
    pub inconclusive: bool,
}

pub fn support_ray(
    view: &dyn ModuleWindowView,
    base: &GroupElement,
    g: &GroupElement,
    range: i64,
) -> RayReport {
    let offsets = view.offsets();
    let mut present = Vec::new();
    let mut outside = Vec::new();
    let mut uncertain = Vec::new();
    let mut absent = Vec::new();
    for x in -range..=range {
        let w = base + &g.scale(x);
        if !offsets.contains(&w) {
            outside.push(x);
            continue;
        }
        let d = view.dim(&w);
        if d.lower > 0 {
            present.push(x);
        } else if d.exact {
            absent.push(x);
        } else {
            uncertain.push(x);
        }
    }
    let downward_closed = match present.iter().max() {
        None => true,
        Some(&m) => !absent.iter().any(|&x| x < m),
    };
    RayReport {
        present,
        absent,
        inconclusive: !outside.is_empty() || !uncertain.is_empty(),
        outside,
        uncertain,
        downward_closed,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Dichotomy {
    UniformlyBounded { bound: usize },
    NotUniformlyBounded {
        ray: GroupElement,
        start: GroupElement,
        dims: Vec<usize>,
        /// All but the last dimension are exact, so the growth is proven.
        certified: bool,
    },
}

/// Dimension table of a view over its whole window.
pub fn dims_table(view: &dyn ModuleWindowView) -> BTreeMap<GroupElement, DimEntry> {
    let offsets = view.offsets();
    let dims: Vec<DimEntry> = offsets.par_iter().map(|w| view.dim(w)).collect();
    offsets.into_iter().zip(dims).collect()
}

/// Primitive vectors with entries in `[−r, r]`.
pub fn primitive_vectors(n: usize, r: i64) -> Vec<GroupElement> {
    box_points(n, r)
        .into_iter()
        .filter(|v| crate::foundation::lattice::gcd_all(v.coords()) == 1)
        .collect()
}

/// Primitive parts of the differences of the given offsets.
pub fn window_directions<'a>(offsets: impl Iterator<Item = &'a GroupElement> + Clone) -> Vec<GroupElement> {
    let mut out = std::collections::BTreeSet::new();
    for u in offsets.clone() {
        for w in offsets.clone() {
            let d = w - u;
            let g = crate::foundation::lattice::gcd_all(d.coords());
            if g > 0 {
                out.insert(GroupElement::new(d.coords().iter().map(|c| c / g).collect()));
            }
        }
    }
    out.into_iter().collect()
}

/// Max dimension over the window unless some probed ray carries at least
/// three strictly increasing dimensions; witnesses whose growth is proven
/// (exact dimensions before the last) are preferred. Rays default to the
/// primitive directions joining two window offsets; the dimension table is
/// computed from the view unless supplied.
pub fn dichotomy_probe(
    view: &dyn ModuleWindowView,
    table: Option<&BTreeMap<GroupElement, DimEntry>>,
    rays: Option<&[GroupElement]>,
) -> Dichotomy {
    let computed;
    let table = match table {
        Some(t) => t,
        None => {
            computed = dims_table(view);
            &computed
        }
    };
    let default_rays;
    let rays = match rays {
        Some(r) => r,
        None => {
            default_rays = window_directions(table.keys());
            &default_rays
        }
    };
    let mut fallback = None;
    for r in rays {
        for start in table.keys() {
            if table.contains_key(&(start - r)) {
                continue;
            }
            let seq: Vec<&DimEntry> = (0..)
                .map_while(|k| table.get(&(start + &r.scale(k))))
                .collect();
            let dims: Vec<usize> = seq.iter().map(|d| d.lower).collect();
            // longest strictly increasing run
            let mut best = (0, 1);
            let mut cur = (0, 1);
            for k in 1..dims.len() {
                if dims[k] > dims[k - 1] {
                    cur.1 += 1;
                } else {
                    cur = (k, 1);
                }
                if cur.1 > best.1 {
                    best = cur;
                }
            }
            if best.1 >= 3 {
                let run = &seq[best.0..best.0 + best.1];
                let certified = run[..run.len() - 1].iter().all(|d| d.exact);
                let witness = Dichotomy::NotUniformlyBounded {
                    ray: r.clone(),
                    start: start + &r.scale(best.0 as i64),
                    dims: run.iter().map(|d| d.lower).collect(),
                    certified,
                };
                if certified {
                    return witness;
                }
                fallback.get_or_insert(witness);
            }
        }
    }
    if let Some(w) = fallback {
        return w;
    }
    Dichotomy::UniformlyBounded {
        bound: table.values().map(|d| d.lower).max().unwrap_or(0),
    }
}

// ---------------------------------------------------------------------------
// the dispatcher

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "family")]
pub enum ClassificationVerdict {
    IntermediateSeries {
        /// `α` reduced modulo `G`.
        alpha: Scalar,
        beta: Scalar,
        notes: Vec<String>,
    },
    Induced {
        b: GroupElement,
        g0: Vec<GroupElement>,
        /// `α` reduced modulo `G₀`.
        alpha: Scalar,
        beta: Scalar,
        notes: Vec<String>,
    },
    Unknown {
        reason: String,
    },
}

impl ClassificationVerdict {
    fn unknown(reason: impl Into<String>) -> Self {
        ClassificationVerdict::Unknown {
            reason: reason.into(),
        }
    }
}

pub const TRIVIAL_NOTE: &str = "trivial module excluded: classification covers nontrivial modules";

/// `α` of an intermediate module normalized as in verdicts.
pub fn normalize_alpha(group: &GroupSpec, alpha: &Scalar, basis: &[GroupElement]) -> Scalar {
    group.normalize_mod(alpha, basis).0
}

/// `c` with `d_x u = c·u′`, where `u` and `u′` are the sole spanning vectors
/// at `w` and `w + x`; `None` if unavailable.
fn action_coefficient(view: &dyn ModuleWindowView, w: &GroupElement, x: &GroupElement) -> Option<Scalar> {
    let t = w + x;
    let src = view.spanning(w);
    let dst = view.spanning(&t);
    if src.len() != 1 || dst.len() != 1 || !view.in_window(&t) {
        return None;
    }
    let (img, _) = view.act(x, &src[0]);
    let a = view.coordinates(&t, &img);
    let b = view.coordinates(&t, &dst[0]);
    if a.len() != 1 || b.len() != 1 || b[0].is_zero() {
        return None;
    }
    a[0].checked_div(&b[0])
}

/// Fits `c(x, w) = weight(w) + embed(x)·β` over samples `(w, x)`; needs two
/// samples with distinct `embed(x)` to pin `β`.
fn recover_beta(view: &dyn ModuleWindowView, samples: &[(GroupElement, GroupElement)]) -> Result<Scalar, String> {
    let group = view.group();
    let mut fits: Vec<(Scalar, Scalar)> = Vec::new();
    for (w, x) in samples {
        if let Some(c) = action_coefficient(view, w, x) {
            let ex = group.embed_unchecked(x);
            fits.push((ex, &c - &view.weight(w)));
        }
    }
    let Some((e0, r0)) = fits.first().cloned() else {
        return Err("no usable action sample".into());
    };
    let beta = r0.checked_div(&e0).ok_or("degenerate action sample")?;
    let distinct = fits.iter().any(|(e, _)| *e != e0);
    if !distinct {
        return Err(format!(
            "one independent action sample: beta ∈ {{β : {e0}·β = {r0}}} is an affine family"
        ));
    }
    for (e, r) in &fits {
        if &(e * &beta) != r {
            return Err(format!("inconsistent data: sample gives {r} but β = {beta} predicts {}", e * &beta));
        }
    }
    Ok(beta)
}

fn is_trivial(view: &dyn ModuleWindowView, table: &BTreeMap<GroupElement, DimEntry>) -> bool {
    let support: Vec<&GroupElement> = table.iter().filter(|(_, d)| d.lower > 0).map(|(w, _)| w).collect();
    if support.len() != 1 || !view.weight(support[0]).is_zero() {
        return false;
    }
    let w = support[0];
    let n = view.group().rank();
    view.spanning(w).iter().all(|s| {
        box_points(n, 1)
            .iter()
            .all(|x| is_zero_vec(&view.coordinates(&(w + x), &view.act(x, s).0)))
    })
}

/// Affine rank of a point set.
fn affine_rank(points: &[&GroupElement]) -> usize {
    let Some(p0) = points.first() else { return 0 };
    let n = p0.rank();
    let rows: Vec<Vec<num_rational::BigRational>> = points[1..]
        .iter()
        .map(|p| {
            (*p - *p0)
                .coords()
                .iter()
                .map(|&c| num_rational::BigRational::from_integer(c.into()))
                .collect()
        })
        .collect();
    linalg::rank(&rows, n)
}

/// The primitive functional `k` (entries in `[−r, r]`) for which the support
/// lies in `{k·x ≤ m}`, the face `{k·x = m}` has affine rank `n − 1`, and
/// the most window points lie strictly beyond the face.
pub fn support_half_space(
    view: &dyn ModuleWindowView,
    table: &BTreeMap<GroupElement, DimEntry>,
    r: i64,
) -> Option<(GroupElement, i64)> {
    let n = view.group().rank();
    let support: Vec<&GroupElement> = table.iter().filter(|(_, d)| d.lower > 0).map(|(w, _)| w).collect();
    if support.is_empty() {
        return None;
    }
    let mut best: Option<(usize, GroupElement, i64)> = None;
    for k in primitive_vectors(n, r) {
        let m = support.iter().map(|x| x.dot(k.coords())).max().unwrap();
        let face: Vec<&GroupElement> = support
            .iter()
            .filter(|x| x.dot(k.coords()) == m)
            .copied()
            .collect();
        if affine_rank(&face) + 1 != n {
            continue;
        }
        let beyond = table.keys().filter(|x| x.dot(k.coords()) > m).count();
        if beyond > 0 && best.as_ref().is_none_or(|(b, _, _)| beyond > *b) {
            best = Some((beyond, k, m));
        }
    }
    best.map(|(_, k, m)| (k, m))
}

pub fn classify_module(view: &dyn ModuleWindowView) -> ClassificationVerdict {
    let table = dims_table(view);
    if table.values().all(|d| d.lower == 0) {
        return ClassificationVerdict::unknown("empty window");
    }
    if is_trivial(view, &table) {
        return ClassificationVerdict::unknown(TRIVIAL_NOTE);
    }
    let group = view.group().clone();
    let n = group.rank();
    match dichotomy_probe(view, Some(&table), None) {
        Dichotomy::UniformlyBounded { bound } if bound <= 1 => classify_intermediate(view, &table),
        Dichotomy::UniformlyBounded { bound } => ClassificationVerdict::unknown(format!(
            "uniformly bounded by {bound} > 1 within the window: not an irreducible module of either family"
        )),
        Dichotomy::NotUniformlyBounded { .. } if n < 2 => {
            ClassificationVerdict::unknown("weight spaces grow but G has rank 1")
        }
        Dichotomy::NotUniformlyBounded { ray, .. } => classify_induced(view, &table, &ray),
    }
}

fn classify_intermediate(
    view: &dyn ModuleWindowView,
    table: &BTreeMap<GroupElement, DimEntry>,
) -> ClassificationVerdict {
    let group = view.group();
    let n = group.rank();
    let units: Vec<GroupElement> = (0..n).map(|i| GroupElement::unit(n, i)).collect();
    let steps: Vec<GroupElement> = units.iter().flat_map(|u| [1, 2, -1, -2].map(|k| u.scale(k))).collect();
    let samples: Vec<(GroupElement, GroupElement)> = table
        .iter()
        .filter(|(_, d)| d.lower > 0)
        .flat_map(|(w, _)| steps.iter().map(move |x| (w.clone(), x.clone())))
        .collect();
    let beta = match recover_beta(view, &samples) {
        Ok(b) => b,
        Err(e) => return ClassificationVerdict::unknown(e),
    };
    let alpha = normalize_alpha(group, &view.base_weight(), &units);
    let mut notes = Vec::new();
    if group.contains(&alpha) && (beta.is_zero() || beta.is_one()) {
        notes.push("α ∈ G and β ∈ {0, 1}: the window shows the punctured subquotient V′".into());
    }
    ClassificationVerdict::IntermediateSeries { alpha, beta, notes }
}

fn classify_induced(
    view: &dyn ModuleWindowView,
    table: &BTreeMap<GroupElement, DimEntry>,
    ray: &GroupElement,
) -> ClassificationVerdict {
    let group = view.group().clone();
    let Some((k, m)) = support_half_space(view, table, 2) else {
        return ClassificationVerdict::unknown("no supporting half-space with a full boundary face");
    };
    let split = match SplitGroup::canonical(group.clone(), k.coords()) {
        Ok(s) => s,
        Err(e) => return ClassificationVerdict::unknown(e.to_string()),
    };
    let b = split.b();
    let g0 = split.g0();
    let face: Vec<GroupElement> = table
        .iter()
        .filter(|(x, d)| d.lower > 0 && x.dot(k.coords()) == m)
        .map(|(x, _)| x.clone())
        .collect();
    // the face must consist of GHW vectors for the basis {b, b + g_i}
    let mut cone_basis = vec![b.clone()];
    cone_basis.extend(g0.iter().map(|g| &b + g));
    let ghw = find_ghw_vectors(view, &cone_basis, 2, Some(&face));
    if ghw.len() < face.len() {
        return ClassificationVerdict::unknown(format!(
            "boundary face of functional {k} is not annihilated by the cone of {{b, b+g_i}}"
        ));
    }
    let steps: Vec<GroupElement> = g0.iter().flat_map(|g| [1, 2, -1, -2].map(|k| g.scale(k))).collect();
    let samples: Vec<(GroupElement, GroupElement)> = face
        .iter()
        .flat_map(|w| steps.iter().map(move |x| (w.clone(), x.clone())))
        .filter(|(w, x)| face.contains(&(w + x)))
        .collect();
    let beta = match recover_beta(view, &samples) {
        Ok(b) => b,
        Err(e) => return ClassificationVerdict::unknown(e),
    };
    // α + G₀ is the set of top-level weights
    let top = &face[0];
    let alpha = normalize_alpha(&group, &view.weight(top), &g0);
    let notes = vec![
        format!("weight spaces grow along {ray}"),
        format!("support lies in {{x : {k}·x ≤ {m}}}"),
    ];
    ClassificationVerdict::Induced {
        b,
        g0,
        alpha,
        beta,
        notes,
    }
}

// ---------------------------------------------------------------------------
// the independence family d_{−ḡ}^{k−j} d_{−jḡ} v

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Claim4Entry {
    pub k: usize,
    pub rank: usize,
    /// `Some(true)` certified independent, `Some(false)` certified
    /// dependent, `None` undecided (lower-bound rank only).
    pub independent: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Claim4Report {
    pub entries: Vec<Claim4Entry>,
    /// `⟨d_{−ḡ}v, d_{−ḡ}v⟩`, resp. the top coefficient of `d_ḡ d_{−ḡ} v`:
    /// `d_{−ḡ}v = 0` in the irreducible quotient exactly on its zero locus.
    pub h1: Scalar,
}

fn family_words(gbar: &GroupElement, k: usize) -> Vec<Vec<GroupElement>> {
    let neg = -gbar;
    (1..=k)
        .map(|j| {
            let mut w = vec![neg.clone(); k - j];
            w.push(gbar.scale(-(j as i64)));
            w
        })
        .collect()
}

/// Family in the irreducible quotient of a Verma module, certified by the
/// exact symbolic rank of its contravariant Gram matrix. `gbar` must be
/// positive.
pub fn claim4_independence_verma(
    module: &VermaModule,
    gbar: &GroupElement,
    kmax: usize,
) -> Result<Claim4Report, Error> {
    module.group_spec().check(gbar)?;
    if !module.order().is_positive(gbar) {
        return Err(Error::InvalidArgument(format!("{gbar} is not positive")));
    }
    let mut engine = module.engine();
    let mut entries = Vec::new();
    let mut h1 = Scalar::zero();
    for k in 1..=kmax {
        let vecs: Vec<pbw::Vector<()>> = family_words(gbar, k)
            .iter()
            .map(|w| engine.normalize(w, &()))
            .collect();
        let mut gram = vec![vec![Scalar::zero(); k]; k];
        for i in 0..k {
            for j in 0..k {
                let mut acc = Scalar::zero();
                for (l, c) in &vecs[i] {
                    let raise: Vec<GroupElement> = l.word.iter().rev().map(|z| -z).collect();
                    let r = engine.apply_word(&raise, &vecs[j]);
                    if let Some(v) = r.get(&Label::new(Vec::new(), ())) {
                        acc += &(c * v);
                    }
                }
                gram[i][j] = acc;
            }
        }
        if k == 1 {
            h1 = gram[0][0].clone();
        }
        let rank = linalg::rank_symbolic(&gram, k);
        entries.push(Claim4Entry {
            k,
            rank,
            independent: Some(rank == k),
        });
    }
    Ok(Claim4Report { entries, h1 })
}

/// Family in the irreducible quotient of an induced module, applied to the
/// top vector `v_t`. `gbar` (coordinates of `G`) must have positive b-level.
/// Independence is certified when the raising-functional rank at random
/// rational points reaches `k`; dependence only for `k = 1`.
pub fn claim4_independence_induced(
    module: &InducedModule,
    gbar: &GroupElement,
    t: &GroupElement,
    kmax: usize,
    seed: u64,
) -> Result<Claim4Report, Error> {
    let split = module.split();
    split.group().check(gbar)?;
    let g = split.to_split(gbar);
    let lvl = g.coords()[0];
    if lvl <= 0 {
        return Err(Error::InvalidArgument(format!("{gbar} has b-level {lvl} ≤ 0")));
    }
    if !module.prime().in_support(t) {
        return Err(Error::InvalidArgument(format!("v_{t} is not a basis vector of V′")));
    }
    let spread = g.coords()[1..].iter().map(|c| c.abs()).max().unwrap_or(0);
    let mut engine = module.engine();
    let mut entries = Vec::new();
    let mut h1 = Scalar::zero();
    for k in 1..=kmax {
        let vecs: Vec<_> = family_words(&g, k)
            .iter()
            .map(|w| engine.normalize(w, t))
            .collect();
        let level = k * lvl as usize;
        let words = module.raising_words(level, k as i64 * spread + t.coords().iter().map(|c| c.abs()).max().unwrap_or(0) + 1);
        let m = module.functional_matrix(&mut engine, &words, &vecs);
        if k == 1 {
            let top = engine.apply_word(std::slice::from_ref(&g), &vecs[0]);
            h1 = top.get(&Label::new(Vec::new(), t.clone())).cloned().unwrap_or_default();
        }
        let rank = linalg::specialized_rank(&m, k, seed, 2);
        let independent = if rank == k {
            Some(true)
        } else if k == 1 && m.iter().all(|r| r.iter().all(Scalar::is_zero)) {
            Some(false)
        } else {
            None
        };
        entries.push(Claim4Entry { k, rank, independent });
    }
    Ok(Claim4Report { entries, h1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foundation::{OrderSpec, Var};
    use crate::intermediate::IntermediateModule;

    fn ge(v: &[i64]) -> GroupElement {
        GroupElement::new(v.to_vec())
    }

    fn z2b() -> GroupSpec {
        GroupSpec::with_values(vec![Scalar::one(), Scalar::var(Var::Gen(1))]).unwrap()
    }

    fn induced_view(alpha: Scalar, beta: Scalar) -> InducedView {
        let split = SplitGroup::new(z2b(), ge(&[1, 0]), vec![ge(&[0, 1])]).unwrap();
        InducedView {
            module: InducedModule::build(alpha, beta, split),
            depth: 2,
            box_radius: 1,
            label_radius: 1,
            seed: 3,
        }
    }

    #[test]
    fn intermediate_round_trip() {
        let m = IntermediateModule::new(z2b(), Scalar::parse("alpha + 5/2").unwrap(), Scalar::var(Var::Beta));
        let v = IntermediateView { module: m.prime(), radius: 2 };
        match classify_module(&v) {
            ClassificationVerdict::IntermediateSeries { alpha, beta, .. } => {
                assert_eq!(alpha, Scalar::parse("alpha + 1/2").unwrap());
                assert_eq!(beta, Scalar::var(Var::Beta));
            }
            other => panic!("{other:?}"),
        }
        assert!(find_ghw_vectors(&v, &[ge(&[1, 0]), ge(&[1, 1])], 2, None).is_empty());
    }

    #[test]
    fn trivial_is_unknown() {
        let v = TrivialView { group: z2b(), radius: 1 };
        assert_eq!(classify_module(&v), ClassificationVerdict::unknown(TRIVIAL_NOTE));
        assert_eq!(
            dichotomy_probe(&v, None, None),
            Dichotomy::UniformlyBounded { bound: 1 }
        );
    }

    #[test]
    fn induced_probes() {
        let v = induced_view(Scalar::var(Var::Alpha), Scalar::var(Var::Beta));
        let table = dims_table(&v);
        match dichotomy_probe(&v, Some(&table), Some(&[ge(&[-1, 0])])) {
            Dichotomy::NotUniformlyBounded { certified, .. } => assert!(certified),
            other => panic!("{other:?}"),
        }
        let column: Vec<usize> = (0..3).map(|i| table[&ge(&[-i, 0])].lower).collect();
        assert_eq!(&column[..2], &[1, 3]);
        assert!(column[2] > 3 && column[2] <= 15);
        let ray = support_ray(&v, &ge(&[0, 0]), &ge(&[1, 0]), 3);
        assert_eq!(ray.present, vec![-2, -1, 0]);
        assert!(ray.downward_closed);
        let top: Vec<GroupElement> = (-1..=1).flat_map(|a| [ge(&[0, a]), ge(&[1, a])]).collect();
        let ghw = find_ghw_vectors(&v, &[ge(&[1, 0]), ge(&[1, 1])], 2, Some(&top));
        assert_eq!(ghw.len(), 3);
        assert!(ghw.iter().all(|g| g.offset.coords()[0] == 0 && g.exact));
        match classify_module(&v) {
            ClassificationVerdict::Induced { b, g0, alpha, beta, .. } => {
                assert_eq!((b, g0), (ge(&[1, 0]), vec![ge(&[0, 1])]));
                assert_eq!(alpha, Scalar::var(Var::Alpha));
                assert_eq!(beta, Scalar::var(Var::Beta));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn claim4_small() {
        let g = GroupSpec::with_values(vec![Scalar::one()]).unwrap();
        let m = VermaModule::new(g, OrderSpec::lex(1), Scalar::var(Var::CentralCharge), Scalar::var(Var::H)).unwrap();
        let r = claim4_independence_verma(&m, &ge(&[2]), 2).unwrap();
        assert_eq!(r.h1, Scalar::parse("-4*h + cdot/2").unwrap());
        assert!(r.entries.iter().all(|e| e.independent == Some(true)));
        let v = induced_view(Scalar::var(Var::Alpha), Scalar::var(Var::Beta));
        let r = claim4_independence_induced(&v.module, &ge(&[1, 1]), &ge(&[0]), 2, 1).unwrap();
        assert_eq!(r.h1, Scalar::parse("-2*(1 + b2)*alpha").unwrap());
        assert!(r.entries.iter().all(|e| e.independent == Some(true)), "{r:?}");
    }
}
