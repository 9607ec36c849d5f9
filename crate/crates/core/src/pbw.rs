//! Straightening of PBW words against a generating subspace.
//!
//! A module is presented as `U(L₋) ⊗ T` where `L₋` is spanned by the
//! "lowering" `d_x` and `T` (the top) is a module for the remaining
//! generators. Basis labels are words `d_{z₁} ⋯ d_{z_k} ⊗ t` whose letters are
//! non-decreasing for a fixed total order on lowering indices.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt::Debug;
use std::hash::Hash;

use crate::algebra::Virasoro;
use crate::foundation::{GroupElement, GroupSpec, Scalar};

pub trait PbwContext {
    type Top: Clone + Ord + Hash + Debug;

    /// Group whose embedding supplies the structure constants.
    fn group(&self) -> &GroupSpec;
    fn is_lowering(&self, x: &GroupElement) -> bool;
    /// Order of letters in a normal word (`Less` = further left).
    fn cmp_lowering(&self, a: &GroupElement, b: &GroupElement) -> Ordering;
    /// `d_x t` for non-lowering `x ≠ 0`, expanded in the top basis.
    fn act_top(&self, x: &GroupElement, t: &Self::Top) -> Vec<(Self::Top, Scalar)>;
    fn top_weight(&self, t: &Self::Top) -> Scalar;
    fn central_charge(&self) -> Scalar;
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label<T> {
    pub word: Vec<GroupElement>,
    pub top: T,
}

impl<T> Label<T> {
    pub fn new(word: Vec<GroupElement>, top: T) -> Self {
        Label { word, top }
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }
}

pub type Vector<T> = BTreeMap<Label<T>, Scalar>;

pub fn add_into<T: Ord + Clone>(acc: &mut Vector<T>, label: &Label<T>, c: &Scalar) {
    if c.is_zero() {
        return;
    }
    if let Some(e) = acc.get_mut(label) {
        *e += c;
        if e.is_zero() {
            acc.remove(label);
        }
    } else {
        acc.insert(label.clone(), c.clone());
    }
}

pub fn scale_vec<T: Ord + Clone>(v: &Vector<T>, s: &Scalar) -> Vector<T> {
    if s.is_zero() {
        return Vector::new();
    }
    v.iter().map(|(k, c)| (k.clone(), c * s)).collect()
}

pub fn add_vec<T: Ord + Clone>(a: &Vector<T>, b: &Vector<T>) -> Vector<T> {
    let mut out = a.clone();
    for (k, c) in b {
        add_into(&mut out, k, c);
    }
    out
}

pub fn sub_vec<T: Ord + Clone>(a: &Vector<T>, b: &Vector<T>) -> Vector<T> {
    add_vec(a, &scale_vec(b, &Scalar::from_i64(-1)))
}

/// Memoizing straightening engine for one context.
pub struct Engine<'a, C: PbwContext> {
    ctx: &'a C,
    vir: Virasoro,
    cache: HashMap<(GroupElement, Label<C::Top>), Vector<C::Top>>,
}

impl<'a, C: PbwContext> Engine<'a, C> {
    pub fn new(ctx: &'a C) -> Self {
        Engine {
            ctx,
            vir: Virasoro::new(ctx.group().clone()),
            cache: HashMap::new(),
        }
    }

    pub fn context(&self) -> &C {
        self.ctx
    }

    pub fn weight(&self, label: &Label<C::Top>) -> Scalar {
        let mut w = self.ctx.top_weight(&label.top);
        for z in &label.word {
            w += &self.ctx.group().embed_unchecked(z);
        }
        w
    }

    pub fn is_normal(&self, word: &[GroupElement]) -> bool {
        word.iter().all(|z| self.ctx.is_lowering(z))
            && word
                .windows(2)
                .all(|w| self.ctx.cmp_lowering(&w[0], &w[1]) != Ordering::Greater)
    }

    /// `d_x · label`, in normal form.
    pub fn apply(&mut self, x: &GroupElement, label: &Label<C::Top>) -> Vector<C::Top> {
        let key = (x.clone(), label.clone());
        if let Some(v) = self.cache.get(&key) {
            return v.clone();
        }
        let out = self.apply_uncached(x, label);
        self.cache.insert(key, out.clone());
        out
    }

    fn apply_uncached(&mut self, x: &GroupElement, label: &Label<C::Top>) -> Vector<C::Top> {
        let mut out = Vector::new();
        if x.is_zero() {
            add_into(&mut out, label, &self.weight(label));
            return out;
        }
        let lowering = self.ctx.is_lowering(x);
        let Some(z1) = label.word.first() else {
            if lowering {
                out.insert(Label::new(vec![x.clone()], label.top.clone()), Scalar::one());
            } else {
                for (t, c) in self.ctx.act_top(x, &label.top) {
                    add_into(&mut out, &Label::new(Vec::new(), t), &c);
                }
            }
            return out;
        };
        if lowering && self.ctx.cmp_lowering(x, z1) != Ordering::Greater {
            let mut word = Vec::with_capacity(label.word.len() + 1);
            word.push(x.clone());
            word.extend(label.word.iter().cloned());
            out.insert(Label::new(word, label.top.clone()), Scalar::one());
            return out;
        }
        // d_x d_{z1} R = d_{z1} (d_x R) + [d_x, d_{z1}] R
        let z1 = z1.clone();
        let rest = Label::new(label.word[1..].to_vec(), label.top.clone());
        for (l, c) in self.apply(x, &rest) {
            for (l2, c2) in self.apply(&z1, &l) {
                add_into(&mut out, &l2, &(&c * &c2));
            }
        }
        let (lin, cen) = self.vir.structure(x, &z1);
        if !lin.is_zero() {
            for (l, c) in self.apply(&(x + &z1), &rest) {
                add_into(&mut out, &l, &(&lin * &c));
            }
        }
        if !cen.is_zero() {
            let cc = &cen * &self.ctx.central_charge();
            add_into(&mut out, &rest, &cc);
        }
        out
    }

    pub fn apply_vec(&mut self, x: &GroupElement, v: &Vector<C::Top>) -> Vector<C::Top> {
        let mut out = Vector::new();
        for (l, c) in v {
            for (l2, c2) in self.apply(x, l) {
                add_into(&mut out, &l2, &(c * &c2));
            }
        }
        out
    }

    /// `d_{w₁} ⋯ d_{w_m} · v` (the rightmost letter acts first).
    pub fn apply_word(&mut self, word: &[GroupElement], v: &Vector<C::Top>) -> Vector<C::Top> {
        let mut cur = v.clone();
        for x in word.iter().rev() {
            if cur.is_empty() {
                break;
            }
            cur = self.apply_vec(x, &cur);
        }
        cur
    }

    /// Normal form of an arbitrary word applied to a top vector.
    pub fn normalize(&mut self, word: &[GroupElement], top: &C::Top) -> Vector<C::Top> {
        let mut v = Vector::new();
        v.insert(Label::new(Vec::new(), top.clone()), Scalar::one());
        self.apply_word(word, &v)
    }

    pub fn cache_len(&self) -> usize {
        self.cache.len()
    }
}

/// Non-decreasing sequences (multisets) of length `0..=max_len` drawn from
/// `parts`, which must already be sorted.
pub fn multisets<T: Clone>(parts: &[T], max_len: usize) -> Vec<Vec<T>> {
    let mut out = vec![Vec::new()];
    let mut frontier: Vec<(Vec<T>, usize)> = vec![(Vec::new(), 0)];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for (seq, start) in &frontier {
            for (i, p) in parts.iter().enumerate().skip(*start) {
                let mut s = seq.clone();
                s.push(p.clone());
                out.push(s.clone());
                next.push((s, i));
            }
        }
        frontier = next;
    }
    out
}
