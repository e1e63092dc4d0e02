//! Graded quotients of T(V): pre-Nichols algebras given by relations, and the
//! Nichols algebra, handled one multidegree at a time.
//!
//! For relations, the ideal slice in degree d is the span of u r v over
//! generators r and words u, v. Single-word generators are treated
//! combinatorially: a word containing one of them as a factor lies in the
//! ideal, so those words are dropped before any linear algebra.
//!
//! For the Nichols algebra the slice is the largest subspace J_d with
//! partial_i^L(J_d) inside J_{d - a_i} for every i, starting from J = 0 in
//! degrees 0 and 1. It is computed as a kernel.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use crate::bichar::IntVec;
use crate::cyclo::CycNum;
use crate::error::{Error, Result};
use crate::freealg::{word_count, words_of_degree, FreeAlgebra, FreeElem, TensorElem, Word};
use crate::linalg::{Echelon, SparseVec};

/// Default bound on the number of words in one multidegree.
pub const DEFAULT_WORD_CAP: u128 = 200_000;

#[derive(Debug, Clone)]
pub struct RelationSet {
    pub label: String,
    pub generators: Vec<FreeElem>,
}

impl RelationSet {
    pub fn new(label: impl Into<String>, generators: Vec<FreeElem>) -> Self {
        Self {
            label: label.into(),
            generators,
        }
    }

    pub fn empty() -> Self {
        Self::new("free", Vec::new())
    }
}

#[derive(Debug, Clone)]
pub enum IdealKind {
    Relations(RelationSet),
    Nichols,
}

/// The ideal in one multidegree.
#[derive(Debug)]
pub struct IdealSlice {
    pub degree: IntVec,
    pub word_count: usize,
    /// Words lying in the ideal because they contain a single-word relation.
    pub dead_words: usize,
    echelon: Echelon<Word>,
    monomials: Arc<Vec<Word>>,
}

impl IdealSlice {
    pub fn rank(&self) -> usize {
        self.dead_words + self.echelon.rank()
    }

    pub fn quotient_dim(&self) -> usize {
        self.word_count - self.rank()
    }

    fn is_dead(&self, w: &Word) -> bool {
        self.monomials.iter().any(|m| w.contains_factor(m))
    }

    /// Reduces modulo the slice. Terms must have this slice's degree.
    pub fn reduce(&self, v: SparseVec<Word>) -> SparseVec<Word> {
        let v: SparseVec<Word> = if self.monomials.is_empty() {
            v
        } else {
            v.into_iter().filter(|(w, _)| !self.is_dead(w)).collect()
        };
        self.echelon.reduce(v)
    }

    /// Words that are neither dead nor leading words; they index a basis of the quotient.
    pub fn standard_words(&self) -> Vec<Word> {
        words_of_degree(&self.degree)
            .into_iter()
            .filter(|w| !self.is_dead(w) && !self.echelon.is_lead(w))
            .collect()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuotientCaps {
    pub words: u128,
}

impl Default for QuotientCaps {
    fn default() -> Self {
        Self {
            words: DEFAULT_WORD_CAP,
        }
    }
}

/// T(V) modulo an ideal, with slices computed on demand and cached by multidegree.
pub struct QuotientView {
    algebra: Arc<FreeAlgebra>,
    kind: IdealKind,
    caps: QuotientCaps,
    monomials: Arc<Vec<Word>>,
    others: Vec<(IntVec, FreeElem)>,
    memo: Mutex<HashMap<IntVec, Arc<IdealSlice>>>,
}

impl QuotientView {
    pub fn new(algebra: Arc<FreeAlgebra>, kind: IdealKind, caps: QuotientCaps) -> Result<Self> {
        let theta = algebra.theta();
        let mut monomials = Vec::new();
        let mut others = Vec::new();
        if let IdealKind::Relations(rs) = &kind {
            for g in &rs.generators {
                if g.is_zero() {
                    continue;
                }
                let d = g.homogeneous_degree(theta).ok_or(Error::Inhomogeneous)?;
                if g.len() == 1 {
                    monomials.push(g.terms().keys().next().unwrap().clone());
                } else {
                    others.push((d, g.clone()));
                }
            }
        }
        Ok(Self {
            algebra,
            kind,
            caps,
            monomials: Arc::new(monomials),
            others,
            memo: Mutex::new(HashMap::new()),
        })
    }

    pub fn relations(algebra: Arc<FreeAlgebra>, rs: RelationSet) -> Result<Self> {
        Self::new(algebra, IdealKind::Relations(rs), QuotientCaps::default())
    }

    pub fn nichols(algebra: Arc<FreeAlgebra>) -> Self {
        Self::new(algebra, IdealKind::Nichols, QuotientCaps::default())
            .expect("no relations to validate")
    }

    pub fn algebra(&self) -> &Arc<FreeAlgebra> {
        &self.algebra
    }

    pub fn kind(&self) -> &IdealKind {
        &self.kind
    }

    pub fn caps(&self) -> QuotientCaps {
        self.caps
    }

    pub fn slice(&self, delta: &IntVec) -> Result<Arc<IdealSlice>> {
        if delta.len() != self.algebra.theta() || !delta.is_nonneg() {
            return Err(Error::InvalidInput(format!("bad multidegree {delta}")));
        }
        if let Some(s) = self.memo.lock().unwrap().get(delta) {
            return Ok(s.clone());
        }
        let n = word_count(delta);
        if n > self.caps.words {
            return Err(Error::CapExceeded(format!(
                "multidegree {delta} has {n} words, over the cap of {}",
                self.caps.words
            )));
        }
        let slice = Arc::new(match &self.kind {
            IdealKind::Relations(_) => self.relation_slice(delta)?,
            IdealKind::Nichols => self.nichols_slice(delta)?,
        });
        self.memo
            .lock()
            .unwrap()
            .entry(delta.clone())
            .or_insert_with(|| slice.clone());
        Ok(slice)
    }

    fn is_dead(&self, w: &Word) -> bool {
        self.monomials.iter().any(|m| w.contains_factor(m))
    }

    fn relation_slice(&self, delta: &IntVec) -> Result<IdealSlice> {
        let words = words_of_degree(delta);
        let dead = words.iter().filter(|w| self.is_dead(w)).count();
        let mut echelon = Echelon::new();
        let mut cache: HashMap<IntVec, Vec<Word>> = HashMap::new();
        let live_words = |d: &IntVec, cache: &mut HashMap<IntVec, Vec<Word>>| -> Vec<Word> {
            cache
                .entry(d.clone())
                .or_insert_with(|| {
                    words_of_degree(d)
                        .into_iter()
                        .filter(|w| !self.is_dead(w))
                        .collect()
                })
                .clone()
        };
        for (d, r) in &self.others {
            if !d.le(delta) {
                continue;
            }
            let rest = delta - d;
            for du in sub_degrees(&rest) {
                let dv = &rest - &du;
                let us = live_words(&du, &mut cache);
                let vs = live_words(&dv, &mut cache);
                for u in &us {
                    for v in &vs {
                        let mut vec = SparseVec::new();
                        for (w, c) in r.terms() {
                            let full = u.concat(w).concat(v);
                            if !self.is_dead(&full) {
                                vec.insert(full, c.clone());
                            }
                        }
                        if !vec.is_empty() {
                            echelon.insert(vec)?;
                        }
                    }
                }
            }
        }
        Ok(IdealSlice {
            degree: delta.clone(),
            word_count: words.len(),
            dead_words: dead,
            echelon,
            monomials: self.monomials.clone(),
        })
    }

    fn nichols_slice(&self, delta: &IntVec) -> Result<IdealSlice> {
        let words = words_of_degree(delta);
        let mut echelon = Echelon::new();
        if delta.total() >= 2 {
            let theta = self.algebra.theta();
            let lower: Vec<Option<Arc<IdealSlice>>> = (0..theta)
                .map(|i| {
                    if delta.0[i] > 0 {
                        self.slice(&(delta - &IntVec::unit(theta, i))).map(Some)
                    } else {
                        Ok(None)
                    }
                })
                .collect::<Result<_>>()?;
            let one = CycNum::one(self.algebra.ctx());
            let mut images: Echelon<(u8, Word)> = Echelon::tracked(one.clone());
            for w in &words {
                let x = FreeElem::from_word(w.clone(), one.clone());
                let mut img: SparseVec<(u8, Word)> = SparseVec::new();
                for (i, low) in lower.iter().enumerate() {
                    let Some(low) = low else { continue };
                    let d = self.algebra.partial_l(&x, i)?;
                    let red = low.reduce(d.into_terms());
                    for (u, c) in red {
                        img.insert((i as u8, u), c);
                    }
                }
                if let Some(rel) = images.insert(img)? {
                    let kernel: SparseVec<Word> = rel
                        .into_iter()
                        .map(|(k, c)| (words[k].clone(), c))
                        .collect();
                    echelon.insert(kernel)?;
                }
            }
        }
        Ok(IdealSlice {
            degree: delta.clone(),
            word_count: words.len(),
            dead_words: 0,
            echelon,
            monomials: self.monomials.clone(),
        })
    }

    pub fn quotient_dim(&self, delta: &IntVec) -> Result<usize> {
        Ok(self.slice(delta)?.quotient_dim())
    }

    /// Normal form modulo the ideal, taken degree by degree.
    pub fn normal_form(&self, x: &FreeElem) -> Result<FreeElem> {
        let theta = self.algebra.theta();
        let mut parts: BTreeMap<IntVec, SparseVec<Word>> = BTreeMap::new();
        for (w, c) in x.terms() {
            parts
                .entry(w.degree(theta))
                .or_default()
                .insert(w.clone(), c.clone());
        }
        let mut out = FreeElem::zero();
        for (d, v) in parts {
            let s = self.slice(&d)?;
            for (w, c) in s.reduce(v) {
                out.add_term(w, &c);
            }
        }
        Ok(out)
    }

    pub fn is_in_ideal(&self, x: &FreeElem) -> Result<bool> {
        Ok(self.normal_form(x)?.is_zero())
    }

    /// Applies the normal form to both tensor legs; the kernel of this map is
    /// ideal (x) T + T (x) ideal.
    pub fn tensor_normal_form(&self, t: &TensorElem) -> Result<TensorElem> {
        let mut by_right: BTreeMap<Word, FreeElem> = BTreeMap::new();
        for ((u, v), c) in t.terms() {
            by_right
                .entry(v.clone())
                .or_default()
                .add_term(u.clone(), c);
        }
        let mut by_left: BTreeMap<Word, FreeElem> = BTreeMap::new();
        for (v, left) in by_right {
            for (u, c) in self.normal_form(&left)?.terms() {
                by_left.entry(u.clone()).or_default().add_term(v.clone(), c);
            }
        }
        let mut out = TensorElem::zero();
        for (u, right) in by_left {
            for (v, c) in self.normal_form(&right)?.terms() {
                out.add_term(u.clone(), v.clone(), c);
            }
        }
        Ok(out)
    }

    /// Delta(x) - x (x) 1 - 1 (x) x vanishes in the quotient's tensor square.
    pub fn is_primitive_mod(&self, x: &FreeElem) -> Result<bool> {
        let one = self.algebra.one();
        let t = self
            .algebra
            .coproduct(x)
            .sub(&TensorElem::simple(x, &one))
            .sub(&TensorElem::simple(&one, x));
        Ok(self.tensor_normal_form(&t)?.is_zero())
    }

    /// Twisted product of tensors followed by leg-wise reduction.
    pub fn tensor_mul_mod(&self, a: &TensorElem, b: &TensorElem) -> Result<TensorElem> {
        self.tensor_normal_form(&self.algebra.tensor_mul(a, b))
    }

    /// Product followed by reduction.
    pub fn mul_mod(&self, a: &FreeElem, b: &FreeElem) -> Result<FreeElem> {
        self.normal_form(&a.mul(b))
    }
}

/// All d with 0 <= d <= delta componentwise.
pub fn sub_degrees(delta: &IntVec) -> Vec<IntVec> {
    let mut out = vec![IntVec(Vec::new())];
    for &m in &delta.0 {
        let mut next = Vec::with_capacity(out.len() * (m as usize + 1));
        for v in &out {
            for k in 0..=m {
                let mut w = v.0.clone();
                w.push(k);
                next.push(IntVec(w));
            }
        }
        out = next;
    }
    out
}

/// All multidegrees in N^theta with total degree at most `max_total`.
pub fn degrees_up_to(theta: usize, max_total: i64) -> Vec<IntVec> {
    let mut out = Vec::new();
    fn rec(theta: usize, left: i64, cur: &mut Vec<i64>, out: &mut Vec<IntVec>) {
        if cur.len() == theta {
            out.push(IntVec(cur.clone()));
            return;
        }
        for k in 0..=left {
            cur.push(k);
            rec(theta, left - k, cur, out);
            cur.pop();
        }
    }
    rec(theta, max_total, &mut Vec::new(), &mut out);
    out.sort_by_key(|d| (d.total(), d.clone()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bichar::BraidingMatrix;
    use crate::cyclo::CyclotomicContext;

    fn alg(m: u32, rows: &[&[&str]]) -> Arc<FreeAlgebra> {
        let ctx = CyclotomicContext::new(m).unwrap();
        let rows: Vec<Vec<String>> = rows
            .iter()
            .map(|r| r.iter().map(|s| s.to_string()).collect())
            .collect();
        Arc::new(FreeAlgebra::new(
            BraidingMatrix::from_strings(&ctx, &rows).unwrap(),
        ))
    }

    #[test]
    fn rank_one_nichols_is_truncated_polynomial() {
        let a = alg(5, &[&["z"]]);
        let q = QuotientView::nichols(a);
        for n in 0..8 {
            let expect = usize::from(n < 5);
            assert_eq!(q.quotient_dim(&IntVec(vec![n])).unwrap(), expect, "n={n}");
        }
    }

    #[test]
    fn squares_of_odd_letters() {
        let a = alg(5, &[&["-1"]]);
        let q = QuotientView::nichols(a.clone());
        assert_eq!(q.quotient_dim(&IntVec(vec![2])).unwrap(), 0);
        let rel = QuotientView::relations(a.clone(), RelationSet::new("sq", vec![a.word(&[0, 0])]))
            .unwrap();
        assert_eq!(rel.quotient_dim(&IntVec(vec![1])).unwrap(), 1);
        assert_eq!(rel.quotient_dim(&IntVec(vec![3])).unwrap(), 0);
    }

    #[test]
    fn quantum_plane() {
        // E1E2 - q12 E2E1 = 0 gives one standard word per bidegree
        let a = alg(5, &[&["z", "z^2"], &["z^3", "z^4"]]);
        let r = a.commutator_c(&a.letter(0), &a.letter(1)).unwrap();
        let q = QuotientView::relations(a.clone(), RelationSet::new("plane", vec![r])).unwrap();
        for d in degrees_up_to(2, 6) {
            assert_eq!(q.quotient_dim(&d).unwrap(), 1, "{d}");
        }
        // E2E1 reduces to a multiple of E1E2
        let nf = q.normal_form(&a.word(&[1, 0])).unwrap();
        assert_eq!(nf.len(), 1);
        assert_eq!(nf.terms().keys().next().unwrap().to_string(), "12");
    }

    #[test]
    fn nichols_relations_are_in_every_compatible_ideal() {
        // qtilde = 1: E1E2 - q12 E2E1 is primitive, so it vanishes in the Nichols algebra
        let a = alg(5, &[&["z", "z^2"], &["z^3", "z^4"]]);
        let n = QuotientView::nichols(a.clone());
        let r = a.commutator_c(&a.letter(0), &a.letter(1)).unwrap();
        assert!(n.is_in_ideal(&r).unwrap());
        assert!(!n.is_in_ideal(&a.word(&[0, 1])).unwrap());
        assert!(n.is_primitive_mod(&r).unwrap());
    }

    #[test]
    fn cap_names_the_degree() {
        let a = alg(3, &[&["z", "1"], &["1", "z"]]);
        let q = QuotientView::new(
            a,
            IdealKind::Relations(RelationSet::empty()),
            QuotientCaps { words: 10 },
        )
        .unwrap();
        match q.slice(&IntVec(vec![3, 3])) {
            Err(Error::CapExceeded(msg)) => assert!(msg.contains("(3,3)")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn inhomogeneous_relations_rejected() {
        let a = alg(3, &[&["z", "1"], &["1", "z"]]);
        let r = a.word(&[0]).add(&a.word(&[0, 1]));
        assert!(matches!(
            QuotientView::relations(a, RelationSet::new("bad", vec![r])),
            Err(Error::Inhomogeneous)
        ));
    }

    #[test]
    fn degree_enumeration() {
        assert_eq!(degrees_up_to(2, 2).len(), 6);
        assert_eq!(sub_degrees(&IntVec(vec![1, 2])).len(), 6);
    }
}
