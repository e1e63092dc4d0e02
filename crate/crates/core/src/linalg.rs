//! Sparse row echelon forms over Q(z_M).

use std::collections::BTreeMap;
use std::ops::Bound;

use crate::cyclo::CycNum;
use crate::error::Result;

pub type SparseVec<K> = BTreeMap<K, CycNum>;

/// `v += c * w`, dropping cancelled entries.
pub fn axpy<K: Ord + Clone>(v: &mut SparseVec<K>, c: &CycNum, w: &SparseVec<K>) {
    for (k, x) in w {
        let p = c * x;
        match v.get_mut(k) {
            Some(y) => {
                let s = &*y + &p;
                if s.is_zero() {
                    v.remove(k);
                } else {
                    *y = s;
                }
            }
            None => {
                if !p.is_zero() {
                    v.insert(k.clone(), p);
                }
            }
        }
    }
}

pub fn scale_in_place<K>(v: &mut SparseVec<K>, c: &CycNum) {
    for x in v.values_mut() {
        *x = &*x * c;
    }
}

#[derive(Debug, Clone)]
struct Row<K> {
    vec: SparseVec<K>,
    combo: SparseVec<usize>,
}

/// Rows keyed by their leading (greatest) key, each with leading coefficient 1.
/// With tracking on, every row remembers which inserted vectors it combines.
#[derive(Debug, Clone)]
pub struct Echelon<K: Ord + Clone> {
    rows: BTreeMap<K, Row<K>>,
    /// The field's 1 when tracking is on.
    track: Option<CycNum>,
    inserted: usize,
}

impl<K: Ord + Clone> Default for Echelon<K> {
    fn default() -> Self {
        Self::new()
    }
}

impl<K: Ord + Clone> Echelon<K> {
    pub fn new() -> Self {
        Self {
            rows: BTreeMap::new(),
            track: None,
            inserted: 0,
        }
    }

    /// An echelon that records combinations; `one` fixes the field.
    pub fn tracked(one: CycNum) -> Self {
        Self {
            rows: BTreeMap::new(),
            track: Some(one),
            inserted: 0,
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_lead(&self, k: &K) -> bool {
        self.rows.contains_key(k)
    }

    pub fn leads(&self) -> impl Iterator<Item = &K> {
        self.rows.keys()
    }

    pub fn rows(&self) -> impl Iterator<Item = &SparseVec<K>> {
        self.rows.values().map(|r| &r.vec)
    }

    /// Adds a vector. Returns the linear relation among inserted vectors (by insertion
    /// index) when it is dependent and tracking is on; `Some(empty)` when untracked.
    pub fn insert(&mut self, mut v: SparseVec<K>) -> Result<Option<SparseVec<usize>>> {
        let idx = self.inserted;
        self.inserted += 1;
        let mut combo = SparseVec::new();
        if let Some(one) = &self.track {
            combo.insert(idx, one.clone());
        }
        loop {
            let Some((lead, c)) = v.iter().next_back() else {
                return Ok(Some(combo));
            };
            let Some(row) = self.rows.get(lead) else {
                break;
            };
            let c = -c;
            axpy(&mut v, &c, &row.vec);
            if self.track.is_some() {
                axpy(&mut combo, &c, &row.combo);
            }
        }
        let (lead, c) = v
            .iter()
            .next_back()
            .map(|(k, c)| (k.clone(), c.clone()))
            .unwrap();
        let inv = c.inv()?;
        scale_in_place(&mut v, &inv);
        if self.track.is_some() {
            scale_in_place(&mut combo, &inv);
        }
        self.rows.insert(lead, Row { vec: v, combo });
        Ok(None)
    }

    /// Fully reduces `v`: the result has no entry at any leading key.
    pub fn reduce(&self, v: SparseVec<K>) -> SparseVec<K> {
        self.reduce_impl(v, None)
    }

    /// Fully reduces `v` and returns the combination of inserted vectors that was
    /// subtracted: `v = residual + sum combo[k] * inserted[k]`.
    pub fn reduce_tracked(&self, v: SparseVec<K>) -> (SparseVec<K>, SparseVec<usize>) {
        let mut combo = SparseVec::new();
        let r = self.reduce_impl(v, Some(&mut combo));
        (r, combo)
    }

    fn reduce_impl(
        &self,
        mut v: SparseVec<K>,
        mut combo: Option<&mut SparseVec<usize>>,
    ) -> SparseVec<K> {
        if self.rows.is_empty() {
            return v;
        }
        let mut upper: Option<K> = None;
        loop {
            let hi = match &upper {
                Some(u) => Bound::Excluded(u.clone()),
                None => Bound::Unbounded,
            };
            let hit = v
                .range((Bound::Unbounded, hi))
                .rev()
                .find(|(k, _)| self.rows.contains_key(*k))
                .map(|(k, c)| (k.clone(), c.clone()));
            let Some((k, c)) = hit else { break };
            let row = &self.rows[&k];
            axpy(&mut v, &-&c, &row.vec);
            if let Some(cb) = combo.as_deref_mut() {
                axpy(cb, &c, &row.combo);
            }
            upper = Some(k);
        }
        v
    }
}

/// Expresses `target` as a combination of `vectors`, if possible.
pub fn solve_combination<K: Ord + Clone>(
    vectors: &[SparseVec<K>],
    target: &SparseVec<K>,
) -> Result<Option<Vec<Option<CycNum>>>> {
    let Some(one) = target
        .values()
        .chain(vectors.iter().flat_map(|v| v.values()))
        .next()
    else {
        return Ok(Some(vec![None; vectors.len()]));
    };
    let mut e = Echelon::tracked(CycNum::one(one.context()));
    for v in vectors {
        e.insert(v.clone())?;
    }
    let (res, combo) = e.reduce_tracked(target.clone());
    if !res.is_empty() {
        return Ok(None);
    }
    let mut out = vec![None; vectors.len()];
    for (k, c) in combo {
        out[k] = Some(c);
    }
    Ok(Some(out))
}

/// Rank of a family of sparse vectors.
pub fn rank<K: Ord + Clone>(vectors: &[SparseVec<K>]) -> Result<usize> {
    let mut e = Echelon::new();
    for v in vectors {
        e.insert(v.clone())?;
    }
    Ok(e.rank())
}
