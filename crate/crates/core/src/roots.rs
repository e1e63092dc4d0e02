//! Cartan matrices, reflections, the Weyl groupoid, positive and Cartan roots.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::Serialize;

use crate::bichar::{format_root, BraidingMatrix, IntMatrix, IntVec};
use crate::cyclo::{q_number, CycNum, Order};
use crate::error::{Error, Result};

/// Search bounds for the combinatorial exploration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RootCaps {
    /// Bound on n when q_ii has infinite order.
    pub cartan_search: u64,
    pub objects: usize,
    pub morphisms: usize,
    pub word_length: usize,
}

impl Default for RootCaps {
    fn default() -> Self {
        Self {
            cartan_search: 1000,
            objects: 1000,
            morphisms: 1_000_000,
            word_length: 10_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct CartanMatrix {
    pub entries: Vec<Vec<i64>>,
}

impl CartanMatrix {
    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i][j]
    }
}

/// c_ij for i != j: minus the least n >= 0 with (n+1)_{q_ii} (1 - q_ii^n qtilde_ij) = 0.
pub fn cartan_entry(b: &BraidingMatrix, i: usize, j: usize, cap: u64) -> Result<i64> {
    let theta = b.theta();
    if i >= theta || j >= theta {
        return Err(Error::IndexOutOfRange {
            index: i.max(j),
            size: theta,
        });
    }
    if i == j {
        return Ok(2);
    }
    let qii = b.entry(i, i);
    let bound = match qii.mul_order(cap.max(1))? {
        Order::Finite(n) => n - 1,
        Order::Infinite => cap,
    };
    let qt = b.qtilde(i, j);
    let one = CycNum::one(b.context());
    let mut p = one.clone();
    for n in 0..=bound {
        let v = &q_number(n + 1, qii) * &(&one - &(&p * &qt));
        if v.is_zero() {
            return Ok(-(n as i64));
        }
        p = &p * qii;
    }
    Err(Error::NotFiniteType(format!(
        "no Cartan entry c_{}{} within {bound}",
        i + 1,
        j + 1
    )))
}

pub fn cartan_matrix(b: &BraidingMatrix, cap: u64) -> Result<CartanMatrix> {
    let theta = b.theta();
    let mut entries = vec![vec![0; theta]; theta];
    for (i, row) in entries.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            *slot = cartan_entry(b, i, j, cap)?;
        }
    }
    Ok(CartanMatrix { entries })
}

/// s_i(a_j) = a_j - c_ij a_i.
pub fn simple_reflection(c: &CartanMatrix, i: usize) -> IntMatrix {
    let n = c.size();
    let cols: Vec<IntVec> = (0..n)
        .map(|j| {
            let mut v = IntVec::unit(n, j);
            v.0[i] -= c.get(i, j);
            v
        })
        .collect();
    IntMatrix::from_columns(&cols)
}

/// rho_i(chi)(a, b) = chi(s_i a, s_i b), as a braiding matrix.
pub fn reflect_object(b: &BraidingMatrix, i: usize, cap: u64) -> Result<BraidingMatrix> {
    if i >= b.theta() {
        return Err(Error::IndexOutOfRange {
            index: i,
            size: b.theta(),
        });
    }
    let c = cartan_matrix(b, cap)?;
    b.transform(&simple_reflection(&c, i))
}

/// i is a Cartan vertex when qtilde_ij = q_ii^c_ij for every j != i.
pub fn is_cartan_vertex(b: &BraidingMatrix, c: &CartanMatrix, i: usize) -> Result<bool> {
    let qii = b.entry(i, i);
    for j in 0..b.theta() {
        if j != i && b.qtilde(i, j) != qii.pow(c.get(i, j))? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A morphism of the Weyl groupoid ending at the root object, recorded as the word
/// of simple reflections, its matrix w = s_{i1} s_{i2} ..., and the object at its other end.
#[derive(Debug, Clone)]
pub struct Morphism {
    pub word: Vec<usize>,
    pub matrix: IntMatrix,
    pub object: usize,
}

/// Objects and morphisms reachable from a root object by reflections.
#[derive(Debug, Clone)]
pub struct Atlas {
    pub objects: Vec<BraidingMatrix>,
    pub cartans: Vec<CartanMatrix>,
    /// `reflections[x][i]` is the index of rho_i(x).
    pub reflections: Vec<Vec<usize>>,
    pub morphisms: Vec<Morphism>,
}

impl Atlas {
    pub fn root(&self) -> &BraidingMatrix {
        &self.objects[0]
    }

    pub fn object_index(&self, b: &BraidingMatrix) -> Option<usize> {
        self.objects.iter().position(|o| o == b)
    }
}

/// Breadth-first exploration of objects, then of morphisms from the root object.
pub fn explore_groupoid(b: &BraidingMatrix, caps: &RootCaps) -> Result<Atlas> {
    explore_bounded(b, caps, None)
}

/// With `depth`, a morphism whose shortest word exceeds it proves the groupoid is not finite.
fn explore_bounded(b: &BraidingMatrix, caps: &RootCaps, depth: Option<usize>) -> Result<Atlas> {
    let theta = b.theta();
    let mut objects = vec![b.clone()];
    let mut cartans = vec![cartan_matrix(b, caps.cartan_search)?];
    let mut index: HashMap<BraidingMatrix, usize> = HashMap::new();
    index.insert(b.clone(), 0);
    let mut reflections: Vec<Vec<usize>> = Vec::new();
    let mut k = 0;
    while k < objects.len() {
        let mut row = Vec::with_capacity(theta);
        for i in 0..theta {
            let y = objects[k].transform(&simple_reflection(&cartans[k], i))?;
            let idx = match index.get(&y) {
                Some(&idx) => idx,
                None => {
                    if objects.len() >= caps.objects {
                        return Err(Error::CapExceeded(format!(
                            "groupoid has more than {} objects",
                            caps.objects
                        )));
                    }
                    let c = cartan_matrix(&y, caps.cartan_search)?;
                    objects.push(y.clone());
                    cartans.push(c);
                    index.insert(y, objects.len() - 1);
                    objects.len() - 1
                }
            };
            row.push(idx);
        }
        reflections.push(row);
        k += 1;
    }

    let mut morphisms = vec![Morphism {
        word: Vec::new(),
        matrix: IntMatrix::identity(theta),
        object: 0,
    }];
    let mut seen: HashSet<(IntMatrix, usize)> = HashSet::new();
    seen.insert((IntMatrix::identity(theta), 0));
    let mut queue = VecDeque::from([0usize]);
    while let Some(m) = queue.pop_front() {
        for i in 0..theta {
            let (matrix, object) = {
                let cur = &morphisms[m];
                let s = simple_reflection(&cartans[cur.object], i);
                (cur.matrix.checked_mul(&s), reflections[cur.object][i])
            };
            let matrix =
                matrix.ok_or_else(|| Error::NotFiniteType("morphism entries overflow".into()))?;
            if seen.insert((matrix.clone(), object)) {
                if morphisms.len() >= caps.morphisms {
                    return Err(Error::CapExceeded(format!(
                        "groupoid has more than {} morphisms from the root object",
                        caps.morphisms
                    )));
                }
                let len = morphisms[m].word.len() + 1;
                if let Some(d) = depth.filter(|&d| len > d) {
                    return Err(Error::NotFiniteType(format!(
                        "groupoid morphism of length {len} exceeds the longest word length {d}"
                    )));
                }
                if len > caps.word_length {
                    return Err(Error::CapExceeded(format!(
                        "groupoid morphism longer than {}",
                        caps.word_length
                    )));
                }
                let mut word = morphisms[m].word.clone();
                word.push(i);
                morphisms.push(Morphism {
                    word,
                    matrix,
                    object,
                });
                queue.push_back(morphisms.len() - 1);
            }
        }
    }
    Ok(Atlas {
        objects,
        cartans,
        reflections,
        morphisms,
    })
}

/// Checks the axioms of a finite Weyl groupoid on every object of the atlas and
/// returns the violations found. Positive roots are recomputed at every object.
pub fn grs_violations(atlas: &Atlas, caps: &RootCaps) -> Result<Vec<String>> {
    let theta = atlas.root().theta();
    let mut out = Vec::new();
    let mut roots = Vec::with_capacity(atlas.objects.len());
    for y in &atlas.objects {
        let mut r: Vec<IntVec> = positive_roots(y, caps)?;
        r.sort();
        roots.push(r);
    }
    for (x, c) in atlas.cartans.iter().enumerate() {
        for i in 0..theta {
            if c.get(i, i) != 2 {
                out.push(format!("object {x}: c_{0}{0} = {1}", i + 1, c.get(i, i)));
            }
            let y = atlas.reflections[x][i];
            if atlas.reflections[y][i] != x {
                out.push(format!("object {x}: rho_{} is not an involution", i + 1));
            }
            for j in 0..theta {
                if i == j {
                    continue;
                }
                if c.get(i, j) > 0 || (c.get(i, j) == 0) != (c.get(j, i) == 0) {
                    out.push(format!(
                        "object {x}: bad Cartan pair at ({}, {})",
                        i + 1,
                        j + 1
                    ));
                }
                if atlas.cartans[y].get(i, j) != c.get(i, j) {
                    out.push(format!(
                        "object {x}: c_{}{} changes under rho_{}",
                        i + 1,
                        j + 1,
                        i + 1
                    ));
                }
            }
            // s_i maps the positive roots other than a_i onto those of rho_i(x)
            let s = simple_reflection(c, i);
            let ai = IntVec::unit(theta, i);
            let mut image: Vec<IntVec> = roots[x]
                .iter()
                .filter(|r| **r != ai)
                .map(|r| s.apply(r))
                .collect();
            image.sort();
            let target: Vec<IntVec> = roots[y].iter().filter(|r| **r != ai).cloned().collect();
            if image != target {
                out.push(format!(
                    "object {x}: s_{} does not permute the roots",
                    i + 1
                ));
            }
        }
        // (r_i r_j)^m_ij fixes x and acts trivially
        for i in 0..theta {
            for j in i + 1..theta {
                let m = coxeter_number(&roots[x], i, j);
                let mut obj = x;
                let mut w = IntMatrix::identity(theta);
                for step in 0..2 * m {
                    let k = if step % 2 == 0 { i } else { j };
                    w = w.mul(&simple_reflection(&atlas.cartans[obj], k));
                    obj = atlas.reflections[obj][k];
                }
                if obj != x || w != IntMatrix::identity(theta) {
                    out.push(format!(
                        "object {x}: (r_{} r_{})^{m} is not the identity",
                        i + 1,
                        j + 1
                    ));
                }
            }
        }
    }
    Ok(out)
}

/// Reduced expression of the longest element chosen greedily (smallest admissible
/// index first), with the roots beta_k = s_{i1}...s_{i(k-1)}(a_{ik}) it produces.
#[derive(Debug, Clone)]
pub struct LongestWord {
    pub word: Vec<usize>,
    pub roots: Vec<IntVec>,
    /// Object at which step k starts.
    pub objects: Vec<BraidingMatrix>,
}

pub fn longest_word(b: &BraidingMatrix, caps: &RootCaps) -> Result<LongestWord> {
    let theta = b.theta();
    let mut w = IntMatrix::identity(theta);
    let mut y = b.clone();
    let mut produced: HashSet<IntVec> = HashSet::new();
    let mut out = LongestWord {
        word: Vec::new(),
        roots: Vec::new(),
        objects: Vec::new(),
    };
    loop {
        let pick = (0..theta).find_map(|i| {
            let r = w.apply(&IntVec::unit(theta, i));
            (r.is_nonneg() && !produced.contains(&r)).then_some((i, r))
        });
        let Some((i, r)) = pick else { break };
        if out.word.len() >= caps.word_length {
            return Err(Error::NotFiniteType(format!(
                "no longest element within length {}",
                caps.word_length
            )));
        }
        let c = cartan_matrix(&y, caps.cartan_search)?;
        let s = simple_reflection(&c, i);
        produced.insert(r.clone());
        out.word.push(i);
        out.roots.push(r);
        out.objects.push(y.clone());
        w = w.checked_mul(&s).ok_or_else(|| {
            Error::NotFiniteType(format!(
                "root coefficients overflow after {} reflections",
                out.word.len()
            ))
        })?;
        y = y.transform(&s)?;
    }
    // a longest element sends every simple root to a negative root
    if let Some(i) = (0..theta).find(|&i| w.apply(&IntVec::unit(theta, i)).is_nonneg()) {
        return Err(Error::NotFiniteType(format!(
            "greedy word of length {} stalls with w(a_{}) positive",
            out.word.len(),
            i + 1
        )));
    }
    Ok(out)
}

/// Positive roots in the order produced by the greedy longest word.
pub fn positive_roots(b: &BraidingMatrix, caps: &RootCaps) -> Result<Vec<IntVec>> {
    Ok(longest_word(b, caps)?.roots)
}

/// N_beta = ord chi(beta, beta).
pub fn height(b: &BraidingMatrix, beta: &IntVec) -> Result<Order> {
    b.chi(beta, beta)?.mul_order(1_000_000)
}

/// Positive roots of the form w(a_i) with i a Cartan vertex of the object w starts at.
pub fn cartan_roots(atlas: &Atlas, positive: &[IntVec]) -> Result<Vec<IntVec>> {
    let theta = atlas.root().theta();
    let mut found: HashSet<IntVec> = HashSet::new();
    let mut vertex_cache: HashMap<usize, Vec<bool>> = HashMap::new();
    for m in &atlas.morphisms {
        let flags = match vertex_cache.get(&m.object) {
            Some(f) => f.clone(),
            None => {
                let f = (0..theta)
                    .map(|i| {
                        is_cartan_vertex(&atlas.objects[m.object], &atlas.cartans[m.object], i)
                    })
                    .collect::<Result<Vec<_>>>()?;
                vertex_cache.insert(m.object, f.clone());
                f
            }
        };
        for (i, &is_c) in flags.iter().enumerate() {
            if is_c {
                let r = m.matrix.apply(&IntVec::unit(theta, i));
                let r = if r.is_nonneg() { r } else { -&r };
                found.insert(r);
            }
        }
    }
    let pos: HashSet<&IntVec> = positive.iter().collect();
    if let Some(r) = found.iter().find(|r| !pos.contains(r)) {
        return Err(Error::IncompleteAtlas(format!(
            "Cartan root {} is not a positive root",
            format_root(r)
        )));
    }
    Ok(positive
        .iter()
        .filter(|r| found.contains(*r))
        .cloned()
        .collect())
}

/// Cartan roots read off the longest word: beta_k with i_k a Cartan vertex at step k.
pub fn cartan_roots_along_word(lw: &LongestWord, caps: &RootCaps) -> Result<Vec<IntVec>> {
    let mut out = Vec::new();
    for (k, &i) in lw.word.iter().enumerate() {
        let y = &lw.objects[k];
        let c = cartan_matrix(y, caps.cartan_search)?;
        if is_cartan_vertex(y, &c, i)? {
            out.push(lw.roots[k].clone());
        }
    }
    Ok(out)
}

/// Hermite normal form (upper triangular, positive pivots, reduced above pivots)
/// of the row lattice spanned by `gens`. Zero rows are dropped.
pub fn hermite_normal_form(gens: &[IntVec], theta: usize) -> Vec<IntVec> {
    let mut rows: Vec<Vec<i128>> = gens
        .iter()
        .map(|g| g.0.iter().map(|&x| x as i128).collect())
        .collect();
    let mut out: Vec<Vec<i128>> = Vec::new();
    let mut col = 0;
    while col < theta && !rows.is_empty() {
        // gcd-reduce column `col` into a single pivot row
        loop {
            let nz: Vec<usize> = (0..rows.len()).filter(|&r| rows[r][col] != 0).collect();
            if nz.len() <= 1 {
                break;
            }
            let p = *nz.iter().min_by_key(|&&r| rows[r][col].abs()).unwrap();
            for &r in &nz {
                if r != p {
                    let f = rows[r][col] / rows[p][col];
                    let prow = rows[p].clone();
                    for (x, y) in rows[r].iter_mut().zip(&prow) {
                        *x -= f * y;
                    }
                }
            }
        }
        if let Some(p) = (0..rows.len()).find(|&r| rows[r][col] != 0) {
            let mut prow = rows.remove(p);
            if prow[col] < 0 {
                for x in prow.iter_mut() {
                    *x = -*x;
                }
            }
            out.push(prow);
        }
        rows.retain(|r| r.iter().any(|&x| x != 0));
        col += 1;
    }
    // reduce entries above pivots
    for k in 0..out.len() {
        let pc = out[k].iter().position(|&x| x != 0).unwrap();
        let pv = out[k][pc];
        for r in 0..k {
            let f = out[r][pc].div_euclid(pv);
            if f != 0 {
                let prow = out[k].clone();
                for (x, y) in out[r].iter_mut().zip(&prow) {
                    *x -= f * y;
                }
            }
        }
    }
    out.into_iter()
        .map(|r| IntVec(r.into_iter().map(|x| x as i64).collect()))
        .collect()
}

/// Summary of the root system of one braiding matrix.
#[derive(Debug, Clone)]
pub struct RootSystemReport {
    pub source: BraidingMatrix,
    pub cartan: CartanMatrix,
    pub longest_word: Vec<usize>,
    pub positive_roots: Vec<IntVec>,
    pub heights: Vec<Order>,
    pub is_cartan: Vec<bool>,
    pub cartan_roots: Vec<IntVec>,
    pub gk_triple: (usize, usize, usize),
    pub z_lattice: Vec<IntVec>,
    pub z_lattice_index: Option<i64>,
    pub atlas_objects: usize,
    pub atlas_morphisms: usize,
}

impl RootSystemReport {
    pub fn theta(&self) -> usize {
        self.source.theta()
    }

    pub fn root_index(&self, beta: &IntVec) -> Option<usize> {
        self.positive_roots.iter().position(|r| r == beta)
    }

    pub fn height_of(&self, beta: &IntVec) -> Option<Order> {
        self.root_index(beta).map(|k| self.heights[k])
    }

    pub fn to_json(&self) -> serde_json::Value {
        let roots: Vec<serde_json::Value> = self
            .positive_roots
            .iter()
            .zip(&self.heights)
            .zip(&self.is_cartan)
            .map(|((r, h), c)| {
                serde_json::json!({
                    "root": r.0,
                    "name": format_root(r),
                    "height": h.to_string(),
                    "cartan": c,
                })
            })
            .collect();
        serde_json::json!({
            "theta": self.theta(),
            "matrix": self.source.to_strings(),
            "cartan_matrix": self.cartan.entries,
            "longest_word": self.longest_word.iter().map(|i| i + 1).collect::<Vec<_>>(),
            "positive_roots": roots,
            "cartan_roots": self.cartan_roots.iter().map(|r| r.0.clone()).collect::<Vec<_>>(),
            "gk_dimensions": [self.gk_triple.0, self.gk_triple.1, self.gk_triple.2],
            "z_lattice_hnf": self.z_lattice.iter().map(|r| r.0.clone()).collect::<Vec<_>>(),
            "z_lattice_index": self.z_lattice_index,
            "atlas": {"objects": self.atlas_objects, "morphisms": self.atlas_morphisms},
        })
    }
}

pub fn analyze(b: &BraidingMatrix, caps: &RootCaps) -> Result<RootSystemReport> {
    let theta = b.theta();
    let cartan = cartan_matrix(b, caps.cartan_search)?;
    let lw = longest_word(b, caps)?;
    let atlas = explore_bounded(b, caps, Some(lw.word.len()))?;
    let positive = lw.roots.clone();
    let heights = positive
        .iter()
        .map(|r| height(b, r))
        .collect::<Result<Vec<_>>>()?;
    let cartan_roots = cartan_roots(&atlas, &positive)?;
    let is_cartan: Vec<bool> = positive.iter().map(|r| cartan_roots.contains(r)).collect();
    let o = cartan_roots.len();
    let mut gens = Vec::new();
    for (r, h) in positive.iter().zip(&heights) {
        if cartan_roots.contains(r) {
            let n = h.finite().ok_or_else(|| {
                Error::NotFiniteType(format!(
                    "Cartan root {} has infinite height",
                    format_root(r)
                ))
            })?;
            gens.push(r.scale(n as i64));
        }
    }
    let z_lattice = hermite_normal_form(&gens, theta);
    let z_lattice_index = if z_lattice.len() == theta {
        Some(z_lattice.iter().enumerate().map(|(k, r)| r.0[k]).product())
    } else {
        None
    };
    Ok(RootSystemReport {
        source: b.clone(),
        cartan,
        longest_word: lw.word,
        positive_roots: positive,
        heights,
        is_cartan,
        cartan_roots,
        gk_triple: (o, o + theta, 2 * o + 2 * theta),
        z_lattice,
        z_lattice_index,
        atlas_objects: atlas.objects.len(),
        atlas_morphisms: atlas.morphisms.len(),
    })
}

/// m_ij = number of positive roots supported on {i, j}.
pub fn coxeter_number(positive: &[IntVec], i: usize, j: usize) -> usize {
    positive
        .iter()
        .filter(|r| {
            r.0.iter()
                .enumerate()
                .all(|(k, &x)| k == i || k == j || x == 0)
        })
        .count()
}
