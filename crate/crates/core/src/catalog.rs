//! Built-in braidings with their presentations, root vector recipes and
//! expected root data.

use std::sync::Arc;

use crate::bichar::{BraidingMatrix, IntVec};
use crate::cyclo::{CycNum, CyclotomicContext};
use crate::error::{Error, Result};
use crate::freealg::FreeAlgebra;
use crate::pbw::Recipe;
use crate::quotient::RelationSet;

/// Root data an entry is known to have.
#[derive(Debug, Clone, Default)]
pub struct Expected {
    pub cartan_matrix: Option<Vec<Vec<i64>>>,
    /// Positive roots in the order of the longest word.
    pub positive_roots: Option<Vec<IntVec>>,
    pub cartan_roots: Option<Vec<IntVec>>,
    pub gk_triple: Option<(usize, usize, usize)>,
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub description: String,
    pub braiding: BraidingMatrix,
    pub relations: Vec<Recipe>,
    /// Relations needed beyond `relations` for the quotient to have the expected size.
    pub extra_relations: Vec<Recipe>,
    /// Root vectors that override the default Lyndon choice.
    pub recipes: Vec<(IntVec, Recipe)>,
    pub expected: Expected,
}

impl CatalogEntry {
    pub fn algebra(&self) -> Arc<FreeAlgebra> {
        Arc::new(FreeAlgebra::new(self.braiding.clone()))
    }

    /// All relations, including the extra ones.
    pub fn relation_set(&self, a: &FreeAlgebra) -> Result<RelationSet> {
        let gens = self
            .relations
            .iter()
            .chain(&self.extra_relations)
            .map(|r| r.expand(a))
            .collect::<Result<Vec<_>>>()?;
        Ok(RelationSet::new(self.name.clone(), gens))
    }

    pub fn theta(&self) -> usize {
        self.braiding.theta()
    }

    pub fn recipe_for(&self, beta: &IntVec) -> Option<&Recipe> {
        self.recipes.iter().find(|(r, _)| r == beta).map(|(_, x)| x)
    }
}

fn z(ctx: &Arc<CyclotomicContext>, k: i64) -> CycNum {
    CycNum::zeta_pow(ctx, k)
}

fn int(ctx: &Arc<CyclotomicContext>, n: i64) -> CycNum {
    CycNum::from_int(ctx, n)
}

fn pw(x: &CycNum, e: i64) -> CycNum {
    x.pow(e).expect("nonzero base")
}

fn iv(v: &[i64]) -> IntVec {
    IntVec(v.to_vec())
}

fn l(i: usize) -> Recipe {
    Recipe::letter(i)
}

fn comm(a: Recipe, b: Recipe) -> Recipe {
    Recipe::comm(a, b)
}

/// Braided commutator relation [E_i, E_j]_c.
fn qcomm(i: usize, j: usize) -> Recipe {
    comm(l(i), l(j))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Br25 {
    V,
    W,
}

/// The two rank-two braidings at a primitive fifth root of unity, with
/// symmetric off-diagonal entries: V has q_12 = q_21 = z, W has r_12 = r_21 = -z^4.
pub fn br25(variant: Br25) -> CatalogEntry {
    let ctx = CyclotomicContext::new(5).expect("order 5");
    let split = match variant {
        Br25::V => (z(&ctx, 1), z(&ctx, 1)),
        Br25::W => (-&z(&ctx, 4), -&z(&ctx, 4)),
    };
    br25_split(variant, split).expect("symmetric split is valid")
}

/// Same data with a chosen (x_12, x_21); the product must be z^2 for V and z^3 for W.
/// Relation and root vector scalars follow the choice.
pub fn br25_split(variant: Br25, split: (CycNum, CycNum)) -> Result<CatalogEntry> {
    let ctx = split.0.context().clone();
    if ctx.order() != 5 {
        return Err(Error::InvalidInput("br25 lives over Q(z_5)".into()));
    }
    let want = match variant {
        Br25::V => z(&ctx, 2),
        Br25::W => z(&ctx, 3),
    };
    if &split.0 * &split.1 != want {
        return Err(Error::InvalidInput(format!("x_12 x_21 must equal {want}")));
    }
    let symmetric = split.0 == split.1;
    let one = CycNum::one(&ctx);
    let zz = |k| z(&ctx, k);
    let e12 = qcomm(0, 1);
    let e112 = Recipe::nested(&[0, 0, 1]);
    let e1112 = Recipe::nested(&[0, 0, 0, 1]);
    let e11212 = comm(e112.clone(), e12.clone());
    let a = &one - &zz(3);
    let b = &one + &zz(1);
    match variant {
        Br25::V => {
            let (q12, q21) = split.clone();
            let m = vec![vec![zz(1), q12.clone()], vec![q21.clone(), int(&ctx, -1)]];
            let braiding = BraidingMatrix::new(&ctx, m).expect("valid matrix");
            let e43 = comm(e11212.clone(), e12.clone());
            let relations = vec![
                Recipe::pow(l(1), 2),
                Recipe::nested(&[0, 0, 0, 0, 1]),
                comm(e1112.clone(), e112.clone()),
                comm(e43, e12.clone()),
            ];
            let s21 = &q21 * &a;
            let s32 = &(&(&pw(&q12, 3) * &zz(3)) * &pw(&a, 5)) * &b;
            let s11 = &(&(&pw(&q21, 2) * &zz(1)) * &pw(&a, 7)) * &pw(&b, 3);
            let recipes = vec![
                (iv(&[1, 0]), l(0)),
                (iv(&[2, 1]), Recipe::scaled(s21, e112)),
                (iv(&[3, 2]), Recipe::scaled(s32, e11212)),
                (iv(&[1, 1]), Recipe::scaled(s11, e12)),
            ];
            Ok(CatalogEntry {
                name: if symmetric {
                    "br25-V".into()
                } else {
                    format!("br25-V[{q12}, {q21}]")
                },
                description: format!(
                    "rank 2, order 5: q11 = z, q12 = {q12}, q21 = {q21}, q22 = -1"
                )
                .replace("q12 = z, q21 = z", "q12 = q21 = z"),
                braiding,
                relations,
                extra_relations: Vec::new(),
                recipes,
                expected: Expected {
                    cartan_matrix: Some(vec![vec![2, -3], vec![-1, 2]]),
                    positive_roots: Some(
                        [
                            [1, 0],
                            [3, 1],
                            [2, 1],
                            [5, 3],
                            [3, 2],
                            [4, 3],
                            [1, 1],
                            [0, 1],
                        ]
                        .iter()
                        .map(|r| iv(r))
                        .collect(),
                    ),
                    cartan_roots: Some(
                        [[1, 0], [2, 1], [3, 2], [1, 1]]
                            .iter()
                            .map(|r| iv(r))
                            .collect(),
                    ),
                    gk_triple: Some((4, 6, 12)),
                },
            })
        }
        Br25::W => {
            let (r12, r21) = split.clone();
            let m = vec![vec![-&zz(3), r12.clone()], vec![r21.clone(), int(&ctx, -1)]];
            let braiding = BraidingMatrix::new(&ctx, m).expect("valid matrix");
            let relations = vec![
                Recipe::pow(l(1), 2),
                Recipe::nested(&[0, 0, 0, 0, 0, 1]),
                Recipe::Add(vec![
                    comm(l(0), e11212.clone()),
                    Recipe::scaled(r12.clone(), Recipe::pow(e112.clone(), 2)),
                ]),
                comm(e11212.clone(), e12.clone()),
            ];
            // no root lies between 2a1+a2 and 3a1+2a2 in the convex order
            let extra_relations = vec![comm(e112.clone(), e11212)];
            let s21 = -&(&(&(&pw(&r12, 2) * &zz(2)) * &pw(&b, 2)) * &pw(&a, 4));
            let s31 = &r21 * &(&one - &zz(2));
            let s11 = &(&(&pw(&r12, 2) * &zz(1)) * &pw(&b, 3)) * &pw(&a, 10);
            let recipes = vec![
                (iv(&[1, 0]), l(0)),
                (iv(&[3, 1]), Recipe::scaled(s31, e1112)),
                (iv(&[2, 1]), Recipe::scaled(s21, e112)),
                (iv(&[1, 1]), Recipe::scaled(s11, e12)),
            ];
            Ok(CatalogEntry {
                name: if symmetric {
                    "br25-W".into()
                } else {
                    format!("br25-W[{r12}, {r21}]")
                },
                description: if symmetric {
                    "rank 2, order 5: r11 = -z^3, r12 = r21 = -z^4, r22 = -1".into()
                } else {
                    format!("rank 2, order 5: r11 = -z^3, r12 = {r12}, r21 = {r21}, r22 = -1")
                },
                braiding,
                relations,
                extra_relations,
                recipes,
                expected: Expected {
                    cartan_matrix: Some(vec![vec![2, -4], vec![-1, 2]]),
                    positive_roots: Some(
                        [
                            [1, 0],
                            [4, 1],
                            [3, 1],
                            [5, 2],
                            [2, 1],
                            [3, 2],
                            [1, 1],
                            [0, 1],
                        ]
                        .iter()
                        .map(|r| iv(r))
                        .collect(),
                    ),
                    cartan_roots: Some(
                        [[1, 0], [3, 1], [2, 1], [1, 1]]
                            .iter()
                            .map(|r| iv(r))
                            .collect(),
                    ),
                    gk_triple: Some((4, 6, 12)),
                },
            })
        }
    }
}

/// Braiding of super type A with `theta` vertices at q = z_n; `marked` lists the
/// odd vertices (1-based). Entries below the diagonal are 1.
pub fn super_type_a(theta: usize, n: u32, marked: &[usize]) -> Result<CatalogEntry> {
    if theta == 0 || n < 3 {
        return Err(Error::InvalidInput(
            "super type A needs theta >= 1 and q of order >= 3".into(),
        ));
    }
    let mut marks = marked.to_vec();
    marks.sort_unstable();
    marks.dedup();
    if marks.len() != marked.len() || marks.iter().any(|&i| i == 0 || i > theta) {
        return Err(Error::InvalidInput(format!(
            "marked vertices must be distinct and within 1..={theta}"
        )));
    }
    let ctx = CyclotomicContext::new(n)?;
    let q = z(&ctx, 1);
    let qi = z(&ctx, -1);
    let is_marked = |i: usize| marks.contains(&(i + 1));
    let mut m = vec![vec![CycNum::one(&ctx); theta]; theta];
    // e = qtilde_{i,i+1}
    let mut e;
    if is_marked(0) {
        m[0][0] = int(&ctx, -1);
        e = q.clone();
    } else {
        m[0][0] = q.clone();
        e = qi.clone();
    }
    for i in 1..theta {
        m[i - 1][i] = e.clone();
        if is_marked(i) {
            m[i][i] = int(&ctx, -1);
            e = e.inv()?;
        } else {
            m[i][i] = e.inv()?;
        }
    }
    let braiding = BraidingMatrix::new(&ctx, m)?;

    let mut relations = Vec::new();
    for i in 0..theta {
        for j in i + 2..theta {
            relations.push(qcomm(i, j));
        }
    }
    for i in 0..theta {
        if is_marked(i) {
            relations.push(Recipe::pow(l(i), 2));
            if i > 0 && i + 1 < theta {
                relations.push(comm(Recipe::nested(&[i - 1, i, i + 1]), l(i)));
            }
        } else {
            if i > 0 {
                relations.push(Recipe::nested(&[i, i, i - 1]));
            }
            if i + 1 < theta {
                relations.push(Recipe::nested(&[i, i, i + 1]));
            }
        }
    }

    let mut recipes = Vec::new();
    let mut roots = Vec::new();
    let mut even = Vec::new();
    for j in 0..theta {
        for k in j..theta {
            let mut beta = IntVec::zero(theta);
            for x in j..=k {
                beta.0[x] = 1;
            }
            let letters: Vec<usize> = (j..=k).collect();
            recipes.push((beta.clone(), Recipe::nested(&letters)));
            if (j..=k).filter(|&x| is_marked(x)).count() % 2 == 0 {
                even.push(beta.clone());
            }
            roots.push(beta);
        }
    }
    let o = even.len();
    Ok(CatalogEntry {
        name: super_a_name(theta, n, &marks),
        description: format!(
            "super type A, rank {theta}, q = z of order {n}, odd vertices {{{}}}",
            marks
                .iter()
                .map(|i| i.to_string())
                .collect::<Vec<_>>()
                .join(",")
        ),
        braiding,
        relations,
        extra_relations: Vec::new(),
        recipes,
        expected: Expected {
            cartan_matrix: None,
            positive_roots: Some(roots),
            cartan_roots: Some(even),
            gk_triple: Some((o, o + theta, 2 * o + 2 * theta)),
        },
    })
}

pub fn super_a_name(theta: usize, n: u32, marked: &[usize]) -> String {
    let mut s = format!("super-a-{theta}-{n}");
    if !marked.is_empty() {
        s.push_str("-m");
        for i in marked {
            s.push_str(&i.to_string());
        }
    }
    s
}

/// Braiding q_ij = q^(d_i c_ij) with q = z_n, plus the quantum Serre relations.
pub fn cartan_type(name: &str, c: &[Vec<i64>], d: &[i64], n: u32) -> Result<CatalogEntry> {
    let theta = c.len();
    if theta == 0 || d.len() != theta || c.iter().any(|r| r.len() != theta) {
        return Err(Error::InvalidInput(
            "Cartan matrix and symmetrizer sizes differ".into(),
        ));
    }
    for i in 0..theta {
        if c[i][i] != 2 || d[i] <= 0 {
            return Err(Error::InvalidInput(
                "not a symmetrizable Cartan matrix".into(),
            ));
        }
        for j in 0..theta {
            if i != j && (c[i][j] > 0 || d[i] * c[i][j] != d[j] * c[j][i]) {
                return Err(Error::InvalidInput(
                    "not a symmetrizable Cartan matrix".into(),
                ));
            }
        }
    }
    let ctx = CyclotomicContext::new(n)?;
    let m: Vec<Vec<CycNum>> = (0..theta)
        .map(|i| (0..theta).map(|j| z(&ctx, d[i] * c[i][j])).collect())
        .collect();
    let braiding = BraidingMatrix::new(&ctx, m)?;
    let mut relations = Vec::new();
    for i in 0..theta {
        for j in 0..theta {
            if i != j && (c[i][j] != 0 || i < j) {
                let k = (1 - c[i][j]) as usize;
                relations.push(Recipe::ad_power(i, j, k));
            }
        }
    }
    Ok(CatalogEntry {
        name: name.into(),
        description: format!(
            "Cartan type {} at q = z of order {n}",
            name.split('-').nth(1).unwrap_or(name).to_uppercase()
        ),
        braiding,
        relations,
        extra_relations: Vec::new(),
        recipes: (0..theta).map(|i| (IntVec::unit(theta, i), l(i))).collect(),
        expected: Expected {
            cartan_matrix: Some(c.to_vec()),
            ..Expected::default()
        },
    })
}

fn cartan_named(name: &str) -> Option<Result<CatalogEntry>> {
    let (c, d, n): (Vec<Vec<i64>>, Vec<i64>, u32) = match name {
        "cartan-a1-5" => (vec![vec![2]], vec![1], 5),
        "cartan-a2-3" => (vec![vec![2, -1], vec![-1, 2]], vec![1, 1], 3),
        "cartan-a2-5" => (vec![vec![2, -1], vec![-1, 2]], vec![1, 1], 5),
        "cartan-b2-5" => (vec![vec![2, -2], vec![-1, 2]], vec![1, 2], 5),
        "cartan-a3-5" => (
            vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]],
            vec![1, 1, 1],
            5,
        ),
        _ => return None,
    };
    Some(cartan_type(name, &c, &d, n))
}

/// Names of the fixed entries; super type A accepts any `super-a-<theta>-<n>[-m<digits>]`.
pub fn list() -> Vec<String> {
    let mut out = vec!["br25-V".to_string(), "br25-W".to_string()];
    for n in [
        "cartan-a1-5",
        "cartan-a2-3",
        "cartan-a2-5",
        "cartan-b2-5",
        "cartan-a3-5",
    ] {
        out.push(n.into());
    }
    for theta in 2..=3 {
        for mask in 0u32..(1 << theta) {
            let marked: Vec<usize> = (0..theta)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| i + 1)
                .collect();
            out.push(super_a_name(theta, 3, &marked));
        }
    }
    out
}

pub fn get(name: &str) -> Result<CatalogEntry> {
    match name {
        "br25-V" | "br25-v" => return Ok(br25(Br25::V)),
        "br25-W" | "br25-w" => return Ok(br25(Br25::W)),
        _ => {}
    }
    if let Some(e) = cartan_named(name) {
        return e;
    }
    if let Some(rest) = name.strip_prefix("super-a-") {
        let parts: Vec<&str> = rest.split('-').collect();
        let bad = || Error::InvalidInput(format!("bad super type A name {name:?}"));
        if parts.len() < 2 || parts.len() > 3 {
            return Err(bad());
        }
        let theta: usize = parts[0].parse().map_err(|_| bad())?;
        let n: u32 = parts[1].parse().map_err(|_| bad())?;
        let marked = match parts.get(2) {
            None => Vec::new(),
            Some(m) => {
                let digits = m.strip_prefix('m').ok_or_else(bad)?;
                digits
                    .chars()
                    .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(bad))
                    .collect::<Result<Vec<_>>>()?
            }
        };
        return super_type_a(theta, n, &marked);
    }
    Err(Error::InvalidInput(format!(
        "unknown catalog entry {name:?}"
    )))
}

/// All fixed entries, in `list` order.
pub fn all() -> Vec<CatalogEntry> {
    list()
        .iter()
        .map(|n| get(n).expect("listed entry builds"))
        .collect()
}
