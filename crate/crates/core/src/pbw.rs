//! Root vector recipes and PBW-type monomials.
//!
//! A recipe is a small expression tree over the letters, written as an
//! s-expression: `2` is E_2, `(comm A B)` is the braided commutator,
//! `(mul A B ..)` a product, `(add A B ..)` a sum, `(pow A n)` a power and
//! `[c] A` scales by a cyclotomic literal `c`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::bichar::{format_root, IntVec};
use crate::cyclo::{parse_cyc, CycNum, CyclotomicContext, Order};
use crate::error::{Error, Result};
use crate::freealg::{words_of_degree, FreeAlgebra, FreeElem, Word};
use crate::linalg::{solve_combination, Echelon, SparseVec};
use crate::quotient::QuotientView;
use crate::roots::RootSystemReport;

#[derive(Clone, PartialEq, Eq)]
pub enum Recipe {
    /// E_i, 0-based.
    Letter(usize),
    Comm(Box<Recipe>, Box<Recipe>),
    Mul(Vec<Recipe>),
    Add(Vec<Recipe>),
    Pow(Box<Recipe>, u32),
    Scaled(CycNum, Box<Recipe>),
}

impl Recipe {
    pub fn letter(i: usize) -> Self {
        Recipe::Letter(i)
    }

    pub fn comm(a: Recipe, b: Recipe) -> Self {
        Recipe::Comm(Box::new(a), Box::new(b))
    }

    pub fn scaled(c: CycNum, a: Recipe) -> Self {
        Recipe::Scaled(c, Box::new(a))
    }

    pub fn pow(a: Recipe, n: u32) -> Self {
        Recipe::Pow(Box::new(a), n)
    }

    /// (ad_c E_i)^m E_j.
    pub fn ad_power(i: usize, j: usize, m: usize) -> Self {
        let mut r = Recipe::Letter(j);
        for _ in 0..m {
            r = Recipe::comm(Recipe::Letter(i), r);
        }
        r
    }

    /// Iterated left adjoint (ad E_{l1}) ... (ad E_{l(k-1)}) E_{lk} for a word of letters.
    pub fn nested(letters: &[usize]) -> Self {
        let (last, rest) = letters.split_last().expect("nonempty word");
        rest.iter().rev().fold(Recipe::Letter(*last), |acc, &l| {
            Recipe::comm(Recipe::Letter(l), acc)
        })
    }

    pub fn expand(&self, a: &FreeAlgebra) -> Result<FreeElem> {
        match self {
            Recipe::Letter(i) => {
                if *i >= a.theta() {
                    return Err(Error::IndexOutOfRange {
                        index: i + 1,
                        size: a.theta(),
                    });
                }
                Ok(a.letter(*i))
            }
            Recipe::Comm(x, y) => a.commutator_c(&x.expand(a)?, &y.expand(a)?),
            Recipe::Mul(xs) => {
                let mut acc = a.one();
                for x in xs {
                    acc = acc.mul(&x.expand(a)?);
                }
                Ok(acc)
            }
            Recipe::Add(xs) => {
                let mut acc = FreeElem::zero();
                for x in xs {
                    acc = acc.add(&x.expand(a)?);
                }
                Ok(acc)
            }
            Recipe::Pow(x, n) => Ok(x.expand(a)?.pow(a.ctx(), *n as usize)),
            Recipe::Scaled(c, x) => Ok(x.expand(a)?.scale(c)),
        }
    }

    pub fn parse(ctx: &Arc<CyclotomicContext>, text: &str) -> Result<Recipe> {
        let toks = tokenize(text)?;
        let mut pos = 0;
        let r = parse_node(ctx, &toks, &mut pos)?;
        if pos != toks.len() {
            return Err(Error::Parse(format!("trailing input in recipe {text:?}")));
        }
        Ok(r)
    }
}

impl fmt::Display for Recipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Recipe::Letter(i) => write!(f, "{}", i + 1),
            Recipe::Comm(a, b) => write!(f, "(comm {a} {b})"),
            Recipe::Mul(xs) | Recipe::Add(xs) => {
                write!(
                    f,
                    "({}",
                    if matches!(self, Recipe::Mul(_)) {
                        "mul"
                    } else {
                        "add"
                    }
                )?;
                for x in xs {
                    write!(f, " {x}")?;
                }
                write!(f, ")")
            }
            Recipe::Pow(a, n) => write!(f, "(pow {a} {n})"),
            Recipe::Scaled(c, a) => write!(f, "[{c}] {a}"),
        }
    }
}

impl fmt::Debug for Recipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Open,
    Close,
    Scalar(String),
    Atom(String),
}

fn tokenize(text: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        match c {
            '(' => {
                out.push(Tok::Open);
                k += 1;
            }
            ')' => {
                out.push(Tok::Close);
                k += 1;
            }
            '[' => {
                let end = chars[k..]
                    .iter()
                    .position(|&x| x == ']')
                    .ok_or_else(|| Error::Parse(format!("unclosed '[' in recipe {text:?}")))?;
                out.push(Tok::Scalar(chars[k + 1..k + end].iter().collect()));
                k += end + 1;
            }
            c if c.is_whitespace() => k += 1,
            _ => {
                let start = k;
                while k < chars.len() && !"()[]".contains(chars[k]) && !chars[k].is_whitespace() {
                    k += 1;
                }
                out.push(Tok::Atom(chars[start..k].iter().collect()));
            }
        }
    }
    Ok(out)
}

fn parse_node(ctx: &Arc<CyclotomicContext>, toks: &[Tok], pos: &mut usize) -> Result<Recipe> {
    let tok = toks
        .get(*pos)
        .ok_or_else(|| Error::Parse("unexpected end of recipe".into()))?
        .clone();
    *pos += 1;
    match tok {
        Tok::Atom(a) => {
            let n: usize = a
                .parse()
                .map_err(|_| Error::Parse(format!("expected a letter index, got {a:?}")))?;
            if n == 0 {
                return Err(Error::Parse("letters are numbered from 1".into()));
            }
            Ok(Recipe::Letter(n - 1))
        }
        Tok::Scalar(s) => {
            let c = parse_cyc(ctx, &s)?;
            Ok(Recipe::scaled(c, parse_node(ctx, toks, pos)?))
        }
        Tok::Close => Err(Error::Parse("unexpected ')' in recipe".into())),
        Tok::Open => {
            let head = match toks.get(*pos) {
                Some(Tok::Atom(h)) => h.clone(),
                _ => return Err(Error::Parse("expected an operator after '('".into())),
            };
            *pos += 1;
            let mut args = Vec::new();
            let mut pow_exp = None;
            loop {
                match toks.get(*pos) {
                    Some(Tok::Close) => {
                        *pos += 1;
                        break;
                    }
                    None => return Err(Error::Parse("unclosed '(' in recipe".into())),
                    Some(Tok::Atom(a)) if head == "pow" && args.len() == 1 => {
                        pow_exp =
                            Some(a.parse::<u32>().map_err(|_| {
                                Error::Parse(format!("bad exponent {a:?} in recipe"))
                            })?);
                        *pos += 1;
                    }
                    _ => args.push(parse_node(ctx, toks, pos)?),
                }
            }
            match head.as_str() {
                "comm" if args.len() == 2 => {
                    let b = args.pop().unwrap();
                    let a = args.pop().unwrap();
                    Ok(Recipe::comm(a, b))
                }
                "mul" if !args.is_empty() => Ok(Recipe::Mul(args)),
                "add" if !args.is_empty() => Ok(Recipe::Add(args)),
                "pow" if args.len() == 1 && pow_exp.is_some() => {
                    Ok(Recipe::pow(args.pop().unwrap(), pow_exp.unwrap()))
                }
                _ => Err(Error::Parse(format!(
                    "bad form ({head} ...) with {} arguments",
                    args.len()
                ))),
            }
        }
    }
}

/// Lyndon words: strictly smaller (lexicographically) than every proper suffix.
pub fn is_lyndon(w: &[u8]) -> bool {
    !w.is_empty() && (1..w.len()).all(|k| w < &w[k..])
}

/// Standard bracketing: [w] = [[u], [v]]_c where v is the longest proper Lyndon suffix.
pub fn lyndon_bracket(w: &[u8]) -> Recipe {
    if w.len() == 1 {
        return Recipe::Letter(w[0] as usize);
    }
    let k = (1..w.len()).find(|&k| is_lyndon(&w[k..])).unwrap();
    Recipe::comm(lyndon_bracket(&w[..k]), lyndon_bracket(&w[k..]))
}

/// Lyndon words of multidegree `beta`, lexicographically greatest first.
pub fn lyndon_words(beta: &IntVec) -> Vec<Word> {
    let mut ws: Vec<Word> = words_of_degree(beta)
        .into_iter()
        .filter(|w| is_lyndon(w.letters()))
        .collect();
    ws.sort_by(|a, b| b.letters().cmp(a.letters()));
    ws
}

/// For each positive root, the bracketed Lyndon word of that degree that is
/// lexicographically greatest among those nonzero in `quotient`. Simple roots get letters.
pub fn default_recipes(report: &RootSystemReport, quotient: &QuotientView) -> Result<Vec<Recipe>> {
    let a = quotient.algebra();
    report
        .positive_roots
        .iter()
        .map(|beta| {
            if beta.total() == 1 {
                return Ok(Recipe::Letter(beta.0.iter().position(|&x| x == 1).unwrap()));
            }
            for w in lyndon_words(beta) {
                let r = lyndon_bracket(w.letters());
                if !quotient.normal_form(&r.expand(a)?)?.is_zero() {
                    return Ok(r);
                }
            }
            Err(Error::RecipeMissing(format_root(beta)))
        })
        .collect()
}

/// Exponent vector indexed like the positive roots.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PbwMonomial(pub Vec<u32>);

impl PbwMonomial {
    pub fn degree(&self, roots: &[IntVec]) -> IntVec {
        let theta = roots.first().map(|r| r.len()).unwrap_or(0);
        let mut d = IntVec::zero(theta);
        for (r, &a) in roots.iter().zip(&self.0) {
            d = &d + &r.scale(a as i64);
        }
        d
    }

    pub fn to_text(&self, roots: &[IntVec]) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &a)| a > 0)
            .map(|(k, &a)| format!("E[{}]^{a}", format_root(&roots[k])))
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join(" ")
        }
    }
}

/// Convex-ordered root vectors with their heights and Cartan flags.
#[derive(Clone)]
pub struct PbwSpec {
    pub roots: Vec<IntVec>,
    pub heights: Vec<Order>,
    pub cartan: Vec<bool>,
    pub recipes: Vec<Recipe>,
    pub vectors: Vec<FreeElem>,
}

impl PbwSpec {
    pub fn new(report: &RootSystemReport, recipes: Vec<Recipe>, a: &FreeAlgebra) -> Result<Self> {
        if recipes.len() != report.positive_roots.len() {
            return Err(Error::InvalidInput(format!(
                "{} recipes for {} roots",
                recipes.len(),
                report.positive_roots.len()
            )));
        }
        let mut vectors = Vec::with_capacity(recipes.len());
        for (r, beta) in recipes.iter().zip(&report.positive_roots) {
            let v = r.expand(a)?;
            if !v.is_zero() && a.degree(&v)? != *beta {
                return Err(Error::InvalidInput(format!(
                    "recipe {r} does not have degree {}",
                    format_root(beta)
                )));
            }
            vectors.push(v);
        }
        Ok(Self {
            roots: report.positive_roots.clone(),
            heights: report.heights.clone(),
            cartan: report.is_cartan.clone(),
            recipes,
            vectors,
        })
    }

    /// Default recipes with the given overrides, keyed by root.
    pub fn with_overrides(
        report: &RootSystemReport,
        overrides: &[(IntVec, Recipe)],
        quotient: &QuotientView,
    ) -> Result<Self> {
        let mut recipes = Vec::with_capacity(report.positive_roots.len());
        let defaults = default_recipes(report, quotient);
        for (k, beta) in report.positive_roots.iter().enumerate() {
            match overrides.iter().find(|(r, _)| r == beta) {
                Some((_, rec)) => recipes.push(rec.clone()),
                None => match &defaults {
                    Ok(d) => recipes.push(d[k].clone()),
                    Err(e) => return Err(e.clone()),
                },
            }
        }
        for (r, _) in overrides {
            if !report.positive_roots.contains(r) {
                return Err(Error::InvalidInput(format!(
                    "recipe given for {} which is not a positive root",
                    format_root(r)
                )));
            }
        }
        Self::new(report, recipes, quotient.algebra())
    }

    pub fn index_of(&self, beta: &IntVec) -> Option<usize> {
        self.roots.iter().position(|r| r == beta)
    }

    /// Exponent bound for root k, or `None` when unbounded.
    fn bound(&self, k: usize, truncate_cartan: bool) -> Option<u64> {
        if self.cartan[k] && !truncate_cartan {
            None
        } else {
            self.heights[k].finite()
        }
    }
}

/// Monomials E_{b_M}^{a_M} ... E_{b_1}^{a_1} of degree `delta` with a_k < N_k on
/// non-Cartan roots (and on Cartan roots too when `truncate_cartan`).
pub fn enumerate_restricted(
    spec: &PbwSpec,
    delta: &IntVec,
    truncate_cartan: bool,
) -> Vec<PbwMonomial> {
    let allowed: Vec<usize> = (0..spec.roots.len()).collect();
    enumerate_on(spec, delta, truncate_cartan, &allowed)
}

fn enumerate_on(
    spec: &PbwSpec,
    delta: &IntVec,
    truncate_cartan: bool,
    allowed: &[usize],
) -> Vec<PbwMonomial> {
    let m = spec.roots.len();
    let mut out = Vec::new();
    let mut cur = vec![0u32; m];
    fn rec(
        spec: &PbwSpec,
        allowed: &[usize],
        pos: usize,
        rest: IntVec,
        truncate: bool,
        cur: &mut Vec<u32>,
        out: &mut Vec<PbwMonomial>,
    ) {
        if rest.is_zero() {
            out.push(PbwMonomial(cur.clone()));
            return;
        }
        if pos == allowed.len() {
            return;
        }
        let k = allowed[pos];
        let beta = &spec.roots[k];
        let bound = spec.bound(k, truncate);
        let mut a = 0u64;
        let mut r = rest.clone();
        loop {
            if bound.map(|b| a >= b).unwrap_or(false) || !r.is_nonneg() {
                break;
            }
            cur[k] = a as u32;
            rec(spec, allowed, pos + 1, r.clone(), truncate, cur, out);
            r = &r - beta;
            a += 1;
        }
        cur[k] = 0;
    }
    rec(
        spec,
        allowed,
        0,
        delta.clone(),
        truncate_cartan,
        &mut cur,
        &mut out,
    );
    out.sort();
    out
}

/// PBW monomials evaluated in a quotient, with cached powers of root vectors.
pub struct PbwContext<'a> {
    pub spec: &'a PbwSpec,
    pub quotient: &'a QuotientView,
    powers: Mutex<HashMap<(usize, u32), FreeElem>>,
}

impl<'a> PbwContext<'a> {
    pub fn new(spec: &'a PbwSpec, quotient: &'a QuotientView) -> Self {
        Self {
            spec,
            quotient,
            powers: Mutex::new(HashMap::new()),
        }
    }

    /// Normal form of E_{b_k}^n.
    pub fn power(&self, k: usize, n: u32) -> Result<FreeElem> {
        if n == 0 {
            return Ok(self.quotient.algebra().one());
        }
        if let Some(p) = self.powers.lock().unwrap().get(&(k, n)) {
            return Ok(p.clone());
        }
        let prev = self.power(k, n - 1)?;
        let p = self.quotient.mul_mod(&prev, &self.spec.vectors[k])?;
        self.powers.lock().unwrap().insert((k, n), p.clone());
        Ok(p)
    }

    /// Normal form of the monomial, highest root index on the left.
    pub fn expand(&self, m: &PbwMonomial) -> Result<FreeElem> {
        let mut acc = self.quotient.algebra().one();
        for k in (0..m.0.len()).rev() {
            if m.0[k] > 0 {
                acc = self.quotient.mul_mod(&acc, &self.power(k, m.0[k])?)?;
            }
        }
        Ok(acc)
    }

    /// Number of monomials, rank of their normal forms, and the quotient dimension.
    pub fn basis_check(&self, delta: &IntVec, truncate_cartan: bool) -> Result<BasisCheck> {
        let monos = enumerate_restricted(self.spec, delta, truncate_cartan);
        let mut e: Echelon<Word> = Echelon::new();
        for m in &monos {
            e.insert(self.expand(m)?.into_terms())?;
        }
        Ok(BasisCheck {
            degree: delta.clone(),
            monomials: monos.len(),
            rank: e.rank(),
            quotient_dim: self.quotient.quotient_dim(delta)?,
        })
    }

    /// Coefficients of x in the restricted PBW monomials of its degree.
    pub fn coefficients(&self, x: &FreeElem) -> Result<Vec<(PbwMonomial, CycNum)>> {
        let a = self.quotient.algebra();
        if x.is_zero() {
            return Ok(Vec::new());
        }
        let delta = a.degree(x)?;
        let monos = enumerate_restricted(self.spec, &delta, false);
        let vecs: Vec<SparseVec<Word>> = monos
            .iter()
            .map(|m| self.expand(m).map(FreeElem::into_terms))
            .collect::<Result<_>>()?;
        let target = self.quotient.normal_form(x)?.into_terms();
        let sol = solve_combination(&vecs, &target)?.ok_or_else(|| {
            Error::Unsolvable(format!("element of degree {delta} is not in the PBW span"))
        })?;
        Ok(monos
            .into_iter()
            .zip(sol)
            .filter_map(|(m, c)| c.map(|c| (m, c)))
            .collect())
    }

    /// Writes [E_k, E_l]_c (k < l) through monomials in roots strictly between them.
    pub fn straighten(&self, k: usize, l: usize) -> Result<Option<Vec<(PbwMonomial, CycNum)>>> {
        let spec = self.spec;
        let a = self.quotient.algebra();
        if k >= l || l >= spec.roots.len() {
            return Err(Error::InvalidInput(format!(
                "need k < l < {}",
                spec.roots.len()
            )));
        }
        let c = a.chi(&spec.roots[k], &spec.roots[l]);
        let lhs = spec.vectors[k]
            .mul(&spec.vectors[l])
            .sub(&spec.vectors[l].mul(&spec.vectors[k]).scale(&c));
        let target = self.quotient.normal_form(&lhs)?.into_terms();
        let delta = &spec.roots[k] + &spec.roots[l];
        let between: Vec<usize> = (k + 1..l).collect();
        let monos = enumerate_on(spec, &delta, false, &between);
        let vecs: Vec<SparseVec<Word>> = monos
            .iter()
            .map(|m| self.expand(m).map(FreeElem::into_terms))
            .collect::<Result<_>>()?;
        Ok(solve_combination(&vecs, &target)?.map(|sol| {
            monos
                .into_iter()
                .zip(sol)
                .filter_map(|(m, c)| c.map(|c| (m, c)))
                .collect()
        }))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisCheck {
    pub degree: IntVec,
    pub monomials: usize,
    pub rank: usize,
    pub quotient_dim: usize,
}

impl BasisCheck {
    pub fn passed(&self) -> bool {
        self.monomials == self.quotient_dim && self.rank == self.monomials
    }
}
