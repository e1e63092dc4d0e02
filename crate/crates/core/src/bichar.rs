//! Braiding matrices, the bicharacter on Z^theta, and integer vectors/matrices.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::cyclo::{parse_cyc, q_number, root_generator, CycNum, CyclotomicContext};
use crate::error::{Error, Result};

/// A vector in Z^theta (degrees, roots, exponent vectors).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IntVec(pub Vec<i64>);

impl IntVec {
    pub fn zero(theta: usize) -> Self {
        IntVec(vec![0; theta])
    }

    pub fn unit(theta: usize, i: usize) -> Self {
        let mut v = vec![0; theta];
        v[i] = 1;
        IntVec(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn is_nonneg(&self) -> bool {
        self.0.iter().all(|&x| x >= 0)
    }

    pub fn total(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn scale(&self, k: i64) -> Self {
        IntVec(self.0.iter().map(|x| x * k).collect())
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn dot(&self, other: &Self) -> i64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }
}

impl Add for &IntVec {
    type Output = IntVec;
    fn add(self, rhs: &IntVec) -> IntVec {
        IntVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &IntVec {
    type Output = IntVec;
    fn sub(self, rhs: &IntVec) -> IntVec {
        IntVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &IntVec {
    type Output = IntVec;
    fn neg(self) -> IntVec {
        IntVec(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for IntVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, x) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Square integer matrix acting on column vectors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMatrix {
    pub rows: Vec<Vec<i64>>,
}

impl IntMatrix {
    pub fn identity(n: usize) -> Self {
        let mut rows = vec![vec![0; n]; n];
        for (i, r) in rows.iter_mut().enumerate() {
            r[i] = 1;
        }
        IntMatrix { rows }
    }

    pub fn from_columns(cols: &[IntVec]) -> Self {
        let n = cols.len();
        let mut rows = vec![vec![0; n]; n];
        for (j, c) in cols.iter().enumerate() {
            for (i, &x) in c.0.iter().enumerate() {
                rows[i][j] = x;
            }
        }
        IntMatrix { rows }
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn column(&self, j: usize) -> IntVec {
        IntVec(self.rows.iter().map(|r| r[j]).collect())
    }

    pub fn apply(&self, v: &IntVec) -> IntVec {
        IntVec(
            self.rows
                .iter()
                .map(|r| r.iter().zip(&v.0).map(|(a, b)| a * b).sum())
                .collect(),
        )
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        let n = self.size();
        let mut rows = vec![vec![0; n]; n];
        for (i, row) in rows.iter_mut().enumerate() {
            for (j, slot) in row.iter_mut().enumerate() {
                *slot = (0..n).map(|k| self.rows[i][k] * other.rows[k][j]).sum();
            }
        }
        IntMatrix { rows }
    }

    /// Product, or `None` on i64 overflow.
    pub fn checked_mul(&self, other: &IntMatrix) -> Option<IntMatrix> {
        let n = self.size();
        let mut rows = vec![vec![0i64; n]; n];
        for (i, row) in rows.iter_mut().enumerate() {
            for (j, slot) in row.iter_mut().enumerate() {
                for k in 0..n {
                    *slot = slot.checked_add(self.rows[i][k].checked_mul(other.rows[k][j])?)?;
                }
            }
        }
        Some(IntMatrix { rows })
    }

    /// Exact inverse; fails unless the determinant is +-1.
    pub fn inverse(&self) -> Result<IntMatrix> {
        let n = self.size();
        let mut a: Vec<Vec<BigRational>> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut row: Vec<BigRational> = r
                    .iter()
                    .map(|&x| BigRational::from_integer(BigInt::from(x)))
                    .collect();
                row.extend((0..n).map(|j| {
                    if i == j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                }));
                row
            })
            .collect();
        for col in 0..n {
            let piv = (col..n)
                .find(|&r| !a[r][col].is_zero())
                .ok_or(Error::NotUnimodular)?;
            a.swap(col, piv);
            let p = a[col][col].clone();
            for x in a[col].iter_mut() {
                *x = &*x / &p;
            }
            for r in 0..n {
                if r != col && !a[r][col].is_zero() {
                    let f = a[r][col].clone();
                    for c in 0..2 * n {
                        let sub = &f * &a[col][c];
                        a[r][c] = &a[r][c] - &sub;
                    }
                }
            }
        }
        let mut rows = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in 0..n {
                let x = &a[i][n + j];
                if !x.is_integer() {
                    return Err(Error::NotUnimodular);
                }
                rows[i][j] = x.to_integer().to_i64().ok_or(Error::NotUnimodular)?;
            }
        }
        Ok(IntMatrix { rows })
    }
}

/// A theta x theta braiding matrix (q_ij) over Q(z_M) with nonzero entries and q_ii != 1.
#[derive(Clone)]
pub struct BraidingMatrix {
    ctx: Arc<CyclotomicContext>,
    theta: usize,
    q: Vec<CycNum>,
    /// q_ij = g^e_ij for the generator g of the roots of unity, when every entry is one.
    exps: Option<Vec<u32>>,
    gpow: Vec<CycNum>,
}

impl BraidingMatrix {
    pub fn new(ctx: &Arc<CyclotomicContext>, rows: Vec<Vec<CycNum>>) -> Result<Self> {
        let theta = rows.len();
        if theta == 0 {
            return Err(Error::InvalidInput(
                "braiding matrix must be nonempty".into(),
            ));
        }
        let mut q = Vec::with_capacity(theta * theta);
        for (i, r) in rows.into_iter().enumerate() {
            if r.len() != theta {
                return Err(Error::InvalidInput(format!(
                    "row {} has {} entries, expected {theta}",
                    i + 1,
                    r.len()
                )));
            }
            for (j, x) in r.into_iter().enumerate() {
                if x.context().order() != ctx.order() {
                    return Err(Error::ContextMismatch(ctx.order(), x.context().order()));
                }
                if x.is_zero() {
                    return Err(Error::InvalidInput(format!(
                        "entry q_{}{} is zero",
                        i + 1,
                        j + 1
                    )));
                }
                if i == j && x.is_one() {
                    return Err(Error::InvalidInput(format!(
                        "diagonal entry q_{}{} equals 1",
                        i + 1,
                        i + 1
                    )));
                }
                q.push(x);
            }
        }
        let exps: Option<Vec<u32>> = q.iter().map(|x| x.root_exponent()).collect();
        let gpow = if exps.is_some() {
            let g = root_generator(ctx);
            let l = ctx.root_group_order();
            let mut v = Vec::with_capacity(l as usize);
            let mut acc = CycNum::one(ctx);
            for _ in 0..l {
                v.push(acc.clone());
                acc = &acc * &g;
            }
            v
        } else {
            Vec::new()
        };
        Ok(Self {
            ctx: ctx.clone(),
            theta,
            q,
            exps,
            gpow,
        })
    }

    /// Parses entries written in the cyclotomic literal grammar.
    pub fn from_strings(ctx: &Arc<CyclotomicContext>, rows: &[Vec<String>]) -> Result<Self> {
        let parsed = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|s| parse_cyc(ctx, s))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(ctx, parsed)
    }

    pub fn context(&self) -> &Arc<CyclotomicContext> {
        &self.ctx
    }

    pub fn theta(&self) -> usize {
        self.theta
    }

    pub fn entry(&self, i: usize, j: usize) -> &CycNum {
        &self.q[i * self.theta + j]
    }

    pub fn rows(&self) -> Vec<Vec<CycNum>> {
        (0..self.theta)
            .map(|i| (0..self.theta).map(|j| self.entry(i, j).clone()).collect())
            .collect()
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.theta)
            .map(|i| {
                (0..self.theta)
                    .map(|j| self.entry(i, j).to_string())
                    .collect()
            })
            .collect()
    }

    /// q_ij q_ji.
    pub fn qtilde(&self, i: usize, j: usize) -> CycNum {
        self.entry(i, j) * self.entry(j, i)
    }

    /// Exponent table when every entry is a root of unity: q_ij = g^exp(i,j).
    pub fn letter_exponent(&self, i: usize, j: usize) -> Option<u32> {
        self.exps.as_ref().map(|e| e[i * self.theta + j])
    }

    pub fn has_root_exponents(&self) -> bool {
        self.exps.is_some()
    }

    /// g^k where g generates the roots of unity of the field. Needs root exponents.
    pub fn generator_power(&self, k: i64) -> CycNum {
        let l = self.gpow.len() as i64;
        self.gpow[k.rem_euclid(l) as usize].clone()
    }

    /// Order of the generator g used by the exponent tables.
    pub fn exponent_modulus(&self) -> u32 {
        self.ctx.root_group_order()
    }

    fn check_len(&self, v: &IntVec) -> Result<()> {
        if v.len() != self.theta {
            return Err(Error::IndexOutOfRange {
                index: v.len(),
                size: self.theta,
            });
        }
        Ok(())
    }

    /// chi(a, b) = prod_ij q_ij^(a_i b_j).
    pub fn chi(&self, a: &IntVec, b: &IntVec) -> Result<CycNum> {
        self.check_len(a)?;
        self.check_len(b)?;
        if let Some(e) = &self.exps {
            let l = self.exponent_modulus() as i64;
            let mut s = 0i64;
            for i in 0..self.theta {
                if a.0[i] == 0 {
                    continue;
                }
                for j in 0..self.theta {
                    s = (s + a.0[i] * b.0[j] % l * e[i * self.theta + j] as i64).rem_euclid(l);
                }
            }
            return Ok(self.generator_power(s));
        }
        let mut acc = CycNum::one(&self.ctx);
        for i in 0..self.theta {
            for j in 0..self.theta {
                let p = a.0[i] * b.0[j];
                if p != 0 {
                    acc = &acc * &self.entry(i, j).pow(p)?;
                }
            }
        }
        Ok(acc)
    }

    /// chi(w^-1 b, w^-1 c).
    pub fn pullback(&self, w: &IntMatrix, b: &IntVec, c: &IntVec) -> Result<CycNum> {
        let winv = w.inverse()?;
        self.chi(&winv.apply(b), &winv.apply(c))
    }

    /// The braiding matrix with entries chi(w a_i, w a_j).
    pub fn transform(&self, w: &IntMatrix) -> Result<BraidingMatrix> {
        let n = self.theta;
        let cols: Vec<IntVec> = (0..n).map(|j| w.column(j)).collect();
        let mut rows = Vec::with_capacity(n);
        for i in 0..n {
            let mut r = Vec::with_capacity(n);
            for j in 0..n {
                r.push(self.chi(&cols[i], &cols[j])?);
            }
            rows.push(r);
        }
        BraidingMatrix::new(&self.ctx, rows)
    }

    /// lambda_j = (-c)_{q_ii} prod_{s=0}^{-c-1} (q_ii^s qtilde_ij - 1) for a Cartan entry c = c_ij.
    /// The second component flags the degenerate case c = 0, where the value is 0.
    pub fn lambda(&self, i: usize, j: usize, c: i64) -> Result<(CycNum, bool)> {
        if i >= self.theta || j >= self.theta {
            return Err(Error::IndexOutOfRange {
                index: i.max(j),
                size: self.theta,
            });
        }
        if c > 0 {
            return Err(Error::InvalidInput(format!(
                "off-diagonal Cartan entry must be <= 0, got {c}"
            )));
        }
        let n = (-c) as u64;
        let qii = self.entry(i, i);
        let qt = self.qtilde(i, j);
        let mut acc = q_number(n, qii);
        let one = CycNum::one(&self.ctx);
        let mut p = one.clone();
        for _ in 0..n {
            acc = &acc * &(&(&p * &qt) - &one);
            p = &p * qii;
        }
        Ok((acc, c == 0))
    }
}

impl PartialEq for BraidingMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.theta == other.theta && self.q == other.q
    }
}

impl Eq for BraidingMatrix {}

impl std::hash::Hash for BraidingMatrix {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.theta.hash(state);
        self.q.hash(state);
    }
}

impl fmt::Debug for BraidingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BraidingMatrix{:?}", self.to_strings())
    }
}

/// Writes a degree as a sum of simple roots, e.g. `3a1+2a2`.
pub fn format_root(v: &IntVec) -> String {
    let mut out = String::new();
    for (i, &c) in v.0.iter().enumerate() {
        if c == 0 {
            continue;
        }
        if !out.is_empty() || c < 0 {
            out.push(if c < 0 { '-' } else { '+' });
        }
        let a = c.abs();
        if a != 1 {
            out.push_str(&a.to_string());
        }
        out.push_str(&format!("a{}", i + 1));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ctx(m: u32) -> Arc<CyclotomicContext> {
        CyclotomicContext::new(m).unwrap()
    }

    fn mat(c: &Arc<CyclotomicContext>, rows: &[&[&str]]) -> BraidingMatrix {
        let rows: Vec<Vec<String>> = rows
            .iter()
            .map(|r| r.iter().map(|s| s.to_string()).collect())
            .collect();
        BraidingMatrix::from_strings(c, &rows).unwrap()
    }

    #[test]
    fn rejects_bad_matrices() {
        let c = ctx(5);
        let bad = vec![
            vec!["1".to_string(), "z".to_string()],
            vec!["z".into(), "-1".into()],
        ];
        assert!(BraidingMatrix::from_strings(&c, &bad).is_err());
        let zero = vec![
            vec!["z".to_string(), "0".to_string()],
            vec!["z".into(), "-1".into()],
        ];
        assert!(BraidingMatrix::from_strings(&c, &zero).is_err());
        let ragged = vec![vec!["z".to_string()], vec!["z".into(), "-1".into()]];
        assert!(BraidingMatrix::from_strings(&c, &ragged).is_err());
    }

    #[test]
    fn chi_on_simple_roots_and_sums() {
        let c = ctx(5);
        let b = mat(&c, &[&["z", "z^2"], &["1", "-1"]]);
        let a1 = IntVec(vec![1, 0]);
        let a2 = IntVec(vec![0, 1]);
        assert_eq!(b.chi(&a1, &a2).unwrap(), CycNum::zeta_pow(&c, 2));
        // chi(a1+a2, a1+a2) = z * z^2 * 1 * (-1)
        let s = IntVec(vec![1, 1]);
        assert_eq!(b.chi(&s, &s).unwrap(), -&CycNum::zeta_pow(&c, 3));
        // negative exponents go through inverses
        let m = IntVec(vec![-1, 0]);
        assert_eq!(b.chi(&m, &a1).unwrap(), CycNum::zeta_pow(&c, 4));
        assert!(b.chi(&IntVec(vec![1]), &a1).is_err());
    }

    #[test]
    fn exponent_path_matches_generic_path() {
        let c = ctx(5);
        let b = mat(&c, &[&["z", "z^2"], &["1", "-1"]]);
        assert!(b.has_root_exponents());
        let generic = mat(&c, &[&["z", "2*z^2"], &["1/2", "-1"]]);
        assert!(!generic.has_root_exponents());
        let x = IntVec(vec![3, -2]);
        let y = IntVec(vec![-1, 4]);
        let mut acc = CycNum::one(&c);
        for i in 0..2 {
            for j in 0..2 {
                acc = &acc * &b.entry(i, j).pow(x.0[i] * y.0[j]).unwrap();
            }
        }
        assert_eq!(b.chi(&x, &y).unwrap(), acc);
    }

    #[test]
    fn lambda_values() {
        let c = ctx(3);
        // Cartan A2 at z_3: q_ii = z^2, qtilde = z^-2 = z, c = -1
        let b = mat(&c, &[&["z^2", "z^2"], &["z^2", "z^2"]]);
        let (l, degenerate) = b.lambda(0, 1, -1).unwrap();
        // (1)_q * (qtilde - 1)
        assert_eq!(l, &b.qtilde(0, 1) - &CycNum::one(&c));
        assert!(!degenerate);
        let (l0, d0) = b.lambda(0, 1, 0).unwrap();
        assert!(l0.is_zero() && d0);
    }

    #[test]
    fn integer_matrix_inverse() {
        let m = IntMatrix {
            rows: vec![vec![1, 3], vec![0, -1]],
        };
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), IntMatrix::identity(2));
        let sing = IntMatrix {
            rows: vec![vec![2, 0], vec![0, 1]],
        };
        assert_eq!(sing.inverse(), Err(Error::NotUnimodular));
    }

    #[test]
    fn root_formatting() {
        assert_eq!(format_root(&IntVec(vec![3, 2])), "3a1+2a2");
        assert_eq!(format_root(&IntVec(vec![0, 1])), "a2");
        assert_eq!(format_root(&IntVec(vec![0, 0])), "0");
    }

    proptest! {
        #[test]
        fn chi_is_bimultiplicative(
            a in proptest::collection::vec(-3i64..=3, 2),
            b in proptest::collection::vec(-3i64..=3, 2),
            d in proptest::collection::vec(-3i64..=3, 2),
        ) {
            let c = ctx(5);
            let br = mat(&c, &[&["z", "z^2"], &["z^3", "-1"]]);
            let (a, b, d) = (IntVec(a), IntVec(b), IntVec(d));
            prop_assert_eq!(br.chi(&(&a + &b), &d).unwrap(), &br.chi(&a, &d).unwrap() * &br.chi(&b, &d).unwrap());
            prop_assert_eq!(br.chi(&a, &(&b + &d)).unwrap(), &br.chi(&a, &b).unwrap() * &br.chi(&a, &d).unwrap());
        }

        #[test]
        fn pullback_by_unimodular(k in -3i64..=3) {
            let c = ctx(5);
            let br = mat(&c, &[&["z", "z^2"], &["z^3", "-1"]]);
            let w = IntMatrix { rows: vec![vec![1, k], vec![0, 1]] };
            let t = br.transform(&w).unwrap();
            // pulling back the transformed matrix by w recovers the original
            for i in 0..2 {
                for j in 0..2 {
                    let v = t.pullback(&w, &IntVec::unit(2, i), &IntVec::unit(2, j)).unwrap();
                    prop_assert_eq!(&v, br.entry(i, j));
                }
            }
        }
    }
}
