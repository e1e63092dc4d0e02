//! Exact arithmetic in the cyclotomic field Q(z_M).
//!
//! Elements are stored in the power basis 1, z, ..., z^(phi(M)-1) as integer
//! numerators over a single positive common denominator, kept in lowest terms.
//! Contexts are interned, so two values built for the same `M` share one
//! `Arc<CyclotomicContext>`.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest supported `M`.
pub const MAX_ORDER: u32 = 2048;

#[derive(Debug)]
pub struct CyclotomicContext {
    order: u32,
    phi: Vec<i64>,
    /// `reduce[k]` is z^k written in the power basis, for k < max(M, 2*deg - 1).
    reduce: Vec<Vec<i64>>,
    units: Vec<u32>,
}

impl CyclotomicContext {
    /// Returns the shared context for Q(z_M).
    pub fn new(order: u32) -> Result<Arc<Self>> {
        if order == 0 || order > MAX_ORDER {
            return Err(Error::InvalidInput(format!(
                "zeta order must lie in 1..={MAX_ORDER}, got {order}"
            )));
        }
        static CACHE: OnceLock<Mutex<HashMap<u32, Arc<CyclotomicContext>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().expect("context cache poisoned");
        if let Some(ctx) = guard.get(&order) {
            return Ok(ctx.clone());
        }
        let ctx = Arc::new(Self::build(order)?);
        guard.insert(order, ctx.clone());
        Ok(ctx)
    }

    fn build(order: u32) -> Result<Self> {
        let phi = cyclotomic_polynomial(order)?;
        let deg = phi.len() - 1;
        let len = (order as usize).max(2 * deg);
        let mut reduce = Vec::with_capacity(len);
        let mut cur = vec![0i64; deg];
        if deg == 0 {
            unreachable!("cyclotomic polynomials have positive degree");
        }
        cur[0] = 1;
        for _ in 0..len {
            reduce.push(cur.clone());
            // multiply by x and reduce by the monic phi
            let top = cur[deg - 1];
            for k in (1..deg).rev() {
                cur[k] = cur[k - 1];
            }
            cur[0] = 0;
            if top != 0 {
                for (k, c) in cur.iter_mut().enumerate() {
                    *c = c
                        .checked_sub(top.checked_mul(phi[k]).ok_or_else(overflow)?)
                        .ok_or_else(overflow)?;
                }
            }
        }
        let units = (1..order.max(2))
            .filter(|k| k.gcd(&order) == 1)
            .collect::<Vec<_>>();
        Ok(Self {
            order,
            phi,
            reduce,
            units,
        })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Degree of the field over Q, i.e. phi(M).
    pub fn degree(&self) -> usize {
        self.phi.len() - 1
    }

    /// Coefficients of the M-th cyclotomic polynomial, lowest degree first.
    pub fn cyclotomic_poly(&self) -> &[i64] {
        &self.phi
    }

    /// Exponent of the group of roots of unity in this field: lcm(2, M).
    pub fn root_group_order(&self) -> u32 {
        self.order.lcm(&2)
    }
}

fn overflow() -> Error {
    Error::InvalidInput("cyclotomic table overflow".into())
}

/// Phi_M by exact division of x^M - 1 by Phi_d over the proper divisors d of M.
pub fn cyclotomic_polynomial(m: u32) -> Result<Vec<i64>> {
    let mut num = vec![0i64; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in 1..m {
        if m % d == 0 {
            let div = cyclotomic_polynomial(d)?;
            num = div_monic(&num, &div)?;
        }
    }
    Ok(num)
}

fn div_monic(num: &[i64], den: &[i64]) -> Result<Vec<i64>> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let qlen = num.len() - dn;
    let mut quot = vec![0i64; qlen];
    for k in (0..qlen).rev() {
        let c = rem[k + dn];
        quot[k] = c;
        if c != 0 {
            for (j, &d) in den.iter().enumerate() {
                rem[k + j] = rem[k + j]
                    .checked_sub(c.checked_mul(d).ok_or_else(overflow)?)
                    .ok_or_else(overflow)?;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    Ok(quot)
}

/// An element of Q(z_M).
#[derive(Clone)]
pub struct CycNum {
    ctx: Arc<CyclotomicContext>,
    num: Vec<BigInt>,
    den: BigInt,
}

impl CycNum {
    pub fn zero(ctx: &Arc<CyclotomicContext>) -> Self {
        Self {
            ctx: ctx.clone(),
            num: vec![BigInt::zero(); ctx.degree()],
            den: BigInt::one(),
        }
    }

    pub fn one(ctx: &Arc<CyclotomicContext>) -> Self {
        Self::from_int(ctx, 1)
    }

    pub fn from_int(ctx: &Arc<CyclotomicContext>, n: i64) -> Self {
        let mut x = Self::zero(ctx);
        x.num[0] = BigInt::from(n);
        x
    }

    pub fn from_rational(ctx: &Arc<CyclotomicContext>, r: &BigRational) -> Self {
        let mut x = Self::zero(ctx);
        x.num[0] = r.numer().clone();
        x.den = r.denom().clone();
        x.normalize();
        x
    }

    /// z^k for any integer k.
    pub fn zeta_pow(ctx: &Arc<CyclotomicContext>, k: i64) -> Self {
        let m = ctx.order as i64;
        let e = k.rem_euclid(m) as usize;
        Self {
            ctx: ctx.clone(),
            num: ctx.reduce[e].iter().map(|&c| BigInt::from(c)).collect(),
            den: BigInt::one(),
        }
    }

    /// Builds an element from rational power-basis coefficients (length phi(M)).
    pub fn from_coeffs(ctx: &Arc<CyclotomicContext>, coeffs: &[BigRational]) -> Result<Self> {
        if coeffs.len() != ctx.degree() {
            return Err(Error::InvalidInput(format!(
                "expected {} coefficients, got {}",
                ctx.degree(),
                coeffs.len()
            )));
        }
        let den = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        let mut x = Self {
            ctx: ctx.clone(),
            num,
            den,
        };
        x.normalize();
        Ok(x)
    }

    pub fn context(&self) -> &Arc<CyclotomicContext> {
        &self.ctx
    }

    /// Power-basis coefficients.
    pub fn coeffs(&self) -> Vec<BigRational> {
        self.num
            .iter()
            .map(|n| BigRational::new(n.clone(), self.den.clone()))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(Zero::is_zero)
    }

    /// Returns the value as a rational number when it lies in Q.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.num[1..].iter().all(Zero::is_zero) {
            Some(BigRational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -std::mem::take(&mut self.den);
            for n in &mut self.num {
                *n = -std::mem::take(n);
            }
        }
        if self.den.is_one() {
            return;
        }
        if self.is_zero() {
            self.den = BigInt::one();
            return;
        }
        let mut g = self.den.clone();
        for n in &self.num {
            if g.is_one() {
                return;
            }
            g = g.gcd(n);
        }
        if !g.is_one() {
            self.den = &self.den / &g;
            for n in &mut self.num {
                *n = &*n / &g;
            }
        }
    }

    fn check_ctx(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.ctx, &other.ctx) || self.ctx.order == other.ctx.order {
            Ok(())
        } else {
            Err(Error::ContextMismatch(self.ctx.order, other.ctx.order))
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        Ok(self.add_unchecked(other, false))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        Ok(self.add_unchecked(other, true))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn add_unchecked(&self, other: &Self, negate: bool) -> Self {
        let num: Vec<BigInt> = if self.den == other.den {
            self.num
                .iter()
                .zip(&other.num)
                .map(|(a, b)| if negate { a - b } else { a + b })
                .collect()
        } else {
            self.num
                .iter()
                .zip(&other.num)
                .map(|(a, b)| {
                    let l = a * &other.den;
                    let r = b * &self.den;
                    if negate {
                        l - r
                    } else {
                        l + r
                    }
                })
                .collect()
        };
        let den = if self.den == other.den {
            self.den.clone()
        } else {
            &self.den * &other.den
        };
        let mut out = Self {
            ctx: self.ctx.clone(),
            num,
            den,
        };
        out.normalize();
        out
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let d = self.ctx.degree();
        if d == 1 {
            let mut out = Self {
                ctx: self.ctx.clone(),
                num: vec![&self.num[0] * &other.num[0]],
                den: &self.den * &other.den,
            };
            out.normalize();
            return out;
        }
        let mut prod = vec![BigInt::zero(); 2 * d - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.num.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        let mut num: Vec<BigInt> = prod[..d].to_vec();
        for (k, c) in prod.iter().enumerate().skip(d) {
            if c.is_zero() {
                continue;
            }
            for (slot, &r) in num.iter_mut().zip(&self.ctx.reduce[k]) {
                if r != 0 {
                    *slot += c * r;
                }
            }
        }
        let mut out = Self {
            ctx: self.ctx.clone(),
            num,
            den: &self.den * &other.den,
        };
        out.normalize();
        out
    }

    /// Multiplies by a rational integer.
    pub fn scale_int(&self, k: i64) -> Self {
        let mut out = Self {
            ctx: self.ctx.clone(),
            num: self.num.iter().map(|n| n * k).collect(),
            den: self.den.clone(),
        };
        out.normalize();
        out
    }

    /// Image under the Galois automorphism z -> z^k (k coprime to M).
    pub fn galois(&self, k: u32) -> Self {
        let m = self.ctx.order as u64;
        let mut num = vec![BigInt::zero(); self.ctx.degree()];
        for (j, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = ((j as u64) * (k as u64) % m) as usize;
            for (slot, &r) in num.iter_mut().zip(&self.ctx.reduce[e]) {
                if r != 0 {
                    *slot += c * r;
                }
            }
        }
        let mut out = Self {
            ctx: self.ctx.clone(),
            num,
            den: self.den.clone(),
        };
        out.normalize();
        out
    }

    /// Field norm down to Q.
    pub fn norm(&self) -> BigRational {
        let mut acc = self.clone();
        for &k in &self.ctx.units {
            if k != 1 {
                acc = acc.mul_unchecked(&self.galois(k));
            }
        }
        acc.as_rational().expect("norm lies in Q")
    }

    /// Multiplicative inverse via the product of the nontrivial Galois conjugates.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut conj = CycNum::one(&self.ctx);
        for &k in &self.ctx.units {
            if k != 1 {
                conj = conj.mul_unchecked(&self.galois(k));
            }
        }
        let n = self
            .mul_unchecked(&conj)
            .as_rational()
            .expect("norm lies in Q");
        let mut out = conj;
        out.num = out.num.iter().map(|c| c * n.denom()).collect();
        out.den = &out.den * n.numer();
        out.normalize();
        Ok(out)
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        Ok(self.mul_unchecked(&other.inv()?))
    }

    /// Integer power; negative exponents go through the inverse.
    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        Ok(base.pow_u(e.unsigned_abs()))
    }

    fn pow_u(&self, mut e: u64) -> Self {
        let mut result = CycNum::one(&self.ctx);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul_unchecked(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul_unchecked(&b);
            }
        }
        result
    }

    /// Maps Q(z_M) into Q(z_N) for N a multiple of M, sending z_M to z_N^(N/M).
    pub fn embed(&self, target: &Arc<CyclotomicContext>) -> Result<Self> {
        let m = self.ctx.order;
        let n = target.order;
        if n % m != 0 {
            return Err(Error::ContextMismatch(m, n));
        }
        let step = (n / m) as i64;
        let mut out = CycNum::zero(target);
        for (j, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let z = CycNum::zeta_pow(target, step * j as i64);
            for (slot, r) in out.num.iter_mut().zip(&z.num) {
                *slot += c * r;
            }
        }
        out.den = self.den.clone();
        out.normalize();
        Ok(out)
    }

    /// Multiplicative order, or `Order::Infinite` when the value is not a root of unity.
    pub fn mul_order(&self, cap: u64) -> Result<Order> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let exp = self.ctx.root_group_order() as u64;
        if !self.pow_u(exp).is_one() {
            return Ok(Order::Infinite);
        }
        let mut acc = CycNum::one(&self.ctx);
        for n in 1..=exp.min(cap) {
            acc = acc.mul_unchecked(self);
            if acc.is_one() {
                return Ok(Order::Finite(n));
            }
        }
        Err(Error::CapExceeded(format!(
            "multiplicative order search stopped at {cap}"
        )))
    }

    /// If the value is a root of unity, returns k with value = g^k where g generates
    /// the roots of unity of the field (`root_generator`).
    pub fn root_exponent(&self) -> Option<u32> {
        let l = self.ctx.root_group_order();
        let g = root_generator(&self.ctx);
        let mut acc = CycNum::one(&self.ctx);
        for k in 0..l {
            if acc == *self {
                return Some(k);
            }
            acc = acc.mul_unchecked(&g);
        }
        None
    }
}

/// Generator of the roots of unity in Q(z_M): z when M is even, -z when M is odd.
pub fn root_generator(ctx: &Arc<CyclotomicContext>) -> CycNum {
    let z = CycNum::zeta_pow(ctx, 1);
    if ctx.order % 2 == 0 {
        z
    } else {
        -&z
    }
}

/// Multiplicative order of a field element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Order {
    Finite(u64),
    Infinite,
}

impl Order {
    pub fn finite(self) -> Option<u64> {
        match self {
            Order::Finite(n) => Some(n),
            Order::Infinite => None,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(n) => write!(f, "{n}"),
            Order::Infinite => write!(f, "inf"),
        }
    }
}

impl PartialEq for CycNum {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.order == other.ctx.order && self.den == other.den && self.num == other.num
    }
}

impl Eq for CycNum {}

impl Hash for CycNum {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.ctx.order.hash(state);
        self.num.hash(state);
        self.den.hash(state);
    }
}

impl<'a> Add<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn add(self, rhs: &CycNum) -> CycNum {
        self.checked_add(rhs).expect("cyclotomic context mismatch")
    }
}

impl<'a> Sub<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn sub(self, rhs: &CycNum) -> CycNum {
        self.checked_sub(rhs).expect("cyclotomic context mismatch")
    }
}

impl<'a> Mul<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn mul(self, rhs: &CycNum) -> CycNum {
        self.checked_mul(rhs).expect("cyclotomic context mismatch")
    }
}

impl Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        CycNum {
            ctx: self.ctx.clone(),
            num: self.num.iter().map(|n| -n).collect(),
            den: self.den.clone(),
        }
    }
}

impl Neg for CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        -&self
    }
}

impl fmt::Debug for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Prints in the same grammar that `parse_cyc` accepts.
impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, n) in self.num.iter().enumerate() {
            if n.is_zero() {
                continue;
            }
            let r = BigRational::new(n.clone(), self.den.clone());
            let neg = r.is_negative();
            let a = r.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            let coeff = if a.is_integer() {
                a.numer().to_string()
            } else {
                format!("{}/{}", a.numer(), a.denom())
            };
            match k {
                0 => write!(f, "{coeff}")?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{coeff}*")?;
                    }
                    if k == 1 {
                        write!(f, "z")?;
                    } else {
                        write!(f, "z^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Parses `expr := term (("+"|"-") term)*`, `term := [rat "*"] "z" ["^" int] | rat`,
/// `rat := int ["/" posint]`. Whitespace is ignored and a leading sign is allowed.
pub fn parse_cyc(ctx: &Arc<CyclotomicContext>, text: &str) -> Result<CycNum> {
    let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
    if chars.is_empty() {
        return Err(Error::Parse("empty cyclotomic literal".into()));
    }
    let mut pos = 0usize;
    let mut acc = CycNum::zero(ctx);
    let mut first = true;
    while pos < chars.len() {
        let mut sign = 1i64;
        if chars[pos] == '+' || chars[pos] == '-' {
            if chars[pos] == '-' {
                sign = -1;
            }
            pos += 1;
        } else if !first {
            return Err(Error::Parse(format!(
                "expected '+' or '-' at offset {pos} in {text:?}"
            )));
        }
        first = false;
        let term = parse_term(ctx, &chars, &mut pos, text)?;
        acc = if sign < 0 { &acc - &term } else { &acc + &term };
    }
    Ok(acc)
}

fn parse_term(
    ctx: &Arc<CyclotomicContext>,
    chars: &[char],
    pos: &mut usize,
    text: &str,
) -> Result<CycNum> {
    let coeff = if *pos < chars.len() && chars[*pos].is_ascii_digit() {
        let r = parse_rat(chars, pos, text)?;
        if *pos < chars.len() && chars[*pos] == '*' {
            *pos += 1;
            Some(r)
        } else {
            return Ok(CycNum::from_rational(ctx, &r));
        }
    } else {
        None
    };
    if *pos >= chars.len() || chars[*pos] != 'z' {
        return Err(Error::Parse(format!(
            "expected 'z' at offset {} in {text:?}",
            *pos
        )));
    }
    *pos += 1;
    let mut exp = 1i64;
    if *pos < chars.len() && chars[*pos] == '^' {
        *pos += 1;
        exp = parse_int(chars, pos, text)?
            .to_i64()
            .ok_or_else(|| Error::Parse(format!("exponent too large in {text:?}")))?;
    }
    let z = CycNum::zeta_pow(ctx, exp);
    Ok(match coeff {
        Some(r) => &CycNum::from_rational(ctx, &r) * &z,
        None => z,
    })
}

fn parse_int(chars: &[char], pos: &mut usize, text: &str) -> Result<BigInt> {
    let start = *pos;
    if *pos < chars.len() && chars[*pos] == '-' {
        *pos += 1;
    }
    let digits_start = *pos;
    while *pos < chars.len() && chars[*pos].is_ascii_digit() {
        *pos += 1;
    }
    if *pos == digits_start {
        return Err(Error::Parse(format!(
            "expected integer at offset {start} in {text:?}"
        )));
    }
    let s: String = chars[start..*pos].iter().collect();
    s.parse::<BigInt>()
        .map_err(|e| Error::Parse(format!("{e} in {text:?}")))
}

fn parse_rat(chars: &[char], pos: &mut usize, text: &str) -> Result<BigRational> {
    let n = parse_int(chars, pos, text)?;
    if *pos < chars.len() && chars[*pos] == '/' {
        *pos += 1;
        let d = parse_int(chars, pos, text)?;
        if !d.is_positive() {
            return Err(Error::Parse(format!(
                "denominator must be positive in {text:?}"
            )));
        }
        Ok(BigRational::new(n, d))
    } else {
        Ok(BigRational::from_integer(n))
    }
}

/// (n)_q = 1 + q + ... + q^(n-1).
pub fn q_number(n: u64, q: &CycNum) -> CycNum {
    let mut acc = CycNum::zero(q.context());
    let mut p = CycNum::one(q.context());
    for _ in 0..n {
        acc = &acc + &p;
        p = &p * q;
    }
    acc
}

/// (n)_q! = (1)_q (2)_q ... (n)_q.
pub fn q_factorial(n: u64, q: &CycNum) -> CycNum {
    (1..=n).fold(CycNum::one(q.context()), |acc, k| &acc * &q_number(k, q))
}

/// Row n of the Gaussian binomials, built with the Pascal rule
/// binom(n,k) = binom(n-1,k-1) + q^k binom(n-1,k). No division is involved,
/// so the values are correct even where q-factorials vanish.
pub fn q_binomial_row(n: u64, q: &CycNum) -> Vec<CycNum> {
    let ctx = q.context();
    let mut powers = vec![CycNum::one(ctx)];
    for k in 1..=n as usize {
        let next = &powers[k - 1] * q;
        powers.push(next);
    }
    let mut row = vec![CycNum::one(ctx)];
    for m in 1..=n as usize {
        let mut next = Vec::with_capacity(m + 1);
        next.push(CycNum::one(ctx));
        for k in 1..m {
            next.push(&row[k - 1] + &(&powers[k] * &row[k]));
        }
        next.push(CycNum::one(ctx));
        row = next;
    }
    row
}

pub fn q_binomial(n: u64, k: u64, q: &CycNum) -> CycNum {
    if k > n {
        return CycNum::zero(q.context());
    }
    q_binomial_row(n, q).swap_remove(k as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ctx(m: u32) -> Arc<CyclotomicContext> {
        CyclotomicContext::new(m).unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1).unwrap(), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(2).unwrap(), vec![1, 1]);
        assert_eq!(cyclotomic_polynomial(5).unwrap(), vec![1, 1, 1, 1, 1]);
        assert_eq!(cyclotomic_polynomial(12).unwrap(), vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(10).unwrap(), vec![1, -1, 1, -1, 1]);
    }

    #[test]
    fn zeta_power_wraps() {
        let c = ctx(5);
        let z = CycNum::zeta_pow(&c, 1);
        assert_eq!(z.pow(5).unwrap(), CycNum::one(&c));
        let z4 = CycNum::zeta_pow(&c, 4);
        let expect =
            CycNum::from_coeffs(&c, &[rat(-1, 1), rat(-1, 1), rat(-1, 1), rat(-1, 1)]).unwrap();
        assert_eq!(z4, expect);
    }

    /// Inverse by the extended Euclidean algorithm on polynomials over Q mod Phi_M.
    fn euclid_inverse(a: &CycNum) -> CycNum {
        type P = Vec<BigRational>;
        fn trim(p: &mut P) {
            while p.len() > 1 && p.last().unwrap().is_zero() {
                p.pop();
            }
        }
        fn deg(p: &P) -> usize {
            p.len() - 1
        }
        fn sub_scaled(a: &P, b: &P, c: &BigRational, shift: usize) -> P {
            let mut out = a.clone();
            if out.len() < b.len() + shift {
                out.resize(b.len() + shift, BigRational::zero());
            }
            for (i, x) in b.iter().enumerate() {
                out[i + shift] = &out[i + shift] - c * x;
            }
            let mut out = out;
            trim(&mut out);
            out
        }
        fn divmod(a: &P, b: &P) -> (P, P) {
            let mut r = a.clone();
            let mut q = vec![BigRational::zero(); a.len().max(1)];
            while !(r.len() == 1 && r[0].is_zero()) && deg(&r) >= deg(b) {
                let c = r.last().unwrap() / b.last().unwrap();
                let s = deg(&r) - deg(b);
                q[s] = &q[s] + &c;
                r = sub_scaled(&r, b, &c, s);
            }
            trim(&mut q);
            (q, r)
        }
        fn mul(a: &P, b: &P) -> P {
            let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
            for (i, x) in a.iter().enumerate() {
                for (j, y) in b.iter().enumerate() {
                    out[i + j] = &out[i + j] + x * y;
                }
            }
            trim(&mut out);
            out
        }
        fn sub(a: &P, b: &P) -> P {
            sub_scaled(a, b, &BigRational::one(), 0)
        }
        let c = a.context();
        let phi: P = c
            .cyclotomic_poly()
            .iter()
            .map(|&x| BigRational::from_integer(BigInt::from(x)))
            .collect();
        let mut ap = a.coeffs();
        trim(&mut ap);
        // invariant: s_i * a == r_i mod phi
        let (mut r0, mut r1) = (phi.clone(), ap);
        let (mut s0, mut s1) = (vec![BigRational::zero()], vec![BigRational::one()]);
        while !(r1.len() == 1 && r1[0].is_zero()) {
            let (q, r) = divmod(&r0, &r1);
            let s = sub(&s0, &mul(&q, &s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        // r0 is a nonzero constant
        let g = r0[0].clone();
        let (_, mut s) = divmod(&s0, &phi);
        s.resize(c.degree(), BigRational::zero());
        let inv: Vec<BigRational> = s.iter().map(|x| x / &g).collect();
        CycNum::from_coeffs(c, &inv).unwrap()
    }

    #[test]
    fn inverse_matches_euclid_oracle() {
        let c = ctx(5);
        let z = CycNum::zeta_pow(&c, 1);
        let one = CycNum::one(&c);
        let x = &one + &z;
        let inv = x.inv().unwrap();
        assert_eq!(inv, euclid_inverse(&x));
        // frozen from the oracle: 1/(1+z) = -z - z^3 (in Q(z_5))
        assert_eq!(
            inv,
            CycNum::from_coeffs(&c, &[rat(0, 1), rat(-1, 1), rat(0, 1), rat(-1, 1)]).unwrap()
        );
        assert_eq!(&x * &inv, one);
    }

    #[test]
    fn zero_has_no_inverse() {
        let c = ctx(7);
        assert_eq!(CycNum::zero(&c).inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn context_mismatch_is_an_error() {
        let a = CycNum::one(&ctx(5));
        let b = CycNum::one(&ctx(7));
        assert_eq!(a.checked_add(&b), Err(Error::ContextMismatch(5, 7)));
    }

    #[test]
    fn orders() {
        let c = ctx(5);
        let z = CycNum::zeta_pow(&c, 1);
        let z3 = CycNum::zeta_pow(&c, 3);
        assert_eq!(z.mul_order(1000).unwrap(), Order::Finite(5));
        assert_eq!((-&z3).mul_order(1000).unwrap(), Order::Finite(10));
        assert_eq!(
            CycNum::from_int(&c, -1).mul_order(1000).unwrap(),
            Order::Finite(2)
        );
        assert_eq!(
            CycNum::from_int(&c, 2).mul_order(1000).unwrap(),
            Order::Infinite
        );
        let c3 = ctx(3);
        assert_eq!(
            CycNum::zeta_pow(&c3, 2).mul_order(1000).unwrap(),
            Order::Finite(3)
        );
    }

    #[test]
    fn q_numbers_at_root_of_unity() {
        let c = ctx(5);
        let z = CycNum::zeta_pow(&c, 1);
        assert!(q_number(5, &z).is_zero());
        assert!(!q_number(4, &z).is_zero());
        assert!(q_factorial(5, &z).is_zero());
        // binom(5,2) vanishes at a primitive 5th root, binom(5,5) does not
        assert!(q_binomial(5, 2, &z).is_zero());
        assert!(q_binomial(5, 5, &z).is_one());
        assert!(q_binomial(3, 4, &z).is_zero());
    }

    #[test]
    fn q_binomial_matches_factorial_quotient_where_defined() {
        // independent route: binom(n,k) = (n)!/((k)!(n-k)!) when q is not a root of unity
        // of small order; z_13 keeps every factorial up to 12 nonzero
        let c = ctx(13);
        let q = CycNum::zeta_pow(&c, 1);
        for n in 0..=9u64 {
            let row = q_binomial_row(n, &q);
            for k in 0..=n {
                let f = q_factorial(n, &q)
                    .checked_div(&(&q_factorial(k, &q) * &q_factorial(n - k, &q)))
                    .unwrap();
                assert_eq!(row[k as usize], f, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn parse_and_print_roundtrip() {
        let c = ctx(5);
        let x = parse_cyc(&c, "1/2 - 3*z^2 + z^4").unwrap();
        assert_eq!(parse_cyc(&c, &x.to_string()).unwrap(), x);
        assert_eq!(parse_cyc(&c, "-z^3").unwrap(), -&CycNum::zeta_pow(&c, 3));
        assert_eq!(parse_cyc(&c, "z^-1").unwrap(), CycNum::zeta_pow(&c, 4));
        assert!(parse_cyc(&c, "2**z").is_err());
        assert!(parse_cyc(&c, "1/0").is_err());
        assert!(parse_cyc(&c, "").is_err());
    }

    #[test]
    fn embedding_preserves_roots() {
        let c5 = ctx(5);
        let c10 = ctx(10);
        let z = CycNum::zeta_pow(&c5, 1);
        let e = z.embed(&c10).unwrap();
        assert_eq!(e, CycNum::zeta_pow(&c10, 2));
        assert!(z.embed(&ctx(7)).is_err());
    }

    #[test]
    fn root_exponents() {
        let c = ctx(5);
        let g = root_generator(&c);
        assert_eq!(g.mul_order(100).unwrap(), Order::Finite(10));
        let x = -&CycNum::zeta_pow(&c, 3);
        let k = x.root_exponent().unwrap();
        assert_eq!(g.pow(k as i64).unwrap(), x);
        assert_eq!(CycNum::from_int(&c, 2).root_exponent(), None);
    }

    fn arb_cyc(m: u32) -> impl Strategy<Value = CycNum> {
        let c = ctx(m);
        let d = c.degree();
        proptest::collection::vec((-6i64..=6, 1i64..=4), d).prop_map(move |v| {
            let coeffs: Vec<BigRational> = v.iter().map(|&(n, q)| rat(n, q)).collect();
            CycNum::from_coeffs(&c, &coeffs).unwrap()
        })
    }

    proptest! {
        #[test]
        fn field_axioms(a in arb_cyc(12), b in arb_cyc(12), c in arb_cyc(12)) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn inverse_is_inverse(a in arb_cyc(5)) {
            prop_assume!(!a.is_zero());
            let inv = a.inv().unwrap();
            prop_assert!((&a * &inv).is_one());
            prop_assert_eq!(inv, euclid_inverse(&a));
        }

        #[test]
        fn galois_is_multiplicative(a in arb_cyc(9), b in arb_cyc(9)) {
            prop_assert_eq!((&a * &b).galois(2), &a.galois(2) * &b.galois(2));
        }

        #[test]
        fn display_roundtrip(a in arb_cyc(7)) {
            let c = a.context().clone();
            prop_assert_eq!(parse_cyc(&c, &a.to_string()).unwrap(), a);
        }
    }
}
