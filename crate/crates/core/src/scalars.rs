//! Exact arithmetic in the cyclotomic fields Q(zeta_N).
//!
//! A [`Scalar`] is either a rational number or an element of Q(zeta_N) stored
//! as power-basis coordinates modulo the cyclotomic polynomial. Elements that
//! happen to be rational are always stored as [`Scalar::Rat`], so structural
//! equality coincides with field equality.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::{Arc, Mutex, OnceLock};

use num::{BigInt, BigRational, One, Signed, Zero};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("conductor mismatch: {0} vs {1}")]
    ConductorMismatch(u32, u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("conductor must be positive")]
    BadConductor,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("column {column}: {message}")]
pub struct ScalarParseError {
    pub column: usize,
    pub message: String,
}

type Poly = Vec<Rational>;

fn trim(p: &mut Poly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn poly_sub(a: &Poly, b: &Poly) -> Poly {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).cloned().unwrap_or_else(Rational::zero);
        let y = b.get(i).cloned().unwrap_or_else(Rational::zero);
        out.push(x - y);
    }
    trim(&mut out);
    out
}

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

/// Quotient and remainder; `b` must be non-zero.
fn poly_divrem(a: &Poly, b: &Poly) -> (Poly, Poly) {
    let mut r = a.clone();
    trim(&mut r);
    let db = b.len() - 1;
    let lead = b[db].clone();
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![Rational::zero(); r.len() - db];
    while r.len() >= b.len() {
        let k = r.len() - 1 - db;
        let c = &r[r.len() - 1] / &lead;
        for (j, bj) in b.iter().enumerate() {
            let t = &c * bj;
            r[k + j] -= t;
        }
        q[k] = c;
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

fn cyclotomic_rational(n: u32, cache: &mut HashMap<u32, Poly>) -> Poly {
    if let Some(p) = cache.get(&n) {
        return p.clone();
    }
    let mut p: Poly = vec![Rational::zero(); n as usize + 1];
    p[0] = -Rational::one();
    p[n as usize] = Rational::one();
    for d in divisors(n) {
        if d == n {
            continue;
        }
        let phi_d = cyclotomic_rational(d, cache);
        let (q, r) = poly_divrem(&p, &phi_d);
        assert!(r.is_empty(), "inexact cyclotomic division");
        p = q;
    }
    cache.insert(n, p.clone());
    p
}

/// The n-th cyclotomic polynomial, integer coefficients from constant term up.
pub fn cyclotomic_polynomial(n: u32) -> Vec<BigInt> {
    assert!(n >= 1, "cyclotomic_polynomial needs n >= 1");
    static CACHE: OnceLock<Mutex<HashMap<u32, Poly>>> = OnceLock::new();
    let mut guard = CACHE.get_or_init(|| Mutex::new(HashMap::new())).lock().unwrap();
    cyclotomic_rational(n, &mut guard)
        .into_iter()
        .map(|c| {
            assert!(c.is_integer());
            c.to_integer()
        })
        .collect()
}

/// Euler's totient, equal to the degree of the n-th cyclotomic polynomial.
pub fn euler_phi(n: u32) -> usize {
    (1..=n).filter(|k| num::integer::gcd(*k, n) == 1).count()
}

/// Q(zeta_N) with precomputed reduction data.
#[derive(Debug)]
pub struct CyclotomicField {
    conductor: u32,
    degree: usize,
    modulus: Poly,
    // x^(degree + j) mod Phi_N for j in 0..degree-1
    reduction: Vec<Poly>,
}

impl CyclotomicField {
    fn build(n: u32) -> Self {
        let modulus: Poly = cyclotomic_polynomial(n).into_iter().map(Rational::from_integer).collect();
        let degree = modulus.len() - 1;
        let mut reduction = Vec::new();
        if degree >= 1 {
            // x^degree = -(lower part of modulus)
            let mut cur: Poly = modulus[..degree].iter().map(|c| -c.clone()).collect();
            for _ in 0..degree.saturating_sub(1) {
                reduction.push(cur.clone());
                let mut next = vec![Rational::zero(); degree];
                let top = cur[degree - 1].clone();
                for k in (1..degree).rev() {
                    next[k] = cur[k - 1].clone();
                }
                if !top.is_zero() {
                    for (k, c) in reduction[0].iter().enumerate() {
                        next[k] += &top * c;
                    }
                }
                cur = next;
            }
        }
        CyclotomicField { conductor: n, degree, modulus, reduction }
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    fn reduce_product(&self, prod: Poly) -> Vec<Rational> {
        let d = self.degree;
        let mut out = vec![Rational::zero(); d];
        for (k, c) in prod.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if k < d {
                out[k] += c;
            } else {
                for (j, r) in self.reduction[k - d].iter().enumerate() {
                    out[j] += &c * r;
                }
            }
        }
        out
    }
}

/// Shared handle to Q(zeta_n); fields are cached process-wide.
pub fn field(n: u32) -> Result<Arc<CyclotomicField>, ScalarError> {
    if n == 0 {
        return Err(ScalarError::BadConductor);
    }
    static FIELDS: OnceLock<Mutex<HashMap<u32, Arc<CyclotomicField>>>> = OnceLock::new();
    let mut guard = FIELDS.get_or_init(|| Mutex::new(HashMap::new())).lock().unwrap();
    Ok(guard.entry(n).or_insert_with(|| Arc::new(CyclotomicField::build(n))).clone())
}

/// Element of Q(zeta_N) in power-basis coordinates of length phi(N).
#[derive(Clone, Debug)]
pub struct Cyclotomic {
    field: Arc<CyclotomicField>,
    coeffs: Vec<Rational>,
}

impl Cyclotomic {
    pub fn conductor(&self) -> u32 {
        self.field.conductor
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        self.field.conductor == other.field.conductor && self.coeffs == other.coeffs
    }
}

impl Eq for Cyclotomic {}

impl Hash for Cyclotomic {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.conductor.hash(state);
        self.coeffs.hash(state);
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rat(Rational),
    Cyc(Cyclotomic),
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Rat(Rational::zero())
    }

    pub fn one() -> Self {
        Scalar::Rat(Rational::one())
    }

    pub fn from_i64(n: i64) -> Self {
        Scalar::Rat(Rational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        Scalar::Rat(Rational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Scalar::Rat(Rational::from_integer(n))
    }

    pub fn from_rational(r: Rational) -> Self {
        Scalar::Rat(r)
    }

    /// zeta_n = exp(2 pi i / n), i.e. the class of x in Q[x]/Phi_n.
    pub fn zeta(n: u32) -> Result<Self, ScalarError> {
        let f = field(n)?;
        if f.degree == 1 {
            // Phi_1 = x - 1, Phi_2 = x + 1
            return Ok(Scalar::Rat(-f.modulus[0].clone()));
        }
        let mut coeffs = vec![Rational::zero(); f.degree];
        coeffs[1] = Rational::one();
        Ok(Scalar::Cyc(Cyclotomic { field: f, coeffs }))
    }

    /// Builds an element from power-basis coordinates (any length; reduced mod Phi_n).
    pub fn from_coeffs(n: u32, coeffs: &[Rational]) -> Result<Self, ScalarError> {
        let f = field(n)?;
        let mut p: Poly = coeffs.to_vec();
        trim(&mut p);
        let (_, r) = poly_divrem(&p, &f.modulus);
        let mut c = r;
        c.resize(f.degree, Rational::zero());
        Ok(Self::normalize(f, c))
    }

    fn normalize(field: Arc<CyclotomicField>, coeffs: Vec<Rational>) -> Self {
        if coeffs.iter().skip(1).all(|c| c.is_zero()) {
            Scalar::Rat(coeffs.into_iter().next().unwrap_or_else(Rational::zero))
        } else {
            Scalar::Cyc(Cyclotomic { field, coeffs })
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Scalar::Rat(r) if r.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Scalar::Rat(r) if r.is_one())
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Scalar::Rat(r) => Some(r),
            Scalar::Cyc(_) => None,
        }
    }

    /// Conductor of the smallest stored field; 1 for rationals.
    pub fn conductor(&self) -> u32 {
        match self {
            Scalar::Rat(_) => 1,
            Scalar::Cyc(c) => c.field.conductor,
        }
    }

    /// Coordinates in the power basis of Q(zeta_n).
    pub fn to_cyclotomic(&self, n: u32) -> Result<Cyclotomic, ScalarError> {
        let f = field(n)?;
        match self {
            Scalar::Rat(r) => {
                let mut coeffs = vec![Rational::zero(); f.degree];
                coeffs[0] = r.clone();
                Ok(Cyclotomic { field: f, coeffs })
            }
            Scalar::Cyc(c) if c.field.conductor == n => Ok(c.clone()),
            Scalar::Cyc(c) => Err(ScalarError::ConductorMismatch(c.field.conductor, n)),
        }
    }

    fn common_field(a: &Cyclotomic, b: &Cyclotomic) -> Result<Arc<CyclotomicField>, ScalarError> {
        if a.field.conductor != b.field.conductor {
            return Err(ScalarError::ConductorMismatch(a.field.conductor, b.field.conductor));
        }
        Ok(a.field.clone())
    }

    pub fn checked_add(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        Ok(match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Rat(a), Scalar::Cyc(c)) | (Scalar::Cyc(c), Scalar::Rat(a)) => {
                let mut coeffs = c.coeffs.clone();
                coeffs[0] += a;
                Scalar::Cyc(Cyclotomic { field: c.field.clone(), coeffs })
            }
            (Scalar::Cyc(a), Scalar::Cyc(b)) => {
                let f = Self::common_field(a, b)?;
                let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect();
                Self::normalize(f, coeffs)
            }
        })
    }

    pub fn checked_sub(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.checked_add(&other.neg_ref())
    }

    pub fn neg_ref(&self) -> Scalar {
        match self {
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::Cyc(c) => Scalar::Cyc(Cyclotomic { field: c.field.clone(), coeffs: c.coeffs.iter().map(|x| -x).collect() }),
        }
    }

    pub fn checked_mul(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        Ok(match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Rat(a), Scalar::Cyc(c)) | (Scalar::Cyc(c), Scalar::Rat(a)) => {
                if a.is_zero() {
                    return Ok(Scalar::zero());
                }
                Scalar::Cyc(Cyclotomic { field: c.field.clone(), coeffs: c.coeffs.iter().map(|x| x * a).collect() })
            }
            (Scalar::Cyc(a), Scalar::Cyc(b)) => {
                let f = Self::common_field(a, b)?;
                let prod = poly_mul(&a.coeffs, &b.coeffs);
                let coeffs = f.reduce_product(prod);
                Self::normalize(f, coeffs)
            }
        })
    }

    pub fn checked_inv(&self) -> Result<Scalar, ScalarError> {
        match self {
            Scalar::Rat(a) => {
                if a.is_zero() {
                    Err(ScalarError::DivisionByZero)
                } else {
                    Ok(Scalar::Rat(a.recip()))
                }
            }
            Scalar::Cyc(c) => {
                let f = c.field.clone();
                let mut a = c.coeffs.clone();
                trim(&mut a);
                // extended Euclid: s * a = r (mod Phi)
                let (mut r0, mut r1) = (f.modulus.clone(), a);
                let (mut s0, mut s1): (Poly, Poly) = (Vec::new(), vec![Rational::one()]);
                while !r1.is_empty() {
                    let (q, r) = poly_divrem(&r0, &r1);
                    let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
                    r0 = std::mem::replace(&mut r1, r);
                    s0 = std::mem::replace(&mut s1, s2);
                }
                // r0 is a non-zero constant since Phi is irreducible
                debug_assert_eq!(r0.len(), 1);
                let inv_c = r0[0].recip();
                let s: Poly = s0.iter().map(|x| x * &inv_c).collect();
                let (_, rem) = poly_divrem(&s, &f.modulus);
                let mut coeffs = rem;
                coeffs.resize(f.degree, Rational::zero());
                Ok(Self::normalize(f, coeffs))
            }
        }
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.checked_mul(&other.checked_inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<Scalar, ScalarError> {
        if e < 0 {
            return self.checked_inv()?.pow(-e);
        }
        let mut base = self.clone();
        let mut acc = Scalar::one();
        let mut k = e as u64;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.checked_mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.checked_mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Parses the text form (`3/4`, `z^2 - 1/2`, `(1+z)*z`, ...) inside Q(zeta_n).
    pub fn parse(text: &str, conductor: u32) -> Result<Scalar, ScalarParseError> {
        let mut p = ExprParser { src: text.as_bytes(), pos: 0, conductor };
        let v = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(v)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => write!(f, "{r}"),
            Scalar::Cyc(c) => {
                let mut first = true;
                for k in (0..c.coeffs.len()).rev() {
                    let coef = &c.coeffs[k];
                    if coef.is_zero() {
                        continue;
                    }
                    let neg = coef.is_negative();
                    let abs = coef.abs();
                    if first {
                        if neg {
                            write!(f, "-")?;
                        }
                    } else {
                        write!(f, "{}", if neg { " - " } else { " + " })?;
                    }
                    first = false;
                    let mono = match k {
                        0 => String::new(),
                        1 => "z".to_string(),
                        _ => format!("z^{k}"),
                    };
                    if k == 0 {
                        write!(f, "{abs}")?;
                    } else if abs.is_one() {
                        write!(f, "{mono}")?;
                    } else {
                        write!(f, "{abs}*{mono}")?;
                    }
                }
                Ok(())
            }
        }
    }
}

struct ExprParser<'a> {
    src: &'a [u8],
    pos: usize,
    conductor: u32,
}

impl ExprParser<'_> {
    fn err(&self, msg: &str) -> ScalarParseError {
        ScalarParseError { column: self.pos + 1, message: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn lift<T>(&self, r: Result<T, ScalarError>) -> Result<T, ScalarParseError> {
        r.map_err(|e| self.err(&e.to_string()))
    }

    fn expr(&mut self) -> Result<Scalar, ScalarParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = self.lift(acc.checked_add(&t))?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = self.lift(acc.checked_sub(&t))?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Scalar, ScalarParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let t = self.unary()?;
                    acc = self.lift(acc.checked_mul(&t))?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let t = self.unary()?;
                    acc = self.lift(acc.checked_div(&t))?;
                }
                Some(b'z') | Some(b'(') => {
                    let t = self.unary()?;
                    acc = self.lift(acc.checked_mul(&t))?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Scalar, ScalarParseError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(self.unary()?.neg_ref())
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Scalar, ScalarParseError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let neg = if self.peek() == Some(b'-') {
                self.pos += 1;
                true
            } else {
                false
            };
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return Err(self.err("expected exponent"));
            }
            let e: i64 = std::str::from_utf8(&self.src[start..self.pos]).unwrap().parse().map_err(|_| self.err("exponent too large"))?;
            let e = if neg { -e } else { e };
            return self.lift(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Scalar, ScalarParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(b'z') => {
                self.pos += 1;
                self.lift(Scalar::zeta(self.conductor))
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let n: BigInt = digits.parse().map_err(|_| self.err("bad integer"))?;
                Ok(Scalar::from_bigint(n))
            }
            Some(_) => Err(self.err("expected number, 'z' or '('")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                self.$checked(rhs).unwrap_or_else(|e| panic!("scalar arithmetic: {e}"))
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);
binop!(Div, div, checked_div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        if let (Scalar::Rat(a), Scalar::Rat(b)) = (&mut *self, rhs) {
            *a += b;
            return;
        }
        *self = &*self + rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        if let (Scalar::Rat(a), Scalar::Rat(b)) = (&mut *self, rhs) {
            *a -= b;
            return;
        }
        *self = &*self - rhs;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_i64(n)
    }
}

/// Sum of two field elements (`cyc_add`).
pub fn cyc_add(a: &Scalar, b: &Scalar) -> Result<Scalar, ScalarError> {
    a.checked_add(b)
}

/// Product of two field elements (`cyc_mul`).
pub fn cyc_mul(a: &Scalar, b: &Scalar) -> Result<Scalar, ScalarError> {
    a.checked_mul(b)
}

/// Additive inverse (`cyc_neg`).
pub fn cyc_neg(a: &Scalar) -> Scalar {
    a.neg_ref()
}

/// Multiplicative inverse (`cyc_inv`).
pub fn cyc_inv(a: &Scalar) -> Result<Scalar, ScalarError> {
    a.checked_inv()
}

/// Generalized binomial coefficient C(l, i) = l(l-1)...(l-i+1)/i! for i >= 0.
pub fn binom(l: i64, i: i64) -> BigInt {
    if i < 0 {
        return BigInt::zero();
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for k in 0..i {
        num *= BigInt::from(l - k);
        den *= BigInt::from(k + 1);
    }
    num / den
}

/// n! as a rational.
pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u32) -> Scalar {
        Scalar::zeta(n).unwrap()
    }

    #[test]
    fn zeta4_squared() {
        assert_eq!(&z(4) * &z(4), Scalar::from_i64(-1));
    }

    #[test]
    fn rational_sum() {
        assert_eq!(Scalar::from_ratio(1, 2) + Scalar::from_ratio(1, 3), Scalar::from_ratio(5, 6));
    }

    #[test]
    fn zeta3_sum() {
        let a = z(3);
        assert_eq!(&a + &(&a * &a), Scalar::from_i64(-1));
    }

    #[test]
    fn inverses() {
        assert_eq!(cyc_inv(&Scalar::from_i64(2)).unwrap(), Scalar::from_ratio(1, 2));
        let one_plus = Scalar::one() + z(3);
        assert_eq!(cyc_inv(&one_plus).unwrap(), -z(3));
        for n in [5u32, 7, 12] {
            assert_eq!(cyc_inv(&z(n)).unwrap(), z(n).pow(n as i64 - 1).unwrap());
        }
        assert_eq!(cyc_inv(&Scalar::zero()), Err(ScalarError::DivisionByZero));
    }

    #[test]
    fn cyclotomic_polys() {
        let as_i = |n| cyclotomic_polynomial(n).into_iter().map(|c| i64::try_from(c).unwrap()).collect::<Vec<_>>();
        assert_eq!(as_i(1), vec![-1, 1]);
        assert_eq!(as_i(4), vec![1, 0, 1]);
        assert_eq!(as_i(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn conductor_mismatch() {
        assert_eq!(z(3).checked_add(&z(4)), Err(ScalarError::ConductorMismatch(3, 4)));
    }

    #[test]
    fn parse_and_display() {
        let s = Scalar::parse("z^2 - 1/2", 5).unwrap();
        assert_eq!(s.to_string(), "z^2 - 1/2");
        let t = Scalar::parse("3/4", 5).unwrap();
        assert_eq!(t, Scalar::from_ratio(3, 4));
        let u = Scalar::parse("-3/4*z^3 + z", 8).unwrap();
        assert_eq!(Scalar::parse(&u.to_string(), 8).unwrap(), u);
        assert_eq!(Scalar::parse("2z", 4).unwrap(), &Scalar::from_i64(2) * &z(4));
        assert_eq!(Scalar::parse("z^4", 4).unwrap(), Scalar::one());
        assert!(Scalar::parse("3/", 1).is_err());
        assert_eq!(Scalar::parse("1 + x", 1).unwrap_err().column, 5);
    }

    #[test]
    fn binomials() {
        assert_eq!(binom(-1, 2), BigInt::from(1));
        assert_eq!(binom(-2, 3), BigInt::from(-4));
        assert_eq!(binom(3, 5), BigInt::from(0));
        assert_eq!(binom(5, 2), BigInt::from(10));
    }
}
