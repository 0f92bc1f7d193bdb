//! Exact scalars over prime fields GF(p) and the rationals.
//!
//! Every [`FieldValue`] is kept in canonical form: residues live in `[0, p)`
//! and fractions are reduced with a positive denominator, so structural
//! equality is mathematical equality.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(FieldSpec, FieldSpec),
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("cannot parse scalar {0:?}")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Kind {
    Prime(u64),
    Rationals,
}

/// The coefficient field of a ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldSpec(Kind);

impl FieldSpec {
    /// GF(p). Moduli are limited to 32 bits so products fit comfortably.
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        if p > u32::MAX as u64 || !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(FieldSpec(Kind::Prime(p)))
    }

    pub fn rationals() -> Self {
        FieldSpec(Kind::Rationals)
    }

    /// The prime modulus, or `None` for the rationals.
    pub fn modulus(&self) -> Option<u64> {
        match self.0 {
            Kind::Prime(p) => Some(p),
            Kind::Rationals => None,
        }
    }

    pub fn characteristic(&self) -> u64 {
        self.modulus().unwrap_or(0)
    }

    pub fn zero(&self) -> FieldValue {
        self.from_i64(0)
    }

    pub fn one(&self) -> FieldValue {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> FieldValue {
        match self.0 {
            Kind::Prime(p) => FieldValue::Residue {
                value: n.rem_euclid(p as i64) as u64,
                modulus: p,
            },
            Kind::Rationals => FieldValue::Rational(BigRational::from_integer(n.into())),
        }
    }

    /// Canonical image of an arbitrary integer.
    pub fn from_integer(&self, n: &BigInt) -> FieldValue {
        match self.0 {
            Kind::Prime(p) => {
                let r = n.mod_floor(&BigInt::from(p));
                FieldValue::Residue {
                    value: r.to_u64().expect("residue fits in u64"),
                    modulus: p,
                }
            }
            Kind::Rationals => FieldValue::Rational(BigRational::from_integer(n.clone())),
        }
    }

    /// Image of the fraction `num/den`; fails when `den` vanishes in the field.
    pub fn from_fraction(&self, num: &BigInt, den: &BigInt) -> Result<FieldValue, FieldError> {
        match self.0 {
            Kind::Prime(_) => self.from_integer(num).try_div(&self.from_integer(den)),
            Kind::Rationals => {
                if den.is_zero() {
                    return Err(FieldError::DivisionByZero);
                }
                Ok(FieldValue::Rational(BigRational::new(
                    num.clone(),
                    den.clone(),
                )))
            }
        }
    }

    /// Parses `[+-]int` or `[+-]num/den`.
    pub fn parse_value(&self, text: &str) -> Result<FieldValue, FieldError> {
        let t = text.trim();
        let bad = || FieldError::Parse(text.to_string());
        let (num, den) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let num = BigInt::from_str(num).map_err(|_| bad())?;
        if den.starts_with(['+', '-']) {
            return Err(bad());
        }
        let den = BigInt::from_str(den).map_err(|_| bad())?;
        self.from_fraction(&num, &den)
    }

    /// Every element of a prime field, in residue order.
    pub fn elements(&self) -> Option<impl Iterator<Item = FieldValue> + '_> {
        let p = self.modulus()?;
        Some((0..p).map(move |v| FieldValue::Residue {
            value: v,
            modulus: p,
        }))
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Kind::Prime(p) => write!(f, "GF({p})"),
            Kind::Rationals => write!(f, "QQ"),
        }
    }
}

/// Deterministic trial division; moduli are at most 32 bits.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Inv,
}

/// An exact scalar in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FieldValue {
    Residue { value: u64, modulus: u64 },
    Rational(BigRational),
}

impl FieldValue {
    pub fn spec(&self) -> FieldSpec {
        match self {
            FieldValue::Residue { modulus, .. } => FieldSpec(Kind::Prime(*modulus)),
            FieldValue::Rational(_) => FieldSpec::rationals(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldValue::Residue { value, .. } => *value == 0,
            FieldValue::Rational(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldValue::Residue { value, .. } => *value == 1,
            FieldValue::Rational(r) => r.is_one(),
        }
    }

    /// True when the value prints with a leading minus sign.
    pub fn is_negative(&self) -> bool {
        match self {
            FieldValue::Residue { .. } => false,
            FieldValue::Rational(r) => r.is_negative(),
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            FieldValue::Rational(r) => Some(r),
            FieldValue::Residue { .. } => None,
        }
    }

    fn check(&self, other: &FieldValue) -> Result<(), FieldError> {
        if self.spec() == other.spec() {
            Ok(())
        } else {
            Err(FieldError::FieldMismatch(self.spec(), other.spec()))
        }
    }

    pub fn try_add(&self, other: &FieldValue) -> Result<FieldValue, FieldError> {
        self.check(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn try_sub(&self, other: &FieldValue) -> Result<FieldValue, FieldError> {
        self.check(other)?;
        Ok(self.add_unchecked(&other.neg_ref()))
    }

    pub fn try_mul(&self, other: &FieldValue) -> Result<FieldValue, FieldError> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn try_div(&self, other: &FieldValue) -> Result<FieldValue, FieldError> {
        self.check(other)?;
        Ok(self.mul_unchecked(&other.inv()?))
    }

    pub fn inv(&self) -> Result<FieldValue, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(match self {
            FieldValue::Residue { value, modulus } => FieldValue::Residue {
                value: pow_mod(*value, modulus - 2, *modulus),
                modulus: *modulus,
            },
            FieldValue::Rational(r) => FieldValue::Rational(r.recip()),
        })
    }

    pub fn pow(&self, mut e: u64) -> FieldValue {
        let mut base = self.clone();
        let mut acc = self.spec().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            base = base.mul_unchecked(&base);
            e >>= 1;
        }
        acc
    }

    fn neg_ref(&self) -> FieldValue {
        match self {
            FieldValue::Residue { value, modulus } => FieldValue::Residue {
                value: if *value == 0 { 0 } else { modulus - value },
                modulus: *modulus,
            },
            FieldValue::Rational(r) => FieldValue::Rational(-r),
        }
    }

    fn add_unchecked(&self, other: &FieldValue) -> FieldValue {
        match (self, other) {
            (FieldValue::Residue { value: a, modulus }, FieldValue::Residue { value: b, .. }) => {
                FieldValue::Residue {
                    value: (a + b) % modulus,
                    modulus: *modulus,
                }
            }
            (FieldValue::Rational(a), FieldValue::Rational(b)) => FieldValue::Rational(a + b),
            _ => panic!("field mismatch: {} vs {}", self.spec(), other.spec()),
        }
    }

    fn mul_unchecked(&self, other: &FieldValue) -> FieldValue {
        match (self, other) {
            (FieldValue::Residue { value: a, modulus }, FieldValue::Residue { value: b, .. }) => {
                FieldValue::Residue {
                    value: a * b % modulus,
                    modulus: *modulus,
                }
            }
            (FieldValue::Rational(a), FieldValue::Rational(b)) => FieldValue::Rational(a * b),
            _ => panic!("field mismatch: {} vs {}", self.spec(), other.spec()),
        }
    }
}

fn pow_mod(mut base: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    acc
}

/// Checked arithmetic dispatcher over [`ArithOp`].
pub fn f_arith(
    op: ArithOp,
    a: &FieldValue,
    b: Option<&FieldValue>,
) -> Result<FieldValue, FieldError> {
    let rhs = || b.ok_or_else(|| FieldError::Parse(format!("{op:?} needs two operands")));
    match op {
        ArithOp::Add => a.try_add(rhs()?),
        ArithOp::Sub => a.try_sub(rhs()?),
        ArithOp::Mul => a.try_mul(rhs()?),
        ArithOp::Div => a.try_div(rhs()?),
        ArithOp::Neg => Ok(-a),
        ArithOp::Inv => a.inv(),
    }
}

// The operator impls panic on mismatched fields; callers inside the crate
// only combine values from one ring.
impl Add for &FieldValue {
    type Output = FieldValue;
    fn add(self, rhs: &FieldValue) -> FieldValue {
        self.add_unchecked(rhs)
    }
}

impl Sub for &FieldValue {
    type Output = FieldValue;
    fn sub(self, rhs: &FieldValue) -> FieldValue {
        self.add_unchecked(&rhs.neg_ref())
    }
}

impl Mul for &FieldValue {
    type Output = FieldValue;
    fn mul(self, rhs: &FieldValue) -> FieldValue {
        self.mul_unchecked(rhs)
    }
}

impl Neg for &FieldValue {
    type Output = FieldValue;
    fn neg(self) -> FieldValue {
        self.neg_ref()
    }
}

impl Neg for FieldValue {
    type Output = FieldValue;
    fn neg(self) -> FieldValue {
        self.neg_ref()
    }
}

impl fmt::Display for FieldValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldValue::Residue { value, .. } => write!(f, "{value}"),
            FieldValue::Rational(r) if r.is_integer() => write!(f, "{}", r.numer()),
            FieldValue::Rational(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}
