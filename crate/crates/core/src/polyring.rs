//! Sparse multivariate polynomials under the weighted Miura order.
//!
//! A monomial `X^N` has pole order `Ψ(N) = Σ n_i·a_i`. Monomials are compared
//! by Ψ first; ties are broken at the first differing exponent, where the
//! larger exponent is the *smaller* monomial. An optional prefix of auxiliary
//! variables (used for elimination) is compared lexicographically before
//! anything else and carries no weight.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_integer::Integer;
use smallvec::SmallVec;
use thiserror::Error;

use crate::field::{FieldError, FieldSpec, FieldValue};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("arity mismatch: expected {expected} exponents, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("polynomials belong to different rings")]
    RingMismatch,
    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,
    #[error("weights must be positive with gcd 1, got {0:?}")]
    InvalidWeights(Vec<u64>),
    #[error("invalid variable list: {0}")]
    InvalidVariables(String),
    #[error("syntax error at position {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// An exponent vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(SmallVec<[u32; 6]>);

impl Monomial {
    pub fn new(exponents: impl IntoIterator<Item = u32>) -> Self {
        Monomial(exponents.into_iter().collect())
    }

    pub fn one(arity: usize) -> Self {
        Monomial(SmallVec::from_elem(0, arity))
    }

    /// The monomial `x_var^exp`.
    pub fn var(arity: usize, var: usize, exp: u32) -> Self {
        let mut m = Self::one(arity);
        m.0[var] = exp;
        m
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `self / divisor`, if exact.
    pub fn div(&self, divisor: &Monomial) -> Option<Monomial> {
        if !divisor.divides(self) {
            return None;
        }
        Some(Monomial(
            self.0.iter().zip(&divisor.0).map(|(a, b)| a - b).collect(),
        ))
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }
}

/// The weighted order ≺, optionally preceded by an elimination block.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MiuraOrder {
    weights: Vec<u64>,
    elimination_prefix: usize,
}

impl MiuraOrder {
    pub fn new(weights: Vec<u64>) -> Result<Self, PolyError> {
        let g = weights.iter().fold(0u64, |g, w| g.gcd(w));
        if weights.is_empty() || weights.contains(&0) || g != 1 {
            return Err(PolyError::InvalidWeights(weights));
        }
        Ok(MiuraOrder {
            weights,
            elimination_prefix: 0,
        })
    }

    /// The same order with `count` auxiliary variables prepended.
    pub fn with_elimination(&self, count: usize) -> Self {
        MiuraOrder {
            weights: self.weights.clone(),
            elimination_prefix: self.elimination_prefix + count,
        }
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn elimination_prefix(&self) -> usize {
        self.elimination_prefix
    }

    pub fn arity(&self) -> usize {
        self.elimination_prefix + self.weights.len()
    }

    fn check(&self, m: &Monomial) -> Result<(), PolyError> {
        if m.arity() == self.arity() {
            Ok(())
        } else {
            Err(PolyError::ArityMismatch {
                expected: self.arity(),
                got: m.arity(),
            })
        }
    }

    /// Ψ over the weighted coordinates.
    pub fn psi(&self, m: &Monomial) -> Result<u64, PolyError> {
        self.check(m)?;
        Ok(self.weight(m))
    }

    pub fn mono_cmp(&self, m: &Monomial, n: &Monomial) -> Result<Ordering, PolyError> {
        self.check(m)?;
        self.check(n)?;
        Ok(self.compare(m, n))
    }

    pub(crate) fn weight(&self, m: &Monomial) -> u64 {
        m.0[self.elimination_prefix..]
            .iter()
            .zip(&self.weights)
            .map(|(&e, &w)| e as u64 * w)
            .sum()
    }

    pub(crate) fn compare(&self, m: &Monomial, n: &Monomial) -> Ordering {
        debug_assert_eq!(m.arity(), n.arity());
        let k = self.elimination_prefix;
        let aux = m.0[..k].cmp(&n.0[..k]);
        if aux != Ordering::Equal {
            return aux;
        }
        let by_weight = self.weight(m).cmp(&self.weight(n));
        if by_weight != Ordering::Equal {
            return by_weight;
        }
        for (a, b) in m.0[k..].iter().zip(&n.0[k..]) {
            if a != b {
                return b.cmp(a);
            }
        }
        Ordering::Equal
    }
}

/// Coefficient field, variable names and monomial order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolyRing {
    field: FieldSpec,
    vars: Vec<String>,
    order: MiuraOrder,
}

impl PolyRing {
    pub fn new(
        field: FieldSpec,
        vars: Vec<String>,
        weights: Vec<u64>,
    ) -> Result<Arc<Self>, PolyError> {
        if vars.len() != weights.len() {
            return Err(PolyError::InvalidVariables(format!(
                "{} variables but {} weights",
                vars.len(),
                weights.len()
            )));
        }
        for (i, v) in vars.iter().enumerate() {
            let ok_ident = v
                .chars()
                .next()
                .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !ok_ident || vars[..i].contains(v) {
                return Err(PolyError::InvalidVariables(format!(
                    "bad or repeated name `{v}`"
                )));
            }
        }
        let order = MiuraOrder::new(weights)?;
        Ok(Arc::new(PolyRing { field, vars, order }))
    }

    /// This ring with one extra auxiliary variable in front, eliminated first.
    pub(crate) fn with_elimination_var(&self) -> Arc<Self> {
        let mut name = String::from("_u");
        while self.vars.contains(&name) {
            name.push('_');
        }
        let mut vars = vec![name];
        vars.extend(self.vars.iter().cloned());
        Arc::new(PolyRing {
            field: self.field,
            vars,
            order: self.order.with_elimination(1),
        })
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn order(&self) -> &MiuraOrder {
        &self.order
    }

    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }
}

pub(crate) fn same_ring(a: &Arc<PolyRing>, b: &Arc<PolyRing>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

pub type Term = (Monomial, FieldValue);

/// A polynomial with terms sorted descending by the ring's order.
#[derive(Debug, Clone)]
pub struct Polynomial {
    ring: Arc<PolyRing>,
    terms: Vec<Term>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl Polynomial {
    pub fn zero(ring: &Arc<PolyRing>) -> Self {
        Polynomial {
            ring: ring.clone(),
            terms: Vec::new(),
        }
    }

    pub fn constant(ring: &Arc<PolyRing>, c: FieldValue) -> Self {
        Self::term(ring, Monomial::one(ring.arity()), c)
    }

    pub fn one(ring: &Arc<PolyRing>) -> Self {
        Self::constant(ring, ring.field().one())
    }

    pub fn var(ring: &Arc<PolyRing>, index: usize) -> Self {
        Self::term(
            ring,
            Monomial::var(ring.arity(), index, 1),
            ring.field().one(),
        )
    }

    pub fn term(ring: &Arc<PolyRing>, m: Monomial, c: FieldValue) -> Self {
        debug_assert_eq!(m.arity(), ring.arity());
        let terms = if c.is_zero() {
            Vec::new()
        } else {
            vec![(m, c)]
        };
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    /// Builds a polynomial from arbitrary terms, combining duplicates.
    pub fn from_terms(ring: &Arc<PolyRing>, mut terms: Vec<Term>) -> Result<Self, PolyError> {
        for (m, c) in &terms {
            ring.order().check(m)?;
            if c.spec() != ring.field() {
                return Err(FieldError::FieldMismatch(c.spec(), ring.field()).into());
            }
        }
        let order = ring.order();
        terms.sort_by(|a, b| order.compare(&b.0, &a.0));
        let mut out: Vec<Term> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc = &*lc + &c,
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        Ok(Polynomial {
            ring: ring.clone(),
            terms: out,
        })
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn leading_term(&self) -> Result<(&Monomial, &FieldValue), PolyError> {
        self.terms
            .first()
            .map(|(m, c)| (m, c))
            .ok_or(PolyError::ZeroPolynomial)
    }

    pub(crate) fn lm(&self) -> &Monomial {
        &self.terms[0].0
    }

    pub(crate) fn lc(&self) -> &FieldValue {
        &self.terms[0].1
    }

    pub(crate) fn pop_leading(&mut self) -> Option<Term> {
        (!self.terms.is_empty()).then(|| self.terms.remove(0))
    }

    /// `-v_∞(f)`: Ψ of the leading monomial.
    pub fn pole_order(&self) -> Result<u64, PolyError> {
        let (m, _) = self.leading_term()?;
        Ok(self.ring.order().weight(m))
    }

    pub fn coefficient(&self, m: &Monomial) -> FieldValue {
        self.terms
            .iter()
            .find(|(t, _)| t == m)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| self.ring.field().zero())
    }

    fn check_ring(&self, other: &Polynomial) -> Result<(), PolyError> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(PolyError::RingMismatch)
        }
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_ring(other)?;
        Ok(self.merge(other, false))
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_ring(other)?;
        Ok(self.merge(other, true))
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_ring(other)?;
        Ok(self.product(other))
    }

    pub fn scale(&self, c: &FieldValue) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    /// `c · m · self`; the order is multiplicative so sorting is preserved.
    pub fn mul_term(&self, m: &Monomial, c: &FieldValue) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(t, a)| (t.mul(m), a * c)).collect(),
        }
    }

    /// Divides by the leading coefficient. The zero polynomial is returned as is.
    pub fn monic(&self) -> Polynomial {
        match self.terms.first() {
            Some((_, c)) if !c.is_one() => {
                self.scale(&c.inv().expect("nonzero leading coefficient"))
            }
            _ => self.clone(),
        }
    }

    /// `self - c·m·g` by a single merge pass.
    pub(crate) fn sub_scaled(&self, c: &FieldValue, m: &Monomial, g: &Polynomial) -> Polynomial {
        let order = self.ring.order();
        let mut out = Vec::with_capacity(self.terms.len() + g.terms.len());
        let mut left = self.terms.iter().peekable();
        let mut right = g
            .terms
            .iter()
            .map(|(t, a)| (t.mul(m), -&(a * c)))
            .peekable();
        loop {
            match (left.peek(), right.peek()) {
                (Some(l), Some(r)) => match order.compare(&l.0, &r.0) {
                    Ordering::Greater => out.push(left.next().unwrap().clone()),
                    Ordering::Less => out.push(right.next().unwrap()),
                    Ordering::Equal => {
                        let (lm, lc) = left.next().unwrap();
                        let (_, rc) = right.next().unwrap();
                        let s = lc + &rc;
                        if !s.is_zero() {
                            out.push((lm.clone(), s));
                        }
                    }
                },
                (Some(_), None) => out.push(left.next().unwrap().clone()),
                (None, Some(_)) => out.push(right.next().unwrap()),
                (None, None) => break,
            }
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: out,
        }
    }

    fn merge(&self, other: &Polynomial, subtract: bool) -> Polynomial {
        let c = if subtract {
            self.ring.field().one()
        } else {
            -self.ring.field().one()
        };
        self.sub_scaled(&c, &Monomial::one(self.ring.arity()), other)
    }

    fn product(&self, other: &Polynomial) -> Polynomial {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (m, a) in &self.terms {
            for (n, b) in &other.terms {
                terms.push((m.mul(n), a * b));
            }
        }
        Polynomial::from_terms(&self.ring, terms).expect("terms from the same ring")
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one(&self.ring);
        for _ in 0..e {
            acc = acc.product(self);
        }
        acc
    }

    pub fn evaluate(&self, point: &[FieldValue]) -> Result<FieldValue, PolyError> {
        if point.len() != self.ring.arity() {
            return Err(PolyError::ArityMismatch {
                expected: self.ring.arity(),
                got: point.len(),
            });
        }
        let field = self.ring.field();
        let mut acc = field.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.exponents()) {
                if x.spec() != field {
                    return Err(FieldError::FieldMismatch(x.spec(), field).into());
                }
                t = &t * &x.pow(e as u64);
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// Formal partial derivative with respect to variable `var`.
    pub fn derivative(&self, var: usize) -> Polynomial {
        let field = self.ring.field();
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.exponents()[var] > 0)
            .map(|(m, c)| {
                let e = m.exponents()[var];
                let mut n = m.clone();
                n.0[var] -= 1;
                (n, c * &field.from_i64(e as i64))
            })
            .collect();
        Polynomial::from_terms(&self.ring, terms).expect("terms from the same ring")
    }

    /// Re-homes the polynomial in `ring`, which must have `pad` extra leading
    /// variables and the same trailing order.
    pub(crate) fn embed(&self, ring: &Arc<PolyRing>, pad: usize) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e: SmallVec<[u32; 6]> = SmallVec::from_elem(0, pad);
                e.extend_from_slice(m.exponents());
                (Monomial(e), c.clone())
            })
            .collect();
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    /// Inverse of [`embed`](Self::embed); `None` if any dropped exponent is nonzero.
    pub(crate) fn project(&self, ring: &Arc<PolyRing>, drop: usize) -> Option<Polynomial> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            if m.exponents()[..drop].iter().any(|&e| e != 0) {
                return None;
            }
            terms.push((
                Monomial(m.exponents()[drop..].iter().copied().collect()),
                c.clone(),
            ));
        }
        Some(Polynomial {
            ring: ring.clone(),
            terms,
        })
    }

    pub fn parse(text: &str, ring: &Arc<PolyRing>) -> Result<Polynomial, PolyError> {
        Parser::new(text, ring).polynomial()
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.try_add(rhs).expect("ring mismatch")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.try_sub(rhs).expect("ring mismatch")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.try_mul(rhs).expect("ring mismatch")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-self.ring.field().one())
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, vars: &[String], m: &Monomial) -> fmt::Result {
    let mut first = true;
    for (v, &e) in vars.iter().zip(m.exponents()) {
        if e == 0 {
            continue;
        }
        if !first {
            f.write_str("*")?;
        }
        first = false;
        f.write_str(v)?;
        if e > 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            let abs = if negative { -c } else { c.clone() };
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs}*")?;
                }
                write_monomial(f, &self.ring.vars, m)?;
            }
        }
        Ok(())
    }
}

/// Recursive-descent parser for `terms joined by +/-`, where a term is an
/// optional coefficient (`int` or `num/den`) and `*`-separated powers.
struct Parser<'a> {
    src: &'a str,
    pos: usize,
    ring: &'a Arc<PolyRing>,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, ring: &'a Arc<PolyRing>) -> Self {
        Parser { src, pos: 0, ring }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, PolyError> {
        Err(PolyError::Syntax {
            pos: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| &self.src[start..self.pos])
    }

    fn polynomial(&mut self) -> Result<Polynomial, PolyError> {
        let mut terms = Vec::new();
        let mut negative = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        loop {
            let (m, mut c) = self.term()?;
            if negative {
                c = -c;
            }
            terms.push((m, c));
            if self.eat('+') {
                negative = false;
            } else if self.eat('-') {
                negative = true;
            } else {
                break;
            }
        }
        self.skip_ws();
        if self.pos != self.src.len() {
            return self.err("expected `+`, `-` or end of input");
        }
        Polynomial::from_terms(self.ring, terms)
    }

    fn term(&mut self) -> Result<Term, PolyError> {
        let field = self.ring.field();
        let mut mono = Monomial::one(self.ring.arity());
        let mut coeff = field.one();
        if let Some(num) = self.digits() {
            let num = num.to_string();
            let text = if self.eat('/') {
                match self.digits() {
                    Some(den) => format!("{num}/{den}"),
                    None => return self.err("expected denominator"),
                }
            } else {
                num
            };
            coeff = field.parse_value(&text)?;
            if !self.eat('*') {
                return Ok((mono, coeff));
            }
        }
        loop {
            self.power(&mut mono)?;
            if !self.eat('*') {
                break;
            }
        }
        Ok((mono, coeff))
    }

    fn power(&mut self, mono: &mut Monomial) -> Result<(), PolyError> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
            _ => return self.err("expected coefficient or variable"),
        }
        while self
            .peek()
            .is_some_and(|c| c.is_ascii_alphanumeric() || c == '_')
        {
            self.pos += 1;
        }
        let name = &self.src[start..self.pos];
        let Some(index) = self.ring.var_index(name) else {
            return Err(PolyError::UnknownVariable(name.to_string()));
        };
        let exp = if self.eat('^') {
            match self.digits().map(str::parse::<u32>) {
                Some(Ok(e)) if e > 0 => e,
                _ => return self.err("expected positive exponent"),
            }
        } else {
            1
        };
        mono.0[index] += exp;
        Ok(())
    }
}
