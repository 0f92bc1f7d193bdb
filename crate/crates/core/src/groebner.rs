//! Buchberger's algorithm and the ideal operations built on it.
//!
//! Every [`Basis`] handed out by this module is the reduced Gröbner basis of
//! its ideal under the ring's order: monic, auto-reduced and sorted
//! ascending by leading monomial. Two ideals are equal iff their bases are.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::field::FieldValue;
use crate::polyring::{same_ring, Monomial, PolyError, PolyRing, Polynomial};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroebnerError {
    #[error("ideals or polynomials belong to different rings")]
    RingMismatch,
    #[error("colon by the zero ideal")]
    ZeroDivisorIdeal,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// A reduced Gröbner basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Basis {
    ring: Arc<PolyRing>,
    elements: Vec<Polynomial>,
}

impl Basis {
    pub fn zero(ring: &Arc<PolyRing>) -> Self {
        Basis {
            ring: ring.clone(),
            elements: Vec::new(),
        }
    }

    pub fn unit(ring: &Arc<PolyRing>) -> Self {
        Basis {
            ring: ring.clone(),
            elements: vec![Polynomial::one(ring)],
        }
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn elements(&self) -> &[Polynomial] {
        &self.elements
    }

    pub fn is_zero(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.elements.len() == 1 && self.elements[0].is_constant()
    }

    pub fn leading_monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.elements.iter().map(|g| g.lm())
    }

    pub fn normal_form(&self, f: &Polynomial) -> Polynomial {
        normal_form(f, &self.elements)
    }

    pub fn contains(&self, f: &Polynomial) -> bool {
        self.normal_form(f).is_zero()
    }

    fn check(&self, other: &Basis) -> Result<(), GroebnerError> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(GroebnerError::RingMismatch)
        }
    }
}

pub fn s_polynomial(f: &Polynomial, g: &Polynomial) -> Result<Polynomial, GroebnerError> {
    if !same_ring(f.ring(), g.ring()) {
        return Err(GroebnerError::RingMismatch);
    }
    if f.is_zero() || g.is_zero() {
        return Err(PolyError::ZeroPolynomial.into());
    }
    Ok(spoly(f, g))
}

fn spoly(f: &Polynomial, g: &Polynomial) -> Polynomial {
    let lcm = f.lm().lcm(g.lm());
    let fm = lcm.div(f.lm()).expect("lcm is a multiple");
    let gm = lcm.div(g.lm()).expect("lcm is a multiple");
    let ginv = g.lc().inv().expect("nonzero leading coefficient");
    let finv = f.lc().inv().expect("nonzero leading coefficient");
    f.mul_term(&fm, &finv).sub_scaled(&ginv, &gm, g)
}

/// Full multivariate division remainder. The greatest reducible monomial is
/// eliminated first; among applicable divisors the one with the ≺-smallest
/// leading monomial wins (earliest on ties).
pub fn normal_form(f: &Polynomial, divisors: &[Polynomial]) -> Polynomial {
    let order = f.ring().order();
    let mut rest = f.clone();
    let mut remainder = Vec::new();
    loop {
        let step = match rest.leading_term() {
            Err(_) => break,
            Ok((m, c)) => {
                let mut best: Option<&Polynomial> = None;
                for g in divisors {
                    if !g.is_zero()
                        && g.lm().divides(m)
                        && best.is_none_or(|b| order.compare(g.lm(), b.lm()) == Ordering::Less)
                    {
                        best = Some(g);
                    }
                }
                best.map(|g| {
                    let shift = m.div(g.lm()).expect("divisor checked");
                    let scale = c * &g.lc().inv().expect("nonzero leading coefficient");
                    (shift, scale, g)
                })
            }
        };
        match step {
            Some((shift, scale, g)) => rest = rest.sub_scaled(&scale, &shift, g),
            None => remainder.extend(rest.pop_leading()),
        }
    }
    Polynomial::from_terms(f.ring(), remainder).expect("terms from the same ring")
}

/// Exact quotient `h / b`; panics if `b` does not divide `h`.
pub(crate) fn divide_exact(h: &Polynomial, b: &Polynomial) -> Polynomial {
    let mut rest = h.clone();
    let mut quotient = Vec::new();
    let binv = b.lc().inv().expect("nonzero divisor");
    while let Ok((m, c)) = rest.leading_term() {
        let shift = m
            .div(b.lm())
            .unwrap_or_else(|| panic!("inexact division of {h} by {b}"));
        let scale = c * &binv;
        quotient.push((shift.clone(), scale.clone()));
        rest = rest.sub_scaled(&scale, &shift, b);
    }
    Polynomial::from_terms(h.ring(), quotient).expect("terms from the same ring")
}

/// Scales `f` to keep coefficients small: monic over GF(p), primitive with a
/// positive leading coefficient over the rationals.
fn normalize(f: &Polynomial) -> Polynomial {
    if f.ring().field().modulus().is_some() {
        return f.monic();
    }
    let rationals: Vec<&BigRational> = f
        .terms()
        .iter()
        .filter_map(|(_, c)| c.as_rational())
        .collect();
    let den = rationals
        .iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let num = rationals.iter().fold(BigInt::zero(), |acc, r| {
        acc.gcd(&(r.numer() * &den / r.denom()))
    });
    if num.is_zero() {
        return f.clone();
    }
    let sign = if rationals[0].is_negative() {
        -BigInt::one()
    } else {
        BigInt::one()
    };
    f.scale(&FieldValue::Rational(BigRational::new(den * sign, num)))
}

#[derive(Debug, Clone)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

/// The reduced Gröbner basis of the ideal generated by `gens`.
pub fn groebner_basis(ring: &Arc<PolyRing>, gens: &[Polynomial]) -> Result<Basis, GroebnerError> {
    if gens.iter().any(|g| !same_ring(g.ring(), ring)) {
        return Err(GroebnerError::RingMismatch);
    }
    Ok(buchberger(ring, gens))
}

fn buchberger(ring: &Arc<PolyRing>, gens: &[Polynomial]) -> Basis {
    let order = ring.order();
    let mut basis: Vec<Polynomial> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();
    let mut pending: HashSet<(usize, usize)> = HashSet::new();

    let insert = |basis: &mut Vec<Polynomial>,
                  pairs: &mut Vec<Pair>,
                  pending: &mut HashSet<(usize, usize)>,
                  f: Polynomial|
     -> bool {
        let f = normalize(&f);
        if f.is_constant() {
            return true;
        }
        let j = basis.len();
        for (i, g) in basis.iter().enumerate() {
            pairs.push(Pair {
                i,
                j,
                lcm: g.lm().lcm(f.lm()),
            });
            pending.insert((i, j));
        }
        basis.push(f);
        false
    };

    for g in gens {
        let r = normal_form(g, &basis);
        if !r.is_zero() && insert(&mut basis, &mut pairs, &mut pending, r) {
            return Basis::unit(ring);
        }
    }

    while !pairs.is_empty() {
        // Normal strategy: the pair with the smallest lcm goes first.
        let mut best = 0;
        for (k, p) in pairs.iter().enumerate().skip(1) {
            let b = &pairs[best];
            let ord = order
                .compare(&p.lcm, &b.lcm)
                .then((p.i, p.j).cmp(&(b.i, b.j)));
            if ord == Ordering::Less {
                best = k;
            }
        }
        let Pair { i, j, lcm } = pairs.swap_remove(best);
        pending.remove(&(i, j));

        if basis[i].lm().is_coprime(basis[j].lm()) {
            continue;
        }
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && basis[k].lm().divides(&lcm)
                && !pending.contains(&(i.min(k), i.max(k)))
                && !pending.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }
        let r = normal_form(&spoly(&basis[i], &basis[j]), &basis);
        if !r.is_zero() && insert(&mut basis, &mut pairs, &mut pending, r) {
            return Basis::unit(ring);
        }
    }
    reduce_basis(ring, basis)
}

/// Minimalizes and inter-reduces a Gröbner basis.
fn reduce_basis(ring: &Arc<PolyRing>, mut basis: Vec<Polynomial>) -> Basis {
    let order = ring.order();
    basis.sort_by(|a, b| order.compare(a.lm(), b.lm()));
    let mut minimal: Vec<Polynomial> = Vec::new();
    for g in basis {
        if !minimal.iter().any(|h| h.lm().divides(g.lm())) {
            minimal.push(g);
        }
    }
    let reduced = (0..minimal.len())
        .map(|k| {
            let g = &minimal[k];
            let head = Polynomial::term(ring, g.lm().clone(), g.lc().clone());
            let tail = g - &head;
            let others: Vec<Polynomial> = minimal
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != k)
                .map(|(_, h)| h.clone())
                .collect();
            (&head + &normal_form(&tail, &others)).monic()
        })
        .collect();
    Basis {
        ring: ring.clone(),
        elements: reduced,
    }
}

pub fn ideal_product(a: &Basis, b: &Basis) -> Result<Basis, GroebnerError> {
    a.check(b)?;
    let gens: Vec<Polynomial> = a
        .elements
        .iter()
        .flat_map(|f| b.elements.iter().map(move |g| f * g))
        .collect();
    Ok(buchberger(&a.ring, &gens))
}

/// `A ∩ B` via `u·A + (1−u)·B` with `u` eliminated.
pub fn ideal_intersect(a: &Basis, b: &Basis) -> Result<Basis, GroebnerError> {
    a.check(b)?;
    if a.is_zero() || b.is_zero() {
        return Ok(Basis::zero(&a.ring));
    }
    if a.is_unit() {
        return Ok(b.clone());
    }
    if b.is_unit() {
        return Ok(a.clone());
    }
    let ext = a.ring.with_elimination_var();
    let u = Polynomial::var(&ext, 0);
    let one_minus_u = &Polynomial::one(&ext) - &u;
    let gens: Vec<Polynomial> = a
        .elements
        .iter()
        .map(|f| &f.embed(&ext, 1) * &u)
        .chain(b.elements.iter().map(|g| &g.embed(&ext, 1) * &one_minus_u))
        .collect();
    let big = buchberger(&ext, &gens);
    let elements = big
        .elements
        .iter()
        .filter_map(|g| g.project(&a.ring, 1))
        .collect();
    Ok(Basis {
        ring: a.ring.clone(),
        elements,
    })
}

/// `A : B = { f | f·B ⊆ A }`, as the intersection of `A : ⟨b⟩` over the
/// generators `b` of `B`.
pub fn ideal_colon(a: &Basis, b: &Basis) -> Result<Basis, GroebnerError> {
    a.check(b)?;
    if b.is_zero() {
        return Err(GroebnerError::ZeroDivisorIdeal);
    }
    let mut acc = Basis::unit(&a.ring);
    for g in &b.elements {
        if a.contains(g) {
            continue;
        }
        let principal = Basis {
            ring: a.ring.clone(),
            elements: vec![g.monic()],
        };
        let meet = ideal_intersect(a, &principal)?;
        let quotients: Vec<Polynomial> = meet.elements.iter().map(|h| divide_exact(h, g)).collect();
        let part = buchberger(&a.ring, &quotients);
        acc = ideal_intersect(&acc, &part)?;
    }
    Ok(acc)
}

pub fn ideal_member(f: &Polynomial, a: &Basis) -> Result<bool, GroebnerError> {
    if !same_ring(f.ring(), &a.ring) {
        return Err(GroebnerError::RingMismatch);
    }
    Ok(a.contains(f))
}

pub fn ideal_equal(a: &Basis, b: &Basis) -> Result<bool, GroebnerError> {
    a.check(b)?;
    Ok(a.elements == b.elements)
}

pub fn is_unit(a: &Basis) -> bool {
    a.is_unit()
}
