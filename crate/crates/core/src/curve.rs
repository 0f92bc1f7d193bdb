//! Miura-form curves: validation, genus, point ideals and ideal degrees.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use thiserror::Error;

use crate::field::{FieldSpec, FieldValue};
use crate::groebner::{groebner_basis, Basis, GroebnerError};
use crate::jacobian::IdealHandle;
use crate::polyring::{same_ring, MiuraOrder, Monomial, PolyError, PolyRing, Polynomial};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("generator {index} is not monic: {generator}")]
    NotMonic { index: usize, generator: String },
    #[error("leading exponent of generator {index} is canonical (in B): {generator}")]
    LeadingExponentInB { index: usize, generator: String },
    #[error("generator {index} has a body monomial {monomial} outside B or above its leading pole order")]
    BodyMonomialNotInB { index: usize, monomial: String },
    #[error("expected {expected} curve generators, got {got}")]
    WrongGeneratorCount { expected: usize, got: usize },
    #[error("weights {0:?} are not positive and coprime")]
    WeightsNotCoprime(Vec<u64>),
    #[error("the curve generators generate the unit ideal")]
    UnitCurveIdeal,
    #[error("point is not on the curve: {generator} does not vanish")]
    PointNotOnCurve { generator: String },
    #[error("expected {expected} coordinates, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("ideal is not zero-dimensional")]
    NotZeroDimensional,
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
}

/// A validated Miura curve: the coordinate ring `K[x_1..x_t] / ⟨F_M⟩`.
#[derive(Debug)]
pub struct CurveRing {
    ring: Arc<PolyRing>,
    gens: Vec<Polynomial>,
    gb: Basis,
    genus: u64,
}

impl PartialEq for CurveRing {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.gens == other.gens
    }
}

impl Eq for CurveRing {}

/// Builds a curve from textual generators.
pub fn make_curve(
    field: FieldSpec,
    vars: &[&str],
    weights: &[u64],
    gens: &[&str],
) -> Result<Arc<CurveRing>, CurveError> {
    let ring = PolyRing::new(
        field,
        vars.iter().map(|v| v.to_string()).collect(),
        weights.to_vec(),
    )
    .map_err(|e| match e {
        PolyError::InvalidWeights(w) => CurveError::WeightsNotCoprime(w),
        e => e.into(),
    })?;
    let gens = gens
        .iter()
        .map(|g| Polynomial::parse(g, &ring))
        .collect::<Result<Vec<_>, _>>()?;
    CurveRing::new(ring, gens)
}

impl CurveRing {
    /// Validates the Miura shape of every generator and precomputes the
    /// curve's Gröbner basis and genus.
    pub fn new(ring: Arc<PolyRing>, gens: Vec<Polynomial>) -> Result<Arc<Self>, CurveError> {
        let t = ring.arity();
        if gens.len() + 1 != t {
            return Err(CurveError::WrongGeneratorCount {
                expected: t - 1,
                got: gens.len(),
            });
        }
        if gens.iter().any(|g| !same_ring(g.ring(), &ring)) {
            return Err(PolyError::RingMismatch.into());
        }
        let order = ring.order();
        for (index, g) in gens.iter().enumerate() {
            check_miura_shape(order, index, g)?;
        }
        let gb = groebner_basis(&ring, &gens)?;
        if gb.is_unit() {
            return Err(CurveError::UnitCurveIdeal);
        }
        let genus = genus(order.weights())?;
        Ok(Arc::new(CurveRing {
            ring,
            gens,
            gb,
            genus,
        }))
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn field(&self) -> FieldSpec {
        self.ring.field()
    }

    pub fn order(&self) -> &MiuraOrder {
        self.ring.order()
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.gens
    }

    pub fn basis(&self) -> &Basis {
        &self.gb
    }

    pub fn genus(&self) -> u64 {
        self.genus
    }

    pub fn parse(&self, text: &str) -> Result<Polynomial, PolyError> {
        Polynomial::parse(text, &self.ring)
    }

    /// True when `f` vanishes identically on the curve.
    pub fn is_zero_function(&self, f: &Polynomial) -> bool {
        self.gb.contains(f)
    }

    pub fn contains_point(&self, coords: &[FieldValue]) -> Result<bool, CurveError> {
        for g in &self.gens {
            if !g.evaluate(coords)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `⟨x_1 − α_1, …, x_t − α_t⟩` for a point on the curve.
    pub fn point_ideal(self: &Arc<Self>, coords: &[FieldValue]) -> Result<IdealHandle, CurveError> {
        let t = self.ring.arity();
        if coords.len() != t {
            return Err(CurveError::ArityMismatch {
                expected: t,
                got: coords.len(),
            });
        }
        for g in &self.gens {
            if !g.evaluate(coords)?.is_zero() {
                return Err(CurveError::PointNotOnCurve {
                    generator: g.to_string(),
                });
            }
        }
        let gens = coords
            .iter()
            .enumerate()
            .map(|(i, a)| {
                &Polynomial::var(&self.ring, i) - &Polynomial::constant(&self.ring, a.clone())
            })
            .collect();
        Ok(IdealHandle::new(self, gens).expect("point ideal lives in the curve ring"))
    }

    /// Every affine point over a prime field, by exhaustive search.
    pub fn affine_points(&self) -> Option<Vec<Vec<FieldValue>>> {
        let elements: Vec<FieldValue> = self.field().elements()?.collect();
        let mut points = vec![Vec::new()];
        for _ in 0..self.ring.arity() {
            points = points
                .into_iter()
                .flat_map(|p: Vec<FieldValue>| {
                    elements.iter().map(move |a| {
                        let mut q = p.clone();
                        q.push(a.clone());
                        q
                    })
                })
                .collect();
        }
        points.retain(|p| self.contains_point(p).unwrap_or(false));
        Some(points)
    }

    /// Affine Jacobian criterion: the curve generators together with all
    /// maximal minors of their Jacobian matrix generate the unit ideal.
    pub fn is_nonsingular_affine(&self) -> bool {
        let t = self.ring.arity();
        let jac: Vec<Vec<Polynomial>> = self
            .gens
            .iter()
            .map(|g| (0..t).map(|v| g.derivative(v)).collect())
            .collect();
        let mut gens = self.gens.clone();
        for skipped in 0..t {
            let square: Vec<Vec<Polynomial>> = jac
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|&(c, _)| c != skipped)
                        .map(|(_, p)| p.clone())
                        .collect()
                })
                .collect();
            gens.push(determinant(&self.ring, &square));
        }
        groebner_basis(&self.ring, &gens)
            .map(|b| b.is_unit())
            .unwrap_or(false)
    }

    pub fn describe(&self) -> String {
        self.gens
            .iter()
            .map(|g| g.to_string())
            .collect::<Vec<_>>()
            .join("; ")
    }
}

impl fmt::Display for CurveRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

/// Cofactor expansion along the first row.
fn determinant(ring: &Arc<PolyRing>, m: &[Vec<Polynomial>]) -> Polynomial {
    match m.len() {
        0 => Polynomial::one(ring),
        1 => m[0][0].clone(),
        n => {
            let mut acc = Polynomial::zero(ring);
            for col in 0..n {
                let minor: Vec<Vec<Polynomial>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != col)
                            .map(|(_, p)| p.clone())
                            .collect()
                    })
                    .collect();
                let term = &m[0][col] * &determinant(ring, &minor);
                acc = if col % 2 == 0 {
                    &acc + &term
                } else {
                    &acc - &term
                };
            }
            acc
        }
    }
}

/// All exponent vectors with the given Ψ, in lexicographic order.
fn psi_fiber(weights: &[u64], psi: u64) -> Vec<Monomial> {
    fn go(weights: &[u64], left: u64, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        match weights.split_first() {
            None if left == 0 => out.push(Monomial::new(prefix.iter().copied())),
            None => {}
            Some((&w, rest)) => {
                for e in 0..=left / w {
                    prefix.push(e as u32);
                    go(rest, left - e * w, prefix, out);
                    prefix.pop();
                }
            }
        }
    }
    let mut out = Vec::new();
    go(weights, psi, &mut Vec::new(), &mut out);
    out
}

/// Whether `n` is the ≺-minimum of its Ψ-fiber, i.e. a canonical exponent.
pub fn in_b(order: &MiuraOrder, n: &Monomial) -> bool {
    let psi = order.weight(n);
    psi_fiber(order.weights(), psi)
        .iter()
        .all(|other| order.compare(n, other) != Ordering::Greater)
}

fn check_miura_shape(order: &MiuraOrder, index: usize, g: &Polynomial) -> Result<(), CurveError> {
    let (lead, coeff) = g.leading_term()?;
    if in_b(order, lead) {
        return Err(CurveError::LeadingExponentInB {
            index,
            generator: g.to_string(),
        });
    }
    let lead_psi = order.weight(lead);
    for (n, c) in &g.terms()[1..] {
        if !in_b(order, n) || order.weight(n) > lead_psi {
            let mono = Polynomial::term(g.ring(), n.clone(), c.spec().one());
            return Err(CurveError::BodyMonomialNotInB {
                index,
                monomial: mono.to_string(),
            });
        }
    }
    if !coeff.is_one() {
        return Err(CurveError::NotMonic {
            index,
            generator: g.to_string(),
        });
    }
    Ok(())
}

/// Number of gaps of the numerical semigroup generated by `weights`.
pub fn genus(weights: &[u64]) -> Result<u64, CurveError> {
    let g = weights.iter().fold(0u64, |g, w| g.gcd(w));
    if weights.is_empty() || weights.contains(&0) || g != 1 {
        return Err(CurveError::WeightsNotCoprime(weights.to_vec()));
    }
    let smallest = *weights.iter().min().unwrap();
    let mut representable = vec![true];
    let mut run = 1u64;
    let mut gaps = 0u64;
    let mut n = 0usize;
    // Once `smallest` consecutive integers are representable, all larger ones are.
    while run < smallest {
        n += 1;
        let hit = weights
            .iter()
            .any(|&w| (w as usize) <= n && representable[n - w as usize]);
        representable.push(hit);
        if hit {
            run += 1;
        } else {
            run = 0;
            gaps += 1;
        }
    }
    Ok(gaps)
}

/// Colength of an ideal: the number of standard monomials of its preimage
/// Gröbner basis.
pub fn ideal_degree(ideal: &IdealHandle) -> Result<u64, CurveError> {
    let basis = ideal.preimage();
    if basis.is_unit() {
        return Ok(0);
    }
    let t = basis.ring().arity();
    let mut bounds = vec![None; t];
    for m in basis.leading_monomials() {
        let e = m.exponents();
        let nonzero: Vec<usize> = (0..t).filter(|&i| e[i] > 0).collect();
        if let [v] = nonzero[..] {
            bounds[v] = Some(bounds[v].map_or(e[v], |b: u32| b.min(e[v])));
        }
    }
    let bounds: Vec<u32> = bounds
        .into_iter()
        .collect::<Option<_>>()
        .ok_or(CurveError::NotZeroDimensional)?;
    let lms: Vec<&Monomial> = basis.leading_monomials().collect();
    let mut count = 0u64;
    let mut exps = vec![0u32; t];
    'outer: loop {
        let m = Monomial::new(exps.iter().copied());
        if !lms.iter().any(|l| l.divides(&m)) {
            count += 1;
        }
        for i in 0..t {
            exps[i] += 1;
            if exps[i] < bounds[i] {
                continue 'outer;
            }
            exps[i] = 0;
        }
        break;
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    fn miura5() -> Arc<CurveRing> {
        make_curve(
            gf(5),
            &["x", "y", "z"],
            &[4, 6, 5],
            &["y^2 - x^3 - 1", "z^2 - x*y - 1"],
        )
        .unwrap()
    }

    fn elliptic_q() -> Arc<CurveRing> {
        make_curve(
            FieldSpec::rationals(),
            &["x", "y"],
            &[2, 3],
            &["y^2 - x^3 - 3*x"],
        )
        .unwrap()
    }

    fn pt(c: &CurveRing, v: &[i64]) -> Vec<FieldValue> {
        v.iter().map(|&a| c.field().from_i64(a)).collect()
    }

    fn m(e: &[u32]) -> Monomial {
        Monomial::new(e.iter().copied())
    }

    #[test]
    fn accepts_reference_curves() {
        let e = elliptic_q();
        let o = e.order();
        assert!(!in_b(o, &m(&[0, 2])));
        assert!(in_b(o, &m(&[3, 0])));
        assert!(in_b(o, &m(&[1, 0])));
        assert_eq!(e.genus(), 1);
        let c = miura5();
        let o = c.order();
        assert!(!in_b(o, &m(&[0, 2, 0])));
        assert!(!in_b(o, &m(&[0, 0, 2])));
        assert!(in_b(o, &m(&[1, 1, 0])));
        assert!(in_b(o, &m(&[3, 0, 0])));
        assert_eq!(c.genus(), 4);
    }

    #[test]
    fn rejects_malformed_generators() {
        let q = FieldSpec::rationals();
        let err = make_curve(q, &["x", "y"], &[2, 3], &["y^2 - x^3 - y^3"]).unwrap_err();
        assert!(
            matches!(err, CurveError::BodyMonomialNotInB { .. }),
            "{err}"
        );
        let err = make_curve(q, &["x", "y"], &[2, 3], &["2*y^2 - x^3"]).unwrap_err();
        assert!(matches!(err, CurveError::NotMonic { .. }), "{err}");
        let err = make_curve(q, &["x", "y"], &[2, 3], &["x^3 - x"]).unwrap_err();
        assert!(
            matches!(err, CurveError::LeadingExponentInB { .. }),
            "{err}"
        );
        let err = make_curve(q, &["x", "y"], &[2, 3], &["y^2 - x^3", "y"]).unwrap_err();
        assert_eq!(
            err,
            CurveError::WrongGeneratorCount {
                expected: 1,
                got: 2
            }
        );
        let err = make_curve(q, &["x", "y"], &[2, 4], &["y^2 - x^4"]).unwrap_err();
        assert_eq!(err, CurveError::WeightsNotCoprime(vec![2, 4]));
        let err = make_curve(q, &["x", "y"], &[2, 3], &["y^2 - x^3 + 1", "x"]).unwrap_err();
        assert!(matches!(err, CurveError::WrongGeneratorCount { .. }));
    }

    #[test]
    fn genus_values() {
        assert_eq!(genus(&[2, 3]).unwrap(), 1);
        assert_eq!(genus(&[4, 6, 5]).unwrap(), 4);
        assert_eq!(genus(&[2, 5]).unwrap(), 2);
        assert_eq!(genus(&[1]).unwrap(), 0);
        assert!(genus(&[4, 6]).is_err());
    }

    /// Independent gap count: test every integer below the Frobenius bound.
    fn gaps_brute(a: u64, b: u64) -> u64 {
        let limit = a * b;
        (1..limit)
            .filter(|&n| !(0..=n / a).any(|i| (n - i * a).is_multiple_of(b)))
            .count() as u64
    }

    #[test]
    fn genus_matches_brute_force_pairs() {
        for a in 2..=9u64 {
            for b in a + 1..=9 {
                if a.gcd(&b) == 1 {
                    assert_eq!(genus(&[a, b]).unwrap(), gaps_brute(a, b), "({a},{b})");
                    assert_eq!(genus(&[a, b]).unwrap(), (a - 1) * (b - 1) / 2);
                }
            }
        }
    }

    #[test]
    fn point_ideals() {
        let c = miura5();
        let j = c.point_ideal(&pt(&c, &[2, 2, 0])).unwrap();
        let expected = IdealHandle::new(
            &c,
            ["x - 2", "y - 2", "z"]
                .iter()
                .map(|s| c.parse(s).unwrap())
                .collect(),
        )
        .unwrap();
        assert!(j.ideal_equal(&expected).unwrap());
        assert_eq!(ideal_degree(&j).unwrap(), 1);
        let err = c.point_ideal(&pt(&c, &[1, 1, 1])).unwrap_err();
        assert_eq!(
            err,
            CurveError::PointNotOnCurve {
                generator: "y^2 + 4*x^3 + 4".into()
            }
        );
        let e = elliptic_q();
        let o = e.point_ideal(&pt(&e, &[0, 0])).unwrap();
        assert_eq!(
            o.preimage()
                .elements()
                .iter()
                .map(|g| g.to_string())
                .collect::<Vec<_>>(),
            ["x", "y"]
        );
    }

    #[test]
    fn degrees() {
        let c = miura5();
        let i =
            IdealHandle::new(&c, vec![c.parse("x + 1").unwrap(), c.parse("y").unwrap()]).unwrap();
        assert_eq!(ideal_degree(&i).unwrap(), 2);
        let a = IdealHandle::new(
            &c,
            [
                "x^2 + y + z + 2*x",
                "x*z - 2*y - 2*z + 2*x",
                "x*y - y - z - x",
                "y*z - 2*y - 2*z - x + 1",
            ]
            .iter()
            .map(|s| c.parse(s).unwrap())
            .collect(),
        )
        .unwrap();
        assert_eq!(ideal_degree(&a).unwrap(), 4);
        assert_eq!(ideal_degree(&IdealHandle::unit(&c)).unwrap(), 0);
        let whole_curve = IdealHandle::new(&c, vec![]).unwrap();
        assert_eq!(
            ideal_degree(&whole_curve),
            Err(CurveError::NotZeroDimensional)
        );
    }

    #[test]
    fn nonsingularity() {
        assert!(elliptic_q().is_nonsingular_affine());
        let cusp =
            make_curve(FieldSpec::rationals(), &["x", "y"], &[2, 3], &["y^2 - x^3"]).unwrap();
        assert!(!cusp.is_nonsingular_affine());
        assert!(miura5().is_nonsingular_affine());
    }

    #[test]
    fn enumerates_points() {
        let c = make_curve(gf(5), &["x", "y"], &[2, 3], &["y^2 - x^3 - 3*x"]).unwrap();
        assert_eq!(c.affine_points().unwrap().len(), 9);
        assert!(elliptic_q().affine_points().is_none());
    }
}
