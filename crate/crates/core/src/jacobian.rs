//! Divisor class group arithmetic through ideal classes.
//!
//! An [`IdealHandle`] is an integral ideal of the curve's coordinate ring,
//! stored as the reduced Gröbner basis of its preimage in `K[x_1..x_t]`
//! (user generators plus the curve generators). A degree-zero divisor
//! class `[E − n·P∞]` corresponds to the class of the ideal of functions
//! vanishing on `E`; the reduced representative of each class is unique.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::curve::CurveRing;
use crate::groebner::{groebner_basis, ideal_colon, Basis, GroebnerError};
use crate::polyring::{same_ring, Polynomial};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JacobianError {
    #[error("the zero ideal has no class")]
    ZeroIdeal,
    #[error("ideals live on different curves")]
    CurveMismatch,
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
}

#[derive(Debug, Clone)]
pub struct IdealHandle {
    curve: Arc<CurveRing>,
    gens: Vec<Polynomial>,
    preimage: Basis,
}

impl IdealHandle {
    /// The ideal generated by `gens` in the coordinate ring of `curve`.
    pub fn new(curve: &Arc<CurveRing>, gens: Vec<Polynomial>) -> Result<Self, JacobianError> {
        if gens.iter().any(|g| !same_ring(g.ring(), curve.ring())) {
            return Err(GroebnerError::RingMismatch.into());
        }
        let mut all = gens.clone();
        all.extend(curve.generators().iter().cloned());
        let preimage = groebner_basis(curve.ring(), &all)?;
        Ok(IdealHandle {
            curve: curve.clone(),
            gens,
            preimage,
        })
    }

    pub fn unit(curve: &Arc<CurveRing>) -> Self {
        IdealHandle {
            curve: curve.clone(),
            gens: vec![Polynomial::one(curve.ring())],
            preimage: Basis::unit(curve.ring()),
        }
    }

    fn from_preimage(curve: &Arc<CurveRing>, preimage: Basis) -> Self {
        IdealHandle {
            curve: curve.clone(),
            gens: preimage.elements().to_vec(),
            preimage,
        }
    }

    pub fn curve(&self) -> &Arc<CurveRing> {
        &self.curve
    }

    /// Generators as supplied by the caller.
    pub fn generators(&self) -> &[Polynomial] {
        &self.gens
    }

    /// Reduced Gröbner basis of the preimage, which always contains the curve ideal.
    pub fn preimage(&self) -> &Basis {
        &self.preimage
    }

    pub fn is_unit(&self) -> bool {
        self.preimage.is_unit()
    }

    /// True for the zero ideal of the coordinate ring (preimage = curve ideal).
    pub fn is_zero(&self) -> bool {
        self.preimage == *self.curve.basis()
    }

    fn check_curve(&self, other: &IdealHandle) -> Result<(), JacobianError> {
        if Arc::ptr_eq(&self.curve, &other.curve) || self.curve == other.curve {
            Ok(())
        } else {
            Err(JacobianError::CurveMismatch)
        }
    }

    fn require_nonzero(&self) -> Result<(), JacobianError> {
        if self.is_zero() {
            Err(JacobianError::ZeroIdeal)
        } else {
            Ok(())
        }
    }

    /// Preimage basis elements whose leading monomial is standard for the
    /// curve ideal. Together with the curve generators they generate the
    /// preimage, and none of them vanishes on the curve.
    fn essential(&self) -> impl Iterator<Item = &Polynomial> {
        let curve_lms: Vec<_> = self.curve.basis().leading_monomials().collect();
        self.preimage.elements().iter().filter(move |g| {
            !curve_lms
                .iter()
                .any(|m| m.divides(g.leading_term().unwrap().0))
        })
    }

    /// Generators modulo the curve, ascending by leading monomial.
    pub fn display_generators(&self) -> Vec<Polynomial> {
        self.essential().cloned().collect()
    }

    /// Exact equality of ideals.
    pub fn ideal_equal(&self, other: &IdealHandle) -> Result<bool, JacobianError> {
        self.check_curve(other)?;
        Ok(self.preimage.elements() == other.preimage.elements())
    }

    /// Ideal product `I·J` in the coordinate ring.
    pub fn product(&self, other: &IdealHandle) -> Result<IdealHandle, JacobianError> {
        self.check_curve(other)?;
        let mut gens: Vec<Polynomial> = self
            .essential()
            .flat_map(|f| other.essential().map(move |g| f * g))
            .collect();
        gens.extend(self.curve.generators().iter().cloned());
        let preimage = groebner_basis(self.curve.ring(), &gens)?;
        Ok(IdealHandle::from_preimage(&self.curve, preimage))
    }

    /// A nonzero element of minimal pole order; the constant 1 for the unit ideal.
    pub fn min_element(&self) -> Result<Polynomial, JacobianError> {
        self.require_nonzero()?;
        if self.is_unit() {
            return Ok(Polynomial::one(self.curve.ring()));
        }
        Ok(self
            .preimage
            .elements()
            .iter()
            .find(|g| !self.curve.is_zero_function(g))
            .expect("a nonzero ideal has an element off the curve ideal")
            .clone())
    }

    /// The reduced ideal of the inverse class: `⟨f⟩ : I` with `f` of minimal
    /// pole order in `I`.
    pub fn inv(&self) -> Result<IdealHandle, JacobianError> {
        let f = self.min_element()?;
        if self.is_unit() {
            return Ok(self.clone());
        }
        let mut gens = vec![f];
        gens.extend(self.curve.generators().iter().cloned());
        let principal = groebner_basis(self.curve.ring(), &gens)?;
        let colon = ideal_colon(&principal, &self.preimage)?;
        Ok(IdealHandle::from_preimage(&self.curve, colon))
    }

    /// The unique reduced ideal in the class of `self`.
    pub fn reduce(&self) -> Result<IdealHandle, JacobianError> {
        self.inv()?.inv()
    }

    pub fn add(&self, other: &IdealHandle) -> Result<IdealHandle, JacobianError> {
        self.require_nonzero()?;
        other.require_nonzero()?;
        self.product(other)?.reduce()
    }

    pub fn double(&self) -> Result<IdealHandle, JacobianError> {
        self.add(self)
    }

    /// `[self]^m` by double-and-add; negative `m` goes through [`inv`](Self::inv).
    pub fn multi(&self, m: i64) -> Result<IdealHandle, JacobianError> {
        self.require_nonzero()?;
        if m < 0 {
            return self.inv()?.multi_unsigned(m.unsigned_abs());
        }
        self.multi_unsigned(m as u64)
    }

    fn multi_unsigned(&self, m: u64) -> Result<IdealHandle, JacobianError> {
        if m == 0 {
            return Ok(IdealHandle::unit(&self.curve));
        }
        let half = self.multi_unsigned(m / 2)?.double()?;
        if m.is_multiple_of(2) {
            Ok(half)
        } else {
            half.add(self)
        }
    }

    pub fn class_eq(&self, other: &IdealHandle) -> Result<bool, JacobianError> {
        self.check_curve(other)?;
        self.reduce()?.ideal_equal(&other.reduce()?)
    }

    pub fn is_identity(&self) -> Result<bool, JacobianError> {
        Ok(self.reduce()?.is_unit())
    }
}

impl fmt::Display for IdealHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unit() {
            return f.write_str("ideal 1");
        }
        if self.is_zero() {
            return f.write_str("ideal 0");
        }
        let gens: Vec<String> = self
            .display_generators()
            .iter()
            .map(|g| g.to_string())
            .collect();
        write!(f, "ideal ({})", gens.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{ideal_degree, make_curve};
    use crate::field::FieldSpec;

    fn elliptic_q() -> Arc<CurveRing> {
        make_curve(
            FieldSpec::rationals(),
            &["x", "y"],
            &[2, 3],
            &["y^2 - x^3 - 3*x"],
        )
        .unwrap()
    }

    fn ideal(c: &Arc<CurveRing>, gens: &[&str]) -> IdealHandle {
        IdealHandle::new(c, gens.iter().map(|g| c.parse(g).unwrap()).collect()).unwrap()
    }

    #[test]
    fn session_one_steps() {
        let c = elliptic_q();
        let j = ideal(&c, &["x", "y"]);
        let k = ideal(&c, &["x - 1", "y - 2"]);
        let l = j.product(&k).unwrap();
        assert_eq!(l.to_string(), "ideal (y - 2*x, x^2 - x)");
        assert_eq!(l.min_element().unwrap().to_string(), "y - 2*x");
        assert_eq!(l.inv().unwrap().to_string(), "ideal (x - 3, y - 6)");
        assert_eq!(j.add(&k).unwrap().to_string(), "ideal (x - 3, y + 6)");
        assert_eq!(l.reduce().unwrap().to_string(), "ideal (x - 3, y + 6)");
    }

    #[test]
    fn min_elements() {
        let c = elliptic_q();
        assert_eq!(
            IdealHandle::unit(&c).min_element().unwrap().to_string(),
            "1"
        );
        assert_eq!(
            ideal(&c, &["x - 3", "y - 6"])
                .min_element()
                .unwrap()
                .to_string(),
            "x - 3"
        );
        let zero = IdealHandle::new(&c, vec![]).unwrap();
        assert_eq!(zero.min_element(), Err(JacobianError::ZeroIdeal));
        assert_eq!(zero.inv().unwrap_err(), JacobianError::ZeroIdeal);
        assert_eq!(zero.to_string(), "ideal 0");
    }

    #[test]
    fn inverse_of_point_is_its_negation() {
        let c = elliptic_q();
        let p = ideal(&c, &["x - 3", "y - 6"]);
        assert!(p
            .inv()
            .unwrap()
            .ideal_equal(&ideal(&c, &["x - 3", "y + 6"]))
            .unwrap());
        let u = IdealHandle::unit(&c);
        assert!(u.inv().unwrap().is_unit());
        assert!(u.reduce().unwrap().is_unit());
        assert!(u.double().unwrap().is_unit());
    }

    #[test]
    fn multiples_and_identity() {
        let c = make_curve(
            FieldSpec::prime(5).unwrap(),
            &["x", "y"],
            &[2, 3],
            &["y^2 - x^3 - 3*x"],
        )
        .unwrap();
        let p = ideal(&c, &["x - 1", "y - 2"]);
        assert_eq!(p.double().unwrap().to_string(), "ideal (x + 1, y + 4)");
        assert!(ideal(&c, &["x", "y"]).double().unwrap().is_unit());
        assert!(p.multi(0).unwrap().is_unit());
        assert!(p.multi(10).unwrap().is_unit());
        assert!(p
            .multi(-3)
            .unwrap()
            .ideal_equal(&p.multi(7).unwrap())
            .unwrap());
        assert!(p
            .add(&IdealHandle::unit(&c))
            .unwrap()
            .ideal_equal(&p)
            .unwrap());
        assert!(p.class_eq(&p).unwrap());
        assert!(p.multi(10).unwrap().is_identity().unwrap());
    }

    #[test]
    fn genus_four_class() {
        let c = make_curve(
            FieldSpec::prime(5).unwrap(),
            &["x", "y", "z"],
            &[4, 6, 5],
            &["y^2 - x^3 - 1", "z^2 - x*y - 1"],
        )
        .unwrap();
        let pts = [
            ["x - 2", "y - 2", "z"],
            ["x - 4", "y", "z - 1"],
            ["x", "y - 1", "z - 4"],
            ["x", "y - 4", "z - 1"],
        ];
        let mut prod = IdealHandle::unit(&c);
        for p in &pts {
            prod = prod.product(&ideal(&c, p)).unwrap();
        }
        let a = prod.reduce().unwrap();
        assert_eq!(a.to_string(), "ideal (x^2 + y + z + 2*x, x*z + 3*y + 3*z + 2*x, x*y + 4*y + 4*z + 4*x, y*z + 3*y + 3*z + 4*x + 1)");
        assert_eq!(a.multi(327).unwrap().to_string(), "ideal (x + 1, y)");
        assert_eq!(ideal_degree(&a).unwrap(), 4);
        assert!(a.add(&a.inv().unwrap()).unwrap().is_unit());
        let other = elliptic_q();
        assert_eq!(
            a.add(&IdealHandle::unit(&other)).unwrap_err(),
            JacobianError::CurveMismatch
        );
    }
}
