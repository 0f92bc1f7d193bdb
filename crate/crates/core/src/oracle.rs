//! Chord-tangent arithmetic on short Weierstrass curves `y² = x³ + ax + b`.
//!
//! This is an independent check on the ideal-based group law: it never
//! touches polynomials or Gröbner bases.

use thiserror::Error;

use crate::curve::CurveRing;
use crate::field::{FieldError, FieldSpec, FieldValue};
use crate::polyring::Monomial;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("point is not on the curve")]
    PointNotOnCurve,
    #[error("singular curve: 4a^3 + 27b^2 = 0")]
    SingularCurve,
    #[error("characteristic {0} is not supported by the Weierstrass formulas")]
    UnsupportedCharacteristic(u64),
    #[error("enumeration needs a prime field")]
    NotPrimeField,
    #[error("curve is not a (2,3) Miura curve")]
    WrongCurveShape,
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum EcPoint {
    Infinity,
    Affine { x: FieldValue, y: FieldValue },
}

impl EcPoint {
    pub fn affine(x: FieldValue, y: FieldValue) -> Self {
        EcPoint::Affine { x, y }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Weierstrass {
    a: FieldValue,
    b: FieldValue,
}

impl Weierstrass {
    pub fn new(a: FieldValue, b: FieldValue) -> Result<Self, OracleError> {
        let field = a.spec();
        if b.spec() != field {
            return Err(FieldError::FieldMismatch(field, b.spec()).into());
        }
        if let c @ (2 | 3) = field.characteristic() {
            return Err(OracleError::UnsupportedCharacteristic(c));
        }
        let disc = &(&field.from_i64(4) * &a.pow(3)) + &(&field.from_i64(27) * &b.pow(2));
        if disc.is_zero() {
            return Err(OracleError::SingularCurve);
        }
        Ok(Weierstrass { a, b })
    }

    pub fn field(&self) -> FieldSpec {
        self.a.spec()
    }

    pub fn a(&self) -> &FieldValue {
        &self.a
    }

    pub fn b(&self) -> &FieldValue {
        &self.b
    }

    pub fn contains(&self, p: &EcPoint) -> bool {
        match p {
            EcPoint::Infinity => true,
            EcPoint::Affine { x, y } => {
                x.spec() == self.field()
                    && y.spec() == self.field()
                    && y.pow(2) == &(&x.pow(3) + &(&self.a * x)) + &self.b
            }
        }
    }

    fn check(&self, p: &EcPoint) -> Result<(), OracleError> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(OracleError::PointNotOnCurve)
        }
    }

    pub fn negate(&self, p: &EcPoint) -> EcPoint {
        match p {
            EcPoint::Infinity => EcPoint::Infinity,
            EcPoint::Affine { x, y } => EcPoint::affine(x.clone(), -y),
        }
    }

    pub fn add(&self, p: &EcPoint, q: &EcPoint) -> Result<EcPoint, OracleError> {
        self.check(p)?;
        self.check(q)?;
        let (xp, yp, xq, yq) = match (p, q) {
            (EcPoint::Infinity, _) => return Ok(q.clone()),
            (_, EcPoint::Infinity) => return Ok(p.clone()),
            (EcPoint::Affine { x: xp, y: yp }, EcPoint::Affine { x: xq, y: yq }) => {
                (xp, yp, xq, yq)
            }
        };
        let f = self.field();
        let lambda = if xp != xq {
            (yq - yp).try_div(&(xq - xp))?
        } else if yp == yq && !yp.is_zero() {
            (&(&f.from_i64(3) * &xp.pow(2)) + &self.a).try_div(&(&f.from_i64(2) * yp))?
        } else {
            return Ok(EcPoint::Infinity);
        };
        let xr = &(&lambda.pow(2) - xp) - xq;
        let yr = &(&lambda * &(xp - &xr)) - yp;
        Ok(EcPoint::affine(xr, yr))
    }

    pub fn mul(&self, p: &EcPoint, m: i64) -> Result<EcPoint, OracleError> {
        self.check(p)?;
        let base = if m < 0 { self.negate(p) } else { p.clone() };
        let mut k = m.unsigned_abs();
        let mut acc = EcPoint::Infinity;
        let mut run = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &run)?;
            }
            run = self.add(&run, &run)?;
            k >>= 1;
        }
        Ok(acc)
    }

    /// All points over a prime field, affine points in (x, y) scan order
    /// followed by the point at infinity.
    pub fn points(&self) -> Result<Vec<EcPoint>, OracleError> {
        let field = self.field();
        let elements: Vec<FieldValue> = field
            .elements()
            .ok_or(OracleError::NotPrimeField)?
            .collect();
        let mut out = Vec::new();
        for x in &elements {
            for y in &elements {
                let p = EcPoint::affine(x.clone(), y.clone());
                if self.contains(&p) {
                    out.push(p);
                }
            }
        }
        out.push(EcPoint::Infinity);
        Ok(out)
    }
}

/// Group order and points of `y² = x³ + ax + b` over GF(p).
pub fn ec_enumerate(a: i64, b: i64, p: u64) -> Result<(usize, Vec<EcPoint>), OracleError> {
    let field = FieldSpec::prime(p)?;
    let curve = Weierstrass::new(field.from_i64(a), field.from_i64(b))?;
    let points = curve.points()?;
    Ok((points.len(), points))
}

/// Second intersection of the vertical line `x = α` with a (2,3) Miura
/// curve `y² + c11·xy + c01·y + … = 0`: `−β − c11·α − c01`.
pub fn c23_negate_y(
    curve: &CurveRing,
    alpha: &FieldValue,
    beta: &FieldValue,
) -> Result<FieldValue, OracleError> {
    if curve.order().weights() != [2, 3] || curve.generators().len() != 1 {
        return Err(OracleError::WrongCurveShape);
    }
    let g = &curve.generators()[0];
    if !curve
        .contains_point(&[alpha.clone(), beta.clone()])
        .unwrap_or(false)
    {
        return Err(OracleError::PointNotOnCurve);
    }
    let c11 = g.coefficient(&Monomial::new([1, 1]));
    let c01 = g.coefficient(&Monomial::new([0, 1]));
    Ok(&(&(-beta) - &(&c11 * alpha)) - &c01)
}
