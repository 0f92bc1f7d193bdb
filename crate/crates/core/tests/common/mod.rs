#![allow(dead_code)]

use std::sync::Arc;

use miura::curve::{make_curve, CurveRing};
use miura::jacobian::IdealHandle;
use miura::oracle::EcPoint;
use miura::{FieldSpec, FieldValue, PolyRing, Polynomial};

pub fn gf(p: u64) -> FieldSpec {
    FieldSpec::prime(p).unwrap()
}

/// `y² = x³ + ax + b` as a (2,3) curve.
pub fn weierstrass_curve(field: FieldSpec, a: i64, b: i64) -> Arc<CurveRing> {
    let g = format!("y^2 - x^3 - {a}*x - {b}");
    make_curve(field, &["x", "y"], &[2, 3], &[&g]).unwrap()
}

pub fn miura_gf5() -> Arc<CurveRing> {
    make_curve(
        gf(5),
        &["x", "y", "z"],
        &[4, 6, 5],
        &["y^2 - x^3 - 1", "z^2 - x*y - 1"],
    )
    .unwrap()
}

pub fn point(curve: &Arc<CurveRing>, coords: &[i64]) -> IdealHandle {
    let f = curve.field();
    let c: Vec<FieldValue> = coords.iter().map(|&n| f.from_i64(n)).collect();
    curve.point_ideal(&c).unwrap()
}

pub fn ideal(curve: &Arc<CurveRing>, gens: &[&str]) -> IdealHandle {
    let polys = gens.iter().map(|g| curve.parse(g).unwrap()).collect();
    IdealHandle::new(curve, polys).unwrap()
}

/// The ideal of an oracle point; the point at infinity maps to the unit ideal.
pub fn ec_ideal(curve: &Arc<CurveRing>, p: &EcPoint) -> IdealHandle {
    match p {
        EcPoint::Infinity => IdealHandle::unit(curve),
        EcPoint::Affine { x, y } => curve.point_ideal(&[x.clone(), y.clone()]).unwrap(),
    }
}

pub fn poly(ring: &Arc<PolyRing>, text: &str) -> Polynomial {
    Polynomial::parse(text, ring).unwrap()
}

/// Whether `f` is a GF(p)-linear combination of `m·g` with `g` in `gens` and
/// `deg(m·g) ≤ bound`, by Gaussian elimination on coefficient vectors.
pub fn bounded_member(f: &Polynomial, gens: &[Polynomial], bound: u64) -> bool {
    let ring = f.ring();
    let p = ring.field().modulus().expect("prime field") as i64;
    let t = ring.arity();
    let monos = monomials_up_to(t, bound);
    let index = |m: &miura::Monomial| monos.iter().position(|n| n == m);
    let to_vec = |h: &Polynomial| -> Option<Vec<i64>> {
        let mut v = vec![0; monos.len()];
        for (m, c) in h.terms() {
            v[index(m)?] = c.to_string().parse::<i64>().unwrap();
        }
        Some(v)
    };
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for g in gens {
        for m in &monos {
            let h = g.mul_term(m, &ring.field().one());
            if let Some(v) = h
                .terms()
                .iter()
                .map(|(m, _)| m.degree())
                .max()
                .filter(|&d| d <= bound)
                .and(to_vec(&h))
            {
                rows.push(v);
            }
        }
    }
    let Some(target) = to_vec(f) else {
        return false;
    };
    let rank = |mut rows: Vec<Vec<i64>>| -> usize {
        let mut r = 0;
        for col in 0..monos.len() {
            let Some(piv) = (r..rows.len()).find(|&i| rows[i][col] != 0) else {
                continue;
            };
            rows.swap(r, piv);
            let inv = modinv(rows[r][col], p);
            rows[r].iter_mut().for_each(|v| *v = *v * inv % p);
            let pivot = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                let k = row[col];
                if i != r && k != 0 {
                    row.iter_mut()
                        .zip(&pivot)
                        .for_each(|(v, w)| *v = (*v - k * w).rem_euclid(p));
                }
            }
            r += 1;
        }
        r
    };
    let base = rank(rows.clone());
    rows.push(target);
    rank(rows) == base
}

fn modinv(a: i64, p: i64) -> i64 {
    let mut r = 1;
    for _ in 0..p - 2 {
        r = r * a % p;
    }
    r
}

pub fn monomials_up_to(t: usize, bound: u64) -> Vec<miura::Monomial> {
    let mut out = vec![Vec::new()];
    for _ in 0..t {
        out = out
            .into_iter()
            .flat_map(|e: Vec<u32>| {
                let used: u64 = e.iter().map(|&x| x as u64).sum();
                (0..=(bound - used) as u32).map(move |k| {
                    let mut e = e.clone();
                    e.push(k);
                    e
                })
            })
            .collect();
    }
    out.into_iter().map(miura::Monomial::new).collect()
}
