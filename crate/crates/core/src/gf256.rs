//! Arithmetic in GF(2^8) modulo `y^8 + y^4 + y^3 + y + 1`, plus the share
//! polynomial used for block sharing.
//!
//! Pixels enter the field as raw bytes. Addition is XOR; multiplication is
//! carry-less multiplication reduced by `0x11B`. The fast path uses log/exp
//! tables generated from the shift-and-reduce reference at compile time.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign};

use crate::error::{Error, Result};

/// The reduction polynomial `y^8 + y^4 + y^3 + y + 1`.
pub const POLY: u16 = 0x11B;

/// A byte interpreted as a binary polynomial of degree at most 7.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement(pub u8);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    #[inline]
    pub const fn new(value: u8) -> Self {
        FieldElement(value)
    }

    #[inline]
    pub const fn value(self) -> u8 {
        self.0
    }

    pub fn pow(self, exp: u32) -> Self {
        pow(self, exp)
    }

    pub fn inv(self) -> Result<Self> {
        inv(self)
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.0)
    }
}

impl From<u8> for FieldElement {
    fn from(v: u8) -> Self {
        FieldElement(v)
    }
}

impl From<FieldElement> for u8 {
    fn from(v: FieldElement) -> Self {
        v.0
    }
}

impl Add for FieldElement {
    type Output = FieldElement;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        add(self, rhs)
    }
}

impl AddAssign for FieldElement {
    #[inline]
    fn add_assign(&mut self, rhs: Self) {
        *self = add(*self, rhs);
    }
}

impl Mul for FieldElement {
    type Output = FieldElement;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        mul(self, rhs)
    }
}

impl MulAssign for FieldElement {
    #[inline]
    fn mul_assign(&mut self, rhs: Self) {
        *self = mul(*self, rhs);
    }
}

/// Shift-and-reduce multiplication. This is the reference definition; the
/// table-driven [`mul`] must agree with it on every pair.
pub const fn mul_reference(a: u8, b: u8) -> u8 {
    let mut a = a as u16;
    let mut b = b;
    let mut acc: u16 = 0;
    while b != 0 {
        if b & 1 != 0 {
            acc ^= a;
        }
        a <<= 1;
        if a & 0x100 != 0 {
            a ^= POLY;
        }
        b >>= 1;
    }
    acc as u8
}

// 3 generates the multiplicative group of GF(2^8) under 0x11B.
const GENERATOR: u8 = 3;

struct Tables {
    exp: [u8; 512],
    log: [u8; 256],
}

const fn build_tables() -> Tables {
    let mut exp = [0u8; 512];
    let mut log = [0u8; 256];
    let mut x: u8 = 1;
    let mut i = 0;
    while i < 255 {
        exp[i] = x;
        exp[i + 255] = x;
        log[x as usize] = i as u8;
        x = mul_reference(x, GENERATOR);
        i += 1;
    }
    exp[510] = exp[0];
    exp[511] = exp[1];
    Tables { exp, log }
}

static TABLES: Tables = build_tables();

#[inline]
pub fn add(a: FieldElement, b: FieldElement) -> FieldElement {
    FieldElement(a.0 ^ b.0)
}

#[inline]
pub fn mul(a: FieldElement, b: FieldElement) -> FieldElement {
    if a.0 == 0 || b.0 == 0 {
        return FieldElement::ZERO;
    }
    let idx = TABLES.log[a.0 as usize] as usize + TABLES.log[b.0 as usize] as usize;
    FieldElement(TABLES.exp[idx])
}

pub fn pow(a: FieldElement, exp: u32) -> FieldElement {
    if exp == 0 {
        return FieldElement::ONE;
    }
    if a.0 == 0 {
        return FieldElement::ZERO;
    }
    let e = (TABLES.log[a.0 as usize] as u64 * exp as u64) % 255;
    FieldElement(TABLES.exp[e as usize])
}

pub fn inv(a: FieldElement) -> Result<FieldElement> {
    if a.0 == 0 {
        return Err(Error::ZeroInverse);
    }
    let e = (255 - TABLES.log[a.0 as usize] as usize) % 255;
    Ok(FieldElement(TABLES.exp[e]))
}

/// Coefficients of one block's sharing polynomial: `coeffs[0]` is the secret
/// pixel, the rest are the random `a` values shared by every pixel of the block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SharePoly {
    coeffs: Vec<FieldElement>,
}

impl SharePoly {
    pub fn new(coeffs: Vec<FieldElement>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::InvalidArgument(format!(
                "share polynomial needs at least 2 coefficients, got {}",
                coeffs.len()
            )));
        }
        Ok(SharePoly { coeffs })
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        Self::new(bytes.iter().copied().map(FieldElement).collect())
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn secret(&self) -> FieldElement {
        self.coeffs[0]
    }

    /// The random coefficients `a(0..r-2)`.
    pub fn randomness(&self) -> &[FieldElement] {
        &self.coeffs[1..]
    }

    pub fn threshold(&self) -> usize {
        self.coeffs.len()
    }

    pub fn eval(&self, x: FieldElement) -> FieldElement {
        eval_poly(&self.coeffs, x)
    }
}

/// Horner evaluation of `c0 + c1 x + ... + c_{k} x^k`.
pub fn eval_poly(coeffs: &[FieldElement], x: FieldElement) -> FieldElement {
    coeffs
        .iter()
        .rev()
        .fold(FieldElement::ZERO, |acc, &c| acc * x + c)
}

/// The additive mask `a(0) x + ... + a(r-2) x^(r-1)` applied to every pixel
/// of a block at evaluation point `x`.
pub fn mask(randomness: &[FieldElement], x: FieldElement) -> FieldElement {
    randomness
        .iter()
        .rev()
        .fold(FieldElement::ZERO, |acc, &c| (acc + c) * x)
}

/// Recovers the full coefficient vector of the unique degree `< r` polynomial
/// through `points`, by expanding the Lagrange basis.
pub fn recover_coeffs(points: &[(FieldElement, FieldElement)], r: usize) -> Result<SharePoly> {
    if r < 2 {
        return Err(Error::InvalidArgument(format!(
            "threshold must be >= 2, got {r}"
        )));
    }
    if points.len() != r {
        return Err(Error::InvalidArgument(format!(
            "need exactly {r} points, got {}",
            points.len()
        )));
    }
    for (i, &(xi, _)) in points.iter().enumerate() {
        if xi.0 == 0 {
            return Err(Error::InvalidArgument("evaluation point 0".into()));
        }
        if points[..i].iter().any(|&(xj, _)| xj == xi) {
            return Err(Error::InvalidArgument(format!(
                "duplicate evaluation point {}",
                xi.0
            )));
        }
    }

    // full[k] is the coefficient of x^k in prod_m (x + x_m).
    let mut full = vec![FieldElement::ZERO; r + 1];
    full[0] = FieldElement::ONE;
    for &(xm, _) in points {
        for k in (1..=r).rev() {
            full[k] = full[k - 1] + full[k] * xm;
        }
        full[0] *= xm;
    }

    let mut coeffs = vec![FieldElement::ZERO; r];
    let mut basis = vec![FieldElement::ZERO; r];
    for (k, &(xk, yk)) in points.iter().enumerate() {
        // Divide `full` by (x + xk); synthetic division from the top.
        let mut carry = FieldElement::ZERO;
        for d in (0..r).rev() {
            carry = full[d + 1] + carry * xk;
            basis[d] = carry;
        }
        let denom = points
            .iter()
            .enumerate()
            .filter(|&(m, _)| m != k)
            .fold(FieldElement::ONE, |acc, (_, &(xm, _))| acc * (xk + xm));
        let scale = yk * denom.inv()?;
        for (c, &b) in coeffs.iter_mut().zip(&basis) {
            *c += b * scale;
        }
    }
    SharePoly::new(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fe(v: u8) -> FieldElement {
        FieldElement(v)
    }

    #[test]
    fn add_examples() {
        assert_eq!(fe(125) + fe(97), fe(28));
        assert_eq!(fe(77) + FieldElement::ZERO, fe(77));
        assert_eq!(fe(77) + fe(77), FieldElement::ZERO);
    }

    #[test]
    fn mul_examples() {
        assert_eq!(fe(181) * fe(21), fe(242));
        assert_eq!(fe(199) * FieldElement::ONE, fe(199));
        assert_eq!(FieldElement::ZERO * fe(33), FieldElement::ZERO);
        // the x = 21 mask of the worked example
        assert_eq!(fe(154) * fe(21).pow(2), fe(147));
        assert_eq!(fe(242) + fe(147), fe(97));
    }

    #[test]
    fn table_matches_reference_everywhere() {
        for a in 0..=255u8 {
            for b in 0..=255u8 {
                assert_eq!(mul(fe(a), fe(b)).0, mul_reference(a, b), "{a}*{b}");
            }
        }
    }

    #[test]
    fn pow_examples() {
        assert_eq!(fe(21).pow(2), fe(10));
        assert_eq!(fe(21).pow(1), fe(21));
        assert_eq!(fe(21).pow(0), FieldElement::ONE);
        assert_eq!(fe(0).pow(0), FieldElement::ONE);
        assert_eq!(fe(0).pow(3), FieldElement::ZERO);
        for a in 1..=255u8 {
            let mut acc = FieldElement::ONE;
            for k in 0..10 {
                assert_eq!(fe(a).pow(k), acc);
                acc *= fe(a);
            }
        }
    }

    #[test]
    fn inverse() {
        assert_eq!(fe(1).inv().unwrap(), fe(1));
        assert!(matches!(fe(0).inv(), Err(Error::ZeroInverse)));
        for a in 1..=255u8 {
            let i = fe(a).inv().unwrap();
            assert_eq!(fe(a) * i, FieldElement::ONE);
            assert_eq!(i.inv().unwrap(), fe(a));
        }
    }

    #[test]
    fn eval_examples() {
        let p = SharePoly::from_bytes(&[125, 181, 154]).unwrap();
        assert_eq!(p.eval(fe(21)), fe(28));
        let q = SharePoly::from_bytes(&[120, 181, 154]).unwrap();
        assert_eq!(q.eval(fe(21)), fe(25));
        let c = SharePoly::from_bytes(&[9, 0, 0]).unwrap();
        assert_eq!(c.eval(fe(200)), fe(9));
        assert_eq!(mask(p.randomness(), fe(21)), fe(97));
    }

    #[test]
    fn recover_known_polynomial() {
        let p = SharePoly::from_bytes(&[125, 181, 154]).unwrap();
        let pts: Vec<_> = [21u8, 3, 250]
            .iter()
            .map(|&x| (fe(x), p.eval(fe(x))))
            .collect();
        assert_eq!(recover_coeffs(&pts, 3).unwrap(), p);
    }

    #[test]
    fn recover_constant() {
        let pts = vec![(fe(5), fe(44)), (fe(6), fe(44)), (fe(7), fe(44))];
        assert_eq!(
            recover_coeffs(&pts, 3).unwrap().coeffs(),
            &[fe(44), fe(0), fe(0)]
        );
    }

    #[test]
    fn recover_rejects_bad_points() {
        let dup = vec![(fe(5), fe(1)), (fe(5), fe(2))];
        assert!(matches!(
            recover_coeffs(&dup, 2),
            Err(Error::InvalidArgument(_))
        ));
        let short = vec![(fe(5), fe(1))];
        assert!(matches!(
            recover_coeffs(&short, 2),
            Err(Error::InvalidArgument(_))
        ));
        let zero = vec![(fe(0), fe(1)), (fe(5), fe(2))];
        assert!(matches!(
            recover_coeffs(&zero, 2),
            Err(Error::InvalidArgument(_))
        ));
    }
}
