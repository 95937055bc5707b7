//! Polynomials over a finite field, stored lowest degree first without trailing zeros.

use std::fmt;

use serde::Serialize;

use crate::finite_field::GaloisField;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
#[serde(transparent)]
pub struct FFPoly(Vec<u32>);

impl FFPoly {
    pub fn zero() -> Self {
        FFPoly(Vec::new())
    }

    pub fn one() -> Self {
        FFPoly(vec![1])
    }

    pub fn constant(c: u32) -> Self {
        FFPoly::from_coeffs(vec![c])
    }

    /// The variable `t`.
    pub fn t() -> Self {
        FFPoly(vec![0, 1])
    }

    pub fn from_coeffs(mut coeffs: Vec<u32>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        FFPoly(coeffs)
    }

    /// The `idx`-th monic polynomial of degree `d`: lower coefficients are the base-`q` digits of `idx`.
    pub fn monic_from_index(d: usize, mut idx: u64, q: u32) -> Self {
        let mut coeffs = Vec::with_capacity(d + 1);
        for _ in 0..d {
            coeffs.push((idx % q as u64) as u32);
            idx /= q as u64;
        }
        coeffs.push(1);
        FFPoly(coeffs)
    }

    /// The `idx`-th polynomial of degree `< d` (any leading coefficient, zero included).
    pub fn residue_from_index(d: usize, mut idx: u64, q: u32) -> Self {
        let mut coeffs = Vec::with_capacity(d);
        for _ in 0..d {
            coeffs.push((idx % q as u64) as u32);
            idx /= q as u64;
        }
        FFPoly::from_coeffs(coeffs)
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.0
    }

    /// Coefficient of `t^k`.
    pub fn coeff(&self, k: usize) -> u32 {
        self.0.get(k).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.0 == [1]
    }

    /// Degree, with `0` for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.0.last() == Some(&1)
    }

    pub fn add(&self, other: &Self, f: &GaloisField) -> Self {
        let len = self.0.len().max(other.0.len());
        FFPoly::from_coeffs((0..len).map(|k| f.add(self.coeff(k), other.coeff(k))).collect())
    }

    pub fn sub(&self, other: &Self, f: &GaloisField) -> Self {
        let len = self.0.len().max(other.0.len());
        FFPoly::from_coeffs((0..len).map(|k| f.sub(self.coeff(k), other.coeff(k))).collect())
    }

    pub fn scale(&self, c: u32, f: &GaloisField) -> Self {
        FFPoly::from_coeffs(self.0.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn mul(&self, other: &Self, f: &GaloisField) -> Self {
        if self.is_zero() || other.is_zero() {
            return FFPoly::zero();
        }
        let mut out = vec![0; self.0.len() + other.0.len() - 1];
        for (a, &x) in self.0.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (b, &y) in other.0.iter().enumerate() {
                out[a + b] = f.add(out[a + b], f.mul(x, y));
            }
        }
        FFPoly::from_coeffs(out)
    }

    /// Quotient and remainder; `divisor` must be nonzero.
    pub fn div_rem(&self, divisor: &Self, f: &GaloisField) -> (Self, Self) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let dd = divisor.degree();
        let lead_inv = f.inv(*divisor.0.last().unwrap()).unwrap();
        let mut rem = self.0.clone();
        if rem.len() <= dd {
            return (FFPoly::zero(), self.clone());
        }
        let mut quot = vec![0; rem.len() - dd];
        for top in (dd..rem.len()).rev() {
            let c = f.mul(rem[top], lead_inv);
            if c == 0 {
                continue;
            }
            quot[top - dd] = c;
            for (k, &d) in divisor.0.iter().enumerate() {
                let at = top - dd + k;
                rem[at] = f.sub(rem[at], f.mul(c, d));
            }
        }
        (FFPoly::from_coeffs(quot), FFPoly::from_coeffs(rem))
    }

    pub fn rem(&self, modulus: &Self, f: &GaloisField) -> Self {
        self.div_rem(modulus, f).1
    }

    pub fn mul_mod(&self, other: &Self, modulus: &Self, f: &GaloisField) -> Self {
        self.mul(other, f).rem(modulus, f)
    }

    pub fn pow_mod(&self, mut e: u64, modulus: &Self, f: &GaloisField) -> Self {
        let mut base = self.rem(modulus, f);
        let mut acc = FFPoly::one().rem(modulus, f);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_mod(&base, modulus, f);
            }
            base = base.mul_mod(&base, modulus, f);
            e >>= 1;
        }
        acc
    }

    pub fn pow(&self, e: u32, f: &GaloisField) -> Self {
        (0..e).fold(FFPoly::one(), |acc, _| acc.mul(self, f))
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(&self, other: &Self, f: &GaloisField) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b, f);
            a = b;
            b = r;
        }
        a.make_monic(f)
    }

    pub fn make_monic(&self, f: &GaloisField) -> Self {
        match self.0.last() {
            None => FFPoly::zero(),
            Some(&lead) => self.scale(f.inv(lead).unwrap(), f),
        }
    }

    /// `|c| = q^{deg c}`.
    pub fn norm(&self, q: u32) -> u64 {
        (q as u64).pow(self.degree() as u32)
    }
}

impl fmt::Display for FFPoly {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(out, "0");
        }
        let mut first = true;
        for (k, &c) in self.0.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(out, " + ")?;
            }
            first = false;
            match (k, c) {
                (0, c) => write!(out, "{c}")?,
                (1, 1) => write!(out, "t")?,
                (1, c) => write!(out, "{c}t")?,
                (k, 1) => write!(out, "t^{k}")?,
                (k, c) => write!(out, "{c}t^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for FFPoly {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "FFPoly({self})")
    }
}
