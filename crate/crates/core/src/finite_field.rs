//! Arithmetic in the finite field with `q = p^k` elements.
//!
//! Elements are encoded as integers `0..q` whose base-`p` digits are the
//! coefficients of a polynomial over `𝔽_p` modulo a fixed monic irreducible.
//! Multiplication goes through discrete-log tables built from the smallest
//! primitive element in this encoding.

use crate::error::{Error, Result};

/// Largest field size we are willing to tabulate.
pub const MAX_FIELD_SIZE: u32 = 1 << 16;

#[derive(Debug, Clone)]
pub struct GaloisField {
    p: u32,
    k: u32,
    q: u32,
    /// `exp[j] = g^j` for `j in 0..q-1`, doubled to avoid a modulo in `mul`.
    exp: Vec<u32>,
    /// `log[x]` for nonzero `x`; `log[0]` is unused.
    log: Vec<u32>,
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// Splits `q` as `p^k`, if it is a prime power.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut rest = q;
    let mut k = 0;
    while rest % p == 0 {
        rest /= p;
        k += 1;
    }
    (rest == 1 && is_prime(p)).then_some((p, k))
}

/// Multiplies digit vectors modulo the monic `modulus` (low degree first, leading 1 implicit).
fn poly_mulmod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let k = modulus.len();
    let mut prod = vec![0u64; 2 * k];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    for d in (k..2 * k).rev() {
        let c = prod[d];
        if c == 0 {
            continue;
        }
        prod[d] = 0;
        // t^k = -Σ modulus_i t^i
        for (i, &mi) in modulus.iter().enumerate() {
            let sub = c * mi as u64 % p as u64;
            prod[d - k + i] = (prod[d - k + i] + p as u64 - sub) % p as u64;
        }
    }
    prod[..k].iter().map(|&c| c as u32).collect()
}

fn digits(mut x: u32, p: u32, k: u32) -> Vec<u32> {
    (0..k)
        .map(|_| {
            let d = x % p;
            x /= p;
            d
        })
        .collect()
}

fn undigits(ds: &[u32], p: u32) -> u32 {
    ds.iter().rev().fold(0, |acc, &d| acc * p + d)
}

impl GaloisField {
    pub fn new(q: u32) -> Result<Self> {
        let (p, k) = prime_power(q)
            .ok_or_else(|| Error::InvalidParameter(format!("field size {q} is not a prime power")))?;
        if q > MAX_FIELD_SIZE {
            return Err(Error::BoundExceeded {
                what: "field size",
                value: q as u64,
                bound: MAX_FIELD_SIZE as u64,
            });
        }
        // Search monic moduli of degree k for one under which some element has order q-1;
        // that simultaneously certifies irreducibility and finds a primitive element.
        let moduli = if k == 1 { 1 } else { q };
        for code in 0..moduli {
            let modulus = if k == 1 { vec![0] } else { digits(code, p, k) };
            if k > 1 && modulus[0] == 0 {
                continue;
            }
            for g in 2.min(q - 1)..q {
                if let Some(exp) = Self::power_cycle(g, p, k, &modulus) {
                    let mut log = vec![0; q as usize];
                    for (j, &x) in exp.iter().enumerate().take((q - 1) as usize) {
                        log[x as usize] = j as u32;
                    }
                    return Ok(GaloisField { p, k, q, exp, log });
                }
            }
        }
        unreachable!("every finite field has a primitive element")
    }

    /// Powers of `g` if `g` has multiplicative order exactly `q-1`.
    fn power_cycle(g: u32, p: u32, k: u32, modulus: &[u32]) -> Option<Vec<u32>> {
        let q = p.pow(k);
        let mul = |a: u32, b: u32| -> u32 {
            if k == 1 {
                ((a as u64 * b as u64) % p as u64) as u32
            } else {
                undigits(&poly_mulmod(&digits(a, p, k), &digits(b, p, k), modulus, p), p)
            }
        };
        let mut exp = Vec::with_capacity(2 * (q - 1) as usize);
        let mut seen = vec![false; q as usize];
        let mut x = 1;
        for _ in 0..q - 1 {
            if x == 0 || seen[x as usize] {
                return None;
            }
            seen[x as usize] = true;
            exp.push(x);
            x = mul(x, g);
        }
        if x != 1 {
            return None;
        }
        let head = exp.clone();
        exp.extend(head);
        Some(exp)
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    /// The fixed primitive element (smallest in the integer encoding).
    pub fn generator(&self) -> u32 {
        self.exp[1 % (self.q as usize - 1).max(1)]
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.k == 1 {
            return (a + b) % self.p;
        }
        let (mut a, mut b, mut out, mut place) = (a, b, 0, 1);
        for _ in 0..self.k {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if self.k == 1 {
            return (self.p - a) % self.p;
        }
        let (mut a, mut out, mut place) = (a, 0, 1);
        for _ in 0..self.k {
            out += ((self.p - a % self.p) % self.p) * place;
            a /= self.p;
            place *= self.p;
        }
        out
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.exp[((self.q - 1 - self.log[a as usize]) % (self.q - 1)) as usize])
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if a == 0 {
            return u32::from(e == 0);
        }
        let l = (self.log[a as usize] as u64 * (e % (self.q as u64 - 1))) % (self.q as u64 - 1);
        self.exp[l as usize]
    }

    /// Discrete logarithm to the fixed generator, for nonzero `a`.
    pub fn log(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.log[a as usize])
    }

    /// Absolute trace to the prime field, returned in `0..p`.
    pub fn trace(&self, a: u32) -> u32 {
        let mut acc = 0;
        let mut x = a;
        for _ in 0..self.k {
            acc = self.add(acc, x);
            x = self.pow(x, self.p as u64);
        }
        debug_assert!(acc < self.p, "trace must land in the prime field");
        acc
    }

    /// Embeds an integer into the prime subfield.
    pub fn from_int(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_power_detection() {
        assert_eq!(prime_power(5), Some((5, 1)));
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(64), Some((2, 6)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
        assert!(GaloisField::new(10).is_err());
    }

    #[test]
    fn prime_field_generator_is_smallest() {
        assert_eq!(GaloisField::new(5).unwrap().generator(), 2);
        assert_eq!(GaloisField::new(7).unwrap().generator(), 3);
        assert_eq!(GaloisField::new(13).unwrap().generator(), 2);
    }

    #[test]
    fn field_axioms_small_fields() {
        for q in [2, 3, 4, 5, 8, 9, 13, 25, 27] {
            let f = GaloisField::new(q).unwrap();
            for a in 0..q {
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1, "q={q} a={a}");
                    assert_eq!(f.pow(a, (q - 1) as u64), 1);
                }
                for b in 0..q {
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in [0, 1, q - 1] {
                        let lhs = f.mul(a, f.add(b, c));
                        let rhs = f.add(f.mul(a, b), f.mul(a, c));
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn trace_is_additive_and_onto() {
        let f = GaloisField::new(9).unwrap();
        let mut hits = [0; 3];
        for a in 0..9 {
            hits[f.trace(a) as usize] += 1;
            for b in 0..9 {
                assert_eq!(f.trace(f.add(a, b)), (f.trace(a) + f.trace(b)) % 3);
            }
        }
        assert_eq!(hits, [3, 3, 3]);
    }
}
