//! Coefficient rings: the symbolic ring generated by `q^{±1}` and the
//! normalized Gauss sums `γ(i)`, and its complex specializations.
//!
//! Symbolic monomials are kept in canonical form. With `γ(i)γ(−i) = q⁻¹` the
//! generators `γ_1, …, γ_{⌊n/2⌋}` suffice; for even `n` the self-paired
//! generator `γ_{n/2}` squares to `q⁻¹` and its exponent is reduced mod 2.

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::finite_field::GaloisField;

/// Largest `n` supported by the symbolic ring (eight canonical generators).
pub const MAX_N: u32 = 17;
const GENS: usize = 8;

/// Exact rational coefficient.
pub type Coeff = Ratio<i128>;

/// Ring operations shared by the symbolic and numeric coefficient types.
pub trait Scalar: Clone + fmt::Debug + fmt::Display + PartialEq + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(k: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negate(&self) -> Self;
    /// JSON form; `n` fixes the length of generator-exponent vectors.
    fn to_json(&self, n: u32) -> Value;

    fn minus(&self, other: &Self) -> Self {
        self.plus(&other.negate())
    }

    fn add_assign_ref(&mut self, other: &Self) {
        *self = self.plus(other);
    }

    /// Size used to judge rounding noise; exact rings never need it.
    fn magnitude(&self) -> f64 {
        0.0
    }

    /// Zero up to the rounding noise expected at `scale`; exact rings test for zero.
    fn negligible_at(&self, _scale: f64) -> bool {
        self.is_zero()
    }
}

/// Supplies `q`-powers and `γ(i)` in a particular coefficient ring.
pub trait ScalarContext: Sync {
    type S: Scalar;
    fn n(&self) -> u32;
    fn q_pow(&self, e: i32) -> Self::S;
    fn gamma(&self, i: i64) -> Self::S;
}

/// `q^{qexp} · Π γ_k^{gexp[k-1]}` in canonical form.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GammaMonomial {
    qexp: i32,
    gexp: [i16; GENS],
    /// One plus the index of the self-paired generator when its exponent is 1, else 0.
    half: u8,
}

impl GammaMonomial {
    pub const ONE: GammaMonomial = GammaMonomial {
        qexp: 0,
        gexp: [0; GENS],
        half: 0,
    };

    pub fn q_pow(e: i32) -> Self {
        GammaMonomial {
            qexp: e,
            ..Self::ONE
        }
    }

    pub fn qexp(&self) -> i32 {
        self.qexp
    }

    /// Exponent of `γ_k` (1-based).
    pub fn gexp(&self, k: usize) -> i16 {
        self.gexp[k - 1]
    }

    /// Exponents of `γ_1, …, γ_{⌊n/2⌋}`.
    pub fn gexps(&self, n: u32) -> Vec<i16> {
        self.gexp[..(n / 2) as usize].to_vec()
    }

    /// The canonical generator `γ(i)` for `1 ≤ i ≤ n/2` (no relation applied).
    fn generator(i: usize, self_paired: bool) -> Self {
        let mut m = Self::ONE;
        m.gexp[i - 1] = 1;
        if self_paired {
            m.half = i as u8;
        }
        m
    }

    /// Builds a monomial from raw exponents, reducing the self-paired generator of `n`.
    pub fn from_parts(qexp: i32, gexp: &[i16], n: u32) -> Self {
        let mut m = Self::ONE;
        m.qexp = qexp;
        m.gexp[..gexp.len()].copy_from_slice(gexp);
        if n % 2 == 0 && n >= 2 {
            m.half = (n / 2) as u8;
        }
        m.canonicalize()
    }

    fn canonicalize(mut self) -> Self {
        if self.half != 0 {
            let k = self.half as usize - 1;
            let e = self.gexp[k] as i32;
            self.qexp -= e.div_euclid(2);
            self.gexp[k] = e.rem_euclid(2) as i16;
            if self.gexp[k] == 0 {
                self.half = 0;
            }
        }
        self
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = *self;
        out.qexp += other.qexp;
        for (a, b) in out.gexp.iter_mut().zip(other.gexp) {
            *a += b;
        }
        out.half = self.half.max(other.half);
        out.canonicalize()
    }

    pub fn inverse(&self) -> Self {
        let mut out = *self;
        out.qexp = -out.qexp;
        for a in out.gexp.iter_mut() {
            *a = -*a;
        }
        out.canonicalize()
    }

    pub fn is_q_power(&self) -> bool {
        self.gexp.iter().all(|&e| e == 0)
    }

    fn write(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.qexp {
            0 => {}
            1 => parts.push("q".to_string()),
            e => parts.push(format!("q^{e}")),
        }
        for (k, &e) in self.gexp.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(format!("γ{}", k + 1)),
                e => parts.push(format!("γ{}^{e}", k + 1)),
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("·"))
        }
    }
}

impl fmt::Debug for GammaMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f)
    }
}

/// A finite `ℚ`-linear combination of canonical monomials, sorted and without zero terms.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GammaScalar {
    terms: Vec<(GammaMonomial, Coeff)>,
}

impl GammaScalar {
    pub fn from_term(m: GammaMonomial, c: Coeff) -> Self {
        if c.is_zero() {
            GammaScalar::default()
        } else {
            GammaScalar {
                terms: vec![(m, c)],
            }
        }
    }

    pub fn monomial(m: GammaMonomial) -> Self {
        Self::from_term(m, Coeff::one())
    }

    pub fn q_pow(e: i32) -> Self {
        Self::monomial(GammaMonomial::q_pow(e))
    }

    pub fn from_ratio(c: Coeff) -> Self {
        Self::from_term(GammaMonomial::ONE, c)
    }

    /// `γ(i)` for the series degree `n`, in canonical form.
    pub fn gamma(i: i64, n: u32) -> Self {
        assert!((1..=MAX_N).contains(&n), "series degree {n} outside 1..={MAX_N}");
        let n64 = n as i64;
        let r = i.rem_euclid(n64);
        if r == 0 {
            return Self::from_int(-1);
        }
        if 2 * r <= n64 {
            Self::monomial(GammaMonomial::generator(r as usize, 2 * r == n64))
        } else {
            // γ(n−s) = q⁻¹ γ(s)⁻¹ with 1 ≤ s < n/2
            let s = (n64 - r) as usize;
            let g = GammaMonomial::generator(s, false).inverse();
            Self::monomial(g.mul(&GammaMonomial::q_pow(-1)))
        }
    }

    pub fn terms(&self) -> &[(GammaMonomial, Coeff)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The single term, if there is exactly one.
    pub fn as_monomial(&self) -> Option<(GammaMonomial, Coeff)> {
        match self.terms.as_slice() {
            [t] => Some(*t),
            _ => None,
        }
    }

    pub fn invert(&self) -> Result<Self> {
        match self.as_monomial() {
            Some((m, c)) => Ok(Self::from_term(m.inverse(), c.recip())),
            None => Err(Error::NotInvertible(self.to_string())),
        }
    }

    pub fn scale(&self, c: Coeff) -> Self {
        if c.is_zero() {
            return Self::default();
        }
        GammaScalar {
            terms: self.terms.iter().map(|(m, d)| (*m, d * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &GammaMonomial) -> Self {
        let mut terms: Vec<_> = self.terms.iter().map(|(a, c)| (a.mul(m), *c)).collect();
        // Multiplying by a monomial is injective, but the self-paired reduction can reorder.
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        GammaScalar { terms }
    }

    fn from_unsorted(mut raw: Vec<(GammaMonomial, Coeff)>) -> Self {
        raw.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        let mut terms: Vec<(GammaMonomial, Coeff)> = Vec::with_capacity(raw.len());
        for (m, c) in raw {
            match terms.last_mut() {
                Some((lm, lc)) if *lm == m => *lc += c,
                _ => terms.push((m, c)),
            }
        }
        terms.retain(|(_, c)| !c.is_zero());
        GammaScalar { terms }
    }

    /// Evaluates at `q = qv` and `γ_k = gens[k-1]`.
    pub fn eval_with(&self, qv: Complex64, gens: &[Complex64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut v = Complex64::new(*c.numer() as f64 / *c.denom() as f64, 0.0);
                v *= qv.powi(m.qexp);
                for (k, &e) in m.gexp.iter().enumerate() {
                    if e != 0 {
                        v *= gens[k].powi(e as i32);
                    }
                }
                v
            })
            .sum()
    }

    /// Evaluates under a numeric context: the homomorphism from the symbolic ring.
    pub fn eval(&self, ctx: &NumericGammaContext) -> Complex64 {
        let gens: Vec<Complex64> = (1..=GENS).map(|k| ctx.gamma_value(k as i64)).collect();
        self.eval_with(Complex64::new(ctx.q_norm(), 0.0), &gens)
    }

    /// Sum of rational coefficients, i.e. the value at `q = 1` when no `γ` occurs.
    pub fn at_q_one(&self) -> Option<Coeff> {
        self.terms
            .iter()
            .map(|(m, c)| m.is_q_power().then_some(*c))
            .sum()
    }

    fn terms_json(&self, n: u32) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(m, c)| {
                    json!({
                        "coeff": coeff_json(c),
                        "qexp": m.qexp,
                        "gexp": m.gexps(n),
                    })
                })
                .collect(),
        )
    }

    pub fn from_json(v: &Value, n: u32) -> Result<Self> {
        let bad = |what: &str| Error::InvalidParameter(format!("malformed scalar JSON: {what}"));
        let arr = v.as_array().ok_or_else(|| bad("expected a term list"))?;
        let mut raw = Vec::with_capacity(arr.len());
        for t in arr {
            let c = parse_coeff(&t["coeff"]).ok_or_else(|| bad("coeff"))?;
            let qexp = t["qexp"].as_i64().ok_or_else(|| bad("qexp"))? as i32;
            let gexp: Vec<i16> = t["gexp"]
                .as_array()
                .ok_or_else(|| bad("gexp"))?
                .iter()
                .map(|e| e.as_i64().map(|e| e as i16))
                .collect::<Option<_>>()
                .ok_or_else(|| bad("gexp entry"))?;
            if gexp.len() > GENS {
                return Err(bad("too many generators"));
            }
            raw.push((GammaMonomial::from_parts(qexp, &gexp, n), c));
        }
        Ok(Self::from_unsorted(raw))
    }
}

fn coeff_json(c: &Coeff) -> Value {
    if c.is_integer() {
        i64::try_from(*c.numer())
            .map(Value::from)
            .unwrap_or_else(|_| Value::String(c.numer().to_string()))
    } else {
        Value::String(format!("{}/{}", c.numer(), c.denom()))
    }
}

fn parse_coeff(v: &Value) -> Option<Coeff> {
    if let Some(i) = v.as_i64() {
        return Some(Coeff::from_integer(i as i128));
    }
    let s = v.as_str()?;
    match s.split_once('/') {
        Some((a, b)) => {
            let num: i128 = a.trim().parse().ok()?;
            let d: i128 = b.trim().parse().ok()?;
            (d != 0).then(|| Coeff::new(num, d))
        }
        None => s.trim().parse().ok().map(Coeff::from_integer),
    }
}

impl Scalar for GammaScalar {
    fn zero() -> Self {
        GammaScalar::default()
    }

    fn one() -> Self {
        Self::from_int(1)
    }

    fn from_int(k: i64) -> Self {
        Self::from_ratio(Coeff::from_integer(k as i128))
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn plus(&self, other: &Self) -> Self {
        if self.terms.is_empty() {
            return other.clone();
        }
        if other.terms.is_empty() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut a, mut b) = (self.terms.iter().peekable(), other.terms.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some(x), Some(y)) => match x.0.cmp(&y.0) {
                    Ordering::Less => out.push(*a.next().unwrap()),
                    Ordering::Greater => out.push(*b.next().unwrap()),
                    Ordering::Equal => {
                        let c = x.1 + y.1;
                        if !c.is_zero() {
                            out.push((x.0, c));
                        }
                        a.next();
                        b.next();
                    }
                },
                (Some(_), None) => out.push(*a.next().unwrap()),
                (None, Some(_)) => out.push(*b.next().unwrap()),
                (None, None) => break,
            }
        }
        GammaScalar { terms: out }
    }

    fn times(&self, other: &Self) -> Self {
        match (self.terms.as_slice(), other.terms.as_slice()) {
            ([], _) | (_, []) => GammaScalar::default(),
            ([(m, c)], _) => {
                let mut s = other.mul_monomial(m);
                if !c.is_one() {
                    s = s.scale(*c);
                }
                s
            }
            (_, [(m, c)]) => {
                let mut s = self.mul_monomial(m);
                if !c.is_one() {
                    s = s.scale(*c);
                }
                s
            }
            (xs, ys) => {
                let raw = xs
                    .iter()
                    .flat_map(|(m1, c1)| ys.iter().map(move |(m2, c2)| (m1.mul(m2), c1 * c2)))
                    .collect();
                Self::from_unsorted(raw)
            }
        }
    }

    fn negate(&self) -> Self {
        GammaScalar {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }

    fn to_json(&self, n: u32) -> Value {
        self.terms_json(n)
    }
}

impl fmt::Display for GammaScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let is_unit_mono = *m == GammaMonomial::ONE;
            if !abs.is_one() || is_unit_mono {
                write!(f, "{abs}")?;
                if !is_unit_mono {
                    write!(f, "·")?;
                }
            }
            if !is_unit_mono {
                m.write(f)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for GammaScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Complex scalars compare exactly, except for division remainders (see [`Scalar::negligible_at`]).
impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }

    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }

    fn from_int(k: i64) -> Self {
        Complex64::new(k as f64, 0.0)
    }

    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }

    fn plus(&self, other: &Self) -> Self {
        self + other
    }

    fn times(&self, other: &Self) -> Self {
        self * other
    }

    fn negate(&self) -> Self {
        -self
    }

    fn to_json(&self, _n: u32) -> Value {
        complex_json(*self)
    }

    fn magnitude(&self) -> f64 {
        self.norm()
    }

    fn negligible_at(&self, scale: f64) -> bool {
        self.norm() <= NUMERIC_REMAINDER_TOL * scale.max(1.0)
    }
}

/// Relative size below which a numeric division remainder counts as zero.
pub const NUMERIC_REMAINDER_TOL: f64 = 1e-9;

/// The symbolic ring for a fixed series degree `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymbolicContext {
    n: u32,
}

impl SymbolicContext {
    pub fn new(n: u32) -> Result<Self> {
        if !(1..=MAX_N).contains(&n) {
            return Err(Error::InvalidParameter(format!(
                "series degree n = {n} must lie in 1..={MAX_N}"
            )));
        }
        Ok(SymbolicContext { n })
    }
}

impl ScalarContext for SymbolicContext {
    type S = GammaScalar;

    fn n(&self) -> u32 {
        self.n
    }

    fn q_pow(&self, e: i32) -> GammaScalar {
        GammaScalar::q_pow(e)
    }

    fn gamma(&self, i: i64) -> GammaScalar {
        GammaScalar::gamma(i, self.n)
    }
}

/// Numeric specialization: `q` is a real number and `γ(i)` a fixed table of complex values.
#[derive(Debug, Clone)]
pub struct NumericGammaContext {
    q_norm: f64,
    n: u32,
    gamma_values: Vec<Complex64>,
}

/// `e^{2πi k / n}`.
pub fn root_of_unity(k: i64, n: u32) -> Complex64 {
    let r = k.rem_euclid(n as i64) as f64;
    Complex64::from_polar(1.0, 2.0 * PI * r / n as f64)
}

impl NumericGammaContext {
    /// `γ(i) = g(1, ϖ; ε^i)/q` for a degree-one prime, i.e. a Gauss sum over the field with `q`
    /// elements. The character sends the smallest primitive element to `e^{2πi/n}` and the
    /// additive character is `x ↦ e^{2πi Tr(x)/p}`.
    pub fn new(q: u32, n: u32) -> Result<Self> {
        if n == 0 || n > MAX_N {
            return Err(Error::InvalidParameter(format!("n = {n} must lie in 1..={MAX_N}")));
        }
        if q % (2 * n) != 1 % (2 * n) {
            return Err(Error::InvalidParameter(format!(
                "q = {q} must satisfy q ≡ 1 (mod 2n = {})",
                2 * n
            )));
        }
        let field = GaloisField::new(q)?;
        let p = field.characteristic();
        let gamma_values = (0..n as i64)
            .map(|i| {
                if i == 0 {
                    return Complex64::new(-1.0, 0.0);
                }
                let g: Complex64 = (1..q)
                    .map(|d| {
                        let chi = root_of_unity(i * field.log(d).unwrap() as i64, n);
                        chi * root_of_unity(field.trace(d) as i64, p)
                    })
                    .sum();
                g / q as f64
            })
            .collect();
        Ok(NumericGammaContext {
            q_norm: q as f64,
            n,
            gamma_values,
        })
    }

    /// A context with an explicit table; `values[0]` is forced to `−1`.
    pub fn from_values(q_norm: f64, n: u32, mut values: Vec<Complex64>) -> Result<Self> {
        if values.len() != n as usize {
            return Err(Error::InvalidParameter(format!(
                "expected {n} gamma values, got {}",
                values.len()
            )));
        }
        values[0] = Complex64::new(-1.0, 0.0);
        Ok(NumericGammaContext {
            q_norm,
            n,
            gamma_values: values,
        })
    }

    pub fn q_norm(&self) -> f64 {
        self.q_norm
    }

    pub fn gamma_value(&self, i: i64) -> Complex64 {
        self.gamma_values[i.rem_euclid(self.n as i64) as usize]
    }

    pub fn gamma_values(&self) -> &[Complex64] {
        &self.gamma_values
    }
}

impl ScalarContext for NumericGammaContext {
    type S = Complex64;

    fn n(&self) -> u32 {
        self.n
    }

    fn q_pow(&self, e: i32) -> Complex64 {
        Complex64::new(self.q_norm.powi(e), 0.0)
    }

    fn gamma(&self, i: i64) -> Complex64 {
        self.gamma_value(i)
    }
}

pub fn complex_json(z: Complex64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

/// `|a − b| ≤ tol · max(1, |a|, |b|)`.
pub fn approx_eq(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * 1f64.max(a.norm()).max(b.norm())
}
