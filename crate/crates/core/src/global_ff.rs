//! The series over the rational function field `𝔽_q(t)`: power residue symbols,
//! Gauss sums, `H(c; m)` for arbitrary monic arguments by twisted
//! multiplicativity, and degree-truncated coefficient arrays of `Z`.
//!
//! Monic polynomials represent `(𝔽_q[t] ∖ {0}) / 𝔽_q^×`, `|c| = q^{deg c}`, and the
//! additive character is `ψ(x) = e^{2πi Tr(res x)/p}` where `res x` is the
//! coefficient of `t^{−1}` in the expansion of `x` at infinity. The character `ε`
//! sends the fixed generator `g` of `𝔽_q^×` to `e^{2πi/n}`, so an `n`-th root of
//! unity `g^{k(q−1)/n}` is recorded by its exponent `k mod n`.

use std::collections::BTreeMap;
use std::sync::{Arc, RwLock};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::Serialize;
use serde_json::{json, Value};

use crate::averaging::d_factors;
use crate::cg_action::ActionParams;
use crate::error::{Error, Result};
use crate::ffpoly::FFPoly;
use crate::finite_field::GaloisField;
use crate::laurent::LaurentPoly;
use crate::local_series::{h_table, HTable};
use crate::rootsys::{RootSystem, TwistParams, Weight, DEFAULT_WEYL_BUDGET};
use crate::scalars::{complex_json, root_of_unity, GammaScalar, NumericGammaContext, Scalar, SymbolicContext};

/// Largest modulus degree for a brute-force Gauss sum (`q^{deg}` terms).
pub const DEFAULT_GAUSS_DEGREE_BOUND: usize = 4;
/// Largest total degree for a truncated series.
pub const DEFAULT_Z_DEGREE_BOUND: u32 = 6;
/// Largest residue field we walk through when tabulating Gauss sums at a prime.
pub const MAX_PRIME_NORM: u64 = 2_000_000;

type Factorization = Arc<Vec<(FFPoly, u32)>>;

/// Field, degree `n`, and the caches shared by every computation over `𝔽_q[t]`.
#[derive(Debug)]
pub struct FFContext {
    field: GaloisField,
    n: u32,
    gauss_degree_bound: usize,
    z_degree_bound: u32,
    factors: RwLock<FxHashMap<FFPoly, Factorization>>,
    prime_gammas: RwLock<FxHashMap<FFPoly, Arc<NumericGammaContext>>>,
    prime_symbols: RwLock<FxHashMap<(FFPoly, FFPoly), u32>>,
}

impl FFContext {
    /// Requires `q ≡ 1 (mod 2n)`.
    pub fn new(q: u32, n: u32) -> Result<Self> {
        if n == 0 || q % (2 * n) != 1 % (2 * n) {
            return Err(Error::InvalidParameter(format!(
                "need q ≡ 1 (mod 2n); got q = {q}, n = {n}"
            )));
        }
        Ok(FFContext {
            field: GaloisField::new(q)?,
            n,
            gauss_degree_bound: DEFAULT_GAUSS_DEGREE_BOUND,
            z_degree_bound: DEFAULT_Z_DEGREE_BOUND,
            factors: RwLock::default(),
            prime_gammas: RwLock::default(),
            prime_symbols: RwLock::default(),
        })
    }

    pub fn with_bounds(mut self, gauss_degree: usize, z_degree: u32) -> Self {
        self.gauss_degree_bound = gauss_degree;
        self.z_degree_bound = z_degree;
        self
    }

    pub fn field(&self) -> &GaloisField {
        &self.field
    }

    pub fn q(&self) -> u32 {
        self.field.order()
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    fn require_monic(&self, c: &FFPoly, what: &str) -> Result<()> {
        if c.is_monic() {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("{what} `{c}` must be a monic polynomial")))
        }
    }

    /// All monic polynomials of degree `d`, in index order.
    pub fn monic_of_degree(&self, d: usize) -> impl Iterator<Item = FFPoly> + '_ {
        let q = self.q();
        (0..(q as u64).pow(d as u32)).map(move |idx| FFPoly::monic_from_index(d, idx, q))
    }

    /// Prime factorization of a monic polynomial by trial division in degree order.
    pub fn factor(&self, c: &FFPoly) -> Result<Factorization> {
        self.require_monic(c, "argument")?;
        if let Some(hit) = self.factors.read().unwrap().get(c) {
            return Ok(hit.clone());
        }
        let f = &self.field;
        let mut rest = c.clone();
        let mut out: Vec<(FFPoly, u32)> = Vec::new();
        let mut d = 1;
        while 2 * d <= rest.degree() {
            for cand in self.monic_of_degree(d) {
                let mut mult = 0;
                loop {
                    let (quot, rem) = rest.div_rem(&cand, f);
                    if !rem.is_zero() {
                        break;
                    }
                    rest = quot;
                    mult += 1;
                }
                if mult > 0 {
                    out.push((cand, mult));
                }
                if 2 * d > rest.degree() {
                    break;
                }
            }
            d += 1;
        }
        if rest.degree() > 0 {
            match out.iter_mut().find(|(p, _)| *p == rest) {
                Some((_, e)) => *e += 1,
                None => out.push((rest, 1)),
            }
        }
        out.sort();
        let out = Arc::new(out);
        self.factors.write().unwrap().insert(c.clone(), out.clone());
        Ok(out)
    }

    pub fn is_irreducible(&self, c: &FFPoly) -> Result<bool> {
        let fac = self.factor(c)?;
        Ok(fac.len() == 1 && fac[0].1 == 1)
    }

    pub fn is_squarefree(&self, c: &FFPoly) -> Result<bool> {
        Ok(self.factor(c)?.iter().all(|(_, e)| *e == 1))
    }

    /// Monic irreducibles of degree `d`.
    pub fn primes_of_degree(&self, d: usize) -> Result<Vec<FFPoly>> {
        let mut out = Vec::new();
        for c in self.monic_of_degree(d) {
            if self.is_irreducible(&c)? {
                out.push(c);
            }
        }
        Ok(out)
    }

    /// `ε`-exponent of the `n`-th root of unity `a^{(|π|−1)/n} mod π`, or `None` if `π | a`.
    pub fn symbol_at_prime(&self, a: &FFPoly, prime: &FFPoly) -> Option<u32> {
        let f = &self.field;
        let r = a.rem(prime, f);
        if r.is_zero() {
            return None;
        }
        let norm = prime.norm(self.q());
        let z = r.pow_mod((norm - 1) / self.n as u64, prime, f);
        debug_assert_eq!(z.degree(), 0, "power residue must be a constant");
        let step = (self.q() - 1) / self.n;
        let log = f.log(z.coeff(0)).expect("nonzero residue");
        debug_assert_eq!(log % step, 0);
        Some(log / step)
    }

    fn prime_pair_symbol(&self, a: &FFPoly, prime: &FFPoly) -> Option<u32> {
        let key = (a.clone(), prime.clone());
        if let Some(&hit) = self.prime_symbols.read().unwrap().get(&key) {
            return Some(hit);
        }
        let s = self.symbol_at_prime(a, prime)?;
        self.prime_symbols.write().unwrap().insert(key, s);
        Some(s)
    }

    /// `ε`-exponent of `(a/b)` for monic `b`; `None` when `gcd(a, b) ≠ 1`.
    pub fn residue_exponent(&self, a: &FFPoly, b: &FFPoly) -> Result<Option<u32>> {
        let mut total = 0u64;
        for (prime, e) in self.factor(b)?.iter() {
            match self.symbol_at_prime(a, prime) {
                None => return Ok(None),
                Some(s) => total += *e as u64 * s as u64,
            }
        }
        Ok(Some((total % self.n as u64) as u32))
    }

    /// `(a/b)` as a complex `n`-th root of unity, or `0` when `gcd(a, b) ≠ 1`.
    pub fn residue_symbol(&self, a: &FFPoly, b: &FFPoly) -> Result<Complex64> {
        Ok(match self.residue_exponent(a, b)? {
            None => Complex64::new(0.0, 0.0),
            Some(k) => root_of_unity(k as i64, self.n),
        })
    }

    /// `ψ(r/c)` for monic `c`: only the coefficient of `t^{deg c − 1}` in `r mod c` matters.
    pub fn psi(&self, r: &FFPoly, c: &FFPoly) -> Complex64 {
        if c.degree() == 0 {
            return Complex64::new(1.0, 0.0);
        }
        let top = r.rem(c, &self.field).coeff(c.degree() - 1);
        root_of_unity(self.field.trace(top) as i64, self.field.characteristic())
    }

    /// `g(a, c; ε^t) = Σ_{d mod c} ε^t((d/c)) ψ(ad/c)`, summed term by term.
    pub fn gauss_sum(&self, a: &FFPoly, c: &FFPoly, t: i64) -> Result<Complex64> {
        self.require_monic(c, "modulus")?;
        let deg = c.degree();
        if deg > self.gauss_degree_bound {
            return Err(Error::BoundExceeded {
                what: "Gauss-sum modulus degree",
                value: deg as u64,
                bound: self.gauss_degree_bound as u64,
            });
        }
        let f = &self.field;
        let factors = self.factor(c)?;
        let mut total = Complex64::new(0.0, 0.0);
        for idx in 0..c.norm(self.q()) {
            let d = FFPoly::residue_from_index(deg, idx, self.q());
            let mut k = 0u64;
            let mut coprime = true;
            for (prime, e) in factors.iter() {
                match self.symbol_at_prime(&d, prime) {
                    None => {
                        coprime = false;
                        break;
                    }
                    Some(s) => k += *e as u64 * s as u64,
                }
            }
            if coprime {
                let chi = root_of_unity(t * k as i64, self.n);
                total += chi * self.psi(&a.mul(&d, f), c);
            }
        }
        Ok(total)
    }

    /// `g(1, π; ε^i)` for `i = 0..n`, from a walk through the powers of a primitive root mod `π`.
    pub fn prime_gauss_sums(&self, prime: &FFPoly) -> Result<Vec<Complex64>> {
        let f = &self.field;
        let deg = prime.degree();
        let norm = prime.norm(self.q());
        if norm > MAX_PRIME_NORM {
            return Err(Error::BoundExceeded {
                what: "prime norm",
                value: norm,
                bound: MAX_PRIME_NORM,
            });
        }
        let order = norm - 1;
        let divisors = prime_divisors(order);
        let one = FFPoly::one();
        let theta = (1..norm)
            .map(|idx| FFPoly::residue_from_index(deg, idx, self.q()))
            .find(|cand| divisors.iter().all(|&p| cand.pow_mod(order / p, prime, f) != one))
            .expect("the residue field has a primitive root");
        let s = self.symbol_at_prime(&theta, prime).unwrap() as u64;
        let n = self.n as u64;
        let mut bins = vec![Complex64::new(0.0, 0.0); self.n as usize];
        let mut cur = one;
        for k in 0..order {
            bins[((s * k) % n) as usize] += self.psi(&cur, prime);
            cur = cur.mul_mod(&theta, prime, f);
        }
        Ok((0..n)
            .map(|i| {
                bins.iter()
                    .enumerate()
                    .map(|(j, b)| b * root_of_unity((i * j as u64) as i64, self.n))
                    .sum()
            })
            .collect())
    }

    /// `q ↦ |π|`, `γ(i) ↦ g(1, π; ε^i)/|π|` (with `γ(0) = −1`).
    pub fn local_context(&self, prime: &FFPoly) -> Result<Arc<NumericGammaContext>> {
        if let Some(hit) = self.prime_gammas.read().unwrap().get(prime) {
            return Ok(hit.clone());
        }
        let norm = prime.norm(self.q()) as f64;
        let values = self.prime_gauss_sums(prime)?.into_iter().map(|g| g / norm).collect();
        let ctx = Arc::new(NumericGammaContext::from_values(norm, self.n, values)?);
        self.prime_gammas.write().unwrap().insert(prime.clone(), ctx.clone());
        Ok(ctx)
    }

    /// Exponent of `ξ(c, c′)`, the product of symbol powers relating two coprime tuples.
    pub fn xi_exponent(&self, c: &[FFPoly], cp: &[FFPoly], rs: &RootSystem) -> Result<u32> {
        let sym = |a: &FFPoly, b: &FFPoly| -> Result<i64> {
            self.residue_exponent(a, b)?
                .map(i64::from)
                .ok_or_else(|| Error::InvalidParameter(format!("ξ needs coprime arguments; `{a}` and `{b}` share a factor")))
        };
        let r = rs.rank();
        let mut total = 0i64;
        for i in 0..r {
            let len = rs.simple_len_sq(i) as i64;
            total += len * (sym(&c[i], &cp[i])? + sym(&cp[i], &c[i])?);
            for j in i + 1..r {
                let g = rs.gram2(i, j) as i64;
                total += g * (sym(&c[i], &cp[j])? + sym(&cp[i], &c[j])?);
            }
        }
        Ok(total.rem_euclid(self.n as i64) as u32)
    }

    pub fn xi_factor(&self, c: &[FFPoly], cp: &[FFPoly], rs: &RootSystem) -> Result<Complex64> {
        for a in c.iter().chain(cp) {
            self.require_monic(a, "argument")?;
        }
        Ok(root_of_unity(self.xi_exponent(c, cp, rs)? as i64, self.n))
    }
}

fn prime_divisors(mut v: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= v {
        if v % d == 0 {
            out.push(d);
            while v % d == 0 {
                v /= d;
            }
        }
        d += 1;
    }
    if v > 1 {
        out.push(v);
    }
    out
}

/// `H(c; m)` for arbitrary monic arguments and twists.
///
/// Each `c_i` is split into prime blocks `π^{β}`; at `π` the twist is reduced to
/// `π^{ord_π m}` (the remaining part contributes `Π_j (m′_j/π^{β_j})^{−‖α_j‖²}`),
/// the block value is the `β` coefficient of `N(x; ord_π m)` with `q = |π|` and
/// `γ(i) = g(1,π;ε^i)/|π|`, and blocks are combined with the `ξ` factors.
#[derive(Debug)]
pub struct HEvaluator<'a> {
    ctx: &'a FFContext,
    rs: RootSystem,
    budget: u64,
    tables: RwLock<FxHashMap<Vec<u32>, Arc<HTable<GammaScalar>>>>,
}

/// One evaluated coefficient.
#[derive(Debug, Clone)]
pub struct GlobalH {
    pub args: Vec<FFPoly>,
    pub twist: Vec<FFPoly>,
    pub value: Complex64,
}

impl<'a> HEvaluator<'a> {
    pub fn new(ctx: &'a FFContext, rs: RootSystem) -> Result<Self> {
        if rs.n() != ctx.n() {
            return Err(Error::InvalidParameter(format!(
                "root system built for n = {} but the field context has n = {}",
                rs.n(),
                ctx.n()
            )));
        }
        Ok(HEvaluator {
            ctx,
            rs,
            budget: DEFAULT_WEYL_BUDGET,
            tables: RwLock::default(),
        })
    }

    pub fn ctx(&self) -> &FFContext {
        self.ctx
    }

    pub fn rs(&self) -> &RootSystem {
        &self.rs
    }

    /// Symbolic `N(x; ℓ)`, built once per `ℓ`.
    pub fn table(&self, ell: &[u32]) -> Result<Arc<HTable<GammaScalar>>> {
        if let Some(hit) = self.tables.read().unwrap().get(ell) {
            return Ok(hit.clone());
        }
        let params = ActionParams::new(
            self.rs.clone(),
            TwistParams::new(ell.to_vec()),
            SymbolicContext::new(self.ctx.n())?,
        )?;
        let table = Arc::new(h_table(&params, self.budget)?);
        self.tables.write().unwrap().insert(ell.to_vec(), table.clone());
        Ok(table)
    }

    fn check_args(&self, c: &[FFPoly], m: &[FFPoly]) -> Result<()> {
        let r = self.rs.rank();
        if c.len() != r || m.len() != r {
            return Err(Error::InvalidParameter(format!(
                "expected {r} arguments and {r} twists, got {} and {}",
                c.len(),
                m.len()
            )));
        }
        for a in c.iter().chain(m) {
            self.ctx.require_monic(a, "argument")?;
        }
        Ok(())
    }

    /// Distinct primes dividing some `c_i`, sorted.
    pub fn prime_support(&self, c: &[FFPoly]) -> Result<Vec<FFPoly>> {
        let mut primes = Vec::new();
        for ci in c {
            primes.extend(self.ctx.factor(ci)?.iter().map(|(p, _)| p.clone()));
        }
        primes.sort();
        primes.dedup();
        Ok(primes)
    }

    pub fn evaluate(&self, c: &[FFPoly], m: &[FFPoly]) -> Result<Complex64> {
        self.check_args(c, m)?;
        let primes = self.prime_support(c)?;
        self.combine_blocks(c, m, &primes)
    }

    pub fn evaluate_record(&self, c: &[FFPoly], m: &[FFPoly]) -> Result<GlobalH> {
        Ok(GlobalH {
            args: c.to_vec(),
            twist: m.to_vec(),
            value: self.evaluate(c, m)?,
        })
    }

    /// Same value, with the prime blocks combined in a seeded random order.
    pub fn evaluate_shuffled(&self, c: &[FFPoly], m: &[FFPoly], seed: u64) -> Result<Complex64> {
        self.check_args(c, m)?;
        let mut primes = self.prime_support(c)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for k in (1..primes.len()).rev() {
            primes.swap(k, rng.random_range(0..=k));
        }
        self.combine_blocks(c, m, &primes)
    }

    fn combine_blocks(&self, c: &[FFPoly], m: &[FFPoly], primes: &[FFPoly]) -> Result<Complex64> {
        let f = self.ctx.field();
        let r = self.rs.rank();
        let n = self.ctx.n() as i64;
        let sym = |a: &FFPoly, p: &FFPoly| -> i64 {
            self.ctx.prime_pair_symbol(a, p).expect("distinct primes are coprime") as i64
        };
        let mut value = Complex64::new(1.0, 0.0);
        let mut exponent = 0i64;
        let mut done: Vec<(&FFPoly, Vec<u32>)> = Vec::with_capacity(primes.len());
        for prime in primes {
            let beta: Vec<u32> = c.iter().map(|ci| valuation(ci, prime, f).0).collect();
            let mut ell = Vec::with_capacity(r);
            for (j, mj) in m.iter().enumerate() {
                let (l, rest) = valuation(mj, prime, f);
                ell.push(l);
                let s = self.ctx.symbol_at_prime(&rest, prime).expect("twist part is coprime to π") as i64;
                exponent -= self.rs.simple_len_sq(j) as i64 * beta[j] as i64 * s;
            }
            let table = self.table(&ell)?;
            let coeff = table.get(&Weight::new(&beta.iter().map(|&b| b as i32).collect::<Vec<_>>()));
            if coeff.is_zero() {
                return Ok(Complex64::new(0.0, 0.0));
            }
            value *= coeff.eval(&*self.ctx.local_context(prime)?);

            // ξ(previous blocks, π^β)
            for (other, gamma) in &done {
                let to_new = sym(other, prime);
                let to_old = sym(prime, other);
                for i in 0..r {
                    let len = self.rs.simple_len_sq(i) as i64;
                    exponent += len * (gamma[i] as i64 * beta[i] as i64) * (to_new + to_old);
                    for j in i + 1..r {
                        let g = self.rs.gram2(i, j) as i64;
                        exponent += g * (gamma[i] as i64 * beta[j] as i64 * to_new + beta[i] as i64 * gamma[j] as i64 * to_old);
                    }
                }
            }
            done.push((prime, beta));
        }
        Ok(value * root_of_unity(exponent.rem_euclid(n), n as u32))
    }
}

/// `(ord_π a, a / π^{ord_π a})`.
fn valuation(a: &FFPoly, prime: &FFPoly, f: &GaloisField) -> (u32, FFPoly) {
    let mut rest = a.clone();
    let mut k = 0;
    loop {
        let (quot, rem) = rest.div_rem(prime, f);
        if !rem.is_zero() {
            return (k, rest);
        }
        rest = quot;
        k += 1;
    }
}

/// Degree tuples `d` with `Σ d_i ≤ bound`, in lexicographic order.
pub fn degree_tuples(rank: usize, bound: u32) -> Vec<Vec<u32>> {
    fn extend(prefix: &mut Vec<u32>, rank: usize, left: u32, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == rank {
            out.push(prefix.clone());
            return;
        }
        for d in 0..=left {
            prefix.push(d);
            extend(prefix, rank, left - d, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), rank, bound, &mut out);
    out
}

/// Decodes a flat index into a tuple of monic polynomials of the given degrees.
fn monic_tuple(degrees: &[u32], mut idx: u64, q: u32) -> Vec<FFPoly> {
    degrees
        .iter()
        .map(|&d| {
            let count = (q as u64).pow(d);
            let c = FFPoly::monic_from_index(d as usize, idx % count, q);
            idx /= count;
            c
        })
        .collect()
}

/// `Σ_{deg c_i = d_i} value(c)` over all monic tuples, evaluated in parallel and summed in index order.
pub fn sum_over_degree<F>(degrees: &[u32], q: u32, value: F) -> Result<Complex64>
where
    F: Fn(&[FFPoly]) -> Result<Complex64> + Sync,
{
    let total: u64 = degrees.iter().map(|&d| (q as u64).pow(d)).product();
    let values: Vec<Complex64> = (0..total)
        .into_par_iter()
        .map(|idx| value(&monic_tuple(degrees, idx, q)))
        .collect::<Result<_>>()?;
    Ok(values.into_iter().sum())
}

/// `Σ_{deg c_i = d_i, Σ d_i ≤ B} H(c; m) x^d`.
#[derive(Debug, Clone)]
pub struct TruncatedZ {
    pub system: String,
    pub q: u32,
    pub n: u32,
    pub twist: Vec<FFPoly>,
    pub bound: u32,
    pub coeffs: BTreeMap<Vec<u32>, Complex64>,
}

impl TruncatedZ {
    pub fn coeff(&self, d: &[u32]) -> Option<Complex64> {
        self.coeffs.get(d).copied()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "params": {
                "type": self.system,
                "n": self.n,
                "q": self.q,
                "twist": self.twist.iter().map(ToString::to_string).collect::<Vec<_>>(),
                "maxdeg": self.bound,
            },
            "coeffs": self.coeffs.iter().map(|(d, z)| json!({ "deg": d, "re": z.re, "im": z.im })).collect::<Vec<_>>(),
        })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("deg,re,im\n");
        for (d, z) in &self.coeffs {
            let d: Vec<String> = d.iter().map(u32::to_string).collect();
            out.push_str(&format!("{},{:e},{:e}\n", d.join(" "), z.re, z.im));
        }
        out
    }
}

pub fn assemble_z(eval: &HEvaluator, twist: &[FFPoly], bound: u32) -> Result<TruncatedZ> {
    let ctx = eval.ctx();
    if bound > ctx.z_degree_bound {
        return Err(Error::BoundExceeded {
            what: "total series degree",
            value: bound as u64,
            bound: ctx.z_degree_bound as u64,
        });
    }
    let mut coeffs = BTreeMap::new();
    for d in degree_tuples(eval.rs().rank(), bound) {
        let z = sum_over_degree(&d, ctx.q(), |c| eval.evaluate(c, twist))?;
        coeffs.insert(d, z);
    }
    Ok(TruncatedZ {
        system: eval.rs().code().to_string(),
        q: ctx.q(),
        n: ctx.n(),
        twist: twist.to_vec(),
        bound,
        coeffs,
    })
}

/// `Σ g(1,c_1;ε^{‖α_1‖²}) g(1,c_2;ε^{‖α_2‖²}) ε((c_1/c_2))^{2⟨α_1,α_2⟩}` over monic `c_1, c_2` of the given
/// degrees with `c_1c_2` squarefree: the rank-two coefficient restricted to squarefree
/// supports, using only Gauss sums and residue symbols.
pub fn squarefree_rank_two_oracle(ctx: &FFContext, rs: &RootSystem, degrees: [u32; 2]) -> Result<Complex64> {
    let g12 = rs.gram2(0, 1) as i64;
    let one = FFPoly::one();
    let gauss: Vec<FxHashMap<FFPoly, Complex64>> = degrees
        .iter()
        .enumerate()
        .map(|(i, &d)| {
            let power = rs.simple_len_sq(i) as i64;
            ctx.monic_of_degree(d as usize)
                .filter(|c| ctx.is_squarefree(c).unwrap_or(false))
                .map(|c| {
                    let g = ctx.gauss_sum(&one, &c, power)?;
                    Ok((c, g))
                })
                .collect::<Result<_>>()
        })
        .collect::<Result<_>>()?;
    let mut firsts: Vec<_> = gauss[0].iter().collect();
    firsts.sort_by(|a, b| a.0.cmp(b.0));
    let mut seconds: Vec<_> = gauss[1].iter().collect();
    seconds.sort_by(|a, b| a.0.cmp(b.0));
    let mut total = Complex64::new(0.0, 0.0);
    for (c1, g1) in &firsts {
        for (c2, g2) in &seconds {
            if let Some(k) = ctx.residue_exponent(c1, c2)? {
                total += *g1 * *g2 * root_of_unity(g12 * k as i64, ctx.n());
            }
        }
    }
    Ok(total)
}

/// The same restricted sum computed from `H`.
pub fn squarefree_partial_sum(eval: &HEvaluator, twist: &[FFPoly], degrees: &[u32]) -> Result<Complex64> {
    let ctx = eval.ctx();
    sum_over_degree(degrees, ctx.q(), |c| {
        let prod = c.iter().fold(FFPoly::one(), |acc, ci| acc.mul(ci, ctx.field()));
        if ctx.is_squarefree(&prod)? {
            eval.evaluate(c, twist)
        } else {
            Ok(Complex64::new(0.0, 0.0))
        }
    })
}

/// One candidate substitution `x_i ↦ q^{k_i} u_i` tried by the self-similarity probe.
#[derive(Debug, Clone, Serialize)]
pub struct ProbeCandidate {
    pub target: &'static str,
    pub q_shifts: Vec<i32>,
    pub max_residual: f64,
    pub matched: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeReport {
    pub system: String,
    pub q: u32,
    pub n: u32,
    pub bound: u32,
    pub best: Option<ProbeCandidate>,
    pub matches: Vec<ProbeCandidate>,
    pub candidates_tried: usize,
}

/// Compares the untwisted truncated series with the local data at a degree-one prime,
/// `N(x; 0)` and the power-series expansion of `N/D`, under every monomial rescaling
/// `x_i ↦ q^{k_i} x_i` with `|k_i| ≤ 2`. Advisory only.
pub fn self_similarity_probe(eval: &HEvaluator, bound: u32) -> Result<ProbeReport> {
    let ctx = eval.ctx();
    let rs = eval.rs();
    let rank = rs.rank();
    let twist = vec![FFPoly::one(); rank];
    let z = assemble_z(eval, &twist, bound)?;
    let local = ctx.local_context(&FFPoly::t())?;
    let numer = eval.table(&vec![0; rank])?.coeffs.map_coeffs(|s| s.eval(&local));
    let series = truncated_quotient(&numer, rs, &local, bound);
    let q = ctx.q() as f64;

    let mut candidates = Vec::new();
    for (target, poly) in [("N", &numer), ("N/D", &series)] {
        for shift in degree_box(rank, 2) {
            let mut worst = 0f64;
            let mut scale = 1f64;
            for (d, zc) in &z.coeffs {
                let w = Weight::new(&d.iter().map(|&x| x as i32).collect::<Vec<_>>());
                let power: i32 = d.iter().zip(&shift).map(|(&di, &k)| di as i32 * k).sum();
                let predicted = poly.coeff(&w) * q.powi(power);
                worst = worst.max((zc - predicted).norm());
                scale = scale.max(zc.norm());
            }
            let max_residual = worst / scale;
            candidates.push(ProbeCandidate {
                target,
                q_shifts: shift,
                max_residual,
                matched: max_residual < 1e-9,
            });
        }
    }
    let best = candidates
        .iter()
        .min_by(|a, b| a.max_residual.total_cmp(&b.max_residual))
        .cloned();
    Ok(ProbeReport {
        system: rs.code().to_string(),
        q: ctx.q(),
        n: ctx.n(),
        bound,
        best,
        matches: candidates.iter().filter(|c| c.matched).cloned().collect(),
        candidates_tried: candidates.len(),
    })
}

fn degree_box(rank: usize, radius: i32) -> Vec<Vec<i32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..rank {
        out = out
            .into_iter()
            .flat_map(|p| {
                (-radius..=radius).map(move |k| {
                    let mut v = p.clone();
                    v.push(k);
                    v
                })
            })
            .collect();
    }
    out
}

/// `N / D` expanded as a power series, truncated at total degree `bound`.
fn truncated_quotient(
    numer: &LaurentPoly<Complex64>,
    rs: &RootSystem,
    local: &NumericGammaContext,
    bound: u32,
) -> LaurentPoly<Complex64> {
    use crate::scalars::ScalarContext;
    let within = |w: &Weight| w.height() <= bound as i32;
    let mut series = numer.filter(within);
    for factor in d_factors(rs) {
        let step = LaurentPoly::monomial(rs.rank(), factor.vec, local.q_pow(factor.qexp));
        let mut power = LaurentPoly::one(rs.rank());
        let mut geometric = LaurentPoly::one(rs.rank());
        loop {
            power = power.times(&step).filter(within);
            if power.is_zero() {
                break;
            }
            geometric.add_assign(&power);
        }
        series = series.times(&geometric).filter(within);
    }
    series
}

/// Random monic polynomial with degree in `1..=max_degree`.
pub fn random_monic(rng: &mut impl Rng, q: u32, max_degree: usize) -> FFPoly {
    let d = rng.random_range(1..=max_degree);
    FFPoly::monic_from_index(d, rng.random_range(0..(q as u64).pow(d as u32)), q)
}

/// Worst deviation of one identity over its sampled instances.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityCheck {
    pub identity: &'static str,
    pub instances: usize,
    pub max_residual: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct GaussSuiteReport {
    pub q: u32,
    pub n: u32,
    pub seed: u64,
    pub checks: Vec<IdentityCheck>,
}

impl GaussSuiteReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

fn identity(name: &'static str, residuals: &[f64], tol: f64) -> IdentityCheck {
    let max_residual = residuals.iter().copied().fold(0.0, f64::max);
    IdentityCheck {
        identity: name,
        instances: residuals.len(),
        max_residual,
        pass: !residuals.is_empty() && max_residual < tol,
    }
}

/// Multiplicativity in the modulus, the twisted dependence on the numerator, the norm of
/// prime Gauss sums, reciprocity and bilinearity of the symbol, on `samples` seeded
/// random instances with moduli of degree `≤ max_degree`.
pub fn gauss_identity_suite(ctx: &FFContext, samples: usize, max_degree: usize, seed: u64) -> Result<GaussSuiteReport> {
    const TOL: f64 = 1e-9;
    let q = ctx.q();
    let n = ctx.n() as i64;
    let f = ctx.field();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let one = FFPoly::one();

    let coprime_pair = |rng: &mut ChaCha8Rng, total: usize| loop {
        let a = random_monic(rng, q, total.max(2) - 1);
        let b = random_monic(rng, q, (total - a.degree()).max(1));
        if a.degree() + b.degree() <= total && a.gcd(&b, f).is_one() {
            return (a, b);
        }
    };

    let mut mult = Vec::new();
    let mut twist = Vec::new();
    let mut norm = Vec::new();
    let mut recip = Vec::new();
    let mut bilinear = Vec::new();
    for _ in 0..samples {
        let t = rng.random_range(0..n);
        let (a, b) = coprime_pair(&mut rng, max_degree);
        let m = random_monic(&mut rng, q, 3).scale(rng.random_range(1..q), f);
        let lhs = ctx.gauss_sum(&m, &a.mul(&b, f), t)?;
        let ab = ctx.residue_exponent(&a, &b)?.unwrap() as i64;
        let ba = ctx.residue_exponent(&b, &a)?.unwrap() as i64;
        let rhs = ctx.gauss_sum(&m, &a, t)? * ctx.gauss_sum(&m, &b, t)? * root_of_unity(t * (ab + ba), ctx.n());
        mult.push((lhs - rhs).norm());

        let b = random_monic(&mut rng, q, max_degree);
        let a = loop {
            let a = random_monic(&mut rng, q, 3).scale(rng.random_range(1..q), f);
            if a.gcd(&b, f).is_one() {
                break a;
            }
        };
        let m = random_monic(&mut rng, q, 3);
        let ab = ctx.residue_exponent(&a, &b)?.unwrap() as i64;
        let lhs = ctx.gauss_sum(&a.mul(&m, f), &b, t)?;
        let rhs = root_of_unity(-t * ab, ctx.n()) * ctx.gauss_sum(&m, &b, t)?;
        twist.push((lhs - rhs).norm());

        let prime = loop {
            let c = random_monic(&mut rng, q, max_degree);
            if ctx.is_irreducible(&c)? {
                break c;
            }
        };
        if n > 1 {
            let t = rng.random_range(1..n);
            let prod = ctx.gauss_sum(&one, &prime, t)? * ctx.gauss_sum(&one, &prime, -t)?;
            norm.push((prod - Complex64::new(prime.norm(q) as f64, 0.0)).norm());
        }

        let (a, b) = coprime_pair(&mut rng, 2 * max_degree);
        let same = ctx.residue_exponent(&a, &b)? == ctx.residue_exponent(&b, &a)?;
        recip.push(if same { 0.0 } else { 1.0 });

        let b = random_monic(&mut rng, q, max_degree);
        let a1 = random_monic(&mut rng, q, 3);
        let a2 = random_monic(&mut rng, q, 3);
        let joint = ctx.residue_symbol(&a1.mul(&a2, f), &b)?;
        let split = ctx.residue_symbol(&a1, &b)? * ctx.residue_symbol(&a2, &b)?;
        bilinear.push((joint - split).norm());
    }
    Ok(GaussSuiteReport {
        q,
        n: ctx.n(),
        seed,
        checks: vec![
            identity("multiplicativity in the modulus", &mult, TOL),
            identity("numerator twist", &twist, TOL),
            identity("norm of prime Gauss sums", &norm, TOL),
            identity("reciprocity for monics", &recip, 0.5),
            identity("symbol bilinearity", &bilinear, TOL),
        ],
    })
}

pub fn gauss_suite_json(report: &GaussSuiteReport) -> Value {
    serde_json::to_value(report).expect("report serializes")
}

/// Largest relative spread of `H(c; m)` over several random block orders, on `tuples` random inputs.
pub fn order_independence(eval: &HEvaluator, tuples: usize, orders: usize, seed: u64) -> Result<f64> {
    let ctx = eval.ctx();
    let q = ctx.q();
    let rank = eval.rs().rank();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool: Vec<FFPoly> = ctx.primes_of_degree(1)?.into_iter().take(3).chain(ctx.primes_of_degree(2)?.into_iter().take(2)).collect();
    let mut worst = 0f64;
    for _ in 0..tuples {
        let c: Vec<FFPoly> = (0..rank)
            .map(|_| {
                (0..rng.random_range(1..=3)).fold(FFPoly::one(), |acc, _| acc.mul(&pool[rng.random_range(0..pool.len())], ctx.field()))
            })
            .collect();
        let m: Vec<FFPoly> = (0..rank)
            .map(|_| if rng.random_bool(0.5) { FFPoly::one() } else { random_monic(&mut rng, q, 2) })
            .collect();
        let base = eval.evaluate(&c, &m)?;
        for _ in 0..orders {
            let other = eval.evaluate_shuffled(&c, &m, rng.random())?;
            worst = worst.max((other - base).norm() / base.norm().max(1.0));
        }
    }
    Ok(worst)
}

pub fn complex_entry(z: Complex64) -> Value {
    complex_json(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::approx_eq;

    fn poly(c: &[u32]) -> FFPoly {
        FFPoly::from_coeffs(c.to_vec())
    }

    #[test]
    fn residue_symbol_examples() {
        let ctx = FFContext::new(5, 2).unwrap();
        let t = FFPoly::t();
        assert!(approx_eq(ctx.residue_symbol(&poly(&[2, 1]), &t).unwrap(), Complex64::new(-1.0, 0.0), 1e-12));
        assert!(approx_eq(ctx.residue_symbol(&poly(&[1, 1]), &t).unwrap(), Complex64::new(1.0, 0.0), 1e-12));
        for b in ctx.monic_of_degree(2) {
            assert!(approx_eq(ctx.residue_symbol(&FFPoly::one(), &b).unwrap(), Complex64::new(1.0, 0.0), 1e-12));
        }
        assert_eq!(ctx.residue_exponent(&t, &poly(&[0, 0, 1])).unwrap(), None);
        assert!(ctx.residue_symbol(&t, &poly(&[1, 2])).is_err());
    }

    #[test]
    fn symbol_depends_on_numerator_mod_b() {
        let ctx = FFContext::new(13, 3).unwrap();
        let f = ctx.field();
        let b = poly(&[2, 5, 1]);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..30 {
            let a = random_monic(&mut rng, 13, 4);
            let shifted = a.add(&b.mul(&random_monic(&mut rng, 13, 2), f), f);
            assert_eq!(ctx.residue_exponent(&a, &b).unwrap(), ctx.residue_exponent(&shifted, &b).unwrap());
        }
    }

    #[test]
    fn factorization_reassembles() {
        let ctx = FFContext::new(5, 2).unwrap();
        let f = ctx.field();
        for c in ctx.monic_of_degree(4).step_by(7) {
            let fac = ctx.factor(&c).unwrap();
            let back = fac.iter().fold(FFPoly::one(), |acc, (p, e)| acc.mul(&p.pow(*e, f), f));
            assert_eq!(back, c);
            for (p, _) in fac.iter() {
                assert!(p.is_monic());
            }
        }
        assert_eq!(ctx.primes_of_degree(1).unwrap().len(), 5);
        assert_eq!(ctx.primes_of_degree(2).unwrap().len(), 10);
        assert_eq!(ctx.primes_of_degree(3).unwrap().len(), 40);
    }

    #[test]
    fn quadratic_gauss_sum_over_f5() {
        let ctx = FFContext::new(5, 2).unwrap();
        let g = ctx.gauss_sum(&FFPoly::one(), &FFPoly::t(), 1).unwrap();
        assert!((g - Complex64::new(5f64.sqrt(), 0.0)).norm() < 1e-9);
        let g_inv = ctx.gauss_sum(&FFPoly::one(), &FFPoly::t(), -1).unwrap();
        assert!((g * g_inv - Complex64::new(5.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn degree_bound_is_enforced() {
        let ctx = FFContext::new(5, 2).unwrap();
        let c = FFPoly::monic_from_index(5, 0, 5);
        assert!(matches!(ctx.gauss_sum(&FFPoly::one(), &c, 1), Err(Error::BoundExceeded { .. })));
    }

    #[test]
    fn psi_is_trivial_exactly_on_polynomials() {
        let ctx = FFContext::new(5, 2).unwrap();
        let f = ctx.field();
        let c = poly(&[1, 0, 1]);
        for idx in 1..25 {
            let r = FFPoly::residue_from_index(2, idx, 5);
            let some_nontrivial = (0..25)
                .map(|k| FFPoly::residue_from_index(2, k, 5))
                .any(|y| (ctx.psi(&y.mul(&r, f), &c) - Complex64::new(1.0, 0.0)).norm() > 1e-9);
            assert!(some_nontrivial);
        }
        assert!(approx_eq(ctx.psi(&c, &c), Complex64::new(1.0, 0.0), 1e-12));
    }

    #[test]
    fn walked_prime_gauss_sums_match_direct_sums() {
        for (q, n) in [(5, 2), (13, 2), (13, 3), (9, 2), (25, 4)] {
            let ctx = FFContext::new(q, n).unwrap();
            for d in 1..=2 {
                for prime in ctx.primes_of_degree(d).unwrap().into_iter().take(4) {
                    let walked = ctx.prime_gauss_sums(&prime).unwrap();
                    for t in 0..n as i64 {
                        let direct = ctx.gauss_sum(&FFPoly::one(), &prime, t).unwrap();
                        assert!((walked[t as usize] - direct).norm() < 1e-8, "q={q} n={n} π={prime} t={t}");
                    }
                }
            }
        }
    }

    #[test]
    fn degree_one_gammas_match_numeric_context() {
        for (q, n) in [(5, 2), (13, 3), (13, 2)] {
            let ctx = FFContext::new(q, n).unwrap();
            let reference = NumericGammaContext::new(q, n).unwrap();
            let local = ctx.local_context(&poly(&[3, 1])).unwrap();
            for i in 0..n as i64 {
                assert!(approx_eq(local.gamma_value(i), reference.gamma_value(i), 1e-10));
            }
        }
    }

    #[test]
    fn gauss_suite_passes() {
        for (q, n) in [(5, 2), (13, 2), (13, 3)] {
            let ctx = FFContext::new(q, n).unwrap();
            let report = gauss_identity_suite(&ctx, 20, 3, 11).unwrap();
            assert!(report.all_pass(), "{report:?}");
        }
    }

    #[test]
    fn xi_examples() {
        let ctx = FFContext::new(5, 2).unwrap();
        let rs = RootSystem::from_code("A1", 2).unwrap();
        assert_eq!(ctx.xi_factor(&[FFPoly::one()], &[FFPoly::one()], &rs).unwrap(), Complex64::new(1.0, 0.0));
        for c in ctx.monic_of_degree(2) {
            for cp in ctx.monic_of_degree(1) {
                if c.gcd(&cp, ctx.field()).is_one() {
                    assert_eq!(ctx.xi_exponent(std::slice::from_ref(&c), &[cp], &rs).unwrap(), 0);
                }
            }
        }
        assert!(ctx.xi_factor(&[FFPoly::t()], &[FFPoly::t()], &rs).is_err());
    }

    #[test]
    fn xi_direct_matches_factored() {
        let ctx = FFContext::new(13, 3).unwrap();
        let rs = RootSystem::from_code("A2", 3).unwrap();
        let c = [FFPoly::t(), FFPoly::one()];
        let cp = [poly(&[1, 1]), poly(&[2, 1])];
        let direct = ctx.xi_exponent(&c, &cp, &rs).unwrap() as i64;
        // Expand every symbol over the prime factors of both sides.
        let sym = |a: &FFPoly, b: &FFPoly| -> i64 {
            ctx.factor(b).unwrap().iter().map(|(p, e)| *e as i64 * ctx.symbol_at_prime(a, p).unwrap() as i64).sum::<i64>()
        };
        let mut factored = 0i64;
        for i in 0..2 {
            factored += sym(&c[i], &cp[i]) + sym(&cp[i], &c[i]);
        }
        factored += rs.gram2(0, 1) as i64 * (sym(&c[0], &cp[1]) + sym(&cp[0], &c[1]));
        assert_eq!(direct, factored.rem_euclid(3));
    }

    #[test]
    fn h_trivial_arguments() {
        let ctx = FFContext::new(5, 2).unwrap();
        let eval = HEvaluator::new(&ctx, RootSystem::from_code("A2", 2).unwrap()).unwrap();
        let one = vec![FFPoly::one(); 2];
        assert_eq!(eval.evaluate(&one, &one).unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(eval.evaluate(&one, &[FFPoly::t(), poly(&[1, 1])]).unwrap(), Complex64::new(1.0, 0.0));
        assert!(eval.evaluate(&[poly(&[1, 2]), FFPoly::one()], &one).is_err());
    }

    #[test]
    fn a1_squarefree_h_is_gauss_sum() {
        let ctx = FFContext::new(5, 2).unwrap();
        let eval = HEvaluator::new(&ctx, RootSystem::from_code("A1", 2).unwrap()).unwrap();
        let one = [FFPoly::one()];
        for d in 1..=3 {
            for c in ctx.monic_of_degree(d) {
                if ctx.is_squarefree(&c).unwrap() {
                    let h = eval.evaluate(std::slice::from_ref(&c), &one).unwrap();
                    let g = ctx.gauss_sum(&FFPoly::one(), &c, 1).unwrap();
                    assert!((h - g).norm() < 1e-9, "c = {c}: {h} vs {g}");
                }
            }
        }
    }

    #[test]
    fn a2_prime_power_base_case() {
        let ctx = FFContext::new(5, 2).unwrap();
        let eval = HEvaluator::new(&ctx, RootSystem::from_code("A2", 2).unwrap()).unwrap();
        let pi = poly(&[2, 1]);
        let local = ctx.local_context(&pi).unwrap();
        let expected = eval.table(&[0, 0]).unwrap().get(&Weight::new(&[1, 1])).eval(&local);
        let h = eval.evaluate(&[pi.clone(), pi], &[FFPoly::one(), FFPoly::one()]).unwrap();
        assert!((h - expected).norm() < 1e-12);
    }

    #[test]
    fn twist_reduction_at_a_prime() {
        // With m = π the block at π uses ℓ = 1 and no twist symbol.
        let ctx = FFContext::new(5, 2).unwrap();
        let eval = HEvaluator::new(&ctx, RootSystem::from_code("A1", 2).unwrap()).unwrap();
        let pi = poly(&[1, 1]);
        let local = ctx.local_context(&pi).unwrap();
        for k in 0..4u32 {
            let c = pi.pow(k, ctx.field());
            let expected = eval.table(&[1]).unwrap().get(&Weight::new(&[k as i32])).eval(&local);
            let h = eval.evaluate(&[c], std::slice::from_ref(&pi)).unwrap();
            assert!((h - expected).norm() < 1e-12, "k = {k}");
        }
    }

    #[test]
    fn a1_first_coefficient() {
        let ctx = FFContext::new(5, 2).unwrap();
        let eval = HEvaluator::new(&ctx, RootSystem::from_code("A1", 2).unwrap()).unwrap();
        let z = assemble_z(&eval, &[FFPoly::one()], 3).unwrap();
        assert_eq!(z.coeff(&[0]), Some(Complex64::new(1.0, 0.0)));
        assert!((z.coeff(&[1]).unwrap() - Complex64::new(5.0 * 5f64.sqrt(), 0.0)).norm() < 1e-9);
        assert_eq!(z.coeffs.len(), 4);
    }

    #[test]
    fn squarefree_oracle_agrees() {
        let cases = [("A2", 5, 2, 3), ("B2", 5, 2, 3), ("G2", 5, 2, 3), ("B2", 9, 4, 2), ("B2", 13, 3, 2), ("G2", 13, 3, 2)];
        for (code, q, n, bound) in cases {
            let ctx = FFContext::new(q, n).unwrap();
            let rs = RootSystem::from_code(code, n).unwrap();
            let eval = HEvaluator::new(&ctx, rs.clone()).unwrap();
            let one = [FFPoly::one(), FFPoly::one()];
            for d in degree_tuples(2, bound) {
                let ours = squarefree_partial_sum(&eval, &one, &d).unwrap();
                let oracle = squarefree_rank_two_oracle(&ctx, &rs, [d[0], d[1]]).unwrap();
                let scale = oracle.norm().max((q as f64).powi((d[0] + d[1]) as i32));
                assert!((ours - oracle).norm() < 1e-9 * scale, "{code} q={q} n={n} d={d:?}: {ours} vs {oracle}");
            }
        }
    }

    #[test]
    fn block_order_does_not_matter() {
        for (q, n, code) in [(5, 2, "A2"), (13, 3, "A2"), (13, 3, "A1")] {
            let ctx = FFContext::new(q, n).unwrap();
            let eval = HEvaluator::new(&ctx, RootSystem::from_code(code, n).unwrap()).unwrap();
            assert!(order_independence(&eval, 10, 3, 5).unwrap() < 1e-10);
        }
    }

    #[test]
    fn z_is_deterministic_and_bounded() {
        let ctx = FFContext::new(5, 2).unwrap();
        let eval = HEvaluator::new(&ctx, RootSystem::from_code("A2", 2).unwrap()).unwrap();
        let twist = [FFPoly::one(), FFPoly::one()];
        let a = assemble_z(&eval, &twist, 2).unwrap().to_json();
        let b = assemble_z(&eval, &twist, 2).unwrap().to_json();
        assert_eq!(a.to_string(), b.to_string());
        assert!(matches!(assemble_z(&eval, &twist, 7), Err(Error::BoundExceeded { .. })));
        let z0 = assemble_z(&eval, &twist, 0).unwrap();
        assert_eq!(z0.coeffs.len(), 1);
    }

    #[test]
    fn probe_degenerate_bound_matches() {
        let ctx = FFContext::new(5, 2).unwrap();
        let eval = HEvaluator::new(&ctx, RootSystem::from_code("A2", 2).unwrap()).unwrap();
        let report = self_similarity_probe(&eval, 0).unwrap();
        assert!(report.best.unwrap().matched);
    }
}
