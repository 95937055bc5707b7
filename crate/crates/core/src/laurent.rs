//! Sparse Laurent polynomials over the root lattice and the fragment of their
//! fraction field with binomial denominators `Π (1 − q^e x^v)`.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use rustc_hash::FxHashMap;
use serde_json::{json, Value};

use crate::error::Error;
use crate::rootsys::{RootSystem, Weight, WeylElement};
use crate::scalars::{Scalar, ScalarContext};

/// `Σ c_β x^β` with `β` in the root lattice. Zero coefficients are never stored.
#[derive(Clone, PartialEq)]
pub struct LaurentPoly<S> {
    rank: usize,
    terms: FxHashMap<Weight, S>,
}

impl<S: Scalar> LaurentPoly<S> {
    pub fn zero(rank: usize) -> Self {
        LaurentPoly {
            rank,
            terms: FxHashMap::default(),
        }
    }

    pub fn one(rank: usize) -> Self {
        Self::monomial(rank, Weight::ZERO, S::one())
    }

    pub fn monomial(rank: usize, exp: Weight, c: S) -> Self {
        let mut p = Self::zero(rank);
        p.add_term(exp, c);
        p
    }

    pub fn from_terms(rank: usize, terms: impl IntoIterator<Item = (Weight, S)>) -> Self {
        let mut p = Self::zero(rank);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, exp: Weight, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::hash_map::Entry::Occupied(mut e) => {
                let v = e.get().plus(&c);
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
            std::collections::hash_map::Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn coeff(&self, exp: &Weight) -> S {
        self.terms.get(exp).cloned().unwrap_or_else(S::zero)
    }

    pub fn get(&self, exp: &Weight) -> Option<&S> {
        self.terms.get(exp)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Weight, &S)> {
        self.terms.iter()
    }

    /// Terms sorted by exponent, for deterministic output.
    pub fn sorted_terms(&self) -> Vec<(Weight, S)> {
        let mut v: Vec<(Weight, S)> = self.terms.iter().map(|(e, c)| (*e, c.clone())).collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v
    }

    pub fn support(&self) -> Vec<Weight> {
        let mut v: Vec<Weight> = self.terms.keys().copied().collect();
        v.sort();
        v
    }

    pub fn plus(&self, other: &Self) -> Self {
        let (mut big, small) = if self.len() >= other.len() {
            (self.clone(), other)
        } else {
            (other.clone(), self)
        };
        for (e, c) in &small.terms {
            big.add_term(*e, c.clone());
        }
        big
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (e, c) in &other.terms {
            self.add_term(*e, c.clone());
        }
    }

    pub fn negate(&self) -> Self {
        self.map_coeffs(|c| c.negate())
    }

    pub fn minus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c.negate());
        }
        out
    }

    pub fn scale(&self, s: &S) -> Self {
        if s.is_zero() {
            return Self::zero(self.rank);
        }
        let mut out = Self::zero(self.rank);
        for (e, c) in &self.terms {
            out.add_term(*e, c.times(s));
        }
        out
    }

    /// Multiplies by the monomial `c · x^shift`.
    pub fn mul_monomial(&self, shift: &Weight, c: &S) -> Self {
        let mut out = Self::zero(self.rank);
        out.terms.reserve(self.terms.len());
        for (e, d) in &self.terms {
            let v = d.times(c);
            if !v.is_zero() {
                out.terms.insert(*e + *shift, v);
            }
        }
        out
    }

    pub fn times(&self, other: &Self) -> Self {
        if other.len() == 1 {
            let (e, c) = other.terms.iter().next().unwrap();
            return self.mul_monomial(e, c);
        }
        if self.len() == 1 {
            let (e, c) = self.terms.iter().next().unwrap();
            return other.mul_monomial(e, c);
        }
        let mut out = Self::zero(self.rank);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(*e1 + *e2, c1.times(c2));
            }
        }
        out
    }

    pub fn map_coeffs<T: Scalar>(&self, f: impl Fn(&S) -> T) -> LaurentPoly<T> {
        let mut out = LaurentPoly::zero(self.rank);
        for (e, c) in &self.terms {
            out.add_term(*e, f(c));
        }
        out
    }

    /// Keeps the terms whose exponent satisfies `keep`.
    pub fn filter(&self, keep: impl Fn(&Weight) -> bool) -> Self {
        LaurentPoly {
            rank: self.rank,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| keep(e))
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
        }
    }

    /// Every exponent is `⪰ 0`.
    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(Weight::is_nonneg)
    }

    /// Multiplies by the binomial `1 − c x^v`.
    pub fn mul_binomial(&self, b: &BinomialFactor, ctx: &impl ScalarContext<S = S>) -> Self {
        let shifted = self.mul_monomial(&b.vec, &ctx.q_pow(b.qexp));
        self.minus(&shifted)
    }

    /// `f(wx)`, monomial by monomial: `x^β ↦ q^{d(w⁻¹β − β)} x^{w⁻¹β}`.
    pub fn substitute_weyl(&self, w: &WeylElement, ctx: &impl ScalarContext<S = S>) -> Self {
        let mut out = Self::zero(self.rank);
        out.terms.reserve(self.terms.len());
        for (e, c) in &self.terms {
            let img = w.apply_inverse(e);
            let shift = img.height() - e.height();
            let v = if shift == 0 {
                c.clone()
            } else {
                c.times(&ctx.q_pow(shift))
            };
            out.terms.insert(img, v);
        }
        out
    }

    /// Exact quotient by `1 − c x^v`, or the obstruction.
    ///
    /// Terms are grouped into chains `β + ℤv`; along each chain the quotient is
    /// forced by `g_t = f_t + c g_{t−1}`, and division is exact iff the value
    /// that would spill past the top of every chain is zero (for floating-point
    /// coefficients: negligible against the largest value met along the chains).
    pub fn exact_divide(
        &self,
        b: &BinomialFactor,
        ctx: &impl ScalarContext<S = S>,
    ) -> Result<Self, NotDivisible<S>> {
        let p = (0..self.rank)
            .find(|&k| b.vec.get(k) != 0)
            .expect("binomial factors have a nonzero exponent vector");
        let vp = b.vec.get(p);
        let c = ctx.q_pow(b.qexp);
        let mut chains: FxHashMap<Weight, Vec<(i32, S)>> = FxHashMap::default();
        for (e, coef) in &self.terms {
            let t = e.get(p).div_euclid(vp);
            chains
                .entry(*e - b.vec.scale(t))
                .or_default()
                .push((t, coef.clone()));
        }
        let mut quotient = Self::zero(self.rank);
        let mut remainder = Self::zero(self.rank);
        let mut scale = 0f64;
        for (key, mut chain) in chains {
            chain.sort_by_key(|(t, _)| *t);
            let t_min = chain[0].0;
            let t_max = chain[chain.len() - 1].0;
            let mut g = S::zero();
            let mut idx = 0;
            for t in t_min..=t_max {
                let f_t = if chain[idx].0 == t {
                    idx += 1;
                    chain[idx - 1].1.clone()
                } else {
                    S::zero()
                };
                scale = scale.max(f_t.magnitude());
                g = f_t.plus(&g.times(&c));
                scale = scale.max(g.magnitude());
                if t < t_max {
                    quotient.add_term(key + b.vec.scale(t), g.clone());
                }
            }
            remainder.add_term(key + b.vec.scale(t_max), g);
        }
        if remainder.iter().all(|(_, r)| r.negligible_at(scale)) {
            Ok(quotient)
        } else {
            Err(NotDivisible {
                divisor: *b,
                remainder,
            })
        }
    }

    /// Equality up to the rounding noise of the coefficient ring, judged against
    /// the largest coefficient of either side; exact rings compare exactly.
    pub fn same_as(&self, other: &Self) -> bool {
        let scale = self.max_magnitude().max(other.max_magnitude());
        self.minus(other).iter().all(|(_, c)| c.negligible_at(scale))
    }

    /// Largest coefficient size; always `0` for exact rings.
    pub fn max_magnitude(&self) -> f64 {
        self.terms.values().map(Scalar::magnitude).fold(0.0, f64::max)
    }

    /// Drops coefficients that are rounding noise relative to `scale`.
    pub fn without_negligible(&self, scale: f64) -> Self {
        Self::from_terms(
            self.rank,
            self.terms.iter().filter(|(_, c)| !c.negligible_at(scale)).map(|(e, c)| (*e, c.clone())),
        )
    }

    pub fn to_json(&self, n: u32) -> Value {
        Value::Array(
            self.sorted_terms()
                .into_iter()
                .map(|(e, c)| json!({ "exponent": e.coords(self.rank), "scalar": c.to_json(n) }))
                .collect(),
        )
    }
}

impl LaurentPoly<Complex64> {
    /// Coefficientwise comparison relative to the largest coefficient present.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let scale = self
            .terms
            .values()
            .chain(other.terms.values())
            .map(|c| c.norm())
            .fold(1.0, f64::max);
        let diff = self.minus(other);
        diff.terms.values().all(|c| c.norm() <= tol * scale)
    }
}

impl<S: Scalar> fmt::Display for LaurentPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.sorted_terms().iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if e.is_zero() {
                write!(f, "({c})")?;
            } else {
                write!(f, "({c})·x^{}", e.display(self.rank))?;
            }
        }
        Ok(())
    }
}

impl<S: Scalar> fmt::Debug for LaurentPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `1 − q^{qexp} x^{vec}` with `vec ≠ 0`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinomialFactor {
    pub qexp: i32,
    pub vec: Weight,
}

impl BinomialFactor {
    pub fn new(qexp: i32, vec: Weight) -> Self {
        assert!(!vec.is_zero(), "binomial factor needs a nonzero exponent");
        BinomialFactor { qexp, vec }
    }

    /// The same factor as a two-term polynomial.
    pub fn as_poly<S: Scalar>(&self, rank: usize, ctx: &impl ScalarContext<S = S>) -> LaurentPoly<S> {
        let mut p = LaurentPoly::one(rank);
        p.add_term(self.vec, ctx.q_pow(self.qexp).negate());
        p
    }

    /// Image under `x ↦ wx`, before orientation.
    pub fn substitute(&self, w: &WeylElement) -> Self {
        let img = w.apply_inverse(&self.vec);
        BinomialFactor {
            qexp: self.qexp + img.height() - self.vec.height(),
            vec: img,
        }
    }

    /// Rewrites `1 − c x^v` with lexicographically negative `v` as
    /// `−c x^v · (1 − c⁻¹ x^{−v})`. Returns the oriented factor together with
    /// the monomial `(qexp, exp, sign)` the numerator must be multiplied by.
    pub fn orient(&self) -> (Self, Option<(i32, Weight)>) {
        if self.vec.is_lex_positive() {
            (*self, None)
        } else {
            // 1/(1 − c x^v) = −c⁻¹ x^{−v} / (1 − c⁻¹ x^{−v})
            (
                BinomialFactor {
                    qexp: -self.qexp,
                    vec: -self.vec,
                },
                Some((-self.qexp, -self.vec)),
            )
        }
    }

    pub fn display(&self, rank: usize) -> String {
        format!("(1 - q^{}·x^{})", self.qexp, self.vec.display(rank))
    }
}

impl fmt::Debug for BinomialFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(1 - q^{}·x^{:?})", self.qexp, self.vec)
    }
}

/// Exact division failed; carries the nonzero remainder.
#[derive(Clone)]
pub struct NotDivisible<S> {
    pub divisor: BinomialFactor,
    pub remainder: LaurentPoly<S>,
}

impl<S: Scalar> fmt::Debug for NotDivisible<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "remainder {} after dividing by {:?}", self.remainder, self.divisor)
    }
}

impl<S: Scalar> From<NotDivisible<S>> for Error {
    fn from(e: NotDivisible<S>) -> Self {
        Error::NonzeroRemainder {
            divisor: e.divisor.display(e.remainder.rank()),
            terms: e.remainder.len(),
            remainder: e.remainder.to_string(),
        }
    }
}

/// Removes one copy of each factor of `b` from `a` (multiset difference).
pub fn multiset_minus(a: &[BinomialFactor], b: &[BinomialFactor]) -> Vec<BinomialFactor> {
    let mut counts: BTreeMap<BinomialFactor, i64> = BTreeMap::new();
    for f in a {
        *counts.entry(*f).or_default() += 1;
    }
    for f in b {
        *counts.entry(*f).or_default() -= 1;
    }
    counts
        .into_iter()
        .flat_map(|(f, k)| std::iter::repeat_n(f, k.max(0) as usize))
        .collect()
}

/// `numer / Π denom`, with every denominator oriented lexicographically positive.
#[derive(Clone, PartialEq)]
pub struct GradedRational<S> {
    pub numer: LaurentPoly<S>,
    /// Sorted multiset of factors.
    pub denom: Vec<BinomialFactor>,
}

impl<S: Scalar> GradedRational<S> {
    pub fn from_poly(numer: LaurentPoly<S>) -> Self {
        GradedRational {
            numer,
            denom: Vec::new(),
        }
    }

    pub fn zero(rank: usize) -> Self {
        Self::from_poly(LaurentPoly::zero(rank))
    }

    pub fn one(rank: usize) -> Self {
        Self::from_poly(LaurentPoly::one(rank))
    }

    /// Builds `numer / Π denom`, orienting factors and absorbing the resulting monomials.
    pub fn new(
        numer: LaurentPoly<S>,
        denom: impl IntoIterator<Item = BinomialFactor>,
        ctx: &impl ScalarContext<S = S>,
    ) -> Self {
        let mut r = Self::from_poly(numer);
        for f in denom {
            r.push_denominator(f, ctx);
        }
        r.denom.sort();
        r
    }

    fn push_denominator(&mut self, f: BinomialFactor, ctx: &impl ScalarContext<S = S>) {
        let (oriented, adjust) = f.orient();
        if let Some((qe, v)) = adjust {
            self.numer = self.numer.mul_monomial(&v, &ctx.q_pow(qe).negate());
        }
        self.denom.push(oriented);
    }

    pub fn rank(&self) -> usize {
        self.numer.rank()
    }

    pub fn is_zero(&self) -> bool {
        self.numer.is_zero()
    }

    /// Rewrites over the denominator `target`, which must contain `self.denom`.
    pub fn over(&self, target: &[BinomialFactor], ctx: &impl ScalarContext<S = S>) -> LaurentPoly<S> {
        let missing = multiset_minus(target, &self.denom);
        debug_assert_eq!(
            multiset_minus(&self.denom, target).len(),
            0,
            "target denominator must contain the current one"
        );
        missing
            .iter()
            .fold(self.numer.clone(), |acc, f| acc.mul_binomial(f, ctx))
    }

    /// Least common denominator: multiset union.
    pub fn lcd(a: &[BinomialFactor], b: &[BinomialFactor]) -> Vec<BinomialFactor> {
        let mut out = a.to_vec();
        out.extend(multiset_minus(b, a));
        out.sort();
        out
    }

    pub fn plus(&self, other: &Self, ctx: &impl ScalarContext<S = S>) -> Self {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        let denom = Self::lcd(&self.denom, &other.denom);
        let numer = self.over(&denom, ctx).plus(&other.over(&denom, ctx));
        GradedRational { numer, denom }
    }

    pub fn times(&self, other: &Self) -> Self {
        let mut denom = self.denom.clone();
        denom.extend_from_slice(&other.denom);
        denom.sort();
        GradedRational {
            numer: self.numer.times(&other.numer),
            denom,
        }
    }

    pub fn scale(&self, s: &S) -> Self {
        GradedRational {
            numer: self.numer.scale(s),
            denom: self.denom.clone(),
        }
    }

    /// `f(wx)` with denominators re-oriented.
    pub fn substitute_weyl(&self, w: &WeylElement, ctx: &impl ScalarContext<S = S>) -> Self {
        Self::new(
            self.numer.substitute_weyl(w, ctx),
            self.denom.iter().map(|f| f.substitute(w)),
            ctx,
        )
    }

    /// Cancels every denominator factor that divides the numerator exactly.
    pub fn cancel(&self, ctx: &impl ScalarContext<S = S>) -> Self {
        let mut numer = self.numer.clone();
        let mut denom = Vec::new();
        for f in &self.denom {
            match numer.exact_divide(f, ctx) {
                Ok(q) => numer = q,
                Err(_) => denom.push(*f),
            }
        }
        GradedRational { numer, denom }
    }

    /// `self == other` as rational functions, by cross-multiplication.
    pub fn equals(&self, other: &Self, ctx: &impl ScalarContext<S = S>) -> bool {
        let denom = Self::lcd(&self.denom, &other.denom);
        self.over(&denom, ctx).same_as(&other.over(&denom, ctx))
    }

    pub fn to_json(&self, n: u32) -> Value {
        let r = self.rank();
        json!({
            "numerator": self.numer.to_json(n),
            "denominator": self
                .denom
                .iter()
                .map(|f| json!({ "qexp": f.qexp, "vec": f.vec.coords(r) }))
                .collect::<Vec<_>>(),
        })
    }
}

impl<S: Scalar> fmt::Display for GradedRational<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.numer)?;
        if !self.denom.is_empty() {
            let r = self.rank();
            let ds: Vec<String> = self.denom.iter().map(|d| d.display(r)).collect();
            write!(f, " / {}", ds.join(""))?;
        }
        Ok(())
    }
}

impl<S: Scalar> fmt::Debug for GradedRational<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// The quotient `Λ/Λ′`, where `Λ′` is spanned by `m(α)α` over all roots.
#[derive(Debug, Clone)]
pub struct GradingLattice {
    rank: usize,
    /// Upper-triangular basis of `Λ′` with positive pivots on the diagonal.
    basis: Vec<Weight>,
}

impl GradingLattice {
    pub fn new(rs: &RootSystem) -> Self {
        let r = rs.rank();
        let mut rows: Vec<Vec<i64>> = (0..rs.pos_roots().len())
            .map(|k| {
                let m = rs.root_m(k) as i64;
                rs.pos_roots()[k].coords(r).iter().map(|&c| c as i64 * m).collect()
            })
            .collect();
        let mut basis = Vec::with_capacity(r);
        for col in 0..r {
            // Euclidean elimination on column `col` among the remaining rows.
            loop {
                rows.retain(|row| row.iter().any(|&c| c != 0));
                let nonzero: Vec<usize> = (0..rows.len()).filter(|&i| rows[i][col] != 0).collect();
                if nonzero.len() <= 1 {
                    break;
                }
                let piv = *nonzero.iter().min_by_key(|&&i| rows[i][col].abs()).unwrap();
                for &i in &nonzero {
                    if i != piv {
                        let t = rows[i][col].div_euclid(rows[piv][col]);
                        let pr = rows[piv].clone();
                        for (a, b) in rows[i].iter_mut().zip(pr) {
                            *a -= t * b;
                        }
                    }
                }
            }
            let piv = rows
                .iter()
                .position(|row| row[col] != 0)
                .expect("Λ′ has full rank");
            let mut row = rows.swap_remove(piv);
            if row[col] < 0 {
                row.iter_mut().for_each(|c| *c = -*c);
            }
            basis.push(Weight::new(&row.iter().map(|&c| c as i32).collect::<Vec<_>>()));
        }
        GradingLattice { rank: r, basis }
    }

    /// Diagonal of the triangular basis; their product is `|Λ/Λ′|`.
    pub fn pivots(&self) -> Vec<i32> {
        (0..self.rank).map(|k| self.basis[k].get(k)).collect()
    }

    /// Canonical representative of `β + Λ′`, with `0 ≤ coord_k < pivot_k`.
    pub fn class_of(&self, beta: &Weight) -> Weight {
        let mut b = *beta;
        for (k, row) in self.basis.iter().enumerate() {
            let t = b.get(k).div_euclid(row.get(k));
            b -= row.scale(t);
        }
        b
    }

    pub fn contains(&self, beta: &Weight) -> bool {
        self.class_of(beta).is_zero()
    }

    /// Splits `f` by class in `Λ/Λ′`.
    pub fn decompose<S: Scalar>(&self, f: &LaurentPoly<S>) -> BTreeMap<Weight, LaurentPoly<S>> {
        let mut parts: BTreeMap<Weight, LaurentPoly<S>> = BTreeMap::new();
        for (e, c) in f.iter() {
            parts
                .entry(self.class_of(e))
                .or_insert_with(|| LaurentPoly::zero(f.rank()))
                .add_term(*e, c.clone());
        }
        parts
    }
}
