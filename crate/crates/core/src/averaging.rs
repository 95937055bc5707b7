//! Averaging over the Weyl group: the cocycle `j`, the invariant rational
//! function `h(x; ℓ) = Δ(x)⁻¹ Σ_w j(w, x)(1|_ℓ w)(x)`, its numerator
//! `N = h·D`, and an independent Weyl-character oracle for `n = 1`.

use rayon::prelude::*;

use crate::cg_action::ActionParams;
use crate::error::{Error, Result};
use crate::laurent::{multiset_minus, BinomialFactor, GradedRational, LaurentPoly};
use crate::rootsys::{inversion_indices, weyl_enumerate, RootSystem, TwistParams, Weight, WeylElement};
use crate::scalars::{Coeff, GammaScalar, Scalar, ScalarContext, SymbolicContext};

/// Factors `1 − q^{m(α)d(α)} x^{m(α)α}` of `Δ`, one per positive root.
pub fn delta_factors(rs: &RootSystem) -> Vec<BinomialFactor> {
    root_factors(rs, 0)
}

/// Factors `1 − q^{m(α)d(α)−1} x^{m(α)α}` of `D`.
pub fn d_factors(rs: &RootSystem) -> Vec<BinomialFactor> {
    root_factors(rs, -1)
}

fn root_factors(rs: &RootSystem, shift: i32) -> Vec<BinomialFactor> {
    let mut v: Vec<BinomialFactor> = rs
        .pos_roots()
        .iter()
        .enumerate()
        .map(|(k, a)| {
            let m = rs.root_m(k) as i32;
            BinomialFactor::new(m * a.height() + shift, a.scale(m))
        })
        .collect();
    v.sort();
    v
}

/// Expands `Π (1 − q^e x^v)`.
pub fn expand_product<C: ScalarContext>(
    factors: &[BinomialFactor],
    rank: usize,
    ctx: &C,
) -> LaurentPoly<C::S> {
    factors
        .iter()
        .fold(LaurentPoly::one(rank), |acc, f| acc.mul_binomial(f, ctx))
}

/// `j(w, x) = sgn(w) q^{d(β)} x^β` with `β = Σ_{α∈Φ(w)} m(α)α`.
pub fn j_cocycle<C: ScalarContext>(w: &WeylElement, rs: &RootSystem, ctx: &C) -> LaurentPoly<C::S> {
    let beta = inversion_indices(w, rs)
        .into_iter()
        .fold(Weight::ZERO, |acc, k| acc + rs.pos_roots()[k].scale(rs.root_m(k) as i32));
    let c = ctx.q_pow(beta.height()).times(&C::S::from_int(w.sign() as i64));
    LaurentPoly::monomial(rs.rank(), beta, c)
}

/// Everything the averaging construction produces.
#[derive(Debug, Clone)]
pub struct AveragingResult<S: Scalar> {
    /// `h = N / D`.
    pub h: GradedRational<S>,
    pub n_poly: LaurentPoly<S>,
    pub delta: LaurentPoly<S>,
    pub dpoly: LaurentPoly<S>,
    pub d_factors: Vec<BinomialFactor>,
    pub delta_factors: Vec<BinomialFactor>,
    /// `(reduced word of w, j(w,x)(1|w)(x))` in canonical Weyl order.
    pub per_w_terms: Vec<(Vec<u8>, GradedRational<S>)>,
}

/// Builds `h`, then `N = h·D`, certifying every division on the way.
pub fn average_h<C: ScalarContext>(params: &ActionParams<C>, budget: u64) -> Result<AveragingResult<C::S>> {
    let rs = params.rs();
    let ctx = params.ctx();
    let rank = rs.rank();
    let group = weyl_enumerate(rs, budget)?;

    // 1|w by breadth-first extension along canonical words: 1|w = (1|parent)|σ_last.
    let mut images: Vec<Option<GradedRational<C::S>>> = vec![None; group.len()];
    images[0] = Some(GradedRational::one(rank));
    let mut level: Vec<usize> = vec![0];
    while !level.is_empty() {
        let next: Vec<usize> = (0..group.len())
            .filter(|&k| {
                group
                    .parent(k)
                    .is_some_and(|(p, _)| level.binary_search(&p).is_ok())
            })
            .collect();
        let computed: Vec<(usize, GradedRational<C::S>)> = next
            .par_iter()
            .map(|&k| {
                let (p, last) = group.parent(k).unwrap();
                let parent = images[p].as_ref().unwrap();
                (k, params.apply_sigma(parent, last as usize))
            })
            .collect();
        for (k, img) in computed {
            images[k] = Some(img);
        }
        level = next;
    }

    let per_w_terms: Vec<(Vec<u8>, GradedRational<C::S>)> = group
        .elements()
        .par_iter()
        .zip(images.into_par_iter())
        .map(|(w, img)| {
            let img = img.expect("every element is reached from the identity");
            let j = j_cocycle(w, rs, ctx);
            let term = GradedRational {
                numer: img.numer.times(&j),
                denom: img.denom,
            };
            (w.word().to_vec(), term)
        })
        .collect();

    let lcd = per_w_terms
        .iter()
        .fold(Vec::new(), |acc, (_, t)| GradedRational::<C::S>::lcd(&acc, &t.denom));
    let cleared: Vec<LaurentPoly<C::S>> = per_w_terms
        .par_iter()
        .map(|(_, t)| t.over(&lcd, ctx))
        .collect();
    let total = cleared.iter().fold(LaurentPoly::zero(rank), |mut acc, p| {
        acc.add_assign(p);
        acc
    });

    // N = total · D / (lcd · Δ)
    let dfs = d_factors(rs);
    let deltas = delta_factors(rs);
    let mut numer = multiset_minus(&dfs, &lcd)
        .iter()
        .fold(total, |acc, f| acc.mul_binomial(f, ctx));
    for f in multiset_minus(&lcd, &dfs) {
        numer = numer.exact_divide(&f, ctx)?;
    }
    for f in &deltas {
        numer = numer.exact_divide(f, ctx)?;
    }

    Ok(AveragingResult {
        h: GradedRational {
            numer: numer.clone(),
            denom: dfs.clone(),
        },
        n_poly: numer,
        delta: expand_product(&deltas, rank, ctx),
        dpoly: expand_product(&dfs, rank, ctx),
        d_factors: dfs,
        delta_factors: deltas,
        per_w_terms,
    })
}

impl<S: Scalar> AveragingResult<S> {
    /// `N·Δ = (Σ_w terms)·D` after clearing denominators.
    pub fn check_defining_identity(&self, ctx: &impl ScalarContext<S = S>) -> bool {
        let rank = self.n_poly.rank();
        let lcd = self
            .per_w_terms
            .iter()
            .fold(Vec::new(), |acc, (_, t)| GradedRational::<S>::lcd(&acc, &t.denom));
        let sum = self
            .per_w_terms
            .iter()
            .fold(LaurentPoly::zero(rank), |mut acc, (_, t)| {
                acc.add_assign(&t.over(&lcd, ctx));
                acc
            });
        let lhs = lcd
            .iter()
            .fold(self.n_poly.times(&self.delta), |acc, f| acc.mul_binomial(f, ctx));
        lhs.same_as(&sum.times(&self.dpoly))
    }

    /// Every summand is a power series at the origin: oriented denominators `⪰ 0`
    /// (constant term 1) and numerator support `⪰ 0`.
    pub fn per_w_regular(&self) -> Vec<(Vec<u8>, bool)> {
        self.per_w_terms
            .iter()
            .map(|(w, t)| {
                let ok = t.numer.is_polynomial() && t.denom.iter().all(|d| d.vec.is_nonneg());
                (w.clone(), ok)
            })
            .collect()
    }
}

/// `h|σ_i = h` for every generator, as cross-multiplied identities.
pub fn verify_invariance<C: ScalarContext>(
    params: &ActionParams<C>,
    result: &AveragingResult<C::S>,
) -> Vec<bool> {
    (0..params.rs().rank())
        .into_par_iter()
        .map(|i| params.apply_sigma(&result.h, i).equals(&result.h, params.ctx()))
        .collect()
}

/// `h(0, …, x_i, …, 0)` for `ℓ = 0`, read off from `N` and `D`.
pub fn axis_specialization<S: Scalar>(
    result: &AveragingResult<S>,
    i: usize,
    tp: &TwistParams,
) -> Result<GradedRational<S>> {
    if !tp.is_zero() {
        return Err(Error::InvalidParameter(
            "axis specialization is only defined for the untwisted case ℓ = 0".into(),
        ));
    }
    let on_axis = |v: &Weight| (0..crate::rootsys::MAX_RANK).all(|k| k == i || v.get(k) == 0);
    let numer = result.n_poly.filter(on_axis);
    // Factors involving another variable specialize to 1.
    let denom = result.d_factors.iter().filter(|f| on_axis(&f.vec)).copied().collect();
    Ok(GradedRational { numer, denom })
}

/// The closed form `(1 + γ(∥α_i∥²) q x_i) / (1 − q^{m−1} x_i^m)`.
pub fn axis_closed_form<C: ScalarContext>(rs: &RootSystem, i: usize, ctx: &C) -> GradedRational<C::S> {
    let m = rs.simple_m(i) as i32;
    let numer = LaurentPoly::from_terms(
        rs.rank(),
        [
            (Weight::ZERO, C::S::one()),
            (
                Weight::unit(i),
                ctx.gamma(rs.simple_len_sq(i) as i64).times(&ctx.q_pow(1)),
            ),
        ],
    );
    GradedRational::new(numer, [BinomialFactor::new(m - 1, Weight::unit(i).scale(m))], ctx)
}

/// The axis value obtained by carrying the two surviving terms `w ∈ {1, σ_i}`
/// through with the true exponent `l_i + 1 − (1)_m` of `P`. It agrees with
/// [`axis_closed_form`] when `m ≥ 2`; when `m = 1` the local factors collapse
/// and the specialization is `1`.
pub fn axis_value_from_local_factors<C: ScalarContext>(rs: &RootSystem, i: usize, ctx: &C) -> GradedRational<C::S> {
    if rs.simple_m(i) == 1 {
        GradedRational::one(rs.rank())
    } else {
        axis_closed_form(rs, i, ctx)
    }
}

/// `Σ_w j(w, x)` and the expanded `Δ(x)`.
pub fn sum_j_and_delta<C: ScalarContext>(
    rs: &RootSystem,
    ctx: &C,
    budget: u64,
) -> Result<(LaurentPoly<C::S>, LaurentPoly<C::S>)> {
    let group = weyl_enumerate(rs, budget)?;
    let sum = group
        .elements()
        .iter()
        .fold(LaurentPoly::zero(rs.rank()), |mut acc, w| {
            acc.add_assign(&j_cocycle(w, rs, ctx));
            acc
        });
    Ok((sum, expand_product(&delta_factors(rs), rs.rank(), ctx)))
}

/// Hard check of `Σ_w j(w, x) = Δ(x)`.
pub fn sum_j_equals_delta(rs: &RootSystem, budget: u64) -> Result<()> {
    let ctx = SymbolicContext::new(rs.n())?;
    let (sum, delta) = sum_j_and_delta(rs, &ctx, budget)?;
    if sum == delta {
        Ok(())
    } else {
        Err(Error::TheoremViolation(format!(
            "Σ_w j(w,x) ≠ Δ(x) for {} with n = {}: difference {}",
            rs.code(),
            rs.n(),
            sum.minus(&delta)
        )))
    }
}

/// Character of the irreducible representation with the given highest weight
/// (fundamental-weight coordinates), written as `Σ_μ mult(μ) y^{λ−μ}` in the
/// root lattice. Computed from the Weyl character formula by exact division.
pub fn weyl_character(highest: &[u32], rs: &RootSystem, budget: u64) -> Result<LaurentPoly<GammaScalar>> {
    let r = rs.rank();
    if highest.len() != r {
        return Err(Error::InvalidParameter(format!(
            "highest weight has {} coordinates, rank is {r}",
            highest.len()
        )));
    }
    let ctx = SymbolicContext::new(1)?;
    let group = weyl_enumerate(rs, budget)?;
    let shifted: Vec<i64> = highest.iter().map(|&h| h as i64 + 1).collect();
    let mut alternant = LaurentPoly::zero(r);
    for w in group.elements() {
        // Track (λ+ρ) − w(λ+ρ) in root coordinates while reflecting in ω-coordinates.
        let mut nu = shifted.clone();
        let mut offset = Weight::ZERO;
        for &i in w.word().iter().rev() {
            let i = i as usize;
            let k = nu[i];
            for (j, v) in nu.iter_mut().enumerate() {
                // α_i = Σ_j ⟨α_i, α_j^∨⟩ ω_j
                *v -= k * rs.cartan(i, j) as i64;
            }
            offset.set(i, offset.get(i) + k as i32);
        }
        alternant.add_term(offset, GammaScalar::from_int(w.sign() as i64));
    }
    let mut chi = alternant;
    for a in rs.pos_roots() {
        chi = chi.exact_divide(&BinomialFactor::new(0, *a), &ctx)?;
    }
    Ok(chi)
}

/// Dimension of `V_λ` by the Weyl dimension formula `Π_{α>0} ⟨λ+ρ, α^∨⟩ / ⟨ρ, α^∨⟩`.
pub fn weyl_dimension(highest: &[u32], rs: &RootSystem) -> Coeff {
    let r = rs.rank();
    rs.pos_roots()
        .iter()
        .enumerate()
        .map(|(k, a)| {
            // α^∨ = Σ a_j (∥α_j∥²/∥α∥²) α_j^∨ and ⟨ω_i, α_j^∨⟩ = δ_ij
            let len = rs.root_len_sq(k) as i128;
            let pair = |shift: i128| -> i128 {
                (0..r)
                    .map(|j| {
                        a.get(j) as i128 * rs.simple_len_sq(j) as i128 * (highest[j] as i128 * shift + 1)
                    })
                    .sum::<i128>()
            };
            Coeff::new(pair(1), len) / Coeff::new(pair(0), len)
        })
        .product()
}

/// Report of the character oracle: the polynomial and `dim V_θ` for `θ = Σ (l_i+1) ω_i`.
#[derive(Debug, Clone)]
pub struct CharacterOracle {
    pub character: LaurentPoly<GammaScalar>,
    pub dimension: i128,
}

/// `χ_θ` and `dim V_θ` with `θ = Σ (l_i + 1) ω_i`; only meaningful for `n = 1`.
pub fn weyl_character_oracle(tp: &TwistParams, rs: &RootSystem, budget: u64) -> Result<CharacterOracle> {
    if rs.n() != 1 {
        return Err(Error::InvalidParameter(format!(
            "the character oracle applies to n = 1 only (got n = {})",
            rs.n()
        )));
    }
    let theta: Vec<u32> = tp.ell.iter().map(|&l| l + 1).collect();
    let character = weyl_character(&theta, rs, budget)?;
    let dimension = character_dimension(&character);
    Ok(CharacterOracle {
        character,
        dimension,
    })
}

/// Sum of coefficients of an integer-valued character.
pub fn character_dimension(chi: &LaurentPoly<GammaScalar>) -> i128 {
    chi.iter()
        .map(|(_, c)| c.at_q_one().expect("characters have plain integer coefficients"))
        .sum::<Coeff>()
        .to_integer()
}

/// `p(1, …, 1)` at `q = 1`; `None` if some `γ` appears.
pub fn value_at_one_q_one(p: &LaurentPoly<GammaScalar>) -> Option<Coeff> {
    p.iter().map(|(_, c)| c.at_q_one()).sum()
}

/// Substitutes `y = q x` in a character: `y^β ↦ q^{d(β)} x^β`.
pub fn character_in_qx(chi: &LaurentPoly<GammaScalar>) -> LaurentPoly<GammaScalar> {
    LaurentPoly::from_terms(
        chi.rank(),
        chi.iter()
            .map(|(e, c)| (*e, c.times(&GammaScalar::q_pow(e.height())))),
    )
}
