//! The twisted action `f ↦ f|_ℓ w` of the Weyl group on rational functions.
//!
//! For `f ∈ Ã_β` and a simple reflection,
//! `(f|σ_i)(x) = (P_β(x_i) + Q_{σ_i•β}(x_i)) · f(σ_i x)`, and the action is
//! extended linearly over the grading by `Λ/Λ′`. Both local factors share the
//! denominator `1 − q^{m−1} x_i^m`, so the action on a numerator monomial is a
//! multiplication by a fixed kernel that depends on `β` only through
//! `μ_{ℓ,i}(β) mod n`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::laurent::{BinomialFactor, GradedRational, LaurentPoly};
use crate::rootsys::{residue, RootSystem, TwistParams, Weight, WeylElement};
use crate::scalars::{Scalar, ScalarContext};

/// Fixed parameters of the action: root datum, twist and coefficient ring.
pub struct ActionParams<C: ScalarContext> {
    rs: RootSystem,
    tp: TwistParams,
    ctx: C,
    simple: Vec<WeylElement>,
    /// `kernels[i][r]`: combined numerator of `P + Q` for `μ ≡ r (mod n)`.
    kernels: Vec<Vec<LaurentPoly<C::S>>>,
    denoms: Vec<BinomialFactor>,
}

/// `μ_{ℓ,i}(β) = d(σ_i•β − β) = l_i + 1 − ⟨β, α_i^∨⟩`.
pub fn mu(beta: &Weight, i: usize, tp: &TwistParams, rs: &RootSystem) -> i64 {
    tp.l(i) + 1 - rs.coroot_pairing(beta, i) as i64
}

impl<C: ScalarContext> ActionParams<C> {
    pub fn new(rs: RootSystem, tp: TwistParams, ctx: C) -> Result<Self> {
        if ctx.n() != rs.n() {
            return Err(Error::InvalidParameter(format!(
                "coefficient ring has n = {} but the root datum has n = {}",
                ctx.n(),
                rs.n()
            )));
        }
        if tp.ell.len() != rs.rank() {
            return Err(Error::InvalidParameter(format!(
                "twist has {} entries, rank is {}",
                tp.ell.len(),
                rs.rank()
            )));
        }
        let r = rs.rank();
        let simple = (0..r).map(|i| WeylElement::from_word(&rs, &[i as u8])).collect();
        let denoms = (0..r)
            .map(|i| {
                let m = rs.simple_m(i) as i32;
                BinomialFactor::new(m - 1, Weight::unit(i).scale(m))
            })
            .collect();
        let mut me = ActionParams {
            rs,
            tp,
            ctx,
            simple,
            kernels: Vec::new(),
            denoms,
        };
        me.kernels = (0..r)
            .map(|i| {
                (0..me.rs.n() as i64)
                    .map(|res| me.p_numer(res, i).plus(&me.q_numer(-res, i)))
                    .collect()
            })
            .collect();
        Ok(me)
    }

    pub fn rs(&self) -> &RootSystem {
        &self.rs
    }

    pub fn tp(&self) -> &TwistParams {
        &self.tp
    }

    pub fn ctx(&self) -> &C {
        &self.ctx
    }

    /// `1 − q^{m−1} x_i^m`, the shared denominator of the local factors.
    pub fn local_denominator(&self, i: usize) -> BinomialFactor {
        self.denoms[i]
    }

    fn x_i_power(&self, i: usize, e: i64, c: C::S) -> LaurentPoly<C::S> {
        LaurentPoly::monomial(self.rs.rank(), Weight::unit(i).scale(e as i32), c)
    }

    /// Numerator `(qx_i)^{l_i+1−(μ)_m}(1 − 1/q)` of `P` at `μ = mu_val`.
    fn p_numer(&self, mu_val: i64, i: usize) -> LaurentPoly<C::S> {
        let m = self.rs.simple_m(i) as i64;
        let a = self.tp.l(i) + 1 - residue(mu_val, m);
        let c = self.ctx.q_pow(a as i32).minus(&self.ctx.q_pow(a as i32 - 1));
        self.x_i_power(i, a, c)
    }

    /// Numerator `−γ(−∥α_i∥² μ)(qx_i)^{l_i+1−m}(1 − (qx_i)^m)` of `Q` at `μ = mu_val`.
    fn q_numer(&self, mu_val: i64, i: usize) -> LaurentPoly<C::S> {
        let m = self.rs.simple_m(i) as i64;
        let e = self.tp.l(i) + 1 - m;
        let g = self
            .ctx
            .gamma(-(self.rs.simple_len_sq(i) as i64) * mu_val)
            .negate();
        let low = self.x_i_power(i, e, g.times(&self.ctx.q_pow(e as i32)));
        let high = self.x_i_power(i, e + m, g.times(&self.ctx.q_pow((e + m) as i32)).negate());
        low.plus(&high)
    }

    /// `P_{β,ℓ,i}(x_i)`.
    pub fn p_factor(&self, beta: &Weight, i: usize) -> GradedRational<C::S> {
        GradedRational::new(
            self.p_numer(mu(beta, i, &self.tp, &self.rs), i),
            [self.denoms[i]],
            &self.ctx,
        )
    }

    /// `Q_{β,ℓ,i}(x_i)`.
    pub fn q_factor(&self, beta: &Weight, i: usize) -> GradedRational<C::S> {
        GradedRational::new(
            self.q_numer(mu(beta, i, &self.tp, &self.rs), i),
            [self.denoms[i]],
            &self.ctx,
        )
    }

    /// The `(P, Q)` contributions of `x^β | σ_i` kept apart:
    /// `P_β(x_i) f(σ_i x)` and `Q_{σ_i•β}(x_i) f(σ_i x)`.
    pub fn split_sigma_monomial(
        &self,
        beta: &Weight,
        i: usize,
    ) -> (GradedRational<C::S>, GradedRational<C::S>) {
        let sub = LaurentPoly::monomial(self.rs.rank(), *beta, C::S::one())
            .substitute_weyl(&self.simple[i], &self.ctx);
        let moved = self.rs.dot_reflect(i, beta, &self.tp);
        let p = self.p_factor(beta, i);
        let q = self.q_factor(&moved, i);
        (
            GradedRational::new(p.numer.times(&sub), p.denom, &self.ctx),
            GradedRational::new(q.numer.times(&sub), q.denom, &self.ctx),
        )
    }

    /// `f |_ℓ σ_i`.
    pub fn apply_sigma(&self, f: &GradedRational<C::S>, i: usize) -> GradedRational<C::S> {
        let rank = self.rs.rank();
        let n = self.rs.n() as i64;
        let sigma = &self.simple[i];
        // Group the substituted numerator by μ mod n, then multiply each group by its kernel.
        let mut groups: Vec<LaurentPoly<C::S>> = vec![LaurentPoly::zero(rank); n as usize];
        for (beta, c) in f.numer.iter() {
            let r = residue(mu(beta, i, &self.tp, &self.rs), n) as usize;
            let img = sigma.apply_inverse(beta);
            let shift = img.height() - beta.height();
            let coef = if shift == 0 {
                c.clone()
            } else {
                c.times(&self.ctx.q_pow(shift))
            };
            groups[r].add_term(img, coef);
        }
        let mut numer = LaurentPoly::zero(rank);
        for (r, g) in groups.iter().enumerate() {
            if !g.is_zero() {
                numer.add_assign(&g.times(&self.kernels[i][r]));
            }
        }
        let denom = f
            .denom
            .iter()
            .map(|d| d.substitute(sigma))
            .chain(std::iter::once(self.denoms[i]));
        GradedRational::new(numer, denom, &self.ctx)
    }

    /// `(…(f|σ_{w_1})|σ_{w_2})…`, left to right.
    pub fn apply_word(&self, f: &GradedRational<C::S>, word: &[u8]) -> GradedRational<C::S> {
        word.iter()
            .fold(f.clone(), |acc, &i| self.apply_sigma(&acc, i as usize))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationReport {
    pub i: usize,
    pub j: usize,
    pub order: u32,
    pub samples: usize,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Vec<i32>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationSuiteReport {
    pub system: String,
    pub n: u32,
    pub ell: Vec<u32>,
    pub seed: u64,
    pub relations: Vec<RelationReport>,
}

impl RelationSuiteReport {
    pub fn all_pass(&self) -> bool {
        self.relations.iter().all(|r| r.status == "pass")
    }
}

/// Random monomial exponents in `[−3, 3]^r`, reproducible from `seed`.
pub fn sample_exponents(rank: usize, count: usize, seed: u64) -> Vec<Weight> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let coords: Vec<i32> = (0..rank).map(|_| rng.random_range(-3..=3)).collect();
            Weight::new(&coords)
        })
        .collect()
}

/// `x^β | word == x^β`, checked by cross-multiplication.
pub fn word_fixes_monomial<C: ScalarContext>(
    params: &ActionParams<C>,
    beta: &Weight,
    word: &[u8],
) -> bool
where
    C::S: Scalar,
{
    let rank = params.rs().rank();
    let f = GradedRational::from_poly(LaurentPoly::monomial(rank, *beta, C::S::one()));
    let g = params.apply_word(&f, word);
    g.equals(&f, params.ctx())
}

/// Checks `(σ_iσ_j)^{r(i,j)} = 1` for every ordered pair of generators on seeded random monomials.
pub fn verify_relations<C: ScalarContext>(
    params: &ActionParams<C>,
    sample_count: usize,
    seed: u64,
) -> RelationSuiteReport {
    let rs = params.rs();
    let r = rs.rank();
    let samples = sample_exponents(r, sample_count, seed);
    let pairs: Vec<(usize, usize)> = (0..r).flat_map(|i| (0..r).map(move |j| (i, j))).collect();
    let relations = pairs
        .par_iter()
        .map(|&(i, j)| {
            let order = rs.coxeter_order(i, j);
            let word: Vec<u8> = if i == j {
                vec![i as u8, i as u8]
            } else {
                (0..order).flat_map(|_| [i as u8, j as u8]).collect()
            };
            let failure = samples
                .par_iter()
                .find_first(|beta| !word_fixes_monomial(params, beta, &word));
            RelationReport {
                i,
                j,
                order,
                samples: samples.len(),
                status: if failure.is_none() { "pass" } else { "fail" }.to_string(),
                counterexample: failure.map(|b| b.coords(r).to_vec()),
            }
        })
        .collect();
    RelationSuiteReport {
        system: rs.code().to_string(),
        n: rs.n(),
        ell: params.tp().ell.clone(),
        seed,
        relations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::GradingLattice;
    use crate::rootsys::{reduced_words, weyl_enumerate};
    use crate::scalars::{GammaScalar, NumericGammaContext, SymbolicContext};
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn params(code: &str, n: u32, ell: &[u32]) -> ActionParams<SymbolicContext> {
        let rs = RootSystem::from_code(code, n).unwrap();
        ActionParams::new(rs, TwistParams::new(ell.to_vec()), SymbolicContext::new(n).unwrap()).unwrap()
    }

    fn x(rank: usize, e: &[i32]) -> GradedRational<GammaScalar> {
        GradedRational::from_poly(LaurentPoly::monomial(rank, Weight::new(e), GammaScalar::one()))
    }

    #[test]
    fn mu_examples() {
        let rs = RootSystem::from_code("A2", 2).unwrap();
        let z = TwistParams::zero(2);
        assert_eq!(mu(&Weight::ZERO, 0, &z, &rs), 1);
        assert_eq!(mu(&Weight::unit(0), 0, &z, &rs), -1);
        assert_eq!(mu(&Weight::ZERO, 0, &TwistParams::new(vec![2, 0]), &rs), 3);
        let tp = TwistParams::new(vec![1, 2]);
        for beta in [Weight::new(&[2, -1]), Weight::new(&[0, 3]), Weight::new(&[-2, -2])] {
            for i in 0..2 {
                let moved = rs.dot_reflect(i, &beta, &tp);
                assert_eq!(mu(&beta, i, &tp, &rs), -mu(&moved, i, &tp, &rs));
            }
        }
    }

    #[test]
    fn p_factor_examples() {
        let p = params("A2", 2, &[0, 0]);
        let f = p.p_factor(&Weight::ZERO, 0);
        // (qx)^{1 − (1)_2}(1 − 1/q): exponent 0
        let expect = GammaScalar::one().minus(&GammaScalar::q_pow(-1));
        assert_eq!(f.numer, LaurentPoly::monomial(2, Weight::ZERO, expect));
        assert_eq!(f.denom, vec![BinomialFactor::new(1, Weight::new(&[2, 0]))]);
        // n = 1: exponent l_i + 1
        let p1 = params("A2", 1, &[2, 0]);
        assert_eq!(p1.p_factor(&Weight::new(&[3, -1]), 0).numer.support(), vec![Weight::new(&[3, 0])]);
        // μ ≡ 0 mod m: exponent l_i + 1
        let beta = Weight::new(&[1, 2]); // μ_1 = 1 − (2 − 2) = 1; use β with μ even
        let beta2 = Weight::new(&[0, 1]); // μ_1 = 1 + 1 = 2
        assert_eq!(mu(&beta, 0, p.tp(), p.rs()), 1);
        assert_eq!(mu(&beta2, 0, p.tp(), p.rs()), 2);
        assert_eq!(p.p_factor(&beta2, 0).numer.support(), vec![Weight::new(&[1, 0])]);
    }

    #[test]
    fn q_factor_examples() {
        let p = params("A2", 2, &[0, 0]);
        let f = p.q_factor(&Weight::unit(0), 0);
        let c = GammaScalar::gamma(1, 2).negate();
        let expect = LaurentPoly::from_terms(
            2,
            [
                (Weight::new(&[-1, 0]), c.times(&GammaScalar::q_pow(-1))),
                (Weight::new(&[1, 0]), c.times(&GammaScalar::q_pow(1)).negate()),
            ],
        );
        assert_eq!(f.numer, expect);
        // n = 1: −γ(0) = 1, (qx)^{l}(1 − qx)/(1 − x)
        let p1 = params("A2", 1, &[1, 0]);
        let g = p1.q_factor(&Weight::new(&[2, 5]), 0);
        let expect = LaurentPoly::from_terms(
            2,
            [
                (Weight::new(&[1, 0]), GammaScalar::q_pow(1)),
                (Weight::new(&[2, 0]), GammaScalar::q_pow(2).negate()),
            ],
        );
        assert_eq!(g.numer, expect);
        assert_eq!(g.denom, vec![BinomialFactor::new(0, Weight::unit(0))]);
    }

    #[test]
    fn action_on_one_reads_off_local_factors() {
        let p = params("B2", 2, &[1, 0]);
        for i in 0..2 {
            let got = p.apply_sigma(&GradedRational::one(2), i);
            let moved = p.rs().dot_reflect(i, &Weight::ZERO, p.tp());
            let expect = p.p_factor(&Weight::ZERO, i).plus(&p.q_factor(&moved, i), p.ctx());
            assert!(got.equals(&expect, p.ctx()));
        }
    }

    #[test]
    fn involution_on_random_monomials() {
        for code in ["A2", "B2", "G2", "A1xA1"] {
            for n in 1..=3 {
                for ell in [[0, 0], [1, 0], [2, 1]] {
                    let p = params(code, n, &ell);
                    for beta in sample_exponents(2, 6, 1) {
                        for i in 0..2u8 {
                            assert!(word_fixes_monomial(&p, &beta, &[i, i]), "{code} n={n} {ell:?} {beta:?}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn braid_relation_a2() {
        let p = params("A2", 3, &[1, 1]);
        for beta in sample_exponents(2, 20, 3) {
            let f = x(2, beta.coords(2));
            let a = p.apply_word(&f, &[0, 1, 0]);
            let b = p.apply_word(&f, &[1, 0, 1]);
            assert!(a.equals(&b, p.ctx()));
        }
    }

    #[test]
    fn relation_suite_examples() {
        for (code, n, ell) in [("A2", 3, [1, 1]), ("B2", 2, [0, 0]), ("G2", 2, [0, 0])] {
            let rep = verify_relations(&params(code, n, &ell), 20, 7);
            assert!(rep.all_pass(), "{code} {rep:?}");
            assert_eq!(rep.relations.len(), 4);
        }
    }

    #[test]
    fn broken_kernel_is_caught() {
        // Tampering with a γ value must break the involution somewhere.
        let rs = RootSystem::from_code("A2", 3).unwrap();
        let mut vals = NumericGammaContext::new(7, 3).unwrap().gamma_values().to_vec();
        vals[1] *= Complex64::new(1.5, 0.0);
        let ctx = NumericGammaContext::from_values(7.0, 3, vals).unwrap();
        let p = ActionParams::new(rs, TwistParams::zero(2), ctx).unwrap();
        let broken = sample_exponents(2, 20, 5).iter().any(|beta| {
            let f = GradedRational::from_poly(LaurentPoly::monomial(2, *beta, Complex64::new(1.0, 0.0)));
            let g = p.apply_word(&f, &[0, 0]);
            let lhs = g.numer;
            let rhs = f.over(&g.denom, p.ctx());
            !lhs.approx_eq(&rhs, 1e-9)
        });
        assert!(broken);
    }

    #[test]
    fn numeric_mode_satisfies_relations() {
        let rs = RootSystem::from_code("B2", 2).unwrap();
        let ctx = NumericGammaContext::new(5, 2).unwrap();
        let p = ActionParams::new(rs, TwistParams::new(vec![1, 0]), ctx).unwrap();
        for beta in sample_exponents(2, 10, 9) {
            let f = GradedRational::from_poly(LaurentPoly::monomial(2, beta, Complex64::new(1.0, 0.0)));
            let g = p.apply_word(&f, &[0, 1, 0, 1, 0, 1, 0, 1]);
            assert!(g.numer.approx_eq(&f.over(&g.denom, p.ctx()), 1e-9));
        }
    }

    #[test]
    fn word_independence_rank_two_exhaustive() {
        for code in ["A2", "B2", "G2"] {
            for n in [2, 3] {
                let p = params(code, n, &[1, 0]);
                let g = weyl_enumerate(p.rs(), 100).unwrap();
                let beta = Weight::new(&[1, -2]);
                for w in g.elements() {
                    let words = reduced_words(w, p.rs());
                    let f = x(2, beta.coords(2));
                    let first = p.apply_word(&f, &words[0]);
                    for word in &words[1..] {
                        assert!(p.apply_word(&f, word).equals(&first, p.ctx()), "{code} n={n} {word:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn homogeneity_of_local_terms() {
        for (code, n) in [("A2", 2), ("B2", 2), ("G2", 3), ("A2", 3)] {
            let p = params(code, n, &[1, 2]);
            let lat = GradingLattice::new(p.rs());
            for beta in sample_exponents(2, 10, 4) {
                for i in 0..2 {
                    let (pt, qt) = p.split_sigma_monomial(&beta, i);
                    let moved = p.rs().dot_reflect(i, &beta, p.tp());
                    for (e, _) in pt.numer.iter() {
                        assert_eq!(lat.class_of(e), lat.class_of(&beta));
                    }
                    for (e, _) in qt.numer.iter() {
                        assert_eq!(lat.class_of(e), lat.class_of(&moved));
                    }
                    assert!(pt.denom.iter().chain(&qt.denom).all(|d| lat.contains(&d.vec)));
                }
            }
        }
    }

    proptest! {
        #[test]
        fn local_factors_depend_only_on_grade(
            b in prop::collection::vec(-4i32..=4, 2),
            t in prop::collection::vec(-2i32..=2, 3),
            n in 1u32..=4,
            i in 0usize..2,
        ) {
            let p = params("G2", n, &[1, 0]);
            let rs = p.rs();
            // Random element of Λ′ from the generators m(α)α.
            let lat_elt = (0..3).fold(Weight::ZERO, |acc, k| {
                acc + rs.pos_roots()[k].scale(rs.root_m(k) as i32 * t[k])
            });
            let beta = Weight::new(&b);
            prop_assert_eq!(p.p_factor(&beta, i), p.p_factor(&(beta + lat_elt), i));
            prop_assert_eq!(p.q_factor(&beta, i), p.q_factor(&(beta + lat_elt), i));
        }
    }
}
