//! Prime-power coefficient tables `H(ϖ^β; ϖ^ℓ)`, their one-variable slices in a
//! simple direction, and the local functional equation those slices satisfy.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::averaging::average_h;
use crate::cg_action::ActionParams;
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::rootsys::{residue, RootSystem, TwistParams, Weight};
use crate::scalars::{Scalar, ScalarContext};

/// The coefficient table of `N(x; ℓ)`.
#[derive(Debug, Clone)]
pub struct HTable<S: Scalar> {
    pub ell: TwistParams,
    pub coeffs: LaurentPoly<S>,
}

impl<S: Scalar> HTable<S> {
    pub fn from_poly(ell: TwistParams, coeffs: LaurentPoly<S>) -> Self {
        HTable { ell, coeffs }
    }

    pub fn rank(&self) -> usize {
        self.coeffs.rank()
    }

    /// `H(ϖ^{β_1}, …, ϖ^{β_r}; ϖ^ℓ)`; zero off the support.
    pub fn get(&self, beta: &Weight) -> S {
        self.coeffs.coeff(beta)
    }

    pub fn to_json(&self, n: u32) -> Value {
        json!({ "ell": self.ell.ell, "coeffs": self.coeffs.to_json(n) })
    }

    /// One `β,coefficient` row per support point, exponents separated by spaces.
    pub fn to_csv(&self) -> String {
        let rank = self.rank();
        let mut out = String::from("beta,coefficient\n");
        for (beta, c) in self.coeffs.sorted_terms() {
            let coords: Vec<String> = beta.coords(rank).iter().map(i32::to_string).collect();
            let _ = writeln!(out, "{},\"{}\"", coords.join(" "), c);
        }
        out
    }
}

/// Builds the table from the averaging construction.
pub fn h_table<C: ScalarContext>(params: &ActionParams<C>, budget: u64) -> Result<HTable<C::S>> {
    let res = average_h(params, budget)?;
    Ok(HTable::from_poly(params.tp().clone(), res.n_poly))
}

/// Exponents of `σ_i • β` where `β = Σ k_j α_j`.
pub fn k_prime(k: &Weight, i: usize, tp: &TwistParams, rs: &RootSystem) -> Weight {
    rs.dot_reflect(i, k, tp)
}

/// `Σ_{j≥0} H(…, ϖ^{jm+(k_i)_m}, …) x^{jm+(k_i)_m}` with the other exponents frozen at `k`.
#[derive(Debug, Clone)]
pub struct LocalSlice<S: Scalar> {
    pub i: usize,
    pub k: Weight,
    pub m: u32,
    /// One-variable polynomial in `x = x_i`.
    pub poly: LaurentPoly<S>,
}

pub fn local_slice<S: Scalar>(table: &HTable<S>, k: &Weight, i: usize, m: u32) -> LocalSlice<S> {
    let rank = table.rank();
    let r = residue(k.get(i) as i64, m as i64);
    let terms = table
        .coeffs
        .iter()
        .filter(|(beta, _)| {
            (0..rank).all(|j| j == i || beta.get(j) == k.get(j))
                && residue(beta.get(i) as i64, m as i64) == r
        })
        .map(|(beta, c)| (Weight::unit(0).scale(beta.get(i)), c.clone()));
    LocalSlice {
        i,
        k: *k,
        m,
        poly: LaurentPoly::from_terms(1, terms),
    }
}

/// `f = A(x) / (1 − q^{m−1} x^m)` in one variable.
#[derive(Debug, Clone)]
pub struct LocalF<S: Scalar> {
    pub i: usize,
    pub k: Weight,
    pub kprime: Weight,
    pub m: u32,
    /// Whether the reflected slice contributes, i.e. `k_i ≢ k′_i (mod m)`.
    pub reflected_term: bool,
    pub numer: LaurentPoly<S>,
}

impl<S: Scalar> LocalF<S> {
    pub fn is_zero(&self) -> bool {
        self.numer.is_zero()
    }
}

/// Combines the slice at `k` with the slice at `k′ = σ_i • k`, the latter weighted by
/// `q·γ(‖α_i‖²(k_i − k′_i)) · q^{(k_i−k′_i−1)_m} x^{(k_i−k′_i)_m}`.
pub fn local_f<C: ScalarContext>(table: &HTable<C::S>, k: &Weight, i: usize, params: &ActionParams<C>) -> LocalF<C::S> {
    let rs = params.rs();
    let ctx = params.ctx();
    let m = rs.simple_m(i);
    let mi = m as i64;
    let kp = k_prime(k, i, params.tp(), rs);
    let diff = (k.get(i) - kp.get(i)) as i64;
    let own = local_slice(table, k, i, m).poly;
    let reflected_term = residue(diff, mi) != 0;
    let numer = if reflected_term {
        let other = local_slice(table, &kp, i, m).poly;
        let t = rs.simple_len_sq(i) as i64 * diff;
        let c = ctx
            .q_pow(1)
            .times(&ctx.gamma(t))
            .times(&ctx.q_pow(residue(diff - 1, mi) as i32));
        let shift = Weight::unit(0).scale(residue(diff, mi) as i32);
        let subtracted = other.mul_monomial(&shift, &c);
        // Numerically the two slices can cancel down to rounding noise.
        let scale = own.max_magnitude().max(subtracted.max_magnitude());
        own.minus(&subtracted).without_negligible(scale)
    } else {
        own
    };
    LocalF {
        i,
        k: *k,
        kprime: kp,
        m,
        reflected_term,
        numer,
    }
}

/// `x ↦ 1/(q²x)` on a one-variable Laurent polynomial.
pub fn invert_variable<C: ScalarContext>(p: &LaurentPoly<C::S>, ctx: &C) -> LaurentPoly<C::S> {
    LaurentPoly::from_terms(
        1,
        p.iter()
            .map(|(e, c)| (e.scale(-1), c.times(&ctx.q_pow(-2 * e.get(0))))),
    )
}

/// Outcome of one functional-equation check, under both exponent rules.
#[derive(Debug, Clone, Serialize)]
pub struct LocalFeReport {
    pub i: usize,
    pub k: Vec<i32>,
    pub kprime: Vec<i32>,
    pub m: u32,
    pub reflected_term: bool,
    /// `f` vanished, so there was nothing to check.
    pub trivial: bool,
    /// `l_i + 1 − (k′_i − k_i)_m`, or `l_i + 1 − m` when that residue is zero.
    pub exponent: i64,
    pub pass: bool,
    pub residual: Option<String>,
    /// `Σ_{j≠i} c(j,i) k_j`, picked up from `σ_i` acting on the frozen variables.
    pub off_axis_shift: i64,
    pub shifted_exponent: i64,
    pub shifted_pass: bool,
}

/// The exponent `e` in `f(x) = (qx)^e f(1/(q²x))`, read off from `k_i` and `k′_i` alone.
pub fn fe_exponent(k: &Weight, kprime: &Weight, i: usize, m: u32, tp: &TwistParams) -> i64 {
    let r = residue((kprime.get(i) - k.get(i)) as i64, m as i64);
    tp.l(i) + 1 - if r == 0 { m as i64 } else { r }
}

/// `Σ_{j≠i} c(j,i) k_j`.
pub fn off_axis_shift(k: &Weight, i: usize, rs: &RootSystem) -> i64 {
    (0..rs.rank())
        .filter(|&j| j != i)
        .map(|j| rs.cartan(j, i) as i64 * k.get(j) as i64)
        .sum()
}

/// Checks `A(x)(1 − q^{−m−1}x^{−m}) = (qx)^e A(1/(q²x))(1 − q^{m−1}x^m)`, which is
/// `f(x) = (qx)^e f(1/(q²x))` with the denominators cleared, both for `e` from
/// [`fe_exponent`] and for `e − Σ_{j≠i} c(j,i)k_j`.
pub fn verify_local_fe<C: ScalarContext>(
    table: &HTable<C::S>,
    k: &Weight,
    i: usize,
    params: &ActionParams<C>,
) -> LocalFeReport {
    let rs = params.rs();
    let rank = rs.rank();
    let f = local_f(table, k, i, params);
    let exponent = fe_exponent(k, &f.kprime, i, f.m, params.tp());
    let shift = off_axis_shift(k, i, rs);
    let mut report = LocalFeReport {
        i,
        k: k.coords(rank).to_vec(),
        kprime: f.kprime.coords(rank).to_vec(),
        m: f.m,
        reflected_term: f.reflected_term,
        trivial: f.is_zero(),
        exponent,
        pass: true,
        residual: None,
        off_axis_shift: shift,
        shifted_exponent: exponent - shift,
        shifted_pass: true,
    };
    if report.trivial {
        return report;
    }
    let (lhs, rhs) = fe_sides(&f, exponent, params.ctx());
    if !lhs.same_as(&rhs) {
        report.pass = false;
        report.residual = Some(lhs.minus(&rhs).to_string());
    }
    let (lhs, rhs) = fe_sides(&f, exponent - shift, params.ctx());
    report.shifted_pass = lhs.same_as(&rhs);
    report
}

/// Left side minus right side of the cleared functional equation.
pub fn fe_residual<C: ScalarContext>(f: &LocalF<C::S>, e: i64, ctx: &C) -> LaurentPoly<C::S> {
    let (lhs, rhs) = fe_sides(f, e, ctx);
    lhs.minus(&rhs)
}

fn fe_sides<C: ScalarContext>(f: &LocalF<C::S>, e: i64, ctx: &C) -> (LaurentPoly<C::S>, LaurentPoly<C::S>) {
    let m = f.m as i32;
    let x = |a: i32| Weight::unit(0).scale(a);
    let one = C::S::one();
    let lhs_den = LaurentPoly::from_terms(1, [(x(0), one.clone()), (x(-m), ctx.q_pow(-m - 1).negate())]);
    let rhs_den = LaurentPoly::from_terms(1, [(x(0), one), (x(m), ctx.q_pow(m - 1).negate())]);
    let lhs = f.numer.times(&lhs_den);
    let rhs = invert_variable(&f.numer, ctx)
        .times(&rhs_den)
        .mul_monomial(&x(e as i32), &ctx.q_pow(e as i32));
    (lhs, rhs)
}

/// Every `k ∈ [0, 2m_i)^r` paired with every direction `i`.
pub fn sweep_points(rs: &RootSystem) -> Vec<(Weight, usize)> {
    let rank = rs.rank();
    let bound = (0..rank).map(|i| 2 * rs.simple_m(i) as i32).max().unwrap_or(1);
    let mut points = Vec::new();
    let mut k = vec![0i32; rank];
    loop {
        for i in 0..rank {
            if k.iter().all(|&c| c < bound) && k[i] < 2 * rs.simple_m(i) as i32 {
                points.push((Weight::new(&k), i));
            }
        }
        let mut pos = 0;
        loop {
            if pos == rank {
                return points;
            }
            k[pos] += 1;
            if k[pos] < bound {
                break;
            }
            k[pos] = 0;
            pos += 1;
        }
    }
}

/// Runs [`verify_local_fe`] over [`sweep_points`] in parallel.
pub fn verify_local_fe_sweep<C: ScalarContext>(table: &HTable<C::S>, params: &ActionParams<C>) -> Vec<LocalFeReport> {
    sweep_points(params.rs())
        .par_iter()
        .map(|(k, i)| verify_local_fe(table, k, *i, params))
        .collect()
}

/// Sums the slices in direction `i` over every residue and every frozen off-axis vector
/// found in the support, re-embedding each slice into rank `r`.
pub fn reassemble_from_slices<S: Scalar>(table: &HTable<S>, i: usize, m: u32) -> LaurentPoly<S> {
    let rank = table.rank();
    let mut bases: Vec<Weight> = table
        .coeffs
        .iter()
        .map(|(beta, _)| {
            let mut b = *beta;
            b.set(i, residue(beta.get(i) as i64, m as i64) as i32);
            b
        })
        .collect();
    bases.sort();
    bases.dedup();
    bases.iter().fold(LaurentPoly::zero(rank), |mut acc, base| {
        let slice = local_slice(table, base, i, m);
        for (e, c) in slice.poly.iter() {
            let mut beta = *base;
            beta.set(i, e.get(0));
            acc.add_term(beta, c.clone());
        }
        acc
    })
}

/// Rejects a report list containing a failure under the chosen exponent rule.
pub fn require_all_pass(reports: &[LocalFeReport], shifted: bool) -> Result<()> {
    match reports.iter().find(|r| if shifted { !r.shifted_pass } else { !r.pass }) {
        None => Ok(()),
        Some(r) => Err(Error::TheoremViolation(format!(
            "local functional equation fails at k = {:?}, i = {}: residual {}",
            r.k,
            r.i,
            r.residual.as_deref().unwrap_or("?")
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::DEFAULT_WEYL_BUDGET;
    use crate::scalars::{GammaScalar, NumericGammaContext, SymbolicContext};
    use num_complex::Complex64;

    fn params(code: &str, n: u32, ell: &[u32]) -> ActionParams<SymbolicContext> {
        let rs = RootSystem::from_code(code, n).unwrap();
        ActionParams::new(rs, TwistParams::new(ell.to_vec()), SymbolicContext::new(n).unwrap()).unwrap()
    }

    fn table(p: &ActionParams<SymbolicContext>) -> HTable<GammaScalar> {
        h_table(p, DEFAULT_WEYL_BUDGET).unwrap()
    }

    fn x(a: i32) -> Weight {
        Weight::unit(0).scale(a)
    }

    #[test]
    fn a1_table_and_slices() {
        let p = params("A1", 2, &[0]);
        let t = table(&p);
        assert_eq!(t.get(&Weight::ZERO), GammaScalar::one());
        let qg = GammaScalar::q_pow(1).times(&GammaScalar::gamma(1, 2));
        assert_eq!(t.get(&Weight::new(&[1])), qg);
        assert_eq!(t.coeffs.len(), 2);

        let even = local_slice(&t, &Weight::new(&[0]), 0, 2);
        assert_eq!(even.poly, LaurentPoly::one(1));
        let odd = local_slice(&t, &Weight::new(&[1]), 0, 2);
        assert_eq!(odd.poly, LaurentPoly::monomial(1, x(1), qg));

        let empty = HTable::from_poly(TwistParams::zero(1), LaurentPoly::<GammaScalar>::zero(1));
        assert!(local_slice(&empty, &Weight::ZERO, 0, 2).poly.is_zero());
    }

    #[test]
    fn constant_term_is_one() {
        for (code, n, ell) in [("A2", 2, vec![1, 0]), ("B2", 3, vec![0, 0]), ("G2", 2, vec![0, 1])] {
            let t = table(&params(code, n, &ell));
            assert_eq!(t.get(&Weight::ZERO), GammaScalar::one(), "{code}");
        }
    }

    #[test]
    fn k_prime_examples() {
        let rs = RootSystem::from_code("A2", 1).unwrap();
        let tp = TwistParams::zero(2);
        assert_eq!(k_prime(&Weight::new(&[0, 0]), 0, &tp, &rs), Weight::new(&[1, 0]));
        assert_eq!(k_prime(&Weight::new(&[1, 1]), 0, &tp, &rs), Weight::new(&[1, 1]));
        for code in ["A2", "B2", "G2", "A3"] {
            let rs = RootSystem::from_code(code, 2).unwrap();
            let tp = TwistParams::new((0..rs.rank() as u32).collect());
            for k in crate::cg_action::sample_exponents(rs.rank(), 20, 3) {
                for i in 0..rs.rank() {
                    assert_eq!(k_prime(&k_prime(&k, i, &tp, &rs), i, &tp, &rs), k);
                }
            }
        }
    }

    #[test]
    fn a1_local_f_examples() {
        let p = params("A1", 2, &[0]);
        let t = table(&p);
        let f = local_f(&t, &Weight::new(&[0]), 0, &p);
        assert_eq!(f.kprime, Weight::new(&[1]));
        assert!(f.reflected_term);
        // (1 − q²γ(1)²x²) with γ(1)² = 1/q
        let expected = LaurentPoly::from_terms(1, [(x(0), GammaScalar::one()), (x(2), GammaScalar::q_pow(1).negate())]);
        assert_eq!(f.numer, expected);
        let rep = verify_local_fe(&t, &Weight::new(&[0]), 0, &p);
        assert!(rep.pass && !rep.trivial);
        assert_eq!(rep.exponent, 0);

        let p = params("A1", 2, &[1]);
        let t = table(&p);
        let f = local_f(&t, &Weight::new(&[0]), 0, &p);
        assert_eq!(f.kprime, Weight::new(&[2]));
        assert!(!f.reflected_term);
        assert_eq!(f.numer, local_slice(&t, &Weight::new(&[0]), 0, 2).poly);
    }

    #[test]
    fn rank_two_sweeps() {
        for (code, n, ell) in [
            ("A2", 2, vec![0, 0]),
            ("A2", 3, vec![1, 0]),
            ("B2", 2, vec![0, 0]),
            ("B2", 3, vec![0, 1]),
        ] {
            let p = params(code, n, &ell);
            let t = table(&p);
            let reports = verify_local_fe_sweep(&t, &p);
            require_all_pass(&reports, true).unwrap_or_else(|e| panic!("{code} n={n} ℓ={ell:?}: {e}"));
            assert!(reports.iter().any(|r| r.reflected_term && !r.trivial));
            assert!(reports.iter().any(|r| !r.reflected_term && !r.trivial));
            // Without the off-axis shift the identity holds exactly on the points where it vanishes.
            for r in reports.iter().filter(|r| !r.trivial) {
                assert_eq!(r.pass, r.off_axis_shift == 0, "{code} n={n} ℓ={ell:?} {r:?}");
            }
        }
    }

    #[test]
    fn tampered_table_is_caught() {
        let p = params("A2", 2, &[0, 0]);
        let mut t = table(&p);
        t.coeffs.add_term(Weight::new(&[1, 0]), GammaScalar::one());
        let reports = verify_local_fe_sweep(&t, &p);
        assert!(reports.iter().any(|r| !r.shifted_pass));
    }

    #[test]
    fn slices_reassemble_table() {
        for (code, n) in [("A2", 2), ("B2", 2), ("G2", 3)] {
            let p = params(code, n, &[1, 0]);
            let t = table(&p);
            for i in 0..2 {
                let m = p.rs().simple_m(i);
                assert_eq!(reassemble_from_slices(&t, i, m), t.coeffs, "{code} {i}");
            }
        }
    }

    #[test]
    fn symbolic_and_numeric_agree() {
        let n = 2;
        let sym = params("A2", n, &[0, 0]);
        let ctx = NumericGammaContext::new(5, n).unwrap();
        let num = ActionParams::new(sym.rs().clone(), sym.tp().clone(), ctx.clone()).unwrap();
        let st = table(&sym);
        let nt = h_table(&num, DEFAULT_WEYL_BUDGET).unwrap();
        assert!(st.coeffs.map_coeffs(|s| s.eval(&ctx)).approx_eq(&nt.coeffs, 1e-9));
        for (k, i) in sweep_points(sym.rs()) {
            let fs = local_f(&st, &k, i, &sym).numer.map_coeffs(|s| s.eval(&ctx));
            let fnum = local_f(&nt, &k, i, &num).numer;
            assert!(fs.approx_eq(&fnum, 1e-9), "k={k:?} i={i}");
            let kp = k_prime(&k, i, sym.tp(), sym.rs());
            let e = fe_exponent(&k, &kp, i, 2, sym.tp()) - off_axis_shift(&k, i, sym.rs());
            let res = fe_residual(&local_f(&nt, &k, i, &num), e, &ctx);
            assert!(res.iter().all(|(_, c)| c.norm() < 1e-9 * 25.0), "k={k:?} i={i}");
        }
        let zero = Complex64::new(0.0, 0.0);
        assert_eq!(nt.get(&Weight::new(&[9, 9])), zero);
    }

    #[test]
    fn csv_and_json_exports() {
        let t = table(&params("A1", 2, &[0]));
        let csv = t.to_csv();
        assert_eq!(csv.lines().count(), 3);
        assert!(csv.lines().nth(1).unwrap().starts_with("0,"));
        assert_eq!(t.to_json(2)["coeffs"].as_array().unwrap().len(), 2);
    }
}
