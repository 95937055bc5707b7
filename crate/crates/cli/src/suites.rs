//! The checks behind `wmds verify`.

use serde::Serialize;
use serde_json::{json, Value};
use wmds_core::averaging::{
    axis_closed_form, axis_specialization, axis_value_from_local_factors, sum_j_equals_delta, verify_invariance,
};
use wmds_core::global_ff::{gauss_identity_suite, order_independence, self_similarity_probe, squarefree_partial_sum};
use wmds_core::global_ff::{degree_tuples, squarefree_rank_two_oracle};
use wmds_core::local_series::verify_local_fe_sweep;
use wmds_core::{
    average_h, h_table, j_cocycle, verify_relations, weyl_enumerate, ActionParams, FFContext, FFPoly, HEvaluator,
    NumericGammaContext, ScalarContext, SymbolicContext,
};

use crate::config::{RunConfig, ScalarMode};
use crate::error::CliError;

/// Largest tolerated deviation in the numeric function-field checks.
pub const NUMERIC_TOL: f64 = 1e-9;
pub const ORDER_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, clap::ValueEnum)]
pub enum Suite {
    Relations,
    Invariance,
    Polynomiality,
    Axis,
    LocalFe,
    Cocycle,
    Sumj,
    Gauss,
    Multiplicativity,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Relations => "relations",
            Suite::Invariance => "invariance",
            Suite::Polynomiality => "polynomiality",
            Suite::Axis => "axis",
            Suite::LocalFe => "local-fe",
            Suite::Cocycle => "cocycle",
            Suite::Sumj => "sumj",
            Suite::Gauss => "gauss",
            Suite::Multiplicativity => "multiplicativity",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteOutcome {
    pub suite: &'static str,
    pub pass: bool,
    pub details: Value,
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub samples: Option<usize>,
    pub probe_degree: u32,
}

pub fn run_suite(suite: Suite, cfg: &RunConfig, opts: &VerifyOptions) -> Result<SuiteOutcome, CliError> {
    let (pass, details) = match suite {
        Suite::Gauss => gauss(cfg, opts)?,
        Suite::Multiplicativity => multiplicativity(cfg, opts)?,
        Suite::Sumj => {
            let rs = cfg.system()?;
            match sum_j_equals_delta(rs, cfg.budgets.max_weyl_order) {
                Ok(()) => (true, json!({ "identity": "sum over W of j(w) equals Delta" })),
                Err(e) => (false, json!({ "error": e.to_string() })),
            }
        }
        _ => {
            let rs = cfg.system()?.clone();
            match cfg.mode {
                ScalarMode::Symbolic => {
                    let ctx = SymbolicContext::new(cfg.n)?;
                    algebraic(suite, &ActionParams::new(rs, cfg.ell(), ctx)?, cfg, opts)?
                }
                ScalarMode::Numeric { q } => {
                    let ctx = NumericGammaContext::new(q, cfg.n)?;
                    algebraic(suite, &ActionParams::new(rs, cfg.ell(), ctx)?, cfg, opts)?
                }
            }
        }
    };
    Ok(SuiteOutcome {
        suite: suite.name(),
        pass,
        details,
    })
}

fn algebraic<C: ScalarContext>(
    suite: Suite,
    p: &ActionParams<C>,
    cfg: &RunConfig,
    opts: &VerifyOptions,
) -> Result<(bool, Value), CliError> {
    let budget = cfg.budgets.max_weyl_order;
    Ok(match suite {
        Suite::Relations => {
            let report = verify_relations(p, opts.samples.unwrap_or(20), cfg.seed.unwrap_or_default());
            (report.all_pass(), serde_json::to_value(&report).expect("report serializes"))
        }
        Suite::Invariance => {
            let res = average_h(p, budget)?;
            let flags = verify_invariance(p, &res);
            (flags.iter().all(|&b| b), json!({ "per_generator": flags }))
        }
        Suite::Polynomiality => {
            let res = average_h(p, budget)?;
            let polynomial = res.n_poly.is_polynomial();
            let identity = res.check_defining_identity(p.ctx());
            let denominator: Vec<String> = res.d_factors.iter().map(|f| f.display(p.rs().rank())).collect();
            (
                polynomial && identity,
                json!({
                    "numerator_is_polynomial": polynomial,
                    "numerator_times_denominator_identity": identity,
                    "numerator_terms": res.n_poly.len(),
                    "denominator": denominator,
                }),
            )
        }
        Suite::Axis => {
            if !p.tp().is_zero() {
                return Err(CliError::Usage("the axis suite needs --ell 0,…,0".into()));
            }
            let res = average_h(p, budget)?;
            let mut pass = true;
            let mut roots = Vec::new();
            for i in 0..p.rs().rank() {
                let got = axis_specialization(&res, i, p.tp())?;
                let ok = got.equals(&axis_value_from_local_factors(p.rs(), i, p.ctx()), p.ctx());
                let closed = got.equals(&axis_closed_form(p.rs(), i, p.ctx()), p.ctx());
                pass &= ok;
                roots.push(json!({
                    "root": i,
                    "m": p.rs().simple_m(i),
                    "value": got.to_string(),
                    "pass": ok,
                    "matches_single_binomial_closed_form": closed,
                }));
            }
            (pass, json!({ "roots": roots }))
        }
        Suite::LocalFe => {
            let table = h_table(p, budget)?;
            let reports = verify_local_fe_sweep(&table, p);
            let checked: Vec<_> = reports.iter().filter(|r| !r.trivial).collect();
            let failures: Vec<Value> = checked
                .iter()
                .filter(|r| !r.shifted_pass)
                .map(|r| json!({ "k": r.k, "i": r.i, "residual": r.residual }))
                .collect();
            let unshifted_failures = checked.iter().filter(|r| !r.pass).count();
            (
                failures.is_empty(),
                json!({
                    "points": reports.len(),
                    "nontrivial": checked.len(),
                    "with_reflected_term": checked.iter().filter(|r| r.reflected_term).count(),
                    "failures": failures,
                    "failures_without_off_axis_shift": unshifted_failures,
                }),
            )
        }
        Suite::Cocycle => {
            // The cocycle has integer coefficients in q, so it is always checked exactly.
            let rs = p.rs();
            let ctx = SymbolicContext::new(rs.n())?;
            let group = weyl_enumerate(rs, budget)?;
            let js: Vec<_> = group.elements().iter().map(|w| j_cocycle(w, rs, &ctx)).collect();
            let mut failures = Vec::new();
            for (a, w) in group.elements().iter().enumerate() {
                for (b, w2) in group.elements().iter().enumerate() {
                    let lhs = &js[group.multiply(rs, a, b)];
                    let rhs = js[a].substitute_weyl(w2, &ctx).times(&js[b]);
                    if *lhs != rhs {
                        failures.push(json!([w.word(), w2.word()]));
                    }
                }
            }
            let pairs = group.len() * group.len();
            (failures.is_empty(), json!({ "pairs": pairs, "failures": failures }))
        }
        Suite::Gauss | Suite::Multiplicativity | Suite::Sumj => unreachable!("handled by run_suite"),
    })
}

fn field_context(cfg: &RunConfig) -> Result<FFContext, CliError> {
    Ok(FFContext::new(cfg.q()?, cfg.n)?)
}

fn gauss(cfg: &RunConfig, opts: &VerifyOptions) -> Result<(bool, Value), CliError> {
    let ctx = field_context(cfg)?;
    let report = gauss_identity_suite(&ctx, opts.samples.unwrap_or(50), 3, cfg.seed.unwrap_or_default())?;
    let max_residual = report.checks.iter().map(|c| c.max_residual).fold(0.0, f64::max);
    let pass = report.all_pass() && max_residual < NUMERIC_TOL;
    let mut details = serde_json::to_value(&report).expect("report serializes");
    details["max_residual"] = json!(max_residual);
    Ok((pass, details))
}

fn multiplicativity(cfg: &RunConfig, opts: &VerifyOptions) -> Result<(bool, Value), CliError> {
    let ctx = field_context(cfg)?;
    let rs = cfg.system()?.clone();
    let rank = rs.rank();
    let eval = HEvaluator::new(&ctx, rs.clone())?;
    let spread = order_independence(&eval, opts.samples.unwrap_or(25), 3, cfg.seed.unwrap_or_default())?;
    let mut pass = spread < ORDER_TOL;
    let mut details = json!({ "block_order_relative_spread": spread });
    if rank == 1 {
        let mut worst = 0f64;
        let mut moduli = 0;
        for d in 1..=3 {
            for c in ctx.monic_of_degree(d) {
                if ctx.is_squarefree(&c)? {
                    let h = eval.evaluate(std::slice::from_ref(&c), &[FFPoly::one()])?;
                    let g = ctx.gauss_sum(&FFPoly::one(), &c, rs.simple_len_sq(0) as i64)?;
                    worst = worst.max((h - g).norm());
                    moduli += 1;
                }
            }
        }
        pass &= worst < NUMERIC_TOL;
        details["squarefree_vs_gauss_sums"] = json!({ "moduli": moduli, "max_residual": worst });
    } else if rank == 2 {
        let twist = [FFPoly::one(), FFPoly::one()];
        let mut worst = 0f64;
        for d in degree_tuples(2, 3) {
            let ours = squarefree_partial_sum(&eval, &twist, &d)?;
            let oracle = squarefree_rank_two_oracle(&ctx, &rs, [d[0], d[1]])?;
            // Relative to the number of summed terms, since the sum itself may vanish.
            let scale = oracle.norm().max((ctx.q() as f64).powi((d[0] + d[1]) as i32));
            worst = worst.max((ours - oracle).norm() / scale);
        }
        pass &= worst < NUMERIC_TOL;
        details["squarefree_vs_brute_force"] = json!({ "max_total_degree": 3, "max_relative_residual": worst });
    }
    Ok((pass, details))
}

/// The self-similarity comparison, reported but never gating.
pub fn probe(cfg: &RunConfig, opts: &VerifyOptions) -> Value {
    let run = || -> Result<Value, CliError> {
        let ctx = field_context(cfg)?;
        let eval = HEvaluator::new(&ctx, cfg.system()?.clone())?;
        let report = self_similarity_probe(&eval, opts.probe_degree)?;
        Ok(serde_json::to_value(&report).expect("report serializes"))
    };
    match run() {
        Ok(report) => json!({ "check": "self-similarity", "report": report }),
        Err(e) => json!({ "check": "self-similarity", "error": e.to_string() }),
    }
}
