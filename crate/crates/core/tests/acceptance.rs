//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Criteria 3, 5 and 8 are checked exactly as stated and do not hold in general;
//! each is followed by the corrected statement that does hold. A stated
//! criterion listed in `KNOWN_FAILURES` may fail without failing the run, but it
//! must still fail: if it starts passing, the run fails so the list gets revisited.

use std::process::ExitCode;
use std::time::Instant;

use num_complex::Complex64;
use wmds_core::averaging::{
    axis_closed_form, axis_specialization, axis_value_from_local_factors, character_in_qx, sum_j_equals_delta,
    value_at_one_q_one, verify_invariance, weyl_character, weyl_dimension,
};
use wmds_core::global_ff::{
    gauss_identity_suite, order_independence, squarefree_partial_sum, squarefree_rank_two_oracle,
};
use wmds_core::local_series::verify_local_fe_sweep;
use wmds_core::rootsys::MAX_RANK;
use wmds_core::*;

const _: () = assert!(MAX_RANK >= 3);

const BUDGET: u64 = DEFAULT_WEYL_BUDGET;
const SEED: u64 = 20_240_601;
const KNOWN_FAILURES: &[&str] = &["3", "5", "8"];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn symbolic(code: &str, n: u32, ell: &[u32]) -> ActionParams<SymbolicContext> {
    let rs = RootSystem::from_code(code, n).unwrap();
    ActionParams::new(rs, TwistParams::new(ell.to_vec()), SymbolicContext::new(n).unwrap()).unwrap()
}

fn ell_family(rank: usize) -> Vec<Vec<u32>> {
    let lead = |v: &[u32]| (0..rank).map(|k| v.get(k).copied().unwrap_or(0)).collect::<Vec<_>>();
    vec![lead(&[]), lead(&[1]), lead(&[2, 1])]
}

fn coxeter_relations() -> Outcome {
    let mut suites = 0;
    let mut failures = Vec::new();
    for code in ["A1xA1", "A2", "B2", "G2", "A3", "B3", "C3"] {
        for n in [1, 2, 3, 4, 6] {
            let rank = RootSystem::from_code(code, n).unwrap().rank();
            for ell in ell_family(rank) {
                let report = verify_relations(&symbolic(code, n, &ell), 20, SEED);
                suites += 1;
                if !report.all_pass() {
                    failures.push(format!("{code} n={n} ℓ={ell:?}"));
                }
            }
        }
    }
    outcome(failures.is_empty(), format!("{suites} suites × 20 monomials per relation; failures: {failures:?}"))
}

fn invariance_and_polynomiality() -> Outcome {
    let mut cases = 0;
    let mut failures = Vec::new();
    let systems: Vec<(&str, u32)> = ["A2", "B2", "G2"]
        .iter()
        .flat_map(|c| [1, 2, 3].map(|n| (*c, n)))
        .chain([("A3", 1), ("A3", 2)])
        .collect();
    for (code, n) in systems {
        let rank = RootSystem::from_code(code, n).unwrap().rank();
        for ell in &ell_family(rank)[..2] {
            let p = symbolic(code, n, ell);
            cases += 1;
            match average_h(&p, BUDGET) {
                Err(e) => failures.push(format!("{code} n={n} ℓ={ell:?}: {e}")),
                Ok(res) => {
                    let invariant = verify_invariance(&p, &res).iter().all(|&b| b);
                    let ok = invariant && res.n_poly.is_polynomial() && res.check_defining_identity(p.ctx());
                    if !ok {
                        failures.push(format!("{code} n={n} ℓ={ell:?}"));
                    }
                }
            }
        }
    }
    outcome(failures.is_empty(), format!("{cases} cases; failures: {failures:?}"))
}

fn axis_cases() -> Vec<(&'static str, u32)> {
    ["A2", "B2", "G2", "A3"].iter().flat_map(|c| [1, 2, 3].map(|n| (*c, n))).collect()
}

fn axis_check(corrected: bool) -> Outcome {
    let mut checked = 0;
    let mut failures = Vec::new();
    for (code, n) in axis_cases() {
        let rank = RootSystem::from_code(code, n).unwrap().rank();
        let p = symbolic(code, n, &vec![0; rank]);
        let res = average_h(&p, BUDGET).unwrap();
        for i in 0..rank {
            let got = axis_specialization(&res, i, p.tp()).unwrap();
            let expected = if corrected {
                axis_value_from_local_factors(p.rs(), i, p.ctx())
            } else {
                axis_closed_form(p.rs(), i, p.ctx())
            };
            checked += 1;
            if !got.equals(&expected, p.ctx()) {
                failures.push(format!("{code} n={n} i={i} (m={}): got {got}", p.rs().simple_m(i)));
            }
        }
    }
    outcome(failures.is_empty(), format!("{checked} simple roots; mismatches: {failures:?}"))
}

fn cocycle_and_denominator() -> Outcome {
    let mut failures = Vec::new();
    let mut pairs = 0;
    for code in ["A1xA1", "A2", "B2", "G2"] {
        for n in [1, 2, 3] {
            let rs = RootSystem::from_code(code, n).unwrap();
            let ctx = SymbolicContext::new(n).unwrap();
            let g = weyl_enumerate(&rs, BUDGET).unwrap();
            for (a, w) in g.elements().iter().enumerate() {
                let j = j_cocycle(w, &rs, &ctx);
                for (b, w2) in g.elements().iter().enumerate() {
                    pairs += 1;
                    let lhs = j_cocycle(g.get(g.multiply(&rs, a, b)), &rs, &ctx);
                    let rhs = j.substitute_weyl(w2, &ctx).times(&j_cocycle(w2, &rs, &ctx));
                    if lhs != rhs {
                        failures.push(format!("{code} n={n} {:?}·{:?}", w.word(), w2.word()));
                    }
                }
            }
        }
    }
    for code in ["A1", "A2", "B2", "G2", "A3"] {
        for n in [1, 2, 3] {
            let rs = RootSystem::from_code(code, n).unwrap();
            if let Err(e) = sum_j_equals_delta(&rs, BUDGET) {
                failures.push(format!("Σj {code} n={n}: {e}"));
            }
        }
    }
    outcome(failures.is_empty(), format!("{pairs} cocycle pairs, 15 denominator identities; failures: {failures:?}"))
}

fn local_fe_check(shifted: bool) -> Outcome {
    let mut points = 0;
    let mut reflected = 0;
    let mut unreflected = 0;
    let mut failures = Vec::new();
    for code in ["A2", "B2"] {
        for n in [2, 3] {
            for l0 in 0..=2 {
                for l1 in 0..=2 {
                    let p = symbolic(code, n, &[l0, l1]);
                    let table = h_table(&p, BUDGET).unwrap();
                    for r in verify_local_fe_sweep(&table, &p) {
                        if r.trivial {
                            continue;
                        }
                        points += 1;
                        if r.reflected_term {
                            reflected += 1;
                        } else {
                            unreflected += 1;
                        }
                        let ok = if shifted { r.shifted_pass } else { r.pass };
                        if !ok {
                            failures.push(format!("{code} n={n} ℓ=[{l0},{l1}] k={:?} i={}", r.k, r.i));
                        }
                    }
                }
            }
        }
    }
    let both_branches = reflected > 0 && unreflected > 0;
    let shown: Vec<_> = failures.iter().take(4).collect();
    outcome(
        failures.is_empty() && both_branches,
        format!(
            "{points} nontrivial (Φ,n,ℓ,k,i) points, {reflected} with the reflected term, {unreflected} without; {} failures, e.g. {shown:?}",
            failures.len()
        ),
    )
}

fn gauss_identities() -> Outcome {
    let mut lines = Vec::new();
    let mut pass = true;
    for (q, n) in [(5, 2), (13, 2), (13, 3)] {
        let ctx = FFContext::new(q, n).unwrap();
        let report = gauss_identity_suite(&ctx, 50, 3, SEED).unwrap();
        pass &= report.all_pass();
        let worst = report.checks.iter().map(|c| c.max_residual).fold(0.0, f64::max);
        lines.push(format!("q={q} n={n} max residual {worst:.1e}"));
    }
    let ctx = FFContext::new(5, 2).unwrap();
    let g = ctx.gauss_sum(&FFPoly::one(), &FFPoly::t(), 1).unwrap();
    let sqrt5 = (g - Complex64::new(5f64.sqrt(), 0.0)).norm();
    pass &= sqrt5 < 1e-9;
    lines.push(format!("|g(1,t;ε) − √5| = {sqrt5:.1e}"));
    outcome(pass, lines.join("; "))
}

fn twisted_multiplicativity() -> Outcome {
    let mut lines = Vec::new();
    let mut pass = true;
    for (q, n) in [(5, 2), (13, 2), (13, 3)] {
        let ctx = FFContext::new(q, n).unwrap();
        for code in ["A1", "A2"] {
            let eval = HEvaluator::new(&ctx, RootSystem::from_code(code, n).unwrap()).unwrap();
            let spread = order_independence(&eval, 25, 3, SEED).unwrap();
            pass &= spread < 1e-10;
            lines.push(format!("{code} q={q} n={n} spread {spread:.1e}"));
        }
    }
    let ctx = FFContext::new(5, 2).unwrap();
    let eval = HEvaluator::new(&ctx, RootSystem::from_code("A1", 2).unwrap()).unwrap();
    let mut worst = 0f64;
    let mut count = 0;
    for d in 1..=3 {
        for c in ctx.monic_of_degree(d) {
            if ctx.is_squarefree(&c).unwrap() {
                let h = eval.evaluate(std::slice::from_ref(&c), &[FFPoly::one()]).unwrap();
                let g = ctx.gauss_sum(&FFPoly::one(), &c, 1).unwrap();
                worst = worst.max((h - g).norm());
                count += 1;
            }
        }
    }
    pass &= worst < 1e-9;
    lines.push(format!("A1 squarefree H vs Gauss sums on {count} moduli: {worst:.1e}"));

    let rs = RootSystem::from_code("A2", 2).unwrap();
    let eval = HEvaluator::new(&ctx, rs.clone()).unwrap();
    let mut oracle_worst = 0f64;
    for d in wmds_core::global_ff::degree_tuples(2, 4) {
        let ours = squarefree_partial_sum(&eval, &[FFPoly::one(), FFPoly::one()], &d).unwrap();
        let oracle = squarefree_rank_two_oracle(&ctx, &rs, [d[0], d[1]]).unwrap();
        oracle_worst = oracle_worst.max((ours - oracle).norm() / oracle.norm().max(1.0));
    }
    pass &= oracle_worst < 1e-9;
    lines.push(format!("A2 squarefree coefficients vs brute force, Σd ≤ 4: {oracle_worst:.1e}"));
    outcome(pass, lines.join("; "))
}

fn character_cases() -> Vec<(&'static str, Vec<u32>)> {
    vec![
        ("A2", vec![0, 0]),
        ("A2", vec![1, 0]),
        ("A2", vec![1, 1]),
        ("A1", vec![0]),
        ("A1", vec![3]),
        ("B2", vec![0, 0]),
    ]
}

/// `|N(1,…,1; ℓ)|` at `q = 1` against `dim V_θ`, `θ = Σ (l_i + 1) ω_i`.
fn character_degeneration_as_stated() -> Outcome {
    let mut lines = Vec::new();
    let mut pass = true;
    for (code, ell) in character_cases() {
        let p = symbolic(code, 1, &ell);
        let res = average_h(&p, BUDGET).unwrap();
        let value = value_at_one_q_one(&res.n_poly).unwrap();
        let theta: Vec<u32> = ell.iter().map(|l| l + 1).collect();
        let dim = weyl_dimension(&theta, p.rs());
        pass &= num_traits::Signed::abs(&value) == dim;
        lines.push(format!("{code} ℓ={ell:?}: |N(1)| = {value}, dim V_θ = {dim}"));
    }
    outcome(pass, lines.join("; "))
}

/// `N = χ_ℓ(qx)·D`, hence `h(1,…,1)|_{q=1} = dim V_ℓ`.
fn character_degeneration_corrected() -> Outcome {
    let mut lines = Vec::new();
    let mut pass = true;
    for (code, ell) in character_cases() {
        let p = symbolic(code, 1, &ell);
        let res = average_h(&p, BUDGET).unwrap();
        let chi = weyl_character(&ell, p.rs(), BUDGET).unwrap();
        let identity = character_in_qx(&chi).times(&res.dpoly) == res.n_poly;
        let h_at_one = value_at_one_q_one(&character_in_qx(&chi)).unwrap();
        let dim = weyl_dimension(&ell, p.rs());
        pass &= identity && h_at_one == dim;
        lines.push(format!("{code} ℓ={ell:?}: N = χ_ℓ(qx)·D {identity}, h(1) = {h_at_one} = dim V_ℓ {dim}"));
    }
    outcome(pass, lines.join("; "))
}

fn determinism() -> Outcome {
    let render = || {
        let p = symbolic("G2", 2, &[1, 0]);
        let n = average_h(&p, BUDGET).unwrap().n_poly.to_json(2).to_string();
        let rel = serde_json::to_string(&verify_relations(&p, 20, SEED)).unwrap();
        let ctx = FFContext::new(5, 2).unwrap();
        let eval = HEvaluator::new(&ctx, RootSystem::from_code("A2", 2).unwrap()).unwrap();
        let z = assemble_z(&eval, &[FFPoly::one(), FFPoly::one()], 3).unwrap().to_json().to_string();
        let gauss = serde_json::to_string(&gauss_identity_suite(&ctx, 10, 2, SEED).unwrap()).unwrap();
        format!("{n}\n{rel}\n{z}\n{gauss}")
    };
    let first = render();
    let same = (0..2).all(|_| render() == first);
    outcome(same, format!("{} bytes rendered three times", first.len()))
}

fn main() -> ExitCode {
    type Criterion = (&'static str, &'static str, fn() -> Outcome);
    let criteria: [Criterion; 12] = [
        ("1", "Coxeter relations of the action", coxeter_relations),
        ("2", "invariance and polynomiality of h", invariance_and_polynomiality),
        ("3", "axis specialization, closed form as stated", || axis_check(false)),
        ("3'", "axis specialization, value 1 when m(α_i) = 1", || axis_check(true)),
        ("4", "j cocycle and Σ_w j(w) = Δ", cocycle_and_denominator),
        ("5", "local functional equation, exponent as stated", || local_fe_check(false)),
        ("5'", "local functional equation, exponent with off-axis shift", || local_fe_check(true)),
        ("6", "Gauss-sum identities", gauss_identities),
        ("7", "twisted multiplicativity", twisted_multiplicativity),
        ("8", "character degeneration, |N(1)| = dim V_θ as stated", character_degeneration_as_stated),
        ("8'", "character degeneration, N = χ_ℓ(qx)·D", character_degeneration_corrected),
        ("9", "determinism", determinism),
    ];
    let mut unexpected = Vec::new();
    for (id, title, run) in criteria {
        let start = Instant::now();
        let out = run();
        let secs = start.elapsed().as_secs_f64();
        let known = KNOWN_FAILURES.contains(&id);
        let tag = match (out.pass, known) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known)",
            (false, false) => "FAIL",
        };
        println!("{tag:<13} criterion {id:<3} {title} [{secs:.1}s] :: {}", out.detail);
        if out.pass == known {
            unexpected.push(id);
        }
    }
    if unexpected.is_empty() {
        println!("acceptance: all criteria behaved as recorded");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: unexpected outcome for criteria {unexpected:?}");
        ExitCode::FAILURE
    }
}
