use proptest::prelude::*;
use wmds_core::local_series::{reassemble_from_slices, verify_local_fe_sweep};
use wmds_core::*;

fn symbolic(code: &str, n: u32, ell: &[u32]) -> ActionParams<SymbolicContext> {
    let rs = RootSystem::from_code(code, n).unwrap();
    ActionParams::new(rs, TwistParams::new(ell.to_vec()), SymbolicContext::new(n).unwrap()).unwrap()
}

#[test]
fn numeric_averaging_matches_evaluated_symbolic_table() {
    for (code, q, n) in [("G2", 5, 2), ("B2", 13, 3), ("A3", 5, 2)] {
        let rank = RootSystem::from_code(code, n).unwrap().rank();
        let sym = symbolic(code, n, &vec![0; rank]);
        let ctx = NumericGammaContext::new(q, n).unwrap();
        let num = ActionParams::new(sym.rs().clone(), sym.tp().clone(), ctx.clone()).unwrap();
        let st = h_table(&sym, DEFAULT_WEYL_BUDGET).unwrap();
        let nt = h_table(&num, DEFAULT_WEYL_BUDGET).unwrap();
        assert!(st.coeffs.map_coeffs(|s| s.eval(&ctx)).approx_eq(&nt.coeffs, 1e-9), "{code}");
    }
}

#[test]
fn g2_local_equation_with_shift() {
    let p = symbolic("G2", 2, &[1, 0]);
    let table = h_table(&p, DEFAULT_WEYL_BUDGET).unwrap();
    let reports = verify_local_fe_sweep(&table, &p);
    assert!(reports.iter().all(|r| r.shifted_pass));
    assert!(reports.iter().any(|r| !r.trivial && !r.pass));
}

#[test]
fn rejects_bad_inputs() {
    assert!(RootSystem::from_code("H2", 2).is_err());
    assert!(FFContext::new(7, 2).is_err());
    assert!(NumericGammaContext::new(5, 3).is_err());
    let ctx = FFContext::new(5, 2).unwrap();
    assert!(HEvaluator::new(&ctx, RootSystem::from_code("A2", 3).unwrap()).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn k_prime_is_the_dot_action(k in prop::collection::vec(-4i32..6, 2), i in 0usize..2, l0 in 0u32..3, l1 in 0u32..3) {
        let rs = RootSystem::from_code("B2", 2).unwrap();
        let tp = TwistParams::new(vec![l0, l1]);
        let k = Weight::new(&k);
        let w = WeylElement::from_word(&rs, &[i as u8]);
        prop_assert_eq!(k_prime(&k, i, &tp, &rs), dot_action(&w, &k, &tp, &rs));
    }

    #[test]
    fn slices_partition_the_table(l0 in 0u32..3, l1 in 0u32..3, n in 2u32..4) {
        let p = symbolic("A2", n, &[l0, l1]);
        let table = h_table(&p, DEFAULT_WEYL_BUDGET).unwrap();
        for i in 0..2 {
            prop_assert_eq!(reassemble_from_slices(&table, i, p.rs().simple_m(i)), table.coeffs.clone());
        }
    }

    #[test]
    fn prime_power_arguments_read_the_local_table(b0 in 0u32..4, b1 in 0u32..4, which in 0u64..5) {
        let ctx = FFContext::new(5, 2).unwrap();
        let eval = HEvaluator::new(&ctx, RootSystem::from_code("A2", 2).unwrap()).unwrap();
        let prime = FFPoly::monic_from_index(1, which, 5);
        let local = ctx.local_context(&prime).unwrap();
        let expected = eval.table(&[0, 0]).unwrap().get(&Weight::new(&[b0 as i32, b1 as i32])).eval(&local);
        let args = [prime.pow(b0, ctx.field()), prime.pow(b1, ctx.field())];
        let h = eval.evaluate(&args, &[FFPoly::one(), FFPoly::one()]).unwrap();
        prop_assert!((h - expected).norm() < 1e-9 * expected.norm().max(1.0));
    }

    #[test]
    fn block_order_is_irrelevant_for_cubic_covers(seed in 0u64..1000) {
        let ctx = FFContext::new(13, 3).unwrap();
        let eval = HEvaluator::new(&ctx, RootSystem::from_code("A2", 3).unwrap()).unwrap();
        let spread = wmds_core::global_ff::order_independence(&eval, 2, 2, seed).unwrap();
        prop_assert!(spread < 1e-10);
    }
}
