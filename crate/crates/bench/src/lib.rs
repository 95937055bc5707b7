//! Shared fixtures for the criterion benchmarks.

use wmds_core::{ActionParams, RootSystem, SymbolicContext, TwistParams};

pub fn symbolic(code: &str, n: u32, ell: &[u32]) -> ActionParams<SymbolicContext> {
    let rs = RootSystem::from_code(code, n).expect("valid root system");
    let ctx = SymbolicContext::new(n).expect("valid cover degree");
    ActionParams::new(rs, TwistParams::new(ell.to_vec()), ctx).expect("consistent parameters")
}
