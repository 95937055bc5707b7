//! Exact construction of the prime-power parts of Weyl group multiple Dirichlet
//! series by averaging over the Weyl group, with checks of the identities the
//! construction relies on.

pub mod averaging;
pub mod cg_action;
pub mod error;
pub mod ffpoly;
pub mod finite_field;
pub mod global_ff;
pub mod laurent;
pub mod local_series;
pub mod rootsys;
pub mod scalars;

pub use error::{Error, Result};
pub use averaging::{average_h, j_cocycle, weyl_character_oracle, AveragingResult};
pub use rootsys::{
    dot_action, inversion_set, reduced_words, weyl_enumerate, CartanType, RootSystem, TwistParams, Weight,
    WeylElement, WeylGroup, DEFAULT_WEYL_BUDGET, MAX_RANK,
};
pub use scalars::{
    Coeff, GammaMonomial, GammaScalar, NumericGammaContext, Scalar, ScalarContext,
    SymbolicContext,
};
pub use laurent::{BinomialFactor, GradedRational, GradingLattice, LaurentPoly, NotDivisible};
pub use cg_action::{mu, verify_relations, ActionParams, RelationReport, RelationSuiteReport};
pub use local_series::{h_table, k_prime, local_f, local_slice, verify_local_fe, HTable, LocalF, LocalFeReport, LocalSlice};
pub use ffpoly::FFPoly;
pub use global_ff::{assemble_z, FFContext, GlobalH, HEvaluator, TruncatedZ};
