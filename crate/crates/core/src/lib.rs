//! Exact arithmetic, construction, verification and classification of PBW
//! deformations of `S(V) # G`, where `G` is cyclic of prime order `p` acting
//! on `V = F_p^2` by a transvection.

pub mod action;
pub mod chain;
pub mod checker;
pub mod error;
pub mod exec;
pub mod field;
pub mod group_algebra;
pub mod guards;
pub mod params;
pub mod rewriting;
pub mod solver;

pub use action::{act, act_ga, sym_mul, Quad2GroupElement, VGroupElement, Vector};
pub use chain::{verify_chain_maps, ChainReport, OuterFactors};
pub use checker::{check_all, ConditionReport};
pub use error::{Error, Result};
pub use exec::Exec;
pub use field::{Prime, Scalar};
pub use group_algebra::{Factorization, GroupAlgebraElement};
pub use guards::Guards;
pub use params::{
    add_coboundary, build_candidate, closed_form, implied_a, mu, CandidateMatch, CoboundaryData,
    DeformationParams,
};
pub use rewriting::{check_associativity, check_dimension, NormalWord, RuleSet};
pub use solver::{Mode, SolutionRecord};
