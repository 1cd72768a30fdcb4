//! Primitivity testing for transitive permutation groups.
//!
//! Transversals for point stabilizers are built with deep sifting, which
//! keeps every level of the sift structure a non-degenerate cube and can
//! stop once the base grows past a chosen cap. Capped runs either decide
//! primitivity, find a block system, or return a certified nonredundant
//! partial base, from which a block system is recovered whenever the action
//! on some block system has a small base.
//!
//! Points are `0..n`; permutations act on the right, so `g.then(&h)` applies
//! `g` first.

pub mod blocks;
pub mod corpus;
pub mod error;
pub mod io;
pub mod perm;
pub mod primitivity;
pub mod sift;
pub mod transversal;
pub mod words;

pub use blocks::{
    atkinson_baseline, blockness_test, minimal_block, validate_block_system, BaselineVerdict,
    BlockSystem, BlockTest, BlockWitness,
};
pub use corpus::GroupSpec;
pub use error::{Error, Result};
pub use io::{emit_cycles, emit_generators, emit_json, parse_generators};
pub use perm::{is_transitive, orbit, GeneratorSet, Permutation, PointAction};
pub use primitivity::{
    find_blocks_from_certificate, primitivity_main, primitivity_subquadratic, primitivity_with_cap,
    ss_primitivity, ss_uncapped, Diagnostics, Verdict, VerdictKind,
};
pub use sift::{Certificate, SiftKind, SiftOutcome, SiftState};
pub use transversal::{
    build_point_transversal, build_scoped_transversal, Transversal, TransversalResult,
};
pub use words::{Atom, CubeList, ElementStore, Word};
