//! Exact and asymptotic statistics of the cycle type of a uniform random
//! permutation of [n].
//!
//! The crate has three layers:
//!
//! * **exact** — every closed-form or recursive law as arbitrary-precision
//!   rational arithmetic: Cauchy's cycle-type formula, Goncharov's local law,
//!   joint laws and binomial moments over index sets, Stirling-number laws of
//!   the total cycle count, permutations without small/large cycles, fixed-set
//!   (divisor) probabilities, plus brute-force oracles that validate them;
//! * **asymptotics** — the Dickman function by quadrature, the large-deviation
//!   rate Q, normal/Poisson/binomial tail machinery, and every explicit
//!   theorem bound as an evaluable formula with verification against the
//!   exact layer ([`bounds`], [`dickman`], [`special`]);
//! * **montecarlo / tvd** — seeded, reproducible sampling for statements out
//!   of exact reach, and the exact total-variation distance between the
//!   small-cycle vector and its independent-Poisson model.
//!
//! All types are immutable values and all operations are pure functions; see
//! the module docs for the per-module concurrency story.

pub mod bounds;
pub mod constants;
pub mod cycle_type;
pub mod dickman;
pub mod error;
pub mod exact;
pub mod index_set;
pub mod montecarlo;
pub mod partitions;
pub mod pmf;
pub mod rational;
pub mod special;
pub mod suites;
pub mod tvd;

pub use cycle_type::CycleType;
pub use error::{Error, Result};
pub use index_set::{harmonic, IndexSet};
pub use pmf::Pmf;
pub use rational::Rational;
