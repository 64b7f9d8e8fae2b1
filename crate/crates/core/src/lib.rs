//! Optimal max-min ("common") throughput and time allocation for a two-user
//! wireless powered cooperative network.
//!
//! An energy node (EN) charges users X and Y, which then exchange their
//! messages and transmit jointly to a destination node (DN). The crate
//! evaluates the achievable rates of four cooperation schemes (STBC or
//! distributed beamforming, with or without joint decoding at the DN) and
//! two benchmarks (relaying, no cooperation), solves for the allocation that
//! maximizes the weaker user's rate, and regenerates the parameter sweeps
//! used to compare them.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod error;
pub mod exec;
pub mod experiments;
pub mod rates;
pub mod solver;

pub use channel::{coefficients, harvested_energy, path_loss_gain, ChannelSet, CoefficientSet, Geometry, SystemParams};
pub use error::{Error, Result};
pub use exec::Execution;
pub use rates::{common_throughput, RatePair, RelayDirection, Scheme, TimeAllocation};
pub use solver::{oracle_grid, solve, SolveResult, SolverConfig};
