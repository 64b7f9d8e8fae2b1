//! Max-min time allocation solvers.
//!
//! The cooperative schemes use a line search over the WET duration `t1`
//! with nested bisections that drive the phase rates to equality. The
//! benchmarks use the same building blocks, and [`oracle_grid`] provides a
//! brute-force reference over a uniform grid of the allocation simplex.

mod benchmark;
pub(crate) mod bisection;
mod cooperative;
mod oracle;

pub use benchmark::{solve_noncoop, solve_noncoop_coefficients, solve_relay, solve_relay_best, solve_relay_coefficients};
pub use cooperative::{solve_dtb_jd, solve_dtb_njd, solve_stbc_jd, solve_stbc_njd};
pub use oracle::{oracle_grid, oracle_grid_coefficients, oracle_relay_best};

use crate::channel::{coefficients, ChannelSet, CoefficientSet, SystemParams};
use crate::error::{domain, Result};
use crate::exec::Execution;
use crate::rates::{scheme_rates, RatePair, Scheme, TimeAllocation};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Line-search step `Δ` over `t1`.
    pub t1_step: f64,
    /// Equal-rate residual `σ` (bits) that ends each bisection.
    pub rate_tolerance: f64,
    pub max_bisection_iters: u32,
    pub oracle_grid_step: f64,
    /// Golden-section refinement around the best `t1` after the line search.
    pub refine_t1: bool,
    pub execution: Execution,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            t1_step: 1e-3,
            rate_tolerance: 1e-7,
            max_bisection_iters: 200,
            oracle_grid_step: 5e-3,
            refine_t1: false,
            execution: Execution::default(),
        }
    }
}

impl SolverConfig {
    pub fn validate(&self, params: &SystemParams) -> Result<()> {
        let budget = params.time_budget();
        if !(self.t1_step > 0.0 && self.t1_step < budget) {
            return domain(format!("t1_step must lie in (0, {budget}), got {}", self.t1_step));
        }
        if !(self.rate_tolerance > 0.0) {
            return domain(format!("rate_tolerance must be positive, got {}", self.rate_tolerance));
        }
        if self.max_bisection_iters == 0 {
            return domain("max_bisection_iters must be at least 1");
        }
        if !(self.oracle_grid_step > 0.0) {
            return domain(format!("oracle_grid_step must be positive, got {}", self.oracle_grid_step));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveResult {
    pub scheme: Scheme,
    pub allocation: TimeAllocation,
    pub rates: RatePair,
    pub common: f64,
    /// Every bisection at the returned point met its residual criterion, so
    /// the equal-rate conditions hold within `rate_tolerance`.
    pub converged: bool,
    /// Total bisection steps (or grid points, for the oracle).
    pub iterations: u64,
    /// The value is achievable but not claimed optimal (STBC-JD).
    pub achievable_only: bool,
}

impl SolveResult {
    pub fn equal_rate_residual(&self) -> f64 {
        self.rates.equal_rate_residual(self.scheme)
    }

    pub(crate) fn zero(scheme: Scheme, params: &SystemParams, coeffs: &CoefficientSet) -> Result<Self> {
        let allocation = TimeAllocation::from_parts(params.time_budget(), 0.0, 0.0, 0.0, 0.0);
        let rates = scheme_rates(&allocation, coeffs, scheme)?;
        Ok(SolveResult {
            scheme,
            allocation,
            rates,
            common: 0.0,
            converged: true,
            iterations: 0,
            achievable_only: scheme == Scheme::StbcJd,
        })
    }
}

/// Solves any scheme from coefficients. Relay schemes solve the given
/// direction only; see [`solve_relay_best`] for the better of the two.
pub fn solve_with_coefficients(
    scheme: Scheme,
    coeffs: &CoefficientSet,
    params: &SystemParams,
    cfg: &SolverConfig,
) -> Result<SolveResult> {
    match scheme {
        Scheme::StbcNjd => solve_stbc_njd(coeffs, params, cfg),
        Scheme::StbcJd => solve_stbc_jd(coeffs, params, cfg),
        Scheme::DtbNjd => solve_dtb_njd(coeffs, params, cfg),
        Scheme::DtbJd => solve_dtb_jd(coeffs, params, cfg),
        Scheme::RelayNjd(d) => solve_relay_coefficients(coeffs, params, d, false, cfg),
        Scheme::RelayJd(d) => solve_relay_coefficients(coeffs, params, d, true, cfg),
        Scheme::NonCoop => solve_noncoop_coefficients(coeffs, params, cfg),
    }
}

pub fn solve(scheme: Scheme, params: &SystemParams, channels: &ChannelSet, cfg: &SolverConfig) -> Result<SolveResult> {
    params.validate()?;
    let coeffs = coefficients(params, channels)?;
    solve_with_coefficients(scheme, &coeffs, params, cfg)
}

/// Line-search output at one `t1`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Candidate {
    pub allocation: TimeAllocation,
    pub rates: RatePair,
    pub common: f64,
    pub converged: bool,
    pub iterations: u64,
}

/// `t1 = Δ, 2Δ, ...` up to the time budget, each evaluated by `at_t1`, then
/// optionally refined. Ties keep the smallest `t1`.
pub(crate) fn line_search(
    params: &SystemParams,
    cfg: &SolverConfig,
    at_t1: impl Fn(f64) -> Candidate + Sync + Send,
) -> (Candidate, u64) {
    let budget = params.time_budget();
    let steps = (budget / cfg.t1_step + 1e-9).floor() as usize;
    let candidates = crate::exec::map_indices(steps, cfg.execution, |k| at_t1((k + 1) as f64 * cfg.t1_step));
    let mut total: u64 = candidates.iter().map(|c| c.iterations).sum();
    let mut best = candidates[0];
    for c in &candidates[1..] {
        if c.common > best.common {
            best = *c;
        }
    }
    if cfg.refine_t1 && best.common > 0.0 {
        let centre = best.allocation.t1();
        let lo = (centre - cfg.t1_step).max(0.0);
        let hi = (centre + cfg.t1_step).min(budget);
        let mut refined = best;
        bisection::golden_section_max(lo, hi, 1e-9, |t1| {
            let c = at_t1(t1);
            total += c.iterations;
            if c.common > refined.common {
                refined = c;
            }
            c.common
        });
        best = refined;
    }
    (best, total)
}
