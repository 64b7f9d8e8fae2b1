//! Line search plus nested bisection for the four cooperation schemes.

use crate::channel::{CoefficientSet, SystemParams};
use crate::error::Result;
use crate::rates::{exchange_rates_raw, scheme_rates, JointFamily, JointTerms, PhaseRates, RatePair, Scheme, TimeAllocation};

use super::bisection::{bisect, golden_section_max, Bisection};
use super::{line_search, Candidate, SolveResult, SolverConfig};

/// Splits `span = t2 + t3` so that `R_X^(2) = R_Y^(3)` for fixed `t1, t4`.
/// `R_X^(2)` rises and `R_Y^(3)` falls in `t2`, so a larger `R_X^(2)` moves
/// the upper bound down.
pub(crate) fn equalize_exchange(
    t1: f64,
    t4: f64,
    span: f64,
    coeffs: &CoefficientSet,
    cfg: &SolverConfig,
) -> Bisection<(f64, f64)> {
    bisect(0.0, span, cfg.rate_tolerance, cfg.max_bisection_iters, |t2| {
        let t3 = (span - t2).max(0.0);
        let (r_x2, r_y3) = exchange_rates_raw(t1, t2, t3, t4, coeffs);
        (r_x2 - r_y3, (r_x2, r_y3))
    })
}

#[derive(Debug, Clone, Copy)]
struct Inner {
    t2: f64,
    t3: f64,
    r_x2: f64,
    r_y3: f64,
    t4a: f64,
    r_x4: f64,
    r_y4: f64,
    converged: bool,
}

/// Equal-split schemes at a fixed `t1`: bisection on `t4` until
/// `R_X^(2) = R_X^(4)`, each step re-equalizing the exchange phases.
fn equal_split_at_t1(t1: f64, budget: f64, coeffs: &CoefficientSet, family: JointFamily, cfg: &SolverConfig) -> Candidate {
    let rest = (budget - t1).max(0.0);
    let mut iterations = 0u64;
    let outer = bisect(0.0, rest, cfg.rate_tolerance, cfg.max_bisection_iters, |t4| {
        let span = (rest - t4).max(0.0);
        let exchange = equalize_exchange(t1, t4, span, coeffs, cfg);
        iterations += exchange.iterations;
        let t2 = exchange.point;
        let t3 = (span - t2).max(0.0);
        let (r_x2, r_y3) = exchange.state;
        let terms = JointTerms::new(t1, t2, t3, t4, coeffs, family, false);
        let (r_x4, r_y4) = terms.rates(t4 / 2.0, t4 / 2.0);
        let inner = Inner {
            t2,
            t3,
            r_x2,
            r_y3,
            t4a: t4 / 2.0,
            r_x4,
            r_y4,
            converged: exchange.converged,
        };
        (r_x4 - r_x2, inner)
    });
    finish(t1, outer, iterations)
}

/// DTB-JD at a fixed `t1`: as above, plus an innermost bisection on the
/// joint-slot split `t4a` until `R_X^(4) = R_Y^(4)`.
///
/// The `t4` step compares `min(R_X^(4), R_Y^(4))` with `R_X^(2)`. Whenever
/// the split equalizes the two joint rates this is the plain `R_X^(4)`
/// comparison; when it cannot (one overheard term alone exceeds what the
/// whole joint slot can add to the other user) the weaker user's joint rate
/// is the one that must meet the exchange rate.
fn dtb_jd_at_t1(t1: f64, budget: f64, coeffs: &CoefficientSet, cfg: &SolverConfig) -> Candidate {
    let rest = (budget - t1).max(0.0);
    let mut iterations = 0u64;
    let outer = bisect(0.0, rest, cfg.rate_tolerance, cfg.max_bisection_iters, |t4| {
        let span = (rest - t4).max(0.0);
        let exchange = equalize_exchange(t1, t4, span, coeffs, cfg);
        let t2 = exchange.point;
        let t3 = (span - t2).max(0.0);
        let (r_x2, r_y3) = exchange.state;
        let terms = JointTerms::new(t1, t2, t3, t4, coeffs, JointFamily::Dtb, true);
        let split = bisect(0.0, t4, cfg.rate_tolerance, cfg.max_bisection_iters, |t4a| {
            let (r_x4, r_y4) = terms.rates(t4a, (t4 - t4a).max(0.0));
            (r_x4 - r_y4, (r_x4, r_y4))
        });
        iterations += exchange.iterations + split.iterations;
        let (r_x4, r_y4) = split.state;
        let inner = Inner {
            t2,
            t3,
            r_x2,
            r_y3,
            t4a: split.point,
            r_x4,
            r_y4,
            converged: exchange.converged && split.converged,
        };
        (r_x4.min(r_y4) - r_x2, inner)
    });
    finish(t1, outer, iterations)
}

/// Joint-slot split that maximizes `min(R_X^(4), R_Y^(4))`: equal joint rates
/// when reachable, otherwise the whole slot goes to the weaker user.
fn balanced_split(terms: &JointTerms, t4: f64) -> f64 {
    if terms.per_time <= 0.0 {
        return t4 / 2.0;
    }
    let t4a = (t4 * terms.per_time + terms.overheard_y - terms.overheard_x) / (2.0 * terms.per_time);
    t4a.clamp(0.0, t4)
}

/// DTB-JD at a fixed `t1` without assuming that all four phase rates meet.
/// Golden-section search over `t4` and, inside it, over `t2`, with the
/// joint-slot split in closed form.
///
/// The equal-rate point is not always optimal here. When one user's
/// overheard exchange term already carries its whole message, that user
/// gets no joint-slot time and its exchange rate is slack.
fn dtb_jd_free_at_t1(t1: f64, budget: f64, coeffs: &CoefficientSet, cfg: &SolverConfig) -> Candidate {
    let rest = (budget - t1).max(0.0);
    let tol = 1e-10;
    let eval = |t2: f64, t4: f64| {
        let span = (rest - t4).max(0.0);
        let t2 = t2.clamp(0.0, span);
        let t3 = (span - t2).max(0.0);
        let (r_x2, r_y3) = exchange_rates_raw(t1, t2, t3, t4, coeffs);
        let terms = JointTerms::new(t1, t2, t3, t4, coeffs, JointFamily::Dtb, true);
        let t4a = balanced_split(&terms, t4);
        let (r_x4, r_y4) = terms.rates(t4a, (t4 - t4a).max(0.0));
        Inner {
            t2,
            t3,
            r_x2,
            r_y3,
            t4a,
            r_x4,
            r_y4,
            converged: true,
        }
    };
    let value = |s: &Inner| s.r_x2.min(s.r_y3).min(s.r_x4).min(s.r_y4);
    let mut iterations = 0u64;
    let best_t2 = |t4: f64, iterations: &mut u64| {
        let span = (rest - t4).max(0.0);
        let (t2, _) = golden_section_max(0.0, span, tol, |t2| {
            *iterations += 1;
            value(&eval(t2, t4))
        });
        eval(t2, t4)
    };
    let (t4, _) = golden_section_max(0.0, rest, tol, |t4| value(&best_t2(t4, &mut iterations)));
    let state = best_t2(t4, &mut iterations);
    let outer = Bisection {
        point: t4,
        state,
        iterations: 0,
        converged: true,
    };
    let mut c = finish(t1, outer, iterations);
    c.converged = c.rates.equal_rate_residual(Scheme::DtbJd) < cfg.rate_tolerance;
    c
}

fn finish(t1: f64, outer: Bisection<Inner>, inner_iterations: u64) -> Candidate {
    let t4 = outer.point;
    let s = outer.state;
    let allocation = TimeAllocation::from_parts(t1, s.t2, s.t3, s.t4a, (t4 - s.t4a).max(0.0));
    let rates = RatePair {
        r_x: s.r_x2.min(s.r_x4),
        r_y: s.r_y3.min(s.r_y4),
        phases: PhaseRates::Cooperative {
            r_x2: s.r_x2,
            r_y3: s.r_y3,
            r_x4: s.r_x4,
            r_y4: s.r_y4,
        },
    };
    Candidate {
        allocation,
        common: rates.r_x.min(rates.r_y),
        rates,
        converged: outer.converged && s.converged,
        iterations: outer.iterations + inner_iterations,
    }
}

fn solve_line(
    scheme: Scheme,
    coeffs: &CoefficientSet,
    params: &SystemParams,
    cfg: &SolverConfig,
    at_t1: impl Fn(f64, f64) -> Candidate + Sync + Send,
) -> Result<SolveResult> {
    params.validate()?;
    cfg.validate(params)?;
    if coeffs.is_degenerate() {
        return SolveResult::zero(scheme, params, coeffs);
    }
    let budget = params.time_budget();
    let (best, iterations) = line_search(params, cfg, |t1| at_t1(t1, budget));
    Ok(SolveResult {
        scheme,
        allocation: best.allocation,
        rates: best.rates,
        common: best.common,
        converged: best.converged,
        iterations,
        achievable_only: false,
    })
}

/// Optimal common throughput of STBC cooperation without joint decoding.
pub fn solve_stbc_njd(coeffs: &CoefficientSet, params: &SystemParams, cfg: &SolverConfig) -> Result<SolveResult> {
    solve_line(Scheme::StbcNjd, coeffs, params, cfg, |t1, budget| {
        equal_split_at_t1(t1, budget, coeffs, JointFamily::Stbc, cfg)
    })
}

/// Optimal common throughput of DTB cooperation without joint decoding.
/// The joint slot is always split evenly.
pub fn solve_dtb_njd(coeffs: &CoefficientSet, params: &SystemParams, cfg: &SolverConfig) -> Result<SolveResult> {
    solve_line(Scheme::DtbNjd, coeffs, params, cfg, |t1, budget| {
        equal_split_at_t1(t1, budget, coeffs, JointFamily::Dtb, cfg)
    })
}

/// Achievable STBC-JD throughput: the STBC-NJD allocation re-evaluated with
/// the joint-decoding rates. Not optimal in general.
pub fn solve_stbc_jd(coeffs: &CoefficientSet, params: &SystemParams, cfg: &SolverConfig) -> Result<SolveResult> {
    let njd = solve_stbc_njd(coeffs, params, cfg)?;
    let rates = scheme_rates(&njd.allocation, coeffs, Scheme::StbcJd)?;
    Ok(SolveResult {
        scheme: Scheme::StbcJd,
        rates,
        common: rates.r_x.min(rates.r_y),
        achievable_only: true,
        ..njd
    })
}

/// Optimal common throughput of DTB cooperation with joint decoding, where
/// the joint slot split is free. Each `t1` keeps the better of the
/// equal-rate bisection and an unconstrained search; a result that only the
/// latter reaches is not an equal-rate point and reports `converged = false`.
pub fn solve_dtb_jd(coeffs: &CoefficientSet, params: &SystemParams, cfg: &SolverConfig) -> Result<SolveResult> {
    let mut best = solve_line(Scheme::DtbJd, coeffs, params, cfg, |t1, budget| {
        let equal = dtb_jd_at_t1(t1, budget, coeffs, cfg);
        let free = dtb_jd_free_at_t1(t1, budget, coeffs, cfg);
        let iterations = equal.iterations + free.iterations;
        let best = if free.common > equal.common { free } else { equal };
        Candidate { iterations, ..best }
    })?;
    // Joint decoding only adds rate, so the DTB-NJD optimum is a floor.
    let njd = solve_dtb_njd(coeffs, params, cfg)?;
    let rates = scheme_rates(&njd.allocation, coeffs, Scheme::DtbJd)?;
    let common = rates.r_x.min(rates.r_y);
    best.iterations += njd.iterations;
    if common > best.common {
        best = SolveResult {
            scheme: Scheme::DtbJd,
            allocation: njd.allocation,
            rates,
            common,
            converged: rates.equal_rate_residual(Scheme::DtbJd) < cfg.rate_tolerance,
            iterations: best.iterations,
            achievable_only: false,
        };
    }
    Ok(best)
}
