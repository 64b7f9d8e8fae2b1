//! Solvers for the relay and non-cooperative benchmarks.

use crate::channel::{coefficients, ChannelSet, CoefficientSet, SystemParams};
use crate::error::Result;
use crate::exec::map_indices;
use crate::rates::{direct_rates_raw, RelayDirection, RelayTerms, Scheme, TimeAllocation};

use super::bisection::bisect;
use super::{line_search, Candidate, SolveResult, SolverConfig};

fn relay_scheme(direction: RelayDirection, jd: bool) -> Scheme {
    if jd {
        Scheme::RelayJd(direction)
    } else {
        Scheme::RelayNjd(direction)
    }
}

/// Best split of the relay slot for fixed `(t1, t2)`: bisection on the
/// forwarding time until the two users' rates meet.
fn relay_point(t1: f64, t2: f64, relay_slot: f64, coeffs: &CoefficientSet, direction: RelayDirection, jd: bool, cfg: &SolverConfig) -> Candidate {
    let terms = RelayTerms::new(t1, t2, relay_slot, coeffs, direction, jd);
    let split = bisect(0.0, relay_slot, cfg.rate_tolerance, cfg.max_bisection_iters, |forwarding| {
        let pair = terms.rates(forwarding, (relay_slot - forwarding).max(0.0));
        // the source user's rate grows with forwarding time, the relay's shrinks
        let (source, relay) = match direction {
            RelayDirection::YviaX => (pair.r_y, pair.r_x),
            RelayDirection::XviaY => (pair.r_x, pair.r_y),
        };
        (source - relay, pair)
    });
    let forwarding = split.point;
    let rates = split.state;
    Candidate {
        allocation: TimeAllocation::from_parts(t1, t2, 0.0, forwarding, (relay_slot - forwarding).max(0.0)),
        common: rates.r_x.min(rates.r_y),
        rates,
        converged: split.converged,
        iterations: split.iterations,
    }
}

/// Relay benchmark in one direction: grid over `(t1, t2)` at the line-search
/// step, bisection on the relay-slot split at each grid point.
pub fn solve_relay_coefficients(
    coeffs: &CoefficientSet,
    params: &SystemParams,
    direction: RelayDirection,
    jd: bool,
    cfg: &SolverConfig,
) -> Result<SolveResult> {
    params.validate()?;
    cfg.validate(params)?;
    let scheme = relay_scheme(direction, jd);
    if coeffs.is_degenerate() {
        return SolveResult::zero(scheme, params, coeffs);
    }
    let budget = params.time_budget();
    let step = cfg.t1_step;
    let steps = (budget / step + 1e-9).floor() as usize;
    let rows = map_indices(steps, cfg.execution, |i| {
        let t1 = (i + 1) as f64 * step;
        let mut best: Option<Candidate> = None;
        let mut iterations = 0u64;
        let mut j = 1;
        loop {
            let t2 = j as f64 * step;
            let relay_slot = budget - t1 - t2;
            if relay_slot <= 0.0 {
                break;
            }
            let c = relay_point(t1, t2, relay_slot, coeffs, direction, jd, cfg);
            iterations += c.iterations;
            if best.is_none_or(|b| c.common > b.common) {
                best = Some(c);
            }
            j += 1;
        }
        (best, iterations)
    });
    let iterations = rows.iter().map(|r| r.1).sum();
    let mut best: Option<Candidate> = None;
    for c in rows.into_iter().filter_map(|r| r.0) {
        if best.is_none_or(|b| c.common > b.common) {
            best = Some(c);
        }
    }
    let Some(best) = best else {
        return SolveResult::zero(scheme, params, coeffs);
    };
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

pub fn solve_relay(
    params: &SystemParams,
    channels: &ChannelSet,
    direction: RelayDirection,
    jd: bool,
    cfg: &SolverConfig,
) -> Result<SolveResult> {
    let coeffs = coefficients(params, channels)?;
    solve_relay_coefficients(&coeffs, params, direction, jd, cfg)
}

/// The better of the two relay directions (ties go to `Y -> X -> D`).
/// `iterations` counts the work of both searches.
pub fn solve_relay_best(coeffs: &CoefficientSet, params: &SystemParams, jd: bool, cfg: &SolverConfig) -> Result<SolveResult> {
    let yx = solve_relay_coefficients(coeffs, params, RelayDirection::YviaX, jd, cfg)?;
    let xy = solve_relay_coefficients(coeffs, params, RelayDirection::XviaY, jd, cfg)?;
    let iterations = yx.iterations + xy.iterations;
    let best = if xy.common > yx.common { xy } else { yx };
    Ok(SolveResult { iterations, ..best })
}

/// TDMA benchmark: line search over `t1`, bisection on `t2` until both
/// users' direct rates meet.
pub fn solve_noncoop_coefficients(coeffs: &CoefficientSet, params: &SystemParams, cfg: &SolverConfig) -> Result<SolveResult> {
    params.validate()?;
    cfg.validate(params)?;
    if coeffs.is_degenerate() {
        return SolveResult::zero(Scheme::NonCoop, params, coeffs);
    }
    let budget = params.time_budget();
    let (best, iterations) = line_search(params, cfg, |t1| {
        let rest = (budget - t1).max(0.0);
        let split = bisect(0.0, rest, cfg.rate_tolerance, cfg.max_bisection_iters, |t2| {
            let pair = direct_rates_raw(t1, t2, (rest - t2).max(0.0), coeffs);
            (pair.r_x - pair.r_y, pair)
        });
        let rates = split.state;
        Candidate {
            allocation: TimeAllocation::from_parts(t1, split.point, (rest - split.point).max(0.0), 0.0, 0.0),
            common: rates.r_x.min(rates.r_y),
            rates,
            converged: split.converged,
            iterations: split.iterations,
        }
    });
    Ok(SolveResult {
        scheme: Scheme::NonCoop,
        allocation: best.allocation,
        rates: best.rates,
        common: best.common,
        converged: best.converged,
        iterations,
        achievable_only: false,
    })
}

pub fn solve_noncoop(params: &SystemParams, channels: &ChannelSet, cfg: &SolverConfig) -> Result<SolveResult> {
    let coeffs = coefficients(params, channels)?;
    solve_noncoop_coefficients(&coeffs, params, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Execution;
    use crate::rates::scheme_rates;

    fn cfg() -> SolverConfig {
        SolverConfig {
            t1_step: 1e-2,
            execution: Execution::Sequential,
            ..Default::default()
        }
    }

    #[test]
    fn severed_relay_link_gives_zero() {
        // rho3 carries h_xd: X cannot reach the DN
        let c = CoefficientSet::new(20.0, 20.0, 0.0, 3.0).unwrap();
        let r = solve_relay_coefficients(&c, &SystemParams::default(), RelayDirection::YviaX, false, &cfg()).unwrap();
        assert_eq!(r.common, 0.0);
    }

    #[test]
    fn relay_jd_dominates_njd() {
        let c = CoefficientSet::new(20.0, 15.0, 2.0, 0.7).unwrap();
        let p = SystemParams::default();
        for d in RelayDirection::BOTH {
            let njd = solve_relay_coefficients(&c, &p, d, false, &cfg()).unwrap();
            let jd = solve_relay_coefficients(&c, &p, d, true, &cfg()).unwrap();
            assert!(jd.common >= njd.common - 1e-9);
            jd.allocation.validate(p.ce_overhead).unwrap();
            let check = scheme_rates(&jd.allocation, &c, jd.scheme).unwrap();
            assert!((check.r_x.min(check.r_y) - jd.common).abs() < 1e-12);
        }
    }

    #[test]
    fn noncoop_zero_dn_link() {
        let c = CoefficientSet::new(5.0, 5.0, 0.0, 3.0).unwrap();
        let r = solve_noncoop_coefficients(&c, &SystemParams::default(), &cfg()).unwrap();
        assert!(r.common < 1e-7);
    }

    #[test]
    fn noncoop_symmetric_split() {
        let c = CoefficientSet::new(1.0, 1.0, 4.0, 4.0).unwrap();
        let r = solve_noncoop_coefficients(&c, &SystemParams::default(), &cfg()).unwrap();
        assert!((r.allocation.t2() - r.allocation.t3()).abs() < 1e-6);
        assert!(r.converged);
    }

    #[test]
    fn best_direction_is_the_maximum() {
        let c = CoefficientSet::new(3.0, 40.0, 6.0, 0.2).unwrap();
        let p = SystemParams::default();
        let best = solve_relay_best(&c, &p, false, &cfg()).unwrap();
        for d in RelayDirection::BOTH {
            let one = solve_relay_coefficients(&c, &p, d, false, &cfg()).unwrap();
            assert!(best.common >= one.common);
        }
    }
}
