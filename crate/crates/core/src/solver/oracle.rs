//! Brute-force reference: exhaustive enumeration of a uniform grid over each
//! scheme's allocation simplex.
//!
//! Free coordinates per scheme (the last phase takes the remainder):
//!
//! | scheme                      | enumerated                  | remainder |
//! |-----------------------------|-----------------------------|-----------|
//! | STBC-NJD, STBC-JD, DTB-NJD  | `t1, t2, t3`                | `t4`, split evenly |
//! | DTB-JD                      | `t1, t2, t3, t4a`           | `t4b`     |
//! | relay                       | `t1, t2, t3^(1)`            | `t3^(2)`  |
//! | non-cooperative             | `t1, t2`                    | `t3`      |
//!
//! STBC-JD mirrors its solver: the grid maximizes the STBC-NJD objective and
//! the joint-decoding rates are reported at that point. Among maximizers the
//! lexicographically smallest allocation wins.

use crate::channel::{coefficients, ChannelSet, CoefficientSet, SystemParams};
use crate::error::{domain, Error, Result};
use crate::exec::{map_indices, Execution};
use crate::rates::{
    direct_rates_raw, exchange_rates_raw, scheme_rates, JointFamily, JointTerms, RelayDirection, RelayTerms, Scheme,
    TimeAllocation,
};

use super::SolveResult;

pub const MAX_GRID_STEP: f64 = 0.1;

struct Grid {
    step: f64,
    units: usize,
    budget: f64,
}

impl Grid {
    fn new(step: f64, budget: f64) -> Result<Self> {
        if !(step > 0.0 && step.is_finite()) {
            return domain(format!("grid step must be positive, got {step}"));
        }
        if step > MAX_GRID_STEP {
            return Err(Error::GridTooCoarse(step));
        }
        let units = (budget / step + 1e-9).floor() as usize;
        if units < 2 {
            return Err(Error::GridTooCoarse(step));
        }
        Ok(Grid { step, units, budget })
    }

    fn at(&self, k: usize) -> f64 {
        k as f64 * self.step
    }

    fn remainder(&self, used: usize) -> f64 {
        (self.budget - self.at(used)).max(0.0)
    }
}

#[derive(Default)]
struct Best {
    value: f64,
    allocation: Option<TimeAllocation>,
    points: u64,
}

impl Best {
    #[inline]
    fn offer(&mut self, value: f64, make: impl FnOnce() -> TimeAllocation) {
        self.points += 1;
        if self.allocation.is_none() || value > self.value {
            self.value = value;
            self.allocation = Some(make());
        }
    }

    fn merge(rows: Vec<Best>) -> Best {
        let mut out = Best::default();
        for row in rows {
            out.points += row.points;
            if let Some(a) = row.allocation {
                if out.allocation.is_none() || row.value > out.value {
                    out.value = row.value;
                    out.allocation = Some(a);
                }
            }
        }
        out
    }
}

fn equal_split_row(grid: &Grid, a: usize, coeffs: &CoefficientSet, family: JointFamily) -> Best {
    let t1 = grid.at(a);
    let mut best = Best::default();
    for b in 0..=grid.units - a {
        let t2 = grid.at(b);
        for c in 0..=grid.units - a - b {
            let t3 = grid.at(c);
            let t4 = grid.remainder(a + b + c);
            let (r_x2, r_y3) = exchange_rates_raw(t1, t2, t3, t4, coeffs);
            let (r_x4, r_y4) = JointTerms::new(t1, t2, t3, t4, coeffs, family, false).rates(t4 / 2.0, t4 / 2.0);
            let value = r_x2.min(r_y3).min(r_x4).min(r_y4);
            best.offer(value, || TimeAllocation::from_parts(t1, t2, t3, t4 / 2.0, t4 / 2.0));
        }
    }
    best
}

fn dtb_jd_row(grid: &Grid, a: usize, coeffs: &CoefficientSet) -> Best {
    let t1 = grid.at(a);
    let mut best = Best::default();
    for b in 0..=grid.units - a {
        let t2 = grid.at(b);
        for c in 0..=grid.units - a - b {
            let t3 = grid.at(c);
            let t4 = grid.remainder(a + b + c);
            let (r_x2, r_y3) = exchange_rates_raw(t1, t2, t3, t4, coeffs);
            let exchange = r_x2.min(r_y3);
            let terms = JointTerms::new(t1, t2, t3, t4, coeffs, JointFamily::Dtb, true);
            for d in 0..=grid.units - a - b - c {
                let t4a = grid.at(d);
                let t4b = (t4 - t4a).max(0.0);
                let (r_x4, r_y4) = terms.rates(t4a, t4b);
                best.offer(exchange.min(r_x4).min(r_y4), || TimeAllocation::from_parts(t1, t2, t3, t4a, t4b));
            }
        }
    }
    best
}

fn relay_row(grid: &Grid, a: usize, coeffs: &CoefficientSet, direction: RelayDirection, jd: bool) -> Best {
    let t1 = grid.at(a);
    let mut best = Best::default();
    for b in 0..=grid.units - a {
        let t2 = grid.at(b);
        let relay_slot = grid.remainder(a + b);
        let terms = RelayTerms::new(t1, t2, relay_slot, coeffs, direction, jd);
        for c in 0..=grid.units - a - b {
            let forwarding = grid.at(c);
            let own = grid.remainder(a + b + c);
            let pair = terms.rates(forwarding, own);
            best.offer(pair.r_x.min(pair.r_y), || TimeAllocation::from_parts(t1, t2, 0.0, forwarding, own));
        }
    }
    best
}

fn noncoop_row(grid: &Grid, a: usize, coeffs: &CoefficientSet) -> Best {
    let t1 = grid.at(a);
    let mut best = Best::default();
    for b in 0..=grid.units - a {
        let t2 = grid.at(b);
        let t3 = grid.remainder(a + b);
        let pair = direct_rates_raw(t1, t2, t3, coeffs);
        best.offer(pair.r_x.min(pair.r_y), || TimeAllocation::from_parts(t1, t2, t3, 0.0, 0.0));
    }
    best
}

pub fn oracle_grid_coefficients(
    scheme: Scheme,
    coeffs: &CoefficientSet,
    params: &SystemParams,
    grid_step: f64,
    execution: Execution,
) -> Result<SolveResult> {
    params.validate()?;
    let grid = Grid::new(grid_step, params.time_budget())?;
    let rows = map_indices(grid.units + 1, execution, |a| match scheme {
        Scheme::StbcNjd | Scheme::StbcJd => equal_split_row(&grid, a, coeffs, JointFamily::Stbc),
        Scheme::DtbNjd => equal_split_row(&grid, a, coeffs, JointFamily::Dtb),
        Scheme::DtbJd => dtb_jd_row(&grid, a, coeffs),
        Scheme::RelayNjd(d) => relay_row(&grid, a, coeffs, d, false),
        Scheme::RelayJd(d) => relay_row(&grid, a, coeffs, d, true),
        Scheme::NonCoop => noncoop_row(&grid, a, coeffs),
    });
    let best = Best::merge(rows);
    let allocation = best.allocation.ok_or(Error::GridTooCoarse(grid_step))?;
    let rates = scheme_rates(&allocation, coeffs, scheme)?;
    Ok(SolveResult {
        scheme,
        allocation,
        rates,
        common: rates.r_x.min(rates.r_y),
        converged: true,
        iterations: best.points,
        achievable_only: scheme == Scheme::StbcJd,
    })
}

pub fn oracle_grid(scheme: Scheme, params: &SystemParams, channels: &ChannelSet, grid_step: f64) -> Result<SolveResult> {
    let coeffs = coefficients(params, channels)?;
    oracle_grid_coefficients(scheme, &coeffs, params, grid_step, Execution::default())
}

/// Grid reference for the relay benchmark reported as the better direction.
pub fn oracle_relay_best(
    coeffs: &CoefficientSet,
    params: &SystemParams,
    jd: bool,
    grid_step: f64,
    execution: Execution,
) -> Result<SolveResult> {
    let make = |d| if jd { Scheme::RelayJd(d) } else { Scheme::RelayNjd(d) };
    let yx = oracle_grid_coefficients(make(RelayDirection::YviaX), coeffs, params, grid_step, execution)?;
    let xy = oracle_grid_coefficients(make(RelayDirection::XviaY), coeffs, params, grid_step, execution)?;
    let points = yx.iterations + xy.iterations;
    let best = if xy.common > yx.common { xy } else { yx };
    Ok(SolveResult { iterations: points, ..best })
}
