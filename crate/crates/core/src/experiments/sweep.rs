//! Parameter sweeps over one channel family, as in the figure experiments.

use std::fmt;
use std::str::FromStr;

use crate::channel::{coefficients, path_loss_gain, ChannelSet, CoefficientSet, Geometry, SystemParams};
use crate::error::{Error, Result};
use crate::exec::{map_indices, Execution};
use crate::rates::Scheme;
use crate::solver::{
    oracle_grid_coefficients, oracle_relay_best, solve_relay_best, solve_with_coefficients, SolveResult, SolverConfig,
};

use super::config::{GainOverrides, RunConfig};

/// Default number of points per built-in sweep.
pub const DEFAULT_POINTS: usize = 25;

/// A scheme as requested on the command line or in a sweep. Relay rows in
/// sweeps use the better of the two relay directions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeSelection {
    Single(Scheme),
    BestRelay { jd: bool },
}

impl SchemeSelection {
    /// The seven curves of every figure.
    pub fn figure_set() -> Vec<SchemeSelection> {
        let mut all: Vec<_> = Scheme::COOPERATIVE.into_iter().map(SchemeSelection::Single).collect();
        all.push(SchemeSelection::BestRelay { jd: false });
        all.push(SchemeSelection::BestRelay { jd: true });
        all.push(SchemeSelection::Single(Scheme::NonCoop));
        all
    }

    pub fn tag(self) -> String {
        match self {
            SchemeSelection::Single(s) => s.tag(),
            SchemeSelection::BestRelay { jd: false } => "relay-njd".into(),
            SchemeSelection::BestRelay { jd: true } => "relay-jd".into(),
        }
    }

    pub fn solve(self, coeffs: &CoefficientSet, params: &SystemParams, cfg: &SolverConfig) -> Result<SolveResult> {
        match self {
            SchemeSelection::Single(s) => solve_with_coefficients(s, coeffs, params, cfg),
            SchemeSelection::BestRelay { jd } => solve_relay_best(coeffs, params, jd, cfg),
        }
    }

    pub fn oracle(
        self,
        coeffs: &CoefficientSet,
        params: &SystemParams,
        grid_step: f64,
        execution: Execution,
    ) -> Result<SolveResult> {
        match self {
            SchemeSelection::Single(s) => oracle_grid_coefficients(s, coeffs, params, grid_step, execution),
            SchemeSelection::BestRelay { jd } => oracle_relay_best(coeffs, params, jd, grid_step, execution),
        }
    }
}

impl fmt::Display for SchemeSelection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tag())
    }
}

impl FromStr for SchemeSelection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "relay-njd" => Ok(SchemeSelection::BestRelay { jd: false }),
            "relay-jd" => Ok(SchemeSelection::BestRelay { jd: true }),
            other => other.parse().map(SchemeSelection::Single),
        }
    }
}

impl From<Scheme> for SchemeSelection {
    fn from(s: Scheme) -> Self {
        SchemeSelection::Single(s)
    }
}

/// Which channel family a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepKind {
    /// Common user-to-DN distance in meters; sets `h_xd = h_yd`.
    UserToDnDistance,
    /// `h_yd / h_xd` in dB with `h_yd` held fixed.
    DnChannelDisparityDb,
    /// `h_ex / h_ey` in dB with `h_ex` held fixed.
    EnChannelDisparityDb,
    /// Distance between the users in meters; sets `h_xy = h_yx`.
    InterUserDistance,
}

impl SweepKind {
    pub const ALL: [SweepKind; 4] = [
        SweepKind::UserToDnDistance,
        SweepKind::DnChannelDisparityDb,
        SweepKind::EnChannelDisparityDb,
        SweepKind::InterUserDistance,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SweepKind::UserToDnDistance => "user_to_dn_distance",
            SweepKind::DnChannelDisparityDb => "dn_channel_disparity_db",
            SweepKind::EnChannelDisparityDb => "en_channel_disparity_db",
            SweepKind::InterUserDistance => "inter_user_distance",
        }
    }

    /// Output file name of the built-in figure for this kind.
    pub fn figure_file(self) -> &'static str {
        match self {
            SweepKind::UserToDnDistance => "fig6.csv",
            SweepKind::DnChannelDisparityDb => "fig7.csv",
            SweepKind::EnChannelDisparityDb => "fig8.csv",
            SweepKind::InterUserDistance => "fig9.csv",
        }
    }

    /// Built-in range of the figure.
    pub fn default_range(self) -> (f64, f64) {
        match self {
            SweepKind::UserToDnDistance => (25.0, 85.0),
            SweepKind::DnChannelDisparityDb => (0.0, 10.0),
            SweepKind::EnChannelDisparityDb => (0.0, 12.0),
            SweepKind::InterUserDistance => (1.0, 10.0),
        }
    }

    fn is_distance(self) -> bool {
        matches!(self, SweepKind::UserToDnDistance | SweepKind::InterUserDistance)
    }
}

impl fmt::Display for SweepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "user_to_dn_distance" | "fig6" => Ok(SweepKind::UserToDnDistance),
            "dn_channel_disparity_db" | "fig7" => Ok(SweepKind::DnChannelDisparityDb),
            "en_channel_disparity_db" | "fig8" => Ok(SweepKind::EnChannelDisparityDb),
            "inter_user_distance" | "fig9" => Ok(SweepKind::InterUserDistance),
            other => Err(Error::Config(format!("unknown sweep_kind `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub kind: SweepKind,
    pub start: f64,
    pub stop: f64,
    pub num_points: usize,
    pub params: SystemParams,
    /// Base instance: geometry-derived gains with explicit overrides. The
    /// swept family is replaced at every point.
    pub geometry: Geometry,
    pub gains: GainOverrides,
    pub schemes: Vec<SchemeSelection>,
}

impl SweepSpec {
    /// The built-in figure sweep of `kind` on the default instance.
    pub fn figure(kind: SweepKind) -> Self {
        let (start, stop) = kind.default_range();
        SweepSpec {
            kind,
            start,
            stop,
            num_points: DEFAULT_POINTS,
            params: SystemParams::default(),
            geometry: Geometry::default(),
            gains: GainOverrides::default(),
            schemes: SchemeSelection::figure_set(),
        }
    }

    /// Sweep described by a config. `sweep_kind` is required; range, point
    /// count and schemes default to the built-in figure.
    pub fn from_config(cfg: &RunConfig) -> Result<Self> {
        let kind = cfg
            .sweep
            .kind
            .ok_or_else(|| Error::Config("sweep requires the `sweep_kind` key".into()))?;
        Self::from_config_with_kind(cfg, kind)
    }

    /// Like [`SweepSpec::from_config`] but for a given kind. The range keys
    /// only apply when the config names the same kind.
    pub fn from_config_with_kind(cfg: &RunConfig, kind: SweepKind) -> Result<Self> {
        let mut spec = SweepSpec::figure(kind);
        spec.params = cfg.params;
        spec.geometry = cfg.geometry;
        spec.gains = cfg.gains;
        if cfg.sweep.kind == Some(kind) {
            spec.start = cfg.sweep.start.unwrap_or(spec.start);
            spec.stop = cfg.sweep.stop.unwrap_or(spec.stop);
        }
        spec.num_points = cfg.sweep.points.unwrap_or(spec.num_points);
        if let Some(schemes) = &cfg.sweep.schemes {
            spec.schemes = schemes.clone();
        }
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.start.is_finite() && self.stop.is_finite() && self.start < self.stop) {
            return Err(Error::Config(format!(
                "sweep range needs start < stop, got {} .. {}",
                self.start, self.stop
            )));
        }
        if self.num_points < 2 {
            return Err(Error::Config(format!("sweep_points must be at least 2, got {}", self.num_points)));
        }
        if self.kind.is_distance() && self.start <= 0.0 {
            return Err(Error::Config(format!("{} sweep must start above 0 m", self.kind)));
        }
        if self.schemes.is_empty() {
            return Err(Error::Config("sweep needs at least one scheme".into()));
        }
        self.params.validate()?;
        self.base_channels()?;
        Ok(())
    }

    /// Evenly spaced sweep values, ending exactly at `stop`.
    pub fn values(&self) -> Vec<f64> {
        let n = self.num_points;
        (0..n)
            .map(|i| {
                if i + 1 == n {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * i as f64 / (n - 1) as f64
                }
            })
            .collect()
    }

    fn base_channels(&self) -> Result<ChannelSet> {
        self.gains.apply(ChannelSet::from_geometry(&self.geometry)?)
    }

    /// Channel gains at one sweep value.
    pub fn channels_at(&self, value: f64) -> Result<ChannelSet> {
        let mut ch = self.base_channels()?;
        match self.kind {
            SweepKind::UserToDnDistance => {
                let h = path_loss_gain(value, &self.geometry)?;
                ch.h_xd = h;
                ch.h_yd = h;
            }
            SweepKind::DnChannelDisparityDb => ch.h_xd = ch.h_yd / db_to_ratio(value),
            SweepKind::EnChannelDisparityDb => ch.h_ey = ch.h_ex / db_to_ratio(value),
            SweepKind::InterUserDistance => {
                let h = path_loss_gain(value, &self.geometry)?;
                ch.h_xy = h;
                ch.h_yx = h;
            }
        }
        ch.validate()?;
        Ok(ch)
    }

    /// Schemes in output order (by tag), without duplicates.
    pub fn ordered_schemes(&self) -> Vec<SchemeSelection> {
        let mut list = self.schemes.clone();
        list.sort_by_key(|s| s.tag());
        list.dedup();
        list
    }
}

pub fn db_to_ratio(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// One CSV row: a scheme's solution at one sweep value.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub sweep_value: f64,
    pub scheme: String,
    pub common: f64,
    pub t1: f64,
    pub t2: f64,
    pub t3: f64,
    pub t4a: f64,
    pub t4b: f64,
    pub r_x: f64,
    pub r_y: f64,
    pub converged: bool,
}

impl SweepRow {
    pub fn from_result(sweep_value: f64, scheme: String, r: &SolveResult) -> Self {
        let [t1, t2, t3, t4a, t4b] = r.allocation.parts();
        SweepRow {
            sweep_value,
            scheme,
            common: r.common,
            t1,
            t2,
            t3,
            t4a,
            t4b,
            r_x: r.rates.r_x,
            r_y: r.rates.r_y,
            converged: r.converged,
        }
    }

    /// A point that could not be solved. Numbers are NaN.
    pub fn unsolved(sweep_value: f64, scheme: String) -> Self {
        SweepRow {
            sweep_value,
            scheme,
            common: f64::NAN,
            t1: f64::NAN,
            t2: f64::NAN,
            t3: f64::NAN,
            t4a: f64::NAN,
            t4b: f64::NAN,
            r_x: f64::NAN,
            r_y: f64::NAN,
            converged: false,
        }
    }
}

/// Solves every scheme at every sweep value. Rows come back ordered by
/// `(sweep_value, scheme tag)` whatever the execution mode. A point that
/// fails to solve yields an unconverged row instead of an error.
pub fn run_sweep(spec: &SweepSpec, cfg: &SolverConfig) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    cfg.validate(&spec.params)?;
    let values = spec.values();
    let schemes = spec.ordered_schemes();
    let per_point = schemes.len();
    let rows = map_indices(values.len() * per_point, cfg.execution, |i| {
        let value = values[i / per_point];
        let scheme = schemes[i % per_point];
        let solved = spec
            .channels_at(value)
            .and_then(|ch| coefficients(&spec.params, &ch))
            .and_then(|c| scheme.solve(&c, &spec.params, cfg));
        match solved {
            Ok(r) => SweepRow::from_result(value, scheme.tag(), &r),
            Err(_) => SweepRow::unsolved(value, scheme.tag()),
        }
    });
    Ok(rows)
}
