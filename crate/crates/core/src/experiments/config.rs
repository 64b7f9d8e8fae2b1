//! Line-oriented `key=value` configuration.
//!
//! Blank lines are ignored and `#` starts a comment. Keys are the snake_case
//! field names of [`SystemParams`], [`Geometry`], [`ChannelSet`],
//! [`SolverConfig`] and the sweep settings. A gain key overrides the gain
//! the geometry would give for that link.

use std::path::Path;
use std::str::FromStr;

use crate::channel::{ChannelSet, Geometry, SystemParams};
use crate::error::{Error, Result};
use crate::solver::SolverConfig;

use super::sweep::{SchemeSelection, SweepKind};

/// Every key the parser accepts, in documentation order.
pub const KEYS: &[&str] = &[
    "en_power_watts",
    "harvest_efficiency",
    "noise_power_watts",
    "ce_overhead",
    "d_en_x",
    "d_en_y",
    "d_xy",
    "d_xd",
    "d_yd",
    "carrier_hz",
    "path_loss_exponent",
    "antenna_gain",
    "h_ex",
    "h_ey",
    "h_xy",
    "h_yx",
    "h_xd",
    "h_yd",
    "t1_step",
    "rate_tolerance",
    "max_bisection_iters",
    "oracle_grid_step",
    "refine_t1",
    "sweep_kind",
    "sweep_start",
    "sweep_stop",
    "sweep_points",
    "schemes",
];

/// Explicit link gains. `None` means "derive from geometry".
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct GainOverrides {
    pub h_ex: Option<f64>,
    pub h_ey: Option<f64>,
    pub h_xy: Option<f64>,
    pub h_yx: Option<f64>,
    pub h_xd: Option<f64>,
    pub h_yd: Option<f64>,
}

impl GainOverrides {
    pub fn apply(&self, base: ChannelSet) -> Result<ChannelSet> {
        let set = ChannelSet {
            h_ex: self.h_ex.unwrap_or(base.h_ex),
            h_ey: self.h_ey.unwrap_or(base.h_ey),
            h_xy: self.h_xy.unwrap_or(base.h_xy),
            h_yx: self.h_yx.unwrap_or(base.h_yx),
            h_xd: self.h_xd.unwrap_or(base.h_xd),
            h_yd: self.h_yd.unwrap_or(base.h_yd),
        };
        set.validate()?;
        Ok(set)
    }
}

/// Sweep settings as read from a config. Unset fields fall back to the
/// built-in figure defaults for the chosen kind.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepSettings {
    pub kind: Option<SweepKind>,
    pub start: Option<f64>,
    pub stop: Option<f64>,
    pub points: Option<usize>,
    pub schemes: Option<Vec<SchemeSelection>>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunConfig {
    pub params: SystemParams,
    pub geometry: Geometry,
    pub gains: GainOverrides,
    pub solver: SolverConfig,
    pub sweep: SweepSettings,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = RunConfig::default();
        let mut seen: Vec<String> = Vec::new();
        for (index, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key=value, got `{line}`", index + 1)))?;
            let key = key.trim();
            if seen.iter().any(|k| k == key) {
                return Err(Error::Config(format!("line {}: duplicate key `{key}`", index + 1)));
            }
            cfg.set(key, value.trim())?;
            seen.push(key.to_string());
        }
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Sets one key. Later calls win, which is how command-line overrides
    /// are layered over a file.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "en_power_watts" => self.params.en_power_watts = number(key, value)?,
            "harvest_efficiency" => self.params.harvest_efficiency = number(key, value)?,
            "noise_power_watts" => self.params.noise_power_watts = number(key, value)?,
            "ce_overhead" => self.params.ce_overhead = number(key, value)?,
            "d_en_x" => self.geometry.d_en_x = number(key, value)?,
            "d_en_y" => self.geometry.d_en_y = number(key, value)?,
            "d_xy" => self.geometry.d_xy = number(key, value)?,
            "d_xd" => self.geometry.d_xd = number(key, value)?,
            "d_yd" => self.geometry.d_yd = number(key, value)?,
            "carrier_hz" => self.geometry.carrier_hz = number(key, value)?,
            "path_loss_exponent" => self.geometry.path_loss_exponent = number(key, value)?,
            "antenna_gain" => self.geometry.antenna_gain = number(key, value)?,
            "h_ex" => self.gains.h_ex = Some(number(key, value)?),
            "h_ey" => self.gains.h_ey = Some(number(key, value)?),
            "h_xy" => self.gains.h_xy = Some(number(key, value)?),
            "h_yx" => self.gains.h_yx = Some(number(key, value)?),
            "h_xd" => self.gains.h_xd = Some(number(key, value)?),
            "h_yd" => self.gains.h_yd = Some(number(key, value)?),
            "t1_step" => self.solver.t1_step = number(key, value)?,
            "rate_tolerance" => self.solver.rate_tolerance = number(key, value)?,
            "max_bisection_iters" => self.solver.max_bisection_iters = number(key, value)?,
            "oracle_grid_step" => self.solver.oracle_grid_step = number(key, value)?,
            "refine_t1" => self.solver.refine_t1 = number(key, value)?,
            "sweep_kind" => self.sweep.kind = Some(number(key, value)?),
            "sweep_start" => self.sweep.start = Some(number(key, value)?),
            "sweep_stop" => self.sweep.stop = Some(number(key, value)?),
            "sweep_points" => self.sweep.points = Some(number(key, value)?),
            "schemes" => {
                let list = value
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(SchemeSelection::from_str)
                    .collect::<Result<Vec<_>>>()?;
                if list.is_empty() {
                    return Err(Error::Config("schemes must list at least one scheme".into()));
                }
                self.sweep.schemes = Some(list);
            }
            _ => return Err(Error::UnknownKey(key.to_string())),
        }
        Ok(())
    }

    /// Applies a `key=value` override string.
    pub fn set_pair(&mut self, pair: &str) -> Result<()> {
        let (key, value) = pair
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("expected key=value, got `{pair}`")))?;
        self.set(key.trim(), value.trim())
    }

    /// Geometry-derived gains with any explicit gains laid over them.
    pub fn channels(&self) -> Result<ChannelSet> {
        self.gains.apply(ChannelSet::from_geometry(&self.geometry)?)
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        self.solver.validate(&self.params)?;
        self.channels()?;
        Ok(())
    }
}

fn number<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("invalid value `{value}` for key `{key}`")))
}
