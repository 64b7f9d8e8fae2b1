//! Physical parameters, the deterministic path-loss model and the reduction
//! of raw parameters to the dimensionless SNR coefficients used by every
//! rate formula.

use std::f64::consts::PI;

use crate::error::{domain, Result};

const SPEED_OF_LIGHT: f64 = 3.0e8;

/// Length of one transmission block. Every duration is a fraction of it.
pub const BLOCK_LENGTH: f64 = 1.0;

/// Physical constants of the network.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    /// EN transmit power `P_t` in watts.
    pub en_power_watts: f64,
    /// Energy harvesting efficiency, strictly inside (0, 1).
    pub harvest_efficiency: f64,
    /// Receiver noise power `N_0` in watts, identical at every receiver.
    pub noise_power_watts: f64,
    /// Channel-estimation overhead `t_0` as a fraction of the block.
    pub ce_overhead: f64,
}

impl Default for SystemParams {
    /// 3 W transmitter, 50 % efficiency, -70 dBm noise, 5 % CE overhead.
    fn default() -> Self {
        SystemParams {
            en_power_watts: 3.0,
            harvest_efficiency: 0.5,
            noise_power_watts: 1e-10,
            ce_overhead: 0.05,
        }
    }
}

impl SystemParams {
    pub fn new(
        en_power_watts: f64,
        harvest_efficiency: f64,
        noise_power_watts: f64,
        ce_overhead: f64,
    ) -> Result<Self> {
        let params = SystemParams {
            en_power_watts,
            harvest_efficiency,
            noise_power_watts,
            ce_overhead,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.en_power_watts > 0.0 && self.en_power_watts.is_finite()) {
            return domain(format!("en_power_watts must be positive, got {}", self.en_power_watts));
        }
        if !(self.harvest_efficiency > 0.0 && self.harvest_efficiency < 1.0) {
            return domain(format!(
                "harvest_efficiency must lie in (0, 1), got {}",
                self.harvest_efficiency
            ));
        }
        if !(self.noise_power_watts > 0.0 && self.noise_power_watts.is_finite()) {
            return domain(format!(
                "noise_power_watts must be positive, got {}",
                self.noise_power_watts
            ));
        }
        if !(self.ce_overhead >= 0.0 && self.ce_overhead < BLOCK_LENGTH) {
            return domain(format!("ce_overhead must lie in [0, 1), got {}", self.ce_overhead));
        }
        Ok(())
    }

    /// Time left for harvesting and transmission once CE is done.
    pub fn time_budget(&self) -> f64 {
        BLOCK_LENGTH - self.ce_overhead
    }
}

/// Node placement and propagation constants for the path-loss model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geometry {
    pub d_en_x: f64,
    pub d_en_y: f64,
    pub d_xy: f64,
    pub d_xd: f64,
    pub d_yd: f64,
    pub carrier_hz: f64,
    pub path_loss_exponent: f64,
    /// Defaults to 1: the quoted reference gains (2.72e-5 at 5 m, 4.25e-7
    /// at 40 m) are only reproduced with unit antenna gain.
    pub antenna_gain: f64,
}

impl Default for Geometry {
    fn default() -> Self {
        Geometry {
            d_en_x: 5.0,
            d_en_y: 10.0,
            d_xy: 2.0,
            d_xd: 40.0,
            d_yd: 40.0,
            carrier_hz: 915e6,
            path_loss_exponent: 2.0,
            antenna_gain: 1.0,
        }
    }
}

impl Geometry {
    pub fn validate(&self) -> Result<()> {
        for (name, d) in [
            ("d_en_x", self.d_en_x),
            ("d_en_y", self.d_en_y),
            ("d_xy", self.d_xy),
            ("d_xd", self.d_xd),
            ("d_yd", self.d_yd),
        ] {
            if !(d > 0.0 && d.is_finite()) {
                return domain(format!("{name} must be positive, got {d}"));
            }
        }
        if !(self.carrier_hz > 0.0 && self.carrier_hz.is_finite()) {
            return domain(format!("carrier_hz must be positive, got {}", self.carrier_hz));
        }
        if !(self.path_loss_exponent > 0.0) {
            return domain(format!(
                "path_loss_exponent must be positive, got {}",
                self.path_loss_exponent
            ));
        }
        if !(self.antenna_gain > 0.0) {
            return domain(format!("antenna_gain must be positive, got {}", self.antenna_gain));
        }
        Ok(())
    }
}

/// Free-space style power gain `G_A (c / (4 pi d f))^n` at `distance` meters.
pub fn path_loss_gain(distance: f64, geometry: &Geometry) -> Result<f64> {
    if !(distance > 0.0 && distance.is_finite()) {
        return domain(format!("distance must be positive, got {distance}"));
    }
    if !(geometry.carrier_hz > 0.0 && geometry.carrier_hz.is_finite()) {
        return domain(format!("carrier_hz must be positive, got {}", geometry.carrier_hz));
    }
    let ratio = SPEED_OF_LIGHT / (4.0 * PI * distance * geometry.carrier_hz);
    Ok(geometry.antenna_gain * ratio.powf(geometry.path_loss_exponent))
}

/// The six link power gains of the network.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelSet {
    pub h_ex: f64,
    pub h_ey: f64,
    pub h_xy: f64,
    pub h_yx: f64,
    pub h_xd: f64,
    pub h_yd: f64,
}

impl ChannelSet {
    /// Explicit gains. `h_xy` and `h_yx` may differ here.
    pub fn from_gains(h_ex: f64, h_ey: f64, h_xy: f64, h_yx: f64, h_xd: f64, h_yd: f64) -> Result<Self> {
        let set = ChannelSet { h_ex, h_ey, h_xy, h_yx, h_xd, h_yd };
        set.validate()?;
        Ok(set)
    }

    /// Reciprocal gains derived from node distances.
    pub fn from_geometry(geometry: &Geometry) -> Result<Self> {
        geometry.validate()?;
        let h_xy = path_loss_gain(geometry.d_xy, geometry)?;
        Ok(ChannelSet {
            h_ex: path_loss_gain(geometry.d_en_x, geometry)?,
            h_ey: path_loss_gain(geometry.d_en_y, geometry)?,
            h_xy,
            h_yx: h_xy,
            h_xd: path_loss_gain(geometry.d_xd, geometry)?,
            h_yd: path_loss_gain(geometry.d_yd, geometry)?,
        })
    }

    pub fn validate(&self) -> Result<()> {
        for (name, h) in [
            ("h_ex", self.h_ex),
            ("h_ey", self.h_ey),
            ("h_xy", self.h_xy),
            ("h_yx", self.h_yx),
            ("h_xd", self.h_xd),
            ("h_yd", self.h_yd),
        ] {
            if !(h >= 0.0 && h.is_finite()) {
                return domain(format!("{name} must be a finite nonnegative gain, got {h}"));
            }
        }
        Ok(())
    }
}

/// Dimensionless SNR coefficients.
///
/// * `rho1 = eta P_t h_ex h_xy / N_0` (X to Y exchange)
/// * `rho2 = eta P_t h_ey h_yx / N_0` (Y to X exchange)
/// * `rho3 = eta P_t h_ex h_xd / N_0` (X to DN)
/// * `rho4 = eta P_t h_ey h_yd / N_0` (Y to DN)
///
/// Multiplying a coefficient by `t1 / d` gives the receive SNR when the
/// harvested energy is spread evenly over a transmit duration `d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientSet {
    pub rho1: f64,
    pub rho2: f64,
    pub rho3: f64,
    pub rho4: f64,
}

impl CoefficientSet {
    pub fn new(rho1: f64, rho2: f64, rho3: f64, rho4: f64) -> Result<Self> {
        let set = CoefficientSet { rho1, rho2, rho3, rho4 };
        for (i, rho) in set.as_array().into_iter().enumerate() {
            if !(rho >= 0.0 && rho.is_finite()) {
                return domain(format!("rho{} must be finite and nonnegative, got {rho}", i + 1));
            }
        }
        Ok(set)
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.rho1, self.rho2, self.rho3, self.rho4]
    }

    pub fn is_degenerate(&self) -> bool {
        self.as_array().iter().all(|&rho| rho == 0.0)
    }
}

pub fn coefficients(params: &SystemParams, channels: &ChannelSet) -> Result<CoefficientSet> {
    if !(params.noise_power_watts > 0.0) {
        return domain(format!(
            "noise_power_watts must be positive, got {}",
            params.noise_power_watts
        ));
    }
    channels.validate()?;
    let scale = params.harvest_efficiency * params.en_power_watts / params.noise_power_watts;
    CoefficientSet::new(
        scale * channels.h_ex * channels.h_xy,
        scale * channels.h_ey * channels.h_yx,
        scale * channels.h_ex * channels.h_xd,
        scale * channels.h_ey * channels.h_yd,
    )
}

/// Energy harvested by X and Y during a WET phase of length `t1`.
pub fn harvested_energy(t1: f64, params: &SystemParams, channels: &ChannelSet) -> Result<(f64, f64)> {
    let budget = params.time_budget();
    if !(t1 >= 0.0 && t1 <= budget + 1e-12) {
        return domain(format!("t1 must lie in [0, {budget}], got {t1}"));
    }
    let per_gain = params.harvest_efficiency * t1 * params.en_power_watts;
    Ok((per_gain * channels.h_ex, per_gain * channels.h_ey))
}
