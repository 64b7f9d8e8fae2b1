//! Achievable-rate formulas for every transmission scheme, evaluated for a
//! given time allocation and coefficient set.
//!
//! Rates are bits per unit block (bandwidth normalized). A term
//! `d * log2(1 + c t1 / s)` is taken as 0 whenever `d == 0` or `s == 0`,
//! the limit of `t log(1 + c / t)` as `t -> 0+`. The solvers probe the
//! boundary of the feasible set, so this convention matters.

use std::f64::consts::LN_2;
use std::fmt;
use std::str::FromStr;

use crate::channel::{coefficients, ChannelSet, CoefficientSet, SystemParams};
use crate::error::{Error, Result};

/// Absolute tolerance on the total-time constraint and on layout equalities.
pub const ALLOCATION_TOLERANCE: f64 = 1e-9;

/// Block fractions `t1, t2, t3, t4^(1), t4^(2)`.
///
/// For the relay benchmark the same five fields carry the three-slot layout:
/// `t2` is the source-to-relay slot, `t3` is unused (zero) and `t4a`/`t4b`
/// hold the relay slot split `t3^(1)` (forwarding) / `t3^(2)` (relay's own
/// data). The non-cooperative benchmark leaves `t4a = t4b = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TimeAllocation {
    t1: f64,
    t2: f64,
    t3: f64,
    t4a: f64,
    t4b: f64,
}

impl TimeAllocation {
    /// Checked constructor: every part nonnegative and the parts sum to
    /// `1 - ce_overhead`.
    pub fn new(t1: f64, t2: f64, t3: f64, t4a: f64, t4b: f64, ce_overhead: f64) -> Result<Self> {
        let alloc = TimeAllocation { t1, t2, t3, t4a, t4b };
        alloc.validate(ce_overhead)?;
        Ok(alloc)
    }

    /// Builds an allocation the caller has constructed feasible. Tiny
    /// negative round-off is clamped to zero.
    pub(crate) fn from_parts(t1: f64, t2: f64, t3: f64, t4a: f64, t4b: f64) -> Self {
        TimeAllocation {
            t1: t1.max(0.0),
            t2: t2.max(0.0),
            t3: t3.max(0.0),
            t4a: t4a.max(0.0),
            t4b: t4b.max(0.0),
        }
    }

    pub fn validate(&self, ce_overhead: f64) -> Result<()> {
        let parts = self.parts();
        if let Some(p) = parts.iter().find(|p| !(**p >= 0.0 && p.is_finite())) {
            return Err(Error::InvalidAllocation(format!("negative or non-finite part {p}")));
        }
        let target = crate::channel::BLOCK_LENGTH - ce_overhead;
        let total = self.total();
        if (total - target).abs() > ALLOCATION_TOLERANCE {
            return Err(Error::InvalidAllocation(format!(
                "parts sum to {total}, expected {target}"
            )));
        }
        Ok(())
    }

    pub fn t1(&self) -> f64 {
        self.t1
    }
    pub fn t2(&self) -> f64 {
        self.t2
    }
    pub fn t3(&self) -> f64 {
        self.t3
    }
    pub fn t4a(&self) -> f64 {
        self.t4a
    }
    pub fn t4b(&self) -> f64 {
        self.t4b
    }
    pub fn t4(&self) -> f64 {
        self.t4a + self.t4b
    }

    pub fn parts(&self) -> [f64; 5] {
        [self.t1, self.t2, self.t3, self.t4a, self.t4b]
    }

    pub fn total(&self) -> f64 {
        self.parts().iter().sum()
    }
}

/// Which user relays for the other in the relay benchmark.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RelayDirection {
    /// `Y -> X -> D`: X forwards Y's message.
    YviaX,
    /// `X -> Y -> D`: Y forwards X's message.
    XviaY,
}

impl RelayDirection {
    pub const BOTH: [RelayDirection; 2] = [RelayDirection::YviaX, RelayDirection::XviaY];

    fn tag(self) -> &'static str {
        match self {
            RelayDirection::YviaX => "yx",
            RelayDirection::XviaY => "xy",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    StbcNjd,
    StbcJd,
    DtbNjd,
    DtbJd,
    RelayNjd(RelayDirection),
    RelayJd(RelayDirection),
    NonCoop,
}

impl Scheme {
    /// The four proposed cooperation schemes.
    pub const COOPERATIVE: [Scheme; 4] = [Scheme::StbcNjd, Scheme::StbcJd, Scheme::DtbNjd, Scheme::DtbJd];

    pub fn is_cooperative(self) -> bool {
        matches!(self, Scheme::StbcNjd | Scheme::StbcJd | Scheme::DtbNjd | Scheme::DtbJd)
    }

    /// Whether the DN jointly decodes the overheard exchange/relay slot.
    pub fn joint_decoding(self) -> bool {
        matches!(self, Scheme::StbcJd | Scheme::DtbJd | Scheme::RelayJd(_))
    }

    /// Schemes whose joint slot is forced to `t4a = t4b`.
    pub fn requires_equal_split(self) -> bool {
        matches!(self, Scheme::StbcNjd | Scheme::StbcJd | Scheme::DtbNjd)
    }

    pub fn tag(self) -> String {
        match self {
            Scheme::StbcNjd => "stbc-njd".into(),
            Scheme::StbcJd => "stbc-jd".into(),
            Scheme::DtbNjd => "dtb-njd".into(),
            Scheme::DtbJd => "dtb-jd".into(),
            Scheme::RelayNjd(d) => format!("relay-njd-{}", d.tag()),
            Scheme::RelayJd(d) => format!("relay-jd-{}", d.tag()),
            Scheme::NonCoop => "noncoop".into(),
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tag())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        use RelayDirection::*;
        Ok(match s {
            "stbc-njd" => Scheme::StbcNjd,
            "stbc-jd" => Scheme::StbcJd,
            "dtb-njd" => Scheme::DtbNjd,
            "dtb-jd" => Scheme::DtbJd,
            "relay-njd-yx" => Scheme::RelayNjd(YviaX),
            "relay-njd-xy" => Scheme::RelayNjd(XviaY),
            "relay-jd-yx" => Scheme::RelayJd(YviaX),
            "relay-jd-xy" => Scheme::RelayJd(XviaY),
            "noncoop" => Scheme::NonCoop,
            other => return Err(Error::Config(format!("unknown scheme `{other}`"))),
        })
    }
}

/// Per-phase rates behind a [`RatePair`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhaseRates {
    /// Exchange rates `R_X^(2)`, `R_Y^(3)` and joint-slot rates `R_X^(4)`, `R_Y^(4)`.
    Cooperative { r_x2: f64, r_y3: f64, r_x4: f64, r_y4: f64 },
    /// Source-to-relay rate, forwarded rate (plus any jointly decoded direct
    /// term) and the relay's own rate.
    Relay {
        direction: RelayDirection,
        source_to_relay: f64,
        relayed: f64,
        relay_own: f64,
    },
    /// Direct TDMA rates of the non-cooperative benchmark.
    Direct { r_x2: f64, r_y3: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatePair {
    pub r_x: f64,
    pub r_y: f64,
    pub phases: PhaseRates,
}

impl RatePair {
    fn cooperative(r_x2: f64, r_y3: f64, r_x4: f64, r_y4: f64) -> Self {
        RatePair {
            r_x: r_x2.min(r_x4),
            r_y: r_y3.min(r_y4),
            phases: PhaseRates::Cooperative { r_x2, r_y3, r_x4, r_y4 },
        }
    }

    /// Largest pairwise gap among the rates the equal-rate optimality
    /// conditions tie together. Zero for layouts without such conditions.
    pub fn equal_rate_residual(&self, scheme: Scheme) -> f64 {
        match self.phases {
            PhaseRates::Cooperative { r_x2, r_y3, r_x4, r_y4 } => {
                let base = (r_x2 - r_y3).abs().max((r_x2 - r_x4).abs());
                if scheme == Scheme::DtbJd {
                    base.max((r_x4 - r_y4).abs())
                } else {
                    base
                }
            }
            PhaseRates::Relay { .. } | PhaseRates::Direct { .. } => (self.r_x - self.r_y).abs(),
        }
    }
}

/// `duration * log2(1 + coeff * t1 / denom)` with the zero-duration limit.
#[inline]
pub(crate) fn rate_term(duration: f64, coeff: f64, t1: f64, denom: f64) -> f64 {
    if duration <= 0.0 || denom <= 0.0 {
        0.0
    } else {
        duration * log2_1p(coeff * t1 / denom)
    }
}

#[inline]
fn log2_1p(snr: f64) -> f64 {
    snr.ln_1p() / LN_2
}

#[inline]
fn snr(coeff: f64, t1: f64, denom: f64) -> f64 {
    if denom <= 0.0 {
        0.0
    } else {
        coeff * t1 / denom
    }
}

/// `(R_X^(2), R_Y^(3))` of the message exchange between the users.
pub fn exchange_rates(alloc: &TimeAllocation, coeffs: &CoefficientSet) -> (f64, f64) {
    exchange_rates_raw(alloc.t1, alloc.t2, alloc.t3, alloc.t4(), coeffs)
}

#[inline]
pub(crate) fn exchange_rates_raw(t1: f64, t2: f64, t3: f64, t4: f64, coeffs: &CoefficientSet) -> (f64, f64) {
    (
        rate_term(t2, coeffs.rho1, t1, t2 + t4),
        rate_term(t3, coeffs.rho2, t1, t3 + t4),
    )
}

/// Joint transmission family of the cooperative schemes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JointFamily {
    /// Alamouti STBC: the received SNRs add.
    Stbc,
    /// Distributed beamforming: the amplitudes add.
    Dtb,
}

impl JointFamily {
    pub fn of(scheme: Scheme) -> Option<JointFamily> {
        match scheme {
            Scheme::StbcNjd | Scheme::StbcJd => Some(JointFamily::Stbc),
            Scheme::DtbNjd | Scheme::DtbJd => Some(JointFamily::Dtb),
            _ => None,
        }
    }
}

/// Quantities of the joint slot that do not depend on how `t4` is split.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointTerms {
    /// `log2(1 + SNR)` of the joint transmission, bits per unit time.
    pub per_time: f64,
    /// Jointly decoded contribution of X's exchange slot (zero without JD).
    pub overheard_x: f64,
    /// Jointly decoded contribution of Y's exchange slot (zero without JD).
    pub overheard_y: f64,
}

impl JointTerms {
    pub fn new(t1: f64, t2: f64, t3: f64, t4: f64, coeffs: &CoefficientSet, family: JointFamily, jd: bool) -> Self {
        let sx = snr(coeffs.rho3, t1, t2 + t4);
        let sy = snr(coeffs.rho4, t1, t3 + t4);
        let joint_snr = match family {
            JointFamily::Stbc => sx + sy,
            JointFamily::Dtb => {
                let amp = sx.sqrt() + sy.sqrt();
                amp * amp
            }
        };
        let (overheard_x, overheard_y) = if jd {
            (
                rate_term(t2, coeffs.rho3, t1, t2 + t4),
                rate_term(t3, coeffs.rho4, t1, t3 + t4),
            )
        } else {
            (0.0, 0.0)
        };
        JointTerms {
            per_time: log2_1p(joint_snr),
            overheard_x,
            overheard_y,
        }
    }

    /// `(R_X^(4), R_Y^(4))` for a split of the joint slot.
    #[inline]
    pub fn rates(&self, t4a: f64, t4b: f64) -> (f64, f64) {
        (
            t4a * self.per_time + self.overheard_x,
            t4b * self.per_time + self.overheard_y,
        )
    }
}

fn layout_error(scheme: Scheme, reason: impl Into<String>) -> Error {
    Error::SchemeLayout {
        scheme,
        reason: reason.into(),
    }
}

/// `(R_X^(4), R_Y^(4))` of a cooperative scheme.
pub fn joint_rates(alloc: &TimeAllocation, coeffs: &CoefficientSet, scheme: Scheme) -> Result<(f64, f64)> {
    let family = JointFamily::of(scheme).ok_or_else(|| layout_error(scheme, "not a cooperative scheme"))?;
    if scheme.requires_equal_split() && (alloc.t4a - alloc.t4b).abs() > ALLOCATION_TOLERANCE {
        return Err(layout_error(
            scheme,
            format!("t4a = {} and t4b = {} must be equal", alloc.t4a, alloc.t4b),
        ));
    }
    let t4 = alloc.t4();
    let terms = JointTerms::new(alloc.t1, alloc.t2, alloc.t3, t4, coeffs, family, scheme.joint_decoding());
    Ok(match family {
        JointFamily::Stbc => terms.rates(t4 / 2.0, t4 / 2.0),
        JointFamily::Dtb => terms.rates(alloc.t4a, alloc.t4b),
    })
}

/// Relay-slot quantities that do not depend on the split of the relay slot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelayTerms {
    pub direction: RelayDirection,
    /// Rate of the source-to-relay transmission in `t2`.
    pub source_rate: f64,
    /// `log2(1 + SNR)` of the relay-to-DN link over the relay slot.
    pub link_per_time: f64,
    /// Direct source-to-DN rate during `t2`, only counted with JD.
    pub overheard: f64,
}

impl RelayTerms {
    /// `relay_slot` is the full relay transmission duration `t3`.
    pub fn new(t1: f64, t2: f64, relay_slot: f64, coeffs: &CoefficientSet, direction: RelayDirection, jd: bool) -> Self {
        // (source exchange coeff, relay-to-DN coeff, source-to-DN coeff)
        let (exchange, relay_link, direct) = match direction {
            RelayDirection::YviaX => (coeffs.rho2, coeffs.rho3, coeffs.rho4),
            RelayDirection::XviaY => (coeffs.rho1, coeffs.rho4, coeffs.rho3),
        };
        RelayTerms {
            direction,
            source_rate: rate_term(t2, exchange, t1, t2),
            link_per_time: if relay_slot > 0.0 { log2_1p(relay_link * t1 / relay_slot) } else { 0.0 },
            overheard: if jd { rate_term(t2, direct, t1, t2) } else { 0.0 },
        }
    }

    /// Rates for `forwarding` time spent on the source's message and
    /// `own` time on the relay's message.
    #[inline]
    pub fn rates(&self, forwarding: f64, own: f64) -> RatePair {
        let relayed = forwarding * self.link_per_time + self.overheard;
        let relay_own = own * self.link_per_time;
        let source = self.source_rate.min(relayed);
        let (r_x, r_y) = match self.direction {
            RelayDirection::YviaX => (relay_own, source),
            RelayDirection::XviaY => (source, relay_own),
        };
        RatePair {
            r_x,
            r_y,
            phases: PhaseRates::Relay {
                direction: self.direction,
                source_to_relay: self.source_rate,
                relayed,
                relay_own,
            },
        }
    }
}

#[inline]
pub(crate) fn direct_rates_raw(t1: f64, t2: f64, t3: f64, coeffs: &CoefficientSet) -> RatePair {
    let r_x2 = rate_term(t2, coeffs.rho3, t1, t2);
    let r_y3 = rate_term(t3, coeffs.rho4, t1, t3);
    RatePair {
        r_x: r_x2,
        r_y: r_y3,
        phases: PhaseRates::Direct { r_x2, r_y3 },
    }
}

/// Rates of any scheme from coefficients.
pub fn scheme_rates(alloc: &TimeAllocation, coeffs: &CoefficientSet, scheme: Scheme) -> Result<RatePair> {
    match scheme {
        Scheme::StbcNjd | Scheme::StbcJd | Scheme::DtbNjd | Scheme::DtbJd => {
            let (r_x2, r_y3) = exchange_rates(alloc, coeffs);
            let (r_x4, r_y4) = joint_rates(alloc, coeffs, scheme)?;
            Ok(RatePair::cooperative(r_x2, r_y3, r_x4, r_y4))
        }
        Scheme::RelayNjd(direction) | Scheme::RelayJd(direction) => {
            if alloc.t3 > ALLOCATION_TOLERANCE {
                return Err(layout_error(
                    scheme,
                    "the relay slot is carried by t4a/t4b; t3 must be zero",
                ));
            }
            let relay_slot = alloc.t4();
            let terms = RelayTerms::new(alloc.t1, alloc.t2, relay_slot, coeffs, direction, scheme.joint_decoding());
            Ok(terms.rates(alloc.t4a, alloc.t4b))
        }
        Scheme::NonCoop => {
            if alloc.t4() > ALLOCATION_TOLERANCE {
                return Err(layout_error(scheme, "no joint slot: t4a and t4b must be zero"));
            }
            Ok(direct_rates_raw(alloc.t1, alloc.t2, alloc.t3, coeffs))
        }
    }
}

/// Rates of a benchmark scheme (relay or non-cooperative) from raw
/// parameters.
pub fn benchmark_rates(
    alloc: &TimeAllocation,
    params: &SystemParams,
    channels: &ChannelSet,
    scheme: Scheme,
) -> Result<RatePair> {
    if scheme.is_cooperative() {
        return Err(layout_error(scheme, "not a benchmark scheme"));
    }
    let coeffs = coefficients(params, channels)?;
    scheme_rates(alloc, &coeffs, scheme)
}

/// Max-min fairness metric: the smaller of the two user rates.
pub fn common_throughput(pair: &RatePair) -> f64 {
    pair.r_x.min(pair.r_y)
}
