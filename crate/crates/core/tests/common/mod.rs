//! Reference formulas for the integration tests, written directly in
//! physical units (harvested energy, link gains, noise) instead of going
//! through the library's coefficient form, plus a brute-force grid search.
#![allow(dead_code)]

use rand::Rng;

#[derive(Debug, Clone, Copy)]
pub struct Net {
    pub eta: f64,
    pub p_t: f64,
    pub n0: f64,
    pub h_ex: f64,
    pub h_ey: f64,
    pub h_xy: f64,
    pub h_yx: f64,
    pub h_xd: f64,
    pub h_yd: f64,
}

impl Net {
    /// A network whose SNR coefficients are exactly `rho`: unit harvesting
    /// gains and noise, link gains equal to the coefficients.
    pub fn from_rho(rho: [f64; 4]) -> Net {
        Net {
            eta: 1.0,
            p_t: 1.0,
            n0: 1.0,
            h_ex: 1.0,
            h_ey: 1.0,
            h_xy: rho[0],
            h_yx: rho[1],
            h_xd: rho[2],
            h_yd: rho[3],
        }
    }

    pub fn energy(&self, t1: f64) -> (f64, f64) {
        (self.eta * self.p_t * self.h_ex * t1, self.eta * self.p_t * self.h_ey * t1)
    }
}

/// `duration * log2(1 + snr)`, zero for an empty slot.
fn shannon(duration: f64, snr: f64) -> f64 {
    if duration <= 0.0 {
        0.0
    } else {
        duration * (1.0 + snr).log2()
    }
}

/// Receive SNR when `energy` is spent evenly over `spread` seconds.
fn snr(energy: f64, gain: f64, n0: f64, spread: f64) -> f64 {
    if spread <= 0.0 {
        0.0
    } else {
        energy * gain / (spread * n0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Coop {
    StbcNjd,
    StbcJd,
    DtbNjd,
    DtbJd,
}

/// Per-phase rates `(r_x2, r_y3, r_x4, r_y4)` of a cooperative scheme for
/// the allocation `[t1, t2, t3, t4a, t4b]`.
pub fn coop_phases(net: &Net, scheme: Coop, a: &[f64]) -> [f64; 4] {
    let (t1, t2, t3, t4a, t4b) = (a[0], a[1], a[2], a[3], a[4]);
    let t4 = t4a + t4b;
    let (ex, ey) = net.energy(t1);
    let r_x2 = shannon(t2, snr(ex, net.h_xy, net.n0, t2 + t4));
    let r_y3 = shannon(t3, snr(ey, net.h_yx, net.n0, t3 + t4));
    let s3 = snr(ex, net.h_xd, net.n0, t2 + t4);
    let s4 = snr(ey, net.h_yd, net.n0, t3 + t4);
    let (joint_snr, dtb) = match scheme {
        Coop::StbcNjd | Coop::StbcJd => (s3 + s4, false),
        Coop::DtbNjd | Coop::DtbJd => ((s3.sqrt() + s4.sqrt()).powi(2), true),
    };
    let (mut r_x4, mut r_y4) = if dtb && scheme == Coop::DtbJd {
        (shannon(t4a, joint_snr), shannon(t4b, joint_snr))
    } else {
        (shannon(t4 / 2.0, joint_snr), shannon(t4 / 2.0, joint_snr))
    };
    if matches!(scheme, Coop::StbcJd | Coop::DtbJd) {
        r_x4 += shannon(t2, s3);
        r_y4 += shannon(t3, s4);
    }
    [r_x2, r_y3, r_x4, r_y4]
}

pub fn coop_common(net: &Net, scheme: Coop, a: &[f64]) -> f64 {
    let [r_x2, r_y3, r_x4, r_y4] = coop_phases(net, scheme, a);
    r_x2.min(r_x4).min(r_y3.min(r_y4))
}

/// Relay benchmark. `y_via_x` selects X as the relay. The allocation is
/// `[t1, t2, forwarding, own]` with the relay slot `t3 = forwarding + own`.
pub fn relay_common(net: &Net, y_via_x: bool, jd: bool, a: &[f64]) -> f64 {
    let (t1, t2, fwd, own) = (a[0], a[1], a[2], a[3]);
    let t3 = fwd + own;
    let (ex, ey) = net.energy(t1);
    let (e_src, h_exchange, h_src_dn, e_relay, h_relay_dn) = if y_via_x {
        (ey, net.h_yx, net.h_yd, ex, net.h_xd)
    } else {
        (ex, net.h_xy, net.h_xd, ey, net.h_yd)
    };
    let to_relay = shannon(t2, snr(e_src, h_exchange, net.n0, t2));
    let relay_snr = snr(e_relay, h_relay_dn, net.n0, t3);
    let mut forwarded = shannon(fwd, relay_snr);
    if jd {
        forwarded += shannon(t2, snr(e_src, h_src_dn, net.n0, t2));
    }
    let relay_own = shannon(own, relay_snr);
    to_relay.min(forwarded).min(relay_own)
}

/// Non-cooperative TDMA for `[t1, t2, t3]`.
pub fn noncoop_common(net: &Net, a: &[f64]) -> f64 {
    let (ex, ey) = net.energy(a[0]);
    let r_x = shannon(a[1], snr(ex, net.h_xd, net.n0, a[1]));
    let r_y = shannon(a[2], snr(ey, net.h_yd, net.n0, a[2]));
    r_x.min(r_y)
}

/// Maximum of `f` over all allocations of `budget` into `parts`
/// nonnegative multiples of `step`.
pub fn grid_max(parts: usize, budget: f64, step: f64, f: impl Fn(&[f64]) -> f64) -> (f64, Vec<f64>) {
    let units = (budget / step + 1e-9).floor() as usize;
    let mut best = (f64::NEG_INFINITY, vec![0.0; parts]);
    let mut idx = vec![0usize; parts];
    let mut point = vec![0.0; parts];
    #[allow(clippy::too_many_arguments)]
    fn rec(
        k: usize,
        left: usize,
        idx: &mut [usize],
        point: &mut [f64],
        step: f64,
        budget: f64,
        f: &dyn Fn(&[f64]) -> f64,
        best: &mut (f64, Vec<f64>),
    ) {
        let parts = idx.len();
        if k + 1 == parts {
            idx[k] = left;
            let used: f64 = idx[..k].iter().map(|&u| u as f64 * step).sum();
            for (p, &u) in point.iter_mut().zip(idx.iter()).take(k) {
                *p = u as f64 * step;
            }
            point[k] = (budget - used).max(0.0);
            let v = f(point);
            if v > best.0 {
                *best = (v, point.to_vec());
            }
            return;
        }
        for u in 0..=left {
            idx[k] = u;
            rec(k + 1, left - u, idx, point, step, budget, f, best);
        }
    }
    rec(0, units, &mut idx, &mut point, step, budget, &f, &mut best);
    best
}

/// Finer search in a box of half-width `radius` around `center`: the first
/// `parts - 1` coordinates move on a grid of `radius / sub`, the last takes
/// the remainder.
pub fn local_max(center: &[f64], budget: f64, radius: f64, sub: usize, f: impl Fn(&[f64]) -> f64) -> (f64, Vec<f64>) {
    let free = center.len() - 1;
    let span = 2 * sub + 1;
    let total = span.pow(free as u32);
    let mut best = (f(center), center.to_vec());
    let mut point = vec![0.0; center.len()];
    for code in 0..total {
        let mut c = code;
        let mut used = 0.0;
        let mut ok = true;
        for i in 0..free {
            let offset = (c % span) as f64 - sub as f64;
            c /= span;
            let v = center[i] + offset * radius / sub as f64;
            if v < 0.0 {
                ok = false;
                break;
            }
            point[i] = v;
            used += v;
        }
        if !ok || used > budget {
            continue;
        }
        point[free] = budget - used;
        let v = f(&point);
        if v > best.0 {
            best = (v, point.clone());
        }
    }
    best
}

/// Log-uniform coefficients in `[1e-2, 1e3]`.
pub fn random_rho(rng: &mut impl Rng) -> [f64; 4] {
    let mut rho = [0.0; 4];
    for r in &mut rho {
        *r = 10f64.powf(rng.gen_range(-2.0..3.0));
    }
    rho
}
