/// Secondary stop: a bracket this narrow is treated as collapsed even if the
/// residual criterion was never met (flat regions, boundary optima).
pub(crate) const MIN_BRACKET_WIDTH: f64 = 1e-12;

#[derive(Debug, Clone, Copy)]
pub(crate) struct Bisection<T> {
    pub point: f64,
    pub state: T,
    pub iterations: u64,
    /// The residual criterion `|g| < tol` was met at `point`.
    pub converged: bool,
}

/// Bisection on `[lo, hi]` driven by a signed residual `g`.
///
/// `eval` returns `(g, state)` at a trial point. A positive `g` moves the
/// upper bound down, anything else moves the lower bound up. The loop ends at
/// the first point with `|g| < tol`, when the bracket shrinks below
/// [`MIN_BRACKET_WIDTH`], or after `max_iters` evaluations. The last trial
/// point and its state are returned.
pub(crate) fn bisect<T>(
    mut lo: f64,
    mut hi: f64,
    tol: f64,
    max_iters: u32,
    mut eval: impl FnMut(f64) -> (f64, T),
) -> Bisection<T> {
    let mut iterations = 0u64;
    loop {
        let mid = 0.5 * (lo + hi);
        let (residual, state) = eval(mid);
        iterations += 1;
        if residual.abs() < tol {
            return Bisection { point: mid, state, iterations, converged: true };
        }
        if residual > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= MIN_BRACKET_WIDTH || iterations >= u64::from(max_iters) {
            return Bisection { point: mid, state, iterations, converged: false };
        }
    }
}

/// Golden-section search for the maximum of a unimodal `f` on `[a, b]`.
/// Returns the best point evaluated and its value.
pub(crate) fn golden_section_max(mut a: f64, mut b: f64, tol: f64, mut f: impl FnMut(f64) -> f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut best = if fd > fc { (d, fd) } else { (c, fc) };
    while (b - a) > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
            if fc > best.1 {
                best = (c, fc);
            }
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
            if fd > best.1 {
                best = (d, fd);
            }
        }
    }
    best
}
