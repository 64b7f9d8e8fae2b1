//! Deterministic text output: CSV rows and `key=value` result listings.

use std::io::Write;

use crate::error::Result;
use crate::solver::SolveResult;

use super::sweep::SweepRow;

pub const CSV_HEADER: [&str; 11] = [
    "sweep_value",
    "scheme",
    "common",
    "t1",
    "t2",
    "t3",
    "t4a",
    "t4b",
    "r_x",
    "r_y",
    "converged",
];

const SIGNIFICANT_DIGITS: usize = 10;

/// Formats like C's `%.10g`: ten significant digits, trailing zeros
/// dropped, exponent form outside `[1e-4, 1e10)`.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= SIGNIFICANT_DIGITS as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    } else {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        let record = [
            format_number(r.sweep_value),
            r.scheme.clone(),
            format_number(r.common),
            format_number(r.t1),
            format_number(r.t2),
            format_number(r.t3),
            format_number(r.t4a),
            format_number(r.t4b),
            format_number(r.r_x),
            format_number(r.r_y),
            r.converged.to_string(),
        ];
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

pub fn csv_string(rows: &[SweepRow]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf)?;
    Ok(String::from_utf8(buf).expect("CSV output is ASCII"))
}

/// `key=value` lines describing a result, one field per line.
pub fn result_lines(r: &SolveResult) -> Vec<(String, String)> {
    let [t1, t2, t3, t4a, t4b] = r.allocation.parts();
    let mut lines = vec![
        ("scheme".to_string(), r.scheme.tag()),
        ("common".into(), format_number(r.common)),
    ];
    for (k, v) in [("t1", t1), ("t2", t2), ("t3", t3), ("t4a", t4a), ("t4b", t4b)] {
        lines.push((k.into(), format_number(v)));
    }
    lines.push(("r_x".into(), format_number(r.rates.r_x)));
    lines.push(("r_y".into(), format_number(r.rates.r_y)));
    lines.push(("equal_rate_residual".into(), format_number(r.equal_rate_residual())));
    lines.push(("converged".into(), r.converged.to_string()));
    lines.push(("achievable_only".into(), r.achievable_only.to_string()));
    lines.push(("iterations".into(), r.iterations.to_string()));
    lines
}
