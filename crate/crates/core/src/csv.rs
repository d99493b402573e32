//! Deterministic CSV output for sweeps.
//!
//! Layout: `#`-prefixed header lines (scenario name, ε², ΔA² and a
//! per-outcome weak-value table), one column-name line, then one line per σ.
//! Numbers carry 12 significant digits; blank fields mean "not applicable".

use std::fmt::Write;

use crate::scenario::{ResultRow, SweepHeader};

pub const COLUMNS: [&str; 9] = [
    "sigma",
    "x_no_feedback",
    "x_feedback",
    "x_feedback_joint",
    "residual",
    "predicted_residual",
    "variance_model",
    "mc_mean",
    "mc_stderr",
];

/// Formats `x` with 12 significant digits, in the style of C's `%.12g`.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exponent) = sci.split_once('e').expect("scientific format");
    let exponent: i32 = exponent.parse().expect("integer exponent");
    if (-5..12).contains(&exponent) {
        let decimals = (11 - exponent) as usize;
        trim_zeros(&format!("{x:.decimals$}"))
    } else {
        let sign = if exponent < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exponent.abs())
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_owned()
    } else {
        s.to_owned()
    }
}

fn optional(x: Option<f64>) -> String {
    x.map(format_number).unwrap_or_default()
}

/// Renders a sweep as CSV text.
pub fn emit_csv(rows: &[ResultRow], header: &SweepHeader) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# scenario: {}", header.name);
    let _ = writeln!(out, "# dimension: {}", header.dimension);
    let _ = writeln!(out, "# estimates: {}", header.strategy);
    let _ = writeln!(out, "# mean: {}", format_number(header.mean));
    let _ = writeln!(out, "# variance: {}", format_number(header.variance));
    let _ = writeln!(out, "# epsilon_squared: {}", format_number(header.epsilon_squared));
    let _ = writeln!(
        out,
        "# outcome,probability,weak_value_re,weak_value_im,estimate,contribution,anomalous,degenerate"
    );
    for o in &header.outcomes {
        let _ = writeln!(
            out,
            "# {},{},{},{},{},{},{},{}",
            o.label,
            format_number(o.probability),
            format_number(o.weak_value.re),
            format_number(o.weak_value.im),
            format_number(o.estimate),
            format_number(o.contribution),
            o.anomalous,
            o.degenerate
        );
    }
    out.push_str(&COLUMNS.join(","));
    out.push('\n');
    for r in rows {
        let fields = [
            format_number(r.sigma),
            format_number(r.x_no_feedback),
            format_number(r.x_feedback),
            format_number(r.x_feedback_joint),
            format_number(r.residual),
            format_number(r.predicted_residual),
            optional(r.variance_model),
            optional(r.mc_mean),
            optional(r.mc_stderr),
        ];
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}
