use std::fmt::Write as _;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use dirac_wkb::diagnostics::SpectrumRecord;
use serde::Serialize;

pub const SPECTRUM_HEADER: &str = "profile,epsilon,sigma_d,n,e_exact,e_bs,e_fd,abs_diff,phase_residual";

/// `%.12g`-style formatting.
pub fn fmt_g(v: f64) -> String {
    const DIGITS: i32 = 12;
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let exp = v.abs().log10().floor() as i32;
    // rounding can carry into the next decade
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, v);
    let (mantissa, e) = sci.split_once('e').expect("scientific format");
    let e: i32 = e.parse().expect("exponent");
    let exp = if e != exp { e } else { exp };
    if !(-4..DIGITS).contains(&exp) {
        let mantissa = trim_zeros(mantissa);
        format!("{mantissa}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs())
    } else {
        let decimals = (DIGITS - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{v:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn cell(v: Option<f64>) -> String {
    v.map(fmt_g).unwrap_or_default()
}

pub fn spectrum_csv(records: &[SpectrumRecord]) -> String {
    let mut out = String::from(SPECTRUM_HEADER);
    out.push('\n');
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.profile,
            fmt_g(r.epsilon),
            r.sigma_d,
            r.n,
            cell(r.e_exact),
            cell(r.e_bs),
            cell(r.e_fd),
            cell(r.abs_diff),
            cell(r.phase_residual)
        );
    }
    out
}

/// CSV with a header and one row per entry of equally long columns.
pub fn columns_csv(header: &[&str], columns: &[Vec<Option<f64>>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    let rows = columns.first().map_or(0, Vec::len);
    for i in 0..rows {
        let row: Vec<String> = columns.iter().map(|c| cell(c[i])).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn json<T: Serialize + ?Sized>(value: &T) -> anyhow::Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn emit(text: &str, path: Option<&Path>) -> io::Result<()> {
    match path {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p)?);
            w.write_all(text.as_bytes())?;
            w.flush()
        }
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()
        }
    }
}
