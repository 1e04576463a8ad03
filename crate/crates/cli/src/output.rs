//! Deterministic machine-readable emission: RFC-4180 CSV and JSON lines with
//! 12 significant digits, plus a column manifest so external plotters can
//! consume scan files without reading this source.

use std::io::Write;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Jsonl,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Format::Csv),
            "jsonl" => Ok(Format::Jsonl),
            other => Err(format!("unknown format '{other}' (expected csv or jsonl)")),
        }
    }
}

/// 12 significant digits, '.' decimal separator, byte-stable.
pub fn sig12(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else {
        format!("{x:.11e}")
    }
}

/// One scan result row. Field order defines the CSV column order.
#[derive(Debug, Clone, Serialize)]
pub struct ScanRow {
    pub r: f64,
    pub scheme: &'static str,
    pub tau_a: f64,
    pub tau_b: f64,
    pub eof: f64,
    pub eof_unit: &'static str,
    pub log_negativity: f64,
    pub logneg_unit: &'static str,
    pub epr_opt: f64,
    pub purity: f64,
    pub r_eff: Option<f64>,
    pub tau_a_eff: Option<f64>,
    pub tau_b_eff: Option<f64>,
    pub tau_eff_product: Option<f64>,
    pub direct_transmittivity: f64,
    pub physical: bool,
}

pub const SCAN_COLUMNS: &[(&str, &str, &str)] = &[
    ("r", "dimensionless", "input two-mode squeezing parameter"),
    ("scheme", "-", "direct transmission or swapping-based distribution"),
    ("tau_a", "intensity", "mode-1 arm transmittivity of the evaluated state"),
    ("tau_b", "intensity", "mode-2 arm transmittivity of the evaluated state"),
    ("eof", "bits", "entanglement of formation of the output state"),
    ("eof_unit", "-", "unit tag for the eof column"),
    ("log_negativity", "nats unless logneg-bits is set", "logarithmic negativity"),
    ("logneg_unit", "-", "unit tag for the log_negativity column"),
    ("epr_opt", "vacuum-variance units", "optimized EPR variance (vacuum = 2)"),
    ("purity", "dimensionless", "tr(rho^2) of the output state"),
    ("r_eff", "dimensionless", "effective squeezing of the output state (empty if separable)"),
    ("tau_a_eff", "intensity", "effective mode-1 transmittivity"),
    ("tau_b_eff", "intensity", "effective mode-2 transmittivity"),
    ("tau_eff_product", "intensity", "total effective transmittivity tau_a_eff * tau_b_eff"),
    (
        "direct_transmittivity",
        "intensity",
        "total transmittivity of direct transmission over the same distance",
    ),
    ("physical", "bool", "post-hoc physicality audit of the reported state"),
];

pub fn write_csv_header(w: &mut impl Write) -> std::io::Result<()> {
    let names: Vec<&str> = SCAN_COLUMNS.iter().map(|c| c.0).collect();
    writeln!(w, "{}", names.join(","))
}

fn opt_sig12(x: Option<f64>) -> String {
    x.map(sig12).unwrap_or_else(|| "nan".to_string())
}

pub fn write_csv_row(w: &mut impl Write, row: &ScanRow) -> std::io::Result<()> {
    writeln!(
        w,
        "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
        sig12(row.r),
        row.scheme,
        sig12(row.tau_a),
        sig12(row.tau_b),
        sig12(row.eof),
        row.eof_unit,
        sig12(row.log_negativity),
        row.logneg_unit,
        sig12(row.epr_opt),
        sig12(row.purity),
        opt_sig12(row.r_eff),
        opt_sig12(row.tau_a_eff),
        opt_sig12(row.tau_b_eff),
        opt_sig12(row.tau_eff_product),
        sig12(row.direct_transmittivity),
        row.physical,
    )
}

pub fn write_jsonl_row(w: &mut impl Write, row: &ScanRow) -> std::io::Result<()> {
    let line = serde_json::to_string(row).expect("row serialization cannot fail");
    writeln!(w, "{line}")
}

/// Plot-data manifest describing the scan columns.
#[derive(Debug, Serialize)]
pub struct Manifest<'a> {
    pub format: &'a str,
    pub columns: Vec<ManifestColumn<'a>>,
    pub config: &'a serde_json::Value,
}

#[derive(Debug, Serialize)]
pub struct ManifestColumn<'a> {
    pub name: &'a str,
    pub unit: &'a str,
    pub description: &'a str,
}

pub fn manifest_json(format: Format, config: &serde_json::Value) -> String {
    let manifest = Manifest {
        format: match format {
            Format::Csv => "csv",
            Format::Jsonl => "jsonl",
        },
        columns: SCAN_COLUMNS
            .iter()
            .map(|(name, unit, description)| ManifestColumn { name, unit, description })
            .collect(),
        config,
    };
    serde_json::to_string_pretty(&manifest).expect("manifest serialization cannot fail")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig12_is_stable_and_parses_back() {
        assert_eq!(sig12(1.0), "1.00000000000e0");
        assert_eq!(sig12(f64::NAN), "nan");
        let x = 0.123456789012345;
        let s = sig12(x);
        let back: f64 = s.parse().unwrap();
        assert!((back - x).abs() < 1e-12);
    }
}
