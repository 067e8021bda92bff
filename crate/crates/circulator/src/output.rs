//! CSV and JSON serialization of results.
//!
//! CSV is the figure-data interchange format: matrices are written row-major
//! with 6 significant digits, scans and correlation traces with full
//! round-trip precision so repeated runs are byte-identical.

use serde_json::json;

use crate::config::{atom_state_label, ParamsSnapshot};
use crate::correlations::CorrelationTrace;
use crate::model::{ModelKind, SystemParams};
use crate::observables::{CirculatorMetrics, TransmissionMatrix};
use crate::scan::ScanResult;
use crate::MHZ_TO_ANGULAR;

/// Column order of the scan CSV; transmissions first by the four routed
/// pairs, then the residual entries.
pub const SCAN_COLUMNS: [&str; 21] = [
    "ratio", "kappa_a", "kappa_b", "T_12", "T_14", "T_21", "T_23", "T_32", "T_34", "T_41", "T_43",
    "T_11", "T_13", "T_22", "T_24", "T_31", "T_33", "T_42", "T_44", "fidelity", "eta",
];

/// Six significant digits.
fn sig6(x: f64) -> String {
    if x == 0.0 {
        return "0.00000e0".into();
    }
    format!("{x:.5e}")
}

pub fn matrix_csv(t: &TransmissionMatrix) -> String {
    let mut out = String::new();
    for row in t.rows() {
        let cells: Vec<String> = row.iter().map(|&v| sig6(v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

fn isolation_json(v: f64) -> serde_json::Value {
    if v.is_finite() {
        json!(v)
    } else {
        json!(">99")
    }
}

pub fn matrix_json(
    params: &SystemParams,
    kind: ModelKind,
    t: &TransmissionMatrix,
    metrics: &CirculatorMetrics,
) -> serde_json::Value {
    json!({
        "params": ParamsSnapshot::new(params),
        "model": model_kind_label(kind),
        "transmissions": t.rows(),
        "metrics": {
            "fidelity": metrics.fidelity,
            "eta_per_port": metrics.eta_per_port,
            "eta": metrics.eta,
            "isolations_db": metrics.isolations.map(isolation_json),
            "direction": format!("{:?}", metrics.direction),
        },
    })
}

pub fn model_kind_label(kind: ModelKind) -> &'static str {
    match kind {
        ModelKind::Simplified => "simplified",
        ModelKind::TwoMode => "two-mode",
    }
}

/// Scan CSV: one row per ratio, kappa values in MHz (omega/2pi), full float
/// precision for byte-reproducibility.
pub fn scan_csv(result: &ScanResult) -> String {
    let mut out = String::new();
    out.push_str(&SCAN_COLUMNS.join(","));
    out.push('\n');
    for p in &result.points {
        let t = &p.transmissions;
        let values: Vec<f64> = vec![
            p.ratio,
            p.kappa_a / MHZ_TO_ANGULAR,
            p.kappa_b / MHZ_TO_ANGULAR,
            t.get(1, 2),
            t.get(1, 4),
            t.get(2, 1),
            t.get(2, 3),
            t.get(3, 2),
            t.get(3, 4),
            t.get(4, 1),
            t.get(4, 3),
            t.get(1, 1),
            t.get(1, 3),
            t.get(2, 2),
            t.get(2, 4),
            t.get(3, 1),
            t.get(3, 3),
            t.get(4, 2),
            t.get(4, 4),
            p.metrics.fidelity,
            p.metrics.eta,
        ];
        let cells: Vec<String> = values.iter().map(|v| format!("{v}")).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn scan_json(params: &SystemParams, kind: ModelKind, result: &ScanResult) -> serde_json::Value {
    let best = &result.points[result.optimum];
    json!({
        "params": ParamsSnapshot::new(params),
        "model": model_kind_label(kind),
        "objective": format!("{:?}", result.objective),
        "optimum": {
            "ratio": best.ratio,
            "fidelity": best.metrics.fidelity,
            "eta": best.metrics.eta,
        },
        "points": result.points.iter().map(|p| json!({
            "ratio": p.ratio,
            "kappa_a": p.kappa_a / MHZ_TO_ANGULAR,
            "kappa_b": p.kappa_b / MHZ_TO_ANGULAR,
            "transmissions": p.transmissions.rows(),
            "fidelity": p.metrics.fidelity,
            "eta": p.metrics.eta,
        })).collect::<Vec<_>>(),
    })
}

pub fn g2_csv(trace: &CorrelationTrace) -> String {
    let mut out = String::from("tau_us,g2\n");
    for (tau, g2) in trace.tau_us.iter().zip(&trace.g2) {
        out.push_str(&format!("{tau},{g2}\n"));
    }
    out
}

pub fn g2_json(params: &SystemParams, trace: &CorrelationTrace) -> serde_json::Value {
    json!({
        "params": ParamsSnapshot::new(params),
        "input_port": trace.input_port,
        "output_port": trace.output_port,
        "g2_zero": trace.g2_zero,
        "normalization": trace.normalization,
        "tau_us": trace.tau_us,
        "g2": trace.g2,
    })
}

/// Human-readable metrics block for stdout.
pub fn metrics_text(metrics: &CirculatorMetrics) -> String {
    let iso: Vec<String> = metrics
        .isolations
        .iter()
        .map(|v| if v.is_finite() { format!("{v:.2}") } else { ">99".into() })
        .collect();
    format!(
        "direction: {:?}\nfidelity:  {:.4}\neta:       {:.4}\neta_i:     {:.4} {:.4} {:.4} {:.4}\nI_i (dB):  {}\n",
        metrics.direction,
        metrics.fidelity,
        metrics.eta,
        metrics.eta_per_port[0],
        metrics.eta_per_port[1],
        metrics.eta_per_port[2],
        metrics.eta_per_port[3],
        iso.join(" ")
    )
}

/// Parse a 4x4 matrix from CSV (as produced by [`matrix_csv`], comments and
/// blank lines ignored).
pub fn parse_matrix_csv(text: &str) -> crate::Result<TransmissionMatrix> {
    let mut rows: Vec<[f64; 4]> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        if cells.len() != 4 {
            return Err(crate::Error::Config(format!(
                "line {}: expected 4 comma-separated values, got {}",
                lineno + 1,
                cells.len()
            )));
        }
        let mut row = [0.0; 4];
        for (k, cell) in cells.iter().enumerate() {
            row[k] = cell.parse::<f64>().map_err(|e| {
                crate::Error::Config(format!("line {}: bad number {cell:?}: {e}", lineno + 1))
            })?;
        }
        rows.push(row);
    }
    if rows.len() != 4 {
        return Err(crate::Error::Config(format!("expected 4 matrix rows, got {}", rows.len())));
    }
    TransmissionMatrix::new([rows[0], rows[1], rows[2], rows[3]])
}

pub fn atom_state_str(params: &SystemParams) -> &'static str {
    atom_state_label(params.atom_state)
}
