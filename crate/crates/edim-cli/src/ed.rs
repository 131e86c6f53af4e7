//! Single-shot formula evaluation: one tuple in, the value with its case
//! label, assumptions, and warnings out.

use edim_core::formulas::essential_dimension;
use serde::Serialize;

use crate::params::GroupSpec;
use crate::{map_core_err, render, CliError, CmdOutput, Format, SCHEMA_VERSION};

#[derive(Debug, Clone, Serialize)]
struct EdPayload {
    schema_version: u32,
    command: &'static str,
    #[serde(flatten)]
    tuple: GroupSpec,
    value: u64,
    case_label: String,
    assumptions: Vec<String>,
    warnings: Vec<String>,
}

/// Computes the essential l-dimension of one group and renders it.
pub fn cmd_ed(spec: &GroupSpec, format: Format) -> Result<CmdOutput, CliError> {
    let ed = essential_dimension(spec.family, spec.n, spec.p, spec.r, spec.l)
        .map_err(map_core_err)?;
    let payload = EdPayload {
        schema_version: SCHEMA_VERSION,
        command: "ed",
        tuple: spec.clone(),
        value: ed.value,
        case_label: ed.case_label,
        assumptions: ed.assumptions,
        warnings: ed.warnings,
    };
    let stdout = match format {
        Format::Json => render::json(&payload)?,
        Format::Csv => {
            let mut out = render::csv_row(&[
                "family".into(),
                "n".into(),
                "p".into(),
                "r".into(),
                "q".into(),
                "l".into(),
                "value".into(),
                "case_label".into(),
                "assumptions".into(),
                "warnings".into(),
            ]);
            out.push_str(&render::csv_row(&[
                spec.family.label(),
                spec.n.to_string(),
                spec.p.to_string(),
                spec.r.to_string(),
                spec.q.to_string(),
                spec.l.to_string(),
                payload.value.to_string(),
                payload.case_label.clone(),
                payload.assumptions.join("; "),
                payload.warnings.join("; "),
            ]));
            out
        }
        Format::Text => {
            let mut out = String::new();
            out.push_str(&format!("group: {}\n", spec.group_label()));
            out.push_str(&format!("l: {}\n", spec.l));
            out.push_str(&format!("value: {}\n", payload.value));
            out.push_str(&format!("case: {}\n", payload.case_label));
            for a in &payload.assumptions {
                out.push_str(&format!("assumption: {a}\n"));
            }
            for w in &payload.warnings {
                out.push_str(&format!("warning: {w}\n"));
            }
            out
        }
    };
    Ok(CmdOutput::ok(stdout))
}
