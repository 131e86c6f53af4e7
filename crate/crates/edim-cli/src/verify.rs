//! Grid verification sweep: every in-gate tuple of the requested grid is
//! run through the enumeration oracle and compared with the closed form.
//! Flagged degenerate tuples (n an l-power inside the subtraction branch)
//! are reported in their own section and do not fail the exit code unless
//! `--strict` promotes them.

use edim_core::formulas::{validate, Family};
use rayon::prelude::*;
use serde::Serialize;

use crate::oracle::{run_tuple, Status, TupleOutcome};
use crate::params::GroupSpec;
use crate::{render, CliError, CmdOutput, Format, SCHEMA_VERSION};

/// Bounds of a verification sweep.
#[derive(Debug, Clone)]
pub struct VerifyArgs {
    /// Families to sweep; defaults to GL, SL, PSL (the oracle's scope).
    pub families: Vec<Family>,
    /// Inclusive upper bound on the matrix size n.
    pub max_n: u64,
    pub qs: Vec<u64>,
    pub ls: Vec<u64>,
    /// Element budget per tuple; larger groups are skipped, not failed.
    pub budget: u64,
    pub strict: bool,
    pub deep: bool,
}

impl Default for VerifyArgs {
    fn default() -> VerifyArgs {
        VerifyArgs {
            families: vec![Family::Gl, Family::Sl, Family::Psl],
            max_n: 6,
            qs: vec![3, 4, 5, 7, 8, 9],
            ls: vec![2, 3, 5],
            budget: 1 << 20,
            strict: false,
            deep: false,
        }
    }
}

/// A sweep report: the grid, one record per tuple, the flagged degenerate
/// section, and the mismatch counts driving the exit code.
#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub strict: bool,
    pub budget: u64,
    pub grid: Vec<GroupSpec>,
    pub records: Vec<TupleOutcome>,
    /// The flagged degenerate tuples (subset of `records`' tuples), with
    /// their statuses.
    pub flagged_degenerate: Vec<EdgeEntry>,
    pub mismatches_outside_flagged: u64,
    pub flagged_mismatches: u64,
    pub skipped: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct EdgeEntry {
    pub tuple: GroupSpec,
    pub status: Status,
    pub formula_value: u64,
    pub oracle_value: Option<u64>,
}

/// Builds the grid in its canonical order (family, then l, then q, then
/// n), keeping exactly the tuples that pass the validation gates.
pub fn build_grid(args: &VerifyArgs) -> Result<Vec<GroupSpec>, CliError> {
    let mut grid = Vec::new();
    for &family in &args.families {
        if !matches!(family, Family::Gl | Family::Sl | Family::Psl) {
            return Err(CliError::Usage(format!(
                "the enumeration oracle covers GL, SL, and PSL; got {}",
                family.label()
            )));
        }
        for &l in &args.ls {
            for &q in &args.qs {
                let (p, r) = crate::params::factor_prime_power(q)
                    .ok_or_else(|| CliError::Usage(format!("q = {q} is not a prime power")))?;
                for n in 1..=args.max_n {
                    if validate(family, n, p, r, l).is_ok() {
                        grid.push(GroupSpec::new(family, n, p, r, l)?);
                    }
                }
            }
        }
    }
    Ok(grid)
}

/// Runs the sweep. Tuples fan out to the worker pool; the report lists
/// them in grid order regardless of completion order.
pub fn run_verify(args: &VerifyArgs) -> Result<VerifyReport, CliError> {
    if args.budget == 0 {
        return Err(CliError::Usage("budget must be >= 1".into()));
    }
    let grid = build_grid(args)?;
    let records: Vec<TupleOutcome> = grid
        .par_iter()
        .map(|spec| run_tuple(spec, args.budget, args.deep))
        .collect::<Result<Vec<_>, CliError>>()?;

    let flagged_degenerate: Vec<EdgeEntry> = records
        .iter()
        .filter(|rec| rec.edge)
        .map(|rec| EdgeEntry {
            tuple: rec.tuple.clone(),
            status: rec.status,
            formula_value: rec.formula_value,
            oracle_value: rec.oracle_value,
        })
        .collect();
    let mismatches_outside_flagged = records
        .iter()
        .filter(|rec| rec.status == Status::Mismatch && !rec.edge)
        .count() as u64;
    let flagged_mismatches = records
        .iter()
        .filter(|rec| rec.status == Status::Mismatch && rec.edge)
        .count() as u64;
    let skipped = records
        .iter()
        .filter(|rec| rec.status == Status::SkippedBudget)
        .count() as u64;

    Ok(VerifyReport {
        schema_version: SCHEMA_VERSION,
        command: "verify",
        strict: args.strict,
        budget: args.budget,
        grid,
        records,
        flagged_degenerate,
        mismatches_outside_flagged,
        flagged_mismatches,
        skipped,
    })
}

/// Exit code of a finished sweep: 3 when mismatches escape the flagged
/// section (or, under `--strict`, occur at all), else 0.
pub fn report_exit_code(report: &VerifyReport) -> i32 {
    if report.mismatches_outside_flagged > 0 {
        3
    } else if report.strict && report.flagged_mismatches > 0 {
        3
    } else {
        0
    }
}

/// Runs a sweep and renders it.
pub fn cmd_verify(args: &VerifyArgs, format: Format) -> Result<CmdOutput, CliError> {
    let report = run_verify(args)?;
    let exit_code = report_exit_code(&report);
    let stdout = match format {
        Format::Json => render::json(&report)?,
        Format::Csv => render_csv(&report),
        Format::Text => render_text(&report),
    };
    Ok(CmdOutput { stdout, exit_code })
}

fn opt_str<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_default()
}

fn render_csv(report: &VerifyReport) -> String {
    let mut out = render::csv_row(&[
        "family".into(),
        "n".into(),
        "p".into(),
        "r".into(),
        "q".into(),
        "l".into(),
        "formula_value".into(),
        "oracle_value".into(),
        "center_rank_formula".into(),
        "center_rank_enumerated".into(),
        "status".into(),
        "flagged_degenerate".into(),
        "warnings".into(),
    ]);
    for rec in &report.records {
        out.push_str(&render::csv_row(&[
            rec.tuple.family.label(),
            rec.tuple.n.to_string(),
            rec.tuple.p.to_string(),
            rec.tuple.r.to_string(),
            rec.tuple.q.to_string(),
            rec.tuple.l.to_string(),
            rec.formula_value.to_string(),
            opt_str(&rec.oracle_value),
            rec.center_rank_formula.to_string(),
            opt_str(&rec.center_rank_enumerated),
            rec.status.as_str().to_string(),
            rec.edge.to_string(),
            rec.warnings.join("; "),
        ]));
    }
    out
}

fn render_text(report: &VerifyReport) -> String {
    let mut rows = vec![vec![
        "group".to_string(),
        "l".to_string(),
        "formula".to_string(),
        "oracle".to_string(),
        "zr formula".to_string(),
        "zr found".to_string(),
        "status".to_string(),
    ]];
    for rec in &report.records {
        rows.push(vec![
            rec.tuple.group_label(),
            rec.tuple.l.to_string(),
            rec.formula_value.to_string(),
            opt_str(&rec.oracle_value),
            rec.center_rank_formula.to_string(),
            opt_str(&rec.center_rank_enumerated),
            format!(
                "{}{}",
                rec.status.as_str(),
                if rec.edge { " (flagged degenerate)" } else { "" }
            ),
        ]);
    }
    let mut out = render::text_table(&rows);
    if !report.flagged_degenerate.is_empty() {
        out.push_str("\nflagged degenerate tuples (closed form 0 for a nontrivial group; n is an l-power in the subtraction branch):\n");
        for e in &report.flagged_degenerate {
            out.push_str(&format!(
                "  {} at l = {}: formula {}, oracle {}\n",
                e.tuple.group_label(),
                e.tuple.l,
                e.formula_value,
                opt_str(&e.oracle_value),
            ));
        }
    }
    out.push_str(&format!(
        "\ntuples: {}; mismatches outside flagged: {}; flagged mismatches: {}; skipped (budget): {}\n",
        report.records.len(),
        report.mismatches_outside_flagged,
        report.flagged_mismatches,
        report.skipped
    ));
    out
}
