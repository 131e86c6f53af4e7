//! Sylow structure report: the (d, s, n0) parameters, the reduced linear
//! shape with its digit/block table and predicted center rank, the exact
//! l-exponent of the group order, and the explicit matrix model when one
//! exists.

use edim_core::formulas::{essential_dimension, Family};
use edim_core::gf::{group_order_l_part, sylow_generators, FormKind};
use edim_core::numth::{block_structure, digit_sum, nu, nu_big, q_big, sylow_params};
use edim_core::EdError;
use num_bigint::BigUint;
use serde::Serialize;

use crate::params::GroupSpec;
use crate::{map_core_err, render, CliError, CmdOutput, Format, SCHEMA_VERSION};

/// Which abstract shape the Sylow subgroup takes after the case analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ShapeKind {
    /// Free torus `(Z/l^s)^points` extended by the block permutations.
    #[serde(rename = "torus")]
    Torus,
    /// Determinant-one sublattice inside the rank-`rank` torus.
    #[serde(rename = "det-one")]
    DetOne,
    /// Determinant-one sublattice modulo an l-power scalar subgroup.
    #[serde(rename = "scalar-quotient")]
    Quotient,
}

/// The reduced linear problem a family tuple collapses to.
#[derive(Debug, Clone, Copy)]
pub struct Reduced {
    pub kind: ShapeKind,
    /// Ambient rank of the reduced linear group.
    pub rank: u64,
    /// 2 when the reduction lands over F_{q^2} (unitary families), else 1.
    pub ext_mult: u32,
    /// Coordinates the permutation part acts on: floor(rank/d_red) for the
    /// torus shape, rank itself for the subtracting shapes.
    pub points: u64,
    /// The torus coordinates are Z/l^{s_torus}.
    pub s_torus: u32,
    /// l-adic valuation of the quotiented scalar subgroup (Quotient only).
    pub t: u32,
}

/// Collapses a family tuple to its reduced linear shape, mirroring the
/// case analysis of the closed forms. Precondition: the tuple validates.
pub fn reduced_shape(spec: &GroupSpec) -> Result<Reduced, EdError> {
    let (n, p, r, l) = (spec.n, spec.p, spec.r, spec.l);
    let sp = sylow_params(n, p, r, l)?;
    let d = sp.d;
    let m = n / 2;

    // Unitary families at l = 2 use the 2-part of q + 1, not of q^2 - 1.
    if spec.family.is_unitary() && l == 2 {
        let s2 = nu_big(2, &(q_big(p, r) + BigUint::from(1u32)))?;
        let kind = match spec.family {
            Family::U => ShapeKind::Torus,
            Family::Su => ShapeKind::DetOne,
            Family::Psu => {
                if nu(2, n)? >= 1 {
                    ShapeKind::Quotient
                } else {
                    ShapeKind::DetOne
                }
            }
            _ => unreachable!(),
        };
        let t = if kind == ShapeKind::Quotient {
            nu(2, n)?.min(s2)
        } else {
            0
        };
        return Ok(Reduced {
            kind,
            rank: n,
            ext_mult: 2,
            points: n,
            s_torus: s2,
            t,
        });
    }

    let torus_same_field = |rank: u64| -> Result<Reduced, EdError> {
        let spr = sylow_params(rank.max(1), p, r, l)?;
        Ok(Reduced {
            kind: ShapeKind::Torus,
            rank,
            ext_mult: 1,
            points: if rank == 0 { 0 } else { spr.n0 },
            s_torus: spr.s,
            t: 0,
        })
    };
    let torus_ext_field = |rank: u64| -> Result<Reduced, EdError> {
        let spr = sylow_params(rank.max(1), p, 2 * r, l)?;
        Ok(Reduced {
            kind: ShapeKind::Torus,
            rank,
            ext_mult: 2,
            points: if rank == 0 { 0 } else { spr.n0 },
            s_torus: spr.s,
            t: 0,
        })
    };
    let subtracting_shape = |ext_mult: u32, t_raw: u32| -> Reduced {
        let kind = if t_raw >= 1 {
            ShapeKind::Quotient
        } else {
            ShapeKind::DetOne
        };
        Reduced {
            kind,
            rank: n,
            ext_mult,
            points: n,
            s_torus: sp.s,
            // The quotiented scalar subgroup's l-part is l^min(s, nu_l(n)).
            t: t_raw.min(sp.s),
        }
    };

    match spec.family {
        Family::Gl => torus_same_field(n),
        Family::Sl => {
            if d == 1 {
                Ok(subtracting_shape(1, 0))
            } else {
                torus_same_field(n)
            }
        }
        Family::Psl => {
            if d == 1 {
                Ok(subtracting_shape(1, nu(l, n)?))
            } else {
                torus_same_field(n)
            }
        }
        Family::SlQuotient { n_prime } => {
            if d == 1 {
                Ok(subtracting_shape(1, nu(l, n_prime.max(1))?))
            } else {
                torus_same_field(n)
            }
        }
        Family::Sp | Family::PSp => {
            if d % 2 == 0 {
                torus_same_field(n)
            } else {
                torus_same_field(m)
            }
        }
        Family::OrthOdd | Family::POmegaOdd => {
            if d % 2 == 0 {
                torus_same_field(n - 1)
            } else {
                torus_same_field(m)
            }
        }
        Family::OrthPlus | Family::POmegaPlus => {
            if d % 2 == 1 {
                torus_same_field(m)
            } else if sp.n0 % 2 == 0 {
                torus_same_field(n)
            } else {
                torus_same_field(n - 2)
            }
        }
        Family::OrthMinus | Family::POmegaMinus => {
            if d % 2 == 1 {
                torus_same_field(m - 1)
            } else if sp.n0 % 2 == 1 {
                torus_same_field(n)
            } else {
                torus_same_field(n - 2)
            }
        }
        Family::U => {
            if d % 4 == 2 {
                torus_ext_field(n)
            } else {
                torus_ext_field(m)
            }
        }
        Family::Su => {
            if d == 2 {
                // l | q + 1: determinant-one shape over F_{q^2}, where
                // l | q^2 - 1 with extension-field order 1.
                let s2 = sylow_params(n, p, 2 * r, l)?.s;
                Ok(Reduced {
                    s_torus: s2,
                    ..subtracting_shape(2, 0)
                })
            } else if d % 4 == 2 {
                torus_ext_field(n)
            } else {
                torus_ext_field(m)
            }
        }
        Family::Psu => {
            if d == 2 {
                let s2 = sylow_params(n, p, 2 * r, l)?.s;
                Ok(Reduced {
                    s_torus: s2,
                    ..subtracting_shape(2, nu(l, n)?)
                })
            } else if d % 4 == 2 {
                torus_ext_field(n)
            } else {
                torus_ext_field(m)
            }
        }
    }
}

/// Human shape description like `(Z/9)^4 ⋊ P_3(S_4)`.
fn shape_string(red: &Reduced, l: u64) -> String {
    if red.points == 0 {
        return "trivial".to_string();
    }
    let modulus = BigUint::from(l).pow(red.s_torus);
    let torus = if red.points == 1 {
        format!("Z/{modulus}")
    } else {
        format!("(Z/{modulus})^{}", red.points)
    };
    let core = match red.kind {
        ShapeKind::Torus => torus,
        ShapeKind::DetOne => format!("det-one sublattice of {torus}"),
        ShapeKind::Quotient => format!(
            "det-one sublattice of {torus} modulo scalars of order {}",
            BigUint::from(l).pow(red.t)
        ),
    };
    let with_perm = if red.points >= l {
        format!("{core} ⋊ P_{l}(S_{})", red.points)
    } else {
        core
    };
    if red.points < l && matches!(red.kind, ShapeKind::Torus) {
        format!("abelian: {with_perm}")
    } else {
        with_perm
    }
}

#[derive(Debug, Clone, Serialize)]
struct MatrixModelReport {
    dimension: usize,
    field_order: u64,
    form: String,
    det_one: bool,
    hermitian_conjugation: bool,
    generator_count: usize,
    predicted_order_exponent: u64,
    notes: Vec<String>,
    generators: Vec<Vec<Vec<u8>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    forms_checked: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
struct SylowPayload {
    schema_version: u32,
    command: &'static str,
    #[serde(flatten)]
    tuple: GroupSpec,
    d: u32,
    s: u32,
    n0: u64,
    reduction_case: String,
    shape_kind: ShapeKind,
    shape: String,
    over_field: String,
    torus_points: u64,
    torus_modulus_exponent: u32,
    block_sizes: Vec<u64>,
    predicted_center_rank: u64,
    sylow_order_exponent: u64,
    abelian: bool,
    warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    matrix_model: Option<MatrixModelReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    matrix_model_unavailable: Option<String>,
}

fn form_kind_name(kind: &FormKind) -> &'static str {
    match kind {
        FormKind::None => "none",
        FormKind::Symplectic => "symplectic",
        FormKind::OrthPlus => "orthogonal (plus type)",
        FormKind::OrthMinus => "orthogonal (minus type)",
        FormKind::OrthOdd => "orthogonal (odd dimension)",
        FormKind::Hermitian => "hermitian",
    }
}

fn matrix_rows(m: &edim_core::gf::Mat) -> Vec<Vec<u8>> {
    (0..m.n)
        .map(|i| (0..m.n).map(|j| m.at(i, j)).collect())
        .collect()
}

/// Builds the structure report for one tuple.
pub fn cmd_sylow(spec: &GroupSpec, check_forms: bool, format: Format) -> Result<CmdOutput, CliError> {
    // The same validation gate as the formula path decides support.
    let ed = essential_dimension(spec.family, spec.n, spec.p, spec.r, spec.l)
        .map_err(map_core_err)?;
    let sp = sylow_params(spec.n, spec.p, spec.r, spec.l).map_err(map_core_err)?;
    let red = reduced_shape(spec).map_err(map_core_err)?;

    let block_sizes: Vec<u64> = if red.points == 0 {
        vec![]
    } else {
        block_structure(red.points, spec.l)
            .map_err(map_core_err)?
            .blocks
            .iter()
            .map(|b| b.size(spec.l))
            .collect()
    };
    let predicted_center_rank = if red.points == 0 {
        0
    } else {
        let ds = digit_sum(red.points, spec.l).map_err(map_core_err)?;
        match red.kind {
            ShapeKind::Torus => ds,
            _ => ds.saturating_sub(1),
        }
    };
    let sylow_order_exponent =
        group_order_l_part(spec.family, spec.n, spec.p, spec.r, spec.l).map_err(map_core_err)?;
    let abelian = red.points < spec.l;
    let over_field = if red.ext_mult == 2 {
        format!("F_{}^2 (extension of F_{})", spec.q, spec.q)
    } else {
        format!("F_{}", spec.q)
    };

    let (matrix_model, matrix_model_unavailable) =
        match sylow_generators(spec.family, spec.n, spec.p, spec.r, spec.l) {
            Ok(model) => {
                let forms_checked = if check_forms {
                    Some(model.check_generators().map_err(map_core_err)?)
                } else {
                    None
                };
                let report = MatrixModelReport {
                    dimension: model.dim,
                    field_order: model.field.spec.size(),
                    form: form_kind_name(&model.form.kind).to_string(),
                    det_one: model.det_one,
                    hermitian_conjugation: model.conj_power.is_some(),
                    generator_count: model.generators.len(),
                    predicted_order_exponent: model.predicted_exponent,
                    notes: model.notes.clone(),
                    generators: model.generators.iter().map(matrix_rows).collect(),
                    forms_checked,
                };
                (Some(report), None)
            }
            Err(EdError::UnsupportedCase(m)) => (None, Some(m)),
            Err(e) => (None, Some(e.to_string())),
        };

    let payload = SylowPayload {
        schema_version: SCHEMA_VERSION,
        command: "sylow",
        tuple: spec.clone(),
        d: sp.d,
        s: sp.s,
        n0: sp.n0,
        reduction_case: ed.case_label,
        shape_kind: red.kind,
        shape: shape_string(&red, spec.l),
        over_field,
        torus_points: red.points,
        torus_modulus_exponent: red.s_torus,
        block_sizes,
        predicted_center_rank,
        sylow_order_exponent,
        abelian,
        warnings: ed.warnings,
        matrix_model,
        matrix_model_unavailable,
    };

    let stdout = match format {
        Format::Json => render::json(&payload)?,
        Format::Csv => render_csv(&payload),
        Format::Text => render_text(&payload, spec),
    };
    Ok(CmdOutput::ok(stdout))
}

fn render_csv(p: &SylowPayload) -> String {
    let mut out = render::csv_row(&[
        "family".into(),
        "n".into(),
        "p".into(),
        "r".into(),
        "q".into(),
        "l".into(),
        "d".into(),
        "s".into(),
        "n0".into(),
        "shape".into(),
        "block_sizes".into(),
        "predicted_center_rank".into(),
        "sylow_order_exponent".into(),
        "abelian".into(),
        "reduction_case".into(),
    ]);
    out.push_str(&render::csv_row(&[
        p.tuple.family.label(),
        p.tuple.n.to_string(),
        p.tuple.p.to_string(),
        p.tuple.r.to_string(),
        p.tuple.q.to_string(),
        p.tuple.l.to_string(),
        p.d.to_string(),
        p.s.to_string(),
        p.n0.to_string(),
        p.shape.clone(),
        format!(
            "[{}]",
            p.block_sizes
                .iter()
                .map(|b| b.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        ),
        p.predicted_center_rank.to_string(),
        p.sylow_order_exponent.to_string(),
        p.abelian.to_string(),
        p.reduction_case.clone(),
    ]));
    out
}

fn render_text(p: &SylowPayload, spec: &GroupSpec) -> String {
    let mut out = String::new();
    out.push_str(&format!("group: {}\n", spec.group_label()));
    out.push_str(&format!("l: {}\n", spec.l));
    out.push_str(&format!("d: {}\n", p.d));
    out.push_str(&format!("s: {}\n", p.s));
    out.push_str(&format!("n0: {}\n", p.n0));
    out.push_str(&format!("case: {}\n", p.reduction_case));
    out.push_str(&format!("shape: {} over {}\n", p.shape, p.over_field));
    out.push_str(&format!(
        "blocks: [{}]\n",
        p.block_sizes
            .iter()
            .map(|b| b.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    ));
    out.push_str(&format!(
        "predicted center rank: {}\n",
        p.predicted_center_rank
    ));
    out.push_str(&format!(
        "sylow order exponent: {} (order {}^{})\n",
        p.sylow_order_exponent, spec.l, p.sylow_order_exponent
    ));
    for w in &p.warnings {
        out.push_str(&format!("warning: {w}\n"));
    }
    match (&p.matrix_model, &p.matrix_model_unavailable) {
        (Some(m), _) => {
            out.push_str(&format!(
                "matrix model: dimension {} over F_{}, form {}, {} generator{}{}\n",
                m.dimension,
                m.field_order,
                m.form,
                m.generator_count,
                if m.generator_count == 1 { "" } else { "s" },
                if m.det_one { ", determinant one" } else { "" }
            ));
            for note in &m.notes {
                out.push_str(&format!("model note: {note}\n"));
            }
            for (i, g) in m.generators.iter().enumerate() {
                let rows: Vec<String> = g
                    .iter()
                    .map(|row| {
                        format!(
                            "[{}]",
                            row.iter()
                                .map(|e| e.to_string())
                                .collect::<Vec<_>>()
                                .join(" ")
                        )
                    })
                    .collect();
                out.push_str(&format!("generator {}: [{}]\n", i + 1, rows.join(" ")));
            }
            if let Some(ok) = m.forms_checked {
                out.push_str(&format!(
                    "form check: {}\n",
                    if ok { "all generators satisfy the defining equations" } else { "FAILED" }
                ));
            }
        }
        (None, Some(reason)) => {
            out.push_str(&format!("matrix model unavailable: {reason}\n"));
        }
        (None, None) => {}
    }
    out
}
