//! The enumeration oracle behind `verify`: maps a linear-family tuple to
//! its abstract Sylow model, runs the minimal-faithful-dimension search,
//! and compares against the closed form. The deep mode additionally
//! certifies faithfulness by direct kernel intersection and checks the
//! per-block minimal dimensions.

use std::collections::HashSet;

use edim_core::formulas::{essential_dimension, Family};
use edim_core::mackey::{kernel_of_rep, min_faithful_dim, min_dim_for_block};
use edim_core::numth::{block_structure, digit_sum, nu, sylow_params};
use edim_core::wreath::{make_group_with_budget, WreathElement, WreathGroup, WreathVariant};
use edim_core::EdError;
use num_bigint::BigUint;
use serde::Serialize;

use crate::params::GroupSpec;
use crate::CliError;

/// Comparison status of one verified tuple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    #[serde(rename = "match")]
    Match,
    #[serde(rename = "mismatch")]
    Mismatch,
    #[serde(rename = "skipped-budget")]
    SkippedBudget,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Match => "match",
            Status::Mismatch => "mismatch",
            Status::SkippedBudget => "skipped-budget",
        }
    }
}

/// Everything the oracle learned about one tuple.
#[derive(Debug, Clone, Serialize)]
pub struct TupleOutcome {
    pub tuple: GroupSpec,
    pub formula_value: u64,
    pub oracle_value: Option<u64>,
    pub center_rank_formula: u64,
    pub center_rank_enumerated: Option<u64>,
    pub status: Status,
    /// True for the flagged degenerate tuples (n an l-power inside the
    /// determinant-one subtraction branch, where the closed form returns 0
    /// for a nontrivial group and is documented as such).
    pub edge: bool,
    pub warnings: Vec<String>,
    /// Deep mode only: the witnesses' kernels intersect trivially.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kernel_intersection_trivial: Option<bool>,
    /// Deep mode only (torus-shape groups): every block minimum is the
    /// block size.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub block_minima_match: Option<bool>,
}

/// The abstract model a linear tuple reduces to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bridge {
    pub variant: WreathVariant,
    /// Base rank m for the torus shape, ambient rank n otherwise.
    pub m_or_n: u64,
    pub s: u32,
}

/// Selects the wreath model of the Sylow subgroup for a linear-family
/// tuple: the free torus shape unless l divides q - 1, the determinant-one
/// shape for SL there, and the scalar-quotient shapes for PSL when l also
/// divides n.
pub fn bridge(spec: &GroupSpec) -> Result<Bridge, EdError> {
    let sp = sylow_params(spec.n, spec.p, spec.r, spec.l)?;
    let free = Bridge {
        variant: WreathVariant::Gl,
        m_or_n: sp.n0,
        s: sp.s,
    };
    let subtracting = sp.d == 1;
    let b = match spec.family {
        Family::Gl => free,
        Family::Sl if subtracting => Bridge {
            variant: WreathVariant::Sl,
            m_or_n: spec.n,
            s: sp.s,
        },
        Family::Sl => free,
        Family::Psl if subtracting => {
            let t = nu(spec.l, spec.n)?;
            if t == 0 {
                Bridge {
                    variant: WreathVariant::Sl,
                    m_or_n: spec.n,
                    s: sp.s,
                }
            } else if sp.s <= t {
                Bridge {
                    variant: WreathVariant::PslCase1 { t },
                    m_or_n: spec.n,
                    s: sp.s,
                }
            } else {
                Bridge {
                    variant: WreathVariant::PslCase2 { t },
                    m_or_n: spec.n,
                    s: sp.s,
                }
            }
        }
        Family::Psl => free,
        _ => {
            return Err(EdError::BadParameter(format!(
                "the enumeration oracle covers GL, SL, and PSL; got {}",
                spec.family.label()
            )))
        }
    };
    Ok(b)
}

/// The closed-form center-rank prediction for a bridged model: the base-l
/// digit sum of the torus rank, less one for the determinant-one and
/// quotient shapes.
pub fn predicted_center_rank(b: &Bridge, l: u64) -> Result<u64, EdError> {
    let points = b.m_or_n;
    if points == 0 {
        return Ok(0);
    }
    let ds = digit_sum(points, l)?;
    Ok(match b.variant {
        WreathVariant::Gl => ds,
        _ => ds.saturating_sub(1),
    })
}

/// Builds the bridged model if its group order fits the element budget.
pub fn build_group(b: &Bridge, l: u64, budget: u64) -> Result<Option<WreathGroup>, EdError> {
    let group = match make_group_with_budget(l, b.s, b.m_or_n, b.variant, budget) {
        Ok(g) => g,
        Err(EdError::BudgetExceeded { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    if group.order > BigUint::from(budget) {
        return Ok(None);
    }
    Ok(Some(group))
}

/// Runs the oracle on one tuple. `deep` adds the kernel-intersection and
/// per-block-minimum certificates.
pub fn run_tuple(spec: &GroupSpec, budget: u64, deep: bool) -> Result<TupleOutcome, CliError> {
    let ed = essential_dimension(spec.family, spec.n, spec.p, spec.r, spec.l)
        .map_err(|e| CliError::Internal(format!("{} rejected a grid tuple: {e}", spec.group_label())))?;
    let edge = ed.warnings.iter().any(|w| w.starts_with("degenerate:"));
    let b = bridge(spec).map_err(crate::map_core_err)?;
    let center_rank_formula = predicted_center_rank(&b, spec.l).map_err(crate::map_core_err)?;

    let mut outcome = TupleOutcome {
        tuple: spec.clone(),
        formula_value: ed.value,
        oracle_value: None,
        center_rank_formula,
        center_rank_enumerated: None,
        status: Status::SkippedBudget,
        edge,
        warnings: ed.warnings,
        kernel_intersection_trivial: None,
        block_minima_match: None,
    };

    let group = match build_group(&b, spec.l, budget).map_err(crate::map_core_err)? {
        Some(g) => g,
        None => return Ok(outcome),
    };
    let mf = match min_faithful_dim(&group, budget) {
        Ok(mf) => mf,
        Err(EdError::BudgetExceeded { .. }) => return Ok(outcome),
        Err(e) => return Err(crate::map_core_err(e)),
    };
    outcome.oracle_value = Some(mf.dim);
    outcome.center_rank_enumerated = Some(mf.center.rank);
    outcome.status = if mf.dim == ed.value {
        Status::Match
    } else {
        Status::Mismatch
    };

    if deep {
        outcome.kernel_intersection_trivial =
            Some(kernel_intersection_is_trivial(&group, &mf.witnesses, budget)?);
        if matches!(b.variant, WreathVariant::Gl) && b.m_or_n >= 1 {
            outcome.block_minima_match = Some(blocks_match(&group, b.m_or_n, spec.l)?);
        }
    }
    Ok(outcome)
}

fn kernel_intersection_is_trivial(
    group: &WreathGroup,
    witnesses: &[edim_core::mackey::MonomialRep],
    budget: u64,
) -> Result<bool, CliError> {
    if witnesses.is_empty() {
        return Ok(group.order == BigUint::from(1u32));
    }
    let mut intersection: Option<HashSet<WreathElement>> = None;
    for rep in witnesses {
        let kernel = kernel_of_rep(group, rep, budget).map_err(crate::map_core_err)?;
        let keys: HashSet<WreathElement> = kernel.into_iter().collect();
        intersection = Some(match intersection {
            None => keys,
            Some(prev) => prev.intersection(&keys).cloned().collect(),
        });
    }
    let inter = intersection.expect("witnesses nonempty");
    Ok(inter.len() == 1 && inter.contains(&group.identity()))
}

fn blocks_match(group: &WreathGroup, m: u64, l: u64) -> Result<bool, CliError> {
    let bs = block_structure(m, l).map_err(crate::map_core_err)?;
    for block in &bs.blocks {
        let got = min_dim_for_block(group, block).map_err(crate::map_core_err)?;
        if got != block.size(l) {
            return Ok(false);
        }
    }
    Ok(true)
}
