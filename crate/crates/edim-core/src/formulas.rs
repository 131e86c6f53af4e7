//! Closed-form essential l-dimension for the finite classical groups.
//!
//! Every public entry point validates its hypotheses first (cross
//! characteristic, the l = 2 congruence gates, parity of n against the
//! family), then evaluates one branch of the case analysis and reports
//! which branch fired in `case_label`, which field assumptions the value
//! rests on in `assumptions`, and any degeneracy flags in `warnings`.
//!
//! Warnings are machine readable: a warning beginning with `"degenerate:"`
//! marks a parameter tuple where the subtraction branch returns 0 although
//! the Sylow subgroup is a nontrivial l-group (n an exact power of l in a
//! subtraction family). The value returned is the formula's value; the
//! enumeration oracles in `wreath`/`mackey` compute the group-theoretic
//! minimum independently and the verify pipeline reports both.

use serde::Serialize;

use crate::error::EdError;
use crate::numth::{
    self, is_prime, mu_prime, mult_order, q_big, sylow_params, weighted_digit_sum,
};
use num_bigint::BigUint;
use num_traits::ToPrimitive;

/// Classical-group family tag.
///
/// `n` in every public signature is the matrix size of the named group:
/// `Sp` at n = 4 means Sp(4, q), `U` at n = 3 means U(3, q^2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    Gl,
    Sl,
    Psl,
    /// SL_n / {aI : a^{n'} = 1}; carries n' which must divide n.
    SlQuotient {
        n_prime: u64,
    },
    Sp,
    PSp,
    OrthOdd,
    OrthPlus,
    OrthMinus,
    POmegaOdd,
    POmegaPlus,
    POmegaMinus,
    U,
    Su,
    Psu,
}

impl Family {
    pub fn is_linear(&self) -> bool {
        matches!(
            self,
            Family::Gl | Family::Sl | Family::Psl | Family::SlQuotient { .. }
        )
    }

    pub fn is_symplectic_or_orthogonal(&self) -> bool {
        matches!(
            self,
            Family::Sp
                | Family::PSp
                | Family::OrthOdd
                | Family::OrthPlus
                | Family::OrthMinus
                | Family::POmegaOdd
                | Family::POmegaPlus
                | Family::POmegaMinus
        )
    }

    pub fn is_unitary(&self) -> bool {
        matches!(self, Family::U | Family::Su | Family::Psu)
    }

    pub fn label(&self) -> String {
        match self {
            Family::Gl => "GL".into(),
            Family::Sl => "SL".into(),
            Family::Psl => "PSL".into(),
            Family::SlQuotient { n_prime } => format!("SL/C{n_prime}"),
            Family::Sp => "Sp".into(),
            Family::PSp => "PSp".into(),
            Family::OrthOdd => "O(odd)".into(),
            Family::OrthPlus => "O+".into(),
            Family::OrthMinus => "O-".into(),
            Family::POmegaOdd => "POmega(odd)".into(),
            Family::POmegaPlus => "POmega+".into(),
            Family::POmegaMinus => "POmega-".into(),
            Family::U => "U".into(),
            Family::Su => "SU".into(),
            Family::Psu => "PSU".into(),
        }
    }
}

/// A computed essential l-dimension with its provenance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Ed {
    pub value: u64,
    /// Which branch of the case analysis produced the value.
    pub case_label: String,
    /// Field assumptions the value rests on (root-of-unity, congruences).
    pub assumptions: Vec<String>,
    /// Degeneracy flags; entries beginning "degenerate:" are machine readable.
    pub warnings: Vec<String>,
}

fn q_mod(p: u64, r: u32, modulus: u64) -> u64 {
    let rem = q_big(p, r) % BigUint::from(modulus);
    rem.to_u64().unwrap_or(0)
}

fn basic_checks(n: u64, p: u64, r: u32, l: u64) -> Result<(), EdError> {
    if !is_prime(l) {
        return Err(EdError::BadParameter(format!("l = {l} is not prime")));
    }
    if !is_prime(p) {
        return Err(EdError::BadParameter(format!("p = {p} is not prime")));
    }
    if r == 0 {
        return Err(EdError::BadParameter("r must be >= 1".into()));
    }
    if n == 0 {
        return Err(EdError::BadParameter("n must be >= 1".into()));
    }
    if l == p {
        return Err(EdError::DefiningPrime { l, p });
    }
    Ok(())
}

fn root_of_unity_assumption(l: u64, s: u32) -> String {
    format!("k contains a primitive l^s-th root of unity, l^s = {}", BigUint::from(l).pow(s))
}

/// Checks the hypotheses of the relevant theorem and returns the field
/// assumptions under which its value holds.
pub fn validate(family: Family, n: u64, p: u64, r: u32, l: u64) -> Result<Vec<String>, EdError> {
    basic_checks(n, p, r, l)?;
    let mut assumptions = Vec::new();
    if family.is_linear() {
        if l == 2 && q_mod(p, r, 4) != 1 {
            return Err(EdError::UnsupportedCase(format!(
                "l = 2 with q = p^r = {} mod 4 for a linear family; only q = 1 mod 4 is covered",
                q_mod(p, r, 4)
            )));
        }
        if l == 2 {
            assumptions.push("q ≡ 1 (mod 4)".to_string());
        }
        let sp = sylow_params(n, p, r, l)?;
        assumptions.push(root_of_unity_assumption(l, sp.s));
        if let Family::SlQuotient { n_prime } = family {
            if n_prime == 0 || n % n_prime != 0 {
                return Err(EdError::BadParameter(format!(
                    "n' = {n_prime} must divide n = {n}"
                )));
            }
        }
    } else if family.is_symplectic_or_orthogonal() {
        if l == 2 {
            return Err(EdError::UnsupportedCase(
                "l = 2 for symplectic/orthogonal families is not covered".into(),
            ));
        }
        match family {
            Family::Sp | Family::PSp => {
                if n % 2 != 0 {
                    return Err(EdError::BadParameter(format!(
                        "symplectic groups need even matrix size, got n = {n}"
                    )));
                }
            }
            Family::OrthOdd | Family::POmegaOdd => {
                if n % 2 == 0 {
                    return Err(EdError::BadParameter(format!(
                        "odd orthogonal family needs odd n, got n = {n}"
                    )));
                }
            }
            Family::OrthPlus | Family::OrthMinus | Family::POmegaPlus | Family::POmegaMinus => {
                if n % 2 != 0 {
                    return Err(EdError::BadParameter(format!(
                        "even orthogonal family needs even n, got n = {n}"
                    )));
                }
            }
            _ => unreachable!(),
        }
        if matches!(
            family,
            Family::OrthOdd
                | Family::OrthPlus
                | Family::OrthMinus
                | Family::POmegaOdd
                | Family::POmegaPlus
                | Family::POmegaMinus
        ) && n < 3
        {
            return Err(EdError::BadParameter(format!(
                "orthogonal families need n >= 3, got n = {n}"
            )));
        }
        let sp = sylow_params(n, p, r, l)?;
        assumptions.push(root_of_unity_assumption(l, sp.s));
    } else {
        // Unitary families live over F_{q^2}; d is still the order of q.
        if l == 2 {
            match q_mod(p, r, 4) {
                3 => {
                    assumptions.push("q ≡ 3 (mod 4)".to_string());
                    let s_prime = numth::nu_big(2, &(q_big(p, r) + BigUint::from(1u32)))?;
                    assumptions.push(root_of_unity_assumption(2, s_prime));
                }
                _ => {
                    return Err(EdError::UnsupportedCase(
                        "l = 2 unitary families are covered only for q ≡ 3 (mod 4)".into(),
                    ));
                }
            }
        } else {
            let sp = sylow_params(n, p, r, l)?;
            assumptions.push(root_of_unity_assumption(l, sp.s));
        }
    }
    Ok(assumptions)
}

/// ed of GL_n(F_q) at l: the base-l digit sum of n0 weighted by l-powers,
/// which telescopes to n0 itself. Both are computed and cross-asserted.
pub fn ed_gl(n: u64, p: u64, r: u32, l: u64) -> Result<Ed, EdError> {
    let assumptions = validate(Family::Gl, n, p, r, l)?;
    let sp = sylow_params(n, p, r, l)?;
    let value = ed_gl_value(sp.n0, l)?;
    let case_label = if sp.n0 == 0 {
        format!("GL: d = {} > n, Sylow trivial", sp.d)
    } else {
        format!(
            "GL: weighted digit sum of n0 = {} (d = {}, s = {})",
            sp.n0, sp.d, sp.s
        )
    };
    Ok(Ed {
        value,
        case_label,
        assumptions,
        warnings: Vec::new(),
    })
}

/// The GL formula value for a reduced rank m (already divided by d):
/// Σ_k digit(m,l,k) l^k, cross-checked against the telescoped value m.
fn ed_gl_value(m: u64, l: u64) -> Result<u64, EdError> {
    if m == 0 {
        return Ok(0);
    }
    let sum = weighted_digit_sum(m, l)?;
    assert_eq!(sum, m, "digit sum must telescope to m");
    Ok(sum)
}

fn is_positive_l_power(n: u64, l: u64) -> bool {
    if n < l {
        return false;
    }
    let mut n = n;
    while n % l == 0 {
        n /= l;
    }
    n == 1
}

fn degenerate_warning(n: u64, l: u64) -> String {
    format!(
        "degenerate: formula value 0 for a nontrivial Sylow subgroup (n = {n} is a power of l = {l}); \
         the enumeration oracle computes a strictly positive minimal faithful dimension here"
    )
}

/// ed of SL_n(F_q) at l: equals GL unless l | q - 1, in which case the
/// lowest nonzero base-l digit of n is subtracted as l^{mu'}.
pub fn ed_sl(n: u64, p: u64, r: u32, l: u64) -> Result<Ed, EdError> {
    let assumptions = validate(Family::Sl, n, p, r, l)?;
    let sp = sylow_params(n, p, r, l)?;
    let gl = ed_gl_value(sp.n0, l)?;
    if q_mod(p, r, l) != 1 {
        return Ok(Ed {
            value: gl,
            case_label: format!("SL: l does not divide q - 1, equals GL (d = {})", sp.d),
            assumptions,
            warnings: Vec::new(),
        });
    }
    let mp = mu_prime(n, l)?;
    let sub = l.pow(mp);
    assert!(gl >= sub, "subtraction branch cannot go negative");
    let value = gl - sub;
    let mut warnings = Vec::new();
    if is_positive_l_power(n, l) {
        warnings.push(degenerate_warning(n, l));
    }
    Ok(Ed {
        value,
        case_label: format!(
            "SL: l divides q - 1, GL value {gl} minus l^mu' = {sub} (mu' = {mp})"
        ),
        assumptions,
        warnings,
    })
}

/// ed of PSL_n(F_q) at l: equal to SL; the label records whether the
/// projective quotient actually changes the Sylow subgroup (l | n and
/// l | q - 1) and which of the two relation shapes applies (s <= t or
/// s > t, t = nu_l(n)).
pub fn ed_psl(n: u64, p: u64, r: u32, l: u64) -> Result<Ed, EdError> {
    let mut ed = ed_sl(n, p, r, l)?;
    validate(Family::Psl, n, p, r, l)?;
    let sp = sylow_params(n, p, r, l)?;
    let quotient_active = q_mod(p, r, l) == 1 && n % l == 0;
    let detail = if quotient_active {
        let t = numth::nu(l, n)?;
        if sp.s <= t {
            format!("projective relation active, s = {} <= t = {t}", sp.s)
        } else {
            format!(
                "projective relation active, s = {} > t = {t} (mixed-order coordinate)",
                sp.s
            )
        }
    } else {
        "Sylow coincides with SL".to_string()
    };
    ed.case_label = format!("PSL: equals SL [{}]; {detail}", ed.case_label);
    Ok(ed)
}

/// ed of SL_n(F_q)/{aI : a^{n'} = 1} at l: equals PSL for every divisor
/// n' of n (including n' = 1, which is SL itself, where the equality is
/// with PSL's value since both equal SL's).
pub fn ed_sl_quotient(n: u64, n_prime: u64, p: u64, r: u32, l: u64) -> Result<Ed, EdError> {
    validate(Family::SlQuotient { n_prime }, n, p, r, l)?;
    let mut ed = ed_psl(n, p, r, l)?;
    ed.case_label = format!(
        "SL/C{n_prime} (central quotient of order gcd(n',q-1)): equals PSL [{}]",
        ed.case_label
    );
    Ok(ed)
}

/// ed of Sp(2n, q) and PSp(2n, q) at l (parameter is n, the half rank):
/// GL_{2n} if d is even, GL_n if d is odd. The two families agree because
/// the quotient is by a center of order prime to l.
pub fn ed_symplectic(n_half: u64, p: u64, r: u32, l: u64) -> Result<Ed, EdError> {
    let assumptions = validate(Family::Sp, 2 * n_half, p, r, l)?;
    if n_half == 0 {
        return Err(EdError::BadParameter("n must be >= 1".into()));
    }
    let q = q_mod(p, r, l);
    let d = mult_order(q.max(1), l)?;
    let (target, value) = if d % 2 == 0 {
        let sp = sylow_params(2 * n_half, p, r, l)?;
        (format!("GL_{}", 2 * n_half), ed_gl_value(sp.n0, l)?)
    } else {
        let sp = sylow_params(n_half, p, r, l)?;
        (format!("GL_{n_half}"), ed_gl_value(sp.n0, l)?)
    };
    Ok(Ed {
        value,
        case_label: format!(
            "Sp(2n)/PSp(2n) with n = {n_half}: d = {d} {}, reduces to {target}; PSp agrees (center of odd order)",
            if d % 2 == 0 { "even" } else { "odd" }
        ),
        assumptions,
        warnings: Vec::new(),
    })
}

/// Epsilon type of an orthogonal group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OrthKind {
    Plus,
    Minus,
    Odd,
}

/// ed of O^eps(n, q) and POmega^eps(n, q) at l. Five-way case split:
/// d parity for odd n; d parity x eps x parity of n0 = floor(2m/d) for
/// n = 2m. Reduces to a GL value of the tabulated rank.
pub fn ed_orthogonal(n: u64, epsilon: OrthKind, p: u64, r: u32, l: u64) -> Result<Ed, EdError> {
    let family = match epsilon {
        OrthKind::Plus => Family::OrthPlus,
        OrthKind::Minus => Family::OrthMinus,
        OrthKind::Odd => Family::OrthOdd,
    };
    let assumptions = validate(family, n, p, r, l)?;
    let q = q_mod(p, r, l);
    let d = mult_order(q.max(1), l)?;
    let d_even = d % 2 == 0;
    let (target_rank, case): (u64, String) = if n % 2 == 1 {
        let m = (n - 1) / 2;
        if d_even {
            (2 * m, format!("n = 2m+1, d = {d} even, reduces to GL_{}", 2 * m))
        } else {
            (m, format!("n = 2m+1, d = {d} odd, reduces to GL_{m}"))
        }
    } else {
        let m = n / 2;
        if !d_even {
            match epsilon {
                OrthKind::Plus => (m, format!("n = 2m, d = {d} odd, eps = +, reduces to GL_{m}")),
                OrthKind::Minus => (
                    m - 1,
                    format!("n = 2m, d = {d} odd, eps = -, reduces to GL_{}", m - 1),
                ),
                OrthKind::Odd => unreachable!(),
            }
        } else {
            let n0 = (2 * m) / d as u64;
            let n0_even = n0 % 2 == 0;
            let big = match epsilon {
                OrthKind::Plus => n0_even,
                OrthKind::Minus => !n0_even,
                OrthKind::Odd => unreachable!(),
            };
            if big {
                (
                    2 * m,
                    format!(
                        "n = 2m, d = {d} even, eps = {}, n0 = {n0} {}, reduces to GL_{}",
                        if epsilon == OrthKind::Plus { "+" } else { "-" },
                        if n0_even { "even" } else { "odd" },
                        2 * m
                    ),
                )
            } else {
                (
                    2 * m - 2,
                    format!(
                        "n = 2m, d = {d} even, eps = {}, n0 = {n0} {}, reduces to GL_{}",
                        if epsilon == OrthKind::Plus { "+" } else { "-" },
                        if n0_even { "even" } else { "odd" },
                        2 * m - 2
                    ),
                )
            }
        }
    };
    let value = if target_rank == 0 {
        0
    } else {
        let sp = sylow_params(target_rank, p, r, l)?;
        ed_gl_value(sp.n0, l)?
    };
    Ok(Ed {
        value,
        case_label: format!("O/POmega: {case}; POmega agrees (quotient prime to l)"),
        assumptions,
        warnings: Vec::new(),
    })
}

/// Unitary variant selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum UnitaryVariant {
    U,
    Su,
    Psu,
}

/// ed of U/SU/PSU(n, q^2) at odd l != p. d is the multiplicative order of
/// q itself (not q^2); the reductions land in linear groups over F_{q^2}.
pub fn ed_unitary(n: u64, variant: UnitaryVariant, p: u64, r: u32, l: u64) -> Result<Ed, EdError> {
    let family = match variant {
        UnitaryVariant::U => Family::U,
        UnitaryVariant::Su => Family::Su,
        UnitaryVariant::Psu => Family::Psu,
    };
    let assumptions = validate(family, n, p, r, l)?;
    if l == 2 {
        return Err(EdError::UnsupportedCase(
            "ed_unitary handles l != 2; use ed_unitary_l2".into(),
        ));
    }
    let q = q_mod(p, r, l);
    let d = mult_order(q.max(1), l)?;
    let l_divides_q_plus_1 = (q + 1) % l == 0;

    let u_case = |assumptions: Vec<String>| -> Result<Ed, EdError> {
        if d % 4 == 2 {
            let value = if n == 0 {
                0
            } else {
                let sp = sylow_params(n, p, 2 * r, l)?;
                ed_gl_value(sp.n0, l)?
            };
            Ok(Ed {
                value,
                case_label: format!("U: d = {d} ≡ 2 mod 4, reduces to GL_{n} over F_q^2"),
                assumptions,
                warnings: Vec::new(),
            })
        } else {
            let m = n / 2;
            let value = if m == 0 {
                0
            } else {
                let sp = sylow_params(m, p, 2 * r, l)?;
                ed_gl_value(sp.n0, l)?
            };
            Ok(Ed {
                value,
                case_label: format!("U: d = {d} not ≡ 2 mod 4, reduces to GL_{m} over F_q^2"),
                assumptions,
                warnings: Vec::new(),
            })
        }
    };

    match variant {
        UnitaryVariant::U => u_case(assumptions),
        UnitaryVariant::Su => {
            if l_divides_q_plus_1 {
                let mut ed = ed_sl(n, p, 2 * r, l)?;
                ed.assumptions = assumptions;
                ed.case_label = format!("SU: l | q+1, reduces to SL_{n} over F_q^2 [{}]", ed.case_label);
                Ok(ed)
            } else {
                let mut ed = u_case(assumptions)?;
                ed.case_label = format!("SU: l does not divide q+1, equals U [{}]", ed.case_label);
                Ok(ed)
            }
        }
        UnitaryVariant::Psu => {
            if l_divides_q_plus_1 && n % l == 0 {
                let mut ed = ed_psl(n, p, 2 * r, l)?;
                ed.assumptions = assumptions;
                ed.case_label = format!(
                    "PSU: l | n and l | q+1, reduces to PSL_{n} over F_q^2 [{}]",
                    ed.case_label
                );
                Ok(ed)
            } else {
                let mut ed = ed_unitary(n, UnitaryVariant::Su, p, r, l)?;
                ed.case_label = format!("PSU: equals SU [{}]", ed.case_label);
                Ok(ed)
            }
        }
    }
}

/// ed of U/SU/PSU(n, q^2) at l = 2 with q ≡ 3 mod 4. U telescopes to n;
/// SU subtracts 2^{mu_2(n)'} with mu' computed by the factor-2 digit
/// convention (the SL convention; see case_label); PSU equals SU.
pub fn ed_unitary_l2(n: u64, variant: UnitaryVariant, p: u64, r: u32) -> Result<Ed, EdError> {
    let family = match variant {
        UnitaryVariant::U => Family::U,
        UnitaryVariant::Su => Family::Su,
        UnitaryVariant::Psu => Family::Psu,
    };
    let assumptions = validate(family, n, p, r, 2)?;
    let u_value = ed_gl_value(n, 2)?;
    match variant {
        UnitaryVariant::U => Ok(Ed {
            value: u_value,
            case_label: format!("U at l = 2: weighted base-2 digit sum of n = {n}"),
            assumptions,
            warnings: Vec::new(),
        }),
        UnitaryVariant::Su | UnitaryVariant::Psu => {
            let mp = mu_prime(n, 2)?;
            let sub = 2u64.pow(mp);
            assert!(u_value >= sub);
            let value = u_value - sub;
            let mut warnings = Vec::new();
            if is_positive_l_power(n, 2) {
                warnings.push(degenerate_warning(n, 2));
            }
            let prefix = if variant == UnitaryVariant::Su {
                "SU at l = 2".to_string()
            } else {
                "PSU at l = 2: equals SU".to_string()
            };
            Ok(Ed {
                value,
                case_label: format!(
                    "{prefix}: U value {u_value} minus 2^mu' = {sub} (mu' = {mp}, factor-2 digit convention)"
                ),
                assumptions,
                warnings,
            })
        }
    }
}

/// Dispatch facade: routes a family/parameter tuple to its formula.
/// n is always the matrix size (Sp at n = 4 means Sp(4, q)).
pub fn essential_dimension(family: Family, n: u64, p: u64, r: u32, l: u64) -> Result<Ed, EdError> {
    match family {
        Family::Gl => ed_gl(n, p, r, l),
        Family::Sl => ed_sl(n, p, r, l),
        Family::Psl => ed_psl(n, p, r, l),
        Family::SlQuotient { n_prime } => ed_sl_quotient(n, n_prime, p, r, l),
        Family::Sp | Family::PSp => {
            if n % 2 != 0 {
                return Err(EdError::BadParameter(format!(
                    "symplectic groups need even matrix size, got n = {n}"
                )));
            }
            let mut ed = ed_symplectic(n / 2, p, r, l)?;
            if family == Family::PSp {
                ed.case_label = format!("PSp: equals Sp [{}]", ed.case_label);
            }
            Ok(ed)
        }
        Family::OrthOdd | Family::POmegaOdd => {
            let mut ed = ed_orthogonal(n, OrthKind::Odd, p, r, l)?;
            if family == Family::POmegaOdd {
                ed.case_label = format!("POmega: equals O [{}]", ed.case_label);
            }
            Ok(ed)
        }
        Family::OrthPlus | Family::POmegaPlus => {
            let mut ed = ed_orthogonal(n, OrthKind::Plus, p, r, l)?;
            if family == Family::POmegaPlus {
                ed.case_label = format!("POmega: equals O [{}]", ed.case_label);
            }
            Ok(ed)
        }
        Family::OrthMinus | Family::POmegaMinus => {
            let mut ed = ed_orthogonal(n, OrthKind::Minus, p, r, l)?;
            if family == Family::POmegaMinus {
                ed.case_label = format!("POmega: equals O [{}]", ed.case_label);
            }
            Ok(ed)
        }
        Family::U => {
            if l == 2 {
                ed_unitary_l2(n, UnitaryVariant::U, p, r)
            } else {
                ed_unitary(n, UnitaryVariant::U, p, r, l)
            }
        }
        Family::Su => {
            if l == 2 {
                ed_unitary_l2(n, UnitaryVariant::Su, p, r)
            } else {
                ed_unitary(n, UnitaryVariant::Su, p, r, l)
            }
        }
        Family::Psu => {
            if l == 2 {
                ed_unitary_l2(n, UnitaryVariant::Psu, p, r)
            } else {
                ed_unitary(n, UnitaryVariant::Psu, p, r, l)
            }
        }
    }
}
