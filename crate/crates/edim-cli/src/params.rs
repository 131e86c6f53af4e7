//! Resolution of command-line parameters into a fully typed group tuple:
//! family token parsing and prime-power factoring of q.

use edim_core::formulas::Family;
use edim_core::numth::is_prime;
use num_integer::Roots;
use serde::Serialize;

use crate::CliError;

/// A fully resolved (family, n, q = p^r, l) tuple.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupSpec {
    #[serde(serialize_with = "ser_family")]
    pub family: Family,
    pub n: u64,
    pub p: u64,
    pub r: u32,
    pub q: u64,
    pub l: u64,
}

fn ser_family<S: serde::Serializer>(f: &Family, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&f.label())
}

impl GroupSpec {
    pub fn new(family: Family, n: u64, p: u64, r: u32, l: u64) -> Result<GroupSpec, CliError> {
        let q = checked_q(p, r)?;
        Ok(GroupSpec {
            family,
            n,
            p,
            r,
            q,
            l,
        })
    }

    /// Display name like `PSL(2, F_5)`.
    pub fn group_label(&self) -> String {
        format!("{}({}, F_{})", self.family.label(), self.n, self.q)
    }
}

pub fn checked_q(p: u64, r: u32) -> Result<u64, CliError> {
    let mut q: u64 = 1;
    for _ in 0..r {
        q = q
            .checked_mul(p)
            .ok_or_else(|| CliError::Usage(format!("q = {p}^{r} exceeds the 64-bit range")))?;
    }
    Ok(q)
}

/// Writes q as p^r: the exact prime-power factorization, or None when q is
/// not a prime power.
pub fn factor_prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    if is_prime(q) {
        return Some((q, 1));
    }
    // Composite prime powers have exponent >= 2, so the base is an exact
    // r-th root; try exponents from large to small to find the prime base.
    for r in (2..=63u32).rev() {
        let root = q.nth_root(r);
        if root >= 2 && root.checked_pow(r) == Some(q) && is_prime(root) {
            return Some((root, r));
        }
    }
    None
}

/// Resolves `--q` / `--p` / `--r` into (p, r). Exactly one of the two
/// spellings must determine the field; inconsistent combinations are usage
/// errors.
pub fn resolve_prime_power(
    q: Option<u64>,
    p: Option<u64>,
    r: Option<u32>,
) -> Result<(u64, u32), CliError> {
    match (q, p) {
        (Some(qv), None) => {
            if r.is_some() {
                return Err(CliError::Usage(
                    "--r only combines with --p; pass either --q or --p/--r".into(),
                ));
            }
            factor_prime_power(qv)
                .ok_or_else(|| CliError::Usage(format!("q = {qv} is not a prime power")))
        }
        (None, Some(pv)) => {
            if !is_prime(pv) {
                return Err(CliError::Usage(format!("p = {pv} is not prime")));
            }
            let rv = r.unwrap_or(1);
            if rv == 0 {
                return Err(CliError::Usage("r must be >= 1".into()));
            }
            Ok((pv, rv))
        }
        (Some(qv), Some(pv)) => {
            let rv = r.unwrap_or(1);
            if checked_q(pv, rv)? != qv {
                return Err(CliError::Usage(format!(
                    "inconsistent field: q = {qv} but p^r = {pv}^{rv}"
                )));
            }
            if !is_prime(pv) {
                return Err(CliError::Usage(format!("p = {pv} is not prime")));
            }
            Ok((pv, rv))
        }
        (None, None) => Err(CliError::Usage(
            "the field is required: pass --q (a prime power) or --p with optional --r".into(),
        )),
    }
}

/// Parses a family token plus its satellite flags. Orthogonal families
/// take their type from a `+`/`-` suffix or `--epsilon plus|minus|odd`;
/// a bare `O`/`POmega` with odd n means the odd-dimensional family. The
/// SL-quotient family `SLQ` requires `--nprime`.
pub fn parse_family(
    token: &str,
    epsilon: Option<&str>,
    nprime: Option<u64>,
    n: u64,
) -> Result<Family, CliError> {
    let t = token.trim();
    let upper = t.to_ascii_uppercase();
    let (base, suffix) = match upper.strip_suffix(['+', '-']) {
        Some(b) => (b.to_string(), upper.chars().last()),
        None => (upper.clone(), None),
    };
    let eps = match (suffix, epsilon) {
        (Some(_), Some(_)) => {
            return Err(CliError::Usage(
                "give the orthogonal type either as a +/- suffix or via --epsilon, not both".into(),
            ))
        }
        (Some('+'), None) => Some(Eps::Plus),
        (Some('-'), None) => Some(Eps::Minus),
        (None, Some(e)) => Some(parse_epsilon(e)?),
        _ => None,
    };
    let family = match base.as_str() {
        "GL" => Family::Gl,
        "SL" => Family::Sl,
        "PSL" => Family::Psl,
        "SLQ" => {
            let n_prime = nprime.ok_or_else(|| {
                CliError::Usage("family SLQ (SL modulo scalars of order n') requires --nprime".into())
            })?;
            Family::SlQuotient { n_prime }
        }
        "SP" => Family::Sp,
        "PSP" => Family::PSp,
        "O" => orth_family(false, eps, n)?,
        "POMEGA" => orth_family(true, eps, n)?,
        "U" => Family::U,
        "SU" => Family::Su,
        "PSU" => Family::Psu,
        _ => {
            return Err(CliError::Usage(format!(
                "unknown family {t:?}; expected GL, SL, PSL, SLQ, Sp, PSp, O[+|-], POmega[+|-], U, SU, or PSU"
            )))
        }
    };
    if nprime.is_some() && !matches!(family, Family::SlQuotient { .. }) {
        return Err(CliError::Usage(
            "--nprime only applies to the SLQ family".into(),
        ));
    }
    if eps.is_some() && !is_orthogonal(&family) {
        return Err(CliError::Usage(
            "--epsilon only applies to the orthogonal families".into(),
        ));
    }
    Ok(family)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Eps {
    Plus,
    Minus,
    Odd,
}

fn parse_epsilon(e: &str) -> Result<Eps, CliError> {
    match e.trim().to_ascii_lowercase().as_str() {
        "plus" | "+" => Ok(Eps::Plus),
        "minus" | "-" => Ok(Eps::Minus),
        "odd" => Ok(Eps::Odd),
        other => Err(CliError::Usage(format!(
            "unknown epsilon {other:?}; expected plus, minus, or odd"
        ))),
    }
}

fn orth_family(projective: bool, eps: Option<Eps>, n: u64) -> Result<Family, CliError> {
    let eps = match eps {
        Some(e) => e,
        None if n % 2 == 1 => Eps::Odd,
        None => {
            return Err(CliError::Usage(
                "even-dimensional orthogonal families need a type: pass --epsilon plus|minus or use O+/O-".into(),
            ))
        }
    };
    Ok(match (projective, eps) {
        (false, Eps::Plus) => Family::OrthPlus,
        (false, Eps::Minus) => Family::OrthMinus,
        (false, Eps::Odd) => Family::OrthOdd,
        (true, Eps::Plus) => Family::POmegaPlus,
        (true, Eps::Minus) => Family::POmegaMinus,
        (true, Eps::Odd) => Family::POmegaOdd,
    })
}

fn is_orthogonal(f: &Family) -> bool {
    matches!(
        f,
        Family::OrthOdd
            | Family::OrthPlus
            | Family::OrthMinus
            | Family::POmegaOdd
            | Family::POmegaPlus
            | Family::POmegaMinus
    )
}

/// Parses a comma-separated list of u64 values.
pub fn parse_u64_list(raw: &str, what: &str) -> Result<Vec<u64>, CliError> {
    let mut out = Vec::new();
    for piece in raw.split(',') {
        let piece = piece.trim();
        if piece.is_empty() {
            continue;
        }
        out.push(
            piece
                .parse::<u64>()
                .map_err(|_| CliError::Usage(format!("bad {what} value {piece:?}")))?,
        );
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_power_factoring() {
        assert_eq!(factor_prime_power(2), Some((2, 1)));
        assert_eq!(factor_prime_power(9), Some((3, 2)));
        assert_eq!(factor_prime_power(8), Some((2, 3)));
        assert_eq!(factor_prime_power(343), Some((7, 3)));
        assert_eq!(factor_prime_power(1024), Some((2, 10)));
        assert_eq!(factor_prime_power(6), None);
        assert_eq!(factor_prime_power(12), None);
        assert_eq!(factor_prime_power(1), None);
        assert_eq!(factor_prime_power(0), None);
    }

    #[test]
    fn field_resolution() {
        assert_eq!(resolve_prime_power(Some(9), None, None).unwrap(), (3, 2));
        assert_eq!(resolve_prime_power(None, Some(3), Some(2)).unwrap(), (3, 2));
        assert_eq!(resolve_prime_power(None, Some(5), None).unwrap(), (5, 1));
        assert_eq!(
            resolve_prime_power(Some(9), Some(3), Some(2)).unwrap(),
            (3, 2)
        );
        assert!(resolve_prime_power(Some(6), None, None).is_err());
        assert!(resolve_prime_power(Some(9), Some(2), Some(3)).is_err());
        assert!(resolve_prime_power(None, None, None).is_err());
        assert!(resolve_prime_power(Some(9), None, Some(2)).is_err());
    }

    #[test]
    fn family_tokens() {
        assert_eq!(parse_family("GL", None, None, 3).unwrap(), Family::Gl);
        assert_eq!(parse_family("psl", None, None, 2).unwrap(), Family::Psl);
        assert_eq!(parse_family("O+", None, None, 4).unwrap(), Family::OrthPlus);
        assert_eq!(
            parse_family("O", Some("minus"), None, 6).unwrap(),
            Family::OrthMinus
        );
        assert_eq!(parse_family("O", None, None, 5).unwrap(), Family::OrthOdd);
        assert_eq!(
            parse_family("POmega-", None, None, 4).unwrap(),
            Family::POmegaMinus
        );
        assert_eq!(
            parse_family("SLQ", None, Some(2), 4).unwrap(),
            Family::SlQuotient { n_prime: 2 }
        );
        assert!(parse_family("O", None, None, 4).is_err());
        assert!(parse_family("O+", Some("minus"), None, 4).is_err());
        assert!(parse_family("SLQ", None, None, 4).is_err());
        assert!(parse_family("GL", None, Some(2), 4).is_err());
        assert!(parse_family("GL", Some("plus"), None, 4).is_err());
        assert!(parse_family("XYZ", None, None, 4).is_err());
    }
}
