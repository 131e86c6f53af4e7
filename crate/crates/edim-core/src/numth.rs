//! Exact number-theoretic parameter extraction.
//!
//! Everything downstream is driven by four quantities attached to a prime
//! power q = p^r and a prime l with l != p:
//!
//! * `d` — the multiplicative order of q modulo l,
//! * `s` — the l-adic valuation of q^d - 1,
//! * `n0` — `floor(n/d)`, the number of cyclic torus factors available in rank n,
//! * the base-l digits of `n0`, which control the block partition of the
//!   Sylow subgroup's diagonal part.
//!
//! All arithmetic on q^d - 1 is arbitrary precision: for large r the value
//! overflows machine words long before the surrounding theory cares.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::EdError;

/// Deterministic primality by trial division; inputs here are desk scale.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut f = 3u64;
    while f.checked_mul(f).map(|ff| ff <= n).unwrap_or(false) {
        if n % f == 0 {
            return false;
        }
        f += 2;
    }
    true
}

fn require_prime(l: u64) -> Result<(), EdError> {
    if is_prime(l) {
        Ok(())
    } else {
        Err(EdError::BadParameter(format!("{l} is not prime")))
    }
}

/// l-adic valuation of a positive integer: the highest e with l^e | n.
pub fn nu(l: u64, n: u64) -> Result<u32, EdError> {
    require_prime(l)?;
    if n == 0 {
        return Err(EdError::BadParameter(
            "valuation of 0 is undefined here".into(),
        ));
    }
    let mut n = n;
    let mut e = 0;
    while n % l == 0 {
        n /= l;
        e += 1;
    }
    Ok(e)
}

/// l-adic valuation of a positive big integer.
pub fn nu_big(l: u64, n: &BigUint) -> Result<u32, EdError> {
    require_prime(l)?;
    if n.is_zero() {
        return Err(EdError::BadParameter(
            "valuation of 0 is undefined here".into(),
        ));
    }
    let lb = BigUint::from(l);
    let mut n = n.clone();
    let mut e = 0;
    loop {
        let (q, rem) = num_integer::Integer::div_rem(&n, &lb);
        if !rem.is_zero() {
            return Ok(e);
        }
        n = q;
        e += 1;
    }
}

/// Largest d with l^d <= n.
pub fn mu(l: u64, n: u64) -> Result<u32, EdError> {
    require_prime(l)?;
    if n == 0 {
        return Err(EdError::BadParameter("mu requires n >= 1".into()));
    }
    let mut power = 1u64;
    let mut d = 0;
    while let Some(next) = power.checked_mul(l) {
        if next > n {
            break;
        }
        power = next;
        d += 1;
    }
    Ok(d)
}

/// Least d >= 1 with q^d = 1 mod l. Requires gcd(q, l) = 1.
pub fn mult_order(q: u64, l: u64) -> Result<u32, EdError> {
    require_prime(l)?;
    if q == 0 || q % l == 0 {
        return Err(EdError::BadParameter(format!(
            "multiplicative order of {q} mod {l} undefined (l divides q)"
        )));
    }
    let q = q % l;
    let mut acc = q % l;
    let mut d = 1u32;
    while acc != 1 {
        acc = acc * q % l;
        d += 1;
    }
    Ok(d)
}

/// The k-th base-l digit of m: floor(m/l^k) - l*floor(m/l^{k+1}).
///
/// Defined for every m >= 0; any hypothesis checking belongs to callers.
pub fn digit(m: u64, l: u64, k: u32) -> Result<u64, EdError> {
    require_prime(l)?;
    let lk = l.checked_pow(k);
    match lk {
        None => Ok(0),
        Some(lk) => {
            let floor1 = m / lk;
            let floor2 = floor1 / l;
            Ok(floor1 - l * floor2)
        }
    }
}

/// Position of the lowest nonzero base-l digit of m (m >= 1).
pub fn mu_prime(m: u64, l: u64) -> Result<u32, EdError> {
    require_prime(l)?;
    if m == 0 {
        return Err(EdError::BadParameter("mu_prime requires m >= 1".into()));
    }
    let mut k = 0;
    let mut m = m;
    while m % l == 0 {
        m /= l;
        k += 1;
    }
    Ok(k)
}

/// Σ_k digit(m,l,k) * l^k for k up to mu(l, m); telescopes to m.
///
/// Kept as the literal sum rather than `m` itself so the digit-sum shape of
/// the rank formulas is executed, not assumed.
pub fn weighted_digit_sum(m: u64, l: u64) -> Result<u64, EdError> {
    require_prime(l)?;
    if m == 0 {
        return Ok(0);
    }
    let top = mu(l, m)?;
    let mut total = 0u64;
    for k in 0..=top {
        total += digit(m, l, k)? * l.pow(k);
    }
    Ok(total)
}

/// Base-l digit sum of m (the rank s_{l,m} of the GL-model center).
pub fn digit_sum(m: u64, l: u64) -> Result<u64, EdError> {
    require_prime(l)?;
    if m == 0 {
        return Ok(0);
    }
    let top = mu(l, m)?;
    let mut total = 0u64;
    for k in 0..=top {
        total += digit(m, l, k)?;
    }
    Ok(total)
}

/// Derived Sylow parameters for GL_n(F_q) at the prime l.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SylowParams {
    pub l: u64,
    pub p: u64,
    pub r: u32,
    pub n: u64,
    /// Multiplicative order of q mod l.
    pub d: u32,
    /// nu_l(q^d - 1); always >= 1.
    pub s: u32,
    /// floor(n/d).
    pub n0: u64,
}

/// q = p^r as a big integer; it overflows u64 already at modest r.
pub fn q_big(p: u64, r: u32) -> BigUint {
    BigUint::from(p).pow(r)
}

/// Computes (d, s, n0) for GL_n(F_{p^r}) at l. Rejects l = p distinctly.
pub fn sylow_params(n: u64, p: u64, r: u32, l: u64) -> Result<SylowParams, EdError> {
    require_prime(l)?;
    if !is_prime(p) {
        return Err(EdError::BadParameter(format!("{p} is not prime")));
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
    let q_mod_l = {
        let q = q_big(p, r);
        let rem = q % BigUint::from(l);
        rem.to_u64_digits().first().copied().unwrap_or(0)
    };
    let d = mult_order(q_mod_l.max(1), l)?;
    let qd = q_big(p, r).pow(d);
    let s = nu_big(l, &(qd - BigUint::one()))?;
    Ok(SylowParams {
        l,
        p,
        r,
        n,
        d,
        s,
        n0: n / d as u64,
    })
}

/// One consecutive index interval of the diagonal-part block partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Block {
    /// 1-based start index i of the interval.
    pub start: u64,
    /// The interval has size l^size_exponent.
    pub size_exponent: u32,
}

impl Block {
    pub fn size(&self, l: u64) -> u64 {
        l.pow(self.size_exponent)
    }
}

/// Partition of {1..m} into consecutive intervals of l-power sizes,
/// one interval of size l^k per unit of the k-th base-l digit of m.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockStructure {
    pub m: u64,
    pub l: u64,
    /// Largest blocks first; within equal size, ascending start index.
    pub blocks: Vec<Block>,
    /// Number of blocks = base-l digit sum of m.
    pub rank: u64,
}

/// Block partition of {1..m}, largest l-power blocks first.
pub fn block_structure(m: u64, l: u64) -> Result<BlockStructure, EdError> {
    require_prime(l)?;
    if m == 0 {
        return Err(EdError::BadParameter("block_structure requires m >= 1".into()));
    }
    let top = mu(l, m)?;
    let mut blocks = Vec::new();
    let mut start = 1u64;
    for k in (0..=top).rev() {
        let count = digit(m, l, k)?;
        for _ in 0..count {
            blocks.push(Block {
                start,
                size_exponent: k,
            });
            start += l.pow(k);
        }
    }
    let rank = blocks.len() as u64;
    debug_assert_eq!(start, m + 1);
    Ok(BlockStructure { m, l, blocks, rank })
}

/// nu_l(n!) by Legendre's formula: Σ_{j>=1} floor(n/l^j).
pub fn nu_factorial(l: u64, n: u64) -> Result<u64, EdError> {
    require_prime(l)?;
    let mut total = 0u64;
    let mut power = l;
    loop {
        total += n / power;
        match power.checked_mul(l) {
            Some(next) if next <= n => power = next,
            _ => break,
        }
    }
    Ok(total)
}
