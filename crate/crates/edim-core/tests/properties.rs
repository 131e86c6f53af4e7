//! Cross-cutting properties of the closed forms and the parameter
//! arithmetic they run on: the digit-expansion identity, branch-agreement
//! relations between families, and the assumption metadata contract.

use edim_core::formulas::{
    ed_gl, ed_orthogonal, essential_dimension, validate, Family, OrthKind,
};
use edim_core::numth::{digit, is_prime, mu, mult_order, sylow_params};

/// Prime powers q <= 9 as (p, r), the verification-grid base fields.
const FIELDS: [(u64, u32); 7] = [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2)];
const PRIMES: [u64; 4] = [2, 3, 5, 7];

fn q_of(p: u64, r: u32) -> u64 {
    p.pow(r)
}

#[test]
fn telescoping_digit_expansion() {
    // Sum over k of digit(m, l, k) * l^k recovers m exactly: the base-l
    // expansion telescopes. Exhaustive over the full certified range.
    let primes: Vec<u64> = (2..=97).filter(|&l| is_prime(l)).collect();
    for l in primes {
        for m in 0..=10_000u64 {
            let mut total = 0u64;
            for k in 0..=mu(l, m.max(1)).unwrap() {
                total += digit(m, l, k).unwrap() * l.pow(k);
            }
            assert_eq!(total, m, "m = {m}, l = {l}");
        }
    }
}

#[test]
fn gl_value_is_block_count() {
    // The literal theorem sum (computed inside ed_gl and cross-asserted
    // there) telescopes to floor(n/d); check the external equality on the
    // whole grid.
    for (p, r) in FIELDS {
        for l in PRIMES {
            for n in 1..=12u64 {
                if validate(Family::Gl, n, p, r, l).is_err() {
                    continue;
                }
                let params = sylow_params(n, p, r, l).unwrap();
                let ed = ed_gl(n, p, r, l).unwrap();
                assert_eq!(ed.value, params.n0, "n={n} q={} l={l}", q_of(p, r));
            }
        }
    }
}

#[test]
fn projective_quotients_agree_with_covers() {
    // The case analysis gives each projective family the value of its
    // cover: PSL = SL, PSp = Sp, POmega = O, PSU agrees with SU except on
    // the extra-quotient branch (l | n and l | q + 1), where it still
    // computes (a different label, same subtracted shape).
    for (p, r) in FIELDS {
        for l in PRIMES {
            for n in 2..=8u64 {
                let pairs = [
                    (Family::Psl, Family::Sl),
                    (Family::PSp, Family::Sp),
                    (Family::POmegaOdd, Family::OrthOdd),
                    (Family::POmegaPlus, Family::OrthPlus),
                    (Family::POmegaMinus, Family::OrthMinus),
                ];
                for (proj, cover) in pairs {
                    let a = essential_dimension(proj, n, p, r, l);
                    let b = essential_dimension(cover, n, p, r, l);
                    match (a, b) {
                        (Ok(a), Ok(b)) => {
                            assert_eq!(
                                a.value,
                                b.value,
                                "{:?} vs {:?} at n={n} q={} l={l}",
                                proj,
                                cover,
                                q_of(p, r)
                            );
                        }
                        (Err(_), Err(_)) => {}
                        (a, b) => panic!(
                            "validation asymmetry {:?}/{:?} at n={n} q={} l={l}: {a:?} vs {b:?}",
                            proj,
                            cover,
                            q_of(p, r)
                        ),
                    }
                }
            }
        }
    }
}

#[test]
fn special_groups_match_full_groups_off_the_divisibility_locus() {
    // The determinant-one subtraction only fires when l | q - 1 (linear)
    // or l | q + 1 (unitary); elsewhere SL = GL and SU = U.
    for (p, r) in FIELDS {
        let q = q_of(p, r);
        for l in PRIMES {
            for n in 1..=8u64 {
                if validate(Family::Sl, n, p, r, l).is_ok() && (q - 1) % l != 0 {
                    assert_eq!(
                        essential_dimension(Family::Sl, n, p, r, l).unwrap().value,
                        essential_dimension(Family::Gl, n, p, r, l).unwrap().value,
                        "SL=GL at n={n} q={q} l={l}"
                    );
                }
                if l != 2
                    && validate(Family::Su, n, p, r, l).is_ok()
                    && (q + 1) % l != 0
                {
                    assert_eq!(
                        essential_dimension(Family::Su, n, p, r, l).unwrap().value,
                        essential_dimension(Family::U, n, p, r, l).unwrap().value,
                        "SU=U at n={n} q={q} l={l}"
                    );
                }
            }
        }
    }
}

#[test]
fn orthogonal_case_table() {
    // The even-dimension orthogonal value is a general-linear value of a
    // rank selected by the (d parity, type, parity of n0) case table;
    // flipping the type moves the result only through that selection.
    for (p, r) in FIELDS {
        for l in [3u64, 5, 7] {
            for m in 2..=5u64 {
                let n = 2 * m;
                if validate(Family::OrthPlus, n, p, r, l).is_err() {
                    continue;
                }
                let params = sylow_params(n, p, r, l).unwrap();
                let plus = ed_orthogonal(n, OrthKind::Plus, p, r, l).unwrap().value;
                let minus = ed_orthogonal(n, OrthKind::Minus, p, r, l).unwrap().value;
                let gl_rank = |k: u64| -> u64 {
                    if k == 0 {
                        0
                    } else {
                        ed_gl(k, p, r, l).unwrap().value
                    }
                };
                if params.d % 2 == 1 {
                    assert_eq!(plus, gl_rank(m), "plus d-odd n={n} q={} l={l}", q_of(p, r));
                    assert_eq!(
                        minus,
                        gl_rank(m - 1),
                        "minus d-odd n={n} q={} l={l}",
                        q_of(p, r)
                    );
                } else {
                    let n0 = params.n0;
                    let expect = |big: bool| -> u64 {
                        if big {
                            gl_rank(n)
                        } else {
                            gl_rank(n - 2)
                        }
                    };
                    assert_eq!(
                        plus,
                        expect(n0 % 2 == 0),
                        "plus d-even n={n} q={} l={l}",
                        q_of(p, r)
                    );
                    assert_eq!(
                        minus,
                        expect(n0 % 2 == 1),
                        "minus d-even n={n} q={} l={l}",
                        q_of(p, r)
                    );
                }
            }
        }
    }
}

#[test]
fn assumption_metadata_contract() {
    // Every l = 2 linear result carries the q = 1 (mod 4) assumption;
    // every l = 2 unitary result carries q = 3 (mod 4); every result with
    // a nontrivial Sylow subgroup carries a root-of-unity assumption.
    for (p, r) in FIELDS {
        let q = q_of(p, r);
        for n in 1..=6u64 {
            for family in [Family::Gl, Family::Sl, Family::Psl] {
                if let Ok(ed) = essential_dimension(family, n, p, r, 2) {
                    assert!(
                        ed.assumptions.iter().any(|a| a == "q ≡ 1 (mod 4)"),
                        "{family:?} n={n} q={q} missing congruence assumption"
                    );
                }
            }
            for family in [Family::U, Family::Su, Family::Psu] {
                if let Ok(ed) = essential_dimension(family, n, p, r, 2) {
                    assert!(
                        ed.assumptions.iter().any(|a| a == "q ≡ 3 (mod 4)"),
                        "{family:?} n={n} q={q} missing congruence assumption"
                    );
                }
            }
            for l in PRIMES {
                if let Ok(ed) = essential_dimension(Family::Gl, n, p, r, l) {
                    if ed.value > 0 {
                        assert!(
                            ed.assumptions.iter().any(|a| a.contains("root of unity")),
                            "GL n={n} q={q} l={l} missing root-of-unity assumption"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn multiplicative_order_is_minimal_and_divides_l_minus_1() {
    for l in [2u64, 3, 5, 7, 11, 13, 97] {
        for q in 2..60u64 {
            if q % l == 0 {
                continue;
            }
            let d = mult_order(q, l).unwrap();
            assert_eq!((l - 1) % (d as u64), 0, "d | l - 1 fails at q={q} l={l}");
            let modexp = |e: u32| -> u64 {
                let mut acc = 1u64;
                for _ in 0..e {
                    acc = acc * (q % l) % l;
                }
                acc
            };
            assert_eq!(modexp(d), 1, "q^d != 1 at q={q} l={l}");
            for e in 1..d {
                assert_ne!(modexp(e), 1, "order not minimal at q={q} l={l}");
            }
        }
    }
}
