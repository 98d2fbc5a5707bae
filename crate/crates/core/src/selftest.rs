//! Built-in invariant suite run by `quadbinom selftest`.

use crate::arith::{binom_p1_mod_p2, fermat_quotient, harmonic_inv_sum, mod_inv, Residue};
use crate::bernoulli::{
    bern_diff_direct, bern_diff_harmonic, bernoulli_poly_rational, bernoulli_rational,
    bernoulli_table_mod_p, harmonic_class_sum, rational_mod_p,
};
use crate::congruence::{example_specialized_rhs, thm11_rhs, TheoremId, EXAMPLE_DISCRIMINANTS};
use crate::error::Result;
use crate::grid::{run_grid, Family, GridSpec};
use crate::lucas::{lucas_iter, lucas_pair, LucasParams};
use crate::ntheory::{fundamental_discriminants, is_prime, jacobi, kronecker, primes_up_to};
use crate::quadfield::{form_cycles, FieldCache};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn odd_primes(limit: u64) -> Vec<u64> {
    primes_up_to(limit).into_iter().filter(|&p| p > 2).collect()
}

fn binomial_identity() -> Result<bool> {
    for p in odd_primes(100) {
        let m = p * p;
        let mut h = Residue::zero(m);
        for k in 0..p {
            if k > 0 {
                h += mod_inv(k as i128, m)?;
            }
            let sign = if k % 2 == 0 { 1 } else { -1 };
            let expect = (Residue::one(m) - h.scale(p as i128)).scale(sign);
            if binom_p1_mod_p2(p, k)? != expect {
                return Ok(false);
            }
        }
        if !harmonic_inv_sum(p - 1, p)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn character_sums() -> Result<bool> {
    for d in fundamental_discriminants(2, 100) {
        let du = d as u64;
        let mut sum = 0i64;
        for c in 1..du {
            let chi = kronecker(d, c);
            if kronecker(d, du - c) != chi {
                return Ok(false);
            }
            sum += chi as i64;
        }
        if sum != 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

fn lucas_routes() -> Result<bool> {
    for a in -10i64..=10 {
        for b in -10i64..=10 {
            let params = LucasParams::new(a, b);
            for m in [3u64, 9, 5, 25, 7, 49, 11, 121] {
                for n in (0..=200).step_by(13) {
                    if lucas_pair(&params, n, m)? != lucas_iter(&params, n, m)? {
                        return Ok(false);
                    }
                }
            }
            for p in odd_primes(50) {
                let delta = a * a - 4 * b;
                if delta % p as i64 == 0 || b % p as i64 == 0 {
                    continue;
                }
                let leg = jacobi(delta, p as i64)?;
                let (u, v) = lucas_pair(&params, p, p)?;
                if u != Residue::new(leg as i128, p)? || v != Residue::new(a as i128, p)? {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

fn bernoulli_routes() -> Result<bool> {
    for p in odd_primes(100).into_iter().filter(|&p| p >= 5) {
        let ctx = bernoulli_table_mod_p(p)?;
        for d in 1..=24u64 {
            if d % p == 0 {
                continue;
            }
            for c in 0..d as i64 {
                if bern_diff_direct(&ctx, c, d)? != bern_diff_harmonic(p, c, d)? {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

fn class_sum_identities() -> Result<bool> {
    for p in odd_primes(50) {
        for m in 1..=20u64 {
            if m % p == 0 {
                continue;
            }
            for r in 0..m as i64 {
                if harmonic_class_sum(p, r, m)? != -harmonic_class_sum(p, 1 - r, m)? {
                    return Ok(false);
                }
            }
            let mut lerch = Residue::zero(p);
            for r in 1..=m as i64 {
                lerch += harmonic_class_sum(p, r, m)?.scale(r as i128);
            }
            if lerch != -fermat_quotient(m as i64, p)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn exact_bernoulli() -> Result<bool> {
    for n in 0..=8u32 {
        let bn = bernoulli_rational(n)?.value;
        for m in 1..=6i64 {
            let mut sum = BigRational::zero();
            for r in 0..m {
                let x = BigRational::new(BigInt::from(r), BigInt::from(m));
                sum += bernoulli_poly_rational(n, &x)?;
            }
            let scale = BigRational::new(BigInt::from(m), BigInt::from(m).pow(n));
            if sum != scale * &bn {
                return Ok(false);
            }
        }
    }
    for p in [5u64, 7, 11, 13] {
        let b = bernoulli_rational((p - 1) as u32)?.value;
        let scaled = b * BigRational::from_integer(BigInt::from(p));
        if rational_mod_p(&scaled, p)? != -Residue::one(p) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn field_invariants(cache: &FieldCache) -> Result<bool> {
    for d in fundamental_discriminants(2, 100) {
        let f = cache.get(d)?;
        let lhs = &f.a * &f.a - &f.b * &f.b * d;
        if lhs != BigInt::from(4 * f.norm as i64) {
            return Ok(false);
        }
        if (d == 8 || is_prime(d as u64)) && f.norm != -1 {
            return Ok(false);
        }
        let cycles = form_cycles(d)?;
        if cycles.len() as u64 != f.h_narrow {
            return Ok(false);
        }
    }
    for d in EXAMPLE_DISCRIMINANTS {
        if cache.get(d)?.h != 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

fn example_rhs_agreement(cache: &FieldCache) -> Result<bool> {
    for d in EXAMPLE_DISCRIMINANTS {
        let f = cache.get(d)?;
        for p in odd_primes(200) {
            if (d as u64).is_multiple_of(p) {
                continue;
            }
            for rho in [1, -1] {
                if example_specialized_rhs(d, p, rho)? != thm11_rhs(&f, p, rho)? {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

fn grid_check(cache: &FieldCache, theorem: TheoremId, max: i64, p_max: u64) -> Result<bool> {
    let spec = GridSpec::new(theorem, Family::UpTo(max), p_max);
    let out = run_grid(&spec, cache)?;
    Ok(!out.reports.is_empty() && out.all_pass())
}

/// Run every check at desk scale, in a fixed order.
pub fn run_selftest(cache: &FieldCache) -> Vec<CheckOutcome> {
    type Check<'a> = Box<dyn Fn() -> Result<bool> + 'a>;
    let checks: Vec<(&'static str, Check)> = vec![
        (
            "binomial-harmonic identity, p < 100",
            Box::new(binomial_identity),
        ),
        (
            "character symmetry and vanishing sums, d < 100",
            Box::new(character_sums),
        ),
        (
            "lucas doubling vs recurrence; u_p, v_p mod p",
            Box::new(lucas_routes),
        ),
        (
            "bernoulli difference: table vs harmonic, d <= 24",
            Box::new(bernoulli_routes),
        ),
        (
            "K antisymmetry and Lerch sum, m <= 20",
            Box::new(class_sum_identities),
        ),
        (
            "Raabe and pB_(p-1) = -1, exact rationals",
            Box::new(exact_bernoulli),
        ),
        (
            "unit equation, norm rule, form cycles, d < 100",
            Box::new(|| field_invariants(cache)),
        ),
        (
            "worked fields: specialized = general rhs, p < 200",
            Box::new(|| example_rhs_agreement(cache)),
        ),
        (
            "granville grid m <= 20, p < 50",
            Box::new(|| grid_check(cache, TheoremId::Granville, 20, 50)),
        ),
        (
            "t11 grid d < 60, p < 50",
            Box::new(|| grid_check(cache, TheoremId::T11, 60, 50)),
        ),
        (
            "t12 grid m <= 20, p < 50",
            Box::new(|| grid_check(cache, TheoremId::T12, 20, 50)),
        ),
        (
            "t13-bern grid d < 60, p < 50",
            Box::new(|| grid_check(cache, TheoremId::T13Bern, 60, 50)),
        ),
        (
            "t13-prod grid d < 60, p < 50",
            Box::new(|| grid_check(cache, TheoremId::T13Prod, 60, 50)),
        ),
        (
            "t21 grid m <= 8, p < 30",
            Box::new(|| grid_check(cache, TheoremId::T21, 8, 30)),
        ),
        (
            "cor21 grid m <= 8, p < 30",
            Box::new(|| grid_check(cache, TheoremId::Cor21, 8, 30)),
        ),
        (
            "cor22 grid m <= 12, p < 50",
            Box::new(|| grid_check(cache, TheoremId::Cor22, 12, 50)),
        ),
        (
            "example grid p < 100",
            Box::new(|| grid_check(cache, TheoremId::ExampleField, 28, 100)),
        ),
    ];
    checks
        .into_iter()
        .map(|(name, check)| match check() {
            Ok(passed) => CheckOutcome {
                name,
                passed,
                detail: String::new(),
            },
            Err(e) => CheckOutcome {
                name,
                passed: false,
                detail: e.to_string(),
            },
        })
        .collect()
}
