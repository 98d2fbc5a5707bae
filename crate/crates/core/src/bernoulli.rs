//! Bernoulli numbers modulo `p`, exact small-index Bernoulli rationals, and
//! the partial harmonic sums over residue classes.
//!
//! `B_{p-1}` itself has `p` in its denominator, so only the difference
//! `B_{p-1}(c/d) - B_{p-1}` is evaluated modulo `p`. Two unrelated routes are
//! provided: [`bern_diff_direct`] expands the polynomial with a table of
//! `B_0..B_{p-2} mod p`, and [`bern_diff_harmonic`] reads the same value off
//! a truncated harmonic sum.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{harmonic_inv_sum, mod_inv, Residue};
use crate::error::{Error, Result};

pub const RATIONAL_INDEX_CAP: u32 = 30;

/// `B_0 .. B_{p-2}` reduced mod `p`. None of these has `p` in its denominator.
#[derive(Clone, Debug)]
pub struct BernContext {
    p: u64,
    table: Vec<Residue>,
}

impl BernContext {
    pub fn p(&self) -> u64 {
        self.p
    }

    /// `B_k mod p`, or `None` when `k > p - 2`.
    pub fn get(&self, k: usize) -> Option<Residue> {
        self.table.get(k).copied()
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }
}

/// Solve `sum_{j<=k} C(k+1, j) B_j = 0` for `B_k`, all mod `p`.
pub fn bernoulli_table_mod_p(p: u64) -> Result<BernContext> {
    if p < 3 || p.is_multiple_of(2) {
        return Err(Error::BadParams(format!("expected an odd prime, got {p}")));
    }
    let top = (p - 2) as usize;
    let mut table = Vec::with_capacity(top + 1);
    table.push(Residue::one(p));
    // Pascal row n = k + 1, kept mod p
    let mut row = vec![Residue::one(p), Residue::one(p)];
    for k in 1..=top {
        let mut next = vec![Residue::one(p); row.len() + 1];
        for j in 1..row.len() {
            next[j] = row[j - 1] + row[j];
        }
        row = next;
        let s = (0..k).fold(Residue::zero(p), |acc, j| acc + row[j] * table[j]);
        table.push(-s * mod_inv((k + 1) as i128, p)?);
    }
    Ok(BernContext { p, table })
}

fn check_denominator(p: u64, d: u64) -> Result<()> {
    if d == 0 || d.is_multiple_of(p) {
        return Err(Error::BadDenominator { d, p });
    }
    Ok(())
}

/// `B_{p-1}(c/d) - B_{p-1} mod p` from the Bernoulli table:
/// `sum_{l=0}^{p-2} C(p-1, l) B_l x^{p-1-l}` with `x = c/d mod p`.
/// Only `c mod d` matters.
pub fn bern_diff_direct(ctx: &BernContext, c: i64, d: u64) -> Result<Residue> {
    let p = ctx.p;
    check_denominator(p, d)?;
    let c = c.rem_euclid(d as i64);
    if c == 0 {
        return Ok(Residue::zero(p));
    }
    let x = Residue::reduce(c as i128, p) * mod_inv(d as i128, p)?;
    let mut binom = Residue::one(p);
    let mut acc = Residue::zero(p);
    for l in 0..=(p - 2) {
        if l > 0 {
            binom = binom * Residue::reduce((p - l) as i128, p) * mod_inv(l as i128, p)?;
        }
        acc += binom * ctx.table[l as usize] * x.pow(p - 1 - l);
    }
    Ok(acc)
}

/// Same quantity as [`bern_diff_direct`], as `-sum_{k <= floor(pn/d), p∤k} 1/k`
/// where `pn ≡ c (mod d)`.
pub fn bern_diff_harmonic(p: u64, c: i64, d: u64) -> Result<Residue> {
    check_denominator(p, d)?;
    let c = c.rem_euclid(d as i64) as u64;
    let n = if d == 1 {
        0
    } else {
        (Residue::reduce(c as i128, d) * mod_inv(p as i128, d)?).value()
    };
    let upper = ((p as u128 * n as u128) / d as u128) as u64;
    Ok(-harmonic_inv_sum(upper, p)?)
}

/// `K_p(r, m)`: sum of `1/k mod p` over `0 < k < p` with `k ≡ r p (mod m)`.
pub fn harmonic_class_sum(p: u64, r: i64, m: u64) -> Result<Residue> {
    if m == 0 || m.is_multiple_of(p) {
        return Err(Error::BadModulus { m, p });
    }
    let target = (r as i128 * p as i128).rem_euclid(m as i128) as u64;
    let mut acc = Residue::zero(p);
    let mut k = if target == 0 { m } else { target };
    while k < p {
        acc += mod_inv(k as i128, p)?;
        k += m;
    }
    Ok(acc)
}

/// Exact `B_n` for `n <= 30`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalBernoulli {
    pub index: u32,
    pub value: BigRational,
}

fn binomial(n: u32, k: u32) -> BigInt {
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

fn rational_table(n: u32) -> Result<Vec<BigRational>> {
    if n > RATIONAL_INDEX_CAP {
        return Err(Error::IndexCap(n));
    }
    let mut table: Vec<BigRational> = vec![BigRational::one()];
    for k in 1..=n {
        let s = (0..k).fold(BigRational::zero(), |acc, j| {
            acc + BigRational::from_integer(binomial(k + 1, j)) * &table[j as usize]
        });
        table.push(-s / BigRational::from_integer(BigInt::from(k + 1)));
    }
    Ok(table)
}

pub fn bernoulli_rational(n: u32) -> Result<RationalBernoulli> {
    let mut table = rational_table(n)?;
    Ok(RationalBernoulli {
        index: n,
        value: table.pop().expect("table holds B_0..B_n"),
    })
}

/// Exact `B_n(x) = sum_l C(n, l) B_l x^{n-l}`.
pub fn bernoulli_poly_rational(n: u32, x: &BigRational) -> Result<BigRational> {
    let table = rational_table(n)?;
    let mut acc = BigRational::zero();
    for (l, b) in table.iter().enumerate() {
        let l = l as u32;
        let coeff = BigRational::from_integer(binomial(n, l)) * b;
        acc += coeff * num_traits::pow(x.clone(), (n - l) as usize);
    }
    Ok(acc)
}

/// Reduce a rational whose denominator is prime to `p`.
pub fn rational_mod_p(q: &BigRational, p: u64) -> Result<Residue> {
    let pb = BigInt::from(p);
    if q.denom().mod_floor(&pb).is_zero() {
        return Err(Error::BadDenominator {
            d: (q.denom() % &pb).try_into().unwrap_or(0),
            p,
        });
    }
    let num = Residue::from_bigint(q.numer(), p)?;
    let den = Residue::from_bigint(q.denom(), p)?;
    Ok(num * den.inv()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::fermat_quotient;
    use crate::ntheory::primes_up_to;
    use num_traits::ToPrimitive;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn brute_inv(x: u64, p: u64) -> u64 {
        (1..p).find(|&y| x * y % p == 1).unwrap()
    }

    #[test]
    fn table_examples() {
        let ctx = bernoulli_table_mod_p(7).unwrap();
        let expect = [(0, q(1, 1)), (1, q(-1, 2)), (2, q(1, 6)), (4, q(-1, 30))];
        for (k, value) in expect {
            assert_eq!(ctx.get(k).unwrap(), rational_mod_p(&value, 7).unwrap());
        }
        assert_eq!(ctx.get(1).unwrap().value(), 3);
        assert_eq!(ctx.get(2).unwrap().value(), 6);
        assert_eq!(ctx.get(4).unwrap().value(), 3);

        let ctx = bernoulli_table_mod_p(5).unwrap();
        assert_eq!([0, 1, 2].map(|k| ctx.get(k).unwrap().value()), [1, 2, 1]);
        assert!(ctx.get(3).unwrap().is_zero());

        let ctx = bernoulli_table_mod_p(3).unwrap();
        assert_eq!(ctx.len(), 2);
        assert_eq!(ctx.get(1).unwrap().value(), 1);
    }

    #[test]
    fn table_matches_exact_rationals() {
        for p in primes_up_to(31).into_iter().skip(1) {
            let ctx = bernoulli_table_mod_p(p).unwrap();
            for k in 0..=(p - 2) as u32 {
                let exact = bernoulli_rational(k).unwrap().value;
                assert_eq!(
                    ctx.get(k as usize).unwrap(),
                    rational_mod_p(&exact, p).unwrap(),
                    "p={p} k={k}"
                );
                if k >= 3 && k % 2 == 1 {
                    assert!(ctx.get(k as usize).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn rational_examples() {
        assert_eq!(bernoulli_rational(0).unwrap().value, q(1, 1));
        assert_eq!(bernoulli_rational(1).unwrap().value, q(-1, 2));
        assert_eq!(bernoulli_rational(2).unwrap().value, q(1, 6));
        assert_eq!(bernoulli_rational(4).unwrap().value, q(-1, 30));
        assert_eq!(bernoulli_rational(12).unwrap().value, q(-691, 2730));
        assert_eq!(
            bernoulli_poly_rational(4, &q(1, 3)).unwrap(),
            q(4, 81) - q(1, 30)
        );
        assert!(matches!(bernoulli_rational(31), Err(Error::IndexCap(31))));
        assert!(bernoulli_poly_rational(31, &q(1, 2)).is_err());
    }

    #[test]
    fn von_staudt_clausen_denominators() {
        for n in (2..=30u32).step_by(2) {
            let b = bernoulli_rational(n).unwrap().value;
            let expected: i64 = primes_up_to(n as u64 + 1)
                .into_iter()
                .filter(|&q| (n as u64).is_multiple_of(q - 1))
                .map(|q| q as i64)
                .product();
            assert_eq!(b.denom().to_i64(), Some(expected), "n={n}");
        }
    }

    #[test]
    fn direct_difference_examples() {
        let ctx = bernoulli_table_mod_p(5).unwrap();
        assert!(bern_diff_direct(&ctx, 0, 3).unwrap().is_zero());
        // B_4(x) - B_4 = x^4 - 2x^3 + x^2 evaluated at 1/3 is 4/81
        let exact =
            bernoulli_poly_rational(4, &q(1, 3)).unwrap() - bernoulli_rational(4).unwrap().value;
        assert_eq!(exact, q(4, 81));
        let want = rational_mod_p(&exact, 5).unwrap();
        assert_eq!(bern_diff_direct(&ctx, 1, 3).unwrap(), want);
        assert_eq!(bern_diff_direct(&ctx, 2, 3).unwrap(), want);
        assert_eq!(want.value(), 4);
        assert!(matches!(
            bern_diff_direct(&ctx, 1, 10),
            Err(Error::BadDenominator { d: 10, p: 5 })
        ));
    }

    #[test]
    fn direct_difference_matches_exact_polynomial() {
        for p in [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
            let ctx = bernoulli_table_mod_p(p).unwrap();
            let n = (p - 1) as u32;
            let bn = bernoulli_rational(n).unwrap().value;
            for d in 1..=12u64 {
                if d % p == 0 {
                    continue;
                }
                for c in 0..d {
                    let x = q(c as i64, d as i64);
                    let exact = bernoulli_poly_rational(n, &x).unwrap() - &bn;
                    assert_eq!(
                        bern_diff_direct(&ctx, c as i64, d).unwrap(),
                        rational_mod_p(&exact, p).unwrap(),
                        "p={p} c={c} d={d}"
                    );
                }
            }
        }
    }

    #[test]
    fn harmonic_difference_examples() {
        assert!(bern_diff_harmonic(5, 0, 3).unwrap().is_zero());
        let oracle = (5 - (1 + brute_inv(2, 5) + brute_inv(3, 5)) % 5) % 5;
        assert_eq!(bern_diff_harmonic(5, 1, 3).unwrap().value(), oracle);
        assert_eq!(oracle, 4);
        assert!(bern_diff_harmonic(7, 3, 14).is_err());
    }

    #[test]
    fn two_routes_agree_and_are_periodic() {
        for p in primes_up_to(60).into_iter().filter(|&p| p >= 5) {
            let ctx = bernoulli_table_mod_p(p).unwrap();
            for d in 1..=24u64 {
                if d % p == 0 {
                    continue;
                }
                for c in 0..d as i64 {
                    let direct = bern_diff_direct(&ctx, c, d).unwrap();
                    assert_eq!(
                        direct,
                        bern_diff_harmonic(p, c, d).unwrap(),
                        "p={p} c={c} d={d}"
                    );
                    assert_eq!(direct, bern_diff_direct(&ctx, c + 3 * d as i64, d).unwrap());
                    assert_eq!(direct, bern_diff_harmonic(p, c - (d as i64), d).unwrap());
                }
            }
        }
    }

    #[test]
    fn class_sum_examples() {
        assert_eq!(harmonic_class_sum(5, 1, 3).unwrap().value(), 3);
        assert_eq!(harmonic_class_sum(5, 0, 3).unwrap().value(), 2);
        assert_eq!(harmonic_class_sum(5, 1, 1).unwrap().value(), 0);
        assert!(matches!(
            harmonic_class_sum(5, 1, 10),
            Err(Error::BadModulus { m: 10, p: 5 })
        ));
    }

    #[test]
    fn class_sum_antisymmetry_and_lerch() {
        for p in primes_up_to(50).into_iter().skip(1) {
            for m in 1..=20u64 {
                if m % p == 0 {
                    continue;
                }
                for r in 0..m as i64 {
                    assert_eq!(
                        harmonic_class_sum(p, r, m).unwrap(),
                        -harmonic_class_sum(p, 1 - r, m).unwrap()
                    );
                }
                let lhs = (1..=m as i64).fold(Residue::zero(p), |acc, r| {
                    acc + harmonic_class_sum(p, r, m).unwrap().scale(r as i128)
                });
                assert_eq!(lhs, -fermat_quotient(m as i64, p).unwrap());
            }
        }
    }

    #[test]
    fn raabe_multiplication_formula() {
        for n in 0..=8u32 {
            let bn = bernoulli_rational(n).unwrap().value;
            for m in 1..=6i64 {
                let sum = (0..m).fold(BigRational::zero(), |acc, r| {
                    acc + bernoulli_poly_rational(n, &q(r, m)).unwrap()
                });
                let scale = num_traits::pow(q(1, m), n as usize) * q(m, 1);
                assert_eq!(sum, scale * &bn, "n={n} m={m}");
            }
        }
    }

    #[test]
    fn p_times_bernoulli_is_minus_one() {
        for p in [5u64, 7, 11, 13] {
            let b = bernoulli_rational((p - 1) as u32).unwrap().value;
            let scaled = b * q(p as i64, 1);
            assert_eq!(rational_mod_p(&scaled, p).unwrap(), -Residue::one(p));
        }
    }
}
