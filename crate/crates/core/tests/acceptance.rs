//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
//! the process exits non-zero if any criterion fails.

use std::collections::HashMap;
use std::process::ExitCode;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};

use quadbinom::bernoulli::{
    bern_diff_direct, bern_diff_harmonic, bernoulli_poly_rational, bernoulli_rational,
    bernoulli_table_mod_p, harmonic_class_sum,
};
use quadbinom::congruence::{
    example_specialized_rhs, geometric_quotient, is_prime_branch, thm11_rhs, QuotientRoute,
    EXAMPLE_DISCRIMINANTS,
};
use quadbinom::lucas::{lucas_iter, lucas_pair, LucasParams};
use quadbinom::ntheory::{
    factorize, fundamental_discriminants, is_prime, jacobi, kronecker, primes_up_to,
};
use quadbinom::{run_grid, CongruenceReport, Family, FieldCache, GridSpec, TheoremId};

type Check = std::result::Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Check + 'a>);

fn odd_primes_below(limit: u64) -> Vec<u64> {
    primes_up_to(limit - 1)
        .into_iter()
        .filter(|&p| p > 2)
        .collect()
}

/// Row `C(p-1, k) mod p^2` for all `k`, from exact big-integer binomials.
struct ExactBinomials(HashMap<u64, Vec<u64>>);

impl ExactBinomials {
    fn new() -> Self {
        Self(HashMap::new())
    }

    fn get(&mut self, p: u64, k: u64) -> u64 {
        let row = self.0.entry(p).or_insert_with(|| {
            let m = BigUint::from(p * p);
            (0..p)
                .map(|k| {
                    let c = num_integer::binomial(BigUint::from(p - 1), BigUint::from(k));
                    (c % &m).to_u64().unwrap()
                })
                .collect()
        });
        row[k as usize]
    }

    fn product(&mut self, p: u64, ks: impl Iterator<Item = u64>) -> u64 {
        let m = (p * p) as u128;
        ks.fold(1u128, |acc, k| acc * self.get(p, k) as u128 % m) as u64
    }
}

fn big_mod(x: &BigInt, m: u64) -> u64 {
    x.mod_floor(&BigInt::from(m)).to_u64().unwrap()
}

/// Exact rational reduced mod `p` (denominator coprime to `p`).
fn rat_mod(q: &BigRational, p: u64) -> u64 {
    let pb = BigInt::from(p);
    let num = q.numer().mod_floor(&pb);
    let den = q.denom().mod_floor(&pb);
    let inv = den.modpow(&(&pb - 2u32), &pb);
    big_mod(&(num * inv), p)
}

fn frac(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn fract(n: i64, d: i64) -> BigRational {
    frac(n.rem_euclid(d), d)
}

fn require(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn all_pass(reports: &[CongruenceReport]) -> Result<(), String> {
    match reports.iter().find(|r| !r.pass) {
        None => Ok(()),
        Some(r) => Err(format!("failing report {}", r.to_json())),
    }
}

fn grid(
    theorem: TheoremId,
    family: Family,
    p_max: u64,
    cache: &FieldCache,
) -> Result<Vec<CongruenceReport>, String> {
    let spec = GridSpec::new(theorem, family, p_max);
    run_grid(&spec, cache)
        .map(|o| o.reports)
        .map_err(|e| e.to_string())
}

fn param(r: &CongruenceReport, k: &str) -> i64 {
    r.param(k).unwrap()
}

fn character_product_oracle(bin: &mut ExactBinomials, d: i64, p: u64, rho: i64) -> u64 {
    let ks = (1..d as u64)
        .filter(|&c| kronecker(d, c) as i64 == rho)
        .map(|c| p * c / d as u64);
    bin.product(p, ks)
}

fn criterion_1(cache: &FieldCache) -> Check {
    let mut bin = ExactBinomials::new();
    let reports = grid(TheoremId::ExampleField, Family::UpTo(28), 199, cache)?;
    let expected: usize = EXAMPLE_DISCRIMINANTS
        .iter()
        .map(|&d| {
            odd_primes_below(200)
                .iter()
                .filter(|&&p| !(d as u64).is_multiple_of(p))
                .count()
                * 2
        })
        .sum();
    require(reports.len() == expected, || {
        format!("{} reports, expected {expected}", reports.len())
    })?;
    all_pass(&reports)?;
    for r in &reports {
        let (d, p, rho) = (param(r, "d"), param(r, "p") as u64, param(r, "rho"));
        let field = cache.get(d).map_err(|e| e.to_string())?;
        let special = example_specialized_rhs(d, p, rho as i8).map_err(|e| e.to_string())?;
        let generic = thm11_rhs(&field, p, rho as i8).map_err(|e| e.to_string())?;
        require(special == generic, || {
            format!("specialized != generic at d={d} p={p} rho={rho}")
        })?;
        let oracle = character_product_oracle(&mut bin, d, p, rho);
        require(r.lhs.value() == oracle, || {
            format!("lhs oracle mismatch at d={d} p={p}")
        })?;
    }
    Ok(format!("{} reports", reports.len()))
}

fn criterion_2(cache: &FieldCache) -> Check {
    let mut bin = ExactBinomials::new();
    let reports = grid(TheoremId::T11, Family::UpTo(99), 97, cache)?;
    all_pass(&reports)?;
    let fields = fundamental_discriminants(2, 99);
    let expected: usize = fields
        .iter()
        .map(|&d| {
            odd_primes_below(100)
                .iter()
                .filter(|&&p| !(d as u64).is_multiple_of(p))
                .count()
                * 2
        })
        .sum();
    require(reports.len() == expected, || {
        format!("{} reports, expected {expected}", reports.len())
    })?;
    for r in &reports {
        let (d, p, rho) = (param(r, "d"), param(r, "p") as u64, param(r, "rho"));
        require(
            r.lhs.value() == character_product_oracle(&mut bin, d, p, rho),
            || format!("lhs oracle mismatch at d={d} p={p} rho={rho}"),
        )?;
    }
    Ok(format!(
        "{} reports over {} fields",
        reports.len(),
        fields.len()
    ))
}

fn criterion_3(cache: &FieldCache) -> Check {
    let mut bin = ExactBinomials::new();
    let reports = grid(TheoremId::Granville, Family::UpTo(40), 97, cache)?;
    all_pass(&reports)?;
    for r in &reports {
        let (m, p) = (param(r, "m") as u64, param(r, "p") as u64);
        let mod2 = p * p;
        let lhs = bin.product(p, (1..m).map(|k| p * k / m));
        let mut rhs: BigInt = BigInt::from(m).pow(p as u32) - BigInt::from(m) + 1u32;
        if ((m - 1) * (p - 1) / 2) % 2 == 1 {
            rhs = -rhs;
        }
        require(
            lhs == r.lhs.value() && big_mod(&rhs, mod2) == r.rhs.value(),
            || format!("oracle mismatch at m={m} p={p}"),
        )?;
    }
    Ok(format!("{} reports", reports.len()))
}

fn criterion_4(cache: &FieldCache) -> Check {
    let mut bin = ExactBinomials::new();
    let reports = grid(TheoremId::T12, Family::UpTo(40), 97, cache)?;
    all_pass(&reports)?;
    let mut prime_powers = 0;
    let mut sum_route = 0;
    for r in &reports {
        let (m, p) = (param(r, "m") as u64, param(r, "p") as u64);
        require(m > 2, || format!("m = {m} reported"))?;
        let f = factorize(m);
        let mod2 = p * p;
        let mut lhs = BigInt::one();
        if ((quadbinom::ntheory::euler_phi(m) / 2) * ((p - 1) / 2)) % 2 == 1 {
            lhs = -lhs;
        }
        if f.is_prime_power() {
            prime_powers += 1;
            lhs *= jacobi(f.factors()[0].0 as i64, p as i64).unwrap() as i64;
        }
        let ks = (1..m)
            .take_while(|&k| 2 * k < m)
            .filter(|&k| k.gcd(&m) == 1)
            .map(|k| p * k / m);
        lhs *= bin.product(p, ks);
        // exact (q^(p-1) - 1)/(q - 1), never inverting q - 1
        let mut sum = BigInt::zero();
        for &(q, e) in f.factors() {
            let qb = BigInt::from(q);
            let quot = (qb.pow(p as u32 - 1) - 1u32) / (&qb - 1u32);
            sum += quot * (e as u64 * q - e as u64 + 1);
            if (q - 1) % p == 0 {
                sum_route += 1;
                let (_, route) = geometric_quotient(q, p).map_err(|e| e.to_string())?;
                require(route == QuotientRoute::GeometricSum, || {
                    format!("q={q} p={p} took {route:?}")
                })?;
            }
        }
        let rhs = sum * (quadbinom::ntheory::euler_phi(m) / 2) + 1u32;
        require(
            big_mod(&lhs, mod2) == r.lhs.value() && big_mod(&rhs, mod2) == r.rhs.value(),
            || format!("oracle mismatch at m={m} p={p}"),
        )?;
    }
    require(prime_powers > 0, || "no prime-power moduli".into())?;
    require(sum_route > 0, || "no tuple with p | q - 1".into())?;
    require(
        reports
            .iter()
            .any(|r| param(r, "m") == 7 && param(r, "p") == 3),
        || "m=7 p=3 missing".into(),
    )?;
    Ok(format!(
        "{} reports, {prime_powers} prime-power, {sum_route} geometric-sum",
        reports.len()
    ))
}

fn criterion_5(cache: &FieldCache) -> Check {
    let bern = grid(TheoremId::T13Bern, Family::UpTo(99), 97, cache)?;
    let prod = grid(TheoremId::T13Prod, Family::UpTo(99), 97, cache)?;
    all_pass(&bern)?;
    all_pass(&prod)?;
    require(bern.len() == prod.len(), || "grid sizes differ".into())?;
    let prime_branch = prod
        .iter()
        .filter(|r| is_prime_branch(param(r, "d")))
        .count();
    require(prime_branch > 0 && prime_branch < prod.len(), || {
        "a branch is uncovered".into()
    })?;
    require(prod.iter().any(|r| param(r, "d") == 8), || {
        "d = 8 uncovered".into()
    })?;
    // exact Bernoulli polynomials for the small primes
    let mut oracle_checked = 0;
    for r in bern.iter().filter(|r| param(r, "p") <= 31) {
        let (d, p) = (param(r, "d"), param(r, "p") as u64);
        let n = (p - 1) as u32;
        let bn = bernoulli_rational(n).unwrap().value;
        let mut acc = BigRational::zero();
        for c in 1..d {
            let chi = kronecker(d, c as u64) as i64;
            if chi != 0 {
                let diff = bernoulli_poly_rational(n, &frac(c, d)).unwrap() - &bn;
                acc += diff * BigRational::from_integer(BigInt::from(chi));
            }
        }
        require(rat_mod(&acc, p) == r.lhs.value(), || {
            format!("bernoulli oracle mismatch d={d} p={p}")
        })?;
        oracle_checked += 1;
    }
    Ok(format!(
        "{} + {} reports, {prime_branch} on the prime branch, {oracle_checked} exact-rational checks",
        bern.len(),
        prod.len()
    ))
}

fn criterion_6(cache: &FieldCache) -> Check {
    let t21 = grid(TheoremId::T21, Family::UpTo(20), 47, cache)?;
    let cor21 = grid(TheoremId::Cor21, Family::UpTo(20), 47, cache)?;
    let cor22 = grid(TheoremId::Cor22, Family::UpTo(24), 97, cache)?;
    all_pass(&t21)?;
    all_pass(&cor21)?;
    all_pass(&cor22)?;
    for r in t21.iter().filter(|r| param(r, "p") <= 31) {
        let (m, p, rr) = (param(r, "m"), param(r, "p"), param(r, "r"));
        let n = (p - 1) as u32;
        let upper = bernoulli_poly_rational(n, &fract(rr, m)).unwrap();
        let lower = bernoulli_poly_rational(n, &fract(rr - p, m)).unwrap();
        let rhs = (upper - lower) / BigRational::from_integer(BigInt::from(m));
        require(rat_mod(&rhs, p as u64) == r.rhs.value(), || {
            format!("t21 oracle m={m} p={p} r={rr}")
        })?;
    }
    let mut antisym = 0;
    for p in odd_primes_below(50) {
        for m in 1..=20u64 {
            if m % p == 0 {
                continue;
            }
            for r in 0..m as i64 {
                let a = harmonic_class_sum(p, r, m).map_err(|e| e.to_string())?;
                let b = harmonic_class_sum(p, 1 - r, m).map_err(|e| e.to_string())?;
                require(a == -b, || format!("antisymmetry fails p={p} m={m} r={r}"))?;
                antisym += 1;
            }
        }
    }
    for r in &cor22 {
        let (m, p) = (param(r, "m"), param(r, "p") as u32);
        let q = (BigInt::from(m).pow(p - 1) - 1u32) / BigInt::from(p);
        require(big_mod(&-q, p as u64) == r.rhs.value(), || {
            format!("fermat quotient oracle m={m} p={p}")
        })?;
    }
    Ok(format!(
        "{} + {} + {antisym} + {} checks",
        t21.len(),
        cor21.len(),
        cor22.len()
    ))
}

fn criterion_7() -> Check {
    let mut count = 0;
    for p in odd_primes_below(100).into_iter().filter(|&p| p >= 5) {
        let ctx = bernoulli_table_mod_p(p).map_err(|e| e.to_string())?;
        for d in 1..=24u64 {
            if d % p == 0 {
                continue;
            }
            for c in 0..d as i64 {
                let a = bern_diff_direct(&ctx, c, d).map_err(|e| e.to_string())?;
                let b = bern_diff_harmonic(p, c, d).map_err(|e| e.to_string())?;
                require(a == b, || format!("routes differ p={p} c={c} d={d}"))?;
                count += 1;
            }
        }
    }
    for n in 0..=8u32 {
        let bn = bernoulli_rational(n).unwrap().value;
        for m in 1..=6i64 {
            let mut sum = BigRational::zero();
            for r in 0..m {
                sum += bernoulli_poly_rational(n, &frac(r, m)).unwrap();
            }
            let scale = frac(m, 1) / BigRational::from_integer(BigInt::from(m).pow(n));
            require(sum == scale * &bn, || format!("Raabe fails n={n} m={m}"))?;
        }
    }
    for p in [5i64, 7, 11, 13] {
        let b = bernoulli_rational((p - 1) as u32).unwrap().value * frac(p, 1);
        require(rat_mod(&b, p as u64) == p as u64 - 1, || {
            format!("pB_(p-1) != -1 at p={p}")
        })?;
    }
    Ok(format!("{count} difference pairs, Raabe, pB_(p-1)"))
}

/// Smallest `(a, b)` with `a^2 - d b^2 = ±4`, by scanning `b`.
fn brute_unit(d: i64) -> (i64, i64, i8) {
    for b in 1i64.. {
        for norm in [-1i8, 1] {
            let a2 = d * b * b + 4 * norm as i64;
            if a2 > 0 {
                let a = (a2 as f64).sqrt().round() as i64;
                if a * a == a2 {
                    return (a, b, norm);
                }
            }
        }
    }
    unreachable!()
}

fn analytic_h(d: i64, a: f64, b: f64) -> u64 {
    let log_eps = ((a + b * (d as f64).sqrt()) / 2.0).ln();
    let s: f64 = (1..d)
        .map(|c| {
            kronecker(d, c as u64) as f64 * (std::f64::consts::PI * c as f64 / d as f64).sin().ln()
        })
        .sum();
    (-s / (2.0 * log_eps)).round() as u64
}

fn criterion_8(cache: &FieldCache) -> Check {
    let table: [(i64, (i64, i64, i8, u64)); 7] = [
        (13, (3, 1, -1, 1)),
        (21, (5, 1, 1, 1)),
        (24, (10, 2, 1, 1)),
        (28, (16, 3, 1, 1)),
        (5, (1, 1, -1, 1)),
        (8, (2, 1, -1, 1)),
        (40, (6, 1, -1, 2)),
    ];
    for (d, (a, b, norm, h)) in table {
        let f = cache.get(d).map_err(|e| e.to_string())?;
        let got = (f.a.to_i64().unwrap(), f.b.to_i64().unwrap(), f.norm, f.h);
        require(got == (a, b, norm, h), || format!("d={d}: got {got:?}"))?;
        require(brute_unit(d) == (a, b, norm), || {
            format!("d={d}: brute-force unit disagrees")
        })?;
        require(analytic_h(d, a as f64, b as f64) == h, || {
            format!("d={d}: analytic h disagrees")
        })?;
    }
    let mut primes = 0;
    for d in fundamental_discriminants(2, 99) {
        let f = cache.get(d).map_err(|e| e.to_string())?;
        if d == 8 || is_prime(d as u64) {
            require(f.norm == -1, || format!("norm +1 at d={d}"))?;
            primes += 1;
        }
        let (a, b, norm) = brute_unit(d);
        require(
            f.a == BigInt::from(a) && f.b == BigInt::from(b) && f.norm == norm,
            || format!("unit mismatch at d={d}"),
        )?;
        require(f.h == analytic_h(d, a as f64, b as f64), || {
            format!("h mismatch at d={d}")
        })?;
        require(
            f.h_narrow == if f.norm == 1 { 2 * f.h } else { f.h },
            || format!("h+ at d={d}"),
        )?;
    }
    Ok(format!(
        "7 tabulated fields, {primes} norm -1 discriminants"
    ))
}

fn criterion_9() -> Check {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let moduli = [2u64, 3, 4, 5, 7, 9, 11, 13, 25, 49, 121, 169];
    let mut pairs = 0;
    for _ in 0..500 {
        let (a, b) = (rng.random_range(-10i64..=10), rng.random_range(-10i64..=10));
        let n = rng.random_range(0u64..=200);
        let m = moduli[rng.random_range(0..moduli.len())];
        let params = LucasParams::new(a, b);
        let fast = lucas_pair(&params, n, m).map_err(|e| e.to_string())?;
        let slow = lucas_iter(&params, n, m).map_err(|e| e.to_string())?;
        require(fast == slow, || format!("A={a} B={b} n={n} mod {m}"))?;
    }
    for _ in 0..50 {
        let (a, b) = (
            rng.random_range(-1000i64..=1000),
            rng.random_range(-1000i64..=1000),
        );
        let params = LucasParams::new(a, b);
        let delta = params.delta();
        for p in odd_primes_below(50) {
            let pb = BigInt::from(p);
            if (&delta % &pb).is_zero() || b % p as i64 == 0 {
                continue;
            }
            let leg = jacobi(big_mod(&delta, p) as i64, p as i64).unwrap();
            let (u, v) = lucas_pair(&params, p, p).map_err(|e| e.to_string())?;
            require(
                u.value() == (leg as i64).rem_euclid(p as i64) as u64,
                || format!("u_p A={a} B={b} p={p}"),
            )?;
            require(v.value() == a.rem_euclid(p as i64) as u64, || {
                format!("v_p A={a} B={b} p={p}")
            })?;
            let (w, _) = lucas_pair(&params, (p as i64 - leg as i64) as u64, p)
                .map_err(|e| e.to_string())?;
            require(w.is_zero(), || {
                format!("p does not divide u_(p-(D/p)) A={a} B={b} p={p}")
            })?;
            pairs += 1;
        }
    }
    Ok(format!("500 random routes, {pairs} prime checks"))
}

fn main() -> ExitCode {
    let cache = FieldCache::in_memory();
    let criteria: Vec<Criterion> = vec![
        ("worked fields, p < 200", Box::new(|| criterion_1(&cache))),
        (
            "character products, d < 100, p < 100",
            Box::new(|| criterion_2(&cache)),
        ),
        (
            "granville, m <= 40, p < 100",
            Box::new(|| criterion_3(&cache)),
        ),
        (
            "half-range products, 2 < m <= 40, p < 100",
            Box::new(|| criterion_4(&cache)),
        ),
        (
            "bernoulli sums and signed products, d < 100",
            Box::new(|| criterion_5(&cache)),
        ),
        (
            "partial harmonic sums and K_p",
            Box::new(|| criterion_6(&cache)),
        ),
        ("bernoulli backends, Raabe, pB_(p-1)", Box::new(criterion_7)),
        ("field invariants", Box::new(|| criterion_8(&cache))),
        ("lucas sequences", Box::new(criterion_9)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS criterion {}: {name} ({detail})", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
