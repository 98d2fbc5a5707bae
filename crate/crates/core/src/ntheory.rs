//! Factorization, multiplicative functions and quadratic residue symbols.

use crate::error::{Error, Result};

/// `n` together with its prime factorization in increasing prime order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredInteger {
    n: u64,
    factors: Vec<(u64, u32)>,
}

impl FactoredInteger {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(q, _)| q)
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    pub fn is_prime_power(&self) -> bool {
        self.factors.len() == 1
    }

    pub fn product(&self) -> u64 {
        self.factors.iter().map(|&(q, e)| q.pow(e)).product()
    }
}

/// Trial division up to the square root.
pub fn factorize(n: u64) -> FactoredInteger {
    assert!(n >= 1, "factorize needs n >= 1");
    let mut rest = n;
    let mut factors = Vec::new();
    let mut q = 2u64;
    while q.saturating_mul(q) <= rest {
        if rest.is_multiple_of(q) {
            let mut e = 0;
            while rest.is_multiple_of(q) {
                rest /= q;
                e += 1;
            }
            factors.push((q, e));
        }
        q += if q == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        factors.push((rest, 1));
    }
    FactoredInteger { n, factors }
}

pub fn moebius(n: u64) -> i8 {
    let f = factorize(n);
    if !f.is_squarefree() {
        0
    } else if f.factors.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .factors
        .iter()
        .map(|&(q, e)| (q - 1) * q.pow(e - 1))
        .product()
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut q = 2u64;
    while q * q <= n {
        if n.is_multiple_of(q) {
            return false;
        }
        q += 1;
    }
    true
}

/// Primes `<= limit`, ascending (sieve of Eratosthenes).
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

/// Floor square root (Newton iteration, exact).
pub fn isqrt(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128;
    loop {
        let y = (x + n / x) / 2;
        if y >= x {
            break;
        }
        x = y;
    }
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

pub fn is_square(n: u128) -> bool {
    let r = isqrt(n);
    r * r == n
}

/// Jacobi symbol `(a/n)` for odd positive `n`.
pub fn jacobi(a: i64, n: i64) -> Result<i8> {
    if n <= 0 || n % 2 == 0 {
        return Err(Error::EvenModulus(n));
    }
    let mut a = a.rem_euclid(n) as u64;
    let mut n = n as u64;
    let mut t = 1i8;
    while a != 0 {
        while a.is_multiple_of(2) {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                t = -t;
            }
        }
        (a, n) = (n, a);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    Ok(if n == 1 { t } else { 0 })
}

/// Kronecker symbol `(d/c)` for `c >= 0`; `(d/0)` is 1 for `|d| = 1`, else 0.
pub fn kronecker(d: i64, c: u64) -> i8 {
    if c == 0 {
        return if d == 1 || d == -1 { 1 } else { 0 };
    }
    let twos = c.trailing_zeros();
    let odd = c >> twos;
    let mut t: i8 = 1;
    if twos > 0 {
        let two = match d.rem_euclid(8) {
            1 | 7 => 1,
            3 | 5 => -1,
            _ => 0,
        };
        if twos % 2 == 1 {
            t = two;
        } else if two == 0 {
            t = 0;
        }
    }
    if t == 0 {
        return 0;
    }
    t * jacobi(d, odd as i64).expect("odd part is odd")
}

/// Shape of a fundamental discriminant `d = 2^alpha * p_1 ... p_r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Discriminant {
    pub d: i64,
    pub alpha: u32,
    pub odd_primes: Vec<u64>,
}

/// `Some` iff `d > 1` is the discriminant of a real quadratic field.
pub fn fundamental_discriminant(d: i64) -> Option<Discriminant> {
    if d <= 1 {
        return None;
    }
    let f = factorize(d as u64);
    let odd_primes: Vec<u64> = f.primes().filter(|&q| q != 2).collect();
    let alpha = match d % 4 {
        1 if f.is_squarefree() => 0,
        0 => {
            let m = d / 4;
            if !factorize(m as u64).is_squarefree() {
                return None;
            }
            match m % 4 {
                2 => 3,
                3 => 2,
                _ => return None,
            }
        }
        _ => return None,
    };
    Some(Discriminant {
        d,
        alpha,
        odd_primes,
    })
}

pub fn is_fundamental_discriminant(d: i64) -> bool {
    fundamental_discriminant(d).is_some()
}

/// Fundamental discriminants in `lo..=hi`, ascending.
pub fn fundamental_discriminants(lo: i64, hi: i64) -> Vec<i64> {
    (lo.max(2)..=hi)
        .filter(|&d| is_fundamental_discriminant(d))
        .collect()
}
