//! Exact residue arithmetic modulo `p` and `p^2`.
//!
//! Values are stored as `u64` and multiplied through `u128`, so any modulus
//! below `2^64` is safe. Congruences mod `p^2` therefore require `p < 2^32`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};

/// Largest prime for which `p^2` still fits the residue width.
pub const MAX_PRIME: u64 = (1 << 32) - 1;

/// An integer reduced into `[0, modulus)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Residue {
    value: u64,
    modulus: u64,
}

impl Residue {
    pub fn new(value: i128, modulus: u64) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::InvalidModulus(modulus));
        }
        Ok(Self::reduce(value, modulus))
    }

    pub(crate) fn reduce(value: i128, modulus: u64) -> Self {
        debug_assert!(modulus >= 2);
        Self {
            value: value.rem_euclid(modulus as i128) as u64,
            modulus,
        }
    }

    pub fn from_bigint(value: &BigInt, modulus: u64) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::InvalidModulus(modulus));
        }
        let r = value.mod_floor(&BigInt::from(modulus));
        Ok(Self {
            value: r.to_u64().expect("remainder below modulus"),
            modulus,
        })
    }

    pub fn zero(modulus: u64) -> Self {
        Self::reduce(0, modulus)
    }

    pub fn one(modulus: u64) -> Self {
        Self::reduce(1, modulus)
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> u64 {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    /// Symmetric lift into `(-modulus/2, modulus/2]`.
    pub fn signed(self) -> i128 {
        let v = self.value as i128;
        if 2 * v > self.modulus as i128 {
            v - self.modulus as i128
        } else {
            v
        }
    }

    pub fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Self::one(self.modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base *= base;
            e >>= 1;
        }
        acc
    }

    pub fn inv(self) -> Result<Self> {
        mod_inv(self.value as i128, self.modulus)
    }

    /// Reduce into a smaller modulus that divides this one.
    pub fn project(self, modulus: u64) -> Self {
        assert!(
            modulus >= 2 && self.modulus.is_multiple_of(modulus),
            "cannot project mod {} onto mod {modulus}",
            self.modulus
        );
        Self::reduce(self.value as i128, modulus)
    }

    /// Multiply by a signed small integer.
    pub fn scale(self, k: i128) -> Self {
        self * Self::reduce(k, self.modulus)
    }

    fn check(self, other: Self) {
        assert_eq!(
            self.modulus, other.modulus,
            "residue arithmetic across different moduli"
        );
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

impl Add for Residue {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.check(rhs);
        let s = (self.value as u128 + rhs.value as u128) % self.modulus as u128;
        Self {
            value: s as u64,
            modulus: self.modulus,
        }
    }
}

impl Sub for Residue {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for Residue {
    type Output = Self;
    fn neg(self) -> Self {
        if self.value == 0 {
            self
        } else {
            Self {
                value: self.modulus - self.value,
                modulus: self.modulus,
            }
        }
    }
}

impl Mul for Residue {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.check(rhs);
        let m = (self.value as u128 * rhs.value as u128) % self.modulus as u128;
        Self {
            value: m as u64,
            modulus: self.modulus,
        }
    }
}

impl AddAssign for Residue {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl SubAssign for Residue {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl MulAssign for Residue {
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

/// Extended Euclid on signed 128-bit integers: returns `(g, s, t)` with
/// `s*a + t*b = g`, `g >= 0`.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Inverse of `x` modulo `n` by extended Euclid. Works for composite `n`.
pub fn mod_inv(x: i128, n: u64) -> Result<Residue> {
    if n < 2 {
        return Err(Error::InvalidModulus(n));
    }
    let xr = x.rem_euclid(n as i128);
    let (g, s, _) = ext_gcd(xr, n as i128);
    if g != 1 {
        return Err(Error::NotInvertible {
            value: x,
            modulus: n,
            gcd: g as u64,
        });
    }
    Ok(Residue::reduce(s, n))
}

pub fn mod_pow(x: i128, e: u64, n: u64) -> Result<Residue> {
    Ok(Residue::new(x, n)?.pow(e))
}

/// `C(p-1, k) mod p^2` as the running product of `(p-j)/j`.
pub fn binom_p1_mod_p2(p: u64, k: u64) -> Result<Residue> {
    if k >= p {
        return Err(Error::OutOfRange { k, p });
    }
    let m = p * p;
    let mut acc = Residue::one(m);
    for j in 1..=k {
        acc *= Residue::reduce((p - j) as i128, m) * mod_inv(j as i128, m)?;
    }
    Ok(acc)
}

/// `sum of 1/k (mod p)` over `1 <= k <= n` with `p` not dividing `k`.
pub fn harmonic_inv_sum(n: u64, p: u64) -> Result<Residue> {
    let mut acc = Residue::zero(p);
    for k in 1..=n {
        let k = k % p;
        if k != 0 {
            acc += mod_inv(k as i128, p)?;
        }
    }
    Ok(acc)
}

/// Fermat quotient `(a^(p-1) - 1)/p mod p`, taken through `a^(p-1) mod p^2`.
pub fn fermat_quotient(a: i64, p: u64) -> Result<Residue> {
    if (a as i128).rem_euclid(p as i128) == 0 {
        return Err(Error::DivisibleBase { a, p });
    }
    let m = p * p;
    let t = mod_pow(a as i128, p - 1, m)? - Residue::one(m);
    debug_assert_eq!(t.value() % p, 0);
    Ok(Residue::reduce((t.value() / p) as i128, p))
}
