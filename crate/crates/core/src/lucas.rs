//! Lucas sequences `u_n(A, B)` and `v_n(A, B)` reduced modulo an arbitrary modulus.

use num_bigint::BigInt;

use crate::arith::Residue;
use crate::error::{Error, Result};

pub const DEFAULT_ITER_CAP: u64 = 10_000_000;

/// Coefficients of `x^2 - A x + B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LucasParams {
    a: BigInt,
    b: BigInt,
}

impl LucasParams {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        Self {
            a: a.into(),
            b: b.into(),
        }
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    /// `A^2 - 4B`.
    pub fn delta(&self) -> BigInt {
        &self.a * &self.a - 4 * &self.b
    }

    fn reduced(&self, modulus: u64) -> Result<(Residue, Residue)> {
        Ok((
            Residue::from_bigint(&self.a, modulus)?,
            Residue::from_bigint(&self.b, modulus)?,
        ))
    }
}

/// `(u_n, v_n) mod modulus` in `O(log n)` steps.
///
/// The state is the pair `(u_k, u_{k+1})`; both updates are division-free,
/// so even moduli are fine:
/// `u_{2k} = u_k (2u_{k+1} - A u_k)` and `u_{2k+1} = u_{k+1}^2 - B u_k^2`.
/// `v_n` is recovered as `2u_{n+1} - A u_n`.
pub fn lucas_pair(params: &LucasParams, n: u64, modulus: u64) -> Result<(Residue, Residue)> {
    let (a, b) = params.reduced(modulus)?;
    let (mut uk, mut uk1) = (Residue::zero(modulus), Residue::one(modulus));
    for bit in (0..u64::BITS - n.leading_zeros()).rev() {
        let u2k = uk * (uk1.scale(2) - a * uk);
        let u2k1 = uk1 * uk1 - b * uk * uk;
        if (n >> bit) & 1 == 1 {
            (uk, uk1) = (u2k1, a * u2k1 - b * u2k);
        } else {
            (uk, uk1) = (u2k, u2k1);
        }
    }
    Ok((uk, uk1.scale(2) - a * uk))
}

/// Direct transcription of the recurrence, capped at [`DEFAULT_ITER_CAP`].
pub fn lucas_iter(params: &LucasParams, n: u64, modulus: u64) -> Result<(Residue, Residue)> {
    lucas_iter_capped(params, n, modulus, DEFAULT_ITER_CAP)
}

pub fn lucas_iter_capped(
    params: &LucasParams,
    n: u64,
    modulus: u64,
    cap: u64,
) -> Result<(Residue, Residue)> {
    if n > cap {
        return Err(Error::IterCapExceeded { n, cap });
    }
    let (a, b) = params.reduced(modulus)?;
    let (mut u0, mut u1) = (Residue::zero(modulus), Residue::one(modulus));
    let (mut v0, mut v1) = (Residue::new(2, modulus)?, a);
    if n == 0 {
        return Ok((u0, v0));
    }
    for _ in 1..n {
        (u0, u1) = (u1, a * u1 - b * u0);
        (v0, v1) = (v1, a * v1 - b * v0);
    }
    Ok((u1, v1))
}
