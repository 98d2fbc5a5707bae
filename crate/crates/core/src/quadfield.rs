//! Invariants of real quadratic fields: the fundamental unit from the
//! continued fraction of the integral basis element, and the narrow class
//! number from cycles of reduced indefinite binary quadratic forms.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ntheory::{fundamental_discriminant, isqrt};

pub const PERIOD_CAP: usize = 100_000;

/// `eps = (a + b sqrt(d)) / 2` with `a^2 - b^2 d = 4 norm`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FundamentalUnit {
    pub a: BigInt,
    pub b: BigInt,
    pub norm: i8,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadFieldInvariants {
    pub d: i64,
    pub alpha: u32,
    pub odd_primes: Vec<u64>,
    pub a: BigInt,
    pub b: BigInt,
    pub norm: i8,
    pub h_narrow: u64,
    pub h: u64,
}

impl QuadFieldInvariants {
    pub fn unit(&self) -> FundamentalUnit {
        FundamentalUnit {
            a: self.a.clone(),
            b: self.b.clone(),
            norm: self.norm,
        }
    }
}

/// Integer form `A x^2 + B xy + C y^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QuadForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl QuadForm {
    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    /// `0 < B < sqrt(d)` and `sqrt(d) - B < 2|A| < sqrt(d) + B`, compared in
    /// squared form.
    pub fn is_reduced(&self) -> bool {
        let d = self.discriminant() as i128;
        let b = self.b as i128;
        let two_a = 2 * (self.a as i128).abs();
        if b <= 0 || b * b >= d {
            return false;
        }
        let upper = two_a - b <= 0 || (two_a - b) * (two_a - b) < d;
        let lower = d < (two_a + b) * (two_a + b);
        upper && lower
    }

    /// One reduction step `(A, B, C) -> (C, B', (B'^2 - d)/4C)` with
    /// `B' ≡ -B (mod 2C)` chosen in `(sqrt(d) - 2|C|, sqrt(d))`.
    /// Valid for `|C| < sqrt(d)`, which every reduced form satisfies.
    pub fn rho(&self) -> QuadForm {
        let d = self.discriminant();
        let s = isqrt(d as u128) as i64;
        let two_c = 2 * self.c.abs();
        let b = s - (s + self.b).rem_euclid(two_c);
        let c = (b * b - d) / (4 * self.c);
        QuadForm { a: self.c, b, c }
    }
}

fn shape(d: i64) -> Result<crate::ntheory::Discriminant> {
    fundamental_discriminant(d).ok_or(Error::NotFundamental(d))
}

fn cf_digit(p: i64, q: i64, s: i64) -> i64 {
    if q > 0 {
        Integer::div_floor(&(p + s), &q)
    } else {
        Integer::div_floor(&(p + s + 1), &q)
    }
}

/// Smallest unit `> 1`, read off the first period of the continued fraction
/// of `(P0 + sqrt(d)) / 2` with `P0 = d mod 2`.
pub fn fundamental_unit(d: i64) -> Result<FundamentalUnit> {
    shape(d)?;
    let s = isqrt(d as u128) as i64;
    let (p0, q0) = (d.rem_euclid(2), 2i64);
    let (mut p, mut q) = (p0, q0);
    let (mut a_prev, mut a_cur) = (BigInt::zero(), BigInt::one());
    let (mut b_prev, mut b_cur) = (BigInt::one(), BigInt::zero());
    for step in 0..PERIOD_CAP {
        let digit = cf_digit(p, q, s);
        (a_prev, a_cur) = (a_cur.clone(), digit * &a_cur + &a_prev);
        (b_prev, b_cur) = (b_cur.clone(), digit * &b_cur + &b_prev);
        p = digit * q - p;
        q = (d - p * p) / q;
        if q == q0 {
            let a = q0 * &a_cur - p0 * &b_cur;
            let b = b_cur;
            let norm: i8 = if step % 2 == 0 { -1 } else { 1 };
            if &a * &a - &b * &b * d != BigInt::from(4 * norm as i64) {
                return Err(Error::InternalInconsistency(format!(
                    "period end for d = {d} is not a unit"
                )));
            }
            return Ok(FundamentalUnit { a, b, norm });
        }
    }
    Err(Error::PeriodCapExceeded { d, cap: PERIOD_CAP })
}

/// All reduced forms of discriminant `d`, sorted.
pub fn reduced_forms(d: i64) -> Vec<QuadForm> {
    let s = isqrt(d as u128) as i64;
    let mut out = Vec::new();
    let mut b = if d % 2 == 0 { 2 } else { 1 };
    while b <= s {
        let n = (d - b * b) / 4;
        for a in 1..=n {
            if n % a != 0 {
                continue;
            }
            for sign in [1, -1] {
                let f = QuadForm {
                    a: sign * a,
                    b,
                    c: -sign * (n / a),
                };
                if f.is_reduced() {
                    out.push(f);
                }
            }
        }
        b += 2;
    }
    out.sort();
    out
}

/// Partition of the reduced forms into `rho`-cycles.
pub fn form_cycles(d: i64) -> Result<Vec<Vec<QuadForm>>> {
    let forms = reduced_forms(d);
    let all: BTreeSet<QuadForm> = forms.iter().copied().collect();
    let mut seen = BTreeSet::new();
    let mut cycles = Vec::new();
    for &start in &forms {
        if seen.contains(&start) {
            continue;
        }
        let mut cycle = vec![start];
        seen.insert(start);
        let mut f = start.rho();
        while f != start {
            if !all.contains(&f) || !seen.insert(f) {
                return Err(Error::InternalInconsistency(format!(
                    "rho left the reduced cycle at {f:?} for d = {d}"
                )));
            }
            cycle.push(f);
            f = f.rho();
        }
        cycles.push(cycle);
    }
    Ok(cycles)
}

/// Number of `rho`-cycles of reduced forms, i.e. `h+`.
pub fn narrow_class_number(d: i64) -> Result<u64> {
    shape(d)?;
    Ok(form_cycles(d)?.len() as u64)
}

pub fn invariants(d: i64) -> Result<QuadFieldInvariants> {
    let disc = shape(d)?;
    let unit = fundamental_unit(d)?;
    let h_narrow = narrow_class_number(d)?;
    assemble(disc, unit, h_narrow)
}

fn assemble(
    disc: crate::ntheory::Discriminant,
    unit: FundamentalUnit,
    h_narrow: u64,
) -> Result<QuadFieldInvariants> {
    let h = if unit.norm == 1 {
        if !h_narrow.is_multiple_of(2) {
            return Err(Error::InternalInconsistency(format!(
                "odd narrow class number {h_narrow} with a norm +1 unit, d = {}",
                disc.d
            )));
        }
        h_narrow / 2
    } else {
        h_narrow
    };
    Ok(QuadFieldInvariants {
        d: disc.d,
        alpha: disc.alpha,
        odd_primes: disc.odd_primes,
        a: unit.a,
        b: unit.b,
        norm: unit.norm,
        h_narrow,
        h,
    })
}

mod bigint_number {
    use num_bigint::BigInt;
    use serde::de::Error as _;
    use serde::ser::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};
    use serde_json::Number;

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        let n: Number = v.to_string().parse().map_err(S::Error::custom)?;
        n.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let n = Number::deserialize(d)?;
        n.to_string().parse().map_err(D::Error::custom)
    }
}

/// One line of the on-disk invariant cache.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CacheRecord {
    pub d: i64,
    #[serde(with = "bigint_number")]
    pub a: BigInt,
    #[serde(with = "bigint_number")]
    pub b: BigInt,
    pub norm: i8,
    pub h_narrow: u64,
    pub h: u64,
}

impl From<&QuadFieldInvariants> for CacheRecord {
    fn from(f: &QuadFieldInvariants) -> Self {
        Self {
            d: f.d,
            a: f.a.clone(),
            b: f.b.clone(),
            norm: f.norm,
            h_narrow: f.h_narrow,
            h: f.h,
        }
    }
}

impl CacheRecord {
    pub fn into_invariants(self) -> Result<QuadFieldInvariants> {
        let disc = shape(self.d)?;
        let bad = |what: &str| {
            Error::InternalInconsistency(format!("cache record for d = {}: {what}", self.d))
        };
        if !self.a.is_positive() || !self.b.is_positive() || !matches!(self.norm, -1 | 1) {
            return Err(bad("unit out of range"));
        }
        if &self.a * &self.a - &self.b * &self.b * self.d != BigInt::from(4 * self.norm as i64) {
            return Err(bad("a^2 - b^2 d != 4 norm"));
        }
        let f = assemble(
            disc,
            FundamentalUnit {
                a: self.a,
                b: self.b,
                norm: self.norm,
            },
            self.h_narrow,
        )?;
        if f.h != self.h {
            return Err(bad("h inconsistent with h_narrow"));
        }
        Ok(f)
    }
}

/// Field invariants memoized by `d`, optionally backed by a JSON-lines file.
#[derive(Debug, Default)]
pub struct FieldCache {
    path: Option<PathBuf>,
    inner: Mutex<CacheState>,
}

#[derive(Debug, Default)]
struct CacheState {
    fields: BTreeMap<i64, QuadFieldInvariants>,
    dirty: bool,
}

impl FieldCache {
    pub fn in_memory() -> Self {
        Self::default()
    }

    /// Load `path` if it exists; a missing file starts an empty cache.
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let mut fields = BTreeMap::new();
        if path.exists() {
            let reader = BufReader::new(fs::File::open(&path)?);
            for line in reader.lines() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                let record: CacheRecord = serde_json::from_str(&line)?;
                let f = record.into_invariants()?;
                fields.insert(f.d, f);
            }
        }
        Ok(Self {
            path: Some(path),
            inner: Mutex::new(CacheState {
                fields,
                dirty: false,
            }),
        })
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    pub fn len(&self) -> usize {
        self.inner.lock().expect("cache lock").fields.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, d: i64) -> Result<QuadFieldInvariants> {
        if let Some(f) = self.inner.lock().expect("cache lock").fields.get(&d) {
            return Ok(f.clone());
        }
        // computed outside the lock; a racing insert of the same d is identical
        let f = invariants(d)?;
        let mut state = self.inner.lock().expect("cache lock");
        state.fields.insert(d, f.clone());
        state.dirty = true;
        Ok(f)
    }

    /// Rewrite the backing file (sorted by `d`) if anything new was computed.
    pub fn persist(&self) -> Result<()> {
        let Some(path) = &self.path else {
            return Ok(());
        };
        let mut state = self.inner.lock().expect("cache lock");
        if !state.dirty {
            return Ok(());
        }
        let tmp = path.with_extension("tmp");
        {
            let mut out = std::io::BufWriter::new(fs::File::create(&tmp)?);
            for f in state.fields.values() {
                serde_json::to_writer(&mut out, &CacheRecord::from(f))?;
                out.write_all(b"\n")?;
            }
            out.flush()?;
        }
        fs::rename(&tmp, path)?;
        state.dirty = false;
        Ok(())
    }
}
