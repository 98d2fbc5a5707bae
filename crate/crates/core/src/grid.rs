//! Exhaustive runs of one congruence over a rectangle of parameters.

use std::collections::BTreeMap;

use crate::bernoulli::{bernoulli_table_mod_p, BernContext};
use crate::congruence::{
    verify_cor21, verify_cor22, verify_example_field, verify_granville, verify_thm11, verify_thm12,
    verify_thm13_bernoulli, verify_thm13_product, verify_thm21, CongruenceReport, TheoremId,
    EXAMPLE_DISCRIMINANTS,
};
use crate::error::{Error, Result};
use crate::ntheory::{fundamental_discriminants, is_fundamental_discriminant, primes_up_to};
use crate::quadfield::FieldCache;

/// Which discriminants or moduli to visit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Single(i64),
    /// Every admissible value up to and including the bound.
    UpTo(i64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridSpec {
    pub theorem: TheoremId,
    /// Odd primes `3 <= p <= p_max` are visited.
    pub p_max: u64,
    pub family: Family,
    pub rhos: Vec<i8>,
    /// Fixed `r` for `t21`; otherwise every `r` in `[0, m)`.
    pub r: Option<i64>,
    /// Fixed `n` for `cor21`; otherwise every `n` in `[1, m]`.
    pub n: Option<u64>,
}

impl GridSpec {
    pub fn new(theorem: TheoremId, family: Family, p_max: u64) -> Self {
        Self {
            theorem,
            p_max,
            family,
            rhos: vec![1, -1],
            r: None,
            n: None,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GridOutcome {
    pub reports: Vec<CongruenceReport>,
    /// Tuples dropped by a precondition (`p | d`, `p | m`, `m <= 2`).
    pub skipped: usize,
}

impl GridOutcome {
    pub fn passed(&self) -> usize {
        self.reports.iter().filter(|r| r.pass).count()
    }

    pub fn failed(&self) -> usize {
        self.reports.len() - self.passed()
    }

    pub fn all_pass(&self) -> bool {
        self.reports.iter().all(|r| r.pass)
    }
}

fn family_values(spec: &GridSpec) -> Result<Vec<i64>> {
    let t = spec.theorem;
    if t.uses_discriminant() {
        let admissible = |d: i64| {
            is_fundamental_discriminant(d)
                && (t != TheoremId::ExampleField || EXAMPLE_DISCRIMINANTS.contains(&d))
        };
        match spec.family {
            Family::Single(d) if admissible(d) => Ok(vec![d]),
            Family::Single(d) => Err(Error::BadParams(format!(
                "d = {d} is not admissible for {t}"
            ))),
            Family::UpTo(max) => Ok(fundamental_discriminants(2, max)
                .into_iter()
                .filter(|&d| admissible(d))
                .collect()),
        }
    } else {
        match spec.family {
            Family::Single(m) if m >= 1 => Ok(vec![m]),
            Family::Single(m) => Err(Error::BadParams(format!("m = {m} must be positive"))),
            Family::UpTo(max) => Ok((1..=max).collect()),
        }
    }
}

/// Evaluate every tuple of the grid; reports come back sorted by
/// `(theorem, d or m, p, rho, r, n)`.
pub fn run_grid(spec: &GridSpec, cache: &FieldCache) -> Result<GridOutcome> {
    let t = spec.theorem;
    let values = family_values(spec)?;
    let primes: Vec<u64> = primes_up_to(spec.p_max)
        .into_iter()
        .filter(|&p| p > 2)
        .collect();
    let mut contexts: BTreeMap<u64, BernContext> = BTreeMap::new();
    let mut out = GridOutcome::default();

    for &v in &values {
        let vu = v as u64;
        let field = if t.uses_discriminant() {
            Some(cache.get(v)?)
        } else {
            None
        };
        for &p in &primes {
            if vu.is_multiple_of(p) || (t == TheoremId::T12 && vu <= 2) {
                out.skipped += if t.uses_rho() { spec.rhos.len() } else { 1 };
                continue;
            }
            match t {
                TheoremId::Granville => out.reports.push(verify_granville(vu, p)?),
                TheoremId::T12 => out.reports.push(verify_thm12(vu, p)?),
                TheoremId::Cor22 => out.reports.push(verify_cor22(vu, p)?),
                TheoremId::T11 | TheoremId::ExampleField => {
                    let f = field.as_ref().expect("discriminant family");
                    for &rho in &spec.rhos {
                        out.reports.push(if t == TheoremId::T11 {
                            verify_thm11(f, p, rho)?
                        } else {
                            verify_example_field(f, p, rho)?
                        });
                    }
                }
                TheoremId::T13Bern => out
                    .reports
                    .push(verify_thm13_bernoulli(field.as_ref().expect("field"), p)?),
                TheoremId::T13Prod => out
                    .reports
                    .push(verify_thm13_product(field.as_ref().expect("field"), p)?),
                TheoremId::T21 | TheoremId::Cor21 => {
                    if let std::collections::btree_map::Entry::Vacant(e) = contexts.entry(p) {
                        e.insert(bernoulli_table_mod_p(p)?);
                    }
                    let ctx = &contexts[&p];
                    if t == TheoremId::T21 {
                        let rs: Vec<i64> = match spec.r {
                            Some(r) => vec![r],
                            None => (0..v).collect(),
                        };
                        for r in rs {
                            out.reports.push(verify_thm21(ctx, vu, r)?);
                        }
                    } else {
                        let ns: Vec<u64> = match spec.n {
                            Some(n) => vec![n],
                            None => (1..=vu).collect(),
                        };
                        for n in ns {
                            out.reports.push(verify_cor21(ctx, vu, n)?);
                        }
                    }
                }
            }
        }
    }
    out.reports.sort_by_key(|r| r.sort_key());
    Ok(out)
}
