//! Closed product formula for the coefficients of `Q(r)` and its cross-check.
//!
//! For a covered sequence `r` and `w ⪯ r` in `S_n`,
//!
//! ```text
//! α_r(w) = ∏_{i=2}^{n} [i]^{max(a_r(i-1) - 1, inv_v(i))}
//! ```
//!
//! where `v = w`, or `v = w^{-1}` when the classification goes through a reversal, and
//! `inv_v(n) = 0`. The product runs up to `n` itself: the factor at `i = n` is `1` for
//! `ρ_n` and its relatives but not in general, e.g. `r = (1,2,1,2)` picks up `[3]` there.
//! When `a_r(i-1) = 0` the first argument is `-1` and the inversion count wins.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hecke::{expand_with, ExpandOptions};
use crate::perm::Perm;
use crate::qpoly::QPoly;
use crate::seq::{classify, downset, GenSequence, TightClass};

/// Evaluates the product formula without checking coverage or downset membership.
pub fn product_formula(r: &GenSequence, uses_inverse: bool, w: &Perm) -> QPoly {
    let v = if uses_inverse { w.inverse() } else { w.clone() };
    let inv = v.inv_sequence();
    (2..=w.degree()).fold(QPoly::one(), |acc, i| {
        let from_counts = r.count(i - 1) as i64 - 1;
        let exponent = from_counts.max(inv.get(i) as i64);
        if exponent == 0 {
            return acc;
        }
        let base = QPoly::q_int(i).expect("i >= 2");
        acc * base.pow(exponent as u32)
    })
}

fn covered_class(r: &GenSequence) -> Result<TightClass> {
    let class = classify(r);
    if !class.is_covered() {
        return Err(Error::NotCovered(r.letters().to_vec()));
    }
    Ok(class)
}

fn resolve_degree(r: &GenSequence, n: Option<usize>) -> Result<usize> {
    let min = r.natural_degree();
    let n = n.unwrap_or(min);
    if n < min {
        return Err(Error::DegreeTooSmall { min, got: n });
    }
    Ok(n)
}

/// `α_r(w)` from the closed formula; zero when `w ⋠ r`.
pub fn alpha(r: &GenSequence, w: &Perm) -> Result<QPoly> {
    let class = covered_class(r)?;
    let n = resolve_degree(r, Some(w.degree()))?;
    if !downset(r, n)?.contains(w) {
        return Ok(QPoly::zero());
    }
    Ok(product_formula(r, class.uses_inverse(), w))
}

/// The closed formula on every `w ⪯ r`; permutations outside the downset are omitted.
pub fn alpha_table(r: &GenSequence, n: Option<usize>) -> Result<BTreeMap<Perm, QPoly>> {
    let class = covered_class(r)?;
    let n = resolve_degree(r, n)?;
    Ok(table_for(r, &class, n))
}

fn table_for(r: &GenSequence, class: &TightClass, n: usize) -> BTreeMap<Perm, QPoly> {
    let perms: Vec<Perm> = crate::seq::downset_hashed(r.letters(), n)
        .into_iter()
        .collect();
    let inverse = class.uses_inverse();
    perms
        .into_par_iter()
        .map(|w| {
            let a = product_formula(r, inverse, &w);
            (w, a)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlphaEntry {
    pub closed: QPoly,
    pub oracle: QPoly,
    #[serde(rename = "match")]
    pub matches: bool,
}

/// Entrywise comparison of the closed formula against brute-force expansion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlphaReport {
    pub sequence: GenSequence,
    pub degree: usize,
    pub classification: TightClass,
    #[serde(serialize_with = "entries_as_list")]
    pub entries: BTreeMap<Perm, AlphaEntry>,
    pub all_match: bool,
}

impl AlphaReport {
    pub fn mismatches(&self) -> impl Iterator<Item = (&Perm, &AlphaEntry)> {
        self.entries.iter().filter(|(_, e)| !e.matches)
    }
}

fn entries_as_list<S: serde::Serializer>(
    entries: &BTreeMap<Perm, AlphaEntry>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Row<'a> {
        perm: &'a Perm,
        #[serde(flatten)]
        entry: &'a AlphaEntry,
    }
    s.collect_seq(entries.iter().map(|(perm, entry)| Row { perm, entry }))
}

/// Checks the closed formula against the expansion of `Q(r)` in degree `n`
/// (default `max(r) + 1`). Uncovered sequences yield a report with no entries.
pub fn verify(r: &GenSequence, n: Option<usize>) -> Result<AlphaReport> {
    let degree = resolve_degree(r, n)?;
    let classification = classify(r);
    if !classification.is_covered() {
        return Ok(AlphaReport {
            sequence: r.clone(),
            degree,
            classification,
            entries: BTreeMap::new(),
            all_match: true,
        });
    }
    let oracle = expand_with(
        r,
        ExpandOptions {
            degree: Some(degree),
            force: false,
        },
    )?;
    let closed = table_for(r, &classification, degree);

    let keys: BTreeSet<&Perm> = oracle.support().chain(closed.keys()).collect();
    let entries: BTreeMap<Perm, AlphaEntry> = keys
        .into_iter()
        .map(|w| {
            let c = closed.get(w).cloned().unwrap_or_default();
            let o = oracle.terms().get(w).cloned().unwrap_or_default();
            let matches = c == o;
            (
                w.clone(),
                AlphaEntry {
                    closed: c,
                    oracle: o,
                    matches,
                },
            )
        })
        .collect();
    let all_match = entries.values().all(|e| e.matches);
    Ok(AlphaReport {
        sequence: r.clone(),
        degree,
        classification,
        entries,
        all_match,
    })
}
