//! Generator sequences `r = (r_1, …, r_l)` and their combinatorics.
//!
//! A sequence names the product `s_{r_1} ⋯ s_{r_l}`; its Bruhat downset is the set of
//! permutations obtainable as products of subsequences. Tight sequences are built letter
//! by letter: they start with 1, and appending `k ≥ 2` requires `a(k) ≤ a(k-1) - 1`
//! on the current prefix, with equality forced whenever the append enlarges the downset.
//! Appending 1 is always allowed.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::fmt;

use rayon::prelude::*;
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::perm::Perm;

/// Upper bound on the number of commutation-class members `classify` will visit.
pub const COMMUTATION_SEARCH_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GenSequence {
    letters: Vec<usize>,
}

impl GenSequence {
    pub fn new(letters: Vec<usize>) -> Result<Self> {
        if letters.contains(&0) {
            return Err(Error::ZeroLetter);
        }
        Ok(GenSequence { letters })
    }

    pub fn empty() -> Self {
        GenSequence::default()
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Largest letter, or 0 for the empty sequence.
    pub fn max_letter(&self) -> usize {
        self.letters.iter().copied().max().unwrap_or(0)
    }

    /// Smallest symmetric group containing every generator: `max(r) + 1`.
    pub fn natural_degree(&self) -> usize {
        self.max_letter() + 1
    }

    /// Multiplicity `a_r(i)` of the letter `i`.
    pub fn count(&self, i: usize) -> usize {
        self.letters.iter().filter(|&&x| x == i).count()
    }

    pub fn counts(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for &x in &self.letters {
            *out.entry(x).or_insert(0) += 1;
        }
        out
    }

    pub fn reversed(&self) -> Self {
        GenSequence {
            letters: self.letters.iter().rev().copied().collect(),
        }
    }

    pub fn pushed(&self, k: usize) -> Result<Self> {
        let mut letters = self.letters.clone();
        letters.push(k);
        GenSequence::new(letters)
    }

    pub fn starts_with(&self, prefix: &GenSequence) -> bool {
        self.letters.starts_with(&prefix.letters)
    }

    pub fn ends_with(&self, suffix: &GenSequence) -> bool {
        self.letters.ends_with(&suffix.letters)
    }
}

impl fmt::Display for GenSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.letters.iter().map(usize::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

impl std::str::FromStr for GenSequence {
    type Err = Error;

    /// Comma-separated positive integers; the empty string is the empty sequence.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(GenSequence::empty());
        }
        let letters = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("invalid sequence letter `{}`", t.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        GenSequence::new(letters)
    }
}

impl Serialize for GenSequence {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.letters.serialize(s)
    }
}

impl<'de> Deserialize<'de> for GenSequence {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        GenSequence::new(Vec::<usize>::deserialize(d)?).map_err(de::Error::custom)
    }
}

/// The standard tight sequence `(1, 2,1, 3,2,1, …, n-1,…,1)`, a reduced word for the
/// longest element of `S_n`.
pub fn rho(n: usize) -> Result<GenSequence> {
    if n < 2 {
        return Err(Error::DegreeTooSmall { min: 2, got: n });
    }
    let letters = (1..n).flat_map(|top| (1..=top).rev()).collect();
    GenSequence::new(letters)
}

/// `{w : w ⪯ r}` in `S_n`, built as `S_j = S_{j-1} ∪ S_{j-1}·s_{r_j}`.
pub fn downset(r: &GenSequence, n: usize) -> Result<BTreeSet<Perm>> {
    let min = r.natural_degree();
    if n < min {
        return Err(Error::DegreeTooSmall { min, got: n });
    }
    Ok(downset_hashed(r.letters(), n).into_iter().collect())
}

pub(crate) fn downset_hashed(letters: &[usize], n: usize) -> HashSet<Perm> {
    let mut set = HashSet::from([Perm::identity(n)]);
    for &k in letters {
        extend_downset(&mut set, k);
    }
    set
}

/// Applies one letter to a downset in place; returns whether it grew.
fn extend_downset(set: &mut HashSet<Perm>, k: usize) -> bool {
    let fresh: Vec<Perm> = set
        .iter()
        .map(|w| w.swapped(k))
        .filter(|ws| !set.contains(ws))
        .collect();
    let grew = !fresh.is_empty();
    set.extend(fresh);
    grew
}

/// A tight sequence together with the data needed to test its extensions.
#[derive(Debug, Clone)]
struct TightState {
    letters: Vec<usize>,
    counts: Vec<usize>,
    downset: HashSet<Perm>,
}

impl TightState {
    fn start(degree: usize) -> Self {
        let mut downset = HashSet::from([Perm::identity(degree)]);
        extend_downset(&mut downset, 1);
        let mut counts = vec![0; degree + 1];
        counts[1] = 1;
        TightState {
            letters: vec![1],
            counts,
            downset,
        }
    }

    fn count(&self, i: usize) -> usize {
        self.counts.get(i).copied().unwrap_or(0)
    }

    /// The tight extension `(self, k)`, if the tightness rule admits it.
    fn extend(&self, k: usize) -> Option<TightState> {
        let mut downset = self.downset.clone();
        let grew = extend_downset(&mut downset, k);
        if k >= 2 {
            let have = self.count(k) as i64;
            let bound = self.count(k - 1) as i64 - 1;
            if have > bound || (grew && have != bound) {
                return None;
            }
        }
        let mut next = TightState {
            letters: self.letters.clone(),
            counts: self.counts.clone(),
            downset,
        };
        next.letters.push(k);
        next.counts[k] += 1;
        Some(next)
    }
}

pub fn is_tight(r: &GenSequence) -> bool {
    let letters = r.letters();
    if letters.first() != Some(&1) {
        return false;
    }
    let degree = r.natural_degree();
    let mut state = TightState::start(degree);
    for &k in &letters[1..] {
        match state.extend(k) {
            Some(next) => state = next,
            None => return false,
        }
    }
    true
}

/// Every tight sequence of length `l`, in lexicographic order.
pub fn enumerate_tight(l: usize) -> Vec<GenSequence> {
    if l == 0 {
        return Vec::new();
    }
    // letters never exceed the length, so S_{l+1} hosts every downset
    let degree = l + 1;
    let mut frontier = vec![TightState::start(degree)];
    for _ in 1..l {
        frontier = frontier
            .par_iter()
            .flat_map_iter(|state| {
                let top = state.letters.iter().copied().max().unwrap_or(0);
                (1..=top + 1).filter_map(|k| state.extend(k))
            })
            .collect();
    }
    let mut out: Vec<GenSequence> = frontier
        .into_iter()
        .map(|s| GenSequence { letters: s.letters })
        .collect();
    out.sort();
    out
}

fn commute(a: usize, b: usize) -> bool {
    a.abs_diff(b) >= 2
}

/// Lexicographically least member of the commutation class of `r`, where adjacent
/// letters differing by at least 2 may be swapped.
pub fn foata_normal_form(r: &GenSequence) -> GenSequence {
    let letters = r.letters();
    let mut used = vec![false; letters.len()];
    let mut out = Vec::with_capacity(letters.len());
    for _ in 0..letters.len() {
        // a letter is available when nothing earlier and unused blocks it
        let mut best: Option<usize> = None;
        let mut blockers: Vec<usize> = Vec::new();
        for (i, &x) in letters.iter().enumerate() {
            if used[i] {
                continue;
            }
            if blockers.iter().all(|&b| commute(b, x)) && best.is_none_or(|j| x < letters[j]) {
                best = Some(i);
            }
            blockers.push(x);
        }
        let i = best.expect("some unused letter is always available");
        used[i] = true;
        out.push(letters[i]);
    }
    GenSequence { letters: out }
}

/// Which closed-form result covers a sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "tag")]
pub enum TightClass {
    Tight,
    PrefixRho,
    ReverseTight,
    SuffixRho,
    /// A commutation-equivalent sequence is covered directly.
    CommEquiv {
        witness: GenSequence,
        inner: Box<TightClass>,
    },
    /// Not covered; `truncated` is set when the commutation search hit its cap.
    NotCovered {
        truncated: bool,
    },
}

impl TightClass {
    /// True when the formula must be read off `w^{-1}` rather than `w`.
    pub fn uses_inverse(&self) -> bool {
        match self {
            TightClass::ReverseTight | TightClass::SuffixRho => true,
            TightClass::CommEquiv { inner, .. } => inner.uses_inverse(),
            _ => false,
        }
    }

    pub fn is_covered(&self) -> bool {
        !matches!(self, TightClass::NotCovered { .. })
    }

    pub fn name(&self) -> &'static str {
        match self {
            TightClass::Tight => "Tight",
            TightClass::PrefixRho => "PrefixRho",
            TightClass::ReverseTight => "ReverseTight",
            TightClass::SuffixRho => "SuffixRho",
            TightClass::CommEquiv { .. } => "CommEquiv",
            TightClass::NotCovered { .. } => "NotCovered",
        }
    }
}

impl fmt::Display for TightClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TightClass::CommEquiv { witness, inner } => {
                write!(f, "CommEquiv(witness {witness}, {inner})")
            }
            TightClass::NotCovered { truncated: true } => {
                write!(f, "NotCovered (commutation search truncated)")
            }
            other => f.write_str(other.name()),
        }
    }
}

fn direct_class(r: &GenSequence) -> Option<TightClass> {
    if r.is_empty() {
        return None;
    }
    if is_tight(r) {
        return Some(TightClass::Tight);
    }
    let rho_n = rho(r.natural_degree()).ok()?;
    if r.starts_with(&rho_n) {
        return Some(TightClass::PrefixRho);
    }
    if is_tight(&r.reversed()) {
        return Some(TightClass::ReverseTight);
    }
    if r.ends_with(&rho_n) {
        return Some(TightClass::SuffixRho);
    }
    None
}

/// Classifies `r` by the first applicable rule: tight, prefix `ρ_n`, reverse of tight,
/// suffix `ρ_n`, then a breadth-first search of its commutation class for a member that
/// passes one of those four.
pub fn classify(r: &GenSequence) -> TightClass {
    classify_with_cap(r, COMMUTATION_SEARCH_CAP)
}

pub fn classify_with_cap(r: &GenSequence, cap: usize) -> TightClass {
    if let Some(class) = direct_class(r) {
        return class;
    }
    let mut seen: HashSet<Vec<usize>> = HashSet::from([r.letters.clone()]);
    let mut queue = VecDeque::from([r.letters.clone()]);
    while let Some(cur) = queue.pop_front() {
        for i in 0..cur.len().saturating_sub(1) {
            if !commute(cur[i], cur[i + 1]) {
                continue;
            }
            let mut next = cur.clone();
            next.swap(i, i + 1);
            if seen.contains(&next) {
                continue;
            }
            let candidate = GenSequence {
                letters: next.clone(),
            };
            if let Some(inner) = direct_class(&candidate) {
                return TightClass::CommEquiv {
                    witness: candidate,
                    inner: Box::new(inner),
                };
            }
            if seen.len() >= cap {
                return TightClass::NotCovered { truncated: true };
            }
            seen.insert(next.clone());
            queue.push_back(next);
        }
    }
    TightClass::NotCovered { truncated: false }
}
