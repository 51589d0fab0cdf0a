//! Random walks on `S_n` driven by a generator sequence.
//!
//! A `k`-step looks at positions `k, k+1` of the current permutation `w`:
//!
//! - ascent (`w_k < w_{k+1}`): swap with probability `[k]/(1+[k])`, otherwise stay;
//! - descent: swap with probability `q[k]/(1+[k])`, stay with `q^k/(1+[k])`, and with the
//!   leftover probability the attempt fails and the walk restarts from the identity at
//!   the first letter of the sequence.
//!
//! One attempt maps `T_e` to `Q(r)/∏(1+[r_i])` coefficientwise, so the sub-probability of
//! ending at `v` without failing is `α_r(v)/∏(1+[r_i])`. Restarts are independent and
//! identically distributed, so the law of the final permutation is that vector divided
//! by its total mass.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::perm::Perm;
use crate::qpoly::{rational_serde, QPoly, Rational};
use crate::seq::GenSequence;

/// Samples per independent RNG stream in [`simulate`].
pub const SAMPLES_PER_STREAM: u64 = 1 << 14;

pub const DEFAULT_MAX_RESTARTS: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StepProbs {
    #[serde(with = "rational_serde")]
    pub swap: Rational,
    #[serde(with = "rational_serde")]
    pub stay: Rational,
    #[serde(with = "rational_serde")]
    pub restart: Rational,
}

fn check_q(q: &Rational) -> Result<()> {
    if !q.is_positive() || q > &Rational::one() {
        return Err(Error::QOutOfRange(q.to_string()));
    }
    Ok(())
}

fn check_degree(r: &GenSequence, n: Option<usize>) -> Result<usize> {
    let min = r.natural_degree().max(1);
    let n = n.unwrap_or(min);
    if n < min {
        return Err(Error::DegreeTooSmall { min, got: n });
    }
    Ok(n)
}

fn ascent_probs(k: usize, q: &Rational) -> (Rational, Rational) {
    let qk = QPoly::q_int(k).expect("k >= 1").eval(q);
    let denom = Rational::one() + &qk;
    (&qk / &denom, Rational::one() / denom)
}

fn descent_probs(k: usize, q: &Rational) -> (Rational, Rational, Rational) {
    let qk = QPoly::q_int(k).expect("k >= 1").eval(q);
    let denom = Rational::one() + &qk;
    let swap = q * &qk / &denom;
    let stay = num_traits::pow(q.clone(), k) / &denom;
    let restart = Rational::one() - &swap - &stay;
    (swap, stay, restart)
}

/// Transition probabilities of a `k`-step at `w`.
pub fn step_probs(w: &Perm, k: usize, q: &Rational) -> Result<StepProbs> {
    check_q(q)?;
    if k == 0 || k >= w.degree() {
        return Err(Error::GeneratorOutOfRange {
            k,
            degree: w.degree(),
        });
    }
    Ok(if w.is_ascent(k) {
        let (swap, stay) = ascent_probs(k, q);
        StepProbs {
            swap,
            stay,
            restart: Rational::zero(),
        }
    } else {
        let (swap, stay, restart) = descent_probs(k, q);
        StepProbs {
            swap,
            stay,
            restart,
        }
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum Probs {
    Exact(BTreeMap<Perm, Rational>),
    Empirical(BTreeMap<Perm, f64>),
}

/// A probability law on `S_n`, exact or estimated from samples.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    degree: usize,
    probs: Probs,
}

impl Distribution {
    pub fn exact(degree: usize, probs: BTreeMap<Perm, Rational>) -> Self {
        let probs = probs.into_iter().filter(|(_, p)| !p.is_zero()).collect();
        Distribution {
            degree,
            probs: Probs::Exact(probs),
        }
    }

    pub fn empirical(degree: usize, probs: BTreeMap<Perm, f64>) -> Self {
        Distribution {
            degree,
            probs: Probs::Empirical(probs),
        }
    }

    pub fn point_mass(w: Perm) -> Self {
        Distribution::exact(w.degree(), BTreeMap::from([(w, Rational::one())]))
    }

    pub fn uniform(n: usize) -> Self {
        let all = Perm::all(n);
        let p = Rational::new(1.into(), all.len().into());
        Distribution::exact(n, all.into_iter().map(|w| (w, p.clone())).collect())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn probs(&self) -> &Probs {
        &self.probs
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.probs, Probs::Exact(_))
    }

    pub fn exact_probs(&self) -> Option<&BTreeMap<Perm, Rational>> {
        match &self.probs {
            Probs::Exact(m) => Some(m),
            Probs::Empirical(_) => None,
        }
    }

    pub fn exact_prob(&self, w: &Perm) -> Option<Rational> {
        self.exact_probs()
            .map(|m| m.get(w).cloned().unwrap_or_else(Rational::zero))
    }

    pub fn prob_f64(&self, w: &Perm) -> f64 {
        match &self.probs {
            Probs::Exact(m) => m.get(w).and_then(ToPrimitive::to_f64).unwrap_or(0.0),
            Probs::Empirical(m) => m.get(w).copied().unwrap_or(0.0),
        }
    }

    pub fn support(&self) -> Vec<&Perm> {
        match &self.probs {
            Probs::Exact(m) => m.keys().collect(),
            Probs::Empirical(m) => m.keys().collect(),
        }
    }

    /// Total mass; exactly one for exact laws.
    pub fn total_f64(&self) -> f64 {
        match &self.probs {
            Probs::Exact(m) => m
                .values()
                .fold(Rational::zero(), |a, p| a + p)
                .to_f64()
                .unwrap_or(f64::NAN),
            Probs::Empirical(m) => m.values().sum(),
        }
    }
}

/// Total variation distance, exact when both inputs are exact.
#[derive(Debug, Clone, PartialEq)]
pub enum TvDistance {
    Exact(Rational),
    Approx(f64),
}

impl TvDistance {
    pub fn to_f64(&self) -> f64 {
        match self {
            TvDistance::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            TvDistance::Approx(x) => *x,
        }
    }
}

impl std::fmt::Display for TvDistance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TvDistance::Exact(r) => write!(f, "{r}"),
            TvDistance::Approx(x) => write!(f, "{x:.6}"),
        }
    }
}

/// `(1/2) Σ_w |d1(w) - d2(w)|` over the union of supports.
pub fn total_variation(d1: &Distribution, d2: &Distribution) -> Result<TvDistance> {
    if d1.degree != d2.degree {
        return Err(Error::DegreeMismatch {
            left: d1.degree,
            right: d2.degree,
        });
    }
    if let (Probs::Exact(a), Probs::Exact(b)) = (&d1.probs, &d2.probs) {
        let zero = Rational::zero();
        let mut sum = Rational::zero();
        for w in a.keys().chain(b.keys().filter(|w| !a.contains_key(*w))) {
            let diff = a.get(w).unwrap_or(&zero) - b.get(w).unwrap_or(&zero);
            sum += diff.abs();
        }
        return Ok(TvDistance::Exact(sum / Rational::from_integer(2.into())));
    }
    let mut perms: Vec<&Perm> = d1.support();
    perms.extend(d2.support());
    perms.sort();
    perms.dedup();
    let sum: f64 = perms
        .into_iter()
        .map(|w| (d1.prob_f64(w) - d2.prob_f64(w)).abs())
        .sum();
    Ok(TvDistance::Approx(sum / 2.0))
}

/// The `q = 1` walk: convolution of the point mass at the identity with
/// `D_j = (1 + j s_j)/(1 + j)` for each letter `j`, in order.
pub fn exact_distribution_q1(r: &GenSequence, n: Option<usize>) -> Result<Distribution> {
    let n = check_degree(r, n)?;
    let mut probs: BTreeMap<Perm, Rational> =
        BTreeMap::from([(Perm::identity(n), Rational::one())]);
    for &j in r.letters() {
        let denom = Rational::from_integer((j + 1).into());
        let stay = Rational::one() / &denom;
        let swap = Rational::from_integer(j.into()) / &denom;
        let mut next: BTreeMap<Perm, Rational> = BTreeMap::new();
        for (w, p) in probs {
            *next.entry(w.swapped(j)).or_insert_with(Rational::zero) += &p * &swap;
            *next.entry(w).or_insert_with(Rational::zero) += p * &stay;
        }
        probs = next;
    }
    Ok(Distribution::exact(n, probs))
}

/// One attempt without restarting: the sub-probability of finishing at each permutation,
/// and the total mass lost to failed descents.
pub fn single_attempt(
    r: &GenSequence,
    q: &Rational,
    n: Option<usize>,
) -> Result<(BTreeMap<Perm, Rational>, Rational)> {
    check_q(q)?;
    let n = check_degree(r, n)?;
    let mut probs: BTreeMap<Perm, Rational> =
        BTreeMap::from([(Perm::identity(n), Rational::one())]);
    let mut failed = Rational::zero();
    for &k in r.letters() {
        let (a_swap, a_stay) = ascent_probs(k, q);
        let (d_swap, d_stay, d_fail) = descent_probs(k, q);
        let mut next: BTreeMap<Perm, Rational> = BTreeMap::new();
        for (w, p) in probs {
            let (swap, stay) = if w.is_ascent(k) {
                (&a_swap, &a_stay)
            } else {
                failed += &p * &d_fail;
                (&d_swap, &d_stay)
            };
            *next.entry(w.swapped(k)).or_insert_with(Rational::zero) += &p * swap;
            *next.entry(w).or_insert_with(Rational::zero) += p * stay;
        }
        probs = next;
    }
    probs.retain(|_, p| !p.is_zero());
    Ok((probs, failed))
}

/// The law of the final permutation of the walk with restarts, `p_v / (1 - f)`.
pub fn exact_distribution(r: &GenSequence, q: &Rational, n: Option<usize>) -> Result<Distribution> {
    let n = check_degree(r, n)?;
    let (probs, failed) = single_attempt(r, q, Some(n))?;
    let success = Rational::one() - failed;
    if success.is_zero() {
        return Err(Error::CertainFailure);
    }
    Ok(Distribution::exact(
        n,
        probs.into_iter().map(|(w, p)| (w, p / &success)).collect(),
    ))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkConfig {
    pub q: Rational,
    pub samples: u64,
    pub seed: u64,
    pub max_restarts_per_sample: u64,
}

impl WalkConfig {
    pub fn new(q: Rational, samples: u64, seed: u64) -> Result<Self> {
        check_q(&q)?;
        if samples == 0 {
            return Err(Error::NoSamples);
        }
        Ok(WalkConfig {
            q,
            samples,
            seed,
            max_restarts_per_sample: DEFAULT_MAX_RESTARTS,
        })
    }

    pub fn with_max_restarts(mut self, limit: u64) -> Self {
        self.max_restarts_per_sample = limit;
        self
    }
}

/// Cumulative thresholds for one letter, in double precision.
#[derive(Debug, Clone, Copy)]
struct StepThresholds {
    ascent_swap: f64,
    descent_swap: f64,
    descent_done: f64,
}

impl StepThresholds {
    fn new(k: usize, q: &Rational) -> Self {
        let (a_swap, _) = ascent_probs(k, q);
        let (d_swap, d_stay, _) = descent_probs(k, q);
        StepThresholds {
            ascent_swap: a_swap.to_f64().unwrap(),
            descent_swap: d_swap.to_f64().unwrap(),
            descent_done: (d_swap + d_stay).to_f64().unwrap(),
        }
    }
}

/// Monte Carlo estimate of the walk with restarts.
///
/// Samples are split into blocks of [`SAMPLES_PER_STREAM`]; block `b` draws from
/// `ChaCha8Rng::seed_from_u64(seed)` on stream `b`, so the result depends only on the
/// seed and sample count, never on thread scheduling. Each step consumes one uniform
/// variate.
pub fn simulate(r: &GenSequence, config: &WalkConfig, n: Option<usize>) -> Result<Distribution> {
    check_q(&config.q)?;
    if config.samples == 0 {
        return Err(Error::NoSamples);
    }
    let n = check_degree(r, n)?;
    let letters = r.letters();
    let thresholds: Vec<StepThresholds> = letters
        .iter()
        .map(|&k| StepThresholds::new(k, &config.q))
        .collect();

    let blocks = config.samples.div_ceil(SAMPLES_PER_STREAM);
    let partials: Vec<HashMap<Vec<u32>, u64>> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(b);
            let start = b * SAMPLES_PER_STREAM;
            let end = (start + SAMPLES_PER_STREAM).min(config.samples);
            let mut counts: HashMap<Vec<u32>, u64> = HashMap::new();
            let mut w: Vec<u32> = Vec::with_capacity(n);
            for sample in start..end {
                run_sample(
                    letters,
                    &thresholds,
                    n,
                    &mut rng,
                    &mut w,
                    config.max_restarts_per_sample,
                )
                .map_err(|_| Error::TooManyRestarts {
                    sample,
                    limit: config.max_restarts_per_sample,
                })?;
                *counts.entry(w.clone()).or_insert(0) += 1;
            }
            Ok(counts)
        })
        .collect::<Result<_>>()?;

    let mut merged: BTreeMap<Perm, u64> = BTreeMap::new();
    for part in partials {
        for (word, c) in part {
            *merged.entry(Perm::new(word)?).or_insert(0) += c;
        }
    }
    let total = config.samples as f64;
    Ok(Distribution::empirical(
        n,
        merged
            .into_iter()
            .map(|(w, c)| (w, c as f64 / total))
            .collect(),
    ))
}

/// Runs attempts until one completes, leaving the final word in `w`.
fn run_sample(
    letters: &[usize],
    thresholds: &[StepThresholds],
    n: usize,
    rng: &mut ChaCha8Rng,
    w: &mut Vec<u32>,
    max_restarts: u64,
) -> std::result::Result<(), ()> {
    let mut restarts = 0u64;
    'attempt: loop {
        w.clear();
        w.extend(1..=n as u32);
        for (&k, t) in letters.iter().zip(thresholds) {
            let u: f64 = rng.random();
            let (a, b) = (k - 1, k);
            if w[a] < w[b] {
                if u < t.ascent_swap {
                    w.swap(a, b);
                }
            } else if u < t.descent_swap {
                w.swap(a, b);
            } else if u >= t.descent_done {
                restarts += 1;
                if restarts > max_restarts {
                    return Err(());
                }
                continue 'attempt;
            }
        }
        return Ok(());
    }
}
