//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Run with `cargo test -p hecke-cli --test acceptance`.

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use hecke_core::closedform::{alpha, alpha_table, verify};
use hecke_core::hecke::{expand, expand_with, index_product, sign_product, ExpandOptions};
use hecke_core::qpoly::{QPoly, Rational};
use hecke_core::seq::{downset, enumerate_tight, foata_normal_form, rho, GenSequence};
use hecke_core::walk::{
    exact_distribution, simulate, single_attempt, total_variation, Distribution, WalkConfig,
};
use hecke_core::Perm;
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Check = Result<(), String>;

/// Name, check, and time budget in seconds.
type Criterion = (&'static str, fn() -> Check, u64);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !($cond) {
            return Err(format!($($msg)+));
        }
    };
}

fn seq(letters: &[usize]) -> GenSequence {
    GenSequence::new(letters.to_vec()).unwrap()
}

fn perm(digits: &str) -> Perm {
    Perm::new(digits.bytes().map(|b| u32::from(b - b'0')).collect()).unwrap()
}

fn qi(i: usize) -> QPoly {
    QPoly::q_int(i).unwrap()
}

fn rat(p: i64, q: i64) -> Rational {
    Rational::new(p.into(), q.into())
}

fn random_seq(rng: &mut StdRng, max_len: usize, max_letter: usize) -> GenSequence {
    let len = rng.random_range(1..=max_len);
    seq(&(0..len)
        .map(|_| rng.random_range(1..=max_letter))
        .collect::<Vec<_>>())
}

fn degree(n: usize) -> ExpandOptions {
    ExpandOptions {
        degree: Some(n),
        force: false,
    }
}

fn tight_enumeration() -> Check {
    let out = hecke_cli::run(["hecke", "tight", "enumerate", "4"]);
    ensure!(out.exit_code == 0, "exit code {}", out.exit_code);
    let got: BTreeSet<&str> = out.stdout.lines().collect();
    let want: BTreeSet<&str> = [
        "1,1,1,1", "1,2,1,1", "1,2,1,2", "1,2,1,3", "1,2,3,1", "1,2,3,4",
    ]
    .into_iter()
    .collect();
    ensure!(got == want, "got {got:?}");
    ensure!(out.stdout.lines().count() == 6, "duplicate lines");
    Ok(())
}

fn rho_uniformity() -> Check {
    for n in 2..=6 {
        let h = expand(&rho(n).unwrap()).unwrap();
        let want = (1..n).fold(QPoly::one(), |acc, i| acc * qi(i).pow((n - i) as u32));
        let perms = Perm::all(n);
        ensure!(h.len() == perms.len(), "n={n}: {} terms", h.len());
        for w in perms {
            ensure!(h.coefficient(&w).unwrap() == want, "n={n}, w={w}");
        }
    }
    Ok(())
}

fn worked_example() -> Check {
    let r = seq(&[1, 2, 1, 1, 3, 1]);
    let low = qi(2).pow(3);
    let high = qi(2).pow(3) * qi(3);
    let mut want = BTreeMap::new();
    for w in ["1234", "1324", "2134", "2314", "3124", "3214"] {
        want.insert(perm(w), low.clone());
    }
    for w in ["1243", "1342", "2143", "2341", "3142", "3241"] {
        want.insert(perm(w), high.clone());
    }
    let table = alpha_table(&r, None).unwrap();
    ensure!(table == want, "table {table:?}");
    let oracle = expand(&r).unwrap();
    ensure!(oracle.terms() == &want, "oracle disagrees");
    ensure!(
        verify(&r, None).unwrap().all_match,
        "verify reports a mismatch"
    );
    Ok(())
}

fn oracle_sweep() -> Check {
    let mut checked = 0;
    for l in 1..=8 {
        for r in enumerate_tight(l) {
            let report = verify(&r, None).map_err(|e| format!("{r}: {e}"))?;
            ensure!(report.classification.is_covered(), "{r} not covered");
            ensure!(report.all_match, "{r}: mismatch");
            checked += 1;
        }
    }
    ensure!(checked > 0, "nothing enumerated");
    Ok(())
}

fn product_range() -> Check {
    let r = seq(&[1, 2, 1, 2]);
    let h = expand(&r).unwrap();
    let want = qi(2) * qi(3);
    ensure!(h.len() == 6, "support size {}", h.len());
    for w in Perm::all(3) {
        ensure!(h.coefficient(&w).unwrap() == want, "expand at {w}");
        ensure!(alpha(&r, &w).unwrap() == want, "alpha at {w}");
    }
    ensure!(want != qi(2), "regression value collapsed");
    Ok(())
}

fn specializations() -> Check {
    let mut rng = StdRng::seed_from_u64(6);
    for _ in 0..200 {
        let r = random_seq(&mut rng, 10, 4);
        let h = expand_with(&r, degree(5)).unwrap();
        ensure!(
            h.index_specialization() == index_product(&r),
            "index identity for {r}"
        );
        ensure!(
            h.sign_specialization() == sign_product(&r),
            "sign identity for {r}"
        );
    }
    Ok(())
}

fn recurrence_and_bounds() -> Check {
    let mut rng = StdRng::seed_from_u64(7);
    let n = 5;
    let mut cases = [0usize; 4];
    for _ in 0..500 {
        let r = random_seq(&mut rng, 8, 4);
        let k = rng.random_range(1..=4);
        let r2 = r.pushed(k).unwrap();
        let h = expand_with(&r, degree(n)).unwrap();
        let h2 = expand_with(&r2, degree(n)).unwrap();
        let below = downset(&r, n).unwrap();
        let qk = qi(k);
        for w in downset(&r2, n).unwrap() {
            let ws = w.apply_adjacent(k).unwrap();
            let a = |u: &Perm| h.coefficient(u).unwrap();
            let got = h2.coefficient(&w).unwrap();
            let (case, want) = match (below.contains(&w), below.contains(&ws)) {
                (false, _) => (0, a(&ws) * qk.clone()),
                (true, false) => (1, a(&w)),
                (true, true) if w.is_ascent(k) => {
                    (2, a(&w) + a(&ws) * qk.clone() * QPoly::monomial(1))
                }
                (true, true) => (3, a(&w) * QPoly::monomial(k) + a(&ws) * qk.clone()),
            };
            ensure!(
                got == want,
                "case {} fails for r={r}, k={k}, w={w}",
                case + 1
            );
            cases[case] += 1;
        }
    }
    ensure!(
        cases.iter().all(|&c| c > 0),
        "some case never exercised: {cases:?}"
    );

    for _ in 0..10_000 {
        let n = rng.random_range(2..=8);
        let mut word: Vec<u32> = (1..=n as u32).collect();
        for i in (1..n).rev() {
            word.swap(i, rng.random_range(0..=i));
        }
        let w = Perm::new(word).unwrap();
        let k = rng.random_range(1..n);
        let ws = w.apply_adjacent(k).unwrap();
        let (iw, iws) = (w.inv_sequence(), ws.inv_sequence());
        if ws.length() + 1 == w.length() {
            ensure!(iw.get(k) > iw.get(k + 1), "descent order at {w}, {k}");
            ensure!(iws.get(k) == iw.get(k + 1), "descent swap at {w}, {k}");
            ensure!(iws.get(k + 1) + 1 == iw.get(k), "descent drop at {w}, {k}");
        } else {
            ensure!(ws.length() == w.length() + 1, "length change at {w}, {k}");
            ensure!(iw.get(k) <= iw.get(k + 1), "ascent order at {w}, {k}");
            ensure!(iws.get(k) == iw.get(k + 1) + 1, "ascent rise at {w}, {k}");
            ensure!(iws.get(k + 1) == iw.get(k), "ascent swap at {w}, {k}");
        }
    }

    for l in 1..=7 {
        for r in enumerate_tight(l) {
            let n = r.natural_degree();
            for w in downset(&r, n).unwrap() {
                let inv = w.inv_sequence();
                for i in 1..=n {
                    ensure!(inv.get(i) <= r.count(i), "r={r}, w={w}, i={i}");
                }
            }
        }
    }
    Ok(())
}

fn walk_bridge() -> Check {
    for q in [rat(1, 1), rat(1, 2), rat(1, 3)] {
        for l in 1..=6 {
            for r in enumerate_tight(l) {
                let table: BTreeMap<Perm, Rational> = alpha_table(&r, None)
                    .unwrap()
                    .into_iter()
                    .map(|(w, a)| (w, a.eval(&q)))
                    .collect();
                let total = table.values().fold(Rational::zero(), |s, a| s + a);
                let dist = exact_distribution(&r, &q, None).unwrap();
                let probs = dist.exact_probs().unwrap();
                let want: BTreeMap<Perm, Rational> =
                    table.iter().map(|(w, a)| (w.clone(), a / &total)).collect();
                ensure!(probs == &want, "r={r}, q={q}");

                let mass = r.letters().iter().fold(Rational::one(), |m, &k| {
                    m * (Rational::one() + qi(k).eval(&q))
                });
                let (sub, _) = single_attempt(&r, &q, None).unwrap();
                let want: BTreeMap<Perm, Rational> =
                    table.iter().map(|(w, a)| (w.clone(), a / &mass)).collect();
                ensure!(sub == want, "single attempt r={r}, q={q}");
            }
        }
    }
    let dist = exact_distribution(&rho(3).unwrap(), &rat(1, 2), None).unwrap();
    let probs = dist.exact_probs().unwrap();
    ensure!(probs.len() == 6, "support {}", probs.len());
    ensure!(
        probs.values().all(|p| *p == rat(1, 6)),
        "rho_3 at 1/2 is not uniform"
    );
    Ok(())
}

fn monte_carlo() -> Check {
    let config = WalkConfig::new(rat(1, 2), 1_000_000, 20_240_611).unwrap();
    let sim = simulate(&rho(4).unwrap(), &config, None).unwrap();
    let tv = total_variation(&sim, &Distribution::uniform(4))
        .unwrap()
        .to_f64();
    ensure!(tv.is_finite() && tv <= 0.005, "tv = {tv}");
    Ok(())
}

fn commutation_invariance() -> Check {
    let mut rng = StdRng::seed_from_u64(10);
    for _ in 0..100 {
        let r = random_seq(&mut rng, 10, 5);
        let f = foata_normal_form(&r);
        let n = r.natural_degree();
        let a = expand_with(&r, degree(n)).unwrap();
        let b = expand_with(&f, degree(n)).unwrap();
        ensure!(a == b, "r={r}, foata={f}");
    }
    Ok(())
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("tight enumeration, length 4", tight_enumeration, 1),
        ("uniform coefficients of rho_n, n <= 6", rho_uniformity, 10),
        ("worked example (1,2,1,1,3,1)", worked_example, 1),
        (
            "oracle sweep over tight sequences of length <= 8",
            oracle_sweep,
            60,
        ),
        ("product range regression (1,2,1,2)", product_range, 1),
        ("index and sign specializations", specializations, 30),
        ("recurrence, inversion and bound suites", recurrence_and_bounds, 60),
        ("walk law equals normalized coefficients", walk_bridge, 10),
        ("Monte Carlo total variation on rho_4", monte_carlo, 30),
        (
            "commutation invariance under Foata form",
            commutation_invariance,
            10,
        ),
    ];
    let mut failed = Vec::new();
    for (i, (name, check, limit)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome =
            catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".to_string()));
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|()| {
            if elapsed > Duration::from_secs(limit) {
                Err(format!("over the {limit}s budget"))
            } else {
                Ok(())
            }
        });
        let secs = elapsed.as_secs_f64();
        match outcome {
            Ok(()) => println!("PASS {:>2} {name} ({secs:.2}s)", i + 1),
            Err(why) => {
                println!("FAIL {:>2} {name} ({secs:.2}s): {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
