//! Permutations of `{1, …, n}` in one-line notation.
//!
//! Generators act on the right: `w · s_k` swaps the entries in POSITIONS `k` and `k+1`
//! of the one-line word, because `(w s_k)(i) = w(s_k(i))`. Swapping the VALUES `k` and
//! `k+1` would be the left action `s_k · w`. All indices in the public API are 1-based.

use std::fmt;

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    word: Vec<u32>,
}

/// `(inv_w(1), …, inv_w(n-1))`, where `inv_w(i)` counts `j > i` with `w_j < w_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct InvSequence(pub Vec<usize>);

impl InvSequence {
    /// `inv_w(i)` for 1-based `i`; positions at or beyond `n` read as 0.
    pub fn get(&self, i: usize) -> usize {
        i.checked_sub(1)
            .and_then(|idx| self.0.get(idx))
            .copied()
            .unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }
}

impl Perm {
    /// Validates one-line notation: entries must be exactly `1..=n`.
    pub fn new(word: Vec<u32>) -> Result<Self> {
        let n = word.len();
        if n == 0 {
            return Err(Error::InvalidPerm(word));
        }
        let mut seen = vec![false; n];
        for &v in &word {
            let idx = (v as usize).wrapping_sub(1);
            if idx >= n || seen[idx] {
                return Err(Error::InvalidPerm(word));
            }
            seen[idx] = true;
        }
        Ok(Perm { word })
    }

    pub fn identity(n: usize) -> Self {
        assert!(n >= 1, "permutation degree must be positive");
        Perm {
            word: (1..=n as u32).collect(),
        }
    }

    /// The reversal `n, n-1, …, 1`.
    pub fn longest_element(n: usize) -> Self {
        assert!(n >= 1, "permutation degree must be positive");
        Perm {
            word: (1..=n as u32).rev().collect(),
        }
    }

    pub fn degree(&self) -> usize {
        self.word.len()
    }

    pub fn word(&self) -> &[u32] {
        &self.word
    }

    /// `w(i)` for 1-based `i`.
    pub fn at(&self, i: usize) -> u32 {
        self.word[i - 1]
    }

    pub fn is_identity(&self) -> bool {
        self.word
            .iter()
            .enumerate()
            .all(|(i, &v)| v as usize == i + 1)
    }

    fn check_gen(&self, k: usize) -> Result<()> {
        if k == 0 || k >= self.degree() {
            return Err(Error::GeneratorOutOfRange {
                k,
                degree: self.degree(),
            });
        }
        Ok(())
    }

    /// `w · s_k`: swaps positions `k` and `k+1`.
    pub fn apply_adjacent(&self, k: usize) -> Result<Self> {
        self.check_gen(k)?;
        Ok(self.swapped(k))
    }

    /// Unchecked `w · s_k`; callers guarantee `1 <= k < degree`.
    pub(crate) fn swapped(&self, k: usize) -> Self {
        let mut word = self.word.clone();
        word.swap(k - 1, k);
        Perm { word }
    }

    /// True when `ℓ(w s_k) = ℓ(w) + 1`, i.e. `w_k < w_{k+1}`.
    pub fn is_ascent(&self, k: usize) -> bool {
        self.word[k - 1] < self.word[k]
    }

    /// Number of inversion pairs, which is the Coxeter length.
    pub fn length(&self) -> usize {
        let w = &self.word;
        (0..w.len())
            .map(|i| w[i + 1..].iter().filter(|&&x| x < w[i]).count())
            .sum()
    }

    pub fn inv_sequence(&self) -> InvSequence {
        let w = &self.word;
        let n = w.len();
        InvSequence(
            (0..n.saturating_sub(1))
                .map(|i| w[i + 1..].iter().filter(|&&x| x < w[i]).count())
                .collect(),
        )
    }

    pub fn inverse(&self) -> Self {
        let mut word = vec![0u32; self.degree()];
        for (pos, &v) in self.word.iter().enumerate() {
            word[v as usize - 1] = pos as u32 + 1;
        }
        Perm { word }
    }

    /// Group product `self · other`, i.e. `(self · other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Perm) -> Result<Self> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        Ok(Perm {
            word: other
                .word
                .iter()
                .map(|&i| self.word[i as usize - 1])
                .collect(),
        })
    }

    /// A reduced word `(r_1, …, r_p)` with `s_{r_1} ⋯ s_{r_p} = w` and `p = ℓ(w)`.
    ///
    /// Bubble-sorts `w` by carrying the largest misplaced value rightwards, then reverses
    /// the recorded swaps.
    pub fn reduced_word(&self) -> Vec<usize> {
        let mut w = self.word.clone();
        let mut swaps = Vec::new();
        for target in (1..=w.len()).rev() {
            let mut pos = w.iter().position(|&v| v as usize == target).unwrap();
            while pos + 1 < target {
                w.swap(pos, pos + 1);
                swaps.push(pos + 1);
                pos += 1;
            }
        }
        swaps.reverse();
        swaps
    }

    /// Replays a word from the identity: `s_{r_1} ⋯ s_{r_p}` in degree `n`.
    pub fn from_word(n: usize, word: &[usize]) -> Result<Self> {
        word.iter()
            .try_fold(Perm::identity(n), |w, &k| w.apply_adjacent(k))
    }

    /// Embeds into `S_m` by appending fixed points.
    pub fn pad(&self, m: usize) -> Result<Self> {
        if m < self.degree() {
            return Err(Error::DegreeTooSmall {
                min: self.degree(),
                got: m,
            });
        }
        let mut word = self.word.clone();
        word.extend(self.degree() as u32 + 1..=m as u32);
        Ok(Perm { word })
    }

    /// Every permutation of degree `n`, in lexicographic order.
    pub fn all(n: usize) -> Vec<Perm> {
        let mut out = Vec::new();
        let mut word: Vec<u32> = (1..=n as u32).collect();
        loop {
            out.push(Perm { word: word.clone() });
            // next lexicographic permutation
            let Some(i) = (0..n.saturating_sub(1))
                .rev()
                .find(|&i| word[i] < word[i + 1])
            else {
                break;
            };
            let j = (i + 1..n).rev().find(|&j| word[j] > word[i]).unwrap();
            word.swap(i, j);
            word[i + 1..].reverse();
        }
        out
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.word.iter().map(u32::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

impl std::str::FromStr for Perm {
    type Err = Error;

    /// Comma-separated one-line notation, e.g. `3,1,4,2`.
    fn from_str(s: &str) -> Result<Self> {
        let word = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("invalid permutation entry `{}`", t.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        Perm::new(word)
    }
}

impl Serialize for Perm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.word.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Perm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Perm::new(Vec::<u32>::deserialize(d)?).map_err(de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(w: &[u32]) -> Perm {
        Perm::new(w.to_vec()).unwrap()
    }

    /// Independent inversion count: checks every pair.
    fn brute_length(w: &Perm) -> usize {
        let v = w.word();
        let mut count = 0;
        for i in 0..v.len() {
            for j in 0..v.len() {
                if i < j && v[i] > v[j] {
                    count += 1;
                }
            }
        }
        count
    }

    #[test]
    fn constructors() {
        assert_eq!(Perm::identity(3), p(&[1, 2, 3]));
        assert_eq!(Perm::identity(1), p(&[1]));
        assert_eq!(Perm::identity(4), p(&[1, 2, 3, 4]));
        assert_eq!(Perm::longest_element(3), p(&[3, 2, 1]));
        assert_eq!(Perm::longest_element(1), p(&[1]));
        assert_eq!(Perm::longest_element(4), p(&[4, 3, 2, 1]));
    }

    #[test]
    fn rejects_malformed_words() {
        assert!(Perm::new(vec![]).is_err());
        assert!(Perm::new(vec![1, 1]).is_err());
        assert!(Perm::new(vec![0, 1]).is_err());
        assert!(Perm::new(vec![1, 3]).is_err());
        assert!("1,x".parse::<Perm>().is_err());
        assert_eq!("3,1,4,2".parse::<Perm>().unwrap(), p(&[3, 1, 4, 2]));
    }

    #[test]
    fn right_action_swaps_positions() {
        assert_eq!(p(&[1, 2, 3]).apply_adjacent(1).unwrap(), p(&[2, 1, 3]));
        assert_eq!(p(&[2, 1, 3]).apply_adjacent(2).unwrap(), p(&[2, 3, 1]));
        assert_eq!(p(&[3, 2, 1]).apply_adjacent(1).unwrap(), p(&[2, 3, 1]));
        assert!(p(&[1, 2, 3]).apply_adjacent(0).is_err());
        assert!(p(&[1, 2, 3]).apply_adjacent(3).is_err());
        // s_1 s_2 as a group product is the right action applied twice
        let s1 = Perm::from_word(3, &[1]).unwrap();
        let s2 = Perm::from_word(3, &[2]).unwrap();
        assert_eq!(s1.compose(&s2).unwrap(), p(&[2, 3, 1]));
    }

    #[test]
    fn lengths() {
        assert_eq!(p(&[1, 2, 3]).length(), 0);
        assert_eq!(p(&[3, 2, 1]).length(), 3);
        assert_eq!(p(&[2, 1, 3, 4]).length(), 1);
    }

    #[test]
    fn inversion_sequences() {
        assert_eq!(p(&[1, 2, 3]).inv_sequence().0, vec![0, 0]);
        assert_eq!(p(&[3, 1, 4, 2]).inv_sequence().0, vec![2, 0, 1]);
        assert_eq!(p(&[3, 2, 1]).inv_sequence().0, vec![2, 1]);
        assert_eq!(p(&[1]).inv_sequence().0, Vec::<usize>::new());
        assert_eq!(p(&[3, 2, 1]).inv_sequence().get(3), 0);
    }

    #[test]
    fn inverses() {
        assert_eq!(p(&[1, 2, 3]).inverse(), p(&[1, 2, 3]));
        assert_eq!(p(&[2, 3, 1]).inverse(), p(&[3, 1, 2]));
        assert_eq!(p(&[2, 1]).inverse(), p(&[2, 1]));
    }

    #[test]
    fn reduced_words() {
        assert_eq!(p(&[1, 2, 3]).reduced_word(), Vec::<usize>::new());
        assert_eq!(p(&[2, 1, 3]).reduced_word(), vec![1]);
        let w0 = p(&[3, 2, 1]);
        let word = w0.reduced_word();
        assert_eq!(word.len(), 3);
        assert_eq!(Perm::from_word(3, &word).unwrap(), w0);
    }

    #[test]
    fn padding() {
        assert_eq!(p(&[2, 1]).pad(4).unwrap(), p(&[2, 1, 3, 4]));
        assert_eq!(p(&[1]).pad(1).unwrap(), p(&[1]));
        assert_eq!(p(&[3, 1, 2]).pad(4).unwrap(), p(&[3, 1, 2, 4]));
        assert!(p(&[3, 1, 2]).pad(2).is_err());
    }

    #[test]
    fn enumerates_symmetric_group() {
        let all = Perm::all(4);
        assert_eq!(all.len(), 24);
        let mut sorted = all.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted, all);
    }

    #[test]
    fn json_is_one_line_array() {
        let w = p(&[3, 1, 4, 2]);
        assert_eq!(serde_json::to_string(&w).unwrap(), "[3,1,4,2]");
        assert!(serde_json::from_str::<Perm>("[1,1]").is_err());
    }

    pub(crate) fn arb_perm(max_n: usize) -> impl Strategy<Value = Perm> {
        (1..=max_n)
            .prop_flat_map(|n| Just((1..=n as u32).collect::<Vec<_>>()).prop_shuffle())
            .prop_map(|w| Perm::new(w).unwrap())
    }

    fn arb_perm_with_gen(max_n: usize) -> impl Strategy<Value = (Perm, usize)> {
        arb_perm(max_n)
            .prop_filter("needs a generator", |w| w.degree() >= 2)
            .prop_flat_map(|w| {
                let n = w.degree();
                (Just(w), 1..n)
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]

        #[test]
        fn descent_swap_identities((w, k) in arb_perm_with_gen(8)) {
            let ws = w.apply_adjacent(k).unwrap();
            let inv = w.inv_sequence();
            let inv_s = ws.inv_sequence();
            if ws.length() + 1 == w.length() {
                prop_assert!(inv.get(k) > inv.get(k + 1));
                prop_assert_eq!(inv_s.get(k), inv.get(k + 1));
                prop_assert_eq!(inv_s.get(k + 1), inv.get(k) - 1);
            } else {
                prop_assert_eq!(ws.length(), w.length() + 1);
                prop_assert!(inv.get(k) <= inv.get(k + 1));
                prop_assert_eq!(inv_s.get(k), inv.get(k + 1) + 1);
                prop_assert_eq!(inv_s.get(k + 1), inv.get(k));
            }
        }
    }

    proptest! {
        #[test]
        fn length_and_inversions_agree((w, k) in arb_perm_with_gen(9)) {
            prop_assert_eq!(w.length(), brute_length(&w));
            prop_assert_eq!(w.inv_sequence().total(), w.length());
            let ws = w.apply_adjacent(k).unwrap();
            let expected = if w.at(k) < w.at(k + 1) { w.length() + 1 } else { w.length() - 1 };
            prop_assert_eq!(ws.length(), expected);
            prop_assert_eq!(ws.apply_adjacent(k).unwrap(), w);
        }

        #[test]
        fn reduced_word_replays(w in arb_perm(9)) {
            let word = w.reduced_word();
            prop_assert_eq!(word.len(), w.length());
            prop_assert_eq!(Perm::from_word(w.degree(), &word).unwrap(), w);
        }

        #[test]
        fn inverse_is_involutive(w in arb_perm(9)) {
            prop_assert_eq!(w.inverse().inverse(), w.clone());
            prop_assert!(w.compose(&w.inverse()).unwrap().is_identity());
            prop_assert_eq!(w.inverse().length(), w.length());
        }

        #[test]
        fn padding_extends_inversions_by_zeros(w in arb_perm(7), extra in 0usize..4) {
            let m = w.degree() + extra;
            let padded = w.pad(m).unwrap();
            let mut expected = w.inv_sequence().0;
            expected.resize(m - 1, 0);
            prop_assert_eq!(padded.inv_sequence().0, expected);
            prop_assert_eq!(padded.length(), w.length());
        }
    }
}
