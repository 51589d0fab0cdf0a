//! Sparse elements of `H_n(q)` in the standard basis `{T_w}`.
//!
//! Right multiplication by a generator follows
//!
//! ```text
//! T_w T_k = T_{w s_k}                       if ℓ(w s_k) = ℓ(w) + 1
//! T_w T_k = q T_{w s_k} + (q - 1) T_w       if ℓ(w s_k) = ℓ(w) - 1
//! ```
//!
//! and everything else, including the expansion of `Q(r)`, is built by folding it.

use std::collections::BTreeMap;

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::perm::Perm;
use crate::qpoly::QPoly;
use crate::seq::GenSequence;

/// Largest degree `expand` accepts without `force`.
pub const DEFAULT_MAX_DEGREE: usize = 9;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeckeElt {
    degree: usize,
    terms: BTreeMap<Perm, QPoly>,
}

fn add_term(terms: &mut BTreeMap<Perm, QPoly>, w: Perm, c: QPoly) {
    if c.is_zero() {
        return;
    }
    match terms.entry(w) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += &c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

impl HeckeElt {
    pub fn zero(degree: usize) -> Self {
        HeckeElt {
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// The unit `T_e`.
    pub fn one(degree: usize) -> Self {
        Self::basis(Perm::identity(degree))
    }

    /// The basis element `T_w`.
    pub fn basis(w: Perm) -> Self {
        let degree = w.degree();
        HeckeElt {
            degree,
            terms: BTreeMap::from([(w, QPoly::one())]),
        }
    }

    /// The generator `T_k` of degree `n`.
    pub fn generator(degree: usize, k: usize) -> Result<Self> {
        Ok(Self::basis(Perm::identity(degree).apply_adjacent(k)?))
    }

    /// Builds an element from `(w, coefficient)` pairs, combining like terms.
    pub fn from_terms(
        degree: usize,
        terms: impl IntoIterator<Item = (Perm, QPoly)>,
    ) -> Result<Self> {
        let mut out = HeckeElt::zero(degree);
        for (w, c) in terms {
            if w.degree() != degree {
                return Err(Error::DegreeMismatch {
                    left: degree,
                    right: w.degree(),
                });
            }
            add_term(&mut out.terms, w, c);
        }
        Ok(out)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<Perm, QPoly> {
        &self.terms
    }

    /// Number of nonzero terms; emptiness is [`HeckeElt::is_zero`].
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = &Perm> {
        self.terms.keys()
    }

    /// The coefficient of `T_w`, zero when `w` is not in the support.
    pub fn coefficient(&self, w: &Perm) -> Result<QPoly> {
        self.check_degree(w.degree())?;
        Ok(self.terms.get(w).cloned().unwrap_or_default())
    }

    fn check_degree(&self, other: usize) -> Result<()> {
        if other != self.degree {
            return Err(Error::DegreeMismatch {
                left: self.degree,
                right: other,
            });
        }
        Ok(())
    }

    fn check_gen(&self, k: usize) -> Result<()> {
        if k == 0 || k >= self.degree {
            return Err(Error::GeneratorOutOfRange {
                k,
                degree: self.degree,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &HeckeElt) -> Result<Self> {
        self.check_degree(other.degree)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            add_term(&mut out.terms, w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &QPoly) -> Self {
        let mut out = HeckeElt::zero(self.degree);
        if c.is_zero() {
            return out;
        }
        out.terms = self.terms.iter().map(|(w, a)| (w.clone(), a * c)).collect();
        out
    }

    /// `self · T_k`.
    pub fn mul_gen(&self, k: usize) -> Result<Self> {
        self.check_gen(k)?;
        let q = QPoly::monomial(1);
        let q_minus_one = QPoly::from_i64s(&[-1, 1]);
        let mut out = HeckeElt::zero(self.degree);
        for (w, c) in &self.terms {
            let ws = w.swapped(k);
            if w.is_ascent(k) {
                add_term(&mut out.terms, ws, c.clone());
            } else {
                add_term(&mut out.terms, ws, &q * c);
                add_term(&mut out.terms, w.clone(), &q_minus_one * c);
            }
        }
        Ok(out)
    }

    /// `self · (1 + [k] T_k)`.
    ///
    /// Expanded termwise: an ascent `T_w` becomes `T_w + [k] T_{ws_k}`, a descent becomes
    /// `q^k T_w + q[k] T_{ws_k}`, since `1 + [k](q - 1) = q^k`.
    pub fn mul_affine_gen(&self, k: usize) -> Result<Self> {
        self.check_gen(k)?;
        let qk = QPoly::q_int(k)?;
        let q_qk = qk.shift(1);
        let mut out = HeckeElt::zero(self.degree);
        for (w, c) in &self.terms {
            let ws = w.swapped(k);
            if w.is_ascent(k) {
                add_term(&mut out.terms, w.clone(), c.clone());
                add_term(&mut out.terms, ws, c * &qk);
            } else {
                add_term(&mut out.terms, w.clone(), c.shift(k));
                add_term(&mut out.terms, ws, c * &q_qk);
            }
        }
        Ok(out)
    }

    /// General product, decomposing each `T_w` of `rhs` along a reduced word.
    pub fn mul(&self, rhs: &HeckeElt) -> Result<Self> {
        self.check_degree(rhs.degree)?;
        let mut out = HeckeElt::zero(self.degree);
        for (w, c) in &rhs.terms {
            let mut partial = self.clone();
            for k in w.reduced_word() {
                partial = partial.mul_gen(k)?;
            }
            out = out.add(&partial.scale(c))?;
        }
        Ok(out)
    }

    /// Image under the algebra map `T_i ↦ q`: `Σ_w c_w q^{ℓ(w)}`.
    pub fn index_specialization(&self) -> QPoly {
        self.terms
            .iter()
            .fold(QPoly::zero(), |acc, (w, c)| acc + c.shift(w.length()))
    }

    /// Image under the algebra map `T_i ↦ -1`: `Σ_w c_w (-1)^{ℓ(w)}`.
    pub fn sign_specialization(&self) -> QPoly {
        self.terms.iter().fold(QPoly::zero(), |acc, (w, c)| {
            if w.length() % 2 == 0 {
                acc + c.clone()
            } else {
                &acc - c
            }
        })
    }

    /// Re-embeds into degree `m` by padding every permutation with fixed points.
    pub fn pad(&self, m: usize) -> Result<Self> {
        let terms = self
            .terms
            .iter()
            .map(|(w, c)| Ok((w.pad(m)?, c.clone())))
            .collect::<Result<BTreeMap<_, _>>>()?;
        Ok(HeckeElt { degree: m, terms })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ExpandOptions {
    /// Degree of the ambient `S_n`; defaults to `max(r) + 1`.
    pub degree: Option<usize>,
    /// Lifts the [`DEFAULT_MAX_DEGREE`] guard.
    pub force: bool,
}

/// `Q(r) = (1 + [r_1] T_{r_1}) ⋯ (1 + [r_l] T_{r_l})` in degree `max(r) + 1`.
pub fn expand(r: &GenSequence) -> Result<HeckeElt> {
    expand_with(r, ExpandOptions::default())
}

pub fn expand_with(r: &GenSequence, opts: ExpandOptions) -> Result<HeckeElt> {
    let min = r.natural_degree();
    let n = opts.degree.unwrap_or(min);
    if n < min {
        return Err(Error::DegreeTooSmall { min, got: n });
    }
    if n > DEFAULT_MAX_DEGREE && !opts.force {
        return Err(Error::DegreeGuard {
            degree: n,
            limit: DEFAULT_MAX_DEGREE,
        });
    }
    r.letters()
        .iter()
        .try_fold(HeckeElt::one(n), |h, &k| h.mul_affine_gen(k))
}

/// `∏ (1 + q[r_i])`, the index specialization of `Q(r)`.
pub fn index_product(r: &GenSequence) -> QPoly {
    r.letters().iter().fold(QPoly::one(), |acc, &k| {
        let factor = QPoly::one() + QPoly::q_int(k).expect("letters are positive").shift(1);
        acc * factor
    })
}

/// `∏ (1 - [r_i])`, the sign specialization of `Q(r)`.
pub fn sign_product(r: &GenSequence) -> QPoly {
    r.letters().iter().fold(QPoly::one(), |acc, &k| {
        let factor = &QPoly::one() - &QPoly::q_int(k).expect("letters are positive");
        acc * factor
    })
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    perm: Perm,
    coeff: QPoly,
}

#[derive(Serialize, Deserialize)]
struct EltRepr {
    degree: usize,
    terms: Vec<TermRepr>,
}

impl Serialize for HeckeElt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        EltRepr {
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(perm, coeff)| TermRepr {
                    perm: perm.clone(),
                    coeff: coeff.clone(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for HeckeElt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = EltRepr::deserialize(d)?;
        HeckeElt::from_terms(
            repr.degree,
            repr.terms.into_iter().map(|t| (t.perm, t.coeff)),
        )
        .map_err(de::Error::custom)
    }
}
