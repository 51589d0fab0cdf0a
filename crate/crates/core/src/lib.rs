//! Exact computations in the Iwahori–Hecke algebra `H_n(q)` of the symmetric group.
//!
//! The crate expands products `Q(r) = (1 + [r_1] T_{r_1}) ⋯ (1 + [r_l] T_{r_l})` in the
//! standard basis `{T_w}`, recognises the sequences `r` for which the coefficients have a
//! closed product form, checks that form against brute-force expansion, and computes the
//! probability distributions of the random walks on `S_n` these products describe.
//!
//! Module map:
//!
//! - [`qpoly`]: integer polynomials in `q`, q-integers `[i] = 1 + q + ⋯ + q^{i-1}`, rationals.
//! - [`perm`]: permutations in one-line notation, lengths, inversion sequences.
//! - [`seq`]: generator sequences, Bruhat downsets, tight sequences, commutation classes.
//! - [`hecke`]: sparse Hecke algebra elements and the expansion of `Q(r)`.
//! - [`closedform`]: the product formula for the coefficients and its verifier.
//! - [`walk`]: exact and simulated random walks driven by a generator sequence.

pub mod closedform;
pub mod error;
pub mod hecke;
pub mod perm;
pub mod qpoly;
pub mod seq;
pub mod walk;

pub use closedform::{alpha, alpha_table, verify, AlphaEntry, AlphaReport};
pub use error::{Error, Result};
pub use hecke::{expand, expand_with, ExpandOptions, HeckeElt};
pub use perm::{InvSequence, Perm};
pub use qpoly::{QPoly, Rational};
pub use seq::{classify, enumerate_tight, foata_normal_form, is_tight, GenSequence, TightClass};
pub use walk::{Distribution, Probs, TvDistance, WalkConfig};
