//! Enumeration, construction and verification of `[t]`-trades and
//! `[t]`-unitrades on the Boolean cube `2^V`.
//!
//! A `[t]`-trade is an integer-valued function `T = Σ τ_X X` on subsets of
//! `V = {1, ..., v}` whose superset sums `Σ_{X ⊇ S} τ_X` vanish for every
//! `|S| <= t`. The crate provides the trade algebra ([`trade`]), GF(2) span
//! tools ([`gf2span`]), the Reed–Muller bridge ([`anf`]), canonical forms
//! under permutations, shifts and leg swap ([`canon`]), exhaustive
//! isomorph-free enumeration ([`enumerate`]) and explicit families
//! ([`construct`]).

pub mod anf;
pub mod block;
pub mod canon;
pub mod construct;
pub mod enumerate;
pub mod error;
pub mod gf2span;
pub mod trade;
pub mod unitrade;

pub use block::Block;
pub use canon::{canonical_form, canonical_key, CanonicalKey, Transform};
pub use error::{Result, TradeError};
pub use trade::{product_expand, SignedTrade};
pub use unitrade::Unitrade;
