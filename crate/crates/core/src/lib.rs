//! Negative-weight adversary bounds for Boolean functions (`ADV±`) and for
//! relations (`ADV_rel±`), computed three ways: primal adversary matrices,
//! dual vector witnesses, and a dense interior-point SDP solve.
//!
//! The [`composition`] module turns optimal certificates for an outer relation
//! `f` and an inner function `g` into certificates for `f ∘ gᴺ`, so the
//! product identity `ADV_rel±(f ∘ gᴺ) = ADV_rel±(f) · ADV±(g)` can be checked
//! on concrete instances from both sides.

pub mod adversary;
pub mod boolean;
pub mod composition;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod sdp;

pub use error::{AdvError, Result};
