//! Burnside-Witt vectors of finite groups over `Z`, `Z/m` and polynomial
//! rings, with the Frobenius, Verschiebung and restriction maps, spans of
//! finite sets, and towers of quotient groups `(Z/p^j)^n`.
//!
//! ```
//! use burnside_witt::group::{class_table, standard};
//! use burnside_witt::ring::Ring;
//! use burnside_witt::witt::WittVector;
//!
//! let t = class_table(&standard::symmetric(3), 255)?;
//! let z = Ring::integers();
//! let x = WittVector::full(t.clone(), z.clone(), [1, 0, 0, 0].map(|v| z.from_i64(v)).to_vec())?;
//! assert!(x.ghost().values().iter().all(|g| g.is_one()));
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```
//!
//! The guide in `book/` covers each module in turn.

pub mod group;
pub mod ring;
pub mod selftest;
pub mod spans;
pub mod tower;
pub mod witt;

// The book's code blocks run as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/groups.md")]
    mod groups {}
    #[doc = include_str!("../../../book/src/rings.md")]
    mod rings {}
    #[doc = include_str!("../../../book/src/witt-vectors.md")]
    mod witt_vectors {}
    #[doc = include_str!("../../../book/src/operators.md")]
    mod operators {}
    #[doc = include_str!("../../../book/src/spans.md")]
    mod spans {}
    #[doc = include_str!("../../../book/src/towers.md")]
    mod towers {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
