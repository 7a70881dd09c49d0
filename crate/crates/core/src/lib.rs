//! Z4-linear Kerdock and Preparata codes over QPSK.
//!
//! Codes are built from the Galois ring GR(4, m). Soft-decision decoding runs
//! either as exact symbol-wise MAP over the real group algebra of Z4, or as a
//! two-stage bitwise lifting decoder over the binary images.

pub mod algebra;
pub mod channel;
pub mod code;
pub mod error;
pub mod galois_ring;
pub mod lifting;
pub mod map;
pub mod ring_z4;
pub mod sim;

pub use code::{CodeId, CodeSpec, Family};
pub use error::{Error, Result};
pub use ring_z4::{BitWord, Z4Word};
