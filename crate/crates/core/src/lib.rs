//! Generalized Rijndael-like SP-networks over GF(p^r).

pub mod arith;
pub mod cipher;
pub mod error;
pub mod field;
pub mod group;
pub mod linalg;
pub mod parity;
pub mod perm;
pub mod state;
pub mod verify;

pub use error::{Error, Result};
