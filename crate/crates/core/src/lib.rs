//! Bruhat-Tits stratification of the GU(2,2) Rapoport-Zink spaces, split and inert,
//! computed over finite fields at desk scale.

pub mod cli;
pub mod error;
pub mod gf;
pub mod hermitian;
pub mod padlat;
pub mod par;
pub mod verify;
pub mod weyl;

pub use error::{Error, Result};
