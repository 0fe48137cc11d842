//! Clifford algebra arithmetic, the Clifford-Fourier transform, the
//! continuous Clifford-wavelet transform over spin-rotated daughters, and
//! evaluators for Heisenberg-type uncertainty inequalities built on them.
//!
//! Everything is sampled on uniform periodic grids `[-L, L)ⁿ`; fields carry
//! `2ⁿ` complex channels, one per basis blade.

pub mod cft;
pub mod cwt;
pub mod error;
mod fft;
pub mod field;
pub mod multivector;
pub mod testfn;
pub mod uncertainty;

pub use error::{Error, Result};
pub use field::{Domain, GridSpec, MVField};
pub use multivector::{blade_product, BladeMask, Multivector, Vector};
