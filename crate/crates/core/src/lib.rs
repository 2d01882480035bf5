//! Residual currents of bidegree (N,1) in rational normal form
//! `α = ∂̄[r dx∧dy / P]`: their trace (moment) sequences, reconstruction of
//! the current from its traces, rationality detection for series-sampled
//! traces, and the Abel-Radon transform in line coordinates.
//!
//! All core computations are exact over Q. Floating point appears only in
//! the numeric residue oracle of [`residue`].

pub mod algebra;
pub mod current;
pub mod error;
pub mod prony;
pub mod radon;
pub mod residue;
pub mod sample;
pub mod trace;

pub use algebra::{FracMatrix, MPoly, RatFunc, Rational, Vars};
pub use current::{Current, ResidualCurrent};
pub use error::{Error, SchemaError};
pub use trace::TraceSequence;
