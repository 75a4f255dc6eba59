//! Exact-arithmetic diffraction-spectrum analysis of constant-length
//! substitution sequences.
//!
//! The pipeline: parse a substitution, build its instruction matrices,
//! verify primitivity and aperiodicity, decompose the pair substitution
//! into ergodic classes, compute exact correlation coefficients Σ̂(k),
//! enumerate the extreme rays of the spectral hull, and classify each
//! ray's measure as pure point, Lebesgue, or singular continuous. A
//! floating-point numerics layer (periodograms, growth traces, empirical
//! autocorrelations) cross-validates every exact result.

pub mod bisubstitution;
pub mod classifier;
pub mod correlation;
pub mod fixtures;
pub mod hull;
pub mod matrix;
pub mod numerics;
pub mod rational;
pub mod sequences;
pub mod substitution;

pub use bisubstitution::{BiSubstitution, ErgodicDecomposition};
pub use classifier::{SpectralReport, Verdict};
pub use correlation::SigmaComputer;
pub use hull::Hull;
pub use rational::Rat;
pub use substitution::Substitution;
