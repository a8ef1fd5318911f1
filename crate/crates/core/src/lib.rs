//! Simulation toolkit for topological error correction on 3D cluster states.
//!
//! The pipeline runs from geometry to statistics:
//!
//! * [`complex`] builds Z2 cell complexes (the single cube, the eight-qubit
//!   complex `L8`, open and periodic cubic lattices) and answers boundary and
//!   homology queries.
//! * [`graphstate`] turns a complex into a cluster-state interaction graph and
//!   evaluates Pauli correlations exactly in the stabilizer formalism.
//! * [`noise`] samples independent flip errors from seeded streams.
//! * [`decoder`] extracts per-volume syndromes and decodes them, by table
//!   lookup on `L8` and by minimum-weight matching on cubic lattices.
//! * [`montecarlo`] sweeps error rates and enumerates error patterns.
//! * [`statevector`] and [`witness`] hold the dense-state checks and the
//!   entanglement-witness mathematics for the eight-qubit state.

pub mod bits;
pub mod complex;
pub mod decoder;
pub mod error;
pub mod graphstate;
pub mod montecarlo;
pub mod noise;
pub mod statevector;
pub mod witness;

pub use complex::{
    build_cubic, build_elementary_cell, build_l8, build_periodic_cubic, Cell, CellComplex, CellId,
    Chain, DefectSpec, LatticeKind,
};
pub use decoder::{Correction, DecodeReport, Decoder, DecoderKind, Syndrome};
pub use error::{Error, Result};
pub use graphstate::{InteractionGraph, PauliOp, QubitKind, StabilizerGroup};
pub use montecarlo::{LatticeSpec, Profile, SweepConfig, SweepResult};
pub use noise::{ErrorPattern, Frame, NoiseModel};
pub use statevector::{Ensemble, Observable, SingleQubitFactor, StateVector};

/// Absolute tolerance for expectation values, norms and overlaps.
pub const TOLERANCE: f64 = 1e-9;
