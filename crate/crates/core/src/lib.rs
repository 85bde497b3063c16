//! Simulation and experiments for quantum circuits built only from
//! generalised Toffoli gates, global Hadamard layers and black-box basis
//! permutations.
//!
//! The crate is organised bottom-up:
//!
//! - [`circuit`], [`permutation`] and [`format`] describe circuits and their
//!   text form;
//! - [`statevec`] runs them on dense state vectors;
//! - [`gadgets`] and [`depth2`] cover the small named constructions;
//! - [`order_finding`] and [`eigenest`] implement order finding, factoring
//!   and classical eigenvalue estimation;
//! - [`grover`] builds search circuits for arbitrary phase schedules and
//!   checks the lower-bound machinery numerically;
//! - [`cli`] wires everything into the `qdepth` binary.

pub mod arith;
pub mod circuit;
pub mod cli;
pub mod depth2;
pub mod eigenest;
pub mod format;
pub mod gadgets;
pub mod grover;
pub mod order_finding;
pub mod output;
pub mod permutation;
pub mod statevec;

pub use circuit::{Circuit, CircuitMetrics, Gate, InputSpec, Readout, WireInit};
pub use permutation::Permutation;
pub use statevec::{Distribution, StateVector};
