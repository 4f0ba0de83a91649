//! Single-qudit variational classifiers.
//!
//! Classical feature vectors are written onto a qudit by a rotation whose
//! Hamiltonian is linear in the input, the state is rotated by trainable
//! weights, and the class is read off the mean value of one observable.
//!
//! Module map:
//!
//! * [`algebra`]: su(d) generator bases, Hermitian exponentials and their
//!   directional derivatives.
//! * [`qstate`]: pure qudit states, expectation values, Bloch coordinates.
//! * [`model`]: declarative encode/rotate/measure specs, forward pass,
//!   readout, feature-map kernels and the built-in model zoo.
//! * [`training`]: losses, exact and shift-rule gradients, multi-start
//!   gradient descent and mini-batch SGD.
//! * [`capacity`]: empirical lossless-memory dimension estimation.
//! * [`datasets`]: synthetic generators, CSV ingestion, PCA and stratified
//!   splitting.

pub mod algebra;
pub mod capacity;
pub mod datasets;
mod error;
pub mod model;
pub mod qstate;
pub mod rng;
pub mod training;

pub use error::{Error, Result};

pub use algebra::{CMatrix, GeneratorBasis, GeneratorCombo};
pub use capacity::{LmConfig, LmReport};
pub use datasets::Dataset;
pub use model::{Model, ModelSpec, ParameterVector};
pub use qstate::QuditState;
pub use training::{FitResult, LossKind, TrainConfig};
