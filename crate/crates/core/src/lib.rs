//! Exact and numerical bound states of the one-dimensional Coulomb problem
//! `-½ψ'' - ψ/|x| = Eψ`.
//!
//! * [`specfun`]: Tricomi `U` and Whittaker `W_{κ,1/2}` functions.
//! * [`spectrum`]: exact energies `-2/(n+1)²` and Whittaker wavefunctions.
//! * [`wkb`]: action integral and Bohr quantization with Maslov offset 1.
//! * [`gridsolver`]: finite-difference eigensolver used as an independent oracle.
//! * [`regularized`]: soft-core, repulsive-core and half-line potentials.

pub mod error;
pub mod gridsolver;
pub mod quad;
pub mod regularized;
pub mod roots;
pub mod specfun;
pub mod spectrum;
pub mod wkb;

pub use error::{Error, Result};
pub use regularized::PotentialSpec;
pub use spectrum::{BoundState, Parity, QuantumNumber};
