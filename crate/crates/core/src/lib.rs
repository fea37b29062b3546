//! Homotopy invariants of 4-dimensional toric orbifolds and of the model
//! complexes `(⋁ⁿ S² ∨ P³(m)) ∪ e⁴`.
//!
//! * [`zlattice`]: exact integer/modular linear algebra (Smith form, CRT,
//!   solving over `ℤ_N`, bounded `GL_n(ℤ)` enumeration).
//! * [`toric`]: characteristic data of a polygon, lens orders `m_{i,j}`,
//!   cohomology, p-components and vertex kernels.
//! * [`cells`]: cup-product triples `(A, b, c)` and map representations
//!   `(W, y, z)`.
//! * [`decide`]: splitting off `P³(q)` and equivalence search with
//!   brute-force oracles.
//! * [`cli`]: file formats, reports and the `torhom` command line.

pub mod cells;
pub mod cli;
pub mod decide;
pub mod exec;
pub mod toric;
pub mod zlattice;

pub use cells::{CellMapRep, CupTriple};
pub use decide::{EquivOutcome, EquivVerdict, SplitOutcome, SplitVerdict};
pub use exec::Exec;
pub use toric::CharacteristicData;
pub use zlattice::IntMatrix;
