//! P1 finite-element machinery: element integrals, sparse assembly,
//! Dirichlet elimination and direct solves.

pub mod assembly;
pub mod element;
pub mod solve;
pub mod sparse;

pub use assembly::{assemble, assemble_vector, DofMap, FieldLayout, LocalMatrix, P, UX, UY};
pub use element::{segment_matrices, P1Triangle};
pub use solve::{solve_linear, Constraints, DirichletSolver, ReducedSystem, SparseLu};
pub use sparse::CsrMatrix;
