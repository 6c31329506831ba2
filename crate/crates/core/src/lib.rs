//! Exact verification kernel for graded vertex algebras, vertex coalgebras, their
//! (co)modules and the associated C2 Poisson and co-Poisson structures.

pub mod builders;
pub mod c2;
pub mod defects;
pub mod duality;
pub mod gamma;
pub mod graded;
pub mod report;
pub mod scalars;
pub mod vertex;

pub use gamma::{BetaSpec, GroupElement, GroupSpec, RelationKind};
pub use graded::{GradedMap, GradedSpace, GradedSubspace, Quotient, Vector};
pub use report::{AxiomResult, CheckReport, Verdict, Witness};
pub use scalars::{Rational, Scalar};
pub use vertex::{ExponentBox, LaurentVector, VertexAlgebra, VertexCoalgebra, VertexComodule, VertexError, VertexModule, Window};
