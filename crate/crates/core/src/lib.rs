//! Linear targeting: find a matrix `A` of a prescribed structural class with
//! `A X = Y`, decide when one exists, and describe the sources that admit one.

pub mod characterize;
pub mod constructors;
pub mod error;
pub mod feasibility;
pub mod linalg;
pub mod matrix;
pub mod sampling;
pub mod scalar;
pub mod tolerance;
pub mod verify;

pub use constructors::{solve, TargetingSolution};
pub use error::{Result, TargetError};
pub use feasibility::{check, FeasibilityReport, PropertyClass, Verdict};
pub use matrix::ComplexMatrix;
pub use tolerance::TolerancePolicy;
