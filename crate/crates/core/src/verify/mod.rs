//! Independent checks of constructed answers, seeded instance generation
//! with known witnesses, and a least-squares feasibility oracle. Nothing
//! here calls into the solvers or the feasibility predicates.

mod generate;
mod oracle;
mod property;

pub use generate::{generate_instance, random_spec, Instance, InstanceSpec};
pub use oracle::{oracle_feasible_subspace, oracle_min_residual, Subspace, ORACLE_MAX_DIM};
pub use property::{verify_property, verify_targeting, PropertyReport};
