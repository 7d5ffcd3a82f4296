//! Dual defect of toric varieties from their lattice point configurations.
//!
//! Given `A ⊂ Zⁿ`, the crate computes the dual defect `δ` of `X_A` two ways:
//! a randomized Hessian-rank oracle and a structural certificate built from a
//! Cayley decomposition of `A`, whose numbers satisfy `δ = r − c`.

pub mod alpha;
pub mod cayley;
pub mod config;
pub mod generate;
pub mod linalg;
pub mod sampling;
pub mod structure;
pub mod tangency;

#[cfg(test)]
mod fixtures;

pub use config::{normalize, GroupHom, PointConfig};
pub use sampling::SamplingParams;
pub use structure::{structure_certificate, verify_certificate, StructureCertificate};
pub use tangency::{defect_oracle, DefectResult, DefectStatus, TangencyProblem};
