//! Exact verification engine for massless wave-equation formulations: Pauli
//! algebra representations, field packings, and linear PDE system equivalence.

pub mod error;
pub mod exact;
pub mod field_maps;
pub mod pde;
pub mod representations;

pub use error::{AlgebraError, VerifyError};
pub use exact::{ExactMatrix, ExactScalar};
pub use field_maps::{packing, packing_with, FieldPacking, PackingName, ScalarChannel, Var};
pub use representations::{
    build_rep, neutrino_transform, projector, verify_commutant, verify_pauli_algebra, Certificate,
    Orientation, ProjectorName, RepName, RepresentationSet,
};
