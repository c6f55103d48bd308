//! Combinatorics of the popsicle compactification: tree models with
//! alignment data, stratum enumeration, admissible cuts, auxiliary models and
//! the gluing moves between strata.

pub mod auxiliary;
pub mod cuts;
pub mod enumerate;
pub mod glue;
pub mod model;
pub mod validate;

pub use auxiliary::{auxiliary_model, forget, AuxDisc, AuxModel, AuxOrigin, AuxParent, AuxSphere};
pub use cuts::{admissible_cuts, cut_stratum_bijection, cut_to_model, model_to_cut, AdmissibleCut, CutMatch};
pub use enumerate::{codim1_strata, enumerate_tree_models, induced_positions, Codim1Strata};
pub use glue::{glue, gluing_parameters, GlueParam};
pub use model::{Disc, DiscChild, Element, Flavor, Sphere, SphereChild, SphereParent, Target, TreeModel};
pub use validate::{alignable_edge, alignable_vertex, codimension, dim_open, validate, ValidationReport};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PopsicleError {
    #[error("invalid flavor: {0}")]
    InvalidFlavor(String),
    #[error("unstable: n + |F| < 2")]
    Unstable,
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("unknown gluing parameter {0:?}")]
    UnknownParameter(String),
    #[error("flavor is not injective; these operations vanish")]
    NonInjective,
    #[error("bijection failure: {0}")]
    BijectionFailure(String),
    #[error("gluing produced an invalid model: {0}")]
    GlueFailure(String),
}

#[cfg(test)]
mod tests;
