//! Perturbative expansion around flat space: metric series, graded field
//! expansion of the action, canonical normalization, gauge fixing, the
//! scalar-restoring field redefinition, and the decoupling limit.

pub mod dlimit;
pub mod gauge;
pub mod geom;
pub mod graded;
pub mod hierarchy;
pub mod normalize;
pub mod stueck;

pub use dlimit::{decoupling_limit, ScaleLimit};
pub use gauge::{add_gauge_fixing, gauge_fixing_density, Gauge};
pub use graded::{expand_perturbations, Content, GradedLagrangian};
pub use hierarchy::{scale_hierarchy, HierarchyReport, HierarchyVerdict, Margin};
pub use normalize::{canonical_normalize, q_sqrt, Normalization};
pub use stueck::{stueckelberg, unitary_gauge};

/// Failures of the expansion, normalization, and limit pipeline.
#[derive(thiserror::Error, Debug)]
pub enum PerturbError {
    #[error("perturbative order {0} is outside the supported range 2..=4")]
    UnsupportedOrder(u32),
    #[error("flat background is not a stationary point: {0}")]
    BackgroundNotStationary(String),
    #[error("{0}")]
    KineticMismatch(String),
    #[error("vanishing kinetic normalization for the {0} term")]
    VanishingNormalization(String),
    #[error("kinetic normalization is not a rational square: {0}")]
    IrrationalNormalization(String),
    #[error("{0}")]
    GaugeFieldMismatch(String),
    #[error("term diverges in the decoupling limit: {0}")]
    DivergentLimit(String),
    #[error("scale `{0}` must be positive and finite")]
    NonPositiveScale(&'static str),
}
