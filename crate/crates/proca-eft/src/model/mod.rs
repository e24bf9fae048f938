//! Model layer: coupling-function series, configuration files, and the
//! assembly of the covariant Lagrangian density as a field polynomial.
//!
//! A model is six coupling functions of the invariant scalars built from
//! the vector, each stored as a finite Taylor series with exact rational
//! coefficients carrying explicit powers of the mass scales. The assembly
//! step substitutes the perturbative metric and vector into the invariant
//! blocks and truncates at the field order the loop analysis consumes.

pub mod action;
pub mod config;
pub mod series;

pub use action::{build_action, check_density_dim, field_grade, ACTION_ORDER};
pub use config::ModelConfig;
pub use series::{taylor_expand_couplings, CouplingSeries, CouplingTerm};

use thiserror::Error;

/// Validation and assembly failures for model definitions.
#[derive(Debug, Error)]
pub enum ModelError {
    /// A series term's scalar prefactor does not give the coupling its
    /// required mass dimension.
    #[error(
        "coupling {fam} term (X^{ex} Y^{ey} F^{ef}) has dimension {got}, expected {want}"
    )]
    DimensionMismatch {
        fam: String,
        ex: u8,
        ey: u8,
        ef: u8,
        got: String,
        want: String,
    },

    /// Only the kinetic-sector coupling may depend on the field-strength
    /// invariants.
    #[error("coupling {0} may only depend on the quadratic vector invariant")]
    BadSeriesVariable(String),

    /// A series slot that multiplies a total derivative and cannot affect
    /// the dynamics.
    #[error("{0} multiplies a total derivative and must vanish")]
    TotalDerivativeCoef(String),

    /// An expansion was requested beyond the stored truncation order.
    #[error("coupling {fam} is stored to field order {stored}, requested {requested}")]
    TruncationExceeded {
        fam: String,
        stored: u8,
        requested: u32,
    },

    /// A sector flag excludes terms the configuration contains.
    #[error("sector flag {0} is disabled but the configuration populates it")]
    SectorFlagConflict(String),

    /// Sectors handled only by the power-counting layer cannot be expanded
    /// into an explicit density.
    #[error("coupling {0} has no explicit density assembly; use the power-counting layer")]
    UnsupportedExplicitSector(String),

    /// A monomial of an assembled density failed the dimension audit.
    #[error("density monomial has mass dimension {0}, expected 4")]
    DensityDimension(String),

    /// Malformed model configuration text.
    #[error("config line {line}: {msg}")]
    Config { line: usize, msg: String },
}
