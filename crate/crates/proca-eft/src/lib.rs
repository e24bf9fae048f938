//! Symbolic workbench for a generalized massive vector field coupled to gravity.
//!
//! The crate is organized as a pipeline over an exact tensor-expression core:
//!
//! * [`expr`] — rational-coefficient tensor monomials on a flat background,
//!   canonical forms, Levi-Civita reduction, functional and partial
//!   derivatives, and an integration-by-parts normal form.
//! * [`model`] — coupling-function series, model configuration files, and the
//!   covariant action builder.
//! * [`perturb`] — weak-field expansion around flat space, canonical
//!   normalization, gauge fixing, the Stueckelberg replacement, and the
//!   decoupling (high-energy) limit.
//! * [`feynman`] — momentum-space propagators and symmetrized vertex rules
//!   derived from a graded Lagrangian.
//! * [`oneloop`] — one-loop 1PI diagram enumeration and the ultraviolet pole
//!   of dimensionally regularized amplitudes, plus counterterm matching.
//! * [`counting`] — operator scaling estimates and the non-renormalization
//!   audit of the decoupling-limit interactions.
//! * [`report`] — deterministic text reports shared by the CLI and the test
//!   suite.

pub mod expr;
pub mod model;
pub mod perturb;
