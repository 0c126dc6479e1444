//! Numerical laboratory for self-similar regular shock reflection-diffraction
//! off a wedge in potential flow.
//!
//! The crate computes the exact local algebra of the reflection (incident,
//! normal-reflection and reflected uniform states, detachment and sonic
//! transition angles), solves the transonic free boundary problem in the
//! subsonic region behind the reflected shock, and verifies the structural
//! properties of the computed solution (state ordering, ellipticity, gradient
//! bounds, the sonic-arc curvature jump) as runtime diagnostics.

pub mod diagnostics;
pub mod domain;
pub mod elliptic;
pub mod error;
pub mod free_boundary;
pub mod grid;
pub mod linalg;
pub mod local_states;
pub mod thermo;

pub use error::{Error, Result};
