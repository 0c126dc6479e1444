use thiserror::Error;

/// Errors surfaced by the reflection laboratory.
///
/// Physical-regime failures (entropy violation, detachment, cavitation) are
/// distinct from numerical failures so callers can tell "no such state exists"
/// apart from "the solver gave up".
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error in {context}: {message}")]
    Domain { context: &'static str, message: String },

    /// Bernoulli density base went negative: the queried state is past vacuum.
    #[error("cavitation: Bernoulli base {base:.6e} < 0 (vacuum state)")]
    Cavitation { base: f64 },

    /// Downstream density does not exceed upstream density.
    #[error("entropy violation: rho_downstream = {rho_down} must exceed rho_upstream = {rho_up}")]
    EntropyViolation { rho_up: f64, rho_down: f64 },

    /// Hugoniot denominator hit the maximal-compression ratio (gamma+1)/(gamma-1).
    #[error("beyond maximal compression: (gamma+1)*rho0 - (gamma-1)*rho1 = {denom:.6e} <= 0")]
    BeyondMaximalCompression { denom: f64 },

    #[error("geometry error: {0}")]
    Geometry(String),

    /// Wedge angle outside the regime the solver supports.
    #[error("regime error: theta_w = {theta_w_deg:.6} deg requires theta_w in ({theta_s_deg:.6} deg, 90 deg]")]
    Regime { theta_w_deg: f64, theta_s_deg: f64 },

    #[error("configuration error: {0}")]
    Configuration(String),

    /// Iteration diverged or failed to reach tolerance; history retained for reports.
    #[error("nonconvergence in {context} after {iterations} iterations (last measure {last:.6e})")]
    NonConvergence {
        context: &'static str,
        iterations: usize,
        last: f64,
        history: Vec<f64>,
    },

    /// |d/dn (phi - phi1)| vanished at a shock sample: contact/tangency.
    #[error("degenerate shock update: |d_n(phi - phi1)| = {derivative:.3e} < 1e-12 at sample {index}")]
    DegenerateUpdate { index: usize, derivative: f64 },

    #[error("numerical error in {context}: {message}")]
    Numerical { context: &'static str, message: String },

    #[error("assembly error: {0}")]
    Assembly(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(context: &'static str, message: impl Into<String>) -> Self {
        Error::Domain { context, message: message.into() }
    }
}
