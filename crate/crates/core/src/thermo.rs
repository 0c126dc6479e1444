//! Polytropic-gas relations for the self-similar potential flow model.
//!
//! Everything here uses the normalization in which the state-(0) Bernoulli
//! constant is rho0^(gamma-1)/(gamma-1): densities come out of
//! `bernoulli_density`, sonic speeds satisfy c^2 = rho^(gamma-1), and no
//! separate Bernoulli constant or pressure scale appears on the potential
//! branch. Pressure enters only through the Euler-branch helpers.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Adiabatic exponent plus the upstream (state-0) reference state.
///
/// `p0` is used only by the Euler-branch relations; the potential branch
/// normalizes pressure away.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GasParams {
    pub gamma: f64,
    pub rho0: f64,
    pub p0: Option<f64>,
}

impl GasParams {
    pub fn new(gamma: f64, rho0: f64, p0: Option<f64>) -> Result<Self> {
        if !(gamma > 1.0) {
            return Err(Error::domain("GasParams", format!("gamma = {gamma} must be > 1")));
        }
        if !(rho0 > 0.0) {
            return Err(Error::domain("GasParams", format!("rho0 = {rho0} must be > 0")));
        }
        if let Some(p0) = p0 {
            if !(p0 > 0.0) {
                return Err(Error::domain("GasParams", format!("p0 = {p0} must be > 0")));
            }
        }
        Ok(GasParams { gamma, rho0, p0 })
    }

    /// rho0^(gamma-1), the Bernoulli base at the rest state.
    pub fn rho0_pow_gm1(&self) -> f64 {
        self.rho0.powf(self.gamma - 1.0)
    }

    pub fn p0(&self) -> Result<f64> {
        self.p0
            .ok_or_else(|| Error::domain("GasParams", "Euler-branch relation requires p0"))
    }
}

/// Euler-branch sonic speed sqrt(gamma p / rho).
pub fn sonic_speed_euler(gamma: f64, p: f64, rho: f64) -> Result<f64> {
    if !(p > 0.0) || !(rho > 0.0) {
        return Err(Error::domain(
            "sonic_speed_euler",
            format!("p = {p}, rho = {rho} must both be positive"),
        ));
    }
    Ok((gamma * p / rho).sqrt())
}

/// Self-similar Bernoulli density
/// rho = (rho0^(gamma-1) - (gamma-1)(phi + |grad phi|^2 / 2))^(1/(gamma-1)).
///
/// A negative base means the queried state is past vacuum; that is reported
/// as `Cavitation`, not treated as a bug.
pub fn bernoulli_density(grad_phi_sq: f64, phi: f64, gas: &GasParams) -> Result<f64> {
    let gm1 = gas.gamma - 1.0;
    let base = gas.rho0_pow_gm1() - gm1 * (phi + 0.5 * grad_phi_sq);
    if base < 0.0 {
        return Err(Error::Cavitation { base });
    }
    Ok(base.powf(1.0 / gm1))
}

/// Squared sonic speed of the self-similar state,
/// c^2 = rho0^(gamma-1) - (gamma-1)(|grad phi|^2/2 + phi).
///
/// May return a negative value (past-vacuum query); the caller decides.
pub fn sonic_speed_sq_selfsim(grad_phi_sq: f64, phi: f64, gas: &GasParams) -> f64 {
    gas.rho0_pow_gm1() - (gas.gamma - 1.0) * (0.5 * grad_phi_sq + phi)
}

/// Critical speed c*(phi) = sqrt(2/(gamma+1) (rho0^(gamma-1) - (gamma-1) phi)).
///
/// The equation is elliptic at a state exactly when |grad phi| < c*(phi).
pub fn critical_speed(phi: f64, gas: &GasParams) -> Result<f64> {
    let radicand = 2.0 / (gas.gamma + 1.0) * (gas.rho0_pow_gm1() - (gas.gamma - 1.0) * phi);
    if radicand < 0.0 {
        return Err(Error::domain(
            "critical_speed",
            format!("radicand {radicand:.6e} < 0 at phi = {phi}"),
        ));
    }
    Ok(radicand.sqrt())
}

/// Signed ellipticity margin c*(phi) - |grad phi|; positive iff elliptic.
pub fn ellipticity_margin(grad_phi: (f64, f64), phi: f64, gas: &GasParams) -> Result<f64> {
    let speed = (grad_phi.0 * grad_phi.0 + grad_phi.1 * grad_phi.1).sqrt();
    Ok(critical_speed(phi, gas)? - speed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn air() -> GasParams {
        GasParams::new(1.4, 1.0, Some(1.0)).unwrap()
    }

    // Frozen from 50-digit direct evaluations of the defining formulas.
    const SONIC_GAMMA14_UNIT: f64 = 1.183_215_956_619_923_2;
    const SONIC_WORKED_STATE1: f64 = 1.387_443_692_551_160_8; // sqrt(1.4*2.75/2)
    const BERNOULLI_SAMPLE: f64 = 0.789_957_052_693_372_7; // (1-0.4*0.225)^2.5
    const CRIT_REST: f64 = 0.912_870_929_175_276_9; // sqrt(2/2.4)

    #[test]
    fn sonic_speed_euler_direct_values() {
        assert!((sonic_speed_euler(1.4, 1.0, 1.0).unwrap() - SONIC_GAMMA14_UNIT).abs() < 1e-15);
        // normalization p = 1/gamma cancels
        assert!((sonic_speed_euler(1.4, 1.0 / 1.4, 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((sonic_speed_euler(1.4, 2.75, 2.0).unwrap() - SONIC_WORKED_STATE1).abs() < 1e-15);
        assert!(sonic_speed_euler(1.4, -1.0, 1.0).is_err());
        assert!(sonic_speed_euler(1.4, 1.0, 0.0).is_err());
    }

    #[test]
    fn bernoulli_density_identity_and_thresholds() {
        let gas = air();
        assert_eq!(bernoulli_density(0.0, 0.0, &gas).unwrap(), 1.0);
        // exact vacuum threshold phi = rho0^(gamma-1)/(gamma-1)
        let phi_vac = gas.rho0_pow_gm1() / (gas.gamma - 1.0);
        assert_eq!(bernoulli_density(0.0, phi_vac, &gas).unwrap(), 0.0);
        assert!(matches!(
            bernoulli_density(0.0, phi_vac * 1.01, &gas),
            Err(Error::Cavitation { .. })
        ));
        assert!((bernoulli_density(0.25, 0.1, &gas).unwrap() - BERNOULLI_SAMPLE).abs() < 1e-15);
    }

    #[test]
    fn selfsim_sonic_speed_values() {
        let gas = air();
        assert_eq!(sonic_speed_sq_selfsim(0.0, 0.0, &gas), 1.0);
        assert!((sonic_speed_sq_selfsim(0.25, 0.1, &gas) - 0.91).abs() < 1e-15);
        // negative (past-vacuum) values are allowed here
        assert!(sonic_speed_sq_selfsim(0.0, 10.0, &gas) < 0.0);
    }

    #[test]
    fn density_to_the_gm1_equals_sonic_speed_sq() {
        // c^2 = rho^(gamma-1) in this normalization; random-sample identity check.
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..500 {
            let gamma = rng.gen_range(1.05..2.5);
            let rho0 = rng.gen_range(0.2..4.0);
            let gas = GasParams::new(gamma, rho0, None).unwrap();
            let g2 = rng.gen_range(0.0..0.5);
            let phi = rng.gen_range(-1.0..0.2);
            let rho = match bernoulli_density(g2, phi, &gas) {
                Ok(r) => r,
                Err(_) => continue,
            };
            let c2 = sonic_speed_sq_selfsim(g2, phi, &gas);
            assert!(
                (rho.powf(gamma - 1.0) - c2).abs() < 1e-12 * c2.abs().max(1.0),
                "identity failed: gamma={gamma} rho0={rho0} g2={g2} phi={phi}"
            );
        }
    }

    #[test]
    fn critical_speed_values() {
        let gas = air();
        assert!((critical_speed(0.0, &gas).unwrap() - CRIT_REST).abs() < 1e-15);
        let phi_vac = gas.rho0_pow_gm1() / (gas.gamma - 1.0);
        assert!(critical_speed(phi_vac, &gas).unwrap().abs() < 1e-15);
        assert!(critical_speed(phi_vac + 0.1, &gas).is_err());
        assert!(GasParams::new(1.0, 1.0, None).is_err());
    }

    #[test]
    fn ellipticity_margin_values_and_monotonicity() {
        let gas = air();
        let rest = ellipticity_margin((0.0, 0.0), 0.0, &gas).unwrap();
        assert!((rest - CRIT_REST).abs() < 1e-15);
        let sonic = ellipticity_margin((CRIT_REST, 0.0), 0.0, &gas).unwrap();
        assert!(sonic.abs() < 1e-15);
        assert!((ellipticity_margin((1.0, 0.0), 0.0, &gas).unwrap() - (CRIT_REST - 1.0)).abs() < 1e-15);

        // strictly decreasing in |grad phi| at fixed phi
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let phi = rng.gen_range(-0.5..0.5);
            let s1 = rng.gen_range(0.0..1.0);
            let s2 = s1 + rng.gen_range(1e-6..0.5);
            let m1 = ellipticity_margin((s1, 0.0), phi, &gas).unwrap();
            let m2 = ellipticity_margin((s2, 0.0), phi, &gas).unwrap();
            assert!(m2 < m1);
        }
    }

    #[test]
    fn bernoulli_density_monotone_decreasing() {
        let gas = air();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let g2 = rng.gen_range(0.0..0.4);
            let phi = rng.gen_range(-0.5..0.3);
            let base = bernoulli_density(g2, phi, &gas).unwrap();
            assert!(bernoulli_density(g2 + 0.05, phi, &gas).unwrap() < base);
            assert!(bernoulli_density(g2, phi + 0.05, &gas).unwrap() < base);
        }
    }
}
