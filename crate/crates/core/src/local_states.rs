//! Exact and semi-exact algebra of the uniform states around the reflection
//! point: the incident shock (Euler and potential branches), normal
//! reflection, the two reflected states at P0, and the detachment / sonic
//! transition angles.
//!
//! Conventions: angles in radians, self-similar coordinates (xi, eta).
//! The incident shock is the vertical line {xi = xi0}; the wedge boundary is
//! {eta = xi tan(theta_w), xi > 0}; P0 = (xi0, xi0 tan(theta_w)).

use crate::error::{Error, Result};
use crate::thermo::{self, GasParams};
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;

// ---------------------------------------------------------------------------
// Euler branch
// ---------------------------------------------------------------------------

/// Incident-shock data on the Euler branch: state (0) ahead, state (1) behind.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct EulerIncident {
    pub rho0: f64,
    pub p0: f64,
    pub rho1: f64,
    pub p1: f64,
    /// Velocity of state (1), directed toward the wedge.
    pub u1: f64,
    /// Squared Mach number of state (1), M1^2 = (u1/c1)^2.
    pub m1_sq: f64,
}

/// Resolve state (1) from (gamma, rho0, p0, rho1) through the Hugoniot relations.
pub fn euler_incident(gas: &GasParams, rho1: f64) -> Result<EulerIncident> {
    let (gamma, rho0) = (gas.gamma, gas.rho0);
    let p0 = gas.p0()?;
    if rho1 <= rho0 {
        return Err(Error::EntropyViolation { rho_up: rho0, rho_down: rho1 });
    }
    let denom = (gamma + 1.0) * rho0 - (gamma - 1.0) * rho1;
    if denom <= 0.0 {
        return Err(Error::BeyondMaximalCompression { denom });
    }
    let p1 = p0 * ((gamma + 1.0) * rho1 - (gamma - 1.0) * rho0) / denom;
    let u1 = ((p1 - p0) * (rho1 - rho0) / (rho0 * rho1)).sqrt();
    let m1_sq = 2.0 * (rho1 - rho0) * (rho1 - rho0)
        / (rho0 * ((gamma + 1.0) * rho1 - (gamma - 1.0) * rho0));
    Ok(EulerIncident { rho0, p0, rho1, p1, u1, m1_sq })
}

/// Invert the incident Mach relation: the rho1 > rho0 root of
/// M1^2 = 2 (rho1-rho0)^2 / (rho0 ((gamma+1) rho1 - (gamma-1) rho0)).
pub fn rho1_from_mach(gas: &GasParams, m1: f64) -> Result<f64> {
    if !(m1 > 0.0) {
        return Err(Error::domain("rho1_from_mach", format!("M1 = {m1} must be > 0")));
    }
    let (gamma, rho0) = (gas.gamma, gas.rho0);
    let m2 = m1 * m1;
    let rho1 =
        rho0 * (4.0 + (gamma + 1.0) * m2 + m1 * (16.0 + (gamma + 1.0).powi(2) * m2).sqrt()) / 4.0;
    let denom = (gamma + 1.0) * rho0 - (gamma - 1.0) * rho1;
    if denom <= 0.0 {
        return Err(Error::BeyondMaximalCompression { denom });
    }
    Ok(rho1)
}

/// Reflected state of the head-on (theta_w = pi/2) Euler reflection.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct NormalReflectionState {
    pub rho2: f64,
    pub p2: f64,
    /// Reflected-shock location on the xi-axis (negative).
    pub xi1: f64,
    pub c2: f64,
}

/// Unique normal-reflection state behind the reflected plane shock.
///
/// rho2/rho1 is the t > 1 root of
/// (1 + (gamma-1)/2 M1^2) t^2 - (2 + (gamma+1)/2 M1^2) t + 1 = 0.
pub fn normal_reflection(gas: &GasParams, inc: &EulerIncident) -> NormalReflectionState {
    let gamma = gas.gamma;
    let m2 = inc.m1_sq;
    let m1 = m2.sqrt();
    let t = (4.0 + (gamma + 1.0) * m2 + m1 * (16.0 + (gamma + 1.0).powi(2) * m2).sqrt())
        / (2.0 * (2.0 + (gamma - 1.0) * m2));
    let rho2 = t * inc.rho1;
    let p2 = inc.p1 * ((gamma + 1.0) * t - (gamma - 1.0)) / ((gamma + 1.0) - (gamma - 1.0) * t);
    let xi1 = -inc.rho1 * inc.u1 / (rho2 - inc.rho1);
    let c2 = (gamma * p2 / rho2).sqrt();
    NormalReflectionState { rho2, p2, xi1, c2 }
}

// ---------------------------------------------------------------------------
// Potential branch: incident shock and the uniform potentials
// ---------------------------------------------------------------------------

/// Incident-shock data on the potential branch.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PotentialIncident {
    pub gas: GasParams,
    pub rho1: f64,
    /// State-(1) velocity.
    pub u1: f64,
    /// Incident shock location {xi = xi0}.
    pub xi0: f64,
}

/// Resolve the potential-flow incident shock from (gamma, rho0, rho1):
/// u1 = sqrt(2 (rho1-rho0)(rho1^(g-1)-rho0^(g-1)) / ((g-1)(rho1+rho0))),
/// xi0 = rho1 u1 / (rho1 - rho0).
pub fn potential_incident(gas: &GasParams, rho1: f64) -> Result<PotentialIncident> {
    let (gamma, rho0) = (gas.gamma, gas.rho0);
    if rho1 <= rho0 {
        return Err(Error::EntropyViolation { rho_up: rho0, rho_down: rho1 });
    }
    let u1 = (2.0 * (rho1 - rho0) * (rho1.powf(gamma - 1.0) - rho0.powf(gamma - 1.0))
        / ((gamma - 1.0) * (rho1 + rho0)))
        .sqrt();
    let xi0 = rho1 * u1 / (rho1 - rho0);
    Ok(PotentialIncident { gas: *gas, rho1, u1, xi0 })
}

/// phi0(xi,eta) = -(xi^2+eta^2)/2 and its gradient (-xi, -eta).
pub fn phi0(p: (f64, f64)) -> (f64, (f64, f64)) {
    (-0.5 * (p.0 * p.0 + p.1 * p.1), (-p.0, -p.1))
}

impl PotentialIncident {
    /// phi1 = -(xi^2+eta^2)/2 + u1 (xi - xi0) and gradient (u1 - xi, -eta).
    pub fn phi1(&self, p: (f64, f64)) -> (f64, (f64, f64)) {
        let (v0, _) = phi0(p);
        (v0 + self.u1 * (p.0 - self.xi0), (self.u1 - p.0, -p.1))
    }

    /// Mass-flux jump rho1 d_xi phi1 - rho0 d_xi phi0 across {xi = xi0} at height eta.
    pub fn incident_flux_jump(&self, eta: f64) -> f64 {
        let _ = eta; // the jump is height-independent for these uniform states
        self.rho1 * (self.u1 - self.xi0) + self.gas.rho0 * self.xi0
    }
}

// ---------------------------------------------------------------------------
// State (2) behind the straight reflected shock
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    /// Larger pseudo-speed at P0; selected by the stability criterion.
    A,
    /// Smaller pseudo-speed at P0; subsonic there.
    B,
}

/// Reflected uniform state at the reflection point P0.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct StateTwo {
    /// Horizontal velocity; the full velocity is (u2, u2 tan(theta_w)).
    pub u2: f64,
    /// Inclination of the straight reflected shock P0P1 against the xi-axis.
    pub theta_sh: f64,
    pub rho2: f64,
    pub c2: f64,
    pub branch: Branch,
    /// |(U2, V2)| at P0, i.e. (xi0 - u2) / cos(theta_w).
    pub pseudo_speed_at_p0: f64,
    /// Wedge half-angle this state was solved for.
    pub theta_w: f64,
}

impl StateTwo {
    /// phi2 = -(xi^2+eta^2)/2 + u2 (xi - xi0) + (eta - xi0 tan thw) u2 tan thw,
    /// gradient (u2 - xi, u2 tan thw - eta).
    pub fn phi2(&self, xi0: f64, p: (f64, f64)) -> (f64, (f64, f64)) {
        let tw = self.theta_w.tan();
        let (v0, _) = phi0(p);
        (
            v0 + self.u2 * (p.0 - xi0) + (p.1 - xi0 * tw) * self.u2 * tw,
            (self.u2 - p.0, self.u2 * tw - p.1),
        )
    }

    /// Center of the state-(2) sonic circle, (u2, u2 tan(theta_w)).
    pub fn sonic_center(&self) -> (f64, f64) {
        (self.u2, self.u2 * self.theta_w.tan())
    }

    pub fn is_supersonic_at_p0(&self) -> bool {
        self.pseudo_speed_at_p0 > self.c2
    }
}

/// The two algebraic conditions across the straight reflected shock, reduced
/// to one residual in u2.
///
/// Continuity of phi across S1 = {phi1 = phi2} fixes the shock inclination,
/// theta_sh = atan2(u1 - u2, u2 tan(theta_w)), because phi1 - phi2 is affine
/// and vanishes at P0. The remaining condition is the mass-flux jump
/// [rho grad(phi) . nu] = 0 along S1, with rho2 given by the Bernoulli law.
struct StateTwoEq<'a> {
    pot: &'a PotentialIncident,
    theta_w: f64,
    tan_w: f64,
    cos_w: f64,
}

impl<'a> StateTwoEq<'a> {
    fn new(pot: &'a PotentialIncident, theta_w: f64) -> Self {
        StateTwoEq { pot, theta_w, tan_w: theta_w.tan(), cos_w: theta_w.cos() }
    }

    /// Bernoulli density of state (2) as a function of u2 (None past vacuum).
    fn rho2(&self, u2: f64) -> Option<f64> {
        let gas = &self.pot.gas;
        let gm1 = gas.gamma - 1.0;
        let base =
            gas.rho0_pow_gm1() - gm1 * (u2 * (0.5 * u2 - self.pot.xi0)) / (self.cos_w * self.cos_w);
        if base > 0.0 {
            Some(base.powf(1.0 / gm1))
        } else {
            None
        }
    }

    fn theta_sh(&self, u2: f64) -> f64 {
        (self.pot.u1 - u2).atan2(u2 * self.tan_w)
    }

    /// Vacuum bound on u2: the Bernoulli base is positive strictly below this.
    fn u_cavitation(&self) -> f64 {
        let gas = &self.pot.gas;
        let xi0 = self.pot.xi0;
        xi0 + (xi0 * xi0
            + 2.0 * gas.rho0_pow_gm1() * self.cos_w * self.cos_w / (gas.gamma - 1.0))
            .sqrt()
    }

    /// RH flux jump along S1, evaluated at P0 with unit normal
    /// nu = (sin theta_sh, -cos theta_sh); point-independent for uniform states.
    fn resid(&self, u2: f64) -> Option<f64> {
        let rho2 = self.rho2(u2)?;
        let (u1, xi0, rho1) = (self.pot.u1, self.pot.xi0, self.pot.rho1);
        let th = self.theta_sh(u2);
        let flux2 = rho2 * (u2 - xi0) * (th - self.theta_w).sin() / self.cos_w;
        let flux1 = rho1 * ((u1 - xi0) * th.sin() + xi0 * self.tan_w * th.cos());
        Some(flux2 - flux1)
    }

    /// resid with past-vacuum queries mapped to a deep negative value, for
    /// extremum searches.
    fn resid_floored(&self, u2: f64) -> f64 {
        self.resid(u2).unwrap_or(-1e300)
    }

    fn state(&self, u2: f64, branch: Branch) -> Result<StateTwo> {
        let rho2 = self.rho2(u2).ok_or_else(|| Error::Numerical {
            context: "state_two_solve",
            message: format!("cavitation at root u2 = {u2}"),
        })?;
        if rho2 <= self.pot.rho1 {
            return Err(Error::EntropyViolation { rho_up: self.pot.rho1, rho_down: rho2 });
        }
        let gamma = self.pot.gas.gamma;
        Ok(StateTwo {
            u2,
            theta_sh: self.theta_sh(u2),
            rho2,
            c2: rho2.powf(0.5 * (gamma - 1.0)),
            branch,
            pseudo_speed_at_p0: (self.pot.xi0 - u2) / self.cos_w,
            theta_w: self.theta_w,
        })
    }

    /// Scan grid over (0, u_cav): geometric points resolve the near-zero root
    /// of the large-angle regime, linear points cover the rest.
    fn scan_points(&self, n_linear: usize) -> Vec<f64> {
        let hi = self.u_cavitation() * (1.0 - 1e-12);
        let lo = (1e-7 * self.pot.u1 * self.cos_w * self.cos_w).min(1e-9);
        let mut pts = Vec::with_capacity(n_linear + 70);
        let m = 60;
        for k in 0..=m {
            pts.push(lo * (hi / lo).powf(k as f64 / m as f64));
        }
        for k in 1..=n_linear {
            pts.push(hi * k as f64 / n_linear as f64);
        }
        pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        pts.dedup();
        pts
    }

    /// All sign-change roots of resid over the scan grid, bisected to f64 limits.
    fn find_roots(&self, n_linear: usize) -> Vec<f64> {
        let pts = self.scan_points(n_linear);
        let mut roots = Vec::new();
        let mut prev: Option<(f64, f64)> = None;
        for &u in &pts {
            let f = match self.resid(u) {
                Some(f) => f,
                None => break,
            };
            if let Some((up, fp)) = prev {
                if fp * f < 0.0 {
                    roots.push(self.bisect(up, u));
                }
            }
            prev = Some((u, f));
        }
        roots
    }

    fn bisect(&self, mut lo: f64, mut hi: f64) -> f64 {
        let mut flo = self.resid_floored(lo);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let fm = self.resid_floored(mid);
            if flo * fm <= 0.0 {
                hi = mid;
            } else {
                lo = mid;
                flo = fm;
            }
        }
        0.5 * (lo + hi)
    }

    /// Maximum of resid over a window, by dense scan plus golden-section
    /// refinement. Used for existence detection near root tangency.
    fn max_on_window(&self, mut a: f64, mut b: f64) -> (f64, f64) {
        let hi_cap = self.u_cavitation() * (1.0 - 1e-12);
        a = a.max(1e-14);
        b = b.min(hi_cap);
        if b <= a {
            return (-1e300, a);
        }
        let n = 80;
        let (mut best, mut arg) = (-1e300f64, a);
        for k in 0..=n {
            let u = a + (b - a) * k as f64 / n as f64;
            let f = self.resid_floored(u);
            if f > best {
                best = f;
                arg = u;
            }
        }
        let cell = (b - a) / n as f64;
        let (mut lo, mut hi) = ((arg - cell).max(a), (arg + cell).min(b));
        let gr = 0.5 * (5.0f64.sqrt() - 1.0);
        let mut c = hi - gr * (hi - lo);
        let mut d = lo + gr * (hi - lo);
        for _ in 0..120 {
            if self.resid_floored(c) > self.resid_floored(d) {
                hi = d;
            } else {
                lo = c;
            }
            c = hi - gr * (hi - lo);
            d = lo + gr * (hi - lo);
        }
        let um = 0.5 * (lo + hi);
        (self.resid_floored(um), um)
    }
}

/// Solve for the two reflected states at P0.
///
/// Returns `None` when no root exists (theta_w below detachment). At
/// theta_w = pi/2 the degenerate pair u2 = 0 of the potential-branch normal
/// reflection is returned for both entries.
pub fn state_two_solve(
    pot: &PotentialIncident,
    theta_w: f64,
) -> Result<Option<(StateTwo, StateTwo)>> {
    if !(theta_w > 0.0 && theta_w <= FRAC_PI_2) {
        return Err(Error::domain(
            "state_two_solve",
            format!("theta_w = {theta_w} must lie in (0, pi/2]"),
        ));
    }
    if FRAC_PI_2 - theta_w < 1e-12 {
        let nr = normal_reflection_potential(pot)?;
        let degenerate = StateTwo {
            u2: 0.0,
            theta_sh: FRAC_PI_2,
            rho2: nr.rho2,
            c2: nr.c2,
            branch: Branch::A,
            pseudo_speed_at_p0: f64::INFINITY,
            theta_w: FRAC_PI_2,
        };
        return Ok(Some((degenerate, StateTwo { branch: Branch::B, ..degenerate })));
    }

    let eq = StateTwoEq::new(pot, theta_w);
    let mut roots = eq.find_roots(2000);
    if roots.len() < 2 {
        // near-tangency fallback: split at the interior maximum if it is positive
        let (m, um) = eq.max_on_window(0.0, eq.u_cavitation());
        if m > 0.0 {
            let lo_side = eq.bisect(1e-14, um);
            let hi_side = eq.bisect(eq.u_cavitation() * (1.0 - 1e-12), um);
            roots = vec![lo_side, hi_side];
        } else {
            return Ok(None);
        }
    }
    if roots.len() != 2 {
        return Err(Error::Numerical {
            context: "state_two_solve",
            message: format!("expected 2 roots, found {} at theta_w = {theta_w}", roots.len()),
        });
    }
    let (ua, ub) = (roots[0].min(roots[1]), roots[0].max(roots[1]));
    let a = eq.state(ua, Branch::A)?;
    let b = eq.state(ub, Branch::B)?;
    debug_assert!(a.pseudo_speed_at_p0 >= b.pseudo_speed_at_p0);
    Ok(Some((a, b)))
}

// ---------------------------------------------------------------------------
// Potential-branch normal reflection
// ---------------------------------------------------------------------------

/// Normal reflection on the potential branch: state (2) at rest behind the
/// vertical reflected shock {xi = xi1}.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PotentialNormalReflection {
    pub rho2: f64,
    /// Reflected shock location (negative).
    pub xi1: f64,
    pub c2: f64,
    /// Additive constant of phi2 = -(xi^2+eta^2)/2 + const, fixed by continuity.
    pub phi_const: f64,
}

impl PotentialNormalReflection {
    /// phi2 = -(xi^2+eta^2)/2 + phi_const; gradient (-xi, -eta).
    pub fn phi2(&self, p: (f64, f64)) -> (f64, (f64, f64)) {
        let (v0, g) = phi0(p);
        (v0 + self.phi_const, g)
    }
}

/// rho2 solves rho2^(g-1) = rho0^(g-1) - (g-1) u1 (xi1 - xi0) with
/// xi1 = -rho1 u1 / (rho2 - rho1); the left side is strictly decreasing in the
/// difference, so the root is unique and bracketed by bisection.
pub fn normal_reflection_potential(pot: &PotentialIncident) -> Result<PotentialNormalReflection> {
    let gas = &pot.gas;
    let gm1 = gas.gamma - 1.0;
    let h = |rho2: f64| -> f64 {
        let xi1 = -pot.rho1 * pot.u1 / (rho2 - pot.rho1);
        gas.rho0_pow_gm1() - gm1 * pot.u1 * (xi1 - pot.xi0) - rho2.powf(gm1)
    };
    let mut lo = pot.rho1 * (1.0 + 1e-12);
    let mut hi = pot.rho1 * 2.0;
    let mut guard = 0;
    while h(hi) > 0.0 {
        hi *= 2.0;
        guard += 1;
        if guard > 200 {
            return Err(Error::Numerical {
                context: "normal_reflection_potential",
                message: "no upper bracket for rho2".into(),
            });
        }
    }
    if h(lo) < 0.0 {
        return Err(Error::Numerical {
            context: "normal_reflection_potential",
            message: "lower bracket invalid".into(),
        });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if h(mid) >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let rho2 = 0.5 * (lo + hi);
    let xi1 = -pot.rho1 * pot.u1 / (rho2 - pot.rho1);
    Ok(PotentialNormalReflection {
        rho2,
        xi1,
        c2: rho2.powf(0.5 * gm1),
        phi_const: pot.u1 * (xi1 - pot.xi0),
    })
}

// ---------------------------------------------------------------------------
// Transition angles
// ---------------------------------------------------------------------------

/// Bracketing controls for the transition-angle searches.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Bracket width at which the bisection stops, in radians.
    pub tol_rad: f64,
    pub max_iter: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { tol_rad: 1e-10, max_iter: 200 }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TransitionAngles {
    pub theta_d: f64,
    pub theta_s: f64,
}

/// Detachment angle: the wedge angle below which no state (2) exists.
///
/// Existence bisection on the sign of the interior maximum of the RH
/// residual; the window containing the merging root pair is tracked by
/// continuation so the detection stays sharp at tangency.
pub fn detachment_angle(pot: &PotentialIncident, cfg: &SearchConfig) -> Result<f64> {
    let hi0 = FRAC_PI_2 - 1e-4;
    let eq_hi = StateTwoEq::new(pot, hi0);
    let roots = eq_hi.find_roots(2000);
    if roots.len() < 2 {
        return Err(Error::Configuration(format!(
            "no root pair near pi/2 for gamma={}, rho0={}, rho1={}",
            pot.gas.gamma, pot.gas.rho0, pot.rho1
        )));
    }
    let mut window = (roots[0], roots[1]);
    let mut lo = 1e-6;
    let mut hi = hi0;
    if StateTwoEq::new(pot, lo).max_on_window(0.0, f64::MAX).0 > 0.0 {
        return Err(Error::Configuration(
            "roots persist down to theta_w ~ 0; no detachment bracket in (0, pi/2)".into(),
        ));
    }
    let mut iters = 0;
    while hi - lo > cfg.tol_rad {
        iters += 1;
        if iters > cfg.max_iter {
            return Err(Error::NonConvergence {
                context: "detachment_angle",
                iterations: iters,
                last: hi - lo,
                history: vec![lo, hi],
            });
        }
        let mid = 0.5 * (lo + hi);
        let eq = StateTwoEq::new(pot, mid);
        let margin = 0.5 * (window.1 - window.0).max(1e-12);
        let (m_local, um) = eq.max_on_window(window.0 - margin, window.1 + margin);
        // a coarse global sweep guards against the window drifting off the bump
        let (m_global, ug) = eq.max_on_window(0.0, f64::MAX);
        let (m, um) = if m_global > m_local { (m_global, ug) } else { (m_local, um) };
        if m > 0.0 {
            hi = mid;
            let w = 0.25 * (window.1 - window.0).max(1e-12);
            window = ((um - w).max(1e-14), um + w);
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Sonic angle: where the a-branch pseudo-speed at P0 equals its sonic speed.
pub fn sonic_angle(pot: &PotentialIncident, cfg: &SearchConfig) -> Result<f64> {
    let theta_d = detachment_angle(pot, cfg)?;
    sonic_angle_from_detachment(pot, cfg, theta_d)
}

fn sonic_angle_from_detachment(
    pot: &PotentialIncident,
    cfg: &SearchConfig,
    theta_d: f64,
) -> Result<f64> {
    let gap = |theta_w: f64| -> Result<f64> {
        match state_two_solve(pot, theta_w)? {
            Some((a, _)) => Ok(a.pseudo_speed_at_p0 - a.c2),
            None => Err(Error::Numerical {
                context: "sonic_angle",
                message: format!("root pair vanished at theta_w = {theta_w} > theta_d"),
            }),
        }
    };
    let mut lo = theta_d + 1e-4;
    let mut hi = FRAC_PI_2 - 1e-6;
    let glo = gap(lo)?;
    if glo > 0.0 {
        // the a-branch is already supersonic at the bottom of the bracket;
        // theta_s collapsed onto theta_d within 1e-4
        return Ok(lo);
    }
    if gap(hi)? < 0.0 {
        return Err(Error::Configuration(
            "a-branch subsonic up to pi/2; no sonic angle bracket".into(),
        ));
    }
    let mut iters = 0;
    while hi - lo > cfg.tol_rad {
        iters += 1;
        if iters > cfg.max_iter {
            return Err(Error::NonConvergence {
                context: "sonic_angle",
                iterations: iters,
                last: hi - lo,
                history: vec![lo, hi],
            });
        }
        let mid = 0.5 * (lo + hi);
        if gap(mid)? > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let theta_s = 0.5 * (lo + hi);
    // supersonic just above, per the sonic-criterion definition
    if gap((theta_s + 1e-4).min(FRAC_PI_2 - 1e-9))? <= 0.0 {
        return Err(Error::Numerical {
            context: "sonic_angle",
            message: "a-branch not supersonic at theta_s + 1e-4".into(),
        });
    }
    Ok(theta_s)
}

/// Both transition angles, sharing one detachment computation.
pub fn transition_angles(pot: &PotentialIncident, cfg: &SearchConfig) -> Result<TransitionAngles> {
    let theta_d = detachment_angle(pot, cfg)?;
    let theta_s = sonic_angle_from_detachment(pot, cfg, theta_d)?;
    Ok(TransitionAngles { theta_d, theta_s })
}

// ---------------------------------------------------------------------------
// Transition-criteria sweep
// ---------------------------------------------------------------------------

/// Abscissa choice for the transition sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepParam {
    /// Downstream density rho1 directly.
    Rho1,
    /// Incident Mach number, mapped to rho1 through the Euler relation.
    Mach,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TransitionRow {
    pub param: f64,
    pub rho1: f64,
    pub theta_d: Option<f64>,
    pub theta_s: Option<f64>,
    pub error: Option<String>,
}

/// Sweep theta_d, theta_s over a parameter range. Per-sample failures are
/// flagged in the row, never abort the sweep.
pub fn transition_curve(
    gas: &GasParams,
    param: SweepParam,
    range: (f64, f64),
    n_samples: usize,
    cfg: &SearchConfig,
) -> Result<Vec<TransitionRow>> {
    if n_samples < 2 {
        return Err(Error::Configuration(format!("n_samples = {n_samples} must be >= 2")));
    }
    if !(range.0 > 0.0 && range.1 > range.0) {
        return Err(Error::Configuration(format!(
            "range ({}, {}) must be positive and increasing",
            range.0, range.1
        )));
    }
    let mut rows = Vec::with_capacity(n_samples);
    for k in 0..n_samples {
        let p = range.0 + (range.1 - range.0) * k as f64 / (n_samples - 1) as f64;
        let rho1 = match param {
            SweepParam::Rho1 => Ok(p),
            SweepParam::Mach => rho1_from_mach(gas, p),
        };
        let angles = rho1
            .and_then(|r1| potential_incident(gas, r1).map(|pot| (r1, pot)))
            .and_then(|(r1, pot)| transition_angles(&pot, cfg).map(|a| (r1, a)));
        match angles {
            Ok((r1, a)) => rows.push(TransitionRow {
                param: p,
                rho1: r1,
                theta_d: Some(a.theta_d),
                theta_s: Some(a.theta_s),
                error: None,
            }),
            Err(e) => rows.push(TransitionRow {
                param: p,
                rho1: f64::NAN,
                theta_d: None,
                theta_s: None,
                error: Some(e.to_string()),
            }),
        }
    }
    Ok(rows)
}
