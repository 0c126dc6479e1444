//! Self-similar geometry of the reflection: the labeled corner points
//! P0..P4, the sonic arc of state (2), and the near-sonic coordinate
//! transforms (xi,eta) <-> (r,theta) <-> (x,y).

use crate::error::{Error, Result};
use crate::local_states::{Branch, PotentialIncident, StateTwo};
use serde::{Deserialize, Serialize};

pub type Point = (f64, f64);

/// Corner points and sonic-circle data of the regular reflection pattern.
///
/// P0: reflection point on the wedge; P1: straight shock meets the sonic
/// circle; P2: curved shock meets the symmetry line (provisional until the
/// free boundary is solved); P3: wedge corner (origin); P4: sonic circle
/// meets the wedge.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct WedgeGeometry {
    pub theta_w: f64,
    pub xi0: f64,
    pub p0: Point,
    pub p1: Point,
    pub p2: Point,
    pub p3: Point,
    pub p4: Point,
    pub sonic_center: Point,
    pub c2: f64,
    /// Polar angle of P1 about the sonic center, minus theta_w (the angular
    /// width of the sonic arc).
    pub y_p1: f64,
}

/// Intersection of the line through `p` with direction `d` and the circle
/// centered at `c` with radius `radius`; returns both parameters t sorted,
/// where points are p + t d.
fn line_circle(p: Point, d: Point, c: Point, radius: f64) -> Option<(f64, f64)> {
    let w = (p.0 - c.0, p.1 - c.1);
    let b = w.0 * d.0 + w.1 * d.1;
    let q = w.0 * w.0 + w.1 * w.1 - radius * radius;
    let disc = b * b - q;
    if disc < 0.0 {
        return None;
    }
    let s = disc.sqrt();
    Some((-b - s, -b + s))
}

/// Build the reflection geometry for an a-branch state (2) that is
/// supersonic at P0 (wedge angles above the sonic angle).
pub fn build_geometry(pot: &PotentialIncident, s2: &StateTwo, theta_w: f64) -> Result<WedgeGeometry> {
    if s2.branch != Branch::A {
        return Err(Error::Geometry("geometry requires the a-branch state (2)".into()));
    }
    if (s2.theta_w - theta_w).abs() > 1e-12 {
        return Err(Error::Geometry(format!(
            "state (2) was solved at theta_w = {}, geometry requested at {}",
            s2.theta_w, theta_w
        )));
    }
    if !s2.is_supersonic_at_p0() {
        return Err(Error::Geometry(format!(
            "state (2) subsonic at P0 (|(U2,V2)| = {:.6e} <= c2 = {:.6e}); below the sonic angle",
            s2.pseudo_speed_at_p0, s2.c2
        )));
    }
    let tw = theta_w.tan();
    let center = s2.sonic_center();
    let c2 = s2.c2;
    let (p1, p0);
    if s2.u2 == 0.0 {
        // normal-reflection limit: vertical straight shock {xi = xi1}
        let xi1 = -pot.rho1 * pot.u1 / (s2.rho2 - pot.rho1);
        if xi1.abs() >= c2 {
            return Err(Error::Geometry(format!(
                "normal-reflection shock xi1 = {xi1:.6} lies outside the sonic circle c2 = {c2:.6}"
            )));
        }
        p1 = (xi1, (c2 * c2 - xi1 * xi1).sqrt());
        p0 = (pot.xi0, f64::INFINITY);
    } else {
        p0 = (pot.xi0, pot.xi0 * tw);
        let d = (-s2.theta_sh.cos(), -s2.theta_sh.sin());
        let (t0, _t1) = line_circle(p0, d, center, c2).ok_or_else(|| {
            Error::Geometry("straight reflected shock S1 misses the sonic circle".into())
        })?;
        if t0 <= 0.0 {
            return Err(Error::Geometry(
                "sonic-circle intersection of S1 lies on the wrong side of P0".into(),
            ));
        }
        p1 = (p0.0 + t0 * d.0, p0.1 + t0 * d.1);
    }
    let p4 = (center.0 + c2 * theta_w.cos(), center.1 + c2 * theta_w.sin());
    let p3 = (0.0, 0.0);
    let y_p1 = {
        let v = (p1.0 - center.0, p1.1 - center.1);
        let theta = v.1.atan2(v.0);
        wrap_angle(theta - theta_w)
    };
    if !(y_p1 > 0.0 && y_p1 < std::f64::consts::PI) {
        return Err(Error::Geometry(format!(
            "P1 not strictly between the wedge ray and its opposite: arc width {y_p1:.6}"
        )));
    }
    // provisional P2: straight extension of S1 down to the symmetry line
    let p2 = if s2.u2 == 0.0 {
        (p1.0, 0.0)
    } else {
        let t = p0.1 / s2.theta_sh.sin();
        (p0.0 - t * s2.theta_sh.cos(), 0.0)
    };
    if !(p2.0 < 0.0) {
        return Err(Error::Geometry(format!(
            "straight shock extension hits the symmetry line at xi = {:.6} >= 0",
            p2.0
        )));
    }
    Ok(WedgeGeometry {
        theta_w,
        xi0: pot.xi0,
        p0,
        p1,
        p2,
        p3,
        p4,
        sonic_center: center,
        c2,
        y_p1,
    })
}

/// Wrap an angle into (-pi, pi].
fn wrap_angle(mut a: f64) -> f64 {
    use std::f64::consts::PI;
    while a > PI {
        a -= 2.0 * PI;
    }
    while a <= -PI {
        a += 2.0 * PI;
    }
    a
}

/// Near-sonic coordinates about the state-(2) sonic circle:
/// x = c2 - r, y = theta - theta_w, with (r, theta) polar about the center.
///
/// The sonic arc maps to {x = 0}, the wedge ray from the center through P4
/// to {y = 0}.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct NearSonicCoords {
    pub center: Point,
    pub c2: f64,
    pub theta_w: f64,
}

impl NearSonicCoords {
    pub fn new(geom: &WedgeGeometry) -> Self {
        NearSonicCoords { center: geom.sonic_center, c2: geom.c2, theta_w: geom.theta_w }
    }

    /// (xi, eta) -> (x, y). Errors at the sonic center (r = 0), where the
    /// angular coordinate is undefined.
    pub fn to_xy(&self, p: Point) -> Result<Point> {
        let v = (p.0 - self.center.0, p.1 - self.center.1);
        let r = (v.0 * v.0 + v.1 * v.1).sqrt();
        if r == 0.0 {
            return Err(Error::domain("to_xy", "query at the sonic center (r = 0)"));
        }
        let theta = v.1.atan2(v.0);
        Ok((self.c2 - r, wrap_angle(theta - self.theta_w)))
    }

    /// (x, y) -> (xi, eta); requires r = c2 - x > 0.
    pub fn from_xy(&self, p: Point) -> Result<Point> {
        let r = self.c2 - p.0;
        if r <= 0.0 {
            return Err(Error::domain(
                "from_xy",
                format!("r = c2 - x = {r:.6e} must be positive"),
            ));
        }
        let theta = p.1 + self.theta_w;
        Ok((self.center.0 + r * theta.cos(), self.center.1 + r * theta.sin()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::local_states::{potential_incident, state_two_solve};
    use crate::thermo::GasParams;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn fixture_geometry(theta_w_deg: f64) -> (PotentialIncident, StateTwo, WedgeGeometry) {
        let gas = GasParams::new(1.4, 1.0, None).unwrap();
        let pot = potential_incident(&gas, 2.0).unwrap();
        let theta_w = theta_w_deg.to_radians();
        let (a, _) = state_two_solve(&pot, theta_w).unwrap().unwrap();
        let geom = build_geometry(&pot, &a, theta_w).unwrap();
        (pot, a, geom)
    }

    #[test]
    fn corner_points_satisfy_definitions() {
        let (pot, s2, g) = fixture_geometry(85.0);
        let dist = |p: Point, q: Point| ((p.0 - q.0).powi(2) + (p.1 - q.1).powi(2)).sqrt();
        // P1 and P4 on the sonic circle
        assert!((dist(g.p1, g.sonic_center) - g.c2).abs() < 1e-12);
        assert!((dist(g.p4, g.sonic_center) - g.c2).abs() < 1e-12);
        // P4 on the wedge line
        assert!((g.p4.1 - g.p4.0 * g.theta_w.tan()).abs() < 1e-12);
        // P0 on the wedge line at xi0
        assert!((g.p0.0 - pot.xi0).abs() < 1e-15);
        assert!((g.p0.1 - pot.xi0 * g.theta_w.tan()).abs() < 1e-10);
        // P1 on S1: phi1 = phi2 there
        let (v1, _) = pot.phi1(g.p1);
        let (v2, _) = s2.phi2(pot.xi0, g.p1);
        assert!((v1 - v2).abs() < 1e-10);
        // sonic center on the wedge line; arc width positive
        assert!((g.sonic_center.1 - g.sonic_center.0 * g.theta_w.tan()).abs() < 1e-14);
        assert!(g.y_p1 > 0.0);
        // P2 provisional on the negative xi-axis, P3 the origin
        assert!(g.p2.1 == 0.0 && g.p2.0 < 0.0);
        assert_eq!(g.p3, (0.0, 0.0));
    }

    #[test]
    fn straight_shock_lies_outside_sonic_circle() {
        // The supersonic side P0P1 must sit in {x <= 0}, i.e. r >= c2.
        let (_, _, g) = fixture_geometry(85.0);
        let coords = NearSonicCoords::new(&g);
        for k in 0..=20 {
            let t = k as f64 / 20.0;
            let p = (g.p1.0 + t * (g.p0.0 - g.p1.0), g.p1.1 + t * (g.p0.1 - g.p1.1));
            let (x, _) = coords.to_xy(p).unwrap();
            assert!(x < 1e-12, "segment point {p:?} has x = {x}");
        }
    }

    #[test]
    fn xy_round_trip_and_anchor_points() {
        let (_, _, g) = fixture_geometry(85.0);
        let coords = NearSonicCoords::new(&g);
        // P4 maps to the origin of (x, y)
        let (x4, y4) = coords.to_xy(g.p4).unwrap();
        assert!(x4.abs() < 1e-13 && y4.abs() < 1e-13);
        // r = c2 - 0.05 on theta = theta_w + 0.2 maps to (0.05, 0.2)
        let p = coords.from_xy((0.05, 0.2)).unwrap();
        let (x, y) = coords.to_xy(p).unwrap();
        assert!((x - 0.05).abs() < 1e-13 && (y - 0.2).abs() < 1e-13);
        // sonic center rejected
        assert!(coords.to_xy(g.sonic_center).is_err());
        assert!(coords.from_xy((g.c2, 0.0)).is_err());

        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut worst = 0.0f64;
        for _ in 0..1000 {
            let x = rng.gen_range(-0.5 * g.c2..0.9 * g.c2);
            let y = rng.gen_range(-1.0..3.0);
            let p = coords.from_xy((x, y)).unwrap();
            let (xb, yb) = coords.to_xy(p).unwrap();
            worst = worst.max((xb - x).abs()).max((yb - y).abs());
        }
        assert!(worst < 1e-13, "round-trip error {worst}");
    }

    #[test]
    fn rejects_subsonic_state() {
        // just above detachment the a-branch is subsonic at P0
        let gas = GasParams::new(1.4, 1.0, None).unwrap();
        let pot = potential_incident(&gas, 2.0).unwrap();
        let theta_w = 49.5f64.to_radians();
        let (a, _) = state_two_solve(&pot, theta_w).unwrap().unwrap();
        assert!(!a.is_supersonic_at_p0());
        assert!(build_geometry(&pot, &a, theta_w).is_err());
    }
}
