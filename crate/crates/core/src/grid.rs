//! Boundary-fitted structured grid on the subsonic region Omega.
//!
//! Omega is the curvilinear quadrilateral P1 P2 P3 P4 bounded by the sonic
//! arc (P4->P1), the curved shock (P1->P2), the symmetry line (P2->P3) and
//! the wedge (P3->P4). The grid is a transfinite (Coons) interpolation of the
//! four sides on the logical unit square:
//!
//!   s in [0,1]: sonic arc (s=0) to symmetry line (s=1), geometrically graded
//!               toward the arc where the equation degenerates;
//!   t in [0,1]: wedge (t=0) to shock (t=1).
//!
//! The wedge side is the straight segment P3P4; it passes through the sonic
//! center, so no polar singularity enters the map.

use crate::domain::{NearSonicCoords, Point, WedgeGeometry};
use crate::error::{Error, Result};
use crate::free_boundary::ShockCurve;

/// Boundary side classification for nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryKind {
    Interior,
    Sonic,
    Shock,
    Wedge,
    Symmetry,
}

/// Structured curvilinear grid with (nx+1) x (ny+1) nodes.
pub struct Grid2D {
    pub nx: usize,
    pub ny: usize,
    /// Logical s per i (graded), t per j (uniform).
    pub s_of_i: Vec<f64>,
    pub t_of_j: Vec<f64>,
    /// Node physical coordinates, row-major: idx = j*(nx+1) + i.
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    /// Near-sonic x = c2 - r per node.
    pub xband: Vec<f64>,
    pub coords: NearSonicCoords,
    pub geom: WedgeGeometry,
}

/// Geometric grading of [0,1] into n cells with ratio `g` (>1 clusters the
/// first cells).
pub fn graded_coords(n: usize, g: f64) -> Vec<f64> {
    let mut s = Vec::with_capacity(n + 1);
    if (g - 1.0).abs() < 1e-12 {
        for k in 0..=n {
            s.push(k as f64 / n as f64);
        }
    } else {
        let denom = g.powi(n as i32) - 1.0;
        for k in 0..=n {
            s.push((g.powi(k as i32) - 1.0) / denom);
        }
    }
    s
}

impl Grid2D {
    #[inline]
    pub fn idx(&self, i: usize, j: usize) -> usize {
        j * (self.nx + 1) + i
    }

    #[inline]
    pub fn node(&self, i: usize, j: usize) -> Point {
        let k = self.idx(i, j);
        (self.xs[k], self.ys[k])
    }

    pub fn n_nodes(&self) -> usize {
        (self.nx + 1) * (self.ny + 1)
    }

    /// Bandwidth of the node adjacency under row-major ordering.
    pub fn bandwidth(&self) -> usize {
        self.nx + 2
    }

    pub fn boundary_kind(&self, i: usize, j: usize) -> BoundaryKind {
        // Dirichlet sonic side wins the corners it touches (P4, P1);
        // every boundary node gets exactly one classification.
        if i == 0 {
            BoundaryKind::Sonic
        } else if j == 0 {
            BoundaryKind::Wedge
        } else if j == self.ny {
            BoundaryKind::Shock
        } else if i == self.nx {
            BoundaryKind::Symmetry
        } else {
            BoundaryKind::Interior
        }
    }

    /// Build the transfinite grid for the given geometry and shock curve.
    pub fn build(
        geom: &WedgeGeometry,
        shock: &ShockCurve,
        nx: usize,
        ny: usize,
        grading: f64,
    ) -> Result<Grid2D> {
        if nx < 4 || ny < 4 {
            return Err(Error::Configuration(format!("grid {nx}x{ny} too coarse; need >= 4x4")));
        }
        let s_of_i = graded_coords(nx, grading);
        let t_of_j: Vec<f64> = (0..=ny).map(|j| j as f64 / ny as f64).collect();

        let center = geom.sonic_center;
        let c2 = geom.c2;
        let (p1, p2, p3, p4) = (geom.p1, shock.p2(), geom.p3, geom.p4);
        if (shock.p1().0 - p1.0).abs() + (shock.p1().1 - p1.1).abs() > 1e-9 * c2 {
            return Err(Error::Geometry(
                "shock curve is not anchored at P1 of the geometry".into(),
            ));
        }
        // side curves
        let arc = |t: f64| -> Point {
            let th = geom.theta_w + t * geom.y_p1;
            (center.0 + c2 * th.cos(), center.1 + c2 * th.sin())
        };
        let axis = |t: f64| -> Point { (t * p2.0, 0.0) };
        let wedge = |s: f64| -> Point { ((1.0 - s) * p4.0, (1.0 - s) * p4.1) };
        let shk = |s: f64| -> Point { shock.point_at_frac(s) };

        let n_nodes = (nx + 1) * (ny + 1);
        let mut xs = vec![0.0; n_nodes];
        let mut ys = vec![0.0; n_nodes];
        for j in 0..=ny {
            let t = t_of_j[j];
            let a = arc(t);
            let b = axis(t);
            for i in 0..=nx {
                let s = s_of_i[i];
                let w = wedge(s);
                let sh = shk(s);
                let mut x = (1.0 - s) * a.0 + s * b.0 + (1.0 - t) * w.0 + t * sh.0
                    - ((1.0 - s) * (1.0 - t) * p4.0
                        + (1.0 - s) * t * p1.0
                        + s * (1.0 - t) * p3.0
                        + s * t * p2.0);
                let mut y = (1.0 - s) * a.1 + s * b.1 + (1.0 - t) * w.1 + t * sh.1
                    - ((1.0 - s) * (1.0 - t) * p4.1
                        + (1.0 - s) * t * p1.1
                        + s * (1.0 - t) * p3.1
                        + s * t * p2.1);
                // pin the boundaries exactly (the Coons formula already
                // reproduces them; this removes rounding drift)
                if j == 0 {
                    x = w.0;
                    y = w.1;
                } else if j == ny {
                    x = sh.0;
                    y = sh.1;
                } else if i == 0 {
                    x = a.0;
                    y = a.1;
                } else if i == nx {
                    x = b.0;
                    y = b.1;
                }
                let k = j * (nx + 1) + i;
                xs[k] = x;
                ys[k] = y;
            }
        }
        let coords = NearSonicCoords::new(geom);
        let xband: Vec<f64> = xs
            .iter()
            .zip(&ys)
            .map(|(&x, &y)| {
                let v = (x - center.0, y - center.1);
                c2 - (v.0 * v.0 + v.1 * v.1).sqrt()
            })
            .collect();
        let grid =
            Grid2D { nx, ny, s_of_i, t_of_j, xs, ys, xband, coords, geom: *geom };
        grid.check_jacobians()?;
        Ok(grid)
    }

    /// Reject folded or degenerate cells: the bilinear map of every element
    /// must have positive Jacobian at its four corners.
    fn check_jacobians(&self) -> Result<()> {
        for j in 0..self.ny {
            for i in 0..self.nx {
                let q = [
                    self.node(i, j),
                    self.node(i + 1, j),
                    self.node(i + 1, j + 1),
                    self.node(i, j + 1),
                ];
                for c in 0..4 {
                    let a = q[c];
                    let b = q[(c + 1) % 4];
                    let d = q[(c + 3) % 4];
                    let det = (b.0 - a.0) * (d.1 - a.1) - (b.1 - a.1) * (d.0 - a.0);
                    if det <= 0.0 {
                        return Err(Error::Geometry(format!(
                            "mapping folds at element ({i},{j}) corner {c}: jacobian {det:.3e}; \
                             the domain violates the graph condition for this configuration"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Physical gradient of a nodal field at node (i, j) via second-order
    /// logical differences (one-sided at boundaries) and the inverse metric.
    pub fn gradient_at_node(&self, f: &[f64], i: usize, j: usize) -> (f64, f64) {
        let d_ds = |g: &dyn Fn(usize, usize) -> f64| -> f64 {
            if i == 0 {
                let h1 = self.s_of_i[1] - self.s_of_i[0];
                let h2 = self.s_of_i[2] - self.s_of_i[1];
                // second-order one-sided on a nonuniform pair
                let a = -(2.0 * h1 + h2) / (h1 * (h1 + h2));
                let b = (h1 + h2) / (h1 * h2);
                let c = -h1 / (h2 * (h1 + h2));
                a * g(0, j) + b * g(1, j) + c * g(2, j)
            } else if i == self.nx {
                let h1 = self.s_of_i[i] - self.s_of_i[i - 1];
                let h2 = self.s_of_i[i - 1] - self.s_of_i[i - 2];
                let a = (2.0 * h1 + h2) / (h1 * (h1 + h2));
                let b = -(h1 + h2) / (h1 * h2);
                let c = h1 / (h2 * (h1 + h2));
                a * g(i, j) + b * g(i - 1, j) + c * g(i - 2, j)
            } else {
                let hm = self.s_of_i[i] - self.s_of_i[i - 1];
                let hp = self.s_of_i[i + 1] - self.s_of_i[i];
                // nonuniform central difference
                (g(i + 1, j) * hm * hm - g(i - 1, j) * hp * hp
                    + g(i, j) * (hp * hp - hm * hm))
                    / (hm * hp * (hm + hp))
            }
        };
        let d_dt = |g: &dyn Fn(usize, usize) -> f64| -> f64 {
            let h = 1.0 / self.ny as f64;
            if j == 0 {
                (-3.0 * g(i, 0) + 4.0 * g(i, 1) - g(i, 2)) / (2.0 * h)
            } else if j == self.ny {
                (3.0 * g(i, j) - 4.0 * g(i, j - 1) + g(i, j - 2)) / (2.0 * h)
            } else {
                (g(i, j + 1) - g(i, j - 1)) / (2.0 * h)
            }
        };
        let fx = |a: usize, b: usize| self.xs[self.idx(a, b)];
        let fy = |a: usize, b: usize| self.ys[self.idx(a, b)];
        let fv = |a: usize, b: usize| f[self.idx(a, b)];
        let (x_s, x_t) = (d_ds(&fx), d_dt(&fx));
        let (y_s, y_t) = (d_ds(&fy), d_dt(&fy));
        let (f_s, f_t) = (d_ds(&fv), d_dt(&fv));
        let det = x_s * y_t - x_t * y_s;
        ((f_s * y_t - f_t * y_s) / det, (f_t * x_s - f_s * x_t) / det)
    }

    /// Locate the element containing a physical point and its local bilinear
    /// coordinates; None if outside the grid.
    pub fn locate(&self, p: Point) -> Option<(usize, usize, f64, f64)> {
        // coarse pass: nearest node
        let mut best = (0usize, 0usize, f64::MAX);
        for j in 0..=self.ny {
            for i in 0..=self.nx {
                let q = self.node(i, j);
                let d = (q.0 - p.0).powi(2) + (q.1 - p.1).powi(2);
                if d < best.2 {
                    best = (i, j, d);
                }
            }
        }
        // try elements in a ring around the nearest node, nearest first
        let (bi, bj) = (best.0, best.1);
        for radius in 0..=3usize {
            for j in bj.saturating_sub(radius + 1)..=(bj + radius).min(self.ny - 1) {
                for i in bi.saturating_sub(radius + 1)..=(bi + radius).min(self.nx - 1) {
                    if let Some((u, v)) = self.invert_bilinear(i, j, p) {
                        return Some((i, j, u, v));
                    }
                }
            }
        }
        None
    }

    /// Newton inversion of the bilinear map on element (i, j); returns local
    /// (u, v) in [0,1]^2 (with a small tolerance) if p lies inside.
    fn invert_bilinear(&self, i: usize, j: usize, p: Point) -> Option<(f64, f64)> {
        let q00 = self.node(i, j);
        let q10 = self.node(i + 1, j);
        let q01 = self.node(i, j + 1);
        let q11 = self.node(i + 1, j + 1);
        let map = |u: f64, v: f64| -> (Point, [f64; 4]) {
            let x = (1.0 - u) * (1.0 - v) * q00.0
                + u * (1.0 - v) * q10.0
                + (1.0 - u) * v * q01.0
                + u * v * q11.0;
            let y = (1.0 - u) * (1.0 - v) * q00.1
                + u * (1.0 - v) * q10.1
                + (1.0 - u) * v * q01.1
                + u * v * q11.1;
            let dxu = (1.0 - v) * (q10.0 - q00.0) + v * (q11.0 - q01.0);
            let dxv = (1.0 - u) * (q01.0 - q00.0) + u * (q11.0 - q10.0);
            let dyu = (1.0 - v) * (q10.1 - q00.1) + v * (q11.1 - q01.1);
            let dyv = (1.0 - u) * (q01.1 - q00.1) + u * (q11.1 - q10.1);
            ((x, y), [dxu, dxv, dyu, dyv])
        };
        let (mut u, mut v) = (0.5, 0.5);
        for _ in 0..30 {
            let ((x, y), jm) = map(u, v);
            let (rx, ry) = (p.0 - x, p.1 - y);
            let det = jm[0] * jm[3] - jm[1] * jm[2];
            if det.abs() < 1e-300 {
                return None;
            }
            let du = (rx * jm[3] - ry * jm[1]) / det;
            let dv = (ry * jm[0] - rx * jm[2]) / det;
            u += du;
            v += dv;
            if du.abs() + dv.abs() < 1e-13 {
                break;
            }
            if !(u.is_finite() && v.is_finite()) || u < -2.0 || u > 3.0 || v < -2.0 || v > 3.0 {
                return None;
            }
        }
        let tol = 1e-9;
        if (-tol..=1.0 + tol).contains(&u) && (-tol..=1.0 + tol).contains(&v) {
            Some((u.clamp(0.0, 1.0), v.clamp(0.0, 1.0)))
        } else {
            None
        }
    }

    /// Bilinear interpolation of a nodal field at a physical point.
    pub fn value_at(&self, f: &[f64], p: Point) -> Option<f64> {
        let (i, j, u, v) = self.locate(p)?;
        let f00 = f[self.idx(i, j)];
        let f10 = f[self.idx(i + 1, j)];
        let f01 = f[self.idx(i, j + 1)];
        let f11 = f[self.idx(i + 1, j + 1)];
        Some((1.0 - u) * (1.0 - v) * f00 + u * (1.0 - v) * f10 + (1.0 - u) * v * f01 + u * v * f11)
    }

    /// Gradient of a nodal field at a physical point (per-element bilinear).
    pub fn grad_at(&self, f: &[f64], p: Point) -> Option<(f64, f64)> {
        let (i, j, u, v) = self.locate(p)?;
        let q00 = self.node(i, j);
        let q10 = self.node(i + 1, j);
        let q01 = self.node(i, j + 1);
        let q11 = self.node(i + 1, j + 1);
        let f00 = f[self.idx(i, j)];
        let f10 = f[self.idx(i + 1, j)];
        let f01 = f[self.idx(i, j + 1)];
        let f11 = f[self.idx(i + 1, j + 1)];
        let dxu = (1.0 - v) * (q10.0 - q00.0) + v * (q11.0 - q01.0);
        let dxv = (1.0 - u) * (q01.0 - q00.0) + u * (q11.0 - q10.0);
        let dyu = (1.0 - v) * (q10.1 - q00.1) + v * (q11.1 - q01.1);
        let dyv = (1.0 - u) * (q01.1 - q00.1) + u * (q11.1 - q10.1);
        let dfu = (1.0 - v) * (f10 - f00) + v * (f11 - f01);
        let dfv = (1.0 - u) * (f01 - f00) + u * (f11 - f10);
        let det = dxu * dyv - dxv * dyu;
        Some(((dfu * dyv - dfv * dxv) / det, (dfv * dxu - dfu * dyu) / det))
    }
}

/// Nodal scalar field over a Grid2D.
#[derive(Debug, Clone)]
pub struct ScalarField {
    pub v: Vec<f64>,
}

impl ScalarField {
    pub fn zeros(grid: &Grid2D) -> Self {
        ScalarField { v: vec![0.0; grid.n_nodes()] }
    }

    /// Sample an analytic function at the grid nodes.
    pub fn from_fn(grid: &Grid2D, f: impl Fn(Point) -> f64) -> Self {
        let v = grid.xs.iter().zip(&grid.ys).map(|(&x, &y)| f((x, y))).collect();
        ScalarField { v }
    }

    pub fn max_abs_diff(&self, other: &ScalarField) -> f64 {
        self.v
            .iter()
            .zip(&other.v)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}
