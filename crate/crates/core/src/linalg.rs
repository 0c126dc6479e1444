//! Symmetric banded LDL^T factorization for the mapped-grid elliptic solves.
//!
//! Natural row-major node ordering gives bandwidth nx+2 on an (nx+1)x(ny+1)
//! grid; the direct factorization is deterministic, which the byte-identical
//! output contract relies on.

use crate::error::{Error, Result};

/// Symmetric positive definite banded matrix, lower band stored by row:
/// `band[i*(bw+1) + (j - i + bw)]` holds A[i][j] for j in [i-bw, i].
pub struct SymBanded {
    pub n: usize,
    pub bw: usize,
    band: Vec<f64>,
}

impl SymBanded {
    pub fn zeros(n: usize, bw: usize) -> Self {
        SymBanded { n, bw, band: vec![0.0; n * (bw + 1)] }
    }

    #[inline]
    fn slot(&self, i: usize, j: usize) -> usize {
        debug_assert!(j <= i && i - j <= self.bw);
        i * (self.bw + 1) + (j + self.bw - i)
    }

    /// Add `v` to A[i][j] (and by symmetry A[j][i]); only the lower triangle
    /// is stored, so callers may pass (i, j) in either order.
    #[inline]
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let (hi, lo) = if i >= j { (i, j) } else { (j, i) };
        let s = self.slot(hi, lo);
        self.band[s] += v;
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (hi, lo) = if i >= j { (i, j) } else { (j, i) };
        if hi - lo > self.bw {
            return 0.0;
        }
        self.band[self.slot(hi, lo)]
    }

    /// Overwrite row/column `i` with the identity row (Dirichlet elimination).
    /// The caller is responsible for moving the eliminated couplings to the
    /// right-hand side first.
    pub fn set_identity_row(&mut self, i: usize) {
        let lo = i.saturating_sub(self.bw);
        for j in lo..=i {
            let s = self.slot(i, j);
            self.band[s] = if j == i { 1.0 } else { 0.0 };
        }
        let hi = (i + self.bw).min(self.n - 1);
        for r in (i + 1)..=hi {
            let s = self.slot(r, i);
            self.band[s] = 0.0;
        }
    }

    /// In-place LDL^T factorization. Fails on a non-positive pivot, which for
    /// our assemblies signals a loss of ellipticity (a bug, not data).
    pub fn factorize(mut self) -> Result<BandedFactor> {
        let (n, bw) = (self.n, self.bw);
        let mut d = vec![0.0f64; n];
        for i in 0..n {
            let jlo = i.saturating_sub(bw);
            for j in jlo..i {
                let klo = jlo.max(j.saturating_sub(bw));
                let mut sum = self.band[self.slot(i, j)];
                for k in klo..j {
                    sum -= self.band[self.slot(i, k)] * d[k] * self.band[self.slot(j, k)];
                }
                let s = self.slot(i, j);
                self.band[s] = sum / d[j];
            }
            let mut diag = self.band[self.slot(i, i)];
            for k in jlo..i {
                let l = self.band[self.slot(i, k)];
                diag -= l * l * d[k];
            }
            if !(diag > 0.0) || !diag.is_finite() {
                return Err(Error::Numerical {
                    context: "banded LDL^T",
                    message: format!("non-positive pivot {diag:.6e} at row {i}"),
                });
            }
            d[i] = diag;
            let s = self.slot(i, i);
            self.band[s] = 1.0;
        }
        Ok(BandedFactor { n, bw, band: self.band, d })
    }
}

pub struct BandedFactor {
    n: usize,
    bw: usize,
    band: Vec<f64>,
    d: Vec<f64>,
}

impl BandedFactor {
    #[inline]
    fn slot(&self, i: usize, j: usize) -> usize {
        i * (self.bw + 1) + (j + self.bw - i)
    }

    /// Solve A x = b.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let (n, bw) = (self.n, self.bw);
        let mut x = b.to_vec();
        // forward: L z = b
        for i in 0..n {
            let jlo = i.saturating_sub(bw);
            let mut v = x[i];
            for j in jlo..i {
                v -= self.band[self.slot(i, j)] * x[j];
            }
            x[i] = v;
        }
        // diagonal
        for i in 0..n {
            x[i] /= self.d[i];
        }
        // backward: L^T x = z
        for i in (0..n).rev() {
            let hi = (i + bw).min(n - 1);
            let mut v = x[i];
            for r in (i + 1)..=hi {
                v -= self.band[self.slot(r, i)] * x[r];
            }
            x[i] = v;
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn solves_random_spd_banded_systems() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for case in 0..20 {
            let n = rng.gen_range(5..60);
            let bw = rng.gen_range(1..6.min(n));
            let mut a = SymBanded::zeros(n, bw);
            // diagonally dominant symmetric band
            for i in 0..n {
                for j in i.saturating_sub(bw)..i {
                    a.add(i, j, rng.gen_range(-1.0..1.0));
                }
            }
            for i in 0..n {
                let mut row = 0.0;
                for j in i.saturating_sub(bw)..=(i + bw).min(n - 1) {
                    if j != i {
                        row += a.get(i, j).abs();
                    }
                }
                a.add(i, i, row + rng.gen_range(0.5..2.0));
            }
            let x_true: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let mut b = vec![0.0; n];
            for i in 0..n {
                for j in i.saturating_sub(bw)..=(i + bw).min(n - 1) {
                    b[i] += a.get(i, j) * x_true[j];
                }
            }
            let x = a.factorize().unwrap().solve(&b);
            for i in 0..n {
                assert!((x[i] - x_true[i]).abs() < 1e-9, "case {case} row {i}");
            }
        }
    }

    #[test]
    fn rejects_indefinite_matrix() {
        let mut a = SymBanded::zeros(3, 1);
        a.add(0, 0, 1.0);
        a.add(1, 1, -2.0);
        a.add(2, 2, 1.0);
        assert!(a.factorize().is_err());
    }
}
