//! Uniform grids, finite differences and quadrature on sampled data.

use crate::{Error, Result};
use num_complex::Complex64;
use std::ops::{Add, Mul, Sub};

/// `n` equispaced points on `[-half_width, half_width]`.
pub fn symmetric(half_width: f64, n: usize) -> Result<Vec<f64>> {
    if !(half_width > 0.0) || n < 8 {
        return Err(Error::GridTooCoarse(format!(
            "need half_width > 0 and at least 8 points, got {half_width} and {n}"
        )));
    }
    let h = 2.0 * half_width / (n - 1) as f64;
    Ok((0..n).map(|j| -half_width + h * j as f64).collect())
}

/// Points from `-half_width` to `half_width` spaced by `dx`.
pub fn with_spacing(half_width: f64, dx: f64) -> Result<Vec<f64>> {
    if !(dx > 0.0) {
        return Err(Error::GridTooCoarse(format!("dx = {dx}")));
    }
    let n = (2.0 * half_width / dx).round() as usize + 1;
    Ok((0..n).map(|j| -half_width + dx * j as f64).collect())
}

/// Spacing of a uniform grid, or an error if the grid is not uniform.
pub fn spacing(x: &[f64]) -> Result<f64> {
    if x.len() < 5 {
        return Err(Error::GridTooCoarse(format!("{} points", x.len())));
    }
    let h = (x[x.len() - 1] - x[0]) / (x.len() - 1) as f64;
    if !(h > 0.0) {
        return Err(Error::GridTooCoarse("grid must be increasing".into()));
    }
    for w in x.windows(2) {
        if ((w[1] - w[0]) - h).abs() > 1e-8 * h {
            return Err(Error::GridTooCoarse("grid is not uniform".into()));
        }
    }
    Ok(h)
}

/// Fourth-order finite-difference derivative, one-sided at the ends.
pub fn derivative<T>(f: &[T], h: f64) -> Vec<T>
where
    T: Copy + Add<Output = T> + Sub<Output = T> + Mul<f64, Output = T>,
{
    let n = f.len();
    assert!(n >= 5, "derivative needs at least 5 samples");
    let c = 1.0 / (12.0 * h);
    let mut d = Vec::with_capacity(n);
    d.push((f[1] * 48.0 - f[0] * 25.0 - f[2] * 36.0 + f[3] * 16.0 - f[4] * 3.0) * c);
    d.push((f[2] * 18.0 - f[0] * 3.0 - f[1] * 10.0 - f[3] * 6.0 + f[4]) * c);
    for j in 2..n - 2 {
        d.push(((f[j + 1] - f[j - 1]) * 8.0 - f[j + 2] + f[j - 2]) * c);
    }
    d.push((f[n - 1] * 3.0 + f[n - 2] * 10.0 - f[n - 3] * 18.0 + f[n - 4] * 6.0 - f[n - 5]) * c);
    d.push((f[n - 1] * 25.0 - f[n - 2] * 48.0 + f[n - 3] * 36.0 - f[n - 4] * 16.0 + f[n - 5] * 3.0) * c);
    d
}

/// Sixth-order centred derivative at interior index `j` (`3 <= j < n - 3`).
#[inline]
pub fn centered6<T>(f: &[T], j: usize, h: f64) -> T
where
    T: Copy + Add<Output = T> + Sub<Output = T> + Mul<f64, Output = T>,
{
    ((f[j + 1] - f[j - 1]) * 45.0 - (f[j + 2] - f[j - 2]) * 9.0 + (f[j + 3] - f[j - 3])) * (1.0 / (60.0 * h))
}

pub fn trapezoid(f: &[f64], h: f64) -> f64 {
    match f.len() {
        0 | 1 => 0.0,
        n => h * (f.iter().sum::<f64>() - 0.5 * (f[0] + f[n - 1])),
    }
}

/// Running integral `F_j = int_{x_0}^{x_j} f`, fourth order.
pub fn cumulative(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    assert!(n >= 4, "cumulative integration needs at least 4 samples");
    let c = h / 24.0;
    let mut out = vec![0.0; n];
    for j in 0..n - 1 {
        let step = if j == 0 {
            9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3]
        } else if j == n - 2 {
            f[n - 4] - 5.0 * f[n - 3] + 19.0 * f[n - 2] + 9.0 * f[n - 1]
        } else {
            -f[j - 1] + 13.0 * f[j] + 13.0 * f[j + 1] - f[j + 2]
        };
        out[j + 1] = out[j] + c * step;
    }
    out
}

/// Local polynomial interpolation on a uniform grid.
///
/// Uses the `stencil` nearest samples in barycentric form. Points outside
/// the grid evaluate to zero.
pub struct LocalInterpolant<'a> {
    x0: f64,
    h: f64,
    values: &'a [Complex64],
    weights: Vec<f64>,
}

impl<'a> LocalInterpolant<'a> {
    pub fn new(x: &[f64], values: &'a [Complex64], stencil: usize) -> Result<Self> {
        let h = spacing(x)?;
        if values.len() != x.len() || stencil < 2 || stencil > x.len() {
            return Err(Error::MeshMismatch("interpolation stencil does not fit the grid".into()));
        }
        // equispaced barycentric weights (-1)^k C(m, k)
        let m = stencil - 1;
        let mut weights = Vec::with_capacity(stencil);
        let mut binom = 1.0;
        for k in 0..stencil {
            weights.push(if k % 2 == 0 { binom } else { -binom });
            binom = binom * (m - k) as f64 / (k + 1) as f64;
        }
        Ok(Self { x0: x[0], h, values, weights })
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        let n = self.values.len();
        let s = (x - self.x0) / self.h;
        if s < -1e-9 || s > (n - 1) as f64 + 1e-9 {
            return Complex64::new(0.0, 0.0);
        }
        let k = self.weights.len();
        let start = (s.round() as isize - (k as isize - 1) / 2).clamp(0, (n - k) as isize) as usize;
        let mut num = Complex64::new(0.0, 0.0);
        let mut den = 0.0;
        for (i, w) in self.weights.iter().enumerate() {
            let d = s - (start + i) as f64;
            if d.abs() < 1e-13 {
                return self.values[start + i];
            }
            let c = w / d;
            num += self.values[start + i] * c;
            den += c;
        }
        num / den
    }
}
