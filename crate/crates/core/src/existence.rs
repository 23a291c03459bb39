//! Existence domain of new-model solitons in the `(gamma, omega)` plane.

use crate::roots;
use crate::{Error, Result};
use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

/// Root `X` of `1 + X tanh X = cosh^2(X) / 2` and the threshold
/// `gamma* = sech(X) sqrt(tanh(X) / X) / 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaStar {
    pub x_root: f64,
    pub gamma_star: f64,
}

pub fn gamma_star() -> Result<GammaStar> {
    let f = |x: f64| 1.0 + x * x.tanh() - 0.5 * x.cosh().powi(2);
    let x_root = roots::bisect(f, 0.5, 3.0, 1e-15)?;
    let gamma_star = 0.5 / x_root.cosh() * (x_root.tanh() / x_root).sqrt();
    Ok(GammaStar { x_root, gamma_star })
}

/// `U(0)` on the high-frequency branch as a function of `chi0`.
pub fn u_at_origin(chi0: f64, gamma: f64) -> f64 {
    2.0 / (0.5 * chi0).cosh().powi(2) + 2.0 * gamma * gamma * chi0 * chi0 - 1.0
}

/// Frequencies where `U(0)` changes sign on the high-frequency branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OmegaAB {
    /// `U(0) < 0` for `omega_b < omega < omega_a`.
    Pair { omega_a: f64, omega_b: f64 },
    /// `gamma >= gamma*`: `U(0) > 0` throughout.
    None,
}

pub fn omega_ab(gamma: f64) -> Result<OmegaAB> {
    if !(0.0..1.0).contains(&gamma) {
        return Err(Error::param(format!("gamma must lie in [0, 1), got {gamma}")));
    }
    let h = |c: f64| u_at_origin(c, gamma);
    let to_omega = |c: f64| FRAC_1_SQRT_2 / c.tanh();
    if gamma == 0.0 {
        let chi_a = 2.0 * SQRT_2.acosh();
        return Ok(OmegaAB::Pair { omega_a: to_omega(chi_a), omega_b: FRAC_1_SQRT_2 });
    }
    let upper = 1.0 / (SQRT_2 * gamma) + 1.0;
    let (c_min, h_min) = roots::golden_max(|c| -h(c), 1e-6, upper, 1e-12);
    if -h_min >= 0.0 {
        return Ok(OmegaAB::None);
    }
    let chi_a = roots::bisect(h, 1e-9, c_min, 1e-14)?;
    let chi_b = roots::bisect(h, c_min, upper, 1e-14)?;
    Ok(OmegaAB::Pair { omega_a: to_omega(chi_a), omega_b: to_omega(chi_b) })
}

/// `chi0` of the low-frequency branch, `tanh chi0 = sqrt2 omega`.
fn low_chi0(omega: f64) -> f64 {
    (SQRT_2 * omega).atanh()
}

/// `F(xi) - G(xi)` whose negative root fixes the low-frequency boundary.
pub fn boundary_function(omega: f64, xi: f64) -> f64 {
    let c = 2.0 * low_chi0(omega);
    let f = xi / xi.tanh();
    let g = (3.0 + (2.0 * xi + c).cosh()) / (3.0 + (3.0 * xi + c).cosh() / xi.cosh());
    f - g
}

/// Threshold `gamma_c(omega)` for `0 < omega < 1/sqrt2`, with the root `xi_c`.
pub fn gamma_c_with_root(omega: f64) -> Result<(f64, f64)> {
    if !(omega > 0.0 && omega < FRAC_1_SQRT_2) {
        return Err(Error::param(format!("omega must lie in (0, 1/sqrt 2), got {omega}")));
    }
    let chi0 = low_chi0(omega);
    let rho = (1.0 - 2.0 * omega * omega).sqrt();
    let f = |xi: f64| boundary_function(omega, xi);
    let mut hi = -1e-4 * chi0.min(1.0);
    // the bracket end must sit on the negative side of F - G
    while f(hi) >= 0.0 && hi > -1e-300 {
        hi *= 0.1;
    }
    let fd = |xi: f64| {
        let h = 1e-7 * (1.0 + xi.abs());
        (f(xi), (f(xi + h) - f(xi - h)) / (2.0 * h))
    };
    let xi = roots::safeguarded_newton(fd, -20.0, hi, 1e-14)?;
    let gamma_c = rho * (xi.sinh() / xi) * (1.0 + 0.5 * (xi + chi0).sinh().powi(2)).sqrt();
    Ok((gamma_c, xi))
}

pub fn gamma_c(omega: f64) -> Result<f64> {
    gamma_c_with_root(omega).map(|(g, _)| g)
}

/// Lowest soliton frequency `omega_c(gamma)`; `1/sqrt2` at `gamma = 0`.
pub fn omega_c(gamma: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&gamma) {
        return Err(Error::param(format!("gamma must lie in [0, 1), got {gamma}")));
    }
    if gamma == 0.0 {
        return Ok(FRAC_1_SQRT_2);
    }
    let lo = ((1.0 - gamma * gamma) / 2.0).sqrt();
    let hi = FRAC_1_SQRT_2 * (1.0 - 1e-13);
    let g = |w: f64| gamma_c(w).map(|v| v - gamma).unwrap_or(f64::NAN);
    if g(hi) > 0.0 {
        return Ok(FRAC_1_SQRT_2);
    }
    roots::bisect(g, lo * (1.0 + 1e-14), hi, 1e-13)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Classification {
    HighFreqBranch { to_upper: f64, to_lower: f64 },
    LowFreqBranch { to_upper: f64, to_lower: f64 },
    Outside,
}

impl Classification {
    pub fn is_inside(&self) -> bool {
        !matches!(self, Classification::Outside)
    }
}

/// Which branch, if any, carries a soliton at `(omega, gamma)`. The distances
/// are to the gap edge `sqrt(1 - gamma^2)` and to the lower limit of the
/// branch (the `1/sqrt2` seam or `omega_c`).
pub fn classify(omega: f64, gamma: f64) -> Result<Classification> {
    if !omega.is_finite() || !gamma.is_finite() {
        return Err(Error::param("omega and gamma must be finite"));
    }
    if !(0.0..1.0).contains(&gamma) || omega <= 0.0 || omega * omega + gamma * gamma >= 1.0 {
        return Ok(Classification::Outside);
    }
    let to_upper = (1.0 - gamma * gamma).sqrt() - omega;
    if 2.0 * omega * omega > 1.0 {
        return Ok(Classification::HighFreqBranch { to_upper, to_lower: omega - FRAC_1_SQRT_2 });
    }
    if gamma == 0.0 {
        return Ok(Classification::Outside);
    }
    let wc = omega_c(gamma)?;
    if omega > wc {
        Ok(Classification::LowFreqBranch { to_upper, to_lower: omega - wc })
    } else {
        Ok(Classification::Outside)
    }
}
