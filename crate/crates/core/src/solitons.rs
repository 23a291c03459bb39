//! Closed-form solitons.
//!
//! A profile stores `u = a e^{i theta}`, `v = -b e^{i phi}` at `t = 0`;
//! the full solution carries the factor `e^{-i omega t}`.

use crate::evolution::FieldState;
use crate::models::ModelKind;
use crate::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::FRAC_1_SQRT_2;

#[derive(Debug, Clone, PartialEq)]
pub struct SolitonProfile {
    pub grid: Vec<f64>,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub theta: Vec<f64>,
    pub phi: Vec<f64>,
    pub omega: f64,
    pub gamma: f64,
    pub model: ModelKind,
}

impl SolitonProfile {
    pub fn u(&self) -> Vec<Complex64> {
        self.a.iter().zip(&self.theta).map(|(a, t)| Complex64::from_polar(*a, *t)).collect()
    }

    pub fn v(&self) -> Vec<Complex64> {
        self.b.iter().zip(&self.phi).map(|(b, p)| -Complex64::from_polar(*b, *p)).collect()
    }

    /// The stationary solution evaluated at time `t`.
    pub fn state_at(&self, t: f64) -> FieldState {
        let rot = Complex64::from_polar(1.0, -self.omega * t);
        FieldState {
            grid: self.grid.clone(),
            u: self.u().into_iter().map(|z| z * rot).collect(),
            v: self.v().into_iter().map(|z| z * rot).collect(),
            time: t,
        }
    }

    /// Largest of `|u|`, `|v|` at the two ends of the grid.
    pub fn boundary_amplitude(&self) -> f64 {
        let n = self.grid.len();
        [self.a[0], self.b[0], self.a[n - 1], self.b[n - 1]].into_iter().fold(0.0, f64::max)
    }

    pub(crate) fn from_fields(
        grid: &[f64],
        fields: impl Iterator<Item = (f64, f64, f64, f64)>,
        omega: f64,
        gamma: f64,
        model: ModelKind,
    ) -> Self {
        let n = grid.len();
        let mut p = SolitonProfile {
            grid: grid.to_vec(),
            a: Vec::with_capacity(n),
            b: Vec::with_capacity(n),
            theta: Vec::with_capacity(n),
            phi: Vec::with_capacity(n),
            omega,
            gamma,
            model,
        };
        for (a, b, th, ph) in fields {
            p.a.push(a);
            p.b.push(b);
            p.theta.push(th);
            p.phi.push(ph);
        }
        p
    }
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.len() < 2 || grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::GridTooCoarse("grid must be strictly increasing".into()));
    }
    Ok(())
}

/// Frequency of the PT Thirring soliton with parameter `alpha`.
pub fn thirring_omega(gamma: f64, alpha: f64) -> f64 {
    (1.0 - gamma * gamma).sqrt() * (2.0 * alpha).cos()
}

/// Inverse of [`thirring_omega`].
pub fn thirring_alpha(gamma: f64, omega: f64) -> Result<f64> {
    let top = (1.0 - gamma * gamma).sqrt();
    if !(0.0..1.0).contains(&gamma) || !(omega.abs() < top) {
        return Err(Error::param(format!("need |omega| < sqrt(1 - gamma^2) = {top}, got {omega}")));
    }
    Ok(0.5 * (omega / top).acos())
}

/// PT Thirring soliton, `0 < alpha < pi/2`, `0 <= gamma < 1`.
pub fn thirring_soliton(gamma: f64, alpha: f64, grid: &[f64]) -> Result<SolitonProfile> {
    if !(0.0..1.0).contains(&gamma) {
        return Err(Error::param(format!("gamma must lie in [0, 1), got {gamma}")));
    }
    if !(alpha > 0.0 && alpha < std::f64::consts::FRAC_PI_2) {
        return Err(Error::param(format!("alpha must lie in (0, pi/2), got {alpha}")));
    }
    check_grid(grid)?;
    let omega = thirring_omega(gamma, alpha);
    let kappa = (1.0 - gamma * gamma).sqrt() * (2.0 * alpha).sin();
    let ratio = ((1.0 - gamma) / (1.0 + gamma)).powf(0.25);
    let (sa, ta) = (alpha.sin(), alpha.tan());
    let fields = grid.iter().map(|&x| {
        let kx = kappa * x;
        // |cosh(kx + i alpha)|^2 = cosh^2 kx - sin^2 alpha
        let modulus = kappa / (kx.cosh().powi(2) - sa * sa).sqrt();
        let arg = (kx.tanh() * ta).atan();
        (
            ratio * modulus,
            modulus / ratio,
            -(2.0 * gamma + 1.0) * arg,
            (1.0 - 2.0 * gamma) * arg,
        )
    });
    Ok(SolitonProfile::from_fields(grid, fields, omega, gamma, ModelKind::Thirring))
}

/// PT Gross-Neveu soliton, `0 < omega < sqrt(1 - gamma^2)`.
pub fn gross_neveu_soliton(gamma: f64, omega: f64, grid: &[f64]) -> Result<SolitonProfile> {
    if !(0.0..1.0).contains(&gamma) {
        return Err(Error::param(format!("gamma must lie in [0, 1), got {gamma}")));
    }
    let top = (1.0 - gamma * gamma).sqrt();
    if !(omega > 0.0 && omega < top) {
        return Err(Error::param(format!("omega must lie in (0, {top}), got {omega}")));
    }
    check_grid(grid)?;
    let rho = omega.hypot(gamma);
    let kappa = (1.0 - rho * rho).sqrt();
    let wk = omega * kappa;
    let r2 = rho * rho;
    let theta0 = |x: f64| ((r2 - gamma + (1.0 - gamma) * rho * (2.0 * kappa * x).exp()) / wk).atan();
    let phi0 = |x: f64| ((r2 + gamma + (1.0 + gamma) * rho * (2.0 * kappa * x).exp()) / wk).atan();
    let (t00, p00) = (theta0(0.0), phi0(0.0));
    let pre = kappa / omega.sqrt();
    let fields = grid.iter().map(|&x| {
        let ch = (2.0 * kappa * x).cosh();
        let den = 1.0 + rho * ch;
        let a = pre * (r2 - gamma + (1.0 - gamma) * rho * ch).sqrt() / den;
        let b = pre * (r2 + gamma + (1.0 + gamma) * rho * ch).sqrt() / den;
        (a, b, t00 - theta0(x), phi0(x) - p00)
    });
    Ok(SolitonProfile::from_fields(grid, fields, omega, gamma, ModelKind::GrossNeveu))
}

/// The Gross-Neveu scalar `sigma = 2 Re(u v*)` in closed form.
pub fn gross_neveu_sigma(gamma: f64, omega: f64, x: f64) -> f64 {
    let rho = omega.hypot(gamma);
    let kappa = (1.0 - rho * rho).sqrt();
    -2.0 * kappa * kappa / (1.0 + rho * (2.0 * kappa * x).cosh())
}

/// The two phase solutions of the reduced new-model equation at `gamma = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseBranch {
    /// `tan(theta) = -lambda tanh(kappa x)`, the decaying branch.
    Antikink,
    /// `theta = pi/2 + arctan(tanh(kappa x) / lambda)`, which gives `a^2 < 0`.
    Kink,
}

/// Phase `theta(x)` and the squared amplitude `a^2 = -2 theta' / cos(4 theta)`
/// it implies on the given branch.
pub fn new_model_phase(branch: PhaseBranch, omega: f64, x: f64) -> (f64, f64) {
    let lambda = ((1.0 - omega) / (1.0 + omega)).sqrt();
    let kappa = (1.0 - omega * omega).sqrt();
    let t = (kappa * x).tanh();
    let sech2 = 1.0 / (kappa * x).cosh().powi(2);
    // theta' = omega - cos(2 theta), written without the tail cancellation
    let (theta, dtheta) = match branch {
        PhaseBranch::Antikink => (-(lambda * t).atan(), -(1.0 - omega) * sech2 / (1.0 + lambda * lambda * t * t)),
        PhaseBranch::Kink => (
            std::f64::consts::FRAC_PI_2 + (t / lambda).atan(),
            (1.0 - omega) * sech2 / (t * t + lambda * lambda),
        ),
    };
    (theta, -2.0 * dtheta / (4.0 * theta).cos())
}

/// New-model soliton at `gamma = 0`, `1/sqrt(2) < omega < 1`.
pub fn new_model_soliton_explicit(omega: f64, grid: &[f64]) -> Result<SolitonProfile> {
    if !(omega > FRAC_1_SQRT_2 && omega < 1.0) {
        return Err(Error::param(format!("omega must lie in (1/sqrt 2, 1), got {omega}")));
    }
    check_grid(grid)?;
    let (_, asq0) = new_model_phase(PhaseBranch::Antikink, omega, 0.0);
    if asq0 <= 0.0 {
        return Err(Error::NegativeRadicand { x: 0.0, value: asq0 });
    }
    let lambda = ((1.0 - omega) / (1.0 + omega)).sqrt();
    let kappa = (1.0 - omega * omega).sqrt();
    let l2 = lambda * lambda;
    let pre = (2.0 * (1.0 - omega)).sqrt();
    let fields = grid.iter().map(|&x| {
        let t = (kappa * x).tanh();
        let t2 = t * t;
        let a = pre / (kappa * x).cosh() * ((1.0 + l2 * t2) / (1.0 - 6.0 * l2 * t2 + l2 * l2 * t2 * t2)).sqrt();
        let theta = -(lambda * t).atan();
        (a, a, theta, -theta)
    });
    Ok(SolitonProfile::from_fields(grid, fields, omega, 0.0, ModelKind::NewModel))
}

/// Hump positions `x_m >= 0` of `a(x)` for the `gamma = 0` new-model soliton.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Humps {
    Unimodal,
    Bimodal { x_m: f64 },
}

pub fn hump_locations(omega: f64) -> Result<Humps> {
    if !(omega > FRAC_1_SQRT_2 && omega < 1.0) {
        return Err(Error::param(format!("omega must lie in (1/sqrt 2, 1), got {omega}")));
    }
    if omega >= 0.75 {
        return Ok(Humps::Unimodal);
    }
    let s = (omega * omega - 0.5).sqrt();
    let t2 = (1.0 + omega) / (1.0 - omega) * (1.0 - omega - s) / (1.0 + omega + s);
    let kappa = (1.0 - omega * omega).sqrt();
    Ok(Humps::Bimodal { x_m: t2.sqrt().atanh() / kappa })
}
