//! Oracles shared by the integration tests.
#![allow(dead_code)]

use num_complex::Complex64;
use spinorlab_core::evolution::{gauge_transform_thirring, FieldState, GaugeDirection};
use spinorlab_core::ptquad::{chi_profile, turning_point_chi1, Branch};
use spinorlab_core::solitons::thirring_soliton;
use spinorlab_core::{grid, ModelParams};

/// High-frequency potential written out independently of the library.
pub fn u_high(chi: f64, chi0: f64, rho: f64, gamma: f64) -> f64 {
    let d = chi - chi0;
    4.0 * rho * rho * (0.5 * d).sinh().powi(2) * (1.0 - (0.5 * (chi + chi0)).sinh().powi(2))
        + 2.0 * gamma * gamma * d * d
}

pub struct Oracle {
    pub chi0: f64,
    pub rho: f64,
    pub gamma: f64,
}

impl Oracle {
    pub fn new(omega: f64, gamma: f64) -> Self {
        let rho = (2.0 * omega * omega - 1.0).sqrt();
        Self { chi0: (1.0 / rho).asinh(), rho, gamma }
    }
    pub fn u(&self, chi: f64) -> f64 {
        u_high(chi, self.chi0, self.rho, self.gamma)
    }
    fn force(&self, chi: f64) -> f64 {
        let h = 1e-5;
        -(self.u(chi + h) - self.u(chi - h)) / (2.0 * h)
    }
    pub fn rk4(&self, s: (f64, f64), dx: f64) -> (f64, f64) {
        let f = |(c, p): (f64, f64)| (p, self.force(c));
        let k1 = f(s);
        let k2 = f((s.0 + 0.5 * dx * k1.0, s.1 + 0.5 * dx * k1.1));
        let k3 = f((s.0 + 0.5 * dx * k2.0, s.1 + 0.5 * dx * k2.1));
        let k4 = f((s.0 + dx * k3.0, s.1 + dx * k3.1));
        (
            s.0 + dx / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0),
            s.1 + dx / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1),
        )
    }

    /// Shoots from `chi0 - eps` along the unstable manifold; returns the
    /// states on a uniform x-grid and the position of the turning point.
    pub fn shoot(&self) -> (Vec<(f64, f64)>, f64, f64, f64) {
        let hh = 1e-4;
        let curv = (self.u(self.chi0 + hh) - 2.0 * self.u(self.chi0) + self.u(self.chi0 - hh)) / (hh * hh);
        let mu = (-curv).sqrt();
        let eps = 1e-8;
        let dx = 2e-3;
        let mut states = vec![(self.chi0 - eps, -mu * eps)];
        loop {
            let s = *states.last().unwrap();
            let next = self.rk4(s, dx);
            if next.1 >= 0.0 {
                // bisect the sub-step that lands on chi' = 0
                let (mut lo, mut hi) = (0.0, dx);
                for _ in 0..60 {
                    let mid = 0.5 * (lo + hi);
                    if self.rk4(s, mid).1 < 0.0 {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                let x_turn = (states.len() - 1) as f64 * dx + lo;
                let chi1 = self.rk4(s, lo).0;
                return (states, x_turn, chi1, dx);
            }
            states.push(next);
        }
    }
}

/// Turning-point and profile discrepancies between the quadrature and the
/// shooting oracle on `[-12, 12]`, `h = 0.01`.
pub fn shooting_discrepancy(omega: f64, gamma: f64) -> (f64, f64) {
    let oracle = Oracle::new(omega, gamma);
    let (states, x_turn, chi1_rk, dx) = oracle.shoot();
    let chi1 = turning_point_chi1(omega, gamma, Branch::HighFreq).unwrap();
    let x = grid::with_spacing(12.0, 0.01).unwrap();
    let traj = chi_profile(omega, gamma, Branch::HighFreq, &x).unwrap();
    let mut worst = 0.0f64;
    for (k, &xk) in x.iter().enumerate() {
        // chi is even, so chi(xk) is the shot solution at x_turn - |xk|
        let target = x_turn - xk.abs();
        let j = (target / dx).floor() as usize;
        let chi_rk = oracle.rk4(states[j], target - j as f64 * dx).0;
        worst = worst.max((traj.chi[k] - chi_rk).abs());
    }
    ((chi1 - chi1_rk).abs(), worst)
}

fn c0() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// Residual of the parent Thirring model for the gauge image of the
/// PT-Thirring soliton. Slices `t = t_k` map to a skewed lattice of the
/// parent plane; parent derivatives follow from the two lattice directions.
pub fn parent_residual(gamma: f64, alpha: f64) -> f64 {
    let h = 0.01;
    let x = grid::with_spacing(25.0, h).unwrap();
    let p = thirring_soliton(gamma, alpha, &x).unwrap();
    let tau = h;
    let slices: Vec<FieldState> = (-2..=2)
        .map(|k| {
            let s = p.state_at(0.5 + k as f64 * tau);
            gauge_transform_thirring(&s, gamma, GaugeDirection::ToParent).unwrap()
        })
        .collect();
    let parent = ModelParams::thirring(0.0).unwrap();
    let det = 1.0 - gamma * gamma;
    let d5 = |f: [Complex64; 5], step: f64| (f[0] - 8.0 * f[1] + 8.0 * f[3] - f[4]) / (12.0 * step);
    let mut worst = 0.0f64;
    let n = x.len();
    for j in (2..n - 2).filter(|&j| x[j].abs() < 15.0) {
        let mut dxp = [c0(); 2];
        let mut dtp = [c0(); 2];
        for comp in 0..2 {
            let field = |k: usize, jj: usize| if comp == 0 { slices[k].u[jj] } else { slices[k].v[jj] };
            let fj = d5([field(2, j - 2), field(2, j - 1), field(2, j), field(2, j + 1), field(2, j + 2)], h);
            let fk = d5([field(0, j), field(1, j), field(2, j), field(3, j), field(4, j)], tau);
            dxp[comp] = (fj - gamma * fk) / det;
            dtp[comp] = (fk - gamma * fj) / det;
        }
        let (u, v) = (slices[2].u[j], slices[2].v[j]);
        let (ut, vt) = parent.rhs(u, v, dxp[0], dxp[1]);
        worst = worst.max((ut - dtp[0]).norm()).max((vt - dtp[1]).norm());
    }
    worst
}

/// Largest deviation of `ToParent` followed by `FromParent` from the identity.
pub fn gauge_round_trip(gamma: f64, alpha: f64) -> f64 {
    let x = grid::with_spacing(25.0, 0.02).unwrap();
    let s = thirring_soliton(gamma, alpha, &x).unwrap().state_at(1.1);
    let parent = gauge_transform_thirring(&s, gamma, GaugeDirection::ToParent).unwrap();
    let back = gauge_transform_thirring(&parent, gamma, GaugeDirection::FromParent).unwrap();
    back.u.iter().zip(&s.u).chain(back.v.iter().zip(&s.v)).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
}
