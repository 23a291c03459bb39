//! New-model solitons at `gamma > 0` by quadrature.
//!
//! The stationary system reduces to Stokes variables `(X, Y, Z, R)` with
//! `X^2 + Y^2 + Z^2 = R^2`. On the invariant hyperbola the orbit is described
//! by one angle `chi(x)` obeying `chi'^2/2 + U(chi) = 0`; the soliton is the
//! homoclinic orbit to `chi0` that turns at `chi1 < chi0`.
//!
//! High-frequency branch (`2 omega^2 > 1`, `rho^2 = 2 omega^2 - 1`):
//! `R = 2 omega - sqrt2 rho cosh chi`, `X = 1 - rho sinh chi`.
//! Low-frequency branch (`2 omega^2 < 1`, `rho^2 = 1 - 2 omega^2`):
//! `R = 2 omega - sqrt2 rho sinh chi`, `X = 1 - rho cosh chi`.
//! On both, `Z = sqrt2 gamma (chi - chi0)` and `Y = chi' / sqrt2`.

use crate::gauss::Rule;
use crate::models::ModelKind;
use crate::roots;
use crate::solitons::SolitonProfile;
use crate::{existence, Error, Result};
use std::f64::consts::SQRT_2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    HighFreq,
    LowFreq,
}

impl Branch {
    pub fn for_omega(omega: f64) -> Branch {
        if 2.0 * omega * omega > 1.0 {
            Branch::HighFreq
        } else {
            Branch::LowFreq
        }
    }
}

/// The equilibrium `chi0` and scale `rho` of a branch.
pub fn fixed_point_chi0(omega: f64, branch: Branch) -> Result<(f64, f64)> {
    if !(omega > 0.0 && omega < 1.0) {
        return Err(Error::param(format!("omega must lie in (0, 1), got {omega}")));
    }
    let q = 2.0 * omega * omega - 1.0;
    match branch {
        Branch::HighFreq if q > 0.0 => {
            let rho = q.sqrt();
            Ok(((1.0 / rho).asinh(), rho))
        }
        Branch::LowFreq if q < 0.0 => {
            let rho = (-q).sqrt();
            Ok(((SQRT_2 * omega / rho).asinh(), rho))
        }
        _ => Err(Error::param(format!("omega = {omega} does not belong to the {branch:?} branch"))),
    }
}

/// The fictitious-particle potential `U(chi)` of one branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Potential {
    pub branch: Branch,
    pub omega: f64,
    pub gamma: f64,
    pub rho: f64,
    pub chi0: f64,
}

impl Potential {
    pub fn new(omega: f64, gamma: f64, branch: Branch) -> Result<Self> {
        if !(0.0..1.0).contains(&gamma) {
            return Err(Error::param(format!("gamma must lie in [0, 1), got {gamma}")));
        }
        let (chi0, rho) = fixed_point_chi0(omega, branch)?;
        Ok(Self { branch, omega, gamma, rho, chi0 })
    }

    pub fn value(&self, chi: f64) -> f64 {
        self.value_at_offset(chi - self.chi0)
    }

    /// `U(chi0 + d)`.
    pub fn value_at_offset(&self, d: f64) -> f64 {
        let sd = (0.5 * d).sinh();
        let sp = (self.chi0 + 0.5 * d).sinh();
        let r2 = self.rho * self.rho;
        let g = 2.0 * self.gamma * self.gamma * d * d;
        match self.branch {
            Branch::HighFreq => 4.0 * r2 * sd * sd * (1.0 - sp * sp) + g,
            Branch::LowFreq => -4.0 * r2 * sd * sd * (2.0 + sp * sp) + g,
        }
    }

    pub fn derivative(&self, chi: f64) -> f64 {
        let d = chi - self.chi0;
        let sd = (0.5 * d).sinh();
        let sp = (0.5 * (chi + self.chi0)).sinh();
        let r2 = self.rho * self.rho;
        let g = 4.0 * self.gamma * self.gamma * d;
        match self.branch {
            Branch::HighFreq => {
                2.0 * r2 * (d.sinh() * (1.0 - sp * sp) - sd * sd * (chi + self.chi0).sinh()) + g
            }
            Branch::LowFreq => {
                -2.0 * r2 * (d.sinh() * (2.0 + sp * sp) + sd * sd * (chi + self.chi0).sinh()) + g
            }
        }
    }

    /// `U''(chi0) = 4 (omega^2 + gamma^2 - 1)` on both branches.
    pub fn curvature_at_chi0(&self) -> f64 {
        4.0 * (self.omega * self.omega + self.gamma * self.gamma - 1.0)
    }

    /// Stokes variables `(X, |Y|, Z, R)` on the orbit at angle `chi`.
    pub fn stokes(&self, chi: f64) -> (f64, f64, f64, f64) {
        self.stokes_at_offset(self.chi0 - chi)
    }

    /// Stokes variables at `chi = chi0 - delta`, written with half-angle
    /// products so that they stay accurate as `delta -> 0`.
    pub fn stokes_at_offset(&self, delta: f64) -> (f64, f64, f64, f64) {
        let sh = (0.5 * delta).sinh();
        let mid = self.chi0 - 0.5 * delta;
        // X = rho (sinh chi0 - sinh chi), R = sqrt2 rho (cosh chi0 - cosh chi)
        // on the high branch; sinh and cosh trade places on the low one
        let (x, r) = match self.branch {
            Branch::HighFreq => (2.0 * self.rho * mid.cosh() * sh, 2.0 * SQRT_2 * self.rho * mid.sinh() * sh),
            Branch::LowFreq => (2.0 * self.rho * mid.sinh() * sh, 2.0 * SQRT_2 * self.rho * mid.cosh() * sh),
        };
        let z = -SQRT_2 * self.gamma * delta;
        (x, (-self.value_at_offset(-delta)).max(0.0).sqrt(), z, r)
    }

    /// Integrand of `beta(x) = int_0^x beta_rate dx`.
    pub fn beta_rate(&self, chi: f64) -> f64 {
        let (c0, s0) = (self.chi0.cosh(), self.chi0.sinh());
        let d = self.chi0 - chi;
        let r2 = self.rho * self.rho;
        let g2 = self.gamma * self.gamma;
        let (factor, q) = match self.branch {
            Branch::HighFreq => {
                let q = if d.abs() < 1e-6 {
                    r2 * c0 / (2.0 * (1.0 - g2))
                } else {
                    let diff = c0 - chi.cosh();
                    r2 * (diff - d * chi.sinh()) / (r2 * diff * diff - g2 * d * d)
                };
                (s0 - chi.sinh(), q)
            }
            Branch::LowFreq => {
                let q = if d.abs() < 1e-6 {
                    r2 * s0 / (2.0 * (1.0 - g2))
                } else {
                    let diff = s0 - chi.sinh();
                    r2 * (diff - d * chi.cosh()) / (r2 * diff * diff - g2 * d * d)
                };
                (c0 - chi.cosh(), q)
            }
        };
        -SQRT_2 * self.gamma * (factor * q - d)
    }
}

/// First zero `chi1 < chi0` of `U` to the left of the equilibrium.
pub fn turning_point_chi1(omega: f64, gamma: f64, branch: Branch) -> Result<f64> {
    let pot = Potential::new(omega, gamma, branch)?;
    turning_point(&pot)
}

fn turning_point(pot: &Potential) -> Result<f64> {
    let chi0 = pot.chi0;
    if pot.curvature_at_chi0() >= 0.0 {
        return Err(Error::NoTurningPoint { chi0 });
    }
    let u = |chi: f64| pot.value(chi);
    // geometric scan in delta = chi0 - chi
    let mut prev = (1e-9, u(chi0 - 1e-9));
    let mut samples = vec![prev];
    let mut delta = 1e-9;
    let mut bracket = None;
    while delta < 60.0 {
        delta *= 1.02;
        let cur = (delta, u(chi0 - delta));
        if cur.1 >= 0.0 {
            bracket = Some((prev.0, cur.0));
            break;
        }
        samples.push(cur);
        prev = cur;
    }
    if bracket.is_none() {
        // the positive excursion may be narrower than the scan step
        for w in samples.windows(3) {
            if w[1].1 > w[0].1 && w[1].1 > w[2].1 {
                let (dm, um) = roots::golden_max(|d| u(chi0 - d), w[0].0, w[2].0, 1e-15 * w[2].0);
                if um >= 0.0 {
                    bracket = Some((w[0].0, dm));
                    break;
                }
            }
        }
    }
    let (lo, hi) = bracket.ok_or(Error::NoTurningPoint { chi0 })?;
    let d1 = roots::bisect(|d| u(chi0 - d), lo, hi, 1e-15 * hi.max(1.0))?;
    let mut chi1 = chi0 - d1;
    // polish so that U(chi1) vanishes to rounding
    for _ in 0..3 {
        let du = pot.derivative(chi1);
        if du == 0.0 {
            break;
        }
        let step = pot.value(chi1) / du;
        if step.abs() > 1e-8 * (1.0 + chi1.abs()) {
            break;
        }
        chi1 -= step;
    }
    if pot.derivative(chi1) >= 0.0 {
        return Err(Error::NoTurningPoint { chi0 });
    }
    Ok(chi1)
}

/// Samples of the homoclinic orbit on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct StokesTrajectory {
    pub grid: Vec<f64>,
    pub chi: Vec<f64>,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub z: Vec<f64>,
    pub r: Vec<f64>,
    /// The odd phase `beta(x) = int_0^x beta_rate`.
    pub beta: Vec<f64>,
    pub branch: Branch,
    pub chi0: f64,
    pub chi1: f64,
    pub omega: f64,
    pub gamma: f64,
}

const RULE_POINTS: usize = 20;

/// `x(s)` and `beta(s)` along `chi = chi1 + s^2`, tabulated on panels.
struct Homoclinic {
    pot: Potential,
    chi1: f64,
    /// chi0 - chi1
    span: f64,
    du1: f64,
    ddu1: f64,
    rule: Rule,
    /// panel end points in s and running integrals at them
    s: Vec<f64>,
    xs: Vec<f64>,
    betas: Vec<f64>,
    delta_tail: f64,
    mu: f64,
    /// beta_rate / (chi0 - chi) at the tail start
    beta_slope: f64,
}

impl Homoclinic {
    fn new(pot: Potential) -> Result<Self> {
        let chi1 = turning_point(&pot)?;
        let du1 = pot.derivative(chi1);
        let h = 1e-5;
        let ddu1 = (pot.derivative(chi1 + h) - pot.derivative(chi1 - h)) / (2.0 * h);
        let span = pot.chi0 - chi1;
        let s0 = span.sqrt();
        let delta_tail = 1e-8 * span;
        let s_tail = (span - delta_tail).sqrt();
        let mu = (-pot.curvature_at_chi0()).sqrt();
        let mut s = Vec::new();
        let uniform = 16;
        for k in 0..=uniform {
            s.push(0.5 * s0 * k as f64 / uniform as f64);
        }
        let mut gap = 0.5 * s0;
        loop {
            gap *= 0.5;
            let next = s0 - gap;
            if next >= s_tail {
                s.push(s_tail);
                break;
            }
            s.push(next);
        }
        let mut hc = Self {
            pot,
            chi1,
            span,
            du1,
            ddu1,
            rule: Rule::new(RULE_POINTS),
            s,
            xs: vec![0.0],
            betas: vec![0.0],
            delta_tail,
            mu,
            beta_slope: 0.0,
        };
        for k in 0..hc.s.len() - 1 {
            let (dx, db) = hc.panel(hc.s[k], hc.s[k + 1]);
            hc.xs.push(hc.xs[k] + dx);
            hc.betas.push(hc.betas[k] + db);
        }
        if !hc.xs.iter().chain(&hc.betas).all(|v| v.is_finite()) {
            return Err(Error::QuadratureFailure("non-finite panel integral".into()));
        }
        let chi_tail = pot.chi0 - delta_tail;
        hc.beta_slope = pot.beta_rate(chi_tail) / delta_tail;
        Ok(hc)
    }

    /// `U(chi1 + s^2) / s^2`, finite and negative on the orbit.
    fn ratio(&self, s: f64) -> f64 {
        let t = s * s;
        if t < 1e-6 {
            self.du1 + 0.5 * self.ddu1 * t
        } else {
            self.pot.value(self.chi1 + t) / t
        }
    }

    /// `dx/ds = 2 / sqrt(-2 U(chi1 + s^2) / s^2)`.
    fn dxds(&self, s: f64) -> f64 {
        2.0 / (-2.0 * self.ratio(s)).sqrt()
    }

    fn panel(&self, a: f64, b: f64) -> (f64, f64) {
        self.rule.integrate2(a, b, |s| {
            let w = self.dxds(s);
            (w, self.pot.beta_rate(self.chi1 + s * s) * w)
        })
    }

    fn x_tail(&self) -> f64 {
        *self.xs.last().unwrap()
    }

    /// `(chi0 - chi, beta, |Y|)` at distance `xa >= 0` from the centre.
    fn at(&self, xa: f64) -> (f64, f64, f64) {
        let xt = self.x_tail();
        if xa >= xt {
            let decay = (-self.mu * (xa - xt)).exp();
            let delta = self.delta_tail * decay;
            let beta = self.betas.last().unwrap()
                + self.beta_slope * self.delta_tail * (1.0 - decay) / self.mu;
            return (delta, beta, (-self.pot.value_at_offset(-delta)).max(0.0).sqrt());
        }
        let k = match self.xs.partition_point(|&v| v <= xa) {
            0 => 0,
            p => p - 1,
        };
        let (mut lo, mut hi) = (self.s[k], self.s[k + 1]);
        let target = xa - self.xs[k];
        let mut s = lo + (hi - lo) * target / (self.xs[k + 1] - self.xs[k]);
        for _ in 0..100 {
            let g = self.rule.integrate(self.s[k], s, |q| self.dxds(q)) - target;
            if g > 0.0 {
                hi = s;
            } else {
                lo = s;
            }
            let newton = s - g / self.dxds(s);
            let next = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
            let done = (next - s).abs() <= 1e-15 * (1.0 + s);
            s = next;
            if done || hi - lo <= 1e-15 * (1.0 + s) {
                break;
            }
        }
        let (_, db) = self.panel(self.s[k], s);
        // |Y| = sqrt(-U) = s sqrt(-U / s^2) vanishes exactly at the centre
        (self.span - s * s, self.betas[k] + db, s * (-self.ratio(s)).sqrt())
    }
}

/// Tabulates the homoclinic orbit on `grid` (centre at `x = 0`).
pub fn chi_profile(omega: f64, gamma: f64, branch: Branch, grid: &[f64]) -> Result<StokesTrajectory> {
    let pot = Potential::new(omega, gamma, branch)?;
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::GridTooCoarse("grid must be strictly increasing".into()));
    }
    let hc = Homoclinic::new(pot)?;
    let n = grid.len();
    let mut tr = StokesTrajectory {
        grid: grid.to_vec(),
        chi: Vec::with_capacity(n),
        x: Vec::with_capacity(n),
        y: Vec::with_capacity(n),
        z: Vec::with_capacity(n),
        r: Vec::with_capacity(n),
        beta: Vec::with_capacity(n),
        branch,
        chi0: pot.chi0,
        chi1: hc.chi1,
        omega,
        gamma,
    };
    for &x in grid {
        let (delta, beta, sy) = hc.at(x.abs());
        let chi = pot.chi0 - delta;
        let (sx, _, sz, sr) = pot.stokes_at_offset(delta);
        let sign = if x < 0.0 { -1.0 } else { 1.0 };
        tr.chi.push(chi);
        tr.x.push(sx);
        tr.y.push(sign * sy);
        tr.z.push(sz);
        tr.r.push(sr);
        tr.beta.push(sign * beta);
    }
    Ok(tr)
}

/// Amplitudes and phases from a trajectory; `u = a e^{i theta}`,
/// `v = -b e^{i phi}` with `theta = (beta - alpha)/2`, `phi = (beta + alpha)/2`.
pub fn reconstruct_profile(traj: &StokesTrajectory) -> Result<SolitonProfile> {
    let n = traj.grid.len();
    let mut alpha = Vec::with_capacity(n);
    let mut a = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n);
    for k in 0..n {
        let (r, z) = (traj.r[k], traj.z[k]);
        let (a2, b2) = (0.5 * (r + z), 0.5 * (r - z));
        let floor = -1e-12 * (1.0 + r.abs());
        if a2 < floor || b2 < floor {
            return Err(Error::NegativeRadicand { x: traj.grid[k], value: a2.min(b2) });
        }
        a.push(a2.max(0.0).sqrt());
        b.push(b2.max(0.0).sqrt());
        alpha.push(traj.y[k].atan2(traj.x[k]));
    }
    // keep alpha continuous if the orbit winds past X < 0
    for k in 1..n {
        let jump = alpha[k] - alpha[k - 1];
        let turns = (jump / std::f64::consts::TAU).round();
        if turns != 0.0 {
            alpha[k] -= turns * std::f64::consts::TAU;
        }
    }
    let fields = (0..n).map(|k| {
        let (al, be) = (alpha[k], traj.beta[k]);
        (a[k], b[k], 0.5 * (be - al), 0.5 * (be + al))
    });
    Ok(SolitonProfile::from_fields(&traj.grid, fields, traj.omega, traj.gamma, ModelKind::NewModel))
}

/// New-model soliton for any `(omega, gamma)` inside the existence domain.
pub fn new_model_pt_soliton(omega: f64, gamma: f64, grid: &[f64]) -> Result<SolitonProfile> {
    if !(omega > 0.0) {
        return Err(Error::param(format!(
            "negative-frequency solitons do not exist (omega = {omega})"
        )));
    }
    let branch = match existence::classify(omega, gamma)? {
        existence::Classification::Outside => {
            return Err(Error::OutsideExistenceDomain { omega, gamma });
        }
        existence::Classification::HighFreqBranch { .. } => Branch::HighFreq,
        existence::Classification::LowFreqBranch { .. } => Branch::LowFreq,
    };
    if 2.0 * omega * omega == 1.0 {
        return Err(Error::param("the branch parametrisation degenerates at omega = 1/sqrt 2"));
    }
    let traj = chi_profile(omega, gamma, branch, grid)?;
    reconstruct_profile(&traj)
}

/// `R` on the second sheet of the high-frequency hyperbola,
/// `R = 2 omega + sqrt2 rho cosh chi`, measured along the orbit through the
/// equilibrium where `R(chi0) = 0`: `R = sqrt2 rho (cosh chi - cosh chi0)`.
/// It is negative wherever `|chi| < chi0`, so the sheet carries no soliton.
pub fn second_sheet_r(omega: f64, chi: f64) -> Result<f64> {
    let (chi0, rho) = fixed_point_chi0(omega.abs(), Branch::HighFreq)?;
    Ok(SQRT_2 * rho * (chi.cosh() - chi0.cosh()))
}
