//! Model family, nonlinear terms, stationary residuals and conservation
//! densities.

use crate::grid;
use crate::solitons::SolitonProfile;
use crate::{Error, Result};
use num_complex::Complex64;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    Thirring,
    GrossNeveu,
    NewModel,
    GeneralCubic,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Thirring => "thirring",
            ModelKind::GrossNeveu => "gross-neveu",
            ModelKind::NewModel => "new-model",
            ModelKind::GeneralCubic => "general-cubic",
        }
    }
}

/// Coefficients of the cubic nonlinearity `(A u v* + B v u*) v` and the
/// gain/loss parameter `gamma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub cubic_a: f64,
    pub cubic_b: f64,
    pub gamma: f64,
    pub kind: ModelKind,
}

impl ModelParams {
    pub fn new(kind: ModelKind, gamma: f64) -> Result<Self> {
        let (a, b) = match kind {
            ModelKind::Thirring => (1.0, 0.0),
            ModelKind::GrossNeveu => (1.0, 1.0),
            ModelKind::NewModel => (0.0, 1.0),
            ModelKind::GeneralCubic => {
                return Err(Error::param("general cubic models need explicit (A, B)"));
            }
        };
        Self::build(a, b, gamma, kind)
    }

    pub fn general(cubic_a: f64, cubic_b: f64, gamma: f64) -> Result<Self> {
        let kind = match (cubic_a, cubic_b) {
            (a, b) if a == 1.0 && b == 0.0 => ModelKind::Thirring,
            (a, b) if a == 1.0 && b == 1.0 => ModelKind::GrossNeveu,
            (a, b) if a == 0.0 && b == 1.0 => ModelKind::NewModel,
            _ => ModelKind::GeneralCubic,
        };
        Self::build(cubic_a, cubic_b, gamma, kind)
    }

    pub fn thirring(gamma: f64) -> Result<Self> {
        Self::new(ModelKind::Thirring, gamma)
    }

    pub fn gross_neveu(gamma: f64) -> Result<Self> {
        Self::new(ModelKind::GrossNeveu, gamma)
    }

    pub fn new_model(gamma: f64) -> Result<Self> {
        Self::new(ModelKind::NewModel, gamma)
    }

    fn build(cubic_a: f64, cubic_b: f64, gamma: f64, kind: ModelKind) -> Result<Self> {
        if !(0.0..1.0).contains(&gamma) {
            return Err(Error::param(format!("gamma must lie in [0, 1), got {gamma}")));
        }
        if !cubic_a.is_finite() || !cubic_b.is_finite() {
            return Err(Error::param("cubic coefficients must be finite"));
        }
        Ok(Self { cubic_a, cubic_b, gamma, kind })
    }

    /// Cubic terms `(N_u, N_v)` entering the `u` and `v` equations.
    #[inline]
    pub fn nonlinear(&self, u: Complex64, v: Complex64) -> (Complex64, Complex64) {
        let (a, b) = (self.cubic_a, self.cubic_b);
        let nu = (u * v.conj() * a + v * u.conj() * b) * v;
        let nv = (v * u.conj() * a + u * v.conj() * b) * u;
        (nu, nv)
    }

    /// Non-derivative parts `(S_u, S_v)` of `u_t - u_x = S_u`, `v_t + v_x = S_v`.
    #[inline]
    pub fn sources(&self, u: Complex64, v: Complex64) -> (Complex64, Complex64) {
        let (nu, nv) = self.nonlinear(u, v);
        (
            I * (v * (1.0 - self.gamma) + nu),
            I * (u * (1.0 + self.gamma) + nv),
        )
    }

    /// Time derivatives `(u_t, v_t)` given fields and their x-derivatives.
    #[inline]
    pub fn rhs(&self, u: Complex64, v: Complex64, ux: Complex64, vx: Complex64) -> (Complex64, Complex64) {
        let (su, sv) = self.sources(u, v);
        (ux + su, -vx + sv)
    }
}

/// Linear PT extensions of the free Dirac system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinearExtension {
    /// `gamma u_x`, `gamma v_x` on the right-hand side.
    DriftJ1,
    /// `gamma u`, `-gamma v`.
    ShiftJ2,
    /// `gamma v`, `-gamma u`: the mass term used by all three models.
    MassA5,
}

/// Both frequencies `omega(k)` of the plane waves `e^{i(kx - omega t)}`,
/// upper branch first. Complex pairs signal the broken phase.
pub fn dispersion_branches(kind: LinearExtension, gamma: f64, k: f64) -> [Complex64; 2] {
    let root = |d: f64| {
        if d >= 0.0 {
            Complex64::new(d.sqrt(), 0.0)
        } else {
            Complex64::new(0.0, (-d).sqrt())
        }
    };
    let (shift, r) = match kind {
        LinearExtension::DriftJ1 => (-gamma * k, root(1.0 + k * k)),
        LinearExtension::ShiftJ2 => (0.0, root(1.0 + (k + gamma).powi(2))),
        LinearExtension::MassA5 => (0.0, root(1.0 - gamma * gamma + k * k)),
    };
    [shift + r, shift - r]
}

/// Maximum pointwise residuals of the stationary equations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualReport {
    pub max_u: f64,
    pub max_v: f64,
}

impl ResidualReport {
    pub fn max(&self) -> f64 {
        self.max_u.max(self.max_v)
    }
}

/// Residual of `omega u - i u_x + (1-gamma) v + N_u = 0` and
/// `omega v + i v_x + (1+gamma) u + N_v = 0`, with sixth-order centred
/// differences; the four outermost nodes at each end are excluded.
pub fn stationary_residual(params: &ModelParams, profile: &SolitonProfile) -> Result<ResidualReport> {
    let h = grid::spacing(&profile.grid)?;
    let n = profile.grid.len();
    if n < 16 {
        return Err(Error::GridTooCoarse(format!("{n} points")));
    }
    let u = profile.u();
    let v = profile.v();
    let w = profile.omega;
    let g = params.gamma;
    let (mut max_u, mut max_v) = (0.0f64, 0.0f64);
    for j in 4..n - 4 {
        let (nu, nv) = params.nonlinear(u[j], v[j]);
        let ux = grid::centered6(&u, j, h);
        let vx = grid::centered6(&v, j, h);
        let ru = u[j] * w - I * ux + v[j] * (1.0 - g) + nu;
        let rv = v[j] * w + I * vx + u[j] * (1.0 + g) + nv;
        max_u = max_u.max(ru.norm());
        max_v = max_v.max(rv.norm());
    }
    Ok(ResidualReport { max_u, max_v })
}

/// Integrated conserved quantities and boundary fluxes of one snapshot.
///
/// Each density `D` pairs with a flux `F` through `D_t + F_x = 0`, so
/// `d/dt int D = F(left) - F(right)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConservationSnapshot {
    pub charge: f64,
    pub energy: f64,
    pub momentum: f64,
    pub charge_flux: (f64, f64),
    pub energy_flux: (f64, f64),
    pub momentum_flux: (f64, f64),
    /// False for Gross-Neveu at `gamma != 0`, where the charge is not conserved.
    pub charge_conserved: bool,
}

/// Pointwise densities `(q, H, P)` and fluxes `(j, J, Phi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalBalance {
    pub q: f64,
    pub h: f64,
    pub p: f64,
    pub j: f64,
    pub big_j: f64,
    pub phi: f64,
}

/// Densities and fluxes at one point, given the fields, their
/// x-derivatives and their t-derivatives.
pub fn local_balance(
    params: &ModelParams,
    u: Complex64,
    v: Complex64,
    ux: Complex64,
    vx: Complex64,
    ut: Complex64,
    vt: Complex64,
) -> Result<LocalBalance> {
    let g = params.gamma;
    let uu = u.norm_sqr();
    let vv = v.norm_sqr();
    let s = 2.0 * (u * v.conj()).re;
    // (i/2)(u_x u* - u_x* u) = -Im(u_x u*)
    let kx_u = -(ux * u.conj()).im;
    let kx_v = -(vx * v.conj()).im;
    // (i/2)(u_t* u - u_t u*) = Im(u_t u*)
    let kt_u = (ut * u.conj()).im;
    let kt_v = (vt * v.conj()).im;
    let out = match params.kind {
        ModelKind::Thirring => {
            let quart_sum = uu * uu / (1.0 - g) + vv * vv / (1.0 + g);
            let quart_diff = uu * uu / (1.0 - g) - vv * vv / (1.0 + g);
            LocalBalance {
                q: uu + vv - g * (vv - uu),
                j: vv - uu - g * (uu + vv),
                h: kx_u - kx_v - s - uu * vv - 0.5 * g * quart_diff,
                big_j: kt_u - kt_v + g * s + 0.5 * g * quart_sum,
                p: kx_u + kx_v - 0.5 * g * quart_sum + g * s,
                phi: kt_u + kt_v - s - uu * vv + 0.5 * g * quart_diff,
            }
        }
        ModelKind::GrossNeveu => LocalBalance {
            q: uu + vv,
            j: vv - uu,
            h: kx_u - kx_v - s - 0.5 * s * s,
            big_j: kt_u - kt_v + g * s,
            p: kx_u + kx_v + g * s,
            phi: kt_u + kt_v - s - 0.5 * s * s,
        },
        ModelKind::NewModel if g == 0.0 => {
            let w = (u * v.conj() * (u * v.conj())).re;
            LocalBalance {
                q: uu + vv,
                j: vv - uu,
                h: kx_u - kx_v - s - w,
                big_j: kt_u - kt_v,
                p: kx_u + kx_v,
                phi: kt_u + kt_v - s - w,
            }
        }
        _ => {
            return Err(Error::UnsupportedLedger(format!(
                "{} at gamma = {g}",
                params.kind.name()
            )))
        }
    };
    Ok(out)
}

/// Integrates the conserved densities over the grid (trapezoid) and reports
/// the boundary fluxes. Derivatives are fourth-order differences; time
/// derivatives come from the equations of motion.
pub fn conservation_snapshot(
    params: &ModelParams,
    x: &[f64],
    u: &[Complex64],
    v: &[Complex64],
) -> Result<ConservationSnapshot> {
    let h = grid::spacing(x)?;
    if u.len() != x.len() || v.len() != x.len() {
        return Err(Error::MeshMismatch("field length differs from grid".into()));
    }
    let ux = grid::derivative(u, h);
    let vx = grid::derivative(v, h);
    let n = x.len();
    let mut q = Vec::with_capacity(n);
    let mut e = Vec::with_capacity(n);
    let mut p = Vec::with_capacity(n);
    let mut ends = [None, None];
    for k in 0..n {
        let (ut, vt) = params.rhs(u[k], v[k], ux[k], vx[k]);
        let lb = local_balance(params, u[k], v[k], ux[k], vx[k], ut, vt)?;
        q.push(lb.q);
        e.push(lb.h);
        p.push(lb.p);
        if k == 0 {
            ends[0] = Some(lb);
        } else if k == n - 1 {
            ends[1] = Some(lb);
        }
    }
    let (l, r) = (ends[0].unwrap(), ends[1].unwrap());
    Ok(ConservationSnapshot {
        charge: grid::trapezoid(&q, h),
        energy: grid::trapezoid(&e, h),
        momentum: grid::trapezoid(&p, h),
        charge_flux: (l.j, r.j),
        energy_flux: (l.big_j, r.big_j),
        momentum_flux: (l.phi, r.phi),
        charge_conserved: !(params.kind == ModelKind::GrossNeveu && params.gamma != 0.0),
    })
}
