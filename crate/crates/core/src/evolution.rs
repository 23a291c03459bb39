//! Time evolution along characteristics, conservation ledgers and the
//! field transformations used around it.
//!
//! With `dt = dx` the characteristics `x + t` and `x - t` pass exactly
//! through grid points, so the transport part is exact and only the
//! sources are integrated (implicit trapezoid, solved by fixed-point
//! iteration from an Euler predictor).

use crate::grid;
use crate::models::{conservation_snapshot, ModelKind, ModelParams};
use crate::solitons::SolitonProfile;
use crate::{Error, Result};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub struct FieldState {
    pub grid: Vec<f64>,
    pub u: Vec<Complex64>,
    pub v: Vec<Complex64>,
    pub time: f64,
}

impl FieldState {
    pub fn sup_norm(&self) -> f64 {
        self.u.iter().chain(&self.v).map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest `|u|` on `x < 0` and on `x >= 0`.
    pub fn hump_peaks(&self) -> (f64, f64) {
        let mut peaks = (0.0f64, 0.0f64);
        for (x, z) in self.grid.iter().zip(&self.u) {
            if *x < 0.0 {
                peaks.0 = peaks.0.max(z.norm());
            } else {
                peaks.1 = peaks.1.max(z.norm());
            }
        }
        peaks
    }

    fn boundary_amplitude(&self) -> f64 {
        let n = self.grid.len();
        [self.u[0], self.v[0], self.u[n - 1], self.v[n - 1]]
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

/// Run settings. `dt` must equal the grid spacing.
#[derive(Debug, Clone, PartialEq)]
pub struct EvolveConfig {
    pub t_final: f64,
    pub dt: f64,
    /// Ledger sampling interval, rounded to whole steps.
    pub ledger_every: f64,
    /// Snapshot interval; `None` keeps only the final state.
    pub snapshot_every: Option<f64>,
    pub blowup_threshold: f64,
}

impl EvolveConfig {
    pub fn new(t_final: f64, dt: f64) -> Self {
        Self { t_final, dt, ledger_every: 0.1, snapshot_every: None, blowup_threshold: 1e6 }
    }
}

/// Conserved integrals at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Conserved {
    pub q: f64,
    pub h: f64,
    pub p: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LedgerRow {
    pub t: f64,
    pub sup: f64,
    pub left_peak: f64,
    pub right_peak: f64,
    /// `None` where the model has no established conservation laws.
    pub conserved: Option<Conserved>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Outcome {
    Completed,
    /// Sup-norm exceeded the threshold (or became non-finite) after `time`.
    Blowup { time: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evolution {
    pub final_state: FieldState,
    pub ledger: Vec<LedgerRow>,
    pub snapshots: Vec<FieldState>,
    pub outcome: Outcome,
    /// Whether the ledger charge is a conserved quantity for this model.
    pub charge_conserved: bool,
}

fn ledger_row(params: &ModelParams, s: &FieldState, with_laws: bool) -> Result<LedgerRow> {
    let (left_peak, right_peak) = s.hump_peaks();
    let conserved = if with_laws {
        let snap = conservation_snapshot(params, &s.grid, &s.u, &s.v)?;
        Some(Conserved { q: snap.charge, h: snap.energy, p: snap.momentum })
    } else {
        None
    };
    Ok(LedgerRow { t: s.time, sup: s.sup_norm(), left_peak, right_peak, conserved })
}

/// Whether [`evolve`] records conserved integrals for this model.
pub fn has_ledger(params: &ModelParams) -> bool {
    match params.kind {
        ModelKind::Thirring | ModelKind::GrossNeveu => true,
        ModelKind::NewModel => params.gamma == 0.0,
        ModelKind::GeneralCubic => false,
    }
}

/// Advances `initial` to `t_final` (rounded to whole steps of `dt`).
pub fn evolve(params: &ModelParams, initial: &FieldState, cfg: &EvolveConfig) -> Result<Evolution> {
    let dx = grid::spacing(&initial.grid)?;
    if (cfg.dt - dx).abs() > 1e-9 * dx {
        return Err(Error::CflViolation { dt: cfg.dt, dx });
    }
    if initial.u.len() != initial.grid.len() || initial.v.len() != initial.grid.len() {
        return Err(Error::MeshMismatch("field length differs from grid".into()));
    }
    if !(cfg.t_final >= 0.0) {
        return Err(Error::param(format!("t_final must be non-negative, got {}", cfg.t_final)));
    }
    let edge = initial.boundary_amplitude();
    if edge > 1e-10 {
        return Err(Error::NonDecayingField(edge));
    }
    let dt = dx;
    let steps = (cfg.t_final / dt).round() as usize;
    let ledger_stride = ((cfg.ledger_every / dt).round() as usize).max(1);
    let snap_stride = cfg.snapshot_every.map(|s| ((s / dt).round() as usize).max(1));
    let with_laws = has_ledger(params);

    let n = initial.grid.len();
    let mut state = initial.clone();
    let mut next_u = vec![ZERO; n];
    let mut next_v = vec![ZERO; n];
    let mut ledger = vec![ledger_row(params, &state, with_laws)?];
    let mut snapshots = Vec::new();
    if snap_stride.is_some() {
        snapshots.push(state.clone());
    }
    let mut outcome = Outcome::Completed;
    let t0 = initial.time;
    for step in 1..=steps {
        let (u, v) = (&state.u, &state.v);
        for j in 0..n {
            // u travels left: it arrives at j from j + 1; v arrives from j - 1
            let (ua, va) = if j + 1 < n { (u[j + 1], v[j + 1]) } else { (ZERO, ZERO) };
            let (ub, vb) = if j > 0 { (u[j - 1], v[j - 1]) } else { (ZERO, ZERO) };
            let (su0, _) = params.sources(ua, va);
            let (_, sv0) = params.sources(ub, vb);
            let mut un = ua + su0 * dt;
            let mut vn = vb + sv0 * dt;
            for _ in 0..4 {
                let (su1, sv1) = params.sources(un, vn);
                un = ua + (su0 + su1) * (0.5 * dt);
                vn = vb + (sv0 + sv1) * (0.5 * dt);
            }
            next_u[j] = un;
            next_v[j] = vn;
        }
        std::mem::swap(&mut state.u, &mut next_u);
        std::mem::swap(&mut state.v, &mut next_v);
        state.time = t0 + step as f64 * dt;
        let sup = state.sup_norm();
        if !sup.is_finite() || sup > cfg.blowup_threshold {
            outcome = Outcome::Blowup { time: state.time - dt };
            ledger.push(LedgerRow {
                t: state.time,
                sup,
                left_peak: f64::NAN,
                right_peak: f64::NAN,
                conserved: None,
            });
            break;
        }
        if step % ledger_stride == 0 || step == steps {
            ledger.push(ledger_row(params, &state, with_laws)?);
        }
        if let Some(k) = snap_stride {
            if step % k == 0 {
                snapshots.push(state.clone());
            }
        }
    }
    let charge_conserved = with_laws && !(params.kind == ModelKind::GrossNeveu && params.gamma != 0.0);
    Ok(Evolution { final_state: state, ledger, snapshots, outcome, charge_conserved })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PerturbMode {
    /// Scales both components by `1 + eps`.
    Amplitude,
    /// Adds uniform complex noise of size `eps * sup|u|` where the soliton
    /// amplitude exceeds `1e-3` of its peak.
    Noise { seed: u64 },
}

/// Initial condition at `t = 0` built from a soliton, `0 <= eps <= 0.1`.
pub fn perturb(profile: &SolitonProfile, eps: f64, mode: PerturbMode) -> Result<FieldState> {
    if !(0.0..=0.1).contains(&eps) {
        return Err(Error::param(format!("eps must lie in [0, 0.1], got {eps}")));
    }
    let mut s = profile.state_at(0.0);
    match mode {
        PerturbMode::Amplitude => {
            for z in s.u.iter_mut().chain(s.v.iter_mut()) {
                *z *= 1.0 + eps;
            }
        }
        PerturbMode::Noise { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let peak = profile.a.iter().chain(&profile.b).fold(0.0f64, |m, v| m.max(*v));
            let size = eps * profile.a.iter().fold(0.0f64, |m, v| m.max(*v));
            for k in 0..s.grid.len() {
                let mut draw = || {
                    Complex64::new(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0)) * size
                };
                let (du, dv) = (draw(), draw());
                if profile.a[k].max(profile.b[k]) > 1e-3 * peak {
                    s.u[k] += du;
                    s.v[k] += dv;
                }
            }
        }
    }
    Ok(s)
}

/// Direction of the Thirring gauge map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GaugeDirection {
    ToParent,
    FromParent,
}

/// Image of the PT space-time point `(x, t)` in parent-model coordinates.
pub fn parent_coordinates(x: f64, t: f64, gamma: f64) -> (f64, f64) {
    (x + gamma * t, t + gamma * x)
}

/// Maps PT-Thirring fields to the parent Thirring model and back.
///
/// The slice `t = const` of the PT model maps to the line
/// `t' = t + gamma x` of the parent model; the returned state keeps the
/// PT labels `(x, t)` and holds the parent fields at the image points.
/// `W` is integrated along the slice from the left boundary.
pub fn gauge_transform_thirring(state: &FieldState, gamma: f64, direction: GaugeDirection) -> Result<FieldState> {
    if !(0.0..1.0).contains(&gamma) {
        return Err(Error::param(format!("gamma must lie in [0, 1), got {gamma}")));
    }
    let h = grid::spacing(&state.grid)?;
    let scale = (1.0 - gamma * gamma).sqrt();
    // moduli of the rescaled fields, from either side of the map
    let (mu, mv) = match direction {
        GaugeDirection::ToParent => (1.0 / scale, 1.0 / scale),
        GaugeDirection::FromParent => (1.0, 1.0),
    };
    let rate: Vec<f64> = state
        .u
        .iter()
        .zip(&state.v)
        .map(|(u, v)| {
            let uu = (u * mu).norm_sqr();
            let vv = (v * mv).norm_sqr();
            -0.5 * ((1.0 + gamma) * uu + (1.0 - gamma) * vv)
        })
        .collect();
    let w = grid::cumulative(&rate, h);
    let (amp, sign) = match direction {
        GaugeDirection::ToParent => (1.0 / scale, -1.0),
        GaugeDirection::FromParent => (scale, 1.0),
    };
    let rot = |k: usize| Complex64::from_polar(amp, sign * gamma * w[k]);
    Ok(FieldState {
        grid: state.grid.clone(),
        u: state.u.iter().enumerate().map(|(k, z)| z * rot(k)).collect(),
        v: state.v.iter().enumerate().map(|(k, z)| z * rot(k)).collect(),
        time: state.time,
    })
}

/// `u1 = (u - i v)/2`, `u2 = (v - i u)/2`: the amplifying and damped modes.
pub fn mode_change(u: Complex64, v: Complex64) -> (Complex64, Complex64) {
    let i = Complex64::i();
    (0.5 * (u - i * v), 0.5 * (v - i * u))
}

/// Inverse of [`mode_change`].
pub fn mode_change_inverse(u1: Complex64, u2: Complex64) -> (Complex64, Complex64) {
    let i = Complex64::i();
    (u1 + i * u2, u2 + i * u1)
}
