use num_complex::Complex64;
use spinorlab_core::models::{
    conservation_snapshot, dispersion_branches, local_balance, stationary_residual, LinearExtension,
};
use spinorlab_core::solitons::{
    self, gross_neveu_sigma, gross_neveu_soliton, hump_locations, new_model_phase,
    new_model_soliton_explicit, thirring_soliton, Humps, PhaseBranch,
};
use spinorlab_core::{grid, ModelParams, SolitonProfile};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn residual(params: &ModelParams, p: &SolitonProfile) -> f64 {
    stationary_residual(params, p).unwrap().max()
}

#[test]
fn light_cone_terms_by_hand() {
    // i u_xi = i (u_t - u_x) = -[(1-gamma) v + N_u]
    let i = Complex64::i();
    let (su, sv) = ModelParams::thirring(0.0).unwrap().sources(c(1.0, 0.0), c(0.0, 0.0));
    assert!((i * su).norm() < 1e-15 && (i * sv - c(-1.0, 0.0)).norm() < 1e-15);
    let (su, sv) = ModelParams::new_model(0.0).unwrap().sources(c(1.0, 0.0), c(1.0, 0.0));
    assert!((i * su - c(-2.0, 0.0)).norm() < 1e-15 && (i * sv - c(-2.0, 0.0)).norm() < 1e-15);
    let (su, sv) = ModelParams::gross_neveu(0.5).unwrap().sources(c(0.0, 0.0), c(1.0, 0.0));
    assert!((i * su - c(-0.5, 0.0)).norm() < 1e-15 && (i * sv).norm() < 1e-15);
}

#[test]
fn dispersion_examples() {
    let [a, b] = dispersion_branches(LinearExtension::MassA5, 0.0, 0.0);
    assert_eq!((a, b), (c(1.0, 0.0), c(-1.0, 0.0)));
    let [a, b] = dispersion_branches(LinearExtension::MassA5, 1.0, 0.0);
    assert_eq!((a.norm(), b.norm()), (0.0, 0.0));
    let [a, b] = dispersion_branches(LinearExtension::MassA5, 0.6, 0.0);
    assert!((a - c(0.8, 0.0)).norm() < 1e-15 && (b + c(0.8, 0.0)).norm() < 1e-15);
    // (omega + gamma k)^2 = 1 + k^2 and omega^2 = 1 + (k + gamma)^2
    for k in [-2.0, -0.3, 0.0, 1.7] {
        for w in dispersion_branches(LinearExtension::DriftJ1, 0.4, k) {
            assert!(((w.re + 0.4 * k).powi(2) - 1.0 - k * k).abs() < 1e-13);
        }
        for w in dispersion_branches(LinearExtension::ShiftJ2, 0.4, k) {
            assert!((w.re * w.re - 1.0 - (k + 0.4f64).powi(2)).abs() < 1e-13);
        }
    }
}

#[test]
fn mass_term_breaks_symmetry_only_above_one() {
    for gamma in [0.0, 0.5, 0.99, 1.0, 1.01, 1.5] {
        let all_real = (0..=400)
            .map(|k| -4.0 + 0.02 * k as f64)
            .all(|k| dispersion_branches(LinearExtension::MassA5, gamma, k).iter().all(|w| w.im == 0.0));
        assert_eq!(all_real, gamma <= 1.0, "gamma = {gamma}");
    }
}

#[test]
fn closed_form_residuals_on_fine_grid() {
    let x = grid::with_spacing(30.0, 0.01).unwrap();
    for (g, a) in [(0.0, 0.3), (0.3, 0.6), (0.6, 1.1), (0.9, 0.4)] {
        let p = thirring_soliton(g, a, &x).unwrap();
        let r = residual(&ModelParams::thirring(g).unwrap(), &p);
        assert!(r <= 1e-8, "Thirring gamma={g} alpha={a}: {r:e}");
    }
    for (g, w) in [(0.0, 0.6), (0.5, 0.7), (0.4, 0.3), (0.8, 0.5)] {
        let p = gross_neveu_soliton(g, w, &x).unwrap();
        let r = residual(&ModelParams::gross_neveu(g).unwrap(), &p);
        assert!(r <= 1e-8, "GN gamma={g} omega={w}: {r:e}");
    }
    for w in [0.72, 0.75, 0.8, 0.9] {
        let p = new_model_soliton_explicit(w, &x).unwrap();
        let r = residual(&ModelParams::new_model(0.0).unwrap(), &p);
        assert!(r <= 1e-8, "new model omega={w}: {r:e}");
    }
}

#[test]
fn residual_converges_at_fourth_order_or_better() {
    let cases: Vec<(ModelParams, Box<dyn Fn(&[f64]) -> SolitonProfile>)> = vec![
        (ModelParams::thirring(0.3).unwrap(), Box::new(|x: &[f64]| thirring_soliton(0.3, 0.6, x).unwrap())),
        (ModelParams::gross_neveu(0.5).unwrap(), Box::new(|x: &[f64]| gross_neveu_soliton(0.5, 0.7, x).unwrap())),
        (ModelParams::new_model(0.0).unwrap(), Box::new(|x: &[f64]| new_model_soliton_explicit(0.8, x).unwrap())),
    ];
    for (params, build) in cases {
        let r: Vec<f64> = [0.1, 0.05]
            .iter()
            .map(|&h| residual(&params, &build(&grid::with_spacing(30.0, h).unwrap())))
            .collect();
        let order = (r[0] / r[1]).log2();
        assert!(order >= 4.0, "{:?}: residuals {r:?}, order {order}", params.kind);
    }
}

#[test]
fn zero_field_has_zero_residual() {
    let x = grid::with_spacing(5.0, 0.1).unwrap();
    let mut p = new_model_soliton_explicit(0.8, &x).unwrap();
    p.a.iter_mut().chain(p.b.iter_mut()).for_each(|v| *v = 0.0);
    assert_eq!(residual(&ModelParams::general(0.4, -0.7, 0.5).unwrap(), &p), 0.0);
}

#[test]
fn thirring_examples() {
    let x = grid::with_spacing(10.0, 0.01).unwrap();
    let p = thirring_soliton(0.0, FRAC_PI_4, &x).unwrap();
    let mid = x.len() / 2;
    assert!((p.u()[mid].norm() - 2f64.sqrt()).abs() < 1e-12);
    for (a, b) in p.u().iter().zip(p.v()) {
        assert!((a.norm() - b.norm()).abs() < 1e-14);
    }
    let q = thirring_soliton(0.0, 1.1, &x).unwrap();
    assert!(q.u().iter().zip(q.v()).all(|(a, b)| (a.norm() - b.norm()).abs() < 1e-14));
    assert!((solitons::thirring_omega(0.6, FRAC_PI_2 - 1e-9) + 0.8).abs() < 1e-8);
    assert!(thirring_soliton(0.3, 0.0, &x).is_err());
    assert!(thirring_soliton(0.3, FRAC_PI_2, &x).is_err());
}

#[test]
fn thirring_charge_is_finite_and_positive() {
    let x = grid::with_spacing(30.0, 0.01).unwrap();
    let params = ModelParams::thirring(0.5).unwrap();
    for a in [0.2, 0.7, 1.3] {
        let p = thirring_soliton(0.5, a, &x).unwrap();
        let s = conservation_snapshot(&params, &x, &p.u(), &p.v()).unwrap();
        assert!(s.charge.is_finite() && s.charge > 0.0);
    }
}

#[test]
fn gross_neveu_examples() {
    let x = grid::with_spacing(20.0, 0.01).unwrap();
    assert!((gross_neveu_sigma(0.0, 0.6, 0.0) + 0.8).abs() < 1e-14);
    let p = gross_neveu_soliton(0.0, 0.6, &x).unwrap();
    let mid = x.len() / 2;
    assert!((p.a[mid] - 0.63246).abs() < 1e-5 && (p.b[mid] - 0.63246).abs() < 1e-5);
    for (k, &xk) in x.iter().enumerate() {
        let s = gross_neveu_sigma(0.0, 0.6, xk);
        let a2 = -(1.0 + 0.5 * s) * s / (2.0 * 0.6);
        assert!((p.a[k] * p.a[k] - a2).abs() < 1e-12);
        assert_eq!(p.a[k], p.b[k]);
    }
    let q = gross_neveu_soliton(0.5, 0.6, &x).unwrap();
    assert!(q.theta.windows(2).all(|w| w[1] <= w[0] + 1e-15));
    assert!(q.phi.windows(2).all(|w| w[1] >= w[0] - 1e-15));
    assert!(gross_neveu_soliton(0.3, 0.0, &x).is_err());
    assert!(gross_neveu_soliton(0.3, -0.4, &x).is_err());
}

#[test]
fn gross_neveu_amplitude_vanishes_at_gap_edge() {
    let x = grid::with_spacing(5.0, 0.01).unwrap();
    let g = 0.4;
    let top = (1.0f64 - g * g).sqrt();
    let peaks: Vec<f64> = [0.5, 0.7, 0.8, 0.85, 0.9, 0.9]
        .iter()
        .zip([0.0, 0.0, 0.0, 0.0, 0.0, 1e-3])
        .map(|(s, eps): (&f64, f64)| {
            let w = if eps > 0.0 { top - eps } else { top * s };
            gross_neveu_soliton(g, w, &x).unwrap().a.iter().fold(0.0, |m: f64, v| m.max(*v))
        })
        .collect();
    assert!(peaks.windows(2).all(|w| w[1] < w[0]), "{peaks:?}");
    assert!(peaks[5] < 0.1 * peaks[0]);
}

#[test]
fn new_model_examples() {
    let x = grid::with_spacing(30.0, 0.01).unwrap();
    let p = new_model_soliton_explicit(0.8, &x).unwrap();
    let mid = x.len() / 2;
    assert!((p.a[mid] - 0.4f64.sqrt()).abs() < 1e-12);
    assert!((p.theta[x.len() - 1] + (1.0f64 / 3.0).atan()).abs() < 1e-10);
    for k in 0..x.len() {
        let t = p.theta[k];
        assert!((4.0 * t).cos() > 0.0);
        assert!((p.phi[k] + t).abs() < 1e-15);
        // invariant manifold a^2 = 2 (cos 2 theta - omega) / cos 4 theta
        let m = 2.0 * ((2.0 * t).cos() - 0.8) / (4.0 * t).cos();
        assert!((p.a[k] * p.a[k] - m).abs() < 1e-12, "{k}");
        assert_eq!(p.a[k], p.b[k]);
    }
    assert!(new_model_soliton_explicit(0.7, &x).is_err());
    assert!(new_model_soliton_explicit(1.0, &x).is_err());
}

#[test]
fn discarded_branch_is_filtered() {
    let (_, asq) = new_model_phase(PhaseBranch::Kink, 0.8, 0.0);
    assert!(asq < 0.0);
}

#[test]
fn humps_against_dense_argmax() {
    let x: Vec<f64> = (0..=30000).map(|k| k as f64 * 1e-4).collect();
    let p = new_model_soliton_explicit(0.72, &x).unwrap();
    let k = (0..x.len()).max_by(|&i, &j| p.a[i].total_cmp(&p.a[j])).unwrap();
    match hump_locations(0.72).unwrap() {
        Humps::Bimodal { x_m } => {
            assert!((x_m - x[k]).abs() < 2e-4, "{x_m} vs {}", x[k]);
            assert!((x_m - 1.226).abs() < 2e-3);
        }
        Humps::Unimodal => panic!("0.72 should be bimodal"),
    }
    for w in [0.75, 0.8, 0.9] {
        assert_eq!(hump_locations(w).unwrap(), Humps::Unimodal);
        let p = new_model_soliton_explicit(w, &x).unwrap();
        assert!(p.a.windows(2).all(|s| s[1] <= s[0]), "{w}");
    }
    let far = |w| match hump_locations(w).unwrap() {
        Humps::Bimodal { x_m } => x_m,
        Humps::Unimodal => 0.0,
    };
    let edge = std::f64::consts::FRAC_1_SQRT_2;
    let seq: Vec<f64> = [0.72, 0.71, 0.7072, edge + 1e-6, edge + 1e-12].iter().map(|&w| far(w)).collect();
    assert!(seq.windows(2).all(|s| s[1] > s[0]) && seq[4] > 8.0, "{seq:?}");
}

#[test]
fn snapshot_of_zero_field_is_zero() {
    let x = grid::with_spacing(5.0, 0.1).unwrap();
    let z = vec![c(0.0, 0.0); x.len()];
    let s = conservation_snapshot(&ModelParams::thirring(0.0).unwrap(), &x, &z, &z).unwrap();
    assert_eq!((s.charge, s.energy, s.momentum), (0.0, 0.0, 0.0));
}

#[test]
fn thirring_charge_is_time_independent_for_the_soliton() {
    let x = grid::with_spacing(30.0, 0.01).unwrap();
    let params = ModelParams::thirring(0.3).unwrap();
    let p = thirring_soliton(0.3, 0.6, &x).unwrap();
    let q = |t: f64| {
        let s = p.state_at(t);
        conservation_snapshot(&params, &x, &s.u, &s.v).unwrap().charge
    };
    assert!((q(0.0) - q(7.3)).abs() < 1e-10);
}

// Analytic test fields with closed-form x-derivatives.
fn test_fields(x: f64) -> [Complex64; 4] {
    let u = c(0.7, 0.2) * (c(-0.5 * x * x, 0.3 * x)).exp();
    let ux = c(-x, 0.3) * u;
    let v = c(0.4, -0.5) * (c(-(x - 0.3).powi(2) / 3.0, -0.2 * x)).exp();
    let vx = c(-2.0 * (x - 0.3) / 3.0, -0.2) * v;
    [u, v, ux, vx]
}

fn d5(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (8.0 * (f(x + h) - f(x - h)) - (f(x + 2.0 * h) - f(x - 2.0 * h))) / (12.0 * h)
}

/// `max |D_t + F_x|` over a few points for the three density/flux pairs,
/// with `D_t` taken along the equations of motion.
fn balance_defect(params: &ModelParams) -> [f64; 3] {
    let time_derivs = |x: f64| {
        let [u, v, ux, vx] = test_fields(x);
        params.rhs(u, v, ux, vx)
    };
    let mut worst = [0.0f64; 3];
    for &x0 in &[-1.3, -0.4, 0.0, 0.55, 1.2] {
        let [u, v, ux, vx] = test_fields(x0);
        let (ut, vt) = time_derivs(x0);
        let dx = |f: &dyn Fn(f64) -> Complex64| {
            c(d5(|x| f(x).re, x0, 1e-3), d5(|x| f(x).im, x0, 1e-3))
        };
        let uxt = dx(&|x| time_derivs(x).0);
        let vxt = dx(&|x| time_derivs(x).1);
        let dens = |e: f64| {
            let lb = local_balance(params, u + e * ut, v + e * vt, ux + e * uxt, vx + e * vxt, ut, vt).unwrap();
            [lb.q, lb.h, lb.p]
        };
        let flux = |x: f64| {
            let [u, v, ux, vx] = test_fields(x);
            let (ut, vt) = time_derivs(x);
            let lb = local_balance(params, u, v, ux, vx, ut, vt).unwrap();
            [lb.j, lb.big_j, lb.phi]
        };
        for k in 0..3 {
            let dt = d5(|e| dens(e)[k], 0.0, 1e-3);
            let fx = d5(|x| flux(x)[k], x0, 1e-3);
            worst[k] = worst[k].max((dt + fx).abs());
        }
    }
    worst
}

#[test]
fn local_conservation_laws_hold_pointwise() {
    for params in [
        ModelParams::thirring(0.0).unwrap(),
        ModelParams::thirring(0.3).unwrap(),
        ModelParams::thirring(0.7).unwrap(),
        ModelParams::new_model(0.0).unwrap(),
        ModelParams::gross_neveu(0.0).unwrap(),
    ] {
        let d = balance_defect(&params);
        assert!(d.iter().all(|v| *v < 1e-7), "{:?} gamma={}: {d:?}", params.kind, params.gamma);
    }
}

#[test]
fn gross_neveu_with_gain_keeps_energy_and_momentum_but_not_charge() {
    let d = balance_defect(&ModelParams::gross_neveu(0.4).unwrap());
    assert!(d[1] < 1e-7 && d[2] < 1e-7, "{d:?}");
    assert!(d[0] > 1e-3, "{d:?}");
}

#[test]
fn densities_reduce_to_gain_free_forms() {
    let params = ModelParams::thirring(0.0).unwrap();
    let i = Complex64::i();
    for x in [-0.8, 0.1, 0.9] {
        let [u, v, ux, vx] = test_fields(x);
        let (ut, vt) = params.rhs(u, v, ux, vx);
        let lb = local_balance(&params, u, v, ux, vx, ut, vt).unwrap();
        let uu = u.norm_sqr();
        let vv = v.norm_sqr();
        let cross = (u * v.conj() + u.conj() * v).re;
        let kin = |f: Complex64, fx: Complex64| (0.5 * i * (fx * f.conj() - fx.conj() * f)).re;
        let kint = |f: Complex64, ft: Complex64| (0.5 * i * (ft.conj() * f - ft * f.conj())).re;
        assert!((lb.q - (uu + vv)).abs() < 1e-14);
        assert!((lb.j - (vv - uu)).abs() < 1e-14);
        assert!((lb.h - (kin(u, ux) - kin(v, vx) - cross - uu * vv)).abs() < 1e-14);
        assert!((lb.p - (kin(u, ux) + kin(v, vx))).abs() < 1e-14);
        assert!((lb.big_j - (kint(u, ut) - kint(v, vt))).abs() < 1e-14);
        assert!((lb.phi - (kint(u, ut) + kint(v, vt) - cross - uu * vv)).abs() < 1e-14);
    }
}
