use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spinorlab_core::models::ModelKind;
use spinorlab_core::solitons::SolitonProfile;
use spinorlab_core::stability::{
    assemble_pencil, collocation_mesh, soliton_on_mesh, soliton_spectrum, spectrum, BoundaryTreatment,
    Label, SpectrumConfig, Verdict,
};
use spinorlab_core::{Error, ModelParams};

#[test]
fn collocation_derivatives() {
    let m = collocation_mesh(64, 10.0).unwrap();
    assert_eq!(m.nodes[0], -10.0);
    assert_eq!(m.nodes[63], 10.0);
    let c = m.apply(&vec![3.0; 64]);
    assert!(c.iter().all(|v| v.abs() < 1e-10));
    let sq: Vec<f64> = m.nodes.iter().map(|x| x * x).collect();
    for (d, x) in m.apply(&sq).iter().zip(&m.nodes) {
        assert!((d - 2.0 * x).abs() < 1e-9);
    }
    let m = collocation_mesh(128, 10.0).unwrap();
    let f: Vec<f64> = m.nodes.iter().map(|x| (-x * x).exp()).collect();
    for (d, x) in m.apply(&f).iter().zip(&m.nodes) {
        assert!((d + 2.0 * x * (-x * x).exp()).abs() < 1e-10);
    }
    assert!(matches!(collocation_mesh(3, 1.0), Err(Error::GridTooCoarse(_))));
    assert!(collocation_mesh(10, 0.0).is_err());
}

fn constant_profile(nodes: &[f64], amp: f64, omega: f64, gamma: f64, model: ModelKind) -> SolitonProfile {
    let n = nodes.len();
    SolitonProfile {
        grid: nodes.to_vec(),
        a: vec![amp; n],
        b: vec![amp; n],
        theta: vec![0.0; n],
        phi: vec![0.0; n],
        omega,
        gamma,
        model,
    }
}

#[test]
fn toy_matrix_entries_by_hand() {
    // Thirring-like, f = g = 0.1 everywhere, gamma = 0.3, omega = 0.5
    let (gamma, omega, fg) = (0.3, 0.5, 0.1);
    let params = ModelParams::thirring(gamma).unwrap();
    let mesh = collocation_mesh(32, 5.0).unwrap();
    let profile = constant_profile(&mesh.nodes, fg, omega, gamma, ModelKind::Thirring);
    let p = assemble_pencil(&params, &profile, &mesh, BoundaryTreatment::Inflow).unwrap();
    let s = p.kept[0].len();
    assert_eq!(s, 31);
    assert_eq!(p.matrix.nrows(), 4 * 31);
    let k = 10;
    let node = p.kept[0][k];
    let k2 = p.kept[1].iter().position(|&j| j == node).unwrap();
    let (p1, q1, p2) = (0, s, 2 * s);
    // du/dt picks up i[(1 - gamma) dv + |v|^2 du + 2 Re(v dv) u] + i omega du,
    // with u = 0.1, v = -0.1
    let q1_p2 = 1.0 - gamma - 2.0 * fg * fg;
    let p1_q1 = -(omega + fg * fg);
    assert!((p.matrix[(q1 + k, p2 + k2)] - q1_p2).abs() < 1e-14);
    assert!((p.matrix[(p1 + k, q1 + k)] - p1_q1).abs() < 1e-14);
    assert!((p.matrix[(p1 + k, p1 + k)] - mesh.d(node, node)).abs() < 1e-14);
    assert!((p.matrix[(p1 + k, p1 + k + 1)] - mesh.d(node, node + 1)).abs() < 1e-14);
    assert!(p.realness_defect < 1e-15);
}

/// `z_t` from the equations of motion in the rotating frame, linearised by a
/// central difference in the perturbation size.
#[test]
fn pencil_is_the_linearised_flow() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let cases = [
        (ModelParams::new_model(0.3).unwrap(), 0.8),
        (ModelParams::new_model(0.5).unwrap(), 0.653),
        (ModelParams::thirring(0.4).unwrap(), 0.2),
        (ModelParams::gross_neveu(0.2).unwrap(), 0.5),
    ];
    for (params, omega) in cases {
        let mesh = collocation_mesh(40, 10.0).unwrap();
        let n = mesh.len();
        let prof = soliton_on_mesh(&params, omega, &mesh).unwrap();
        for bnd in [BoundaryTreatment::Inflow, BoundaryTreatment::Dirichlet] {
            let pen = assemble_pencil(&params, &prof, &mesh, bnd).unwrap();
            let dim = pen.matrix.nrows();
            let vec: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
            let s = [pen.kept[0].len(), pen.kept[1].len()];
            let off = [0, s[0], 2 * s[0], 2 * s[0] + s[1]];
            let mut z = [vec![Complex64::new(0.0, 0.0); n], vec![Complex64::new(0.0, 0.0); n]];
            for pair in 0..2 {
                for (r, &node) in pen.kept[pair].iter().enumerate() {
                    z[pair][node] = Complex64::new(vec[off[2 * pair] + r], vec[off[2 * pair + 1] + r]);
                }
            }
            let (u0, v0) = (prof.u(), prof.v());
            let flow = |eps: f64| -> [Vec<Complex64>; 2] {
                let u: Vec<Complex64> = (0..n).map(|j| u0[j] + eps * z[0][j]).collect();
                let v: Vec<Complex64> = (0..n).map(|j| v0[j] + eps * z[1][j]).collect();
                let d = |f: &[Complex64]| -> Vec<Complex64> {
                    let re: Vec<f64> = f.iter().map(|c| c.re).collect();
                    let im: Vec<f64> = f.iter().map(|c| c.im).collect();
                    mesh.apply(&re).into_iter().zip(mesh.apply(&im)).map(|(a, b)| Complex64::new(a, b)).collect()
                };
                let (ux, vx) = (d(&u), d(&v));
                let mut out = [Vec::with_capacity(n), Vec::with_capacity(n)];
                for j in 0..n {
                    let (ut, vt) = params.rhs(u[j], v[j], ux[j], vx[j]);
                    let iw = Complex64::new(0.0, omega);
                    out[0].push(ut + iw * u[j]);
                    out[1].push(vt + iw * v[j]);
                }
                out
            };
            let eps = 1e-4;
            let (fp, fm) = (flow(eps), flow(-eps));
            let mut worst = 0.0f64;
            for pair in 0..2 {
                for (r, &node) in pen.kept[pair].iter().enumerate() {
                    let dz = (fp[pair][node] - fm[pair][node]) / (2.0 * eps);
                    let row = |blk: usize| (0..dim).map(|c| pen.matrix[(off[blk] + r, c)] * vec[c]).sum::<f64>();
                    worst = worst.max((row(2 * pair) - dz.re).abs()).max((row(2 * pair + 1) - dz.im).abs());
                }
            }
            assert!(worst < 1e-6, "{:?} {bnd:?}: {worst:e}", params.kind);
        }
    }
}

#[test]
fn free_field_spectrum_lies_outside_the_gap() {
    let params = ModelParams::new_model(0.3).unwrap();
    for bnd in [BoundaryTreatment::Inflow, BoundaryTreatment::Dirichlet] {
        let mut cfg = SpectrumConfig::new(120, 20.0);
        cfg.boundary = bnd;
        let mesh = collocation_mesh(cfg.n, cfg.half_width).unwrap();
        let prof = constant_profile(&mesh.nodes, 0.0, 0.8, 0.3, ModelKind::NewModel);
        let s = spectrum(&params, &prof, &cfg).unwrap();
        let kept: Vec<_> = s.eigenvalues.iter().filter(|e| e.label != Label::Spurious).collect();
        assert!(!kept.is_empty());
        for e in kept {
            assert!(e.value.im.abs() >= s.gaps.0 - 1e-6, "{bnd:?}: {}", e.value);
            match bnd {
                // radiation leaves through the outflow ends
                BoundaryTreatment::Inflow => assert!(e.value.re <= 1e-12),
                BoundaryTreatment::Dirichlet => assert!(e.value.re.abs() < 1e-10),
            }
        }
        assert_eq!(s.verdict, Verdict::Stable);
    }
}

#[test]
fn spectrum_is_closed_under_conjugation() {
    let params = ModelParams::new_model(0.5).unwrap();
    let s = soliton_spectrum(&params, 0.653, &SpectrumConfig::new(120, 30.0)).unwrap();
    for e in &s.eigenvalues {
        let partner = s.eigenvalues.iter().map(|f| (f.value - e.value.conj()).norm()).fold(f64::MAX, f64::min);
        assert!(partner < 1e-8 * (1.0 + e.value.norm()));
    }
    let mut sorted = s.eigenvalues.iter().map(|e| e.value.re);
    let first = sorted.next().unwrap();
    assert!(sorted.all(|r| r <= first));
}

#[test]
fn high_frequency_soliton_is_stable() {
    let params = ModelParams::new_model(0.0).unwrap();
    let s = soliton_spectrum(&params, 0.9, &SpectrumConfig::new(200, 40.0)).unwrap();
    assert_eq!(s.verdict, Verdict::Stable);
    assert!(s.max_growth < 3e-3);
    assert!((s.gaps.0 - 0.1).abs() < 1e-12 && (s.gaps.1 - 1.9).abs() < 1e-12);
}

#[test]
fn low_frequency_soliton_near_the_boundary_is_unstable() {
    let params = ModelParams::new_model(0.5).unwrap();
    let s = soliton_spectrum(&params, 0.653, &SpectrumConfig::new(200, 40.0)).unwrap();
    assert_eq!(s.verdict, Verdict::Unstable);
    let lead = s.leading().unwrap();
    assert!((lead.re - 0.332).abs() < 0.02 && (lead.im.abs() - 0.328).abs() < 0.02, "{lead}");
}

#[test]
fn collapsed_gap_is_an_error() {
    let params = ModelParams::new_model(0.3).unwrap();
    let mesh = collocation_mesh(16, 5.0).unwrap();
    let prof = constant_profile(&mesh.nodes, 0.0, 0.96, 0.3, ModelKind::NewModel);
    let cfg = SpectrumConfig::new(16, 5.0);
    assert!(matches!(spectrum(&params, &prof, &cfg), Err(Error::GapCollapse(..))));
}

#[test]
fn resolution_limit_scales_with_node_density() {
    let a = SpectrumConfig::new(200, 40.0).resolution_limit();
    let b = SpectrumConfig::new(400, 40.0).resolution_limit();
    let c = SpectrumConfig::new(400, 80.0).resolution_limit();
    assert!((b - 2.0 * a).abs() < 1e-12 && (c - a).abs() < 1e-12);
}

fn mirror_defect(s: &spinorlab_core::stability::Spectrum, l: Complex64) -> f64 {
    let near = |t: Complex64| s.eigenvalues.iter().map(|e| (e.value - t).norm()).fold(f64::MAX, f64::min);
    near(-l).max(near(l.conj())).max(near(-l.conj()))
}

#[test]
fn unstable_eigenvalues_come_in_quadruplets() {
    for (gamma, omega) in [(0.5, 0.653), (0.3, 0.7)] {
        let params = ModelParams::new_model(gamma).unwrap();
        let mut cfg = SpectrumConfig::new(200, 40.0);
        cfg.boundary = BoundaryTreatment::Dirichlet;
        let s = soliton_spectrum(&params, omega, &cfg).unwrap();
        let unstable: Vec<_> = s.eigenvalues.iter().filter(|e| e.label != Label::Spurious && e.value.re > 0.003).collect();
        assert!(!unstable.is_empty());
        for e in unstable {
            assert!(mirror_defect(&s, e.value) < 1e-6, "({gamma}, {omega}) {}", e.value);
        }
    }
}

/// Outflow ends break the time-reversal half of the symmetry by a
/// boundary term that decays with the box; localized modes recover it.
#[test]
fn inflow_quadruplets_close_as_the_box_grows() {
    let params = ModelParams::new_model(0.5).unwrap();
    let bound = |n: usize, l: f64| {
        let s = soliton_spectrum(&params, 0.653, &SpectrumConfig::new(n, l)).unwrap();
        let local: Vec<_> = s.eigenvalues.iter().filter(|e| e.label != Label::Spurious && e.value.re > 0.05).collect();
        assert_eq!(local.len(), 8);
        assert!(local.iter().all(|e| e.edge_fraction < 1e-3));
        local.iter().map(|e| mirror_defect(&s, e.value)).fold(0.0, f64::max)
    };
    let (coarse, fine) = (bound(200, 40.0), bound(400, 80.0));
    assert!(fine < 1e-6, "{fine:e}");
    assert!(fine < 1e-2 * coarse);
}
