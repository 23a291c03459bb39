//! Linear stability spectra by Chebyshev collocation.
//!
//! Perturbing `u = (f + z1) e^{-i omega t}`, `v = (-g + z2) e^{-i omega t}`
//! and the conjugates by `z3`, `z4` gives `H z = i lambda J z` with
//! `J = diag(-1, -1, 1, 1)`. The operator `M = -i J^{-1} H` commutes with
//! the antilinear map `(z1, z2, z3, z4) -> (z3*, z4*, z1*, z2*)`, so in the
//! coordinates `z1 = p1 + i q1`, `z3 = p1 - i q1` (and likewise for
//! `z2`, `z4`) it is a real matrix. The eigenproblem is solved in that form.

use crate::existence;
use crate::grid::LocalInterpolant;
use crate::models::{ModelKind, ModelParams};
use crate::solitons::{self, SolitonProfile};
use crate::{ptquad, Error, Result};
use faer::Mat;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Chebyshev-Gauss-Lobatto nodes on `[-L, L]` (increasing) and the
/// differentiation matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ChebMesh {
    pub nodes: Vec<f64>,
    pub diff: Vec<f64>,
    pub half_width: f64,
}

impl ChebMesh {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn d(&self, i: usize, j: usize) -> f64 {
        self.diff[i * self.nodes.len() + j]
    }

    /// Derivative of sampled values.
    pub fn apply(&self, f: &[f64]) -> Vec<f64> {
        let n = self.nodes.len();
        (0..n).map(|i| (0..n).map(|j| self.d(i, j) * f[j]).sum()).collect()
    }
}

pub fn collocation_mesh(n: usize, half_width: f64) -> Result<ChebMesh> {
    if n < 4 || !(half_width > 0.0) {
        return Err(Error::GridTooCoarse(format!("mesh needs n >= 4 and L > 0, got {n}, {half_width}")));
    }
    let m = n - 1;
    // t_j = cos(pi j / m) runs from 1 to -1; x_j = -L t_j increases
    let t: Vec<f64> = (0..n).map(|j| (PI * j as f64 / m as f64).cos()).collect();
    let c = |j: usize| -> f64 {
        let base = if j == 0 || j == m { 2.0 } else { 1.0 };
        if j.is_multiple_of(2) { base } else { -base }
    };
    let mut diff = vec![0.0; n * n];
    for i in 0..n {
        let mut row = 0.0;
        for j in 0..n {
            if i != j {
                // differences of cosines via the product formula keep accuracy
                let dt = -2.0 * (0.5 * PI * (i + j) as f64 / m as f64).sin()
                    * (0.5 * PI * (i as f64 - j as f64) / m as f64).sin();
                let v = c(i) / c(j) / dt;
                diff[i * n + j] = v;
                row += v;
            }
        }
        diff[i * n + i] = -row;
    }
    // d/dx = -(1/L) d/dt
    for v in diff.iter_mut() {
        *v *= -1.0 / half_width;
    }
    Ok(ChebMesh { nodes: t.iter().map(|tj| -half_width * tj).collect(), diff, half_width })
}

/// Which boundary values are removed from the collocation system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryTreatment {
    /// Drop both end nodes for every component. Over-determined for the
    /// transport part; kept for comparison.
    Dirichlet,
    /// Drop only the inflow end of each component (`+L` for the left-moving
    /// `z1`, `z3`; `-L` for `z2`, `z4`).
    Inflow,
}

/// Real form of `M = -i J^{-1} H` on the retained nodes.
///
/// Unknowns are ordered `[p1, q1, p2, q2]`, each block over the retained
/// nodes of its component pair.
#[derive(Debug, Clone)]
pub struct Pencil {
    pub matrix: Mat<f64>,
    /// Mesh indices kept for the pairs `(z1, z3)` and `(z2, z4)`.
    pub kept: [Vec<usize>; 2],
    /// Largest imaginary part discarded when forming the real matrix.
    pub realness_defect: f64,
}

/// Pointwise (non-derivative) part of `H` at one node, rows and columns in
/// the order `(z1, z2, z3, z4)`.
pub fn local_block(params: &ModelParams, omega: f64, f: Complex64, g: Complex64) -> [[Complex64; 4]; 4] {
    let (ca, cb) = (params.cubic_a, params.cubic_b);
    let gm = params.gamma;
    let z = Complex64::new(0.0, 0.0);
    let w = Complex64::new(omega, 0.0);
    let (fc, gc) = (f.conj(), g.conj());
    let ff = f.norm_sqr();
    let gg = g.norm_sqr();
    let mut h = [[z; 4]; 4];
    h[0][0] = w + ca * gg;
    h[0][1] = Complex64::from(1.0 - gm) - ca * f * gc - 2.0 * cb * fc * g;
    h[0][2] = cb * g * g;
    h[0][3] = -ca * f * g;
    h[1][0] = Complex64::from(1.0 + gm) - ca * fc * g - 2.0 * cb * f * gc;
    h[1][1] = w + ca * ff;
    h[1][2] = -ca * f * g;
    h[1][3] = cb * f * f;
    h[2][0] = cb * gc * gc;
    h[2][1] = -ca * fc * gc;
    h[2][2] = w + ca * gg;
    h[2][3] = Complex64::from(1.0 - gm) - ca * fc * g - 2.0 * cb * f * gc;
    h[3][0] = -ca * fc * gc;
    h[3][1] = cb * fc * fc;
    h[3][2] = Complex64::from(1.0 + gm) - ca * f * gc - 2.0 * cb * fc * g;
    h[3][3] = w + ca * ff;
    h
}

/// Soliton components `(f, g)` with `u = f`, `v = -g`, sampled on the mesh.
fn sample_profile(profile: &SolitonProfile, mesh: &ChebMesh) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    let same = profile.grid.len() == mesh.len()
        && profile.grid.iter().zip(&mesh.nodes).all(|(a, b)| (a - b).abs() <= 1e-12 * mesh.half_width);
    let u = profile.u();
    let g: Vec<Complex64> = profile.v().into_iter().map(|z| -z).collect();
    if same {
        return Ok((u, g));
    }
    let (lo, hi) = (profile.grid[0], profile.grid[profile.grid.len() - 1]);
    if (lo > -mesh.half_width + 1e-9 || hi < mesh.half_width - 1e-9) && profile.boundary_amplitude() > 1e-10 {
        return Err(Error::MeshMismatch(format!(
            "profile covers [{lo}, {hi}] but the mesh needs [-{0}, {0}]",
            mesh.half_width
        )));
    }
    let iu = LocalInterpolant::new(&profile.grid, &u, 8)?;
    let ig = LocalInterpolant::new(&profile.grid, &g, 8)?;
    let clean = |z: Complex64| if z.norm() < 1e-14 { Complex64::new(0.0, 0.0) } else { z };
    Ok((
        mesh.nodes.iter().map(|&x| clean(iu.eval(x))).collect(),
        mesh.nodes.iter().map(|&x| clean(ig.eval(x))).collect(),
    ))
}

pub fn assemble_pencil(
    params: &ModelParams,
    profile: &SolitonProfile,
    mesh: &ChebMesh,
    boundary: BoundaryTreatment,
) -> Result<Pencil> {
    let n = mesh.len();
    let (f, g) = sample_profile(profile, mesh)?;
    let kept: [Vec<usize>; 2] = match boundary {
        BoundaryTreatment::Dirichlet => [(1..n - 1).collect(), (1..n - 1).collect()],
        BoundaryTreatment::Inflow => [(0..n - 1).collect(), (1..n).collect()],
    };
    let sizes = [kept[0].len(), kept[1].len()];
    // block offsets of p1, q1, p2, q2
    let off = [0, sizes[0], 2 * sizes[0], 2 * sizes[0] + sizes[1]];
    let dim = 2 * (sizes[0] + sizes[1]);

    // M = i J' H with J' = diag(1, 1, -1, -1)
    let sgn = [1.0, 1.0, -1.0, -1.0];
    let i = Complex64::i();
    // z_c = p + i q (c < 2), z_{c+2} = p - i q
    let col = [Complex64::new(1.0, 0.0), i];
    let col_conj = [Complex64::new(1.0, 0.0), -i];
    let row = [Complex64::new(0.5, 0.0), Complex64::new(0.0, -0.5)];
    let row_conj = [Complex64::new(0.5, 0.0), Complex64::new(0.0, 0.5)];

    let mut mat = Mat::<f64>::zeros(dim, dim);
    let mut defect = 0.0f64;
    let mut pos = vec![[usize::MAX; 2]; n];
    for pair in 0..2 {
        for (k, &node) in kept[pair].iter().enumerate() {
            pos[node][pair] = k;
        }
    }
    // pointwise part
    for node in 0..n {
        let h = local_block(params, profile.omega, f[node], g[node]);
        let mut m = [[Complex64::new(0.0, 0.0); 4]; 4];
        for a in 0..4 {
            for b in 0..4 {
                m[a][b] = i * sgn[a] * h[a][b];
            }
        }
        for rp in 0..2 {
            let r = pos[node][rp];
            if r == usize::MAX {
                continue;
            }
            for cp in 0..2 {
                let c = pos[node][cp];
                if c == usize::MAX {
                    continue;
                }
                for rk in 0..2 {
                    for ck in 0..2 {
                        let v = row[rk] * (m[rp][cp] * col[ck] + m[rp][cp + 2] * col_conj[ck])
                            + row_conj[rk] * (m[rp + 2][cp] * col[ck] + m[rp + 2][cp + 2] * col_conj[ck]);
                        defect = defect.max(v.im.abs());
                        mat[(off[2 * rp + rk] + r, off[2 * cp + ck] + c)] += v.re;
                    }
                }
            }
        }
    }
    // transport: z1, z3 carry +D, z2, z4 carry -D; the real form keeps
    // the same operator on p and q
    for pair in 0..2 {
        let s = if pair == 0 { 1.0 } else { -1.0 };
        for (r, &ni) in kept[pair].iter().enumerate() {
            for (c, &nj) in kept[pair].iter().enumerate() {
                let d = s * mesh.d(ni, nj);
                mat[(off[2 * pair] + r, off[2 * pair] + c)] += d;
                mat[(off[2 * pair + 1] + r, off[2 * pair + 1] + c)] += d;
            }
        }
    }
    Ok(Pencil { matrix: mat, kept, realness_defect: defect })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Label {
    Discrete,
    Continuous,
    Spurious,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eigenvalue {
    pub value: Complex64,
    pub label: Label,
    /// Share of the eigenvector norm on the outermost nodes.
    pub edge_fraction: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Stable,
    Unstable,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<Eigenvalue>,
    pub max_growth: f64,
    pub verdict: Verdict,
    /// Continuous spectrum edges `sqrt(1 - gamma^2) -+ omega`.
    pub gaps: (f64, f64),
}

impl Spectrum {
    /// Non-spurious eigenvalue with the largest real part.
    pub fn leading(&self) -> Option<Complex64> {
        self.eigenvalues
            .iter()
            .filter(|e| e.label != Label::Spurious)
            .map(|e| e.value)
            .max_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumConfig {
    pub n: usize,
    pub half_width: f64,
    pub boundary: BoundaryTreatment,
    /// Growth rates above this flag instability.
    pub growth_threshold: f64,
    /// Eigenvectors with more than this share on the outer nodes are spurious.
    pub edge_threshold: f64,
    /// Share of nodes at each end counted as outer.
    pub edge_nodes: f64,
}

impl SpectrumConfig {
    /// Largest `|Im lambda|` the mesh resolves: about pi nodes per wavelength
    /// at the centre, where the spacing is `pi L / N`.
    pub fn resolution_limit(&self) -> f64 {
        2.0 * self.n as f64 / (PI * self.half_width)
    }

    pub fn new(n: usize, half_width: f64) -> Self {
        Self {
            n,
            half_width,
            boundary: BoundaryTreatment::Inflow,
            growth_threshold: 0.003,
            edge_threshold: 0.2,
            edge_nodes: 0.05,
        }
    }
}

pub fn gaps(gamma: f64, omega: f64) -> (f64, f64) {
    let top = (1.0 - gamma * gamma).sqrt();
    (top - omega, top + omega)
}

pub fn spectrum(params: &ModelParams, profile: &SolitonProfile, cfg: &SpectrumConfig) -> Result<Spectrum> {
    let gap = gaps(params.gamma, profile.omega);
    if !(gap.0 > 0.0) {
        return Err(Error::GapCollapse(gap.0, gap.1));
    }
    let mesh = collocation_mesh(cfg.n, cfg.half_width)?;
    let pencil = assemble_pencil(params, profile, &mesh, cfg.boundary)?;
    if pencil.realness_defect > 1e-12 {
        return Err(Error::EigensolveFailure(format!(
            "real reduction left imaginary entries of size {:e}",
            pencil.realness_defect
        )));
    }
    let eig = pencil
        .matrix
        .eigen()
        .map_err(|e| Error::EigensolveFailure(format!("{e:?}")))?;
    let values = eig.S().column_vector();
    let vectors = eig.U();
    let n = mesh.len();
    let outer = ((cfg.edge_nodes * n as f64).ceil() as usize).max(1);
    let is_outer = |node: usize| node < outer || node >= n - outer;
    let sizes = [pencil.kept[0].len(), pencil.kept[1].len()];
    let off = [0, sizes[0], 2 * sizes[0], 2 * sizes[0] + sizes[1]];
    let mut out = Vec::with_capacity(values.nrows());
    let mut max_growth = f64::NEG_INFINITY;
    let kmax = cfg.resolution_limit();
    for k in 0..values.nrows() {
        let lam: Complex64 = values[k];
        if !lam.re.is_finite() || !lam.im.is_finite() {
            return Err(Error::EigensolveFailure("non-finite eigenvalue".into()));
        }
        let (mut total, mut edge) = (0.0, 0.0);
        for blk in 0..4 {
            let pair = blk / 2;
            for (r, &node) in pencil.kept[pair].iter().enumerate() {
                let w: f64 = vectors[(off[blk] + r, k)].norm_sqr();
                total += w;
                if is_outer(node) {
                    edge += w;
                }
            }
        }
        let edge_fraction = if total > 0.0 { edge / total } else { 0.0 };
        let label = if edge_fraction > cfg.edge_threshold || lam.im.abs() > kmax {
            Label::Spurious
        } else if lam.re.abs() < 1e-8 && lam.im.abs() >= gap.0 - 1e-8 {
            Label::Continuous
        } else {
            Label::Discrete
        };
        if label != Label::Spurious {
            max_growth = max_growth.max(lam.re);
        }
        out.push(Eigenvalue { value: lam, label, edge_fraction });
    }
    out.sort_by(|a, b| b.value.re.total_cmp(&a.value.re).then(a.value.im.total_cmp(&b.value.im)));
    let verdict = if max_growth > cfg.growth_threshold { Verdict::Unstable } else { Verdict::Stable };
    Ok(Spectrum { eigenvalues: out, max_growth, verdict, gaps: gap })
}

/// Builds the soliton for `params` at frequency `omega` directly on the
/// collocation nodes.
pub fn soliton_on_mesh(params: &ModelParams, omega: f64, mesh: &ChebMesh) -> Result<SolitonProfile> {
    let g = params.gamma;
    match params.kind {
        ModelKind::Thirring => solitons::thirring_soliton(g, solitons::thirring_alpha(g, omega)?, &mesh.nodes),
        ModelKind::GrossNeveu => solitons::gross_neveu_soliton(g, omega, &mesh.nodes),
        ModelKind::NewModel if g == 0.0 => solitons::new_model_soliton_explicit(omega, &mesh.nodes),
        ModelKind::NewModel => ptquad::new_model_pt_soliton(omega, g, &mesh.nodes),
        ModelKind::GeneralCubic => Err(Error::param("no soliton constructor for a general cubic model")),
    }
}

/// Spectrum of the soliton at `(omega, gamma)` for a tagged model.
pub fn soliton_spectrum(params: &ModelParams, omega: f64, cfg: &SpectrumConfig) -> Result<Spectrum> {
    let mesh = collocation_mesh(cfg.n, cfg.half_width)?;
    let profile = soliton_on_mesh(params, omega, &mesh)?;
    spectrum(params, &profile, cfg)
}

/// Result of the onset search along one `gamma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Onset {
    pub gamma: f64,
    pub omega_c: f64,
    /// Upper edge of the instability band; `None` if the band is empty at
    /// the bottom of the domain.
    pub omega_inst: Option<f64>,
}

/// Bisects in `omega` for the upper edge of the instability band adjacent to
/// `omega_c(gamma)`, to tolerance `tol`.
pub fn instability_onset(gamma: f64, cfg: &SpectrumConfig, tol: f64) -> Result<Onset> {
    let params = ModelParams::new_model(gamma)?;
    let omega_c = existence::omega_c(gamma)?;
    let top = (1.0 - gamma * gamma).sqrt();
    let unstable = |w: f64| -> Result<bool> {
        Ok(soliton_spectrum(&params, w, cfg)?.verdict == Verdict::Unstable)
    };
    let mut lo = omega_c + tol.min(1e-3);
    if 2.0 * lo * lo == 1.0 {
        lo += 1e-9;
    }
    if !unstable(lo)? {
        return Ok(Onset { gamma, omega_c, omega_inst: None });
    }
    let mut hi = top - tol.min(1e-3);
    if unstable(hi)? {
        return Ok(Onset { gamma, omega_c, omega_inst: Some(hi) });
    }
    while hi - lo > tol {
        let mut mid = 0.5 * (lo + hi);
        if (2.0 * mid * mid - 1.0).abs() < 1e-12 {
            mid += 1e-9;
        }
        if unstable(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Onset { gamma, omega_c, omega_inst: Some(0.5 * (lo + hi)) })
}
