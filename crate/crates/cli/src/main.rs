mod output;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;
use spinorlab_core::evolution::{evolve, perturb, EvolveConfig, Outcome, PerturbMode};
use spinorlab_core::existence::{self, Classification};
use spinorlab_core::models::{stationary_residual, ModelParams};
use spinorlab_core::solitons::{self, Humps, SolitonProfile};
use spinorlab_core::stability::{self, BoundaryTreatment, SpectrumConfig};
use spinorlab_core::{grid, ptquad, Error};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use output::{fmt, CsvWriter, Failure};

#[derive(Parser, Debug)]
#[command(name = "spinorlab", version, about = "Solitons, spectra and dynamics of PT-symmetric cubic Dirac models")]
struct Cli {
    /// Output directory.
    #[arg(long, global = true, env = "SPINORLAB_OUT", default_value = "spinorlab-out")]
    out: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
enum Command {
    /// Build a soliton profile and check its stationary residual.
    Soliton(SolitonArgs),
    /// Tabulate the existence domain of the new model.
    Domain(DomainArgs),
    /// Linear stability spectrum, or the instability onset with `--onset`.
    Spectrum(SpectrumArgs),
    /// Evolve a soliton in time.
    Evolve(EvolveArgs),
    /// Rerun the command recorded in a meta.json file.
    #[serde(skip)]
    Replay { meta: PathBuf },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum Model {
    Thirring,
    #[value(alias = "gn")]
    GrossNeveu,
    #[value(alias = "new-model")]
    Newmodel,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
struct SolitonSpec {
    #[arg(long, value_enum)]
    model: Model,
    #[arg(long, default_value_t = 0.0)]
    gamma: f64,
    /// Frequency; for Thirring either this or `--alpha`.
    #[arg(long, allow_hyphen_values = true)]
    omega: Option<f64>,
    /// Thirring soliton parameter in (0, pi/2).
    #[arg(long)]
    alpha: Option<f64>,
    /// Run every listed omega as a separate point in `omega_NNN/`, in parallel.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with_all = ["omega", "alpha"])]
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    sweep: Vec<f64>,
    /// Worker threads for `--sweep`; 0 uses all cores.
    #[arg(long, default_value_t = 0)]
    #[serde(default)]
    workers: usize,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
struct SolitonArgs {
    #[command(flatten)]
    spec: SolitonSpec,
    /// Half-width of the grid.
    #[arg(long = "L", default_value_t = 30.0)]
    half_width: f64,
    /// Number of grid points.
    #[arg(long = "n", default_value_t = 6001)]
    points: usize,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
struct DomainArgs {
    /// Number of gamma values in (0, 1).
    #[arg(long, default_value_t = 99)]
    samples: usize,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum Boundary {
    Inflow,
    Dirichlet,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
struct SpectrumArgs {
    #[command(flatten)]
    spec: SolitonSpec,
    /// Chebyshev nodes.
    #[arg(long = "N", default_value_t = 800)]
    nodes: usize,
    #[arg(long = "L", default_value_t = 40.0)]
    half_width: f64,
    #[arg(long, value_enum, default_value_t = Boundary::Inflow)]
    boundary: Boundary,
    /// Tabulate the upper edge of the instability band instead (new model).
    #[arg(long)]
    onset: bool,
    /// Gamma values for `--onset`.
    #[arg(long, value_delimiter = ',', default_value = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9")]
    gammas: Vec<f64>,
    /// Bisection tolerance in omega for `--onset`.
    #[arg(long, default_value_t = 1e-3)]
    tol: f64,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum Perturbation {
    Amplitude,
    Noise,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
struct EvolveArgs {
    #[command(flatten)]
    spec: SolitonSpec,
    #[arg(long = "L", default_value_t = 60.0)]
    half_width: f64,
    /// Grid spacing, which is also the time step.
    #[arg(long, default_value_t = 0.02)]
    dx: f64,
    #[arg(long, default_value_t = 50.0)]
    t_final: f64,
    #[arg(long, value_enum)]
    perturb: Option<Perturbation>,
    #[arg(long, default_value_t = 0.01)]
    eps: f64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 0.1)]
    ledger_every: f64,
    /// Interval between `state_t*.csv` snapshots; final state only if absent.
    #[arg(long)]
    snapshot_every: Option<f64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command, &cli.out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn sweep_spec(command: &mut Command) -> Option<&mut SolitonSpec> {
    match command {
        Command::Soliton(a) => Some(&mut a.spec),
        Command::Spectrum(a) if !a.onset => Some(&mut a.spec),
        Command::Evolve(a) => Some(&mut a.spec),
        _ => None,
    }
}

/// Fans the omega list out over worker threads; each point is an ordinary
/// single run with its own meta.json.
fn run_sweep(command: &Command, out: &Path) -> Result<(), Failure> {
    let mut base = command.clone();
    let spec = sweep_spec(&mut base).expect("sweep on a sweepable command");
    let omegas = std::mem::take(&mut spec.sweep);
    let workers = match spec.workers {
        0 => std::thread::available_parallelism().map_or(1, |n| n.get()),
        w => w,
    };
    std::fs::create_dir_all(out).map_err(Failure::io)?;
    let next = std::sync::atomic::AtomicUsize::new(0);
    let mut codes = vec![0u8; omegas.len()];
    let slots: Vec<std::sync::Mutex<&mut u8>> = codes.iter_mut().map(std::sync::Mutex::new).collect();
    std::thread::scope(|scope| {
        for _ in 0..workers.min(omegas.len()) {
            scope.spawn(|| loop {
                let k = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                let Some(&w) = omegas.get(k) else { break };
                let mut point = base.clone();
                sweep_spec(&mut point).unwrap().omega = Some(w);
                let code = match run(&point, &out.join(format!("omega_{k:03}"))) {
                    Ok(()) => 0,
                    Err(f) => {
                        eprintln!("omega {w}: {}", f.message());
                        f.code()
                    }
                };
                **slots[k].lock().unwrap() = code;
            });
        }
    });
    drop(slots);
    let points: Vec<_> = omegas
        .iter()
        .zip(&codes)
        .enumerate()
        .map(|(k, (w, c))| json!({ "omega": w, "dir": format!("omega_{k:03}"), "exit_code": c }))
        .collect();
    output::write_meta(out, command, json!({ "points": points }))?;
    match codes.iter().max().copied().unwrap_or(0) {
        0 => Ok(()),
        c => Err(Failure::Sweep(c)),
    }
}

fn run(command: &Command, out: &Path) -> Result<(), Failure> {
    let mut probe = command.clone();
    if sweep_spec(&mut probe).is_some_and(|s| !s.sweep.is_empty()) {
        return run_sweep(command, out);
    }
    std::fs::create_dir_all(out).map_err(Failure::io)?;
    let results = match command {
        Command::Soliton(a) => cmd_soliton(a, out)?,
        Command::Domain(a) => cmd_domain(a, out)?,
        Command::Spectrum(a) => cmd_spectrum(a, out)?,
        Command::Evolve(a) => return cmd_evolve(a, command, out),
        Command::Replay { meta } => return replay(meta, out),
    };
    output::write_meta(out, command, results)
}

fn replay(meta: &Path, out: &Path) -> Result<(), Failure> {
    let text = std::fs::read_to_string(meta).map_err(Failure::io)?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| Failure::Validation(e.to_string()))?;
    let command: Command = serde_json::from_value(value["command"].clone())
        .map_err(|e| Failure::Validation(format!("{}: no replayable command: {e}", meta.display())))?;
    run(&command, out)
}

fn params_for(model: Model, gamma: f64) -> Result<ModelParams, Error> {
    match model {
        Model::Thirring => ModelParams::thirring(gamma),
        Model::GrossNeveu => ModelParams::gross_neveu(gamma),
        Model::Newmodel => ModelParams::new_model(gamma),
    }
}

fn need_omega(spec: &SolitonSpec) -> Result<f64, Failure> {
    spec.omega.ok_or_else(|| Failure::Validation("--omega is required for this model".into()))
}

/// Frequency of the requested soliton.
fn resolved_omega(spec: &SolitonSpec) -> Result<f64, Failure> {
    match (spec.model, spec.alpha, spec.omega) {
        (Model::Thirring, Some(_), Some(_)) => Err(Failure::Validation("give either --alpha or --omega".into())),
        (Model::Thirring, Some(a), None) => Ok(solitons::thirring_omega(spec.gamma, a)),
        (Model::Thirring, None, None) => Err(Failure::Validation("--alpha or --omega is required".into())),
        (_, Some(_), _) => Err(Failure::Validation("--alpha only applies to the Thirring model".into())),
        _ => need_omega(spec),
    }
}

/// Builds the profile on `x`; returns it with a short construction tag.
fn build_profile(spec: &SolitonSpec, x: &[f64]) -> Result<(SolitonProfile, &'static str), Failure> {
    let g = spec.gamma;
    match spec.model {
        Model::Thirring => {
            let alpha = match spec.alpha {
                Some(a) => a,
                None => solitons::thirring_alpha(g, resolved_omega(spec)?)?,
            };
            Ok((solitons::thirring_soliton(g, alpha, x)?, "closed-form"))
        }
        Model::GrossNeveu => Ok((solitons::gross_neveu_soliton(g, need_omega(spec)?, x)?, "closed-form")),
        Model::Newmodel => {
            let w = resolved_omega(spec)?;
            match existence::classify(w, g)? {
                Classification::Outside => Err(Failure::Validation(format!(
                    "(omega, gamma) = ({w}, {g}) is outside the existence domain: verdict Outside"
                ))),
                _ if g == 0.0 => Ok((solitons::new_model_soliton_explicit(w, x)?, "closed-form")),
                Classification::HighFreqBranch { .. } => Ok((ptquad::new_model_pt_soliton(w, g, x)?, "high-frequency")),
                Classification::LowFreqBranch { .. } => Ok((ptquad::new_model_pt_soliton(w, g, x)?, "low-frequency")),
            }
        }
    }
}

fn cmd_soliton(a: &SolitonArgs, out: &Path) -> Result<serde_json::Value, Failure> {
    let x = grid::symmetric(a.half_width, a.points)?;
    let (p, branch) = build_profile(&a.spec, &x)?;
    let params = params_for(a.spec.model, a.spec.gamma)?;
    let res = stationary_residual(&params, &p)?;
    let mut csv = CsvWriter::new("x,a,b,theta,phi,re_u,im_u,re_v,im_v");
    let (u, v) = (p.u(), p.v());
    for k in 0..x.len() {
        csv.row(&[x[k], p.a[k], p.b[k], p.theta[k], p.phi[k], u[k].re, u[k].im, v[k].re, v[k].im]);
    }
    csv.save(&out.join("profile.csv"))?;
    let mut results = json!({
        "omega": p.omega,
        "branch": branch,
        "residual": { "u": res.max_u, "v": res.max_v, "max": res.max() },
        "boundary_amplitude": p.boundary_amplitude(),
    });
    if a.spec.model == Model::Newmodel && a.spec.gamma == 0.0 {
        results["humps"] = match solitons::hump_locations(p.omega)? {
            Humps::Unimodal => json!({ "shape": "unimodal" }),
            Humps::Bimodal { x_m } => json!({ "shape": "bimodal", "x_m": x_m }),
        };
    }
    println!("soliton omega = {} ({branch}), residual {}", fmt(p.omega), fmt(res.max()));
    Ok(results)
}

fn cmd_domain(a: &DomainArgs, out: &Path) -> Result<serde_json::Value, Failure> {
    if a.samples == 0 {
        return Err(Failure::Validation("--samples must be positive".into()));
    }
    let mut csv = CsvWriter::new("gamma,omega_c,omega_upper");
    for k in 1..=a.samples {
        let g = k as f64 / (a.samples + 1) as f64;
        csv.row(&[g, existence::omega_c(g)?, (1.0 - g * g).sqrt()]);
    }
    csv.save(&out.join("boundary.csv"))?;
    let gs = existence::gamma_star()?;
    let star = json!({ "x_root": gs.x_root, "gamma_star": gs.gamma_star });
    output::write_json(&out.join("gamma_star.json"), &star)?;
    println!("gamma* = {}", fmt(gs.gamma_star));
    Ok(json!({ "gamma_star": gs.gamma_star, "rows": a.samples }))
}

fn spectrum_config(a: &SpectrumArgs) -> SpectrumConfig {
    let mut cfg = SpectrumConfig::new(a.nodes, a.half_width);
    cfg.boundary = match a.boundary {
        Boundary::Inflow => BoundaryTreatment::Inflow,
        Boundary::Dirichlet => BoundaryTreatment::Dirichlet,
    };
    cfg
}

fn cmd_spectrum(a: &SpectrumArgs, out: &Path) -> Result<serde_json::Value, Failure> {
    let cfg = spectrum_config(a);
    if a.onset {
        if a.spec.model != Model::Newmodel {
            return Err(Failure::Validation("--onset applies to the new model".into()));
        }
        let mut csv = CsvWriter::new("gamma,omega_c,omega_inst");
        let mut rows = Vec::new();
        for &g in &a.gammas {
            let o = stability::instability_onset(g, &cfg, a.tol)?;
            let inst = o.omega_inst.unwrap_or(f64::NAN);
            csv.row(&[g, o.omega_c, inst]);
            println!("gamma {} omega_c {} omega_inst {}", fmt(g), fmt(o.omega_c), fmt(inst));
            rows.push(json!({ "gamma": g, "omega_c": o.omega_c, "omega_inst": o.omega_inst }));
        }
        csv.save(&out.join("onset.csv"))?;
        return Ok(json!({ "onset": rows }));
    }
    let w = resolved_omega(&a.spec)?;
    let mesh = stability::collocation_mesh(a.nodes, a.half_width)?;
    let (profile, branch) = build_profile(&a.spec, &mesh.nodes)?;
    let params = params_for(a.spec.model, a.spec.gamma)?;
    let s = stability::spectrum(&params, &profile, &cfg)?;
    let mut csv = CsvWriter::new("re_lambda,im_lambda,label");
    for e in &s.eigenvalues {
        let label = match e.label {
            stability::Label::Discrete => "discrete",
            stability::Label::Continuous => "continuous",
            stability::Label::Spurious => "spurious",
        };
        csv.line(&format!("{},{},{label}", fmt(e.value.re), fmt(e.value.im)));
    }
    csv.save(&out.join("spectrum.csv"))?;
    let verdict = match s.verdict {
        stability::Verdict::Stable => "Stable",
        stability::Verdict::Unstable => "Unstable",
    };
    let lead = s.leading();
    match lead {
        Some(l) => println!("{verdict}: leading lambda {} {:+e}i, max growth {}", fmt(l.re), l.im, fmt(s.max_growth)),
        None => println!("{verdict}"),
    }
    Ok(json!({
        "omega": w,
        "branch": branch,
        "verdict": verdict,
        "max_growth": s.max_growth,
        "leading": lead.map(|l| [l.re, l.im]),
        "gaps": [s.gaps.0, s.gaps.1],
    }))
}

fn cmd_evolve(a: &EvolveArgs, command: &Command, out: &Path) -> Result<(), Failure> {
    let x = grid::with_spacing(a.half_width, a.dx)?;
    let (p, branch) = build_profile(&a.spec, &x)?;
    let params = params_for(a.spec.model, a.spec.gamma)?;
    let start = match a.perturb {
        None => p.state_at(0.0),
        Some(Perturbation::Amplitude) => perturb(&p, a.eps, PerturbMode::Amplitude)?,
        Some(Perturbation::Noise) => perturb(&p, a.eps, PerturbMode::Noise { seed: a.seed })?,
    };
    let mut cfg = EvolveConfig::new(a.t_final, a.dx);
    cfg.ledger_every = a.ledger_every;
    cfg.snapshot_every = a.snapshot_every;
    let run = evolve(&params, &start, &cfg)?;

    let q0 = run.ledger[0].conserved.map(|c| c.q);
    let mut csv = CsvWriter::new("t,q,H,P,q_drift,sup,left_peak,right_peak");
    for r in &run.ledger {
        let laws = match (r.conserved, q0) {
            (Some(c), Some(q0)) => format!("{},{},{},{}", fmt(c.q), fmt(c.h), fmt(c.p), fmt(((c.q - q0) / q0).abs())),
            _ => ",,,".to_string(),
        };
        csv.line(&format!("{},{laws},{},{},{}", fmt(r.t), fmt(r.sup), fmt(r.left_peak), fmt(r.right_peak)));
    }
    csv.save(&out.join("ledger.csv"))?;
    let states = if run.snapshots.is_empty() { std::slice::from_ref(&run.final_state) } else { &run.snapshots[..] };
    for s in states {
        let mut csv = CsvWriter::new("x,re_u,im_u,re_v,im_v");
        for k in 0..s.grid.len() {
            csv.row(&[s.grid[k], s.u[k].re, s.u[k].im, s.v[k].re, s.v[k].im]);
        }
        csv.save(&out.join(format!("state_t{:010.4}.csv", s.time)))?;
    }

    let base = run.ledger[0].conserved;
    let drift = base.map(|b| {
        let rel = |now: f64, then: f64| if then.abs() > 1e-10 { ((now - then) / then).abs() } else { (now - then).abs() };
        run.ledger.iter().filter_map(|r| r.conserved).fold([0.0f64; 3], |d, c| {
            [d[0].max(rel(c.q, b.q)), d[1].max(rel(c.h, b.h)), d[2].max(rel(c.p, b.p))]
        })
    });
    let blowup = match run.outcome {
        Outcome::Completed => None,
        Outcome::Blowup { time } => Some(time),
    };
    let results = json!({
        "omega": p.omega,
        "branch": branch,
        "final_time": run.final_state.time,
        "blowup_after": blowup,
        "charge_conserved": run.charge_conserved,
        "drift": drift.map(|d| json!({ "q": d[0], "H": d[1], "P": d[2] })),
    });
    output::write_meta(out, command, results)?;
    match blowup {
        Some(t) => Err(Failure::Numerical(format!("blowup: sup norm exceeded {} after t = {}", cfg.blowup_threshold, fmt(t)))),
        None => {
            println!("completed t = {}", fmt(run.final_state.time));
            Ok(())
        }
    }
}
