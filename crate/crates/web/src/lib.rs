//! Browser bindings: soliton profiles, the existence map and short evolutions.

use spinorlab_core::evolution::{evolve, perturb, EvolveConfig, Outcome, PerturbMode};
use spinorlab_core::existence::{classify, Classification};
use spinorlab_core::solitons::{self, SolitonProfile};
use spinorlab_core::{grid, ptquad, ModelParams};
use wasm_bindgen::prelude::*;

fn js(e: spinorlab_core::Error) -> JsError {
    JsError::new(&e.to_string())
}

fn profile(model: &str, gamma: f64, omega: f64, x: &[f64]) -> Result<(ModelParams, SolitonProfile), JsError> {
    let p = match model {
        "thirring" => {
            let alpha = solitons::thirring_alpha(gamma, omega).map_err(js)?;
            (ModelParams::thirring(gamma), solitons::thirring_soliton(gamma, alpha, x))
        }
        "gross-neveu" => (ModelParams::gross_neveu(gamma), solitons::gross_neveu_soliton(gamma, omega, x)),
        "newmodel" if gamma == 0.0 => (ModelParams::new_model(0.0), solitons::new_model_soliton_explicit(omega, x)),
        "newmodel" => (ModelParams::new_model(gamma), ptquad::new_model_pt_soliton(omega, gamma, x)),
        other => return Err(JsError::new(&format!("unknown model {other}"))),
    };
    Ok((p.0.map_err(js)?, p.1.map_err(js)?))
}

/// `[x..., |u|..., |v|...]` on `n` points of `[-half_width, half_width]`.
#[wasm_bindgen]
pub fn soliton_profile(model: &str, gamma: f64, omega: f64, half_width: f64, n: usize) -> Result<Vec<f64>, JsError> {
    let x = grid::symmetric(half_width, n).map_err(js)?;
    let (_, p) = profile(model, gamma, omega, &x)?;
    let mut out = x.clone();
    out.extend(p.u().iter().map(|c| c.norm()));
    out.extend(p.v().iter().map(|c| c.norm()));
    Ok(out)
}

/// Row-major codes over gamma in (0, 1) by omega in (0, 1):
/// 0 outside, 1 high-frequency branch, 2 low-frequency branch.
#[wasm_bindgen]
pub fn existence_map(n_gamma: usize, n_omega: usize) -> Result<Vec<u8>, JsError> {
    let mut out = Vec::with_capacity(n_gamma * n_omega);
    for i in 0..n_gamma {
        let g = (i as f64 + 0.5) / n_gamma as f64;
        for j in 0..n_omega {
            let w = (j as f64 + 0.5) / n_omega as f64;
            out.push(match classify(w, g).map_err(js)? {
                Classification::Outside => 0,
                Classification::HighFreqBranch { .. } => 1,
                Classification::LowFreqBranch { .. } => 2,
            });
        }
    }
    Ok(out)
}

/// Evolves a soliton with a relative amplitude kick `eps`.
/// Returns `[t..., sup...]` sampled every 0.5 time units, then a trailing
/// blowup time (or NaN).
#[wasm_bindgen]
pub fn evolve_sup(model: &str, gamma: f64, omega: f64, eps: f64, t_final: f64) -> Result<Vec<f64>, JsError> {
    let dx = 0.04;
    let x = grid::with_spacing(60.0, dx).map_err(js)?;
    let (params, p) = profile(model, gamma, omega, &x)?;
    let start = perturb(&p, eps, PerturbMode::Amplitude).map_err(js)?;
    let mut cfg = EvolveConfig::new(t_final, dx);
    cfg.ledger_every = 0.5;
    let run = evolve(&params, &start, &cfg).map_err(js)?;
    let mut out: Vec<f64> = run.ledger.iter().map(|r| r.t).collect();
    out.extend(run.ledger.iter().map(|r| r.sup));
    out.push(match run.outcome {
        Outcome::Completed => f64::NAN,
        Outcome::Blowup { time } => time,
    });
    Ok(out)
}
