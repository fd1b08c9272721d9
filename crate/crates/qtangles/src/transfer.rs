//! Entanglement-transfer circuit: a pair prepared in
//! (|00> + sqrt(x-1)|11>)/sqrt(x) with a product environment of identical
//! single-qubit states, leaking its two-tangle through successive CNOTs
//! from qubit 1 onto environment qubits.

use crate::error::{Error, Result};
use crate::fonts;
use crate::qstate::{PureState, QubitSubset, MAX_QUBITS};
use crate::spectral;
use crate::tangles::one_tangle;
use num_complex::Complex64;
use serde::Serialize;

/// One step of a transfer run.
#[derive(Debug, Clone, Serialize)]
pub struct TransferStep {
    /// CNOTs applied so far.
    pub m: usize,
    /// Squared two-tangle of the pair (1,2).
    pub tau_12_sq: f64,
    /// One-tangle of qubit 1 against everything else.
    pub tau_1rest: f64,
    /// Residual correlations tau_1rest - tau_12_sq.
    pub residual: f64,
}

/// A full run: the initial state's numbers followed by one entry per CNOT.
#[derive(Debug, Clone, Serialize)]
pub struct TransferRun {
    pub x: f64,
    pub n_env: usize,
    pub steps: Vec<TransferStep>,
}

/// Pair state (|00> + sqrt(x-1)|11>)/sqrt(x) tensored with `n_env`
/// environment qubits each in (|0> + sqrt(x-1)|1>)/sqrt(x).
pub fn build_initial(x: f64, n_env: usize) -> Result<PureState> {
    if !(x > 1.0) {
        return Err(Error::BadParam(format!("transfer model needs x > 1, got {x}")));
    }
    if n_env == 0 {
        return Err(Error::BadParam("need at least one environment qubit".into()));
    }
    let n = 2 + n_env;
    if n > MAX_QUBITS {
        return Err(Error::BadParam(format!(
            "{n} qubits exceeds the {MAX_QUBITS}-qubit limit"
        )));
    }
    let r = (x - 1.0).sqrt();
    let mut pair = vec![Complex64::new(0.0, 0.0); 4];
    pair[0b00] = Complex64::new(1.0, 0.0);
    pair[0b11] = Complex64::new(r, 0.0);
    let mut state = PureState::from_amplitudes(2, pair)?;
    // append environment factors one qubit at a time
    for _ in 0..n_env {
        let cur = state.amplitudes();
        let mut amps = Vec::with_capacity(cur.len() * 2);
        let norm = x.sqrt();
        for &a in cur {
            amps.push(a / norm);
            amps.push(a * r / norm);
        }
        state = PureState::from_amplitudes(state.n_qubits() + 1, amps)?;
    }
    Ok(state)
}

/// Apply `m_steps` CNOTs (control qubit 1, targets 3, 4, ...) and record
/// the tangle bookkeeping after each. The run checks its own invariants:
/// the one-tangle stays constant to 1e-10, tau^2_{1|2} follows
/// (4(x-1)/x^2)^(M+1) to 1e-9, the other pair tangles stay zero, and the
/// one-tangle equals sum_j (n4(rho_1j) - X_1j) at every step.
pub fn apply_cnot_chain(x: f64, n_env: usize, m_steps: usize) -> Result<TransferRun> {
    if m_steps > n_env {
        return Err(Error::BadParam(format!(
            "{m_steps} CNOTs exceed {n_env} environment qubits"
        )));
    }
    let mut state = build_initial(x, n_env)?;
    let n = state.n_qubits();
    let q = 4.0 * (x - 1.0) / (x * x);
    let tau_1rest0 = one_tangle(&state, 1)?;
    let mut steps = vec![step_record(&state, 0, q, tau_1rest0)?];
    for m in 1..=m_steps {
        state = state.apply_cnot(1, 2 + m)?;
        let rec = step_record(&state, m, q, tau_1rest0)?;
        for j in 3..=n {
            let rho = state.partial_trace(&QubitSubset::new(vec![1, j], n)?)?;
            let t = spectral::two_tangle(&rho)?;
            if t * t > 1e-9 {
                return Err(Error::NumericalFailure(format!(
                    "unexpected pair tangle tau^2_(1,{j}) = {:.3e} at step {m}",
                    t * t
                )));
            }
        }
        steps.push(rec);
    }
    Ok(TransferRun { x, n_env, steps })
}

fn step_record(state: &PureState, m: usize, q: f64, tau_1rest0: f64) -> Result<TransferStep> {
    let n = state.n_qubits();
    let rho12 = state.partial_trace(&QubitSubset::new(vec![1, 2], n)?)?;
    let tau12 = spectral::two_tangle(&rho12)?;
    let tau_12_sq = tau12 * tau12;
    let tau_1rest = one_tangle(state, 1)?;
    let closed = q.powi(m as i32 + 1);
    if (tau_12_sq - closed).abs() > 1e-9 {
        return Err(Error::NumericalFailure(format!(
            "tau^2_(1,2) {tau_12_sq:.12e} deviates from closed form {closed:.12e} at step {m}"
        )));
    }
    if (tau_1rest - tau_1rest0).abs() > 1e-10 {
        return Err(Error::NumericalFailure(format!(
            "one-tangle drifted by {:.3e} at step {m}",
            (tau_1rest - tau_1rest0).abs()
        )));
    }
    // the N-qubit font machinery must reproduce the one-tangle exactly
    let mut font_sum = 0.0;
    for j in 2..=n {
        font_sum += fonts::font_table(state, j)?.one_tangle_share();
    }
    if (font_sum - tau_1rest).abs() > 1e-9 {
        return Err(Error::NumericalFailure(format!(
            "font one-tangle decomposition off by {:.3e} at step {m}",
            (font_sum - tau_1rest).abs()
        )));
    }
    Ok(TransferStep {
        m,
        tau_12_sq,
        tau_1rest,
        residual: tau_1rest - tau_12_sq,
    })
}

/// CSV rows for a set of transfer runs: one line per recorded step.
pub fn transfer_csv(runs: &[TransferRun]) -> String {
    let mut out = String::from("x,M,tau_12_sq,tau_1rest,residual\n");
    for run in runs {
        for step in &run.steps {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                run.x, step.m, step.tau_12_sq, step.tau_1rest, step.residual
            ));
        }
    }
    out
}
