//! Monogamy constraints as residual records: the CKW equality for three
//! qubits, the degree-four and degree-eight constraint set for four qubits,
//! and the one-parameter family sweep behind the residual-correlation plot.

use crate::error::{Error, Result};
use crate::invariants::{four_invariants, n8_decomposition_from};
use crate::qstate::{PureState, QubitSubset};
use crate::spectral::{self, PolyCoeffs, SpinFlipSpectrum};
use crate::tangles::{one_tangle, three_tangle_pure, RoofOptions, TangleReport};
use crate::zoo::{self, ZooName};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;

/// Equality tolerance for residuals free of convex-roof estimates.
pub const TOL_EQUALITY: f64 = 1e-6;
/// Tolerance for records whose displayed sides carry optimizer values.
pub const TOL_OPTIMIZER: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ConstraintKind {
    Equality,
    Inequality,
}

/// One evaluated constraint. `pass` means |residual| <= tol for equalities
/// and residual >= -tol for inequalities.
#[derive(Debug, Clone, Serialize)]
pub struct ConstraintRecord {
    pub name: String,
    pub kind: ConstraintKind,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub tol: f64,
    pub pass: bool,
    /// Diagnostics are reported but never count as artifact failures;
    /// the naive CKW generalization is expected to fail on some states.
    pub diagnostic: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConstraintReport {
    pub focus_qubit: usize,
    pub records: Vec<ConstraintRecord>,
}

impl ConstraintReport {
    /// True when every non-diagnostic record passes.
    pub fn all_pass(&self) -> bool {
        self.records.iter().all(|r| r.pass || r.diagnostic)
    }

    pub fn get(&self, name: &str) -> Option<&ConstraintRecord> {
        self.records.iter().find(|r| r.name == name)
    }
}

fn equality(name: impl Into<String>, lhs: f64, rhs: f64, tol: f64) -> ConstraintRecord {
    let residual = lhs - rhs;
    ConstraintRecord {
        name: name.into(),
        kind: ConstraintKind::Equality,
        lhs,
        rhs,
        residual,
        tol,
        pass: residual.abs() <= tol,
        diagnostic: false,
    }
}

fn inequality(
    name: impl Into<String>,
    lhs: f64,
    rhs: f64,
    tol: f64,
    diagnostic: bool,
) -> ConstraintRecord {
    let residual = lhs - rhs;
    ConstraintRecord {
        name: name.into(),
        kind: ConstraintKind::Inequality,
        lhs,
        rhs,
        residual,
        tol,
        pass: residual >= -tol,
        diagnostic,
    }
}

/// Evaluate every four-qubit monogamy constraint against a tangle report
/// computed for the same state and focus.
pub fn evaluate_constraints(
    state: &PureState,
    report: &TangleReport,
) -> Result<ConstraintReport> {
    if state.n_qubits() != 4 {
        return Err(Error::BadParam(format!(
            "constraints need a 4-qubit state, got {}",
            state.n_qubits()
        )));
    }
    let (st, _) = state.refocus(report.focus_qubit)?;
    if (one_tangle(&st, 1)? - report.one_tangle).abs() > 1e-9 {
        return Err(Error::StaleReport);
    }

    let mut polys: BTreeMap<usize, (SpinFlipSpectrum, PolyCoeffs)> = BTreeMap::new();
    for j in 2..=4usize {
        let rho = st.partial_trace(&QubitSubset::new(vec![1, j], 4)?)?;
        let sp = spectral::spectrum(&rho)?;
        if (sp.c_value.max(0.0) - report.two(j)).abs() > 1e-9 {
            return Err(Error::StaleReport);
        }
        polys.insert(j, (sp, spectral::poly_coeffs(&rho)?));
    }
    let inv = four_invariants(&st)?;
    if (2.0 * inv.i42.norm() - report.four_tangles.tau0).abs() > 1e-9 {
        return Err(Error::StaleReport);
    }
    let tau = report.one_tangle;
    let tau0_sq = report.four_tangles.tau0.powi(2);
    let sum_two_sq: f64 = (2..=4).map(|j| report.two(j).powi(2)).sum();
    let three_sq = |j: usize, k: usize| report.three(j, k).estimate.powi(2);
    let sum_three_sq = three_sq(2, 3) + three_sq(2, 4) + three_sq(3, 4);
    let pair_three_sq =
        |j: usize| -> f64 { (2..=4).filter(|&k| k != j).map(|k| three_sq(j, k)).sum() };
    // delta_1j rebuilt from the font-side n8 decomposition; the records
    // below then compare the trace route against the font route
    let delta_fonts = |j: usize| -> Result<f64> {
        Ok(4.0 * n8_decomposition_from(&inv, j)? - 0.25 * pair_three_sq(j))
    };

    let mut records = Vec::new();

    // one-tangle from the pair coefficients and the degree-two four-tangle
    let sum_n4: f64 = (2..=4).map(|j| polys[&j].1.n4).sum();
    records.push(equality(
        "EQ_1TANN4",
        tau,
        sum_n4 - 0.5 * tau0_sq,
        TOL_EQUALITY,
    ));

    // S1 both ways: from the one-tangle and from the pair coefficients
    let s1 = tau - sum_two_sq;
    let s1_coeff: f64 =
        (2..=4).map(|j| polys[&j].1.n4 - report.two(j).powi(2)).sum::<f64>() - 0.5 * tau0_sq;
    records.push(equality("S1", s1, s1_coeff, TOL_EQUALITY));

    for j in 2..=4usize {
        let (sp, pc) = &polys[&j];
        let chi = pc.chi_for(sp.c_value);
        let dfj = delta_fonts(j)?;
        records.push(equality(
            format!("EQ_N81JC({j})"),
            4.0 * pc.n8,
            0.25 * pair_three_sq(j) + dfj,
            TOL_EQUALITY,
        ));
        // (n4 - tau^2)^2 = (1/4) sum_k tau^2_{1|j|k} + Delta_1j; for
        // C(rho_1j) <= 0 the two-tangle is already zero, which is the
        // negative-branch reduction
        let lhs = (pc.n4 - report.two(j).powi(2)).powi(2);
        let big_delta = report.delta_of(j) + chi;
        records.push(equality(
            format!("EQ_N41JC({j})"),
            lhs,
            0.25 * pair_three_sq(j) + big_delta,
            TOL_EQUALITY,
        ));
        // delta_1j against its weighted four-tangle lower bound
        records.push(inequality(
            format!("DELTA_LB({j})"),
            report.delta_of(j),
            report.delta_lower_bound[&j.to_string()],
            TOL_OPTIMIZER,
            false,
        ));
    }

    let sum_n8: f64 = (2..=4).map(|j| polys[&j].1.n8).sum();
    let sum_delta_fonts = delta_fonts(2)? + delta_fonts(3)? + delta_fonts(4)?;
    records.push(equality(
        "EQ_SUM4N8C",
        4.0 * sum_n8 - 0.5 * sum_three_sq,
        sum_delta_fonts,
        TOL_EQUALITY,
    ));

    let sum_sq_terms: f64 = (2..=4)
        .map(|j| (polys[&j].1.n4 - report.two(j).powi(2)).powi(2))
        .sum();
    let sum_big_delta: f64 = (2..=4).map(|j| report.big_delta_of(j)).sum();
    records.push(equality(
        "EQ_SUMN4C",
        sum_sq_terms - 0.5 * sum_three_sq,
        sum_big_delta,
        TOL_EQUALITY,
    ));

    // one-tangle constraint: LHS degree four, RHS the square-rooted
    // degree-eight per-pair terms
    let rhs_1tanc1: f64 = (2..=4)
        .map(|j| {
            (0.25 * pair_three_sq(j) + report.big_delta_of(j))
                .max(0.0)
                .sqrt()
        })
        .sum();
    records.push(equality(
        "EQ_1TANC1",
        tau + 0.5 * tau0_sq - sum_two_sq,
        rhs_1tanc1,
        TOL_EQUALITY,
    ));

    // rearranged form: the paper leaves f_1j implicit, so the relation is
    // restated as a consistency check, the same left-hand side evaluated
    // with the direct one-tangle and with the one-tangle implied by the
    // per-pair square roots
    let half_sqrt_sum = 0.5
        * (2..=4)
            .map(|j| pair_three_sq(j).max(0.0).sqrt())
            .sum::<f64>();
    let lhs_direct = tau - sum_two_sq - half_sqrt_sum;
    let tau_implied = rhs_1tanc1 + sum_two_sq - 0.5 * tau0_sq;
    let lhs_implied = tau_implied - sum_two_sq - half_sqrt_sum;
    records.push(equality("EQ_1TANC2", lhs_direct, lhs_implied, TOL_EQUALITY));

    // naive CKW generalization and the 3/2-power repair, diagnostics only
    let sum_three: f64 = [
        report.three(2, 3).estimate,
        report.three(2, 4).estimate,
        report.three(3, 4).estimate,
    ]
    .iter()
    .sum();
    records.push(inequality(
        "MONO1",
        tau,
        sum_two_sq + sum_three,
        TOL_OPTIMIZER,
        true,
    ));
    let sum_three_32: f64 = [
        report.three(2, 3).estimate,
        report.three(2, 4).estimate,
        report.three(3, 4).estimate,
    ]
    .iter()
    .map(|t| t.powf(1.5))
    .sum();
    records.push(inequality(
        "MONO2",
        tau,
        sum_two_sq + sum_three_32,
        TOL_OPTIMIZER,
        true,
    ));

    Ok(ConstraintReport {
        focus_qubit: report.focus_qubit,
        records,
    })
}

/// CKW equality for a three-qubit pure state: one-tangle = squared
/// two-tangles plus the pure three-tangle.
pub fn evaluate_ckw(state: &PureState) -> Result<ConstraintReport> {
    if state.n_qubits() != 3 {
        return Err(Error::BadParam(format!(
            "CKW check needs a 3-qubit state, got {}",
            state.n_qubits()
        )));
    }
    let tau = one_tangle(state, 1)?;
    let mut sum = three_tangle_pure(state)?;
    for j in 2..=3usize {
        let rho = state.partial_trace(&QubitSubset::new(vec![1, j], 3)?)?;
        sum += spectral::two_tangle(&rho)?.powi(2);
    }
    Ok(ConstraintReport {
        focus_qubit: 1,
        records: vec![equality("CKW", tau, sum, TOL_EQUALITY)],
    })
}

/// One sweep row of the L_{a,ia,(ia)_2} family.
#[derive(Debug, Clone, Serialize)]
pub struct LFamilyRow {
    pub a: f64,
    pub one_tangle: f64,
    /// S1 = one-tangle minus the squared two-tangles.
    pub s1: f64,
    /// S = S1 - sqrt((1/2) sum of squared three-tangles).
    pub s: f64,
    /// R = sqrt(sum_j delta_1j).
    pub r: f64,
}

/// Sweep the family over an `a`-grid. The run fails if the residual
/// quantities dip below their proven floors (S >= 0, R >= 0).
pub fn sweep_l_family(a_grid: &[f64], opts: &RoofOptions) -> Result<Vec<LFamilyRow>> {
    let rows: Result<Vec<LFamilyRow>> = a_grid
        .par_iter()
        .map(|&a| {
            let mut params = BTreeMap::new();
            params.insert("a".to_string(), a);
            let state = zoo::make(ZooName::LAia, &params)?.state;
            let report = TangleReport::compute(&state, 1, opts)?;
            let sum_two_sq: f64 = (2..=4).map(|j| report.two(j).powi(2)).sum();
            let sum_three_sq: f64 = [
                report.three(2, 3).estimate,
                report.three(2, 4).estimate,
                report.three(3, 4).estimate,
            ]
            .iter()
            .map(|t| t * t)
            .sum();
            let s1 = report.one_tangle - sum_two_sq;
            let s = s1 - (0.5 * sum_three_sq).sqrt();
            let sum_delta: f64 = (2..=4).map(|j| report.delta_of(j)).sum();
            if s < -1e-9 {
                return Err(Error::NumericalFailure(format!(
                    "S = {s:.3e} < 0 at a = {a}"
                )));
            }
            if sum_delta < -1e-9 {
                return Err(Error::NumericalFailure(format!(
                    "sum of delta_1j = {sum_delta:.3e} < 0 at a = {a}"
                )));
            }
            Ok(LFamilyRow {
                a,
                one_tangle: report.one_tangle,
                s1,
                s,
                r: sum_delta.max(0.0).sqrt(),
            })
        })
        .collect();
    rows
}

/// Evenly spaced grid of `points` values covering [lo, hi].
pub fn linspace(lo: f64, hi: f64, points: usize) -> Result<Vec<f64>> {
    if points == 0 || hi < lo {
        return Err(Error::BadParam(format!(
            "invalid range [{lo}, {hi}] with {points} points"
        )));
    }
    if points == 1 {
        return Ok(vec![lo]);
    }
    let step = (hi - lo) / (points - 1) as f64;
    Ok((0..points).map(|i| lo + step * i as f64).collect())
}

/// CSV for the family sweep (header mandatory, '.' decimal separator).
pub fn l_family_csv(rows: &[LFamilyRow]) -> String {
    let mut out = String::from("a,one_tangle,S1,S,R\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            row.a, row.one_tangle, row.s1, row.s, row.r
        ));
    }
    out
}
