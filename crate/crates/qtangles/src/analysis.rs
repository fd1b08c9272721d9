//! The full analysis document emitted by `qtangles analyze`: input echo,
//! tangle report, constraint residuals, per-pair polynomial coefficients,
//! and the group classification, serialized as one JSON object with
//! stable key order.

use crate::error::Result;
use crate::monogamy::{evaluate_constraints, ConstraintReport};
use crate::qstate::{PureState, QubitSubset, StateJson};
use crate::spectral::{self, PolyCoeffs};
use crate::tangles::{RoofOptions, TangleReport};
use crate::zoo::{self, GroupLabel};
use serde::Serialize;
use std::collections::BTreeMap;

/// Echo of what was analyzed, sufficient to re-run the analysis.
#[derive(Debug, Clone, Serialize)]
pub struct InputEcho {
    pub source: String,
    pub zoo_params: BTreeMap<String, f64>,
    pub n_qubits: usize,
    /// True when the input amplitudes needed renormalization beyond 1e-12.
    pub renormalized: bool,
    pub state: StateJson,
}

/// Per-pair spectral block: polynomial coefficients plus the concurrence.
#[derive(Debug, Clone, Serialize)]
pub struct PairSpectral {
    pub c_value: f64,
    pub two_tangle: f64,
    #[serde(flatten)]
    pub coeffs: PolyCoeffs,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalyzeOutput {
    pub input: InputEcho,
    pub focus_qubit: usize,
    pub seed: u64,
    pub tangles: TangleReport,
    pub constraints: ConstraintReport,
    /// Keyed by the pair "1j" in the refocused frame.
    pub poly_coeffs: BTreeMap<String, PairSpectral>,
    pub classification: GroupLabel,
}

impl AnalyzeOutput {
    /// True when every non-diagnostic equality/inequality record passed.
    pub fn constraints_pass(&self) -> bool {
        self.constraints.all_pass()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Analyze a four-qubit state end to end.
pub fn analyze(
    state: &PureState,
    source: String,
    zoo_params: BTreeMap<String, f64>,
    focus: usize,
    opts: &RoofOptions,
    zero_tol: f64,
) -> Result<AnalyzeOutput> {
    let tangles = TangleReport::compute(state, focus, opts)?;
    let constraints = evaluate_constraints(state, &tangles)?;
    let (st, _) = state.refocus(focus)?;
    let mut poly = BTreeMap::new();
    for j in 2..=4usize {
        let rho = st.partial_trace(&QubitSubset::new(vec![1, j], 4)?)?;
        let sp = spectral::spectrum(&rho)?;
        poly.insert(
            format!("1{j}"),
            PairSpectral {
                c_value: sp.c_value,
                two_tangle: sp.c_value.max(0.0),
                coeffs: spectral::poly_coeffs(&rho)?,
            },
        );
    }
    let classification = zoo::classify(state, zero_tol, opts)?;
    Ok(AnalyzeOutput {
        input: InputEcho {
            source,
            zoo_params,
            n_qubits: state.n_qubits(),
            renormalized: state.was_renormalized(),
            state: StateJson::from_state(state),
        },
        focus_qubit: focus,
        seed: opts.seed,
        tangles,
        constraints,
        poly_coeffs: poly,
        classification,
    })
}
