//! The named four-qubit states the analysis is exercised on, the
//! coarse Group I-IV classifier, and the class-pattern comparison table.

use crate::error::{Error, Result};
use crate::invariants::four_invariants;
use crate::qstate::{PureState, QubitSubset};
use crate::spectral;
use crate::tangles::{four_tangles_from, three_tangle_mixed, one_tangle, RoofOptions};
use num_complex::Complex64;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

/// Names of the built-in states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ZooName {
    Ghz4,
    Cluster,
    BellProduct,
    /// L_{a, ia, (ia)_2} family; parameter `a >= 0`.
    LAia,
    /// Three-term state a0000|0000> + a1101|1101> + a1110|1110>.
    Chi,
    /// Product of a three-qubit GHZ-like state with |0>.
    PsiS,
    /// Maximally entangled W-like state with all four-tangles zero.
    WTilde,
    W4,
}

impl FromStr for ZooName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "GHZ4" | "GHZ" => Ok(Self::Ghz4),
            "CLUSTER" => Ok(Self::Cluster),
            "BELL_PRODUCT" | "PSI_P" => Ok(Self::BellProduct),
            "L_AIA" | "LAIA" => Ok(Self::LAia),
            "CHI" => Ok(Self::Chi),
            "PSI_S" => Ok(Self::PsiS),
            "W_TILDE" | "WTILDE" => Ok(Self::WTilde),
            "W4" | "W" => Ok(Self::W4),
            other => Err(Error::BadParam(format!("unknown zoo state '{other}'"))),
        }
    }
}

impl fmt::Display for ZooName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::Ghz4 => "GHZ4",
            Self::Cluster => "CLUSTER",
            Self::BellProduct => "BELL_PRODUCT",
            Self::LAia => "L_AIA",
            Self::Chi => "CHI",
            Self::PsiS => "PSI_S",
            Self::WTilde => "W_TILDE",
            Self::W4 => "W4",
        };
        f.write_str(s)
    }
}

/// A built state along with the parameters that produced it.
#[derive(Debug, Clone)]
pub struct NamedState {
    pub name: ZooName,
    pub params: BTreeMap<String, f64>,
    pub state: PureState,
}

/// Build a named state. Recognized parameters: `a` for `L_AIA`,
/// `a0000`/`a1101`/`a1110` for `CHI`, `a0000`/`a1110` for `PSI_S`.
pub fn make(name: ZooName, params: &BTreeMap<String, f64>) -> Result<NamedState> {
    let re = |x: f64| Complex64::new(x, 0.0);
    let im = |x: f64| Complex64::new(0.0, x);
    let get = |key: &str, default: f64| params.get(key).copied().unwrap_or(default);
    let mut amps = vec![Complex64::new(0.0, 0.0); 16];
    let mut used = BTreeMap::new();
    match name {
        ZooName::Ghz4 => {
            amps[0b0000] = re(1.0);
            amps[0b1111] = re(1.0);
        }
        ZooName::Cluster => {
            amps[0b0000] = re(1.0);
            amps[0b1100] = re(1.0);
            amps[0b0011] = re(1.0);
            amps[0b1111] = re(-1.0);
        }
        ZooName::BellProduct => {
            for idx in [0b0000, 0b0011, 0b1100, 0b1111] {
                amps[idx] = re(1.0);
            }
        }
        ZooName::LAia => {
            let a = get("a", 1.0);
            if a < 0.0 {
                return Err(Error::BadParam(format!("L_AIA needs a >= 0, got {a}")));
            }
            used.insert("a".into(), a);
            let cp = Complex64::new(a / 2.0, a / 2.0);
            let cm = Complex64::new(a / 2.0, -a / 2.0);
            amps[0b0000] = cp;
            amps[0b1111] = cp;
            amps[0b0011] = cm;
            amps[0b1100] = cm;
            amps[0b0101] = im(a);
            amps[0b1010] = im(a);
            amps[0b0110] = re(1.0);
        }
        ZooName::Chi => {
            let (x, y, z) = (get("a0000", 1.0), get("a1101", 1.0), get("a1110", 1.0));
            used.insert("a0000".into(), x);
            used.insert("a1101".into(), y);
            used.insert("a1110".into(), z);
            amps[0b0000] = re(x);
            amps[0b1101] = re(y);
            amps[0b1110] = re(z);
        }
        ZooName::PsiS => {
            let (x, z) = (get("a0000", 1.0), get("a1110", 1.0));
            used.insert("a0000".into(), x);
            used.insert("a1110".into(), z);
            amps[0b0000] = re(x);
            amps[0b1110] = re(z);
        }
        ZooName::WTilde => {
            for idx in [0b0000, 0b1100, 0b1010, 0b1001] {
                amps[idx] = re(1.0);
            }
        }
        ZooName::W4 => {
            for idx in [0b0001, 0b0010, 0b0100, 0b1000] {
                amps[idx] = re(1.0);
            }
        }
    }
    Ok(NamedState {
        name,
        params: used,
        state: PureState::from_amplitudes(4, amps)?,
    })
}

/// Classifier verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Group {
    I,
    II,
    III,
    IV,
    /// Four-tangles alone are nonzero; no pair or triple subsystem is
    /// entangled (the GHZ-like corner the Group II/III wording skips).
    FourTanglesOnly,
    NotFourWayEntangled,
    /// Predicate combination outside the published buckets.
    Unclassified,
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::I => f.write_str("Group I"),
            Self::II => f.write_str("Group II"),
            Self::III => f.write_str("Group III"),
            Self::IV => f.write_str("Group IV"),
            Self::FourTanglesOnly => f.write_str("Group II/III boundary (four-tangles only)"),
            Self::NotFourWayEntangled => f.write_str("not four-way entangled"),
            Self::Unclassified => f.write_str("unclassified"),
        }
    }
}

/// Group verdict plus the evidence rows and fired predicates behind it.
#[derive(Debug, Clone, Serialize)]
pub struct GroupLabel {
    pub group: Group,
    pub zero_tol: f64,
    pub four_way_entangled: bool,
    pub any_two_tangle: bool,
    pub any_three_tangle: bool,
    pub any_four_tangle: bool,
    pub evidence: BTreeMap<String, Evidence>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Evidence {
    pub value: f64,
    pub nonzero: bool,
}

/// Classify a four-qubit state by which tangle kinds are nonzero at
/// `zero_tol`. Two- and three-tangles run over every pair and triple;
/// the pair four-tangles are evaluated for all six pairs by refocusing.
pub fn classify(state: &PureState, zero_tol: f64, opts: &RoofOptions) -> Result<GroupLabel> {
    if state.n_qubits() != 4 {
        return Err(Error::BadParam(format!(
            "classification needs a 4-qubit state, got {}",
            state.n_qubits()
        )));
    }
    let mut evidence = BTreeMap::new();
    let push = |map: &mut BTreeMap<String, Evidence>, name: String, value: f64| -> bool {
        let nonzero = value > zero_tol;
        map.insert(name, Evidence { value, nonzero });
        nonzero
    };

    let mut four_way = true;
    for q in 1..=4 {
        let v = one_tangle(state, q)?;
        let nz = push(&mut evidence, format!("one_tangle_{q}"), v);
        four_way &= nz;
    }

    let pairs = [(1usize, 2usize), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)];
    let mut any_two = false;
    for (p, q) in pairs {
        let rho = state.partial_trace(&QubitSubset::new(vec![p, q], 4)?)?;
        let v = spectral::two_tangle(&rho)?;
        any_two |= push(&mut evidence, format!("two_tangle_{p}{q}"), v);
    }

    let mut any_three = false;
    for (a, b, c) in [(1usize, 2usize, 3usize), (1, 2, 4), (1, 3, 4), (2, 3, 4)] {
        let rho = state.partial_trace(&QubitSubset::new(vec![a, b, c], 4)?)?;
        let v = three_tangle_mixed(&rho, opts)?.estimate;
        any_three |= push(&mut evidence, format!("three_tangle_{a}{b}{c}"), v);
    }

    let mut any_four = false;
    {
        let inv = four_invariants(state)?;
        let four = four_tangles_from(&inv);
        any_four |= push(&mut evidence, "tau0".into(), four.tau0);
        any_four |= push(&mut evidence, "tau1".into(), four.tau1);
    }
    for (p, q) in pairs {
        // bring the pair to focus positions (1, 2), remaining qubits after
        let mut order = vec![p, q];
        order.extend((1..=4).filter(|x| *x != p && *x != q));
        let mut perm = [0usize; 4];
        for (newpos, &old) in order.iter().enumerate() {
            perm[old - 1] = newpos + 1;
        }
        let refocused = state.permute_qubits(&perm)?;
        let inv = four_invariants(&refocused)?;
        let four = four_tangles_from(&inv);
        any_four |= push(&mut evidence, format!("tau2_{p}{q}"), four.tau2_of(2));
        any_four |= push(&mut evidence, format!("tau3_{p}{q}"), four.tau3_of(2));
    }

    let group = if !four_way {
        Group::NotFourWayEntangled
    } else if any_two && any_three && any_four {
        Group::I
    } else if any_three && !any_two && any_four {
        Group::II
    } else if any_two && !any_three && any_four {
        Group::III
    } else if any_two && !any_four {
        Group::IV
    } else if any_four && !any_two && !any_three {
        Group::FourTanglesOnly
    } else {
        Group::Unclassified
    };
    Ok(GroupLabel {
        group,
        zero_tol,
        four_way_entangled: four_way,
        any_two_tangle: any_two,
        any_three_tangle: any_three,
        any_four_tangle: any_four,
        evidence,
    })
}

/// The published zero/nonzero patterns per entanglement class. Row order
/// matches [`TABLE2_ROWS`].
pub const TABLE2_CLASSES: [&str; 8] = [
    "L_abc2", "L_ab3", "L_a4", "L_07+1", "L_05+3", "L_a2b2", "G_abcd", "L_a2_03+1",
];

/// Quantities of the class table, in row order. The published table lists
/// the pair two-tangle tau^2_{1|2} twice; the second occurrence is read as
/// tau^2_{1|4} and both are reported.
pub const TABLE2_ROWS: [&str; 13] = [
    "tau2_pair_any",
    "tau1",
    "tau3_rho13",
    "tau3_rho12_rho14",
    "three_134",
    "three_123",
    "three_124",
    "two_12_sq",
    "two_13_sq",
    "two_14_sq",
    "n16_rho12",
    "n16_rho13",
    "n16_rho14",
];

/// Expected nonzero flags, `TABLE2_PATTERNS[row][class]`.
pub const TABLE2_PATTERNS: [[bool; 8]; 13] = [
    [true, true, true, true, true, true, true, true],
    [true, false, false, false, false, true, true, true],
    [true, true, false, false, false, true, true, true],
    [true, true, true, false, false, true, true, true],
    [true, true, true, true, false, false, false, false],
    [true, true, true, true, true, false, false, false],
    [true, true, true, true, true, true, false, false],
    [true, true, true, false, false, true, true, true],
    [true, true, true, false, true, true, true, true],
    [true, true, true, false, true, true, true, true],
    [true, true, true, false, false, true, true, false],
    [true, true, false, false, false, true, true, false],
    [true, true, true, false, false, true, true, false],
];

/// One row of the class-pattern report.
#[derive(Debug, Clone, Serialize)]
pub struct Table2Row {
    pub quantity: String,
    pub value: f64,
    pub nonzero: bool,
    /// Expected flag for the requested class, when one was given.
    pub expected_nonzero: Option<bool>,
    pub matches: Option<bool>,
}

/// Compute the class-table quantities for a supplied state and, when a
/// class name is given, set the expected zero/nonzero flags beside them.
/// Informational: patterns assume generic parameters within a class.
pub fn table2_check(
    state: &PureState,
    class_name: Option<&str>,
    zero_tol: f64,
    opts: &RoofOptions,
) -> Result<Vec<Table2Row>> {
    if state.n_qubits() != 4 {
        return Err(Error::BadParam(format!(
            "table check needs a 4-qubit state, got {}",
            state.n_qubits()
        )));
    }
    let class_col = match class_name {
        None => None,
        Some(name) => Some(
            TABLE2_CLASSES
                .iter()
                .position(|c| c.eq_ignore_ascii_case(name))
                .ok_or_else(|| Error::BadParam(format!("unknown class '{name}'")))?,
        ),
    };
    let inv = four_invariants(state)?;
    let four = four_tangles_from(&inv);
    let three = |j: usize, k: usize| -> Result<f64> {
        let rho = state.partial_trace(&QubitSubset::new(vec![1, j, k], 4)?)?;
        Ok(three_tangle_mixed(&rho, opts)?.estimate)
    };
    let two_sq = |j: usize| -> Result<f64> {
        let rho = state.partial_trace(&QubitSubset::new(vec![1, j], 4)?)?;
        Ok(spectral::two_tangle(&rho)?.powi(2))
    };
    let n16 = |j: usize| -> Result<f64> {
        let rho = state.partial_trace(&QubitSubset::new(vec![1, j], 4)?)?;
        Ok(spectral::poly_coeffs(&rho)?.n16)
    };
    let values: Vec<f64> = vec![
        (2..=4).map(|j| four.tau2_of(j)).fold(0.0, f64::max),
        four.tau1,
        four.tau3_of(3),
        four.tau3_of(2).max(four.tau3_of(4)),
        three(3, 4)?,
        three(2, 3)?,
        three(2, 4)?,
        two_sq(2)?,
        two_sq(3)?,
        two_sq(4)?,
        n16(2)?,
        n16(3)?,
        n16(4)?,
    ];
    Ok(values
        .into_iter()
        .zip(TABLE2_ROWS.iter())
        .enumerate()
        .map(|(row, (value, name))| {
            let nonzero = value.abs() > zero_tol;
            let expected = class_col.map(|c| TABLE2_PATTERNS[row][c]);
            Table2Row {
                quantity: name.to_string(),
                value,
                nonzero,
                expected_nonzero: expected,
                matches: expected.map(|e| e == nonzero),
            }
        })
        .collect())
}
