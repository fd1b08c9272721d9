//! Determinants of negativity fonts for a focus pair (1, j) of an N-qubit
//! state, the coherence corrections X_{1j}, and the ten two-qubit unitary
//! invariants per pair of a four-qubit state.
//!
//! A font is the 2x2 determinant
//!
//! ```text
//! D_{1jIJ} = a_{0 (i_j=0) I} a_{1 (i_j=1) J} - a_{1 (i_j=0) I} a_{0 (i_j=1) J}
//! ```
//!
//! where I and J fix the spectator qubits of the first and second column.
//! Spectator patterns are keyed so that bit p of the key holds the p-th
//! spectator's index (spectators ascending), which reproduces the paper's
//! value ordering with the gap at position j compressed out.

use crate::error::{Error, Result};
use crate::qstate::PureState;
use num_complex::Complex64;

/// All 4^(N-2) font determinants of one focus pair.
#[derive(Debug, Clone)]
pub struct FontTable {
    focus_pair: (usize, usize),
    n_spectators: usize,
    /// Row-major over (I_v, J_v).
    entries: Vec<Complex64>,
}

impl FontTable {
    pub fn focus_pair(&self) -> (usize, usize) {
        self.focus_pair
    }

    pub fn n_spectators(&self) -> usize {
        self.n_spectators
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// D_{1jIJ} for spectator keys (i_v, j_v).
    pub fn get(&self, i_v: usize, j_v: usize) -> Complex64 {
        self.entries[i_v * (1 << self.n_spectators) + j_v]
    }

    /// Symmetrized font D_{1jIJ} + D_{1jJI}, the object entering n4.
    pub fn sym(&self, i_v: usize, j_v: usize) -> Complex64 {
        self.get(i_v, j_v) + self.get(j_v, i_v)
    }

    /// n4(rho_1j) assembled from the fonts: sum over ordered (I, J) of
    /// |D_{1jIJ} + D_{1jJI}|^2.
    pub fn n4(&self) -> f64 {
        let d = 1usize << self.n_spectators;
        let mut acc = 0.0;
        for i in 0..d {
            for j in 0..d {
                acc += self.sym(i, j).norm_sqr();
            }
        }
        acc
    }

    /// The pair's additive share of the one-tangle. Each font connects two
    /// basis-index patterns differing at the focus partner and at the
    /// spectator positions where I and J disagree; dividing its weight by
    /// that multiplicity makes the shares sum to 4 det(rho_1) exactly.
    pub fn one_tangle_share(&self) -> f64 {
        let d = 1usize << self.n_spectators;
        let mut acc = 0.0;
        for i in 0..d {
            for j in 0..d {
                let multiway = 1 + ((i ^ j) as u32).count_ones() as usize;
                acc += self.get(i, j).norm_sqr() / multiway as f64;
            }
        }
        4.0 * acc
    }

    /// Coherence correction X_{1j} = n4(rho_1j) minus the pair's one-tangle
    /// share. For three qubits this reduces to the plain cross-product form
    /// 2 sum_{I<J} (D_{1jIJ} D*_{1jJI} + c.c.).
    pub fn coherence_x(&self) -> f64 {
        self.n4() - self.one_tangle_share()
    }
}

/// Compute the font table of the pair (1, j).
pub fn font_table(state: &PureState, j: usize) -> Result<FontTable> {
    let n = state.n_qubits();
    if n < 3 {
        return Err(Error::BadParam(format!(
            "font table needs at least 3 qubits, state has {n}"
        )));
    }
    if j < 2 || j > n {
        return Err(Error::BadIndex(j));
    }
    let spectators: Vec<usize> = (2..=n).filter(|&q| q != j).collect();
    let ns = spectators.len();
    let d = 1usize << ns;
    // full-index template: bits of focus qubit 1 and partner j plus spectators
    let place = |i1: u8, ij: u8, pattern: usize| -> usize {
        let mut idx = (i1 as usize) << (n - 1);
        idx |= (ij as usize) << (n - j);
        for (p, &q) in spectators.iter().enumerate() {
            idx |= ((pattern >> p) & 1) << (n - q);
        }
        idx
    };
    let amps = state.amplitudes();
    let mut entries = Vec::with_capacity(d * d);
    for i_v in 0..d {
        for j_v in 0..d {
            let det = amps[place(0, 0, i_v)] * amps[place(1, 1, j_v)]
                - amps[place(1, 0, i_v)] * amps[place(0, 1, j_v)];
            entries.push(det);
        }
    }
    Ok(FontTable {
        focus_pair: (1, j),
        n_spectators: ns,
        entries,
    })
}

/// Coherence sum X_{1j} of the pair (1, j).
pub fn coherence_x(state: &PureState, j: usize) -> Result<f64> {
    Ok(font_table(state, j)?.coherence_x())
}

/// The ten invariants of Appendix B.1 for a pair (1, j) of a four-qubit
/// state: four plain two-way fonts and six symmetrized multiway fonts.
#[derive(Debug, Clone)]
pub struct InvariantSet {
    pub pair_index: usize,
    pub e: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
    pub f: Complex64,
    pub l: Complex64,
    pub g: Complex64,
    pub k: Complex64,
    pub h0: Complex64,
    pub h1: Complex64,
}

impl InvariantSet {
    /// The degree-two invariant I_{4,2} = H_{0j} - H_{1j}; the same value
    /// for every pair index.
    pub fn i42(&self) -> Complex64 {
        self.h0 - self.h1
    }
}

/// Assemble the invariant set of pair (1, j), j in {2, 3, 4}.
///
/// Spectator keys: bit 0 = smaller spectator qubit, bit 1 = larger. The
/// printed sign conventions for j = 3, 4 (and the two misprinted K rows)
/// all collapse to this one symmetric construction; the n4/n8 trace
/// oracles pin it down.
pub fn invariant_set(state: &PureState, j: usize) -> Result<InvariantSet> {
    if state.n_qubits() != 4 {
        return Err(Error::BadParam(format!(
            "invariant set is defined for 4 qubits, state has {}",
            state.n_qubits()
        )));
    }
    if !(2..=4).contains(&j) {
        return Err(Error::BadIndex(j));
    }
    let t = font_table(state, j)?;
    Ok(InvariantSet {
        pair_index: j,
        e: t.get(0b00, 0b00),
        c: t.get(0b01, 0b01),
        b: t.get(0b10, 0b10),
        d: t.get(0b11, 0b11),
        f: t.sym(0b00, 0b01),
        l: t.sym(0b10, 0b11),
        g: t.sym(0b00, 0b10),
        k: t.sym(0b01, 0b11),
        h0: t.sym(0b00, 0b11),
        h1: t.sym(0b10, 0b01),
    })
}
