//! Pure states, density matrices, and the local operations the tangle
//! machinery is built on: normalization, tensor products, qubit permutation,
//! partial trace, local unitaries, and CNOT.
//!
//! Bit ordering is fixed crate-wide: qubit 1 is the most significant bit of
//! the flat amplitude index, so the amplitude of |i1 i2 ... iN> sits at
//! index sum_m i_m 2^(N-m).

use crate::error::{Error, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

pub const MIN_QUBITS: usize = 2;
pub const MAX_QUBITS: usize = 12;

/// Norm deviation below which a state counts as already normalized.
pub const NORM_TOL: f64 = 1e-12;

/// A normalized pure state of `n_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    n_qubits: usize,
    amps: Vec<Complex64>,
    renormalized: bool,
}

/// An ordered set of distinct 1-based qubit indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QubitSubset {
    indices: Vec<usize>,
}

impl QubitSubset {
    pub fn new(indices: Vec<usize>, n_qubits: usize) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::BadSubset("empty subset".into()));
        }
        let mut seen = vec![false; n_qubits + 1];
        for &q in &indices {
            if q == 0 || q > n_qubits {
                return Err(Error::BadSubset(format!(
                    "qubit {q} outside 1..={n_qubits}"
                )));
            }
            if seen[q] {
                return Err(Error::BadSubset(format!("qubit {q} repeated")));
            }
            seen[q] = true;
        }
        Ok(Self { indices })
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

impl PureState {
    /// Build a state from a flat amplitude vector, normalizing it.
    ///
    /// States whose norm deviates from one by more than [`NORM_TOL`] are
    /// normalized rather than rejected; [`PureState::was_renormalized`]
    /// records that this happened.
    pub fn from_amplitudes(n_qubits: usize, amps: Vec<Complex64>) -> Result<Self> {
        if !(MIN_QUBITS..=MAX_QUBITS).contains(&n_qubits) {
            return Err(Error::BadParam(format!(
                "n_qubits {n_qubits} outside {MIN_QUBITS}..={MAX_QUBITS}"
            )));
        }
        if amps.len() != 1 << n_qubits {
            return Err(Error::BadParam(format!(
                "amplitude vector length {} != 2^{n_qubits}",
                amps.len()
            )));
        }
        let norm = l2_norm(&amps);
        if norm < 1e-14 {
            return Err(Error::ZeroState);
        }
        // idempotent: inputs already normalized within tolerance are kept
        // bit-exact, so an echoed state re-analyzes identically
        let renormalized = (norm - 1.0).abs() > NORM_TOL;
        let amps = if renormalized {
            amps.into_iter().map(|a| a / norm).collect()
        } else {
            amps
        };
        Ok(Self {
            n_qubits,
            amps,
            renormalized,
        })
    }

    /// Computational basis state |index> of `n_qubits` qubits.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        if index >= amps.len() {
            return Err(Error::BadIndex(index));
        }
        amps[index] = Complex64::new(1.0, 0.0);
        Self::from_amplitudes(n_qubits, amps)
    }

    /// Haar-ish random state: i.i.d. complex Gaussian amplitudes, normalized.
    pub fn random<R: Rng + ?Sized>(n_qubits: usize, rng: &mut R) -> Self {
        let mut amps: Vec<Complex64> = (0..1usize << n_qubits)
            .map(|_| {
                Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
            })
            .collect();
        let norm = l2_norm(&amps);
        for a in &mut amps {
            *a /= norm;
        }
        Self {
            n_qubits,
            amps,
            renormalized: false,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn was_renormalized(&self) -> bool {
        self.renormalized
    }

    /// Amplitude a_{i1 i2 ... iN} addressed by per-qubit bits.
    pub fn amp_bits(&self, bits: &[u8]) -> Complex64 {
        debug_assert_eq!(bits.len(), self.n_qubits);
        let mut idx = 0usize;
        for &b in bits {
            idx = (idx << 1) | b as usize;
        }
        self.amps[idx]
    }

    /// Rank-one density matrix |psi><psi|.
    pub fn density(&self) -> DensityMatrix {
        let d = self.dim();
        let m = DMatrix::from_fn(d, d, |r, c| self.amps[r] * self.amps[c].conj());
        DensityMatrix {
            n_qubits: self.n_qubits,
            mat: m,
        }
    }

    /// Reduced density matrix over `keep`, indexed by the kept qubits in
    /// their given order. Implemented by direct index arithmetic.
    pub fn partial_trace(&self, keep: &QubitSubset) -> Result<DensityMatrix> {
        let n = self.n_qubits;
        if keep.len() >= n {
            return Err(Error::BadSubset(
                "subset must be a proper subset of all qubits".into(),
            ));
        }
        for &q in keep.indices() {
            if q > n {
                return Err(Error::BadSubset(format!("qubit {q} outside 1..={n}")));
            }
        }
        let kept = keep.indices();
        let rest: Vec<usize> = (1..=n).filter(|q| !kept.contains(q)).collect();
        let dk = 1usize << kept.len();
        let dr = 1usize << rest.len();
        // scatter a compact pattern onto its bit positions in the full index
        let scatter = |qs: &[usize], pattern: usize| -> usize {
            let mut idx = 0usize;
            for (pos, &q) in qs.iter().enumerate() {
                let bit = (pattern >> (qs.len() - 1 - pos)) & 1;
                idx |= bit << (n - q);
            }
            idx
        };
        let rest_idx: Vec<usize> = (0..dr).map(|r| scatter(&rest, r)).collect();
        let kept_idx: Vec<usize> = (0..dk).map(|k| scatter(kept, k)).collect();
        let mut m = DMatrix::from_element(dk, dk, Complex64::new(0.0, 0.0));
        for a in 0..dk {
            for b in 0..dk {
                let mut acc = Complex64::new(0.0, 0.0);
                for &r in &rest_idx {
                    acc += self.amps[kept_idx[a] | r] * self.amps[kept_idx[b] | r].conj();
                }
                m[(a, b)] = acc;
            }
        }
        Ok(DensityMatrix {
            n_qubits: kept.len(),
            mat: m,
        })
    }

    /// Apply a 2x2 unitary to one qubit.
    pub fn apply_local_unitary(&self, qubit: usize, u: &[[Complex64; 2]; 2]) -> Result<PureState> {
        if qubit == 0 || qubit > self.n_qubits {
            return Err(Error::BadIndex(qubit));
        }
        if !is_unitary_2x2(u, 1e-10) {
            return Err(Error::NotUnitary);
        }
        let bit = 1usize << (self.n_qubits - qubit);
        let mut out = self.amps.clone();
        for idx in 0..self.amps.len() {
            if idx & bit == 0 {
                let a0 = self.amps[idx];
                let a1 = self.amps[idx | bit];
                out[idx] = u[0][0] * a0 + u[0][1] * a1;
                out[idx | bit] = u[1][0] * a0 + u[1][1] * a1;
            }
        }
        Ok(PureState {
            n_qubits: self.n_qubits,
            amps: out,
            renormalized: false,
        })
    }

    /// Relabel qubits: `perm[q-1]` is the new position of old qubit `q`.
    pub fn permute_qubits(&self, perm: &[usize]) -> Result<PureState> {
        let n = self.n_qubits;
        if perm.len() != n {
            return Err(Error::BadPermutation(n));
        }
        let mut seen = vec![false; n + 1];
        for &p in perm {
            if p == 0 || p > n || seen[p] {
                return Err(Error::BadPermutation(n));
            }
            seen[p] = true;
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (idx, &a) in self.amps.iter().enumerate() {
            let mut nidx = 0usize;
            for q in 1..=n {
                let bit = (idx >> (n - q)) & 1;
                nidx |= bit << (n - perm[q - 1]);
            }
            out[nidx] = a;
        }
        Ok(PureState {
            n_qubits: n,
            amps: out,
            renormalized: false,
        })
    }

    /// CNOT with `control` flipping `target`, applied by index-pair swap.
    pub fn apply_cnot(&self, control: usize, target: usize) -> Result<PureState> {
        let n = self.n_qubits;
        if control == 0 || control > n {
            return Err(Error::BadIndex(control));
        }
        if target == 0 || target > n || target == control {
            return Err(Error::BadIndex(target));
        }
        let cbit = 1usize << (n - control);
        let tbit = 1usize << (n - target);
        let mut out = self.amps.clone();
        for idx in 0..self.amps.len() {
            if idx & cbit != 0 && idx & tbit == 0 {
                out.swap(idx, idx | tbit);
            }
        }
        Ok(PureState {
            n_qubits: n,
            amps: out,
            renormalized: false,
        })
    }

    /// Tensor product, `self` on the more significant qubits.
    pub fn tensor(&self, other: &PureState) -> Result<PureState> {
        let n = self.n_qubits + other.n_qubits;
        if n > MAX_QUBITS {
            return Err(Error::BadParam(format!("{n} qubits exceeds {MAX_QUBITS}")));
        }
        let mut amps = Vec::with_capacity(1 << n);
        for &a in &self.amps {
            for &b in &other.amps {
                amps.push(a * b);
            }
        }
        Ok(PureState {
            n_qubits: n,
            amps,
            renormalized: false,
        })
    }

    /// Move `focus` to position 1, keeping the other qubits in ascending
    /// order. Returns the permuted state and, for each new position p,
    /// `labels[p-1]` = the original qubit now sitting there.
    pub fn refocus(&self, focus: usize) -> Result<(PureState, Vec<usize>)> {
        let n = self.n_qubits;
        if focus == 0 || focus > n {
            return Err(Error::BadIndex(focus));
        }
        let mut labels = vec![focus];
        labels.extend((1..=n).filter(|&q| q != focus));
        let mut perm = vec![0usize; n];
        for (newpos, &old) in labels.iter().enumerate() {
            perm[old - 1] = newpos + 1;
        }
        Ok((self.permute_qubits(&perm)?, labels))
    }
}

fn l2_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

/// Haar-random 2x2 unitary from a Gram-Schmidt-orthonormalized complex
/// Gaussian matrix.
pub fn random_unitary_2x2<R: Rng + ?Sized>(rng: &mut R) -> [[Complex64; 2]; 2] {
    let mut g = [[Complex64::new(0.0, 0.0); 2]; 2];
    for row in &mut g {
        for x in row.iter_mut() {
            *x = Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
        }
    }
    let n0 = (g[0][0].norm_sqr() + g[1][0].norm_sqr()).sqrt();
    let c0 = [g[0][0] / n0, g[1][0] / n0];
    let ip = c0[0].conj() * g[0][1] + c0[1].conj() * g[1][1];
    let mut c1 = [g[0][1] - ip * c0[0], g[1][1] - ip * c0[1]];
    let n1 = (c1[0].norm_sqr() + c1[1].norm_sqr()).sqrt();
    c1 = [c1[0] / n1, c1[1] / n1];
    [[c0[0], c1[0]], [c0[1], c1[1]]]
}

fn is_unitary_2x2(u: &[[Complex64; 2]; 2], tol: f64) -> bool {
    // u^dagger u = I
    let mut err = 0.0f64;
    for i in 0..2 {
        for j in 0..2 {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..2 {
                acc += u[k][i].conj() * u[k][j];
            }
            let expect = if i == j { 1.0 } else { 0.0 };
            err = err.max((acc - expect).norm());
        }
    }
    err <= tol
}

/// A Hermitian, trace-one density matrix on 2^n_qubits dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    mat: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Wrap a matrix, checking hermiticity and unit trace at 1e-12.
    pub fn new(mat: DMatrix<Complex64>) -> Result<Self> {
        let d = mat.nrows();
        if d != mat.ncols() || !d.is_power_of_two() || d < 2 {
            return Err(Error::BadDim {
                expected: 0,
                got: d,
            });
        }
        let herm_err = (&mat - mat.adjoint()).iter().map(|c| c.norm()).fold(0.0, f64::max);
        if herm_err > 1e-12 {
            return Err(Error::NumericalFailure(format!(
                "not Hermitian: deviation {herm_err:.3e}"
            )));
        }
        let tr = mat.diagonal().iter().sum::<Complex64>();
        if (tr.re - 1.0).abs() > 1e-12 || tr.im.abs() > 1e-12 {
            return Err(Error::NumericalFailure(format!("trace {tr} != 1")));
        }
        Ok(Self {
            n_qubits: d.trailing_zeros() as usize,
            mat,
        })
    }

    pub(crate) fn from_parts_unchecked(n_qubits: usize, mat: DMatrix<Complex64>) -> Self {
        Self { n_qubits, mat }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn mat(&self) -> &DMatrix<Complex64> {
        &self.mat
    }

    pub fn trace(&self) -> f64 {
        self.mat.diagonal().iter().map(|c| c.re).sum()
    }

    pub fn purity(&self) -> f64 {
        (&self.mat * &self.mat).diagonal().iter().map(|c| c.re).sum()
    }

    /// Partial trace over the complement of `keep` (1-based positions
    /// within this matrix's own qubits).
    pub fn partial_trace(&self, keep: &QubitSubset) -> Result<DensityMatrix> {
        let n = self.n_qubits;
        if keep.len() >= n {
            return Err(Error::BadSubset(
                "subset must be a proper subset of all qubits".into(),
            ));
        }
        for &q in keep.indices() {
            if q > n {
                return Err(Error::BadSubset(format!("qubit {q} outside 1..={n}")));
            }
        }
        let kept = keep.indices();
        let rest: Vec<usize> = (1..=n).filter(|q| !kept.contains(q)).collect();
        let scatter = |qs: &[usize], pattern: usize| -> usize {
            let mut idx = 0usize;
            for (pos, &q) in qs.iter().enumerate() {
                let bit = (pattern >> (qs.len() - 1 - pos)) & 1;
                idx |= bit << (n - q);
            }
            idx
        };
        let dk = 1usize << kept.len();
        let dr = 1usize << rest.len();
        let mut m = DMatrix::from_element(dk, dk, Complex64::new(0.0, 0.0));
        for a in 0..dk {
            let ia = scatter(kept, a);
            for b in 0..dk {
                let ib = scatter(kept, b);
                let mut acc = Complex64::new(0.0, 0.0);
                for r in 0..dr {
                    let ir = scatter(&rest, r);
                    acc += self.mat[(ia | ir, ib | ir)];
                }
                m[(a, b)] = acc;
            }
        }
        Ok(DensityMatrix {
            n_qubits: kept.len(),
            mat: m,
        })
    }

    /// Check the full type invariants including positive semidefiniteness.
    pub fn validate(&self) -> Result<()> {
        let evs = self.mat.clone().symmetric_eigen().eigenvalues;
        if let Some(bad) = evs.iter().find(|&&w| w < -1e-10) {
            return Err(Error::NumericalFailure(format!(
                "negative eigenvalue {bad:.3e}"
            )));
        }
        Ok(())
    }
}

/// JSON form of a pure state: `{"n_qubits": n, "amplitudes": [[re, im], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateJson {
    pub n_qubits: usize,
    pub amplitudes: Vec<[f64; 2]>,
}

impl StateJson {
    pub fn to_state(&self) -> Result<PureState> {
        let amps = self
            .amplitudes
            .iter()
            .map(|&[re, im]| Complex64::new(re, im))
            .collect();
        PureState::from_amplitudes(self.n_qubits, amps)
    }

    pub fn from_state(state: &PureState) -> Self {
        Self {
            n_qubits: state.n_qubits(),
            amplitudes: state.amplitudes().iter().map(|a| [a.re, a.im]).collect(),
        }
    }
}

/// Parse a state from its JSON document, rejecting wrong-length arrays.
pub fn read_state_json(text: &str) -> Result<PureState> {
    let parsed: StateJson =
        serde_json::from_str(text).map_err(|e| Error::BadParam(format!("state JSON: {e}")))?;
    parsed.to_state()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn basis_state_is_normalized() {
        let s = PureState::basis(3, 0).unwrap();
        assert_eq!(s.amplitudes()[0], c(1.0, 0.0));
        assert!(!s.was_renormalized());
    }

    #[test]
    fn ghz_normalization() {
        let mut amps = vec![c(0.0, 0.0); 16];
        amps[0] = c(1.0, 0.0);
        amps[15] = c(1.0, 0.0);
        let s = PureState::from_amplitudes(4, amps).unwrap();
        assert_abs_diff_eq!(s.amplitudes()[0].re, 1.0 / 2f64.sqrt(), epsilon = 1e-15);
        assert!(s.was_renormalized());
    }

    #[test]
    fn zero_state_rejected() {
        let amps = vec![c(0.0, 0.0); 4];
        assert!(matches!(
            PureState::from_amplitudes(2, amps),
            Err(Error::ZeroState)
        ));
    }

    #[test]
    fn n_qubits_domain_guard() {
        assert!(PureState::from_amplitudes(1, vec![c(1.0, 0.0); 2]).is_err());
        assert!(PureState::from_amplitudes(13, vec![c(1.0, 0.0); 1 << 13]).is_err());
    }

    #[test]
    fn density_of_basis_state() {
        let s = PureState::basis(2, 0).unwrap();
        let rho = s.density();
        assert_abs_diff_eq!(rho.mat()[(0, 0)].re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(rho.purity(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn density_purity_random() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let s = PureState::random(4, &mut rng);
        assert_abs_diff_eq!(s.density().purity(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn ghz_single_qubit_marginal() {
        let mut amps = vec![c(0.0, 0.0); 16];
        amps[0] = c(1.0, 0.0);
        amps[15] = c(1.0, 0.0);
        let s = PureState::from_amplitudes(4, amps).unwrap();
        let rho1 = s
            .partial_trace(&QubitSubset::new(vec![1], 4).unwrap())
            .unwrap();
        assert_abs_diff_eq!(rho1.mat()[(0, 0)].re, 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(rho1.mat()[(1, 1)].re, 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(rho1.mat()[(0, 1)].norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn partial_trace_preserves_trace() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let s = PureState::random(4, &mut rng);
        let rho = s
            .partial_trace(&QubitSubset::new(vec![1, 3], 4).unwrap())
            .unwrap();
        assert_abs_diff_eq!(rho.trace(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn partial_trace_composition() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let s = PureState::random(4, &mut rng);
            let rho12 = s
                .partial_trace(&QubitSubset::new(vec![1, 2], 4).unwrap())
                .unwrap();
            let rho1_a = rho12
                .partial_trace(&QubitSubset::new(vec![1], 2).unwrap())
                .unwrap();
            let rho1_b = s
                .partial_trace(&QubitSubset::new(vec![1], 4).unwrap())
                .unwrap();
            let err = (rho1_a.mat() - rho1_b.mat())
                .iter()
                .map(|x| x.norm())
                .fold(0.0, f64::max);
            assert!(err < 1e-12, "composition deviated by {err}");
        }
    }

    #[test]
    fn bad_subsets_rejected() {
        let s = PureState::basis(3, 0).unwrap();
        assert!(QubitSubset::new(vec![], 3).is_err());
        assert!(QubitSubset::new(vec![1, 1], 3).is_err());
        assert!(QubitSubset::new(vec![4], 3).is_err());
        let all = QubitSubset::new(vec![1, 2, 3], 3).unwrap();
        assert!(s.partial_trace(&all).is_err());
    }

    #[test]
    fn sigma_x_flips_qubit_one() {
        let s = PureState::basis(4, 0).unwrap();
        let x = [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]];
        let t = s.apply_local_unitary(1, &x).unwrap();
        assert_abs_diff_eq!(t.amplitudes()[0b1000].re, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn non_unitary_rejected() {
        let s = PureState::basis(2, 0).unwrap();
        let bad = [[c(1.0, 0.0), c(1.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]];
        assert!(matches!(
            s.apply_local_unitary(1, &bad),
            Err(Error::NotUnitary)
        ));
    }

    #[test]
    fn permutation_involution() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let s = PureState::random(4, &mut rng);
        let swap12 = [2, 1, 3, 4];
        let t = s
            .permute_qubits(&swap12)
            .unwrap()
            .permute_qubits(&swap12)
            .unwrap();
        assert_eq!(s.amplitudes(), t.amplitudes());
        assert!(s.permute_qubits(&[1, 1, 3, 4]).is_err());
    }

    #[test]
    fn permutation_moves_bits() {
        // |0110>: qubits 2 and 3 set. Swapping 3 and 4 gives |0101>.
        let s = PureState::basis(4, 0b0110).unwrap();
        let t = s.permute_qubits(&[1, 2, 4, 3]).unwrap();
        assert_abs_diff_eq!(t.amplitudes()[0b0101].re, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn cnot_on_basis_states() {
        let s = PureState::basis(3, 0b100).unwrap();
        let t = s.apply_cnot(1, 3).unwrap();
        assert_abs_diff_eq!(t.amplitudes()[0b101].re, 1.0, epsilon = 1e-15);
        let u = PureState::basis(3, 0b000).unwrap().apply_cnot(1, 3).unwrap();
        assert_abs_diff_eq!(u.amplitudes()[0b000].re, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn single_qubit_det_identity() {
        // 2(1 - tr rho^2) = 4 det rho for trace-one Hermitian 2x2
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        for _ in 0..50 {
            let s = PureState::random(3, &mut rng);
            let rho = s
                .partial_trace(&QubitSubset::new(vec![1], 3).unwrap())
                .unwrap();
            let lhs = 2.0 * (1.0 - rho.purity());
            let det = rho.mat()[(0, 0)] * rho.mat()[(1, 1)] - rho.mat()[(0, 1)] * rho.mat()[(1, 0)];
            assert_abs_diff_eq!(lhs, 4.0 * det.re, epsilon = 1e-12);
        }
    }

    #[test]
    fn state_json_round_trip() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        let s = PureState::random(3, &mut rng);
        let text = serde_json::to_string(&StateJson::from_state(&s)).unwrap();
        let t = read_state_json(&text).unwrap();
        for (a, b) in s.amplitudes().iter().zip(t.amplitudes()) {
            assert!((a - b).norm() < 1e-15);
        }
        assert!(read_state_json("{\"n_qubits\": 2, \"amplitudes\": [[1,0]]}").is_err());
    }
}
