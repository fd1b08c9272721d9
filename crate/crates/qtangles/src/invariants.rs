//! Three- and four-qubit polynomial invariants: I_{3,4}, the degree-four
//! slice invariants I^{4-m,m}, the degree-eight quantities N_{4,8}^{(1jk)},
//! I_{4,8}, P_{1j}, M_{4,8}(rho_1j), and the two structural routes to the
//! coefficient n8(rho_1j).

use crate::error::{Error, Result};
use crate::fonts::{invariant_set, InvariantSet};
use crate::qstate::{PureState, QubitSubset};
use crate::spectral;
use num_complex::Complex64;
use std::collections::BTreeMap;

/// Kahan-compensated sum; the degree-eight forms add ~20 squared moduli
/// with terms near cancellation.
pub(crate) fn kahan_sum(terms: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for t in terms {
        let y = t - comp;
        let s = sum + y;
        comp = (s - sum) - y;
        sum = s;
    }
    sum
}

/// The three-qubit invariant I_{3,4} whose modulus gives the three-tangle.
/// Both displayed forms are evaluated; they must agree within 1e-8.
pub fn i34_pure3(state: &PureState) -> Result<Complex64> {
    if state.n_qubits() != 3 {
        return Err(Error::BadParam(format!(
            "I_3,4 is defined for 3 qubits, state has {}",
            state.n_qubits()
        )));
    }
    let (line1, line2) = i34_both_lines(state.amplitudes());
    let diff = (line1 - line2).norm();
    if diff > 1e-8 {
        return Err(Error::InternalMismatch(format!(
            "I_3,4 forms differ by {diff:.3e}"
        )));
    }
    Ok(line1)
}

pub(crate) fn i34_both_lines(amps: &[Complex64]) -> (Complex64, Complex64) {
    let a = |i1: usize, i2: usize, i3: usize| amps[(i1 << 2) | (i2 << 1) | i3];
    let d000 = a(0, 0, 0) * a(1, 1, 1) - a(1, 0, 0) * a(0, 1, 1);
    let d001 = a(0, 0, 1) * a(1, 1, 0) - a(1, 0, 1) * a(0, 1, 0);
    let da3_0 = a(0, 0, 0) * a(1, 1, 0) - a(1, 0, 0) * a(0, 1, 0);
    let da3_1 = a(0, 0, 1) * a(1, 1, 1) - a(1, 0, 1) * a(0, 1, 1);
    let da2_0 = a(0, 0, 0) * a(1, 0, 1) - a(1, 0, 0) * a(0, 0, 1);
    let da2_1 = a(0, 1, 0) * a(1, 1, 1) - a(1, 1, 0) * a(0, 1, 1);
    let s = d000 + d001;
    let d = d000 - d001;
    (s * s - 4.0 * da3_0 * da3_1, d * d - 4.0 * da2_0 * da2_1)
}

/// First line of I_{3,4} on an unnormalized 8-component vector; degree four
/// in the amplitudes, which is what the convex-roof search needs.
pub(crate) fn i34_unnormalized(amps: &[Complex64]) -> Complex64 {
    i34_both_lines(amps).0
}

/// The five degree-four invariants of a triple, graded by the traced-out
/// qubit's occupation number.
#[derive(Debug, Clone, Copy)]
pub struct SliceInvariants {
    pub i40: Complex64,
    pub i31: Complex64,
    pub i22: Complex64,
    pub i13: Complex64,
    pub i04: Complex64,
}

impl SliceInvariants {
    fn from_set(set: &InvariantSet) -> Self {
        let (e, b, c, d) = (set.e, set.b, set.c, set.d);
        let (f, l, g, k) = (set.f, set.l, set.g, set.k);
        let h = set.h0 + set.h1;
        Self {
            i40: f * f - 4.0 * e * c,
            i31: 0.5 * f * h - (e * k + c * g),
            i22: h * h / 6.0 - (2.0 / 3.0) * g * k + (1.0 / 3.0) * f * l
                - (2.0 / 3.0) * (e * d + b * c),
            i13: 0.5 * l * h - (b * k + d * g),
            i04: l * l - 4.0 * b * d,
        }
    }

    /// Binomially weighted norm: N_{4,8} of the triple the slices grade.
    pub fn n48(&self) -> f64 {
        kahan_sum([
            self.i40.norm_sqr(),
            4.0 * self.i31.norm_sqr(),
            6.0 * self.i22.norm_sqr(),
            4.0 * self.i13.norm_sqr(),
            self.i04.norm_sqr(),
        ])
    }

    /// Degree-eight invariant of genuine four-way entanglement.
    pub fn i48(&self) -> Complex64 {
        3.0 * self.i22 * self.i22 - 4.0 * self.i31 * self.i13 + self.i40 * self.i04
    }
}

/// Slice invariants of a triple that contains the focus qubit 1. The state
/// is permuted so the traced-out qubit takes the last position, then the
/// pair-(1,2) invariant set grades by it.
pub fn three_qubit_slice_invariants(
    state: &PureState,
    triple: &QubitSubset,
) -> Result<SliceInvariants> {
    if state.n_qubits() != 4 {
        return Err(Error::BadParam(format!(
            "slice invariants are defined for 4 qubits, state has {}",
            state.n_qubits()
        )));
    }
    let idx = triple.indices();
    if idx.len() != 3 || !idx.contains(&1) {
        return Err(Error::BadSubset(
            "triple must contain qubit 1 and two others".into(),
        ));
    }
    let others: Vec<usize> = idx.iter().copied().filter(|&q| q != 1).collect();
    let traced = (2..=4)
        .find(|q| !idx.contains(q))
        .expect("one qubit of four is missing from a triple");
    // old -> new positions for the ordering (1, j, k, traced)
    let order = [1, others[0], others[1], traced];
    let mut perm = [0usize; 4];
    for (newpos, &old) in order.iter().enumerate() {
        perm[old - 1] = newpos + 1;
    }
    let permuted = state.permute_qubits(&perm)?;
    Ok(SliceInvariants::from_set(&invariant_set(&permuted, 2)?))
}

/// P_{1j}, degree four, nonzero iff the pair A1 Aj is entangled to the rest.
pub fn p_invariant(set: &InvariantSet) -> Complex64 {
    let h = set.h0 + set.h1;
    h * h - 4.0 * set.f * set.l - 4.0 * set.g * set.k + 8.0 * set.e * set.d
        + 8.0 * set.b * set.c
}

/// M_{4,8}(rho_1j), the sum of nine three-qubit invariants feeding tau^(2).
pub fn m48(set: &InvariantSet) -> f64 {
    let (e, b, c, d) = (set.e, set.b, set.c, set.d);
    let (f, l, g, k) = (set.f, set.l, set.g, set.k);
    let (h0, h1) = (set.h0, set.h1);
    let hd = h1 - h0;
    kahan_sum([
        2.0 * (f * g - 2.0 * e * h1).norm_sqr(),
        (hd * g + 2.0 * e * l - 2.0 * b * f).norm_sqr(),
        2.0 * (g * l - 2.0 * b * h0).norm_sqr(),
        (hd * f + 2.0 * e * k - 2.0 * c * g).norm_sqr(),
        0.5 * (h1 * h1 - h0 * h0 + 4.0 * e * d - 4.0 * b * c).norm_sqr(),
        (hd * l + 2.0 * g * d - 2.0 * b * k).norm_sqr(),
        2.0 * (f * k - 2.0 * c * h0).norm_sqr(),
        (hd * k + 2.0 * f * d - 2.0 * c * l).norm_sqr(),
        2.0 * (k * l - 2.0 * d * h1).norm_sqr(),
    ])
}

/// Structural n8(rho_1j) from the two-qubit invariant set (the 21-term
/// degree-eight form). Checked against the trace formula within 1e-8.
pub fn n8_structural(state: &PureState, j: usize) -> Result<f64> {
    let set = invariant_set(state, j)?;
    let value = n8_form(&set);
    check_against_trace_n8(state, j, value, "structural form")?;
    Ok(value)
}

/// Structural n4(rho_1j) from the two-qubit invariant set.
pub fn n4_form(set: &InvariantSet) -> f64 {
    let h_sum = set.h0 + set.h1;
    let h_diff = set.h0 - set.h1;
    kahan_sum([
        4.0 * (set.e.norm_sqr() + set.b.norm_sqr() + set.c.norm_sqr() + set.d.norm_sqr()),
        2.0 * (set.g.norm_sqr() + set.k.norm_sqr()),
        2.0 * (set.f.norm_sqr() + set.l.norm_sqr()),
        h_sum.norm_sqr(),
        h_diff.norm_sqr(),
    ])
}

pub(crate) fn n8_form(set: &InvariantSet) -> f64 {
    let (e, b, c, d) = (set.e, set.b, set.c, set.d);
    let (f, l, g, k) = (set.f, set.l, set.g, set.k);
    let (h0, h1) = (set.h0, set.h1);
    kahan_sum([
        (g * g - 4.0 * e * b).norm_sqr(),
        (k * k - 4.0 * c * d).norm_sqr(),
        (f * f - 4.0 * e * c).norm_sqr(),
        (l * l - 4.0 * b * d).norm_sqr(),
        (h0 * h0 - 4.0 * e * d).norm_sqr(),
        (h1 * h1 - 4.0 * b * c).norm_sqr(),
        2.0 * (g * k - f * l).norm_sqr(),
        2.0 * (h0 * h1 - g * k).norm_sqr(),
        2.0 * (h0 * h1 - f * l).norm_sqr(),
        2.0 * (f * g - 2.0 * e * h1).norm_sqr(),
        2.0 * (f * k - 2.0 * c * h0).norm_sqr(),
        2.0 * (g * l - 2.0 * b * h0).norm_sqr(),
        2.0 * (k * l - 2.0 * h1 * d).norm_sqr(),
        2.0 * (h0 * f - 2.0 * e * k).norm_sqr(),
        2.0 * (h0 * g - 2.0 * e * l).norm_sqr(),
        2.0 * (h0 * k - 2.0 * f * d).norm_sqr(),
        2.0 * (h0 * l - 2.0 * g * d).norm_sqr(),
        2.0 * (h1 * f - 2.0 * c * g).norm_sqr(),
        2.0 * (h1 * k - 2.0 * c * l).norm_sqr(),
        2.0 * (h1 * g - 2.0 * b * f).norm_sqr(),
        2.0 * (h1 * l - 2.0 * b * k).norm_sqr(),
    ])
}

/// n8(rho_1j) from its decomposition into four-qubit invariants:
/// the two N_{4,8} of the triples through the pair, the P-residue, and
/// M_{4,8}. Checked against the trace formula within 1e-8.
pub fn n8_decomposition(state: &PureState, j: usize) -> Result<f64> {
    let inv = four_invariants(state)?;
    let value = n8_decomposition_from(&inv, j)?;
    check_against_trace_n8(state, j, value, "decomposition")?;
    Ok(value)
}

pub(crate) fn n8_decomposition_from(inv: &FourQubitInvariants, j: usize) -> Result<f64> {
    let (ka, kb) = match j {
        2 => ((2, 3), (2, 4)),
        3 => ((2, 3), (3, 4)),
        4 => ((2, 4), (3, 4)),
        _ => return Err(Error::BadIndex(j)),
    };
    let i42sq = inv.i42 * inv.i42;
    let p = inv.p[&j];
    Ok(inv.n48[&ka] + inv.n48[&kb] + (3.0 * i42sq - p).norm_sqr() / 24.0 + inv.m48[&j])
}

fn check_against_trace_n8(state: &PureState, j: usize, value: f64, what: &str) -> Result<()> {
    let rho = state.partial_trace(&QubitSubset::new(vec![1, j], 4)?)?;
    let n8 = spectral::poly_coeffs(&rho)?.n8;
    if (value - n8).abs() > 1e-8 {
        return Err(Error::InternalMismatch(format!(
            "n8 {what} {value:.12e} vs trace {n8:.12e} for pair (1,{j})"
        )));
    }
    Ok(())
}

/// The four-qubit invariant family of a state with focus qubit 1.
#[derive(Debug, Clone)]
pub struct FourQubitInvariants {
    pub i42: Complex64,
    pub i48: Complex64,
    /// N_{4,8}^{(1jk)} keyed by the partner pair (j, k), j < k.
    pub n48: BTreeMap<(usize, usize), f64>,
    /// P_{1j} keyed by j.
    pub p: BTreeMap<usize, Complex64>,
    /// M_{4,8}(rho_1j) keyed by j.
    pub m48: BTreeMap<usize, f64>,
}

/// Compute every degree-two/eight invariant the tangles need.
pub fn four_invariants(state: &PureState) -> Result<FourQubitInvariants> {
    if state.n_qubits() != 4 {
        return Err(Error::BadParam(format!(
            "four-qubit invariants need 4 qubits, state has {}",
            state.n_qubits()
        )));
    }
    let sets: BTreeMap<usize, InvariantSet> = (2..=4)
        .map(|j| Ok((j, invariant_set(state, j)?)))
        .collect::<Result<_>>()?;
    let i42 = sets[&2].i42();
    let mut n48 = BTreeMap::new();
    let mut i48 = Complex64::new(0.0, 0.0);
    for (jk, pair) in [((2, 3), (2usize, 3usize)), ((2, 4), (2, 4)), ((3, 4), (3, 4))] {
        let triple = QubitSubset::new(vec![1, pair.0, pair.1], 4)?;
        let slices = three_qubit_slice_invariants(state, &triple)?;
        n48.insert(jk, slices.n48());
        if jk == (2, 3) {
            i48 = slices.i48();
        }
    }
    let p = sets.iter().map(|(&j, s)| (j, p_invariant(s))).collect();
    let m = sets.iter().map(|(&j, s)| (j, m48(s))).collect();
    Ok(FourQubitInvariants {
        i42,
        i48,
        n48,
        p,
        m48: m,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn ghz(n: usize) -> PureState {
        let mut amps = vec![c(0.0, 0.0); 1 << n];
        amps[0] = c(1.0, 0.0);
        amps[(1 << n) - 1] = c(1.0, 0.0);
        PureState::from_amplitudes(n, amps).unwrap()
    }

    fn w3() -> PureState {
        let mut amps = vec![c(0.0, 0.0); 8];
        amps[0b001] = c(1.0, 0.0);
        amps[0b010] = c(1.0, 0.0);
        amps[0b100] = c(1.0, 0.0);
        PureState::from_amplitudes(3, amps).unwrap()
    }

    #[test]
    fn i34_of_ghz3_and_w3() {
        assert_abs_diff_eq!(i34_pure3(&ghz(3)).unwrap().norm(), 0.25, epsilon = 1e-14);
        assert_abs_diff_eq!(i34_pure3(&w3()).unwrap().norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn i34_lines_agree_and_range_holds() {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        for _ in 0..1000 {
            let s = PureState::random(3, &mut rng);
            let (l1, l2) = i34_both_lines(s.amplitudes());
            assert!((l1 - l2).norm() < 1e-10);
            let tau = 4.0 * l1.norm();
            assert!((0.0..=1.0 + 1e-12).contains(&tau), "tau out of range: {tau}");
        }
    }

    #[test]
    fn ghz_slice_invariants() {
        let s = ghz(4);
        let triple = QubitSubset::new(vec![1, 2, 3], 4).unwrap();
        let sl = three_qubit_slice_invariants(&s, &triple).unwrap();
        for v in [sl.i40, sl.i31, sl.i13, sl.i04] {
            assert!(v.norm() < 1e-14);
        }
        assert_abs_diff_eq!(sl.i22.norm(), 1.0 / 24.0, epsilon = 1e-14);
        assert_abs_diff_eq!(sl.n48(), 1.0 / 96.0, epsilon = 1e-14);
    }

    #[test]
    fn sparse_product_slice_invariants() {
        // (3-qubit GHZ) x |0>: only the all-i4=0 grade survives
        let mut amps = vec![c(0.0, 0.0); 16];
        amps[0b0000] = c(1.0, 0.0);
        amps[0b1110] = c(1.0, 0.0);
        let s = PureState::from_amplitudes(4, amps).unwrap();
        let triple = QubitSubset::new(vec![1, 2, 3], 4).unwrap();
        let sl = three_qubit_slice_invariants(&s, &triple).unwrap();
        assert_abs_diff_eq!(sl.i40.norm(), 0.25, epsilon = 1e-14);
        for v in [sl.i31, sl.i22, sl.i13, sl.i04] {
            assert!(v.norm() < 1e-14);
        }
    }

    #[test]
    fn p_sum_equals_three_i42_squared() {
        let mut rng = ChaCha8Rng::seed_from_u64(67);
        for _ in 0..500 {
            let s = PureState::random(4, &mut rng);
            let inv = four_invariants(&s).unwrap();
            let sum: Complex64 = inv.p.values().sum();
            let expect = 3.0 * inv.i42 * inv.i42;
            assert!((sum - expect).norm() < 1e-9, "P sum off by {:.2e}", (sum - expect).norm());
        }
    }

    #[test]
    fn n8_routes_match_trace() {
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        let mut worst = 0.0f64;
        for _ in 0..200 {
            let s = PureState::random(4, &mut rng);
            for j in 2..=4 {
                let rho = s
                    .partial_trace(&QubitSubset::new(vec![1, j], 4).unwrap())
                    .unwrap();
                let n8 = spectral::poly_coeffs(&rho).unwrap().n8;
                let a = n8_structural(&s, j).unwrap();
                let b = n8_decomposition(&s, j).unwrap();
                worst = worst.max((a - n8).abs()).max((b - n8).abs());
            }
        }
        assert!(worst < 1e-8, "worst n8 route residual {worst:.2e}");
    }

    #[test]
    fn ghz_n8_decomposition_value() {
        let s = ghz(4);
        for j in 2..=4 {
            assert_abs_diff_eq!(n8_decomposition(&s, j).unwrap(), 1.0 / 16.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn p_modulus_pairs_across_complementary_pairs() {
        // |P^{A1A2}| = |P^{A3A4}| etc., checked by refocusing on qubit 3
        let mut rng = ChaCha8Rng::seed_from_u64(73);
        for _ in 0..20 {
            let s = PureState::random(4, &mut rng);
            let inv = four_invariants(&s).unwrap();
            // move (3,4) to the focus pair: order (3,4,1,2)
            let refocused = s.permute_qubits(&[3, 4, 1, 2]).unwrap();
            let inv2 = four_invariants(&refocused).unwrap();
            assert_abs_diff_eq!(inv.p[&2].norm(), inv2.p[&2].norm(), epsilon = 1e-9);
        }
    }

    #[test]
    fn local_unitary_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(79);
        for _ in 0..10 {
            let s = PureState::random(4, &mut rng);
            let inv = four_invariants(&s).unwrap();
            let u = crate::qstate::random_unitary_2x2(&mut rng);
            for q in 1..=4 {
                let t = s.apply_local_unitary(q, &u).unwrap();
                let inv2 = four_invariants(&t).unwrap();
                assert_abs_diff_eq!(inv.i42.norm(), inv2.i42.norm(), epsilon = 1e-9);
                assert_abs_diff_eq!(inv.i48.norm(), inv2.i48.norm(), epsilon = 1e-9);
                for jk in [(2, 3), (2, 4), (3, 4)] {
                    assert_abs_diff_eq!(inv.n48[&jk], inv2.n48[&jk], epsilon = 1e-9);
                }
                for j in 2..=4 {
                    assert_abs_diff_eq!(inv.m48[&j], inv2.m48[&j], epsilon = 1e-9);
                    assert_abs_diff_eq!(inv.p[&j].norm(), inv2.p[&j].norm(), epsilon = 1e-9);
                }
            }
        }
    }
}
