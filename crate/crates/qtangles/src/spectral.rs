//! Wootters spin-flip machinery for two-qubit density matrices: the flipped
//! state rho~, the spectrum of rho rho~, the concurrence C(rho), the
//! two-tangle, and the characteristic-polynomial coefficients n4, n8, n12,
//! n16 with the derived quantities f16 and chi+/-.

use crate::error::{Error, Result};
use crate::qstate::DensityMatrix;
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

/// Eigenvalues below this are treated as roundoff and clamped to zero;
/// anything more negative raises `NumericalFailure`.
pub const CLAMP_TOL: f64 = -1e-10;

/// Sorted spectrum of rho rho~ together with the concurrence it yields.
#[derive(Debug, Clone, Serialize)]
pub struct SpinFlipSpectrum {
    /// Eigenvalues of rho rho~, descending, clamped at zero.
    pub lambdas: [f64; 4],
    /// C(rho) = sqrt(l1) - sqrt(l2) - sqrt(l3) - sqrt(l4).
    pub c_value: f64,
}

/// Coefficients of the characteristic polynomial of rho rho~,
/// x^4 - n4 x^3 + n8 x^2 - n12 x + n16, plus f16 and the chi branches.
#[derive(Debug, Clone, Serialize)]
pub struct PolyCoeffs {
    pub n4: f64,
    pub n8: f64,
    pub n12: f64,
    pub n16: f64,
    pub f16: f64,
    pub chi_plus: f64,
    pub chi_minus: f64,
}

impl PolyCoeffs {
    /// The chi branch selected by the sign of C(rho); C = 0 uses the plus
    /// branch (f16 vanishes there, so the branches coincide).
    pub fn chi_for(&self, c_value: f64) -> f64 {
        if c_value >= 0.0 {
            self.chi_plus
        } else {
            self.chi_minus
        }
    }
}

fn check_two_qubit(rho: &DensityMatrix) -> Result<()> {
    if rho.dim() != 4 {
        return Err(Error::BadDim {
            expected: 4,
            got: rho.dim(),
        });
    }
    Ok(())
}

/// The spin-flipped state (sigma_y x sigma_y) rho* (sigma_y x sigma_y).
pub fn spin_flip(rho: &DensityMatrix) -> Result<DensityMatrix> {
    check_two_qubit(rho)?;
    Ok(DensityMatrix::from_parts_unchecked(2, spin_flip_mat(rho.mat())))
}

fn spin_flip_mat(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    // (sigma_y x sigma_y)_{x,u} = -(-1)^{popcount(u)} delta_{x, 3-u}, so the
    // flip reduces to an index reversal with parity signs.
    let sign = |x: usize| if (x as u32).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
    DMatrix::from_fn(4, 4, |x, y| {
        Complex64::from(sign(x) * sign(y)) * m[(3 - x, 3 - y)].conj()
    })
}

/// Eigenvalues of rho rho~ via the Hermitian similarity sqrt(rho) rho~ sqrt(rho).
pub fn spectrum(rho: &DensityMatrix) -> Result<SpinFlipSpectrum> {
    check_two_qubit(rho)?;
    let eig = rho.mat().clone().symmetric_eigen();
    let mut sqrt_vals = [0.0f64; 4];
    for (i, &w) in eig.eigenvalues.iter().enumerate() {
        if w < CLAMP_TOL {
            return Err(Error::NumericalFailure(format!(
                "density matrix eigenvalue {w:.3e} below clamp threshold"
            )));
        }
        sqrt_vals[i] = w.max(0.0).sqrt();
    }
    let d = DMatrix::from_fn(4, 4, |r, c| {
        if r == c {
            Complex64::from(sqrt_vals[r])
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let sqrt_rho = &eig.eigenvectors * d * eig.eigenvectors.adjoint();
    let m = &sqrt_rho * spin_flip_mat(rho.mat()) * &sqrt_rho;
    // hermitize against roundoff before the second eigensolve
    let m = (&m + m.adjoint()).scale(0.5);
    let mut lambdas: Vec<f64> = m.symmetric_eigen().eigenvalues.iter().copied().collect();
    lambdas.sort_by(|a, b| b.partial_cmp(a).expect("eigenvalues are finite"));
    // relative cutoff: eigenvalues at roundoff scale are exact zeros whose
    // square roots would otherwise pollute C(rho) at the 1e-8 level
    let cutoff = lambdas[0].max(0.0) * 1e-14;
    for l in &mut lambdas {
        if *l < CLAMP_TOL {
            return Err(Error::NumericalFailure(format!(
                "rho rho~ eigenvalue {l:.3e} below clamp threshold"
            )));
        }
        *l = if *l < cutoff { 0.0 } else { *l };
    }
    let s: Vec<f64> = lambdas.iter().map(|l| l.sqrt()).collect();
    Ok(SpinFlipSpectrum {
        lambdas: [lambdas[0], lambdas[1], lambdas[2], lambdas[3]],
        c_value: s[0] - s[1] - s[2] - s[3],
    })
}

/// Characteristic-polynomial coefficients of rho rho~ from trace powers and
/// the determinant, plus f16 and chi+/- built from the spectrum-side C(rho).
pub fn poly_coeffs(rho: &DensityMatrix) -> Result<PolyCoeffs> {
    check_two_qubit(rho)?;
    let r = rho.mat() * spin_flip_mat(rho.mat());
    let r2 = &r * &r;
    let t1: f64 = r.diagonal().iter().map(|c| c.re).sum();
    let t2: f64 = r2.diagonal().iter().map(|c| c.re).sum();
    let t3: f64 = (&r2 * &r).diagonal().iter().map(|c| c.re).sum();
    let n4 = t1;
    let n8 = 0.5 * (t1 * t1 - t2);
    let n12 = (t1.powi(3) - 3.0 * t1 * t2 + 2.0 * t3) / 6.0;
    let n16 = r.determinant().re;
    let c = spectrum(rho)?.c_value;
    let c2 = c * c;
    // f16 in the Appendix A grouping: |C|^2 (n12 + sqrt(n16) (n4 - |C|^2))
    let f16 = (c2 * (n12 + n16.max(0.0).sqrt() * (n4 - c2))).max(0.0);
    let root16 = 8.0 * n16.max(0.0).sqrt();
    let chi_plus = root16 + 8.0 * f16.sqrt();
    let chi_minus = root16 - 8.0 * f16.sqrt() + 2.0 * n4 * c2 - c2 * c2;
    Ok(PolyCoeffs {
        n4,
        n8,
        n12,
        n16,
        f16,
        chi_plus,
        chi_minus,
    })
}

/// Two-tangle tau_{1|2}(rho) = max(0, C(rho)).
pub fn two_tangle(rho: &DensityMatrix) -> Result<f64> {
    Ok(spectrum(rho)?.c_value.max(0.0))
}

/// Residual of the closed-form relation between n4, the concurrence, and
/// the higher coefficients: |n4 - |C|^2 - sqrt(4 n8 + 8 sqrt(n16) +- 8 sqrt(f16))|
/// with the branch sign taken from the sign of C(rho).
pub fn verify_n4_identity(rho: &DensityMatrix) -> Result<f64> {
    let pc = poly_coeffs(rho)?;
    let c = spectrum(rho)?.c_value;
    let c2 = c * c;
    let sign = if c >= 0.0 { 1.0 } else { -1.0 };
    let arg = 4.0 * pc.n8 + 8.0 * pc.n16.max(0.0).sqrt() + sign * 8.0 * pc.f16.sqrt();
    Ok((pc.n4 - c2 - arg.max(0.0).sqrt()).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::{PureState, QubitSubset};
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn ghz4() -> PureState {
        let mut amps = vec![c(0.0, 0.0); 16];
        amps[0] = c(1.0, 0.0);
        amps[15] = c(1.0, 0.0);
        PureState::from_amplitudes(4, amps).unwrap()
    }

    fn marginal(s: &PureState, keep: &[usize]) -> DensityMatrix {
        s.partial_trace(&QubitSubset::new(keep.to_vec(), s.n_qubits()).unwrap())
            .unwrap()
    }

    #[test]
    fn maximally_mixed_is_fixed_by_spin_flip() {
        let m = DMatrix::from_fn(4, 4, |r, col| {
            if r == col {
                c(0.25, 0.0)
            } else {
                c(0.0, 0.0)
            }
        });
        let rho = DensityMatrix::new(m.clone()).unwrap();
        let flipped = spin_flip(&rho).unwrap();
        let err = (flipped.mat() - &m).iter().map(|x| x.norm()).fold(0.0, f64::max);
        assert!(err < 1e-15);
    }

    #[test]
    fn bell_projector_is_fixed_by_spin_flip() {
        let mut amps = vec![c(0.0, 0.0); 4];
        amps[0] = c(1.0, 0.0);
        amps[3] = c(1.0, 0.0);
        let bell = PureState::from_amplitudes(2, amps).unwrap();
        let rho = bell.density();
        let flipped = spin_flip(&rho).unwrap();
        let err = (flipped.mat() - rho.mat())
            .iter()
            .map(|x| x.norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-15);
    }

    #[test]
    fn bell_marginal_spectrum() {
        let mut amps = vec![c(0.0, 0.0); 4];
        amps[0] = c(1.0, 0.0);
        amps[3] = c(1.0, 0.0);
        let rho = PureState::from_amplitudes(2, amps).unwrap().density();
        let sp = spectrum(&rho).unwrap();
        assert_abs_diff_eq!(sp.lambdas[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(sp.c_value, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(two_tangle(&rho).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn ghz_pair_marginal_coefficients() {
        let rho = marginal(&ghz4(), &[1, 2]);
        let sp = spectrum(&rho).unwrap();
        let pc = poly_coeffs(&rho).unwrap();
        assert_abs_diff_eq!(pc.n4, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(4.0 * pc.n8, 0.25, epsilon = 1e-12);
        assert_abs_diff_eq!(pc.n12, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(pc.n16, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(sp.c_value, 0.0, epsilon = 1e-10);
        assert_abs_diff_eq!(sp.lambdas.iter().sum::<f64>(), pc.n4, epsilon = 1e-10);
        assert_abs_diff_eq!(two_tangle(&rho).unwrap(), 0.0, epsilon = 1e-10);
        // chi = 0 for the GHZ marginals
        assert_abs_diff_eq!(pc.chi_for(sp.c_value), 0.0, epsilon = 1e-10);
    }

    #[test]
    fn bell_product_cross_marginal() {
        // |Psi_P> = Bell x Bell; rho_13 is maximally mixed
        let mut amps = vec![c(0.0, 0.0); 16];
        for i in [0b0000, 0b0011, 0b1100, 0b1111] {
            amps[i] = c(1.0, 0.0);
        }
        let s = PureState::from_amplitudes(4, amps).unwrap();
        let rho13 = marginal(&s, &[1, 3]);
        let sp = spectrum(&rho13).unwrap();
        let pc = poly_coeffs(&rho13).unwrap();
        assert_abs_diff_eq!(sp.c_value, -0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(pc.n8, 3.0 / 128.0, epsilon = 1e-14);
        assert_abs_diff_eq!(pc.n12, 2f64.powi(-10), epsilon = 1e-14);
        assert_abs_diff_eq!(pc.n16, 2f64.powi(-16), epsilon = 1e-14);
        assert_abs_diff_eq!(pc.f16, 2f64.powi(-12), epsilon = 1e-14);
        assert!(verify_n4_identity(&rho13).unwrap() < 1e-10);
    }

    #[test]
    fn characteristic_polynomial_annihilates_spectrum() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..50 {
            let s = PureState::random(4, &mut rng);
            for j in [2usize, 3, 4] {
                let rho = marginal(&s, &[1, j]);
                let sp = spectrum(&rho).unwrap();
                let pc = poly_coeffs(&rho).unwrap();
                for l in sp.lambdas {
                    let p = l.powi(4) - pc.n4 * l.powi(3) + pc.n8 * l * l - pc.n12 * l + pc.n16;
                    assert!(p.abs() < 1e-8, "polynomial residual {p:.2e}");
                }
            }
        }
    }

    #[test]
    fn elementary_symmetric_consistency() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for _ in 0..50 {
            let s = PureState::random(4, &mut rng);
            let rho = marginal(&s, &[1, 2]);
            let sp = spectrum(&rho).unwrap();
            let pc = poly_coeffs(&rho).unwrap();
            let [a, b, cc, d] = sp.lambdas;
            assert_abs_diff_eq!(pc.n4, a + b + cc + d, epsilon = 1e-9);
            assert_abs_diff_eq!(
                pc.n8,
                a * b + a * cc + a * d + b * cc + b * d + cc * d,
                epsilon = 1e-9
            );
            assert_abs_diff_eq!(
                pc.n12,
                a * b * cc + a * b * d + a * cc * d + b * cc * d,
                epsilon = 1e-9
            );
            assert_abs_diff_eq!(pc.n16, a * b * cc * d, epsilon = 1e-9);
        }
    }

    #[test]
    fn two_tangle_of_pure_two_qubit_state_matches_determinant_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..50 {
            let s = PureState::random(2, &mut rng);
            let a = s.amplitudes();
            let expect = 2.0 * (a[0] * a[3] - a[2] * a[1]).norm();
            let tau = two_tangle(&s.density()).unwrap();
            assert_abs_diff_eq!(tau, expect, epsilon = 1e-12);
        }
    }

    #[test]
    fn n4_identity_on_random_marginals() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let mut worst = 0.0f64;
        for _ in 0..200 {
            let s = PureState::random(4, &mut rng);
            for j in [2usize, 3, 4] {
                let rho = marginal(&s, &[1, j]);
                worst = worst.max(verify_n4_identity(&rho).unwrap());
                // Eq. (2tanrho): n4 - tau^2 = sqrt(4 n8 + chi)
                let pc = poly_coeffs(&rho).unwrap();
                let sp = spectrum(&rho).unwrap();
                let tau = sp.c_value.max(0.0);
                let rhs = (4.0 * pc.n8 + pc.chi_for(sp.c_value)).max(0.0).sqrt();
                assert_abs_diff_eq!(pc.n4 - tau * tau, rhs, epsilon = 1e-8);
            }
        }
        assert!(worst < 1e-8, "worst n4 identity residual {worst:.2e}");
    }

    #[test]
    fn wrong_dimension_rejected() {
        let s = PureState::basis(3, 0).unwrap();
        let rho = s.density();
        assert!(matches!(
            spin_flip(&rho),
            Err(Error::BadDim { expected: 4, .. })
        ));
    }
}
