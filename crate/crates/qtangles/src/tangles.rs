//! Tangles of pure few-qubit states: the one-tangle, pair two-tangles,
//! pure and convex-roof three-tangles, the four four-tangles, and the
//! residual quantities delta_1j / Delta_1j.

use crate::error::{Error, Result};
use crate::invariants::{
    four_invariants, i34_pure3, i34_unnormalized, FourQubitInvariants,
};
use crate::qstate::{DensityMatrix, PureState, QubitSubset};
use crate::spectral;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;

/// Default seed for every randomized search in the crate.
pub const DEFAULT_SEED: u64 = 12345;

/// Knobs of the convex-roof minimization.
#[derive(Debug, Clone)]
pub struct RoofOptions {
    /// Independent random restarts, distributed over ensemble sizes 2..=4.
    pub restarts: usize,
    /// Coordinate-descent iterations per restart.
    pub iterations: usize,
    /// Base seed; restart i uses `seed + i`.
    pub seed: u64,
}

impl Default for RoofOptions {
    fn default() -> Self {
        Self {
            restarts: 32,
            iterations: 400,
            seed: DEFAULT_SEED,
        }
    }
}

/// Outcome of the convex-roof search: an upper estimate of the mixed-state
/// three-tangle together with the achieving ensemble.
#[derive(Debug, Clone)]
pub struct RoofResult {
    /// Best average tangle found; an upper bound on the true convex roof.
    pub estimate: f64,
    /// Average tangle of the plain eigenvector ensemble, the search baseline.
    pub eigen_baseline: f64,
    /// Ensemble achieving `estimate`: probabilities and normalized branches.
    pub decomposition: Vec<(f64, Vec<Complex64>)>,
    /// False when no restart beat the eigenvector ensemble.
    pub improved: bool,
}

/// One-tangle 4 det(rho_focus) of qubit `focus` against the rest.
pub fn one_tangle(state: &PureState, focus: usize) -> Result<f64> {
    let rho = state.partial_trace(&QubitSubset::new(vec![focus], state.n_qubits())?)?;
    let m = rho.mat();
    let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    Ok(4.0 * det.re)
}

/// Three-tangle of a pure three-qubit state, 4 |I_{3,4}|.
pub fn three_tangle_pure(state: &PureState) -> Result<f64> {
    Ok(4.0 * i34_pure3(state)?.norm())
}

/// The four four-tangles of a four-qubit state with focus qubit 1.
#[derive(Debug, Clone, Serialize)]
pub struct FourTangles {
    /// tau^(0) = 2 |I_{4,2}|; detects GHZ-like entanglement but fails to
    /// vanish on Bell products.
    pub tau0: f64,
    /// Genuine four-tangle tau^(1) = sqrt(16 |12 I_{4,8}|).
    pub tau1: f64,
    /// tau^(2)(rho_1j) = sqrt(32 M_{4,8}(rho_1j)), keyed by j.
    pub tau2: BTreeMap<String, f64>,
    /// tau^(3)(rho_1j) = |4 I_{4,2}^2 - (4/3) P_{1j}|, keyed by j.
    pub tau3: BTreeMap<String, f64>,
}

impl FourTangles {
    pub fn tau2_of(&self, j: usize) -> f64 {
        self.tau2[&j.to_string()]
    }

    pub fn tau3_of(&self, j: usize) -> f64 {
        self.tau3[&j.to_string()]
    }

    /// Largest of all stored four-tangles.
    pub fn max_value(&self) -> f64 {
        let mut m = self.tau0.max(self.tau1);
        for v in self.tau2.values().chain(self.tau3.values()) {
            m = m.max(*v);
        }
        m
    }
}

pub(crate) fn four_tangles_from(inv: &FourQubitInvariants) -> FourTangles {
    let i42sq = inv.i42 * inv.i42;
    let tau2 = inv
        .m48
        .iter()
        .map(|(j, &m)| (j.to_string(), (32.0 * m).max(0.0).sqrt()))
        .collect();
    let tau3 = inv
        .p
        .iter()
        .map(|(j, &p)| (j.to_string(), (4.0 * i42sq - (4.0 / 3.0) * p).norm()))
        .collect();
    FourTangles {
        tau0: 2.0 * inv.i42.norm(),
        tau1: (16.0 * (12.0 * inv.i48).norm()).sqrt(),
        tau2,
        tau3,
    }
}

/// Compute the four four-tangles (focus qubit 1).
pub fn four_tangles(state: &PureState) -> Result<FourTangles> {
    Ok(four_tangles_from(&four_invariants(state)?))
}

/// Upper bound sqrt(16 N_{4,8}^{(1jk)} - (1/6) (tau^(1))^2) on the
/// convex-roof three-tangle of a triple containing qubit 1.
pub fn three_tangle_upper(state: &PureState, triple: &QubitSubset) -> Result<f64> {
    let inv = four_invariants(state)?;
    let others: Vec<usize> = triple.indices().iter().copied().filter(|&q| q != 1).collect();
    if triple.len() != 3 || others.len() != 2 {
        return Err(Error::BadSubset("triple must contain qubit 1 and two others".into()));
    }
    let key = (others[0].min(others[1]), others[0].max(others[1]));
    upper_from(&inv, key)
}

fn upper_from(inv: &FourQubitInvariants, key: (usize, usize)) -> Result<f64> {
    let n48 = *inv
        .n48
        .get(&key)
        .ok_or_else(|| Error::BadSubset(format!("no triple (1,{},{})", key.0, key.1)))?;
    Ok((16.0 * n48 - 32.0 * inv.i48.norm()).max(0.0).sqrt())
}

/// Convex-roof estimate of the mixed three-tangle of an 8x8 density matrix
/// of rank at most four, by right-unitary mixing of its eigenvector
/// ensemble. Returns an upper estimate and the achieving decomposition.
pub fn three_tangle_mixed(rho: &DensityMatrix, opts: &RoofOptions) -> Result<RoofResult> {
    if rho.dim() != 8 {
        return Err(Error::BadDim {
            expected: 8,
            got: rho.dim(),
        });
    }
    let eig = rho.mat().clone().symmetric_eigen();
    let mut pairs: Vec<(f64, Vec<Complex64>)> = eig
        .eigenvalues
        .iter()
        .enumerate()
        .map(|(i, &w)| (w, eig.eigenvectors.column(i).iter().copied().collect()))
        .collect();
    pairs.sort_by(|a, b| b.0.partial_cmp(&a.0).expect("finite eigenvalues"));
    if pairs.iter().any(|(w, _)| *w < -1e-10) {
        return Err(Error::NumericalFailure("negative eigenvalue in roof input".into()));
    }
    let rank = pairs.iter().filter(|(w, _)| *w > 1e-12).count().max(1);
    if rank > 4 {
        return Err(Error::BadParam(format!(
            "rank {rank} exceeds the supported ensemble sizes"
        )));
    }
    // subnormalized eigenbranches v_i = sqrt(w_i) e_i
    let branches: Vec<Vec<Complex64>> = pairs[..rank]
        .iter()
        .map(|(w, v)| v.iter().map(|&x| x * w.max(0.0).sqrt()).collect())
        .collect();
    let eigen_baseline = ensemble_value(&branches);
    if rank == 1 {
        let p = branch_weight(&branches[0]);
        let normalized = branches[0].iter().map(|&x| x / p.sqrt()).collect();
        return Ok(RoofResult {
            estimate: eigen_baseline,
            eigen_baseline,
            decomposition: vec![(p, normalized)],
            improved: false,
        });
    }

    // rank-2 fast path: the roof is exactly zero iff the state sits in the
    // convex hull of the zero-tangle states of its support, which are the
    // roots of the binary quartic I_{3,4} restricted to the span
    if rank == 2 {
        if let Some(zero) = zero_roof_decomposition(&pairs[..2]) {
            let value = ensemble_value(&zero);
            let decomposition = zero
                .iter()
                .filter_map(|b| {
                    let p = branch_weight(b);
                    (p > 1e-14).then(|| (p, b.iter().map(|&x| x / p.sqrt()).collect()))
                })
                .collect();
            return Ok(RoofResult {
                estimate: value.max(0.0),
                eigen_baseline,
                decomposition,
                improved: value < eigen_baseline,
            });
        }
    }

    let sizes: Vec<usize> = (2..=4).filter(|&m| m >= rank).collect();
    let runs: Vec<(f64, Vec<Vec<Complex64>>)> = (0..opts.restarts)
        .into_par_iter()
        .map(|ri| {
            let m = sizes[ri % sizes.len()];
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(ri as u64));
            run_restart(&branches, m, opts.iterations, &mut rng)
        })
        .collect();

    let mut best_val = eigen_baseline;
    let mut best_branches: Option<Vec<Vec<Complex64>>> = None;
    for (v, ens) in runs {
        if v < best_val - 1e-15 {
            best_val = v;
            best_branches = Some(ens);
        }
    }
    let improved = best_branches.is_some();
    let winner = best_branches.unwrap_or(branches);
    let decomposition = winner
        .iter()
        .filter_map(|b| {
            let p = branch_weight(b);
            (p > 1e-14).then(|| (p, b.iter().map(|&x| x / p.sqrt()).collect()))
        })
        .collect();
    Ok(RoofResult {
        estimate: best_val.max(0.0),
        eigen_baseline,
        decomposition,
        improved,
    })
}

fn branch_weight(b: &[Complex64]) -> f64 {
    b.iter().map(|x| x.norm_sqr()).sum()
}

/// Try to decompose a rank-2 state into zero-tangle support states. The
/// support states with I_{3,4} = 0 are the projective roots of a binary
/// quartic; the decomposition exists iff the Bloch vector of the state
/// within its support lies in their convex hull.
fn zero_roof_decomposition(pairs: &[(f64, Vec<Complex64>)]) -> Option<Vec<Vec<Complex64>>> {
    let (mu0, e0) = (&pairs[0].0, &pairs[0].1);
    let (mu1, e1) = (&pairs[1].0, &pairs[1].1);
    let dim = e0.len();
    // quartic I_{3,4}(a e0 + b e1) = sum_k d_k a^(4-k) b^k on the ONB span
    let form = PairForm::new(e0, e1);
    let d = form.q;
    let scale = d.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if scale < 1e-30 {
        // every support state is tangle-free; the eigenbranches already
        // form a zero decomposition
        return Some(vec![
            e0.iter().map(|&x| x * mu0.sqrt()).collect(),
            e1.iter().map(|&x| x * mu1.sqrt()).collect(),
        ]);
    }
    // projective roots of sum_k d_k z^k, z = b/a; missing leading
    // coefficients put roots at z = infinity (the pure e1 state)
    let deg = (0..=4).rev().find(|&k| d[k].norm() > 1e-13 * scale)?;
    let mut points: Vec<([f64; 3], Option<Complex64>)> = Vec::new();
    for _ in deg..4 {
        points.push(([0.0, 0.0, -1.0], None)); // z = infinity
    }
    if deg > 0 {
        for z in durand_kerner(&d[..=deg]) {
            let n2 = 1.0 + z.norm_sqr();
            points.push((
                [2.0 * z.re / n2, 2.0 * z.im / n2, (1.0 - z.norm_sqr()) / n2],
                Some(z),
            ));
        }
    }
    // barycenter constraint: sum p_k n_k = r, sum p_k = mu0 + mu1 (= 1)
    let total = mu0 + mu1;
    let target = [0.0, 0.0, mu0 - mu1];
    let weights = hull_weights(&points, target, total)?;
    // rebuild subnormalized branches sqrt(p) (e0 + z e1)/sqrt(1+|z|^2)
    let mut branches = Vec::new();
    for ((_, z), &p) in points.iter().zip(weights.iter()) {
        if p <= 1e-14 {
            continue;
        }
        let branch: Vec<Complex64> = match z {
            None => e1.iter().map(|&x| x * p.sqrt()).collect(),
            Some(z) => {
                let norm = (1.0 + z.norm_sqr()).sqrt();
                (0..dim)
                    .map(|x| (e0[x] + z * e1[x]) * (p.sqrt() / norm))
                    .collect()
            }
        };
        branches.push(branch);
    }
    // accept only if the ensemble really reassembles the state and every
    // branch is tangle-free at roundoff scale
    let mut recon_err = 0.0f64;
    for x in 0..dim {
        for y in 0..dim {
            let mut acc = Complex64::new(0.0, 0.0);
            for b in &branches {
                acc += b[x] * b[y].conj();
            }
            let expect = mu0 * e0[x] * e0[y].conj() + mu1 * e1[x] * e1[y].conj();
            recon_err = recon_err.max((acc - expect).norm());
        }
    }
    let worst_tangle = branches
        .iter()
        .map(|b| branch_contrib(b))
        .fold(0.0, f64::max);
    (recon_err < 1e-8 && worst_tangle < 1e-9).then_some(branches)
}

/// Convex weights p >= 0 with sum p_k n_k = target and sum p_k = total,
/// searched over subsets of the candidate points (largest first).
fn hull_weights(
    points: &[([f64; 3], Option<Complex64>)],
    target: [f64; 3],
    total: f64,
) -> Option<Vec<f64>> {
    let n = points.len();
    for size in (1..=n).rev() {
        for subset in subsets(n, size) {
            let mut m = nalgebra::DMatrix::zeros(4, size);
            for (col, &idx) in subset.iter().enumerate() {
                for row in 0..3 {
                    m[(row, col)] = points[idx].0[row];
                }
                m[(3, col)] = 1.0;
            }
            let rhs = nalgebra::DVector::from_column_slice(&[
                target[0], target[1], target[2], total,
            ]);
            let svd = m.clone().svd(true, true);
            if let Ok(sol) = svd.solve(&rhs, 1e-12) {
                let residual = (&m * &sol - &rhs).norm();
                if residual < 1e-10 && sol.iter().all(|&p| p >= -1e-12) {
                    let mut weights = vec![0.0; n];
                    for (col, &idx) in subset.iter().enumerate() {
                        weights[idx] = sol[col].max(0.0);
                    }
                    return Some(weights);
                }
            }
        }
    }
    None
}

fn subsets(n: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, size, cur, out);
            cur.pop();
        }
    }
    rec(0, n, size, &mut cur, &mut out);
    out
}

/// Durand-Kerner roots of sum_k d_k z^k with d.last() != 0.
fn durand_kerner(d: &[Complex64]) -> Vec<Complex64> {
    let deg = d.len() - 1;
    let lead = d[deg];
    let monic: Vec<Complex64> = d.iter().map(|&c| c / lead).collect();
    let eval = |z: Complex64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in monic.iter().rev() {
            acc = acc * z + c;
        }
        acc
    };
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..deg).map(|k| seed.powu(k as u32 + 1)).collect();
    for _ in 0..200 {
        let mut moved = 0.0f64;
        for i in 0..deg {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..deg {
                if j != i {
                    denom *= roots[i] - roots[j];
                }
            }
            if denom.norm() < 1e-30 {
                continue;
            }
            let step = eval(roots[i]) / denom;
            roots[i] -= step;
            moved = moved.max(step.norm());
        }
        if moved < 1e-14 {
            break;
        }
    }
    roots
}

/// p_k tau(phi_k) for a subnormalized branch: 4 |I_{3,4}(psi)| / <psi|psi>.
fn branch_contrib(b: &[Complex64]) -> f64 {
    let p = branch_weight(b);
    if p < 1e-14 {
        0.0
    } else {
        4.0 * i34_unnormalized(b).norm() / p
    }
}

fn ensemble_value(branches: &[Vec<Complex64>]) -> f64 {
    branches.iter().map(|b| branch_contrib(b)).sum()
}

/// I_{3,4} and the Gram data restricted to the span of two branches.
/// I_{3,4}(alpha u + beta v) is a binary quartic with five coefficients,
/// so mixing-angle candidates cost O(1) once the form is polarized out.
struct PairForm {
    q: [Complex64; 5],
    gaa: f64,
    gbb: f64,
    gab: Complex64,
}

impl PairForm {
    fn new(u: &[Complex64], v: &[Complex64]) -> Self {
        let dim = u.len();
        let mut upv = vec![Complex64::new(0.0, 0.0); dim];
        let mut umv = upv.clone();
        let mut upiv = upv.clone();
        let mut umiv = upv.clone();
        let i = Complex64::new(0.0, 1.0);
        for x in 0..dim {
            upv[x] = u[x] + v[x];
            umv[x] = u[x] - v[x];
            upiv[x] = u[x] + i * v[x];
            umiv[x] = u[x] - i * v[x];
        }
        let c0 = i34_unnormalized(u);
        let c4 = i34_unnormalized(v);
        let e1 = i34_unnormalized(&upv);
        let e2 = i34_unnormalized(&umv);
        let e3 = i34_unnormalized(&upiv);
        let e4 = i34_unnormalized(&umiv);
        let c2 = 0.5 * (e1 + e2) - c0 - c4;
        let sum13 = 0.5 * (e1 - e2);
        let diff13 = (e3 - e4) * Complex64::new(0.0, -0.5);
        let c1 = 0.5 * (sum13 + diff13);
        let c3 = 0.5 * (sum13 - diff13);
        let gab = (0..dim).map(|x| u[x].conj() * v[x]).sum();
        Self {
            q: [c0, c1, c2, c3, c4],
            gaa: branch_weight(u),
            gbb: branch_weight(v),
            gab,
        }
    }

    fn quartic(&self, alpha: Complex64, beta: Complex64) -> Complex64 {
        let a2 = alpha * alpha;
        let b2 = beta * beta;
        self.q[0] * a2 * a2
            + self.q[1] * a2 * alpha * beta
            + self.q[2] * a2 * b2
            + self.q[3] * alpha * beta * b2
            + self.q[4] * b2 * b2
    }

    fn weight(&self, alpha: Complex64, beta: Complex64) -> f64 {
        alpha.norm_sqr() * self.gaa
            + beta.norm_sqr() * self.gbb
            + 2.0 * (alpha.conj() * beta * self.gab).re
    }

    /// Summed p_k tau_k of the two rotated branches at mixing (theta, phi).
    fn rotated_value(&self, theta: f64, phi: f64) -> f64 {
        let (s, c) = theta.sin_cos();
        let e = Complex64::from_polar(1.0, phi);
        let (aa, ab) = (Complex64::from(c), -s * e);
        let (ba, bb) = (s * e.conj(), Complex64::from(c));
        let mut total = 0.0;
        let pa = self.weight(aa, ab);
        if pa > 1e-14 {
            total += 4.0 * self.quartic(aa, ab).norm() / pa;
        }
        let pb = self.weight(ba, bb);
        if pb > 1e-14 {
            total += 4.0 * self.quartic(ba, bb).norm() / pb;
        }
        total
    }
}

fn golden_section(mut lo: f64, mut hi: f64, iters: usize, f: &dyn Fn(f64) -> f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..iters {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// One random restart: Gaussian isometry start, then coordinate descent
/// over two-branch mixers, each step solved by a coarse scan plus
/// golden-section refinement of the mixing angle and phase.
fn run_restart(
    eigen: &[Vec<Complex64>],
    m: usize,
    iterations: usize,
    rng: &mut ChaCha8Rng,
) -> (f64, Vec<Vec<Complex64>>) {
    let r = eigen.len();
    let dim = eigen[0].len();
    // random isometry rows -> starting ensemble
    let u = random_isometry(m, r, rng);
    let mut branches: Vec<Vec<Complex64>> = (0..m)
        .map(|k| {
            (0..dim)
                .map(|x| (0..r).map(|i| u[k][i] * eigen[i][x]).sum())
                .collect()
        })
        .collect();
    let mut contribs: Vec<f64> = branches.iter().map(|b| branch_contrib(b)).collect();
    let mut value: f64 = contribs.iter().sum();

    use std::f64::consts::{FRAC_PI_2, TAU};
    let mut stalled = 0usize;
    for _ in 0..iterations {
        // a long stall means the descent has converged for every pair
        if stalled > 20 * m * (m - 1) {
            break;
        }
        let a = rng.gen_range(0..m);
        let mut b = rng.gen_range(0..m - 1);
        if b >= a {
            b += 1;
        }
        let form = PairForm::new(&branches[a], &branches[b]);
        let rest: f64 = value - contribs[a] - contribs[b];
        let pair_now = contribs[a] + contribs[b];

        // coarse 2d scan over mixing angle and phase
        let mut best = (0.0f64, 0.0f64, pair_now);
        for it in 0..9 {
            let theta = -FRAC_PI_2 + FRAC_PI_2 * it as f64 / 4.0;
            for ip in 0..8 {
                let phi = TAU * ip as f64 / 8.0;
                let v = form.rotated_value(theta, phi);
                if v < best.2 - 1e-16 {
                    best = (theta, phi, v);
                }
            }
        }
        // alternate golden-section refinements in each coordinate
        let dtheta = FRAC_PI_2 / 4.0;
        let dphi = TAU / 8.0;
        for (width_t, width_p, iters) in [(dtheta, dphi, 40), (dtheta / 100.0, dphi / 100.0, 25)] {
            let phi = best.1;
            let (t, v) = golden_section(best.0 - width_t, best.0 + width_t, iters, &|t| {
                form.rotated_value(t, phi)
            });
            if v < best.2 {
                best = (t, phi, v);
            }
            let theta = best.0;
            let (p, v) = golden_section(best.1 - width_p, best.1 + width_p, iters, &|p| {
                form.rotated_value(theta, p)
            });
            if v < best.2 {
                best = (theta, p, v);
            }
        }

        if best.2 < pair_now - 1e-15 {
            stalled = 0;
            let (s, c) = best.0.sin_cos();
            let e = Complex64::from_polar(1.0, best.1);
            for x in 0..dim {
                let va = branches[a][x];
                let vb = branches[b][x];
                branches[a][x] = c * va - s * e * vb;
                branches[b][x] = s * e.conj() * va + c * vb;
            }
            contribs[a] = branch_contrib(&branches[a]);
            contribs[b] = branch_contrib(&branches[b]);
            value = rest + contribs[a] + contribs[b];
        } else {
            stalled += 1;
        }
    }
    (value, branches)
}

fn random_isometry(m: usize, r: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<Complex64>> {
    // m x r with orthonormal columns, by Gram-Schmidt on Gaussian columns
    let mut cols: Vec<Vec<Complex64>> = (0..r)
        .map(|_| {
            (0..m)
                .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                .collect()
        })
        .collect();
    for i in 0..r {
        for prev in 0..i {
            let ip: Complex64 = (0..m).map(|x| cols[prev][x].conj() * cols[i][x]).sum();
            for x in 0..m {
                let sub = ip * cols[prev][x];
                cols[i][x] -= sub;
            }
        }
        let n: f64 = cols[i].iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        for x in cols[i].iter_mut() {
            *x /= n;
        }
    }
    // transpose to rows
    (0..m)
        .map(|k| (0..r).map(|i| cols[i][k]).collect())
        .collect()
}

/// A mixed-state three-tangle entry of the report.
#[derive(Debug, Clone, Serialize)]
pub struct ThreeTangle {
    /// Convex-roof upper estimate from the optimizer.
    pub estimate: f64,
    /// Analytic bound sqrt(16 N_{4,8} - (1/6) (tau^(1))^2).
    pub upper_bound: f64,
    /// Plain eigenvector-ensemble value the optimizer started from.
    pub eigen_baseline: f64,
}

/// Every tangle of a four-qubit pure state for one focus qubit.
///
/// All maps are keyed in the refocused frame, where the focus sits at
/// position 1 and the partner qubits keep their ascending order; `partners`
/// translates positions 2..4 back to original qubit labels.
#[derive(Debug, Clone, Serialize)]
pub struct TangleReport {
    pub focus_qubit: usize,
    pub partners: [usize; 3],
    pub one_tangle: f64,
    pub two_tangles: BTreeMap<String, f64>,
    pub three_tangles: BTreeMap<String, ThreeTangle>,
    pub four_tangles: FourTangles,
    /// delta_1j = 4 n8(rho_1j) - (1/4) sum_k tau^2_{1|j|k}.
    pub delta: BTreeMap<String, f64>,
    /// Delta_1j = delta_1j + chi^sign(C)(rho_1j).
    pub big_delta: BTreeMap<String, f64>,
    /// Weighted four-tangle sum bounding delta_1j from below.
    pub delta_lower_bound: BTreeMap<String, f64>,
}

impl TangleReport {
    /// Compute the full report. `focus` may be any qubit; the state is
    /// refocused internally.
    pub fn compute(state: &PureState, focus: usize, opts: &RoofOptions) -> Result<Self> {
        if state.n_qubits() != 4 {
            return Err(Error::BadParam(format!(
                "tangle report needs a 4-qubit state, got {}",
                state.n_qubits()
            )));
        }
        let (st, labels) = state.refocus(focus)?;
        let partners = [labels[1], labels[2], labels[3]];
        let one = one_tangle(&st, 1)?;
        let inv = four_invariants(&st)?;
        let four = four_tangles_from(&inv);

        let mut two = BTreeMap::new();
        let mut polys = BTreeMap::new();
        for j in 2..=4usize {
            let rho = st.partial_trace(&QubitSubset::new(vec![1, j], 4)?)?;
            let sp = spectral::spectrum(&rho)?;
            let pc = spectral::poly_coeffs(&rho)?;
            two.insert(j.to_string(), sp.c_value.max(0.0));
            polys.insert(j, (sp, pc));
        }

        let mut three = BTreeMap::new();
        for (j, k) in [(2usize, 3usize), (2, 4), (3, 4)] {
            let rho = st.partial_trace(&QubitSubset::new(vec![1, j, k], 4)?)?;
            let roof = three_tangle_mixed(&rho, opts)?;
            let upper = upper_from(&inv, (j, k))?;
            three.insert(
                format!("{j}{k}"),
                ThreeTangle {
                    estimate: roof.estimate,
                    upper_bound: upper,
                    eigen_baseline: roof.eigen_baseline,
                },
            );
        }

        let mut delta = BTreeMap::new();
        let mut big_delta = BTreeMap::new();
        let mut lower = BTreeMap::new();
        for j in 2..=4usize {
            let (sp, pc) = &polys[&j];
            let sum_tau3_sq: f64 = (2..=4)
                .filter(|&k| k != j)
                .map(|k| {
                    let key = format!("{}{}", j.min(k), j.max(k));
                    three[&key].estimate.powi(2)
                })
                .sum();
            let d = 4.0 * pc.n8 - 0.25 * sum_tau3_sq;
            delta.insert(j.to_string(), d);
            big_delta.insert(j.to_string(), d + pc.chi_for(sp.c_value));
            lower.insert(
                j.to_string(),
                four.tau1.powi(2) / 12.0 + four.tau2_of(j).powi(2) / 8.0
                    + 3.0 * four.tau3_of(j).powi(2) / 32.0,
            );
        }

        Ok(TangleReport {
            focus_qubit: focus,
            partners,
            one_tangle: one,
            two_tangles: two,
            three_tangles: three,
            four_tangles: four,
            delta,
            big_delta,
            delta_lower_bound: lower,
        })
    }

    pub fn two(&self, j: usize) -> f64 {
        self.two_tangles[&j.to_string()]
    }

    pub fn three(&self, j: usize, k: usize) -> &ThreeTangle {
        &self.three_tangles[&format!("{}{}", j.min(k), j.max(k))]
    }

    pub fn delta_of(&self, j: usize) -> f64 {
        self.delta[&j.to_string()]
    }

    pub fn big_delta_of(&self, j: usize) -> f64 {
        self.big_delta[&j.to_string()]
    }
}

/// delta_1j and Delta_1j of a four-qubit state (focus qubit 1), with the
/// convex-roof estimates the residuals are built from.
pub fn delta_quantities(
    state: &PureState,
    opts: &RoofOptions,
) -> Result<(BTreeMap<String, f64>, BTreeMap<String, f64>)> {
    let report = TangleReport::compute(state, 1, opts)?;
    Ok((report.delta, report.big_delta))
}
