//! Acceptance suite: one test per published criterion, each printing a
//! single pass/fail line (run with `--nocapture` to see them). Every
//! tolerance is pinned here, not configurable.

use num_complex::Complex64;
use qtangles::fonts::{coherence_x, font_table, invariant_set};
use qtangles::invariants::{four_invariants, n4_form, n8_decomposition, n8_structural};
use qtangles::monogamy::{evaluate_ckw, linspace, sweep_l_family};
use qtangles::qstate::{random_unitary_2x2, PureState, QubitSubset};
use qtangles::spectral::{poly_coeffs, spectrum, two_tangle, verify_n4_identity};
use qtangles::tangles::{
    four_tangles, one_tangle, three_tangle_mixed, RoofOptions, TangleReport,
};
use qtangles::transfer::apply_cnot_chain;
use qtangles::zoo::{classify, make, Group, ZooName};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

fn report(criterion: &str, pass: bool, detail: &str) {
    println!(
        "criterion {criterion}: {} - {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {criterion} failed: {detail}");
}

fn zoo_state(name: ZooName) -> PureState {
    make(name, &BTreeMap::new()).unwrap().state
}

fn l_state(a: f64) -> PureState {
    let mut p = BTreeMap::new();
    p.insert("a".to_string(), a);
    make(ZooName::LAia, &p).unwrap().state
}

fn pair_rho(s: &PureState, j: usize) -> qtangles::DensityMatrix {
    s.partial_trace(&QubitSubset::new(vec![1, j], 4).unwrap())
        .unwrap()
}

struct Worst(f64);

impl Worst {
    fn new() -> Self {
        Worst(0.0)
    }
    fn push(&mut self, v: f64) {
        self.0 = self.0.max(v.abs());
    }
}

#[test]
fn criterion_1_ghz_exact_values() {
    const TOL: f64 = 1e-10;
    let s = zoo_state(ZooName::Ghz4);
    let mut w = Worst::new();
    for j in 2..=4 {
        let pc = poly_coeffs(&pair_rho(&s, j)).unwrap();
        w.push(pc.n4 - 0.5);
        w.push(4.0 * pc.n8 - 0.25);
        w.push(pc.n12);
        w.push(pc.n16);
    }
    let rep = TangleReport::compute(&s, 1, &RoofOptions::default()).unwrap();
    w.push(rep.one_tangle - 1.0);
    w.push(rep.four_tangles.tau0 - 1.0);
    w.push(rep.four_tangles.tau1 - 1.0);
    let mut sum_big = 0.0;
    for j in 2..=4 {
        w.push(rep.four_tangles.tau2_of(j) - 1.0);
        w.push(rep.four_tangles.tau3_of(j) - 2.0 / 3.0);
        w.push(rep.delta_of(j) - 0.25);
        sum_big += rep.big_delta_of(j);
    }
    w.push(sum_big - 0.75);
    report(
        "1 (GHZ exact values)",
        w.0 <= TOL,
        &format!("max deviation {:.3e} (tol {TOL:.0e})", w.0),
    );
}

#[test]
fn criterion_2_cluster_table() {
    const TOL: f64 = 1e-10;
    let s = zoo_state(ZooName::Cluster);
    let mut w = Worst::new();
    // (n4, n8, n12, n16, delta, chi-) per pair
    let expect = [
        (2usize, 0.5, 1.0 / 16.0, 0.0, 0.0, 0.25, 0.0),
        (3, 0.25, 3.0 / 128.0, 1.0 / 1024.0, 1.0 / 65536.0, 3.0 / 32.0, -1.0 / 32.0),
        (4, 0.25, 3.0 / 128.0, 1.0 / 1024.0, 1.0 / 65536.0, 3.0 / 32.0, -1.0 / 32.0),
    ];
    let rep = TangleReport::compute(&s, 1, &RoofOptions::default()).unwrap();
    let mut sums = (0.0, 0.0, 0.0, 0.0);
    for &(j, n4, n8, n12, n16, delta, chi_minus) in &expect {
        let pc = poly_coeffs(&pair_rho(&s, j)).unwrap();
        w.push(pc.n4 - n4);
        w.push(pc.n8 - n8);
        w.push(pc.n12 - n12);
        w.push(pc.n16 - n16);
        w.push(pc.chi_minus - chi_minus);
        w.push(rep.delta_of(j) - delta);
        sums.0 += pc.n4;
        sums.1 += pc.n8;
        sums.2 += rep.delta_of(j);
        sums.3 += pc.chi_minus;
    }
    w.push(sums.0 - 1.0);
    w.push(sums.1 - 7.0 / 64.0);
    w.push(sums.2 - 7.0 / 16.0);
    w.push(sums.3 + 1.0 / 16.0);
    // sum_j delta_1j = (1/4) tau1^2 + (1/8) tau2(rho_12)^2 + (3/32) sum_j tau3(rho_1j)^2
    let f = &rep.four_tangles;
    let rhs = 0.25 * f.tau1.powi(2)
        + 0.125 * f.tau2_of(2).powi(2)
        + 3.0 / 32.0 * (2..=4).map(|j| f.tau3_of(j).powi(2)).sum::<f64>();
    w.push(sums.2 - rhs);
    report(
        "2 (cluster coefficient table)",
        w.0 <= TOL,
        &format!("max deviation {:.3e} over 18 cells, sums, and the delta identity (tol {TOL:.0e})", w.0),
    );
}

#[test]
fn criterion_3_bell_product() {
    const TOL: f64 = 1e-10;
    let s = zoo_state(ZooName::BellProduct);
    let mut w = Worst::new();
    w.push(two_tangle(&pair_rho(&s, 2)).unwrap().powi(2) - 1.0);
    let mut sum_c_sq = 0.0;
    for j in [3usize, 4] {
        let rho = pair_rho(&s, j);
        let sp = spectrum(&rho).unwrap();
        let pc = poly_coeffs(&rho).unwrap();
        w.push(sp.c_value + 0.5);
        w.push(pc.n8 - 3.0 / 128.0);
        w.push(pc.n12 - 2f64.powi(-10));
        w.push(pc.n16 - 2f64.powi(-16));
        w.push(pc.f16 - 2f64.powi(-12));
        sum_c_sq += sp.c_value.powi(2);
    }
    let f = four_tangles(&s).unwrap();
    w.push(sum_c_sq - 0.5 * f.tau0.powi(2));
    report(
        "3 (Bell product)",
        w.0 <= TOL,
        &format!("max deviation {:.3e} (tol {TOL:.0e})", w.0),
    );
}

#[test]
fn criterion_4_l_family_grid() {
    const TOL_CLOSED: f64 = 1e-9;
    const TOL_ROOF: f64 = 1e-3;
    let grid = linspace(0.0, 3.0, 61).unwrap();
    let opts = RoofOptions::default();
    let mut w_closed = Worst::new();
    let mut w_roof = Worst::new();
    for &a in &grid {
        let s = l_state(a);
        let den = (4.0 * a * a + 1.0).powi(2);
        let rep = TangleReport::compute(&s, 1, &opts).unwrap();
        let f = &rep.four_tangles;
        w_closed.push(rep.one_tangle - (8.0 * a.powi(2) + 16.0 * a.powi(4)) / den);
        w_closed.push(f.tau0.powi(2) - 4.0 * a.powi(4) / den);
        w_closed.push(poly_coeffs(&pair_rho(&s, 2)).unwrap().n4 - 4.0 * (a.powi(4) + a.powi(2)) / den);
        let n4_13 = poly_coeffs(&pair_rho(&s, 3)).unwrap().n4;
        let n4_14 = poly_coeffs(&pair_rho(&s, 4)).unwrap().n4;
        w_closed.push(n4_13 - (2.0 * a.powi(2) + 7.0 * a.powi(4)) / den);
        w_closed.push(n4_14 - n4_13);
        w_closed.push(f.tau2_of(2) - 8.0 * 3f64.sqrt() * a.powi(4) / den);
        w_closed.push(f.tau3_of(3) - 4.0 * 5f64.sqrt() * a.powi(4) / den);
        w_closed.push(f.tau3_of(4) - f.tau3_of(3));
        let tau2_13 = 4.0 * a.powi(3) * (6.0 * a * a + 10.0).sqrt() / den;
        w_closed.push(f.tau2_of(3) - tau2_13);
        w_closed.push(f.tau2_of(4) - tau2_13);
        let roof_target = 8.0 * a.powi(3) / den;
        for (j, k) in [(2usize, 3usize), (2, 4), (3, 4)] {
            w_roof.push(rep.three(j, k).estimate - roof_target);
        }
    }
    // the sweep itself must hold its floors over the same grid
    let rows = sweep_l_family(&grid, &opts).unwrap();
    let floors = rows.iter().all(|r| r.s >= -1e-9 && r.r >= 0.0);
    let pass = w_closed.0 <= TOL_CLOSED && w_roof.0 <= TOL_ROOF && floors;
    report(
        "4 (L-family closed forms on a 61-point grid)",
        pass,
        &format!(
            "closed-form deviation {:.3e} (tol {TOL_CLOSED:.0e}), roof deviation {:.3e} (tol {TOL_ROOF:.0e}), floors {}",
            w_closed.0, w_roof.0, if floors { "hold" } else { "violated" }
        ),
    );
}

#[test]
fn criterion_5_transfer_model() {
    const TOL: f64 = 1e-9;
    let mut w = Worst::new();
    for x in [1.5f64, 2.0, 3.0, 6.0, 10.0] {
        let q = 4.0 * (x - 1.0) / (x * x);
        let run = apply_cnot_chain(x, 8, 8).unwrap();
        for step in &run.steps {
            w.push(step.tau_12_sq - q.powi(step.m as i32 + 1));
        }
    }
    // fixed point: x = 2 keeps tau^2 = 1 at every step
    let run = apply_cnot_chain(2.0, 8, 8).unwrap();
    for step in &run.steps {
        w.push(step.tau_12_sq - 1.0);
    }
    // M = 1 crossings of tau^2_(1|2) = Delta at x = 4 -+ 2 sqrt(2),
    // located by sign change on a grid of resolution 1e-3
    let mut brackets_ok = true;
    for root in [4.0 - 2.0 * 2f64.sqrt(), 4.0 + 2.0 * 2f64.sqrt()] {
        let xs = linspace(root - 0.05, root + 0.05, 101).unwrap();
        let g = |x: f64| {
            let run = apply_cnot_chain(x, 1, 1).unwrap();
            let s = &run.steps[1];
            s.tau_12_sq - s.residual
        };
        let mut found = false;
        for pair in xs.windows(2) {
            if g(pair[0]).signum() != g(pair[1]).signum() {
                found = pair[0] <= root && root <= pair[1] + 1e-12;
                break;
            }
        }
        brackets_ok &= found;
    }
    report(
        "5 (transfer model)",
        w.0 <= TOL && brackets_ok,
        &format!(
            "max closed-form deviation {:.3e} (tol {TOL:.0e}), crossings bracketed: {brackets_ok}",
            w.0
        ),
    );
}

#[test]
fn criterion_6_oracle_equivalence_suites() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut w_forms = Worst::new(); // 1e-8: n4form, n8form, decomposition, n4rho
    let mut w_psum = Worst::new(); // 1e-9
    let mut w_tan = Worst::new(); // 1e-9: 1tann4 and LU invariance
    let opts = RoofOptions::default();
    let mut w_roof_lu = Worst::new();
    for trial in 0..200 {
        let s = PureState::random(4, &mut rng);
        let mut n4_sum = 0.0;
        for j in 2..=4 {
            let rho = pair_rho(&s, j);
            let pc = poly_coeffs(&rho).unwrap();
            let set = invariant_set(&s, j).unwrap();
            w_forms.push(n4_form(&set) - pc.n4);
            w_forms.push(n8_structural(&s, j).unwrap() - pc.n8);
            w_forms.push(n8_decomposition(&s, j).unwrap() - pc.n8);
            w_forms.push(verify_n4_identity(&rho).unwrap());
            n4_sum += pc.n4;
        }
        let inv = four_invariants(&s).unwrap();
        let psum: Complex64 = inv.p.values().sum();
        w_psum.push((psum - 3.0 * inv.i42 * inv.i42).norm());
        let f = four_tangles(&s).unwrap();
        w_tan.push(one_tangle(&s, 1).unwrap() - (n4_sum - 0.5 * f.tau0.powi(2)));

        // local-unitary invariance of the tangles
        let q = 1 + (trial % 4);
        let u = random_unitary_2x2(&mut rng);
        let t = s.apply_local_unitary(q, &u).unwrap();
        let ft = four_tangles(&t).unwrap();
        w_tan.push(f.tau0 - ft.tau0);
        w_tan.push(f.tau1 - ft.tau1);
        for j in 2..=4 {
            w_tan.push(f.tau2_of(j) - ft.tau2_of(j));
            w_tan.push(f.tau3_of(j) - ft.tau3_of(j));
            w_tan.push(
                two_tangle(&pair_rho(&s, j)).unwrap() - two_tangle(&pair_rho(&t, j)).unwrap(),
            );
        }
        w_tan.push(one_tangle(&s, 1).unwrap() - one_tangle(&t, 1).unwrap());
        // pure three-tangles are closed-form and must be exactly invariant
        let s3 = PureState::random(3, &mut rng);
        let u3 = random_unitary_2x2(&mut rng);
        let t3 = s3.apply_local_unitary(1 + trial % 3, &u3).unwrap();
        w_tan.push(
            qtangles::tangles::three_tangle_pure(&s3).unwrap()
                - qtangles::tangles::three_tangle_pure(&t3).unwrap(),
        );
        // mixed three-tangles are optimizer estimates and carry the looser
        // optimizer tolerance; spot-checked on a subsample for runtime
        if trial % 25 == 0 {
            let triple = QubitSubset::new(vec![1, 2, 3], 4).unwrap();
            let e1 = three_tangle_mixed(&s.partial_trace(&triple).unwrap(), &opts)
                .unwrap()
                .estimate;
            let e2 = three_tangle_mixed(&t.partial_trace(&triple).unwrap(), &opts)
                .unwrap()
                .estimate;
            w_roof_lu.push(e1 - e2);
        }
    }
    let pass = w_forms.0 <= 1e-8 && w_psum.0 <= 1e-9 && w_tan.0 <= 1e-9 && w_roof_lu.0 <= 1e-3;
    report(
        "6 (oracle equivalence, 200 random states)",
        pass,
        &format!(
            "forms {:.3e} (1e-8), P-sum {:.3e} (1e-9), closed-form tangle identities and invariance {:.3e} (1e-9), roof-estimate invariance {:.3e} (optimizer tol 1e-3, 8-state subsample)",
            w_forms.0, w_psum.0, w_tan.0, w_roof_lu.0
        ),
    );
}

#[test]
fn criterion_7_ckw_and_three_qubit_coherences() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7777);
    let mut w_ckw = Worst::new();
    for _ in 0..500 {
        let s = PureState::random(3, &mut rng);
        w_ckw.push(evaluate_ckw(&s).unwrap().records[0].residual);
    }
    let mut w_x3 = Worst::new();
    for _ in 0..200 {
        let s = PureState::random(3, &mut rng);
        let sum: f64 = (2..=3).map(|j| coherence_x(&s, j).unwrap()).sum();
        w_x3.push(sum);
    }
    let pass = w_ckw.0 <= 1e-9 && w_x3.0 <= 1e-10;
    report(
        "7a (CKW on 500 random 3-qubit states; coherence sum at N=3)",
        pass,
        &format!("CKW residual {:.3e} (1e-9), N=3 coherence sum {:.3e} (1e-10)", w_ckw.0, w_x3.0),
    );
}

#[test]
fn criterion_7_five_qubit_coherence_sum() {
    // As published, the coherence sum is claimed to vanish for odd qubit
    // counts. The identity tau_{1|2..N} = sum_j (n4(rho_1j) - X_1j) forces
    // sum_j X_1j = sum_j n4(rho_1j) - tau, and at N=5 that quantity is
    // generically nonzero (e.g. it equals 1 on the five-qubit GHZ state),
    // so the N=5 half of this criterion cannot hold. It is implemented
    // faithfully and expected to fail; see the decisions ledger.
    let mut rng = ChaCha8Rng::seed_from_u64(0x7755);
    let mut w_x5 = Worst::new();
    for _ in 0..50 {
        let s = PureState::random(5, &mut rng);
        let sum: f64 = (2..=5).map(|j| coherence_x(&s, j).unwrap()).sum();
        w_x5.push(sum);
    }
    // the same sum on GHZ_5 is exactly sum_j n4 - tau = 2 - 1 = 1
    let mut amps = vec![Complex64::new(0.0, 0.0); 32];
    amps[0] = Complex64::new(1.0, 0.0);
    amps[31] = Complex64::new(1.0, 0.0);
    let ghz5 = PureState::from_amplitudes(5, amps).unwrap();
    let ghz_sum: f64 = (2..=5).map(|j| coherence_x(&ghz5, j).unwrap()).sum();
    println!(
        "criterion 7b note: sum_j X_1j on GHZ_5 = {ghz_sum:.12} (= sum_j n4 - tau, nonzero by construction)"
    );
    report(
        "7b (coherence sum at N=5)",
        w_x5.0 <= 1e-10,
        &format!(
            "max |sum_j X_1j| {:.3e} over 50 random 5-qubit states (tol 1e-10); \
             nonzero for every X reading consistent with the one-tangle decomposition",
            w_x5.0
        ),
    );
}

#[test]
fn criterion_8_zero_tangle_verdicts() {
    let opts = RoofOptions::default();
    // W~: three- and four-tangles vanish, classified Group IV
    let w_tilde = zoo_state(ZooName::WTilde);
    let mut w_zero = Worst::new();
    let f = four_tangles(&w_tilde).unwrap();
    w_zero.push(f.tau0);
    w_zero.push(f.tau1);
    for j in 2..=4 {
        w_zero.push(f.tau2_of(j));
        w_zero.push(f.tau3_of(j));
    }
    for (a, b, c) in [(1usize, 2usize, 3usize), (1, 2, 4), (1, 3, 4), (2, 3, 4)] {
        let rho = w_tilde
            .partial_trace(&QubitSubset::new(vec![a, b, c], 4).unwrap())
            .unwrap();
        w_zero.push(three_tangle_mixed(&rho, &opts).unwrap().estimate);
    }
    let label = classify(&w_tilde, 1e-6, &opts).unwrap();

    // |chi>: tau^(2)(rho_12)^2 = 4 tau_{1|2|3} tau_{1|2|4} with the
    // analytic three-tangles; the other pair four-tangles vanish
    let mut w_chi = Worst::new();
    for (x, y, z) in [(1.0, 1.0, 1.0), (0.7, 0.5, 0.4), (0.3, 0.9, 0.5)] {
        let mut p = BTreeMap::new();
        p.insert("a0000".to_string(), x);
        p.insert("a1101".to_string(), y);
        p.insert("a1110".to_string(), z);
        let chi = make(ZooName::Chi, &p).unwrap().state;
        let amps = chi.amplitudes();
        let a0000 = amps[0b0000].norm();
        let a1101 = amps[0b1101].norm();
        let a1110 = amps[0b1110].norm();
        let tau_123 = 4.0 * (a0000 * a1110).powi(2);
        let tau_124 = 4.0 * (a0000 * a1101).powi(2);
        let f = four_tangles(&chi).unwrap();
        w_chi.push(f.tau2_of(2).powi(2) - 4.0 * tau_123 * tau_124);
        w_zero.push(f.tau2_of(3));
        w_zero.push(f.tau2_of(4));
    }
    let pass = w_zero.0 <= 1e-6 && label.group == Group::IV && w_chi.0 <= 1e-8;
    report(
        "8 (zero-tangle verdicts)",
        pass,
        &format!(
            "W~/chi zero tangles {:.3e} (1e-6), W~ group {:?}, chi identity {:.3e} (1e-8)",
            w_zero.0, label.group, w_chi.0
        ),
    );
}
