//! The identity battery behind `qtangles selftest`: every module's
//! invariant checks, runnable with a configurable number of seeded random
//! states. Zoo-state checks always run; random-state suites honor
//! `n_random` and are skipped when it is zero.

use crate::fonts;
use crate::invariants::{four_invariants, n8_decomposition, n8_structural};
use crate::monogamy::{self, evaluate_constraints};
use crate::qstate::{random_unitary_2x2, PureState, QubitSubset};
use crate::spectral;
use crate::tangles::{
    four_tangles, one_tangle, three_tangle_mixed, three_tangle_upper, RoofOptions, TangleReport,
};
use crate::transfer;
use crate::zoo::{self, Group, ZooName};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::BTreeMap;

/// Outcome of one named property suite.
#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

/// Scale and seeding of the battery.
#[derive(Debug, Clone)]
pub struct SelftestConfig {
    pub n_random: usize,
    pub seed: u64,
    pub roof: RoofOptions,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        Self {
            n_random: 200,
            seed: crate::tangles::DEFAULT_SEED,
            roof: RoofOptions::default(),
        }
    }
}

fn residual_check(name: &str, tol: f64, worst: f64) -> CheckResult {
    CheckResult {
        name: name.to_string(),
        pass: worst <= tol,
        detail: format!("max residual {worst:.3e} (tol {tol:.1e})"),
    }
}

fn flag_check(name: &str, pass: bool, detail: String) -> CheckResult {
    CheckResult {
        name: name.to_string(),
        pass,
        detail,
    }
}

fn rng_for(cfg: &SelftestConfig, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(salt))
}

fn zoo_state(name: ZooName) -> PureState {
    zoo::make(name, &BTreeMap::new()).expect("zoo states build").state
}

fn subset(qubits: &[usize], n: usize) -> QubitSubset {
    QubitSubset::new(qubits.to_vec(), n).expect("valid subset")
}

/// Run every suite and collect the verdicts.
pub fn run_all(cfg: &SelftestConfig) -> Vec<CheckResult> {
    let mut out = vec![
        ghz_marginal_purity(),
        zoo_tangle_values(cfg),
        zoo_constraint_equalities(cfg),
        classify_invariance(cfg),
        transfer_model(),
    ];
    if cfg.n_random > 0 {
        out.push(partial_trace_composition(cfg));
        out.push(one_tangle_det_identity(cfg));
        out.push(spectrum_symmetric_functions(cfg));
        out.push(two_tangle_pure_form(cfg));
        out.push(n4_spectral_identity(cfg));
        out.push(fonts_vs_trace(cfg));
        out.push(coherence_sum_three_qubits(cfg));
        out.push(one_tangle_font_decomposition(cfg));
        out.push(n8_routes(cfg));
        out.push(p_sum_identity(cfg));
        out.push(one_tangle_n4_equation(cfg));
        out.push(ckw_equality(cfg));
        out.push(local_unitary_invariance(cfg));
        out.push(focus_independence(cfg));
        out.push(roof_quality(cfg));
        out.push(delta_lower_bound(cfg));
        out.push(product_reduction(cfg));
    }
    out
}

fn partial_trace_composition(cfg: &SelftestConfig) -> CheckResult {
    let mut rng = rng_for(cfg, 1);
    let mut worst = 0.0f64;
    for _ in 0..cfg.n_random {
        let s = PureState::random(4, &mut rng);
        let rho12 = s.partial_trace(&subset(&[1, 2], 4)).unwrap();
        let a = rho12.partial_trace(&subset(&[1], 2)).unwrap();
        let b = s.partial_trace(&subset(&[1], 4)).unwrap();
        let dev = (a.mat() - b.mat()).iter().map(|x| x.norm()).fold(0.0, f64::max);
        worst = worst.max(dev);
    }
    residual_check("partial_trace_composition", 1e-12, worst)
}

fn ghz_marginal_purity() -> CheckResult {
    let s = zoo_state(ZooName::Ghz4);
    let mut worst = 0.0f64;
    for q in 1..=4 {
        let rho = s.partial_trace(&subset(&[q], 4)).unwrap();
        worst = worst.max((rho.purity() - 0.5).abs());
    }
    residual_check("ghz_marginal_purity", 1e-12, worst)
}

fn one_tangle_det_identity(cfg: &SelftestConfig) -> CheckResult {
    let mut rng = rng_for(cfg, 2);
    let mut worst = 0.0f64;
    for _ in 0..cfg.n_random {
        let s = PureState::random(3, &mut rng);
        let rho = s.partial_trace(&subset(&[1], 3)).unwrap();
        let mixedness = 2.0 * (1.0 - rho.purity());
        let det =
            (rho.mat()[(0, 0)] * rho.mat()[(1, 1)] - rho.mat()[(0, 1)] * rho.mat()[(1, 0)]).re;
        worst = worst.max((mixedness - 4.0 * det).abs());
    }
    residual_check("one_tangle_det_identity", 1e-12, worst)
}

fn spectrum_symmetric_functions(cfg: &SelftestConfig) -> CheckResult {
    let mut rng = rng_for(cfg, 3);
    let mut worst = 0.0f64;
    for _ in 0..cfg.n_random {
        let s = PureState::random(4, &mut rng);
        for j in 2..=4 {
            let rho = s.partial_trace(&subset(&[1, j], 4)).unwrap();
            let sp = spectral::spectrum(&rho).unwrap();
            let pc = spectral::poly_coeffs(&rho).unwrap();
            let [a, b, c, d] = sp.lambdas;
            worst = worst.max((pc.n4 - (a + b + c + d)).abs());
            worst = worst
                .max((pc.n8 - (a * b + a * c + a * d + b * c + b * d + c * d)).abs());
            worst = worst.max((pc.n12 - (a * b * c + a * b * d + a * c * d + b * c * d)).abs());
            worst = worst.max((pc.n16 - a * b * c * d).abs());
        }
    }
    residual_check("spectrum_symmetric_functions", 1e-9, worst)
}

fn two_tangle_pure_form(cfg: &SelftestConfig) -> CheckResult {
    let mut rng = rng_for(cfg, 4);
    let mut worst = 0.0f64;
    for _ in 0..cfg.n_random {
        let s = PureState::random(2, &mut rng);
        let a = s.amplitudes();
        let direct = 2.0 * (a[0] * a[3] - a[2] * a[1]).norm();
        let tau = spectral::two_tangle(&s.density()).unwrap();
        worst = worst.max((tau - direct).abs());
    }
    residual_check("two_tangle_pure_form", 1e-12, worst)
}

fn n4_spectral_identity(cfg: &SelftestConfig) -> CheckResult {
    let mut rng = rng_for(cfg, 5);
    let mut worst = 0.0f64;
    for _ in 0..cfg.n_random {
        let s = PureState::random(4, &mut rng);
        for j in 2..=4 {
            let rho = s.partial_trace(&subset(&[1, j], 4)).unwrap();
            worst = worst.max(spectral::verify_n4_identity(&rho).unwrap());
            let sp = spectral::spectrum(&rho).unwrap();
            let pc = spectral::poly_coeffs(&rho).unwrap();
            let tau = sp.c_value.max(0.0);
            let rhs = (4.0 * pc.n8 + pc.chi_for(sp.c_value)).max(0.0).sqrt();
            worst = worst.max((pc.n4 - tau * tau - rhs).abs());
        }
    }
    residual_check("n4_spectral_identity", 1e-8, worst)
}

fn fonts_vs_trace(cfg: &SelftestConfig) -> CheckResult {
    let mut rng = rng_for(cfg, 6);
    let mut worst = 0.0f64;
    for _ in 0..cfg.n_random {
        let s = PureState::random(4, &mut rng);
        for j in 2..=4 {
            let rho = s.partial_trace(&subset(&[1, j], 4)).unwrap();
            let pc = spectral::poly_coeffs(&rho).unwrap();
            let table = fonts::font_table(&s, j).unwrap();
            worst = worst.max((table.n4() - pc.n4).abs());
            let set_n8 = n8_structural(&s, j).unwrap();
            worst = worst.max((set_n8 - pc.n8).abs());
        }
    }
    residual_check("fonts_vs_trace", 1e-8, worst)
}

fn coherence_sum_three_qubits(cfg: &SelftestConfig) -> CheckResult {
    let mut rng = rng_for(cfg, 7);
    let mut worst = 0.0f64;
    for _ in 0..cfg.n_random {
        let s = PureState::random(3, &mut rng);
        let sum: f64 = (2..=3).map(|j| fonts::coherence_x(&s, j).unwrap()).sum();
        worst = worst.max(sum.abs());
    }
    residual_check("coherence_sum_three_qubits", 1e-10, worst)
}

fn one_tangle_font_decomposition(cfg: &SelftestConfig) -> CheckResult {
    let mut rng = rng_for(cfg, 8);
    let mut worst = 0.0f64;
    let per_n = (cfg.n_random / 4).max(1);
    for n in 3..=6usize {
        for _ in 0..per_n {
            let s = PureState::random(n, &mut rng);
            let tau = one_tangle(&s, 1).unwrap();
            let sum: f64 = (2..=n)
                .map(|j| {
                    let t = fonts::font_table(&s, j).unwrap();
                    t.n4() - t.coherence_x()
                })
                .sum();
            worst = worst.max((tau - sum).abs());
        }
    }
    residual_check("one_tangle_font_decomposition", 1e-9, worst)
}

fn n8_routes(cfg: &SelftestConfig) -> CheckResult {
    let mut rng = rng_for(cfg, 9);
    let mut worst = 0.0f64;
    for _ in 0..cfg.n_random {
        let s = PureState::random(4, &mut rng);
        for j in 2..=4 {
            let rho = s.partial_trace(&subset(&[1, j], 4)).unwrap();
            let n8 = spectral::poly_coeffs(&rho).unwrap().n8;
            worst = worst.max((n8_decomposition(&s, j).unwrap() - n8).abs());
        }
    }
    residual_check("n8_decomposition_vs_trace", 1e-8, worst)
}

fn p_sum_identity(cfg: &SelftestConfig) -> CheckResult {
    let mut rng = rng_for(cfg, 10);
    let mut worst = 0.0f64;
    for _ in 0..cfg.n_random {
        let s = PureState::random(4, &mut rng);
        let inv = four_invariants(&s).unwrap();
        let sum: num_complex::Complex64 = inv.p.values().sum();
        worst = worst.max((sum - 3.0 * inv.i42 * inv.i42).norm());
    }
    residual_check("p_sum_identity", 1e-9, worst)
}

fn one_tangle_n4_equation(cfg: &SelftestConfig) -> CheckResult {
    let mut rng = rng_for(cfg, 11);
    let mut worst = 0.0f64;
    for _ in 0..cfg.n_random {
        let s = PureState::random(4, &mut rng);
        let tau = one_tangle(&s, 1).unwrap();
        let four = four_tangles(&s).unwrap();
        let sum_n4: f64 = (2..=4)
            .map(|j| {
                let rho = s.partial_trace(&subset(&[1, j], 4)).unwrap();
                spectral::poly_coeffs(&rho).unwrap().n4
            })
            .sum();
        worst = worst.max((tau - (sum_n4 - 0.5 * four.tau0.powi(2))).abs());
    }
    residual_check("one_tangle_n4_equation", 1e-9, worst)
}

fn ckw_equality(cfg: &SelftestConfig) -> CheckResult {
    let mut rng = rng_for(cfg, 12);
    let mut worst = 0.0f64;
    for _ in 0..(cfg.n_random * 5 / 2).max(1) {
        let s = PureState::random(3, &mut rng);
        let rep = monogamy::evaluate_ckw(&s).unwrap();
        worst = worst.max(rep.records[0].residual.abs());
    }
    residual_check("ckw_equality", 1e-9, worst)
}

fn local_unitary_invariance(cfg: &SelftestConfig) -> CheckResult {
    let mut rng = rng_for(cfg, 13);
    let mut worst = 0.0f64;
    for _ in 0..(cfg.n_random / 10).max(1) {
        let s = PureState::random(4, &mut rng);
        let four = four_tangles(&s).unwrap();
        let tau = one_tangle(&s, 1).unwrap();
        let twos: Vec<f64> = (2..=4)
            .map(|j| {
                spectral::two_tangle(&s.partial_trace(&subset(&[1, j], 4)).unwrap()).unwrap()
            })
            .collect();
        for q in 1..=4 {
            let u = random_unitary_2x2(&mut rng);
            let t = s.apply_local_unitary(q, &u).unwrap();
            let four2 = four_tangles(&t).unwrap();
            worst = worst.max((four.tau0 - four2.tau0).abs());
            worst = worst.max((four.tau1 - four2.tau1).abs());
            for j in 2..=4 {
                worst = worst.max((four.tau2_of(j) - four2.tau2_of(j)).abs());
                worst = worst.max((four.tau3_of(j) - four2.tau3_of(j)).abs());
            }
            worst = worst.max((tau - one_tangle(&t, 1).unwrap()).abs());
            for (idx, j) in (2..=4).enumerate() {
                let t2 =
                    spectral::two_tangle(&t.partial_trace(&subset(&[1, j], 4)).unwrap()).unwrap();
                worst = worst.max((twos[idx] - t2).abs());
            }
        }
    }
    residual_check("local_unitary_invariance", 1e-9, worst)
}

fn focus_independence(cfg: &SelftestConfig) -> CheckResult {
    // sum_j tau^(3)(rho_1j)^2 must not depend on the focus qubit
    let mut rng = rng_for(cfg, 14);
    let mut worst = 0.0f64;
    for _ in 0..(cfg.n_random / 10).max(1) {
        let s = PureState::random(4, &mut rng);
        let base: f64 = {
            let f = four_tangles(&s).unwrap();
            (2..=4).map(|j| f.tau3_of(j).powi(2)).sum()
        };
        for focus in 2..=4usize {
            let (st, _) = s.refocus(focus).unwrap();
            let f = four_tangles(&st).unwrap();
            let sum: f64 = (2..=4).map(|j| f.tau3_of(j).powi(2)).sum();
            worst = worst.max((sum - base).abs());
        }
    }
    residual_check("tau3_focus_independence", 1e-9, worst)
}

fn roof_quality(cfg: &SelftestConfig) -> CheckResult {
    // optimizer estimates must stay below the analytic upper bound
    let mut rng = rng_for(cfg, 15);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..(cfg.n_random / 40).max(1) {
        let s = PureState::random(4, &mut rng);
        for (j, k) in [(2usize, 3usize), (2, 4), (3, 4)] {
            let triple = subset(&[1, j, k], 4);
            let bound = three_tangle_upper(&s, &triple).unwrap();
            let rho = s.partial_trace(&triple).unwrap();
            let est = three_tangle_mixed(&rho, &cfg.roof).unwrap().estimate;
            worst = worst.max(est - bound);
        }
    }
    residual_check("roof_below_upper_bound", 1e-6, worst)
}

fn delta_lower_bound(cfg: &SelftestConfig) -> CheckResult {
    let mut rng = rng_for(cfg, 16);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..(cfg.n_random / 40).max(1) {
        let s = PureState::random(4, &mut rng);
        let report = TangleReport::compute(&s, 1, &cfg.roof).unwrap();
        for j in 2..=4usize {
            let gap = report.delta_lower_bound[&j.to_string()] - report.delta_of(j);
            worst = worst.max(gap);
        }
    }
    residual_check("delta_lower_bound", 1e-6, worst)
}

fn product_reduction(cfg: &SelftestConfig) -> CheckResult {
    // (3-qubit state) x |0>: the constraints collapse to their three-qubit
    // forms
    let mut rng = rng_for(cfg, 17);
    let mut worst = 0.0f64;
    for _ in 0..(cfg.n_random / 10).max(1) {
        let s3 = PureState::random(3, &mut rng);
        let mut amps = vec![num_complex::Complex64::new(0.0, 0.0); 16];
        for (idx, &a) in s3.amplitudes().iter().enumerate() {
            amps[idx << 1] = a;
        }
        let s = PureState::from_amplitudes(4, amps).unwrap();
        let tau3 = crate::tangles::three_tangle_pure(&s3).unwrap();
        let mut sum_two = 0.0;
        for j in 2..=3usize {
            let rho = s.partial_trace(&subset(&[1, j], 4)).unwrap();
            let n4 = spectral::poly_coeffs(&rho).unwrap().n4;
            let t2 = spectral::two_tangle(&rho).unwrap();
            worst = worst.max((n4 - t2 * t2 - 0.5 * tau3).abs());
            sum_two += t2 * t2;
        }
        worst = worst.max((one_tangle(&s, 1).unwrap() - sum_two - tau3).abs());
    }
    residual_check("product_state_reduction", 1e-8, worst)
}

fn zoo_tangle_values(cfg: &SelftestConfig) -> CheckResult {
    let mut worst = 0.0f64;
    let ghz = zoo_state(ZooName::Ghz4);
    let f = four_tangles(&ghz).unwrap();
    worst = worst.max((f.tau0 - 1.0).abs());
    worst = worst.max((f.tau1 - 1.0).abs());
    for j in 2..=4 {
        worst = worst.max((f.tau2_of(j) - 1.0).abs());
        worst = worst.max((f.tau3_of(j) - 2.0 / 3.0).abs());
    }
    worst = worst.max((one_tangle(&ghz, 1).unwrap() - 1.0).abs());

    let cluster = zoo_state(ZooName::Cluster);
    let f = four_tangles(&cluster).unwrap();
    worst = worst.max(f.tau0.abs());
    worst = worst.max((f.tau1 - 1.0).abs());
    worst = worst.max((f.tau2_of(2) - 1.0).abs());
    worst = worst.max(f.tau2_of(3).abs());
    worst = worst.max((f.tau3_of(3) - 1.0 / 3.0).abs());

    let bell = zoo_state(ZooName::BellProduct);
    let f = four_tangles(&bell).unwrap();
    worst = worst.max((f.tau0 - 1.0).abs());
    worst = worst.max(f.tau1.abs());

    // L family closed forms at a = 1
    let mut p = BTreeMap::new();
    p.insert("a".to_string(), 1.0);
    let l1 = zoo::make(ZooName::LAia, &p).unwrap().state;
    let f = four_tangles(&l1).unwrap();
    worst = worst.max((one_tangle(&l1, 1).unwrap() - 24.0 / 25.0).abs());
    worst = worst.max((f.tau0.powi(2) - 4.0 / 25.0).abs());
    worst = worst.max((f.tau2_of(2) - 8.0 * 3f64.sqrt() / 25.0).abs());
    worst = worst.max((f.tau3_of(3) - 4.0 * 5f64.sqrt() / 25.0).abs());

    // roof estimates where the answer is known analytically
    let rho = l1.partial_trace(&subset(&[1, 2, 3], 4)).unwrap();
    let est = three_tangle_mixed(&rho, &cfg.roof).unwrap().estimate;
    let opt_gap = (est - 8.0 / 25.0).abs();
    let pass = worst <= 1e-9 && opt_gap <= 1e-3;
    flag_check(
        "zoo_tangle_values",
        pass,
        format!("max residual {worst:.3e} (tol 1e-9), optimizer gap {opt_gap:.3e} (tol 1e-3)"),
    )
}

fn zoo_constraint_equalities(cfg: &SelftestConfig) -> CheckResult {
    let mut failures = Vec::new();
    for name in [
        ZooName::Ghz4,
        ZooName::Cluster,
        ZooName::BellProduct,
        ZooName::Chi,
        ZooName::PsiS,
        ZooName::WTilde,
    ] {
        let s = zoo_state(name);
        let report = TangleReport::compute(&s, 1, &cfg.roof).unwrap();
        let cons = evaluate_constraints(&s, &report).unwrap();
        for r in cons.records.iter().filter(|r| !r.diagnostic && !r.pass) {
            failures.push(format!("{name}:{} ({:.2e})", r.name, r.residual));
        }
    }
    flag_check(
        "zoo_constraint_equalities",
        failures.is_empty(),
        if failures.is_empty() {
            "all equality constraints hold on the zoo".to_string()
        } else {
            failures.join(", ")
        },
    )
}

fn classify_invariance(cfg: &SelftestConfig) -> CheckResult {
    let mut rng = rng_for(cfg, 18);
    let mut failures = Vec::new();
    let trials = if cfg.n_random == 0 { 2 } else { 5 };
    for name in [ZooName::Ghz4, ZooName::Cluster, ZooName::WTilde] {
        let s = zoo_state(name);
        let base = zoo::classify(&s, 1e-6, &cfg.roof).unwrap().group;
        let expected = match name {
            ZooName::WTilde => Some(Group::IV),
            _ => None,
        };
        if let Some(e) = expected {
            if base != e {
                failures.push(format!("{name} classified {base:?}"));
            }
        }
        for _ in 0..trials {
            let q = rng.gen_range(1..=4);
            let u = random_unitary_2x2(&mut rng);
            let t = s.apply_local_unitary(q, &u).unwrap();
            let g = zoo::classify(&t, 1e-6, &cfg.roof).unwrap().group;
            if g != base {
                failures.push(format!("{name} flipped to {g:?} under a local unitary"));
            }
        }
        let t = s.permute_qubits(&[2, 4, 1, 3]).unwrap();
        let g = zoo::classify(&t, 1e-6, &cfg.roof).unwrap().group;
        if g != base {
            failures.push(format!("{name} flipped to {g:?} under relabeling"));
        }
    }
    flag_check(
        "classify_invariance",
        failures.is_empty(),
        if failures.is_empty() {
            "group labels stable under local unitaries and relabeling".to_string()
        } else {
            failures.join(", ")
        },
    )
}

fn transfer_model() -> CheckResult {
    let mut worst = 0.0f64;
    for x in [1.5, 2.0, 3.0, 6.0] {
        let run = transfer::apply_cnot_chain(x, 6, 6).unwrap();
        let q = 4.0 * (x - 1.0) / (x * x);
        for step in &run.steps {
            worst = worst.max((step.tau_12_sq - q.powi(step.m as i32 + 1)).abs());
            worst = worst.max((step.tau_1rest - q).abs());
        }
    }
    residual_check("transfer_closed_form", 1e-9, worst)
}
