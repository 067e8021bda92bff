//! Acceptance suite: one test per headline claim, each printing a PASS line
//! with the measured values (visible with `cargo test -- --nocapture`).
//!
//! Run with `cargo test --release --test acceptance`.

use num_complex::Complex64 as C64;

use circulator::analytic::{analytic_metrics, analytic_transmissions, atom_induced_rate, CouplingBranch};
use circulator::correlations::{default_tau_grid, g2};
use circulator::model::{
    build_simplified, build_two_mode, AtomState, ModelKind, PortSpec, SystemParams,
};
use circulator::observables::{
    metrics, output_amplitudes, transmission_matrix, Direction, TransmissionMatrix,
};
use circulator::scan::scan_coupling;
use circulator::MHZ_TO_ANGULAR;

/// Deterministic LCG for the randomized criteria; fixed seed, fixed stream.
struct Lcg(u64);

impl Lcg {
    fn next_f64(&mut self) -> f64 {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (self.0 >> 11) as f64 / (1u64 << 53) as f64
    }

    fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }
}

#[test]
fn criterion_1_atom_induced_rate_formula() {
    // g = 12, gamma = 3, Delta_al = 0 (2pi x MHz) -> Gamma = 48, exact.
    let g = 12.0 * MHZ_TO_ANGULAR;
    let gamma = 3.0 * MHZ_TO_ANGULAR;
    let rate = atom_induced_rate(g, gamma, 0.0);
    let in_mhz = rate.re / MHZ_TO_ANGULAR;
    assert!((in_mhz - 48.0).abs() <= 1e-12, "Gamma = {in_mhz:.15} MHz");
    assert_eq!(rate.im, 0.0);
    println!("PASS criterion 1: Gamma = {in_mhz} (2pi x MHz), |dev| <= 1e-12");
}

#[test]
fn criterion_2_state_of_the_art_closed_forms() {
    // kappa_0 = 0.5, g = 30, alpha^2 = 0.97, gamma = 3,
    // kappa_a = kappa_b = 7.5 -> eta = 0.94 +- 0.005, F = 0.94 +- 0.005.
    let mut p = SystemParams::paper_defaults();
    p.kappa_0 = 0.5 * MHZ_TO_ANGULAR;
    p.kappa_a = 7.5 * MHZ_TO_ANGULAR;
    p.kappa_b = 7.5 * MHZ_TO_ANGULAR;
    p.g = 30.0 * MHZ_TO_ANGULAR;
    p.gamma = 3.0 * MHZ_TO_ANGULAR;
    p.alpha = 0.97f64.sqrt();
    p.beta = 0.03f64.sqrt();
    let m = analytic_metrics(&p).unwrap();
    println!(
        "criterion 2 measured: F = {:.6}, eta = {:.6} (eta_fw = {:.6}, eta_bw = {:.6})",
        m.fidelity, m.eta, m.eta_fw, m.eta_bw
    );
    assert!(
        (m.fidelity - 0.94).abs() <= 0.005,
        "fidelity {:.6} outside 0.94 +- 0.005",
        m.fidelity
    );
    // The mean survival of the closed forms evaluates to 0.9235 at these
    // parameters (the published mean-survival formula gives the identical
    // number, and the full two-mode master equation agrees to < 1e-3).
    // The backward-direction survival alone is 0.9367 and rounds to the
    // quoted 0.94. The assertion below follows the stated criterion and is
    // expected to fail; see the decisions ledger for the full analysis.
    assert!(
        (m.eta - 0.94).abs() <= 0.005,
        "eta {:.6} outside 0.94 +- 0.005: the published mean-survival formula itself yields \
         0.9235 at the quoted parameters (eta_bw = {:.4} is the only survival that rounds to \
         0.94); unattainable as stated",
        m.eta,
        m.eta_bw
    );
    println!("PASS criterion 2: eta = {:.4}, F = {:.4}", m.eta, m.fidelity);
}

#[test]
fn criterion_3_metrics_on_published_matrices() {
    let t_plus = TransmissionMatrix::new([
        [0.030, 0.460, 0.024, 0.133],
        [0.037, 0.057, 0.486, 0.038],
        [0.011, 0.101, 0.068, 0.698],
        [0.463, 0.039, 0.234, 0.055],
    ])
    .unwrap();
    let m = metrics(&t_plus, Direction::Forward);
    assert!((m.fidelity - 0.72).abs() <= 0.01, "F = {:.4}", m.fidelity);
    assert!((m.eta - 0.73).abs() <= 0.01, "eta = {:.4}", m.eta);
    assert!((m.isolations[0] - 10.9).abs() <= 0.1, "I_1 = {:.4}", m.isolations[0]);

    let t_minus = TransmissionMatrix::new([
        [0.063, 0.072, 0.021, 0.394],
        [0.487, 0.045, 0.122, 0.016],
        [0.029, 0.379, 0.066, 0.274],
        [0.108, 0.005, 0.647, 0.020],
    ])
    .unwrap();
    let mr = metrics(&t_minus, Direction::Backward);
    assert!((mr.fidelity - 0.70).abs() <= 0.01, "reversed F = {:.4}", mr.fidelity);
    assert!((mr.eta - 0.69).abs() <= 0.01, "reversed eta = {:.4}", mr.eta);
    println!(
        "PASS criterion 3: forward F = {:.4}, eta = {:.4}, I_1 = {:.2} dB; reversed F = {:.4}, eta = {:.4}",
        m.fidelity, m.eta, m.isolations[0], mr.fidelity, mr.eta
    );
}

#[test]
fn criterion_4_empty_resonator_add_drop() {
    // No-atom cross transmission equals 1 - 2 kappa_0 / kappa_tot along the
    // constrained scan, relative error < 1e-6.
    let mut base = SystemParams::paper_defaults();
    base.atom_state = AtomState::NoAtom;
    let grid = [1.2, 1.6, 2.2, 3.0, 4.5, 6.5, 8.0];
    let scan = scan_coupling(&base, &grid, ModelKind::Simplified).unwrap();
    let mut worst = 0.0f64;
    for p in &scan.points {
        let expected = 1.0 - 1.0 / p.ratio;
        for (i, j) in [(1u8, 4u8), (2, 3), (3, 2), (4, 1)] {
            let got = p.transmissions.get(i, j);
            let rel = ((got - expected) / expected).abs();
            worst = worst.max(rel);
        }
    }
    assert!(worst < 1e-6, "worst relative deviation {worst:.3e}");
    let at_wp = scan.points.iter().find(|p| (p.ratio - 2.2).abs() < 1e-12).unwrap();
    let cross = at_wp.transmissions.get(1, 4);
    assert!((cross - 0.5455).abs() < 5e-5, "cross at 2.2 = {cross:.6}");
    println!(
        "PASS criterion 4: worst |T_cross/(1 - 2k0/kt) - 1| = {worst:.2e}; T_cross(2.2) = {cross:.4}"
    );
}

#[test]
fn criterion_5_analytic_numeric_oracle() {
    // 50 random parameter sets in the low-drive limit: simplified-model
    // transmissions match the closed forms to < 1e-4 relative; two-mode
    // survivals with kappa_a = kappa_b match them to < 1e-3.
    let mut rng = Lcg(0x5eed_cafe);
    let mut worst_simplified = 0.0f64;
    let mut worst_survival = 0.0f64;
    for _ in 0..50 {
        let mut p = SystemParams::paper_defaults();
        p.kappa_0 = rng.range(1.0, 8.0) * MHZ_TO_ANGULAR;
        p.kappa_a = rng.range(2.0, 15.0) * MHZ_TO_ANGULAR;
        p.kappa_b = rng.range(2.0, 15.0) * MHZ_TO_ANGULAR;
        p.gamma = rng.range(1.5, 6.0) * MHZ_TO_ANGULAR;
        p.g = rng.range(3.0, 20.0) * MHZ_TO_ANGULAR;
        let a2 = rng.range(0.75, 1.0);
        p.alpha = a2.sqrt();
        p.beta = (1.0 - a2).sqrt();
        p.delta_rl = rng.range(-10.0, 10.0) * MHZ_TO_ANGULAR;
        p.delta_al = rng.range(-10.0, 10.0) * MHZ_TO_ANGULAR;
        p.n_max = 2;
        p.epsilon = p.epsilon_for_photon_number(1e-8);

        for port in 1..=4u8 {
            let input = PortSpec::new(port).unwrap();
            let model = build_simplified(&p, input).unwrap();
            let rho = model.liouvillian().unwrap().steady_state().unwrap();
            let amps = output_amplitudes(&model, &rho).unwrap();
            let branch = match input.driven_mode() {
                circulator::model::ModeKind::Ccw => CouplingBranch::StrongCoupled,
                circulator::model::ModeKind::Cw => CouplingBranch::WeakCoupled,
            };
            let (t_trans, t_cross) = analytic_transmissions(&p, branch, input.fiber());
            let cross_port = match port {
                1 => 4u8,
                2 => 3,
                3 => 2,
                _ => 1,
            };
            let eps = C64::new(p.epsilon, 0.0);
            let num_trans = (amps[(input.through_port() - 1) as usize] / eps).norm_sqr();
            let num_cross = (amps[(cross_port - 1) as usize] / eps).norm_sqr();
            worst_simplified = worst_simplified
                .max(((num_trans - t_trans) / t_trans).abs())
                .max(((num_cross - t_cross) / t_cross).abs());
        }

        // Two-mode survivals against the closed forms (on resonance,
        // symmetric coupling).
        let mut q = p.clone();
        q.kappa_b = q.kappa_a;
        q.delta_rl = 0.0;
        q.delta_al = 0.0;
        q.epsilon = q.epsilon_for_photon_number(1e-8);
        let closed = analytic_metrics(&q).unwrap();
        for (port, expected) in [(1u8, closed.eta_fw), (2u8, closed.eta_bw)] {
            let model = build_two_mode(&q, PortSpec::new(port).unwrap()).unwrap();
            let rho = model.liouvillian().unwrap().steady_state().unwrap();
            let amps = output_amplitudes(&model, &rho).unwrap();
            let eps = C64::new(q.epsilon, 0.0);
            let eta: f64 = amps.iter().map(|a| (a / eps).norm_sqr()).sum();
            worst_survival = worst_survival.max(((eta - expected) / expected).abs());
        }
    }
    assert!(worst_simplified < 1e-4, "simplified-model worst rel err {worst_simplified:.3e}");
    assert!(worst_survival < 1e-3, "two-mode survival worst rel err {worst_survival:.3e}");
    println!(
        "PASS criterion 5: simplified worst rel err {worst_simplified:.2e}; two-mode survival worst rel err {worst_survival:.2e}"
    );
}

#[test]
fn criterion_6_nonreciprocity_structure() {
    let params = SystemParams::paper_defaults(); // working point ratio 2.2
    let t_plus = transmission_matrix(&params, ModelKind::TwoMode).unwrap();

    // Row maxima exactly on the i -> i+1 cycle.
    for i in 1..=4u8 {
        let cycle = if i == 4 { 1 } else { i + 1 };
        let row_max = (1..=4u8).map(|j| t_plus.get(i, j)).fold(0.0, f64::max);
        assert_eq!(
            t_plus.get(i, cycle),
            row_max,
            "row {i} maximum is not on the cycle column {cycle}"
        );
    }

    let mut p_none = params.clone();
    p_none.atom_state = AtomState::NoAtom;
    let t_none = transmission_matrix(&p_none, ModelKind::TwoMode).unwrap();
    let sym_dev = t_none.max_abs_diff(&t_none.transpose());
    assert!(sym_dev <= 1e-10, "no-atom asymmetry {sym_dev:.3e}");

    let mut p_minus = params.clone();
    p_minus.atom_state = AtomState::MMinus3;
    let t_minus = transmission_matrix(&p_minus, ModelKind::TwoMode).unwrap();
    let transpose_dev = t_minus.max_abs_diff(&t_plus.transpose());
    assert!(transpose_dev <= 1e-10, "m-3 vs transposed m+3 deviation {transpose_dev:.3e}");

    println!(
        "PASS criterion 6: cycle maxima ok; no-atom symmetric to {sym_dev:.2e}; reversed state transposes to {transpose_dev:.2e}"
    );
}

#[test]
fn criterion_7_photon_statistics() {
    // Fig. 4 phenomenology at the working point, correlation drive.
    let mut p = SystemParams::paper_defaults();
    p.epsilon = p.default_g2_epsilon();
    let grid = default_tau_grid(&p);

    let trace = |input: u8, output: u8, q: &SystemParams, taus: &[f64]| {
        let model = build_two_mode(q, PortSpec::new(input).unwrap()).unwrap();
        g2(&model, output, taus).unwrap()
    };

    let t12 = trace(1, 2, &p, &grid);
    let t34 = trace(3, 4, &p, &grid);
    let t14 = trace(1, 4, &p, &grid);
    let t32 = trace(3, 2, &p, &grid);

    assert!(t12.g2_zero < 1.0 && t12.g2_zero > 0.0, "1->2 g2(0) = {}", t12.g2_zero);
    assert!(t34.g2_zero < 1.0, "3->4 g2(0) = {}", t34.g2_zero);
    assert!(t14.g2_zero > 1.0, "1->4 g2(0) = {}", t14.g2_zero);
    assert!(t32.g2_zero > 1.0, "3->2 g2(0) = {}", t32.g2_zero);
    // kappa_a > kappa_b: forward antibunching deeper for 1->2 than 3->4.
    assert!(
        t12.g2_zero < t34.g2_zero,
        "expected deeper antibunching on fiber a: {} vs {}",
        t12.g2_zero,
        t34.g2_zero
    );
    // All traces relax into the normalized tail by the end of the window.
    for (label, tr) in [("1->2", &t12), ("3->4", &t34), ("1->4", &t14), ("3->2", &t32)] {
        let tail = *tr.g2.last().unwrap();
        assert!((tail - 1.0).abs() <= 0.05, "{label} tail g2 = {tail}");
        assert!(tr.g2.iter().all(|&v| v >= 0.0), "{label} has negative g2");
    }

    // Coherent-light identity: g = 0 makes every trace flat at 1. Evaluated
    // off the critical coupling point, where no routed port is dark.
    let mut pc = SystemParams::paper_defaults();
    pc.atom_state = AtomState::NoAtom;
    pc.kappa_b = 8.0 * MHZ_TO_ANGULAR;
    pc.epsilon = pc.default_g2_epsilon();
    let grid_c = default_tau_grid(&pc);
    for (input, output) in [(1u8, 2u8), (3, 4), (1, 4), (3, 2)] {
        let tr = trace(input, output, &pc, &grid_c);
        for (k, v) in tr.g2.iter().enumerate() {
            assert!(
                (v - 1.0).abs() < 1e-6,
                "g = 0 trace {input}->{output} deviates at index {k}: {v}"
            );
        }
    }

    // Drive robustness: halving epsilon moves g2(0) by < 1%.
    let mut ph = p.clone();
    ph.epsilon = p.epsilon / 2.0;
    let t12_half = trace(1, 2, &ph, &[0.0]);
    let rel = ((t12.g2_zero - t12_half.g2_zero) / t12.g2_zero).abs();
    assert!(rel < 0.01, "g2(0) drive sensitivity {rel:.3e}");

    println!(
        "PASS criterion 7: g2(0) = {:.3} (1->2), {:.3} (3->4), {:.3} (1->4), {:.3} (3->2); drive sensitivity {rel:.1e}",
        t12.g2_zero, t34.g2_zero, t14.g2_zero, t32.g2_zero
    );
}

#[test]
fn criterion_8_truncation_convergence() {
    // Raising n_max from 4 to 5 changes every T_ij and g2(0) by < 1e-6.
    let p4 = SystemParams::paper_defaults();
    let mut p5 = p4.clone();
    p5.n_max = 5;
    let t4 = transmission_matrix(&p4, ModelKind::TwoMode).unwrap();
    let t5 = transmission_matrix(&p5, ModelKind::TwoMode).unwrap();
    let t_dev = t4.max_abs_diff(&t5);
    assert!(t_dev < 1e-6, "transmission truncation drift {t_dev:.3e}");

    let mut g4 = p4.clone();
    g4.epsilon = g4.default_g2_epsilon();
    let mut g5 = p5.clone();
    g5.epsilon = g5.default_g2_epsilon();
    let m4 = build_two_mode(&g4, PortSpec::new(1).unwrap()).unwrap();
    let m5 = build_two_mode(&g5, PortSpec::new(1).unwrap()).unwrap();
    let z4 = g2(&m4, 2, &[0.0]).unwrap().g2_zero;
    let z5 = g2(&m5, 2, &[0.0]).unwrap().g2_zero;
    let g_dev = (z4 - z5).abs();
    assert!(g_dev < 1e-6, "g2(0) truncation drift {g_dev:.3e}");

    println!("PASS criterion 8: max |T(5) - T(4)| = {t_dev:.2e}; |g2(0) drift| = {g_dev:.2e}");
}

#[test]
fn criterion_9_reciprocal_fidelity_bound() {
    // 1000 random symmetric transmission matrices all satisfy F <= 0.5.
    let mut rng = Lcg(0xfeed_f00d);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let mut t = [[0.0f64; 4]; 4];
        for i in 0..4 {
            for j in i..4 {
                let v = rng.next_f64();
                t[i][j] = v;
                t[j][i] = v;
            }
        }
        let max_row: f64 = (0..4).map(|i| t[i].iter().sum::<f64>()).fold(0.0, f64::max);
        for row in t.iter_mut() {
            for v in row.iter_mut() {
                *v /= max_row;
            }
        }
        let m = metrics(&TransmissionMatrix::new(t).unwrap(), Direction::Forward);
        worst = worst.max(m.fidelity);
        assert!(m.fidelity <= 0.5 + 1e-12, "symmetric matrix with F = {}", m.fidelity);
    }
    println!("PASS criterion 9: 1000 symmetric matrices, max F = {worst:.4} <= 0.5");
}
