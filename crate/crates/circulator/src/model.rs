//! Physical circulator models: parameters, port geometry, and the mapping
//! onto Hamiltonians and collapse operators.
//!
//! Two fibers (a and b) couple to the degenerate counter-propagating
//! whispering-gallery modes of the resonator. Ports 1 and 2 are the ends of
//! fiber a, ports 3 and 4 the ends of fiber b. Light entering ports 1 or 3
//! drives the counterclockwise (ccw) mode, light entering ports 2 or 4 the
//! clockwise (cw) mode. The evanescent polarization of the ccw mode overlaps
//! with the sigma+ transition of the atom by the amplitude `alpha`, that of
//! the cw mode by `beta`; preparing the atom in the opposite stretched Zeeman
//! state exchanges the two roles.
//!
//! All rates and detunings in [`SystemParams`] are angular (rad/us). Use
//! [`crate::config`] to ingest plain MHz values.

use num_complex::Complex64 as C64;

use crate::hilbert::{Factor, HilbertSpace, QOp};
use crate::lindblad::Liouvillian;
use crate::{Error, Result, MHZ_TO_ANGULAR};

/// Internal Zeeman state selecting the circulator direction, or no atom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum AtomState {
    /// F=3, m_F=+3: the ccw mode couples strongly (forward cycle i -> i+1).
    MPlus3,
    /// F=3, m_F=-3: the cw mode couples strongly (reversed cycle).
    MMinus3,
    /// Empty resonator; reciprocal add-drop operation.
    NoAtom,
}

/// Which coupling fiber a port belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fiber {
    A,
    B,
}

/// Propagation direction of a resonator mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeKind {
    Ccw,
    Cw,
}

/// Which of the two models to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum ModelKind {
    /// Single driven mode + two-level atom; perfect chiral coupling with the
    /// polarization overlap folded into an effective coupling strength.
    Simplified,
    /// Both resonator modes + two-level atom; the atom mediates backscatter
    /// between the modes.
    TwoMode,
}

/// An input (or output) port of the four-port device.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PortSpec {
    port: u8,
    fiber: Fiber,
    driven_mode: ModeKind,
}

impl PortSpec {
    pub fn new(port: u8) -> Result<Self> {
        let (fiber, driven_mode) = match port {
            1 => (Fiber::A, ModeKind::Ccw),
            2 => (Fiber::A, ModeKind::Cw),
            3 => (Fiber::B, ModeKind::Ccw),
            4 => (Fiber::B, ModeKind::Cw),
            other => return Err(Error::InvalidPort(other)),
        };
        Ok(Self { port, fiber, driven_mode })
    }

    pub fn port(&self) -> u8 {
        self.port
    }

    pub fn fiber(&self) -> Fiber {
        self.fiber
    }

    pub fn driven_mode(&self) -> ModeKind {
        self.driven_mode
    }

    /// The far end of the same fiber: 1 <-> 2, 3 <-> 4. Undeflected light
    /// exits there.
    pub fn through_port(&self) -> u8 {
        match self.port {
            1 => 2,
            2 => 1,
            3 => 4,
            _ => 3,
        }
    }
}

/// Output port from which a given resonator mode exits a given fiber.
/// Phase matching ties the ccw mode to the 1->2 / 3->4 propagation sense.
pub fn exit_port(mode: ModeKind, fiber: Fiber) -> u8 {
    match (mode, fiber) {
        (ModeKind::Ccw, Fiber::A) => 2,
        (ModeKind::Ccw, Fiber::B) => 4,
        (ModeKind::Cw, Fiber::A) => 1,
        (ModeKind::Cw, Fiber::B) => 3,
    }
}

/// One entry of the port output map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OutputRoute {
    pub output_port: u8,
    /// Which mode's amplitude leaves at this port.
    pub mode: ModeKind,
    /// Which fiber (and hence which coupling rate) the port sits on.
    pub fiber: Fiber,
    /// Whether the freely propagating input field adds to this output.
    pub includes_drive: bool,
}

/// Routing table for all four output ports given the input port. The driven
/// mode exits forward on both fibers (through and cross); atom-mediated
/// backscatter into the counter-propagating mode exits backward on both.
pub fn port_output_map(input: PortSpec) -> [OutputRoute; 4] {
    let driven = input.driven_mode();
    let counter = match driven {
        ModeKind::Ccw => ModeKind::Cw,
        ModeKind::Cw => ModeKind::Ccw,
    };
    let mut routes = [OutputRoute {
        output_port: 0,
        mode: ModeKind::Ccw,
        fiber: Fiber::A,
        includes_drive: false,
    }; 4];
    for (mode, fiber) in [
        (driven, Fiber::A),
        (driven, Fiber::B),
        (counter, Fiber::A),
        (counter, Fiber::B),
    ] {
        let port = exit_port(mode, fiber);
        routes[(port - 1) as usize] = OutputRoute {
            output_port: port,
            mode,
            fiber,
            includes_drive: port == input.through_port(),
        };
    }
    routes
}

/// Physical parameters of the atom-resonator-fiber system, all rates and
/// detunings angular (rad/us).
#[derive(Debug, Clone, PartialEq)]
pub struct SystemParams {
    /// Intrinsic resonator field decay rate.
    pub kappa_0: f64,
    /// Fiber a - resonator field coupling rate.
    pub kappa_a: f64,
    /// Fiber b - resonator field coupling rate.
    pub kappa_b: f64,
    /// Atomic dipole decay rate.
    pub gamma: f64,
    /// Atom-resonator coupling strength of the strong (sigma+) transition.
    pub g: f64,
    /// Polarization overlap amplitude of the ccw mode with sigma+.
    pub alpha: f64,
    /// Polarization overlap amplitude of the cw mode with sigma+.
    pub beta: f64,
    /// Resonator-light detuning.
    pub delta_rl: f64,
    /// Atom-light detuning.
    pub delta_al: f64,
    /// Coherent drive amplitude, sqrt(photons/us) scale.
    pub epsilon: f64,
    /// Fock truncation per mode.
    pub n_max: usize,
    pub atom_state: AtomState,
}

/// Steady intracavity photon number of the critically coupled empty
/// resonator that the default probe amplitude aims for. Weak enough that the
/// response is linear to well below every tolerance in the test suite, large
/// enough that the transmissions are far above the solver noise floor.
pub const PROBE_PHOTON_NUMBER: f64 = 1e-12;

/// Photon-number target for correlation runs. g2 needs the two-photon sector
/// populated well above the linear-solver noise floor, but weakly enough
/// that the normalized correlations are drive-independent.
pub const G2_PHOTON_NUMBER: f64 = 1e-4;

impl SystemParams {
    /// Published system parameters at the optimal working point
    /// kappa_tot / 2 kappa_0 = 2.2: kappa_0 = 5, kappa_a = 11, kappa_b = 6,
    /// gamma = 3, g = 12 (all 2pi x MHz), alpha^2 = 0.97.
    pub fn paper_defaults() -> Self {
        let mut p = Self {
            kappa_0: 5.0 * MHZ_TO_ANGULAR,
            kappa_a: 11.0 * MHZ_TO_ANGULAR,
            kappa_b: 6.0 * MHZ_TO_ANGULAR,
            gamma: 3.0 * MHZ_TO_ANGULAR,
            g: 12.0 * MHZ_TO_ANGULAR,
            alpha: 0.97f64.sqrt(),
            beta: 0.03f64.sqrt(),
            delta_rl: 0.0,
            delta_al: 0.0,
            epsilon: 0.0,
            n_max: 4,
            atom_state: AtomState::MPlus3,
        };
        p.epsilon = p.default_probe_epsilon();
        p
    }

    /// Total field decay rate of the fiber-coupled resonator.
    pub fn kappa_tot(&self) -> f64 {
        self.kappa_0 + self.kappa_a + self.kappa_b
    }

    pub fn kappa(&self, fiber: Fiber) -> f64 {
        match fiber {
            Fiber::A => self.kappa_a,
            Fiber::B => self.kappa_b,
        }
    }

    /// Drive amplitude that puts [`PROBE_PHOTON_NUMBER`] photons into the
    /// critically coupled empty resonator: <n> = 2 kappa_a eps^2 / kappa_tot^2.
    pub fn default_probe_epsilon(&self) -> f64 {
        self.epsilon_for_photon_number(PROBE_PHOTON_NUMBER)
    }

    /// Drive amplitude for correlation runs; see [`G2_PHOTON_NUMBER`].
    pub fn default_g2_epsilon(&self) -> f64 {
        self.epsilon_for_photon_number(G2_PHOTON_NUMBER)
    }

    /// Drive amplitude giving the requested empty-resonator on-resonance
    /// intracavity photon number when fed through fiber a.
    pub fn epsilon_for_photon_number(&self, n: f64) -> f64 {
        self.kappa_tot() * (n / (2.0 * self.kappa_a)).sqrt()
    }

    /// Replace the fiber couplings according to the critical-coupling
    /// constraint kappa_a = kappa_b + kappa_0 at the given ratio
    /// kappa_tot / 2 kappa_0. The probe amplitude is rescaled to keep the
    /// same target photon number.
    pub fn at_coupling_ratio(&self, ratio: f64) -> Result<Self> {
        if !(ratio >= 1.0) {
            return Err(Error::RatioOutOfRange(ratio));
        }
        let mut p = self.clone();
        p.kappa_b = self.kappa_0 * (ratio - 1.0);
        p.kappa_a = p.kappa_b + self.kappa_0;
        p.epsilon = p.default_probe_epsilon();
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("kappa_0", self.kappa_0),
            ("kappa_a", self.kappa_a),
            ("kappa_b", self.kappa_b),
            ("gamma", self.gamma),
            ("g", self.g),
        ] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidParams(format!("{name} must be >= 0, got {v}")));
            }
        }
        if self.atom_state != AtomState::NoAtom && self.gamma <= 0.0 {
            return Err(Error::InvalidParams("gamma must be > 0 with an atom present".into()));
        }
        if self.atom_state != AtomState::NoAtom && self.g <= 0.0 {
            return Err(Error::InvalidParams("g must be > 0 with an atom present".into()));
        }
        for (name, v) in [("alpha", self.alpha), ("beta", self.beta)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidParams(format!("{name} must lie in [0, 1], got {v}")));
            }
        }
        let overlap = self.alpha * self.alpha + self.beta * self.beta;
        if (overlap - 1.0).abs() > 1e-6 {
            return Err(Error::InvalidParams(format!(
                "polarization overlaps must satisfy alpha^2 + beta^2 = 1 (got {overlap})"
            )));
        }
        if self.kappa_tot() <= 0.0 {
            return Err(Error::InvalidParams("kappa_tot must be > 0".into()));
        }
        if self.n_max < 1 {
            return Err(Error::InvalidParams("n_max must be >= 1".into()));
        }
        if !self.epsilon.is_finite() {
            return Err(Error::InvalidParams("epsilon must be finite".into()));
        }
        Ok(())
    }

    /// Effective coupling of the mode driven from `input`: g alpha if that
    /// mode couples to the strong transition for the prepared Zeeman state,
    /// g beta otherwise, 0 without an atom.
    pub fn effective_coupling(&self, driven_mode: ModeKind) -> f64 {
        match (self.atom_state, driven_mode) {
            (AtomState::NoAtom, _) => 0.0,
            (AtomState::MPlus3, ModeKind::Ccw) | (AtomState::MMinus3, ModeKind::Cw) => {
                self.g * self.alpha
            }
            (AtomState::MPlus3, ModeKind::Cw) | (AtomState::MMinus3, ModeKind::Ccw) => {
                self.g * self.beta
            }
        }
    }
}

/// A concrete model: Hilbert space, Hamiltonian (drive included), collapse
/// operators and the mode operators needed for input-output relations.
#[derive(Debug, Clone)]
pub struct ModelInstance {
    pub kind: ModelKind,
    space: HilbertSpace,
    hamiltonian: QOp,
    /// The drive term alone; `hamiltonian` minus this is the undriven part.
    drive: QOp,
    collapse_ops: Vec<QOp>,
    mode_ccw: Option<QOp>,
    mode_cw: Option<QOp>,
    input: PortSpec,
    params: SystemParams,
}

impl ModelInstance {
    pub fn space(&self) -> &HilbertSpace {
        &self.space
    }

    pub fn hamiltonian(&self) -> &QOp {
        &self.hamiltonian
    }

    pub fn drive_term(&self) -> &QOp {
        &self.drive
    }

    pub fn collapse_ops(&self) -> &[QOp] {
        &self.collapse_ops
    }

    pub fn input(&self) -> PortSpec {
        self.input
    }

    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    /// Annihilation operator of the requested propagation direction, if the
    /// model represents it.
    pub fn mode_op(&self, mode: ModeKind) -> Option<&QOp> {
        match mode {
            ModeKind::Ccw => self.mode_ccw.as_ref(),
            ModeKind::Cw => self.mode_cw.as_ref(),
        }
    }

    pub fn liouvillian(&self) -> Result<Liouvillian> {
        Liouvillian::new(self.hamiltonian.clone(), self.collapse_ops.clone())
    }
}

fn drive_term(mode_op: &QOp, kappa_fiber: f64, epsilon: f64) -> QOp {
    // sqrt(2 kappa) (eps a+ + eps* a); Hermitian for real eps. This phase
    // convention together with the output relation
    // <a_out> = <a_in> - i sqrt(2 kappa) <a> reproduces the closed-form
    // empty-resonator transmissions.
    let amp = C64::new((2.0 * kappa_fiber).sqrt() * epsilon, 0.0);
    mode_op
        .dagger()
        .scaled(amp)
        .add(&mode_op.scaled(amp.conj()))
        .expect("same space")
}

fn jaynes_cummings(mode_op: &QOp, sigma_minus: &QOp, g_eff: f64) -> QOp {
    // g (a+ sigma- + a sigma+)
    let ad_sm = mode_op.dagger().matmul(sigma_minus).expect("same space");
    let a_sp = mode_op.matmul(&sigma_minus.dagger()).expect("same space");
    ad_sm.add(&a_sp).expect("same space").scaled(C64::new(g_eff, 0.0))
}

/// Single-mode model: the driven resonator mode and a two-level atom whose
/// effective coupling carries the polarization overlap. The
/// counter-propagating mode is not represented, so backscatter entries of
/// the transmission matrix vanish identically.
pub fn build_simplified(params: &SystemParams, input: PortSpec) -> Result<ModelInstance> {
    params.validate()?;
    let space = HilbertSpace::new(vec![
        Factor::Atom { levels: 2 },
        Factor::Mode { n_max: params.n_max },
    ])?;
    let a = QOp::annihilation(&space, 1)?;
    let sm = QOp::sigma_minus(&space, 0)?;
    let g_eff = params.effective_coupling(input.driven_mode());

    let number = a.dagger().matmul(&a)?;
    let sp_sm = sm.dagger().matmul(&sm)?;
    let mut h0 = number.scaled(C64::new(params.delta_rl, 0.0));
    h0 = h0.add(&sp_sm.scaled(C64::new(params.delta_al, 0.0)))?;
    if g_eff != 0.0 {
        h0 = h0.add(&jaynes_cummings(&a, &sm, g_eff))?;
    }
    let drive = drive_term(&a, params.kappa(input.fiber()), params.epsilon);
    let hamiltonian = h0.add(&drive)?;

    let mut collapse_ops =
        vec![a.scaled(C64::new((2.0 * params.kappa_tot()).sqrt(), 0.0))];
    if params.gamma > 0.0 {
        collapse_ops.push(sm.scaled(C64::new((2.0 * params.gamma).sqrt(), 0.0)));
    }

    let (mode_ccw, mode_cw) = match input.driven_mode() {
        ModeKind::Ccw => (Some(a), None),
        ModeKind::Cw => (None, Some(a)),
    };
    Ok(ModelInstance {
        kind: ModelKind::Simplified,
        space,
        hamiltonian,
        drive,
        collapse_ops,
        mode_ccw,
        mode_cw,
        input,
        params: params.clone(),
    })
}

/// Upper bound on the superoperator allocation; past this the dense-solver
/// design stops being sensible.
const MAX_SUPEROP_BYTES: usize = 6 << 30;

/// Two-mode model: both propagation directions couple to the sigma+
/// transition with the respective polarization overlap, so the atom mediates
/// coherent backscatter between the modes.
pub fn build_two_mode(params: &SystemParams, input: PortSpec) -> Result<ModelInstance> {
    params.validate()?;
    if params.atom_state != AtomState::NoAtom && params.n_max < 2 {
        return Err(Error::TruncationTooSmall { n_max: params.n_max });
    }
    let dim = 2 * (params.n_max + 1) * (params.n_max + 1);
    let superop_bytes = dim * dim * dim * dim * std::mem::size_of::<C64>();
    if superop_bytes > MAX_SUPEROP_BYTES {
        return Err(Error::TruncationTooLarge { n_max: params.n_max, dim, bytes: superop_bytes });
    }

    let space = HilbertSpace::new(vec![
        Factor::Atom { levels: 2 },
        Factor::Mode { n_max: params.n_max }, // ccw
        Factor::Mode { n_max: params.n_max }, // cw
    ])?;
    let a = QOp::annihilation(&space, 1)?;
    let b = QOp::annihilation(&space, 2)?;
    let sm = QOp::sigma_minus(&space, 0)?;

    let g_ccw = params.effective_coupling(ModeKind::Ccw);
    let g_cw = params.effective_coupling(ModeKind::Cw);

    // Both modes sit at the same resonance, so they share the detuning term.
    let number = a.dagger().matmul(&a)?.add(&b.dagger().matmul(&b)?)?;
    let sp_sm = sm.dagger().matmul(&sm)?;
    let mut h0 = number.scaled(C64::new(params.delta_rl, 0.0));
    h0 = h0.add(&sp_sm.scaled(C64::new(params.delta_al, 0.0)))?;
    if g_ccw != 0.0 {
        h0 = h0.add(&jaynes_cummings(&a, &sm, g_ccw))?;
    }
    if g_cw != 0.0 {
        h0 = h0.add(&jaynes_cummings(&b, &sm, g_cw))?;
    }
    let driven_op = match input.driven_mode() {
        ModeKind::Ccw => &a,
        ModeKind::Cw => &b,
    };
    let drive = drive_term(driven_op, params.kappa(input.fiber()), params.epsilon);
    let hamiltonian = h0.add(&drive)?;

    let kappa_scale = C64::new((2.0 * params.kappa_tot()).sqrt(), 0.0);
    let mut collapse_ops = vec![a.scaled(kappa_scale), b.scaled(kappa_scale)];
    if params.gamma > 0.0 {
        collapse_ops.push(sm.scaled(C64::new((2.0 * params.gamma).sqrt(), 0.0)));
    }

    Ok(ModelInstance {
        kind: ModelKind::TwoMode,
        space,
        hamiltonian,
        drive,
        collapse_ops,
        mode_ccw: Some(a),
        mode_cw: Some(b),
        input,
        params: params.clone(),
    })
}

/// Build a model of the requested kind.
pub fn build(params: &SystemParams, input: PortSpec, kind: ModelKind) -> Result<ModelInstance> {
    match kind {
        ModelKind::Simplified => build_simplified(params, input),
        ModelKind::TwoMode => build_two_mode(params, input),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::expect;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn port_geometry() {
        let p1 = PortSpec::new(1).unwrap();
        assert_eq!(p1.fiber(), Fiber::A);
        assert_eq!(p1.driven_mode(), ModeKind::Ccw);
        assert_eq!(p1.through_port(), 2);
        let p2 = PortSpec::new(2).unwrap();
        assert_eq!(p2.fiber(), Fiber::A);
        assert_eq!(p2.driven_mode(), ModeKind::Cw);
        let p3 = PortSpec::new(3).unwrap();
        assert_eq!(p3.fiber(), Fiber::B);
        assert_eq!(p3.driven_mode(), ModeKind::Ccw);
        assert_eq!(p3.through_port(), 4);
        let p4 = PortSpec::new(4).unwrap();
        assert_eq!(p4.fiber(), Fiber::B);
        assert_eq!(p4.driven_mode(), ModeKind::Cw);
        assert!(PortSpec::new(0).is_err());
        assert!(PortSpec::new(5).is_err());
    }

    #[test]
    fn output_map_port_one() {
        let routes = port_output_map(PortSpec::new(1).unwrap());
        // Transmitted: port 2 carries the driven (ccw) mode plus the drive.
        let r2 = routes[1];
        assert_eq!(r2.mode, ModeKind::Ccw);
        assert_eq!(r2.fiber, Fiber::A);
        assert!(r2.includes_drive);
        // Cross: port 4, driven mode, no drive.
        let r4 = routes[3];
        assert_eq!(r4.mode, ModeKind::Ccw);
        assert_eq!(r4.fiber, Fiber::B);
        assert!(!r4.includes_drive);
        // Backscatter: ports 1 and 3 carry the counter mode.
        assert_eq!(routes[0].mode, ModeKind::Cw);
        assert_eq!(routes[0].fiber, Fiber::A);
        assert_eq!(routes[2].mode, ModeKind::Cw);
        assert_eq!(routes[2].fiber, Fiber::B);
        assert!(!routes[0].includes_drive && !routes[2].includes_drive);
    }

    #[test]
    fn output_map_cross_ports_follow_the_cycle() {
        // Input 2 transmits into port 1 and crosses into port 3.
        let routes = port_output_map(PortSpec::new(2).unwrap());
        assert!(routes[0].includes_drive);
        assert_eq!(routes[2].mode, ModeKind::Cw);
        assert_eq!(routes[2].fiber, Fiber::B);
        assert!(!routes[2].includes_drive);
        // Input 3: backscatter exits at ports 3 and 1 (cw mode, backward).
        let routes = port_output_map(PortSpec::new(3).unwrap());
        assert_eq!(routes[2].mode, ModeKind::Cw);
        assert_eq!(routes[0].mode, ModeKind::Cw);
        assert!(routes[3].includes_drive); // through port of 3 is 4
    }

    #[test]
    fn effective_couplings_strong_and_weak() {
        let params = SystemParams::paper_defaults();
        let g_strong = params.effective_coupling(ModeKind::Ccw);
        let g_weak = params.effective_coupling(ModeKind::Cw);
        let mhz = MHZ_TO_ANGULAR;
        assert!((g_strong / mhz - 12.0 * 0.97f64.sqrt()).abs() < 1e-12);
        assert!((g_strong / mhz - 11.8186).abs() < 1e-3);
        assert!((g_weak / mhz - 12.0 * 0.03f64.sqrt()).abs() < 1e-12);
        assert!((g_weak / mhz - 2.0785).abs() < 1e-3);
        // Exactly one strong and one weak coupling, for either atom state.
        let mut p = params.clone();
        p.atom_state = AtomState::MMinus3;
        assert_eq!(p.effective_coupling(ModeKind::Cw), g_strong);
        assert_eq!(p.effective_coupling(ModeKind::Ccw), g_weak);
    }

    #[test]
    fn hamiltonian_without_drive_is_hermitian() {
        let params = SystemParams::paper_defaults();
        for port in 1..=4 {
            let input = PortSpec::new(port).unwrap();
            for kind in [ModelKind::Simplified, ModelKind::TwoMode] {
                let m = build(&params, input, kind).unwrap();
                let undriven = m
                    .hamiltonian()
                    .add(&m.drive_term().scaled(c(-1.0, 0.0)))
                    .unwrap();
                assert!(undriven.hermiticity_defect() < 1e-12);
                // With a real drive amplitude the full Hamiltonian is
                // Hermitian as well.
                assert!(m.hamiltonian().hermiticity_defect() < 1e-12);
            }
        }
    }

    #[test]
    fn coupling_matrix_element_exposes_g_eff() {
        // <e, 0 | H | g, 1> = g_eff in the simplified model.
        let params = SystemParams::paper_defaults();
        let m = build_simplified(&params, PortSpec::new(1).unwrap()).unwrap();
        let space = m.space();
        let e0 = space.basis_index(&[1, 0]);
        let g1 = space.basis_index(&[0, 1]);
        let elem = m.hamiltonian().matrix()[[e0, g1]];
        let expected = params.g * params.alpha;
        assert!((elem - c(expected, 0.0)).norm() < 1e-12);

        let m = build_simplified(&params, PortSpec::new(2).unwrap()).unwrap();
        let elem = m.hamiltonian().matrix()[[e0, g1]];
        let expected = params.g * params.beta;
        assert!((elem - c(expected, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn no_atom_empty_cavity_steady_state() {
        // <a>_ss = -i sqrt(2 kappa_a) eps / kappa_tot on resonance.
        let mut params = SystemParams::paper_defaults();
        params.atom_state = AtomState::NoAtom;
        let m = build_simplified(&params, PortSpec::new(1).unwrap()).unwrap();
        let rho = m.liouvillian().unwrap().steady_state().unwrap();
        let a = m.mode_op(ModeKind::Ccw).unwrap();
        let amp = expect(a, rho.as_op()).unwrap();
        let exact = c(0.0, -1.0) * (2.0 * params.kappa_a).sqrt() * params.epsilon
            / c(params.kappa_tot(), 0.0);
        assert!((amp - exact).norm() < 1e-10 * exact.norm());
    }

    #[test]
    fn two_mode_with_beta_zero_reduces_to_simplified() {
        let mut params = SystemParams::paper_defaults();
        params.alpha = 1.0;
        params.beta = 0.0;
        params.n_max = 3;
        let input = PortSpec::new(1).unwrap();
        let simple = build_simplified(&params, input).unwrap();
        let full = build_two_mode(&params, input).unwrap();
        let rho_s = simple.liouvillian().unwrap().steady_state().unwrap();
        let rho_f = full.liouvillian().unwrap().steady_state().unwrap();
        let a_s = simple.mode_op(ModeKind::Ccw).unwrap();
        let a_f = full.mode_op(ModeKind::Ccw).unwrap();
        let amp_s = expect(a_s, rho_s.as_op()).unwrap();
        let amp_f = expect(a_f, rho_f.as_op()).unwrap();
        assert!((amp_s - amp_f).norm() < 1e-10);
        let n_s = expect(&a_s.dagger().matmul(a_s).unwrap(), rho_s.as_op()).unwrap();
        let n_f = expect(&a_f.dagger().matmul(a_f).unwrap(), rho_f.as_op()).unwrap();
        assert!((n_s - n_f).norm() < 1e-10);
    }

    #[test]
    fn two_mode_backscatter_is_small_but_nonzero() {
        let params = SystemParams::paper_defaults();
        let m = build_two_mode(&params, PortSpec::new(1).unwrap()).unwrap();
        let rho = m.liouvillian().unwrap().steady_state().unwrap();
        let amp_ccw = expect(m.mode_op(ModeKind::Ccw).unwrap(), rho.as_op()).unwrap();
        let amp_cw = expect(m.mode_op(ModeKind::Cw).unwrap(), rho.as_op()).unwrap();
        assert!(amp_cw.norm() > 0.0);
        assert!(amp_cw.norm() < 0.5 * amp_ccw.norm());
    }

    #[test]
    fn no_atom_undriven_mode_stays_dark() {
        let mut params = SystemParams::paper_defaults();
        params.atom_state = AtomState::NoAtom;
        params.n_max = 2;
        let m = build_two_mode(&params, PortSpec::new(1).unwrap()).unwrap();
        let rho = m.liouvillian().unwrap().steady_state().unwrap();
        let b = m.mode_op(ModeKind::Cw).unwrap();
        let n_cw = expect(&b.dagger().matmul(b).unwrap(), rho.as_op()).unwrap();
        assert!(n_cw.norm() < 1e-20);
    }

    #[test]
    fn truncation_guards() {
        let mut params = SystemParams::paper_defaults();
        params.n_max = 1;
        assert!(matches!(
            build_two_mode(&params, PortSpec::new(1).unwrap()),
            Err(Error::TruncationTooSmall { n_max: 1 })
        ));
        params.n_max = 40;
        assert!(matches!(
            build_two_mode(&params, PortSpec::new(1).unwrap()),
            Err(Error::TruncationTooLarge { .. })
        ));
    }

    #[test]
    fn invalid_params_are_rejected() {
        let mut p = SystemParams::paper_defaults();
        p.gamma = -1.0;
        assert!(p.validate().is_err());
        let mut p = SystemParams::paper_defaults();
        p.alpha = 0.5; // alpha^2 + beta^2 != 1
        assert!(p.validate().is_err());
        let mut p = SystemParams::paper_defaults();
        p.g = 0.0;
        assert!(p.validate().is_err());
        p.atom_state = AtomState::NoAtom;
        assert!(p.validate().is_ok());
    }

    #[test]
    fn coupling_ratio_constraint() {
        let params = SystemParams::paper_defaults();
        let p = params.at_coupling_ratio(2.2).unwrap();
        let mhz = MHZ_TO_ANGULAR;
        assert!((p.kappa_b / mhz - 6.0).abs() < 1e-12);
        assert!((p.kappa_a / mhz - 11.0).abs() < 1e-12);
        assert!((p.kappa_tot() / mhz - 22.0).abs() < 1e-12);
        assert!((p.kappa_a - p.kappa_b - p.kappa_0).abs() < 1e-12);
        assert!(params.at_coupling_ratio(0.99).is_err());
    }
}
