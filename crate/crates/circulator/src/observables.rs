//! Input-output observables: port amplitudes, 4x4 transmission matrices and
//! the circulator figures of merit.
//!
//! The output field at each port follows from the input-output relations
//! `<a_out_trans> = <a_in> - i sqrt(2 kappa) <a>` on the drive-carrying port
//! and `<a_out_cross> = -i sqrt(2 kappa) <a>` on all others, with the mode
//! and coupling rate per port given by the routing geometry. Transmissions
//! are normalized to the nominal input, T_ij = |amp_j / eps|^2.

use num_complex::Complex64 as C64;

use crate::hilbert::{expect, DensityMatrix};
use crate::model::{self, ModelInstance, ModelKind, PortSpec, SystemParams};
use crate::{Error, Result};

/// Port-to-port power transmissions; rows are input ports, columns output
/// ports (0-based indices for ports 1..4).
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct TransmissionMatrix {
    t: [[f64; 4]; 4],
}

impl TransmissionMatrix {
    /// Validate entries and passivity (row sums bounded by one).
    pub fn new(t: [[f64; 4]; 4]) -> Result<Self> {
        for (i, row) in t.iter().enumerate() {
            let mut sum = 0.0;
            for (j, &v) in row.iter().enumerate() {
                if !(0.0..=1.0 + 1e-9).contains(&v) {
                    return Err(Error::InvalidState(format!(
                        "transmission T[{},{}] = {v} outside [0, 1]",
                        i + 1,
                        j + 1
                    )));
                }
                sum += v;
            }
            if sum > 1.0 + 1e-9 {
                return Err(Error::InvalidState(format!(
                    "row {} sums to {sum} > 1 (gain is unphysical)",
                    i + 1
                )));
            }
        }
        Ok(Self { t })
    }

    /// Entry by 1-based port numbers.
    pub fn get(&self, input_port: u8, output_port: u8) -> f64 {
        self.t[(input_port - 1) as usize][(output_port - 1) as usize]
    }

    pub fn rows(&self) -> &[[f64; 4]; 4] {
        &self.t
    }

    /// Survival probability of a photon entering port i (1-based): row sum.
    pub fn survival(&self, input_port: u8) -> f64 {
        self.t[(input_port - 1) as usize].iter().sum()
    }

    pub fn transpose(&self) -> Self {
        let mut t = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                t[i][j] = self.t[j][i];
            }
        }
        Self { t }
    }

    /// Largest absolute elementwise difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                worst = worst.max((self.t[i][j] - other.t[i][j]).abs());
            }
        }
        worst
    }
}

/// Ideal routing direction the device is compared against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Direction {
    /// Ideal cycle i -> i+1.
    Forward,
    /// Ideal cycle i -> i-1.
    Backward,
}

impl Direction {
    /// 0-based ideal output column for 0-based input row.
    fn ideal_output(self, i: usize) -> usize {
        match self {
            Direction::Forward => (i + 1) % 4,
            Direction::Backward => (i + 3) % 4,
        }
    }
}

/// Figures of merit of a measured or simulated transmission matrix.
#[derive(Debug, Clone, serde::Serialize)]
pub struct CirculatorMetrics {
    /// Operation fidelity F = 1 - (1/8) sum |T_ij / eta_i - T^id_ij|.
    pub fidelity: f64,
    /// Per-port survival probabilities eta_i.
    pub eta_per_port: [f64; 4],
    /// Mean survival probability.
    pub eta: f64,
    /// Isolations I_i = 10 log10(T_{i,i+1} / T_{i+1,i}) in dB, always
    /// evaluated on the forward-adjacent pairs; the direction metadata
    /// carries the orientation.
    pub isolations: [f64; 4],
    pub direction: Direction,
}

/// Complex output amplitudes at ports 1..4 (index 0..3) for a model in its
/// steady state.
pub fn output_amplitudes(model: &ModelInstance, rho_ss: &DensityMatrix) -> Result<[C64; 4]> {
    if rho_ss.space() != model.space() {
        return Err(Error::SpaceMismatch);
    }
    let params = model.params();
    let eps = C64::new(params.epsilon, 0.0);
    let minus_i = C64::new(0.0, -1.0);
    let mut amps = [C64::new(0.0, 0.0); 4];
    for route in model::port_output_map(model.input()) {
        let kappa = params.kappa(route.fiber);
        let mode_amp = match model.mode_op(route.mode) {
            Some(op) => expect(op, rho_ss.as_op())?,
            // The simplified model does not represent the counter mode;
            // its backscatter entries are exactly zero.
            None => C64::new(0.0, 0.0),
        };
        let mut amp = minus_i * (2.0 * kappa).sqrt() * mode_amp;
        if route.includes_drive {
            amp += eps;
        }
        amps[(route.output_port - 1) as usize] = amp;
    }
    Ok(amps)
}

/// Assemble the full 4x4 transmission matrix by solving the steady state for
/// each input port.
pub fn transmission_matrix(params: &SystemParams, kind: ModelKind) -> Result<TransmissionMatrix> {
    if params.epsilon == 0.0 {
        return Err(Error::ZeroDrive);
    }
    let mut t = [[0.0; 4]; 4];
    for port in 1..=4u8 {
        let input = PortSpec::new(port)?;
        let model = model::build(params, input, kind)?;
        let rho = model.liouvillian()?.steady_state()?;
        let amps = output_amplitudes(&model, &rho)?;
        for (j, amp) in amps.iter().enumerate() {
            let ratio = amp / C64::new(params.epsilon, 0.0);
            t[(port - 1) as usize][j] = ratio.norm_sqr();
        }
    }
    TransmissionMatrix::new(t)
}

/// Evaluate fidelity, survival probabilities and isolations against the
/// ideal cycle of the given direction.
pub fn metrics(t: &TransmissionMatrix, direction: Direction) -> CirculatorMetrics {
    let mut eta_per_port = [0.0; 4];
    for i in 0..4 {
        eta_per_port[i] = t.rows()[i].iter().sum();
    }
    let eta = eta_per_port.iter().sum::<f64>() / 4.0;

    let mut deviation = 0.0;
    for i in 0..4 {
        let ideal_j = direction.ideal_output(i);
        for j in 0..4 {
            let ideal = if j == ideal_j { 1.0 } else { 0.0 };
            // A dead input port contributes the maximal penalty |0 - ideal|.
            let normalized = if eta_per_port[i] > 0.0 {
                t.rows()[i][j] / eta_per_port[i]
            } else {
                0.0
            };
            deviation += (normalized - ideal).abs();
        }
    }
    let fidelity = 1.0 - deviation / 8.0;

    let mut isolations = [0.0; 4];
    for i in 0..4 {
        let fwd = t.rows()[i][(i + 1) % 4];
        let bwd = t.rows()[(i + 1) % 4][i];
        isolations[i] = if bwd > 0.0 {
            10.0 * (fwd / bwd).log10()
        } else if fwd > 0.0 {
            f64::INFINITY
        } else {
            0.0
        };
    }

    CirculatorMetrics { fidelity, eta_per_port, eta, isolations, direction }
}
