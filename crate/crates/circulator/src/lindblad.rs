//! Liouvillian construction, steady states and time evolution.
//!
//! The master equation is
//!
//! ```text
//! drho/dt = -i [H, rho] + sum_k ( c_k rho c_k+ - {c_k+ c_k, rho} / 2 )
//! ```
//!
//! with H in angular units (hbar absorbed) and each collapse operator already
//! scaled by the square root of twice its field rate, c_k = sqrt(2 rate) op_k.
//! With that convention a bare cavity with collapse operator sqrt(2 kappa) a
//! decays in amplitude as <a>(t) = <a>(0) exp(-kappa t) and in photon number
//! as exp(-2 kappa t), matching the rate convention kappa_tot = kappa_0 +
//! kappa_a + kappa_b for the total field decay of the fiber-coupled
//! resonator.
//!
//! The superoperator uses column-stacking vectorization: vec(X)[i + j*d] =
//! X[i, j], so vec(A X B) = (B^T kron A) vec(X). This convention is fixed so
//! that superoperator tests are reproducible bit for bit.

use ndarray::{Array1, Array2};
use ndarray_linalg::{FactorizeInto, Solve};
use num_complex::Complex64 as C64;

use crate::hilbert::{DensityMatrix, HilbertSpace, QOp};
use crate::ode;
use crate::{Error, Result, Tolerances};

/// Generator of the open-system dynamics on a fixed space.
#[derive(Debug, Clone)]
pub struct Liouvillian {
    space: HilbertSpace,
    hamiltonian: QOp,
    collapse_ops: Vec<QOp>,
    /// c_k+ c_k, precomputed for the matrix-form generator action.
    damping_ops: Vec<Array2<C64>>,
    superoperator: Array2<C64>,
}

/// Column-stacking vectorization.
pub fn vectorize(m: &Array2<C64>) -> Array1<C64> {
    let (d, _) = m.dim();
    let mut v = Array1::zeros(d * d);
    for j in 0..d {
        for i in 0..d {
            v[i + j * d] = m[[i, j]];
        }
    }
    v
}

/// Inverse of [`vectorize`].
pub fn unvectorize(v: &Array1<C64>, d: usize) -> Array2<C64> {
    let mut m = Array2::zeros((d, d));
    for j in 0..d {
        for i in 0..d {
            m[[i, j]] = v[i + j * d];
        }
    }
    m
}

/// The multithreaded LAPACK driver of system OpenBLAS places sizeable work
/// arrays on the calling thread's stack, which overflows the 2 MiB default
/// of spawned threads for superoperators of a few thousand rows. Heavy
/// solves therefore run on a dedicated worker thread with an explicit stack.
fn solve_on_worker<T, F>(job: F) -> T
where
    T: Send,
    F: FnOnce() -> T + Send,
{
    std::thread::scope(|scope| {
        let handle = std::thread::Builder::new()
            .name("lu-solve".into())
            .stack_size(64 << 20)
            .spawn_scoped(scope, job)
            .expect("spawn LU worker thread");
        match handle.join() {
            Ok(v) => v,
            Err(payload) => std::panic::resume_unwind(payload),
        }
    })
}

/// Dense Kronecker product with `a` on the slow index.
fn kron(a: &Array2<C64>, b: &Array2<C64>) -> Array2<C64> {
    let (ra, ca) = a.dim();
    let (rb, cb) = b.dim();
    let mut out = Array2::zeros((ra * rb, ca * cb));
    for ((ia, ja), &va) in a.indexed_iter() {
        if va == C64::new(0.0, 0.0) {
            continue;
        }
        let mut block = out.slice_mut(ndarray::s![ia * rb..(ia + 1) * rb, ja * cb..(ja + 1) * cb]);
        block.zip_mut_with(b, |o, &vb| *o = va * vb);
    }
    out
}

impl Liouvillian {
    /// Build the generator from a Hamiltonian and pre-scaled collapse
    /// operators (each sqrt(2 rate) op).
    pub fn new(hamiltonian: QOp, collapse_ops: Vec<QOp>) -> Result<Self> {
        let space = hamiltonian.space().clone();
        for c in &collapse_ops {
            if c.space() != &space {
                return Err(Error::SpaceMismatch);
            }
        }
        let d = space.dim();
        let eye: Array2<C64> = Array2::eye(d);
        let minus_i = C64::new(0.0, -1.0);

        // -i (I kron H - H^T kron I)
        let h = hamiltonian.matrix();
        let mut superop = kron(&eye, h);
        superop.zip_mut_with(&kron(&h.t().to_owned(), &eye), |s, &v| *s -= v);
        superop.mapv_inplace(|z| z * minus_i);

        let mut damping_ops = Vec::with_capacity(collapse_ops.len());
        let half = C64::new(0.5, 0.0);
        for c in &collapse_ops {
            let cm = c.matrix();
            let c_conj = cm.mapv(|z| z.conj());
            let cdc = c.dagger().matrix().dot(cm);
            // + conj(c) kron c
            superop.zip_mut_with(&kron(&c_conj, cm), |s, &v| *s += v);
            // - 1/2 I kron (c+ c)  - 1/2 (c+ c)^T kron I
            superop.zip_mut_with(&kron(&eye, &cdc), |s, &v| *s -= half * v);
            superop.zip_mut_with(&kron(&cdc.t().to_owned(), &eye), |s, &v| *s -= half * v);
            damping_ops.push(cdc);
        }

        Ok(Self { space, hamiltonian, collapse_ops, damping_ops, superoperator: superop })
    }

    pub fn space(&self) -> &HilbertSpace {
        &self.space
    }

    pub fn hamiltonian(&self) -> &QOp {
        &self.hamiltonian
    }

    pub fn collapse_ops(&self) -> &[QOp] {
        &self.collapse_ops
    }

    /// Dense superoperator acting on column-stacked density matrices.
    pub fn superoperator(&self) -> &Array2<C64> {
        &self.superoperator
    }

    /// Generator action L[x] evaluated in d x d matrix form. Equal to
    /// unvec(S vec(x)) up to roundoff; the matrix form is what the time
    /// integrator uses.
    pub fn apply(&self, x: &Array2<C64>) -> Array2<C64> {
        let h = self.hamiltonian.matrix();
        let minus_i = C64::new(0.0, -1.0);
        // -i (H x - x H)
        let mut out = h.dot(x);
        out.zip_mut_with(&x.dot(h), |o, &v| *o -= v);
        out.mapv_inplace(|z| z * minus_i);
        for (c, cdc) in self.collapse_ops.iter().zip(&self.damping_ops) {
            let cm = c.matrix();
            let jump = cm.dot(x).dot(&cm.t().mapv(|z| z.conj()));
            out.zip_mut_with(&jump, |o, &v| *o += v);
            let half = C64::new(0.5, 0.0);
            out.zip_mut_with(&cdc.dot(x), |o, &v| *o -= half * v);
            out.zip_mut_with(&x.dot(cdc), |o, &v| *o -= half * v);
        }
        out
    }

    /// Unique steady state of the driven-dissipative dynamics.
    ///
    /// Solves S vec(rho) = 0 with the first row of S replaced by the trace
    /// constraint, using a direct dense LU factorization plus one step of
    /// iterative refinement. The solution is validated against the density
    /// matrix invariants and the residual bound of `tol`.
    pub fn steady_state(&self) -> Result<DensityMatrix> {
        self.steady_state_with(&Tolerances::default())
    }

    pub fn steady_state_with(&self, tol: &Tolerances) -> Result<DensityMatrix> {
        let d = self.space.dim();
        let d2 = d * d;
        let mut m = self.superoperator.clone();
        // Trace row: sum of diagonal entries of the unvectorized state.
        for j in 0..d2 {
            m[[0, j]] = C64::new(0.0, 0.0);
        }
        for i in 0..d {
            m[[0, i * (d + 1)]] = C64::new(1.0, 0.0);
        }
        let mut b = Array1::zeros(d2);
        b[0] = C64::new(1.0, 0.0);

        let x = solve_on_worker(move || -> Result<Array1<C64>> {
            let lu = m
                .clone()
                .factorize_into()
                .map_err(|_| Error::NonUniqueSteadyState)?;
            let mut x = lu.solve(&b).map_err(|_| Error::NonUniqueSteadyState)?;
            // One step of iterative refinement sharpens the small components
            // of strongly scale-separated solutions (weak coherent drive).
            let r = &b - &m.dot(&x);
            if let Ok(dx) = lu.solve(&r) {
                x += &dx;
            }
            Ok(x)
        })?;

        let rho = unvectorize(&x, d);
        // Hermitize; the residual check below guards against abuse.
        let adj = rho.t().mapv(|z| z.conj());
        let rho = (&rho + &adj).mapv(|z| z * 0.5);

        let residual = self.apply(&rho).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if !residual.is_finite() {
            return Err(Error::NonUniqueSteadyState);
        }
        if residual > tol.steady_residual {
            return Err(Error::SteadyStateResidual { residual, tolerance: tol.steady_residual });
        }
        DensityMatrix::try_new(QOp::new(self.space.clone(), rho)?, tol)
    }

    /// Propagate an operator (not necessarily a state) for a time `t >= 0`:
    /// returns unvec(exp(S t) vec(x0)), computed by adaptive Dormand-Prince
    /// integration of the generator in matrix form.
    pub fn evolve(&self, x0: &QOp, t: f64) -> Result<QOp> {
        self.evolve_with(x0, t, &Tolerances::default())
    }

    pub fn evolve_with(&self, x0: &QOp, t: f64, tol: &Tolerances) -> Result<QOp> {
        if x0.space() != &self.space {
            return Err(Error::SpaceMismatch);
        }
        let out = ode::integrate(|x| self.apply(x), x0.matrix(), t, tol.evolve_rtol)?;
        QOp::new(self.space.clone(), out)
    }

    /// Propagate through an increasing grid of times, returning the operator
    /// at each grid point.
    pub fn evolve_grid(&self, x0: &QOp, times: &[f64], tol: &Tolerances) -> Result<Vec<QOp>> {
        if x0.space() != &self.space {
            return Err(Error::SpaceMismatch);
        }
        let outs = ode::integrate_observed(
            |x| self.apply(x),
            x0.matrix(),
            times,
            tol.evolve_rtol,
            &mut |_, _| {},
        )?;
        outs.into_iter().map(|m| QOp::new(self.space.clone(), m)).collect()
    }
}
