//! Truncated Hilbert spaces and dense operators on them.
//!
//! A [`HilbertSpace`] is an ordered tensor product of two-level atoms and
//! Fock-truncated bosonic modes. Operators are dense complex matrices tagged
//! with their space so that dimension mismatches are caught early. Everything
//! is immutable after construction and safe to share across threads.

use ndarray::Array2;
use ndarray_linalg::{EigValsh, UPLO};
use num_complex::Complex64 as C64;

use crate::{Error, Result, Tolerances};

/// One tensor factor of the composite system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Factor {
    /// A discrete emitter with the given number of internal levels.
    Atom { levels: usize },
    /// A bosonic mode truncated at `n_max` photons (dimension `n_max + 1`).
    Mode { n_max: usize },
}

impl Factor {
    pub fn dim(&self) -> usize {
        match *self {
            Factor::Atom { levels } => levels,
            Factor::Mode { n_max } => n_max + 1,
        }
    }
}

/// Ordered tensor product of subsystems. Factor 0 is the slowest (most
/// significant) index: for factors of dimensions (d0, d1, d2) the basis state
/// |i0, i1, i2> has index (i0 * d1 + i1) * d2 + i2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertSpace {
    factors: Vec<Factor>,
}

impl HilbertSpace {
    pub fn new(factors: Vec<Factor>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidSpace("no factors".into()));
        }
        for (i, f) in factors.iter().enumerate() {
            match *f {
                Factor::Atom { levels } => {
                    if levels != 2 {
                        return Err(Error::InvalidSpace(format!(
                            "factor {i}: only two-level atoms are supported (got {levels} levels)"
                        )));
                    }
                }
                Factor::Mode { n_max } => {
                    if n_max < 1 {
                        return Err(Error::InvalidSpace(format!(
                            "factor {i}: a mode needs n_max >= 1"
                        )));
                    }
                }
            }
        }
        let space = Self { factors };
        if space.dim() < 2 {
            return Err(Error::InvalidSpace("total dimension must be >= 2".into()));
        }
        Ok(space)
    }

    /// Single two-level atom.
    pub fn atom() -> Self {
        Self { factors: vec![Factor::Atom { levels: 2 }] }
    }

    /// Single truncated mode.
    pub fn mode(n_max: usize) -> Result<Self> {
        Self::new(vec![Factor::Mode { n_max }])
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn dim(&self) -> usize {
        self.factors.iter().map(Factor::dim).product()
    }

    /// Basis index of the product state with the given per-factor occupation
    /// numbers (atom: 0 = ground, 1 = excited; modes: photon number).
    pub fn basis_index(&self, occupations: &[usize]) -> usize {
        assert_eq!(occupations.len(), self.factors.len());
        self.factors
            .iter()
            .zip(occupations)
            .fold(0, |acc, (f, &occ)| {
                debug_assert!(occ < f.dim());
                acc * f.dim() + occ
            })
    }
}

/// Dense operator on a [`HilbertSpace`].
#[derive(Debug, Clone, PartialEq)]
pub struct QOp {
    space: HilbertSpace,
    matrix: Array2<C64>,
}

/// Kronecker product, row-major, factor `a` most significant.
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

/// Embed a local operator acting on factor `index` into the full product
/// space (identity on all other factors).
fn embed(space: &HilbertSpace, index: usize, local: &Array2<C64>) -> Array2<C64> {
    let mut out: Option<Array2<C64>> = None;
    for (i, f) in space.factors().iter().enumerate() {
        let factor_mat = if i == index {
            local.clone()
        } else {
            Array2::eye(f.dim())
        };
        out = Some(match out {
            None => factor_mat,
            Some(acc) => kron(&acc, &factor_mat),
        });
    }
    out.expect("space has at least one factor")
}

impl QOp {
    /// Wrap a raw matrix, checking its dimension against the space.
    pub fn new(space: HilbertSpace, matrix: Array2<C64>) -> Result<Self> {
        let d = space.dim();
        if matrix.dim() != (d, d) {
            return Err(Error::DimensionMismatch { expected: d, got: matrix.dim().0 });
        }
        Ok(Self { space, matrix })
    }

    pub fn zeros(space: HilbertSpace) -> Self {
        let d = space.dim();
        Self { space, matrix: Array2::zeros((d, d)) }
    }

    pub fn identity(space: HilbertSpace) -> Self {
        let d = space.dim();
        Self { space, matrix: Array2::eye(d) }
    }

    /// Annihilation operator of the mode at `factor_index`, embedded in the
    /// full space: <n-1| a |n> = sqrt(n).
    pub fn annihilation(space: &HilbertSpace, factor_index: usize) -> Result<Self> {
        let factor = space
            .factors()
            .get(factor_index)
            .copied()
            .ok_or(Error::FactorOutOfRange { index: factor_index, n_factors: space.factors().len() })?;
        let n_max = match factor {
            Factor::Mode { n_max } => n_max,
            Factor::Atom { .. } => return Err(Error::NotAMode { index: factor_index }),
        };
        let dim = n_max + 1;
        let mut local = Array2::zeros((dim, dim));
        for n in 1..dim {
            local[[n - 1, n]] = C64::new((n as f64).sqrt(), 0.0);
        }
        Ok(Self { space: space.clone(), matrix: embed(space, factor_index, &local) })
    }

    /// Atomic deexcitation operator |g><e| of the two-level atom at
    /// `factor_index`, embedded in the full space. Basis order is (g, e).
    pub fn sigma_minus(space: &HilbertSpace, factor_index: usize) -> Result<Self> {
        let factor = space
            .factors()
            .get(factor_index)
            .copied()
            .ok_or(Error::FactorOutOfRange { index: factor_index, n_factors: space.factors().len() })?;
        match factor {
            Factor::Atom { .. } => {}
            Factor::Mode { .. } => return Err(Error::NotAnAtom { index: factor_index }),
        }
        let mut local = Array2::zeros((2, 2));
        local[[0, 1]] = C64::new(1.0, 0.0);
        Ok(Self { space: space.clone(), matrix: embed(space, factor_index, &local) })
    }

    pub fn space(&self) -> &HilbertSpace {
        &self.space
    }

    pub fn matrix(&self) -> &Array2<C64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// Hermitian conjugate.
    pub fn dagger(&self) -> Self {
        let matrix = self.matrix.t().mapv(|z| z.conj());
        Self { space: self.space.clone(), matrix }
    }

    /// Matrix product, checking that both operators share the space.
    pub fn matmul(&self, rhs: &QOp) -> Result<Self> {
        if self.space != rhs.space {
            return Err(Error::SpaceMismatch);
        }
        Ok(Self { space: self.space.clone(), matrix: self.matrix.dot(&rhs.matrix) })
    }

    pub fn scaled(&self, factor: C64) -> Self {
        Self { space: self.space.clone(), matrix: self.matrix.mapv(|z| z * factor) }
    }

    pub fn add(&self, rhs: &QOp) -> Result<Self> {
        if self.space != rhs.space {
            return Err(Error::SpaceMismatch);
        }
        Ok(Self { space: self.space.clone(), matrix: &self.matrix + &rhs.matrix })
    }

    pub fn trace(&self) -> C64 {
        self.matrix.diag().sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Max elementwise deviation from Hermiticity.
    pub fn hermiticity_defect(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in i..d {
                let defect = (self.matrix[[i, j]] - self.matrix[[j, i]].conj()).norm();
                worst = worst.max(defect);
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }
}

/// Tr(op * rho). `rho` may be any operator on the same space; the quantum
/// regression theorem evolves non-state operators through the same code path.
pub fn expect(op: &QOp, rho: &QOp) -> Result<C64> {
    if op.space != rho.space {
        return Err(Error::SpaceMismatch);
    }
    let d = op.dim();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..d {
        for j in 0..d {
            acc += op.matrix[[i, j]] * rho.matrix[[j, i]];
        }
    }
    Ok(acc)
}

/// A validated density matrix: Hermitian, unit trace, positive semidefinite
/// up to numerical noise.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    op: QOp,
}

impl DensityMatrix {
    /// Validate `op` against the state invariants.
    pub fn try_new(op: QOp, tol: &Tolerances) -> Result<Self> {
        let herm = op.hermiticity_defect();
        if herm > tol.hermiticity {
            return Err(Error::InvalidState(format!(
                "hermiticity defect {herm:.3e} exceeds {:.3e}",
                tol.hermiticity
            )));
        }
        let tr = op.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > tol.trace {
            return Err(Error::InvalidState(format!("trace {tr} deviates from one")));
        }
        // Eigenvalues of the Hermitized matrix; cheap at these dimensions.
        let herm_part = {
            let adj = op.matrix.t().mapv(|z| z.conj());
            (&op.matrix + &adj).mapv(|z| z * 0.5)
        };
        let eigs = herm_part
            .eigvalsh(UPLO::Lower)
            .map_err(|e| Error::LinearSolve(format!("eigensolve failed: {e}")))?;
        let min_eig = eigs.iter().copied().fold(f64::INFINITY, f64::min);
        if min_eig < -tol.positivity {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {min_eig:.3e} below -{:.3e}",
                tol.positivity
            )));
        }
        Ok(Self { op })
    }

    /// Pure state |index><index| in the product basis.
    pub fn basis_state(space: &HilbertSpace, index: usize) -> Result<Self> {
        let d = space.dim();
        if index >= d {
            return Err(Error::InvalidState(format!("basis index {index} out of range {d}")));
        }
        let mut m = Array2::zeros((d, d));
        m[[index, index]] = C64::new(1.0, 0.0);
        Ok(Self { op: QOp { space: space.clone(), matrix: m } })
    }

    pub fn as_op(&self) -> &QOp {
        &self.op
    }

    pub fn into_op(self) -> QOp {
        self.op
    }

    pub fn matrix(&self) -> &Array2<C64> {
        self.op.matrix()
    }

    pub fn space(&self) -> &HilbertSpace {
        self.op.space()
    }

    /// Smallest eigenvalue; diagnostic for positivity.
    pub fn min_eigenvalue(&self) -> Result<f64> {
        let eigs = self
            .op
            .matrix
            .eigvalsh(UPLO::Lower)
            .map_err(|e| Error::LinearSolve(format!("eigensolve failed: {e}")))?;
        Ok(eigs.iter().copied().fold(f64::INFINITY, f64::min))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn annihilation_single_photon_truncation() {
        let space = HilbertSpace::mode(1).unwrap();
        let a = QOp::annihilation(&space, 0).unwrap();
        assert_eq!(a.matrix()[[0, 1]], c(1.0, 0.0));
        assert_eq!(a.matrix()[[0, 0]], c(0.0, 0.0));
        assert_eq!(a.matrix()[[1, 0]], c(0.0, 0.0));
        assert_eq!(a.matrix()[[1, 1]], c(0.0, 0.0));
    }

    #[test]
    fn annihilation_matrix_elements_sqrt_n() {
        let space = HilbertSpace::mode(3).unwrap();
        let a = QOp::annihilation(&space, 0).unwrap();
        assert!((a.matrix()[[1, 2]] - c(2f64.sqrt(), 0.0)).norm() < 1e-15);
        assert!((a.matrix()[[2, 3]] - c(3f64.sqrt(), 0.0)).norm() < 1e-15);
        // Only the first superdiagonal is populated.
        for ((i, j), v) in a.matrix().indexed_iter() {
            if j != i + 1 {
                assert_eq!(*v, c(0.0, 0.0));
            }
        }
    }

    #[test]
    fn commutator_is_identity_below_truncation() {
        // [a, a+] = 1 on Fock levels 0..n_max-1; the edge level absorbs the
        // truncation error by construction.
        let space = HilbertSpace::new(vec![Factor::Atom { levels: 2 }, Factor::Mode { n_max: 2 }])
            .unwrap();
        let a = QOp::annihilation(&space, 1).unwrap();
        let ad = a.dagger();
        let comm = &a.matmul(&ad).unwrap().matrix().clone() - &ad.matmul(&a).unwrap().matrix().clone();
        // Indices with mode occupation < n_max: expect identity.
        for atom in 0..2 {
            for n in 0..2 {
                let idx = space.basis_index(&[atom, n]);
                assert!((comm[[idx, idx]] - c(1.0, 0.0)).norm() < 1e-14);
            }
            let edge = space.basis_index(&[atom, 2]);
            assert!((comm[[edge, edge]] - c(-2.0, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn sigma_minus_basis_convention() {
        let space = HilbertSpace::atom();
        let sm = QOp::sigma_minus(&space, 0).unwrap();
        assert_eq!(sm.matrix()[[0, 1]], c(1.0, 0.0));
        assert_eq!(sm.matrix()[[1, 0]], c(0.0, 0.0));
        // sigma+ sigma- projects onto the excited state: diag(0, 1).
        let proj = sm.dagger().matmul(&sm).unwrap();
        assert_eq!(proj.matrix()[[0, 0]], c(0.0, 0.0));
        assert_eq!(proj.matrix()[[1, 1]], c(1.0, 0.0));
        assert_eq!(proj.matrix()[[0, 1]], c(0.0, 0.0));
    }

    #[test]
    fn sigma_minus_commutes_with_mode_operator() {
        let space = HilbertSpace::new(vec![Factor::Atom { levels: 2 }, Factor::Mode { n_max: 2 }])
            .unwrap();
        let a = QOp::annihilation(&space, 1).unwrap();
        let sm = QOp::sigma_minus(&space, 0).unwrap();
        let ab = sm.matmul(&a).unwrap();
        let ba = a.matmul(&sm).unwrap();
        let defect = (&ab.matrix().clone() - &ba.matrix().clone())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        assert!(defect < 1e-15);
    }

    #[test]
    fn rejects_wrong_factor_kinds() {
        let space = HilbertSpace::new(vec![Factor::Atom { levels: 2 }, Factor::Mode { n_max: 2 }])
            .unwrap();
        assert!(matches!(QOp::annihilation(&space, 0), Err(Error::NotAMode { index: 0 })));
        assert!(matches!(QOp::sigma_minus(&space, 1), Err(Error::NotAnAtom { index: 1 })));
        assert!(matches!(
            QOp::annihilation(&space, 5),
            Err(Error::FactorOutOfRange { index: 5, .. })
        ));
    }

    #[test]
    fn expectation_values() {
        let space = HilbertSpace::mode(3).unwrap();
        let a = QOp::annihilation(&space, 0).unwrap();
        let n_op = a.dagger().matmul(&a).unwrap();
        for n in 0..=3 {
            let rho = DensityMatrix::basis_state(&space, n).unwrap();
            let id = QOp::identity(space.clone());
            assert!((expect(&id, rho.as_op()).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
            let nval = expect(&n_op, rho.as_op()).unwrap();
            assert!((nval - c(n as f64, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn density_matrix_validation_rejects_bad_states() {
        let space = HilbertSpace::mode(1).unwrap();
        let tol = Tolerances::default();
        // Not unit trace.
        let m = Array2::from_diag(&ndarray::arr1(&[c(0.7, 0.0), c(0.7, 0.0)]));
        assert!(DensityMatrix::try_new(QOp::new(space.clone(), m).unwrap(), &tol).is_err());
        // Negative eigenvalue.
        let m = Array2::from_diag(&ndarray::arr1(&[c(1.5, 0.0), c(-0.5, 0.0)]));
        assert!(DensityMatrix::try_new(QOp::new(space.clone(), m).unwrap(), &tol).is_err());
        // Non-Hermitian.
        let mut m = Array2::from_diag(&ndarray::arr1(&[c(0.5, 0.0), c(0.5, 0.0)]));
        m[[0, 1]] = c(0.3, 0.0);
        assert!(DensityMatrix::try_new(QOp::new(space, m).unwrap(), &tol).is_err());
    }
}
