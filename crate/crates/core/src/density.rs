//! Density matrices and their expansion over the shift-clock operator basis.
//!
//! Any d x d density matrix can be written as
//! rho = (1/d) (I + sum_{(a,b) != (0,0)} alpha_{a,b} E_{a,b})
//! with alpha_{a,b} = Tr[E_{a,b}^dagger rho]. Hermiticity of rho pins the
//! coefficients pairwise: alpha_{d-a,d-b} = conj(alpha_{a,b}) w^{(d-a)(d-b)}.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{QhswError, Result};
use crate::linalg::{hermitian_eigenvalues, identity, outer, trace, CMatrix, CVector};
use crate::tol::{AGGREGATE_TOL, HERMITICITY_CONSTRAINT_TOL, PSD_EIG_FLOOR};
use crate::weyl::{all_weyl_matrices, hs_inner, root_power};

/// A validated density matrix: square, Hermitian, unit trace, positive
/// semidefinite up to rounding noise.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    matrix: CMatrix,
}

/// Residuals collected while validating a candidate density matrix.
#[derive(Clone, Debug)]
pub struct ValidationReport {
    pub dim: usize,
    pub hermiticity_residual: f64,
    pub trace_residual: f64,
    pub min_eigenvalue: f64,
    pub hermitian_ok: bool,
    pub trace_ok: bool,
    pub psd_ok: bool,
}

impl ValidationReport {
    /// True when every individual check passed.
    pub fn is_valid(&self) -> bool {
        self.hermitian_ok && self.trace_ok && self.psd_ok
    }
}

/// Checks a candidate matrix for hermiticity, unit trace, and positivity.
pub fn validate(matrix: &CMatrix) -> Result<ValidationReport> {
    if matrix.nrows() != matrix.ncols() {
        return Err(QhswError::InvalidState(format!(
            "expected a square matrix, got {}x{}",
            matrix.nrows(),
            matrix.ncols()
        )));
    }
    if matrix.nrows() == 0 {
        return Err(QhswError::InvalidState("empty matrix".into()));
    }
    let d = matrix.nrows();
    let mut herm: f64 = 0.0;
    for i in 0..d {
        for j in 0..d {
            herm = herm.max((matrix[(i, j)] - matrix[(j, i)].conj()).norm());
        }
    }
    let tr = trace(matrix);
    let trace_residual = (tr - Complex64::new(1.0, 0.0)).norm();
    let evs = hermitian_eigenvalues(matrix);
    let min_eigenvalue = evs[0];
    Ok(ValidationReport {
        dim: d,
        hermiticity_residual: herm,
        trace_residual,
        min_eigenvalue,
        hermitian_ok: herm <= AGGREGATE_TOL,
        trace_ok: trace_residual <= AGGREGATE_TOL,
        psd_ok: min_eigenvalue >= PSD_EIG_FLOOR,
    })
}

impl DensityMatrix {
    /// Validates and wraps a matrix, rejecting anything that is not a state.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let report = validate(&matrix)?;
        if !report.is_valid() {
            return Err(QhswError::InvalidState(format!(
                "hermiticity residual {:.3e}, trace residual {:.3e}, min eigenvalue {:.3e}",
                report.hermiticity_residual, report.trace_residual, report.min_eigenvalue
            )));
        }
        Ok(Self { matrix })
    }

    /// Wraps a matrix without validation; callers must uphold the invariants.
    pub fn new_unchecked(matrix: CMatrix) -> Self {
        Self { matrix }
    }

    /// Builds the pure state psi psi^dagger from a unit vector.
    pub fn from_pure(psi: &CVector) -> Result<Self> {
        let norm = psi.norm();
        if (norm - 1.0).abs() > AGGREGATE_TOL {
            return Err(QhswError::InvalidState(format!(
                "state vector norm {norm} is not 1"
            )));
        }
        Ok(Self { matrix: outer(psi) })
    }

    /// The maximally mixed state I/d.
    pub fn maximally_mixed(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(QhswError::InvalidState("empty matrix".into()));
        }
        Ok(Self {
            matrix: identity(d).scale(1.0 / d as f64),
        })
    }

    /// Hilbert space dimension.
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// The underlying matrix.
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Tr[rho^2], between 1/d (maximally mixed) and 1 (pure).
    pub fn purity(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                acc += (self.matrix[(i, j)] * self.matrix[(j, i)]).re;
            }
        }
        acc
    }
}

/// Coefficients alpha_{a,b} of a matrix over the d^2 basis elements,
/// stored flat at index a*d + b. A state always has alpha_{0,0} = 1.
#[derive(Clone, Debug, PartialEq)]
pub struct WeylCoefficients {
    d: usize,
    alpha: Vec<Complex64>,
}

impl WeylCoefficients {
    /// Wraps a flat coefficient vector of length d^2.
    pub fn new(d: usize, alpha: Vec<Complex64>) -> Result<Self> {
        if d < 1 {
            return Err(QhswError::InvalidDimension {
                got: d,
                reason: "coefficients need a positive dimension".into(),
            });
        }
        if alpha.len() != d * d {
            return Err(QhswError::Domain(format!(
                "expected {} coefficients, got {}",
                d * d,
                alpha.len()
            )));
        }
        Ok(Self { d, alpha })
    }

    /// Coefficients of a state with the given off-identity entries; all
    /// unspecified entries are zero and alpha_{0,0} is set to 1.
    pub fn from_entries(d: usize, entries: &[((usize, usize), Complex64)]) -> Result<Self> {
        if d < 1 {
            return Err(QhswError::InvalidDimension {
                got: d,
                reason: "coefficients need a positive dimension".into(),
            });
        }
        let mut alpha = vec![Complex64::new(0.0, 0.0); d * d];
        alpha[0] = Complex64::new(1.0, 0.0);
        for &((a, b), v) in entries {
            if a >= d || b >= d {
                return Err(QhswError::IndexOutOfRange { a, b, d });
            }
            if a == 0 && b == 0 {
                return Err(QhswError::Domain(
                    "the (0,0) coefficient is fixed to 1 and cannot be set".into(),
                ));
            }
            alpha[a * d + b] = v;
        }
        Self::new(d, alpha)
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn get(&self, a: usize, b: usize) -> Complex64 {
        self.alpha[a * self.d + b]
    }

    /// Max violation of alpha_{d-a,d-b} = conj(alpha_{a,b}) w^{(d-a)(d-b)}.
    pub fn hermiticity_residual(&self) -> f64 {
        let d = self.d;
        let mut worst: f64 = 0.0;
        for a in 0..d {
            for b in 0..d {
                let ai = (d - a) % d;
                let bi = (d - b) % d;
                let phase = root_power(d, ((d - a) * (d - b)) as i64).expect("d > 0");
                let expected = self.get(a, b).conj() * phase;
                worst = worst.max((self.get(ai, bi) - expected).norm());
            }
        }
        worst
    }
}

/// Expands a state over the basis: alpha_{a,b} = Tr[E_{a,b}^dagger rho].
pub fn expand(rho: &DensityMatrix) -> Result<WeylCoefficients> {
    let d = rho.dim();
    let basis = all_weyl_matrices(d)?;
    let mut alpha = Vec::with_capacity(d * d);
    for e in &basis {
        alpha.push(hs_inner(e, rho.matrix())?);
    }
    WeylCoefficients::new(d, alpha)
}

/// Rebuilds the matrix (1/d) sum_{a,b} alpha_{a,b} E_{a,b}.
///
/// The result is Hermitian with unit trace whenever the coefficients satisfy
/// the pairing constraint; positivity is NOT guaranteed and is left to
/// [`validate`]. Coefficients that break the pairing constraint are rejected.
pub fn reconstruct(coeffs: &WeylCoefficients) -> Result<CMatrix> {
    let d = coeffs.dim();
    let residual = coeffs.hermiticity_residual();
    if residual > HERMITICITY_CONSTRAINT_TOL {
        return Err(QhswError::Domain(format!(
            "coefficient hermiticity constraint violated by {residual:.3e}"
        )));
    }
    let basis = all_weyl_matrices(d)?;
    let mut m = CMatrix::zeros(d, d);
    for a in 0..d {
        for b in 0..d {
            let v = coeffs.get(a, b);
            if v.norm() > 0.0 {
                m += &basis[a * d + b] * v;
            }
        }
    }
    Ok(m.scale(1.0 / d as f64))
}

/// Qubit state (I + w . sigma) / 2 from a Bloch vector inside the unit ball.
pub fn bloch_to_density(w: &[f64; 3]) -> Result<DensityMatrix> {
    let norm = (w[0] * w[0] + w[1] * w[1] + w[2] * w[2]).sqrt();
    if norm > 1.0 + AGGREGATE_TOL {
        return Err(QhswError::InvalidState(format!(
            "Bloch vector norm {norm} exceeds 1"
        )));
    }
    let h = 0.5;
    let matrix = CMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new(h * (1.0 + w[2]), 0.0),
            Complex64::new(h * w[0], -h * w[1]),
            Complex64::new(h * w[0], h * w[1]),
            Complex64::new(h * (1.0 - w[2]), 0.0),
        ],
    );
    DensityMatrix::new(matrix)
}

/// Bloch vector (Tr[rho sigma_x], Tr[rho sigma_y], Tr[rho sigma_z]) of a qubit state.
pub fn density_to_bloch(rho: &DensityMatrix) -> Result<[f64; 3]> {
    if rho.dim() != 2 {
        return Err(QhswError::DimensionMismatch {
            expected: 2,
            got: rho.dim(),
        });
    }
    let m = rho.matrix();
    let wx = (m[(0, 1)] + m[(1, 0)]).re;
    let wy = (Complex64::new(0.0, 1.0) * (m[(0, 1)] - m[(1, 0)])).re;
    let wz = (m[(0, 0)] - m[(1, 1)]).re;
    Ok([wx, wy, wz])
}

/// Haar-random unit vector in dimension d, deterministic in the seed.
pub fn random_state_vector(d: usize, rng: &mut impl Rng) -> CVector {
    loop {
        let mut v = CVector::zeros(d);
        for i in 0..d {
            let (x, y) = gaussian_pair(rng);
            v[i] = Complex64::new(x, y);
        }
        let norm = v.norm();
        if norm > 1e-6 {
            return v.scale(1.0 / norm);
        }
    }
}

/// Haar-random pure state psi psi^dagger, deterministic in the seed.
pub fn random_pure_state(d: usize, seed: u64) -> Result<DensityMatrix> {
    if d == 0 {
        return Err(QhswError::InvalidDimension {
            got: d,
            reason: "states need a positive dimension".into(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v = random_state_vector(d, &mut rng);
    Ok(DensityMatrix::new_unchecked(outer(&v)))
}

/// Standard normal pair via the Box-Muller transform.
fn gaussian_pair(rng: &mut impl Rng) -> (f64, f64) {
    let u1: f64 = loop {
        let u: f64 = rng.random();
        if u > 0.0 {
            break u;
        }
    };
    let u2: f64 = rng.random();
    let r = (-2.0 * u1.ln()).sqrt();
    let theta = std::f64::consts::TAU * u2;
    (r * theta.cos(), r * theta.sin())
}
