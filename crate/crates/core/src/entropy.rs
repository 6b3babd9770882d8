//! Von Neumann entropy, Holevo quantity, and quantum relative entropy.
//!
//! Everything is measured in bits (logarithms base 2).

use crate::density::DensityMatrix;
use crate::error::{QhswError, Result};
use crate::linalg::{hermitian_eigen, hermitian_eigenvalues, unitarity_residual, CMatrix};
use crate::tol::{
    AGGREGATE_TOL, ENTROPY_EIG_CLAMP, PSD_EIG_FLOOR, SUPPORT_EIG_TOL, SUPPORT_WEIGHT_TOL,
};

/// Binary entropy H2(p) = -p log2 p - (1-p) log2 (1-p).
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(QhswError::Domain(format!(
            "binary entropy argument {p} outside [0, 1]"
        )));
    }
    let mut h = 0.0;
    for x in [p, 1.0 - p] {
        if x > 0.0 {
            h -= x * x.log2();
        }
    }
    Ok(h)
}

/// Shannon entropy in bits of a clamped eigenvalue list.
///
/// Eigenvalues in [PSD_EIG_FLOOR, ENTROPY_EIG_CLAMP) are treated as zero;
/// anything below PSD_EIG_FLOOR aborts.
pub(crate) fn spectrum_entropy(evs: &[f64]) -> Result<f64> {
    let mut h = 0.0;
    for &ev in evs {
        if ev < PSD_EIG_FLOOR {
            return Err(QhswError::InvalidState(format!(
                "negative eigenvalue {ev:.6e} in an entropy computation"
            )));
        }
        if ev < ENTROPY_EIG_CLAMP {
            continue;
        }
        h -= ev * ev.log2();
    }
    // Rounding can push the sum a hair below zero for pure states.
    if h < 0.0 && h > -AGGREGATE_TOL {
        h = 0.0;
    }
    Ok(h)
}

/// Von Neumann entropy S(rho) = -Tr[rho log2 rho] in bits.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    spectrum_entropy(&hermitian_eigenvalues(rho.matrix()))
}

/// A finite ensemble of states with their probabilities.
#[derive(Clone, Debug)]
pub struct Ensemble {
    probs: Vec<f64>,
    states: Vec<DensityMatrix>,
}

impl Ensemble {
    /// Validates probabilities (nonnegative, summing to 1) and matching state
    /// dimensions.
    pub fn new(probs: Vec<f64>, states: Vec<DensityMatrix>) -> Result<Self> {
        if probs.is_empty() || probs.len() != states.len() {
            return Err(QhswError::InvalidEnsemble(format!(
                "{} probabilities for {} states",
                probs.len(),
                states.len()
            )));
        }
        let d = states[0].dim();
        for s in &states {
            if s.dim() != d {
                return Err(QhswError::InvalidEnsemble(
                    "states live in different dimensions".into(),
                ));
            }
        }
        let mut total = 0.0;
        for &p in &probs {
            if p < -1e-12 {
                return Err(QhswError::InvalidEnsemble(format!(
                    "negative probability {p}"
                )));
            }
            total += p;
        }
        if (total - 1.0).abs() > AGGREGATE_TOL {
            return Err(QhswError::InvalidEnsemble(format!(
                "probabilities sum to {total}, expected 1"
            )));
        }
        Ok(Self { probs, states })
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    pub fn prob(&self, i: usize) -> f64 {
        self.probs[i]
    }

    pub fn state(&self, i: usize) -> &DensityMatrix {
        &self.states[i]
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn states(&self) -> &[DensityMatrix] {
        &self.states
    }

    /// The ensemble average sum_i p_i rho_i.
    pub fn average_state(&self) -> DensityMatrix {
        let d = self.dim();
        let mut avg = CMatrix::zeros(d, d);
        for (p, s) in self.probs.iter().zip(self.states.iter()) {
            avg += s.matrix().scale(*p);
        }
        DensityMatrix::new_unchecked(avg)
    }

    /// Pushes every member state through a channel.
    pub fn apply(&self, ch: &dyn crate::channel::QuantumChannel) -> Result<Ensemble> {
        let mut out = Vec::with_capacity(self.len());
        for s in &self.states {
            out.push(ch.apply(s)?);
        }
        Ensemble::new(self.probs.clone(), out)
    }
}

/// Holevo quantity chi = S(sum_i p_i rho_i) - sum_i p_i S(rho_i) in bits.
pub fn holevo_quantity(ensemble: &Ensemble) -> Result<f64> {
    let avg_entropy = von_neumann_entropy(&ensemble.average_state())?;
    let mut mean_member = 0.0;
    for i in 0..ensemble.len() {
        mean_member += ensemble.prob(i) * von_neumann_entropy(ensemble.state(i))?;
    }
    let chi = avg_entropy - mean_member;
    Ok(if chi < 0.0 && chi > -AGGREGATE_TOL {
        0.0
    } else {
        chi
    })
}

/// Quantum relative entropy D(rho || phi) = Tr[rho log2 rho - rho log2 phi]
/// in bits.
///
/// Each trace is evaluated in the eigenbasis of its own logarithm's argument.
/// When rho places more than SUPPORT_WEIGHT_TOL of weight on the null space
/// of phi the result is positive infinity, which is a value here, not an
/// error.
pub fn relative_entropy(rho: &DensityMatrix, phi: &DensityMatrix) -> Result<f64> {
    if rho.dim() != phi.dim() {
        return Err(QhswError::DimensionMismatch {
            expected: rho.dim(),
            got: phi.dim(),
        });
    }
    let rho_evs = hermitian_eigenvalues(rho.matrix());
    let mut rho_term = 0.0;
    for &ev in &rho_evs {
        if ev < PSD_EIG_FLOOR {
            return Err(QhswError::InvalidState(format!(
                "negative eigenvalue {ev:.6e} in a relative entropy computation"
            )));
        }
        if ev >= ENTROPY_EIG_CLAMP {
            rho_term += ev * ev.log2();
        }
    }

    let (phi_evs, phi_vecs) = hermitian_eigen(phi.matrix());
    let mut cross_term = 0.0;
    let mut null_weight = 0.0;
    for (k, &nu) in phi_evs.iter().enumerate() {
        let v = phi_vecs.column(k);
        let weight = (v.adjoint() * rho.matrix() * v)[(0, 0)].re.max(0.0);
        if nu <= SUPPORT_EIG_TOL {
            null_weight += weight;
        } else {
            cross_term += weight * nu.log2();
        }
    }
    if null_weight > SUPPORT_WEIGHT_TOL {
        return Ok(f64::INFINITY);
    }
    let d = rho_term - cross_term;
    Ok(if d < 0.0 && d > -AGGREGATE_TOL {
        0.0
    } else {
        d
    })
}

/// Absolute change of the Holevo quantity when every member state is rotated
/// by the same unitary. Zero up to rounding noise for any valid unitary.
pub fn chi_unitary_invariance_residual(ensemble: &Ensemble, u: &CMatrix) -> Result<f64> {
    let d = ensemble.dim();
    if u.nrows() != d || u.ncols() != d {
        return Err(QhswError::DimensionMismatch {
            expected: d,
            got: u.nrows(),
        });
    }
    let residual = unitarity_residual(u);
    if residual > AGGREGATE_TOL {
        return Err(QhswError::NotUnitary { residual });
    }
    let rotated_states: Vec<DensityMatrix> = ensemble
        .states()
        .iter()
        .map(|s| {
            DensityMatrix::new_unchecked(crate::linalg::hermitize(&(u * s.matrix() * u.adjoint())))
        })
        .collect();
    let rotated = Ensemble::new(ensemble.probs().to_vec(), rotated_states)?;
    Ok((holevo_quantity(&rotated)? - holevo_quantity(ensemble)?).abs())
}
