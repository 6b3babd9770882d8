//! Dense complex linear algebra helpers shared across the crate.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Dense complex matrix.
pub type CMatrix = DMatrix<Complex64>;
/// Dense complex column vector.
pub type CVector = DVector<Complex64>;

/// d x d identity matrix.
pub fn identity(d: usize) -> CMatrix {
    CMatrix::identity(d, d)
}

/// Matrix trace.
pub fn trace(m: &CMatrix) -> Complex64 {
    m.diagonal().iter().sum()
}

/// Conjugate transpose.
pub fn dagger(m: &CMatrix) -> CMatrix {
    m.adjoint()
}

/// Hermitian part (M + M^dagger) / 2.
pub fn hermitize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Largest entry magnitude.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest entrywise difference |A - B|.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch in max_abs_diff");
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Kronecker product A (x) B.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Matrix unit |i><j| in dimension d.
pub fn matrix_unit(d: usize, i: usize, j: usize) -> CMatrix {
    let mut m = CMatrix::zeros(d, d);
    m[(i, j)] = Complex64::new(1.0, 0.0);
    m
}

/// Outer product psi psi^dagger of a column vector.
pub fn outer(psi: &CVector) -> CMatrix {
    psi * psi.adjoint()
}

/// Deviation of U from unitarity, max |U^dagger U - I|.
pub fn unitarity_residual(u: &CMatrix) -> f64 {
    let d = u.nrows();
    max_abs_diff(&(u.adjoint() * u), &identity(d))
}

/// Eigenvalues of a Hermitian matrix, sorted ascending.
///
/// The input is symmetrized first so that rounding noise in the off-diagonal
/// entries cannot leak imaginary parts into the spectrum.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let mut evs: Vec<f64> = hermitize(m)
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .collect();
    evs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    evs
}

/// Eigendecomposition of a Hermitian matrix with eigenvalues sorted ascending.
///
/// Returns the eigenvalues and the matrix whose columns are the matching
/// normalized eigenvectors.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = hermitize(m).symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].partial_cmp(&eig.eigenvalues[j]).unwrap());
    let evs: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let d = m.nrows();
    let mut vecs = CMatrix::zeros(d, d);
    for (col, &i) in order.iter().enumerate() {
        vecs.set_column(col, &eig.eigenvectors.column(i));
    }
    (evs, vecs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn trace_sums_diagonal() {
        let m =
            CMatrix::from_row_slice(2, 2, &[c(1.0, 2.0), c(0.0, 0.0), c(0.0, 0.0), c(3.0, -1.0)]);
        let t = trace(&m);
        assert!((t - c(4.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn kron_of_identities_is_identity() {
        let k = kron(&identity(2), &identity(3));
        assert!(max_abs_diff(&k, &identity(6)) < 1e-15);
    }

    #[test]
    fn matrix_unit_has_single_entry() {
        let u = matrix_unit(3, 1, 2);
        assert!((u[(1, 2)] - c(1.0, 0.0)).norm() < 1e-15);
        assert!((max_abs(&u) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn hermitian_eigenvalues_of_pauli_z_are_plus_minus_one() {
        let z =
            CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]);
        let evs = hermitian_eigenvalues(&z);
        assert!((evs[0] + 1.0).abs() < 1e-12);
        assert!((evs[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn hermitian_eigen_reconstructs_the_matrix() {
        let m = hermitize(&CMatrix::from_row_slice(
            3,
            3,
            &[
                c(1.0, 0.0),
                c(0.5, 0.2),
                c(0.0, -0.3),
                c(0.5, -0.2),
                c(-0.7, 0.0),
                c(0.1, 0.1),
                c(0.0, 0.3),
                c(0.1, -0.1),
                c(0.4, 0.0),
            ],
        ));
        let (evs, vecs) = hermitian_eigen(&m);
        let mut rebuilt = CMatrix::zeros(3, 3);
        for (k, &ev) in evs.iter().enumerate() {
            let v = vecs.column(k).clone_owned();
            rebuilt += (&v * v.adjoint()).scale(ev);
        }
        assert!(max_abs_diff(&rebuilt, &m) < 1e-12);
        assert!(evs[0] <= evs[1] && evs[1] <= evs[2]);
    }

    #[test]
    fn unitarity_residual_flags_non_unitary_input() {
        assert!(unitarity_residual(&identity(4)) < 1e-15);
        let stretched = identity(2).scale(2.0);
        assert!(unitarity_residual(&stretched) > 1.0);
    }
}
