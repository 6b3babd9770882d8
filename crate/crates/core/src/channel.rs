//! Quantum channels: maps acting diagonally on the shift-clock basis, qubit
//! affine (Bloch ball) maps, and tensor products of diagonal channels.
//!
//! A diagonal unital channel rescales each expansion coefficient,
//! alpha_{a,b} -> lambda_{a,b} alpha_{a,b}, so its whole action is a
//! multiplier grid over the basis labels. Complete positivity is decided by
//! the spectrum of the Choi matrix (id (x) channel) applied to the
//! unnormalized maximally entangled matrix.

use num_complex::Complex64;

use crate::density::DensityMatrix;
use crate::error::{QhswError, Result};
use crate::linalg::{
    hermitian_eigenvalues, hermitize, identity, kron, matrix_unit, trace, CMatrix,
};
use crate::tol::{AGGREGATE_TOL, PAIRING_TOL, PRODUCT_DIM_CAP, PSD_EIG_FLOOR};
use crate::weyl::{hs_inner, root_power, weyl_operator, WeylIndex};

/// A linear map on d x d matrices that can be applied to states.
pub trait QuantumChannel {
    /// Input (and output) Hilbert space dimension.
    fn dim(&self) -> usize;

    /// Linear extension of the channel to an arbitrary square matrix.
    fn apply_matrix(&self, x: &CMatrix) -> Result<CMatrix>;

    /// Applies the channel to a state and validates the output.
    fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != self.dim() {
            return Err(QhswError::DimensionMismatch {
                expected: self.dim(),
                got: rho.dim(),
            });
        }
        let out = hermitize(&self.apply_matrix(rho.matrix())?);
        DensityMatrix::new(out)
    }
}

/// A channel that rescales each basis coefficient by a fixed multiplier.
#[derive(Clone, Debug)]
pub struct DiagonalUnitalChannel {
    d: usize,
    lambda: Vec<Complex64>,
    basis: Vec<CMatrix>,
}

impl DiagonalUnitalChannel {
    /// Builds a channel from sparse multiplier entries; unspecified labels get
    /// multiplier 0 and the (0,0) label is fixed to 1.
    ///
    /// Checks the pairing constraint lambda_{d-a,d-b} = conj(lambda_{a,b})
    /// and complete positivity of the resulting map.
    pub fn new(d: usize, entries: &[((usize, usize), Complex64)]) -> Result<Self> {
        let ch = Self::new_without_cp_check(d, entries)?;
        let min_eig = cp_min_eigenvalue(&ch)?;
        if min_eig < PSD_EIG_FLOOR {
            return Err(QhswError::InvalidChannel(format!(
                "not completely positive: Choi min eigenvalue {min_eig:.6e}"
            )));
        }
        Ok(ch)
    }

    /// Same as [`DiagonalUnitalChannel::new`] but skips the complete
    /// positivity check, for inspecting maps that are not physical channels.
    pub fn new_without_cp_check(d: usize, entries: &[((usize, usize), Complex64)]) -> Result<Self> {
        if d < 2 {
            return Err(QhswError::InvalidDimension {
                got: d,
                reason: "channels need dimension at least 2".into(),
            });
        }
        let mut lambda = vec![Complex64::new(0.0, 0.0); d * d];
        let mut seen = vec![false; d * d];
        lambda[0] = Complex64::new(1.0, 0.0);
        for &((a, b), v) in entries {
            if a >= d || b >= d {
                return Err(QhswError::IndexOutOfRange { a, b, d });
            }
            let flat = a * d + b;
            if seen[flat] {
                return Err(QhswError::InvalidChannel(format!(
                    "duplicate multiplier for label ({a},{b})"
                )));
            }
            seen[flat] = true;
            if a == 0 && b == 0 {
                if (v - Complex64::new(1.0, 0.0)).norm() > PAIRING_TOL {
                    return Err(QhswError::InvalidChannel(
                        "the (0,0) multiplier must be 1 (trace preservation)".into(),
                    ));
                }
                continue;
            }
            lambda[flat] = v;
        }
        // Pairing constraint keeps hermitian inputs hermitian.
        for a in 0..d {
            for b in 0..d {
                let partner = ((d - a) % d) * d + (d - b) % d;
                let residual = (lambda[partner] - lambda[a * d + b].conj()).norm();
                if residual > PAIRING_TOL {
                    return Err(QhswError::InvalidChannel(format!(
                        "multiplier pairing violated at ({a},{b}): residual {residual:.3e}"
                    )));
                }
            }
        }
        let basis = crate::weyl::all_weyl_matrices(d)?;
        Ok(Self { d, lambda, basis })
    }

    /// Qubit channel scaling the Bloch components by (lx, ly, lz).
    pub fn qubit(lx: f64, ly: f64, lz: f64) -> Result<Self> {
        Self::new(2, &Self::qubit_entries(lx, ly, lz))
    }

    /// Same as [`DiagonalUnitalChannel::qubit`] without the positivity check.
    pub fn qubit_without_cp_check(lx: f64, ly: f64, lz: f64) -> Result<Self> {
        Self::new_without_cp_check(2, &Self::qubit_entries(lx, ly, lz))
    }

    fn qubit_entries(lx: f64, ly: f64, lz: f64) -> [((usize, usize), Complex64); 3] {
        [
            ((1, 0), Complex64::new(lx, 0.0)),
            ((1, 1), Complex64::new(ly, 0.0)),
            ((0, 1), Complex64::new(lz, 0.0)),
        ]
    }

    /// Identity channel in dimension d.
    pub fn identity_channel(d: usize) -> Result<Self> {
        let one = Complex64::new(1.0, 0.0);
        let mut entries = Vec::new();
        for a in 0..d {
            for b in 0..d {
                if a != 0 || b != 0 {
                    entries.push(((a, b), one));
                }
            }
        }
        Self::new(d, &entries)
    }

    /// Depolarizing-style channel scaling every non-identity label by c.
    pub fn depolarizing(d: usize, c: f64) -> Result<Self> {
        let v = Complex64::new(c, 0.0);
        let mut entries = Vec::new();
        for a in 0..d {
            for b in 0..d {
                if a != 0 || b != 0 {
                    entries.push(((a, b), v));
                }
            }
        }
        Self::new(d, &entries)
    }

    /// Channel that discards its input and outputs I/d.
    pub fn point_channel(d: usize) -> Result<Self> {
        Self::new(d, &[])
    }

    /// Random-unitary channel rho -> sum q_{g,h} E_{g,h} rho E_{g,h}^dagger.
    ///
    /// The multiplier grid is lambda_{a,b} = sum_{g,h} q_{g,h} w^{(a h - b g)},
    /// completely positive for any probability distribution q.
    pub fn from_weyl_mixture(d: usize, probs: &[((usize, usize), f64)]) -> Result<Self> {
        if d < 2 {
            return Err(QhswError::InvalidDimension {
                got: d,
                reason: "channels need dimension at least 2".into(),
            });
        }
        let mut total = 0.0;
        for &((g, h), q) in probs {
            if g >= d || h >= d {
                return Err(QhswError::IndexOutOfRange { a: g, b: h, d });
            }
            if q < 0.0 {
                return Err(QhswError::InvalidChannel(format!(
                    "negative mixture weight {q} at ({g},{h})"
                )));
            }
            total += q;
        }
        if (total - 1.0).abs() > AGGREGATE_TOL {
            return Err(QhswError::InvalidChannel(format!(
                "mixture weights sum to {total}, expected 1"
            )));
        }
        let mut entries = Vec::new();
        for a in 0..d {
            for b in 0..d {
                if a == 0 && b == 0 {
                    continue;
                }
                let mut l = Complex64::new(0.0, 0.0);
                for &((g, h), q) in probs {
                    let k = (a as i64) * (h as i64) - (b as i64) * (g as i64);
                    l += root_power(d, k)? * q;
                }
                entries.push(((a, b), l));
            }
        }
        Self::new(d, &entries)
    }

    /// Multiplier for label (a, b).
    pub fn lambda(&self, a: usize, b: usize) -> Complex64 {
        self.lambda[a * self.d + b]
    }

    /// Rescales expansion coefficients entrywise.
    pub fn apply_coefficients(
        &self,
        coeffs: &crate::density::WeylCoefficients,
    ) -> Result<crate::density::WeylCoefficients> {
        if coeffs.dim() != self.d {
            return Err(QhswError::DimensionMismatch {
                expected: self.d,
                got: coeffs.dim(),
            });
        }
        let d = self.d;
        let mut out = Vec::with_capacity(d * d);
        for a in 0..d {
            for b in 0..d {
                out.push(self.lambda(a, b) * coeffs.get(a, b));
            }
        }
        crate::density::WeylCoefficients::new(d, out)
    }
}

impl QuantumChannel for DiagonalUnitalChannel {
    fn dim(&self) -> usize {
        self.d
    }

    fn apply_matrix(&self, x: &CMatrix) -> Result<CMatrix> {
        apply_diagonal_over_basis(self.d, &self.basis, &self.lambda, x)
    }
}

/// Shared diagonal action: expand x over the cached basis, rescale, rebuild.
fn apply_diagonal_over_basis(
    d: usize,
    basis: &[CMatrix],
    lambda: &[Complex64],
    x: &CMatrix,
) -> Result<CMatrix> {
    if x.nrows() != d || x.ncols() != d {
        return Err(QhswError::DimensionMismatch {
            expected: d,
            got: x.nrows(),
        });
    }
    let mut out = CMatrix::zeros(d, d);
    for (e, l) in basis.iter().zip(lambda.iter()) {
        if l.norm() == 0.0 {
            continue;
        }
        let beta = hs_inner(e, x)?;
        out += e * (l * beta);
    }
    Ok(out.scale(1.0 / d as f64))
}

/// Qubit channel acting on Bloch vectors as w -> t + diag(lambda) w.
#[derive(Clone, Debug)]
pub struct QubitAffineChannel {
    t: [f64; 3],
    lambda: [f64; 3],
}

impl QubitAffineChannel {
    /// Builds the map and verifies complete positivity via its Choi spectrum.
    pub fn new(t: [f64; 3], lambda: [f64; 3]) -> Result<Self> {
        let ch = Self { t, lambda };
        let min_eig = cp_min_eigenvalue(&ch)?;
        if min_eig < PSD_EIG_FLOOR {
            return Err(QhswError::InvalidChannel(format!(
                "not completely positive: Choi min eigenvalue {min_eig:.6e}"
            )));
        }
        Ok(ch)
    }

    /// Builds the map without the positivity check.
    pub fn new_without_cp_check(t: [f64; 3], lambda: [f64; 3]) -> Self {
        Self { t, lambda }
    }

    pub fn translation(&self) -> [f64; 3] {
        self.t
    }

    pub fn scaling(&self) -> [f64; 3] {
        self.lambda
    }

    /// Affine action on a Bloch vector.
    pub fn apply_bloch(&self, w: &[f64; 3]) -> [f64; 3] {
        [
            self.t[0] + self.lambda[0] * w[0],
            self.t[1] + self.lambda[1] * w[1],
            self.t[2] + self.lambda[2] * w[2],
        ]
    }
}

impl QuantumChannel for QubitAffineChannel {
    fn dim(&self) -> usize {
        2
    }

    fn apply_matrix(&self, x: &CMatrix) -> Result<CMatrix> {
        if x.nrows() != 2 || x.ncols() != 2 {
            return Err(QhswError::DimensionMismatch {
                expected: 2,
                got: x.nrows(),
            });
        }
        let i = Complex64::new(0.0, 1.0);
        let tr = trace(x);
        // Pauli components of the input.
        let sx = x[(0, 1)] + x[(1, 0)];
        let sy = i * (x[(0, 1)] - x[(1, 0)]);
        let sz = x[(0, 0)] - x[(1, 1)];
        // Output components pick up the translation weighted by the trace.
        let ox = Complex64::new(self.lambda[0], 0.0) * sx + tr * self.t[0];
        let oy = Complex64::new(self.lambda[1], 0.0) * sy + tr * self.t[1];
        let oz = Complex64::new(self.lambda[2], 0.0) * sz + tr * self.t[2];
        let h = 0.5;
        let mut out = CMatrix::zeros(2, 2);
        out[(0, 0)] = (tr + oz) * h;
        out[(1, 1)] = (tr - oz) * h;
        out[(0, 1)] = (ox - i * oy) * h;
        out[(1, 0)] = (ox + i * oy) * h;
        Ok(out)
    }
}

/// Choi matrix sum_{i,j} |i><j| (x) channel(|i><j|).
pub fn choi_matrix(ch: &dyn QuantumChannel) -> Result<CMatrix> {
    let d = ch.dim();
    let mut choi = CMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            let unit = matrix_unit(d, i, j);
            let img = ch.apply_matrix(&unit)?;
            choi += kron(&unit, &img);
        }
    }
    Ok(choi)
}

/// Smallest eigenvalue of the (hermitized) Choi matrix.
pub fn cp_min_eigenvalue(ch: &dyn QuantumChannel) -> Result<f64> {
    let choi = choi_matrix(ch)?;
    Ok(hermitian_eigenvalues(&choi)[0])
}

/// Whether the channel is completely positive up to rounding noise.
pub fn is_completely_positive(ch: &dyn QuantumChannel) -> Result<bool> {
    Ok(cp_min_eigenvalue(ch)? >= PSD_EIG_FLOOR)
}

/// Max deviation of channel(I) from I.
pub fn unitality_residual(ch: &dyn QuantumChannel) -> Result<f64> {
    let d = ch.dim();
    let img = ch.apply_matrix(&identity(d))?;
    Ok(crate::linalg::max_abs_diff(&img, &identity(d)))
}

/// Whether the channel fixes the identity up to rounding noise.
pub fn is_unital(ch: &dyn QuantumChannel) -> Result<bool> {
    Ok(unitality_residual(ch)? <= AGGREGATE_TOL)
}

/// Max deviation of Tr[channel(|i><j|)] from delta_{i,j}.
pub fn trace_preservation_residual(ch: &dyn QuantumChannel) -> Result<f64> {
    let d = ch.dim();
    let mut worst: f64 = 0.0;
    for i in 0..d {
        for j in 0..d {
            let img = ch.apply_matrix(&matrix_unit(d, i, j))?;
            let expected = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((trace(&img) - Complex64::new(expected, 0.0)).norm());
        }
    }
    Ok(worst)
}

/// Mixed-radix pairing between composite labels and per-factor label tuples,
/// with the first factor varying fastest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexBijection {
    dims: Vec<usize>,
}

impl IndexBijection {
    pub fn new(dims: &[usize]) -> Result<Self> {
        if dims.is_empty() {
            return Err(QhswError::Domain("no factor dimensions given".into()));
        }
        for &d in dims {
            if d < 2 {
                return Err(QhswError::InvalidDimension {
                    got: d,
                    reason: "factor dimensions must be at least 2".into(),
                });
            }
        }
        Ok(Self {
            dims: dims.to_vec(),
        })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Product of the factor dimensions.
    pub fn total(&self) -> usize {
        self.dims.iter().product()
    }

    /// Composite label a = a_1 + a_2 d_1 + a_3 d_1 d_2 + ...
    pub fn encode(&self, tuple: &[usize]) -> Result<usize> {
        if tuple.len() != self.dims.len() {
            return Err(QhswError::Domain(format!(
                "expected {} tuple entries, got {}",
                self.dims.len(),
                tuple.len()
            )));
        }
        let mut acc = 0;
        let mut stride = 1;
        for (k, (&t, &d)) in tuple.iter().zip(self.dims.iter()).enumerate() {
            if t >= d {
                return Err(QhswError::Domain(format!(
                    "tuple entry {t} at position {k} exceeds factor dimension {d}"
                )));
            }
            acc += t * stride;
            stride *= d;
        }
        Ok(acc)
    }

    /// Inverse of [`IndexBijection::encode`].
    pub fn decode(&self, index: usize) -> Result<Vec<usize>> {
        if index >= self.total() {
            return Err(QhswError::Domain(format!(
                "index {index} out of range for total dimension {}",
                self.total()
            )));
        }
        let mut rest = index;
        let mut tuple = Vec::with_capacity(self.dims.len());
        for &d in &self.dims {
            tuple.push(rest % d);
            rest /= d;
        }
        Ok(tuple)
    }
}

/// Composite label for per-factor labels, first factor fastest.
pub fn encode_index(dims: &[usize], tuple: &[usize]) -> Result<usize> {
    IndexBijection::new(dims)?.encode(tuple)
}

/// Per-factor labels for a composite label, first factor fastest.
pub fn decode_index(dims: &[usize], index: usize) -> Result<Vec<usize>> {
    IndexBijection::new(dims)?.decode(index)
}

/// Tensor product of diagonal unital channels, acting diagonally on the
/// tensor basis E_{a_1,b_1} (x) ... (x) E_{a_N,b_N} with composite multiplier
/// Lambda_{a,b} = prod_k lambda^{(k)}_{a_k,b_k}.
#[derive(Clone, Debug)]
pub struct ProductChannel {
    factors: Vec<DiagonalUnitalChannel>,
    index_map: IndexBijection,
    lambda: Vec<Complex64>,
    basis: Vec<CMatrix>,
    d: usize,
}

/// Builds the tensor product of the given factors under the default cap.
pub fn tensor(factors: Vec<DiagonalUnitalChannel>) -> Result<ProductChannel> {
    tensor_with_cap(factors, PRODUCT_DIM_CAP)
}

/// Same as [`tensor`] with an explicit composite dimension cap.
pub fn tensor_with_cap(factors: Vec<DiagonalUnitalChannel>, cap: usize) -> Result<ProductChannel> {
    if factors.is_empty() {
        return Err(QhswError::Domain("tensor product of zero factors".into()));
    }
    let dims: Vec<usize> = factors.iter().map(|f| f.dim()).collect();
    let index_map = IndexBijection::new(&dims)?;
    let d = index_map.total();
    if d > cap {
        return Err(QhswError::DimensionCapExceeded { got: d, cap });
    }

    let mut lambda = Vec::with_capacity(d * d);
    let mut basis = Vec::with_capacity(d * d);
    for a in 0..d {
        let a_parts = index_map.decode(a)?;
        for b in 0..d {
            let b_parts = index_map.decode(b)?;
            let mut l = Complex64::new(1.0, 0.0);
            let mut m = CMatrix::identity(1, 1);
            for (k, f) in factors.iter().enumerate() {
                l *= f.lambda(a_parts[k], b_parts[k]);
                let e = weyl_operator(&WeylIndex::new(a_parts[k], b_parts[k], dims[k])?);
                m = kron(&m, &e.matrix);
            }
            lambda.push(l);
            basis.push(m);
        }
    }

    let ch = ProductChannel {
        factors,
        index_map,
        lambda,
        basis,
        d,
    };
    let min_eig = cp_min_eigenvalue(&ch)?;
    if min_eig < PSD_EIG_FLOOR {
        return Err(QhswError::InvalidChannel(format!(
            "tensor product is not completely positive: Choi min eigenvalue {min_eig:.6e}"
        )));
    }
    if unitality_residual(&ch)? > AGGREGATE_TOL {
        return Err(QhswError::InvalidChannel(
            "tensor product is not unital".into(),
        ));
    }
    Ok(ch)
}

impl ProductChannel {
    pub fn factors(&self) -> &[DiagonalUnitalChannel] {
        &self.factors
    }

    pub fn factor_dims(&self) -> &[usize] {
        self.index_map.dims()
    }

    pub fn index_map(&self) -> &IndexBijection {
        &self.index_map
    }

    /// Composite multiplier for composite labels (a, b).
    pub fn lambda(&self, a: usize, b: usize) -> Complex64 {
        self.lambda[a * self.d + b]
    }

    /// Tensor basis element for composite labels (a, b).
    pub fn basis_element(&self, a: usize, b: usize) -> &CMatrix {
        &self.basis[a * self.d + b]
    }

    /// Sum of log2(d_k) over the factors.
    pub fn log2_dim_sum(&self) -> f64 {
        self.index_map
            .dims()
            .iter()
            .map(|&d| (d as f64).log2())
            .sum()
    }
}

impl QuantumChannel for ProductChannel {
    fn dim(&self) -> usize {
        self.d
    }

    fn apply_matrix(&self, x: &CMatrix) -> Result<CMatrix> {
        apply_diagonal_over_basis(self.d, &self.basis, &self.lambda, x)
    }
}

/// Max deviation of Tr[(E^(x)_{a,b})^dagger E^(x)_{q,r}] from
/// d delta_{a,q} delta_{b,r} over the full tensor basis for the given factor
/// dimensions.
pub fn tensor_orthonormality_residual(dims: &[usize]) -> Result<f64> {
    let index_map = IndexBijection::new(dims)?;
    let d = index_map.total();
    if d > PRODUCT_DIM_CAP {
        return Err(QhswError::DimensionCapExceeded {
            got: d,
            cap: PRODUCT_DIM_CAP,
        });
    }
    let basis = tensor_basis(&index_map)?;
    let mut worst: f64 = 0.0;
    for (i, x) in basis.iter().enumerate() {
        for (j, y) in basis.iter().enumerate() {
            let expected = if i == j { d as f64 } else { 0.0 };
            worst = worst.max((hs_inner(x, y)? - Complex64::new(expected, 0.0)).norm());
        }
    }
    Ok(worst)
}

/// Max deviation of E^(x)_{g,h} E^(x)_{a,b} (E^(x)_{g,h})^dagger from
/// w^c E^(x)_{a,b} with c = sum_k (a_k h_k - b_k g_k) d / d_k, over all pairs
/// of composite labels.
pub fn tensor_conjugation_residual(dims: &[usize]) -> Result<f64> {
    let index_map = IndexBijection::new(dims)?;
    let d = index_map.total();
    if d > 9 {
        return Err(QhswError::DimensionCapExceeded { got: d, cap: 9 });
    }
    let basis = tensor_basis(&index_map)?;
    let n = d * d;
    let mut worst: f64 = 0.0;
    for gh in 0..n {
        let (g, h) = (gh / d, gh % d);
        let g_parts = index_map.decode(g)?;
        let h_parts = index_map.decode(h)?;
        let e_gh = &basis[gh];
        let e_gh_dag = e_gh.adjoint();
        for (ab, e_ab) in basis.iter().enumerate() {
            let (a, b) = (ab / d, ab % d);
            let a_parts = index_map.decode(a)?;
            let b_parts = index_map.decode(b)?;
            let mut c: i64 = 0;
            for (k, &dk) in index_map.dims().iter().enumerate() {
                let term =
                    a_parts[k] as i64 * h_parts[k] as i64 - b_parts[k] as i64 * g_parts[k] as i64;
                c += term * (d / dk) as i64;
            }
            let expected = e_ab * root_power(d, c)?;
            let got = e_gh * e_ab * &e_gh_dag;
            worst = worst.max(crate::linalg::max_abs_diff(&got, &expected));
        }
    }
    Ok(worst)
}

fn tensor_basis(index_map: &IndexBijection) -> Result<Vec<CMatrix>> {
    let d = index_map.total();
    let dims = index_map.dims();
    let mut basis = Vec::with_capacity(d * d);
    for a in 0..d {
        let a_parts = index_map.decode(a)?;
        for b in 0..d {
            let b_parts = index_map.decode(b)?;
            let mut m = CMatrix::identity(1, 1);
            for (k, &dk) in dims.iter().enumerate() {
                let e = weyl_operator(&WeylIndex::new(a_parts[k], b_parts[k], dk)?);
                m = kron(&m, &e.matrix);
            }
            basis.push(m);
        }
    }
    Ok(basis)
}
