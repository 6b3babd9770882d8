//! Generalized Pauli operators on a d-level system.
//!
//! The shift operator X maps |j> to |j+1 mod d> and the clock operator Z maps
//! |j> to w^j |j> with w = exp(2 pi i / d). Their monomials E_{a,b} = X^a Z^b
//! form an orthogonal operator basis, and adding the d phases w^c yields the
//! finite group of elements F_{a,b,c} = w^c E_{a,b}.

use num_complex::Complex64;

use crate::error::{QhswError, Result};
use crate::linalg::{max_abs_diff, CMatrix};
use crate::tol::GROUP_DIM_CAP;

/// Label (a, b) of a shift-clock monomial X^a Z^b in dimension d.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WeylIndex {
    pub a: usize,
    pub b: usize,
    pub d: usize,
}

impl WeylIndex {
    /// Builds a label, rejecting exponents outside 0..d.
    pub fn new(a: usize, b: usize, d: usize) -> Result<Self> {
        if d == 0 {
            return Err(QhswError::InvalidDimension {
                got: d,
                reason: "dimension must be positive".into(),
            });
        }
        if a >= d || b >= d {
            return Err(QhswError::IndexOutOfRange { a, b, d });
        }
        Ok(Self { a, b, d })
    }
}

/// A shift-clock monomial together with its matrix.
#[derive(Clone, Debug)]
pub struct WeylOperator {
    pub index: WeylIndex,
    pub matrix: CMatrix,
}

/// A group element w^c X^a Z^b together with its matrix.
#[derive(Clone, Debug)]
pub struct PhasedWeylOperator {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
    pub matrix: CMatrix,
}

/// Primitive d-th root of unity exp(2 pi i / d).
pub fn root_of_unity(d: usize) -> Result<Complex64> {
    if d == 0 {
        return Err(QhswError::InvalidDimension {
            got: d,
            reason: "no root of unity in dimension zero".into(),
        });
    }
    Ok(Complex64::from_polar(1.0, std::f64::consts::TAU / d as f64))
}

/// w^k for integer k, evaluated from the reduced exponent k mod d.
pub fn root_power(d: usize, k: i64) -> Result<Complex64> {
    if d == 0 {
        return Err(QhswError::InvalidDimension {
            got: d,
            reason: "no root of unity in dimension zero".into(),
        });
    }
    let k = k.rem_euclid(d as i64) as f64;
    Ok(Complex64::from_polar(
        1.0,
        std::f64::consts::TAU * k / d as f64,
    ))
}

/// Cyclic shift matrix X with X|j> = |j+1 mod d>.
pub fn shift_matrix(d: usize) -> Result<CMatrix> {
    if d == 0 {
        return Err(QhswError::InvalidDimension {
            got: d,
            reason: "shift operator needs a positive dimension".into(),
        });
    }
    let mut m = CMatrix::zeros(d, d);
    for j in 0..d {
        m[((j + 1) % d, j)] = Complex64::new(1.0, 0.0);
    }
    Ok(m)
}

/// Clock matrix Z = diag(1, w, w^2, ..., w^{d-1}).
pub fn clock_matrix(d: usize) -> Result<CMatrix> {
    if d == 0 {
        return Err(QhswError::InvalidDimension {
            got: d,
            reason: "clock operator needs a positive dimension".into(),
        });
    }
    let mut m = CMatrix::zeros(d, d);
    for j in 0..d {
        m[(j, j)] = root_power(d, j as i64)?;
    }
    Ok(m)
}

/// Basis element E_{a,b} = X^a Z^b.
///
/// Built entrywise from E_{a,b}|j> = w^{jb} |j+a mod d>, which keeps every
/// phase an exact root of unity instead of accumulating matrix products.
pub fn weyl_operator(index: &WeylIndex) -> WeylOperator {
    let d = index.d;
    let mut m = CMatrix::zeros(d, d);
    for j in 0..d {
        m[((j + index.a) % d, j)] = root_power(d, (j * index.b) as i64).expect("d > 0");
    }
    WeylOperator {
        index: *index,
        matrix: m,
    }
}

/// Group element F_{a,b,c} = w^c X^a Z^b.
pub fn phased_weyl_operator(a: usize, b: usize, c: usize, d: usize) -> Result<PhasedWeylOperator> {
    let index = WeylIndex::new(a, b, d)?;
    if c >= d {
        return Err(QhswError::IndexOutOfRange { a: c, b: 0, d });
    }
    let phase = root_power(d, c as i64)?;
    let matrix = weyl_operator(&index).matrix * phase;
    Ok(PhasedWeylOperator { a, b, c, d, matrix })
}

/// Phase exponent picked up under conjugation.
///
/// Conjugating the target E_{a,b} by E_{g,h} multiplies it by w^k with
/// k = (a h - b g) mod d; the returned value is that exponent.
pub fn conjugate_weyl(conjugator: &WeylIndex, target: &WeylIndex) -> Result<usize> {
    if conjugator.d != target.d {
        return Err(QhswError::DimensionMismatch {
            expected: conjugator.d,
            got: target.d,
        });
    }
    let d = conjugator.d as i64;
    let (g, h) = (conjugator.a as i64, conjugator.b as i64);
    let (a, b) = (target.a as i64, target.b as i64);
    Ok((a * h - b * g).rem_euclid(d) as usize)
}

/// Hilbert-Schmidt inner product Tr[X^dagger Y].
pub fn hs_inner(x: &CMatrix, y: &CMatrix) -> Result<Complex64> {
    if x.nrows() != x.ncols() || y.nrows() != y.ncols() {
        return Err(QhswError::Domain(
            "inner product needs square matrices".into(),
        ));
    }
    if x.nrows() != y.nrows() {
        return Err(QhswError::DimensionMismatch {
            expected: x.nrows(),
            got: y.nrows(),
        });
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..x.ncols() {
        for i in 0..x.nrows() {
            acc += x[(i, j)].conj() * y[(i, j)];
        }
    }
    Ok(acc)
}

/// Average squared trace magnitude (1/n) sum |Tr g|^2 over a group's elements.
///
/// The value is 1 exactly when the elements form an irreducible unitary
/// representation; closure is not re-verified here, see
/// [`group_closure_residual`] for that.
pub fn irreducibility_sum(elements: &[CMatrix]) -> Result<f64> {
    if elements.is_empty() {
        return Err(QhswError::Domain(
            "irreducibility sum over an empty set".into(),
        ));
    }
    let mut acc = 0.0;
    for m in elements {
        acc += crate::linalg::trace(m).norm_sqr();
    }
    Ok(acc / elements.len() as f64)
}

/// All d^3 phased operators F_{a,b,c}, ordered lexicographically by (a, b, c).
pub fn generate_group_q(d: usize) -> Result<Vec<PhasedWeylOperator>> {
    generate_group_q_with_cap(d, GROUP_DIM_CAP)
}

/// Same as [`generate_group_q`] with an explicit dimension cap.
pub fn generate_group_q_with_cap(d: usize, cap: usize) -> Result<Vec<PhasedWeylOperator>> {
    if d < 2 {
        return Err(QhswError::InvalidDimension {
            got: d,
            reason: "the phased operator group needs dimension at least 2".into(),
        });
    }
    if d > cap {
        return Err(QhswError::DimensionCapExceeded { got: d, cap });
    }
    let mut ops = Vec::with_capacity(d * d * d);
    for a in 0..d {
        for b in 0..d {
            for c in 0..d {
                ops.push(phased_weyl_operator(a, b, c, d)?);
            }
        }
    }
    Ok(ops)
}

/// Max deviation between every pairwise product in the group and the element
/// its index arithmetic predicts.
///
/// F_{a1,b1,c1} F_{a2,b2,c2} = F_{(a1+a2), (b1+b2), (c1+c2+b1 a2)} with all
/// three labels reduced mod d.
pub fn group_closure_residual(group: &[PhasedWeylOperator]) -> Result<f64> {
    if group.is_empty() {
        return Err(QhswError::Domain("closure check over an empty set".into()));
    }
    let d = group[0].d;
    if group.len() != d * d * d {
        return Err(QhswError::Domain(format!(
            "closure check expects all {} group elements, got {}",
            d * d * d,
            group.len()
        )));
    }
    let at = |a: usize, b: usize, c: usize| &group[(a * d + b) * d + c];
    let mut worst: f64 = 0.0;
    for x in group {
        for y in group {
            let a = (x.a + y.a) % d;
            let b = (x.b + y.b) % d;
            let c = (x.c + y.c + x.b * y.a) % d;
            let expected = at(a, b, c);
            worst = worst.max(max_abs_diff(&(&x.matrix * &y.matrix), &expected.matrix));
        }
    }
    Ok(worst)
}

/// Max deviation from Z X = w X Z in dimension d.
pub fn commutation_residual(d: usize) -> Result<f64> {
    let x = shift_matrix(d)?;
    let z = clock_matrix(d)?;
    let w = root_of_unity(d)?;
    Ok(max_abs_diff(&(&z * &x), &((&x * &z) * w)))
}

/// Max deviation of Tr[E_{a,b}^dagger E_{q,r}] from d delta_{a,q} delta_{b,r},
/// over all pairs of basis labels.
pub fn orthonormality_residual(d: usize) -> Result<f64> {
    if d < 2 {
        return Err(QhswError::InvalidDimension {
            got: d,
            reason: "orthogonality scan needs dimension at least 2".into(),
        });
    }
    let basis: Vec<CMatrix> = all_weyl_matrices(d)?;
    let mut worst: f64 = 0.0;
    for (i, x) in basis.iter().enumerate() {
        for (j, y) in basis.iter().enumerate() {
            let expected = if i == j { d as f64 } else { 0.0 };
            let got = hs_inner(x, y)?;
            worst = worst.max((got - Complex64::new(expected, 0.0)).norm());
        }
    }
    Ok(worst)
}

/// Max deviation of E_{g,h} E_{a,b} E_{g,h}^dagger from w^k E_{a,b} with the
/// exponent k from [`conjugate_weyl`], over all pairs of labels.
pub fn conjugation_residual(d: usize) -> Result<f64> {
    if d < 2 {
        return Err(QhswError::InvalidDimension {
            got: d,
            reason: "conjugation scan needs dimension at least 2".into(),
        });
    }
    let mut worst: f64 = 0.0;
    for g in 0..d {
        for h in 0..d {
            let conj_idx = WeylIndex::new(g, h, d)?;
            let e_gh = weyl_operator(&conj_idx).matrix;
            let e_gh_dag = e_gh.adjoint();
            for a in 0..d {
                for b in 0..d {
                    let target_idx = WeylIndex::new(a, b, d)?;
                    let target = weyl_operator(&target_idx).matrix;
                    let k = conjugate_weyl(&conj_idx, &target_idx)?;
                    let expected = &target * root_power(d, k as i64)?;
                    let got = &e_gh * &target * &e_gh_dag;
                    worst = worst.max(max_abs_diff(&got, &expected));
                }
            }
        }
    }
    Ok(worst)
}

/// Matrices of all d^2 basis elements, indexed by a*d + b.
pub fn all_weyl_matrices(d: usize) -> Result<Vec<CMatrix>> {
    if d == 0 {
        return Err(QhswError::InvalidDimension {
            got: d,
            reason: "basis needs a positive dimension".into(),
        });
    }
    let mut basis = Vec::with_capacity(d * d);
    for a in 0..d {
        for b in 0..d {
            basis.push(weyl_operator(&WeylIndex::new(a, b, d)?).matrix);
        }
    }
    Ok(basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{dagger, identity, max_abs, unitarity_residual};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn root_of_unity_matches_known_values() {
        assert!((root_of_unity(1).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
        assert!((root_of_unity(2).unwrap() - c(-1.0, 0.0)).norm() < 1e-15);
        assert!((root_of_unity(4).unwrap() - c(0.0, 1.0)).norm() < 1e-15);
        assert!(root_of_unity(0).is_err());
    }

    #[test]
    fn root_power_reduces_exponents_mod_d() {
        let w = root_of_unity(5).unwrap();
        assert!((root_power(5, 7).unwrap() - w * w).norm() < 1e-15);
        assert!((root_power(5, -1).unwrap() - w.conj()).norm() < 1e-15);
        assert!((root_power(5, 5).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn shift_matrix_for_qubits_is_pauli_x() {
        let x = shift_matrix(2).unwrap();
        let pauli_x =
            CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        assert!(max_abs_diff(&x, &pauli_x) < 1e-15);
    }

    #[test]
    fn clock_matrix_for_qubits_is_pauli_z() {
        let z = clock_matrix(2).unwrap();
        let pauli_z =
            CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]);
        assert!(max_abs_diff(&z, &pauli_z) < 1e-15);
    }

    #[test]
    fn shift_cycles_basis_states_and_has_order_d() {
        for d in 2..=6 {
            let x = shift_matrix(d).unwrap();
            let mut power = identity(d);
            for _ in 0..d {
                power = &x * &power;
            }
            assert!(
                max_abs_diff(&power, &identity(d)) < 1e-13,
                "X^d != I at d={d}"
            );
        }
    }

    #[test]
    fn clock_has_order_d() {
        for d in 2..=6 {
            let z = clock_matrix(d).unwrap();
            let mut power = identity(d);
            for _ in 0..d {
                power = &z * &power;
            }
            assert!(
                max_abs_diff(&power, &identity(d)) < 1e-13,
                "Z^d != I at d={d}"
            );
        }
    }

    #[test]
    fn shift_and_clock_are_unitary() {
        for d in 2..=8 {
            assert!(unitarity_residual(&shift_matrix(d).unwrap()) < 1e-14);
            assert!(unitarity_residual(&clock_matrix(d).unwrap()) < 1e-14);
        }
    }

    #[test]
    fn clock_shift_commutation_picks_up_one_root_of_unity() {
        for d in 2..=8 {
            assert!(
                commutation_residual(d).unwrap() < 1e-14,
                "ZX != wXZ at d={d}"
            );
        }
    }

    #[test]
    fn weyl_operator_matches_explicit_matrix_powers() {
        for d in 2..=5 {
            let x = shift_matrix(d).unwrap();
            let z = clock_matrix(d).unwrap();
            for a in 0..d {
                for b in 0..d {
                    let mut explicit = identity(d);
                    for _ in 0..a {
                        explicit = &x * &explicit;
                    }
                    for _ in 0..b {
                        explicit *= &z;
                    }
                    let built = weyl_operator(&WeylIndex::new(a, b, d).unwrap()).matrix;
                    assert!(
                        max_abs_diff(&built, &explicit) < 1e-13,
                        "E_({a},{b}) mismatch at d={d}"
                    );
                }
            }
        }
    }

    #[test]
    fn weyl_operator_special_cases() {
        let id3 = weyl_operator(&WeylIndex::new(0, 0, 3).unwrap()).matrix;
        assert!(max_abs_diff(&id3, &identity(3)) < 1e-15);

        // X Z at d = 2 equals -i sigma_y.
        let xz = weyl_operator(&WeylIndex::new(1, 1, 2).unwrap()).matrix;
        let minus_i_sigma_y =
            CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        assert!(max_abs_diff(&xz, &minus_i_sigma_y) < 1e-15);
    }

    #[test]
    fn weyl_trace_vanishes_except_identity() {
        for d in 2..=6 {
            for a in 0..d {
                for b in 0..d {
                    let m = weyl_operator(&WeylIndex::new(a, b, d).unwrap()).matrix;
                    let t = crate::linalg::trace(&m);
                    let expected = if a == 0 && b == 0 { d as f64 } else { 0.0 };
                    assert!((t - c(expected, 0.0)).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn weyl_adjoint_is_phased_inverse_label() {
        // E_{a,b}^dagger = w^{(d-a)(d-b)} E_{d-a,d-b} with labels mod d.
        for d in 2..=5 {
            for a in 0..d {
                for b in 0..d {
                    let e = weyl_operator(&WeylIndex::new(a, b, d).unwrap()).matrix;
                    let ai = (d - a) % d;
                    let bi = (d - b) % d;
                    let partner = weyl_operator(&WeylIndex::new(ai, bi, d).unwrap()).matrix;
                    let phase = root_power(d, ((d - a) * (d - b)) as i64).unwrap();
                    assert!(max_abs_diff(&dagger(&e), &(partner * phase)) < 1e-13);
                }
            }
        }
    }

    #[test]
    fn conjugation_exponent_matches_matrices_exhaustively() {
        for d in 2..=4 {
            assert!(conjugation_residual(d).unwrap() < 1e-12);
        }
    }

    #[test]
    fn conjugation_exponent_examples() {
        // Conjugating Z by X flips its sign for qubits.
        let x = WeylIndex::new(1, 0, 2).unwrap();
        let z = WeylIndex::new(0, 1, 2).unwrap();
        assert_eq!(conjugate_weyl(&x, &z).unwrap(), 1);
        // The identity label never produces a phase.
        let id = WeylIndex::new(0, 0, 2).unwrap();
        assert_eq!(conjugate_weyl(&id, &z).unwrap(), 0);
        assert_eq!(conjugate_weyl(&x, &id).unwrap(), 0);
        // d = 3: conjugator (1,2) on target (2,1) gives (2*2 - 1*1) mod 3 = 0.
        let g = WeylIndex::new(1, 2, 3).unwrap();
        let t = WeylIndex::new(2, 1, 3).unwrap();
        assert_eq!(conjugate_weyl(&g, &t).unwrap(), 0);
        // Mismatched dimensions are rejected.
        let q = WeylIndex::new(0, 1, 4).unwrap();
        assert!(conjugate_weyl(&g, &q).is_err());
    }

    #[test]
    fn hs_inner_is_d_on_identical_labels_and_zero_otherwise() {
        for d in 2..=6 {
            assert!(orthonormality_residual(d).unwrap() < 1e-12);
        }
        let id = identity(4);
        assert!((hs_inner(&id, &id).unwrap() - c(4.0, 0.0)).norm() < 1e-15);
        let x = shift_matrix(2).unwrap();
        let z = clock_matrix(2).unwrap();
        assert!(hs_inner(&x, &z).unwrap().norm() < 1e-15);
        assert!(hs_inner(&identity(2), &identity(3)).is_err());
    }

    #[test]
    fn irreducibility_sum_is_one_for_the_phased_group() {
        for d in 2..=5 {
            let group = generate_group_q(d).unwrap();
            assert_eq!(group.len(), d * d * d);
            let matrices: Vec<CMatrix> = group.iter().map(|g| g.matrix.clone()).collect();
            let s = irreducibility_sum(&matrices).unwrap();
            assert!((s - 1.0).abs() < 1e-10, "sum {s} at d={d}");
        }
    }

    #[test]
    fn irreducibility_sum_known_cases() {
        // Eight-element qubit group {+-I, +-X, +-iXZ, +-Z}.
        let mut elems = Vec::new();
        for m in [
            identity(2),
            shift_matrix(2).unwrap(),
            weyl_operator(&WeylIndex::new(1, 1, 2).unwrap()).matrix * c(0.0, 1.0),
            clock_matrix(2).unwrap(),
        ] {
            elems.push(m.clone());
            elems.push(m * c(-1.0, 0.0));
        }
        assert!((irreducibility_sum(&elems).unwrap() - 1.0).abs() < 1e-12);

        // The trivial group on a d-level system scores d^2: fully reducible.
        for d in 2..=4 {
            let s = irreducibility_sum(&[identity(d)]).unwrap();
            assert!((s - (d * d) as f64).abs() < 1e-12);
        }

        assert!(irreducibility_sum(&[]).is_err());
    }

    #[test]
    fn group_elements_are_distinct_unitaries() {
        let group = generate_group_q(3).unwrap();
        for g in &group {
            assert!(unitarity_residual(&g.matrix) < 1e-13);
        }
        for (i, x) in group.iter().enumerate() {
            for y in group.iter().skip(i + 1) {
                assert!(max_abs_diff(&x.matrix, &y.matrix) > 1e-6);
            }
        }
    }

    #[test]
    fn group_is_closed_under_multiplication() {
        for d in 2..=3 {
            let group = generate_group_q(d).unwrap();
            assert!(group_closure_residual(&group).unwrap() < 1e-12);
        }
    }

    #[test]
    fn group_generation_respects_the_dimension_cap() {
        assert!(matches!(
            generate_group_q(9),
            Err(QhswError::DimensionCapExceeded { got: 9, cap: 8 })
        ));
        assert!(generate_group_q_with_cap(9, 9).is_ok());
        assert!(generate_group_q(1).is_err());
    }

    #[test]
    fn phased_operator_applies_the_phase() {
        let f = phased_weyl_operator(1, 0, 1, 2).unwrap();
        let expected = shift_matrix(2).unwrap() * c(-1.0, 0.0);
        assert!(max_abs_diff(&f.matrix, &expected) < 1e-15);
        assert!(phased_weyl_operator(0, 0, 2, 2).is_err());
        assert!(max_abs(&f.matrix) <= 1.0 + 1e-15);
    }
}
