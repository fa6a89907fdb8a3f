//! Dense complex linear algebra shared across the crate.
//!
//! All matrices are `nalgebra::DMatrix<Complex64>`. Hermitian spectral
//! calculus goes through `SymmetricEigen`; unitary matrices are diagonalized
//! with the two-commuting-Hermitian trick: for unitary U the matrices
//! C = (U+U†)/2 and S = (U−U†)/(2i) are Hermitian and commute, and
//! U = C + iS, so refining the eigenspaces of C by S yields a joint
//! orthonormal eigenbasis of U with unit-modulus eigenvalues.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use thiserror::Error;

/// Complex scalar used everywhere in the crate.
pub type C64 = Complex64;
/// Dense complex matrix.
pub type CMat = DMatrix<C64>;
/// Dense complex column vector.
pub type CVec = DVector<C64>;

/// Errors raised by the spectral routines.
#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("matrix is not Hermitian: ‖M − M†‖_F = {defect:.3e} exceeds {tol:.3e}")]
    NotHermitian { defect: f64, tol: f64 },
    #[error("matrix is not unitary: ‖U†U − I‖_F = {defect:.3e} exceeds {tol:.3e}")]
    NotUnitary { defect: f64, tol: f64 },
}

/// Complex unit i.
pub const I: C64 = C64::new(0.0, 1.0);

/// Real number promoted to a complex scalar.
pub fn cr(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// n×n identity.
pub fn ident(n: usize) -> CMat {
    CMat::identity(n, n)
}

/// Frobenius norm.
pub fn frob(m: &CMat) -> f64 {
    m.norm()
}

/// Conjugate transpose.
pub fn dagger(m: &CMat) -> CMat {
    m.adjoint()
}

/// Matrix commutator [a, b] = ab − ba.
pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

/// ‖M − M†‖_F, zero for Hermitian matrices.
pub fn hermiticity_defect(m: &CMat) -> f64 {
    frob(&(m - m.adjoint()))
}

/// ‖U†U − I‖_F, zero for unitary matrices.
pub fn unitarity_defect(u: &CMat) -> f64 {
    frob(&(u.adjoint() * u - ident(u.nrows())))
}

/// Eigendecomposition of a Hermitian matrix: M = Q diag(λ) Q† with real λ.
///
/// The input is symmetrized before the solve so roundoff-level asymmetry does
/// not leak into the eigenvectors; inputs beyond `tol` are rejected.
pub fn herm_eigen(m: &CMat, tol: f64) -> Result<(DVector<f64>, CMat), LinalgError> {
    let defect = hermiticity_defect(m);
    if defect > tol {
        return Err(LinalgError::NotHermitian { defect, tol });
    }
    let sym = (m + m.adjoint()).scale(0.5);
    let se = sym.symmetric_eigen();
    Ok((se.eigenvalues, se.eigenvectors))
}

/// Apply a scalar function to a Hermitian matrix through its spectrum:
/// f(M) = Q diag(f(λ)) Q†.
pub fn herm_fn(m: &CMat, tol: f64, f: impl Fn(f64) -> C64) -> Result<CMat, LinalgError> {
    let (vals, q) = herm_eigen(m, tol)?;
    let d = CMat::from_diagonal(&CVec::from_iterator(vals.len(), vals.iter().map(|&x| f(x))));
    Ok(&q * d * q.adjoint())
}

/// exp(iX) for Hermitian X, exactly unitary up to eigendecomposition roundoff.
pub fn expi(m: &CMat, tol: f64) -> Result<CMat, LinalgError> {
    herm_fn(m, tol, |x| C64::new(0.0, x).exp())
}

/// Group values within `tol` of each other into (representative, multiplicity)
/// pairs; representatives are cluster means, output sorted ascending.
pub fn cluster_real(vals: &[f64], tol: f64) -> Vec<(f64, usize)> {
    let mut sorted = vals.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut out: Vec<(f64, usize)> = Vec::new();
    for v in sorted {
        match out.last_mut() {
            Some((rep, count)) if (v - *rep).abs() <= tol => {
                // running mean keeps the representative centered in its cluster
                *rep = (*rep * *count as f64 + v) / (*count as f64 + 1.0);
                *count += 1;
            }
            _ => out.push((v, 1)),
        }
    }
    out
}

/// Cluster complex values by Euclidean distance `tol`; output sorted by
/// (argument, modulus) for deterministic reporting.
pub fn cluster_complex(vals: &[C64], tol: f64) -> Vec<(C64, usize)> {
    let mut out: Vec<(C64, usize)> = Vec::new();
    for &v in vals {
        match out.iter_mut().find(|(rep, _)| (v - *rep).norm() <= tol) {
            Some((rep, count)) => {
                *rep = (*rep * cr(*count as f64) + v) / cr(*count as f64 + 1.0);
                *count += 1;
            }
            None => out.push((v, 1)),
        }
    }
    out.sort_by(|a, b| {
        let ka = (a.0.arg(), a.0.norm());
        let kb = (b.0.arg(), b.0.norm());
        ka.partial_cmp(&kb).unwrap()
    });
    out
}

/// Eigendecomposition of a unitary matrix: U = Q diag(λ) Q† with |λ| = 1 and
/// Q unitary.
///
/// Uses the joint diagonalization of the commuting Hermitian pair
/// C = (U+U†)/2, S = (U−U†)/(2i): C is diagonalized first, then S is
/// diagonalized within each eigenvalue cluster of C (cos λ alone cannot
/// separate λ from −λ; sin λ does). Eigenvalues are recovered as Rayleigh
/// quotients and renormalized to unit modulus.
pub fn unitary_eigen(u: &CMat, tol: f64) -> Result<(Vec<C64>, CMat), LinalgError> {
    let defect = unitarity_defect(u);
    if defect > tol {
        return Err(LinalgError::NotUnitary { defect, tol });
    }
    let n = u.nrows();
    let c = (u + u.adjoint()).scale(0.5);
    let s = (u - u.adjoint()) * C64::new(0.0, -0.5);
    let (cvals, q) = herm_eigen(&c, 1e-9)?;

    // Cluster the cosine spectrum, then refine each cluster by S.
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| cvals[a].partial_cmp(&cvals[b]).unwrap());
    let mut basis = CMat::zeros(n, n);
    let mut col = 0;
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (cvals[idx[end]] - cvals[idx[start]]).abs() <= 1e-8 {
            end += 1;
        }
        let k = end - start;
        let mut qc = CMat::zeros(n, k);
        for (j, &i) in idx[start..end].iter().enumerate() {
            qc.set_column(j, &q.column(i));
        }
        let s_small = qc.adjoint() * &s * &qc;
        let (_, r) = herm_eigen(&s_small, 1e-8)?;
        let refined = qc * r;
        for j in 0..k {
            basis.set_column(col, &refined.column(j));
            col += 1;
        }
        start = end;
    }

    let eig: Vec<C64> = (0..n)
        .map(|j| {
            let v = basis.column(j);
            let lambda = (v.adjoint() * u * v)[(0, 0)];
            lambda / cr(lambda.norm())
        })
        .collect();
    Ok((eig, basis))
}

/// Principal square root of a unitary matrix.
///
/// Eigenvalue arguments are taken in (−π, π] and halved; an eigenvalue within
/// `1e-8` of −1 sits on the branch cut and is reported through the returned
/// flag (the principal branch is still applied, mapping −1 to +i).
pub fn unitary_sqrt(u: &CMat, tol: f64) -> Result<(CMat, bool), LinalgError> {
    let (eig, q) = unitary_eigen(u, tol)?;
    let mut branch_warning = false;
    let roots: Vec<C64> = eig
        .iter()
        .map(|l| {
            if (l + cr(1.0)).norm() < 1e-8 {
                branch_warning = true;
            }
            let mut theta = l.im.atan2(l.re);
            // atan2 can return −π for arguments on the negative real axis;
            // fold it to +π so the principal branch is single-valued.
            if theta <= -std::f64::consts::PI + 1e-12 {
                theta = std::f64::consts::PI;
            }
            C64::from_polar(1.0, theta / 2.0)
        })
        .collect();
    let d = CMat::from_diagonal(&CVec::from_vec(roots));
    Ok((&q * d * q.adjoint(), branch_warning))
}

/// Nearest unitary matrix in Frobenius norm: M (M†M)^{−1/2}.
///
/// Available for re-unitarizing long products; evaluators do not apply it by
/// default so convergence measurements stay unpolluted.
pub fn polar_unitarize(m: &CMat) -> Result<CMat, LinalgError> {
    let gram = m.adjoint() * m;
    let inv_sqrt = herm_fn(&gram, 1e-9, |x| cr(1.0 / x.sqrt()))?;
    Ok(m * inv_sqrt)
}

/// Kronecker product a ⊗ b.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

/// Nodes and weights of the n-point Gauss-Legendre rule on [−1, 1].
///
/// Newton iteration on Pₙ with the Chebyshev-angle initial guess; exact for
/// polynomials of degree ≤ 2n−1.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "quadrature order must be positive");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            // evaluate P_n and P_n' by the three-term recurrence
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (mut p0, mut p1) = (1.0, x);
        for k in 2..=n {
            let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
            p0 = p1;
            p1 = p2;
        }
        let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
        nodes[n - 1 - i] = x;
        weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}
