//! Monodromy and braiding of Chern-Simons Wilson lines.
//!
//! Two Wilson lines in representations R₁, R₂ of the level-k theory pick up
//! the monodromy
//!
//! ```text
//!     M = exp((4π/ik) Σ_a T₁^a ⊗ T₂^a) = exp(−(4πi/k) Σ_a T₁^a ⊗ T₂^a)
//! ```
//!
//! (1/i = −i — spelled out because the sign is easy to lose). The exponent
//! is the Casimir combination T₁·T₂ = ½(C₂(R) − C₂(R₁) − C₂(R₂)) on each
//! irreducible component R of R₁⊗R₂, so the eigenvalues are the phases
//! exp(−(4πi/k)·λ_R) with λ_R that half-difference. Exchanging the two
//! lines once is the braiding B, a square root of M — optionally composed
//! with the factor-swap permutation P (the variant that acts on the
//! physical two-line Hilbert space and yields two-eigenvalue skein
//! relations). When R⊗R has at most two irreducible components, B obeys a
//! quadratic minimal polynomial, rewritten as the skein relation
//! a·B + b·I + c·B⁻¹ = 0.
//!
//! The level enters exactly as printed above — no k → k+2 shift is applied;
//! whether the shifted level is the better convention is left open here.
//! Integer k is the Chern-Simons case proper, but any nonzero real level is
//! accepted.

use crate::algebra::{tensor_casimir_spectrum, AlgebraError, LieAlgebraRep};
use crate::linalg::{
    cluster_complex, cluster_real, cr, expi, herm_eigen, ident, kron, unitarity_defect,
    unitary_eigen, unitary_sqrt, C64, CMat, LinalgError,
};
use std::f64::consts::PI;
use std::sync::Arc;
use thiserror::Error;

/// Cluster tolerance used to group eigenvalue classes.
pub const EIGEN_CLUSTER_TOL: f64 = 1e-8;

/// Errors of the monodromy/braiding/skein constructions.
#[derive(Debug, Error)]
pub enum CsError {
    #[error("level k must be a nonzero finite real, got {0}")]
    InvalidLevel(f64),
    #[error("factor swap requires equal representations, got {0} and {1}")]
    SwapNeedsEqualReps(String, String),
    #[error("R⊗R decomposes into {found} irreducible components; the quadratic skein relation supports at most 2")]
    TooManyComponents { found: usize },
    #[error("braiding matrix has {found} eigenvalue classes; the quadratic skein relation supports at most 2")]
    TooManyEigenvalueClasses { found: usize },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Exchange once: B = M^{1/2}, optionally P∘M^{1/2}.
#[derive(Clone, Debug)]
pub struct BraidingResult {
    pub b: CMat,
    pub include_swap: bool,
    /// true when unitary_sqrt halved an eigenvalue on its branch cut.
    pub branch_warning: bool,
    pub eigenvalues: Vec<(C64, usize)>,
}

/// Coefficients of a·B + b·I + c·B⁻¹ = 0 with the eigenvalues they came from.
#[derive(Clone, Debug)]
pub struct SkeinResult {
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub lambda_plus: C64,
    pub lambda_minus: C64,
    /// ‖aB + bI + cB⁻¹‖_F after substituting the braiding matrix back in.
    pub residual: f64,
    pub branch_warning: bool,
}

/// The monodromy matrix with its spectral data; braiding and skein are
/// filled in by [`monodromy_with_braiding`].
#[derive(Clone, Debug)]
pub struct MonodromyResult {
    pub k: f64,
    pub rep_labels: (String, String),
    pub m: CMat,
    /// clustered eigenvalue classes, largest multiplicity first
    pub eigenvalues: Vec<(C64, usize)>,
    /// clustered spectrum of Σ T₁^a⊗T₂^a (the λ's of the closed form)
    pub t1t2_eigenvalues: Vec<(f64, usize)>,
    pub unitarity_defect: f64,
    pub braiding: Option<BraidingResult>,
    pub skein: Option<SkeinResult>,
}

fn check_level(k: f64) -> Result<(), CsError> {
    if k == 0.0 || !k.is_finite() {
        return Err(CsError::InvalidLevel(k));
    }
    Ok(())
}

/// Σ_a T₁^a ⊗ T₂^a, the Hermitian exponent of the monodromy.
pub fn t1_dot_t2(r1: &LieAlgebraRep, r2: &LieAlgebraRep) -> Result<CMat, CsError> {
    if r1.group() != r2.group() {
        return Err(CsError::Algebra(AlgebraError::GroupMismatch(r1.group(), r2.group())));
    }
    let dim = r1.dim_r() * r2.dim_r();
    let mut x = CMat::zeros(dim, dim);
    for (t1, t2) in r1.generators().iter().zip(r2.generators()) {
        x += kron(t1, t2);
    }
    Ok(x)
}

/// The factor-swap permutation P(u⊗v) = v⊗u on C^d ⊗ C^d.
pub fn swap_matrix(d: usize) -> CMat {
    CMat::from_fn(d * d, d * d, |row, col| {
        let (i, j) = (col / d, col % d);
        if row == j * d + i {
            cr(1.0)
        } else {
            cr(0.0)
        }
    })
}

/// M = exp(−(4πi/k) Σ T₁^a⊗T₂^a) with its eigenvalue classes.
pub fn monodromy_matrix(
    r1: &Arc<LieAlgebraRep>,
    r2: &Arc<LieAlgebraRep>,
    k: f64,
) -> Result<MonodromyResult, CsError> {
    check_level(k)?;
    let x = t1_dot_t2(r1, r2)?;
    let m = expi(&x.scale(-4.0 * PI / k), 1e-9)?;
    let (vals, _) = unitary_eigen(&m, 1e-9)?;
    let mut eigenvalues = cluster_complex(&vals, EIGEN_CLUSTER_TOL);
    eigenvalues.sort_by(|a, b| {
        b.1.cmp(&a.1).then(a.0.arg().partial_cmp(&b.0.arg()).unwrap())
    });
    let (xvals, _) = herm_eigen(&x, 1e-9)?;
    let t1t2_eigenvalues = cluster_real(xvals.as_slice(), EIGEN_CLUSTER_TOL);
    Ok(MonodromyResult {
        k,
        rep_labels: (
            format!("{} {}", r1.group(), r1.label()),
            format!("{} {}", r2.group(), r2.label()),
        ),
        unitarity_defect: unitarity_defect(&m),
        m,
        eigenvalues,
        t1t2_eigenvalues,
        braiding: None,
        skein: None,
    })
}

/// B = M^{1/2} (principal branch), composed with the factor swap when asked.
pub fn braiding_matrix(
    r1: &Arc<LieAlgebraRep>,
    r2: &Arc<LieAlgebraRep>,
    k: f64,
    include_swap: bool,
) -> Result<BraidingResult, CsError> {
    check_level(k)?;
    if include_swap && (r1.group() != r2.group() || r1.label() != r2.label()) {
        return Err(CsError::SwapNeedsEqualReps(
            format!("{} {}", r1.group(), r1.label()),
            format!("{} {}", r2.group(), r2.label()),
        ));
    }
    let x = t1_dot_t2(r1, r2)?;
    let m = expi(&x.scale(-4.0 * PI / k), 1e-9)?;
    let (sqrt_m, branch_warning) = unitary_sqrt(&m, 1e-9)?;
    let b = if include_swap { swap_matrix(r1.dim_r()) * &sqrt_m } else { sqrt_m };
    let (vals, _) = unitary_eigen(&b, 1e-9)?;
    let mut eigenvalues = cluster_complex(&vals, EIGEN_CLUSTER_TOL);
    eigenvalues.sort_by(|a, b| {
        b.1.cmp(&a.1).then(a.0.arg().partial_cmp(&b.0.arg()).unwrap())
    });
    Ok(BraidingResult { b, include_swap, branch_warning, eigenvalues })
}

/// Coefficients (a, b, c) of a·B + b·I + c·B⁻¹ = 0 for R⊗R.
///
/// From (B − λ₊)(B − λ₋) = 0, multiplying by B⁻¹: a = 1, b = −(λ₊ + λ₋),
/// c = λ₊λ₋. λ₊ is the class of larger multiplicity; a single class is the
/// degenerate λ₊ = λ₋ case, (B − λ)² = 0.
pub fn skein_coefficients(
    rep: &Arc<LieAlgebraRep>,
    k: f64,
    include_swap: bool,
) -> Result<SkeinResult, CsError> {
    let components = tensor_casimir_spectrum(&[rep.clone(), rep.clone()])?;
    if components.len() > 2 {
        return Err(CsError::TooManyComponents { found: components.len() });
    }
    let braid = braiding_matrix(rep, rep, k, include_swap)?;
    let (lambda_plus, lambda_minus) = match braid.eigenvalues.len() {
        1 => (braid.eigenvalues[0].0, braid.eigenvalues[0].0),
        2 => (braid.eigenvalues[0].0, braid.eigenvalues[1].0),
        n => return Err(CsError::TooManyEigenvalueClasses { found: n }),
    };
    let (a, b, c) = (cr(1.0), -(lambda_plus + lambda_minus), lambda_plus * lambda_minus);
    let dim = braid.b.nrows();
    let b_inv = braid.b.adjoint();
    let residual = (&braid.b * a + ident(dim) * b + b_inv * c).norm();
    Ok(SkeinResult {
        a,
        b,
        c,
        lambda_plus,
        lambda_minus,
        residual,
        branch_warning: braid.branch_warning,
    })
}

/// The full bundle for reporting: monodromy plus braiding, plus skein
/// coefficients when R₁ = R₂ and the quadratic relation applies.
pub fn monodromy_with_braiding(
    r1: &Arc<LieAlgebraRep>,
    r2: &Arc<LieAlgebraRep>,
    k: f64,
    include_swap: bool,
) -> Result<MonodromyResult, CsError> {
    let mut res = monodromy_matrix(r1, r2, k)?;
    res.braiding = Some(braiding_matrix(r1, r2, k, include_swap)?);
    if r1.group() == r2.group() && r1.label() == r2.label() {
        res.skein = skein_coefficients(r1, k, include_swap).ok();
    }
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_rep, casimir2, tensor_sum_generators, Group, RepLabel};
    use crate::linalg::{commutator, frob};

    fn su2(label: RepLabel) -> Arc<LieAlgebraRep> {
        build_rep(Group::Su2, label).unwrap()
    }

    fn fund() -> Arc<LieAlgebraRep> {
        su2(RepLabel::Fundamental)
    }

    fn assert_spectra_match(got: &[(C64, usize)], want: &[(C64, usize)], tol: f64, ctx: &str) {
        // cluster the prediction the same way the numeric side was clustered
        // (predicted classes may coincide, e.g. both su2 classes at k = 2),
        // then demand a bijection of classes with equal multiplicities
        let mut expanded = Vec::new();
        for &(z, mult) in want {
            expanded.extend(std::iter::repeat_n(z, mult));
        }
        let wantc = cluster_complex(&expanded, EIGEN_CLUSTER_TOL);
        assert_eq!(got.len(), wantc.len(), "{ctx}: class count {got:?} vs {wantc:?}");
        let mut used = vec![false; wantc.len()];
        for &(z, mult) in got {
            let hit = wantc
                .iter()
                .enumerate()
                .find(|(i, (w, wm))| !used[*i] && (z - w).norm() < tol && mult == *wm);
            match hit {
                Some((i, _)) => used[i] = true,
                None => panic!("{ctx}: unmatched class {z} ×{mult} in {wantc:?}"),
            }
        }
    }

    #[test]
    fn frozen_su2_fundamental_monodromy_eigenvalues() {
        // λ ∈ {1/4 (×3), −3/4 (×1)} ⇒ eigenvalues exp(−(4πi/k)λ)
        for k in [2.0, 3.0, 5.0, 10.0] {
            let res = monodromy_matrix(&fund(), &fund(), k).unwrap();
            let phase = |lam: f64| C64::new(0.0, -4.0 * PI / k * lam).exp();
            let want = [(phase(0.25), 3), (phase(-0.75), 1)];
            assert_spectra_match(&res.eigenvalues, &want, 1e-10, &format!("k = {k}"));
        }
        // k = 3 explicitly: {e^{−iπ/3} (×3), e^{iπ} = −1 (×1)}
        let res = monodromy_matrix(&fund(), &fund(), 3.0).unwrap();
        let found_minus_one = res
            .eigenvalues
            .iter()
            .any(|&(z, m)| m == 1 && (z - cr(-1.0)).norm() < 1e-10);
        assert!(found_minus_one, "singlet class at e^{{iπ}}: {:?}", res.eigenvalues);
    }

    #[test]
    fn t1_dot_t2_spectrum_frozen() {
        let res = monodromy_matrix(&fund(), &fund(), 5.0).unwrap();
        assert_eq!(res.t1t2_eigenvalues.len(), 2, "{:?}", res.t1t2_eigenvalues);
        let (lo, hi) = (res.t1t2_eigenvalues[0], res.t1t2_eigenvalues[1]);
        assert!((lo.0 + 0.75).abs() < 1e-10 && lo.1 == 1, "singlet −3/4: {lo:?}");
        assert!((hi.0 - 0.25).abs() < 1e-10 && hi.1 == 3, "triplet 1/4: {hi:?}");
    }

    #[test]
    fn monodromy_is_unitary_with_unit_circle_spectrum() {
        for k in [5.0, 3.7, -2.4] {
            let res = monodromy_matrix(&fund(), &su2(RepLabel::Spin { twice_j: 2 }), k).unwrap();
            assert!(res.unitarity_defect < 1e-10, "unitarity at k = {k}");
            for (z, _) in &res.eigenvalues {
                assert!((z.norm() - 1.0).abs() < 1e-10, "unit circle at k = {k}: {z}");
            }
        }
    }

    #[test]
    fn large_level_monodromy_is_identity() {
        for k in [1e9, -1e9] {
            let res = monodromy_matrix(&fund(), &fund(), k).unwrap();
            assert!(frob(&(&res.m - ident(4))) <= 1e-7, "vanishing exponent at k = {k}");
        }
    }

    #[test]
    fn monodromy_commutes_with_coproduct_generators() {
        let (r1, r2) = (fund(), su2(RepLabel::Spin { twice_j: 2 }));
        let res = monodromy_matrix(&r1, &r2, 5.0).unwrap();
        for t in tensor_sum_generators(&[r1, r2]).unwrap() {
            assert!(frob(&commutator(&res.m, &t)) < 1e-10, "[M, T_α^a] = 0");
        }
    }

    #[test]
    fn closed_form_spectra_match_numeric_eigensolve() {
        let k = 7.3;
        let phase = |lam: f64| C64::new(0.0, -4.0 * PI / k * lam).exp();
        // su2 pairs up to spin 3/2: components j = |j1−j2| .. j1+j2
        for twice_j1 in 1..=3u32 {
            for twice_j2 in 1..=3u32 {
                let (r1, r2) = (
                    su2(RepLabel::Spin { twice_j: twice_j1 }),
                    su2(RepLabel::Spin { twice_j: twice_j2 }),
                );
                let (j1, j2) = (twice_j1 as f64 / 2.0, twice_j2 as f64 / 2.0);
                let c2 = |j: f64| j * (j + 1.0);
                let mut want = Vec::new();
                let mut twice_j = twice_j1.abs_diff(twice_j2);
                while twice_j <= twice_j1 + twice_j2 {
                    let j = twice_j as f64 / 2.0;
                    let lam = 0.5 * (c2(j) - c2(j1) - c2(j2));
                    want.push((phase(lam), twice_j as usize + 1));
                    twice_j += 2;
                }
                let res = monodromy_matrix(&r1, &r2, k).unwrap();
                assert_spectra_match(
                    &res.eigenvalues,
                    &want,
                    1e-10,
                    &format!("su2 {twice_j1}/2 ⊗ {twice_j2}/2"),
                );
            }
        }
        // su3 fund⊗fund: 3⊗3 = 6 ⊕ 3̄ with C₂ = {10/3 (×6), 4/3 (×3)}
        let f3 = build_rep(Group::Su3, RepLabel::Fundamental).unwrap();
        let comps = tensor_casimir_spectrum(&[f3.clone(), f3.clone()]).unwrap();
        assert_eq!(comps.len(), 2);
        assert!((comps[0].0 - 4.0 / 3.0).abs() < 1e-10 && comps[0].1 == 3, "{comps:?}");
        assert!((comps[1].0 - 10.0 / 3.0).abs() < 1e-10 && comps[1].1 == 6, "{comps:?}");
        let c2f = casimir2(&f3).unwrap();
        let want: Vec<(C64, usize)> = comps
            .iter()
            .map(|&(c2, mult)| (phase(0.5 * (c2 - 2.0 * c2f)), mult))
            .collect();
        let res = monodromy_matrix(&f3, &f3, k).unwrap();
        assert_spectra_match(&res.eigenvalues, &want, 1e-10, "su3 3⊗3");
    }

    #[test]
    fn braiding_squares_to_monodromy() {
        for include_swap in [false, true] {
            let braid = braiding_matrix(&fund(), &fund(), 5.0, include_swap).unwrap();
            let m = monodromy_matrix(&fund(), &fund(), 5.0).unwrap().m;
            assert!(
                frob(&(&braid.b * &braid.b - m)) < 1e-10,
                "B² = M, swap = {include_swap}"
            );
        }
        // unequal factors, no swap
        let (r1, r2) = (fund(), su2(RepLabel::Spin { twice_j: 2 }));
        let braid = braiding_matrix(&r1, &r2, 5.0, false).unwrap();
        let m = monodromy_matrix(&r1, &r2, 5.0).unwrap().m;
        assert!(frob(&(&braid.b * &braid.b - m)) < 1e-10, "B² = M on 2⊗3");
    }

    #[test]
    fn swap_braiding_has_two_frozen_classes() {
        // triplet +e^{−iπ/(2k)} (swap +1), singlet −e^{3iπ/(2k)} (swap −1)
        let braid = braiding_matrix(&fund(), &fund(), 5.0, true).unwrap();
        assert_eq!(braid.eigenvalues.len(), 2, "{:?}", braid.eigenvalues);
        let want = [
            (C64::new(0.0, -PI / 10.0).exp(), 3),
            (-C64::new(0.0, 3.0 * PI / 10.0).exp(), 1),
        ];
        assert_spectra_match(&braid.eigenvalues, &want, 1e-10, "swap braiding k = 5");
        assert!(!braid.branch_warning);
    }

    #[test]
    fn no_swap_braiding_is_constant_on_symmetry_classes() {
        // principal square roots of M's classes, multiplicities 3 and 1
        let braid = braiding_matrix(&fund(), &fund(), 5.0, false).unwrap();
        let want = [
            (C64::new(0.0, -PI / 10.0).exp(), 3),
            (C64::new(0.0, 3.0 * PI / 10.0).exp(), 1),
        ];
        assert_spectra_match(&braid.eigenvalues, &want, 1e-10, "no-swap braiding k = 5");
    }

    #[test]
    fn branch_warning_exactly_at_the_cut() {
        // k = 3 puts the singlet at e^{iπ} = −1, on the square-root cut
        assert!(braiding_matrix(&fund(), &fund(), 3.0, true).unwrap().branch_warning);
        assert!(!braiding_matrix(&fund(), &fund(), 5.0, true).unwrap().branch_warning);
        // k = 2 collapses M to −i·1 — away from the cut, no warning
        assert!(!braiding_matrix(&fund(), &fund(), 2.0, true).unwrap().branch_warning);
    }

    #[test]
    fn infinite_level_braiding_is_identity() {
        let braid = braiding_matrix(&fund(), &fund(), 1e9, false).unwrap();
        assert!(frob(&(&braid.b - ident(4))) <= 1e-7);
    }

    #[test]
    fn skein_substitution_closes() {
        // k = 5 with swap: λ₊ = e^{−iπ/10} (×3), λ₋ = −e^{3iπ/10} (×1)
        let sk = skein_coefficients(&fund(), 5.0, true).unwrap();
        let (lp, lm) = (C64::new(0.0, -PI / 10.0).exp(), -C64::new(0.0, 3.0 * PI / 10.0).exp());
        assert!((sk.lambda_plus - lp).norm() < 1e-10, "{}", sk.lambda_plus);
        assert!((sk.lambda_minus - lm).norm() < 1e-10, "{}", sk.lambda_minus);
        assert!((sk.b + (lp + lm)).norm() < 1e-10, "b = −(λ₊+λ₋)");
        assert!((sk.c - lp * lm).norm() < 1e-10, "c = λ₊λ₋");
        assert!(sk.residual < 1e-10, "substitution residual {}", sk.residual);
        assert!(!sk.branch_warning);

        // branch-warning level still closes, and says so
        let sk3 = skein_coefficients(&fund(), 3.0, true).unwrap();
        assert!(sk3.residual < 1e-10, "k = 3 residual {}", sk3.residual);
        assert!(sk3.branch_warning);
    }

    #[test]
    fn infinite_level_skein_degenerates_to_b_minus_i_squared() {
        // no-swap B → I: one eigenvalue class, (B − I)² = 0 form
        let sk = skein_coefficients(&fund(), 1e9, false).unwrap();
        assert!((sk.lambda_plus - sk.lambda_minus).norm() < 1e-10, "degenerate class");
        assert!((sk.b + cr(2.0)).norm() < 1e-7, "b → −2: {}", sk.b);
        assert!((sk.c - cr(1.0)).norm() < 1e-7, "c → 1: {}", sk.c);
        assert!(sk.residual < 1e-10);
    }

    #[test]
    fn skein_refuses_more_than_two_components() {
        // spin1 ⊗ spin1 = 1 ⊕ 3 ⊕ 5: three components
        let spin1 = su2(RepLabel::Spin { twice_j: 2 });
        assert!(matches!(
            skein_coefficients(&spin1, 7.0, true),
            Err(CsError::TooManyComponents { found: 3 })
        ));
    }

    #[test]
    fn input_validation() {
        assert!(matches!(
            monodromy_matrix(&fund(), &fund(), 0.0),
            Err(CsError::InvalidLevel(_))
        ));
        assert!(matches!(
            monodromy_matrix(&fund(), &fund(), f64::NAN),
            Err(CsError::InvalidLevel(_))
        ));
        let spin1 = su2(RepLabel::Spin { twice_j: 2 });
        assert!(matches!(
            braiding_matrix(&fund(), &spin1, 5.0, true),
            Err(CsError::SwapNeedsEqualReps(..))
        ));
        // cross-group products are refused
        let f3 = build_rep(Group::Su3, RepLabel::Fundamental).unwrap();
        assert!(monodromy_matrix(&fund(), &f3, 5.0).is_err());
    }

    #[test]
    fn swap_matrix_is_an_involutive_permutation() {
        for d in [2usize, 3] {
            let p = swap_matrix(d);
            assert!(frob(&(&p * &p - ident(d * d))) < 1e-14, "P² = I at d = {d}");
            assert!(unitarity_defect(&p) < 1e-14);
        }
    }

    #[test]
    fn full_bundle_reports_braiding_and_skein() {
        let res = monodromy_with_braiding(&fund(), &fund(), 5.0, true).unwrap();
        assert!(res.braiding.is_some() && res.skein.is_some());
        // skein is omitted (not an error) where the relation does not apply
        let spin1 = su2(RepLabel::Spin { twice_j: 2 });
        let res = monodromy_with_braiding(&spin1, &spin1, 5.0, true).unwrap();
        assert!(res.braiding.is_some() && res.skein.is_none());
    }
}
