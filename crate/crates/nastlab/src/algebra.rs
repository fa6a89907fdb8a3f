//! Lie-algebra representation infrastructure for su(2) and su(3).
//!
//! A [`LieAlgebraRep`] packages the Hermitian generators T^a of a unitary
//! irreducible representation, normalized so that
//!
//! ```text
//!     [T^a, T^b] = i f^{abc} T^c
//! ```
//!
//! with f^{abc} = ε^{abc} for su(2) (T^a = σ^a/2) and the standard constants
//! for su(3) (T^a = λ^a/2, half Gell-Mann). Each representation carries its
//! Cartan data: commuting generators H_i with Tr(H_i H_j) = κ δ_ij, raising
//! and lowering operators E_±α, and the highest-weight reference state |R⟩
//! with E_α|R⟩ = 0 and H_i|R⟩ = m_i|R⟩.
//!
//! [`AlgebraElement`] (Hermitian, X = X^a T^a) and [`GroupElement`]
//! (unitary) are thin wrappers that keep matrices tied to their
//! representation. Exponentiation goes through the Hermitian
//! eigendecomposition so group elements are unitary to roundoff, which long
//! holonomy products downstream amplify; the unitarity budget is a measured
//! quantity (`unitarity_defect`), not a hard constructor check, so the
//! literal Euler discretization of the path-ordered exponential (whose
//! factors 1 + iεA are not unitary) remains representable.

use crate::linalg::{
    self, cluster_real, commutator, cr, dagger, frob, hermiticity_defect, ident, kron,
    unitarity_defect, CMat, CVec, C64,
};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use thiserror::Error;

/// Errors from representation construction and the operations on it.
#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("unknown group label {0:?} (expected \"su2\" or \"su3\")")]
    UnknownGroup(String),
    #[error("unknown representation label {label:?} for {group}")]
    UnknownRep { group: Group, label: String },
    #[error("Σ(T^a)² is not a multiple of the identity (defect {defect:.3e}): representation is not irreducible")]
    CasimirNotScalar { defect: f64 },
    #[error("representations over different groups cannot be combined ({0} vs {1})")]
    GroupMismatch(Group, Group),
    #[error("matrix does not lie in the algebra span: projection residual {residual:.3e}")]
    NotInAlgebra { residual: f64 },
    #[error(transparent)]
    Linalg(#[from] linalg::LinalgError),
}

/// Supported compact groups.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Group {
    Su2,
    Su3,
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Group::Su2 => write!(f, "su2"),
            Group::Su3 => write!(f, "su3"),
        }
    }
}

impl FromStr for Group {
    type Err = AlgebraError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "su2" | "su(2)" => Ok(Group::Su2),
            "su3" | "su(3)" => Ok(Group::Su3),
            other => Err(AlgebraError::UnknownGroup(other.to_string())),
        }
    }
}

/// Representation labels: `fundamental` and `adjoint` for both groups,
/// `spin(j)` for any non-negative half-integer j of su(2).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RepLabel {
    Fundamental,
    Adjoint,
    /// su(2) spin j, stored as 2j to stay integral.
    Spin { twice_j: u32 },
}

impl RepLabel {
    /// Parse labels like `fundamental`, `adjoint`, `spin(1)`, `spin(3/2)`.
    pub fn parse(s: &str) -> Result<Self, String> {
        let t = s.trim().to_ascii_lowercase();
        match t.as_str() {
            "fundamental" | "fund" => return Ok(RepLabel::Fundamental),
            "adjoint" | "adj" => return Ok(RepLabel::Adjoint),
            _ => {}
        }
        if let Some(inner) = t.strip_prefix("spin(").and_then(|r| r.strip_suffix(')')) {
            let twice_j = if let Some((num, den)) = inner.split_once('/') {
                let n: u32 = num.trim().parse().map_err(|_| format!("bad spin {inner:?}"))?;
                let d: u32 = den.trim().parse().map_err(|_| format!("bad spin {inner:?}"))?;
                if d != 2 {
                    return Err(format!("spin denominators must be 2, got {inner:?}"));
                }
                n
            } else {
                let j: u32 = inner.trim().parse().map_err(|_| format!("bad spin {inner:?}"))?;
                2 * j
            };
            return Ok(RepLabel::Spin { twice_j });
        }
        Err(format!("unknown representation label {s:?}"))
    }
}

impl fmt::Display for RepLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RepLabel::Fundamental => write!(f, "fundamental"),
            RepLabel::Adjoint => write!(f, "adjoint"),
            RepLabel::Spin { twice_j } => {
                if twice_j % 2 == 0 {
                    write!(f, "spin({})", twice_j / 2)
                } else {
                    write!(f, "spin({}/2)", twice_j)
                }
            }
        }
    }
}

/// Totally antisymmetric structure constants f^{abc}, stored dense.
#[derive(Clone, Debug)]
pub struct StructureConstants {
    dim_g: usize,
    f: Vec<f64>,
}

impl StructureConstants {
    fn new(dim_g: usize) -> Self {
        Self { dim_g, f: vec![0.0; dim_g * dim_g * dim_g] }
    }

    /// f^{abc} with zero-based indices.
    pub fn get(&self, a: usize, b: usize, c: usize) -> f64 {
        self.f[(a * self.dim_g + b) * self.dim_g + c]
    }

    fn set(&mut self, a: usize, b: usize, c: usize, v: f64) {
        self.f[(a * self.dim_g + b) * self.dim_g + c] = v;
    }

    /// Number of generators dim g.
    pub fn dim_g(&self) -> usize {
        self.dim_g
    }

    /// Maximum over index triples of |f^{abc} + f^{bac}| and cyclic variants —
    /// zero for a totally antisymmetric tensor.
    pub fn antisymmetry_defect(&self) -> f64 {
        let n = self.dim_g;
        let mut worst: f64 = 0.0;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let v = self.get(a, b, c);
                    worst = worst
                        .max((v + self.get(b, a, c)).abs())
                        .max((v + self.get(a, c, b)).abs())
                        .max((v - self.get(b, c, a)).abs());
                }
            }
        }
        worst
    }
}

/// Cartan data of a representation: commuting H_i, raising/lowering E_±α,
/// highest weight m and reference state |R⟩, and κ with Tr(H_i H_j) = κ δ_ij.
#[derive(Clone, Debug)]
pub struct CartanData {
    pub h: Vec<CMat>,
    pub e_plus: Vec<CMat>,
    pub e_minus: Vec<CMat>,
    pub highest_weight: Vec<f64>,
    pub kappa: f64,
    pub reference_state: CVec,
}

/// A unitary irreducible representation: generators, structure constants,
/// Cartan data, and cached normalization.
#[derive(Debug)]
pub struct LieAlgebraRep {
    group: Group,
    label: RepLabel,
    dim_r: usize,
    generators: Vec<CMat>,
    structure: StructureConstants,
    cartan: CartanData,
    /// Dynkin index: Tr(T^a T^b) = index · δ^{ab}.
    index: f64,
}

impl LieAlgebraRep {
    pub fn group(&self) -> Group {
        self.group
    }
    pub fn label(&self) -> RepLabel {
        self.label
    }
    /// Matrix dimension dim R.
    pub fn dim_r(&self) -> usize {
        self.dim_r
    }
    /// Number of generators dim g.
    pub fn dim_g(&self) -> usize {
        self.generators.len()
    }
    pub fn generators(&self) -> &[CMat] {
        &self.generators
    }
    pub fn generator(&self, a: usize) -> &CMat {
        &self.generators[a]
    }
    pub fn structure(&self) -> &StructureConstants {
        &self.structure
    }
    pub fn cartan(&self) -> &CartanData {
        &self.cartan
    }
    /// Tr(T^a T^b) = index · δ^{ab}.
    pub fn index(&self) -> f64 {
        self.index
    }

    /// Largest Hermiticity defect over the generators.
    pub fn hermiticity_defect(&self) -> f64 {
        self.generators.iter().map(hermiticity_defect).fold(0.0, f64::max)
    }

    /// Largest ‖[T^a,T^b] − i Σ_c f^{abc} T^c‖_F over generator pairs.
    pub fn closure_defect(&self) -> f64 {
        let n = self.dim_g();
        let mut worst: f64 = 0.0;
        for a in 0..n {
            for b in 0..n {
                let mut rhs = CMat::zeros(self.dim_r, self.dim_r);
                for c in 0..n {
                    let f = self.structure.get(a, b, c);
                    if f != 0.0 {
                        rhs += self.generators[c].scale(f);
                    }
                }
                let lhs = commutator(&self.generators[a], &self.generators[b]);
                worst = worst.max(frob(&(lhs - rhs * linalg::I)));
            }
        }
        worst
    }
}

/// su(2) spin-j angular momentum triple (J₁, J₂, J₃) in the weight basis
/// J₃ = diag(j, j−1, …, −j).
fn su2_spin_generators(twice_j: u32) -> Vec<CMat> {
    let j = twice_j as f64 / 2.0;
    let dim = twice_j as usize + 1;
    let m = |k: usize| j - k as f64;
    let mut jp = CMat::zeros(dim, dim);
    for k in 1..dim {
        let mm = m(k);
        jp[(k - 1, k)] = cr((j * (j + 1.0) - mm * (mm + 1.0)).sqrt());
    }
    let jm = dagger(&jp);
    let j1 = (&jp + &jm).scale(0.5);
    let j2 = (&jp - &jm) * C64::new(0.0, -0.5);
    let j3 = CMat::from_diagonal(&CVec::from_iterator(dim, (0..dim).map(|k| cr(m(k)))));
    vec![j1, j2, j3]
}

/// The eight Gell-Mann matrices divided by two.
fn su3_fundamental_generators() -> Vec<CMat> {
    let c = |re: f64, im: f64| C64::new(re, im);
    let z = c(0.0, 0.0);
    let o = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    let s3 = 3.0_f64.sqrt();
    let lambdas: Vec<CMat> = vec![
        CMat::from_row_slice(3, 3, &[z, o, z, o, z, z, z, z, z]),
        CMat::from_row_slice(3, 3, &[z, -i, z, i, z, z, z, z, z]),
        CMat::from_row_slice(3, 3, &[o, z, z, z, -o, z, z, z, z]),
        CMat::from_row_slice(3, 3, &[z, z, o, z, z, z, o, z, z]),
        CMat::from_row_slice(3, 3, &[z, z, -i, z, z, z, i, z, z]),
        CMat::from_row_slice(3, 3, &[z, z, z, z, z, o, z, o, z]),
        CMat::from_row_slice(3, 3, &[z, z, z, z, z, -i, z, i, z]),
        CMat::from_row_slice(3, 3, &[o / cr(s3), z, z, z, o / cr(s3), z, z, z, -cr(2.0) / cr(s3)]),
    ];
    lambdas.into_iter().map(|l| l.scale(0.5)).collect()
}

/// f^{abc} = −2i Tr([T^a,T^b] T^c), valid when Tr(T^aT^b) = δ^{ab}/2
/// (the fundamental normalization for both groups).
fn structure_from_fundamental(gens: &[CMat]) -> StructureConstants {
    let n = gens.len();
    let mut f = StructureConstants::new(n);
    for (a, ga) in gens.iter().enumerate() {
        for (b, gb) in gens.iter().enumerate() {
            let com = commutator(ga, gb);
            for (c, gc) in gens.iter().enumerate() {
                let tr = (&com * gc).trace();
                let val = (tr * C64::new(0.0, -2.0)).re;
                f.set(a, b, c, if val.abs() < 1e-14 { 0.0 } else { val });
            }
        }
    }
    f
}

/// su(2) structure constants ε^{abc}.
fn su2_structure() -> StructureConstants {
    let mut f = StructureConstants::new(3);
    for (a, b, c, v) in [(0, 1, 2, 1.0), (1, 2, 0, 1.0), (2, 0, 1, 1.0)] {
        f.set(a, b, c, v);
        f.set(b, a, c, -v);
        f.set(a, c, b, -v);
        f.set(c, a, b, v);
        f.set(b, c, a, v);
        f.set(c, b, a, -v);
    }
    f
}

/// Adjoint generators (T^a)_{bc} = −i f^{abc}; Hermitian for real, totally
/// antisymmetric f.
fn adjoint_from_structure(f: &StructureConstants) -> Vec<CMat> {
    let n = f.dim_g();
    (0..n)
        .map(|a| {
            CMat::from_fn(n, n, |b, c| C64::new(0.0, -f.get(a, b, c)))
        })
        .collect()
}

/// Cartan data from a generator set: H_i are the diagonal algebra directions
/// (T³ for su2; T³, T⁸ for su3), raising operators are the rep images of the
/// root combinations, and |R⟩ is the unique unit kernel vector of
/// Σ_α E_α† E_α (a state killed by every raising operator).
fn build_cartan(group: Group, gens: &[CMat]) -> CartanData {
    let (h_idx, root_pairs): (Vec<usize>, Vec<(usize, usize)>) = match group {
        Group::Su2 => (vec![2], vec![(0, 1)]),
        Group::Su3 => (vec![2, 7], vec![(0, 1), (3, 4), (5, 6)]),
    };
    let h: Vec<CMat> = h_idx.iter().map(|&i| gens[i].clone()).collect();
    let e_plus: Vec<CMat> = root_pairs
        .iter()
        .map(|&(re, im)| &gens[re] + &gens[im] * linalg::I)
        .collect();
    let e_minus: Vec<CMat> = e_plus.iter().map(dagger).collect();

    // |R⟩: kernel of the positive semi-definite Σ E†E — the lowest eigenvector.
    let dim = gens[0].nrows();
    let mut killer = CMat::zeros(dim, dim);
    for e in &e_plus {
        killer += dagger(e) * e;
    }
    let (vals, q) = linalg::herm_eigen(&killer, 1e-10).expect("Σ E†E is Hermitian");
    let mut lowest = 0;
    for k in 1..dim {
        if vals[k] < vals[lowest] {
            lowest = k;
        }
    }
    let mut r: CVec = q.column(lowest).into_owned();
    // fix the arbitrary phase: largest-magnitude component made real positive
    let pivot = (0..dim).max_by(|&a, &b| r[a].norm().partial_cmp(&r[b].norm()).unwrap()).unwrap();
    let phase = r[pivot] / cr(r[pivot].norm());
    r /= phase;

    let highest_weight: Vec<f64> = h.iter().map(|hi| (r.adjoint() * hi * &r)[(0, 0)].re).collect();
    let kappa = (&h[0] * &h[0]).trace().re;
    CartanData { h, e_plus, e_minus, highest_weight, kappa, reference_state: r }
}

/// Build a unitary irreducible representation of su(2) or su(3).
///
/// su(2) accepts `fundamental` (= spin 1/2), `adjoint` (= spin 1), and any
/// `spin(j)`; su(3) accepts `fundamental` and `adjoint`. Generator
/// normalization: T^a = σ^a/2, λ^a/2 in the fundamentals, carried to the
/// other representations through the same structure constants.
pub fn build_rep(group: Group, label: RepLabel) -> Result<Arc<LieAlgebraRep>, AlgebraError> {
    let (generators, structure) = match (group, label) {
        (Group::Su2, RepLabel::Fundamental) => (su2_spin_generators(1), su2_structure()),
        (Group::Su2, RepLabel::Adjoint) => (su2_spin_generators(2), su2_structure()),
        (Group::Su2, RepLabel::Spin { twice_j }) => {
            (su2_spin_generators(twice_j), su2_structure())
        }
        (Group::Su3, RepLabel::Fundamental) => {
            let gens = su3_fundamental_generators();
            let f = structure_from_fundamental(&gens);
            (gens, f)
        }
        (Group::Su3, RepLabel::Adjoint) => {
            let f = structure_from_fundamental(&su3_fundamental_generators());
            (adjoint_from_structure(&f), f)
        }
        (Group::Su3, RepLabel::Spin { .. }) => {
            return Err(AlgebraError::UnknownRep { group, label: label.to_string() })
        }
    };
    let dim_r = generators[0].nrows();
    let index = (&generators[0] * &generators[0]).trace().re;
    let cartan = build_cartan(group, &generators);
    let rep = LieAlgebraRep { group, label, dim_r, generators, structure, cartan, index };

    debug_assert!(rep.hermiticity_defect() < 1e-12);
    debug_assert!(rep.closure_defect() < 1e-10);
    debug_assert!(rep.structure.antisymmetry_defect() < 1e-12);
    Ok(Arc::new(rep))
}

/// The quadratic Casimir C₂(R): the scalar c with Σ_a (T^a)² = c·I.
///
/// The Schur check (Frobenius distance of the sum from c·I) guards against
/// non-irreducible constructions.
pub fn casimir2(rep: &LieAlgebraRep) -> Result<f64, AlgebraError> {
    let mut sum = CMat::zeros(rep.dim_r, rep.dim_r);
    for t in &rep.generators {
        sum += t * t;
    }
    let c = sum.trace().re / rep.dim_r as f64;
    let defect = frob(&(sum - ident(rep.dim_r).scale(c)));
    if defect > 1e-10 {
        return Err(AlgebraError::CasimirNotScalar { defect });
    }
    Ok(c)
}

/// Coproduct generators on a tensor product of representations:
/// T_α^a = Σ_i I ⊗ … ⊗ T_i^a ⊗ … ⊗ I. They satisfy the same commutation
/// relations as the factors.
pub fn tensor_sum_generators(reps: &[Arc<LieAlgebraRep>]) -> Result<Vec<CMat>, AlgebraError> {
    assert!(!reps.is_empty(), "tensor product needs at least one factor");
    for r in &reps[1..] {
        if r.group() != reps[0].group() {
            return Err(AlgebraError::GroupMismatch(reps[0].group(), r.group()));
        }
    }
    let dim_g = reps[0].dim_g();
    let total: usize = reps.iter().map(|r| r.dim_r()).product();
    let mut out = vec![CMat::zeros(total, total); dim_g];
    for (i, _) in reps.iter().enumerate() {
        let before: usize = reps[..i].iter().map(|r| r.dim_r()).product();
        let after: usize = reps[i + 1..].iter().map(|r| r.dim_r()).product();
        for (a, term) in out.iter_mut().enumerate() {
            let mid = kron(&ident(before), reps[i].generator(a));
            *term += kron(&mid, &ident(after));
        }
    }
    Ok(out)
}

/// Spectrum of Σ_a (T_α^a)² on a tensor product, clustered — the multiset of
/// Casimir values of the Clebsch-Gordan components.
pub fn tensor_casimir_spectrum(
    reps: &[Arc<LieAlgebraRep>],
) -> Result<Vec<(f64, usize)>, AlgebraError> {
    let gens = tensor_sum_generators(reps)?;
    let n = gens[0].nrows();
    let mut sum = CMat::zeros(n, n);
    for t in &gens {
        sum += t * t;
    }
    let (vals, _) = linalg::herm_eigen(&sum, 1e-9)?;
    Ok(cluster_real(vals.as_slice(), 1e-8))
}

/// A Lie-algebra element X = X^a T^a in a fixed representation.
#[derive(Clone, Debug)]
pub struct AlgebraElement {
    rep: Arc<LieAlgebraRep>,
    coeffs: Vec<f64>,
    matrix: CMat,
}

impl AlgebraElement {
    /// Build from real coefficients X^a.
    pub fn new(rep: Arc<LieAlgebraRep>, coeffs: Vec<f64>) -> Self {
        assert_eq!(coeffs.len(), rep.dim_g(), "one coefficient per generator");
        let mut matrix = CMat::zeros(rep.dim_r(), rep.dim_r());
        for (a, &x) in coeffs.iter().enumerate() {
            if x != 0.0 {
                matrix += rep.generator(a).scale(x);
            }
        }
        Self { rep, coeffs, matrix }
    }

    /// The zero element.
    pub fn zero(rep: Arc<LieAlgebraRep>) -> Self {
        let dim_g = rep.dim_g();
        Self::new(rep, vec![0.0; dim_g])
    }

    /// Project a Hermitian matrix onto the generator span:
    /// X^a = Tr(T^a M) / index. Errors when the residual of the projection
    /// exceeds `tol` (the matrix has a component outside the algebra).
    pub fn from_matrix(rep: Arc<LieAlgebraRep>, m: &CMat, tol: f64) -> Result<Self, AlgebraError> {
        let coeffs: Vec<f64> =
            (0..rep.dim_g()).map(|a| ((rep.generator(a) * m).trace() / cr(rep.index())).re).collect();
        let elem = Self::new(rep, coeffs);
        let residual = frob(&(&elem.matrix - m));
        if residual > tol {
            return Err(AlgebraError::NotInAlgebra { residual });
        }
        Ok(elem)
    }

    pub fn rep(&self) -> &Arc<LieAlgebraRep> {
        &self.rep
    }
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }
    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    /// ‖M − M†‖_F of the cached matrix.
    pub fn hermiticity_defect(&self) -> f64 {
        hermiticity_defect(&self.matrix)
    }

    /// exp(iX) as a group element.
    pub fn expi(&self) -> GroupElement {
        GroupElement::expi_matrix(self.rep.clone(), &self.matrix)
            .expect("algebra elements are Hermitian by construction")
    }
}

/// A Lie-group element (unitary matrix) in a fixed representation.
#[derive(Clone, Debug)]
pub struct GroupElement {
    rep: Arc<LieAlgebraRep>,
    matrix: CMat,
}

impl GroupElement {
    /// The identity.
    pub fn identity(rep: Arc<LieAlgebraRep>) -> Self {
        let n = rep.dim_r();
        Self { rep, matrix: ident(n) }
    }

    /// Wrap a matrix without a unitarity gate; the defect stays queryable
    /// through [`GroupElement::unitarity_defect`]. Long products accumulate
    /// roundoff, and the Euler evaluator is non-unitary by design, so the
    /// budget (1e−9 for ~10⁵ exponential factors) is asserted where results
    /// are consumed, not here.
    pub fn from_matrix(rep: Arc<LieAlgebraRep>, matrix: CMat) -> Self {
        assert_eq!(matrix.nrows(), rep.dim_r());
        Self { rep, matrix }
    }

    /// exp(iX) for Hermitian X, unitary to eigendecomposition roundoff.
    pub fn expi_matrix(rep: Arc<LieAlgebraRep>, x: &CMat) -> Result<Self, AlgebraError> {
        let matrix = linalg::expi(x, 1e-10)?;
        Ok(Self { rep, matrix })
    }

    pub fn rep(&self) -> &Arc<LieAlgebraRep> {
        &self.rep
    }
    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    /// ‖U†U − I‖_F.
    pub fn unitarity_defect(&self) -> f64 {
        unitarity_defect(&self.matrix)
    }

    /// U† — the inverse up to the unitarity defect.
    pub fn inverse(&self) -> Self {
        Self { rep: self.rep.clone(), matrix: dagger(&self.matrix) }
    }

    /// Group multiplication (self · other; the left factor acts last).
    pub fn mul(&self, other: &GroupElement) -> Self {
        Self { rep: self.rep.clone(), matrix: &self.matrix * &other.matrix }
    }

    /// Project back to the nearest unitary matrix (polar decomposition).
    /// Off by default everywhere; offered for long-product experiments.
    pub fn polar_unitarized(&self) -> Result<Self, AlgebraError> {
        Ok(Self { rep: self.rep.clone(), matrix: linalg::polar_unitarize(&self.matrix)? })
    }
}

/// Principal unitary square root V of U (V² = U), with a branch warning when
/// an eigenvalue of U sits on the cut at −1.
pub fn unitary_sqrt(u: &GroupElement) -> Result<(GroupElement, bool), AlgebraError> {
    let (m, warn) = linalg::unitary_sqrt(u.matrix(), 1e-9)?;
    Ok((GroupElement::from_matrix(u.rep().clone(), m), warn))
}
