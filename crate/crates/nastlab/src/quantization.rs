//! Finite, testable cores of the two path-integral constructions.
//!
//! Holomorphic side: the algebra acts on a truncated Fock space through
//! T̂^a = T^a_{kl} a_k† a_l (bosonic or fermionic), the Schrödinger problem
//! i ż = −ẋ·A z evolves with Ĥ = −ẋⁱA_i^a T̂^a, the number operator is a
//! constant of motion ([N̂, Ĥ] = 0 exactly), and the one-particle block of
//! the Fock evolution reproduces the defining-representation parallel
//! transport at matched discretization — the finite content of the
//! holomorphic path integral once every Gaussian integral is done by
//! resolution of the identity.
//!
//! Coherent-state side (su(2) spin j): |g⟩ = D^j(φ,θ,ψ)|j,j⟩ with
//! D = e^{−iφJ₃}e^{−iθJ₂}e^{−iψJ₃}, the resolution of unity
//! ∫|g⟩dμ⟨g| = I under dμ = (2j+1)·sinθ dθ dφ dψ/(16π²) (ψ runs to 4π to
//! cover half-integer j; the normalization is forced — any other constant
//! fails the identity), and the expectation reduction
//! ⟨R|K|R⟩ = (1/κ)Tr(m·H K) that collapses the coherent-state Lagrangian
//! L = ⟨R|i g†ġ + g†Ag|R⟩ to its Cartan-projected form.
//!
//! Topological action: for any smooth z-field the line form i∮ z̄ D_t z and
//! the surface form ∫ (i Dz̄ ∧ Dz + z̄ F z) are the same functional — the
//! integrand identity behind the holomorphic Stokes statement — checked
//! here by two independent quadratures.

use crate::algebra::{AlgebraElement, AlgebraError, Group, GroupElement, LieAlgebraRep};
use crate::fields::{field_strength, Connection, FieldError, DEFAULT_FD_STEP};
use crate::linalg::{dagger, expi, frob, gauss_legendre, ident, C64, CMat, CVec, I, LinalgError};
use crate::transport::{Method, PathSpec, Segment, Transport};
use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

/// Finite-difference step for ∂z and ġ in the action and Lagrangian checks.
pub const DEFAULT_DERIV_STEP: f64 = 1e-5;

#[derive(Debug, Error)]
pub enum QuantError {
    #[error("coherent-state quadrature is su(2)-only, got {0}")]
    NotSu2(Group),
    #[error("coherent-state quadrature supports 2j ≤ {max}, got 2j = {got}")]
    SpinTooLarge { got: u32, max: u32 },
    #[error("quadrature defect {defect:.3e} grew from {coarse:.3e} on the coarser grid — integrand too rough")]
    NotRefining { defect: f64, coarse: f64 },
    #[error("quadrature defect {defect:.3e} drops to {refined:.3e} on refinement — order too coarse for this spin")]
    OrderTooCoarse { defect: f64, refined: f64 },
    #[error("operation needs bosonic statistics")]
    NeedsBosonic,
    #[error("z-field dimension {got} does not match the representation dimension {want}")]
    BadFieldDimension { got: usize, want: usize },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// One named comparison with its acceptance tolerance, the row format the
/// CLI serializes.
#[derive(Clone, Debug)]
pub struct CheckRow {
    pub check_name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub error: f64,
    pub tol: f64,
}

impl CheckRow {
    pub fn pair(name: &str, lhs: f64, rhs: f64, tol: f64) -> Self {
        Self { check_name: name.to_string(), lhs, rhs, error: (lhs - rhs).abs(), tol }
    }
    /// A defect compared against zero.
    pub fn defect(name: &str, defect: f64, tol: f64) -> Self {
        Self { check_name: name.to_string(), lhs: defect, rhs: 0.0, error: defect, tol }
    }
    pub fn pass(&self) -> bool {
        self.error <= self.tol
    }
}

/// Exchange statistics of the auxiliary oscillators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Statistics {
    Bosonic,
    Fermionic,
}

impl fmt::Display for Statistics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Statistics::Bosonic => write!(f, "bosonic"),
            Statistics::Fermionic => write!(f, "fermionic"),
        }
    }
}

impl std::str::FromStr for Statistics {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "bosonic" | "boson" => Ok(Statistics::Bosonic),
            "fermionic" | "fermion" => Ok(Statistics::Fermionic),
            other => Err(format!("unknown statistics {other:?}")),
        }
    }
}

/// Fock space over d = dim R oscillator modes, truncated at total
/// occupation Σk ≤ n_max. States are enumerated vacuum first, then by
/// particle number; within a number sector mode 0 fills first.
#[derive(Clone, Debug)]
pub struct FockSpace {
    rep: Arc<LieAlgebraRep>,
    n_max: usize,
    statistics: Statistics,
    basis: Vec<Vec<u8>>,
    index: HashMap<Vec<u8>, usize>,
}

fn enumerate_occupations(out: &mut Vec<Vec<u8>>, cur: &mut Vec<u8>, mode: usize, left: usize, fermionic: bool) {
    if mode == cur.len() {
        out.push(cur.clone());
        return;
    }
    let cap = if fermionic { left.min(1) } else { left };
    for k in 0..=cap {
        cur[mode] = k as u8;
        enumerate_occupations(out, cur, mode + 1, left - k, fermionic);
    }
    cur[mode] = 0;
}

impl FockSpace {
    pub fn new(rep: Arc<LieAlgebraRep>, n_max: usize, statistics: Statistics) -> Self {
        let d = rep.dim_r();
        let mut basis = Vec::new();
        let mut cur = vec![0u8; d];
        enumerate_occupations(&mut basis, &mut cur, 0, n_max, statistics == Statistics::Fermionic);
        basis.sort_by(|a, b| {
            let (na, nb) = (a.iter().map(|&k| k as usize).sum::<usize>(), b.iter().map(|&k| k as usize).sum::<usize>());
            na.cmp(&nb).then(b.cmp(a))
        });
        let index = basis.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
        Self { rep, n_max, statistics, basis, index }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }
    pub fn rep(&self) -> &Arc<LieAlgebraRep> {
        &self.rep
    }
    pub fn n_max(&self) -> usize {
        self.n_max
    }
    pub fn statistics(&self) -> Statistics {
        self.statistics
    }
    pub fn basis(&self) -> &[Vec<u8>] {
        &self.basis
    }

    /// Indices of the single-excitation states, ordered by mode.
    pub fn one_particle_indices(&self) -> Vec<usize> {
        let d = self.rep.dim_r();
        (0..d)
            .map(|k| {
                let mut occ = vec![0u8; d];
                occ[k] = 1;
                self.index[&occ]
            })
            .collect()
    }

    /// Indices of the N-particle sector.
    pub fn number_sector_indices(&self, n: usize) -> Vec<usize> {
        self.basis
            .iter()
            .enumerate()
            .filter(|(_, occ)| occ.iter().map(|&k| k as usize).sum::<usize>() == n)
            .map(|(i, _)| i)
            .collect()
    }

    /// a_c† a_a |state⟩ = coeff · |state'⟩, None when annihilated.
    fn hop(&self, idx: usize, create: usize, annihilate: usize) -> Option<(usize, f64)> {
        let occ = &self.basis[idx];
        match self.statistics {
            Statistics::Bosonic => {
                let kl = occ[annihilate] as f64;
                if kl == 0.0 {
                    return None;
                }
                if create == annihilate {
                    return Some((idx, kl));
                }
                let kk = occ[create] as f64;
                let mut new = occ.clone();
                new[annihilate] -= 1;
                new[create] += 1;
                Some((self.index[&new], (kl * (kk + 1.0)).sqrt()))
            }
            Statistics::Fermionic => {
                if occ[annihilate] == 0 {
                    return None;
                }
                let mut new = occ.clone();
                let mut sign = if new[..annihilate].iter().map(|&k| k as u32).sum::<u32>() % 2 == 1 {
                    -1.0
                } else {
                    1.0
                };
                new[annihilate] = 0;
                if new[create] == 1 {
                    return None;
                }
                if new[..create].iter().map(|&k| k as u32).sum::<u32>() % 2 == 1 {
                    sign = -sign;
                }
                new[create] = 1;
                Some((self.index[&new], sign))
            }
        }
    }
}

/// Second quantization of a one-body matrix: Σ_{kl} h_{kl} a_k† a_l.
pub fn fock_bilinear(space: &FockSpace, h: &CMat) -> CMat {
    let d = space.rep().dim_r();
    assert_eq!(h.nrows(), d, "one-body matrix must live in the defining rep");
    let dim = space.dim();
    let mut out = CMat::zeros(dim, dim);
    for j in 0..dim {
        for k in 0..d {
            for l in 0..d {
                let hkl = h[(k, l)];
                if hkl.norm_sqr() == 0.0 {
                    continue;
                }
                if let Some((i, coeff)) = space.hop(j, k, l) {
                    out[(i, j)] += hkl * coeff;
                }
            }
        }
    }
    out
}

/// T̂^a = T^a_{kl} a_k† a_l for every generator; number-conserving, so the
/// truncated space is exactly invariant and the commutation relations hold
/// without truncation error.
pub fn fock_generators(space: &FockSpace) -> Vec<CMat> {
    space.rep().generators().iter().map(|t| fock_bilinear(space, t)).collect()
}

/// N̂ = Σ_k a_k† a_k (diagonal in the occupation basis).
pub fn number_operator(space: &FockSpace) -> CMat {
    let diag: Vec<C64> = space
        .basis()
        .iter()
        .map(|occ| C64::new(occ.iter().map(|&k| k as f64).sum(), 0.0))
        .collect();
    CMat::from_diagonal(&CVec::from_vec(diag))
}

/// Evolve i d|Φ⟩/dt = Ĥ|Φ⟩ with Ĥ(t) = −ẋⁱA_i^a T̂^a on the truncated Fock
/// space and return the one-particle block ⟨1_k|U|1_l⟩; at matched steps
/// and method it reproduces [`crate::transport::path_ordered_exp`] in the
/// defining representation (the discretizations are algebraically equal).
pub fn one_particle_evolution(
    space: &FockSpace,
    conn: &Connection,
    path: &PathSpec,
    steps: usize,
    method: Method,
) -> Result<CMat, QuantError> {
    assert!(steps >= 1, "need at least one step per segment");
    let dim = space.dim();
    let mut u = ident(dim);
    let eps = 1.0 / steps as f64;
    for seg in path.segments() {
        for k in 1..=steps {
            let factor = match method {
                Method::Euler => {
                    let t = (k - 1) as f64 * eps;
                    let (x, y) = seg.at(t);
                    let (vx, vy) = seg.velocity(t);
                    ident(dim) + fock_bilinear(space, &conn.along(x, y, vx, vy)).scale(eps) * I
                }
                Method::Midpoint => {
                    let t = (k as f64 - 0.5) * eps;
                    let (x, y) = seg.at(t);
                    let (vx, vy) = seg.velocity(t);
                    expi(&fock_bilinear(space, &conn.along(x, y, vx, vy)).scale(eps), 1e-9)?
                }
            };
            u = factor * u;
        }
    }
    let idx = space.one_particle_indices();
    let d = space.rep().dim_r();
    Ok(CMat::from_fn(d, d, |k, l| u[(idx[k], idx[l])]))
}

fn factorial(n: u8) -> f64 {
    (1..=n as u64).map(|k| k as f64).product::<f64>().max(1.0)
}

/// Truncated bosonic coherent vector |z⟩ = Σ_{Σk ≤ n_max} Π z_i^{k_i}/√(k_i!) |k⟩.
pub fn truncated_coherent_vector(space: &FockSpace, z: &CVec) -> Result<CVec, QuantError> {
    if space.statistics() != Statistics::Bosonic {
        return Err(QuantError::NeedsBosonic);
    }
    let d = space.rep().dim_r();
    if z.len() != d {
        return Err(QuantError::BadFieldDimension { got: z.len(), want: d });
    }
    let comps: Vec<C64> = space
        .basis()
        .iter()
        .map(|occ| {
            let mut c = C64::new(1.0, 0.0);
            for (i, &k) in occ.iter().enumerate() {
                c *= z[i].powu(k as u32) / factorial(k).sqrt();
            }
            c
        })
        .collect();
    Ok(CVec::from_vec(comps))
}

/// ⟨z̄|z⟩ on the truncation vs e^{z̄z}, with the leading tail bound
/// |z|^{2(n_max+1)}/(n_max+1)! it must respect.
pub fn holomorphic_inner_product_check(
    space: &FockSpace,
    z: &CVec,
) -> Result<(CheckRow, f64), QuantError> {
    let v = truncated_coherent_vector(space, z)?;
    let lhs = v.dotc(&v).re;
    let zz = z.dotc(z).re;
    let rhs = zz.exp();
    let tail = zz.powi(space.n_max() as i32 + 1) / factorial(space.n_max() as u8 + 1);
    // the leading tail term under-counts the geometric remainder by ≤ 1.085
    // for |z| ≤ 1, hence the 1.1 factor
    let row = CheckRow::pair("holomorphic_inner_product", lhs, rhs, 1.1 * tail + 1e-15);
    Ok((row, tail))
}

// ---------------------------------------------------------------------------
// su(2) coherent states
// ---------------------------------------------------------------------------

fn su2_spin_rep(rep: &LieAlgebraRep) -> Result<u32, QuantError> {
    if rep.group() != Group::Su2 {
        return Err(QuantError::NotSu2(rep.group()));
    }
    Ok(rep.dim_r() as u32 - 1)
}

/// D^j(φ,θ,ψ) = e^{−iφJ₃} e^{−iθJ₂} e^{−iψJ₃}.
pub fn wigner_d(rep: &LieAlgebraRep, phi: f64, theta: f64, psi: f64) -> Result<CMat, QuantError> {
    su2_spin_rep(rep)?;
    let j2 = rep.generator(1);
    let j3 = rep.generator(2);
    let d = expi(&j3.scale(-phi), 1e-10)? * expi(&j2.scale(-theta), 1e-10)? * expi(&j3.scale(-psi), 1e-10)?;
    Ok(d)
}

/// |g,j⟩ = D^j(φ,θ,ψ)|j,j⟩, built on the Cartan reference (highest-weight)
/// state.
pub fn coherent_state(rep: &LieAlgebraRep, phi: f64, theta: f64, psi: f64) -> Result<CVec, QuantError> {
    Ok(wigner_d(rep, phi, theta, psi)? * &rep.cartan().reference_state)
}

/// ∫ |g⟩ dμ ⟨g| by Gauss-Legendre in cosθ and periodic trapezoids in φ, ψ;
/// dμ = (2j+1) sinθ dθ dφ dψ / (16π²).
pub fn resolution_of_unity(
    rep: &LieAlgebraRep,
    orders: (usize, usize, usize),
) -> Result<CMat, QuantError> {
    let twice_j = su2_spin_rep(rep)?;
    let (n_theta, n_phi, n_psi) = orders;
    assert!(n_theta >= 1 && n_phi >= 1 && n_psi >= 1, "quadrature orders must be positive");
    let dim = rep.dim_r();
    let (nodes, weights) = gauss_legendre(n_theta);
    let (w_phi, w_psi) = (2.0 * PI / n_phi as f64, 4.0 * PI / n_psi as f64);
    let mut acc = CMat::zeros(dim, dim);
    for (u, wu) in nodes.iter().zip(&weights) {
        let theta = u.acos();
        for i_phi in 0..n_phi {
            let phi = 2.0 * PI * i_phi as f64 / n_phi as f64;
            for i_psi in 0..n_psi {
                let psi = 4.0 * PI * i_psi as f64 / n_psi as f64;
                let v = coherent_state(rep, phi, theta, psi)?;
                let w = wu * w_phi * w_psi;
                // rank-one update acc += w · v v†
                for r in 0..dim {
                    for c in 0..dim {
                        acc[(r, c)] += v[r] * v[c].conj() * w;
                    }
                }
            }
        }
    }
    Ok(acc.scale((twice_j as f64 + 1.0) / (16.0 * PI * PI)))
}

/// Overlap normalization plus the resolution-of-unity defect, with the
/// built-in refinement guard (the defect must not grow from half orders).
#[derive(Clone, Debug)]
pub struct CoherentUnityReport {
    pub twice_j: u32,
    pub orders: (usize, usize, usize),
    pub unity: CMat,
    pub defect: f64,
    pub overlap_rows: Vec<CheckRow>,
}

pub fn coherent_overlap_and_unity(
    rep: &LieAlgebraRep,
    orders: (usize, usize, usize),
) -> Result<CoherentUnityReport, QuantError> {
    let twice_j = su2_spin_rep(rep)?;
    if twice_j > 4 {
        return Err(QuantError::SpinTooLarge { got: twice_j, max: 4 });
    }
    let dim = rep.dim_r();
    let unity = resolution_of_unity(rep, orders)?;
    let defect = frob(&(&unity - ident(dim)));

    // a large defect is either aliasing (doubling the orders fixes it) or a
    // genuine failure; refuse the former instead of returning garbage
    if defect > 1e-8 {
        let fine = (2 * orders.0, 2 * orders.1, 2 * orders.2);
        let refined = frob(&(resolution_of_unity(rep, fine)? - ident(dim)));
        if refined < 0.5 * defect {
            return Err(QuantError::OrderTooCoarse { defect, refined });
        }
    }

    // ⟨g|g⟩ = 1 on a deterministic angle sample
    let mut overlap_rows = Vec::new();
    let mut worst = 0.0f64;
    for k in 0..100 {
        let t = k as f64;
        let (phi, theta, psi) = (
            2.0 * PI * (0.37 * t).fract(),
            PI * (0.61 * t + 0.17).fract(),
            4.0 * PI * (0.23 * t + 0.41).fract(),
        );
        let v = coherent_state(rep, phi, theta, psi)?;
        worst = worst.max((v.dotc(&v).re - 1.0).abs());
    }
    overlap_rows.push(CheckRow::defect("coherent_normalization_max_dev", worst, 1e-12));
    Ok(CoherentUnityReport { twice_j, orders, unity, defect, overlap_rows })
}

/// (⟨R|K|R⟩, (1/κ)·Tr(m·H·K)) — equal because the root parts of K vanish
/// between highest-weight states.
pub fn expectation_reduction_check(rep: &LieAlgebraRep, k: &AlgebraElement) -> (f64, f64) {
    let cartan = rep.cartan();
    let r = &cartan.reference_state;
    let braket = r.dotc(&(k.matrix() * r)).re;
    let dim = rep.dim_r();
    let mut mh = CMat::zeros(dim, dim);
    for (m_i, h_i) in cartan.highest_weight.iter().zip(&cartan.h) {
        mh += h_i.scale(*m_i);
    }
    let trace = (mh * k.matrix()).trace().re / cartan.kappa;
    (braket, trace)
}

// ---------------------------------------------------------------------------
// Topological action: surface vs line quadratures
// ---------------------------------------------------------------------------

/// A smooth auxiliary field z : ℝ² → ℂ^{dim R}.
pub type ZField = Arc<dyn Fn(f64, f64) -> CVec + Send + Sync>;

/// Both evaluations of the classical action for the loop ∂[0,1]².
#[derive(Clone, Debug)]
pub struct ActionPair {
    pub surface: C64,
    pub line: C64,
    pub difference: f64,
    pub grid: usize,
}

fn z_partials(z: &ZField, x: f64, y: f64, h: f64) -> (CVec, CVec) {
    let dx = ((z)(x + h, y) - (z)(x - h, y)).scale(0.5 / h);
    let dy = ((z)(x, y + h) - (z)(x, y - h)).scale(0.5 / h);
    (dx, dy)
}

/// i ∮ z̄ D_t z around ∂[0,1]² (CCW) with composite 2-point Gauss, n
/// subintervals per edge.
fn line_action(conn: &Connection, z: &ZField, n: usize, h: f64) -> C64 {
    let corners = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0), (0.0, 0.0)];
    let g = 0.5 / 3.0f64.sqrt();
    let mut total = C64::new(0.0, 0.0);
    for w in corners.windows(2) {
        let (p, q) = (w[0], w[1]);
        let (vx, vy) = (q.0 - p.0, q.1 - p.1);
        for cell in 0..n {
            for node in [-g, g] {
                let t = (cell as f64 + 0.5 + node) / n as f64;
                let (x, y) = (p.0 + t * vx, p.1 + t * vy);
                let zv = (z)(x, y);
                let (dzx, dzy) = z_partials(z, x, y, h);
                let zdot = dzx.scale(vx) + dzy.scale(vy);
                let a = conn.along(x, y, vx, vy);
                // i z̄ (ż − i Â z)
                let dtz = zdot - (&a * &zv) * I;
                total += I * zv.dotc(&dtz) * (0.5 / n as f64);
            }
        }
    }
    total
}

/// ∫ (i D_x z̄ D_y z − i D_y z̄ D_x z + z̄ F_{xy} z) dx dy over [0,1]² with
/// composite 2-point Gauss on an n×n grid.
fn surface_action(conn: &Connection, z: &ZField, n: usize, h: f64) -> C64 {
    let g = 0.5 / 3.0f64.sqrt();
    let mut total = C64::new(0.0, 0.0);
    let w2 = 0.25 / (n * n) as f64;
    for i in 0..n {
        for j in 0..n {
            for nx in [-g, g] {
                for ny in [-g, g] {
                    let x = (i as f64 + 0.5 + nx) / n as f64;
                    let y = (j as f64 + 0.5 + ny) / n as f64;
                    let zv = (z)(x, y);
                    let (dzx, dzy) = z_partials(z, x, y, h);
                    let (ax_el, ay_el) = conn.evaluate(x, y);
                    let (ax, ay) = (ax_el.matrix(), ay_el.matrix());
                    let dxz = dzx - (ax * &zv) * I;
                    let dyz = dzy - (ay * &zv) * I;
                    let f = field_strength(conn, x, y, DEFAULT_FD_STEP);
                    let curv = zv.dotc(&(f.matrix() * &zv));
                    let kinetic = I * (dxz.dotc(&dyz) - dyz.dotc(&dxz));
                    total += (kinetic + curv) * w2;
                }
            }
        }
    }
    total
}

/// The holomorphic Stokes identity at desk scale: both quadratures of the
/// classical action for the unit-square loop, with a refinement guard.
pub fn action_surface_vs_line(
    conn: &Connection,
    z: &ZField,
    grid_n: usize,
) -> Result<ActionPair, QuantError> {
    assert!(grid_n >= 4, "grid too coarse");
    let d = conn.rep().dim_r();
    let got = (z)(0.3, 0.7).len();
    if got != d {
        return Err(QuantError::BadFieldDimension { got, want: d });
    }
    let h = DEFAULT_DERIV_STEP;
    let pair = |n: usize| {
        let s = surface_action(conn, z, n, h);
        let l = line_action(conn, z, n, h);
        (s, l, (s - l).norm())
    };
    let (surface, line, difference) = pair(grid_n);
    let (_, _, coarse) = pair(grid_n / 2);
    if difference > 1e-6 && difference > coarse + 1e-12 {
        return Err(QuantError::NotRefining { defect: difference, coarse });
    }
    Ok(ActionPair { surface, line, difference, grid: grid_n })
}

// ---------------------------------------------------------------------------
// Coherent-state Lagrangian
// ---------------------------------------------------------------------------

/// L(t) computed two ways: ⟨R|X|R⟩ and (1/κ)Tr(m·H·X) for
/// X = i g†ġ + g†(ẋ·A)g.
#[derive(Clone, Debug)]
pub struct LagrangianSample {
    pub t: f64,
    pub bra_ket: f64,
    pub cartan_trace: f64,
}

/// Sample the coherent-state Lagrangian along a curve; ġ by central
/// differences with step `dt`.
pub fn coherent_lagrangian(
    conn: &Connection,
    seg: &Segment,
    g_path: &dyn Fn(f64) -> GroupElement,
    times: &[f64],
    dt: f64,
) -> Vec<LagrangianSample> {
    let rep = conn.rep().clone();
    times
        .iter()
        .map(|&t| {
            let g = g_path(t);
            let gdot = (g_path(t + dt).matrix() - g_path(t - dt).matrix()).scale(0.5 / dt);
            let gd = dagger(g.matrix());
            let (x, y) = seg.at(t);
            let (vx, vy) = seg.velocity(t);
            let a = conn.along(x, y, vx, vy);
            let x_mat = (&gd * &gdot) * I + gd * a * g.matrix();
            let k = AlgebraElement::from_matrix(rep.clone(), &x_mat, 1e-6)
                .unwrap_or_else(|_| AlgebraElement::zero(rep.clone()));
            let (bra_ket, cartan_trace) = expectation_reduction_check(&rep, &k);
            LagrangianSample { t, bra_ket, cartan_trace }
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Named check battery (CLI `checks` subcommand)
// ---------------------------------------------------------------------------

/// The module's identities as named rows, deterministic across runs.
pub fn standard_checks() -> Result<Vec<CheckRow>, QuantError> {
    use crate::algebra::{build_rep, RepLabel};
    use crate::transport::path_ordered_exp;

    let mut rows = Vec::new();
    let fund = build_rep(Group::Su2, RepLabel::Fundamental)?;
    let spin1 = build_rep(Group::Su2, RepLabel::Spin { twice_j: 2 })?;

    // Fock: one-particle block, closure, number conservation
    let space = FockSpace::new(fund.clone(), 2, Statistics::Bosonic);
    let gens = fock_generators(&space);
    let idx = space.one_particle_indices();
    let mut block_dev = 0.0f64;
    for (t_hat, t) in gens.iter().zip(fund.generators()) {
        let block = CMat::from_fn(2, 2, |k, l| t_hat[(idx[k], idx[l])]);
        block_dev = block_dev.max(frob(&(&block - t)));
    }
    rows.push(CheckRow::defect("fock_one_particle_block", block_dev, 1e-15));
    let comm = &gens[0] * &gens[1] - &gens[1] * &gens[0] - &gens[2] * I;
    rows.push(CheckRow::defect("fock_commutator_closure", frob(&comm), 1e-14));
    let h = CMat::from_row_slice(2, 2, &[
        C64::new(0.7, 0.0),
        C64::new(0.3, -0.4),
        C64::new(0.3, 0.4),
        C64::new(-0.2, 0.0),
    ]);
    let h_hat = fock_bilinear(&space, &h);
    let n_hat = number_operator(&space);
    rows.push(CheckRow::defect(
        "number_conservation",
        frob(&(&n_hat * &h_hat - &h_hat * &n_hat)),
        1e-15,
    ));

    // one-particle equivalence against transport, both statistics
    let conn = Connection::from_family(fund.clone(), "polynomial", &[0.8, -0.5, 0.3])?;
    let path = PathSpec::line((0.1, 0.2), (0.7, 0.9));
    let reference: Transport = path_ordered_exp(&conn, &path, 128, Method::Midpoint);
    for stats in [Statistics::Bosonic, Statistics::Fermionic] {
        let space = FockSpace::new(fund.clone(), 2, stats);
        let block = one_particle_evolution(&space, &conn, &path, 128, Method::Midpoint)?;
        rows.push(CheckRow::defect(
            &format!("one_particle_equivalence_{stats}"),
            frob(&(&block - reference.value.matrix())),
            1e-10,
        ));
    }

    // coherent states: resolution of unity and normalization
    let report = coherent_overlap_and_unity(&fund, (16, 16, 16))?;
    rows.push(CheckRow::defect("resolution_of_unity_j_half", report.defect, 1e-8));
    rows.extend(report.overlap_rows);

    // expectation reduction on a generic algebra element
    let k = AlgebraElement::new(spin1.clone(), vec![0.62, -0.41, 0.87]);
    let (lhs, rhs) = expectation_reduction_check(&spin1, &k);
    rows.push(CheckRow::pair("expectation_reduction_spin1", lhs, rhs, 1e-10));

    // action identity, free and interacting
    let zf: ZField = Arc::new(|x: f64, y: f64| {
        CVec::from_vec(vec![
            C64::new(0.3 + x * x - 0.2 * y, 0.4 * x * y),
            C64::new(0.1 * y * y, -0.3 + 0.5 * x),
        ])
    });
    let free = Connection::from_family(fund.clone(), "zero", &[])?;
    let pair = action_surface_vs_line(&free, &zf, 128)?;
    rows.push(CheckRow::pair("action_surface_vs_line_free", pair.surface.re, pair.line.re, 1e-6));
    let pair = action_surface_vs_line(&conn, &zf, 128)?;
    rows.push(CheckRow::pair(
        "action_surface_vs_line_polynomial",
        pair.surface.re,
        pair.line.re,
        1e-6,
    ));

    // coherent Lagrangian, two routes
    let seg = Segment::line((0.0, 0.0), (1.0, 0.4));
    let g_path = |t: f64| {
        let x = AlgebraElement::new(spin1.clone(), vec![0.4 * t, 0.3 * t * t, (0.7 * t).sin()]);
        x.expi()
    };
    let times: Vec<f64> = (1..=9).map(|k| 0.1 * k as f64).collect();
    let samples = coherent_lagrangian(&conn_in_rep(&conn, &spin1)?, &seg, &g_path, &times, DEFAULT_DERIV_STEP);
    let worst = samples
        .iter()
        .map(|s| (s.bra_ket - s.cartan_trace).abs())
        .fold(0.0f64, f64::max);
    rows.push(CheckRow::defect("coherent_lagrangian_two_routes", worst, 1e-8));

    // holomorphic inner product at n_max = 12
    let space = FockSpace::new(fund, 12, Statistics::Bosonic);
    let z = CVec::from_vec(vec![C64::new(0.5, -0.3), C64::new(-0.2, 0.55)]);
    let (row, _) = holomorphic_inner_product_check(&space, &z)?;
    rows.push(row);
    Ok(rows)
}

/// Rebuild a catalog connection in another representation (same family and
/// parameters).
fn conn_in_rep(conn: &Connection, rep: &Arc<LieAlgebraRep>) -> Result<Connection, QuantError> {
    Ok(Connection::from_family(rep.clone(), conn.family(), conn.params())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_rep, RepLabel};
    use crate::linalg::{cr, herm_eigen};
    use crate::transport::path_ordered_exp;
    use rand::Rng;
    use rand_chacha::{rand_core::SeedableRng, ChaCha8Rng};

    fn fund() -> Arc<LieAlgebraRep> {
        build_rep(Group::Su2, RepLabel::Fundamental).unwrap()
    }

    fn binomial(n: usize, k: usize) -> usize {
        if k > n {
            return 0;
        }
        (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn fock_dimensions_match_counting() {
        let su3 = build_rep(Group::Su3, RepLabel::Fundamental).unwrap();
        for (rep, n_max) in [(fund(), 2usize), (fund(), 4), (su3.clone(), 3)] {
            let d = rep.dim_r();
            let bos = FockSpace::new(rep.clone(), n_max, Statistics::Bosonic);
            assert_eq!(bos.dim(), binomial(n_max + d, d), "bosonic C(n_max+d, d)");
            let fer = FockSpace::new(rep, n_max, Statistics::Fermionic);
            let want: usize = (0..=n_max.min(d)).map(|k| binomial(d, k)).sum();
            assert_eq!(fer.dim(), want, "fermionic Σ C(d,k)");
        }
    }

    #[test]
    fn one_particle_block_is_the_defining_rep_exactly() {
        for stats in [Statistics::Bosonic, Statistics::Fermionic] {
            let space = FockSpace::new(fund(), 2, stats);
            let gens = fock_generators(&space);
            let idx = space.one_particle_indices();
            for (t_hat, t) in gens.iter().zip(space.rep().generators()) {
                for k in 0..2 {
                    for l in 0..2 {
                        assert_eq!(t_hat[(idx[k], idx[l])], t[(k, l)], "{stats} block is exact");
                    }
                }
            }
        }
    }

    #[test]
    fn fock_commutators_close_on_the_truncation() {
        // fermionic and n_max = 1 bosonic coefficients are ±1: exact zero
        for (stats, n_max) in [(Statistics::Fermionic, 2usize), (Statistics::Bosonic, 1)] {
            let space = FockSpace::new(fund(), n_max, stats);
            let g = fock_generators(&space);
            let defect = frob(&(&g[0] * &g[1] - &g[1] * &g[0] - &g[2] * I));
            assert_eq!(defect, 0.0, "{stats} n_max = {n_max}: exact closure");
        }
        // bosonic n_max = 2 meets √2 factors: closes to roundoff
        let space = FockSpace::new(fund(), 2, Statistics::Bosonic);
        let g = fock_generators(&space);
        let defect = frob(&(&g[0] * &g[1] - &g[1] * &g[0] - &g[2] * I));
        assert!(defect < 1e-14, "[T̂¹,T̂²] = iT̂³: {defect}");
    }

    #[test]
    fn number_operator_commutes_with_any_bilinear_exactly() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for stats in [Statistics::Bosonic, Statistics::Fermionic] {
            let space = FockSpace::new(fund(), 3, stats);
            let h = CMat::from_fn(2, 2, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
            let h_hat = fock_bilinear(&space, &h);
            let n_hat = number_operator(&space);
            let comm = &n_hat * &h_hat - &h_hat * &n_hat;
            assert_eq!(frob(&comm), 0.0, "[N̂, Ĥ] = 0 as a matrix identity ({stats})");
        }
    }

    #[test]
    fn two_particle_casimir_block_matches_symmetric_tensor_decomposition() {
        // bosonic su2 fundamental: N = 2 sector is the symmetric square =
        // triplet, Casimir {2,2,2}; adjoining the vacuum line gives {0,2,2,2}
        let space = FockSpace::new(fund(), 2, Statistics::Bosonic);
        let gens = fock_generators(&space);
        let dim = space.dim();
        let mut c2 = CMat::zeros(dim, dim);
        for g in &gens {
            c2 += g * g;
        }
        let two = space.number_sector_indices(2);
        assert_eq!(two.len(), 3);
        let block = CMat::from_fn(3, 3, |r, c| c2[(two[r], two[c])]);
        let (vals, _) = herm_eigen(&block, 1e-12).unwrap();
        for v in vals.iter() {
            assert!((v - 2.0).abs() < 1e-12, "symmetric square is spin 1: {vals:?}");
        }
        let even: Vec<usize> =
            space.number_sector_indices(0).into_iter().chain(two).collect();
        let block = CMat::from_fn(4, 4, |r, c| c2[(even[r], even[c])]);
        let (vals, _) = herm_eigen(&block, 1e-12).unwrap();
        let mut sorted: Vec<f64> = vals.iter().copied().collect();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (got, want) in sorted.iter().zip([0.0, 2.0, 2.0, 2.0]) {
            assert!((got - want).abs() < 1e-12, "vacuum ⊕ two-particle: {sorted:?}");
        }
    }

    #[test]
    fn one_particle_evolution_matches_transport_at_equal_discretization() {
        let conn = Connection::from_family(fund(), "polynomial", &[0.8, -0.5, 0.3]).unwrap();
        let path = PathSpec::polyline(&[(0.0, 0.0), (0.6, 0.1), (0.4, 0.8)]).unwrap();
        for method in [Method::Euler, Method::Midpoint] {
            let reference = path_ordered_exp(&conn, &path, 256, method);
            for stats in [Statistics::Bosonic, Statistics::Fermionic] {
                let space = FockSpace::new(fund(), 2, stats);
                let block = one_particle_evolution(&space, &conn, &path, 256, method).unwrap();
                let dev = frob(&(&block - reference.value.matrix()));
                assert!(dev < 1e-10, "{stats} {method:?}: {dev}");
            }
        }
    }

    #[test]
    fn zero_field_evolution_is_the_identity_block() {
        let conn = Connection::from_family(fund(), "zero", &[]).unwrap();
        let space = FockSpace::new(fund(), 2, Statistics::Bosonic);
        let block =
            one_particle_evolution(&space, &conn, &PathSpec::line((0.0, 0.0), (1.0, 1.0)), 64, Method::Euler)
                .unwrap();
        assert_eq!(frob(&(&block - ident(2))), 0.0, "Euler factors stay exactly I");
    }

    #[test]
    fn statistics_agree_on_the_one_particle_sector() {
        let conn = Connection::from_family(fund(), "constant_noncommuting", &[0.4, 0.7]).unwrap();
        let path = PathSpec::unit_square_ccw();
        let bos = FockSpace::new(fund(), 2, Statistics::Bosonic);
        let fer = FockSpace::new(fund(), 2, Statistics::Fermionic);
        // Euler factors conserve number bitwise: the blocks match exactly
        let ub = one_particle_evolution(&bos, &conn, &path, 128, Method::Euler).unwrap();
        let uf = one_particle_evolution(&fer, &conn, &path, 128, Method::Euler).unwrap();
        assert_eq!(frob(&(&ub - &uf)), 0.0, "identical one-particle physics");
        // midpoint only adds per-factor eigendecomposition roundoff
        let ub = one_particle_evolution(&bos, &conn, &path, 128, Method::Midpoint).unwrap();
        let uf = one_particle_evolution(&fer, &conn, &path, 128, Method::Midpoint).unwrap();
        assert!(frob(&(&ub - &uf)) < 1e-11, "identical one-particle physics");
    }

    #[test]
    fn truncated_inner_product_respects_the_tail_bound() {
        let space = FockSpace::new(fund(), 12, Statistics::Bosonic);
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..25 {
            let mut z = CVec::from_fn(2, |_, _| {
                C64::new(rng.gen_range(-0.7..0.7), rng.gen_range(-0.7..0.7))
            });
            if z.norm() > 1.0 {
                z = z.scale(0.99 / z.norm());
            }
            let (row, tail) = holomorphic_inner_product_check(&space, &z).unwrap();
            // the row's tolerance is the leading tail term with the 1.1
            // geometric-remainder factor for |z| ≤ 1
            assert!(row.pass(), "⟨z̄|z⟩ truncation: error {} vs tail {tail}", row.error);
        }
        // fermionic spaces have no coherent vector of this kind
        let fer = FockSpace::new(fund(), 2, Statistics::Fermionic);
        let z = CVec::from_vec(vec![cr(0.1), cr(0.2)]);
        assert!(matches!(truncated_coherent_vector(&fer, &z), Err(QuantError::NeedsBosonic)));
    }

    #[test]
    fn coherent_states_are_normalized() {
        for twice_j in [1u32, 2, 3, 4] {
            let rep = build_rep(Group::Su2, RepLabel::Spin { twice_j }).unwrap();
            let report = coherent_overlap_and_unity(&rep, (16, 16, 16)).unwrap();
            assert!(report.overlap_rows[0].error < 1e-12, "⟨g|g⟩ = 1 at 2j = {twice_j}");
        }
    }

    #[test]
    fn resolution_of_unity_is_machine_exact_at_sixteen_nodes() {
        for twice_j in [0u32, 1, 2, 3, 4] {
            let rep = build_rep(Group::Su2, RepLabel::Spin { twice_j }).unwrap();
            let report = coherent_overlap_and_unity(&rep, (16, 16, 16)).unwrap();
            assert!(
                report.defect <= 1e-8,
                "∫|g⟩dμ⟨g| = I at 2j = {twice_j}: defect {}",
                report.defect
            );
            assert!(report.defect < 1e-12, "quadrature is exact here: {}", report.defect);
        }
    }

    #[test]
    fn resolution_error_decreases_under_refinement() {
        for twice_j in [2u32, 4] {
            let rep = build_rep(Group::Su2, RepLabel::Spin { twice_j }).unwrap();
            let mut prev = f64::INFINITY;
            for n in [3usize, 6, 12] {
                let unity = resolution_of_unity(&rep, (n, n, n)).unwrap();
                let defect = frob(&(unity - ident(rep.dim_r())));
                assert!(defect <= prev + 1e-13, "monotone at 2j = {twice_j}, order {n}");
                prev = defect;
            }
        }
        // too-coarse φ grid aliases the m = ±2j harmonics: caught and refused
        let rep = build_rep(Group::Su2, RepLabel::Spin { twice_j: 4 }).unwrap();
        let err = coherent_overlap_and_unity(&rep, (3, 3, 3));
        assert!(matches!(err, Err(QuantError::OrderTooCoarse { .. })));
    }

    #[test]
    fn spin_cap_and_group_guard() {
        let rep = build_rep(Group::Su2, RepLabel::Spin { twice_j: 6 }).unwrap();
        assert!(matches!(
            coherent_overlap_and_unity(&rep, (8, 8, 8)),
            Err(QuantError::SpinTooLarge { got: 6, max: 4 })
        ));
        let su3 = build_rep(Group::Su3, RepLabel::Fundamental).unwrap();
        assert!(matches!(
            coherent_overlap_and_unity(&su3, (8, 8, 8)),
            Err(QuantError::NotSu2(Group::Su3))
        ));
    }

    #[test]
    fn expectation_reduction_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for rep in [
            fund(),
            build_rep(Group::Su2, RepLabel::Spin { twice_j: 3 }).unwrap(),
            build_rep(Group::Su3, RepLabel::Fundamental).unwrap(),
        ] {
            // K = first Cartan generator → both sides give m₁
            let c = rep.cartan();
            let mut coeffs = vec![0.0; rep.dim_g()];
            // locate H₁ among the generators: su2 index 2, su3 index 2
            coeffs[2] = 1.0;
            let k = AlgebraElement::new(rep.clone(), coeffs);
            let (lhs, rhs) = expectation_reduction_check(&rep, &k);
            assert!((lhs - c.highest_weight[0]).abs() < 1e-10, "⟨R|H₁|R⟩ = m₁");
            assert!((lhs - rhs).abs() < 1e-10);

            // K = E_α + E_{−α} → zero
            let e_sym = &c.e_plus[0] + &c.e_minus[0];
            let k = AlgebraElement::from_matrix(rep.clone(), &e_sym, 1e-8).unwrap();
            let (lhs, rhs) = expectation_reduction_check(&rep, &k);
            assert!(lhs.abs() < 1e-10 && rhs.abs() < 1e-10, "root parts vanish");

            // random Hermitian combination
            for _ in 0..10 {
                let coeffs: Vec<f64> = (0..rep.dim_g()).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let k = AlgebraElement::new(rep.clone(), coeffs);
                let (lhs, rhs) = expectation_reduction_check(&rep, &k);
                assert!((lhs - rhs).abs() < 1e-10, "{} {}: {lhs} vs {rhs}", rep.group(), rep.label());
            }
        }
    }

    fn polynomial_z() -> ZField {
        Arc::new(|x: f64, y: f64| {
            CVec::from_vec(vec![
                C64::new(0.3 + x * x - 0.2 * y, 0.4 * x * y),
                C64::new(0.1 * y * y - 0.5 * x * y, -0.3 + 0.5 * x + 0.2 * y * y),
            ])
        })
    }

    #[test]
    fn action_vanishes_for_zero_field() {
        let conn = Connection::from_family(fund(), "zero", &[]).unwrap();
        let zf: ZField = Arc::new(|_, _| CVec::from_vec(vec![cr(0.0), cr(0.0)]));
        let pair = action_surface_vs_line(&conn, &zf, 16).unwrap();
        assert!(pair.surface.norm() < 1e-14 && pair.line.norm() < 1e-14, "z ≡ 0 → (0, 0)");
    }

    #[test]
    fn action_identity_free_case() {
        // A = 0: i∮ z̄ ∂_t z = i∫∫ (∂z̄ ∧ ∂z); for this low-degree z both
        // quadratures converge by n = 16 and sit at the finite-difference
        // floor, and the integral evaluates in closed form to −63/100
        let conn = Connection::from_family(fund(), "zero", &[]).unwrap();
        let zf = polynomial_z();
        for n in [16usize, 32, 64] {
            let pair = action_surface_vs_line(&conn, &zf, n).unwrap();
            assert!(pair.difference <= 1e-10, "free action identity at n = {n}: {}", pair.difference);
            assert!((pair.surface.re + 0.63).abs() < 1e-9, "S = −63/100: {}", pair.surface);
            assert!(pair.surface.im.abs() < 1e-9 && pair.line.im.abs() < 1e-9);
        }
    }

    #[test]
    fn action_identity_non_abelian_case() {
        let conn = Connection::from_family(fund(), "polynomial", &[0.8, -0.5, 0.3]).unwrap();
        let zf = polynomial_z();
        // composite 2-point Gauss is fourth order: each doubling buys ~16×
        let diffs: Vec<f64> = [16usize, 32, 64]
            .iter()
            .map(|&n| action_surface_vs_line(&conn, &zf, n).unwrap().difference)
            .collect();
        assert!(
            diffs[1] < 0.2 * diffs[0] && diffs[2] < 0.2 * diffs[1],
            "fourth-order refinement: {diffs:?}"
        );
        let pair = action_surface_vs_line(&conn, &zf, 256).unwrap();
        assert!(
            pair.difference <= 1e-10,
            "surface {} vs line {}: diff {}",
            pair.surface,
            pair.line,
            pair.difference
        );
        // closed loop: the action is real up to quadrature error
        assert!(pair.surface.im.abs() < 1e-8 && pair.line.im.abs() < 1e-8);
    }

    #[test]
    fn action_rejects_mismatched_field_dimension() {
        let conn = Connection::from_family(fund(), "zero", &[]).unwrap();
        let zf: ZField = Arc::new(|_, _| CVec::from_vec(vec![cr(1.0)]));
        assert!(matches!(
            action_surface_vs_line(&conn, &zf, 16),
            Err(QuantError::BadFieldDimension { got: 1, want: 2 })
        ));
    }

    #[test]
    fn lagrangian_constant_cases() {
        let spin1 = build_rep(Group::Su2, RepLabel::Spin { twice_j: 2 }).unwrap();
        // g ≡ I, Â = αT³ constant along the path → L = ⟨R|αT³|R⟩ = α·j
        let alpha = 0.6;
        let rep = spin1.clone();
        let conn = Connection::from_closures(
            spin1.clone(),
            "constant_t3",
            vec![alpha],
            Arc::new(move |_x, _y| {
                let ax = AlgebraElement::new(rep.clone(), vec![0.0, 0.0, alpha]);
                let ay = AlgebraElement::zero(rep.clone());
                (ax, ay)
            }),
            None,
        );
        let seg = Segment::line((0.0, 0.0), (1.0, 0.0));
        let g_id = {
            let rep = spin1.clone();
            move |_t: f64| GroupElement::identity(rep.clone())
        };
        let times = [0.2, 0.5, 0.8];
        for s in coherent_lagrangian(&conn, &seg, &g_id, &times, DEFAULT_DERIV_STEP) {
            assert!((s.bra_ket - alpha).abs() < 1e-10, "L = α·j = {alpha}: {}", s.bra_ket);
            assert!((s.bra_ket - s.cartan_trace).abs() < 1e-10);
        }

        // A = 0, g(t) = exp(itT³) → X = ig†ġ = −T³, L = −j
        let zero = Connection::from_family(spin1.clone(), "zero", &[]).unwrap();
        let g_rot = {
            let rep = spin1.clone();
            move |t: f64| AlgebraElement::new(rep.clone(), vec![0.0, 0.0, t]).expi()
        };
        for s in coherent_lagrangian(&zero, &seg, &g_rot, &times, DEFAULT_DERIV_STEP) {
            assert!((s.bra_ket + 1.0).abs() < 1e-8, "L = −j = −1: {}", s.bra_ket);
            assert!((s.bra_ket - s.cartan_trace).abs() < 1e-8);
        }
    }

    #[test]
    fn lagrangian_routes_agree_for_random_smooth_paths() {
        for rep in [fund(), build_rep(Group::Su3, RepLabel::Fundamental).unwrap()] {
            let conn = Connection::from_family(rep.clone(), "polynomial", &[0.5, 0.4, -0.3]).unwrap();
            let seg = Segment::line((0.1, 0.0), (0.8, 0.7));
            let mut rng = ChaCha8Rng::seed_from_u64(23);
            let amps: Vec<f64> = (0..rep.dim_g()).map(|_| rng.gen_range(-0.8..0.8)).collect();
            let g_path = {
                let rep = rep.clone();
                let amps = amps.clone();
                move |t: f64| {
                    let coeffs: Vec<f64> = amps
                        .iter()
                        .enumerate()
                        .map(|(a, &amp)| amp * (t + 0.3 * (a as f64 + 1.0) * t * t).sin())
                        .collect();
                    AlgebraElement::new(rep.clone(), coeffs).expi()
                }
            };
            let times: Vec<f64> = (1..=9).map(|k| 0.1 * k as f64).collect();
            for s in coherent_lagrangian(&conn, &seg, &g_path, &times, DEFAULT_DERIV_STEP) {
                assert!(
                    (s.bra_ket - s.cartan_trace).abs() < 1e-8,
                    "{} routes at t = {}: {} vs {}",
                    rep.group(),
                    s.t,
                    s.bra_ket,
                    s.cartan_trace
                );
            }
        }
    }

    #[test]
    fn standard_checks_all_pass_their_tolerances() {
        let rows = standard_checks().unwrap();
        let names: Vec<&str> = rows.iter().map(|r| r.check_name.as_str()).collect();
        for want in [
            "fock_one_particle_block",
            "fock_commutator_closure",
            "number_conservation",
            "one_particle_equivalence_bosonic",
            "one_particle_equivalence_fermionic",
            "resolution_of_unity_j_half",
            "coherent_normalization_max_dev",
            "expectation_reduction_spin1",
            "action_surface_vs_line_free",
            "action_surface_vs_line_polynomial",
            "coherent_lagrangian_two_routes",
            "holomorphic_inner_product",
        ] {
            assert!(names.contains(&want), "battery is missing {want}");
        }
        for row in &rows {
            assert!(
                row.pass(),
                "{}: error {} over tolerance {}",
                row.check_name,
                row.error,
                row.tol
            );
        }
        // exactness tiers frozen: matrix identities at roundoff, quadrature
        // identities at their analysis bounds
        let tol_of = |name: &str| rows.iter().find(|r| r.check_name == name).unwrap().tol;
        assert_eq!(tol_of("number_conservation"), 1e-15);
        assert_eq!(tol_of("resolution_of_unity_j_half"), 1e-8);
        assert_eq!(tol_of("action_surface_vs_line_free"), 1e-6);
    }
}
