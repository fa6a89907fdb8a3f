//! The operator non-Abelian Stokes theorem on the unit square.
//!
//! The loop ∂[0,1]² (counterclockwise, based at the origin) is decomposed
//! into N² small lassos: an L-shaped transporter U_{m,n} from the base point
//! to the plaquette corner (m/N, n/N), the counterclockwise plaquette
//! holonomy W_{m,n} based at that corner, and the return leg. The identity
//!
//! ```text
//!     P exp(i ∮_{∂S} A) = Π_{n=1..N} Π_{m=1..N}  U⁻¹_{m,n} W_{m,n} U_{m,n}
//! ```
//!
//! holds exactly at finite N (everything telescopes), and replacing each
//! W by its expansion W = 1 + (i/N²)F_{m,n} + O(1/N³) turns the right side
//! into the surface-ordered exponent of the twisted curvature
//! 𝓕_{m,n} = U⁻¹_{m,n} F_{m,n} U_{m,n}:
//!
//! ```text
//!     P exp(i ∮_{∂S} A) = 𝒫 exp(i ∫_S 𝓕) + O(1/N).
//! ```
//!
//! Ordering follows the double-product convention: Π X_n = X_N···X_1 with
//! the leftmost factor acting last; rows are ordered by n, and within a row
//! by m, so the (1,1) factor sits rightmost. Plaquettes are oriented
//! counterclockwise — the Abelian specialization reproduces +flux.

use crate::algebra::GroupElement;
use crate::fields::{field_strength, Connection, DEFAULT_FD_STEP};
use crate::linalg::{dagger, expi, frob, ident, unitarity_defect, CMat, I};
use crate::transport::{path_ordered_exp, Method, PathSpec, Transport};
use std::time::Instant;
use thiserror::Error;

/// Midpoint steps per cached grid edge (length 1/N each).
pub const DEFAULT_EDGE_STEPS: usize = 16;
/// Midpoint steps per boundary edge for the LHS reference, per unit of N.
pub const DEFAULT_LHS_MULTIPLIER: usize = 64;
/// Unitarity drift budget for the two sides of the verification.
pub const DEFAULT_UNITARITY_BUDGET: f64 = 1e-9;

/// Errors from lasso-grid indexing.
#[derive(Debug, Error)]
pub enum StokesError {
    #[error("grid index (m, n) = ({m}, {n}) out of range for N = {n_grid}")]
    IndexOutOfRange { m: usize, n: usize, n_grid: usize },
}

/// Cached edge transports of the N×N plaquette grid plus the L-shaped
/// transporters built from them. Edges: h(m,n) runs ((m−1)/N, n/N) →
/// (m/N, n/N) and d(m,n) runs (m/N, (n−1)/N) → (m/N, n/N); both sides of
/// the finite-N identity are assembled from these same matrices, so the
/// telescoping cancellation is exact up to roundoff.
pub struct LassoGrid {
    conn: Connection,
    n: usize,
    h: Vec<CMat>,
    d: Vec<CMat>,
    u: Vec<CMat>,
}

/// Midpoint transport along the straight edge p → q.
fn edge_transport(conn: &Connection, p: (f64, f64), q: (f64, f64), steps: usize) -> CMat {
    let dim = conn.rep().dim_r();
    let (vx, vy) = (q.0 - p.0, q.1 - p.1);
    let eps = 1.0 / steps as f64;
    let mut u = ident(dim);
    for k in 1..=steps {
        let t = (k as f64 - 0.5) * eps;
        let a = conn.along(p.0 + t * vx, p.1 + t * vy, vx, vy);
        u = expi(&a.scale(eps), 1e-9).expect("ẋ·A is Hermitian") * u;
    }
    u
}

impl LassoGrid {
    /// Transport every grid edge (midpoint rule, `steps_edge` steps each)
    /// and accumulate the L-transporters U_{m,n}.
    pub fn build(conn: &Connection, n: usize, steps_edge: usize) -> Self {
        assert!(n >= 1, "grid refinement must be at least 1");
        let nf = n as f64;
        let dim = conn.rep().dim_r();
        // h: m ∈ 1..=N, n ∈ 0..=N ; d: m ∈ 0..=N, n ∈ 1..=N
        let mut h = Vec::with_capacity(n * (n + 1));
        for m in 1..=n {
            for nn in 0..=n {
                let p = ((m as f64 - 1.0) / nf, nn as f64 / nf);
                let q = (m as f64 / nf, nn as f64 / nf);
                h.push(edge_transport(conn, p, q, steps_edge));
            }
        }
        let mut d = Vec::with_capacity((n + 1) * n);
        for m in 0..=n {
            for nn in 1..=n {
                let p = (m as f64 / nf, (nn as f64 - 1.0) / nf);
                let q = (m as f64 / nf, nn as f64 / nf);
                d.push(edge_transport(conn, p, q, steps_edge));
            }
        }
        let grid = Self { conn: conn.clone(), n, h, d, u: Vec::new() };
        // U_{0,n} climbs the left edge; U_{m,n} = h(m,n)·U_{m−1,n}
        let mut u = vec![ident(dim); (n + 1) * (n + 1)];
        let mut v = ident(dim);
        for nn in 0..=n {
            if nn > 0 {
                v = grid.d_edge(0, nn) * &v;
            }
            u[nn] = v.clone();
            for m in 1..=n {
                u[m * (n + 1) + nn] = grid.h_edge(m, nn) * &u[(m - 1) * (n + 1) + nn];
            }
        }
        Self { u, ..grid }
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn conn(&self) -> &Connection {
        &self.conn
    }

    fn h_edge(&self, m: usize, n: usize) -> &CMat {
        debug_assert!((1..=self.n).contains(&m) && n <= self.n);
        &self.h[(m - 1) * (self.n + 1) + n]
    }

    fn d_edge(&self, m: usize, n: usize) -> &CMat {
        debug_assert!(m <= self.n && (1..=self.n).contains(&n));
        &self.d[m * self.n + (n - 1)]
    }

    /// U_{m,n}: up the left edge to (0, n/N), then across to (m/N, n/N).
    pub fn transporter(&self, m: usize, n: usize) -> Result<&CMat, StokesError> {
        if m > self.n || n > self.n {
            return Err(StokesError::IndexOutOfRange { m, n, n_grid: self.n });
        }
        Ok(&self.u[m * (self.n + 1) + n])
    }

    /// W_{m,n}: counterclockwise holonomy of plaquette (m,n), based at its
    /// upper-right corner (m/N, n/N) — the endpoint of U_{m,n}.
    pub fn plaquette(&self, m: usize, n: usize) -> Result<CMat, StokesError> {
        if !(1..=self.n).contains(&m) || !(1..=self.n).contains(&n) {
            return Err(StokesError::IndexOutOfRange { m, n, n_grid: self.n });
        }
        // c→e (top, reversed h), e→a (left, reversed d), a→b (bottom h),
        // b→c (right d); leftmost factor acts last
        Ok(self.d_edge(m, n)
            * self.h_edge(m, n - 1)
            * dagger(self.d_edge(m - 1, n))
            * dagger(self.h_edge(m, n)))
    }

    /// The full boundary holonomy ∂[0,1]² (counterclockwise from the
    /// origin) assembled from the cached edges.
    pub fn boundary(&self) -> CMat {
        let dim = self.conn.rep().dim_r();
        let mut acc = ident(dim);
        for m in 1..=self.n {
            acc = self.h_edge(m, 0) * acc;
        }
        for n in 1..=self.n {
            acc = self.d_edge(self.n, n) * acc;
        }
        for m in (1..=self.n).rev() {
            acc = dagger(self.h_edge(m, self.n)) * acc;
        }
        for n in (1..=self.n).rev() {
            acc = dagger(self.d_edge(0, n)) * acc;
        }
        acc
    }

    /// The finite-N lasso product Π U⁻¹WU with the exact cached plaquette
    /// holonomies — no exponential approximation.
    pub fn lasso_product(&self) -> CMat {
        let dim = self.conn.rep().dim_r();
        let mut acc = ident(dim);
        for n in 1..=self.n {
            for m in 1..=self.n {
                let u = self.transporter(m, n).expect("in range");
                let w = self.plaquette(m, n).expect("in range");
                acc = dagger(u) * w * u * acc;
            }
        }
        acc
    }

    /// 𝓕_{m,n} = U⁻¹_{m,n} F(m/N, n/N) U_{m,n} from the cached transporter.
    pub fn twisted_curvature(&self, m: usize, n: usize) -> Result<CMat, StokesError> {
        let u = self.transporter(m, n)?;
        let nf = self.n as f64;
        let f = field_strength(&self.conn, m as f64 / nf, n as f64 / nf, DEFAULT_FD_STEP);
        Ok(dagger(u) * f.matrix() * u)
    }

    /// 𝒫 exp(i ∫ 𝓕): the ordered double product of exp((i/N²)𝓕_{m,n}),
    /// rows by n, within a row by m, factor (1,1) rightmost.
    pub fn surface_product(&self) -> GroupElement {
        let dim = self.conn.rep().dim_r();
        let scale = 1.0 / (self.n as f64 * self.n as f64);
        let mut acc = ident(dim);
        for n in 1..=self.n {
            for m in 1..=self.n {
                let tc = self.twisted_curvature(m, n).expect("in range");
                acc = expi(&tc.scale(scale), 1e-8).expect("𝓕 is Hermitian to quadrature error")
                    * acc;
            }
        }
        GroupElement::from_matrix(self.conn.rep().clone(), acc)
    }

    /// Per-plaquette remainder ‖W − I − (i/N²)F‖_F over the whole grid.
    pub fn remainder_stats(&self) -> RemainderStats {
        let nf = self.n as f64;
        let scale = 1.0 / (nf * nf);
        let dim = self.conn.rep().dim_r();
        let mut max = 0.0f64;
        let mut sum = 0.0f64;
        for n in 1..=self.n {
            for m in 1..=self.n {
                let w = self.plaquette(m, n).expect("in range");
                let f = field_strength(&self.conn, m as f64 / nf, n as f64 / nf, DEFAULT_FD_STEP);
                let r = frob(&(w - ident(dim) - f.matrix().scale(scale) * I));
                max = max.max(r);
                sum += r;
            }
        }
        RemainderStats { max, mean: sum / (self.n * self.n) as f64 }
    }
}

/// Distribution of the plaquette expansion remainders across the grid.
#[derive(Clone, Copy, Debug)]
pub struct RemainderStats {
    pub max: f64,
    pub mean: f64,
}

/// Verification record for one grid refinement.
#[derive(Clone, Debug)]
pub struct NastReport {
    pub n: usize,
    /// P exp(i∮A): high-resolution boundary holonomy.
    pub lhs: GroupElement,
    /// 𝒫 exp(i∫𝓕): the surface-ordered product.
    pub rhs: GroupElement,
    /// ‖lhs − rhs‖_F.
    pub error: f64,
    pub remainder: RemainderStats,
    pub lhs_unitarity_defect: f64,
    pub rhs_unitarity_defect: f64,
    /// Either side drifted past the unitarity budget.
    pub unitarity_flagged: bool,
    /// log₂(error(N)/error(2N)) from sweep pairs; None for a single run.
    pub est_order: Option<f64>,
    pub runtime_ms: f64,
}

/// U_{m,n} as a standalone transport: up the left edge (0,0) → (0, n/N),
/// then horizontally to (m/N, n/N), midpoint rule with `steps` per leg.
pub fn l_transporter(
    conn: &Connection,
    m: usize,
    n: usize,
    n_grid: usize,
    steps: usize,
) -> Result<Transport, StokesError> {
    if m > n_grid || n > n_grid {
        return Err(StokesError::IndexOutOfRange { m, n, n_grid });
    }
    let nf = n_grid as f64;
    let path = PathSpec::polyline(&[
        (0.0, 0.0),
        (0.0, n as f64 / nf),
        (m as f64 / nf, n as f64 / nf),
    ])
    .expect("vertices are connected by construction");
    Ok(path_ordered_exp(conn, &path, steps, Method::Midpoint))
}

/// W_{m,n} by fine transport around the plaquette boundary (counter-
/// clockwise, based at (m/N, n/N)), independent of any grid cache.
pub fn plaquette_holonomy(
    conn: &Connection,
    m: usize,
    n: usize,
    n_grid: usize,
    steps: usize,
) -> Result<GroupElement, StokesError> {
    if !(1..=n_grid).contains(&m) || !(1..=n_grid).contains(&n) {
        return Err(StokesError::IndexOutOfRange { m, n, n_grid });
    }
    let nf = n_grid as f64;
    let (x0, x1) = ((m as f64 - 1.0) / nf, m as f64 / nf);
    let (y0, y1) = ((n as f64 - 1.0) / nf, n as f64 / nf);
    let path = PathSpec::polyline(&[(x1, y1), (x0, y1), (x0, y0), (x1, y0), (x1, y1)])
        .expect("closed square");
    Ok(path_ordered_exp(conn, &path, steps, Method::Midpoint).value)
}

/// U⁻¹_{m,n}F_{m,n}U_{m,n} by standalone fine transport; Hermitian up to
/// the transport quadrature error, with the spectrum of F (unitary
/// conjugation).
pub fn twisted_curvature(
    conn: &Connection,
    m: usize,
    n: usize,
    n_grid: usize,
    steps: usize,
) -> Result<CMat, StokesError> {
    let u = l_transporter(conn, m, n, n_grid, steps)?;
    let nf = n_grid as f64;
    let f = field_strength(conn, m as f64 / nf, n as f64 / nf, DEFAULT_FD_STEP);
    Ok(dagger(u.value.matrix()) * f.matrix() * u.value.matrix())
}

/// The RHS 𝒫 exp(i∫𝓕) at refinement N with default edge resolution.
pub fn surface_ordered_product(conn: &Connection, n: usize) -> GroupElement {
    LassoGrid::build(conn, n, DEFAULT_EDGE_STEPS).surface_product()
}

/// ‖Π U⁻¹WU − P exp(i∮A)‖ with both sides assembled from the same cached
/// edge transports: the finite-N telescoping identity, exact up to
/// roundoff and the unitarity defect of the cached edges.
pub fn lasso_identity_check(conn: &Connection, n: usize, steps_edge: usize) -> f64 {
    let grid = LassoGrid::build(conn, n, steps_edge);
    frob(&(grid.lasso_product() - grid.boundary()))
}

/// Full verification at one refinement: LHS by high-resolution midpoint
/// transport (steps_lhs per boundary edge), RHS by the surface-ordered
/// product, plus remainder statistics and unitarity drift.
pub fn nast_verify_with(
    conn: &Connection,
    n: usize,
    steps_lhs: usize,
    steps_edge: usize,
    unitarity_budget: f64,
) -> NastReport {
    let t0 = Instant::now();
    let lhs = path_ordered_exp(conn, &PathSpec::unit_square_ccw(), steps_lhs, Method::Midpoint)
        .value;
    let grid = LassoGrid::build(conn, n, steps_edge);
    let rhs = grid.surface_product();
    let remainder = grid.remainder_stats();
    let error = frob(&(lhs.matrix() - rhs.matrix()));
    let lhs_defect = unitarity_defect(lhs.matrix());
    let rhs_defect = unitarity_defect(rhs.matrix());
    NastReport {
        n,
        error,
        remainder,
        lhs_unitarity_defect: lhs_defect,
        rhs_unitarity_defect: rhs_defect,
        unitarity_flagged: lhs_defect > unitarity_budget || rhs_defect > unitarity_budget,
        est_order: None,
        runtime_ms: t0.elapsed().as_secs_f64() * 1e3,
        lhs,
        rhs,
    }
}

/// nast_verify with the default LHS resolution 64·N and edge resolution.
pub fn nast_verify(conn: &Connection, n: usize, steps_lhs: usize) -> NastReport {
    nast_verify_with(conn, n, steps_lhs, DEFAULT_EDGE_STEPS, DEFAULT_UNITARITY_BUDGET)
}

/// Run nast_verify over a refinement list and fill in the estimated
/// convergence order of each consecutive pair.
pub fn nast_sweep(
    conn: &Connection,
    n_list: &[usize],
    steps_lhs_multiplier: usize,
    unitarity_budget: f64,
) -> Vec<NastReport> {
    let mut reports: Vec<NastReport> = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let mut r = nast_verify_with(
            conn,
            n,
            steps_lhs_multiplier * n,
            DEFAULT_EDGE_STEPS,
            unitarity_budget,
        );
        if let Some(prev) = reports.last() {
            if prev.error > 0.0 && r.error > 0.0 && n != prev.n {
                let rate = (prev.error / r.error).ln() / (n as f64 / prev.n as f64).ln();
                r.est_order = Some(rate);
            }
        }
        reports.push(r);
    }
    reports
}
