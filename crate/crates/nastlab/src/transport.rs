//! Path model, groupoid calculus of parallel transports, and evaluators for
//! the path-ordered exponential.
//!
//! Matrix-order convention used everywhere: the leftmost factor acts last,
//!
//! ```text
//!     Π_{n=1..N} X_n = X_N · X_{N−1} ··· X_1 ,
//! ```
//!
//! so a transport along path L₂ followed by L₁ composes as U(L₁)·U(L₂).
//! The transport solves dU/dt = i ẋ(t)·A(x(t)) U with U(0) = I, and the
//! coupling constant is set to 1.
//!
//! Two evaluators: `Euler` multiplies the literal factors (1 + iεÂ(tₙ))
//! (first order, not unitary — kept as the textbook discretization for
//! fidelity tests), `Midpoint` multiplies exp(iεÂ(t_mid)) (second order,
//! unitary by construction, the reference evaluator). The truncated Dyson
//! series 1 + Σ_{n≤k} iⁿ∫dt₁∫^{t₁}dt₂… is provided for cross-checks at
//! small ∫‖Â‖.

use crate::algebra::GroupElement;
use crate::fields::Connection;
use crate::linalg::{expi, frob, ident, CMat, I};
use std::sync::Arc;
use thiserror::Error;

/// Endpoint matching tolerance for composition and closedness checks.
pub const ENDPOINT_TOL: f64 = 1e-12;

/// Tail-estimate threshold above which a truncated Dyson series is flagged
/// as not converged.
pub const DYSON_TAIL_TOL: f64 = 1e-6;

/// Errors from path construction and transport composition.
#[derive(Debug, Error)]
pub enum TransportError {
    #[error("endpoint mismatch: u2 ends at ({0:.6}, {1:.6}) but u1 starts at ({2:.6}, {3:.6})")]
    EndpointMismatch(f64, f64, f64, f64),
    #[error("path is not closed: start ({0:.6}, {1:.6}) ≠ end ({2:.6}, {3:.6})")]
    OpenPath(f64, f64, f64, f64),
    #[error("polyline needs at least two vertices, got {0}")]
    TooFewVertices(usize),
    #[error("segments are not composable: segment {0} ends at ({1:.6}, {2:.6}), segment {3} starts at ({4:.6}, {5:.6})")]
    DisconnectedSegments(usize, f64, f64, usize, f64, f64),
}

type CurveFn = dyn Fn(f64) -> (f64, f64) + Send + Sync;

/// One smooth piece of a path: x(t) and ẋ(t) on t ∈ [0,1].
#[derive(Clone)]
pub struct Segment {
    x: Arc<CurveFn>,
    xdot: Arc<CurveFn>,
}

impl Segment {
    /// From analytic callables for position and velocity.
    pub fn new(x: Arc<CurveFn>, xdot: Arc<CurveFn>) -> Self {
        Self { x, xdot }
    }

    /// Straight segment p → q.
    pub fn line(p: (f64, f64), q: (f64, f64)) -> Self {
        let d = (q.0 - p.0, q.1 - p.1);
        Self {
            x: Arc::new(move |t| (p.0 + t * d.0, p.1 + t * d.1)),
            xdot: Arc::new(move |_| d),
        }
    }

    /// Degenerate segment sitting at p (zero velocity).
    pub fn point(p: (f64, f64)) -> Self {
        Self { x: Arc::new(move |_| p), xdot: Arc::new(|_| (0.0, 0.0)) }
    }

    /// Position at parameter t.
    pub fn at(&self, t: f64) -> (f64, f64) {
        (self.x)(t)
    }

    /// Velocity at parameter t.
    pub fn velocity(&self, t: f64) -> (f64, f64) {
        (self.xdot)(t)
    }

    /// The same geometric piece traversed backwards.
    pub fn reversed(&self) -> Self {
        let x = self.x.clone();
        let xd = self.xdot.clone();
        Self {
            x: Arc::new(move |t| x(1.0 - t)),
            xdot: Arc::new(move |t| {
                let (vx, vy) = xd(1.0 - t);
                (-vx, -vy)
            }),
        }
    }
}

impl std::fmt::Debug for Segment {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let (x0, y0) = self.at(0.0);
        let (x1, y1) = self.at(1.0);
        write!(f, "Segment(({x0:.4}, {y0:.4}) → ({x1:.4}, {y1:.4}))")
    }
}

/// An oriented piecewise-smooth path: consecutive segments share endpoints.
#[derive(Clone, Debug)]
pub struct PathSpec {
    segments: Vec<Segment>,
}

fn dist(p: (f64, f64), q: (f64, f64)) -> f64 {
    ((p.0 - q.0).powi(2) + (p.1 - q.1).powi(2)).sqrt()
}

impl PathSpec {
    /// From explicit segments; rejects gaps between consecutive pieces.
    pub fn from_segments(segments: Vec<Segment>) -> Result<Self, TransportError> {
        if segments.is_empty() {
            return Err(TransportError::TooFewVertices(0));
        }
        for k in 1..segments.len() {
            let e = segments[k - 1].at(1.0);
            let s = segments[k].at(0.0);
            if dist(e, s) > ENDPOINT_TOL {
                return Err(TransportError::DisconnectedSegments(k - 1, e.0, e.1, k, s.0, s.1));
            }
        }
        Ok(Self { segments })
    }

    /// Straight-line pieces through the given vertices.
    pub fn polyline(vertices: &[(f64, f64)]) -> Result<Self, TransportError> {
        if vertices.len() < 2 {
            return Err(TransportError::TooFewVertices(vertices.len()));
        }
        Ok(Self {
            segments: vertices.windows(2).map(|w| Segment::line(w[0], w[1])).collect(),
        })
    }

    /// Single straight segment.
    pub fn line(p: (f64, f64), q: (f64, f64)) -> Self {
        Self { segments: vec![Segment::line(p, q)] }
    }

    /// Degenerate path sitting at p.
    pub fn point(p: (f64, f64)) -> Self {
        Self { segments: vec![Segment::point(p)] }
    }

    /// The boundary of [0,1]² traversed counterclockwise from the origin.
    pub fn unit_square_ccw() -> Self {
        Self::polyline(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0), (0.0, 0.0)]).unwrap()
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn start(&self) -> (f64, f64) {
        self.segments[0].at(0.0)
    }

    pub fn end(&self) -> (f64, f64) {
        self.segments[self.segments.len() - 1].at(1.0)
    }

    /// start == end within the endpoint tolerance.
    pub fn is_closed(&self) -> bool {
        dist(self.start(), self.end()) <= ENDPOINT_TOL
    }

    /// The reverse path −L.
    pub fn reversed(&self) -> Self {
        Self { segments: self.segments.iter().rev().map(Segment::reversed).collect() }
    }

    /// self followed by `next` (requires next to start where self ends).
    pub fn then(&self, next: &PathSpec) -> Result<Self, TransportError> {
        let mut segments = self.segments.clone();
        segments.extend(next.segments.iter().cloned());
        Self::from_segments(segments)
    }
}

/// Which discretization of P exp(i∫Â dt) to multiply out.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// Π (1 + iεÂ(tₙ)), left endpoint — the literal product formula.
    Euler,
    /// Π exp(iεÂ(t_mid)) — unitary, local error O(ε³); the reference.
    Midpoint,
}

/// A parallel transport: the path and the group element it produces.
#[derive(Clone, Debug)]
pub struct Transport {
    pub path: PathSpec,
    pub value: GroupElement,
}

impl Transport {
    pub fn start(&self) -> (f64, f64) {
        self.path.start()
    }
    pub fn end(&self) -> (f64, f64) {
        self.path.end()
    }

    /// The identity transport at a point.
    pub fn identity_at(rep: Arc<crate::algebra::LieAlgebraRep>, p: (f64, f64)) -> Self {
        Self { path: PathSpec::point(p), value: GroupElement::identity(rep) }
    }
}

/// u1 ∘ u2: transport along u2's path, then along u1's. Matrix order:
/// value = u1.value · u2.value (later path on the left, acting last).
pub fn compose(u1: &Transport, u2: &Transport) -> Result<Transport, TransportError> {
    let e = u2.end();
    let s = u1.start();
    if dist(e, s) > ENDPOINT_TOL {
        return Err(TransportError::EndpointMismatch(e.0, e.1, s.0, s.1));
    }
    Ok(Transport { path: u2.path.then(&u1.path)?, value: u1.value.mul(&u2.value) })
}

/// U⁻¹(x₁,x₂) = U(x₂,x₁): reverse the path, dagger the value.
pub fn inverse(u: &Transport) -> Transport {
    Transport { path: u.path.reversed(), value: u.value.inverse() }
}

/// Evaluate P exp(i ∫_L Â dt) with `steps` subdivisions per segment.
pub fn path_ordered_exp(
    conn: &Connection,
    path: &PathSpec,
    steps: usize,
    method: Method,
) -> Transport {
    assert!(steps >= 1, "need at least one step per segment");
    let n = conn.rep().dim_r();
    let mut u = ident(n);
    let eps = 1.0 / steps as f64;
    for seg in path.segments() {
        for k in 1..=steps {
            let factor = match method {
                Method::Euler => {
                    let t = (k - 1) as f64 * eps;
                    let (x, y) = seg.at(t);
                    let (vx, vy) = seg.velocity(t);
                    ident(n) + conn.along(x, y, vx, vy).scale(eps) * I
                }
                Method::Midpoint => {
                    let t = (k as f64 - 0.5) * eps;
                    let (x, y) = seg.at(t);
                    let (vx, vy) = seg.velocity(t);
                    expi(&conn.along(x, y, vx, vy).scale(eps), 1e-9)
                        .expect("ẋ·A is Hermitian for Hermitian generators")
                }
            };
            u = factor * u;
        }
    }
    Transport { path: path.clone(), value: GroupElement::from_matrix(conn.rep().clone(), u) }
}

/// Truncated Dyson series with its remainder estimate.
#[derive(Clone, Debug)]
pub struct DysonResult {
    /// 1 + Σ_{n≤k} iⁿ ∫dt₁∫^{t₁}dt₂… Â(t₁)…Â(tₙ).
    pub matrix: CMat,
    /// Leading remainder term a^{k+1}/(k+1)! with a = ∫‖Â‖_F dt.
    pub tail_estimate: f64,
    /// tail_estimate > DYSON_TAIL_TOL: the truncation is not converged.
    pub not_converged: bool,
}

/// Truncated Dyson series by nested ordered quadrature (cumulative
/// trapezoid recursion, O(k·M) for M grid points), order k ≤ 6.
pub fn dyson_truncated(
    conn: &Connection,
    path: &PathSpec,
    order: usize,
    quadrature_steps: usize,
) -> DysonResult {
    assert!(order <= 6, "Dyson order capped at 6 (nested quadrature cost)");
    assert!(quadrature_steps >= 1);
    let n = conn.rep().dim_r();
    let dt = 1.0 / quadrature_steps as f64;

    // S_j(t) = ∫₀^t Â S_{j−1}; running values at the current grid point
    let mut s: Vec<CMat> = vec![ident(n); order + 1];
    for m in s.iter_mut().skip(1) {
        *m = CMat::zeros(n, n);
    }
    let mut a_l1 = 0.0; // ∫‖Â‖ dt (trapezoid)
    let mut total = ident(n);
    if order >= 1 {
        let mut i_pow = I; // iⁿ
        for seg in path.segments() {
            // segment-local t grid; integrals add across segments
            let mut prev_a: Option<CMat> = None;
            for g in 0..=quadrature_steps {
                let t = g as f64 * dt;
                let (x, y) = seg.at(t);
                let (vx, vy) = seg.velocity(t);
                let a = conn.along(x, y, vx, vy);
                if let Some(ap) = prev_a {
                    // ascending order: when S_j is updated, S_{j−1} already
                    // holds its fresh right-endpoint value (S₀ ≡ I), while
                    // s_old supplies the left endpoint of the trapezoid
                    let s_old = s.clone();
                    for j in 1..=order {
                        s[j] = &s_old[j]
                            + (&a * &s[j - 1] + &ap * &s_old[j - 1]).scale(0.5 * dt);
                    }
                    a_l1 += 0.5 * dt * (frob(&a) + frob(&ap));
                }
                prev_a = Some(a);
            }
        }
        for sj in s.iter().skip(1) {
            total += sj * i_pow;
            i_pow *= I;
        }
    } else {
        // still need a for the tail estimate
        for seg in path.segments() {
            let mut prev: Option<f64> = None;
            for g in 0..=quadrature_steps {
                let t = g as f64 * dt;
                let (x, y) = seg.at(t);
                let (vx, vy) = seg.velocity(t);
                let na = frob(&conn.along(x, y, vx, vy));
                if let Some(np) = prev {
                    a_l1 += 0.5 * dt * (na + np);
                }
                prev = Some(na);
            }
        }
    }

    let mut tail = 1.0;
    for j in 1..=(order + 1) {
        tail *= a_l1 / j as f64;
    }
    DysonResult { matrix: total, tail_estimate: tail, not_converged: tail > DYSON_TAIL_TOL }
}

/// Holonomy of a closed loop: the midpoint path-ordered exponential.
pub fn holonomy(
    conn: &Connection,
    closed_path: &PathSpec,
    steps: usize,
) -> Result<GroupElement, TransportError> {
    let s = closed_path.start();
    let e = closed_path.end();
    if !closed_path.is_closed() {
        return Err(TransportError::OpenPath(s.0, s.1, e.0, e.1));
    }
    Ok(path_ordered_exp(conn, closed_path, steps, Method::Midpoint).value)
}

/// Tr_R of the holonomy — the Wilson loop.
pub fn wilson_loop(
    conn: &Connection,
    closed_path: &PathSpec,
    steps: usize,
) -> Result<crate::linalg::C64, TransportError> {
    Ok(holonomy(conn, closed_path, steps)?.matrix().trace())
}

/// Wilson loop divided by dim R (the normalized trace).
pub fn wilson_loop_normalized(
    conn: &Connection,
    closed_path: &PathSpec,
    steps: usize,
) -> Result<crate::linalg::C64, TransportError> {
    let d = conn.rep().dim_r() as f64;
    Ok(wilson_loop(conn, closed_path, steps)? / crate::linalg::cr(d))
}
