//! Connection catalog on the unit parameter square, with analytic curvature,
//! gauge transformations, and a finite-difference fallback.
//!
//! A [`Connection`] holds the gauge potential components (A_x, A_y) as
//! algebra-valued functions of (x,y) ∈ [0,1]², plus the curvature
//!
//! ```text
//!     F_xy = ∂_x A_y − ∂_y A_x − i [A_x, A_y]
//! ```
//!
//! either in closed form (every built-in family ships one) or by central
//! differences of the potential (O(h²), one-sided at the domain boundary).
//! Gauge transformations act as A^g_i = i g†∂_i g + g† A_i g; signs are fixed
//! so that the holonomy of a pure-gauge connection over a contractible loop
//! is exactly the identity, consistently with the transport convention
//! dU/dt = i ẋ·A U.
//!
//! The `flat_angular` family lives on an annulus chart ([0,1] × S¹, the y
//! coordinate being angle/2π): its curvature vanishes identically while the
//! holonomy around the hole is exp(2πi·a·T³). It exhibits a loop holonomy
//! different from 1 with zero field strength everywhere on the chart, and is
//! excluded from square-domain sweeps.

use crate::algebra::{AlgebraElement, GroupElement, LieAlgebraRep};
use crate::linalg::{dagger, CMat, I};
use std::sync::Arc;
use thiserror::Error;

/// Default finite-difference step: balances O(h²) truncation against
/// roundoff for representation dimensions ≤ 10.
pub const DEFAULT_FD_STEP: f64 = 1e-4;

/// Errors from connection construction and gauge transformation.
#[derive(Debug, Error)]
pub enum FieldError {
    #[error("unknown field family {0:?}")]
    UnknownFamily(String),
    #[error("family {family} takes {expected} parameter(s), got {got}")]
    BadParams { family: String, expected: usize, got: usize },
    #[error("gauge function is not unitary: defect {defect:.3e} at ({x}, {y}) exceeds 1e-9")]
    GaugeNotUnitary { defect: f64, x: f64, y: f64 },
}

type EvalFn = dyn Fn(f64, f64) -> (AlgebraElement, AlgebraElement) + Send + Sync;
type CurvFn = dyn Fn(f64, f64) -> AlgebraElement + Send + Sync;
/// Gauge function g: (x,y) → group element.
pub type GaugeFn = Arc<dyn Fn(f64, f64) -> GroupElement + Send + Sync>;

/// A gauge potential on the unit square: evaluation is pure, total, and
/// thread-safe; connections are immutable once built.
#[derive(Clone)]
pub struct Connection {
    rep: Arc<LieAlgebraRep>,
    family: String,
    params: Vec<f64>,
    eval: Arc<EvalFn>,
    curvature_analytic: Option<Arc<CurvFn>>,
}

impl std::fmt::Debug for Connection {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Connection")
            .field("family", &self.family)
            .field("params", &self.params)
            .field("analytic_curvature", &self.curvature_analytic.is_some())
            .finish()
    }
}

/// How a curvature value was produced, and whether the stencil had to lean
/// on one-sided differences at the domain boundary.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurvatureMethod {
    Analytic,
    FiniteDifference,
}

/// Metadata attached to a curvature evaluation.
#[derive(Clone, Copy, Debug)]
pub struct CurvatureMeta {
    pub method: CurvatureMethod,
    pub h: f64,
    pub one_sided_x: bool,
    pub one_sided_y: bool,
}

impl Connection {
    /// Build from raw closures; the hatch the built-in families and the
    /// quantization tests go through.
    pub fn from_closures(
        rep: Arc<LieAlgebraRep>,
        family: impl Into<String>,
        params: Vec<f64>,
        eval: Arc<EvalFn>,
        curvature_analytic: Option<Arc<CurvFn>>,
    ) -> Self {
        Self { rep, family: family.into(), params, eval, curvature_analytic }
    }

    /// A ≡ 0.
    pub fn zero(rep: Arc<LieAlgebraRep>) -> Self {
        let r = rep.clone();
        Self::from_closures(
            rep.clone(),
            "zero",
            vec![],
            Arc::new(move |_, _| (AlgebraElement::zero(r.clone()), AlgebraElement::zero(r.clone()))),
            Some({
                let r = rep;
                Arc::new(move |_, _| AlgebraElement::zero(r.clone()))
            }),
        )
    }

    /// Symmetric-gauge Abelian field in the Cartan direction T³:
    /// A_x = −(c/2)·y·T³, A_y = (c/2)·x·T³, so F = c·T³ uniformly.
    pub fn constant_abelian(rep: Arc<LieAlgebraRep>, c: f64) -> Self {
        let dim_g = rep.dim_g();
        let coeff = move |v: f64| {
            let mut k = vec![0.0; dim_g];
            k[2] = v;
            k
        };
        let r = rep.clone();
        let eval = Arc::new(move |x: f64, y: f64| {
            (
                AlgebraElement::new(r.clone(), coeff(-0.5 * c * y)),
                AlgebraElement::new(r.clone(), coeff(0.5 * c * x)),
            )
        });
        let rc = rep.clone();
        let curv = Arc::new(move |_: f64, _: f64| AlgebraElement::new(rc.clone(), coeff(c)));
        Self::from_closures(rep, "constant_abelian", vec![c], eval, Some(curv))
    }

    /// Constant non-commuting field A_x = a·T¹, A_y = b·T²; all of the
    /// curvature comes from the commutator: F = −i·ab·[T¹,T²] = ab·f^{12c}T^c.
    pub fn constant_noncommuting(rep: Arc<LieAlgebraRep>, a: f64, b: f64) -> Self {
        let dim_g = rep.dim_g();
        let unit = move |idx: usize, v: f64| {
            let mut k = vec![0.0; dim_g];
            k[idx] = v;
            k
        };
        let r = rep.clone();
        let eval = Arc::new(move |_: f64, _: f64| {
            (
                AlgebraElement::new(r.clone(), unit(0, a)),
                AlgebraElement::new(r.clone(), unit(1, b)),
            )
        });
        let rc = rep.clone();
        let fcoeffs: Vec<f64> = (0..dim_g).map(|c| a * b * rep.structure().get(0, 1, c)).collect();
        let curv = Arc::new(move |_: f64, _: f64| AlgebraElement::new(rc.clone(), fcoeffs.clone()));
        Self::from_closures(rep, "constant_noncommuting", vec![a, b], eval, Some(curv))
    }

    /// Cubic polynomial family with genuinely position-dependent commutator
    /// curvature:
    /// A_x = c₀y³T¹ + c₁x²yT², A_y = c₁xy²T¹ + c₀x³T² + c₂x²y²T³.
    pub fn polynomial(rep: Arc<LieAlgebraRep>, c0: f64, c1: f64, c2: f64) -> Self {
        let dim_g = rep.dim_g();
        let ax = move |x: f64, y: f64| {
            let mut k = vec![0.0; dim_g];
            k[0] = c0 * y * y * y;
            k[1] = c1 * x * x * y;
            k
        };
        let ay = move |x: f64, y: f64| {
            let mut k = vec![0.0; dim_g];
            k[0] = c1 * x * y * y;
            k[1] = c0 * x * x * x;
            k[2] = c2 * x * x * y * y;
            k
        };
        let r = rep.clone();
        let eval = Arc::new(move |x: f64, y: f64| {
            (AlgebraElement::new(r.clone(), ax(x, y)), AlgebraElement::new(r.clone(), ay(x, y)))
        });
        let rc = rep.clone();
        let curv = Arc::new(move |x: f64, y: f64| {
            // linear part ∂_xA_y − ∂_yA_x
            let mut k = vec![0.0; dim_g];
            k[0] = c1 * y * y - 3.0 * c0 * y * y;
            k[1] = 3.0 * c0 * x * x - c1 * x * x;
            k[2] = 2.0 * c2 * x * y * y;
            // commutator part −i[A_x,A_y]: coefficients u_a v_b f^{abc}
            let u = ax(x, y);
            let v = ay(x, y);
            for (a, &ua) in u.iter().enumerate() {
                if ua == 0.0 {
                    continue;
                }
                for (b, &vb) in v.iter().enumerate() {
                    if vb == 0.0 {
                        continue;
                    }
                    for (c, kc) in k.iter_mut().enumerate() {
                        let f = rc.structure().get(a, b, c);
                        if f != 0.0 {
                            *kc += ua * vb * f;
                        }
                    }
                }
            }
            AlgebraElement::new(rc.clone(), k)
        });
        Self::from_closures(rep, "polynomial", vec![c0, c1, c2], eval, Some(curv))
    }

    /// Pure gauge A = i g†∂g with g(x,y) = exp(iax·T¹)·exp(iby·T²):
    /// A_x = −a(cos(by)·T¹ − sin(by)·T³), A_y = −b·T²; F ≡ 0.
    /// The {T¹,T²,T³} su(2) triple closes for both groups, so the adjoint
    /// rotation stays in the (T¹,T³) plane.
    pub fn pure_gauge(rep: Arc<LieAlgebraRep>, a: f64, b: f64) -> Self {
        let dim_g = rep.dim_g();
        let r = rep.clone();
        let eval = Arc::new(move |_x: f64, y: f64| {
            let mut kx = vec![0.0; dim_g];
            kx[0] = -a * (b * y).cos();
            kx[2] = a * (b * y).sin();
            let mut ky = vec![0.0; dim_g];
            ky[1] = -b;
            (AlgebraElement::new(r.clone(), kx), AlgebraElement::new(r.clone(), ky))
        });
        let rc = rep.clone();
        let curv = Arc::new(move |_: f64, _: f64| AlgebraElement::zero(rc.clone()));
        Self::from_closures(rep, "pure_gauge", vec![a, b], eval, Some(curv))
    }

    /// Flat connection on the annulus chart ([0,1] × S¹): A_x = 0,
    /// A_y = 2πa·T³ with y = angle/2π. F ≡ 0, yet the holonomy around the
    /// hole (y: 0 → 1) is exp(2πi·a·T³) ≠ I for generic a.
    pub fn flat_angular(rep: Arc<LieAlgebraRep>, a: f64) -> Self {
        let dim_g = rep.dim_g();
        let r = rep.clone();
        let eval = Arc::new(move |_: f64, _: f64| {
            let mut ky = vec![0.0; dim_g];
            ky[2] = 2.0 * std::f64::consts::PI * a;
            (AlgebraElement::zero(r.clone()), AlgebraElement::new(r.clone(), ky))
        });
        let rc = rep.clone();
        let curv = Arc::new(move |_: f64, _: f64| AlgebraElement::zero(rc.clone()));
        Self::from_closures(rep, "flat_angular", vec![a], eval, Some(curv))
    }

    /// Dispatch a family by its config identifier, validating the parameter
    /// count: zero(), constant_abelian(c), constant_noncommuting(a,b),
    /// polynomial(c0,c1,c2), pure_gauge(a,b), flat_angular(a).
    pub fn from_family(
        rep: Arc<LieAlgebraRep>,
        family: &str,
        params: &[f64],
    ) -> Result<Self, FieldError> {
        let expect = |n: usize| {
            if params.len() == n {
                Ok(())
            } else {
                Err(FieldError::BadParams {
                    family: family.to_string(),
                    expected: n,
                    got: params.len(),
                })
            }
        };
        match family {
            "zero" => {
                expect(0)?;
                Ok(Self::zero(rep))
            }
            "constant_abelian" => {
                expect(1)?;
                Ok(Self::constant_abelian(rep, params[0]))
            }
            "constant_noncommuting" => {
                expect(2)?;
                Ok(Self::constant_noncommuting(rep, params[0], params[1]))
            }
            "polynomial" => {
                expect(3)?;
                Ok(Self::polynomial(rep, params[0], params[1], params[2]))
            }
            "pure_gauge" => {
                expect(2)?;
                Ok(Self::pure_gauge(rep, params[0], params[1]))
            }
            "flat_angular" => {
                expect(1)?;
                Ok(Self::flat_angular(rep, params[0]))
            }
            other => Err(FieldError::UnknownFamily(other.to_string())),
        }
    }

    pub fn rep(&self) -> &Arc<LieAlgebraRep> {
        &self.rep
    }
    pub fn family(&self) -> &str {
        &self.family
    }
    pub fn params(&self) -> &[f64] {
        &self.params
    }
    /// Whether a closed-form curvature is attached.
    pub fn has_analytic_curvature(&self) -> bool {
        self.curvature_analytic.is_some()
    }

    /// (A_x, A_y) at a point.
    pub fn evaluate(&self, x: f64, y: f64) -> (AlgebraElement, AlgebraElement) {
        (self.eval)(x, y)
    }

    /// ẋ·A(x(t)) as a plain matrix — the integrand of the transport ODE.
    pub fn along(&self, x: f64, y: f64, xdot: f64, ydot: f64) -> CMat {
        let (ax, ay) = self.evaluate(x, y);
        ax.matrix().scale(xdot) + ay.matrix().scale(ydot)
    }
}

/// g(x,y) = exp(iax·T¹)·exp(iby·T²) — the gauge function whose pure-gauge
/// potential [`Connection::pure_gauge`] carries; transport along any path
/// equals g†(end)·g(start).
pub fn pure_gauge_g(rep: Arc<LieAlgebraRep>, a: f64, b: f64) -> GaugeFn {
    Arc::new(move |x: f64, y: f64| {
        let t1 = AlgebraElement::new(rep.clone(), {
            let mut k = vec![0.0; rep.dim_g()];
            k[0] = a * x;
            k
        });
        let t2 = AlgebraElement::new(rep.clone(), {
            let mut k = vec![0.0; rep.dim_g()];
            k[1] = b * y;
            k
        });
        t1.expi().mul(&t2.expi())
    })
}

/// Flat connection on the annulus chart, re-exported under its catalog name.
pub fn flat_angular_connection(rep: Arc<LieAlgebraRep>, a: f64) -> Connection {
    Connection::flat_angular(rep, a)
}

/// F_xy(p) with provenance metadata: the analytic closed form when the
/// family carries one, otherwise central differences of step `h`
/// (one-sided second-order stencil against the domain boundary, flagged).
pub fn field_strength_meta(
    conn: &Connection,
    x: f64,
    y: f64,
    h: f64,
) -> (AlgebraElement, CurvatureMeta) {
    if let Some(curv) = &conn.curvature_analytic {
        let meta =
            CurvatureMeta { method: CurvatureMethod::Analytic, h, one_sided_x: false, one_sided_y: false };
        return (curv(x, y), meta);
    }
    field_strength_fd(conn, x, y, h)
}

/// F_xy(p) by finite differences regardless of any attached closed form.
pub fn field_strength_fd(
    conn: &Connection,
    x: f64,
    y: f64,
    h: f64,
) -> (AlgebraElement, CurvatureMeta) {
    assert!(h > 0.0, "finite-difference step must be positive");
    let rep = conn.rep().clone();
    let ay = |x: f64, y: f64| conn.evaluate(x, y).1.matrix().clone();
    let ax = |x: f64, y: f64| conn.evaluate(x, y).0.matrix().clone();

    // d/dx A_y: central where both neighbors stay in [0,1], else one-sided
    // second order (−3f₀ + 4f₁ − f₂)/(2h)
    let (dx_ay, one_sided_x) = if x - h >= 0.0 && x + h <= 1.0 {
        ((ay(x + h, y) - ay(x - h, y)).scale(0.5 / h), false)
    } else if x - h < 0.0 {
        (
            (ay(x, y).scale(-3.0) + ay(x + h, y).scale(4.0) - ay(x + 2.0 * h, y)).scale(0.5 / h),
            true,
        )
    } else {
        (
            (ay(x, y).scale(3.0) - ay(x - h, y).scale(4.0) + ay(x - 2.0 * h, y)).scale(0.5 / h),
            true,
        )
    };
    let (dy_ax, one_sided_y) = if y - h >= 0.0 && y + h <= 1.0 {
        ((ax(x, y + h) - ax(x, y - h)).scale(0.5 / h), false)
    } else if y - h < 0.0 {
        (
            (ax(x, y).scale(-3.0) + ax(x, y + h).scale(4.0) - ax(x, y + 2.0 * h)).scale(0.5 / h),
            true,
        )
    } else {
        (
            (ax(x, y).scale(3.0) - ax(x, y - h).scale(4.0) + ax(x, y - 2.0 * h)).scale(0.5 / h),
            true,
        )
    };

    let (axp, ayp) = conn.evaluate(x, y);
    let comm = axp.matrix() * ayp.matrix() - ayp.matrix() * axp.matrix();
    let f = dx_ay - dy_ax - comm * I;
    // derivatives and commutators of algebra-valued fields stay in the span;
    // tolerance absorbs FD roundoff only
    let elem = AlgebraElement::from_matrix(rep, &f, 1e-5)
        .expect("finite-difference curvature lies in the algebra span");
    let meta =
        CurvatureMeta { method: CurvatureMethod::FiniteDifference, h, one_sided_x, one_sided_y };
    (elem, meta)
}

/// F_xy(p) = ∂_xA_y − ∂_yA_x − i[A_x,A_y]; metadata-free convenience form.
pub fn field_strength(conn: &Connection, x: f64, y: f64, h: f64) -> AlgebraElement {
    field_strength_meta(conn, x, y, h).0
}

/// Gauge-transform a connection: A^g_i = i g†∂_i g + g† A_i g, with ∂g by
/// central differences of step `g_step`. Unitarity of g is screened on a
/// coarse sample grid (defect ≤ 1e−9); the transformed curvature is carried
/// analytically as g†Fg whenever the original family had a closed form.
pub fn gauge_transform(
    conn: &Connection,
    g: GaugeFn,
    g_step: f64,
) -> Result<Connection, FieldError> {
    for i in 0..=4 {
        for j in 0..=4 {
            let (x, y) = (i as f64 / 4.0, j as f64 / 4.0);
            let defect = g(x, y).unitarity_defect();
            if defect > 1e-9 {
                return Err(FieldError::GaugeNotUnitary { defect, x, y });
            }
        }
    }
    let rep = conn.rep().clone();
    let base = conn.clone();
    let gg = g.clone();
    let eval = Arc::new(move |x: f64, y: f64| {
        let gm = gg(x, y).matrix().clone();
        let gd = dagger(&gm);
        // ∂g by central differences (the sample domain is unconstrained: g
        // is defined by a closure, not a chart)
        let dgx = (gg(x + g_step, y).matrix() - gg(x - g_step, y).matrix()).scale(0.5 / g_step);
        let dgy = (gg(x, y + g_step).matrix() - gg(x, y - g_step).matrix()).scale(0.5 / g_step);
        let (ax, ay) = base.evaluate(x, y);
        let new_ax = &gd * &dgx * I + &gd * ax.matrix() * &gm;
        let new_ay = &gd * &dgy * I + &gd * ay.matrix() * &gm;
        let project = |m: &CMat| {
            let herm = (m + dagger(m)).scale(0.5);
            AlgebraElement::from_matrix(rep.clone(), &herm, 1e-5)
                .expect("gauge transform stays in the algebra span")
        };
        (project(&new_ax), project(&new_ay))
    });
    let curv = conn.curvature_analytic.as_ref().map(|c| {
        let c = c.clone();
        let g = g.clone();
        let rep = conn.rep().clone();
        let f: Arc<CurvFn> = Arc::new(move |x: f64, y: f64| {
            let gm = g(x, y).matrix().clone();
            let fm = dagger(&gm) * c(x, y).matrix() * &gm;
            AlgebraElement::from_matrix(rep.clone(), &fm, 1e-8)
                .expect("conjugated curvature stays in the algebra span")
        });
        f
    });
    Ok(Connection::from_closures(
        conn.rep().clone(),
        format!("gauge_transformed({})", conn.family()),
        conn.params().to_vec(),
        eval,
        curv,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_rep, Group, RepLabel};
    use crate::linalg::{frob, hermiticity_defect, ident};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn su2() -> Arc<LieAlgebraRep> {
        build_rep(Group::Su2, RepLabel::Fundamental).unwrap()
    }

    #[test]
    fn zero_connection_has_zero_curvature() {
        let conn = Connection::zero(su2());
        for &(x, y) in &[(0.0, 0.0), (0.5, 0.5), (1.0, 0.3)] {
            let (f, meta) = field_strength_meta(&conn, x, y, DEFAULT_FD_STEP);
            assert_eq!(meta.method, CurvatureMethod::Analytic);
            assert!(frob(f.matrix()) < 1e-15, "zero field has zero curvature");
            let (ffd, _) = field_strength_fd(&conn, x, y, DEFAULT_FD_STEP);
            assert!(frob(ffd.matrix()) < 1e-12);
        }
    }

    #[test]
    fn constant_abelian_curvature_is_uniform() {
        let c = 1.7;
        let conn = Connection::constant_abelian(su2(), c);
        for &(x, y) in &[(0.1, 0.9), (0.5, 0.5), (0.0, 1.0)] {
            let f = field_strength(&conn, x, y, DEFAULT_FD_STEP);
            assert!((f.coeffs()[2] - c).abs() < 1e-12, "F = c·T³ uniformly, got {:?}", f.coeffs());
            let (ffd, meta) = field_strength_fd(&conn, x, y, DEFAULT_FD_STEP);
            assert!((ffd.coeffs()[2] - c).abs() < 1e-9, "FD curvature matches, got {:?}", ffd.coeffs());
            assert_eq!(meta.one_sided_x, x - DEFAULT_FD_STEP < 0.0 || x + DEFAULT_FD_STEP > 1.0);
        }
    }

    #[test]
    fn constant_noncommuting_curvature_is_the_commutator() {
        let (a, b) = (0.8, -1.3);
        let conn = Connection::constant_noncommuting(su2(), a, b);
        let f = field_strength(&conn, 0.4, 0.6, DEFAULT_FD_STEP);
        // su2: F = ab·T³
        assert!((f.coeffs()[2] - a * b).abs() < 1e-12, "F = ab·T³");
        assert!(f.coeffs()[0].abs() < 1e-12 && f.coeffs()[1].abs() < 1e-12);
        let (ffd, _) = field_strength_fd(&conn, 0.4, 0.6, DEFAULT_FD_STEP);
        assert!((ffd.coeffs()[2] - a * b).abs() < 1e-9, "derivatives vanish, commutator survives FD");
    }

    #[test]
    fn su3_constant_noncommuting_curvature() {
        let rep = build_rep(Group::Su3, RepLabel::Fundamental).unwrap();
        let conn = Connection::constant_noncommuting(rep, 0.5, 0.4);
        let f = field_strength(&conn, 0.2, 0.2, DEFAULT_FD_STEP);
        assert!((f.coeffs()[2] - 0.2).abs() < 1e-12, "f^{{123}} = 1 channel only");
        assert!(f.coeffs().iter().enumerate().all(|(i, &v)| i == 2 || v.abs() < 1e-12));
    }

    #[test]
    fn pure_gauge_curvature_vanishes() {
        let conn = Connection::pure_gauge(su2(), 0.9, 1.4);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..25 {
            let (x, y) = (rng.gen::<f64>(), rng.gen::<f64>());
            let (f, _) = field_strength_fd(&conn, x, y, DEFAULT_FD_STEP);
            assert!(frob(f.matrix()) < 1e-8, "pure gauge is flat, got ‖F‖ = {}", frob(f.matrix()));
        }
    }

    #[test]
    fn flat_angular_curvature_vanishes_everywhere() {
        let conn = flat_angular_connection(su2(), 0.37);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let (x, y) = (rng.gen::<f64>(), rng.gen::<f64>());
            let f = field_strength(&conn, x, y, DEFAULT_FD_STEP);
            assert!(frob(f.matrix()) < 1e-12);
            let (ffd, _) = field_strength_fd(&conn, x, y, DEFAULT_FD_STEP);
            assert!(frob(ffd.matrix()) < 1e-9);
        }
    }

    #[test]
    fn fd_error_is_second_order() {
        // polynomial family: cubic coordinate dependence gives an exactly
        // h²-proportional central-difference error, so halving h divides the
        // max-norm error over the sample grid by ~4
        let conn = Connection::polynomial(su2(), 0.9, -0.7, 0.5);
        let mut err = [0.0f64; 2];
        for (k, h) in [1e-2, 5e-3].into_iter().enumerate() {
            for i in 0..16 {
                for j in 0..16 {
                    let (x, y) = ((i as f64 + 0.5) / 16.0, (j as f64 + 0.5) / 16.0);
                    let exact = field_strength(&conn, x, y, h);
                    let (fd, meta) = field_strength_fd(&conn, x, y, h);
                    assert_eq!((meta.one_sided_x, meta.one_sided_y), (false, false));
                    err[k] = err[k].max(frob(&(fd.matrix() - exact.matrix())));
                }
            }
        }
        let ratio = err[0] / err[1];
        assert!(
            (3.5..=4.5).contains(&ratio),
            "FD error ratio under h-halving = {ratio}, want ≈ 4 (errors {err:?})"
        );
    }

    #[test]
    fn gauge_transform_by_constant_conjugates() {
        let rep = su2();
        let conn = Connection::constant_noncommuting(rep.clone(), 1.1, 0.6);
        let gconst = AlgebraElement::new(rep.clone(), vec![0.3, 0.9, -0.4]).expi();
        let g: GaugeFn = {
            let gconst = gconst.clone();
            Arc::new(move |_, _| gconst.clone())
        };
        let transformed = gauge_transform(&conn, g, 1e-5).unwrap();
        let (ax, _) = conn.evaluate(0.3, 0.8);
        let (axg, _) = transformed.evaluate(0.3, 0.8);
        let want = dagger(gconst.matrix()) * ax.matrix() * gconst.matrix();
        assert!(
            frob(&(axg.matrix() - want)) < 1e-9,
            "constant g: derivative term vanishes, A^g = g†Ag"
        );
    }

    #[test]
    fn gauge_transform_sign_convention() {
        // A = 0, g = exp(ixT³) → A^g_x = i g†∂_x g = −T³
        let rep = su2();
        let conn = Connection::zero(rep.clone());
        let g: GaugeFn = {
            let rep = rep.clone();
            Arc::new(move |x, _| {
                let mut k = vec![0.0; 3];
                k[2] = x;
                AlgebraElement::new(rep.clone(), k).expi()
            })
        };
        let transformed = gauge_transform(&conn, g, 1e-5).unwrap();
        let (axg, ayg) = transformed.evaluate(0.4, 0.7);
        assert!((axg.coeffs()[2] + 1.0).abs() < 1e-8, "A^g_x = −T³, got {:?}", axg.coeffs());
        assert!(frob(ayg.matrix()) < 1e-10, "A^g_y = 0");
    }

    #[test]
    fn gauge_transform_rejects_non_unitary_g() {
        let rep = su2();
        let conn = Connection::zero(rep.clone());
        let g: GaugeFn = {
            let rep = rep.clone();
            Arc::new(move |_, _| {
                GroupElement::from_matrix(rep.clone(), ident(2).scale(1.0 + 1e-6))
            })
        };
        assert!(matches!(
            gauge_transform(&conn, g, 1e-5),
            Err(FieldError::GaugeNotUnitary { .. })
        ));
    }

    #[test]
    fn curvature_is_gauge_covariant() {
        // F(A^g) = g†F(A)g, FD on the transformed side
        let rep = su2();
        let conn = Connection::constant_noncommuting(rep.clone(), 0.9, 0.4);
        let g = pure_gauge_g(rep, 0.7, 0.5);
        let transformed = gauge_transform(&conn, g.clone(), 1e-5).unwrap();
        for &(x, y) in &[(0.25, 0.5), (0.5, 0.75), (0.8, 0.2)] {
            let (fg, _) = field_strength_fd(&transformed, x, y, 1e-4);
            let f = field_strength(&conn, x, y, 1e-4);
            let gm = g(x, y);
            let want = dagger(gm.matrix()) * f.matrix() * gm.matrix();
            let diff = frob(&(fg.matrix() - want));
            assert!(diff < 1e-6, "gauge covariance of F at ({x},{y}): diff = {diff}");
        }
    }

    #[test]
    fn family_dispatch_and_param_validation() {
        let rep = su2();
        assert_eq!(Connection::from_family(rep.clone(), "zero", &[]).unwrap().family(), "zero");
        assert!(Connection::from_family(rep.clone(), "constant_abelian", &[2.0]).is_ok());
        assert!(matches!(
            Connection::from_family(rep.clone(), "constant_abelian", &[]),
            Err(FieldError::BadParams { expected: 1, got: 0, .. })
        ));
        assert!(matches!(
            Connection::from_family(rep.clone(), "warp", &[1.0]),
            Err(FieldError::UnknownFamily(_))
        ));
        let poly = Connection::from_family(rep, "polynomial", &[0.1, 0.2, 0.3]).unwrap();
        assert_eq!(poly.params(), &[0.1, 0.2, 0.3]);
    }

    #[test]
    fn evaluate_is_hermitian_valued() {
        let conn = Connection::polynomial(su2(), 1.0, 2.0, 3.0);
        let (ax, ay) = conn.evaluate(0.77, 0.31);
        assert!(hermiticity_defect(ax.matrix()) < 1e-14);
        assert!(hermiticity_defect(ay.matrix()) < 1e-14);
    }

    #[test]
    fn pure_gauge_potential_matches_its_gauge_function() {
        // A_x at (x,y) should equal i g†∂_x g computed numerically from g
        let rep = su2();
        let (a, b) = (0.8, 1.1);
        let conn = Connection::pure_gauge(rep.clone(), a, b);
        let g = pure_gauge_g(rep, a, b);
        let s = 1e-6;
        for &(x, y) in &[(0.3, 0.4), (0.9, 0.1), (0.5, 1.0)] {
            let dgx = (g(x + s, y).matrix() - g(x - s, y).matrix()).scale(0.5 / s);
            let want_ax = dagger(g(x, y).matrix()) * dgx * I;
            let (ax, ay) = conn.evaluate(x, y);
            assert!(frob(&(ax.matrix() - &want_ax)) < 1e-8, "closed form A_x vs i g†∂g at ({x},{y})");
            assert!((ay.coeffs()[1] + b).abs() < 1e-12, "A_y = −b·T²");
        }
    }
}
