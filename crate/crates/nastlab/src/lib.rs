//! A numerical and symbolic laboratory for the non-Abelian Stokes theorem in
//! operator form, together with the constructions that follow from it: exact
//! two-dimensional Yang-Mills Wilson-loop expectations, Chern-Simons monodromy
//! and braiding matrices, and the Seifert-surface lasso decomposition of a
//! knotted loop.
//!
//! The theorem itself states that the holonomy of a connection A around the
//! boundary of a surface S equals a *surface-ordered* exponential of the
//! *twisted* curvature,
//!
//! ```text
//!     P exp( i ∮_∂S A )  =  𝒫 exp( i ∫_S U⁻¹ F U )
//! ```
//!
//! where U transports each surface point back to the base point, so that all
//! plaquette contributions live in a common fiber. The [`stokes`] module
//! realizes both sides on the unit parameter square and measures their
//! difference as the plaquette grid refines; the exact finite-N lasso
//! telescoping identity is exposed separately from the O(1/N) exponential
//! approximation.
//!
//! # Ordering conventions
//!
//! Every ordered product in this crate uses one convention: **the leftmost
//! factor acts last**,
//!
//! ```text
//!     Π_{n=1..N} X_n = X_N · X_{N−1} · … · X_1 ,
//! ```
//!
//! and the surface-ordered double product arranges plaquette rows bottom-up,
//! within each row left-to-right, the row n = 1 factors standing rightmost:
//!
//! ```text
//!     P_{s,t} Π X_{m,n} = (X_{N,N}…X_{1,N}) ⋯ (X_{N,1}…X_{1,1}) .
//! ```
//!
//! Plaquettes are traversed counterclockwise, so Abelian holonomies reproduce
//! +flux. The coupling constant is set to 1 throughout.
//!
//! # Modules
//!
//! - [`algebra`] — su(2)/su(3) representations, Cartan data, Casimirs, tensor
//!   products, unitary matrix exponentials.
//! - [`fields`] — a catalog of connections on the unit square with analytic
//!   curvature, gauge transformations, and finite-difference fallbacks.
//! - [`transport`] — paths, the groupoid calculus of parallel transports, and
//!   path-ordered-exponential evaluators (midpoint and literal Euler), plus a
//!   truncated Dyson series.
//! - [`stokes`] — the operator Stokes theorem: L-shaped transporters, plaquette
//!   holonomies, twisted curvature, lasso products, convergence reports.
//! - [`quantization`] — finite, testable cores of the coherent-state and
//!   holomorphic (Fock) formulations: resolution of unity, highest-weight
//!   expectation reduction, one-particle equivalence, and the surface↔line
//!   identity for the topological action.
//! - [`yangmills2d`] — exact 2D Yang-Mills Wilson-loop expectations and the
//!   block calculus for overlapping loops.
//! - [`chernsimons`] — monodromy matrices, braiding matrices, and skein
//!   coefficients at level k.
//! - [`knotwords`] — free words in oriented path generators and the symbolic
//!   Seifert decomposition verified by free reduction.

pub mod algebra;
pub mod chernsimons;
pub mod fields;
pub mod knotwords;
pub mod linalg;
pub mod quantization;
pub mod stokes;
pub mod transport;
pub mod yangmills2d;

pub use algebra::{build_rep, AlgebraElement, Group, GroupElement, LieAlgebraRep, RepLabel};
pub use fields::Connection;
pub use linalg::{CMat, CVec, C64};
pub use transport::PathSpec;
