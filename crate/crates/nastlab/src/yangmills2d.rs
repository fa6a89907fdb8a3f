//! Exact Wilson-loop expectation values of two-dimensional Yang-Mills.
//!
//! The Gaussian plaquette integration gives the single-loop closed form
//!
//! ```text
//!     ⟨W_R(S)⟩ = dim R · exp(−½ C₂(R) S)
//! ```
//!
//! with S the enclosed area (the theory sees areas only — no geometry).
//! Products of non-overlapping loops factorize. Overlapping loops are
//! handled by the block calculus: each region α carries
//! M_α = exp(−½ S_α T_α²) on the tensor product of the representations
//! present in it, where T_α = Σ T_i are the coproduct generators. T_α² is
//! a Casimir operator of the product — every M block commutes with the
//! generators and with every other block over the same member set, so the
//! supported contractions reduce to scalar factors times one trace.
//!
//! Supported topologies: any number of mutually disjoint loops, two loops
//! with arbitrary shared/unshared regions, and n fully-coincident loops
//! (plus per-loop exclusive areas). Anything else — three or more loops
//! with partial overlaps — raises an explicit unsupported-topology error,
//! never a wrong number.

use crate::algebra::{casimir2, tensor_sum_generators, AlgebraError, LieAlgebraRep};
use crate::linalg::{cr, herm_eigen, herm_fn, CMat, LinalgError};
use std::sync::Arc;
use thiserror::Error;

/// Errors from the block calculus and its input validation.
#[derive(Debug, Error)]
pub enum YmError {
    #[error("area must be nonnegative, got {0}")]
    NegativeArea(f64),
    #[error("region {region} references loop {loop_idx}, but only {n_loops} loops are declared")]
    BadLoopIndex { region: usize, loop_idx: usize, n_loops: usize },
    #[error("loop {0} is not a member of any region")]
    LoopWithoutRegion(usize),
    #[error("contraction order of loop {loop_idx} must visit its member regions exactly once each (got {got:?}, expected a permutation of {want:?})")]
    BadContractionOrder { loop_idx: usize, got: Vec<usize>, want: Vec<usize> },
    #[error("unsupported overlap topology: region member sets {0:?} — supported are ≤ 2 loops with arbitrary regions and the fully-coincident n-loop case")]
    UnsupportedTopology(Vec<Vec<usize>>),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// One region of the decomposed surface: its area and the loops whose
/// interiors cover it.
#[derive(Clone, Debug)]
pub struct Region {
    pub area: f64,
    pub members: Vec<usize>,
}

impl Region {
    pub fn new(area: f64, mut members: Vec<usize>) -> Self {
        members.sort_unstable();
        members.dedup();
        Self { area, members }
    }
}

/// A system of loops and the regions their union decomposes into; the
/// contraction order lists each loop's region visits (the linking data).
#[derive(Clone, Debug)]
pub struct RegionDecomposition {
    pub regions: Vec<Region>,
    pub loops: Vec<Arc<LieAlgebraRep>>,
    pub contraction_order: Vec<Vec<usize>>,
}

impl RegionDecomposition {
    /// Decomposition with the canonical contraction order (each loop visits
    /// its member regions in declaration order).
    pub fn with_canonical_order(regions: Vec<Region>, loops: Vec<Arc<LieAlgebraRep>>) -> Self {
        let order = (0..loops.len())
            .map(|i| {
                regions
                    .iter()
                    .enumerate()
                    .filter(|(_, r)| r.members.contains(&i))
                    .map(|(k, _)| k)
                    .collect()
            })
            .collect();
        Self { regions, loops, contraction_order: order }
    }

    fn validate(&self) -> Result<(), YmError> {
        let n = self.loops.len();
        for (k, r) in self.regions.iter().enumerate() {
            if r.area < 0.0 {
                return Err(YmError::NegativeArea(r.area));
            }
            for &i in &r.members {
                if i >= n {
                    return Err(YmError::BadLoopIndex { region: k, loop_idx: i, n_loops: n });
                }
            }
        }
        for i in 0..n {
            let mut want: Vec<usize> = self
                .regions
                .iter()
                .enumerate()
                .filter(|(_, r)| r.members.contains(&i))
                .map(|(k, _)| k)
                .collect();
            if want.is_empty() {
                return Err(YmError::LoopWithoutRegion(i));
            }
            let mut got = self.contraction_order.get(i).cloned().unwrap_or_default();
            let got_raw = got.clone();
            got.sort_unstable();
            want.sort_unstable();
            if got != want {
                return Err(YmError::BadContractionOrder { loop_idx: i, got: got_raw, want });
            }
        }
        Ok(())
    }
}

/// Expectation value plus the inputs it was computed from.
#[derive(Clone, Debug)]
pub struct WilsonResult {
    pub value: f64,
    pub rep_labels: Vec<String>,
    pub areas: Vec<f64>,
}

/// ⟨W_R(S)⟩ = dim R · exp(−½ C₂(R) S).
pub fn wilson_expectation(rep: &LieAlgebraRep, area: f64) -> Result<f64, YmError> {
    if area < 0.0 {
        return Err(YmError::NegativeArea(area));
    }
    let c2 = casimir2(rep)?;
    Ok(rep.dim_r() as f64 * (-0.5 * c2 * area).exp())
}

/// Product of single-loop expectations (non-overlapping loops factorize).
pub fn multi_loop_nonoverlapping(reps_areas: &[(Arc<LieAlgebraRep>, f64)]) -> Result<f64, YmError> {
    let mut v = 1.0;
    for (rep, s) in reps_areas {
        v *= wilson_expectation(rep, *s)?;
    }
    Ok(v)
}

/// M_α = exp(−½ S_α T_α²) on the tensor product of the representations
/// present in region α: positive-definite Hermitian, commuting with every
/// coproduct generator.
pub fn m_block(reps_present: &[Arc<LieAlgebraRep>], area: f64) -> Result<CMat, YmError> {
    if area < 0.0 {
        return Err(YmError::NegativeArea(area));
    }
    let gens = tensor_sum_generators(reps_present)?;
    let dim = gens[0].nrows();
    let mut t2 = CMat::zeros(dim, dim);
    for t in &gens {
        t2 += t * t;
    }
    Ok(herm_fn(&t2, 1e-9, |x| cr((-0.5 * area * x).exp()))?)
}

/// Contract the M blocks of a decomposition into ⟨Π W⟩.
///
/// Blocks over the supported topologies are simultaneous Casimir functions,
/// so they commute and the contraction order (validated as linking data)
/// does not influence the value: exclusive regions contribute the scalar
/// exp(−½ C₂ S), regions shared by all loops contribute one trace of
/// exp(−½ S_shared T_α²) over the full tensor product.
pub fn contract_blocks(decomp: &RegionDecomposition) -> Result<WilsonResult, YmError> {
    decomp.validate()?;
    let n = decomp.loops.len();
    let rep_labels: Vec<String> =
        decomp.loops.iter().map(|r| format!("{} {}", r.group(), r.label())).collect();
    let areas: Vec<f64> = decomp.regions.iter().map(|r| r.area).collect();

    // per-loop exclusive area and the total area shared by the full set
    let mut exclusive = vec![0.0f64; n];
    let mut shared_full = 0.0f64;
    let mut offending: Vec<Vec<usize>> = Vec::new();
    for r in &decomp.regions {
        match r.members.len() {
            1 => exclusive[r.members[0]] += r.area,
            len if len == n => shared_full += r.area,
            _ => offending.push(r.members.clone()),
        }
    }
    if !offending.is_empty() {
        return Err(YmError::UnsupportedTopology(offending));
    }

    // exclusive scalars: exp(−½ C₂(R_i) S_i^excl), dimension factors kept
    // for the trace below when no region couples the loops
    let mut value = 1.0;
    for (i, rep) in decomp.loops.iter().enumerate() {
        value *= (-0.5 * casimir2(rep)? * exclusive[i]).exp();
    }

    if shared_full > 0.0 && n > 1 {
        let m = m_block(&decomp.loops, shared_full)?;
        value *= m.trace().re;
    } else {
        // no coupling trace: Tr I over the product = Π dim R_i
        for rep in &decomp.loops {
            value *= rep.dim_r() as f64;
        }
    }
    Ok(WilsonResult { value, rep_labels, areas })
}

/// Spectrum check utility: eigenvalues of T_α² on a product, paired with
/// exp(−½·S·λ) — exposed for the CLI's block-calculus report.
pub fn m_block_spectrum(
    reps_present: &[Arc<LieAlgebraRep>],
    area: f64,
) -> Result<Vec<(f64, f64)>, YmError> {
    if area < 0.0 {
        return Err(YmError::NegativeArea(area));
    }
    let gens = tensor_sum_generators(reps_present)?;
    let dim = gens[0].nrows();
    let mut t2 = CMat::zeros(dim, dim);
    for t in &gens {
        t2 += t * t;
    }
    let (vals, _) = herm_eigen(&t2, 1e-9)?;
    Ok(vals.iter().map(|&x| (x, (-0.5 * area * x).exp())).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_rep, Group, RepLabel};
    use crate::linalg::{commutator, frob, ident};

    fn su2_fund() -> Arc<LieAlgebraRep> {
        build_rep(Group::Su2, RepLabel::Fundamental).unwrap()
    }

    fn su2_spin1() -> Arc<LieAlgebraRep> {
        build_rep(Group::Su2, RepLabel::Spin { twice_j: 2 }).unwrap()
    }

    #[test]
    fn single_loop_closed_form() {
        let fund = su2_fund();
        assert_eq!(wilson_expectation(&fund, 0.0).unwrap(), 2.0, "S = 0 gives dim R");
        // frozen oracle: 2·e^{−3/4}
        let w = wilson_expectation(&fund, 2.0).unwrap();
        assert!(
            (w - 0.9447331054820294).abs() < 1e-12,
            "su2 fundamental at S = 2: {w}"
        );
        let spin1 = su2_spin1();
        let w1 = wilson_expectation(&spin1, 1.0).unwrap();
        assert!((w1 - 3.0 * (-1.0f64).exp()).abs() < 1e-12, "C₂(spin 1) = 2: {w1}");
        assert!(matches!(wilson_expectation(&fund, -0.1), Err(YmError::NegativeArea(_))));
    }

    #[test]
    fn expectation_is_monotone_in_area_and_casimir() {
        let fund = su2_fund();
        let spin1 = su2_spin1();
        let mut prev = f64::INFINITY;
        for k in 0..8 {
            let s = k as f64 * 0.35;
            let w = wilson_expectation(&fund, s).unwrap();
            assert!(w < prev || k == 0, "decreasing in S");
            prev = w;
            // larger Casimir decays faster (normalized by dimension)
            let wn = w / 2.0;
            let w1n = wilson_expectation(&spin1, s).unwrap() / 3.0;
            assert!(w1n <= wn + 1e-15, "C₂ monotonicity at S = {s}");
        }
    }

    #[test]
    fn nonoverlapping_loops_factorize() {
        assert_eq!(multi_loop_nonoverlapping(&[]).unwrap(), 1.0, "empty product");
        let fund = su2_fund();
        let v = multi_loop_nonoverlapping(&[(fund.clone(), 1.0), (fund.clone(), 1.0)]).unwrap();
        // (2e^{−3/8})² = 4e^{−3/4}
        assert!((v - 4.0 * (-0.75f64).exp()).abs() < 1e-12, "two unit loops: {v}");
        let w1 = wilson_expectation(&fund, 0.7).unwrap();
        let w2 = wilson_expectation(&su2_spin1(), 1.3).unwrap();
        let v = multi_loop_nonoverlapping(&[(fund, 0.7), (su2_spin1(), 1.3)]).unwrap();
        assert!((v - w1 * w2).abs() < 1e-14);
    }

    #[test]
    fn m_block_basics() {
        let fund = su2_fund();
        let m0 = m_block(&[fund.clone(), fund.clone()], 0.0).unwrap();
        assert!(frob(&(&m0 - ident(4))) < 1e-12, "S = 0 is the identity");

        // single rep: scalar e^{−½C₂S}·I
        let m1 = m_block(std::slice::from_ref(&fund), 0.8).unwrap();
        let want = ident(2).scale((-0.5 * 0.75 * 0.8f64).exp());
        assert!(frob(&(&m1 - want)) < 1e-12);

        // frozen oracle: 2⊗2 at S = 1 has eigenvalues {e^{−1}×3, 1×1}
        let (vals, _) = herm_eigen(&m_block(&[fund.clone(), fund.clone()], 1.0).unwrap(), 1e-9).unwrap();
        let mut v: Vec<f64> = vals.iter().copied().collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let e1 = (-1.0f64).exp();
        for (got, want) in v.iter().zip([e1, e1, e1, 1.0]) {
            assert!((got - want).abs() < 1e-10, "2⊗2 M spectrum: {v:?}");
        }
    }

    #[test]
    fn m_block_commutes_with_coproduct_generators() {
        let fund = su2_fund();
        let reps = [fund.clone(), su2_spin1()];
        let m = m_block(&reps, 1.3).unwrap();
        for t in tensor_sum_generators(&reps).unwrap() {
            assert!(frob(&commutator(&m, &t)) < 1e-10, "[M, T_α^a] = 0");
        }
    }

    #[test]
    fn coincident_loops_trace_the_casimir_blocks() {
        let fund = su2_fund();
        // frozen oracle: Tr exp(−½·S·T_α²) on 2⊗2 at S = 1 is 3e^{−1} + 1
        let decomp = RegionDecomposition::with_canonical_order(
            vec![Region::new(1.0, vec![0, 1])],
            vec![fund.clone(), fund.clone()],
        );
        let r = contract_blocks(&decomp).unwrap();
        assert!((r.value - 2.103638323514327).abs() < 1e-12, "3e^{{-1}}+1: {}", r.value);

        // independent oracle at arbitrary S: eigensolve of T_α²
        for (reps, s) in [
            (vec![fund.clone(), fund.clone()], 0.8),
            (vec![fund.clone(), su2_spin1()], 0.8),
        ] {
            let decomp = RegionDecomposition::with_canonical_order(
                vec![Region::new(s, (0..reps.len()).collect())],
                reps.clone(),
            );
            let got = contract_blocks(&decomp).unwrap().value;
            let want: f64 = m_block_spectrum(&reps, s).unwrap().iter().map(|(_, w)| w).sum();
            assert!((got - want).abs() < 1e-10, "coincident trace vs eigensolve: {got} vs {want}");
        }
    }

    #[test]
    fn coincident_identity_matches_clebsch_gordan_sum() {
        // Tr exp(−½S T²) = Σ_R dim R · e^{−½C₂(R)S} over the components
        let s = 0.8;
        let decomp = RegionDecomposition::with_canonical_order(
            vec![Region::new(s, vec![0, 1])],
            vec![su2_fund(), su2_spin1()],
        );
        let got = contract_blocks(&decomp).unwrap().value;
        // 2⊗3 = 2 ⊕ 4 with C₂ = {3/4, 15/4}
        let want = 2.0 * (-0.5 * 0.75 * s).exp() + 4.0 * (-0.5 * 3.75 * s).exp();
        assert!((got - want).abs() < 1e-10, "{got} vs {want}");
    }

    #[test]
    fn disjoint_decomposition_reduces_to_product_of_singles() {
        let fund = su2_fund();
        let decomp = RegionDecomposition::with_canonical_order(
            vec![Region::new(0.9, vec![0]), Region::new(1.4, vec![1])],
            vec![fund.clone(), su2_spin1()],
        );
        let got = contract_blocks(&decomp).unwrap().value;
        let want = multi_loop_nonoverlapping(&[(fund, 0.9), (su2_spin1(), 1.4)]).unwrap();
        assert!((got - want).abs() < 1e-12, "block-diagonal factorization: {got} vs {want}");
    }

    #[test]
    fn single_loop_contraction_equals_wilson_expectation() {
        let fund = su2_fund();
        // two exclusive regions of one loop: areas add
        let decomp = RegionDecomposition::with_canonical_order(
            vec![Region::new(0.4, vec![0]), Region::new(0.35, vec![0])],
            vec![fund.clone()],
        );
        let got = contract_blocks(&decomp).unwrap().value;
        let want = wilson_expectation(&fund, 0.75).unwrap();
        assert!((got - want).abs() < 1e-14, "{got} vs {want}");
    }

    #[test]
    fn lens_overlap_vanishing_shared_area_is_continuous() {
        let fund = su2_fund();
        let (s1, s2) = (0.9, 0.6);
        let disjoint = multi_loop_nonoverlapping(&[(fund.clone(), s1), (fund.clone(), s2)]).unwrap();
        let mut prev_gap = f64::INFINITY;
        for s12 in [1e-3, 1e-6] {
            let decomp = RegionDecomposition::with_canonical_order(
                vec![
                    Region::new(s1 - s12, vec![0]),
                    Region::new(s2 - s12, vec![1]),
                    Region::new(s12, vec![0, 1]),
                ],
                vec![fund.clone(), fund.clone()],
            );
            let v = contract_blocks(&decomp).unwrap().value;
            let gap = (v - disjoint).abs();
            assert!(gap < 5.0 * s12, "lens S₁₂ = {s12}: gap {gap}");
            assert!(gap < prev_gap, "gap shrinks with the lens");
            prev_gap = gap;
        }
    }

    #[test]
    fn value_bounds_hold() {
        // 0 < value ≤ Π dim R for positive areas
        let fund = su2_fund();
        let decomp = RegionDecomposition::with_canonical_order(
            vec![Region::new(0.2, vec![0]), Region::new(0.5, vec![0, 1]), Region::new(0.1, vec![1])],
            vec![fund.clone(), fund],
        );
        let v = contract_blocks(&decomp).unwrap().value;
        assert!(v > 0.0 && v <= 4.0, "0 < {v} ≤ dim²");
    }

    #[test]
    fn partial_three_loop_overlap_is_refused() {
        let fund = su2_fund();
        let decomp = RegionDecomposition::with_canonical_order(
            vec![
                Region::new(0.5, vec![0, 1]),
                Region::new(0.5, vec![2]),
            ],
            vec![fund.clone(), fund.clone(), fund.clone()],
        );
        assert!(
            matches!(contract_blocks(&decomp), Err(YmError::UnsupportedTopology(_))),
            "pairwise overlap among three loops must refuse, not approximate"
        );
        // fully coincident three loops are supported
        let decomp = RegionDecomposition::with_canonical_order(
            vec![Region::new(0.5, vec![0, 1, 2])],
            vec![fund.clone(), fund.clone(), fund],
        );
        assert!(contract_blocks(&decomp).is_ok());
    }

    #[test]
    fn decomposition_validation() {
        let fund = su2_fund();
        let bad_area = RegionDecomposition::with_canonical_order(
            vec![Region::new(-0.3, vec![0])],
            vec![fund.clone()],
        );
        assert!(matches!(contract_blocks(&bad_area), Err(YmError::NegativeArea(_))));

        let bad_idx = RegionDecomposition::with_canonical_order(
            vec![Region::new(0.3, vec![0, 7])],
            vec![fund.clone()],
        );
        assert!(matches!(contract_blocks(&bad_idx), Err(YmError::BadLoopIndex { .. })));

        let orphan = RegionDecomposition::with_canonical_order(
            vec![Region::new(0.3, vec![0])],
            vec![fund.clone(), fund.clone()],
        );
        assert!(matches!(contract_blocks(&orphan), Err(YmError::LoopWithoutRegion(1))));

        let mut bad_order = RegionDecomposition::with_canonical_order(
            vec![Region::new(0.3, vec![0]), Region::new(0.2, vec![0])],
            vec![fund],
        );
        bad_order.contraction_order[0] = vec![0];
        assert!(matches!(
            contract_blocks(&bad_order),
            Err(YmError::BadContractionOrder { loop_idx: 0, .. })
        ));
    }
}
