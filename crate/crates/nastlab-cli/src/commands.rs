//! One function per subcommand. Each reads its slice of the configuration,
//! refuses bad input with a named key, runs the library, and renders the
//! outcome in the resolved format. Warnings accumulate and turn the exit
//! status to 2 without suppressing the output.

use std::sync::Arc;

use serde::Serialize;

use nastlab::algebra::{build_rep, AlgebraElement, Group, LieAlgebraRep, RepLabel};
use nastlab::chernsimons::{self, CsError, MonodromyResult, SkeinResult};
use nastlab::fields::{field_strength, Connection, DEFAULT_FD_STEP};
use nastlab::knotwords::{self, KnotError};
use nastlab::linalg::{frob, ident, C64};
use nastlab::quantization::{self, QuantError};
use nastlab::stokes::{
    nast_verify_with, NastReport, DEFAULT_EDGE_STEPS, DEFAULT_LHS_MULTIPLIER,
    DEFAULT_UNITARITY_BUDGET,
};
use nastlab::transport::{path_ordered_exp, Method, PathSpec};
use nastlab::yangmills2d::{self, Region, RegionDecomposition, YmError};

use crate::config::{resolve_format, Format, RunConfig};
use crate::fmt::sig12;
use crate::{CliError, Outcome};

/// Complex number as a stable-order JSON object.
#[derive(Serialize)]
struct Cx {
    re: f64,
    im: f64,
}

impl From<C64> for Cx {
    fn from(z: C64) -> Self {
        Cx { re: z.re, im: z.im }
    }
}

fn json_pretty<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Internal(format!("serialization: {e}")))?;
    s.push('\n');
    Ok(s)
}

fn parse_rep(group: &str, label: &str) -> Result<Arc<LieAlgebraRep>, CliError> {
    let g: Group = group.parse().map_err(|e| CliError::Config(format!("{e}")))?;
    let l = RepLabel::parse(label).map_err(CliError::Config)?;
    build_rep(g, l).map_err(|e| CliError::Config(format!("{e}")))
}

fn rep_from(cfg: &RunConfig) -> Result<Arc<LieAlgebraRep>, CliError> {
    parse_rep(
        cfg.group.as_deref().unwrap_or("su2"),
        cfg.representation.as_deref().unwrap_or("fundamental"),
    )
}

fn connection_from(cfg: &RunConfig, command: &str) -> Result<Connection, CliError> {
    let rep = rep_from(cfg)?;
    let field = cfg
        .field
        .as_ref()
        .ok_or_else(|| CliError::Config(format!("{command} requires a \"field\" section")))?;
    Connection::from_family(rep, &field.family, &field.params)
        .map_err(|e| CliError::Config(format!("{e}")))
}

fn ym_error(e: YmError) -> CliError {
    match e {
        YmError::NegativeArea(_) => CliError::Config(format!("{e}")),
        YmError::UnsupportedTopology(_) => CliError::Refused(format!("{e}")),
        other => CliError::Internal(format!("{other}")),
    }
}

fn cs_error(e: CsError) -> CliError {
    match e {
        CsError::InvalidLevel(_) | CsError::SwapNeedsEqualReps(..) => {
            CliError::Config(format!("{e}"))
        }
        CsError::TooManyComponents { .. } | CsError::TooManyEigenvalueClasses { .. } => {
            CliError::Refused(format!("{e}"))
        }
        other => CliError::Internal(format!("{other}")),
    }
}

// ---------------------------------------------------------------- nast ----

#[derive(Serialize)]
struct NastRow {
    n: usize,
    error: f64,
    est_order: Option<f64>,
    remainder_max: f64,
    remainder_mean: f64,
    lhs_unitarity_defect: f64,
    rhs_unitarity_defect: f64,
    unitarity_flagged: bool,
    runtime_ms: f64,
}

#[derive(Serialize)]
struct NastDoc {
    group: String,
    representation: String,
    field_family: String,
    field_params: Vec<f64>,
    steps_lhs_multiplier: usize,
    unitarity_budget: f64,
    reports: Vec<NastRow>,
}

/// Convergence sweep of ‖P exp(i∮A) − 𝒫 exp(i∫𝓕)‖ over the N list, one
/// worker thread per refinement.
pub fn nast(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let format = resolve_format(cfg, Format::Csv, &[Format::Csv, Format::Json], "nast")?;
    let conn = connection_from(cfg, "nast")?;
    let n_list = cfg
        .grid
        .as_ref()
        .map(|g| g.n_list.clone())
        .ok_or_else(|| CliError::Config("nast requires grid.N_list".into()))?;
    if n_list.is_empty() {
        return Err(CliError::Config("grid.N_list must not be empty".into()));
    }
    if let Some(&bad) = n_list.iter().find(|&&n| n == 0) {
        return Err(CliError::Config(format!("grid.N_list entries must be ≥ 1, got {bad}")));
    }
    let mult = cfg.steps_lhs_multiplier.unwrap_or(DEFAULT_LHS_MULTIPLIER);
    if mult == 0 {
        return Err(CliError::Config("steps_lhs_multiplier must be ≥ 1".into()));
    }
    let budget = cfg
        .tolerances
        .as_ref()
        .and_then(|t| t.unitarity)
        .unwrap_or(DEFAULT_UNITARITY_BUDGET);
    if budget <= 0.0 || !budget.is_finite() {
        return Err(CliError::Config(format!(
            "tolerances.unitarity must be a positive finite real, got {budget}"
        )));
    }

    let conn_ref = &conn;
    let mut reports: Vec<NastReport> = std::thread::scope(|scope| {
        let handles: Vec<_> = n_list
            .iter()
            .map(|&n| {
                scope.spawn(move || {
                    nast_verify_with(conn_ref, n, mult * n, DEFAULT_EDGE_STEPS, budget)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("sweep worker panicked")).collect()
    });
    for i in 1..reports.len() {
        let (prev, rest) = reports.split_at_mut(i);
        let (prev, r) = (&prev[i - 1], &mut rest[0]);
        if prev.error > 0.0 && r.error > 0.0 && r.n != prev.n {
            r.est_order = Some((prev.error / r.error).ln() / (r.n as f64 / prev.n as f64).ln());
        }
    }

    let mut warnings = Vec::new();
    for r in &reports {
        if r.unitarity_flagged {
            warnings.push(format!(
                "N = {}: unitarity defect exceeds the budget {budget:.3e} (lhs {:.3e}, rhs {:.3e})",
                r.n, r.lhs_unitarity_defect, r.rhs_unitarity_defect
            ));
        }
    }

    let content = match format {
        Format::Csv => {
            let mut out = String::from("N,error,est_order,runtime_ms\n");
            for r in &reports {
                let order = r.est_order.map(sig12).unwrap_or_default();
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    r.n,
                    sig12(r.error),
                    order,
                    sig12(r.runtime_ms)
                ));
            }
            out
        }
        _ => json_pretty(&NastDoc {
            group: conn.rep().group().to_string(),
            representation: conn.rep().label().to_string(),
            field_family: conn.family().to_string(),
            field_params: conn.params().to_vec(),
            steps_lhs_multiplier: mult,
            unitarity_budget: budget,
            reports: reports
                .iter()
                .map(|r| NastRow {
                    n: r.n,
                    error: r.error,
                    est_order: r.est_order,
                    remainder_max: r.remainder.max,
                    remainder_mean: r.remainder.mean,
                    lhs_unitarity_defect: r.lhs_unitarity_defect,
                    rhs_unitarity_defect: r.rhs_unitarity_defect,
                    unitarity_flagged: r.unitarity_flagged,
                    runtime_ms: r.runtime_ms,
                })
                .collect(),
        })?,
    };
    Ok(Outcome { content, warnings })
}

// ------------------------------------------------------------ wilson2d ----

#[derive(Serialize)]
struct WilsonLoopRow {
    group: String,
    representation: String,
    area: f64,
    value: f64,
}

#[derive(Serialize)]
struct WilsonDoc {
    loops: Vec<WilsonLoopRow>,
    product: f64,
}

#[derive(Serialize)]
struct SpectrumRow {
    t2_eigenvalue: f64,
    weight: f64,
}

#[derive(Serialize)]
struct WilsonSharedDoc {
    loops: Vec<WilsonLoopRow>,
    shared_area: f64,
    value: f64,
    shared_block_spectrum: Vec<SpectrumRow>,
}

/// Resolved loop list: representation plus exclusive area.
fn wilson_loops(cfg: &RunConfig) -> Result<Vec<(Arc<LieAlgebraRep>, f64)>, CliError> {
    if let Some(loops) = &cfg.loops {
        if loops.is_empty() {
            return Err(CliError::Config("loops must not be empty".into()));
        }
        loops
            .iter()
            .map(|l| {
                let group = l.group.as_deref().or(cfg.group.as_deref()).unwrap_or("su2");
                Ok((parse_rep(group, &l.representation)?, l.area))
            })
            .collect()
    } else {
        let area = cfg
            .area
            .ok_or_else(|| CliError::Config("wilson2d requires \"area\" or a \"loops\" list".into()))?;
        Ok(vec![(rep_from(cfg)?, area)])
    }
}

/// Exact Wilson-loop expectations ⟨W⟩ = dim R · e^{−½C₂S}; with a shared
/// area the loops overlap on one region and the block calculus takes over.
pub fn wilson2d(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let format = resolve_format(cfg, Format::Csv, &[Format::Csv, Format::Json], "wilson2d")?;
    let loops = wilson_loops(cfg)?;
    let rows: Vec<WilsonLoopRow> = loops
        .iter()
        .map(|(rep, area)| {
            Ok(WilsonLoopRow {
                group: rep.group().to_string(),
                representation: rep.label().to_string(),
                area: *area,
                value: yangmills2d::wilson_expectation(rep, *area).map_err(ym_error)?,
            })
        })
        .collect::<Result<_, CliError>>()?;

    if let Some(shared) = cfg.shared_area {
        if format != Format::Json {
            return Err(CliError::Config(
                "the shared_area block report is JSON-only; set output.format to \"json\"".into(),
            ));
        }
        if shared < 0.0 {
            return Err(CliError::Config(format!("shared_area must be nonnegative, got {shared}")));
        }
        let reps: Vec<_> = loops.iter().map(|(r, _)| r.clone()).collect();
        // exclusive regions with zero area carry nothing and would only
        // narrow the supported overlap topologies, so they are dropped
        let mut regions: Vec<Region> = loops
            .iter()
            .enumerate()
            .filter(|(_, (_, area))| *area > 0.0)
            .map(|(i, (_, area))| Region::new(*area, vec![i]))
            .collect();
        regions.push(Region::new(shared, (0..reps.len()).collect()));
        let decomp = RegionDecomposition::with_canonical_order(regions, reps.clone());
        let result = yangmills2d::contract_blocks(&decomp).map_err(ym_error)?;
        let mut spectrum = yangmills2d::m_block_spectrum(&reps, shared).map_err(ym_error)?;
        spectrum.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("T² eigenvalues are finite"));
        let content = json_pretty(&WilsonSharedDoc {
            loops: rows,
            shared_area: shared,
            value: result.value,
            shared_block_spectrum: spectrum
                .into_iter()
                .map(|(x, w)| SpectrumRow { t2_eigenvalue: x, weight: w })
                .collect(),
        })?;
        return Ok(Outcome { content, warnings: Vec::new() });
    }

    let content = match format {
        Format::Csv => {
            let mut out = String::from("group,representation,area,value\n");
            for r in &rows {
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    r.group,
                    r.representation,
                    sig12(r.area),
                    sig12(r.value)
                ));
            }
            out
        }
        _ => {
            let product = rows.iter().map(|r| r.value).product();
            json_pretty(&WilsonDoc { loops: rows, product })?
        }
    };
    Ok(Outcome { content, warnings: Vec::new() })
}

// ----------------------------------------------------------- monodromy ----

#[derive(Serialize)]
struct EigenRow {
    re: f64,
    im: f64,
    multiplicity: usize,
}

#[derive(Serialize)]
struct RealEigenRow {
    value: f64,
    multiplicity: usize,
}

#[derive(Serialize)]
struct SkeinDoc {
    a: Cx,
    b: Cx,
    c: Cx,
    lambda_plus: Cx,
    lambda_minus: Cx,
    residual: f64,
    branch_warning: bool,
}

#[derive(Serialize)]
struct MonodromyDoc {
    k: f64,
    reps: (String, String),
    include_swap: bool,
    eigenvalues: Vec<EigenRow>,
    t1t2_eigenvalues: Vec<RealEigenRow>,
    unitarity_defect: f64,
    braiding_eigenvalues: Option<Vec<EigenRow>>,
    branch_warning: bool,
    skein: Option<SkeinDoc>,
}

fn eigen_rows(classes: &[(C64, usize)]) -> Vec<EigenRow> {
    classes
        .iter()
        .map(|&(z, m)| EigenRow { re: z.re, im: z.im, multiplicity: m })
        .collect()
}

fn skein_doc(s: &SkeinResult) -> SkeinDoc {
    SkeinDoc {
        a: s.a.into(),
        b: s.b.into(),
        c: s.c.into(),
        lambda_plus: s.lambda_plus.into(),
        lambda_minus: s.lambda_minus.into(),
        residual: s.residual,
        branch_warning: s.branch_warning,
    }
}

fn level_from(cfg: &RunConfig, command: &str) -> Result<f64, CliError> {
    cfg.level
        .ok_or_else(|| CliError::Config(format!("{command} requires \"level\" (the CS level k)")))
}

fn monodromy_reps(
    cfg: &RunConfig,
) -> Result<(Arc<LieAlgebraRep>, Arc<LieAlgebraRep>), CliError> {
    if let Some(loops) = &cfg.loops {
        if loops.len() != 2 {
            return Err(CliError::Config(format!(
                "monodromy takes exactly 2 loops, got {}",
                loops.len()
            )));
        }
        let mut reps = loops.iter().map(|l| {
            let group = l.group.as_deref().or(cfg.group.as_deref()).unwrap_or("su2");
            parse_rep(group, &l.representation)
        });
        Ok((reps.next().unwrap()?, reps.next().unwrap()?))
    } else {
        let r = rep_from(cfg)?;
        Ok((r.clone(), r))
    }
}

fn branch_warnings(res: &MonodromyResult, warnings: &mut Vec<String>) {
    let braid_warn = res.braiding.as_ref().map(|b| b.branch_warning).unwrap_or(false);
    let skein_warn = res.skein.as_ref().map(|s| s.branch_warning).unwrap_or(false);
    if braid_warn || skein_warn {
        warnings.push(
            "the monodromy has an eigenvalue on the square-root branch cut (e^{iπ}); \
             the braiding half-angles are convention-dependent there"
                .to_string(),
        );
    }
    if res.unitarity_defect > 1e-9 {
        warnings.push(format!(
            "monodromy unitarity defect {:.3e} exceeds 1e-9",
            res.unitarity_defect
        ));
    }
}

/// Two-puncture monodromy M = exp(−(4πi/k)ΣT₁ᵃ⊗T₂ᵃ), its braiding square
/// root, and the skein coefficients when both punctures carry the same R.
pub fn monodromy(cfg: &RunConfig) -> Result<Outcome, CliError> {
    resolve_format(cfg, Format::Json, &[Format::Json], "monodromy")?;
    let k = level_from(cfg, "monodromy")?;
    let (r1, r2) = monodromy_reps(cfg)?;
    let swap = cfg.swap.unwrap_or(true);
    let res = chernsimons::monodromy_with_braiding(&r1, &r2, k, swap).map_err(cs_error)?;

    let mut warnings = Vec::new();
    branch_warnings(&res, &mut warnings);

    let braiding = res.braiding.as_ref();
    let content = json_pretty(&MonodromyDoc {
        k: res.k,
        reps: res.rep_labels.clone(),
        include_swap: swap,
        eigenvalues: eigen_rows(&res.eigenvalues),
        t1t2_eigenvalues: res
            .t1t2_eigenvalues
            .iter()
            .map(|&(x, m)| RealEigenRow { value: x, multiplicity: m })
            .collect(),
        unitarity_defect: res.unitarity_defect,
        braiding_eigenvalues: braiding.map(|b| eigen_rows(&b.eigenvalues)),
        branch_warning: braiding.map(|b| b.branch_warning).unwrap_or(false),
        skein: res.skein.as_ref().map(skein_doc),
    })?;
    Ok(Outcome { content, warnings })
}

// --------------------------------------------------------------- skein ----

#[derive(Serialize)]
struct SkeinTopDoc {
    k: f64,
    group: String,
    representation: String,
    include_swap: bool,
    #[serde(flatten)]
    skein: SkeinDoc,
}

/// Coefficients of the quadratic skein relation a·B + b·I + c·B⁻¹ = 0.
pub fn skein(cfg: &RunConfig) -> Result<Outcome, CliError> {
    resolve_format(cfg, Format::Json, &[Format::Json], "skein")?;
    let k = level_from(cfg, "skein")?;
    let rep = rep_from(cfg)?;
    let swap = cfg.swap.unwrap_or(true);
    let res = chernsimons::skein_coefficients(&rep, k, swap).map_err(cs_error)?;

    let mut warnings = Vec::new();
    if res.branch_warning {
        warnings.push(
            "the monodromy has an eigenvalue on the square-root branch cut (e^{iπ}); \
             the braiding half-angles are convention-dependent there"
                .to_string(),
        );
    }
    let content = json_pretty(&SkeinTopDoc {
        k,
        group: rep.group().to_string(),
        representation: rep.label().to_string(),
        include_swap: swap,
        skein: skein_doc(&res),
    })?;
    Ok(Outcome { content, warnings })
}

// ------------------------------------------------------------- seifert ----

#[derive(Serialize)]
struct CancellationRow {
    id: String,
    left_pos: usize,
    right_pos: usize,
}

#[derive(Serialize)]
struct SeifertDoc {
    genus: u32,
    boundary_word: String,
    lasso_word: String,
    block_definitions: std::collections::BTreeMap<String, String>,
    expanded_letters: usize,
    reduced_word: String,
    matches: bool,
    first_mismatch: Option<usize>,
    trace: Vec<CancellationRow>,
}

fn knot_error(e: KnotError) -> CliError {
    match e {
        KnotError::GenusTooLarge { .. } => CliError::Config(format!("{e}")),
        other => CliError::Internal(format!("{other}")),
    }
}

/// Genus-g Seifert lasso decomposition, verified by free reduction of the
/// expanded word against the boundary word.
pub fn seifert(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let format = resolve_format(cfg, Format::Text, &[Format::Text, Format::Json], "seifert")?;
    let genus = cfg
        .genus
        .ok_or_else(|| CliError::Config("seifert requires \"genus\"".into()))?;
    let decomp = {
        if genus > knotwords::MAX_GENUS {
            return Err(knot_error(KnotError::GenusTooLarge {
                genus,
                max: knotwords::MAX_GENUS,
            }));
        }
        knotwords::seifert_words(genus)
    };
    let report = knotwords::verify_with(&decomp);

    let mut warnings = Vec::new();
    if !report.matches {
        warnings.push(format!(
            "reduced lasso word does not match the boundary word (first mismatch at {:?})",
            report.first_mismatch
        ));
    }

    let content = match format {
        Format::Json => json_pretty(&SeifertDoc {
            genus,
            boundary_word: decomp.boundary_word.to_string(),
            lasso_word: decomp.lasso_word.to_string(),
            block_definitions: decomp
                .block_definitions
                .iter()
                .map(|(k, v)| (k.clone(), v.to_string()))
                .collect(),
            expanded_letters: report.expanded.len(),
            reduced_word: report.reduced.to_string(),
            matches: report.matches,
            first_mismatch: report.first_mismatch,
            trace: report
                .trace
                .iter()
                .map(|c| CancellationRow {
                    id: c.id.clone(),
                    left_pos: c.left_pos,
                    right_pos: c.right_pos,
                })
                .collect(),
        })?,
        _ => {
            let mut out = String::new();
            out.push_str(&format!("genus: {genus}\n"));
            out.push_str(&format!("boundary word: {}\n", decomp.boundary_word));
            out.push_str(&format!("lasso word: {}\n", decomp.lasso_word));
            out.push_str("block definitions:\n");
            for (name, def) in &decomp.block_definitions {
                out.push_str(&format!("  {name} = {def}\n"));
            }
            out.push_str(&format!("expanded letters: {}\n", report.expanded.len()));
            out.push_str(&format!("reduction trace ({} cancellations):\n", report.trace.len()));
            for c in &report.trace {
                out.push_str(&format!("  {c}\n"));
            }
            out.push_str(&format!("reduced word: {}\n", report.reduced));
            out.push_str(&format!("reduced matches boundary: {}\n", report.matches));
            if let Some(p) = report.first_mismatch {
                out.push_str(&format!("first mismatch at letter {p}\n"));
            }
            out
        }
    };
    Ok(Outcome { content, warnings })
}

// -------------------------------------------------------------- checks ----

#[derive(Serialize)]
struct CheckDoc {
    check_name: String,
    lhs: f64,
    rhs: f64,
    error: f64,
    tol: f64,
    pass: bool,
}

/// The standard quantization check battery: deterministic inputs, every row
/// compared against its frozen tolerance.
pub fn checks(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let format = resolve_format(cfg, Format::Json, &[Format::Json, Format::Csv], "checks")?;
    let rows = quantization::standard_checks()
        .map_err(|e: QuantError| CliError::Internal(format!("{e}")))?;

    let mut warnings = Vec::new();
    for r in &rows {
        if !r.pass() {
            warnings.push(format!(
                "check {} failed: error {:.3e} exceeds tol {:.3e}",
                r.check_name, r.error, r.tol
            ));
        }
    }

    let content = match format {
        Format::Csv => {
            let mut out = String::from("check_name,lhs,rhs,error,tol,pass\n");
            for r in &rows {
                out.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    r.check_name,
                    sig12(r.lhs),
                    sig12(r.rhs),
                    sig12(r.error),
                    sig12(r.tol),
                    r.pass()
                ));
            }
            out
        }
        _ => {
            let docs: Vec<CheckDoc> = rows
                .iter()
                .map(|r| CheckDoc {
                    check_name: r.check_name.clone(),
                    lhs: r.lhs,
                    rhs: r.rhs,
                    error: r.error,
                    tol: r.tol,
                    pass: r.pass(),
                })
                .collect();
            json_pretty(&docs)?
        }
    };
    Ok(Outcome { content, warnings })
}

// ----------------------------------------------------------- flat-demo ----

#[derive(Serialize)]
struct FlatDemoDoc {
    group: String,
    representation: String,
    a: f64,
    max_field_strength: f64,
    holonomy_vs_identity: f64,
    holonomy_vs_closed_form: f64,
}

/// Flat-but-topologically-nontrivial demo: F ≡ 0 on the annulus chart while
/// the loop around the hole transports to exp(2πi·a·T³).
pub fn flat_demo(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let format = resolve_format(cfg, Format::Text, &[Format::Text, Format::Json], "flat-demo")?;
    let rep = rep_from(cfg)?;
    let params: Vec<f64> = match &cfg.field {
        Some(f) if f.family == "flat_angular" => f.params.clone(),
        Some(f) => {
            return Err(CliError::Config(format!(
                "flat-demo supports only the flat_angular family, got {:?}",
                f.family
            )))
        }
        None => vec![0.5],
    };
    let conn = Connection::from_family(rep.clone(), "flat_angular", &params)
        .map_err(|e| CliError::Config(format!("{e}")))?;
    let a = conn.params()[0];

    let mut max_f: f64 = 0.0;
    for i in 0..5 {
        for j in 0..5 {
            let (x, y) = (0.1 + 0.2 * i as f64, 0.1 + 0.2 * j as f64);
            max_f = max_f.max(frob(field_strength(&conn, x, y, DEFAULT_FD_STEP).matrix()));
        }
    }

    // y is angle/2π on the annulus chart, so the segment y: 0 → 1 at fixed
    // x is the closed loop around the hole
    let path = PathSpec::polyline(&[(0.3, 0.0), (0.3, 1.0)])
        .map_err(|e| CliError::Internal(format!("{e}")))?;
    let u = path_ordered_exp(&conn, &path, 4096, Method::Midpoint).value;
    let mut coeffs = vec![0.0; rep.dim_g()];
    coeffs[2] = 2.0 * std::f64::consts::PI * a;
    let expected = AlgebraElement::new(rep.clone(), coeffs).expi();
    let vs_identity = frob(&(u.matrix() - ident(rep.dim_r())));
    let vs_closed_form = frob(&(u.matrix() - expected.matrix()));

    let mut warnings = Vec::new();
    if vs_closed_form > 1e-6 {
        warnings.push(format!(
            "loop holonomy deviates from exp(2πi·a·T³) by {vs_closed_form:.3e} (> 1e-6)"
        ));
    }

    let content = match format {
        Format::Json => json_pretty(&FlatDemoDoc {
            group: rep.group().to_string(),
            representation: rep.label().to_string(),
            a,
            max_field_strength: max_f,
            holonomy_vs_identity: vs_identity,
            holonomy_vs_closed_form: vs_closed_form,
        })?,
        _ => format!(
            "flat connection demo: flat_angular(a = {}) in {} {}\n\
             max ‖F‖ over the 5×5 sample grid: {}\n\
             ‖U − 1‖ for the loop around the hole: {}\n\
             ‖U − exp(2πi·a·T³)‖: {}\n",
            sig12(a),
            rep.group(),
            rep.label(),
            sig12(max_f),
            sig12(vs_identity),
            sig12(vs_closed_form)
        ),
    };
    Ok(Outcome { content, warnings })
}
