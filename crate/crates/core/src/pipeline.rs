//! End-to-end count: parse, saturate, find parameters, bound `[H¹]_0` by
//! `ℓ`, stabilize the Koszul strand, build Frobenius and take its stable part.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::field::{Field, FieldSpec};
use crate::frobenius::{frobenius_matrix, stable_part, FrobeniusError, SemilinearMap, StableDecomposition};
use crate::groebner::{saturate_irrelevant, GroebnerBasis, Ideal};
use crate::hsop::{find_hsop, HsopConfig, HsopError, ParameterSystem};
use crate::koszul::{h1_degree_zero, stabilize, stabilize_heuristic, KoszulClasses, KoszulError};
use crate::oracle::{oracle_component_count, OracleError};
use crate::polyring::{parse_polynomial, MonomialOrder, PolyRing, Polynomial};
use crate::resolution::{ell, free_resolution, ResolutionError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct InputError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("input error: {0}")]
    Input(#[from] InputError),
    #[error("input error: {0}")]
    Oracle(#[from] OracleError),
    #[error("{0}")]
    Hsop(#[from] HsopError),
    #[error("{0}")]
    Koszul(#[from] KoszulError),
    #[error("internal error: {0}")]
    Resolution(#[from] ResolutionError),
    #[error("internal error: {0}")]
    Frobenius(#[from] FrobeniusError),
    #[error("internal error: {0}")]
    Invariant(String),
}

impl PipelineError {
    /// 2 for bad input, 3 for exhausted search budgets or limits, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Input(_) | PipelineError::Oracle(_) => 2,
            PipelineError::Hsop(HsopError::BudgetExhausted { .. }) => 3,
            PipelineError::Koszul(KoszulError::TMaxExceeded { .. }) => 3,
            _ => 1,
        }
    }
}

/// A parsed input file.
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    pub ring: Arc<PolyRing>,
    pub ideal: Ideal,
}

impl ProblemSpec {
    pub fn field(&self) -> &Field {
        self.ring.field()
    }

    /// The same ideal with its coefficients viewed in `F_{p^e}`.
    pub fn over_extension(&self, e: u32) -> Result<ProblemSpec, InputError> {
        let spec = FieldSpec::new(self.field().characteristic(), e)
            .map_err(|err| InputError { line: 0, message: err.to_string() })?;
        let ring = PolyRing::with_weights(
            Arc::new(Field::new(spec)),
            self.ring.var_names().to_vec(),
            self.ring.weights().to_vec(),
            self.ring.order(),
        )
        .map_err(|err| InputError { line: 0, message: err.to_string() })?;
        let base = self.field();
        let big = ring.field().clone();
        if !base.is_prime_field() {
            return Err(InputError { line: 0, message: "base change is only supported from a prime field".into() });
        }
        let gens = self
            .ideal
            .generators()
            .iter()
            .map(|g| {
                let terms = g.terms().iter().map(|(m, c)| (m.clone(), big.from_int(c.code() as i64))).collect();
                Polynomial::from_terms(&ring, terms)
            })
            .collect();
        let ideal = Ideal::new(&ring, gens).map_err(|err| InputError { line: 0, message: err.to_string() })?;
        Ok(ProblemSpec { ring, ideal })
    }
}

/// Parses the line-oriented input format (`char:`, `ext:`, `vars:`,
/// `weights:`, `ideal:` followed by one generator per line).
pub fn parse_problem(text: &str) -> Result<ProblemSpec, InputError> {
    let err = |line: usize, message: String| InputError { line, message };
    let mut p: Option<(u32, usize)> = None;
    let mut e: (u32, usize) = (1, 0);
    let mut vars: Option<(Vec<String>, usize)> = None;
    let mut weights: Option<(Vec<u32>, usize)> = None;
    let mut generators: Vec<(String, usize)> = Vec::new();
    let mut in_ideal = false;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let keyed = content.split_once(':').filter(|(k, _)| {
            matches!(k.trim(), "char" | "ext" | "vars" | "weights" | "ideal")
        });
        let Some((key, value)) = keyed else {
            if in_ideal {
                generators.push((content.to_string(), line));
                continue;
            }
            return Err(err(line, format!("expected `key: value`, found `{content}`")));
        };
        let value = value.trim();
        let number = |what: &str| -> Result<u32, InputError> {
            value.parse::<u32>().map_err(|_| err(line, format!("{what} must be a positive integer, found `{value}`")))
        };
        in_ideal = false;
        match key.trim() {
            "char" => p = Some((number("char")?, line)),
            "ext" => e = (number("ext")?, line),
            "vars" => vars = Some((value.split_whitespace().map(str::to_string).collect(), line)),
            "weights" => {
                let ws = value
                    .split_whitespace()
                    .map(|w| w.parse::<u32>().map_err(|_| err(line, format!("invalid weight `{w}`"))))
                    .collect::<Result<Vec<_>, _>>()?;
                weights = Some((ws, line));
            }
            _ => {
                in_ideal = true;
                if !value.is_empty() {
                    generators.push((value.to_string(), line));
                }
            }
        }
    }

    let (p, p_line) = p.ok_or_else(|| err(0, "missing `char:`".into()))?;
    let spec = FieldSpec::new(p, e.0).map_err(|fe| err(if e.1 > 0 { e.1 } else { p_line }, fe.to_string()))?;
    let field = Arc::new(Field::new(spec));
    let (vars, vars_line) = vars.ok_or_else(|| err(0, "missing `vars:`".into()))?;
    let (weights, w_line) = weights.unwrap_or_else(|| (vec![1; vars.len()], vars_line));
    let ring = PolyRing::with_weights(field, vars, weights, MonomialOrder::Grevlex)
        .map_err(|pe| err(w_line.max(vars_line), pe.to_string()))?;
    let mut polys = Vec::with_capacity(generators.len());
    for (g, line) in &generators {
        let f = parse_polynomial(g, &ring).map_err(|pe| err(*line, pe.to_string()))?;
        if !f.is_homogeneous() {
            return Err(err(*line, format!("generator `{g}` is not homogeneous")));
        }
        polys.push(f);
    }
    let ideal = Ideal::new(&ring, polys).map_err(|ge| err(0, ge.to_string()))?;
    Ok(ProblemSpec { ring, ideal })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// Certified: stop the Koszul loop at `ℓ` computed through Ext.
    Ext,
    /// Stop once the Koszul dimension plateaus; uncertified.
    Heuristic,
}

#[derive(Debug, Clone, Copy)]
pub struct PipelineOptions {
    pub strategy: Strategy,
    pub seed: u64,
    pub t_max: u32,
    /// Plateau length for the heuristic strategy.
    pub plateau: u32,
    pub hsop: HsopConfig,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions { strategy: Strategy::Ext, seed: 0, t_max: 12, plateau: 2, hsop: HsopConfig::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HsopForm {
    pub form: String,
    pub degree: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub components: usize,
    pub connected_geom: bool,
    pub dim_r: i64,
    pub ell: Option<usize>,
    pub stab_n: Option<u32>,
    pub hsop: Vec<HsopForm>,
    pub chain: Vec<usize>,
    pub strategy: String,
    pub certified: bool,
    pub timings_ms: BTreeMap<String, f64>,
}

/// Everything the pipeline computed, for callers that check internals.
#[derive(Debug, Clone)]
pub struct PipelineRun {
    pub report: RunReport,
    pub saturated: GroebnerBasis,
    pub parameters: Option<ParameterSystem>,
    /// Koszul dimensions for `t = 1..=N` (more for the heuristic).
    pub koszul_dims: Vec<usize>,
    /// Class basis at `t = 1` for the `N`-th powers of the parameters.
    pub classes: Option<KoszulClasses>,
    pub frobenius: Option<SemilinearMap>,
    pub decomposition: Option<StableDecomposition>,
}

struct Clock {
    start: Instant,
    timings: BTreeMap<String, f64>,
}

impl Clock {
    fn new() -> Self {
        Clock { start: Instant::now(), timings: BTreeMap::new() }
    }

    fn lap(&mut self, stage: &str) {
        let now = Instant::now();
        let ms = (now - self.start).as_secs_f64() * 1000.0;
        self.timings.insert(stage.to_string(), (ms * 1000.0).round() / 1000.0);
        self.start = now;
    }
}

fn hsop_forms(ps: &ParameterSystem) -> Vec<HsopForm> {
    ps.forms().iter().zip(ps.degrees()).map(|(f, &degree)| HsopForm { form: f.to_string(), degree }).collect()
}

pub fn run_pipeline(spec: &ProblemSpec, opts: &PipelineOptions) -> Result<RunReport, PipelineError> {
    run_pipeline_detailed(spec, opts).map(|run| run.report)
}

pub fn run_pipeline_detailed(spec: &ProblemSpec, opts: &PipelineOptions) -> Result<PipelineRun, PipelineError> {
    let mut clock = Clock::new();
    let strategy = match opts.strategy {
        Strategy::Ext => "ext",
        Strategy::Heuristic => "heuristic",
    };
    let certified = opts.strategy == Strategy::Ext;

    let saturated = saturate_irrelevant(&spec.ideal).groebner();
    clock.lap("saturate");
    let dim_r = saturated.krull_dimension();
    if saturated.is_unit() {
        log::info!("the saturation is the unit ideal: Proj is empty");
        let report = RunReport {
            components: 0,
            connected_geom: false,
            dim_r,
            ell: certified.then_some(0),
            stab_n: None,
            hsop: Vec::new(),
            chain: Vec::new(),
            strategy: strategy.into(),
            certified,
            timings_ms: clock.timings,
        };
        return Ok(PipelineRun {
            report,
            saturated,
            parameters: None,
            koszul_dims: Vec::new(),
            classes: None,
            frobenius: None,
            decomposition: None,
        });
    }

    let parameters = find_hsop(&saturated, opts.seed, opts.hsop)?;
    clock.lap("hsop");
    log::info!("dim R = {dim_r}; parameters: {:?}", parameters.forms().iter().map(|f| f.to_string()).collect::<Vec<_>>());

    let (ell_value, stabilization) = match opts.strategy {
        Strategy::Ext => {
            let res = free_resolution(saturated.ideal(), spec.ring.nvars());
            let l = ell(&res)?;
            clock.lap("ell");
            log::info!("ℓ = {l} (Betti numbers {:?})", res.betti_numbers());
            (Some(l), stabilize(&saturated, parameters.forms(), l, opts.t_max)?)
        }
        Strategy::Heuristic => (None, stabilize_heuristic(&saturated, parameters.forms(), opts.plateau, opts.t_max)?),
    };
    clock.lap("stabilize");
    let n = stabilization.n;
    log::info!("Koszul dimensions {:?}, N = {n}", stabilization.dims);

    let powered: Vec<Polynomial> = parameters.forms().iter().map(|f| f.pow(n)).collect();
    let classes = h1_degree_zero(&saturated, &powered, 1);
    if classes.dim() != stabilization.classes.dim() {
        return Err(PipelineError::Invariant(format!(
            "dimension {} after power substitution, {} before",
            classes.dim(),
            stabilization.classes.dim()
        )));
    }
    // the linear algebra is re-checked symbolically
    if !classes.class_tuples().iter().all(|tuple| classes.is_cocycle(&saturated, tuple)) {
        return Err(PipelineError::Invariant("a Koszul class representative is not a cocycle".into()));
    }
    let zero_class = classes.class_coordinates(&saturated, &powered);
    if zero_class.as_ref().is_none_or(|v| v.iter().any(|c| !c.is_zero())) {
        return Err(PipelineError::Invariant("the coboundary does not represent the zero class".into()));
    }
    let frobenius = frobenius_matrix(&saturated, &classes)?;
    let decomposition = stable_part(saturated.ring().field(), &frobenius);
    clock.lap("frobenius");
    if !decomposition.bijective_on_stable {
        return Err(PipelineError::Invariant("Frobenius is not bijective on its stable part".into()));
    }
    let components = 1 + decomposition.stable_dim();
    log::info!("image chain {:?}: {components} component(s)", decomposition.image_chain);

    let report = RunReport {
        components,
        connected_geom: components == 1,
        dim_r,
        ell: ell_value,
        stab_n: Some(n),
        hsop: hsop_forms(&parameters),
        chain: decomposition.image_chain.clone(),
        strategy: strategy.into(),
        certified,
        timings_ms: clock.timings,
    };
    Ok(PipelineRun {
        report,
        saturated,
        parameters: Some(parameters),
        koszul_dims: stabilization.dims,
        classes: Some(classes),
        frobenius: Some(frobenius),
        decomposition: Some(decomposition),
    })
}

/// The monomial-graph count in the same report layout.
pub fn run_oracle(spec: &ProblemSpec) -> Result<RunReport, PipelineError> {
    let mut clock = Clock::new();
    let components = oracle_component_count(&spec.ideal)?;
    let dim_r = saturate_irrelevant(&spec.ideal).groebner().krull_dimension();
    clock.lap("oracle");
    Ok(RunReport {
        components,
        connected_geom: components == 1,
        dim_r,
        ell: None,
        stab_n: None,
        hsop: Vec::new(),
        chain: Vec::new(),
        strategy: "oracle".into(),
        certified: true,
        timings_ms: clock.timings,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct InfoReport {
    pub dim_r: i64,
    pub ell: usize,
    pub hsop: Vec<HsopForm>,
}

/// Dimension, `ℓ` and the parameter system, without the Koszul and Frobenius stages.
pub fn info(spec: &ProblemSpec, opts: &PipelineOptions) -> Result<InfoReport, PipelineError> {
    let saturated = saturate_irrelevant(&spec.ideal).groebner();
    let dim_r = saturated.krull_dimension();
    if saturated.is_unit() {
        return Ok(InfoReport { dim_r, ell: 0, hsop: Vec::new() });
    }
    let parameters = find_hsop(&saturated, opts.seed, opts.hsop)?;
    let res = free_resolution(saturated.ideal(), spec.ring.nvars());
    Ok(InfoReport { dim_r, ell: ell(&res)?, hsop: hsop_forms(&parameters) })
}
