//! Seeded multi-realization sweeps.
//!
//! A sweep is described by one flat [`ExperimentSpec`]. Realization `r` of
//! every cell uses seed `base_seed + r` for growth and derives its other
//! random streams from the same seed, so a cell can be recomputed alone.
//! Work is spread over a worker pool and collected in task order, which keeps
//! every output byte-identical regardless of the pool size.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, GraphError};
use crate::metrics::{analyze, MetricsError, CSV_HEADER};
use crate::netgen::{generate_final, generate_with, GrowthConfig, GrowthError, Model};
use crate::rng::{seeded_rng, Stream};
use crate::routing::{draw_users, route_csv_row, select_route, Route, RoutingError, Strategy, User, ROUTES_CSV_HEADER};
use crate::traffic::{
    analytic_travel_time, simulate, subnetwork_lambda_c, SimMode, TrafficError, TrafficParams, TrafficSetup,
    TRAFFIC_CSV_HEADER,
};

/// Links per arriving node in the route demonstration network.
pub const DEMO_M: usize = 2;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("config line {line}, column {column}: {msg}")]
    Parse { line: usize, column: usize, msg: String },
    #[error("{}", match .line { Some(l) => format!("config line {l}: `{field}`: {msg}"), None => format!("config: `{field}`: {msg}") })]
    Invalid {
        field: String,
        msg: String,
        line: Option<usize>,
    },
    #[error(transparent)]
    Growth(#[from] GrowthError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error(transparent)]
    Routing(#[from] RoutingError),
    #[error(transparent)]
    Traffic(#[from] TrafficError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("worker pool: {0}")]
    Pool(String),
}

impl ExperimentError {
    /// Whether the error comes from the config rather than from running it.
    pub fn is_config(&self) -> bool {
        matches!(self, ExperimentError::Parse { .. } | ExperimentError::Invalid { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ExperimentKind {
    LambdaCVsBeta,
    ThetaVsLambda,
    TVsLambda,
    StructureVsN,
    DemoRoutes,
}

impl ExperimentKind {
    pub fn file_name(self) -> &'static str {
        match self {
            ExperimentKind::LambdaCVsBeta => "lambda_c_vs_beta.csv",
            ExperimentKind::ThetaVsLambda => "theta_vs_lambda.csv",
            ExperimentKind::TVsLambda => "t_vs_lambda.csv",
            ExperimentKind::StructureVsN => "structure_vs_n.csv",
            ExperimentKind::DemoRoutes => "demo_routes.csv",
        }
    }
}

/// Which packets the traffic simulation carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum TrafficMode {
    /// Every node generates toward uniform destinations.
    Global,
    /// Only the `users_R` drawn users generate, along their chosen routes.
    Users,
}

/// Flat sweep description, read from JSON. Missing keys take the defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentSpec {
    pub experiment: ExperimentKind,
    pub models: Vec<Model>,
    pub strategies: Vec<Strategy>,
    pub sizes: Vec<usize>,
    pub betas: Vec<f64>,
    pub alphas: Vec<f64>,
    pub realizations: usize,
    #[serde(rename = "users_R")]
    pub users: usize,
    pub base_seed: u64,
    pub n0: usize,
    #[serde(rename = "M")]
    pub links_per_step: usize,
    pub vartheta: f64,
    pub gamma: f64,
    pub m_ba: usize,
    pub invert_zeta: bool,
    pub steps: usize,
    pub warmup: usize,
    pub window: usize,
    pub traffic_mode: TrafficMode,
    /// Every how many growth steps `generate` and `metrics` emit a snapshot.
    pub snapshot_stride: usize,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        let g = GrowthConfig::default();
        let t = TrafficParams::default();
        ExperimentSpec {
            experiment: ExperimentKind::StructureVsN,
            models: Model::ALL.to_vec(),
            strategies: Strategy::ALL.to_vec(),
            sizes: vec![200],
            betas: vec![0.5],
            alphas: vec![0.01],
            realizations: 10,
            users: 20,
            base_seed: 0,
            n0: g.n0,
            links_per_step: g.links_per_step,
            vartheta: g.vartheta,
            gamma: g.gamma,
            m_ba: g.m_ba,
            invert_zeta: g.invert_zeta,
            steps: t.steps,
            warmup: t.warmup,
            window: t.window,
            traffic_mode: TrafficMode::Global,
            snapshot_stride: 1,
        }
    }
}

fn invalid(field: &str, msg: impl Into<String>) -> ExperimentError {
    ExperimentError::Invalid {
        field: field.to_string(),
        msg: msg.into(),
        line: None,
    }
}

/// First line of `text` mentioning `"key"`.
fn locate(text: &str, key: &str) -> Option<usize> {
    let quoted = format!("\"{key}\"");
    text.lines().position(|l| l.contains(&quoted)).map(|i| i + 1)
}

impl ExperimentSpec {
    /// Parses and validates a JSON spec, reporting the offending line.
    pub fn from_json(text: &str) -> Result<Self, ExperimentError> {
        let spec: ExperimentSpec = serde_json::from_str(text).map_err(|e| ExperimentError::Parse {
            line: e.line(),
            column: e.column(),
            msg: e.to_string(),
        })?;
        match spec.validate() {
            Ok(()) => Ok(spec),
            Err(ExperimentError::Invalid { field, msg, .. }) => {
                let line = locate(text, &field);
                Err(ExperimentError::Invalid { field, msg, line })
            }
            Err(e) => Err(e),
        }
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        if self.realizations < 1 {
            return Err(invalid("realizations", "must be >= 1"));
        }
        for (field, empty) in [
            ("models", self.models.is_empty()),
            ("strategies", self.strategies.is_empty()),
            ("sizes", self.sizes.is_empty()),
            ("betas", self.betas.is_empty()),
            ("alphas", self.alphas.is_empty()),
        ] {
            if empty {
                return Err(invalid(field, "grid must not be empty"));
            }
        }
        if self.snapshot_stride < 1 {
            return Err(invalid("snapshot_stride", "must be >= 1"));
        }
        if let Some(&n) = self.sizes.iter().find(|&&n| n < self.n0.max(3)) {
            return Err(invalid("sizes", format!("size {n} is below max(n0, 3)")));
        }
        if let Some(b) = self.betas.iter().find(|b| !(**b > 0.0 && b.is_finite())) {
            return Err(invalid("betas", format!("beta must be positive, got {b}")));
        }
        if let Some(a) = self.alphas.iter().find(|a| !(**a >= 0.0 && a.is_finite())) {
            return Err(invalid("alphas", format!("alpha must be non-negative, got {a}")));
        }
        if self.traffic_mode == TrafficMode::Users && self.users == 0 {
            return Err(invalid("users_R", "USERS traffic mode needs at least one user"));
        }
        for &model in &self.models {
            let cfg = self.growth(model, self.sizes[0], self.base_seed);
            if let Err(GrowthError::InvalidConfig(msg)) = cfg.validate() {
                let field = ["n0", "M", "vartheta", "gamma", "m_ba"]
                    .into_iter()
                    .find(|f| msg.starts_with(&format!("{f} ")))
                    .unwrap_or("vartheta");
                return Err(invalid(field, msg));
            }
        }
        if let Err(TrafficError::InvalidParams(msg)) = self.traffic_params(0.0, self.betas[0]).validate() {
            let field = if msg.starts_with("window") { "window" } else { "steps" };
            return Err(invalid(field, msg));
        }
        Ok(())
    }

    /// Seed of realization `r`.
    pub fn seed(&self, r: usize) -> u64 {
        self.base_seed.wrapping_add(r as u64)
    }

    pub fn growth(&self, model: Model, n: usize, seed: u64) -> GrowthConfig {
        GrowthConfig {
            model,
            n0: self.n0,
            steps: n.saturating_sub(self.n0),
            links_per_step: self.links_per_step,
            vartheta: self.vartheta,
            gamma: self.gamma,
            m_ba: self.m_ba,
            rng_seed: seed,
            invert_zeta: self.invert_zeta,
        }
    }

    pub fn traffic_params(&self, alpha: f64, beta: f64) -> TrafficParams {
        TrafficParams {
            alpha,
            beta,
            steps: self.steps,
            warmup: self.warmup,
            window: self.window,
        }
    }

    fn realization_cells(&self) -> Vec<(usize, Model, usize)> {
        let mut cells = Vec::new();
        for &n in &self.sizes {
            for &m in &self.models {
                for r in 0..self.realizations {
                    cells.push((n, m, r));
                }
            }
        }
        cells
    }
}

/// One file produced by a run, relative to the output directory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputFile {
    pub path: String,
    pub contents: String,
}

/// Mean, sample standard deviation and range of a set of realizations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub n: usize,
    pub mean: f64,
    /// `None` for fewer than two values.
    pub sd: Option<f64>,
    pub min: f64,
    pub max: f64,
}

impl Summary {
    pub fn of(values: &[f64]) -> Option<Summary> {
        if values.is_empty() {
            return None;
        }
        let n = values.len();
        let mean = values.iter().sum::<f64>() / n as f64;
        let sd = (n > 1).then(|| {
            let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
            (ss / (n - 1) as f64).sqrt()
        });
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Some(Summary { n, mean, sd, min, max })
    }
}

fn na(x: Option<f64>) -> String {
    x.map_or_else(|| "NA".to_string(), |v| v.to_string())
}

/// `mean,sd,min,max` columns; `NA` when nothing was measured.
fn summary_cols(values: &[f64]) -> String {
    match Summary::of(values) {
        Some(s) => format!("{},{},{},{}", s.mean, na(s.sd), s.min, s.max),
        None => "NA,NA,NA,NA".to_string(),
    }
}

fn stat_header(name: &str) -> String {
    format!("{name}_mean,{name}_sd,{name}_min,{name}_max")
}

fn par_map<T, U, F>(jobs: Option<usize>, items: &[T], f: F) -> Result<Vec<U>, ExperimentError>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> Result<U, ExperimentError> + Sync,
{
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs.filter(|&j| j > 0) {
        builder = builder.num_threads(j);
    }
    let pool = builder.build().map_err(|e| ExperimentError::Pool(e.to_string()))?;
    pool.install(|| items.par_iter().map(&f).collect())
}

fn run_tag(model: Model, n: usize, r: usize) -> String {
    format!("{model}_N{n}_r{r}")
}

/// Snapshots at `t = 0, stride, 2 stride, ..` and always the final one.
fn keep_snapshot(t: usize, last: usize, stride: usize) -> bool {
    t.is_multiple_of(stride) || t == last
}

/// Edge lists `<model>_N<n>_r<r>/snap_<t>.edges` for every realization.
pub fn run_generate(spec: &ExperimentSpec, jobs: Option<usize>) -> Result<Vec<OutputFile>, ExperimentError> {
    spec.validate()?;
    let per_run = par_map(jobs, &spec.realization_cells(), |&(n, model, r)| {
        let cfg = spec.growth(model, n, spec.seed(r));
        let tag = run_tag(model, n, r);
        let mut files = Vec::new();
        generate_with(&cfg, |t, g| {
            if keep_snapshot(t, cfg.steps, spec.snapshot_stride) {
                files.push(OutputFile {
                    path: format!("{tag}/snap_{t}.edges"),
                    contents: g.to_edge_list(),
                });
            }
        })?;
        Ok(files)
    })?;
    Ok(per_run.into_iter().flatten().collect())
}

/// A metrics row per kept snapshot and the rich-club profile of the final
/// network, per realization.
pub fn run_metrics(spec: &ExperimentSpec, jobs: Option<usize>) -> Result<Vec<OutputFile>, ExperimentError> {
    spec.validate()?;
    let per_run = par_map(jobs, &spec.realization_cells(), |&(n, model, r)| {
        let seed = spec.seed(r);
        let cfg = spec.growth(model, n, seed);
        let mut kept: Vec<(usize, Graph)> = Vec::new();
        generate_with(&cfg, |t, g| {
            if keep_snapshot(t, cfg.steps, spec.snapshot_stride) {
                kept.push((t, g.clone()));
            }
        })?;
        let mut rng = seeded_rng(seed, Stream::NullModel);
        let mut csv = format!("{CSV_HEADER}\n");
        let mut last = None;
        for (t, g) in &kept {
            let report = analyze(g, &mut rng)?;
            writeln!(csv, "{}", report.csv_row(*t)).unwrap();
            last = Some(report);
        }
        let mut profile = String::from("k,phi\n");
        if let Some(rc) = last.and_then(|r| r.rich_club) {
            for (k, phi) in rc.profile.iter().enumerate() {
                writeln!(profile, "{k},{}", na(*phi)).unwrap();
            }
        }
        let tag = run_tag(model, n, r);
        Ok(vec![
            OutputFile {
                path: format!("{tag}_metrics.csv"),
                contents: csv,
            },
            OutputFile {
                path: format!("{tag}_rich_club.csv"),
                contents: profile,
            },
        ])
    })?;
    Ok(per_run.into_iter().flatten().collect())
}

fn users_and_routes(
    g: &Graph,
    spec: &ExperimentSpec,
    seed: u64,
    strategy: Strategy,
    bc_norm: &[f64],
) -> Result<(Vec<User>, Vec<Route>), ExperimentError> {
    if spec.users == 0 {
        return Ok((Vec::new(), Vec::new()));
    }
    let users = draw_users(g, spec.users, &mut seeded_rng(seed, Stream::Users))?;
    let mut rng = seeded_rng(seed, Stream::Routing);
    let routes = users
        .iter()
        .map(|&u| select_route(g, u, strategy, bc_norm, &mut rng))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((users, routes))
}

/// Routes of `users_R` users under every strategy, per realization.
pub fn run_routes(spec: &ExperimentSpec, jobs: Option<usize>) -> Result<Vec<OutputFile>, ExperimentError> {
    spec.validate()?;
    par_map(jobs, &spec.realization_cells(), |&(n, model, r)| {
        let seed = spec.seed(r);
        let g = generate_final(&spec.growth(model, n, seed))?;
        let bc = crate::metrics::betweenness(&g)?;
        let mut rows: Vec<(usize, usize, String)> = Vec::new();
        for (si, &strategy) in spec.strategies.iter().enumerate() {
            let (_, routes) = users_and_routes(&g, spec, seed, strategy, &bc.norm)?;
            rows.extend(routes.iter().map(|rt| (rt.user.id, si, route_csv_row(rt, strategy))));
        }
        rows.sort_by_key(|&(u, s, _)| (u, s));
        let mut csv = format!("{ROUTES_CSV_HEADER}\n");
        for (_, _, row) in rows {
            csv.push_str(&row);
            csv.push('\n');
        }
        Ok(OutputFile {
            path: format!("{}_routes.csv", run_tag(model, n, r)),
            contents: csv,
        })
    })
}

/// Outcome of one traffic realization.
#[derive(Debug, Clone, PartialEq)]
pub struct TrafficRecord {
    pub model: Model,
    pub strategy: Strategy,
    pub n: usize,
    pub seed: u64,
    pub alpha: f64,
    pub beta: f64,
    pub lambda_total: f64,
    pub cap_total: f64,
    pub theta: f64,
    pub mean_t: Option<f64>,
    /// Travel-time estimate over the user routes; `None` without users.
    pub analytic_t: Option<f64>,
    pub lambda_c_theory: f64,
    /// Critical rate of the route subnetwork; `None` without users or when
    /// no route node carries transit traffic.
    pub lambda_c_sub: Option<f64>,
}

impl TrafficRecord {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.model,
            self.strategy,
            self.n,
            self.seed,
            self.alpha,
            self.beta,
            self.lambda_total,
            self.cap_total,
            self.theta,
            na(self.mean_t),
            na(self.analytic_t),
            self.lambda_c_theory,
            na(self.lambda_c_sub)
        )
    }
}

/// Grows one realization and simulates traffic on it.
pub fn traffic_realization(
    spec: &ExperimentSpec,
    model: Model,
    n: usize,
    r: usize,
    strategy: Strategy,
    alpha: f64,
    beta: f64,
) -> Result<TrafficRecord, ExperimentError> {
    let seed = spec.seed(r);
    let g = generate_final(&spec.growth(model, n, seed))?;
    let setup = TrafficSetup::new(&g, alpha, beta)?;
    let (_, routes) = users_and_routes(&g, spec, seed, strategy, &setup.bc_norm)?;
    let mode = match spec.traffic_mode {
        TrafficMode::Global => SimMode::Global { strategy },
        TrafficMode::Users => SimMode::Users(&routes),
    };
    let params = spec.traffic_params(alpha, beta);
    let result = simulate(&g, &setup, mode, &params, &mut seeded_rng(seed, Stream::Traffic))?;
    let analytic_t = if routes.is_empty() {
        None
    } else {
        Some(analytic_travel_time(&routes, &setup.lambda, &setup.cap)?)
    };
    let lambda_c_sub = if routes.is_empty() {
        None
    } else {
        match subnetwork_lambda_c(&g, &routes, beta) {
            Ok(v) => Some(v),
            Err(TrafficError::EmptySubnetwork | TrafficError::ZeroBetweenness) => None,
            Err(e) => return Err(e.into()),
        }
    };
    Ok(TrafficRecord {
        model,
        strategy,
        n,
        seed,
        alpha,
        beta,
        lambda_total: result.lambda_total,
        cap_total: result.cap_total,
        theta: result.theta,
        mean_t: result.mean_t,
        analytic_t,
        lambda_c_theory: setup.lambda_c(beta)?,
        lambda_c_sub,
    })
}

#[derive(Debug, Clone, Copy)]
struct TrafficCell {
    n: usize,
    model: Model,
    strategy: Strategy,
    beta: f64,
    alpha: f64,
}

fn traffic_cells(spec: &ExperimentSpec) -> Vec<TrafficCell> {
    let mut cells = Vec::new();
    for &n in &spec.sizes {
        for &model in &spec.models {
            for &strategy in &spec.strategies {
                for &beta in &spec.betas {
                    for &alpha in &spec.alphas {
                        cells.push(TrafficCell {
                            n,
                            model,
                            strategy,
                            beta,
                            alpha,
                        });
                    }
                }
            }
        }
    }
    cells
}

/// Every realization of every traffic cell, in grid order.
pub fn traffic_records(spec: &ExperimentSpec, jobs: Option<usize>) -> Result<Vec<TrafficRecord>, ExperimentError> {
    spec.validate()?;
    let tasks: Vec<(TrafficCell, usize)> = traffic_cells(spec)
        .into_iter()
        .flat_map(|c| (0..spec.realizations).map(move |r| (c, r)))
        .collect();
    par_map(jobs, &tasks, |&(c, r)| {
        traffic_realization(spec, c.model, c.n, r, c.strategy, c.alpha, c.beta)
    })
}

/// One row per traffic realization.
pub fn run_traffic(spec: &ExperimentSpec, jobs: Option<usize>) -> Result<Vec<OutputFile>, ExperimentError> {
    let mut csv = format!("{TRAFFIC_CSV_HEADER}\n");
    for rec in traffic_records(spec, jobs)? {
        csv.push_str(&rec.csv_row());
        csv.push('\n');
    }
    Ok(vec![OutputFile {
        path: "traffic.csv".to_string(),
        contents: csv,
    }])
}

/// Structural metrics of one final network.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StructureRecord {
    pub g_max: f64,
    pub apl: f64,
    pub rc: Option<f64>,
    pub clc: f64,
    pub assortativity: Option<f64>,
}

pub fn structure_realization(
    spec: &ExperimentSpec,
    model: Model,
    n: usize,
    r: usize,
) -> Result<StructureRecord, ExperimentError> {
    let seed = spec.seed(r);
    let g = generate_final(&spec.growth(model, n, seed))?;
    let m = analyze(&g, &mut seeded_rng(seed, Stream::NullModel))?;
    Ok(StructureRecord {
        g_max: m.g_max_norm(),
        apl: m.apl,
        rc: m.rc(),
        clc: m.clc,
        assortativity: m.assortativity,
    })
}

/// Critical generation rate of one final network at every beta of the grid.
pub fn lambda_c_realization(
    spec: &ExperimentSpec,
    model: Model,
    n: usize,
    r: usize,
) -> Result<Vec<f64>, ExperimentError> {
    let g = generate_final(&spec.growth(model, n, spec.seed(r)))?;
    let setup = TrafficSetup::new(&g, 0.0, 1.0)?;
    spec.betas
        .iter()
        .map(|&b| setup.lambda_c(b).map_err(Into::into))
        .collect()
}

fn structure_csv(spec: &ExperimentSpec, jobs: Option<usize>) -> Result<String, ExperimentError> {
    let cells = spec.realization_cells();
    let recs = par_map(jobs, &cells, |&(n, m, r)| structure_realization(spec, m, n, r))?;
    let mut csv = format!(
        "N,model,runs,{},{},rc_runs,{},{}\n",
        stat_header("g_max"),
        stat_header("apl"),
        stat_header("rc"),
        stat_header("clc")
    );
    for (chunk, cell) in recs.chunks(spec.realizations).zip(cells.chunks(spec.realizations)) {
        let (n, model, _) = cell[0];
        let col = |f: fn(&StructureRecord) -> f64| chunk.iter().map(f).collect::<Vec<_>>();
        let rc: Vec<f64> = chunk.iter().filter_map(|r| r.rc).collect();
        writeln!(
            csv,
            "{n},{model},{},{},{},{},{},{}",
            chunk.len(),
            summary_cols(&col(|r| r.g_max)),
            summary_cols(&col(|r| r.apl)),
            rc.len(),
            summary_cols(&rc),
            summary_cols(&col(|r| r.clc))
        )
        .unwrap();
    }
    Ok(csv)
}

fn lambda_c_csv(spec: &ExperimentSpec, jobs: Option<usize>) -> Result<String, ExperimentError> {
    let cells = spec.realization_cells();
    let recs = par_map(jobs, &cells, |&(n, m, r)| lambda_c_realization(spec, m, n, r))?;
    let mut csv = format!("N,model,beta,runs,{}\n", stat_header("lambda_c"));
    for (chunk, cell) in recs.chunks(spec.realizations).zip(cells.chunks(spec.realizations)) {
        let (n, model, _) = cell[0];
        for (bi, beta) in spec.betas.iter().enumerate() {
            let vals: Vec<f64> = chunk.iter().map(|v| v[bi]).collect();
            writeln!(csv, "{n},{model},{beta},{},{}", vals.len(), summary_cols(&vals)).unwrap();
        }
    }
    Ok(csv)
}

fn traffic_summary_csv(spec: &ExperimentSpec, jobs: Option<usize>, travel: bool) -> Result<String, ExperimentError> {
    let recs = traffic_records(spec, jobs)?;
    let mut csv = if travel {
        format!(
            "N,model,strategy,beta,alpha,load,runs,t_runs,{},{}\n",
            stat_header("mean_T"),
            stat_header("analytic_T")
        )
    } else {
        format!("N,model,strategy,beta,alpha,load,runs,{}\n", stat_header("theta"))
    };
    for (chunk, c) in recs.chunks(spec.realizations).zip(traffic_cells(spec)) {
        let load = chunk.iter().map(|r| r.lambda_total).sum::<f64>() / chunk.len() as f64;
        let head = format!(
            "{},{},{},{},{},{load},{}",
            c.n,
            c.model,
            c.strategy,
            c.beta,
            c.alpha,
            chunk.len()
        );
        if travel {
            let t: Vec<f64> = chunk.iter().filter_map(|r| r.mean_t).collect();
            let at: Vec<f64> = chunk.iter().filter_map(|r| r.analytic_t).collect();
            writeln!(csv, "{head},{},{},{}", t.len(), summary_cols(&t), summary_cols(&at)).unwrap();
        } else {
            let th: Vec<f64> = chunk.iter().map(|r| r.theta).collect();
            writeln!(csv, "{head},{}", summary_cols(&th)).unwrap();
        }
    }
    Ok(csv)
}

/// Users of a small BA network with their route under each strategy,
/// listed in strategy order.
pub fn demo_routes(
    n: usize,
    m: usize,
    n0: usize,
    users: usize,
    seed: u64,
) -> Result<Vec<Vec<(Strategy, Route)>>, ExperimentError> {
    if n < 4 {
        return Err(invalid(
            "sizes",
            format!("demo network needs at least 4 nodes, got {n}"),
        ));
    }
    let cfg = GrowthConfig {
        model: Model::Ba,
        n0,
        steps: n.saturating_sub(n0),
        m_ba: m,
        rng_seed: seed,
        ..GrowthConfig::default()
    };
    let g = generate_final(&cfg)?;
    let bc = crate::metrics::betweenness(&g)?;
    let picked = draw_users(&g, users, &mut seeded_rng(seed, Stream::Users))?;
    let mut rng = seeded_rng(seed, Stream::Routing);
    picked
        .into_iter()
        .map(|u| {
            Strategy::ALL
                .iter()
                .map(|&s| Ok((s, select_route(&g, u, s, &bc.norm, &mut rng)?)))
                .collect()
        })
        .collect()
}

fn demo_csv(spec: &ExperimentSpec) -> Result<String, ExperimentError> {
    let table = demo_routes(spec.sizes[0], DEMO_M, spec.n0, spec.users, spec.base_seed)?;
    let mut csv = format!("{ROUTES_CSV_HEADER}\n");
    for row in table {
        for (s, route) in row {
            csv.push_str(&route_csv_row(&route, s));
            csv.push('\n');
        }
    }
    Ok(csv)
}

/// Runs the experiment named by `spec.experiment` and returns its table.
pub fn run_experiment(spec: &ExperimentSpec, jobs: Option<usize>) -> Result<Vec<OutputFile>, ExperimentError> {
    spec.validate()?;
    let contents = match spec.experiment {
        ExperimentKind::StructureVsN => structure_csv(spec, jobs)?,
        ExperimentKind::LambdaCVsBeta => lambda_c_csv(spec, jobs)?,
        ExperimentKind::ThetaVsLambda => traffic_summary_csv(spec, jobs, false)?,
        ExperimentKind::TVsLambda => traffic_summary_csv(spec, jobs, true)?,
        ExperimentKind::DemoRoutes => demo_csv(spec)?,
    };
    Ok(vec![OutputFile {
        path: spec.experiment.file_name().to_string(),
        contents,
    }])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> ExperimentSpec {
        ExperimentSpec {
            sizes: vec![30],
            realizations: 2,
            users: 4,
            steps: 300,
            warmup: 50,
            window: 100,
            ..ExperimentSpec::default()
        }
    }

    #[test]
    fn defaults_validate() {
        assert!(ExperimentSpec::default().validate().is_ok());
    }

    #[test]
    fn parse_error_has_line() {
        let err = ExperimentSpec::from_json("{\n  \"realizations\": 2,\n  \"sizes\": [10,\n}").unwrap_err();
        match err {
            ExperimentError::Parse { line, .. } => assert_eq!(line, 4),
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn unknown_key_rejected() {
        let err = ExperimentSpec::from_json("{\"realisations\": 2}").unwrap_err();
        assert!(err.is_config());
        assert!(err.to_string().contains("realisations"));
    }

    #[test]
    fn invalid_value_points_at_its_line() {
        let text = "{\n  \"experiment\": \"STRUCTURE_VS_N\",\n  \"gamma\": 0.2\n}";
        match ExperimentSpec::from_json(text).unwrap_err() {
            ExperimentError::Invalid { field, line, .. } => {
                assert_eq!(field, "gamma");
                assert_eq!(line, Some(3));
            }
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn summary_stats() {
        let s = Summary::of(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(s.mean, 2.5);
        assert!((s.sd.unwrap() - (5.0f64 / 3.0).sqrt()).abs() < 1e-12);
        assert_eq!((s.min, s.max), (1.0, 4.0));
        assert_eq!(Summary::of(&[7.0]).unwrap().sd, None);
        assert!(Summary::of(&[]).is_none());
    }

    #[test]
    fn structure_rows_and_determinism() {
        let spec = small();
        let a = run_experiment(&spec, Some(2)).unwrap();
        let b = run_experiment(&spec, Some(1)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a[0].contents.lines().count(), 1 + 3);
    }

    #[test]
    fn generate_keeps_stride_and_last() {
        let spec = ExperimentSpec {
            models: vec![Model::Ba],
            sizes: vec![12],
            realizations: 1,
            snapshot_stride: 3,
            ..ExperimentSpec::default()
        };
        let files = run_generate(&spec, Some(1)).unwrap();
        let names: Vec<&str> = files.iter().map(|f| f.path.as_str()).collect();
        assert_eq!(
            names,
            [
                "BA_N12_r0/snap_0.edges",
                "BA_N12_r0/snap_3.edges",
                "BA_N12_r0/snap_6.edges",
                "BA_N12_r0/snap_7.edges"
            ]
        );
        assert!(files[3].contents.starts_with("#nodes 12\n"));
    }

    #[test]
    fn demo_rows_are_ordered_by_weight() {
        for row in demo_routes(20, DEMO_M, 5, 10, 3).unwrap() {
            let w: Vec<f64> = row.iter().map(|(_, r)| r.weight).collect();
            assert!(w[0] <= w[1] + 1e-12 && w[1] <= w[2] + 1e-12, "{w:?}");
        }
    }
}
