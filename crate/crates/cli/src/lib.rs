//! Batch front end: read a matrix, graph, grid or polynomial file, run one
//! task over the chosen semiring and print the result.
//!
//! [`run`] is the whole pipeline and never touches the file system, so it is
//! what the tests drive. Exit codes: 0 success, 2 parse error, 3 domain
//! error, 4 dimension mismatch.

use clap::{Parser, ValueEnum};
use serde_json::{json, Map, Value};

use unialg::idemcalc::{
    dequant_sample, legendre, newton_set, sup_convolution, Grid, GridFunction,
};
use unialg::interval::lift_semiring;
use unialg::io::{
    self, grid_json, looks_like_json, matrix_json, newton_json, read_graph_tsv, read_grids_tsv,
    read_matrices, read_monomial_sums, write_grid_tsv, write_matrix_tsv, write_newton_tsv,
    RawMatrix, TokenCodec,
};
use unialg::matalg::{
    bellman_solve_counted, formulas, mat_closure_counted, mat_mul_counted, BellmanMethod,
    ClosureMethod, Matrix, OpCounters,
};
use unialg::pathgraph::inverse_counted;
use unialg::semiring::{format_real, SEMIRING_NAMES};
use unialg::{make_semiring, Error, ErrorClass, Instance, Params, Result, Semiring, WeightedDigraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Task {
    Closure,
    Solve,
    ShortestPath,
    MaxWidth,
    MaxProfit,
    Invert,
    Legendre,
    Convolve,
    Dequant,
    Newton,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Tsv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Escalator,
    Gauss,
    Power,
    /// Factorize and substitute (`solve` only).
    Ldm,
    /// Fixed-point iteration (`solve` only).
    Iterate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub task: Task,
    /// Semiring name; when absent it comes from the input file or the task default.
    pub semiring: Option<String>,
    pub params: Params,
    pub method: Option<MethodArg>,
    pub interval: bool,
    pub format: Format,
    pub report_counts: bool,
    /// Path length for `max-profit`; unbounded when absent.
    pub horizon: Option<usize>,
    /// Frequency grid for `legendre`; the input grid when absent.
    pub xi: Option<Grid>,
    /// Evaluation point for `dequant`.
    pub point: Option<Vec<f64>>,
}

impl RunConfig {
    pub fn new(task: Task) -> Self {
        Self {
            task,
            semiring: None,
            params: Params::default(),
            method: None,
            interval: false,
            format: Format::Tsv,
            report_counts: false,
            horizon: None,
            xi: None,
            point: None,
        }
    }
}

/// Universal semiring algorithms from the command line.
#[derive(Debug, Parser)]
#[command(name = "unialg", version)]
pub struct Cli {
    #[arg(long, value_enum)]
    pub task: Task,
    #[arg(long)]
    pub semiring: Option<String>,
    /// Semiring parameters, e.g. `a=0,b=1` or `h=0.1`.
    #[arg(long)]
    pub param: Option<String>,
    #[arg(long, value_enum)]
    pub method: Option<MethodArg>,
    /// Run over the interval extension of the semiring.
    #[arg(long)]
    pub interval: bool,
    #[arg(long, value_enum, default_value_t = Format::Tsv)]
    pub format: Format,
    #[arg(long)]
    pub report_counts: bool,
    /// Input file; standard input when absent.
    #[arg(long)]
    pub input: Option<std::path::PathBuf>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub output: Option<std::path::PathBuf>,
    #[arg(long)]
    pub horizon: Option<usize>,
    /// Frequency grid `origin,step,n` for `legendre`.
    #[arg(long)]
    pub xi: Option<String>,
    /// Comma-separated point for `dequant`.
    #[arg(long)]
    pub point: Option<String>,
}

fn parse_list(s: &str, what: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| Error::Parse {
                    line: 0,
                    msg: format!("bad {what} component `{t}`"),
                })
        })
        .collect()
}

impl Cli {
    pub fn config(&self) -> Result<RunConfig> {
        let xi = match &self.xi {
            None => None,
            Some(s) => {
                let v = parse_list(s, "--xi")?;
                let [origin, step, n] = v[..] else {
                    return Err(Error::Parse {
                        line: 0,
                        msg: "--xi expects origin,step,n".into(),
                    });
                };
                if n < 1.0 || n.fract() != 0.0 {
                    return Err(Error::Parse {
                        line: 0,
                        msg: format!("--xi point count must be a positive integer, got {n}"),
                    });
                }
                Some(Grid::new(origin, step, n as usize)?)
            }
        };
        Ok(RunConfig {
            task: self.task,
            semiring: self.semiring.clone(),
            params: self.param.as_deref().map(Params::parse).transpose()?.unwrap_or_default(),
            method: self.method,
            interval: self.interval,
            format: self.format,
            report_counts: self.report_counts,
            horizon: self.horizon,
            xi,
            point: self.point.as_deref().map(|p| parse_list(p, "--point")).transpose()?,
        })
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e.class() {
        ErrorClass::Parse => 2,
        ErrorClass::Domain => 3,
        ErrorClass::Dimension => 4,
    }
}

/// Runs one task. On failure the output holds a one-line `error: ...`
/// message and the code is non-zero.
pub fn run(config: &RunConfig, input: &[u8]) -> (Vec<u8>, i32) {
    match execute(config, input) {
        Ok(out) => (out.into_bytes(), 0),
        Err(e) => (format!("error: {e}\n").into_bytes(), exit_code(&e)),
    }
}

fn parse_error(msg: impl Into<String>) -> Error {
    Error::Parse {
        line: 0,
        msg: msg.into(),
    }
}

fn wrong_semiring(expected: &str, actual: &str) -> Error {
    Error::WrongSemiring {
        expected: expected.into(),
        actual: actual.into(),
    }
}

/// Counts block appended by `--report-counts`.
#[derive(Debug, Clone)]
struct CountsReport {
    measured: OpCounters,
    base: Option<OpCounters>,
    formula: Option<(String, String, OpCounters)>,
}

fn counts_fields(c: OpCounters) -> String {
    format!("add={} mul={} star={}", c.n_add, c.n_mul, c.n_star)
}

fn counts_value(c: OpCounters) -> Value {
    json!({"add": c.n_add, "mul": c.n_mul, "star": c.n_star})
}

impl CountsReport {
    fn tsv(&self) -> String {
        let mut out = format!("# counts {}\n", counts_fields(self.measured));
        if let Some(b) = self.base {
            out.push_str(&format!("# counts base-ops {}\n", counts_fields(b)));
        }
        if let Some((name, expr, f)) = &self.formula {
            out.push_str(&format!(
                "# counts formula {name}: {expr} -> {} ({})\n",
                counts_fields(*f),
                if *f == self.measured { "match" } else { "MISMATCH" }
            ));
        }
        out
    }

    fn json(&self) -> Value {
        let mut m = Map::new();
        m.insert("measured".into(), counts_value(self.measured));
        if let Some(b) = self.base {
            m.insert("base_ops".into(), counts_value(b));
        }
        if let Some((name, expr, f)) = &self.formula {
            m.insert(
                "formula".into(),
                json!({"name": name, "expression": expr, "value": counts_value(*f), "match": *f == self.measured}),
            );
        }
        Value::Object(m)
    }
}

/// A result ready for either output format.
struct Emit {
    tsv: String,
    json: Value,
    counts: Option<CountsReport>,
}

impl Emit {
    fn render(self, config: &RunConfig) -> String {
        match config.format {
            Format::Tsv => {
                let mut out = self.tsv;
                if config.report_counts {
                    match &self.counts {
                        Some(c) => out.push_str(&c.tsv()),
                        None => out.push_str("# counts not tracked for this task\n"),
                    }
                }
                out
            }
            Format::Json => {
                let mut v = self.json;
                if let (true, Value::Object(m)) = (config.report_counts, &mut v) {
                    m.insert("counts".into(), self.counts.map_or(Value::Null, |c| c.json()));
                }
                let mut s = serde_json::to_string_pretty(&v).expect("serializable");
                s.push('\n');
                s
            }
        }
    }

    fn matrix<S: TokenCodec>(m: &Matrix<S>, counts: Option<CountsReport>) -> Self {
        Self {
            tsv: write_matrix_tsv(m),
            json: matrix_json(m),
            counts,
        }
    }
}

fn closure_method(config: &RunConfig) -> Result<ClosureMethod> {
    match config.method {
        None | Some(MethodArg::Gauss) => Ok(ClosureMethod::GaussJordan),
        Some(MethodArg::Escalator) => Ok(ClosureMethod::Escalator),
        Some(MethodArg::Power) => Ok(ClosureMethod::PowerSum),
        Some(m) => Err(parse_error(format!(
            "method {m:?} applies to the solve task only"
        ))),
    }
}

fn bellman_method(config: &RunConfig) -> Result<BellmanMethod> {
    match config.method {
        Some(MethodArg::Ldm) => Ok(BellmanMethod::Ldm),
        Some(MethodArg::Iterate) => Ok(BellmanMethod::Iterate),
        _ => closure_method(config).map(BellmanMethod::Closure),
    }
}

/// Resolves the semiring name from the flag, the file and the task default.
fn resolve_name(config: &RunConfig, from_file: Option<&str>, default: &str) -> Result<String> {
    match (config.semiring.as_deref(), from_file) {
        (Some(flag), Some(file)) if flag != file => {
            Err(Error::SemiringMismatch(flag.to_string(), file.to_string()))
        }
        (Some(name), _) | (None, Some(name)) => Ok(name.to_string()),
        (None, None) => Ok(default.to_string()),
    }
}

fn task_default(task: Task) -> &'static str {
    match task {
        Task::ShortestPath => "minplus",
        Task::MaxWidth => "maxmin",
        Task::MaxProfit | Task::Legendre | Task::Convolve => "maxplus",
        Task::Invert => "real_field",
        _ => "",
    }
}

/// Checks that the task makes sense over `base` before any work is done.
fn check_task_semiring(task: Task, base: Instance) -> Result<()> {
    let ok = match task {
        Task::ShortestPath => base.is_min_plus(),
        Task::MaxWidth => matches!(base, Instance::MaxMin { .. }),
        Task::MaxProfit => base.is_max_plus(),
        Task::Invert => base == Instance::RealField,
        Task::Legendre => base.is_max_plus() || base.is_min_plus(),
        _ => true,
    };
    if ok {
        return Ok(());
    }
    let expected = match task {
        Task::ShortestPath => "minplus or minplus_complete",
        Task::MaxWidth => "maxmin",
        Task::MaxProfit => "maxplus or maxplus_complete",
        Task::Invert => "real_field",
        _ => "maxplus or minplus",
    };
    Err(wrong_semiring(expected, base.base_name()))
}

/// Work that is generic over the (possibly lifted) semiring.
trait Job {
    fn run<S: TokenCodec>(self, s: S, config: &RunConfig) -> Result<Emit>;
}

fn dispatch(job: impl Job, base: Instance, config: &RunConfig) -> Result<Emit> {
    check_task_semiring(config.task, base)?;
    if config.interval {
        job.run(lift_semiring(base)?, config)
    } else {
        job.run(base, config)
    }
}

fn build(name: &str, config: &RunConfig) -> Result<Instance> {
    if name.is_empty() {
        return Err(parse_error(format!(
            "no semiring given; use --semiring with one of {}",
            SEMIRING_NAMES.join(", ")
        )));
    }
    make_semiring(name, config.params)
}

fn execute(config: &RunConfig, input: &[u8]) -> Result<String> {
    let text = std::str::from_utf8(input).map_err(|_| parse_error("input is not UTF-8"))?;
    let emit = match config.task {
        Task::Closure | Task::Solve | Task::Invert => matrix_task(config, text)?,
        Task::ShortestPath | Task::MaxWidth | Task::MaxProfit => graph_task(config, text)?,
        Task::Legendre | Task::Convolve => grid_task(config, text)?,
        Task::Dequant | Task::Newton => polynomial_task(config, text)?,
    };
    Ok(emit.render(config))
}

struct MatrixJob(Vec<RawMatrix>);

impl Job for MatrixJob {
    fn run<S: TokenCodec>(self, s: S, config: &RunConfig) -> Result<Emit> {
        let mut mats = self
            .0
            .iter()
            .map(|r| r.decode(&s))
            .collect::<Result<Vec<_>>>()?
            .into_iter();
        let a = mats.next().expect("at least one matrix");
        let mut ctr = OpCounters::new();
        let mut formula = None;
        let x = match config.task {
            Task::Closure => {
                if mats.next().is_some() {
                    return Err(parse_error("closure takes a single matrix"));
                }
                mat_closure_counted(&a, closure_method(config)?, &mut ctr)?
            }
            Task::Solve => {
                let b = match mats.next() {
                    Some(b) => b,
                    None => Matrix::identity(s.clone(), a.rows())?,
                };
                if mats.next().is_some() {
                    return Err(parse_error("solve takes at most two matrices"));
                }
                let method = bellman_method(config)?;
                let x = bellman_solve_counted(&a, &b, method, &mut ctr)?;
                if method == BellmanMethod::Ldm {
                    let (n, m) = (a.rows() as u64, b.cols() as u64);
                    let per = formulas::ldm_solve(n);
                    let expect = formulas::ldm_factorize(n)
                        + OpCounters {
                            n_add: m * per.n_add,
                            n_mul: m * per.n_mul,
                            n_star: m * per.n_star,
                        };
                    formula = Some((
                        format!("ldm n={n} m={m}"),
                        "add=(2n^3-3n^2+n)/6+m(n^2-n) mul=(2n^3+3n^2-5n)/6+m*n^2 star=n(n+1)/2+m*n"
                            .to_string(),
                        expect,
                    ));
                }
                x
            }
            _ => unreachable!("matrix tasks only"),
        };
        Ok(Emit::matrix(&x, Some(report(&s, ctr, formula))))
    }
}

fn report<S: Semiring>(s: &S, ctr: OpCounters, formula: Option<(String, String, OpCounters)>) -> CountsReport {
    CountsReport {
        measured: ctr,
        base: (s.op_width() > 1).then(|| ctr.base_ops(s)),
        formula,
    }
}

fn matrix_task(config: &RunConfig, text: &str) -> Result<Emit> {
    let raws = read_matrices(text)?;
    let name = resolve_name(config, Some(&raws[0].semiring), task_default(config.task))?;
    let base = build(&name, config)?;
    if config.task == Task::Invert {
        check_task_semiring(Task::Invert, base)?;
        if config.interval {
            lift_semiring(base)?;
        }
        if raws.len() != 1 {
            return Err(parse_error("invert takes a single matrix"));
        }
        let a = raws[0].decode(&base)?;
        let mut ctr = OpCounters::new();
        let inv = inverse_counted(&a, closure_method(config)?, &mut ctr)?;
        return Ok(Emit::matrix(&inv, Some(report(&base, ctr, None))));
    }
    dispatch(MatrixJob(raws), base, config)
}

enum GraphInput {
    Matrix(RawMatrix),
    Graph(io::RawGraph),
}

/// Graph tasks accept a graph file, or an adjacency matrix in either matrix format.
fn read_graph_input(text: &str) -> Result<GraphInput> {
    if looks_like_json(text) {
        return one_matrix(read_matrices(text)?).map(GraphInput::Matrix);
    }
    let first = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .unwrap_or("");
    let toks: Vec<&str> = first.split_whitespace().collect();
    let is_header = toks.len() == 3
        && toks[..2].iter().all(|t| t.parse::<usize>().is_ok())
        && SEMIRING_NAMES.contains(&toks[2]);
    if is_header {
        one_matrix(read_matrices(text)?).map(GraphInput::Matrix)
    } else {
        read_graph_tsv(text).map(GraphInput::Graph)
    }
}

fn one_matrix(mut v: Vec<RawMatrix>) -> Result<RawMatrix> {
    if v.len() != 1 {
        return Err(parse_error("expected a single adjacency matrix"));
    }
    Ok(v.remove(0))
}

struct GraphJob(GraphInput);

impl Job for GraphJob {
    fn run<S: TokenCodec>(self, s: S, config: &RunConfig) -> Result<Emit> {
        let (g, terminal) = match &self.0 {
            GraphInput::Matrix(raw) => (WeightedDigraph::from_matrix(&raw.decode(&s)?)?, None),
            GraphInput::Graph(raw) => (
                WeightedDigraph::from_edges(s.clone(), raw.n_nodes, raw.edges(&s)?)?,
                raw.terminal(&s)?,
            ),
        };
        let a = g.to_matrix();
        let mut ctr = OpCounters::new();
        let x = if config.task == Task::MaxProfit {
            let b = match terminal {
                Some(b) => b,
                None => Matrix::from_fn(s.clone(), g.n_nodes(), 1, |_, _| s.one())?,
            };
            match config.horizon {
                Some(k) => {
                    let mut x = b;
                    for _ in 0..k {
                        x = mat_mul_counted(&a, &x, &mut ctr)?;
                    }
                    x
                }
                None => {
                    let star = mat_closure_counted(&a, closure_method(config)?, &mut ctr)?;
                    mat_mul_counted(&star, &b, &mut ctr)?
                }
            }
        } else {
            mat_closure_counted(&a, closure_method(config)?, &mut ctr)?
        };
        Ok(Emit::matrix(&x, Some(report(&s, ctr, None))))
    }
}

fn graph_task(config: &RunConfig, text: &str) -> Result<Emit> {
    let input = read_graph_input(text)?;
    let from_file = match &input {
        GraphInput::Matrix(r) => Some(r.semiring.clone()),
        GraphInput::Graph(g) => g.semiring.clone(),
    };
    let name = resolve_name(config, from_file.as_deref(), task_default(config.task))?;
    let base = build(&name, config)?;
    if config.horizon.is_some() && config.task != Task::MaxProfit {
        return Err(parse_error("--horizon applies to max-profit only"));
    }
    dispatch(GraphJob(input), base, config)
}

struct GridJob(Vec<io::RawGrid>);

impl Job for GridJob {
    fn run<S: TokenCodec>(self, s: S, config: &RunConfig) -> Result<Emit> {
        let fs = self
            .0
            .iter()
            .map(|r| r.decode(&s))
            .collect::<Result<Vec<GridFunction<S>>>>()?;
        let out = match config.task {
            Task::Legendre => {
                let [f] = &fs[..] else {
                    return Err(parse_error("legendre takes a single grid function"));
                };
                legendre(f, config.xi.unwrap_or(f.grid()))?
            }
            _ => {
                let [f, g] = &fs[..] else {
                    return Err(parse_error("convolve takes exactly two grid functions"));
                };
                sup_convolution(f, g)?
            }
        };
        Ok(Emit {
            tsv: write_grid_tsv(&out),
            json: grid_json(&out),
            counts: None,
        })
    }
}

fn grid_task(config: &RunConfig, text: &str) -> Result<Emit> {
    let raws = read_grids_tsv(text)?;
    let name = resolve_name(config, Some(&raws[0].semiring), task_default(config.task))?;
    let base = build(&name, config)?;
    dispatch(GridJob(raws), base, config)
}

fn polynomial_task(config: &RunConfig, text: &str) -> Result<Emit> {
    if config.interval {
        let name = config.task.to_possible_value().expect("no skipped variants");
        return Err(Error::Domain(format!(
            "--interval does not apply to the {} task",
            name.get_name()
        )));
    }
    let sums = read_monomial_sums(text)?;
    match config.task {
        Task::Dequant => {
            let [f] = &sums[..] else {
                return Err(parse_error("dequant takes a single monomial sum"));
            };
            let h = config
                .params
                .h
                .ok_or_else(|| parse_error("dequant needs --param h=<value>"))?;
            let x = config
                .point
                .clone()
                .ok_or_else(|| parse_error("dequant needs --point x1,x2,..."))?;
            let v = dequant_sample(f, h, &x)?;
            let n = newton_set(f);
            let limit = n.support(&x)?;
            let tsv = format!(
                "h\t{}\npoint\t{}\nvalue\t{}\nlimit\t{}\n",
                format_real(h),
                x.iter().map(|&c| format_real(c)).collect::<Vec<_>>().join("\t"),
                format_real(v),
                format_real(limit)
            );
            let num = |x: f64| format_real(x).parse::<f64>().map(Value::from).unwrap_or(Value::Null);
            let json = json!({
                "h": num(h),
                "point": x.iter().map(|&c| num(c)).collect::<Vec<_>>(),
                "value": num(v),
                "limit": num(limit),
            });
            Ok(Emit { tsv, json, counts: None })
        }
        _ => {
            let sets: Vec<_> = sums.iter().map(newton_set).collect();
            let tsv = sets.iter().map(write_newton_tsv).collect::<String>();
            let json = match &sets[..] {
                [one] => newton_json(one),
                many => json!({"sets": many.iter().map(newton_json).collect::<Vec<_>>()}),
            };
            Ok(Emit { tsv, json, counts: None })
        }
    }
}
