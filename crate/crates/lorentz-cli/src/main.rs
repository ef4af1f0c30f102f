use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use lorentz_lab::duality::{
    associate_norm, d_associate_norm, geometric_nodes, normability, sawyer_sup_closed, sawyer_sup_discrete,
    OracleConfig, Space,
};
use lorentz_lab::kfun::{check_mw_bound, k_explicit, k_oracle};
use lorentz_lab::lorentz::{d_norm, lambda_norm, lambda_norm_layered, lambda_norm_rearranged};
use lorentz_lab::maximal::{check_lpq, classify_lpq, maximal_rearranged_at, search_cube_condition, SearchBudget};
use lorentz_lab::piecewise::parse::{parse_measure, parse_step, parse_weight};
use lorentz_lab::piecewise::{double_star, rearrange, LineMeasure, StepFn, Weight};
use lorentz_lab::quad::Quad;
use lorentz_lab::reduction::{
    preset_hardy_p0_above_one, preset_identity_p1_below_p0, verify_reduction, Indices, KernelOp, ReductionSetup,
};
use lorentz_lab::seq::{parse_discrete, parse_seq};
use lorentz_lab::suite::{self, CaseReport, SuiteConfig};
use lorentz_lab::weights::{
    ap_interval_families, check_ap, check_bp, check_bp_weak, check_delta2, check_discrete_bp, check_regular,
    index_pw, BpMode, GridSpec,
};
use lorentz_lab::{Error, ExtReal};

const SCHEMA: &str = "lorentz-lab/1";

#[derive(Parser)]
#[command(name = "lorentz-lab", version, about = "Weighted Lorentz space numerics on step-function data")]
struct Cli {
    /// Seed for every randomised search.
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Nonincreasing rearrangement f* (and f**) of a step function.
    Rearrange {
        #[arg(long)]
        f: String,
        #[arg(long, default_value = "one")]
        mu: String,
        #[arg(long, value_enum, default_value = "csv")]
        emit: Emit,
    },
    /// Lorentz functional ‖f‖ of Λ^{p,q}(w).
    Norm {
        #[arg(long)]
        f: String,
        #[arg(long, default_value = "one")]
        mu: String,
        #[arg(long)]
        w: String,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        q: f64,
        /// Print all three formulas as JSON.
        #[arg(long)]
        all: bool,
    },
    /// Weight-class test, printed as a JSON verdict.
    Classify(ClassifyArgs),
    /// Associate norms and the decreasing-cone duality supremum.
    Dual(DualArgs),
    /// Norm and normability of a Lorentz or sequence space.
    Normability {
        #[arg(long, value_enum)]
        space: SpaceKind,
        #[arg(long)]
        w: Option<String>,
        #[arg(long)]
        omega: Option<String>,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 256)]
        horizon: usize,
    },
    /// Characteristic supremum against the cone oracle; exit 1 when they disagree.
    Reduce(ReduceArgs),
    /// K-functional of (Λ^p(w), L^∞): CSV rows t,k_explicit,k_oracle,ratio.
    Kfun {
        #[arg(long)]
        f: String,
        #[arg(long, default_value = "one")]
        mu: String,
        #[arg(long, default_value = "one")]
        w: String,
        #[arg(long)]
        p: f64,
        /// Comma-separated t values.
        #[arg(long, default_value = "0.1,0.5,1,2,5,10")]
        ts: String,
    },
    /// Rearranged maximal function against its weighted bound, plus the cube-family search.
    Maximal {
        #[arg(long)]
        f: String,
        #[arg(long, default_value = "one")]
        u: String,
        #[arg(long, default_value = "one")]
        w: String,
        #[arg(long, default_value_t = 1.0)]
        p: f64,
        #[arg(long, default_value_t = 1.0)]
        q: f64,
        /// Number of random families in the search (0 skips the search).
        #[arg(long, default_value_t = 400)]
        search_budget: usize,
        #[arg(long, default_value = "0.1,0.5,1,2,5,10")]
        ts: String,
        #[arg(long, value_enum, default_value = "csv")]
        emit: Emit,
    },
    /// Run a bundled verification suite.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, value_enum)]
        emit: Option<Emit>,
        /// Include wall-clock times (makes reports run-dependent).
        #[arg(long)]
        timings: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Cond {
    Bp,
    BpWeak,
    Delta2,
    Regular,
    Index,
    Ap,
    Dbp,
    Cube,
    Lpq,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Ii,
    Iii,
    Iv,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long, value_enum)]
    cond: Cond,
    #[arg(long)]
    w: Option<String>,
    #[arg(long)]
    w0: Option<String>,
    #[arg(long)]
    w1: Option<String>,
    #[arg(long)]
    u: Option<String>,
    #[arg(long)]
    omega: Option<String>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    p0: Option<f64>,
    #[arg(long)]
    p1: Option<f64>,
    #[arg(long)]
    q: Option<f64>,
    #[arg(long)]
    r: Option<f64>,
    #[arg(long)]
    s: Option<f64>,
    /// Form of the B_p test.
    #[arg(long, value_enum, default_value = "iii")]
    mode: Mode,
    #[arg(long, default_value_t = 1e-6)]
    r_min: f64,
    #[arg(long, default_value_t = 1e6)]
    r_max: f64,
    #[arg(long, default_value_t = 241)]
    grid_n: usize,
    #[arg(long, default_value_t = 256)]
    horizon: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum DualKind {
    Assoc,
    Sawyer,
    Discrete,
    SawyerDiscrete,
}

#[derive(Args)]
struct DualArgs {
    #[arg(long, value_enum)]
    kind: DualKind,
    #[arg(long)]
    f: Option<String>,
    #[arg(long)]
    w: Option<String>,
    #[arg(long)]
    w0: Option<String>,
    #[arg(long)]
    w1: Option<String>,
    #[arg(long)]
    seq: Option<String>,
    #[arg(long)]
    omega: Option<String>,
    #[arg(long)]
    p: f64,
    #[arg(long)]
    weak: bool,
    #[arg(long, default_value_t = 256)]
    horizon: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum SpaceKind {
    Lambda,
    WeakLambda,
    D,
    DWeak,
}

#[derive(Clone, Copy, ValueEnum)]
enum OpKind {
    Identity,
    Hardy,
    Conjugate,
}

#[derive(Clone, Copy, ValueEnum)]
enum PresetKind {
    Hardy,
    Identity,
}

#[derive(Args)]
struct ReduceArgs {
    #[arg(long, value_enum, default_value = "identity")]
    op: OpKind,
    #[arg(long)]
    w0: Option<String>,
    #[arg(long)]
    w1: Option<String>,
    #[arg(long)]
    p0: Option<f64>,
    #[arg(long)]
    p1: Option<f64>,
    #[arg(long)]
    q0: Option<f64>,
    #[arg(long)]
    q1: Option<f64>,
    /// Oracle nodes: geometric grid `a,b,n`.
    #[arg(long, default_value = "0.01,100,24")]
    nodes: String,
    /// Built-in counterexample instead of explicit weights.
    #[arg(long, value_enum)]
    preset: Option<PresetKind>,
    #[arg(long, default_value_t = 64)]
    n: usize,
}

/// Failure that maps to exit code 2.
struct Usage(String);

impl From<Error> for Usage {
    fn from(e: Error) -> Self {
        Usage(e.to_string())
    }
}

type Out = std::result::Result<(String, bool), Usage>;

fn usage<T>(msg: impl Into<String>) -> std::result::Result<T, Usage> {
    Err(Usage(msg.into()))
}

fn need<'a>(v: &'a Option<String>, flag: &str) -> std::result::Result<&'a str, Usage> {
    v.as_deref().ok_or_else(|| Usage(format!("missing --{flag}")))
}

fn needf(v: Option<f64>, flag: &str) -> std::result::Result<f64, Usage> {
    v.ok_or_else(|| Usage(format!("missing --{flag}")))
}

fn exponent(v: f64, flag: &str, allow_inf: bool) -> std::result::Result<f64, Usage> {
    if v > 0.0 && (allow_inf || v.is_finite()) {
        Ok(v)
    } else {
        usage(format!("--{flag} must be positive{}, got {v}", if allow_inf { "" } else { " and finite" }))
    }
}

fn list(s: &str) -> std::result::Result<Vec<f64>, Usage> {
    let v: std::result::Result<Vec<f64>, _> = s.split(',').map(|x| x.trim().parse::<f64>()).collect();
    match v {
        Ok(v) if !v.is_empty() && v.iter().all(|t| *t > 0.0 && t.is_finite()) => Ok(v),
        _ => usage(format!("expected a comma-separated list of positive numbers, got {s:?}")),
    }
}

fn pretty<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serialisable")
}

fn num(x: ExtReal<f64>) -> String {
    x.to_string()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            if code == 0 {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            eprintln!("{}", json!({ "error": "usage", "message": e.to_string().trim_end() }));
            return ExitCode::from(2);
        }
    };
    match run(&cli) {
        Ok((out, ok)) => {
            let mut so = std::io::stdout().lock();
            let _ = writeln!(so, "{out}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Usage(m)) => {
            eprintln!("{}", json!({ "error": "usage", "message": m }));
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Out {
    let quad = Quad::default();
    let oracle = OracleConfig { seed: cli.seed, ..OracleConfig::default() };
    match &cli.cmd {
        Cmd::Rearrange { f, mu, emit } => {
            let f: StepFn<f64> = parse_step(f)?;
            let mu: LineMeasure<f64> = parse_measure(mu)?;
            let fs = rearrange(&f, &mu)?;
            let rows: Vec<(f64, f64, f64)> = fs
                .pieces()
                .map(|(a, _, v)| (a, v, if a > 0.0 { double_star(&fs, a).get() } else { v }))
                .collect();
            Ok((
                match emit {
                    Emit::Csv => csv(&["t", "value", "bound"], rows.iter().map(|r| vec![r.0, r.1, r.2])),
                    Emit::Json => pretty(&json!({ "breaks": fs.breaks(), "values": fs.values() })),
                },
                true,
            ))
        }
        Cmd::Norm { f, mu, w, p, q, all } => {
            let (p, q) = (exponent(*p, "p", false)?, exponent(*q, "q", true)?);
            let f: StepFn<f64> = parse_step(f)?;
            let mu: LineMeasure<f64> = parse_measure(mu)?;
            let w: Weight<f64> = parse_weight(w)?;
            let a = lambda_norm(&f, &mu, p, q, &w);
            if !all {
                return Ok((num(a), true));
            }
            let b = lambda_norm_rearranged(&f, &mu, p, q, &w, &quad)?;
            let c = lambda_norm_layered(&f, &mu, p, q, &w);
            Ok((pretty(&json!({ "distribution": a, "rearranged": b, "layered": c })), true))
        }
        Cmd::Classify(a) => classify(a),
        Cmd::Dual(a) => dual(a, &quad),
        Cmd::Normability { space, w, omega, p, horizon } => {
            let p = exponent(*p, "p", false)?;
            let sp = match space {
                SpaceKind::Lambda => Space::Lambda { w: parse_weight(need(w, "w")?)?, p },
                SpaceKind::WeakLambda => Space::WeakLambda { w: parse_weight(need(w, "w")?)?, p },
                SpaceKind::D => Space::D { omega: parse_discrete(need(omega, "omega")?)?, p },
                SpaceKind::DWeak => Space::DWeak { omega: parse_discrete(need(omega, "omega")?)?, p },
            };
            let v = normability(&sp, &GridSpec::default(), *horizon, &quad)?;
            Ok((pretty(&v), true))
        }
        Cmd::Reduce(a) => reduce(a, &oracle, &quad),
        Cmd::Kfun { f, mu, w, p, ts } => {
            let p = exponent(*p, "p", false)?;
            let f: StepFn<f64> = parse_step(f)?;
            let mu: LineMeasure<f64> = parse_measure(mu)?;
            let w: Weight<f64> = parse_weight(w)?;
            let hs: Vec<f64> = (0..=64).map(|i| f.sup() * i as f64 / 64.0).collect();
            let rows = list(ts)?.into_iter().map(|t| {
                let e = k_explicit(&f, &mu, t, p, &w).value.get();
                let o = k_oracle(&f, &mu, t, p, &w, &hs);
                vec![t, e, o, if o > 0.0 { e / o } else { 1.0 }]
            });
            Ok((csv(&["t", "k_explicit", "k_oracle", "ratio"], rows), true))
        }
        Cmd::Maximal { f, u, w, p, q, search_budget, ts, emit } => {
            let (p, q) = (exponent(*p, "p", false)?, exponent(*q, "q", false)?);
            let f: StepFn<f64> = parse_step(f)?;
            let u: LineMeasure<f64> = parse_measure(u)?;
            let w: Weight<f64> = parse_weight(w)?;
            let mut rows = Vec::new();
            for t in list(ts)? {
                let m = maximal_rearranged_at(&f, &u, t)?.get();
                let (_, b) = check_mw_bound(&f, &u, t, p, &w)?;
                rows.push(vec![t, m, b]);
            }
            let search = if *search_budget > 0 {
                let budget = SearchBudget { random: *search_budget, seed: cli.seed, ..SearchBudget::default() };
                Some(search_cube_condition(&u, &w, q, &budget)?)
            } else {
                None
            };
            Ok(match emit {
                Emit::Csv => {
                    let mut s = csv(&["t", "value", "bound"], rows.into_iter());
                    if let Some(v) = &search {
                        s.push_str(&format!("\n# {}: holds={} constant={}", v.condition, v.holds, v.constant));
                    }
                    (s, true)
                }
                Emit::Json => {
                    let rows: Vec<Value> = rows.iter().map(|r| json!({ "t": r[0], "value": r[1], "bound": r[2] })).collect();
                    (pretty(&json!({ "rows": rows, "search": search })), true)
                }
            })
        }
        Cmd::Verify { suite: name, emit, timings } => {
            let cfg = SuiteConfig { seed: cli.seed };
            let Some(mut cases) = suite::run_suite(name, &cfg) else {
                return usage(format!("unknown suite {name:?}; expected one of {}", suite::suite_names().join(", ")));
            };
            if !timings {
                for c in &mut cases {
                    c.runtime_ms = None;
                }
            }
            let ok = cases.iter().all(|c| c.verdict.ok());
            let out = match emit {
                Some(Emit::Json) => pretty(&json!({ "schema": SCHEMA, "suite": name, "cases": cases })),
                Some(Emit::Csv) => csv_cases(&cases),
                None => table(&cases),
            };
            Ok((out, ok))
        }
    }
}

fn csv(header: &[&str], rows: impl Iterator<Item = Vec<f64>>) -> String {
    let mut s = header.join(",");
    for r in rows {
        s.push('\n');
        s.push_str(&r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","));
    }
    s
}

fn csv_cases(cases: &[CaseReport]) -> String {
    let mut s = String::from("id,verdict,constant,tolerance");
    for c in cases {
        s.push_str(&format!("\n{},{},{},{}", c.id, c.verdict.label(), c.constant, c.tolerance));
    }
    s
}

fn table(cases: &[CaseReport]) -> String {
    let mut s = format!("{:<20} {:<6} {:>14} {:>12}  detail", "suite", "result", "worst", "tolerance");
    for c in cases {
        let res = match c.verdict {
            suite::Outcome::Pass => "PASS",
            suite::Outcome::Fail => "FAIL",
            suite::Outcome::ExpectedFail => "XFAIL",
        };
        let t = c.runtime_ms.map(|m| format!(" [{m} ms]")).unwrap_or_default();
        s.push_str(&format!("\n{:<20} {:<6} {:>14.6e} {:>12.3e}  {}{t}", c.id, res, c.constant.get(), c.tolerance, c.detail));
    }
    let failed = cases.iter().filter(|c| !c.verdict.ok()).count();
    s.push_str(&format!("\n{} passed, {failed} failed", cases.len() - failed));
    s
}

fn classify(a: &ClassifyArgs) -> Out {
    let grid = GridSpec::new(a.r_min, a.r_max, a.grid_n)?;
    let quad = Quad::default();
    let mut params = serde_json::Map::new();
    let mut put = |k: &str, v: Value| {
        params.insert(k.to_string(), v);
    };
    let v = match a.cond {
        Cond::Bp => {
            let (w, p) = (need(&a.w, "w")?, exponent(needf(a.p, "p")?, "p", false)?);
            put("w", json!(w));
            put("p", json!(p));
            let mode = match a.mode {
                Mode::Ii => BpMode::Ii,
                Mode::Iii => BpMode::Iii,
                Mode::Iv => BpMode::Iv,
            };
            put("mode", json!(format!("{mode:?}").to_lowercase()));
            check_bp(&parse_weight(w)?, p, mode, &grid, &quad)?
        }
        Cond::BpWeak => {
            let (w0, w1) = (need(&a.w0, "w0")?, need(&a.w1, "w1")?);
            let p0 = exponent(needf(a.p0, "p0")?, "p0", false)?;
            let p1 = exponent(needf(a.p1, "p1")?, "p1", false)?;
            put("w0", json!(w0));
            put("w1", json!(w1));
            put("p0", json!(p0));
            put("p1", json!(p1));
            check_bp_weak(&parse_weight(w0)?, &parse_weight(w1)?, p0, p1, &grid, &quad)?
        }
        Cond::Delta2 => {
            let w = need(&a.w, "w")?;
            put("w", json!(w));
            check_delta2(&parse_weight::<f64>(w)?, &grid)?
        }
        Cond::Regular => {
            let w = need(&a.w, "w")?;
            put("w", json!(w));
            check_regular(&parse_weight::<f64>(w)?, &grid)
        }
        Cond::Index => {
            let w = need(&a.w, "w")?;
            put("w", json!(w));
            let p = index_pw(&parse_weight::<f64>(w)?);
            let mut v = serde_json::Map::new();
            v.insert("condition".into(), json!("index"));
            v.insert("params".into(), Value::Object(params));
            v.insert("index".into(), json!(p));
            return Ok((pretty(&v), true));
        }
        Cond::Ap => {
            let (u, p) = (need(&a.u, "u")?, exponent(needf(a.p, "p")?, "p", false)?);
            put("u", json!(u));
            put("p", json!(p));
            check_ap(&parse_measure::<f64>(u)?, p, &ap_interval_families(-12, 12))
        }
        Cond::Dbp => {
            let (om, p) = (need(&a.omega, "omega")?, exponent(needf(a.p, "p")?, "p", false)?);
            put("omega", json!(om));
            put("p", json!(p));
            put("horizon", json!(a.horizon));
            check_discrete_bp(&parse_discrete::<f64>(om)?, p, a.horizon)
        }
        Cond::Cube => {
            let (u, w) = (need(&a.u, "u")?, need(&a.w, "w")?);
            let q = exponent(needf(a.q, "q")?, "q", false)?;
            put("u", json!(u));
            put("w", json!(w));
            put("q", json!(q));
            search_cube_condition(&parse_measure(u)?, &parse_weight(w)?, q, &SearchBudget::default())?
        }
        Cond::Lpq => {
            let p = exponent(needf(a.p, "p")?, "p", true)?;
            let q = exponent(needf(a.q, "q")?, "q", true)?;
            let r = exponent(a.r.unwrap_or(p), "r", true)?;
            let s = exponent(a.s.unwrap_or(q), "s", true)?;
            for (k, v) in [("p", p), ("q", q), ("r", r), ("s", s)] {
                put(k, json!(ExtReal::new(v)));
            }
            let class = classify_lpq(p, q, r, s);
            let test = match &a.u {
                Some(u) => {
                    put("u", json!(u));
                    check_lpq(&class, &parse_measure::<f64>(u)?, &ap_interval_families(-12, 12))?
                }
                None => None,
            };
            let mut v = serde_json::Map::new();
            v.insert("condition".into(), json!("lpq"));
            v.insert("params".into(), Value::Object(params));
            v.insert("class".into(), json!(class.label()));
            v.insert("test".into(), json!(test));
            return Ok((pretty(&v), true));
        }
    };
    let mut obj = match serde_json::to_value(&v).expect("serialisable") {
        Value::Object(m) => m,
        _ => unreachable!(),
    };
    obj.insert("params".into(), Value::Object(params));
    Ok((pretty(&obj), true))
}

fn dual(a: &DualArgs, quad: &Quad) -> Out {
    let p = exponent(a.p, "p", false)?;
    let v = match a.kind {
        DualKind::Assoc => {
            let f: StepFn<f64> = parse_step(need(&a.f, "f")?)?;
            let w: Weight<f64> = parse_weight(need(&a.w, "w")?)?;
            json!({ "kind": "assoc", "weak": a.weak, "p": p, "norm": associate_norm(&f, p, &w, a.weak, quad)? })
        }
        DualKind::Sawyer => {
            let w0: Weight<f64> = parse_weight(need(&a.w0, "w0")?)?;
            let w1: Weight<f64> = parse_weight(need(&a.w1, "w1")?)?;
            json!({ "kind": "sawyer", "p": p, "sup": sawyer_sup_closed(&w0, &w1, p, quad)? })
        }
        DualKind::Discrete => {
            let s = parse_seq::<f64>(need(&a.seq, "seq")?)?;
            let om = parse_discrete::<f64>(need(&a.omega, "omega")?)?;
            json!({
                "kind": "discrete",
                "weak": a.weak,
                "p": p,
                "norm": d_norm(&s, &om, p, a.weak),
                "associate": d_associate_norm(&s, &om, p, a.weak),
            })
        }
        DualKind::SawyerDiscrete => {
            let s = parse_seq::<f64>(need(&a.seq, "seq")?)?;
            let om = parse_discrete::<f64>(need(&a.omega, "omega")?)?;
            json!({ "kind": "sawyer-discrete", "p": p, "sup": sawyer_sup_discrete(&s, &om, p, a.horizon, quad)? })
        }
    };
    Ok((pretty(&v), true))
}

fn reduce(a: &ReduceArgs, oracle: &OracleConfig, quad: &Quad) -> Out {
    let (setup, nodes) = match a.preset {
        Some(k) => {
            let pr = match k {
                PresetKind::Hardy => preset_hardy_p0_above_one::<f64>(a.n)?,
                PresetKind::Identity => preset_identity_p1_below_p0::<f64>(a.n)?,
            };
            (pr.setup, pr.nodes)
        }
        None => {
            let p0 = exponent(needf(a.p0, "p0")?, "p0", false)?;
            let p1 = exponent(needf(a.p1, "p1")?, "p1", false)?;
            let q0 = exponent(a.q0.unwrap_or(p0), "q0", true)?;
            let q1 = exponent(a.q1.unwrap_or(p1), "q1", true)?;
            let op = match a.op {
                OpKind::Identity => KernelOp::Identity,
                OpKind::Hardy => KernelOp::Hardy,
                OpKind::Conjugate => KernelOp::Conjugate,
            };
            let w0 = parse_weight(need(&a.w0, "w0")?)?;
            let w1 = parse_weight(need(&a.w1, "w1")?)?;
            let g = list(&a.nodes)?;
            if g.len() != 3 || g[0] >= g[1] || g[2] < 2.0 || g[2].fract() != 0.0 {
                return usage("--nodes expects a,b,n with 0 < a < b and integer n >= 2");
            }
            let idx = Indices { p0, q0, p1, q1 };
            (ReductionSetup::single(op, w0, w1, idx), geometric_nodes(g[0], g[1], g[2] as usize))
        }
    };
    let r = verify_reduction(&setup, &nodes, oracle, quad)?;
    let ok = r.pass != Some(false);
    let verdict = match r.pass {
        Some(true) => "PASS",
        Some(false) => "FAIL",
        None => "outside",
    };
    let mut v = serde_json::to_value(&r).expect("serialisable");
    v["verdict"] = json!(verdict);
    Ok((pretty(&v), ok))
}
