//! The bundled verification suites. Each suite checks one property on a seeded
//! corpus against an independent computation and reports the worst metric.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::duality::{
    cone_sup_oracle, d_associate_norm, geometric_nodes, normability, sawyer_sup_closed, OracleConfig, Space,
};
use crate::error::Result;
use crate::ext::ExtReal;
use crate::kfun::{k_explicit, k_oracle};
use crate::lorentz::{d_norm, lambda_norm, lambda_norm_layered, lambda_norm_rearranged};
use crate::maximal::{
    check_lpq, classify_lpq, cube_grid, doubling_ratio, maximal_rearranged_at, maximal_value, phi_u_global,
    single_cube_constant, LpqClass,
};
use crate::piecewise::{distribution, double_star, rearrange, Lebesgue, LineMeasure, Measure, StepFn, Weight};
use crate::quad::Quad;
use crate::reduction::{
    char_sup, hardy_two_weight_factor, cone_average_sup, preset_hardy_p0_above_one, preset_identity_p1_below_p0,
    verify_reduction, Indices, KernelOp, ReductionSetup,
};
use crate::seq::{DiscreteWeight, Seq};
use crate::weights::{ap_interval_families, check_bp, check_discrete_bp, ls_slope, BpMode, GridSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Fail,
    /// A counterexample that is supposed to break the comparison did break it.
    ExpectedFail,
}

impl Outcome {
    pub fn ok(self) -> bool {
        self != Outcome::Fail
    }

    pub fn label(self) -> &'static str {
        match self {
            Outcome::Pass => "PASS",
            Outcome::Fail => "FAIL",
            Outcome::ExpectedFail => "PASS (expected failure reproduced)",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CaseReport {
    pub id: String,
    /// Property under test.
    pub theorem: String,
    pub verdict: Outcome,
    /// Worst metric observed.
    pub constant: ExtReal<f64>,
    pub witness: Vec<f64>,
    pub tolerance: f64,
    /// Wall time; left out of reports that must be reproducible.
    pub runtime_ms: Option<u64>,
    pub detail: String,
}

#[derive(Clone, Copy, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { seed: 7 }
    }
}

/// `(number, suite name, property)`.
pub const CRITERIA: [(u32, &str, &str); 14] = [
    (1, "rearrangement", "rearrangement is equimeasurable and preserves L^p"),
    (2, "lorentz-norms", "three Lorentz functional formulas agree"),
    (3, "cone-average", "decreasing-cone supremum of the averaging ratio"),
    (4, "reduction", "characteristic and full suprema coincide for the identity"),
    (5, "counterexamples", "level-set reduction fails outside its regime"),
    (6, "bp-table", "B_p membership of power weights in three forms"),
    (7, "sawyer", "closed duality expressions against the cone oracle"),
    (8, "discrete-duality", "associate norms of sequence spaces"),
    (9, "normability", "norm and normability verdicts"),
    (10, "kfunctional", "truncation decomposition of the K-functional"),
    (11, "maximal", "exact maximal function and its rearrangement"),
    (12, "exp-weight", "exponential measure: bounded cube constant, not doubling"),
    (13, "phi-power-law", "power law of the cube envelope for power measures"),
    (14, "lpq-table", "weights for the maximal operator on L^{p,q}(u)"),
];

pub fn suite_names() -> Vec<&'static str> {
    let mut v = vec!["all"];
    v.extend(CRITERIA.iter().map(|c| c.1));
    v
}

/// Criterion numbers selected by a suite name.
pub fn select(name: &str) -> Option<Vec<u32>> {
    if name == "all" {
        return Some(CRITERIA.iter().map(|c| c.0).collect());
    }
    CRITERIA.iter().find(|c| c.1 == name).map(|c| vec![c.0])
}

pub fn run_criterion(n: u32, cfg: &SuiteConfig) -> CaseReport {
    let start = Instant::now();
    let (name, prop) = CRITERIA.iter().find(|c| c.0 == n).map(|c| (c.1, c.2)).expect("criterion 1..=14");
    let seed = cfg.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(n as u64);
    let res = match n {
        1 => rearrangement(seed),
        2 => lorentz_norms(seed),
        3 => cone_average(),
        4 => reduction(seed),
        5 => counterexamples(),
        6 => bp_table(),
        7 => sawyer(seed),
        8 => discrete_duality(seed),
        9 => normability_table(),
        10 => kfunctional(seed),
        11 => maximal(seed),
        12 => exp_weight(),
        13 => phi_power_law(),
        14 => lpq_table(),
        _ => unreachable!(),
    };
    let m = res.unwrap_or_else(|e| Metric::fail(format!("error: {e}")));
    CaseReport {
        id: format!("{n:02}-{name}"),
        theorem: prop.to_string(),
        verdict: m.outcome,
        constant: m.value,
        witness: m.witness,
        tolerance: m.tolerance,
        runtime_ms: Some(start.elapsed().as_millis() as u64),
        detail: m.detail,
    }
}

pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Option<Vec<CaseReport>> {
    select(name).map(|ns| ns.into_iter().map(|n| run_criterion(n, cfg)).collect())
}

struct Metric {
    outcome: Outcome,
    value: ExtReal<f64>,
    witness: Vec<f64>,
    tolerance: f64,
    detail: String,
}

impl Metric {
    fn new(ok: bool, value: f64, tolerance: f64, detail: String) -> Self {
        Metric {
            outcome: if ok { Outcome::Pass } else { Outcome::Fail },
            value: ExtReal::clamp(value),
            witness: vec![],
            tolerance,
            detail,
        }
    }

    fn fail(detail: String) -> Self {
        Metric { outcome: Outcome::Fail, value: ExtReal::infinity(), witness: vec![], tolerance: 0.0, detail }
    }

    fn at(mut self, w: Vec<f64>) -> Self {
        self.witness = w;
        self
    }
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

fn ext_rel(a: ExtReal<f64>, b: ExtReal<f64>) -> f64 {
    match (a.finite(), b.finite()) {
        (Some(x), Some(y)) => rel(x, y),
        (None, None) => 0.0,
        _ => f64::INFINITY,
    }
}

/// Random nonnegative step function with `1..=max_pieces` pieces on `[lo, hi)`-ish.
pub fn random_step(rng: &mut ChaCha8Rng, max_pieces: usize, lo: f64) -> StepFn<f64> {
    const PALETTE: [f64; 5] = [0.0, 0.5, 1.0, 2.0, 3.25];
    let n = rng.gen_range(1..=max_pieces);
    let mut breaks = vec![lo + rng.gen_range(0.0..2.0)];
    let mut vals = Vec::with_capacity(n);
    for _ in 0..n {
        let b = *breaks.last().unwrap() + rng.gen_range(0.05..1.5);
        breaks.push(b);
        vals.push(if rng.gen_bool(0.4) { PALETTE[rng.gen_range(0..5)] } else { rng.gen_range(0.0..4.0) });
    }
    let f = StepFn::new(breaks, vals).expect("valid random step");
    if f.is_zero() {
        StepFn::indicator(lo, lo + 1.0, 1.0).unwrap()
    } else {
        f
    }
}

fn random_step_weight(rng: &mut ChaCha8Rng, pieces: usize, tail: bool) -> Weight<f64> {
    let mut breaks = vec![0.0];
    let mut dens = Vec::with_capacity(pieces + 1);
    for _ in 0..pieces {
        breaks.push(breaks.last().unwrap() + rng.gen_range(0.1..2.0));
        dens.push(rng.gen_range(0.05..3.0));
    }
    dens.push(if tail { rng.gen_range(0.05..2.0) } else { 0.0 });
    Weight::step(breaks, dens).expect("valid random weight")
}

fn random_weight(rng: &mut ChaCha8Rng) -> Weight<f64> {
    match rng.gen_range(0..7) {
        0 => Weight::one(),
        1 => Weight::power([-0.5, 0.5, 1.0][rng.gen_range(0..3)]).unwrap(),
        2 => Weight::chi(rng.gen_range(0.5..4.0)).unwrap(),
        3 => Weight::one_plus_log(),
        4 => Weight::inv_shift(),
        _ => {
            let k = rng.gen_range(1..5);
            let tail = rng.gen_bool(0.5);
            random_step_weight(rng, k, tail)
        }
    }
}

fn random_measure(rng: &mut ChaCha8Rng, k: usize) -> LineMeasure<f64> {
    match k {
        0 => LineMeasure::lebesgue(),
        1 => LineMeasure::exp_abs(),
        2 => LineMeasure::power_abs(1.0).unwrap(),
        _ => {
            let n = rng.gen_range(1..6);
            let mut breaks = vec![-6.0];
            for _ in 1..n {
                breaks.push(breaks.last().unwrap() + rng.gen_range(0.3..3.0));
            }
            let dens = (0..n).map(|_| rng.gen_range(0.1..5.0)).collect();
            LineMeasure::step(breaks, dens).unwrap()
        }
    }
}

fn rearrangement(seed: u64) -> Result<Metric> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    let mut exact = true;
    for _ in 0..1000 {
        let f = random_step(&mut rng, 10, -3.0);
        for k in 0..4 {
            let mu = random_measure(&mut rng, k);
            let fs = rearrange(&f, &mu)?;
            let d0 = distribution(&f, &mu);
            let d1 = distribution(&fs, &Lebesgue);
            exact &= d0 == d1;
            for p in [1.0, 2.0] {
                let a = f.integral_pow(p, &mu);
                let b = fs.integral_pow(p, &Lebesgue);
                worst = worst.max(ext_rel(a, b));
            }
        }
    }
    let tol = 1e-12;
    Ok(Metric::new(exact && worst <= tol, worst, tol, format!("distributions identical: {exact}; worst L^p relative error {worst:.2e}")))
}

fn lorentz_norms(seed: u64) -> Result<Metric> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let quad = Quad::default();
    let ps = [0.5, 1.0, 2.0];
    let qs = [0.5, 1.0, 2.0, f64::INFINITY];
    let mut worst = (0.0f64, vec![]);
    for i in 0..500 {
        let f = random_step(&mut rng, 6, -2.0);
        let mk = rng.gen_range(0..4);
        let mu = random_measure(&mut rng, mk);
        let w = random_weight(&mut rng);
        let (p, q) = (ps[i % 3], qs[(i / 3) % 4]);
        let a = lambda_norm(&f, &mu, p, q, &w);
        let b = lambda_norm_layered(&f, &mu, p, q, &w);
        let c = lambda_norm_rearranged(&f, &mu, p, q, &w, &quad)?;
        let e = ext_rel(a, b).max(ext_rel(a, c)).max(ext_rel(b, c));
        if e > worst.0 {
            worst = (e, vec![i as f64, p, q]);
        }
    }
    let tol = 1e-9;
    Ok(Metric::new(worst.0 <= tol, worst.0, tol, format!("worst pairwise relative difference {:.2e}", worst.0)).at(worst.1))
}

fn cone_average() -> Result<Metric> {
    let cfg = OracleConfig::default();
    let mut worst = 0.0f64;
    let mut ok = true;
    let mut parts = Vec::new();
    for p in [0.3, 0.5, 1.0] {
        let v: f64 = cone_average_sup(p, 64, &cfg);
        ok &= v >= p - 5e-3 && v <= p + 1e-9;
        worst = worst.max((v - p).abs());
        parts.push(format!("p={p}: {v:.6}"));
    }
    Ok(Metric::new(ok, worst, 5e-3, parts.join(", ")))
}

fn reduction(seed: u64) -> Result<Metric> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cfg = OracleConfig::default();
    let quad = Quad::default();
    let nodes = geometric_nodes(0.05, 20.0, 16);
    let mut worst = (0.0f64, vec![]);
    let mut ok = true;
    for i in 0..30 {
        let p0 = [0.5, 1.0][i % 2];
        let p1 = [p0, 1.0, 2.0][rng.gen_range(0..3)];
        let k0 = rng.gen_range(1..5);
        let k1 = rng.gen_range(1..5);
        let w0 = random_step_weight(&mut rng, k0, true);
        let w1 = if rng.gen_bool(0.3) { Weight::power(rng.gen_range(-0.5..1.0))? } else {
            let tail = rng.gen_bool(0.5);
            random_step_weight(&mut rng, k1, tail)
        };
        let setup = ReductionSetup::single(KernelOp::Identity, w0, w1, Indices::strong(p0, p1));
        let r = verify_reduction(&setup, &nodes, &cfg, &quad)?;
        let sc = r.s_c.get();
        let so = r.s_o.get();
        let pass = r.regime == "equality" && so >= sc * (1.0 - 1e-3) && so <= sc * (1.0 + 1e-6);
        ok &= pass;
        let dev = rel(so, sc);
        if dev > worst.0 || !pass {
            worst = (dev, vec![i as f64, p0, p1]);
        }
    }
    Ok(Metric::new(ok, worst.0, 1e-3, format!("worst |S_o/S_c - 1| = {:.2e}", worst.0)).at(worst.1))
}

fn counterexamples() -> Result<Metric> {
    let quad = Quad::default();
    let cfg = OracleConfig::default();
    let a = preset_hardy_p0_above_one::<f64>(41)?;
    let s = &a.setup;
    let ch = char_sup(&s.t1, &s.w0, &s.w1, &s.idx, &a.nodes, true, &quad)?;
    let fac = hardy_two_weight_factor(&s.w0, &s.w1, s.idx.p0, s.idx.p1, &a.nodes, &quad)?;
    let first = ch.holds && ch.constant.is_finite() && !fac.holds && fac.constant.is_infinite();

    let b0 = preset_identity_p1_below_p0::<f64>(64)?;
    let b1 = preset_identity_p1_below_p0::<f64>(128)?;
    let r0 = verify_reduction(&b0.setup, &b0.nodes, &cfg, &quad)?;
    let r1 = verify_reduction(&b1.setup, &b1.nodes, &cfg, &quad)?;
    let growth = r1.s_o.get() / r0.s_o.get();
    let sc_const = rel(r0.s_c.get(), r1.s_c.get()) <= 1e-12;
    let second = growth >= 10.0 && sc_const;
    let detail = format!(
        "hardy preset: characteristic constant {:.4} (bounded), two-weight factor {}; identity preset: S_c = {:.1} at N = 64 and 128, oracle {:.3e} -> {:.3e} ({growth:.2}x)",
        ch.constant.get(),
        fac.constant,
        r0.s_c.get(),
        r0.s_o.get(),
        r1.s_o.get()
    );
    let mut m = Metric::new(first && second, growth, 10.0, detail);
    if first && second {
        m.outcome = Outcome::ExpectedFail;
    }
    Ok(m)
}

fn bp_table() -> Result<Metric> {
    let quad = Quad::default();
    let grid = GridSpec::default();
    let mut bad = Vec::new();
    let mut cells = 0;
    for al in [-0.5, 0.0, 0.5, 1.0] {
        for p in [0.5, 1.0, 1.5, 2.0, 3.0] {
            let w = Weight::power(al)?;
            let want = p > 1.0 + al;
            cells += 1;
            for mode in [BpMode::Ii, BpMode::Iii, BpMode::Iv] {
                let v = check_bp(&w, p, mode, &grid, &quad)?;
                if v.holds != want {
                    bad.push(format!("alpha={al} p={p} {mode:?}"));
                }
            }
        }
    }
    Ok(Metric::new(bad.is_empty(), bad.len() as f64, 0.0, format!("{cells} cells x 3 forms; mismatches: {}", if bad.is_empty() { "none".into() } else { bad.join(", ") })))
}

fn sawyer(seed: u64) -> Result<Metric> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let quad = Quad::default();
    let cfg = OracleConfig::default();
    let mut worst = (1.0f64, vec![]);
    for i in 0..50 {
        let p = [1.5, 2.0, 3.0][i % 3];
        let k = rng.gen_range(1..5);
        let v = random_step_weight(&mut rng, k, false);
        let w = if rng.gen_bool(0.5) { Weight::power(rng.gen_range(-0.4..0.4))? } else {
            let k = rng.gen_range(1..5);
            random_step_weight(&mut rng, k, true)
        };
        let e = sawyer_sup_closed(&w, &v, p, &quad)?;
        let end = v.breakpoints().last().copied().unwrap_or(1.0);
        let mut nodes = geometric_nodes(end * 1e-4, end, 40);
        nodes.extend(v.breakpoints().into_iter().filter(|b| *b > end * 1e-4));
        nodes.sort_by(|a, b| a.partial_cmp(b).unwrap());
        nodes.dedup();
        let o = cone_sup_oracle(&v, &w, p, &nodes, &cfg).value;
        let (a, b) = (e.value.get(), e.alt.unwrap().get());
        let spread = [a / b, b / a, a / o, o / a, b / o, o / b].into_iter().fold(1.0, f64::max);
        if spread > worst.0 {
            worst = (spread, vec![i as f64, p]);
        }
    }
    let chi = Weight::chi(1.0)?;
    let e = sawyer_sup_closed::<f64>(&chi, &chi, 2.0, &quad)?;
    let o: f64 = cone_sup_oracle(&chi, &chi, 2.0, &geometric_nodes(1.0 / 64.0, 1.0, 17), &cfg).value;
    let exact = (o - 1.0).abs() <= 1e-6 && (e.value.get() - 1.0).abs() <= 1e-12;
    Ok(Metric::new(
        worst.0 <= 8.0 && exact,
        worst.0,
        8.0,
        format!("largest mutual ratio {:.3}; chi/chi p=2: oracle {o:.9}, first expression {:.15}", worst.0, e.value.get()),
    )
    .at(worst.1))
}

/// Decreasing sequences of length `len` with entries in `{0, 1/4, …, 1}` and first entry 1.
fn decreasing_grid(len: usize) -> Vec<Vec<f64>> {
    let mut out = vec![vec![1.0]];
    for _ in 1..len {
        let mut next = Vec::new();
        for s in &out {
            let last = *s.last().unwrap();
            for k in 0..=4 {
                let v = k as f64 / 4.0;
                if v <= last {
                    let mut t = s.clone();
                    t.push(v);
                    next.push(t);
                }
            }
        }
        out = next;
    }
    out
}

fn random_discrete(rng: &mut ChaCha8Rng) -> DiscreteWeight<f64> {
    match rng.gen_range(0..4) {
        0 => DiscreteWeight::Const(rng.gen_range(0.2..3.0)),
        1 => DiscreteWeight::Geometric { c0: rng.gen_range(0.5..2.0), r: rng.gen_range(0.3..2.0) },
        2 => DiscreteWeight::Power { c: 1.0, a: rng.gen_range(-0.8..1.5) },
        _ => DiscreteWeight::Terms { head: (0..4).map(|_| rng.gen_range(0.1..3.0)).collect(), tail: rng.gen_range(0.1..2.0) },
    }
}

fn discrete_duality(seed: u64) -> Result<Metric> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let grids: Vec<Vec<Vec<f64>>> = (1..=6).map(decreasing_grid).collect();
    let mut worst = 0.0f64;
    for _ in 0..60 {
        let len = rng.gen_range(1..=6);
        let f = Seq::new((0..len).map(|_| rng.gen_range(0.0..3.0)).collect())?;
        let om = random_discrete(&mut rng);
        let fs = f.rearranged();
        let w = om.partials(len);
        for p in [0.5, 1.0, 2.0] {
            // strong, p <= 1: grid search over decreasing g of the pairing ratio
            if p <= 1.0 {
                let formula = d_associate_norm(&f, &om, p, false).get();
                let mut best = 0.0f64;
                for g in &grids[len - 1] {
                    let s = Seq::new(g.clone())?;
                    let pair: f64 = fs.iter().zip(g).map(|(a, b)| a * b).sum();
                    best = best.max(pair / d_norm(&s, &om, p, false).get());
                }
                worst = worst.max(rel(best, formula));
            }
            // weak: attained at W^{-1/p}, never exceeded on the grid
            let formula = d_associate_norm(&f, &om, p, true).get();
            let ext: Vec<f64> = w.iter().map(|x| x.powf(-1.0 / p)).collect();
            let se = Seq::new(ext.clone())?;
            let pair: f64 = fs.iter().zip(&ext).map(|(a, b)| a * b).sum();
            worst = worst.max(rel(pair / d_norm(&se, &om, p, true).get(), formula));
            for g in &grids[len - 1] {
                let s = Seq::new(g.clone())?;
                let pair: f64 = fs.iter().zip(g).map(|(a, b)| a * b).sum();
                let r = pair / d_norm(&s, &om, p, true).get();
                if r > formula * (1.0 + 1e-9) {
                    worst = worst.max(rel(r, formula));
                }
            }
        }
    }
    let f = Seq::new(vec![1.0])?;
    let v = d_associate_norm(&f, &DiscreteWeight::ones(), 2.0, false).get();
    let worked = (v - 2f64.sqrt()).abs() <= 1e-9;
    let tol = 1e-9;
    Ok(Metric::new(worst <= tol && worked, worst, tol, format!("worst deviation from brute force {worst:.2e}; d(1,2) associate of e_0 = {v:.12}")))
}

fn normability_table() -> Result<Metric> {
    let grid = GridSpec::default();
    let quad = Quad::default();
    let h = 256;
    let mut bad = Vec::new();
    for p in [0.5, 1.0, 2.0] {
        let v = normability(&Space::Lambda { w: Weight::one(), p }, &grid, h, &quad)?;
        if v.is_norm != (p >= 1.0) || v.is_normable != (p >= 1.0) {
            bad.push(format!("Lambda^{p}(1)"));
        }
    }
    let v = normability(&Space::D { omega: DiscreteWeight::ones(), p: 1.0 }, &grid, h, &quad)?;
    if !v.is_normable {
        bad.push("d(1,1)".into());
    }
    let v = normability(&Space::D { omega: DiscreteWeight::Geometric { c0: 1.0, r: 2.0 }, p: 1.0 }, &grid, h, &quad)?;
    if v.is_normable {
        bad.push("d(2^n,1)".into());
    }
    for p in [0.5, 1.0, 1.5, 2.0, 3.0] {
        let v = normability(&Space::DWeak { omega: DiscreteWeight::ones(), p }, &grid, h, &quad)?;
        let t = check_discrete_bp(&DiscreteWeight::ones(), p, h);
        if v.is_normable != t.holds || t.holds != (p > 1.0) {
            bad.push(format!("d^inf(1,{p})"));
        }
    }
    Ok(Metric::new(bad.is_empty(), bad.len() as f64, 0.0, format!("mismatches: {}", if bad.is_empty() { "none".into() } else { bad.join(", ") })))
}

fn kfunctional(seed: u64) -> Result<Metric> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = [1.0f64; 3];
    let mut feasible = true;
    let mut concave = 0.0f64;
    let heights: Vec<f64> = (0..=64).map(|i| i as f64 / 16.0).collect();
    for i in 0..200 {
        let pk = i % 3;
        let p = [0.5, 1.0, 2.0][pk];
        let f = random_step(&mut rng, 8, 0.0);
        let mk = [0, 0, 1, 3][rng.gen_range(0..4)];
        let mu = random_measure(&mut rng, mk);
        let w = random_weight(&mut rng);
        let t = 10f64.powf(rng.gen_range(-1.5..1.5));
        let e = k_explicit(&f, &mu, t, p, &w).value.get();
        let o = k_oracle(&f, &mu, t, p, &w, &heights);
        feasible &= e >= o * (1.0 - 1e-12);
        if o > 0.0 {
            worst[pk] = worst[pk].max(e / o);
        }
        if i < 30 {
            // concavity on a uniform grid
            let ts: Vec<f64> = (1..=64).map(|j| j as f64 * 0.1).collect();
            let ks: Vec<f64> = ts.iter().map(|t| k_oracle(&f, &mu, *t, p, &w, &heights)).collect();
            let scale = ks.iter().copied().fold(1.0, f64::max);
            for j in 1..63 {
                concave = concave.max((ks[j + 1] - 2.0 * ks[j] + ks[j - 1]) / scale);
            }
        }
    }
    let ok = feasible && worst[1] <= 4.0 && worst[0] <= 8.0 && worst[2] <= 8.0 && concave <= 1e-9;
    Ok(Metric::new(
        ok,
        worst.iter().copied().fold(0.0, f64::max),
        8.0,
        format!(
            "explicit >= oracle: {feasible}; worst ratio p=1/2 {:.4}, p=1 {:.4}, p=2 {:.4}; largest second difference {concave:.2e}",
            worst[0], worst[1], worst[2]
        ),
    ))
}

fn maximal(seed: u64) -> Result<Metric> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut beaten = 0.0f64;
    let mut lo = f64::INFINITY;
    let mut hi = 0.0f64;
    let one = LineMeasure::lebesgue();
    for i in 0..200 {
        let f = random_step(&mut rng, 6, -2.0);
        let (a0, b0) = f.support().unwrap();
        let x = rng.gen_range(a0 - 2.0..b0 + 2.0);
        let m = maximal_value(&f, x);
        let span = b0 - a0 + (x - a0).abs() + (x - b0).abs() + 1.0;
        let k = 160;
        let mut g = 0.0f64;
        for ia in 0..=k {
            let a = x - span * ia as f64 / k as f64;
            let fa = f.primitive(a);
            for ib in 0..=k {
                let b = x + span * ib as f64 / k as f64;
                if b > a {
                    g = g.max((f.primitive(b) - fa) / (b - a));
                }
            }
        }
        beaten = beaten.max((g - m) / m.max(1e-300));
        if i < 40 {
            // the ratio can dip below 1 at individual t; the bound is on its supremum
            let mut sup = 0.0f64;
            for t in [1e-3, 0.05, 0.3, 1.0, 2.5, 7.0, 20.0, 100.0] {
                let ms = maximal_rearranged_at(&f, &one, t)?.get();
                sup = sup.max(ms / double_star(&f, t).get());
            }
            lo = lo.min(sup);
            hi = hi.max(sup);
        }
    }
    let ok = beaten <= 1e-9 && lo >= 1.0 - 1e-9 && hi <= 4.0;
    Ok(Metric::new(ok, hi, 4.0, format!("grid search excess {beaten:.2e}; sup_t (Mf)*/f** in [{lo:.4}, {hi:.4}]")))
}

fn exp_weight() -> Result<Metric> {
    let u = LineMeasure::exp_abs();
    let w = Weight::chi(1.0)?;
    let bound = 2.0 * std::f64::consts::E;
    let mut worst = (0.0f64, vec![]);
    let mut umin = f64::INFINITY;
    let mut umax = 0.0f64;
    let mut dbl = 0.0f64;
    for ci in 0..=16 {
        let c = -18.0 + 36.0 * ci as f64 / 16.0;
        for li in 0..=24 {
            let len = 10f64.powf(-8.0 + li as f64 / 2.0);
            let (a, b) = (c - len / 2.0, c + len / 2.0);
            if a < -20.0 || b > 20.0 {
                continue;
            }
            let uq = u.mass(a, b).get();
            if !(1e-6..=1e6).contains(&uq) {
                continue;
            }
            umin = umin.min(uq);
            umax = umax.max(uq);
            let k = single_cube_constant(&u, &w, 1.0, (a, b))?.get();
            if k > worst.0 {
                worst = (k, vec![a, b]);
            }
            if a - len / 2.0 >= -20.0 && b + len / 2.0 <= 20.0 {
                dbl = dbl.max(doubling_ratio(&u, a, b).get());
            }
        }
    }
    let ok = worst.0 <= bound + 1e-9 && dbl > 100.0 && umin <= 1e-5 && umax >= 1e5;
    Ok(Metric::new(
        ok,
        worst.0,
        bound + 1e-9,
        format!("largest single-cube constant {:.6} (bound 2e = {bound:.6}); u(Q) in [{umin:.1e}, {umax:.1e}]; largest u(2Q)/u(Q) = {dbl:.3e}", worst.0),
    )
    .at(worst.1))
}

fn phi_power_law() -> Result<Metric> {
    let qs = cube_grid::<f64>(-6, 6);
    let mut worst = 0.0f64;
    let mut parts = Vec::new();
    for al in [1.0, 2.0] {
        let u = LineMeasure::power_abs(al)?;
        let pts: Vec<(f64, f64)> = (0..=30)
            .map(|i| {
                let t = 10f64.powf(-4.0 + 3.0 * i as f64 / 30.0);
                (t.ln(), phi_u_global(&u, &qs, t).ln())
            })
            .collect();
        let s = ls_slope(&pts);
        let want = -al / (1.0 + al);
        worst = worst.max((s - want).abs());
        parts.push(format!("alpha={al}: slope {s:.4} (expected {want:.4})"));
    }
    Ok(Metric::new(worst <= 0.05, worst, 0.05, parts.join(", ")))
}

/// Expected branches, read off the classification theorem.
pub const LPQ_TABLE: [((f64, f64, f64, f64), &str); 20] = [
    ((0.5, 0.5, 0.5, f64::INFINITY), "impossible"),
    ((0.5, 1.0, 0.5, 2.0), "impossible"),
    ((2.0, 1.0, 3.0, f64::INFINITY), "impossible"),
    ((1.0, 1.0, 2.0, f64::INFINITY), "impossible"),
    ((2.0, 3.0, 2.0, 2.0), "impossible"),
    ((1.5, f64::INFINITY, 1.5, 2.0), "impossible"),
    ((1.0, 1.0, 1.0, f64::INFINITY), "a1"),
    ((1.0, 0.5, 1.0, f64::INFINITY), "a1"),
    ((1.0, 1.0, 1.0, 1.0), "impossible"),
    ((1.0, 2.0, 1.0, f64::INFINITY), "impossible"),
    ((1.0, 0.5, 1.0, 3.0), "impossible"),
    ((2.0, 1.0, 2.0, f64::INFINITY), "restricted"),
    ((3.0, 0.5, 3.0, f64::INFINITY), "restricted"),
    ((1.5, 1.0, 1.5, f64::INFINITY), "restricted"),
    ((2.0, 2.0, 2.0, 2.0), "ap"),
    ((2.0, 1.0, 2.0, 4.0), "ap"),
    ((2.0, 3.0, 2.0, f64::INFINITY), "ap"),
    ((3.0, 2.0, 3.0, 5.0), "ap"),
    ((1.5, f64::INFINITY, 1.5, f64::INFINITY), "ap"),
    ((4.0, 0.25, 4.0, 0.5), "ap"),
];

fn lpq_table() -> Result<Metric> {
    let fams = ap_interval_families::<f64>(-8, 8);
    let one = LineMeasure::lebesgue();
    let lin = LineMeasure::power_abs(1.0)?;
    let mut bad = Vec::new();
    for &((p, q, r, s), want) in &LPQ_TABLE {
        let c = classify_lpq(p, q, r, s);
        let got = match c {
            LpqClass::Impossible { .. } => "impossible",
            LpqClass::A1 => "a1",
            LpqClass::RestrictedWeak { .. } => "restricted",
            LpqClass::Ap { .. } => "ap",
        };
        if got != want {
            bad.push(format!("({p},{q},{r},{s}) -> {got}, expected {want}"));
            continue;
        }
        // Lebesgue measure satisfies every possible branch
        if let Some(v) = check_lpq(&c, &one, &fams)? {
            if !v.holds {
                bad.push(format!("({p},{q},{r},{s}) fails for Lebesgue"));
            }
        }
    }
    // |x| sits on the boundary: the restricted condition holds for p = 2, A_2 does not
    let rw = check_lpq(&classify_lpq(2.0, 1.0, 2.0, f64::INFINITY), &lin, &fams)?.unwrap();
    let a2 = check_lpq(&classify_lpq(2.0, 2.0, 2.0, 2.0), &lin, &fams)?.unwrap();
    if !rw.holds || a2.holds {
        bad.push(format!("|x|: restricted holds = {}, A_2 holds = {}", rw.holds, a2.holds));
    }
    Ok(Metric::new(bad.is_empty(), bad.len() as f64, 0.0, format!("20 index tuples; mismatches: {}", if bad.is_empty() { "none".into() } else { bad.join("; ") })))
}
