//! The end-to-end density pipeline: derive window/cutoff geometry, fit a
//! target, construct the aligned-phase set and its small-tail subset, then
//! measure how much of the window actually approximates the target.
//!
//! Hits are searched inside the aligned set `C(delta, M, T)` first — that is
//! where the construction predicts them — with an optional coarse full-window
//! fallback that measures how sharp the prediction is. Interval boundaries
//! are located by bisection on the continuity of the sup distance; local
//! minima are sharpened by golden-section descent so that needle-thin hit
//! basins (for example a self-shift target) are found from coarse samples.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::euler::EulerEvaluator;
use crate::expr::TargetFunction;
use crate::fit::{
    fit_angles, log_on_boundary, primes_upto, sup_error, AngleAssignment, Disc, FitBudget,
};
use crate::phase::TallShift;
use crate::primes::PrimeTable;
use crate::tausearch::{scan_c_delta, HitSet, SearchWindow};
use crate::zeta::{continue_log_zeta, log_zeta, zeta, EvalConfig};

/// Geometry derived from the disc, accuracy target and window exponents.
#[derive(Clone, Debug)]
pub struct ProofGeometry {
    pub disc: Disc,
    /// Radius of the enlarged disc `D'` around the same centre.
    pub big_r: f64,
    /// Smallest real part on `D'`.
    pub sigma1_prime: f64,
    /// Floor `y` large enough that the subharmonic tail bound meets `eps`.
    /// Astronomical at desk scale; recorded for diagnostics.
    pub y_required: f64,
    /// Intermediate cutoff `y*`.
    pub y_star: f64,
    /// Dirichlet cutoff `Y = (ln T)^A`.
    pub big_y: f64,
    /// Alignment tolerance chosen by the smallness rule.
    pub delta: f64,
    pub eps: f64,
    /// Number of primes the fit floor implies.
    pub planned_m: usize,
}

/// `R = (sigma0 + r - 1/2) / 2`, `sigma1' = sigma0 - R`, `Y = (ln T)^A`,
/// the minimal admissible `y` for `eps`, and the alignment tolerance.
///
/// Exponents must satisfy `B > A > 2 / (2(sigma0 - r) - 1)`.
pub fn derive_geometry(
    disc: &Disc,
    eps: f64,
    floor_y: f64,
    exponent_a: f64,
    exponent_b: f64,
    base: u64,
    c5: f64,
) -> Result<ProofGeometry> {
    if !(eps > 0.0) {
        return Err(Error::BadParameter("eps must be positive".into()));
    }
    let sigma0 = disc.center().re;
    let r = disc.radius();
    let denom = 2.0 * (sigma0 - r) - 1.0;
    if denom <= 1e-12 {
        return Err(Error::ExponentConstraint {
            a: exponent_a,
            b: exponent_b,
            threshold: f64::INFINITY,
        });
    }
    let threshold = 2.0 / denom;
    if !(exponent_b > exponent_a && exponent_a > threshold) {
        return Err(Error::ExponentConstraint {
            a: exponent_a,
            b: exponent_b,
            threshold,
        });
    }
    let big_r = 0.5 * (sigma0 + r - 0.5);
    let sigma1_prime = sigma0 - big_r;
    let ln_t = (base as f64).ln();
    let big_y = ln_t.powf(exponent_a);

    // Tail-exponent is 1/4 - sigma1'/2 < 0; the minimal y comes out of
    //   y^(1/4 - sigma1'/2) / (sqrt(pi) (R - r)) <= eps
    // computed in logs to survive the astronomically large values.
    let tail_exp = 0.25 - 0.5 * sigma1_prime;
    let ln_y_required = (eps * std::f64::consts::PI.sqrt() * (big_r - r)).ln() / tail_exp;
    let y_required = ln_y_required.exp(); // may overflow to inf; kept as-is

    let planned_m = primes_upto(floor_y).len();
    let delta = delta_rule(y_required.max(floor_y.max(2.0)), planned_m.max(1), sigma1_prime, c5);

    let max_floor_prime = primes_upto(floor_y).last().copied().unwrap_or(2) as f64;
    let y_star = y_star_rule(
        y_required.max(floor_y.max(2.0)),
        delta,
        planned_m.max(1),
        sigma1_prime,
        max_floor_prime,
    );
    Ok(ProofGeometry {
        disc: *disc,
        big_r,
        sigma1_prime,
        y_required,
        y_star,
        big_y,
        delta,
        eps,
        planned_m,
    })
}

/// Largest `delta` (capped at 1/2) with `c5 delta^m y^(1/2 - sigma1') < 1/2`,
/// shrunk by a 0.9 safety factor.
fn delta_rule(y: f64, m: usize, sigma1_prime: f64, c5: f64) -> f64 {
    // ln bound = [-ln(2 c5) - (1/2 - sigma1') ln y] / m
    let ln_bound = (-(2.0 * c5).ln() - (0.5 - sigma1_prime) * y.ln()) / m as f64;
    (0.9 * ln_bound.exp()).min(0.5)
}

fn y_star_rule(y: f64, delta: f64, m: usize, sigma1_prime: f64, max_prime: f64) -> f64 {
    let ln_candidate = y.ln() + delta.ln() * m as f64 / (1.0 - 2.0 * sigma1_prime);
    let candidate = ln_candidate.exp();
    candidate.max(max_prime) * (1.0 + 1e-9)
}

impl ProofGeometry {
    /// Re-derives `delta` for the actual fitted assignment: the smallness
    /// rule at the true `|M|` intersected with the uniform-continuity
    /// requirement that a `delta/2` phase perturbation moves the twisted
    /// product by at most `eps`.
    pub fn delta_for_assignment(&mut self, assign: &AngleAssignment, c5: f64) {
        let m = assign.len().max(1);
        let rule = delta_rule(
            self.y_required.max(assign.floor_y().max(2.0)),
            m,
            self.sigma1_prime,
            c5,
        );
        let sensitivity = assign.phase_sensitivity(&self.disc);
        let continuity = if sensitivity > 0.0 {
            2.0 * self.eps / sensitivity
        } else {
            0.5
        };
        self.delta = rule.min(continuity).clamp(1e-9, 0.5);
        let max_prime = assign.max_prime().unwrap_or(2) as f64;
        self.y_star = y_star_rule(
            self.y_required.max(assign.floor_y().max(2.0)),
            self.delta,
            m,
            self.sigma1_prime,
            max_prime,
        );
    }
}

/// Which surrogate stands in for zeta.
#[derive(Copy, Clone, Debug, PartialEq)]
pub enum SupMode {
    /// Euler-Maclaurin zeta; height-limited.
    TrueZeta,
    /// `exp` of the `Y`-truncated Euler product; no height limit.
    EulerSurrogate { y: f64 },
}

/// Hit criterion: plain modulus or the log-difference variant.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Criterion {
    Modulus,
    LogDifference,
}

/// Boundary-sampled sup of the distance between the shifted zeta (or its
/// surrogate) and the target, with the sampling-gap correction added.
pub fn sup_dist(
    tau: TallShift,
    f: &TargetFunction,
    disc: &Disc,
    mode: SupMode,
    criterion: Criterion,
    table: &PrimeTable,
    cfg: &EvalConfig,
    n_samples: usize,
) -> Result<f64> {
    let evaluator = match mode {
        SupMode::EulerSurrogate { y } => Some(EulerEvaluator::new(table, y)?),
        SupMode::TrueZeta => None,
    };
    let mut ctx = SupContext {
        f_boundary: boundary_target(f, disc, n_samples, criterion, cfg)?,
        disc: *disc,
        mode,
        criterion,
        evaluator,
        cfg: cfg.clone(),
        n_samples,
    };
    ctx.eval(tau)
}

/// Reusable sup-distance context (caches the target's boundary values).
struct SupContext<'t> {
    f_boundary: Vec<Complex64>,
    disc: Disc,
    mode: SupMode,
    criterion: Criterion,
    evaluator: Option<EulerEvaluator<'t>>,
    cfg: EvalConfig,
    n_samples: usize,
}

fn boundary_target(
    f: &TargetFunction,
    disc: &Disc,
    n: usize,
    criterion: Criterion,
    cfg: &EvalConfig,
) -> Result<Vec<Complex64>> {
    match criterion {
        Criterion::Modulus => disc
            .boundary_samples(n)
            .iter()
            .map(|&s| f.eval_with(s, cfg))
            .collect(),
        Criterion::LogDifference => log_on_boundary(f, disc, n, cfg),
    }
}

impl<'t> SupContext<'t> {
    fn eval(&mut self, tau: TallShift) -> Result<f64> {
        let samples = self.disc.boundary_samples(self.n_samples);
        let shifted: Vec<Complex64> = match (self.mode, self.criterion) {
            (SupMode::EulerSurrogate { y }, Criterion::LogDifference) => samples
                .iter()
                .map(|&s| self.evaluator.as_ref().unwrap().log_euler(s, tau, y))
                .collect(),
            (SupMode::EulerSurrogate { y }, Criterion::Modulus) => samples
                .iter()
                .map(|&s| self.evaluator.as_ref().unwrap().log_euler(s, tau, y).exp())
                .collect(),
            (SupMode::TrueZeta, Criterion::Modulus) => {
                let mut vals = Vec::with_capacity(samples.len());
                for &s in &samples {
                    vals.push(zeta(s + i_times(tau), &self.cfg)?);
                }
                vals
            }
            (SupMode::TrueZeta, Criterion::LogDifference) => {
                log_zeta_on_boundary(&self.disc, tau, self.n_samples, &self.cfg)?
            }
        };
        let diffs: Vec<Complex64> = shifted
            .iter()
            .zip(&self.f_boundary)
            .map(|(&z, &fv)| z - fv)
            .collect();
        let mut sup = 0.0f64;
        let mut max_jump = 0.0f64;
        let n = diffs.len();
        for j in 0..n {
            sup = sup.max(diffs[j].norm());
            max_jump = max_jump.max((diffs[(j + 1) % n] - diffs[j]).norm());
        }
        Ok(sup + 0.5 * max_jump)
    }
}

fn i_times(tau: TallShift) -> Complex64 {
    Complex64::new(0.0, tau.approx())
}

/// Branch-tracked `log zeta(s + i tau)` at the disc boundary samples:
/// horizontal continuation to the centre, then radial, then around the
/// circle.
fn log_zeta_on_boundary(
    disc: &Disc,
    tau: TallShift,
    n: usize,
    cfg: &EvalConfig,
) -> Result<Vec<Complex64>> {
    let it = i_times(tau);
    let center = disc.center() + it;
    let lz_center = log_zeta(center, cfg)?;
    let samples = disc.boundary_samples(n);
    let first = samples[0] + it;
    let lz_first = continue_log_zeta(center, lz_center, first, cfg)?;
    let mut out = Vec::with_capacity(n);
    out.push(lz_first);
    for j in 1..n {
        let prev = samples[j - 1] + it;
        let here = samples[j] + it;
        let lz = continue_log_zeta(prev, out[j - 1], here, cfg)?;
        out.push(lz);
    }
    Ok(out)
}

/// Subset of the aligned set where the Euler tail beyond `M` stays small:
/// `max_D |sum_M log(...) - sum_{p<=Y} log(...)| <= eps`, refined by
/// bisection on interval endpoints until classification stabilises.
pub fn build_e_t(
    geom: &ProofGeometry,
    assign: &AngleAssignment,
    window: &SearchWindow,
    table: &PrimeTable,
    n_boundary: usize,
) -> Result<HitSet> {
    let c_set = scan_c_delta(window, assign, geom.delta)?;
    if c_set.is_empty() {
        return Ok(HitSet::empty());
    }
    let tail = TailSup::new(geom, assign, window, table, n_boundary)?;
    let eps = geom.eps;
    let mut kept: Vec<(f64, f64)> = Vec::new();
    for &(a, b) in c_set.intervals() {
        classify_interval(&tail, a, b, eps, &mut kept, 0);
    }
    Ok(HitSet::from_intervals(kept))
}

fn classify_interval(
    tail: &TailSup,
    a: f64,
    b: f64,
    eps: f64,
    kept: &mut Vec<(f64, f64)>,
    depth: u32,
) {
    let mid = 0.5 * (a + b);
    let va = tail.sup(a) <= eps;
    let vm = tail.sup(mid) <= eps;
    let vb = tail.sup(b) <= eps;
    if va && vm && vb {
        kept.push((a, b));
        return;
    }
    if !va && !vm && !vb {
        return;
    }
    if depth >= 10 || (b - a) < 1e-7 {
        if vm {
            kept.push((a, b));
        }
        return;
    }
    classify_interval(tail, a, mid, eps, kept, depth + 1);
    classify_interval(tail, mid, b, eps, kept, depth + 1);
}

/// Sup over the disc boundary of the absolute difference between the
/// `M`-restricted and `Y`-truncated log Euler products.
struct TailSup<'t> {
    evaluator: EulerEvaluator<'t>,
    base_phases: Vec<crate::dd::Dd>,
    in_m: Vec<bool>,
    samples: Vec<Complex64>,
    big_y: f64,
}

impl<'t> TailSup<'t> {
    fn new(
        geom: &ProofGeometry,
        assign: &AngleAssignment,
        window: &SearchWindow,
        table: &'t PrimeTable,
        n_boundary: usize,
    ) -> Result<TailSup<'t>> {
        let big_y = geom.big_y;
        table.check_cutoff(big_y)?;
        let max_assign = assign.max_prime().unwrap_or(0);
        let y_max = big_y.max(max_assign as f64);
        table.check_cutoff(y_max)?;
        let evaluator = EulerEvaluator::new(table, y_max)?;
        let base_phases = evaluator.base_phases(window.base());
        let primes = evaluator.phases().primes().to_vec();
        let in_m: Vec<bool> = primes
            .iter()
            .map(|p| assign.entries().iter().any(|&(q, _)| q == *p))
            .collect();
        Ok(TailSup {
            evaluator,
            base_phases,
            in_m,
            samples: geom.disc.boundary_samples(n_boundary),
            big_y,
        })
    }

    /// `max_j |sum_{p in M} log(1 - p^(-s_j - i tau)) - sum_{p <= Y} ...|`.
    fn sup(&self, offset: f64) -> f64 {
        let phases = self.evaluator.phases();
        let mut sup = 0.0f64;
        for &s in &self.samples {
            let mut diff = Complex64::new(0.0, 0.0);
            for idx in 0..phases.len() {
                let p = phases.primes()[idx] as f64;
                let in_y = p <= self.big_y;
                let in_m = self.in_m[idx];
                if in_y == in_m {
                    continue; // present in both sums or in neither
                }
                let phase = phases.phase_with_base(idx, self.base_phases[idx], offset);
                let ln_p = phases.ln_p(idx);
                let modulus = (-s.re * ln_p).exp();
                let angle = -(s.im * ln_p + std::f64::consts::TAU * phase);
                let log_term = (Complex64::new(1.0, 0.0)
                    - Complex64::from_polar(modulus, angle))
                .ln();
                // M-sum minus Y-sum of (-log): tail primes (in Y, not in M)
                // enter with +log, M-primes beyond Y with -log.
                if in_y {
                    diff += log_term;
                } else {
                    diff -= log_term;
                }
            }
            sup = sup.max(diff.norm());
        }
        sup
    }
}

/// Parameters for the density estimate.
#[derive(Clone, Debug)]
pub struct DensityParams {
    pub eps: f64,
    pub mode: SupMode,
    pub criterion: Criterion,
    /// Sampling step inside candidate intervals.
    pub step: f64,
    pub exponent_a: f64,
    pub exponent_b: f64,
    pub floor_y: f64,
    pub seed: u64,
    pub c5: f64,
    pub budget: FitBudget,
    /// Cap on sup-distance evaluations; scanning stops cleanly when spent.
    pub max_sup_evals: usize,
    pub boundary_samples: usize,
    /// Whether to coarsely scan the window outside the aligned set too.
    pub full_window_fallback: bool,
}

impl DensityParams {
    pub fn new(eps: f64, mode: SupMode, step: f64) -> DensityParams {
        DensityParams {
            eps,
            mode,
            criterion: Criterion::Modulus,
            step,
            exponent_a: 4.2,
            exponent_b: 4.4,
            floor_y: 3.0,
            seed: 1,
            c5: 1.0,
            budget: FitBudget::default(),
            max_sup_evals: 20_000,
            boundary_samples: 24,
            full_window_fallback: true,
        }
    }
}

/// One reported hit interval with its diagnostics.
#[derive(Clone, Debug)]
pub struct HitRecord {
    pub start: f64,
    pub end: f64,
    /// Smallest sup distance seen in the interval.
    pub sup_error: f64,
    /// Per-stage errors at the interval's best shift: zeta-vs-product,
    /// fit, alignment, tail.
    pub stages: [f64; 4],
    pub inside_c: bool,
}

#[derive(Clone, Debug)]
pub struct DensityReport {
    pub window: SearchWindow,
    pub eps: f64,
    pub delta: f64,
    pub hits: HitSet,
    pub density: f64,
    pub records: Vec<HitRecord>,
    pub stage_max: [f64; 4],
    pub c_measure: f64,
    pub e_t_measure: f64,
    pub sup_evals: usize,
    pub assign: AngleAssignment,
    pub fit_sup_error: f64,
}

impl DensityReport {
    /// CSV rows `tau_offset_start,tau_offset_end,sup_error,stage1..stage4`,
    /// one per hit, then a summary row flagged by `start = end = -1` whose
    /// `sup_error` column holds the density and whose stage columns hold the
    /// per-stage maxima.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "tau_offset_start,tau_offset_end,sup_error,stage1,stage2,stage3,stage4\n",
        );
        for r in &self.records {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                r.start, r.end, r.sup_error, r.stages[0], r.stages[1], r.stages[2], r.stages[3]
            ));
        }
        out.push_str(&format!(
            "-1,-1,{},{},{},{},{}\n",
            self.density,
            self.stage_max[0],
            self.stage_max[1],
            self.stage_max[2],
            self.stage_max[3]
        ));
        out
    }
}

/// Estimates the measure of shifts in the window where the shifted zeta
/// (or surrogate) approximates the target within `eps`.
///
/// A zero density is a valid report. When `assign` is absent the target is
/// fitted first.
#[allow(clippy::too_many_arguments)]
pub fn estimate_density(
    f: &TargetFunction,
    disc: &Disc,
    window: &SearchWindow,
    params: &DensityParams,
    assign: Option<AngleAssignment>,
    table: &PrimeTable,
    cfg: &EvalConfig,
) -> Result<DensityReport> {
    let mut geom = derive_geometry(
        disc,
        params.eps,
        params.floor_y,
        params.exponent_a,
        params.exponent_b,
        window.base(),
        params.c5,
    )?;
    let (assign, fit_sup) = match assign {
        Some(a) => (a, f64::NAN),
        None => {
            let fitres = fit_angles(f, disc, params.eps, params.floor_y, &params.budget, params.seed)?;
            (fitres.assign, fitres.sup_error.total())
        }
    };
    geom.delta_for_assignment(&assign, params.c5);
    if let Some(p) = assign.max_prime() {
        let step_cap = geom.delta * std::f64::consts::PI / (2.0 * (p as f64).ln());
        if params.step > step_cap {
            return Err(Error::BadParameter(format!(
                "step {} too coarse for delta {}: needs <= {step_cap:.6}",
                params.step, geom.delta
            )));
        }
    }

    let c_set = scan_c_delta(window, &assign, geom.delta)?;
    let e_t = build_e_t(&geom, &assign, window, table, params.boundary_samples)?;

    let mut ctx = SupContext {
        f_boundary: boundary_target(f, disc, params.boundary_samples, params.criterion, cfg)?,
        disc: *disc,
        mode: params.mode,
        criterion: params.criterion,
        evaluator: match params.mode {
            SupMode::EulerSurrogate { y } => Some(EulerEvaluator::new(table, y)?),
            SupMode::TrueZeta => None,
        },
        cfg: cfg.clone(),
        n_samples: params.boundary_samples,
    };

    let mut evals = 0usize;
    let mut sup_at = |u: f64, evals: &mut usize| -> Result<f64> {
        *evals += 1;
        ctx.eval(window.shift_at(u))
    };

    // Candidate pools in proof order: E_T, then C, then (optionally) the
    // rest of the window at a coarse step.
    let mut candidates: Vec<(f64, f64, f64, bool)> = Vec::new(); // (a, b, step, inside_c)
    for &(a, b) in e_t.intervals() {
        candidates.push((a, b, params.step, true));
    }
    for &(a, b) in c_set.intervals() {
        if !e_t.intervals().iter().any(|&(x, y)| x <= a && b <= y) {
            candidates.push((a, b, params.step, true));
        }
    }
    if params.full_window_fallback {
        let coarse = (window.h() / 1024.0).max(params.step);
        let mut pos = 0.0;
        // Complement of C, chunked.
        let mut edges: Vec<(f64, f64)> = Vec::new();
        for &(a, b) in c_set.intervals() {
            if a > pos {
                edges.push((pos, a));
            }
            pos = b;
        }
        if pos < window.h() {
            edges.push((pos, window.h()));
        }
        for (a, b) in edges {
            candidates.push((a, b, coarse, false));
        }
    }

    let mut raw_hits: Vec<(f64, f64)> = Vec::new();
    let mut records: Vec<HitRecord> = Vec::new();
    'outer: for &(a, b, step, inside_c) in &candidates {
        if evals >= params.max_sup_evals {
            break;
        }
        let n_steps = ((b - a) / step).ceil().max(1.0) as usize;
        let mut grid: Vec<(f64, f64)> = Vec::with_capacity(n_steps + 1);
        for i in 0..=n_steps {
            if evals >= params.max_sup_evals {
                break 'outer;
            }
            let u = a + (b - a) * i as f64 / n_steps as f64;
            grid.push((u, sup_at(u, &mut evals)?));
        }
        // Local minima (including endpoints) below 4x eps get sharpened.
        for i in 0..grid.len() {
            let here = grid[i].1;
            let left = if i > 0 { grid[i - 1].1 } else { f64::INFINITY };
            let right = if i + 1 < grid.len() {
                grid[i + 1].1
            } else {
                f64::INFINITY
            };
            if here > left || here > right {
                continue;
            }
            let lo = if i > 0 { grid[i - 1].0 } else { a };
            let hi = if i + 1 < grid.len() { grid[i + 1].0 } else { b };
            if evals + 64 > params.max_sup_evals {
                break 'outer;
            }
            let (u_min, v_min) = golden_min(
                &mut |u| sup_at(u, &mut evals),
                lo,
                hi,
                grid[i].0,
                here,
                params.eps,
            )?;
            if v_min >= params.eps {
                continue;
            }
            // Expand to the eps level set around the minimum.
            let left_edge = expand_edge(&mut |u| sup_at(u, &mut evals), u_min, -step, a, params.eps)?;
            let right_edge = expand_edge(&mut |u| sup_at(u, &mut evals), u_min, step, b, params.eps)?;
            if right_edge > left_edge && !raw_hits.iter().any(|&(x, y)| x <= u_min && u_min <= y) {
                raw_hits.push((left_edge, right_edge));
                records.push(HitRecord {
                    start: left_edge,
                    end: right_edge,
                    sup_error: v_min,
                    stages: [0.0; 4],
                    inside_c,
                });
            }
        }
    }

    // Stage diagnostics at each hit's best point.
    let diag = StageDiagnostics::new(&geom, &assign, window, table, params, f, disc, cfg)?;
    let mut stage_max = [0.0f64; 4];
    for rec in &mut records {
        let u = 0.5 * (rec.start + rec.end);
        rec.stages = diag.at(u, &mut evals)?;
        for k in 0..4 {
            stage_max[k] = stage_max[k].max(rec.stages[k]);
        }
    }

    let hits = HitSet::from_intervals(raw_hits);
    let density = hits.measure() / window.h();
    Ok(DensityReport {
        window: *window,
        eps: params.eps,
        delta: geom.delta,
        density,
        records,
        stage_max,
        c_measure: c_set.measure(),
        e_t_measure: e_t.measure(),
        sup_evals: evals,
        assign,
        fit_sup_error: fit_sup,
        hits,
    })
}

/// Golden-section sharpening of a sampled local minimum; stops early once
/// the value is far below `eps` or the bracket collapses.
fn golden_min(
    f: &mut dyn FnMut(f64) -> Result<f64>,
    mut lo: f64,
    mut hi: f64,
    seed_u: f64,
    seed_v: f64,
    eps: f64,
) -> Result<(f64, f64)> {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut best = (seed_u, seed_v);
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    for _ in 0..48 {
        if f1 < best.1 {
            best = (x1, f1);
        }
        if f2 < best.1 {
            best = (x2, f2);
        }
        if best.1 < 1e-3 * eps || (hi - lo) < 1e-13 * (1.0 + hi.abs()) {
            break;
        }
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2)?;
        }
    }
    Ok(best)
}

/// Walks from a sub-eps point to the eps crossing (bisection between the
/// last sub-eps and first super-eps samples).
fn expand_edge(
    f: &mut dyn FnMut(f64) -> Result<f64>,
    from: f64,
    step: f64,
    limit: f64,
    eps: f64,
) -> Result<f64> {
    let mut inside = from;
    let mut probe = from + step;
    let beyond = |p: f64| {
        if step < 0.0 {
            p < limit
        } else {
            p > limit
        }
    };
    loop {
        if beyond(probe) {
            probe = limit;
        }
        if f(probe)? < eps {
            inside = probe;
            if probe == limit {
                return Ok(limit);
            }
            probe += step;
            continue;
        }
        break;
    }
    // Bisect between inside (sub-eps) and probe (super-eps).
    let mut outside = probe;
    for _ in 0..40 {
        let mid = 0.5 * (inside + outside);
        if f(mid)? < eps {
            inside = mid;
        } else {
            outside = mid;
        }
        if (outside - inside).abs() < 1e-12 * (1.0 + inside.abs()) {
            break;
        }
    }
    Ok(inside)
}

/// Computes the four per-stage errors at a shift.
struct StageDiagnostics<'t> {
    geom: ProofGeometry,
    m_primes: Vec<u64>,
    window: SearchWindow,
    tail: TailSup<'t>,
    twisted_boundary: Vec<Complex64>,
    fit_stage: f64,
    evaluator: EulerEvaluator<'t>,
    samples: Vec<Complex64>,
    mode: SupMode,
    cfg: EvalConfig,
}

impl<'t> StageDiagnostics<'t> {
    #[allow(clippy::too_many_arguments)]
    fn new(
        geom: &ProofGeometry,
        assign: &AngleAssignment,
        window: &SearchWindow,
        table: &'t PrimeTable,
        params: &DensityParams,
        f: &TargetFunction,
        disc: &Disc,
        cfg: &EvalConfig,
    ) -> Result<StageDiagnostics<'t>> {
        let n = params.boundary_samples;
        let samples = disc.boundary_samples(n);
        let twisted_boundary: Vec<Complex64> = samples
            .iter()
            .map(|&s| crate::fit::twisted_product(assign, s))
            .collect();
        // Stage 2: fit error, shift-independent.
        let fit_stage = match log_on_boundary(f, disc, n, cfg) {
            Ok(g) => sup_error(&g, assign, disc).total(),
            Err(_) => f64::NAN, // target vanishes or winds; only possible with a supplied assignment
        };
        let y_max = geom.big_y.max(assign.max_prime().unwrap_or(0) as f64);
        Ok(StageDiagnostics {
            geom: geom.clone(),
            m_primes: assign.entries().iter().map(|&(p, _)| p).collect(),
            window: *window,
            tail: TailSup::new(geom, assign, window, table, n)?,
            twisted_boundary,
            fit_stage,
            evaluator: EulerEvaluator::new(table, y_max)?,
            samples,
            mode: params.mode,
            cfg: cfg.clone(),
        })
    }

    fn at(&self, offset: f64, evals: &mut usize) -> Result<[f64; 4]> {
        *evals += 1;
        let shift = self.window.shift_at(offset);
        // Stage 3: fitted angles vs the actual phases at this shift,
        // restricted to M.
        let mut stage3 = 0.0f64;
        for (j, &s) in self.samples.iter().enumerate() {
            let at_tau = self.evaluator.log_euler_over(s, shift, &self.m_primes);
            stage3 = stage3.max((self.twisted_boundary[j] - at_tau).norm());
        }
        // Stage 4: tail beyond M up to Y.
        let stage4 = self.tail.sup(offset);
        // Stage 1: zeta vs the Y-truncated product (surrogate mode: zero).
        let stage1 = match self.mode {
            SupMode::EulerSurrogate { .. } => 0.0,
            SupMode::TrueZeta => {
                let mut sup = 0.0f64;
                match log_zeta_on_boundary(&self.geom.disc, shift, self.samples.len(), &self.cfg) {
                    Ok(lzs) => {
                        for (j, &s) in self.samples.iter().enumerate() {
                            let product = self.evaluator.log_euler(s, shift, self.geom.big_y);
                            sup = sup.max((lzs[j] - product).norm());
                        }
                        sup
                    }
                    Err(Error::BranchNearZero { .. }) => f64::NAN,
                    Err(e) => return Err(e),
                }
            }
        };
        Ok([stage1, self.fit_stage, stage3, stage4])
    }
}
