//! Fitting a twisted finite Euler product to the logarithm of a target
//! function on a disc in the critical strip.
//!
//! The existence of such approximations is classical but non-constructive;
//! this module makes it effective at desk scale. Angles are initialised by
//! matching the first-order prime coefficients of the target's expansion,
//! then refined by cyclic coordinate descent on the sampled-boundary sup
//! objective, with seeded random restarts. The prime set grows by appending
//! the next prime whenever descent stalls above the requested accuracy.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::expr::TargetFunction;
use crate::zeta::EvalConfig;

/// Closed disc `|s - center| <= radius` inside the strip `1/2 < Re < 1`.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Disc {
    center: Complex64,
    radius: f64,
}

impl Disc {
    pub fn new(center: Complex64, radius: f64) -> Result<Disc> {
        let lo = center.re - radius;
        let hi = center.re + radius;
        if !(radius > 0.0) || !(lo > 0.5 && hi < 1.0) {
            return Err(Error::DiscOutsideStrip { lo, hi });
        }
        Ok(Disc { center, radius })
    }

    pub fn center(&self) -> Complex64 {
        self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Smallest real part on the disc.
    pub fn sigma_min(&self) -> f64 {
        self.center.re - self.radius
    }

    pub fn boundary_point(&self, angle: f64) -> Complex64 {
        self.center + Complex64::from_polar(self.radius, angle)
    }

    /// `n` equally spaced boundary points starting at angle 0.
    pub fn boundary_samples(&self, n: usize) -> Vec<Complex64> {
        (0..n)
            .map(|j| self.boundary_point(std::f64::consts::TAU * j as f64 / n as f64))
            .collect()
    }
}

/// A finite prime set with an angle `theta_p` in `[0,1)` per prime.
#[derive(Clone, Debug, PartialEq)]
pub struct AngleAssignment {
    entries: Vec<(u64, f64)>, // ascending primes
    floor_y: f64,
}

impl AngleAssignment {
    pub fn new(mut entries: Vec<(u64, f64)>, floor_y: f64) -> Result<AngleAssignment> {
        entries.sort_unstable_by_key(|&(p, _)| p);
        for w in entries.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::BadParameter(format!("duplicate prime {}", w[0].0)));
            }
        }
        for &(p, theta) in &entries {
            if !is_prime(p) {
                return Err(Error::BadParameter(format!("{p} is not prime")));
            }
            if !(0.0..1.0).contains(&theta) {
                return Err(Error::BadParameter(format!(
                    "theta for {p} must lie in [0,1), got {theta}"
                )));
            }
        }
        for p in primes_upto(floor_y) {
            if !entries.iter().any(|&(q, _)| q == p) {
                return Err(Error::BadParameter(format!(
                    "assignment must contain every prime <= {floor_y}; missing {p}"
                )));
            }
        }
        Ok(AngleAssignment { entries, floor_y })
    }

    pub fn empty() -> AngleAssignment {
        AngleAssignment {
            entries: Vec::new(),
            floor_y: 0.0,
        }
    }

    pub fn entries(&self) -> &[(u64, f64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn floor_y(&self) -> f64 {
        self.floor_y
    }

    pub fn max_prime(&self) -> Option<u64> {
        self.entries.last().map(|&(p, _)| p)
    }

    pub fn theta(&self, p: u64) -> Option<f64> {
        self.entries
            .iter()
            .find(|&&(q, _)| q == p)
            .map(|&(_, t)| t)
    }

    /// Wire format: one `p theta_p` line per prime, ascending.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for &(p, theta) in &self.entries {
            out.push_str(&format!("{p} {theta}\n"));
        }
        out
    }

    /// Parses the `p theta_p` line format. The floor of the resulting
    /// assignment is unknown to the file and set to zero.
    pub fn from_text(text: &str) -> Result<AngleAssignment> {
        let mut entries = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split_whitespace();
            let (Some(p), Some(theta), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(Error::BadParameter(format!(
                    "assignment line {}: expected 'p theta', got '{line}'",
                    idx + 1
                )));
            };
            let p: u64 = p.parse().map_err(|_| {
                Error::BadParameter(format!("assignment line {}: bad prime '{p}'", idx + 1))
            })?;
            let theta: f64 = theta.parse().map_err(|_| {
                Error::BadParameter(format!("assignment line {}: bad angle '{theta}'", idx + 1))
            })?;
            entries.push((p, theta));
        }
        AngleAssignment::new(entries, 0.0)
    }

    /// Upper bound on the sup over the disc of the derivative of the
    /// twisted product in any single angle: `2 pi m / (1 - m)` per prime
    /// with `m = p^(-sigma_min)`. Used to pick an alignment tolerance that
    /// keeps phase perturbations below a target accuracy.
    pub fn phase_sensitivity(&self, disc: &Disc) -> f64 {
        let sigma = disc.sigma_min();
        self.entries
            .iter()
            .map(|&(p, _)| {
                let m = (p as f64).powf(-sigma);
                std::f64::consts::TAU * m / (1.0 - m)
            })
            .sum()
    }
}

/// `sum_{p in M} -log(1 - e(-theta_p) p^(-s))`, principal logs.
pub fn twisted_product(assign: &AngleAssignment, s: Complex64) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    for &(p, theta) in &assign.entries {
        sum -= twisted_factor(p, theta, s).ln();
    }
    sum
}

/// `1 - e(-theta) p^(-s)`; modulus of the subtracted term is below 1 for
/// `Re(s) > 0`, so the principal log of this is safe.
#[inline]
fn twisted_factor(p: u64, theta: f64, s: Complex64) -> Complex64 {
    let ln_p = (p as f64).ln();
    let modulus = (-s.re * ln_p).exp();
    let angle = -(s.im * ln_p + std::f64::consts::TAU * theta);
    Complex64::new(1.0, 0.0) - Complex64::from_polar(modulus, angle)
}

/// Sampled boundary sup with its sampling-gap correction.
#[derive(Copy, Clone, Debug, Default)]
pub struct SupError {
    /// Max of |difference| over the boundary samples.
    pub sampled: f64,
    /// Half the max consecutive jump: a finite-difference bound on what the
    /// sup between samples can exceed the sampled sup by.
    pub correction: f64,
}

impl SupError {
    pub fn total(&self) -> f64 {
        self.sampled + self.correction
    }
}

/// Sup of `|g - twisted_product|` over the sampled boundary.
///
/// `g_boundary` holds the target log values at equally spaced boundary
/// angles starting from 0 (at least 16 of them). By the maximum principle
/// the boundary sup dominates the disc sup for analytic differences.
pub fn sup_error(g_boundary: &[Complex64], assign: &AngleAssignment, disc: &Disc) -> SupError {
    debug_assert!(g_boundary.len() >= 16, "need at least 16 boundary samples");
    let n = g_boundary.len();
    let diffs: Vec<Complex64> = disc
        .boundary_samples(n)
        .iter()
        .zip(g_boundary)
        .map(|(&s, &g)| g - twisted_product(assign, s))
        .collect();
    sup_from_diffs(&diffs)
}

fn sup_from_diffs(diffs: &[Complex64]) -> SupError {
    let n = diffs.len();
    let mut sampled = 0.0f64;
    let mut max_jump = 0.0f64;
    for j in 0..n {
        sampled = sampled.max(diffs[j].norm());
        let jump = (diffs[(j + 1) % n] - diffs[j]).norm();
        max_jump = max_jump.max(jump);
    }
    SupError {
        sampled,
        correction: 0.5 * max_jump,
    }
}

/// Continuous branch of `log f` on the disc boundary.
///
/// Values are tracked around the circle with adaptive subdivision so that no
/// step changes the argument by more than pi/2; a nonzero winding number
/// means `f` has a zero inside the disc and is rejected, as is any sample
/// with `|f|` below the vanishing threshold.
pub fn log_on_boundary(
    f: &TargetFunction,
    disc: &Disc,
    n: usize,
    cfg: &EvalConfig,
) -> Result<Vec<Complex64>> {
    const VANISH: f64 = 1e-8;
    let samples = disc.boundary_samples(n);
    let mut values = Vec::with_capacity(n);
    for &s in &samples {
        let v = f.eval_with(s, cfg)?;
        if v.norm() < VANISH {
            return Err(Error::ZeroTarget(s, v.norm()));
        }
        values.push(v);
    }
    let mut logs = Vec::with_capacity(n);
    logs.push(values[0].ln());
    let step = std::f64::consts::TAU / n as f64;
    for j in 0..n {
        let delta = arg_increment(
            f,
            disc,
            step * j as f64,
            step * (j + 1) as f64,
            values[j],
            values[(j + 1) % n],
            cfg,
            0,
        )?;
        if j + 1 < n {
            let arg_next = logs[j].im + delta.im;
            logs.push(Complex64::new(values[j + 1].norm().ln(), arg_next));
        } else {
            // Closing the loop: the accumulated argument must return to the
            // start, otherwise f winds around 0 and has a zero inside.
            let winding = (logs[n - 1].im + delta.im - logs[0].im) / std::f64::consts::TAU;
            if winding.abs() > 0.25 {
                return Err(Error::TargetWinds);
            }
        }
    }
    Ok(logs)
}

/// Argument increment of `f` along a boundary arc, with subdivision.
#[allow(clippy::too_many_arguments)]
fn arg_increment(
    f: &TargetFunction,
    disc: &Disc,
    a: f64,
    b: f64,
    fa: Complex64,
    fb: Complex64,
    cfg: &EvalConfig,
    depth: u32,
) -> Result<Complex64> {
    const VANISH: f64 = 1e-8;
    let ratio = fb / fa;
    if ratio.arg().abs() < std::f64::consts::FRAC_PI_2 || depth >= 16 {
        return Ok(ratio.ln());
    }
    let mid = 0.5 * (a + b);
    let fm = f.eval_with(disc.boundary_point(mid), cfg)?;
    if fm.norm() < VANISH {
        return Err(Error::ZeroTarget(disc.boundary_point(mid), fm.norm()));
    }
    let left = arg_increment(f, disc, a, mid, fa, fm, cfg, depth + 1)?;
    let right = arg_increment(f, disc, mid, b, fm, fb, cfg, depth + 1)?;
    Ok(left + right)
}

/// Resource limits for the fitter.
#[derive(Copy, Clone, Debug)]
pub struct FitBudget {
    pub max_primes: usize,
    pub max_sweeps: usize,
    pub restarts: usize,
}

impl Default for FitBudget {
    fn default() -> Self {
        FitBudget {
            max_primes: 50,
            max_sweeps: 200,
            restarts: 8,
        }
    }
}

#[derive(Clone, Debug)]
pub struct FitResult {
    pub assign: AngleAssignment,
    pub sup_error: SupError,
    pub converged: bool,
    pub sweeps_used: usize,
}

const BOUNDARY_SAMPLES: usize = 64;
const LINE_SEARCH_GRID: usize = 48;

/// Fits angles so the twisted product over `M ⊇ {p <= floor_y}` approximates
/// `log f` on the disc to within `eps`, growing `M` as needed.
///
/// Deterministic for a fixed `seed`. When the budget runs out the best
/// assignment found is returned with `converged = false`.
pub fn fit_angles(
    f: &TargetFunction,
    disc: &Disc,
    eps: f64,
    floor_y: f64,
    budget: &FitBudget,
    seed: u64,
) -> Result<FitResult> {
    if !(eps > 0.0) {
        return Err(Error::BadParameter("eps must be positive".into()));
    }
    let cfg = EvalConfig::default();
    check_nonvanishing(f, disc, &cfg)?;
    let g = log_on_boundary(f, disc, BOUNDARY_SAMPLES, &cfg)?;
    let samples = disc.boundary_samples(BOUNDARY_SAMPLES);

    let mut primes = primes_upto(floor_y);
    if primes.len() > budget.max_primes {
        return Err(Error::BadParameter(format!(
            "floor {floor_y} requires {} primes, budget allows {}",
            primes.len(),
            budget.max_primes
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fitter = Fitter::new(&g, &samples);
    let mut sweeps_used = 0usize;

    // Angles carried across growth stages. Dirichlet-coefficient
    // extraction along a vertical segment is the reliable initialiser;
    // when the target cannot be continued there, fall back to a boundary
    // least-squares estimate and lean on the restarts.
    let segment = SegmentLogs::build(f, disc, &cfg);
    let mut thetas: Vec<f64> = match &segment {
        Some(seg) => primes.iter().map(|&p| seg.angle_for(p)).collect(),
        None => fitter.ls_init(&primes, &[]),
    };

    let mut best: Option<(f64, Vec<u64>, Vec<f64>)> = None;
    loop {
        // Descent (with restarts) at the current prime set; each restart
        // gets its own sweep allowance.
        let mut stage_best_err = f64::INFINITY;
        let mut stage_best_thetas = thetas.clone();
        for restart in 0..=budget.restarts {
            let mut trial = if restart == 0 {
                thetas.clone()
            } else {
                (0..primes.len()).map(|_| rng.gen::<f64>()).collect()
            };
            let mut restart_sweeps = 0usize;
            let err = fitter.descend(
                &primes,
                &mut trial,
                eps,
                budget.max_sweeps,
                &mut restart_sweeps,
            );
            sweeps_used += restart_sweeps;
            if err < stage_best_err {
                stage_best_err = err;
                stage_best_thetas = trial;
            }
            if stage_best_err <= eps {
                break;
            }
        }
        thetas = stage_best_thetas;
        let improved = best.as_ref().map_or(true, |(e, _, _)| stage_best_err < *e);
        if improved {
            best = Some((stage_best_err, primes.clone(), thetas.clone()));
        }
        if stage_best_err <= eps {
            break;
        }
        if primes.len() >= budget.max_primes {
            break;
        }
        // Stalled above eps: append the next prime.
        let next = next_prime(primes.last().copied().unwrap_or(1));
        primes.push(next);
        match &segment {
            Some(seg) => thetas.push(seg.angle_for(next)),
            None => thetas = fitter.ls_init(&primes, &thetas),
        }
    }

    let (_, primes, thetas) = best.expect("at least one descent stage runs");
    let entries: Vec<(u64, f64)> = primes.iter().copied().zip(thetas).collect();
    let assign = AngleAssignment::new(entries, floor_y)?;
    let err = sup_error(&g, &assign, disc);
    Ok(FitResult {
        converged: err.total() <= eps,
        sup_error: err,
        assign,
        sweeps_used,
    })
}

/// Angle initialisation by Dirichlet-coefficient extraction.
///
/// On a desk-scale disc the restrictions of `p^(-s)` are nearly constant,
/// so nothing sampled on the disc alone can separate the primes: the
/// first-order coefficients are read off a vertical segment through the
/// centre instead, where each prime oscillates at its own frequency
/// `ln p`. A Hann-windowed Fourier average at frequency `ln p` isolates
/// `e(-theta_p) p^(-sigma0)` well enough to land every angle in the right
/// basin. Returns `None` when the target cannot be continued along the
/// segment (vanishing or evaluation failure); callers then fall back to
/// random restarts.
struct SegmentLogs {
    ts: Vec<f64>,
    logs: Vec<Complex64>,
    window: Vec<f64>,
    weight: f64,
}

impl SegmentLogs {
    const HALF_LENGTH: f64 = 40.0;
    const SAMPLES: usize = 1024;

    fn build(f: &TargetFunction, disc: &Disc, cfg: &EvalConfig) -> Option<SegmentLogs> {
        let center = disc.center();
        let step = 2.0 * Self::HALF_LENGTH / Self::SAMPLES as f64;
        let ts: Vec<f64> = (0..Self::SAMPLES)
            .map(|j| -Self::HALF_LENGTH + (j as f64 + 0.5) * step)
            .collect();
        let eval = |t: f64| -> Option<Complex64> {
            let v = f.eval_with(center + Complex64::new(0.0, t), cfg).ok()?;
            (v.norm() >= 1e-8).then_some(v)
        };
        // Continuous log f along the segment, tracked outwards from the
        // centre in both directions so the branch stays coherent.
        let mid = Self::SAMPLES / 2;
        let mut logs = vec![Complex64::new(0.0, 0.0); Self::SAMPLES];
        let v_mid = eval(ts[mid])?;
        logs[mid] = v_mid.ln();
        let mut prev = v_mid;
        for j in (mid + 1)..Self::SAMPLES {
            let v = eval(ts[j])?;
            let ratio = v / prev;
            if ratio.arg().abs() > 2.5 {
                return None; // step too coarse to certify the branch here
            }
            logs[j] = logs[j - 1] + ratio.ln();
            prev = v;
        }
        prev = v_mid;
        for j in (0..mid).rev() {
            let v = eval(ts[j])?;
            let ratio = v / prev;
            if ratio.arg().abs() > 2.5 {
                return None;
            }
            logs[j] = logs[j + 1] + ratio.ln();
            prev = v;
        }
        let window: Vec<f64> = ts
            .iter()
            .map(|&t| 0.5 * (1.0 + (std::f64::consts::PI * t / Self::HALF_LENGTH).cos()))
            .collect();
        let weight: f64 = window.iter().sum();
        Some(SegmentLogs {
            ts,
            logs,
            window,
            weight,
        })
    }

    /// Starting angle for one prime from the windowed Fourier average at
    /// frequency `ln p`.
    fn angle_for(&self, p: u64) -> f64 {
        let ln_p = (p as f64).ln();
        let mut coeff = Complex64::new(0.0, 0.0);
        for j in 0..self.ts.len() {
            coeff += self.window[j] * self.logs[j] * Complex64::from_polar(1.0, ln_p * self.ts[j]);
        }
        coeff /= self.weight;
        if coeff.norm() < 1e-12 {
            0.0
        } else {
            (-coeff.arg() / std::f64::consts::TAU).rem_euclid(1.0)
        }
    }
}

fn check_nonvanishing(f: &TargetFunction, disc: &Disc, cfg: &EvalConfig) -> Result<()> {
    const VANISH: f64 = 1e-8;
    let center = f.eval_with(disc.center(), cfg)?;
    if center.norm() < VANISH {
        return Err(Error::ZeroTarget(disc.center(), center.norm()));
    }
    for ring in 1..=8 {
        let r = disc.radius() * ring as f64 / 8.0;
        for k in 0..24 {
            let s = disc.center()
                + Complex64::from_polar(r, std::f64::consts::TAU * k as f64 / 24.0);
            let v = f.eval_with(s, cfg)?;
            if v.norm() < VANISH {
                return Err(Error::ZeroTarget(s, v.norm()));
            }
        }
    }
    Ok(())
}

/// Descent state: target boundary values and cached prime powers.
struct Fitter<'a> {
    g: &'a [Complex64],
    samples: &'a [Complex64],
    /// `p^(-s_j)` per prime in use, keyed by prime.
    pow_cache: std::collections::HashMap<u64, Vec<Complex64>>,
}

impl<'a> Fitter<'a> {
    fn new(g: &'a [Complex64], samples: &'a [Complex64]) -> Self {
        Fitter {
            g,
            samples,
            pow_cache: std::collections::HashMap::new(),
        }
    }

    fn powers(&mut self, p: u64) -> Vec<Complex64> {
        if let Some(v) = self.pow_cache.get(&p) {
            return v.clone();
        }
        let ln_p = (p as f64).ln();
        let v: Vec<Complex64> = self
            .samples
            .iter()
            .map(|&s| Complex64::from_polar((-s.re * ln_p).exp(), -s.im * ln_p))
            .collect();
        self.pow_cache.insert(p, v.clone());
        v
    }

    /// First-order initialiser: solve the boundary least-squares problem
    /// `residual ~ sum_p x_p p^(-s)` for unconstrained complex coefficients
    /// and read each starting angle off `arg(x_p)`. A plain boundary
    /// average will not do: by the mean-value property the cross-prime
    /// terms survive circular averaging at full strength.
    fn ls_init(&mut self, primes: &[u64], fixed: &[f64]) -> Vec<f64> {
        let n = self.g.len();
        let m = primes.len();
        let k = fixed.len(); // primes[..k] already have angles
        if m == k {
            return fixed.to_vec();
        }
        let pows: Vec<Vec<Complex64>> = primes.iter().map(|&q| self.powers(q)).collect();
        let residual: Vec<Complex64> = (0..n)
            .map(|j| {
                let mut r = self.g[j];
                for idx in 0..k {
                    r += twisted_factor_cached(pows[idx][j], fixed[idx]).ln();
                }
                r
            })
            .collect();
        // Normal equations over the free primes.
        let free = m - k;
        let mut gram = vec![vec![Complex64::new(0.0, 0.0); free]; free];
        let mut rhs = vec![Complex64::new(0.0, 0.0); free];
        for a in 0..free {
            for b in 0..free {
                gram[a][b] = (0..n)
                    .map(|j| pows[k + a][j].conj() * pows[k + b][j])
                    .sum();
            }
            rhs[a] = (0..n).map(|j| pows[k + a][j].conj() * residual[j]).sum();
        }
        let coeffs = solve_complex(&mut gram, &mut rhs);
        let mut out = fixed.to_vec();
        for x in coeffs {
            if x.norm() < 1e-14 {
                out.push(0.0);
            } else {
                out.push((-x.arg() / std::f64::consts::TAU).rem_euclid(1.0));
            }
        }
        out
    }

    /// Cyclic coordinate descent; returns the best sampled sup reached.
    ///
    /// Two phases: the mean-square objective first (smooth, pulls every
    /// angle into the right basin), then the sup objective for polishing.
    /// Pure sup-norm descent tends to lock onto whichever boundary sample
    /// currently dominates and stalls far from the optimum.
    fn descend(
        &mut self,
        primes: &[u64],
        thetas: &mut [f64],
        eps: f64,
        sweep_budget: usize,
        sweeps_used: &mut usize,
    ) -> f64 {
        let n = self.g.len();
        let m = primes.len();
        if m == 0 {
            return self.g.iter().map(|v| v.norm()).fold(0.0, f64::max);
        }
        let pows: Vec<Vec<Complex64>> = primes.iter().map(|&p| self.powers(p)).collect();
        let term = |idx: usize, theta: f64, j: usize| twisted_factor_cached(pows[idx][j], theta).ln();

        let sup_of = |thetas: &[f64]| -> f64 {
            (0..n)
                .map(|j| {
                    let mut v = self.g[j];
                    for idx in 0..m {
                        v += term(idx, thetas[idx], j);
                    }
                    v.norm()
                })
                .fold(0.0, f64::max)
        };

        let mut err = f64::INFINITY;
        for phase in [Phase::MeanSquare, Phase::Sup] {
            // A few mean-square sweeps suffice; Gauss-Newton below does the
            // actual convergence work in that phase.
            let phase_cap = match phase {
                Phase::MeanSquare => 8usize,
                Phase::Sup => usize::MAX,
            };
            let mut phase_sweeps = 0usize;
            let mut prev = f64::INFINITY;
            while *sweeps_used < sweep_budget && phase_sweeps < phase_cap {
                *sweeps_used += 1;
                phase_sweeps += 1;
                for idx in 0..m {
                    let base: Vec<Complex64> = (0..n)
                        .map(|j| {
                            let mut b = self.g[j];
                            for q_idx in 0..m {
                                if q_idx != idx {
                                    b += term(q_idx, thetas[q_idx], j);
                                }
                            }
                            b
                        })
                        .collect();
                    let objective = |theta: f64| -> f64 {
                        match phase {
                            Phase::MeanSquare => {
                                (0..n)
                                    .map(|j| (base[j] + term(idx, theta, j)).norm_sqr())
                                    .sum::<f64>()
                                    / n as f64
                            }
                            Phase::Sup => (0..n)
                                .map(|j| (base[j] + term(idx, theta, j)).norm())
                                .fold(0.0, f64::max),
                        }
                    };
                    thetas[idx] = minimize_circular(&objective, thetas[idx]);
                }
                err = sup_of(thetas);
                if err <= eps * 0.9 {
                    return err;
                }
                if prev - err < 1e-15 + 1e-9 * err {
                    break; // this phase has stalled
                }
                prev = err;
            }
            if phase == Phase::MeanSquare {
                // Coordinate steps crawl here: on a desk-scale disc the
                // per-angle tangent directions are nearly parallel, so the
                // quadratic basin is badly conditioned. Damped Gauss-Newton
                // handles that and converges in a handful of iterations.
                self.gauss_newton(&pows, thetas);
                err = sup_of(thetas);
                if err <= eps * 0.9 {
                    return err;
                }
            }
        }
        err
    }

    /// Levenberg-damped Gauss-Newton on the mean-square boundary residual,
    /// over the real angle vector.
    fn gauss_newton(&self, pows: &[Vec<Complex64>], thetas: &mut [f64]) {
        let n = self.g.len();
        let m = thetas.len();
        let residual_l2 = |th: &[f64]| -> f64 {
            (0..n)
                .map(|j| {
                    let mut v = self.g[j];
                    for idx in 0..m {
                        v += twisted_factor_cached(pows[idx][j], th[idx]).ln();
                    }
                    v.norm_sqr()
                })
                .sum::<f64>()
        };
        let mut lambda = 1e-6f64;
        let mut current = residual_l2(thetas);
        for _ in 0..40 {
            // Residual R_j = g_j - sum_p t_p and Jacobian d t_p / d theta_p
            // = -2 pi i z / (1 - z) with z = e(-theta) p^(-s).
            let mut jac = vec![vec![Complex64::new(0.0, 0.0); m]; n];
            let mut res = vec![Complex64::new(0.0, 0.0); n];
            for j in 0..n {
                let mut v = self.g[j];
                for idx in 0..m {
                    let e = Complex64::from_polar(1.0, -std::f64::consts::TAU * thetas[idx]);
                    let z = e * pows[idx][j];
                    let one_minus = Complex64::new(1.0, 0.0) - z;
                    v -= -one_minus.ln();
                    jac[j][idx] =
                        Complex64::new(0.0, -std::f64::consts::TAU) * z / one_minus;
                }
                res[j] = v;
            }
            // Real normal equations: Re(J^H J) + lambda I, Re(J^H R).
            let mut a = vec![vec![Complex64::new(0.0, 0.0); m]; m];
            let mut b = vec![Complex64::new(0.0, 0.0); m];
            for p in 0..m {
                for q in 0..m {
                    let mut acc = 0.0;
                    for j in 0..n {
                        acc += (jac[j][p].conj() * jac[j][q]).re;
                    }
                    a[p][q] = Complex64::new(acc, 0.0);
                }
                let mut acc = 0.0;
                for j in 0..n {
                    acc += (jac[j][p].conj() * res[j]).re;
                }
                b[p] = Complex64::new(acc, 0.0);
            }
            let mut improved = false;
            for _try in 0..8 {
                let mut a_damped = a.clone();
                for (p, row) in a_damped.iter_mut().enumerate() {
                    let diag = row[p].re;
                    row[p] += Complex64::new(lambda * (1.0 + diag), 0.0);
                }
                let mut rhs = b.clone();
                let delta = solve_complex(&mut a_damped, &mut rhs);
                let trial: Vec<f64> = thetas
                    .iter()
                    .zip(&delta)
                    .map(|(&t, d)| (t + d.re).rem_euclid(1.0))
                    .collect();
                let value = residual_l2(&trial);
                if value < current {
                    thetas.copy_from_slice(&trial);
                    current = value;
                    lambda = (lambda / 3.0).max(1e-12);
                    improved = true;
                    break;
                }
                lambda *= 8.0;
            }
            if !improved || current < 1e-28 {
                break;
            }
        }
    }
}

#[derive(Copy, Clone, PartialEq)]
enum Phase {
    MeanSquare,
    Sup,
}

/// In-place Gaussian elimination with partial pivoting; returns x solving
/// `A x = b`. Singular pivots are replaced by a tiny value (the caller only
/// needs arguments of the solution, and the system is a Gram matrix).
fn solve_complex(a: &mut [Vec<Complex64>], b: &mut [Complex64]) -> Vec<Complex64> {
    let n = b.len();
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&r1, &r2| a[r1][col].norm().total_cmp(&a[r2][col].norm()))
            .unwrap();
        a.swap(col, pivot_row);
        b.swap(col, pivot_row);
        let pivot = if a[col][col].norm() < 1e-300 {
            Complex64::new(1e-300, 0.0)
        } else {
            a[col][col]
        };
        for row in (col + 1)..n {
            let factor = a[row][col] / pivot;
            for k in col..n {
                let v = a[col][k];
                a[row][k] -= factor * v;
            }
            let bv = b[col];
            b[row] -= factor * bv;
        }
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for col in (0..n).rev() {
        let mut acc = b[col];
        for k in (col + 1)..n {
            acc -= a[col][k] * x[k];
        }
        let pivot = if a[col][col].norm() < 1e-300 {
            Complex64::new(1e-300, 0.0)
        } else {
            a[col][col]
        };
        x[col] = acc / pivot;
    }
    x
}

#[inline]
fn twisted_factor_cached(p_pow: Complex64, theta: f64) -> Complex64 {
    let e = Complex64::from_polar(1.0, -std::f64::consts::TAU * theta);
    Complex64::new(1.0, 0.0) - e * p_pow
}

/// Minimum of a smooth periodic objective on `[0,1)`: coarse grid (plus the
/// current point) then golden-section refinement around the best cell.
fn minimize_circular(objective: &dyn Fn(f64) -> f64, current: f64) -> f64 {
    let mut best_theta = current.rem_euclid(1.0);
    let mut best_val = objective(best_theta);
    for k in 0..LINE_SEARCH_GRID {
        let theta = k as f64 / LINE_SEARCH_GRID as f64;
        let v = objective(theta);
        if v < best_val {
            best_val = v;
            best_theta = theta;
        }
    }
    let width = 1.0 / LINE_SEARCH_GRID as f64;
    let (mut lo, mut hi) = (best_theta - width, best_theta + width);
    // Golden-section; 40 iterations shrink the bracket below 1e-10.
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = objective(x1.rem_euclid(1.0));
    let mut f2 = objective(x2.rem_euclid(1.0));
    for _ in 0..40 {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = objective(x1.rem_euclid(1.0));
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = objective(x2.rem_euclid(1.0));
        }
    }
    let refined = (0.5 * (lo + hi)).rem_euclid(1.0);
    if objective(refined) <= best_val {
        refined
    } else {
        best_theta.rem_euclid(1.0)
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

pub(crate) fn primes_upto(y: f64) -> Vec<u64> {
    if y < 2.0 {
        return Vec::new();
    }
    (2..=(y.floor() as u64)).filter(|&n| is_prime(n)).collect()
}

pub(crate) fn next_prime(after: u64) -> u64 {
    let mut n = after + 1;
    while !is_prime(n) {
        n += 1;
    }
    n
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_target;

    fn disc_075() -> Disc {
        Disc::new(Complex64::new(0.75, 0.0), 0.1).unwrap()
    }

    #[test]
    fn disc_must_sit_in_strip() {
        assert!(Disc::new(Complex64::new(0.75, 0.0), 0.3).is_err());
        assert!(Disc::new(Complex64::new(0.55, 0.0), 0.1).is_err());
        assert!(Disc::new(Complex64::new(0.75, 0.0), 0.2).is_ok());
    }

    #[test]
    fn twisted_product_hand_values() {
        // M = {2}, theta = 0, s = 2: -log(1 - 1/4) = log(4/3).
        let a = AngleAssignment::new(vec![(2, 0.0)], 2.0).unwrap();
        let v = twisted_product(&a, Complex64::new(2.0, 0.0));
        assert!((v.re - (4.0f64 / 3.0).ln()).abs() < 1e-15 && v.im.abs() < 1e-15);
        // theta = 1/2: e(-1/2) = -1, so -log(1 + 1/4).
        let b = AngleAssignment::new(vec![(2, 0.5)], 2.0).unwrap();
        let w = twisted_product(&b, Complex64::new(2.0, 0.0));
        assert!((w.re + (5.0f64 / 4.0).ln()).abs() < 1e-14 && w.im.abs() < 1e-14);
        // Empty product.
        assert_eq!(
            twisted_product(&AngleAssignment::empty(), Complex64::new(0.8, 0.0)),
            Complex64::new(0.0, 0.0)
        );
    }

    #[test]
    fn sup_error_identical_and_constant() {
        let d = disc_075();
        let assign = AngleAssignment::empty();
        let zeros = vec![Complex64::new(0.0, 0.0); 32];
        assert_eq!(sup_error(&zeros, &assign, &d).total(), 0.0);
        let c = Complex64::new(0.3, -0.2);
        let consts = vec![c; 32];
        let e = sup_error(&consts, &assign, &d);
        assert!((e.sampled - c.norm()).abs() < 1e-15);
        assert_eq!(e.correction, 0.0);
    }

    #[test]
    fn sup_error_refinement_self_check() {
        // Doubling the sample count must not move the sup by more than the
        // reported correction.
        let d = disc_075();
        let assign = AngleAssignment::new(vec![(2, 0.3), (3, 0.7)], 3.0).unwrap();
        let f = parse_target("1").unwrap();
        let cfg = EvalConfig::default();
        let g32 = log_on_boundary(&f, &d, 32, &cfg).unwrap();
        let g64 = log_on_boundary(&f, &d, 64, &cfg).unwrap();
        let e32 = sup_error(&g32, &assign, &d);
        let e64 = sup_error(&g64, &assign, &d);
        assert!(
            (e64.sampled - e32.sampled).abs() <= e32.correction + 1e-12,
            "{e32:?} vs {e64:?}"
        );
    }

    #[test]
    fn fit_constant_one_empty_floor() {
        let d = disc_075();
        let f = parse_target("1").unwrap();
        let res = fit_angles(&f, &d, 0.1, 1.0, &FitBudget::default(), 1).unwrap();
        assert!(res.converged);
        assert!(res.assign.is_empty());
        assert!(res.sup_error.total() == 0.0);
    }

    #[test]
    fn fit_rejects_vanishing_target() {
        let d = disc_075();
        // s - 0.75 vanishes at the disc centre.
        let f = parse_target("s - 0.75").unwrap();
        let res = fit_angles(&f, &d, 0.1, 2.0, &FitBudget::default(), 1);
        assert!(matches!(res, Err(Error::ZeroTarget(..))), "{res:?}");
    }

    #[test]
    fn fit_round_trip_two_primes() {
        let d = disc_075();
        let f = parse_target(
            "(1 - exp(-2*pi*i*0.30)*2^(-s))^(-1) * (1 - exp(-2*pi*i*0.70)*3^(-s))^(-1)",
        )
        .unwrap();
        let res = fit_angles(&f, &d, 1e-7, 3.0, &FitBudget::default(), 42).unwrap();
        assert!(res.converged, "sup = {:?}", res.sup_error);
        assert!(res.sup_error.total() < 1e-6);
        let t2 = res.assign.theta(2).unwrap();
        let t3 = res.assign.theta(3).unwrap();
        assert!((t2 - 0.30).abs() < 1e-4, "theta_2 = {t2}");
        assert!((t3 - 0.70).abs() < 1e-4, "theta_3 = {t3}");
    }

    #[test]
    fn fit_smooth_target_converges() {
        let d = Disc::new(Complex64::new(0.75, 0.0), 0.05).unwrap();
        let f = parse_target("exp(0.1*(s-0.75))").unwrap();
        let res = fit_angles(&f, &d, 0.05, 2.0, &FitBudget::default(), 7).unwrap();
        assert!(res.converged, "sup = {:?}", res.sup_error);
        assert!(!res.assign.is_empty());
    }

    #[test]
    fn prime_helpers() {
        assert!(is_prime(2) && is_prime(97) && !is_prime(1) && !is_prime(91));
        assert_eq!(primes_upto(11.0), vec![2, 3, 5, 7, 11]);
        assert_eq!(next_prime(7), 11);
    }
}
