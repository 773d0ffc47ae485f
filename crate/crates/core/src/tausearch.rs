//! The Diophantine hit set `C(delta, M, T)`: shifts in a window whose prime
//! phases simultaneously approximate a fitted angle assignment, plus an
//! empirical equidistribution probe and a lattice-accelerated first-hit
//! search.
//!
//! The hit set is a finite union of intervals (each per-prime condition is
//! periodic in the shift with period `2 pi / ln p`), so the scan constructs
//! it exactly by intersecting the per-prime interval families instead of
//! stepping a grid.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::fit::AngleAssignment;
use crate::lattice::{babai_nearest_plane, lll_reduce};
use crate::phase::{dist_to_nearest_int, frac_mul_shift, frac_mul_u64, PhaseTable, TallShift};

/// Largest `|M|` the exact interval-intersection scan accepts.
pub const SCAN_CAPACITY: usize = 12;
/// Largest `|M|` the lattice search accepts.
pub const LATTICE_CAPACITY: usize = 8;

/// A window `[T, T + H]`, optionally derived from `H = (ln T)^B`.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct SearchWindow {
    base: u64,
    h: f64,
    exponent_b: Option<f64>,
}

impl SearchWindow {
    pub fn with_h(base: u64, h: f64) -> Result<SearchWindow> {
        if !(h > 0.0) {
            return Err(Error::BadWindow(format!("H must be positive, got {h}")));
        }
        if h > base as f64 {
            return Err(Error::BadWindow(format!(
                "H = {h} exceeds the window base T = {base}"
            )));
        }
        Ok(SearchWindow {
            base,
            h,
            exponent_b: None,
        })
    }

    /// Window sized by the rule `H = (ln T)^B`.
    pub fn with_exponent(base: u64, b: f64) -> Result<SearchWindow> {
        if base < 3 {
            return Err(Error::BadWindow("base too small for (ln T)^B sizing".into()));
        }
        let h = (base as f64).ln().powf(b);
        let mut w = SearchWindow::with_h(base, h)?;
        w.exponent_b = Some(b);
        Ok(w)
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn exponent_b(&self) -> Option<f64> {
        self.exponent_b
    }

    pub fn shift_at(&self, offset: f64) -> TallShift {
        TallShift::new(self.base, offset)
    }
}

/// Disjoint ascending offset intervals within `[0, H]`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct HitSet {
    intervals: Vec<(f64, f64)>,
    measure: f64,
}

impl HitSet {
    pub fn from_intervals(mut intervals: Vec<(f64, f64)>) -> HitSet {
        intervals.retain(|&(a, b)| b > a);
        intervals.sort_unstable_by(|x, y| x.0.total_cmp(&y.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(intervals.len());
        for (a, b) in intervals {
            match merged.last_mut() {
                Some(last) if a <= last.1 => last.1 = last.1.max(b),
                _ => merged.push((a, b)),
            }
        }
        let measure = merged.iter().map(|&(a, b)| b - a).sum();
        HitSet {
            intervals: merged,
            measure,
        }
    }

    pub fn empty() -> HitSet {
        HitSet::default()
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn measure(&self) -> f64 {
        self.measure
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn contains(&self, offset: f64) -> bool {
        let idx = self.intervals.partition_point(|&(a, _)| a <= offset);
        idx > 0 && offset <= self.intervals[idx - 1].1
    }

    pub fn intersect(&self, other: &HitSet) -> HitSet {
        let mut out = Vec::new();
        let (mut i, mut j) = (0usize, 0usize);
        while i < self.intervals.len() && j < other.intervals.len() {
            let (a1, b1) = self.intervals[i];
            let (a2, b2) = other.intervals[j];
            let lo = a1.max(a2);
            let hi = b1.min(b2);
            if hi > lo {
                out.push((lo, hi));
            }
            if b1 <= b2 {
                i += 1;
            } else {
                j += 1;
            }
        }
        HitSet::from_intervals(out)
    }
}

/// Membership test: every prime phase within `delta/2` of its angle,
/// in nearest-integer distance.
pub fn c_delta_contains(tau: TallShift, assign: &AngleAssignment, delta: f64) -> bool {
    let primes: Vec<u64> = assign.entries().iter().map(|&(p, _)| p).collect();
    let phases = PhaseTable::new(&primes);
    contains_with(&phases, assign, tau, delta)
}

fn contains_with(phases: &PhaseTable, assign: &AngleAssignment, tau: TallShift, delta: f64) -> bool {
    assign.entries().iter().enumerate().all(|(idx, &(_, theta))| {
        dist_to_nearest_int(theta - phases.phase(idx, tau)) < delta / 2.0
    })
}

/// Exact construction of `C(delta, M, T)` as a union of offset intervals.
pub fn scan_c_delta(
    window: &SearchWindow,
    assign: &AngleAssignment,
    delta: f64,
) -> Result<HitSet> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::BadParameter(format!(
            "delta must lie in (0,1), got {delta}"
        )));
    }
    if assign.len() > SCAN_CAPACITY {
        return Err(Error::TooManyPrimes {
            m: assign.len(),
            cap: SCAN_CAPACITY,
        });
    }
    let h = window.h();
    if assign.is_empty() {
        return Ok(HitSet::from_intervals(vec![(0.0, h)]));
    }
    let primes: Vec<u64> = assign.entries().iter().map(|&(p, _)| p).collect();
    let phases = PhaseTable::new(&primes);

    let mut current = HitSet::from_intervals(vec![(0.0, h)]);
    for (idx, &(_, theta)) in assign.entries().iter().enumerate() {
        let family = prime_interval_family(&phases, idx, theta, window.base(), h, delta);
        current = current.intersect(&HitSet::from_intervals(family));
        if current.is_empty() {
            break;
        }
    }
    Ok(current)
}

/// Offsets `u` in `[0, H]` with `dist(theta - frac((T+u) alpha)) < delta/2`:
/// a periodic family with period `1/alpha = 2 pi / ln p` and sub-interval
/// length `delta/alpha`.
fn prime_interval_family(
    phases: &PhaseTable,
    idx: usize,
    theta: f64,
    base: u64,
    h: f64,
    delta: f64,
) -> Vec<(f64, f64)> {
    let alpha = phases.alpha(idx).to_f64();
    let phi0 = frac_mul_u64(phases.alpha(idx), base).to_f64();
    let c = theta - phi0;
    let half = delta / 2.0;
    let k_min = (-c - half).floor() as i64 - 1;
    let k_max = (h * alpha - c + half).ceil() as i64 + 1;
    let mut out = Vec::with_capacity((k_max - k_min + 1).max(0) as usize);
    for k in k_min..=k_max {
        let lo = ((c - half + k as f64) / alpha).max(0.0);
        let hi = ((c + half + k as f64) / alpha).min(h);
        if hi > lo {
            out.push((lo, hi));
        }
    }
    out
}

/// Empirical torus-box frequency for the flow `tau * (alpha_1..alpha_n)`.
#[derive(Copy, Clone, Debug)]
pub struct EquidistributionResult {
    pub empirical: f64,
    pub volume: f64,
}

/// Fraction of sampled shifts whose phase vector falls in the box, against
/// the box volume. Sampling is deterministic (fixed-seed uniform draws).
pub fn equidistribution_check(
    alphas: &[f64],
    cube_box: &[(f64, f64)],
    window: &SearchWindow,
    n_samples: usize,
) -> Result<EquidistributionResult> {
    if alphas.len() != cube_box.len() {
        return Err(Error::BadParameter(
            "alphas and box must have equal dimension".into(),
        ));
    }
    let mut volume = 1.0;
    for &(a, b) in cube_box {
        if !(0.0..=1.0).contains(&a) || !(0.0..=1.0).contains(&b) || b < a {
            return Err(Error::BadParameter(format!(
                "box side [{a}, {b}] is not inside the unit interval"
            )));
        }
        volume *= b - a;
    }
    let alphas_dd: Vec<Dd> = alphas.iter().map(|&a| Dd::from_f64(a)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x45_51_44_53);
    let mut inside = 0usize;
    for _ in 0..n_samples {
        let offset = rng.gen::<f64>() * window.h();
        let shift = window.shift_at(offset);
        let ok = alphas_dd.iter().zip(cube_box).all(|(&alpha, &(a, b))| {
            let phase = frac_mul_shift(alpha, shift).to_f64();
            phase >= a && phase < b
        });
        if ok {
            inside += 1;
        }
    }
    Ok(EquidistributionResult {
        empirical: inside as f64 / n_samples.max(1) as f64,
        volume,
    })
}

/// Lattice-accelerated search for one member of `C(delta, M, T)`.
///
/// The inhomogeneous simultaneous approximation problem is reduced to
/// closest-vector instances: one phase equation is solved for the shift,
/// turning the rest into an integer problem in the winding number `k0`,
/// which Babai's nearest plane attacks on an LLL-reduced basis (one target
/// per window segment). Every candidate is verified with the membership
/// predicate before being returned; `None` means the search failed, not
/// that the set is empty.
pub fn lattice_find_first(
    assign: &AngleAssignment,
    delta: f64,
    window: &SearchWindow,
) -> Result<Option<TallShift>> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::BadParameter(format!(
            "delta must lie in (0,1), got {delta}"
        )));
    }
    if assign.len() > LATTICE_CAPACITY {
        return Err(Error::TooManyPrimes {
            m: assign.len(),
            cap: LATTICE_CAPACITY,
        });
    }
    if assign.is_empty() {
        return Ok(Some(window.shift_at(0.0)));
    }

    let primes: Vec<u64> = assign.entries().iter().map(|&(p, _)| p).collect();
    let thetas: Vec<f64> = assign.entries().iter().map(|&(_, t)| t).collect();
    let phases = PhaseTable::new(&primes);
    let h = window.h();
    let half = delta / 2.0;

    // Reference prime: solve its phase equation for the shift offset.
    let alpha0 = phases.alpha(0).to_f64();
    let phi0 = frac_mul_u64(phases.alpha(0), window.base()).to_f64();
    let c0 = thetas[0] - phi0;
    let k_lo = (-c0).floor() as i64;
    let k_hi = (h * alpha0 - c0).ceil() as i64;

    let offset_for = |k0: f64, x: f64| (c0 + k0 + x) / alpha0;
    let verify = |offset: f64| -> Option<TallShift> {
        if !(0.0..=h).contains(&offset) {
            return None;
        }
        let shift = window.shift_at(offset);
        contains_with(&phases, assign, shift, delta).then_some(shift)
    };

    if primes.len() == 1 {
        for k0 in k_lo..=k_hi {
            if let Some(hit) = verify(offset_for(k0 as f64, 0.0)) {
                return Ok(Some(hit));
            }
        }
        return Ok(None);
    }

    // Residual data for the other primes at x = 0.
    let n = primes.len() - 1;
    let betas: Vec<f64> = (1..=n)
        .map(|i| phases.alpha(i).to_f64() / alpha0)
        .collect();
    let ds: Vec<f64> = (1..=n)
        .map(|i| {
            let phi = frac_mul_u64(phases.alpha(i), window.base()).to_f64();
            phi - thetas[i] + c0 * betas[i - 1]
        })
        .collect();

    // Lattice rows: the k0 generator plus one integer-wrap row per prime.
    let span = (k_hi - k_lo).max(1) as f64;
    let w_phase = 1.0 / half;
    let w_k = 2.0 / span;
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    let mut row0: Vec<f64> = betas.iter().map(|&b| b * w_phase).collect();
    row0.push(w_k);
    basis.push(row0);
    for j in 0..n {
        let mut row = vec![0.0; n + 1];
        row[j] = w_phase;
        basis.push(row);
    }
    lll_reduce(&mut basis, 0.99);

    const SEGMENTS: usize = 32;
    for seg in 0..SEGMENTS {
        let k_mid = k_lo as f64 + span * (seg as f64 + 0.5) / SEGMENTS as f64;
        let mut target: Vec<f64> = ds.iter().map(|&d| -d * w_phase).collect();
        target.push(k_mid * w_k);
        let coeffs = babai_nearest_plane(&basis, &target);
        // Recover k0 from the solution vector's last coordinate.
        let mut solution_k = 0.0;
        for (c, row) in coeffs.iter().zip(&basis) {
            solution_k += *c as f64 * row[n];
        }
        let k0 = (solution_k / w_k).round();
        if k0 < k_lo as f64 || k0 > k_hi as f64 {
            continue;
        }
        // Centre the worst constraint with a 1D sweep in the slack x.
        let worst = |x: f64| -> f64 {
            let mut w: f64 = x.abs() / half;
            for j in 0..n {
                w = w.max(dist_to_nearest_int(ds[j] + (k0 + x) * betas[j]) / half);
            }
            w
        };
        let mut best_x = 0.0;
        let mut best_w = worst(0.0);
        for step in 1..=16 {
            for sign in [-1.0, 1.0] {
                let x = sign * half * step as f64 / 17.0;
                let w = worst(x);
                if w < best_w {
                    best_w = w;
                    best_x = x;
                }
            }
        }
        if best_w < 1.0 {
            if let Some(hit) = verify(offset_for(k0, best_x)) {
                return Ok(Some(hit));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn window(base: u64, h: f64) -> SearchWindow {
        SearchWindow::with_h(base, h).unwrap()
    }

    #[test]
    fn window_validation() {
        assert!(SearchWindow::with_h(100, 0.0).is_err());
        assert!(SearchWindow::with_h(100, 101.0).is_err());
        let w = SearchWindow::with_exponent(1_000_000, 2.0).unwrap();
        let want = (1e6f64).ln().powi(2);
        assert!((w.h() - want).abs() < 1e-9);
    }

    #[test]
    fn hitset_merge_and_contains() {
        let hs = HitSet::from_intervals(vec![(3.0, 4.0), (1.0, 2.0), (1.5, 2.5)]);
        assert_eq!(hs.intervals(), &[(1.0, 2.5), (3.0, 4.0)]);
        assert!((hs.measure() - 2.5).abs() < 1e-15);
        assert!(hs.contains(1.7) && hs.contains(3.0) && !hs.contains(2.7));
    }

    #[test]
    fn membership_examples() {
        // Vacuous condition.
        assert!(c_delta_contains(
            TallShift::new(5, 0.5),
            &AngleAssignment::empty(),
            0.01
        ));
        // tau = 2 pi / ln 2 gives phase exactly 1 == 0 mod 1.
        let a2 = AngleAssignment::new(vec![(2, 0.0)], 2.0).unwrap();
        let tau = std::f64::consts::TAU / 2f64.ln();
        assert!(c_delta_contains(TallShift::new(0, tau), &a2, 1e-6));
        // theta = 0.5 at tau = 0 has distance 0.5.
        let a_half = AngleAssignment::new(vec![(2, 0.5)], 2.0).unwrap();
        assert!(!c_delta_contains(TallShift::new(0, 0.0), &a_half, 0.1));
    }

    #[test]
    fn scan_empty_assignment_is_whole_window() {
        let hs = scan_c_delta(&window(1000, 100.0), &AngleAssignment::empty(), 0.3).unwrap();
        assert_eq!(hs.intervals(), &[(0.0, 100.0)]);
        assert_eq!(hs.measure(), 100.0);
    }

    #[test]
    fn scan_single_prime_measure_near_delta_h() {
        let w = window(1_000_000, 100.0);
        let a = AngleAssignment::new(vec![(2, 0.37)], 2.0).unwrap();
        let hs = scan_c_delta(&w, &a, 0.5).unwrap();
        // Expected measure delta * H = 50, up to about two boundary periods.
        let period = std::f64::consts::TAU / 2f64.ln();
        assert!(
            (hs.measure() - 50.0).abs() <= 2.0 * period,
            "measure = {}",
            hs.measure()
        );
    }

    #[test]
    fn scan_agrees_with_membership_predicate() {
        let w = window(123_456, 500.0);
        let a = AngleAssignment::new(vec![(2, 0.1), (3, 0.6), (5, 0.35)], 5.0).unwrap();
        let delta = 0.45;
        let hs = scan_c_delta(&w, &a, delta).unwrap();
        let primes: Vec<u64> = a.entries().iter().map(|&(p, _)| p).collect();
        let phases = PhaseTable::new(&primes);
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let mut checked = 0;
        for _ in 0..10_000 {
            let u = rng.gen::<f64>() * w.h();
            // Skip offsets within 1e-9 of an interval endpoint.
            if hs
                .intervals()
                .iter()
                .any(|&(x, y)| (u - x).abs() < 1e-9 || (u - y).abs() < 1e-9)
            {
                continue;
            }
            let member = contains_with(&phases, &a, w.shift_at(u), delta);
            assert_eq!(member, hs.contains(u), "offset {u}");
            checked += 1;
        }
        assert!(checked > 9_000);
    }

    #[test]
    fn capacity_error_beyond_twelve_primes() {
        let primes = [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];
        let entries: Vec<(u64, f64)> = primes.iter().map(|&p| (p, 0.0)).collect();
        let a = AngleAssignment::new(entries, 0.0).unwrap();
        assert!(matches!(
            scan_c_delta(&window(10_000, 100.0), &a, 0.3),
            Err(Error::TooManyPrimes { .. })
        ));
    }

    #[test]
    fn equidistribution_full_cube() {
        let w = window(10_000, 1000.0);
        let r = equidistribution_check(
            &[2f64.ln() / std::f64::consts::TAU],
            &[(0.0, 1.0)],
            &w,
            2000,
        )
        .unwrap();
        assert_eq!(r.empirical, 1.0);
        assert_eq!(r.volume, 1.0);
    }

    #[test]
    fn equidistribution_half_interval() {
        let w = window(100_000, 100_000.0);
        let r = equidistribution_check(
            &[2f64.ln() / std::f64::consts::TAU],
            &[(0.0, 0.5)],
            &w,
            200_000,
        )
        .unwrap();
        assert!((r.empirical - 0.5).abs() < 0.01, "empirical = {}", r.empirical);
    }

    #[test]
    fn lattice_empty_assignment_returns_window_start() {
        let w = window(1000, 50.0);
        let hit = lattice_find_first(&AngleAssignment::empty(), 0.5, &w)
            .unwrap()
            .unwrap();
        assert_eq!(hit.offset, 0.0);
        assert_eq!(hit.base, 1000);
    }

    #[test]
    fn lattice_wide_delta_always_hits() {
        let w = window(50_000, 2000.0);
        let a = AngleAssignment::new(vec![(2, 0.2), (3, 0.8), (5, 0.5)], 5.0).unwrap();
        let hit = lattice_find_first(&a, 0.9, &w).unwrap();
        let shift = hit.expect("delta = 0.9 leaves most of the torus");
        assert!(c_delta_contains(shift, &a, 0.9));
    }

    #[test]
    fn lattice_cross_validates_against_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let mut found = 0;
        let mut nonempty = 0;
        for trial in 0..40 {
            let theta2 = rng.gen::<f64>();
            let theta3 = rng.gen::<f64>();
            let theta5 = rng.gen::<f64>();
            let a = AngleAssignment::new(vec![(2, theta2), (3, theta3), (5, theta5)], 5.0)
                .unwrap();
            let w = window(10_000 + trial * 137, 300.0);
            let delta = 0.35;
            let scan = scan_c_delta(&w, &a, delta).unwrap();
            if scan.is_empty() {
                continue;
            }
            nonempty += 1;
            let hit = lattice_find_first(&a, delta, &w).unwrap();
            if let Some(shift) = hit {
                assert!(c_delta_contains(shift, &a, delta));
                assert!(scan.contains(shift.offset), "offset {}", shift.offset);
                found += 1;
            }
        }
        assert!(nonempty >= 20, "too few nonempty trials: {nonempty}");
        assert!(
            found as f64 >= 0.95 * nonempty as f64,
            "lattice search found {found}/{nonempty}"
        );
    }
}
