//! Truncated Euler products and prime-power Dirichlet polynomials
//! approximating `log zeta`, evaluated with split-precision phases so that
//! shifts up to 1e12 keep twelve good digits of phase.

use num_complex::Complex64;

use crate::dd::Dd;
use crate::error::Result;
use crate::phase::{frac_mul_shift, PhaseTable, TallShift};
use crate::primes::PrimeTable;

/// Default constant for `<<`-style bound checks; the underlying estimates
/// carry no explicit constants, so checks are reported as ratios against a
/// configurable multiple.
pub const DEFAULT_BOUND_CONSTANT: f64 = 10.0;

/// Cutoff rule `Y = (log T)^A`.
#[derive(Copy, Clone, Debug)]
pub struct TruncationParams {
    pub exponent_a: f64,
}

impl TruncationParams {
    pub fn cutoff(&self, t: f64) -> f64 {
        t.ln().powf(self.exponent_a)
    }
}

/// `-sum_{p <= y} log(1 - p^(-(s + i tau)))` with principal logs.
///
/// Each factor has modulus below 1 in the half plane `Re(s) > 1/2`, so the
/// principal branch is safe termwise.
pub fn log_euler_truncated(
    s: Complex64,
    shift: TallShift,
    table: &PrimeTable,
    y: f64,
) -> Result<Complex64> {
    table.check_cutoff(y)?;
    let primes = table.primes_upto(y);
    let phases = PhaseTable::new(primes);
    Ok(log_euler_with(&phases, s, shift, y))
}

/// `sum_{p^k <= y} 1 / (k p^(k (s + i tau)))`.
pub fn log_primepower_sum(
    s: Complex64,
    shift: TallShift,
    table: &PrimeTable,
    y: f64,
) -> Result<Complex64> {
    table.check_cutoff(y)?;
    let primes = table.primes_upto(y);
    let phases = PhaseTable::new(primes);
    Ok(primepower_sum_with(&phases, table, s, shift, y))
}

/// Difference between the truncated Euler product and the prime-power sum
/// at the same cutoff, together with the `Y^(1/2-sigma)/log Y` decay model.
#[derive(Copy, Clone, Debug)]
pub struct TailDifference {
    pub value: Complex64,
    pub bound: f64,
    pub ratio: f64,
    /// `|value| <= constant * bound` for the constant used.
    pub within: bool,
}

pub fn tail_difference(
    s: Complex64,
    shift: TallShift,
    table: &PrimeTable,
    y: f64,
) -> Result<TailDifference> {
    tail_difference_with_constant(s, shift, table, y, DEFAULT_BOUND_CONSTANT)
}

pub fn tail_difference_with_constant(
    s: Complex64,
    shift: TallShift,
    table: &PrimeTable,
    y: f64,
    constant: f64,
) -> Result<TailDifference> {
    let product = log_euler_truncated(s, shift, table, y)?;
    let sum = log_primepower_sum(s, shift, table, y)?;
    let value = product - sum;
    let bound = if y >= 2.0 {
        y.powf(0.5 - s.re) / y.ln()
    } else {
        0.0
    };
    let ratio = if bound > 0.0 { value.norm() / bound } else { 0.0 };
    Ok(TailDifference {
        value,
        bound,
        ratio,
        within: if bound > 0.0 {
            value.norm() <= constant * bound
        } else {
            value.norm() == 0.0
        },
    })
}

/// The tail rearranged as an explicit double sum
/// `sum_{p <= y} sum_{k > log y / log p} 1/(k p^(k(s+i tau)))`; equals
/// `tail_difference` exactly and serves as its independent check.
pub fn tail_double_sum(
    s: Complex64,
    shift: TallShift,
    table: &PrimeTable,
    y: f64,
) -> Result<Complex64> {
    table.check_cutoff(y)?;
    let primes = table.primes_upto(y);
    let phases = PhaseTable::new(primes);
    let mut total = Complex64::new(0.0, 0.0);
    for (idx, &p) in primes.iter().enumerate() {
        let k_min = (y.ln() / (p as f64).ln()).floor() as u32 + 1;
        total += factor_log_tail(&phases, idx, s, shift, k_min);
    }
    Ok(total)
}

/// Evaluator reusing one phase table across many shifts; the stateless
/// functions above rebuild their table per call.
pub struct EulerEvaluator<'t> {
    table: &'t PrimeTable,
    phases: PhaseTable,
    y_max: f64,
}

impl<'t> EulerEvaluator<'t> {
    pub fn new(table: &'t PrimeTable, y_max: f64) -> Result<Self> {
        table.check_cutoff(y_max)?;
        let phases = PhaseTable::new(table.primes_upto(y_max));
        Ok(EulerEvaluator {
            table,
            phases,
            y_max,
        })
    }

    pub fn phases(&self) -> &PhaseTable {
        &self.phases
    }

    pub fn log_euler(&self, s: Complex64, shift: TallShift, y: f64) -> Complex64 {
        debug_assert!(y <= self.y_max);
        log_euler_with(&self.phases, s, shift, y)
    }

    pub fn log_primepower(&self, s: Complex64, shift: TallShift, y: f64) -> Complex64 {
        debug_assert!(y <= self.y_max);
        primepower_sum_with(&self.phases, self.table, s, shift, y)
    }

    /// Base phases for a window base, to be combined with offsets.
    pub fn base_phases(&self, base: u64) -> Vec<Dd> {
        self.phases.base_phases(base)
    }

    /// Product restricted to an explicit prime set (each must be in the
    /// evaluator's table).
    pub fn log_euler_over(&self, s: Complex64, shift: TallShift, primes: &[u64]) -> Complex64 {
        let mut sum = Complex64::new(0.0, 0.0);
        for &p in primes {
            let idx = self
                .phases
                .primes()
                .binary_search(&p)
                .expect("prime outside the evaluator's table");
            let tau_phase = frac_mul_shift(self.phases.alpha(idx), shift).to_f64();
            sum -= one_minus_p_term(self.phases.ln_p(idx), s, tau_phase).ln();
        }
        sum
    }

    /// Like [`Self::log_euler`] but with precomputed base phases.
    pub fn log_euler_at_offset(
        &self,
        s: Complex64,
        base_phases: &[Dd],
        offset: f64,
        y: f64,
    ) -> Complex64 {
        let mut sum = Complex64::new(0.0, 0.0);
        for idx in 0..self.phases.len() {
            let p = self.phases.primes()[idx];
            if (p as f64) > y {
                break;
            }
            let tau_phase = self.phases.phase_with_base(idx, base_phases[idx], offset);
            sum -= one_minus_p_term(self.phases.ln_p(idx), s, tau_phase).ln();
        }
        sum
    }
}

fn log_euler_with(phases: &PhaseTable, s: Complex64, shift: TallShift, y: f64) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    for idx in 0..phases.len() {
        let p = phases.primes()[idx];
        if (p as f64) > y {
            break;
        }
        let tau_phase = frac_mul_shift(phases.alpha(idx), shift).to_f64();
        sum -= one_minus_p_term(phases.ln_p(idx), s, tau_phase).ln();
    }
    sum
}

fn primepower_sum_with(
    phases: &PhaseTable,
    table: &PrimeTable,
    s: Complex64,
    shift: TallShift,
    y: f64,
) -> Complex64 {
    // Primes (k = 1) via the phase table, higher powers via k * phase.
    let mut sum = Complex64::new(0.0, 0.0);
    let mut idx_of = std::collections::HashMap::new();
    for (idx, &p) in phases.primes().iter().enumerate() {
        if (p as f64) > y {
            break;
        }
        idx_of.insert(p, idx);
    }
    for pp in table.prime_powers_upto(y) {
        let Some(&idx) = idx_of.get(&pp.p) else { continue };
        let k = pp.k as f64;
        let tau_phase = frac_mul_shift(phases.alpha(idx).mul_f64(k), shift).to_f64();
        let modulus = (-s.re * k * phases.ln_p(idx)).exp();
        let angle = -(s.im * k * phases.ln_p(idx) + std::f64::consts::TAU * tau_phase);
        sum += Complex64::from_polar(modulus / k, angle);
    }
    sum
}

/// `1 - e(-theta_tau) p^(-s)` where `theta_tau = frac(tau ln p / 2pi)`.
#[inline]
fn one_minus_p_term(ln_p: f64, s: Complex64, tau_phase: f64) -> Complex64 {
    let modulus = (-s.re * ln_p).exp();
    let angle = -(s.im * ln_p + std::f64::consts::TAU * tau_phase);
    Complex64::new(1.0, 0.0) - Complex64::from_polar(modulus, angle)
}

/// `sum_{k >= k_min} 1/(k p^(k(s + i tau)))` for one prime.
fn factor_log_tail(
    phases: &PhaseTable,
    idx: usize,
    s: Complex64,
    shift: TallShift,
    k_min: u32,
) -> Complex64 {
    let ln_p = phases.ln_p(idx);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut k = k_min;
    loop {
        let kf = k as f64;
        let modulus = (-s.re * kf * ln_p).exp();
        if modulus / kf < 1e-18 {
            break;
        }
        let tau_phase = frac_mul_shift(phases.alpha(idx).mul_f64(kf), shift).to_f64();
        let angle = -(s.im * kf * ln_p + std::f64::consts::TAU * tau_phase);
        sum += Complex64::from_polar(modulus / kf, angle);
        k += 1;
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primes::sieve_primes;

    fn origin() -> TallShift {
        TallShift::new(0, 0.0)
    }

    #[test]
    fn empty_cutoff_gives_zero() {
        let table = sieve_primes(100).unwrap();
        let s = Complex64::new(0.8, 3.0);
        assert_eq!(
            log_euler_truncated(s, origin(), &table, 1.5).unwrap(),
            Complex64::new(0.0, 0.0)
        );
        assert_eq!(
            log_primepower_sum(s, origin(), &table, 1.5).unwrap(),
            Complex64::new(0.0, 0.0)
        );
    }

    #[test]
    fn cutoff_above_table_errors() {
        let table = sieve_primes(100).unwrap();
        let s = Complex64::new(0.8, 3.0);
        assert!(log_euler_truncated(s, origin(), &table, 101.0).is_err());
    }

    #[test]
    fn primepower_sum_three_terms_by_hand() {
        // y = 4, s = 2: 2^-2 + 3^-2 + (1/2) 2^-4 = 0.3923611...
        let table = sieve_primes(10).unwrap();
        let got = log_primepower_sum(Complex64::new(2.0, 0.0), origin(), &table, 4.0).unwrap();
        let want = 0.25 + 1.0 / 9.0 + 0.03125;
        assert!((got.re - want).abs() < 1e-15 && got.im.abs() < 1e-15, "{got}");
    }

    #[test]
    fn converges_to_log_zeta_at_two() {
        let table = sieve_primes(100_000).unwrap();
        let cfg = crate::zeta::EvalConfig::default();
        let want = crate::zeta::log_zeta(Complex64::new(2.0, 0.0), &cfg).unwrap();
        let got =
            log_euler_truncated(Complex64::new(2.0, 0.0), origin(), &table, 1.0e5).unwrap();
        assert!((got - want).norm() < 1e-4, "{got} vs {want}");
    }

    #[test]
    fn tail_identity_matches_double_sum() {
        let table = sieve_primes(10_000).unwrap();
        let s = Complex64::new(0.7, 0.5);
        for &(base, offset, y) in &[
            (0u64, 0.0, 100.0),
            (1_000_000, 0.25, 1000.0),
            (123_456_789, 3.5, 50.0),
        ] {
            let shift = TallShift::new(base, offset);
            let direct = tail_difference(s, shift, &table, y).unwrap().value;
            let rearranged = tail_double_sum(s, shift, &table, y).unwrap();
            assert!(
                (direct - rearranged).norm() < 1e-12,
                "y={y}: {direct} vs {rearranged}"
            );
        }
    }

    #[test]
    fn tail_zero_below_first_prime() {
        let table = sieve_primes(10).unwrap();
        let s = Complex64::new(0.75, 1.0);
        let td = tail_difference(s, origin(), &table, 1.9).unwrap();
        assert_eq!(td.value, Complex64::new(0.0, 0.0));
        assert!(td.within);
    }

    #[test]
    fn tail_bound_holds_with_default_constant() {
        let table = sieve_primes(1000).unwrap();
        let s = Complex64::new(0.75, 0.0);
        let td = tail_difference(s, origin(), &table, 100.0).unwrap();
        assert!(td.within, "ratio = {}", td.ratio);
        let s2 = Complex64::new(0.9, 0.0);
        let td2 = tail_difference(s2, TallShift::new(1_000_000, 0.0), &table, 1000.0).unwrap();
        assert!(td2.within, "ratio = {}", td2.ratio);
    }

    #[test]
    fn evaluator_matches_stateless() {
        let table = sieve_primes(1000).unwrap();
        let eval = EulerEvaluator::new(&table, 1000.0).unwrap();
        let s = Complex64::new(0.8, 2.0);
        let shift = TallShift::new(987_654_321, 0.75);
        let a = eval.log_euler(s, shift, 500.0);
        let b = log_euler_truncated(s, shift, &table, 500.0).unwrap();
        assert!((a - b).norm() < 1e-14);
        let bp = eval.base_phases(shift.base);
        let c = eval.log_euler_at_offset(s, &bp, shift.offset, 500.0);
        assert!((a - c).norm() < 1e-12, "{a} vs {c}");
    }
}
