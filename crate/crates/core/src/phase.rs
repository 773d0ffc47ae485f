//! Split-precision reduction of prime phases `tau * ln p mod 2*pi`.
//!
//! Naive double precision loses every significant digit of the fractional
//! phase once `tau * ln p` exceeds ~1e16; the experiments here run at bases
//! up to 1e12, where the product reaches ~3e13. Phases are therefore reduced
//! in double-double arithmetic: `ln p / (2*pi)` is carried to ~1e-32
//! relative accuracy and the multiplication by the (exactly represented)
//! integer base is error-free, which leaves the fractional part accurate to
//! well below 1e-12.

use crate::dd::{self, two_prod, Dd};

/// A shift `tau = base + offset` with the integer base kept exact.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct TallShift {
    pub base: u64,
    pub offset: f64,
}

impl TallShift {
    pub fn new(base: u64, offset: f64) -> TallShift {
        TallShift { base, offset }
    }

    /// The shift value as a plain double (lossy for tall bases).
    pub fn approx(self) -> f64 {
        self.base as f64 + self.offset
    }
}

/// Per-prime constants `alpha_p = ln p / (2*pi)` at double-double accuracy.
#[derive(Clone, Debug)]
pub struct PhaseTable {
    primes: Vec<u64>,
    alpha: Vec<Dd>,
    ln_p: Vec<f64>,
}

impl PhaseTable {
    pub fn new(primes: &[u64]) -> PhaseTable {
        let alpha: Vec<Dd> = primes
            .iter()
            .map(|&p| dd::ln_u64(p).div(Dd::TWO_PI))
            .collect();
        let ln_p = primes.iter().map(|&p| (p as f64).ln()).collect();
        PhaseTable {
            primes: primes.to_vec(),
            alpha,
            ln_p,
        }
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn ln_p(&self, idx: usize) -> f64 {
        self.ln_p[idx]
    }

    pub fn alpha(&self, idx: usize) -> Dd {
        self.alpha[idx]
    }

    /// `frac(tau * ln p / 2 pi)` for the prime at `idx`.
    pub fn phase(&self, idx: usize, shift: TallShift) -> f64 {
        frac_mul_shift(self.alpha[idx], shift).to_f64()
    }

    /// Base phases `frac(base * alpha_p)` reusable across offsets.
    pub fn base_phases(&self, base: u64) -> Vec<Dd> {
        self.alpha.iter().map(|&a| frac_mul_u64(a, base)).collect()
    }

    /// Phase from a precomputed base phase and an offset `u`.
    pub fn phase_with_base(&self, idx: usize, base_phase: Dd, offset: f64) -> f64 {
        base_phase.add(mul_f64_dd(offset, self.alpha[idx])).fract().to_f64()
    }
}

/// `x * a` for f64 `x` and double-double `a`, exact leading product.
#[inline]
fn mul_f64_dd(x: f64, a: Dd) -> Dd {
    let (p, e) = two_prod(x, a.hi);
    Dd::new(p, e + x * a.lo)
}

/// `frac(n * a)` with the integer multiplication performed exactly.
pub fn frac_mul_u64(a: Dd, n: u64) -> Dd {
    // n < 2^53 is exact as f64; two_prod keeps the full product.
    mul_f64_dd(n as f64, a).fract()
}

/// `frac((base + offset) * a)` in split precision.
pub fn frac_mul_shift(a: Dd, shift: TallShift) -> Dd {
    let base_part = frac_mul_u64(a, shift.base);
    base_part.add(mul_f64_dd(shift.offset, a)).fract()
}

/// Distance from `x` to the nearest integer.
#[inline]
pub fn dist_to_nearest_int(x: f64) -> f64 {
    (x - x.round()).abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phase_of_small_product() {
        // tau = 2*pi / ln 2 makes tau * ln 2 / 2pi = 1 exactly.
        let table = PhaseTable::new(&[2]);
        let tau = std::f64::consts::TAU / 2f64.ln();
        let phase = table.phase(0, TallShift::new(0, tau));
        assert!(dist_to_nearest_int(phase) < 1e-13, "phase = {phase}");
    }

    #[test]
    fn base_plus_offset_matches_direct() {
        let table = PhaseTable::new(&[2, 3, 97]);
        let base = 123_456_789_012u64;
        let bps = table.base_phases(base);
        for idx in 0..table.len() {
            for &u in &[0.0, 0.125, 17.75, 9999.5] {
                let direct = table.phase(idx, TallShift::new(base, u));
                let via_base = table.phase_with_base(idx, bps[idx], u);
                let d = dist_to_nearest_int(direct - via_base);
                assert!(d < 1e-15, "idx {idx} u {u}: {direct} vs {via_base}");
            }
        }
    }

    #[test]
    fn tall_base_keeps_digits() {
        // 50-digit reference values; naive f64 is off by ~1e-5 here.
        let cases: [(u64, u64, f64); 4] = [
            (1_000_000_000_000, 2, 0.325796698228216059),
            (1_000_000_000_000, 999_983, 0.25251047480695915133),
            (123_456_789_012, 97, 0.51176354850778251996),
            (999_999_999_999, 3, 0.85503942245261117037),
        ];
        for (base, p, want) in cases {
            let table = PhaseTable::new(&[p]);
            let got = table.phase(0, TallShift::new(base, 0.0));
            assert!(
                dist_to_nearest_int(got - want) < 1e-12,
                "frac({base} * ln {p} / 2pi) = {got}, want {want}"
            );
        }
    }
}
