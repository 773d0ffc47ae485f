//! Split-precision phase reduction checked against an independent
//! 256-fractional-bit fixed-point oracle (num-bigint arithmetic, logs by
//! atanh series, pi by Machin's formula). The oracle shares no code with
//! the double-double path it certifies.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use voronin_core::phase::{dist_to_nearest_int, PhaseTable, TallShift};

const FRAC_BITS: u32 = 256;

fn fx_one() -> BigInt {
    BigInt::from(1) << FRAC_BITS
}

fn fx_from_u64(n: u64) -> BigInt {
    BigInt::from(n) << FRAC_BITS
}

fn fx_mul(a: &BigInt, b: &BigInt) -> BigInt {
    (a * b) >> FRAC_BITS
}

fn fx_div(a: &BigInt, b: &BigInt) -> BigInt {
    (a << FRAC_BITS) / b
}

/// atan(1/x) by the alternating inverse-power series.
fn fx_atan_inv(x: u64) -> BigInt {
    let xx = BigInt::from(x) * BigInt::from(x);
    let mut power = fx_one() / BigInt::from(x);
    let mut acc = BigInt::zero();
    let mut k = 0u32;
    loop {
        let term = &power / BigInt::from(2 * k + 1);
        if term.is_zero() {
            break;
        }
        if k % 2 == 0 {
            acc += &term;
        } else {
            acc -= &term;
        }
        power = &power / &xx;
        k += 1;
    }
    acc
}

fn fx_pi() -> BigInt {
    16 * fx_atan_inv(5) - 4 * fx_atan_inv(239)
}

/// atanh(z) for |z| < 1/2 by the odd-power series.
fn fx_atanh(z: &BigInt) -> BigInt {
    let zz = fx_mul(z, z);
    let mut power = z.clone();
    let mut acc = BigInt::zero();
    let mut k = 0u32;
    loop {
        let term = &power / BigInt::from(2 * k + 1);
        if term.is_zero() {
            break;
        }
        acc += &term;
        power = fx_mul(&power, &zz);
        k += 1;
    }
    acc
}

fn fx_ln2() -> BigInt {
    // ln 2 = 2 atanh(1/3)
    2 * fx_atanh(&(fx_one() / BigInt::from(3)))
}

/// ln(n) via n = m * 2^e with m in [0.75, 1.5).
fn fx_ln(n: u64) -> BigInt {
    assert!(n >= 1);
    if n == 1 {
        return BigInt::zero();
    }
    let e = (n as f64).log2().round() as i64;
    // m = n * 2^-e in fixed point, exactly.
    let m = if e >= 0 {
        fx_from_u64(n) >> (e as u32)
    } else {
        fx_from_u64(n) << ((-e) as u32)
    };
    let z = fx_div(&(&m - fx_one()), &(&m + fx_one()));
    2 * fx_atanh(&z) + e * fx_ln2()
}

/// frac(T * ln p / (2 pi)) to f64, through the fixed-point oracle.
fn oracle_phase(t: u64, p: u64) -> f64 {
    let product = BigInt::from(t) * fx_ln(p); // still scale 2^FRAC_BITS
    let two_pi = 2 * fx_pi();
    let ratio = fx_div(&product, &two_pi);
    let frac = &ratio - ((&ratio >> FRAC_BITS) << FRAC_BITS);
    let top = (frac >> (FRAC_BITS - 53)).to_u64().unwrap();
    top as f64 / (1u64 << 53) as f64
}

#[test]
fn oracle_self_checks() {
    // pi and ln 2 against their known doubles.
    let pi = fx_pi();
    let pi_f = (&pi >> (FRAC_BITS - 53)).to_u64().unwrap() as f64 / (1u64 << 53) as f64;
    assert!((pi_f - std::f64::consts::PI).abs() < 1e-15, "pi = {pi_f}");
    let ln2 = fx_ln2();
    let ln2_f = (&ln2 >> (FRAC_BITS - 53)).to_u64().unwrap() as f64 / (1u64 << 53) as f64;
    assert!((ln2_f - std::f64::consts::LN_2).abs() < 1e-15);
    // ln(10) = ln 2 + ln 5.
    let lhs = fx_ln(10);
    let rhs = fx_ln(2) + fx_ln(5);
    let diff = (&lhs - &rhs).abs();
    assert!(diff < BigInt::from(1) << 8, "ln additivity residue {diff}");
}

#[test]
fn split_precision_matches_oracle_to_1e12() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED);
    let mut cases: Vec<(u64, u64)> = (0..40)
        .map(|_| {
            (
                rng.gen_range(1..=10_000_000_000u64),
                rng.gen_range(2..=1_000_000u64),
            )
        })
        .collect();
    // Adversarial corners: tallest supported base, smallest/largest primes.
    cases.push((1_000_000_000_000, 2));
    cases.push((1_000_000_000_000, 999_983));
    cases.push((999_999_999_999, 3));
    for (t, p) in cases {
        let p = next_prime_at_or_above(p);
        let table = PhaseTable::new(&[p]);
        let got = table.phase(0, TallShift::new(t, 0.0));
        let want = oracle_phase(t, p);
        let err = dist_to_nearest_int(got - want);
        assert!(err < 1e-12, "T={t} p={p}: got {got}, oracle {want}, err {err:.3e}");
    }
}

fn next_prime_at_or_above(n: u64) -> u64 {
    let mut candidate = n.max(2);
    loop {
        if is_prime(candidate) {
            return candidate;
        }
        candidate += 1;
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}
