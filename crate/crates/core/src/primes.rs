//! Prime generation and the von Mangoldt function.
//!
//! A segmented sieve of Eratosthenes with a fixed segment size keeps memory
//! bounded for limits up to 10^9. Prime powers are generated by iterating
//! `p^k` over the prime list rather than by factoring.

use crate::error::{Error, Result};

/// Hard cap on sieve limits; beyond this the prime list alone would not fit
/// a reasonable memory budget.
pub const MAX_SIEVE_LIMIT: u64 = 1_000_000_000;

const SEGMENT_SIZE: usize = 1 << 16;

/// A prime power `n = p^k` with `k >= 2` (plain primes are kept separately).
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct PrimePower {
    pub p: u64,
    pub k: u32,
    pub n: u64,
}

/// Immutable tables of primes and prime powers up to `limit`.
///
/// Construction is single-threaded; afterwards the table is read-only and
/// safe to share across threads.
#[derive(Clone, Debug)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
    higher_powers: Vec<PrimePower>, // k >= 2, ascending by n
}

impl PrimeTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Primes `p <= y` as a slice (y may be fractional).
    pub fn primes_upto(&self, y: f64) -> &[u64] {
        if y < 2.0 {
            return &[];
        }
        let cut = y.floor() as u64;
        let idx = self.primes.partition_point(|&p| p <= cut);
        &self.primes[..idx]
    }

    /// All prime powers `p^k <= y` (including `k = 1`), ascending by `n`.
    pub fn prime_powers_upto(&self, y: f64) -> impl Iterator<Item = PrimePower> + '_ {
        let cut = if y < 0.0 { 0 } else { y.floor() as u64 };
        let ps = self
            .primes_upto(y)
            .iter()
            .map(|&p| PrimePower { p, k: 1, n: p });
        let hs = self
            .higher_powers
            .iter()
            .copied()
            .take_while(move |pp| pp.n <= cut);
        MergeAscending::new(ps, hs)
    }

    /// Checks `y` against the table limit.
    pub fn check_cutoff(&self, y: f64) -> Result<()> {
        if y > self.limit as f64 {
            return Err(Error::TableCutoff {
                cutoff: y,
                limit: self.limit,
            });
        }
        Ok(())
    }
}

/// Sieves all primes and prime powers up to `limit`.
pub fn sieve_primes(limit: u64) -> Result<PrimeTable> {
    if limit > MAX_SIEVE_LIMIT {
        return Err(Error::SieveBudget {
            limit,
            budget: MAX_SIEVE_LIMIT,
        });
    }
    let primes = segmented_sieve(limit);
    let mut higher_powers = Vec::new();
    for &p in &primes {
        let mut n = p.saturating_mul(p);
        let mut k = 2u32;
        while n <= limit {
            higher_powers.push(PrimePower { p, k, n });
            if n > limit / p {
                break;
            }
            n *= p;
            k += 1;
        }
    }
    higher_powers.sort_unstable_by_key(|pp| pp.n);
    Ok(PrimeTable {
        limit,
        primes,
        higher_powers,
    })
}

fn segmented_sieve(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let root = (limit as f64).sqrt() as u64 + 1;
    // Base primes up to sqrt(limit) by a plain sieve.
    let mut base_is_composite = vec![false; (root + 1) as usize];
    let mut base = Vec::new();
    for i in 2..=root {
        if !base_is_composite[i as usize] {
            base.push(i);
            let mut j = i * i;
            while j <= root {
                base_is_composite[j as usize] = true;
                j += i;
            }
        }
    }

    let reserve = if limit > 16 {
        (limit as f64 / (limit as f64).ln() * 1.15) as usize
    } else {
        8
    };
    let mut primes = Vec::with_capacity(reserve);
    let mut segment = vec![false; SEGMENT_SIZE];
    let mut low = 2u64;
    while low <= limit {
        let high = (low + SEGMENT_SIZE as u64 - 1).min(limit);
        segment.fill(false);
        for &p in &base {
            if p * p > high {
                break;
            }
            let mut start = p * p;
            if start < low {
                start = low.div_ceil(p) * p;
            }
            let mut j = start;
            while j <= high {
                segment[(j - low) as usize] = true;
                j += p;
            }
        }
        for off in 0..=(high - low) {
            let n = low + off;
            if !segment[off as usize] && n >= 2 {
                primes.push(n);
            }
        }
        low = high + 1;
    }
    primes
}

/// The von Mangoldt function: `ln p` when `n = p^k`, `0` otherwise.
pub fn von_mangoldt(n: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::VonMangoldtZero);
    }
    if n == 1 {
        return Ok(0.0);
    }
    // Smallest prime factor by trial division, then check n is a pure power.
    let mut p = 0u64;
    if n % 2 == 0 {
        p = 2;
    } else {
        let mut d = 3u64;
        while d * d <= n {
            if n % d == 0 {
                p = d;
                break;
            }
            d += 2;
        }
    }
    if p == 0 {
        return Ok((n as f64).ln()); // n itself is prime
    }
    let mut m = n;
    while m % p == 0 {
        m /= p;
    }
    Ok(if m == 1 { (p as f64).ln() } else { 0.0 })
}

struct MergeAscending<A: Iterator<Item = PrimePower>, B: Iterator<Item = PrimePower>> {
    a: std::iter::Peekable<A>,
    b: std::iter::Peekable<B>,
}

impl<A: Iterator<Item = PrimePower>, B: Iterator<Item = PrimePower>> MergeAscending<A, B> {
    fn new(a: A, b: B) -> Self {
        MergeAscending {
            a: a.peekable(),
            b: b.peekable(),
        }
    }
}

impl<A: Iterator<Item = PrimePower>, B: Iterator<Item = PrimePower>> Iterator
    for MergeAscending<A, B>
{
    type Item = PrimePower;
    fn next(&mut self) -> Option<PrimePower> {
        match (self.a.peek(), self.b.peek()) {
            (Some(x), Some(y)) => {
                if x.n <= y.n {
                    self.a.next()
                } else {
                    self.b.next()
                }
            }
            (Some(_), None) => self.a.next(),
            (None, _) => self.b.next(),
        }
    }
}
