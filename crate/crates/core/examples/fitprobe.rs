//! Scratch probe for the round-trip fit.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;
use voronin_core::expr::parse_target;
use voronin_core::fit::{fit_angles, Disc, FitBudget};

fn main() {
    let disc = Disc::new(Complex64::new(0.75, 0.0), 0.1).unwrap();
    let primes = [2u64, 3, 5, 7, 11];
    let mut master = ChaCha8Rng::seed_from_u64(0x20F17);
    for trial in 0..6u64 {
        let m = master.gen_range(2..=5usize);
        let thetas: Vec<f64> = (0..m).map(|_| master.gen::<f64>()).collect();
        let expr = primes[..m]
            .iter()
            .zip(&thetas)
            .map(|(&p, &t)| format!("(1 - exp(-2*pi*i*{t})*{p}^(-s))^(-1)"))
            .collect::<Vec<_>>()
            .join(" * ");
        let f = parse_target(&expr).unwrap();
        let t0 = Instant::now();
        let budget = FitBudget {
            max_primes: 5,
            max_sweeps: 120,
            restarts: 2,
        };
        let res = fit_angles(&f, &disc, 1e-7, primes[m - 1] as f64, &budget, 1000 + trial).unwrap();
        let mut worst = 0.0f64;
        for (&p, &want) in primes[..m].iter().zip(&thetas) {
            let got = res.assign.theta(p).unwrap();
            let dev = (got - want).abs().min(1.0 - (got - want).abs());
            worst = worst.max(dev);
        }
        eprintln!(
            "trial {trial}: m={m} took {:?} sup={:.3e} worst-angle={:.3e} sweeps={} converged={}",
            t0.elapsed(),
            res.sup_error.total(),
            worst,
            res.sweeps_used,
            res.converged
        );
    }
}
