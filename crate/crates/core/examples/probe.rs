//! Scratch probe for calibrating acceptance-test constants.

use num_complex::Complex64;
use voronin_core::density::{build_e_t, derive_geometry};
use voronin_core::euler::EulerEvaluator;
use voronin_core::fit::{AngleAssignment, Disc};
use voronin_core::primes::sieve_primes;
use voronin_core::tausearch::{scan_c_delta, SearchWindow};
use voronin_core::zeta::{log_zeta, EvalConfig};
use std::time::Instant;

fn main() {
    let which = std::env::args().nth(1).unwrap_or_default();
    match which.as_str() {
        "lemma22" => probe_lemma22(),
        "et" => probe_et(),
        _ => {
            probe_lemma22();
            probe_et();
        }
    }
}

fn probe_lemma22() {
    let cfg = EvalConfig::default();
    let table = sieve_primes(10_000).unwrap();
    let evaluator = EulerEvaluator::new(&table, 10_000.0).unwrap();
    let sigma = 0.8;
    let base = 100_000u64;
    let n_samples = 16;
    let width = 2.0;
    let mut sups = Vec::new();
    let t0 = Instant::now();
    // Shared log zeta samples.
    let mut lz = Vec::new();
    for i in 0..n_samples {
        let u = width * (i as f64 + 0.5) / n_samples as f64;
        let s = Complex64::new(sigma, base as f64 + u);
        lz.push((u, log_zeta(s, &cfg).unwrap()));
    }
    let base_phases = evaluator.base_phases(base);
    for &y in &[100.0, 1000.0, 10_000.0] {
        let mut sup = 0.0f64;
        for &(u, lzv) in &lz {
            let prod = evaluator.log_euler_at_offset(
                Complex64::new(sigma, 0.0),
                &base_phases,
                u,
                y,
            );
            sup = sup.max((lzv - prod).norm());
        }
        sups.push((y, sup));
    }
    println!("lemma22 probe ({:?}):", t0.elapsed());
    for w in sups.windows(2) {
        let (y1, s1) = w[0];
        let (y2, s2) = w[1];
        let predicted = (y2 / y1) as f64;
        let predicted = predicted.powf(0.5 - sigma);
        println!(
            "  Y {y1} -> {y2}: sup {s1:.4e} -> {s2:.4e}, ratio {:.3}, predicted {predicted:.3}, ratio/pred {:.2}",
            s2 / s1,
            (s2 / s1) / predicted
        );
    }
}

fn probe_et() {
    let t0 = Instant::now();
    let table = sieve_primes(140_000).unwrap();
    let disc = Disc::new(Complex64::new(0.8, 0.0), 0.05).unwrap();
    let window = SearchWindow::with_h(1_000_000, 10_000.0).unwrap();
    for eps in [0.75, 1.0, 1.5] {
        let mut geom = derive_geometry(&disc, eps, 5.0, 4.5, 4.6, 1_000_000, 1.0).unwrap();
        let assign =
            AngleAssignment::new(vec![(2, 0.37), (3, 0.81), (5, 0.13)], 5.0).unwrap();
        geom.delta_for_assignment(&assign, 1.0);
        println!(
            "eps={eps}: delta={:.4}, Y={:.0}, y_req={:.3e}",
            geom.delta, geom.big_y, geom.y_required
        );
        let c = scan_c_delta(&window, &assign, geom.delta).unwrap();
        let t1 = Instant::now();
        let e = build_e_t(&geom, &assign, &window, &table, 16).unwrap();
        println!(
            "  C: {} intervals, measure {:.2} ({:.4} H); E_T measure {:.2}; ratio {:.3}; build {:?}",
            c.intervals().len(),
            c.measure(),
            c.measure() / window.h(),
            e.measure(),
            e.measure() / c.measure(),
            t1.elapsed()
        );
    }
    println!("total {:?}", t0.elapsed());
}
