use num_complex::Complex64;
use voronin_core::zeta::{log_zeta, zeta, EvalConfig};
use std::time::Instant;

fn main() {
    let cfg = EvalConfig::default();
    for &t in &[100.0, 1000.0, 10_000.0, 100_000.0] {
        let s = Complex64::new(0.8, t);
        let t0 = Instant::now();
        let mut n = 0;
        while t0.elapsed().as_millis() < 300 {
            let _ = zeta(s, &cfg).unwrap();
            n += 1;
        }
        let per_zeta = t0.elapsed().as_secs_f64() / n as f64;
        let t1 = Instant::now();
        let mut m = 0;
        while t1.elapsed().as_millis() < 300 {
            let _ = log_zeta(s, &cfg).unwrap();
            m += 1;
        }
        let per_lz = t1.elapsed().as_secs_f64() / m as f64;
        println!("t={t:>9}: zeta {:.3} ms, log_zeta {:.3} ms", per_zeta * 1e3, per_lz * 1e3);
    }
}
