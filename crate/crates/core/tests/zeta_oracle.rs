//! Accuracy of the Euler-Maclaurin evaluator against frozen 50-digit
//! reference values (mpmath).

mod zeta_oracle {
    pub mod table;
}

use num_complex::Complex64;
use voronin_core::zeta::{log_zeta, zeta, EvalConfig};
use zeta_oracle::table::{ZETA_TABLE, ZETA_TABLE_TALL};

#[test]
fn pinned_points_to_1e10() {
    let cfg = EvalConfig::default();
    let mut worst = 0.0f64;
    for &(sigma, t, re, im) in ZETA_TABLE.iter() {
        let got = zeta(Complex64::new(sigma, t), &cfg).unwrap();
        let err = (got - Complex64::new(re, im)).norm();
        worst = worst.max(err);
        assert!(
            err <= 1e-10,
            "zeta({sigma} + {t}i): err = {err:.3e} (got {got}, want {re}+{im}i)"
        );
    }
    eprintln!("pinned points worst error: {worst:.3e}");
}

#[test]
fn tall_points_use_split_phases() {
    let cfg = EvalConfig::default();
    for &(sigma, t, re, im) in ZETA_TABLE_TALL.iter() {
        let got = zeta(Complex64::new(sigma, t), &cfg).unwrap();
        let err = (got - Complex64::new(re, im)).norm();
        assert!(err <= 1e-10, "zeta({sigma} + {t}i): err = {err:.3e}");
    }
}

#[test]
fn derived_value_at_three_quarters() {
    // zeta(0.75) from the 50-digit oracle.
    let cfg = EvalConfig::default();
    let got = zeta(Complex64::new(0.75, 0.0), &cfg).unwrap();
    assert!((got.re - -3.44128538694522289439514).abs() < 1e-10);
    assert!(got.im.abs() < 1e-12);
}

#[test]
fn log_zeta_self_consistency_at_1000() {
    let cfg = EvalConfig::default();
    let s = Complex64::new(0.9, 1000.0);
    let lz = log_zeta(s, &cfg).unwrap();
    let z = zeta(s, &cfg).unwrap();
    assert!((lz.exp() - z).norm() < 1e-8);
}
