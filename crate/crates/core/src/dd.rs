//! Double-double arithmetic: unevaluated sums `hi + lo` of two doubles
//! giving roughly 106 bits of significand.
//!
//! Only the operations needed for phase reduction are provided. The
//! error-free transformations are the classical ones (Knuth two-sum,
//! FMA-based two-product); see Hida, Li, Bailey, "Library for
//! double-double and quad-double arithmetic" for the composite ops.

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Copy, Clone, Debug, Default, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

/// Error-free sum of two doubles, no magnitude ordering assumed.
#[inline]
pub fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

/// Error-free sum when `|a| >= |b|`.
#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let err = b - (s - a);
    (s, err)
}

/// Error-free product via FMA (`mul_add` is a fused operation in Rust).
#[inline]
pub fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let err = a.mul_add(b, -p);
    (p, err)
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };
    /// ln 2 to double-double precision.
    pub const LN2: Dd = Dd {
        hi: 0.693_147_180_559_945_3,
        lo: 2.319_046_813_846_299_6e-17,
    };
    /// 2*pi to double-double precision.
    pub const TWO_PI: Dd = Dd {
        hi: 6.283_185_307_179_586,
        lo: 2.449_293_598_294_706_4e-16,
    };

    #[inline]
    pub fn new(hi: f64, lo: f64) -> Dd {
        let (s, e) = quick_two_sum(hi, lo);
        Dd { hi: s, lo: e }
    }

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    #[inline]
    pub fn add(self, rhs: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, rhs.hi);
        let (t1, t2) = two_sum(self.lo, rhs.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        Dd { hi, lo }
    }

    #[inline]
    pub fn sub(self, rhs: Dd) -> Dd {
        self.add(rhs.neg())
    }

    #[inline]
    pub fn add_f64(self, rhs: f64) -> Dd {
        let (s1, s2) = two_sum(self.hi, rhs);
        let (hi, lo) = quick_two_sum(s1, s2 + self.lo);
        Dd { hi, lo }
    }

    #[inline]
    pub fn mul(self, rhs: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, rhs.hi);
        let e = e + self.hi * rhs.lo + self.lo * rhs.hi;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    #[inline]
    pub fn mul_f64(self, rhs: f64) -> Dd {
        let (p, e) = two_prod(self.hi, rhs);
        let (hi, lo) = quick_two_sum(p, e + self.lo * rhs);
        Dd { hi, lo }
    }

    pub fn div(self, rhs: Dd) -> Dd {
        let q1 = self.hi / rhs.hi;
        let r = self.sub(rhs.mul_f64(q1));
        let q2 = r.hi / rhs.hi;
        let r = r.sub(rhs.mul_f64(q2));
        let q3 = r.hi / rhs.hi;
        let (s, e) = quick_two_sum(q1, q2);
        Dd::new(s, e + q3)
    }

    /// Reciprocal of an exactly representable double.
    #[inline]
    pub fn recip_f64(x: f64) -> Dd {
        Dd::ONE.div(Dd::from_f64(x))
    }

    /// Largest integer <= self, exact.
    pub fn floor(self) -> Dd {
        let fhi = self.hi.floor();
        if fhi == self.hi {
            let flo = self.lo.floor();
            let (hi, lo) = quick_two_sum(fhi, flo);
            Dd { hi, lo }
        } else {
            Dd { hi: fhi, lo: 0.0 }
        }
    }

    /// Fractional part in `[0, 1)`.
    pub fn fract(self) -> Dd {
        let mut f = self.sub(self.floor());
        // Two correction passes: the subtraction can land exactly on 1.0
        // (rounded up from below) and the first correction can then dip
        // infinitesimally below zero.
        if f.hi >= 1.0 {
            f = f.add_f64(-1.0);
        }
        if f.hi < 0.0 {
            f = f.add_f64(1.0);
        }
        if f.hi >= 1.0 {
            f = Dd::ZERO;
        }
        f
    }
}

/// Natural log of a positive integer to double-double accuracy.
///
/// Reduction `n = m * 2^e` with `m` in `[0.75, 1.5)`, then the atanh series
/// `ln m = 2 z (1 + z^2/3 + z^4/5 + ...)`, `z = (m-1)/(m+1)`, `|z| <= 0.2`.
pub fn ln_u64(n: u64) -> Dd {
    assert!(n >= 1, "ln_u64 needs n >= 1");
    if n == 1 {
        return Dd::ZERO;
    }
    let x = n as f64; // exact for n < 2^53
    let e = (x.log2()).round() as i32;
    let m = x * (-e as f64).exp2(); // exact scaling by a power of two
    let z = Dd::from_f64(m).add_f64(-1.0).div(Dd::from_f64(m).add_f64(1.0));
    let w = z.mul(z);
    // 0.2^(2k+1) < 2^-107 needs 2k+1 >= 47.
    let mut sum = Dd::from_f64(1.0 / 47.0);
    let mut k = 45i32;
    while k >= 3 {
        sum = sum.mul(w).add(Dd::recip_f64(k as f64));
        k -= 2;
    }
    sum = sum.mul(w).add_f64(1.0);
    z.mul_f64(2.0).mul(sum).add(Dd::LN2.mul_f64(e as f64))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_small_integers() {
        // Cross-checked against 50-digit values.
        let cases = [
            (2u64, 0.69314718055994530941723212145818),
            (3, 1.0986122886681096913952452369225),
            (10, 2.3025850929940456840179914546844),
            (97, 4.5747109785033828221167497907407),
            (999_983, 13.8154935578197724664204),
        ];
        for (n, want) in cases {
            let got = ln_u64(n);
            assert!(
                (got.to_f64() - want).abs() < 1e-14 * want,
                "ln({n}) = {} want {want}",
                got.to_f64()
            );
        }
    }

    #[test]
    fn ln_is_additive() {
        // ln(6) = ln(2) + ln(3) to double-double accuracy.
        let lhs = ln_u64(6);
        let rhs = ln_u64(2).add(ln_u64(3));
        let diff = lhs.sub(rhs).to_f64().abs();
        assert!(diff < 1e-30, "diff = {diff:e}");
    }

    #[test]
    fn fract_stays_in_unit_interval() {
        for &(hi, lo) in &[(3.75f64, 1e-20f64), (-2.25, 0.0), (0.0, -1e-30), (5.0, -1e-17)] {
            let f = Dd::new(hi, lo).fract();
            assert!(f.to_f64() >= 0.0 && f.to_f64() < 1.0, "fract({hi},{lo}) = {f:?}");
        }
    }

    #[test]
    fn div_recovers_product() {
        let a = Dd::new(1.2345678901234567, 3.1e-17);
        let b = Dd::new(6.7891011121314151, -2.2e-17);
        let q = a.mul(b).div(b);
        assert!(q.sub(a).to_f64().abs() < 1e-30);
    }
}
