//! Minimal double-double arithmetic (~31 significant decimal digits).
//!
//! The Taylor series of `E_{alpha,nu}(z)` on the negative axis is
//! alternating with huge cancellation: near the series/asymptotic
//! crossover the largest term exceeds the sum by up to seventeen orders
//! of magnitude, which is unrecoverable in plain doubles. Carrying the
//! summation in double-double keeps the final relative error near 1e-12.
//!
//! Only the operations the Mittag-Leffler series needs are provided:
//! basic arithmetic, `exp`, `ln`, `lgamma`, and a cancellation-free
//! `lgamma(x + a) - lgamma(x)` used to build term-ratio tables.

/// An unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

/// Error-free sum: `a + b = s + e` exactly.
#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

/// Error-free sum assuming `|a| >= |b|`.
#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let e = b - (s - a);
    (s, e)
}

/// Error-free product via fused multiply-add: `a * b = p + e` exactly.
#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let e = a.mul_add(b, -p);
    (p, e)
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    #[inline]
    pub fn from_f64(a: f64) -> Dd {
        Dd { hi: a, lo: 0.0 }
    }

    /// Renormalizing constructor (requires `|hi| >= |lo|` roughly).
    #[inline]
    pub fn new(hi: f64, lo: f64) -> Dd {
        let (s, e) = quick_two_sum(hi, lo);
        Dd { hi: s, lo: e }
    }

    /// Exact product of two doubles.
    #[inline]
    pub fn prod(a: f64, b: f64) -> Dd {
        let (p, e) = two_prod(a, b);
        Dd { hi: p, lo: e }
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

    pub fn add(self, b: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        Dd::new(s1, s2 + t2)
    }

    #[inline]
    pub fn add_f64(self, b: f64) -> Dd {
        let (s1, s2) = two_sum(self.hi, b);
        Dd::new(s1, s2 + self.lo)
    }

    #[inline]
    pub fn sub(self, b: Dd) -> Dd {
        self.add(b.neg())
    }

    pub fn mul(self, b: Dd) -> Dd {
        let (p1, p2) = two_prod(self.hi, b.hi);
        let p2 = p2 + self.hi * b.lo + self.lo * b.hi;
        Dd::new(p1, p2)
    }

    #[inline]
    pub fn mul_f64(self, b: f64) -> Dd {
        let (p1, p2) = two_prod(self.hi, b);
        Dd::new(p1, p2 + self.lo * b)
    }

    pub fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        let r = self.sub(b.mul_f64(q1));
        let q2 = r.hi / b.hi;
        let r = r.sub(b.mul_f64(q2));
        let q3 = r.hi / b.hi;
        let (s, e) = two_sum(q1, q2);
        Dd::new(s, e + q3)
    }

    /// Scale by a power of two (exact).
    #[inline]
    fn ldexp(self, k: i32) -> Dd {
        let f = 2f64.powi(k);
        Dd {
            hi: self.hi * f,
            lo: self.lo * f,
        }
    }
}

/// Exact double-double value of `alpha * k + nu` for doubles `alpha`,
/// `nu` and a small integer `k`.
pub(crate) fn fma_sum(alpha: f64, k: f64, nu: f64) -> Dd {
    let p = Dd::prod(alpha, k);
    let (s1, s2) = two_sum(p.hi, nu);
    Dd::new(s1, s2 + p.lo)
}

// The `lo` part extends `LN_2` to double-double precision.
const LN2: Dd = Dd {
    hi: std::f64::consts::LN_2,
    lo: 2.319_046_813_846_299_6e-17,
};
// ln(2 pi) / 2
const HALF_LN_2PI: Dd = Dd {
    hi: 0.918_938_533_204_672_8,
    lo: -3.878_294_158_067_241_4e-17,
};

/// Exponential, accurate to roughly 1e-31 relative.
pub(crate) fn exp(a: Dd) -> Dd {
    if a.hi < -745.0 {
        return Dd::ZERO;
    }
    if a.hi > 709.0 {
        return Dd::from_f64(f64::INFINITY);
    }
    // Range reduction a = k ln2 + r with |r| <= ln2 / 2.
    let k = (a.hi / LN2.hi).round();
    let r = a.sub(LN2.mul_f64(k));
    // Taylor series of e^r.
    let mut sum = Dd::ONE.add(r);
    let mut term = r;
    let mut i = 2.0f64;
    loop {
        term = term.mul(r).div(Dd::from_f64(i));
        sum = sum.add(term);
        if term.hi.abs() < 1e-35 || i > 40.0 {
            break;
        }
        i += 1.0;
    }
    sum.ldexp(k as i32)
}

/// Natural logarithm for `a.hi > 0`, via Newton refinement of the double
/// seed: `y <- y + a e^{-y} - 1` doubles the correct digits per pass.
pub(crate) fn ln(a: Dd) -> Dd {
    debug_assert!(a.hi > 0.0);
    let mut y = Dd::from_f64(a.hi.ln());
    for _ in 0..2 {
        let e = exp(y.neg());
        y = y.add(a.mul(e).sub(Dd::ONE));
    }
    y
}

// Stirling coefficients B_{2n} / (2n (2n-1)), n = 1..=13, in double-double.
const STIRLING: [Dd; 13] = [
    Dd {
        hi: 0.083_333_333_333_333_33,
        lo: 4.625_929_269_271_485e-18,
    },
    Dd {
        hi: -0.002_777_777_777_777_778,
        lo: 1.060_108_790_874_715_4e-19,
    },
    Dd {
        hi: 0.000_793_650_793_650_793_7,
        lo: 6.883_823_317_368_282e-22,
    },
    Dd {
        hi: -0.000_595_238_095_238_095_3,
        lo: 5.369_382_187_547_26e-20,
    },
    Dd {
        hi: 0.000_841_750_841_750_841_7,
        lo: 3.687_017_488_923_769_4e-20,
    },
    Dd {
        hi: -0.001_917_526_917_526_917_6,
        lo: 1.067_570_277_687_247_5e-19,
    },
    Dd {
        hi: 0.006_410_256_410_256_41,
        lo: 2.224_004_456_380_521_7e-19,
    },
    Dd {
        hi: -0.029_550_653_594_771_242,
        lo: 4.861_760_957_508_855e-19,
    },
    Dd {
        hi: 0.179_644_372_368_830_57,
        lo: -6.401_600_482_710_946e-19,
    },
    Dd {
        hi: -1.392_432_216_905_901_1,
        lo: 1.583_705_698_923_030_3e-17,
    },
    Dd {
        hi: 13.402_864_044_168_393,
        lo: -6.154_114_101_993_966e-16,
    },
    Dd {
        hi: -156.848_284_626_002_03,
        lo: 9.391_823_141_715_389e-15,
    },
    Dd {
        hi: 2_193.103_333_333_333_5,
        lo: -1.333_925_562_600_294_8e-13,
    },
];

const STIRLING_MIN_X: f64 = 32.0;

/// Stirling correction `S(x) = sum_i c_i x^{1-2i}` for `x >= 32`.
fn stirling_tail(x: Dd) -> Dd {
    let inv = Dd::ONE.div(x);
    let inv2 = inv.mul(inv);
    let mut w = inv;
    let mut acc = Dd::ZERO;
    for c in STIRLING {
        acc = acc.add(c.mul(w));
        w = w.mul(inv2);
    }
    acc
}

/// `ln Gamma(x)` for `x >= 32` by the Stirling series.
fn lgamma_stirling(x: Dd) -> Dd {
    let lnx = ln(x);
    x.add_f64(-0.5)
        .mul(lnx)
        .sub(x)
        .add(HALF_LN_2PI)
        .add(stirling_tail(x))
}

/// `ln Gamma(x)` for `x.hi > 0`: Stirling above 32, recurrence lift below.
pub(crate) fn lgamma(x: Dd) -> Dd {
    debug_assert!(x.hi > 0.0);
    if x.hi >= STIRLING_MIN_X {
        return lgamma_stirling(x);
    }
    // Gamma(x) = Gamma(x + m) / (x (x+1) ... (x+m-1))
    let mut shift = Dd::ZERO;
    let mut y = x;
    while y.hi < STIRLING_MIN_X {
        shift = shift.add(ln(y));
        y = y.add_f64(1.0);
    }
    lgamma_stirling(y).sub(shift)
}

/// `ln Gamma(x + a) - ln Gamma(x)` for `x.hi > 0` and `0 < a <= 2`,
/// evaluated without forming the two large logarithms, so the absolute
/// error stays at the double-double level of the *difference* (which is
/// only of size `a ln x`). Term-ratio tables for the Mittag-Leffler
/// series need exactly this accuracy: at the crossover the ratio errors
/// are amplified by the full cancellation of the alternating series.
pub(crate) fn lgamma_diff(x: Dd, a: f64) -> Dd {
    debug_assert!(x.hi > 0.0 && a > 0.0 && a <= 2.0);
    // Lift with lgamma(x+a) - lgamma(x)
    //   = lgamma(x+a+1) - lgamma(x+1) - ln((x+a)/x)
    // until the Stirling range is reached.
    let mut acc = Dd::ZERO;
    let mut y = x;
    while y.hi < STIRLING_MIN_X {
        acc = acc.sub(ln(y.add_f64(a).div(y)));
        y = y.add_f64(1.0);
    }
    // For y >= 32:
    //   diff = (y - 1/2) ln(1 + a/y) + a ln(y + a) - a + S(y+a) - S(y).
    let ya = y.add_f64(a);
    let u = Dd::from_f64(a).div(y);
    let main = y.add_f64(-0.5).mul(ln(Dd::ONE.add(u)));
    let second = ln(ya).mul_f64(a).add_f64(-a);
    acc.add(main)
        .add(second)
        .add(stirling_tail(ya).sub(stirling_tail(y)))
}

/// `1 / Gamma(x)` in double-double for `x.hi > 0`.
pub(crate) fn rgamma(x: Dd) -> Dd {
    exp(lgamma(x).neg())
}
