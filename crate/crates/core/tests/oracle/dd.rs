//! Double-double ("~106-bit") arithmetic, just enough for slab matrices.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

const PI: Dd = Dd {
    hi: std::f64::consts::PI,
    lo: 1.2246467991473532e-16,
};

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl From<f64> for Dd {
    fn from(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, o: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, o.hi);
        let (t1, t2) = two_sum(self.lo, o.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        Dd { hi, lo }
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, o: Dd) -> Dd {
        self + (-o)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, o: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, o.hi);
        let e = e + (self.hi * o.lo + self.lo * o.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, o: Dd) -> Dd {
        // two Newton corrections on the f64 quotient
        let q1 = self.hi / o.hi;
        let r = self - o * Dd::from(q1);
        let q2 = r.hi / o.hi;
        let r = r - o * Dd::from(q2);
        let q3 = r.hi / o.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo } + Dd::from(q3)
    }
}

impl Dd {
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn sqrt(self) -> Dd {
        if self.hi <= 0.0 {
            return Dd::from(0.0);
        }
        let y = Dd::from(self.hi.sqrt());
        y + (self - y * y) / (Dd::from(2.0) * y)
    }

    fn scale(self, f: f64) -> Dd {
        Dd {
            hi: self.hi * f,
            lo: self.lo * f,
        }
    }

    /// Taylor series `Σ sign^n x^(2n+start) / (2n+start)!`.
    fn series(x: Dd, start: u32, alternating: bool) -> Dd {
        let x2 = x * x;
        let mut term = if start == 0 { Dd::from(1.0) } else { x };
        let mut sum = term;
        let mut n = start;
        for _ in 0..400 {
            let denom = ((n + 1) * (n + 2)) as f64;
            term = term * x2 / Dd::from(denom);
            if alternating {
                term = -term;
            }
            n += 2;
            sum = sum + term;
            if term.hi.abs() < 1e-34 * sum.hi.abs().max(1e-300) {
                break;
            }
        }
        sum
    }

    /// Reduces to `[-π, π]`.
    fn reduce(self) -> Dd {
        let two_pi = PI.scale(2.0);
        let m = (self / two_pi).to_f64().round();
        self - two_pi * Dd::from(m)
    }

    pub fn sin(self) -> Dd {
        Self::series(self.reduce(), 1, true)
    }

    pub fn cos(self) -> Dd {
        Self::series(self.reduce(), 0, true)
    }

    pub fn sinh(self) -> Dd {
        Self::series(self, 1, false)
    }

    pub fn cosh(self) -> Dd {
        Self::series(self, 0, false)
    }
}

/// Complex double-double.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cdd {
    pub re: Dd,
    pub im: Dd,
}

impl Cdd {
    pub fn new(re: Dd, im: Dd) -> Self {
        Cdd { re, im }
    }

    pub fn to_c64(self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
}

impl Add for Cdd {
    type Output = Cdd;
    fn add(self, o: Cdd) -> Cdd {
        Cdd::new(self.re + o.re, self.im + o.im)
    }
}

impl Sub for Cdd {
    type Output = Cdd;
    fn sub(self, o: Cdd) -> Cdd {
        Cdd::new(self.re - o.re, self.im - o.im)
    }
}

impl Neg for Cdd {
    type Output = Cdd;
    fn neg(self) -> Cdd {
        Cdd::new(-self.re, -self.im)
    }
}

impl Mul for Cdd {
    type Output = Cdd;
    fn mul(self, o: Cdd) -> Cdd {
        Cdd::new(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )
    }
}

impl Div for Cdd {
    type Output = Cdd;
    fn div(self, o: Cdd) -> Cdd {
        let den = o.re * o.re + o.im * o.im;
        let num = self * Cdd::new(o.re, -o.im);
        Cdd::new(num.re / den, num.im / den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trig_identities_hold_beyond_double_precision() {
        for x in [0.3, 1.7, 12.9, -40.2] {
            let d = Dd::from(x);
            let (s, c) = (d.sin(), d.cos());
            let one = s * s + c * c - Dd::from(1.0);
            assert!(one.to_f64().abs() < 1e-28, "{x}: {one:?}");
            assert!((s.to_f64() - x.sin()).abs() < 1e-15);
            let (sh, ch) = (d.sinh(), d.cosh());
            let unit = ch * ch - sh * sh - Dd::from(1.0);
            assert!(unit.to_f64().abs() < 1e-26 * ch.hi * ch.hi, "{x}: {unit:?}");
        }
    }

    #[test]
    fn sqrt_and_div() {
        let two = Dd::from(2.0);
        let r = two.sqrt();
        assert!((r * r - two).to_f64().abs() < 1e-30);
        let third = Dd::from(1.0) / Dd::from(3.0);
        assert!((third * Dd::from(3.0) - Dd::from(1.0)).to_f64().abs() < 1e-31);
    }
}
