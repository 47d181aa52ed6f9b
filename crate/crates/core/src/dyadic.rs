//! Exact dyadic rationals `num / 2^exp`.
//!
//! Every Fourier coefficient of a Boolean function on `n` variables is an
//! integer multiple of `2^-n`, so all spectral identities (Parseval, level
//! weights, tensor products, closed-form Tribes coefficients) can be checked
//! without rounding.

use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

/// A dyadic rational `num · 2^-exp`, kept in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Dyadic {
    num: i128,
    exp: u32,
}

impl Dyadic {
    pub const ZERO: Dyadic = Dyadic { num: 0, exp: 0 };
    pub const ONE: Dyadic = Dyadic { num: 1, exp: 0 };

    /// `num / 2^exp`, reduced.
    pub fn new(num: i128, exp: u32) -> Self {
        Dyadic { num, exp }.normalized()
    }

    pub fn from_int(v: i128) -> Self {
        Dyadic { num: v, exp: 0 }
    }

    fn normalized(mut self) -> Self {
        if self.num == 0 {
            self.exp = 0;
            return self;
        }
        let tz = self.num.trailing_zeros().min(self.exp);
        self.num >>= tz;
        self.exp -= tz;
        self
    }

    pub fn numerator(&self) -> i128 {
        self.num
    }

    /// Exponent of the reduced denominator. This is the granularity of the value.
    pub fn exponent(&self) -> u32 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn abs(self) -> Self {
        Dyadic {
            num: self.num.abs(),
            exp: self.exp,
        }
    }

    pub fn square(self) -> Self {
        self * self
    }

    /// Multiplies by `2^k` (`k` may be negative).
    pub fn scale_pow2(self, k: i32) -> Self {
        if k >= 0 {
            let k = k as u32;
            if k <= self.exp {
                Dyadic::new(self.num, self.exp - k)
            } else {
                Dyadic::new(self.num << (k - self.exp), 0)
            }
        } else {
            Dyadic::new(self.num, self.exp + k.unsigned_abs())
        }
    }

    pub fn to_f64(&self) -> f64 {
        // Exact for |num| < 2^53; `ldexp` avoids overflow in 2^exp.
        libm::ldexp(self.num as f64, -(self.exp as i32))
    }

    fn align(a: Self, b: Self) -> (i128, i128, u32) {
        let e = a.exp.max(b.exp);
        (a.num << (e - a.exp), b.num << (e - b.exp), e)
    }
}

impl Add for Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: Dyadic) -> Dyadic {
        let (a, b, e) = Dyadic::align(self, rhs);
        Dyadic::new(a + b, e)
    }
}

impl Sub for Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: Dyadic) -> Dyadic {
        self + (-rhs)
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            num: -self.num,
            exp: self.exp,
        }
    }
}

impl Mul for Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: Dyadic) -> Dyadic {
        Dyadic::new(self.num * rhs.num, self.exp + rhs.exp)
    }
}

impl core::iter::Sum for Dyadic {
    fn sum<I: Iterator<Item = Dyadic>>(iter: I) -> Dyadic {
        iter.fold(Dyadic::ZERO, |a, b| a + b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = Dyadic::align(*self, *other);
        a.cmp(&b)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/2^{}", self.num, self.exp)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_to_lowest_terms() {
        let d = Dyadic::new(12, 4);
        assert_eq!(d.numerator(), 3);
        assert_eq!(d.exponent(), 2);
        assert_eq!(Dyadic::new(0, 9), Dyadic::ZERO);
    }

    #[test]
    fn arithmetic() {
        let half = Dyadic::new(1, 1);
        let quarter = Dyadic::new(1, 2);
        assert_eq!(half + quarter, Dyadic::new(3, 2));
        assert_eq!(half - quarter, quarter);
        assert_eq!(half * half, quarter);
        assert_eq!(half.scale_pow2(1), Dyadic::ONE);
        assert_eq!(Dyadic::ONE.scale_pow2(-3), Dyadic::new(1, 3));
        assert!(quarter < half);
        assert_eq!((-half).abs(), half);
        assert_eq!(Dyadic::new(-3, 3).to_f64(), -0.375);
    }
}
