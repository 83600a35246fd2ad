//! Minimal exact rational arithmetic for dual polygons and disc bounds.

use core::cmp::Ordering;
use core::fmt;

fn gcd128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// A reduced fraction with positive denominator.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Rational {
    num: i128,
    den: i128,
}

impl Rational {
    pub const ZERO: Rational = Rational { num: 0, den: 1 };
    pub const ONE: Rational = Rational { num: 1, den: 1 };

    pub fn new(num: i128, den: i128) -> Rational {
        assert!(den != 0, "zero denominator");
        let sign = if den < 0 { -1 } else { 1 };
        let g = gcd128(num, den).max(1);
        Rational { num: sign * num / g, den: sign * den / g }
    }

    pub fn from_int(n: i64) -> Rational {
        Rational { num: n as i128, den: 1 }
    }

    pub fn numerator(&self) -> i128 {
        self.num
    }

    pub fn denominator(&self) -> i128 {
        self.den
    }

    pub fn is_integer(&self) -> bool {
        self.den == 1
    }

    fn chk_mul(a: i128, b: i128) -> i128 {
        a.checked_mul(b).expect("rational overflow")
    }

    pub fn add(self, o: Rational) -> Rational {
        Rational::new(
            Self::chk_mul(self.num, o.den)
                .checked_add(Self::chk_mul(o.num, self.den))
                .expect("rational overflow"),
            Self::chk_mul(self.den, o.den),
        )
    }

    pub fn sub(self, o: Rational) -> Rational {
        self.add(o.neg())
    }

    pub fn neg(self) -> Rational {
        Rational { num: -self.num, den: self.den }
    }

    pub fn mul(self, o: Rational) -> Rational {
        Rational::new(Self::chk_mul(self.num, o.num), Self::chk_mul(self.den, o.den))
    }

    pub fn div(self, o: Rational) -> Rational {
        assert!(o.num != 0, "division by zero rational");
        Rational::new(Self::chk_mul(self.num, o.den), Self::chk_mul(self.den, o.num))
    }

    pub fn signum(&self) -> i32 {
        self.num.signum() as i32
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        Rational::chk_mul(self.num, other.den).cmp(&Rational::chk_mul(other.num, self.den))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// A point with exact rational coordinates.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct RationalPoint {
    pub x: Rational,
    pub y: Rational,
}

impl RationalPoint {
    pub fn new(x: Rational, y: Rational) -> RationalPoint {
        RationalPoint { x, y }
    }

    pub fn cross(self, o: RationalPoint) -> Rational {
        self.x.mul(o.y).sub(self.y.mul(o.x))
    }

    pub fn sub(self, o: RationalPoint) -> RationalPoint {
        RationalPoint::new(self.x.sub(o.x), self.y.sub(o.y))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_and_sign() {
        let r = Rational::new(6, -4);
        assert_eq!(r.numerator(), -3);
        assert_eq!(r.denominator(), 2);
        assert_eq!(Rational::new(0, 5), Rational::ZERO);
    }

    #[test]
    fn field_ops() {
        let a = Rational::new(1, 3);
        let b = Rational::new(1, 6);
        assert_eq!(a.add(b), Rational::new(1, 2));
        assert_eq!(a.sub(b), b);
        assert_eq!(a.mul(b), Rational::new(1, 18));
        assert_eq!(a.div(b), Rational::from_int(2));
        assert!(a > b);
    }
}
