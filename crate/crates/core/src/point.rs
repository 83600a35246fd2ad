//! Lattice points with checked 64-bit arithmetic.
//!
//! The same representation serves the lattice `M` (polygon vertices) and its
//! dual `N` (width directions); operations document which side a parameter
//! lives on. Coordinates stay tiny in this problem domain, so `i64` with
//! explicit overflow checks is exact and fast.

use crate::error::Error;

/// Multiply with a loud failure instead of silent wraparound.
#[inline]
pub(crate) fn mul(a: i64, b: i64) -> i64 {
    a.checked_mul(b).expect("integer overflow in lattice arithmetic")
}

#[inline]
pub(crate) fn add(a: i64, b: i64) -> i64 {
    a.checked_add(b).expect("integer overflow in lattice arithmetic")
}

#[inline]
pub(crate) fn sub(a: i64, b: i64) -> i64 {
    a.checked_sub(b).expect("integer overflow in lattice arithmetic")
}

pub(crate) fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Extended gcd: returns `(g, x, y)` with `a*x + b*y = g`, `g >= 0`.
pub(crate) fn extended_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        return if a < 0 { (-a, -1, 0) } else { (a, 1, 0) };
    }
    let (g, x, y) = extended_gcd(b, a.rem_euclid(b));
    (g, y, x - a.div_euclid(b) * y)
}

/// A point of the integer lattice. Ordering is lexicographic, `x` first.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Point {
    pub x: i64,
    pub y: i64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0, y: 0 };

    #[inline]
    pub const fn new(x: i64, y: i64) -> Point {
        Point { x, y }
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.x == 0 && self.y == 0
    }

    #[inline]
    pub fn add(self, other: Point) -> Point {
        Point::new(add(self.x, other.x), add(self.y, other.y))
    }

    #[inline]
    pub fn sub(self, other: Point) -> Point {
        Point::new(sub(self.x, other.x), sub(self.y, other.y))
    }

    #[inline]
    pub fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }

    /// Inner product ⟨self, other⟩; used for widths along dual vectors.
    #[inline]
    pub fn dot(self, other: Point) -> i64 {
        add(mul(self.x, other.x), mul(self.y, other.y))
    }

    /// Determinant of the pair `(self, other)`.
    #[inline]
    pub fn cross(self, other: Point) -> i64 {
        sub(mul(self.x, other.y), mul(self.y, other.x))
    }

    /// gcd of the absolute coordinates; zero only for the origin.
    #[inline]
    pub fn gcd(self) -> i64 {
        gcd(self.x, self.y)
    }

    /// `true` when the coordinates are coprime (the vector is primitive).
    #[inline]
    pub fn is_primitive(self) -> bool {
        self.gcd() == 1
    }

    /// The primitive vector in the same direction.
    pub fn primitive(self) -> Result<Point, Error> {
        if self.is_zero() {
            return Err(Error::ZeroVector);
        }
        let g = self.gcd();
        Ok(Point::new(self.x / g, self.y / g))
    }

    /// Squared Euclidean norm.
    #[inline]
    pub fn norm_sq(self) -> i64 {
        self.dot(self)
    }
}

/// Orientation of the triple `(o, a, b)`: positive for a left turn.
#[inline]
pub fn orient(o: Point, a: Point, b: Point) -> i64 {
    a.sub(o).cross(b.sub(o))
}
