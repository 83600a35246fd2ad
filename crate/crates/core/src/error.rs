//! One error type shared by the geometry, field and code layers.

use alloc::string::String;
use core::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// The input does not span a two-dimensional polygon.
    Dimension,
    /// A direction vector must be nonzero.
    ZeroVector,
    /// The matrix does not have determinant ±1.
    NotUnimodular,
    /// `q` is not a prime power ≥ 2, or is beyond the supported range.
    NotPrimePower { q: u64 },
    DivisionByZero,
    /// The origin is not strictly interior to the polygon.
    OriginNotInterior,
    /// No equivalent polygon fits in the requested box.
    BoxTooSmall { required: u32, given: u32 },
    /// The polygon's bounding square exceeds `q - 2`.
    BoxTooBig { box_size: u32, q: u16 },
    EmptySubset,
    /// A point that was expected among the polygon's lattice points is not one.
    NotInPolygon { x: i64, y: i64 },
    /// An enumeration would exceed the configured budget.
    BudgetExceeded { needed: u128, budget: u128 },
    /// A generator matrix that must have full row rank does not.
    RankDeficient { rank: usize, k: usize },
    /// The classification store outgrew its configured budget.
    Resource { classes: usize, budget: usize },
    /// No best-known-distance entry for this `(q, n, k)`.
    MissingTableEntry { q: u16, n: u32, k: u32 },
    /// Malformed textual input.
    Parse { reason: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Dimension => write!(f, "points do not span a two-dimensional polygon"),
            Error::ZeroVector => write!(f, "direction vector must be nonzero"),
            Error::NotUnimodular => write!(f, "matrix determinant is not +1 or -1"),
            Error::NotPrimePower { q } => write!(f, "{q} is not a supported prime power"),
            Error::DivisionByZero => write!(f, "division by zero field element"),
            Error::OriginNotInterior => {
                write!(f, "origin is not strictly interior to the polygon")
            }
            Error::BoxTooSmall { required, given } => {
                write!(f, "polygon needs a box of size {required}, got {given}")
            }
            Error::BoxTooBig { box_size, q } => write!(
                f,
                "bounding square {box_size} exceeds q-2 = {} for q = {q}",
                q - 2
            ),
            Error::EmptySubset => write!(f, "point subset must be nonempty"),
            Error::NotInPolygon { x, y } => {
                write!(f, "({x}, {y}) is not a lattice point of the polygon")
            }
            Error::BudgetExceeded { needed, budget } => {
                write!(f, "enumeration needs {needed} steps, budget is {budget}")
            }
            Error::RankDeficient { rank, k } => {
                write!(f, "generator matrix has rank {rank} < k = {k}")
            }
            Error::Resource { classes, budget } => {
                write!(f, "class store reached {classes} entries, budget is {budget}")
            }
            Error::MissingTableEntry { q, n, k } => {
                write!(f, "no best-known entry for [{n}, {k}] over F_{q}")
            }
            Error::Parse { reason } => write!(f, "parse error: {reason}"),
        }
    }
}

impl core::error::Error for Error {}
