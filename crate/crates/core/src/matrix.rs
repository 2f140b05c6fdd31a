//! Exact arithmetic in PGL(2, Z).
//!
//! An element is a 2×2 integer matrix of determinant ±1 taken up to sign.
//! [`ProjectiveMatrix`] stores the representative whose first nonzero entry,
//! scanning `a, b, c, d`, is positive, so derived equality, ordering and
//! hashing all agree with equality in the quotient.
//!
//! Entries are `i64`. Products are formed in `i128` and narrowed with a
//! check, so any result that does not fit is reported as
//! [`ArithmeticError::Overflow`] instead of wrapping.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum ArithmeticError {
    #[error("determinant {0} is not +1 or -1")]
    BadDeterminant(i128),
    #[error("integer overflow in exact matrix arithmetic")]
    Overflow,
}

/// Determinant of an element; always +1 or -1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Determinant {
    Minus,
    Plus,
}

impl Determinant {
    pub fn value(self) -> i64 {
        match self {
            Determinant::Plus => 1,
            Determinant::Minus => -1,
        }
    }

    fn from_value(v: i128) -> Result<Self, ArithmeticError> {
        match v {
            1 => Ok(Determinant::Plus),
            -1 => Ok(Determinant::Minus),
            other => Err(ArithmeticError::BadDeterminant(other)),
        }
    }
}

impl std::ops::Mul for Determinant {
    type Output = Determinant;

    fn mul(self, rhs: Determinant) -> Determinant {
        if self == rhs {
            Determinant::Plus
        } else {
            Determinant::Minus
        }
    }
}

impl fmt::Display for Determinant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:+}", self.value())
    }
}

/// Order of an element. Torsion in PGL(2, Z) only reaches 1, 2 and 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OrderResult {
    Finite(u32),
    Infinite,
}

impl OrderResult {
    pub fn is_finite(self) -> bool {
        matches!(self, OrderResult::Finite(_))
    }
}

impl fmt::Display for OrderResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderResult::Finite(n) => write!(f, "{n}"),
            OrderResult::Infinite => f.write_str("infinite"),
        }
    }
}

/// Reduction of an element modulo 2, row-major `[[a, b], [c, d]]`.
///
/// Negation does not change the reduction, so this is well defined on the
/// quotient, and it commutes with conjugation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Mod2Matrix(pub [[u8; 2]; 2]);

impl Mod2Matrix {
    pub const IDENTITY: Mod2Matrix = Mod2Matrix([[1, 0], [0, 1]]);

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }
}

/// Sign-normalized element of PGL(2, Z), i.e. the function `(ax+b)/(cx+d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjectiveMatrix {
    a: i64,
    b: i64,
    c: i64,
    d: i64,
}

fn narrow(v: i128) -> Result<i64, ArithmeticError> {
    i64::try_from(v).map_err(|_| ArithmeticError::Overflow)
}

fn dot(x0: i64, y0: i64, x1: i64, y1: i64) -> Result<i128, ArithmeticError> {
    (x0 as i128 * y0 as i128)
        .checked_add(x1 as i128 * y1 as i128)
        .ok_or(ArithmeticError::Overflow)
}

impl ProjectiveMatrix {
    pub const IDENTITY: ProjectiveMatrix = ProjectiveMatrix {
        a: 1,
        b: 0,
        c: 0,
        d: 1,
    };

    /// Builds the canonical representative of `±[[a, b], [c, d]]`.
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self, ArithmeticError> {
        let det = a as i128 * d as i128 - b as i128 * c as i128;
        Determinant::from_value(det)?;
        let first = [a, b, c, d].into_iter().find(|&e| e != 0).unwrap_or(0);
        if first < 0 {
            // -i64::MIN does not fit
            Ok(ProjectiveMatrix {
                a: a.checked_neg().ok_or(ArithmeticError::Overflow)?,
                b: b.checked_neg().ok_or(ArithmeticError::Overflow)?,
                c: c.checked_neg().ok_or(ArithmeticError::Overflow)?,
                d: d.checked_neg().ok_or(ArithmeticError::Overflow)?,
            })
        } else {
            Ok(ProjectiveMatrix { a, b, c, d })
        }
    }

    /// Like [`ProjectiveMatrix::new`] for `i128` inputs; the normalized
    /// entries must fit in `i64`.
    pub fn from_i128(a: i128, b: i128, c: i128, d: i128) -> Result<Self, ArithmeticError> {
        let det = a
            .checked_mul(d)
            .zip(b.checked_mul(c))
            .and_then(|(ad, bc)| ad.checked_sub(bc))
            .ok_or(ArithmeticError::Overflow)?;
        Determinant::from_value(det)?;
        let first = [a, b, c, d].into_iter().find(|&e| e != 0).unwrap_or(0);
        let s = if first < 0 { -1 } else { 1 };
        Ok(ProjectiveMatrix {
            a: narrow(s * a)?,
            b: narrow(s * b)?,
            c: narrow(s * c)?,
            d: narrow(s * d)?,
        })
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn c(&self) -> i64 {
        self.c
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn entries(&self) -> [i64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }

    /// Largest absolute entry.
    pub fn max_abs_entry(&self) -> u64 {
        self.entries()
            .iter()
            .map(|e| e.unsigned_abs())
            .max()
            .unwrap_or(0)
    }

    /// Sum of absolute entries, as `u128` so it never overflows.
    pub fn abs_sum(&self) -> u128 {
        self.entries()
            .iter()
            .map(|e| e.unsigned_abs() as u128)
            .sum()
    }

    pub fn mul(&self, rhs: &ProjectiveMatrix) -> Result<ProjectiveMatrix, ArithmeticError> {
        let (l, r) = (self, rhs);
        Self::from_i128(
            dot(l.a, r.a, l.b, r.c)?,
            dot(l.a, r.b, l.b, r.d)?,
            dot(l.c, r.a, l.d, r.c)?,
            dot(l.c, r.b, l.d, r.d)?,
        )
    }

    /// Inverse via the adjugate `(d, -b, -c, a)`; the determinant is a unit.
    pub fn inverse(&self) -> Result<ProjectiveMatrix, ArithmeticError> {
        Self::from_i128(
            self.d as i128,
            -(self.b as i128),
            -(self.c as i128),
            self.a as i128,
        )
    }

    /// `P · M · P⁻¹` where `self` is `P`.
    pub fn conjugate(&self, m: &ProjectiveMatrix) -> Result<ProjectiveMatrix, ArithmeticError> {
        self.mul(m)?.mul(&self.inverse()?)
    }

    pub fn determinant(&self) -> Determinant {
        let det = self.a as i128 * self.d as i128 - self.b as i128 * self.c as i128;
        // Constructors reject anything else.
        Determinant::from_value(det).expect("determinant invariant")
    }

    /// `|a + d|`; the sign of the trace is not defined on the quotient.
    pub fn abs_trace(&self) -> u128 {
        (self.a as i128 + self.d as i128).unsigned_abs()
    }

    /// Order from the trace/determinant criterion.
    ///
    /// For det -1 the square has trace `t² + 2`, so only `t = 0` is torsion.
    /// For det +1 the elliptic traces are 0 and 1; trace 2 is parabolic
    /// unless the element is the identity.
    pub fn order(&self) -> OrderResult {
        if self.is_identity() {
            return OrderResult::Finite(1);
        }
        match (self.determinant(), self.abs_trace()) {
            (_, 0) => OrderResult::Finite(2),
            (Determinant::Plus, 1) => OrderResult::Finite(3),
            _ => OrderResult::Infinite,
        }
    }

    pub fn mod2_image(&self) -> Mod2Matrix {
        let r = |e: i64| e.rem_euclid(2) as u8;
        Mod2Matrix([[r(self.a), r(self.b)], [r(self.c), r(self.d)]])
    }

    /// `self^exp` by repeated squaring.
    pub fn pow(&self, mut exp: u32) -> Result<ProjectiveMatrix, ArithmeticError> {
        let mut base = *self;
        let mut acc = Self::IDENTITY;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }
}

/// Free-function form of [`ProjectiveMatrix::new`].
pub fn normalize(a: i64, b: i64, c: i64, d: i64) -> Result<ProjectiveMatrix, ArithmeticError> {
    ProjectiveMatrix::new(a, b, c, d)
}

impl fmt::Display for ProjectiveMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

/// Named elements used throughout the crate.
pub mod named {
    use super::ProjectiveMatrix;

    const fn m(a: i64, b: i64, c: i64, d: i64) -> ProjectiveMatrix {
        ProjectiveMatrix { a, b, c, d }
    }

    /// `x`
    pub const IDENTITY: ProjectiveMatrix = m(1, 0, 0, 1);
    /// `-x`
    pub const NEG: ProjectiveMatrix = m(1, 0, 0, -1);
    /// `1/x`
    pub const INV: ProjectiveMatrix = m(0, 1, 1, 0);
    /// `-1/x`
    pub const NEG_INV: ProjectiveMatrix = m(0, 1, -1, 0);
    /// `-1/(x+1)`
    pub const ROT3: ProjectiveMatrix = m(0, 1, -1, -1);
    /// `(-x-1)/x`, the square of [`ROT3`]
    pub const ROT3_SQ: ProjectiveMatrix = m(1, 1, -1, 0);
    /// `-x/(x+1)`
    pub const NEG_X_OVER_X_PLUS_1: ProjectiveMatrix = m(1, 0, -1, -1);
    /// `-x-1`
    pub const NEG_X_MINUS_1: ProjectiveMatrix = m(1, 1, 0, -1);
    /// `x+1`
    pub const SHIFT: ProjectiveMatrix = m(1, 1, 0, 1);
    /// `x-1`
    pub const SHIFT_INV: ProjectiveMatrix = m(1, -1, 0, 1);
}
