//! Exact arithmetic in the ordered field Q(sqrt 2).
//!
//! Every coordinate in the crate is a value `a + b*sqrt(2)` with `a`, `b`
//! arbitrary-precision rationals. Sign, order, integrality and rationality
//! tests are exact: the sign of `a + b*sqrt(2)` is decided by comparing
//! `a^2` against `2 b^2` with sign bookkeeping, never by approximation.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

/// An element `a + b*sqrt(2)` of Q(sqrt 2).
#[derive(Clone, PartialEq, Eq)]
pub struct Scalar {
    a: BigRational,
    b: BigRational,
}

impl Scalar {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        Scalar { a, b }
    }

    pub fn zero() -> Self {
        Scalar::new(BigRational::zero(), BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::new(BigRational::one(), BigRational::zero())
    }

    /// The generator sqrt(2).
    pub fn sqrt2() -> Self {
        Scalar::new(BigRational::zero(), BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
    }

    pub fn from_rational(r: BigRational) -> Self {
        Scalar::new(r, BigRational::zero())
    }

    /// Rational number p/q; panics if q = 0.
    pub fn from_frac(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        Scalar::from_rational(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    /// Rational part `a`.
    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    /// Irrational part `b` (coefficient of sqrt 2).
    pub fn sqrt2_part(&self) -> &BigRational {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// True iff the value lies in Q.
    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// True iff the value lies in Z.
    pub fn is_integer(&self) -> bool {
        self.b.is_zero() && self.a.is_integer()
    }

    /// The value as an integer, when it is one.
    pub fn to_integer(&self) -> Option<BigInt> {
        if self.is_integer() {
            Some(self.a.to_integer())
        } else {
            None
        }
    }

    pub fn to_i64(&self) -> Option<i64> {
        use num_traits::ToPrimitive;
        self.to_integer().and_then(|n| n.to_i64())
    }

    /// Exact sign: -1, 0 or +1.
    ///
    /// `a + b*sqrt(2) > 0` with mixed signs reduces to comparing `a^2`
    /// against `2 b^2` on the side that is positive.
    pub fn signum(&self) -> i32 {
        let sa = rational_sign(&self.a);
        let sb = rational_sign(&self.b);
        match (sa, sb) {
            (0, 0) => 0,
            (s, 0) => s,
            (0, s) => s,
            (1, 1) => 1,
            (-1, -1) => -1,
            (1, -1) => {
                // a > 0 > b*sqrt2: positive iff a^2 > 2 b^2
                cmp_sq(&self.a, &self.b)
            }
            (-1, 1) => -cmp_sq(&self.a, &self.b),
            _ => unreachable!(),
        }
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "division by zero in Q(sqrt2)");
        // 1/(a+b s) = (a-b s)/(a^2-2 b^2); nonzero denominator since sqrt2 is irrational
        let norm = &self.a * &self.a - BigRational::from_integer(BigInt::from(2)) * &self.b * &self.b;
        Scalar::new(&self.a / &norm, -&self.b / &norm)
    }

    /// Galois conjugate `a - b*sqrt(2)`.
    pub fn conjugate(&self) -> Self {
        Scalar::new(self.a.clone(), -self.b.clone())
    }

    pub fn scale_rat(&self, r: &BigRational) -> Self {
        Scalar::new(&self.a * r, &self.b * r)
    }
}

fn rational_sign(r: &BigRational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

/// Sign of |a| - |b|*sqrt2 assuming a > 0 (compare a^2 with 2 b^2).
fn cmp_sq(a: &BigRational, b: &BigRational) -> i32 {
    let a2 = a * a;
    let b2 = BigRational::from_integer(BigInt::from(2)) * b * b;
    match a2.cmp(&b2) {
        Ordering::Greater => 1,
        Ordering::Equal => 0,
        Ordering::Less => -1,
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.clone() - other.clone()).signum() {
            1 => Ordering::Greater,
            0 => Ordering::Equal,
            -1 => Ordering::Less,
            _ => unreachable!(),
        }
    }
}

impl Hash for Scalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.a.hash(state);
        self.b.hash(state);
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        Scalar::new(self.a + rhs.a, self.b + rhs.b)
    }
}

impl<'a> Add<&'a Scalar> for Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar::new(self.a + &rhs.a, self.b + &rhs.b)
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        Scalar::new(self.a - rhs.a, self.b - rhs.b)
    }
}

impl<'a> Sub<&'a Scalar> for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        Scalar::new(self.a - &rhs.a, self.b - &rhs.b)
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        // (a + b s)(c + d s) = (ac + 2bd) + (ad + bc) s
        let two = BigRational::from_integer(BigInt::from(2));
        Scalar::new(
            &self.a * &rhs.a + two * &self.b * &rhs.b,
            &self.a * &rhs.b + &self.b * &rhs.a,
        )
    }
}

impl<'a> Mul<&'a Scalar> for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self * rhs.clone()
    }
}

impl Div for Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        self * rhs.inv()
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::new(-self.a, -self.b)
    }
}

impl AddAssign for Scalar {
    fn add_assign(&mut self, rhs: Scalar) {
        self.a += rhs.a;
        self.b += rhs.b;
    }
}

impl SubAssign for Scalar {
    fn sub_assign(&mut self, rhs: Scalar) {
        self.a -= rhs.a;
        self.b -= rhs.b;
    }
}

impl MulAssign for Scalar {
    fn mul_assign(&mut self, rhs: Scalar) {
        *self = self.clone() * rhs;
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.a.is_zero() {
            write!(f, "{}*t", self.b)
        } else {
            write!(f, "{}+{}*t", self.a, self.b)
        }
    }
}

/// Parse `p` or `p/q` (q > 0) into a rational.
pub fn parse_rational(s: &str) -> crate::error::Result<BigRational> {
    let s = s.trim();
    let parse_int = |t: &str| -> crate::error::Result<BigInt> {
        t.parse::<BigInt>()
            .map_err(|_| crate::error::Error::Parse(format!("bad integer `{t}`")))
    };
    match s.split_once('/') {
        None => Ok(BigRational::from_integer(parse_int(s)?)),
        Some((p, q)) => {
            let p = parse_int(p)?;
            let q = parse_int(q)?;
            if q <= BigInt::zero() {
                return Err(crate::error::Error::Parse(format!(
                    "denominator must be positive in `{s}`"
                )));
            }
            Ok(BigRational::new(p, q))
        }
    }
}

/// Format a rational as `p` or `p/q`.
pub fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.to_integer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
