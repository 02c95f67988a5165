//! Arbitrary-precision rationals and the exact helpers built on them.
//!
//! [`Rat`] wraps `num_rational::BigRational`; every value is kept in lowest
//! terms with a positive denominator. The helpers here are the pieces of
//! exact number theory the rest of the crate leans on: rising factorials,
//! lcms of arithmetic progressions, denominator lcms, prime factorization,
//! projective heights, and the denominator measure
//! μ(x) = ∏_{q | den(x)} q^{q/(q-1)}.

use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bigfloat::BigFloat;
use crate::{Error, Result};

/// Exact rational number in lowest terms with positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rat(BigRational);

impl Rat {
    pub fn zero() -> Self {
        Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Rat(BigRational::one())
    }

    /// The integer `n` as a rational.
    pub fn int(n: i64) -> Self {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Rat(BigRational::from_integer(n))
    }

    /// `num/den`, rejecting a zero denominator.
    pub fn new(num: BigInt, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero {
                operation: "Rat::new",
                detail: format!("{num}/0"),
            });
        }
        Ok(Rat(BigRational::new(num, den)))
    }

    /// `n/d` from machine integers. Panics on `d == 0`; use [`Rat::new`]
    /// for fallible construction.
    pub fn frac(n: i64, d: i64) -> Self {
        assert!(d != 0, "Rat::frac with zero denominator");
        Rat(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// True when the value is an integer `< 0`.
    pub fn is_negative_integer(&self) -> bool {
        self.is_integer() && self.is_negative()
    }

    pub fn abs(&self) -> Self {
        Rat(self.0.abs())
    }

    /// -1, 0, or 1.
    pub fn signum(&self) -> i32 {
        if self.0.is_zero() {
            0
        } else if self.0.is_negative() {
            -1
        } else {
            1
        }
    }

    /// Multiplicative inverse; rejects zero.
    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero {
                operation: "Rat::recip",
                detail: "reciprocal of zero".into(),
            });
        }
        Ok(Rat(self.0.recip()))
    }

    /// `self^e` by binary exponentiation.
    pub fn pow(&self, e: usize) -> Self {
        let mut base = self.clone();
        let mut acc = Rat::one();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Product with an integer.
    pub fn mul_big(&self, k: &BigInt) -> Self {
        Rat(&self.0 * BigRational::from_integer(k.clone()))
    }

    /// Largest integer `<= self`.
    pub fn floor_bigint(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    /// Nearest `f64`; loses precision by design, used only for coarse
    /// first-pass ranking, never for verdicts.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Rat {
    type Err = Error;

    /// Parses `"a/b"` or a bare integer `"a"`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parse_int = |part: &str| -> Result<BigInt> {
            part.trim().parse::<BigInt>().map_err(|e| Error::RatParse {
                input: s.to_string(),
                reason: e.to_string(),
            })
        };
        match s.split_once('/') {
            None => Ok(Rat::from_bigint(parse_int(s)?)),
            Some((num, den)) => {
                let num = parse_int(num)?;
                let den = parse_int(den)?;
                if den.is_zero() {
                    return Err(Error::RatParse {
                        input: s.to_string(),
                        reason: "zero denominator".into(),
                    });
                }
                Ok(Rat(BigRational::new(num, den)))
            }
        }
    }
}

impl Serialize for Rat {
    /// Always the explicit `"num/den"` form, so output is self-describing.
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&format!("{}/{}", self.0.numer(), self.0.denom()))
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! impl_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat((self.0).$method(rhs.0))
            }
        }
        impl $trait<&Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<&Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat((self.0).$method(&rhs.0))
            }
        }
        impl $trait<Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat((&self.0).$method(rhs.0))
            }
        }
    };
}

impl_binop!(Add, add);
impl_binop!(Sub, sub);
impl_binop!(Mul, mul);

impl Div for Rat {
    type Output = Rat;
    fn div(self, rhs: Rat) -> Rat {
        &self / &rhs
    }
}

impl Div<&Rat> for &Rat {
    type Output = Rat;
    /// Panics on a zero divisor; use [`Rat::recip`] where the divisor is
    /// data-dependent.
    fn div(self, rhs: &Rat) -> Rat {
        assert!(!rhs.is_zero(), "Rat division by zero");
        Rat(&self.0 / &rhs.0)
    }
}

impl Div<&Rat> for Rat {
    type Output = Rat;
    fn div(self, rhs: &Rat) -> Rat {
        &self / rhs
    }
}

impl Div<Rat> for &Rat {
    type Output = Rat;
    fn div(self, rhs: Rat) -> Rat {
        self / &rhs
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

impl AddAssign<&Rat> for Rat {
    fn add_assign(&mut self, rhs: &Rat) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rat> for Rat {
    fn sub_assign(&mut self, rhs: &Rat) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&Rat> for Rat {
    fn mul_assign(&mut self, rhs: &Rat) {
        self.0 *= &rhs.0;
    }
}

impl DivAssign<&Rat> for Rat {
    fn div_assign(&mut self, rhs: &Rat) {
        assert!(!rhs.is_zero(), "Rat division by zero");
        self.0 /= &rhs.0;
    }
}

/// `n!` as a big integer.
pub fn factorial(n: usize) -> BigInt {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    acc
}

/// Binomial coefficient `C(n, k)`.
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Rising factorial `(a)_n = a (a+1) ... (a+n-1)`, with `(a)_0 = 1`.
pub fn rising_factorial(a: &Rat, n: usize) -> Rat {
    let mut acc = Rat::one();
    for i in 0..n {
        acc = &acc * &(a + &Rat::int(i as i64));
    }
    acc
}

/// Lcm of the denominators of `values`; 1 for an empty slice.
pub fn denominator_lcm(values: &[Rat]) -> BigInt {
    let mut acc = BigInt::one();
    for v in values {
        acc = acc.lcm(v.denom());
    }
    acc
}

/// Lcm of the arithmetic progression `a, a+b, ..., a+b*last`, skipping any
/// zero term. Rejects `b <= 0`.
pub fn progression_lcm(a: &BigInt, b: &BigInt, last: usize) -> Result<BigInt> {
    if b <= &BigInt::zero() {
        return Err(Error::InvalidArgument {
            operation: "progression_lcm",
            reason: format!("step {b} must be >= 1"),
        });
    }
    let mut acc = BigInt::one();
    let mut term = a.clone();
    for _ in 0..=last {
        if !term.is_zero() {
            acc = acc.lcm(&term);
        }
        term += b;
    }
    Ok(acc.abs())
}

/// Prime factorization by trial division, smallest prime first.
pub fn prime_factorization(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut n = n.abs();
    let mut out = Vec::new();
    if n <= BigInt::one() {
        return out;
    }
    let mut push = |p: &BigInt, n: &mut BigInt| {
        let mut e = 0u32;
        while (&*n % p).is_zero() {
            *n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p.clone(), e));
        }
    };
    let two = BigInt::from(2);
    push(&two, &mut n);
    let mut p = BigInt::from(3);
    while &p * &p <= n {
        push(&p, &mut n);
        p += 2;
    }
    if n > BigInt::one() {
        out.push((n, 1));
    }
    out
}

/// Sup norm `max_i |v_i|`; 0 for an empty slice.
pub fn norm_sup(values: &[Rat]) -> Rat {
    let mut best = Rat::zero();
    for v in values {
        let a = v.abs();
        if a > best {
            best = a;
        }
    }
    best
}

/// Primitive integer coordinates of the projective point spanned by
/// `coords`: denominators cleared, common factor removed. The overall sign
/// is normalized so the first nonzero coordinate is positive. Rejects the
/// zero vector.
pub fn primitive_coords(coords: &[Rat]) -> Result<Vec<BigInt>> {
    if coords.iter().all(|c| c.is_zero()) {
        return Err(Error::InvalidArgument {
            operation: "primitive_coords",
            reason: "all coordinates are zero".into(),
        });
    }
    let scale = denominator_lcm(coords);
    let mut ints: Vec<BigInt> = coords
        .iter()
        .map(|c| c.numer() * (&scale / c.denom()))
        .collect();
    let mut g = BigInt::zero();
    for v in &ints {
        g = g.gcd(v);
    }
    for v in &mut ints {
        *v /= &g;
    }
    if ints
        .iter()
        .find(|v| !v.is_zero())
        .is_some_and(|v| v.is_negative())
    {
        for v in &mut ints {
            *v = -&*v;
        }
    }
    Ok(ints)
}

/// Absolute logarithmic Weil height of the projective point with the given
/// coordinates: `log max_i |c_i|` over the primitive integer coordinates.
pub fn projective_height(coords: &[Rat], precision_bits: u32) -> Result<BigFloat> {
    let ints = primitive_coords(coords)?;
    let max = ints
        .iter()
        .map(|v| v.abs())
        .max()
        .expect("nonempty by primitive_coords");
    BigFloat::ln_rat(&Rat::from_bigint(max), precision_bits)
}

/// `log μ(x)` where `μ(x) = ∏_{q | den(x)} q^{q/(q-1)}` over the primes `q`
/// dividing the denominator of `x`. Zero when `x` is an integer.
pub fn log_mu(x: &Rat, precision_bits: u32) -> Result<BigFloat> {
    let mut acc = BigFloat::zero(precision_bits);
    for (q, _) in prime_factorization(x.denom()) {
        let log_q = BigFloat::ln_rat(&Rat::from_bigint(q.clone()), precision_bits)?;
        let weight = Rat::new(q.clone(), &q - BigInt::one())?;
        acc = acc.add(&log_q.mul_rat(&weight));
    }
    Ok(acc)
}
