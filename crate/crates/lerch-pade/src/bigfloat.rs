//! Fixed-point interval arithmetic with rigorous error bounds.
//!
//! A [`BigFloat`] stores an arbitrary-precision mantissa at scale
//! `2^-precision_bits` together with an absolute error bound in units of
//! the last place. The represented real number is guaranteed to lie in
//! `[(mant - err) / 2^p, (mant + err) / 2^p]`. All operations round the
//! mantissa and grow the bound accordingly, so no value ever claims more
//! accuracy than it has. Transcendental functions (ln, exp, π) come from
//! argument-reduced series whose truncated tails are folded into the bound.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::rat::Rat;
use crate::{Error, Result};

/// Default working precision in bits.
pub const DEFAULT_PRECISION_BITS: u32 = 128;

/// Interval value `mant / 2^prec` with absolute error `err / 2^prec`.
#[derive(Clone, PartialEq, Eq)]
pub struct BigFloat {
    mant: BigInt,
    err: BigInt,
    prec: u32,
}

/// Rounded division `a / b` to the nearest integer, requiring `b > 0`.
fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    debug_assert!(b.is_positive());
    let two = BigInt::from(2);
    (a * &two + b).div_floor(&(b * &two))
}

/// Ceiling division for nonnegative operands.
fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    debug_assert!(!a.is_negative() && b.is_positive());
    (a + b - BigInt::one()).div_floor(b)
}

impl BigFloat {
    pub fn zero(precision_bits: u32) -> Self {
        BigFloat {
            mant: BigInt::zero(),
            err: BigInt::zero(),
            prec: precision_bits,
        }
    }

    pub fn from_int(n: i64, precision_bits: u32) -> Self {
        BigFloat {
            mant: BigInt::from(n) << precision_bits,
            err: BigInt::zero(),
            prec: precision_bits,
        }
    }

    /// Rounds `r` to the grid; the bound is zero when `r` is exactly
    /// representable (denominator a power of two within range).
    pub fn from_rat(r: &Rat, precision_bits: u32) -> Self {
        let scaled_num = r.numer() << precision_bits;
        let mant = round_div(&scaled_num, r.denom());
        let exact = (&scaled_num % r.denom()).is_zero();
        BigFloat {
            mant,
            err: if exact { BigInt::zero() } else { BigInt::one() },
            prec: precision_bits,
        }
    }

    /// Interval from explicit rational endpoints `lo <= hi`.
    pub fn from_interval(lo: &Rat, hi: &Rat, precision_bits: u32) -> Self {
        assert!(lo <= hi, "from_interval: lo > hi");
        let a = BigFloat::from_rat(lo, precision_bits);
        let b = BigFloat::from_rat(hi, precision_bits);
        a.hull(&b)
    }

    pub fn precision_bits(&self) -> u32 {
        self.prec
    }

    /// Exact rational lower endpoint `(mant - err) / 2^p`.
    pub fn lower_bound(&self) -> Rat {
        Rat::new(&self.mant - &self.err, BigInt::one() << self.prec).expect("power of two")
    }

    /// Exact rational upper endpoint `(mant + err) / 2^p`.
    pub fn upper_bound(&self) -> Rat {
        Rat::new(&self.mant + &self.err, BigInt::one() << self.prec).expect("power of two")
    }

    /// Exact rational bound on `|value|`.
    pub fn abs_upper_bound(&self) -> Rat {
        Rat::new(self.mant.abs() + &self.err, BigInt::one() << self.prec).expect("power of two")
    }

    /// Width of the error interval as an exact rational, `2 err / 2^p`.
    pub fn error_width(&self) -> Rat {
        Rat::new(&self.err * 2, BigInt::one() << self.prec).expect("power of two")
    }

    pub fn is_exactly_zero(&self) -> bool {
        self.mant.is_zero() && self.err.is_zero()
    }

    /// The whole interval lies strictly above zero.
    pub fn is_certainly_positive(&self) -> bool {
        self.mant > self.err
    }

    /// The whole interval lies strictly below zero.
    pub fn is_certainly_negative(&self) -> bool {
        self.mant < -self.err.clone()
    }

    /// The interval admits zero.
    pub fn contains_zero(&self) -> bool {
        self.mant.abs() <= self.err
    }

    /// Every point of `self` is below every point of `other`.
    pub fn is_certainly_below(&self, other: &BigFloat) -> bool {
        self.upper_bound() < other.lower_bound()
    }

    /// Change the grid; widening precision is exact, narrowing rounds.
    pub fn with_precision(&self, precision_bits: u32) -> Self {
        if precision_bits >= self.prec {
            let shift = precision_bits - self.prec;
            BigFloat {
                mant: &self.mant << shift,
                err: &self.err << shift,
                prec: precision_bits,
            }
        } else {
            let shift = self.prec - precision_bits;
            let unit = BigInt::one() << shift;
            let rounding = if (&self.mant % &unit).is_zero() {
                BigInt::zero()
            } else {
                BigInt::one()
            };
            BigFloat {
                mant: round_div(&self.mant, &unit),
                err: ceil_div(&self.err, &unit) + rounding,
                prec: precision_bits,
            }
        }
    }

    fn aligned(&self, other: &BigFloat) -> (BigFloat, BigFloat) {
        let p = self.prec.max(other.prec);
        (self.with_precision(p), other.with_precision(p))
    }

    pub fn add(&self, other: &BigFloat) -> Self {
        let (a, b) = self.aligned(other);
        BigFloat {
            mant: a.mant + b.mant,
            err: a.err + b.err,
            prec: a.prec,
        }
    }

    pub fn sub(&self, other: &BigFloat) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        BigFloat {
            mant: -&self.mant,
            err: self.err.clone(),
            prec: self.prec,
        }
    }

    /// `|value|`; valid because absolute value is 1-Lipschitz.
    pub fn abs(&self) -> Self {
        BigFloat {
            mant: self.mant.abs(),
            err: self.err.clone(),
            prec: self.prec,
        }
    }

    /// Widens the error bound by the exact amount `extra >= 0`.
    pub fn widened(&self, extra: &Rat) -> Self {
        assert!(!extra.is_negative(), "widened: negative padding");
        let scaled = extra.numer() << self.prec;
        BigFloat {
            mant: self.mant.clone(),
            err: &self.err + ceil_div(&scaled, extra.denom()),
            prec: self.prec,
        }
    }

    pub fn mul(&self, other: &BigFloat) -> Self {
        let (a, b) = self.aligned(other);
        let unit = BigInt::one() << a.prec;
        let mant = round_div(&(&a.mant * &b.mant), &unit);
        let raw = a.mant.abs() * &b.err + b.mant.abs() * &a.err + &a.err * &b.err;
        BigFloat {
            mant,
            err: ceil_div(&raw, &unit) + 1,
            prec: a.prec,
        }
    }

    /// Exact multiplication by a rational up to one final rounding.
    pub fn mul_rat(&self, r: &Rat) -> Self {
        let num = r.numer();
        let den = r.denom();
        let mant = round_div(&(&self.mant * num), den);
        BigFloat {
            mant,
            err: ceil_div(&(&self.err * num.abs()), den) + 1,
            prec: self.prec,
        }
    }

    pub fn mul_int(&self, k: i64) -> Self {
        BigFloat {
            mant: &self.mant * k,
            err: &self.err * k.abs(),
            prec: self.prec,
        }
    }

    /// Exact scaling by `2^k`.
    pub fn mul_pow2(&self, k: i64) -> Self {
        if k >= 0 {
            BigFloat {
                mant: &self.mant << k as u32,
                err: &self.err << k as u32,
                prec: self.prec,
            }
        } else {
            let unit = BigInt::one() << (-k) as u32;
            BigFloat {
                mant: round_div(&self.mant, &unit),
                err: ceil_div(&self.err, &unit) + 1,
                prec: self.prec,
            }
        }
    }

    /// Interval division; rejects a divisor whose interval admits zero.
    pub fn div(&self, other: &BigFloat) -> Result<Self> {
        let (a, b) = self.aligned(other);
        if b.contains_zero() {
            return Err(Error::DivisionByZero {
                operation: "BigFloat::div",
                detail: "divisor interval contains zero".into(),
            });
        }
        let b_abs = b.mant.abs();
        let num = if b.mant.is_negative() {
            -(&a.mant) << a.prec
        } else {
            &a.mant << a.prec
        };
        let mant = round_div(&num, &b_abs);
        let raw = (&a.err * &b_abs + a.mant.abs() * &b.err) << a.prec;
        let denom = &b_abs * (&b_abs - &b.err);
        BigFloat {
            mant,
            err: ceil_div(&raw, &denom) + 1,
            prec: a.prec,
        }
        .pipe_ok()
    }

    pub fn div_int(&self, k: i64) -> Result<Self> {
        if k == 0 {
            return Err(Error::DivisionByZero {
                operation: "BigFloat::div_int",
                detail: "zero integer divisor".into(),
            });
        }
        let kk = BigInt::from(k.abs());
        let mant = round_div(&self.mant, &kk);
        let res = BigFloat {
            mant: if k < 0 { -mant } else { mant },
            err: ceil_div(&self.err, &kk) + 1,
            prec: self.prec,
        };
        Ok(res)
    }

    fn pipe_ok(self) -> Result<Self> {
        Ok(self)
    }

    /// Smallest interval containing both operands.
    pub fn hull(&self, other: &BigFloat) -> Self {
        let (a, b) = self.aligned(other);
        let lo = (&a.mant - &a.err).min(&b.mant - &b.err);
        let hi = (&a.mant + &a.err).max(&b.mant + &b.err);
        let two = BigInt::from(2);
        BigFloat {
            mant: round_div(&(&lo + &hi), &two),
            err: ceil_div(&(&hi - &lo), &two) + 1,
            prec: a.prec,
        }
    }

    /// `ln 2` to the given precision.
    pub fn ln2(precision_bits: u32) -> Self {
        // ln 2 = 2 atanh(1/3)
        let wp = precision_bits + 48;
        atanh_small(&Rat::frac(1, 3), wp)
            .mul_int(2)
            .with_precision(precision_bits)
    }

    /// Natural logarithm of a positive rational.
    pub fn ln_rat(r: &Rat, precision_bits: u32) -> Result<Self> {
        if !r.is_positive() {
            return Err(Error::InvalidArgument {
                operation: "BigFloat::ln_rat",
                reason: format!("argument {r} must be positive"),
            });
        }
        let wp = precision_bits + 48;
        // r = 2^k s with s in [1, 2), then ln s = 2 atanh((s-1)/(s+1))
        let k = (r.numer().bits() as i64) - (r.denom().bits() as i64);
        let mut k = k;
        let pow2 = |e: i64| -> Rat {
            if e >= 0 {
                Rat::from_bigint(BigInt::one() << e as u32)
            } else {
                Rat::new(BigInt::one(), BigInt::one() << (-e) as u32).expect("power of two")
            }
        };
        let mut s = r / &pow2(k);
        if s < Rat::one() {
            k -= 1;
            s = &s * &Rat::int(2);
        }
        debug_assert!(s >= Rat::one() && s < Rat::int(2));
        let u = &(&s - &Rat::one()) / &(&s + &Rat::one());
        let ln_s = atanh_small(&u, wp).mul_int(2);
        let total = if k == 0 {
            ln_s
        } else {
            let wide_ln2 = atanh_small(&Rat::frac(1, 3), wp).mul_int(2);
            ln_s.add(&wide_ln2.mul_int(k))
        };
        Ok(total.with_precision(precision_bits))
    }

    /// `ln` of a positive interval given by exact rational endpoints.
    pub fn ln_interval(lo: &Rat, hi: &Rat, precision_bits: u32) -> Result<Self> {
        if !lo.is_positive() {
            return Err(Error::InvalidArgument {
                operation: "BigFloat::ln_interval",
                reason: format!("lower endpoint {lo} must be positive"),
            });
        }
        let a = BigFloat::ln_rat(lo, precision_bits)?;
        let b = BigFloat::ln_rat(hi, precision_bits)?;
        Ok(a.hull(&b))
    }

    /// `exp` of the interval.
    pub fn exp(&self) -> Result<Self> {
        let prec = self.prec;
        let wp = prec + 64;
        let x = self.with_precision(wp);
        // n = nearest integer to x / ln 2; correctness does not depend on
        // the f64 estimate, only the size of the reduced argument does.
        let approx = x.mant.to_f64().unwrap_or(0.0) / 2f64.powi(wp as i32);
        let n_est = (approx / std::f64::consts::LN_2).round();
        if !n_est.is_finite() || n_est.abs() > 1e9 {
            return Err(Error::InvalidArgument {
                operation: "BigFloat::exp",
                reason: "argument magnitude out of supported range".into(),
            });
        }
        let n = n_est as i64;
        let wide_ln2 = atanh_small(&Rat::frac(1, 3), wp + 16)
            .mul_int(2)
            .with_precision(wp);
        let y = x.sub(&wide_ln2.mul_int(n));
        if y.abs_upper_bound() > Rat::frac(3, 4) {
            return Err(Error::Undecidable {
                operation: "BigFloat::exp",
                bits: prec,
                detail: "range reduction failed; argument interval too wide".into(),
            });
        }
        // Taylor sum of exp(y) for |y| <= 3/4
        let mut sum = BigFloat::from_int(1, wp);
        let mut term = BigFloat::from_int(1, wp);
        let cutoff = Rat::new(BigInt::one(), BigInt::one() << (wp - 2)).expect("power of two");
        let mut k: i64 = 1;
        loop {
            term = term.mul(&y).div_int(k)?;
            sum = sum.add(&term);
            let bound = term.abs_upper_bound();
            if bound < cutoff && k as f64 > 2.0 {
                // ratio of consecutive terms is below 3/8, so the tail is
                // below term * (3/8)/(1 - 3/8) < term
                sum.err += BigInt::one() + BigInt::one();
                break;
            }
            k += 1;
            if k > 10_000 {
                return Err(Error::Undecidable {
                    operation: "BigFloat::exp",
                    bits: prec,
                    detail: "series failed to converge".into(),
                });
            }
        }
        Ok(sum.mul_pow2(n).with_precision(prec))
    }

    /// π to the given precision, by Machin's formula.
    pub fn pi(precision_bits: u32) -> Self {
        let wp = precision_bits + 48;
        let a = atan_inv_int(5, wp).mul_int(16);
        let b = atan_inv_int(239, wp).mul_int(4);
        a.sub(&b).with_precision(precision_bits)
    }

    /// Decimal rendering with at most `sig_digits` significant digits.
    /// Display rounding stays inside the carried error bound only if the
    /// caller prints the bound alongside; [`BigFloat::error_decimal`] gives
    /// a matching upper bound that covers the display rounding too.
    pub fn decimal(&self, sig_digits: usize) -> String {
        decimal_of_scaled(&self.mant, self.prec, sig_digits, false)
    }

    /// Upper bound on the total error (carried bound plus display rounding
    /// at `sig_digits` digits), rounded up, in scientific notation.
    pub fn error_decimal(&self, sig_digits: usize) -> String {
        let display_round = display_rounding_ulps(&self.mant, self.prec, sig_digits);
        let total = &self.err + display_round;
        if total.is_zero() {
            return "0".to_string();
        }
        decimal_of_scaled(&total, self.prec, 2, true)
    }
}

impl fmt::Debug for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "BigFloat({} ± {}, {} bits)",
            self.decimal(30),
            self.error_decimal(30),
            self.prec
        )
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.decimal(40))
    }
}

impl Serialize for BigFloat {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("BigFloat", 3)?;
        s.serialize_field("value", &self.decimal(40))?;
        s.serialize_field("error_bound", &self.error_decimal(40))?;
        s.serialize_field("precision_bits", &self.prec)?;
        s.end()
    }
}

/// atanh by Taylor series for `0 <= u <= 0.35`, with the truncated tail in
/// the bound.
fn atanh_small(u: &Rat, wp: u32) -> BigFloat {
    debug_assert!(u.abs() <= Rat::frac(35, 100));
    if u.is_zero() {
        return BigFloat::zero(wp);
    }
    let uf = BigFloat::from_rat(u, wp);
    let usq = uf.mul(&uf);
    let mut term = uf.clone();
    let mut sum = BigFloat::zero(wp);
    let cutoff = Rat::new(BigInt::one(), BigInt::one() << (wp - 2)).expect("power of two");
    let mut j: i64 = 0;
    loop {
        sum = sum.add(&term.div_int(2 * j + 1).expect("odd divisor"));
        term = term.mul(&usq);
        if term.abs_upper_bound() < cutoff {
            // ratio u^2 <= 1/8, so tail < term * 8/7 < 2 * term
            sum.err += BigInt::from(2);
            break;
        }
        j += 1;
        assert!(j < 1_000_000, "atanh series runaway");
    }
    sum
}

/// arctan(1/c) for an integer `c >= 2` by the alternating series.
fn atan_inv_int(c: u64, wp: u32) -> BigFloat {
    let unit = BigInt::one() << wp;
    let c = BigInt::from(c);
    let csq = &c * &c;
    let mut pow = c.clone();
    let mut mant = BigInt::zero();
    let mut j: u64 = 0;
    let mut terms: u64 = 0;
    loop {
        let denom = &pow * BigInt::from(2 * j + 1);
        let term = round_div(&unit, &denom);
        if term.is_zero() {
            break;
        }
        if j % 2 == 0 {
            mant += &term;
        } else {
            mant -= &term;
        }
        pow *= &csq;
        j += 1;
        terms += 1;
    }
    BigFloat {
        mant,
        // one rounding ulp per term plus the first omitted term (< 1 ulp)
        err: BigInt::from(terms + 2),
        prec: wp,
    }
}

/// Ulps of display rounding committed when printing `mant / 2^p` with the
/// given number of significant digits.
fn display_rounding_ulps(mant: &BigInt, prec: u32, sig_digits: usize) -> BigInt {
    if mant.is_zero() {
        return BigInt::zero();
    }
    // printing D significant digits rounds at the place 10^(E - D + 1),
    // where 10^E is the leading digit's place of the value mant/2^prec;
    // bound everything upward by powers of two
    let bits = mant.bits() as i64 - prec as i64;
    let e_max = ((bits as f64) * std::f64::consts::LOG10_2).ceil() as i64 + 1;
    let cut_exp = e_max - sig_digits as i64 + 1;
    if cut_exp < 0 {
        let denom_bits = ((-cut_exp) as f64 * std::f64::consts::LOG2_10).floor() as u64;
        if denom_bits >= prec as u64 {
            BigInt::one()
        } else {
            BigInt::one() << (prec as u64 - denom_bits)
        }
    } else {
        BigInt::one() << (prec as u64 + (cut_exp as f64 * std::f64::consts::LOG2_10).ceil() as u64)
    }
}

/// Decimal string for the exact rational `mant / 2^p`, `sig_digits`
/// significant digits, rounding to nearest (or away from zero when
/// `round_up`). Plain notation for moderate exponents, otherwise
/// scientific.
fn decimal_of_scaled(mant: &BigInt, prec: u32, sig_digits: usize, round_up: bool) -> String {
    if mant.is_zero() {
        return "0".to_string();
    }
    let neg = mant.is_negative();
    let a = mant.abs();
    let sig = sig_digits.max(1) as i64;
    // find E with 10^E <= a/2^p < 10^(E+1)
    let mut e = (((a.bits() as f64) - prec as f64) * std::f64::consts::LOG10_2).floor() as i64;
    let ten = BigInt::from(10);
    let pow10 = |k: i64| -> BigInt { ten.pow(k.unsigned_abs() as u32) };
    let scaled = |e: i64| -> BigInt {
        // digits = a * 10^(sig-1-e) / 2^p
        let shift_exp = sig - 1 - e;
        let (num, den) = if shift_exp >= 0 {
            (&a * pow10(shift_exp), BigInt::one() << prec)
        } else {
            (a.clone(), (BigInt::one() << prec) * pow10(shift_exp))
        };
        if round_up {
            ceil_div(&num, &den)
        } else {
            round_div(&num, &den)
        }
    };
    let mut digits = scaled(e);
    let lo = pow10(sig - 1);
    let hi = &lo * &ten;
    while digits >= hi {
        e += 1;
        digits = scaled(e);
    }
    while digits < lo {
        e -= 1;
        digits = scaled(e);
    }
    let ds = digits.to_string();
    debug_assert_eq!(ds.len(), sig as usize);
    let sign = if neg { "-" } else { "" };
    let body = if (-6..=20).contains(&e) {
        if e >= 0 {
            let (int_part, frac_part) = ds.split_at(((e + 1) as usize).min(ds.len()));
            let int_part = if (e + 1) as usize > ds.len() {
                format!("{}{}", ds, "0".repeat((e + 1) as usize - ds.len()))
            } else {
                int_part.to_string()
            };
            let frac_part = frac_part.trim_end_matches('0');
            if frac_part.is_empty() {
                int_part
            } else {
                format!("{int_part}.{frac_part}")
            }
        } else {
            let zeros = "0".repeat((-e - 1) as usize);
            let frac = format!("{zeros}{ds}");
            let frac = frac.trim_end_matches('0');
            format!("0.{frac}")
        }
    } else {
        let (first, rest) = ds.split_at(1);
        let rest = rest.trim_end_matches('0');
        if rest.is_empty() {
            format!("{first}e{e}")
        } else {
            format!("{first}.{rest}e{e}")
        }
    };
    format!("{sign}{body}")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat_pow10(k: u32) -> Rat {
        Rat::new(BigInt::one(), BigInt::from(10).pow(k)).unwrap()
    }

    fn assert_close_to(value: &BigFloat, decimal: &str, tol_exp: u32) {
        let reference: Rat = {
            // parse "d.ddd" into a rational
            let (int_part, frac_part) = decimal.split_once('.').unwrap();
            let n: BigInt = format!("{int_part}{frac_part}").parse().unwrap();
            Rat::new(n, BigInt::from(10).pow(frac_part.len() as u32)).unwrap()
        };
        let diff = value.sub(&BigFloat::from_rat(&reference, value.precision_bits()));
        assert!(
            diff.abs_upper_bound() < rat_pow10(tol_exp),
            "value {value:?} differs from {decimal} by more than 1e-{tol_exp}"
        );
    }

    #[test]
    fn exact_small_rationals() {
        let x = BigFloat::from_rat(&Rat::frac(3, 8), 64);
        assert_eq!(x.lower_bound(), Rat::frac(3, 8));
        assert_eq!(x.upper_bound(), Rat::frac(3, 8));
        let y = BigFloat::from_rat(&Rat::frac(1, 3), 64);
        assert!(y.error_width() > Rat::zero());
        assert!(y.error_width() < Rat::new(BigInt::one(), BigInt::one() << 60).unwrap());
    }

    #[test]
    fn interval_ordering_predicates() {
        let x = BigFloat::from_rat(&Rat::frac(1, 3), 96);
        assert!(x.is_certainly_positive());
        assert!(x.neg().is_certainly_negative());
        assert!(x.sub(&x).contains_zero());
        let y = BigFloat::from_rat(&Rat::frac(1, 2), 96);
        assert!(x.is_certainly_below(&y));
    }

    #[test]
    fn arithmetic_encloses_truth() {
        let a = BigFloat::from_rat(&Rat::frac(22, 7), 80);
        let b = BigFloat::from_rat(&Rat::frac(-5, 3), 80);
        let sum = a.add(&b);
        let truth = Rat::frac(22, 7) + Rat::frac(-5, 3);
        assert!(sum.lower_bound() <= truth && truth <= sum.upper_bound());
        let prod = a.mul(&b);
        let truth = Rat::frac(22, 7) * Rat::frac(-5, 3);
        assert!(prod.lower_bound() <= truth && truth <= prod.upper_bound());
        let quot = a.div(&b).unwrap();
        let truth = Rat::frac(22, 7) / Rat::frac(-5, 3);
        assert!(quot.lower_bound() <= truth && truth <= quot.upper_bound());
    }

    #[test]
    fn division_by_zero_interval_rejected() {
        let a = BigFloat::from_int(1, 64);
        let tiny = a.sub(&a); // interval around zero
        assert!(a.div(&tiny).is_err());
    }

    #[test]
    fn ln_two_reference() {
        let l = BigFloat::ln2(200);
        assert_close_to(&l, "0.69314718055994530941723212145817656807550013436025", 50);
    }

    #[test]
    fn ln_respects_identities() {
        let l2 = BigFloat::ln_rat(&Rat::int(2), 160).unwrap();
        let l4 = BigFloat::ln_rat(&Rat::int(4), 160).unwrap();
        let diff = l4.sub(&l2.mul_int(2));
        assert!(diff.abs_upper_bound() < rat_pow10(40));
        let l1 = BigFloat::ln_rat(&Rat::one(), 160).unwrap();
        assert!(l1.abs_upper_bound() < rat_pow10(40));
        let l10 = BigFloat::ln_rat(&Rat::int(10), 200).unwrap();
        assert_close_to(&l10, "2.30258509299404568401799145468436420760110148862877", 48);
        let l43 = BigFloat::ln_rat(&Rat::frac(4, 3), 200).unwrap();
        assert_close_to(&l43, "0.28768207245178092743921900599382743150350971089776", 48);
        assert!(BigFloat::ln_rat(&Rat::zero(), 64).is_err());
        assert!(BigFloat::ln_rat(&Rat::int(-3), 64).is_err());
    }

    #[test]
    fn pi_reference() {
        let p = BigFloat::pi(220);
        assert_close_to(&p, "3.14159265358979323846264338327950288419716939937510", 50);
    }

    #[test]
    fn exp_reference() {
        let e1 = BigFloat::from_int(1, 200).exp().unwrap();
        assert_close_to(&e1, "2.71828182845904523536028747135266249775724709369995", 48);
        // exp(ln 10) = 10
        let l10 = BigFloat::ln_rat(&Rat::int(10), 200).unwrap();
        let ten = l10.exp().unwrap();
        let diff = ten.sub(&BigFloat::from_int(10, 200));
        assert!(diff.abs_upper_bound() < rat_pow10(40));
        // exp of a large negative argument collapses onto zero but still
        // encloses the truth
        let tiny = BigFloat::from_int(-2000, 128).exp().unwrap();
        assert!(tiny.lower_bound() <= Rat::zero() || tiny.lower_bound() < rat_pow10(30));
        assert!(tiny.upper_bound() > Rat::zero());
        assert!(tiny.upper_bound() < rat_pow10(30));
    }

    #[test]
    fn decimal_rendering() {
        let x = BigFloat::from_rat(&Rat::frac(3, 2), 96);
        assert_eq!(x.decimal(10), "1.5");
        let y = BigFloat::from_rat(&Rat::frac(-1, 64), 96);
        assert_eq!(y.decimal(10), "-0.015625");
        let z = BigFloat::from_rat(&Rat::new(BigInt::one(), BigInt::from(10).pow(30)).unwrap(), 160);
        assert!(z.decimal(8).starts_with('1'));
        assert!(z.decimal(8).contains("e-30"));
        assert_eq!(BigFloat::zero(64).decimal(10), "0");
    }

    #[test]
    fn mul_pow2_is_exact() {
        let x = BigFloat::from_rat(&Rat::frac(5, 4), 64);
        let y = x.mul_pow2(10);
        assert_eq!(y.lower_bound(), Rat::frac(5 * 1024, 4));
        let z = y.mul_pow2(-10);
        assert_eq!(z.upper_bound() - z.lower_bound(), z.error_width());
    }
}
