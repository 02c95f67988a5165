//! Dense univariate polynomials over the rationals.
//!
//! A [`Poly`] carries a variable tag so that expressions in `t` (the formal
//! variable the operators act on), `z` (the Padé variable), `x` (shift
//! parameters), and `eps` (collision perturbations) cannot be mixed by
//! accident. [`EpsPoly`] specializes to the `eps` variable and adds an
//! optional truncation bound and an order-of-vanishing query.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::rat::Rat;
use crate::{Error, Result};

/// Variable tag of a [`Poly`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Var {
    T,
    Z,
    X,
    Eps,
}

impl Var {
    pub fn as_str(self) -> &'static str {
        match self {
            Var::T => "t",
            Var::Z => "z",
            Var::X => "x",
            Var::Eps => "eps",
        }
    }
}

/// Dense polynomial, coefficients ascending, no trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    var: Var,
    coeffs: Vec<Rat>,
}

impl Poly {
    pub fn new(var: Var, mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Rat::is_zero) {
            coeffs.pop();
        }
        Poly { var, coeffs }
    }

    pub fn zero(var: Var) -> Self {
        Poly {
            var,
            coeffs: Vec::new(),
        }
    }

    pub fn one(var: Var) -> Self {
        Poly::constant(var, Rat::one())
    }

    pub fn constant(var: Var, c: Rat) -> Self {
        Poly::new(var, vec![c])
    }

    /// `v^k`.
    pub fn monomial(var: Var, k: usize) -> Self {
        let mut coeffs = vec![Rat::zero(); k + 1];
        coeffs[k] = Rat::one();
        Poly { var, coeffs }
    }

    /// `∏_i (v - r_i)`.
    pub fn from_roots(var: Var, roots: &[Rat]) -> Self {
        let mut acc = Poly::one(var);
        for r in roots {
            let factor = Poly::new(var, vec![-r, Rat::one()]);
            acc = &acc * &factor;
        }
        acc
    }

    pub fn var(&self) -> Var {
        self.var
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    pub fn rename(&self, var: Var) -> Poly {
        Poly {
            var,
            coeffs: self.coeffs.clone(),
        }
    }

    pub fn mul_rat(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.var);
        }
        Poly {
            var: self.var,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Multiplication by `v^k`.
    pub fn mul_monomial(&self, k: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![Rat::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly {
            var: self.var,
            coeffs,
        }
    }

    pub fn pow(&self, e: usize) -> Poly {
        let mut acc = Poly::one(self.var);
        let mut base = self.clone();
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

    pub fn eval(&self, at: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * at) + c;
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero(self.var);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * &Rat::int(k as i64))
            .collect();
        Poly::new(self.var, coeffs)
    }

    /// `k`-th derivative.
    pub fn derivative_n(&self, k: usize) -> Poly {
        let mut p = self.clone();
        for _ in 0..k {
            p = p.derivative();
        }
        p
    }

    /// Euclidean division; rejects a zero divisor.
    pub fn div_rem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        assert_eq!(self.var, divisor.var, "mixed-variable division");
        let d_deg = divisor.degree().ok_or(Error::DivisionByZero {
            operation: "Poly::div_rem",
            detail: "zero divisor".into(),
        })?;
        let lead = divisor.leading().expect("nonzero divisor").clone();
        let mut rem = self.coeffs.clone();
        let n = self.coeffs.len();
        if n <= d_deg {
            return Ok((Poly::zero(self.var), self.clone()));
        }
        let mut quot = vec![Rat::zero(); n - d_deg];
        for k in (d_deg..n).rev() {
            let q = &rem[k] / &lead;
            if !q.is_zero() {
                for (i, dc) in divisor.coeffs.iter().enumerate() {
                    let idx = k - d_deg + i;
                    let delta = &q * dc;
                    rem[idx] -= &delta;
                }
            }
            quot[k - d_deg] = q;
        }
        Ok((Poly::new(self.var, quot), Poly::new(self.var, rem)))
    }

    /// Division that must leave no remainder.
    pub fn exact_div(&self, divisor: &Poly) -> Result<Poly> {
        let (q, r) = self.div_rem(divisor)?;
        if !r.is_zero() {
            return Err(Error::DivisionByZero {
                operation: "Poly::exact_div",
                detail: format!("nonzero remainder {r}"),
            });
        }
        Ok(q)
    }
}

impl std::ops::Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        assert_eq!(self.var, rhs.var, "mixed-variable addition");
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect();
        Poly::new(self.var, coeffs)
    }
}

impl std::ops::Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl std::ops::Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            var: self.var,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl std::ops::Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert_eq!(self.var, rhs.var, "mixed-variable multiplication");
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(self.var);
        }
        let mut coeffs = vec![Rat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += &(a * b);
            }
        }
        Poly::new(self.var, coeffs)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let v = self.var.as_str();
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let show_coeff = !mag.is_one() || k == 0;
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match k {
                0 => {}
                1 => {
                    if show_coeff {
                        write!(f, "*{v}")?;
                    } else {
                        write!(f, "{v}")?;
                    }
                }
                _ => {
                    if show_coeff {
                        write!(f, "*{v}^{k}")?;
                    } else {
                        write!(f, "{v}^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for Poly {
    /// Coefficient strings ascending in degree; `[]` is the zero polynomial.
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.coeffs.serialize(serializer)
    }
}

/// Exact Newton interpolation through distinct rational nodes.
pub fn interpolate(var: Var, points: &[(Rat, Rat)]) -> Result<Poly> {
    for (i, (xi, _)) in points.iter().enumerate() {
        for (xj, _) in points.iter().skip(i + 1) {
            if xi == xj {
                return Err(Error::InvalidArgument {
                    operation: "poly::interpolate",
                    reason: format!("duplicate node {xi}"),
                });
            }
        }
    }
    let mut coeffs: Vec<Rat> = points.iter().map(|(_, y)| y.clone()).collect();
    let n = points.len();
    // divided differences in place
    for level in 1..n {
        for i in (level..n).rev() {
            let dx = &points[i].0 - &points[i - level].0;
            coeffs[i] = &(&coeffs[i] - &coeffs[i - 1]) / &dx;
        }
    }
    // assemble Newton form highest level first
    let mut p = Poly::zero(var);
    for i in (0..n).rev() {
        let node = Poly::new(var, vec![-&points[i].0, Rat::one()]);
        p = &(&p * &node) + &Poly::constant(var, coeffs[i].clone());
    }
    Ok(p)
}

/// Polynomial in a single collision variable ε with an optional truncation
/// bound: when `trunc` is `Some(T)`, only coefficients of ε^k for `k < T`
/// are meaningful and products drop everything beyond.
#[derive(Clone, PartialEq, Eq)]
pub struct EpsPoly {
    poly: Poly,
    trunc: Option<usize>,
}

impl EpsPoly {
    pub fn zero() -> Self {
        EpsPoly {
            poly: Poly::zero(Var::Eps),
            trunc: None,
        }
    }

    pub fn constant(c: Rat) -> Self {
        EpsPoly {
            poly: Poly::constant(Var::Eps, c),
            trunc: None,
        }
    }

    /// The variable ε itself.
    pub fn eps() -> Self {
        EpsPoly {
            poly: Poly::monomial(Var::Eps, 1),
            trunc: None,
        }
    }

    pub fn from_coeffs(coeffs: Vec<Rat>) -> Self {
        EpsPoly {
            poly: Poly::new(Var::Eps, coeffs),
            trunc: None,
        }
    }

    pub fn truncated(mut self, bound: usize) -> Self {
        self.apply_trunc(Some(bound));
        self
    }

    fn apply_trunc(&mut self, bound: Option<usize>) {
        self.trunc = match (self.trunc, bound) {
            (None, b) => b,
            (t, None) => t,
            (Some(a), Some(b)) => Some(a.min(b)),
        };
        if let Some(t) = self.trunc {
            let coeffs: Vec<Rat> = self.poly.coeffs().iter().take(t).cloned().collect();
            self.poly = Poly::new(Var::Eps, coeffs);
        }
    }

    pub fn truncation(&self) -> Option<usize> {
        self.trunc
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.poly.coeff(k)
    }

    pub fn degree(&self) -> Option<usize> {
        self.poly.degree()
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    /// Value at ε = 0.
    pub fn constant_term(&self) -> Rat {
        self.poly.coeff(0)
    }

    /// Least exponent with nonzero coefficient among the stored ones;
    /// `None` when every stored coefficient vanishes (the order then
    /// exceeds the truncation bound, or the polynomial is zero).
    pub fn valuation(&self) -> Option<usize> {
        self.poly.coeffs().iter().position(|c| !c.is_zero())
    }

    pub fn add(&self, rhs: &EpsPoly) -> EpsPoly {
        let mut out = EpsPoly {
            poly: &self.poly + &rhs.poly,
            trunc: None,
        };
        out.apply_trunc(self.trunc);
        out.apply_trunc(rhs.trunc);
        out
    }

    pub fn sub(&self, rhs: &EpsPoly) -> EpsPoly {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> EpsPoly {
        EpsPoly {
            poly: -&self.poly,
            trunc: self.trunc,
        }
    }

    pub fn mul(&self, rhs: &EpsPoly) -> EpsPoly {
        let mut out = EpsPoly {
            poly: &self.poly * &rhs.poly,
            trunc: None,
        };
        out.apply_trunc(self.trunc);
        out.apply_trunc(rhs.trunc);
        out
    }

    pub fn mul_rat(&self, c: &Rat) -> EpsPoly {
        EpsPoly {
            poly: self.poly.mul_rat(c),
            trunc: self.trunc,
        }
    }

    pub fn pow(&self, e: usize) -> EpsPoly {
        let mut acc = EpsPoly::constant(Rat::one());
        acc.apply_trunc(self.trunc);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }
}

impl fmt::Display for EpsPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly)?;
        if let Some(t) = self.trunc {
            write!(f, " + O(eps^{t})")?;
        }
        Ok(())
    }
}

impl fmt::Debug for EpsPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
