//! Truncated Laurent tails in `1/z`.
//!
//! Remainders of the approximation problem expand at infinity as
//! `Σ_{k ≥ start} c_k z^{-k}`. A [`TruncatedSeries`] stores finitely many
//! of those coefficients together with the first exponent, and reports the
//! order of vanishing at infinity as far as the stored window allows.

use std::fmt;

use serde::Serialize;

use crate::rat::Rat;

/// Order of vanishing at infinity, as determined from a finite window.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesOrd {
    /// Least exponent `k` with a nonzero coefficient of `z^{-k}`.
    Finite(usize),
    /// Every stored coefficient vanishes; the order is at least this bound.
    BeyondTruncation(usize),
}

/// `Σ_{k=start}^{start+len-1} coeffs[k-start] · z^{-k}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TruncatedSeries {
    start: usize,
    coefficients: Vec<Rat>,
}

impl TruncatedSeries {
    pub fn new(start: usize, coefficients: Vec<Rat>) -> Self {
        TruncatedSeries {
            start,
            coefficients,
        }
    }

    pub fn start(&self) -> usize {
        self.start
    }

    /// Exclusive bound: coefficients of `z^{-k}` are stored for `k < bound`.
    pub fn truncation_bound(&self) -> usize {
        self.start + self.coefficients.len()
    }

    /// Coefficient of `z^{-k}`, or `None` outside the stored window.
    pub fn coeff(&self, k: usize) -> Option<&Rat> {
        k.checked_sub(self.start)
            .and_then(|i| self.coefficients.get(i))
    }

    pub fn coefficients(&self) -> &[Rat] {
        &self.coefficients
    }

    pub fn ord(&self) -> SeriesOrd {
        match self.coefficients.iter().position(|c| !c.is_zero()) {
            Some(i) => SeriesOrd::Finite(self.start + i),
            None => SeriesOrd::BeyondTruncation(self.truncation_bound()),
        }
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coefficients.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let k = self.start + i;
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
            let mag = c.abs();
            if k == 0 {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "1/z^{k}")?;
            } else {
                write!(f, "({mag})/z^{k}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(1/z^{})", self.truncation_bound())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ord_detection() {
        let s = TruncatedSeries::new(
            1,
            vec![Rat::zero(), Rat::zero(), Rat::frac(1, 6), Rat::int(2)],
        );
        assert_eq!(s.ord(), SeriesOrd::Finite(3));
        assert_eq!(s.coeff(3), Some(&Rat::frac(1, 6)));
        assert_eq!(s.coeff(5), None);
        assert_eq!(s.truncation_bound(), 5);
    }

    #[test]
    fn all_zero_window() {
        let s = TruncatedSeries::new(2, vec![Rat::zero(); 4]);
        assert_eq!(s.ord(), SeriesOrd::BeyondTruncation(6));
    }

    #[test]
    fn display_form() {
        let s = TruncatedSeries::new(1, vec![Rat::zero(), Rat::frac(-1, 6)]);
        assert_eq!(s.to_string(), "-(1/6)/z^2 + O(1/z^3)");
    }
}
