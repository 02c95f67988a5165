//! Shifted coefficientwise operators on polynomials in `t`.
//!
//! All maps here are diagonal in the monomial basis: `apply_s` scales `t^k`
//! by `rising(k+x+1, n)/n!`, `apply_prim` divides by `k+x+1`, `apply_deri`
//! multiplies by it, and `apply_phi` collapses a polynomial to the number
//! `Σ_k c_k α^{k+1}/(k+x+1)^s`. The shift `x` is wrapped in [`ShiftParam`],
//! which rejects negative integers so every divisor `k+x+1` is nonzero.

use serde::Serialize;

use crate::poly::{Poly, Var};
use crate::rat::{factorial, rising_factorial, Rat};
use crate::{Error, Result};

/// Validated shift parameter: a rational that is not a negative integer.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct ShiftParam {
    x: Rat,
}

impl ShiftParam {
    pub fn new(x: Rat) -> Result<Self> {
        if x.is_negative_integer() {
            return Err(Error::ShiftAtPole { x: x.to_string() });
        }
        Ok(ShiftParam { x })
    }

    pub fn value(&self) -> &Rat {
        &self.x
    }

    /// `k + x + 1`, nonzero for every `k ≥ 0`.
    fn divisor(&self, k: usize) -> Rat {
        &self.x + &Rat::int(k as i64 + 1)
    }
}

impl std::fmt::Display for ShiftParam {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.x)
    }
}

fn check_t(p: &Poly) {
    assert_eq!(p.var(), Var::T, "operator argument must be in t");
}

/// `t^k ↦ rising(k+x+1, n)/n! · t^k`.
pub fn apply_s(n: usize, x: &ShiftParam, p: &Poly) -> Poly {
    check_t(p);
    let n_fact = Rat::from_bigint(factorial(n));
    let coeffs = p
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| &(c * &rising_factorial(&x.divisor(k), n)) / &n_fact)
        .collect();
    Poly::new(Var::T, coeffs)
}

/// `t^k ↦ t^k/(k+x+1)`.
pub fn apply_prim(x: &ShiftParam, p: &Poly) -> Poly {
    check_t(p);
    let coeffs = p
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| c / &x.divisor(k))
        .collect();
    Poly::new(Var::T, coeffs)
}

/// `t^k ↦ (k+x+1)·t^k`; equals `apply_s` with `n = 1`.
pub fn apply_deri(x: &ShiftParam, p: &Poly) -> Poly {
    check_t(p);
    let coeffs = p
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| c * &x.divisor(k))
        .collect();
    Poly::new(Var::T, coeffs)
}

/// `Σ_k c_k · α^{k+1}/(k+x+1)^s`.
pub fn apply_phi(alpha: &Rat, x: &ShiftParam, s: usize, p: &Poly) -> Rat {
    check_t(p);
    assert!(!alpha.is_zero(), "phi requires a nonzero alpha");
    let mut acc = Rat::zero();
    let mut alpha_pow = alpha.clone();
    for (k, c) in p.coeffs().iter().enumerate() {
        if !c.is_zero() {
            acc += &(&(c * &alpha_pow) / &x.divisor(k).pow(s));
        }
        alpha_pow *= alpha;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::interpolate;
    use proptest::prelude::*;

    fn sp(n: i64, d: i64) -> ShiftParam {
        ShiftParam::new(Rat::frac(n, d)).unwrap()
    }

    fn tp(cs: &[i64]) -> Poly {
        Poly::new(Var::T, cs.iter().map(|&c| Rat::int(c)).collect())
    }

    fn rat_poly(cs: Vec<Rat>) -> Poly {
        Poly::new(Var::T, cs)
    }

    #[test]
    fn shift_rejects_negative_integers() {
        assert!(ShiftParam::new(Rat::int(-1)).is_err());
        assert!(ShiftParam::new(Rat::int(-5)).is_err());
        assert!(ShiftParam::new(Rat::zero()).is_ok());
        assert!(ShiftParam::new(Rat::frac(-3, 2)).is_ok());
        assert!(ShiftParam::new(Rat::int(2)).is_ok());
    }

    #[test]
    fn s_values() {
        let x0 = sp(0, 1);
        assert_eq!(apply_s(1, &x0, &tp(&[-1, 1])), tp(&[-1, 2]));
        assert_eq!(apply_s(2, &x0, &tp(&[0, 1])), tp(&[0, 3]));
        assert_eq!(apply_s(3, &x0, &Poly::zero(Var::T)), Poly::zero(Var::T));
        assert_eq!(apply_s(0, &x0, &tp(&[4, 7, 1])), tp(&[4, 7, 1]));
    }

    #[test]
    fn prim_and_deri_values() {
        let x0 = sp(0, 1);
        let xh = sp(1, 2);
        assert_eq!(apply_prim(&x0, &tp(&[1])), tp(&[1]));
        assert_eq!(
            apply_prim(&xh, &tp(&[0, 1])),
            rat_poly(vec![Rat::zero(), Rat::frac(2, 5)])
        );
        assert_eq!(apply_deri(&x0, &tp(&[0, 1])), tp(&[0, 2]));
        let x = sp(1, 3);
        assert_eq!(
            apply_deri(&x, &tp(&[1])),
            rat_poly(vec![Rat::frac(4, 3)])
        );
    }

    #[test]
    fn phi_values() {
        let x0 = sp(0, 1);
        assert_eq!(apply_phi(&Rat::one(), &x0, 1, &tp(&[1])), Rat::one());
        assert_eq!(apply_phi(&Rat::one(), &x0, 1, &tp(&[0, 1])), Rat::frac(1, 2));
        assert_eq!(apply_phi(&Rat::int(2), &x0, 2, &tp(&[0, 1])), Rat::one());
    }

    proptest! {
        #[test]
        fn s_commutation(cs in prop::collection::vec(-9i64..9, 0..21),
                         n1 in 0usize..4, n2 in 0usize..4,
                         x1n in -5i64..5, x2n in -5i64..5) {
            let p = tp(&cs);
            let x1 = sp(2 * x1n + 1, 2);
            let x2 = sp(3 * x2n + 1, 3);
            let a = apply_s(n1, &x1, &apply_s(n2, &x2, &p));
            let b = apply_s(n2, &x2, &apply_s(n1, &x1, &p));
            prop_assert_eq!(a, b);
        }

        #[test]
        fn phi_depth_drop(cs in prop::collection::vec(-9i64..9, 0..12),
                          s in 1usize..4, an in 1i64..6, xn in -5i64..5) {
            let p = tp(&cs);
            let x = sp(2 * xn + 1, 2);
            let alpha = Rat::int(an);
            let lhs = apply_phi(&alpha, &x, s, &apply_s(1, &x, &p));
            let rhs = apply_phi(&alpha, &x, s - 1, &p);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn phi_depth_zero_kernel(cs in prop::collection::vec(-9i64..9, 0..10),
                                 an in -6i64..6, ad in 1i64..4, xn in -5i64..5) {
            prop_assume!(an != 0);
            let alpha = Rat::frac(an, ad);
            let x = sp(2 * xn + 1, 2);
            let factor = Poly::new(Var::T, vec![-&alpha, Rat::one()]);
            let p = &factor * &tp(&cs);
            prop_assert!(apply_phi(&alpha, &x, 0, &p).is_zero());
        }

        #[test]
        fn s_product_formula(cs in prop::collection::vec(-9i64..9, 0..12),
                             n in 0usize..6, xn in -5i64..5) {
            let p = tp(&cs);
            let x = sp(2 * xn + 1, 2);
            // compose (S_{1,x} + i·id) for i = n-1 .. 0, then divide by n!
            let mut acc = p.clone();
            for i in (0..n).rev() {
                let shifted = apply_s(1, &x, &acc);
                acc = &shifted + &acc.mul_rat(&Rat::int(i as i64));
            }
            let composed = acc.mul_rat(&Rat::from_bigint(factorial(n)).recip().unwrap());
            prop_assert_eq!(composed, apply_s(n, &x, &p));
        }

        #[test]
        fn monomial_intertwining(cs in prop::collection::vec(-9i64..9, 0..10),
                                 k in 0usize..6, xn in -5i64..5) {
            let p = tp(&cs);
            let x = sp(2 * xn + 1, 2);
            // [t^k] ∘ S_{1,x} = (S_{1,x} - k·id) ∘ [t^k]
            let lhs = apply_s(1, &x, &p).mul_monomial(k);
            let shifted = p.mul_monomial(k);
            let rhs = &apply_s(1, &x, &shifted) - &shifted.mul_rat(&Rat::int(k as i64));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn prim_interpolation_identity(cs in prop::collection::vec(-9i64..9, 0..16),
                                       n in 1usize..5, xn in -4i64..4, yn in -4i64..4) {
            let p = tp(&cs);
            let x = sp(2 * xn + 1, 2);
            let y = sp(3 * yn + 1, 3);
            prop_assume!(x != y);
            let diff = x.value() - y.value();
            // Prim_y = Σ_{k=0}^{n-1} (x-y)^k Prim_x^{k+1} + (x-y)^n Prim_x^n ∘ Prim_y
            let lhs = apply_prim(&y, &p);
            let mut rhs = Poly::zero(Var::T);
            let mut prim_x_iter = p.clone();
            for k in 0..n {
                prim_x_iter = apply_prim(&x, &prim_x_iter);
                rhs = &rhs + &prim_x_iter.mul_rat(&diff.pow(k));
            }
            let mut tail = apply_prim(&y, &p);
            for _ in 0..n {
                tail = apply_prim(&x, &tail);
            }
            rhs = &rhs + &tail.mul_rat(&diff.pow(n));
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn monomial_multiple_expansion_constant_term() {
        // Expanding [t^m] ∘ S_{n,x} over powers of S_{1,x} composed with
        // [t^m]: the coefficients solve a Vandermonde system at the nodes
        // k+m+x+1, and the constant one must be rising(-m, n)/n!.
        for n in 1usize..=4 {
            for m in 0usize..=4 {
                for x in [sp(0, 1), sp(1, 2), sp(2, 3)] {
                    let n_fact = Rat::from_bigint(factorial(n));
                    let pts: Vec<(Rat, Rat)> = (0..=n)
                        .map(|k| {
                            let node = x.value() + &Rat::int((k + m) as i64 + 1);
                            let rhs = &rising_factorial(&x.divisor(k), n) / &n_fact;
                            (node, rhs)
                        })
                        .collect();
                    let b = interpolate(Var::X, &pts).unwrap();
                    let expected =
                        &rising_factorial(&Rat::int(-(m as i64)), n) / &n_fact;
                    assert_eq!(b.coeff(0), expected, "n={n} m={m} x={x}");
                    // same coefficients for a different shift: x-independence
                    let x2 = sp(3, 5);
                    let pts2: Vec<(Rat, Rat)> = (0..=n)
                        .map(|k| {
                            let node = x2.value() + &Rat::int((k + m) as i64 + 1);
                            let rhs = &rising_factorial(&x2.divisor(k), n) / &n_fact;
                            (node, rhs)
                        })
                        .collect();
                    let b2 = interpolate(Var::X, &pts2).unwrap();
                    assert_eq!(b, b2, "n={n} m={m}");
                    // and the expansion reproduces [t^m]∘S_{n,x} on extra monomials
                    for k in 0..=(n + 3) {
                        let lhs = apply_s(n, &x, &Poly::monomial(Var::T, k)).mul_monomial(m);
                        let mut rhs = Poly::zero(Var::T);
                        let shifted = Poly::monomial(Var::T, k + m);
                        for (l, bl) in b.coeffs().iter().enumerate() {
                            let mut term = shifted.clone();
                            for _ in 0..l {
                                term = apply_s(1, &x, &term);
                            }
                            rhs = &rhs + &term.mul_rat(bl);
                        }
                        assert_eq!(lhs, rhs, "n={n} m={m} k={k}");
                    }
                }
            }
        }
    }
}
