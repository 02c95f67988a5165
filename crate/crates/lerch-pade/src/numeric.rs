//! High-precision evaluation of the depth-`s` series and its
//! periodic-coefficient variants, a numeric check of the remainder bound,
//! and an exhaustive small-height search for minimal linear forms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use serde::Serialize;

use crate::bigfloat::BigFloat;
use crate::criterion::{compute_measure, compute_v, envelope_bracket, CriterionInput, Place};
use crate::operators::apply_phi;
use crate::pade::{build_p, build_p_cell, Cell, Instance};
use crate::poly::{Poly, Var};
use crate::rat::{norm_sup, prime_factorization, Rat};
use crate::{Error, Result};

/// `Φ_s(x, z) = Σ_{k≥0} z^{k+1}/(k+x+1)^s` as a rigorous enclosure:
/// an exact prefix plus a certified geometric tail bound.
pub fn eval_lerch(x: &Rat, s: usize, z: &Rat, precision_bits: u32) -> Result<BigFloat> {
    if x.is_negative_integer() {
        return Err(Error::InvalidArgument {
            operation: "lerch eval",
            reason: format!("x = {x} is a negative integer"),
        });
    }
    let z_abs = z.abs();
    if z_abs >= Rat::one() {
        return Err(Error::InvalidArgument {
            operation: "lerch eval",
            reason: format!("|z| = {z_abs} must be below 1"),
        });
    }
    if z.is_zero() {
        return Ok(BigFloat::zero(precision_bits));
    }

    let threshold = Rat::new(BigInt::one(), BigInt::one() << (precision_bits + 8))?;
    let one_minus = &Rat::one() - &z_abs;

    // smallest end with end + x + 2 >= 1, keeping the tail bound monotone
    let mut end = 0usize;
    while &(&Rat::int(end as i64 + 2) + x) < &Rat::one() {
        end += 1;
    }
    // |Σ_{k>end}| <= |z|^{end+2} / ((end+x+2)^s (1-|z|))
    let mut z_pow = z_abs.pow(end + 2);
    let tail_at = |end: usize, z_pow: &Rat| {
        let denom = (&Rat::int(end as i64 + 2) + x).pow(s);
        &(z_pow / &denom) / &one_minus
    };
    while tail_at(end, &z_pow) > threshold {
        end += 1;
        z_pow = &z_pow * &z_abs;
    }

    let mut acc = Rat::zero();
    let mut z_term = z.clone();
    for k in 0..=end {
        acc += &(&z_term / &(&Rat::int(k as i64 + 1) + x).pow(s));
        z_term = &z_term * z;
    }
    Ok(BigFloat::from_rat(&acc, precision_bits).widened(&tail_at(end, &z_pow)))
}

/// All positive divisors of `n`, in no particular order.
fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut out = vec![BigInt::one()];
    for (p, e) in prime_factorization(n) {
        let mut next = Vec::with_capacity(out.len() * (e as usize + 1));
        for d in &out {
            let mut p_pow = BigInt::one();
            for _ in 0..=e {
                next.push(d * &p_pow);
                p_pow *= &p;
            }
        }
        out = next;
    }
    out
}

/// Denominator data `b(z)` with its simple nonzero rational roots, a
/// numerator `w(z)` of lower degree, and the partial-fraction coefficients
/// `γ_i = w(α_i)/b'(α_i)`.
#[derive(Debug, Clone, Serialize)]
pub struct PeriodicSpec {
    b: Poly,
    w: Poly,
    roots: Vec<Rat>,
    gammas: Vec<Rat>,
}

impl PeriodicSpec {
    /// Splits `b` into distinct rational linear factors and computes the
    /// partial-fraction coefficients. Rejects a `b` with a zero, repeated,
    /// or irrational root, and a `w` of degree not below `deg b`.
    pub fn new(b: Poly, w: Poly) -> Result<Self> {
        let q = match b.degree() {
            Some(q) if q >= 1 => q,
            _ => {
                return Err(Error::InvalidArgument {
                    operation: "periodic spec",
                    reason: "b must have degree at least 1".into(),
                });
            }
        };
        if w.var() != b.var() {
            return Err(Error::InvalidArgument {
                operation: "periodic spec",
                reason: "b and w must share a variable".into(),
            });
        }
        if w.degree().is_some_and(|dw| dw >= q) {
            return Err(Error::InvalidArgument {
                operation: "periodic spec",
                reason: "w must have degree below deg b".into(),
            });
        }
        if b.coeff(0).is_zero() {
            return Err(Error::InvalidArgument {
                operation: "periodic spec",
                reason: "b has a zero root".into(),
            });
        }

        // rational root search: candidates r/s with r | c_0 and s | c_q
        // after clearing denominators
        let scale = crate::rat::denominator_lcm(b.coeffs());
        let c0 = b.coeff(0).numer() * (&scale / b.coeff(0).denom());
        let cq = b.leading().expect("degree checked").numer()
            * (&scale / b.leading().expect("degree checked").denom());
        let derivative = b.derivative();
        let mut roots = Vec::new();
        for r in divisors(&c0) {
            for s_div in divisors(&cq) {
                if r.gcd(&s_div) != BigInt::one() {
                    continue;
                }
                for sign in [1i64, -1] {
                    let cand = Rat::new(&r * BigInt::from(sign), s_div.clone())?;
                    if b.eval(&cand).is_zero() {
                        if derivative.eval(&cand).is_zero() {
                            return Err(Error::InvalidArgument {
                                operation: "periodic spec",
                                reason: format!("b has a repeated root at {cand}"),
                            });
                        }
                        roots.push(cand);
                    }
                }
            }
        }
        roots.sort();
        roots.dedup();
        if roots.len() != q {
            return Err(Error::InvalidArgument {
                operation: "periodic spec",
                reason: format!(
                    "b splits into {} distinct rational linear factors, expected {q}",
                    roots.len()
                ),
            });
        }

        let gammas = roots
            .iter()
            .map(|a| &w.eval(a) / &derivative.eval(a))
            .collect();
        Ok(PeriodicSpec {
            b,
            w,
            roots,
            gammas,
        })
    }

    /// Builds `b = scale · ∏_i (z - roots_i)` and delegates to [`Self::new`].
    pub fn from_roots(scale: &Rat, roots: &[Rat], w: Poly) -> Result<Self> {
        let b = Poly::from_roots(w.var(), roots).mul_rat(scale);
        Self::new(b, w)
    }

    pub fn b(&self) -> &Poly {
        &self.b
    }

    pub fn w(&self) -> &Poly {
        &self.w
    }

    /// Roots of `b`, ascending.
    pub fn roots(&self) -> &[Rat] {
        &self.roots
    }

    /// Partial-fraction coefficients aligned with [`Self::roots`]:
    /// `w(z)/b(z) = Σ_i γ_i/(z - α_i)`.
    pub fn gammas(&self) -> &[Rat] {
        &self.gammas
    }
}

/// First `count` coefficients of `w(z)/b(z) = Σ_k b_{w,k} z^{-k-1}`,
/// namely `b_{w,k} = Σ_i γ_i α_i^k`.
pub fn laurent_coefficients(spec: &PeriodicSpec, count: usize) -> Vec<Rat> {
    let mut powers: Vec<Rat> = spec.roots.iter().map(|_| Rat::one()).collect();
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let mut acc = Rat::zero();
        for (p, g) in powers.iter().zip(&spec.gammas) {
            acc += &(p * g);
        }
        out.push(acc);
        for (p, a) in powers.iter_mut().zip(&spec.roots) {
            *p = &*p * a;
        }
    }
    out
}

/// Evaluates `f_{b,w,x,s}(z) = Σ_k b_{w,k} z^{-k-1}/(k+x+1)^s` through the
/// partial fractions: `Σ_i (γ_i/α_i) Φ_s(x, α_i/z)`. Requires `|z|` above
/// every `|α_i|`.
pub fn eval_periodic(
    spec: &PeriodicSpec,
    x: &Rat,
    s: usize,
    z: &Rat,
    precision_bits: u32,
) -> Result<BigFloat> {
    if z.abs() <= norm_sup(&spec.roots) {
        return Err(Error::InvalidArgument {
            operation: "periodic eval",
            reason: format!("|z| = {} must exceed every root of b", z.abs()),
        });
    }
    let mut acc = BigFloat::zero(precision_bits);
    for (root, gamma) in spec.roots.iter().zip(&spec.gammas) {
        let phi = eval_lerch(x, s, &(root / z), precision_bits)?;
        acc = acc.add(&phi.mul_rat(&(gamma / root)));
    }
    Ok(acc)
}

/// One remainder cell compared against the bound.
#[derive(Debug, Clone, Serialize)]
pub struct RemainderCellCheck {
    pub l: usize,
    pub cell: Cell,
    pub prefix_terms: usize,
    pub series_value: BigFloat,
    pub direct_value: BigFloat,
    pub log_abs_upper: BigFloat,
    pub bound: BigFloat,
}

/// Outcome of [`remainder_bound_check`] with every cell's two-sided data.
#[derive(Debug, Clone, Serialize)]
pub struct RemainderBoundReport {
    pub beta: Rat,
    pub cells: Vec<RemainderCellCheck>,
}

const REMAINDER_TAIL_DIGITS: u32 = 32;

/// Evaluates every remainder `R_{l,i,s}(β)` of the instance numerically
/// (exact series prefix plus certified geometric tail) and checks
/// `log |R| <= ρm(n+1) log‖α‖ + (n+1) log(‖α‖/|β|) + log(|β|/(|β|-‖α‖))
/// + n · envelope`. Each value is also recomputed from the approximants
/// directly; the two enclosures must overlap.
pub fn remainder_bound_check(
    inst: &Instance,
    beta: &Rat,
    precision_bits: u32,
) -> Result<RemainderBoundReport> {
    let alpha_norm = norm_sup(inst.alphas());
    let beta_abs = beta.abs();
    if alpha_norm >= beta_abs {
        return Err(Error::InvalidArgument {
            operation: "remainder bound",
            reason: format!(
                "sup norm of alpha ({alpha_norm}) must be strictly below |beta| ({beta_abs})"
            ),
        });
    }
    let n = inst.n();
    let rho_m = inst.rho_m();

    // right-hand side, shared by every cell
    let log_alpha = BigFloat::ln_rat(&alpha_norm, precision_bits)?;
    let log_ratio = BigFloat::ln_rat(&(&alpha_norm / &beta_abs), precision_bits)?;
    let log_geo = BigFloat::ln_rat(&(&beta_abs / &(&beta_abs - &alpha_norm)), precision_bits)?;
    let bound = log_alpha
        .mul_int((rho_m * (n + 1)) as i64)
        .add(&log_ratio.mul_int(n as i64 + 1))
        .add(&log_geo)
        .add(&envelope_bracket(inst.rho(), inst.m(), precision_bits)?.mul_int(n as i64));

    let tail_target = Rat::new(
        BigInt::one(),
        BigInt::from(10).pow(REMAINDER_TAIL_DIGITS),
    )?;

    let mut cells = Vec::new();
    for l in 0..=rho_m {
        let p_z = build_p(l, inst)?;
        let p_t = p_z.rename(Var::T);
        for cell in inst.cells() {
            let alpha = &inst.alphas()[cell.i];
            let (x, _) = &inst.shifts()[cell.j];
            let s = cell.s;

            // tail majorant M Σ_{k>=W} (|α|/|β|)^{k+1}, M = Σ_e |c_e||α|^e
            let mut majorant = Rat::zero();
            let mut alpha_pow = Rat::one();
            for c in p_t.coeffs() {
                majorant += &(&c.abs() * &alpha_pow);
                alpha_pow = &alpha_pow * &alpha.abs();
            }
            let ratio = &alpha.abs() / &beta_abs;
            let geo = (&Rat::one() - &ratio).recip()?;
            let mut terms = n + 1;
            let mut tail = &(&majorant * &ratio.pow(terms + 1)) * &geo;
            while tail > tail_target {
                terms += 1;
                tail = &tail * &ratio;
            }

            let mut prefix = Rat::zero();
            let mut inv_beta_pow = beta.recip()?;
            for k in 0..terms {
                let coeff = apply_phi(alpha, x, s, &p_t.mul_monomial(k));
                prefix += &(&coeff * &inv_beta_pow);
                inv_beta_pow = &inv_beta_pow / beta;
            }
            let series_value = BigFloat::from_rat(&prefix, precision_bits).widened(&tail);

            let phi = eval_lerch(x.value(), s, &(alpha / beta), precision_bits)?;
            let p_cell = build_p_cell(l, cell, inst)?;
            let direct_value = phi
                .mul_rat(&p_z.eval(beta))
                .sub(&BigFloat::from_rat(&p_cell.eval(beta), precision_bits));

            if series_value.upper_bound() < direct_value.lower_bound()
                || direct_value.upper_bound() < series_value.lower_bound()
            {
                return Err(Error::VerificationFailed {
                    check: "remainder two-path",
                    detail: format!(
                        "l = {l}, cell ({}, {}, {}): series [{}, {}] vs direct [{}, {}]",
                        cell.i,
                        cell.j,
                        cell.s,
                        series_value.lower_bound(),
                        series_value.upper_bound(),
                        direct_value.lower_bound(),
                        direct_value.upper_bound()
                    ),
                });
            }

            let log_abs_upper =
                BigFloat::ln_rat(&series_value.abs_upper_bound(), precision_bits)?;
            if !(log_abs_upper.upper_bound() <= bound.lower_bound()) {
                return Err(Error::VerificationFailed {
                    check: "remainder bound",
                    detail: format!(
                        "l = {l}, cell ({}, {}, {}): log|R| <= {} not certified below bound {}",
                        cell.i,
                        cell.j,
                        cell.s,
                        log_abs_upper.decimal(12),
                        bound.decimal(12)
                    ),
                });
            }
            cells.push(RemainderCellCheck {
                l,
                cell,
                prefix_terms: terms,
                series_value,
                direct_value,
                log_abs_upper,
                bound: bound.clone(),
            });
        }
    }
    Ok(RemainderBoundReport {
        beta: beta.clone(),
        cells,
    })
}

fn archimedean_instance(input: &CriterionInput) -> Result<Instance> {
    if input.place() != Place::Archimedean {
        return Err(Error::InvalidArgument {
            operation: "linear form search",
            reason: "only the archimedean place is supported".into(),
        });
    }
    Instance::new(input.alphas().to_vec(), input.shifts().to_vec(), 1)
}

fn phi_values(input: &CriterionInput, precision_bits: u32) -> Result<Vec<BigFloat>> {
    let inst = archimedean_instance(input)?;
    inst.cells()
        .into_iter()
        .map(|cell| {
            let (x, _) = &inst.shifts()[cell.j];
            eval_lerch(
                x.value(),
                cell.s,
                &(&inst.alphas()[cell.i] / input.beta()),
                precision_bits,
            )
        })
        .collect()
}

/// Exact-interval value of `λ_0 + Σ_{i,j,s} λ_{i,j,s} Φ_s(x_j, α_i/β)`
/// with the cell coordinates in lexicographic order after `λ_0`.
pub fn linear_form_value(
    input: &CriterionInput,
    lambda: &[i64],
    precision_bits: u32,
) -> Result<BigFloat> {
    let phis = phi_values(input, precision_bits)?;
    if lambda.len() != phis.len() + 1 {
        return Err(Error::InvalidArgument {
            operation: "linear form search",
            reason: format!(
                "lambda has {} entries, expected {}",
                lambda.len(),
                phis.len() + 1
            ),
        });
    }
    let mut acc = BigFloat::from_int(lambda[0], precision_bits);
    for (phi, &l) in phis.iter().zip(&lambda[1..]) {
        acc = acc.add(&phi.mul_int(l));
    }
    Ok(acc)
}

fn abs_interval(value: &BigFloat, precision_bits: u32) -> BigFloat {
    let lo = value.lower_bound();
    let hi = value.upper_bound();
    if !lo.is_negative() {
        value.clone()
    } else if !hi.is_positive() {
        value.neg()
    } else {
        let top = if hi > -&lo { hi } else { -&lo };
        BigFloat::from_interval(&Rat::zero(), &top, precision_bits)
    }
}

/// Minimal linear form within one height band.
#[derive(Debug, Clone, Serialize)]
pub struct HeightBand {
    pub height: u32,
    pub vectors: u64,
    pub min_abs: BigFloat,
    pub min_lambda: Vec<i64>,
    pub bound: BigFloat,
    pub all_exceed: bool,
}

/// Outcome of [`bruteforce_linear_form_min`].
#[derive(Debug, Clone, Serialize)]
pub struct LinearFormReport {
    pub epsilon: Rat,
    pub mu_exponent: BigFloat,
    pub c_constant: BigFloat,
    pub total_vectors: u64,
    pub min_abs: BigFloat,
    pub min_lambda: Vec<i64>,
    pub bands: Vec<HeightBand>,
}

/// Margin absorbing float rounding in the scan pass; forms closer than this
/// to a band minimum are re-certified exactly.
const SCAN_MARGIN: f64 = 1e-9;

/// Enumerates every nonzero integer vector λ with `max |λ_i| <= height_cap`,
/// evaluating `|λ_0 + Σ λ_{i,j,s} Φ_s(x_j, α_i/β)|`, and compares each
/// height band's minimum against the measure bound `C · H · H^{-μ}`.
///
/// The slack is fixed at half the certified lower bound of `V`, rounded down
/// to 64 fractional bits. A float scan ranks the vectors; every candidate
/// within [`SCAN_MARGIN`] of a band minimum is re-certified with exact
/// interval arithmetic, and a band's `all_exceed` additionally requires the
/// scan floor to clear the bound by the margin.
pub fn bruteforce_linear_form_min(
    input: &CriterionInput,
    height_cap: u32,
    precision_bits: u32,
) -> Result<LinearFormReport> {
    let dims = input.rho_m() + 1;
    if dims > 4 {
        return Err(Error::GuardExceeded {
            operation: "linear form search",
            detail: format!("rho*m + 1 = {dims} exceeds 4"),
        });
    }
    if height_cap == 0 || height_cap > 50 {
        return Err(Error::InvalidArgument {
            operation: "linear form search",
            reason: format!("height cap {height_cap} outside 1..=50"),
        });
    }

    let v_report = compute_v(input)?;
    if !v_report.v.is_certainly_positive() {
        return Err(Error::InvalidArgument {
            operation: "linear form search",
            reason: format!("v = {} is not certainly positive", v_report.v.decimal(12)),
        });
    }
    let scaled = v_report.v.lower_bound().mul_big(&(BigInt::one() << 64));
    let epsilon = Rat::new(scaled.floor_bigint(), BigInt::one() << 65)?;
    if !epsilon.is_positive() {
        return Err(Error::InvalidArgument {
            operation: "linear form search",
            reason: "v is too small to derive a positive slack".into(),
        });
    }
    let measure = compute_measure(input, &epsilon)?;
    let parts = measure.measure.as_ref().expect("measure part present");

    let phis = phi_values(input, precision_bits)?;
    let phis_f64: Vec<f64> = phis
        .iter()
        .map(|p| (&(&p.lower_bound() + &p.upper_bound()) * &Rat::frac(1, 2)).to_f64())
        .collect();

    // float scan: per-band minimum and near-minimal candidates
    let h = height_cap as i64;
    let mut scan_min = vec![f64::INFINITY; height_cap as usize + 1];
    let mut candidates: Vec<Vec<Vec<i64>>> = vec![Vec::new(); height_cap as usize + 1];
    let mut band_counts = vec![0u64; height_cap as usize + 1];
    let mut lambda = vec![-h; dims];
    'outer: loop {
        let height = lambda.iter().map(|l| l.unsigned_abs()).max().unwrap() as usize;
        if height > 0 {
            band_counts[height] += 1;
            let mut value = lambda[0] as f64;
            for (phi, &l) in phis_f64.iter().zip(&lambda[1..]) {
                value += phi * l as f64;
            }
            let value = value.abs();
            if value < scan_min[height] + SCAN_MARGIN {
                if value + SCAN_MARGIN < scan_min[height] {
                    candidates[height].clear();
                }
                scan_min[height] = scan_min[height].min(value);
                candidates[height].push(lambda.clone());
            }
        }
        for slot in (0..dims).rev() {
            if lambda[slot] < h {
                lambda[slot] += 1;
                continue 'outer;
            }
            lambda[slot] = -h;
        }
        break;
    }

    // exact pass over the candidates
    let one = BigFloat::from_int(1, precision_bits);
    let mut bands = Vec::with_capacity(height_cap as usize);
    let mut overall: Option<(BigFloat, Vec<i64>)> = None;
    for height in 1..=height_cap as usize {
        let log_h = BigFloat::ln_rat(&Rat::int(height as i64), precision_bits)?;
        let bound = parts
            .log_c_constant
            .add(&one.sub(&parts.mu_exponent).mul(&log_h))
            .exp()?;
        let mut band_min: Option<(BigFloat, Vec<i64>)> = None;
        let mut exceed = scan_min[height] - SCAN_MARGIN > bound.upper_bound().to_f64();
        for cand in &candidates[height] {
            let mut acc = BigFloat::from_int(cand[0], precision_bits);
            for (phi, &l) in phis.iter().zip(&cand[1..]) {
                acc = acc.add(&phi.mul_int(l));
            }
            let abs = abs_interval(&acc, precision_bits);
            if !(bound.upper_bound() < abs.lower_bound()) {
                exceed = false;
            }
            let better = match &band_min {
                None => true,
                Some((best, _)) => abs.upper_bound() < best.upper_bound(),
            };
            if better {
                band_min = Some((abs, cand.clone()));
            }
        }
        let (min_abs, min_lambda) = band_min.expect("every band is populated");
        let better = match &overall {
            None => true,
            Some((best, _)) => min_abs.upper_bound() < best.upper_bound(),
        };
        if better {
            overall = Some((min_abs.clone(), min_lambda.clone()));
        }
        bands.push(HeightBand {
            height: height as u32,
            vectors: band_counts[height],
            min_abs,
            min_lambda,
            bound,
            all_exceed: exceed,
        });
    }
    let (min_abs, min_lambda) = overall.expect("at least one band");
    Ok(LinearFormReport {
        epsilon,
        mu_exponent: parts.mu_exponent.clone(),
        c_constant: parts.c_constant.clone(),
        total_vectors: band_counts.iter().sum(),
        min_abs,
        min_lambda,
        bands,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigfloat::DEFAULT_PRECISION_BITS as PREC;
    use crate::operators::ShiftParam;
    use proptest::prelude::*;

    fn shift(num: i64, den: i64, r: usize) -> (ShiftParam, usize) {
        (ShiftParam::new(Rat::frac(num, den)).unwrap(), r)
    }

    fn assert_encloses(value: &BigFloat, truth: &Rat) {
        assert!(
            &value.lower_bound() <= truth && truth <= &value.upper_bound(),
            "{truth} outside [{}, {}]",
            value.lower_bound(),
            value.upper_bound()
        );
    }

    #[test]
    fn lerch_at_zero_is_zero() {
        let v = eval_lerch(&Rat::zero(), 1, &Rat::zero(), PREC).unwrap();
        assert!(v.is_exactly_zero());
    }

    #[test]
    fn lerch_depth_one_matches_log() {
        for z in [
            Rat::frac(1, 2),
            Rat::frac(-1, 2),
            Rat::frac(1, 3),
            Rat::frac(-1, 3),
            Rat::frac(9, 10),
        ] {
            let phi = eval_lerch(&Rat::zero(), 1, &z, PREC).unwrap();
            let log = BigFloat::ln_rat(&(&Rat::one() - &z), PREC).unwrap();
            let sum = phi.add(&log);
            assert!(sum.contains_zero(), "z = {z}");
            let tol = Rat::new(BigInt::one(), BigInt::one() << 100).unwrap();
            assert!(sum.abs_upper_bound() <= tol, "z = {z}");
        }
    }

    #[test]
    fn lerch_depth_two_at_one_half() {
        let phi = eval_lerch(&Rat::zero(), 2, &Rat::frac(1, 2), 256).unwrap();
        assert!(phi.decimal(25).starts_with("0.582240526465012505902656"));
        let pi = BigFloat::pi(256);
        let ln2 = BigFloat::ln2(256);
        let closed = pi
            .mul(&pi)
            .div_int(12)
            .unwrap()
            .sub(&ln2.mul(&ln2).div_int(2).unwrap());
        let diff = phi.sub(&closed).abs_upper_bound();
        assert!(diff <= Rat::new(BigInt::one(), BigInt::one() << 200).unwrap());
    }

    #[test]
    fn lerch_negative_noninteger_x() {
        // prefix terms with negative denominators are handled exactly
        let x = Rat::frac(-5, 2);
        let phi = eval_lerch(&x, 1, &Rat::frac(1, 2), PREC).unwrap();
        // brute series partial sum to 200 terms plus the same tail shape
        let mut acc = Rat::zero();
        let mut z_term = Rat::frac(1, 2);
        for k in 0..200 {
            acc += &(&z_term / &(&Rat::int(k + 1) + &x));
            z_term = &z_term * &Rat::frac(1, 2);
        }
        let brute = BigFloat::from_rat(&acc, PREC).widened(&z_term.abs());
        assert!(
            phi.lower_bound() <= brute.upper_bound() && brute.lower_bound() <= phi.upper_bound()
        );
    }

    #[test]
    fn lerch_rejects_bad_arguments() {
        assert!(eval_lerch(&Rat::int(-1), 1, &Rat::frac(1, 2), PREC).is_err());
        assert!(eval_lerch(&Rat::zero(), 1, &Rat::one(), PREC).is_err());
        assert!(eval_lerch(&Rat::zero(), 1, &Rat::frac(3, 2), PREC).is_err());
    }

    #[test]
    fn lerch_intervals_nest_across_precision() {
        for (x, s, z) in [
            (Rat::zero(), 1, Rat::frac(1, 2)),
            (Rat::frac(1, 3), 2, Rat::frac(-2, 3)),
            (Rat::frac(1, 2), 3, Rat::frac(9, 10)),
            (Rat::frac(-5, 2), 1, Rat::frac(1, 5)),
        ] {
            let coarse = eval_lerch(&x, s, &z, PREC / 2).unwrap();
            let fine = eval_lerch(&x, s, &z, PREC).unwrap();
            assert!(
                coarse.lower_bound() <= fine.upper_bound()
                    && fine.lower_bound() <= coarse.upper_bound(),
                "x = {x}, s = {s}, z = {z}"
            );
        }
    }

    #[test]
    fn partial_fractions_cover_up() {
        let z = Var::Z;
        let b = Poly::new(z, vec![Rat::int(-1), Rat::zero(), Rat::one()]);
        let spec = PeriodicSpec::new(b.clone(), Poly::one(z)).unwrap();
        assert_eq!(spec.roots(), &[Rat::int(-1), Rat::one()]);
        assert_eq!(spec.gammas(), &[Rat::frac(-1, 2), Rat::frac(1, 2)]);

        let spec = PeriodicSpec::new(b, Poly::monomial(z, 1)).unwrap();
        assert_eq!(spec.gammas(), &[Rat::frac(1, 2), Rat::frac(1, 2)]);
    }

    #[test]
    fn partial_fractions_recombine() {
        let z = Var::Z;
        let spec = PeriodicSpec::from_roots(
            &Rat::int(3),
            &[Rat::one(), Rat::frac(-1, 2), Rat::frac(1, 3)],
            Poly::new(z, vec![Rat::int(2), Rat::frac(1, 5), Rat::one()]),
        )
        .unwrap();
        let mut sum = Poly::zero(z);
        for (i, gamma) in spec.gammas().iter().enumerate() {
            let mut others = Poly::constant(z, gamma.clone());
            for (k, root) in spec.roots().iter().enumerate() {
                if k != i {
                    others = &others * &Poly::new(z, vec![-root, Rat::one()]);
                }
            }
            sum = &sum + &others;
        }
        let recombined = sum.mul_rat(spec.b().leading().unwrap());
        assert_eq!(recombined, spec.w().clone());
    }

    #[test]
    fn periodic_rejects_bad_specs() {
        let z = Var::Z;
        // repeated root
        let sq = Poly::from_roots(z, &[Rat::one(), Rat::one()]);
        assert!(PeriodicSpec::new(sq, Poly::one(z)).is_err());
        // zero root
        let with_zero = Poly::from_roots(z, &[Rat::zero(), Rat::one()]);
        assert!(PeriodicSpec::new(with_zero, Poly::one(z)).is_err());
        // irrational roots
        let irr = Poly::new(z, vec![Rat::int(-2), Rat::zero(), Rat::one()]);
        assert!(PeriodicSpec::new(irr, Poly::one(z)).is_err());
        // w too large
        let b = Poly::from_roots(z, &[Rat::one(), Rat::int(-1)]);
        assert!(PeriodicSpec::new(b, Poly::monomial(z, 2)).is_err());
    }

    #[test]
    fn laurent_coefficients_alternate_for_two_periodic() {
        let z = Var::Z;
        let a1 = Rat::frac(7, 3);
        let a2 = Rat::int(-4);
        let w = Poly::new(z, vec![a2.clone(), a1.clone()]);
        let b = Poly::new(z, vec![Rat::int(-1), Rat::zero(), Rat::one()]);
        let spec = PeriodicSpec::new(b, w).unwrap();
        let coeffs = laurent_coefficients(&spec, 30);
        for (k, c) in coeffs.iter().enumerate() {
            let expected = if k % 2 == 0 { &a1 } else { &a2 };
            assert_eq!(c, expected, "k = {k}");
        }
    }

    #[test]
    fn laurent_coefficients_match_long_division() {
        let z = Var::Z;
        let spec = PeriodicSpec::from_roots(
            &Rat::frac(5, 2),
            &[Rat::one(), Rat::frac(-1, 2), Rat::int(3)],
            Poly::new(z, vec![Rat::frac(1, 7), Rat::int(-2), Rat::one()]),
        )
        .unwrap();
        let coeffs = laurent_coefficients(&spec, 30);
        // independent oracle: match w = b · Σ_k c_k z^{-k-1} degree by degree
        let q = spec.b().degree().unwrap();
        let b = spec.b();
        let w = spec.w();
        let mut division = Vec::new();
        for k in 0..30usize {
            let w_coeff = if k < q { w.coeff(q - 1 - k) } else { Rat::zero() };
            let mut acc = w_coeff;
            for j in 1..=k.min(q) {
                acc -= &(&b.coeff(q - j) * &division[k - j]);
            }
            division.push(&acc / b.leading().unwrap());
        }
        assert_eq!(coeffs, division);
    }

    #[test]
    fn periodic_depth_zero_is_the_rational_function() {
        let z = Var::Z;
        let spec = PeriodicSpec::from_roots(
            &Rat::int(2),
            &[Rat::one(), Rat::frac(-3, 2), Rat::frac(1, 4)],
            Poly::new(z, vec![Rat::int(3), Rat::one(), Rat::frac(-2, 3)]),
        )
        .unwrap();
        for beta in [Rat::int(2), Rat::int(-5), Rat::frac(17, 4)] {
            // partial fractions, exactly
            let mut exact = Rat::zero();
            for (root, gamma) in spec.roots().iter().zip(spec.gammas()) {
                exact += &(gamma / &(&beta - root));
            }
            let direct = &spec.w().eval(&beta) / &spec.b().eval(&beta);
            assert_eq!(exact, direct);
            // and through the series evaluation
            let v = eval_periodic(&spec, &Rat::zero(), 0, &beta, PREC).unwrap();
            assert_encloses(&v, &direct);
        }
    }

    #[test]
    fn periodic_eval_matches_series_partial_sums() {
        let z = Var::Z;
        let spec = PeriodicSpec::from_roots(
            &Rat::one(),
            &[Rat::frac(1, 2), Rat::frac(-1, 3)],
            Poly::new(z, vec![Rat::one(), Rat::int(2)]),
        )
        .unwrap();
        let x = Rat::frac(1, 3);
        let beta = Rat::int(3);
        let s = 2;
        let v = eval_periodic(&spec, &x, s, &beta, 256).unwrap();
        let coeffs = laurent_coefficients(&spec, 120);
        let mut acc = Rat::zero();
        let mut inv_pow = beta.recip().unwrap();
        for (k, c) in coeffs.iter().enumerate() {
            acc += &(&(c / &(&Rat::int(k as i64 + 1) + &x).pow(s)) * &inv_pow);
            inv_pow = &inv_pow / &beta;
        }
        // 120 terms of a |z| >= 6 ratio leave a tail far below the tolerance
        let diff = v.sub(&BigFloat::from_rat(&acc, 256)).abs_upper_bound();
        assert!(diff <= Rat::new(BigInt::one(), BigInt::from(10).pow(50)).unwrap());
    }

    #[test]
    fn periodic_eval_requires_large_z() {
        let spec = PeriodicSpec::from_roots(
            &Rat::one(),
            &[Rat::int(2), Rat::int(-1)],
            Poly::one(Var::Z),
        )
        .unwrap();
        assert!(eval_periodic(&spec, &Rat::zero(), 1, &Rat::int(2), PREC).is_err());
        assert!(eval_periodic(&spec, &Rat::zero(), 1, &Rat::frac(5, 2), PREC).is_ok());
    }

    fn base_instance() -> Instance {
        Instance::new(vec![Rat::one()], vec![shift(0, 1, 1)], 1).unwrap()
    }

    #[test]
    fn remainder_series_first_term() {
        // P_0 = 2t - 1: the k = 0 coefficient vanishes and k = 1 gives
        // phi(2t^3 - t^2)... = 1/6, hence 1/600 at beta = 10
        let inst = base_instance();
        let p = build_p(0, &inst).unwrap().rename(Var::T);
        let x = ShiftParam::new(Rat::zero()).unwrap();
        assert_eq!(apply_phi(&Rat::one(), &x, 1, &p), Rat::zero());
        let shifted = p.mul_monomial(1);
        assert_eq!(apply_phi(&Rat::one(), &x, 1, &shifted), Rat::frac(1, 6));
        let report = remainder_bound_check(&inst, &Rat::int(10), PREC).unwrap();
        let first = &report.cells[0];
        assert_eq!(first.l, 0);
        let truth_low = Rat::frac(1, 600) - Rat::new(BigInt::one(), BigInt::from(10).pow(4)).unwrap();
        assert!(first.series_value.upper_bound() > truth_low);
    }

    #[test]
    fn remainder_bound_holds_on_grid() {
        let instances = [
            Instance::new(vec![Rat::one()], vec![shift(0, 1, 1)], 1).unwrap(),
            Instance::new(vec![Rat::one()], vec![shift(0, 1, 1)], 3).unwrap(),
            Instance::new(
                vec![Rat::one(), Rat::frac(1, 2)],
                vec![shift(1, 2, 1)],
                2,
            )
            .unwrap(),
            Instance::new(
                vec![Rat::one(), Rat::frac(-1, 3)],
                vec![shift(0, 1, 1), shift(1, 2, 2)],
                1,
            )
            .unwrap(),
        ];
        for inst in &instances {
            for beta in [Rat::int(10), Rat::int(100)] {
                let report = remainder_bound_check(inst, &beta, PREC).unwrap();
                let expected =
                    (inst.rho_m() + 1) * inst.rho_m();
                assert_eq!(report.cells.len(), expected);
            }
        }
    }

    #[test]
    fn remainder_bound_rejects_small_beta() {
        let inst = base_instance();
        assert!(remainder_bound_check(&inst, &Rat::one(), PREC).is_err());
    }

    fn wide_input() -> CriterionInput {
        CriterionInput::new(
            vec![Rat::one()],
            vec![shift(0, 1, 1)],
            Rat::int(100),
            PREC,
        )
        .unwrap()
    }

    #[test]
    fn linear_form_value_is_linear() {
        let input = wide_input();
        let single = linear_form_value(&input, &[3, -2], PREC).unwrap();
        let doubled = linear_form_value(&input, &[6, -4], PREC).unwrap();
        let diff = doubled.sub(&single.mul_int(2)).abs_upper_bound();
        assert!(diff <= Rat::new(BigInt::one(), BigInt::one() << 100).unwrap());
        assert!(linear_form_value(&input, &[1, 2, 3], PREC).is_err());
    }

    #[test]
    fn bruteforce_minimum_on_the_base_example() {
        let input = wide_input();
        let report = bruteforce_linear_form_min(&input, 10, PREC).unwrap();
        assert_eq!(report.total_vectors, 21 * 21 - 1);
        assert_eq!(report.bands.len(), 10);
        // the global minimum is Φ_1(0, 1/100) = -log(99/100) itself
        let phi = BigFloat::ln_rat(&Rat::frac(99, 100), PREC).unwrap().neg();
        let diff = report.min_abs.sub(&phi).abs_upper_bound();
        assert!(diff <= Rat::new(BigInt::one(), BigInt::one() << 100).unwrap());
        assert_eq!(report.min_lambda[0], 0);
        assert_eq!(report.min_lambda[1].abs(), 1);
        assert!(report.min_abs.is_certainly_positive());
        for band in &report.bands {
            assert!(band.all_exceed, "height {}", band.height);
            assert!(band.bound.is_certainly_positive());
        }
        let one = BigFloat::from_int(1, PREC);
        assert!(one.is_certainly_below(&report.mu_exponent));
    }

    #[test]
    fn bruteforce_rejects_wide_instances_and_caps() {
        let input = wide_input();
        assert!(matches!(
            bruteforce_linear_form_min(&input, 60, PREC),
            Err(Error::InvalidArgument { .. })
        ));
        let narrow = CriterionInput::new(
            vec![Rat::one()],
            vec![shift(0, 1, 1)],
            Rat::int(10),
            PREC,
        )
        .unwrap();
        // v < 0: no measure to compare against
        assert!(bruteforce_linear_form_min(&narrow, 5, PREC).is_err());
        let wide_cells = CriterionInput::new(
            vec![Rat::one(), Rat::frac(1, 2)],
            vec![shift(0, 1, 1), shift(1, 2, 1)],
            Rat::int(100),
            PREC,
        )
        .unwrap();
        assert!(matches!(
            bruteforce_linear_form_min(&wide_cells, 3, PREC),
            Err(Error::GuardExceeded { .. })
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(8))]
        #[test]
        fn random_specs_recombine(
            roots_idx in proptest::sample::subsequence(vec![0usize, 1, 2, 3, 4], 2..=4),
            w_coeffs in proptest::collection::vec(-5i64..=5, 1..=3),
        ) {
            let pool = [
                Rat::one(),
                Rat::int(-2),
                Rat::frac(1, 2),
                Rat::frac(-3, 4),
                Rat::int(5),
            ];
            let roots: Vec<Rat> = roots_idx.iter().map(|&i| pool[i].clone()).collect();
            let w = Poly::new(Var::Z, w_coeffs.iter().map(|&c| Rat::int(c)).collect());
            prop_assume!(w.degree().is_some_and(|d| d < roots.len()) || w.is_zero());
            let spec = PeriodicSpec::from_roots(&Rat::one(), &roots, w).unwrap();
            // s = 0 evaluation equals w/b at a point beyond the roots
            let beta = Rat::int(7);
            let direct = &spec.w().eval(&beta) / &spec.b().eval(&beta);
            let v = eval_periodic(&spec, &Rat::frac(1, 3), 0, &beta, PREC).unwrap();
            prop_assert!(
                &v.lower_bound() <= &direct && &direct <= &v.upper_bound(),
                "{direct} outside enclosure"
            );
        }
    }
}
