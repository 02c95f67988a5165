//! Effective linear-independence criterion.
//!
//! Evaluates the certified quantity `V` whose positivity settles the verdict
//! for a given scale β, the measure exponent μ and constant C attached to a
//! positive `V`, and the closed-form thresholds of a large parametric family
//! together with tabulated reference values for side-by-side comparison.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::bigfloat::BigFloat;
use crate::operators::ShiftParam;
use crate::pade::Instance;
use crate::rat::{log_mu, norm_sup, prime_factorization, progression_lcm, projective_height, Rat};
use crate::{Error, Result};

/// Absolute value the size conditions are read at. Archimedean is the fully
/// supported mode; finite places are experimental and only reachable through
/// [`CriterionInput::with_finite_place`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "prime", rename_all = "lowercase")]
pub enum Place {
    Archimedean,
    Finite(u64),
}

/// Exponent of `p` in `x`, negative when `p` divides the denominator.
/// `x` must be nonzero.
fn padic_valuation(x: &Rat, p: &BigInt) -> i64 {
    fn count(mut n: BigInt, p: &BigInt) -> i64 {
        debug_assert!(!n.is_zero());
        let mut v = 0;
        loop {
            let (q, r) = n.div_rem(p);
            if !r.is_zero() {
                return v;
            }
            n = q;
            v += 1;
        }
    }
    count(x.numer().clone(), p) - count(x.denom().clone(), p)
}

impl Place {
    fn log_abs(&self, x: &Rat, precision_bits: u32) -> Result<BigFloat> {
        match self {
            Place::Archimedean => BigFloat::ln_rat(&x.abs(), precision_bits),
            Place::Finite(p) => {
                let p = BigInt::from(*p);
                let v = padic_valuation(x, &p);
                Ok(BigFloat::ln_rat(&Rat::from_bigint(p), precision_bits)?.mul_int(-v))
            }
        }
    }

    /// `log max_i |v_i|` at the place; the slice must be nonempty with
    /// nonzero entries.
    fn log_norm_sup(&self, values: &[Rat], precision_bits: u32) -> Result<BigFloat> {
        match self {
            Place::Archimedean => BigFloat::ln_rat(&norm_sup(values), precision_bits),
            Place::Finite(p) => {
                let p = BigInt::from(*p);
                let min_v = values
                    .iter()
                    .map(|x| padic_valuation(x, &p))
                    .min()
                    .expect("nonempty norm slice");
                Ok(BigFloat::ln_rat(&Rat::from_bigint(p), precision_bits)?.mul_int(-min_v))
            }
        }
    }

    /// `log max(1, |v_1|, ..., |v_k|)` at the place.
    fn log_local_height(&self, values: &[Rat], precision_bits: u32) -> Result<BigFloat> {
        match self {
            Place::Archimedean => {
                let s = norm_sup(values);
                if s <= Rat::one() {
                    Ok(BigFloat::zero(precision_bits))
                } else {
                    BigFloat::ln_rat(&s, precision_bits)
                }
            }
            Place::Finite(p) => {
                let p = BigInt::from(*p);
                let e = values
                    .iter()
                    .map(|x| -padic_valuation(x, &p))
                    .max()
                    .expect("nonempty norm slice")
                    .max(0);
                Ok(BigFloat::ln_rat(&Rat::from_bigint(p), precision_bits)?.mul_int(e))
            }
        }
    }

    /// Exact test for `max_i |v_i| < |beta|` at the place.
    fn norm_strictly_below(&self, values: &[Rat], beta: &Rat) -> bool {
        match self {
            Place::Archimedean => norm_sup(values) < beta.abs(),
            Place::Finite(p) => {
                let p = BigInt::from(*p);
                let min_v = values
                    .iter()
                    .map(|x| padic_valuation(x, &p))
                    .min()
                    .expect("nonempty norm slice");
                min_v > padic_valuation(beta, &p)
            }
        }
    }
}

fn require_prime(p: u64, operation: &'static str) -> Result<()> {
    let factors = prime_factorization(&BigInt::from(p));
    if factors.len() != 1 || factors[0].1 != 1 {
        return Err(Error::InvalidArgument {
            operation,
            reason: format!("{p} is not prime"),
        });
    }
    Ok(())
}

/// Validated input: the α and shift data of an instance, the scale β, the
/// place the size conditions are read at, and the working precision.
#[derive(Debug, Clone, Serialize)]
pub struct CriterionInput {
    alphas: Vec<Rat>,
    shifts: Vec<(ShiftParam, usize)>,
    beta: Rat,
    place: Place,
    precision_bits: u32,
}

impl CriterionInput {
    /// Archimedean input, requiring `max_i |α_i| < |β|`.
    pub fn new(
        alphas: Vec<Rat>,
        shifts: Vec<(ShiftParam, usize)>,
        beta: Rat,
        precision_bits: u32,
    ) -> Result<Self> {
        Self::with_place(alphas, shifts, beta, Place::Archimedean, precision_bits)
    }

    /// Experimental: read the size conditions at the finite place of the
    /// given prime. The global height, the shift-denominator term, and the
    /// envelope term keep their place-independent values; only the β and
    /// norm terms and the measure's place constant become local.
    pub fn with_finite_place(
        alphas: Vec<Rat>,
        shifts: Vec<(ShiftParam, usize)>,
        beta: Rat,
        prime: u64,
        precision_bits: u32,
    ) -> Result<Self> {
        require_prime(prime, "criterion input")?;
        Self::with_place(alphas, shifts, beta, Place::Finite(prime), precision_bits)
    }

    fn with_place(
        alphas: Vec<Rat>,
        shifts: Vec<(ShiftParam, usize)>,
        beta: Rat,
        place: Place,
        precision_bits: u32,
    ) -> Result<Self> {
        Instance::new(alphas.clone(), shifts.clone(), 1)?;
        if beta.is_zero() {
            return Err(Error::InvalidArgument {
                operation: "criterion input",
                reason: "beta must be nonzero".into(),
            });
        }
        if !place.norm_strictly_below(&alphas, &beta) {
            return Err(Error::InvalidArgument {
                operation: "criterion input",
                reason: format!(
                    "the sup norm of alpha must be strictly below |beta| at the chosen \
                     place; got alpha = {:?}, beta = {}",
                    alphas.iter().map(Rat::to_string).collect::<Vec<_>>(),
                    beta
                ),
            });
        }
        Ok(CriterionInput {
            alphas,
            shifts,
            beta,
            place,
            precision_bits,
        })
    }

    pub fn alphas(&self) -> &[Rat] {
        &self.alphas
    }

    pub fn shifts(&self) -> &[(ShiftParam, usize)] {
        &self.shifts
    }

    pub fn beta(&self) -> &Rat {
        &self.beta
    }

    pub fn place(&self) -> Place {
        self.place
    }

    pub fn precision_bits(&self) -> u32 {
        self.precision_bits
    }

    pub fn m(&self) -> usize {
        self.alphas.len()
    }

    pub fn rho(&self) -> usize {
        self.shifts.iter().map(|&(_, r)| r).sum()
    }

    pub fn rho_m(&self) -> usize {
        self.rho() * self.m()
    }

    /// `(α_1, ..., α_m, β)`.
    fn joint(&self) -> Vec<Rat> {
        let mut v = self.alphas.clone();
        v.push(self.beta.clone());
        v
    }
}

/// Verdict attached to `V`: independence is certified only when the whole
/// enclosure of `V` is positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Independent,
    Inconclusive,
}

/// One signed summand of `V`.
#[derive(Debug, Clone, Serialize)]
pub struct Term {
    pub name: &'static str,
    pub value: BigFloat,
}

/// Measure quantities attached to a certified positive `V - ε`.
#[derive(Debug, Clone, Serialize)]
pub struct MeasureParts {
    pub epsilon: Rat,
    pub a_term: BigFloat,
    pub u_term: BigFloat,
    pub mu_exponent: BigFloat,
    pub c_constant: BigFloat,
    pub log_c_constant: BigFloat,
}

/// Result of a criterion evaluation. `terms` lists the signed summands of
/// `v` in display order; they sum to `v`.
#[derive(Debug, Clone, Serialize)]
pub struct CriterionReport {
    pub input: CriterionInput,
    pub v: BigFloat,
    pub c_local: BigFloat,
    pub verdict: Verdict,
    pub terms: Vec<Term>,
    pub measure: Option<MeasureParts>,
}

/// The combinatorial envelope `ρm log 2 + ρ (log(ρm+1) + ρm log((ρm+1)/ρm))`.
pub fn envelope_bracket(rho: usize, m: usize, precision_bits: u32) -> Result<BigFloat> {
    let rho_m = (rho * m) as i64;
    let rho = rho as i64;
    let ln2 = BigFloat::ln2(precision_bits);
    let log_succ = BigFloat::ln_rat(&Rat::int(rho_m + 1), precision_bits)?;
    let log_ratio = BigFloat::ln_rat(
        &Rat::new(BigInt::from(rho_m + 1), BigInt::from(rho_m))?,
        precision_bits,
    )?;
    Ok(ln2
        .mul_int(rho_m)
        .add(&log_succ.add(&log_ratio.mul_int(rho_m)).mul_int(rho)))
}

/// The place constant entering the measure quantities: the envelope at the
/// archimedean place, the local shift-denominator sum
/// `Σ r_j (p/(p-1)) log p` over shifts whose denominator `p` divides at a
/// finite place.
fn place_constant(input: &CriterionInput, precision_bits: u32) -> Result<BigFloat> {
    match input.place {
        Place::Archimedean => envelope_bracket(input.rho(), input.m(), precision_bits),
        Place::Finite(p) => {
            let p_big = BigInt::from(p);
            let log_p = BigFloat::ln_rat(&Rat::from_bigint(p_big.clone()), precision_bits)?;
            let weight = Rat::new(p_big.clone(), &p_big - BigInt::one())?;
            let mut total = 0i64;
            for (x, r) in &input.shifts {
                if (x.value().denom() % &p_big).is_zero() {
                    total += *r as i64;
                }
            }
            Ok(log_p.mul_rat(&weight).mul_int(total))
        }
    }
}

/// Upper bound `max_j(r_j) · b · ρ · m` on the growth rate of the shared
/// progression denominators, `b` being the largest shift denominator.
pub fn denominator_growth_bound(shifts: &[(ShiftParam, usize)], m: usize) -> Rat {
    let max_r = shifts.iter().map(|&(_, r)| r).max().unwrap_or(0);
    let rho: usize = shifts.iter().map(|&(_, r)| r).sum();
    let b = shifts
        .iter()
        .map(|(x, _)| x.value().denom().clone())
        .max()
        .unwrap_or_else(BigInt::one);
    Rat::from_bigint(b).mul_big(&BigInt::from(max_r * rho * m))
}

/// Evaluates `V` with its full term breakdown and verdict.
pub fn compute_v(input: &CriterionInput) -> Result<CriterionReport> {
    let prec = input.precision_bits;
    let rho_m = input.rho_m() as i64;

    let log_beta = input.place.log_abs(&input.beta, prec)?;

    let mut height_coords = vec![Rat::one()];
    height_coords.extend(input.alphas.iter().cloned());
    height_coords.push(input.beta.clone());
    let height = projective_height(&height_coords, prec)?.mul_int(-rho_m);

    let alpha_norm = input.place.log_norm_sup(&input.alphas, prec)?.mul_int(-rho_m);
    let joint_norm = input.place.log_norm_sup(&input.joint(), prec)?.mul_int(rho_m);

    let mut shift_sum = BigFloat::zero(prec);
    for (x, r) in &input.shifts {
        shift_sum = shift_sum.add(&log_mu(x.value(), prec)?.mul_int(*r as i64));
    }
    let shift_term = shift_sum.neg();

    let c_local = place_constant(input, prec)?;
    let envelope = envelope_bracket(input.rho(), input.m(), prec)?.neg();
    let growth = BigFloat::from_rat(&denominator_growth_bound(&input.shifts, input.m()), prec).neg();

    let terms = vec![
        Term {
            name: "log_abs_beta",
            value: log_beta,
        },
        Term {
            name: "height",
            value: height,
        },
        Term {
            name: "alpha_norm",
            value: alpha_norm,
        },
        Term {
            name: "joint_norm",
            value: joint_norm,
        },
        Term {
            name: "shift_denominators",
            value: shift_term,
        },
        Term {
            name: "envelope",
            value: envelope,
        },
        Term {
            name: "denominator_growth",
            value: growth,
        },
    ];
    let mut v = BigFloat::zero(prec);
    for t in &terms {
        v = v.add(&t.value);
    }
    let verdict = if v.is_certainly_positive() {
        Verdict::Independent
    } else {
        Verdict::Inconclusive
    };
    Ok(CriterionReport {
        input: input.clone(),
        v,
        c_local,
        verdict,
        terms,
        measure: None,
    })
}

/// Evaluates `V` and, for `0 < ε < V`, the measure exponent
/// `μ = (A + U)/(V - ε)` and constant `C = exp(-(log 2/(V - ε) + 1)(A + U))`.
pub fn compute_measure(input: &CriterionInput, epsilon: &Rat) -> Result<CriterionReport> {
    if !epsilon.is_positive() {
        return Err(Error::InvalidArgument {
            operation: "criterion measure",
            reason: format!("epsilon = {epsilon} must be positive"),
        });
    }
    let mut report = compute_v(input)?;
    let prec = input.precision_bits;
    let gap = report.v.sub(&BigFloat::from_rat(epsilon, prec));
    if !gap.is_certainly_positive() {
        if gap.is_certainly_negative() {
            return Err(Error::InvalidArgument {
                operation: "criterion measure",
                reason: format!(
                    "epsilon = {epsilon} is not below v = {}",
                    report.v.decimal(12)
                ),
            });
        }
        return Err(Error::Undecidable {
            operation: "criterion measure",
            bits: prec,
            detail: format!(
                "cannot certify v - epsilon > 0; enclosure [{}, {}]",
                gap.lower_bound(),
                gap.upper_bound()
            ),
        });
    }

    let rho_m = input.rho_m() as i64;
    let log_beta = input.place.log_abs(&input.beta, prec)?;
    let log_alpha_norm = input.place.log_norm_sup(&input.alphas, prec)?;
    let a_term = log_beta
        .sub(&log_alpha_norm.mul_int(rho_m + 1))
        .sub(&report.c_local);
    let u_term = input
        .place
        .log_local_height(&input.joint(), prec)?
        .mul_int(rho_m)
        .add(&report.c_local);
    let total = a_term.add(&u_term);
    let mu_exponent = total.div(&gap)?;
    let log_c_constant = BigFloat::ln2(prec)
        .div(&gap)?
        .add(&BigFloat::from_int(1, prec))
        .mul(&total)
        .neg();
    let c_constant = log_c_constant.exp()?;
    report.measure = Some(MeasureParts {
        epsilon: epsilon.clone(),
        a_term,
        u_term,
        mu_exponent,
        c_constant,
        log_c_constant,
    });
    Ok(report)
}

/// Tabulated reference thresholds for the parametric family, indexed by
/// `g` in `2..=6`, `p` in `{2, 3, 5, 7}`, `q` in `1..=4`.
const REFERENCE_THRESHOLDS: [[[u32; 4]; 4]; 5] = [
    [
        [3158, 5816, 8449, 11072],
        [4509, 8466, 12398, 16320],
        [7192, 13748, 20278, 26798],
        [9868, 19021, 28150, 37268],
    ],
    [
        [4427, 8104, 11744, 15368],
        [6298, 11769, 17202, 22620],
        [10013, 19071, 28092, 37097],
        [13717, 26362, 38969, 51562],
    ],
    [
        [5695, 10391, 15038, 19664],
        [8087, 15071, 22006, 28920],
        [12834, 24394, 35905, 47395],
        [17565, 33702, 49789, 65855],
    ],
    [
        [6964, 12679, 18332, 23960],
        [9876, 18374, 26809, 35219],
        [15655, 29718, 43719, 57694],
        [21414, 41042, 60608, 80148],
    ],
    [
        [8233, 14967, 21627, 28256],
        [11665, 21676, 31613, 41519],
        [18476, 35041, 51532, 67992],
        [25263, 48382, 71427, 94441],
    ],
];

const TABLE_PRIMES: [u32; 4] = [2, 3, 5, 7];

/// Reference threshold for the cell `(g, p, q)`, if it is inside the table.
pub fn reference_threshold(g: u32, p: u32, q: u32) -> Option<u32> {
    let gi = (g as usize).checked_sub(2)?;
    let pi = TABLE_PRIMES.iter().position(|&v| v == p)?;
    let qi = (q as usize).checked_sub(1)?;
    REFERENCE_THRESHOLDS
        .get(gi)?
        .get(pi)?
        .get(qi)
        .copied()
}

/// Computed positivity threshold for `log |β|` in the parametric family
/// indexed by `(g, p, q)`: `g` times the sum of the family's size terms.
/// Read directly off the displayed bound; it is not expected to agree with
/// [`reference_threshold`] and both are reported side by side.
pub fn family_threshold(g: u32, p: u32, q: u32, precision_bits: u32) -> Result<BigFloat> {
    if g < 2 {
        return Err(Error::InvalidArgument {
            operation: "family threshold",
            reason: format!("g = {g} must be at least 2"),
        });
    }
    if q == 0 {
        return Err(Error::InvalidArgument {
            operation: "family threshold",
            reason: "q must be positive".into(),
        });
    }
    require_prime(p as u64, "family threshold")?;

    let pq100 = 100 * p as i64 * q as i64;
    let ln2 = BigFloat::ln2(precision_bits);
    let first = ln2
        .mul_int(g as i64 - 1)
        .add(&BigFloat::ln_rat(&Rat::int(2520), precision_bits)?)
        .mul_rat(&Rat::frac(pq100, g as i64));
    let second = BigFloat::ln_rat(&Rat::int(p as i64), precision_bits)?.mul_int(10 * p as i64);
    let log_succ = BigFloat::ln_rat(&Rat::int(pq100 + 1), precision_bits)?;
    let log_ratio = BigFloat::ln_rat(&Rat::frac(pq100 + 1, pq100), precision_bits)?;
    let third = ln2
        .mul_int(pq100)
        .add(&log_succ.add(&log_ratio.mul_int(pq100)).mul_int(100));
    let fourth = BigFloat::from_int(1000 * p as i64 * q as i64, precision_bits);

    let sum = first.add(&second).add(&third).add(&fourth);
    Ok(sum.mul_int(g as i64))
}

/// CSV comparison of computed thresholds against the reference table, one
/// row per cell. The two columns answer different readings of the family
/// bound; the table reports both without reconciling them.
pub fn threshold_table_csv(precision_bits: u32) -> Result<String> {
    let mut out = String::from("g,p,q,reference_threshold,computed_threshold,difference\n");
    for g in 2..=6u32 {
        for &p in &TABLE_PRIMES {
            for q in 1..=4u32 {
                let reference = reference_threshold(g, p, q).expect("cell inside the table");
                let computed = family_threshold(g, p, q, precision_bits)?;
                let difference = computed.sub(&BigFloat::from_int(reference as i64, precision_bits));
                out.push_str(&format!(
                    "{g},{p},{q},{reference},{},{}\n",
                    computed.decimal(12),
                    difference.decimal(12)
                ));
            }
        }
    }
    Ok(out)
}

/// One point of the denominator growth diagnostic.
#[derive(Debug, Clone, Serialize)]
pub struct GrowthSample {
    pub n: usize,
    pub log_lcm_over_n: BigFloat,
}

/// Empirical growth rate `log(D_n)/n` of the shared denominator
/// `D_n = lcm_j { a_j, a_j + b_j, ..., a_j + b_j (ρm(n+1)+1) }` over the
/// shifts `x_j = a_j/b_j`, for comparison against
/// [`denominator_growth_bound`].
pub fn denominator_growth_samples(
    shifts: &[(ShiftParam, usize)],
    m: usize,
    ns: &[usize],
    precision_bits: u32,
) -> Result<Vec<GrowthSample>> {
    if shifts.is_empty() || m == 0 {
        return Err(Error::InvalidArgument {
            operation: "denominator growth",
            reason: "at least one shift and one alpha required".into(),
        });
    }
    let rho: usize = shifts.iter().map(|&(_, r)| r).sum();
    let mut out = Vec::with_capacity(ns.len());
    for &n in ns {
        if n == 0 {
            return Err(Error::InvalidArgument {
                operation: "denominator growth",
                reason: "n must be positive".into(),
            });
        }
        let last = rho * m * (n + 1) + 1;
        let mut d = BigInt::one();
        for (x, _) in shifts {
            let lcm = progression_lcm(x.value().numer(), x.value().denom(), last)?;
            d = d.lcm(&lcm);
        }
        let ratio =
            BigFloat::ln_rat(&Rat::from_bigint(d), precision_bits)?.div_int(n as i64)?;
        out.push(GrowthSample {
            n,
            log_lcm_over_n: ratio,
        });
    }
    Ok(out)
}
