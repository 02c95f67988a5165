//! Simultaneous Padé data for the shifted polylogarithm family.
//!
//! An [`Instance`] fixes evaluation points `α_1..α_m`, shift/depth pairs
//! `(x_j, r_j)`, and a weight `n`. From the seed polynomials
//! `A_l(t) = t^l ∏_i (t-α_i)^{ρn}` the system builds `P_l` by applying the
//! coefficientwise operators, the companion polynomials `P_{l,i,s}` from
//! difference quotients, and remainder tails whose leading coefficients
//! vanish up to the weight. [`verify_order`] checks all of the degree and
//! vanishing claims exactly and reports the first violation, if any.

use serde::Serialize;

use crate::operators::{apply_phi, apply_s, ShiftParam};
use crate::poly::{Poly, Var};
use crate::rat::Rat;
use crate::series::TruncatedSeries;
use crate::{Error, Result};

/// One coordinate of the approximation vector: evaluation point `alpha_i`,
/// shift `x_j`, and depth `s` with `1 <= s <= r_j`. Indices `i` and `j` are
/// zero-based positions in the instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Cell {
    pub i: usize,
    pub j: usize,
    pub s: usize,
}

/// Validated problem data.
#[derive(Clone, Debug, Serialize)]
pub struct Instance {
    alphas: Vec<Rat>,
    shifts: Vec<(ShiftParam, usize)>,
    n: usize,
}

impl Instance {
    pub fn new(alphas: Vec<Rat>, shifts: Vec<(ShiftParam, usize)>, n: usize) -> Result<Self> {
        if alphas.is_empty() {
            return Err(Error::InvalidInstance {
                reason: "at least one alpha required".into(),
            });
        }
        for (i, a) in alphas.iter().enumerate() {
            if a.is_zero() {
                return Err(Error::InvalidInstance {
                    reason: format!("alpha_{} is zero", i + 1),
                });
            }
            for (k, b) in alphas.iter().enumerate().skip(i + 1) {
                if a == b {
                    return Err(Error::InvalidInstance {
                        reason: format!("alpha_{} equals alpha_{}", i + 1, k + 1),
                    });
                }
            }
        }
        if shifts.is_empty() {
            return Err(Error::InvalidInstance {
                reason: "at least one shift required".into(),
            });
        }
        for (j, (x, r)) in shifts.iter().enumerate() {
            if *r == 0 {
                return Err(Error::InvalidInstance {
                    reason: format!("multiplicity r_{} must be positive", j + 1),
                });
            }
            if x.value().is_negative() || x.value() >= &Rat::one() {
                return Err(Error::InvalidInstance {
                    reason: format!("shift x_{} = {} outside [0, 1)", j + 1, x.value()),
                });
            }
            for (k, (y, _)) in shifts.iter().enumerate().skip(j + 1) {
                if (x.value() - y.value()).is_integer() {
                    return Err(Error::InvalidInstance {
                        reason: format!(
                            "shifts x_{} and x_{} differ by an integer",
                            j + 1,
                            k + 1
                        ),
                    });
                }
            }
        }
        if n == 0 {
            return Err(Error::InvalidInstance {
                reason: "weight n must be positive".into(),
            });
        }
        Ok(Instance { alphas, shifts, n })
    }

    pub fn alphas(&self) -> &[Rat] {
        &self.alphas
    }

    pub fn shifts(&self) -> &[(ShiftParam, usize)] {
        &self.shifts
    }

    pub fn m(&self) -> usize {
        self.alphas.len()
    }

    pub fn d(&self) -> usize {
        self.shifts.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `ρ = Σ_j r_j`.
    pub fn rho(&self) -> usize {
        self.shifts.iter().map(|(_, r)| r).sum()
    }

    pub fn rho_m(&self) -> usize {
        self.rho() * self.m()
    }

    /// All `(i, j, s)` coordinates in lexicographic order.
    pub fn cells(&self) -> Vec<Cell> {
        let mut out = Vec::with_capacity(self.rho_m());
        for i in 0..self.m() {
            for (j, (_, r)) in self.shifts.iter().enumerate() {
                for s in 1..=*r {
                    out.push(Cell { i, j, s });
                }
            }
        }
        out
    }

    fn check_l(&self, l: usize) -> Result<()> {
        if l > self.rho_m() {
            return Err(Error::InvalidArgument {
                operation: "pade index",
                reason: format!("l = {l} exceeds rho*m = {}", self.rho_m()),
            });
        }
        Ok(())
    }
}

/// `A_l(t) = t^l ∏_i (t - α_i)^{ρn}`.
pub fn build_a(l: usize, inst: &Instance) -> Result<Poly> {
    inst.check_l(l)?;
    let rho_n = inst.rho() * inst.n();
    let mut p = Poly::monomial(Var::T, l);
    for a in inst.alphas() {
        let factor = Poly::new(Var::T, vec![-a, Rat::one()]);
        p = &p * &factor.pow(rho_n);
    }
    Ok(p)
}

/// `P_l` as a polynomial in `t`: every operator `S_{n,x_j}` applied `r_j`
/// times to `A_l`. The operators are diagonal, so composition order is
/// immaterial.
fn build_p_t(l: usize, inst: &Instance) -> Result<Poly> {
    let mut p = build_a(l, inst)?;
    for (x, r) in inst.shifts() {
        for _ in 0..*r {
            p = apply_s(inst.n(), x, &p);
        }
    }
    Ok(p)
}

/// `P_l(z)`, of degree exactly `ρmn + l`.
pub fn build_p(l: usize, inst: &Instance) -> Result<Poly> {
    Ok(build_p_t(l, inst)?.rename(Var::Z))
}

/// `P_{l,i,s}(z)`: the kernel map applied in `t` to the difference quotient
/// `(P_l(z) - P_l(t))/(z - t)`, coefficientwise in `z`.
pub fn build_p_cell(l: usize, cell: Cell, inst: &Instance) -> Result<Poly> {
    let p_t = build_p_t(l, inst)?;
    let alpha = &inst.alphas()[cell.i];
    let (x, _) = &inst.shifts()[cell.j];
    let c = p_t.coeffs();
    let deg = c.len().saturating_sub(1);
    let mut z_coeffs = Vec::with_capacity(deg);
    for q in 0..deg {
        // coefficient of z^q is phi applied to Σ_b c_{q+1+b} t^b
        let tail = Poly::new(Var::T, c[q + 1..].to_vec());
        z_coeffs.push(apply_phi(alpha, x, cell.s, &tail));
    }
    Ok(Poly::new(Var::Z, z_coeffs))
}

/// Tail of `P_l(z)·Φ − P_{l,i,s}(z)` at infinity: the coefficient of
/// `z^{-k-1}` is the kernel map applied to `t^k P_l(t)`, for `k` up to
/// `terms - 1`.
pub fn remainder_series(
    l: usize,
    cell: Cell,
    inst: &Instance,
    terms: usize,
) -> Result<TruncatedSeries> {
    if terms < inst.n() + 2 {
        return Err(Error::InvalidArgument {
            operation: "remainder_series",
            reason: format!("terms = {terms} below n + 2 = {}", inst.n() + 2),
        });
    }
    let p_t = build_p_t(l, inst)?;
    let alpha = &inst.alphas()[cell.i];
    let (x, _) = &inst.shifts()[cell.j];
    let coeffs = (0..terms)
        .map(|k| apply_phi(alpha, x, cell.s, &p_t.mul_monomial(k)))
        .collect();
    Ok(TruncatedSeries::new(1, coeffs))
}

/// Default tail length: enough to witness the first nonzero coefficient in
/// every desk-scale configuration.
pub fn default_terms(inst: &Instance) -> usize {
    inst.n() + inst.rho_m() + 4
}

/// The full system: all `P_l`, all companion polynomials, all remainder
/// prefixes, in cell order.
#[derive(Clone, Debug, Serialize)]
pub struct PadeSystem {
    pub instance: Instance,
    pub cells: Vec<Cell>,
    /// `p[l]` is `P_l(z)` for `l = 0..=ρm`.
    pub p: Vec<Poly>,
    /// `p_cells[l][c]` is `P_{l,i,s}(z)` for cell index `c`.
    pub p_cells: Vec<Vec<Poly>>,
    /// `remainders[l][c]` is the tail prefix for the same pair.
    pub remainders: Vec<Vec<TruncatedSeries>>,
}

impl PadeSystem {
    pub fn build(inst: &Instance) -> Result<Self> {
        Self::build_with_terms(inst, default_terms(inst))
    }

    pub fn build_with_terms(inst: &Instance, terms: usize) -> Result<Self> {
        let cells = inst.cells();
        let mut p = Vec::new();
        let mut p_cells = Vec::new();
        let mut remainders = Vec::new();
        for l in 0..=inst.rho_m() {
            p.push(build_p(l, inst)?);
            let mut row = Vec::new();
            let mut rrow = Vec::new();
            for &cell in &cells {
                row.push(build_p_cell(l, cell, inst)?);
                rrow.push(remainder_series(l, cell, inst, terms)?);
            }
            p_cells.push(row);
            remainders.push(rrow);
        }
        Ok(PadeSystem {
            instance: inst.clone(),
            cells,
            p,
            p_cells,
            remainders,
        })
    }
}

/// Outcome of the exact degree and vanishing checks.
#[derive(Clone, Debug, Serialize)]
pub struct OrderReport {
    /// `deg P_l`, which must equal `ρmn + l`.
    pub degrees: Vec<usize>,
    /// Max over cells of `deg P_{l,i,s}`, bounded by `ρmn + l`.
    pub cell_max_degrees: Vec<Option<usize>>,
    /// Vanishing coefficients verified per remainder: all of `z^{-1}` up to
    /// `z^{-n}` are zero for every `(l, i, j, s)`.
    pub verified_vanishing: usize,
    pub required_vanishing: usize,
}

/// Checks every degree claim and remainder-vanishing claim of the system,
/// returning the first violated index on failure.
pub fn verify_order(inst: &Instance) -> Result<OrderReport> {
    let sys = PadeSystem::build(inst)?;
    let rho_mn = inst.rho() * inst.m() * inst.n();
    let n = inst.n();
    let mut degrees = Vec::new();
    let mut cell_max_degrees = Vec::new();
    for (l, p) in sys.p.iter().enumerate() {
        match p.degree() {
            Some(d) if d == rho_mn + l => degrees.push(d),
            d => {
                return Err(Error::VerificationFailed {
                    check: "pade degree",
                    detail: format!("deg P_{l} = {d:?}, expected {}", rho_mn + l),
                })
            }
        }
        let mut max_deg = None;
        for (c, q) in sys.p_cells[l].iter().enumerate() {
            if let Some(d) = q.degree() {
                if d > rho_mn + l {
                    let cell = sys.cells[c];
                    return Err(Error::VerificationFailed {
                        check: "pade cell degree",
                        detail: format!(
                            "deg P_(l={l},i={},j={},s={}) = {d}, bound {}",
                            cell.i + 1,
                            cell.j + 1,
                            cell.s,
                            rho_mn + l
                        ),
                    });
                }
                max_deg = Some(max_deg.map_or(d, |m: usize| m.max(d)));
            }
        }
        cell_max_degrees.push(max_deg);
    }
    let mut verified = 0usize;
    for (l, row) in sys.remainders.iter().enumerate() {
        for (c, series) in row.iter().enumerate() {
            for k in 0..n {
                let coeff = series.coeff(k + 1).expect("within truncation");
                if !coeff.is_zero() {
                    let cell = sys.cells[c];
                    return Err(Error::VerificationFailed {
                        check: "pade order",
                        detail: format!(
                            "remainder coefficient z^-{} nonzero at l={l}, i={}, j={}, s={}: {coeff}",
                            k + 1,
                            cell.i + 1,
                            cell.j + 1,
                            cell.s
                        ),
                    });
                }
                verified += 1;
            }
        }
    }
    Ok(OrderReport {
        degrees,
        cell_max_degrees,
        verified_vanishing: verified,
        required_vanishing: (sys.p.len()) * sys.cells.len() * n,
    })
}
