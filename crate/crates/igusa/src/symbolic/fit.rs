//! Recovering rational functions from finitely many power-series terms.
//!
//! The zeta integrals in scope have denominators that are products of
//! factors 1 - q^(-a) t^b. Given a truncated shell-measure series and a
//! list of candidate factors, we search denominators dividing the candidate
//! product, smallest total degree first, and accept the first candidate
//! whose induced numerator reproduces the *entire* series. At least two
//! trailing series terms are never consumed by the solve: they act as
//! held-out verification, guarding against ansatz overfitting.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rat::{q_pow, rat_int, Rat};
use crate::symbolic::qpoly::QPoly;
use crate::symbolic::ratfunc::RatFunc;

/// A candidate denominator factor 1 - q^(-a) t^b.
pub type AnsatzFactor = (u32, u32);

/// Provenance record for a fitted rational function.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FitMeta {
    /// Factors (a, b) actually used in the denominator, with multiplicity.
    pub factors: Vec<AnsatzFactor>,
    /// Degree of the fitted numerator.
    pub numerator_degree: usize,
    /// Number of series terms supplied.
    pub series_len: usize,
    /// Number of trailing terms that served as held-out verification.
    pub verified_terms: usize,
}

/// The polynomial 1 - q^(-a) t^b.
pub fn ansatz_factor_poly(q: u64, a: u32, b: u32) -> QPoly {
    QPoly::from_coeffs(vec![rat_int(1)])
        .sub(&QPoly::monomial(q_pow(q, -(a as i64)), b as usize))
}

fn product(q: u64, factors: &[AnsatzFactor]) -> QPoly {
    let mut d = QPoly::one();
    for &(a, b) in factors {
        d = d.mul(&ansatz_factor_poly(q, a, b));
    }
    d
}

/// Try a fixed denominator: the numerator is the truncation of D*S, and
/// every remaining term of D*S must vanish. Returns the failing order on
/// mismatch.
fn try_denominator(
    series: &[Rat],
    den: &QPoly,
    max_num_deg: usize,
) -> std::result::Result<QPoly, usize> {
    let n = series.len();
    let s = QPoly::from_coeffs(series.to_vec());
    let prod = den.series_mul(&s, n);
    for k in (max_num_deg + 1)..n {
        if !prod.coeff(k).is_zero() {
            return Err(k);
        }
    }
    Ok(QPoly::from_coeffs(
        (0..=max_num_deg).map(|k| prod.coeff(k)).collect(),
    ))
}

/// All sub-multisets of the candidate list with total t-degree exactly
/// `deg`, in deterministic order.
fn multisets_of_degree(
    distinct: &[(AnsatzFactor, usize)],
    deg: usize,
) -> Vec<Vec<AnsatzFactor>> {
    let mut out = Vec::new();
    let mut chosen: Vec<AnsatzFactor> = Vec::new();
    fn rec(
        distinct: &[(AnsatzFactor, usize)],
        idx: usize,
        remaining: usize,
        chosen: &mut Vec<AnsatzFactor>,
        out: &mut Vec<Vec<AnsatzFactor>>,
    ) {
        if remaining == 0 {
            out.push(chosen.clone());
            return;
        }
        if idx >= distinct.len() {
            return;
        }
        let ((a, b), avail) = distinct[idx];
        let step = b as usize;
        let max_here = if step == 0 { 0 } else { (remaining / step).min(avail) };
        for count in 0..=max_here {
            for _ in 0..count {
                chosen.push((a, b));
            }
            rec(distinct, idx + 1, remaining - count * step, chosen, out);
            for _ in 0..count {
                chosen.pop();
            }
        }
    }
    rec(distinct, 0, deg, &mut chosen, &mut out);
    out
}

/// Fit a rational function to a truncated series.
///
/// * `candidates` lists the allowed denominator factors. With
///   `exact_denominator` the product of all of them is used verbatim (a
///   pinned ansatz); otherwise sub-multisets are searched, each factor used
///   at most as often as it is listed.
/// * The numerator degree is at most `max_num_deg`.
/// * Searched denominators count toward the unknowns, so a candidate with
///   denominator degree d and numerator degree e needs
///   series.len() >= (e + 1) + d + 2; a pinned denominator needs only
///   series.len() >= (e + 1) + 2.
pub fn fit_rational(
    series: &[Rat],
    q: u64,
    candidates: &[AnsatzFactor],
    max_num_deg: usize,
    exact_denominator: bool,
) -> Result<(RatFunc, FitMeta)> {
    let n = series.len();

    if exact_denominator {
        let need = max_num_deg + 1 + 2;
        if n < need {
            return Err(Error::Underdetermined { have: n, need });
        }
        let den = product(q, candidates);
        return match try_denominator(series, &den, max_num_deg) {
            Ok(num) => {
                let meta = FitMeta {
                    factors: candidates.to_vec(),
                    numerator_degree: num.degree().unwrap_or(0),
                    series_len: n,
                    verified_terms: n - (max_num_deg + 1),
                };
                Ok((RatFunc::new(num, den, q), meta))
            }
            Err(k) => Err(Error::Inconsistent { failing_order: k }),
        };
    }

    if n < 3 {
        return Err(Error::Underdetermined { have: n, need: 3 });
    }
    let mut distinct: Vec<(AnsatzFactor, usize)> = Vec::new();
    {
        let mut sorted = candidates.to_vec();
        sorted.sort();
        for f in sorted {
            match distinct.last_mut() {
                Some((g, c)) if *g == f => *c += 1,
                _ => distinct.push((f, 1)),
            }
        }
    }

    let mut deepest_fail: Option<usize> = None;
    let max_total = n - 3;
    for total in 0..=max_total {
        for d_num in 0..=total.min(max_num_deg) {
            let d_den = total - d_num;
            for chosen in multisets_of_degree(&distinct, d_den) {
                let den = product(q, &chosen);
                match try_denominator(series, &den, d_num) {
                    Ok(num) => {
                        let meta = FitMeta {
                            factors: chosen,
                            numerator_degree: num.degree().unwrap_or(0),
                            series_len: n,
                            verified_terms: n - (d_num + 1) - d_den,
                        };
                        return Ok((RatFunc::new(num, den, q), meta));
                    }
                    Err(k) => {
                        deepest_fail = Some(deepest_fail.map_or(k, |p| p.max(k)));
                    }
                }
            }
        }
    }

    match deepest_fail {
        Some(k) => Err(Error::Inconsistent { failing_order: k }),
        None => Err(Error::Underdetermined {
            have: n,
            need: max_num_deg + 1 + 3,
        }),
    }
}

/// Consistency oracle linking point counts to the zeta integral: with
/// P(t) = sum over m of N_m q^(-m n) t^m truncated at order M, the fitted
/// Z must satisfy (1 - t) P(t) + t Z(t) = 1 through order M.
pub fn igusa_relation_check(poincare: &[Rat], z: &RatFunc) -> Result<bool> {
    if poincare.is_empty() {
        return Ok(true);
    }
    let order = poincare.len(); // check through t^(order-1)
    let zt = z.taylor(order)?;
    for k in 0..order {
        // coefficient of t^k in (1-t) P + t Z
        let mut c = poincare[k].clone();
        if k > 0 {
            c -= &poincare[k - 1];
            c += &zt[k - 1];
        }
        let expect = if k == 0 { rat_int(1) } else { Rat::zero() };
        if c != expect {
            return Ok(false);
        }
    }
    Ok(true)
}
