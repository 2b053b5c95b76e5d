//! Exact p-adic groundwork: valuations, Haar-measure shells, and
//! brute-force counting of polynomial zeros modulo p^m.
//!
//! Only F = Q_p is supported: the residue cardinality q equals p, the ring
//! of integers is Z_p and the uniformizer is p itself. Every formula in
//! scope depends only on q, so this loses no generality for the built-in
//! scenarios. Haar measure is normalized so that R^n has measure 1.
//!
//! Counting is exhaustive enumeration organized as a lifting tree: a
//! solution modulo p^(m+1) reduces to a solution modulo p^m, so each level
//! only examines the p^n lifts of the previous level's solutions. No
//! Hensel/Newton steps are involved; the tree is plain enumeration with
//! pruning by depth, and a hard budget bounds the number of residue tuples
//! examined.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rat::{q_pow, val_p, Int, Rat};

/// Default cap on enumerated residue tuples.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// The local field Q_p together with an enumeration budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalFieldParams {
    p: u64,
    enumeration_budget: u64,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl LocalFieldParams {
    pub fn new(p: u64, enumeration_budget: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::BadScenario(format!("{p} is not prime")));
        }
        if enumeration_budget == 0 {
            return Err(Error::BadScenario("zero enumeration budget".into()));
        }
        Ok(LocalFieldParams {
            p,
            enumeration_budget,
        })
    }

    pub fn with_default_budget(p: u64) -> Result<Self> {
        Self::new(p, DEFAULT_BUDGET)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Residue cardinality; equals p for Q_p.
    pub fn q(&self) -> u64 {
        self.p
    }

    pub fn budget(&self) -> u64 {
        self.enumeration_budget
    }
}

/// A polynomial with exact integer coefficients on affine n-space.
///
/// Terms are kept sorted by exponent vector with no duplicates and no zero
/// coefficients. `declared_degree`, when present, asserts homogeneity of
/// that total degree (checked at construction).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct IntPolynomial {
    nvars: usize,
    terms: Vec<(Int, Vec<u32>)>,
    declared_degree: Option<u32>,
}

impl IntPolynomial {
    pub fn new(
        nvars: usize,
        terms: Vec<(Int, Vec<u32>)>,
        declared_degree: Option<u32>,
    ) -> Result<Self> {
        if nvars == 0 {
            return Err(Error::BadScenario("polynomial needs at least one variable".into()));
        }
        let mut merged: BTreeMap<Vec<u32>, Int> = BTreeMap::new();
        for (c, e) in terms {
            if e.len() != nvars {
                return Err(Error::DimensionMismatch {
                    expected: nvars,
                    got: e.len(),
                });
            }
            *merged.entry(e).or_insert_with(Int::zero) += c;
        }
        let terms: Vec<(Int, Vec<u32>)> = merged
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| (c, e))
            .collect();
        if let Some(d) = declared_degree {
            for (_, e) in &terms {
                let total: u32 = e.iter().sum();
                if total != d {
                    return Err(Error::BadScenario(format!(
                        "declared degree {d} but found a term of total degree {total}"
                    )));
                }
            }
        }
        Ok(IntPolynomial {
            nvars,
            terms,
            declared_degree,
        })
    }

    pub fn zero(nvars: usize) -> Self {
        IntPolynomial {
            nvars,
            terms: Vec::new(),
            declared_degree: None,
        }
    }

    /// The i-th coordinate function.
    pub fn variable(i: usize, nvars: usize) -> Self {
        let mut e = vec![0u32; nvars];
        e[i] = 1;
        IntPolynomial {
            nvars,
            terms: vec![(Int::from(1), e)],
            declared_degree: Some(1),
        }
    }

    /// A single monomial c * prod x_i^{e_i}.
    pub fn monomial(c: i64, exps: Vec<u32>) -> Self {
        let nvars = exps.len();
        IntPolynomial::new(nvars, vec![(Int::from(c), exps)], None).unwrap()
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(Int, Vec<u32>)] {
        &self.terms
    }

    pub fn declared_degree(&self) -> Option<u32> {
        self.declared_degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(_, e)| e.iter().sum()).max()
    }

    pub fn add(&self, other: &IntPolynomial) -> Result<IntPolynomial> {
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                got: other.nvars,
            });
        }
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        IntPolynomial::new(self.nvars, terms, None)
    }

    pub fn mul(&self, other: &IntPolynomial) -> Result<IntPolynomial> {
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                got: other.nvars,
            });
        }
        let mut terms = Vec::new();
        for (c1, e1) in &self.terms {
            for (c2, e2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                terms.push((c1 * c2, e));
            }
        }
        IntPolynomial::new(self.nvars, terms, None)
    }

    pub fn scale(&self, c: i64) -> IntPolynomial {
        IntPolynomial::new(
            self.nvars,
            self.terms
                .iter()
                .map(|(a, e)| (a * Int::from(c), e.clone()))
                .collect(),
            None,
        )
        .unwrap()
    }

    /// Re-declare homogeneity (validated).
    pub fn with_degree(self, d: u32) -> Result<IntPolynomial> {
        IntPolynomial::new(self.nvars, self.terms, Some(d))
    }

    pub fn eval_int(&self, x: &[Int]) -> Int {
        let mut acc = Int::zero();
        for (c, e) in &self.terms {
            let mut term = c.clone();
            for (xi, &ei) in x.iter().zip(e) {
                for _ in 0..ei {
                    term *= xi;
                }
            }
            acc += term;
        }
        acc
    }

    pub fn eval_rat(&self, x: &[Rat]) -> Rat {
        let mut acc = Rat::zero();
        for (c, e) in &self.terms {
            let mut term = Rat::from_integer(c.clone());
            for (xi, &ei) in x.iter().zip(e) {
                for _ in 0..ei {
                    term *= xi;
                }
            }
            acc += term;
        }
        acc
    }

    /// Substitute x_i = base_i + p^level * u_i and split off the p-content:
    /// returns (v, h) with f(base + p^level u) = p^v h(u) and h a primitive
    /// integer polynomial. Requires every base entry to be a p-power
    /// denominator rational.
    pub fn substitute_affine(
        &self,
        base: &[Rat],
        p: u64,
        level: i64,
    ) -> Result<(i64, IntPolynomial)> {
        if base.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                got: base.len(),
            });
        }
        for b in base {
            let mut d = b.denom().abs();
            let pp = Int::from(p);
            while (&d % &pp).is_zero() {
                d /= &pp;
            }
            if d != Int::from(1) {
                return Err(Error::InvalidCoset(format!(
                    "base entry {b} does not have a p-power denominator"
                )));
            }
        }
        let s = q_pow(p, level);
        // Expand term by term with binomials.
        let mut acc: BTreeMap<Vec<u32>, Rat> = BTreeMap::new();
        for (c, exps) in &self.terms {
            // Per-variable expansions of (b_i + s u_i)^{e_i}.
            let mut parts: Vec<Vec<(u32, Rat)>> = Vec::with_capacity(self.nvars);
            for (i, &e) in exps.iter().enumerate() {
                let mut choices = Vec::with_capacity(e as usize + 1);
                // C(e, j) b^(e-j) s^j u^j
                let mut binom = Rat::from_integer(Int::from(1));
                for j in 0..=e {
                    let b_pow = {
                        let mut v = Rat::from_integer(Int::from(1));
                        for _ in 0..(e - j) {
                            v *= &base[i];
                        }
                        v
                    };
                    let s_pow = {
                        let mut v = Rat::from_integer(Int::from(1));
                        for _ in 0..j {
                            v *= &s;
                        }
                        v
                    };
                    choices.push((j, &binom * b_pow * s_pow));
                    // next binomial coefficient
                    binom = binom * Rat::from_integer(Int::from((e - j) as i64))
                        / Rat::from_integer(Int::from((j + 1) as i64));
                }
                parts.push(choices);
            }
            // Cartesian product of choices.
            let mut stack: Vec<(usize, Vec<u32>, Rat)> =
                vec![(0, vec![0; self.nvars], Rat::from_integer(c.clone()))];
            while let Some((i, e, coef)) = stack.pop() {
                if i == self.nvars {
                    *acc.entry(e).or_insert_with(Rat::zero) += coef;
                    continue;
                }
                for (j, w) in &parts[i] {
                    if w.is_zero() {
                        continue;
                    }
                    let mut e2 = e.clone();
                    e2[i] = *j;
                    stack.push((i + 1, e2, &coef * w));
                }
            }
        }
        let acc: Vec<(Vec<u32>, Rat)> = acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        if acc.is_empty() {
            return Err(Error::BadScenario(
                "substitution produced the zero polynomial".into(),
            ));
        }
        let v = acc
            .iter()
            .map(|(_, c)| val_p(c, p).expect("nonzero"))
            .min()
            .unwrap();
        let scale = q_pow(p, -v);
        let terms: Vec<(Int, Vec<u32>)> = acc
            .into_iter()
            .map(|(e, c)| {
                let w = c * &scale;
                debug_assert!(w.denom() == &Int::from(1));
                (w.numer().clone(), e)
            })
            .collect();
        Ok((v, IntPolynomial::new(self.nvars, terms, None)?))
    }

    /// Pull out the integer p-content: f = p^v h with h primitive mod p.
    /// Identity on polynomials that already have a unit coefficient.
    pub fn extract_content(&self, p: u64) -> (i64, IntPolynomial) {
        if self.is_zero() {
            return (0, self.clone());
        }
        let v = self
            .terms
            .iter()
            .map(|(c, _)| val_p(&Rat::from_integer(c.clone()), p).expect("nonzero"))
            .min()
            .unwrap();
        if v == 0 {
            return (0, self.clone());
        }
        let div = Int::from(p).pow(v as u32);
        let terms = self
            .terms
            .iter()
            .map(|(c, e)| (c / &div, e.clone()))
            .collect();
        (
            v,
            IntPolynomial {
                nvars: self.nvars,
                terms,
                declared_degree: self.declared_degree,
            },
        )
    }

    /// External JSON form:
    /// {"nvars": n, "terms": [[coef, [e1,...,en]], ...], "degree": d|null}.
    /// Coefficients are emitted as JSON integers when they fit i64 and as
    /// decimal strings otherwise; both are accepted on input.
    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .terms
            .iter()
            .map(|(c, e)| {
                let coef = match c.to_i64() {
                    Some(v) => serde_json::json!(v),
                    None => serde_json::json!(c.to_string()),
                };
                serde_json::json!([coef, e])
            })
            .collect();
        serde_json::json!({
            "nvars": self.nvars,
            "terms": terms,
            "degree": self.declared_degree,
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<IntPolynomial> {
        let o = v
            .as_object()
            .ok_or_else(|| Error::Json("polynomial must be an object".into()))?;
        let nvars = o
            .get("nvars")
            .and_then(|x| x.as_u64())
            .ok_or_else(|| Error::Json("missing nvars".into()))? as usize;
        if nvars == 0 || nvars > 64 {
            return Err(Error::Json("nvars out of range".into()));
        }
        let degree = match o.get("degree") {
            None | Some(serde_json::Value::Null) => None,
            Some(d) => Some(
                d.as_u64()
                    .ok_or_else(|| Error::Json("degree must be a positive integer".into()))?
                    as u32,
            ),
        };
        let raw = o
            .get("terms")
            .and_then(|x| x.as_array())
            .ok_or_else(|| Error::Json("missing terms".into()))?;
        let mut terms = Vec::with_capacity(raw.len());
        for t in raw {
            let pair = t
                .as_array()
                .filter(|a| a.len() == 2)
                .ok_or_else(|| Error::Json("term must be [coef, exps]".into()))?;
            let coef: Int = match &pair[0] {
                serde_json::Value::Number(n) => {
                    let i = n
                        .as_i64()
                        .ok_or_else(|| Error::Json("coefficient must be an integer".into()))?;
                    Int::from(i)
                }
                serde_json::Value::String(s) => s
                    .parse()
                    .map_err(|_| Error::Json(format!("bad coefficient {s:?}")))?,
                _ => return Err(Error::Json("coefficient must be int or string".into())),
            };
            let exps_raw = pair[1]
                .as_array()
                .ok_or_else(|| Error::Json("exponents must be an array".into()))?;
            let mut exps = Vec::with_capacity(exps_raw.len());
            for e in exps_raw {
                let e = e
                    .as_u64()
                    .ok_or_else(|| Error::Json("exponent must be a non-negative integer".into()))?;
                if e > 64 {
                    return Err(Error::Json("exponent out of range".into()));
                }
                exps.push(e as u32);
            }
            terms.push((coef, exps));
        }
        IntPolynomial::new(nvars, terms, degree)
    }

    pub fn from_json_str(s: &str) -> Result<IntPolynomial> {
        let v: serde_json::Value = serde_json::from_str(s)?;
        IntPolynomial::from_json(&v)
    }
}

/// Per-modulus evaluator with u64 arithmetic. Moduli are capped so products
/// of two reduced residues never overflow.
struct ModEval {
    modulus: u64,
    terms: Vec<(u64, Vec<u32>)>,
}

impl ModEval {
    fn new(f: &IntPolynomial, modulus: u64) -> Self {
        let m = Int::from(modulus);
        let terms = f
            .terms
            .iter()
            .map(|(c, e)| {
                let r = c.mod_floor(&m).to_u64().expect("reduced residue fits u64");
                (r, e.clone())
            })
            .filter(|(c, _)| *c != 0)
            .collect();
        ModEval { modulus, terms }
    }

    #[inline]
    fn eval(&self, x: &[u64]) -> u64 {
        let m = self.modulus;
        let mut acc: u64 = 0;
        for (c, e) in &self.terms {
            let mut term = *c;
            for (xi, &ei) in x.iter().zip(e) {
                for _ in 0..ei {
                    term = term * xi % m;
                }
            }
            acc = (acc + term) % m;
        }
        acc
    }
}

struct Budget {
    used: u64,
    cap: u64,
}

impl Budget {
    fn charge(&mut self, n: u64) -> Result<()> {
        let next = self.used.checked_add(n).ok_or(Error::BudgetExceeded {
            needed: u128::MAX,
            budget: self.cap,
        })?;
        if next > self.cap {
            return Err(Error::BudgetExceeded {
                needed: next as u128,
                budget: self.cap,
            });
        }
        self.used = next;
        Ok(())
    }
}

/// Counts N_0..N_max_level of solutions of f = 0 in (Z/p^m)^n, computed by
/// the lifting tree. N_0 = 1 by the empty congruence.
pub fn count_series(
    f: &IntPolynomial,
    params: &LocalFieldParams,
    max_level: usize,
) -> Result<Vec<u64>> {
    let p = params.p();
    let n = f.nvars();
    let mut counts = vec![1u64];
    if max_level == 0 {
        return Ok(counts);
    }
    let pn = (p as u128).pow(n as u32);
    if pn > u32::MAX as u128 {
        return Err(Error::BudgetExceeded {
            needed: pn,
            budget: params.budget(),
        });
    }
    let mut budget = Budget {
        used: 0,
        cap: params.budget(),
    };
    // Solutions at the current level, flattened with stride n.
    let mut sols: Vec<u32> = vec![0; n];
    let mut level_count = 1u64;
    for level in 1..=max_level {
        let modulus = (p as u128).pow(level as u32);
        if modulus > (1u128 << 31) {
            return Err(Error::BudgetExceeded {
                needed: modulus,
                budget: params.budget(),
            });
        }
        let modulus = modulus as u64;
        let eval = ModEval::new(f, modulus);
        let step = modulus / p; // p^(level-1)
        budget.charge(level_count.saturating_mul(pn as u64))?;
        let keep = level < max_level;
        let mut next: Vec<u32> = Vec::new();
        let mut next_count = 0u64;
        let mut x = vec![0u64; n];
        let mut offsets = vec![0u64; n];
        for s in sols.chunks(n) {
            offsets.iter_mut().for_each(|o| *o = 0);
            loop {
                for i in 0..n {
                    x[i] = s[i] as u64 + offsets[i] * step;
                }
                if eval.eval(&x) == 0 {
                    next_count += 1;
                    if keep {
                        next.extend(x.iter().map(|&v| v as u32));
                    }
                }
                // Increment mixed-radix offsets in base p.
                let mut i = 0;
                loop {
                    if i == n {
                        break;
                    }
                    offsets[i] += 1;
                    if offsets[i] < p {
                        break;
                    }
                    offsets[i] = 0;
                    i += 1;
                }
                if i == n {
                    break;
                }
            }
        }
        counts.push(next_count);
        level_count = next_count;
        sols = next;
        if !keep {
            break;
        }
        if next_count == 0 {
            // All deeper counts are zero.
            for _ in (level + 1)..=max_level {
                counts.push(0);
            }
            break;
        }
    }
    Ok(counts)
}

/// Exact count of solutions of f = 0 in (Z/p^m)^nvars.
pub fn count_zeros_mod(f: &IntPolynomial, params: &LocalFieldParams, m: usize) -> Result<u64> {
    Ok(*count_series(f, params, m)?.last().unwrap())
}

/// The count sequence N_0..N_M packaged with its invariants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointCountSeries {
    pub f: IntPolynomial,
    pub p: u64,
    pub counts: Vec<u64>,
}

impl PointCountSeries {
    pub fn compute(f: &IntPolynomial, params: &LocalFieldParams, max_level: usize) -> Result<Self> {
        let counts = count_series(f, params, max_level)?;
        let s = PointCountSeries {
            f: f.clone(),
            p: params.p(),
            counts,
        };
        s.validate()?;
        Ok(s)
    }

    /// N_0 = 1; N_{m+1} <= p^n N_m; normalized measures non-increasing.
    pub fn validate(&self) -> Result<()> {
        if self.counts.first() != Some(&1) {
            return Err(Error::BadScenario("N_0 must be 1".into()));
        }
        let n = self.f.nvars() as u32;
        let pn = (self.p as u128).pow(n);
        for w in self.counts.windows(2) {
            if (w[1] as u128) > pn * w[0] as u128 {
                return Err(Error::BadScenario(
                    "count sequence violates the lifting bound".into(),
                ));
            }
        }
        Ok(())
    }

    /// mu(val f >= m) = N_m p^(-mn), non-increasing in m.
    pub fn tail_measure(&self, m: usize) -> Rat {
        let n = self.f.nvars() as i64;
        Rat::from_integer(Int::from(self.counts[m])) * q_pow(self.p, -(m as i64) * n)
    }
}

/// Haar measures of the level sets {val f = k} for k = 0..M-1, normalized
/// so R^n has measure 1. Non-negative, and together with the tail
/// mu(val >= M) they sum to exactly 1.
pub fn shell_measures(
    f: &IntPolynomial,
    params: &LocalFieldParams,
    m_levels: usize,
) -> Result<Vec<Rat>> {
    if m_levels == 0 {
        return Ok(Vec::new());
    }
    let s = PointCountSeries::compute(f, params, m_levels)?;
    Ok((0..m_levels)
        .map(|k| s.tail_measure(k) - s.tail_measure(k + 1))
        .collect())
}

/// A coset b + p^level R^n, with base entries of denominator dividing
/// p^denom_exp.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coset {
    pub base: Vec<Rat>,
    pub denom_exp: u32,
    pub level: i64,
}

impl Coset {
    pub fn validate(&self, p: u64) -> Result<()> {
        let cap = Int::from(p).pow(self.denom_exp);
        for b in &self.base {
            if !(&cap % b.denom()).is_zero() {
                return Err(Error::InvalidCoset(format!(
                    "entry {b} has denominator beyond p^{}",
                    self.denom_exp
                )));
            }
        }
        if self.level < -(self.denom_exp as i64) {
            return Err(Error::InvalidCoset(
                "coset level below the representable lattice".into(),
            ));
        }
        Ok(())
    }
}

/// Exact count of points in the coset's residue system with val(f) >= m.
///
/// The coset is rescaled to the unit lattice: with x = b + p^N u the
/// polynomial h(u) = p^(-v) f(b + p^N u) is integral and primitive, and
/// val f >= m becomes val h >= m - v. The residue system is the coset
/// modulo p^(N + K) with K = max(m, m - v, 0), the scale at which the
/// condition is decided; when the condition is vacuous every residue
/// counts ("full coset count" = p^(n K)).
pub fn count_zeros_mod_on_coset(
    f: &IntPolynomial,
    params: &LocalFieldParams,
    m: i64,
    coset: &Coset,
) -> Result<u64> {
    coset.validate(params.p())?;
    let (v, h) = f.substitute_affine(&coset.base, params.p(), coset.level)?;
    let target = m - v;
    let k = m.max(target).max(0) as u32;
    let n = f.nvars() as u32;
    let full = |exp: u32| -> Result<u64> {
        let total = (params.p() as u128).checked_pow(exp).ok_or(Error::BudgetExceeded {
            needed: u128::MAX,
            budget: params.budget(),
        })?;
        u64::try_from(total).map_err(|_| Error::BudgetExceeded {
            needed: total,
            budget: params.budget(),
        })
    };
    if target <= 0 {
        return full(n * k);
    }
    let base = count_zeros_mod(&h, params, target as usize)?;
    // Solutions mod p^target lift freely to the residue scale.
    let lift = full(n * (k - target as u32))?;
    base.checked_mul(lift).ok_or(Error::BudgetExceeded {
        needed: (base as u128) * (lift as u128),
        budget: params.budget(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};

    pub fn det2() -> IntPolynomial {
        // x1*x4 - x2*x3
        IntPolynomial::new(
            4,
            vec![
                (Int::from(1), vec![1, 0, 0, 1]),
                (Int::from(-1), vec![0, 1, 1, 0]),
            ],
            Some(2),
        )
        .unwrap()
    }

    pub fn pairing2() -> IntPolynomial {
        // x1*y1 + x2*y2 with variable order (x1, x2, y1, y2)
        IntPolynomial::new(
            4,
            vec![
                (Int::from(1), vec![1, 0, 1, 0]),
                (Int::from(1), vec![0, 1, 0, 1]),
            ],
            Some(2),
        )
        .unwrap()
    }

    fn params(p: u64) -> LocalFieldParams {
        LocalFieldParams::with_default_budget(p).unwrap()
    }

    /// Independent oracle: plain full-grid enumeration.
    fn plain_count(f: &IntPolynomial, p: u64, m: usize) -> u64 {
        let n = f.nvars();
        let modulus = (p as u64).pow(m as u32);
        let total = modulus.pow(n as u32);
        let mut count = 0;
        for idx in 0..total {
            let mut rem = idx;
            let x: Vec<Int> = (0..n)
                .map(|_| {
                    let v = rem % modulus;
                    rem /= modulus;
                    Int::from(v)
                })
                .collect();
            let val = f.eval_int(&x);
            if val.mod_floor(&Int::from(modulus)).is_zero() {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn single_variable_counts() {
        // x = 0 mod 8 has one residue.
        let f = IntPolynomial::variable(0, 1);
        assert_eq!(count_zeros_mod(&f, &params(2), 3).unwrap(), 1);
    }

    #[test]
    fn det2_count_matches_oracle() {
        let f = det2();
        assert_eq!(count_zeros_mod(&f, &params(2), 1).unwrap(), 10);
        assert_eq!(
            count_zeros_mod(&f, &params(2), 2).unwrap(),
            plain_count(&f, 2, 2)
        );
    }

    #[test]
    fn pairing2_count_matches_oracle() {
        let f = pairing2();
        assert_eq!(count_zeros_mod(&f, &params(2), 1).unwrap(), 10);
        assert_eq!(
            count_zeros_mod(&f, &params(2), 2).unwrap(),
            plain_count(&f, 2, 2)
        );
    }

    #[test]
    fn shells_for_tate() {
        let f = IntPolynomial::variable(0, 1);
        let mu = shell_measures(&f, &params(2), 2).unwrap();
        assert_eq!(mu, vec![rat(1, 2), rat(1, 4)]);
    }

    #[test]
    fn shells_for_pairing() {
        let mu = shell_measures(&pairing2(), &params(2), 2).unwrap();
        assert_eq!(mu[0], rat(3, 8));
    }

    #[test]
    fn shells_sum_with_tail_to_one() {
        let f = det2();
        let s = PointCountSeries::compute(&f, &params(2), 4).unwrap();
        let mut total = Rat::zero();
        for k in 0..3 {
            total += s.tail_measure(k) - s.tail_measure(k + 1);
        }
        total += s.tail_measure(3);
        assert_eq!(total, rat_int(1));
    }

    #[test]
    fn budget_is_enforced() {
        let f = det2();
        let tight = LocalFieldParams::new(2, 10).unwrap();
        let err = count_zeros_mod(&f, &tight, 1).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
    }

    #[test]
    fn coset_counts() {
        let f = IntPolynomial::variable(0, 1);
        let p = params(2);
        // Units have valuation 0.
        let unit = Coset {
            base: vec![rat_int(1)],
            denom_exp: 0,
            level: 1,
        };
        assert_eq!(count_zeros_mod_on_coset(&f, &p, 1, &unit).unwrap(), 0);
        // 0 + 2 Z_2: val >= 1 everywhere; every residue of the system counts.
        let even = Coset {
            base: vec![rat_int(0)],
            denom_exp: 0,
            level: 1,
        };
        assert_eq!(count_zeros_mod_on_coset(&f, &p, 1, &even).unwrap(), 2);
    }

    #[test]
    fn coset_count_matches_brute_force() {
        // f = x1 y1 + x2 y2 on (1,0,0,0) + 2 Z^4: val f >= 1. Brute force
        // over the coset residues mod 4.
        let f = pairing2();
        let p = params(2);
        let coset = Coset {
            base: vec![rat_int(1), rat_int(0), rat_int(0), rat_int(0)],
            denom_exp: 0,
            level: 1,
        };
        let got = count_zeros_mod_on_coset(&f, &p, 1, &coset).unwrap();
        // Oracle: x in base + 2Z, entries mod 4, f(x) = 0 mod 2.
        let mut expect = 0u64;
        for a in 0..2i64 {
            for b in 0..2i64 {
                for c in 0..2i64 {
                    for d in 0..2i64 {
                        let x = [
                            Int::from(1 + 2 * a),
                            Int::from(2 * b),
                            Int::from(2 * c),
                            Int::from(2 * d),
                        ];
                        if f.eval_int(&x).mod_floor(&Int::from(2)).is_zero() {
                            expect += 1;
                        }
                    }
                }
            }
        }
        // The decision scale for m=1 after rescaling is mod 2 per lifted
        // coordinate: 2^4 total residues against the oracle's 16.
        assert_eq!(got, expect);
    }

    #[test]
    fn invalid_coset_rejected() {
        let f = IntPolynomial::variable(0, 1);
        let p = params(2);
        let bad = Coset {
            base: vec![rat(1, 3)],
            denom_exp: 2,
            level: 1,
        };
        let err = count_zeros_mod_on_coset(&f, &p, 1, &bad).unwrap_err();
        assert!(matches!(err, Error::InvalidCoset(_)));
    }

    #[test]
    fn homogeneous_scaling_self_similarity() {
        // For homogeneous f of degree d, solutions of val(f) >= m + d with
        // all coordinates divisible by p biject with solutions of
        // val(f) >= m after dividing coordinates by p.
        let f = pairing2();
        let d = 2usize;
        for m in 0..2usize {
            let inner = plain_count(&f, 2, m);
            // count x = p y mod p^(m+d) with f(x) = 0 mod p^(m+d):
            // f(p y) = p^d f(y), so condition is f(y) = 0 mod p^m over y mod
            // p^(m+d-1), each class mod p^m lifting freely.
            let free = 2u64.pow(((m + d - 1) - m) as u32 * 4);
            let outer = {
                let modulus = 2u64.pow((m + d) as u32);
                let ymod = modulus / 2;
                let mut count = 0;
                for idx in 0..ymod.pow(4) {
                    let mut rem = idx;
                    let y: Vec<Int> = (0..4)
                        .map(|_| {
                            let v = rem % ymod;
                            rem /= ymod;
                            Int::from(v)
                        })
                        .collect();
                    let val = f.eval_int(&y);
                    if m == 0 || val.mod_floor(&Int::from(2u64.pow(m as u32))).is_zero() {
                        count += 1;
                    }
                }
                count
            };
            assert_eq!(outer, inner * free);
        }
    }

    #[test]
    fn substitute_affine_extracts_content() {
        // f(2u) = 2u for f = x.
        let f = IntPolynomial::variable(0, 1);
        let (v, h) = f
            .substitute_affine(&[rat_int(0)], 2, 1)
            .unwrap();
        assert_eq!(v, 1);
        assert_eq!(h, IntPolynomial::new(1, vec![(Int::from(1), vec![1])], None).unwrap());

        // f = xy at ((1/2) + u, 2v): content -1.
        let g = IntPolynomial::new(
            2,
            vec![(Int::from(1), vec![1, 1])],
            Some(2),
        )
        .unwrap();
        let (v, h) = g
            .substitute_affine(&[rat(1, 2), rat_int(0)], 2, 1)
            .unwrap();
        assert_eq!(v, 0);
        // (1/2 + 2u)(2v) = v + 4uv: content 0 after clearing denominators.
        assert_eq!(
            h,
            IntPolynomial::new(
                2,
                vec![(Int::from(1), vec![0, 1]), (Int::from(4), vec![1, 1])],
                None
            )
            .unwrap()
        );
    }

    #[test]
    fn json_roundtrip() {
        let f = det2();
        let s = serde_json::to_string(&f.to_json()).unwrap();
        assert_eq!(IntPolynomial::from_json_str(&s).unwrap(), f);
    }

    #[test]
    fn count_monotonicity_property() {
        // N_{m+1} <= p^n N_m and tail measures non-increasing, on a few
        // fixed small polynomials (the randomized version lives in the
        // property suite).
        for f in [det2(), pairing2()] {
            for p in [2u64, 3] {
                let s = PointCountSeries::compute(&f, &params(p), 3).unwrap();
                s.validate().unwrap();
                for m in 0..3 {
                    assert!(s.tail_measure(m) >= s.tail_measure(m + 1));
                }
            }
        }
    }
}
