//! Rational functions in t = q^(-s) over the exact rationals.
//!
//! The value of a zeta integral is always such a function. Canonical form:
//! numerator and denominator coprime, denominator monic. Poles of the zeta
//! integral at integer points s0 show up as roots q^(-s0) of the
//! denominator; a factor t^k in the denominator corresponds to s -> +inf
//! and arises from test functions supported outside the unit lattice.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rat::{q_pow, rat_from_pair, rat_int, rat_to_pair, Rat};
use crate::symbolic::qpoly::QPoly;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatFunc {
    num: QPoly,
    den: QPoly,
    /// The prime p giving q = p; context for interpreting t = q^(-s).
    q: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RatOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl RatFunc {
    /// Build and reduce to canonical form. Panics on a zero denominator;
    /// that is a programming error, not an input condition.
    pub fn new(num: QPoly, den: QPoly, q: u64) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RatFunc {
                num: QPoly::zero(),
                den: QPoly::one(),
                q,
            };
        }
        let g = num.gcd(&den);
        let (num, r1) = num.div_rem(&g);
        debug_assert!(r1.is_zero());
        let (den, r2) = den.div_rem(&g);
        debug_assert!(r2.is_zero());
        let lead = den.leading().unwrap().clone();
        let inv = rat_int(1) / lead;
        RatFunc {
            num: num.scale(&inv),
            den: den.scale(&inv),
            q,
        }
    }

    pub fn zero(q: u64) -> Self {
        RatFunc::new(QPoly::zero(), QPoly::one(), q)
    }

    pub fn one(q: u64) -> Self {
        RatFunc::new(QPoly::one(), QPoly::one(), q)
    }

    pub fn constant(c: Rat, q: u64) -> Self {
        RatFunc::new(QPoly::constant(c), QPoly::one(), q)
    }

    pub fn from_poly(p: QPoly, q: u64) -> Self {
        RatFunc::new(p, QPoly::one(), q)
    }

    pub fn num(&self) -> &QPoly {
        &self.num
    }

    pub fn den(&self) -> &QPoly {
        &self.den
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn check_q(&self, other: &RatFunc) {
        assert_eq!(self.q, other.q, "mismatched q context");
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        self.check_q(other);
        RatFunc::new(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
            self.q,
        )
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
            q: self.q,
        }
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        self.check_q(other);
        RatFunc::new(
            self.num.mul(&other.num),
            self.den.mul(&other.den),
            self.q,
        )
    }

    pub fn div(&self, other: &RatFunc) -> Result<RatFunc> {
        self.check_q(other);
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RatFunc::new(
            self.num.mul(&other.den),
            self.den.mul(&other.num),
            self.q,
        ))
    }

    pub fn scale(&self, c: &Rat) -> RatFunc {
        RatFunc::new(self.num.scale(c), self.den.clone(), self.q)
    }

    /// Multiply by t^k for k of either sign.
    pub fn mul_t_power(&self, k: i64) -> RatFunc {
        if k >= 0 {
            RatFunc::new(self.num.shift_up(k as usize), self.den.clone(), self.q)
        } else {
            RatFunc::new(
                self.num.clone(),
                self.den.shift_up((-k) as usize),
                self.q,
            )
        }
    }

    /// Substitute t -> c*t (used for measure twists |f|^c: s -> s + c is
    /// t -> q^(-c) t).
    pub fn substitute_t_scale(&self, c: &Rat) -> RatFunc {
        RatFunc::new(self.num.scale_var(c), self.den.scale_var(c), self.q)
    }

    /// Twist the measure by |f|^c: returns Z(s + c).
    pub fn twist(&self, c: i64) -> RatFunc {
        self.substitute_t_scale(&q_pow(self.q, -c))
    }

    /// Order of the pole at s = s0 (i.e. multiplicity of t0 = q^(-s0) in
    /// the canonical denominator).
    pub fn pole_order_at(&self, s0: i64) -> usize {
        if self.is_zero() {
            return 0;
        }
        let t0 = q_pow(self.q, -s0);
        self.den.root_multiplicity(&t0)
    }

    /// Value at a rational t where the denominator does not vanish.
    pub fn eval(&self, t: &Rat) -> Result<Rat> {
        let d = self.den.eval(t);
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.num.eval(t) / d)
    }

    /// Taylor coefficients at t = 0 through order n-1; requires den(0) != 0.
    pub fn taylor(&self, n: usize) -> Result<Vec<Rat>> {
        let inv = self
            .den
            .series_inv(n)
            .ok_or(Error::DivisionByZero)?;
        let s = self.num.series_mul(&inv, n);
        Ok((0..n).map(|k| s.coeff(k)).collect())
    }

    /// Logarithmic derivative operator theta = t d/dt applied once.
    pub fn theta(&self) -> RatFunc {
        // theta(N/D) = t (N' D - N D') / D^2
        let nd = self.num.derivative().mul(&self.den);
        let dn = self.num.mul(&self.den.derivative());
        RatFunc::new(nd.sub(&dn).shift_up(1), self.den.mul(&self.den), self.q)
    }
}

/// The four field operations, routed through one entry point.
pub fn ratfunc_arith(a: &RatFunc, b: &RatFunc, op: RatOp) -> Result<RatFunc> {
    if a.q() != b.q() {
        return Err(Error::ShapeMismatch(format!(
            "mismatched q context: {} vs {}",
            a.q(),
            b.q()
        )));
    }
    match op {
        RatOp::Add => Ok(a.add(b)),
        RatOp::Sub => Ok(a.sub(b)),
        RatOp::Mul => Ok(a.mul(b)),
        RatOp::Div => a.div(b),
    }
}

#[derive(Serialize, Deserialize)]
struct RatFuncJson {
    num: Vec<(String, String)>,
    den: Vec<(String, String)>,
}

impl RatFunc {
    /// External JSON form: {"num": [["a","b"],...], "den": [["a","b"],...]}
    /// with exact rationals as decimal-string pairs, ascending powers of t.
    pub fn to_json(&self) -> serde_json::Value {
        let enc = |p: &QPoly| -> Vec<(String, String)> {
            p.coeffs().iter().map(rat_to_pair).collect()
        };
        serde_json::json!({ "num": enc(&self.num), "den": enc(&self.den) })
    }

    pub fn from_json(v: &serde_json::Value, q: u64) -> Result<RatFunc> {
        let parsed: RatFuncJson = serde_json::from_value(v.clone())?;
        let dec = |pairs: &[(String, String)]| -> Result<QPoly> {
            let mut coeffs = Vec::with_capacity(pairs.len());
            for (a, b) in pairs {
                coeffs.push(rat_from_pair(a, b)?);
            }
            Ok(QPoly::from_coeffs(coeffs))
        };
        let num = dec(&parsed.num)?;
        let den = dec(&parsed.den)?;
        if den.is_zero() {
            return Err(Error::Json("zero denominator".into()));
        }
        Ok(RatFunc::new(num, den, q))
    }

    pub fn from_json_str(s: &str, q: u64) -> Result<RatFunc> {
        let v: serde_json::Value = serde_json::from_str(s)?;
        RatFunc::from_json(&v, q)
    }
}

impl std::fmt::Display for RatFunc {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn geom(a: i64, b: i64, q: u64) -> RatFunc {
        // 1 / (1 - (a/b) t)
        RatFunc::new(
            QPoly::one(),
            QPoly::from_coeffs(vec![rat_int(1), rat(-a, b)]),
            q,
        )
    }

    #[test]
    fn add_zero_is_identity() {
        let a = geom(1, 2, 2);
        assert_eq!(a.add(&RatFunc::zero(2)), a);
    }

    #[test]
    fn mul_inverse_cancels() {
        // (1 - t) * 1/(1 - t) = 1
        let one_minus_t = RatFunc::from_poly(
            QPoly::from_coeffs(vec![rat_int(1), rat_int(-1)]),
            2,
        );
        let inv = RatFunc::one(2).div(&one_minus_t).unwrap();
        assert_eq!(one_minus_t.mul(&inv), RatFunc::one(2));
    }

    #[test]
    fn spec_sum_example() {
        // 1/(1 - t/2) + 1/(1 - t/4) = (2 - (3/4) t) / ((1 - t/2)(1 - t/4)), p = 2.
        let a = geom(1, 2, 2);
        let b = geom(1, 4, 2);
        let sum = ratfunc_arith(&a, &b, RatOp::Add).unwrap();
        let num = QPoly::from_coeffs(vec![rat_int(2), rat(-3, 4)]);
        let den = QPoly::from_coeffs(vec![rat_int(1), rat(-1, 2)])
            .mul(&QPoly::from_coeffs(vec![rat_int(1), rat(-1, 4)]));
        assert_eq!(sum, RatFunc::new(num, den, 2));
    }

    #[test]
    fn pole_orders() {
        // (1-q^-1)(1-q^-2) / ((1-q^-1 t)(1-q^-2 t)) at p=2: pole at s0=-1 is order 1,
        // analytic at s0=0, and a doubled factor gives order 2.
        let num = QPoly::constant(rat(1, 2) * rat(3, 4));
        let den = QPoly::from_coeffs(vec![rat_int(1), rat(-1, 2)])
            .mul(&QPoly::from_coeffs(vec![rat_int(1), rat(-1, 4)]));
        let z = RatFunc::new(num, den, 2);
        assert_eq!(z.pole_order_at(-1), 1);
        assert_eq!(z.pole_order_at(0), 0);

        let dbl = RatFunc::new(
            QPoly::one(),
            QPoly::from_coeffs(vec![rat_int(1), rat_int(-1)])
                .mul(&QPoly::from_coeffs(vec![rat_int(1), rat_int(-1)])),
            2,
        );
        assert_eq!(dbl.pole_order_at(0), 2);
    }

    #[test]
    fn twist_shifts_poles() {
        // Z with pole at s=-1 twisted by |f|^{-1} has pole at s=0.
        let z = geom(1, 2, 2); // pole at t=2, i.e. s=-1
        assert_eq!(z.pole_order_at(-1), 1);
        let w = z.twist(-1);
        assert_eq!(w.pole_order_at(0), 1);
    }

    #[test]
    fn json_roundtrip() {
        let z = geom(3, 4, 2);
        let j = z.to_json();
        assert_eq!(RatFunc::from_json(&j, 2).unwrap(), z);
    }
}
