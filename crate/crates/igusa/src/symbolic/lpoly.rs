//! Laurent polynomials in the formal symbol L, which stands for ln q.
//!
//! L is never evaluated numerically: the Laurent coefficients of a zeta
//! integral at an integer point live in ℚ[L, L^-1] (the residue of
//! 1/(1-t) at s=0 is 1/L, for instance), and the invariance identities are
//! polynomial identities in log|ν(g)| = -⟨g,ν⟩·L. Exact verification
//! therefore works with L symbolically.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rat::{rat_from_pair, rat_int, rat_to_pair, rat_to_string, Rat};
use crate::symbolic::qpoly::QPoly;

/// A Laurent polynomial sum c_k L^k with finitely many nonzero exact
/// rational coefficients; k may be negative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LPoly {
    /// Exponent of the first stored coefficient.
    lmin: i64,
    /// Coefficients for L^lmin .. L^(lmin+len-1); first and last nonzero.
    coeffs: Vec<Rat>,
}

impl LPoly {
    pub fn zero() -> Self {
        LPoly {
            lmin: 0,
            coeffs: Vec::new(),
        }
    }

    pub fn one() -> Self {
        LPoly::monomial(0, rat_int(1))
    }

    pub fn constant(c: Rat) -> Self {
        LPoly::monomial(0, c)
    }

    /// c * L^k.
    pub fn monomial(k: i64, c: Rat) -> Self {
        if c.is_zero() {
            LPoly::zero()
        } else {
            LPoly {
                lmin: k,
                coeffs: vec![c],
            }
        }
    }

    pub fn from_parts(lmin: i64, coeffs: Vec<Rat>) -> Self {
        LPoly { lmin, coeffs }.normalized()
    }

    fn normalized(mut self) -> Self {
        while self.coeffs.last().is_some_and(Rat::is_zero) {
            self.coeffs.pop();
        }
        let lead_zeros = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead_zeros > 0 {
            self.coeffs.drain(..lead_zeros);
            self.lmin += lead_zeros as i64;
        }
        if self.coeffs.is_empty() {
            self.lmin = 0;
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn lmin(&self) -> i64 {
        self.lmin
    }

    pub fn lmax(&self) -> i64 {
        self.lmin + self.coeffs.len() as i64 - 1
    }

    pub fn coeff(&self, k: i64) -> Rat {
        if k < self.lmin {
            return Rat::zero();
        }
        self.coeffs
            .get((k - self.lmin) as usize)
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    pub fn add(&self, other: &LPoly) -> LPoly {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let lmin = self.lmin.min(other.lmin);
        let lmax = self.lmax().max(other.lmax());
        let mut coeffs = Vec::with_capacity((lmax - lmin + 1) as usize);
        for k in lmin..=lmax {
            coeffs.push(self.coeff(k) + other.coeff(k));
        }
        LPoly { lmin, coeffs }.normalized()
    }

    pub fn neg(&self) -> LPoly {
        LPoly {
            lmin: self.lmin,
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn sub(&self, other: &LPoly) -> LPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &LPoly) -> LPoly {
        if self.is_zero() || other.is_zero() {
            return LPoly::zero();
        }
        let mut coeffs = vec![Rat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        LPoly {
            lmin: self.lmin + other.lmin,
            coeffs,
        }
        .normalized()
    }

    pub fn scale(&self, c: &Rat) -> LPoly {
        if c.is_zero() {
            return LPoly::zero();
        }
        LPoly {
            lmin: self.lmin,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// (-a L)^k / k!, the k-th Taylor coefficient of |ν(g)|^s at s0 when
    /// ⟨g,ν⟩ = a.
    pub fn omega_term(a: i64, k: usize) -> LPoly {
        let mut c = rat_int(if k % 2 == 0 { 1 } else { -1 });
        for j in 1..=k {
            c = c * rat_int(a) / rat_int(j as i64);
        }
        LPoly::monomial(k as i64, c)
    }

    /// Split into the L-shift and the ordinary-polynomial part (used for
    /// exact gcd reduction in the fraction field).
    pub fn to_shift_poly(&self) -> (i64, QPoly) {
        (self.lmin, QPoly::from_coeffs(self.coeffs.clone()))
    }

    pub fn from_shift_poly(shift: i64, p: &QPoly) -> LPoly {
        LPoly::from_parts(shift, p.coeffs().to_vec())
    }

    /// External JSON form: {"lmin": k, "c": [["a","b"],...]} ascending
    /// powers of L starting at L^lmin.
    pub fn to_json(&self) -> serde_json::Value {
        let c: Vec<(String, String)> = self.coeffs.iter().map(rat_to_pair).collect();
        serde_json::json!({ "lmin": self.lmin, "c": c })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<LPoly> {
        #[derive(Serialize, Deserialize)]
        struct J {
            lmin: i64,
            c: Vec<(String, String)>,
        }
        let j: J = serde_json::from_value(v.clone())?;
        let mut coeffs = Vec::with_capacity(j.c.len());
        for (a, b) in &j.c {
            coeffs.push(rat_from_pair(a, b)?);
        }
        Ok(LPoly::from_parts(j.lmin, coeffs))
    }
}

impl std::fmt::Display for LPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let k = self.lmin + i as i64;
            let (sign, mag) = if c.is_negative() {
                ("-", -c.clone())
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {sign} ")?;
            }
            let coef = rat_to_string(&mag);
            match (k, mag.is_one()) {
                (0, _) => write!(f, "{coef}")?,
                (1, true) => write!(f, "L")?,
                (1, false) => write!(f, "({coef})*L")?,
                (_, true) => write!(f, "L^{k}")?,
                (_, false) => write!(f, "({coef})*L^{k}")?,
            }
        }
        Ok(())
    }
}

/// An element of the fraction field of ℚ[L], normalized so the denominator
/// is an ordinary monic polynomial in L with nonzero constant term (L-power
/// units are folded into the numerator's shift).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LFrac {
    num: LPoly,
    den: QPoly,
}

impl LFrac {
    pub fn zero() -> Self {
        LFrac {
            num: LPoly::zero(),
            den: QPoly::one(),
        }
    }

    pub fn one() -> Self {
        LFrac {
            num: LPoly::one(),
            den: QPoly::one(),
        }
    }

    pub fn from_lpoly(p: LPoly) -> Self {
        LFrac {
            num: p,
            den: QPoly::one(),
        }
    }

    pub fn new(num: LPoly, den: LPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(LFrac::zero());
        }
        let (ns, np) = num.to_shift_poly();
        let (ds, dp) = den.to_shift_poly();
        let g = np.gcd(&dp);
        let (np, r1) = np.div_rem(&g);
        debug_assert!(r1.is_zero());
        let (dp, r2) = dp.div_rem(&g);
        debug_assert!(r2.is_zero());
        // dp has nonzero constant term: the original den was normalized so
        // its lowest stored coefficient is nonzero.
        let lead = dp.leading().unwrap().clone();
        let inv = rat_int(1) / lead;
        Ok(LFrac {
            num: LPoly::from_shift_poly(ns - ds, &np.scale(&inv)),
            den: dp.scale(&inv),
        })
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn num(&self) -> &LPoly {
        &self.num
    }

    pub fn den(&self) -> &QPoly {
        &self.den
    }

    /// The underlying Laurent polynomial if the denominator is trivial.
    pub fn as_lpoly(&self) -> Option<LPoly> {
        if self.den.is_one() {
            Some(self.num.clone())
        } else {
            None
        }
    }

    pub fn add(&self, other: &LFrac) -> LFrac {
        let dl = LPoly::from_shift_poly(0, &self.den);
        let dr = LPoly::from_shift_poly(0, &other.den);
        let num = self.num.mul(&dr).add(&other.num.mul(&dl));
        LFrac::new(num, dl.mul(&dr)).expect("nonzero denominators")
    }

    pub fn neg(&self) -> LFrac {
        LFrac {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &LFrac) -> LFrac {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &LFrac) -> LFrac {
        let den = LPoly::from_shift_poly(0, &self.den)
            .mul(&LPoly::from_shift_poly(0, &other.den));
        LFrac::new(self.num.mul(&other.num), den).expect("nonzero denominators")
    }

    pub fn div(&self, other: &LFrac) -> Result<LFrac> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let num = self.num.mul(&LPoly::from_shift_poly(0, &other.den));
        let den = LPoly::from_shift_poly(0, &self.den).mul(&other.num);
        LFrac::new(num, den)
    }
}

impl std::fmt::Display for LFrac {
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

    #[test]
    fn laurent_arithmetic() {
        // (1/L + 1/2) * L = 1 + L/2
        let a = LPoly::monomial(-1, rat_int(1)).add(&LPoly::constant(rat(1, 2)));
        let l = LPoly::monomial(1, rat_int(1));
        let prod = a.mul(&l);
        assert_eq!(prod.coeff(0), rat_int(1));
        assert_eq!(prod.coeff(1), rat(1, 2));
        assert!(prod.coeff(-1).is_zero());
    }

    #[test]
    fn omega_terms() {
        // (-2L)^2/2! = 2 L^2
        assert_eq!(LPoly::omega_term(2, 2), LPoly::monomial(2, rat_int(2)));
        assert_eq!(LPoly::omega_term(1, 1), LPoly::monomial(1, rat_int(-1)));
        assert_eq!(LPoly::omega_term(5, 0), LPoly::one());
    }

    #[test]
    fn frac_field_ops() {
        // (L^2 - 1)/(L - 1) reduces to L + 1 (after clearing shifts).
        let num = LPoly::from_parts(0, vec![rat_int(-1), rat_int(0), rat_int(1)]);
        let den = LPoly::from_parts(0, vec![rat_int(-1), rat_int(1)]);
        let f = LFrac::new(num, den).unwrap();
        assert_eq!(
            f.as_lpoly().unwrap(),
            LPoly::from_parts(0, vec![rat_int(1), rat_int(1)])
        );

        let half = LFrac::from_lpoly(LPoly::constant(rat(1, 2)));
        let inv_l = LFrac::from_lpoly(LPoly::monomial(-1, rat_int(1)));
        let x = half.add(&inv_l).sub(&inv_l);
        assert_eq!(x, half);
        let y = inv_l.mul(&inv_l).div(&inv_l).unwrap();
        assert_eq!(y, inv_l);
    }
}
