//! Exact Laurent expansion of rational functions in t = q^(-s) at integer
//! points s = s0.
//!
//! Substituting t = q^(-s0) e^(-L u) with u = s - s0 turns a rational
//! function of t into a Laurent series in u whose coefficients are Laurent
//! polynomials in the formal symbol L. The denominator's u-valuation is the
//! multiplicity of t0 = q^(-s0) as a root, and its leading coefficient is a
//! rational multiple of a power of L, hence invertible in ℚ[L, L^-1]: the
//! whole expansion stays exact.
//!
//! Expansion points are restricted to integer s0 so t0 stays rational.
//! Non-real representatives of the 2πi/ln q periodicity are collapsed.


use crate::rat::{q_pow, rat_int, Rat};
use crate::symbolic::lpoly::LPoly;
use crate::symbolic::qpoly::QPoly;
use crate::symbolic::ratfunc::RatFunc;

/// Truncated Laurent expansion at an integer point s0, with coefficients in
/// ℚ[L, L^-1].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentSeries {
    /// Expansion point.
    pub s0: i64,
    /// Lowest u-power carried (negative at a pole).
    pub leading: i64,
    /// Coefficients of u^leading .. u^(leading+len-1).
    pub coeffs: Vec<LPoly>,
    /// Number of u-orders beyond the leading one that are trusted.
    pub truncation: usize,
}

impl LaurentSeries {
    /// Coefficient of u^i; exact zero below the leading order, and only
    /// valid within the truncation window above it.
    pub fn coeff(&self, i: i64) -> LPoly {
        if i < self.leading {
            return LPoly::zero();
        }
        let idx = (i - self.leading) as usize;
        self.coeffs.get(idx).cloned().unwrap_or_else(LPoly::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(LPoly::is_zero)
    }

    /// Pole order encoded by the expansion: max(0, -leading).
    pub fn pole_order(&self) -> usize {
        if self.is_zero() {
            0
        } else {
            (-self.leading).max(0) as usize
        }
    }

    /// External JSON form: {"s0": k, "leading": -m, "coeffs": [...]} where
    /// each coefficient is an L-Laurent polynomial {"lmin": j, "c": [...]}
    /// (the lmin field carries the negative L-powers that arise at poles).
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "s0": self.s0,
            "leading": self.leading,
            "coeffs": self.coeffs.iter().map(LPoly::to_json).collect::<Vec<_>>(),
        })
    }
}

/// Truncated series in u over ℚ[L, L^-1], tracked from a fixed valuation.
#[derive(Debug, Clone)]
struct USeries {
    /// u-exponent of coeffs[0].
    vmin: i64,
    coeffs: Vec<LPoly>,
}

impl USeries {
    fn len(&self) -> usize {
        self.coeffs.len()
    }

    fn mul(&self, other: &USeries, keep: usize) -> USeries {
        let mut coeffs = vec![LPoly::zero(); keep];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j >= keep {
                    break;
                }
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        USeries {
            vmin: self.vmin + other.vmin,
            coeffs,
        }
    }

    /// Drop leading zero coefficients, shifting the valuation up.
    fn normalize(mut self) -> USeries {
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 && lead < self.coeffs.len() {
            self.coeffs.drain(..lead);
            self.vmin += lead as i64;
        }
        self
    }

    /// Reciprocal through `keep` coefficients. The leading coefficient must
    /// be a monomial in L (always the case for series arising from rational
    /// functions of t, whose denominator contributes (r L^k) u^k + ...).
    fn recip(&self, keep: usize) -> USeries {
        let s = self.clone().normalize();
        let c0 = &s.coeffs[0];
        assert!(!c0.is_zero(), "reciprocal of zero series");
        assert_eq!(
            c0.lmin(),
            c0.lmax(),
            "series leading coefficient is not an L-monomial"
        );
        let c0inv = LPoly::monomial(-c0.lmin(), rat_int(1) / c0.coeff(c0.lmin()));
        let mut inv = vec![LPoly::zero(); keep];
        inv[0] = c0inv.clone();
        for k in 1..keep {
            let mut acc = LPoly::zero();
            for j in 1..=k.min(s.len() - 1) {
                acc = acc.add(&s.coeffs[j].mul(&inv[k - j]));
            }
            inv[k] = c0inv.mul(&acc).neg();
        }
        USeries {
            vmin: -s.vmin,
            coeffs: inv,
        }
    }
}

/// The substitution series t0 * e^(-L u) through n terms.
fn exp_series(t0: &Rat, n: usize) -> USeries {
    let coeffs = (0..n)
        .map(|j| LPoly::omega_term(1, j).scale(t0))
        .collect();
    USeries { vmin: 0, coeffs }
}

/// Evaluate a t-polynomial on the substitution series (Horner).
fn poly_on_series(p: &QPoly, sub: &USeries, keep: usize) -> USeries {
    let mut acc = USeries {
        vmin: 0,
        coeffs: vec![LPoly::zero(); keep],
    };
    for c in p.coeffs().iter().rev() {
        acc = acc.mul(sub, keep);
        acc.coeffs[0] = acc.coeffs[0].add(&LPoly::constant(c.clone()));
    }
    acc
}

/// Exact Laurent expansion of Z at integer s0, carrying `terms` u-orders
/// beyond the leading one.
///
/// Construction verifies the round trip: multiplying the computed quotient
/// back by the denominator series reproduces the numerator series through
/// the carried orders.
pub fn laurent_at(z: &RatFunc, s0: i64, terms: usize) -> LaurentSeries {
    if z.is_zero() {
        return LaurentSeries {
            s0,
            leading: 0,
            coeffs: vec![LPoly::zero(); terms + 1],
            truncation: terms,
        };
    }
    let t0 = q_pow(z.q(), -s0);
    let pole = z.den().root_multiplicity(&t0);
    // Guard terms: the denominator series starts at u^pole, and a numerator
    // root at t0 (possible only when pole = 0, by coprimality) shifts the
    // quotient's leading order up.
    let num_van = z.num().root_multiplicity(&t0);
    let keep = terms + pole + num_van + 1;
    let sub = exp_series(&t0, keep + pole + 1);
    let num_s = poly_on_series(z.num(), &sub, keep + pole);
    let den_s = poly_on_series(z.den(), &sub, keep + pole);
    debug_assert!(
        den_s
            .coeffs
            .iter()
            .take(pole)
            .all(LPoly::is_zero),
        "denominator valuation below root multiplicity"
    );
    let den_inv = den_s.recip(keep);
    let quot = num_s.mul(&den_inv, keep);

    // Round trip: quot * den must reproduce the numerator series.
    let back = quot.mul(&den_s, keep.min(terms + 1));
    for k in 0..back.len() {
        let i = back.vmin + k as i64;
        let expect = if i >= num_s.vmin && ((i - num_s.vmin) as usize) < num_s.len() {
            num_s.coeffs[(i - num_s.vmin) as usize].clone()
        } else {
            LPoly::zero()
        };
        assert_eq!(back.coeffs[k], expect, "laurent round-trip failed at u^{i}");
    }

    // Normalize: find the true leading order within the carried window.
    let mut vmin = quot.vmin;
    let mut coeffs = quot.coeffs;
    let lead_zeros = coeffs.iter().take_while(|c| c.is_zero()).count();
    if lead_zeros == coeffs.len() {
        return LaurentSeries {
            s0,
            leading: 0,
            coeffs: vec![LPoly::zero(); terms + 1],
            truncation: terms,
        };
    }
    coeffs.drain(..lead_zeros);
    vmin += lead_zeros as i64;
    coeffs.truncate(terms + 1);
    LaurentSeries {
        s0,
        leading: vmin,
        coeffs,
        truncation: terms,
    }
}

/// Order of the pole of Z at s = s0 (0 at analytic points). Agrees with
/// max(0, -leading) of `laurent_at`.
pub fn pole_order_at(z: &RatFunc, s0: i64) -> usize {
    z.pole_order_at(s0)
}
