//! Dense univariate polynomials over the exact rationals.
//!
//! Coefficients are stored ascending; the zero polynomial is the empty
//! vector. This is the workhorse behind rational functions in t = q^(-s)
//! and behind Laurent-polynomial coefficient arithmetic.

use num_traits::{One, Signed, Zero};

use crate::rat::{rat_int, Rat};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QPoly {
    coeffs: Vec<Rat>,
}

impl QPoly {
    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        QPoly::constant(rat_int(1))
    }

    pub fn constant(c: Rat) -> Self {
        QPoly { coeffs: vec![c] }.trimmed()
    }

    /// c * t^k.
    pub fn monomial(c: Rat, k: usize) -> Self {
        if c.is_zero() {
            return QPoly::zero();
        }
        let mut coeffs = vec![Rat::zero(); k + 1];
        coeffs[k] = c;
        QPoly { coeffs }
    }

    pub fn from_coeffs(coeffs: Vec<Rat>) -> Self {
        QPoly { coeffs }.trimmed()
    }

    fn trimmed(mut self) -> Self {
        while self.coeffs.last().is_some_and(Rat::is_zero) {
            self.coeffs.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(self.coeff(k) + other.coeff(k));
        }
        QPoly { coeffs }.trimmed()
    }

    pub fn neg(&self) -> QPoly {
        QPoly {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn sub(&self, other: &QPoly) -> QPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &QPoly) -> QPoly {
        if self.is_zero() || other.is_zero() {
            return QPoly::zero();
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
        QPoly { coeffs }.trimmed()
    }

    pub fn scale(&self, c: &Rat) -> QPoly {
        if c.is_zero() {
            return QPoly::zero();
        }
        QPoly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Multiply by t^k.
    pub fn shift_up(&self, k: usize) -> QPoly {
        if self.is_zero() {
            return QPoly::zero();
        }
        let mut coeffs = vec![Rat::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        QPoly { coeffs }
    }

    /// Substitute t -> c*t.
    pub fn scale_var(&self, c: &Rat) -> QPoly {
        let mut pow = rat_int(1);
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            coeffs.push(a * &pow);
            pow *= c;
        }
        QPoly { coeffs }.trimmed()
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for a in self.coeffs.iter().rev() {
            acc = acc * x + a;
        }
        acc
    }

    pub fn derivative(&self) -> QPoly {
        if self.coeffs.len() <= 1 {
            return QPoly::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, a)| a * rat_int(k as i64))
            .collect();
        QPoly { coeffs }.trimmed()
    }

    /// Exact Euclidean division: self = q*div + r with deg r < deg div.
    pub fn div_rem(&self, div: &QPoly) -> (QPoly, QPoly) {
        assert!(!div.is_zero(), "division by zero polynomial");
        let dd = div.degree().unwrap();
        let lead = div.leading().unwrap().clone();
        let mut rem = self.clone();
        let mut quot = vec![Rat::zero(); self.coeffs.len().saturating_sub(dd)];
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let c = rem.leading().unwrap() / &lead;
            let k = rd - dd;
            quot[k] = c.clone();
            rem = rem.sub(&div.mul(&QPoly::monomial(c, k)));
        }
        (QPoly { coeffs: quot }.trimmed(), rem)
    }

    /// Monic gcd (1 for coprime inputs, 0 only if both inputs are 0).
    pub fn gcd(&self, other: &QPoly) -> QPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn monic(&self) -> QPoly {
        match self.leading() {
            None => QPoly::zero(),
            Some(l) => {
                let inv = rat_int(1) / l;
                self.scale(&inv)
            }
        }
    }

    /// Multiplicity of x0 as a root.
    pub fn root_multiplicity(&self, x0: &Rat) -> usize {
        if self.is_zero() {
            return 0;
        }
        let lin = QPoly::from_coeffs(vec![-x0.clone(), rat_int(1)]);
        let mut m = 0;
        let mut cur = self.clone();
        loop {
            let (q, r) = cur.div_rem(&lin);
            if r.is_zero() {
                m += 1;
                cur = q;
            } else {
                return m;
            }
        }
    }

    /// Truncated power-series product through order n-1.
    pub fn series_mul(&self, other: &QPoly, n: usize) -> QPoly {
        let mut coeffs = vec![Rat::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate().take(n) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j >= n {
                    break;
                }
                coeffs[i + j] += a * b;
            }
        }
        QPoly { coeffs }.trimmed()
    }

    /// Truncated power-series inverse through order n-1; requires a nonzero
    /// constant term.
    pub fn series_inv(&self, n: usize) -> Option<QPoly> {
        let c0 = self.coeff(0);
        if c0.is_zero() {
            return None;
        }
        let c0inv = rat_int(1) / c0;
        let mut inv = vec![Rat::zero(); n];
        inv[0] = c0inv.clone();
        for k in 1..n {
            let mut s = Rat::zero();
            for j in 1..=k.min(self.coeffs.len().saturating_sub(1)) {
                s += self.coeff(j) * &inv[k - j];
            }
            inv[k] = -&c0inv * s;
        }
        Some(QPoly { coeffs: inv }.trimmed())
    }

    /// Content: gcd over ℚ is trivial, so this returns the leading sign
    /// only when needed elsewhere. Kept for symmetry with display code.
    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }
}

impl std::fmt::Display for QPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
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
            let coef = crate::rat::rat_to_string(&mag);
            match (k, mag.is_one()) {
                (0, _) => write!(f, "{coef}")?,
                (1, true) => write!(f, "t")?,
                (1, false) => write!(f, "{coef}*t")?,
                (_, true) => write!(f, "t^{k}")?,
                (_, false) => write!(f, "{coef}*t^{k}")?,
            }
        }
        Ok(())
    }
}
