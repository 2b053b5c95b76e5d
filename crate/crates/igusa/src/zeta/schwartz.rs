//! Finite-level Schwartz functions on F^n.
//!
//! A Schwartz function here is locally constant with compact support,
//! stored as a finite table over cells: support is contained in
//! p^(-M) R^n (outer level M >= 0) and the function is constant on cosets
//! of p^N R^n (inner level N >= -M). A cell is represented by the
//! numerator vector a of its base point a / p^M, with each coordinate
//! numerator reduced modulo p^(M+N).
//!
//! Two tables are equal as functions iff they agree after refinement to a
//! common level, which is how equality is implemented.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rat::{rat_from_string, rat_to_string, Int, Rat};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SchwartzFunction {
    nvars: usize,
    outer: i64,
    inner: i64,
    p: u64,
    values: BTreeMap<Vec<u64>, Rat>,
}

fn pow_u64(p: u64, e: i64) -> u64 {
    assert!(e >= 0, "negative lattice exponent");
    let v = (p as u128).pow(e as u32);
    u64::try_from(v).expect("lattice span fits u64")
}

impl SchwartzFunction {
    pub fn zero(nvars: usize, p: u64) -> Self {
        SchwartzFunction {
            nvars,
            outer: 0,
            inner: 0,
            p,
            values: BTreeMap::new(),
        }
    }

    /// Indicator of the unit lattice R^n.
    pub fn indicator_unit(nvars: usize, p: u64) -> Self {
        let mut values = BTreeMap::new();
        values.insert(vec![0; nvars], Rat::one());
        SchwartzFunction {
            nvars,
            outer: 0,
            inner: 0,
            p,
            values,
        }
    }

    pub fn new(
        nvars: usize,
        p: u64,
        outer: i64,
        inner: i64,
        cells: Vec<(Vec<u64>, Rat)>,
    ) -> Result<Self> {
        if outer < 0 || inner < -outer {
            return Err(Error::BadScenario(format!(
                "bad levels: outer {outer}, inner {inner}"
            )));
        }
        let span = pow_u64(p, outer + inner);
        let mut values = BTreeMap::new();
        for (key, v) in cells {
            if key.len() != nvars {
                return Err(Error::DimensionMismatch {
                    expected: nvars,
                    got: key.len(),
                });
            }
            if key.iter().any(|&a| a >= span) {
                return Err(Error::BadScenario(format!(
                    "cell key out of range for span {span}"
                )));
            }
            if !v.is_zero() {
                let prev = values.insert(key, v);
                if prev.is_some() {
                    return Err(Error::BadScenario("duplicate cell".into()));
                }
            }
        }
        Ok(SchwartzFunction {
            nvars,
            outer,
            inner,
            p,
            values,
        })
    }

    /// All indicator functions at the given level, in deterministic order.
    pub fn basis(nvars: usize, p: u64, outer: i64, inner: i64) -> Vec<SchwartzFunction> {
        let span = pow_u64(p, outer + inner);
        let total = (span as u128).pow(nvars as u32);
        assert!(total <= 1 << 20, "basis too large");
        let mut out = Vec::with_capacity(total as usize);
        for idx in 0..total {
            let mut rem = idx;
            let key: Vec<u64> = (0..nvars)
                .map(|_| {
                    let a = (rem % span as u128) as u64;
                    rem /= span as u128;
                    a
                })
                .collect();
            out.push(
                SchwartzFunction::new(nvars, p, outer, inner, vec![(key, Rat::one())]).unwrap(),
            );
        }
        out
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn outer_level(&self) -> i64 {
        self.outer
    }

    pub fn inner_level(&self) -> i64 {
        self.inner
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn support_cells(&self) -> usize {
        self.values.len()
    }

    /// Base point of a cell as exact rationals a / p^M.
    pub fn cell_base(&self, key: &[u64]) -> Vec<Rat> {
        let denom = Int::from(self.p).pow(self.outer as u32);
        key.iter()
            .map(|&a| Rat::new(Int::from(a), denom.clone()))
            .collect()
    }

    pub fn cells(&self) -> impl Iterator<Item = (&Vec<u64>, &Rat)> {
        self.values.iter()
    }

    /// Value at the origin (the cell whose base numerators are all zero).
    pub fn value_at_origin(&self) -> Rat {
        self.values
            .get(&vec![0; self.nvars])
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    /// Value at an arbitrary rational point.
    pub fn value_at(&self, x: &[Rat]) -> Result<Rat> {
        if x.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                got: x.len(),
            });
        }
        let scale = Rat::from_integer(Int::from(self.p).pow(self.outer as u32));
        let span = Int::from(pow_u64(self.p, self.outer + self.inner));
        let mut key = Vec::with_capacity(self.nvars);
        for xi in x {
            let n = xi * &scale;
            if !n.denom().is_one() {
                return Ok(Rat::zero()); // outside the support lattice
            }
            let mut a = n.numer().clone() % &span;
            if a.is_negative() {
                a += &span;
            }
            key.push(u64::try_from(a).expect("reduced key fits u64"));
        }
        Ok(self.values.get(&key).cloned().unwrap_or_else(Rat::zero))
    }

    /// Re-express at finer levels (outer2 >= outer, inner2 >= inner).
    pub fn refine(&self, outer2: i64, inner2: i64) -> SchwartzFunction {
        assert!(outer2 >= self.outer && inner2 >= self.inner, "refinement only");
        if outer2 == self.outer && inner2 == self.inner {
            return self.clone();
        }
        let p = self.p;
        let new_span = pow_u64(p, outer2 + inner2);
        let carry = pow_u64(p, outer2 - self.outer);
        let stride = pow_u64(p, self.inner + outer2); // p^(N + M2)
        let per_coord = pow_u64(p, inner2 - self.inner);
        let mut values = BTreeMap::new();
        for (key, v) in &self.values {
            // Per coordinate: b = a*carry + j*stride for j in 0..per_coord.
            let mut stack: Vec<(usize, Vec<u64>)> = vec![(0, Vec::with_capacity(self.nvars))];
            while let Some((i, acc)) = stack.pop() {
                if i == self.nvars {
                    values.insert(acc, v.clone());
                    continue;
                }
                for j in 0..per_coord {
                    let b = (key[i] as u128 * carry as u128 + j as u128 * stride as u128)
                        % new_span as u128;
                    let mut acc2 = acc.clone();
                    acc2.push(b as u64);
                    stack.push((i + 1, acc2));
                }
            }
        }
        SchwartzFunction {
            nvars: self.nvars,
            outer: outer2,
            inner: inner2,
            p,
            values,
        }
    }

    fn common_levels(&self, other: &SchwartzFunction) -> (i64, i64) {
        (
            self.outer.max(other.outer),
            self.inner.max(other.inner),
        )
    }

    pub fn add(&self, other: &SchwartzFunction) -> Result<SchwartzFunction> {
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                got: other.nvars,
            });
        }
        assert_eq!(self.p, other.p, "mismatched primes");
        let (m, n) = self.common_levels(other);
        let a = self.refine(m, n);
        let b = other.refine(m, n);
        let mut values = a.values;
        for (key, v) in b.values {
            let e = values.entry(key).or_insert_with(Rat::zero);
            *e += v;
        }
        values.retain(|_, v| !v.is_zero());
        Ok(SchwartzFunction {
            nvars: self.nvars,
            outer: m,
            inner: n,
            p: self.p,
            values,
        })
    }

    pub fn scale(&self, c: &Rat) -> SchwartzFunction {
        if c.is_zero() {
            return SchwartzFunction::zero(self.nvars, self.p);
        }
        SchwartzFunction {
            nvars: self.nvars,
            outer: self.outer,
            inner: self.inner,
            p: self.p,
            values: self
                .values
                .iter()
                .map(|(k, v)| (k.clone(), v * c))
                .collect(),
        }
    }

    pub fn sub(&self, other: &SchwartzFunction) -> Result<SchwartzFunction> {
        self.add(&other.scale(&-Rat::one()))
    }

    /// Equality as functions (after refinement to a common level).
    pub fn eq_as_function(&self, other: &SchwartzFunction) -> bool {
        if self.nvars != other.nvars || self.p != other.p {
            return false;
        }
        let (m, n) = self.common_levels(other);
        self.refine(m, n).values == other.refine(m, n).values
    }

    /// The translate (g.phi)(x) = phi(p^(-e_i) x_i) for a coordinate-wise
    /// p-power scaling; exact, with levels adjusted.
    pub fn apply_coord_scaling(&self, exps: &[i64]) -> Result<SchwartzFunction> {
        if exps.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                got: exps.len(),
            });
        }
        if self.is_zero() {
            return Ok(self.clone());
        }
        let p = self.p;
        let max_e = *exps.iter().max().unwrap();
        let outer2 = exps.iter().map(|e| self.outer - e).max().unwrap().max(0);
        let inner2 = self.inner + max_e;
        let new_span = pow_u64(p, outer2 + inner2);
        let mut values = BTreeMap::new();
        for (key, v) in &self.values {
            // Image of coordinate i: p^{e_i} a_i / p^M + p^{N+e_i} R, cut
            // into cells of p^{inner2} R.
            let mut stack: Vec<(usize, Vec<u64>)> = vec![(0, Vec::with_capacity(self.nvars))];
            while let Some((i, acc)) = stack.pop() {
                if i == self.nvars {
                    values.insert(acc, v.clone());
                    continue;
                }
                let e = exps[i];
                let base_exp = e + outer2 - self.outer; // >= 0 by outer2 choice
                let base = (key[i] as u128) * (p as u128).pow(base_exp as u32);
                let stride_exp = self.inner + e + outer2; // p^{N+e+M2}
                let stride = (p as u128).pow(stride_exp as u32);
                let per = pow_u64(p, inner2 - (self.inner + e));
                for j in 0..per {
                    let b = (base + j as u128 * stride) % new_span as u128;
                    let mut acc2 = acc.clone();
                    acc2.push(b as u64);
                    stack.push((i + 1, acc2));
                }
            }
        }
        Ok(SchwartzFunction {
            nvars: self.nvars,
            outer: outer2,
            inner: inner2,
            p,
            values,
        })
    }

    /// Restriction to the coordinate subspace where the masked-out
    /// coordinates are 0: keep cells whose dropped components contain 0.
    pub fn restrict(&self, keep: &[bool]) -> Result<SchwartzFunction> {
        if keep.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                got: keep.len(),
            });
        }
        let kept = keep.iter().filter(|k| **k).count();
        if kept == 0 {
            return Err(Error::BadScenario("empty restriction".into()));
        }
        let mut values: BTreeMap<Vec<u64>, Rat> = BTreeMap::new();
        for (key, v) in &self.values {
            let mut ok = true;
            let mut sub = Vec::with_capacity(kept);
            for (i, &a) in key.iter().enumerate() {
                if keep[i] {
                    sub.push(a);
                } else if a != 0 {
                    ok = false;
                    break;
                }
            }
            if ok {
                let e = values.entry(sub).or_insert_with(Rat::zero);
                *e += v;
            }
        }
        values.retain(|_, v| !v.is_zero());
        Ok(SchwartzFunction {
            nvars: kept,
            outer: self.outer,
            inner: self.inner,
            p: self.p,
            values,
        })
    }

    /// External JSON: {"M": m, "N": n, "values": [[[reps...], "a/b"], ...]}
    /// with base-point coordinates as exact rational strings.
    pub fn to_json(&self) -> serde_json::Value {
        let values: Vec<serde_json::Value> = self
            .values
            .iter()
            .map(|(key, v)| {
                let reps: Vec<String> = self
                    .cell_base(key)
                    .iter()
                    .map(rat_to_string)
                    .collect();
                serde_json::json!([reps, rat_to_string(v)])
            })
            .collect();
        serde_json::json!({ "M": self.outer, "N": self.inner, "values": values })
    }

    pub fn from_json(v: &serde_json::Value, nvars: usize, p: u64) -> Result<SchwartzFunction> {
        let o = v
            .as_object()
            .ok_or_else(|| Error::Json("phi must be an object".into()))?;
        let outer = o
            .get("M")
            .and_then(|x| x.as_i64())
            .ok_or_else(|| Error::Json("phi missing M".into()))?;
        let inner = o
            .get("N")
            .and_then(|x| x.as_i64())
            .ok_or_else(|| Error::Json("phi missing N".into()))?;
        if outer < 0 || inner < -outer || outer + inner > 20 {
            return Err(Error::Json("phi levels out of range".into()));
        }
        let span = Int::from(pow_u64(p, outer + inner));
        let scale = Rat::from_integer(Int::from(p).pow(outer as u32));
        let raw = o
            .get("values")
            .and_then(|x| x.as_array())
            .ok_or_else(|| Error::Json("phi missing values".into()))?;
        let mut cells = Vec::with_capacity(raw.len());
        for entry in raw {
            let pair = entry
                .as_array()
                .filter(|a| a.len() == 2)
                .ok_or_else(|| Error::Json("phi value must be [reps, value]".into()))?;
            let reps = pair[0]
                .as_array()
                .ok_or_else(|| Error::Json("phi reps must be an array".into()))?;
            if reps.len() != nvars {
                return Err(Error::DimensionMismatch {
                    expected: nvars,
                    got: reps.len(),
                });
            }
            let mut key = Vec::with_capacity(nvars);
            for r in reps {
                let s = r
                    .as_str()
                    .ok_or_else(|| Error::Json("phi rep must be a string".into()))?;
                let x = rat_from_string(s)?;
                let n = &x * &scale;
                if !n.denom().is_one() {
                    return Err(Error::InvalidCoset(format!(
                        "rep {s} has denominator beyond p^{outer}"
                    )));
                }
                let mut a = n.numer().clone() % &span;
                if a.is_negative() {
                    a += &span;
                }
                key.push(u64::try_from(a).expect("reduced key fits u64"));
            }
            let val = rat_from_string(
                pair[1]
                    .as_str()
                    .ok_or_else(|| Error::Json("phi value must be a string".into()))?,
            )?;
            cells.push((key, val));
        }
        SchwartzFunction::new(nvars, p, outer, inner, cells)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};

    #[test]
    fn unit_indicator_basics() {
        let phi = SchwartzFunction::indicator_unit(2, 2);
        assert_eq!(phi.value_at_origin(), rat_int(1));
        assert_eq!(phi.value_at(&[rat_int(1), rat_int(7)]).unwrap(), rat_int(1));
        assert_eq!(phi.value_at(&[rat(1, 2), rat_int(0)]).unwrap(), rat_int(0));
    }

    #[test]
    fn refinement_preserves_values() {
        let phi = SchwartzFunction::indicator_unit(1, 2);
        let fine = phi.refine(1, 1);
        // Support is still R: cells b/2 + 2R with b in {0, 2}.
        assert_eq!(fine.support_cells(), 2);
        assert!(phi.eq_as_function(&fine));
        assert_eq!(fine.value_at(&[rat_int(3)]).unwrap(), rat_int(1));
        assert_eq!(fine.value_at(&[rat(1, 2)]).unwrap(), rat_int(0));
    }

    #[test]
    fn scaling_action_on_unit_indicator() {
        // x -> p x sends 1_R to 1_{pR}.
        let phi = SchwartzFunction::indicator_unit(1, 2);
        let moved = phi.apply_coord_scaling(&[1]).unwrap();
        assert_eq!(moved.value_at(&[rat_int(2)]).unwrap(), rat_int(1));
        assert_eq!(moved.value_at(&[rat_int(1)]).unwrap(), rat_int(0));
        // And x -> p^{-1} x sends 1_R to the indicator of p^{-1}R.
        let spread = phi.apply_coord_scaling(&[-1]).unwrap();
        assert_eq!(spread.value_at(&[rat(1, 2)]).unwrap(), rat_int(1));
        assert_eq!(spread.value_at(&[rat(1, 4)]).unwrap(), rat_int(0));
    }

    #[test]
    fn composition_of_scalings() {
        // act(g1, act(g2, phi)) = act(g1 g2, phi) on the level-(1,1) basis.
        for phi in SchwartzFunction::basis(1, 2, 1, 1) {
            let a = phi
                .apply_coord_scaling(&[1])
                .unwrap()
                .apply_coord_scaling(&[-2])
                .unwrap();
            let b = phi.apply_coord_scaling(&[-1]).unwrap();
            assert!(a.eq_as_function(&b));
        }
    }

    #[test]
    fn addition_via_common_refinement() {
        let unit = SchwartzFunction::indicator_unit(1, 2);
        let inner = unit.apply_coord_scaling(&[1]).unwrap(); // 1_{2R}
        let diff = unit.sub(&inner).unwrap(); // units indicator
        assert_eq!(diff.value_at(&[rat_int(1)]).unwrap(), rat_int(1));
        assert_eq!(diff.value_at(&[rat_int(2)]).unwrap(), rat_int(0));
        let back = diff.add(&inner).unwrap();
        assert!(back.eq_as_function(&unit));
    }

    #[test]
    fn restriction_to_axis() {
        // phi = 1_{R x R}: restriction to the x-axis is 1_R.
        let phi = SchwartzFunction::indicator_unit(2, 2);
        let res = phi.restrict(&[true, false]).unwrap();
        assert!(res.eq_as_function(&SchwartzFunction::indicator_unit(1, 2)));
        // A cell away from y=0 does not survive.
        let cell = SchwartzFunction::new(2, 2, 0, 1, vec![(vec![0, 1], rat_int(1))]).unwrap();
        let gone = cell.restrict(&[true, false]).unwrap();
        assert!(gone.is_zero());
    }

    #[test]
    fn json_roundtrip() {
        let phi = SchwartzFunction::new(
            2,
            2,
            1,
            1,
            vec![(vec![1, 2], rat(3, 4)), (vec![0, 3], rat_int(-2))],
        )
        .unwrap();
        let j = phi.to_json();
        let back = SchwartzFunction::from_json(&j, 2, 2).unwrap();
        assert!(phi.eq_as_function(&back));
        assert_eq!(phi, back);
    }
}
