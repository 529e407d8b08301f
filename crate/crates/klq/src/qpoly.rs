//! Exact integer-coefficient polynomials in the variable `q`.
//!
//! `QPoly` is the value type of every Kazhdan-Lusztig and intersection
//! cohomology computation in this crate. Coefficients are `i64` with checked
//! arithmetic: overflow is an [`Error::Overflow`], never a silent wrap.

use crate::error::{Error, Result};
use std::fmt;

/// A polynomial in `q`, stored by ascending coefficients with no trailing
/// zero. The zero polynomial is the empty coefficient sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct QPoly {
    coeffs: Vec<i64>,
}

impl QPoly {
    /// Builds a polynomial from ascending coefficients, dropping trailing zeros.
    pub fn new(mut coeffs: Vec<i64>) -> QPoly {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn zero() -> QPoly {
        QPoly { coeffs: Vec::new() }
    }

    pub fn one() -> QPoly {
        QPoly { coeffs: vec![1] }
    }

    /// The constant polynomial `c`.
    pub fn constant(c: i64) -> QPoly {
        QPoly::new(vec![c])
    }

    /// The monomial `q^k`.
    pub fn q_power(k: usize) -> QPoly {
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = 1;
        QPoly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    /// Degree of a nonzero polynomial; `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of `q^k` (zero beyond the stored range).
    pub fn coeff(&self, k: usize) -> i64 {
        self.coeffs.get(k).copied().unwrap_or(0)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn add(&self, other: &QPoly) -> Result<QPoly> {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k).checked_add(other.coeff(k)).ok_or(Error::Overflow)?);
        }
        Ok(QPoly::new(out))
    }

    pub fn sub(&self, other: &QPoly) -> Result<QPoly> {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k).checked_sub(other.coeff(k)).ok_or(Error::Overflow)?);
        }
        Ok(QPoly::new(out))
    }

    pub fn neg(&self) -> QPoly {
        QPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn mul(&self, other: &QPoly) -> Result<QPoly> {
        if self.is_zero() || other.is_zero() {
            return Ok(QPoly::zero());
        }
        let mut out = vec![0i64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                let prod = a.checked_mul(b).ok_or(Error::Overflow)?;
                out[i + j] = out[i + j].checked_add(prod).ok_or(Error::Overflow)?;
            }
        }
        Ok(QPoly::new(out))
    }

    pub fn scale(&self, c: i64) -> Result<QPoly> {
        let mut out = Vec::with_capacity(self.coeffs.len());
        for &a in &self.coeffs {
            out.push(a.checked_mul(c).ok_or(Error::Overflow)?);
        }
        Ok(QPoly::new(out))
    }

    /// Multiplication by `q^k`.
    pub fn shift(&self, k: usize) -> QPoly {
        if self.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![0; k];
        out.extend_from_slice(&self.coeffs);
        QPoly { coeffs: out }
    }

    /// The `mu` coefficient of a KL polynomial `P_{z,v}` with
    /// `ell_diff = l(v) - l(z) >= 1`: the coefficient of
    /// `q^((ell_diff-1)/2)`, which is zero when `ell_diff` is even.
    pub fn mu_coeff(&self, ell_diff: u64) -> Result<i64> {
        if ell_diff < 1 {
            return Err(Error::IndexOutOfRange(format!(
                "mu coefficient needs a positive length difference, got {ell_diff}"
            )));
        }
        if ell_diff % 2 == 0 {
            return Ok(0);
        }
        Ok(self.coeff(((ell_diff - 1) / 2) as usize))
    }

    /// Sum of coefficients, i.e. the value at `q = 1`.
    pub fn eval_at_one(&self) -> Result<i64> {
        let mut acc = 0i64;
        for &c in &self.coeffs {
            acc = acc.checked_add(c).ok_or(Error::Overflow)?;
        }
        Ok(acc)
    }

    /// JSON rendering as the ascending coefficient array.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.coeffs.iter().map(|&c| serde_json::Value::from(c)).collect(),
        )
    }

    pub fn from_json(v: &serde_json::Value) -> Result<QPoly> {
        let arr = v
            .as_array()
            .ok_or_else(|| Error::Parse(format!("expected coefficient array, got {v}")))?;
        let mut coeffs = Vec::with_capacity(arr.len());
        for x in arr {
            coeffs.push(
                x.as_i64()
                    .ok_or_else(|| Error::Parse(format!("bad coefficient {x}")))?,
            );
        }
        Ok(QPoly::new(coeffs))
    }
}

impl fmt::Display for QPoly {
    /// Ascending powers, explicit coefficients of magnitude at least 2,
    /// zero terms omitted, `0` for the zero polynomial: `1 + q + 2*q^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
                first = false;
            } else if c < 0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = c.unsigned_abs();
            match (a, k) {
                (_, 0) => write!(f, "{a}")?,
                (1, 1) => write!(f, "q")?,
                (1, _) => write!(f, "q^{k}")?,
                (_, 1) => write!(f, "{a}*q")?,
                (_, _) => write!(f, "{a}*q^{k}")?,
            }
        }
        Ok(())
    }
}

impl std::str::FromStr for QPoly {
    type Err = Error;

    /// Parses the text rendering back, e.g. `1 + q + 2*q^2`, `-1 - q`, `0`.
    fn from_str(s: &str) -> Result<QPoly> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut coeffs: Vec<i64> = Vec::new();
        let mut rest = compact.as_str();
        let mut sign = 1i64;
        if let Some(r) = rest.strip_prefix('-') {
            sign = -1;
            rest = r;
        } else if let Some(r) = rest.strip_prefix('+') {
            rest = r;
        }
        while !rest.is_empty() {
            let end = rest
                .char_indices()
                .find(|&(i, c)| i > 0 && (c == '+' || c == '-'))
                .map(|(i, _)| i)
                .unwrap_or(rest.len());
            let term = &rest[..end];
            let (mag, power) = parse_term(term)?;
            let c = mag.checked_mul(sign).ok_or(Error::Overflow)?;
            if coeffs.len() <= power {
                coeffs.resize(power + 1, 0);
            }
            coeffs[power] = coeffs[power].checked_add(c).ok_or(Error::Overflow)?;
            rest = &rest[end..];
            if let Some(r) = rest.strip_prefix('+') {
                sign = 1;
                rest = r;
            } else if let Some(r) = rest.strip_prefix('-') {
                sign = -1;
                rest = r;
            } else if !rest.is_empty() {
                return Err(Error::Parse(format!("unexpected text {rest:?} in polynomial")));
            } else {
                break;
            }
        }
        Ok(QPoly::new(coeffs))
    }
}

/// Parses a single signless term: `5`, `q`, `q^3`, `2*q`, `2*q^2`, `2q^2`.
fn parse_term(term: &str) -> Result<(i64, usize)> {
    let bad = || Error::Parse(format!("bad polynomial term {term:?}"));
    if let Some(qpart) = term.find('q') {
        let coeff_str = term[..qpart].trim_end_matches('*');
        let mag: i64 = if coeff_str.is_empty() {
            1
        } else {
            coeff_str.parse().map_err(|_| bad())?
        };
        let after = &term[qpart + 1..];
        let power: usize = if after.is_empty() {
            1
        } else {
            after.strip_prefix('^').ok_or_else(bad)?.parse().map_err(|_| bad())?
        };
        Ok((mag, power))
    } else {
        Ok((term.parse().map_err(|_| bad())?, 0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(coeffs: &[i64]) -> QPoly {
        QPoly::new(coeffs.to_vec())
    }

    #[test]
    fn add_basics() {
        // (1+q) + q = 1+2q
        assert_eq!(p(&[1, 1]).add(&p(&[0, 1])).unwrap(), p(&[1, 2]));
        // p + 0 = p
        assert_eq!(p(&[3, 0, 2]).add(&QPoly::zero()).unwrap(), p(&[3, 0, 2]));
        // (q+1) + (-1-q) = 0
        assert_eq!(p(&[1, 1]).add(&p(&[-1, -1])).unwrap(), QPoly::zero());
    }

    #[test]
    fn mul_basics() {
        assert_eq!(p(&[1, 1]).mul(&p(&[1, 1])).unwrap(), p(&[1, 2, 1]));
        assert_eq!(p(&[2, 0, 5]).mul(&QPoly::one()).unwrap(), p(&[2, 0, 5]));
        assert_eq!(p(&[2, 0, 5]).mul(&QPoly::zero()).unwrap(), QPoly::zero());
    }

    #[test]
    fn shift_basics() {
        assert_eq!(p(&[1, 1]).shift(2), p(&[0, 0, 1, 1]));
        assert_eq!(p(&[1, 1]).shift(0), p(&[1, 1]));
        assert_eq!(QPoly::zero().shift(5), QPoly::zero());
    }

    #[test]
    fn mu_coeff_basics() {
        assert_eq!(QPoly::one().mu_coeff(1).unwrap(), 1);
        assert_eq!(p(&[1, 1]).mu_coeff(3).unwrap(), 1);
        assert_eq!(QPoly::one().mu_coeff(2).unwrap(), 0);
        assert!(QPoly::one().mu_coeff(0).is_err());
    }

    #[test]
    fn eval_at_one_basics() {
        assert_eq!(p(&[1, 1]).eval_at_one().unwrap(), 2);
        assert_eq!(QPoly::zero().eval_at_one().unwrap(), 0);
        assert_eq!(p(&[1, 2, 1]).eval_at_one().unwrap(), 4);
    }

    #[test]
    fn overflow_is_reported() {
        let big = QPoly::constant(i64::MAX);
        assert_eq!(big.add(&QPoly::one()), Err(Error::Overflow));
        assert_eq!(big.mul(&QPoly::constant(2)), Err(Error::Overflow));
        assert_eq!(p(&[i64::MAX, i64::MAX]).eval_at_one(), Err(Error::Overflow));
    }

    #[test]
    fn display_and_parse() {
        let cases = [
            (p(&[1, 1, 2]), "1 + q + 2*q^2"),
            (p(&[0]), "0"),
            (p(&[-1, -1]), "-1 - q"),
            (p(&[0, 0, 3]), "3*q^2"),
            (p(&[0, 1]), "q"),
            (p(&[5]), "5"),
            (p(&[1, 0, -2, 1]), "1 - 2*q^2 + q^3"),
        ];
        for (poly, text) in cases {
            assert_eq!(poly.to_string(), text);
            assert_eq!(text.parse::<QPoly>().unwrap(), poly);
        }
        // lossless via JSON as well
        let q = p(&[1, 0, 7]);
        assert_eq!(QPoly::from_json(&q.to_json()).unwrap(), q);
        assert_eq!(q.to_json().to_string(), "[1,0,7]");
    }

    /// Every polynomial of degree <= 1 with coefficients in [-2,2].
    fn small_polys() -> Vec<QPoly> {
        let mut out = Vec::new();
        for a in -2i64..=2 {
            for b in -2i64..=2 {
                out.push(p(&[a, b]));
            }
        }
        out
    }

    #[test]
    fn ring_axioms_exhaustive_small() {
        let polys = small_polys();
        for a in &polys {
            for b in &polys {
                assert_eq!(a.add(b).unwrap(), b.add(a).unwrap());
                assert_eq!(a.mul(b).unwrap(), b.mul(a).unwrap());
                for c in &polys {
                    let ab_c = a.add(b).unwrap().add(c).unwrap();
                    let a_bc = a.add(&b.add(c).unwrap()).unwrap();
                    assert_eq!(ab_c, a_bc);
                    let lhs = a.mul(&b.add(c).unwrap()).unwrap();
                    let rhs = a.mul(b).unwrap().add(&a.mul(c).unwrap()).unwrap();
                    assert_eq!(lhs, rhs);
                    let m1 = a.mul(b).unwrap().mul(c).unwrap();
                    let m2 = a.mul(&b.mul(c).unwrap()).unwrap();
                    assert_eq!(m1, m2);
                }
            }
        }
    }

    fn arb_poly() -> impl Strategy<Value = QPoly> {
        proptest::collection::vec(-3i64..=3, 0..=5).prop_map(QPoly::new)
    }

    proptest! {
        #[test]
        fn ring_axioms_random(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
            prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
            prop_assert_eq!(
                a.mul(&b.add(&c).unwrap()).unwrap(),
                a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
            );
            prop_assert_eq!(
                a.mul(&b).unwrap().mul(&c).unwrap(),
                a.mul(&b.mul(&c).unwrap()).unwrap()
            );
        }

        #[test]
        fn no_trailing_zero_after_ops(a in arb_poly(), b in arb_poly()) {
            for r in [a.add(&b).unwrap(), a.sub(&b).unwrap(), a.mul(&b).unwrap(), a.shift(2)] {
                prop_assert!(r.coeffs().last() != Some(&0));
            }
        }

        #[test]
        fn display_roundtrip(a in arb_poly()) {
            let shown = a.to_string();
            prop_assert_eq!(shown.parse::<QPoly>().unwrap(), a);
        }
    }
}
