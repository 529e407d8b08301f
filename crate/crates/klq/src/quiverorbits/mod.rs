//! Multisegments for linear and cyclic quivers, their double-coset matrix
//! encodings, orbit dimensions and closure order, IC polynomials through the
//! cancellation reduction, skew-shape standard forms with dot actions, and
//! the decomposition-number evaluator.

mod cyclic;
mod linear;
mod weights;

pub use cyclic::{
    closure_leq_cyclic, enumerate_class_cyclic, from_matrix_cyclic, ic_inverse_cyclic,
    ic_poly_cyclic, ic_poly_cyclic_unreduced, maximal_elements, orbit_dim_cyclic, reduce_by_cyclic,
    reduce_cyclic, to_matrix_cyclic,
};
pub use linear::{
    closure_leq, closure_leq_rank, enumerate_class, from_matrix, ic_inverse, ic_poly,
    ic_poly_unreduced, mmax, orbit_dim, reduce, reduce_by, to_matrix,
};
pub use weights::{
    aff_stabilizer_trivial, decomp_multiplicity, dot_action, dot_action_aff, fin_stabilizer_trivial,
    in_dk, in_dk_aff, sign_inverse_check, sign_inverse_check_aff, skew, skew_cyclic, sort_to_dk,
    sort_to_dk_aff, weight_entry, AffStandardPair, StandardPair,
};

use crate::error::{Error, Result};
use std::fmt;

/// A nonempty integer interval `[start, end]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Segment {
    pub start: i64,
    pub end: i64,
}

impl Segment {
    pub fn new(start: i64, end: i64) -> Result<Segment> {
        if start > end {
            return Err(Error::Invalid(format!("empty segment [{start},{end}]")));
        }
        Ok(Segment { start, end })
    }

    pub fn len(&self) -> u64 {
        (self.end - self.start + 1) as u64
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.start, self.end)
    }
}

/// A finite multiset of segments; order of the summands is irrelevant.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Multisegment {
    segs: Vec<Segment>,
}

impl Multisegment {
    pub fn new(mut segs: Vec<Segment>) -> Multisegment {
        segs.sort();
        Multisegment { segs }
    }

    pub fn empty() -> Multisegment {
        Multisegment { segs: Vec::new() }
    }

    pub fn from_pairs(pairs: &[(i64, i64)]) -> Result<Multisegment> {
        let segs = pairs
            .iter()
            .map(|&(a, b)| Segment::new(a, b))
            .collect::<Result<Vec<_>>>()?;
        Ok(Multisegment::new(segs))
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segs
    }

    /// The number of segments `k(m)`.
    pub fn k(&self) -> usize {
        self.segs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segs.is_empty()
    }

    pub fn min_content(&self) -> Option<i64> {
        self.segs.iter().map(|s| s.start).min()
    }

    pub fn max_content(&self) -> Option<i64> {
        self.segs.iter().map(|s| s.end).max()
    }

    /// Translates every segment by `t`.
    pub fn shifted(&self, t: i64) -> Multisegment {
        Multisegment::new(
            self.segs
                .iter()
                .map(|s| Segment { start: s.start + t, end: s.end + t })
                .collect(),
        )
    }

    /// How many times `i` occurs as a content.
    pub fn content_multiplicity(&self, i: i64) -> u64 {
        self.segs.iter().filter(|s| s.start <= i && i <= s.end).count() as u64
    }

    /// The dimension vector over the ambient range `[1,n]`.
    pub fn dims(&self, n: u32) -> Vec<u64> {
        (1..=n as i64).map(|i| self.content_multiplicity(i)).collect()
    }

    /// Total content `d`.
    pub fn total(&self) -> u64 {
        self.segs.iter().map(|s| s.len()).sum()
    }
}

impl fmt::Display for Multisegment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.segs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.segs.iter().map(|s| s.to_string()).collect();
        write!(f, "{}", parts.join("+"))
    }
}

impl std::str::FromStr for Multisegment {
    type Err = Error;

    /// Parses `"[1,2]+[2,2]+[3,3]"`; `"0"` is the empty multisegment.
    fn from_str(s: &str) -> Result<Multisegment> {
        let s = s.trim();
        if s == "0" || s.is_empty() {
            return Ok(Multisegment::empty());
        }
        let mut segs = Vec::new();
        for part in s.split('+') {
            segs.push(parse_segment(part)?);
        }
        Ok(Multisegment::new(segs))
    }
}

/// A multisegment in the modulo-`n` sense: `[i,j]` is identified with
/// `[i+n, j+n]`; stored with starts normalized to `[1,n]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CyclicMultisegment {
    modulus: u32,
    segs: Vec<Segment>,
}

impl CyclicMultisegment {
    pub fn new(modulus: u32, segs: Vec<Segment>) -> Result<CyclicMultisegment> {
        if modulus == 0 {
            return Err(Error::Invalid("the modulus must be positive".into()));
        }
        let n = modulus as i64;
        let mut normalized: Vec<Segment> = segs
            .into_iter()
            .map(|s| {
                let k = (s.start - 1).div_euclid(n);
                Segment { start: s.start - k * n, end: s.end - k * n }
            })
            .collect();
        normalized.sort();
        Ok(CyclicMultisegment { modulus, segs: normalized })
    }

    pub fn from_pairs(modulus: u32, pairs: &[(i64, i64)]) -> Result<CyclicMultisegment> {
        let segs = pairs
            .iter()
            .map(|&(a, b)| Segment::new(a, b))
            .collect::<Result<Vec<_>>>()?;
        CyclicMultisegment::new(modulus, segs)
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segs
    }

    pub fn k(&self) -> usize {
        self.segs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segs.is_empty()
    }

    /// The dimension vector: `d_i` counts occurrences of the residue class
    /// of `i` among the contents, indexed by `i` in `[1,n]`.
    pub fn dims(&self) -> Vec<u64> {
        let n = self.modulus as i64;
        let mut d = vec![0u64; self.modulus as usize];
        for s in &self.segs {
            for c in s.start..=s.end {
                d[((c - 1).rem_euclid(n)) as usize] += 1;
            }
        }
        d
    }

    pub fn total(&self) -> u64 {
        self.segs.iter().map(|s| s.len()).sum()
    }
}

impl fmt::Display for CyclicMultisegment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.segs.is_empty() {
            return write!(f, "0 mod {}", self.modulus);
        }
        let parts: Vec<String> = self.segs.iter().map(|s| s.to_string()).collect();
        write!(f, "{} mod {}", parts.join("+"), self.modulus)
    }
}

impl std::str::FromStr for CyclicMultisegment {
    type Err = Error;

    /// Parses `"[1,2]+[2,3]+[3,4] mod 3"`.
    fn from_str(s: &str) -> Result<CyclicMultisegment> {
        let s = s.trim();
        let (body, modpart) = s
            .rsplit_once("mod")
            .ok_or_else(|| Error::Parse(format!("cyclic multisegment needs a 'mod n' suffix: {s:?}")))?;
        let modulus: u32 = modpart
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad modulus {modpart:?}")))?;
        let body: Multisegment = body.trim().parse()?;
        CyclicMultisegment::new(modulus, body.segments().to_vec())
    }
}

fn parse_segment(s: &str) -> Result<Segment> {
    let t = s.trim();
    let inner = t
        .strip_prefix('[')
        .and_then(|x| x.strip_suffix(']'))
        .ok_or_else(|| Error::Parse(format!("expected a segment like [1,2], got {t:?}")))?;
    let (a, b) = inner
        .split_once(',')
        .ok_or_else(|| Error::Parse(format!("expected two endpoints in {t:?}")))?;
    let start: i64 = a.trim().parse().map_err(|_| Error::Parse(format!("bad endpoint {a:?}")))?;
    let end: i64 = b.trim().parse().map_err(|_| Error::Parse(format!("bad endpoint {b:?}")))?;
    Segment::new(start, end)
}

/// JSON form of a multisegment: `{"segments": [[1,2],[2,2]]}`.
pub fn multisegment_to_json(m: &Multisegment) -> serde_json::Value {
    serde_json::json!({
        "segments": m.segments().iter().map(|s| vec![s.start, s.end]).collect::<Vec<_>>(),
    })
}

pub fn multisegment_from_json(v: &serde_json::Value) -> Result<Multisegment> {
    let segs = v
        .get("segments")
        .and_then(|x| x.as_array())
        .ok_or_else(|| Error::Parse("missing segments".into()))?;
    let pairs = segs
        .iter()
        .map(|p| {
            let a = p.get(0).and_then(|x| x.as_i64());
            let b = p.get(1).and_then(|x| x.as_i64());
            match (a, b) {
                (Some(a), Some(b)) => Ok((a, b)),
                _ => Err(Error::Parse(format!("bad segment {p}"))),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Multisegment::from_pairs(&pairs)
}

/// JSON form of a cyclic multisegment: adds `"modulus": n`.
pub fn cyclic_to_json(m: &CyclicMultisegment) -> serde_json::Value {
    serde_json::json!({
        "modulus": m.modulus(),
        "segments": m.segments().iter().map(|s| vec![s.start, s.end]).collect::<Vec<_>>(),
    })
}

pub fn cyclic_from_json(v: &serde_json::Value) -> Result<CyclicMultisegment> {
    let modulus = v
        .get("modulus")
        .and_then(|x| x.as_u64())
        .ok_or_else(|| Error::Parse("missing modulus".into()))? as u32;
    let inner = multisegment_from_json(v)?;
    CyclicMultisegment::new(modulus, inner.segments().to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let m: Multisegment = "[1,2]+[2,2]+[3,3]".parse().unwrap();
        assert_eq!(m.k(), 3);
        assert_eq!(m.to_string(), "[1,2]+[2,2]+[3,3]");
        assert_eq!(m.dims(3), vec![1, 2, 1]);
        assert_eq!("0".parse::<Multisegment>().unwrap(), Multisegment::empty());
        assert!("[2,1]".parse::<Multisegment>().is_err());

        let c: CyclicMultisegment = "[1,2]+[2,3]+[3,4] mod 3".parse().unwrap();
        assert_eq!(c.dims(), vec![2, 2, 2]);
        assert_eq!(c.to_string(), "[1,2]+[2,3]+[3,4] mod 3");
        // normalization of starts into [1,n]
        let shifted = CyclicMultisegment::from_pairs(3, &[(4, 5), (2, 3), (3, 4)]).unwrap();
        assert_eq!(shifted, "[1,2]+[2,3]+[3,4] mod 3".parse().unwrap());
    }

    #[test]
    fn json_roundtrip() {
        let m: Multisegment = "[1,2]+[2,2]".parse().unwrap();
        assert_eq!(multisegment_from_json(&multisegment_to_json(&m)).unwrap(), m);
        let c: CyclicMultisegment = "[1,6] mod 3".parse().unwrap();
        assert_eq!(cyclic_from_json(&cyclic_to_json(&c)).unwrap(), c);
    }

    #[test]
    fn multiset_identity() {
        let a = Multisegment::from_pairs(&[(1, 2), (2, 2)]).unwrap();
        let b = Multisegment::from_pairs(&[(2, 2), (1, 2)]).unwrap();
        assert_eq!(a, b);
    }
}
