//! Linear-quiver nilpotent orbits: the matrix encoding of multisegments,
//! closure order, orbit dimension, the dense orbit, and IC polynomials via
//! the subdiagonal cancellation reduction.

use super::{Multisegment, Segment};
use crate::cosetmat::{self, BlockSpec, CosetMatrix};
use crate::error::{Error, Result};
use crate::qpoly::QPoly;

/// Smallest ambient `[1,n]` containing all contents; errors on contents
/// below 1 (translate the multisegment first).
pub fn natural_range(m: &Multisegment) -> Result<u32> {
    if m.is_empty() {
        return Ok(1);
    }
    if m.min_content().unwrap() < 1 {
        return Err(Error::Invalid(format!(
            "contents of {m} leave [1,n]; translate it first"
        )));
    }
    Ok(m.max_content().unwrap() as u32)
}

/// The matrix of a multisegment in `M_{(d_i);(d_j)}`: above the diagonal
/// the multiplicity of `[i,j]`, on the subdiagonal the number of segments
/// crossing from `[1,i-1]` to `[i,n]`, zero below that.
pub fn to_matrix(m: &Multisegment, n: u32) -> Result<CosetMatrix> {
    if m.is_empty() {
        return Err(Error::Invalid("the empty multisegment has no matrix".into()));
    }
    let lo = m.min_content().unwrap();
    let hi = m.max_content().unwrap();
    if lo < 1 || hi > n as i64 {
        return Err(Error::Invalid(format!("contents of {m} leave [1,{n}]")));
    }
    let n = n as usize;
    let mut entries = vec![vec![0u64; n]; n];
    for s in m.segments() {
        entries[(s.start - 1) as usize][(s.end - 1) as usize] += 1;
    }
    for i in 2..=n {
        let crossing = m
            .segments()
            .iter()
            .filter(|s| s.start <= i as i64 - 1 && s.end >= i as i64)
            .count() as u64;
        entries[i - 1][i - 2] = crossing;
    }
    let dims = m.dims(n as u32);
    CosetMatrix::new(entries, BlockSpec::new(dims.clone()), BlockSpec::new(dims))
}

/// Reads a multisegment back off an encoding matrix; the input must lie in
/// the encoding ideal (zero strictly below the subdiagonal, and the
/// subdiagonal determined by the crossing counts).
pub fn from_matrix(mat: &CosetMatrix) -> Result<Multisegment> {
    let n = mat.nrows();
    if mat.ncols() != n {
        return Err(Error::Invalid("encoding matrices are square".into()));
    }
    let mut segs = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            let v = mat.entry(i, j);
            if j + 1 < i && v != 0 {
                return Err(Error::Invalid(format!(
                    "entry ({i},{j}) is below the subdiagonal; not a multisegment encoding"
                )));
            }
            if j >= i {
                for _ in 0..v {
                    segs.push(Segment { start: i as i64, end: j as i64 });
                }
            }
        }
    }
    let m = Multisegment::new(segs);
    let rebuilt = to_matrix(&m, n as u32)?;
    if &rebuilt != mat {
        return Err(Error::Invalid(
            "subdiagonal entries do not match the crossing counts".into(),
        ));
    }
    Ok(m)
}

/// Translates the pair into a common ambient `[1,n]`.
fn aligned(m: &Multisegment, m2: &Multisegment) -> (Multisegment, Multisegment, u32) {
    let lo = m.min_content().into_iter().chain(m2.min_content()).min().unwrap_or(1);
    let t = 1 - lo;
    let a = m.shifted(t);
    let b = m2.shifted(t);
    let hi = a.max_content().into_iter().chain(b.max_content()).max().unwrap_or(1);
    (a, b, hi as u32)
}

/// `dim O_m = l(m) - sum_i binom(d_i, 2)`.
pub fn orbit_dim(m: &Multisegment) -> Result<u64> {
    if m.is_empty() {
        return Ok(0);
    }
    let shifted = m.shifted(1 - m.min_content().unwrap());
    let n = natural_range(&shifted)?;
    let enc = to_matrix(&shifted, n)?;
    let stab: u64 = shifted.dims(n).iter().map(|&d| d * d.saturating_sub(1) / 2).sum();
    Ok(enc.length() - stab)
}

/// Closure order: false when the dimension vectors differ, otherwise the
/// sector-dominance order of the encodings.
pub fn closure_leq(m: &Multisegment, m2: &Multisegment) -> Result<bool> {
    if m.is_empty() || m2.is_empty() {
        return Ok(m == m2);
    }
    let (a, b, n) = aligned(m, m2);
    if a.dims(n) != b.dims(n) {
        return Ok(false);
    }
    to_matrix(&a, n)?.leq(&to_matrix(&b, n)?)
}

/// The rank criterion, computed directly on segments: `m <= m2` iff
/// `|{[k,l] in m : k <= i, l >= j}| <= (same for m2)` for all `i <= j`.
/// This is the redundant cross-check route for the linear case.
pub fn closure_leq_rank(m: &Multisegment, m2: &Multisegment) -> bool {
    if m.is_empty() || m2.is_empty() {
        return m == m2;
    }
    let (a, b, n) = aligned(m, m2);
    if a.dims(n) != b.dims(n) {
        return false;
    }
    let rank = |ms: &Multisegment, i: i64, j: i64| {
        ms.segments().iter().filter(|s| s.start <= i && s.end >= j).count()
    };
    for i in 1..=n as i64 {
        for j in i..=n as i64 {
            if rank(&a, i, j) > rank(&b, i, j) {
                return false;
            }
        }
    }
    true
}

/// The unique maximal multisegment with the given dimension vector: the
/// one whose rank function attains `min(d_i,...,d_j)` everywhere.
pub fn mmax(dims: &[u64]) -> Multisegment {
    let n = dims.len() as i64;
    let rank = |i: i64, j: i64| -> u64 {
        if i < 1 || j > n || i > j {
            return 0;
        }
        dims[(i - 1) as usize..=(j - 1) as usize].iter().copied().min().unwrap_or(0)
    };
    let mut segs = Vec::new();
    for i in 1..=n {
        for j in i..=n {
            let mult = (rank(i, j) + rank(i - 1, j + 1)).saturating_sub(rank(i - 1, j) + rank(i, j + 1));
            for _ in 0..mult {
                segs.push(Segment { start: i, end: j });
            }
        }
    }
    Multisegment::new(segs)
}

/// Subtracts a prescribed subdiagonal `a` (indexed by rows, `a[0]` unused and
/// zero) from an encoding, dropping the row and column sums accordingly.
/// This realizes the passage to the smaller matrix poset of the rewrite rule
/// behind the cancellation reduction.
pub fn reduce_by(enc: &CosetMatrix, a: &[u64]) -> Result<CosetMatrix> {
    let n = enc.nrows();
    if a.len() != n || a[0] != 0 {
        return Err(Error::Invalid("the shift vector has one entry per row, first zero".into()));
    }
    let mut entries: Vec<Vec<u64>> = enc.entries().to_vec();
    for i in 2..=n {
        if entries[i - 1][i - 2] < a[i - 1] {
            return Err(Error::Invalid(format!(
                "subdiagonal entry ({i},{}) is smaller than the shift",
                i - 1
            )));
        }
        entries[i - 1][i - 2] -= a[i - 1];
    }
    let mut rows = enc.rowspec().sizes().to_vec();
    let mut cols = enc.colspec().sizes().to_vec();
    for i in 2..=n {
        rows[i - 1] -= a[i - 1];
        cols[i - 2] -= a[i - 1];
    }
    CosetMatrix::new(entries, BlockSpec::new(rows), BlockSpec::new(cols))
}

/// Subtracts the full subdiagonal of the lower element from both encodings;
/// the outputs index the same KL polynomial inside `S_{k(m)}`.
pub fn reduce(m: &Multisegment, m2: &Multisegment) -> Result<(CosetMatrix, CosetMatrix)> {
    if !closure_leq(m, m2)? {
        return Err(Error::NotComparable);
    }
    let (a, b, n) = aligned(m, m2);
    let ea = to_matrix(&a, n)?;
    let eb = to_matrix(&b, n)?;
    let mut sub = vec![0u64; n as usize];
    for i in 2..=n as usize {
        sub[i - 1] = ea.entry(i, i - 1);
    }
    Ok((reduce_by(&ea, &sub)?, reduce_by(&eb, &sub)?))
}

/// `IC_{m,m2}` through the reduced encoding (KL polynomial of `S_{k(m)}`).
pub fn ic_poly(m: &Multisegment, m2: &Multisegment) -> Result<QPoly> {
    check_dims(m, m2)?;
    if !closure_leq(m, m2)? {
        return Ok(QPoly::zero());
    }
    if m.is_empty() {
        return Ok(QPoly::one());
    }
    let (ra, rb) = reduce(m, m2)?;
    cosetmat::kl_poly_mat(&ra, &rb)
}

/// `IC_{m,m2}` through the full-size encoding, without cancellation.
pub fn ic_poly_unreduced(m: &Multisegment, m2: &Multisegment) -> Result<QPoly> {
    check_dims(m, m2)?;
    if !closure_leq(m, m2)? {
        return Ok(QPoly::zero());
    }
    if m.is_empty() {
        return Ok(QPoly::one());
    }
    let (a, b, n) = aligned(m, m2);
    cosetmat::kl_poly_mat(&to_matrix(&a, n)?, &to_matrix(&b, n)?)
}

/// Inverse IC polynomial, through the reduced encoding.
pub fn ic_inverse(m: &Multisegment, m2: &Multisegment) -> Result<QPoly> {
    check_dims(m, m2)?;
    if !closure_leq(m, m2)? {
        return Ok(QPoly::zero());
    }
    if m.is_empty() {
        return Ok(QPoly::one());
    }
    let (ra, rb) = reduce(m, m2)?;
    cosetmat::kl_inverse_mat(&ra, &rb)
}

fn check_dims(m: &Multisegment, m2: &Multisegment) -> Result<()> {
    if m.is_empty() || m2.is_empty() {
        if m == m2 {
            return Ok(());
        }
        return Err(Error::DimensionMismatch);
    }
    let (a, b, n) = aligned(m, m2);
    if a.dims(n) != b.dims(n) {
        return Err(Error::DimensionMismatch);
    }
    Ok(())
}

/// All multisegments with contents in `[1,n]` and the given dimension
/// vector (`dims[i-1]` counts the content `i`).
pub fn enumerate_class(n: u32, dims: &[u64]) -> Vec<Multisegment> {
    let n = n as i64;
    let mut segs = Vec::new();
    for a in 1..=n {
        for b in a..=n {
            segs.push(Segment { start: a, end: b });
        }
    }
    let mut out = Vec::new();
    let mut budget: Vec<i64> = dims.iter().map(|&d| d as i64).collect();
    let mut chosen = Vec::new();
    enum_rec(&segs, 0, &mut budget, &mut chosen, &mut out);
    out
}

fn enum_rec(
    segs: &[Segment],
    idx: usize,
    budget: &mut [i64],
    chosen: &mut Vec<Segment>,
    out: &mut Vec<Multisegment>,
) {
    if budget.iter().all(|&b| b == 0) {
        // any further segment would overdraw the budget
        out.push(Multisegment::new(chosen.clone()));
        return;
    }
    if idx == segs.len() {
        return;
    }
    let s = segs[idx];
    // maximum multiplicity of this segment within the remaining budget
    let mut maxmult = i64::MAX;
    for c in s.start..=s.end {
        maxmult = maxmult.min(budget[(c - 1) as usize]);
    }
    for mult in (1..=maxmult.max(0)).rev() {
        for c in s.start..=s.end {
            budget[(c - 1) as usize] -= mult;
        }
        for _ in 0..mult {
            chosen.push(s);
        }
        enum_rec(segs, idx + 1, budget, chosen, out);
        for _ in 0..mult {
            chosen.pop();
        }
        for c in s.start..=s.end {
            budget[(c - 1) as usize] += mult;
        }
    }
    enum_rec(segs, idx + 1, budget, chosen, out);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symgroup;

    fn ms(s: &str) -> Multisegment {
        s.parse().unwrap()
    }

    #[test]
    fn to_matrix_example() {
        let m = ms("[1,2]+[2,2]+[3,3]");
        let enc = to_matrix(&m, 3).unwrap();
        assert_eq!(enc.entry(1, 2), 1);
        assert_eq!(enc.entry(2, 2), 1);
        assert_eq!(enc.entry(3, 3), 1);
        assert_eq!(enc.entry(2, 1), 1); // [1,2] crosses between 1 and 2
        assert_eq!(enc.entry(3, 2), 0); // nothing crosses between 2 and 3
        assert_eq!(enc.rowspec().sizes(), &[1, 2, 1]);
        // trivial multisegment: diagonal encoding
        let t = ms("[1,1]+[1,1]+[2,2]");
        let enc = to_matrix(&t, 2).unwrap();
        assert_eq!(enc.entry(1, 1), 2);
        assert_eq!(enc.entry(2, 2), 1);
        assert_eq!(enc.entry(2, 1), 0);
        assert!(to_matrix(&ms("[1,4]"), 3).is_err());
    }

    #[test]
    fn subdiagonal_is_forced() {
        // m_{i,i-1} = m_{<=i-1,>=i} holds identically on encodings
        for m in enumerate_class(4, &[2, 1, 2, 1]) {
            let enc = to_matrix(&m, 4).unwrap();
            for i in 2..=4 {
                assert_eq!(enc.entry(i, i - 1), enc.ne_sum(i - 1, i));
            }
        }
    }

    #[test]
    fn from_matrix_roundtrip() {
        for dims in [vec![1, 2, 1], vec![2, 2], vec![1, 1, 1, 1]] {
            for m in enumerate_class(dims.len() as u32, &dims) {
                let enc = to_matrix(&m, dims.len() as u32).unwrap();
                assert_eq!(from_matrix(&enc).unwrap(), m);
            }
        }
        // a matrix with support below the subdiagonal is rejected
        let bad =
            CosetMatrix::from_entries(vec![vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]]).unwrap();
        assert!(from_matrix(&bad).is_err());
        // a wrong subdiagonal is rejected too: [1,2] alone crosses once
        let off = CosetMatrix::from_entries(vec![vec![0, 1], vec![2, 0]]).unwrap();
        assert!(from_matrix(&off).is_err());
    }

    #[test]
    fn orbit_dims() {
        assert_eq!(orbit_dim(&ms("[1,1]+[1,1]+[2,2]")).unwrap(), 0);
        assert_eq!(orbit_dim(&ms("[1,2]")).unwrap(), 1);
        assert_eq!(orbit_dim(&Multisegment::empty()).unwrap(), 0);
        // translation invariance
        assert_eq!(orbit_dim(&ms("[5,6]")).unwrap(), 1);
    }

    #[test]
    fn closure_order_basics() {
        assert!(closure_leq(&ms("[1,1]+[2,2]"), &ms("[1,2]")).unwrap());
        assert!(!closure_leq(&ms("[1,2]"), &ms("[1,1]+[2,2]")).unwrap());
        let m = ms("[1,2]+[2,2]+[3,3]");
        assert!(closure_leq(&m, &m).unwrap());
        // different dimension vectors: false
        assert!(!closure_leq(&ms("[1,1]"), &ms("[2,2]")).unwrap());
        // rank route agrees on a whole class
        for a in enumerate_class(3, &[1, 2, 1]) {
            for b in enumerate_class(3, &[1, 2, 1]) {
                assert_eq!(closure_leq(&a, &b).unwrap(), closure_leq_rank(&a, &b));
            }
        }
    }

    #[test]
    fn orbit_dim_monotone() {
        let class = enumerate_class(3, &[1, 2, 1]);
        for a in &class {
            for b in &class {
                if closure_leq(a, b).unwrap() {
                    let da = orbit_dim(a).unwrap();
                    let db = orbit_dim(b).unwrap();
                    assert!(da <= db);
                    if a != b {
                        assert!(da < db);
                    }
                }
            }
        }
    }

    #[test]
    fn mmax_examples() {
        assert_eq!(mmax(&[1, 1]), ms("[1,2]"));
        assert_eq!(mmax(&[2, 2, 2]), ms("[1,3]+[1,3]"));
        assert_eq!(mmax(&[1, 2, 1]), ms("[1,3]+[2,2]"));
        // dominance over the whole class
        for dims in [vec![1, 2, 1], vec![2, 1, 2], vec![1, 1, 1, 1]] {
            let top = mmax(&dims);
            assert_eq!(top.dims(dims.len() as u32), dims);
            for m in enumerate_class(dims.len() as u32, &dims) {
                assert!(closure_leq(&m, &top).unwrap(), "{m} not below {top}");
            }
        }
    }

    #[test]
    fn reduce_shrinks_to_segment_count() {
        let m = ms("[1,2]+[2,2]+[3,3]");
        let top = mmax(&[1, 2, 1]);
        let (ra, rb) = reduce(&m, &top).unwrap();
        assert_eq!(ra.d(), m.k() as u64);
        assert_eq!(rb.d(), m.k() as u64);
        // reflexive reduce: trivial multisegment stays diagonal
        let (sa, sb) = reduce(&m, &m).unwrap();
        assert_eq!(sa, sb);
        assert!(reduce(&top, &m).is_err());
    }

    #[test]
    fn ic_poly_paths_agree_on_class() {
        let class = enumerate_class(3, &[1, 2, 1]);
        for a in &class {
            for b in &class {
                let red = ic_poly(a, b).unwrap();
                let full = ic_poly_unreduced(a, b).unwrap();
                assert_eq!(red, full, "paths differ at {a}, {b}");
                // nonzero exactly on closure relations, 1 on the diagonal
                assert_eq!(!red.is_zero(), closure_leq(a, b).unwrap());
                if a == b {
                    assert!(red.is_one());
                }
                if !red.is_zero() {
                    assert_eq!(red.coeff(0), 1);
                    assert!(red.coeffs().iter().all(|&c| c >= 0));
                }
            }
        }
    }

    #[test]
    fn ic_dim_mismatch_is_an_error() {
        assert!(ic_poly(&ms("[1,1]"), &ms("[1,2]")).is_err());
        assert!(ic_inverse(&ms("[1,1]"), &ms("[1,2]")).is_err());
    }

    #[test]
    fn ic_matches_plain_kl_for_zelevinsky_class() {
        // with all d_i = 1 the encoding blocks are singletons and IC is a
        // plain KL polynomial of S_n
        let dims = vec![1, 1, 1, 1];
        let class = enumerate_class(4, &dims);
        assert_eq!(class.len(), 8); // interval partitions of [1,4]
        for a in &class {
            for b in &class {
                let ic = ic_poly(a, b).unwrap();
                let wa = to_matrix(a, 4).unwrap().longest_rep();
                let wb = to_matrix(b, 4).unwrap().longest_rep();
                assert_eq!(ic, symgroup::kl_poly(&wa, &wb).unwrap());
            }
        }
    }

    #[test]
    fn shifted_encodings_give_same_kl() {
        // a general valid shift (b_i),(c_j) with d_i - b_i = d_{i-1} - c_{i-1}
        let dims = [1u64, 2, 2];
        let class = enumerate_class(3, &dims);
        // shift vector a_i = d_i - b_i for i >= 2, within every subdiagonal
        for a2 in 0..=1u64 {
            for a3 in 0..=1u64 {
                let a = vec![0, a2, a3];
                let members: Vec<&Multisegment> = class
                    .iter()
                    .filter(|m| {
                        let enc = to_matrix(m, 3).unwrap();
                        (2..=3).all(|i| enc.entry(i, i - 1) >= a[i - 1])
                    })
                    .collect();
                for x in &members {
                    for y in &members {
                        if !closure_leq(x, y).unwrap() {
                            continue;
                        }
                        let ex = reduce_by(&to_matrix(x, 3).unwrap(), &a).unwrap();
                        let ey = reduce_by(&to_matrix(y, 3).unwrap(), &a).unwrap();
                        let via_shift = cosetmat::kl_poly_mat(&ex, &ey).unwrap();
                        assert_eq!(via_shift, ic_poly(x, y).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn class_enumeration_counts() {
        // dimension vector (1,1): the two multisegments [1,1]+[2,2] and [1,2]
        let c = enumerate_class(2, &[1, 1]);
        assert_eq!(c.len(), 2);
        // empty dimension vector gives the empty multisegment
        let e = enumerate_class(2, &[0, 0]);
        assert_eq!(e, vec![Multisegment::empty()]);
    }
}
