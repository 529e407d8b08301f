//! Cyclic-quiver nilpotent orbits: periodic matrix encodings of cyclic
//! multisegments, closure order, orbit dimension, maximal elements of an
//! upper set, and IC polynomials via the cancellation reduction into the
//! affine symmetric group of the segment count.

use super::{CyclicMultisegment, Segment};
use crate::affcosetmat::{self, PeriodicMatrix};
use crate::error::{Error, Result};
use crate::qpoly::QPoly;
use std::collections::BTreeMap;

/// The periodic matrix of a cyclic multisegment: multiplicities on and
/// above the diagonal, crossing counts on the subdiagonal, zero below.
pub fn to_matrix_cyclic(m: &CyclicMultisegment) -> Result<PeriodicMatrix> {
    if m.is_empty() {
        return Err(Error::Invalid("the empty multisegment has no matrix".into()));
    }
    let n = m.modulus() as i64;
    let mut rows: Vec<BTreeMap<i64, u64>> = vec![BTreeMap::new(); n as usize];
    for s in m.segments() {
        *rows[(s.start - 1) as usize].entry(s.end).or_insert(0) += 1;
    }
    for i in 1..=n {
        // segments (with all their shifts) crossing from <= i-1 to >= i
        let mut crossing = 0u64;
        for s in m.segments() {
            let k_hi = (i - 1 - s.start).div_euclid(n);
            let k_lo = -((s.end - i).div_euclid(n));
            if k_hi >= k_lo {
                crossing += (k_hi - k_lo + 1) as u64;
            }
        }
        if crossing > 0 {
            *rows[(i - 1) as usize].entry(i - 1).or_insert(0) += crossing;
        }
    }
    PeriodicMatrix::new(rows, m.modulus() as usize)
}

/// Reads a cyclic multisegment back off a periodic encoding matrix.
pub fn from_matrix_cyclic(mat: &PeriodicMatrix) -> Result<CyclicMultisegment> {
    let n = mat.n();
    if mat.nprime() != n {
        return Err(Error::Invalid("encoding matrices have equal periods".into()));
    }
    let mut segs = Vec::new();
    for i in 1..=n as i64 {
        for (&j, &v) in &mat.rows()[(i - 1) as usize] {
            if j < i - 1 {
                return Err(Error::Invalid(format!(
                    "entry ({i},{j}) is below the subdiagonal; not a multisegment encoding"
                )));
            }
            if j >= i {
                for _ in 0..v {
                    segs.push(Segment { start: i, end: j });
                }
            }
        }
    }
    let m = CyclicMultisegment::new(n as u32, segs)?;
    let rebuilt = to_matrix_cyclic(&m)?;
    if &rebuilt != mat {
        return Err(Error::Invalid(
            "subdiagonal entries do not match the crossing counts".into(),
        ));
    }
    Ok(m)
}

/// `dim O_m = l(m) - sum_{i in [1,n]} binom(d_i, 2)`.
pub fn orbit_dim_cyclic(m: &CyclicMultisegment) -> Result<u64> {
    if m.is_empty() {
        return Ok(0);
    }
    let enc = to_matrix_cyclic(m)?;
    let stab: u64 = m.dims().iter().map(|&d| d * d.saturating_sub(1) / 2).sum();
    Ok(enc.length_aff() - stab)
}

/// Closure order on cyclic multisegments of one quiver: false when the
/// dimension vectors differ, otherwise periodic sector dominance.
pub fn closure_leq_cyclic(m: &CyclicMultisegment, m2: &CyclicMultisegment) -> Result<bool> {
    if m.modulus() != m2.modulus() {
        return Err(Error::Invalid("different moduli".into()));
    }
    if m.is_empty() || m2.is_empty() {
        return Ok(m == m2);
    }
    if m.dims() != m2.dims() {
        return Ok(false);
    }
    to_matrix_cyclic(m)?.leq_aff(&to_matrix_cyclic(m2)?)
}

/// All cyclic multisegments with the given dimension vector and segment
/// ends bounded by `max_end` (pass `None` for the natural bound, start
/// plus total size).
pub fn enumerate_class_cyclic(
    n: u32,
    dims: &[u64],
    max_end: Option<i64>,
) -> Vec<CyclicMultisegment> {
    let d: u64 = dims.iter().sum();
    let nn = n as i64;
    let mut segs = Vec::new();
    for a in 1..=nn {
        let mut b = a;
        loop {
            let len = (b - a + 1) as u64;
            if len > d {
                break;
            }
            if let Some(cap) = max_end {
                if b > cap {
                    break;
                }
            }
            segs.push(Segment { start: a, end: b });
            b += 1;
        }
    }
    let mut out = Vec::new();
    let mut budget: Vec<i64> = dims.iter().map(|&x| x as i64).collect();
    let mut chosen = Vec::new();
    enum_rec(n, &segs, 0, &mut budget, &mut chosen, &mut out);
    out
}

fn enum_rec(
    n: u32,
    segs: &[Segment],
    idx: usize,
    budget: &mut [i64],
    chosen: &mut Vec<Segment>,
    out: &mut Vec<CyclicMultisegment>,
) {
    if budget.iter().all(|&b| b == 0) {
        out.push(CyclicMultisegment::new(n, chosen.clone()).expect("normalized segments"));
        return;
    }
    if idx == segs.len() {
        return;
    }
    let s = segs[idx];
    // content class counts of this segment
    let mut counts = vec![0i64; n as usize];
    for c in s.start..=s.end {
        counts[((c - 1).rem_euclid(n as i64)) as usize] += 1;
    }
    let mut maxmult = i64::MAX;
    for (r, &cnt) in counts.iter().enumerate() {
        if cnt > 0 {
            maxmult = maxmult.min(budget[r] / cnt);
        }
    }
    for mult in (1..=maxmult.max(0)).rev() {
        for (r, &cnt) in counts.iter().enumerate() {
            budget[r] -= cnt * mult;
        }
        for _ in 0..mult {
            chosen.push(s);
        }
        enum_rec(n, segs, idx + 1, budget, chosen, out);
        for _ in 0..mult {
            chosen.pop();
        }
        for (r, &cnt) in counts.iter().enumerate() {
            budget[r] += cnt * mult;
        }
    }
    enum_rec(n, segs, idx + 1, budget, chosen, out);
}

/// The maximal elements of the upper set `<m> = {m' : m <= m'}`.
pub fn maximal_elements(m: &CyclicMultisegment) -> Result<Vec<CyclicMultisegment>> {
    if m.is_empty() {
        return Ok(vec![m.clone()]);
    }
    let upper: Vec<CyclicMultisegment> = enumerate_class_cyclic(m.modulus(), &m.dims(), None)
        .into_iter()
        .filter(|x| closure_leq_cyclic(m, x).unwrap_or(false))
        .collect();
    let mut maximal = Vec::new();
    'outer: for x in &upper {
        for y in &upper {
            if x != y && closure_leq_cyclic(x, y)? {
                continue 'outer;
            }
        }
        maximal.push(x.clone());
    }
    maximal.sort();
    Ok(maximal)
}

/// Subtracts a prescribed periodic subdiagonal `a` (indexed by rows
/// `1..=n`) from an encoding.
pub fn reduce_by_cyclic(enc: &PeriodicMatrix, a: &[u64]) -> Result<PeriodicMatrix> {
    let n = enc.n();
    if a.len() != n {
        return Err(Error::Invalid("the shift vector has one entry per row".into()));
    }
    let mut rows = enc.rows().to_vec();
    for i in 1..=n as i64 {
        let want = a[(i - 1) as usize];
        if want == 0 {
            continue;
        }
        let have = rows[(i - 1) as usize].get(&(i - 1)).copied().unwrap_or(0);
        if have < want {
            return Err(Error::Invalid(format!(
                "subdiagonal entry ({i},{}) is smaller than the shift",
                i - 1
            )));
        }
        if have == want {
            rows[(i - 1) as usize].remove(&(i - 1));
        } else {
            rows[(i - 1) as usize].insert(i - 1, have - want);
        }
    }
    PeriodicMatrix::new(rows, enc.nprime())
}

/// Subtracts the full subdiagonal of the lower element from both encodings;
/// the outputs index the same KL polynomial inside the affine group of
/// degree `k(m)`.
pub fn reduce_cyclic(
    m: &CyclicMultisegment,
    m2: &CyclicMultisegment,
) -> Result<(PeriodicMatrix, PeriodicMatrix)> {
    if !closure_leq_cyclic(m, m2)? {
        return Err(Error::NotComparable);
    }
    let ea = to_matrix_cyclic(m)?;
    let eb = to_matrix_cyclic(m2)?;
    let n = ea.n();
    let sub: Vec<u64> = (1..=n as i64).map(|i| ea.entry(i, i - 1)).collect();
    Ok((reduce_by_cyclic(&ea, &sub)?, reduce_by_cyclic(&eb, &sub)?))
}

/// `IC_{m,m2}` through the reduced encoding.
pub fn ic_poly_cyclic(m: &CyclicMultisegment, m2: &CyclicMultisegment) -> Result<QPoly> {
    check_dims(m, m2)?;
    if !closure_leq_cyclic(m, m2)? {
        return Ok(QPoly::zero());
    }
    if m.is_empty() {
        return Ok(QPoly::one());
    }
    let (ra, rb) = reduce_cyclic(m, m2)?;
    affcosetmat::kl_poly_mat_aff(&ra, &rb)
}

/// `IC_{m,m2}` through the full-size encoding, without cancellation.
pub fn ic_poly_cyclic_unreduced(m: &CyclicMultisegment, m2: &CyclicMultisegment) -> Result<QPoly> {
    check_dims(m, m2)?;
    if !closure_leq_cyclic(m, m2)? {
        return Ok(QPoly::zero());
    }
    if m.is_empty() {
        return Ok(QPoly::one());
    }
    affcosetmat::kl_poly_mat_aff(&to_matrix_cyclic(m)?, &to_matrix_cyclic(m2)?)
}

/// Inverse IC polynomial, through the reduced encoding.
pub fn ic_inverse_cyclic(m: &CyclicMultisegment, m2: &CyclicMultisegment) -> Result<QPoly> {
    check_dims(m, m2)?;
    if !closure_leq_cyclic(m, m2)? {
        return Ok(QPoly::zero());
    }
    if m.is_empty() {
        return Ok(QPoly::one());
    }
    let (ra, rb) = reduce_cyclic(m, m2)?;
    affcosetmat::kl_inverse_mat_aff(&ra, &rb)
}

fn check_dims(m: &CyclicMultisegment, m2: &CyclicMultisegment) -> Result<()> {
    if m.modulus() != m2.modulus() {
        return Err(Error::Invalid("different moduli".into()));
    }
    if m.is_empty() || m2.is_empty() {
        if m == m2 {
            return Ok(());
        }
        return Err(Error::DimensionMismatch);
    }
    if m.dims() != m2.dims() {
        return Err(Error::DimensionMismatch);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affcosetmat::AffBlockSpec;
    use crate::affsymgroup::AffPerm;

    fn cm(s: &str) -> CyclicMultisegment {
        s.parse().unwrap()
    }

    #[test]
    fn encoding_matches_displayed_matrices() {
        // m = [1,2]+[2,3]+[3,4] mod 3: rows {1:{0:1,2:1}, 2:{1:1,3:1}, 3:{2:1,4:1}}
        let m = cm("[1,2]+[2,3]+[3,4] mod 3");
        let enc = to_matrix_cyclic(&m).unwrap();
        assert_eq!(enc.entry(1, 0), 1);
        assert_eq!(enc.entry(1, 2), 1);
        assert_eq!(enc.entry(2, 1), 1);
        assert_eq!(enc.entry(2, 3), 1);
        assert_eq!(enc.entry(3, 2), 1);
        assert_eq!(enc.entry(3, 4), 1);
        assert_eq!(enc.entry(1, 1), 0);
        assert_eq!(enc.rowsums(), &[2, 2, 2]);

        // m1max = [1,6] mod 3: rows {1:{0:1,6:1}, 2:{1:2}, 3:{2:2}}
        let top = cm("[1,6] mod 3");
        let e = to_matrix_cyclic(&top).unwrap();
        assert_eq!(e.entry(1, 0), 1);
        assert_eq!(e.entry(1, 6), 1);
        assert_eq!(e.entry(2, 1), 2);
        assert_eq!(e.entry(3, 2), 2);
        assert_eq!(e.rowsums(), &[2, 2, 2]);
    }

    #[test]
    fn roundtrip_on_class() {
        for m in enumerate_class_cyclic(3, &[2, 2, 2], Some(8)) {
            let enc = to_matrix_cyclic(&m).unwrap();
            assert_eq!(from_matrix_cyclic(&enc).unwrap(), m);
        }
    }

    #[test]
    fn maximal_elements_worked_example() {
        let m = cm("[1,2]+[2,3]+[3,4] mod 3");
        let tops = maximal_elements(&m).unwrap();
        let expect: Vec<CyclicMultisegment> =
            ["[1,6] mod 3", "[2,7] mod 3", "[3,8] mod 3"].iter().map(|s| cm(s)).collect();
        let mut sorted = expect.clone();
        sorted.sort();
        assert_eq!(tops, sorted);
        // single segment: maximal on its own
        let single = cm("[1,4] mod 2");
        assert_eq!(maximal_elements(&single).unwrap(), vec![single.clone()]);
    }

    #[test]
    fn reduced_windows_worked_example() {
        let m = cm("[1,2]+[2,3]+[3,4] mod 3");
        let top = cm("[1,6] mod 3");
        let (ra, rb) = reduce_cyclic(&m, &top).unwrap();
        // the reduced matrices of the worked example
        assert_eq!(ra.entry(1, 2), 1);
        assert_eq!(ra.entry(2, 3), 1);
        assert_eq!(ra.entry(3, 4), 1);
        assert_eq!(ra.rowsums(), &[1, 1, 1]);
        assert_eq!(rb.entry(1, 6), 1);
        assert_eq!(rb.entry(2, 1), 1);
        assert_eq!(rb.entry(3, 2), 1);
        // with B_i = {i}, C_j = {j-1} the lower one is the identity and the
        // top one the window (5,0,1)
        let b = AffBlockSpec::new(vec![1, 1, 1]);
        let c = AffBlockSpec::with_anchor(vec![1, 1, 1], 0);
        assert_eq!(ra.longest_rep_aff(&b, &c).unwrap(), AffPerm::identity(3));
        assert_eq!(rb.longest_rep_aff(&b, &c).unwrap().window(), &[5, 0, 1]);
    }

    #[test]
    fn ic_worked_example() {
        let m = cm("[1,2]+[2,3]+[3,4] mod 3");
        for tops in ["[1,6] mod 3", "[2,7] mod 3", "[3,8] mod 3"] {
            let top = cm(tops);
            assert_eq!(ic_poly_cyclic(&m, &top).unwrap(), QPoly::new(vec![1, 1]));
            assert_eq!(
                ic_poly_cyclic_unreduced(&m, &top).unwrap(),
                QPoly::new(vec![1, 1])
            );
        }
        assert_eq!(ic_poly_cyclic(&m, &m).unwrap(), QPoly::one());
    }

    #[test]
    fn ic_two_segments_is_one() {
        // any comparable pair with k(m) = 2 has IC = 1
        let m = cm("[1,3]+[2,3] mod 2");
        for x in enumerate_class_cyclic(2, &m.dims(), None) {
            if closure_leq_cyclic(&m, &x).unwrap() {
                assert!(ic_poly_cyclic(&m, &x).unwrap().is_one());
            }
        }
    }

    #[test]
    fn orbit_dims_cyclic() {
        // trivial multisegment: the zero orbit
        let t = cm("[1,1]+[2,2] mod 2");
        assert_eq!(orbit_dim_cyclic(&t).unwrap(), 0);
        let m = cm("[1,2]+[2,3]+[3,4] mod 3");
        let top = cm("[1,6] mod 3");
        assert!(orbit_dim_cyclic(&m).unwrap() < orbit_dim_cyclic(&top).unwrap());
    }

    #[test]
    fn closure_and_dims() {
        let m = cm("[1,2]+[2,3]+[3,4] mod 3");
        assert!(closure_leq_cyclic(&m, &cm("[1,6] mod 3")).unwrap());
        assert!(!closure_leq_cyclic(&cm("[1,6] mod 3"), &m).unwrap());
        // dimension mismatch: incomparable, and an error for IC
        assert!(!closure_leq_cyclic(&cm("[1,1] mod 2"), &cm("[2,2] mod 2")).unwrap());
        assert!(ic_poly_cyclic(&cm("[1,1] mod 2"), &cm("[2,2] mod 2")).is_err());
        assert!(closure_leq_cyclic(&cm("[1,1] mod 2"), &cm("[1,1] mod 3")).is_err());
    }
}
