//! Biperiodic nonnegative-integer matrices with prescribed periodic row and
//! column sums, parametrizing parabolic double cosets of the extended affine
//! symmetric group. A matrix satisfies `m_{i+n, j+n'} = m_{i,j}` and is
//! stored by one period of rows with sparse finite-support columns.

use crate::affsymgroup::{self, AffPerm};
use crate::error::{Error, Result};
use crate::qpoly::QPoly;
use std::collections::BTreeMap;
use std::fmt;

fn floor_div(a: i64, b: i64) -> i64 {
    a.div_euclid(b)
}

fn ceil_div(a: i64, b: i64) -> i64 {
    -((-a).div_euclid(b))
}

/// Periodic block sizes `(b_1,...,b_n)` (extended by `b_{i+n} = b_i`)
/// together with an anchor: block `B_1` starts at position `anchor`, and
/// `B_{i+n} = B_i + d`. The default anchor is 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffBlockSpec {
    sizes: Vec<u64>,
    anchor: i64,
}

impl AffBlockSpec {
    pub fn new(sizes: Vec<u64>) -> AffBlockSpec {
        AffBlockSpec { sizes, anchor: 1 }
    }

    pub fn with_anchor(sizes: Vec<u64>, anchor: i64) -> AffBlockSpec {
        AffBlockSpec { sizes, anchor }
    }

    pub fn sizes(&self) -> &[u64] {
        &self.sizes
    }

    pub fn anchor(&self) -> i64 {
        self.anchor
    }

    /// Number of blocks per period.
    pub fn period(&self) -> usize {
        self.sizes.len()
    }

    /// Total size `d` of one period.
    pub fn d(&self) -> u64 {
        self.sizes.iter().sum()
    }

    /// Size of block `i` for any integer index.
    pub fn size(&self, i: i64) -> u64 {
        let n = self.period() as i64;
        self.sizes[((i - 1).rem_euclid(n)) as usize]
    }

    /// First position of block `i` (for an empty block, the position the
    /// block would occupy).
    pub fn block_start(&self, i: i64) -> i64 {
        let n = self.period() as i64;
        let i0 = (i - 1).rem_euclid(n) + 1;
        let k = (i - i0) / n;
        let before: u64 = self.sizes[..(i0 - 1) as usize].iter().sum();
        self.anchor + before as i64 + k * self.d() as i64
    }

    /// `(block index, 1-based offset)` of a position.
    pub fn block_of_pos(&self, p: i64) -> (i64, u64) {
        let d = self.d() as i64;
        let n = self.period() as i64;
        let k = floor_div(p - self.anchor, d);
        let p0 = p - k * d; // in [anchor, anchor + d)
        let mut start = self.anchor;
        for i0 in 1..=n {
            let size = self.sizes[(i0 - 1) as usize] as i64;
            if p0 < start + size {
                return (i0 + k * n, (p0 - start + 1) as u64);
            }
            start += size;
        }
        unreachable!("position {p} must land in some block");
    }
}

/// An element of `M_{(b_i),n;(c_j),n'}`, stored by rows `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicMatrix {
    rows: Vec<BTreeMap<i64, u64>>,
    rowsums: Vec<u64>,
    colsums: Vec<u64>,
}

impl PeriodicMatrix {
    /// Builds a matrix from one period of sparse rows; `nprime` is the
    /// column period. Zero entries are dropped, row and column sums are
    /// derived from the data.
    pub fn new(rows: Vec<BTreeMap<i64, u64>>, nprime: usize) -> Result<PeriodicMatrix> {
        if rows.is_empty() || nprime == 0 {
            return Err(Error::Invalid("periods must be positive".into()));
        }
        let rows: Vec<BTreeMap<i64, u64>> = rows
            .into_iter()
            .map(|r| r.into_iter().filter(|&(_, v)| v > 0).collect())
            .collect();
        let rowsums: Vec<u64> = rows.iter().map(|r| r.values().sum()).collect();
        if rowsums.iter().sum::<u64>() == 0 {
            return Err(Error::Invalid("a periodic matrix needs positive total size".into()));
        }
        let mut colsums = vec![0u64; nprime];
        for r in &rows {
            for (&j, &v) in r {
                colsums[((j - 1).rem_euclid(nprime as i64)) as usize] += v;
            }
        }
        Ok(PeriodicMatrix { rows, rowsums, colsums })
    }

    /// Row period `n`.
    pub fn n(&self) -> usize {
        self.rows.len()
    }

    /// Column period `n'`.
    pub fn nprime(&self) -> usize {
        self.colsums.len()
    }

    /// Common sum `d`.
    pub fn d(&self) -> u64 {
        self.rowsums.iter().sum()
    }

    pub fn rowsums(&self) -> &[u64] {
        &self.rowsums
    }

    pub fn colsums(&self) -> &[u64] {
        &self.colsums
    }

    pub fn rows(&self) -> &[BTreeMap<i64, u64>] {
        &self.rows
    }

    /// `m_{i,j}` for any integers, by periodicity.
    pub fn entry(&self, i: i64, j: i64) -> u64 {
        let (i0, jj) = self.normalize(i, j);
        self.rows[(i0 - 1) as usize].get(&jj).copied().unwrap_or(0)
    }

    /// Maps `(i,j)` to the stored row `i0` in `[1,n]` and shifted column.
    fn normalize(&self, i: i64, j: i64) -> (i64, i64) {
        let n = self.n() as i64;
        let np = self.nprime() as i64;
        let i0 = (i - 1).rem_euclid(n) + 1;
        let k = (i - i0) / n;
        (i0, j - k * np)
    }

    fn row_support(&self, i0: usize) -> Option<(i64, i64)> {
        let r = &self.rows[i0];
        match (r.first_key_value(), r.last_key_value()) {
            (Some((&lo, _)), Some((&hi, _))) => Some((lo, hi)),
            _ => None,
        }
    }

    /// Sum of row `i0+1` over columns `>= j`.
    fn row_tail(&self, i0: usize, j: i64) -> u64 {
        self.rows[i0].range(j..).map(|(_, &v)| v).sum()
    }

    /// Sum of row `i0+1` over columns `<= j`.
    fn row_head(&self, i0: usize, j: i64) -> u64 {
        self.rows[i0].range(..=j).map(|(_, &v)| v).sum()
    }

    /// Northeast sector sum `m_{<=i,>=j}` (finite by support decay).
    pub fn ne_sum(&self, i: i64, j: i64) -> u64 {
        let n = self.n() as i64;
        let np = self.nprime() as i64;
        let mut total = 0u64;
        for i0 in 1..=n {
            let Some((lo, hi)) = self.row_support((i0 - 1) as usize) else { continue };
            let b = self.rowsums[(i0 - 1) as usize];
            // row i0 + k*n contributes row_tail(i0, j - k*np); k <= kmax
            let kmax = floor_div(i - i0, n);
            // full rows: j - k*np <= lo
            let kfull = ceil_div(j - lo, np);
            if kmax >= kfull {
                total += (kmax - kfull + 1) as u64 * b;
            }
            // partially covered rows: lo < j - k*np <= hi
            let kzero = ceil_div(j - hi, np);
            let k_hi = (kfull - 1).min(kmax);
            let mut k = kzero;
            while k <= k_hi {
                total += self.row_tail((i0 - 1) as usize, j - k * np);
                k += 1;
            }
        }
        total
    }

    /// Southwest sector sum `m_{>=i,<=j}`.
    pub fn sw_sum(&self, i: i64, j: i64) -> u64 {
        let n = self.n() as i64;
        let np = self.nprime() as i64;
        let mut total = 0u64;
        for i0 in 1..=n {
            let Some((lo, hi)) = self.row_support((i0 - 1) as usize) else { continue };
            let b = self.rowsums[(i0 - 1) as usize];
            // row i0 + k*n contributes row_head(i0, j - k*np); k >= kmin
            let kmin = ceil_div(i - i0, n);
            // full rows: j - k*np >= hi
            let kfull = floor_div(j - hi, np);
            if kfull >= kmin {
                total += (kfull - kmin + 1) as u64 * b;
            }
            // partial: lo <= j - k*np < hi
            let kzero = floor_div(j - lo, np);
            let mut k = (kfull + 1).max(kmin);
            while k <= kzero {
                total += self.row_head((i0 - 1) as usize, j - k * np);
                k += 1;
            }
        }
        total
    }

    /// Column partial sum `m_{<=imax, j}`.
    pub fn col_sum_upto(&self, j: i64, imax: i64) -> u64 {
        let n = self.n() as i64;
        let np = self.nprime() as i64;
        let mut total = 0u64;
        for i0 in 1..=n {
            let Some((lo, hi)) = self.row_support((i0 - 1) as usize) else { continue };
            // entry of row i0 + k*n at column j is rows[i0][j - k*np]
            let k_lo = ceil_div(j - hi, np);
            let k_hi = floor_div(j - lo, np);
            for k in k_lo..=k_hi {
                if i0 + k * n <= imax {
                    total += self.rows[(i0 - 1) as usize].get(&(j - k * np)).copied().unwrap_or(0);
                }
            }
        }
        total
    }

    /// `psi(w)_{i,j} = |w(B_i) n C_j|` for periodic blocks.
    pub fn psi_aff(w: &AffPerm, rspec: &AffBlockSpec, cspec: &AffBlockSpec) -> Result<PeriodicMatrix> {
        let d = w.degree() as u64;
        if rspec.d() != d || cspec.d() != d {
            return Err(Error::Invalid(format!(
                "block specs sum to {} and {}, expected the degree {d}",
                rspec.d(),
                cspec.d()
            )));
        }
        let n = rspec.period();
        let mut rows = vec![BTreeMap::new(); n];
        for i0 in 1..=n as i64 {
            let start = rspec.block_start(i0);
            for off in 0..rspec.size(i0) as i64 {
                let v = w.apply(start + off);
                let (j, _) = cspec.block_of_pos(v);
                *rows[(i0 - 1) as usize].entry(j).or_insert(0) += 1;
            }
        }
        let m = PeriodicMatrix::new(rows, cspec.period())?;
        debug_assert_eq!(m.colsums, cspec.sizes);
        Ok(m)
    }

    /// The longest element of the double coset `psi^{-1}(m)`, with respect to
    /// the given anchored blocks. Length, order, and KL polynomials do not
    /// depend on the anchors; the window itself does.
    pub fn longest_rep_aff(&self, rspec: &AffBlockSpec, cspec: &AffBlockSpec) -> Result<AffPerm> {
        if rspec.sizes() != self.rowsums || cspec.sizes() != self.colsums {
            return Err(Error::SpecMismatch);
        }
        let d = self.d() as i64;
        let n = self.n() as i64;
        let mut values: Vec<(i64, i64)> = Vec::with_capacity(d as usize); // (position, value)
        for i0 in 1..=n {
            let start = rspec.block_start(i0);
            let row = &self.rows[(i0 - 1) as usize];
            let mut s = 0u64;
            for (&j, &v) in row.iter().rev() {
                // entries at column j serve block offsets s+1 ..= s+v,
                // i.e. t = m_{<=i0-1, j} + (s') - m_{i0, >= j+1} for s' in that range
                let col_above = self.col_sum_upto(j, i0 - 1);
                let tail = s; // m_{i0,>=j+1} accumulated so far
                for s2 in s + 1..=s + v {
                    let t = col_above + s2 - tail;
                    let cstart = cspec.block_start(j);
                    let csize = cspec.size(j);
                    debug_assert!(t >= 1 && t <= csize);
                    let value = cstart + csize as i64 - t as i64;
                    values.push((start + (s2 - 1) as i64, value));
                }
                s += v;
            }
        }
        // re-window to positions 1..=d
        let mut window = vec![0i64; d as usize];
        for (pos, value) in values {
            let k = floor_div(pos - 1, d);
            window[(pos - 1 - k * d) as usize] = value - k * d;
        }
        AffPerm::from_window(window)
    }

    /// `l(m) = sum_{i in [1,n], j} m_{i,j} m_{<=i,>=j} - binom(m_{i,j}+1,2)`.
    pub fn length_aff(&self) -> u64 {
        let mut total = 0u64;
        let mut correction = 0u64;
        for i0 in 1..=self.n() as i64 {
            for (&j, &v) in &self.rows[(i0 - 1) as usize] {
                total += v * self.ne_sum(i0, j);
                correction += v * (v + 1) / 2;
            }
        }
        total - correction
    }

    fn same_specs(&self, other: &PeriodicMatrix) -> bool {
        self.rowsums == other.rowsums && self.colsums == other.colsums
    }

    /// Joint column-support window used by the dominance scans.
    fn joint_bounds(&self, other: &PeriodicMatrix) -> (i64, i64) {
        let n = self.n() as i64;
        let np = self.nprime() as i64;
        let mut lo = i64::MAX;
        let mut hi = i64::MIN;
        let mut span = 0i64;
        for m in [self, other] {
            for i0 in 0..m.rows.len() {
                if let Some((l, h)) = m.row_support(i0) {
                    lo = lo.min(l);
                    hi = hi.max(h);
                    span = span.max(h - l);
                }
            }
        }
        let jlow = lo - np * (n + 2) - span - 4;
        let jhigh = hi + np + 1;
        (jlow, jhigh)
    }

    /// Bruhat order: northeast dominance for one period of rows and all
    /// columns, with stabilization (equality) at the far negative end.
    pub fn leq_aff(&self, other: &PeriodicMatrix) -> Result<bool> {
        if !self.same_specs(other) {
            return Err(Error::SpecMismatch);
        }
        let (jlow, jhigh) = self.joint_bounds(other);
        for i in 1..=self.n() as i64 {
            if self.ne_sum(i, jlow) != other.ne_sum(i, jlow) {
                return Ok(false);
            }
            for j in jlow..=jhigh {
                if self.ne_sum(i, j) > other.ne_sum(i, j) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Whether the entry class `(i,j)` is cancellable for `[self, other]`.
    pub fn cancellable_entry_aff(&self, other: &PeriodicMatrix, i: i64, j: i64) -> Result<bool> {
        if !self.leq_aff(other)? {
            return Err(Error::NotComparable);
        }
        Ok(self.entry(i, j) >= 1
            && self.ne_sum(i - 1, j) == other.ne_sum(i - 1, j)
            && self.ne_sum(i, j + 1) == other.ne_sum(i, j + 1))
    }

    /// Subtracts the periodic elementary matrix `e_{i+kn, j+kn'} = 1`;
    /// the specs drop by one in the classes of `i` and `j`.
    pub fn cancel_entry_aff(&self, i: i64, j: i64) -> Result<PeriodicMatrix> {
        let (i0, jj) = self.normalize(i, j);
        if self.rows[(i0 - 1) as usize].get(&jj).copied().unwrap_or(0) == 0 {
            return Err(Error::Invalid(format!("entry class ({i},{j}) is zero")));
        }
        let mut rows = self.rows.clone();
        let e = rows[(i0 - 1) as usize].get_mut(&jj).unwrap();
        *e -= 1;
        if *e == 0 {
            rows[(i0 - 1) as usize].remove(&jj);
        }
        PeriodicMatrix::new(rows, self.nprime())
    }

    /// All matrices with the same specs lying below `self`.
    pub fn enumerate_leq_aff(&self) -> Vec<PeriodicMatrix> {
        let n = self.n() as i64;
        let np = self.nprime() as i64;
        // column support window per row, forced by the two dominance criteria
        let mut jlo = vec![0i64; self.n()];
        let mut jhi = vec![0i64; self.n()];
        for i in 1..=n {
            let mut lo = i64::MAX;
            let mut hi = i64::MIN;
            for i0 in 1..=n {
                if let Some((l, h)) = self.row_support((i0 - 1) as usize) {
                    lo = lo.min(l + np * ceil_div(i - i0, n));
                    hi = hi.max(h + np * floor_div(i - i0, n));
                }
            }
            jlo[(i - 1) as usize] = lo;
            jhi[(i - 1) as usize] = hi;
        }
        let mut out = Vec::new();
        let mut rows: Vec<BTreeMap<i64, u64>> = Vec::with_capacity(self.n());
        let mut used = vec![0u64; self.nprime()];
        self.enum_rows(0, &jlo, &jhi, &mut rows, &mut used, &mut out);
        out
    }

    fn enum_rows(
        &self,
        i0: usize,
        jlo: &[i64],
        jhi: &[i64],
        rows: &mut Vec<BTreeMap<i64, u64>>,
        used: &mut [u64],
        out: &mut Vec<PeriodicMatrix>,
    ) {
        if i0 == self.n() {
            if let Ok(x) = PeriodicMatrix::new(rows.clone(), self.nprime()) {
                if x.rowsums == self.rowsums && self.colsums == x.colsums && x.leq_aff(self).unwrap_or(false) {
                    out.push(x);
                }
            }
            return;
        }
        let mut row = BTreeMap::new();
        self.enum_cells(i0, jlo[i0], self.rowsums[i0], jlo, jhi, &mut row, rows, used, out);
    }

    #[allow(clippy::too_many_arguments)]
    fn enum_cells(
        &self,
        i0: usize,
        j: i64,
        remaining: u64,
        jlo: &[i64],
        jhi: &[i64],
        row: &mut BTreeMap<i64, u64>,
        rows: &mut Vec<BTreeMap<i64, u64>>,
        used: &mut [u64],
        out: &mut Vec<PeriodicMatrix>,
    ) {
        if remaining == 0 || j > jhi[i0] {
            if remaining != 0 {
                return;
            }
            rows.push(row.clone());
            self.enum_rows(i0 + 1, jlo, jhi, rows, used, out);
            rows.pop();
            return;
        }
        let class = ((j - 1).rem_euclid(self.nprime() as i64)) as usize;
        let cap = (self.colsums[class] - used[class]).min(remaining);
        for v in 0..=cap {
            if v > 0 {
                row.insert(j, v);
                used[class] += v;
            }
            self.enum_cells(i0, j + 1, remaining - v, jlo, jhi, row, rows, used, out);
            if v > 0 {
                row.remove(&j);
                used[class] -= v;
            }
        }
    }

    /// The transpose, with row and column data swapped.
    pub fn transpose(&self) -> PeriodicMatrix {
        let n = self.n() as i64;
        let np = self.nprime() as i64;
        let mut rows = vec![BTreeMap::new(); self.nprime()];
        for i0 in 1..=n {
            for (&j, &v) in &self.rows[(i0 - 1) as usize] {
                let j0 = (j - 1).rem_euclid(np) + 1;
                let k = (j - j0) / np;
                rows[(j0 - 1) as usize].insert(i0 - k * n, v);
            }
        }
        PeriodicMatrix::new(rows, self.n()).expect("transpose preserves positivity")
    }

    /// JSON form `{"n":..,"nprime":..,"rows":[{"i":1,"cols":{"2":2}},..]}`.
    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .enumerate()
            .map(|(k, r)| {
                let cols: serde_json::Map<String, serde_json::Value> = r
                    .iter()
                    .map(|(&j, &v)| (j.to_string(), serde_json::Value::from(v)))
                    .collect();
                serde_json::json!({"i": k + 1, "cols": cols})
            })
            .collect();
        serde_json::json!({"n": self.n(), "nprime": self.nprime(), "rows": rows})
    }

    pub fn from_json(v: &serde_json::Value) -> Result<PeriodicMatrix> {
        let n = v
            .get("n")
            .and_then(|x| x.as_u64())
            .ok_or_else(|| Error::Parse("missing period n".into()))? as usize;
        let nprime = v
            .get("nprime")
            .and_then(|x| x.as_u64())
            .ok_or_else(|| Error::Parse("missing period nprime".into()))? as usize;
        let mut rows = vec![BTreeMap::new(); n];
        let rlist = v
            .get("rows")
            .and_then(|x| x.as_array())
            .ok_or_else(|| Error::Parse("missing rows".into()))?;
        for r in rlist {
            let i = r
                .get("i")
                .and_then(|x| x.as_u64())
                .ok_or_else(|| Error::Parse("row without index i".into()))? as usize;
            if i == 0 || i > n {
                return Err(Error::Parse(format!("row index {i} outside 1..{n}")));
            }
            let cols = r
                .get("cols")
                .and_then(|x| x.as_object())
                .ok_or_else(|| Error::Parse("row without cols map".into()))?;
            for (js, vv) in cols {
                let j: i64 = js.parse().map_err(|_| Error::Parse(format!("bad column {js}")))?;
                let val = vv
                    .as_u64()
                    .ok_or_else(|| Error::Parse(format!("bad entry at column {js}")))?;
                if val > 0 {
                    rows[i - 1].insert(j, val);
                }
            }
        }
        PeriodicMatrix::new(rows, nprime)
    }

    /// Parses the plain-text grid form: one period of rows separated by
    /// `;`, entries separated by spaces, with a `*` prefix marking the
    /// `(1,1)` entry in the first row.
    pub fn from_text(s: &str) -> Result<PeriodicMatrix> {
        let s = s.trim();
        if s.starts_with('{') {
            let v: serde_json::Value =
                serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
            return PeriodicMatrix::from_json(&v);
        }
        let lines: Vec<&str> = s.split(';').collect();
        let mut origin = None;
        let grid: Vec<Vec<u64>> = lines
            .iter()
            .enumerate()
            .map(|(li, line)| {
                line.split_whitespace()
                    .enumerate()
                    .map(|(ti, tok)| {
                        let tok = if let Some(rest) = tok.strip_prefix('*') {
                            if li != 0 {
                                return Err(Error::Parse("the * marker belongs in row 1".into()));
                            }
                            origin = Some(ti as i64);
                            rest
                        } else {
                            tok
                        };
                        tok.parse::<u64>().map_err(|_| Error::Parse(format!("bad entry {tok:?}")))
                    })
                    .collect::<Result<Vec<u64>>>()
            })
            .collect::<Result<_>>()?;
        let origin = origin.ok_or_else(|| {
            Error::Parse("mark the (1,1) entry with a leading * in row 1".into())
        })?;
        let width = grid.first().map(|r| r.len()).unwrap_or(0);
        let mut rows = vec![BTreeMap::new(); grid.len()];
        for (li, line) in grid.iter().enumerate() {
            for (ti, &v) in line.iter().enumerate() {
                if v > 0 {
                    rows[li].insert(ti as i64 - origin + 1, v);
                }
            }
        }
        // without an explicit period the grid width is taken as n'
        PeriodicMatrix::new(rows, width.max(1))
    }

    /// As [`PeriodicMatrix::from_text`] but with an explicit column period.
    pub fn from_text_with_period(s: &str, nprime: usize) -> Result<PeriodicMatrix> {
        let m = PeriodicMatrix::from_text(s)?;
        PeriodicMatrix::new(m.rows, nprime)
    }
}

impl fmt::Display for PeriodicMatrix {
    /// One period of rows over the joint support window, the `(1,1)` entry
    /// marked with `*`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut lo = 1i64;
        let mut hi = 1i64;
        for i0 in 0..self.n() {
            if let Some((l, h)) = self.row_support(i0) {
                lo = lo.min(l);
                hi = hi.max(h);
            }
        }
        let lines: Vec<String> = (0..self.n())
            .map(|i0| {
                (lo..=hi)
                    .map(|j| {
                        let v = self.rows[i0].get(&j).copied().unwrap_or(0);
                        if i0 == 0 && j == 1 {
                            format!("*{v}")
                        } else {
                            v.to_string()
                        }
                    })
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        write!(f, "{}", lines.join(" ; "))
    }
}

/// `P_{m,m'} = P_{w_m, w_{m'}}`; independent of the block anchors.
pub fn kl_poly_mat_aff(m: &PeriodicMatrix, m2: &PeriodicMatrix) -> Result<QPoly> {
    if !m.same_specs(m2) {
        return Err(Error::SpecMismatch);
    }
    let rspec = AffBlockSpec::new(m.rowsums.clone());
    let cspec = AffBlockSpec::new(m.colsums.clone());
    affsymgroup::kl_poly(&m.longest_rep_aff(&rspec, &cspec)?, &m2.longest_rep_aff(&rspec, &cspec)?)
}

/// Inverse-KL entry over the finite interval `[m,m2]`, by back-substitution.
pub fn kl_inverse_mat_aff(m: &PeriodicMatrix, m2: &PeriodicMatrix) -> Result<QPoly> {
    if !m.same_specs(m2) {
        return Err(Error::SpecMismatch);
    }
    if !m.leq_aff(m2)? {
        return Ok(QPoly::zero());
    }
    let mut interval: Vec<PeriodicMatrix> = m2
        .enumerate_leq_aff()
        .into_iter()
        .filter(|x| m.leq_aff(x).unwrap_or(false))
        .collect();
    interval.sort_by_key(|x| std::cmp::Reverse(x.length_aff()));
    let mut inv: Vec<(PeriodicMatrix, QPoly)> = Vec::with_capacity(interval.len());
    for x in &interval {
        let mut q = if x == m2 { QPoly::one() } else { QPoly::zero() };
        for (z, qz) in &inv {
            if z == x {
                continue;
            }
            let p = kl_poly_mat_aff(x, z)?;
            if !p.is_zero() {
                q = q.sub(&p.mul(qz)?)?;
            }
        }
        inv.push((x.clone(), q));
    }
    Ok(inv
        .into_iter()
        .find(|(x, _)| x == m)
        .map(|(_, q)| q)
        .expect("m lies in its own interval"))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The degree-7 matrix displayed in the periodic worked example:
    /// rows (1: {2:2, 6:1}) and (2: {1:1, 4:2, 9:1}), periods (2,3).
    fn example_matrix() -> PeriodicMatrix {
        let mut r1 = BTreeMap::new();
        r1.insert(2, 2);
        r1.insert(6, 1);
        let mut r2 = BTreeMap::new();
        r2.insert(1, 1);
        r2.insert(4, 2);
        r2.insert(9, 1);
        PeriodicMatrix::new(vec![r1, r2], 3).unwrap()
    }

    fn specs_example() -> (AffBlockSpec, AffBlockSpec) {
        (AffBlockSpec::new(vec![3, 4]), AffBlockSpec::new(vec![3, 2, 2]))
    }

    #[test]
    fn block_spec_positions() {
        let b = AffBlockSpec::new(vec![3, 4]);
        assert_eq!(b.block_start(1), 1);
        assert_eq!(b.block_start(2), 4);
        assert_eq!(b.block_start(3), 8); // B_3 = B_1 + 7
        assert_eq!(b.block_start(0), -3);
        assert_eq!(b.block_of_pos(5), (2, 2));
        assert_eq!(b.block_of_pos(8), (3, 1));
        assert_eq!(b.block_of_pos(0), (0, 4));
        let c = AffBlockSpec::with_anchor(vec![1, 1, 1], 0);
        assert_eq!(c.block_start(1), 0);
        assert_eq!(c.block_of_pos(0), (1, 1));
        assert_eq!(c.block_of_pos(5), (6, 1));
    }

    #[test]
    fn entry_periodicity() {
        let m = example_matrix();
        assert_eq!(m.entry(1, 2), 2);
        assert_eq!(m.entry(3, 5), 2); // row 3 = row 1 shifted by (2,3)
        assert_eq!(m.entry(-1, -1), 2);
        assert_eq!(m.entry(2, 9), 1);
        assert_eq!(m.entry(4, 12), 1);
        assert_eq!(m.entry(1, 1), 0);
    }

    #[test]
    fn sums_match_specs() {
        let m = example_matrix();
        assert_eq!(m.rowsums(), &[3, 4]);
        assert_eq!(m.colsums(), &[3, 2, 2]);
        assert_eq!(m.d(), 7);
    }

    #[test]
    fn sector_sums_brute_force() {
        let m = example_matrix();
        // brute force over a large finite window
        for i in -4..=6i64 {
            for j in -12..=15i64 {
                let mut ne = 0u64;
                for i2 in (i - 40)..=i {
                    for j2 in j..=(j + 60) {
                        ne += m.entry(i2, j2);
                    }
                }
                assert_eq!(m.ne_sum(i, j), ne, "ne at ({i},{j})");
                let mut sw = 0u64;
                for i2 in i..=(i + 40) {
                    for j2 in (j - 60)..=j {
                        sw += m.entry(i2, j2);
                    }
                }
                assert_eq!(m.sw_sum(i, j), sw, "sw at ({i},{j})");
                let mut cu = 0u64;
                for i2 in (i - 40)..=i {
                    cu += m.entry(i2, j);
                }
                assert_eq!(m.col_sum_upto(j, i), cu, "col at ({i},{j})");
            }
        }
    }

    #[test]
    fn longest_rep_worked_example() {
        let m = example_matrix();
        let (b, c) = specs_example();
        let w = m.longest_rep_aff(&b, &c).unwrap();
        assert_eq!(w.window(), &[13, 5, 4, 21, 10, 9, 1]);
        // psi inverts it
        assert_eq!(PeriodicMatrix::psi_aff(&w, &b, &c).unwrap(), m);
        // length formula agrees with the window inversion count
        assert_eq!(m.length_aff(), w.length());
    }

    #[test]
    fn psi_identity_blocks() {
        let b = AffBlockSpec::new(vec![2, 1]);
        let m = PeriodicMatrix::psi_aff(&AffPerm::identity(3), &b, &b).unwrap();
        assert_eq!(m.entry(1, 1), 2);
        assert_eq!(m.entry(2, 2), 1);
        // the coset of the identity is the parabolic S_{(2,1)} itself, whose
        // longest element is the window (2,1,3) of length 1
        assert_eq!(m.length_aff(), 1);
        let w = m.longest_rep_aff(&b, &b).unwrap();
        assert_eq!(w.window(), &[2, 1, 3]);
        assert_eq!(PeriodicMatrix::psi_aff(&w, &b, &b).unwrap(), m);
    }

    #[test]
    fn singleton_blocks_identity() {
        let ones = AffBlockSpec::new(vec![1, 1, 1]);
        let m = PeriodicMatrix::psi_aff(&AffPerm::identity(3), &ones, &ones).unwrap();
        assert_eq!(m.longest_rep_aff(&ones, &ones).unwrap(), AffPerm::identity(3));
        assert_eq!(m.length_aff(), 0);
    }

    #[test]
    fn reduced_example_windows() {
        // the reduced maximal elements of the cyclic worked example:
        // B_i = {i}, C_j = {j-1}; m1max - m^- has rows {1:{6}, 2:{1}, 3:{2}}
        let b = AffBlockSpec::new(vec![1, 1, 1]);
        let c = AffBlockSpec::with_anchor(vec![1, 1, 1], 0);
        let mk = |cols: [i64; 3]| {
            let rows = cols
                .iter()
                .map(|&j| {
                    let mut r = BTreeMap::new();
                    r.insert(j, 1);
                    r
                })
                .collect();
            PeriodicMatrix::new(rows, 3).unwrap()
        };
        let m_low = mk([2, 3, 4]);
        assert_eq!(m_low.longest_rep_aff(&b, &c).unwrap(), AffPerm::identity(3));
        let m1 = mk([6, 1, 2]);
        let w1 = m1.longest_rep_aff(&b, &c).unwrap();
        assert_eq!(w1.window(), &[5, 0, 1]);
        assert_eq!(w1, AffPerm::from_word(3, 0, &[1, 0, 2, 1]).unwrap());
        assert_eq!(m1.length_aff(), 4);
        assert!(m_low.leq_aff(&m1).unwrap());
        assert_eq!(
            kl_poly_mat_aff(&m_low, &m1).unwrap(),
            QPoly::new(vec![1, 1])
        );
        // inverse entries over the interval are signs
        assert_eq!(kl_inverse_mat_aff(&m_low, &m1).unwrap(), QPoly::one());
        assert_eq!(kl_poly_mat_aff(&m_low, &m_low).unwrap(), QPoly::one());
    }

    #[test]
    fn leq_agrees_with_window_bruhat() {
        let m = example_matrix();
        let (b, c) = specs_example();
        let lower = m.enumerate_leq_aff();
        assert!(lower.contains(&m));
        for x in &lower {
            for y in &lower {
                let lhs = x.leq_aff(y).unwrap();
                let rhs = x
                    .longest_rep_aff(&b, &c)
                    .unwrap()
                    .bruhat_leq(&y.longest_rep_aff(&b, &c).unwrap())
                    .unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn anchor_independence() {
        let m = example_matrix();
        let (b, c) = specs_example();
        let base = m.length_aff();
        for ba in [-2, 0, 1, 5] {
            for ca in [-1, 0, 1, 4] {
                let bs = AffBlockSpec::with_anchor(vec![3, 4], ba);
                let cs = AffBlockSpec::with_anchor(vec![3, 2, 2], ca);
                let w = m.longest_rep_aff(&bs, &cs).unwrap();
                assert_eq!(w.length(), base);
                assert_eq!(PeriodicMatrix::psi_aff(&w, &bs, &cs).unwrap(), m);
            }
        }
        let _ = (b, c);
    }

    #[test]
    fn cancellation_drops_specs() {
        let m = example_matrix();
        let c = m.cancel_entry_aff(1, 2).unwrap();
        assert_eq!(c.rowsums(), &[2, 4]);
        assert_eq!(c.colsums(), &[3, 1, 2]);
        assert_eq!(c.entry(1, 2), 1);
        assert_eq!(c.entry(3, 5), 1);
        assert!(m.cancel_entry_aff(1, 1).is_err());
        // reflexive cancellability at positive entries
        assert!(m.cancellable_entry_aff(&m, 1, 2).unwrap());
        assert!(m.cancellable_entry_aff(&m, 3, 5).unwrap());
    }

    #[test]
    fn transpose_duality() {
        let m = example_matrix();
        let t = m.transpose();
        assert_eq!(t.rowsums(), m.colsums());
        assert_eq!(t.colsums(), m.rowsums());
        assert_eq!(t.transpose(), m);
        assert_eq!(t.length_aff(), m.length_aff());
        let lower = m.enumerate_leq_aff();
        for x in &lower {
            for y in &lower {
                assert_eq!(x.leq_aff(y).unwrap(), x.transpose().leq_aff(&y.transpose()).unwrap());
            }
        }
    }

    #[test]
    fn json_roundtrip() {
        let m = example_matrix();
        assert_eq!(PeriodicMatrix::from_json(&m.to_json()).unwrap(), m);
        let shown = m.to_string();
        assert!(shown.contains('*'));
        // text grids parse back when the width equals the column period
        let mut r1 = BTreeMap::new();
        r1.insert(1, 1);
        let mut r2 = BTreeMap::new();
        r2.insert(2, 2);
        let small = PeriodicMatrix::new(vec![r1, r2], 2).unwrap();
        assert_eq!(PeriodicMatrix::from_text(&small.to_string()).unwrap(), small);
    }
}
