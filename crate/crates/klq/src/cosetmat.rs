//! Nonnegative integer matrices with prescribed row and column sums, which
//! parametrize parabolic double cosets of the symmetric group. The map `psi`
//! counts block intersections, `longest_rep` reconstructs the longest coset
//! representative, and length, Bruhat order, cancellation, and (inverse) KL
//! polynomials all transfer to the matrix side.

use crate::error::{Error, Result};
use crate::qpoly::QPoly;
use crate::symgroup::{self, Perm};
use std::fmt;

/// A composition `(b_1,...,b_n)` of `d`, inducing the partition of `[1,d]`
/// into consecutive blocks `B_i` with `|B_i| = b_i`. Empty blocks are kept.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlockSpec {
    sizes: Vec<u64>,
}

impl BlockSpec {
    pub fn new(sizes: Vec<u64>) -> BlockSpec {
        BlockSpec { sizes }
    }

    pub fn sizes(&self) -> &[u64] {
        &self.sizes
    }

    /// Number of blocks.
    pub fn len(&self) -> usize {
        self.sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sizes.is_empty()
    }

    /// Total `d`.
    pub fn total(&self) -> u64 {
        self.sizes.iter().sum()
    }

    /// Positions of block `i` (1-based block index) as `start..=end`;
    /// an empty block yields `start > end`.
    pub fn block(&self, i: usize) -> (u64, u64) {
        let before: u64 = self.sizes[..i - 1].iter().sum();
        (before + 1, before + self.sizes[i - 1])
    }

    /// `(block index, 1-based offset within the block)` of a position.
    pub fn block_of(&self, pos: u64) -> (usize, u64) {
        let mut before = 0u64;
        for (k, &b) in self.sizes.iter().enumerate() {
            if pos <= before + b {
                return (k + 1, pos - before);
            }
            before += b;
        }
        panic!("position {pos} outside [1,{}]", self.total());
    }
}

/// An element of `M_{(b_i);(c_j)}`: an `n x n'` matrix of nonnegative
/// integers whose row sums are `(b_i)` and column sums `(c_j)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CosetMatrix {
    entries: Vec<Vec<u64>>,
    rowspec: BlockSpec,
    colspec: BlockSpec,
}

impl CosetMatrix {
    pub fn new(entries: Vec<Vec<u64>>, rowspec: BlockSpec, colspec: BlockSpec) -> Result<CosetMatrix> {
        let n = rowspec.len();
        let np = colspec.len();
        if entries.len() != n || entries.iter().any(|r| r.len() != np) {
            return Err(Error::Invalid(format!("expected a {n} x {np} entry grid")));
        }
        for (i, row) in entries.iter().enumerate() {
            let s: u64 = row.iter().sum();
            if s != rowspec.sizes[i] {
                return Err(Error::Invalid(format!(
                    "row {} sums to {s}, expected {}",
                    i + 1,
                    rowspec.sizes[i]
                )));
            }
        }
        for j in 0..np {
            let s: u64 = entries.iter().map(|r| r[j]).sum();
            if s != colspec.sizes[j] {
                return Err(Error::Invalid(format!(
                    "column {} sums to {s}, expected {}",
                    j + 1,
                    colspec.sizes[j]
                )));
            }
        }
        Ok(CosetMatrix { entries, rowspec, colspec })
    }

    /// Builds the matrix and reads the specs off the entry grid itself.
    pub fn from_entries(entries: Vec<Vec<u64>>) -> Result<CosetMatrix> {
        if entries.is_empty() {
            return Err(Error::Invalid("empty matrix".into()));
        }
        let np = entries[0].len();
        if entries.iter().any(|r| r.len() != np) {
            return Err(Error::Invalid("ragged rows".into()));
        }
        let rowspec = BlockSpec::new(entries.iter().map(|r| r.iter().sum()).collect());
        let colspec = BlockSpec::new((0..np).map(|j| entries.iter().map(|r| r[j]).sum()).collect());
        CosetMatrix::new(entries, rowspec, colspec)
    }

    pub fn nrows(&self) -> usize {
        self.rowspec.len()
    }

    pub fn ncols(&self) -> usize {
        self.colspec.len()
    }

    pub fn d(&self) -> u64 {
        self.rowspec.total()
    }

    pub fn rowspec(&self) -> &BlockSpec {
        &self.rowspec
    }

    pub fn colspec(&self) -> &BlockSpec {
        &self.colspec
    }

    pub fn entries(&self) -> &[Vec<u64>] {
        &self.entries
    }

    /// `m_{i,j}` with 1-based indices.
    pub fn entry(&self, i: usize, j: usize) -> u64 {
        self.entries[i - 1][j - 1]
    }

    /// Northeast sector sum `m_{<=i,>=j}`; tolerates `i = 0` and
    /// `j = n'+1`, which give 0.
    pub fn ne_sum(&self, i: usize, j: usize) -> u64 {
        let mut total = 0;
        for i2 in 0..i.min(self.nrows()) {
            for j2 in (j.max(1) - 1)..self.ncols() {
                total += self.entries[i2][j2];
            }
        }
        total
    }

    /// Southwest sector sum `m_{>=i,<=j}`; tolerates `i = n+1` and `j = 0`.
    pub fn sw_sum(&self, i: usize, j: usize) -> u64 {
        let mut total = 0;
        for i2 in (i.max(1) - 1)..self.nrows() {
            for j2 in 0..j.min(self.ncols()) {
                total += self.entries[i2][j2];
            }
        }
        total
    }

    /// `psi(w)_{i,j} = |w(B_i) n C_j|`, the double-coset invariant.
    pub fn psi(w: &Perm, rowspec: &BlockSpec, colspec: &BlockSpec) -> Result<CosetMatrix> {
        let d = w.degree() as u64;
        if rowspec.total() != d || colspec.total() != d {
            return Err(Error::Invalid(format!(
                "block specs sum to {} and {}, expected the degree {d}",
                rowspec.total(),
                colspec.total()
            )));
        }
        let mut entries = vec![vec![0u64; colspec.len()]; rowspec.len()];
        for pos in 1..=d {
            let (i, _) = rowspec.block_of(pos);
            let v = w.apply(pos as usize) as u64;
            let (j, _) = colspec.block_of(v);
            entries[i - 1][j - 1] += 1;
        }
        CosetMatrix::new(entries, rowspec.clone(), colspec.clone())
    }

    /// The longest element `w_m` of the double coset `psi^{-1}(m)`: the
    /// `s`th element of `B_i` goes to the `t`th largest element of `C_j`,
    /// where `j` is maximal with `m_{i,>=j} >= s` and
    /// `t = m_{<=i-1,j} + s - m_{i,>=j+1}`.
    pub fn longest_rep(&self) -> Perm {
        let d = self.d();
        let mut oneline = vec![0u32; d as usize];
        for i in 1..=self.nrows() {
            let (start, end) = self.rowspec.block(i);
            let mut s = 0u64;
            for a in start..=end {
                s += 1;
                let mut j = self.ncols();
                let mut tail = 0u64; // m_{i,>=j+1}
                loop {
                    let here = tail + self.entry(i, j);
                    if here >= s {
                        break;
                    }
                    tail = here;
                    j -= 1;
                }
                let col_above: u64 = (1..i).map(|i2| self.entry(i2, j)).sum();
                let t = col_above + s - tail;
                let (_, cend) = self.colspec.block(j);
                oneline[(a - 1) as usize] = (cend - t + 1) as u32;
            }
        }
        Perm::from_oneline(oneline).expect("coset matrices define permutations")
    }

    /// `l(m) = sum m_{i,j} m_{<=i,>=j} - sum binom(m_{i,j}+1, 2)`, which
    /// equals the Coxeter length of `longest_rep`.
    pub fn length(&self) -> u64 {
        let mut total = 0u64;
        let mut correction = 0u64;
        for i in 1..=self.nrows() {
            for j in 1..=self.ncols() {
                let m = self.entry(i, j);
                total += m * self.ne_sum(i, j);
                correction += m * (m + 1) / 2;
            }
        }
        total - correction
    }

    fn same_specs(&self, other: &CosetMatrix) -> bool {
        self.rowspec == other.rowspec && self.colspec == other.colspec
    }

    /// Bruhat order on double cosets: all northeast sector sums dominate.
    /// The equivalent southwest criterion is evaluated as a redundant
    /// cross-check.
    pub fn leq(&self, other: &CosetMatrix) -> Result<bool> {
        if !self.same_specs(other) {
            return Err(Error::SpecMismatch);
        }
        let mut ne = true;
        'outer_ne: for i in 1..=self.nrows() {
            for j in 1..=self.ncols() {
                if self.ne_sum(i, j) > other.ne_sum(i, j) {
                    ne = false;
                    break 'outer_ne;
                }
            }
        }
        let mut sw = true;
        'outer_sw: for i in 1..=self.nrows() {
            for j in 1..=self.ncols() {
                if self.sw_sum(i, j) > other.sw_sum(i, j) {
                    sw = false;
                    break 'outer_sw;
                }
            }
        }
        if ne != sw {
            return Err(Error::CrossCheck(
                "northeast and southwest Bruhat criteria disagree".into(),
            ));
        }
        Ok(ne)
    }

    /// Whether `(i,j)` is cancellable for `[self, other]`: the entry is
    /// positive and the two outer sector sums are rigid.
    pub fn cancellable_entry(&self, other: &CosetMatrix, i: usize, j: usize) -> Result<bool> {
        if !self.leq(other)? {
            return Err(Error::NotComparable);
        }
        Ok(self.entry(i, j) >= 1
            && self.ne_sum(i - 1, j) == other.ne_sum(i - 1, j)
            && self.ne_sum(i, j + 1) == other.ne_sum(i, j + 1))
    }

    /// Subtracts 1 at `(i,j)`; the specs drop to `b_i - 1`, `c_j - 1`.
    pub fn cancel_entry(&self, i: usize, j: usize) -> Result<CosetMatrix> {
        if i == 0 || i > self.nrows() || j == 0 || j > self.ncols() {
            return Err(Error::IndexOutOfRange(format!("entry ({i},{j})")));
        }
        if self.entry(i, j) == 0 {
            return Err(Error::Invalid(format!("entry ({i},{j}) is zero")));
        }
        let mut entries = self.entries.clone();
        entries[i - 1][j - 1] -= 1;
        let mut rows = self.rowspec.sizes.clone();
        let mut cols = self.colspec.sizes.clone();
        rows[i - 1] -= 1;
        cols[j - 1] -= 1;
        CosetMatrix::new(entries, BlockSpec::new(rows), BlockSpec::new(cols))
    }

    /// All matrices with the same specs lying below `self` in the coset
    /// Bruhat order, generated row by row with sector-sum pruning.
    pub fn enumerate_leq(&self) -> Vec<CosetMatrix> {
        let n = self.nrows();
        let np = self.ncols();
        // ne_bound[i][j] = m_{<=i+1,>=j+1} of self (0-based offsets)
        let mut results = Vec::new();
        let mut rows: Vec<Vec<u64>> = Vec::with_capacity(n);
        let mut colused = vec![0u64; np];
        // suffix sums of the rows chosen so far: ne_prev[j] = m_{<=i,>=j+1}
        let mut ne_prev = vec![0u64; np + 1];
        self.enumerate_rows(0, &mut rows, &mut colused, &mut ne_prev, &mut results);
        results
    }

    fn enumerate_rows(
        &self,
        i: usize,
        rows: &mut Vec<Vec<u64>>,
        colused: &mut [u64],
        ne_prev: &mut Vec<u64>,
        out: &mut Vec<CosetMatrix>,
    ) {
        let n = self.nrows();
        let np = self.ncols();
        if i == n {
            let m = CosetMatrix::new(rows.clone(), self.rowspec.clone(), self.colspec.clone())
                .expect("construction is budgeted");
            out.push(m);
            return;
        }
        let b = self.rowspec.sizes[i];
        let mut row = vec![0u64; np];
        self.fill_row(i, 0, b, &mut row, rows, colused, ne_prev, out);
    }

    #[allow(clippy::too_many_arguments)]
    fn fill_row(
        &self,
        i: usize,
        j: usize,
        remaining: u64,
        row: &mut Vec<u64>,
        rows: &mut Vec<Vec<u64>>,
        colused: &mut [u64],
        ne_prev: &mut Vec<u64>,
        out: &mut Vec<CosetMatrix>,
    ) {
        let np = self.ncols();
        if j == np {
            if remaining != 0 {
                return;
            }
            // dominance check for the completed row i (1-based i+1)
            let mut suffix = 0u64;
            let mut ne_new = vec![0u64; np + 1];
            for jj in (0..np).rev() {
                suffix += row[jj];
                ne_new[jj] = ne_prev[jj] + suffix;
                if ne_new[jj] > self.ne_sum(i + 1, jj + 1) {
                    return;
                }
            }
            rows.push(row.clone());
            for (jj, &v) in row.iter().enumerate() {
                colused[jj] += v;
            }
            let saved = std::mem::replace(ne_prev, ne_new);
            self.enumerate_rows(i + 1, rows, colused, ne_prev, out);
            *ne_prev = saved;
            for (jj, &v) in row.iter().enumerate() {
                colused[jj] -= v;
            }
            rows.pop();
            return;
        }
        let cap = (self.colspec.sizes[j] - colused[j]).min(remaining);
        for v in 0..=cap {
            row[j] = v;
            self.fill_row(i, j + 1, remaining - v, row, rows, colused, ne_prev, out);
        }
        row[j] = 0;
    }

    pub fn transpose(&self) -> CosetMatrix {
        let n = self.nrows();
        let np = self.ncols();
        let entries = (0..np)
            .map(|j| (0..n).map(|i| self.entries[i][j]).collect())
            .collect();
        CosetMatrix {
            entries,
            rowspec: self.colspec.clone(),
            colspec: self.rowspec.clone(),
        }
    }

    /// JSON form with the row/column sums echoed for validation.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "entries": self.entries,
            "rowsums": self.rowspec.sizes,
            "colsums": self.colspec.sizes,
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<CosetMatrix> {
        let entries = parse_grid_json(v.get("entries").unwrap_or(v))?;
        let m = CosetMatrix::from_entries(entries)?;
        if let Some(rs) = v.get("rowsums") {
            let rs = parse_u64_list(rs)?;
            if rs != m.rowspec.sizes {
                return Err(Error::Invalid("rowsums echo does not match entries".into()));
            }
        }
        if let Some(cs) = v.get("colsums") {
            let cs = parse_u64_list(cs)?;
            if cs != m.colspec.sizes {
                return Err(Error::Invalid("colsums echo does not match entries".into()));
            }
        }
        Ok(m)
    }

    /// Accepts either JSON or a plain-text grid with `;`-separated rows.
    pub fn from_text(s: &str) -> Result<CosetMatrix> {
        let s = s.trim();
        if s.starts_with('{') || s.starts_with('[') {
            let v: serde_json::Value =
                serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
            return CosetMatrix::from_json(&v);
        }
        let entries: Vec<Vec<u64>> = s
            .split(';')
            .map(|line| {
                line.split_whitespace()
                    .map(|t| t.parse::<u64>().map_err(|_| Error::Parse(format!("bad entry {t:?}"))))
                    .collect::<Result<Vec<u64>>>()
            })
            .collect::<Result<_>>()?;
        CosetMatrix::from_entries(entries)
    }
}

fn parse_grid_json(v: &serde_json::Value) -> Result<Vec<Vec<u64>>> {
    let rows = v
        .as_array()
        .ok_or_else(|| Error::Parse("expected an array of rows".into()))?;
    rows.iter()
        .map(|r| parse_u64_list(r))
        .collect::<Result<Vec<_>>>()
}

fn parse_u64_list(v: &serde_json::Value) -> Result<Vec<u64>> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::Parse("expected an integer array".into()))?;
    arr.iter()
        .map(|x| x.as_u64().ok_or_else(|| Error::Parse(format!("bad integer {x}"))))
        .collect()
}

impl fmt::Display for CosetMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lines: Vec<String> = self
            .entries
            .iter()
            .map(|r| r.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "))
            .collect();
        write!(f, "{}", lines.join(" ; "))
    }
}

/// `P_{m,m'} = P_{w_m, w_{m'}}`.
pub fn kl_poly_mat(m: &CosetMatrix, m2: &CosetMatrix) -> Result<QPoly> {
    if !m.same_specs(m2) {
        return Err(Error::SpecMismatch);
    }
    symgroup::kl_poly(&m.longest_rep(), &m2.longest_rep())
}

/// The `(m,m2)` entry of the inverse of the KL matrix over the coset poset,
/// by back-substitution over the interval `[m,m2]`. For `d <= 6` the result
/// is cross-checked against the double-coset sum formula
/// `sum_x eps(x w_m) P_{x w_0, w_m w_0}` over `x` in the coset of `m2`.
pub fn kl_inverse_mat(m: &CosetMatrix, m2: &CosetMatrix) -> Result<QPoly> {
    if !m.same_specs(m2) {
        return Err(Error::SpecMismatch);
    }
    let result = kl_inverse_mat_backsub(m, m2)?;
    if m.d() <= 6 {
        let coset = kl_inverse_mat_coset_sum(m, m2)?;
        if coset != result {
            return Err(Error::CrossCheck(format!(
                "matrix inverse-KL routes disagree: {result} vs {coset}"
            )));
        }
    }
    Ok(result)
}

/// Back-substitution route for the inverse KL entry.
pub fn kl_inverse_mat_backsub(m: &CosetMatrix, m2: &CosetMatrix) -> Result<QPoly> {
    if !m.leq(m2)? {
        return Ok(QPoly::zero());
    }
    let mut interval: Vec<CosetMatrix> = m2
        .enumerate_leq()
        .into_iter()
        .filter(|x| m.leq(x).unwrap_or(false))
        .collect();
    interval.sort_by_key(|x| std::cmp::Reverse(x.length()));
    let mut inv: Vec<(CosetMatrix, QPoly)> = Vec::with_capacity(interval.len());
    for x in &interval {
        let mut q = if x == m2 { QPoly::one() } else { QPoly::zero() };
        for (z, qz) in &inv {
            if z == x {
                continue;
            }
            let p = kl_poly_mat(x, z)?;
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

/// The coset-sum route: `P^{-1}_{m,m2} = sum eps(x w_m) P_{x w_0, w_m w_0}`
/// over the double coset `S_{(c_j)} w_{m2} S_{(b_i)}`.
pub fn kl_inverse_mat_coset_sum(m: &CosetMatrix, m2: &CosetMatrix) -> Result<QPoly> {
    let d = m.d() as usize;
    let wm = m.longest_rep();
    let w0 = Perm::longest_element(d);
    let wm_w0 = wm.compose(&w0)?;
    let mut total = QPoly::zero();
    for x in double_coset(&m2.longest_rep(), m.rowspec(), m.colspec())? {
        let sign = x.sign() * wm.sign();
        let p = symgroup::kl_poly(&x.compose(&w0)?, &wm_w0)?;
        total = total.add(&p.scale(sign)?)?;
    }
    Ok(total)
}

/// All elements of the parabolic subgroup `S_{(b_i)}` of `S_d`.
pub fn parabolic_elements(spec: &BlockSpec) -> Vec<Perm> {
    let d = spec.total() as usize;
    let mut out = vec![Perm::identity(d)];
    for i in 1..=spec.len() {
        let (start, end) = spec.block(i);
        if end <= start {
            continue;
        }
        let block: Vec<u64> = (start..=end).collect();
        let block_perms = permutations_of(&block);
        let mut next = Vec::with_capacity(out.len() * block_perms.len());
        for base in &out {
            for assignment in &block_perms {
                let mut oneline: Vec<u32> = base.oneline().to_vec();
                for (k, &target) in assignment.iter().enumerate() {
                    oneline[(block[k] - 1) as usize] = target as u32;
                }
                next.push(Perm::from_oneline(oneline).expect("blockwise permutation"));
            }
        }
        out = next;
    }
    out
}

/// The full double coset `S_{(c_j)} w S_{(b_i)}`.
pub fn double_coset(w: &Perm, rowspec: &BlockSpec, colspec: &BlockSpec) -> Result<Vec<Perm>> {
    let mut set = std::collections::HashSet::new();
    for u in parabolic_elements(colspec) {
        let uw = u.compose(w)?;
        for v in parabolic_elements(rowspec) {
            set.insert(uw.compose(&v)?);
        }
    }
    Ok(set.into_iter().collect())
}

fn permutations_of(vals: &[u64]) -> Vec<Vec<u64>> {
    if vals.len() == 1 {
        return vec![vals.to_vec()];
    }
    let mut out = Vec::new();
    for (k, &v) in vals.iter().enumerate() {
        let mut rest = vals.to_vec();
        rest.remove(k);
        for mut tail in permutations_of(&rest) {
            tail.insert(0, v);
            out.push(tail);
        }
    }
    out
}
