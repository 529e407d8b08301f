//! Brute-force ground truth, independent of the production code paths:
//! Bruhat order as the transitive closure of reflection covers, KL tables
//! built by whole-group dynamic programming in length order (with the
//! opposite descent policy), and seeded generators of random cancellable
//! data for the property suites.

use crate::affsymgroup::AffPerm;
use crate::cosetmat::{BlockSpec, CosetMatrix};
use crate::engine::CoxeterElem;
use crate::error::{Error, Result};
use crate::qpoly::QPoly;
use crate::symgroup::{self, Perm};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;

/// A finite chunk of a Coxeter group with its full Bruhat order, computed
/// as the transitive closure of `{(x, xt) : t a reflection, l(xt)=l(x)+1}`.
pub struct Closure<E> {
    elems: Vec<E>,
    index: HashMap<E, usize>,
    leq: Vec<Vec<bool>>,
}

impl<E> Closure<E> {
    pub fn elems(&self) -> &[E] {
        &self.elems
    }

}

impl<E: Clone + Eq + std::hash::Hash> Closure<E> {
    pub fn index_of(&self, x: &E) -> Option<usize> {
        self.index.get(x).copied()
    }

    /// `x <= y` in the closure order; `None` when either lies outside.
    pub fn leq(&self, x: &E, y: &E) -> Option<bool> {
        Some(self.leq[self.index_of(x)?][self.index_of(y)?])
    }

    pub fn leq_idx(&self, x: usize, y: usize) -> bool {
        self.leq[x][y]
    }

    fn build(mut elems: Vec<E>, covers: Vec<Vec<usize>>) -> Closure<E> {
        // elems arrive sorted by length; covers[y] lists indices of the
        // elements covered by y
        let count = elems.len();
        let mut leq = vec![vec![false; count]; count];
        for y in 0..count {
            leq[y][y] = true;
            // the lower set of y is the union of the lower sets of its covers
            let mut below = vec![false; count];
            below[y] = true;
            for &x in &covers[y] {
                for z in 0..count {
                    if leq[z][x] {
                        below[z] = true;
                    }
                }
            }
            for z in 0..count {
                if below[z] {
                    leq[z][y] = true;
                }
            }
        }
        let index = elems.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        elems.shrink_to_fit();
        Closure { elems, index, leq }
    }
}

/// The reflection-cover closure of all of `S_d`.
pub fn bruhat_closure_fin(d: usize) -> Result<Closure<Perm>> {
    let mut elems = symgroup::all_elements(d);
    if elems.len() > 100_000 {
        return Err(Error::Invalid(format!("S_{d} is too large for the oracle")));
    }
    elems.sort_by_key(|w| (w.length(), w.clone()));
    let lengths: Vec<u64> = elems.iter().map(|w| w.length()).collect();
    let index: HashMap<Perm, usize> =
        elems.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
    let mut covers = vec![Vec::new(); elems.len()];
    for (yi, y) in elems.iter().enumerate() {
        for a in 1..=d {
            for b in a + 1..=d {
                // y * t_{(a,b)} swaps positions a and b
                let mut oneline = y.oneline().to_vec();
                oneline.swap(a - 1, b - 1);
                let x = Perm::from_oneline(oneline).expect("transposition of a permutation");
                if x.length() + 1 == lengths[yi] {
                    covers[yi].push(index[&x]);
                }
            }
        }
    }
    Ok(Closure::build(elems, covers))
}

/// The ball `{w in the affine group of degree d : a(w)=0, l(w) <= cap}`
/// with its reflection-cover closure.
pub fn bruhat_closure_aff(d: usize, cap: u64) -> Result<Closure<AffPerm>> {
    let mut elems = affine_ball(d, cap);
    if elems.len() > 100_000 {
        return Err(Error::Invalid("the affine ball is too large for the oracle".into()));
    }
    elems.sort_by_key(|w| (w.length(), w.clone()));
    let lengths: Vec<u64> = elems.iter().map(|w| w.length()).collect();
    let index: HashMap<AffPerm, usize> =
        elems.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
    let mut covers = vec![Vec::new(); elems.len()];
    for (yi, y) in elems.iter().enumerate() {
        for x in transposition_neighbors(y) {
            if x.length() + 1 == lengths[yi] {
                if let Some(&xi) = index.get(&x) {
                    covers[yi].push(xi);
                } else {
                    return Err(Error::Invalid(
                        "a cover left the ball; the ball is not a lower set".into(),
                    ));
                }
            }
        }
    }
    Ok(Closure::build(elems, covers))
}

/// All elements of the non-extended affine group with length at most `cap`.
pub fn affine_ball(d: usize, cap: u64) -> Vec<AffPerm> {
    let e = AffPerm::identity(d);
    let mut seen = std::collections::HashSet::new();
    seen.insert(e.clone());
    let mut frontier = vec![e];
    let gens = if d == 1 { 0 } else { d };
    while let Some(w) = frontier.pop() {
        for r in 0..gens {
            let ws = w.mult_s(r).expect("valid generator");
            if ws.length() > w.length() && ws.length() <= cap && !seen.contains(&ws) {
                seen.insert(ws.clone());
                frontier.push(ws);
            }
        }
    }
    seen.into_iter().collect()
}

/// All `y t_{(a,b)}` for reflections with both window spans in range;
/// includes every Bruhat cover of `y` in either direction.
fn transposition_neighbors(y: &AffPerm) -> Vec<AffPerm> {
    let d = y.degree() as i64;
    if d == 1 {
        return Vec::new();
    }
    let maxw = y.window().iter().max().copied().unwrap();
    let minw = y.window().iter().min().copied().unwrap();
    let span = (maxw - minw) + 2 * d;
    let mut out = Vec::new();
    for a in 1..=d {
        for b in a + 1..=a + span {
            if (b - a) % d == 0 {
                continue;
            }
            // x = y o t_{(a,b)}: positions congruent to a take y at the
            // matching shift of b, and conversely
            let window: Vec<i64> = (1..=d)
                .map(|i| {
                    if (i - a).rem_euclid(d) == 0 {
                        y.apply(b + (i - a))
                    } else if (i - b).rem_euclid(d) == 0 {
                        y.apply(a + (i - b))
                    } else {
                        y.apply(i)
                    }
                })
                .collect();
            out.push(AffPerm::from_window(window).expect("reflection image"));
        }
    }
    out
}

/// A complete KL table over a closure, built bottom-up in length order with
/// the largest-descent recursion; an independent route to the same values
/// as the memoized engine.
pub struct KlTable<E> {
    closure: Closure<E>,
    table: Vec<Vec<QPoly>>, // table[w][y] = P_{y,w}, indexed by closure order
}

impl<E> KlTable<E> {
    pub fn closure(&self) -> &Closure<E> {
        &self.closure
    }

    pub fn elems(&self) -> &[E] {
        self.closure.elems()
    }
}

impl<E: Clone + Eq + std::hash::Hash> KlTable<E> {
    /// `P_{y,w}`; `None` when either element lies outside the table.
    pub fn get(&self, y: &E, w: &E) -> Option<&QPoly> {
        let yi = self.closure.index_of(y)?;
        let wi = self.closure.index_of(w)?;
        Some(&self.table[wi][yi])
    }

    fn build(closure: Closure<E>) -> Result<KlTable<E>>
    where
        E: CoxeterElem,
    {
        let count = closure.elems().len();
        let lengths: Vec<u64> = closure.elems().iter().map(|w| w.coxlen()).collect();
        let index: HashMap<E, usize> =
            closure.elems().iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        let mut table: Vec<Vec<QPoly>> = vec![Vec::new(); count];
        // elements are sorted by length, so each row only needs earlier rows
        for wi in 0..count {
            let w = &closure.elems()[wi];
            let mut row = vec![QPoly::zero(); count];
            if lengths[wi] == 0 {
                row[wi] = QPoly::one();
                table[wi] = row;
                continue;
            }
            let s = (0..w.gen_count())
                .rev()
                .find(|&s| w.is_right_descent(s))
                .expect("positive length implies a descent");
            let v = w.mult_gen(s);
            let vi = index[&v];
            for yi in 0..count {
                if !closure.leq_idx(yi, wi) {
                    continue;
                }
                let y = &closure.elems()[yi];
                let ys = y.mult_gen(s);
                let ysi = index
                    .get(&ys)
                    .copied()
                    .ok_or_else(|| Error::Invalid("ys left the table ball".into()))?;
                let (mini, maxi) = if lengths[ysi] < lengths[yi] { (ysi, yi) } else { (yi, ysi) };
                let mut p = table[vi][mini].clone();
                if closure.leq_idx(maxi, vi) {
                    p = p.add(&table[vi][maxi].shift(1))?;
                }
                for zi in 0..count {
                    if zi == vi || !closure.leq_idx(yi, zi) || !closure.leq_idx(zi, vi) {
                        continue;
                    }
                    let z = &closure.elems()[zi];
                    if !z.is_right_descent(s) {
                        continue;
                    }
                    let mu = table[vi][zi].mu_coeff(lengths[vi] - lengths[zi])?;
                    if mu == 0 {
                        continue;
                    }
                    let shift_amt = ((lengths[wi] - lengths[zi]) / 2) as usize;
                    let term = table[zi][yi].scale(mu)?.shift(shift_amt);
                    p = p.sub(&term)?;
                }
                // sanity conditions a KL table must satisfy
                if p.coeff(0) != 1 || p.coeffs().iter().any(|&c| c < 0) {
                    return Err(Error::CrossCheck(format!(
                        "table entry is not a KL polynomial: {p}"
                    )));
                }
                if yi != wi {
                    let bound = (lengths[wi] - lengths[yi] - 1) / 2;
                    if p.degree().unwrap() as u64 > bound {
                        return Err(Error::CrossCheck("degree bound violated".into()));
                    }
                }
                row[yi] = p;
            }
            table[wi] = row;
        }
        Ok(KlTable { closure, table })
    }
}

impl KlTable<Perm> {
    /// The full KL table of `S_d`.
    pub fn finite(d: usize) -> Result<KlTable<Perm>> {
        KlTable::build(bruhat_closure_fin(d)?)
    }
}

impl KlTable<AffPerm> {
    /// The KL table of the affine length ball `l <= cap`. Only entries
    /// `P_{y,w}` with `l(w) + 1 <= cap` are complete with certainty, since
    /// the recursion consults `mu` values inside the ball only; the ball is
    /// downward closed, which is all the construction needs.
    pub fn affine_ball(d: usize, cap: u64) -> Result<KlTable<AffPerm>> {
        KlTable::build(bruhat_closure_aff(d, cap)?)
    }
}

/// A seeded generator of cancellable triples `(y, w, i)` with `y < w`,
/// by rejection sampling over random subword pairs.
pub fn random_cancellable_fin(
    d: usize,
    seed: u64,
    max_gap: u64,
) -> Result<(Perm, Perm, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..50_000 {
        let mut oneline: Vec<u32> = (1..=d as u32).collect();
        oneline.shuffle(&mut rng);
        let w = Perm::from_oneline(oneline).unwrap();
        let word = w.reduced_word();
        let sub: Vec<usize> =
            word.iter().copied().filter(|_| rng.random_bool(0.6)).collect();
        let y = Perm::from_word(d, &sub)?;
        if y == w || w.length() - y.length() > max_gap || !y.bruhat_leq(&w)? {
            continue;
        }
        let candidates: Vec<usize> = (1..=d)
            .filter(|&i| Perm::cancellable(&y, &w, i).unwrap_or(false))
            .collect();
        if candidates.is_empty() {
            continue;
        }
        let i = candidates[rng.random_range(0..candidates.len())];
        return Ok((y, w, i));
    }
    Err(Error::SamplingExhausted)
}

/// Affine version; `w` is sampled as a random ascent walk of length at
/// most `len_cap` times a small power of the translation.
pub fn random_cancellable_aff(
    d: usize,
    len_cap: u64,
    seed: u64,
    max_gap: u64,
) -> Result<(AffPerm, AffPerm, i64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..50_000 {
        let target = rng.random_range(2..=len_cap);
        let tau = rng.random_range(-1..=1);
        let mut w = AffPerm::tau_power(d, tau);
        while w.length() < target {
            let r = rng.random_range(0..d);
            let ws = w.mult_s(r)?;
            if ws.length() > w.length() {
                w = ws;
            }
        }
        let word = w.reduced_word();
        let sub: Vec<usize> =
            word.iter().copied().filter(|_| rng.random_bool(0.6)).collect();
        let y = AffPerm::from_word(d, tau, &sub)?;
        if y == w || w.length() - y.length() > max_gap || !y.bruhat_leq(&w)? {
            continue;
        }
        let candidates: Vec<i64> = (1..=d as i64)
            .filter(|&i| AffPerm::cancellable(&y, &w, i).unwrap_or(false))
            .collect();
        if candidates.is_empty() {
            continue;
        }
        let i = candidates[rng.random_range(0..candidates.len())];
        return Ok((y, w, i));
    }
    Err(Error::SamplingExhausted)
}

/// A seeded generator of matrix cancellable data: specs, a pair
/// `m <= m2`, and a cancellable entry `(i,j)`.
pub fn random_cancellable_mat_fin(
    d: usize,
    seed: u64,
) -> Result<(CosetMatrix, CosetMatrix, usize, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..20_000 {
        let b = random_composition(&mut rng, d);
        let c = random_composition(&mut rng, d);
        let mut oneline: Vec<u32> = (1..=d as u32).collect();
        oneline.shuffle(&mut rng);
        let w = Perm::from_oneline(oneline).unwrap();
        let m2 = CosetMatrix::psi(&w, &BlockSpec::new(b), &BlockSpec::new(c))?;
        let lower = m2.enumerate_leq();
        let m = lower[rng.random_range(0..lower.len())].clone();
        if m == m2 {
            continue;
        }
        let mut cands = Vec::new();
        for i in 1..=m.nrows() {
            for j in 1..=m.ncols() {
                if m.cancellable_entry(&m2, i, j).unwrap_or(false) {
                    cands.push((i, j));
                }
            }
        }
        if cands.is_empty() {
            continue;
        }
        let (i, j) = cands[rng.random_range(0..cands.len())];
        return Ok((m, m2, i, j));
    }
    Err(Error::SamplingExhausted)
}

/// Affine matrix analogue with periodic specs.
pub fn random_cancellable_mat_aff(
    d: usize,
    len_cap: u64,
    seed: u64,
) -> Result<(crate::affcosetmat::PeriodicMatrix, crate::affcosetmat::PeriodicMatrix, i64, i64)> {
    use crate::affcosetmat::{AffBlockSpec, PeriodicMatrix};
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..20_000 {
        let n = rng.random_range(1..=3.min(d));
        let np = rng.random_range(1..=3.min(d));
        let b = random_composition(&mut rng, d)[..].to_vec();
        let b: Vec<u64> = regroup(&b, n);
        let c: Vec<u64> = regroup(&random_composition(&mut rng, d), np);
        let target = rng.random_range(0..=len_cap);
        let mut w = AffPerm::identity(d);
        while w.length() < target {
            let r = rng.random_range(0..d);
            let ws = w.mult_s(r)?;
            if ws.length() > w.length() {
                w = ws;
            }
        }
        let bs = AffBlockSpec::new(b);
        let cs = AffBlockSpec::new(c);
        let m2 = PeriodicMatrix::psi_aff(&w, &bs, &cs)?;
        let lower = m2.enumerate_leq_aff();
        let m = lower[rng.random_range(0..lower.len())].clone();
        if m == m2 {
            continue;
        }
        let mut cands = Vec::new();
        for i in 1..=m.n() as i64 {
            let support: Vec<i64> = m.rows()[(i - 1) as usize].keys().copied().collect();
            for j in support {
                if m.cancellable_entry_aff(&m2, i, j).unwrap_or(false) {
                    cands.push((i, j));
                }
            }
        }
        if cands.is_empty() {
            continue;
        }
        let (i, j) = cands[rng.random_range(0..cands.len())];
        return Ok((m, m2, i, j));
    }
    Err(Error::SamplingExhausted)
}

fn random_composition(rng: &mut ChaCha8Rng, d: usize) -> Vec<u64> {
    let parts = rng.random_range(1..=d);
    let mut cuts: Vec<usize> = (1..d).collect();
    cuts.shuffle(rng);
    let mut cuts: Vec<usize> = cuts.into_iter().take(parts - 1).collect();
    cuts.sort_unstable();
    let mut out = Vec::with_capacity(parts);
    let mut prev = 0;
    for c in cuts {
        out.push((c - prev) as u64);
        prev = c;
    }
    out.push((d - prev) as u64);
    out
}

fn regroup(parts: &[u64], n: usize) -> Vec<u64> {
    let mut out = vec![0u64; n];
    for (k, &p) in parts.iter().enumerate() {
        out[k % n] += p;
    }
    out
}

/// One named check of the self-test suite.
pub struct SuiteResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Runs the oracle-vs-engine agreement suite and returns one result per
/// check. `quick` shrinks the sizes for interactive use.
pub fn run_selftest(seed: u64, quick: bool) -> Vec<SuiteResult> {
    let mut out = Vec::new();
    let mut push = |name: &str, res: Result<String>| match res {
        Ok(detail) => out.push(SuiteResult { name: name.into(), passed: true, detail }),
        Err(e) => out.push(SuiteResult { name: name.into(), passed: false, detail: e.to_string() }),
    };

    let dmax = if quick { 4 } else { 5 };
    push("bruhat agreement S_d", check_bruhat_fin(dmax));
    let (ad, acap) = if quick { (3, 6) } else { (3, 8) };
    push("bruhat agreement affine ball", check_bruhat_aff(ad, acap));
    push("KL table vs engine S_3", check_kl_fin(3).map(|n| format!("{n} comparable pairs")));
    push("KL table vs engine S_4", check_kl_fin(4).map(|n| format!("{n} comparable pairs")));
    push("KL affine degree 2 ball", check_kl_aff_dihedral(10));
    let triples = if quick { 10 } else { 25 };
    push("cancellation triples S_6", check_cancellation(6, triples, seed));
    out
}

fn check_bruhat_fin(d: usize) -> Result<String> {
    let closure = bruhat_closure_fin(d)?;
    let elems = closure.elems();
    let mut pairs = 0u64;
    for x in elems {
        for y in elems {
            if closure.leq(x, y).unwrap() != x.bruhat_leq(y)? {
                return Err(Error::CrossCheck(format!("S_{d} order differs at {x}, {y}")));
            }
            pairs += 1;
        }
    }
    Ok(format!("{pairs} pairs in S_{d}"))
}

fn check_bruhat_aff(d: usize, cap: u64) -> Result<String> {
    let closure = bruhat_closure_aff(d, cap)?;
    let elems = closure.elems();
    let mut pairs = 0u64;
    for x in elems {
        for y in elems {
            if closure.leq(x, y).unwrap() != x.bruhat_leq(y)? {
                return Err(Error::CrossCheck(format!(
                    "affine order differs at {x}, {y} (degree {d})"
                )));
            }
            pairs += 1;
        }
    }
    Ok(format!("{pairs} pairs in the degree-{d} ball of radius {cap}"))
}

fn check_kl_fin(d: usize) -> Result<u64> {
    let table = KlTable::finite(d)?;
    let ctx = symgroup::KlContext::new();
    let mut pairs = 0u64;
    for y in table.elems() {
        for w in table.elems() {
            let expect = table.get(y, w).unwrap();
            let got = ctx.kl_poly(y, w)?;
            if &got != expect {
                return Err(Error::CrossCheck(format!(
                    "KL differs at ({y}, {w}): engine {got}, table {expect}"
                )));
            }
            if y.bruhat_leq(w)? {
                pairs += 1;
            }
            if d == 3 && !expect.is_zero() && !expect.is_one() {
                return Err(Error::CrossCheck("an S_3 KL value is not 1".into()));
            }
        }
    }
    Ok(pairs)
}

fn check_kl_aff_dihedral(cap: u64) -> Result<String> {
    let table = KlTable::affine_ball(2, cap)?;
    let ctx = crate::affsymgroup::AffKlContext::new();
    let mut nonzero = 0u64;
    for y in table.elems() {
        for w in table.elems() {
            let expect = table.get(y, w).unwrap();
            let got = ctx.kl_poly(y, w)?;
            if &got != expect {
                return Err(Error::CrossCheck(format!("affine KL differs at ({y}, {w})")));
            }
            if !expect.is_zero() {
                nonzero += 1;
                if !expect.is_one() {
                    return Err(Error::CrossCheck(
                        "an infinite-dihedral KL value is not 1".into(),
                    ));
                }
            }
        }
    }
    Ok(format!("{nonzero} nonzero entries, all equal to 1"))
}

fn check_cancellation(d: usize, count: u64, seed: u64) -> Result<String> {
    for t in 0..count {
        let (y, w, i) = random_cancellable_fin(d, seed.wrapping_add(t), 8)?;
        let yc = y.cancel(i)?;
        let wc = w.cancel(i)?;
        let p1 = symgroup::kl_poly(&y, &w)?;
        let p2 = symgroup::kl_poly(&yc, &wc)?;
        if p1 != p2 {
            return Err(Error::CrossCheck(format!(
                "cancellation changed a KL polynomial at ({y}, {w}, {i})"
            )));
        }
    }
    Ok(format!("{count} triples"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s3_closure_is_the_hexagon() {
        let closure = bruhat_closure_fin(3).unwrap();
        assert_eq!(closure.elems().len(), 6);
        let e = Perm::identity(3);
        let w0 = Perm::longest_element(3);
        for x in closure.elems() {
            assert!(closure.leq(&e, x).unwrap());
            assert!(closure.leq(x, &w0).unwrap());
        }
        // the two length-1 elements are incomparable
        let s1: Perm = "213".parse().unwrap();
        let s2: Perm = "132".parse().unwrap();
        assert!(!closure.leq(&s1, &s2).unwrap());
        assert!(!closure.leq(&s2, &s1).unwrap());
    }

    #[test]
    fn closure_agrees_with_criterion_s4() {
        let closure = bruhat_closure_fin(4).unwrap();
        for x in closure.elems() {
            for y in closure.elems() {
                assert_eq!(closure.leq(x, y).unwrap(), x.bruhat_leq(y).unwrap());
            }
        }
    }

    #[test]
    fn affine_ball_sizes() {
        // degree-2 affine group: one element per positive length
        let ball = affine_ball(2, 6);
        assert_eq!(ball.len(), 13); // 1 + 2*6
        let closure = bruhat_closure_aff(2, 6).unwrap();
        for x in closure.elems() {
            for y in closure.elems() {
                assert_eq!(closure.leq(x, y).unwrap(), x.bruhat_leq(y).unwrap());
            }
        }
    }

    #[test]
    fn affine_closure_degree3() {
        let closure = bruhat_closure_aff(3, 5).unwrap();
        for x in closure.elems() {
            for y in closure.elems() {
                assert_eq!(closure.leq(x, y).unwrap(), x.bruhat_leq(y).unwrap());
            }
        }
    }

    #[test]
    fn kl_tables_match_engine() {
        let table = KlTable::finite(4).unwrap();
        let ctx = symgroup::KlContext::new();
        for y in table.elems() {
            for w in table.elems() {
                assert_eq!(&ctx.kl_poly(y, w).unwrap(), table.get(y, w).unwrap());
            }
        }
    }

    #[test]
    fn s3_table_is_all_ones() {
        let table = KlTable::finite(3).unwrap();
        for y in table.elems() {
            for w in table.elems() {
                let p = table.get(y, w).unwrap();
                assert!(p.is_zero() || p.is_one());
            }
        }
    }

    #[test]
    fn dihedral_ball_all_ones() {
        let table = KlTable::affine_ball(2, 8).unwrap();
        let ctx = crate::affsymgroup::AffKlContext::new();
        for y in table.elems() {
            for w in table.elems() {
                let p = table.get(y, w).unwrap();
                assert!(p.is_zero() || p.is_one());
                assert_eq!(&ctx.kl_poly(y, w).unwrap(), p);
            }
        }
    }

    #[test]
    fn random_cancellable_postconditions() {
        for seed in 0..5 {
            let (y, w, i) = random_cancellable_fin(6, seed, 8).unwrap();
            assert!(Perm::cancellable(&y, &w, i).unwrap());
            assert!(y != w);
            // determinism
            let again = random_cancellable_fin(6, seed, 8).unwrap();
            assert_eq!(again, (y, w, i));
        }
        for seed in 0..3 {
            let (y, w, i) = random_cancellable_aff(3, 8, seed, 6).unwrap();
            assert!(AffPerm::cancellable(&y, &w, i).unwrap());
        }
    }

    #[test]
    fn selftest_quick_passes() {
        for r in run_selftest(7, true) {
            assert!(r.passed, "{}: {}", r.name, r.detail);
        }
    }
}
