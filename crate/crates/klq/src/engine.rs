//! Generic Kazhdan-Lusztig recursion over a Coxeter-like element type.
//!
//! Both `symgroup` and `affsymgroup` drive the same recursion
//!
//! ```text
//! P_{y,w} = P_{y',ws} + q P_{y's,ws} - sum_{y<=z<ws, zs<z} mu(z,ws) q^{(l(w)-l(z))/2} P_{y,z}
//! ```
//!
//! where `s` is a right descent of `w` and `y'` the Bruhat-smaller of `y`,
//! `ys`. The engine computes whole rows `y -> P_{y,w}` at a time: the lower
//! set of `w` is `L(ws) ∪ L(ws)s`, and the correction sum is accumulated by
//! walking the rows of the `z` with nonzero `mu`, which enumerate exactly the
//! `y <= z`. Rows are memoized behind a mutex so finished tables can be read
//! concurrently while writers are serialized; rows store each distinct
//! polynomial once, behind a small palette.

use crate::error::Result;
use crate::fxhash::{FxBuildHasher, FxHashMap};
use crate::qpoly::QPoly;
use std::collections::HashMap;
use std::hash::Hash;
use std::sync::{Arc, Mutex};

/// The element operations the KL recursion needs.
pub(crate) trait CoxeterElem: Clone + Eq + Hash {
    /// Coxeter length.
    fn coxlen(&self) -> u64;
    /// Number of generator indices (`d-1` for `S_d`, `d` for the affine
    /// group of degree `d >= 2`, `0` when there are no generators).
    fn gen_count(&self) -> usize;
    /// Whether right multiplication by generator `s` decreases length.
    fn is_right_descent(&self, s: usize) -> bool;
    /// Right multiplication by generator `s`.
    fn mult_gen(&self, s: usize) -> Self;
}

/// Which right descent the recursion strips at each step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DescentPolicy {
    /// The smallest descent index. This is the default.
    #[default]
    Smallest,
    /// The largest descent index; used to confirm the result does not
    /// depend on the choice.
    Largest,
}

/// A finished row: all `P_{y,w}` for `y <= w`, keyed by `y`, with values
/// interned in a palette of the distinct polynomials of the row.
pub(crate) struct KlRow<E> {
    map: FxHashMap<E, u32>,
    polys: Vec<QPoly>,
}

impl<E: CoxeterElem> KlRow<E> {
    pub fn get(&self, y: &E) -> Option<&QPoly> {
        self.map.get(y).map(|&i| &self.polys[i as usize])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&E, &QPoly)> {
        self.map.iter().map(|(e, &i)| (e, &self.polys[i as usize]))
    }

    pub fn keys(&self) -> impl Iterator<Item = &E> {
        self.map.keys()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }
}

struct RowBuilder<E> {
    map: FxHashMap<E, u32>,
    polys: Vec<QPoly>,
    ids: FxHashMap<QPoly, u32>,
}

impl<E: CoxeterElem> RowBuilder<E> {
    fn with_capacity(n: usize) -> Self {
        RowBuilder {
            map: HashMap::with_capacity_and_hasher(n, FxBuildHasher::default()),
            polys: Vec::new(),
            ids: FxHashMap::default(),
        }
    }

    fn insert(&mut self, y: E, p: QPoly) {
        let idx = *self.ids.entry(p).or_insert_with_key(|p| {
            self.polys.push(p.clone());
            (self.polys.len() - 1) as u32
        });
        self.map.insert(y, idx);
    }

    fn finish(self) -> KlRow<E> {
        KlRow { map: self.map, polys: self.polys }
    }
}

pub(crate) struct KlEngine<E: CoxeterElem> {
    policy: DescentPolicy,
    cache_limit: Option<usize>,
    rows: Mutex<FxHashMap<E, Arc<KlRow<E>>>>,
}

impl<E: CoxeterElem> KlEngine<E> {
    pub fn new(policy: DescentPolicy, cache_limit: Option<usize>) -> Self {
        KlEngine { policy, cache_limit, rows: Mutex::new(FxHashMap::default()) }
    }

    pub fn cached_rows(&self) -> usize {
        self.rows.lock().unwrap().len()
    }

    fn pick_descent(&self, w: &E) -> Option<usize> {
        let n = w.gen_count();
        match self.policy {
            DescentPolicy::Smallest => (0..n).find(|&s| w.is_right_descent(s)),
            DescentPolicy::Largest => (0..n).rev().find(|&s| w.is_right_descent(s)),
        }
    }

    /// `P_{y,w}`, assuming the caller has already handled incomparable pairs.
    pub fn poly(&self, y: &E, w: &E) -> Result<QPoly> {
        if y == w {
            return Ok(QPoly::one());
        }
        let row = self.row(w)?;
        Ok(row.get(y).cloned().unwrap_or_else(QPoly::zero))
    }

    pub fn row(&self, w: &E) -> Result<Arc<KlRow<E>>> {
        if let Some(r) = self.rows.lock().unwrap().get(w) {
            return Ok(r.clone());
        }
        let lw = w.coxlen();
        let row = if lw == 0 {
            let mut b = RowBuilder::with_capacity(1);
            b.insert(w.clone(), QPoly::one());
            b.finish()
        } else {
            let s = self.pick_descent(w).expect("positive length implies a descent");
            let v = w.mult_gen(s);
            let lv = lw - 1;
            let rv = self.row(&v)?;

            // Correction terms: for each z < v with zs < z and mu(z,v) != 0,
            // the row of z lists exactly the y <= z that receive a term.
            let mut acc: FxHashMap<E, QPoly> = FxHashMap::default();
            for (z, pzv) in rv.iter() {
                if z == &v || !z.is_right_descent(s) {
                    continue;
                }
                let lz = z.coxlen();
                let mu = pzv.mu_coeff(lv - lz)?;
                if mu == 0 {
                    continue;
                }
                let shift_amt = ((lw - lz) / 2) as usize;
                let rz = self.row(z)?;
                for (y, pyz) in rz.iter() {
                    let term = pyz.scale(mu)?.shift(shift_amt);
                    let entry = acc.entry(y.clone()).or_insert_with(QPoly::zero);
                    *entry = entry.add(&term)?;
                }
            }

            let mut builder = RowBuilder::with_capacity(rv.len() * 2);
            for base in rv.keys() {
                for y in [base.clone(), base.mult_gen(s)] {
                    if builder.map.contains_key(&y) {
                        continue;
                    }
                    let ys = y.mult_gen(s);
                    let (ymin, ymax) =
                        if y.is_right_descent(s) { (ys, y.clone()) } else { (y.clone(), ys) };
                    let mut p = rv
                        .get(&ymin)
                        .expect("min(y, ys) lies below ws for every y <= w")
                        .clone();
                    if let Some(p2) = rv.get(&ymax) {
                        p = p.add(&p2.shift(1))?;
                    }
                    if let Some(a) = acc.get(&y) {
                        p = p.sub(a)?;
                    }
                    debug_assert!(p.coeff(0) == 1, "KL polynomials have constant term 1");
                    debug_assert!(p.coeffs().iter().all(|&c| c >= 0));
                    builder.insert(y, p);
                }
            }
            builder.finish()
        };
        let row = Arc::new(row);
        let mut cache = self.rows.lock().unwrap();
        if self.cache_limit.map_or(true, |lim| cache.len() < lim) {
            cache.insert(w.clone(), row.clone());
        }
        Ok(row)
    }
}
