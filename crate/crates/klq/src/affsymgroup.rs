//! The extended affine symmetric group of degree `d`: permutations `w` of
//! the integers with `w(i+d) = w(i)+d`, stored by their window
//! `(w(1),...,w(d))`. The translation `tau` sends `i` to `i+1`; the actual
//! affine Weyl group is the kernel of the degree map `a(w)`.

use crate::engine::{CoxeterElem, DescentPolicy, KlEngine};
use crate::error::{Error, Result};
use crate::qpoly::QPoly;
use std::fmt;
use std::sync::OnceLock;

fn floor_div(a: i64, b: i64) -> i64 {
    a.div_euclid(b)
}

/// An extended affine permutation, determined by its window.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffPerm {
    window: Vec<i64>,
}

impl AffPerm {
    /// Validates that the window hits every congruence class mod `d` once.
    pub fn from_window(window: Vec<i64>) -> Result<AffPerm> {
        let d = window.len();
        if d == 0 {
            return Err(Error::Invalid("a window needs degree at least 1".into()));
        }
        let mut seen = vec![false; d];
        for &v in &window {
            let r = v.rem_euclid(d as i64) as usize;
            if seen[r] {
                return Err(Error::Invalid(format!(
                    "window {window:?} repeats a residue class mod {d}"
                )));
            }
            seen[r] = true;
        }
        Ok(AffPerm { window })
    }

    pub fn identity(d: usize) -> AffPerm {
        AffPerm { window: (1..=d as i64).collect() }
    }

    /// `tau^k`: the translation `i -> i+k`.
    pub fn tau_power(d: usize, k: i64) -> AffPerm {
        AffPerm { window: (1..=d as i64).map(|i| i + k).collect() }
    }

    pub fn degree(&self) -> usize {
        self.window.len()
    }

    pub fn window(&self) -> &[i64] {
        &self.window
    }

    /// `w(i)` for any integer `i`, by periodic extension of the window.
    pub fn apply(&self, i: i64) -> i64 {
        let d = self.degree() as i64;
        let k = floor_div(i - 1, d);
        self.window[(i - 1 - k * d) as usize] + k * d
    }

    /// The `tau`-degree `a(w) = (sum w(i) - sum i)/d`.
    pub fn a_degree(&self) -> i64 {
        let d = self.degree() as i64;
        let s: i64 = self.window.iter().sum();
        (s - d * (d + 1) / 2) / d
    }

    pub fn is_identity(&self) -> bool {
        self.window.iter().enumerate().all(|(k, &v)| v == k as i64 + 1)
    }

    /// `(u o v)(i) = u(v(i))`.
    pub fn compose(&self, v: &AffPerm) -> Result<AffPerm> {
        if self.degree() != v.degree() {
            return Err(Error::DegreeMismatch(self.degree(), v.degree()));
        }
        Ok(AffPerm { window: (1..=self.degree() as i64).map(|i| self.apply(v.apply(i))).collect() })
    }

    pub fn inverse(&self) -> AffPerm {
        let d = self.degree() as i64;
        let mut window = vec![0i64; self.degree()];
        for p in 1..=d {
            let v = self.window[(p - 1) as usize];
            // w(p + kd) = v + kd = j  =>  w^{-1}(j) = p + kd
            let k = floor_div(v - 1, d);
            let r = v - k * d; // in [1,d]
            window[(r - 1) as usize] = p - k * d;
        }
        AffPerm { window }
    }

    /// `inv_i(w) = |{i' < i : w(i') > w(i)}|` (a finite count).
    pub fn inv_below(&self, i: i64) -> u64 {
        let d = self.degree() as i64;
        let wi = self.apply(i);
        let mut total = 0i64;
        for p in 1..=d {
            let wp = self.window[(p - 1) as usize];
            // positions i' = p + kd < i with values wp + kd > wi
            let k_hi = floor_div(i - 1 - p, d);
            let k_lo = floor_div(wi - wp, d) + 1;
            total += (k_hi - k_lo + 1).max(0);
        }
        total as u64
    }

    /// `Inv_i(w) = |{i' > i : w(i') < w(i)}|`.
    pub fn inv_above(&self, i: i64) -> u64 {
        let d = self.degree() as i64;
        let wi = self.apply(i);
        let mut total = 0i64;
        for p in 1..=d {
            let wp = self.window[(p - 1) as usize];
            // positions i' = p + kd > i with values wp + kd < wi
            let k_lo = floor_div(i - p, d) + 1;
            let k_hi = floor_div(wi - 1 - wp, d);
            total += (k_hi - k_lo + 1).max(0);
        }
        total as u64
    }

    /// Coxeter length of `tau^{-a(w)} w`, by the window inversion count.
    pub fn length(&self) -> u64 {
        (1..=self.degree() as i64).map(|i| self.inv_below(i)).sum()
    }

    pub fn sign(&self) -> i64 {
        if self.length() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Residues `r` in `{0,...,d-1}` with `w(r) > w(r+1)`.
    pub fn right_descents(&self) -> Result<Vec<usize>> {
        if self.degree() == 1 {
            return Err(Error::Invalid("degree 1 has no Coxeter generators".into()));
        }
        Ok((0..self.degree())
            .filter(|&r| self.apply(r as i64) > self.apply(r as i64 + 1))
            .collect())
    }

    /// Right multiplication by `s_r` for a residue `r` in `{0,...,d-1}`.
    pub fn mult_s(&self, r: usize) -> Result<AffPerm> {
        if self.degree() == 1 || r >= self.degree() {
            return Err(Error::IndexOutOfRange(format!(
                "generator s_{r} in affine degree {}",
                self.degree()
            )));
        }
        Ok(self.mult_gen(r))
    }

    /// Bruhat order on the extended group: comparable only within one
    /// `tau`-degree, then by the dominance criterion
    /// `|{i' <= i : y(i') >= j}| <= |{i' <= i : w(i') >= j}|` for all
    /// `i in [1,d]` and all `j`, with equality for `j << 0`.
    pub fn bruhat_leq(&self, w: &AffPerm) -> Result<bool> {
        let d = self.degree();
        if d != w.degree() {
            return Err(Error::DegreeMismatch(d, w.degree()));
        }
        if self.a_degree() != w.a_degree() {
            return Ok(false);
        }
        let lo = self
            .window
            .iter()
            .chain(w.window.iter())
            .min()
            .copied()
            .unwrap()
            - d as i64;
        let hi = self
            .window
            .iter()
            .chain(w.window.iter())
            .max()
            .copied()
            .unwrap()
            + d as i64;
        for i in 1..=d as i64 {
            // equality at the stabilized low end
            if self.prefix_count(i, lo) != w.prefix_count(i, lo) {
                return Ok(false);
            }
            for j in lo..=hi {
                if self.prefix_count(i, j) > w.prefix_count(i, j) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// `|{i' <= i : w(i') >= j}|`.
    fn prefix_count(&self, i: i64, j: i64) -> u64 {
        let d = self.degree() as i64;
        let mut total = 0i64;
        for p in 1..=d {
            let wp = self.window[(p - 1) as usize];
            // i' = p + kd <= i and wp + kd >= j
            let k_hi = floor_div(i - p, d);
            let k_lo = -floor_div(wp - j, d);
            total += (k_hi - k_lo + 1).max(0);
        }
        total as u64
    }

    /// Whether `i` is cancellable for `[y,w]`: `y(i) = w(i)` and
    /// `inv_i(y) = inv_i(w)`; the property only depends on `i` mod `d`.
    pub fn cancellable(y: &AffPerm, w: &AffPerm, i: i64) -> Result<bool> {
        if !y.bruhat_leq(w)? {
            return Err(Error::NotComparable);
        }
        Ok(y.apply(i) == w.apply(i) && y.inv_below(i) == w.inv_below(i))
    }

    /// Counts integers congruent to `c` mod `d` in the interval `(a, b]`.
    fn count_cong(d: i64, c: i64, a: i64, b: i64) -> i64 {
        if b <= a {
            0
        } else {
            floor_div(b - c, d) - floor_div(a - c, d)
        }
    }

    /// The canonical order-preserving relabeling that deletes the class of
    /// `c` mod `d`: anchored so that `sigma(j) = j - |{k = c mod d : 0 < k <= j}|`
    /// for `j > 0` and `sigma(j) = j + |{k = c mod d : j < k <= 0}|` for `j <= 0`.
    fn sigma(d: i64, c: i64, j: i64) -> i64 {
        if j > 0 {
            j - Self::count_cong(d, c, 0, j)
        } else {
            j + Self::count_cong(d, c, j, 0)
        }
    }

    /// Removes the congruence class of `i` from the domain and of `w(i)`
    /// from the codomain, giving an element of degree `d-1`.
    pub fn cancel(&self, i: i64) -> Result<AffPerm> {
        let d = self.degree() as i64;
        if d == 1 {
            return Err(Error::Invalid("cannot cancel in degree 1".into()));
        }
        let ci = i.rem_euclid(d);
        let cv = self.apply(i).rem_euclid(d);
        let mut window = Vec::with_capacity((d - 1) as usize);
        // walk the pruned domain upward from 0; its positions map to 1,2,...
        let mut pos = 0i64;
        for _ in 0..(d - 1) {
            pos += 1;
            while pos.rem_euclid(d) == ci {
                pos += 1;
            }
            window.push(Self::sigma(d, cv, self.apply(pos)));
        }
        AffPerm::from_window(window)
    }

    /// A reduced word for `tau^{-a(w)} w` as residues in `{0,...,d-1}`,
    /// by greedy descent stripping.
    pub fn reduced_word(&self) -> Vec<usize> {
        if self.degree() == 1 {
            return Vec::new();
        }
        let mut cur = self.clone();
        let mut word = Vec::new();
        while let Some(&r) = cur.right_descents().expect("degree >= 2").first() {
            cur = cur.mult_gen(r);
            word.push(r);
        }
        word.reverse();
        word
    }

    /// Product `tau^k s_{word[0]} s_{word[1]} ...`.
    pub fn from_word(d: usize, tau: i64, word: &[usize]) -> Result<AffPerm> {
        let mut acc = AffPerm::tau_power(d, tau);
        for &r in word {
            acc = acc.mult_s(r)?;
        }
        Ok(acc)
    }

    /// The length-preserving automorphism `w -> (i -> -w(-i))`; it swaps the
    /// roles of the parabolic subgroups attached to a weight pair.
    pub fn flip(&self) -> AffPerm {
        let window = (1..=self.degree() as i64).map(|i| -self.apply(-i)).collect();
        AffPerm { window }
    }

    /// Parses either a window `"(0,7,2)"` or a Coxeter word
    /// `"t^2 s2 s1 s0"` (the latter needs the degree).
    pub fn from_text(d: Option<usize>, s: &str) -> Result<AffPerm> {
        let s = s.trim();
        if s.starts_with('(') {
            let w: AffPerm = s.parse()?;
            if let Some(d) = d {
                if w.degree() != d {
                    return Err(Error::DegreeMismatch(w.degree(), d));
                }
            }
            return Ok(w);
        }
        let d = d.ok_or_else(|| Error::Parse("a Coxeter word needs an explicit degree".into()))?;
        let mut tau = 0i64;
        let mut word = Vec::new();
        for tok in s.split_whitespace() {
            if let Some(rest) = tok.strip_prefix("t^").or_else(|| tok.strip_prefix("tau^")) {
                tau += rest
                    .parse::<i64>()
                    .map_err(|_| Error::Parse(format!("bad tau token {tok:?}")))?;
            } else if tok == "t" || tok == "tau" {
                tau += 1;
            } else if let Some(rest) = tok.strip_prefix('s') {
                let r: usize = rest
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad generator token {tok:?}")))?;
                if r >= d {
                    return Err(Error::Parse(format!(
                        "generator s{r} out of range for degree {d}"
                    )));
                }
                word.push(r);
            } else {
                return Err(Error::Parse(format!("unexpected token {tok:?} in Coxeter word")));
            }
        }
        AffPerm::from_word(d, tau, &word)
    }
}

impl fmt::Display for AffPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.window.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl std::str::FromStr for AffPerm {
    type Err = Error;

    fn from_str(s: &str) -> Result<AffPerm> {
        let s = s.trim();
        let inner = s
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("expected a window like (0,7,2), got {s:?}")))?;
        let vals: Vec<i64> = inner
            .split(',')
            .map(|t| t.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bad entry {t:?}"))))
            .collect::<Result<_>>()?;
        AffPerm::from_window(vals)
    }
}

impl CoxeterElem for AffPerm {
    fn coxlen(&self) -> u64 {
        self.length()
    }

    fn gen_count(&self) -> usize {
        let d = self.degree();
        if d == 1 {
            0
        } else {
            d
        }
    }

    fn is_right_descent(&self, s: usize) -> bool {
        self.apply(s as i64) > self.apply(s as i64 + 1)
    }

    fn mult_gen(&self, s: usize) -> AffPerm {
        let d = self.degree();
        let mut window = self.window.clone();
        if s == 0 {
            window[0] = self.window[d - 1] - d as i64;
            window[d - 1] = self.window[0] + d as i64;
        } else {
            window.swap(s - 1, s);
        }
        AffPerm { window }
    }
}

/// Memoized KL computation context for the extended affine group.
pub struct AffKlContext {
    engine: KlEngine<AffPerm>,
}

impl Default for AffKlContext {
    fn default() -> Self {
        Self::new()
    }
}

impl AffKlContext {
    pub fn new() -> AffKlContext {
        AffKlContext { engine: KlEngine::new(DescentPolicy::Smallest, cache_limit_from_env()) }
    }

    pub fn with_policy(policy: DescentPolicy) -> AffKlContext {
        AffKlContext { engine: KlEngine::new(policy, cache_limit_from_env()) }
    }

    /// `P_{y,w}`: zero when the `tau`-degrees differ or `y` is not below
    /// `w`; otherwise the KL polynomial of `tau^{-a} y, tau^{-a} w` (the
    /// recursion runs directly inside the coset `tau^a S~_d`).
    pub fn kl_poly(&self, y: &AffPerm, w: &AffPerm) -> Result<QPoly> {
        if y.degree() != w.degree() {
            return Err(Error::DegreeMismatch(y.degree(), w.degree()));
        }
        if !y.bruhat_leq(w)? {
            return Ok(QPoly::zero());
        }
        self.engine.poly(y, w)
    }

    /// Inverse-KL entry over the (finite) interval `[y,w]` by unitriangular
    /// back-substitution; no longest element exists in the affine group, so
    /// this is the only route.
    pub fn kl_inverse(&self, y: &AffPerm, w: &AffPerm) -> Result<QPoly> {
        if y.degree() != w.degree() {
            return Err(Error::DegreeMismatch(y.degree(), w.degree()));
        }
        if !y.bruhat_leq(w)? {
            return Ok(QPoly::zero());
        }
        let mut interval = self.enumerate_lower_interval(y, w)?;
        interval.sort_by_key(|x| std::cmp::Reverse(x.length()));
        let mut inv: std::collections::HashMap<AffPerm, QPoly> = std::collections::HashMap::new();
        for x in &interval {
            let mut q = if x == w { QPoly::one() } else { QPoly::zero() };
            for (z, qz) in inv.iter() {
                if z == x {
                    continue;
                }
                let p = self.kl_poly(x, z)?;
                if !p.is_zero() {
                    q = q.sub(&p.mul(qz)?)?;
                }
            }
            inv.insert(x.clone(), q);
        }
        Ok(inv.remove(y).expect("y is in its own interval"))
    }

    /// All `x` with `y <= x <= w`.
    pub fn enumerate_lower_interval(&self, y: &AffPerm, w: &AffPerm) -> Result<Vec<AffPerm>> {
        if !y.bruhat_leq(w)? {
            return Err(Error::NotComparable);
        }
        let mut out = Vec::new();
        for x in lower_set(w) {
            if y.bruhat_leq(&x)? {
                out.push(x);
            }
        }
        Ok(out)
    }

    pub fn cached_rows(&self) -> usize {
        self.engine.cached_rows()
    }
}

/// All `x <= w` in the extended group (they share `w`'s `tau`-degree), by
/// deduplicated subword products of one reduced word.
pub fn lower_set(w: &AffPerm) -> Vec<AffPerm> {
    let word = w.reduced_word();
    let base = AffPerm::tau_power(w.degree(), w.a_degree());
    let mut set = std::collections::HashSet::new();
    set.insert(base);
    for &r in &word {
        let mut next: Vec<AffPerm> = Vec::with_capacity(set.len());
        for x in &set {
            next.push(x.mult_gen(r));
        }
        set.extend(next);
    }
    set.into_iter().collect()
}

fn cache_limit_from_env() -> Option<usize> {
    std::env::var("KLQ_CACHE_LIMIT").ok().and_then(|v| v.parse().ok())
}

static DEFAULT_CONTEXT: OnceLock<AffKlContext> = OnceLock::new();

pub fn default_context() -> &'static AffKlContext {
    DEFAULT_CONTEXT.get_or_init(AffKlContext::new)
}

pub fn kl_poly(y: &AffPerm, w: &AffPerm) -> Result<QPoly> {
    default_context().kl_poly(y, w)
}

pub fn kl_inverse(y: &AffPerm, w: &AffPerm) -> Result<QPoly> {
    default_context().kl_inverse(y, w)
}

pub fn enumerate_lower_interval(y: &AffPerm, w: &AffPerm) -> Result<Vec<AffPerm>> {
    default_context().enumerate_lower_interval(y, w)
}
