//! Kazhdan–Lusztig bases and the shared memo table.
//!
//! `C_x` is computed by left multiplication with `C_s` for the smallest left
//! descent `s` of `x`, followed by subtraction of bar-invariant multiples of
//! lower `C_z` until the result is `v⁻¹`-triangular. The same correction step
//! serves the parabolic module.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Signed;
use parking_lot::RwLock;

use crate::affweyl::{AffineElt, AffineWeyl};
use crate::error::{Error, Result};
use crate::hecke::{Combination, HeckeAlgebra, HeckeElt};
use crate::laurent::{Coeff, Laurent};

const MAGIC: &str = "HECKE-KL v1";
const CONVENTION: &str = "convention=signed";

/// Memo table `x ↦ C_x` (or `x ↦ C^P_x` for a parabolic cache).
///
/// Readers never see partial entries; racing writers of the same key are
/// harmless because the entries are canonical.
pub struct KLCache<R: Coeff = BigInt> {
    datum: String,
    parabolic: Vec<usize>,
    entries: RwLock<HashMap<AffineElt, Arc<Combination<R>>>>,
}

impl<R: Coeff> fmt::Debug for KLCache<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("KLCache")
            .field("datum", &self.datum)
            .field("parabolic", &self.parabolic)
            .field("entries", &self.len())
            .finish()
    }
}

impl<R: Coeff> KLCache<R> {
    /// An empty cache for ordinary (`parabolic = []`) or parabolic KL data.
    pub fn new(datum: &str, parabolic: &[usize]) -> Self {
        let mut p = parabolic.to_vec();
        p.sort_unstable();
        p.dedup();
        KLCache { datum: datum.to_string(), parabolic: p, entries: RwLock::new(HashMap::new()) }
    }

    pub fn for_group(g: &AffineWeyl) -> Self {
        Self::new(g.datum().label(), &[])
    }

    pub fn datum(&self) -> &str {
        &self.datum
    }

    pub fn parabolic(&self) -> &[usize] {
        &self.parabolic
    }

    pub fn len(&self) -> usize {
        self.entries.read().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, x: &AffineElt) -> Option<Arc<Combination<R>>> {
        self.entries.read().get(x).cloned()
    }

    /// Inserts unless present; returns the stored entry.
    pub fn insert(&self, x: AffineElt, value: Combination<R>) -> Arc<Combination<R>> {
        let mut w = self.entries.write();
        w.entry(x).or_insert_with(|| Arc::new(value)).clone()
    }

    pub fn keys(&self) -> Vec<AffineElt> {
        self.entries.read().keys().cloned().collect()
    }

    pub fn header(&self) -> String {
        let p = if self.parabolic.is_empty() {
            "-".to_string()
        } else {
            self.parabolic.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
        };
        format!("{MAGIC} {} {CONVENTION} parabolic={p}", self.datum)
    }

    /// Datum label and parabolic subset named by a header line.
    pub fn parse_header(line: &str) -> Result<(String, Vec<usize>)> {
        let bad = || Error::CacheCorrupt(format!("unrecognized header `{}`", line.trim_end()));
        let rest = line.trim_end().strip_prefix(MAGIC).ok_or_else(bad)?;
        let mut parts = rest.split_whitespace();
        let (Some(datum), Some(conv), Some(par), None) = (parts.next(), parts.next(), parts.next(), parts.next()) else {
            return Err(bad());
        };
        if conv != CONVENTION {
            return Err(bad());
        }
        let par = par.strip_prefix("parabolic=").ok_or_else(bad)?;
        let subset = if par == "-" {
            Vec::new()
        } else {
            par.split(',').map(|c| c.parse().map_err(|_| bad())).collect::<Result<_>>()?
        };
        Ok((datum.to_string(), subset))
    }

    pub(crate) fn check_context(&self, g: &AffineWeyl, parabolic: &[usize]) -> Result<()> {
        let mut p = parabolic.to_vec();
        p.sort_unstable();
        p.dedup();
        if self.datum != g.datum().label() || self.parabolic != p {
            return Err(Error::CacheCorrupt(format!(
                "cache is for {} parabolic {:?}, not {} parabolic {:?}",
                self.datum,
                self.parabolic,
                g.datum().label(),
                p
            )));
        }
        Ok(())
    }

    /// Merges entries of `other` (same header) into `self`.
    pub fn merge(&self, other: &KLCache<R>) -> Result<usize> {
        if self.header() != other.header() {
            return Err(Error::CacheCorrupt(format!("cannot merge `{}` into `{}`", other.header(), self.header())));
        }
        let mut added = 0;
        for (x, v) in other.entries.read().iter() {
            let mut w = self.entries.write();
            if !w.contains_key(x) {
                w.insert(x.clone(), v.clone());
                added += 1;
            }
        }
        Ok(added)
    }
}

impl<R: Coeff + fmt::Display + Signed + FromStr> KLCache<R> {
    /// Header line followed by `x<TAB>y<TAB>poly` rows, sorted by length and word.
    pub fn to_text(&self, g: &AffineWeyl) -> String {
        let mut out = self.header();
        out.push('\n');
        let entries = self.entries.read();
        let mut keys: Vec<_> = entries.keys().map(|x| ((g.length(x), (*g.decompose(x)).clone()), x)).collect();
        keys.sort();
        for (_, x) in keys {
            let xe = g.encode(x);
            for (y, c) in entries[x].sorted_terms(g) {
                out.push_str(&format!("{xe}\t{}\t{c}\n", g.encode(&y)));
            }
        }
        out
    }

    pub fn from_text(g: &AffineWeyl, parabolic: &[usize], text: &str) -> Result<Self> {
        let cache = KLCache::new(g.datum().label(), parabolic);
        let mut lines = text.lines();
        let header = lines.next().unwrap_or("");
        if header.trim_end() != cache.header() {
            return Err(Error::CacheCorrupt(format!("header `{header}` does not match `{}`", cache.header())));
        }
        let mut rows: HashMap<AffineElt, Combination<R>> = HashMap::new();
        for (n, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let bad = |e: Error| Error::CacheCorrupt(format!("line {}: {e}", n + 2));
            let mut parts = line.split('\t');
            let (Some(x), Some(y), Some(c), None) = (parts.next(), parts.next(), parts.next(), parts.next()) else {
                return Err(Error::CacheCorrupt(format!("line {}: expected three tab-separated fields", n + 2)));
            };
            let x = g.parse(x).map_err(bad)?;
            let y = g.parse(y).map_err(bad)?;
            let c: Laurent<R> = c.parse().map_err(bad)?;
            rows.entry(x).or_insert_with(Combination::zero).add_term(y, &c);
        }
        for (x, row) in rows {
            if !row.coeff(&x).is_one() {
                return Err(Error::CacheCorrupt(format!("entry {} lacks its leading term", g.encode(&x))));
            }
            cache.insert(x, row);
        }
        Ok(cache)
    }

    pub fn save(&self, g: &AffineWeyl, path: &Path) -> Result<()> {
        let tmp = path.with_extension("tmp");
        std::fs::write(&tmp, self.to_text(g))?;
        std::fs::rename(&tmp, path)?;
        Ok(())
    }

    pub fn load(g: &AffineWeyl, parabolic: &[usize], path: &Path) -> Result<Self> {
        Self::from_text(g, parabolic, &std::fs::read_to_string(path)?)
    }
}

/// Subtracts bar-invariant multiples of lower canonical elements from the
/// bar-invariant `d` (leading term at `top`) until every other coefficient
/// lies in `v⁻¹ℤ[v⁻¹]`.
pub(crate) fn canonical_correction<R: Coeff>(
    g: &AffineWeyl,
    d: &mut Combination<R>,
    top: &AffineElt,
    mut fetch: impl FnMut(&AffineElt) -> Result<Arc<Combination<R>>>,
) -> Result<()> {
    let mut by_len: Vec<Vec<AffineElt>> = vec![Vec::new(); g.length(top)];
    for z in d.support() {
        let l = g.length(z);
        if l < by_len.len() {
            by_len[l].push(z.clone());
        }
    }
    for l in (0..by_len.len()).rev() {
        let mut zs = std::mem::take(&mut by_len[l]);
        zs.sort();
        zs.dedup();
        for z in zs {
            let c = d.coeff(&z);
            if c.max_degree().is_some_and(|m| m >= 0) {
                let p = c.nonnegative_symmetrization();
                let cz = fetch(&z)?;
                for (y, _) in cz.iter() {
                    let ly = g.length(y);
                    if ly < l && d.get(y).is_none() {
                        by_len[ly].push(y.clone());
                    }
                }
                d.add_scaled(&cz, &-p);
            }
        }
    }
    Ok(())
}

/// Rewrites a bar-invariant combination in the canonical basis returned by `fetch`.
pub(crate) fn expand_in_canonical_basis<R: Coeff>(
    g: &AffineWeyl,
    d: &Combination<R>,
    mut fetch: impl FnMut(&AffineElt) -> Result<Arc<Combination<R>>>,
) -> Result<Vec<(AffineElt, Laurent<R>)>> {
    let mut d = d.clone();
    let mut out = Vec::new();
    while let Some(top) = d.support().max_by(|a, b| (g.length(a), *a).cmp(&(g.length(b), *b))).cloned() {
        let q = d.coeff(&top);
        let c = fetch(&top)?;
        d.add_scaled(&c, &-q.clone());
        out.push((top, q));
    }
    Ok(out)
}

impl<R: Coeff> HeckeAlgebra<R> {
    /// The Kazhdan–Lusztig element `C_x`.
    pub fn kl_element(&self, x: &AffineElt, cache: &KLCache<R>) -> Result<Arc<HeckeElt<R>>> {
        cache.check_context(self.group(), &[])?;
        self.kl_element_inner(x, cache)
    }

    fn kl_element_inner(&self, x: &AffineElt, cache: &KLCache<R>) -> Result<Arc<HeckeElt<R>>> {
        if let Some(c) = cache.get(x) {
            return Ok(c);
        }
        let g = self.group().clone();
        if g.length(x) > self.guard() {
            return Err(Error::SupportGuard { length: g.length(x), guard: self.guard() });
        }
        let value = if g.length(x) == 0 {
            HeckeElt::basis(x.clone())
        } else {
            let i = g.gen_indices().find(|&i| g.is_left_descent(x, i)).expect("descent");
            let lower = g.gen(i)?.mul(x);
            let prev = self.kl_element_inner(&lower, cache)?;
            let mut d = self.left_mul_gen(i, &prev)?;
            d.add_scaled(&prev, &Laurent::monomial(-R::one(), -1));
            canonical_correction(&g, &mut d, x, |z| self.kl_element_inner(z, cache))?;
            d
        };
        Ok(cache.insert(x.clone(), value))
    }

    /// `c_{xy}`, the coefficient of `H_y` in `C_x`.
    pub fn kl_poly(&self, x: &AffineElt, y: &AffineElt, cache: &KLCache<R>) -> Result<Laurent<R>> {
        Ok(self.kl_element(x, cache)?.coeff(y))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affweyl::CosetFilter;

    fn setup(label: &str) -> (HeckeAlgebra, KLCache) {
        let g = Arc::new(AffineWeyl::from_label(label).unwrap());
        let cache = KLCache::for_group(&g);
        (HeckeAlgebra::new(g), cache)
    }

    fn lp(s: &str) -> Laurent<BigInt> {
        s.parse().unwrap()
    }

    #[test]
    fn simple_reflection_element() {
        let (h, cache) = setup("A1");
        let g = h.group().clone();
        let s = g.gen(1).unwrap().clone();
        let c = h.kl_element(&s, &cache).unwrap();
        assert_eq!(*c, h.c_s(1).unwrap());
        assert_eq!(h.kl_poly(&s, &s, &cache).unwrap(), Laurent::one());
        let x = g.from_word(&[0, 1]).unwrap();
        assert_eq!(h.kl_poly(&x, &s, &cache).unwrap(), lp("-v^-1"));
    }

    #[test]
    fn elements_are_bar_invariant_and_triangular() {
        let (h, cache) = setup("A2");
        let g = h.group().clone();
        for x in g.enumerate(4, &CosetFilter::All).unwrap() {
            let c = h.kl_element(&x, &cache).unwrap();
            assert_eq!(h.bar(&c).unwrap(), *c);
            for (y, p) in c.iter() {
                if *y == x {
                    assert!(p.is_one());
                } else {
                    assert!(p.in_negative_span());
                    assert!(g.bruhat_leq(y, &x));
                }
            }
        }
    }

    #[test]
    fn cache_text_round_trip_and_header_checks() {
        let (h, cache) = setup("A1");
        let g = h.group().clone();
        for x in g.enumerate(4, &CosetFilter::All).unwrap() {
            h.kl_element(&x, &cache).unwrap();
        }
        let text = cache.to_text(&g);
        assert!(text.starts_with("HECKE-KL v1 A1 convention=signed parabolic=-\n"));
        let back: KLCache = KLCache::from_text(&g, &[], &text).unwrap();
        assert_eq!(back.to_text(&g), text);
        let bad = text.replacen("A1", "A2", 1);
        assert!(matches!(KLCache::<BigInt>::from_text(&g, &[], &bad), Err(Error::CacheCorrupt(_))));
        assert!(matches!(KLCache::<BigInt>::from_text(&g, &[1], &text), Err(Error::CacheCorrupt(_))));
        let wrong = KLCache::<BigInt>::new("A2", &[]);
        assert!(h.kl_element(&g.identity(), &wrong).is_err());
    }

    #[test]
    fn insertion_is_idempotent() {
        let (h, cache) = setup("A1");
        let g = h.group().clone();
        let x = g.from_word(&[0, 1, 0]).unwrap();
        let first = h.kl_element(&x, &cache).unwrap();
        let again = cache.insert(x.clone(), HeckeElt::zero());
        assert_eq!(*first, *again);
    }
}
