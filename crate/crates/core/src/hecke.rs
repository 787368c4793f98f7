//! The affine Hecke algebra of the extended affine Weyl group.
//!
//! Conventions: `(H_s + v)(H_s − v⁻¹) = 0`, so `H_s⁻¹ = H_s + v − v⁻¹` and
//! `C_s = H_s − v⁻¹`. The bar involution is `v ↦ v⁻¹`, `H_x ↦ H_{x⁻¹}⁻¹`.
//! Kazhdan–Lusztig polynomials in this normalization are signed and live in
//! `v⁻¹ℤ[v⁻¹]`; they are not the classical `P_{y,x}`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use parking_lot::RwLock;

use crate::affweyl::{AffineElt, AffineWeyl, Decomposition};
use crate::error::{Error, Result};
use crate::laurent::{Coeff, Laurent};
use crate::rootdata::Weight;

/// Default truncation guard on the length of support elements.
pub const DEFAULT_SUPPORT_GUARD: usize = 24;

/// A finite `ℤ[v^{±1}]`-combination of group elements, used both for Hecke
/// algebra elements (in the basis `H_x`) and parabolic module elements (in
/// the basis `H^P_x`).
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Combination<R> {
    terms: HashMap<AffineElt, Laurent<R>>,
}

/// An element of the affine Hecke algebra in the standard basis.
pub type HeckeElt<R = BigInt> = Combination<R>;

impl<R: Coeff> Combination<R> {
    pub fn zero() -> Self {
        Combination { terms: HashMap::new() }
    }

    pub fn basis(x: AffineElt) -> Self {
        Self::monomial(x, Laurent::one())
    }

    pub fn monomial(x: AffineElt, c: Laurent<R>) -> Self {
        let mut out = Self::zero();
        out.add_term(x, &c);
        out
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (AffineElt, Laurent<R>)>) -> Self {
        let mut out = Self::zero();
        for (x, c) in terms {
            out.add_term(x, &c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of nonzero terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, x: &AffineElt) -> Laurent<R> {
        self.terms.get(x).cloned().unwrap_or_else(Laurent::zero)
    }

    pub fn get(&self, x: &AffineElt) -> Option<&Laurent<R>> {
        self.terms.get(x)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&AffineElt, &Laurent<R>)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &AffineElt> {
        self.terms.keys()
    }

    pub fn add_term(&mut self, x: AffineElt, c: &Laurent<R>) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(x) {
            std::collections::hash_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            std::collections::hash_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
        }
    }

    /// `self += c · other`.
    pub fn add_scaled(&mut self, other: &Self, c: &Laurent<R>) {
        if c.is_zero() {
            return;
        }
        for (x, a) in &other.terms {
            self.add_term(x.clone(), &(a * c));
        }
    }

    pub fn scaled(&self, c: &Laurent<R>) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &Laurent::one());
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &-Laurent::one());
        out
    }

    pub fn neg(&self) -> Self {
        self.scaled(&-Laurent::one())
    }

    /// Applies `f` to every basis label (must be injective).
    pub fn map_support(&self, f: impl Fn(&AffineElt) -> AffineElt) -> Self {
        Combination { terms: self.terms.iter().map(|(x, c)| (f(x), c.clone())).collect() }
    }

    /// Coefficient-wise bar involution on `ℤ[v^{±1}]` only (labels untouched).
    pub fn bar_coeffs(&self) -> Self {
        Combination { terms: self.terms.iter().map(|(x, c)| (x.clone(), c.bar())).collect() }
    }

    pub fn into_terms(self) -> HashMap<AffineElt, Laurent<R>> {
        self.terms
    }

    /// Terms sorted by length, then canonical word.
    pub fn sorted_terms(&self, g: &AffineWeyl) -> Vec<(AffineElt, Laurent<R>)> {
        let mut v: Vec<_> = self
            .terms
            .iter()
            .map(|(x, c)| ((g.length(x), (*g.decompose(x)).clone()), x.clone(), c.clone()))
            .collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v.into_iter().map(|(_, x, c)| (x, c)).collect()
    }

    /// Largest length in the support.
    pub fn max_length(&self, g: &AffineWeyl) -> Option<usize> {
        self.terms.keys().map(|x| g.length(x)).max()
    }
}

impl<R: Coeff> fmt::Debug for Combination<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut entries: Vec<_> = self.terms.iter().collect();
        entries.sort_by(|a, b| a.0.cmp(b.0));
        f.debug_map().entries(entries).finish()
    }
}

/// Arithmetic in the affine Hecke algebra over `Laurent<R>`.
pub struct HeckeAlgebra<R: Coeff = BigInt> {
    group: Arc<AffineWeyl>,
    guard: usize,
    inverses: RwLock<HashMap<AffineElt, Arc<HeckeElt<R>>>>,
}

impl<R: Coeff> fmt::Debug for HeckeAlgebra<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HeckeAlgebra").field("datum", &self.group.datum().label()).field("guard", &self.guard).finish()
    }
}

#[derive(Clone, Copy)]
enum Side {
    Left,
    Right,
}

fn times_v_minus_vinv<R: Coeff>(c: &Laurent<R>) -> Laurent<R> {
    let mut out = c.shift(1);
    out -= &c.shift(-1);
    out
}

fn v_minus_vinv<R: Coeff>() -> Laurent<R> {
    Laurent::from_terms([(1, R::one()), (-1, -R::one())])
}

impl<R: Coeff> HeckeAlgebra<R> {
    pub fn new(group: Arc<AffineWeyl>) -> Self {
        Self::with_guard(group, DEFAULT_SUPPORT_GUARD)
    }

    pub fn with_guard(group: Arc<AffineWeyl>, guard: usize) -> Self {
        HeckeAlgebra { group, guard, inverses: RwLock::new(HashMap::new()) }
    }

    pub fn group(&self) -> &Arc<AffineWeyl> {
        &self.group
    }

    pub fn guard(&self) -> usize {
        self.guard
    }

    pub fn one(&self) -> HeckeElt<R> {
        HeckeElt::basis(self.group.identity())
    }

    pub fn basis(&self, x: &AffineElt) -> HeckeElt<R> {
        HeckeElt::basis(x.clone())
    }

    fn guarded(&self, x: &AffineElt) -> Result<usize> {
        self.guarded_len(self.group.length(x))
    }

    fn guarded_len(&self, l: usize) -> Result<usize> {
        if l > self.guard {
            Err(Error::SupportGuard { length: l, guard: self.guard })
        } else {
            Ok(l)
        }
    }

    /// `C_s = H_s − v⁻¹` for a generator index.
    pub fn c_s(&self, i: usize) -> Result<HeckeElt<R>> {
        let s = self.group.gen(i)?.clone();
        let mut out = HeckeElt::basis(s);
        out.add_term(self.group.identity(), &Laurent::monomial(-R::one(), -1));
        Ok(out)
    }

    /// `a · H_s`.
    pub fn right_mul_gen(&self, a: &HeckeElt<R>, i: usize) -> Result<HeckeElt<R>> {
        self.gen_step(a, i, Side::Right, false)
    }

    /// `H_s · a`.
    pub fn left_mul_gen(&self, i: usize, a: &HeckeElt<R>) -> Result<HeckeElt<R>> {
        self.gen_step(a, i, Side::Left, false)
    }

    /// `a · H_s⁻¹`.
    pub fn right_mul_inverse_gen(&self, a: &HeckeElt<R>, i: usize) -> Result<HeckeElt<R>> {
        self.gen_step(a, i, Side::Right, true)
    }

    /// `H_s⁻¹ · a`.
    pub fn left_mul_inverse_gen(&self, i: usize, a: &HeckeElt<R>) -> Result<HeckeElt<R>> {
        self.gen_step(a, i, Side::Left, true)
    }

    // With y = xs: H_x H_s = H_y if y > x, else H_y − (v − v⁻¹) H_x; and
    // H_x H_s⁻¹ = H_y if y < x, else H_y + (v − v⁻¹) H_x.
    fn gen_step(&self, a: &HeckeElt<R>, i: usize, side: Side, inverse: bool) -> Result<HeckeElt<R>> {
        let s = self.group.gen(i)?;
        let mut out = HeckeElt::zero();
        for (x, c) in a.iter() {
            let (y, down) = match side {
                Side::Right => (x.mul(s), self.group.is_right_descent(x, i)),
                Side::Left => (s.mul(x), self.group.is_left_descent(x, i)),
            };
            if !down {
                self.guarded_len(self.group.length(x) + 1)?;
            }
            if down != inverse {
                let d = times_v_minus_vinv(c);
                if inverse {
                    out.add_term(x.clone(), &d);
                } else {
                    out.add_term(x.clone(), &-d);
                }
            }
            out.add_term(y, c);
        }
        Ok(out)
    }

    /// `a · H_y`.
    pub fn mul_standard_right(&self, a: &HeckeElt<R>, y: &AffineElt) -> Result<HeckeElt<R>> {
        let d = self.group.decompose(y);
        let omega = &self.group.omega()[d.omega];
        let mut out = a.map_support(|x| x.mul(omega));
        for &i in &d.word {
            out = self.right_mul_gen(&out, i as usize)?;
        }
        Ok(out)
    }

    /// `H_y · a`.
    pub fn mul_standard_left(&self, y: &AffineElt, a: &HeckeElt<R>) -> Result<HeckeElt<R>> {
        let d = self.group.decompose(y);
        let mut out = a.clone();
        for &i in d.word.iter().rev() {
            out = self.left_mul_gen(i as usize, &out)?;
        }
        let omega = &self.group.omega()[d.omega];
        Ok(out.map_support(|x| omega.mul(x)))
    }

    /// `a · H_y⁻¹`, applying `H_s⁻¹ = H_s + (v − v⁻¹)` letter by letter.
    pub fn mul_inverse_right(&self, a: &HeckeElt<R>, y: &AffineElt) -> Result<HeckeElt<R>> {
        let d = self.group.decompose(y);
        let mut out = a.clone();
        for &i in d.word.iter().rev() {
            out = self.right_mul_inverse_gen(&out, i as usize)?;
        }
        let omega_inv = self.group.omega()[d.omega].inverse();
        Ok(out.map_support(|x| x.mul(&omega_inv)))
    }

    /// `a · X_θ` without expanding `X_θ`.
    pub fn mul_x_theta_right(&self, a: &HeckeElt<R>, theta: &Weight) -> Result<HeckeElt<R>> {
        let g = &self.group;
        g.datum().check_weight(theta)?;
        let pos = Weight::new(theta.coords().iter().map(|&c| c.max(0)));
        let neg = Weight::new(theta.coords().iter().map(|&c| (-c).max(0)));
        let ax = self.mul_standard_right(a, &g.translation(&pos)?)?;
        self.mul_inverse_right(&ax, &g.translation(&neg)?)
    }

    /// `a · b`, walking the terms of the smaller factor as a trie of canonical
    /// words so that common prefixes are multiplied once.
    pub fn mul(&self, a: &HeckeElt<R>, b: &HeckeElt<R>) -> Result<HeckeElt<R>> {
        if a.len() < b.len() {
            return self.mul_from_left(a, b);
        }
        let mut items: Vec<(Arc<Decomposition>, &Laurent<R>)> = b.iter().map(|(y, c)| (self.group.decompose(y), c)).collect();
        items.sort_by(|x, y| x.0.cmp(&y.0));
        let mut out = HeckeElt::zero();
        let mut k = 0;
        while k < items.len() {
            let omega = items[k].0.omega;
            let j = k + items[k..].iter().take_while(|t| t.0.omega == omega).count();
            let om = &self.group.omega()[omega];
            let start = a.map_support(|x| x.mul(om));
            self.mul_trie(&start, &items[k..j], 0, &mut out)?;
            k = j;
        }
        Ok(out)
    }

    fn mul_from_left(&self, a: &HeckeElt<R>, b: &HeckeElt<R>) -> Result<HeckeElt<R>> {
        let mut items: Vec<(Vec<u8>, usize, &Laurent<R>)> = a
            .iter()
            .map(|(x, c)| {
                let d = self.group.decompose(x);
                (d.word.iter().rev().copied().collect(), d.omega, c)
            })
            .collect();
        items.sort_by(|x, y| x.0.cmp(&y.0));
        let mut out = HeckeElt::zero();
        self.mul_trie_left(b, &items, 0, &mut out)?;
        Ok(out)
    }

    fn mul_trie_left(
        &self,
        cur: &HeckeElt<R>,
        items: &[(Vec<u8>, usize, &Laurent<R>)],
        depth: usize,
        out: &mut HeckeElt<R>,
    ) -> Result<()> {
        let mut k = 0;
        while k < items.len() && items[k].0.len() == depth {
            let om = &self.group.omega()[items[k].1];
            out.add_scaled(&cur.map_support(|x| om.mul(x)), items[k].2);
            k += 1;
        }
        while k < items.len() {
            let letter = items[k].0[depth];
            let j = k + items[k..].iter().take_while(|t| t.0[depth] == letter).count();
            let next = self.left_mul_gen(letter as usize, cur)?;
            self.mul_trie_left(&next, &items[k..j], depth + 1, out)?;
            k = j;
        }
        Ok(())
    }

    fn mul_trie(
        &self,
        cur: &HeckeElt<R>,
        items: &[(Arc<Decomposition>, &Laurent<R>)],
        depth: usize,
        out: &mut HeckeElt<R>,
    ) -> Result<()> {
        let mut k = 0;
        while k < items.len() && items[k].0.word.len() == depth {
            out.add_scaled(cur, items[k].1);
            k += 1;
        }
        while k < items.len() {
            let letter = items[k].0.word[depth];
            let j = k + items[k..].iter().take_while(|t| t.0.word[depth] == letter).count();
            let next = self.right_mul_gen(cur, letter as usize)?;
            self.mul_trie(&next, &items[k..j], depth + 1, out)?;
            k = j;
        }
        Ok(())
    }

    /// `H_x⁻¹`, built from `H_s⁻¹ = H_s + (v − v⁻¹)` along a reduced word.
    pub fn inverse_of_standard(&self, x: &AffineElt) -> Result<Arc<HeckeElt<R>>> {
        if let Some(e) = self.inverses.read().get(x) {
            return Ok(e.clone());
        }
        self.guarded(x)?;
        let out = if self.group.length(x) == 0 {
            HeckeElt::basis(x.inverse())
        } else {
            // x = x'·s with ℓ(x') < ℓ(x), so H_x⁻¹ = H_s⁻¹ · H_{x'}⁻¹.
            let i = self.group.gen_indices().find(|&i| self.group.is_right_descent(x, i)).expect("descent");
            let prev = self.inverse_of_standard(&x.mul(self.group.gen(i)?))?;
            let mut e = self.left_mul_gen(i, &prev)?;
            e.add_scaled(&prev, &v_minus_vinv());
            e
        };
        let out = Arc::new(out);
        self.inverses.write().insert(x.clone(), out.clone());
        Ok(out)
    }

    /// `bar(H_x) = H_{x⁻¹}⁻¹`.
    pub fn bar_standard(&self, x: &AffineElt) -> Result<Arc<HeckeElt<R>>> {
        self.inverse_of_standard(&x.inverse())
    }

    /// For `x = ω·s_{i₁}⋯s_{i_k}`, `bar(H_x) = H_ω H_{i₁}⁻¹⋯H_{i_k}⁻¹`; the terms
    /// are evaluated Horner style over the trie of canonical words.
    pub fn bar(&self, a: &HeckeElt<R>) -> Result<HeckeElt<R>> {
        if a.len() <= 1 {
            let mut out = HeckeElt::zero();
            for (x, c) in a.iter() {
                out.add_scaled(&*self.bar_standard(x)?, &c.bar());
            }
            return Ok(out);
        }
        let mut items: Vec<(Arc<Decomposition>, Laurent<R>)> =
            a.iter().map(|(x, c)| (self.group.decompose(x), c.bar())).collect();
        items.sort_by(|x, y| x.0.cmp(&y.0));
        let mut out = HeckeElt::zero();
        let mut k = 0;
        while k < items.len() {
            let omega = items[k].0.omega;
            let j = k + items[k..].iter().take_while(|t| t.0.omega == omega).count();
            let om = &self.group.omega()[omega];
            let f = self.bar_trie(&items[k..j], 0)?;
            for (x, c) in f.iter() {
                out.add_term(om.mul(x), c);
            }
            k = j;
        }
        Ok(out)
    }

    fn bar_trie(&self, items: &[(Arc<Decomposition>, Laurent<R>)], depth: usize) -> Result<HeckeElt<R>> {
        let mut f = HeckeElt::zero();
        let mut k = 0;
        while k < items.len() && items[k].0.word.len() == depth {
            f.add_term(self.group.identity(), &items[k].1);
            k += 1;
        }
        while k < items.len() {
            let letter = items[k].0.word[depth];
            let j = k + items[k..].iter().take_while(|t| t.0.word[depth] == letter).count();
            let child = self.bar_trie(&items[k..j], depth + 1)?;
            let lifted = self.left_mul_inverse_gen(letter as usize, &child)?;
            for (x, c) in lifted.iter() {
                f.add_term(x.clone(), c);
            }
            k = j;
        }
        Ok(f)
    }

    /// Bernstein element `X_θ = H_{t_{θ₁}} H_{t_{θ₂}}⁻¹` for `θ = θ₁ − θ₂`, both dominant.
    pub fn x_theta(&self, theta: &Weight) -> Result<HeckeElt<R>> {
        let pos = Weight::new(theta.coords().iter().map(|&c| c.max(0)));
        let neg = Weight::new(theta.coords().iter().map(|&c| (-c).max(0)));
        self.x_theta_split(&pos, &neg)
    }

    /// `H_{t_{θ₁}} H_{t_{θ₂}}⁻¹` for dominant `θ₁`, `θ₂`.
    pub fn x_theta_split(&self, theta1: &Weight, theta2: &Weight) -> Result<HeckeElt<R>> {
        let g = &self.group;
        for th in [theta1, theta2] {
            g.datum().check_weight(th)?;
            if let Some(i) = th.coords().iter().position(|&c| c < 0) {
                return Err(Error::NotDominant { coroot: format!("a{}v", i + 1), pairing: th.coords()[i] });
            }
        }
        let inv = self.inverse_of_standard(&g.translation(theta2)?)?;
        self.mul_standard_left(&g.translation(theta1)?, &inv)
    }

    /// Checks `bar(X_θ) = H_{w₀} X_{w₀θ} H_{w₀}⁻¹` by computing both sides.
    pub fn verify_xbar_identity(&self, theta: &Weight) -> Result<bool> {
        let g = &self.group;
        let lhs = self.bar(&self.x_theta(theta)?)?;
        let w0 = g.longest_in(&(1..=g.rank()).collect::<Vec<_>>());
        let x = self.x_theta(&w0.w().apply(theta))?;
        let left = self.mul_standard_left(&w0, &x)?;
        let rhs = self.mul(&left, &*self.inverse_of_standard(&w0)?)?;
        Ok(lhs == rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg(label: &str) -> HeckeAlgebra {
        HeckeAlgebra::new(Arc::new(AffineWeyl::from_label(label).unwrap()))
    }

    fn lp(s: &str) -> Laurent<BigInt> {
        s.parse().unwrap()
    }

    #[test]
    fn a1_products() {
        let h = alg("A1");
        let g = h.group().clone();
        let s = g.gen(1).unwrap().clone();
        let hs = h.basis(&s);
        assert_eq!(h.mul(&h.one(), &hs).unwrap(), hs);
        let mut expect = h.one();
        expect.add_term(s.clone(), &lp("v^-1 - v"));
        assert_eq!(h.mul(&hs, &hs).unwrap(), expect);
        let t1 = g.translation(&Weight::new([1])).unwrap();
        assert_eq!(h.mul(&hs, &h.basis(&t1)).unwrap(), h.basis(&s.mul(&t1)));
    }

    #[test]
    fn inverse_and_bar_examples() {
        let h = alg("A1");
        let g = h.group().clone();
        let s = g.gen(1).unwrap().clone();
        assert_eq!(*h.inverse_of_standard(&g.identity()).unwrap(), h.one());
        let mut expect = h.basis(&s);
        expect.add_term(g.identity(), &lp("v - v^-1"));
        assert_eq!(*h.inverse_of_standard(&s).unwrap(), expect);
        assert_eq!(h.mul(&h.inverse_of_standard(&s).unwrap(), &h.basis(&s)).unwrap(), h.one());
        assert_eq!(h.bar(&h.basis(&s)).unwrap(), expect);
        assert_eq!(h.bar(&HeckeElt::monomial(g.identity(), lp("v^-1"))).unwrap(), HeckeElt::monomial(g.identity(), lp("v")));
    }

    #[test]
    fn x_theta_examples() {
        let h = alg("A1");
        let g = h.group().clone();
        assert_eq!(h.x_theta(&Weight::new([0])).unwrap(), h.one());
        let t1 = g.translation(&Weight::new([1])).unwrap();
        assert_eq!(h.x_theta(&Weight::new([1])).unwrap(), h.basis(&t1));
        let prod = h.mul(&h.x_theta(&Weight::new([1])).unwrap(), &h.x_theta(&Weight::new([-1])).unwrap()).unwrap();
        assert_eq!(prod, h.one());
        // Independence of the dominant decomposition.
        assert_eq!(
            h.x_theta(&Weight::new([-1])).unwrap(),
            h.x_theta_split(&Weight::new([2]), &Weight::new([3])).unwrap()
        );
    }

    #[test]
    fn xbar_small() {
        let h = alg("A1");
        for th in [0, 1, -2] {
            assert!(h.verify_xbar_identity(&Weight::new([th])).unwrap());
        }
    }

    #[test]
    fn support_guard_trips() {
        let g = Arc::new(AffineWeyl::from_label("A1").unwrap());
        let h: HeckeAlgebra = HeckeAlgebra::with_guard(g.clone(), 3);
        let t = g.translation(&Weight::new([2])).unwrap();
        assert!(h.mul(&h.basis(&t), &h.basis(&t)).is_err());
    }
}
