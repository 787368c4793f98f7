//! The extended affine Weyl group `W ⋉ X`.
//!
//! Elements are pairs `(w, ζ)` standing for `w·t_ζ`, with product
//! `(w, ζ)(w', ζ') = (ww', w'⁻¹ζ + ζ')`. The finite part is stored as its
//! matrix on the weight lattice (and the inverse matrix), so equality and
//! hashing do not depend on a choice of word.
//!
//! Generators are numbered `0..=r`, where `0` is the affine reflection
//! `s₀ = s_{α₀}·t_{−α₀}` and `1..=r` are the finite simple reflections. For a
//! product of several irreducible types the affine reflection of the `c`-th
//! factor (`c ≥ 1`) gets number `r + c`.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use parking_lot::RwLock;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::rootdata::{RootDatum, Weight};

/// Default cap on `max_len` for [`AffineWeyl::enumerate`].
pub const DEFAULT_ENUMERATION_GUARD: usize = 20;

type Mat = SmallVec<[i64; 16]>;

/// A finite Weyl group element as a matrix acting on weight coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteElt {
    n: u8,
    m: Mat,
    inv: Mat,
}

fn mat_mul(n: usize, a: &[i64], b: &[i64]) -> Mat {
    let mut c: Mat = SmallVec::from_elem(0, n * n);
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik != 0 {
                for j in 0..n {
                    c[i * n + j] += aik * b[k * n + j];
                }
            }
        }
    }
    c
}

fn mat_apply(n: usize, a: &[i64], v: &Weight) -> Weight {
    let c = v.coords();
    Weight::new((0..n).map(|i| (0..n).map(|j| a[i * n + j] * c[j]).sum()))
}

impl FiniteElt {
    pub fn identity(n: usize) -> Self {
        let mut m: Mat = SmallVec::from_elem(0, n * n);
        for i in 0..n {
            m[i * n + i] = 1;
        }
        FiniteElt { n: n as u8, inv: m.clone(), m }
    }

    /// Reflection `μ ↦ μ − ⟨μ, β∨⟩β`.
    pub fn reflection(root: &Weight, coroot: &Weight) -> Self {
        let n = root.len();
        let mut m = Self::identity(n).m;
        for k in 0..n {
            for j in 0..n {
                m[k * n + j] -= root.coords()[k] * coroot.coords()[j];
            }
        }
        FiniteElt { n: n as u8, inv: m.clone(), m }
    }

    pub fn dim(&self) -> usize {
        self.n as usize
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.dim())
    }

    pub fn apply(&self, v: &Weight) -> Weight {
        mat_apply(self.dim(), &self.m, v)
    }

    pub fn apply_inverse(&self, v: &Weight) -> Weight {
        mat_apply(self.dim(), &self.inv, v)
    }

    pub fn mul(&self, other: &FiniteElt) -> FiniteElt {
        let n = self.dim();
        FiniteElt { n: self.n, m: mat_mul(n, &self.m, &other.m), inv: mat_mul(n, &other.inv, &self.inv) }
    }

    pub fn inverse(&self) -> FiniteElt {
        FiniteElt { n: self.n, m: self.inv.clone(), inv: self.m.clone() }
    }

    pub fn matrix(&self) -> &[i64] {
        &self.m
    }
}

impl fmt::Debug for FiniteElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.m.as_slice())
    }
}

/// An element `w·t_ζ` of the extended affine Weyl group.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineElt {
    w: FiniteElt,
    zeta: Weight,
}

impl AffineElt {
    pub fn new(w: FiniteElt, zeta: Weight) -> Self {
        assert_eq!(w.dim(), zeta.len(), "finite part and translation live in different lattices");
        AffineElt { w, zeta }
    }

    pub fn w(&self) -> &FiniteElt {
        &self.w
    }

    pub fn zeta(&self) -> &Weight {
        &self.zeta
    }

    pub fn is_identity(&self) -> bool {
        self.zeta.is_zero() && self.w.is_identity()
    }

    pub fn is_finite(&self) -> bool {
        self.zeta.is_zero()
    }

    pub fn mul(&self, other: &AffineElt) -> AffineElt {
        AffineElt { w: self.w.mul(&other.w), zeta: other.w.apply_inverse(&self.zeta).add(&other.zeta) }
    }

    /// `(w, ζ)⁻¹ = (w⁻¹, −wζ)`.
    pub fn inverse(&self) -> AffineElt {
        AffineElt { w: self.w.inverse(), zeta: self.w.apply(&self.zeta).neg() }
    }
}

impl fmt::Debug for AffineElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, t[{}])", self.w, self.zeta)
    }
}

/// A length-zero element index plus the canonical reduced word.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Decomposition {
    pub omega: usize,
    pub word: Vec<u8>,
}

/// Which elements [`AffineWeyl::enumerate`] keeps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CosetFilter {
    All,
    /// Longest in `xW_P` for the given simple subset.
    LongestInWP(Vec<usize>),
    /// Shortest in `xW_S` for the given simple subset.
    ShortestInWS(Vec<usize>),
}

/// `w₀`, `w_{0,P}`, the longest element of `W_Ḡ` and `u_Ḡ = w̲₀⁻¹w₀`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecialElements {
    pub w0: AffineElt,
    pub w0_p: AffineElt,
    pub underline_w0: AffineElt,
    pub u: AffineElt,
}

/// Context for computing in `W ⋉ X` for a simply connected semisimple datum.
#[derive(Debug)]
pub struct AffineWeyl {
    datum: RootDatum,
    gens: Vec<AffineElt>,
    roots: Vec<Weight>,
    coroots: Vec<Weight>,
    /// Positive multiple of the functional "height" in weight coordinates.
    height: Vec<i64>,
    rho: Weight,
    omega: Vec<AffineElt>,
    omega_index: HashMap<AffineElt, usize>,
    decompositions: RwLock<HashMap<AffineElt, Arc<Decomposition>>>,
}

fn height_functional(datum: &RootDatum) -> Vec<i64> {
    // Summing simple-root coordinates: h·β = Σ_j (A⁻¹β)_j, scaled to integers.
    let n = datum.rank();
    let mut h = vec![num_rational::Ratio::<i64>::from_integer(0); n];
    for k in 0..n {
        let coords = datum.simple_root_coords(&Weight::unit(n, k)).expect("semisimple");
        h[k] = coords.iter().sum();
    }
    let den = h.iter().fold(1i64, |acc, r| num_integer::lcm(acc, *r.denom()));
    h.iter().map(|r| (r * den).to_integer()).collect()
}

impl AffineWeyl {
    pub fn new(datum: RootDatum) -> Result<Self> {
        if !datum.is_simply_connected_semisimple() {
            return Err(Error::Invalid(format!("{} is not simply connected semisimple", datum.label())));
        }
        let r = datum.rank();
        let mut gens = Vec::with_capacity(r + datum.components().len());
        let affine: Vec<AffineElt> = datum
            .highest_coroot_roots()
            .into_iter()
            .map(|(a0, a0v)| AffineElt::new(FiniteElt::reflection(&a0, &a0v), a0.neg()))
            .collect();
        gens.push(affine[0].clone());
        for i in 1..=r {
            gens.push(AffineElt::new(
                FiniteElt::reflection(datum.simple_root(i), datum.simple_coroot(i)),
                Weight::zero(r),
            ));
        }
        gens.extend(affine.into_iter().skip(1));
        let mut g = AffineWeyl {
            roots: datum.positive_roots_x().to_vec(),
            coroots: datum.positive_coroots_x().to_vec(),
            height: height_functional(&datum),
            rho: datum.rho().expect("simply connected"),
            datum,
            gens,
            omega: Vec::new(),
            omega_index: HashMap::new(),
            decompositions: RwLock::new(HashMap::new()),
        };
        g.omega = g.find_length_zero();
        g.omega_index = g.omega.iter().cloned().enumerate().map(|(i, x)| (x, i)).collect();
        Ok(g)
    }

    pub fn from_label(label: &str) -> Result<Self> {
        Self::new(RootDatum::from_label(label)?)
    }

    pub fn datum(&self) -> &RootDatum {
        &self.datum
    }

    pub fn rank(&self) -> usize {
        self.datum.rank()
    }

    pub fn num_gens(&self) -> usize {
        self.gens.len()
    }

    /// Generator indices in increasing order.
    pub fn gen_indices(&self) -> std::ops::Range<usize> {
        0..self.gens.len()
    }

    pub fn gen(&self, i: usize) -> Result<&AffineElt> {
        self.gens.get(i).ok_or(Error::BadGenerator(i))
    }

    pub fn is_affine_gen(&self, i: usize) -> bool {
        i == 0 || i > self.rank()
    }

    pub fn identity(&self) -> AffineElt {
        AffineElt::new(FiniteElt::identity(self.rank()), Weight::zero(self.rank()))
    }

    pub fn translation(&self, zeta: &Weight) -> Result<AffineElt> {
        self.datum.check_weight(zeta)?;
        Ok(AffineElt::new(FiniteElt::identity(self.rank()), zeta.clone()))
    }

    /// Product of generators in the given order.
    pub fn from_word(&self, word: &[usize]) -> Result<AffineElt> {
        let mut x = self.identity();
        for &i in word {
            x = x.mul(self.gen(i)?);
        }
        Ok(x)
    }

    /// A finite Weyl group element from a word in `1..=r`.
    pub fn finite(&self, word: &[usize]) -> Result<AffineElt> {
        if let Some(&bad) = word.iter().find(|&&i| i == 0 || i > self.rank()) {
            return Err(Error::BadGenerator(bad));
        }
        self.from_word(word)
    }

    pub fn check(&self, x: &AffineElt) -> Result<()> {
        if x.zeta.len() == self.rank() {
            Ok(())
        } else {
            Err(Error::DatumMismatch { expected: self.rank(), got: x.zeta.len() })
        }
    }

    pub fn multiply(&self, x: &AffineElt, y: &AffineElt) -> Result<AffineElt> {
        self.check(x)?;
        self.check(y)?;
        Ok(x.mul(y))
    }

    fn is_positive(&self, beta: &Weight) -> bool {
        beta.coords().iter().zip(&self.height).map(|(a, b)| a * b).sum::<i64>() > 0
    }

    /// `ℓ(w t_ζ) = Σ_{α>0, wα>0} |⟨ζ,α∨⟩| + Σ_{α>0, wα<0} |1 + ⟨ζ,α∨⟩|`.
    pub fn length(&self, x: &AffineElt) -> usize {
        let mut l = 0;
        for (a, co) in self.roots.iter().zip(&self.coroots) {
            let z = x.zeta.dot(co);
            l += if self.is_positive(&x.w.apply(a)) { z.abs() } else { (1 + z).abs() };
        }
        l as usize
    }

    /// Length-zero elements, identity first, then by translation part (descending).
    pub fn omega(&self) -> &[AffineElt] {
        &self.omega
    }

    pub fn omega_position(&self, x: &AffineElt) -> Option<usize> {
        self.omega_index.get(x).copied()
    }

    fn find_length_zero(&self) -> Vec<AffineElt> {
        // A length-zero w·t_ζ has ⟨ζ, α_i∨⟩ ∈ {0, −1}, and w is then forced.
        let r = self.rank();
        let finite = self.finite_elements();
        let mut out = Vec::new();
        for mask in 0..(1u32 << r) {
            let zeta = Weight::new((0..r).map(|i| if mask >> i & 1 == 1 { -1 } else { 0 }));
            for w in &finite {
                let x = AffineElt::new(w.w.clone(), zeta.clone());
                if self.length(&x) == 0 {
                    out.push(x);
                }
            }
        }
        out.sort_by(|a, b| b.zeta.cmp(&a.zeta));
        out
    }

    /// All elements of the finite Weyl group, ordered by length then discovery.
    pub fn finite_elements(&self) -> Vec<AffineElt> {
        self.parabolic_elements(&(1..=self.rank()).collect::<Vec<_>>())
    }

    /// All elements of `W_S` for a subset `S` of `1..=r`.
    pub fn parabolic_elements(&self, subset: &[usize]) -> Vec<AffineElt> {
        let mut seen: HashSet<AffineElt> = HashSet::new();
        let mut out = vec![self.identity()];
        seen.insert(self.identity());
        let mut k = 0;
        while k < out.len() {
            for &i in subset {
                let y = out[k].mul(&self.gens[i]);
                if seen.insert(y.clone()) {
                    out.push(y);
                }
            }
            k += 1;
        }
        out
    }

    /// Longest element of `W_S`.
    pub fn longest_in(&self, subset: &[usize]) -> AffineElt {
        let mut x = self.identity();
        // Multiply by simple reflections in S while the length grows.
        'outer: loop {
            for &i in subset {
                let y = x.mul(&self.gens[i]);
                if self.length(&y) > self.length(&x) {
                    x = y;
                    continue 'outer;
                }
            }
            return x;
        }
    }

    pub fn is_right_descent(&self, x: &AffineElt, i: usize) -> bool {
        if (1..=self.rank()).contains(&i) {
            // Only the α_i term of the length formula changes under x ↦ x·s_i.
            let z = x.zeta.dot(self.datum.simple_coroot(i));
            let up = self.is_positive(&x.w.apply(self.datum.simple_root(i)));
            return if up { z >= 1 } else { z >= 0 };
        }
        self.length(&x.mul(&self.gens[i])) < self.length(x)
    }

    pub fn is_left_descent(&self, x: &AffineElt, i: usize) -> bool {
        if (1..=self.rank()).contains(&i) {
            // s_i·x < x iff x⁻¹·s_i < x⁻¹, with x⁻¹ = (w⁻¹, −wζ).
            let z = -x.w.apply(&x.zeta).dot(self.datum.simple_coroot(i));
            let up = self.is_positive(&x.w.apply_inverse(self.datum.simple_root(i)));
            return if up { z >= 1 } else { z >= 0 };
        }
        self.length(&self.gens[i].mul(x)) < self.length(x)
    }

    /// `x = ω · s_{i₁} ⋯ s_{i_k}` with `ω` of length zero and the
    /// lexicographically least reduced word.
    pub fn decompose(&self, x: &AffineElt) -> Arc<Decomposition> {
        if let Some(d) = self.decompositions.read().get(x) {
            return d.clone();
        }
        let mut y = x.clone();
        let mut len = self.length(&y);
        while len > 0 {
            let i = self.gen_indices().find(|&i| self.is_right_descent(&y, i)).expect("nonzero length has a descent");
            y = y.mul(&self.gens[i]);
            len -= 1;
        }
        let omega = self.omega_index[&y];
        let mut z = y.inverse().mul(x);
        let mut word = Vec::new();
        let mut len = self.length(&z);
        while len > 0 {
            let i = self.gen_indices().find(|&i| self.is_left_descent(&z, i)).expect("descent");
            word.push(i as u8);
            z = self.gens[i].mul(&z);
            len -= 1;
        }
        let d = Arc::new(Decomposition { omega, word });
        self.decompositions.write().insert(x.clone(), d.clone());
        d
    }

    pub fn omega_part(&self, x: &AffineElt) -> usize {
        self.decompose(x).omega
    }

    /// Canonical text form `ω<index>|<word>`, e.g. `ω0|0,1,0`.
    pub fn encode(&self, x: &AffineElt) -> String {
        let d = self.decompose(x);
        let word: Vec<String> = d.word.iter().map(|i| i.to_string()).collect();
        format!("ω{}|{}", d.omega, word.join(","))
    }

    /// Parses `ω<index>|<word>` (also accepting `w` for `ω`); the word need not be reduced.
    pub fn parse(&self, s: &str) -> Result<AffineElt> {
        let bad = || Error::Parse(format!("bad element encoding `{s}`"));
        let t = s.trim();
        let t = t.strip_prefix('ω').or_else(|| t.strip_prefix('w')).ok_or_else(bad)?;
        let (idx, word) = t.split_once('|').ok_or_else(bad)?;
        let idx: usize = idx.trim().parse().map_err(|_| bad())?;
        let omega = self.omega.get(idx).ok_or_else(bad)?;
        let word: Vec<usize> = if word.trim().is_empty() {
            Vec::new()
        } else {
            word.split(',').map(|c| c.trim().parse().map_err(|_| bad())).collect::<Result<_>>()?
        };
        Ok(omega.mul(&self.from_word(&word)?))
    }

    /// Bruhat order; elements in different length-zero components are incomparable.
    pub fn bruhat_leq(&self, x: &AffineElt, y: &AffineElt) -> bool {
        let (lx, ly) = (self.length(x), self.length(y));
        if lx > ly {
            return false;
        }
        if ly == 0 {
            return x == y;
        }
        if lx == 0 {
            return self.omega_part(x) == self.omega_part(y);
        }
        // Lifting property along a right descent s of y: x ≤ y iff min(x, xs) ≤ ys.
        let i = self.gen_indices().find(|&i| self.is_right_descent(y, i)).expect("descent");
        let ys = y.mul(&self.gens[i]);
        let xs = x.mul(&self.gens[i]);
        if self.length(&xs) < lx {
            self.bruhat_leq(&xs, &ys)
        } else {
            self.bruhat_leq(x, &ys)
        }
    }

    /// Shortest and longest elements of `xW_S`.
    pub fn coset_extrema(&self, x: &AffineElt, subset: &[usize]) -> (AffineElt, AffineElt) {
        let mut lo = x.clone();
        'down: loop {
            for &i in subset {
                if self.is_right_descent(&lo, i) {
                    lo = lo.mul(&self.gens[i]);
                    continue 'down;
                }
            }
            break;
        }
        let hi = lo.mul(&self.longest_in(subset));
        (lo, hi)
    }

    pub fn is_longest_in_coset(&self, x: &AffineElt, subset: &[usize]) -> bool {
        subset.iter().all(|&i| self.is_right_descent(x, i))
    }

    pub fn is_shortest_in_coset(&self, x: &AffineElt, subset: &[usize]) -> bool {
        subset.iter().all(|&i| !self.is_right_descent(x, i))
    }

    /// All elements of length `≤ max_len` passing `filter`, sorted by length and then encoding.
    pub fn enumerate(&self, max_len: usize, filter: &CosetFilter) -> Result<Vec<AffineElt>> {
        self.enumerate_guarded(max_len, filter, DEFAULT_ENUMERATION_GUARD)
    }

    pub fn enumerate_guarded(&self, max_len: usize, filter: &CosetFilter, guard: usize) -> Result<Vec<AffineElt>> {
        if max_len > guard {
            return Err(Error::GuardExceeded { requested: max_len, guard });
        }
        let mut all: Vec<AffineElt> = self.omega.clone();
        let mut level: Vec<AffineElt> = self.omega.clone();
        let mut seen: HashSet<AffineElt> = all.iter().cloned().collect();
        for l in 1..=max_len {
            let mut next = Vec::new();
            for x in &level {
                for s in &self.gens {
                    let y = x.mul(s);
                    if self.length(&y) == l && seen.insert(y.clone()) {
                        next.push(y);
                    }
                }
            }
            all.extend(next.iter().cloned());
            level = next;
        }
        let keep = |x: &AffineElt| match filter {
            CosetFilter::All => true,
            CosetFilter::LongestInWP(s) => self.is_longest_in_coset(x, s),
            CosetFilter::ShortestInWS(s) => self.is_shortest_in_coset(x, s),
        };
        let mut out: Vec<(usize, Decomposition, AffineElt)> = all
            .into_iter()
            .filter(|x| keep(x))
            .map(|x| (self.length(&x), (*self.decompose(&x)).clone(), x))
            .collect();
        out.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
        Ok(out.into_iter().map(|t| t.2).collect())
    }

    /// `w₀`, `w_{0,P}`, `w̲₀` and `u_Ḡ = w̲₀⁻¹ w₀`.
    pub fn special_elements(&self, s: &[usize], underline_s: &[usize]) -> Result<SpecialElements> {
        for &i in s.iter().chain(underline_s) {
            if i == 0 || i > self.rank() {
                return Err(Error::BadGenerator(i));
            }
        }
        if let Some(i) = s.iter().find(|i| !underline_s.contains(i)) {
            return Err(Error::Invalid(format!("simple root {i} of L is not in the underline subset")));
        }
        let w0 = self.longest_in(&(1..=self.rank()).collect::<Vec<_>>());
        let underline_w0 = self.longest_in(underline_s);
        let u = underline_w0.inverse().mul(&w0);
        Ok(SpecialElements { w0_p: self.longest_in(s), w0, underline_w0, u })
    }

    /// `θ* = −w₀(θ)`.
    pub fn theta_star(&self, theta: &Weight) -> Weight {
        let w0 = self.longest_in(&(1..=self.rank()).collect::<Vec<_>>());
        w0.w.apply(theta).neg()
    }

    /// The p-dilated action `x.μ` for `x = w·t_ζ`: `μ ↦ w·(μ − pζ)`.
    pub fn dot_action(&self, x: &AffineElt, mu: &Weight, p: i64) -> Result<Weight> {
        self.check(x)?;
        self.datum.check_weight(mu)?;
        let shifted = mu.sub(&x.zeta.scaled(p)).add(&self.rho);
        Ok(x.w.apply(&shifted).sub(&self.rho))
    }

    /// `μ_x = x⁻¹.μ°`, with `μ°` required to lie in the closed antidominant p-alcove.
    pub fn mu_x(&self, x: &AffineElt, mu0: &Weight, p: i64) -> Result<Weight> {
        if !self.datum.in_antidominant_alcove(mu0, p)? {
            return Err(Error::OutsideAlcove { p });
        }
        self.dot_action(&x.inverse(), mu0, p)
    }

    /// The default `μ° = −2ρ`.
    pub fn default_mu0(&self) -> Weight {
        self.rho.scaled(-2)
    }

    /// Splits `x = u·x̲` with `u ∈ W` shortest in `uW_Ḡ` and `x̲ ∈ W_Ḡ ⋉ X`.
    pub fn split_underline(&self, x: &AffineElt, underline_s: &[usize]) -> (AffineElt, AffineElt) {
        let fin = AffineElt::new(x.w.clone(), Weight::zero(self.rank()));
        let (u, _) = self.coset_extrema(&fin, underline_s);
        let rest = u.inverse().mul(x);
        (u, rest)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a1() -> AffineWeyl {
        AffineWeyl::from_label("A1").unwrap()
    }

    fn t(g: &AffineWeyl, c: &[i64]) -> AffineElt {
        g.translation(&Weight::new(c.iter().copied())).unwrap()
    }

    #[test]
    fn a1_lengths() {
        let g = a1();
        let s = g.finite(&[1]).unwrap();
        assert_eq!(g.length(&g.identity()), 0);
        assert_eq!(g.length(&t(&g, &[1])), 1);
        assert_eq!(g.length(&s.mul(&t(&g, &[-1]))), 0);
        assert_eq!(g.length(g.gen(0).unwrap()), 1);
        assert_eq!(g.omega().len(), 2);
        assert_eq!(g.omega()[1], s.mul(&t(&g, &[-1])));
    }

    #[test]
    fn a1_products() {
        let g = a1();
        let s = g.finite(&[1]).unwrap();
        assert_eq!(t(&g, &[1]).mul(&t(&g, &[1])), t(&g, &[2]));
        assert!(s.mul(&s).is_identity());
        let st = s.mul(&t(&g, &[1]));
        assert_eq!(st.inverse(), st);
        assert!(st.mul(&st.inverse()).is_identity());
    }

    #[test]
    fn a1_decompose() {
        let g = a1();
        let d = g.decompose(&g.identity());
        assert_eq!((d.omega, d.word.len()), (0, 0));
        assert_eq!(*g.decompose(&g.omega()[1]), Decomposition { omega: 1, word: vec![] });
        let d = g.decompose(&t(&g, &[1]));
        assert_eq!(d.omega, 1);
        assert_eq!(d.word.len(), 1);
        let back = g.omega()[d.omega].mul(&g.from_word(&[d.word[0] as usize]).unwrap());
        assert_eq!(back, t(&g, &[1]));
        let x = g.from_word(&[0, 1, 0]).unwrap();
        assert_eq!(g.encode(&x), "ω0|0,1,0");
        assert_eq!(g.parse("ω0|0,1,0").unwrap(), x);
        assert_eq!(g.parse("w0|1,1,0,1,0").unwrap(), x);
    }

    #[test]
    fn bruhat_examples() {
        let g = a1();
        let s = g.finite(&[1]).unwrap();
        assert!(g.bruhat_leq(&g.identity(), &s));
        assert!(g.bruhat_leq(&s, &s));
        assert!(g.bruhat_leq(&t(&g, &[1]), &s.mul(&t(&g, &[1]))));
        assert!(!g.bruhat_leq(&g.identity(), &g.omega()[1]));
        assert!(!g.bruhat_leq(&s, &g.identity()));
    }

    #[test]
    fn coset_examples() {
        let g = AffineWeyl::from_label("A2").unwrap();
        let s1 = g.finite(&[1]).unwrap();
        let s2 = g.finite(&[2]).unwrap();
        assert_eq!(g.coset_extrema(&g.identity(), &[1]), (g.identity(), s1.clone()));
        assert_eq!(g.coset_extrema(&s1, &[1]), (g.identity(), s1.clone()));
        assert_eq!(g.coset_extrema(&s2.mul(&s1), &[1]), (s2.clone(), s2.mul(&s1)));
    }

    #[test]
    fn enumerate_examples() {
        let g = a1();
        assert_eq!(g.enumerate(0, &CosetFilter::All).unwrap().len(), 2);
        assert_eq!(g.enumerate(1, &CosetFilter::All).unwrap().len(), 6);
        assert_eq!(g.enumerate(0, &CosetFilter::LongestInWP(vec![])).unwrap().len(), 2);
        assert!(matches!(g.enumerate(21, &CosetFilter::All), Err(Error::GuardExceeded { .. })));
        // Brute force over (w, ζ) with |ζ| ≤ 2.
        let mut brute = 0;
        for w in g.finite_elements() {
            for z in -2..=2 {
                if g.length(&w.mul(&t(&g, &[z]))) <= 1 {
                    brute += 1;
                }
            }
        }
        assert_eq!(brute, 6);
    }

    #[test]
    fn special_element_examples() {
        let g = a1();
        let sp = g.special_elements(&[], &[]).unwrap();
        assert_eq!(sp.u, g.finite(&[1]).unwrap());
        assert_eq!(g.theta_star(&Weight::new([1])), Weight::new([1]));
        let g2 = AffineWeyl::from_label("A2").unwrap();
        assert!(g2.special_elements(&[], &[1, 2]).unwrap().u.is_identity());
        assert_eq!(g2.theta_star(&Weight::new([1, 0])), Weight::new([0, 1]));
    }

    #[test]
    fn dot_action_examples() {
        let g = a1();
        let s = g.finite(&[1]).unwrap();
        let m = Weight::new([-2]);
        assert_eq!(g.dot_action(&g.identity(), &m, 5).unwrap(), m);
        assert_eq!(g.dot_action(&t(&g, &[1]), &m, 5).unwrap(), Weight::new([-7]));
        assert_eq!(g.dot_action(&s.mul(&t(&g, &[1])), &m, 5).unwrap(), Weight::new([5]));
        assert_eq!(g.mu_x(&g.identity(), &m, 5).unwrap(), m);
        assert_eq!(g.mu_x(&s, &m, 5).unwrap(), Weight::new([0]));
        assert_eq!(g.mu_x(&t(&g, &[1]), &m, 5).unwrap(), Weight::new([3]));
        assert!(matches!(g.mu_x(&s, &Weight::new([0]), 5), Err(Error::OutsideAlcove { p: 5 })));
        // s₀ reflects through the upper wall ⟨μ+ρ, α₀∨⟩ = −p.
        assert_eq!(g.dot_action(g.gen(0).unwrap(), &m, 5).unwrap(), Weight::new([-10]));
    }

    #[test]
    fn omega_counts() {
        for (label, n) in [("A1", 2), ("A2", 3), ("B2", 2), ("G2", 1), ("A3", 4), ("C3", 2), ("D4", 4), ("A1xA1", 4)] {
            assert_eq!(AffineWeyl::from_label(label).unwrap().omega().len(), n, "{label}");
        }
    }

    #[test]
    fn products_have_one_affine_node_per_factor() {
        let g = AffineWeyl::from_label("B2xA1").unwrap();
        assert_eq!(g.num_gens(), 5);
        for i in g.gen_indices() {
            assert_eq!(g.length(g.gen(i).unwrap()), 1);
        }
    }
}
