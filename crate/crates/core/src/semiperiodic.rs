//! Shifted bar involutions and θ-stabilized (semiperiodic) KL data.
//!
//! Limits are never represented symbolically: every stabilized quantity is a
//! value together with the chain window on which it was observed constant.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::Ratio;

use crate::affweyl::{AffineElt, AffineWeyl};
use crate::antispherical::ParabolicModule;
use crate::error::{Error, Result};
use crate::hecke::{HeckeAlgebra, HeckeElt};
use crate::kl::KLCache;
use crate::laurent::{Coeff, Laurent};
use crate::rootdata::Weight;

pub const DEFAULT_THETA_BUDGET: usize = 8;

/// A standard Levi `Ḡ` given by simple indices, with the chain direction in `𝔛⁺(Ḡ)`.
#[derive(Clone, Debug)]
pub struct UnderlineDatum {
    subset: Vec<usize>,
    u: AffineElt,
    generators: Vec<Weight>,
    theta_gen: Weight,
    /// `(α∨, ⟨θ_gen, α∨⟩)` for positive roots `α` outside `Ḡ`.
    outside: Vec<(Weight, i64)>,
}

impl UnderlineDatum {
    pub fn new(g: &AffineWeyl, subset: &[usize]) -> Result<Self> {
        let d = g.datum();
        let mut subset = subset.to_vec();
        subset.sort_unstable();
        subset.dedup();
        if let Some(&i) = subset.iter().find(|&&i| i == 0 || i > d.rank()) {
            return Err(Error::BadGenerator(i));
        }
        let fw = d.fundamental_weights().ok_or_else(|| Error::Invalid("datum is not semisimple".into()))?;
        let generators: Vec<Weight> =
            (1..=d.rank()).filter(|i| !subset.contains(i)).map(|i| fw[i - 1].clone()).collect();
        let theta_gen = generators.iter().fold(Weight::zero(d.lattice_rank()), |a, b| a.add(b));
        let inside = d.roots_supported_on(&subset);
        let outside = (0..d.num_positive_roots())
            .filter(|a| !inside.contains(a))
            .map(|a| {
                let c = d.positive_coroots_x()[a].clone();
                let k = theta_gen.dot(&c);
                (c, k)
            })
            .collect();
        let u = g.special_elements(&[], &subset)?.u;
        Ok(UnderlineDatum { subset, u, generators, theta_gen, outside })
    }

    pub fn subset(&self) -> &[usize] {
        &self.subset
    }

    /// `u_Ḡ = w̲₀⁻¹ w₀`.
    pub fn u(&self) -> &AffineElt {
        &self.u
    }

    /// Fundamental weights outside the subset; they generate `𝔛⁺(Ḡ)`.
    pub fn generators(&self) -> &[Weight] {
        &self.generators
    }

    pub fn theta_gen(&self) -> &Weight {
        &self.theta_gen
    }

    pub fn theta(&self, k: i64) -> Weight {
        self.theta_gen.scaled(k)
    }

    /// Whether `θ` pairs to zero with every coroot of `Ḡ`.
    pub fn in_lattice(&self, g: &AffineWeyl, theta: &Weight) -> bool {
        self.subset.iter().all(|&i| g.datum().pair_simple(theta, i) == 0)
    }

    /// Whether `θ ∈ 𝔛⁺(Ḡ)`.
    pub fn is_dominant(&self, g: &AffineWeyl, theta: &Weight) -> bool {
        self.in_lattice(g, theta) && (1..=g.rank()).all(|i| g.datum().pair_simple(theta, i) >= 0)
    }

    /// Smallest `k ≥ 0` with `⟨ζ + kθ, α∨⟩ ≥ 0` for every positive `α` outside `Ḡ`,
    /// where `x = w·t_ζ`; from there on lengths add under further shifts.
    pub fn k_start(&self, x: &AffineElt) -> i64 {
        let mut k = 0;
        for (c, step) in &self.outside {
            let z = x.zeta().dot(c);
            if z < 0 && *step > 0 {
                k = k.max((-z + step - 1) / step);
            }
        }
        k
    }
}

pub fn shift(x: &AffineElt, theta: &Weight) -> AffineElt {
    AffineElt::new(x.w().clone(), x.zeta().add(theta))
}

/// A value observed constant at `θ = window.0` and `θ = window.1`, and again at `audit`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stabilized<T> {
    pub value: T,
    pub theta_at_stabilization: Weight,
    pub window: (Weight, Weight),
    pub audit: Weight,
}

pub type StabilizedPoly<R = BigInt> = Stabilized<Laurent<R>>;

impl<T> Stabilized<T> {
    pub fn certificate(&self) -> String {
        format!("{};{};{}", self.window.0, self.window.1, self.audit)
    }
}

pub struct Semiperiodic<R: Coeff = BigInt> {
    module: Arc<ParabolicModule<R>>,
    datum: UnderlineDatum,
    budget: usize,
}

impl<R: Coeff> std::fmt::Debug for Semiperiodic<R> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Semiperiodic").field("module", &self.module).field("underline", &self.datum.subset).finish()
    }
}

impl<R: Coeff> Semiperiodic<R> {
    /// The parabolic subset of `module` must lie inside `underline`.
    pub fn new(module: Arc<ParabolicModule<R>>, underline: &[usize]) -> Result<Self> {
        let datum = UnderlineDatum::new(module.group(), underline)?;
        if let Some(i) = module.subset().iter().find(|i| !datum.subset.contains(i)) {
            return Err(Error::Invalid(format!("parabolic index {i} is not in the underline subset")));
        }
        Ok(Semiperiodic { module, datum, budget: DEFAULT_THETA_BUDGET })
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget.max(2);
        self
    }

    pub fn module(&self) -> &Arc<ParabolicModule<R>> {
        &self.module
    }

    pub fn algebra(&self) -> &Arc<HeckeAlgebra<R>> {
        self.module.algebra()
    }

    pub fn group(&self) -> &Arc<AffineWeyl> {
        self.module.group()
    }

    pub fn datum(&self) -> &UnderlineDatum {
        &self.datum
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    fn check_theta(&self, theta: &Weight) -> Result<()> {
        self.group().datum().check_weight(theta)?;
        if !self.datum.in_lattice(self.group(), theta) {
            return Err(Error::Invalid(format!("θ = {theta} does not vanish on the coroots of the Levi")));
        }
        Ok(())
    }

    /// `ā^θ = bar(a X_θ) X_{−θ}`.
    pub fn bar_theta(&self, a: &HeckeElt<R>, theta: &Weight) -> Result<HeckeElt<R>> {
        self.check_theta(theta)?;
        let alg = self.algebra();
        let ax = alg.mul_x_theta_right(a, theta)?;
        alg.mul_x_theta_right(&alg.bar(&ax)?, &theta.neg())
    }

    /// `H_u X_{−θ*} H_u⁻¹ X_{−θ}` with `u = u_Ḡ`.
    pub fn bar_one_closed_form(&self, theta: &Weight) -> Result<HeckeElt<R>> {
        self.check_theta(theta)?;
        let alg = self.algebra();
        let u = self.datum.u.clone();
        let star = self.group().theta_star(theta);
        let left = alg.mul_x_theta_right(&alg.basis(&u), &star.neg())?;
        let mid = alg.mul_inverse_right(&left, &u)?;
        alg.mul_x_theta_right(&mid, &theta.neg())
    }

    /// Walks `k = k0, k0+1, …` until two consecutive values agree and a third confirms.
    fn stabilize<T: PartialEq + Clone>(
        &self,
        k0: i64,
        what: impl Fn() -> String,
        mut f: impl FnMut(i64) -> Result<T>,
    ) -> Result<Stabilized<T>> {
        let theta = |k: i64| self.datum.theta(k);
        if self.datum.theta_gen.is_zero() {
            let value = f(0)?;
            let z = theta(0);
            return Ok(Stabilized { value, theta_at_stabilization: z.clone(), window: (z.clone(), z.clone()), audit: z });
        }
        let mut prev = f(k0)?;
        let mut k = k0;
        let last = k0 + self.budget as i64;
        while k < last {
            let cur = f(k + 1)?;
            if cur == prev {
                let audit = f(k + 2)?;
                if audit == cur {
                    return Ok(Stabilized {
                        value: cur,
                        theta_at_stabilization: theta(k),
                        window: (theta(k), theta(k + 1)),
                        audit: theta(k + 2),
                    });
                }
                prev = audit;
                k += 2;
            } else {
                prev = cur;
                k += 1;
            }
        }
        Err(Error::BudgetExhausted { steps: self.budget, detail: Some(format!("{} did not stabilize by θ = {}", what(), theta(last))) })
    }

    /// `H^∞_x = H_{x t_θ} X_θ⁻¹` for large `θ ∈ 𝔛⁺(Ḡ)`.
    pub fn h_infty(&self, x: &AffineElt) -> Result<Stabilized<HeckeElt<R>>> {
        let g = self.group().clone();
        g.check(x)?;
        let alg = self.algebra().clone();
        self.stabilize(self.datum.k_start(x), || format!("H∞ of {}", g.encode(x)), |k| {
            let th = self.datum.theta(k);
            alg.mul_standard_left(&shift(x, &th), &alg.x_theta(&th.neg())?)
        })
    }

    /// First chain index at which both shifted elements are longest in their cosets.
    fn k_members(&self, xs: &[&AffineElt]) -> Result<i64> {
        let g = self.group();
        let mut k = xs.iter().map(|x| self.datum.k_start(x)).max().unwrap_or(0);
        if self.datum.theta_gen.is_zero() {
            return Ok(0);
        }
        let limit = k + self.budget as i64;
        while !xs.iter().all(|x| g.is_longest_in_coset(&shift(x, &self.datum.theta(k)), self.module.subset())) {
            k += 1;
            if k > limit {
                return Err(Error::BudgetExhausted {
                    steps: self.budget,
                    detail: Some("shifted elements never became longest in their cosets".into()),
                });
            }
        }
        Ok(k)
    }

    /// `c^{P,∞}_{xy}`: the eventual value of `c^P_{x t_θ, y t_θ}`.
    pub fn semiperiodic_kl(&self, x: &AffineElt, y: &AffineElt, cache: &KLCache<R>) -> Result<StabilizedPoly<R>> {
        self.module.check_member(x)?;
        self.module.check_member(y)?;
        let g = self.group().clone();
        let k0 = self.k_members(&[x, y])?;
        self.stabilize(k0, || format!("c∞ of ({}, {})", g.encode(x), g.encode(y)), |k| {
            let th = self.datum.theta(k);
            self.module.parabolic_kl(&shift(x, &th), &shift(y, &th), cache)
        })
    }

    /// `x ⪯^∞ y`: Bruhat order after a large shift.
    pub fn preceq_infty(&self, x: &AffineElt, y: &AffineElt) -> Result<Stabilized<bool>> {
        let g = self.group().clone();
        g.check(x)?;
        g.check(y)?;
        let k0 = self.datum.k_start(x).max(self.datum.k_start(y));
        self.stabilize(k0, || format!("⪯∞ of ({}, {})", g.encode(x), g.encode(y)), |k| {
            let th = self.datum.theta(k);
            Ok(g.bruhat_leq(&shift(x, &th), &shift(y, &th)))
        })
    }

    /// Coefficients `c^∞_{xy}` for all `y` with `degree(y) ≥ floor`, sorted by `y`.
    pub fn c_infty_terms(
        &self,
        x: &AffineElt,
        floor: Ratio<i64>,
        degree: &dyn Fn(&AffineElt) -> Result<Ratio<i64>>,
        cache: &KLCache<R>,
    ) -> Result<Stabilized<Vec<(AffineElt, Laurent<R>)>>> {
        self.module.check_member(x)?;
        let g = self.group().clone();
        let k0 = self.k_members(&[x])?;
        self.stabilize(k0, || format!("C∞ of {} above degree {floor}", g.encode(x)), |k| {
            let th = self.datum.theta(k);
            let back = th.neg();
            let c = self.module.kl_element(&shift(x, &th), cache)?;
            let mut out = Vec::new();
            for (z, p) in c.iter() {
                let y = shift(z, &back);
                if degree(&y)? >= floor {
                    out.push((y, p.clone()));
                }
            }
            out.sort_by(|a, b| a.0.cmp(&b.0));
            Ok(out)
        })
    }

    /// `y ↦ c^∞_{xy}(1)` for all `y` with `degree(y) ≥ floor`.
    pub fn c_infty_support(
        &self,
        x: &AffineElt,
        floor: Ratio<i64>,
        degree: &dyn Fn(&AffineElt) -> Result<Ratio<i64>>,
        cache: &KLCache<R>,
    ) -> Result<Stabilized<Vec<(AffineElt, R)>>> {
        let s = self.c_infty_terms(x, floor, degree, cache)?;
        Ok(Stabilized {
            value: s.value.iter().map(|(y, p)| (y.clone(), p.eval_at_one())).filter(|(_, c)| !c.is_zero()).collect(),
            theta_at_stabilization: s.theta_at_stabilization,
            window: s.window,
            audit: s.audit,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affweyl::CosetFilter;

    fn torus(label: &str) -> Semiperiodic {
        let g = Arc::new(AffineWeyl::from_label(label).unwrap());
        let m = ParabolicModule::new(Arc::new(HeckeAlgebra::new(g)), &[]).unwrap();
        Semiperiodic::new(Arc::new(m), &[]).unwrap()
    }

    fn w(c: &[i64]) -> Weight {
        Weight::new(c.iter().copied())
    }

    #[test]
    fn bar_theta_basics() {
        let sp = torus("A1");
        let g = sp.group().clone();
        let alg = sp.algebra().clone();
        let a = alg.basis(&g.from_word(&[0, 1]).unwrap());
        assert_eq!(sp.bar_theta(&a, &w(&[0])).unwrap(), alg.bar(&a).unwrap());
        for t in -2..=2 {
            let th = w(&[t]);
            assert_eq!(sp.bar_theta(&sp.bar_theta(&a, &th).unwrap(), &th).unwrap(), a);
            assert_eq!(sp.bar_theta(&alg.one(), &th).unwrap(), sp.bar_one_closed_form(&th).unwrap());
        }
    }

    #[test]
    fn h_infty_examples() {
        let sp = torus("A1");
        let g = sp.group().clone();
        let e = sp.h_infty(&g.identity()).unwrap();
        assert_eq!(e.value, sp.algebra().one());
        assert_eq!(e.window.0, w(&[0]));
        let s = g.gen(1).unwrap().clone();
        assert_eq!(sp.h_infty(&s).unwrap().value, sp.algebra().basis(&s));
        let t1 = g.translation(&w(&[-1])).unwrap();
        let h = sp.h_infty(&t1).unwrap();
        assert_eq!(h.window.0, w(&[1]));
    }

    #[test]
    fn semiperiodic_diagonal_and_order() {
        let sp = torus("A1");
        let g = sp.group().clone();
        let cache = KLCache::for_group(&g);
        for x in g.enumerate(4, &CosetFilter::All).unwrap() {
            assert!(sp.semiperiodic_kl(&x, &x, &cache).unwrap().value.is_one());
            assert!(sp.preceq_infty(&x, &x).unwrap().value);
        }
        let s = g.gen(1).unwrap().clone();
        assert!(sp.preceq_infty(&g.identity(), &s).unwrap().value);
        assert!(!sp.preceq_infty(&g.identity(), &g.omega()[1]).unwrap().value);
    }

    #[test]
    fn full_levi_has_trivial_chain() {
        let g = Arc::new(AffineWeyl::from_label("A2").unwrap());
        let m: Arc<ParabolicModule> = Arc::new(ParabolicModule::new(Arc::new(HeckeAlgebra::new(g.clone())), &[1]).unwrap());
        let sp = Semiperiodic::new(m.clone(), &[1, 2]).unwrap();
        let cache = m.new_cache();
        let x = g.from_word(&[0, 2, 1]).unwrap();
        let y = g.gen(1).unwrap().clone();
        let got = sp.semiperiodic_kl(&x, &y, &cache).unwrap();
        assert_eq!(got.value, m.parabolic_kl(&x, &y, &cache).unwrap());
        assert!(got.window.0.is_zero());
    }
}
