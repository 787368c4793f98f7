//! χ-Weyl characters and the dimension/character formulas for modular simples.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::affweyl::{AffineElt, AffineWeyl};
use crate::antispherical::{CellVerdict, Confidence, ParabolicModule};
use crate::error::{Error, Result};
use crate::hecke::HeckeAlgebra;
use crate::kl::KLCache;
use crate::rootdata::{Degree, NilpotentAnalysis, NilpotentDatum, Weight};
use crate::semiperiodic::{Semiperiodic, Stabilized};

pub const DEFAULT_CELL_WINDOW: usize = 6;

/// A ν-graded character: exact coefficients at degrees `≥ floor` (all degrees when `floor` is `None`).
#[derive(Clone, PartialEq, Eq)]
pub struct GradedCharacter {
    coeffs: BTreeMap<Degree, BigInt>,
    floor: Option<Degree>,
}

impl GradedCharacter {
    pub fn zero() -> Self {
        GradedCharacter { coeffs: BTreeMap::new(), floor: None }
    }

    pub fn monomial(c: BigInt, degree: Degree) -> Self {
        let mut g = Self::zero();
        g.add_term(degree, &c);
        g
    }

    pub fn constant(c: BigInt) -> Self {
        Self::monomial(c, Degree::zero())
    }

    pub fn floor(&self) -> Option<Degree> {
        self.floor
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, d: Degree) -> BigInt {
        self.coeffs.get(&d).cloned().unwrap_or_default()
    }

    /// Terms by decreasing degree.
    pub fn terms(&self) -> impl Iterator<Item = (&Degree, &BigInt)> {
        self.coeffs.iter().rev()
    }

    pub fn add_term(&mut self, d: Degree, c: &BigInt) {
        if c.is_zero() || self.floor.is_some_and(|f| d < f) {
            return;
        }
        let e = self.coeffs.entry(d).or_default();
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&d);
        }
    }

    pub fn add_scaled(&mut self, other: &GradedCharacter, c: &BigInt) {
        for (d, a) in &other.coeffs {
            self.add_term(*d, &(a * c));
        }
        self.floor = match (self.floor, other.floor) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
        if let Some(f) = self.floor {
            self.coeffs.retain(|d, _| *d >= f);
        }
    }

    pub fn mul(&self, other: &GradedCharacter) -> GradedCharacter {
        if self.floor.is_some() || other.floor.is_some() {
            panic!("products are only formed between exact characters");
        }
        let mut out = Self::zero();
        for (d1, a) in &self.coeffs {
            for (d2, b) in &other.coeffs {
                out.add_term(d1 + d2, &(a * b));
            }
        }
        out
    }

    pub fn shift(&self, by: Degree) -> GradedCharacter {
        GradedCharacter {
            coeffs: self.coeffs.iter().map(|(d, c)| (d + by, c.clone())).collect(),
            floor: self.floor.map(|f| f + by),
        }
    }

    /// Drops degrees below `floor` and records it.
    pub fn truncated(&self, floor: Degree) -> GradedCharacter {
        let floor = self.floor.map_or(floor, |f| f.max(floor));
        GradedCharacter { coeffs: self.coeffs.range(floor..).map(|(d, c)| (*d, c.clone())).collect(), floor: Some(floor) }
    }

    /// Value at `t = 1` (meaningful for exact characters).
    pub fn total(&self) -> BigInt {
        self.coeffs.values().sum()
    }
}

impl fmt::Display for GradedCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            write!(f, "0")?;
        }
        for (k, (d, c)) in self.terms().enumerate() {
            let sep = if k == 0 {
                if c.is_negative() { "-" } else { "" }
            } else if c.is_negative() {
                " - "
            } else {
                " + "
            };
            let a = c.abs();
            if d.is_zero() {
                write!(f, "{sep}{a}")?;
            } else if a.is_one() {
                write!(f, "{sep}t^{d}")?;
            } else {
                write!(f, "{sep}{a}*t^{d}")?;
            }
        }
        if let Some(fl) = self.floor {
            write!(f, " + O(t^{fl})")?;
        }
        Ok(())
    }
}

impl fmt::Debug for GradedCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `N · p^exponent`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimResult {
    pub exponent: usize,
    pub factor: BigInt,
    pub cell: CellVerdict,
}

impl DimResult {
    pub fn value(&self, p: i64) -> BigInt {
        BigInt::from(p).pow(self.exponent as u32) * &self.factor
    }
}

#[derive(Clone, Debug)]
pub struct CharResult {
    pub character: GradedCharacter,
    pub terms: Stabilized<Vec<(AffineElt, BigInt)>>,
    pub cell: CellVerdict,
}

/// Group, nilpotent data, `p` and `μ°`, plus the module structures they determine.
pub struct Setup {
    group: Arc<AffineWeyl>,
    nilpotent: NilpotentDatum,
    analysis: NilpotentAnalysis,
    p: i64,
    mu0: Weight,
    module: Arc<ParabolicModule>,
    semiperiodic: Semiperiodic,
    levi_group: Option<LeviGroup>,
    window: usize,
}

/// The derived subsystem of `Ḡ` with its own affine group, for cell questions.
struct LeviGroup {
    positions: Vec<usize>,
    module: ParabolicModule,
    cache: KLCache,
}

impl fmt::Debug for Setup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Setup({})", self.fingerprint())
    }
}

impl Setup {
    pub fn new(group: Arc<AffineWeyl>, nilpotent: NilpotentDatum, p: i64, mu0: Option<Weight>) -> Result<Self> {
        let d = group.datum();
        let analysis = nilpotent.analyze(d)?;
        let mu0 = mu0.unwrap_or_else(|| group.default_mu0());
        if !d.in_antidominant_alcove(&mu0, p)? {
            return Err(Error::OutsideAlcove { p });
        }
        let alg = Arc::new(HeckeAlgebra::new(group.clone()));
        let module = Arc::new(ParabolicModule::new(alg.clone(), analysis.levi.subset())?);
        let semiperiodic = Semiperiodic::new(module.clone(), &analysis.underline_subset)?;
        let underline = &analysis.underline_subset;
        let levi_group = if underline.is_empty() {
            None
        } else {
            let sub = d.projected_subsystem(underline)?;
            let lg = Arc::new(AffineWeyl::new(sub)?);
            let positions: Vec<usize> = underline.clone();
            let s: Vec<usize> = analysis
                .levi
                .subset()
                .iter()
                .map(|i| positions.iter().position(|j| j == i).expect("L inside Ḡ") + 1)
                .collect();
            let m = ParabolicModule::new(Arc::new(HeckeAlgebra::new(lg)), &s)?;
            let cache = m.new_cache();
            Some(LeviGroup { positions, module: m, cache })
        };
        Ok(Setup { group, nilpotent, analysis, p, mu0, module, semiperiodic, levi_group, window: DEFAULT_CELL_WINDOW })
    }

    pub fn with_window(mut self, window: usize) -> Self {
        self.window = window;
        self
    }

    pub fn with_theta_budget(mut self, budget: usize) -> Self {
        self.semiperiodic = Semiperiodic::new(self.module.clone(), &self.analysis.underline_subset)
            .expect("validated at construction")
            .with_budget(budget);
        self
    }

    pub fn group(&self) -> &Arc<AffineWeyl> {
        &self.group
    }

    pub fn analysis(&self) -> &NilpotentAnalysis {
        &self.analysis
    }

    pub fn module(&self) -> &Arc<ParabolicModule> {
        &self.module
    }

    pub fn semiperiodic(&self) -> &Semiperiodic {
        &self.semiperiodic
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn mu0(&self) -> &Weight {
        &self.mu0
    }

    pub fn is_distinguished(&self) -> bool {
        self.nilpotent.nu.is_none()
    }

    /// Compact description of every input that affects results.
    pub fn fingerprint(&self) -> String {
        let h: Vec<String> = self.nilpotent.h_weights.iter().map(|x| x.to_string()).collect();
        let nu = match &self.nilpotent.nu {
            None => "-".to_string(),
            Some(n) => n.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","),
        };
        format!("{}|h={}|nu={nu}|p={}|mu0={}", self.group.datum().label(), h.join(","), self.p, self.mu0)
    }

    /// A cache suitable for this setup's parabolic module.
    pub fn new_cache(&self) -> KLCache {
        self.module.new_cache()
    }

    /// `μ_x = x⁻¹.μ°`.
    pub fn mu(&self, x: &AffineElt) -> Result<Weight> {
        self.group.mu_x(x, &self.mu0, self.p)
    }

    /// `⟨μ_x, ν⟩` (zero without `ν`).
    pub fn degree(&self, x: &AffineElt) -> Result<Degree> {
        match &self.nilpotent.nu {
            None => Ok(Degree::zero()),
            Some(nu) => self.group.datum().pair_coweight(&self.mu(x)?, nu),
        }
    }

    /// `ch_{m⁻}`: a factor `p` per root of `m` orthogonal to `ν`, else `1 + t^{−n} + … + t^{−(p−1)n}`.
    pub fn ch_m_minus(&self) -> GradedCharacter {
        let d = self.group.datum();
        let inside = d.roots_supported_on(self.analysis.levi.subset());
        let mut out = GradedCharacter::constant(BigInt::one());
        for a in (0..d.num_positive_roots()).filter(|a| !inside.contains(a)) {
            let n = self.nilpotent.nu.as_ref().map_or(0, |nu| d.root_pair_coweight(a, nu));
            let factor = if n == 0 {
                GradedCharacter::constant(BigInt::from(self.p))
            } else {
                let mut f = GradedCharacter::zero();
                for j in 0..self.p {
                    f.add_term(Degree::from_integer(-j * n), &BigInt::one());
                }
                f
            };
            out = out.mul(&factor);
        }
        out
    }

    /// `ch(W^χ(μ_y)) = ch_{m⁻} · d_L(μ_y) · t^{⟨μ_y, ν⟩}`.
    pub fn chi_weyl_character(&self, y: &AffineElt) -> Result<GradedCharacter> {
        let mu = self.mu(y)?;
        let dl = self.analysis.levi.weyl_dim(&mu)?;
        let ch = self.ch_m_minus().shift(self.degree(y)?);
        let mut out = GradedCharacter::zero();
        out.add_scaled(&ch, &dl);
        Ok(out)
    }

    pub fn in_cell(&self, x: &AffineElt, cache: &KLCache) -> Result<CellVerdict> {
        let window = self.window.max(self.group.length(x) + 2);
        self.module.in_cell_cp(x, window, cache)
    }

    fn require_distinguished(&self) -> Result<()> {
        if !self.is_distinguished() {
            return Err(Error::Invalid("the distinguished formula needs a setup without ν".into()));
        }
        Ok(())
    }

    fn require_cell(&self, verdict: &CellVerdict, x: &AffineElt) -> Result<()> {
        if !verdict.member && verdict.confidence == Confidence::Certain {
            return Err(Error::NotInCell(self.group.encode(x)));
        }
        Ok(())
    }

    /// `y ↦ c^P_{xy}(1)`, i.e. `[L_x] = Σ_y c^P_{xy}(1) [W^χ(μ_y)]`.
    pub fn kclass_distinguished(&self, x: &AffineElt, cache: &KLCache) -> Result<Vec<(AffineElt, BigInt)>> {
        self.require_distinguished()?;
        let verdict = self.in_cell(x, cache)?;
        self.require_cell(&verdict, x)?;
        let c = self.module.kl_element(x, cache)?;
        Ok(c.sorted_terms(&self.group)
            .into_iter()
            .map(|(y, p)| (y, p.eval_at_one()))
            .filter(|(_, v)| !v.is_zero())
            .collect())
    }

    /// `dim L_x = p^{dim Ge/2} · Σ_y c^P_{xy}(1) d_L(μ_y)`.
    pub fn dim_distinguished(&self, x: &AffineElt, cache: &KLCache) -> Result<DimResult> {
        self.require_distinguished()?;
        let verdict = self.in_cell(x, cache)?;
        self.require_cell(&verdict, x)?;
        let mut factor = BigInt::zero();
        for (y, c) in self.module.kl_element(x, cache)?.iter() {
            let v = c.eval_at_one();
            if !v.is_zero() {
                factor += v * self.analysis.levi.weyl_dim(&self.mu(y)?)?;
            }
        }
        if !factor.is_positive() {
            return Err(Error::Invalid(format!("non-positive dimension factor {factor} for {}", self.group.encode(x))));
        }
        Ok(DimResult { exponent: self.analysis.dim_ge_half, factor, cell: verdict })
    }

    /// Splits `x = u·x̲` and decides whether `x̲` lies in the cell of the Levi's own affine group.
    pub fn underline_cell(&self, x: &AffineElt) -> Result<CellVerdict> {
        let Some(lg) = &self.levi_group else {
            return Ok(CellVerdict { member: true, confidence: Confidence::Certain });
        };
        let (_, xu) = self.group.split_underline(x, &self.analysis.underline_subset);
        let fin = AffineElt::new(xu.w().clone(), Weight::zero(self.group.rank()));
        let word: Vec<usize> = self
            .group
            .decompose(&fin)
            .word
            .iter()
            .map(|&i| lg.positions.iter().position(|&j| j == i as usize).expect("word inside Ḡ") + 1)
            .collect();
        let zeta = Weight::new(lg.positions.iter().map(|&i| xu.zeta().coords()[i - 1]));
        let lgroup = lg.module.group();
        let projected = lgroup.finite(&word)?.mul(&lgroup.translation(&zeta)?);
        let window = self.window.max(lgroup.length(&projected) + 2);
        lg.module.in_cell_cp(&projected, window, &lg.cache)
    }

    fn general_sum(
        &self,
        x: &AffineElt,
        floor: Degree,
        cache: &KLCache,
        fault: Option<(usize, i64)>,
    ) -> Result<(GradedCharacter, Stabilized<Vec<(AffineElt, BigInt)>>)> {
        let degree = |y: &AffineElt| self.degree(y);
        let mut terms = self.semiperiodic.c_infty_support(x, floor, &degree, cache)?;
        if let Some((k, delta)) = fault {
            if let Some(t) = terms.value.get_mut(k) {
                t.1 += delta;
            }
        }
        let mut ch = GradedCharacter::zero();
        for (y, c) in &terms.value {
            ch.add_scaled(&self.chi_weyl_character(y)?, c);
        }
        Ok((ch.truncated(floor), terms))
    }

    /// `ch L_x = Σ_y c^∞_{xy}(1) ch W^χ(μ_y)`, exact at degrees `≥ floor`.
    pub fn char_general(&self, x: &AffineElt, floor: Degree, cache: &KLCache) -> Result<CharResult> {
        let verdict = self.underline_cell(x)?;
        self.require_cell(&verdict, x)?;
        let (character, terms) = self.general_sum(x, floor, cache, None)?;
        Ok(CharResult { character, terms, cell: verdict })
    }

    /// The same sum for a label outside the cell; it must vanish above `floor`.
    /// `fault = Some((k, δ))` perturbs the `k`-th coefficient by `δ`.
    pub fn vanishing_check(
        &self,
        x: &AffineElt,
        floor: Degree,
        cache: &KLCache,
        fault: Option<(usize, i64)>,
    ) -> Result<CharResult> {
        let verdict = self.underline_cell(x)?;
        if verdict.member || verdict.confidence != Confidence::Certain {
            return Err(Error::Invalid(format!("{} is not a certified non-cell label", self.group.encode(x))));
        }
        let (character, terms) = self.general_sum(x, floor, cache, fault)?;
        Ok(CharResult { character, terms, cell: verdict })
    }

    /// `x[W^χ(μ°)] = ε [W^χ(μ_{x₊})]` with `ε = (−1)^{ℓ(x) − ℓ(x₋)}`.
    pub fn weyl_sign_rule(&self, x: &AffineElt) -> Result<(i8, AffineElt)> {
        weyl_sign_rule(&self.group, self.analysis.levi.subset(), x)
    }
}

/// Closed form: `ε = (−1)^{ℓ(x) − ℓ(x₋)}` and `x₊` the longest element of `xW_P`.
pub fn weyl_sign_rule(g: &AffineWeyl, subset: &[usize], x: &AffineElt) -> Result<(i8, AffineElt)> {
    g.check(x)?;
    let (lo, hi) = g.coset_extrema(x, subset);
    let sign = if (g.length(x) - g.length(&lo)).is_multiple_of(2) { 1 } else { -1 };
    Ok((sign, hi))
}

/// Applies the letters of the canonical word of `x` one at a time, starting from
/// `(+1, w_{0,P})`: a letter either stays in the coset of the current shortest
/// representative (flipping the sign) or moves the label.
pub fn weyl_sign_rule_stepwise(g: &AffineWeyl, subset: &[usize], x: &AffineElt) -> Result<(i8, AffineElt)> {
    g.check(x)?;
    let w0p = g.longest_in(subset);
    let d = g.decompose(x);
    let mut sign = 1i8;
    let mut z = w0p.clone();
    for &i in d.word.iter().rev() {
        let s = g.gen(i as usize)?;
        let zm = z.mul(&w0p);
        let t = zm.inverse().mul(s).mul(&zm);
        if subset.iter().any(|&j| g.gen(j).map(|r| *r == t).unwrap_or(false)) {
            sign = -sign;
        } else {
            z = s.mul(&z);
        }
    }
    Ok((sign, g.omega()[d.omega].mul(&z)))
}
