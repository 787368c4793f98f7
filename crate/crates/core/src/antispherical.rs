//! The sign-induced parabolic module `ℋ ⊗_{ℋ_{W_P}} sgn`, indexed by longest
//! coset representatives, and the left cell of `w_{0,P}` inside it.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use num_bigint::BigInt;
use petgraph::algo::kosaraju_scc;
use petgraph::graph::DiGraph;

use crate::affweyl::{AffineElt, AffineWeyl, CosetFilter};
use crate::error::{Error, Result};
use crate::hecke::{Combination, HeckeAlgebra, HeckeElt};
use crate::kl::{canonical_correction, expand_in_canonical_basis, KLCache};
use crate::laurent::{Coeff, Laurent};

/// Element of the parabolic module in the basis `H^P_x`, `x ∈ W^{a,P}`.
pub type PModuleElt<R = BigInt> = Combination<R>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Confidence {
    /// The cell did not change when the window shrank by two and `x` sits well inside it.
    Certain,
    WindowLimited,
}

impl Confidence {
    pub fn as_str(self) -> &'static str {
        match self {
            Confidence::Certain => "certain",
            Confidence::WindowLimited => "window-limited",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellVerdict {
    pub member: bool,
    pub confidence: Confidence,
}

/// The left cell of `w_{0,P}` as seen inside a length window.
#[derive(Clone, Debug)]
pub struct CellReport {
    pub window: usize,
    /// Members sorted by length and canonical word.
    pub members: Vec<AffineElt>,
    /// Whether the cell computed with window `window − 2` is identical.
    pub stable: bool,
}

impl CellReport {
    pub fn contains(&self, x: &AffineElt) -> bool {
        self.members.contains(x)
    }
}

pub struct ParabolicModule<R: Coeff = BigInt> {
    alg: Arc<HeckeAlgebra<R>>,
    subset: Vec<usize>,
    w0_p: AffineElt,
    c_w0_p: HeckeElt<R>,
    cells: parking_lot::Mutex<HashMap<usize, Arc<CellReport>>>,
}

impl<R: Coeff> std::fmt::Debug for ParabolicModule<R> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ParabolicModule").field("datum", &self.group().datum().label()).field("subset", &self.subset).finish()
    }
}

impl<R: Coeff> ParabolicModule<R> {
    /// `subset` lists finite simple reflections (`1..=rank`) generating `W_P`.
    pub fn new(alg: Arc<HeckeAlgebra<R>>, subset: &[usize]) -> Result<Self> {
        let g = alg.group().clone();
        let mut subset = subset.to_vec();
        subset.sort_unstable();
        subset.dedup();
        if let Some(&i) = subset.iter().find(|&&i| i == 0 || i > g.rank()) {
            return Err(Error::BadGenerator(i));
        }
        let w0_p = g.longest_in(&subset);
        let mut c_w0_p = HeckeElt::zero();
        for w in g.parabolic_elements(&subset) {
            let k = g.length(&w.mul(&w0_p)) as i32;
            let sign = if k % 2 == 0 { R::one() } else { -R::one() };
            c_w0_p.add_term(w, &Laurent::monomial(sign, -k));
        }
        Ok(ParabolicModule { alg, subset, w0_p, c_w0_p, cells: parking_lot::Mutex::new(HashMap::new()) })
    }

    pub fn algebra(&self) -> &Arc<HeckeAlgebra<R>> {
        &self.alg
    }

    pub fn group(&self) -> &Arc<AffineWeyl> {
        self.alg.group()
    }

    pub fn subset(&self) -> &[usize] {
        &self.subset
    }

    pub fn w0_p(&self) -> &AffineElt {
        &self.w0_p
    }

    /// `C_{w_{0,P}} = Σ_{w ∈ W_P} (−v)^{−ℓ(w w_{0,P})} H_w`.
    pub fn c_w0_p(&self) -> &HeckeElt<R> {
        &self.c_w0_p
    }

    pub fn new_cache(&self) -> KLCache<R> {
        KLCache::new(self.group().datum().label(), &self.subset)
    }

    pub fn check_member(&self, x: &AffineElt) -> Result<()> {
        self.group().check(x)?;
        if !self.group().is_longest_in_coset(x, &self.subset) {
            return Err(Error::NotLongestInCoset(self.group().encode(x)));
        }
        Ok(())
    }

    /// `x ↦ x·w_{0,P}`, the shortest element of the coset.
    pub fn to_shortest(&self, x: &AffineElt) -> Result<AffineElt> {
        self.check_member(x)?;
        Ok(x.mul(&self.w0_p))
    }

    /// Inverse of [`Self::to_shortest`].
    pub fn from_shortest(&self, y: &AffineElt) -> Result<AffineElt> {
        self.group().check(y)?;
        if !self.group().is_shortest_in_coset(y, &self.subset) {
            return Err(Error::NotShortestInCoset(self.group().encode(y)));
        }
        Ok(y.mul(&self.w0_p))
    }

    pub fn standard(&self, x: &AffineElt) -> Result<PModuleElt<R>> {
        self.check_member(x)?;
        Ok(PModuleElt::basis(x.clone()))
    }

    /// `H_s · m` for a simple reflection `s = s_i`.
    pub fn act_gen(&self, i: usize, m: &PModuleElt<R>) -> Result<PModuleElt<R>> {
        let g = self.group();
        let s = g.gen(i)?.clone();
        let mut out = PModuleElt::zero();
        let diff = Laurent::monomial(R::one(), -1) - Laurent::monomial(R::one(), 1);
        let minus_v = Laurent::monomial(-R::one(), 1);
        for (x, c) in m.iter() {
            let y = x.mul(&self.w0_p);
            let sy = s.mul(&y);
            let sx = s.mul(x);
            if g.length(&sy) < g.length(&y) {
                out.add_term(sx, c);
                out.add_term(x.clone(), &(c * &diff));
            } else if g.is_shortest_in_coset(&sy, &self.subset) {
                out.add_term(sx, c);
            } else {
                out.add_term(x.clone(), &(c * &minus_v));
            }
        }
        Ok(out)
    }

    /// `H_z · m`.
    pub fn act_standard(&self, z: &AffineElt, m: &PModuleElt<R>) -> Result<PModuleElt<R>> {
        let g = self.group().clone();
        g.check(z)?;
        let d = g.decompose(z);
        let mut cur = m.clone();
        for &i in d.word.iter().rev() {
            cur = self.act_gen(i as usize, &cur)?;
        }
        let om = &g.omega()[d.omega];
        Ok(cur.map_support(|x| om.mul(x)))
    }

    pub fn act(&self, a: &HeckeElt<R>, m: &PModuleElt<R>) -> Result<PModuleElt<R>> {
        let mut out = PModuleElt::zero();
        for (z, c) in a.iter() {
            out.add_scaled(&self.act_standard(z, m)?, c);
        }
        Ok(out)
    }

    /// `H^P_x ↦ H_{x w_{0,P}} C_{w_{0,P}}`.
    pub fn embed(&self, m: &PModuleElt<R>) -> Result<HeckeElt<R>> {
        let mut out = HeckeElt::zero();
        for (x, c) in m.iter() {
            let y = self.to_shortest(x)?;
            out.add_scaled(&self.alg.mul_standard_left(&y, &self.c_w0_p)?, c);
        }
        Ok(out)
    }

    /// Reads an element of the image of [`Self::embed`] back into the module.
    pub fn extract(&self, h: &HeckeElt<R>) -> Result<PModuleElt<R>> {
        let g = self.group();
        let m = PModuleElt::from_terms(
            h.iter().filter(|(y, _)| g.is_longest_in_coset(y, &self.subset)).map(|(y, c)| (y.clone(), c.clone())),
        );
        if self.embed(&m)? != *h {
            return Err(Error::Invalid("element is not in the image of the parabolic module".into()));
        }
        Ok(m)
    }

    /// Bar involution on the module: `bar(H^P_x) = bar(H_{x w_{0,P}}) · H^P_{w_{0,P}}`.
    pub fn bar(&self, m: &PModuleElt<R>) -> Result<PModuleElt<R>> {
        let base = PModuleElt::basis(self.w0_p.clone());
        let mut out = PModuleElt::zero();
        for (x, c) in m.iter() {
            let y = self.to_shortest(x)?;
            let b = self.alg.bar_standard(&y)?;
            out.add_scaled(&self.act(&b, &base)?, &c.bar());
        }
        Ok(out)
    }

    /// The canonical element `C^P_x = Σ_y c^P_{xy} H^P_y`, by in-module recursion.
    pub fn kl_element(&self, x: &AffineElt, cache: &KLCache<R>) -> Result<Arc<PModuleElt<R>>> {
        cache.check_context(self.group(), &self.subset)?;
        self.check_member(x)?;
        self.kl_inner(x, cache)
    }

    fn kl_inner(&self, x: &AffineElt, cache: &KLCache<R>) -> Result<Arc<PModuleElt<R>>> {
        if let Some(c) = cache.get(x) {
            return Ok(c);
        }
        let g = self.group().clone();
        if g.length(x) > self.alg.guard() {
            return Err(Error::SupportGuard { length: g.length(x), guard: self.alg.guard() });
        }
        let y = x.mul(&self.w0_p);
        let value = match g.gen_indices().find(|&i| g.is_left_descent(&y, i)) {
            None => PModuleElt::basis(x.clone()),
            Some(i) => {
                let lower = g.gen(i)?.mul(x);
                let prev = self.kl_inner(&lower, cache)?;
                let mut d = self.act_gen(i, &prev)?;
                d.add_scaled(&prev, &Laurent::monomial(-R::one(), -1));
                canonical_correction(&g, &mut d, x, |z| self.kl_inner(z, cache))?;
                d
            }
        };
        Ok(cache.insert(x.clone(), value))
    }

    /// `c^P_{xy}` via the in-module recursion.
    pub fn parabolic_kl(&self, x: &AffineElt, y: &AffineElt, cache: &KLCache<R>) -> Result<Laurent<R>> {
        self.check_member(y)?;
        Ok(self.kl_element(x, cache)?.coeff(y))
    }

    /// `C^P_x` read off from the ordinary `C_x` through the embedding.
    pub fn kl_element_via_embedding(&self, x: &AffineElt, cache: &KLCache<R>) -> Result<PModuleElt<R>> {
        self.check_member(x)?;
        let c = self.alg.kl_element(x, cache)?;
        self.extract(&c)
    }

    /// Whether both computation paths give the same `C^P_x`.
    pub fn verify_paths(&self, x: &AffineElt, pcache: &KLCache<R>, cache: &KLCache<R>) -> Result<bool> {
        Ok(*self.kl_element(x, pcache)? == self.kl_element_via_embedding(x, cache)?)
    }

    /// Left cell of `w_{0,P}` restricted to elements of length `≤ window`.
    pub fn cell_in_window(&self, window: usize, cache: &KLCache<R>) -> Result<Arc<CellReport>> {
        if let Some(r) = self.cells.lock().get(&window) {
            return Ok(r.clone());
        }
        let members = self.cell_members(window, cache)?;
        let stable = if window >= 2 + self.group().length(&self.w0_p) {
            self.cell_members(window - 2, cache)? == members
        } else {
            false
        };
        let report = Arc::new(CellReport { window, members, stable });
        self.cells.lock().insert(window, report.clone());
        Ok(report)
    }

    fn cell_members(&self, window: usize, cache: &KLCache<R>) -> Result<Vec<AffineElt>> {
        let g = self.group().clone();
        let nodes = g.enumerate_guarded(window, &CosetFilter::LongestInWP(self.subset.clone()), self.alg.guard())?;
        let index: HashMap<&AffineElt, usize> = nodes.iter().enumerate().map(|(k, x)| (x, k)).collect();
        let mut graph: DiGraph<(), ()> = DiGraph::with_capacity(nodes.len(), 0);
        for _ in &nodes {
            graph.add_node(());
        }
        let node = petgraph::graph::NodeIndex::new;
        for (k, w) in nodes.iter().enumerate() {
            for om in g.omega() {
                if let Some(&j) = index.get(&om.mul(w)) {
                    graph.add_edge(node(k), node(j), ());
                }
            }
            let cw = self.kl_element(w, cache)?;
            for i in g.gen_indices() {
                let mut prod = self.act_gen(i, &cw)?;
                prod.add_scaled(&cw, &Laurent::monomial(-R::one(), -1));
                for (z, _) in expand_in_canonical_basis(&g, &prod, |z| self.kl_element(z, cache))? {
                    if let Some(&j) = index.get(&z) {
                        if j != k {
                            graph.add_edge(node(k), node(j), ());
                        }
                    }
                }
            }
        }
        let start = index[&self.w0_p];
        let scc = kosaraju_scc(&graph).into_iter().find(|c| c.contains(&node(start))).unwrap_or_default();
        let set: BTreeSet<usize> = scc.into_iter().map(|n| n.index()).collect();
        Ok(set.into_iter().map(|k| nodes[k].clone()).collect())
    }

    /// Membership of `x` in the left cell of `w_{0,P}`.
    pub fn in_cell_cp(&self, x: &AffineElt, window: usize, cache: &KLCache<R>) -> Result<CellVerdict> {
        self.check_member(x)?;
        let len = self.group().length(x);
        if len > window {
            return Err(Error::WindowTooSmall { window, length: len });
        }
        let report = self.cell_in_window(window, cache)?;
        let confidence =
            if report.stable && len + 2 <= window { Confidence::Certain } else { Confidence::WindowLimited };
        Ok(CellVerdict { member: report.contains(x), confidence })
    }
}
