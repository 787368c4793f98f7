//! Finite root data, weights, dot actions, p-alcoves, Levi sub-data and the
//! Weyl dimension formula.
//!
//! Weights are integer vectors in the coordinates of the character lattice.
//! For a datum built from a type label the lattice is the full weight lattice
//! and coordinates are fundamental-weight coordinates, so `⟨μ, α_i∨⟩ = μ_i`.
//! Simple-root indices are 1-based throughout the public API.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{One, Zero};
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// An integral weight (element of the character lattice), or a coweight when
/// used as coroot data.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Weight(SmallVec<[i64; 4]>);

impl Weight {
    pub fn new(coords: impl IntoIterator<Item = i64>) -> Self {
        Weight(coords.into_iter().collect())
    }

    pub fn zero(n: usize) -> Self {
        Weight(SmallVec::from_elem(0, n))
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut w = Self::zero(n);
        w.0[i] = 1;
        w
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Plain dot product with a coweight given in dual coordinates.
    pub fn dot(&self, other: &Weight) -> i64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn scaled(&self, k: i64) -> Weight {
        Weight(self.0.iter().map(|c| c * k).collect())
    }

    pub fn add(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Weight {
        Weight(self.0.iter().map(|c| -c).collect())
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

/// Comma-separated integers, e.g. `-2,-2`.
impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for Weight {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        if t.is_empty() {
            return Ok(Weight::default());
        }
        t.split(',')
            .map(|c| c.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bad weight `{s}`"))))
            .collect::<Result<SmallVec<_>>>()
            .map(Weight)
    }
}

/// A finite root datum inside a fixed character lattice.
///
/// Built either from a Cartan type label (simply connected, lattice = weight
/// lattice) or as the Levi sub-datum of another datum on a subset of its simple
/// roots; the latter keeps the ambient lattice.
#[derive(Clone, Debug)]
pub struct RootDatum {
    label: String,
    lattice_rank: usize,
    simple_roots: Vec<Weight>,
    simple_coroots: Vec<Weight>,
    cartan: Vec<Vec<i64>>,
    /// Positive roots in simple-root coordinates.
    positive_roots: Vec<Vec<i64>>,
    /// Matching coroots in simple-coroot coordinates.
    positive_coroots: Vec<Vec<i64>>,
    roots_x: Vec<Weight>,
    coroots_x: Vec<Weight>,
    two_rho: Weight,
    components: Vec<Vec<usize>>,
    /// Per component: index into `positive_roots` of the root with maximal coroot.
    highest_coroot: Vec<usize>,
    /// For a Levi sub-datum, the ambient (1-based) index of each simple root.
    ambient: Vec<usize>,
}

impl PartialEq for RootDatum {
    fn eq(&self, other: &Self) -> bool {
        self.lattice_rank == other.lattice_rank
            && self.simple_roots == other.simple_roots
            && self.simple_coroots == other.simple_coroots
    }
}

impl Eq for RootDatum {}

fn cartan_irreducible(kind: char, n: usize) -> Option<Vec<Vec<i64>>> {
    let mut a = vec![vec![0i64; n]; n];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    let chain = |a: &mut Vec<Vec<i64>>, upto: usize| {
        for i in 0..upto.saturating_sub(1) {
            a[i][i + 1] = -1;
            a[i + 1][i] = -1;
        }
    };
    match (kind, n) {
        ('A', 1..) => chain(&mut a, n),
        ('B', 2..) => {
            chain(&mut a, n);
            a[n - 1][n - 2] = -2;
        }
        ('C', 2..) => {
            chain(&mut a, n);
            a[n - 2][n - 1] = -2;
        }
        ('D', 4..) => {
            chain(&mut a, n - 1);
            a[n - 3][n - 1] = -1;
            a[n - 1][n - 3] = -1;
        }
        ('G', 2) => {
            a[0][1] = -1;
            a[1][0] = -3;
        }
        ('F', 4) => {
            chain(&mut a, 4);
            a[2][1] = -2;
        }
        _ => return None,
    }
    Some(a)
}

fn parse_label(label: &str) -> Result<Vec<(char, usize)>> {
    let mut out = Vec::new();
    for tok in label.split(['x', 'X', '×']) {
        let tok = tok.trim();
        let bad = || Error::UnsupportedType(tok.to_string());
        let mut chars = tok.chars();
        let kind = chars.next().ok_or_else(bad)?.to_ascii_uppercase();
        let n: usize = chars.as_str().parse().map_err(|_| bad())?;
        if n == 0 || n > 4 || cartan_irreducible(kind, n).is_none() {
            return Err(bad());
        }
        out.push((kind, n));
    }
    Ok(out)
}

impl RootDatum {
    /// Simply connected datum for a label such as `A2`, `G2` or `B2xA1`.
    pub fn from_label(label: &str) -> Result<Self> {
        let comps = parse_label(label)?;
        let rank: usize = comps.iter().map(|c| c.1).sum();
        let mut cartan = vec![vec![0i64; rank]; rank];
        let mut off = 0;
        for &(kind, n) in &comps {
            let a = cartan_irreducible(kind, n).expect("validated");
            for i in 0..n {
                for j in 0..n {
                    cartan[off + i][off + j] = a[i][j];
                }
            }
            off += n;
        }
        let canonical = comps.iter().map(|(k, n)| format!("{k}{n}")).collect::<Vec<_>>().join("x");
        Ok(Self::from_cartan(canonical, &cartan))
    }

    /// Simply connected datum with the given Cartan matrix `a_ij = ⟨α_j, α_i∨⟩`.
    pub fn from_cartan(label: String, cartan: &[Vec<i64>]) -> Self {
        let rank = cartan.len();
        // α_j in fundamental-weight coordinates is the j-th column of the Cartan matrix.
        let simple_roots = (0..rank).map(|j| Weight::new((0..rank).map(|k| cartan[k][j]))).collect();
        let simple_coroots = (0..rank).map(|i| Weight::unit(rank, i)).collect();
        Self::assemble(label, rank, simple_roots, simple_coroots, (1..=rank).collect())
    }

    /// The simply connected datum of the Levi subsystem on `subset`, with weights
    /// projected by keeping the coordinates in `subset`.
    ///
    /// The projection kills exactly the weights orthogonal to the subsystem, so it
    /// identifies `W_S ⋉ X` modulo those central translations with the extended
    /// affine Weyl group of the returned datum.
    pub fn projected_subsystem(&self, subset: &[usize]) -> Result<RootDatum> {
        if !self.is_simply_connected_semisimple() {
            return Err(Error::Invalid("projection needs a simply connected semisimple datum".into()));
        }
        let mut s: Vec<usize> = subset.to_vec();
        s.sort_unstable();
        s.dedup();
        if let Some(&bad) = s.iter().find(|&&i| i == 0 || i > self.rank()) {
            return Err(Error::BadGenerator(bad));
        }
        let cartan: Vec<Vec<i64>> =
            s.iter().map(|&i| s.iter().map(|&j| self.cartan[i - 1][j - 1]).collect()).collect();
        let label = format!("{}[{}]", self.label, s.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(","));
        let mut d = Self::from_cartan(label, &cartan);
        d.ambient = s.iter().map(|&i| self.ambient[i - 1]).collect();
        Ok(d)
    }

    fn assemble(
        label: String,
        lattice_rank: usize,
        simple_roots: Vec<Weight>,
        simple_coroots: Vec<Weight>,
        ambient: Vec<usize>,
    ) -> Self {
        let r = simple_roots.len();
        let cartan: Vec<Vec<i64>> = (0..r)
            .map(|i| (0..r).map(|j| simple_roots[j].dot(&simple_coroots[i])).collect())
            .collect();

        // Close the simple roots under simple reflections, carrying coroots along.
        let mut positive_roots: Vec<Vec<i64>> = Vec::new();
        let mut positive_coroots: Vec<Vec<i64>> = Vec::new();
        let mut seen = HashSet::new();
        for i in 0..r {
            let mut e = vec![0i64; r];
            e[i] = 1;
            seen.insert(e.clone());
            positive_roots.push(e.clone());
            positive_coroots.push(e);
        }
        let mut k = 0;
        while k < positive_roots.len() {
            for i in 0..r {
                let beta = positive_roots[k].clone();
                let pair: i64 = (0..r).map(|j| beta[j] * cartan[i][j]).sum();
                if pair == 0 || (beta.iter().sum::<i64>() == 1 && beta[i] == 1) {
                    continue;
                }
                let mut image = beta.clone();
                image[i] -= pair;
                if image.iter().any(|&c| c < 0) || seen.contains(&image) {
                    continue;
                }
                let cobeta = positive_coroots[k].clone();
                let copair: i64 = (0..r).map(|j| cobeta[j] * cartan[j][i]).sum();
                let mut coimage = cobeta;
                coimage[i] -= copair;
                seen.insert(image.clone());
                positive_roots.push(image);
                positive_coroots.push(coimage);
            }
            k += 1;
        }
        let lin = |coeffs: &[i64], basis: &[Weight]| {
            let mut w = Weight::zero(lattice_rank);
            for (c, b) in coeffs.iter().zip(basis) {
                w = w.add(&b.scaled(*c));
            }
            w
        };
        let roots_x: Vec<Weight> = positive_roots.iter().map(|c| lin(c, &simple_roots)).collect();
        let coroots_x: Vec<Weight> = positive_coroots.iter().map(|c| lin(c, &simple_coroots)).collect();
        let two_rho = roots_x.iter().fold(Weight::zero(lattice_rank), |acc, a| acc.add(a));

        // Connected components of the Dynkin diagram.
        let mut components: Vec<Vec<usize>> = Vec::new();
        let mut assigned = vec![false; r];
        for start in 0..r {
            if assigned[start] {
                continue;
            }
            let mut comp = vec![start];
            assigned[start] = true;
            let mut q = 0;
            while q < comp.len() {
                let i = comp[q];
                for j in 0..r {
                    if !assigned[j] && cartan[i][j] != 0 {
                        assigned[j] = true;
                        comp.push(j);
                    }
                }
                q += 1;
            }
            comp.sort_unstable();
            components.push(comp);
        }
        let highest_coroot = components
            .iter()
            .map(|comp| {
                (0..positive_roots.len())
                    .filter(|&a| positive_roots[a].iter().enumerate().all(|(j, c)| *c == 0 || comp.contains(&j)))
                    .max_by_key(|&a| positive_coroots[a].iter().sum::<i64>())
                    .expect("component has a root")
            })
            .collect();

        RootDatum {
            label,
            lattice_rank,
            simple_roots,
            simple_coroots,
            cartan,
            positive_roots,
            positive_coroots,
            roots_x,
            coroots_x,
            two_rho,
            components,
            highest_coroot,
            ambient,
        }
    }

    /// Levi sub-datum on the given (1-based) simple indices, in the same lattice.
    pub fn levi(&self, subset: &[usize]) -> Result<RootDatum> {
        let set: BTreeSet<usize> = subset.iter().copied().collect();
        for &i in &set {
            if i == 0 || i > self.rank() {
                return Err(Error::BadGenerator(i));
            }
        }
        let roots = set.iter().map(|&i| self.simple_roots[i - 1].clone()).collect();
        let coroots = set.iter().map(|&i| self.simple_coroots[i - 1].clone()).collect();
        let ambient = set.iter().map(|&i| self.ambient[i - 1]).collect();
        let label = format!("{}[{}]", self.label, set.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(","));
        Ok(Self::assemble(label, self.lattice_rank, roots, coroots, ambient))
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Number of simple roots.
    pub fn rank(&self) -> usize {
        self.simple_roots.len()
    }

    pub fn lattice_rank(&self) -> usize {
        self.lattice_rank
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn num_positive_roots(&self) -> usize {
        self.positive_roots.len()
    }

    /// Positive roots in simple-root coordinates.
    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.positive_roots
    }

    /// Positive coroots in simple-coroot coordinates.
    pub fn positive_coroots(&self) -> &[Vec<i64>] {
        &self.positive_coroots
    }

    pub fn positive_roots_x(&self) -> &[Weight] {
        &self.roots_x
    }

    pub fn positive_coroots_x(&self) -> &[Weight] {
        &self.coroots_x
    }

    pub fn simple_root(&self, i: usize) -> &Weight {
        &self.simple_roots[i - 1]
    }

    pub fn simple_coroot(&self, i: usize) -> &Weight {
        &self.simple_coroots[i - 1]
    }

    /// Sum of the positive roots.
    pub fn two_rho(&self) -> &Weight {
        &self.two_rho
    }

    /// `ρ` when it is integral in this lattice (always for type-label data).
    pub fn rho(&self) -> Option<Weight> {
        if self.two_rho.coords().iter().all(|c| c % 2 == 0) {
            Some(Weight::new(self.two_rho.coords().iter().map(|c| c / 2)))
        } else {
            None
        }
    }

    /// Fundamental weights; only defined for semisimple simply connected data.
    pub fn fundamental_weights(&self) -> Option<Vec<Weight>> {
        self.is_simply_connected_semisimple()
            .then(|| (0..self.rank()).map(|i| Weight::unit(self.rank(), i)).collect())
    }

    pub fn is_simply_connected_semisimple(&self) -> bool {
        self.lattice_rank == self.rank()
            && self.simple_coroots.iter().enumerate().all(|(i, c)| *c == Weight::unit(self.rank(), i))
    }

    /// Dynkin components as lists of 1-based simple indices.
    pub fn components(&self) -> Vec<Vec<usize>> {
        self.components.iter().map(|c| c.iter().map(|i| i + 1).collect()).collect()
    }

    /// The root `α₀` (in lattice coordinates) whose coroot is maximal, per component.
    pub fn highest_coroot_roots(&self) -> Vec<(Weight, Weight)> {
        self.highest_coroot.iter().map(|&a| (self.roots_x[a].clone(), self.coroots_x[a].clone())).collect()
    }

    /// Ambient simple index for each simple root of this (possibly Levi) datum.
    pub fn ambient_indices(&self) -> &[usize] {
        &self.ambient
    }

    /// Largest Coxeter number among the irreducible components (1 for a torus).
    pub fn coxeter_number(&self) -> i64 {
        self.components
            .iter()
            .map(|comp| {
                self.positive_roots
                    .iter()
                    .filter(|b| b.iter().enumerate().all(|(j, c)| *c == 0 || comp.contains(&j)))
                    .map(|b| b.iter().sum::<i64>())
                    .max()
                    .unwrap_or(0)
                    + 1
            })
            .max()
            .unwrap_or(1)
    }

    pub fn check_weight(&self, mu: &Weight) -> Result<()> {
        if mu.len() == self.lattice_rank {
            Ok(())
        } else {
            Err(Error::DatumMismatch { expected: self.lattice_rank, got: mu.len() })
        }
    }

    /// `⟨μ, α_i∨⟩`.
    pub fn pair_simple(&self, mu: &Weight, i: usize) -> i64 {
        mu.dot(&self.simple_coroots[i - 1])
    }

    /// `s_i(μ) = μ − ⟨μ, α_i∨⟩ α_i`.
    pub fn reflect(&self, i: usize, mu: &Weight) -> Weight {
        mu.sub(&self.simple_roots[i - 1].scaled(self.pair_simple(mu, i)))
    }

    /// The ρ-shifted action of a word `s_{i_1} ⋯ s_{i_k}` (rightmost letter acts first).
    pub fn dot_action_finite(&self, word: &[usize], mu: &Weight) -> Result<Weight> {
        self.check_weight(mu)?;
        let mut out = mu.clone();
        for &i in word.iter().rev() {
            if i == 0 || i > self.rank() {
                return Err(Error::BadGenerator(i));
            }
            // s_i·μ = s_i(μ) − α_i because ⟨ρ, α_i∨⟩ = 1.
            out = self.reflect(i, &out).sub(&self.simple_roots[i - 1]);
        }
        Ok(out)
    }

    /// Height of a positive coroot, i.e. `⟨ρ, α∨⟩`.
    fn coroot_height(&self, a: usize) -> i64 {
        self.positive_coroots[a].iter().sum()
    }

    /// Closed antidominant p-alcove: `⟨μ+ρ, α_i∨⟩ ≤ 0` and `⟨μ+ρ, α₀∨⟩ ≥ −p`.
    pub fn in_antidominant_alcove(&self, mu: &Weight, p: i64) -> Result<bool> {
        self.check_weight(mu)?;
        let h = self.coxeter_number();
        if p < h {
            return Err(Error::PTooSmall { p, bound: h });
        }
        let walls_ok = (1..=self.rank()).all(|i| self.pair_simple(mu, i) < 0);
        let top_ok = self
            .highest_coroot
            .iter()
            .all(|&a| mu.dot(&self.coroots_x[a]) + self.coroot_height(a) >= -p);
        Ok(walls_ok && top_ok)
    }

    /// Weyl dimension formula `∏_{α>0} ⟨μ+ρ, α∨⟩ / ⟨ρ, α∨⟩` for this datum.
    pub fn weyl_dim(&self, mu: &Weight) -> Result<BigInt> {
        self.check_weight(mu)?;
        for i in 1..=self.rank() {
            let pairing = self.pair_simple(mu, i);
            if pairing < 0 {
                return Err(Error::NotDominant { coroot: format!("a{}v", self.ambient[i - 1]), pairing });
            }
        }
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for a in 0..self.positive_roots.len() {
            let h = self.coroot_height(a);
            num *= BigInt::from(mu.dot(&self.coroots_x[a]) + h);
            den *= BigInt::from(h);
        }
        debug_assert!((&num % &den).is_zero());
        Ok(num / den)
    }

    /// Coordinates of `μ` in the basis of simple roots (semisimple data only).
    pub fn simple_root_coords(&self, mu: &Weight) -> Result<Vec<Ratio<i64>>> {
        self.check_weight(mu)?;
        if self.lattice_rank != self.rank() {
            return Err(Error::Invalid("simple-root coordinates need a semisimple datum".into()));
        }
        // Solve Σ_j c_j α_j = μ by Gaussian elimination over the rationals.
        let n = self.rank();
        let mut m: Vec<Vec<Ratio<i64>>> = (0..n)
            .map(|k| {
                let mut row: Vec<Ratio<i64>> =
                    (0..n).map(|j| Ratio::from_integer(self.simple_roots[j].coords()[k])).collect();
                row.push(Ratio::from_integer(mu.coords()[k]));
                row
            })
            .collect();
        for col in 0..n {
            let piv = (col..n).find(|&r| !m[r][col].is_zero()).expect("simple roots are independent");
            m.swap(col, piv);
            let lead = m[col][col];
            for v in m[col].iter_mut() {
                *v /= lead;
            }
            for r in 0..n {
                if r != col && !m[r][col].is_zero() {
                    let f = m[r][col];
                    for c in col..=n {
                        let sub = m[col][c] * f;
                        m[r][c] -= sub;
                    }
                }
            }
        }
        Ok(m.into_iter().map(|row| row[n]).collect())
    }

    /// `⟨μ, ν⟩` for a coweight `ν` given by its pairings with the simple roots.
    pub fn pair_coweight(&self, mu: &Weight, nu: &[i64]) -> Result<Ratio<i64>> {
        let c = self.simple_root_coords(mu)?;
        Ok(c.iter().zip(nu).map(|(a, b)| a * Ratio::from_integer(*b)).sum())
    }

    /// `⟨α, ν⟩` for the positive root with index `a`.
    pub fn root_pair_coweight(&self, a: usize, nu: &[i64]) -> i64 {
        self.positive_roots[a].iter().zip(nu).map(|(c, n)| c * n).sum()
    }

    /// Indices of positive roots supported on the given 1-based simple subset.
    pub fn roots_supported_on(&self, subset: &[usize]) -> Vec<usize> {
        (0..self.positive_roots.len())
            .filter(|&a| {
                self.positive_roots[a].iter().enumerate().all(|(j, c)| *c == 0 || subset.contains(&(j + 1)))
            })
            .collect()
    }
}

/// A standard Levi subgroup `L` given by a subset `S` of simple roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeviDatum {
    subset: Vec<usize>,
    datum: RootDatum,
}

impl LeviDatum {
    pub fn new(parent: &RootDatum, subset: &[usize]) -> Result<Self> {
        let mut s: Vec<usize> = subset.to_vec();
        s.sort_unstable();
        s.dedup();
        Ok(LeviDatum { datum: parent.levi(&s)?, subset: s })
    }

    pub fn subset(&self) -> &[usize] {
        &self.subset
    }

    pub fn datum(&self) -> &RootDatum {
        &self.datum
    }

    pub fn num_positive_roots(&self) -> usize {
        self.datum.num_positive_roots()
    }

    /// `2ρ_L` in lattice coordinates.
    pub fn two_rho_l(&self) -> &Weight {
        self.datum.two_rho()
    }

    pub fn is_dominant(&self, mu: &Weight) -> bool {
        (1..=self.datum.rank()).all(|i| self.datum.pair_simple(mu, i) >= 0)
    }

    /// Dimension of the irreducible `L`-module of highest weight `μ`.
    pub fn weyl_dim(&self, mu: &Weight) -> Result<BigInt> {
        self.datum.weyl_dim(mu)
    }
}

/// Weighted Dynkin diagram of `h` plus an optional generic cocharacter `ν`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NilpotentDatum {
    /// `⟨α_i, h⟩` for each simple index, each in `{0, 1, 2}`.
    pub h_weights: Vec<i64>,
    /// `⟨α_i, ν⟩` per simple index; absent in the distinguished setting.
    pub nu: Option<Vec<i64>>,
}

/// Data derived from a [`NilpotentDatum`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NilpotentAnalysis {
    pub levi: LeviDatum,
    /// Simple indices of `Ḡ`; all of them when `ν` is absent.
    pub underline_subset: Vec<usize>,
    /// `#Φ⁺ − #Φ_L⁺`, the dimension of `m⁻` (equal to `dim G·e / 2` for distinguished `e`).
    pub dim_ge_half: usize,
}

impl NilpotentDatum {
    pub fn distinguished(h_weights: Vec<i64>) -> Self {
        NilpotentDatum { h_weights, nu: None }
    }

    pub fn with_nu(h_weights: Vec<i64>, nu: Vec<i64>) -> Self {
        NilpotentDatum { h_weights, nu: Some(nu) }
    }

    fn h_pairing(&self, g: &RootDatum, a: usize) -> i64 {
        g.positive_roots()[a].iter().zip(&self.h_weights).map(|(c, h)| c * h).sum()
    }

    /// Derives `L`, `Ḡ` and `dim m⁻`, validating evenness of `h` on the relevant roots.
    pub fn analyze(&self, g: &RootDatum) -> Result<NilpotentAnalysis> {
        let r = g.rank();
        if self.h_weights.len() != r {
            return Err(Error::BadNilpotent(format!("expected {r} h-weights, got {}", self.h_weights.len())));
        }
        if let Some(bad) = self.h_weights.iter().find(|w| !(0..=2).contains(*w)) {
            return Err(Error::BadNilpotent(format!("h-weight {bad} not in {{0,1,2}}")));
        }
        let underline: Vec<usize> = match &self.nu {
            None => (1..=r).collect(),
            Some(nu) => {
                if nu.len() != r {
                    return Err(Error::BadNilpotent(format!("expected {r} nu pairings, got {}", nu.len())));
                }
                if nu.iter().any(|n| *n < 0) {
                    return Err(Error::BadNilpotent("nu must pair non-negatively with simple roots".into()));
                }
                (1..=r).filter(|&i| nu[i - 1] == 0).collect()
            }
        };
        // Genericity: ν vanishes on a positive root iff the root lies in Ḡ.
        if let Some(nu) = &self.nu {
            let inside = g.roots_supported_on(&underline);
            for a in 0..g.num_positive_roots() {
                if (g.root_pair_coweight(a, nu) == 0) != inside.contains(&a) {
                    return Err(Error::BadNilpotent("nu is not generic".into()));
                }
            }
        }
        // h must be even on the roots of Ḡ (all roots in the distinguished mode).
        for a in g.roots_supported_on(&underline) {
            let pairing = self.h_pairing(g, a);
            if pairing % 2 != 0 {
                let root = g.positive_roots()[a]
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| **c != 0)
                    .map(|(j, c)| if *c == 1 { format!("a{}", j + 1) } else { format!("{c}a{}", j + 1) })
                    .collect::<Vec<_>>()
                    .join("+");
                return Err(Error::OddPairing { root, pairing });
            }
        }
        let s: Vec<usize> = underline.iter().copied().filter(|&i| self.h_weights[i - 1] == 0).collect();
        let levi = LeviDatum::new(g, &s)?;
        let dim_ge_half = g.num_positive_roots() - levi.num_positive_roots();
        if self.nu.is_none() {
            let big = (0..g.num_positive_roots()).filter(|&a| self.h_pairing(g, a) >= 2).count();
            debug_assert_eq!(big, dim_ge_half);
        }
        Ok(NilpotentAnalysis { levi, underline_subset: underline, dim_ge_half })
    }
}

/// Rational degree helper used by graded characters.
pub type Degree = Ratio<i64>;

#[cfg(test)]
mod tests {
    use super::*;

    fn w(c: &[i64]) -> Weight {
        Weight::new(c.iter().copied())
    }

    #[test]
    fn label_examples() {
        let a1 = RootDatum::from_label("A1").unwrap();
        assert_eq!((a1.rank(), a1.num_positive_roots()), (1, 1));
        assert_eq!(a1.rho().unwrap(), w(&[1]));
        let a2 = RootDatum::from_label("A2").unwrap();
        assert_eq!((a2.rank(), a2.num_positive_roots()), (2, 3));
        assert_eq!(a2.rho().unwrap(), w(&[1, 1]));
        let g2 = RootDatum::from_label("G2").unwrap();
        assert_eq!(g2.num_positive_roots(), 6);
        assert_eq!(RootDatum::from_label("B2").unwrap().num_positive_roots(), 4);
        assert_eq!(RootDatum::from_label("B2xA1").unwrap().rank(), 3);
        assert_eq!(RootDatum::from_label("F4").unwrap().num_positive_roots(), 24);
        assert_eq!(RootDatum::from_label("D4").unwrap().num_positive_roots(), 12);
        assert_eq!(RootDatum::from_label("C3").unwrap().num_positive_roots(), 9);
    }

    #[test]
    fn unsupported_label_names_token() {
        assert_eq!(RootDatum::from_label("A2xE8"), Err(Error::UnsupportedType("E8".into())));
        assert!(RootDatum::from_label("D3").is_err());
        assert!(RootDatum::from_label("").is_err());
    }

    #[test]
    fn datum_invariants() {
        for label in ["A1", "A2", "A3", "B2", "B3", "C3", "G2", "F4", "D4", "A1xA1", "B2xA1"] {
            let g = RootDatum::from_label(label).unwrap();
            let rho = g.rho().unwrap();
            for i in 1..=g.rank() {
                assert_eq!(g.pair_simple(&rho, i), 1, "{label}");
                assert_eq!(g.cartan()[i - 1][i - 1], 2);
                for j in 1..=g.rank() {
                    if i != j {
                        assert!(g.cartan()[i - 1][j - 1] <= 0);
                    }
                }
            }
        }
    }

    #[test]
    fn highest_coroot_is_short_root() {
        let b2 = RootDatum::from_label("B2").unwrap();
        // B2: α₁ long, α₂ short; the highest coroot is the coroot of α₁+α₂.
        let (_, co) = &b2.highest_coroot_roots()[0];
        let idx = b2.positive_coroots_x().iter().position(|c| c == co).unwrap();
        assert_eq!(b2.positive_roots()[idx], vec![1, 1]);
        assert_eq!(b2.coxeter_number(), 4);
        assert_eq!(RootDatum::from_label("G2").unwrap().coxeter_number(), 6);
        assert_eq!(RootDatum::from_label("A2").unwrap().coxeter_number(), 3);
    }

    #[test]
    fn finite_dot_action_examples() {
        let a1 = RootDatum::from_label("A1").unwrap();
        assert_eq!(a1.dot_action_finite(&[], &w(&[-2])).unwrap(), w(&[-2]));
        assert_eq!(a1.dot_action_finite(&[1], &w(&[-2])).unwrap(), w(&[0]));
        assert_eq!(a1.dot_action_finite(&[1], &w(&[-1])).unwrap(), w(&[-1]));
        assert!(a1.dot_action_finite(&[2], &w(&[0])).is_err());
    }

    #[test]
    fn alcove_examples() {
        let a1 = RootDatum::from_label("A1").unwrap();
        assert!(a1.in_antidominant_alcove(&w(&[-2]), 5).unwrap());
        assert!(!a1.in_antidominant_alcove(&w(&[0]), 5).unwrap());
        assert!(a1.in_antidominant_alcove(&w(&[-1]), 5).unwrap());
        assert!(!a1.in_antidominant_alcove(&w(&[-7]), 5).unwrap());
        let a2 = RootDatum::from_label("A2").unwrap();
        assert!(matches!(a2.in_antidominant_alcove(&w(&[-2, -2]), 2), Err(Error::PTooSmall { .. })));
    }

    #[test]
    fn weyl_dim_examples() {
        let a2 = RootDatum::from_label("A2").unwrap();
        let torus = LeviDatum::new(&a2, &[]).unwrap();
        assert_eq!(torus.weyl_dim(&w(&[-4, 7])).unwrap(), BigInt::from(1));
        let a1 = RootDatum::from_label("A1").unwrap();
        let full = LeviDatum::new(&a1, &[1]).unwrap();
        assert_eq!(full.weyl_dim(&w(&[3])).unwrap(), BigInt::from(4));
        assert_eq!(full.weyl_dim(&w(&[0])).unwrap(), BigInt::from(1));
        let l = LeviDatum::new(&a2, &[1, 2]).unwrap();
        assert_eq!(l.weyl_dim(&w(&[1, 1])).unwrap(), BigInt::from(8));
        assert!(matches!(l.weyl_dim(&w(&[1, -1])), Err(Error::NotDominant { pairing: -1, .. })));
        // A Levi of A2: only ⟨μ, α₁∨⟩ matters.
        let l1 = LeviDatum::new(&a2, &[1]).unwrap();
        assert_eq!(l1.weyl_dim(&w(&[2, -5])).unwrap(), BigInt::from(3));
    }

    #[test]
    fn nilpotent_examples() {
        let a1 = RootDatum::from_label("A1").unwrap();
        let n = NilpotentDatum::distinguished(vec![2]).analyze(&a1).unwrap();
        assert!(n.levi.subset().is_empty());
        assert_eq!(n.dim_ge_half, 1);
        let a2 = RootDatum::from_label("A2").unwrap();
        let n = NilpotentDatum::distinguished(vec![2, 2]).analyze(&a2).unwrap();
        assert_eq!(n.dim_ge_half, 3);
        let n = NilpotentDatum::distinguished(vec![0, 0]).analyze(&a2).unwrap();
        assert_eq!(n.levi.subset(), &[1, 2]);
        assert_eq!(n.dim_ge_half, 0);
        // Minimal nilpotent of A2 has weighted diagram (1,1): odd in the distinguished mode.
        assert!(matches!(
            NilpotentDatum::distinguished(vec![1, 1]).analyze(&a2),
            Err(Error::OddPairing { .. })
        ));
        // ... but fine once ν splits off Ḡ = GL2 in which e is principal.
        let n = NilpotentDatum::with_nu(vec![2, 0], vec![0, 1]).analyze(&a2).unwrap();
        assert_eq!(n.underline_subset, vec![1]);
        assert!(n.levi.subset().is_empty());
        assert_eq!(n.dim_ge_half, 3);
        assert!(NilpotentDatum::with_nu(vec![2, 0], vec![1, -1]).analyze(&a2).is_err());
    }

    #[test]
    fn coweight_pairing() {
        let a2 = RootDatum::from_label("A2").unwrap();
        // ω₁ = (2α₁ + α₂)/3, so ⟨ω₁, ω₂∨⟩ = 1/3.
        assert_eq!(a2.pair_coweight(&w(&[1, 0]), &[0, 1]).unwrap(), Ratio::new(1, 3));
        assert_eq!(a2.pair_coweight(&w(&[-2, -2]), &[0, 1]).unwrap(), Ratio::from_integer(-2));
    }
}
