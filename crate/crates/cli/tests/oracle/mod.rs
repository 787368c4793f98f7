//! Reference computations that avoid the library's recursive KL machinery.

use std::collections::HashMap;

use affkl::hecke::{HeckeAlgebra, HeckeElt};
use affkl::{AffineElt, AffineWeyl, LaurentPoly};

/// `bar(H_x) = H_ω · Π (H_s + v − v⁻¹)` along the canonical reduced word.
pub fn bar_via_words(alg: &HeckeAlgebra, x: &AffineElt) -> HeckeElt {
    let g = alg.group();
    let d = g.decompose(x);
    let shift = LaurentPoly::from_terms([(1, 1.into()), (-1, (-1).into())]);
    let mut a = alg.basis(&g.omega()[d.omega]);
    for &i in &d.word {
        let mut next = alg.right_mul_gen(&a, i as usize).unwrap();
        next.add_scaled(&a, &shift);
        a = next;
    }
    a
}

/// Solves `bar(C) = C` with `C = H_x + Σ_{y<x} p_y H_y`, `p_y ∈ v⁻¹ℤ[v⁻¹]`, one
/// coefficient at a time from the top of the Bruhat interval down.
pub fn kl_by_bar_system(alg: &HeckeAlgebra, x: &AffineElt) -> HeckeElt {
    let g = alg.group().clone();
    let rx = bar_via_words(alg, x);
    let mut below: Vec<AffineElt> = rx.support().cloned().collect();
    below.sort_by_key(|z| std::cmp::Reverse(g.length(z)));
    let r: HashMap<AffineElt, HeckeElt> = below.iter().map(|z| (z.clone(), bar_via_words(alg, z))).collect();
    let mut p: Vec<(AffineElt, LaurentPoly)> = vec![(x.clone(), LaurentPoly::one())];
    for z in below.iter().filter(|z| *z != x) {
        let mut s = LaurentPoly::zero();
        for (y, py) in &p {
            let c = r[y].coeff(z);
            if !c.is_zero() {
                s += &(&py.bar() * &c);
            }
        }
        let neg = LaurentPoly::from_terms(s.terms().filter(|(e, _)| *e < 0).map(|(e, c)| (e, c.clone())));
        assert_eq!(s, &neg - &neg.bar(), "right-hand side is not antisymmetric at {}", g.encode(z));
        if !neg.is_zero() {
            p.push((z.clone(), neg));
        }
    }
    HeckeElt::from_terms(p)
}

/// Every reduced word of the non-Ω part of `x`, by peeling left descents.
pub fn reduced_words(g: &AffineWeyl, x: &AffineElt, memo: &mut HashMap<AffineElt, Vec<Vec<usize>>>) -> Vec<Vec<usize>> {
    if let Some(w) = memo.get(x) {
        return w.clone();
    }
    let words = if g.length(x) == 0 {
        vec![Vec::new()]
    } else {
        let mut out = Vec::new();
        for i in g.gen_indices().filter(|&i| g.is_left_descent(x, i)) {
            let rest = g.gen(i).unwrap().mul(x);
            for mut w in reduced_words(g, &rest, memo) {
                w.insert(0, i);
                out.push(w);
            }
        }
        out
    };
    memo.insert(x.clone(), words.clone());
    words
}
