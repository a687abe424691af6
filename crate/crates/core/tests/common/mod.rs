//! Brute-force oracles used to cross-check the library. They only use the
//! group multiplication, never the library's series or spectrum code.
#![allow(dead_code)]

use pgs_core::group::{Group, GroupElement};
use std::collections::{BTreeSet, HashSet};

pub type Set = HashSet<GroupElement>;

pub fn elements(g: &Group) -> Vec<GroupElement> {
    g.enumerate().expect("enumerable").elements().to_vec()
}

pub fn order_by_multiplication(g: &Group, x: &GroupElement) -> u64 {
    let mut y = x.clone();
    let mut n = 1;
    while !g.is_identity(&y) {
        y = g.mul(&y, x);
        n += 1;
    }
    n
}

fn comm(g: &Group, x: &GroupElement, y: &GroupElement) -> GroupElement {
    let xy = g.mul(x, y);
    let yx = g.mul(y, x);
    // [x, y] = x^-1 y^-1 x y = (yx)^-1 (xy)
    g.mul(&g.inv(&yx), &xy)
}

/// Subgroup generated by `gens`, by breadth-first multiplication.
pub fn generated(g: &Group, gens: &[GroupElement]) -> Set {
    let mut seen: Set = HashSet::from([g.identity()]);
    let mut frontier = vec![g.identity()];
    while let Some(x) = frontier.pop() {
        for s in gens {
            let y = g.mul(&x, s);
            if seen.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    seen
}

/// Upper central series: `x ∈ Z_{i+1}` iff `[x, h] ∈ Z_i` for every generator `h`.
pub fn upper_series(g: &Group) -> Vec<Set> {
    let all = elements(g);
    let gens = g.generator_elements();
    let mut terms: Vec<Set> = vec![HashSet::from([g.identity()])];
    while terms.last().unwrap().len() < all.len() {
        let last = terms.last().unwrap();
        let next: Set = all.iter().filter(|x| gens.iter().all(|h| last.contains(&comm(g, x, h)))).cloned().collect();
        assert!(next.len() > last.len(), "oracle: upper central series stalls");
        terms.push(next);
    }
    terms
}

/// Lower central series from `γ_1 = G` down to 1, with `γ_{k+1}` generated
/// by all `[x, y]`, `x ∈ γ_k`, `y ∈ G`.
pub fn lower_series(g: &Group) -> Vec<Set> {
    let all = elements(g);
    let mut terms: Vec<Set> = vec![all.iter().cloned().collect()];
    while terms.last().unwrap().len() > 1 {
        let last = terms.last().unwrap();
        let comms: Vec<GroupElement> =
            last.iter().flat_map(|x| all.iter().map(|y| comm(g, x, y))).collect::<Set>().into_iter().collect();
        let next = generated(g, &comms);
        assert!(next.len() < last.len(), "oracle: lower central series stalls");
        terms.push(next);
    }
    terms
}

/// Layers `i` with an element of order p in `Z_i \ Z_{i-1}`.
pub fn spectrum(g: &Group) -> BTreeSet<usize> {
    let z = upper_series(g);
    let p = g.prime();
    elements(g)
        .iter()
        .filter(|x| order_by_multiplication(g, x) == p)
        .map(|x| z.iter().position(|t| t.contains(x)).unwrap())
        .collect()
}

pub fn class(g: &Group) -> usize {
    upper_series(g).len() - 1
}

pub fn center(g: &Group) -> Set {
    let gens = g.generator_elements();
    elements(g).into_iter().filter(|x| gens.iter().all(|h| g.mul(x, h) == g.mul(h, x))).collect()
}

/// For every `m ≥ 2` and `x ∈ G_m \ G_{m-1}` some `y` has `[x, y] ∈ G_{m-1} \ G_{m-2}`.
pub fn characterization(g: &Group, chain: &[Set]) -> bool {
    let all = elements(g);
    (2..chain.len()).all(|m| {
        chain[m].iter().filter(|x| !chain[m - 1].contains(x)).all(|x| {
            all.iter().any(|y| {
                let c = comm(g, x, y);
                chain[m - 1].contains(&c) && !chain[m - 2].contains(&c)
            })
        })
    })
}

pub fn pth_powers(g: &Group) -> Set {
    let p = g.prime();
    elements(g)
        .iter()
        .map(|x| {
            let mut y = g.identity();
            for _ in 0..p {
                y = g.mul(&y, x);
            }
            y
        })
        .collect()
}
