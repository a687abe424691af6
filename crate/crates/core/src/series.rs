//! Central series, nilpotence class and the spectrum.

use crate::error::{Error, Result};
use crate::group::{Group, GroupElement, Subgroup};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesKind {
    Upper,
    /// `1 = γ_{c+1} ≤ γ_c ≤ … ≤ γ_1 = G`
    LowerReversed,
    Custom,
}

/// Ascending chain `1 = G_0 ≤ G_1 ≤ … ≤ G_n = G`.
#[derive(Debug, Clone)]
pub struct CentralSeriesChain {
    kind: SeriesKind,
    terms: Vec<Subgroup>,
}

impl PartialEq for CentralSeriesChain {
    /// Chains compare by their terms only.
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl CentralSeriesChain {
    pub fn new(kind: SeriesKind, terms: Vec<Subgroup>) -> Self {
        Self { kind, terms }
    }

    pub fn kind(&self) -> SeriesKind {
        self.kind
    }

    pub fn terms(&self) -> &[Subgroup] {
        &self.terms
    }

    /// Number of steps above the trivial term.
    pub fn length(&self) -> usize {
        self.terms.len().saturating_sub(1)
    }

    pub fn orders(&self) -> Vec<usize> {
        self.terms.iter().map(Subgroup::order).collect()
    }

    /// Least `i` with `g ∈ G_i`.
    pub fn layer_index(&self, g: &GroupElement) -> Result<usize> {
        self.terms.iter().position(|t| t.contains(g)).ok_or(Error::NotInGroup)
    }
}

/// Index tables over an enumerated group: positions of `x·h` and `h·x` for
/// every generator `h`.
struct Tables {
    all: Arc<Subgroup>,
    right: Vec<Vec<u32>>,
    left: Vec<Vec<u32>>,
}

impl Tables {
    fn new(g: &Group) -> Result<Self> {
        let all = g.enumerate()?;
        let pos = |x: &GroupElement| all.position(x).expect("closed under multiplication") as u32;
        let gens = g.generator_elements();
        let right = gens.iter().map(|h| all.iter().map(|x| pos(&g.mul(x, h))).collect()).collect();
        let left = gens.iter().map(|h| all.iter().map(|x| pos(&g.mul(h, x))).collect()).collect();
        Ok(Self { all, right, left })
    }

    fn subgroup(&self, mask: &[bool]) -> Subgroup {
        Subgroup::from_elements(self.all.iter().zip(mask).filter(|(_, &m)| m).map(|(x, _)| x.clone()).collect())
    }
}

/// `Z_0 = 1`, `Z_{i+1}/Z_i = Z(G/Z_i)`. Each step labels the cosets of `Z_i`
/// by their least element and keeps the `x` with `x·h` and `h·x` in the same
/// coset for every generator `h`.
pub fn upper_central_series(g: &Group) -> Result<CentralSeriesChain> {
    let t = Tables::new(g)?;
    let n = t.all.order();
    let mut current = g.trivial_subgroup();
    let mut terms = vec![current.clone()];
    while current.order() < n {
        let rep = g.coset_rep_positions(&current)?;
        let mask: Vec<bool> = (0..n)
            .map(|i| t.right.iter().zip(&t.left).all(|(r, l)| rep[r[i] as usize] == rep[l[i] as usize]))
            .collect();
        let next = t.subgroup(&mask);
        if next.order() == current.order() {
            return Err(Error::InternalInconsistency(format!(
                "upper central series of {} stalls at order {}",
                g.label(),
                current.order()
            )));
        }
        terms.push(next.clone());
        current = next;
    }
    Ok(CentralSeriesChain::new(SeriesKind::Upper, terms))
}

/// Smallest normal subgroup containing `s`, grown from a greedy generating
/// set by adding generator-conjugates until stable.
fn normal_subgroup_generated(g: &Group, s: &[GroupElement]) -> Result<Subgroup> {
    let (mut sub, mut used) = g.greedy_closure(s)?;
    let gens = g.generator_elements();
    let mut head = 0;
    while head < used.len() {
        let u = used[head].clone();
        head += 1;
        for h in &gens {
            let c = g.conjugate(&u, h);
            if !sub.contains(&c) {
                sub = g.extend_closure(&sub, &used, std::slice::from_ref(&c))?;
                used.push(c);
            }
        }
    }
    Ok(sub)
}

/// `γ_1 = G`, `γ_{k+1} = [γ_k, G]`, returned ascending.
pub fn lower_central_series(g: &Group) -> Result<CentralSeriesChain> {
    let all = g.enumerate()?;
    let gens = g.generator_elements();
    let mut desc: Vec<Subgroup> = vec![(*all).clone()];
    loop {
        let last = desc.last().unwrap();
        if last.order() == 1 {
            break;
        }
        let mut comms: Vec<GroupElement> =
            last.iter().flat_map(|x| gens.iter().map(move |h| (x, h))).map(|(x, h)| g.commutator(x, h)).collect();
        comms.sort_unstable();
        comms.dedup();
        let next = normal_subgroup_generated(g, &comms)?;
        if next.order() == last.order() {
            return Err(Error::InternalInconsistency(format!(
                "lower central series of {} stalls at order {}",
                g.label(),
                last.order()
            )));
        }
        desc.push(next);
    }
    desc.reverse();
    Ok(CentralSeriesChain::new(SeriesKind::LowerReversed, desc))
}

pub fn nilpotence_class(g: &Group) -> Result<usize> {
    Ok(upper_central_series(g)?.length())
}

/// Exact spectrum with one witness per occupied layer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpectrumReport {
    pub p: u64,
    pub class: usize,
    pub spectrum: BTreeSet<usize>,
    /// least element of order p in each occupied layer
    pub witnesses: BTreeMap<usize, GroupElement>,
    /// `|Z_i|` for `i = 0..=class`
    pub layer_orders: Vec<usize>,
}

/// Upper-central layer of every element, indexed by enumeration position.
pub(crate) fn upper_layers(g: &Group, ucs: &CentralSeriesChain) -> Result<Vec<usize>> {
    let all = g.enumerate()?;
    let mut layer = vec![usize::MAX; all.order()];
    for (i, term) in ucs.terms().iter().enumerate() {
        for x in term.iter() {
            let j = all.position(x).ok_or(Error::NotInGroup)?;
            if layer[j] == usize::MAX {
                layer[j] = i;
            }
        }
    }
    Ok(layer)
}

pub fn spectrum(g: &Group) -> Result<SpectrumReport> {
    let ucs = upper_central_series(g)?;
    spectrum_from_series(g, &ucs)
}

pub fn spectrum_from_series(g: &Group, ucs: &CentralSeriesChain) -> Result<SpectrumReport> {
    let all = g.enumerate()?;
    let layer = upper_layers(g, ucs)?;
    let mut witnesses = BTreeMap::new();
    for (x, &l) in all.iter().zip(&layer) {
        if !witnesses.contains_key(&l) && g.has_order_p(x) {
            witnesses.insert(l, x.clone());
        }
    }
    Ok(SpectrumReport {
        p: g.prime(),
        class: ucs.length(),
        spectrum: witnesses.keys().copied().collect(),
        witnesses,
        layer_orders: ucs.orders(),
    })
}

/// Whether `chain` ascends from 1 to `G` through subgroups with
/// `[G_i, G] ⊆ G_{i-1}`. Testing generators of `G` suffices: inductively
/// each term is normal and `[x, gh] = [x, h][x, g]^h`.
pub fn is_central_series(g: &Group, chain: &CentralSeriesChain) -> Result<bool> {
    let terms = chain.terms();
    let all = g.enumerate()?;
    if terms.is_empty() || terms[0].order() != 1 || !terms[0].contains(&g.identity()) {
        return Ok(false);
    }
    if terms.last().unwrap() != &*all {
        return Ok(false);
    }
    if terms.windows(2).any(|w| !w[0].is_subset_of(&w[1])) {
        return Ok(false);
    }
    for t in terms {
        if !t.is_subset_of(&all) || g.greedy_closure(t.elements())?.0.order() != t.order() {
            return Ok(false);
        }
    }
    let gens = g.generator_elements();
    Ok(terms.windows(2).all(|w| w[1].iter().all(|x| gens.iter().all(|h| w[0].contains(&g.commutator(x, h))))))
}

/// For a central series: every `x ∈ G_m \ G_{m-1}` (`m ≥ 2`) has some `y`
/// with `[x, y] ∈ G_{m-1} \ G_{m-2}`. The map `y ↦ [x, y]G_{m-2}` is a
/// homomorphism into a central section, so only generators need testing.
pub fn satisfies_ucs_characterization(g: &Group, chain: &CentralSeriesChain) -> Result<bool> {
    if !is_central_series(g, chain)? {
        return Err(Error::PreconditionFailed("chain is not a central series".into()));
    }
    let terms = chain.terms();
    let gens = g.generator_elements();
    for m in 2..terms.len() {
        let (below, lower) = (&terms[m - 1], &terms[m - 2]);
        for x in terms[m].iter().filter(|x| !below.contains(x)) {
            if gens.iter().all(|h| lower.contains(&g.commutator(x, h))) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Exhaustive form of [`satisfies_ucs_characterization`], ranging `y` over
/// all of `G`.
pub fn satisfies_ucs_characterization_exhaustive(g: &Group, chain: &CentralSeriesChain) -> Result<bool> {
    if !is_central_series(g, chain)? {
        return Err(Error::PreconditionFailed("chain is not a central series".into()));
    }
    let all = g.enumerate()?;
    let terms = chain.terms();
    for m in 2..terms.len() {
        let (below, lower) = (&terms[m - 1], &terms[m - 2]);
        for x in terms[m].iter().filter(|x| !below.contains(x)) {
            let found = all.iter().any(|y| {
                let c = g.commutator(x, y);
                below.contains(&c) && !lower.contains(&c)
            });
            if !found {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Lower-central layers `k` (with `x ∈ γ_k \ γ_{k+1}`) occupied by elements
/// of order p.
pub fn lower_layers_of_order_p(g: &Group) -> Result<BTreeSet<usize>> {
    let lcs = lower_central_series(g)?;
    let c = lcs.length();
    let mut out = BTreeSet::new();
    for x in g.order_p_elements()? {
        // ascending index i corresponds to γ_{c+1-i}
        out.insert(c + 1 - lcs.layer_index(&x)?);
    }
    Ok(out)
}
