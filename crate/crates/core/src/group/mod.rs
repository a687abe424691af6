//! Generic engine for finite p-groups given by a multiplication oracle.
//!
//! Every group is enumerated by breadth-first closure of its generators;
//! subgroups are explicit sorted element sets. Element encodings are fixed
//! length per group and their lexicographic order is the canonical order
//! used for every tie-break.

mod decompose;
mod product;
mod quotient;
mod subgroup;

pub use decompose::direct_factor_search;
pub use product::{direct_product, ProductGroup};
pub use quotient::QuotientGroup;
pub use subgroup::SubgroupGroup;

use crate::error::{Error, Result};
use serde::{Serialize, Serializer};
use smallvec::SmallVec;
use std::any::Any;
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::{Arc, OnceLock};

/// Canonically encoded group element. Ordering is lexicographic on the
/// coordinates, which agrees with byte order of [`GroupElement::to_bytes`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GroupElement(SmallVec<[u32; 8]>);

impl GroupElement {
    pub fn new(coords: &[u32]) -> Self {
        Self(SmallVec::from_slice(coords))
    }

    pub fn from_vec(coords: Vec<u32>) -> Self {
        Self(SmallVec::from_vec(coords))
    }

    pub fn coords(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Big-endian byte serialization.
    pub fn to_bytes(&self) -> Vec<u8> {
        self.0.iter().flat_map(|x| x.to_be_bytes()).collect()
    }

    pub(crate) fn concat(parts: &[&[u32]]) -> Self {
        let mut v = SmallVec::new();
        for p in parts {
            v.extend_from_slice(p);
        }
        Self(v)
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for GroupElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.as_slice().serialize(s)
    }
}

/// Multiplication oracle of a concrete finite p-group.
pub trait FiniteGroup: Send + Sync + fmt::Debug + Any {
    fn prime(&self) -> u64;
    fn identity(&self) -> GroupElement;
    fn multiply(&self, a: &GroupElement, b: &GroupElement) -> GroupElement;
    fn invert(&self, a: &GroupElement) -> GroupElement;
    /// Named generators; names are unique.
    fn generators(&self) -> Vec<(String, GroupElement)>;
    /// Generators plus any further distinguished elements.
    fn named_elements(&self) -> Vec<(String, GroupElement)> {
        self.generators()
    }
    fn label(&self) -> String;
    /// Exact order when known without enumeration.
    fn order_hint(&self) -> Option<u128> {
        None
    }
    fn as_any(&self) -> &dyn Any;
}

/// Explicitly enumerated subgroup: sorted carrier plus membership index.
#[derive(Clone)]
pub struct Subgroup {
    elements: Vec<GroupElement>,
    index: HashMap<GroupElement, u32>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements
    }
}

impl Eq for Subgroup {}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup(order {})", self.elements.len())
    }
}

impl Subgroup {
    pub fn from_elements(mut elements: Vec<GroupElement>) -> Self {
        elements.sort_unstable();
        elements.dedup();
        let index = elements.iter().enumerate().map(|(i, g)| (g.clone(), i as u32)).collect();
        Self { elements, index }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.index.contains_key(g)
    }

    pub fn position(&self, g: &GroupElement) -> Option<usize> {
        self.index.get(g).map(|&i| i as usize)
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn iter(&self) -> impl Iterator<Item = &GroupElement> {
        self.elements.iter()
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|g| other.contains(g))
    }

    pub fn intersection(&self, other: &Subgroup) -> Subgroup {
        Subgroup::from_elements(self.elements.iter().filter(|g| other.contains(g)).cloned().collect())
    }
}

/// Shared handle to a finite group with a write-once enumeration cache.
#[derive(Clone)]
pub struct Group {
    ops: Arc<dyn FiniteGroup>,
    limit: usize,
    cache: Arc<OnceLock<Arc<Subgroup>>>,
}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Group({})", self.ops.label())
    }
}

impl Group {
    pub fn new<G: FiniteGroup>(ops: G, limit: usize) -> Self {
        Self { ops: Arc::new(ops), limit, cache: Arc::new(OnceLock::new()) }
    }

    pub fn ops(&self) -> &dyn FiniteGroup {
        self.ops.as_ref()
    }

    pub fn downcast<T: FiniteGroup>(&self) -> Option<&T> {
        self.ops.as_any().downcast_ref::<T>()
    }

    /// Maximum number of elements any enumeration in this group may reach.
    pub fn limit(&self) -> usize {
        self.limit
    }

    pub fn prime(&self) -> u64 {
        self.ops.prime()
    }

    pub fn label(&self) -> String {
        self.ops.label()
    }

    pub fn identity(&self) -> GroupElement {
        self.ops.identity()
    }

    pub fn mul(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.ops.multiply(a, b)
    }

    pub fn inv(&self, a: &GroupElement) -> GroupElement {
        self.ops.invert(a)
    }

    pub fn generators(&self) -> Vec<(String, GroupElement)> {
        self.ops.generators()
    }

    pub fn generator_elements(&self) -> Vec<GroupElement> {
        self.ops.generators().into_iter().map(|(_, g)| g).collect()
    }

    pub fn named_elements(&self) -> Vec<(String, GroupElement)> {
        self.ops.named_elements()
    }

    pub fn named(&self, name: &str) -> Option<GroupElement> {
        self.named_elements().into_iter().find(|(n, _)| n == name).map(|(_, g)| g)
    }

    pub fn is_identity(&self, g: &GroupElement) -> bool {
        *g == self.identity()
    }

    pub fn pow(&self, g: &GroupElement, n: i64) -> GroupElement {
        let mut base = if n < 0 { self.inv(g) } else { g.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = self.identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Least `n ≥ 1` with `g^n = 1`; always a power of p.
    pub fn element_order(&self, g: &GroupElement) -> u64 {
        let p = self.prime();
        let id = self.identity();
        let mut order = 1u64;
        let mut cur = g.clone();
        while cur != id {
            cur = self.pow(&cur, p as i64);
            order *= p;
        }
        order
    }

    /// Whether `g^p = 1` and `g ≠ 1`.
    pub fn has_order_p(&self, g: &GroupElement) -> bool {
        let id = self.identity();
        *g != id && self.pow(g, self.prime() as i64) == id
    }

    /// `[x, y] = x⁻¹ y⁻¹ x y`.
    pub fn commutator(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        let xy = self.mul(x, y);
        let yx = self.mul(y, x);
        self.mul(&self.inv(&yx), &xy)
    }

    /// Left-normed commutator `[x, y_1, …, y_n]`.
    pub fn commutator_chain(&self, x: &GroupElement, ys: &[GroupElement]) -> GroupElement {
        ys.iter().fold(x.clone(), |acc, y| self.commutator(&acc, y))
    }

    /// `x^y = y⁻¹ x y`.
    pub fn conjugate(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        self.mul(&self.inv(y), &self.mul(x, y))
    }

    pub fn commutes(&self, x: &GroupElement, y: &GroupElement) -> bool {
        self.mul(x, y) == self.mul(y, x)
    }

    /// Breadth-first closure of `start` under right multiplication by `gens`.
    /// When `start` contains the identity and lies in `⟨gens⟩` the result is
    /// the subgroup `⟨gens⟩`.
    pub(crate) fn close_from(&self, start: &[GroupElement], gens: &[GroupElement]) -> Result<Subgroup> {
        let mut seen: HashSet<GroupElement> = start.iter().cloned().collect();
        let mut list: Vec<GroupElement> = seen.iter().cloned().collect();
        list.sort_unstable();
        if list.len() > self.limit {
            return Err(Error::ResourceLimit { limit: self.limit });
        }
        let mut head = 0;
        while head < list.len() {
            let x = list[head].clone();
            head += 1;
            for g in gens {
                let y = self.mul(&x, g);
                if !seen.contains(&y) {
                    seen.insert(y.clone());
                    list.push(y);
                    if list.len() > self.limit {
                        return Err(Error::ResourceLimit { limit: self.limit });
                    }
                }
            }
        }
        Ok(Subgroup::from_elements(list))
    }

    /// Subgroup generated by `gens`.
    pub fn closure(&self, gens: &[GroupElement]) -> Result<Subgroup> {
        let id = self.identity();
        let mut gs: Vec<GroupElement> = gens.iter().filter(|g| **g != id).cloned().collect();
        gs.sort_unstable();
        gs.dedup();
        self.close_from(&[id], &gs)
    }

    /// Subgroup generated by `base` together with `extra`.
    pub fn extend_closure(
        &self,
        base: &Subgroup,
        base_gens: &[GroupElement],
        extra: &[GroupElement],
    ) -> Result<Subgroup> {
        let mut gens = base_gens.to_vec();
        gens.extend(extra.iter().cloned());
        self.close_from(base.elements(), &gens)
    }

    /// Every element of the group, cached after the first call.
    pub fn enumerate(&self) -> Result<Arc<Subgroup>> {
        if let Some(e) = self.cache.get() {
            return Ok(e.clone());
        }
        if let Some(n) = self.ops.order_hint() {
            if n > self.limit as u128 {
                return Err(Error::ResourceLimit { limit: self.limit });
            }
        }
        let all = Arc::new(self.closure(&self.generator_elements())?);
        let _ = self.cache.set(all.clone());
        Ok(self.cache.get().cloned().unwrap_or(all))
    }

    pub fn order(&self) -> Result<usize> {
        Ok(self.enumerate()?.order())
    }

    pub fn contains(&self, g: &GroupElement) -> Result<bool> {
        Ok(self.enumerate()?.contains(g))
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup::from_elements(vec![self.identity()])
    }

    pub fn is_abelian(&self) -> bool {
        let gens = self.generator_elements();
        gens.iter().enumerate().all(|(i, a)| gens[i + 1..].iter().all(|b| self.commutes(a, b)))
    }

    /// Elements commuting with every element of `s`. Passing a generating set
    /// of a subgroup yields that subgroup's centralizer.
    pub fn centralizer(&self, s: &[GroupElement]) -> Result<Subgroup> {
        let all = self.enumerate()?;
        Ok(Subgroup::from_elements(all.iter().filter(|x| s.iter().all(|y| self.commutes(x, y))).cloned().collect()))
    }

    pub fn center(&self) -> Result<Subgroup> {
        self.centralizer(&self.generator_elements())
    }

    pub fn is_central(&self, z: &GroupElement) -> bool {
        self.generator_elements().iter().all(|g| self.commutes(z, g))
    }

    pub fn is_normal(&self, n: &Subgroup) -> bool {
        let gens = self.generator_elements();
        n.iter().all(|x| gens.iter().all(|h| n.contains(&self.conjugate(x, h))))
    }

    /// For each element (by position in [`Group::enumerate`]), the position of
    /// the least element of its coset `gN`.
    pub(crate) fn coset_rep_positions(&self, n: &Subgroup) -> Result<Vec<u32>> {
        let all = self.enumerate()?;
        let mut rep = vec![u32::MAX; all.order()];
        for (i, g) in all.iter().enumerate() {
            if rep[i] != u32::MAX {
                continue;
            }
            for m in n.iter() {
                let j = all.position(&self.mul(g, m)).ok_or(Error::NotInGroup)?;
                rep[j] = i as u32;
            }
        }
        Ok(rep)
    }

    /// `G/N` with least-element coset representatives.
    pub fn quotient(&self, n: &Subgroup) -> Result<Group> {
        QuotientGroup::build(self, n)
    }

    pub fn pth_power_set(&self) -> Result<HashSet<GroupElement>> {
        let p = self.prime() as i64;
        Ok(self.enumerate()?.iter().map(|g| self.pow(g, p)).collect())
    }

    /// Whether some `g` has `g^p = z`.
    pub fn is_pth_power(&self, z: &GroupElement) -> Result<bool> {
        let p = self.prime() as i64;
        Ok(self.enumerate()?.iter().any(|g| self.pow(g, p) == *z))
    }

    /// Elements of order exactly p, in canonical order.
    pub fn order_p_elements(&self) -> Result<Vec<GroupElement>> {
        Ok(self.enumerate()?.iter().filter(|g| self.has_order_p(g)).cloned().collect())
    }

    /// `Ω₁(G)`, generated by the elements of order dividing p.
    pub fn omega1(&self) -> Result<Subgroup> {
        let gens = self.order_p_elements()?;
        let mut sub = self.trivial_subgroup();
        let mut used: Vec<GroupElement> = Vec::new();
        for g in gens {
            if !sub.contains(&g) {
                sub = self.extend_closure(&sub, &used, std::slice::from_ref(&g))?;
                used.push(g);
            }
        }
        Ok(sub)
    }

    pub fn generated_by_order_p(&self) -> Result<bool> {
        Ok(self.omega1()?.order() == self.order()?)
    }

    /// All conjugates of the elements of `s`.
    pub fn conjugacy_closure(&self, s: &[GroupElement]) -> Result<Vec<GroupElement>> {
        let gens = self.generator_elements();
        let mut seen: HashSet<GroupElement> = s.iter().cloned().collect();
        let mut list: Vec<GroupElement> = s.to_vec();
        let mut head = 0;
        while head < list.len() {
            let x = list[head].clone();
            head += 1;
            for h in &gens {
                let y = self.conjugate(&x, h);
                if seen.insert(y.clone()) {
                    list.push(y);
                    if list.len() > self.limit {
                        return Err(Error::ResourceLimit { limit: self.limit });
                    }
                }
            }
        }
        list.sort_unstable();
        Ok(list)
    }

    /// Smallest normal subgroup containing `s`.
    pub fn normal_closure(&self, s: &[GroupElement]) -> Result<Subgroup> {
        let conj = self.conjugacy_closure(s)?;
        self.closure(&conj)
    }

    /// Subgroup generated by `s`, greedily choosing generators in the given
    /// order; returns the subgroup and the generators actually used.
    pub(crate) fn greedy_closure(&self, s: &[GroupElement]) -> Result<(Subgroup, Vec<GroupElement>)> {
        let mut sub = self.trivial_subgroup();
        let mut used = Vec::new();
        for g in s {
            if !sub.contains(g) {
                sub = self.extend_closure(&sub, &used, std::slice::from_ref(g))?;
                used.push(g.clone());
            }
        }
        Ok((sub, used))
    }

    /// Product set `AB` of two subgroups, one of them normal.
    pub fn product_of_normal(&self, a: &Subgroup, b: &Subgroup) -> Result<Subgroup> {
        let (mut sub, mut used) = self.greedy_closure(a.elements())?;
        for g in b.iter() {
            if !sub.contains(g) {
                sub = self.extend_closure(&sub, &used, std::slice::from_ref(g))?;
                used.push(g.clone());
            }
        }
        Ok(sub)
    }
}

#[cfg(test)]
mod tests {
    use crate::constructions::{make_cyclic, make_dc, make_mc};
    use crate::Limits;

    #[test]
    fn element_orders() {
        let lim = Limits::default();
        let d = make_dc(3, 2, &lim).unwrap();
        assert_eq!(d.element_order(&d.identity()), 1);
        assert_eq!(d.element_order(&d.named("x").unwrap()), 9);
        let m = make_mc(3, 3, &lim).unwrap();
        assert_eq!(m.element_order(&m.named("s1").unwrap()), 9);
    }

    #[test]
    fn commutator_examples() {
        let lim = Limits::default();
        let d = make_dc(3, 2, &lim).unwrap();
        let (x, y) = (d.named("x").unwrap(), d.named("y").unwrap());
        assert!(d.is_identity(&d.commutator(&x, &x)));
        assert_eq!(d.commutator(&x, &y), d.pow(&x, 3));
        let m = make_mc(3, 3, &lim).unwrap();
        let (s1, a) = (m.named("s1").unwrap(), m.named("a").unwrap());
        assert_eq!(m.commutator(&s1, &a), m.named("s2").unwrap());
        // x · [x, y] = y⁻¹ x y
        assert_eq!(d.mul(&x, &d.commutator(&x, &y)), d.conjugate(&x, &y));
    }

    #[test]
    fn closures_and_enumeration() {
        let lim = Limits::default();
        let d = make_dc(3, 2, &lim).unwrap();
        assert_eq!(d.closure(&[]).unwrap().order(), 1);
        assert_eq!(d.closure(&[d.named("x").unwrap()]).unwrap().order(), 9);
        assert_eq!(d.order().unwrap(), 81);
        let m = make_mc(3, 3, &lim).unwrap();
        let z2 = m.closure(&[m.named("s2").unwrap(), m.named("s3").unwrap()]).unwrap();
        assert_eq!(z2.order(), 9);
        assert_eq!(make_mc(3, 2, &lim).unwrap().order().unwrap(), 27);
        assert_eq!(make_cyclic(3, 0, &lim).unwrap().order().unwrap(), 1);
    }

    #[test]
    fn centers() {
        let lim = Limits::default();
        let c = make_cyclic(3, 2, &lim).unwrap();
        assert_eq!(c.center().unwrap().order(), 9);
        assert_eq!(make_dc(3, 2, &lim).unwrap().center().unwrap().order(), 9);
        assert_eq!(make_mc(3, 3, &lim).unwrap().center().unwrap().order(), 3);
    }

    #[test]
    fn pth_powers_and_omega() {
        let lim = Limits::default();
        let d = make_dc(3, 2, &lim).unwrap();
        assert!(d.is_pth_power(&d.identity()).unwrap());
        let om = d.omega1().unwrap();
        assert_eq!(om, d.center().unwrap());
        assert!(!d.generated_by_order_p().unwrap());
        let m = make_mc(3, 2, &lim).unwrap();
        assert_eq!(m.omega1().unwrap().order(), 27);
        assert!(m.generated_by_order_p().unwrap());
        let c = make_cyclic(3, 3, &lim).unwrap();
        assert_eq!(c.omega1().unwrap().order(), 3);
    }

    #[test]
    fn normal_closures() {
        let lim = Limits::default();
        let d = make_dc(3, 2, &lim).unwrap();
        let z = d.pow(&d.named("x").unwrap(), 3);
        assert_eq!(d.normal_closure(&[z]).unwrap().order(), 3);
        assert_eq!(d.normal_closure(&[d.named("x").unwrap()]).unwrap().order(), 9);
        // [s1, a] = s2 is central, so the closure of a is <a, s2>
        let m = make_mc(3, 2, &lim).unwrap();
        assert_eq!(m.normal_closure(&[m.named("a").unwrap()]).unwrap().order(), 9);
    }

    #[test]
    fn resource_limit_is_enforced() {
        let lim = crate::Limits { max_order: 50, ..Default::default() };
        assert!(matches!(make_dc(3, 2, &lim), Err(crate::Error::ResourceLimit { limit: 50 })));
        let lim = crate::Limits { max_order: 100, ..Default::default() };
        let g =
            crate::group::direct_product(&[make_dc(3, 2, &lim).unwrap(), make_cyclic(3, 1, &lim).unwrap()]).unwrap();
        assert!(matches!(g.enumerate(), Err(crate::Error::ResourceLimit { limit: 100 })));
    }
}
