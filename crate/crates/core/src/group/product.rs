use super::{FiniteGroup, Group, GroupElement};
use std::any::Any;

/// External direct product with concatenated encodings.
#[derive(Debug)]
pub struct ProductGroup {
    factors: Vec<Group>,
    offsets: Vec<usize>,
}

impl ProductGroup {
    pub fn factors(&self) -> &[Group] {
        &self.factors
    }

    fn slice<'a>(&self, g: &'a GroupElement, i: usize) -> &'a [u32] {
        &g.coords()[self.offsets[i]..self.offsets[i + 1]]
    }

    pub fn project(&self, g: &GroupElement, i: usize) -> GroupElement {
        GroupElement::new(self.slice(g, i))
    }

    /// `g` placed in coordinate `i`, identity elsewhere.
    pub fn embed(&self, i: usize, g: &GroupElement) -> GroupElement {
        let ids: Vec<GroupElement> = self.factors.iter().map(Group::identity).collect();
        let parts: Vec<&[u32]> =
            (0..self.factors.len()).map(|j| if j == i { g.coords() } else { ids[j].coords() }).collect();
        GroupElement::concat(&parts)
    }

    pub fn combine(&self, parts: &[GroupElement]) -> GroupElement {
        let slices: Vec<&[u32]> = parts.iter().map(GroupElement::coords).collect();
        GroupElement::concat(&slices)
    }

    fn map2(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        let parts: Vec<GroupElement> =
            self.factors.iter().enumerate().map(|(i, f)| f.mul(&self.project(a, i), &self.project(b, i))).collect();
        self.combine(&parts)
    }
}

impl FiniteGroup for ProductGroup {
    fn prime(&self) -> u64 {
        self.factors[0].prime()
    }

    fn identity(&self) -> GroupElement {
        let ids: Vec<GroupElement> = self.factors.iter().map(Group::identity).collect();
        self.combine(&ids)
    }

    fn multiply(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.map2(a, b)
    }

    fn invert(&self, a: &GroupElement) -> GroupElement {
        let parts: Vec<GroupElement> =
            self.factors.iter().enumerate().map(|(i, f)| f.inv(&self.project(a, i))).collect();
        self.combine(&parts)
    }

    fn generators(&self) -> Vec<(String, GroupElement)> {
        self.factors
            .iter()
            .enumerate()
            .flat_map(|(i, f)| f.generators().into_iter().map(move |(n, g)| (format!("f{i}.{n}"), self.embed(i, &g))))
            .collect()
    }

    fn named_elements(&self) -> Vec<(String, GroupElement)> {
        self.factors
            .iter()
            .enumerate()
            .flat_map(|(i, f)| {
                f.named_elements().into_iter().map(move |(n, g)| (format!("f{i}.{n}"), self.embed(i, &g)))
            })
            .collect()
    }

    fn label(&self) -> String {
        let parts: Vec<String> = self.factors.iter().map(Group::label).collect();
        parts.join(" x ")
    }

    fn order_hint(&self) -> Option<u128> {
        self.factors.iter().try_fold(1u128, |acc, f| {
            let n = f.ops().order_hint().or_else(|| f.enumerate().ok().map(|e| e.order() as u128))?;
            acc.checked_mul(n)
        })
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}

/// Direct product of groups over the same prime. Generator names get the
/// prefixes `f0.`, `f1.`, ….
pub fn direct_product(factors: &[Group]) -> crate::Result<Group> {
    let Some(first) = factors.first() else {
        return Err(crate::Error::BadParameters("empty product".into()));
    };
    if factors.iter().any(|f| f.prime() != first.prime()) {
        return Err(crate::Error::BadParameters("factors over different primes".into()));
    }
    let mut offsets = vec![0];
    for f in factors {
        offsets.push(offsets.last().unwrap() + f.identity().len());
    }
    let limit = factors.iter().map(Group::limit).max().unwrap_or(0);
    Ok(Group::new(ProductGroup { factors: factors.to_vec(), offsets }, limit))
}
