use super::{FiniteGroup, Group, GroupElement, Subgroup};
use crate::error::{Error, Result};
use std::any::Any;
use std::collections::HashMap;
use std::fmt;

/// `G/N` realized on least coset representatives.
pub struct QuotientGroup {
    parent: Group,
    kernel: Subgroup,
    rep: HashMap<GroupElement, GroupElement>,
    identity: GroupElement,
}

impl fmt::Debug for QuotientGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QuotientGroup({} / order {})", self.parent.label(), self.kernel.order())
    }
}

impl QuotientGroup {
    pub(crate) fn build(parent: &Group, n: &Subgroup) -> Result<Group> {
        let all = parent.enumerate()?;
        if !n.is_subset_of(&all) {
            return Err(Error::NotInGroup);
        }
        if !parent.is_normal(n) {
            return Err(Error::NotNormal);
        }
        let pos = parent.coset_rep_positions(n)?;
        let rep: HashMap<GroupElement, GroupElement> =
            all.iter().zip(&pos).map(|(g, &r)| (g.clone(), all.elements()[r as usize].clone())).collect();
        let identity = rep[&parent.identity()].clone();
        let q = QuotientGroup { parent: parent.clone(), kernel: n.clone(), rep, identity };
        Ok(Group::new(q, parent.limit()))
    }

    pub fn parent(&self) -> &Group {
        &self.parent
    }

    pub fn kernel(&self) -> &Subgroup {
        &self.kernel
    }

    /// Image of a parent element.
    pub fn project(&self, g: &GroupElement) -> GroupElement {
        self.rep[g].clone()
    }
}

impl FiniteGroup for QuotientGroup {
    fn prime(&self) -> u64 {
        self.parent.prime()
    }

    fn identity(&self) -> GroupElement {
        self.identity.clone()
    }

    fn multiply(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.project(&self.parent.mul(a, b))
    }

    fn invert(&self, a: &GroupElement) -> GroupElement {
        self.project(&self.parent.inv(a))
    }

    fn generators(&self) -> Vec<(String, GroupElement)> {
        self.parent.generators().into_iter().map(|(n, g)| (n, self.project(&g))).collect()
    }

    fn named_elements(&self) -> Vec<(String, GroupElement)> {
        self.parent.named_elements().into_iter().map(|(n, g)| (n, self.project(&g))).collect()
    }

    fn label(&self) -> String {
        format!("({}) / <order {}>", self.parent.label(), self.kernel.order())
    }

    fn order_hint(&self) -> Option<u128> {
        let n = self.parent.enumerate().ok()?.order() / self.kernel.order();
        Some(n as u128)
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}
