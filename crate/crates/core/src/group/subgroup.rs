use super::{FiniteGroup, Group, GroupElement};
use std::any::Any;

/// Subgroup of a parent group, presented by named generators.
#[derive(Debug)]
pub struct SubgroupGroup {
    parent: Group,
    gens: Vec<(String, GroupElement)>,
    label: String,
}

impl SubgroupGroup {
    pub fn build(parent: &Group, gens: Vec<(String, GroupElement)>, label: impl Into<String>) -> Group {
        let label = label.into();
        Group::new(SubgroupGroup { parent: parent.clone(), gens, label }, parent.limit())
    }

    pub fn parent(&self) -> &Group {
        &self.parent
    }
}

impl FiniteGroup for SubgroupGroup {
    fn prime(&self) -> u64 {
        self.parent.prime()
    }

    fn identity(&self) -> GroupElement {
        self.parent.identity()
    }

    fn multiply(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.parent.mul(a, b)
    }

    fn invert(&self, a: &GroupElement) -> GroupElement {
        self.parent.inv(a)
    }

    fn generators(&self) -> Vec<(String, GroupElement)> {
        self.gens.clone()
    }

    fn label(&self) -> String {
        self.label.clone()
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}
