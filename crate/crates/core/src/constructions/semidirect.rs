use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupElement};
use crate::linalg::ModMatrix;
use std::any::Any;

/// Cyclic top group `⟨t⟩` of order `top_order` acting on a finite abelian
/// bottom `⊕ Z/m_j`. Conjugation by the top generator sends the bottom row
/// vector `v` to `v·action`.
#[derive(Debug, Clone)]
pub struct SemidirectSpec {
    pub p: u64,
    pub top_order: u64,
    pub bottom_moduli: Vec<u64>,
    pub action: Vec<Vec<u64>>,
}

impl SemidirectSpec {
    /// Uses `action` (in canonical bottom coordinates) reduced column-wise.
    pub fn from_matrix(p: u64, top_order: u64, bottom_moduli: Vec<u64>, action: &ModMatrix) -> Self {
        let r = bottom_moduli.len();
        let action = (0..r).map(|i| (0..r).map(|j| action.get(i, j) % bottom_moduli[j]).collect()).collect();
        Self { p, top_order, bottom_moduli, action }
    }
}

/// Elements encode as `[t, v_1, …, v_r]` and read as `top^t · v`.
#[derive(Debug)]
pub struct SemidirectGroup {
    spec: SemidirectSpec,
    /// `action^j` for `0 ≤ j < period`
    powers: Vec<Vec<Vec<u64>>>,
    gens: Vec<(String, GroupElement)>,
    named: Vec<(String, GroupElement)>,
    label: String,
}

impl SemidirectGroup {
    pub fn new(spec: SemidirectSpec, label: impl Into<String>) -> Result<Self> {
        let r = spec.bottom_moduli.len();
        if spec.action.len() != r || spec.action.iter().any(|row| row.len() != r) {
            return Err(Error::Dimension("action matrix does not match the bottom".into()));
        }
        let identity: Vec<Vec<u64>> =
            (0..r).map(|i| (0..r).map(|j| u64::from(i == j) % spec.bottom_moduli[j]).collect()).collect();
        let mut powers = vec![identity.clone()];
        loop {
            let next = mat_mul(powers.last().unwrap(), &spec.action, &spec.bottom_moduli);
            if next == identity {
                break;
            }
            if powers.len() as u64 >= spec.top_order {
                return Err(Error::BadParameters("action order does not divide the top order".into()));
            }
            powers.push(next);
        }
        if spec.top_order % powers.len() as u64 != 0 {
            return Err(Error::BadParameters("action order does not divide the top order".into()));
        }
        Ok(Self { spec, powers, gens: Vec::new(), named: Vec::new(), label: label.into() })
    }

    pub fn with_generators(mut self, gens: Vec<(String, GroupElement)>) -> Self {
        self.gens = gens;
        self
    }

    pub fn with_named(mut self, named: Vec<(String, GroupElement)>) -> Self {
        self.named = named;
        self
    }

    pub fn spec(&self) -> &SemidirectSpec {
        &self.spec
    }

    pub fn element(&self, t: u64, v: &[u64]) -> GroupElement {
        let mut c = Vec::with_capacity(v.len() + 1);
        c.push((t % self.spec.top_order) as u32);
        c.extend(v.iter().zip(&self.spec.bottom_moduli).map(|(&x, &m)| (x % m) as u32));
        GroupElement::from_vec(c)
    }

    pub fn top(&self) -> GroupElement {
        self.element(1, &vec![0; self.spec.bottom_moduli.len()])
    }

    pub fn bottom(&self, v: &[u64]) -> GroupElement {
        self.element(0, v)
    }

    pub fn top_coordinate(g: &GroupElement) -> u64 {
        g.coords()[0] as u64
    }

    pub fn bottom_coordinates(g: &GroupElement) -> Vec<u64> {
        g.coords()[1..].iter().map(|&x| x as u64).collect()
    }

    fn act(&self, v: &[u32], t: u64) -> Vec<u64> {
        let m = &self.powers[(t % self.powers.len() as u64) as usize];
        let moduli = &self.spec.bottom_moduli;
        (0..moduli.len())
            .map(|j| {
                let mut acc: u128 = 0;
                for (i, &x) in v.iter().enumerate() {
                    acc += x as u128 * m[i][j] as u128;
                }
                (acc % moduli[j] as u128) as u64
            })
            .collect()
    }
}

fn mat_mul(a: &[Vec<u64>], b: &[Vec<u64>], moduli: &[u64]) -> Vec<Vec<u64>> {
    let r = moduli.len();
    (0..r)
        .map(|i| {
            (0..r)
                .map(|j| {
                    let mut acc: u128 = 0;
                    for k in 0..r {
                        acc += a[i][k] as u128 * b[k][j] as u128;
                    }
                    (acc % moduli[j] as u128) as u64
                })
                .collect()
        })
        .collect()
}

impl FiniteGroup for SemidirectGroup {
    fn prime(&self) -> u64 {
        self.spec.p
    }

    fn identity(&self) -> GroupElement {
        self.element(0, &vec![0; self.spec.bottom_moduli.len()])
    }

    fn multiply(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        let (ta, tb) = (a.coords()[0] as u64, b.coords()[0] as u64);
        let moved = self.act(&a.coords()[1..], tb);
        let v: Vec<u64> = moved
            .iter()
            .zip(&b.coords()[1..])
            .zip(&self.spec.bottom_moduli)
            .map(|((&x, &y), &m)| (x + y as u64) % m)
            .collect();
        self.element(ta + tb, &v)
    }

    fn invert(&self, a: &GroupElement) -> GroupElement {
        let t = a.coords()[0] as u64;
        let period = self.powers.len() as u64;
        let back = (period - t % period) % period;
        let moved = self.act(&a.coords()[1..], back);
        let v: Vec<u64> = moved.iter().zip(&self.spec.bottom_moduli).map(|(&x, &m)| (m - x) % m).collect();
        self.element(self.spec.top_order - t, &v)
    }

    fn generators(&self) -> Vec<(String, GroupElement)> {
        self.gens.clone()
    }

    fn named_elements(&self) -> Vec<(String, GroupElement)> {
        let mut out = self.gens.clone();
        for (n, g) in &self.named {
            if !out.iter().any(|(m, _)| m == n) {
                out.push((n.clone(), g.clone()));
            }
        }
        out
    }

    fn label(&self) -> String {
        self.label.clone()
    }

    fn order_hint(&self) -> Option<u128> {
        self.spec.bottom_moduli.iter().try_fold(self.spec.top_order as u128, |a, &m| a.checked_mul(m as u128))
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}
