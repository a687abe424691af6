//! Free nilpotent Lie algebra of rank 2 over `F_p` and the group it
//! integrates to through the truncated Baker–Campbell–Hausdorff series.

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupElement};
use crate::linalg::inv_mod;
use std::any::Any;
use std::collections::BTreeMap;

/// Highest class for which the hard-coded BCH table is exact.
pub const MAX_LAZARD_CLASS: u32 = 4;

type Word = Vec<u8>;
type Poly = BTreeMap<Word, i64>;

fn is_lyndon(w: &[u8]) -> bool {
    (1..w.len()).all(|i| w < &w[i..])
}

/// Lyndon words over `{0, 1}` of length `1..=max_len`, ordered by length
/// then lexicographically.
pub fn lyndon_words(max_len: u32) -> Vec<Word> {
    let mut out = Vec::new();
    for len in 1..=max_len as usize {
        for bits in 0u32..(1 << len) {
            let w: Word = (0..len).rev().map(|i| ((bits >> i) & 1) as u8).collect();
            if is_lyndon(&w) {
                out.push(w);
            }
        }
    }
    out
}

fn poly_bracket(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (u, &x) in a {
        for (v, &y) in b {
            let mut uv = u.clone();
            uv.extend_from_slice(v);
            *out.entry(uv).or_default() += x * y;
            let mut vu = v.clone();
            vu.extend_from_slice(u);
            *out.entry(vu).or_default() -= x * y;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// Standard bracketing of a Lyndon word, expanded in the free associative
/// algebra.
fn lyndon_poly(w: &[u8]) -> Poly {
    if w.len() == 1 {
        return Poly::from([(w.to_vec(), 1)]);
    }
    let split = (1..w.len()).find(|&i| is_lyndon(&w[i..])).expect("a single letter is Lyndon");
    poly_bracket(&lyndon_poly(&w[..split]), &lyndon_poly(&w[split..]))
}

/// Structure constants of the free nilpotent Lie algebra on two generators
/// of a given class, over `F_p`, in the Lyndon (Hall) basis.
#[derive(Debug, Clone)]
pub struct FreeNilpotentLie {
    p: u64,
    class: u32,
    basis: Vec<Word>,
    weights: Vec<u32>,
    /// `table[i][j]` = coordinates of `[e_i, e_j]`
    table: Vec<Vec<Vec<u64>>>,
}

impl FreeNilpotentLie {
    pub fn new(p: u64, class: u32) -> Result<Self> {
        let basis = lyndon_words(class);
        let weights: Vec<u32> = basis.iter().map(|w| w.len() as u32).collect();
        let polys: Vec<Poly> = basis.iter().map(|w| lyndon_poly(w)).collect();
        let dim = basis.len();
        let mut table = vec![vec![vec![0u64; dim]; dim]; dim];
        for i in 0..dim {
            for j in 0..dim {
                let w = weights[i] + weights[j];
                if w > class {
                    continue;
                }
                let target = poly_bracket(&polys[i], &polys[j]);
                let cols: Vec<usize> = (0..dim).filter(|&l| weights[l] == w).collect();
                let sol = solve_mod_p(p, &cols.iter().map(|&l| &polys[l]).collect::<Vec<_>>(), &target)
                    .ok_or_else(|| Error::InternalInconsistency("bracket outside the Lyndon span".into()))?;
                for (k, &l) in cols.iter().enumerate() {
                    table[i][j][l] = sol[k];
                }
            }
        }
        Ok(Self { p, class, basis, weights, table })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn class(&self) -> u32 {
        self.class
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn basis_words(&self) -> &[Vec<u8>] {
        &self.basis
    }

    /// Number of basis elements of each weight `1..=class`.
    pub fn weight_dims(&self) -> Vec<usize> {
        (1..=self.class).map(|w| self.weights.iter().filter(|&&x| x == w).count()).collect()
    }

    pub fn basis_vector(&self, i: usize) -> Vec<u64> {
        let mut v = vec![0; self.dim()];
        v[i] = 1;
        v
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.p).collect()
    }

    pub fn scale(&self, a: &[u64], k: u64) -> Vec<u64> {
        a.iter().map(|x| x * (k % self.p) % self.p).collect()
    }

    pub fn bracket(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let dim = self.dim();
        let mut out = vec![0u64; dim];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y == 0 || self.weights[i] + self.weights[j] > self.class {
                    continue;
                }
                let xy = x * y % self.p;
                for (o, &c) in out.iter_mut().zip(&self.table[i][j]) {
                    *o = (*o + xy * c) % self.p;
                }
            }
        }
        out
    }
}

/// Solves `Σ c_k basis[k] = target` over `F_p`, verifying the residual.
fn solve_mod_p(p: u64, basis: &[&Poly], target: &Poly) -> Option<Vec<u64>> {
    let red = |x: i64| x.rem_euclid(p as i64) as u64;
    let mut words: Vec<&Word> = basis.iter().flat_map(|b| b.keys()).chain(target.keys()).collect();
    words.sort();
    words.dedup();
    let n = basis.len();
    // rows = words, columns = unknowns + rhs
    let mut m: Vec<Vec<u64>> = words
        .iter()
        .map(|w| {
            let mut row: Vec<u64> = basis.iter().map(|b| red(*b.get(*w).unwrap_or(&0))).collect();
            row.push(red(*target.get(*w).unwrap_or(&0)));
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(pr) = (r..m.len()).find(|&i| m[i][col] != 0) else { continue };
        m.swap(r, pr);
        let inv = inv_mod(m[r][col], p)?;
        for x in m[r].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..m.len() {
            if i != r && m[i][col] != 0 {
                let f = m[i][col];
                for j in 0..=n {
                    m[i][j] = (m[i][j] + p * p - f * m[r][j]) % p;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    if m[r..].iter().any(|row| row[n] != 0) {
        return None;
    }
    let mut sol = vec![0u64; n];
    for (i, &col) in pivots.iter().enumerate() {
        sol[col] = m[i][n];
    }
    Some(sol)
}

/// The largest 2-generator group of exponent p and class `k`, as the
/// Lazard integral of [`FreeNilpotentLie`].
#[derive(Debug)]
pub struct LazardGroup {
    lie: FreeNilpotentLie,
    half: u64,
    twelfth: u64,
    twenty_fourth: u64,
    d: GroupElement,
}

impl LazardGroup {
    pub fn new(p: u64, k: u32) -> Result<Self> {
        if !crate::cyclo::is_prime(p) {
            return Err(Error::BadParameters(format!("{p} is not prime")));
        }
        if !(2..=MAX_LAZARD_CLASS).contains(&k) || k as u64 > p - 1 {
            return Err(Error::BadParameters(format!(
                "B2 needs 2 <= k <= min(p-1, {MAX_LAZARD_CLASS}); got p={p}, k={k}"
            )));
        }
        let lie = FreeNilpotentLie::new(p, k)?;
        // p > k, so every denominator needed at this class is a unit
        let inv = |d: u64| inv_mod(d % p, p).expect("denominator invertible mod p");
        let mut g = Self {
            half: inv(2),
            twelfth: if k >= 3 { inv(12) } else { 0 },
            twenty_fourth: if k >= 4 { inv(24) } else { 0 },
            lie,
            d: GroupElement::default(),
        };
        let s = g.to_elem(&g.lie.basis_vector(0));
        let t = g.to_elem(&g.lie.basis_vector(1));
        // left-normed [t, s, …, s] of weight k
        let mut d = t;
        for _ in 1..k {
            let (di, si) = (g.invert(&d), g.invert(&s));
            d = g.multiply(&g.multiply(&di, &si), &g.multiply(&d, &s));
        }
        g.d = d;
        Ok(g)
    }

    pub fn lie(&self) -> &FreeNilpotentLie {
        &self.lie
    }

    fn to_elem(&self, v: &[u64]) -> GroupElement {
        GroupElement::from_vec(v.iter().map(|&x| x as u32).collect())
    }

    fn to_vec(g: &GroupElement) -> Vec<u64> {
        g.coords().iter().map(|&x| x as u64).collect()
    }

    /// Truncated BCH product.
    pub fn bch(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        let lie = &self.lie;
        let xy = lie.bracket(x, y);
        let mut z = lie.add(&lie.add(x, y), &lie.scale(&xy, self.half));
        if lie.class() >= 3 {
            let xxy = lie.bracket(x, &xy);
            let yxy = lie.bracket(y, &xy);
            let p = lie.p;
            let diff: Vec<u64> = xxy.iter().zip(&yxy).map(|(a, b)| (a + p - b) % p).collect();
            z = lie.add(&z, &lie.scale(&diff, self.twelfth));
            if lie.class() >= 4 {
                let yxxy = lie.bracket(y, &xxy);
                z = lie.add(&z, &lie.scale(&yxxy, p - self.twenty_fourth));
            }
        }
        z
    }
}

impl FiniteGroup for LazardGroup {
    fn prime(&self) -> u64 {
        self.lie.p
    }

    fn identity(&self) -> GroupElement {
        self.to_elem(&vec![0; self.lie.dim()])
    }

    fn multiply(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.to_elem(&self.bch(&Self::to_vec(a), &Self::to_vec(b)))
    }

    fn invert(&self, a: &GroupElement) -> GroupElement {
        let p = self.lie.p;
        self.to_elem(&Self::to_vec(a).iter().map(|x| (p - x) % p).collect::<Vec<_>>())
    }

    fn generators(&self) -> Vec<(String, GroupElement)> {
        vec![
            ("s".into(), self.to_elem(&self.lie.basis_vector(0))),
            ("t".into(), self.to_elem(&self.lie.basis_vector(1))),
        ]
    }

    fn named_elements(&self) -> Vec<(String, GroupElement)> {
        let mut v = self.generators();
        v.push(("d".into(), self.d.clone()));
        v
    }

    fn label(&self) -> String {
        format!("B2({}, {})", self.lie.p, self.lie.class)
    }

    fn order_hint(&self) -> Option<u128> {
        (self.lie.p as u128).checked_pow(self.lie.dim() as u32)
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn witt(n: u32, rank: u64) -> u64 {
        fn mobius(mut n: u32) -> i64 {
            let mut m = 1;
            let mut d = 2;
            while d * d <= n {
                if n % d == 0 {
                    n /= d;
                    if n % d == 0 {
                        return 0;
                    }
                    m = -m;
                }
                d += 1;
            }
            if n > 1 {
                m = -m;
            }
            m
        }
        let s: i64 = (1..=n).filter(|d| n % d == 0).map(|d| mobius(d) * (rank as i64).pow(n / d)).sum();
        (s / n as i64) as u64
    }

    #[test]
    fn lyndon_counts_match_witt_formula() {
        let lie = FreeNilpotentLie::new(5, 4).unwrap();
        let dims = lie.weight_dims();
        assert_eq!(dims, vec![2, 1, 2, 3]);
        for (w, &d) in dims.iter().enumerate() {
            assert_eq!(d as u64, witt(w as u32 + 1, 2));
        }
        assert_eq!(lyndon_words(6).iter().filter(|w| w.len() == 6).count() as u64, witt(6, 2));
    }

    #[test]
    fn jacobi_and_antisymmetry() {
        for (p, k) in [(3, 2), (5, 3), (5, 4), (7, 4)] {
            let lie = FreeNilpotentLie::new(p, k).unwrap();
            let n = lie.dim();
            for i in 0..n {
                let ei = lie.basis_vector(i);
                assert!(lie.bracket(&ei, &ei).iter().all(|&x| x == 0));
                for j in 0..n {
                    let ej = lie.basis_vector(j);
                    let ab = lie.bracket(&ei, &ej);
                    let ba = lie.bracket(&ej, &ei);
                    assert!(lie.add(&ab, &ba).iter().all(|&x| x == 0));
                    for l in 0..n {
                        let el = lie.basis_vector(l);
                        let t1 = lie.bracket(&ei, &lie.bracket(&ej, &el));
                        let t2 = lie.bracket(&ej, &lie.bracket(&el, &ei));
                        let t3 = lie.bracket(&el, &lie.bracket(&ei, &ej));
                        assert!(lie.add(&lie.add(&t1, &t2), &t3).iter().all(|&x| x == 0));
                    }
                }
            }
        }
    }

    #[test]
    fn inverse_is_negation() {
        let g = LazardGroup::new(5, 2).unwrap();
        let v = vec![1, 3, 4];
        let neg: Vec<u64> = v.iter().map(|x| (5 - x) % 5).collect();
        assert!(g.bch(&v, &neg).iter().all(|&x| x == 0));
    }

    #[test]
    fn unsupported_classes_rejected() {
        assert!(LazardGroup::new(3, 3).is_err());
        assert!(LazardGroup::new(7, 5).is_err());
        assert!(LazardGroup::new(5, 1).is_err());
    }
}
