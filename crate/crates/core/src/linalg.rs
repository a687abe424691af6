//! Exact linear algebra over the chain ring `Z/p^N`.
//!
//! Vectors are row vectors and matrices act on the right, so `v ↦ v·M`.
//! Submodules are kept in a canonical (Howell-style) echelon form, which
//! makes set equality a plain comparison of rows.

use crate::error::{Error, Result};
use serde::Serialize;

pub(crate) fn pow_u64(base: u64, exp: u32) -> u64 {
    base.checked_pow(exp).expect("modulus overflows u64")
}

/// p-adic valuation of `x` in `Z/p^n`, with `valuation(0) = n`.
pub(crate) fn valuation(mut x: u64, p: u64, n: u32) -> u32 {
    if x == 0 {
        return n;
    }
    let mut v = 0;
    while x % p == 0 && v < n {
        x /= p;
        v += 1;
    }
    v
}

/// Inverse of a unit modulo `m`.
pub(crate) fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return if m == 1 { Some(0) } else { None };
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

#[inline]
fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
fn reduce_i64(x: i64, m: u64) -> u64 {
    (x as i128).rem_euclid(m as i128) as u64
}

/// Dense matrix with entries in `Z/p^N`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModMatrix {
    p: u64,
    exp: u32,
    modulus: u64,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl ModMatrix {
    pub fn zeros(p: u64, exp: u32, rows: usize, cols: usize) -> Self {
        assert!(exp >= 1, "exponent must be positive");
        Self { p, exp, modulus: pow_u64(p, exp), rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(p: u64, exp: u32, n: usize) -> Self {
        let mut m = Self::zeros(p, exp, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1 % m.modulus;
        }
        m
    }

    /// Builds a matrix from signed rows, reducing every entry.
    pub fn from_rows(p: u64, exp: u32, rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        let mut m = Self::zeros(p, exp, rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            for (j, &x) in r.iter().enumerate() {
                m.data[i * cols + j] = reduce_i64(x, m.modulus);
            }
        }
        Ok(m)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn exp(&self) -> u32 {
        self.exp
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: u64) {
        self.data[i * self.cols + j] = x % self.modulus;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn mul(&self, other: &ModMatrix) -> Result<ModMatrix> {
        if self.cols != other.rows || self.modulus != other.modulus {
            return Err(Error::Dimension(format!("{}x{} times {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        let m = self.modulus as u128;
        let mut out = ModMatrix::zeros(self.p, self.exp, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc: u128 = 0;
                for k in 0..self.cols {
                    acc = (acc + self.get(i, k) as u128 * other.get(k, j) as u128) % m;
                }
                out.data[i * other.cols + j] = acc as u64;
            }
        }
        Ok(out)
    }

    pub fn pow(&self, mut e: u64) -> Result<ModMatrix> {
        if !self.is_square() {
            return Err(Error::Dimension("power of a non-square matrix".into()));
        }
        let mut base = self.clone();
        let mut acc = ModMatrix::identity(self.p, self.exp, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            base = base.mul(&base)?;
            e >>= 1;
        }
        Ok(acc)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self.get(i, j) == u64::from(i == j) % self.modulus))
    }

    /// Row vector times matrix.
    pub fn apply(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.rows, "vector length mismatch");
        let m = self.modulus as u128;
        (0..self.cols)
            .map(|j| {
                let mut acc: u128 = 0;
                for (i, &x) in v.iter().enumerate() {
                    acc = (acc + x as u128 * self.get(i, j) as u128) % m;
                }
                acc as u64
            })
            .collect()
    }

    /// Rank of the reduction modulo p.
    pub fn rank_mod_p(&self) -> usize {
        let p = self.p;
        let mut a: Vec<Vec<u64>> = (0..self.rows).map(|i| self.row(i).iter().map(|x| x % p).collect()).collect();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(piv) = (rank..self.rows).find(|&i| a[i][col] != 0) else { continue };
            a.swap(rank, piv);
            let inv = inv_mod(a[rank][col], p).expect("nonzero mod prime");
            for x in a[rank].iter_mut() {
                *x = mulmod(*x, inv, p);
            }
            for i in 0..self.rows {
                if i != rank && a[i][col] != 0 {
                    let f = a[i][col];
                    for j in 0..self.cols {
                        a[i][j] = (a[i][j] + p - mulmod(f, a[rank][j], p)) % p;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn invertible_mod_p(&self) -> bool {
        self.is_square() && self.rank_mod_p() == self.rows
    }

    /// Whether `M - I` is nilpotent modulo p.
    pub fn is_unipotent_mod_p(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        let mut d = self.clone();
        for i in 0..self.rows {
            let x = d.get(i, i);
            d.set(i, i, (x + self.modulus - 1) % self.modulus);
        }
        let n = self.rows as u64;
        match d.pow(n.max(1)) {
            Ok(m) => m.data.iter().all(|x| x % self.p == 0),
            Err(_) => false,
        }
    }
}

/// Least `m ≥ 1` with `M^m ≡ I (mod p^N)`.
pub fn matrix_power_order(m: &ModMatrix) -> Result<u64> {
    if !m.is_square() {
        return Err(Error::Dimension("order of a non-square matrix".into()));
    }
    if !m.invertible_mod_p() {
        return Err(Error::NotInvertible);
    }
    if m.is_unipotent_mod_p() {
        // the order is a power of p; raise to p-th powers until trivial
        let mut cur = m.clone();
        let mut order = 1u64;
        let cap = m.exp as usize * m.rows.max(1) + 1;
        for _ in 0..=cap {
            if cur.is_identity() {
                return Ok(order);
            }
            cur = cur.pow(m.p)?;
            order *= m.p;
        }
        return Err(Error::InternalInconsistency("unipotent matrix without p-power order".into()));
    }
    let cap = (m.p as u128).checked_pow(m.exp * m.rows as u32).unwrap_or(u128::MAX).min(u64::MAX as u128) as u64;
    let mut cur = m.clone();
    let mut k = 1u64;
    while !cur.is_identity() {
        if k >= cap {
            return Err(Error::InternalInconsistency("matrix order exceeds cap".into()));
        }
        cur = cur.mul(m)?;
        k += 1;
    }
    Ok(k)
}

/// Canonical echelon basis of a submodule of `(Z/p^N)^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct EchelonBasis {
    p: u64,
    exp: u32,
    ncols: usize,
    rows: Vec<Vec<u64>>,
    /// `(pivot column, pivot valuation)` for each row.
    pivots: Vec<(usize, u32)>,
}

impl EchelonBasis {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn exp(&self) -> u32 {
        self.exp
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[(usize, u32)] {
        &self.pivots
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Number of elements of the spanned submodule.
    pub fn span_order(&self) -> u128 {
        self.pivots.iter().map(|&(_, v)| (self.p as u128).pow(self.exp - v)).product()
    }

    fn rows_as_i64(&self) -> Vec<Vec<i64>> {
        self.rows.iter().map(|r| r.iter().map(|&x| x as i64).collect()).collect()
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        submodule_member(v, self)
    }

    pub fn is_submodule_of(&self, other: &EchelonBasis) -> bool {
        self.rows.iter().all(|r| other.contains(r))
    }

    /// Canonical basis of `self + other`.
    pub fn sum(&self, other: &EchelonBasis) -> Result<EchelonBasis> {
        let mut all = self.rows_as_i64();
        all.extend(other.rows_as_i64());
        echelonize(self.p, self.exp, self.ncols, &all)
    }
}

/// Canonical basis of the submodule spanned by `vectors`.
pub fn echelonize(p: u64, exp: u32, ncols: usize, vectors: &[Vec<i64>]) -> Result<EchelonBasis> {
    let modulus = pow_u64(p, exp);
    if let Some(v) = vectors.iter().find(|v| v.len() != ncols) {
        return Err(Error::Dimension(format!("vector of length {} in rank {ncols}", v.len())));
    }
    let mut work: Vec<Vec<u64>> = vectors
        .iter()
        .map(|v| v.iter().map(|&x| reduce_i64(x, modulus)).collect::<Vec<_>>())
        .filter(|v| v.iter().any(|&x| x != 0))
        .collect();
    let mut rows: Vec<Vec<u64>> = Vec::new();
    let mut pivots = Vec::new();

    let sub_scaled = |w: &mut Vec<u64>, q: u64, r: &[u64]| {
        for (a, &b) in w.iter_mut().zip(r) {
            *a = (*a + modulus - mulmod(q, b, modulus)) % modulus;
        }
    };

    for col in 0..ncols {
        let best = work
            .iter()
            .enumerate()
            .filter(|(_, w)| w[col] != 0)
            .min_by_key(|(i, w)| (valuation(w[col], p, exp), *i))
            .map(|(i, _)| i);
        let Some(best) = best else { continue };
        let mut piv = work.remove(best);
        let v = valuation(piv[col], p, exp);
        let pv = pow_u64(p, v);
        let unit = piv[col] / pv;
        let inv = inv_mod(unit, modulus).expect("unit after removing valuation");
        for x in piv.iter_mut() {
            *x = mulmod(*x, inv, modulus);
        }
        debug_assert_eq!(piv[col], pv);
        for w in work.iter_mut() {
            if w[col] != 0 {
                let q = w[col] / pv;
                sub_scaled(w, q, &piv);
            }
        }
        if v > 0 {
            let f = pow_u64(p, exp - v);
            let sat: Vec<u64> = piv.iter().map(|&x| mulmod(x, f, modulus)).collect();
            if sat.iter().any(|&x| x != 0) {
                work.push(sat);
            }
        }
        work.retain(|w| w.iter().any(|&x| x != 0));
        rows.push(piv);
        pivots.push((col, v));
    }

    // reduce entries above each pivot into [0, p^v)
    for i in 0..rows.len() {
        let (col, v) = pivots[i];
        let pv = pow_u64(p, v);
        let (upper, lower) = rows.split_at_mut(i);
        let piv = &lower[0];
        for r in upper.iter_mut() {
            let q = r[col] / pv;
            if q != 0 {
                sub_scaled(r, q, piv);
            }
        }
    }

    Ok(EchelonBasis { p, exp, ncols, rows, pivots })
}

/// Whether `v` lies in the span of `basis`.
pub fn submodule_member(v: &[u64], basis: &EchelonBasis) -> bool {
    if v.len() != basis.ncols {
        return false;
    }
    let modulus = pow_u64(basis.p, basis.exp);
    let mut r: Vec<u64> = v.iter().map(|x| x % modulus).collect();
    for (row, &(col, val)) in basis.rows.iter().zip(&basis.pivots) {
        let pv = pow_u64(basis.p, val);
        if r[col] % pv != 0 {
            return false;
        }
        let q = r[col] / pv;
        if q != 0 {
            for (a, &b) in r.iter_mut().zip(row) {
                *a = (*a + modulus - mulmod(q, b, modulus)) % modulus;
            }
        }
    }
    r.iter().all(|&x| x == 0)
}

/// Invariant-factor presentation of a finite abelian p-group given as a
/// quotient of `(Z/p^N)^n`, together with coordinate changes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AbelianInvariants {
    p: u64,
    /// exponents `e_i`, non-increasing, each ≥ 1
    exponents: Vec<u32>,
    /// ambient (n) → canonical (r)
    to_canon: ModMatrix,
    /// canonical (r) → ambient (n)
    from_canon: ModMatrix,
}

impl AbelianInvariants {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    /// `p^{e_i}` for each invariant.
    pub fn moduli(&self) -> Vec<u64> {
        self.exponents.iter().map(|&e| pow_u64(self.p, e)).collect()
    }

    pub fn rank(&self) -> usize {
        self.exponents.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.to_canon.rows()
    }

    pub fn order(&self) -> u128 {
        self.exponents.iter().map(|&e| (self.p as u128).pow(e)).product()
    }

    pub fn to_canonical(&self, v: &[u64]) -> Vec<u64> {
        let y = self.to_canon.apply(v);
        y.into_iter().zip(self.moduli()).map(|(x, m)| x % m).collect()
    }

    pub fn from_canonical(&self, y: &[u64]) -> Vec<u64> {
        self.from_canon.apply(y)
    }

    /// Matrix of an ambient endomorphism (preserving the relations) in canonical
    /// coordinates. Column `j` is meaningful modulo `p^{e_j}`.
    pub fn induced_action(&self, ambient: &ModMatrix) -> ModMatrix {
        let r = self.rank();
        let mut out = ModMatrix::zeros(self.p, self.to_canon.exp(), r, r);
        for i in 0..r {
            let mut e = vec![0u64; r];
            e[i] = 1;
            let img = self.to_canonical(&ambient.apply(&self.from_canonical(&e)));
            for (j, x) in img.into_iter().enumerate() {
                out.set(i, j, x);
            }
        }
        out
    }
}

/// Invariant factors of `(Z/p^N)^n / span(basis)`.
pub fn quotient_structure(basis: &EchelonBasis) -> AbelianInvariants {
    let (p, exp, n) = (basis.p, basis.exp, basis.ncols);
    let modulus = pow_u64(p, exp);
    let mut a: Vec<Vec<u64>> = basis.rows.clone();
    let m = a.len();
    let mut v = ModMatrix::identity(p, exp, n);
    let mut vinv = ModMatrix::identity(p, exp, n);
    let mut diag = Vec::new();

    for k in 0..m.min(n) {
        let mut best: Option<(u32, usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(k) {
            for (j, &x) in row.iter().enumerate().skip(k) {
                if x != 0 {
                    let val = valuation(x, p, exp);
                    if best.is_none_or(|(bv, _, _)| val < bv) {
                        best = Some((val, i, j));
                    }
                }
            }
        }
        let Some((val, bi, bj)) = best else { break };
        a.swap(k, bi);
        if bj != k {
            for row in a.iter_mut() {
                row.swap(k, bj);
            }
            for i in 0..n {
                let (x, y) = (v.get(i, k), v.get(i, bj));
                v.set(i, k, y);
                v.set(i, bj, x);
            }
            for j in 0..n {
                let (x, y) = (vinv.get(k, j), vinv.get(bj, j));
                vinv.set(k, j, y);
                vinv.set(bj, j, x);
            }
        }
        let pv = pow_u64(p, val);
        let inv = inv_mod(a[k][k] / pv, modulus).expect("unit");
        for x in a[k].iter_mut() {
            *x = mulmod(*x, inv, modulus);
        }
        let pivot_row = a[k].clone();
        for row in a.iter_mut().skip(k + 1) {
            let q = row[k] / pv;
            if q != 0 {
                for (x, &y) in row.iter_mut().zip(&pivot_row) {
                    *x = (*x + modulus - mulmod(q, y, modulus)) % modulus;
                }
            }
        }
        for j in k + 1..n {
            let q = a[k][j] / pv;
            if q == 0 {
                continue;
            }
            a[k][j] = 0;
            for i in 0..n {
                let x = (v.get(i, j) + modulus - mulmod(q, v.get(i, k), modulus)) % modulus;
                v.set(i, j, x);
            }
            for c in 0..n {
                let x = (vinv.get(k, c) + mulmod(q, vinv.get(j, c), modulus)) % modulus;
                vinv.set(k, c, x);
            }
        }
        diag.push(val);
    }
    diag.resize(n, exp);

    let mut order: Vec<usize> = (0..n).filter(|&k| diag[k] > 0).collect();
    order.sort_by(|&x, &y| diag[y].cmp(&diag[x]).then(x.cmp(&y)));
    let r = order.len();
    let mut to_canon = ModMatrix::zeros(p, exp, n, r);
    let mut from_canon = ModMatrix::zeros(p, exp, r, n);
    for (c, &k) in order.iter().enumerate() {
        for i in 0..n {
            to_canon.set(i, c, v.get(i, k));
            from_canon.set(c, i, vinv.get(k, i));
        }
    }
    AbelianInvariants { p, exponents: order.iter().map(|&k| diag[k]).collect(), to_canon, from_canon }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_of_identity_and_unipotent() {
        let id = ModMatrix::identity(3, 1, 2);
        assert_eq!(matrix_power_order(&id).unwrap(), 1);
        let m = ModMatrix::from_rows(3, 1, &[vec![1, 0], vec![1, 1]]).unwrap();
        assert_eq!(matrix_power_order(&m).unwrap(), 3);
        // companion of x^2 + x + 1 over Z/9
        let c = ModMatrix::from_rows(3, 2, &[vec![0, 1], vec![-1, -1]]).unwrap();
        assert_eq!(matrix_power_order(&c).unwrap(), 3);
    }

    #[test]
    fn order_of_non_unipotent_matrix() {
        // -1 mod 9 is not unipotent mod 3
        let m = ModMatrix::from_rows(3, 2, &[vec![-1]]).unwrap();
        assert_eq!(matrix_power_order(&m).unwrap(), 2);
        let m = ModMatrix::from_rows(5, 1, &[vec![2]]).unwrap();
        assert_eq!(matrix_power_order(&m).unwrap(), 4);
    }

    #[test]
    fn singular_matrix_rejected() {
        let m = ModMatrix::from_rows(3, 2, &[vec![3, 0], vec![0, 1]]).unwrap();
        assert_eq!(matrix_power_order(&m), Err(Error::NotInvertible));
    }

    #[test]
    fn echelon_examples() {
        let b = echelonize(3, 1, 2, &[]).unwrap();
        assert!(b.is_empty());
        let b = echelonize(3, 1, 2, &[vec![1, 1], vec![1, 1]]).unwrap();
        assert_eq!(b.rows(), &[vec![1, 1]]);
        let b = echelonize(3, 2, 2, &[vec![3, 0], vec![0, 1]]).unwrap();
        assert_eq!(b.rows(), &[vec![3, 0], vec![0, 1]]);
        assert_eq!(b.pivots(), &[(0, 1), (1, 0)]);
    }

    #[test]
    fn saturation_row_is_added() {
        // span of (3,1) mod 9 contains (0,3)
        let b = echelonize(3, 2, 2, &[vec![3, 1]]).unwrap();
        assert!(b.contains(&[0, 3]));
        assert_eq!(b.span_order(), 9);
        assert_eq!(b.rows(), &[vec![3, 1], vec![0, 3]]);
    }

    #[test]
    fn membership_examples() {
        let b = echelonize(3, 2, 2, &[vec![3, 0], vec![0, 1]]).unwrap();
        assert!(submodule_member(&[0, 0], &b));
        assert!(submodule_member(&[3, 0], &b));
        assert!(!submodule_member(&[1, 0], &b));
        let empty = echelonize(3, 2, 2, &[]).unwrap();
        assert!(submodule_member(&[0, 0], &empty));
    }

    #[test]
    fn quotient_examples() {
        // p * full lattice
        let b = echelonize(3, 2, 2, &[vec![3, 0], vec![0, 3]]).unwrap();
        assert_eq!(quotient_structure(&b).exponents(), &[1, 1]);
        // full lattice
        let b = echelonize(3, 2, 2, &[vec![1, 0], vec![0, 1]]).unwrap();
        let q = quotient_structure(&b);
        assert!(q.exponents().is_empty());
        assert_eq!(q.order(), 1);
        // I^3 in Z_3[w] with basis (1, w): (w-1)^3 = 3 - 3w after w^2 = -w - 1
        let gens = [vec![3, -3], vec![3, 6]];
        let b = echelonize(3, 2, 2, &gens).unwrap();
        let q = quotient_structure(&b);
        assert_eq!(q.moduli(), vec![9, 3]);
    }

    #[test]
    fn canonical_maps_compose_to_identity() {
        let b = echelonize(3, 3, 3, &[vec![3, 9, 1], vec![0, 9, 0], vec![9, 0, 3]]).unwrap();
        let q = quotient_structure(&b);
        let moduli = q.moduli();
        let mut y = vec![0u64; q.rank()];
        // walk every canonical vector
        loop {
            assert_eq!(q.to_canonical(&q.from_canonical(&y)), y);
            let mut i = 0;
            while i < y.len() {
                y[i] += 1;
                if y[i] < moduli[i] {
                    break;
                }
                y[i] = 0;
                i += 1;
            }
            if i == y.len() {
                break;
            }
        }
        assert_eq!(q.order() * b.span_order(), 27u128.pow(3));
    }
}
