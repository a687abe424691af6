//! Truncated cyclotomic integers `Z_p[ω] / I^c`, realized as
//! `Z[x]/(Φ_p(x))` with coefficients modulo `p^N`, where `I = (ω - 1)`.

use crate::error::{Error, Result};
use crate::linalg::{echelonize, pow_u64, quotient_structure, AbelianInvariants, EchelonBasis, ModMatrix};
use serde::Serialize;

/// Element of the ring, as coefficients on the basis `1, ω, …, ω^{p-2}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct RingElem(pub Vec<u64>);

impl RingElem {
    pub fn coeffs(&self) -> &[u64] {
        &self.0
    }
}

#[derive(Debug, Clone)]
pub struct CycloRing {
    p: u64,
    class: u32,
    exp: u32,
    modulus: u64,
    omega_matrix: ModMatrix,
    /// entry `k` spans `I^k`, for `0 ≤ k ≤ class`
    ideal_bases: Vec<EchelonBasis>,
}

pub(crate) fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

impl CycloRing {
    /// Builds the ring for prime `p` truncated at `I^c`. Fails if the
    /// additive group `E/I^c` would have more than `max_order` elements.
    pub fn new(p: u64, c: u32, max_order: usize) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::BadParameters(format!("{p} is not prime")));
        }
        if c < 1 {
            return Err(Error::BadParameters("class must be at least 1".into()));
        }
        match (p as u128).checked_pow(c) {
            Some(n) if n <= max_order as u128 => {}
            _ => return Err(Error::ParameterTooLarge(format!("p^c = {p}^{c} exceeds {max_order}"))),
        }
        let rank = (p - 1) as usize;
        let exp = c.div_ceil(rank as u32) + 1;
        let modulus = pow_u64(p, exp);

        let mut rows = vec![vec![0i64; rank]; rank];
        for (i, row) in rows.iter_mut().enumerate() {
            if i + 1 < rank {
                row[i + 1] = 1;
            } else {
                row.iter_mut().for_each(|x| *x = -1);
            }
        }
        let omega_matrix = ModMatrix::from_rows(p, exp, &rows)?;

        let mut ring = Self { p, class: c, exp, modulus, omega_matrix, ideal_bases: Vec::new() };
        let pi = ring.omega_minus_one();
        let mut gen = ring.one();
        for _ in 0..=c {
            let mut gens = Vec::with_capacity(rank);
            let mut g = gen.clone();
            for _ in 0..rank {
                gens.push(g.0.iter().map(|&x| x as i64).collect());
                g = ring.mul(&g, &ring.omega());
            }
            ring.ideal_bases.push(echelonize(p, exp, rank, &gens)?);
            gen = ring.mul(&gen, &pi);
        }
        let top = ring.quotient_invariants();
        if top.exponents().iter().any(|&e| e >= exp) {
            return Err(Error::ExponentTooSmall(exp));
        }
        if top.order() != (p as u128).pow(c) {
            return Err(Error::InternalInconsistency(format!("|E/I^{c}| = {} instead of {p}^{c}", top.order())));
        }
        Ok(ring)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn class(&self) -> u32 {
        self.class
    }

    /// Coefficient exponent `N`.
    pub fn exp(&self) -> u32 {
        self.exp
    }

    pub fn rank(&self) -> usize {
        (self.p - 1) as usize
    }

    pub fn omega_matrix(&self) -> &ModMatrix {
        &self.omega_matrix
    }

    pub fn ideal_basis(&self, k: u32) -> &EchelonBasis {
        &self.ideal_bases[k as usize]
    }

    pub fn elem(&self, coeffs: &[i64]) -> RingElem {
        assert_eq!(coeffs.len(), self.rank());
        RingElem(coeffs.iter().map(|&x| (x as i128).rem_euclid(self.modulus as i128) as u64).collect())
    }

    pub fn zero(&self) -> RingElem {
        RingElem(vec![0; self.rank()])
    }

    pub fn one(&self) -> RingElem {
        let mut v = vec![0; self.rank()];
        v[0] = 1 % self.modulus;
        RingElem(v)
    }

    pub fn omega(&self) -> RingElem {
        // for p = 2 the basis is {1} and ω = -1
        if self.rank() == 1 {
            return self.elem(&[-1]);
        }
        let mut v = vec![0; self.rank()];
        v[1] = 1;
        RingElem(v)
    }

    pub fn omega_minus_one(&self) -> RingElem {
        self.sub(&self.omega(), &self.one())
    }

    pub fn add(&self, a: &RingElem, b: &RingElem) -> RingElem {
        RingElem(a.0.iter().zip(&b.0).map(|(x, y)| (x + y) % self.modulus).collect())
    }

    pub fn sub(&self, a: &RingElem, b: &RingElem) -> RingElem {
        RingElem(a.0.iter().zip(&b.0).map(|(x, y)| (x + self.modulus - y) % self.modulus).collect())
    }

    pub fn scale(&self, a: &RingElem, k: u64) -> RingElem {
        let m = self.modulus as u128;
        RingElem(a.0.iter().map(|&x| ((x as u128 * k as u128) % m) as u64).collect())
    }

    /// Product, reduced by `x^p = 1` and then by `Φ_p`.
    pub fn mul(&self, a: &RingElem, b: &RingElem) -> RingElem {
        let p = self.p as usize;
        let m = self.modulus as u128;
        let mut acc = vec![0u128; p];
        for (i, &x) in a.0.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.0.iter().enumerate() {
                let k = (i + j) % p;
                acc[k] = (acc[k] + x as u128 * y as u128) % m;
            }
        }
        // x^{p-1} = -(1 + x + … + x^{p-2})
        let top = acc[p - 1];
        let out = acc[..p - 1].iter().map(|&x| ((x + m - top) % m) as u64).collect();
        RingElem(out)
    }

    pub fn pow(&self, a: &RingElem, mut e: u32) -> RingElem {
        let mut acc = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Whether `a` is a unit, i.e. its image under `ω ↦ 1` is nonzero mod p.
    pub fn is_unit(&self, a: &RingElem) -> bool {
        if self.rank() == 1 {
            return a.0[0] % self.p != 0;
        }
        a.0.iter().fold(0u64, |s, &x| (s + x % self.p) % self.p) != 0
    }

    /// `s_n = (ω - 1)^{n-1}`, the n-th element of the s-sequence.
    pub fn s(&self, n: u32) -> RingElem {
        assert!(n >= 1);
        self.pow(&self.omega_minus_one(), n - 1)
    }

    /// The unit `ζ` with `(ω - 1)^{p-1} = p·ζ`. Only `ζ mod p^{N-1}` is
    /// determined; coefficients are returned in `[0, p^{N-1})`.
    pub fn eq_powers_witness(&self) -> Result<RingElem> {
        let u = self.pow(&self.omega_minus_one(), (self.p - 1) as u32);
        if u.0.iter().any(|&x| x % self.p != 0) {
            return Err(Error::InternalInconsistency("(ω-1)^(p-1) not divisible by p".into()));
        }
        let zeta = RingElem(u.0.iter().map(|&x| x / self.p).collect());
        if self.scale(&zeta, self.p) != u || !self.is_unit(&zeta) {
            return Err(Error::InternalInconsistency("no unit ζ with (ω-1)^(p-1) = pζ".into()));
        }
        Ok(zeta)
    }

    /// Additive structure of `E/I^c`.
    pub fn quotient_invariants(&self) -> AbelianInvariants {
        quotient_structure(&self.ideal_bases[self.class as usize])
    }

    /// Invariant-coordinate presentation of `E/I^c` and the matrix of
    /// multiplication by ω in those coordinates.
    pub fn mc_bottom(&self) -> (AbelianInvariants, ModMatrix) {
        let inv = self.quotient_invariants();
        let action = inv.induced_action(&self.omega_matrix);
        (inv, action)
    }

    /// Canonical coordinates of a ring element in `E/I^c`.
    pub fn to_bottom(&self, inv: &AbelianInvariants, a: &RingElem) -> Vec<u64> {
        inv.to_canonical(&a.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BOUND: usize = 1 << 20;

    #[test]
    fn quotient_invariants_examples() {
        let r = CycloRing::new(2, 3, BOUND).unwrap();
        assert_eq!(r.rank(), 1);
        assert_eq!(r.quotient_invariants().moduli(), vec![8]);
        let r = CycloRing::new(3, 2, BOUND).unwrap();
        assert_eq!(r.quotient_invariants().moduli(), vec![3, 3]);
        let r = CycloRing::new(3, 3, BOUND).unwrap();
        assert_eq!(r.quotient_invariants().moduli(), vec![9, 3]);
    }

    #[test]
    fn ideal_filtration_has_index_p_steps() {
        for (p, c) in [(2, 4), (3, 5), (5, 6), (7, 3)] {
            let r = CycloRing::new(p, c, BOUND).unwrap();
            for k in 0..c {
                let big = r.ideal_basis(k).span_order();
                let small = r.ideal_basis(k + 1).span_order();
                assert_eq!(big, small * p as u128, "p={p} k={k}");
                assert!(r.ideal_basis(k + 1).is_submodule_of(r.ideal_basis(k)));
            }
        }
    }

    #[test]
    fn multiplication_examples() {
        let r = CycloRing::new(3, 3, BOUND).unwrap();
        let a = r.elem(&[4, 7]);
        assert_eq!(r.mul(&r.one(), &a), a);
        let pi = r.omega_minus_one();
        assert_eq!(r.mul(&pi, &pi), r.elem(&[0, -3]));
        let r5 = CycloRing::new(5, 2, BOUND).unwrap();
        let w3 = r5.pow(&r5.omega(), 3);
        assert_eq!(r5.mul(&r5.omega(), &w3), r5.elem(&[-1, -1, -1, -1]));
        assert_eq!(r5.pow(&r5.omega(), 5), r5.one());
    }

    #[test]
    fn zeta_examples() {
        let r = CycloRing::new(2, 3, BOUND).unwrap();
        let z = r.eq_powers_witness().unwrap();
        // ζ = -1 modulo p^{N-1}
        let m = 2u64.pow(r.exp() - 1);
        assert_eq!(z.0[0] % m, m - 1);
        let r = CycloRing::new(3, 3, BOUND).unwrap();
        let z = r.eq_powers_witness().unwrap();
        let m = 3u64.pow(r.exp() - 1);
        assert_eq!(z.0, vec![0, m - 1]);
        let r = CycloRing::new(5, 5, BOUND).unwrap();
        assert!(r.is_unit(&r.eq_powers_witness().unwrap()));
    }

    #[test]
    fn mc_bottom_examples() {
        let r = CycloRing::new(2, 3, BOUND).unwrap();
        let (inv, act) = r.mc_bottom();
        assert_eq!(inv.moduli(), vec![8]);
        assert_eq!(act.get(0, 0) % 8, 7);
        let r = CycloRing::new(3, 2, BOUND).unwrap();
        let (inv, act) = r.mc_bottom();
        assert_eq!(inv.moduli(), vec![3, 3]);
        assert!(!act.is_identity());
        let r = CycloRing::new(3, 4, BOUND).unwrap();
        assert_eq!(r.mc_bottom().0.order(), 81);
    }

    #[test]
    fn too_large_is_rejected() {
        assert!(matches!(CycloRing::new(5, 10, 1000), Err(Error::ParameterTooLarge(_))));
        assert!(matches!(CycloRing::new(4, 2, 1000), Err(Error::BadParameters(_))));
    }
}
