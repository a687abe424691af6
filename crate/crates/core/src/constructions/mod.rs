//! Concrete group families and the recipe interpreter.

mod description;
mod lie;
mod semidirect;

pub use description::{evaluate_word, GroupDescription};
pub use lie::{lyndon_words, FreeNilpotentLie, LazardGroup, MAX_LAZARD_CLASS};
pub use semidirect::{SemidirectGroup, SemidirectSpec};

use crate::cyclo::{is_prime, CycloRing};
use crate::error::{Error, Result};
use crate::group::{direct_product, Group, GroupElement, ProductGroup, SubgroupGroup};
use crate::linalg::{matrix_power_order, ModMatrix};
use crate::Limits;

fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::BadParameters(format!("{p} is not prime")))
    }
}

fn checked_pow(p: u64, e: u32) -> Result<u64> {
    p.checked_pow(e)
        .filter(|&n| n <= u32::MAX as u64)
        .ok_or_else(|| Error::ParameterTooLarge(format!("{p}^{e} does not fit the element encoding")))
}

fn guard_order(order: u128, lim: &Limits) -> Result<()> {
    if order > lim.max_order as u128 {
        Err(Error::ResourceLimit { limit: lim.max_order })
    } else {
        Ok(())
    }
}

/// Cyclic group of order `p^e`, generator `d`.
pub fn make_cyclic(p: u64, e: u32, lim: &Limits) -> Result<Group> {
    check_prime(p)?;
    let n = checked_pow(p, e)?;
    guard_order(n as u128, lim)?;
    let spec = SemidirectSpec { p, top_order: n, bottom_moduli: vec![], action: vec![] };
    let g = SemidirectGroup::new(spec, format!("C({p}^{e})"))?;
    let d = g.top();
    Ok(Group::new(g.with_generators(vec![("d".into(), d)]), lim.max_order))
}

/// Split metacyclic `D_c`: `⟨y⟩` acting on `⟨x⟩ ≅ Z/p^c` by `x ↦ x^{1+p}`,
/// with `y` of order `p^c` (`2^{c-1}` when `p = 2`).
pub fn make_dc(p: u64, c: u32, lim: &Limits) -> Result<Group> {
    check_prime(p)?;
    let min_c = if p == 2 { 3 } else { 2 };
    if c < min_c {
        return Err(Error::BadParameters(format!("D_c needs c >= {min_c} for p = {p}")));
    }
    let xm = checked_pow(p, c)?;
    let ym = if p == 2 { checked_pow(2, c - 1)? } else { xm };
    guard_order(xm as u128 * ym as u128, lim)?;
    let spec = SemidirectSpec { p, top_order: ym, bottom_moduli: vec![xm], action: vec![vec![(1 + p) % xm]] };
    let g = SemidirectGroup::new(spec, format!("D({p}, {c})"))?;
    let (x, y) = (g.bottom(&[1]), g.top());
    Ok(Group::new(g.with_generators(vec![("x".into(), x), ("y".into(), y)]), lim.max_order))
}

/// Maximal-class quotient `M_c = ⟨α⟩ ⋉ E / γ_{c+1}`, with `E = Z_p[ω]`
/// and α acting by multiplication by ω. Named elements `a`, `s1`, …, `sc`.
pub fn make_mc(p: u64, c: u32, lim: &Limits) -> Result<Group> {
    check_prime(p)?;
    if c < 2 {
        return Err(Error::BadParameters("M_c needs c >= 2".into()));
    }
    let ring = CycloRing::new(p, c, lim.max_order)?;
    guard_order((p as u128).pow(c + 1), lim)?;
    let (inv, action) = ring.mc_bottom();
    let moduli = inv.moduli();
    let spec = SemidirectSpec::from_matrix(p, p, moduli, &action);
    let g = SemidirectGroup::new(spec, format!("M({p}, {c})"))?;
    let named: Vec<(String, GroupElement)> =
        (1..=c).map(|k| (format!("s{k}"), g.bottom(&ring.to_bottom(&inv, &ring.s(k))))).collect();
    let gens = vec![("a".to_string(), g.top()), named[0].clone()];
    Ok(Group::new(g.with_generators(gens).with_named(named), lim.max_order))
}

/// Automorphism `a_i ↦ a_i a_{i+1}`, `a_k ↦ a_k a_1^p` of `(Z/p^e)^k`.
pub fn homocyclic_beta(p: u64, k: usize, e: u32) -> Result<ModMatrix> {
    let mut rows = vec![vec![0i64; k]; k];
    for (i, row) in rows.iter_mut().enumerate() {
        row[i] += 1;
        if i + 1 < k {
            row[i + 1] += 1;
        } else {
            row[0] += p as i64;
        }
    }
    ModMatrix::from_rows(p, e, &rows)
}

/// Homocyclic `A = (Z/p^e)^k` extended by `⟨b⟩` of order `p^{t+1}` acting
/// through `β` of order `p^t`. For `s > 0`, the subgroup
/// `⟨a_1^p, …, a_s^p, a_{s+1}, …, a_k, b⟩`.
pub fn make_homocyclic(p: u64, k: u32, e: u32, s: u32, lim: &Limits) -> Result<Group> {
    check_prime(p)?;
    if k < 1 || k as u64 > p - 1 || e < 1 || s >= k {
        return Err(Error::BadParameters(format!(
            "homocyclic needs 1 <= k <= p-1, e >= 1, 0 <= s < k; got p={p}, k={k}, e={e}, s={s}"
        )));
    }
    let beta = homocyclic_beta(p, k as usize, e)?;
    let order = matrix_power_order(&beta)?;
    let top = order.checked_mul(p).ok_or_else(|| Error::ParameterTooLarge("top order".into()))?;
    let m = checked_pow(p, e)?;
    let total = (m as u128).checked_pow(k).and_then(|x| x.checked_mul(top as u128));
    guard_order(total.unwrap_or(u128::MAX), lim)?;
    let spec = SemidirectSpec::from_matrix(p, top, vec![m; k as usize], &beta);
    let g = SemidirectGroup::new(spec, format!("homocyclic({p}, {k}, {e}, 0)"))?;
    let basis = |i: usize, x: u64| {
        let mut v = vec![0u64; k as usize];
        v[i] = x;
        g.bottom(&v)
    };
    let mut gens: Vec<(String, GroupElement)> = (0..k as usize).map(|i| (format!("a{}", i + 1), basis(i, 1))).collect();
    gens.push(("b".into(), g.top()));
    let sub_gens: Vec<(String, GroupElement)> = (0..k as usize)
        .map(|i| if (i as u32) < s { (format!("a{}_p", i + 1), basis(i, p)) } else { gens[i].clone() })
        .chain(std::iter::once(gens[k as usize].clone()))
        .collect();
    let full = Group::new(g.with_generators(gens), lim.max_order);
    if s == 0 {
        return Ok(full);
    }
    Ok(SubgroupGroup::build(&full, sub_gens, format!("homocyclic({p}, {k}, {e}, {s})")))
}

/// Largest 2-generator group of exponent p and class `k` (generators `s`,
/// `t`; named element `d` = `[t, s, …, s]` of weight k).
pub fn make_b2(p: u64, k: u32, lim: &Limits) -> Result<Group> {
    check_prime(p)?;
    let g = LazardGroup::new(p, k)?;
    guard_order(crate::group::FiniteGroup::order_hint(&g).unwrap_or(u128::MAX), lim)?;
    Ok(Group::new(g, lim.max_order))
}

/// `(G_1 × G_2) / ⟨(z_1, z_2)⟩` for central `z_i` of order p.
pub fn central_quotient_diagonal(g1: &Group, g2: &Group, z1: &GroupElement, z2: &GroupElement) -> Result<Group> {
    for (g, z) in [(g1, z1), (g2, z2)] {
        if !g.contains(z)? {
            return Err(Error::NotInGroup);
        }
        if !g.is_central(z) {
            return Err(Error::NotCentral);
        }
        let o = g.element_order(z);
        if o != g.prime() {
            return Err(Error::WrongOrder(o));
        }
    }
    let prod = direct_product(&[g1.clone(), g2.clone()])?;
    let pg = prod.downcast::<ProductGroup>().expect("product");
    let z = pg.combine(&[z1.clone(), z2.clone()]);
    let n = prod.closure(&[z])?;
    prod.quotient(&n)
}

/// `(D_c × B2(p, k)) / ⟨x^{p^{c-1}} d⟩` with the default `d`.
pub fn make_second_example(p: u64, k: u32, c: u32, lim: &Limits) -> Result<Group> {
    let b = make_b2(p, k, lim)?;
    let d = b.named("d").expect("B2 names d");
    make_second_example_with(p, k, c, &d, lim)
}

/// As [`make_second_example`] with an explicit `d ∈ γ_k(B2)`.
pub fn make_second_example_with(p: u64, k: u32, c: u32, d: &GroupElement, lim: &Limits) -> Result<Group> {
    if c < k {
        return Err(Error::BadParameters(format!("second example needs c >= k; got k={k}, c={c}")));
    }
    let dc = make_dc(p, c, lim)?;
    let b = make_b2(p, k, lim)?;
    let lie_weights = b.downcast::<LazardGroup>().expect("B2").lie().weights().to_vec();
    if b.is_identity(d) {
        return Err(Error::BadParameters("d must be nontrivial".into()));
    }
    if d.coords().iter().zip(&lie_weights).any(|(&x, &w)| x != 0 && w < k) {
        return Err(Error::BadParameters("d must lie in gamma_k of B2".into()));
    }
    let x = dc.named("x").expect("D_c names x");
    let z1 = dc.pow(&x, checked_pow(p, c - 1)? as i64);
    let prod = direct_product(&[dc.clone(), b.clone()])?;
    let z = prod.downcast::<ProductGroup>().expect("product").combine(&[z1.clone(), d.clone()]);
    if prod.is_pth_power(&z)? {
        return Err(Error::PthPowerViolation);
    }
    central_quotient_diagonal(&dc, &b, &z1, d)
}

fn check_partb(p: u64, cs: &[u32], c: u32) -> Result<()> {
    check_prime(p)?;
    let ok = !cs.is_empty() && cs[0] as u64 >= p && cs.windows(2).all(|w| w[0] < w[1]) && *cs.last().unwrap() <= c;
    if ok {
        Ok(())
    } else {
        Err(Error::BadParameters(format!("need p <= c_1 < … < c_n <= c; got p={p}, cs={cs:?}, c={c}")))
    }
}

/// `M_{c_1} × … × M_{c_n} × D_c`, dropping `D_c` when `c = c_n`.
pub fn make_partb_decomposable(p: u64, cs: &[u32], c: u32, lim: &Limits) -> Result<Group> {
    check_partb(p, cs, c)?;
    let mut factors = cs.iter().map(|&ci| make_mc(p, ci, lim)).collect::<Result<Vec<_>>>()?;
    if *cs.last().unwrap() != c {
        factors.push(make_dc(p, c, lim)?);
    }
    direct_product(&factors)
}

/// `M_{c_1} × … × M_{c_n} × D_c`, always keeping `D_c`; the ambient group
/// of the indecomposable example.
pub fn make_partb_ambient(p: u64, cs: &[u32], c: u32, lim: &Limits) -> Result<Group> {
    check_partb(p, cs, c)?;
    let mut factors = cs.iter().map(|&ci| make_mc(p, ci, lim)).collect::<Result<Vec<_>>>()?;
    factors.push(make_dc(p, c, lim)?);
    direct_product(&factors)
}

/// `G = ⟨a, X̂_1, …, X̂_n, Ê⟩ ≤ H` with `a = (a_1, …, a_n, y)`,
/// `X_i = ⟨a_i s_1, γ_2(M_{c_i})⟩` and `E = ⟨x, y^p⟩`. For `n = 1` and
/// `c_1 = c = p` this is `M_p` itself.
pub fn make_partb_indecomposable(p: u64, cs: &[u32], c: u32, lim: &Limits) -> Result<Group> {
    check_partb(p, cs, c)?;
    if cs.len() == 1 && cs[0] == c && c as u64 == p {
        return make_mc(p, c, lim);
    }
    if (c as u64) <= p {
        return Err(Error::BadParameters(format!("indecomposable example needs c > p; got p={p}, c={c}")));
    }
    let h = make_partb_ambient(p, cs, c, lim)?;
    let hp = h.downcast::<ProductGroup>().expect("product");
    let n = cs.len();
    let factors = hp.factors();
    let mut a_parts = Vec::with_capacity(n + 1);
    let mut gens: Vec<(String, GroupElement)> = Vec::new();
    for (i, (&ci, m)) in cs.iter().zip(factors).enumerate() {
        let ai = m.named("a").expect("M_c names a");
        let s1 = m.named("s1").expect("M_c names s1");
        gens.push((format!("f{i}.x"), hp.embed(i, &m.mul(&ai, &s1))));
        for j in 2..=ci {
            gens.push((format!("f{i}.s{j}"), hp.embed(i, &m.named(&format!("s{j}")).expect("s_j"))));
        }
        a_parts.push(ai);
    }
    let d = &factors[n];
    let (x, y) = (d.named("x").expect("x"), d.named("y").expect("y"));
    gens.push((format!("f{n}.x"), hp.embed(n, &x)));
    gens.push((format!("f{n}.yp"), hp.embed(n, &d.pow(&y, p as i64))));
    a_parts.push(y);
    gens.insert(0, ("a".into(), hp.combine(&a_parts)));
    let label = format!("partb_indecomposable({p}, {cs:?}, {c})");
    Ok(SubgroupGroup::build(&h, gens, label))
}
