//! Executable checks of the structural claims, each returning a report with
//! witnesses rather than a bare boolean.

mod random;
mod suite;

pub use random::{random_pairs, random_recipes};
pub use suite::{
    applicable_checks, exit_code, run_suite, suite_check_names, verify_description, CheckRecord, SuiteConfig,
    SuiteReport, DEFAULT_SEED, DESCRIPTION_CHECKS,
};

use crate::constructions::{make_mc, make_partb_decomposable, make_partb_indecomposable, SemidirectGroup};
use crate::cyclo::CycloRing;
use crate::error::{Error, Result};
use crate::group::{direct_product, Group, GroupElement, ProductGroup, QuotientGroup, SubgroupGroup};
use crate::series::{lower_central_series, spectrum, upper_central_series, upper_layers, CentralSeriesChain};
use crate::Limits;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::BTreeSet;

#[derive(Debug, Clone, Serialize)]
pub struct TheoremPart1Report {
    pub pass: bool,
    pub spectrum: BTreeSet<usize>,
    /// layers `j ≤ min(k, p-1)` missing although some `k ≥ 2` is present
    pub violations: Vec<usize>,
}

/// If the spectrum contains some `k ≥ 2` it must contain `1, …, min(k, p-1)`.
pub fn verify_theorem_part1(g: &Group) -> Result<TheoremPart1Report> {
    let spec = spectrum(g)?.spectrum;
    let p = g.prime() as usize;
    let top = spec.iter().copied().filter(|&k| k >= 2).max().unwrap_or(0);
    let violations: Vec<usize> = (1..=top.min(p - 1)).filter(|j| top >= 2 && !spec.contains(j)).collect();
    Ok(TheoremPart1Report { pass: violations.is_empty(), spectrum: spec, violations })
}

#[derive(Debug, Clone, Serialize)]
pub struct Lemma2Report {
    pub pass: bool,
    /// p odd, G nonabelian and generated by elements of order p
    pub applicable: bool,
    /// least element of order p in `Z_2 \ Z_1`
    pub witness: Option<GroupElement>,
}

fn second_layer_witness(g: &Group, ucs: &CentralSeriesChain) -> Option<GroupElement> {
    let t = ucs.terms();
    if t.len() < 3 {
        return None;
    }
    t[2].iter().find(|x| !t[1].contains(x) && g.has_order_p(x)).cloned()
}

pub fn verify_lemma2(g: &Group) -> Result<Lemma2Report> {
    let applicable = g.prime() % 2 == 1 && !g.is_abelian() && g.generated_by_order_p()?;
    let witness = second_layer_witness(g, &upper_central_series(g)?);
    Ok(Lemma2Report { pass: !applicable || witness.is_some(), applicable, witness })
}

/// Non-commuting `x`, `y` of order p with `(xy)^p = 1`. Tries the pairs
/// `(x, t)` with `t` the second-layer witness first, then every pair.
pub fn find_question_witness(g: &Group) -> Result<Option<(GroupElement, GroupElement)>> {
    let p = g.prime() as i64;
    let order_p = g.order_p_elements()?;
    let good = |x: &GroupElement, y: &GroupElement| !g.commutes(x, y) && g.is_identity(&g.pow(&g.mul(x, y), p));
    if let Some(t) = second_layer_witness(g, &upper_central_series(g)?) {
        if let Some(x) = order_p.iter().find(|x| good(x, &t)) {
            return Ok(Some((x.clone(), t)));
        }
    }
    let n = order_p.len() as u128;
    if n * n / 2 > 50 * g.limit() as u128 {
        return Err(Error::ResourceLimit { limit: g.limit() });
    }
    for (i, x) in order_p.iter().enumerate() {
        if let Some(y) = order_p[i + 1..].iter().find(|y| good(x, y)) {
            return Ok(Some((x.clone(), y.clone())));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, Serialize)]
pub struct QuestionReport {
    pub pass: bool,
    /// p odd and the second-layer lemma applies, so a witness must exist
    pub required: bool,
    pub witness: Option<(GroupElement, GroupElement)>,
}

pub fn verify_question(g: &Group) -> Result<QuestionReport> {
    let required = verify_lemma2(g)?.applicable;
    let witness = if g.is_abelian() { None } else { find_question_witness(g)? };
    Ok(QuestionReport { pass: !required || witness.is_some(), required, witness })
}

#[derive(Debug, Clone, Serialize)]
pub struct RegularityReport {
    pub pass: bool,
    pub class: usize,
    pub exhaustive: bool,
    pub pairs_checked: u64,
    pub counterexample: Option<(GroupElement, GroupElement)>,
}

/// Largest `#order-p · |G|` checked exhaustively; beyond it pairs are sampled.
pub const REGULARITY_EXHAUSTIVE_PAIRS: u128 = 2_000_000;
pub const REGULARITY_MIN_SAMPLES: usize = 10_000;

/// For class `≤ p-1`: `[x, y]^p = 1` whenever `x` has order p.
pub fn verify_regularity_power(g: &Group, samples: usize, seed: u64) -> Result<RegularityReport> {
    let class = upper_central_series(g)?.length();
    if class as u64 > g.prime() - 1 {
        return Err(Error::PreconditionFailed(format!("class {class} exceeds p - 1")));
    }
    let p = g.prime() as i64;
    let all = g.enumerate()?;
    let xs = g.order_p_elements()?;
    let bad = |x: &GroupElement, y: &GroupElement| !g.is_identity(&g.pow(&g.commutator(x, y), p));
    let exhaustive = xs.len() as u128 * all.order() as u128 <= REGULARITY_EXHAUSTIVE_PAIRS;
    let mut checked = 0u64;
    let mut counterexample = None;
    if exhaustive {
        'outer: for x in &xs {
            for y in all.iter() {
                checked += 1;
                if bad(x, y) {
                    counterexample = Some((x.clone(), y.clone()));
                    break 'outer;
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples.max(REGULARITY_MIN_SAMPLES) {
            let x = &xs[rng.gen_range(0..xs.len())];
            let y = &all.elements()[rng.gen_range(0..all.order())];
            checked += 1;
            if bad(x, y) {
                counterexample = Some((x.clone(), y.clone()));
                break;
            }
        }
    }
    Ok(RegularityReport { pass: counterexample.is_none(), class, exhaustive, pairs_checked: checked, counterexample })
}

#[derive(Debug, Clone, Serialize)]
pub struct ProductSpectrumReport {
    pub pass: bool,
    pub spectra: [BTreeSet<usize>; 2],
    pub spectrum_product: BTreeSet<usize>,
    pub classes: [usize; 2],
    pub class_product: usize,
    /// `Z_i(G_1 × G_2) = Z_i(G_1) × Z_i(G_2)` for every i
    pub center_law: bool,
}

/// Spectrum of a product is the union, class is the maximum.
pub fn verify_product_spectrum(g1: &Group, g2: &Group) -> Result<ProductSpectrumReport> {
    if g1.order()? == 1 || g2.order()? == 1 {
        return Err(Error::PreconditionFailed("factors must be nontrivial".into()));
    }
    let prod = direct_product(&[g1.clone(), g2.clone()])?;
    let pg = prod.downcast::<ProductGroup>().expect("product");
    let (u1, u2, up) = (upper_central_series(g1)?, upper_central_series(g2)?, upper_central_series(&prod)?);
    let term = |c: &CentralSeriesChain, i: usize| c.terms()[i.min(c.length())].clone();
    let mut center_law = true;
    for i in 0..=up.length() {
        let (a, b, z) = (term(&u1, i), term(&u2, i), term(&up, i));
        if z.order() != a.order() * b.order()
            || !z.iter().all(|x| a.contains(&pg.project(x, 0)) && b.contains(&pg.project(x, 1)))
        {
            center_law = false;
        }
    }
    let spectra = [spectrum(g1)?.spectrum, spectrum(g2)?.spectrum];
    let spectrum_product = crate::series::spectrum_from_series(&prod, &up)?.spectrum;
    let classes = [u1.length(), u2.length()];
    let class_product = up.length();
    let union: BTreeSet<usize> = spectra[0].union(&spectra[1]).copied().collect();
    let pass = center_law && union == spectrum_product && class_product == classes[0].max(classes[1]);
    Ok(ProductSpectrumReport { pass, spectra, spectrum_product, classes, class_product, center_law })
}

#[derive(Debug, Clone, Serialize)]
pub struct PropSameReport {
    pub pass: bool,
    /// `z_1 z_2` is not a pth power
    pub precondition_holds: bool,
    pub error: Option<String>,
    pub class_product: usize,
    pub class_quotient: usize,
    pub spectrum_product: BTreeSet<usize>,
    pub spectrum_quotient: BTreeSet<usize>,
    /// image of `(x_1, x_2)` in `Z_n(Q)` iff `x_i ∈ Z_n(G_i)`, over all elements and `n ≥ 1`
    pub sublemma_holds: bool,
    pub sublemma_elements: usize,
}

/// `Q = (G_1 × G_2)/⟨z_1 z_2⟩` has the class and spectrum of `G_1 × G_2`
/// when `z_1 z_2` is not a pth power. When it is, the report carries both
/// spectra with `error = "PreconditionFailed"`.
pub fn verify_prop_same(g1: &Group, g2: &Group, z1: &GroupElement, z2: &GroupElement) -> Result<PropSameReport> {
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
    let precondition_holds = !prod.is_pth_power(&z)?;
    let q = prod.quotient(&prod.closure(&[z])?)?;
    let qg = q.downcast::<QuotientGroup>().expect("quotient");

    let (u1, u2, up, uq) =
        (upper_central_series(g1)?, upper_central_series(g2)?, upper_central_series(&prod)?, upper_central_series(&q)?);
    let (l1, l2, lq) = (upper_layers(g1, &u1)?, upper_layers(g2, &u2)?, upper_layers(&q, &uq)?);
    let (a1, a2, aq, ap) = (g1.enumerate()?, g2.enumerate()?, q.enumerate()?, prod.enumerate()?);
    let layer = |all: &crate::group::Subgroup, ls: &[usize], x: &GroupElement| ls[all.position(x).expect("member")];
    let sublemma_holds = ap.iter().all(|x| {
        let i = layer(&a1, &l1, &pg.project(x, 0));
        let j = layer(&a2, &l2, &pg.project(x, 1));
        let k = layer(&aq, &lq, &qg.project(x));
        k.max(1) == i.max(j).max(1)
    });
    let spectrum_product = crate::series::spectrum_from_series(&prod, &up)?.spectrum;
    let spectrum_quotient = crate::series::spectrum_from_series(&q, &uq)?.spectrum;
    let (class_product, class_quotient) = (up.length(), uq.length());
    let same = class_product == class_quotient && spectrum_product == spectrum_quotient;
    Ok(PropSameReport {
        pass: precondition_holds && same && sublemma_holds,
        precondition_holds,
        error: (!precondition_holds).then(|| "PreconditionFailed".to_string()),
        class_product,
        class_quotient,
        spectrum_product,
        spectrum_quotient,
        sublemma_holds,
        sublemma_elements: ap.order(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct LemmaFactReport {
    pub pass: bool,
    pub outside_elements: usize,
    pub counterexample: Option<GroupElement>,
}

/// Every element of `M_c` outside the abelian bottom has order p.
pub fn verify_lemma_fact(p: u64, c: u32, lim: &Limits) -> Result<LemmaFactReport> {
    let m = make_mc(p, c, lim)?;
    let outside: Vec<GroupElement> =
        m.enumerate()?.iter().filter(|g| SemidirectGroup::top_coordinate(g) != 0).cloned().collect();
    let counterexample = outside.iter().find(|g| m.element_order(g) != p).cloned();
    Ok(LemmaFactReport { pass: counterexample.is_none(), outside_elements: outside.len(), counterexample })
}

#[derive(Debug, Clone, Serialize)]
pub struct EqPowersReport {
    pub pass: bool,
    pub zeta: Vec<u64>,
    pub checked: Vec<u32>,
    pub failures: Vec<u32>,
}

/// `[s_k, a, …, a]` (p-1 times) `= s_{k+p-1} = pζ·s_k` in `M_c` for every
/// `k` with `k + p - 1 ≤ c`.
pub fn verify_eq_powers(p: u64, c: u32, lim: &Limits) -> Result<EqPowersReport> {
    if (c as u64) < p {
        return Err(Error::PreconditionFailed(format!("needs c >= p; got p={p}, c={c}")));
    }
    let ring = CycloRing::new(p, c, lim.max_order)?;
    let zeta = ring.eq_powers_witness()?;
    let m = make_mc(p, c, lim)?;
    let sd = m.downcast::<SemidirectGroup>().expect("M_c is a semidirect product");
    let (inv, _) = ring.mc_bottom();
    let a = m.named("a").expect("a");
    let p_zeta = ring.scale(&zeta, p);
    let mut checked = Vec::new();
    let mut failures = Vec::new();
    for k in 1..=(c + 1 - p as u32) {
        let sk = m.named(&format!("s{k}")).expect("s_k");
        let target = m.named(&format!("s{}", k + p as u32 - 1)).expect("s_{k+p-1}");
        let chain = m.commutator_chain(&sk, &vec![a.clone(); p as usize - 1]);
        let via_ring = sd.bottom(&ring.to_bottom(&inv, &ring.mul(&p_zeta, &ring.s(k))));
        checked.push(k);
        if chain != target || via_ring != target {
            failures.push(k);
        }
    }
    Ok(EqPowersReport { pass: failures.is_empty(), zeta: zeta.0, checked, failures })
}

#[derive(Debug, Clone, Serialize)]
pub struct UnitIdentityReport {
    pub pass: bool,
    pub zeta: Vec<u64>,
    pub zeta_is_unit: bool,
}

/// `(ω - 1)^{p-1} = pζ` with ζ a unit, in the ring truncated at class p.
pub fn verify_unit_identity(p: u64, lim: &Limits) -> Result<UnitIdentityReport> {
    let ring = CycloRing::new(p, p as u32, lim.max_order)?;
    let zeta = ring.eq_powers_witness()?;
    let lhs = ring.pow(&ring.omega_minus_one(), p as u32 - 1);
    let zeta_is_unit = ring.is_unit(&zeta);
    let pass = lhs == ring.scale(&zeta, p) && zeta_is_unit;
    Ok(UnitIdentityReport { pass, zeta: zeta.0, zeta_is_unit })
}

#[derive(Debug, Clone, Serialize)]
pub struct PartbReport {
    pub pass: bool,
    /// single factor `M_p`: the subgroup construction is not used
    pub reduces_to_mc: bool,
    pub order_h: usize,
    pub order_g: usize,
    /// `|H : G| = p^n`
    pub index_in_h: Option<bool>,
    /// `U = ⟨X̂_1, …, X̂_n, Ê⟩` has index p in G
    pub u_is_maximal: Option<bool>,
    /// `γ_k(G) = γ_k(H)` for `2 ≤ k ≤ c`
    pub gammas: Option<bool>,
    pub centers_equal: bool,
    /// `a^p` equals the embedded `y^p`
    pub a_power: Option<bool>,
    pub class_g: usize,
    pub spectrum_g: BTreeSet<usize>,
    pub spectrum_h: BTreeSet<usize>,
    pub expected_spectrum: BTreeSet<usize>,
}

fn gamma(lcs: &CentralSeriesChain, k: usize) -> &crate::group::Subgroup {
    let c = lcs.length();
    &lcs.terms()[(c + 1).saturating_sub(k)]
}

/// Structure of the indecomposable group `G ≤ H` built from `p ≤ c_1 < … < c_n ≤ c`.
pub fn verify_partb_structure(p: u64, cs: &[u32], c: u32, lim: &Limits) -> Result<PartbReport> {
    let expected_spectrum: BTreeSet<usize> = (1..p as usize).chain(cs.iter().map(|&x| x as usize)).collect();
    let g = make_partb_indecomposable(p, cs, c, lim)?;
    let spectrum_g = spectrum(&g)?;
    let class_g = spectrum_g.class;
    let reduces_to_mc = g.downcast::<SubgroupGroup>().is_none();
    if reduces_to_mc {
        let h = make_partb_decomposable(p, cs, c, lim)?;
        let spectrum_h = spectrum(&h)?.spectrum;
        let centers_equal = g.center()?.order() == h.center()?.order();
        let pass = centers_equal
            && class_g == c as usize
            && spectrum_g.spectrum == expected_spectrum
            && spectrum_h == expected_spectrum;
        return Ok(PartbReport {
            pass,
            reduces_to_mc,
            order_h: h.order()?,
            order_g: g.order()?,
            index_in_h: None,
            u_is_maximal: None,
            gammas: None,
            centers_equal,
            a_power: None,
            class_g,
            spectrum_g: spectrum_g.spectrum,
            spectrum_h,
            expected_spectrum,
        });
    }
    let h = g.downcast::<SubgroupGroup>().expect("subgroup").parent().clone();
    let (order_h, order_g) = (h.order()?, g.order()?);
    let n = cs.len();
    let index_in_h = order_h as u128 == order_g as u128 * (p as u128).pow(n as u32);
    let u = g.closure(&g.generator_elements()[1..])?;
    let u_is_maximal = order_g == u.order() * p as usize;
    let (lg, lh) = (lower_central_series(&g)?, lower_central_series(&h)?);
    let gammas = (2..=c as usize).all(|k| gamma(&lg, k) == gamma(&lh, k));
    let centers_equal = g.center()? == h.center()?;
    let a = g.named("a").expect("a");
    let a_power = g.named(&format!("f{n}.yp")).is_some_and(|yp| g.pow(&a, p as i64) == yp);
    let spectrum_h = spectrum(&h)?.spectrum;
    let pass = index_in_h
        && u_is_maximal
        && gammas
        && centers_equal
        && a_power
        && class_g == c as usize
        && spectrum_g.spectrum == expected_spectrum
        && spectrum_h == expected_spectrum;
    Ok(PartbReport {
        pass,
        reduces_to_mc,
        order_h,
        order_g,
        index_in_h: Some(index_in_h),
        u_is_maximal: Some(u_is_maximal),
        gammas: Some(gammas),
        centers_equal,
        a_power: Some(a_power),
        class_g,
        spectrum_g: spectrum_g.spectrum,
        spectrum_h,
        expected_spectrum,
    })
}
