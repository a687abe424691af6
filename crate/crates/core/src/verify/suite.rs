use super::*;
use crate::constructions::{make_b2, make_cyclic, make_dc, make_homocyclic, make_second_example, GroupDescription};
use crate::group::direct_factor_search;
use crate::series::{is_central_series, lower_layers_of_order_p, satisfies_ucs_characterization, SeriesKind};
use rayon::prelude::*;
use serde_json::{json, Value};
use std::time::Instant;

pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub limits: Limits,
    pub seed: u64,
    /// run only these check names
    pub checks: Option<Vec<String>>,
    pub random_recipes: usize,
    pub timings: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self { limits: Limits::default(), seed: DEFAULT_SEED, checks: None, random_recipes: 50, timings: false }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub check: String,
    pub params: Value,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub millis: Option<u64>,
}

impl CheckRecord {
    pub fn from_outcome(check: &str, params: Value, outcome: Result<(bool, Value)>, millis: Option<u64>) -> Self {
        match outcome {
            Ok((pass, witness)) => Self {
                check: check.into(),
                params,
                pass,
                witness: (!witness.is_null()).then_some(witness),
                error: None,
                message: None,
                millis,
            },
            Err(e) => Self {
                check: check.into(),
                params,
                pass: false,
                witness: None,
                error: Some(e.kind().into()),
                message: Some(e.to_string()),
                millis,
            },
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub records: Vec<CheckRecord>,
}

impl SuiteReport {
    pub fn exit_code(&self) -> i32 {
        exit_code(&self.records)
    }
}

/// 0 when everything passes, 1 on any failure not caused by a resource
/// guard, otherwise 3.
pub fn exit_code(records: &[CheckRecord]) -> i32 {
    if records.iter().all(|r| r.pass) {
        0
    } else if records.iter().any(|r| !r.pass && r.error.as_deref() != Some("ResourceLimit")) {
        1
    } else {
        3
    }
}

type Outcome = Result<(bool, Value)>;
type Job = Box<dyn Fn() -> Outcome + Send + Sync>;

struct Task {
    check: &'static str,
    params: Value,
    run: Job,
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("reports serialize")
}

fn set(xs: &[usize]) -> BTreeSet<usize> {
    xs.iter().copied().collect()
}

const CHECKS: &[&str] = &[
    "characterization",
    "dc_spectrum",
    "decompose",
    "eq_powers",
    "example_k",
    "first_example",
    "lcs_layers",
    "lemma2",
    "lemma_fact",
    "mc_spectrum",
    "partb",
    "product_spectrum",
    "prop_same",
    "question",
    "regularity",
    "second_example",
    "theorem_part1",
    "theorem_part1_random",
    "unit_identity",
];

pub fn suite_check_names() -> &'static [&'static str] {
    CHECKS
}

fn spectrum_task(check: &'static str, desc: GroupDescription, expected: BTreeSet<usize>, lim: Limits) -> Task {
    Task {
        check,
        params: desc.to_json(),
        run: Box::new(move || {
            let g = desc.build(&lim)?;
            let r = spectrum(&g)?;
            Ok((r.spectrum == expected, json!({"spectrum": r.spectrum, "class": r.class, "order": g.order()?})))
        }),
    }
}

fn tasks(cfg: &SuiteConfig) -> Vec<Task> {
    use GroupDescription::*;
    let lim = cfg.limits;
    let seed = cfg.seed;
    let mut out: Vec<Task> = Vec::new();

    for (p, c) in [(3, 2), (3, 3), (5, 2), (2, 3), (2, 4)] {
        out.push(spectrum_task("dc_spectrum", Dc { p, c }, set(&[1]), lim));
    }
    for (p, c) in [(2, 2), (2, 3), (3, 2), (3, 3), (3, 4), (3, 5), (5, 2), (5, 3)] {
        let expected: BTreeSet<usize> = (1..=((c - 1) as usize).min(p as usize - 1)).chain([c as usize]).collect();
        out.push(spectrum_task("mc_spectrum", Mc { p, c }, expected, lim));
    }

    let families: Vec<GroupDescription> = vec![
        Dc { p: 3, c: 2 },
        Dc { p: 3, c: 3 },
        Dc { p: 5, c: 2 },
        Dc { p: 2, c: 3 },
        Dc { p: 2, c: 4 },
        Mc { p: 2, c: 2 },
        Mc { p: 2, c: 3 },
        Mc { p: 2, c: 4 },
        Mc { p: 3, c: 2 },
        Mc { p: 3, c: 3 },
        Mc { p: 3, c: 4 },
        Mc { p: 3, c: 5 },
        Mc { p: 5, c: 2 },
        Mc { p: 5, c: 3 },
        Homocyclic { p: 3, k: 2, e: 1, s: 0 },
        Homocyclic { p: 3, k: 2, e: 2, s: 0 },
        Homocyclic { p: 3, k: 2, e: 2, s: 1 },
        Homocyclic { p: 5, k: 3, e: 1, s: 0 },
        B2 { p: 3, k: 2 },
        B2 { p: 5, k: 2 },
        B2 { p: 5, k: 3 },
        SecondExample { p: 3, k: 2, c: 2 },
        SecondExample { p: 3, k: 2, c: 3 },
        Partb { p: 2, cs: vec![2], c: 3, indecomposable: false },
        Partb { p: 2, cs: vec![2], c: 3, indecomposable: true },
        Partb { p: 2, cs: vec![2, 3], c: 4, indecomposable: true },
        Partb { p: 3, cs: vec![3], c: 3, indecomposable: true },
        Partb { p: 3, cs: vec![3], c: 4, indecomposable: true },
    ];
    for desc in families {
        out.push(Task {
            check: "theorem_part1",
            params: desc.to_json(),
            run: Box::new(move || {
                let r = verify_theorem_part1(&desc.build(&lim)?)?;
                Ok((r.pass, to_value(&r)))
            }),
        });
    }
    for (i, desc) in random_recipes(seed, cfg.random_recipes, 200_000).into_iter().enumerate() {
        out.push(Task {
            check: "theorem_part1_random",
            params: json!({"index": i, "recipe": desc.to_json()}),
            run: Box::new(move || {
                let g = desc.build(&lim)?;
                if g.order()? > 200_000 {
                    return Err(Error::InternalInconsistency("random recipe exceeds its order bound".into()));
                }
                let r = verify_theorem_part1(&g)?;
                Ok((r.pass, to_value(&r)))
            }),
        });
    }

    for desc in
        [Mc { p: 3, c: 2 }, Mc { p: 3, c: 3 }, B2 { p: 3, k: 2 }, B2 { p: 5, k: 2 }, SecondExample { p: 3, k: 2, c: 2 }]
    {
        let d2 = desc.clone();
        out.push(Task {
            check: "lemma2",
            params: desc.to_json(),
            run: Box::new(move || {
                let r = verify_lemma2(&d2.build(&lim)?)?;
                Ok((r.pass && r.witness.is_some(), to_value(&r)))
            }),
        });
        out.push(Task {
            check: "question",
            params: desc.to_json(),
            run: Box::new(move || {
                let r = verify_question(&desc.build(&lim)?)?;
                Ok((r.pass && r.witness.is_some(), to_value(&r)))
            }),
        });
    }
    out.push(Task {
        check: "lemma2",
        params: Dc { p: 3, c: 2 }.to_json(),
        run: Box::new(move || {
            let r = verify_lemma2(&make_dc(3, 2, &lim)?)?;
            Ok((r.pass && !r.applicable, to_value(&r)))
        }),
    });
    for c in [2, 3, 4] {
        out.push(Task {
            check: "question",
            params: Mc { p: 2, c }.to_json(),
            run: Box::new(move || {
                let w = find_question_witness(&make_mc(2, c, &lim)?)?;
                Ok((w.is_none(), json!({"witness": w})))
            }),
        });
    }

    for p in [2, 3, 5, 7] {
        out.push(Task {
            check: "unit_identity",
            params: json!({"p": p}),
            run: Box::new(move || {
                let r = verify_unit_identity(p, &lim)?;
                Ok((r.pass, to_value(&r)))
            }),
        });
    }
    for (p, c) in [(3, 4), (5, 5), (2, 3)] {
        out.push(Task {
            check: "eq_powers",
            params: json!({"p": p, "c": c}),
            run: Box::new(move || {
                let r = verify_eq_powers(p, c, &lim)?;
                Ok((r.pass, to_value(&r)))
            }),
        });
    }
    for (p, c) in [(2, 3), (3, 3), (3, 4), (5, 2)] {
        out.push(Task {
            check: "lemma_fact",
            params: json!({"p": p, "c": c}),
            run: Box::new(move || {
                let r = verify_lemma_fact(p, c, &lim)?;
                Ok((r.pass, to_value(&r)))
            }),
        });
    }

    for (i, (a, b)) in random_pairs(seed, 20).into_iter().enumerate() {
        out.push(Task {
            check: "product_spectrum",
            params: json!({"index": i, "factors": [a.to_json(), b.to_json()]}),
            run: Box::new(move || {
                let r = verify_product_spectrum(&a.build(&lim)?, &b.build(&lim)?)?;
                Ok((r.pass, to_value(&r)))
            }),
        });
    }

    for swap in [false, true] {
        out.push(Task {
            check: "prop_same",
            params: json!({"factors": [Dc { p: 3, c: 3 }.to_json(), B2 { p: 3, k: 2 }.to_json()], "z": ["x^9", "d"], "swapped": swap}),
            run: Box::new(move || {
                let d = make_dc(3, 3, &lim)?;
                let b = make_b2(3, 2, &lim)?;
                let z1 = d.pow(&d.named("x").expect("x"), 9);
                let z2 = b.named("d").expect("d");
                let r = if swap { verify_prop_same(&b, &d, &z2, &z1)? } else { verify_prop_same(&d, &b, &z1, &z2)? };
                Ok((r.pass, to_value(&r)))
            }),
        });
    }
    out.push(Task {
        check: "example_k",
        params: json!({"factors": [Dc { p: 3, c: 2 }.to_json(), Cyclic { p: 3, e: 2 }.to_json()], "z": ["x^3", "d^3"]}),
        run: Box::new(move || {
            let d = make_dc(3, 2, &lim)?;
            let c = make_cyclic(3, 2, &lim)?;
            let z1 = d.pow(&d.named("x").expect("x"), 3);
            let z2 = c.pow(&c.named("d").expect("d"), 3);
            let r = verify_prop_same(&d, &c, &z1, &z2)?;
            let pass = !r.precondition_holds
                && r.spectrum_quotient == set(&[1, 2])
                && r.spectrum_product == set(&[1])
                && r.sublemma_holds;
            Ok((pass, to_value(&r)))
        }),
    });

    for (k, e, s, class, expected) in
        [(2, 1, 0, 2, vec![1, 2]), (2, 2, 0, 4, vec![1, 2]), (2, 2, 1, 3, vec![1, 2]), (3, 1, 0, 3, vec![1, 2, 3])]
    {
        let p = if k == 3 { 5 } else { 3 };
        out.push(Task {
            check: "first_example",
            params: Homocyclic { p, k, e, s }.to_json(),
            run: Box::new(move || {
                let r = spectrum(&make_homocyclic(p, k, e, s, &lim)?)?;
                Ok((
                    r.class == class && r.spectrum == set(&expected),
                    json!({"class": r.class, "spectrum": r.spectrum}),
                ))
            }),
        });
    }

    out.push(Task {
        check: "second_example",
        params: SecondExample { p: 3, k: 2, c: 2 }.to_json(),
        run: Box::new(move || {
            let q = make_second_example(3, 2, 2, &lim)?;
            let r = spectrum(&q)?;
            let split = direct_factor_search(&q, lim.decompose_bound)?;
            let order = q.order()?;
            let pass = order == 729 && r.class == 2 && r.spectrum == set(&[1, 2]) && split.is_none();
            Ok((
                pass,
                json!({"order": order, "class": r.class, "spectrum": r.spectrum, "decomposable": split.is_some()}),
            ))
        }),
    });

    for (p, cs, c) in [(2, vec![2], 3), (2, vec![2, 3], 4), (3, vec![3], 3), (3, vec![3], 4)] {
        let params = json!({"p": p, "cs": cs, "c": c});
        out.push(Task {
            check: "partb",
            params,
            run: Box::new(move || {
                let r = verify_partb_structure(p, &cs, c, &lim)?;
                Ok((r.pass, to_value(&r)))
            }),
        });
    }
    out.push(Task {
        check: "decompose",
        params: Partb { p: 2, cs: vec![2], c: 3, indecomposable: false }.to_json(),
        run: Box::new(move || {
            let h = make_partb_decomposable(2, &[2], 3, &lim)?;
            let split = direct_factor_search(&h, lim.decompose_bound)?;
            let orders = split.as_ref().map(|(a, b)| [a.order(), b.order()]);
            Ok((split.is_some(), json!({"factor_orders": orders})))
        }),
    });
    out.push(Task {
        check: "decompose",
        params: Partb { p: 2, cs: vec![2], c: 3, indecomposable: true }.to_json(),
        run: Box::new(move || {
            let g = make_partb_indecomposable(2, &[2], 3, &lim)?;
            let split = direct_factor_search(&g, lim.decompose_bound)?;
            Ok((split.is_none() && g.order()? == 128, json!({"decomposable": split.is_some()})))
        }),
    });

    let elementary = Product(vec![Cyclic { p: 3, e: 1 }, Cyclic { p: 3, e: 1 }]);
    for desc in [Mc { p: 3, c: 2 }, Dc { p: 3, c: 2 }, B2 { p: 3, k: 2 }, Mc { p: 5, c: 4 }, elementary] {
        out.push(Task {
            check: "regularity",
            params: desc.to_json(),
            run: Box::new(move || {
                let g = desc.build(&lim)?;
                let r = verify_regularity_power(&g, REGULARITY_MIN_SAMPLES, seed)?;
                Ok((r.pass, to_value(&r)))
            }),
        });
    }
    out.push(Task {
        check: "regularity",
        params: B2 { p: 5, k: 4 }.to_json(),
        run: Box::new(move || {
            let r = verify_regularity_power(&make_b2(5, 4, &lim)?, REGULARITY_MIN_SAMPLES, seed)?;
            Ok((r.pass && r.pairs_checked >= REGULARITY_MIN_SAMPLES as u64, to_value(&r)))
        }),
    });

    let small: Vec<GroupDescription> = vec![
        Dc { p: 3, c: 2 },
        Dc { p: 2, c: 3 },
        Dc { p: 2, c: 4 },
        Mc { p: 2, c: 2 },
        Mc { p: 2, c: 3 },
        Mc { p: 2, c: 4 },
        Mc { p: 3, c: 2 },
        Mc { p: 3, c: 3 },
        Mc { p: 3, c: 4 },
        Mc { p: 3, c: 5 },
        Mc { p: 5, c: 2 },
        Mc { p: 5, c: 3 },
        Homocyclic { p: 3, k: 2, e: 1, s: 0 },
        Homocyclic { p: 3, k: 2, e: 1, s: 1 },
        B2 { p: 3, k: 2 },
        B2 { p: 5, k: 2 },
        Partb { p: 2, cs: vec![2], c: 3, indecomposable: false },
        Partb { p: 2, cs: vec![2], c: 3, indecomposable: true },
    ];
    for desc in small {
        out.push(Task {
            check: "characterization",
            params: desc.to_json(),
            run: Box::new(move || {
                let g = desc.build(&lim)?;
                if g.order()? > 729 {
                    return Err(Error::PreconditionFailed("order exceeds 3^6".into()));
                }
                characterization_outcome(&g)
            }),
        });
    }
    out.push(Task {
        check: "characterization",
        params: json!({"group": Dc { p: 3, c: 2 }.to_json(), "chain": "1 < <x^3> < Z < G"}),
        run: Box::new(move || {
            let d = make_dc(3, 2, &lim)?;
            let x3 = d.closure(&[d.pow(&d.named("x").expect("x"), 3)])?;
            let chain = CentralSeriesChain::new(
                SeriesKind::Custom,
                vec![d.trivial_subgroup(), x3, d.center()?, (*d.enumerate()?).clone()],
            );
            let central = is_central_series(&d, &chain)?;
            let sat = satisfies_ucs_characterization(&d, &chain)?;
            let equal = chain == upper_central_series(&d)?;
            Ok((central && !sat && !equal, json!({"central": central, "characterized": sat, "equals_ucs": equal})))
        }),
    });
    out.push(Task {
        check: "lcs_layers",
        params: Dc { p: 3, c: 3 }.to_json(),
        run: Box::new(move || {
            let layers = lower_layers_of_order_p(&make_dc(3, 3, &lim)?)?;
            Ok((layers == set(&[1, 3]), json!({"layers": layers})))
        }),
    });
    out
}

/// The upper series passes the characterization; the reversed lower series
/// passes exactly when it coincides with the upper one.
fn characterization_outcome(g: &Group) -> Outcome {
    let ucs = upper_central_series(g)?;
    let lcs = lower_central_series(g)?;
    let ucs_ok = satisfies_ucs_characterization(g, &ucs)?;
    let lcs_sat = satisfies_ucs_characterization(g, &lcs)?;
    let lcs_equal = lcs == ucs;
    Ok((
        ucs_ok && lcs_sat == lcs_equal,
        json!({"ucs": ucs_ok, "lcs_characterized": lcs_sat, "lcs_equals_ucs": lcs_equal}),
    ))
}

/// Runs the selected checks in parallel; records are ordered by check name
/// and then by their fixed position within the check.
pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    if let Some(names) = &cfg.checks {
        if let Some(bad) = names.iter().find(|n| !CHECKS.contains(&n.as_str())) {
            return Err(Error::BadParameters(format!("unknown check \"{bad}\"")));
        }
    }
    let selected: Vec<Task> = tasks(cfg)
        .into_iter()
        .filter(|t| cfg.checks.as_ref().is_none_or(|names| names.iter().any(|n| n == t.check)))
        .collect();
    let mut records: Vec<(usize, CheckRecord)> = selected
        .par_iter()
        .enumerate()
        .map(|(i, t)| {
            let start = Instant::now();
            let outcome = (t.run)();
            let millis = cfg.timings.then(|| start.elapsed().as_millis() as u64);
            (i, CheckRecord::from_outcome(t.check, t.params.clone(), outcome, millis))
        })
        .collect();
    records.sort_by(|a, b| a.1.check.cmp(&b.1.check).then(a.0.cmp(&b.0)));
    Ok(SuiteReport { seed: cfg.seed, records: records.into_iter().map(|(_, r)| r).collect() })
}

/// Checks that make sense for the group a description builds.
pub fn applicable_checks(desc: &GroupDescription, g: &Group) -> Result<Vec<&'static str>> {
    let mut out = vec!["characterization", "lemma2", "question", "theorem_part1"];
    if (upper_central_series(g)?.length() as u64) < g.prime() {
        out.push("regularity");
    }
    match desc {
        GroupDescription::Mc { p, c } => {
            out.push("lemma_fact");
            if *c as u64 >= *p {
                out.push("eq_powers");
            }
        }
        GroupDescription::Product(fs) if fs.len() == 2 => out.push("product_spectrum"),
        GroupDescription::CentralQuotient { group, .. } if matches!(&**group, GroupDescription::Product(fs) if fs.len() == 2) => {
            out.push("prop_same")
        }
        GroupDescription::Partb { indecomposable: true, .. } => out.push("partb"),
        _ => {}
    }
    out.sort_unstable();
    Ok(out)
}

/// Every check name usable with [`verify_description`].
pub const DESCRIPTION_CHECKS: &[&str] = &[
    "characterization",
    "eq_powers",
    "lemma2",
    "lemma_fact",
    "partb",
    "product_spectrum",
    "prop_same",
    "question",
    "regularity",
    "theorem_part1",
];

fn description_check(name: &str, desc: &GroupDescription, g: &Group, lim: &Limits, seed: u64) -> Outcome {
    use GroupDescription::*;
    let wrong_shape = || Err(Error::PreconditionFailed(format!("check {name} does not apply to {desc}")));
    match name {
        "theorem_part1" => {
            let r = verify_theorem_part1(g)?;
            Ok((r.pass, to_value(&r)))
        }
        "lemma2" => {
            let r = verify_lemma2(g)?;
            Ok((r.pass, to_value(&r)))
        }
        "question" => {
            let r = verify_question(g)?;
            Ok((r.pass, to_value(&r)))
        }
        "regularity" => {
            let r = verify_regularity_power(g, REGULARITY_MIN_SAMPLES, seed)?;
            Ok((r.pass, to_value(&r)))
        }
        "characterization" => characterization_outcome(g),
        "lemma_fact" => match desc {
            &Mc { p, c } => {
                let r = verify_lemma_fact(p, c, lim)?;
                Ok((r.pass, to_value(&r)))
            }
            _ => wrong_shape(),
        },
        "eq_powers" => match desc {
            &Mc { p, c } => {
                let r = verify_eq_powers(p, c, lim)?;
                Ok((r.pass, to_value(&r)))
            }
            _ => wrong_shape(),
        },
        "partb" => match desc {
            Partb { p, cs, c, indecomposable: true } => {
                let r = verify_partb_structure(*p, cs, *c, lim)?;
                Ok((r.pass, to_value(&r)))
            }
            _ => wrong_shape(),
        },
        "product_spectrum" => match desc {
            Product(fs) if fs.len() == 2 => {
                let pg = g.downcast::<ProductGroup>().expect("product");
                let r = verify_product_spectrum(&pg.factors()[0], &pg.factors()[1])?;
                Ok((r.pass, to_value(&r)))
            }
            _ => wrong_shape(),
        },
        "prop_same" => match desc {
            CentralQuotient { group, word } if matches!(&**group, Product(fs) if fs.len() == 2) => {
                let parent = g.downcast::<QuotientGroup>().expect("quotient").parent().clone();
                let pg = parent.downcast::<ProductGroup>().expect("product");
                let z = crate::constructions::evaluate_word(&parent, word)?;
                let (g1, g2) = (&pg.factors()[0], &pg.factors()[1]);
                let r = verify_prop_same(g1, g2, &pg.project(&z, 0), &pg.project(&z, 1))?;
                Ok((r.pass, to_value(&r)))
            }
            _ => wrong_shape(),
        },
        other => Err(Error::BadParameters(format!("unknown check \"{other}\""))),
    }
}

/// Runs `checks` (default: [`applicable_checks`]) against a built
/// description, in name order.
pub fn verify_description(
    desc: &GroupDescription,
    g: &Group,
    checks: Option<&[String]>,
    lim: &Limits,
    seed: u64,
    timings: bool,
) -> Result<Vec<CheckRecord>> {
    let mut names: Vec<String> = match checks {
        Some(c) => c.to_vec(),
        None => applicable_checks(desc, g)?.into_iter().map(String::from).collect(),
    };
    if let Some(bad) = names.iter().find(|n| !DESCRIPTION_CHECKS.contains(&n.as_str())) {
        return Err(Error::BadParameters(format!("unknown check \"{bad}\"")));
    }
    names.sort();
    names.dedup();
    Ok(names
        .par_iter()
        .map(|name| {
            let start = Instant::now();
            let outcome = description_check(name, desc, g, lim, seed);
            let millis = timings.then(|| start.elapsed().as_millis() as u64);
            let mut record = CheckRecord::from_outcome(name, desc.to_json(), outcome, millis);
            // a report may carry its own error tag (the unmet-precondition branch)
            if let Some(tag) = record.witness.as_ref().and_then(|w| w.get("error")).and_then(Value::as_str) {
                record.error = Some(tag.to_string());
            }
            record
        })
        .collect())
}
