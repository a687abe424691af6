use clap::{Args, Parser, Subcommand};
use pgs_core::constructions::GroupDescription;
use pgs_core::group::{direct_factor_search, Group};
use pgs_core::series::{lower_central_series, spectrum, upper_central_series, CentralSeriesChain};
use pgs_core::verify::{exit_code, run_suite, verify_description, CheckRecord, SuiteConfig, DEFAULT_SEED};
use pgs_core::{Error, Limits};
use serde_json::{json, Value};
use std::io::Read;
use std::process::ExitCode;

/// Central series and spectra of finite p-groups.
#[derive(Parser)]
#[command(name = "pgs", version)]
struct Cli {
    #[command(flatten)]
    opts: Options,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Options {
    /// Emit machine-readable JSON
    #[arg(long, global = true)]
    json: bool,
    /// Largest group that may be enumerated
    #[arg(long, global = true, env = "PGS_MAX_ORDER", default_value_t = 2_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    max_order: u64,
    /// Largest group handed to the direct-factor search
    #[arg(long, global = true, default_value_t = 20_000, value_parser = clap::value_parser!(u64).range(1..))]
    decompose_bound: u64,
    /// Seed for randomized recipes and sampling
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Include per-check wall-clock times (breaks byte-stable output)
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Order, class, generators and upper-central layer orders
    Describe { file: String },
    /// Layers of the upper central series holding elements of order p
    Spectrum { file: String },
    /// Upper or lower central series with subgroup orders
    Series {
        file: String,
        #[arg(long, conflicts_with = "lower")]
        upper: bool,
        #[arg(long)]
        lower: bool,
    },
    /// Run structural checks on one group
    Verify {
        file: String,
        /// Comma-separated check names (default: all applicable)
        #[arg(long, value_delimiter = ',')]
        check: Option<Vec<String>>,
    },
    /// Run the built-in battery of checks
    Suite {
        /// Required: select the full battery
        #[arg(long, required = true)]
        paper: bool,
        /// Comma-separated check names
        #[arg(long, value_delimiter = ',')]
        check: Option<Vec<String>>,
    },
    /// Search for a nontrivial direct decomposition
    Decompose { file: String },
}

fn error_exit(e: &Error) -> u8 {
    match e {
        Error::ResourceLimit { .. } | Error::ParameterTooLarge(_) => 3,
        Error::InternalInconsistency(_) => 1,
        _ => 2,
    }
}

fn fail(e: Error) -> (Error, u8) {
    let code = error_exit(&e);
    (e, code)
}

fn read_description(path: &str) -> Result<GroupDescription, (Error, u8)> {
    let mut text = String::new();
    let read = if path == "-" {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| text = t)
    };
    read.map_err(|e| (Error::Parse(format!("cannot read {path}: {e}")), 2))?;
    GroupDescription::from_json_str(&text).map_err(fail)
}

struct Ctx {
    lim: Limits,
    json: bool,
}

impl Ctx {
    fn load(&self, path: &str) -> Result<(GroupDescription, Group), (Error, u8)> {
        let desc = read_description(path)?;
        let g = desc.build(&self.lim).map_err(fail)?;
        Ok((desc, g))
    }
}

fn fmt_set<T: std::fmt::Display>(it: impl IntoIterator<Item = T>) -> String {
    let parts: Vec<String> = it.into_iter().map(|x| x.to_string()).collect();
    format!("{{{}}}", parts.join(", "))
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

/// Least element of each term outside the previous one.
fn layer_witnesses(chain: &CentralSeriesChain) -> Vec<Option<String>> {
    let t = chain.terms();
    (0..t.len())
        .map(|i| {
            if i == 0 {
                return None;
            }
            t[i].iter().find(|x| !t[i - 1].contains(x)).map(|x| x.to_string())
        })
        .collect()
}

fn describe(ctx: &Ctx, file: &str) -> Result<u8, (Error, u8)> {
    let (desc, g) = ctx.load(file)?;
    let run = || -> pgs_core::Result<Value> {
        let ucs = upper_central_series(&g)?;
        Ok(json!({
            "description": desc.to_json(),
            "label": g.label(),
            "p": g.prime(),
            "order": g.order()?,
            "class": ucs.length(),
            "generators": g.generators().into_iter().map(|(n, _)| n).collect::<Vec<_>>(),
            "layer_orders": ucs.orders(),
        }))
    };
    let v = run().map_err(fail)?;
    if ctx.json {
        print_json(&v);
    } else {
        println!("{}", v["label"].as_str().unwrap_or_default());
        println!("order {}, class {}", v["order"], v["class"]);
        let gens: Vec<&str> = v["generators"].as_array().unwrap().iter().filter_map(Value::as_str).collect();
        println!("generators: {}", gens.join(", "));
        let orders: Vec<String> = v["layer_orders"].as_array().unwrap().iter().map(Value::to_string).collect();
        println!("upper central orders: {}", orders.join(", "));
    }
    Ok(0)
}

fn cmd_spectrum(ctx: &Ctx, file: &str) -> Result<u8, (Error, u8)> {
    let (_, g) = ctx.load(file)?;
    let r = spectrum(&g).map_err(fail)?;
    if ctx.json {
        print_json(&serde_json::to_value(&r).expect("serializable"));
    } else {
        println!("p = {}, class {}", r.p, r.class);
        println!("spectrum {}", fmt_set(&r.spectrum));
        println!("{:>5}  {:>10}  witness", "layer", "|Z_i|");
        for (i, order) in r.layer_orders.iter().enumerate() {
            let w = r.witnesses.get(&i).map(|w| w.to_string()).unwrap_or_else(|| "-".into());
            println!("{i:>5}  {order:>10}  {w}");
        }
    }
    Ok(0)
}

fn cmd_series(ctx: &Ctx, file: &str, lower: bool) -> Result<u8, (Error, u8)> {
    let (_, g) = ctx.load(file)?;
    let chain = if lower { lower_central_series(&g) } else { upper_central_series(&g) }.map_err(fail)?;
    let orders = chain.orders();
    let witnesses = layer_witnesses(&chain);
    // the lower series is printed from gamma_1 = G downwards
    let rows: Vec<Value> = if lower {
        let c = chain.length();
        (0..=c)
            .map(|k| json!({"term": format!("gamma_{}", k + 1), "order": orders[c - k], "witness": witnesses[c - k]}))
            .collect()
    } else {
        (0..orders.len())
            .map(|i| json!({"term": format!("Z_{i}"), "order": orders[i], "witness": witnesses[i]}))
            .collect()
    };
    if ctx.json {
        print_json(&json!({"kind": if lower { "lower" } else { "upper" }, "class": chain.length(), "terms": rows}));
    } else {
        for r in &rows {
            let w = r["witness"].as_str().unwrap_or("-");
            println!("{:<9} {:>10}  {w}", r["term"].as_str().unwrap(), r["order"].as_u64().unwrap_or_default());
        }
    }
    Ok(0)
}

fn print_records(ctx: &Ctx, records: &[CheckRecord], seed: Option<u64>) {
    if ctx.json {
        let mut v = json!({"records": records});
        if let Some(s) = seed {
            v["seed"] = json!(s);
        }
        print_json(&v);
        return;
    }
    for r in records {
        let status = if r.pass { "PASS" } else { "FAIL" };
        let err = r.error.as_ref().map(|e| format!("  [{e}]")).unwrap_or_default();
        let ms = r.millis.map(|m| format!("  {m} ms")).unwrap_or_default();
        println!("{status}  {:<22} {}{err}{ms}", r.check, r.params);
    }
    let passed = records.iter().filter(|r| r.pass).count();
    match seed {
        Some(s) => println!("{passed}/{} checks passed (seed {s})", records.len()),
        None => println!("{passed}/{} checks passed", records.len()),
    }
}

fn cmd_verify(ctx: &Ctx, file: &str, checks: Option<Vec<String>>, seed: u64, timings: bool) -> Result<u8, (Error, u8)> {
    let (desc, g) = ctx.load(file)?;
    let records = verify_description(&desc, &g, checks.as_deref(), &ctx.lim, seed, timings).map_err(fail)?;
    print_records(ctx, &records, None);
    Ok(exit_code(&records) as u8)
}

fn cmd_suite(ctx: &Ctx, checks: Option<Vec<String>>, seed: u64, timings: bool) -> Result<u8, (Error, u8)> {
    let cfg = SuiteConfig { limits: ctx.lim, seed, checks, timings, ..Default::default() };
    let report = run_suite(&cfg).map_err(fail)?;
    print_records(ctx, &report.records, Some(report.seed));
    Ok(report.exit_code() as u8)
}

fn cmd_decompose(ctx: &Ctx, file: &str) -> Result<u8, (Error, u8)> {
    let (_, g) = ctx.load(file)?;
    let split = direct_factor_search(&g, ctx.lim.decompose_bound).map_err(fail)?;
    let order = g.order().map_err(fail)?;
    let factor_orders = split.as_ref().map(|(a, b)| [a.order(), b.order()]);
    if ctx.json {
        print_json(&json!({"order": order, "decomposable": split.is_some(), "factor_orders": factor_orders}));
    } else {
        match factor_orders {
            Some([a, b]) => println!("decomposable: {order} = {a} x {b}"),
            None => println!("indecomposable (order {order})"),
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let o = &cli.opts;
    let lim = Limits { max_order: o.max_order as usize, decompose_bound: o.decompose_bound as usize };
    let ctx = Ctx { lim, json: o.json };
    let result = match cli.command {
        Command::Describe { file } => describe(&ctx, &file),
        Command::Spectrum { file } => cmd_spectrum(&ctx, &file),
        Command::Series { file, lower, .. } => cmd_series(&ctx, &file, lower),
        Command::Verify { file, check } => cmd_verify(&ctx, &file, check, o.seed, o.timings),
        Command::Suite { check, .. } => cmd_suite(&ctx, check, o.seed, o.timings),
        Command::Decompose { file } => cmd_decompose(&ctx, &file),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err((e, code)) => {
            if ctx.json {
                let v = json!({"error": e.kind(), "message": e.to_string()});
                eprintln!("{}", serde_json::to_string(&v).expect("serializable"));
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(code)
        }
    }
}
