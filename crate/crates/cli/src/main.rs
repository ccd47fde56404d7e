//! knap: exact (max,+) convolution and knapsack solvers.
//!
//! Exit codes: 0 success, 2 parse/validation error, 3 arithmetic
//! overflow, 4 benchmark verification mismatch.

use knap_cli::bench::{report_csv, report_json, report_summary, run_bench, BenchAlgo, BenchError, BenchSpec};
use knap_cli::formats::{self, checksum_profile, checksum_u64s, checksum_vector, checksum_window};
use knap_cli::gen::{gen_instance, GenKind, GenParams};
use knap_core::{
    bounded_range_conv, brute_separability, bounded_separability, classic_dp, fast_power,
    knapsack_given_mult, knapsack_infinite_mult, knapsack_small_sizes, knapsack_via_conv,
    naive_conv, naive_min_conv, naive_power, separability_profile, unbounded_small_sizes,
    unbounded_via_power, Error, KnapsackInstance, Multiplicity, SepStrategy, SolverConfig,
};
use std::process::ExitCode;

const USAGE: &str = "\
knap - exact (max,+) convolution and knapsack solvers

USAGE:
  knap conv --algo <naive|naive-min|bounded> [--e-max N] A.vec B.vec
  knap knapsack --algo <ALGO> [--seed S] [--c-const C] [--reps R] INSTANCE
      ALGO: classic | via-conv | small-sizes | unbounded-power |
            infinite-mult | given-mult | unbounded-small
  knap power [--algo <fast|naive>] [--prefix-cap L] A.vec K
  knap treesep [--algo <brute|naive-dp|spine|bounded>] [--m M] TREE
  knap gen --kind <bounded-value|bounded-size|unbounded|mult|tree>
      [--n N] [--t T] [--s-max S] [--v-max V] [--m-max M] [--w-max W]
      [--seed S] [--out FILE]
  knap bench --algos a,b,.. --sizes n1,n2,.. [--seeds s1,..] [--e-max N]
      [--reps R] [--verify] [--format json|csv] [--out FILE]
      algorithms: naive-conv bounded-conv classic-dp via-conv small-sizes

COMMON FLAGS:
  --format <text|json>   output shape for conv/knapsack/power/treesep
  --oracle               force the brute-force/classic reference path
  --out FILE             write the primary output to FILE
  --seed S               RNG seed (default: env KNAP_SEED, else 0)

Results print to stdout; diagnostics to stderr.";

#[derive(Debug)]
enum CliError {
    Usage(String),
    Core(Error),
    VerifyMismatch(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(Error::Domain(_)) => 2,
            CliError::Core(Error::Overflow(_)) => 3,
            CliError::VerifyMismatch(_) => 4,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(m) => m.clone(),
            CliError::Core(e) => e.to_string(),
            CliError::VerifyMismatch(m) => m.clone(),
        }
    }
}

/// Minimal flag parser: `--key value` pairs plus positional arguments.
struct Args {
    flags: std::collections::HashMap<String, String>,
    bools: std::collections::HashSet<String>,
    positional: Vec<String>,
}

const BOOL_FLAGS: &[&str] = &["--oracle", "--verify", "--help"];

impl Args {
    fn parse(argv: &[String]) -> Result<Args, CliError> {
        let mut flags = std::collections::HashMap::new();
        let mut bools = std::collections::HashSet::new();
        let mut positional = Vec::new();
        let mut i = 0;
        while i < argv.len() {
            let arg = &argv[i];
            if let Some(stripped) = arg.strip_prefix("--") {
                if BOOL_FLAGS.contains(&arg.as_str()) {
                    bools.insert(arg.clone());
                } else {
                    i += 1;
                    let value = argv
                        .get(i)
                        .ok_or_else(|| CliError::usage(format!("flag {arg} needs a value")))?;
                    flags.insert(stripped.to_string(), value.clone());
                }
            } else {
                positional.push(arg.clone());
            }
            i += 1;
        }
        Ok(Args {
            flags,
            bools,
            positional,
        })
    }

    fn get(&self, key: &str) -> Option<&str> {
        self.flags.get(key).map(|s| s.as_str())
    }

    fn get_u64(&self, key: &str) -> Result<Option<u64>, CliError> {
        self.get(key)
            .map(|v| {
                v.parse()
                    .map_err(|_| CliError::usage(format!("--{key} expects an integer, got {v:?}")))
            })
            .transpose()
    }

    fn has(&self, flag: &str) -> bool {
        self.bools.contains(flag)
    }

    fn positional(&self, idx: usize, what: &str) -> Result<&str, CliError> {
        self.positional
            .get(idx)
            .map(|s| s.as_str())
            .ok_or_else(|| CliError::usage(format!("missing {what}")))
    }
}

fn read_file(path: &str) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read {path}: {e}")))
}

fn seed_from(args: &Args) -> Result<u64, CliError> {
    if let Some(s) = args.get_u64("seed")? {
        return Ok(s);
    }
    match std::env::var("KNAP_SEED") {
        Ok(v) => v
            .parse()
            .map_err(|_| CliError::usage(format!("KNAP_SEED must be an integer, got {v:?}"))),
        Err(_) => Ok(0),
    }
}

fn solver_config(args: &Args) -> Result<SolverConfig, CliError> {
    Ok(SolverConfig {
        c: args.get_u64("c-const")?,
        repetitions: args.get_u64("reps")?,
        seed: seed_from(args)?,
    })
}

/// Writes the result to --out if given, else stdout.
fn emit(args: &Args, text: &str) -> Result<(), CliError> {
    match args.get("out") {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::usage(format!("cannot write {path}: {e}"))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn emit_value(args: &Args, label: &str, value: &str, checksum: u64) -> Result<(), CliError> {
    match args.get("format").unwrap_or("text") {
        "text" => emit(args, value),
        "json" => emit(
            args,
            &format!("{{\"algorithm\": \"{label}\", \"result\": \"{value}\", \"checksum\": \"{checksum}\"}}"),
        ),
        other => Err(CliError::usage(format!("unknown --format {other:?}"))),
    }
}

fn cmd_conv(args: &Args) -> Result<(), CliError> {
    let mut algo = args.get("algo").unwrap_or("naive").to_string();
    if args.has("--oracle") {
        algo = "naive".into();
    }
    let a = formats::parse_vector(&read_file(args.positional(0, "first vector file")?)?)
        .map_err(CliError::Usage)?;
    let b = formats::parse_vector(&read_file(args.positional(1, "second vector file")?)?)
        .map_err(CliError::Usage)?;
    let result = match algo.as_str() {
        "naive" => naive_conv(&a, &b)?,
        "naive-min" => naive_min_conv(&a, &b)?,
        "bounded" => {
            let e_max = match args.get_u64("e-max")? {
                Some(e) => e,
                None => a.max_finite().unwrap_or(0).max(b.max_finite().unwrap_or(0)).max(0) as u64,
            };
            bounded_range_conv(&a, &b, e_max)?
        }
        other => return Err(CliError::usage(format!("unknown conv algorithm {other:?}"))),
    };
    emit_value(args, &algo, &formats::format_vector(&result), checksum_vector(&result))
}

fn require_zero_one(inst: &KnapsackInstance, algo: &str) -> Result<Vec<(u64, u64)>, CliError> {
    if !inst.is_zero_one() {
        return Err(CliError::usage(format!(
            "algorithm {algo} needs a 0/1 instance"
        )));
    }
    Ok(inst.items.iter().map(|it| (it.size, it.value)).collect())
}

fn cmd_knapsack(args: &Args) -> Result<(), CliError> {
    let mut algo = args.get("algo").unwrap_or("classic").to_string();
    if args.has("--oracle") {
        algo = "classic".into();
    }
    let inst = formats::parse_instance(&read_file(args.positional(0, "instance file")?)?)
        .map_err(CliError::Usage)?;
    let cfg = solver_config(args)?;
    let t = inst.capacity;
    let (optimum, checksum) = match algo.as_str() {
        "classic" => {
            let p = classic_dp(&inst)?;
            (p.optimum(), checksum_profile(&p))
        }
        "via-conv" => {
            let items = require_zero_one(&inst, &algo)?;
            let p = knapsack_via_conv(t, &items, &cfg)?;
            (p.optimum(), checksum_profile(&p))
        }
        "small-sizes" => {
            let items = require_zero_one(&inst, &algo)?;
            let (v, w) = knapsack_small_sizes(t, &items, &cfg)?;
            (v, checksum_window(v, &w))
        }
        "unbounded-power" | "infinite-mult" | "unbounded-small" => {
            let items: Vec<(u64, u64)> = inst
                .items
                .iter()
                .map(|it| match it.mult {
                    Multiplicity::Unbounded => Ok((it.size, it.value)),
                    _ => Err(CliError::usage(format!(
                        "algorithm {algo} needs unbounded multiplicities (use `inf`)"
                    ))),
                })
                .collect::<Result<_, _>>()?;
            match algo.as_str() {
                "unbounded-power" => {
                    let p = unbounded_via_power(t, &items)?;
                    (p.optimum(), checksum_profile(&p))
                }
                "infinite-mult" => {
                    let v = knapsack_infinite_mult(t, &items, &cfg)?;
                    (v, checksum_u64s(&[v]))
                }
                _ => {
                    let v = unbounded_small_sizes(t, &items, &cfg)?;
                    (v, checksum_u64s(&[v]))
                }
            }
        }
        "given-mult" => {
            let items: Vec<(u64, u64, u64)> = inst
                .items
                .iter()
                .map(|it| match it.mult {
                    Multiplicity::Bounded(m) => Ok((it.size, it.value, m)),
                    _ => Err(CliError::usage(
                        "algorithm given-mult needs finite multiplicities".to_string(),
                    )),
                })
                .collect::<Result<_, _>>()?;
            let v = knapsack_given_mult(t, &items, &cfg)?;
            (v, checksum_u64s(&[v]))
        }
        other => {
            return Err(CliError::usage(format!(
                "unknown knapsack algorithm {other:?}"
            )))
        }
    };
    emit_value(args, &algo, &optimum.to_string(), checksum)
}

fn cmd_power(args: &Args) -> Result<(), CliError> {
    let algo = args.get("algo").unwrap_or("fast");
    let a = formats::parse_vector(&read_file(args.positional(0, "vector file")?)?)
        .map_err(CliError::Usage)?;
    let k: u64 = args
        .positional(1, "exponent")?
        .parse()
        .map_err(|_| CliError::usage("exponent must be a positive integer"))?;
    let cap = args.get_u64("prefix-cap")?;
    let result = match (algo, args.has("--oracle")) {
        ("naive", _) | (_, true) => {
            let full = naive_power(&a, k)?;
            match cap {
                Some(c) if (full.len() as u64) > c => full.slice(0, c as usize - 1)?,
                _ => full,
            }
        }
        ("fast", _) => fast_power(&a, k, cap)?,
        (other, _) => return Err(CliError::usage(format!("unknown power algorithm {other:?}"))),
    };
    emit_value(args, algo, &formats::format_vector(&result), checksum_vector(&result))
}

fn cmd_treesep(args: &Args) -> Result<(), CliError> {
    let mut algo = args.get("algo").unwrap_or("spine").to_string();
    if args.has("--oracle") {
        algo = "brute".into();
    }
    let tree = formats::parse_tree(&read_file(args.positional(0, "tree file")?)?)
        .map_err(CliError::Usage)?;
    let m = args.get_u64("m")?;
    let profile: Vec<u64> = match algo.as_str() {
        "brute" => match m {
            Some(m) => vec![brute_separability(&tree, m as usize)?],
            None => (0..=tree.vertex_count())
                .map(|m| brute_separability(&tree, m))
                .collect::<Result<_, _>>()?,
        },
        "naive-dp" => separability_profile(&tree, SepStrategy::NaiveDp)?,
        "spine" => separability_profile(&tree, SepStrategy::Spine)?,
        "bounded" => bounded_separability(&tree)?,
        other => {
            return Err(CliError::usage(format!(
                "unknown treesep algorithm {other:?}"
            )))
        }
    };
    let shown: Vec<u64> = match (algo.as_str(), m) {
        ("brute", _) => profile,
        (_, Some(m)) => {
            let idx = m as usize;
            if idx >= profile.len() {
                return Err(CliError::usage(format!("m={m} exceeds vertex count")));
            }
            vec![profile[idx]]
        }
        _ => profile,
    };
    let text = shown
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ");
    emit_value(args, &algo, &text, checksum_u64s(&shown))
}

fn cmd_gen(args: &Args) -> Result<(), CliError> {
    let kind = args
        .get("kind")
        .ok_or_else(|| CliError::usage("gen needs --kind"))?;
    let kind = GenKind::parse(kind)
        .ok_or_else(|| CliError::usage(format!("unknown generator kind {kind:?}")))?;
    let defaults = GenParams::default();
    let params = GenParams {
        n: args.get_u64("n")?.unwrap_or(defaults.n),
        t: args.get_u64("t")?.unwrap_or(defaults.t),
        s_max: args.get_u64("s-max")?.unwrap_or(defaults.s_max),
        v_max: args.get_u64("v-max")?.unwrap_or(defaults.v_max),
        m_max: args.get_u64("m-max")?.unwrap_or(defaults.m_max),
        w_max: args.get_u64("w-max")?.unwrap_or(defaults.w_max),
    };
    let text = gen_instance(kind, &params, seed_from(args)?).map_err(CliError::Usage)?;
    match args.get("out") {
        Some(path) => std::fs::write(path, &text)
            .map_err(|e| CliError::usage(format!("cannot write {path}: {e}"))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_list<T, F>(raw: &str, what: &str, parse: F) -> Result<Vec<T>, CliError>
where
    F: Fn(&str) -> Option<T>,
{
    raw.split(',')
        .filter(|s| !s.is_empty())
        .map(|tok| parse(tok).ok_or_else(|| CliError::usage(format!("bad {what} entry {tok:?}"))))
        .collect()
}

fn cmd_bench(args: &Args) -> Result<(), CliError> {
    let algorithms = parse_list(
        args.get("algos")
            .ok_or_else(|| CliError::usage("bench needs --algos"))?,
        "algorithm",
        BenchAlgo::parse,
    )?;
    let sizes = parse_list(
        args.get("sizes")
            .ok_or_else(|| CliError::usage("bench needs --sizes"))?,
        "size",
        |s| s.parse().ok(),
    )?;
    let seeds = match args.get("seeds") {
        Some(raw) => parse_list(raw, "seed", |s| s.parse().ok())?,
        None => vec![seed_from(args)?],
    };
    let spec = BenchSpec {
        algorithms,
        sizes,
        seeds,
        e_max: args.get_u64("e-max")?.unwrap_or(4),
        reps: args.get_u64("reps")?.unwrap_or(3) as usize,
        verify: args.has("--verify"),
    };
    let records = run_bench(&spec).map_err(|e| match e {
        BenchError::VerifyMismatch(..) => CliError::VerifyMismatch(e.to_string()),
        BenchError::Core(c) => CliError::Core(c),
        BenchError::BadSpec(m) => CliError::Usage(m),
    })?;
    // The timed report goes to --out; stdout stays deterministic.
    if let Some(path) = args.get("out") {
        let body = match args.get("format").unwrap_or("json") {
            "json" => report_json(&records),
            "csv" => report_csv(&records),
            other => return Err(CliError::usage(format!("unknown --format {other:?}"))),
        };
        std::fs::write(path, body)
            .map_err(|e| CliError::usage(format!("cannot write {path}: {e}")))?;
    }
    print!("{}", report_summary(&records));
    Ok(())
}

fn dispatch(argv: &[String]) -> Result<(), CliError> {
    let Some(command) = argv.first() else {
        return Err(CliError::usage(USAGE));
    };
    let args = Args::parse(&argv[1..])?;
    if args.has("--help") {
        println!("{USAGE}");
        return Ok(());
    }
    match command.as_str() {
        "conv" => cmd_conv(&args),
        "knapsack" => cmd_knapsack(&args),
        "power" => cmd_power(&args),
        "treesep" => cmd_treesep(&args),
        "gen" => cmd_gen(&args),
        "bench" => cmd_bench(&args),
        "help" | "--help" | "-h" => {
            println!("{USAGE}");
            Ok(())
        }
        other => Err(CliError::usage(format!(
            "unknown command {other:?}\n\n{USAGE}"
        ))),
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    match dispatch(&argv) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err.message());
            ExitCode::from(err.exit_code())
        }
    }
}
