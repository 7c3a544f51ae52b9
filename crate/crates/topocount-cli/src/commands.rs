use std::fmt;
use std::process::ExitCode;

use serde_json::json;

use topocount::{
    count_fixed, count_preorders, count_t0, count_topologies_naive, count_topologies_partition,
    feasible_primes, k_crt, k_report_direct, verify, CountKind, CountMethod, CountTable,
    CyclicAction, KReport, KValue, TheoremId, Tables, VerifyInstance, VerifyStatus,
    ENGINE_MAX_POINTS,
};

use crate::cache::{Cache, CacheError, Section};
use crate::{
    CacheAction, CacheArgs, Cli, Command, CountArgs, FixedArgs, Format, KindArg, KnArgs,
    KnMethodArg, MethodArg, VerifyArgs,
};

pub(crate) enum CliError {
    /// Arguments outside an engine's reach or domain (exit 2).
    OutOfRange(String),
    /// Cache integrity or io problem (exit 3).
    Cache(CacheError),
    /// The direct and crt routes disagreed (exit 4).
    MethodDisagreement(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::OutOfRange(msg) => write!(f, "{msg}"),
            CliError::Cache(e) => write!(f, "{e}"),
            CliError::MethodDisagreement(msg) => write!(f, "{msg}"),
        }
    }
}

impl From<topocount::Error> for CliError {
    fn from(e: topocount::Error) -> Self {
        CliError::OutOfRange(e.to_string())
    }
}

impl From<CacheError> for CliError {
    fn from(e: CacheError) -> Self {
        CliError::Cache(e)
    }
}

pub(crate) fn run(cli: &Cli) -> Result<ExitCode, CliError> {
    match &cli.command {
        Command::Count(args) => cmd_count(cli, args),
        Command::Fixed(args) => cmd_fixed(cli, args),
        Command::Kn(args) => cmd_kn(cli, args),
        Command::Verify(args) => cmd_verify(cli, args),
        Command::Cache(args) => cmd_cache(cli, args),
    }
}

// ---------------------------------------------------------------------------
// count
// ---------------------------------------------------------------------------

fn cmd_count(cli: &Cli, args: &CountArgs) -> Result<ExitCode, CliError> {
    let mut cache = Cache::load(&cli.cache)?;
    let n = args.n;
    let section = match args.kind {
        KindArg::T => Section::T,
        KindArg::T0 => Section::T0,
    };

    // auto serves warm entries; an explicit engine always recomputes, which
    // is also what surfaces a tampered cache value.
    if args.method == MethodArg::Auto {
        if let Some(value) = cache.lookup(section, n) {
            print_count(cli, section, n, value, CountMethod::Cache);
            return Ok(ExitCode::SUCCESS);
        }
    }

    let (value, method) = compute_count(&mut cache, args.kind, n, args.method, cli.jobs)?;
    cache.record(section, n, value, &method.to_string())?;
    cache.save()?;
    print_count(cli, section, n, value, method);
    Ok(ExitCode::SUCCESS)
}

fn compute_count(
    cache: &mut Cache,
    kind: KindArg,
    n: usize,
    method: MethodArg,
    jobs: usize,
) -> Result<(u64, CountMethod), CliError> {
    match (kind, method) {
        (KindArg::T, MethodArg::Naive) => Ok((count_topologies_naive(n)?, CountMethod::Naive)),
        (KindArg::T0, MethodArg::Naive) => {
            Err(CliError::OutOfRange("the naive engine counts kind T only".into()))
        }
        (KindArg::T, MethodArg::Backtrack) => Ok((count_preorders(n, jobs)?, CountMethod::Backtrack)),
        (KindArg::T0, MethodArg::Backtrack | MethodArg::Auto) => {
            Ok((count_t0(n, jobs)?, CountMethod::Backtrack))
        }
        (KindArg::T, MethodArg::Partition) => {
            Ok((partition_count(cache, n, jobs)?, CountMethod::PartitionFormula))
        }
        (KindArg::T0, MethodArg::Partition) => {
            Err(CliError::OutOfRange("the partition formula computes kind T only".into()))
        }
        (KindArg::T, MethodArg::Auto) => {
            if n < ENGINE_MAX_POINTS {
                Ok((count_preorders(n, jobs)?, CountMethod::Backtrack))
            } else if n == ENGINE_MAX_POINTS {
                Ok((partition_count(cache, n, jobs)?, CountMethod::PartitionFormula))
            } else {
                Err(CliError::OutOfRange(format!(
                    "T({n}) is out of enumeration reach (n <= {ENGINE_MAX_POINTS})"
                )))
            }
        }
    }
}

/// T(n) by the partition identity, pulling the T0 values it needs from the
/// cache and computing (and caching) the missing ones.
fn partition_count(cache: &mut Cache, n: usize, jobs: usize) -> Result<u64, CliError> {
    let mut t0 = CountTable::new(CountKind::T0);
    for k in 1..=n {
        match cache.lookup(Section::T0, k) {
            Some(v) => t0.insert(k, v, CountMethod::Cache),
            None => {
                let v = count_t0(k, jobs)?;
                cache.record(Section::T0, k, v, &CountMethod::Backtrack.to_string())?;
                t0.insert(k, v, CountMethod::Backtrack);
            }
        }
    }
    Ok(count_topologies_partition(n, &t0)?)
}

fn print_count(cli: &Cli, section: Section, n: usize, value: u64, method: CountMethod) {
    match cli.format {
        Format::Table => println!("{value}"),
        Format::Json => print_json(&json!({
            "kind": section.to_string(),
            "method": method.to_string(),
            "n": n,
            "value": value,
        })),
    }
}

// ---------------------------------------------------------------------------
// fixed
// ---------------------------------------------------------------------------

fn cmd_fixed(cli: &Cli, args: &FixedArgs) -> Result<ExitCode, CliError> {
    let action = CyclicAction::new(args.p, args.n)?;
    let value = count_fixed(&action, args.t0, cli.jobs)?;
    match cli.format {
        Format::Table => println!("{value}"),
        Format::Json => print_json(&json!({
            "fixed": value,
            "n": args.n,
            "p": args.p,
            "t0": args.t0,
        })),
    }
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// kn
// ---------------------------------------------------------------------------

fn cmd_kn(cli: &Cli, args: &KnArgs) -> Result<ExitCode, CliError> {
    let mut cache = Cache::load(&cli.cache)?;
    let n = args.n;

    let report = match args.method {
        KnMethodArg::Direct => {
            let t_table = t_table_for(&mut cache, &[n + 1], cli.jobs)?;
            cache.save()?;
            k_report_direct(n, 2, &t_table, cli.jobs)?
        }
        KnMethodArg::Crt => {
            let primes = effective_primes(args, n)?;
            let t_table = t_table_for(&mut cache, &residue_points(n, &primes), cli.jobs)?;
            cache.save()?;
            k_crt(n, &primes, &t_table)?
        }
        KnMethodArg::Both => {
            let primes = effective_primes(args, n)?;
            let t_table = t_table_for(&mut cache, &residue_points(n, &primes), cli.jobs)?;
            cache.save()?;
            let direct = k_report_direct(n, 2, &t_table, cli.jobs)?;
            let by_crt = k_crt(n, &primes, &t_table)?;
            let KValue::Unique(k) = direct.k_value else { unreachable!("direct is definite") };
            match &by_crt.k_value {
                KValue::Unique(v) if *v != k => {
                    return Err(CliError::MethodDisagreement(format!(
                        "direct k({n}) = {k} but the crt route resolved {v}"
                    )));
                }
                KValue::Ambiguous(c) if !c.contains(&k) => {
                    return Err(CliError::MethodDisagreement(format!(
                        "direct k({n}) = {k} lies outside the crt candidate class"
                    )));
                }
                _ => {}
            }
            // direct pins the value; keep the crt evidence in the report
            KReport { k_value: KValue::Unique(k), ..by_crt }
        }
    };

    if let KValue::Unique(k) = report.k_value {
        let label = match args.method {
            KnMethodArg::Crt => "crt",
            _ => "direct",
        };
        cache.record(Section::K, n, k, label)?;
        cache.save()?;
    }
    print_kn(cli, &report, method_label(args.method));
    Ok(ExitCode::SUCCESS)
}

fn method_label(method: KnMethodArg) -> &'static str {
    match method {
        KnMethodArg::Direct => "direct",
        KnMethodArg::Crt => "crt",
        KnMethodArg::Both => "both",
    }
}

fn effective_primes(args: &KnArgs, n: usize) -> Result<Vec<usize>, CliError> {
    let primes = args.primes.clone().unwrap_or_else(|| feasible_primes(n));
    if primes.is_empty() {
        return Err(CliError::OutOfRange(format!(
            "no primes within enumeration reach for n = {n}"
        )));
    }
    Ok(primes)
}

fn residue_points(n: usize, primes: &[usize]) -> Vec<usize> {
    let mut needed: Vec<usize> = primes.iter().map(|&p| n + p).collect();
    needed.push(n + 1);
    needed
}

/// Builds the T table covering `needed`, serving each value from the cache
/// when present and computing and caching it otherwise.
fn t_table_for(cache: &mut Cache, needed: &[usize], jobs: usize) -> Result<CountTable, CliError> {
    let mut table = CountTable::new(CountKind::T);
    for &m in needed {
        if table.get(m).is_some() {
            continue;
        }
        match cache.lookup(Section::T, m) {
            Some(v) => table.insert(m, v, CountMethod::Cache),
            None => {
                let (value, method) = if m < ENGINE_MAX_POINTS {
                    (count_preorders(m, jobs)?, CountMethod::Backtrack)
                } else if m == ENGINE_MAX_POINTS {
                    (partition_count(cache, m, jobs)?, CountMethod::PartitionFormula)
                } else {
                    return Err(CliError::OutOfRange(format!(
                        "T({m}) is out of enumeration reach (n <= {ENGINE_MAX_POINTS})"
                    )));
                };
                cache.record(Section::T, m, value, &method.to_string())?;
                table.insert(m, value, method);
            }
        }
    }
    Ok(table)
}

fn print_kn(cli: &Cli, report: &KReport, method: &str) {
    let (lo, hi) = report.bounds;
    match cli.format {
        Format::Table => {
            match &report.k_value {
                KValue::Unique(k) => println!("k({}) = {k}", report.n),
                KValue::Ambiguous(c) => {
                    println!("k({}): AMBIGUOUS ({} candidates)", report.n, c.len())
                }
            }
            println!("bounds: ({lo}, {hi})");
            if !report.residues_used.is_empty() {
                let parts: Vec<String> =
                    report.residues_used.iter().map(|r| r.to_string()).collect();
                println!("residues: {}", parts.join(", "));
            }
            if let Some(class) = &report.solution {
                println!("solution: {class}");
            }
            println!("method: {method}");
            if let KValue::Ambiguous(c) = &report.k_value {
                let rendered: Vec<String> = c.iter().map(|v| v.to_string()).collect();
                println!("candidates: {}", rendered.join(" "));
            }
        }
        Format::Json => {
            let mut doc = json!({
                "ambiguous": matches!(report.k_value, KValue::Ambiguous(_)),
                "bounds": [lo, hi],
                "method": method,
                "n": report.n,
                "residues": report.residues_used.iter().map(|r| {
                    json!({"modulus": r.modulus(), "value": r.value()})
                }).collect::<Vec<_>>(),
                "solution": report.solution.map(|s| {
                    json!({"modulus": s.modulus(), "value": s.value()})
                }),
            });
            let obj = doc.as_object_mut().expect("kn report is an object");
            match &report.k_value {
                KValue::Unique(k) => {
                    obj.insert("k".into(), json!(k));
                }
                KValue::Ambiguous(c) => {
                    obj.insert("k".into(), serde_json::Value::Null);
                    obj.insert("candidates".into(), json!(c));
                }
            }
            print_json(&doc);
        }
    }
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

fn cmd_verify(cli: &Cli, args: &VerifyArgs) -> Result<ExitCode, CliError> {
    let theorems: Vec<TheoremId> = if args.all {
        TheoremId::ALL.to_vec()
    } else if let Some(name) = &args.theorem {
        vec![name.parse().map_err(CliError::OutOfRange)?]
    } else {
        return Err(CliError::OutOfRange("pass --theorem NAME or --all".into()));
    };

    // verification always recomputes its ground truth; writing the fresh
    // values through the cache is what catches a tampered entry.
    let mut cache = Cache::load(&cli.cache)?;
    let tables = Tables::compute(cli.jobs)?;
    for (n, entry) in tables.t.iter() {
        cache.record(Section::T, n, entry.value, &entry.method.to_string())?;
    }
    for (n, entry) in tables.t0.iter() {
        cache.record(Section::T0, n, entry.value, &entry.method.to_string())?;
    }
    cache.save()?;

    let mut results = Vec::new();
    for &theorem in &theorems {
        results.extend(verify(theorem, &tables, cli.jobs));
    }
    print_verify(cli, &results);
    let failed = results.iter().filter(|r| r.status == VerifyStatus::Fail).count();
    Ok(if failed > 0 { ExitCode::from(1) } else { ExitCode::SUCCESS })
}

fn print_verify(cli: &Cli, results: &[VerifyInstance]) {
    let pass = results.iter().filter(|r| r.status == VerifyStatus::Pass).count();
    let fail = results.iter().filter(|r| r.status == VerifyStatus::Fail).count();
    let skip = results.iter().filter(|r| r.status == VerifyStatus::Skipped).count();
    match cli.format {
        Format::Table => {
            let theorem_w = results
                .iter()
                .map(|r| r.theorem.to_string().len())
                .chain(["theorem".len()])
                .max()
                .unwrap_or(7);
            let instance_w = results
                .iter()
                .map(|r| r.instance.len())
                .chain(["instance".len()])
                .max()
                .unwrap_or(8);
            println!("{:theorem_w$}  {:instance_w$}  {:6}  detail", "theorem", "instance", "status");
            for r in results {
                println!(
                    "{:theorem_w$}  {:instance_w$}  {:6}  {}",
                    r.theorem.to_string(),
                    r.instance,
                    r.status.to_string(),
                    r.detail
                );
            }
            println!("{pass} pass, {fail} fail, {skip} skip");
        }
        Format::Json => print_json(&json!({
            "results": results.iter().map(|r| json!({
                "detail": r.detail,
                "instance": r.instance,
                "status": r.status.to_string(),
                "theorem": r.theorem.to_string(),
            })).collect::<Vec<_>>(),
            "summary": {"fail": fail, "pass": pass, "skip": skip},
        })),
    }
}

// ---------------------------------------------------------------------------
// cache
// ---------------------------------------------------------------------------

fn cmd_cache(cli: &Cli, args: &CacheArgs) -> Result<ExitCode, CliError> {
    match args.action {
        CacheAction::Show => {
            let cache = Cache::load(&cli.cache)?;
            match cli.format {
                Format::Table => {
                    let file = cache.file();
                    println!("schema_version: {}", file.schema_version);
                    for (name, section) in
                        [("T", &file.t), ("T0", &file.t0), ("k", &file.k)]
                    {
                        for (n, e) in section {
                            println!("{name}({n}) = {}  [{}, {}]", e.value, e.method, e.at);
                        }
                    }
                }
                Format::Json => {
                    println!(
                        "{}",
                        serde_json::to_string_pretty(cache.file()).expect("cache serializes")
                    );
                }
            }
        }
        CacheAction::Clear => {
            let removed = Cache::remove(&cli.cache)?;
            match cli.format {
                Format::Table => {
                    if removed {
                        println!("cache cleared: {}", cli.cache.display());
                    } else {
                        println!("no cache file at {}", cli.cache.display());
                    }
                }
                Format::Json => print_json(&json!({"cleared": removed})),
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn print_json(value: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("report serializes"));
}
