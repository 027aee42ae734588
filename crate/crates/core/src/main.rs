use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use grpeq::catalog::{self, format_factors, load_group, scan_criteria};
use grpeq::config::Config;
use grpeq::expr::io::{read_expression, write_term};
use grpeq::gprogram::{build_and_program, write_program, ChainSpec};
use grpeq::reduction::{compile_coloring, decide_compiled, find_kh, DecideOptions, GraphInstance, KHCertificate};
use grpeq::solver::{check_function, color_bruteforce, eqnid_bruteforce, eqnsat_bruteforce, SolveBudget};
use grpeq::{verify, ElementSet, Error, Group, Subgroup};

#[derive(Parser)]
#[command(name = "grpeq", version, about = "Equations over finite solvable groups")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Global {
    /// Brute-force work cap, in assignments or coset tuples.
    #[arg(long, global = true)]
    budget: Option<u128>,
    /// Print a machine-readable JSON report.
    #[arg(long, global = true)]
    json: bool,
    /// Write the main artifact here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// `key = value` file with default budgets.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Series, Fitting length, stabilization constant and criteria.
    Analyze { group: String },
    /// Search for a (K, H) certificate and emit it.
    FindKh {
        group: String,
        /// Override M (must be at least the minimal one).
        #[arg(long)]
        m: Option<usize>,
    },
    /// Emit the AND program over the lower Fitting chain.
    AndProgram {
        group: String,
        n: usize,
        /// Check the truth table exhaustively.
        #[arg(long)]
        verify: bool,
    },
    /// Compile a coloring instance to an equation.
    Reduce {
        group: String,
        graph: String,
        #[arg(long, conflicts_with = "id", required_unless_present = "id")]
        sat: bool,
        #[arg(long)]
        id: bool,
        /// Certificate file to use instead of searching.
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Decide a compiled instance and compare with brute-force coloring.
    Decide {
        group: String,
        graph: String,
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Brute-force an expression file.
    SolveEqn {
        file: PathBuf,
        /// Decide EQNID instead of EQNSAT.
        #[arg(long)]
        id: bool,
        /// Group to use instead of the one named in the file header.
        #[arg(long)]
        group: Option<String>,
    },
    /// Applicability scan over the shipped catalog.
    ScanCatalog,
    /// Run the invariant suite.
    VerifyAll,
}

/// Exit status: 0 success, 1 negative decision, 2 input error, 3 budget
/// exceeded, 4 internal error.
enum Status {
    Ok,
    Negative,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::BudgetExceeded { .. } => 3,
        Error::Internal(_) => 4,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.global.json;
    match run(cli) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Negative) => ExitCode::from(1),
        Err(e) => {
            if json {
                println!("{}", json!({ "error": e.to_string(), "exit": exit_code(&e) }));
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(exit_code(&e))
        }
    }
}

struct Ctx {
    cfg: Config,
    json: bool,
    out: Option<PathBuf>,
}

impl Ctx {
    fn budget(&self) -> SolveBudget {
        SolveBudget(self.cfg.budget)
    }

    fn sink(&self) -> grpeq::Result<Box<dyn Write>> {
        Ok(match &self.out {
            Some(p) => Box::new(BufWriter::new(File::create(p)?)),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        })
    }

    /// Report to stdout, or to stderr when stdout carries the artifact.
    fn report(&self, value: serde_json::Value, text: String, artifact_on_stdout: bool) {
        let s = if self.json { value.to_string() } else { text };
        if artifact_on_stdout && self.out.is_none() {
            eprintln!("{}", s.trim_end());
        } else {
            println!("{}", s.trim_end());
        }
    }
}

fn run(cli: Cli) -> grpeq::Result<Status> {
    let mut cfg = match &cli.global.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    if let Some(b) = cli.global.budget {
        cfg.budget = b;
    }
    let ctx = Ctx { cfg, json: cli.global.json, out: cli.global.out };
    match cli.cmd {
        Cmd::Analyze { group } => analyze(&ctx, &group),
        Cmd::FindKh { group, m } => find_kh_cmd(&ctx, &group, m),
        Cmd::AndProgram { group, n, verify } => and_program(&ctx, &group, n, verify),
        Cmd::Reduce { group, graph, sat, id: _, cert } => reduce(&ctx, &group, &graph, sat, cert.as_deref()),
        Cmd::Decide { group, graph, cert } => decide(&ctx, &group, &graph, cert.as_deref()),
        Cmd::SolveEqn { file, id, group } => solve_eqn(&ctx, &file, id, group.as_deref()),
        Cmd::ScanCatalog => scan(&ctx),
        Cmd::VerifyAll => verify_all(&ctx),
    }
}

fn orders(s: &[Subgroup]) -> Vec<usize> {
    s.iter().map(Subgroup::order).collect()
}

fn chain(s: &[usize], sep: &str) -> String {
    s.iter().map(usize::to_string).collect::<Vec<_>>().join(sep)
}

fn analyze(ctx: &Ctx, spec: &str) -> grpeq::Result<Status> {
    let (name, g) = load_group(spec)?;
    let upper = orders(&g.upper_fitting_series()?);
    let mut lower = orders(&g.lower_fitting_series()?);
    lower.reverse();
    let lcs = orders(&g.lower_central_series());
    let derived = orders(&g.derived_series());
    let m = g.stabilization_constant();
    let scan = scan_criteria(&g)?;
    let fitl = upper.len() - 1;
    let mut t = format!("group {name}\norder={}\nFitL={fitl}\n", g.order());
    t += &format!("upper Fitting series: {}\n", chain(&upper, " <= "));
    t += &format!("lower Fitting series: {}\n", chain(&lower, " <= "));
    t += &format!("lower central series: {}\n", chain(&lcs, " >= "));
    t += &format!("derived series: {}\n", chain(&derived, " >= "));
    t += &format!("|Fit G|={}\nM={m}\n", g.fitting_subgroup().order());
    t += &format!("|G/U2|={} = {}\nverdict={}\n", scan.u2_index, format_factors(&scan.u2_factors), scan.verdict);
    if let Some(r) = &scan.reason {
        t += &format!("reason: {r}\n");
    }
    if let Some(p) = &scan.sat {
        t += &format!(
            "certificate (SAT track): steps={} |K|={} |H|={} colors={} M={}\n",
            p.steps.len(),
            p.cert.k_order,
            p.cert.h_order,
            p.cert.index,
            p.cert.m
        );
    }
    let v = json!({
        "group": name, "order": g.order(), "fitting_length": fitl,
        "upper_fitting": upper, "lower_fitting": lower, "lower_central": lcs,
        "derived": derived, "m": m, "scan": scan,
    });
    ctx.report(v, t, false);
    Ok(Status::Ok)
}

fn find_kh_cmd(ctx: &Ctx, spec: &str, m: Option<usize>) -> grpeq::Result<Status> {
    let (name, g) = load_group(spec)?;
    let mut cert = find_kh(&g)?;
    if let Some(m) = m {
        cert = cert.with_m(m)?;
    }
    let mut out = ctx.sink()?;
    out.write_all(cert.to_text(&name).as_bytes())?;
    out.flush()?;
    drop(out);
    let r = cert.report();
    let t = format!(
        "|K|={} |H|={} colors={} FitL(K)={} M={} (min {})",
        r.k_order, r.h_order, r.index, r.fitl_k, r.m, r.m_min
    );
    ctx.report(json!({ "group": name, "certificate": r }), t, true);
    Ok(Status::Ok)
}

fn and_program(ctx: &Ctx, spec: &str, n: usize, check: bool) -> grpeq::Result<Status> {
    let (name, g) = load_group(spec)?;
    let chain = ChainSpec::lower_fitting(&g)?;
    let t0 = Instant::now();
    let (p, target, tree) = build_and_program(&g, &chain, n, ctx.cfg.budget)?;
    let mut out = ctx.sink()?;
    write_program(&mut out, &name, &p)?;
    out.flush()?;
    drop(out);
    let mut ok = tree.check(&g);
    if check {
        let table: Vec<bool> = (0..1usize << n).map(|k| k == (1 << n) - 1).collect();
        ok &= check_function(&g, &p, &table, &ElementSet::singleton(g.order(), target))?;
    }
    let t = format!(
        "n={n} length={} arity={} target={target} verified={} ({} ms)",
        p.len(),
        chain.arity(n)?,
        if check { ok.to_string() } else { "skipped".into() },
        t0.elapsed().as_millis()
    );
    let v = json!({ "group": name, "n": n, "length": p.len(), "target": target, "verified": check.then_some(ok) });
    ctx.report(v, t, true);
    Ok(if ok { Status::Ok } else { Status::Negative })
}

fn load_graph(spec: &str) -> grpeq::Result<GraphInstance> {
    if Path::new(spec).exists() {
        return GraphInstance::parse(&std::fs::read_to_string(spec)?);
    }
    let lower = spec.to_ascii_lowercase();
    let num = |p: &str| lower.strip_prefix(p).and_then(|s| s.parse::<usize>().ok());
    match lower.as_str() {
        "edge" => GraphInstance::new(2, [(0, 1)], 3),
        "triangle" => GraphInstance::complete(3, 3),
        _ => {
            if let Some(n) = num("k") {
                GraphInstance::complete(n, 3)
            } else if let Some(n) = num("cycle") {
                GraphInstance::cycle(n, 3)
            } else {
                Err(Error::Input(format!("no graph file '{spec}' and not one of edge, triangle, k<n>, cycle<n>")))
            }
        }
    }
}

fn certificate(spec: &str, file: Option<&Path>) -> grpeq::Result<(String, KHCertificate)> {
    match file {
        Some(p) => KHCertificate::from_text(&std::fs::read_to_string(p)?),
        None => {
            let (name, g) = load_group(spec)?;
            Ok((name, find_kh(&g)?))
        }
    }
}

fn sized_graph(spec: &str, cert: &KHCertificate) -> grpeq::Result<GraphInstance> {
    let graph = load_graph(spec)?;
    let c = cert.report().index;
    if graph.colors() != c {
        eprintln!("note: the certificate has {c} cosets; deciding {c}-colorability");
    }
    graph.with_colors(c)
}

fn reduce(ctx: &Ctx, spec: &str, graph: &str, sat: bool, cert: Option<&Path>) -> grpeq::Result<Status> {
    let (name, cert) = certificate(spec, cert)?;
    let graph = sized_graph(graph, &cert)?;
    let inst = compile_coloring(&cert, &graph)?;
    let term = if sat { inst.sat_term(cert.group()) } else { inst.id_term() };
    let mut out = ctx.sink()?;
    write_term(&mut out, &name, cert.group(), &term)?;
    out.flush()?;
    drop(out);
    if let Some(p) = &ctx.out {
        let mut meta = p.clone().into_os_string();
        meta.push(".meta");
        let mode = if sat { "sat" } else { "id" };
        std::fs::write(&meta, format!("mode={mode}\n{}", inst.sidecar()))?;
    }
    let s = inst.summary();
    let t = format!(
        "{} instance: {} tokens, {} variables, R={} M={} h~={}",
        if sat { "EQNSAT" } else { "EQNID" },
        s.len,
        s.vars,
        s.r,
        s.m,
        s.h_tilde
    );
    ctx.report(json!({ "group": name, "mode": if sat { "sat" } else { "id" }, "summary": s }), t, true);
    Ok(Status::Ok)
}

fn decide(ctx: &Ctx, spec: &str, graph: &str, cert: Option<&Path>) -> grpeq::Result<Status> {
    let (name, cert) = certificate(spec, cert)?;
    let graph = sized_graph(graph, &cert)?;
    let inst = compile_coloring(&cert, &graph)?;
    let opts = DecideOptions { budget: ctx.cfg.budget, stream_limit: ctx.cfg.stream_limit, want_witness: true };
    let t0 = Instant::now();
    let d = decide_compiled(&cert, &graph, &inst, opts)?;
    let ms = t0.elapsed().as_millis();
    let oracle = color_bruteforce(&graph, ctx.budget())?;
    let agree = d.sat == oracle.is_some() && d.id != d.sat;
    let mut t = format!(
        "group {name}: |delta|={} sat={} id={} oracle={} {}\n",
        inst.len,
        d.sat,
        d.id,
        oracle.is_some(),
        if agree { "agreement" } else { "DISAGREEMENT" }
    );
    if let Some(w) = &d.witness {
        t += &format!("witness coloring {:?}, delta = {} = h~ ({:?} evaluation)\n", w.coloring, w.value, w.mode);
    }
    t += &format!("{} coset tuples in {ms} ms\n", d.tuples);
    let v = json!({
        "group": name, "length": inst.len.to_string(), "sat": d.sat, "id": d.id,
        "oracle": oracle.is_some(), "agreement": agree, "tuples": d.tuples.to_string(),
        "witness": d.witness.as_ref().map(|w| json!({ "coloring": w.coloring, "value": w.value, "mode": w.mode })),
    });
    ctx.report(v, t, false);
    if !agree {
        return Err(Error::Internal("decision disagrees with the coloring oracle".into()));
    }
    Ok(if d.sat { Status::Ok } else { Status::Negative })
}

fn solve_eqn(ctx: &Ctx, file: &Path, id: bool, group: Option<&str>) -> grpeq::Result<Status> {
    let (header, e) = read_expression(BufReader::new(File::open(file)?))?;
    let (name, g): (String, Group) = load_group(group.unwrap_or(&header.group))?;
    let fmt = |sigma: &grpeq::expr::Assignment| {
        sigma.iter().map(|(v, x)| format!("{v}={x}")).collect::<Vec<_>>().join(" ")
    };
    let (positive, witness) = if id {
        let o = eqnid_bruteforce(&g, &e, ctx.budget())?;
        (o.identity, o.counterexample)
    } else {
        let o = eqnsat_bruteforce(&g, &e, ctx.budget())?;
        (o.satisfiable, o.witness)
    };
    let (problem, answer) = match (id, positive) {
        (false, true) => ("EQNSAT", "satisfiable"),
        (false, false) => ("EQNSAT", "unsatisfiable"),
        (true, true) => ("EQNID", "identity"),
        (true, false) => ("EQNID", "not an identity"),
    };
    let mut t = format!("{problem} over {name} (order {}): {answer}\n", g.order());
    if let Some(w) = &witness {
        t += &format!("{}: {}\n", if id { "counterexample" } else { "witness" }, fmt(w));
    }
    let v = json!({
        "group": name, "problem": problem, "answer": positive, "tokens": e.len(),
        "vars": e.var_count(), "assignment": witness.as_ref().map(fmt),
    });
    ctx.report(v, t, false);
    Ok(if positive { Status::Ok } else { Status::Negative })
}

fn scan(ctx: &Ctx) -> grpeq::Result<Status> {
    let rows = catalog::scan_catalog();
    let mut t = format!("{:<7} {:<10} {:>5} {:>5} {:>10} {:<16} {:<6}\n", "name", "label", "order", "FitL", "|G/U2|", "verdict", "table");
    for r in &rows {
        let (order, d, u2, verdict) = match &r.report {
            Some(s) => (s.order.to_string(), s.fitting_length.to_string(), format_factors(&s.u2_factors), s.verdict.to_string()),
            None => ("-".into(), "-".into(), "-".into(), r.error.clone().unwrap_or_default()),
        };
        let table = match (r.expected_applicable, r.matches()) {
            (true, true) => "listed",
            (false, true) => "absent",
            _ => "MISMATCH",
        };
        t += &format!("{:<7} {:<10} {order:>5} {d:>5} {u2:>10} {verdict:<16} {table:<6}\n", r.name, r.label.unwrap_or("-"));
    }
    let all = rows.iter().all(|r| r.matches());
    ctx.report(json!({ "rows": rows, "all_match": all }), t, false);
    Ok(if all { Status::Ok } else { Status::Negative })
}

fn verify_all(ctx: &Ctx) -> grpeq::Result<Status> {
    let checks = verify::verify_all(&ctx.cfg);
    let mut t = String::new();
    for c in &checks {
        t += &format!("{} {:<24} {:>7} ms  {}\n", if c.passed { "PASS" } else { "FAIL" }, c.name, c.millis, c.detail);
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    t += &format!("{} checks, {failed} failed\n", checks.len());
    ctx.report(json!({ "checks": checks, "failed": failed }), t, false);
    Ok(if failed == 0 { Status::Ok } else { Status::Negative })
}
