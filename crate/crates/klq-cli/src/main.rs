//! Command-line front end: every computation of the engine behind stable
//! text and JSON output.
//!
//! Exit codes: 0 on success, 1 on malformed input, 2 on well-formed but
//! undefined queries (incomparable elements, dimension mismatches, or an
//! exhausted exact-arithmetic range).

use clap::{Args, Parser, Subcommand};
use klq::affcosetmat::{AffBlockSpec, PeriodicMatrix};
use klq::affsymgroup::{self, AffPerm};
use klq::cosetmat::{BlockSpec, CosetMatrix};
use klq::error::Error;
use klq::oracle;
use klq::quiverorbits as qo;
use klq::symgroup::{self, Perm};

#[derive(Parser, Debug)]
#[command(name = "klq", version, about = "Kazhdan-Lusztig and quiver-orbit IC polynomial calculator")]
struct Cli {
    /// Emit JSON instead of plain text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Evaluate queries from a file, one command line per row.
    #[arg(long, value_name = "FILE")]
    batch: Option<std::path::PathBuf>,
    /// Worker threads for batch evaluation.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    cmd: Option<Cmd>,
}

#[derive(Subcommand, Debug, Clone)]
enum Cmd {
    /// Kazhdan-Lusztig polynomial P_{y,w} of the symmetric group.
    Kl(PairArgs),
    /// Kazhdan-Lusztig polynomial of the (extended) affine symmetric group.
    Akl(AffPairArgs),
    /// Bruhat order comparison y <= w.
    Bruhat(BruhatArgs),
    /// Coxeter length of a permutation or window.
    Len(LenArgs),
    /// Longest double-coset representative of a coset matrix.
    Wm(WmArgs),
    /// The double-coset invariant matrix of a permutation.
    Psi(PsiArgs),
    /// Cancellation: delete a position from a permutation pair or an entry
    /// from a coset matrix.
    Cancel(CancelArgs),
    /// Intersection cohomology polynomial IC_{m,m'} of an orbit closure.
    Ic(IcArgs),
    /// Inverse IC polynomial.
    Icinv(IcArgs),
    /// The cancellation-reduced encodings of a comparable pair.
    Reduce(IcArgs),
    /// Dimension of the nilpotent orbit of a multisegment.
    Orbitdim(OrbitdimArgs),
    /// Maximal elements above a multisegment (cyclic), or the dense orbit
    /// of its dimension vector (linear).
    Maxelts(OrbitdimArgs),
    /// Decomposition number of a Weyl module at a root of unity.
    Decomp(DecompArgs),
    /// Run the oracle self-test suite.
    Selftest(SelftestArgs),
}

#[derive(Args, Debug, Clone)]
struct PairArgs {
    /// One-line notation, e.g. "1 2 8 4 5 6 3 7 9" or "128456379".
    #[arg(long)]
    y: String,
    #[arg(long)]
    w: String,
}

#[derive(Args, Debug, Clone)]
struct AffPairArgs {
    /// Window "(3,4,2)" or Coxeter word "t s1 s2" (words need --d).
    #[arg(long)]
    y: String,
    #[arg(long)]
    w: String,
    /// Degree, required for Coxeter-word input.
    #[arg(long)]
    d: Option<usize>,
}

#[derive(Args, Debug, Clone)]
struct BruhatArgs {
    #[arg(long)]
    y: String,
    #[arg(long)]
    w: String,
    /// Interpret the inputs as affine windows.
    #[arg(long)]
    affine: bool,
    #[arg(long)]
    d: Option<usize>,
}

#[derive(Args, Debug, Clone)]
struct LenArgs {
    #[arg(long)]
    w: String,
    #[arg(long)]
    affine: bool,
    #[arg(long)]
    d: Option<usize>,
}

#[derive(Args, Debug, Clone)]
struct WmArgs {
    /// Matrix: JSON ({"entries":[[..]],..} or affine {"n":..,"rows":[..]})
    /// or a plain grid "1 0 ; 0 1" (affine grids mark the (1,1) entry
    /// with '*').
    #[arg(long)]
    matrix: String,
    #[arg(long)]
    affine: bool,
    /// Anchor of the first row block (affine only).
    #[arg(long, default_value_t = 1)]
    banchor: i64,
    /// Anchor of the first column block (affine only).
    #[arg(long, default_value_t = 1)]
    canchor: i64,
}

#[derive(Args, Debug, Clone)]
struct PsiArgs {
    #[arg(long)]
    w: String,
    /// Row block sizes, e.g. "1,4,3,1".
    #[arg(long)]
    rowsums: String,
    /// Column block sizes.
    #[arg(long)]
    colsums: String,
    #[arg(long)]
    affine: bool,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long, default_value_t = 1)]
    banchor: i64,
    #[arg(long, default_value_t = 1)]
    canchor: i64,
}

#[derive(Args, Debug, Clone)]
struct CancelArgs {
    /// Permutation or window input.
    #[arg(long, conflicts_with = "matrix")]
    w: Option<String>,
    /// Matrix input (entry cancellation).
    #[arg(long)]
    matrix: Option<String>,
    /// Position (permutation mode) or row (matrix mode).
    #[arg(long, allow_hyphen_values = true)]
    i: i64,
    /// Column (matrix mode only).
    #[arg(long, allow_hyphen_values = true)]
    j: Option<i64>,
    #[arg(long)]
    affine: bool,
    #[arg(long)]
    d: Option<usize>,
}

#[derive(Args, Debug, Clone)]
struct IcArgs {
    /// Multisegment "[1,2]+[2,3]" (append " mod n" or pass --mod for the
    /// cyclic case).
    #[arg(long)]
    m: String,
    #[arg(long)]
    m2: String,
    /// Cyclic modulus.
    #[arg(long = "mod")]
    modulus: Option<u32>,
}

#[derive(Args, Debug, Clone)]
struct OrbitdimArgs {
    #[arg(long)]
    m: String,
    #[arg(long = "mod")]
    modulus: Option<u32>,
}

#[derive(Args, Debug, Clone)]
struct DecompArgs {
    /// Partition, e.g. "(3,1)".
    #[arg(long)]
    lambda: String,
    #[arg(long)]
    mu: String,
    /// Quantum characteristic (the cyclic modulus).
    #[arg(long)]
    n: u32,
    /// Number of parts to pad to.
    #[arg(long)]
    k: usize,
}

#[derive(Args, Debug, Clone)]
struct SelftestArgs {
    /// Shrink the suite sizes.
    #[arg(long)]
    quick: bool,
}

/// The text and JSON renderings of one command result.
struct Output {
    text: String,
    json: serde_json::Value,
}

fn main() {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            // help and version requests are not errors
            use clap::error::ErrorKind::*;
            if matches!(e.kind(), DisplayHelp | DisplayVersion) {
                print!("{e}");
                std::process::exit(0);
            }
            eprintln!("{e}");
            std::process::exit(1);
        }
    };
    std::process::exit(run_cli(cli));
}

fn run_cli(cli: Cli) -> i32 {
    if let Some(path) = &cli.batch {
        if cli.cmd.is_some() {
            eprintln!("--batch replaces the subcommand");
            return 1;
        }
        return run_batch(path, cli.jobs, cli.json, cli.seed);
    }
    let Some(cmd) = cli.cmd.clone() else {
        eprintln!("a subcommand or --batch FILE is required; see --help");
        return 1;
    };
    match run_command(&cmd, cli.seed) {
        Ok(out) => {
            if cli.json {
                println!("{}", out.json);
            } else {
                println!("{}", out.text);
            }
            if let Cmd::Selftest(_) = cmd {
                if out.json["failed"].as_u64().unwrap_or(0) > 0 {
                    return 2;
                }
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::Invalid(_) | Error::IndexOutOfRange(_) => 1,
        _ => 2,
    }
}

fn run_batch(path: &std::path::Path, jobs: usize, json: bool, seed: u64) -> i32 {
    let content = match std::fs::read_to_string(path) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("cannot read {}: {e}", path.display());
            return 1;
        }
    };
    let lines: Vec<(usize, String)> = content
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim().to_string()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect();
    let eval = |(no, line): &(usize, String)| -> (usize, Result<Output, (i32, String)>) {
        let parsed = match split_query(line) {
            Ok(tokens) => {
                let mut argv = vec!["klq".to_string()];
                argv.extend(tokens);
                Cli::try_parse_from(&argv).map_err(|e| (1, e.to_string()))
            }
            Err(e) => Err((1, e)),
        };
        let res = parsed.and_then(|sub| {
            let Some(cmd) = sub.cmd else {
                return Err((1, "batch lines must contain a subcommand".into()));
            };
            run_command(&cmd, seed).map_err(|e| (exit_code_for(&e), e.to_string()))
        });
        (*no, res)
    };
    let results: Vec<(usize, Result<Output, (i32, String)>)> = if jobs > 1 {
        use rayon::prelude::*;
        let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build().unwrap();
        pool.install(|| lines.par_iter().map(eval).collect())
    } else {
        lines.iter().map(eval).collect()
    };
    let mut worst = 0;
    for (no, res) in results {
        match res {
            Ok(out) => {
                if json {
                    println!("{}", out.json);
                } else {
                    println!("{}", out.text);
                }
            }
            Err((code, msg)) => {
                eprintln!("line {no}: {msg}");
                worst = worst.max(code);
            }
        }
    }
    worst
}

/// Splits a batch line into tokens, honoring double quotes.
fn split_query(line: &str) -> Result<Vec<String>, String> {
    let mut tokens = Vec::new();
    let mut cur = String::new();
    let mut quoted = false;
    for ch in line.chars() {
        match ch {
            '"' => quoted = !quoted,
            c if c.is_whitespace() && !quoted => {
                if !cur.is_empty() {
                    tokens.push(std::mem::take(&mut cur));
                }
            }
            c => cur.push(c),
        }
    }
    if quoted {
        return Err("unterminated quote".into());
    }
    if !cur.is_empty() {
        tokens.push(cur);
    }
    Ok(tokens)
}

fn run_command(cmd: &Cmd, seed: u64) -> klq::Result<Output> {
    match cmd {
        Cmd::Kl(a) => {
            let y: Perm = a.y.parse()?;
            let w: Perm = a.w.parse()?;
            let p = symgroup::kl_poly(&y, &w)?;
            Ok(poly_output(p))
        }
        Cmd::Akl(a) => {
            let y = AffPerm::from_text(a.d, &a.y)?;
            let w = AffPerm::from_text(a.d, &a.w)?;
            let p = affsymgroup::kl_poly(&y, &w)?;
            Ok(poly_output(p))
        }
        Cmd::Bruhat(a) => {
            let leq = if a.affine {
                let y = AffPerm::from_text(a.d, &a.y)?;
                let w = AffPerm::from_text(a.d, &a.w)?;
                y.bruhat_leq(&w)?
            } else {
                let y: Perm = a.y.parse()?;
                let w: Perm = a.w.parse()?;
                y.bruhat_leq(&w)?
            };
            Ok(Output { text: leq.to_string(), json: serde_json::json!({ "leq": leq }) })
        }
        Cmd::Len(a) => {
            let len = if a.affine {
                AffPerm::from_text(a.d, &a.w)?.length()
            } else {
                a.w.parse::<Perm>()?.length()
            };
            Ok(Output { text: len.to_string(), json: serde_json::json!({ "length": len }) })
        }
        Cmd::Wm(a) => {
            if a.affine {
                let m = PeriodicMatrix::from_text(&a.matrix)?;
                let b = AffBlockSpec::with_anchor(m.rowsums().to_vec(), a.banchor);
                let c = AffBlockSpec::with_anchor(m.colsums().to_vec(), a.canchor);
                let w = m.longest_rep_aff(&b, &c)?;
                Ok(Output {
                    text: w.to_string(),
                    json: serde_json::json!({ "window": w.window() }),
                })
            } else {
                let m = CosetMatrix::from_text(&a.matrix)?;
                let w = m.longest_rep();
                Ok(Output {
                    text: w.to_string(),
                    json: serde_json::json!({ "perm": w.oneline() }),
                })
            }
        }
        Cmd::Psi(a) => {
            let rows = parse_sizes(&a.rowsums)?;
            let cols = parse_sizes(&a.colsums)?;
            if a.affine {
                let w = AffPerm::from_text(a.d, &a.w)?;
                let b = AffBlockSpec::with_anchor(rows, a.banchor);
                let c = AffBlockSpec::with_anchor(cols, a.canchor);
                let m = PeriodicMatrix::psi_aff(&w, &b, &c)?;
                Ok(Output { text: m.to_string(), json: m.to_json() })
            } else {
                let w: Perm = a.w.parse()?;
                let m = CosetMatrix::psi(&w, &BlockSpec::new(rows), &BlockSpec::new(cols))?;
                Ok(Output { text: m.to_string(), json: m.to_json() })
            }
        }
        Cmd::Cancel(a) => run_cancel(a),
        Cmd::Ic(a) => {
            let p = with_pair(a, qo::ic_poly, qo::ic_poly_cyclic)?;
            Ok(poly_output(p))
        }
        Cmd::Icinv(a) => {
            let p = with_pair(a, qo::ic_inverse, qo::ic_inverse_cyclic)?;
            Ok(poly_output(p))
        }
        Cmd::Reduce(a) => run_reduce(a),
        Cmd::Orbitdim(a) => {
            let dim = match a.modulus.or_else(|| inline_modulus(&a.m)) {
                Some(n) => qo::orbit_dim_cyclic(&parse_cyclic(&a.m, n)?)?,
                None => qo::orbit_dim(&a.m.parse()?)?,
            };
            Ok(Output { text: dim.to_string(), json: serde_json::json!({ "orbitdim": dim }) })
        }
        Cmd::Maxelts(a) => run_maxelts(a),
        Cmd::Decomp(a) => {
            let lam = parse_weight(&a.lambda)?;
            let mu = parse_weight(&a.mu)?;
            let mult = qo::decomp_multiplicity(&lam, &mu, a.n, a.k)?;
            Ok(Output {
                text: mult.to_string(),
                json: serde_json::json!({ "multiplicity": mult }),
            })
        }
        Cmd::Selftest(a) => {
            let results = oracle::run_selftest(seed, a.quick);
            let failed = results.iter().filter(|r| !r.passed).count();
            let mut text = String::new();
            for r in &results {
                let status = if r.passed { "ok  " } else { "FAIL" };
                text.push_str(&format!("{status} {} ({})\n", r.name, r.detail));
            }
            text.push_str(&format!("{} checks, {} failed", results.len(), failed));
            let json = serde_json::json!({
                "suites": results.iter().map(|r| serde_json::json!({
                    "name": r.name, "passed": r.passed, "detail": r.detail,
                })).collect::<Vec<_>>(),
                "failed": failed,
            });
            Ok(Output { text, json })
        }
    }
}

fn run_cancel(a: &CancelArgs) -> klq::Result<Output> {
    if let Some(mtext) = &a.matrix {
        let j = a
            .j
            .ok_or_else(|| Error::Parse("matrix cancellation needs --j".into()))?;
        if a.affine {
            let m = PeriodicMatrix::from_text(mtext)?;
            let c = m.cancel_entry_aff(a.i, j)?;
            Ok(Output { text: c.to_string(), json: c.to_json() })
        } else {
            let m = CosetMatrix::from_text(mtext)?;
            if a.i < 1 || j < 1 {
                return Err(Error::IndexOutOfRange("matrix entries are 1-based".into()));
            }
            let c = m.cancel_entry(a.i as usize, j as usize)?;
            Ok(Output { text: c.to_string(), json: c.to_json() })
        }
    } else {
        let w = a
            .w
            .as_ref()
            .ok_or_else(|| Error::Parse("cancel needs --w or --matrix".into()))?;
        if a.affine {
            let w = AffPerm::from_text(a.d, w)?;
            let c = w.cancel(a.i)?;
            Ok(Output { text: c.to_string(), json: serde_json::json!({ "window": c.window() }) })
        } else {
            let w: Perm = w.parse()?;
            if a.i < 1 {
                return Err(Error::IndexOutOfRange("positions are 1-based".into()));
            }
            let c = w.cancel(a.i as usize)?;
            Ok(Output { text: c.to_string(), json: serde_json::json!({ "perm": c.oneline() }) })
        }
    }
}

fn run_reduce(a: &IcArgs) -> klq::Result<Output> {
    match a.modulus.or_else(|| inline_modulus(&a.m)) {
        Some(n) => {
            let m = parse_cyclic(&a.m, n)?;
            let m2 = parse_cyclic(&a.m2, n)?;
            let (ra, rb) = qo::reduce_cyclic(&m, &m2)?;
            Ok(Output {
                text: format!("{ra}\n{rb}"),
                json: serde_json::json!({ "reduced": [ra.to_json(), rb.to_json()] }),
            })
        }
        None => {
            let m: qo::Multisegment = a.m.parse()?;
            let m2: qo::Multisegment = a.m2.parse()?;
            let (ra, rb) = qo::reduce(&m, &m2)?;
            Ok(Output {
                text: format!("{ra}\n{rb}"),
                json: serde_json::json!({ "reduced": [ra.to_json(), rb.to_json()] }),
            })
        }
    }
}

fn run_maxelts(a: &OrbitdimArgs) -> klq::Result<Output> {
    match a.modulus.or_else(|| inline_modulus(&a.m)) {
        Some(n) => {
            let m = parse_cyclic(&a.m, n)?;
            let tops = qo::maximal_elements(&m)?;
            let text = tops.iter().map(|t| t.to_string()).collect::<Vec<_>>().join("\n");
            Ok(Output {
                text,
                json: serde_json::json!({
                    "maximal": tops.iter().map(qo::cyclic_to_json).collect::<Vec<_>>(),
                }),
            })
        }
        None => {
            let m: qo::Multisegment = a.m.parse()?;
            if m.is_empty() {
                return Ok(Output {
                    text: "0".into(),
                    json: serde_json::json!({ "maximal": [qo::multisegment_to_json(&m)] }),
                });
            }
            let shifted = m.shifted(1 - m.min_content().unwrap());
            let n = shifted.max_content().unwrap() as u32;
            let top = qo::mmax(&shifted.dims(n)).shifted(m.min_content().unwrap() - 1);
            Ok(Output {
                text: top.to_string(),
                json: serde_json::json!({ "maximal": [qo::multisegment_to_json(&top)] }),
            })
        }
    }
}

fn with_pair(
    a: &IcArgs,
    lin: impl Fn(&qo::Multisegment, &qo::Multisegment) -> klq::Result<klq::QPoly>,
    cyc: impl Fn(&qo::CyclicMultisegment, &qo::CyclicMultisegment) -> klq::Result<klq::QPoly>,
) -> klq::Result<klq::QPoly> {
    match a.modulus.or_else(|| inline_modulus(&a.m)).or_else(|| inline_modulus(&a.m2)) {
        Some(n) => cyc(&parse_cyclic(&a.m, n)?, &parse_cyclic(&a.m2, n)?),
        None => lin(&a.m.parse()?, &a.m2.parse()?),
    }
}

fn inline_modulus(s: &str) -> Option<u32> {
    s.rsplit_once("mod").and_then(|(_, n)| n.trim().parse().ok())
}

fn parse_cyclic(s: &str, n: u32) -> klq::Result<qo::CyclicMultisegment> {
    if s.contains("mod") {
        let c: qo::CyclicMultisegment = s.parse()?;
        if c.modulus() != n {
            return Err(Error::Parse(format!(
                "modulus {} in {s:?} conflicts with --mod {n}",
                c.modulus()
            )));
        }
        Ok(c)
    } else {
        let body: qo::Multisegment = s.parse()?;
        qo::CyclicMultisegment::new(n, body.segments().to_vec())
    }
}

fn parse_sizes(s: &str) -> klq::Result<Vec<u64>> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<u64>().map_err(|_| Error::Parse(format!("bad block size {t:?}"))))
        .collect()
}

fn parse_weight(s: &str) -> klq::Result<Vec<i64>> {
    let t = s.trim();
    let inner = t.strip_prefix('(').and_then(|x| x.strip_suffix(')')).unwrap_or(t);
    inner
        .split(',')
        .filter(|x| !x.trim().is_empty())
        .map(|x| x.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bad entry {x:?}"))))
        .collect()
}

fn poly_output(p: klq::QPoly) -> Output {
    Output { text: p.to_string(), json: serde_json::json!({ "poly": p.to_json() }) }
}
