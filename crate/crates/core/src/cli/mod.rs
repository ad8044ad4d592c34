//! The `hamming-census` command line.
//!
//! Exit codes: 0 success, 1 invalid input, 2 budget exceeded, 3 a
//! verification found a counterexample.

pub mod cache;
pub mod grid;
pub mod sweep;
pub mod verify;

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::bounds::{elias_bound_at_r, elias_bound_best, hamming, plotkin_bound, regime, BoundResult};
use crate::budget::Budget;
use crate::container::{
    all_independent_sets, audit_family, build_container_family, threshold_from_epsilon, ContainerRunner, StopRule,
};
use crate::error::{Error, Result};
use crate::graph::DistanceGraph;
use crate::indep::census;
use crate::intersections::intersection_volume;
use crate::numeric::{parse_rat, Nat, Rat};
use crate::space::{CodeParams, Word};
use crate::supersat::{random_subset, supersat_report};
use crate::volumes::{ball_volume, threshold_radius};

use cache::{Cache, CACHE_ENV};
use grid::SweepSpec;
use sweep::{SweepOp, SweepOptions};
use verify::{Suite, VerifyOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "hamming-census", version, about = "Exact computations on Hamming spaces and their codes")]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,
    /// JSON-lines result cache.
    #[arg(long, global = true, env = CACHE_ENV)]
    pub cache: Option<PathBuf>,
    /// Resource caps, e.g. `enumeration=1048576,max_nodes=1000000`.
    #[arg(long, global = true, value_parser = parse_budget)]
    pub budget: Option<Budget>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct Qnt {
    #[arg(short)]
    pub q: u32,
    #[arg(short)]
    pub n: u32,
    #[arg(short)]
    pub t: u32,
}

impl Qnt {
    fn params(self) -> Result<CodeParams> {
        CodeParams::new(self.q, self.n, self.t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BoundKind {
    Hamming,
    Plotkin,
    Elias,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OrderKind {
    Rank,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Volumes,
    Intersections,
    Supersat,
    Container,
    All,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// `V_q(n, t)`, the volume of a Hamming ball.
    Volume(Qnt),
    /// An upper bound on the size of a code with minimum distance `2t+1`.
    Bound {
        #[arg(value_enum)]
        kind: BoundKind,
        #[command(flatten)]
        qnt: Qnt,
        /// Elias radius; the best radius is searched when omitted.
        #[arg(long)]
        radius: Option<u32>,
        /// Round down to an integer.
        #[arg(long)]
        floor: bool,
    },
    /// `W_q(n, t, k)`, the intersection of two radius-`t` balls at distance `k`.
    Intersection {
        #[command(flatten)]
        qnt: Qnt,
        #[arg(short)]
        k: u32,
    },
    /// Smallest `t` with `H_q(n, t) <= bound`.
    ThresholdRadius {
        #[arg(short)]
        q: u32,
        #[arg(short)]
        n: u32,
        #[arg(long, value_parser = parse_rat_arg)]
        bound: Rat,
    },
    /// Which asymptotic regime `(q, n, t)` falls into.
    Regime {
        #[command(flatten)]
        qnt: Qnt,
        #[arg(long, value_parser = parse_rat_arg, default_value = "1")]
        c_big: Rat,
        #[arg(long, value_parser = parse_rat_arg)]
        c_small: Option<Rat>,
    },
    /// Number of `t`-error-correcting codes and the largest one.
    Census(Qnt),
    /// Exact checks of every identity and inequality over a grid.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: SuiteArg,
        /// Parameter grid; each suite's default grid when omitted.
        #[arg(long)]
        grid: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_parser = parse_rat_arg, default_value = "1")]
        epsilon: Rat,
        /// Container threshold, overriding `--epsilon`.
        #[arg(long)]
        threshold: Option<Nat>,
    },
    /// Runs the container algorithm on every independent set of `G_{q,n,t}`.
    Containers {
        #[command(flatten)]
        qnt: Qnt,
        #[arg(long, value_parser = parse_rat_arg, conflicts_with = "threshold")]
        epsilon: Option<Rat>,
        #[arg(long)]
        threshold: Option<Nat>,
        #[arg(long, value_enum, default_value = "rank")]
        order: OrderKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Writes one row per algorithm step.
        #[arg(long)]
        steps_csv: Option<PathBuf>,
    },
    /// Close-pair statistics of a set of words (random when `--words` is omitted).
    Supersat {
        #[command(flatten)]
        qnt: Qnt,
        #[arg(long, value_parser = parse_rat_arg, default_value = "1")]
        epsilon: Rat,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Comma-separated words such as `0110,1011`.
        #[arg(long)]
        words: Option<String>,
    },
    /// One CSV row per grid point (always CSV).
    Sweep {
        #[arg(long, value_enum)]
        op: SweepOp,
        #[arg(long)]
        grid: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_parser = parse_rat_arg, default_value = "1")]
        epsilon: Rat,
    },
}

fn parse_rat_arg(s: &str) -> std::result::Result<Rat, String> {
    parse_rat(s).map_err(|e| e.to_string())
}

/// `key=value` pairs over the fields of [`Budget`]; unset keys keep their defaults.
pub fn parse_budget(s: &str) -> std::result::Result<Budget, String> {
    let mut b = Budget::default();
    for pair in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (key, value) = pair.split_once('=').ok_or_else(|| format!("budget entry {pair:?} is not key=value"))?;
        let v: u64 = value.trim().parse().map_err(|_| format!("bad budget value {value:?}"))?;
        match key.trim() {
            "enumeration" => b.enumeration = v,
            "branching_vertices" => b.branching_vertices = v as usize,
            "naive_vertices" => b.naive_vertices = v as usize,
            "max_nodes" => b.max_nodes = v,
            "streaming" => b.streaming = v,
            other => return Err(format!("unknown budget key {other:?}")),
        }
    }
    Ok(b)
}

/// What a command prints, in each format.
struct Rendered {
    text: String,
    json: serde_json::Value,
    csv: String,
}

impl Rendered {
    fn scalar(params: serde_json::Value, name: &str, value: String, csv_head: &str, csv_row: &str) -> Self {
        let mut json = params;
        json[name] = json!(value);
        Rendered {
            csv: format!("{csv_head},{name}\n{csv_row},{value}\n"),
            text: format!("{value}\n"),
            json,
        }
    }

    fn write(&self, format: Format, out: &mut dyn Write) -> Result<()> {
        match format {
            Format::Text => out.write_all(self.text.as_bytes())?,
            Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&self.json)?)?,
            Format::Csv => out.write_all(self.csv.as_bytes())?,
        }
        Ok(())
    }
}

fn qnt_json(p: &CodeParams) -> serde_json::Value {
    json!({"q": p.q, "n": p.n, "t": p.t})
}

fn qnt_csv(p: &CodeParams) -> String {
    format!("{},{},{}", p.q, p.n, p.t)
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    return 0;
                }
                _ => 1,
            };
            let _ = write!(err, "{}", e.render());
            return code;
        }
    };
    match execute(&cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let budget = cli.budget.unwrap_or_default();
    let rendered = match &cli.command {
        Command::Volume(qnt) => {
            let p = qnt.params()?;
            let v = ball_volume(p.q, p.n, p.t)?;
            Rendered::scalar(qnt_json(&p), "volume", v.to_string(), "q,n,t", &qnt_csv(&p))
        }
        Command::Bound { kind, qnt, radius, floor } => bound_command(*kind, qnt.params()?, *radius, *floor)?,
        Command::Intersection { qnt, k } => {
            let p = qnt.params()?;
            if *k > p.n {
                return Err(Error::Input(format!("distance k={k} exceeds n={}", p.n)));
            }
            let w = intersection_volume(&p, *k)?;
            let mut json = qnt_json(&p);
            json["k"] = json!(k);
            Rendered::scalar(json, "w", w.to_string(), "q,n,t,k", &format!("{},{k}", qnt_csv(&p)))
        }
        Command::ThresholdRadius { q, n, bound } => {
            CodeParams::new(*q, *n, 0)?;
            let r = threshold_radius(*q, *n, bound)?;
            Rendered::scalar(
                json!({"q": q, "n": n, "bound": bound.to_string()}),
                "t",
                r.to_string(),
                "q,n,bound",
                &format!("{q},{n},{bound}"),
            )
        }
        Command::Regime { qnt, c_big, c_small } => {
            let r = regime(qnt.q, qnt.n, qnt.t, c_big, c_small.as_ref())?;
            let name = match r.regime {
                crate::bounds::Regime::RegimeA => "A",
                crate::bounds::Regime::RegimeB => "B",
                crate::bounds::Regime::RegimeC => "C",
            };
            let disagree = r.constants_disagree.map(|d| d.to_string()).unwrap_or_default();
            Rendered {
                text: match r.constants_disagree {
                    Some(true) => format!("{name} (the two constants disagree)\n"),
                    _ => format!("{name}\n"),
                },
                json: json!({"q": qnt.q, "n": qnt.n, "t": qnt.t, "regime": name,
                             "constants_disagree": r.constants_disagree}),
                csv: format!("q,n,t,regime,constants_disagree\n{},{},{},{name},{disagree}\n", qnt.q, qnt.n, qnt.t),
            }
        }
        Command::Census(qnt) => census_command(qnt.params()?, &budget, cli.cache.as_ref(), err)?,
        Command::Verify {
            suite,
            grid,
            seed,
            epsilon,
            threshold,
        } => {
            let opts = VerifyOptions {
                seed: *seed,
                epsilon: epsilon.clone(),
                threshold: threshold.clone(),
                budget,
            };
            return verify_command(*suite, grid.as_deref(), &opts, cli.format, out, err);
        }
        Command::Containers {
            qnt,
            epsilon,
            threshold,
            order,
            seed,
            steps_csv,
        } => containers_command(
            qnt.params()?,
            epsilon.as_ref(),
            threshold.as_ref(),
            *order,
            *seed,
            steps_csv.as_ref(),
            &budget,
        )?,
        Command::Supersat {
            qnt,
            epsilon,
            seed,
            words,
        } => supersat_command(qnt.params()?, epsilon, *seed, words.as_deref(), &budget)?,
        Command::Sweep { op, grid, seed, epsilon } => {
            let spec = SweepSpec::parse(grid)?;
            let opts = SweepOptions {
                seed: *seed,
                epsilon: epsilon.clone(),
                budget,
            };
            let mut cache = cli.cache.as_ref().map(Cache::open).transpose()?;
            let csv = sweep::sweep(*op, &spec, &opts, cache.as_mut())?;
            out.write_all(csv.as_bytes())?;
            return Ok(0);
        }
    };
    rendered.write(cli.format, out)?;
    Ok(0)
}

fn bound_command(kind: BoundKind, p: CodeParams, radius: Option<u32>, floor: bool) -> Result<Rendered> {
    let d = 2 * p.t + 1;
    let result: BoundResult = match kind {
        BoundKind::Hamming => hamming(&p)?,
        BoundKind::Plotkin => plotkin_bound(&p),
        // A distance beyond n leaves only one-word codes; Elias has nothing to say.
        BoundKind::Elias if d > p.n => BoundResult {
            value: None,
            method: crate::bounds::BoundMethod::Elias,
            witness_r: radius,
            applicable: false,
        },
        BoundKind::Elias => match radius {
            Some(r) => elias_bound_at_r(p.q, p.n, d, r)?,
            None => elias_bound_best(p.q, p.n, d)?.best,
        },
    };
    let value = match (&result.value, floor) {
        (None, _) => "inapplicable".to_string(),
        (Some(_), true) => result.floor().expect("value present").to_string(),
        (Some(v), false) => v.to_string(),
    };
    let mut json = qnt_json(&p);
    json["method"] = json!(result.method);
    json["applicable"] = json!(result.applicable);
    json["witness_r"] = json!(result.witness_r);
    let r = result.witness_r.map(|r| r.to_string()).unwrap_or_default();
    Ok(Rendered {
        text: format!("{value}\n"),
        csv: format!(
            "q,n,t,method,radius,value\n{},{},{r},{value}\n",
            qnt_csv(&p),
            result.method
        ),
        json: {
            json["value"] = json!(value);
            json
        },
    })
}

fn census_command(p: CodeParams, budget: &Budget, cache_path: Option<&PathBuf>, err: &mut dyn Write) -> Result<Rendered> {
    let mut cache = cache_path.map(Cache::open).transpose()?;
    let payload = match cache.as_ref().and_then(|c| c.lookup(&p, "census", "")) {
        Some(hit) => hit.to_owned(),
        None => {
            let start = Instant::now();
            let result = census(&p, budget)?;
            writeln!(err, "census {p} computed in {:.3}s", start.elapsed().as_secs_f64())?;
            let payload = serde_json::to_string(&result)?;
            if let Some(c) = cache.as_mut() {
                c.insert(&p, "census", "", &payload)?;
            }
            payload
        }
    };
    let json: serde_json::Value = serde_json::from_str(&payload)?;
    let field = |k: &str| json[k].as_str().unwrap_or_default().to_string();
    Ok(Rendered {
        text: format!("{}\n", serde_json::to_string_pretty(&json)?),
        csv: format!(
            "q,n,t,vertices,codes,max_code\n{},{},{},{}\n",
            qnt_csv(&p),
            field("vertex_count"),
            field("independent_set_count"),
            field("max_independent_size")
        ),
        json,
    })
}

fn verify_command(
    suite: SuiteArg,
    grid: Option<&str>,
    opts: &VerifyOptions,
    format: Format,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32> {
    let suites: Vec<Suite> = match suite {
        SuiteArg::All => Suite::ALL.to_vec(),
        SuiteArg::Volumes => vec![Suite::Volumes],
        SuiteArg::Intersections => vec![Suite::Intersections],
        SuiteArg::Supersat => vec![Suite::Supersat],
        SuiteArg::Container => vec![Suite::Container],
    };
    let explicit = grid.map(SweepSpec::parse).transpose()?;
    let mut reports = Vec::new();
    for s in suites {
        let spec = explicit.clone().unwrap_or_else(|| s.default_grid());
        let report = verify::run_suite(s, &spec, opts)?;
        for w in &report.warnings {
            writeln!(err, "warning: {w}")?;
        }
        reports.push(report);
    }
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&reports)?)?,
        Format::Text | Format::Csv => {
            if format == Format::Csv {
                writeln!(out, "suite,points,checks,failures")?;
            }
            for r in &reports {
                if format == Format::Csv {
                    writeln!(out, "{},{},{},{}", r.suite, r.points, r.checks, r.failures.len())?;
                    continue;
                }
                let verdict = if r.passed() { "PASS" } else { "FAIL" };
                writeln!(
                    out,
                    "{verdict} {}: {} checks over {} points, {} failures",
                    r.suite,
                    r.checks,
                    r.points,
                    r.failures.len()
                )?;
                for f in &r.failures {
                    writeln!(out, "  {} at {}: {}", f.check, f.params, f.detail)?;
                }
            }
        }
    }
    Ok(if reports.iter().all(|r| r.passed()) { 0 } else { 3 })
}

fn containers_command(
    p: CodeParams,
    epsilon: Option<&Rat>,
    threshold: Option<&Nat>,
    order: OrderKind,
    seed: u64,
    steps_csv: Option<&PathBuf>,
    budget: &Budget,
) -> Result<Rendered> {
    let threshold = match (threshold, epsilon) {
        (Some(t), _) => t.clone(),
        (None, Some(e)) => threshold_from_epsilon(&p, e)?,
        (None, None) => threshold_from_epsilon(&p, &Rat::from_integer(1.into()))?,
    };
    let mut dg = DistanceGraph::full(p, budget.enumeration)?;
    if order == OrderKind::Random {
        let mut perm: Vec<usize> = (0..dg.len()).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        dg = dg.with_order(perm)?;
    }
    let g = dg.bit_graph()?;
    let mut runner = ContainerRunner::for_distance_graph(&dg, StopRule::new(threshold.clone(), *budget)?)?;
    let sets = all_independent_sets(g, budget)?;
    if let Some(path) = steps_csv {
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        writeln!(f, "set,step,vertex,removed,added_to_fingerprint")?;
        for (i, s) in sets.iter().enumerate() {
            for (j, step) in runner.run(s)?.removed_per_step.iter().enumerate() {
                writeln!(f, "{i},{j},{},{},{}", step.vertex, step.removed, step.added_to_fingerprint)?;
            }
        }
        f.flush()?;
    }
    let family = build_container_family(&mut runner, Some(&sets))?;
    let audit = audit_family(&mut runner, &family, &sets)?;
    let mut json = qnt_json(&p);
    json["threshold"] = json!(threshold.to_string());
    json["independent_sets"] = json!(sets.len());
    json["audit"] = serde_json::to_value(&audit)?;
    Ok(Rendered {
        text: format!(
            "threshold {threshold}\nindependent sets {}\ncontainers {}\nlargest fingerprint {}\ncoverage {}\nsum of container counts {}\n",
            sets.len(),
            audit.family_size,
            audit.max_fingerprint_size,
            audit.coverage,
            audit.sum_container_isets
        ),
        csv: format!(
            "q,n,t,threshold,independent_sets,containers,max_fingerprint,coverage,sum_container_isets\n{},{threshold},{},{},{},{},{}\n",
            qnt_csv(&p),
            sets.len(),
            audit.family_size,
            audit.max_fingerprint_size,
            audit.coverage,
            audit.sum_container_isets
        ),
        json,
    })
}

fn supersat_command(p: CodeParams, epsilon: &Rat, seed: u64, words: Option<&str>, budget: &Budget) -> Result<Rendered> {
    let set = match words {
        Some(list) => list
            .split(',')
            .map(str::trim)
            .filter(|w| !w.is_empty())
            .map(|w| Word::parse(p.q, w))
            .collect::<Result<Vec<_>>>()?,
        None => random_subset(&p, &mut ChaCha8Rng::seed_from_u64(seed), budget.enumeration)?,
    };
    let r = supersat_report(&set, &p, epsilon, budget.enumeration)?;
    let json = serde_json::to_value(&r)?;
    let lemma = r.lemma41.as_ref().map(|c| c.holds().to_string()).unwrap_or_else(|| "n/a".into());
    Ok(Rendered {
        text: format!("{}\n", serde_json::to_string_pretty(&json)?),
        csv: format!(
            "q,n,t,set_size,edges,double_counting,lemma41,max_degree,s1,s2,packing\n{},{},{},{},{lemma},{},{},{},{}\n",
            qnt_csv(&p),
            r.set_size,
            r.edge_total,
            r.double_counting.holds,
            r.max_degree,
            r.s1_size,
            r.s2_size,
            r.packing_size
        ),
        json,
    })
}
