//! Grid-driven exact verification of every non-asymptotic inequality and
//! identity in the library.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::budget::Budget;
use crate::container::{all_independent_sets, build_container_family, audit_family, ContainerRunner, StopRule};
use crate::error::{Error, Result};
use crate::graph::{DistanceGraph, VertexSet};
use crate::intersections::{check_decay_with, check_identity_k1_with, check_monotone_with, intersection_volume};
use crate::numeric::{nat, rat_from_nat, CheckResult, Nat, Rat, Relation};
use crate::space::{ball_intersection_bruteforce, enumerate_ball, CodeParams, Word};
use crate::supersat::{covers, double_counting_check, greedy_distance_packing, lemma41_check, random_subset};
use crate::volumes::{ball_volume, check_volume_decay, check_volume_growth, hamming_bound, threshold_radius};

use super::grid::{point_seeds, SweepSpec};

/// Spaces up to this size also get brute-force oracle comparisons.
pub const ORACLE_LIMIT: u64 = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Volumes,
    Intersections,
    Supersat,
    Container,
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Volumes => "volumes",
            Suite::Intersections => "intersections",
            Suite::Supersat => "supersat",
            Suite::Container => "container",
        })
    }
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Volumes, Suite::Intersections, Suite::Supersat, Suite::Container];

    pub fn default_grid(self) -> SweepSpec {
        let s = match self {
            Suite::Volumes => "q=2..5;n=1..30;t=all",
            Suite::Intersections => "q=2..4;n=1..20;t=0..6",
            Suite::Supersat => "q=2,3;n=1..8;t=0..2;seeds=20",
            Suite::Container => "q=2;n=1..4;t=0..2",
        };
        SweepSpec::parse(s).expect("built-in grids parse")
    }
}

/// A W formula under test; the real one is [`intersection_volume`].
pub type WFormula<'a> = &'a dyn Fn(&CodeParams, u32) -> Result<Nat>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub suite: Suite,
    pub check: String,
    pub params: CodeParams,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub suite: Suite,
    pub points: usize,
    pub checks: u64,
    pub failures: Vec<Failure>,
    pub warnings: Vec<String>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Options shared by the suites.
#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub seed: u64,
    /// `ε` for the container threshold `2^⌈(1+ε)H⌉`.
    pub epsilon: Rat,
    /// Explicit container threshold, overriding `epsilon`.
    pub threshold: Option<Nat>,
    pub budget: Budget,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: 0,
            epsilon: Rat::from_integer(1.into()),
            threshold: None,
            budget: Budget::default(),
        }
    }
}

struct Recorder {
    report: VerifyReport,
}

impl Recorder {
    fn check(&mut self, params: &CodeParams, name: impl fmt::Display, c: &CheckResult) {
        self.report.checks += 1;
        if !c.holds {
            self.fail(params, name, c.to_string());
        }
    }

    fn fail(&mut self, params: &CodeParams, name: impl fmt::Display, detail: String) {
        self.report.failures.push(Failure {
            suite: self.report.suite,
            check: name.to_string(),
            params: *params,
            detail,
        });
    }

    /// Turns a verification error into a recorded failure; other errors pass through.
    fn absorb(&mut self, params: &CodeParams, name: &str, r: Result<()>) -> Result<()> {
        match r {
            Err(Error::Verification(msg)) => {
                self.report.checks += 1;
                self.fail(params, name, msg);
                Ok(())
            }
            other => other,
        }
    }
}

pub fn run_suite(suite: Suite, grid: &SweepSpec, opts: &VerifyOptions) -> Result<VerifyReport> {
    run_suite_with(suite, grid, opts, &intersection_volume)
}

/// Like [`run_suite`] with `w` standing in for the W closed form.
pub fn run_suite_with(suite: Suite, grid: &SweepSpec, opts: &VerifyOptions, w: WFormula) -> Result<VerifyReport> {
    let points = grid.points();
    let mut rec = Recorder {
        report: VerifyReport {
            suite,
            points: points.len(),
            checks: 0,
            failures: Vec::new(),
            warnings: Vec::new(),
        },
    };
    if points.is_empty() {
        rec.report
            .warnings
            .push(format!("{suite}: the grid has no points; nothing was checked"));
    }
    for (index, p) in points.iter().enumerate() {
        match suite {
            Suite::Volumes => volumes_point(&mut rec, p, &opts.budget)?,
            Suite::Intersections => intersections_point(&mut rec, p, &opts.budget, w)?,
            Suite::Supersat => {
                let seeds = point_seeds(opts.seed, index, grid.seeds_per_point);
                supersat_point(&mut rec, p, &seeds, &opts.budget)?
            }
            Suite::Container => {
                let r = container_point(&mut rec, p, opts);
                rec.absorb(p, "container family", r)?
            }
        }
    }
    Ok(rec.report)
}

fn volumes_point(rec: &mut Recorder, p: &CodeParams, budget: &Budget) -> Result<()> {
    let CodeParams { q, n, t } = *p;
    if p.space_size_u64().is_some_and(|s| s <= ORACLE_LIMIT.min(budget.enumeration)) {
        let center = Word::zero(q, n as usize)?;
        let counted = enumerate_ball(&center, t as usize).count() as u64;
        let c = CheckResult::new(
            rat_from_nat(&ball_volume(q, n, t)?),
            Relation::Eq,
            rat_from_nat(&nat(counted)),
        );
        rec.check(p, format!("volume oracle r={t}"), &c);
    }
    for i in 1..=t {
        rec.check(p, format!("volume decay i={i}"), &check_volume_decay(q, n, t, i)?);
    }
    for alpha in 1..=t.min(n - t) {
        rec.check(p, format!("volume growth alpha={alpha}"), &check_volume_growth(q, n, t, alpha)?);
    }
    let found = threshold_radius(q, n, &hamming_bound(q, n, t)?)?;
    let c = CheckResult::new(
        Rat::from_integer(found.into()),
        Relation::Eq,
        Rat::from_integer(t.into()),
    );
    rec.check(p, "threshold radius inverts the sphere-packing bound", &c);
    Ok(())
}

fn intersections_point(rec: &mut Recorder, p: &CodeParams, budget: &Budget, w: WFormula) -> Result<()> {
    let CodeParams { n, t, .. } = *p;
    if t >= 1 {
        rec.check(p, "W(1) = q V(n-1, t-1)", &check_identity_k1_with(p, w)?);
    }
    for k in 0..=t.min(n.saturating_sub(1)) {
        rec.check(p, format!("W monotone k={k}"), &check_monotone_with(p, k, w)?);
    }
    for k in (0..).take_while(|k| 2 * k + 2 <= n) {
        let chain = check_decay_with(p, k, w)?;
        rec.report.checks += 1;
        if let Some(c) = chain.first_failure() {
            rec.fail(p, format!("W decay chain k={k}"), c.to_string());
        }
    }
    if p.space_size_u64().is_some_and(|s| s <= ORACLE_LIMIT.min(budget.enumeration)) {
        for k in 0..=n {
            let c = CheckResult::new(
                rat_from_nat(&w(p, k)?),
                Relation::Eq,
                rat_from_nat(&ball_intersection_bruteforce(p, k, budget.enumeration)?),
            );
            rec.check(p, format!("W oracle k={k}"), &c);
        }
    }
    Ok(())
}

fn supersat_point(rec: &mut Recorder, p: &CodeParams, seeds: &[u64], budget: &Budget) -> Result<()> {
    for &seed in seeds {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let set = random_subset(p, &mut rng, budget.enumeration)?;
        let tag = format!("seed={seed} |S|={}", set.len());
        rec.check(
            p,
            format!("double counting {tag}"),
            &double_counting_check(&set, p, budget.enumeration)?,
        );
        match lemma41_check(&set, p) {
            Ok(c) => {
                rec.check(p, format!("weighted pair bound {tag}"), &c.weighted);
                rec.check(p, format!("edge bound {tag}"), &c.edges);
            }
            Err(Error::Precondition(_)) => {}
            Err(e) => return Err(e),
        }
        let x = greedy_distance_packing(&set, p.t)?;
        rec.report.checks += 1;
        let separated = x
            .iter()
            .enumerate()
            .all(|(i, a)| x[i + 1..].iter().all(|b| a.distance_unchecked(b) > p.t as usize));
        if !separated || !covers(&x, &set, p.t) {
            rec.fail(p, format!("packing {tag}"), "packing not separated or not maximal".into());
        }
    }
    Ok(())
}

fn container_point(rec: &mut Recorder, p: &CodeParams, opts: &VerifyOptions) -> Result<()> {
    let dg = DistanceGraph::full(*p, opts.budget.enumeration)?;
    let g = dg.bit_graph()?;
    let threshold = match &opts.threshold {
        Some(t) => t.clone(),
        None => crate::container::threshold_from_epsilon(p, &opts.epsilon)?,
    };
    let stop = StopRule::new(threshold.clone(), opts.budget)?;
    let mut runner = ContainerRunner::for_distance_graph(&dg, stop)?;
    let sets = all_independent_sets(g, &opts.budget)?;
    let family = build_container_family(&mut runner, Some(&sets))?;
    let audit = audit_family(&mut runner, &family, &sets)?;
    rec.report.checks += 1;
    if !audit.coverage {
        rec.fail(p, "coverage", format!("uncovered independent set {:?}", audit.uncovered_example));
    }
    let total = nat(sets.len() as u64);
    rec.check(
        p,
        "sum of container counts >= i(G)",
        &CheckResult::new(
            rat_from_nat(&audit.sum_container_isets),
            Relation::Ge,
            rat_from_nat(&total),
        ),
    );
    for (fingerprint, f) in &family.fingerprints {
        let mut container = VertexSet::from_indices(g.len(), f.iter().copied());
        for &v in fingerprint {
            container.insert(v);
        }
        let count = runner.count(&container)?;
        let cap = (Nat::from(1u8) << fingerprint.len()) * &threshold;
        rec.check(
            p,
            format!("early stop count P={fingerprint:?}"),
            &CheckResult::new(rat_from_nat(&count), Relation::Le, rat_from_nat(&cap)),
        );
    }
    Ok(())
}
