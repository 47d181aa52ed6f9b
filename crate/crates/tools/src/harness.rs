//! Exhaustive and seeded random sweeps over truth tables.
//!
//! Work is split into fixed shards whose partial aggregates are merged in
//! shard order, so a report depends only on its inputs and never on the
//! worker count or scheduling.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use spectral_core::bounds;
use spectral_core::protocol::{trivial_protocol, www_lemma_check, ProtocolCodebook};
use spectral_core::{BooleanFunction, BoundCertificate, FunctionProfile};

use crate::formats::truth_table_string;

/// Functions per shard.
const SHARD: u64 = 1 << 12;
/// Functions between checkpoints in resumable scans.
pub const CHECKPOINT_EVERY: u64 = 1 << 24;
/// Random samples generated per batch.
const RANDOM_BATCH: u64 = 1 << 12;
const RANDOM_SHARD: u64 = 64;
pub const HISTOGRAM_BIN: f64 = 0.1;
/// High-entropy theorem parameters swept by [`Check::TheoremLhe`].
pub const LHE_C: [f64; 2] = [0.25, 0.4];

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    WeakFei,
    EdgeIsoAlpha,
    EdgeIsoVar,
    EdgeIsoLowinf,
    MinEntropyLeEntropy,
    EntropyLeL1,
    L1Facts,
    TheoremL1,
    FmeiBiased,
    TheoremLhe,
    TheoremEli,
    WwwTrivial,
}

impl Check {
    pub const ALL: [Check; 12] = [
        Check::WeakFei,
        Check::EdgeIsoAlpha,
        Check::EdgeIsoVar,
        Check::EdgeIsoLowinf,
        Check::MinEntropyLeEntropy,
        Check::EntropyLeL1,
        Check::L1Facts,
        Check::TheoremL1,
        Check::FmeiBiased,
        Check::TheoremLhe,
        Check::TheoremEli,
        Check::WwwTrivial,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::WeakFei => "weak_fei",
            Check::EdgeIsoAlpha => "edge_iso_alpha",
            Check::EdgeIsoVar => "edge_iso_var",
            Check::EdgeIsoLowinf => "edge_iso_lowinf",
            Check::MinEntropyLeEntropy => "min_entropy_le_entropy",
            Check::EntropyLeL1 => "entropy_le_l1",
            Check::L1Facts => "l1_facts",
            Check::TheoremL1 => "theorem_l1",
            Check::FmeiBiased => "fmei_biased",
            Check::TheoremLhe => "theorem_lhe",
            Check::TheoremEli => "theorem_eli",
            Check::WwwTrivial => "www_trivial",
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .with_context(|| {
                let known: Vec<&str> = Check::ALL.iter().map(|c| c.name()).collect();
                format!(
                    "unknown check `{s}`; expected `all` or one of {}",
                    known.join(", ")
                )
            })
    }
}

/// `all` or a comma-separated list of check names; sorted and deduplicated.
pub fn parse_checks(spec: &str) -> Result<Vec<Check>> {
    if spec.trim() == "all" {
        return Ok(Check::ALL.to_vec());
    }
    let mut checks = spec
        .split(',')
        .map(|s| s.trim().parse())
        .collect::<Result<Vec<Check>>>()?;
    checks.sort();
    checks.dedup();
    if checks.is_empty() {
        bail!("no checks selected");
    }
    Ok(checks)
}

fn rename(mut c: BoundCertificate, suffix: &str) -> BoundCertificate {
    c.name.push_str(suffix);
    c.parts = c.parts.into_iter().map(|p| rename(p, suffix)).collect();
    c
}

/// Evaluates a fixed list of checks against functions on `n` variables.
#[derive(Clone, Debug)]
pub struct Evaluator {
    checks: Vec<Check>,
    trivial: Option<ProtocolCodebook>,
}

impl Evaluator {
    pub fn new(n: u32, checks: &[Check]) -> Result<Self> {
        let trivial = if checks.contains(&Check::WwwTrivial) {
            Some(trivial_protocol(n)?)
        } else {
            None
        };
        Ok(Evaluator {
            checks: checks.to_vec(),
            trivial,
        })
    }

    pub fn evaluate(&self, p: &FunctionProfile) -> Vec<BoundCertificate> {
        let mut out = Vec::new();
        for &check in &self.checks {
            match check {
                Check::WeakFei => out.push(bounds::weak_fei(p)),
                Check::EdgeIsoAlpha => out.push(bounds::edge_iso_alpha(p)),
                Check::EdgeIsoVar => out.push(bounds::edge_iso_var(p)),
                Check::EdgeIsoLowinf => out.push(bounds::edge_iso_lowinf(p)),
                Check::MinEntropyLeEntropy => out.push(bounds::min_entropy_le_entropy(p)),
                Check::EntropyLeL1 => out.push(bounds::entropy_le_l1(p)),
                Check::L1Facts => out.extend(bounds::l1_facts(p)),
                Check::TheoremL1 => out.push(bounds::theorem_l1(p)),
                Check::FmeiBiased => out.push(bounds::fmei_biased(p)),
                Check::TheoremLhe => {
                    for c in LHE_C {
                        let cert = bounds::theorem_lhe(p, c).expect("c lies in (0, 1/2)");
                        out.push(rename(cert, &format!("@{c}")));
                    }
                }
                Check::TheoremEli => {
                    let c = bounds::largest_admissible_c(p);
                    out.push(if c.is_finite() && c > 0.0 {
                        bounds::theorem_eli(p, c).expect("c is positive")
                    } else if c.is_infinite() {
                        BoundCertificate::not_applicable("theorem_eli", "constant function")
                    } else {
                        BoundCertificate::not_applicable("theorem_eli", "I[f] ≥ 1 admits no c > 0")
                    });
                }
                Check::WwwTrivial => {
                    let codebook = self.trivial.as_ref().expect("built in new");
                    let cert = www_lemma_check(codebook, p).expect("dimensions agree");
                    out.push(rename(cert, "@trivial"));
                }
            }
        }
        out
    }
}

/// Largest ratio seen; ties keep the earliest function in scan order.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Extremum {
    pub ratio: f64,
    pub entropy: f64,
    pub influence: f64,
    /// `+`/`-` truth-table string of the witness.
    pub witness: Option<String>,
}

impl Extremum {
    fn offer(&mut self, ratio: f64, p: &FunctionProfile, f: &BooleanFunction) {
        if self.witness.is_none() || ratio > self.ratio {
            *self = Extremum {
                ratio,
                entropy: p.entropy,
                influence: p.influence_f64(),
                witness: Some(truth_table_string(f)),
            };
        }
    }

    fn merge(&mut self, other: Extremum) {
        if other.witness.is_some() && (self.witness.is_none() || other.ratio > self.ratio) {
            *self = other;
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CertificateTally {
    pub evaluated: u64,
    pub not_applicable: u64,
    /// Asserted certificates that did not hold.
    pub failures: u64,
    /// Report-only certificates whose inequality did not hold.
    pub report_only_violations: u64,
    pub asserted: bool,
    /// Smallest `rhs - lhs` over applicable evaluations.
    pub min_slack: Option<f64>,
    pub first_failure: Option<String>,
}

impl CertificateTally {
    fn add(&mut self, c: &BoundCertificate, f: &BooleanFunction) {
        self.evaluated += 1;
        self.asserted = c.asserted;
        if !c.applicable {
            self.not_applicable += 1;
            return;
        }
        if self.min_slack.is_none_or(|m| c.slack < m) {
            self.min_slack = Some(c.slack);
        }
        if !c.holds {
            if c.asserted {
                self.failures += 1;
                if self.first_failure.is_none() {
                    self.first_failure = Some(truth_table_string(f));
                }
            } else {
                self.report_only_violations += 1;
            }
        }
    }

    fn merge(&mut self, other: CertificateTally) {
        self.evaluated += other.evaluated;
        self.not_applicable += other.not_applicable;
        self.failures += other.failures;
        self.report_only_violations += other.report_only_violations;
        self.asserted |= other.asserted;
        self.min_slack = match (self.min_slack, other.min_slack) {
            (Some(a), Some(b)) => Some(if b < a { b } else { a }),
            (a, b) => a.or(b),
        };
        if self.first_failure.is_none() {
            self.first_failure = other.first_failure;
        }
    }
}

/// Counts of `H/I` in bins `[0.1 i, 0.1 (i+1))`; functions with `I = 0` are
/// counted separately.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub bin_width: f64,
    pub counts: Vec<u64>,
    pub zero_influence: u64,
}

impl Default for Histogram {
    fn default() -> Self {
        Histogram {
            bin_width: HISTOGRAM_BIN,
            counts: Vec::new(),
            zero_influence: 0,
        }
    }
}

impl Histogram {
    fn add(&mut self, ratio: Option<f64>) {
        match ratio {
            None => self.zero_influence += 1,
            Some(r) => {
                let bin = (r / self.bin_width).floor() as usize;
                if self.counts.len() <= bin {
                    self.counts.resize(bin + 1, 0);
                }
                self.counts[bin] += 1;
            }
        }
    }

    fn merge(&mut self, other: Histogram) {
        if self.counts.len() < other.counts.len() {
            self.counts.resize(other.counts.len(), 0);
        }
        for (a, b) in self.counts.iter_mut().zip(other.counts) {
            *a += b;
        }
        self.zero_influence += other.zero_influence;
    }
}

/// Partial aggregate of one shard.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Accumulator {
    pub count: u64,
    pub max_fei: Extremum,
    pub max_fmei: Extremum,
    pub certificates: BTreeMap<String, CertificateTally>,
    pub histogram: Histogram,
    /// Sums in units of 2^-64 so merging is associative and reports do not
    /// depend on shard or checkpoint grouping.
    pub influence_sum: i128,
    pub influence_sq_sum: i128,
    pub entropy_sum: i128,
    pub min_entropy: Option<f64>,
}

const FIXED_SCALE: f64 = 18446744073709551616.0;

fn to_fixed(x: f64) -> i128 {
    (x * FIXED_SCALE).round() as i128
}

fn from_fixed(x: i128) -> f64 {
    x as f64 / FIXED_SCALE
}

impl Accumulator {
    pub fn add(&mut self, f: &BooleanFunction, eval: &Evaluator) {
        let p = FunctionProfile::new(f);
        self.count += 1;
        let inf = p.influence_f64();
        self.max_fei.offer(p.fei_ratio(), &p, f);
        self.max_fmei.offer(p.fmei_ratio(), &p, f);
        self.histogram.add((inf > 0.0).then(|| p.fei_ratio()));
        self.influence_sum += to_fixed(inf);
        self.influence_sq_sum += to_fixed(inf * inf);
        self.entropy_sum += to_fixed(p.entropy);
        if self.min_entropy.is_none_or(|m| p.entropy < m) {
            self.min_entropy = Some(p.entropy);
        }
        for cert in eval.evaluate(&p) {
            for c in cert.flatten() {
                self.certificates
                    .entry(c.name.clone())
                    .or_default()
                    .add(c, f);
            }
        }
    }

    pub fn merge(&mut self, other: Accumulator) {
        self.count += other.count;
        self.max_fei.merge(other.max_fei);
        self.max_fmei.merge(other.max_fmei);
        for (name, tally) in other.certificates {
            self.certificates.entry(name).or_default().merge(tally);
        }
        self.histogram.merge(other.histogram);
        self.influence_sum += other.influence_sum;
        self.influence_sq_sum += other.influence_sq_sum;
        self.entropy_sum += other.entropy_sum;
        self.min_entropy = match (self.min_entropy, other.min_entropy) {
            (Some(a), Some(b)) => Some(if b < a { b } else { a }),
            (a, b) => a.or(b),
        };
    }
}

/// Sample statistics, reported and never asserted.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Observations {
    pub mean_influence: f64,
    pub std_influence: f64,
    pub mean_entropy: f64,
    pub min_entropy: f64,
    pub min_entropy_over_n: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub class: String,
    pub n: u32,
    pub seed: Option<u64>,
    pub checks: Vec<Check>,
    pub symmetry_reduced: bool,
    /// False when a resumable scan stopped before the end.
    pub complete: bool,
    pub count: u64,
    pub max_fei: Extremum,
    pub max_fmei: Extremum,
    /// Asserted certificate failures across all checks; zero for theorems.
    pub theorem_failures: u64,
    pub certificates: BTreeMap<String, CertificateTally>,
    pub histogram: Histogram,
    pub observations: Observations,
}

impl SweepReport {
    fn build(
        class: String,
        n: u32,
        seed: Option<u64>,
        opts: &ScanOptions,
        complete: bool,
        acc: Accumulator,
    ) -> Self {
        let count = acc.count.max(1) as f64;
        let mean_influence = from_fixed(acc.influence_sum) / count;
        let variance =
            (from_fixed(acc.influence_sq_sum) / count - mean_influence * mean_influence).max(0.0);
        let min_entropy = acc.min_entropy.unwrap_or(0.0);
        SweepReport {
            class,
            n,
            seed,
            checks: opts.checks.clone(),
            symmetry_reduced: opts.symmetry,
            complete,
            count: acc.count,
            theorem_failures: acc.certificates.values().map(|t| t.failures).sum(),
            max_fei: acc.max_fei,
            max_fmei: acc.max_fmei,
            certificates: acc.certificates,
            histogram: acc.histogram,
            observations: Observations {
                mean_influence,
                std_influence: variance.sqrt(),
                mean_entropy: from_fixed(acc.entropy_sum) / count,
                min_entropy,
                min_entropy_over_n: if n > 0 { min_entropy / n as f64 } else { 0.0 },
            },
        }
    }

    /// `section,key,value` rows.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["section", "key", "value"])?;
        let mut row = |section: &str, key: &str, value: String| {
            w.write_record([section, key, value.as_str()])
        };
        row("summary", "class", self.class.clone())?;
        row("summary", "n", self.n.to_string())?;
        row(
            "summary",
            "seed",
            self.seed.map_or(String::new(), |s| s.to_string()),
        )?;
        row("summary", "count", self.count.to_string())?;
        row("summary", "complete", self.complete.to_string())?;
        row(
            "summary",
            "symmetry_reduced",
            self.symmetry_reduced.to_string(),
        )?;
        row(
            "summary",
            "theorem_failures",
            self.theorem_failures.to_string(),
        )?;
        for (label, ext) in [("max_fei", &self.max_fei), ("max_fmei", &self.max_fmei)] {
            row(label, "ratio", ext.ratio.to_string())?;
            row(label, "witness", ext.witness.clone().unwrap_or_default())?;
        }
        for (name, t) in &self.certificates {
            let section = format!("certificate.{name}");
            row(&section, "evaluated", t.evaluated.to_string())?;
            row(&section, "not_applicable", t.not_applicable.to_string())?;
            row(&section, "failures", t.failures.to_string())?;
            row(
                &section,
                "report_only_violations",
                t.report_only_violations.to_string(),
            )?;
            row(
                &section,
                "min_slack",
                t.min_slack.map_or(String::new(), |s| s.to_string()),
            )?;
        }
        for (i, c) in self.histogram.counts.iter().enumerate() {
            let lo = i as f64 * self.histogram.bin_width;
            row("histogram", &format!("{lo:.1}"), c.to_string())?;
        }
        row(
            "histogram",
            "zero_influence",
            self.histogram.zero_influence.to_string(),
        )?;
        let o = &self.observations;
        row(
            "observations",
            "mean_influence",
            o.mean_influence.to_string(),
        )?;
        row("observations", "std_influence", o.std_influence.to_string())?;
        row("observations", "mean_entropy", o.mean_entropy.to_string())?;
        row("observations", "min_entropy", o.min_entropy.to_string())?;
        row(
            "observations",
            "min_entropy_over_n",
            o.min_entropy_over_n.to_string(),
        )?;
        Ok(String::from_utf8(w.into_inner()?)?)
    }
}

#[derive(Clone, Debug)]
pub struct ScanOptions {
    pub checks: Vec<Check>,
    /// Use the rayon pool; required for exhaustive `n = 5`.
    pub parallel: bool,
    /// Worker cap for the parallel pool.
    pub jobs: Option<usize>,
    /// Only evaluate the smallest truth table of each orbit under variable
    /// permutations, input negations and output negation.
    pub symmetry: bool,
    /// Resume from and periodically write this file.
    pub checkpoint: Option<PathBuf>,
    pub checkpoint_every: u64,
    /// Stop after this many checkpoint chunks (the report is then incomplete).
    pub chunk_limit: Option<u64>,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            checks: Check::ALL.to_vec(),
            parallel: false,
            jobs: None,
            symmetry: false,
            checkpoint: None,
            checkpoint_every: CHECKPOINT_EVERY,
            chunk_limit: None,
        }
    }
}

impl ScanOptions {
    fn run<T: Send>(&self, work: impl FnOnce() -> T + Send) -> Result<T> {
        match self.jobs {
            Some(j) if self.parallel => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(j.max(1))
                    .build()?;
                Ok(pool.install(work))
            }
            _ => Ok(work()),
        }
    }

    fn map_shards<S: Sync>(
        &self,
        shards: &[S],
        f: impl Fn(&S) -> Accumulator + Sync + Send,
    ) -> Result<Accumulator> {
        let parts: Vec<Accumulator> = if self.parallel {
            self.run(|| shards.par_iter().map(&f).collect())?
        } else {
            shards.iter().map(f).collect()
        };
        Ok(parts
            .into_iter()
            .fold(Accumulator::default(), |mut acc, p| {
                acc.merge(p);
                acc
            }))
    }
}

/// Input maps `m ↦ flip ⊕ π(m)` for every permutation and negation pattern.
fn symmetry_maps(n: u32) -> Vec<Vec<usize>> {
    fn perms(n: u32) -> Vec<Vec<u32>> {
        if n == 0 {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for p in perms(n - 1) {
            for pos in 0..=p.len() {
                let mut q = p.clone();
                q.insert(pos, n - 1);
                out.push(q);
            }
        }
        out
    }
    let size = 1usize << n;
    let mut maps = Vec::new();
    for perm in perms(n) {
        let permuted: Vec<usize> = (0..size)
            .map(|m| {
                (0..n)
                    .filter(|&i| m >> i & 1 == 1)
                    .map(|i| 1usize << perm[i as usize])
                    .sum()
            })
            .collect();
        for flip in 0..size {
            maps.push(permuted.iter().map(|&m| m ^ flip).collect());
        }
    }
    maps
}

fn is_canonical(bits: u64, n: u32, maps: &[Vec<usize>]) -> bool {
    let size = 1usize << n;
    let full = if size == 64 {
        u64::MAX
    } else {
        (1u64 << size) - 1
    };
    maps.iter().all(|map| {
        let image = (0..size).fold(0u64, |acc, m| acc | (bits >> map[m] & 1) << m);
        image >= bits && (image ^ full) >= bits
    })
}

#[derive(Serialize, Deserialize)]
struct Checkpoint {
    n: u32,
    checks: Vec<Check>,
    symmetry: bool,
    next_index: u64,
    acc: Accumulator,
}

/// Every truth table on `n` variables. `n ≤ 4` by default; `n = 5` needs
/// `opts.parallel`; `n ≥ 6` is refused.
pub fn exhaustive_scan(n: u32, opts: &ScanOptions) -> Result<SweepReport> {
    if n >= 6 {
        bail!("exhaustive scan over 2^(2^{n}) functions is refused; use n ≤ 5");
    }
    if n == 5 && !opts.parallel {
        bail!("exhaustive n = 5 scans 2^32 functions; pass the parallel flag to opt in");
    }
    let eval = Evaluator::new(n, &opts.checks)?;
    let total = 1u64 << (1u32 << n);
    let maps = if opts.symmetry {
        symmetry_maps(n)
    } else {
        Vec::new()
    };

    let mut acc = Accumulator::default();
    let mut start = 0;
    if let Some(path) = opts.checkpoint.as_ref().filter(|p| p.exists()) {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let cp: Checkpoint =
            serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        if cp.n != n || cp.checks != opts.checks || cp.symmetry != opts.symmetry {
            bail!("checkpoint {} belongs to a different scan", path.display());
        }
        acc = cp.acc;
        start = cp.next_index;
    }

    let chunk = if opts.checkpoint.is_some() {
        opts.checkpoint_every.max(1)
    } else {
        total
    };
    let mut chunks_done = 0;
    while start < total {
        if opts.chunk_limit.is_some_and(|limit| chunks_done >= limit) {
            break;
        }
        let end = (start + chunk).min(total);
        let shards: Vec<(u64, u64)> = (start..end)
            .step_by(SHARD as usize)
            .map(|s| (s, (s + SHARD).min(end)))
            .collect();
        let part = opts.map_shards(&shards, |&(lo, hi)| {
            let mut a = Accumulator::default();
            for bits in lo..hi {
                if opts.symmetry && !is_canonical(bits, n, &maps) {
                    continue;
                }
                let f = BooleanFunction::from_bits(n, bits).expect("n ≤ 6");
                a.add(&f, &eval);
            }
            a
        })?;
        acc.merge(part);
        start = end;
        chunks_done += 1;
        if let Some(path) = &opts.checkpoint {
            let cp = Checkpoint {
                n,
                checks: opts.checks.clone(),
                symmetry: opts.symmetry,
                next_index: start,
                acc: acc.clone(),
            };
            let tmp = path.with_extension("tmp");
            std::fs::write(&tmp, serde_json::to_vec(&cp)?)
                .with_context(|| format!("writing {}", tmp.display()))?;
            std::fs::rename(&tmp, path)?;
        }
    }
    let class = format!("all Boolean functions on {n} variables");
    Ok(SweepReport::build(
        class,
        n,
        None,
        opts,
        start >= total,
        acc,
    ))
}

/// `count` uniform truth tables drawn from ChaCha8 seeded with `seed`.
pub fn random_scan(n: u32, count: u64, seed: u64, opts: &ScanOptions) -> Result<SweepReport> {
    spectral_core::function::check_capacity(n)?;
    if n > 24 {
        bail!("random scan materializes 2^{n} entries per sample; use n ≤ 24");
    }
    let eval = Evaluator::new(n, &opts.checks)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let size = 1usize << n;
    let mut acc = Accumulator::default();
    let mut drawn = 0;
    while drawn < count {
        let batch = RANDOM_BATCH.min(count - drawn);
        let tables: Vec<BooleanFunction> = (0..batch)
            .map(|_| {
                let mut table = Vec::with_capacity(size);
                while table.len() < size {
                    let word = rng.next_u64();
                    let take = (size - table.len()).min(64);
                    table.extend((0..take).map(|b| if word >> b & 1 == 1 { -1 } else { 1 }));
                }
                BooleanFunction::new(n, table).expect("length 2^n")
            })
            .collect();
        let shards: Vec<&[BooleanFunction]> = tables.chunks(RANDOM_SHARD as usize).collect();
        acc.merge(opts.map_shards(&shards, |chunk| {
            let mut a = Accumulator::default();
            for f in chunk.iter() {
                a.add(f, &eval);
            }
            a
        })?);
        drawn += batch;
    }
    let class = format!("uniform random functions on {n} variables");
    Ok(SweepReport::build(class, n, Some(seed), opts, true, acc))
}
