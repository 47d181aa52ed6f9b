//! Subcommand implementations. Each returns the rendered output and whether
//! an asserted certificate failed.

use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Serialize;
use spectral_core::construct::{self, ConstructionReport};
use spectral_core::dnf::{self, CoverMeasure, Dnf, RegularFmeiReport, RegularityWitness};
use spectral_core::entropy::renyi_entropy;
use spectral_core::protocol::{self, PrefixFreeReport, ProtocolCodebook};
use spectral_core::tree::{self, TreeStats};
use spectral_core::{bounds, BooleanFunction, BoundCertificate, FunctionProfile};

use crate::formats::{self, parse_truth_table, to_json, truth_table_string};
use crate::harness::{self, Check, Evaluator, ScanOptions, SweepReport};

pub struct Output {
    pub text: String,
    pub failed: bool,
}

fn any_failure<'a>(certs: impl IntoIterator<Item = &'a BoundCertificate>) -> bool {
    certs.into_iter().any(|c| !c.all_asserted_hold())
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

pub fn load_truth_table(path: &Path) -> Result<BooleanFunction> {
    parse_truth_table(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

pub fn load_dnf(path: &Path) -> Result<Dnf> {
    dnf::parse_dnf(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

#[derive(Serialize)]
pub struct Metrics {
    pub n: u32,
    pub entropy: f64,
    pub min_entropy: f64,
    pub renyi_2: f64,
    pub influence: f64,
    pub influence_exact: String,
    pub variance: f64,
    pub mean: f64,
    pub minority: f64,
    pub l1_norm: f64,
    pub degree: u32,
    pub sparsity: usize,
    pub granularity: u32,
    pub level_weights: Vec<f64>,
    pub fei_ratio: f64,
    pub fmei_ratio: f64,
}

impl Metrics {
    pub fn of(p: &FunctionProfile) -> Self {
        Metrics {
            n: p.n,
            entropy: p.entropy,
            min_entropy: p.min_entropy,
            renyi_2: renyi_entropy(&p.distribution, 2.0).expect("a = 2 is valid"),
            influence: p.influence_f64(),
            influence_exact: p.influence.to_string(),
            variance: p.variance_f64(),
            mean: p.mean.to_f64(),
            minority: p.minority.to_f64(),
            l1_norm: p.l1_f64(),
            degree: p.spectrum.degree(),
            sparsity: p.spectrum.sparsity(),
            granularity: p.spectrum.granularity(),
            level_weights: p.distribution.level_weights().weights().to_vec(),
            fei_ratio: p.fei_ratio(),
            fmei_ratio: p.fmei_ratio(),
        }
    }
}

#[derive(Serialize)]
struct AnalyzeReport {
    truth_table: String,
    #[serde(flatten)]
    metrics: Metrics,
    variable_influences: Vec<f64>,
    sensitivity: bounds::SensitivityReport,
    certificates: Vec<BoundCertificate>,
}

pub fn analyze(path: &Path, spectrum_csv: Option<&Path>) -> Result<Output> {
    let f = load_truth_table(path)?;
    let p = FunctionProfile::new(&f);
    if let Some(out) = spectrum_csv {
        let file =
            std::fs::File::create(out).with_context(|| format!("creating {}", out.display()))?;
        formats::write_spectrum_csv(&p.spectrum, file)?;
    }
    let certificates = Evaluator::new(f.n(), &Check::ALL)?.evaluate(&p);
    let report = AnalyzeReport {
        truth_table: truth_table_string(&f),
        metrics: Metrics::of(&p),
        variable_influences: f.variable_influences().iter().map(|d| d.to_f64()).collect(),
        sensitivity: bounds::gstw_report(&f, &p),
        certificates,
    };
    Ok(Output {
        failed: any_failure(&report.certificates),
        text: to_json(&report)?,
    })
}

#[derive(Serialize)]
struct TreeReport {
    tree: String,
    n: u32,
    stats: TreeStats,
    entropy: f64,
    influence: f64,
    variance: f64,
    cov_weighted: f64,
    cov_weighted_exact: String,
    cov_recursive: f64,
    cov_recursive_exact: String,
    root_cov: f64,
    cov_bounds: Vec<BoundCertificate>,
    l1_bound: BoundCertificate,
    split_identity: BoundCertificate,
}

pub fn tree(path: &Path, n: Option<u32>, stats_csv: Option<&Path>) -> Result<Output> {
    let t =
        tree::parse_tree(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
    let n = n.unwrap_or_else(|| t.min_variables());
    let analysis = tree::analyze(&t, n)?;
    let stats = tree::tree_stats(&t, n);
    if let Some(out) = stats_csv {
        let file =
            std::fs::File::create(out).with_context(|| format!("creating {}", out.display()))?;
        formats::write_tree_stats_csv(&stats, file)?;
    }
    let p = FunctionProfile::from_spectrum(analysis.spectrum.clone());
    let weighted = analysis.tree_cov_weighted();
    let recursive = analysis.tree_cov_recursive();
    let report = TreeReport {
        tree: tree::serialize_tree(&t)?,
        n,
        stats,
        entropy: p.entropy,
        influence: p.influence_f64(),
        variance: p.variance_f64(),
        cov_weighted: weighted.to_f64(),
        cov_weighted_exact: weighted.to_string(),
        cov_recursive: recursive.to_f64(),
        cov_recursive_exact: recursive.to_string(),
        root_cov: analysis.root_cov().to_f64(),
        cov_bounds: tree::cov_bounds_report(&t, n)?,
        l1_bound: tree::l1_tree_bound(&t, n)?,
        split_identity: tree::www_split_identity(&t, n)?,
    };
    let failed = weighted != recursive
        || any_failure(
            report
                .cov_bounds
                .iter()
                .chain([&report.l1_bound, &report.split_identity]),
        );
    Ok(Output {
        failed,
        text: to_json(&report)?,
    })
}

#[derive(Serialize)]
struct DnfReport {
    dnf: String,
    n: u32,
    clauses: usize,
    widths: Vec<u32>,
    read_k: u32,
    read_profile: Vec<u32>,
    pr_true: f64,
    regularity: RegularityWitness,
    metrics: Metrics,
    fmei: RegularFmeiReport,
}

pub fn dnf(path: &Path, k: Option<u32>, c1: Option<f64>, c2: Option<f64>) -> Result<Output> {
    let d = load_dnf(path)?;
    let (nc1, nc2) = dnf::natural_regularity(&d);
    let (c1, c2) = (c1.unwrap_or(nc1), c2.unwrap_or(nc2));
    let read_k = dnf::dnf_read_k(&d);
    let k = k.unwrap_or(read_k.max(1));
    let f = dnf::dnf_to_function(&d)?;
    let p = FunctionProfile::new(&f);
    let fmei = dnf::regular_fmei_report(&d, c1, c2, k)?;
    let report = DnfReport {
        dnf: dnf::serialize_dnf(&d),
        n: d.n(),
        clauses: d.clause_count(),
        widths: d.clauses().iter().map(|c| c.width()).collect(),
        read_k,
        read_profile: d.read_profile(),
        pr_true: f.count_true() as f64 / f.len() as f64,
        regularity: dnf::regularity(&d, c1, c2),
        metrics: Metrics::of(&p),
        fmei,
    };
    // The certificates are theorem instances only for regular read-k inputs.
    let failed = report.fmei.preconditions_met && !report.fmei.all_hold();
    Ok(Output {
        failed,
        text: to_json(&report)?,
    })
}

#[derive(Serialize)]
struct TribesCoefficient {
    l: u32,
    squared: String,
    value: f64,
}

#[derive(Serialize)]
struct TribesReport {
    w: u32,
    s: u32,
    unbiased: bool,
    dnf: String,
    pr_true: f64,
    metrics: Metrics,
    closed_form: Vec<TribesCoefficient>,
    closed_form_matches: bool,
}

pub fn tribes(w: u32, s: Option<u32>) -> Result<Output> {
    let unbiased_s = construct::unbiased_tribes_count(w)?;
    let s = s.unwrap_or(unbiased_s);
    let d = dnf::tribes(w, s)?;
    let f = dnf::dnf_to_function(&d)?;
    let p = FunctionProfile::new(&f);
    let closed_form = (1..=s)
        .map(|l| {
            let sq = dnf::tribes_coefficient(l, w, s)?;
            Ok(TribesCoefficient {
                l,
                squared: sq.to_string(),
                value: sq.to_f64(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let matches = (1..p.spectrum.len()).all(|m| {
        let l = dnf::tribes_met(m, w, s);
        dnf::tribes_coefficient(l, w, s).is_ok_and(|c| c == p.spectrum.coeff(m).square())
    });
    let report = TribesReport {
        w,
        s,
        unbiased: s == unbiased_s,
        dnf: dnf::serialize_dnf(&d),
        pr_true: f.count_true() as f64 / f.len() as f64,
        metrics: Metrics::of(&p),
        closed_form,
        closed_form_matches: matches,
    };
    Ok(Output {
        failed: !matches,
        text: to_json(&report)?,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum ProtocolKind {
    /// `n`-bit membership vector; target is a truth-table file.
    Trivial,
    /// Tribes protocol; target is `W` (unbiased `s`) or `W,S`.
    Tribes,
    /// Smallest-cover protocol; target is a DNF file.
    Readk,
}

#[derive(Serialize)]
struct ProtocolReport {
    kind: String,
    n: u32,
    alphabet: String,
    alphabet_size: usize,
    expected_cost: f64,
    expected_cost_exact: Option<String>,
    fallbacks: usize,
    prefix: PrefixFreeReport,
    metrics: Metrics,
    www_lemma: BoundCertificate,
    cost_bound: Option<BoundCertificate>,
    cost_influence_ratio: BoundCertificate,
}

fn parse_tribes_target(target: &str) -> Result<(u32, u32)> {
    let mut parts = target.split(',').map(str::trim);
    let w: u32 = parts
        .next()
        .and_then(|w| w.parse().ok())
        .with_context(|| format!("expected `W` or `W,S`, got `{target}`"))?;
    let s = match parts.next() {
        Some(s) => s
            .parse()
            .with_context(|| format!("bad clause count `{s}`"))?,
        None => construct::unbiased_tribes_count(w)?,
    };
    if parts.next().is_some() {
        bail!("expected `W` or `W,S`, got `{target}`");
    }
    Ok((w, s))
}

pub fn protocol(
    kind: ProtocolKind,
    target: &str,
    measure: CoverMeasure,
    codebook_csv: Option<&Path>,
) -> Result<Output> {
    let (codebook, f, fallbacks): (ProtocolCodebook, BooleanFunction, usize) = match kind {
        ProtocolKind::Trivial => {
            let f = load_truth_table(Path::new(target))?;
            (protocol::trivial_protocol(f.n())?, f, 0)
        }
        ProtocolKind::Tribes => {
            let (w, s) = parse_tribes_target(target)?;
            let f = dnf::dnf_to_function(&dnf::tribes(w, s)?)?;
            (protocol::tribes_protocol(w, s)?, f, 0)
        }
        ProtocolKind::Readk => {
            let d = load_dnf(Path::new(target))?;
            let (p, stats) = protocol::readk_dnf_protocol(&d, measure)?;
            (p, dnf::dnf_to_function(&d)?, stats.fallbacks)
        }
    };
    if let Some(out) = codebook_csv {
        let file =
            std::fs::File::create(out).with_context(|| format!("creating {}", out.display()))?;
        formats::write_codebook_csv(&codebook, file)?;
    }
    let p = FunctionProfile::new(&f);
    let cost_bound =
        (kind == ProtocolKind::Tribes).then(|| protocol::cost_influence_check(&codebook, &p, 16.0));
    let report = ProtocolReport {
        kind: format!("{kind:?}").to_lowercase(),
        n: f.n(),
        alphabet: codebook.alphabet().iter().collect(),
        alphabet_size: codebook.alphabet_size(),
        expected_cost: protocol::expected_cost(&codebook, &p.distribution),
        expected_cost_exact: protocol::expected_cost_exact(&codebook, &p.distribution)
            .map(|d| d.to_string()),
        fallbacks,
        prefix: protocol::validate_prefix_free(&codebook, &p.distribution),
        metrics: Metrics::of(&p),
        www_lemma: protocol::www_lemma_check(&codebook, &p)?,
        cost_bound,
        cost_influence_ratio: protocol::cost_influence_ratio(&codebook, &p),
    };
    let failed = any_failure(std::iter::once(&report.www_lemma).chain(report.cost_bound.as_ref()));
    Ok(Output {
        failed,
        text: to_json(&report)?,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum ConstructOp {
    Tensor,
    AndPad,
    BalanceExtend,
    MaxPad,
}

pub fn construct(
    op: ConstructOp,
    inputs: &[std::path::PathBuf],
    k: Option<u32>,
    emit: Option<&Path>,
) -> Result<Output> {
    let expected = if op == ConstructOp::Tensor { 2 } else { 1 };
    if inputs.len() != expected {
        bail!(
            "{op:?} takes {expected} truth-table file(s), got {}",
            inputs.len()
        );
    }
    let f = load_truth_table(&inputs[0])?;
    let need_k = || k.context("this operation needs --k");
    let (g, report): (BooleanFunction, ConstructionReport) = match op {
        ConstructOp::Tensor => construct::tensor_report(&f, &load_truth_table(&inputs[1])?)?,
        ConstructOp::AndPad => construct::and_pad_report(&f, need_k()?)?,
        ConstructOp::BalanceExtend => construct::balance_extend_report(&f)?,
        ConstructOp::MaxPad => construct::max_pad_report(&f, need_k()?)?,
    };
    if let Some(out) = emit {
        std::fs::write(out, formats::write_truth_table(&g))
            .with_context(|| format!("writing {}", out.display()))?;
    }
    Ok(Output {
        failed: !report.all_hold(),
        text: to_json(&report)?,
    })
}

pub enum ScanMode {
    Exhaustive,
    Random { count: u64, seed: u64 },
}

pub fn scan(
    n: u32,
    mode: ScanMode,
    opts: &ScanOptions,
    out: Option<&Path>,
) -> Result<(Output, SweepReport)> {
    let report = match mode {
        ScanMode::Exhaustive => harness::exhaustive_scan(n, opts)?,
        ScanMode::Random { count, seed } => harness::random_scan(n, count, seed, opts)?,
    };
    let csv = out.is_some_and(|p| p.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")));
    let text = if csv {
        report.to_csv()?
    } else {
        to_json(&report)?
    };
    if let Some(path) = out {
        std::fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok((
        Output {
            failed: report.theorem_failures > 0,
            text,
        },
        report,
    ))
}
