//! DNF formulas: parsing, materialization, Tribes closed forms, regularity,
//! clause covers and the regular read-k FMEI checks.
//!
//! A literal `xI` is satisfied when `x_I` is True (−1), `!xI` when it is
//! False (+1). The formula outputs True exactly when some clause has all its
//! literals satisfied.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::{self, Write};

use crate::certificate::BoundCertificate;
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::function::{check_capacity, BooleanFunction};
use crate::profile::FunctionProfile;
use crate::spectrum::Spectrum;
use crate::tree::parse_variable;

/// Largest clause count accepted by the exhaustive cover search.
pub const COVER_CLAUSE_LIMIT: usize = 20;
/// Largest family size materialized by [`bfjkmr_family`].
pub const FAMILY_LIMIT: u64 = 1 << 24;
/// Largest variable count a DNF may mention.
pub const MAX_VARIABLES: u32 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    /// 0-based variable index.
    pub var: u32,
    /// `true` for `xI`, `false` for `!xI`.
    pub positive: bool,
}

/// A conjunction of literals on distinct variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Clause {
    literals: Vec<Literal>,
    vars: u64,
    negated: u64,
}

impl Clause {
    pub fn new(literals: Vec<Literal>) -> Result<Self> {
        Self::build(literals, 0)
    }

    fn build(literals: Vec<Literal>, index: usize) -> Result<Self> {
        if literals.is_empty() {
            return Err(Error::Domain("a clause needs at least one literal".into()));
        }
        let mut vars = 0u64;
        let mut negated = 0u64;
        for lit in &literals {
            if lit.var >= MAX_VARIABLES {
                return Err(Error::IndexOutOfRange {
                    index: lit.var,
                    n: MAX_VARIABLES,
                });
            }
            let bit = 1u64 << lit.var;
            if vars & bit != 0 {
                return Err(Error::DuplicateLiteral {
                    var: lit.var + 1,
                    clause: index + 1,
                });
            }
            vars |= bit;
            if !lit.positive {
                negated |= bit;
            }
        }
        Ok(Clause {
            literals,
            vars,
            negated,
        })
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    /// Mask of the variables the clause mentions.
    pub fn variables(&self) -> u64 {
        self.vars
    }

    pub fn width(&self) -> u32 {
        self.vars.count_ones()
    }

    pub fn satisfied(&self, input: u64) -> bool {
        (input ^ self.negated) & self.vars == self.vars
    }
}

/// `T_1 ∨ … ∨ T_s` over `n` variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dnf {
    n: u32,
    clauses: Vec<Clause>,
}

impl Dnf {
    pub fn new(n: u32, clauses: Vec<Clause>) -> Result<Self> {
        if clauses.is_empty() {
            return Err(Error::Domain("a DNF needs at least one clause".into()));
        }
        if n > MAX_VARIABLES {
            return Err(Error::Capacity {
                n,
                limit: MAX_VARIABLES,
            });
        }
        if let Some(lit) = clauses
            .iter()
            .flat_map(|c| &c.literals)
            .find(|l| l.var >= n)
        {
            return Err(Error::IndexOutOfRange { index: lit.var, n });
        }
        Ok(Dnf { n, clauses })
    }

    /// Builds a monotone DNF from clause variable lists (0-based).
    pub fn monotone(n: u32, clauses: &[&[u32]]) -> Result<Self> {
        let clauses = clauses
            .iter()
            .enumerate()
            .map(|(i, vars)| {
                Clause::build(
                    vars.iter()
                        .map(|&var| Literal {
                            var,
                            positive: true,
                        })
                        .collect(),
                    i,
                )
            })
            .collect::<Result<Vec<_>>>()?;
        Dnf::new(n, clauses)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn clause_count(&self) -> usize {
        self.clauses.len()
    }

    pub fn max_width(&self) -> u32 {
        self.clauses.iter().map(Clause::width).max().unwrap_or(0)
    }

    pub fn min_width(&self) -> u32 {
        self.clauses.iter().map(Clause::width).min().unwrap_or(0)
    }

    pub fn evaluate(&self, input: u64) -> i8 {
        if self.clauses.iter().any(|c| c.satisfied(input)) {
            -1
        } else {
            1
        }
    }

    /// Number of clauses mentioning each variable.
    pub fn read_profile(&self) -> Vec<u32> {
        (0..self.n)
            .map(|i| self.clauses.iter().filter(|c| c.vars >> i & 1 == 1).count() as u32)
            .collect()
    }

    /// Union of all clause variable sets.
    pub fn support(&self) -> u64 {
        self.clauses.iter().fold(0, |m, c| m | c.vars)
    }
}

impl fmt::Display for Dnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let max_var = self
            .clauses
            .iter()
            .map(|c| 64 - c.vars.leading_zeros())
            .max()
            .unwrap_or(0);
        if max_var != self.n {
            writeln!(f, "n={}", self.n)?;
        }
        for clause in &self.clauses {
            for (j, lit) in clause.literals.iter().enumerate() {
                if j > 0 {
                    f.write_char(' ')?;
                }
                if !lit.positive {
                    f.write_char('!')?;
                }
                write!(f, "x{}", lit.var + 1)?;
            }
            f.write_char('\n')?;
        }
        Ok(())
    }
}

/// Parses one clause per line. Blank lines and `#` comments are ignored; an
/// optional leading `n=K` line fixes the variable count, which otherwise is
/// the largest variable mentioned.
pub fn parse_dnf(text: &str) -> Result<Dnf> {
    let mut n: Option<u32> = None;
    let mut clauses = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let column_of = |tok: &str| tok.as_ptr() as usize - raw.as_ptr() as usize + 1;
        if let Some(value) = trimmed.strip_prefix("n=") {
            if n.is_some() || !clauses.is_empty() {
                return Err(Error::Parse {
                    line: lineno + 1,
                    column: column_of(trimmed),
                    message: "`n=` must be the first entry".into(),
                });
            }
            n = Some(value.trim().parse().map_err(|_| Error::Parse {
                line: lineno + 1,
                column: column_of(value),
                message: "expected a variable count".into(),
            })?);
            continue;
        }
        let mut literals = Vec::new();
        for tok in trimmed.split_whitespace() {
            let (positive, body) = match tok.strip_prefix('!') {
                Some(rest) => (false, rest),
                None => (true, tok),
            };
            let var = parse_variable(body).ok_or_else(|| Error::Parse {
                line: lineno + 1,
                column: column_of(tok),
                message: format!("expected a literal xI or !xI, found `{tok}`"),
            })?;
            literals.push(Literal { var, positive });
        }
        clauses.push(Clause::build(literals, clauses.len())?);
    }
    if clauses.is_empty() {
        return Err(Error::Parse {
            line: text.lines().count().max(1),
            column: 1,
            message: "no clauses".into(),
        });
    }
    let needed = clauses
        .iter()
        .map(|c| 64 - c.vars.leading_zeros())
        .max()
        .unwrap_or(0);
    let n = n.unwrap_or(needed);
    Dnf::new(n, clauses)
}

pub fn serialize_dnf(d: &Dnf) -> String {
    let mut s = String::new();
    write!(s, "{d}").expect("writing to a String cannot fail");
    s
}

pub fn dnf_to_function(d: &Dnf) -> Result<BooleanFunction> {
    check_capacity(d.n)?;
    BooleanFunction::from_predicate(d.n, |m| d.evaluate(m as u64) == -1)
}

/// `Tr_{w,s}`: clause `j` is `x_{jw+1} ∧ … ∧ x_{jw+w}`.
pub fn tribes(w: u32, s: u32) -> Result<Dnf> {
    if w == 0 || s == 0 {
        return Err(Error::Domain("tribes needs w ≥ 1 and s ≥ 1".into()));
    }
    let n = w
        .checked_mul(s)
        .filter(|&n| n <= MAX_VARIABLES)
        .ok_or(Error::Capacity {
            n: w.saturating_mul(s),
            limit: MAX_VARIABLES,
        })?;
    let vars: Vec<Vec<u32>> = (0..s).map(|j| (j * w..(j + 1) * w).collect()).collect();
    let refs: Vec<&[u32]> = vars.iter().map(Vec::as_slice).collect();
    Dnf::monotone(n, &refs)
}

/// Tribes with the largest `s` keeping `Pr[True] ≤ 1/2`.
pub fn unbiased_tribes(w: u32) -> Result<Dnf> {
    tribes(w, crate::construct::unbiased_tribes_count(w)?)
}

/// Read-2 DNF on a `rows × cols` grid of variables (`x_{r·cols + c + 1}`):
/// one clause per row followed by one clause per column.
pub fn grid(rows: u32, cols: u32) -> Result<Dnf> {
    if rows == 0 || cols == 0 {
        return Err(Error::Domain(
            "grid needs at least one row and column".into(),
        ));
    }
    let n = rows
        .checked_mul(cols)
        .filter(|&n| n <= MAX_VARIABLES)
        .ok_or(Error::Capacity {
            n: rows.saturating_mul(cols),
            limit: MAX_VARIABLES,
        })?;
    let mut vars: Vec<Vec<u32>> = (0..rows)
        .map(|r| (0..cols).map(|c| r * cols + c).collect())
        .collect();
    vars.extend((0..cols).map(|c| (0..rows).map(|r| r * cols + c).collect()));
    let refs: Vec<&[u32]> = vars.iter().map(Vec::as_slice).collect();
    Dnf::monotone(n, &refs)
}

pub fn dnf_read_k(d: &Dnf) -> u32 {
    d.read_profile().into_iter().max().unwrap_or(0)
}

/// Outcome of the `(C1, C2)`-regularity test.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RegularityWitness {
    /// Width parameter: the largest clause width.
    pub w: u32,
    pub c1: f64,
    pub c2: f64,
    pub s: usize,
    pub min_width: u32,
    /// `2^{C2·w}`.
    pub target_clauses: f64,
    pub width_ok: bool,
    pub count_ok: bool,
    pub holds: bool,
}

/// Widths must lie in `[C1·w, w]` and the clause count within a factor two
/// of `2^{C2·w}`.
pub fn regularity(d: &Dnf, c1: f64, c2: f64) -> RegularityWitness {
    let w = d.max_width();
    let s = d.clause_count();
    let lower = c1 * w as f64;
    let width_ok = d.clauses.iter().all(|c| c.width() as f64 >= lower - 1e-9);
    let target = libm::exp2(c2 * w as f64);
    let ratio = s as f64 / target;
    let count_ok = (0.5 - 1e-9..=2.0 + 1e-9).contains(&ratio);
    RegularityWitness {
        w,
        c1,
        c2,
        s,
        min_width: d.min_width(),
        target_clauses: target,
        width_ok,
        count_ok,
        holds: width_ok && count_ok,
    }
}

/// The tightest regularity constants: `C1 = min width / w`, `C2 = log2(s)/w`.
pub fn natural_regularity(d: &Dnf) -> (f64, f64) {
    let w = d.max_width() as f64;
    (
        d.min_width() as f64 / w,
        libm::log2(d.clause_count() as f64) / w,
    )
}

/// `f̂(S)² = 4·2^{-2lw}(1 - 2^{-w})^{2(s-l)}` for `S ≠ ∅` meeting exactly `l`
/// tribes of `Tr_{w,s}`.
pub fn tribes_coefficient(l: u32, w: u32, s: u32) -> Result<Dyadic> {
    if l == 0 {
        return Err(Error::Domain(
            "l = 0 is the empty set; use the squared mean".into(),
        ));
    }
    if l > s || w == 0 {
        return Err(Error::Domain(format!(
            "need 1 ≤ l ≤ s and w ≥ 1, got l={l}, w={w}, s={s}"
        )));
    }
    // 2^{2 - 2ws} (2^w - 1)^{2(s-l)}
    let exp = 2 * w * s;
    let base = (1i128 << w) - 1;
    let power = 2 * (s - l);
    let bits = (128 - base.leading_zeros()) * power;
    if exp > 120 || bits > 125 {
        return Err(Error::Capacity {
            n: w * s,
            limit: 60,
        });
    }
    Ok(Dyadic::new(base.pow(power) * 4, exp))
}

/// Number of tribes of `Tr_{w,s}` that `subset` meets.
pub fn tribes_met(subset: usize, w: u32, s: u32) -> u32 {
    let block = (1usize << w) - 1;
    (0..s).filter(|j| subset >> (j * w) & block != 0).count() as u32
}

/// How a cover is scored; the other two measures break ties, then the sorted
/// clause-index list in lexicographic order.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum CoverMeasure {
    /// `|∪ T_i|` over clauses in the cover.
    #[default]
    UniqueVariables,
    /// Number of clauses.
    ClauseCount,
    /// `Σ |T_i|`.
    TotalWidth,
}

/// A set of clauses, stored as sorted 0-based indices.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Cover {
    pub clauses: Vec<usize>,
    pub unique_variables: u32,
    pub total_width: u32,
}

impl Cover {
    fn key(&self, measure: CoverMeasure) -> (u32, u32, u32, &[usize]) {
        let count = self.clauses.len() as u32;
        let (a, b, c) = match measure {
            CoverMeasure::UniqueVariables => (self.unique_variables, count, self.total_width),
            CoverMeasure::ClauseCount => (count, self.unique_variables, self.total_width),
            CoverMeasure::TotalWidth => (self.total_width, self.unique_variables, count),
        };
        (a, b, c, &self.clauses)
    }
}

/// Every clause subset, precomputed with its variable union, for repeated
/// cover queries.
#[derive(Clone, Debug)]
pub struct CoverIndex {
    ordered: Vec<(u64, Cover)>,
}

impl CoverIndex {
    pub fn new(d: &Dnf, measure: CoverMeasure) -> Result<Self> {
        let s = d.clause_count();
        if s > COVER_CLAUSE_LIMIT {
            return Err(Error::Guard(format!(
                "cover search over {s} clauses exceeds the limit of {COVER_CLAUSE_LIMIT}"
            )));
        }
        let mut ordered: Vec<(u64, Cover)> = (1u32..1 << s)
            .map(|set| {
                let clauses: Vec<usize> = (0..s).filter(|i| set >> i & 1 == 1).collect();
                let union = clauses.iter().fold(0u64, |m, &i| m | d.clauses[i].vars);
                let total_width = clauses.iter().map(|&i| d.clauses[i].width()).sum();
                (
                    union,
                    Cover {
                        clauses,
                        unique_variables: union.count_ones(),
                        total_width,
                    },
                )
            })
            .collect();
        ordered.sort_by(|a, b| a.1.key(measure).cmp(&b.1.key(measure)));
        Ok(CoverIndex { ordered })
    }

    /// All covers of `subset`, best first.
    pub fn covers(&self, subset: u64) -> impl Iterator<Item = &Cover> + '_ {
        self.ordered
            .iter()
            .filter(move |(union, _)| union & subset == subset)
            .map(|(_, c)| c)
    }

    pub fn smallest(&self, subset: u64) -> Result<&Cover> {
        if subset == 0 {
            return Err(Error::Domain("the empty set has no cover to choose".into()));
        }
        self.covers(subset).next().ok_or(Error::NoCover {
            mask: subset as usize,
        })
    }
}

/// All clause subsets whose variables contain `subset`, best first under the
/// unique-variable measure.
pub fn covers(d: &Dnf, subset: u64) -> Result<Vec<Cover>> {
    if subset == 0 {
        return Err(Error::Domain("S must be nonempty".into()));
    }
    let index = CoverIndex::new(d, CoverMeasure::UniqueVariables)?;
    let all: Vec<Cover> = index.covers(subset).cloned().collect();
    if all.is_empty() {
        return Err(Error::NoCover {
            mask: subset as usize,
        });
    }
    Ok(all)
}

pub fn smallest_cover(d: &Dnf, subset: u64, measure: CoverMeasure) -> Result<Cover> {
    CoverIndex::new(d, measure)?.smallest(subset).cloned()
}

/// The family `∪_{|V_i| ≤ log2(24kn)} P(V_i)` with its spectral weight.
#[derive(Clone, Debug, PartialEq)]
pub struct BfjkmrFamily {
    pub k: u32,
    pub threshold: f64,
    /// Indices of the clauses narrow enough to contribute.
    pub narrow_clauses: Vec<usize>,
    /// Members in increasing mask order.
    pub members: Vec<u64>,
    pub weight: Dyadic,
    /// The member of largest squared coefficient (smallest mask on ties).
    pub heaviest: Option<(u64, Dyadic)>,
}

impl BfjkmrFamily {
    pub fn size(&self) -> usize {
        self.members.len()
    }

    /// `|ℱ| ≤ 24 n² k²` and `Σ_{S∈ℱ} f̂(S)² ≥ 1/(4k)`.
    pub fn certificates(&self, n: u32) -> Vec<BoundCertificate> {
        let (n, k) = (n as f64, self.k as f64);
        alloc::vec![
            BoundCertificate::check("family_size", self.size() as f64, 24.0 * n * n * k * k),
            BoundCertificate::check("family_weight", 1.0 / (4.0 * k), self.weight.to_f64())
                .with_param("k", k),
        ]
    }
}

pub fn bfjkmr_family(d: &Dnf, k: u32, spectrum: &Spectrum) -> Result<BfjkmrFamily> {
    if k == 0 {
        return Err(Error::Domain("k must be ≥ 1".into()));
    }
    if spectrum.n() != d.n {
        return Err(Error::DimensionMismatch {
            left: d.n,
            right: spectrum.n(),
        });
    }
    let threshold = libm::log2(24.0 * k as f64 * d.n as f64);
    let narrow: Vec<usize> = (0..d.clause_count())
        .filter(|&i| d.clauses[i].width() as f64 <= threshold)
        .collect();
    let bound: u64 = narrow
        .iter()
        .map(|&i| 1u64 << d.clauses[i].width().min(40))
        .sum();
    if bound > FAMILY_LIMIT {
        return Err(Error::Guard(format!(
            "family may hold {bound} subsets, above the limit of {FAMILY_LIMIT}"
        )));
    }
    let mut members = BTreeSet::new();
    for &i in &narrow {
        let vars = d.clauses[i].vars;
        let mut sub = vars;
        loop {
            members.insert(sub);
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & vars;
        }
    }
    let members: Vec<u64> = members.into_iter().collect();
    let dist = spectrum.distribution();
    let mass = |m: u64| {
        dist.exact_prob(m as usize)
            .expect("Boolean spectra are exact")
    };
    let weight = members.iter().map(|&m| mass(m)).sum();
    let heaviest =
        members
            .iter()
            .map(|&m| (m, mass(m)))
            .fold(None, |best: Option<(u64, Dyadic)>, cur| match best {
                Some(b) if b.1 >= cur.1 => Some(b),
                _ => Some(cur),
            });
    Ok(BfjkmrFamily {
        k,
        threshold,
        narrow_clauses: narrow,
        members,
        weight,
        heaviest,
    })
}

/// Checks for a regular read-k DNF.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RegularFmeiReport {
    pub regularity: RegularityWitness,
    pub read_k: u32,
    pub k: u32,
    /// Whether the DNF is `(C1, C2)`-regular and read-k.
    pub preconditions_met: bool,
    pub family_size: usize,
    pub family_weight: f64,
    pub certificates: Vec<BoundCertificate>,
}

impl RegularFmeiReport {
    pub fn all_hold(&self) -> bool {
        self.certificates
            .iter()
            .all(BoundCertificate::all_asserted_hold)
    }
}

/// (a) `max_{S∈ℱ} f̂(S)² ≥ 1/(96k³n²)`, (b) `H_∞ ≤ 7 + 3 log2 k + 2 log2 n`,
/// (c) `I_j ≤ k·2^{-C1·w+1}` for every `j`, (d) `I ≥ log2(1/MaxInf)`.
/// Family size and weight are attached to (a) as parts.
pub fn regular_fmei_report(d: &Dnf, c1: f64, c2: f64, k: u32) -> Result<RegularFmeiReport> {
    let f = dnf_to_function(d)?;
    let profile = FunctionProfile::new(&f);
    let witness = regularity(d, c1, c2);
    let read_k = dnf_read_k(d);
    let family = bfjkmr_family(d, k, &profile.spectrum)?;
    let (nf, kf) = (d.n as f64, k as f64);
    let w = witness.w as f64;

    let heaviest = family.heaviest.map_or(0.0, |(_, m)| m.to_f64());
    let mut a = BoundCertificate::check(
        "regular_max_family_coefficient",
        1.0 / (96.0 * kf * kf * kf * nf * nf),
        heaviest,
    )
    .with_param("k", kf)
    .with_param("n", nf);
    for part in family.certificates(d.n) {
        a = a.with_part(part);
    }
    if let Some((mask, _)) = family.heaviest {
        a = a.with_param("heaviest_mask", mask as f64);
    }

    let b = BoundCertificate::check(
        "regular_min_entropy",
        profile.min_entropy,
        7.0 + 3.0 * libm::log2(kf) + 2.0 * libm::log2(nf),
    );

    let influences = f.variable_influences();
    let max_inf = influences.iter().copied().max().unwrap_or(Dyadic::ZERO);
    let c = BoundCertificate::check(
        "regular_variable_influence",
        max_inf.to_f64(),
        kf * libm::exp2(-c1 * w + 1.0),
    )
    .with_param("c1", c1)
    .with_param("c2", c2)
    .with_param("w", w)
    .with_param("rhs_with_c2", kf * libm::exp2(-c2 * w + 1.0));

    let dcert = if max_inf.is_zero() {
        BoundCertificate::not_applicable(
            "regular_kkl_influence",
            "constant function has no influential variable",
        )
    } else {
        BoundCertificate::check(
            "regular_kkl_influence",
            libm::log2(1.0 / max_inf.to_f64()),
            profile.influence_f64(),
        )
        .with_param("max_influence", max_inf.to_f64())
        .with_param("variance", profile.variance_f64())
    };

    Ok(RegularFmeiReport {
        preconditions_met: witness.holds && read_k <= k,
        regularity: witness,
        read_k,
        k,
        family_size: family.size(),
        family_weight: family.weight.to_f64(),
        certificates: alloc::vec![a, b, c, dcert],
    })
}
