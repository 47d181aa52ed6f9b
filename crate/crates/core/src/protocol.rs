//! Prefix-free protocols over the spectral distribution and their pricing.
//!
//! A codebook assigns a symbol string to every subset mask; the empty set
//! always gets the empty string. Symbols are small integers indexing the
//! codebook's alphabet.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::certificate::BoundCertificate;
use crate::dnf::{CoverIndex, CoverMeasure, Dnf};
use crate::dyadic::Dyadic;
use crate::entropy::neumaier_sum;
use crate::error::{Error, Result};
use crate::function::check_capacity;
use crate::profile::FunctionProfile;
use crate::spectrum::SpectralDistribution;

pub const BINARY: [char; 2] = ['0', '1'];
/// Binary digits plus the terminator `⊥`.
pub const TERMINATED: [char; 3] = ['0', '1', '⊥'];
/// [`TERMINATED`] plus the escape symbol that prefixes fallback codewords.
pub const ESCAPED: [char; 4] = ['0', '1', '⊥', '~'];

const TERMINATOR: u8 = 2;
const ESCAPE: u8 = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProtocolCodebook {
    n: u32,
    alphabet: Vec<char>,
    codewords: Vec<Vec<u8>>,
}

impl ProtocolCodebook {
    pub fn new(n: u32, alphabet: Vec<char>, codewords: Vec<Vec<u8>>) -> Result<Self> {
        check_capacity(n)?;
        if alphabet.len() < 2 || alphabet.len() > u8::MAX as usize {
            return Err(Error::Domain(format!(
                "alphabet size {} is not in 2..=255",
                alphabet.len()
            )));
        }
        if codewords.len() != 1 << n {
            return Err(Error::TableLength {
                expected: 1 << n,
                got: codewords.len(),
            });
        }
        if !codewords[0].is_empty() {
            return Err(Error::Domain(
                "the empty set must map to the empty string".into(),
            ));
        }
        if let Some(sym) = codewords
            .iter()
            .flatten()
            .find(|&&s| s as usize >= alphabet.len())
        {
            return Err(Error::Domain(format!(
                "symbol {sym} is outside the alphabet"
            )));
        }
        Ok(ProtocolCodebook {
            n,
            alphabet,
            codewords,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn alphabet(&self) -> &[char] {
        &self.alphabet
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet.len()
    }

    pub fn codeword(&self, subset: usize) -> &[u8] {
        &self.codewords[subset]
    }

    pub fn cost(&self, subset: usize) -> usize {
        self.codewords[subset].len()
    }

    /// The codeword spelled in the alphabet's characters.
    pub fn render(&self, subset: usize) -> String {
        self.codewords[subset]
            .iter()
            .map(|&s| self.alphabet[s as usize])
            .collect()
    }

    /// Parses a rendered codeword back into symbols.
    pub fn parse_symbols(&self, text: &str) -> Option<Vec<u8>> {
        text.chars()
            .map(|c| self.alphabet.iter().position(|&a| a == c).map(|i| i as u8))
            .collect()
    }

    /// Codeword → subset map. Later subsets do not overwrite earlier ones, so
    /// colliding codewords decode to the smallest mask.
    pub fn decoder(&self) -> BTreeMap<&[u8], usize> {
        let mut map = BTreeMap::new();
        for (mask, word) in self.codewords.iter().enumerate() {
            map.entry(word.as_slice()).or_insert(mask);
        }
        map
    }

    pub fn decode(&self, word: &[u8]) -> Option<usize> {
        self.codewords.iter().position(|w| w == word)
    }
}

fn positive(d: &SpectralDistribution, subset: usize) -> bool {
    match d.exact_numerators() {
        Some(nums) => nums[subset] > 0,
        None => d.prob(subset) > 0.0,
    }
}

/// Result of the pairwise prefix test over positive-mass nonempty subsets.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PrefixFreeReport {
    pub prefix_free: bool,
    /// Two subsets whose codewords are equal or prefix one another.
    pub conflict: Option<(usize, usize)>,
    /// `Σ |Σ|^{-len(S)}` over the checked subsets.
    pub kraft_sum: f64,
    pub checked: usize,
}

pub fn validate_prefix_free(p: &ProtocolCodebook, d: &SpectralDistribution) -> PrefixFreeReport {
    let mut words: Vec<(&[u8], usize)> = (1..p.codewords.len())
        .filter(|&s| positive(d, s))
        .map(|s| (p.codeword(s), s))
        .collect();
    words.sort();
    // In sorted order a prefix is immediately followed by a word it prefixes.
    let conflict = words
        .windows(2)
        .find(|pair| pair[1].0.starts_with(pair[0].0))
        .map(|pair| (pair[0].1, pair[1].1));
    let base = p.alphabet_size() as f64;
    let kraft_sum = neumaier_sum(
        words
            .iter()
            .map(|(w, _)| libm::pow(base, -(w.len() as f64))),
    );
    PrefixFreeReport {
        prefix_free: conflict.is_none(),
        conflict,
        kraft_sum,
        checked: words.len(),
    }
}

/// `Σ_S f̂(S)² len(encode(S))`.
pub fn expected_cost(p: &ProtocolCodebook, d: &SpectralDistribution) -> f64 {
    neumaier_sum(d.atoms().map(|(s, prob)| prob * p.cost(s) as f64))
}

/// Exact expected cost when the distribution carries exact masses.
pub fn expected_cost_exact(p: &ProtocolCodebook, d: &SpectralDistribution) -> Option<Dyadic> {
    let nums = d.exact_numerators()?;
    let total: i128 = nums
        .iter()
        .enumerate()
        .map(|(s, &num)| num as i128 * p.cost(s) as i128)
        .sum();
    Some(Dyadic::new(total, 2 * d.n()))
}

/// `H[f] ≤ log2|Σ|·E[cost] + 2 I[f]`, with parts for prefix-freeness, the
/// Kraft sum, the rearranged form `H - 2I ≤ log2|Σ|·E[cost]` and Shannon's
/// bound on the distribution conditioned on `S ≠ ∅` (tolerance 1e-9).
/// A codebook that is not prefix-free only yields a report-only certificate.
pub fn www_lemma_check(p: &ProtocolCodebook, f: &FunctionProfile) -> Result<BoundCertificate> {
    if p.n != f.n {
        return Err(Error::DimensionMismatch {
            left: p.n,
            right: f.n,
        });
    }
    let d = &f.distribution;
    let prefix = validate_prefix_free(p, d);
    let log_sigma = libm::log2(p.alphabet_size() as f64);
    let cost = expected_cost(p, d);
    let influence = f.influence_f64();
    let mut cert =
        BoundCertificate::check("www_lemma", f.entropy, log_sigma * cost + 2.0 * influence)
            .with_param("alphabet_size", p.alphabet_size() as f64)
            .with_param("expected_cost", cost)
            .with_param("influence", influence)
            .with_part(
                BoundCertificate::check(
                    "www_lemma.prefix_free",
                    if prefix.prefix_free { 0.0 } else { 1.0 },
                    0.0,
                )
                .with_param("checked", prefix.checked as f64),
            )
            .with_part(BoundCertificate::check(
                "www_lemma.kraft",
                prefix.kraft_sum,
                1.0,
            ))
            .with_part(BoundCertificate::check(
                "www_lemma.rearranged",
                f.entropy - 2.0 * influence,
                log_sigma * cost,
            ));

    let rest = 1.0 - d.prob(0);
    let shannon = if rest <= 0.0 {
        BoundCertificate::not_applicable("www_lemma.shannon_nonempty", "all mass on the empty set")
    } else {
        let cond_entropy = neumaier_sum(d.atoms().filter(|&(s, _)| s != 0).map(|(_, prob)| {
            let q = prob / rest;
            -q * libm::log2(q)
        }));
        BoundCertificate::check(
            "www_lemma.shannon_nonempty",
            cond_entropy,
            log_sigma * cost / rest,
        )
        .with_tolerance(1e-9)
    };
    cert = cert.with_part(shannon);

    if !prefix.prefix_free {
        cert = mark_report_only(cert)
            .with_note("codebook is not prefix-free; the lemma does not apply");
    }
    Ok(cert)
}

fn mark_report_only(mut c: BoundCertificate) -> BoundCertificate {
    c.parts = c.parts.into_iter().map(mark_report_only).collect();
    c.report_only()
}

/// `E[cost] ≤ constant · I[f]`.
pub fn cost_influence_check(
    p: &ProtocolCodebook,
    f: &FunctionProfile,
    constant: f64,
) -> BoundCertificate {
    BoundCertificate::check(
        "expected_cost_vs_influence",
        expected_cost(p, &f.distribution),
        constant * f.influence_f64(),
    )
    .with_param("constant", constant)
}

/// Bit `i` of the mask becomes the `i`-th binary symbol.
pub fn trivial_protocol(n: u32) -> Result<ProtocolCodebook> {
    check_capacity(n)?;
    let codewords = (0..1usize << n)
        .map(|s| {
            if s == 0 {
                Vec::new()
            } else {
                (0..n).map(|i| (s >> i & 1) as u8).collect()
            }
        })
        .collect();
    ProtocolCodebook::new(n, BINARY.to_vec(), codewords)
}

fn ceil_log2(s: usize) -> u32 {
    if s <= 1 {
        0
    } else {
        usize::BITS - (s - 1).leading_zeros()
    }
}

fn push_index(word: &mut Vec<u8>, index: usize, width: u32) {
    word.extend((0..width).rev().map(|b| (index >> b & 1) as u8));
}

/// For each tribe `S` meets: the tribe index in `⌈log2 s⌉` binary symbols
/// (most significant first), then the `w` membership bits of `S` on that
/// tribe; then `⊥`.
pub fn tribes_protocol(w: u32, s: u32) -> Result<ProtocolCodebook> {
    let n = w.checked_mul(s).ok_or(Error::Capacity {
        n: u32::MAX,
        limit: crate::DENSE_LIMIT,
    })?;
    check_capacity(n)?;
    if w == 0 || s == 0 {
        return Err(Error::Domain("tribes needs w ≥ 1 and s ≥ 1".into()));
    }
    let index_width = ceil_log2(s as usize);
    let block = (1usize << w) - 1;
    let codewords = (0..1usize << n)
        .map(|m| {
            let mut word = Vec::new();
            if m == 0 {
                return word;
            }
            for j in 0..s {
                let part = m >> (j * w) & block;
                if part != 0 {
                    push_index(&mut word, j as usize, index_width);
                    word.extend((0..w).map(|b| (part >> b & 1) as u8));
                }
            }
            word.push(TERMINATOR);
            word
        })
        .collect();
    ProtocolCodebook::new(n, TERMINATED.to_vec(), codewords)
}

/// Summary of a read-k DNF protocol.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ReadkProtocolStats {
    pub measure: CoverMeasure,
    /// Nonempty subsets without a cover, encoded by the escape fallback.
    pub fallbacks: usize,
}

/// Same wire format as [`tribes_protocol`], with the clauses of the smallest
/// cover of `S` under `measure` and each clause's own width. Subsets with no
/// cover get the escape symbol followed by the `n`-bit trivial codeword; the
/// alphabet grows to four symbols only when that happens.
pub fn readk_dnf_protocol(
    d: &Dnf,
    measure: CoverMeasure,
) -> Result<(ProtocolCodebook, ReadkProtocolStats)> {
    let n = d.n();
    check_capacity(n)?;
    let index = CoverIndex::new(d, measure)?;
    let index_width = ceil_log2(d.clause_count());
    let mut fallbacks = 0;
    let mut codewords = vec![Vec::new(); 1 << n];
    for (m, word) in codewords.iter_mut().enumerate().skip(1) {
        match index.smallest(m as u64) {
            Ok(cover) => {
                for &c in &cover.clauses {
                    push_index(word, c, index_width);
                    let vars = d.clauses()[c].variables();
                    word.extend(crate::bits(vars as usize).map(|v| (m >> v & 1) as u8));
                }
                word.push(TERMINATOR);
            }
            Err(Error::NoCover { .. }) => {
                fallbacks += 1;
                word.push(ESCAPE);
                word.extend((0..n).map(|i| (m >> i & 1) as u8));
            }
            Err(e) => return Err(e),
        }
    }
    let alphabet = if fallbacks > 0 {
        ESCAPED.to_vec()
    } else {
        TERMINATED.to_vec()
    };
    Ok((
        ProtocolCodebook::new(n, alphabet, codewords)?,
        ReadkProtocolStats { measure, fallbacks },
    ))
}

/// `E[cost] / I[f]`, the quantity the read-k protocol conjecture bounds.
pub fn cost_influence_ratio(p: &ProtocolCodebook, f: &FunctionProfile) -> BoundCertificate {
    let cost = expected_cost(p, &f.distribution);
    let influence = f.influence_f64();
    let ratio = if influence > 0.0 {
        cost / influence
    } else {
        0.0
    };
    BoundCertificate::check("cost_influence_ratio", ratio, ratio)
        .with_param("expected_cost", cost)
        .with_param("influence", influence)
        .report_only()
        .with_note("conjectured O_k(1); observation only")
}
