//! Named bounds on spectral entropy as checkable certificates.
//!
//! Each function evaluates one inequality on a [`FunctionProfile`] and
//! returns a [`BoundCertificate`]. Intermediate steps of the longer
//! arguments are attached as parts.

use alloc::format;
use alloc::vec::Vec;

use crate::certificate::{BoundCertificate, TOLERANCE};
use crate::dyadic::Dyadic;
use crate::entropy::{binary_entropy, binary_entropy_inv, entropy, neumaier_sum, plogp};
use crate::error::{Error, Result};
use crate::function::{BooleanFunction, RealFunction};
use crate::profile::FunctionProfile;
use crate::spectrum::wht_real;

fn log2(x: f64) -> f64 {
    libm::log2(x)
}

/// `H[f] ≤ log2(n+1) (I[f] + 1)`.
pub fn weak_fei(p: &FunctionProfile) -> BoundCertificate {
    let n = p.n as f64;
    BoundCertificate::check(
        "weak_fei",
        p.entropy,
        log2(n + 1.0) * (p.influence_f64() + 1.0),
    )
    .with_param("n", n)
}

/// Weak FEI for a real-valued function with `‖f̂‖₂ = 1`.
pub fn weak_fei_real(f: &RealFunction) -> BoundCertificate {
    let d = wht_real(f).distribution();
    let norm = d.total_mass();
    let n = f.n() as f64;
    BoundCertificate::check(
        "weak_fei_real",
        entropy(&d),
        log2(n + 1.0) * (d.total_influence() + 1.0),
    )
    .with_param("n", n)
    .with_param("l2_norm_squared", norm)
    .with_param("influence", d.total_influence())
}

/// `2α log2(1/α) ≤ I[f]` with `α = min(Pr[f=1], Pr[f=-1])`.
pub fn edge_iso_alpha(p: &FunctionProfile) -> BoundCertificate {
    let alpha = p.minority.to_f64();
    BoundCertificate::check("edge_iso_alpha", 2.0 * plogp(alpha), p.influence_f64())
        .with_param("alpha", alpha)
}

/// `½ Var log2(1/Var) ≤ I[f]`, with the simple form `Var ≤ I[f]` as a part.
pub fn edge_iso_var(p: &FunctionProfile) -> BoundCertificate {
    let var = p.variance_f64();
    BoundCertificate::check("edge_iso_var", 0.5 * plogp(var), p.influence_f64())
        .with_param("variance", var)
        .with_part(BoundCertificate::check_exact(
            "edge_iso_var.simple",
            p.variance,
            p.influence,
        ))
}

/// `Var(f) ≤ 2 I / log2(1/I)`, only for `I[f] < 1`.
pub fn edge_iso_lowinf(p: &FunctionProfile) -> BoundCertificate {
    let inf = p.influence_f64();
    let var = p.variance_f64();
    if inf >= 1.0 {
        return BoundCertificate::not_applicable("edge_iso_lowinf", "requires I[f] < 1")
            .with_param("influence", inf);
    }
    let rhs = if inf == 0.0 {
        0.0
    } else {
        2.0 * inf / log2(1.0 / inf)
    };
    BoundCertificate::check("edge_iso_lowinf", var, rhs).with_param("influence", inf)
}

/// `H[f] ≥ H_∞[f]`.
pub fn min_entropy_le_entropy(p: &FunctionProfile) -> BoundCertificate {
    BoundCertificate::check("min_entropy_le_entropy", p.min_entropy, p.entropy)
}

/// `H[f] ≤ 2 log2 ‖f̂‖₁` (Rényi order ½ dominates order 1).
pub fn entropy_le_l1(p: &FunctionProfile) -> BoundCertificate {
    let l1 = p.l1_f64();
    BoundCertificate::check("entropy_le_l1", p.entropy, 2.0 * log2(l1)).with_param("l1", l1)
}

/// `‖f̂‖₁ ≤ 2^deg`, `‖f̂‖₁ ≤ 2^granularity`, `‖f̂‖₁ ≤ √sparsity`.
pub fn l1_facts(p: &FunctionProfile) -> Vec<BoundCertificate> {
    let s = &p.spectrum;
    let deg = s.degree();
    let gran = s.granularity();
    let sparsity = s.sparsity();
    alloc::vec![
        BoundCertificate::check_exact(
            "l1_le_2_pow_degree",
            p.l1,
            Dyadic::ONE.scale_pow2(deg as i32)
        )
        .with_param("degree", deg as f64),
        BoundCertificate::check_exact(
            "l1_le_2_pow_granularity",
            p.l1,
            Dyadic::ONE.scale_pow2(gran as i32)
        )
        .with_param("granularity", gran as f64),
        BoundCertificate::check(
            "l1_le_sqrt_sparsity",
            p.l1_f64(),
            libm::sqrt(sparsity as f64)
        )
        .with_param("sparsity", sparsity as f64),
    ]
}

/// Largest `c` with `I[f] ≤ 2^{-cn}`; infinite for constants.
pub fn largest_admissible_c(p: &FunctionProfile) -> f64 {
    let inf = p.influence_f64();
    if inf == 0.0 {
        f64::INFINITY
    } else {
        log2(1.0 / inf) / p.n as f64
    }
}

/// Low-influence theorem: for `I[f] ≤ 2^{-cn}`, `H[f] ≤ 4 (c+1)/c · I[f]`.
///
/// Part: `H[f] ≤ Var(f) n + h(Var(f))`, which holds for every function.
pub fn theorem_eli(p: &FunctionProfile, c: f64) -> Result<BoundCertificate> {
    if c.is_nan() || c <= 0.0 {
        return Err(Error::Domain(format!("theorem_eli needs c > 0, got {c}")));
    }
    let inf = p.influence_f64();
    let n = p.n as f64;
    let threshold = libm::exp2(-c * n);
    let member = inf <= threshold * (1.0 + 1e-12);
    let var = p.variance_f64();
    let partition = BoundCertificate::check(
        "theorem_eli.var_n_plus_h",
        p.entropy,
        var * n + binary_entropy(var)?,
    );
    if !member {
        return Ok(BoundCertificate::not_applicable(
            "theorem_eli",
            format!("I[f] = {inf} exceeds 2^(-cn) = {threshold}"),
        )
        .with_param("c", c)
        .with_param("member", 0.0)
        .with_part(partition));
    }
    Ok(BoundCertificate::check(
        "theorem_eli",
        p.entropy,
        if inf == 0.0 {
            0.0
        } else {
            4.0 * (c + 1.0) / c * inf
        },
    )
    .with_param("c", c)
    .with_param("member", 1.0)
    .with_param("threshold", threshold)
    .with_part(partition))
}

/// `Σ_{j ≤ t} C(n, j)`, the Hamming-ball volume.
pub fn hamming_ball_volume(n: u32, t: u32) -> u128 {
    let mut term: u128 = 1;
    let mut total: u128 = 0;
    for j in 0..=t.min(n) {
        if j > 0 {
            term = term * (n - j + 1) as u128 / j as u128;
        }
        total += term;
    }
    total
}

/// High-entropy theorem: for `H[f] ≥ cn`, `c ∈ (0, ½)`,
/// `H[f] ≤ (1+c)/h⁻¹(c²) · I[f]`.
///
/// Parts at `t = ⌊h⁻¹(c²) n⌋`: the partition bound with the exact ball volume,
/// the rigorous low-level weight bound derived from it, the influence tail
/// `I ≥ W^{>t} t`, and (report-only) the simplified `W^{≤t} ≤ (1-c)/(1-h(t/n))`
/// that drops the additive one.
pub fn theorem_lhe(p: &FunctionProfile, c: f64) -> Result<BoundCertificate> {
    if !(c > 0.0 && c < 0.5) {
        return Err(Error::Domain(format!(
            "theorem_lhe needs c in (0, 1/2), got {c}"
        )));
    }
    let n = p.n as f64;
    if p.entropy + TOLERANCE < c * n {
        return Ok(BoundCertificate::not_applicable(
            "theorem_lhe",
            format!("H[f] = {} is below cn = {}", p.entropy, c * n),
        )
        .with_param("c", c));
    }
    let inv = binary_entropy_inv(c * c)?;
    let t = libm::floor(inv * n) as u32;
    let weights = p.distribution.level_weights();
    let low = weights.at_most(t as usize);
    let high = weights.above(t as usize);
    let log_ball = log2(hamming_ball_volume(p.n, t) as f64);
    let h_ratio = binary_entropy(t as f64 / n)?;

    let partition = BoundCertificate::check(
        "theorem_lhe.partition",
        p.entropy,
        low * log_ball + high * n + binary_entropy(low.clamp(0.0, 1.0))?,
    );
    let low_weight = BoundCertificate::check(
        "theorem_lhe.low_weight",
        low,
        ((1.0 - c) * n + 1.0) / (n - log_ball),
    );
    let simplified = BoundCertificate::check(
        "theorem_lhe.low_weight_simplified",
        low,
        (1.0 - c) / (1.0 - h_ratio),
    )
    .report_only();
    let tail = BoundCertificate::check(
        "theorem_lhe.influence_tail",
        high * t as f64,
        p.influence_f64(),
    );

    Ok(BoundCertificate::check(
        "theorem_lhe",
        p.entropy,
        (1.0 + c) / inv * p.influence_f64(),
    )
    .with_param("c", c)
    .with_param("h_inv_c2", inv)
    .with_param("t", t as f64)
    .with_param("log2_ball", log_ball)
    .with_part(partition)
    .with_part(low_weight)
    .with_part(simplified)
    .with_part(tail))
}

/// L1 theorem: `H[f] ≤ (4 log2 L + 11) Var(f) + 10 I[f]` with `L = ‖f̂‖₁`.
///
/// Parts: the corollary `H ≤ (4 log2 L + 21) I` and the three-way split of the
/// entropy at `θ = (Var/4L)²`.
pub fn theorem_l1(p: &FunctionProfile) -> BoundCertificate {
    let l = p.l1_f64();
    let var = p.variance_f64();
    let inf = p.influence_f64();
    let log_l = log2(l);
    let mut cert = BoundCertificate::check(
        "theorem_l1",
        p.entropy,
        (4.0 * log_l + 11.0) * var + 10.0 * inf,
    )
    .with_param("l1", l)
    .with_part(BoundCertificate::check(
        "theorem_l1.corollary",
        p.entropy,
        (4.0 * log_l + 21.0) * inf,
    ));

    let theta = (var / (4.0 * l)) * (var / (4.0 * l));
    cert = cert.with_param("theta", theta);
    let probs = p.distribution.probs();
    let zero_term = plogp(probs[0]);
    let (mut large, mut small) = (Vec::new(), Vec::new());
    for (s, &q) in probs.iter().enumerate().skip(1) {
        if q == 0.0 {
            continue;
        }
        if libm::fabs(p.spectrum.coeff_f64(s)) > theta {
            large.push(plogp(q));
        } else {
            small.push(plogp(q));
        }
    }
    let large_term = neumaier_sum(large);
    let small_term = neumaier_sum(small);
    let log_inv_var = if var > 0.0 { log2(1.0 / var) } else { 0.0 };
    cert.with_part(BoundCertificate::check(
        "theorem_l1.empty_set_term",
        zero_term,
        (2.0 + log_inv_var) * var,
    ))
    .with_part(BoundCertificate::check(
        "theorem_l1.large_term",
        large_term,
        (4.0 * log_l + 8.0 + 4.0 * log_inv_var) * var,
    ))
    .with_part(BoundCertificate::check(
        "theorem_l1.small_term",
        small_term,
        0.5 * var,
    ))
}

/// FMEI for biased functions: `Var(f) ≤ ½ ⇒ H_∞[f] ≤ 2 I[f]`.
pub fn fmei_biased(p: &FunctionProfile) -> BoundCertificate {
    if p.variance > Dyadic::new(1, 1) {
        return BoundCertificate::not_applicable("fmei_biased", "requires Var(f) ≤ 1/2")
            .with_param("variance", p.variance_f64());
    }
    BoundCertificate::check("fmei_biased", p.min_entropy, 2.0 * p.influence_f64())
        .with_param("variance", p.variance_f64())
}

/// Entropy against log max-sensitivity; no constant is asserted.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SensitivityReport {
    pub entropy: f64,
    pub max_sensitivity: u32,
    pub log2_sensitivity: f64,
    /// `H / log2 s[f]`; zero when `s[f] ≤ 1`.
    pub ratio: f64,
}

pub fn gstw_report(f: &BooleanFunction, p: &FunctionProfile) -> SensitivityReport {
    let s = f.max_sensitivity();
    let log_s = if s > 0 { log2(s as f64) } else { 0.0 };
    SensitivityReport {
        entropy: p.entropy,
        max_sensitivity: s,
        log2_sensitivity: log_s,
        ratio: if log_s > 0.0 { p.entropy / log_s } else { 0.0 },
    }
}

/// Every unconditional certificate of this module for one function.
pub fn standard_certificates(p: &FunctionProfile) -> Vec<BoundCertificate> {
    let mut out = alloc::vec![
        weak_fei(p),
        edge_iso_alpha(p),
        edge_iso_var(p),
        edge_iso_lowinf(p),
        min_entropy_le_entropy(p),
        entropy_le_l1(p),
        theorem_l1(p),
        fmei_biased(p),
    ];
    out.extend(l1_facts(p));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::BooleanFunction;

    fn prof(f: &BooleanFunction) -> FunctionProfile {
        FunctionProfile::new(f)
    }

    fn tribes4() -> BooleanFunction {
        BooleanFunction::from_predicate(4, |m| m & 0b11 == 0b11 || m & 0b1100 == 0b1100).unwrap()
    }

    #[test]
    fn weak_fei_examples() {
        let c = weak_fei(&prof(&BooleanFunction::parity(3).unwrap()));
        assert_eq!((c.lhs, c.rhs), (0.0, 8.0));
        let c = weak_fei(&prof(&BooleanFunction::majority(3).unwrap()));
        assert!((c.lhs - 2.0).abs() < 1e-15);
        assert!((c.rhs - 5.0).abs() < 1e-15);
        assert!(c.holds);
    }

    #[test]
    fn weak_fei_tight_real_example() {
        let f = RealFunction::normalized_sum(8).unwrap();
        let c = weak_fei_real(&f);
        assert!((c.lhs - 3.0).abs() < 1e-12);
        assert!((c.params["influence"] - 1.0).abs() < 1e-12);
        assert!((c.params["l2_norm_squared"] - 1.0).abs() < 1e-12);
        assert!(c.holds);
    }

    #[test]
    fn edge_iso_examples() {
        let c = edge_iso_alpha(&prof(&BooleanFunction::constant(3, 1).unwrap()));
        assert_eq!((c.lhs, c.rhs), (0.0, 0.0));
        let c = edge_iso_alpha(&prof(&BooleanFunction::majority(3).unwrap()));
        assert_eq!((c.lhs, c.rhs), (1.0, 1.5));
        let c = edge_iso_var(&prof(&BooleanFunction::parity(2).unwrap()));
        assert_eq!(c.lhs, 0.0);
        let c = edge_iso_var(&prof(&tribes4()));
        let expect = 0.5 * (63.0 / 64.0) * libm::log2(64.0 / 63.0);
        assert!((c.lhs - expect).abs() < 1e-15);
        assert!((c.lhs - 0.01118).abs() < 1e-5);
        assert_eq!(c.rhs, 1.5);
        assert!(c.all_asserted_hold());
    }

    #[test]
    fn lowinf_not_applicable_for_large_influence() {
        let c = edge_iso_lowinf(&prof(&BooleanFunction::parity(2).unwrap()));
        assert!(!c.applicable && c.holds);
        let c = edge_iso_lowinf(&prof(&BooleanFunction::constant(2, 1).unwrap()));
        assert!(c.applicable && c.lhs == 0.0 && c.rhs == 0.0);
    }

    #[test]
    fn l1_theorem_examples() {
        let c = theorem_l1(&prof(&BooleanFunction::parity(3).unwrap()));
        assert_eq!(c.lhs, 0.0);
        assert_eq!(c.parts[0].rhs, 63.0);
        let c = theorem_l1(&prof(&BooleanFunction::majority(3).unwrap()));
        assert!((c.rhs - 30.0).abs() < 1e-12);
        assert!(c.all_asserted_hold());
    }

    #[test]
    fn eli_examples() {
        let c = theorem_eli(&prof(&BooleanFunction::constant(4, 1).unwrap()), 0.7).unwrap();
        assert!(c.applicable && c.holds);
        assert_eq!((c.lhs, c.rhs), (0.0, 0.0));
        let c = theorem_eli(&prof(&BooleanFunction::parity(2).unwrap()), 0.5).unwrap();
        assert!(!c.applicable);
        assert!(theorem_eli(&prof(&BooleanFunction::parity(2).unwrap()), 0.0).is_err());
    }

    #[test]
    fn lhe_not_applicable_for_parity() {
        let c = theorem_lhe(&prof(&BooleanFunction::parity(4).unwrap()), 0.25).unwrap();
        assert!(!c.applicable);
        assert!(theorem_lhe(&prof(&BooleanFunction::parity(4).unwrap()), 0.5).is_err());
    }

    #[test]
    fn fmei_biased_examples() {
        let c = fmei_biased(&prof(&BooleanFunction::constant(2, -1).unwrap()));
        assert!(c.applicable);
        assert_eq!((c.lhs, c.rhs), (0.0, 0.0));
        let c = fmei_biased(&prof(&BooleanFunction::majority(3).unwrap()));
        assert!(!c.applicable);
    }

    #[test]
    fn ratios() {
        assert_eq!(prof(&BooleanFunction::parity(3).unwrap()).fei_ratio(), 0.0);
        let m = prof(&BooleanFunction::majority(3).unwrap());
        assert!((m.fei_ratio() - 4.0 / 3.0).abs() < 1e-15);
        assert_eq!(prof(&BooleanFunction::max2()).fei_ratio(), 2.0);
        assert_eq!(
            prof(&BooleanFunction::constant(2, 1).unwrap()).fei_ratio(),
            0.0
        );
    }

    #[test]
    fn sensitivity_report() {
        let f = BooleanFunction::majority(3).unwrap();
        let r = gstw_report(&f, &prof(&f));
        assert_eq!(r.max_sensitivity, 2);
        assert!((r.ratio - 2.0).abs() < 1e-15);
        let f = BooleanFunction::parity(4).unwrap();
        let r = gstw_report(&f, &prof(&f));
        assert_eq!((r.entropy, r.log2_sensitivity), (0.0, 2.0));
    }

    #[test]
    fn ball_volume() {
        assert_eq!(hamming_ball_volume(4, 0), 1);
        assert_eq!(hamming_ball_volume(4, 1), 5);
        assert_eq!(hamming_ball_volume(4, 4), 16);
        assert_eq!(hamming_ball_volume(30, 30), 1 << 30);
    }
}
