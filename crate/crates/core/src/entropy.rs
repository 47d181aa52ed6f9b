//! Shannon, Rényi and min-entropy of spectral distributions, plus the binary
//! entropy function and the entropy partition identity.

use alloc::format;

use crate::error::{Error, Result};
use crate::spectrum::SpectralDistribution;

/// Compensated summation.
pub fn neumaier_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if libm::fabs(sum) >= libm::fabs(v) {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// `p log2(1/p)` with `0 log 0 = 0`.
#[inline]
pub fn plogp(p: f64) -> f64 {
    if p <= 0.0 {
        0.0
    } else {
        -p * libm::log2(p)
    }
}

/// `H = Σ_S f̂(S)^2 log2(1/f̂(S)^2)`, in bits.
pub fn entropy(d: &SpectralDistribution) -> f64 {
    match d.exact_numerators() {
        // p = q / 4^n, so p log(1/p) = p (2n - log2 q): the large log term is exact.
        Some(exact) => {
            let two_n = 2.0 * d.n() as f64;
            neumaier_sum(
                exact
                    .iter()
                    .zip(d.probs())
                    .filter(|(&q, _)| q > 0)
                    .map(|(&q, &p)| p * (two_n - libm::log2(q as f64))),
            )
        }
        None => neumaier_sum(d.atoms().map(|(_, p)| plogp(p))),
    }
}

/// `H_∞ = log2(1 / max_S f̂(S)^2)`.
pub fn min_entropy(d: &SpectralDistribution) -> Result<f64> {
    if let Some(exact) = d.exact_numerators() {
        let q = exact.iter().copied().max().unwrap_or(0);
        if q == 0 {
            return Err(Error::Undefined(
                "min-entropy of an all-zero distribution".into(),
            ));
        }
        return Ok(2.0 * d.n() as f64 - libm::log2(q as f64));
    }
    match d.max_atom() {
        Some((_, p)) => Ok(-libm::log2(p)),
        None => Err(Error::Undefined(
            "min-entropy of an all-zero distribution".into(),
        )),
    }
}

/// `H_a = log2(Σ p^a) / (1 - a)`; `a = 1` and `a = ∞` use the Shannon and
/// min-entropy definitions.
pub fn renyi_entropy(d: &SpectralDistribution, a: f64) -> Result<f64> {
    if a.is_nan() || a < 0.0 {
        return Err(Error::Domain(format!("Rényi order must be ≥ 0, got {a}")));
    }
    if a == 1.0 {
        return Ok(entropy(d));
    }
    if a.is_infinite() {
        return min_entropy(d);
    }
    let power_sum = neumaier_sum(d.atoms().map(|(_, p)| libm::pow(p, a)));
    if power_sum <= 0.0 {
        return Err(Error::Undefined(
            "Rényi entropy of an all-zero distribution".into(),
        ));
    }
    Ok(libm::log2(power_sum) / (1.0 - a))
}

/// `h(p) = p log2(1/p) + (1-p) log2(1/(1-p))`.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!(
            "binary entropy needs p in [0,1], got {p}"
        )));
    }
    Ok(plogp(p) + plogp(1.0 - p))
}

/// `1 - h(p)`, accurate near `p = 1/2`.
fn entropy_deficit(p: f64) -> f64 {
    let q = 1.0 - p;
    let term = |x: f64| {
        if x <= 0.0 {
            0.0
        } else {
            // x log2(2x) with 2x = 1 + (2x - 1)
            x * libm::log1p(2.0 * x - 1.0) / core::f64::consts::LN_2
        }
    };
    term(p) + term(q)
}

/// The unique `p ∈ [0, 1/2]` with `h(p) = y`, by bisection to `1e-12`.
pub fn binary_entropy_inv(y: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&y) {
        return Err(Error::Domain(format!(
            "inverse binary entropy needs y in [0,1], got {y}"
        )));
    }
    // Below 1/2 compare h directly; above, compare the deficit 1 - h, which
    // keeps resolution where h is flat.
    let below = |p: f64| {
        if y < 0.5 {
            plogp(p) + plogp(1.0 - p) < y
        } else {
            entropy_deficit(p) > 1.0 - y
        }
    };
    let (mut lo, mut hi) = (0.0f64, 0.5f64);
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if below(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// The four terms of `H = m H_in + (1 - m) H_out + h(m)` for a subset family
/// of mass `m`, with the conditional entropies normalized to mass one.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EntropyPartition {
    pub mass_in: f64,
    pub entropy_in: f64,
    pub entropy_out: f64,
    pub binary_term: f64,
}

impl EntropyPartition {
    pub fn reassemble(&self) -> f64 {
        self.mass_in * self.entropy_in + (1.0 - self.mass_in) * self.entropy_out + self.binary_term
    }
}

/// Splits the entropy of `d` along `family`.
///
/// When the family carries all or none of the mass the conditional entropy of
/// the empty side is reported as zero and the other side carries `H`.
pub fn entropy_partition(
    d: &SpectralDistribution,
    family: impl Fn(usize) -> bool,
) -> EntropyPartition {
    let total = d.total_mass();
    let mass_in = match d.exact_numerators() {
        Some(ex) => {
            let q: u128 = ex
                .iter()
                .enumerate()
                .filter(|(s, _)| family(*s))
                .map(|(_, &q)| q as u128)
                .sum();
            crate::dyadic::Dyadic::new(q as i128, 2 * d.n()).to_f64()
        }
        None => neumaier_sum(d.atoms().filter(|(s, _)| family(*s)).map(|(_, p)| p)) / total,
    };
    let mass_out = 1.0 - mass_in;
    if mass_in <= 0.0 {
        return EntropyPartition {
            mass_in: 0.0,
            entropy_in: 0.0,
            entropy_out: entropy(d),
            binary_term: 0.0,
        };
    }
    if mass_out <= 0.0 {
        return EntropyPartition {
            mass_in: 1.0,
            entropy_in: entropy(d),
            entropy_out: 0.0,
            binary_term: 0.0,
        };
    }
    let conditional = |inside: bool, mass: f64| {
        neumaier_sum(
            d.atoms()
                .filter(|(s, _)| family(*s) == inside)
                .map(|(_, p)| plogp(p / total / mass)),
        )
    };
    EntropyPartition {
        mass_in,
        entropy_in: conditional(true, mass_in),
        entropy_out: conditional(false, mass_out),
        binary_term: plogp(mass_in) + plogp(mass_out),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::BooleanFunction;
    use crate::spectrum::wht;

    fn dist(f: &BooleanFunction) -> SpectralDistribution {
        wht(f).distribution()
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(entropy(&dist(&BooleanFunction::parity(3).unwrap())), 0.0);
        assert!((entropy(&dist(&BooleanFunction::majority(3).unwrap())) - 2.0).abs() < 1e-15);
        assert!((entropy(&dist(&BooleanFunction::max2())) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn min_entropy_examples() {
        assert_eq!(
            min_entropy(&dist(&BooleanFunction::parity(3).unwrap())).unwrap(),
            0.0
        );
        assert_eq!(
            min_entropy(&dist(&BooleanFunction::majority(3).unwrap())).unwrap(),
            2.0
        );
        let zero = SpectralDistribution::from_probs(1, alloc::vec![0.0, 0.0]).unwrap();
        assert!(matches!(min_entropy(&zero), Err(Error::Undefined(_))));
    }

    #[test]
    fn renyi_examples() {
        let d = dist(&BooleanFunction::majority(3).unwrap());
        assert!((renyi_entropy(&d, 0.5).unwrap() - 2.0).abs() < 1e-12);
        assert_eq!(renyi_entropy(&d, 1.0).unwrap(), entropy(&d));
        assert_eq!(renyi_entropy(&d, f64::INFINITY).unwrap(), 2.0);
        assert!(renyi_entropy(&d, -0.1).is_err());
        let p = dist(&BooleanFunction::parity(3).unwrap());
        for a in [0.0, 0.5, 2.0, 3.5] {
            assert_eq!(renyi_entropy(&p, a).unwrap(), 0.0);
        }
    }

    #[test]
    fn binary_entropy_and_inverse() {
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert!((binary_entropy_inv(1.0).unwrap() - 0.5).abs() < 1e-12);
        assert!(binary_entropy_inv(0.0).unwrap() < 1e-12);
        for y in [0.1, 0.25, 0.5, 0.9] {
            let p = binary_entropy_inv(y).unwrap();
            assert!((binary_entropy(p).unwrap() - y).abs() < 1e-10);
        }
        assert!(binary_entropy(1.5).is_err());
        assert!(binary_entropy_inv(-0.1).is_err());
    }

    #[test]
    fn partition_examples() {
        let maj = dist(&BooleanFunction::majority(3).unwrap());
        let empty_only = entropy_partition(&maj, |s| s == 0);
        assert_eq!(empty_only.mass_in, 0.0);
        assert_eq!(empty_only.entropy_out, 2.0);
        assert_eq!(empty_only.reassemble(), 2.0);

        let low = entropy_partition(&maj, |s| s.count_ones() <= 1);
        assert_eq!(low.mass_in, 0.75);
        assert!((low.entropy_in - libm::log2(3.0)).abs() < 1e-12);
        assert_eq!(low.entropy_out, 0.0);
        assert!((low.binary_term - binary_entropy(0.75).unwrap()).abs() < 1e-15);
        assert!((low.reassemble() - 2.0).abs() < 1e-12);
    }
}
