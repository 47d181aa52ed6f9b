//! Walsh–Hadamard transform and the spectral objects derived from it.

use alloc::vec;
use alloc::vec::Vec;

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::function::{check_capacity, BooleanFunction, RealFunction};

/// Unnormalized in-place butterfly: `out[S] = Σ_m a[m] χ_S(m)`.
pub fn fwht_in_place<T>(a: &mut [T])
where
    T: Copy + core::ops::Add<Output = T> + core::ops::Sub<Output = T>,
{
    let len = a.len();
    debug_assert!(len.is_power_of_two());
    let mut h = 1;
    while h < len {
        for block in a.chunks_exact_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (x, y) in lo.iter_mut().zip(hi.iter_mut()) {
                let (u, v) = (*x, *y);
                *x = u + v;
                *y = u - v;
            }
        }
        h *= 2;
    }
}

/// Exact Fourier spectrum of a Boolean function: entry `S` holds
/// `2^n · f̂(S)`, an integer.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Spectrum {
    n: u32,
    coeffs: Vec<i64>,
}

/// Floating-point spectrum of a real-valued function.
#[derive(Clone, Debug, PartialEq)]
pub struct RealSpectrum {
    n: u32,
    coeffs: Vec<f64>,
}

/// Fourier transform of a Boolean function in `O(n 2^n)` integer operations.
pub fn wht(f: &BooleanFunction) -> Spectrum {
    let mut coeffs: Vec<i64> = f.table().iter().map(|&v| v as i64).collect();
    fwht_in_place(&mut coeffs);
    Spectrum { n: f.n(), coeffs }
}

/// Fourier transform of a real-valued function.
pub fn wht_real(f: &RealFunction) -> RealSpectrum {
    let mut coeffs = f.table().to_vec();
    fwht_in_place(&mut coeffs);
    let scale = libm::ldexp(1.0, -(f.n() as i32));
    coeffs.iter_mut().for_each(|c| *c *= scale);
    RealSpectrum { n: f.n(), coeffs }
}

/// Evaluates the multilinear polynomial of `s` at every input.
pub fn inverse_wht(s: &Spectrum) -> RealFunction {
    let mut values = s.coeffs.clone();
    fwht_in_place(&mut values);
    // Σ_S (c_S / 2^n) χ_S(m) = (butterfly of c)[m] / 2^n
    let scale = libm::ldexp(1.0, -(s.n as i32));
    let table = values.iter().map(|&v| v as f64 * scale).collect();
    RealFunction::new(s.n, table).expect("spectrum length is 2^n")
}

pub fn inverse_wht_real(s: &RealSpectrum) -> RealFunction {
    let mut values = s.coeffs.clone();
    fwht_in_place(&mut values);
    RealFunction::new(s.n, values).expect("spectrum length is 2^n")
}

impl Spectrum {
    /// Builds a spectrum from numerators over `2^n`.
    pub fn from_numerators(n: u32, coeffs: Vec<i64>) -> Result<Self> {
        check_capacity(n)?;
        let expected = 1usize << n;
        if coeffs.len() != expected {
            return Err(Error::TableLength {
                expected,
                got: coeffs.len(),
            });
        }
        Ok(Spectrum { n, coeffs })
    }

    pub fn zero(n: u32) -> Result<Self> {
        check_capacity(n)?;
        Ok(Spectrum {
            n,
            coeffs: vec![0; 1 << n],
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Numerators `2^n f̂(S)`, indexed by subset mask.
    pub fn numerators(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn numerator(&self, subset: usize) -> i64 {
        self.coeffs[subset]
    }

    pub fn coeff(&self, subset: usize) -> Dyadic {
        Dyadic::new(self.coeffs[subset] as i128, self.n)
    }

    pub fn coeff_f64(&self, subset: usize) -> f64 {
        libm::ldexp(self.coeffs[subset] as f64, -(self.n as i32))
    }

    /// Exact inverse when the spectrum belongs to a Boolean function.
    pub fn to_boolean(&self) -> Option<BooleanFunction> {
        let mut values = self.coeffs.clone();
        fwht_in_place(&mut values);
        let denom = 1i64 << self.n;
        let table: Option<Vec<i8>> = values
            .iter()
            .map(|&v| match v {
                v if v == denom => Some(1),
                v if v == -denom => Some(-1),
                _ => None,
            })
            .collect();
        table.and_then(|t| BooleanFunction::new(self.n, t).ok())
    }

    /// `Σ_S f̂(S)^2` as an exact dyadic.
    pub fn parseval_sum(&self) -> Dyadic {
        let sum: i128 = self.coeffs.iter().map(|&c| (c as i128) * (c as i128)).sum();
        Dyadic::new(sum, 2 * self.n)
    }

    /// `‖f̂‖₁` as an exact dyadic.
    pub fn l1_norm_exact(&self) -> Dyadic {
        let sum: i128 = self.coeffs.iter().map(|&c| (c as i128).abs()).sum();
        Dyadic::new(sum, self.n)
    }

    pub fn l1_norm(&self) -> f64 {
        self.l1_norm_exact().to_f64()
    }

    /// `|supp(f̂)|`.
    pub fn sparsity(&self) -> usize {
        self.coeffs.iter().filter(|&&c| c != 0).count()
    }

    /// `max{|S| : f̂(S) ≠ 0}`; zero for the zero spectrum.
    pub fn degree(&self) -> u32 {
        self.support().map(|s| s.count_ones()).max().unwrap_or(0)
    }

    /// Least `g` with `2^g f̂(S) ∈ ℤ` for every `S`.
    pub fn granularity(&self) -> u32 {
        self.support()
            .map(|s| self.coeff(s).exponent())
            .max()
            .unwrap_or(0)
    }

    /// Subsets with nonzero coefficient, in mask order.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(s, _)| s)
    }

    /// `f̂(∅)`.
    pub fn mean(&self) -> Dyadic {
        self.coeff(0)
    }

    /// `1 - f̂(∅)^2` (Boolean sources).
    pub fn variance(&self) -> Dyadic {
        Dyadic::ONE - self.mean().square()
    }

    pub fn distribution(&self) -> SpectralDistribution {
        let exact: Vec<u64> = self
            .coeffs
            .iter()
            .map(|&c| (c as i128 * c as i128) as u64)
            .collect();
        let scale = libm::ldexp(1.0, -2 * self.n as i32);
        let probs = exact.iter().map(|&p| p as f64 * scale).collect();
        SpectralDistribution {
            n: self.n,
            probs,
            exact: Some(exact),
        }
    }

    pub fn to_real(&self) -> RealSpectrum {
        RealSpectrum {
            n: self.n,
            coeffs: (0..self.len()).map(|s| self.coeff_f64(s)).collect(),
        }
    }
}

impl RealSpectrum {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn l1_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| libm::fabs(*c)).sum()
    }

    /// Squared coefficients as a distribution. Callers are expected to pass
    /// spectra with `‖f̂‖₂ = 1`; the masses are not renormalized.
    pub fn distribution(&self) -> SpectralDistribution {
        SpectralDistribution {
            n: self.n,
            probs: self.coeffs.iter().map(|c| c * c).collect(),
            exact: None,
        }
    }
}

/// The spectral distribution `S ↦ f̂(S)^2`.
///
/// For Boolean sources the exact masses are kept as numerators over `4^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralDistribution {
    n: u32,
    probs: Vec<f64>,
    exact: Option<Vec<u64>>,
}

impl SpectralDistribution {
    /// A distribution from arbitrary nonnegative masses indexed by mask.
    pub fn from_probs(n: u32, probs: Vec<f64>) -> Result<Self> {
        check_capacity(n)?;
        let expected = 1usize << n;
        if probs.len() != expected {
            return Err(Error::TableLength {
                expected,
                got: probs.len(),
            });
        }
        if probs.iter().any(|p| p.is_nan() || *p < 0.0) {
            return Err(Error::Domain("masses must be nonnegative".into()));
        }
        Ok(SpectralDistribution {
            n,
            probs,
            exact: None,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, subset: usize) -> f64 {
        self.probs[subset]
    }

    /// Numerators over `4^n`, when the source was Boolean.
    pub fn exact_numerators(&self) -> Option<&[u64]> {
        self.exact.as_deref()
    }

    pub fn exact_prob(&self, subset: usize) -> Option<Dyadic> {
        self.exact
            .as_ref()
            .map(|e| Dyadic::new(e[subset] as i128, 2 * self.n))
    }

    pub fn total_mass(&self) -> f64 {
        crate::entropy::neumaier_sum(self.probs.iter().copied())
    }

    pub fn exact_total_mass(&self) -> Option<Dyadic> {
        self.exact.as_ref().map(|e| {
            let s: i128 = e.iter().map(|&p| p as i128).sum();
            Dyadic::new(s, 2 * self.n)
        })
    }

    /// `(mask, mass)` pairs with positive mass.
    pub fn atoms(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.probs
            .iter()
            .copied()
            .enumerate()
            .filter(|(_, p)| *p > 0.0)
    }

    /// `I[f] = Σ_S f̂(S)^2 |S|`.
    pub fn total_influence(&self) -> f64 {
        match self.exact_total_influence() {
            Some(d) => d.to_f64(),
            None => {
                crate::entropy::neumaier_sum(self.atoms().map(|(s, p)| p * s.count_ones() as f64))
            }
        }
    }

    pub fn exact_total_influence(&self) -> Option<Dyadic> {
        self.exact.as_ref().map(|e| {
            let s: i128 = e
                .iter()
                .enumerate()
                .map(|(s, &p)| p as i128 * s.count_ones() as i128)
                .sum();
            Dyadic::new(s, 2 * self.n)
        })
    }

    pub fn level_weights(&self) -> LevelWeights {
        let levels = self.n as usize + 1;
        let mut approx = vec![0.0; levels];
        for (s, p) in self.atoms() {
            approx[s.count_ones() as usize] += p;
        }
        let exact = self.exact.as_ref().map(|e| {
            let mut acc = vec![0i128; levels];
            for (s, &p) in e.iter().enumerate() {
                acc[s.count_ones() as usize] += p as i128;
            }
            acc.into_iter()
                .map(|a| Dyadic::new(a, 2 * self.n))
                .collect::<Vec<_>>()
        });
        if let Some(ex) = &exact {
            for (a, d) in approx.iter_mut().zip(ex) {
                *a = d.to_f64();
            }
        }
        LevelWeights {
            weights: approx,
            exact,
        }
    }

    /// Largest mass and a subset attaining it (smallest mask on ties).
    pub fn max_atom(&self) -> Option<(usize, f64)> {
        self.atoms()
            .fold(None, |best: Option<(usize, f64)>, (s, p)| match best {
                Some((_, bp)) if bp >= p => best,
                _ => Some((s, p)),
            })
    }
}

/// Spectral weight per level `W^0 .. W^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct LevelWeights {
    weights: Vec<f64>,
    exact: Option<Vec<Dyadic>>,
}

impl LevelWeights {
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn exact(&self) -> Option<&[Dyadic]> {
        self.exact.as_deref()
    }

    pub fn level(&self, k: usize) -> f64 {
        self.weights.get(k).copied().unwrap_or(0.0)
    }

    /// `W^{≤t}`.
    pub fn at_most(&self, t: usize) -> f64 {
        match &self.exact {
            Some(ex) => ex.iter().take(t + 1).copied().sum::<Dyadic>().to_f64(),
            None => self.weights.iter().take(t + 1).sum(),
        }
    }

    /// `W^{>t}`.
    pub fn above(&self, t: usize) -> f64 {
        match &self.exact {
            Some(ex) => ex.iter().skip(t + 1).copied().sum::<Dyadic>().to_f64(),
            None => self.weights.iter().skip(t + 1).sum(),
        }
    }

    /// `Σ_k k W^k`.
    pub fn mean_level(&self) -> f64 {
        match &self.exact {
            Some(ex) => ex
                .iter()
                .enumerate()
                .map(|(k, w)| *w * Dyadic::from_int(k as i128))
                .sum::<Dyadic>()
                .to_f64(),
            None => self
                .weights
                .iter()
                .enumerate()
                .map(|(k, w)| k as f64 * w)
                .sum(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Definition-level transform, independent of the butterfly.
    fn brute_coeff(f: &BooleanFunction, s: usize) -> Dyadic {
        let sum: i128 = (0..f.len())
            .map(|m| f.value(m) as i128 * crate::function::character(s, m) as i128)
            .sum();
        Dyadic::new(sum, f.n())
    }

    #[test]
    fn parity_is_a_single_character() {
        let s = wht(&BooleanFunction::parity(3).unwrap());
        for m in 0..8 {
            let expect = if m == 7 { Dyadic::ONE } else { Dyadic::ZERO };
            assert_eq!(s.coeff(m), expect);
        }
    }

    #[test]
    fn constant_spectrum() {
        let s = wht(&BooleanFunction::constant(2, 1).unwrap());
        assert_eq!(s.coeff(0), Dyadic::ONE);
        assert_eq!(s.sparsity(), 1);
    }

    #[test]
    fn majority_matches_definition() {
        let f = BooleanFunction::majority(3).unwrap();
        let s = wht(&f);
        let half = Dyadic::new(1, 1);
        for m in 0..8usize {
            assert_eq!(s.coeff(m), brute_coeff(&f, m));
        }
        // -1 codes True, so MAJ3 = (x1 + x2 + x3 - x1x2x3)/2 in ±1 arithmetic.
        assert_eq!(s.coeff(0b001), half);
        assert_eq!(s.coeff(0b010), half);
        assert_eq!(s.coeff(0b100), half);
        assert_eq!(s.coeff(0b111), -half);
        assert_eq!(s.sparsity(), 4);
    }

    #[test]
    fn norms_and_granularity() {
        let p = wht(&BooleanFunction::parity(4).unwrap());
        assert_eq!(
            (p.l1_norm(), p.sparsity(), p.degree(), p.granularity()),
            (1.0, 1, 4, 0)
        );
        let m = wht(&BooleanFunction::majority(3).unwrap());
        assert_eq!(
            (m.l1_norm(), m.sparsity(), m.degree(), m.granularity()),
            (2.0, 4, 3, 1)
        );
    }

    #[test]
    fn inverse_round_trips() {
        let f = BooleanFunction::majority(3).unwrap();
        let s = wht(&f);
        assert_eq!(inverse_wht(&s).to_boolean(0.0), Some(f.clone()));
        assert_eq!(s.to_boolean(), Some(f));
        let zero = Spectrum::zero(3).unwrap();
        assert!(inverse_wht(&zero).table().iter().all(|&v| v == 0.0));
        assert_eq!(zero.to_boolean(), None);
    }

    #[test]
    fn level_weights_of_majority() {
        let lw = wht(&BooleanFunction::majority(3).unwrap())
            .distribution()
            .level_weights();
        let ex = lw.exact().unwrap();
        assert_eq!(ex[0], Dyadic::ZERO);
        assert_eq!(ex[1], Dyadic::new(3, 2));
        assert_eq!(ex[2], Dyadic::ZERO);
        assert_eq!(ex[3], Dyadic::new(1, 2));
        assert_eq!(lw.mean_level(), 1.5);
        assert_eq!(lw.at_most(1), 0.75);
        assert_eq!(lw.above(1), 0.25);
    }

    #[test]
    fn real_spectrum_of_normalized_sum() {
        let f = RealFunction::normalized_sum(4).unwrap();
        let s = wht_real(&f);
        for (m, c) in s.coeffs().iter().enumerate() {
            let expect = if m.count_ones() == 1 { 0.5 } else { 0.0 };
            assert!((c - expect).abs() < 1e-12);
        }
        let back = inverse_wht_real(&s);
        for (a, b) in back.table().iter().zip(f.table()) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
