use crate::dyadic::Dyadic;
use crate::entropy::{entropy, min_entropy};
use crate::function::BooleanFunction;
use crate::spectrum::{wht, SpectralDistribution, Spectrum};

/// Spectral quantities of one Boolean function, computed once.
#[derive(Clone, Debug)]
pub struct FunctionProfile {
    pub n: u32,
    pub spectrum: Spectrum,
    pub distribution: SpectralDistribution,
    pub entropy: f64,
    pub min_entropy: f64,
    pub influence: Dyadic,
    pub mean: Dyadic,
    pub variance: Dyadic,
    /// `min(Pr[f = 1], Pr[f = -1])`.
    pub minority: Dyadic,
    pub l1: Dyadic,
}

impl FunctionProfile {
    pub fn new(f: &BooleanFunction) -> Self {
        let spectrum = wht(f);
        Self::from_spectrum(spectrum)
    }

    /// Profile of the Boolean function whose spectrum is `spectrum`.
    pub fn from_spectrum(spectrum: Spectrum) -> Self {
        let distribution = spectrum.distribution();
        let n = spectrum.n();
        let mean = spectrum.mean();
        // Pr[f = -1] = (1 - E f) / 2
        let p_true = (Dyadic::ONE - mean).scale_pow2(-1);
        let p_false = Dyadic::ONE - p_true;
        FunctionProfile {
            n,
            entropy: entropy(&distribution),
            min_entropy: min_entropy(&distribution).expect("Boolean spectra have mass one"),
            influence: distribution
                .exact_total_influence()
                .expect("Boolean spectra are exact"),
            mean,
            variance: Dyadic::ONE - mean.square(),
            minority: p_true.min(p_false),
            l1: spectrum.l1_norm_exact(),
            spectrum,
            distribution,
        }
    }

    pub fn influence_f64(&self) -> f64 {
        self.influence.to_f64()
    }

    pub fn variance_f64(&self) -> f64 {
        self.variance.to_f64()
    }

    pub fn l1_f64(&self) -> f64 {
        self.l1.to_f64()
    }

    /// `H / I`, or 0 for constants.
    pub fn fei_ratio(&self) -> f64 {
        ratio(self.entropy, self.influence_f64())
    }

    /// `H_∞ / I`, or 0 for constants.
    pub fn fmei_ratio(&self) -> f64 {
        ratio(self.min_entropy, self.influence_f64())
    }
}

fn ratio(num: f64, influence: f64) -> f64 {
    if influence > 0.0 {
        num / influence
    } else {
        0.0
    }
}
