//! Exact Fourier analysis of Boolean functions.
//!
//! The crate computes spectra with the fast Walsh–Hadamard transform over
//! exact dyadic rationals, derives spectral entropy, min-entropy, Rényi
//! entropies and total influence, and evaluates the known bounds relating
//! them as [`BoundCertificate`]s. It also models decision trees, DNF formulas
//! and prefix-free protocols over the spectral distribution.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod bounds;
pub mod certificate;
pub mod construct;
pub mod dnf;
pub mod dyadic;
pub mod entropy;
mod error;
pub mod function;
pub mod profile;
pub mod protocol;
pub mod spectrum;
pub mod tree;

pub use certificate::{BoundCertificate, TOLERANCE};
pub use dyadic::Dyadic;
pub use error::{Error, Result};
pub use function::{BooleanFunction, RealFunction, DENSE_LIMIT};
pub use profile::FunctionProfile;
pub use spectrum::{inverse_wht, wht, LevelWeights, SpectralDistribution, Spectrum};

/// Iterates the set bits of `mask`, lowest first.
pub fn bits(mut mask: usize) -> impl Iterator<Item = u32> {
    core::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let i = mask.trailing_zeros();
            mask &= mask - 1;
            Some(i)
        }
    })
}

/// Formats a subset mask 1-based, e.g. `{1,3}`.
pub fn subset_label(mask: usize) -> alloc::string::String {
    use core::fmt::Write;
    let mut s = alloc::string::String::from("{");
    for (k, i) in bits(mask).enumerate() {
        if k > 0 {
            s.push(',');
        }
        let _ = write!(s, "{}", i + 1);
    }
    s.push('}');
    s
}
