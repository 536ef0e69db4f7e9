//! Fixtures shared by the benchmarks.

use specdim::spectra::{decimate, goe_spectrum, rescale_to_unit_mean, unfold_semicircle};
use specdim::{renewal_spectrum, Parity, RngSeed, SpacingModel, Spectrum};

pub fn poisson_levels(n: usize, seed: u64) -> Spectrum {
    renewal_spectrum(&SpacingModel::poisson(1.0).unwrap(), n, RngSeed(seed)).unwrap()
}

pub fn goe_surmise_levels(n: usize, seed: u64) -> Spectrum {
    renewal_spectrum(&SpacingModel::goe(1.0).unwrap(), n, RngSeed(seed)).unwrap()
}

/// Unfolded, even-decimated and rescaled GOE matrix spectrum.
pub fn decimated_goe(n: usize, seed: u64) -> Spectrum {
    let unfolded = unfold_semicircle(&goe_spectrum(n, RngSeed(seed)).unwrap(), 0.05).unwrap();
    rescale_to_unit_mean(&decimate(&unfolded, Parity::Even).unwrap()).unwrap()
}
