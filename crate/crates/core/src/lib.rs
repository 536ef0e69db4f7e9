//! Local box-counting dimension of discrete spectra.
//!
//! For a level sequence with mean spacing `s̄`, the number of occupied boxes
//! of size `r` behaves like `L/r` at large scales and saturates at the level
//! count at small ones. The local dimension
//! `D_b(r) = −d ln N(r) / d ln r` interpolates between 0 and 1, and its shape
//! is fixed by the nearest-neighbour spacing distribution.
//!
//! - [`nnsd`]: spacing laws (Poisson, Wigner surmises, tabulated) and samplers.
//! - [`theory`]: gap probability, the spacing-law → `D_b` transform and its
//!   closed forms.
//! - [`spectra`]: spectra, generators, unfolding, decimation and level files.
//! - [`boxcount`]: box counting and local slopes of real spectra.

pub mod boxcount;
pub mod error;
pub mod nnsd;
pub mod quadrature;
pub mod special;
pub mod spectra;
pub mod stats;
pub mod theory;

pub use boxcount::{
    averaged_box_count, count_boxes, count_curve, empirical_dimension, empirical_gap_probability,
    local_slope_curve, BoxCountCurve, BoxCountPoint, MeshMode, SlopeConfig,
};
pub use error::{Error, Result};
pub use nnsd::{empirical_nnsd, Ensemble, RngSeed, SpacingKind, SpacingModel, SpacingTable};
pub use quadrature::QuadratureConfig;
pub use spectra::{
    decimate, goe_spectrum, ingest_levels, parse_levels, renewal_spectrum, rescale_to_unit_mean,
    unfold, unfold_semicircle, write_levels, Parity, Spectrum,
};
pub use theory::{
    closed_form, curve, dimension_transform, find_crossing, gap_probability, log_grid,
    CurveSource, DimensionCurve, DimensionPoint, Evaluation,
};
