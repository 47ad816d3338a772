//! Analytic functions on a strip around the torus, represented as
//! trigonometric polynomials.

mod contour;
mod measure;
mod trigpoly;

pub use contour::{
    count_zeros, locate_zeros, strip_norm, taylor_coeff, taylor_coeff_direct, taylor_scale, AnnulusContour,
    ZeroCluster, CONTOUR_GUARD, MIN_SAMPLES_PER_CIRCLE,
};
pub use measure::{
    default_eps_grid, fit_transversality, geometric, mean_log, polya_check, sublevel_measure, torus_zeros,
    zeros_near_torus, PolyaCheck, TransversalityProfile, SUBLEVEL_GRID_LOG2, TORUS_ZERO_TOL,
};
pub use trigpoly::{StripDomain, TrigPoly};

pub(crate) use measure::kahan_sum;
