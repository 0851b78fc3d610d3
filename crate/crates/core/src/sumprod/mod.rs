//! Partial sum-product machinery: grids `G ⊆ A × B`, partial sets,
//! multiplicative energy, the projective reduction to grids and the
//! refinement lemmas built on them.

mod bsg;
mod checks;
mod energy;
mod eps;
mod grid;
mod reduction;

pub use bsg::{
    build_refined_graph, dense_diff_refine, half_bsg, regularize_diff, select_popular_subset, DenseRefined,
    HalfBsg, PopularSubset, RefinedGraph, Regularized,
};
pub use checks::{check_partial_sumprod, check_rudnev, PartialSumProdReport, RudnevReport, PARTIAL_SUMPROD_EXPONENTS};
pub use energy::{mult_energy, mult_energy_with, EnergyMethod, EnergyReport};
pub use eps::Eps;
pub use grid::{difference_set, fe_set, full_set, partial_defined, partial_over, partial_set, GridInstance, Op};
pub use reduction::{projective_goodness, reduce_points, reduce_to_grid, ReductionBounds, ReductionOutput};
