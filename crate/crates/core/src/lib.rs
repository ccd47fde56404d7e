//! Exact (max,+)-convolution kernels and knapsack solvers.
//!
//! The crate is organized around one idea: a quadratic-time oracle
//! (`naive_conv` and friends) defines the truth, and every fast kernel
//! is an exact, differentially-testable implementation of the same
//! contract under extra structure:
//!
//! * [`bounded`] — values in `[0, e_max]`: reduction to polynomial
//!   multiplication over packed big integers.
//! * [`distorted`] — all cross sums within `e_max` of the product:
//!   affine compression into a bounded window.
//! * [`prediction`] — a monotone interval certificate: dyadic blocking
//!   plus the distorted kernel.
//! * [`knapsack_conv`] / [`power`] — certificates built from greedy
//!   fractional relaxations and from prefix maxima of adjacent powers.
//! * [`solvers`] — the knapsack solver family on top of the kernels.
//! * [`treesep`] — tree separability through (min,+) merges, plus the
//!   gadget coupling it to convolution upper-bound queries.

pub mod bigint;
pub mod bounded;
pub mod distorted;
pub mod error;
pub mod knapsack;
pub mod knapsack_conv;
pub mod maxplus;
pub mod power;
pub mod prediction;
pub mod rng;
pub mod solvers;
pub mod treesep;

pub use bigint::MulBackend;
pub use bounded::{approx_conv, bounded_range_conv, bounded_range_conv_with, ScaledVec};
pub use distorted::{check_distortion, distorted_conv, distorted_square_conv};
pub use error::{Error, Result};
pub use knapsack::{Item, KnapsackInstance, Multiplicity, SolutionProfile};
pub use knapsack_conv::{
    build_uncertain_intervals, fractional_conv_profile, greedy_fractional_profile, knapsack_conv,
    FracConvProfile, FracProfile, Rat,
};
pub use maxplus::{naive_conv, naive_min_conv, naive_power, ExtVal, MaxPlusVec};
pub use power::{fast_power, fast_power_step, power_drop, PowerPair};
pub use prediction::{
    approx_from_uncertain, conv_via_prediction, conv_via_prediction_with_stats, projection,
    projection_diff, validate_uncertain, PredictionStats, UncertainSolution,
};
pub use rng::SplitMix64;
pub use solvers::{
    bounded_range_knapsack, bounded_solution_knapsack, classic_dp, knapsack_given_mult,
    knapsack_infinite_mult, knapsack_small_sizes, knapsack_via_conv, unbounded_small_sizes,
    unbounded_small_sizes_with, unbounded_via_power, Expansion, SolverConfig, WindowedProfile,
};
pub use treesep::{
    bounded_separability, brute_separability, centroid_partition, crossing_edges, maxcov_gadget,
    maxcov_upperbound, separability_bound, separability_profile, EdgeWeight, SepStrategy,
    WeightedTree,
};
