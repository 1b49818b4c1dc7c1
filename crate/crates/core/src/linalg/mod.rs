//! Exact linear algebra over GF(p) and Q, and kernel searches built on it.

mod gfp;
mod rational;
mod search;

pub use gfp::{GfpMatrix, Rref};
pub use rational::{
    kernel_basis_rational, primitive_integer_vector, rank_rational, rank_rational_binary,
};
pub use search::{
    default_budget, is_kernel_vector_gfp, is_kernel_vector_rational, min_support_kernel_rational,
    min_weight_kernel_gfp, SearchMode, SearchReport, Witness, DEFAULT_BUDGET,
};
