//! Subspace null designs over GF(q): exact construction, verification and
//! minimum-weight search.
//!
//! A null design of strength `t` assigns coefficients in `Z_r` to subspaces of
//! GF(q)^n of dimension at least `t`, such that for every `t`-dimensional `y`
//! the coefficients on the superspaces of `y` sum to zero. For `k`-uniform
//! designs this is the kernel of the subspace Wilson matrix `W_{q;t,k}`.
//!
//! - [`gf`]: table-driven arithmetic in GF(p^s)
//! - [`grassmannian`]: canonical subspaces, enumeration, index maps
//! - [`incidence`]: Wilson matrices
//! - [`design`]: null designs, verification, explicit constructions
//! - [`linalg`]: rank and kernels over GF(p) and Q, kernel searches

pub mod design;
pub mod error;
pub mod gf;
pub mod grassmannian;
pub mod incidence;
pub mod linalg;

pub use design::{construct_lb_design, construct_uniform_design, Chain, NullDesign, Verdict};
pub use error::{Error, Result};
pub use gf::{FieldSpec, GfElement};
pub use grassmannian::{enumerate, gaussian_binomial, GrassmannIndex, Subspace};
pub use incidence::{BinaryMatrix, IncidenceMatrix};
pub use linalg::{GfpMatrix, SearchMode, SearchReport, Witness};
