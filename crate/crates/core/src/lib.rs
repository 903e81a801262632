//! Arbitrary-precision refinement of isolated complex roots of a univariate polynomial.
//!
//! Given a disc that is isolated from the other roots by a ratio `(1+η)²`, the
//! root inside is estimated from contour power sums evaluated with three DFTs,
//! which shrinks it into a `5d²`-isolated disc; Newton's iteration then
//! converges quadratically from the new center. All `d` roots can be refined
//! together by replacing the per-disc shifts with fast multipoint evaluation,
//! and a cluster of roots in a disc can be returned as a factor of `p`.
//!
//! The runnable programs under `examples/` walk through each capability.

pub mod boost;
pub mod cli;
pub mod dft;
pub mod driver;
pub mod error;
pub mod multipoint;
pub mod newton;
pub mod numctx;
pub mod poly;
pub mod powersum;

pub use boost::{boost_isolation, BoostResult};
pub use driver::{extract_factor, refine_all, refine_root, AllRootsPlan, Factor};
pub use error::Error;
pub use newton::{newton_refine, RefinementRequest, RefinementResult};
pub use numctx::{root_of_unity, working_precision_for, Complex, PrecisionContext, Real};
pub use poly::{FoldedPolynomial, Polynomial};
pub use powersum::{IsolatedDisc, PowerSumEstimate};
