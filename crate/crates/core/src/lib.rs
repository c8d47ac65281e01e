//! Pareto-efficient weight vectors for reciprocal (pairwise comparison)
//! matrices.
//!
//! * [`matrix`]: reciprocal matrices, monomial similarities, block detection.
//! * [`efficiency`]: the digraph efficiency test and dominance certificates.
//! * [`blockpert`]: closed-form characterizations for block perturbed
//!   consistent matrices and generators of efficient vectors.
//! * [`perron`]: Perron eigenpairs and their efficiency.
//! * [`oracle`]: brute-force dominance search used for cross-validation.
//! * [`io`]: CSV/JSON input with exact or float backends.
//! * [`reproduce`]: bundled fixtures with known verdicts.
//!
//! ```
//! use pcm_core::{is_efficient, Dominance, Rational, ReciprocalMatrix, Scalar, WeightVector};
//!
//! # fn main() -> pcm_core::Result<()> {
//! let a = ReciprocalMatrix::<Rational>::from_upper(
//!     3,
//!     &[Rational::from_ratio(2, 1), Rational::from_ratio(3, 1), Rational::one()],
//! )?;
//! let w = WeightVector::from_ints(&[3, 2, 1])?;
//! let verdict = is_efficient(&a, &w)?;
//! assert!(!verdict.is_efficient());
//! let d = verdict.dominator().unwrap();
//! assert_eq!(pcm_core::dominance_compare(&a, &w, d)?, Dominance::VDominates);
//! # Ok(())
//! # }
//! ```

pub mod blockpert;
pub mod digraph;
pub mod efficiency;
pub mod error;
pub mod io;
pub mod matrix;
pub mod oracle;
pub mod perron;
pub mod reproduce;
pub mod sampling;
pub mod scalar;

pub use blockpert::{
    ConstantBlockMatrix, GeneratedVector, ThreeBlockMatrix, ThreeBlockMembership, TwoBlockMatrix,
};
pub use digraph::{ComparisonDigraph, SccDecomposition};
pub use efficiency::{
    build_digraph, construct_dominating_vector, dominance_compare, equal_tail_reduce, extend_one,
    extension_interval, is_efficient, subvector_efficiency_profile, Certificate, Dominance,
    EfficiencyVerdict, ExtensionInterval,
};
pub use error::{PcmError, Result};
pub use matrix::{
    detect_minimal_block, is_block_perturbation, BlockPerturbedForm, DetectedBlock,
    MonomialSimilarity, ReciprocalMatrix, WeightVector,
};
pub use oracle::{check_pair, grid_dominator_search, GridSpec};
pub use perron::{perron, PerronResult, SufficientCondition, ThreeBlockPerronConditions};
pub use scalar::{Rational, Scalar};
