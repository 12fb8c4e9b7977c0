//! Exact computation of Hilbert functions and graded Betti numbers of finite
//! point sets in projective space over prime fields, with predictions and
//! searches for subsets whose resolutions are as generic as their ambient set
//! allows.
//!
//! Everything is deterministic: the only randomness is a seeded ChaCha8
//! stream, and parallel work (behind the `parallel` feature) is split across
//! independent matrices, never inside one elimination.

pub mod configs;
pub mod counterexample;
pub mod error;
pub mod field;
pub mod koszul;
pub mod liaison;
pub mod points;
pub mod poly;
pub mod predictor;
pub mod search;

pub use error::{Error, Result};
pub use field::{FieldSpec, Matrix, DEFAULT_PRIME};
pub use koszul::{
    betti_window, graded_betti, koszul_differential, mu_rank, BettiTable, KoszulComplex,
    KoszulSlice,
};
pub use points::{random_points, HilbertTable, PointSet};
pub use poly::{MonomialBasis, PolyVec};

#[cfg(feature = "parallel")]
pub(crate) fn par_map<T, R, F>(items: Vec<T>, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    items.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn par_map<T, R, F>(items: Vec<T>, f: F) -> Vec<R>
where
    F: Fn(T) -> R,
{
    items.into_iter().map(f).collect()
}
