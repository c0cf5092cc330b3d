//! Weighted shift operators on Köthe sequence spaces: orbit norms, expansivity
//! certificates, and an exact reconstruction of a chaotic, average expansive weight.

pub mod algebra;
pub mod chaos;
pub mod criteria;
pub mod error;
pub mod expr;
pub mod numerics;
pub mod shifts;
pub mod spaces;
pub mod synthesis;

pub use error::{Error, Result};
pub use numerics::{Exact, LogMagnitude, Magnitude};

/// Order-preserving map, parallel when the `parallel` feature is on.
pub(crate) fn par_map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}
