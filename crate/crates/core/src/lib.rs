//! Covering Khovanov homology over `R = Z[X, Y, Z^{±1}]/(X² = Y² = 1)`.
//!
//! Link diagrams are turned into cubes of resolutions in two ways: the
//! `sl2` pipeline builds a chronological Frobenius-algebra cube with a
//! solved sign assignment, and the `gl2` pipeline builds formal foam
//! polycomplexes and algebrizes them through a cup-foam basis. Both yield
//! homogeneous polycomplexes over `R` whose total complexes specialize to
//! even (`X = Y = Z = 1`) and odd (`X = Z = 1, Y = -1`) Khovanov homology.

pub mod corpus;
pub mod glcube;
pub mod homology;
pub mod linkdiag;
pub mod matrix;
pub mod polycomplex;
pub mod ring;
pub mod slcube;

pub use linkdiag::{parse_pd, PdCode, PdError};
pub use ring::{bil, RingElement, Specialization, UnitMonomial, Z2Degree};

/// Maps `f` over `items`, in parallel when the `parallel` feature is on.
pub fn par_map<T: Sync, U: Send>(items: &[T], f: impl Fn(&T) -> U + Sync + Send) -> Vec<U> {
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

/// Some item satisfying `pred`, searched in parallel when enabled.
pub fn par_find<T: Sync>(items: &[T], pred: impl Fn(&T) -> bool + Sync + Send) -> Option<&T> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().find_first(|x| pred(x))
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().find(|x| pred(x))
    }
}
