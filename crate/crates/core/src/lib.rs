//! Collared tiles, cell complexes and tiling-space cohomology for a
//! combinatorial substitution on pentagons. See the guide under `book/`.

pub mod apcomplex;
pub mod cells;
pub mod collaring;
pub mod dataset;
pub mod enumeration;
pub mod error;
pub mod forcing;
pub mod homology;
pub mod invlimit;
pub mod matrix;
pub mod symbolic1d;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/cells.md")]
    mod cells {}
    #[doc = include_str!("../../../book/src/dataset.md")]
    mod dataset {}
    #[doc = include_str!("../../../book/src/enumeration.md")]
    mod enumeration {}
    #[doc = include_str!("../../../book/src/collaring.md")]
    mod collaring {}
    #[doc = include_str!("../../../book/src/forcing.md")]
    mod forcing {}
    #[doc = include_str!("../../../book/src/complex.md")]
    mod complex {}
    #[doc = include_str!("../../../book/src/homology.md")]
    mod homology {}
    #[doc = include_str!("../../../book/src/symbolic1d.md")]
    mod symbolic1d {}
    #[doc = include_str!("../../../book/src/invlimit.md")]
    mod invlimit {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
