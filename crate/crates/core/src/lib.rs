#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod error;
pub mod linalg;
pub mod oscillator;
pub mod physics;
pub mod spectral;
pub mod verify;
pub mod waveform;

pub use error::{Error, Result};
pub use num_complex::{self, Complex64};

/// Snippets of the guide in `book/` run as doc-tests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/model.md")]
    mod model {}
    #[doc = include_str!("../../../book/src/ladder.md")]
    mod ladder {}
    #[doc = include_str!("../../../book/src/spectrum.md")]
    mod spectrum {}
    #[doc = include_str!("../../../book/src/waveforms.md")]
    mod waveforms {}
    #[doc = include_str!("../../../book/src/numerical-range.md")]
    mod numerical_range {}
    #[doc = include_str!("../../../book/src/pseudospectra.md")]
    mod pseudospectra {}
    #[doc = include_str!("../../../book/src/dynamics.md")]
    mod dynamics {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
}
