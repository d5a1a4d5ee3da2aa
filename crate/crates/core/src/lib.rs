//! Numerical toolkit for Lieb–Thirring type inequalities for complex
//! perturbations of a periodic Schrödinger operator on the line.

pub mod bandset;
pub mod cli;
pub mod error;
pub mod hill;
pub mod ltsums;
pub mod model;
pub mod moebius;
pub mod operator;
pub mod schatten;

pub use bandset::{BandSet, BandSetError, Location};
pub use error::{Error, ErrorClass};
pub use hill::{HillError, Monodromy, PeriodicPotential};
pub use ltsums::{LtContext, LtError, LtReport, Theorem};
pub use moebius::{DistortionBound, MoebiusError, MoebiusMap};
pub use operator::{Boundary, DiscretizedOperator, OperatorError, SpectrumReport};
pub use schatten::{NormBundle, SchattenError};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/band-sets.md")]
    mod band_sets {}
    #[doc = include_str!("../../../book/src/moebius.md")]
    mod moebius {}
    #[doc = include_str!("../../../book/src/hill.md")]
    mod hill {}
    #[doc = include_str!("../../../book/src/operator.md")]
    mod operator {}
    #[doc = include_str!("../../../book/src/schatten.md")]
    mod schatten {}
    #[doc = include_str!("../../../book/src/lieb-thirring.md")]
    mod lieb_thirring {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
