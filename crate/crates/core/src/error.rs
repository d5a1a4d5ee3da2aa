use thiserror::Error;

use crate::bandset::BandSetError;
use crate::hill::HillError;
use crate::ltsums::LtError;
use crate::moebius::MoebiusError;
use crate::operator::OperatorError;
use crate::schatten::SchattenError;

/// What went wrong, coarsely; decides the process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Config,
    Hypothesis,
    Numerical,
}

impl ErrorClass {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorClass::Config => 2,
            ErrorClass::Hypothesis => 3,
            ErrorClass::Numerical => 4,
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("config error at `{path}`: {message}")]
    Config { path: String, message: String },
    #[error("cannot write `{path}`: {message}")]
    Output { path: String, message: String },
    #[error("bandset: {0}")]
    Bands(#[from] BandSetError),
    #[error("moebius: {0}")]
    Moebius(#[from] MoebiusError),
    #[error("hill: {0}")]
    Hill(#[from] HillError),
    #[error("operator: {0}")]
    Operator(#[from] OperatorError),
    #[error("schatten: {0}")]
    Schatten(#[from] SchattenError),
    #[error("ltsums: {0}")]
    Lt(#[from] LtError),
}

impl Error {
    pub fn config(path: impl Into<String>, message: impl std::fmt::Display) -> Self {
        Error::Config {
            path: path.into(),
            message: message.to_string(),
        }
    }

    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Config { .. } | Error::Output { .. } => ErrorClass::Config,
            Error::Bands(e) => bands_class(e),
            Error::Moebius(e) => moebius_class(e),
            Error::Hill(e) => hill_class(e),
            Error::Operator(e) => operator_class(e),
            Error::Schatten(e) => schatten_class(e),
            Error::Lt(e) => lt_class(e),
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.class().exit_code()
    }
}

fn bands_class(e: &BandSetError) -> ErrorClass {
    match e {
        BandSetError::NegativeBottom(_) => ErrorClass::Hypothesis,
        _ => ErrorClass::Config,
    }
}

fn moebius_class(e: &MoebiusError) -> ErrorClass {
    match e {
        MoebiusError::OmegaNotBelowSpectrum { .. } | MoebiusError::OmegaPositive(_) => {
            ErrorClass::Hypothesis
        }
        MoebiusError::Bands(b) => bands_class(b),
        _ => ErrorClass::Config,
    }
}

fn hill_class(e: &HillError) -> ErrorClass {
    match e {
        HillError::NegativePotential { .. } => ErrorClass::Hypothesis,
        HillError::UnresolvedEdge { .. } | HillError::NonFinitePotential(_) => ErrorClass::Numerical,
        HillError::Bands(b) => bands_class(b),
        _ => ErrorClass::Config,
    }
}

fn operator_class(e: &OperatorError) -> ErrorClass {
    match e {
        OperatorError::NegativeBackground { .. } => ErrorClass::Hypothesis,
        OperatorError::NoConvergence { .. } | OperatorError::NearSingular { .. } => {
            ErrorClass::Numerical
        }
        OperatorError::Bands(b) => bands_class(b),
        _ => ErrorClass::Config,
    }
}

fn schatten_class(e: &SchattenError) -> ErrorClass {
    match e {
        SchattenError::OmegaOrder { .. } => ErrorClass::Hypothesis,
        SchattenError::Svd { .. } => ErrorClass::Numerical,
        SchattenError::Operator(o) => operator_class(o),
        _ => ErrorClass::Config,
    }
}

fn lt_class(e: &LtError) -> ErrorClass {
    match e {
        LtError::NotAccretive { .. } | LtError::OmegaOrder { .. } => ErrorClass::Hypothesis,
        LtError::Schatten(s) => schatten_class(s),
        LtError::Operator(o) => operator_class(o),
        LtError::Moebius(m) => moebius_class(m),
        LtError::Bands(b) => bands_class(b),
        _ => ErrorClass::Config,
    }
}
