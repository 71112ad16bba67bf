use std::fmt::Debug;

use gkc_core::circuit::CircuitError;
use gkc_core::classical::ClassicalError;
use gkc_core::grover::GroverError;
use gkc_core::route::RouteError;
use gkc_core::sim::SimError;
use gkc_core::GraphError;
use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Resource(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Resource(_) => EXIT_RESOURCE,
            CliError::Internal(_) => EXIT_INTERNAL,
        }
    }
}

/// `Variant: message`, with the variant name taken from the Debug form.
fn tagged<E: Debug + std::fmt::Display>(e: &E) -> String {
    let debug = format!("{e:?}");
    let kind = debug.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("");
    format!("{kind}: {e}")
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        CliError::Input(tagged(&e))
    }
}

impl From<RouteError> for CliError {
    fn from(e: RouteError) -> Self {
        match e {
            RouteError::TooFewPhysicalQubits { .. } => CliError::Resource(tagged(&e)),
            RouteError::Uncoupled { .. } => CliError::Internal(tagged(&e)),
            _ => CliError::Input(tagged(&e)),
        }
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        match e {
            SimError::TooManyQubits { .. } => CliError::Resource(tagged(&e)),
            _ => CliError::Internal(tagged(&e)),
        }
    }
}

impl From<ClassicalError> for CliError {
    fn from(e: ClassicalError) -> Self {
        CliError::Resource(tagged(&e))
    }
}

impl From<CircuitError> for CliError {
    fn from(e: CircuitError) -> Self {
        CliError::Internal(tagged(&e))
    }
}

impl From<GroverError> for CliError {
    fn from(e: GroverError) -> Self {
        match e {
            GroverError::Classical(inner) => inner.into(),
            other => CliError::Internal(tagged(&other)),
        }
    }
}
