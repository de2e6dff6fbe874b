use thiserror::Error;

use crate::numerics::NumericsError;
use crate::radial::BranchKind;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("boundary speeds violate v_a < c* < v_0 < q0: {0}")]
    Regime(String),
    #[error(
        "supersonic branch chokes before reaching r = a: k0 = {k0} is not below k_max(a) = {k_max_a}"
    )]
    Persistence { k0: f64, k_max_a: f64 },
    #[error("no {branch} speed at r = {r}: k = {k} is not below k_max(r) = {k_max}")]
    NoRoot {
        branch: BranchKind,
        r: f64,
        k: f64,
        k_max: f64,
    },
    #[error("H-curves do not cross on [a, R]: H_sup - H_sub is {g_a} at r = a and {g_r} at r = R")]
    NoCrossing { g_a: f64, g_r: f64 },
    #[error("internal inconsistency: {0}")]
    Internal(String),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
