//! Exact arithmetic in truncated multigraded Chow rings and in the
//! line-bundle part of K-theory, plus the characteristic classes that feed
//! Hirzebruch–Riemann–Roch.

mod kclass;
mod ring;
mod series;

pub use kclass::{KClass, Symbol};
pub use ring::{to_integer, ChowClass, ChowPresentation, Exponent, Generator, GeneratorKind, Terms};
pub use series::Series;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChowError {
    #[error("a product of projective spaces needs at least one factor")]
    EmptyBase,
    #[error("projective factors must have dimension at least 1")]
    ZeroDimensionalFactor,
    #[error("cannot projectivize a rank-0 bundle")]
    RankZero,
    #[error("degree vector has {found} entries, expected {expected}")]
    Arity { expected: usize, found: usize },
    #[error("classes live in different rings")]
    RingMismatch,
    #[error("exterior power of negative order {0}")]
    NegativeExteriorPower(i64),
}
