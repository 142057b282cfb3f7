use num_bigint::BigInt;
use thiserror::Error;

use super::complex::Degree;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChainError {
    #[error("degree {degree}: expected a {}x{} matrix, found {}x{}", expected.0, expected.1, found.0, found.1)]
    Shape { degree: Degree, expected: (usize, usize), found: (usize, usize) },
    #[error("malformed complex: {0}")]
    Malformed(String),
    #[error("map does not commute with the differentials at degree {degree}")]
    NotChainMap { degree: Degree },
    #[error("window [{}, {}] does not cover the required range [{}, {}]", window.0, window.1, required.0, required.1)]
    UnsoundWindow { window: (Degree, Degree), required: (Degree, Degree) },
    #[error("cokernel has torsion {torsion:?} in degree {degree}; no free presentation")]
    TorsionCokernel { degree: Degree, torsion: Vec<BigInt> },
    #[error("complex has nonzero rank in negative degree {degree}")]
    NegativeDegree { degree: Degree },
}

/// First failing invariant of a chain complex.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexViolation {
    #[error("differential of degree {degree} has shape {}x{}, expected {}x{}", found.0, found.1, expected.0, expected.1)]
    Shape { degree: Degree, expected: (usize, usize), found: (usize, usize) },
    #[error("d∘d ≠ 0 starting in degree {degree}")]
    DSquared { degree: Degree },
}
