//! Finitely generated free chain complexes over ℤ with exact arithmetic.

mod complex;
mod error;
mod homology;
mod matrix;
mod ops;
mod quotient;
pub mod smith;
pub mod tensor;

pub use complex::{validate_complex, ChainComplex, ChainMap, Degree};
pub use error::{ChainError, ComplexViolation};
pub use homology::{homology, homology_full, homology_group, AbelianGroup, Cyclic, GradedAbelianGroup, HomologyDegree};
pub use matrix::Matrix;
pub use ops::{
    cofibration_check, direct_sum, is_cofibration, is_quasi_iso, is_quasi_iso_full, is_quasi_iso_in_window,
    koszul_swap, mapping_cone, required_window, shift, shift_map, shift_tensor_iso, CofibrationFailure, Cone,
    QuasiIsoVerdict,
};
pub use quotient::{cokernel_complex, Quotient};
pub use tensor::{tensor, SumLayout, TensorLayout};
