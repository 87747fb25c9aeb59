//! Dense complex linear algebra: matrices, spectral norms, linear solves and
//! seeded sampling of unitaries and contractions.

mod matrix;
mod norm;
mod random;
mod solve;

pub use matrix::ComplexMatrix;
pub use norm::{spectral_norm, sup_norm_on_circle};
pub use random::{
    contraction_with_diagonal, random_contraction, random_contraction_with_spectrum,
    random_unitary, RngStream, SampledContraction,
};
pub use solve::{inverse, solve};
