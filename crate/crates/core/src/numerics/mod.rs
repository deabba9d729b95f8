//! Dense complex linear algebra at desk scale (`n ≤ 32`).

pub mod lu;
pub mod poly;
pub mod qr;
pub mod schur;
pub mod spectral;

pub use lu::{condition_estimate, inverse, solve, Lu};
pub use poly::{eval_poly, hermite_interpolant, HermiteNode, NewtonPoly, Polynomial};
pub use qr::{nullspace, numerical_rank};
pub use schur::{eigenvalues, schur, Schur};
pub use spectral::{cluster_spectrum, primary_decomposition, SpectralData};
