//! Exact symbolic machinery for Darboux integrability of polynomial vector
//! fields in ℝⁿ and on n-dimensional ellipsoids: invariant hyperplanes,
//! meridians and parallels, cofactors, extactic polynomials, multiplicities,
//! Darboux first integrals, and the associated counting bounds. All
//! arithmetic is exact (Gaussian rationals, optionally fractions of
//! parameter polynomials); no floating point anywhere.

pub mod catalog;
pub mod coeff;
pub mod context;
pub mod darboux;
pub mod det;
pub mod error;
pub mod gaussian;
pub mod invariant;
pub mod linalg;
pub mod parser;
pub mod poly;
pub mod surface;
pub mod sysfile;
pub mod unipoly;
pub mod vector_field;

pub use coeff::{Coeff, ParamPoly};
pub use context::Context;
pub use error::{Error, Result};
pub use gaussian::GaussInt;
pub use poly::{Monomial, MultiPoly};
pub use surface::{Ellipsoid, NormalForm, Tangency};
pub use vector_field::{DegreeVector, OnSurfaceCertificate, VectorField};
