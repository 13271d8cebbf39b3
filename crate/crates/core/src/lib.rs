//! Numerical engine for genus-one WDVV prepotentials on Hurwitz spaces.
//!
//! The crate evaluates the flat-coordinate prepotentials attached to the
//! normalized holomorphic differential on a torus covering of the sphere,
//! together with everything they are built from: Jacobi/Weierstrass special
//! functions, Eisenstein series, partial ordinary Bell polynomials,
//! Landau-Ginzburg superpotentials and their Laurent data, and the
//! q-deformed counterparts of all of the above.
//!
//! Every closed-form expression ships with an independent numerical route
//! (lattice sums, contour residues, cycle quadrature, Cauchy-contour
//! derivatives); the [`verify`] module bundles these cross-checks into
//! named suites producing [`report::ResidualReport`] records.

pub mod bell;
pub mod config;
pub mod deriv;
pub mod error;
pub mod hurwitz;
pub mod identities;
pub mod prepotential;
pub mod qdeform;
pub mod report;
pub mod special;
pub mod util;
pub mod verify;

pub use config::EvalConfig;
pub use error::{Error, Result};
pub use special::Modulus;

/// The universal value type: a double-precision complex number.
pub type C64 = num_complex::Complex64;

/// Imaginary unit.
pub const I: C64 = C64::new(0.0, 1.0);

/// Convenience constructor.
#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}
