//! Named verification suites: each bundles the cross-checks of one module
//! into deterministic, seedable [`ResidualReport`] lists.

pub mod oracle;
pub mod suites;

pub use suites::{run_suite, Suite};
