//! Exact workbench for finite inverse semigroups with zero: spectra of
//! idempotent semilattices, actions on finite spaces, groupoids of germs,
//! and numeric verification of groupoid amenability certificates.

pub mod action;
pub mod cert;
pub mod germ;
pub mod groupoid;
pub mod partial;
pub mod rho;
pub mod sample;
pub mod semigroup;
pub mod spectrum;

pub use action::Action;
pub use cert::{Certificate, CheckReport, Orientation};
pub use germ::GermGroupoid;
pub use groupoid::FiniteGroupoid;
pub use partial::PartialBijection;
pub use semigroup::InverseSemigroup;
pub use spectrum::{Filter, Spectrum};
