//! Period-p complex sequence families over prime fields.
//!
//! The crate generates the sequence families built from multiplicative and
//! additive characters of F_p (and their realization through the Weil
//! representation of SL2(F_p)), computes two-dimensional ambiguity surfaces
//! and Fourier spectra, and verifies the families' correlation and spectrum
//! bounds by exhaustive or seeded-sampled computation at desk-scale primes.
//!
//! Modules:
//! - [`field`]: exact F_p arithmetic with discrete-log tables
//! - [`seq`]: sequences, exact cyclotomic forms, and the unitary operators
//! - [`families`]: family generators and enumeration orders
//! - [`weil`]: the SL2(F_p) operator pipeline and its structural checks
//! - [`analysis`]: ambiguity surfaces, spectra, and bound verification
//!
//! ## Example
//!
//! ```
//! use seqlab_core::analysis::ambiguity_surface;
//! use seqlab_core::families::omega_sequence;
//! use seqlab_core::field::PrimeField;
//!
//! let f = PrimeField::new(5, Some(2))?;
//! let phi = omega_sequence(&f, 0)?;
//! assert_eq!(phi.value(0).norm(), 0.0);           // zero at index 0
//! assert!((phi.value(2).norm() - 1.0).abs() < 1e-12); // unit circle elsewhere
//!
//! let surface = ambiguity_surface(&phi, &phi, true)?;
//! assert!(surface.peak.magnitude <= 2.0 * 5f64.sqrt() + 1e-6);
//! # Ok::<(), seqlab_core::Error>(())
//! ```

pub mod analysis;
pub mod error;
pub mod families;
pub mod field;
pub mod seq;
pub mod weil;

pub use error::Error;

/// Schema tag stamped on every serialized report.
pub const REPORT_SCHEMA: &str = "seqlab-report/1";
