//! Quasi-classical probability models for joint projective measurements
//! on finite-dimensional quantum systems.
//!
//! The crate builds, for a collection of observables given as Hermitian
//! matrices:
//!
//! - their spectral projection-valued measures ([`spectral::SpectralMeasure`]),
//! - the symmetrized product operator-valued measure on the finite joint
//!   outcome space ([`product::OperatorMeasure`]),
//! - and, per quantum state, the normalized real-valued measure whose
//!   weights reproduce every joint measurement statistic
//!   ([`measure::SignedMeasure`]). The weights sum to one but may be
//!   negative; each single observable still induces an ordinary
//!   probability distribution.
//!
//! A registry-backed [`extension::GlobalMeasureHandle`] evaluates the
//! same data as one global measure on cylinder events, with consistency
//! audits, and [`scenario`] drives everything from declarative JSON
//! files (see the `qclass` binary and the `examples/` directory).
//!
//! ```
//! use qclass::hermitian::{DensityOperator, HermitianOperator};
//! use qclass::matrix::{Complex64, ComplexMatrix};
//! use qclass::measure::quasi_measure;
//! use qclass::product::{sym_product_measure, ObservableId};
//!
//! let sz = HermitianOperator::new(ComplexMatrix::diagonal(&[1.0, -1.0]), 1e-12)?;
//! let sx = HermitianOperator::new(
//!     ComplexMatrix::from_rows(&[
//!         vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
//!         vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
//!     ])?,
//!     1e-12,
//! )?;
//! let pz = sz.spectral_measure()?;
//! let px = sx.spectral_measure()?;
//! let joint = sym_product_measure(&[(ObservableId::of(0), &pz), (ObservableId::of(1), &px)])?;
//! let rho = DensityOperator::new(ComplexMatrix::diagonal(&[1.0, 0.0]), 1e-9)?;
//! let mu = quasi_measure(&rho, &joint)?;
//! assert!((mu.total() - 1.0).abs() < 1e-12);
//! # Ok::<(), qclass::Error>(())
//! ```

#![forbid(unsafe_code)]

pub mod error;
pub mod extension;
pub mod hermitian;
pub mod matrix;
pub mod measure;
pub mod product;
pub mod scenario;
pub mod spectral;

pub use error::{Error, Result};
