//! Far-field imaging of a periodic rigid surface through a dense elastic slab.
//!
//! The crate follows the data path of the method: far-field displacement on
//! the slab top is converted to scalar potentials ([`decomposition`]),
//! propagated through the slab to the near field ([`ftn`]), and inverted with
//! a transformed field expansion of the surface problem ([`tfe`],
//! [`inversion`]). Synthetic data come from the solvers in [`forward`].
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod config;
pub mod decomposition;
pub mod forward;
pub mod ftn;
pub mod inversion;
pub mod linalg;
pub mod profile;
pub mod quad;
pub mod spectral;
pub mod tfe;

mod error;

pub use error::Error;

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex<f64>;

pub use config::{ModeGrid, ProblemConfig, Wavenumbers};
pub use profile::SurfaceProfile;
pub use spectral::{ModeCoefficients, ResonancePolicy, TbcSources, VerticalWavenumbers};
