//! Numerical laboratory for droplets on rough walls.
//!
//! * [`profile`] and [`wetting`]: groove profiles, roughness, critical and
//!   effective interfacial energies, Cassie parameters and contact angles.
//! * [`certificate`]: sufficient conditions for a groove region to stay dry.
//! * [`geometry`], [`maxflow`], [`solver`]: rough domains on a grid and exact
//!   discrete minimisation of the droplet free energy by minimum cut.
//! * [`experiment`] and [`output`]: ε-sweeps comparing rough-wall minimisers with the
//!   effective flat-wall model.

pub mod certificate;
pub mod error;
pub mod experiment;
pub mod geometry;
pub mod maxflow;
pub mod output;
pub mod profile;
pub mod quad;
pub mod solver;
pub mod wetting;

pub use error::*;
pub use profile::Profile;
pub use wetting::{effective_gamma, EffectiveWetting, Regime};
