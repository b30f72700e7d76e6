//! rlab: a numerical laboratory for quantitative frequency-space analysis.
//!
//! The crate provides, in rough dependency order:
//!
//! - [`grid`]: periodic Fourier lattices, complex fields, unitary transforms,
//!   `L^p` quadrature and frequency multipliers;
//! - [`bump`]: smooth compactly supported cutoffs and dyadic shell windows;
//! - [`xb`]: the conjugated-Laplacian symbol, its characteristic sphere,
//!   frequency-weighted norms, characteristic projections and
//!   multiplication-operator norms;
//! - [`cgo`]: corrector construction by fixed-point iteration, conductivity
//!   potentials, Haar-random rotations and averaged-norm sweeps;
//! - [`surface`] / [`bilinear`]: graph hypersurfaces, extension operators,
//!   neighborhood fields, bilinear ratio experiments and exponent fits;
//! - [`wavepacket`] / [`tubes`] / [`induction`]: wave-packet decomposition,
//!   tube geometry, incidence counting and scale-iteration probes;
//! - [`experiment`] / [`plot`]: reproducible experiment runner, CSV tables
//!   and SVG figures.
//!
//! Each major capability has a runnable example under `examples/`; the thin
//! `rlab` binary drives the same experiment entry points from config files.

pub mod bilinear;
pub mod bump;
pub mod cgo;
pub mod constants;
pub mod error;
pub mod experiment;
pub mod grid;
pub mod induction;
pub mod plot;
pub mod stats;
pub mod surface;
pub mod tubes;
pub mod wavepacket;
pub mod xb;

pub use error::{CgoError, ExperimentError, GridError, RestrictionError, WavePacketError, XbError};
pub use grid::{make_grid, Ball, Direction, Field, FourierGrid, Representation};
