//! Closed-form Lamb-Oseen vortex displacement and paint-marbling deformations.
//!
//! * [`vortexmath`] evaluates the vortex velocity, the closed-form
//!   displacement and the rotation angle used by the marbling map.
//! * [`oracle`] integrates the velocity numerically and reports how well the
//!   closed form tracks it.
//! * [`xform`] holds the invertible deformations and scenes;
//!   [`raster`] renders scenes by backward mapping; [`recipe`] parses the
//!   `.mbl` scene format.
//! * [`hydro`] answers whether a stylus sheds vortexes or pulls bubbles.
//! * [`cli`] is the `marble` command line.

pub mod cli;
pub mod figures;
pub mod hydro;
pub mod oracle;
pub mod raster;
pub mod recipe;
pub mod vortexmath;
pub mod xform;

pub use raster::{BasePattern, RasterImage, Viewport};
pub use vortexmath::VortexParams;
pub use xform::{Deformation, Point2, Rgb, Scene};
