//! Dynamical and parameter planes.

mod mesh;
mod palette;
mod render;

pub use mesh::{mesh, Mesh, PlaneSpec, SpecError};
pub use palette::{BasinPalette, BLACK, WHITE, YELLOW};
pub use render::{
    iteration_surface, parameter_pixel, render_dynamical, render_parameter, DynamicalRender,
    DynamicalStats, ParamClass, ParamPixel, ParameterRender, ParameterStats, PixelClass, Raster,
    RenderError, RenderOptions, PARAM_ESCAPE_RADIUS, PARAM_ZERO_TOL,
};
