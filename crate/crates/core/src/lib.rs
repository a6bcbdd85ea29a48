pub mod analytic;
pub mod certify;
pub mod contour;
pub mod dispersion;
pub mod error;
pub mod homotopy;
pub mod limits;
pub mod model;
pub mod rational;
pub mod spectrum;
pub mod strips;
