//! Extraction of one-dimensional shape-enclosing contours from discrete
//! 2D data (binary/gray-level rasters and simulation grids).
//!
//! The pipeline stages, roughly in the order they are usually chained:
//!
//! 1. [`raster`] — grid ingestion (PGM images, CSV field tables) and
//!    gray-level selection masks.
//! 2. [`boundary`] — per-pixel boundary vectors, loop connection under a
//!    turn policy, dilated and boundary-pixel-tracing contours.
//! 3. [`isofield`] — range vectors and displacement of dilated contours
//!    onto isocontours of the underlying field.
//! 4. [`cdt`] — constrained Delaunay tessellation of contour point sets
//!    with exact predicates and no Steiner points.
//! 5. [`skeleton`] — triangle classification, chordal skeleton
//!    extraction, pruning by morphological significance, chain
//!    decomposition into limbs and torsos.
//! 6. [`closure`] — frame addition, gap closure, torso splitting and
//!    reconnection of vector sets into region-enclosing contours.
//! 7. [`shapeops`] — contour simplification, length filtering, and
//!    area/centroid measurement via triangle decomposition.
//! 8. [`fohs`] — freeze-out hyper-surface extraction from 1+1D
//!    hydrodynamic histories.
//!
//! Coordinate convention used throughout: pixel `(col, row)` has its
//! center at `(col, row)` and corners at half-integers; `y` increases
//! upward. Image ingestion flips the stored row order so the visually
//! bottom row of an image has `row = 0`.

pub mod artifact;
pub mod boundary;
pub mod cdt;
pub mod closure;
pub mod fohs;
pub mod geom;
pub mod isofield;
pub mod raster;
pub mod shapeops;
pub mod skeleton;
pub mod svg;

pub use boundary::{Contour, ContourVector, Degeneracy, Orientation, TurnPolicy};
pub use cdt::Triangulation;
pub use geom::GeomPoint;
pub use raster::{Grid, PixelCoord, SelectionMask};
