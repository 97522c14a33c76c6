//! Multiresolution quadrilateral elements for thin (Kirchhoff) plate bending.
//!
//! A plate element carries an `m x n` lattice of nodes over its natural square,
//! each with a deflection and two rotations. Raising the resolution level
//! refines the response without remeshing. Classical 4-node elements are
//! available for comparison, and elements of either kind can be spliced into
//! a multi-element model, constrained and solved.

pub mod analytic;
pub mod assembly;
pub mod cases;
pub mod cli;
pub mod element;
pub mod error;
pub mod geometry;
pub mod io;
pub mod quadrature;
pub mod shape_basis;

pub use assembly::{
    solve_model, Constraint, Dof, Frame, NodeSelector, PlateElement, PlateModel, PointLoad, Side, Solution,
};
pub use element::{element_stiffness, Material};
pub use error::{Error, Result};
pub use geometry::{NaturalPoint, QuadGeometry};
pub use quadrature::GaussRule;
pub use shape_basis::{NodeIndex, ResolutionLevel};
