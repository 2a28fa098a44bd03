#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod config;
pub mod error;
pub mod euclid;
pub mod geometry;
pub mod graph;
pub mod lasserre;
pub mod linalg;
pub mod sdp;
pub mod theta;

pub use bounds::BoundId;
pub use config::{Caps, Config, Tolerances};
pub use error::{Error, Result};
pub use geometry::{cov, cube_mesh, pack, PointConfiguration};
pub use graph::Graph;
pub use theta::ThetaVariant;
