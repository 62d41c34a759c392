//! Numerical construction and verification of compact minimal surfaces in
//! the Berger spheres S³_b(κ, τ).
//!
//! The crate is organised bottom-up:
//!
//! * [`geometry`]: the ambient metric, connection, Hopf fibration and isometries;
//! * [`geodesics`]: closed-form geodesics and the geodesic reflections;
//! * [`surface`], [`families`] and [`sinh_gordon`]: parametrized immersions,
//!   including the family minimal in every Berger sphere;
//! * [`curvature`]: normals, round and Berger mean curvatures, shape operators;
//! * [`mesh`], [`plateau`] and [`assembler`]: discrete Plateau solutions over
//!   geodesic polygons and their reflection-group orbits;
//! * [`sister`]: pointwise algebra of the sister-surface correspondence;
//! * [`verify`]: invariant suites with residuals paired to tolerances;
//! * [`io`] and [`cli`]: mesh/report files and command entry points.

// Guards of the form `!(x > 0.0)` are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod assembler;
pub mod cli;
pub mod curvature;
pub mod error;
pub mod families;
pub mod geodesics;
pub mod geometry;
pub mod io;
pub mod mesh;
pub mod plateau;
pub mod sinh_gordon;
pub mod sister;
pub mod surface;
pub mod verify;

pub use error::{Error, Result};
pub use geometry::{BergerParams, Isometry, SpherePoint, TangentVector, Vec4};
