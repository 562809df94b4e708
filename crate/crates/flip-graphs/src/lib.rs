//! Flip-graphs of polygon triangulations.
//!
//! A configuration is a convex polygon with optional flat vertices (vertices
//! inside boundary edges) and punctures (interior vertices), over exact
//! integer coordinates. Its triangulations form a graph whose edges are
//! diagonal flips. This crate provides:
//!
//! * exact enumeration, distances and geodesics over that graph, with
//!   explicit node budgets ([`engine`]);
//! * the crossings-based greedy distance estimate ([`heuristics`]);
//! * projections onto arc-containing subfamilies and their region variant
//!   ([`projections`]);
//! * the time-indexed 3-complex of a flip path with its above/below order
//!   and structural checks ([`blowup`]);
//! * generators for two benchmark polygon families with built-in layout
//!   oracles ([`constructions`]);
//! * strong-convexity audits ([`audit`]).
//!
//! The `parallel` feature (on by default) parallelizes all-source searches
//! and audits with rayon; results are identical with it disabled.

pub mod audit;
pub mod blowup;
pub mod constructions;
pub mod engine;
pub mod error;
pub mod geometry;
pub mod heuristics;
pub mod projections;

pub use engine::{ExecMode, FlipPath, SearchLimits};
pub use error::{Error, Result};
pub use geometry::{Arc, ArcId, ArcSet, Point, PointConfig, PointId, PointKind, Triangle, Triangulation};
