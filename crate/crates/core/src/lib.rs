//! Step-graphons, edge polytopes and constructive Hamiltonian decompositions
//! of graphs sampled from them.

#![allow(clippy::needless_range_loop)]
pub mod construct;
pub mod driver;
pub mod error;
pub mod model;
pub mod polytope;
pub mod rational;
pub mod realize;
pub mod refine;
pub mod sampling;

pub use construct::{BlockCycle, HamDecomposition, TauSplit};
pub use error::{BuildAFailure, Error, Result};
pub use model::{ConcentrationVector, Edge, IncidenceMatrix, Partition, SkeletonGraph, StepGraphon};
pub use polytope::{MembershipCertificate, Status};
pub use rational::Q;
pub use sampling::{BalancedMatrix, SampledGraph};
