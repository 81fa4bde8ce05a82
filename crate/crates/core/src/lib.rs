//! Exact computation of counting invariants of semistable objects and of their
//! transformation under a change of weak stability condition.

pub mod checks;
pub mod coefficients;
pub mod combinat;
pub mod curve_model;
pub mod invariant_engine;
pub mod lambda_ring;
pub mod quiver_model;
pub mod stability_core;
