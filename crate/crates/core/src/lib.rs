//! Toolkit for training lightweight flow-perturbation agents that evade
//! flow-based ML intrusion detectors, together with the surrounding
//! pipeline: NetFlow ingestion and encoding, a small detector zoo used as
//! victims and surrogates, the evasion environment, on-policy agent
//! training, reference attacks, and a benchmarking layer.
//!
//! The numeric core is generic over the scalar type via [`Scalar`]
//! (`f32` or `f64`); the pipeline-facing aliases at the crate root fix
//! `f64`, which is what the command-line driver and the benchmark suite
//! use throughout.

pub mod baselines;
pub mod bench;
pub mod env_api;
pub mod evasion;
pub mod flow_data;
pub mod memtrack;
pub mod nids;
pub mod nn;
pub mod policy;
pub mod rng;
pub mod scalar;

pub use scalar::Scalar;

/// Scalar type used by the concrete pipeline aliases.
pub type Real = f64;

/// Detector instantiated at pipeline precision.
pub type NidsModel = nids::NidsModel<Real>;
/// Policy network instantiated at pipeline precision.
pub type PolicyNet = policy::PolicyNet<Real>;
/// Value network instantiated at pipeline precision.
pub type ValueNet = policy::ValueNet<Real>;
/// Evasion environment instantiated at pipeline precision.
pub type EvasionEnv = evasion::EvasionEnv<Real>;
/// Encoded dataset instantiated at pipeline precision.
pub type Dataset = flow_data::Dataset<Real>;
