//! Exact symbolic computations for almost contact B-metric structures on
//! Lie groups: connections, the fundamental tensor and its class, curvature
//! and Bianchi types, over polynomials with rational coefficients.

#![allow(clippy::needless_range_loop)]

pub mod classify;
pub mod condition;
pub mod connection;
pub mod curvature;
pub mod family;
pub mod lie;
pub mod linalg;
pub mod manifest;
pub mod report;
pub mod scalar;
pub mod structure;
pub mod tensor;
pub mod verify;
