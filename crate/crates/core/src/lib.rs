//! Hierarchical locally recoverable evaluation codes on Artin-Schreier
//! surfaces `y^p - y = f(x, z)`.
//!
//! The crate is `no_std` and only needs `alloc`. It covers finite field
//! arithmetic, point enumeration on the surfaces and their curve fibers,
//! code construction with parameter reporting, the three-level erasure
//! recovery (fiber, curve, full code) and a deterministic storage-repair
//! simulator.

#![no_std]

extern crate alloc;

pub mod code;
pub mod field;
pub mod geometry;
pub mod matrix;
pub mod recovery;
pub mod sim;
