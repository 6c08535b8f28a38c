//! Absolute continuity of convolution products of orbital measures on the
//! compact groups of type B_n, modelled by SO(2n+1).
//!
//! The crate has two independent halves. [`rootsys`] and [`eligibility`] are
//! exact: canonical torus points carry rational multiples of π, so root
//! annihilation, dominant types and the eligibility inequalities are decided
//! with integer and rational arithmetic only. [`liealg`] and [`oracle`]
//! realize so(2n+1) numerically and test the same tuples by the tangent-span
//! rank criterion and by probing eigenvalues of random products.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod eligibility;
mod error;
pub mod liealg;
pub mod oracle;
pub mod rootsys;

pub use error::{Error, Result};
pub use rootsys::{Angle, AngleGroup, ElementType, Root, RootKind, TorusElement};
