//! Lie balls L_n, their 2-proper quotients 𝕃_n = Λ_n(L_n), and the
//! catalogue of 2-proper holomorphic maps between classical domains.
//!
//! The crate evaluates membership with signed margins, solves fibers of the
//! catalogued maps together with their deck involutions, transports points
//! through the explicit low-dimensional biholomorphisms, evaluates the
//! closed-form Bergman kernels (including the explicit kernel zeros for
//! n ≥ 3), and builds the automorphisms of 𝕃_n extended from the locus set.

pub mod automorphisms;
pub mod bergman;
pub mod biholomorphisms;
pub mod domains;
pub mod error;
pub mod point;
pub mod proper_maps;
pub mod reflections;
pub mod sampling;
pub mod suite;

pub use num_complex::Complex64;

pub use domains::{DomainId, MembershipState, MembershipVerdict};
pub use error::{Error, Result};
pub use point::{CPoint, MatPoint, Point};
pub use proper_maps::{Fiber, MapId};
