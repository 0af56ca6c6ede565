//! Computational laboratory for planar polynomial maps with constant Jacobian.
//!
//! * [`polycore`]: exact polynomials over Q + iQ, composition, Jacobians.
//! * [`autgroup`]: tame automorphism words and their decomposition.
//! * [`fibercount`]: resultant-based fiber solving and geometric degree.
//! * [`tracts`]: canonical rational maps, dual maps and phantom curves.
//! * [`charset`]: characteristic sets built from stared segments.
//! * [`volmetric`]: Monte Carlo volumes and the symmetric-difference metric.
//! * [`lab`]: map catalogs and experiment drivers.

pub mod autgroup;
pub mod charset;
pub mod fibercount;
pub mod lab;
pub mod polycore;
pub mod rng;
pub mod tracts;
pub mod volmetric;
