//! Exact combinatorics of the Mandelbrot set: external angles, kneading
//! sequences, internal addresses, ray pairs, hyperbolic components and the
//! monodromy groups of periodic points.

pub mod address;
pub mod angle;
pub mod components;
pub mod error;
pub mod kneading;
pub mod monodromy;

pub use address::{AngledEntry, AngledInternalAddress, InternalAngle, LongEntry, RenormalizationReport, Side};
pub use angle::{AngleInt, AngleNotation, BinaryAngle, OrbitType};
pub use components::{ComponentTree, HyperbolicComponent, RayPair, TreeNode, VisibleComponent};
pub use error::{Error, Result};
pub use kneading::{InternalAddress, Kneading, Rho, Symbol};
pub use monodromy::{Generator, GroupOrder, GroupReport, Itinerary, Permutation, PreperiodicReport};

/// Angle backed by an unbounded integer.
pub type Angle = BinaryAngle<num_bigint::BigUint>;
/// Angle backed by `u64`, for enumeration with denominators below `2^32`.
pub type Angle64 = BinaryAngle<u64>;
