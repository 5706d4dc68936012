//! Cartan data, weights, roots, the bilinear form, and exact coordinate
//! arithmetic over Q(sqrt 2).

pub mod cartan;
pub mod root;
pub mod scalar;
pub mod weight;

pub use cartan::{CartanData, CartanKind, RealRootClass};
pub use root::{pairing, reflect, reflect_root, shifted_action, shifted_reflect, Root, RootKind};
pub use scalar::Scalar;
pub use weight::Weight;
