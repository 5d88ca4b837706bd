//! Picky elements, subnormalisers and character bijections for symmetric groups.

pub mod arith;
pub mod bijection;
pub mod characters;
pub mod criteria;
pub mod error;
pub mod local;
pub mod partition;
pub mod perm;
pub mod subnormalizer;
pub mod sylow;
pub mod tower;

pub use error::{Error, Result};
pub use partition::{gamma, partitions, tau, Cell, Partition, RimHook};
pub use tower::CoreTower;
pub use characters::{centralizer_order, degree, mn_value, CycleType};
pub use perm::{PermGroup, Permutation};
