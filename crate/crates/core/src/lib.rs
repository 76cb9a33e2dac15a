//! Exact genus-0 curve counts `N_β` and rational cuspidal curve counts `C_β`
//! on del Pezzo surfaces, the plane blown up at `k <= 8` general points.
//!
//! ```
//! use dpcount_core::{parse_class, GwEngine};
//!
//! let engine = GwEngine::new();
//! let (surface, quartic) = parse_class("4;").unwrap();
//! assert_eq!(engine.n_beta(&surface, &quartic).unwrap(), 620.into());
//! assert_eq!(engine.c_beta(&surface, &quartic).unwrap().value, 2304.into());
//! ```

pub mod binomial;
pub mod cusp;
pub mod engine;
pub mod error;
pub mod lattice;
mod serde_big;
pub mod table;
pub mod verify;

pub use binomial::binomial;
pub use cusp::CuspResult;
pub use engine::cache::{CACHE_ENV, CACHE_VERSION};
pub use engine::relations::{RelationKind, WdvvRelation};
pub use engine::{CacheLoadReport, ConsistencyEntry, ConsistencyReport, GwEngine};
pub use error::{Error, Result};
pub use lattice::{enumerate_minus_one_classes, parse_class, DivisorClass, SurfaceModel};
pub use table::{ResultRecord, SweepBounds, SweepOutput};
pub use verify::{Suite, SuiteReport};
