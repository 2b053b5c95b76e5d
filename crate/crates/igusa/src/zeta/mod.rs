//! Schwartz functions and the exact zeta-integral engine.

pub mod engine;
pub mod schwartz;

pub use engine::{
    zeta_schwartz, zeta_unit_cube, AnsatzSpec, MeasureSpec, Provenance, ZetaContext, ZetaResult,
};
pub use schwartz::SchwartzFunction;
