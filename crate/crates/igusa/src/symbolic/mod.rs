//! Exact symbolic algebra: rational functions in t = q^(-s), Laurent
//! polynomials in the formal symbol L = ln q, Laurent expansion at integer
//! points, and rational-function recovery from truncated series.

pub mod fit;
pub mod laurent;
pub mod lpoly;
pub mod qpoly;
pub mod ratfunc;

pub use fit::{ansatz_factor_poly, fit_rational, igusa_relation_check, AnsatzFactor, FitMeta};
pub use laurent::{laurent_at, pole_order_at, LaurentSeries};
pub use lpoly::{LFrac, LPoly};
pub use qpoly::QPoly;
pub use ratfunc::{ratfunc_arith, RatFunc, RatOp};
