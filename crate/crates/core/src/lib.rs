//! Exact-arithmetic toolkit for arithmetic progressions on conic sections.
//!
//! Given a smooth conic C in P^2, a linear-fractional functional ell, and a
//! seed parameter t0 where the fiber discriminant Disc(t0) is a nonzero
//! rational square, the modulus
//!
//!   k = (Disc'(t0)^2 - 2 Disc(t0) Disc''(t0)) / Disc'(t0)^2
//!
//! attaches the elliptic curve E_k : Y^2 + 4XY + 4kY = X^3 + kX^2, and every
//! rational point of E_k with XY != 0 produces three rational points of C
//! whose ell-values form a nonconstant arithmetic progression. All arithmetic
//! is exact: rationals, quadratic field elements, and truncated q-series over
//! Q; there is no floating point anywhere in the pipeline.
//!
//! Module map:
//! - [`exact`]: rationals, square roots, squarefree decomposition, Q(sqrt(d))
//! - [`conic`]: conics, linear-fractional maps, fiber discriminants
//! - [`curve`]: long Weierstrass group law, E_k, 4-torsion normalization
//! - [`progression`]: the progression construction and its specializations
//! - [`series`]: q-expansions of k(tau), r(tau), j(tau) and tower identities
//! - [`io`]: serde support with numbers as exact strings

pub mod conic;
pub mod curve;
pub mod error;
pub mod exact;
pub mod io;
pub mod progression;
pub mod series;

pub use conic::{disc_poly, eval_map, on_conic, point_at, Conic, LinFracMap, MapValue, ProjPoint, QuadPoly, Sign};
pub use curve::{
    ek_model, four_mult_formula, lift_twist_point, normalize_four_torsion, twist_x024,
    x024_curve, CurvePoint, EkCurve, Normalization, WeierstrassCurve,
};
pub use error::{Error, Result};
pub use exact::{format_rat, height, parse_rat, rat_sqrt, squarefree_decompose, QuadExt, Rat};
pub use progression::{
    ap_search, common_difference, ek_point_search, modulus_k, three_term_ap, ApTriple,
    FreyTriple, ProgressionSeed, SlopePair, Triangle,
};
pub use series::{j_of_r, j_series, k_series, r_of_k, r_series, verify_tower, QSeries};
