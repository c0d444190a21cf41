//! Exact symbolic algebra for Witt-group formal group laws and iterative
//! Hasse-Schmidt derivations over F_p, together with a verifier that replays
//! the operator identities these structures satisfy.
//!
//! Layout:
//! - [`algebra`]: prime-field scalars, sparse polynomials in blocked variables
//!   `X̄, Ȳ, Z̄`, truncated series, rational functions, linear algebra mod p.
//! - [`witt`]: Witt addition law from ghost components, `fr`, `ve`, `re`.
//! - [`fgl`]: formal group laws, `[N]_F`, iterativity constants.
//! - [`hsd`]: Hasse-Schmidt derivations, component operators, composites.
//! - [`pbasis`]: p-power decompositions and the p-basis route for `D_j`.
//! - [`verifier`]: executable checks producing [`verifier::CheckReport`]s.
//! - [`cli`]: the `wittcheck` command line front end.

pub mod algebra;
pub mod cli;
pub mod error;
pub mod fgl;
pub mod hsd;
pub mod pbasis;
pub mod verifier;
pub mod witt;

pub use algebra::{Block, Fp, FpPoly, Integers, MultiIndex, Params, Poly, RatFun, TruncSeries, ZPoly};
pub use error::{Error, Result};
