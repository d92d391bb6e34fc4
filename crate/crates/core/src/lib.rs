//! Exact arithmetic for tilts of `C_p`, Witt-vector presentations, Tate-curve
//! theta identities, primitive ansatz tuples, theta-pilot bounds, and the
//! valuation dynamics of log-links.
//!
//! All arithmetic is exact: valuations are [`Rat`]s, cyclotomic coefficients
//! are big integers, and p-adic units are residues mod `p^N`.

pub mod ansatz;
pub mod error;
pub mod exec;
pub mod loglink;
pub mod pilot;
pub mod rat;
pub mod theta;
pub mod valuation;
pub mod witt;

pub use error::{Error, Result};
pub use exec::Exec;
pub use rat::{Rat, Val};
pub use valuation::TiltElement;
pub use witt::{PrimitiveDeg1, RhoWeight, WittExpr};
