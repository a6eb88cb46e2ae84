//! Exact k-additive cores of cooperative games.
//!
//! The crate works over a small ground set `N = {1, ..., n}` with exact
//! rational arithmetic throughout:
//!
//! * [`setfn`]: games, Möbius transforms, monotonicity classes;
//! * [`orders`]: total orders on the nonempty coalitions of at most `k`
//!   players and their compatibility;
//! * [`achievable`]: achievable families induced by such orders;
//! * [`corevert`]: the k-additive core polyhedra, order-induced games and
//!   vertex certification, including the closed form for `k = n - 1`;
//! * [`oracle`]: brute-force vertex and ray enumeration used as ground truth;
//! * [`io`]: JSON formats for games, orders and reports.

pub mod achievable;
pub mod corevert;
pub mod error;
pub mod io;
pub mod linalg;
pub mod oracle;
pub mod orders;
pub mod rational;
pub mod report;
pub mod setfn;
pub mod subset;

pub use error::{Error, Result};
pub use rational::Rational;
pub use setfn::{GameTable, MobiusVector};
pub use subset::{GroundSet, Subset};
