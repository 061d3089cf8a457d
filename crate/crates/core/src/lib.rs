//! Exact computation of the two-row Schur-Weyl distribution `P(n,m,k,l)`.
//!
//! The state `|1^l 0^(k-l)> ⊗ Dicke(n-k, m-l)` is projected onto the
//! isotypic components `(n-x, x)` of `(C^2)^{⊗n}`; the resulting weights
//! `p(x | n,m,k,l)` form a probability distribution on `0..=n/2`.
//!
//! Layout:
//! - [`exact`]: big-rational arithmetic, binomials, terminating `rFs` and `rφs` series
//! - [`dist`]: pmf via Hahn and Racah presentations, cdf, recurrence, moments
//! - [`oracle`]: brute-force group sums over `S_n`, independent of every formula
//! - [`asympt`]: Type I / Type II limit laws and large-deviation rates
//! - [`asymmetry`]: entropies and single-shot distinguishability bounds
//! - [`qanalog`]: the q-deformed distribution (q-Hahn / q-Racah)
//! - [`suite`]: the exact invariant sweep used by `verify`
//!
//! Table fills, group sums and sweeps run on rayon when the `parallel`
//! feature is on (the default); see [`Exec`].

pub mod asymmetry;
pub mod asympt;
pub mod dist;
mod error;
pub mod exact;
mod exec;
pub mod oracle;
pub mod qanalog;
pub mod suite;

pub use dist::{DistTable, Params};
pub use error::{Error, Result};
pub use exact::Rational;
pub use exec::Exec;
