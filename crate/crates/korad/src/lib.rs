//! korad: a numerical laboratory for the radial ODE machinery behind
//! quasilinear inequalities `Delta_phi u >= b(x) f(u) l(|grad u|)` on
//! rotationally symmetric model manifolds.
//!
//! The crate covers four layers:
//!
//! * [`nonlinearity`]: the structural functions `(phi, f, l)` with the
//!   derived kernels `K`, `F` and the sampled structural-condition checkers;
//! * [`ko`]: Keller-Osserman integrability verdicts at zero and infinity;
//! * [`model`]: model manifolds — warping functions, comparison (Jacobi)
//!   solutions, volume growth, Green kernels, the critical curve and the
//!   fake distance;
//! * [`bvp`] and [`construct`]: the singular two-point boundary value
//!   problems solved through their integral fixed-point operators, and the
//!   explicit supersolution families built from the Keller-Osserman
//!   integrals;
//! * [`verify`]: an independent oracle — radial `phi`-Laplacian evaluation,
//!   residual sign reports, the counterexample gallery and the
//!   theorem-applicability checker.
//!
//! Most capabilities have a runnable example under `examples/`; the thin
//! `korad` binary exposes the same entry points as subcommands.

pub mod error;
pub mod fitting;
pub mod grid;
pub mod ode;
pub mod quad;
pub mod root;
pub mod verdict;
pub mod verify;

pub mod bvp;
pub mod cli;
pub mod config;
pub mod construct;
pub mod ko;
pub mod model;
pub mod nonlinearity;

pub use grid::RadialFunction;
pub use verdict::Verdict;
