//! Radial Fourier transforms on R^n, including non-integrable profiles,
//! computed through a one-dimensional reduction built on fractional
//! derivatives and Bessel-type moment kernels.
//!
//! The crate is organized around the pipeline
//!
//! * [`profiles`] — the radial profile f_0 with closed-form derivative chains;
//! * [`fraccalc`] — Weyl/Riemann-Liouville fractional calculus and the
//!   weighted derivative F_a(t) = t^((n-1)/2) f_0^(a)(t);
//! * [`specfun`] — Bessel J of real order and the moment kernels Q_a, q_a
//!   with calibrated large-argument expansions;
//! * [`quad`] — the adaptive/oscillatory quadrature substrate;
//! * [`transform`] — the forward transform (fractional reduction and direct
//!   Hankel-type oracle), the summability inverse, and convexity asymptotics;
//! * [`diagnostics`] — hypothesis checkers and integrability criteria;
//! * [`selftest`] — the runnable acceptance suite shared by `cargo test`
//!   and the CLI.
//!
//! Grid sweeps parallelize through [`par`] (rayon under the default
//! `parallel` feature, sequential otherwise) with identical, deterministic
//! output either way.

pub mod diagnostics;
pub mod error;
pub mod fraccalc;
pub mod interp;
pub mod par;
pub mod profiles;
pub mod quad;
pub mod selftest;
pub mod specfun;
pub mod transform;

pub use error::{Error, Result};
