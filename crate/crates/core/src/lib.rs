//! Isotropic cones of pseudo-Hermitian forms on `ℂ^{p+q}`, their quotients
//! `Q′ = Q/ℝ⁺` and `Q̃ = Q/ℂ*`, the conformal structure they carry, and
//! the κ charts that present `Q̃` as a compactification.
//!
//! ## Modules
//!
//! - [`pseudoherm`]: signatures, vectors, the form, cone points, the
//!   pseudo-unitary group and seeded samplers
//! - [`quotients`]: splits, the cross-section `Q_s ≅ S^{2p−1} × S^{2q−1}`,
//!   phase-gauged representatives of `Q̃`, the (1,1) torus
//! - [`tangent`]: induced metrics on `Q′`, the skew form, the degenerate
//!   cotangent metric on `Q̃`
//! - [`witt`]: Witt bases, hyperbolic partners, κ charts and their inverse,
//!   the boundary `a⊥`
//! - [`exact`]: `ℚ(i)` arithmetic and exact twins of the chart operations
//! - [`suites`]: seeded randomized verification
//! - [`cli`]: the `coneq` command line
//!
//! ## Examples
//!
//! ```bash
//! cargo run --example cone_sampling -- 2 3   # cone points, pseudo-unitary maps
//! cargo run --example quotients              # Q_s, Q̃ representatives, the torus
//! cargo run --example induced_metric         # metric, scaling law, conformal class
//! cargo run --example cometric               # degenerate cometric, skew form
//! cargo run --example witt_chart             # Witt basis, κ and its inverse
//! cargo run --example aperp                  # a⊥ strata and their dimension
//! cargo run --example exact_oracle           # exact rational charts
//! cargo run --example verification           # the verification battery
//! ```
//!
//! ## Conventions
//!
//! `f(u, v) = Σ η_j u^j conj(v^j)` is linear in the first slot, with
//! `η = diag(+1 ×p, −1 ×q)`. JSON vectors are
//! `{"signature": {"p", "q"}, "components": [[re, im], …]}`.

pub mod error;
pub mod pseudoherm;
pub mod rng;
pub mod tol;

pub mod cli;
pub mod exact;
pub mod quotients;
pub mod suites;
pub mod tangent;
pub mod witt;

pub use error::{Error, Result};
