//! Exact spectra and Weyl-law verification on compact Heisenberg manifolds.
//!
//! A compact Heisenberg manifold is a quotient `M = Γ\H_d` of the
//! (2d+1)-dimensional Heisenberg group by a cocompact lattice `Γ`. Up to
//! automorphism, `Γ` is determined by a divisibility chain
//! `ell_1 | ell_2 | … | ell_d` and a positive center parameter `c`; the volume
//! of the quotient is `L·c^{d+1}` with `L = ∏ ell_j`.
//!
//! On such a quotient the operators `L_α = L_0 + iαT` (for `|α| ≤ d`; the Kohn
//! Laplacian on (0,q)-forms is the case `α = d−2q`) have a completely explicit
//! spectrum made of two layers:
//!
//! * **type (a)**: `u·|n|·(d + 2j − α·sgn n)` for `n ∈ ℤ∖{0}`, `j ≥ 0`, with
//!   `u = π/(2c)` and multiplicity `|n|^d · L · C(j+d−1, d−1)`;
//! * **type (b)**: `(π/2)·|ξ|²` for `ξ` in the dual of the projected lattice
//!   `Λ = π(Γ) ⊂ ℝ^{2d}`, each with multiplicity 1 before merging.
//!
//! Every spectral value is therefore a *rational multiple of π*, which this
//! crate exploits to enumerate and count eigenvalues exactly (big-rational
//! arithmetic; coinciding values merged with summed multiplicity). On top of
//! the exact layer it verifies the Weyl asymptotics
//!
//! ```text
//! N(λ) / λ^{d+1}  →  C_{d,α} · vol(M),
//! ```
//!
//! along two independent routes: direct counting against the quadrature
//! constant `C_{d,α}` (a sinh-kernel integral, [`weyl`]), and the small-time
//! heat trace `t^{d+1}·G(t) → Γ(d+2)·C_{d,α}·vol(M)` via Karamata's Tauberian
//! theorem ([`heat`]).
//!
//! Modules:
//!
//! * [`quotient`] — lattices, divisibility chains, volumes, duals, dilation;
//! * [`spectrum`] — exact eigenvalue enumeration, merging, and counting;
//! * [`heat`] — heat-trace partial sums with certified truncation bounds;
//! * [`weyl`] — Weyl constants by adaptive Gauss–Legendre quadrature, and
//!   counting-vs-constant convergence reports;
//! * [`forms`] — counts for the Kohn Laplacian on (p,q)-forms;
//! * [`export`] — deterministic CSV/JSON/SVG rendering of report rows.

pub mod error;
pub mod exact;
pub mod export;
pub mod forms;
pub mod heat;
pub mod quotient;
pub mod spectrum;
pub mod weyl;

pub use error::Error;
pub use exact::Threshold;
pub use forms::FormDegree;
pub use heat::HeatTracePoint;
pub use quotient::{DiagonalLattice, QuotientGeometry};
pub use spectrum::{EigenvalueRecord, SpectralCount, SpectralSource, SpectrumKind};
pub use weyl::{ConvergenceRow, WeylConstant};

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
