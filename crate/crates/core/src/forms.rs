//! Counting for the Kohn Laplacian `□_b` acting on `(p,q)`-forms.
//!
//! On the quotients handled by this crate, `□_b` acts diagonally on the
//! coefficient functions of a `(p,q)`-form through the scalar operator with
//! parameter `α = d − 2q`, and every scalar eigenfunction induces
//! `binom(d,p)·binom(d,q)` independent eigenforms. Counting is therefore an
//! exact componentwise multiple of the scalar counting functions, and the
//! predicted `N(λ)/λ^{d+1}` limit picks up the same factor. Only
//! `0 < q < d` (with `d ≥ 2`) is nontrivial here: `|d − 2q| < d` keeps the
//! spectrum away from the boundary parameter, and the scalar case `q = 0`
//! is already covered by the spectrum module.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::error::Error;
use crate::exact::{binomial_u64, Threshold};
use crate::quotient::QuotientGeometry;
use crate::spectrum::{count_total, SpectralCount};
use crate::weyl::weyl_constant;
use crate::Result;

/// A validated form bidegree `(p, q)` for complex dimension `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FormDegree {
    d: u32,
    p: u32,
    q: u32,
}

impl FormDegree {
    /// Requires `d ≥ 2`, `0 ≤ p ≤ d`, and `0 < q < d`.
    pub fn new(d: u32, p: u32, q: u32) -> Result<Self> {
        if d < 2 || p > d || q == 0 || q >= d {
            return Err(Error::FormDegree { p, q, d });
        }
        Ok(FormDegree { d, p, q })
    }

    /// Complex dimension the degree was validated against.
    pub fn d(&self) -> u32 {
        self.d
    }

    /// Holomorphic degree `p`.
    pub fn p(&self) -> u32 {
        self.p
    }

    /// Anti-holomorphic degree `q`.
    pub fn q(&self) -> u32 {
        self.q
    }

    /// The scalar parameter `α = d − 2q` the coefficients diagonalize under.
    pub fn alpha(&self) -> BigRational {
        BigRational::from_integer((i64::from(self.d) - 2 * i64::from(self.q)).into())
    }

    /// The eigenform count per scalar eigenfunction:
    /// `binom(d,p)·binom(d,q)`.
    pub fn multiplier(&self) -> BigUint {
        binomial_u64(u64::from(self.d), u64::from(self.p))
            * binomial_u64(u64::from(self.d), u64::from(self.q))
    }
}

/// Exact eigenvalue count for `□_b` on `(p,q)`-forms up to the threshold:
/// the scalar count at `α = d − 2q`, multiplied componentwise by
/// `binom(d,p)·binom(d,q)`.
pub fn box_b_count(
    q: &QuotientGeometry,
    deg: &FormDegree,
    thr: &Threshold,
    budget: u64,
) -> Result<SpectralCount> {
    if deg.d() != q.d() {
        return Err(Error::FormDegree {
            p: deg.p(),
            q: deg.q(),
            d: q.d(),
        });
    }
    let scalar = count_total(q, &deg.alpha(), thr, budget)?;
    let mult = deg.multiplier();
    let n_total = &scalar.n_total * &mult;
    let ratio = n_total.to_f64().unwrap_or(f64::INFINITY)
        / scalar.lambda.powi(q.d() as i32 + 1);
    Ok(SpectralCount {
        lambda: scalar.lambda,
        n_a: &scalar.n_a * &mult,
        n_b: &scalar.n_b * &mult,
        n_total,
        normalized_ratio: ratio,
    })
}

/// Predicted limit of the `(p,q)`-form count `N(λ)/λ^{d+1}`:
/// `binom(d,p)·binom(d,q)·C_{d, d−2q}·volume`.
pub fn box_b_weyl_target(d: u32, deg: &FormDegree, volume: f64, tol: f64) -> Result<f64> {
    if deg.d() != d {
        return Err(Error::FormDegree {
            p: deg.p(),
            q: deg.q(),
            d,
        });
    }
    if !volume.is_finite() {
        return Err(Error::NonFinite { what: "volume" });
    }
    if volume <= 0.0 {
        return Err(Error::NonPositive { what: "volume" });
    }
    let alpha = f64::from(d) - 2.0 * f64::from(deg.q());
    let constant = weyl_constant(d, alpha, tol)?;
    let mult = deg.multiplier().to_f64().unwrap_or(f64::INFINITY);
    Ok(mult * constant.value * volume)
}
