//! Quotient geometry: divisibility-chain lattices, volumes, projected
//! lattices and their duals, and parabolic dilation.
//!
//! Up to automorphism a cocompact lattice `Γ ⊂ H_d` is the normal form `Γ_ℓ`
//! given by integers `ell_1 | ell_2 | … | ell_d` together with a center
//! parameter `c > 0`; the quotient `M = Γ_ℓ\H_d` has volume `L·c^{d+1}` with
//! `L = ∏ ell_j`. The projection of `Γ_ℓ` to `ℝ^{2d}` is the diagonal lattice
//! `Λ = diag(1,…,1, ell_1,…,ell_d)·ℤ^{2d}`, whose dual `Λ′` (reciprocal
//! diagonal) indexes the type (b) layer of the spectrum.
//!
//! The parabolic dilation `(z, t) ↦ (r·z, r²·t)` maps `Γ` to another lattice;
//! on the geometry side it multiplies the center parameter by `r²` and the
//! projected lattice by `r` (tracked in [`QuotientGeometry::scale`]), and on
//! the spectral side it divides every eigenvalue by `r²` while preserving all
//! multiplicities — the invariance test lives in the spectrum module.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::exact::{format_rational, parse_rational, rational_to_f64};
use crate::Result;

/// A full-rank diagonal lattice `diag(a_1, …, a_k)·ℤ^k` with positive
/// rational diagonal entries.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalLattice {
    diag: Vec<BigRational>,
}

impl DiagonalLattice {
    /// Builds a diagonal lattice; every entry must be strictly positive.
    pub fn new(diag: Vec<BigRational>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::NonPositive {
                what: "lattice dimension",
            });
        }
        if diag.iter().any(|a| !a.is_positive()) {
            return Err(Error::NonPositive {
                what: "lattice diagonal entry",
            });
        }
        Ok(DiagonalLattice { diag })
    }

    /// Ambient dimension `k`.
    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// The diagonal entries `a_1, …, a_k`.
    pub fn diag(&self) -> &[BigRational] {
        &self.diag
    }

    /// Covolume `∏ a_i` (the fundamental-domain volume).
    pub fn covolume(&self) -> BigRational {
        self.diag
            .iter()
            .fold(BigRational::one(), |acc, a| acc * a)
    }

    /// The dual lattice: `diag(1/a_1, …, 1/a_k)·ℤ^k`.
    pub fn dual(&self) -> DiagonalLattice {
        DiagonalLattice {
            diag: self.diag.iter().map(|a| a.recip()).collect(),
        }
    }
}

/// Serialized form: rationals as `"num"`/`"num/den"` strings; `scale` is
/// omitted when 1 (an undilated normal-form lattice).
#[derive(Serialize, Deserialize)]
struct QuotientJson {
    d: u32,
    ell: Vec<u64>,
    c: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    scale: Option<String>,
}

/// A compact Heisenberg manifold `M = Γ\H_d` in lattice normal form,
/// optionally dilated.
#[derive(Debug, Clone, PartialEq)]
pub struct QuotientGeometry {
    d: u32,
    ell: Vec<u64>,
    c: BigRational,
    scale: BigRational,
    ell_product: BigUint,
    volume: BigRational,
}

impl QuotientGeometry {
    /// Builds the normal-form quotient from the divisibility chain `ell` and
    /// center parameter `c`. Validates `d ≥ 1`, `len(ell) == d`, positivity,
    /// the chain `ell_1 | ell_2 | … | ell_d`, and `c > 0`.
    pub fn new(d: u32, ell: Vec<u64>, c: BigRational) -> Result<Self> {
        Self::assemble(d, ell, c, BigRational::one())
    }

    fn assemble(d: u32, ell: Vec<u64>, c: BigRational, scale: BigRational) -> Result<Self> {
        if d == 0 {
            return Err(Error::NonPositive { what: "d" });
        }
        if ell.len() != d as usize {
            return Err(Error::EllLength {
                expected: d as usize,
                got: ell.len(),
            });
        }
        if let Some(index) = ell.iter().position(|&e| e == 0) {
            return Err(Error::EllZero { index });
        }
        for i in 0..ell.len() - 1 {
            if !ell[i + 1].is_multiple_of(ell[i]) {
                return Err(Error::Divisibility {
                    left: i,
                    left_value: ell[i],
                    right: i + 1,
                    right_value: ell[i + 1],
                });
            }
        }
        if !c.is_positive() {
            return Err(Error::NonPositive { what: "c" });
        }
        if !scale.is_positive() {
            return Err(Error::NonPositive { what: "scale" });
        }
        let ell_product = ell
            .iter()
            .fold(BigUint::one(), |acc, &e| acc * BigUint::from(e));
        let volume = BigRational::from_integer(ell_product.clone().into())
            * pow_rational(&c, d as usize + 1);
        Ok(QuotientGeometry {
            d,
            ell,
            c,
            scale,
            ell_product,
            volume,
        })
    }

    /// Complex dimension `d` of the horizontal directions.
    pub fn d(&self) -> u32 {
        self.d
    }

    /// The divisibility chain `ell_1 | … | ell_d`.
    pub fn ell(&self) -> &[u64] {
        &self.ell
    }

    /// Center parameter `c > 0` (already includes any dilation factor `r²`).
    pub fn c(&self) -> &BigRational {
        &self.c
    }

    /// Dilation factor applied to the projected lattice; 1 for normal form.
    pub fn scale(&self) -> &BigRational {
        &self.scale
    }

    /// `L = ∏ ell_j`, the covolume of the undilated projected lattice.
    pub fn ell_product(&self) -> &BigUint {
        &self.ell_product
    }

    /// Exact volume `L·c^{d+1}` of the quotient.
    pub fn volume(&self) -> &BigRational {
        &self.volume
    }

    /// [`Self::volume`] as an `f64`, for reporting.
    pub fn volume_f64(&self) -> f64 {
        rational_to_f64(&self.volume)
    }

    /// The projected lattice `Λ = scale·diag(1,…,1, ell_1,…,ell_d)·ℤ^{2d}`.
    pub fn projected_lattice(&self) -> DiagonalLattice {
        let mut diag = Vec::with_capacity(2 * self.d as usize);
        for _ in 0..self.d {
            diag.push(self.scale.clone());
        }
        for &e in &self.ell {
            diag.push(&self.scale * BigRational::from_integer(e.into()));
        }
        DiagonalLattice { diag }
    }

    /// The dual `Λ′` of the projected lattice.
    pub fn dual_lattice(&self) -> DiagonalLattice {
        self.projected_lattice().dual()
    }

    /// Applies the parabolic dilation with rational factor `r > 0`:
    /// `c ↦ r²·c`, `scale ↦ r·scale`. Every eigenvalue of the dilated
    /// quotient is the corresponding original eigenvalue divided by `r²`.
    pub fn dilate(&self, r: &BigRational) -> Result<QuotientGeometry> {
        if !r.is_positive() {
            return Err(Error::NonPositive { what: "r" });
        }
        Self::assemble(
            self.d,
            self.ell.clone(),
            r * r * &self.c,
            r * &self.scale,
        )
    }

    /// Serializes to the `{d, ell, c, scale?}` JSON shape with rationals as
    /// strings.
    pub fn to_json(&self) -> serde_json::Value {
        let shadow = QuotientJson {
            d: self.d,
            ell: self.ell.clone(),
            c: format_rational(&self.c),
            scale: if self.scale.is_one() {
                None
            } else {
                Some(format_rational(&self.scale))
            },
        };
        serde_json::to_value(shadow).expect("plain struct serializes")
    }

    /// Deserializes and re-validates the `{d, ell, c, scale?}` JSON shape.
    pub fn from_json(value: &serde_json::Value) -> Result<QuotientGeometry> {
        let shadow: QuotientJson =
            serde_json::from_value(value.clone()).map_err(|e| Error::RationalParse {
                input: format!("quotient JSON: {e}"),
            })?;
        let c = parse_rational(&shadow.c)?;
        let scale = match shadow.scale {
            Some(s) => parse_rational(&s)?,
            None => BigRational::one(),
        };
        Self::assemble(shadow.d, shadow.ell, c, scale)
    }
}

fn pow_rational(base: &BigRational, exp: usize) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}
