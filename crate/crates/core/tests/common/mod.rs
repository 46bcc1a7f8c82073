//! Independent oracles for the integration suites.
//!
//! Everything here is deliberately low-tech and separate from the library's
//! computation paths: counting is done by exhaustive double loops and box
//! scans in exact rational arithmetic, binomials by their own multiplicative
//! loop, and the Weyl-constant integral by a plain trapezoid rule. Agreement
//! between these and the library is evidence, not circularity.

// Each integration-test binary pulls in this module separately and uses a
// different subset of it.
#![allow(dead_code)]

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use heisweyl::QuotientGeometry;

pub fn br(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Binomial coefficient by the plain multiplicative loop.
pub fn choose(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut result = BigUint::one();
    for i in 1..=k {
        result = result * BigUint::from(n - k + i) / BigUint::from(i);
    }
    result
}

/// One merged eigenvalue line: total multiplicity plus the `(n, j)` pairs
/// that hit it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergedLine {
    pub multiplicity: BigUint,
    pub pairs: Vec<(i64, u64)>,
}

/// Brute-force sweep of the n-indexed layer: every `(n, j)` with
/// `0 < |n|(d + 2j − α·sgn n) ≤ limit_units`, multiplicities from the
/// defining formula, merged by exact value (in spectral units).
pub fn brute_type_a(
    q: &QuotientGeometry,
    alpha: &BigRational,
    limit_units: &BigRational,
) -> BTreeMap<BigRational, MergedLine> {
    let d = q.d();
    let l_factor = q.ell_product().clone();
    let mut merged: BTreeMap<BigRational, MergedLine> = BTreeMap::new();
    for sign in [1i64, -1] {
        // n = sign·m contributes |n|(d + 2j − sign·α).
        let b = BigRational::from_integer(BigInt::from(d)) - br(sign, 1) * alpha;
        let mut m = 1u64;
        loop {
            let m_rat = br(m as i64, 1);
            // Smallest value on this shell: j = 0 for b > 0, else j = 1.
            let smallest = if b.is_zero() {
                &m_rat * br(2, 1)
            } else {
                &m_rat * &b
            };
            if &smallest > limit_units {
                break;
            }
            let mut j = 0u64;
            loop {
                let value = &m_rat * (&b + br(2 * j as i64, 1));
                if &value > limit_units {
                    break;
                }
                if value.is_positive() {
                    let mult = BigUint::from(m).pow(d)
                        * &l_factor
                        * choose(j + u64::from(d) - 1, u64::from(d) - 1);
                    let entry = merged.entry(value).or_insert_with(|| MergedLine {
                        multiplicity: BigUint::zero(),
                        pairs: Vec::new(),
                    });
                    entry.multiplicity += mult;
                    entry.pairs.push((sign * m as i64, j));
                }
                j += 1;
            }
            m += 1;
        }
    }
    merged
}

/// Total of [`brute_type_a`] multiplicities.
pub fn brute_type_a_count(
    q: &QuotientGeometry,
    alpha: &BigRational,
    limit_units: &BigRational,
) -> BigUint {
    brute_type_a(q, alpha, limit_units)
        .values()
        .fold(BigUint::zero(), |acc, line| acc + &line.multiplicity)
}

fn box_scan(
    axes: &[BigRational],
    c: &BigRational,
    limit_units: &BigRational,
    axis: usize,
    partial: &BigRational,
    merged: &mut BTreeMap<BigRational, BigUint>,
) {
    if axis == axes.len() {
        if partial.is_positive() {
            *merged.entry(partial.clone()).or_insert_with(BigUint::zero) +=
                BigUint::one();
        }
        return;
    }
    let step = &axes[axis];
    let mut k = 0i64;
    loop {
        let term = c * (br(k, 1) * step).pow(2);
        let value = partial + &term;
        if &value > limit_units {
            break;
        }
        box_scan(axes, c, limit_units, axis + 1, &value, merged);
        if k > 0 {
            // The mirror image k ↦ −k contributes the same squared term.
            box_scan(axes, c, limit_units, axis + 1, &value, merged);
        }
        k += 1;
    }
}

/// Brute-force box scan of the lattice layer: every nonzero dual-lattice
/// point with `c·|ξ|² ≤ limit_units` (that is the eigenvalue in spectral
/// units), merged by exact value with the number of lattice points.
pub fn brute_type_b(
    q: &QuotientGeometry,
    limit_units: &BigRational,
) -> BTreeMap<BigRational, BigUint> {
    let axes: Vec<BigRational> = q.dual_lattice().diag().to_vec();
    let mut merged = BTreeMap::new();
    box_scan(
        &axes,
        q.c(),
        limit_units,
        0,
        &BigRational::zero(),
        &mut merged,
    );
    merged
}

/// Total of [`brute_type_b`] point counts.
pub fn brute_type_b_count(q: &QuotientGeometry, limit_units: &BigRational) -> BigUint {
    brute_type_b(q, limit_units)
        .values()
        .fold(BigUint::zero(), |acc, points| acc + points)
}

/// Both layers merged by exact value: multiplicity only.
pub fn brute_merged_spectrum(
    q: &QuotientGeometry,
    alpha: &BigRational,
    limit_units: &BigRational,
) -> BTreeMap<BigRational, BigUint> {
    let mut merged: BTreeMap<BigRational, BigUint> = BTreeMap::new();
    for (value, line) in brute_type_a(q, alpha, limit_units) {
        *merged.entry(value).or_insert_with(BigUint::zero) += line.multiplicity;
    }
    for (value, points) in brute_type_b(q, limit_units) {
        *merged.entry(value).or_insert_with(BigUint::zero) += points;
    }
    merged
}

fn factorial_f64(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * f64::from(k))
}

/// Plain trapezoid-rule evaluation of the Weyl constant on `[−40, 40]` with
/// 10⁶ panels — a slow, independent check of the adaptive quadrature.
pub fn trapezoid_weyl_constant(d: u32, alpha: f64) -> f64 {
    let df = f64::from(d);
    let boundary = alpha.abs() == df;
    let (p, a, prefactor) = if boundary {
        (
            i32::try_from(d).unwrap() + 1,
            df - 1.0,
            2.0 * df
                / ((df + 1.0)
                    * std::f64::consts::PI.powi(d as i32 + 1)
                    * factorial_f64(d + 1)),
        )
    } else {
        (
            i32::try_from(d).unwrap(),
            alpha,
            2.0 / (std::f64::consts::PI.powi(d as i32 + 1) * factorial_f64(d + 1)),
        )
    };
    let f = |x: f64| {
        let ratio = if x == 0.0 { 1.0 } else { x / x.sinh() };
        ratio.powi(p) * (-a * x).exp()
    };
    let nodes = 1_000_000u32;
    let lo = -40.0f64;
    let hi = 40.0f64;
    let h = (hi - lo) / f64::from(nodes);
    let mut sum = 0.5 * (f(lo) + f(hi));
    for i in 1..nodes {
        sum += f(lo + h * f64::from(i));
    }
    prefactor * sum * h
}

/// Direct spectral sum `Σ mult·e^{−λt}` over the brute-forced n-indexed
/// layer up to `limit_units`; the dropped tail is below any comparison
/// tolerance once `limit·u·t` is large.
pub fn spectral_sum_heat(
    q: &QuotientGeometry,
    alpha: &BigRational,
    t: f64,
    limit_units: &BigRational,
) -> f64 {
    let u = heisweyl::spectrum::spectral_unit(q);
    brute_type_a(q, alpha, limit_units)
        .iter()
        .map(|(value, line)| {
            let lambda = value.to_f64().unwrap_or(f64::INFINITY) * u;
            line.multiplicity.to_f64().unwrap_or(f64::INFINITY) * (-lambda * t).exp()
        })
        .sum()
}
