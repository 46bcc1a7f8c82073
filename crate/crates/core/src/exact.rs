//! Exact rational arithmetic helpers: literals, binomials, a rational
//! enclosure of π, and spectral thresholds.
//!
//! Every eigenvalue handled by this crate is a rational multiple of the
//! spectral unit `u = π/(2c)` (type (a)) or of `π/2` (type (b)), so every
//! comparison against a threshold reduces to *rational* arithmetic once the
//! threshold itself is expressed in those units. Two threshold flavours exist:
//!
//! * **exact** — given directly in units of `u`, compared inclusively
//!   (`value ≤ λ`), so ties are well-defined and deterministic;
//! * **float** — given as an absolute `f64`. Division by π is then resolved
//!   through a 120-digit rational enclosure `PI_LO < π < PI_HI`, which brackets
//!   the threshold in an interval of relative width `10^{-120}`. A spectral
//!   value can never *equal* such a threshold (spectral values are irrational,
//!   `f64` inputs are rational), and if the enclosure is ever too coarse to
//!   decide a comparison the operation fails loudly with
//!   [`Error::ThresholdPrecision`] rather than guessing.

use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;
use crate::Result;

/// First 120 decimal digits of π after the point, as the integer `⌊π·10^120⌋`.
/// The next digit is 0, so the truncation is a strict lower bound.
const PI_TIMES_10_POW_120: &str = "3141592653589793238462643383279502884197169399375105820974944592307816406286208998628034825342117067982148086513282306647";

/// Rational enclosure `PI_LO < π < PI_HI` with `PI_HI − PI_LO = 10^{-120}`.
pub fn pi_bounds() -> &'static (BigRational, BigRational) {
    static BOUNDS: OnceLock<(BigRational, BigRational)> = OnceLock::new();
    BOUNDS.get_or_init(|| {
        let num = BigInt::from_str(PI_TIMES_10_POW_120).expect("static digits parse");
        let den = BigInt::from(10u32).pow(120);
        let lo = BigRational::new(num.clone(), den.clone());
        let hi = BigRational::new(num + BigInt::one(), den);
        (lo, hi)
    })
}

/// A double-precision approximation of π consistent with [`pi_bounds`].
pub fn pi_f64() -> f64 {
    std::f64::consts::PI
}

/// Parses `"num"` or `"num/den"` (optionally signed, ASCII digits) into a
/// rational. Whitespace around the literal is tolerated; a zero denominator or
/// anything else unparseable is a validation error.
pub fn parse_rational(input: &str) -> Result<BigRational> {
    let s = input.trim();
    let err = || Error::RationalParse {
        input: input.to_string(),
    };
    let (num_str, den_str) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s, None),
    };
    let num = BigInt::from_str(num_str).map_err(|_| err())?;
    let den = match den_str {
        Some(d) => BigInt::from_str(d).map_err(|_| err())?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(err());
    }
    Ok(BigRational::new(num, den))
}

/// Formats a rational as `"num"` when integral, `"num/den"` otherwise —
/// the inverse of [`parse_rational`] for canonical (reduced) values.
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Best-effort `f64` value of a rational (for reporting only; all decisions
/// are made in exact arithmetic).
pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Exact binomial coefficient `C(n, k)` with an arbitrarily large top index.
///
/// Computed as the falling product `∏_{i=1..k} (n − k + i)/i`, dividing at
/// each step (each partial product is an integer, so the division is exact).
pub fn binomial(n: &BigUint, k: u64) -> BigUint {
    let k_big = BigUint::from(k);
    if k_big > *n {
        return BigUint::zero();
    }
    let mut acc = BigUint::one();
    let base = n - &k_big;
    for i in 1..=k {
        acc = acc * (&base + BigUint::from(i)) / BigUint::from(i);
    }
    acc
}

/// `C(n, k)` for machine-sized `n`.
pub fn binomial_u64(n: u64, k: u64) -> BigUint {
    binomial(&BigUint::from(n), k)
}

/// Exact factorial `n!`.
pub fn factorial(n: u64) -> BigUint {
    let mut acc = BigUint::one();
    for i in 2..=n {
        acc *= BigUint::from(i);
    }
    acc
}

/// A spectral threshold expressed in units of `u = π/(2c)`, stored as the
/// rational interval `[lo, hi]` that is known to contain it.
///
/// Exact thresholds have `lo == hi` and compare inclusively; float-derived
/// thresholds have `hi − lo = λ_u·10^{-120}` and can never tie (see module
/// docs). All counting and enumeration decisions go through [`Self::admits`]
/// and the floor helpers, so an undecidable comparison surfaces as
/// [`Error::ThresholdPrecision`] instead of a silent miscount.
#[derive(Debug, Clone, PartialEq)]
pub struct Threshold {
    lo: BigRational,
    hi: BigRational,
}

impl Threshold {
    /// Exact threshold at `units` spectral units, compared inclusively.
    pub fn from_units(units: BigRational) -> Result<Self> {
        if !units.is_positive() {
            return Err(Error::NonPositive {
                what: "threshold (in spectral units)",
            });
        }
        Ok(Threshold {
            lo: units.clone(),
            hi: units,
        })
    }

    /// Threshold at the absolute eigenvalue `lambda`, for a quotient with
    /// center parameter `c`: brackets `λ_u = 2cλ/π` through the π enclosure.
    pub fn from_absolute(lambda: f64, c: &BigRational) -> Result<Self> {
        if !lambda.is_finite() {
            return Err(Error::NonFinite { what: "lambda" });
        }
        if lambda <= 0.0 {
            return Err(Error::NonPositive { what: "lambda" });
        }
        let lam = BigRational::from_float(lambda).expect("finite f64 is rational");
        let (pi_lo, pi_hi) = pi_bounds();
        let two_c_lam = BigRational::from_integer(2.into()) * c * lam;
        Ok(Threshold {
            lo: &two_c_lam / pi_hi,
            hi: two_c_lam / pi_lo,
        })
    }

    /// `true` when the threshold is an exact rational in spectral units.
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    /// Lower endpoint in spectral units (equals the exact value when
    /// [`Self::is_exact`]); for reporting.
    pub fn units_lo(&self) -> &BigRational {
        &self.lo
    }

    /// Absolute eigenvalue `λ = units·π/(2c)` as an `f64`, for reporting.
    pub fn absolute(&self, c: &BigRational) -> f64 {
        let (pi_lo, _) = pi_bounds();
        rational_to_f64(&(&self.lo * pi_lo / (BigRational::from_integer(2.into()) * c)))
    }

    /// Does the spectral value `value` (in units of `u`) pass the threshold,
    /// i.e. `value ≤ λ_u`? Inclusive for exact thresholds.
    pub fn admits(&self, value: &BigRational) -> Result<bool> {
        if *value <= self.lo {
            Ok(true)
        } else if *value > self.hi {
            Ok(false)
        } else {
            Err(Error::ThresholdPrecision)
        }
    }

    /// `⌊(λ_u/m − b)/2⌋` for `m ≥ 1` and rational `b ≥ 0`, or `None` when
    /// `λ_u/m < b` (no admissible radial index). This is the largest radial
    /// index `j` with `m·(b + 2j) ≤ λ_u`.
    pub fn floor_affine(&self, m: u64, b: &BigRational) -> Result<Option<BigUint>> {
        let at = |endpoint: &BigRational| -> Option<BigUint> {
            // (P/Q)/m − bn/bd = (P·bd − bn·Q·m) / (Q·m·bd)
            let (p, q) = (endpoint.numer(), endpoint.denom());
            let (bn, bd) = (b.numer(), b.denom());
            let m_big = BigInt::from(m);
            let num = p * bd - bn * q * &m_big;
            if num.is_negative() {
                return None;
            }
            let den = BigInt::from(2) * q * m_big * bd;
            Some(num.div_floor(&den).to_biguint().expect("nonnegative floor"))
        };
        let lo = at(&self.lo);
        if self.is_exact() {
            return Ok(lo);
        }
        let hi = at(&self.hi);
        if lo == hi {
            Ok(lo)
        } else {
            Err(Error::ThresholdPrecision)
        }
    }

    /// `⌊λ_u · f⌋` for a positive rational scale `f`, or `None` when the
    /// product is negative (cannot happen for positive thresholds; kept for
    /// symmetry). Used to integerize ellipsoid radii.
    pub fn floor_times(&self, f: &BigRational) -> Result<BigUint> {
        let at = |endpoint: &BigRational| -> BigUint {
            let prod = endpoint * f;
            prod.numer()
                .div_floor(prod.denom())
                .to_biguint()
                .unwrap_or_default()
        };
        let lo = at(&self.lo);
        if self.is_exact() {
            return Ok(lo);
        }
        let hi = at(&self.hi);
        if lo == hi {
            Ok(lo)
        } else {
            Err(Error::ThresholdPrecision)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn br(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn pi_enclosure_brackets_known_rational_approximations() {
        let (lo, hi) = pi_bounds();
        assert!(*lo < *hi);
        assert!(br(3, 1) < *lo, "3 < pi");
        assert!(*hi < br(22, 7), "pi < 22/7");
        assert!(br(333, 106) < *lo, "333/106 < pi");
        assert!(*hi < br(355, 113), "pi < 355/113");
        let width = hi - lo;
        assert_eq!(
            width,
            BigRational::new(BigInt::one(), BigInt::from(10u32).pow(120))
        );
    }

    #[test]
    fn pi_enclosure_is_consistent_with_f64_pi() {
        let (lo, hi) = pi_bounds();
        let lo_f = rational_to_f64(lo);
        let hi_f = rational_to_f64(hi);
        assert!((lo_f - std::f64::consts::PI).abs() < 1e-15);
        assert!((hi_f - std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn rational_literals_round_trip() {
        for s in ["0", "7", "-3", "22/7", "-355/113", "10/4"] {
            let r = parse_rational(s).unwrap();
            let back = parse_rational(&format_rational(&r)).unwrap();
            assert_eq!(r, back, "round trip through format for {s}");
        }
        assert_eq!(format_rational(&parse_rational("10/4").unwrap()), "5/2");
        assert_eq!(format_rational(&parse_rational(" 6/3 ").unwrap()), "2");
    }

    #[test]
    fn rational_parse_rejects_garbage() {
        for s in ["", "/", "1/", "/2", "1/0", "a", "1.5", "2/2/2", "0x10"] {
            assert!(
                matches!(parse_rational(s), Err(Error::RationalParse { .. })),
                "{s:?} should not parse"
            );
        }
    }

    #[test]
    fn binomials_match_pascal_identities() {
        assert_eq!(binomial_u64(0, 0), BigUint::one());
        assert_eq!(binomial_u64(5, 2), BigUint::from(10u32));
        assert_eq!(binomial_u64(10, 0), BigUint::one());
        assert_eq!(binomial_u64(4, 7), BigUint::zero());
        for n in 1..=30u64 {
            for k in 1..=n {
                let pascal = binomial_u64(n - 1, k - 1) + binomial_u64(n - 1, k);
                assert_eq!(binomial_u64(n, k), pascal, "C({n},{k})");
            }
        }
        // large top index: C(10^6 + 2, 2) = (10^6+2)(10^6+1)/2
        let big = binomial(&BigUint::from(1_000_002u64), 2);
        assert_eq!(big, BigUint::from(500_001_500_001u64));
    }

    #[test]
    fn factorials_are_exact() {
        assert_eq!(factorial(0), BigUint::one());
        assert_eq!(factorial(1), BigUint::one());
        assert_eq!(factorial(5), BigUint::from(120u32));
        assert_eq!(factorial(20), BigUint::from(2_432_902_008_176_640_000u64));
    }

    #[test]
    fn exact_thresholds_compare_inclusively() {
        let thr = Threshold::from_units(br(5, 1)).unwrap();
        assert!(thr.is_exact());
        assert!(thr.admits(&br(5, 1)).unwrap(), "ties admitted");
        assert!(thr.admits(&br(4, 1)).unwrap());
        assert!(!thr.admits(&br(51, 10)).unwrap());
    }

    #[test]
    fn float_thresholds_enclose_the_true_value() {
        // lambda = pi/2, c = 1 should give lambda_u enclosing exactly 1.
        let c = br(1, 1);
        let thr = Threshold::from_absolute(std::f64::consts::FRAC_PI_2, &c).unwrap();
        assert!(!thr.is_exact());
        // The f64 value of pi/2 is within one ulp of the true pi/2, so the
        // bracket sits within ~1e-16 of 1 but is never exactly 1 wide.
        assert!(*thr.units_lo() > br(99, 100));
        assert!(*thr.units_lo() < br(101, 100));
        // Values clearly inside/outside are decided without error.
        assert!(thr.admits(&br(1, 2)).unwrap());
        assert!(!thr.admits(&br(2, 1)).unwrap());
    }

    #[test]
    fn undecidable_comparisons_fail_loudly() {
        // Artificial interval straddling 1 simulates a threshold whose
        // enclosure is too coarse.
        let thr = Threshold {
            lo: br(999, 1000),
            hi: br(1001, 1000),
        };
        assert!(matches!(
            thr.admits(&br(1, 1)),
            Err(Error::ThresholdPrecision)
        ));
        assert!(matches!(
            thr.floor_times(&br(1, 1)),
            Err(Error::ThresholdPrecision)
        ));
    }

    #[test]
    fn floor_affine_matches_direct_arithmetic() {
        // lambda_u = 5, m = 1, b = 1: floor((5-1)/2) = 2
        let thr = Threshold::from_units(br(5, 1)).unwrap();
        assert_eq!(
            thr.floor_affine(1, &br(1, 1)).unwrap(),
            Some(BigUint::from(2u32))
        );
        // m = 5, b = 1: floor((1-1)/2) = 0 (the tie at j = 0)
        assert_eq!(
            thr.floor_affine(5, &br(1, 1)).unwrap(),
            Some(BigUint::zero())
        );
        // m = 6, b = 1: 5/6 < 1, no admissible j
        assert_eq!(thr.floor_affine(6, &br(1, 1)).unwrap(), None);
        // fractional b: lambda_u = 7/2, m = 1, b = 1/2: floor(3/2) = 1
        let thr = Threshold::from_units(br(7, 2)).unwrap();
        assert_eq!(
            thr.floor_affine(1, &br(1, 2)).unwrap(),
            Some(BigUint::one())
        );
    }

    #[test]
    fn floor_times_integerizes_radii() {
        let thr = Threshold::from_units(br(5, 1)).unwrap();
        assert_eq!(thr.floor_times(&br(4, 1)).unwrap(), BigUint::from(20u32));
        assert_eq!(thr.floor_times(&br(1, 2)).unwrap(), BigUint::from(2u32));
        let thr = Threshold::from_units(br(7, 3)).unwrap();
        // floor(7/3 * 3) = 7 exactly
        assert_eq!(thr.floor_times(&br(3, 1)).unwrap(), BigUint::from(7u32));
    }
}
