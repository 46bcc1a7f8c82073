//! Exact enumeration and counting of the spectrum of `L_α` on a compact
//! Heisenberg quotient.
//!
//! The positive spectrum splits into two layers:
//!
//! * **type (a)**: `u·|n|·(d + 2j − α·sgn n)` for `n ∈ ℤ∖{0}`, `j ≥ 0`, with
//!   `u = π/(2c)` and multiplicity `|n|^d·L·C(j+d−1, d−1)`. For `α = ±d` the
//!   branch with `sgn n = sgn α` has offset `d − |α| = 0`, so its `j = 0` line
//!   is the (infinite-dimensional) kernel and is excluded throughout.
//! * **type (b)**: `(π/2)·|ξ|²` over nonzero `ξ` in the dual `Λ′` of the
//!   projected lattice, one point — one unit of multiplicity.
//!
//! Everything is measured in units of `u`, where type (a) values are the
//! rationals `|n|(d + 2j − α·sgn n)` and type (b) values are `c·|ξ|²`.
//! Coinciding values merge by summing multiplicity (the spectrum of the
//! operator does not remember which layer a value came from).
//!
//! Counting strategies:
//!
//! * [`count_type_a`] collapses the radial sum per `(|n|, sgn n)` shell with
//!   the hockey-stick identity `Σ_{j≤J} C(j+d−1, d−1) = C(J+d, d)`, giving
//!   `O(λ_u)` exact big-integer terms instead of the `O(λ_u²)` double loop
//!   (which survives as the test oracle).
//! * [`count_type_b`] integerizes the dual lattice by the least common
//!   denominator `D` (so `|ξ|² = S/D²` with `S ∈ ℤ`) and walks nested
//!   coordinate ranges of the ellipsoid `S ≤ R`; the innermost coordinate is
//!   counted in closed form (`2·⌊√(rem/a²)⌋ + 1` points), so the walk costs
//!   `O(R^{(2d−1)/2})` instead of `O(R^d)`. A configurable budget bounds the
//!   total work and fails with a resource error when exhausted.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;
use crate::exact::{binomial, pi_bounds, rational_to_f64, Threshold};
use crate::quotient::QuotientGeometry;
use crate::Result;

/// Default enumeration budget (lattice points / index pairs visited).
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Where a merged spectral line draws its multiplicity from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpectralSource {
    /// A type (a) pair `(n, j)`; its multiplicity is `|n|^d·L·C(j+d−1, d−1)`.
    TypeA { n: i64, j: u64 },
    /// All type (b) lattice points of squared norm `norm_sq = |ξ|²`;
    /// `points` of them, each contributing multiplicity 1.
    TypeB { norm_sq: BigRational, points: BigUint },
}

/// Layer tag of a merged record.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumKind {
    TypeA,
    TypeB,
    /// A type (a) and a type (b) value coincide and were merged.
    Mixed,
}

/// One merged spectral line.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenvalueRecord {
    pub kind: SpectrumKind,
    /// Eigenvalue in units of `u = π/(2c)`; strictly positive.
    pub exact_value: BigRational,
    /// Absolute eigenvalue `exact_value·π/(2c)`, for reporting.
    pub float_value: f64,
    /// Contributing index pairs / lattice-point classes, in enumeration order
    /// (type (a) by ascending `|n|`, positive sign first, then type (b)).
    pub sources: Vec<SpectralSource>,
    /// Total multiplicity of the line (sum over sources).
    pub multiplicity: BigUint,
}

/// Counting-function values at one threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralCount {
    /// Absolute threshold λ (reporting value; decisions use exact arithmetic).
    pub lambda: f64,
    /// Type (a) eigenvalues `0 < value ≤ λ`, with multiplicity.
    pub n_a: BigUint,
    /// Type (b) eigenvalues `0 < value ≤ λ` (lattice points).
    pub n_b: BigUint,
    /// `n_a + n_b`.
    pub n_total: BigUint,
    /// `n_total / λ^{d+1}` — the quantity with the Weyl-law limit.
    pub normalized_ratio: f64,
}

/// The spectral unit `u = π/(2c)` as an `f64`.
pub fn spectral_unit(q: &QuotientGeometry) -> f64 {
    let (pi_lo, _) = pi_bounds();
    rational_to_f64(&(pi_lo / (BigRational::from_integer(2.into()) * q.c())))
}

fn check_alpha(q: &QuotientGeometry, alpha: &BigRational) -> Result<()> {
    let d = BigRational::from_integer(q.d().into());
    if alpha.abs() > d {
        return Err(Error::AlphaRange {
            alpha: crate::exact::format_rational(alpha),
            d: q.d(),
        });
    }
    Ok(())
}

/// The two sign branches of the type (a) family: `(b, s)` with
/// `b = d − s·α ≥ 0`, so the branch values are `m·(b + 2j)` for `m = |n|`.
fn branches(d: u32, alpha: &BigRational) -> [(BigRational, i64); 2] {
    let d_rat = BigRational::from_integer(d.into());
    [(&d_rat - alpha, 1), (d_rat + alpha, -1)]
}

/// The type (a) eigenvalue for indices `(n, j)`, in units of `u = π/(2c)`:
/// `|n|·(d + 2j − α·sgn n)`. Zero (for `α = ±d`, `j = 0` on the matching
/// sign) is a legitimate return value but never part of the positive
/// spectrum.
pub fn type_a_eigenvalue(
    q: &QuotientGeometry,
    alpha: &BigRational,
    n: i64,
    j: u64,
) -> Result<BigRational> {
    check_alpha(q, alpha)?;
    if n == 0 {
        return Err(Error::ZeroCenterIndex);
    }
    let m = BigRational::from_integer(n.unsigned_abs().into());
    let sgn = BigRational::from_integer(n.signum().into());
    let d = BigRational::from_integer(q.d().into());
    let two_j = BigRational::from_integer((2 * j as i128).into());
    Ok(m * (d + two_j - sgn * alpha))
}

/// Multiplicity of the type (a) pair `(n, j)`: `|n|^d·L·C(j+d−1, d−1)`.
pub fn type_a_multiplicity(q: &QuotientGeometry, n: i64, j: u64) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::ZeroCenterIndex);
    }
    let d = q.d();
    let m = BigUint::from(n.unsigned_abs()).pow(d);
    let radial = binomial(
        &(BigUint::from(j) + BigUint::from(d) - BigUint::one()),
        d as u64 - 1,
    );
    Ok(m * q.ell_product() * radial)
}

/// Cumulative radial multiplicity `Σ_{j=0}^{J} C(j+d−1, d−1) = C(J+d, d)`
/// (hockey-stick identity) — exact, in closed form.
pub fn cumulative_multiplicity(d: u32, j_max: u64) -> BigUint {
    binomial(&(BigUint::from(j_max) + BigUint::from(d)), d as u64)
}

/// Budget bookkeeping shared by the enumeration walks.
struct Meter {
    used: u64,
    budget: u64,
}

impl Meter {
    fn new(budget: u64) -> Self {
        Meter { used: 0, budget }
    }

    fn charge(&mut self, amount: u64) -> Result<()> {
        self.used = self.used.saturating_add(amount);
        if self.used > self.budget {
            Err(Error::BudgetExceeded {
                budget: self.budget,
            })
        } else {
            Ok(())
        }
    }

    fn charge_big(&mut self, amount: &BigUint) -> Result<()> {
        match amount.to_u64() {
            Some(a) => self.charge(a),
            None => {
                self.used = u64::MAX;
                Err(Error::BudgetExceeded {
                    budget: self.budget,
                })
            }
        }
    }
}

/// Largest shell index `m` that can contribute on a branch with offset `b`:
/// `m·b ≤ λ_u` for `b > 0`, or `m·2 ≤ λ_u` for the kernel branch `b = 0`
/// (whose smallest positive value is `2m`, at `j = 1`).
fn shell_limit(thr: &Threshold, b: &BigRational) -> Result<BigUint> {
    let divisor = if b.is_zero() {
        BigRational::new(BigInt::one(), BigInt::from(2))
    } else {
        b.recip()
    };
    thr.floor_times(&divisor)
}

/// Exact type (a) counting function `N_a(λ)`: eigenvalues `0 < value ≤ λ`
/// with multiplicity, via the per-shell closed form
/// `L·m^d·(C(J+d, d) − [b = 0])` with `J = ⌊(λ_u/m − b)/2⌋`.
///
/// The budget is charged one unit per `(shell, sign)` term, so thresholds
/// requiring more than `budget` shells fail with a resource error.
pub fn count_type_a(
    q: &QuotientGeometry,
    alpha: &BigRational,
    thr: &Threshold,
    budget: u64,
) -> Result<BigUint> {
    check_alpha(q, alpha)?;
    let d = q.d();
    let mut meter = Meter::new(budget);
    let mut total = BigUint::zero();
    for (b, _sign) in branches(d, alpha) {
        let m_max = shell_limit(thr, &b)?;
        meter.charge_big(&m_max)?;
        let m_max = m_max.to_u64().expect("charged, so fits");
        for m in 1..=m_max {
            let j_max = thr
                .floor_affine(m, &b)?
                .expect("m ≤ shell limit guarantees an admissible j");
            let mut cum = binomial(&(j_max + BigUint::from(d)), u64::from(d));
            if b.is_zero() {
                // j = 0 on this branch is the zero eigenvalue — excluded.
                cum -= BigUint::one();
            }
            total += BigUint::from(m).pow(d) * q.ell_product() * cum;
        }
    }
    Ok(total)
}

/// Integerized dual-lattice data: `|ξ|² = S/D²` with
/// `S = Σ (k_i·a_i)² ∈ ℤ` over `k ∈ ℤ^{2d}`.
struct IntegerizedDual {
    /// Squared integer diagonal entries `a_i²`, descending.
    a_sq: Vec<BigUint>,
    /// The common denominator `D`.
    d_common: BigUint,
}

fn integerize_dual(q: &QuotientGeometry) -> IntegerizedDual {
    let dual = q.dual_lattice();
    let mut d_common = BigUint::one();
    for entry in dual.diag() {
        d_common = d_common.lcm(&entry.denom().to_biguint().expect("positive"));
    }
    let d_big = BigInt::from(d_common.clone());
    let mut a_sq: Vec<BigUint> = dual
        .diag()
        .iter()
        .map(|entry| {
            let a = (entry * BigRational::from_integer(d_big.clone()))
                .to_integer()
                .to_biguint()
                .expect("positive integer entry");
            &a * &a
        })
        .collect();
    // Largest steps first: prunes the outer levels of the walk hardest.
    a_sq.sort_unstable_by(|x, y| y.cmp(x));
    IntegerizedDual { a_sq, d_common }
}

/// The integer radius `R = ⌊λ_u·D²/c⌋`, so that the type (b) condition
/// `c·S/D² ≤ λ_u` becomes `S ≤ R` (exact for integer `S`).
fn type_b_radius(q: &QuotientGeometry, thr: &Threshold, dual: &IntegerizedDual) -> Result<BigUint> {
    let d_sq = BigRational::from_integer(BigInt::from(&dual.d_common * &dual.d_common));
    thr.floor_times(&(d_sq / q.c()))
}

fn isqrt_u128(x: u128) -> u128 {
    if x == 0 {
        return 0;
    }
    let mut guess = (x as f64).sqrt() as u128;
    // Fix up the float seed to the exact floor.
    while guess.checked_mul(guess).is_none_or(|g| g > x) {
        guess -= 1;
    }
    while (guess + 1).checked_mul(guess + 1).is_some_and(|g| g <= x) {
        guess += 1;
    }
    guess
}

/// Nested-range count of `k ∈ ℤ^len` with `Σ k_i²·a_i² ≤ rem`, innermost
/// coordinate in closed form; machine-integer fast path.
fn walk_count_u128(a_sq: &[u128], rem: u128, meter: &mut Meter) -> Result<u128> {
    let (first, rest) = a_sq.split_first().expect("at least one coordinate");
    if rest.is_empty() {
        let span = 2 * isqrt_u128(rem / first) + 1;
        meter.charge(span.min(u64::MAX as u128) as u64)?;
        return Ok(span);
    }
    let k_max = isqrt_u128(rem / first);
    let mut total = 0u128;
    for k in 0..=k_max {
        meter.charge(1)?;
        let sub = walk_count_u128(rest, rem - k * k * first, meter)?;
        total += if k == 0 { sub } else { 2 * sub };
    }
    Ok(total)
}

/// As [`walk_count_u128`] but in arbitrary precision (reached only when the
/// integerized radius overflows `u128`; the budget still bounds the work).
fn walk_count_big(a_sq: &[BigUint], rem: &BigUint, meter: &mut Meter) -> Result<BigUint> {
    let (first, rest) = a_sq.split_first().expect("at least one coordinate");
    if rest.is_empty() {
        let span = BigUint::from(2u32) * (rem / first).sqrt() + BigUint::one();
        meter.charge_big(&span)?;
        return Ok(span);
    }
    let k_max = (rem / first).sqrt();
    let mut total = BigUint::zero();
    let mut k = BigUint::zero();
    while k <= k_max {
        meter.charge(1)?;
        let used = &k * &k * first;
        let sub = walk_count_big(rest, &(rem - used), meter)?;
        if k.is_zero() {
            total += sub;
        } else {
            total += BigUint::from(2u32) * sub;
        }
        k += BigUint::one();
    }
    Ok(total)
}

/// Exact type (b) counting function `N_b(λ)`: nonzero dual-lattice points
/// with `0 < (π/2)|ξ|² ≤ λ`. The budget is charged per enumeration step
/// (point spans at the innermost level, one per interior node otherwise).
pub fn count_type_b(q: &QuotientGeometry, thr: &Threshold, budget: u64) -> Result<BigUint> {
    let dual = integerize_dual(q);
    let radius = type_b_radius(q, thr, &dual)?;
    if radius.is_zero() {
        return Ok(BigUint::zero());
    }
    let mut meter = Meter::new(budget);
    let with_origin = match (
        radius.to_u128(),
        dual.a_sq
            .iter()
            .map(|a| a.to_u128())
            .collect::<Option<Vec<u128>>>(),
    ) {
        (Some(r), Some(a_sq)) => BigUint::from(walk_count_u128(&a_sq, r, &mut meter)?),
        _ => walk_count_big(&dual.a_sq, &radius, &mut meter)?,
    };
    Ok(with_origin - BigUint::one())
}

/// Both layers at once, with the normalized ratio `N/λ^{d+1}`.
pub fn count_total(
    q: &QuotientGeometry,
    alpha: &BigRational,
    thr: &Threshold,
    budget: u64,
) -> Result<SpectralCount> {
    let n_a = count_type_a(q, alpha, thr, budget)?;
    let n_b = count_type_b(q, thr, budget)?;
    let n_total = &n_a + &n_b;
    let lambda = thr.absolute(q.c());
    let ratio = n_total.to_f64().unwrap_or(f64::INFINITY) / lambda.powi(q.d() as i32 + 1);
    Ok(SpectralCount {
        lambda,
        n_a,
        n_b,
        n_total,
        normalized_ratio: ratio,
    })
}

/// Accumulator for one merged spectral line.
struct Accum {
    multiplicity: BigUint,
    sources: Vec<SpectralSource>,
    has_a: bool,
    has_b: bool,
}

impl Accum {
    fn new() -> Self {
        Accum {
            multiplicity: BigUint::zero(),
            sources: Vec::new(),
            has_a: false,
            has_b: false,
        }
    }
}

/// Exact enumeration of every positive eigenvalue `≤ λ`, merged and sorted.
///
/// Records with equal exact value are merged: multiplicities added, sources
/// concatenated (type (a) pairs in shell order, then the type (b) point
/// class). The sum of multiplicities equals [`count_total`]'s `n_total`.
pub fn enumerate_spectrum(
    q: &QuotientGeometry,
    alpha: &BigRational,
    thr: &Threshold,
    budget: u64,
) -> Result<Vec<EigenvalueRecord>> {
    check_alpha(q, alpha)?;
    let d = q.d();
    let mut meter = Meter::new(budget);
    let mut lines: BTreeMap<BigRational, Accum> = BTreeMap::new();

    // Type (a): explicit (m, sign, j) triples, shells ascending so that the
    // source lists come out in a stable documented order.
    let branch_pair = branches(d, alpha);
    let mut shell_caps = Vec::new();
    for (b, sign) in &branch_pair {
        let m_max = shell_limit(thr, b)?;
        let m_max = match m_max.to_u64() {
            Some(m) => m,
            None => return Err(Error::BudgetExceeded { budget }),
        };
        shell_caps.push((b.clone(), *sign, m_max));
    }
    let overall_max = shell_caps.iter().map(|&(_, _, m)| m).max().unwrap_or(0);
    for m in 1..=overall_max {
        for (b, sign, m_max) in &shell_caps {
            if m > *m_max {
                continue;
            }
            let j_max = thr
                .floor_affine(m, b)?
                .expect("m within shell limit")
                .to_u64()
                .ok_or(Error::BudgetExceeded { budget })?;
            let j_start = if b.is_zero() { 1 } else { 0 };
            for j in j_start..=j_max {
                meter.charge(1)?;
                let value = BigRational::from_integer(m.into())
                    * (b + BigRational::from_integer(BigInt::from(2 * j as i128)));
                let n = *sign * m as i64;
                let mult = type_a_multiplicity(q, n, j)?;
                let entry = lines.entry(value).or_insert_with(Accum::new);
                entry.multiplicity += mult;
                entry.sources.push(SpectralSource::TypeA { n, j });
                entry.has_a = true;
            }
        }
    }

    // Type (b): explicit innermost coordinate so each point's exact norm is
    // available for merging.
    let dual = integerize_dual(q);
    let radius = type_b_radius(q, thr, &dual)?;
    if !radius.is_zero() {
        let d_sq = BigInt::from(&dual.d_common * &dual.d_common);
        let value_of_s = |s: &BigUint| -> BigRational {
            BigRational::new(BigInt::from(s.clone()), d_sq.clone()) * q.c()
        };
        let norm_of_s = |s: &BigUint| -> BigRational {
            BigRational::new(BigInt::from(s.clone()), d_sq.clone())
        };
        match (
            radius.to_u128(),
            dual.a_sq
                .iter()
                .map(|a| a.to_u128())
                .collect::<Option<Vec<u128>>>(),
        ) {
            (Some(r), Some(a_sq)) => {
                walk_enumerate_u128(&a_sq, r, 0, &mut meter, &mut |s_val: u128| {
                    let s_big = BigUint::from(s_val);
                    record_point(&mut lines, value_of_s(&s_big), norm_of_s(&s_big));
                })?;
            }
            _ => {
                let zero = BigUint::zero();
                walk_enumerate_big(&dual.a_sq, &radius, &zero, &mut meter, &mut |s: &BigUint| {
                    record_point(&mut lines, value_of_s(s), norm_of_s(s));
                })?;
            }
        }
    }

    let records = lines
        .into_iter()
        .map(|(value, acc)| {
            let kind = match (acc.has_a, acc.has_b) {
                (true, false) => SpectrumKind::TypeA,
                (false, true) => SpectrumKind::TypeB,
                _ => SpectrumKind::Mixed,
            };
            let (pi_lo, _) = pi_bounds();
            let absolute =
                &value * pi_lo / (BigRational::from_integer(2.into()) * q.c());
            EigenvalueRecord {
                kind,
                float_value: rational_to_f64(&absolute),
                exact_value: value,
                sources: acc.sources,
                multiplicity: acc.multiplicity,
            }
        })
        .collect();
    Ok(records)
}

fn record_point(
    lines: &mut BTreeMap<BigRational, Accum>,
    value: BigRational,
    norm_sq: BigRational,
) {
    let entry = lines.entry(value).or_insert_with(Accum::new);
    entry.multiplicity += BigUint::one();
    entry.has_b = true;
    if let Some(SpectralSource::TypeB { points, .. }) = entry
        .sources
        .iter_mut()
        .find(|s| matches!(s, SpectralSource::TypeB { .. }))
    {
        *points += BigUint::one();
    } else {
        entry.sources.push(SpectralSource::TypeB {
            norm_sq,
            points: BigUint::one(),
        });
    }
}

/// Visits every `k ∈ ℤ^len` with `partial + Σ k_i²a_i² ≤ rem`, calling
/// `emit(S)` with the full squared norm `S` of each point (origin included;
/// the caller's `S = 0` point is skipped by `emit`'s contract below — the
/// enumeration itself skips it by construction in [`enumerate_spectrum`]).
fn walk_enumerate_u128(
    a_sq: &[u128],
    rem: u128,
    partial: u128,
    meter: &mut Meter,
    emit: &mut impl FnMut(u128),
) -> Result<()> {
    let (first, rest) = a_sq.split_first().expect("at least one coordinate");
    let k_max = isqrt_u128(rem / first);
    if rest.is_empty() {
        for k in 0..=k_max {
            meter.charge(if k == 0 { 1 } else { 2 })?;
            let s = partial + k * k * first;
            if s > 0 {
                emit(s);
                if k > 0 {
                    emit(s);
                }
            }
        }
        return Ok(());
    }
    for k in 0..=k_max {
        meter.charge(1)?;
        let used = k * k * first;
        walk_enumerate_u128(rest, rem - used, partial + used, meter, emit)?;
        if k > 0 {
            // mirror branch k ↦ −k duplicates the whole subtree
            walk_enumerate_u128(rest, rem - used, partial + used, meter, emit)?;
        }
    }
    Ok(())
}

fn walk_enumerate_big(
    a_sq: &[BigUint],
    rem: &BigUint,
    partial: &BigUint,
    meter: &mut Meter,
    emit: &mut impl FnMut(&BigUint),
) -> Result<()> {
    let (first, rest) = a_sq.split_first().expect("at least one coordinate");
    let k_max = (rem / first).sqrt();
    let mut k = BigUint::zero();
    if rest.is_empty() {
        while k <= k_max {
            let copies = if k.is_zero() { 1 } else { 2 };
            meter.charge(copies)?;
            let s = partial + &k * &k * first;
            if !s.is_zero() {
                for _ in 0..copies {
                    emit(&s);
                }
            }
            k += BigUint::one();
        }
        return Ok(());
    }
    while k <= k_max {
        meter.charge(1)?;
        let used = &k * &k * first;
        let next_rem = rem - &used;
        let next_partial = partial + &used;
        walk_enumerate_big(rest, &next_rem, &next_partial, meter, emit)?;
        if !k.is_zero() {
            walk_enumerate_big(rest, &next_rem, &next_partial, meter, emit)?;
        }
        k += BigUint::one();
    }
    Ok(())
}
