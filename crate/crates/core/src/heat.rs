//! The type (a) heat trace `G(t) = Σ e^{−λ_j t}` in closed series form, with
//! certified truncation bounds.
//!
//! Summing the radial index `j` first (via `Σ C(j+d−1,d−1) z^j = (1−z)^{−d}`)
//! collapses the double sum over `(n, j)` into a single series in `n`:
//!
//! * interior `|α| < d`, with `u = π/(2c)` and `x = t·u`:
//!   `G = L·Σ_{n≥1} n^d [e^{−xn(d+α)} + e^{−xn(d−α)}] / (1−e^{−2xn})^d`;
//! * boundary `α = ±d`, with `u = π/c` (the kernel line `j = 0`, `sgn n = sgn α`
//!   is excluded): `G = L·Σ_{n≥1} n^d [ e^{−xnd}/(1−e^{−xn})^d
//!   + (1−e^{−xn})^{−d} − 1 ]`.
//!
//! The series is truncated at the first `N` where every branch has a
//! *certified* geometric tail: the term ratio of each branch is at most
//! `q_N = ((N+1)/N)^d · e^{−x·v}` (with `v` the branch's decay rate), which is
//! eventually < 1, and then the dropped tail is at most `term_N·q_N/(1−q_N)`
//! (for the boundary `(1−e^{−xn})^{−d} − 1` branch, via the majorant
//! `(1−z)^{−d} − 1 ≤ d·z·(1−z)^{−(d+1)}`). The reported `truncation_bound`
//! is the sum of these tails plus a floating-point summation allowance;
//! partial sums use compensated (Kahan) accumulation so the allowance stays
//! a few ulps even for very long series.
//!
//! By Karamata's Tauberian theorem, `t^{d+1}·G(t) → Γ(d+2)·C_{d,α}·vol(M)`
//! as `t ↓ 0`; [`scaled_trace_sequence`] exposes the left-hand side so the
//! limit can be compared against the quadrature constants of [`crate::weyl`].

use crate::error::Error;
use crate::exact::rational_to_f64;
use crate::quotient::QuotientGeometry;
use crate::Result;

/// Hard cap on series terms; the series length grows like `1/(t·u)`, so this
/// admits every `t ≥ 10⁻⁸` at moderate `c` while bounding runaway inputs.
const MAX_TERMS: u64 = 4_000_000_000;

/// Smallest admissible heat time.
const MIN_TIME: f64 = 1e-8;

/// One evaluation of the heat trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatTracePoint {
    /// Heat time.
    pub t: f64,
    /// `G(t)`, type (a) eigenvalues summed with multiplicity.
    pub g: f64,
    /// `t^{d+1}·G(t)` — the quantity with the Karamata limit.
    pub scaled: f64,
    /// Rigorous bound on the dropped series tail (plus summation roundoff).
    pub truncation_bound: f64,
}

/// Compensated accumulator: `sum` plus Kahan carry.
#[derive(Clone, Copy, Default)]
struct Kahan {
    sum: f64,
    carry: f64,
}

impl Kahan {
    fn add(&mut self, value: f64) {
        let y = value - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }
}

/// One geometric-tailed series branch: current term, accumulated sum, and the
/// decay rate `v` entering the ratio bound `((n+1)/n)^d·e^{−x·v}`.
struct Branch {
    sum: Kahan,
    term: f64,
    /// Majorant of the current term (equals the term itself except for the
    /// boundary `(1−z)^{−d} − 1` branch).
    majorant: f64,
    decay: f64,
}

impl Branch {
    fn new(decay: f64) -> Self {
        Branch {
            sum: Kahan::default(),
            term: f64::INFINITY,
            majorant: f64::INFINITY,
            decay,
        }
    }

    /// Certified bound on `Σ_{k>n} term_k`, or `None` while the ratio bound
    /// is still ≥ 1 (tail not yet summable by comparison).
    fn tail_bound(&self, n: u64, x: f64, d: i32) -> Option<f64> {
        let ratio = ((n as f64 + 1.0) / n as f64).powi(d) * (-x * self.decay).exp();
        if ratio < 1.0 {
            Some(self.majorant * ratio / (1.0 - ratio))
        } else {
            None
        }
    }
}

fn check_common(q: &QuotientGeometry, alpha: f64, t: f64, tol: f64) -> Result<()> {
    if !alpha.is_finite() {
        return Err(Error::NonFinite { what: "alpha" });
    }
    if alpha.abs() > q.d() as f64 {
        return Err(Error::AlphaRange {
            alpha: format!("{alpha}"),
            d: q.d(),
        });
    }
    if !t.is_finite() {
        return Err(Error::NonFinite { what: "t" });
    }
    if t <= 0.0 {
        return Err(Error::NonPositive { what: "t" });
    }
    if t < MIN_TIME {
        return Err(Error::TimeTooSmall { t });
    }
    if !tol.is_finite() || tol <= 0.0 || tol >= 0.5 {
        return Err(Error::TolRange { tol });
    }
    Ok(())
}

/// Evaluates `G(t)` to relative tolerance `tol` with a certified truncation
/// bound. `α` may be any real in `[−d, d]`; `α = ±d` selects the boundary
/// series with its own unit `u = π/c` and the kernel excluded.
pub fn heat_trace(q: &QuotientGeometry, alpha: f64, t: f64, tol: f64) -> Result<HeatTracePoint> {
    check_common(q, alpha, t, tol)?;
    let d = q.d() as i32;
    let df = q.d() as f64;
    let c = rational_to_f64(q.c());
    let l_factor = rational_to_f64(&num_rational::BigRational::from_integer(
        q.ell_product().clone().into(),
    ));
    let boundary = alpha.abs() == df;
    let u = if boundary {
        std::f64::consts::PI / c
    } else {
        std::f64::consts::FRAC_PI_2 / c
    };
    let x = t * u;

    // Interior: two plain branches decaying like e^{−xn(d±α)}. Boundary: the
    // kernel-free branch decays like e^{−xnd}, while (1−e^{−xn})^{−d} − 1 is
    // majorised by d·n^d·e^{−xn}·(1−e^{−xn})^{−(d+1)}, decaying like e^{−xn}.
    let mut branches = if boundary {
        vec![Branch::new(df), Branch::new(1.0)]
    } else {
        vec![Branch::new(df + alpha), Branch::new(df - alpha)]
    };

    let mut n: u64 = 0;
    let tail_total = loop {
        n += 1;
        if n > MAX_TERMS {
            return Err(Error::BudgetExceeded { budget: MAX_TERMS });
        }
        let nf = n as f64;
        let y = x * nf;
        let nd = nf.powi(d);
        if boundary {
            // 1 − e^{−y} without cancellation, and its reciprocal offset
            // eps = e^{−y}/(1−e^{−y}) so that (1−e^{−y})^{−d} − 1 =
            // expm1(d·ln1p(eps)) stays accurate for large y.
            let one_minus = -f64::exp_m1(-y);
            let g_minus = nd * (-y * df).exp() / one_minus.powi(d);
            branches[0].term = g_minus;
            branches[0].majorant = g_minus;
            branches[0].sum.add(g_minus);

            let eps = (-y).exp() / one_minus;
            let g_plus = nd * f64::exp_m1(d as f64 * eps.ln_1p());
            branches[1].term = g_plus;
            branches[1].majorant = df * nd * (-y).exp() / one_minus.powi(d + 1);
            branches[1].sum.add(g_plus);
        } else {
            let den = (-f64::exp_m1(-2.0 * y)).powi(d);
            for branch in branches.iter_mut() {
                let term = nd * (-y * branch.decay).exp() / den;
                branch.term = term;
                branch.majorant = term;
                branch.sum.add(term);
            }
        }

        if n >= 4 {
            let partial: f64 = branches.iter().map(|b| b.sum.sum).sum();
            let tails: Option<f64> = branches
                .iter()
                .map(|b| b.tail_bound(n, x, d))
                .try_fold(0.0, |acc, t| t.map(|t| acc + t));
            if let Some(tail) = tails {
                if tail <= 0.5 * tol * partial + f64::MIN_POSITIVE {
                    break tail;
                }
            }
        }
    };

    let series_sum: f64 = branches.iter().map(|b| b.sum.sum).sum();
    let g = l_factor * series_sum;
    // Kahan keeps the summation error at a few ulps of the result; fold that
    // into the certified bound alongside the series tail.
    let roundoff = 8.0 * f64::EPSILON * g;
    let bound = l_factor * tail_total + roundoff;
    Ok(HeatTracePoint {
        t,
        g,
        scaled: t.powi(d + 1) * g,
        truncation_bound: bound,
    })
}

/// [`heat_trace`] over a strictly ascending grid of times; the `scaled`
/// column converges to `Γ(d+2)·C_{d,α}·vol(M)` as `t ↓ 0`.
pub fn scaled_trace_sequence(
    q: &QuotientGeometry,
    alpha: f64,
    t_values: &[f64],
    tol: f64,
) -> Result<Vec<HeatTracePoint>> {
    if t_values.is_empty()
        || t_values.iter().any(|t| !t.is_finite() || *t <= 0.0)
        || t_values.windows(2).any(|w| w[0] >= w[1])
    {
        return Err(Error::BadGrid { what: "t grid" });
    }
    t_values
        .iter()
        .map(|&t| heat_trace(q, alpha, t, tol))
        .collect()
}
