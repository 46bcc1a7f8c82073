//! Acceptance suite: one test per release criterion, each asserting the
//! frozen tolerance and printing a `criterion N: PASS` line (visible with
//! `--nocapture`; the harness's own per-test lines mirror them).
//!
//! Tolerances are pinned here, not configurable: loosening one is a code
//! change that must be justified in review.

mod common;

use std::time::Instant;

use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use common::{
    br, brute_merged_spectrum, brute_type_a, brute_type_a_count, choose,
    trapezoid_weyl_constant,
};
use heisweyl::quotient::QuotientGeometry;
use heisweyl::spectrum::{
    self, count_total, count_type_a, count_type_b, cumulative_multiplicity,
    enumerate_spectrum, SpectralSource, SpectrumKind, DEFAULT_BUDGET,
};
use heisweyl::weyl::{
    convergence_report, flat_torus_leading, scaled_trace_limit, weyl_constant,
};
use heisweyl::{heat, forms, FormDegree, Threshold};

fn unit_geometry(d: u32) -> QuotientGeometry {
    QuotientGeometry::new(d, vec![1; d as usize], BigRational::one()).unwrap()
}

fn geometry(d: u32, ell: &[u64], c_num: i64, c_den: i64) -> QuotientGeometry {
    QuotientGeometry::new(d, ell.to_vec(), br(c_num, c_den)).unwrap()
}

#[test]
fn criterion_1_quadrature_ground_truth() {
    let start = Instant::now();
    const TOL: f64 = 1e-8;

    let constant = weyl_constant(1, 0.0, 1e-10).unwrap();
    let closed_form = 0.5; // prefactor × ∫ x/sinh x dx = (1/π²)·(π²/2)
    assert!(
        (constant.value - closed_form).abs() < TOL,
        "value {} vs closed form {closed_form}",
        constant.value
    );

    let trapezoid = trapezoid_weyl_constant(1, 0.0);
    assert!(
        (constant.value - trapezoid).abs() < TOL,
        "value {} vs trapezoid oracle {trapezoid}",
        constant.value
    );

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}, budget 1 s");
    println!(
        "criterion 1: PASS — weyl_constant(1,0) = {} (|Δ| closed form {:.2e}, \
         |Δ| trapezoid {:.2e}, {elapsed:?})",
        constant.value,
        (constant.value - closed_form).abs(),
        (constant.value - trapezoid).abs()
    );
}

#[test]
fn criterion_2_counting_oracle_equivalence() {
    let start = Instant::now();
    let mut cases = 0u32;
    for d in 1..=3u32 {
        for ell_last in [1u64, 2] {
            let mut ell = vec![1u64; d as usize];
            ell[d as usize - 1] = ell_last;
            let q = QuotientGeometry::new(d, ell, BigRational::one()).unwrap();
            let alphas = [
                br(-i64::from(d), 1),
                br(-1, 2),
                br(0, 1),
                br(1, 2),
                br(i64::from(d), 1),
            ];
            for alpha in &alphas {
                for limit in [br(99, 10), br(100, 1)] {
                    let thr = Threshold::from_units(limit.clone()).unwrap();
                    let fast = count_type_a(&q, alpha, &thr, DEFAULT_BUDGET).unwrap();
                    let brute = brute_type_a_count(&q, alpha, &limit);
                    assert_eq!(
                        fast, brute,
                        "d={d} L={ell_last} alpha={alpha} limit={limit}"
                    );
                    cases += 1;
                }
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}, budget 10 s");
    println!(
        "criterion 2: PASS — closed-form = brute force on {cases} cases ({elapsed:?})"
    );
}

#[test]
fn criterion_3_weyl_limit_scalar() {
    let start = Instant::now();

    // d = 1: relative error shrinks across four decades and ends under 1%.
    let q1 = unit_geometry(1);
    let grid = [1e2, 1e3, 1e4, 1e5];
    let rows = convergence_report(&q1, &br(0, 1), &grid, 1e-10, DEFAULT_BUDGET).unwrap();
    for pair in rows.windows(2) {
        assert!(
            pair[1].rel_error.abs() < pair[0].rel_error.abs(),
            "|rel_error| must decrease: {} -> {} at lambda {}",
            pair[0].rel_error,
            pair[1].rel_error,
            pair[1].lambda
        );
    }
    let final_rel = rows.last().unwrap().rel_error;
    assert!(
        final_rel.abs() < 0.01,
        "final |rel_error| {final_rel} >= 1%"
    );

    // d = 2 at λ = 10³ sits at rel ≈ +5.7×10⁻² (the next decade halves it);
    // the bound is calibrated to that observed value, not to the asymptote.
    let q2 = unit_geometry(2);
    let rows2 = convergence_report(&q2, &br(0, 1), &[1e3], 1e-10, DEFAULT_BUDGET).unwrap();
    let rel2 = rows2[0].rel_error;
    assert!(rel2.abs() < 0.06, "d=2 |rel_error| {rel2} >= calibrated 6%");

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "took {elapsed:?}, budget 30 s");
    println!(
        "criterion 3: PASS — d=1 rel errors {:?} (final {:.3e}); d=2 rel {:.4e} \
         (calibrated bound 6.0e-2) ({elapsed:?})",
        rows.iter().map(|r| r.rel_error).collect::<Vec<_>>(),
        final_rel,
        rel2
    );
}

#[test]
fn criterion_4_heat_trace_karamata_crosscheck() {
    let start = Instant::now();
    let t = 1e-4;
    let mut report = Vec::new();

    // Interior points: scaled trace vs (d+1)!·C_{d,α}·vol within 2%.
    for (d, alpha) in [(1u32, 0.0f64), (2, 0.0), (2, 0.5)] {
        let q = unit_geometry(d);
        let point = heat::heat_trace(&q, alpha, t, 1e-8).unwrap();
        let limit = scaled_trace_limit(&q, alpha, 1e-10).unwrap();
        let rel = point.scaled / limit - 1.0;
        assert!(
            rel.abs() < 0.02,
            "interior d={d} alpha={alpha}: rel {rel} >= 2%"
        );
        report.push(format!("({d},{alpha}) rel {rel:.2e}"));
    }

    // Boundary points α = d: separate series and constant, 5%.
    for d in [1u32, 2] {
        let q = unit_geometry(d);
        let alpha = f64::from(d);
        let point = heat::heat_trace(&q, alpha, t, 1e-8).unwrap();
        let limit = scaled_trace_limit(&q, alpha, 1e-10).unwrap();
        let rel = point.scaled / limit - 1.0;
        assert!(rel.abs() < 0.05, "boundary d={d}: rel {rel} >= 5%");
        report.push(format!("({d},{alpha}) rel {rel:.2e}"));
    }

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "took {elapsed:?}, budget 30 s");
    println!(
        "criterion 4: PASS — t^(d+1)·G(t) at t=1e-4 vs Karamata limit: {} ({elapsed:?})",
        report.join(", ")
    );
}

#[test]
fn criterion_5_lattice_layer_flat_torus_law() {
    let start = Instant::now();
    let q = unit_geometry(1);
    let leading = flat_torus_leading(&q.dual_lattice(), 1).unwrap();
    assert_eq!(leading, 2.0);

    // N_b(λ)/λ within 25% of the flat-torus leading coefficient at λ = 10³.
    let thr = Threshold::from_absolute(1e3, q.c()).unwrap();
    let n_b = count_type_b(&q, &thr, DEFAULT_BUDGET).unwrap();
    let ratio_linear = n_b.to_f64().unwrap() / 1e3;
    assert!(
        (ratio_linear - leading).abs() < 0.25 * leading,
        "N_b(1e3)/1e3 = {ratio_linear}, want within 25% of {leading}"
    );

    // Against the full-spectrum normalization λ² the lattice layer dies off.
    let mut quadratic = Vec::new();
    for lambda in [1e1, 1e2, 1e3] {
        let thr = Threshold::from_absolute(lambda, q.c()).unwrap();
        let n_b = count_type_b(&q, &thr, DEFAULT_BUDGET).unwrap();
        quadratic.push(n_b.to_f64().unwrap() / lambda.powi(2));
    }
    for pair in quadratic.windows(2) {
        assert!(pair[1] < pair[0], "N_b/λ² must decrease: {quadratic:?}");
    }
    assert!(
        *quadratic.last().unwrap() < 1e-2,
        "final N_b/λ² {} >= 1e-2",
        quadratic.last().unwrap()
    );

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}, budget 10 s");
    println!(
        "criterion 5: PASS — N_b(1e3)/1e3 = {ratio_linear} (target {leading}), \
         N_b/λ² = {quadratic:?} ({elapsed:?})"
    );
}

#[test]
fn criterion_6_forms_factorization() {
    let start = Instant::now();
    let thr = Threshold::from_units(br(100, 1)).unwrap();
    let mut cases = 0u32;
    for d in [2u32, 3] {
        let q = unit_geometry(d);
        for form_q in 1..d {
            let alpha = br(i64::from(d) - 2 * i64::from(form_q), 1);
            let scalar = count_total(&q, &alpha, &thr, DEFAULT_BUDGET).unwrap();
            for form_p in 0..=d {
                let deg = FormDegree::new(d, form_p, form_q).unwrap();
                let factor = choose(u64::from(d), u64::from(form_p))
                    * choose(u64::from(d), u64::from(form_q));
                let counted = forms::box_b_count(&q, &deg, &thr, DEFAULT_BUDGET).unwrap();
                assert_eq!(counted.n_a, &scalar.n_a * &factor, "(d,p,q)=({d},{form_p},{form_q})");
                assert_eq!(counted.n_b, &scalar.n_b * &factor, "(d,p,q)=({d},{form_p},{form_q})");
                assert_eq!(
                    counted.n_total,
                    &scalar.n_total * &factor,
                    "(d,p,q)=({d},{form_p},{form_q})"
                );
                cases += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    println!(
        "criterion 6: PASS — (p,q)-form counts factor exactly through the scalar \
         count on {cases} cases ({elapsed:?})"
    );
}

#[test]
fn criterion_7_symmetry_and_scaling_invariants() {
    let start = Instant::now();
    let thr30 = Threshold::from_units(br(30, 1)).unwrap();

    // Sign reversal α ↔ −α leaves every count unchanged.
    let sign_geometries = [
        geometry(1, &[2], 3, 2),
        geometry(2, &[1, 2], 1, 1),
        geometry(3, &[1, 1, 2], 2, 5),
    ];
    for q in &sign_geometries {
        for alpha in [br(1, 2), br(1, 1), br(i64::from(q.d()), 1)] {
            let plus = count_total(q, &alpha, &thr30, DEFAULT_BUDGET).unwrap();
            let minus = count_total(q, &(-&alpha), &thr30, DEFAULT_BUDGET).unwrap();
            assert_eq!(plus.n_a, minus.n_a);
            assert_eq!(plus.n_b, minus.n_b);
        }
    }

    // Center scaling: the n-indexed layer counted in spectral units does not
    // see c at all; the lattice layer counted in absolute terms does not
    // either (its eigenvalues are (π/2)|ξ|², c-free).
    for (d, ell) in [(1u32, vec![3u64]), (2, vec![2, 4])] {
        let q_one = QuotientGeometry::new(d, ell.clone(), br(1, 1)).unwrap();
        let q_scaled = QuotientGeometry::new(d, ell, br(7, 3)).unwrap();
        let alpha = br(1, 2);
        assert_eq!(
            count_type_a(&q_one, &alpha, &thr30, DEFAULT_BUDGET).unwrap(),
            count_type_a(&q_scaled, &alpha, &thr30, DEFAULT_BUDGET).unwrap()
        );
        let abs_one = Threshold::from_absolute(50.0, q_one.c()).unwrap();
        let abs_scaled = Threshold::from_absolute(50.0, q_scaled.c()).unwrap();
        assert_eq!(
            count_type_b(&q_one, &abs_one, DEFAULT_BUDGET).unwrap(),
            count_type_b(&q_scaled, &abs_scaled, DEFAULT_BUDGET).unwrap()
        );
    }

    // Dilation: the unit spectrum is invariant, absolute eigenvalues scale
    // by r⁻² (the dilated center parameter is r²c).
    let q = geometry(2, &[1, 2], 1, 1);
    let alpha = br(1, 2);
    let base_records = enumerate_spectrum(&q, &alpha, &thr30, DEFAULT_BUDGET).unwrap();
    for r in [br(1, 1), br(2, 1), br(3, 2)] {
        let dilated = q.dilate(&r).unwrap();
        let records = enumerate_spectrum(&dilated, &alpha, &thr30, DEFAULT_BUDGET).unwrap();
        assert_eq!(records.len(), base_records.len());
        let r_sq_exact = &r * &r;
        for (a, b) in base_records.iter().zip(&records) {
            assert_eq!(a.exact_value, b.exact_value, "dilation r={r}");
            assert_eq!(a.multiplicity, b.multiplicity, "dilation r={r}");
            // Sources match pairwise; a lattice point's squared norm scales
            // by r⁻² (the unit value c·|ξ|² is what stays fixed).
            assert_eq!(a.sources.len(), b.sources.len(), "dilation r={r}");
            for (sa, sb) in a.sources.iter().zip(&b.sources) {
                match (sa, sb) {
                    (
                        SpectralSource::TypeB { norm_sq: na, points: pa },
                        SpectralSource::TypeB { norm_sq: nb, points: pb },
                    ) => {
                        assert_eq!(na, &(nb * &r_sq_exact), "dilation r={r}");
                        assert_eq!(pa, pb, "dilation r={r}");
                    }
                    _ => assert_eq!(sa, sb, "dilation r={r}"),
                }
            }
        }
        // Absolute counts agree after rescaling the threshold by r².
        let lambda = 36.0;
        let r_sq = (&r * &r).to_f64().unwrap();
        let here = Threshold::from_absolute(lambda, q.c()).unwrap();
        let there = Threshold::from_absolute(lambda / r_sq, dilated.c()).unwrap();
        assert_eq!(
            count_total(&q, &alpha, &here, DEFAULT_BUDGET).unwrap().n_total,
            count_total(&dilated, &alpha, &there, DEFAULT_BUDGET)
                .unwrap()
                .n_total,
            "dilation absolute rescaling r={r}"
        );
    }

    // Hockey stick: the cumulative shell multiplicity has a closed form.
    for d in 1..=6u32 {
        for j_max in [0u64, 1, 7, 50] {
            let mut direct = num_bigint::BigUint::zero();
            for j in 0..=j_max {
                direct += choose(j + u64::from(d) - 1, u64::from(d) - 1);
            }
            assert_eq!(cumulative_multiplicity(d, j_max), direct, "d={d} J={j_max}");
        }
    }

    // Enumeration totals match the counting function exactly.
    for q in &sign_geometries {
        for alpha in [br(0, 1), br(1, 2), br(i64::from(q.d()), 1)] {
            let records = enumerate_spectrum(q, &alpha, &thr30, DEFAULT_BUDGET).unwrap();
            let total: num_bigint::BigUint = records
                .iter()
                .fold(num_bigint::BigUint::zero(), |acc, r| acc + &r.multiplicity);
            let counted = count_total(q, &alpha, &thr30, DEFAULT_BUDGET).unwrap();
            assert_eq!(total, counted.n_total);
            for pair in records.windows(2) {
                assert!(pair[0].exact_value < pair[1].exact_value);
            }
        }
    }

    let elapsed = start.elapsed();
    println!(
        "criterion 7: PASS — sign reversal, center scaling, dilation, hockey stick, \
         enumeration-vs-count all exact ({elapsed:?})"
    );
}

#[test]
fn criterion_8_merging_correctness() {
    let start = Instant::now();
    let q = unit_geometry(1);
    let alpha = br(0, 1);
    let thr = Threshold::from_units(br(3, 1)).unwrap();

    let records = enumerate_spectrum(&q, &alpha, &thr, DEFAULT_BUDGET).unwrap();
    let line = records
        .iter()
        .find(|r| r.exact_value == br(3, 1))
        .expect("value 3 must be present");
    assert_eq!(line.kind, SpectrumKind::TypeA);
    assert_eq!(line.multiplicity, 8u32.into());
    assert_eq!(
        line.sources,
        vec![
            SpectralSource::TypeA { n: 1, j: 1 },
            SpectralSource::TypeA { n: -1, j: 1 },
            SpectralSource::TypeA { n: 3, j: 0 },
            SpectralSource::TypeA { n: -3, j: 0 },
        ]
    );

    // Brute-force merge oracle: same line, same pair multiset.
    let merged = brute_type_a(&q, &alpha, &br(3, 1));
    let oracle = &merged[&br(3, 1)];
    assert_eq!(oracle.multiplicity, 8u32.into());
    let mut oracle_pairs = oracle.pairs.clone();
    oracle_pairs.sort_unstable();
    assert_eq!(oracle_pairs, vec![(-3, 0), (-1, 1), (1, 1), (3, 0)]);

    // And the whole merged spectrum up to 10 matches the oracle line by line.
    let thr10 = Threshold::from_units(br(10, 1)).unwrap();
    let records = enumerate_spectrum(&q, &alpha, &thr10, DEFAULT_BUDGET).unwrap();
    let oracle = brute_merged_spectrum(&q, &alpha, &br(10, 1));
    assert_eq!(records.len(), oracle.len());
    for (record, (value, mult)) in records.iter().zip(oracle.iter()) {
        assert_eq!(&record.exact_value, value);
        assert_eq!(&record.multiplicity, mult);
    }

    let elapsed = start.elapsed();
    println!(
        "criterion 8: PASS — merged line at 3u has multiplicity 8 from \
         (±1,1), (±3,0); full merge matches the oracle up to 10u ({elapsed:?})"
    );
}

/// The counting layer `N/λ²` and the independent spectral-sum heat trace
/// certify each other at a moderate time: Σ mult·e^{−λt} from brute-force
/// enumeration vs the closed-form series.
#[test]
fn spectral_sum_agrees_with_series_heat_trace() {
    let q = unit_geometry(1);
    let t = 0.2;
    // Unit-value cutoff 400: the dropped tail is below e^{−125}.
    let direct = common::spectral_sum_heat(&q, &br(0, 1), t, &br(400, 1));
    let series = heat::heat_trace(&q, 0.0, t, 1e-12).unwrap();
    assert!(
        (direct - series.g).abs() <= 1e-10 * series.g,
        "direct {direct} vs series {}",
        series.g
    );
}

/// Guard: a zero threshold admits nothing anywhere in the pipeline.
#[test]
fn below_gap_counts_are_empty() {
    for d in 1..=3u32 {
        let q = unit_geometry(d);
        let thr = Threshold::from_units(br(1, 2)).unwrap();
        let count = count_total(&q, &br(0, 1), &thr, DEFAULT_BUDGET).unwrap();
        assert!(count.n_total.is_zero());
        assert!(
            enumerate_spectrum(&q, &br(0, 1), &thr, DEFAULT_BUDGET)
                .unwrap()
                .is_empty()
        );
    }
    // Unit check so the helper is exercised even when the fast path changes:
    // at c = 1 the unit is pi/2.
    assert!(
        (spectrum::spectral_unit(&unit_geometry(1)) - std::f64::consts::FRAC_PI_2).abs() < 1e-15
    );
}
