//! Cross-checks of the analytic machinery against independent computations.

use schrodinger_lab::experiments::{
    blowup_initial, build_lambda_set, max_resonant_q, run_filter, run_viscous,
};
use schrodinger_lab::norms::{
    l4_mixed_analytic, l4_mixed_quadrature, resonant_quadruple_count, QuadratureRule,
};
use schrodinger_lab::schemes::{SchemeConfig, ViscosityRule};
use schrodinger_lab::spectral::{q_h, Quadruple};

#[test]
fn blowup_datum_matches_quadrature() {
    let set = build_lambda_set(128, 0.3).unwrap();
    let u0 = blowup_initial(&set);
    for cfg in [
        SchemeConfig::conservative(set.grid()),
        SchemeConfig::viscous(set.grid(), set.grid().h()).unwrap(),
    ] {
        let a = l4_mixed_analytic(&u0, 1.0, &cfg).unwrap();
        let q = l4_mixed_quadrature(&u0, 1.0, &cfg, QuadratureRule::default()).unwrap();
        assert!((a.fourth_power - q.fourth_power).abs() <= 1e-7 * q.fourth_power);
        assert!(a.imag_residual.abs() <= 1e-9 * a.fourth_power);
    }
}

#[test]
fn resonant_count_and_q_max_by_brute_force() {
    let set = build_lambda_set(256, 0.3).unwrap();
    let g = set.grid();
    let m = set.members();
    let mut count = 0u64;
    let mut q_max = 0.0f64;
    for &a in m {
        for &b in m {
            for &c in m {
                for &d in m {
                    if a + b == c + d {
                        count += 1;
                        q_max = q_max.max(q_h(g, Quadruple::new(a, b, c, d)).unwrap().abs());
                    }
                }
            }
        }
    }
    assert_eq!(resonant_quadruple_count(m), count);
    assert_eq!(max_resonant_q(g, m), q_max);
}

#[test]
fn experiment_grid_is_independent_of_thread_count() {
    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let quad = rayon::ThreadPoolBuilder::new()
        .num_threads(4)
        .build()
        .unwrap();
    let ns = [16, 32, 64];
    let a = single.install(|| run_filter(0.2, &ns, 1.0, 5, 42).unwrap());
    let b = quad.install(|| run_filter(0.2, &ns, 1.0, 5, 42).unwrap());
    assert_eq!(a, b);
    let rule = ViscosityRule::Linear { c: 2.0 };
    let a = single.install(|| run_viscous(rule, &ns, 0.5, 3, 7, Some(0.3)).unwrap());
    let b = quad.install(|| run_viscous(rule, &ns, 0.5, 3, 7, Some(0.3)).unwrap());
    assert_eq!(a, b);
}
