use statrs::distribution::{Discrete, Poisson};

use nrm_lab::oracle::{estimate_v_ho, hindsight_optimum, single_class_exact_optimum};
use nrm_lab::rng::path_seed;
use nrm_lab::{solve_dlp, ArrivalPath, Instance, Matrix};

/// `r · Σ_k min(k, C) P(Λ = k)`, summed directly over the pmf.
fn brute_force(lambda: f64, revenue: f64, capacity: f64, horizon: f64) -> f64 {
    let mean = lambda * horizon;
    let poisson = Poisson::new(mean).unwrap();
    let upper = (mean + 40.0 * mean.sqrt() + 60.0) as u64;
    revenue
        * (0..=upper)
            .map(|k| (k as f64).min(capacity) * poisson.pmf(k))
            .sum::<f64>()
}

#[test]
fn exact_single_class_optimum_matches_pmf_sum() {
    for &(lambda, revenue, capacity, horizon) in &[
        (1.0, 1.0, 1.0, 1.0),
        (1.0, 1.0, 100.0, 100.0),
        (1.0, 1.0, 1000.0, 1000.0),
        (0.5, 3.0, 40.0, 100.0),
        (2.0, 1.5, 450.5, 200.0),
        (1.0, 2.0, 10.0, 100.0),
        (1.0, 1.0, 200.0, 100.0),
    ] {
        let exact = single_class_exact_optimum(lambda, revenue, capacity, horizon).unwrap();
        let reference = brute_force(lambda, revenue, capacity, horizon);
        assert!(
            (exact - reference).abs() <= 1e-8 * reference.max(1.0),
            "λ={lambda} r={revenue} C={capacity} T={horizon}: {exact} vs {reference}"
        );
    }
}

#[test]
fn exact_optimum_edge_cases() {
    assert_eq!(
        single_class_exact_optimum(1.0, 1.0, 0.0, 10.0).unwrap(),
        0.0
    );
    assert_eq!(single_class_exact_optimum(1.0, 1.0, 5.0, 0.0).unwrap(), 0.0);
    assert!(single_class_exact_optimum(0.0, 1.0, 5.0, 1.0).is_err());
    assert!(single_class_exact_optimum(1.0, -1.0, 5.0, 1.0).is_err());
    assert!(single_class_exact_optimum(1.0, 1.0, -5.0, 1.0).is_err());
}

#[test]
fn dlp_gap_grows_like_sqrt_t_in_the_balanced_single_class_case() {
    for t in [50.0, 100.0, 400.0, 1000.0, 5000.0] {
        let exact = single_class_exact_optimum(1.0, 1.0, t, t).unwrap();
        assert!(
            t - exact >= 0.1587 * f64::sqrt(t) - 0.4748,
            "T={t}: gap {}",
            t - exact
        );
    }
}

fn two_class(b: f64, horizon: f64) -> Instance {
    Instance::new(
        horizon,
        vec![1.0, 1.0],
        vec![2.0, 1.0],
        Matrix::from_rows(&[vec![1.0, 1.0]]).unwrap(),
        vec![b * horizon],
    )
    .unwrap()
}

#[test]
fn hindsight_optimum_on_known_totals() {
    let inst = two_class(1.0, 10.0);
    let mut events = Vec::new();
    for k in 0..7 {
        events.push(nrm_lab::MergedEvent {
            time: k as f64 + 0.5,
            class: 0,
        });
    }
    for k in 0..6 {
        events.push(nrm_lab::MergedEvent {
            time: k as f64 + 0.25,
            class: 1,
        });
    }
    let path = ArrivalPath::from_events(2, 10.0, 0, events).unwrap();
    let ho = hindsight_optimum(&inst, &path).unwrap();
    assert_eq!(ho.z, vec![7.0, 3.0]);
    assert_eq!(ho.value, 17.0);
}

#[test]
fn v_ho_estimate_is_below_v_dlp() {
    for b in [0.5, 1.0, 1.5] {
        let inst = two_class(b, 1000.0);
        let seeds: Vec<u64> = (0..400).map(|i| path_seed(77, 0, i)).collect();
        let est = estimate_v_ho(&inst, &seeds).unwrap();
        let v_dlp = solve_dlp(&inst).unwrap().value;
        assert!(
            v_dlp >= est.mean - 3.0 * est.std_err,
            "b={b}: {v_dlp} vs {est:?}"
        );
    }
    assert!(estimate_v_ho(&two_class(1.0, 10.0), &[1]).is_err());
}

#[test]
fn single_class_v_ho_estimate_matches_closed_form() {
    let horizon = 200.0;
    let inst = Instance::new(
        horizon,
        vec![1.0],
        vec![1.0],
        Matrix::from_rows(&[vec![1.0]]).unwrap(),
        vec![horizon],
    )
    .unwrap();
    let seeds: Vec<u64> = (0..2000).map(|i| path_seed(3, 0, i)).collect();
    let est = estimate_v_ho(&inst, &seeds).unwrap();
    let exact = single_class_exact_optimum(1.0, 1.0, horizon, horizon).unwrap();
    assert!(
        (est.mean - exact).abs() <= 3.5 * est.std_err,
        "{est:?} vs {exact}"
    );
}
