mod common;

use common::sq_dist;
use fairkm_core::synthetic::gaussian_blobs;
use fairkm_core::{
    init_centroids, run_kmeans, ss_decomposition, InitMethod, RunConfig,
};

#[test]
fn objective_history_never_increases() {
    for seed in 0..20 {
        let p = gaussian_blobs(
            &[vec![0.0, 0.0], vec![3.0, 0.0], vec![0.0, 3.0], vec![3.0, 3.0]],
            40,
            1.2,
            seed,
        )
        .unwrap();
        for init in [InitMethod::RandomPoints, InitMethod::KMeansPlusPlus] {
            let out = run_kmeans(&p.dataset, &RunConfig::new(5).with_seed(seed).with_init(init)).unwrap();
            for w in out.history.windows(2) {
                assert!(w[1] <= w[0] * (1.0 + 1e-12), "seed {seed}: {:?}", out.history);
            }
        }
    }
}

#[test]
fn objective_is_within_sum_of_squares_of_result() {
    let p = gaussian_blobs(&[vec![0.0; 3], vec![4.0; 3]], 60, 1.0, 5).unwrap();
    let out = run_kmeans(&p.dataset, &RunConfig::new(3).with_seed(9)).unwrap();
    let mut direct = 0.0;
    for (i, row) in p.dataset.rows().enumerate() {
        direct += sq_dist(row, out.centroids.row(out.assignment.cluster(i)));
    }
    assert!((out.objective - direct).abs() <= 1e-9 * direct);
    assert_eq!(out.objective, ss_decomposition(&p.dataset, &out.assignment).within);
}

#[test]
fn same_seed_same_result() {
    let p = gaussian_blobs(&[vec![0.0, 0.0], vec![2.0, 2.0]], 80, 1.0, 3).unwrap();
    let cfg = RunConfig::new(4).with_seed(17);
    let a = run_kmeans(&p.dataset, &cfg).unwrap();
    let b = run_kmeans(&p.dataset, &cfg).unwrap();
    assert_eq!(a.assignment, b.assignment);
    assert_eq!(a.history, b.history);
    assert_eq!(a.centroids, b.centroids);
}

#[test]
fn iteration_cap_is_respected() {
    let p = gaussian_blobs(&[vec![0.0, 0.0], vec![1.0, 1.0]], 200, 1.0, 8).unwrap();
    for cap in [1, 2, 3] {
        let out = run_kmeans(&p.dataset, &RunConfig::new(6).with_seed(1).with_max_kmeans_iters(cap)).unwrap();
        assert!(out.iterations <= cap);
        assert_eq!(out.assignment.sizes().iter().sum::<usize>(), 400);
    }
}

#[test]
fn planted_blobs_are_recovered() {
    for seed in 0..20 {
        let p = gaussian_blobs(&[vec![5.0, 5.0], vec![-5.0, -5.0]], 50, 0.5, seed).unwrap();
        let out = run_kmeans(&p.dataset, &RunConfig::new(2).with_seed(seed)).unwrap();
        assert!(out.converged);
        let first = out.assignment.cluster(0);
        for (i, &blob) in p.truth.iter().enumerate() {
            assert_eq!(out.assignment.cluster(i) == first, blob == 0, "seed {seed} point {i}");
        }
    }
}

#[test]
fn init_snapshot() {
    // frozen output of the seeded initializer; any change to the sampling
    // path shows up here
    let p = gaussian_blobs(&[vec![0.0, 0.0]], 100, 1.0, 11).unwrap();
    let c = init_centroids(&p.dataset, 3, 42).unwrap();
    let want = [
        [0.11671919407771109, -0.4152460160089841],
        [0.291777849426846, -1.174217887687013],
        [-0.8703231819406225, 0.27306835816320596],
    ];
    for (j, w) in want.iter().enumerate() {
        assert_eq!(c.row(j), w, "centroid {j}");
        assert!(p.dataset.rows().any(|r| r == w));
    }
}
