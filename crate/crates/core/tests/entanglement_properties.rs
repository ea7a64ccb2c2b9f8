mod common;

use common::*;
use faer::Mat;
use proptest::prelude::*;
use tilted_ising::entanglement::{
    concurrence, entropy_block, measure_all, pair_concurrence, q_measure, site_purities, total_tangle,
};
use tilted_ising::state::{partial_trace, partial_trace_pair, ReducedDensityMatrix, SiteSubset};
use tilted_ising::Complex64;

fn max_diff(a: &Mat<Complex64>, b: &Dense) -> f64 {
    let mut m: f64 = 0.0;
    for (i, row) in b.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            m = m.max((a[(i, j)] - v).norm());
        }
    }
    m
}

fn subset_strategy() -> impl Strategy<Value = (usize, Vec<usize>)> {
    (2usize..=5).prop_flat_map(|len| {
        proptest::sample::subsequence((1..=len).collect::<Vec<_>>(), 1..len).prop_map(move |s| (len, s))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn partial_trace_matches_enumeration((len, keep) in subset_strategy(), seed in any::<u64>()) {
        let psi = random_state(&mut rng(seed), len);
        let fast = partial_trace(&psi, &SiteSubset::new(keep.clone(), len).unwrap()).unwrap();
        let slow = brute_partial_trace(&psi, &keep);
        prop_assert!(max_diff(fast.matrix(), &slow) < 1e-12);
        prop_assert!((fast.trace() - 1.0).abs() < 1e-12);
        prop_assert_eq!(fast.hermiticity_error(), 0.0);
    }

    #[test]
    fn nested_traces_are_consistent((len, keep) in subset_strategy(), seed in any::<u64>()) {
        // tracing a mixture of two pure states equals mixing their traces
        let mut r = rng(seed);
        let (a, b) = (random_state(&mut r, len), random_state(&mut r, len));
        let p = 0.3;
        let (pa, pb) = (projector(&a), projector(&b));
        let mixed: Dense = pa.iter().zip(&pb)
            .map(|(x, y)| x.iter().zip(y).map(|(u, v)| u * p + v * (1.0 - p)).collect())
            .collect();
        let direct = brute_partial_trace_mixed(&mixed, len, &keep);
        let sub = SiteSubset::new(keep, len).unwrap();
        let ra = partial_trace(&a, &sub).unwrap();
        let rb = partial_trace(&b, &sub).unwrap();
        let combined = Mat::from_fn(ra.dim(), ra.dim(), |i, j| ra.matrix()[(i, j)] * p + rb.matrix()[(i, j)] * (1.0 - p));
        prop_assert!(max_diff(&combined, &direct) < 1e-12);
    }

    #[test]
    fn schmidt_symmetry(len in 2usize..=9, seed in any::<u64>()) {
        let psi = random_state(&mut rng(seed), len);
        for l in 1..len {
            let left = entropy_block(&psi, l).unwrap();
            let right: Vec<usize> = (l + 1..=len).collect();
            let rho = partial_trace(&psi, &SiteSubset::new(right, len).unwrap()).unwrap();
            prop_assert!((left - rho.entropy_bits().unwrap()).abs() < 1e-10);
            prop_assert!(left >= -1e-12 && left <= l.min(len - l) as f64 + 1e-10);
        }
    }

    #[test]
    fn concurrence_is_swap_invariant(len in 2usize..=6, seed in any::<u64>()) {
        let psi = random_state(&mut rng(seed), len);
        for i in 1..len {
            for j in i + 1..=len {
                let rho = partial_trace_pair(&psi, i, j).unwrap();
                let m = rho.matrix();
                let swap = |k: usize| ((k & 1) << 1) | (k >> 1);
                let swapped = Mat::from_fn(4, 4, |a, b| m[(swap(a), swap(b))]);
                let sites = rho.sites().clone();
                let c1 = concurrence(&rho).unwrap();
                let c2 = concurrence(&ReducedDensityMatrix::from_matrix(sites, swapped).unwrap()).unwrap();
                prop_assert!((c1 - c2).abs() < 1e-10);
                prop_assert!((0.0..=1.0).contains(&c1));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn monogamy_and_q_tangle_bound(len in 2usize..=8, seed in any::<u64>(), product_mix in 0.0f64..1.0) {
        // blend Haar and near-product states so weakly entangled inputs are covered
        let mut r = rng(seed);
        let psi = if product_mix < 0.3 { random_product_state(&mut r, len) } else { random_state(&mut r, len) };
        let purities = site_purities(&psi);
        let mut tangle = 0.0;
        let mut c = vec![vec![0.0; len + 1]; len + 1];
        for i in 1..len {
            for j in i + 1..=len {
                let v = pair_concurrence(&psi, i, j).unwrap();
                c[i][j] = v;
                c[j][i] = v;
                tangle += v * v;
            }
        }
        for i in 1..=len {
            let sum: f64 = (1..=len).filter(|&j| j != i).map(|j| c[i][j] * c[i][j]).sum();
            prop_assert!(sum <= 2.0 * (1.0 - purities[i - 1]) + 1e-10, "site {} sum {} bound {}", i, sum, 2.0 * (1.0 - purities[i - 1]));
        }
        let q = q_measure(&psi);
        prop_assert!(q >= 2.0 / len as f64 * tangle - 1e-10);
        prop_assert!((total_tangle(&psi).unwrap() - tangle).abs() < 1e-12);
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&q));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn local_unitaries_leave_entanglement_unchanged(len in 2usize..=7, seed in any::<u64>()) {
        let mut r = rng(seed);
        let psi = random_state(&mut r, len);
        let mut moved = psi.clone();
        for site in 1..=len {
            moved = apply_single_site(&moved, site, &random_unitary_2(&mut r));
        }
        let (a, b) = (measure_all(&psi).unwrap(), measure_all(&moved).unwrap());
        prop_assert!((a.q - b.q).abs() < 1e-10);
        prop_assert!((a.total_tangle - b.total_tangle).abs() < 1e-10);
        for (x, y) in a.s_l.iter().zip(&b.s_l) {
            prop_assert!((x - y).abs() < 1e-10);
        }
        prop_assert!((a.s_half.unwrap() - b.s_half.unwrap()).abs() < 1e-10);
        for (ra, rb) in a.concurrence.iter().zip(&b.concurrence) {
            for (x, y) in ra.iter().zip(rb) {
                prop_assert!((x - y).abs() < 1e-10);
            }
        }
    }
}

#[test]
fn page_average_of_random_states() {
    let mut r = rng(20_240_601);
    let draws = 100;
    let mean = (0..draws)
        .map(|_| entropy_block(&random_state(&mut r, 10), 5).unwrap())
        .sum::<f64>()
        / draws as f64;
    let page = 5.0 - 1.0 / (2.0 * std::f64::consts::LN_2);
    assert!((mean - page).abs() < 0.05, "mean {mean} vs Page {page}");
}

#[test]
fn werner_concurrence_matches_closed_form() {
    let sites = SiteSubset::new(vec![1, 2], 2).unwrap();
    for k in 0..=20 {
        let p = k as f64 / 20.0;
        let m = Mat::from_fn(4, 4, |i, j| {
            let bell = if (i == 0 || i == 3) && (j == 0 || j == 3) { 0.5 } else { 0.0 };
            let id = if i == j { 0.25 } else { 0.0 };
            Complex64::new(p * bell + (1.0 - p) * id, 0.0)
        });
        let c = concurrence(&ReducedDensityMatrix::from_matrix(sites.clone(), m).unwrap()).unwrap();
        assert!((c - (1.5 * p - 0.5).max(0.0)).abs() < 1e-10, "p = {p}: {c}");
    }
}
