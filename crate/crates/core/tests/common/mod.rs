//! Independent oracles shared by the integration suites.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use tilted_ising::state::{ChainParams, PureState};
use tilted_ising::Complex64;

pub type Dense = Vec<Vec<Complex64>>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    rng.sample(StandardNormal)
}

/// Haar-random pure state from i.i.d. complex Gaussian amplitudes.
pub fn random_state(rng: &mut ChaCha8Rng, len: usize) -> PureState {
    let amps: Vec<Complex64> = (0..1usize << len)
        .map(|_| Complex64::new(gaussian(rng), gaussian(rng)))
        .collect();
    PureState::new(len, amps).unwrap().normalized().unwrap()
}

/// Random product of single-qubit states.
pub fn random_product_state(rng: &mut ChaCha8Rng, len: usize) -> PureState {
    let mut amps = vec![Complex64::new(1.0, 0.0)];
    for _ in 0..len {
        let a = Complex64::new(gaussian(rng), gaussian(rng));
        let b = Complex64::new(gaussian(rng), gaussian(rng));
        amps = amps.iter().flat_map(|&x| [x * a, x * b]).collect();
    }
    PureState::new(len, amps).unwrap().normalized().unwrap()
}

/// Bit of `site` (1-based, site 1 most significant) in basis index `k`.
pub fn bit(k: usize, site: usize, len: usize) -> usize {
    (k >> (len - site)) & 1
}

/// `ρ_A` by explicit enumeration of every pair of basis states that agree
/// outside `keep`.
pub fn brute_partial_trace(psi: &PureState, keep: &[usize]) -> Dense {
    let len = psi.num_sites();
    let a = psi.amplitudes();
    let d = 1usize << keep.len();
    let sub = |k: usize| keep.iter().fold(0, |acc, &s| (acc << 1) | bit(k, s, len));
    let env = |k: usize| {
        (1..=len)
            .filter(|s| !keep.contains(s))
            .fold(0, |acc, s| (acc << 1) | bit(k, s, len))
    };
    let mut rho = vec![vec![Complex64::new(0.0, 0.0); d]; d];
    for k in 0..a.len() {
        for l in 0..a.len() {
            if env(k) == env(l) {
                rho[sub(k)][sub(l)] += a[k] * a[l].conj();
            }
        }
    }
    rho
}

/// Partial trace of a mixed state `rho` (full space) over every site not in `keep`.
pub fn brute_partial_trace_mixed(rho: &Dense, len: usize, keep: &[usize]) -> Dense {
    let d = 1usize << keep.len();
    let sub = |k: usize| keep.iter().fold(0, |acc, &s| (acc << 1) | bit(k, s, len));
    let env = |k: usize| {
        (1..=len)
            .filter(|s| !keep.contains(s))
            .fold(0, |acc, s| (acc << 1) | bit(k, s, len))
    };
    let mut out = vec![vec![Complex64::new(0.0, 0.0); d]; d];
    for (k, row) in rho.iter().enumerate() {
        for (l, v) in row.iter().enumerate() {
            if env(k) == env(l) {
                out[sub(k)][sub(l)] += v;
            }
        }
    }
    out
}

pub fn projector(psi: &PureState) -> Dense {
    let a = psi.amplitudes();
    a.iter().map(|x| a.iter().map(|y| x * y.conj()).collect()).collect()
}

/// Haar-ish random SU(2) element from a normalized quaternion.
pub fn random_unitary_2(rng: &mut ChaCha8Rng) -> [[Complex64; 2]; 2] {
    let q: [f64; 4] = std::array::from_fn(|_| gaussian(rng));
    let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
    let (a, b) = (Complex64::new(q[0] / n, q[1] / n), Complex64::new(q[2] / n, q[3] / n));
    [[a, -b.conj()], [b, a.conj()]]
}

pub fn apply_single_site(psi: &PureState, site: usize, u: &[[Complex64; 2]; 2]) -> PureState {
    let len = psi.num_sites();
    let shift = len - site;
    let a = psi.amplitudes();
    let mut out = a.to_vec();
    for k in 0..a.len() {
        if (k >> shift) & 1 == 0 {
            let k1 = k | (1 << shift);
            out[k] = u[0][0] * a[k] + u[0][1] * a[k1];
            out[k1] = u[1][0] * a[k] + u[1][1] * a[k1];
        }
    }
    PureState::new(len, out).unwrap()
}

/// `H(params)` assembled directly from Pauli actions on basis states.
pub fn oracle_hamiltonian(p: &ChainParams) -> Vec<Vec<f64>> {
    let len = p.len;
    let dim = 1usize << len;
    let z = |k: usize, s: usize| if bit(k, s, len) == 0 { 1.0 } else { -1.0 };
    let mut h = vec![vec![0.0; dim]; dim];
    for (k, row) in h.iter_mut().enumerate() {
        for s in 1..len {
            row[k] += p.coupling * z(k, s) * z(k, s + 1);
        }
        for s in 1..=len {
            row[k] += p.field * p.theta.cos() * z(k, s);
            row[k ^ (1 << (len - s))] += p.field * p.theta.sin();
        }
    }
    h
}

fn apply_dense(h: &[Vec<f64>], v: &[Complex64]) -> Vec<Complex64> {
    h.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| b * a).sum())
        .collect()
}

/// Classical RK4 integration of `i dψ/dt = H ψ`.
pub fn rk4_evolve(h: &[Vec<f64>], psi: &[Complex64], t: f64, step: f64) -> Vec<Complex64> {
    let mi = Complex64::new(0.0, -1.0);
    let f = |v: &[Complex64]| -> Vec<Complex64> { apply_dense(h, v).into_iter().map(|x| mi * x).collect() };
    let axpy = |v: &[Complex64], k: &[Complex64], s: f64| -> Vec<Complex64> {
        v.iter().zip(k).map(|(a, b)| a + b * s).collect()
    };
    let steps = (t / step).round() as usize;
    let dt = t / steps as f64;
    let mut y = psi.to_vec();
    for _ in 0..steps {
        let k1 = f(&y);
        let k2 = f(&axpy(&y, &k1, dt / 2.0));
        let k3 = f(&axpy(&y, &k2, dt / 2.0));
        let k4 = f(&axpy(&y, &k3, dt));
        for i in 0..y.len() {
            y[i] += (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (dt / 6.0);
        }
    }
    y
}

pub fn energy(h: &[Vec<f64>], psi: &[Complex64]) -> f64 {
    let hv = apply_dense(h, psi);
    psi.iter().zip(&hv).map(|(a, b)| (a.conj() * b).re).sum()
}

pub fn distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}

/// Eigenvalues of `(A + Aᵀ)/2` with i.i.d. standard normal `A`.
pub fn goe_eigenvalues(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let a: Vec<Vec<f64>> = (0..n).map(|_| (0..n).map(|_| gaussian(rng)).collect()).collect();
    let m = faer::Mat::from_fn(n, n, |i, j| 0.5 * (a[i][j] + a[j][i]));
    tilted_ising::spectra::diagonalize(m.as_ref(), false).unwrap().values
}

/// Integrated Wigner semicircle for off-diagonal variance 1/2 (radius √(2n)).
pub fn semicircle_staircase(e: f64, n: usize) -> f64 {
    let r = (2.0 * n as f64).sqrt();
    let x = (e / r).clamp(-1.0, 1.0);
    n as f64 * (0.5 + (x * (1.0 - x * x).sqrt() + x.asin()) / std::f64::consts::PI)
}

/// Unfolded spacings of the central half of each of `count` GOE matrices.
pub fn pooled_goe_spacings(seed: u64, n: usize, count: usize) -> Vec<f64> {
    let mut r = rng(seed);
    let mut out = Vec::new();
    for _ in 0..count {
        let ev = goe_eigenvalues(&mut r, n);
        let u: Vec<f64> = ev.iter().map(|&e| semicircle_staircase(e, n)).collect();
        let (lo, hi) = (n / 4, 3 * n / 4);
        out.extend(u[lo..hi].windows(2).map(|w| w[1] - w[0]));
    }
    out
}

pub fn exponential_sample(seed: u64, n: usize) -> Vec<f64> {
    let mut r = rng(seed);
    let exp = rand_distr::Exp1;
    (0..n).map(|_| r.sample::<f64, _>(exp)).collect()
}
