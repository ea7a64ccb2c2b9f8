//! Exact unitary evolution through one full eigendecomposition, and the
//! time-resolved entanglement observables.
//!
//! Times are in units of `1/J` with `ħ = 1`.

use faer::Mat;
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::FRAC_1_SQRT_2;

use crate::entanglement;
use crate::error::{invalid, Error, Result};
use crate::hamiltonian::build_hamiltonian;
use crate::spectra::diagonalize;
use crate::state::{site_shift, ChainParams, PureState};

pub const DEFAULT_DT: f64 = 0.04;
pub const DEFAULT_T_MAX: f64 = 40.0;
/// Largest tolerated drift of `‖ψ(t)‖` from 1.
pub const NORM_TOL: f64 = 1e-10;

/// `(|11⟩ + |00⟩)/√2` on sites `(i, j)`, every other site set to `filler`.
pub fn bell_pair_state(len: usize, i: usize, j: usize, filler: u8) -> Result<PureState> {
    if len < 2 {
        return invalid("a Bell pair needs at least two sites");
    }
    if !(1 <= i && i < j && j <= len) {
        return invalid(format!("Bell pair sites ({i}, {j}) must satisfy 1 ≤ i < j ≤ {len}"));
    }
    if filler > 1 {
        return invalid("filler bit must be 0 or 1");
    }
    let pair_mask = (1usize << site_shift(i, len)) | (1usize << site_shift(j, len));
    let rest = if filler == 1 {
        ((1usize << len) - 1) & !pair_mask
    } else {
        0
    };
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << len];
    amps[rest] = Complex64::new(FRAC_1_SQRT_2, 0.0);
    amps[rest | pair_mask] = Complex64::new(FRAC_1_SQRT_2, 0.0);
    PureState::new(len, amps)
}

/// `(|11⟩+|00⟩)/√2 ⊗ |1…1⟩`: one maximally entangled pair on sites 1 and 2,
/// all remaining spins down.
pub fn bell_seed_state(len: usize) -> Result<PureState> {
    if len < 3 {
        return invalid(format!("seed state needs at least 3 sites, got {len}"));
    }
    bell_pair_state(len, 1, 2, 1)
}

/// Which observables to record at every time point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Observables {
    pub nn_concurrence: bool,
    pub q: bool,
    pub total_tangle: bool,
    pub avg_nn_concurrence: bool,
}

impl Observables {
    pub fn all() -> Self {
        Self {
            nn_concurrence: true,
            q: true,
            total_tangle: true,
            avg_nn_concurrence: true,
        }
    }
}

impl Default for Observables {
    fn default() -> Self {
        Self::all()
    }
}

/// `count` times `0, dt, 2 dt, …` up to and including `t_max` (within
/// half a step).
pub fn time_grid(dt: f64, t_max: f64) -> Result<Vec<f64>> {
    if !(dt > 0.0 && dt.is_finite()) || !(t_max >= 0.0 && t_max.is_finite()) {
        return invalid("time step must be positive and t_max nonnegative");
    }
    let steps = (t_max / dt + 0.5).floor() as usize;
    Ok((0..=steps).map(|k| k as f64 * dt).collect())
}

#[derive(Debug, Clone)]
pub struct EvolutionPlan {
    pub params: ChainParams,
    pub initial: PureState,
    pub times: Vec<f64>,
    pub observables: Observables,
    /// Resource guard on the chain length.
    pub max_len: usize,
}

impl EvolutionPlan {
    pub fn new(params: ChainParams, initial: PureState, times: Vec<f64>) -> Result<Self> {
        if initial.num_sites() != params.len {
            return invalid(format!(
                "initial state has {} sites, chain has {}",
                initial.num_sites(),
                params.len
            ));
        }
        if (initial.norm_sqr() - 1.0).abs() > NORM_TOL {
            return invalid("initial state is not normalized");
        }
        if times.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
            return invalid("times must be finite and nonnegative");
        }
        if times.windows(2).any(|w| w[1] < w[0]) {
            return invalid("times must be ascending");
        }
        Ok(Self {
            params,
            initial,
            times,
            observables: Observables::all(),
            max_len: crate::max_chain_len(),
        })
    }
}

/// `e^{−iHt}` through the full eigendecomposition of `H`.
#[derive(Debug, Clone)]
pub struct Propagator {
    params: ChainParams,
    energies: Vec<f64>,
    vectors: Mat<f64>,
}

impl Propagator {
    pub fn new(params: &ChainParams, max_len: usize) -> Result<Self> {
        if params.len > max_len {
            return Err(Error::Resource(format!(
                "L = {} exceeds the limit of {max_len} (set {} to raise it)",
                params.len,
                crate::MAX_LEN_ENV
            )));
        }
        let h = build_hamiltonian(params)?;
        let sys = diagonalize(h.matrix(), true)?;
        Ok(Self {
            params: *params,
            energies: sys.values,
            vectors: sys.vectors.expect("vectors were requested"),
        })
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    /// Eigenbasis coefficients `⟨k|ψ⟩`.
    pub fn coefficients(&self, psi: &PureState) -> Result<Vec<Complex64>> {
        if psi.num_sites() != self.params.len {
            return invalid("state and propagator disagree on chain length");
        }
        let dim = psi.dim();
        let amps = psi.amplitudes();
        let split = Mat::from_fn(dim, 2, |i, c| if c == 0 { amps[i].re } else { amps[i].im });
        let proj = self.vectors.transpose() * &split;
        Ok((0..dim)
            .map(|k| Complex64::new(proj[(k, 0)], proj[(k, 1)]))
            .collect())
    }

    /// `Σ_k e^{−iE_k t} c_k |k⟩` for precomputed coefficients.
    pub fn state_from_coefficients(&self, coeffs: &[Complex64], t: f64) -> Result<PureState> {
        let dim = coeffs.len();
        let phased = Mat::from_fn(dim, 2, |k, c| {
            let z = coeffs[k] * Complex64::from_polar(1.0, -self.energies[k] * t);
            if c == 0 {
                z.re
            } else {
                z.im
            }
        });
        let out = &self.vectors * &phased;
        PureState::new(
            self.params.len,
            (0..dim).map(|i| Complex64::new(out[(i, 0)], out[(i, 1)])).collect(),
        )
    }

    /// `e^{−iHt}|ψ⟩`; `t` may be negative.
    pub fn evolve_state(&self, psi: &PureState, t: f64) -> Result<PureState> {
        let c = self.coefficients(psi)?;
        self.state_from_coefficients(&c, t)
    }
}

/// Observables of one time point; fields not requested are `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeRecord {
    pub time: f64,
    pub norm: f64,
    /// `c_l` for pairs `(l, l+1)`, `l = 1..L−1`.
    pub nn_concurrence: Option<Vec<f64>>,
    pub avg_nn_concurrence: Option<f64>,
    pub q: Option<f64>,
    pub total_tangle: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct TimeSeries {
    pub params: ChainParams,
    pub records: Vec<TimeRecord>,
}

impl TimeSeries {
    pub fn times(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.time).collect()
    }

    pub fn avg_nn_concurrence(&self) -> Option<Vec<f64>> {
        self.records.iter().map(|r| r.avg_nn_concurrence).collect()
    }

    pub fn q(&self) -> Option<Vec<f64>> {
        self.records.iter().map(|r| r.q).collect()
    }

    pub fn total_tangle(&self) -> Option<Vec<f64>> {
        self.records.iter().map(|r| r.total_tangle).collect()
    }
}

fn measure(psi: &PureState, time: f64, obs: Observables) -> Result<TimeRecord> {
    let nn = if obs.nn_concurrence || obs.avg_nn_concurrence {
        Some(entanglement::nearest_neighbor_concurrences(psi)?)
    } else {
        None
    };
    let avg = match (&nn, obs.avg_nn_concurrence) {
        (Some(c), true) if !c.is_empty() => Some(c.iter().sum::<f64>() / c.len() as f64),
        (Some(_), true) => Some(0.0),
        _ => None,
    };
    Ok(TimeRecord {
        time,
        norm: psi.norm_sqr().sqrt(),
        nn_concurrence: if obs.nn_concurrence { nn } else { None },
        avg_nn_concurrence: avg,
        q: obs.q.then(|| entanglement::q_measure(psi)),
        total_tangle: if obs.total_tangle {
            Some(entanglement::total_tangle(psi)?)
        } else {
            None
        },
    })
}

/// Evolves `plan.initial` under `H(plan.params)` and records the requested
/// observables at every grid time. The decomposition is computed once and
/// time points are processed in parallel.
pub fn evolve(plan: &EvolutionPlan) -> Result<TimeSeries> {
    let prop = Propagator::new(&plan.params, plan.max_len)?;
    let coeffs = prop.coefficients(&plan.initial)?;
    let records = plan
        .times
        .par_iter()
        .map(|&t| {
            let psi = if t == 0.0 {
                plan.initial.clone()
            } else {
                prop.state_from_coefficients(&coeffs, t)?
            };
            let rec = measure(&psi, t, plan.observables)?;
            if (rec.norm - 1.0).abs() > NORM_TOL {
                return Err(Error::Numerical(format!(
                    "norm drifted to {} at t = {t}",
                    rec.norm
                )));
            }
            Ok(rec)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TimeSeries {
        params: plan.params,
        records,
    })
}

/// First grid time `t*` after which the average nearest-neighbour
/// concurrence stays strictly below `threshold` for every grid time in
/// `[t*, t* + window]`. The window must fit inside the series; `None` means
/// the series never quenches.
pub fn quench_time(series: &TimeSeries, threshold: f64, window: f64) -> Result<Option<f64>> {
    let avg = series
        .avg_nn_concurrence()
        .ok_or_else(|| Error::InvalidInput("series lacks the average NN concurrence".into()))?;
    if !(window >= 0.0) {
        return invalid("quench window must be nonnegative");
    }
    let times = series.times();
    let Some(&t_end) = times.last() else {
        return Ok(None);
    };
    // eps guards against accumulated grid round-off in t* + window
    let eps = 1e-9 * window.max(1.0);
    let mut start: Option<usize> = None;
    for (i, (&t, &c)) in times.iter().zip(&avg).enumerate() {
        if c < threshold {
            let s = *start.get_or_insert(i);
            if t - times[s] >= window - eps {
                return Ok(Some(times[s]));
            }
        } else {
            start = None;
        }
        if let Some(s) = start {
            if times[s] + window > t_end + eps {
                return Ok(None);
            }
        }
    }
    Ok(None)
}
