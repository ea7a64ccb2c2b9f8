//! Entanglement and localization measures of pure chain states.
//!
//! Entanglement entropies are reported in bits, so a Bell pair across the
//! cut scores exactly 1. The localization measures (log participation ratio
//! and Shannon entropy of `|ψ_k|²`) use natural logarithms and are bounded by
//! `L ln 2`.

use faer::{Mat, Side};
use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::state::{reduce, PureState, ReducedDensityMatrix, SiteSubset};

/// Probabilities below this contribute nothing to the Shannon entropy.
pub const SHANNON_CUTOFF: f64 = 1e-16;

/// Von Neumann entropy (bits) of the leftmost `l` sites.
///
/// The reduced matrix is formed on whichever side of the cut is smaller;
/// both sides share their nonzero spectrum for a pure state.
pub fn entropy_block(psi: &PureState, l: usize) -> Result<f64> {
    let len = psi.num_sites();
    if l == 0 || l >= len {
        return invalid(format!("block size {l} must lie in 1..{len}"));
    }
    let sites: Vec<usize> = if l <= len - l {
        (1..=l).collect()
    } else {
        (l + 1..=len).collect()
    };
    let matrix = reduce(psi, &sites);
    let rho = ReducedDensityMatrix::from_parts(SiteSubset::new(sites, len)?, matrix);
    rho.entropy_bits()
}

/// Diagonal signs of σʸ⊗σʸ, whose only nonzero entries sit at `(a, 3 − a)`.
const FLIP_SIGN: [f64; 4] = [-1.0, 1.0, 1.0, -1.0];

/// Wootters concurrence of a two-qubit density matrix,
/// `max(0, √λ₁ − √λ₂ − √λ₃ − √λ₄)` with `λ` the eigenvalues of `ρ ρ̃`.
pub fn concurrence(rho: &ReducedDensityMatrix) -> Result<f64> {
    if rho.dim() != 4 {
        return invalid(format!("concurrence needs a 4x4 matrix, got {}", rho.dim()));
    }
    if rho.hermiticity_error() > crate::state::DENSITY_TOL {
        return invalid("density matrix is not Hermitian");
    }
    if (rho.trace() - 1.0).abs() > crate::state::DENSITY_TOL {
        return invalid(format!("density matrix has trace {}", rho.trace()));
    }
    concurrence_of(rho.matrix())
}

// √λᵢ are the singular values of τ_ij = √(p_i p_j) v_iᵀ (σʸ⊗σʸ) v_j built
// from ρ = Σ p_i v_i v_i†; unlike the non-Hermitian product ρρ̃ this stays
// accurate when ρ is (nearly) rank deficient.
fn concurrence_of(rho: &Mat<Complex64>) -> Result<f64> {
    let evd = rho
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Numerical(format!("concurrence eigensolve: {e:?}")))?;
    let u = evd.U();
    let w: Vec<f64> = (0..4).map(|k| evd.S()[k].re.max(0.0).sqrt()).collect();
    let tau = Mat::from_fn(4, 4, |i, j| {
        let overlap: Complex64 = (0..4).map(|a| u[(a, i)] * u[(3 - a, j)] * FLIP_SIGN[a]).sum();
        overlap * (w[i] * w[j])
    });
    let sv = tau
        .singular_values()
        .map_err(|e| Error::Numerical(format!("concurrence SVD: {e:?}")))?;
    Ok((sv[0] - sv[1] - sv[2] - sv[3]).clamp(0.0, 1.0))
}

/// Concurrence of the two-site marginal on sites `i < j`.
pub fn pair_concurrence(psi: &PureState, i: usize, j: usize) -> Result<f64> {
    let rho = crate::state::partial_trace_pair(psi, i, j)?;
    concurrence_of(rho.matrix())
}

/// `Σ_{i<j} C²(ρ_ij)`.
pub fn total_tangle(psi: &PureState) -> Result<f64> {
    let len = psi.num_sites();
    let mut sum = 0.0;
    for i in 1..len {
        for j in i + 1..=len {
            let c = concurrence_of(&reduce(psi, &[i, j]))?;
            sum += c * c;
        }
    }
    Ok(sum)
}

/// Concurrences `c_l` of the nearest-neighbour pairs `(l, l+1)`.
pub fn nearest_neighbor_concurrences(psi: &PureState) -> Result<Vec<f64>> {
    let len = psi.num_sites();
    (1..len)
        .map(|l| concurrence_of(&reduce(psi, &[l, l + 1])))
        .collect()
}

/// Single-site purities `Tr ρ_k²`, `k = 1..L`.
pub fn site_purities(psi: &PureState) -> Vec<f64> {
    let len = psi.num_sites();
    (1..=len)
        .map(|k| {
            let r = reduce(psi, &[k]);
            r[(0, 0)].re.powi(2) + r[(1, 1)].re.powi(2) + 2.0 * r[(0, 1)].norm_sqr()
        })
        .collect()
}

fn q_from_purities(purities: &[f64]) -> f64 {
    let mean = purities.iter().sum::<f64>() / purities.len() as f64;
    (2.0 * (1.0 - mean)).clamp(0.0, 1.0)
}

/// Meyer–Wallach `Q = 2(1 − (1/L) Σ_k Tr ρ_k²)`.
pub fn q_measure(psi: &PureState) -> f64 {
    q_from_purities(&site_purities(psi))
}

/// Spread of a state over the computational basis, in nats.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Localization {
    /// `−ln Σ_k |ψ_k|⁴`
    pub log_pr: f64,
    /// `−Σ_k |ψ_k|² ln |ψ_k|²`
    pub shannon: f64,
}

pub fn localization(psi: &PureState) -> Localization {
    let mut ipr = 0.0;
    let mut shannon = 0.0;
    for a in psi.amplitudes() {
        let p = a.norm_sqr();
        ipr += p * p;
        if p >= SHANNON_CUTOFF {
            shannon -= p * p.ln();
        }
    }
    Localization {
        log_pr: (-ipr.ln()).max(0.0),
        shannon: shannon.max(0.0),
    }
}

/// Every measure of one state.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureSet {
    /// `S_{⌊L/2⌋}` in bits; `None` for a single site.
    pub s_half: Option<f64>,
    /// `S_l` of the first `l` sites, `l = 1..L−1`, in bits.
    pub s_l: Vec<f64>,
    pub q: f64,
    pub total_tangle: f64,
    /// Symmetric `L × L` pairwise concurrences with zero diagonal.
    pub concurrence: Vec<Vec<f64>>,
    pub log_pr: f64,
    pub shannon: f64,
}

/// Computes all measures; each two-site marginal is formed once and also
/// supplies the single-site purities.
pub fn measure_all(psi: &PureState) -> Result<MeasureSet> {
    let len = psi.num_sites();
    let mut concurrence = vec![vec![0.0; len]; len];
    let mut purities = vec![0.0; len];
    let mut total = 0.0;
    if len == 1 {
        purities = site_purities(psi);
    }
    for i in 1..len {
        for j in i + 1..=len {
            let rho = reduce(psi, &[i, j]);
            let c = concurrence_of(&rho)?;
            concurrence[i - 1][j - 1] = c;
            concurrence[j - 1][i - 1] = c;
            total += c * c;
            if j == i + 1 {
                if i == 1 {
                    purities[0] = marginal_purity(&rho, 0);
                }
                purities[j - 1] = marginal_purity(&rho, 1);
            }
        }
    }
    let s_l = (1..len)
        .map(|l| entropy_block(psi, l))
        .collect::<Result<Vec<_>>>()?;
    let s_half = (len >= 2).then(|| s_l[len / 2 - 1]);
    let loc = localization(psi);
    Ok(MeasureSet {
        s_half,
        s_l,
        q: q_from_purities(&purities),
        total_tangle: total,
        concurrence,
        log_pr: loc.log_pr,
        shannon: loc.shannon,
    })
}

/// Purity of one qubit of a two-qubit matrix; `which = 0` keeps the first.
fn marginal_purity(rho: &Mat<Complex64>, which: usize) -> f64 {
    let idx = |a: usize, b: usize| if which == 0 { 2 * a + b } else { 2 * b + a };
    let mut m = [[Complex64::new(0.0, 0.0); 2]; 2];
    for a in 0..2 {
        for a2 in 0..2 {
            for other in 0..2 {
                m[a][a2] += rho[(idx(a, other), idx(a2, other))];
            }
        }
    }
    m[0][0].re.powi(2) + m[1][1].re.powi(2) + 2.0 * m[0][1].norm_sqr()
}
