//! Dense Hamiltonian of the open tilted-field chain, its bit-reversal
//! parity sectors, and the ferro/antiferro duality.

use faer::{Mat, MatRef};
use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{invalid, Result};
use crate::spectra;
use crate::state::{bit_reverse_index, ChainParams};

/// Real symmetric `2^L × 2^L` matrix of `H(J, B, θ)` in the computational
/// basis.
#[derive(Debug, Clone)]
pub struct HamiltonianMatrix {
    params: ChainParams,
    matrix: Mat<f64>,
}

impl HamiltonianMatrix {
    pub fn params(&self) -> &ChainParams {
        &self.params
    }

    pub fn matrix(&self) -> MatRef<'_, f64> {
        self.matrix.as_ref()
    }

    pub fn into_matrix(self) -> Mat<f64> {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }
}

/// Diagonal element `J Σ zₙzₙ₊₁ + B cos θ Σ zₙ` of basis state `index`.
pub fn diagonal_energy(index: usize, params: &ChainParams) -> f64 {
    let len = params.len;
    let z = |n: usize| 1.0 - 2.0 * ((index >> (len - n)) & 1) as f64;
    let bond: f64 = (1..len).map(|n| z(n) * z(n + 1)).sum();
    let mag: f64 = (1..=len).map(z).sum();
    params.coupling * bond + params.field * params.theta.cos() * mag
}

/// Builds `H(J, B, θ)` with open boundaries. Every off-diagonal element is
/// written to both triangles from the same value, so the result is exactly
/// symmetric.
pub fn build_hamiltonian(params: &ChainParams) -> Result<HamiltonianMatrix> {
    if params.len == 0 {
        return invalid("chain length must be at least 1");
    }
    let dim = params.dim();
    let flip = params.field * params.theta.sin();
    let mut matrix = Mat::<f64>::zeros(dim, dim);
    for k in 0..dim {
        matrix[(k, k)] = diagonal_energy(k, params);
        for bit in 0..params.len {
            let m = k ^ (1 << bit);
            if m > k {
                matrix[(k, m)] = flip;
                matrix[(m, k)] = flip;
            }
        }
    }
    Ok(HamiltonianMatrix {
        params: *params,
        matrix,
    })
}

/// Bit-reversal parity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn sign(self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }
}

/// One orthonormal sector basis vector: a palindrome `|s⟩`, or
/// `(|s⟩ ± |Bs⟩)/√2` with `s < Bs`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SectorVector {
    Palindrome(usize),
    Pair { low: usize, high: usize, sign: f64 },
}

impl SectorVector {
    /// Nonzero `(index, coefficient)` entries.
    pub fn components(&self) -> impl Iterator<Item = (usize, f64)> {
        let (first, second) = match *self {
            SectorVector::Palindrome(s) => ((s, 1.0), None),
            SectorVector::Pair { low, high, sign } => {
                ((low, FRAC_1_SQRT_2), Some((high, sign * FRAC_1_SQRT_2)))
            }
        };
        std::iter::once(first).chain(second)
    }
}

/// Orthonormal basis of one bit-reversal parity sector. Ordering: palindromes
/// by ascending index, then pairs ascending by their smaller index.
#[derive(Debug, Clone)]
pub struct SymmetrySector {
    parity: Parity,
    len: usize,
    vectors: Vec<SectorVector>,
}

impl SymmetrySector {
    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn num_sites(&self) -> usize {
        self.len
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[SectorVector] {
        &self.vectors
    }

    /// Dense `2^L × dim` isometry whose columns are the basis vectors.
    pub fn to_dense(&self) -> Mat<f64> {
        let mut v = Mat::<f64>::zeros(1 << self.len, self.dim());
        for (col, vec) in self.vectors.iter().enumerate() {
            for (row, x) in vec.components() {
                v[(row, col)] = x;
            }
        }
        v
    }

    /// Maps sector coordinates back to the full `2^L` space.
    pub fn lift(&self, coeffs: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; 1 << self.len];
        for (vec, &c) in self.vectors.iter().zip(coeffs) {
            for (row, x) in vec.components() {
                out[row] += c * x;
            }
        }
        out
    }

    /// Lifts every column of `coeffs` (`dim × n`) into the full space.
    pub fn lift_columns(&self, coeffs: MatRef<'_, f64>) -> Mat<f64> {
        let mut out = Mat::<f64>::zeros(1 << self.len, coeffs.ncols());
        for (a, vec) in self.vectors.iter().enumerate() {
            for (row, x) in vec.components() {
                for col in 0..coeffs.ncols() {
                    out[(row, col)] += x * coeffs[(a, col)];
                }
            }
        }
        out
    }
}

/// Expected `(even, odd)` sector dimensions, `(2^L ± 2^⌈L/2⌉)/2`.
pub fn sector_dims(len: usize) -> (usize, usize) {
    let full = 1usize << len;
    let palindromes = 1usize << len.div_ceil(2);
    ((full + palindromes) / 2, (full - palindromes) / 2)
}

/// Even and odd bit-reversal sectors of an `len`-site chain.
pub fn build_sectors(len: usize) -> Result<(SymmetrySector, SymmetrySector)> {
    if len == 0 {
        return invalid("chain length must be at least 1");
    }
    let dim = 1usize << len;
    let mut even = Vec::new();
    let mut odd = Vec::new();
    let mut pairs = Vec::new();
    for s in 0..dim {
        let r = bit_reverse_index(s, len);
        if r == s {
            even.push(SectorVector::Palindrome(s));
        } else if s < r {
            pairs.push((s, r));
        }
    }
    for &(low, high) in &pairs {
        even.push(SectorVector::Pair {
            low,
            high,
            sign: 1.0,
        });
        odd.push(SectorVector::Pair {
            low,
            high,
            sign: -1.0,
        });
    }
    Ok((
        SymmetrySector {
            parity: Parity::Even,
            len,
            vectors: even,
        },
        SymmetrySector {
            parity: Parity::Odd,
            len,
            vectors: odd,
        },
    ))
}

fn coupling_block(h: MatRef<'_, f64>, left: &SymmetrySector, right: &SymmetrySector) -> Mat<f64> {
    let mut out = Mat::<f64>::zeros(left.dim(), right.dim());
    for (a, va) in left.vectors.iter().enumerate() {
        for (b, vb) in right.vectors.iter().enumerate() {
            let mut acc = 0.0;
            for (i, x) in va.components() {
                for (j, y) in vb.components() {
                    acc += x * h[(i, j)] * y;
                }
            }
            out[(a, b)] = acc;
        }
    }
    out
}

/// `Vᵀ H V` for the sector isometry `V`. Built from the upper triangle and
/// mirrored, so the block is exactly symmetric.
pub fn project_to_sector(h: &HamiltonianMatrix, sector: &SymmetrySector) -> Result<Mat<f64>> {
    if sector.len != h.params.len {
        return invalid(format!(
            "sector built for {} sites, Hamiltonian has {}",
            sector.len, h.params.len
        ));
    }
    let m = h.matrix();
    let d = sector.dim();
    let mut out = Mat::<f64>::zeros(d, d);
    for a in 0..d {
        let va = sector.vectors[a];
        for b in a..d {
            let vb = sector.vectors[b];
            let mut acc = 0.0;
            for (i, x) in va.components() {
                for (j, y) in vb.components() {
                    acc += x * m[(i, j)] * y;
                }
            }
            out[(a, b)] = acc;
            out[(b, a)] = acc;
        }
    }
    Ok(out)
}

/// Largest `|⟨even|H|odd⟩|` element; zero up to round-off when `[H, B] = 0`.
pub fn sector_coupling_norm(
    h: &HamiltonianMatrix,
    even: &SymmetrySector,
    odd: &SymmetrySector,
) -> Result<f64> {
    if even.len != h.params.len || odd.len != h.params.len {
        return invalid("sectors and Hamiltonian disagree on chain length");
    }
    let block = coupling_block(h.matrix(), even, odd);
    Ok(max_abs(block.as_ref()))
}

/// `‖HR − RH‖_max` for the bit-reversal permutation `R`.
pub fn reversal_commutator_norm(h: &HamiltonianMatrix) -> f64 {
    let len = h.params.len;
    let m = h.matrix();
    let dim = h.dim();
    let mut err = 0.0f64;
    // (HR)_{ij} = H_{i,R(j)}, (RH)_{ij} = H_{R(i),j}
    for j in 0..dim {
        let rj = bit_reverse_index(j, len);
        for i in 0..dim {
            let ri = bit_reverse_index(i, len);
            err = err.max((m[(i, rj)] - m[(ri, j)]).abs());
        }
    }
    err
}

fn max_abs(m: MatRef<'_, f64>) -> f64 {
    let mut out = 0.0f64;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            out = out.max(m[(i, j)].abs());
        }
    }
    out
}

/// Chain length up to which [`duality_check`] also verifies the explicit
/// `⊗σʸ` conjugation element by element.
pub const EXPLICIT_DUALITY_MAX_LEN: usize = 6;

/// Deviation from `Y H(J) Y = −H(−J)` with `Y = ⊗σʸ`.
///
/// Compares the ascending spectrum of `H(J)` with the negated descending
/// spectrum of `H(−J)`; for short chains the matrix identity itself is
/// checked too. Returns the largest absolute deviation seen.
pub fn duality_check(params: &ChainParams) -> Result<f64> {
    let h = build_hamiltonian(params)?;
    let dual = build_hamiltonian(&params.with_coupling(-params.coupling))?;
    let ev = spectra::diagonalize(h.matrix(), false)?.values;
    let ev_dual = spectra::diagonalize(dual.matrix(), false)?.values;
    let n = ev.len();
    let mut dev = (0..n)
        .map(|k| (ev[k] + ev_dual[n - 1 - k]).abs())
        .fold(0.0f64, f64::max);
    if params.len <= EXPLICIT_DUALITY_MAX_LEN {
        dev = dev.max(conjugation_deviation(&h, &dual));
    }
    Ok(dev)
}

/// `max |(Y H Y)_{kl} + H'_{kl}|`. With `Y|l⟩ = iᴸ (−1)^{|l|} |l̄⟩`, the phases
/// reduce to `(YHY)_{kl} = (−1)^{|k|+|l|} H_{k̄ l̄}`.
fn conjugation_deviation(h: &HamiltonianMatrix, dual: &HamiltonianMatrix) -> f64 {
    let dim = h.dim();
    let mask = dim - 1;
    let m = h.matrix();
    let d = dual.matrix();
    let mut err = 0.0f64;
    for l in 0..dim {
        for k in 0..dim {
            let sign = if (k.count_ones() + l.count_ones()) % 2 == 0 {
                1.0
            } else {
                -1.0
            };
            let yhy = sign * m[(k ^ mask, l ^ mask)];
            err = err.max((yhy + d[(k, l)]).abs());
        }
    }
    err
}
