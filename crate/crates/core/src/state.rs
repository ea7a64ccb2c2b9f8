//! Basis conventions, pure states and partial traces.
//!
//! Site `n` (1-based, site 1 leftmost) occupies bit `L - n` of the basis
//! index, so site 1 is the most significant bit. Bit value 0 is the σᶻ = +1
//! state ("up"), bit value 1 is σᶻ = −1.

use faer::{Mat, Side};
use num_complex::Complex64;

use crate::error::{invalid, Error, Result};

/// Tolerance below which negative density-matrix eigenvalues are treated as
/// round-off and clipped to zero.
pub const EIGENVALUE_CLIP: f64 = 1e-10;

/// Tolerance used when validating user-supplied density matrices.
pub const DENSITY_TOL: f64 = 1e-10;

/// Parameters of the tilted-field chain: `J`, `B`, `θ` and the length `L`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainParams {
    pub len: usize,
    pub coupling: f64,
    pub field: f64,
    pub theta: f64,
}

impl ChainParams {
    pub fn new(len: usize, coupling: f64, field: f64, theta: f64) -> Result<Self> {
        if len == 0 {
            return invalid("chain length must be at least 1");
        }
        if len >= usize::BITS as usize - 1 {
            return invalid(format!("chain length {len} does not fit a basis index"));
        }
        if !(coupling.is_finite() && field.is_finite() && theta.is_finite()) {
            return invalid("J, B and theta must be finite");
        }
        Ok(Self {
            len,
            coupling,
            field,
            theta,
        })
    }

    /// `J = B = 1` at tilt `theta`.
    pub fn unit(len: usize, theta: f64) -> Result<Self> {
        Self::new(len, 1.0, 1.0, theta)
    }

    pub fn with_theta(self, theta: f64) -> Self {
        Self { theta, ..self }
    }

    pub fn with_coupling(self, coupling: f64) -> Self {
        Self { coupling, ..self }
    }

    /// Hilbert-space dimension `2^L`.
    pub fn dim(&self) -> usize {
        1 << self.len
    }
}

/// Bit position of 1-based `site` inside a basis index of an `len`-site chain.
#[inline]
pub fn site_shift(site: usize, len: usize) -> usize {
    len - site
}

/// Bit (0 or 1) of `site` in basis index `index`.
#[inline]
pub fn site_bit(index: usize, site: usize, len: usize) -> usize {
    (index >> site_shift(site, len)) & 1
}

/// Basis index of a spin configuration given as one bit per site, site 1
/// first.
pub fn basis_index(bits: &[u8], len: usize) -> Result<usize> {
    if bits.len() != len {
        return invalid(format!(
            "spin string has {} entries, chain has {len} sites",
            bits.len()
        ));
    }
    bits.iter().try_fold(0usize, |acc, &b| match b {
        0 | 1 => Ok((acc << 1) | b as usize),
        other => invalid(format!("spin bit must be 0 or 1, got {other}")),
    })
}

/// Reverses the `len`-bit word of `index`.
#[inline]
pub fn bit_reverse_index(index: usize, len: usize) -> usize {
    if len == 0 {
        return 0;
    }
    index.reverse_bits() >> (usize::BITS as usize - len)
}

/// A normalized (or to-be-normalized) amplitude vector over the `2^L`
/// computational basis.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    len: usize,
    amps: Vec<Complex64>,
}

impl PureState {
    /// Wraps raw amplitudes; no normalization is applied.
    pub fn new(len: usize, amps: Vec<Complex64>) -> Result<Self> {
        if len == 0 {
            return invalid("state needs at least one site");
        }
        if len >= usize::BITS as usize - 1 || amps.len() != 1usize << len {
            return invalid(format!(
                "{} amplitudes do not match a {len}-site chain",
                amps.len()
            ));
        }
        Ok(Self { len, amps })
    }

    pub fn from_real(len: usize, amps: &[f64]) -> Result<Self> {
        Self::new(len, amps.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(len: usize, index: usize) -> Result<Self> {
        if len == 0 || len >= usize::BITS as usize - 1 || index >= 1usize << len {
            return invalid(format!("basis index {index} out of range for {len} sites"));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << len];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { len, amps })
    }

    /// Product state from one bit per site, site 1 first.
    pub fn product(bits: &[u8]) -> Result<Self> {
        let index = basis_index(bits, bits.len())?;
        Self::basis(bits.len(), index)
    }

    /// Equal-weight superposition of all basis states.
    pub fn uniform(len: usize) -> Result<Self> {
        if len == 0 || len >= usize::BITS as usize - 1 {
            return invalid("invalid chain length");
        }
        let dim = 1usize << len;
        let a = Complex64::new((dim as f64).recip().sqrt(), 0.0);
        Ok(Self {
            len,
            amps: vec![a; dim],
        })
    }

    /// Number of sites `L`.
    pub fn num_sites(&self) -> usize {
        self.len
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn normalize(&mut self) -> Result<()> {
        let n = self.norm_sqr().sqrt();
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::Numerical("cannot normalize a zero state".into()));
        }
        let inv = n.recip();
        self.amps.iter_mut().for_each(|a| *a *= inv);
        Ok(())
    }

    pub fn normalized(mut self) -> Result<Self> {
        self.normalize()?;
        Ok(self)
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &PureState) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Probabilities `|ψ_k|²`.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }
}

/// Applies the site-reflection `|s₁…s_L⟩ → |s_L…s₁⟩`.
pub fn bit_reverse_state(psi: &PureState) -> PureState {
    let len = psi.len;
    let mut amps = vec![Complex64::new(0.0, 0.0); psi.dim()];
    for (k, &a) in psi.amps.iter().enumerate() {
        amps[bit_reverse_index(k, len)] = a;
    }
    PureState { len, amps }
}

/// Strictly increasing, nonempty list of 1-based sites.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SiteSubset {
    sites: Vec<usize>,
}

impl SiteSubset {
    pub fn new(sites: Vec<usize>, len: usize) -> Result<Self> {
        if sites.is_empty() {
            return invalid("site subset must not be empty");
        }
        if sites.len() > len {
            return invalid(format!("{} sites requested on a {len}-site chain", sites.len()));
        }
        if sites.iter().any(|&s| s == 0 || s > len) {
            return invalid(format!("site indices must lie in 1..={len}"));
        }
        if sites.windows(2).any(|w| w[0] >= w[1]) {
            return invalid("site indices must be strictly increasing");
        }
        Ok(Self { sites })
    }

    /// Sites `1..=l`.
    pub fn leading(l: usize, len: usize) -> Result<Self> {
        Self::new((1..=l).collect(), len)
    }

    pub fn sites(&self) -> &[usize] {
        &self.sites
    }

    pub fn size(&self) -> usize {
        self.sites.len()
    }
}

/// Reduced density matrix of a set of sites. Rows and columns run over the
/// kept sites' bits with the first listed site most significant.
#[derive(Debug, Clone)]
pub struct ReducedDensityMatrix {
    sites: SiteSubset,
    matrix: Mat<Complex64>,
}

impl ReducedDensityMatrix {
    /// Validates Hermiticity, unit trace and dimension.
    pub fn from_matrix(sites: SiteSubset, matrix: Mat<Complex64>) -> Result<Self> {
        let dim = 1usize << sites.size();
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return invalid(format!(
                "density matrix is {}x{}, expected {dim}x{dim}",
                matrix.nrows(),
                matrix.ncols()
            ));
        }
        let rho = Self { sites, matrix };
        if rho.hermiticity_error() > DENSITY_TOL {
            return invalid("density matrix is not Hermitian");
        }
        if (rho.trace() - 1.0).abs() > DENSITY_TOL {
            return invalid(format!("density matrix has trace {}", rho.trace()));
        }
        Ok(rho)
    }

    pub(crate) fn from_parts(sites: SiteSubset, matrix: Mat<Complex64>) -> Self {
        Self { sites, matrix }
    }

    pub fn sites(&self) -> &SiteSubset {
        &self.sites
    }

    pub fn matrix(&self) -> &Mat<Complex64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Real part of the trace.
    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.matrix[(i, i)].re).sum()
    }

    pub fn hermiticity_error(&self) -> f64 {
        let n = self.dim();
        let mut err = 0.0f64;
        for i in 0..n {
            for j in i..n {
                err = err.max((self.matrix[(i, j)] - self.matrix[(j, i)].conj()).norm());
            }
        }
        err
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        let n = self.dim();
        let mut p = 0.0;
        for j in 0..n {
            for i in 0..n {
                p += self.matrix[(i, j)].norm_sqr();
            }
        }
        p
    }

    /// Ascending eigenvalues with negatives clipped to zero.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let mut ev = match self.dim() {
            1 => vec![self.matrix[(0, 0)].re],
            _ => self
                .matrix
                .self_adjoint_eigenvalues(Side::Lower)
                .map_err(|e| Error::Numerical(format!("density matrix eigensolve: {e:?}")))?,
        };
        for x in &mut ev {
            if *x < 0.0 {
                *x = 0.0;
            }
        }
        Ok(ev)
    }

    /// Von Neumann entropy in bits.
    pub fn entropy_bits(&self) -> Result<f64> {
        Ok(entropy_bits_of(&self.eigenvalues()?))
    }
}

/// `−Σ p log₂ p`, skipping weights below `1e-12`.
pub(crate) fn entropy_bits_of(weights: &[f64]) -> f64 {
    weights
        .iter()
        .filter(|&&p| p > 1e-12)
        .map(|&p| -p * p.log2())
        .sum::<f64>()
        .max(0.0)
}

/// Offsets in the full basis index contributed by every bit pattern over
/// `sites`, first site most significant.
fn pattern_offsets(sites: &[usize], len: usize) -> Vec<usize> {
    let m = sites.len();
    (0..1usize << m)
        .map(|a| {
            sites.iter().enumerate().fold(0usize, |acc, (r, &s)| {
                acc | (((a >> (m - 1 - r)) & 1) << site_shift(s, len))
            })
        })
        .collect()
}

/// `⟨a|ρ|b⟩ = Σ_e ψ(a,e) ψ*(b,e)` for the listed sites in the given order.
/// The result is Hermitian exactly: the upper triangle is accumulated and
/// mirrored.
pub(crate) fn reduce(psi: &PureState, sites: &[usize]) -> Mat<Complex64> {
    let len = psi.len;
    let kept = pattern_offsets(sites, len);
    let rest: Vec<usize> = (1..=len).filter(|s| !sites.contains(s)).collect();
    let env = pattern_offsets(&rest, len);
    let dk = kept.len();
    let mut acc = vec![Complex64::new(0.0, 0.0); dk * dk];
    let mut buf = vec![Complex64::new(0.0, 0.0); dk];
    for &e in &env {
        for (slot, &a) in buf.iter_mut().zip(&kept) {
            *slot = psi.amps[a | e];
        }
        for a in 0..dk {
            let x = buf[a];
            if x == Complex64::new(0.0, 0.0) {
                continue;
            }
            let row = &mut acc[a * dk..(a + 1) * dk];
            for b in a..dk {
                row[b] += x * buf[b].conj();
            }
        }
    }
    Mat::from_fn(dk, dk, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Less => acc[i * dk + j],
        std::cmp::Ordering::Equal => Complex64::new(acc[i * dk + i].re, 0.0),
        std::cmp::Ordering::Greater => acc[j * dk + i].conj(),
    })
}

/// Traces out every site not in `keep`.
pub fn partial_trace(psi: &PureState, keep: &SiteSubset) -> Result<ReducedDensityMatrix> {
    if keep.sites().last().is_some_and(|&s| s > psi.len) {
        return invalid(format!("subset exceeds the {}-site chain", psi.len));
    }
    Ok(ReducedDensityMatrix {
        sites: keep.clone(),
        matrix: reduce(psi, keep.sites()),
    })
}

/// Two-site reduced density matrix in the order `|00⟩,|01⟩,|10⟩,|11⟩`, site
/// `i` first.
pub fn partial_trace_pair(psi: &PureState, i: usize, j: usize) -> Result<ReducedDensityMatrix> {
    if i == j {
        return invalid(format!("pair needs two distinct sites, got ({i}, {j})"));
    }
    if i > j {
        return invalid(format!("pair sites must be ordered i < j, got ({i}, {j})"));
    }
    let keep = SiteSubset::new(vec![i, j], psi.len)?;
    partial_trace(psi, &keep)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn close(a: Complex64, b: f64) -> bool {
        (a - c(b)).norm() < 1e-14
    }

    #[test]
    fn basis_index_examples() {
        assert_eq!(basis_index(&[0; 6], 6).unwrap(), 0);
        assert_eq!(basis_index(&[1, 1], 2).unwrap(), 3);
        assert_eq!(basis_index(&[0, 1, 0], 3).unwrap(), 2);
        assert!(matches!(basis_index(&[0, 1], 3), Err(Error::InvalidInput(_))));
        assert!(basis_index(&[0, 2], 2).is_err());
    }

    #[test]
    fn bit_reverse_examples() {
        let psi = PureState::basis(3, 1).unwrap();
        assert_eq!(bit_reverse_state(&psi), PureState::basis(3, 4).unwrap());
        let pal = PureState::product(&[0, 1, 0]).unwrap();
        assert_eq!(bit_reverse_state(&pal), pal);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut amps = vec![c(0.0); 8];
        amps[1] = c(h);
        amps[4] = c(h);
        let sym = PureState::new(3, amps).unwrap();
        assert_eq!(bit_reverse_state(&sym), sym);
        assert_eq!(bit_reverse_index(0b0011, 4), 0b1100);
        assert_eq!(bit_reverse_index(1, 1), 1);
    }

    #[test]
    fn bell_marginal_is_maximally_mixed() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let psi = PureState::from_real(2, &[h, 0.0, 0.0, h]).unwrap();
        let rho = partial_trace(&psi, &SiteSubset::new(vec![1], 2).unwrap()).unwrap();
        assert!(close(rho.matrix()[(0, 0)], 0.5));
        assert!(close(rho.matrix()[(1, 1)], 0.5));
        assert!(close(rho.matrix()[(0, 1)], 0.0));
    }

    #[test]
    fn product_marginal_is_pure() {
        let psi = PureState::product(&[0, 1]).unwrap();
        let rho = partial_trace(&psi, &SiteSubset::new(vec![2], 2).unwrap()).unwrap();
        assert!(close(rho.matrix()[(1, 1)], 1.0));
        assert!(close(rho.matrix()[(0, 0)], 0.0));
        assert!((rho.purity() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn ghz_marginals() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut amps = vec![0.0; 8];
        amps[0] = h;
        amps[7] = h;
        let ghz = PureState::from_real(3, &amps).unwrap();
        let rho = partial_trace(&ghz, &SiteSubset::new(vec![1, 2], 3).unwrap()).unwrap();
        for (i, want) in [0.5, 0.0, 0.0, 0.5].into_iter().enumerate() {
            assert!(close(rho.matrix()[(i, i)], want));
        }
        assert!(close(rho.matrix()[(0, 3)], 0.0));

        let mut amps = vec![0.0; 16];
        amps[0] = h;
        amps[15] = h;
        let ghz4 = PureState::from_real(4, &amps).unwrap();
        let rho = partial_trace_pair(&ghz4, 1, 3).unwrap();
        for (i, want) in [0.5, 0.0, 0.0, 0.5].into_iter().enumerate() {
            assert!(close(rho.matrix()[(i, i)], want));
        }
        assert!(close(rho.matrix()[(0, 3)], 0.0));
    }

    #[test]
    fn pair_trace_of_product_state() {
        let psi = PureState::product(&[0, 1, 0, 1]).unwrap();
        let rho = partial_trace_pair(&psi, 2, 4).unwrap();
        assert!(close(rho.matrix()[(3, 3)], 1.0));
        assert!((rho.trace() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn pair_trace_orders_first_site_most_significant() {
        // |01⟩ on sites (1, 3) of a 3-site chain: site 1 up, site 3 down.
        let psi = PureState::product(&[0, 0, 1]).unwrap();
        let rho = partial_trace_pair(&psi, 1, 3).unwrap();
        assert!(close(rho.matrix()[(1, 1)], 1.0));
    }

    #[test]
    fn invalid_subsets_rejected() {
        assert!(SiteSubset::new(vec![], 3).is_err());
        assert!(SiteSubset::new(vec![2, 1], 3).is_err());
        assert!(SiteSubset::new(vec![0], 3).is_err());
        assert!(SiteSubset::new(vec![4], 3).is_err());
        let psi = PureState::basis(3, 0).unwrap();
        assert!(partial_trace_pair(&psi, 2, 2).is_err());
        assert!(partial_trace_pair(&psi, 3, 1).is_err());
        let too_big = SiteSubset::new(vec![1, 5], 5).unwrap();
        assert!(partial_trace(&psi, &too_big).is_err());
    }

    #[test]
    fn state_construction_checks_dimension() {
        assert!(PureState::new(2, vec![c(1.0); 3]).is_err());
        assert!(PureState::basis(2, 4).is_err());
        let mut zero = PureState::new(1, vec![c(0.0); 2]).unwrap();
        assert!(zero.normalize().is_err());
    }

    #[test]
    fn density_matrix_validation() {
        let s = SiteSubset::new(vec![1], 1).unwrap();
        let bad_trace = Mat::from_fn(2, 2, |i, j| if i == j { c(0.6) } else { c(0.0) });
        assert!(ReducedDensityMatrix::from_matrix(s.clone(), bad_trace).is_err());
        let non_herm = Mat::from_fn(2, 2, |i, j| match (i, j) {
            (0, 1) => c(0.2),
            (1, 0) => c(-0.2),
            _ => c(0.5),
        });
        assert!(ReducedDensityMatrix::from_matrix(s, non_herm).is_err());
    }
}
