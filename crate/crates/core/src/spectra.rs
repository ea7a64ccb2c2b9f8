//! Eigendecomposition, θ-parameterized level dynamics and avoided crossings.

use faer::{Mat, MatRef, Side};
use rayon::prelude::*;
use std::fmt;
use std::str::FromStr;

use crate::entanglement;
use crate::error::{invalid, Error, Result};
use crate::hamiltonian::{build_hamiltonian, build_sectors, project_to_sector, SymmetrySector};
use crate::state::{ChainParams, PureState};

/// Largest asymmetry `|A_ij − A_ji|` accepted by [`diagonalize`].
pub const SYMMETRY_TOL: f64 = 1e-10;

/// Gap below which a level pair counts as exactly degenerate.
pub const DEGENERACY_GAP: f64 = 1e-12;

/// Default angular tolerance for avoided-crossing refinement (radians).
pub const DEFAULT_REFINE_TOL: f64 = 1e-6;

/// Default number of points in a θ sweep over `[0, π/2]`.
pub const DEFAULT_SWEEP_POINTS: usize = 200;

/// Which part of the Hilbert space a spectrum lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SectorKind {
    Even,
    Odd,
    Full,
}

impl fmt::Display for SectorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SectorKind::Even => "even",
            SectorKind::Odd => "odd",
            SectorKind::Full => "full",
        })
    }
}

impl FromStr for SectorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "even" => Ok(SectorKind::Even),
            "odd" => Ok(SectorKind::Odd),
            "full" => Ok(SectorKind::Full),
            other => invalid(format!("unknown sector '{other}' (expected even, odd or full)")),
        }
    }
}

/// Ascending eigenvalues with optional orthonormal eigenvectors (columns).
#[derive(Debug, Clone)]
pub struct Eigensystem {
    pub values: Vec<f64>,
    pub vectors: Option<Mat<f64>>,
}

/// Dense symmetric eigendecomposition. Rejects input whose asymmetry exceeds
/// [`SYMMETRY_TOL`].
pub fn diagonalize(h: MatRef<'_, f64>, want_vectors: bool) -> Result<Eigensystem> {
    let n = h.nrows();
    if n != h.ncols() {
        return invalid(format!("matrix is {}x{}, not square", n, h.ncols()));
    }
    if n == 0 {
        return invalid("empty matrix");
    }
    for j in 0..n {
        for i in j + 1..n {
            let (a, b) = (h[(i, j)], h[(j, i)]);
            if !(a.is_finite() && b.is_finite()) {
                return invalid("matrix has non-finite entries");
            }
            if (a - b).abs() > SYMMETRY_TOL {
                return invalid(format!("matrix is not symmetric at ({i}, {j})"));
            }
        }
    }
    let fail = |e| Error::Numerical(format!("symmetric eigensolve failed: {e:?}"));
    if want_vectors {
        let evd = h.self_adjoint_eigen(Side::Lower).map_err(fail)?;
        let values = (0..n).map(|k| evd.S()[k]).collect();
        Ok(Eigensystem {
            values,
            vectors: Some(evd.U().to_owned()),
        })
    } else {
        let values = h.self_adjoint_eigenvalues(Side::Lower).map_err(fail)?;
        Ok(Eigensystem {
            values,
            vectors: None,
        })
    }
}

/// Spectrum of one chain in one sector. Eigenvectors, when present, are
/// stored in full `2^L` coordinates as columns.
#[derive(Debug, Clone)]
pub struct SpectrumResult {
    pub params: ChainParams,
    pub sector: SectorKind,
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Option<Mat<f64>>,
}

impl SpectrumResult {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// The `k`-th eigenstate in full coordinates.
    pub fn eigenstate(&self, k: usize) -> Result<PureState> {
        let v = self
            .eigenvectors
            .as_ref()
            .ok_or_else(|| Error::InvalidInput("spectrum was computed without vectors".into()))?;
        if k >= v.ncols() {
            return invalid(format!("eigenstate {k} out of range ({} levels)", v.ncols()));
        }
        let col: Vec<f64> = (0..v.nrows()).map(|i| v[(i, k)]).collect();
        PureState::from_real(self.params.len, &col)
    }
}

fn sector_for(len: usize, kind: SectorKind) -> Result<Option<SymmetrySector>> {
    Ok(match kind {
        SectorKind::Full => None,
        SectorKind::Even => Some(build_sectors(len)?.0),
        SectorKind::Odd => Some(build_sectors(len)?.1),
    })
}

/// Builds, projects and diagonalizes `H(params)` in `sector`.
pub fn solve_spectrum(
    params: &ChainParams,
    sector: SectorKind,
    want_vectors: bool,
) -> Result<SpectrumResult> {
    let h = build_hamiltonian(params)?;
    let block = sector_for(params.len, sector)?;
    let sys = match &block {
        None => diagonalize(h.matrix(), want_vectors)?,
        Some(s) => diagonalize(project_to_sector(&h, s)?.as_ref(), want_vectors)?,
    };
    let eigenvectors = match (sys.vectors, &block) {
        (Some(v), Some(s)) => Some(s.lift_columns(v.as_ref())),
        (v, _) => v,
    };
    Ok(SpectrumResult {
        params: *params,
        sector,
        eigenvalues: sys.values,
        eigenvectors,
    })
}

/// Anything that can produce an ascending spectrum at a given angle.
pub trait LevelSource: Sync {
    fn levels_at(&self, theta: f64) -> Result<Vec<f64>>;
}

/// The tilted chain restricted to one sector; `params.theta` is ignored in
/// favour of the requested angle.
#[derive(Debug, Clone, Copy)]
pub struct ChainSector {
    pub params: ChainParams,
    pub sector: SectorKind,
}

impl LevelSource for ChainSector {
    fn levels_at(&self, theta: f64) -> Result<Vec<f64>> {
        Ok(solve_spectrum(&self.params.with_theta(theta), self.sector, false)?.eigenvalues)
    }
}

/// Eigenvalues along a θ grid. Levels are identified by their ascending
/// index inside the sector, so tracked curves never cross.
#[derive(Debug, Clone)]
pub struct LevelTrack {
    pub theta_grid: Vec<f64>,
    /// `levels[g][k]`: level `k` at grid point `g`.
    pub levels: Vec<Vec<f64>>,
}

impl LevelTrack {
    pub fn num_levels(&self) -> usize {
        self.levels.first().map_or(0, Vec::len)
    }

    /// Curve of level `k` over the grid.
    pub fn level(&self, k: usize) -> Vec<f64> {
        self.levels.iter().map(|row| row[k]).collect()
    }

    /// `E_{k+1} − E_k` over the grid.
    pub fn gap(&self, k: usize) -> Vec<f64> {
        self.levels.iter().map(|row| row[k + 1] - row[k]).collect()
    }
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return invalid("theta grid is empty");
    }
    if grid.iter().any(|t| !t.is_finite()) {
        return invalid("theta grid has non-finite entries");
    }
    if grid.windows(2).any(|w| w[1] < w[0]) {
        return invalid("theta grid must be ascending");
    }
    Ok(())
}

/// `count` evenly spaced angles from `start` to `stop` inclusive.
pub fn uniform_grid(start: f64, stop: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..count)
            .map(|i| start + (stop - start) * i as f64 / (count - 1) as f64)
            .collect(),
    }
}

/// Diagonalizes `source` at every grid angle in parallel.
pub fn sweep_levels<S: LevelSource + ?Sized>(source: &S, grid: &[f64]) -> Result<LevelTrack> {
    check_grid(grid)?;
    let levels = grid
        .par_iter()
        .map(|&t| source.levels_at(t))
        .collect::<Result<Vec<_>>>()?;
    Ok(LevelTrack {
        theta_grid: grid.to_vec(),
        levels,
    })
}

/// Level dynamics of the chain over `grid` in one sector.
pub fn sweep_spectrum(base: &ChainParams, grid: &[f64], sector: SectorKind) -> Result<LevelTrack> {
    sweep_levels(
        &ChainSector {
            params: *base,
            sector,
        },
        grid,
    )
}

/// A local minimum of `E_{k+1} − E_k` along θ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AvoidedCrossing {
    /// Index `k` of the lower level of the pair `(k, k+1)`.
    pub lower: usize,
    pub theta_star: f64,
    pub min_gap: f64,
}

/// Result of scanning one level pair: genuine avoided crossings and minima
/// whose gap fell below [`DEGENERACY_GAP`].
#[derive(Debug, Clone, Default)]
pub struct CrossingSearch {
    pub avoided: Vec<AvoidedCrossing>,
    pub degeneracies: Vec<AvoidedCrossing>,
}

fn pair_gap<S: LevelSource + ?Sized>(source: &S, lower: usize, theta: f64) -> Result<f64> {
    let ev = source.levels_at(theta)?;
    if lower + 1 >= ev.len() {
        return invalid(format!("level pair ({lower}, {}) out of range", lower + 1));
    }
    Ok(ev[lower + 1] - ev[lower])
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section minimization of the exact gap on `[a, b]`; `seed` is a
/// known point (grid minimum) that the answer is never worse than.
fn golden_minimize<S: LevelSource + ?Sized>(
    source: &S,
    lower: usize,
    mut a: f64,
    mut b: f64,
    seed: (f64, f64),
    tol: f64,
) -> Result<(f64, f64)> {
    let mut best = seed;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = pair_gap(source, lower, c)?;
    let mut fd = pair_gap(source, lower, d)?;
    for (t, f) in [(c, fc), (d, fd)] {
        if f < best.1 {
            best = (t, f);
        }
    }
    while (b - a) > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = pair_gap(source, lower, c)?;
            if fc < best.1 {
                best = (c, fc);
            }
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = pair_gap(source, lower, d)?;
            if fd < best.1 {
                best = (d, fd);
            }
        }
    }
    Ok(best)
}

/// Locates grid-local minima of the gap between levels `lower` and
/// `lower + 1` and refines each by golden-section search on freshly
/// computed spectra until the bracket is narrower than `refine_tol`.
pub fn find_avoided_crossings<S: LevelSource + ?Sized>(
    source: &S,
    track: &LevelTrack,
    lower: usize,
    refine_tol: f64,
) -> Result<CrossingSearch> {
    if lower + 1 >= track.num_levels() {
        return invalid(format!(
            "level pair ({lower}, {}) out of range ({} levels)",
            lower + 1,
            track.num_levels()
        ));
    }
    if !(refine_tol > 0.0) {
        return invalid("refinement tolerance must be positive");
    }
    let gap = track.gap(lower);
    let grid = &track.theta_grid;
    let minima: Vec<usize> = (1..gap.len().saturating_sub(1))
        .filter(|&i| {
            gap[i] <= gap[i - 1] && gap[i] <= gap[i + 1] && (gap[i] < gap[i - 1] || gap[i] < gap[i + 1])
        })
        .collect();
    let refined = minima
        .par_iter()
        .map(|&i| {
            let (t, g) = golden_minimize(
                source,
                lower,
                grid[i - 1],
                grid[i + 1],
                (grid[i], gap[i]),
                refine_tol,
            )?;
            Ok(AvoidedCrossing {
                lower,
                theta_star: t,
                min_gap: g,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let (degeneracies, avoided) = refined
        .into_iter()
        .partition(|c: &AvoidedCrossing| c.min_gap < DEGENERACY_GAP);
    Ok(CrossingSearch {
        avoided,
        degeneracies,
    })
}

/// Angular window around an avoided crossing bounded on each side by the
/// first angle where the gap has grown to `ratio × min_gap`, searched no
/// further than `max_half_width` from `θ*`.
pub fn crossing_window<S: LevelSource + ?Sized>(
    source: &S,
    crossing: &AvoidedCrossing,
    ratio: f64,
    max_half_width: f64,
) -> Result<(f64, f64)> {
    if !(ratio > 1.0) {
        return invalid("window gap ratio must exceed 1");
    }
    let target = ratio * crossing.min_gap;
    let mut edges = [0.0; 2];
    for (slot, dir) in edges.iter_mut().zip([-1.0, 1.0]) {
        let mut inner = 0.0;
        let mut step = (crossing.min_gap * 1e-3).max(1e-9).min(max_half_width);
        let mut outer = None;
        while step <= max_half_width {
            let g = pair_gap(source, crossing.lower, crossing.theta_star + dir * step)?;
            if g >= target {
                outer = Some(step);
                break;
            }
            inner = step;
            step *= 2.0;
        }
        let mut hi = match outer {
            Some(o) => o,
            None => {
                *slot = crossing.theta_star + dir * max_half_width;
                continue;
            }
        };
        let mut lo = inner;
        for _ in 0..40 {
            let mid = 0.5 * (lo + hi);
            if pair_gap(source, crossing.lower, crossing.theta_star + dir * mid)? >= target {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        *slot = crossing.theta_star + dir * hi;
    }
    Ok((edges[0], edges[1]))
}

/// Per-level energies and entanglement along a θ grid.
#[derive(Debug, Clone)]
pub struct LevelMeasureTrack {
    pub theta_grid: Vec<f64>,
    pub level_indices: Vec<usize>,
    /// `[grid][level]`
    pub energy: Vec<Vec<f64>>,
    pub q: Vec<Vec<f64>>,
    pub total_tangle: Vec<Vec<f64>>,
    pub s_half: Vec<Vec<f64>>,
}

/// Sweeps the chosen levels of a sector, evaluating Q, total tangle and
/// `S_{L/2}` of each eigenstate at every grid angle.
pub fn sweep_level_measures(
    base: &ChainParams,
    grid: &[f64],
    sector: SectorKind,
    levels: &[usize],
) -> Result<LevelMeasureTrack> {
    check_grid(grid)?;
    if levels.is_empty() {
        return invalid("no level indices requested");
    }
    if base.len < 2 {
        return invalid("level measures need at least two sites");
    }
    let rows = grid
        .par_iter()
        .map(|&t| {
            let spec = solve_spectrum(&base.with_theta(t), sector, true)?;
            let mut e = Vec::with_capacity(levels.len());
            let mut q = Vec::with_capacity(levels.len());
            let mut tau = Vec::with_capacity(levels.len());
            let mut s = Vec::with_capacity(levels.len());
            for &k in levels {
                if k >= spec.len() {
                    return invalid(format!("level {k} out of range ({} levels)", spec.len()));
                }
                let psi = spec.eigenstate(k)?;
                e.push(spec.eigenvalues[k]);
                q.push(entanglement::q_measure(&psi));
                tau.push(entanglement::total_tangle(&psi)?);
                s.push(entanglement::entropy_block(&psi, base.len / 2)?);
            }
            Ok((e, q, tau, s))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out = LevelMeasureTrack {
        theta_grid: grid.to_vec(),
        level_indices: levels.to_vec(),
        energy: Vec::new(),
        q: Vec::new(),
        total_tangle: Vec::new(),
        s_half: Vec::new(),
    };
    for (e, q, tau, s) in rows {
        out.energy.push(e);
        out.q.push(q);
        out.total_tangle.push(tau);
        out.s_half.push(s);
    }
    Ok(out)
}

/// Localization and entanglement of one eigenstate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenstateRow {
    pub index: usize,
    pub energy: f64,
    pub log_pr: f64,
    pub shannon: f64,
    pub q: f64,
    /// `S_{⌊L/2⌋}` in bits; `None` for a single site.
    pub s_half: Option<f64>,
}

/// Measures every eigenstate of `spectrum`, sorted by energy.
pub fn eigenstate_report(spectrum: &SpectrumResult) -> Result<Vec<EigenstateRow>> {
    if spectrum.eigenvectors.is_none() {
        return invalid("eigenstate report needs eigenvectors");
    }
    let len = spectrum.params.len;
    (0..spectrum.len())
        .into_par_iter()
        .map(|k| {
            let psi = spectrum.eigenstate(k)?;
            let loc = entanglement::localization(&psi);
            let s_half = if len >= 2 {
                Some(entanglement::entropy_block(&psi, len / 2)?)
            } else {
                None
            };
            Ok(EigenstateRow {
                index: k,
                energy: spectrum.eigenvalues[k],
                log_pr: loc.log_pr,
                shannon: loc.shannon,
                q: entanglement::q_measure(&psi),
                s_half,
            })
        })
        .collect()
}

/// Mean `S_l` (bits) over `count` eigenstates centred in the spectrum, for
/// `l = 1..L−1`.
pub fn central_block_entropies(spectrum: &SpectrumResult, count: usize) -> Result<Vec<f64>> {
    let n = spectrum.len();
    let len = spectrum.params.len;
    if len < 2 {
        return invalid("block entropies need at least two sites");
    }
    if count == 0 || count > n {
        return invalid(format!("cannot average {count} of {n} eigenstates"));
    }
    let start = (n - count) / 2;
    let per_state = (start..start + count)
        .into_par_iter()
        .map(|k| {
            let psi = spectrum.eigenstate(k)?;
            (1..len)
                .map(|l| entanglement::entropy_block(&psi, l))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let mut mean = vec![0.0; len - 1];
    for row in &per_state {
        for (m, s) in mean.iter_mut().zip(row) {
            *m += s / count as f64;
        }
    }
    Ok(mean)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    struct TwoLevel {
        center: f64,
        coupling: f64,
    }

    impl LevelSource for TwoLevel {
        fn levels_at(&self, theta: f64) -> Result<Vec<f64>> {
            let d = theta - self.center;
            let m = Mat::from_fn(2, 2, |i, j| match (i, j) {
                (0, 0) => d,
                (1, 1) => -d,
                _ => self.coupling,
            });
            Ok(diagonalize(m.as_ref(), false)?.values)
        }
    }

    #[test]
    fn diagonal_matrix() {
        let m = Mat::from_fn(4, 4, |i, j| match (i, j) {
            (0, 0) => 3.0,
            (i, j) if i == j => -1.0,
            _ => 0.0,
        });
        let sys = diagonalize(m.as_ref(), true).unwrap();
        assert_eq!(sys.values, vec![-1.0, -1.0, -1.0, 3.0]);
    }

    #[test]
    fn two_by_two_closed_form() {
        let (l, g) = (0.7, 0.3);
        let m = Mat::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => l,
            (1, 1) => -l,
            _ => g,
        });
        let ev = diagonalize(m.as_ref(), false).unwrap().values;
        let r = (l * l + g * g).sqrt();
        assert!((ev[0] + r).abs() < 1e-14 && (ev[1] - r).abs() < 1e-14);
    }

    #[test]
    fn rejects_asymmetric_input() {
        let m = Mat::from_fn(2, 2, |i, j| if i < j { 1.0 } else { 0.0 });
        assert!(matches!(diagonalize(m.as_ref(), false), Err(Error::InvalidInput(_))));
        let r = Mat::<f64>::zeros(2, 3);
        assert!(diagonalize(r.as_ref(), false).is_err());
    }

    #[test]
    fn transverse_two_site_spectrum() {
        let p = ChainParams::unit(2, FRAC_PI_2).unwrap();
        let s = solve_spectrum(&p, SectorKind::Full, true).unwrap();
        let s5 = 5f64.sqrt();
        for (a, b) in s.eigenvalues.iter().zip([-s5, -1.0, 1.0, s5]) {
            assert!((a - b).abs() < 1e-12);
        }
        let even = solve_spectrum(&p, SectorKind::Even, true).unwrap();
        assert_eq!(even.len(), 3);
        let v = even.eigenvectors.as_ref().unwrap();
        assert_eq!((v.nrows(), v.ncols()), (4, 3));
    }

    #[test]
    fn sector_parsing() {
        assert_eq!("EVEN".parse::<SectorKind>().unwrap(), SectorKind::Even);
        assert!("middle".parse::<SectorKind>().is_err());
        assert_eq!(SectorKind::Odd.to_string(), "odd");
    }

    #[test]
    fn even_sweep_small_chain() {
        let p = ChainParams::unit(2, 0.0).unwrap();
        let grid = [0.0, FRAC_PI_4, FRAC_PI_2];
        let track = sweep_spectrum(&p, &grid, SectorKind::Even).unwrap();
        let top = track.level(2);
        assert!((top[0] - 3.0).abs() < 1e-12);
        assert!((top[2] - 5f64.sqrt()).abs() < 1e-12);
        for (g, &t) in grid.iter().enumerate() {
            let direct = solve_spectrum(&p.with_theta(t), SectorKind::Even, false).unwrap();
            assert_eq!(track.levels[g], direct.eigenvalues);
        }
    }

    #[test]
    fn repeated_angles_give_identical_columns() {
        let p = ChainParams::unit(4, 0.0).unwrap();
        let track = sweep_spectrum(&p, &[0.3, 0.3, 0.3], SectorKind::Even).unwrap();
        assert_eq!(track.levels[0], track.levels[1]);
        assert_eq!(track.levels[1], track.levels[2]);
        assert!(sweep_spectrum(&p, &[], SectorKind::Even).is_err());
        assert!(sweep_spectrum(&p, &[0.2, 0.1], SectorKind::Even).is_err());
    }

    #[test]
    fn synthetic_avoided_crossing() {
        let src = TwoLevel {
            center: 0.4137,
            coupling: 0.01,
        };
        let grid = uniform_grid(0.0, 1.0, 41);
        let track = sweep_levels(&src, &grid).unwrap();
        let found = find_avoided_crossings(&src, &track, 0, 1e-9).unwrap();
        assert_eq!(found.avoided.len(), 1);
        let ac = found.avoided[0];
        assert!((ac.theta_star - 0.4137).abs() < 1e-7);
        assert!((ac.min_gap - 0.02).abs() < 1e-12);
        let (lo, hi) = crossing_window(&src, &ac, 5.0, 0.2).unwrap();
        // gap(δ) = 2√(δ² + g²) = 5·2g ⇒ δ = √24·g
        let half = 24f64.sqrt() * 0.01;
        assert!((lo - (0.4137 - half)).abs() < 1e-6);
        assert!((hi - (0.4137 + half)).abs() < 1e-6);
    }

    #[test]
    fn monotone_gap_has_no_crossing() {
        let src = TwoLevel {
            center: -1.0,
            coupling: 0.1,
        };
        let track = sweep_levels(&src, &uniform_grid(0.0, 1.0, 20)).unwrap();
        let found = find_avoided_crossings(&src, &track, 0, 1e-6).unwrap();
        assert!(found.avoided.is_empty() && found.degeneracies.is_empty());
        assert!(find_avoided_crossings(&src, &track, 1, 1e-6).is_err());
    }

    #[test]
    fn exact_crossing_is_flagged_as_degeneracy() {
        let src = TwoLevel {
            center: 0.5,
            coupling: 0.0,
        };
        let track = sweep_levels(&src, &uniform_grid(0.0, 1.0, 21)).unwrap();
        let found = find_avoided_crossings(&src, &track, 0, 1e-8).unwrap();
        assert!(found.avoided.is_empty());
        assert_eq!(found.degeneracies.len(), 1);
    }

    #[test]
    fn report_of_basis_eigenstates_is_unentangled() {
        // θ = 0: H is diagonal, so the computational basis is an eigenbasis
        let p = ChainParams::unit(4, 0.0).unwrap();
        let h = build_hamiltonian(&p).unwrap();
        let mut order: Vec<usize> = (0..16).collect();
        order.sort_by(|&a, &b| h.matrix()[(a, a)].total_cmp(&h.matrix()[(b, b)]));
        let spec = SpectrumResult {
            params: p,
            sector: SectorKind::Full,
            eigenvalues: order.iter().map(|&k| h.matrix()[(k, k)]).collect(),
            eigenvectors: Some(Mat::from_fn(16, 16, |i, j| (i == order[j]) as u8 as f64)),
        };
        let rows = eigenstate_report(&spec).unwrap();
        assert_eq!(rows.len(), 16);
        assert!(rows.windows(2).all(|w| w[0].energy <= w[1].energy));
        for r in rows {
            assert_eq!((r.log_pr, r.shannon, r.q), (0.0, 0.0, 0.0));
            assert_eq!(r.s_half, Some(0.0));
        }
        let no_vec = solve_spectrum(&p, SectorKind::Full, false).unwrap();
        assert!(eigenstate_report(&no_vec).is_err());
    }
}
