//! Spectral unfolding, nearest-neighbour spacing statistics and
//! Kolmogorov–Smirnov distances to the Poisson and Wigner (GOE) laws.

use faer::linalg::solvers::SolveLstsq;
use faer::Mat;
use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};

pub const DEFAULT_FIT_DEGREE: usize = 15;
pub const DEFAULT_TRIM_FRACTION: f64 = 0.05;
/// Fewest levels an unfolding may retain after trimming.
pub const MIN_UNFOLD_LEVELS: usize = 50;
/// Spacings below this (in units of the mean spacing) count as degenerate.
pub const DEGENERATE_SPACING: f64 = 1e-8;
/// Allowed deviation of the unfolded mean spacing from 1.
pub const MEAN_SPACING_TOL: f64 = 0.02;
/// Degeneracy fraction above which spacing statistics are not attempted.
pub const DEGENERACY_SKIP_FRACTION: f64 = 0.5;

/// Unfolded levels and their spacings.
#[derive(Debug, Clone)]
pub struct UnfoldedSpectrum {
    /// Input eigenvalues (ascending, untrimmed).
    pub raw: Vec<f64>,
    /// `N̄(λ_i)` for the retained levels.
    pub unfolded: Vec<f64>,
    pub spacings: Vec<f64>,
    pub fit_degree: usize,
    pub trim_fraction: f64,
    /// Chebyshev coefficients of the staircase fit on the retained range.
    coeffs: Vec<f64>,
    range: (f64, f64),
}

impl UnfoldedSpectrum {
    pub fn mean_spacing(&self) -> f64 {
        self.spacings.iter().sum::<f64>() / self.spacings.len() as f64
    }

    /// Smooth staircase `N̄(E)`.
    pub fn staircase(&self, energy: f64) -> f64 {
        chebyshev_eval(&self.coeffs, self.to_unit(energy))
    }

    fn to_unit(&self, e: f64) -> f64 {
        let (a, b) = self.range;
        (2.0 * e - (a + b)) / (b - a)
    }
}

fn chebyshev_eval(coeffs: &[f64], x: f64) -> f64 {
    // Clenshaw recurrence
    let (mut b1, mut b2) = (0.0, 0.0);
    for &c in coeffs.iter().skip(1).rev() {
        let b0 = 2.0 * x * b1 - b2 + c;
        b2 = b1;
        b1 = b0;
    }
    x * b1 - b2 + coeffs[0]
}

/// `d/dx Σ c_k T_k(x)` via `T_k' = k U_{k−1}`.
fn chebyshev_derivative(coeffs: &[f64], x: f64) -> f64 {
    let (mut u_prev, mut u) = (0.0, 1.0); // U_{-1}, U_0
    let mut out = 0.0;
    for (k, &c) in coeffs.iter().enumerate().skip(1) {
        out += c * k as f64 * u;
        let next = 2.0 * x * u - u_prev;
        u_prev = u;
        u = next;
    }
    out
}

/// Unfolds a single-sector spectrum.
///
/// `trim_fraction` of the levels is dropped at each edge; a least-squares
/// Chebyshev polynomial of degree `fit_degree` is fitted to the staircase,
/// taking the value `i − ½` at the `i`-th level (1-based, counted over the
/// whole spectrum), on the retained levels only. The fit must be strictly
/// increasing there.
pub fn unfold(eigenvalues: &[f64], fit_degree: usize, trim_fraction: f64) -> Result<UnfoldedSpectrum> {
    if eigenvalues.iter().any(|e| !e.is_finite()) {
        return invalid("eigenvalues must be finite");
    }
    if eigenvalues.windows(2).any(|w| w[1] < w[0]) {
        return invalid("eigenvalues must be ascending");
    }
    if !(0.0..0.5).contains(&trim_fraction) {
        return invalid(format!("trim fraction {trim_fraction} must lie in [0, 0.5)"));
    }
    let n = eigenvalues.len();
    let cut = (trim_fraction * n as f64).floor() as usize;
    let kept = n.saturating_sub(2 * cut);
    if kept < MIN_UNFOLD_LEVELS {
        return invalid(format!(
            "{kept} levels remain after trimming; at least {MIN_UNFOLD_LEVELS} are needed"
        ));
    }
    if fit_degree == 0 || fit_degree + 1 >= kept {
        return invalid(format!("fit degree {fit_degree} unusable for {kept} levels"));
    }
    let retained = &eigenvalues[cut..n - cut];
    let (a, b) = (retained[0], retained[kept - 1]);
    if !(b > a) {
        return Err(Error::Unfolding(
            "retained levels are all degenerate; nothing to unfold".into(),
        ));
    }
    let x: Vec<f64> = retained.iter().map(|&e| (2.0 * e - (a + b)) / (b - a)).collect();
    let design = Mat::from_fn(kept, fit_degree + 1, |i, k| (k as f64 * x[i].clamp(-1.0, 1.0).acos()).cos());
    let target = Mat::from_fn(kept, 1, |i, _| (cut + i) as f64 + 0.5);
    let sol = design.qr().solve_lstsq(&target);
    let coeffs: Vec<f64> = (0..=fit_degree).map(|k| sol[(k, 0)]).collect();
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(Error::Unfolding("staircase fit produced non-finite coefficients".into()));
    }

    // Monotonicity on the retained range: derivative at every level, at
    // every midpoint, and on a uniform grid of the same density.
    let probes = x
        .iter()
        .copied()
        .chain(x.windows(2).map(|w| 0.5 * (w[0] + w[1])))
        .chain((0..=kept).map(|i| -1.0 + 2.0 * i as f64 / kept as f64));
    for p in probes {
        if chebyshev_derivative(&coeffs, p) <= 0.0 {
            return Err(Error::Unfolding(format!(
                "degree-{fit_degree} staircase fit is not increasing on the retained range"
            )));
        }
    }

    let unfolded: Vec<f64> = x.iter().map(|&t| chebyshev_eval(&coeffs, t)).collect();
    let spacings: Vec<f64> = unfolded.windows(2).map(|w| (w[1] - w[0]).max(0.0)).collect();
    let out = UnfoldedSpectrum {
        raw: eigenvalues.to_vec(),
        unfolded,
        spacings,
        fit_degree,
        trim_fraction,
        coeffs,
        range: (a, b),
    };
    let mean = out.mean_spacing();
    if (mean - 1.0).abs() > MEAN_SPACING_TOL {
        return Err(Error::Unfolding(format!(
            "unfolded mean spacing {mean:.4} deviates from 1"
        )));
    }
    Ok(out)
}

fn check_spacing(s: f64) -> Result<()> {
    if s.is_nan() || s < 0.0 {
        return invalid(format!("spacing must be nonnegative, got {s}"));
    }
    Ok(())
}

/// `P_W(s) = (π/2) s e^{−πs²/4}`
pub fn wigner_pdf(s: f64) -> f64 {
    if s < 0.0 {
        return 0.0;
    }
    0.5 * PI * s * (-0.25 * PI * s * s).exp()
}

/// `P_P(s) = e^{−s}`
pub fn poisson_pdf(s: f64) -> f64 {
    if s < 0.0 {
        return 0.0;
    }
    (-s).exp()
}

/// `F_W(s) = 1 − e^{−πs²/4}`
pub fn wigner_cdf(s: f64) -> Result<f64> {
    check_spacing(s)?;
    Ok(-(-0.25 * PI * s * s).exp_m1())
}

/// `F_P(s) = 1 − e^{−s}`
pub fn poisson_cdf(s: f64) -> Result<f64> {
    check_spacing(s)?;
    Ok(-(-s).exp_m1())
}

/// Density-normalized spacing histogram with bins `[k w, (k+1) w)`.
#[derive(Debug, Clone)]
pub struct Histogram {
    pub bin_width: f64,
    pub centers: Vec<f64>,
    pub densities: Vec<f64>,
    pub counts: Vec<usize>,
}

pub fn nnsd_histogram(spacings: &[f64], bin_width: f64) -> Result<Histogram> {
    if spacings.is_empty() {
        return invalid("no spacings to histogram");
    }
    if !(bin_width > 0.0 && bin_width.is_finite()) {
        return invalid("bin width must be positive");
    }
    for &s in spacings {
        check_spacing(s)?;
        if !s.is_finite() {
            return invalid("spacings must be finite");
        }
    }
    let max = spacings.iter().copied().fold(0.0, f64::max);
    let bins = (max / bin_width).floor() as usize + 1;
    let mut counts = vec![0usize; bins];
    for &s in spacings {
        counts[((s / bin_width).floor() as usize).min(bins - 1)] += 1;
    }
    let norm = spacings.len() as f64 * bin_width;
    Ok(Histogram {
        bin_width,
        centers: (0..bins).map(|k| (k as f64 + 0.5) * bin_width).collect(),
        densities: counts.iter().map(|&c| c as f64 / norm).collect(),
        counts,
    })
}

/// Two-sided KS distance `sup |F_emp − F|`, evaluating both one-sided
/// deviations at every sorted sample point.
pub fn ks_distance(sample: &[f64], cdf: impl Fn(f64) -> f64) -> Result<f64> {
    if sample.is_empty() {
        return invalid("KS distance of an empty sample");
    }
    if sample.iter().any(|s| s.is_nan()) {
        return invalid("sample contains NaN");
    }
    let mut sorted = sample.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut d = 0.0f64;
    for (i, &s) in sorted.iter().enumerate() {
        let f = cdf(s);
        d = d.max((i + 1) as f64 / n - f).max(f - i as f64 / n);
    }
    Ok(d.clamp(0.0, 1.0))
}

/// KS distances of a spacing sample to both reference laws.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsReport {
    pub d_poisson: f64,
    pub d_wigner: f64,
    pub n: usize,
}

pub fn ks_statistic(spacings: &[f64]) -> Result<KsReport> {
    for &s in spacings {
        check_spacing(s)?;
    }
    Ok(KsReport {
        d_poisson: ks_distance(spacings, |s| -(-s).exp_m1())?,
        d_wigner: ks_distance(spacings, |s| -(-0.25 * PI * s * s).exp_m1())?,
        n: spacings.len(),
    })
}

/// Fraction of consecutive raw gaps smaller than [`DEGENERATE_SPACING`]
/// times the mean gap.
pub fn degeneracy_fraction(eigenvalues: &[f64]) -> f64 {
    if eigenvalues.len() < 2 {
        return 0.0;
    }
    let n = eigenvalues.len();
    let mean = (eigenvalues[n - 1] - eigenvalues[0]) / (n - 1) as f64;
    if mean <= 0.0 {
        return 1.0;
    }
    let small = eigenvalues
        .windows(2)
        .filter(|w| w[1] - w[0] < DEGENERATE_SPACING * mean)
        .count();
    small as f64 / (n - 1) as f64
}

/// Full spacing analysis of one sector spectrum.
#[derive(Debug, Clone)]
pub struct SpacingAnalysis {
    pub degeneracy_fraction: f64,
    /// `None` when the spectrum is dominated by degeneracies.
    pub unfolded: Option<UnfoldedSpectrum>,
    /// Unfolded spacings with near-exact degeneracies removed.
    pub ks_input: Vec<f64>,
    pub ks: Option<KsReport>,
    pub notice: Option<String>,
}

/// Degeneracy accounting, unfolding and KS distances. When more than
/// [`DEGENERACY_SKIP_FRACTION`] of the gaps are degenerate, unfolding and KS
/// are skipped and a notice is attached instead.
pub fn analyze_spacings(
    eigenvalues: &[f64],
    fit_degree: usize,
    trim_fraction: f64,
) -> Result<SpacingAnalysis> {
    let frac = degeneracy_fraction(eigenvalues);
    if frac > DEGENERACY_SKIP_FRACTION {
        return Ok(SpacingAnalysis {
            degeneracy_fraction: frac,
            unfolded: None,
            ks_input: Vec::new(),
            ks: None,
            notice: Some(format!(
                "{:.1}% of level spacings are degenerate; KS statistics skipped",
                100.0 * frac
            )),
        });
    }
    let unfolded = unfold(eigenvalues, fit_degree, trim_fraction)?;
    let ks_input: Vec<f64> = unfolded
        .spacings
        .iter()
        .copied()
        .filter(|&s| s >= DEGENERATE_SPACING)
        .collect();
    let ks = if ks_input.is_empty() {
        None
    } else {
        Some(ks_statistic(&ks_input)?)
    };
    Ok(SpacingAnalysis {
        degeneracy_fraction: frac,
        unfolded: Some(unfolded),
        ks_input,
        ks,
        notice: None,
    })
}

/// Pearson correlation coefficient.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() || x.len() < 2 {
        return invalid("correlation needs two equally long series of length ≥ 2");
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::Numerical("correlation of a constant series".into()));
    }
    Ok(sxy / (sxx * syy).sqrt())
}

/// Average ranks (1-based), ties sharing their mean rank.
fn ranks(x: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..x.len()).collect();
    idx.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let mut out = vec![0.0; x.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && x[idx[j + 1]] == x[idx[i]] {
            j += 1;
        }
        let r = 0.5 * (i + j) as f64 + 1.0;
        for &k in &idx[i..=j] {
            out[k] = r;
        }
        i = j + 1;
    }
    out
}

/// Spearman rank correlation.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return invalid("series lengths differ");
    }
    pearson(&ranks(x), &ranks(y))
}

/// Ordinary least-squares line through `(x, y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

pub fn linear_fit(x: &[f64], y: &[f64]) -> Result<LinearFit> {
    if x.len() != y.len() || x.len() < 2 {
        return invalid("linear fit needs two equally long series of length ≥ 2");
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 {
        return Err(Error::Numerical("linear fit with constant abscissa".into()));
    }
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok(LinearFit {
        slope,
        intercept: my - slope * mx,
        r_squared,
    })
}
