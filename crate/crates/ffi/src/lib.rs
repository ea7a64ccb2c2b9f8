//! C ABI over the `tilted-ising` toolkit.
//!
//! Objects cross the boundary as opaque handles created by `ti_*_new`-style
//! constructors and released by the matching `ti_*_free`. Every fallible
//! call returns a [`TiStatus`]; the message of the most recent failure on
//! the calling thread is available through [`ti_last_error`]. Array outputs
//! are written into caller buffers whose capacity is passed alongside; a
//! short buffer yields [`TiStatus::BufferTooSmall`] and the required length
//! through the `needed` out-parameter where one exists.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use tilted_ising::chaostats::{ks_statistic, unfold};
use tilted_ising::dynamics::{bell_seed_state, Propagator};
use tilted_ising::entanglement::{entropy_block, localization, pair_concurrence, q_measure, total_tangle};
use tilted_ising::hamiltonian::build_hamiltonian;
use tilted_ising::spectra::{solve_spectrum, SectorKind, SpectrumResult};
use tilted_ising::state::{ChainParams, PureState};
use tilted_ising::{max_chain_len, Complex64, Error};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TiStatus {
    Ok = 0,
    InvalidInput = 1,
    Unfolding = 2,
    Numerical = 3,
    Resource = 4,
    NullPointer = 5,
    BufferTooSmall = 6,
    Panic = 7,
}

/// Symmetry sector of the bit-reversal operator.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TiSector {
    Even = 0,
    Odd = 1,
    Full = 2,
}

impl From<TiSector> for SectorKind {
    fn from(s: TiSector) -> Self {
        match s {
            TiSector::Even => SectorKind::Even,
            TiSector::Odd => SectorKind::Odd,
            TiSector::Full => SectorKind::Full,
        }
    }
}

/// Eigenvalues (and optionally eigenvectors) of one sector.
pub struct TiSpectrum {
    inner: SpectrumResult,
}

/// A normalized pure state of a chain.
pub struct TiState {
    inner: PureState,
}

/// Exact propagator `e^{-iHt}` of one Hamiltonian.
pub struct TiPropagator {
    inner: Propagator,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: TiStatus, msg: impl Into<String>) -> TiStatus {
    set_error(msg.into());
    status
}

fn from_error(e: Error) -> TiStatus {
    let status = match e {
        Error::InvalidInput(_) => TiStatus::InvalidInput,
        Error::Unfolding(_) => TiStatus::Unfolding,
        Error::Numerical(_) => TiStatus::Numerical,
        Error::Resource(_) => TiStatus::Resource,
    };
    fail(status, e.to_string())
}

/// Runs `f`, turning panics and library errors into status codes.
fn guard(f: impl FnOnce() -> Result<(), TiStatus>) -> TiStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TiStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(TiStatus::Panic, "internal panic"),
    }
}

trait OrStatus<T> {
    fn or_status(self) -> Result<T, TiStatus>;
}

impl<T> OrStatus<T> for tilted_ising::Result<T> {
    fn or_status(self) -> Result<T, TiStatus> {
        self.map_err(from_error)
    }
}

unsafe fn out_ref<'a, T>(p: *mut T) -> Result<&'a mut T, TiStatus> {
    p.as_mut().ok_or_else(|| fail(TiStatus::NullPointer, "null output pointer"))
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, TiStatus> {
    p.as_ref().ok_or_else(|| fail(TiStatus::NullPointer, "null handle"))
}

unsafe fn input<'a>(p: *const f64, n: usize) -> Result<&'a [f64], TiStatus> {
    if n == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(fail(TiStatus::NullPointer, "null input array"));
    }
    Ok(std::slice::from_raw_parts(p, n))
}

unsafe fn fill(dst: *mut f64, cap: usize, src: &[f64]) -> Result<(), TiStatus> {
    if cap < src.len() {
        return Err(fail(
            TiStatus::BufferTooSmall,
            format!("buffer holds {cap} values, {} needed", src.len()),
        ));
    }
    if !src.is_empty() {
        if dst.is_null() {
            return Err(fail(TiStatus::NullPointer, "null output array"));
        }
        ptr::copy_nonoverlapping(src.as_ptr(), dst, src.len());
    }
    Ok(())
}

fn params(len: usize, coupling: f64, field: f64, theta: f64) -> Result<ChainParams, TiStatus> {
    let max = max_chain_len();
    if len > max {
        return Err(fail(TiStatus::Resource, format!("L = {len} exceeds the limit {max}")));
    }
    ChainParams::new(len, coupling, field, theta).or_status()
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ti_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies the last error message of this thread into `buf` (truncated and
/// NUL-terminated) and returns the full message length, 0 if none.
#[no_mangle]
pub unsafe extern "C" fn ti_last_error(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let Some(msg) = e.as_ref() else {
            if !buf.is_null() && cap > 0 {
                *buf = 0;
            }
            return 0;
        };
        let bytes = msg.as_bytes();
        if !buf.is_null() && cap > 0 {
            let n = bytes.len().min(cap - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr().cast(), buf, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// Dense row-major Hamiltonian (`2^L × 2^L` values) into `out`.
#[no_mangle]
pub unsafe extern "C" fn ti_hamiltonian_dense(
    len: usize,
    coupling: f64,
    field: f64,
    theta: f64,
    out: *mut f64,
    cap: usize,
) -> TiStatus {
    guard(|| {
        let p = params(len, coupling, field, theta)?;
        let dim = p.dim();
        if cap < dim * dim {
            return Err(fail(
                TiStatus::BufferTooSmall,
                format!("buffer holds {cap} values, {} needed", dim * dim),
            ));
        }
        let h = build_hamiltonian(&p).or_status()?;
        let m = h.matrix();
        let flat: Vec<f64> = (0..dim).flat_map(|i| (0..dim).map(move |j| m[(i, j)])).collect();
        fill(out, cap, &flat)
    })
}

/// Diagonalizes `H(len, coupling, field, theta)` in `sector`.
#[no_mangle]
pub unsafe extern "C" fn ti_spectrum_new(
    len: usize,
    coupling: f64,
    field: f64,
    theta: f64,
    sector: TiSector,
    want_vectors: bool,
    out: *mut *mut TiSpectrum,
) -> TiStatus {
    guard(|| {
        let slot = out_ref(out)?;
        *slot = ptr::null_mut();
        let p = params(len, coupling, field, theta)?;
        let inner = solve_spectrum(&p, sector.into(), want_vectors).or_status()?;
        *slot = Box::into_raw(Box::new(TiSpectrum { inner }));
        Ok(())
    })
}

/// Number of levels, 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn ti_spectrum_len(spectrum: *const TiSpectrum) -> usize {
    spectrum.as_ref().map_or(0, |s| s.inner.len())
}

/// Ascending eigenvalues into `out`.
#[no_mangle]
pub unsafe extern "C" fn ti_spectrum_eigenvalues(spectrum: *const TiSpectrum, out: *mut f64, cap: usize) -> TiStatus {
    guard(|| fill(out, cap, &handle(spectrum)?.inner.eigenvalues))
}

/// Eigenstate `k` in full-space coordinates as a new state handle.
#[no_mangle]
pub unsafe extern "C" fn ti_spectrum_eigenstate(
    spectrum: *const TiSpectrum,
    k: usize,
    out: *mut *mut TiState,
) -> TiStatus {
    guard(|| {
        let slot = out_ref(out)?;
        *slot = ptr::null_mut();
        let inner = handle(spectrum)?.inner.eigenstate(k).or_status()?;
        *slot = Box::into_raw(Box::new(TiState { inner }));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn ti_spectrum_free(spectrum: *mut TiSpectrum) {
    if !spectrum.is_null() {
        drop(Box::from_raw(spectrum));
    }
}

/// State from `2^len` real and imaginary parts; `im` may be null for a real
/// state. The amplitudes must be normalized.
#[no_mangle]
pub unsafe extern "C" fn ti_state_new(len: usize, re: *const f64, im: *const f64, out: *mut *mut TiState) -> TiStatus {
    guard(|| {
        let slot = out_ref(out)?;
        *slot = ptr::null_mut();
        if len == 0 || len >= usize::BITS as usize {
            return Err(fail(TiStatus::InvalidInput, format!("invalid chain length {len}")));
        }
        let dim = 1usize << len;
        let re = input(re, dim)?;
        let im = if im.is_null() { None } else { Some(input(im, dim)?) };
        let amps = (0..dim)
            .map(|k| Complex64::new(re[k], im.map_or(0.0, |v| v[k])))
            .collect();
        let inner = PureState::new(len, amps).or_status()?;
        if (inner.norm_sqr() - 1.0).abs() > 1e-10 {
            return Err(fail(TiStatus::InvalidInput, "state is not normalized"));
        }
        *slot = Box::into_raw(Box::new(TiState { inner }));
        Ok(())
    })
}

/// `(|00⟩+|11⟩)/√2` on sites 1, 2 with all other spins down.
#[no_mangle]
pub unsafe extern "C" fn ti_state_bell_seed(len: usize, out: *mut *mut TiState) -> TiStatus {
    guard(|| {
        let slot = out_ref(out)?;
        *slot = ptr::null_mut();
        let inner = bell_seed_state(len).or_status()?;
        *slot = Box::into_raw(Box::new(TiState { inner }));
        Ok(())
    })
}

/// Number of amplitudes, 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn ti_state_dim(state: *const TiState) -> usize {
    state.as_ref().map_or(0, |s| s.inner.dim())
}

/// Real and imaginary parts of the amplitudes; either buffer may be null.
#[no_mangle]
pub unsafe extern "C" fn ti_state_amplitudes(state: *const TiState, re: *mut f64, im: *mut f64, cap: usize) -> TiStatus {
    guard(|| {
        let amps = handle(state)?.inner.amplitudes();
        if !re.is_null() {
            fill(re, cap, &amps.iter().map(|a| a.re).collect::<Vec<_>>())?;
        }
        if !im.is_null() {
            fill(im, cap, &amps.iter().map(|a| a.im).collect::<Vec<_>>())?;
        }
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn ti_state_free(state: *mut TiState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// Entanglement entropy (bits) of the leading `l` sites.
#[no_mangle]
pub unsafe extern "C" fn ti_entropy_block(state: *const TiState, l: usize, out: *mut f64) -> TiStatus {
    guard(|| {
        let s = handle(state)?;
        *out_ref(out)? = entropy_block(&s.inner, l).or_status()?;
        Ok(())
    })
}

/// Concurrence of sites `i < j` (1-based).
#[no_mangle]
pub unsafe extern "C" fn ti_pair_concurrence(state: *const TiState, i: usize, j: usize, out: *mut f64) -> TiStatus {
    guard(|| {
        let s = handle(state)?;
        *out_ref(out)? = pair_concurrence(&s.inner, i, j).or_status()?;
        Ok(())
    })
}

/// Meyer–Wallach Q.
#[no_mangle]
pub unsafe extern "C" fn ti_q_measure(state: *const TiState, out: *mut f64) -> TiStatus {
    guard(|| {
        let s = handle(state)?;
        *out_ref(out)? = q_measure(&s.inner);
        Ok(())
    })
}

/// Sum of squared concurrences over all site pairs.
#[no_mangle]
pub unsafe extern "C" fn ti_total_tangle(state: *const TiState, out: *mut f64) -> TiStatus {
    guard(|| {
        let s = handle(state)?;
        *out_ref(out)? = total_tangle(&s.inner).or_status()?;
        Ok(())
    })
}

/// Log participation ratio and Shannon entropy (nats) in the computational basis.
#[no_mangle]
pub unsafe extern "C" fn ti_localization(state: *const TiState, log_pr: *mut f64, shannon: *mut f64) -> TiStatus {
    guard(|| {
        let s = handle(state)?;
        let loc = localization(&s.inner);
        *out_ref(log_pr)? = loc.log_pr;
        *out_ref(shannon)? = loc.shannon;
        Ok(())
    })
}

/// Unfolds `n` ascending eigenvalues and writes the unfolded spacings;
/// `needed` receives their count.
#[no_mangle]
pub unsafe extern "C" fn ti_unfold_spacings(
    eigenvalues: *const f64,
    n: usize,
    fit_degree: usize,
    trim_fraction: f64,
    out: *mut f64,
    cap: usize,
    needed: *mut usize,
) -> TiStatus {
    guard(|| {
        let needed = out_ref(needed)?;
        *needed = 0;
        let u = unfold(input(eigenvalues, n)?, fit_degree, trim_fraction).or_status()?;
        *needed = u.spacings.len();
        fill(out, cap, &u.spacings)
    })
}

/// KS distances of unit-mean spacings to the Poisson and Wigner laws.
#[no_mangle]
pub unsafe extern "C" fn ti_ks_statistic(
    spacings: *const f64,
    n: usize,
    d_poisson: *mut f64,
    d_wigner: *mut f64,
) -> TiStatus {
    guard(|| {
        let dp = out_ref(d_poisson)?;
        let dw = out_ref(d_wigner)?;
        let r = ks_statistic(input(spacings, n)?).or_status()?;
        *dp = r.d_poisson;
        *dw = r.d_wigner;
        Ok(())
    })
}

/// Diagonalizes the full Hamiltonian for time evolution.
#[no_mangle]
pub unsafe extern "C" fn ti_propagator_new(
    len: usize,
    coupling: f64,
    field: f64,
    theta: f64,
    out: *mut *mut TiPropagator,
) -> TiStatus {
    guard(|| {
        let slot = out_ref(out)?;
        *slot = ptr::null_mut();
        let p = params(len, coupling, field, theta)?;
        let inner = Propagator::new(&p, max_chain_len()).or_status()?;
        *slot = Box::into_raw(Box::new(TiPropagator { inner }));
        Ok(())
    })
}

/// `e^{-iHt}|ψ⟩` as a new state handle.
#[no_mangle]
pub unsafe extern "C" fn ti_propagator_evolve(
    propagator: *const TiPropagator,
    state: *const TiState,
    t: f64,
    out: *mut *mut TiState,
) -> TiStatus {
    guard(|| {
        let slot = out_ref(out)?;
        *slot = ptr::null_mut();
        let p = handle(propagator)?;
        let s = handle(state)?;
        let inner = p.inner.evolve_state(&s.inner, t).or_status()?;
        *slot = Box::into_raw(Box::new(TiState { inner }));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn ti_propagator_free(propagator: *mut TiPropagator) {
    if !propagator.is_null() {
        drop(Box::from_raw(propagator));
    }
}
