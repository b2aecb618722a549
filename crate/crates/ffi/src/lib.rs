//! C ABI for `hirzebruch-bps`.
//!
//! Results are returned through opaque handles owned by the caller and
//! released with the matching `*_free` function. Every entry point returns an
//! [`HbpsStatus`]; on failure a message is available from
//! [`hbps_last_error`] on the same thread until the next failing call.
//! Strings handed out by the library are freed with [`hbps_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hirzebruch_bps::completions::{f2hat, NumericError, RealPolarization};
use hirzebruch_bps::invariants::{GeneratingFunction, InvariantError, InvariantRecord};
use hirzebruch_bps::lattice::{DivisorClass, LatticeError, Polarization, Side, Surface};
use hirzebruch_bps::qseries::{pole_to_json, PoleSeries, QExp};
use num_complex::Complex64;
use num_traits::ToPrimitive;

/// Outcome of a call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HbpsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Lattice = 3,
    Series = 4,
    Invariant = 5,
    Numeric = 6,
    /// An integer did not fit the requested C type; use the JSON accessors.
    Overflow = 7,
    Panic = 8,
}

/// Which side of a wall a polarization on it is taken to lie on.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HbpsSide {
    Minus = 0,
    Exact = 1,
    Plus = 2,
}

/// `f_{r,c1}` or `h_{r,c1}`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HbpsWhich {
    F = 0,
    H = 1,
}

/// A truncated series in `q` with Laurent-polynomial coefficients in `w`.
pub struct HbpsSeries(PoleSeries);

/// Betti numbers and Euler number of one moduli space.
pub struct HbpsRecord(InvariantRecord);

/// Real and imaginary part of a numeric value, with a bound on its truncation error.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct HbpsComplex {
    pub re: f64,
    pub im: f64,
    pub tail_bound: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(HbpsStatus, String);

impl From<LatticeError> for Failure {
    fn from(e: LatticeError) -> Self {
        Failure(HbpsStatus::Lattice, e.to_string())
    }
}

impl From<InvariantError> for Failure {
    fn from(e: InvariantError) -> Self {
        let status = match e {
            InvariantError::Lattice(_) => HbpsStatus::Lattice,
            InvariantError::Series(_) => HbpsStatus::Series,
            _ => HbpsStatus::Invariant,
        };
        Failure(status, e.to_string())
    }
}

impl From<NumericError> for Failure {
    fn from(e: NumericError) -> Self {
        Failure(HbpsStatus::Numeric, e.to_string())
    }
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

/// Run `f`, translating errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> HbpsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => HbpsStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            HbpsStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(HbpsStatus::NullPointer, format!("{what} is NULL"))
}

fn side(s: HbpsSide) -> Side {
    match s {
        HbpsSide::Minus => Side::Minus,
        HbpsSide::Exact => Side::Exact,
        HbpsSide::Plus => Side::Plus,
    }
}

fn qexp(num: i64, den: i64) -> Result<QExp, Failure> {
    if den <= 0 {
        return Err(Failure(HbpsStatus::InvalidArgument, format!("qmax denominator {den} must be positive")));
    }
    Ok(QExp::new(num, den))
}

/// Give ownership of `v` to the caller through `out`.
///
/// # Safety
/// `out` must be valid for writes.
unsafe fn hand_out<T>(out: *mut *mut T, v: T) {
    unsafe { *out = Box::into_raw(Box::new(v)) };
}

fn c_string(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s).map(CString::into_raw).map_err(|_| Failure(HbpsStatus::Panic, "interior NUL".into()))
}

/// Message of the last failed call on this thread, or NULL. Valid until the
/// next failing call on the same thread; do not free.
#[no_mangle]
pub extern "C" fn hbps_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn hbps_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Release a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn hbps_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Generating function `f_{r,c1}` or `h_{r,c1}` on `Σ_ell` at `J = mC + (m·ell+n)f`
/// through `q^{qmax_num/qmax_den}`, with `c1 = b·C − a·f`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn hbps_generating_function(
    ell: u32,
    rank: u32,
    c1_b: i64,
    c1_a: i64,
    j_m: i64,
    j_n: i64,
    j_side: HbpsSide,
    which: HbpsWhich,
    qmax_num: i64,
    qmax_den: i64,
    out: *mut *mut HbpsSeries,
) -> HbpsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let s = Surface::new(ell)?;
        let j = Polarization::integral(j_m, j_n, side(j_side))?;
        let c1 = DivisorClass::from_beta_alpha(c1_b, c1_a);
        let gf = GeneratingFunction::with_qmax(s, rank, c1, j, qexp(qmax_num, qmax_den)?)?;
        let series = match which {
            HbpsWhich::F => gf.f().clone(),
            HbpsWhich::H => gf.h(),
        };
        unsafe { hand_out(out, HbpsSeries(series)) };
        Ok(())
    })
}

/// Canonical JSON of a series; free the result with [`hbps_string_free`].
///
/// # Safety
/// `series` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hbps_series_to_json(series: *const HbpsSeries, out: *mut *mut c_char) -> HbpsStatus {
    guard(|| {
        let series = unsafe { series.as_ref() }.ok_or_else(|| null("series"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        unsafe { *out = c_string(pole_to_json(&series.0).to_string())? };
        Ok(())
    })
}

/// Number of nonzero `q`-coefficients stored in the series.
///
/// # Safety
/// `series` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hbps_series_term_count(series: *const HbpsSeries, out: *mut usize) -> HbpsStatus {
    guard(|| {
        let series = unsafe { series.as_ref() }.ok_or_else(|| null("series"))?;
        let out = unsafe { out.as_mut() }.ok_or_else(|| null("out"))?;
        *out = series.0.body().terms().count();
        Ok(())
    })
}

/// # Safety
/// `series` must come from this library and not have been freed. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn hbps_series_free(series: *mut HbpsSeries) {
    if !series.is_null() {
        drop(unsafe { Box::from_raw(series) });
    }
}

/// Betti and Euler numbers of the moduli space of `(rank, b·C − a·f, c2)` on
/// `Σ_ell` at `J_{m,n}`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn hbps_record_new(
    ell: u32,
    rank: u32,
    c1_b: i64,
    c1_a: i64,
    c2: i64,
    j_m: i64,
    j_n: i64,
    j_side: HbpsSide,
    out: *mut *mut HbpsRecord,
) -> HbpsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let s = Surface::new(ell)?;
        let j = Polarization::integral(j_m, j_n, side(j_side))?;
        let c1 = DivisorClass::from_beta_alpha(c1_b, c1_a);
        let gf = GeneratingFunction::new(s, rank, c1, j, c2)?;
        let rec = gf.record(c2)?;
        unsafe { hand_out(out, HbpsRecord(rec)) };
        Ok(())
    })
}

/// Complex dimension of the moduli space.
///
/// # Safety
/// `record` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hbps_record_dim(record: *const HbpsRecord, out: *mut i64) -> HbpsStatus {
    guard(|| {
        let rec = unsafe { record.as_ref() }.ok_or_else(|| null("record"))?;
        let out = unsafe { out.as_mut() }.ok_or_else(|| null("out"))?;
        *out = rec.0.dim;
        Ok(())
    })
}

/// Copy `b_0, …, b_{2·dim}` into `buf`. With `buf` NULL or `capacity` too
/// small, only `*len` is set (to the required length).
///
/// # Safety
/// `record` must be a live handle, `len` valid for writes and `buf` valid for
/// `capacity` writes when non-NULL.
#[no_mangle]
pub unsafe extern "C" fn hbps_record_betti(
    record: *const HbpsRecord,
    buf: *mut u64,
    capacity: usize,
    len: *mut usize,
) -> HbpsStatus {
    guard(|| {
        let rec = unsafe { record.as_ref() }.ok_or_else(|| null("record"))?;
        let len = unsafe { len.as_mut() }.ok_or_else(|| null("len"))?;
        let betti = &rec.0.poincare;
        *len = betti.len();
        if buf.is_null() || capacity < betti.len() {
            return Ok(());
        }
        for (i, b) in betti.iter().enumerate() {
            let v = b.to_u64().ok_or_else(|| Failure(HbpsStatus::Overflow, format!("b_{i} = {b} exceeds u64")))?;
            unsafe { *buf.add(i) = v };
        }
        Ok(())
    })
}

/// Euler number of the moduli space.
///
/// # Safety
/// `record` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hbps_record_euler(record: *const HbpsRecord, out: *mut u64) -> HbpsStatus {
    guard(|| {
        let rec = unsafe { record.as_ref() }.ok_or_else(|| null("record"))?;
        let out = unsafe { out.as_mut() }.ok_or_else(|| null("out"))?;
        let e = &rec.0.euler;
        *out = e.to_u64().ok_or_else(|| Failure(HbpsStatus::Overflow, format!("Euler number {e} exceeds u64")))?;
        Ok(())
    })
}

/// JSON `{ell, r, c1, c2, J, dim, betti, euler, warnings}`; free with [`hbps_string_free`].
///
/// # Safety
/// `record` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hbps_record_to_json(record: *const HbpsRecord, out: *mut *mut c_char) -> HbpsStatus {
    guard(|| {
        let rec = unsafe { record.as_ref() }.ok_or_else(|| null("record"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        unsafe { *out = c_string(rec.0.to_json().to_string())? };
        Ok(())
    })
}

/// # Safety
/// `record` must come from this library and not have been freed. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn hbps_record_free(record: *mut HbpsRecord) {
    if !record.is_null() {
        drop(unsafe { Box::from_raw(record) });
    }
}

/// Completed rank-2 generating function `f̂_{2,βC−αf}(z, τ)` at the real
/// polarization `J = mC + (m·ell+n)f`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn hbps_f2hat(
    ell: u32,
    alpha: i64,
    beta: i64,
    j_m: f64,
    j_n: f64,
    z_re: f64,
    z_im: f64,
    tau_re: f64,
    tau_im: f64,
    out: *mut HbpsComplex,
) -> HbpsStatus {
    guard(|| {
        let out = unsafe { out.as_mut() }.ok_or_else(|| null("out"))?;
        let j = RealPolarization::new(ell, j_m, j_n)?;
        let r = f2hat(&j, alpha, beta, Complex64::new(z_re, z_im), Complex64::new(tau_re, tau_im))?;
        *out = HbpsComplex { re: r.value.re, im: r.value.im, tail_bound: r.tail_bound };
        Ok(())
    })
}

/// Parse a C string argument; exposed for bindings that pass `m,n,side` text.
///
/// # Safety
/// `text` must be a NUL-terminated string; `m`, `n` and `side_out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hbps_parse_polarization(
    text: *const c_char,
    m: *mut i64,
    n: *mut i64,
    side_out: *mut HbpsSide,
) -> HbpsStatus {
    guard(|| {
        if text.is_null() {
            return Err(null("text"));
        }
        let s = unsafe { CStr::from_ptr(text) }
            .to_str()
            .map_err(|_| Failure(HbpsStatus::InvalidArgument, "polarization is not UTF-8".into()))?;
        let p = hirzebruch_bps::cli::parse_polarization(s).map_err(|e| Failure(HbpsStatus::InvalidArgument, e.to_string()))?;
        let (Some(pm), Some(pn)) = (p.m.is_integer().then(|| p.m.to_integer()), p.n.is_integer().then(|| p.n.to_integer())) else {
            return Err(Failure(HbpsStatus::InvalidArgument, format!("{p} is not integral")));
        };
        let (m, n, so) = unsafe { (m.as_mut(), n.as_mut(), side_out.as_mut()) };
        let (Some(m), Some(n), Some(so)) = (m, n, so) else {
            return Err(null("output"));
        };
        *m = pm;
        *n = pn;
        *so = match p.side {
            Side::Minus => HbpsSide::Minus,
            Side::Exact => HbpsSide::Exact,
            Side::Plus => HbpsSide::Plus,
        };
        Ok(())
    })
}
