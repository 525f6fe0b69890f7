//! C ABI for `matrep`.
//!
//! Matroids and fields are opaque heap handles created by `*_new` functions
//! and released with the matching `*_free`. Every fallible function returns a
//! [`MatrepStatus`]; on failure a message is kept per thread and can be read
//! with [`matrep_last_error`]. Basis masks use bit `i-1` for element `i`.
//! Functions never unwind across the boundary: panics become
//! `MATREP_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use matrep::bounds::{
    conjecture_log2_count, d_of_n, knuth_log2_lower, log2_k, log2_k_prime, main_theorem_check,
    theorem2_matroid_instance, CheckStatus, LogBound,
};
use matrep::census_file::format_matroid;
use matrep::represent::{representable_over_any, RepStatus, SearchOptions};
use matrep::matroid::check_exchange;
use matrep::{Error, GfContext, Matroid, SubsetMask};

/// Opaque matroid handle.
pub struct MatrepMatroid(Matroid);

/// Opaque finite-field handle.
pub struct MatrepField(GfContext);

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrepStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    WidthOverflow = 3,
    DimensionMismatch = 4,
    UnsupportedField = 5,
    BudgetExceeded = 6,
    Parse = 7,
    Precondition = 8,
    Internal = 9,
    BufferTooSmall = 10,
    Panic = 11,
}

/// Outcome of a representability search.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrepRepOutcome {
    Found = 0,
    NotRepresentable = 1,
    BudgetExceeded = 2,
}

/// Outcome of a bound check.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrepCheck {
    Holds = 0,
    Fails = 1,
    Indeterminate = 2,
}

thread_local! {
    static LAST_ERROR: RefCell<Vec<u8>> = const { RefCell::new(Vec::new()) };
}

fn set_error(msg: &str) {
    LAST_ERROR.with(|e| {
        let mut e = e.borrow_mut();
        e.clear();
        e.extend(msg.bytes().filter(|&b| b != 0));
    });
}

fn status_of(err: &Error) -> MatrepStatus {
    match err {
        Error::InvalidInput(_) => MatrepStatus::InvalidInput,
        Error::WidthOverflow { .. } => MatrepStatus::WidthOverflow,
        Error::DimensionMismatch(_) => MatrepStatus::DimensionMismatch,
        Error::UnsupportedField(_) => MatrepStatus::UnsupportedField,
        Error::BudgetExceeded { .. } => MatrepStatus::BudgetExceeded,
        Error::Parse { .. } => MatrepStatus::Parse,
        Error::Precondition(_) => MatrepStatus::Precondition,
        Error::Internal(_) => MatrepStatus::Internal,
    }
}

/// Failure inside a wrapper body.
enum Fail {
    Lib(Error),
    Null(&'static str),
    Buffer(usize),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Fail {
        Fail::Lib(e)
    }
}

fn guard(body: impl FnOnce() -> Result<(), Fail>) -> MatrepStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => MatrepStatus::Ok,
        Ok(Err(Fail::Lib(e))) => {
            set_error(&e.to_string());
            status_of(&e)
        }
        Ok(Err(Fail::Null(what))) => {
            set_error(&format!("null pointer: {what}"));
            MatrepStatus::NullPointer
        }
        Ok(Err(Fail::Buffer(needed))) => {
            set_error(&format!("buffer too small: {needed} entries needed"));
            MatrepStatus::BufferTooSmall
        }
        Err(_) => {
            set_error("internal panic");
            MatrepStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Null(what))
}

unsafe fn write<T>(p: *mut T, v: T, what: &'static str) -> Result<(), Fail> {
    if p.is_null() {
        return Err(Fail::Null(what));
    }
    p.write(v);
    Ok(())
}

unsafe fn read_masks<'a>(ptr: *const u32, count: usize) -> Result<&'a [u32], Fail> {
    if count == 0 {
        return Ok(&[]);
    }
    if ptr.is_null() {
        return Err(Fail::Null("masks"));
    }
    Ok(std::slice::from_raw_parts(ptr, count))
}

fn boxed_matroid(m: Matroid) -> *mut MatrepMatroid {
    Box::into_raw(Box::new(MatrepMatroid(m)))
}

/// Copies the last error message into `buf` (NUL-terminated, truncated to
/// fit) and returns its full length in bytes, excluding the terminator.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn matrep_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = e.len().min(len - 1);
            ptr::copy_nonoverlapping(e.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        e.len()
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn matrep_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds a matroid from basis masks, validating the exchange axiom.
///
/// # Safety
/// `masks` must be valid for `count` reads; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn matrep_matroid_new(
    n: u32,
    masks: *const u32,
    count: usize,
    out: *mut *mut MatrepMatroid,
) -> MatrepStatus {
    guard(|| {
        let bases: Vec<SubsetMask> = read_masks(masks, count)?.iter().map(|&b| SubsetMask(b)).collect();
        let m = Matroid::new(n as usize, bases)?;
        write(out, boxed_matroid(m), "out")
    })
}

/// The uniform matroid `U_{r,n}`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn matrep_matroid_uniform(r: u32, n: u32, out: *mut *mut MatrepMatroid) -> MatrepStatus {
    guard(|| {
        let m = Matroid::uniform(r as usize, n as usize)?;
        write(out, boxed_matroid(m), "out")
    })
}

/// Parses a census body line such as `1,2;1,3;2,3` over `[n]`.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn matrep_matroid_parse(
    text: *const c_char,
    n: u32,
    out: *mut *mut MatrepMatroid,
) -> MatrepStatus {
    guard(|| {
        if text.is_null() {
            return Err(Fail::Null("text"));
        }
        let s = CStr::from_ptr(text)
            .to_str()
            .map_err(|_| Error::InvalidInput("text is not UTF-8".into()))?;
        let lists: Vec<Vec<usize>> = s
            .split(';')
            .map(|b| {
                if b.is_empty() {
                    return Ok(Vec::new());
                }
                b.split(',')
                    .map(|e| {
                        e.trim()
                            .parse::<usize>()
                            .map_err(|_| Error::InvalidInput(format!("bad element `{e}`")))
                    })
                    .collect()
            })
            .collect::<Result<_, Error>>()?;
        let refs: Vec<&[usize]> = lists.iter().map(Vec::as_slice).collect();
        let m = Matroid::from_element_lists(n as usize, &refs)?;
        write(out, boxed_matroid(m), "out")
    })
}

/// Releases a matroid handle. Null is ignored.
///
/// # Safety
/// `m` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn matrep_matroid_free(m: *mut MatrepMatroid) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Ground-set size, rank and number of bases.
///
/// # Safety
/// `m` must be a live handle; each out pointer must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn matrep_matroid_info(
    m: *const MatrepMatroid,
    n: *mut u32,
    rank: *mut u32,
    num_bases: *mut usize,
) -> MatrepStatus {
    guard(|| {
        let m = &deref(m, "matroid")?.0;
        if !n.is_null() {
            n.write(m.n() as u32);
        }
        if !rank.is_null() {
            rank.write(m.rank() as u32);
        }
        if !num_bases.is_null() {
            num_bases.write(m.num_bases());
        }
        Ok(())
    })
}

/// Copies the sorted basis masks into `buf`. `len_out` always receives the
/// number of bases; a short buffer yields `MATREP_STATUS_BUFFER_TOO_SMALL`.
///
/// # Safety
/// `buf` must be null or valid for `cap` writes; `len_out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn matrep_matroid_bases(
    m: *const MatrepMatroid,
    buf: *mut u32,
    cap: usize,
    len_out: *mut usize,
) -> MatrepStatus {
    guard(|| {
        let m = &deref(m, "matroid")?.0;
        write(len_out, m.num_bases(), "len_out")?;
        if cap < m.num_bases() || (buf.is_null() && m.num_bases() > 0) {
            return Err(Fail::Buffer(m.num_bases()));
        }
        for (i, b) in m.bases().iter().enumerate() {
            buf.add(i).write(b.0);
        }
        Ok(())
    })
}

/// Writes the census line of `m` (NUL-terminated) into `buf`; `len_out`
/// receives the length without terminator.
///
/// # Safety
/// `buf` must be null or valid for `cap` bytes; `len_out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn matrep_matroid_format(
    m: *const MatrepMatroid,
    buf: *mut c_char,
    cap: usize,
    len_out: *mut usize,
) -> MatrepStatus {
    guard(|| {
        let line = format_matroid(&deref(m, "matroid")?.0);
        write(len_out, line.len(), "len_out")?;
        if buf.is_null() || cap <= line.len() {
            return Err(Fail::Buffer(line.len() + 1));
        }
        ptr::copy_nonoverlapping(line.as_ptr().cast::<c_char>(), buf, line.len());
        *buf.add(line.len()) = 0;
        Ok(())
    })
}

/// The dual matroid as a new handle.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn matrep_matroid_dual(m: *const MatrepMatroid, out: *mut *mut MatrepMatroid) -> MatrepStatus {
    guard(|| {
        let d = deref(m, "matroid")?.0.dual();
        write(out, boxed_matroid(d), "out")
    })
}

/// The canonical representative (new handle) and automorphism group order.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable; `automorphisms` may be null.
#[no_mangle]
pub unsafe extern "C" fn matrep_matroid_canonical(
    m: *const MatrepMatroid,
    out: *mut *mut MatrepMatroid,
    automorphisms: *mut u64,
) -> MatrepStatus {
    guard(|| {
        let cf = deref(m, "matroid")?.0.canonical_form()?;
        if !automorphisms.is_null() {
            automorphisms.write(cf.automorphisms);
        }
        write(out, boxed_matroid(cf.matroid), "out")
    })
}

/// Whether two matroids are isomorphic.
///
/// # Safety
/// Both handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn matrep_matroid_isomorphic(
    a: *const MatrepMatroid,
    b: *const MatrepMatroid,
    out: *mut bool,
) -> MatrepStatus {
    guard(|| {
        let ka = deref(a, "a")?.0.canonical_key()?;
        let kb = deref(b, "b")?.0.canonical_key()?;
        write(out, ka == kb, "out")
    })
}

/// Whether the masks form the basis family of a matroid on `[n]`. An empty
/// family is not one.
///
/// # Safety
/// `masks` must be valid for `count` reads; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn matrep_check_exchange(
    n: u32,
    masks: *const u32,
    count: usize,
    out: *mut bool,
) -> MatrepStatus {
    guard(|| {
        let family: Vec<SubsetMask> = read_masks(masks, count)?.iter().map(|&b| SubsetMask(b)).collect();
        let ok = check_exchange(n as usize, &family)?;
        write(out, ok, "out")
    })
}

/// Creates GF(q) for a supported prime power `q <= 16`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn matrep_field_new(q: u32, out: *mut *mut MatrepField) -> MatrepStatus {
    guard(|| {
        let ctx = GfContext::of_order(u64::from(q))?;
        write(out, Box::into_raw(Box::new(MatrepField(ctx))), "out")
    })
}

/// Releases a field handle. Null is ignored.
///
/// # Safety
/// `f` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn matrep_field_free(f: *mut MatrepField) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Field order, or 0 for a null handle.
///
/// # Safety
/// `f` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn matrep_field_order(f: *const MatrepField) -> u32 {
    f.as_ref().map_or(0, |f| f.0.order() as u32)
}

/// Searches for a representation of `m` over `field`.
///
/// When found, the `rank × n` matrix is written row-major into `matrix` as
/// field element indices; its columns realize exactly the bases of `m`.
/// `matrix` may be null to skip it, otherwise it needs `rank * n` entries.
/// A zero `budget` means the library default.
///
/// # Safety
/// Handles must be live; `matrix` must be null or valid for `cap` writes;
/// `outcome` must be writable; `nodes` may be null.
#[no_mangle]
pub unsafe extern "C" fn matrep_find_representation(
    m: *const MatrepMatroid,
    field: *const MatrepField,
    budget: u64,
    row_normalization: bool,
    outcome: *mut MatrepRepOutcome,
    matrix: *mut u8,
    cap: usize,
    nodes: *mut u64,
) -> MatrepStatus {
    guard(|| {
        let m = &deref(m, "matroid")?.0;
        let ctx = &deref(field, "field")?.0;
        let mut opts = SearchOptions {
            row_normalization,
            ..SearchOptions::default()
        };
        if budget > 0 {
            opts.budget = budget;
        }
        let summary = representable_over_any(m, std::slice::from_ref(ctx), opts)?;
        let f = &summary.per_field[0];
        if !nodes.is_null() {
            nodes.write(f.result.stats.nodes);
        }
        let o = match f.result.status {
            RepStatus::Found => MatrepRepOutcome::Found,
            RepStatus::NotRepresentable => MatrepRepOutcome::NotRepresentable,
            RepStatus::BudgetExceeded => MatrepRepOutcome::BudgetExceeded,
        };
        write(outcome, o, "outcome")?;
        if let (Some(a), false) = (&f.matrix, matrix.is_null()) {
            let entries = a.entries();
            if cap < entries.len() {
                return Err(Fail::Buffer(entries.len()));
            }
            ptr::copy_nonoverlapping(entries.as_ptr(), matrix, entries.len());
        }
        Ok(())
    })
}

fn bound_out(b: Result<LogBound, Error>, value: *mut f64, radius: *mut f64) -> Result<(), Fail> {
    let b = b?;
    unsafe {
        write(value, b.to_f64(), "value")?;
        if !radius.is_null() {
            radius.write(b.radius);
        }
    }
    Ok(())
}

/// `log2 k(n, r)` rounded to double, with its error radius (may be null).
///
/// # Safety
/// `value` must be writable; `radius` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn matrep_log2_k(n: u64, r: u64, value: *mut f64, radius: *mut f64) -> MatrepStatus {
    guard(|| bound_out(log2_k(n, r), value, radius))
}

/// `log2 k'(n, r)`; `r = 0` is an error.
///
/// # Safety
/// As for [`matrep_log2_k`].
#[no_mangle]
pub unsafe extern "C" fn matrep_log2_k_prime(n: u64, r: u64, value: *mut f64, radius: *mut f64) -> MatrepStatus {
    guard(|| bound_out(log2_k_prime(n, r), value, radius))
}

/// Exponent of the lower bound on the number of matroids on `[n]`.
///
/// # Safety
/// As for [`matrep_log2_k`].
#[no_mangle]
pub unsafe extern "C" fn matrep_knuth_log2_lower(n: u64, value: *mut f64, radius: *mut f64) -> MatrepStatus {
    guard(|| bound_out(knuth_log2_lower(n), value, radius))
}

/// `log2` of the conjectured count of matroids on `[n]`.
///
/// # Safety
/// As for [`matrep_log2_k`].
#[no_mangle]
pub unsafe extern "C" fn matrep_conjecture_log2_count(n: u64, value: *mut f64, radius: *mut f64) -> MatrepStatus {
    guard(|| bound_out(conjecture_log2_count(n), value, radius))
}

/// `d(n) = (⌊n/2⌋ - 1)(⌈n/2⌉ - 1)` for `n >= 2`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn matrep_d_of_n(n: u64, out: *mut u64) -> MatrepStatus {
    guard(|| {
        let d = d_of_n(n)?;
        write(out, d, "out")
    })
}

fn check_of(s: CheckStatus) -> MatrepCheck {
    match s {
        CheckStatus::Holds => MatrepCheck::Holds,
        CheckStatus::Fails => MatrepCheck::Fails,
        CheckStatus::Indeterminate => MatrepCheck::Indeterminate,
    }
}

/// The dimension-count hypothesis at the matroid instance `(n, r)`. `margin`
/// receives NaN when the right-hand side is not positive.
///
/// # Safety
/// `check` must be writable; `margin` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn matrep_theorem2_instance(
    n: u64,
    r: u64,
    check: *mut MatrepCheck,
    margin: *mut f64,
) -> MatrepStatus {
    guard(|| {
        let c = theorem2_matroid_instance(n, r)?;
        write(check, check_of(c.status), "check")?;
        if !margin.is_null() {
            margin.write(c.margin.as_ref().map_or(f64::NAN, LogBound::to_f64));
        }
        Ok(())
    })
}

/// The aggregate bound on representable matroids at `n >= 12`.
///
/// # Safety
/// `check` must be writable; `margin` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn matrep_main_theorem_check(n: u64, check: *mut MatrepCheck, margin: *mut f64) -> MatrepStatus {
    guard(|| {
        let c = main_theorem_check(n)?;
        write(check, check_of(c.status), "check")?;
        if !margin.is_null() {
            margin.write(c.margin.to_f64());
        }
        Ok(())
    })
}
