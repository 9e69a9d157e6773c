//! C ABI over `sievelab`.
//!
//! Every function returns a [`SievelabStatus`] and writes results through out
//! pointers, which are left untouched on failure. After a failure,
//! [`sievelab_last_error`] describes it. Panics are caught at the boundary and
//! reported as `SIEVELAB_STATUS_PANIC`.
//!
//! Tables are opaque handles: create them with `*_new`, release them with the
//! matching `*_free`. A handle may be shared between threads for reading.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use sievelab::bounds::{bound_value, BoundSpec, CountKind, Theorem};
use sievelab::constants::{c1, c2, c_delta, f_ad, singular_series};
use sievelab::counters::{count_n2, count_s2, count_sk, FactorMode, Tables};
use sievelab::params::richert_derive;
use sievelab::primes::PrimeTable;
use sievelab::rational::Rational;
use sievelab::Error;

/// Outcome of a call.
#[repr(i32)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SievelabStatus {
    Ok = 0,
    NullPointer = 1,
    /// An argument is outside the domain of the operation.
    Domain = 2,
    /// A requested size exceeds a built-in ceiling.
    Capacity = 3,
    /// A table does not reach far enough for the request.
    TableTooSmall = 4,
    ToleranceNotMet = 5,
    EmptyFeasibleSet = 6,
    Parse = 7,
    Io = 8,
    Panic = 9,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    // interior NULs cannot cross into C
    let msg = CString::new(msg.replace('\0', " ")).expect("NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &Error) -> SievelabStatus {
    match e {
        Error::Domain(_) => SievelabStatus::Domain,
        Error::Capacity { .. } => SievelabStatus::Capacity,
        Error::TableTooSmall { .. } => SievelabStatus::TableTooSmall,
        Error::ToleranceNotMet { .. } => SievelabStatus::ToleranceNotMet,
        Error::EmptyFeasibleSet(_) => SievelabStatus::EmptyFeasibleSet,
        Error::Parse(_) => SievelabStatus::Parse,
        Error::Cache(_) | Error::Io(_) | Error::Csv(_) | Error::Json(_) => SievelabStatus::Io,
    }
}

enum Failure {
    Null(&'static str),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

/// Runs `f`, turning errors and panics into a status plus a last-error message.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> SievelabStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SievelabStatus::Ok,
        Ok(Err(Failure::Null(what))) => {
            set_last_error(format!("null pointer: {what}"));
            SievelabStatus::NullPointer
        }
        Ok(Err(Failure::Lib(e))) => {
            set_last_error(e.to_string());
            status_of(&e)
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("panic: {msg}"));
            SievelabStatus::Panic
        }
    }
}

/// Writes through `out`, which must be null or valid for writes.
fn put<T>(out: *mut T, value: T, what: &'static str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null(what));
    }
    // SAFETY: non-null, and the caller promises validity
    unsafe { out.write(value) };
    Ok(())
}

fn get<'a, T>(handle: *const T, what: &'static str) -> Result<&'a T, Failure> {
    // SAFETY: non-null handles come from the matching *_new
    unsafe { handle.as_ref() }.ok_or(Failure::Null(what))
}

fn ratio(num: i64, den: i64) -> Result<Rational, Failure> {
    if den == 0 {
        return Err(Failure::Lib(Error::Domain("zero denominator".into())));
    }
    Ok(Rational::new(num as i128, den as i128))
}

fn mode_of(mode: u32) -> Result<FactorMode, Failure> {
    match mode {
        0 => Ok(FactorMode::Multiplicity),
        1 => Ok(FactorMode::Distinct),
        _ => Err(Failure::Lib(Error::Domain(format!("mode must be 0 or 1, got {mode}")))),
    }
}

/// Message for the last failed call on this thread, or NULL after none.
/// The string stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn sievelab_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sievelab_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(s) => s,
        Err(_) => panic!("version has no interior NUL"),
    };
    VERSION.as_ptr()
}

/// Bit-packed odd-only sieve of all primes up to a limit.
pub struct SievelabPrimeTable(PrimeTable);

/// Prime and smallest-prime-factor tables for counting.
pub struct SievelabTables(Tables);

/// Sieves the primes up to `limit` into a new table.
///
/// # Safety
/// `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn sievelab_prime_table_new(limit: u64, out: *mut *mut SievelabPrimeTable) -> SievelabStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure::Null("out"));
        }
        let t = PrimeTable::sieve(limit)?;
        put(out, Box::into_raw(Box::new(SievelabPrimeTable(t))), "out")
    })
}

/// Releases a table; NULL is ignored.
///
/// # Safety
/// `table` must come from `sievelab_prime_table_new` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sievelab_prime_table_free(table: *mut SievelabPrimeTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

/// `pi(x)`; `x` may not exceed the table limit.
///
/// # Safety
/// `table` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sievelab_prime_table_pi(table: *const SievelabPrimeTable, x: u64, out: *mut u64) -> SievelabStatus {
    guard(|| {
        let t = get(table, "table")?;
        put(out, t.0.pi(x)?, "out")
    })
}

/// Primality of `n`; `n` may not exceed the table limit.
///
/// # Safety
/// `table` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sievelab_prime_table_is_prime(
    table: *const SievelabPrimeTable,
    n: u64,
    out: *mut bool,
) -> SievelabStatus {
    guard(|| {
        let t = get(table, "table")?;
        t.0.ensure_covers(n)?;
        put(out, t.0.is_prime(n), "out")
    })
}

/// The largest integer the table covers.
///
/// # Safety
/// `table` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sievelab_prime_table_limit(table: *const SievelabPrimeTable, out: *mut u64) -> SievelabStatus {
    guard(|| {
        let t = get(table, "table")?;
        put(out, t.0.limit(), "out")
    })
}

/// Tables for counts up to `n` with shift `b` and power `2^k`. Honors the
/// `SIEVELAB_CACHE` directory.
///
/// # Safety
/// `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn sievelab_tables_new(n: u64, b: u64, k: u32, out: *mut *mut SievelabTables) -> SievelabStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure::Null("out"));
        }
        let t = Tables::for_counting(n, b, k)?;
        put(out, Box::into_raw(Box::new(SievelabTables(t))), "out")
    })
}

/// Releases counting tables; NULL is ignored.
///
/// # Safety
/// `tables` must come from `sievelab_tables_new` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sievelab_tables_free(tables: *mut SievelabTables) {
    if !tables.is_null() {
        drop(Box::from_raw(tables));
    }
}

/// `s_K(N)`. `mode` is 0 to count prime factors with multiplicity, 1 for distinct.
///
/// # Safety
/// `tables` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sievelab_count_sk(
    tables: *const SievelabTables,
    n: u64,
    b: u64,
    k: u32,
    big_k: u32,
    mode: u32,
    out: *mut u64,
) -> SievelabStatus {
    guard(|| {
        let t = get(tables, "tables")?;
        put(out, count_sk(n, b, k, big_k, mode_of(mode)?, &t.0)?, "out")
    })
}

/// `n_2(N)` with prime factors above `N'^(zexp_num / zexp_den)`.
///
/// # Safety
/// `tables` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sievelab_count_n2(
    tables: *const SievelabTables,
    n: u64,
    b: u64,
    k: u32,
    zexp_num: i64,
    zexp_den: i64,
    out: *mut u64,
) -> SievelabStatus {
    guard(|| {
        let t = get(tables, "tables")?;
        put(out, count_n2(n, b, k, &ratio(zexp_num, zexp_den)?, &t.0)?, "out")
    })
}

/// `s_2(N)`, as `sievelab_count_n2` without exact divisibility by `2^k`.
///
/// # Safety
/// `tables` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sievelab_count_s2(
    tables: *const SievelabTables,
    n: u64,
    b: u64,
    k: u32,
    zexp_num: i64,
    zexp_den: i64,
    out: *mut u64,
) -> SievelabStatus {
    guard(|| {
        let t = get(tables, "tables")?;
        put(out, count_s2(n, b, k, &ratio(zexp_num, zexp_den)?, &t.0)?, "out")
    })
}

/// `C1(a, delta)`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sievelab_c1(a: f64, delta: f64, out: *mut f64) -> SievelabStatus {
    guard(|| put(out, c1(a, delta)?, "out"))
}

/// `C2(a, delta)`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sievelab_c2(a: f64, delta: f64, out: *mut f64) -> SievelabStatus {
    guard(|| put(out, c2(a, delta)?, "out"))
}

/// `C_delta`, integrated to absolute tolerance `tol`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sievelab_c_delta(delta: f64, tol: f64, out: *mut f64) -> SievelabStatus {
    guard(|| put(out, c_delta(delta, tol)?.value, "out"))
}

/// `f(a, delta) = C1 - 2 C2 - 2 delta C_delta / (1 - a)`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sievelab_f_ad(a: f64, delta: f64, tol: f64, out: *mut f64) -> SievelabStatus {
    guard(|| put(out, f_ad(a, delta, tol)?, "out"))
}

/// Leading constant of the `s_K` lower bound for `3 <= K <= 8`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sievelab_richert_constant(big_k: u32, epsilon: f64, out: *mut f64) -> SievelabStatus {
    guard(|| put(out, richert_derive(big_k, epsilon)?.lead_constant, "out"))
}

/// Which count a bound refers to; passed to [`sievelab_bound`] as an `int32_t`.
#[repr(i32)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SievelabKind {
    N2 = 0,
    S2 = 1,
    SK = 2,
}

/// Lower bound for a count, with the twin-prime product truncated at
/// `truncation`. `kind` is a `SIEVELAB_KIND_*` value and `big_k` is read only
/// for `SIEVELAB_KIND_SK`. The exact bound lies in `[*value - *err, *value]`.
///
/// # Safety
/// `value` and `err` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sievelab_bound(
    kind: i32,
    big_k: u32,
    n: u64,
    b: u64,
    k: u32,
    epsilon: f64,
    truncation: u64,
    value: *mut f64,
    err: *mut f64,
) -> SievelabStatus {
    guard(|| {
        if value.is_null() || err.is_null() {
            return Err(Failure::Null("value/err"));
        }
        let kind = match kind {
            k if k == SievelabKind::N2 as i32 => CountKind::N2,
            k if k == SievelabKind::S2 as i32 => CountKind::S2,
            k if k == SievelabKind::SK as i32 => CountKind::SK,
            k => return Err(Failure::Lib(Error::Domain(format!("unknown count kind {k}")))),
        };
        let theorem = Theorem::for_count(kind, Some(big_k))
            .ok_or_else(|| Error::Domain(format!("no s_K bound for K = {big_k}")))?;
        let spec = BoundSpec::new(theorem, n, b, k, epsilon, singular_series(b, truncation)?)?;
        let v = bound_value(&spec)?;
        put(value, v.value, "value")?;
        put(err, v.err, "err")
    })
}
