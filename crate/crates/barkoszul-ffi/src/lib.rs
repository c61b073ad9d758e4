//! C ABI for the library: a session is an opaque handle opened from a group
//! name or from group spec text, every call returns a status code mirroring
//! the CLI exit contract, and all strings cross the boundary as heap-owned
//! NUL-terminated UTF-8 that the caller releases with `bk_string_free`.
//!
//! The last failure on a session is kept on the handle; `bk_last_error`
//! borrows it until the next failing call on the same session.

use std::ffi::{c_char, CStr, CString};
use std::ptr;

use barkoszul::session::{Session, SessionConfig};
use barkoszul::Error;

/// Call outcome.  `Ok` and the first two failure kinds mirror the CLI exit
/// codes; the remaining kinds only arise at the C boundary itself.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BkStatus {
    /// The call succeeded; out-parameters are filled.
    Ok = 0,
    /// An exact identity failed, or an input exceeded a degree cap.
    IdentityFailure = 1,
    /// Unusable input: parse, load, range, or unknown-name failures.
    InvalidInput = 2,
    /// A required pointer argument was null.
    NullArgument = 3,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 4,
}

/// Opaque session handle: a loaded group plus caps, seed, and output format.
pub struct BkSession {
    session: Session,
    last_error: Option<CString>,
}

fn status_for(e: &Error) -> BkStatus {
    match e {
        Error::DegreeCapExceeded { .. } => BkStatus::IdentityFailure,
        _ => BkStatus::InvalidInput,
    }
}

fn c_owned(s: &str) -> *mut c_char {
    // Interior NULs cannot be rendered by the library; replace defensively.
    let clean;
    let text = if s.as_bytes().contains(&0) {
        clean = s.replace('\0', " ");
        &clean
    } else {
        s
    };
    CString::new(text).expect("NUL-free by construction").into_raw()
}

unsafe fn text_arg<'a>(p: *const c_char) -> Result<Option<&'a str>, BkStatus> {
    if p.is_null() {
        return Ok(None);
    }
    match CStr::from_ptr(p).to_str() {
        Ok(s) => Ok(Some(s)),
        Err(_) => Err(BkStatus::InvalidUtf8),
    }
}

unsafe fn record_error(handle: *mut BkSession, e: &Error) -> BkStatus {
    (*handle).last_error = Some(CString::new(e.to_string().replace('\0', " ")).unwrap());
    status_for(e)
}

unsafe fn open_with(
    config: Result<SessionConfig, Error>,
    build: impl FnOnce(SessionConfig) -> Result<Session, Error>,
    error_out: *mut *mut c_char,
) -> *mut BkSession {
    if !error_out.is_null() {
        *error_out = ptr::null_mut();
    }
    let opened = config.and_then(build);
    match opened {
        Ok(session) => Box::into_raw(Box::new(BkSession { session, last_error: None })),
        Err(e) => {
            if !error_out.is_null() {
                *error_out = c_owned(&e.to_string());
            }
            ptr::null_mut()
        }
    }
}

unsafe fn assemble_config(
    max_p: u32,
    max_degree: u32,
    seed: u64,
    format: *const c_char,
    group: String,
) -> Result<SessionConfig, Error> {
    let format = match text_arg(format).map_err(|_| Error::invalid("format is not UTF-8"))? {
        Some(s) => s.parse()?,
        None => Default::default(),
    };
    Ok(SessionConfig { group, max_p: max_p as usize, max_degree, seed, format })
}

/// Opens a session on a builtin group name or a group spec file path.
/// Returns null on failure; when `error_out` is non-null it then receives the
/// failure message, owned by the caller.
///
/// # Safety
/// `group` must point to a NUL-terminated string; `format` and `error_out`
/// may be null.
#[no_mangle]
pub unsafe extern "C" fn bk_session_open_name(
    group: *const c_char,
    max_p: u32,
    max_degree: u32,
    seed: u64,
    format: *const c_char,
    error_out: *mut *mut c_char,
) -> *mut BkSession {
    let Ok(Some(group)) = text_arg(group) else {
        if !error_out.is_null() {
            *error_out = c_owned("group must be a UTF-8 string");
        }
        return ptr::null_mut();
    };
    let config = assemble_config(max_p, max_degree, seed, format, group.to_string());
    open_with(config, Session::open, error_out)
}

/// Opens a session on a group given directly as spec text (`dim n;` header
/// plus generator rows).  Same contract as `bk_session_open_name`.
///
/// # Safety
/// `text` must point to a NUL-terminated string; `format` and `error_out`
/// may be null.
#[no_mangle]
pub unsafe extern "C" fn bk_session_open_spec(
    text: *const c_char,
    max_p: u32,
    max_degree: u32,
    seed: u64,
    format: *const c_char,
    error_out: *mut *mut c_char,
) -> *mut BkSession {
    let Ok(Some(text)) = text_arg(text) else {
        if !error_out.is_null() {
            *error_out = c_owned("spec text must be a UTF-8 string");
        }
        return ptr::null_mut();
    };
    let text = text.to_string();
    let config = assemble_config(max_p, max_degree, seed, format, "<spec text>".to_string());
    open_with(config, move |c| Session::from_spec_text(c, &text), error_out)
}

/// Releases a session handle.  Null is ignored.
///
/// # Safety
/// `handle` must be null or a pointer returned by one of the open calls, not
/// yet closed.
#[no_mangle]
pub unsafe extern "C" fn bk_session_close(handle: *mut BkSession) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// The message of the last failing call on this session, borrowed until the
/// next failing call; null when no call has failed yet.
///
/// # Safety
/// `handle` must be a live session pointer.
#[no_mangle]
pub unsafe extern "C" fn bk_last_error(handle: *const BkSession) -> *const c_char {
    match &(*handle).last_error {
        Some(s) => s.as_ptr(),
        None => ptr::null(),
    }
}

/// Hash of the loaded group's multiplication table; equal groups hash
/// equally, and reports embed the same value.
///
/// # Safety
/// `handle` must be a live session pointer.
#[no_mangle]
pub unsafe extern "C" fn bk_group_hash(handle: *const BkSession) -> u64 {
    (*handle).session.group.hash
}

/// Applies a named map (`psi`, `phi`, `upsilon`, `dstar`, `reynolds`,
/// `psi-star`) to textual input and writes the rendered image to `out`,
/// owned by the caller.  `input`, `form`, and `args` are each optional,
/// matching the CLI flags.
///
/// # Safety
/// `handle` must be a live session pointer, `map` and `out` non-null;
/// `input`, `form`, and `args` may be null.
#[no_mangle]
pub unsafe extern "C" fn bk_apply(
    handle: *mut BkSession,
    map: *const c_char,
    input: *const c_char,
    form: *const c_char,
    args: *const c_char,
    out: *mut *mut c_char,
) -> BkStatus {
    if handle.is_null() || map.is_null() || out.is_null() {
        return BkStatus::NullArgument;
    }
    *out = ptr::null_mut();
    let (map, input, form, args) = match (|| {
        Ok((text_arg(map)?.unwrap(), text_arg(input)?, text_arg(form)?, text_arg(args)?))
    })() {
        Ok(v) => v,
        Err(status) => return status,
    };
    match (*handle).session.apply(map, input, form, args) {
        Ok(rendered) => {
            *out = c_owned(&rendered);
            BkStatus::Ok
        }
        Err(e) => record_error(handle, &e),
    }
}

/// Runs a verification suite (`chainmap`, `psi-phi`, `phi-upsilon`,
/// `upsilon-psi-star`, `change-of-basis`, `homology-oracle`, or `all`) and
/// writes the rendered report to `out` and the failure count to `failures`
/// (when non-null).  Returns `IdentityFailure` when any case failed; the
/// report is still written.
///
/// # Safety
/// `handle` must be a live session pointer, `suite` and `out` non-null;
/// `failures` may be null.
#[no_mangle]
pub unsafe extern "C" fn bk_verify(
    handle: *mut BkSession,
    suite: *const c_char,
    out: *mut *mut c_char,
    failures: *mut u64,
) -> BkStatus {
    if handle.is_null() || suite.is_null() || out.is_null() {
        return BkStatus::NullArgument;
    }
    *out = ptr::null_mut();
    let suite = match text_arg(suite) {
        Ok(Some(s)) => s,
        Ok(None) => unreachable!("null checked above"),
        Err(status) => return status,
    };
    match (*handle).session.verify(suite) {
        Ok((report, count)) => {
            *out = c_owned(&report);
            if !failures.is_null() {
                *failures = count;
            }
            if count == 0 {
                BkStatus::Ok
            } else {
                BkStatus::IdentityFailure
            }
        }
        Err(e) => record_error(handle, &e),
    }
}

/// Writes the dimension table for the selected components (`selector` is an
/// element name or index, or `all`) over inclusive degree ranges to `out`,
/// owned by the caller.  Backwards ranges render a header-only table.
///
/// # Safety
/// `handle` must be a live session pointer, `selector` and `out` non-null.
#[no_mangle]
pub unsafe extern "C" fn bk_dims(
    handle: *mut BkSession,
    selector: *const c_char,
    p_lo: u32,
    p_hi: u32,
    internal_lo: i64,
    internal_hi: i64,
    invariant: bool,
    out: *mut *mut c_char,
) -> BkStatus {
    if handle.is_null() || selector.is_null() || out.is_null() {
        return BkStatus::NullArgument;
    }
    *out = ptr::null_mut();
    let selector = match text_arg(selector) {
        Ok(Some(s)) => s,
        Ok(None) => unreachable!("null checked above"),
        Err(status) => return status,
    };
    let table = (*handle).session.dims(
        selector,
        (p_lo as usize, p_hi as usize),
        (internal_lo, internal_hi),
        invariant,
    );
    match table {
        Ok(rendered) => {
            *out = c_owned(&rendered);
            BkStatus::Ok
        }
        Err(e) => record_error(handle, &e),
    }
}

/// Releases a string returned through an out-parameter.  Null is ignored.
///
/// # Safety
/// `s` must be null or a string produced by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bk_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
