//! C ABI for grpeq.
//!
//! Objects cross the boundary as opaque handles created by `*_new`/`*_load`
//! functions and released with the matching `*_free`. Every fallible call
//! returns a [`GrpeqStatus`]; on failure `grpeq_last_error()` describes the
//! problem until the next failing call on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use grpeq::catalog::load_group;
use grpeq::expr::io::parse_expression;
use grpeq::expr::Expression;
use grpeq::reduction::{compile_coloring, decide_compiled, find_kh, DecideOptions, GraphInstance, KHCertificate};
use grpeq::solver::{eqnid_bruteforce, eqnsat_bruteforce, SolveBudget};
use grpeq::{Error, Group};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GrpeqStatus {
    Ok = 0,
    /// Null pointer, invalid UTF-8 or an out-of-range element.
    InvalidArgument = 1,
    Input = 2,
    BudgetExceeded = 3,
    NotSolvable = 4,
    Nilpotent = 5,
    Inapplicable = 6,
    Internal = 7,
    Io = 8,
    Other = 9,
    Panic = 10,
}

/// A finite group.
pub struct GrpeqGroup(Group);

/// A verified `(K, H)` certificate together with its group.
pub struct GrpeqCertificate(KHCertificate);

/// An expression with the group name from its file header.
pub struct GrpeqExpression {
    expr: Expression,
    group: CString,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> GrpeqStatus {
    match e {
        Error::Input(_) | Error::NotReadOnce(_) | Error::NotCommutatorFixed | Error::GroupTooLarge { .. } => {
            GrpeqStatus::Input
        }
        Error::BudgetExceeded { .. } => GrpeqStatus::BudgetExceeded,
        Error::NotSolvable => GrpeqStatus::NotSolvable,
        Error::Nilpotent => GrpeqStatus::Nilpotent,
        Error::Inapplicable(_) => GrpeqStatus::Inapplicable,
        Error::Internal(_) => GrpeqStatus::Internal,
        Error::Io(_) => GrpeqStatus::Io,
        _ => GrpeqStatus::Other,
    }
}

struct Fail(GrpeqStatus);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        set_error(e.to_string());
        Fail(status_of(&e))
    }
}

fn invalid(msg: &str) -> Fail {
    set_error(msg.to_string());
    Fail(GrpeqStatus::InvalidArgument)
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> GrpeqStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => GrpeqStatus::Ok,
        Ok(Err(Fail(s))) => s,
        Err(_) => {
            set_error("panic inside grpeq".into());
            GrpeqStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(invalid("null string"));
    }
    CStr::from_ptr(p).to_str().map_err(|_| invalid("string is not UTF-8"))
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| invalid("null handle"))
}

unsafe fn out<'a, T>(p: *mut T) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| invalid("null output pointer"))
}

/// Message of the last failure on this thread, or NULL. Owned by the
/// library; valid until the next failing call.
#[no_mangle]
pub extern "C" fn grpeq_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must come from a grpeq function returning an owned string, or be NULL.
#[no_mangle]
pub unsafe extern "C" fn grpeq_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Loads a catalog group (`s4`, `g168`, …), `c<n>`, or a generator file.
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn grpeq_group_load(name: *const c_char, out_group: *mut *mut GrpeqGroup) -> GrpeqStatus {
    guard(|| {
        let slot = out(out_group)?;
        let (_, g) = load_group(str_arg(name)?)?;
        *slot = Box::into_raw(Box::new(GrpeqGroup(g)));
        Ok(())
    })
}

/// Builds a group from generator-file text (`degree N` then cycles).
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn grpeq_group_from_spec(text: *const c_char, out_group: *mut *mut GrpeqGroup) -> GrpeqStatus {
    guard(|| {
        let slot = out(out_group)?;
        let spec = str_arg(text)?.parse()?;
        *slot = Box::into_raw(Box::new(GrpeqGroup(Group::from_spec(&spec)?)));
        Ok(())
    })
}

/// # Safety
/// `g` must come from this library and not be used afterwards, or be NULL.
#[no_mangle]
pub unsafe extern "C" fn grpeq_group_free(g: *mut GrpeqGroup) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Order of the group, 0 for a NULL handle.
///
/// # Safety
/// `g` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn grpeq_group_order(g: *const GrpeqGroup) -> usize {
    g.as_ref().map_or(0, |g| g.0.order())
}

/// Product `a·b` of two element indices.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn grpeq_group_mul(g: *const GrpeqGroup, a: usize, b: usize, out_elem: *mut usize) -> GrpeqStatus {
    guard(|| {
        let g = &handle(g)?.0;
        let slot = out(out_elem)?;
        if a >= g.order() || b >= g.order() {
            return Err(invalid("element index out of range"));
        }
        *slot = g.mul(a, b);
        Ok(())
    })
}

/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn grpeq_group_fitting_length(g: *const GrpeqGroup, out_len: *mut usize) -> GrpeqStatus {
    guard(|| {
        let d = handle(g)?.0.fitting_length()?;
        *out(out_len)? = d;
        Ok(())
    })
}

/// Searches for a certificate; the group is copied into it.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn grpeq_find_kh(g: *const GrpeqGroup, out_cert: *mut *mut GrpeqCertificate) -> GrpeqStatus {
    guard(|| {
        let slot = out(out_cert)?;
        let cert = find_kh(&handle(g)?.0)?;
        *slot = Box::into_raw(Box::new(GrpeqCertificate(cert)));
        Ok(())
    })
}

/// # Safety
/// `c` must come from this library and not be used afterwards, or be NULL.
#[no_mangle]
pub unsafe extern "C" fn grpeq_cert_free(c: *mut GrpeqCertificate) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Summary of a certificate.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct GrpeqCertInfo {
    pub order: usize,
    pub fitting_length: usize,
    pub k_order: usize,
    pub h_order: usize,
    pub fitl_k: usize,
    /// Number of cosets of H, i.e. colors.
    pub index: usize,
    pub m: usize,
}

/// # Safety
/// `c` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn grpeq_cert_info(c: *const GrpeqCertificate, out_info: *mut GrpeqCertInfo) -> GrpeqStatus {
    guard(|| {
        let r = handle(c)?.0.report();
        *out(out_info)? = GrpeqCertInfo {
            order: r.order,
            fitting_length: r.fitting_length,
            k_order: r.k_order,
            h_order: r.h_order,
            fitl_k: r.fitl_k,
            index: r.index,
            m: r.m,
        };
        Ok(())
    })
}

/// Certificate text; free with `grpeq_string_free`.
///
/// # Safety
/// `c` must be a live handle; `name` a NUL-terminated string; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn grpeq_cert_to_text(
    c: *const GrpeqCertificate,
    name: *const c_char,
    out_text: *mut *mut c_char,
) -> GrpeqStatus {
    guard(|| {
        let text = handle(c)?.0.to_text(str_arg(name)?);
        *out(out_text)? = CString::new(text).map_err(|_| invalid("NUL in certificate text"))?.into_raw();
        Ok(())
    })
}

/// Loads and re-verifies certificate text.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn grpeq_cert_from_text(text: *const c_char, out_cert: *mut *mut GrpeqCertificate) -> GrpeqStatus {
    guard(|| {
        let slot = out(out_cert)?;
        let (_, cert) = KHCertificate::from_text(str_arg(text)?)?;
        *slot = Box::into_raw(Box::new(GrpeqCertificate(cert)));
        Ok(())
    })
}

/// Parses an expression file (`group <name> vars <n>` then tokens).
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn grpeq_expression_parse(text: *const c_char, out_expr: *mut *mut GrpeqExpression) -> GrpeqStatus {
    guard(|| {
        let slot = out(out_expr)?;
        let (header, expr) = parse_expression(str_arg(text)?)?;
        let group = CString::new(header.group).map_err(|_| invalid("NUL in group name"))?;
        *slot = Box::into_raw(Box::new(GrpeqExpression { expr, group }));
        Ok(())
    })
}

/// Group name from the expression header; owned by the handle.
///
/// # Safety
/// `e` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn grpeq_expression_group(e: *const GrpeqExpression) -> *const c_char {
    e.as_ref().map_or(ptr::null(), |e| e.group.as_ptr())
}

/// # Safety
/// `e` must come from this library and not be used afterwards, or be NULL.
#[no_mangle]
pub unsafe extern "C" fn grpeq_expression_free(e: *mut GrpeqExpression) {
    if !e.is_null() {
        drop(Box::from_raw(e));
    }
}

/// Brute-force EQNSAT (`identity == false`) or EQNID (`identity == true`)
/// within `budget` assignments (0 for the default).
///
/// # Safety
/// Handles must be live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn grpeq_solve(
    g: *const GrpeqGroup,
    e: *const GrpeqExpression,
    identity: bool,
    budget: u64,
    out_answer: *mut bool,
) -> GrpeqStatus {
    guard(|| {
        let g = &handle(g)?.0;
        let e = &handle(e)?.expr;
        let slot = out(out_answer)?;
        let b = if budget == 0 { SolveBudget::default() } else { SolveBudget(budget.into()) };
        *slot = if identity { eqnid_bruteforce(g, e, b)?.identity } else { eqnsat_bruteforce(g, e, b)?.satisfiable };
        Ok(())
    })
}

/// Compiles the coloring instance of a graph (`n` vertices, `m` edges as
/// `2m` endpoint indices) over the certificate and decides it exactly.
/// Writes the EQNSAT answer (colorable) and the EQNID answer.
///
/// # Safety
/// `c` must be live; `edges` must hold `2*m` values; outputs writable.
#[no_mangle]
pub unsafe extern "C" fn grpeq_decide_coloring(
    c: *const GrpeqCertificate,
    n: usize,
    edges: *const u32,
    m: usize,
    out_sat: *mut bool,
    out_id: *mut bool,
) -> GrpeqStatus {
    guard(|| {
        let cert = &handle(c)?.0;
        let (sat_slot, id_slot) = (out(out_sat)?, out(out_id)?);
        if edges.is_null() && m > 0 {
            return Err(invalid("null edge array"));
        }
        let raw = if m == 0 { &[][..] } else { std::slice::from_raw_parts(edges, 2 * m) };
        let pairs = raw.chunks_exact(2).map(|p| (p[0] as usize, p[1] as usize));
        let graph = GraphInstance::new(n, pairs, cert.report().index)?;
        let inst = compile_coloring(cert, &graph)?;
        let opts = DecideOptions { want_witness: false, ..DecideOptions::default() };
        let d = decide_compiled(cert, &graph, &inst, opts)?;
        *sat_slot = d.sat;
        *id_slot = d.id;
        Ok(())
    })
}

/// Library version, static string.
#[no_mangle]
pub extern "C" fn grpeq_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
