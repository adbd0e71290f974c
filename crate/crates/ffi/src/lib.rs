//! C ABI over the `admg` crate.
//!
//! Graphs live behind the opaque `AdmgGraph` handle. Every fallible call
//! returns an [`AdmgStatus`]; on failure, [`admg_last_error`] describes what
//! went wrong on the calling thread. Strings handed out by the library must be
//! released with [`admg_string_free`], graphs with [`admg_graph_free`].
//!
//! Vertex sets cross the boundary as comma-separated label lists, e.g.
//! `"x1,x2"`. The empty string is the empty set.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use admg::{Admg, BinaryParametrization, Error, MoebiusEngine, VertexSet};

/// Opaque graph handle.
pub struct AdmgGraph(Admg);

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdmgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Malformed `.admg` text or JSON. Structural problems found while
    /// reading `.admg` text (self-loops, duplicate or opposing edges) also land
    /// here, so the message can name the line.
    Parse = 3,
    /// A directed cycle, or a JSON graph that is not an ADMG.
    InvalidGraph = 4,
    UnknownLabel = 5,
    NotAncestral = 6,
    /// The graph is too large for the requested computation.
    BoundExceeded = 7,
    /// Parameters missing, malformed, or not matching the graph's heads.
    InvalidParams = 8,
    /// Output buffer has the wrong length.
    BufferSize = 9,
    /// Anything else, including X, Y, Z that are not disjoint.
    Other = 10,
    /// A bug: the library panicked. The handle is still safe to free.
    Panic = 11,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

struct Failure(AdmgStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Parse { .. } | Error::Json(_) => AdmgStatus::Parse,
            Error::Cycle(_)
            | Error::DuplicateEdge { .. }
            | Error::SelfLoop(_)
            | Error::OpposingDirected { .. }
            | Error::VertexOutOfRange { .. }
            | Error::TooManyVertices { .. }
            | Error::DuplicateLabel(_) => AdmgStatus::InvalidGraph,
            Error::UnknownLabel(_) => AdmgStatus::UnknownLabel,
            Error::NotAncestral(_) => AdmgStatus::NotAncestral,
            Error::BoundExceeded { .. } => AdmgStatus::BoundExceeded,
            Error::NotAHead(_) | Error::IncompleteParams(_) => AdmgStatus::InvalidParams,
            _ => AdmgStatus::Other,
        };
        Failure(status, e.to_string())
    }
}

/// Runs `f`, translating errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> AdmgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            AdmgStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal error (panic)");
            AdmgStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(AdmgStatus::NullPointer, format!("{what} is null"))
}

/// # Safety
/// `p` must be null or a valid nul-terminated string.
unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(AdmgStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

/// # Safety
/// `g` must be null or a handle from this library that has not been freed.
unsafe fn graph<'a>(g: *const AdmgGraph) -> Result<&'a Admg, Failure> {
    g.as_ref().map(|g| &g.0).ok_or_else(|| null("graph"))
}

fn set_of(g: &Admg, list: &str) -> Result<VertexSet, Failure> {
    let labels: Vec<&str> = list.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    Ok(g.set_of(&labels)?)
}

fn out_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    let s = CString::new(s).map_err(|_| Failure(AdmgStatus::Other, "output contains a nul byte".into()))?;
    unsafe { *out = s.into_raw() };
    Ok(())
}

unsafe fn parse_into(
    source: *const c_char,
    out: *mut *mut AdmgGraph,
    parse: fn(&str) -> admg::Result<Admg>,
) -> AdmgStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let g = parse(text(source, "text")?)?;
        *out = Box::into_raw(Box::new(AdmgGraph(g)));
        Ok(())
    })
}

/// Parses the `.admg` text format. On success `*out` owns a new graph.
///
/// # Safety
/// `source` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn admg_graph_parse(source: *const c_char, out: *mut *mut AdmgGraph) -> AdmgStatus {
    parse_into(source, out, admg::parse_admg)
}

/// Parses the JSON graph format (`{"nodes": [...], "directed": [...], "bidirected": [...]}`).
///
/// # Safety
/// As [`admg_graph_parse`].
#[no_mangle]
pub unsafe extern "C" fn admg_graph_parse_json(source: *const c_char, out: *mut *mut AdmgGraph) -> AdmgStatus {
    parse_into(source, out, admg::parse_json)
}

/// Frees a graph. Null is ignored.
///
/// # Safety
/// `g` must be null or a handle from this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn admg_graph_free(g: *mut AdmgGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Number of vertices; 0 for a null handle.
///
/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn admg_graph_vertex_count(g: *const AdmgGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.n())
}

/// Writes the graph back out in `.admg` text form.
///
/// # Safety
/// `g` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn admg_graph_to_text(g: *const AdmgGraph, out: *mut *mut c_char) -> AdmgStatus {
    guard(|| out_string(out, admg::to_admg_string(graph(g)?)))
}

/// Sets `*out` to whether `x` and `y` are m-separated given `given`.
///
/// # Safety
/// `g` must be a live handle, the sets nul-terminated strings, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn admg_is_m_separated(
    g: *const AdmgGraph,
    x: *const c_char,
    y: *const c_char,
    given: *const c_char,
    out: *mut bool,
) -> AdmgStatus {
    guard(|| {
        let g = graph(g)?;
        let (x, y, z) = (
            set_of(g, text(x, "x")?)?,
            set_of(g, text(y, "y")?)?,
            set_of(g, text(given, "given")?)?,
        );
        if out.is_null() {
            return Err(null("out"));
        }
        *out = g.is_m_separated(x, y, z)?;
        Ok(())
    })
}

/// Sets `*out` to the number of binary parameters, `Σ_H 2^|tail(H)|`.
///
/// # Safety
/// `g` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn admg_param_dimension(g: *const AdmgGraph, out: *mut u64) -> AdmgStatus {
    guard(|| {
        let d = admg::param_dimension(graph(g)?)?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = d as u64;
        Ok(())
    })
}

/// Renders the factorization of an ancestral set, e.g.
/// `p(x1,x2,x3) = p(x1) p(x2,x3|x1)`. A null or empty `set` means all vertices.
///
/// # Safety
/// `g` must be a live handle, `set` null or nul-terminated, `out` valid.
/// Free the result with [`admg_string_free`].
#[no_mangle]
pub unsafe extern "C" fn admg_factorize(g: *const AdmgGraph, set: *const c_char, out: *mut *mut c_char) -> AdmgStatus {
    guard(|| {
        let g = graph(g)?;
        let a = if set.is_null() {
            g.vertices()
        } else {
            match text(set, "set")? {
                "" => g.vertices(),
                s => set_of(g, s)?,
            }
        };
        out_string(out, g.factorize(a)?.render_equation(g))
    })
}

/// Every head with its tail, one `p(head|tail)` per line.
///
/// # Safety
/// `g` must be a live handle and `out` valid. Free the result with
/// [`admg_string_free`].
#[no_mangle]
pub unsafe extern "C" fn admg_heads(g: *const AdmgGraph, out: *mut *mut c_char) -> AdmgStatus {
    guard(|| {
        let g = graph(g)?;
        let mut s = String::new();
        for ht in g.all_heads()? {
            let head = g.fmt_set(ht.head);
            let head = head.trim_start_matches('{').trim_end_matches('}');
            if ht.tail.is_empty() {
                s.push_str(&format!("p({head})\n"));
            } else {
                let tail = g.fmt_set(ht.tail);
                s.push_str(&format!("p({head}|{})\n", tail.trim_start_matches('{').trim_end_matches('}')));
            }
        }
        out_string(out, s)
    })
}

/// Reconstructs the joint distribution from parameter JSON into `out`, which
/// must hold exactly `2^n` doubles. Entry `i` is the probability of the
/// assignment whose bit `v` is the value of vertex `v`. Invalid (non-probability)
/// parameter points are reconstructed as-is; check the entries.
///
/// # Safety
/// `g` must be a live handle, `params_json` nul-terminated, and `out` point to
/// `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn admg_moebius_joint(
    g: *const AdmgGraph,
    params_json: *const c_char,
    out: *mut f64,
    len: usize,
) -> AdmgStatus {
    guard(|| {
        let g = graph(g)?;
        let q = BinaryParametrization::from_json(g, text(params_json, "params_json")?)?;
        let table = MoebiusEngine::new(g)?.joint(&q)?;
        if out.is_null() {
            return Err(null("out"));
        }
        if len != table.probs().len() {
            return Err(Failure(
                AdmgStatus::BufferSize,
                format!("buffer holds {len} entries, table has {}", table.probs().len()),
            ));
        }
        std::slice::from_raw_parts_mut(out, len).copy_from_slice(table.probs());
        Ok(())
    })
}

/// Frees a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn admg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread; empty after a success.
/// Valid until the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn admg_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}
