//! C interface to `ssg-core`.
//!
//! Graphs are opaque `SsgGraph` handles released with `ssg_graph_free`. Every call returns
//! an `SsgStatus`; on failure `ssg_last_error` describes the problem. Strings returned
//! through out-parameters are released with `ssg_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use ssg_core::autosearch::{self, ColoredGraph, Mode, SearchError};
use ssg_core::bicoset::{BiCosetConfig, BiCosetError};
use ssg_core::bigraph::BipartiteGraph;
use ssg_core::families::{build_family, FamilyError, FamilyId};
use ssg_core::permgroup::PermGroup;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SsgStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    UnknownFamily = 4,
    BadParameter = 5,
    BoundExceeded = 6,
    Failed = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SsgMode {
    Full = 0,
    Certificate = 1,
}

/// Verdict values written by `ssg_graph_semisymmetry`.
pub const SSG_NO: i32 = 0;
pub const SSG_YES: i32 = 1;
pub const SSG_UNDECIDED: i32 = -1;

/// A bipartite graph, plus the group it was built from when it came from a family.
pub struct SsgGraph {
    graph: BipartiteGraph,
    action: Option<PermGroup>,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct Failure(SsgStatus, String);

impl From<FamilyError> for Failure {
    fn from(e: FamilyError) -> Self {
        let status = match &e {
            FamilyError::UnknownFamily(_) => SsgStatus::UnknownFamily,
            FamilyError::BadPrime(_) | FamilyError::ParameterMismatch(_) => SsgStatus::BadParameter,
            FamilyError::BiCoset(BiCosetError::BoundExceeded(_)) => SsgStatus::BoundExceeded,
            _ => SsgStatus::Failed,
        };
        Failure(status, e.to_string())
    }
}

impl From<SearchError> for Failure {
    fn from(e: SearchError) -> Self {
        let status = match &e {
            SearchError::BoundExceeded { .. } => SsgStatus::BoundExceeded,
            _ => SsgStatus::Failed,
        };
        Failure(status, e.to_string())
    }
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

/// Runs `f`, turning errors and panics into a status and the thread's error message.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> SsgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            SsgStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            SsgStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(SsgStatus::NullArgument, "null string argument".into()));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(SsgStatus::InvalidUtf8, "string argument is not UTF-8".into()))
}

unsafe fn graph_arg<'a>(p: *const SsgGraph) -> Result<&'a SsgGraph, Failure> {
    p.as_ref()
        .ok_or_else(|| Failure(SsgStatus::NullArgument, "null graph handle".into()))
}

fn out_arg<T>(p: *mut T) -> Result<(), Failure> {
    if p.is_null() {
        Err(Failure(SsgStatus::NullArgument, "null out-parameter".into()))
    } else {
        Ok(())
    }
}

fn owned_string(s: String) -> *mut c_char {
    CString::new(s).unwrap_or_default().into_raw()
}

/// Message for the last failed call on this thread, or an empty string. Valid until the
/// next call on the same thread; do not free.
#[no_mangle]
pub extern "C" fn ssg_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Builds a family graph from a token such as `gamma9` or `sigma1:5`.
///
/// # Safety
/// `token` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ssg_family_build(token: *const c_char, out: *mut *mut SsgGraph) -> SsgStatus {
    guard(|| {
        out_arg(out)?;
        let id: FamilyId = str_arg(token)?.parse()?;
        let b = build_family(id, &BiCosetConfig::default())?;
        *out = Box::into_raw(Box::new(SsgGraph {
            graph: b.graph,
            action: Some(b.action),
        }));
        Ok(())
    })
}

/// Parses a graph in the text format written by `ssg_graph_to_text`.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ssg_graph_from_text(text: *const c_char, out: *mut *mut SsgGraph) -> SsgStatus {
    guard(|| {
        out_arg(out)?;
        let graph = BipartiteGraph::from_text(str_arg(text)?)
            .map_err(|e| Failure(SsgStatus::Parse, e.to_string()))?;
        *out = Box::into_raw(Box::new(SsgGraph { graph, action: None }));
        Ok(())
    })
}

/// # Safety
/// `graph` must come from this library and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn ssg_graph_free(graph: *mut SsgGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// # Safety
/// `s` must come from this library and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn ssg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Part sizes and edge count.
///
/// # Safety
/// `graph` must be a live handle and the out-pointers valid.
#[no_mangle]
pub unsafe extern "C" fn ssg_graph_shape(
    graph: *const SsgGraph,
    n_w: *mut usize,
    n_u: *mut usize,
    edges: *mut usize,
) -> SsgStatus {
    guard(|| {
        let g = &graph_arg(graph)?.graph;
        out_arg(n_w)?;
        out_arg(n_u)?;
        out_arg(edges)?;
        *n_w = g.n_w();
        *n_u = g.n_u();
        *edges = g.edge_count();
        Ok(())
    })
}

/// # Safety
/// `graph` must be a live handle and `out` valid. Free the result with `ssg_string_free`.
#[no_mangle]
pub unsafe extern "C" fn ssg_graph_to_text(graph: *const SsgGraph, out: *mut *mut c_char) -> SsgStatus {
    guard(|| {
        out_arg(out)?;
        *out = owned_string(graph_arg(graph)?.graph.to_text());
        Ok(())
    })
}

/// Automorphism group order as a decimal string.
///
/// # Safety
/// `graph` must be a live handle and `out` valid. Free the result with `ssg_string_free`.
#[no_mangle]
pub unsafe extern "C" fn ssg_graph_aut_order(graph: *const SsgGraph, out: *mut *mut c_char) -> SsgStatus {
    guard(|| {
        out_arg(out)?;
        let g = graph_arg(graph)?;
        let aut = autosearch::automorphism_group(&ColoredGraph::new(g.graph.clone()))?;
        *out = owned_string(aut.order.to_string());
        Ok(())
    })
}

/// Writes `SSG_YES`, `SSG_NO` or `SSG_UNDECIDED`. Certificate mode uses the family group
/// when the handle came from `ssg_family_build`.
///
/// # Safety
/// `graph` must be a live handle and `verdict` valid.
#[no_mangle]
pub unsafe extern "C" fn ssg_graph_semisymmetry(
    graph: *const SsgGraph,
    mode: SsgMode,
    verdict: *mut i32,
) -> SsgStatus {
    guard(|| {
        out_arg(verdict)?;
        let g = graph_arg(graph)?;
        let mode = match mode {
            SsgMode::Full => Mode::Full,
            SsgMode::Certificate => Mode::Certificate,
        };
        let v = autosearch::semisymmetry(&g.graph, mode, g.action.as_ref())?;
        *verdict = match v.semisymmetric {
            Some(true) => SSG_YES,
            Some(false) => SSG_NO,
            None => SSG_UNDECIDED,
        };
        Ok(())
    })
}

/// Writes 1 when the graphs are isomorphic, else 0.
///
/// # Safety
/// Both handles must be live and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn ssg_graph_is_isomorphic(
    a: *const SsgGraph,
    b: *const SsgGraph,
    out: *mut i32,
) -> SsgStatus {
    guard(|| {
        out_arg(out)?;
        let same = autosearch::is_isomorphic(&graph_arg(a)?.graph, &graph_arg(b)?.graph)?;
        *out = i32::from(same);
        Ok(())
    })
}

/// Expands every U-vertex into `p` twins. The result has no attached group.
///
/// # Safety
/// `graph` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn ssg_graph_expand(graph: *const SsgGraph, p: usize, out: *mut *mut SsgGraph) -> SsgStatus {
    guard(|| {
        out_arg(out)?;
        if p == 0 {
            return Err(Failure(SsgStatus::BadParameter, "expansion factor must be positive".into()));
        }
        let graph = graph_arg(graph)?.graph.expand(p);
        *out = Box::into_raw(Box::new(SsgGraph { graph, action: None }));
        Ok(())
    })
}
