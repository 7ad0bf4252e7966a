//! C ABI over the `avgcut` library.
//!
//! Trees and cuts are opaque heap handles released with their `_free`
//! functions. Every call returns an [`AvgcutStatus`]; on failure a message is
//! available from [`avgcut_last_error_message`] on the same thread. Edges are
//! identified by the index of their child node, as in the Rust API.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use avgcut::io::{parse_edgelist, parse_newick};
use avgcut::oracle::{brute_force_optimum, count_cuts, OracleError};
use avgcut::{optimal_average_cut, CutResult, NodeId, Objective, RootedTree};

pub const AVGCUT_MAXIMIZE: c_int = 0;
pub const AVGCUT_MINIMIZE: c_int = 1;

#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum AvgcutStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidArgument = 4,
    TooManyCuts = 5,
    Overflow = 6,
    BufferTooSmall = 7,
    Panic = 8,
}

/// A validated rooted tree.
pub struct AvgcutTree(RootedTree);

/// An optimal cut together with its exact value.
pub struct AvgcutCut(CutResult);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl ToString) {
    let text = message.to_string().replace('\0', " ");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = CString::new(text).ok());
}

struct Fail(AvgcutStatus, String);

impl Fail {
    fn null(what: &str) -> Self {
        Fail(AvgcutStatus::NullPointer, format!("{what} is null"))
    }
}

fn guard(body: impl FnOnce() -> Result<(), Fail>) -> AvgcutStatus {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => AvgcutStatus::Ok,
        Ok(Err(Fail(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("panic inside avgcut");
            AvgcutStatus::Panic
        }
    }
}

unsafe fn text<'a>(s: *const c_char) -> Result<&'a str, Fail> {
    if s.is_null() {
        return Err(Fail::null("input text"));
    }
    CStr::from_ptr(s).to_str().map_err(|e| Fail(AvgcutStatus::InvalidUtf8, e.to_string()))
}

unsafe fn tree_ref<'a>(tree: *const AvgcutTree) -> Result<&'a RootedTree, Fail> {
    tree.as_ref().map(|t| &t.0).ok_or_else(|| Fail::null("tree"))
}

unsafe fn cut_ref<'a>(cut: *const AvgcutCut) -> Result<&'a CutResult, Fail> {
    cut.as_ref().map(|c| &c.0).ok_or_else(|| Fail::null("cut"))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::null("output pointer"));
    }
    out.write(value);
    Ok(())
}

fn objective(code: c_int) -> Result<Objective, Fail> {
    match code {
        AVGCUT_MAXIMIZE => Ok(Objective::Maximize),
        AVGCUT_MINIMIZE => Ok(Objective::Minimize),
        other => Err(Fail(AvgcutStatus::InvalidArgument, format!("unknown objective {other}"))),
    }
}

fn owned_string(s: String) -> *mut c_char {
    CString::new(s).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

unsafe fn parse_into(
    input: *const c_char,
    out: *mut *mut AvgcutTree,
    parse: fn(&str) -> Result<RootedTree, avgcut::io::ParseError>,
) -> AvgcutStatus {
    guard(|| {
        if out.is_null() {
            return Err(Fail::null("output pointer"));
        }
        out.write(ptr::null_mut());
        let tree = parse(text(input)?).map_err(|e| Fail(AvgcutStatus::ParseError, e.to_string()))?;
        out.write(Box::into_raw(Box::new(AvgcutTree(tree))));
        Ok(())
    })
}

/// Parses a `parent child weight` edge list.
///
/// # Safety
/// `input` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn avgcut_tree_from_edgelist(input: *const c_char, out: *mut *mut AvgcutTree) -> AvgcutStatus {
    parse_into(input, out, parse_edgelist)
}

/// Parses a Newick string. Every non-root node needs a branch length.
///
/// # Safety
/// `input` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn avgcut_tree_from_newick(input: *const c_char, out: *mut *mut AvgcutTree) -> AvgcutStatus {
    parse_into(input, out, parse_newick)
}

/// # Safety
/// `tree` must come from this library and not be used afterwards. Null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn avgcut_tree_free(tree: *mut AvgcutTree) {
    if !tree.is_null() {
        drop(Box::from_raw(tree));
    }
}

/// # Safety
/// `tree` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn avgcut_tree_node_count(tree: *const AvgcutTree, out: *mut usize) -> AvgcutStatus {
    guard(|| write_out(out, tree_ref(tree)?.node_count()))
}

/// # Safety
/// `tree` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn avgcut_tree_leaf_count(tree: *const AvgcutTree, out: *mut usize) -> AvgcutStatus {
    guard(|| write_out(out, tree_ref(tree)?.leaves().len()))
}

/// Label of `node`, to be released with [`avgcut_string_free`].
///
/// # Safety
/// `tree` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn avgcut_tree_label(tree: *const AvgcutTree, node: usize, out: *mut *mut c_char) -> AvgcutStatus {
    guard(|| {
        let t = tree_ref(tree)?;
        if node >= t.node_count() {
            return Err(Fail(AvgcutStatus::InvalidArgument, format!("node {node} out of range")));
        }
        write_out(out, owned_string(t.label(NodeId(node)).to_string()))
    })
}

/// Parent of `node`, that is the tail of the edge into it. Fails for the root.
///
/// # Safety
/// `tree` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn avgcut_tree_parent(tree: *const AvgcutTree, node: usize, out: *mut usize) -> AvgcutStatus {
    guard(|| {
        let t = tree_ref(tree)?;
        let parent = (node < t.node_count()).then(|| t.parent(NodeId(node))).flatten();
        let parent = parent.ok_or_else(|| Fail(AvgcutStatus::InvalidArgument, format!("node {node} has no parent")))?;
        write_out(out, parent.index())
    })
}

/// Number of cuts. Fails with `Overflow` when it does not fit in 64 bits.
///
/// # Safety
/// `tree` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn avgcut_count_cuts(tree: *const AvgcutTree, out: *mut u64) -> AvgcutStatus {
    guard(|| {
        let count = count_cuts(tree_ref(tree)?);
        let n = u64::try_from(&count).map_err(|_| Fail(AvgcutStatus::Overflow, format!("{count} cuts")))?;
        write_out(out, n)
    })
}

/// Optimal cut by contraction.
///
/// # Safety
/// `tree` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn avgcut_optimal_cut(
    tree: *const AvgcutTree,
    objective_code: c_int,
    out: *mut *mut AvgcutCut,
) -> AvgcutStatus {
    guard(|| {
        let t = tree_ref(tree)?;
        let obj = objective(objective_code)?;
        write_out(out, Box::into_raw(Box::new(AvgcutCut(optimal_average_cut(t, obj)))))
    })
}

/// Optimal cut by enumerating every cut, refused above `limit` cuts.
///
/// # Safety
/// `tree` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn avgcut_brute_force(
    tree: *const AvgcutTree,
    objective_code: c_int,
    limit: u64,
    out: *mut *mut AvgcutCut,
) -> AvgcutStatus {
    guard(|| {
        let t = tree_ref(tree)?;
        let obj = objective(objective_code)?;
        let res = brute_force_optimum(t, obj, limit).map_err(|e| match e {
            OracleError::TooManyCuts { .. } => Fail(AvgcutStatus::TooManyCuts, e.to_string()),
            other => Fail(AvgcutStatus::InvalidArgument, other.to_string()),
        })?;
        write_out(out, Box::into_raw(Box::new(AvgcutCut(res))))
    })
}

/// # Safety
/// `cut` must come from this library and not be used afterwards. Null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn avgcut_cut_free(cut: *mut AvgcutCut) {
    if !cut.is_null() {
        drop(Box::from_raw(cut));
    }
}

/// # Safety
/// `cut` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn avgcut_cut_size(cut: *const AvgcutCut, out: *mut usize) -> AvgcutStatus {
    guard(|| write_out(out, cut_ref(cut)?.size))
}

/// Copies the cut edges (child node indices, ascending) into `buf`.
/// `written` receives the cut size; if `capacity` is too small nothing is
/// copied and `BufferTooSmall` is returned.
///
/// # Safety
/// `cut` must be a live handle, `buf` valid for `capacity` writes (or null
/// when `capacity` is 0) and `written` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn avgcut_cut_edges(
    cut: *const AvgcutCut,
    buf: *mut usize,
    capacity: usize,
    written: *mut usize,
) -> AvgcutStatus {
    guard(|| {
        let c = cut_ref(cut)?;
        write_out(written, c.cut.len())?;
        if capacity < c.cut.len() {
            return Err(Fail(AvgcutStatus::BufferTooSmall, format!("need {} slots, got {capacity}", c.cut.len())));
        }
        if c.cut.is_empty() {
            return Ok(());
        }
        if buf.is_null() {
            return Err(Fail::null("buffer"));
        }
        for (i, e) in c.cut.iter().enumerate() {
            buf.add(i).write(e.index());
        }
        Ok(())
    })
}

/// Exact average as `p` or `p/q`, released with [`avgcut_string_free`].
///
/// # Safety
/// `cut` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn avgcut_cut_average(cut: *const AvgcutCut, out: *mut *mut c_char) -> AvgcutStatus {
    guard(|| write_out(out, owned_string(cut_ref(cut)?.average.to_string())))
}

/// Exact total weight as `p` or `p/q`, released with [`avgcut_string_free`].
///
/// # Safety
/// `cut` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn avgcut_cut_total(cut: *const AvgcutCut, out: *mut *mut c_char) -> AvgcutStatus {
    guard(|| write_out(out, owned_string(cut_ref(cut)?.total.to_string())))
}

/// Average rounded to the nearest double.
///
/// # Safety
/// `cut` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn avgcut_cut_average_f64(cut: *const AvgcutCut, out: *mut f64) -> AvgcutStatus {
    guard(|| write_out(out, cut_ref(cut)?.average.to_f64()))
}

/// # Safety
/// `s` must come from this library and not be used afterwards. Null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn avgcut_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn avgcut_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}
