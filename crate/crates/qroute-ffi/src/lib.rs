//! C ABI for the routing library.
//!
//! Handles are opaque pointers created and destroyed here; every
//! fallible call returns a [`QrStatus`] and stores a message retrievable
//! via [`qr_last_error_message`] on failure. The generated header lands
//! in `include/qroute.h` at build time.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Duration;

use qroute::circuit::Circuit;
use qroute::graph::HardwareGraph;
use qroute::route::{route, RouteOptions, RoutedCircuit, SolveStatus};
use qroute::swap::{approx_solve, exact_solve, ExactLimits, SwapSequence};
use qroute::tap::{Allocation, TapOptions};
use qroute::Error;

/// Status code of every fallible FFI call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QrStatus {
    Ok = 0,
    InvalidArgument = 1,
    ParseError = 2,
    Infeasible = 3,
    LimitExpired = 4,
    InternalError = 5,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let sanitized = msg.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn status_of(err: &Error) -> QrStatus {
    match err {
        Error::Parse { .. } => QrStatus::ParseError,
        Error::InfeasibleLayer(_)
        | Error::DistanceLimitInfeasible(_)
        | Error::NoMatching { .. }
        | Error::TooManyTokens { .. }
        | Error::Disconnected(..) => QrStatus::Infeasible,
        Error::Io(_) => QrStatus::InternalError,
        _ => QrStatus::InvalidArgument,
    }
}

/// Runs `f` with panics converted to `InternalError`.
fn guarded(f: impl FnOnce() -> QrStatus) -> QrStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            QrStatus::InternalError
        }
    }
}

/// Last error message of this thread; empty until an error occurs.
/// The pointer stays valid until the next failing call on this thread.
#[no_mangle]
pub extern "C" fn qr_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

#[no_mangle]
pub extern "C" fn qr_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Frees a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn qr_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

unsafe fn utf8_arg<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, QrStatus> {
    if ptr.is_null() {
        set_error(&format!("{what} is null"));
        return Err(QrStatus::InvalidArgument);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error(&format!("{what} is not valid UTF-8"));
        QrStatus::InvalidArgument
    })
}

pub struct QrGraph {
    inner: HardwareGraph,
}

pub struct QrCircuit {
    inner: Circuit,
}

pub struct QrRouted {
    inner: RoutedCircuit,
    num_vertices: usize,
    circuit_tokens: usize,
}

pub struct QrSwapSequence {
    inner: SwapSequence,
    optimal: bool,
}

/// Parses the line-oriented hardware graph format.
///
/// # Safety
/// `text` must be a NUL-terminated string, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qr_graph_from_text(
    text: *const c_char,
    out: *mut *mut QrGraph,
) -> QrStatus {
    guarded(|| {
        let Ok(text) = utf8_arg(text, "graph text") else {
            return QrStatus::InvalidArgument;
        };
        if out.is_null() {
            set_error("out pointer is null");
            return QrStatus::InvalidArgument;
        }
        match HardwareGraph::parse(text) {
            Ok(graph) => {
                *out = Box::into_raw(Box::new(QrGraph { inner: graph }));
                QrStatus::Ok
            }
            Err(err) => {
                set_error(&err.to_string());
                status_of(&err)
            }
        }
    })
}

/// Builds a named preset such as `line:8`, `ring:8`, `ladder:8`,
/// `grid:3x4`.
///
/// # Safety
/// `spec` must be a NUL-terminated string, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qr_graph_preset(spec: *const c_char, out: *mut *mut QrGraph) -> QrStatus {
    guarded(|| {
        let Ok(spec) = utf8_arg(spec, "preset spec") else {
            return QrStatus::InvalidArgument;
        };
        if out.is_null() {
            set_error("out pointer is null");
            return QrStatus::InvalidArgument;
        }
        match HardwareGraph::preset(spec) {
            Ok(graph) => {
                *out = Box::into_raw(Box::new(QrGraph { inner: graph }));
                QrStatus::Ok
            }
            Err(err) => {
                set_error(&err.to_string());
                status_of(&err)
            }
        }
    })
}

/// # Safety
/// `graph` must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn qr_graph_num_vertices(graph: *const QrGraph) -> usize {
    if graph.is_null() {
        return 0;
    }
    (*graph).inner.num_vertices()
}

/// # Safety
/// `graph` must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn qr_graph_num_edges(graph: *const QrGraph) -> usize {
    if graph.is_null() {
        return 0;
    }
    (*graph).inner.num_edges()
}

/// # Safety
/// `graph` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn qr_graph_free(graph: *mut QrGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// Parses the circuit text format.
///
/// # Safety
/// `text` must be a NUL-terminated string, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qr_circuit_from_text(
    text: *const c_char,
    out: *mut *mut QrCircuit,
) -> QrStatus {
    guarded(|| {
        let Ok(text) = utf8_arg(text, "circuit text") else {
            return QrStatus::InvalidArgument;
        };
        if out.is_null() {
            set_error("out pointer is null");
            return QrStatus::InvalidArgument;
        }
        match Circuit::parse(text) {
            Ok(circuit) => {
                *out = Box::into_raw(Box::new(QrCircuit { inner: circuit }));
                QrStatus::Ok
            }
            Err(err) => {
                set_error(&err.to_string());
                status_of(&err)
            }
        }
    })
}

/// # Safety
/// `circuit` must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn qr_circuit_num_tokens(circuit: *const QrCircuit) -> usize {
    if circuit.is_null() {
        return 0;
    }
    (*circuit).inner.num_tokens
}

/// # Safety
/// `circuit` must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn qr_circuit_num_gates(circuit: *const QrCircuit) -> usize {
    if circuit.is_null() {
        return 0;
    }
    (*circuit).inner.gates.len()
}

/// # Safety
/// `circuit` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn qr_circuit_free(circuit: *mut QrCircuit) {
    if !circuit.is_null() {
        drop(Box::from_raw(circuit));
    }
}

/// Routing options; zero-initialize for the defaults.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct QrRouteOptions {
    /// Solve each transition exactly instead of by approximation.
    pub exact_swaps: bool,
    /// Enumerate only tokens participating in gates; freeze the rest.
    pub active_only: bool,
    /// Per-transition hop limit; negative means unlimited.
    pub distance_limit: i64,
    /// Allocation solve time limit in milliseconds; 0 means unlimited.
    pub time_limit_ms: u64,
    /// Cut generation budget in milliseconds.
    pub cut_budget_ms: u64,
}

impl QrRouteOptions {
    fn to_options(self) -> RouteOptions {
        let time_limit = (self.time_limit_ms > 0)
            .then(|| Duration::from_millis(self.time_limit_ms));
        RouteOptions {
            tap: TapOptions {
                distance_limit: (self.distance_limit >= 0).then_some(self.distance_limit as u32),
                active_only: self.active_only,
                time_limit,
                cut_budget: Duration::from_millis(self.cut_budget_ms),
                beam_width: None,
            },
            exact_swaps: self.exact_swaps,
            swap_limits: ExactLimits { time_limit, max_nodes: None },
        }
    }
}

/// Gate and depth accounting of a routed circuit.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct QrMetrics {
    pub swaps_added: u64,
    pub two_qubit_gates_in: u64,
    pub two_qubit_gates_out: u64,
    pub two_qubit_gates_out_3cx: u64,
    pub depth_in: u64,
    pub depth_out: u64,
    pub gate_increase: f64,
    pub gate_increase_3cx: f64,
    pub depth_increase: f64,
    pub optimal: bool,
}

/// Routes a circuit onto a hardware graph.
///
/// # Safety
/// `graph` and `circuit` must be live handles; `options` may be null for
/// defaults; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qr_route(
    graph: *const QrGraph,
    circuit: *const QrCircuit,
    options: *const QrRouteOptions,
    out: *mut *mut QrRouted,
) -> QrStatus {
    guarded(|| {
        if graph.is_null() || circuit.is_null() || out.is_null() {
            set_error("graph, circuit and out must be non-null");
            return QrStatus::InvalidArgument;
        }
        let route_options = if options.is_null() {
            RouteOptions::default()
        } else {
            (*options).to_options()
        };
        let graph = &(*graph).inner;
        let circuit = &(*circuit).inner;
        match route(circuit, graph, &route_options) {
            Ok(routed) => {
                let expired = routed.limit_expired;
                *out = Box::into_raw(Box::new(QrRouted {
                    inner: routed,
                    num_vertices: graph.num_vertices(),
                    circuit_tokens: circuit.num_tokens,
                }));
                if expired {
                    set_error("limit expired; result is a feasible incumbent");
                    QrStatus::LimitExpired
                } else {
                    QrStatus::Ok
                }
            }
            Err(err) => {
                set_error(&err.to_string());
                status_of(&err)
            }
        }
    })
}

/// # Safety
/// `routed` must be a live handle, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qr_routed_metrics(
    routed: *const QrRouted,
    out: *mut QrMetrics,
) -> QrStatus {
    guarded(|| {
        if routed.is_null() || out.is_null() {
            set_error("routed and out must be non-null");
            return QrStatus::InvalidArgument;
        }
        let m = &(*routed).inner.metrics;
        *out = QrMetrics {
            swaps_added: m.swaps_added as u64,
            two_qubit_gates_in: m.two_qubit_gates_in as u64,
            two_qubit_gates_out: m.two_qubit_gates_out as u64,
            two_qubit_gates_out_3cx: m.two_qubit_gates_out_decomposed as u64,
            depth_in: m.depth_in as u64,
            depth_out: m.depth_out as u64,
            gate_increase: m.relative_gate_increase,
            gate_increase_3cx: m.relative_gate_increase_decomposed,
            depth_increase: m.relative_depth_increase,
            optimal: (*routed).inner.status == SolveStatus::Optimal,
        };
        QrStatus::Ok
    })
}

/// Renders the routed circuit text; free with [`qr_string_free`].
///
/// # Safety
/// `routed` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn qr_routed_to_text(routed: *const QrRouted) -> *mut c_char {
    if routed.is_null() {
        return std::ptr::null_mut();
    }
    let handle = &*routed;
    let text = handle.inner.to_text(handle.num_vertices, handle.circuit_tokens);
    CString::new(text).map_or(std::ptr::null_mut(), CString::into_raw)
}

/// # Safety
/// `routed` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn qr_routed_free(routed: *mut QrRouted) {
    if !routed.is_null() {
        drop(Box::from_raw(routed));
    }
}

/// Solves one token swapping instance given as two token-to-vertex
/// tables of length `len` (which must equal the vertex count).
///
/// # Safety
/// `start` and `target` must point to `len` readable elements; `graph`
/// must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qr_swap_solve(
    graph: *const QrGraph,
    start: *const u32,
    target: *const u32,
    len: usize,
    exact: bool,
    out: *mut *mut QrSwapSequence,
) -> QrStatus {
    guarded(|| {
        if graph.is_null() || start.is_null() || target.is_null() || out.is_null() {
            set_error("graph, start, target and out must be non-null");
            return QrStatus::InvalidArgument;
        }
        let graph = &(*graph).inner;
        if len != graph.num_vertices() {
            set_error(&format!(
                "allocation length {len} does not match vertex count {}",
                graph.num_vertices()
            ));
            return QrStatus::InvalidArgument;
        }
        let to_alloc = |ptr: *const u32| -> Result<Allocation, Error> {
            let slice = std::slice::from_raw_parts(ptr, len);
            Allocation::from_to_vertex(slice.iter().map(|&v| v as usize).collect())
        };
        let (start, target) = match (to_alloc(start), to_alloc(target)) {
            (Ok(s), Ok(t)) => (s, t),
            (Err(err), _) | (_, Err(err)) => {
                set_error(&err.to_string());
                return status_of(&err);
            }
        };
        let (sequence, optimal) = if exact {
            let outcome = exact_solve(graph, &start, &target, ExactLimits::default());
            (outcome.sequence, outcome.optimal)
        } else {
            (approx_solve(graph, &start, &target), false)
        };
        *out = Box::into_raw(Box::new(QrSwapSequence { inner: sequence, optimal }));
        QrStatus::Ok
    })
}

/// # Safety
/// `seq` must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn qr_swap_sequence_len(seq: *const QrSwapSequence) -> usize {
    if seq.is_null() {
        return 0;
    }
    (*seq).inner.len()
}

/// # Safety
/// `seq` must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn qr_swap_sequence_depth(seq: *const QrSwapSequence) -> usize {
    if seq.is_null() {
        return 0;
    }
    (*seq).inner.depth
}

/// # Safety
/// `seq` must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn qr_swap_sequence_optimal(seq: *const QrSwapSequence) -> bool {
    if seq.is_null() {
        return false;
    }
    (*seq).optimal
}

/// Reads swap `idx` into `u` and `v`.
///
/// # Safety
/// `seq` must be a live handle; `u` and `v` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn qr_swap_sequence_get(
    seq: *const QrSwapSequence,
    idx: usize,
    u: *mut u32,
    v: *mut u32,
) -> QrStatus {
    if seq.is_null() || u.is_null() || v.is_null() {
        set_error("seq, u and v must be non-null");
        return QrStatus::InvalidArgument;
    }
    let seq_ref = &*seq;
    match seq_ref.inner.swaps.get(idx) {
        Some(&(a, b)) => {
            *u = a as u32;
            *v = b as u32;
            QrStatus::Ok
        }
        None => {
            set_error(&format!("swap index {idx} out of range"));
            QrStatus::InvalidArgument
        }
    }
}

/// # Safety
/// `seq` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn qr_swap_sequence_free(seq: *mut QrSwapSequence) {
    if !seq.is_null() {
        drop(Box::from_raw(seq));
    }
}
