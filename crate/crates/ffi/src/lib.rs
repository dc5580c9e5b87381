//! C ABI for the cube-spectra toolkit.
//!
//! Graphs are opaque [`CsGraph`] handles created by `cs_graph_*` constructors
//! and released with [`cs_graph_free`]. Every fallible function returns a
//! [`CsStatus`] and writes results through out-pointers; on failure a
//! message is available from [`cs_last_error_message`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use cube_spectra::degree_theory::{
    classify_regime, constant_p_coefficient, expected_exceed_count, kappa, Regime,
};
use cube_spectra::spectral_bounds::BoundReport;
use cube_spectra::{
    lanczos_lambda1, sample_subgraph, Error, HypercubeSubgraph, SampleParams, SolverConfig,
};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    OutOfRange = 3,
    Undefined = 4,
    Internal = 5,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CsRegime {
    Case1 = 1,
    Case2 = 2,
    Case3 = 3,
    Case4 = 4,
}

impl From<Regime> for CsRegime {
    fn from(r: Regime) -> Self {
        match r {
            Regime::Case1 => CsRegime::Case1,
            Regime::Case2 => CsRegime::Case2,
            Regime::Case3 => CsRegime::Case3,
            Regime::Case4 => CsRegime::Case4,
        }
    }
}

/// Opaque graph handle.
pub struct CsGraph {
    inner: HypercubeSubgraph,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CsSpectralResult {
    pub lambda1: f64,
    pub iterations: u64,
    pub residual: f64,
    pub converged: bool,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CsBoundReport {
    pub sqrt_max_degree: f64,
    pub avg_degree: f64,
    pub max_degree_bound: f64,
    pub sqrt_edges: f64,
    pub walk2_bound: f64,
    pub parity_product_bound: f64,
    pub prediction: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).unwrap_or_default());
}

fn status_of(e: &Error) -> CsStatus {
    match e {
        Error::DimensionOutOfRange { .. }
        | Error::ProbabilityOutOfRange { .. }
        | Error::VertexOutOfRange { .. } => CsStatus::OutOfRange,
        _ => CsStatus::InvalidArgument,
    }
}

/// Runs `f`, converting errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), CsStatus>) -> CsStatus {
    set_error("");
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CsStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic");
            CsStatus::Internal
        }
    }
}

fn lib<T>(r: cube_spectra::Result<T>) -> Result<T, CsStatus> {
    r.map_err(|e| {
        set_error(e.to_string());
        status_of(&e)
    })
}

fn non_null<T>(p: *const T, name: &str) -> Result<(), CsStatus> {
    if p.is_null() {
        set_error(format!("{name} is null"));
        Err(CsStatus::NullPointer)
    } else {
        Ok(())
    }
}

/// # Safety
/// `g` must be null or a live handle from this library.
unsafe fn graph<'a>(g: *const CsGraph) -> Result<&'a HypercubeSubgraph, CsStatus> {
    non_null(g, "graph")?;
    Ok(&(*g).inner)
}

/// # Safety
/// `out` must be null or valid for a write.
unsafe fn write<T>(out: *mut T, value: T) -> Result<(), CsStatus> {
    non_null(out, "out")?;
    out.write(value);
    Ok(())
}

fn boxed(g: HypercubeSubgraph) -> *mut CsGraph {
    Box::into_raw(Box::new(CsGraph { inner: g }))
}

/// Message for the last failed call on this thread, or an empty string.
/// The pointer stays valid until the next call into this library on the
/// same thread.
#[no_mangle]
pub extern "C" fn cs_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn cs_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Samples `G(Qⁿ, p)` for `(master_seed, trial)`.
///
/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn cs_graph_sample(
    n: u32,
    p: f64,
    master_seed: u64,
    trial: u64,
    out: *mut *mut CsGraph,
) -> CsStatus {
    guard(|| {
        non_null(out, "out")?;
        let g = lib(sample_subgraph(&SampleParams::new(
            n,
            p,
            master_seed,
            trial,
        )))?;
        write(out, boxed(g))
    })
}

/// The full cube Qⁿ.
///
/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn cs_graph_full_cube(n: u32, out: *mut *mut CsGraph) -> CsStatus {
    guard(|| {
        non_null(out, "out")?;
        let g = lib(HypercubeSubgraph::full_cube(n))?;
        write(out, boxed(g))
    })
}

/// Graph from `num_edges` pairs stored flat in `edges` as
/// `v0, w0, v1, w1, …`, each with `v < w`, sorted and without duplicates.
///
/// # Safety
/// `edges` must point to `2 * num_edges` readable values (or may be null
/// when `num_edges` is 0); `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn cs_graph_from_edges(
    n: u32,
    edges: *const u64,
    num_edges: usize,
    out: *mut *mut CsGraph,
) -> CsStatus {
    guard(|| {
        non_null(out, "out")?;
        let pairs: Vec<(u64, u64)> = if num_edges == 0 {
            Vec::new()
        } else {
            non_null(edges, "edges")?;
            std::slice::from_raw_parts(edges, 2 * num_edges)
                .chunks_exact(2)
                .map(|c| (c[0], c[1]))
                .collect()
        };
        let g = lib(HypercubeSubgraph::from_edge_list(n, &pairs))?;
        write(out, boxed(g))
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `g` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cs_graph_free(g: *mut CsGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` must be a live handle and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn cs_graph_n(g: *const CsGraph, out: *mut u32) -> CsStatus {
    guard(|| write(out, graph(g)?.n()))
}

/// # Safety
/// `g` must be a live handle and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn cs_graph_edge_count(g: *const CsGraph, out: *mut u64) -> CsStatus {
    guard(|| write(out, graph(g)?.edge_count()))
}

/// # Safety
/// `g` must be a live handle and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn cs_graph_max_degree(g: *const CsGraph, out: *mut u32) -> CsStatus {
    guard(|| write(out, graph(g)?.max_degree()))
}

/// # Safety
/// `g` must be a live handle and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn cs_graph_degree(g: *const CsGraph, v: u64, out: *mut u32) -> CsStatus {
    guard(|| {
        let d = lib(graph(g)?.degree(v))?;
        write(out, d)
    })
}

/// Largest eigenvalue by Lanczos. `tol <= 0` or `max_iter == 0` select the
/// defaults. Non-convergence is reported in `out->converged`, not as an
/// error.
///
/// # Safety
/// `g` must be a live handle and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn cs_lambda1(
    g: *const CsGraph,
    tol: f64,
    max_iter: u64,
    out: *mut CsSpectralResult,
) -> CsStatus {
    guard(|| {
        let g = graph(g)?;
        non_null(out, "out")?;
        let mut cfg = SolverConfig::default();
        if tol > 0.0 {
            cfg.tol = tol;
        }
        if max_iter > 0 {
            cfg.max_iter = max_iter as usize;
        }
        let r = lib(lanczos_lambda1(g, &cfg))?;
        write(
            out,
            CsSpectralResult {
                lambda1: r.lambda1,
                iterations: r.iterations as u64,
                residual: r.residual,
                converged: r.converged,
            },
        )
    })
}

/// Eigenvalue bounds; `p` enters only the prediction `max(√Δ, np)`.
///
/// # Safety
/// `g` must be a live handle and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn cs_bounds(g: *const CsGraph, p: f64, out: *mut CsBoundReport) -> CsStatus {
    guard(|| {
        let g = graph(g)?;
        if !(0.0..=1.0).contains(&p) {
            set_error(format!("edge probability {p} outside [0, 1]"));
            return Err(CsStatus::OutOfRange);
        }
        let b = BoundReport::compute(g, p);
        write(
            out,
            CsBoundReport {
                sqrt_max_degree: b.sqrt_max_degree,
                avg_degree: b.avg_degree,
                max_degree_bound: b.max_degree_bound,
                sqrt_edges: b.sqrt_edges,
                walk2_bound: b.walk2_bound,
                parity_product_bound: b.parity_product_bound,
                prediction: b.prediction,
            },
        )
    })
}

/// κ(n) for edge probability `p`; `CS_STATUS_UNDEFINED` when no `k`
/// qualifies.
///
/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn cs_kappa(n: u32, p: f64, out: *mut u32) -> CsStatus {
    guard(|| {
        lib(SampleParams::new(n, p, 0, 0).validate())?;
        match lib(kappa(n, p))? {
            Some(k) => write(out, k),
            None => {
                set_error(format!("kappa undefined for n={n}, p={p}"));
                Err(CsStatus::Undefined)
            }
        }
    })
}

/// Expected number of vertices with degree at least `k`.
///
/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn cs_expected_exceed_count(
    n: u32,
    p: f64,
    k: u32,
    out: *mut f64,
) -> CsStatus {
    guard(|| {
        let v = lib(expected_exceed_count(n, p, k))?;
        write(out, v)
    })
}

/// Constant-`p` maximum-degree coefficient.
///
/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn cs_constant_p_coefficient(p: f64, out: *mut f64) -> CsStatus {
    guard(|| {
        let c = lib(constant_p_coefficient(p))?;
        write(out, c)
    })
}

/// Probability regime of `(n, p)`.
///
/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn cs_classify_regime(n: u32, p: f64, out: *mut CsRegime) -> CsStatus {
    guard(|| {
        lib(SampleParams::new(n, p, 0, 0).validate())?;
        write(out, classify_regime(n, p).into())
    })
}
