//! C ABI for quorumkit.
//!
//! Handles are opaque pointers created by `*_new`-style functions and
//! released with the matching `*_free`. Every fallible function returns a
//! [`QkStatus`]; on failure [`qk_last_error`] describes what went wrong.
//! Strings returned through `char **` out-parameters are owned by the caller
//! and must be released with [`qk_string_free`].
//!
//! Floating-point inputs (read fractions, weights, limits) are read as the
//! simplest fraction within `1e-12` of the given value.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Duration;

use quorumkit::config::Config;
use quorumkit::optimize::{find_strategy, Constraints, Objective, Strategy};
use quorumkit::rational::{self, Rational};
use quorumkit::report::{self, SearchReport, StrategyReport};
use quorumkit::search::{search, SearchOptions};
use quorumkit::{Error, Expr, QuorumSystem, Workload};

const INPUT_TOLERANCE: f64 = 1e-12;

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QkStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Config = 3,
    Parse = 4,
    InvalidArgument = 5,
    IntersectionViolation = 6,
    UnknownNode = 7,
    UniverseTooLarge = 8,
    Infeasible = 9,
    NoResilientQuorum = 10,
    NoFeasibleCandidate = 11,
    SolverFailure = 12,
    Panic = 13,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QkObjective {
    Load = 0,
    Latency = 1,
    Network = 2,
}

/// One point of a workload distribution.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct QkWorkloadPoint {
    pub read_fraction: f64,
    pub weight: f64,
}

/// Strategy options. Limits that are zero or negative are ignored.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct QkStrategyOptions {
    /// One of the `QkObjective` values.
    pub objective: u32,
    pub capacity_limit: f64,
    pub latency_limit: f64,
    pub network_limit: f64,
    /// Resilience of the quorums the strategy may use.
    pub f: u32,
}

/// Search options. `budget == 0` means unlimited; `timeout_s <= 0` means no
/// timeout.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct QkSearchOptions {
    pub strategy: QkStrategyOptions,
    pub min_fault_tolerance: u32,
    pub budget: u64,
    pub timeout_s: f64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct QkMetrics {
    pub load: f64,
    pub capacity: f64,
    pub latency: f64,
    pub network_load: f64,
}

/// A quorum system together with the workload from its configuration.
pub struct QkSystem {
    qs: QuorumSystem,
    workload: Workload,
}

/// A strategy bound to the system and workload it was optimized for.
pub struct QkStrategy {
    qs: QuorumSystem,
    strategy: Strategy,
    workload: Workload,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: &str) {
    let text = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
}

struct Failure(QkStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let status = match &e {
            Error::Parse { .. } => QkStatus::Parse,
            Error::Config(_) | Error::InvalidNode(_) | Error::InvalidWorkload(_) => QkStatus::Config,
            Error::Domain(_) | Error::InvalidArgument(_) => QkStatus::InvalidArgument,
            Error::IntersectionViolation { .. } => QkStatus::IntersectionViolation,
            Error::UnknownNode(_) => QkStatus::UnknownNode,
            Error::UniverseTooLarge { .. } => QkStatus::UniverseTooLarge,
            Error::Infeasible(_) => QkStatus::Infeasible,
            Error::NoResilientQuorum { .. } => QkStatus::NoResilientQuorum,
            Error::NoFeasibleCandidate { .. } => QkStatus::NoFeasibleCandidate,
            Error::SolverFailure(_) => QkStatus::SolverFailure,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(QkStatus::NullPointer, format!("{what} is null"))
}

/// Runs `body`, converting errors and panics into a status.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> QkStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_last_error("");
            QkStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_last_error(&message);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            QkStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(text: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if text.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(text)
        .to_str()
        .map_err(|_| Failure(QkStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, text: String) -> Result<(), Failure> {
    let c = CString::new(text).map_err(|_| Failure(QkStatus::InvalidArgument, "output contains NUL".into()))?;
    write_out(out, c.into_raw(), "out")
}

fn exact(value: f64, what: &str) -> Result<Rational, Failure> {
    if !value.is_finite() {
        return Err(Failure(QkStatus::InvalidArgument, format!("{what} must be finite")));
    }
    Ok(rational::simplest_within(value, INPUT_TOLERANCE))
}

fn limit(value: f64, what: &str) -> Result<Option<Rational>, Failure> {
    if value.is_nan() {
        return Err(Failure(QkStatus::InvalidArgument, format!("{what} is NaN")));
    }
    if value <= 0.0 {
        Ok(None)
    } else {
        exact(value, what).map(Some)
    }
}

fn objective(code: u32) -> Result<Objective, Failure> {
    match code {
        c if c == QkObjective::Load as u32 => Ok(Objective::Load),
        c if c == QkObjective::Latency as u32 => Ok(Objective::Latency),
        c if c == QkObjective::Network as u32 => Ok(Objective::Network),
        c => Err(Failure(QkStatus::InvalidArgument, format!("unknown objective {c}"))),
    }
}

fn constraints(options: &QkStrategyOptions) -> Result<Constraints, Failure> {
    Ok(Constraints {
        capacity_limit: limit(options.capacity_limit, "capacity_limit")?,
        latency_limit: limit(options.latency_limit, "latency_limit")?,
        network_limit: limit(options.network_limit, "network_limit")?,
    })
}

fn metrics(qs: &QuorumSystem, sigma: &Strategy, w: &Workload) -> QkMetrics {
    let f = |r: Rational| rational::to_f64(&r);
    QkMetrics {
        load: f(sigma.load(qs, w)),
        capacity: f(sigma.capacity(qs, w)),
        latency: f(sigma.latency(qs, w)),
        network_load: f(sigma.network_load(qs, w)),
    }
}

/// Default strategy options: minimize load, no limits, `f = 0`.
#[no_mangle]
pub extern "C" fn qk_strategy_options_default() -> QkStrategyOptions {
    QkStrategyOptions {
        objective: QkObjective::Load as u32,
        capacity_limit: 0.0,
        latency_limit: 0.0,
        network_limit: 0.0,
        f: 0,
    }
}

/// Default search options: minimize load, no limits or budget.
#[no_mangle]
pub extern "C" fn qk_search_options_default() -> QkSearchOptions {
    QkSearchOptions {
        strategy: qk_strategy_options_default(),
        min_fault_tolerance: 0,
        budget: 0,
        timeout_s: 0.0,
    }
}

/// Message for the last failed call on this thread, or an empty string.
/// The pointer stays valid until the next call into this library on the
/// same thread.
#[no_mangle]
pub extern "C" fn qk_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `text` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qk_string_free(text: *mut c_char) {
    if !text.is_null() {
        drop(CString::from_raw(text));
    }
}

/// Builds a quorum system from a JSON configuration document (the format
/// read by the command-line tool).
///
/// # Safety
/// `config_json` must be null or a NUL-terminated string; `out` must be null
/// or writable.
#[no_mangle]
pub unsafe extern "C" fn qk_system_new(config_json: *const c_char, out: *mut *mut QkSystem) -> QkStatus {
    guard(|| {
        let text = read_str(config_json, "config_json")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let config = Config::from_json(text)?;
        let qs = config.quorum_system()?;
        let handle = Box::new(QkSystem {
            qs,
            workload: config.workload,
        });
        write_out(out, Box::into_raw(handle), "out")
    })
}

/// # Safety
/// `system` must be null or a handle from [`qk_system_new`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qk_system_free(system: *mut QkSystem) {
    if !system.is_null() {
        drop(Box::from_raw(system));
    }
}

unsafe fn system_ref<'a>(system: *const QkSystem) -> Result<&'a QkSystem, Failure> {
    system.as_ref().ok_or_else(|| null("system"))
}

/// Fault tolerance of the whole system.
///
/// # Safety
/// `system` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qk_system_fault_tolerance(system: *const QkSystem, out: *mut u32) -> QkStatus {
    guard(|| write_out(out, system_ref(system)?.qs.fault_tolerance() as u32, "out"))
}

/// # Safety
/// `system` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qk_system_read_fault_tolerance(system: *const QkSystem, out: *mut u32) -> QkStatus {
    guard(|| write_out(out, system_ref(system)?.qs.read_fault_tolerance() as u32, "out"))
}

/// # Safety
/// `system` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qk_system_write_fault_tolerance(system: *const QkSystem, out: *mut u32) -> QkStatus {
    guard(|| write_out(out, system_ref(system)?.qs.write_fault_tolerance() as u32, "out"))
}

/// Canonical read expression.
///
/// # Safety
/// `system` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qk_system_reads(system: *const QkSystem, out: *mut *mut c_char) -> QkStatus {
    guard(|| write_string(out, system_ref(system)?.qs.reads().canonical().to_string()))
}

/// Canonical write expression.
///
/// # Safety
/// `system` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qk_system_writes(system: *const QkSystem, out: *mut *mut c_char) -> QkStatus {
    guard(|| write_string(out, system_ref(system)?.qs.writes().canonical().to_string()))
}

/// Optimal strategy. With `points == NULL` and `len == 0` the workload from
/// the configuration is used; otherwise `points[0..len]` gives the read
/// fraction distribution. `options` may be null for the defaults.
///
/// # Safety
/// `system` must be a live handle, `points` must be null or point to `len`
/// readable entries, `options` must be null or readable, and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qk_system_strategy(
    system: *const QkSystem,
    points: *const QkWorkloadPoint,
    len: usize,
    options: *const QkStrategyOptions,
    out: *mut *mut QkStrategy,
) -> QkStatus {
    guard(|| {
        let sys = system_ref(system)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let workload = if points.is_null() {
            if len != 0 {
                return Err(null("points"));
            }
            sys.workload.clone()
        } else {
            let points = std::slice::from_raw_parts(points, len);
            let pairs = points
                .iter()
                .map(|p| Ok((exact(p.read_fraction, "read_fraction")?, exact(p.weight, "weight")?)))
                .collect::<Result<Vec<_>, Failure>>()?;
            Workload::new(pairs)?
        };
        let options = options
            .as_ref()
            .copied()
            .unwrap_or_else(|| qk_strategy_options_default());
        let strategy = find_strategy(
            &sys.qs,
            &workload,
            objective(options.objective)?,
            &constraints(&options)?,
            options.f as usize,
        )?;
        let handle = Box::new(QkStrategy {
            qs: sys.qs.clone(),
            strategy,
            workload,
        });
        write_out(out, Box::into_raw(handle), "out")
    })
}

/// # Safety
/// `strategy` must be null or a handle from [`qk_system_strategy`], not yet
/// freed.
#[no_mangle]
pub unsafe extern "C" fn qk_strategy_free(strategy: *mut QkStrategy) {
    if !strategy.is_null() {
        drop(Box::from_raw(strategy));
    }
}

unsafe fn strategy_ref<'a>(strategy: *const QkStrategy) -> Result<&'a QkStrategy, Failure> {
    strategy.as_ref().ok_or_else(|| null("strategy"))
}

/// Load, capacity, latency and network load under the strategy's workload.
///
/// # Safety
/// `strategy` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qk_strategy_metrics(strategy: *const QkStrategy, out: *mut QkMetrics) -> QkStatus {
    guard(|| {
        let s = strategy_ref(strategy)?;
        write_out(out, metrics(&s.qs, &s.strategy, &s.workload), "out")
    })
}

/// The strategy document printed by `quorumkit strategy`.
///
/// # Safety
/// `strategy` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qk_strategy_to_json(strategy: *const QkStrategy, out: *mut *mut c_char) -> QkStatus {
    guard(|| {
        let s = strategy_ref(strategy)?;
        write_string(
            out,
            report::to_json(&StrategyReport::new(&s.qs, &s.strategy, &s.workload)),
        )
    })
}

/// Searches read expressions over the configuration's nodes and writes the
/// search document printed by `quorumkit search`. `options` may be null.
///
/// # Safety
/// `config_json` must be a NUL-terminated string, `options` null or
/// readable, and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qk_search(
    config_json: *const c_char,
    options: *const QkSearchOptions,
    out: *mut *mut c_char,
) -> QkStatus {
    guard(|| {
        let text = read_str(config_json, "config_json")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let config = Config::from_json(text)?;
        let o = options.as_ref().copied().unwrap_or_else(|| qk_search_options_default());
        if o.timeout_s.is_nan() {
            return Err(Failure(QkStatus::InvalidArgument, "timeout_s is NaN".into()));
        }
        let search_options = SearchOptions {
            objective: objective(o.strategy.objective)?,
            constraints: constraints(&o.strategy)?,
            min_fault_tolerance: o.min_fault_tolerance as usize,
            f: o.strategy.f as usize,
            timeout: (o.timeout_s > 0.0).then(|| Duration::from_secs_f64(o.timeout_s.min(1e9))),
            budget: (o.budget > 0).then(|| usize::try_from(o.budget).unwrap_or(usize::MAX)),
        };
        let result = search(&config.nodes, &config.workload, &search_options)?;
        let doc = SearchReport::new(&result, search_options.objective, &config.workload);
        write_string(out, report::to_json(&doc))
    })
}

/// Dual of a quorum expression, printed canonically.
///
/// # Safety
/// `expr` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qk_expr_dual(expr: *const c_char, out: *mut *mut c_char) -> QkStatus {
    guard(|| {
        let parsed: Expr = read_str(expr, "expr")?.parse()?;
        write_string(out, parsed.dual().canonical().to_string())
    })
}
