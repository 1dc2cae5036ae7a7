//! C ABI over the preempt-inbox engine.
//!
//! Registries, inbox stores and simulation results are opaque handles that
//! the caller frees with the matching `*_free` function. Every fallible call
//! returns a [`PiStatus`]; on failure the message is available from
//! [`pi_last_error_message`] on the same thread. Strings handed out by this
//! library are NUL-terminated UTF-8 and must be released with
//! [`pi_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use preempt_inbox::sim::{SimError, ViewItem};
use preempt_inbox::{
    ContactAddress, InboxName, InboxStore, PriorityLevel, PriorityRegistry, RegistryError,
    SimOutcome, StoreError,
};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PiStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidAddress = 3,
    InvalidArgument = 4,
    ParseFailure = 5,
    RuntimeFailure = 6,
    IoFailure = 7,
    IndexOutOfRange = 8,
    InvariantViolation = 9,
    Panic = 10,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PiLevel {
    Default = 0,
    High = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PiInbox {
    Default = 0,
    Priority = 1,
}

impl From<PiInbox> for InboxName {
    fn from(b: PiInbox) -> Self {
        match b {
            PiInbox::Default => InboxName::Default,
            PiInbox::Priority => InboxName::Priority,
        }
    }
}

/// Contact priority table.
pub struct PiRegistry(PriorityRegistry);

/// Default and Priority inboxes.
pub struct PiStore(InboxStore);

/// Finished simulation: report plus final registry and inboxes.
pub struct PiSimulation(SimOutcome);

thread_local! {
    static LAST_ERROR: RefCell<Option<String>> = const { RefCell::new(None) };
}

struct Failure(PiStatus, String);

impl Failure {
    fn new(status: PiStatus, msg: impl ToString) -> Self {
        Failure(status, msg.to_string())
    }
}

impl From<RegistryError> for Failure {
    fn from(e: RegistryError) -> Self {
        let status = match e {
            RegistryError::InvalidAddress(_) => PiStatus::InvalidAddress,
            RegistryError::UnsupportedLevel => PiStatus::InvalidArgument,
            RegistryError::Parse { .. } => PiStatus::ParseFailure,
            RegistryError::Io(_) => PiStatus::IoFailure,
        };
        Failure::new(status, e)
    }
}

impl From<StoreError> for Failure {
    fn from(e: StoreError) -> Self {
        let status = match e {
            StoreError::IndexOutOfRange { .. } => PiStatus::IndexOutOfRange,
            StoreError::Parse { .. } => PiStatus::ParseFailure,
            StoreError::InvariantViolation(_) => PiStatus::InvariantViolation,
            StoreError::Io(_) => PiStatus::IoFailure,
            StoreError::DuplicateId { .. } | StoreError::NonIncreasingId { .. } => {
                PiStatus::InvalidArgument
            }
        };
        Failure::new(status, e)
    }
}

impl From<SimError> for Failure {
    fn from(e: SimError) -> Self {
        let status = match e {
            SimError::Parse(_) => PiStatus::ParseFailure,
            SimError::Runtime { .. } => PiStatus::RuntimeFailure,
        };
        Failure::new(status, e)
    }
}

fn guard<F>(f: F) -> PiStatus
where
    F: FnOnce() -> Result<(), Failure>,
{
    let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| {
        Err(Failure::new(PiStatus::Panic, "internal panic"))
    });
    match result {
        Ok(()) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            PiStatus::Ok
        }
        Err(Failure(status, msg)) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
            status
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::new(PiStatus::NullPointer, format!("{what} is NULL")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure::new(PiStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref()
        .ok_or_else(|| Failure::new(PiStatus::NullPointer, format!("{what} is NULL")))
}

unsafe fn handle_mut<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut()
        .ok_or_else(|| Failure::new(PiStatus::NullPointer, format!("{what} is NULL")))
}

unsafe fn out_ptr<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    handle_mut(p, what)
}

fn c_string(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| Failure::new(PiStatus::InvalidArgument, "text contains an interior NUL"))
}

fn open(path: &str) -> Result<BufReader<File>, Failure> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Failure::new(PiStatus::IoFailure, format!("{path}: {e}")))
}

fn create(path: &str) -> Result<BufWriter<File>, Failure> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Failure::new(PiStatus::IoFailure, format!("{path}: {e}")))
}

/// Message for the last failed call on this thread, or NULL if it
/// succeeded. Free with [`pi_string_free`].
#[no_mangle]
pub extern "C" fn pi_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|e| match e.borrow().as_deref() {
        Some(msg) => CString::new(msg.replace('\0', " "))
            .map_or(ptr::null_mut(), CString::into_raw),
        None => ptr::null_mut(),
    })
}

/// # Safety
/// `s` must be NULL or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pi_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

// ---- registry ----

#[no_mangle]
pub extern "C" fn pi_registry_new() -> *mut PiRegistry {
    Box::into_raw(Box::new(PiRegistry(PriorityRegistry::new())))
}

/// # Safety
/// `reg` must be NULL or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pi_registry_free(reg: *mut PiRegistry) {
    if !reg.is_null() {
        drop(Box::from_raw(reg));
    }
}

/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pi_registry_load(path: *const c_char, out: *mut *mut PiRegistry) -> PiStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let path = str_arg(path, "path")?;
        let reg = PriorityRegistry::load(open(path)?)?;
        *out = Box::into_raw(Box::new(PiRegistry(reg)));
        Ok(())
    })
}

/// # Safety
/// `reg` must be a live handle; `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn pi_registry_save(reg: *const PiRegistry, path: *const c_char) -> PiStatus {
    guard(|| {
        let reg = handle(reg, "registry")?;
        let path = str_arg(path, "path")?;
        reg.0.save(create(path)?)?;
        Ok(())
    })
}

/// # Safety
/// `reg` must be a live handle; `addr` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn pi_registry_set(reg: *mut PiRegistry, addr: *const c_char, level: PiLevel) -> PiStatus {
    guard(|| {
        let reg = handle_mut(reg, "registry")?;
        let addr = ContactAddress::new(str_arg(addr, "addr")?)?;
        let level = match level {
            PiLevel::High => PriorityLevel::High,
            PiLevel::Default => PriorityLevel::Default,
        };
        reg.0.set_priority(&addr, level);
        Ok(())
    })
}

/// # Safety
/// `reg` must be a live handle; `addr` a NUL-terminated string; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pi_registry_get(
    reg: *const PiRegistry,
    addr: *const c_char,
    out: *mut PiLevel,
) -> PiStatus {
    guard(|| {
        let reg = handle(reg, "registry")?;
        let out = out_ptr(out, "out")?;
        let addr = ContactAddress::new(str_arg(addr, "addr")?)?;
        *out = match reg.0.get_priority(&addr) {
            PriorityLevel::High => PiLevel::High,
            PriorityLevel::Default => PiLevel::Default,
        };
        Ok(())
    })
}

/// High contacts, sorted, one per line (each followed by `\n`).
///
/// # Safety
/// `reg` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pi_registry_list_high(reg: *const PiRegistry, out: *mut *mut c_char) -> PiStatus {
    guard(|| {
        let reg = handle(reg, "registry")?;
        let out = out_ptr(out, "out")?;
        let text: String = reg.0.high_contacts().map(|a| format!("{a}\n")).collect();
        *out = c_string(text)?;
        Ok(())
    })
}

// ---- inbox store ----

#[no_mangle]
pub extern "C" fn pi_store_new() -> *mut PiStore {
    Box::into_raw(Box::new(PiStore(InboxStore::new())))
}

/// # Safety
/// `store` must be NULL or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pi_store_free(store: *mut PiStore) {
    if !store.is_null() {
        drop(Box::from_raw(store));
    }
}

/// # Safety
/// `path` must be a NUL-terminated string; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pi_store_load(path: *const c_char, out: *mut *mut PiStore) -> PiStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let path = str_arg(path, "path")?;
        let store = InboxStore::load(open(path)?)?;
        *out = Box::into_raw(Box::new(PiStore(store)));
        Ok(())
    })
}

/// # Safety
/// `store` must be a live handle; `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn pi_store_save(store: *const PiStore, path: *const c_char) -> PiStatus {
    guard(|| {
        let store = handle(store, "store")?;
        let path = str_arg(path, "path")?;
        store.0.save(create(path)?)?;
        Ok(())
    })
}

/// # Safety
/// `store` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pi_store_len(store: *const PiStore, inbox: PiInbox, out: *mut usize) -> PiStatus {
    guard(|| {
        let store = handle(store, "store")?;
        *out_ptr(out, "out")? = store.0.len(inbox.into());
        Ok(())
    })
}

/// Display text of the message at `index`.
///
/// # Safety
/// `store` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pi_store_read(
    store: *const PiStore,
    inbox: PiInbox,
    index: usize,
    out: *mut *mut c_char,
) -> PiStatus {
    guard(|| {
        let store = handle(store, "store")?;
        let out = out_ptr(out, "out")?;
        let text = store.0.read_message(inbox.into(), index)?;
        *out = c_string(text.to_owned())?;
        Ok(())
    })
}

/// Messages whose origin contains `filter`, in the report's listing form:
/// `VIEW <box> <count>` then `  <id> <origin> "<display_text>"` per match.
/// A NULL `filter` matches everything.
///
/// # Safety
/// `store` must be a live handle; `filter` NULL or NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pi_store_view(
    store: *const PiStore,
    inbox: PiInbox,
    filter: *const c_char,
    out: *mut *mut c_char,
) -> PiStatus {
    guard(|| {
        let store = handle(store, "store")?;
        let out = out_ptr(out, "out")?;
        let filter = if filter.is_null() { "" } else { str_arg(filter, "filter")? };
        let inbox = InboxName::from(inbox);
        let hits = store.0.view_messages(inbox, filter);
        let mut text = format!("VIEW {inbox} {}\n", hits.len());
        for m in hits {
            let item = ViewItem {
                id: m.id,
                origin: m.origin.clone(),
                display_text: m.display_text.clone(),
            };
            text.push_str(&format!("{item}\n"));
        }
        *out = c_string(text)?;
        Ok(())
    })
}

// ---- simulation ----

/// Parse and run a trace given as text.
///
/// # Safety
/// `trace` must be a NUL-terminated string; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pi_simulate(trace: *const c_char, out: *mut *mut PiSimulation) -> PiStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let trace = str_arg(trace, "trace")?;
        let outcome = preempt_inbox::simulate(trace)?;
        *out = Box::into_raw(Box::new(PiSimulation(outcome)));
        Ok(())
    })
}

/// # Safety
/// `sim` must be NULL or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pi_simulation_free(sim: *mut PiSimulation) {
    if !sim.is_null() {
        drop(Box::from_raw(sim));
    }
}

/// Full report text, header included.
///
/// # Safety
/// `sim` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pi_simulation_report(sim: *const PiSimulation, out: *mut *mut c_char) -> PiStatus {
    guard(|| {
        let sim = handle(sim, "simulation")?;
        let out = out_ptr(out, "out")?;
        *out = c_string(sim.0.report.render())?;
        Ok(())
    })
}

/// Copy of the final inboxes, as a new handle.
///
/// # Safety
/// `sim` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pi_simulation_store(sim: *const PiSimulation, out: *mut *mut PiStore) -> PiStatus {
    guard(|| {
        let sim = handle(sim, "simulation")?;
        let out = out_ptr(out, "out")?;
        *out = Box::into_raw(Box::new(PiStore(sim.0.store.clone())));
        Ok(())
    })
}

/// Copy of the final contact priorities, as a new handle.
///
/// # Safety
/// `sim` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pi_simulation_registry(
    sim: *const PiSimulation,
    out: *mut *mut PiRegistry,
) -> PiStatus {
    guard(|| {
        let sim = handle(sim, "simulation")?;
        let out = out_ptr(out, "out")?;
        *out = Box::into_raw(Box::new(PiRegistry(sim.0.registry.clone())));
        Ok(())
    })
}
