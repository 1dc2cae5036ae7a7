//! Test-only oracles and generators. Nothing here calls into the code paths
//! it is used to check.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashSet};
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::Rng;

use preempt_inbox::sim::{Action, ScenarioEvent, Trace};
use preempt_inbox::{
    ContactAddress, InboxName, InboxStore, PriorityLevel, SchedEvent, SchedEventKind, StoredMessage,
    TaskId, TaskPriority,
};

pub const ADDRESSES: [&str; 6] = ["5554", "5556", "5558", "555", "55540", "911"];

pub fn fixtures_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// (name, trace text, golden report text) for every fixture.
pub fn fixtures() -> Vec<(String, String, String)> {
    let mut out: Vec<_> = std::fs::read_dir(fixtures_dir())
        .expect("fixtures dir")
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "trace"))
        .map(|p| {
            let name = p.file_stem().unwrap().to_string_lossy().into_owned();
            let trace = std::fs::read_to_string(&p).unwrap();
            let golden = std::fs::read_to_string(golden_dir().join(format!("{name}.report")))
                .unwrap_or_else(|e| panic!("golden for {name}: {e}"));
            (name, trace, golden)
        })
        .collect();
    out.sort();
    out
}

pub fn addr(s: &str) -> ContactAddress {
    ContactAddress::new(s).unwrap()
}

/// Ticks each task spent running, rebuilt from the event log alone.
pub fn executed_ticks(events: &[SchedEvent]) -> BTreeMap<TaskId, u64> {
    let mut executed = BTreeMap::new();
    let mut running: Option<(TaskId, u64)> = None;
    for ev in events {
        match ev.kind {
            SchedEventKind::Dispatch | SchedEventKind::Resume => {
                assert!(running.is_none(), "dispatch while {running:?} still running");
                running = Some((ev.subject, ev.tick));
            }
            SchedEventKind::Preempt { .. } | SchedEventKind::Done => {
                let (id, since) = running.take().expect("stop without a running task");
                assert_eq!(id, ev.subject);
                *executed.entry(id).or_insert(0) += ev.tick - since;
            }
        }
    }
    executed
}

/// Every Preempt names a strictly more urgent task, and every Resume follows
/// an earlier Preempt of the same task.
pub fn event_log_sound(events: &[SchedEvent], prio: impl Fn(TaskId) -> TaskPriority) -> bool {
    let mut suspended = HashSet::new();
    events.iter().all(|ev| match ev.kind {
        SchedEventKind::Preempt { by } => {
            suspended.insert(ev.subject);
            prio(by).value() < prio(ev.subject).value()
        }
        SchedEventKind::Resume => suspended.remove(&ev.subject),
        _ => true,
    })
}

pub fn random_body<R: Rng>(rng: &mut R, allow_newline: bool) -> String {
    const PIECES: [&str; 12] = [
        "hello", " ", "\t", "\"", "\\", "'", "é", "📩", "{}", ":", "555", "x",
    ];
    const CONTROL: [&str; 3] = ["\n", "\r\n", "\u{1}"];
    let len = rng.gen_range(0..8);
    (0..len)
        .map(|_| {
            if allow_newline && rng.gen_bool(0.15) {
                *CONTROL.choose(rng).unwrap()
            } else {
                *PIECES.choose(rng).unwrap()
            }
        })
        .collect()
}

/// Body text that survives the single-line trace grammar.
fn trace_body<R: Rng>(rng: &mut R) -> String {
    random_body(rng, false)
}

pub struct TraceShape {
    pub events: usize,
    pub sms_share: f64,
    pub high_share: f64,
}

impl Default for TraceShape {
    fn default() -> Self {
        TraceShape {
            events: 40,
            sms_share: 0.4,
            high_share: 0.3,
        }
    }
}

/// Random scenario: tasks at arbitrary priorities, priority changes, and
/// messages from a small address pool. Ticks never decrease.
pub fn random_trace<R: Rng>(rng: &mut R, shape: &TraceShape) -> Trace {
    let mut events = Vec::with_capacity(shape.events);
    let mut tick = 0u64;
    for line in 1..=shape.events {
        if rng.gen_bool(0.5) {
            tick += rng.gen_range(0..6);
        }
        let roll: f64 = rng.gen();
        let action = if roll < shape.sms_share {
            Action::Sms {
                origin: addr(ADDRESSES.choose(rng).unwrap()),
                body: trace_body(rng),
            }
        } else if roll < shape.sms_share + shape.high_share * 0.5 {
            Action::SetPrio {
                addr: addr(ADDRESSES.choose(rng).unwrap()),
                level: if rng.gen_bool(0.75) {
                    PriorityLevel::High
                } else {
                    PriorityLevel::Default
                },
            }
        } else if roll < 0.85 {
            Action::TaskStart {
                name: format!("task{line}"),
                priority: TaskPriority::new(rng.gen_range(0..140)).unwrap(),
                duration: rng.gen_range(1..15),
            }
        } else if roll < 0.93 {
            Action::Advance {
                ticks: rng.gen_range(1..10),
            }
        } else {
            Action::View {
                inbox: if rng.gen() { InboxName::Default } else { InboxName::Priority },
                filter: ["", "555", "5554", "9", "55540"].choose(rng).unwrap().to_string(),
            }
        };
        events.push(ScenarioEvent { tick, line, action });
    }
    Trace { events }
}

/// Message ids that should land in the Priority inbox: replays the trace's
/// priority changes with a plain set, numbering messages 1, 2, ... in order.
pub fn expected_priority_ids(trace: &Trace) -> (Vec<u64>, u64) {
    let mut high: HashSet<String> = HashSet::new();
    let mut ids = Vec::new();
    let mut next = 1;
    for ev in &trace.events {
        match &ev.action {
            Action::SetPrio { addr, level } => {
                if *level == PriorityLevel::High {
                    high.insert(addr.as_str().to_string());
                } else {
                    high.remove(addr.as_str());
                }
            }
            Action::Sms { origin, .. } => {
                if high.contains(origin.as_str()) {
                    ids.push(next);
                }
                next += 1;
            }
            _ => {}
        }
    }
    (ids, next - 1)
}

/// Byte-wise substring search.
pub fn naive_contains(haystack: &str, needle: &str) -> bool {
    let (h, n) = (haystack.as_bytes(), needle.as_bytes());
    if n.is_empty() {
        return true;
    }
    if n.len() > h.len() {
        return false;
    }
    (0..=h.len() - n.len()).any(|i| (0..n.len()).all(|j| h[i + j] == n[j]))
}

pub fn random_digits<R: Rng>(rng: &mut R, max_len: usize) -> String {
    let len = rng.gen_range(1..=max_len);
    (0..len)
        .map(|_| char::from(b'0' + rng.gen_range(0..10u8)))
        .collect()
}

/// Random valid store: increasing ids in Default, a random subset mirrored
/// into Priority.
pub fn random_store<R: Rng>(rng: &mut R, max_msgs: usize, newlines: bool) -> InboxStore {
    let mut store = InboxStore::new();
    let mut id = 0;
    for _ in 0..rng.gen_range(0..=max_msgs) {
        id += rng.gen_range(1..4);
        let origin = if rng.gen_bool(0.6) {
            ADDRESSES.choose(rng).unwrap().to_string()
        } else {
            random_digits(rng, 6)
        };
        let body = random_body(rng, newlines);
        let msg = StoredMessage {
            id,
            display_text: format!("{origin} :{body}"),
            origin: addr(&origin),
            body,
            tick: rng.gen_range(0..1000),
        };
        let mirrored = rng.gen_bool(0.4);
        store.append_message(InboxName::Default, msg.clone()).unwrap();
        if mirrored {
            store.append_message(InboxName::Priority, msg).unwrap();
        }
    }
    store
}
