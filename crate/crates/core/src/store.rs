//! Dual inbox storage: every message goes to the Default inbox, messages
//! from High contacts are also kept in the Priority inbox.
//!
//! Persisted as JSON Lines, one object per (box, message) pair, Default box
//! first. Keys appear in the fixed order `box, id, origin, body,
//! display_text, tick`.

use std::collections::HashSet;
use std::fmt;
use std::io::{self, BufRead, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::registry::ContactAddress;

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("message id {id} already stored in the {inbox} inbox")]
    DuplicateId { inbox: InboxName, id: u64 },
    #[error("message id {id} is not greater than the last id in the {inbox} inbox")]
    NonIncreasingId { inbox: InboxName, id: u64 },
    #[error("index {index} out of range for the {inbox} inbox ({len} messages)")]
    IndexOutOfRange {
        inbox: InboxName,
        index: usize,
        len: usize,
    },
    #[error("inbox line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("message id {0} is in the Priority inbox but not the Default inbox")]
    InvariantViolation(u64),
    #[error("inbox i/o: {0}")]
    Io(#[from] io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum InboxName {
    Default,
    Priority,
}

impl InboxName {
    pub const ALL: [InboxName; 2] = [InboxName::Default, InboxName::Priority];

    pub fn as_str(self) -> &'static str {
        match self {
            InboxName::Default => "Default",
            InboxName::Priority => "Priority",
        }
    }
}

impl fmt::Display for InboxName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for InboxName {
    type Err = String;

    /// Case-insensitive `default` / `priority`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("default") {
            Ok(InboxName::Default)
        } else if s.eq_ignore_ascii_case("priority") {
            Ok(InboxName::Priority)
        } else {
            Err(format!("unknown inbox {s:?}"))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StoredMessage {
    pub id: u64,
    pub origin: ContactAddress,
    pub body: String,
    pub display_text: String,
    pub tick: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct InboxStore {
    default: Vec<StoredMessage>,
    priority: Vec<StoredMessage>,
}

/// Outcome of a linear scan over one inbox.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanResult<'a> {
    pub matches: Vec<&'a StoredMessage>,
    /// Records looked at to produce `matches`.
    pub examined: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Record<'a> {
    #[serde(rename = "box")]
    inbox: InboxName,
    id: u64,
    #[serde(borrow)]
    origin: std::borrow::Cow<'a, str>,
    #[serde(borrow)]
    body: std::borrow::Cow<'a, str>,
    #[serde(borrow)]
    display_text: std::borrow::Cow<'a, str>,
    tick: u64,
}

impl InboxStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn messages(&self, inbox: InboxName) -> &[StoredMessage] {
        match inbox {
            InboxName::Default => &self.default,
            InboxName::Priority => &self.priority,
        }
    }

    fn messages_mut(&mut self, inbox: InboxName) -> &mut Vec<StoredMessage> {
        match inbox {
            InboxName::Default => &mut self.default,
            InboxName::Priority => &mut self.priority,
        }
    }

    pub fn len(&self, inbox: InboxName) -> usize {
        self.messages(inbox).len()
    }

    pub fn contains(&self, inbox: InboxName, id: u64) -> bool {
        // ids are strictly increasing within a box
        self.messages(inbox).binary_search_by_key(&id, |m| m.id).is_ok()
    }

    /// Checks that `id` could be appended to `inbox` without changing anything.
    pub fn check_append(&self, inbox: InboxName, id: u64) -> Result<(), StoreError> {
        if self.contains(inbox, id) {
            return Err(StoreError::DuplicateId { inbox, id });
        }
        match self.messages(inbox).last() {
            Some(last) if last.id >= id => Err(StoreError::NonIncreasingId { inbox, id }),
            _ => Ok(()),
        }
    }

    pub fn append_message(&mut self, inbox: InboxName, msg: StoredMessage) -> Result<(), StoreError> {
        self.check_append(inbox, msg.id)?;
        self.messages_mut(inbox).push(msg);
        Ok(())
    }

    /// Messages whose origin contains `contact_filter` as a substring, in
    /// stored order. The empty filter matches everything, and "555" matches
    /// both "5554" and "5556".
    pub fn view_messages(&self, inbox: InboxName, contact_filter: &str) -> Vec<&StoredMessage> {
        self.scan(inbox, |m| m.origin.as_str().contains(contact_filter)).matches
    }

    pub fn scan<F>(&self, inbox: InboxName, mut keep: F) -> ScanResult<'_>
    where
        F: FnMut(&StoredMessage) -> bool,
    {
        let mut examined = 0;
        let matches = self
            .messages(inbox)
            .iter()
            .filter(|m| {
                examined += 1;
                keep(m)
            })
            .collect();
        ScanResult { matches, examined }
    }

    /// Display text of the message at `index`.
    pub fn read_message(&self, inbox: InboxName, index: usize) -> Result<&str, StoreError> {
        let msgs = self.messages(inbox);
        msgs.get(index)
            .map(|m| m.display_text.as_str())
            .ok_or(StoreError::IndexOutOfRange {
                inbox,
                index,
                len: msgs.len(),
            })
    }

    /// Every Priority id also appears in the Default box.
    pub fn check_dual_storage(&self) -> Result<(), StoreError> {
        let default_ids: HashSet<u64> = self.default.iter().map(|m| m.id).collect();
        match self.priority.iter().find(|m| !default_ids.contains(&m.id)) {
            Some(m) => Err(StoreError::InvariantViolation(m.id)),
            None => Ok(()),
        }
    }

    pub fn save<W: Write>(&self, mut sink: W) -> Result<(), StoreError> {
        for inbox in InboxName::ALL {
            for m in self.messages(inbox) {
                let rec = Record {
                    inbox,
                    id: m.id,
                    origin: m.origin.as_str().into(),
                    body: m.body.as_str().into(),
                    display_text: m.display_text.as_str().into(),
                    tick: m.tick,
                };
                serde_json::to_writer(&mut sink, &rec).map_err(io::Error::from)?;
                sink.write_all(b"\n")?;
            }
        }
        sink.flush()?;
        Ok(())
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        self.save(&mut out).expect("writing to a Vec cannot fail");
        out
    }

    pub fn load<R: BufRead>(source: R) -> Result<Self, StoreError> {
        let mut store = InboxStore::new();
        let mut seen_priority = false;
        for (idx, line) in source.lines().enumerate() {
            let line = line?;
            let lineno = idx + 1;
            let parse_err = |reason: String| StoreError::Parse { line: lineno, reason };
            let rec: Record<'_> = serde_json::from_str(&line).map_err(|e| parse_err(e.to_string()))?;
            match rec.inbox {
                InboxName::Priority => seen_priority = true,
                InboxName::Default if seen_priority => {
                    return Err(parse_err("Default record after Priority records".into()));
                }
                InboxName::Default => {}
            }
            let origin = ContactAddress::new(rec.origin.as_ref())
                .map_err(|e| parse_err(e.to_string()))?;
            let msg = StoredMessage {
                id: rec.id,
                origin,
                body: rec.body.into_owned(),
                display_text: rec.display_text.into_owned(),
                tick: rec.tick,
            };
            store
                .append_message(rec.inbox, msg)
                .map_err(|e| parse_err(e.to_string()))?;
        }
        store.check_dual_storage()?;
        Ok(store)
    }
}
