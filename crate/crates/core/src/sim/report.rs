//! Simulation report lines.
//!
//! ```text
//! # preempt-inbox report v1
//! t=<tick> DISPATCH <task>
//! t=<tick> PREEMPT <task> by <task>
//! t=<tick> RESUME <task>
//! t=<tick> DONE <task>
//! t=<tick> STORE <box> <id>
//! t=<tick> FLASH "<display_text>"
//! t=<tick> VIEW <box> <count>
//!   <id> <origin> "<display_text>"
//! ```
//!
//! Quoted text is a JSON string literal.

use std::fmt;
use std::io::{self, Write};

use crate::registry::ContactAddress;
use crate::store::InboxName;

pub const REPORT_HEADER: &str = "# preempt-inbox report v1";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ViewItem {
    pub id: u64,
    pub origin: ContactAddress,
    pub display_text: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReportEntry {
    Dispatch { tick: u64, task: String },
    Preempt { tick: u64, task: String, by: String },
    Resume { tick: u64, task: String },
    Done { tick: u64, task: String },
    Store { tick: u64, inbox: InboxName, id: u64 },
    Flash { tick: u64, display_text: String },
    View { tick: u64, inbox: InboxName, items: Vec<ViewItem> },
}

impl ReportEntry {
    pub fn tick(&self) -> u64 {
        match self {
            ReportEntry::Dispatch { tick, .. }
            | ReportEntry::Preempt { tick, .. }
            | ReportEntry::Resume { tick, .. }
            | ReportEntry::Done { tick, .. }
            | ReportEntry::Store { tick, .. }
            | ReportEntry::Flash { tick, .. }
            | ReportEntry::View { tick, .. } => *tick,
        }
    }
}

pub(crate) fn quoted(text: &str) -> String {
    serde_json::to_string(text).expect("strings always serialize")
}

impl fmt::Display for ViewItem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "  {} {} {}", self.id, self.origin, quoted(&self.display_text))
    }
}

/// A VIEW entry spans `1 + items` lines; the others are one line each.
impl fmt::Display for ReportEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReportEntry::Dispatch { tick, task } => write!(f, "t={tick} DISPATCH {task}"),
            ReportEntry::Preempt { tick, task, by } => write!(f, "t={tick} PREEMPT {task} by {by}"),
            ReportEntry::Resume { tick, task } => write!(f, "t={tick} RESUME {task}"),
            ReportEntry::Done { tick, task } => write!(f, "t={tick} DONE {task}"),
            ReportEntry::Store { tick, inbox, id } => write!(f, "t={tick} STORE {inbox} {id}"),
            ReportEntry::Flash { tick, display_text } => {
                write!(f, "t={tick} FLASH {}", quoted(display_text))
            }
            ReportEntry::View { tick, inbox, items } => {
                write!(f, "t={tick} VIEW {inbox} {}", items.len())?;
                for item in items {
                    write!(f, "\n{item}")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SimReport {
    pub entries: Vec<ReportEntry>,
}

impl SimReport {
    /// Text lines after the header.
    pub fn lines(&self) -> Vec<String> {
        self.entries
            .iter()
            .flat_map(|e| e.to_string().lines().map(str::to_owned).collect::<Vec<_>>())
            .collect()
    }

    pub fn write_to<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "{REPORT_HEADER}")?;
        for entry in &self.entries {
            writeln!(out, "{entry}")?;
        }
        out.flush()
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        self.write_to(&mut out).expect("writing to a Vec cannot fail");
        out
    }

    pub fn render(&self) -> String {
        String::from_utf8(self.to_bytes()).expect("report is UTF-8")
    }
}
