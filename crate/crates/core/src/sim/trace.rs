//! Scenario trace files.
//!
//! ```text
//! <tick> SETPRIO <address> HIGH|DEFAULT
//! <tick> TASK <name> <priority 0-139> <duration >= 1>
//! <tick> SMS <origin> <body to end of line>
//! <tick> VIEW DEFAULT|PRIORITY [filter]
//! <tick> ADVANCE <n >= 1>
//! ```
//!
//! Blank lines and lines starting with `#` are skipped. Ticks never
//! decrease.

use std::fmt;

use thiserror::Error;

use crate::registry::{ContactAddress, PriorityLevel};
use crate::sched::TaskPriority;
use crate::store::InboxName;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("trace line {line}: {reason}")]
pub struct TraceError {
    pub line: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Action {
    SetPrio {
        addr: ContactAddress,
        level: PriorityLevel,
    },
    TaskStart {
        name: String,
        priority: TaskPriority,
        duration: u64,
    },
    Sms {
        origin: ContactAddress,
        body: String,
    },
    View {
        inbox: InboxName,
        filter: String,
    },
    Advance {
        ticks: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioEvent {
    pub tick: u64,
    /// 1-based source line, for error reporting.
    pub line: usize,
    pub action: Action,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Trace {
    pub events: Vec<ScenarioEvent>,
}

impl Trace {
    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }
}

/// Split off the next space-delimited token. The remainder keeps everything
/// after the single separating space.
fn next_token(s: &str) -> (&str, &str) {
    let s = s.trim_start_matches(' ');
    match s.find(' ') {
        Some(i) => (&s[..i], &s[i + 1..]),
        None => (s, ""),
    }
}

pub fn parse_trace(source: &str) -> Result<Trace, TraceError> {
    let mut events = Vec::new();
    let mut last_tick = 0;
    for (idx, raw) in source.split('\n').enumerate() {
        let line = idx + 1;
        let text = raw.strip_suffix('\r').unwrap_or(raw);
        if text.trim().is_empty() || text.trim_start().starts_with('#') {
            continue;
        }
        let err = |reason: String| TraceError { line, reason };
        let (tick_tok, rest) = next_token(text);
        let tick: u64 = tick_tok
            .parse()
            .map_err(|_| err(format!("tick {tick_tok:?} is not a nonnegative integer")))?;
        if tick < last_tick {
            return Err(err(format!("tick {tick} is earlier than the previous tick {last_tick}")));
        }
        last_tick = tick;
        let (verb, rest) = next_token(rest);
        let action = parse_action(verb, rest).map_err(err)?;
        events.push(ScenarioEvent { tick, line, action });
    }
    Ok(Trace { events })
}

fn parse_action(verb: &str, rest: &str) -> Result<Action, String> {
    match verb {
        "SETPRIO" => {
            let (addr, rest) = next_token(rest);
            let (level, rest) = next_token(rest);
            no_trailing(rest)?;
            let level = match level {
                "HIGH" => PriorityLevel::High,
                "DEFAULT" => PriorityLevel::Default,
                other => return Err(format!("expected HIGH or DEFAULT, got {other:?}")),
            };
            Ok(Action::SetPrio {
                addr: address(addr)?,
                level,
            })
        }
        "TASK" => {
            let (name, rest) = next_token(rest);
            let (prio, rest) = next_token(rest);
            let (duration, rest) = next_token(rest);
            no_trailing(rest)?;
            if name.is_empty() {
                return Err("TASK needs a name".into());
            }
            let prio: u32 = prio
                .parse()
                .map_err(|_| format!("priority {prio:?} is not an integer"))?;
            let priority = TaskPriority::new(prio).map_err(|e| e.to_string())?;
            let duration = positive(duration, "duration")?;
            Ok(Action::TaskStart {
                name: name.to_string(),
                priority,
                duration,
            })
        }
        "SMS" => {
            let (origin, body) = next_token(rest);
            Ok(Action::Sms {
                origin: address(origin)?,
                body: body.to_string(),
            })
        }
        "VIEW" => {
            let (inbox, filter) = next_token(rest);
            let inbox = match inbox {
                "DEFAULT" => InboxName::Default,
                "PRIORITY" => InboxName::Priority,
                other => return Err(format!("expected DEFAULT or PRIORITY, got {other:?}")),
            };
            Ok(Action::View {
                inbox,
                filter: filter.to_string(),
            })
        }
        "ADVANCE" => {
            let (n, rest) = next_token(rest);
            no_trailing(rest)?;
            Ok(Action::Advance {
                ticks: positive(n, "ADVANCE count")?,
            })
        }
        "" => Err("missing verb".into()),
        other => Err(format!("unknown verb {other:?}")),
    }
}

fn address(tok: &str) -> Result<ContactAddress, String> {
    ContactAddress::new(tok).map_err(|e| e.to_string())
}

fn positive(tok: &str, what: &str) -> Result<u64, String> {
    match tok.parse::<u64>() {
        Ok(n) if n >= 1 => Ok(n),
        _ => Err(format!("{what} {tok:?} must be an integer >= 1")),
    }
}

fn no_trailing(rest: &str) -> Result<(), String> {
    if rest.trim().is_empty() {
        Ok(())
    } else {
        Err(format!("unexpected trailing text {rest:?}"))
    }
}

impl fmt::Display for ScenarioEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ", self.tick)?;
        match &self.action {
            Action::SetPrio { addr, level } => write!(f, "SETPRIO {addr} {level}"),
            Action::TaskStart {
                name,
                priority,
                duration,
            } => write!(f, "TASK {name} {priority} {duration}"),
            Action::Sms { origin, body } => write!(f, "SMS {origin} {body}"),
            Action::View { inbox, filter } => {
                let inbox = match inbox {
                    InboxName::Default => "DEFAULT",
                    InboxName::Priority => "PRIORITY",
                };
                if filter.is_empty() {
                    write!(f, "VIEW {inbox}")
                } else {
                    write!(f, "VIEW {inbox} {filter}")
                }
            }
            Action::Advance { ticks } => write!(f, "ADVANCE {ticks}"),
        }
    }
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for ev in &self.events {
            writeln!(f, "{ev}")?;
        }
        Ok(())
    }
}
