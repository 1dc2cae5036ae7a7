//! Incoming message handling: decode, classify by sender, route.
//!
//! A message from a High contact is stored in both inboxes and then flashed
//! by a short task at the most urgent priority, which interrupts whatever is
//! running. A Default message lands in the Default inbox and touches nothing
//! else.

use thiserror::Error;

use crate::registry::{ContactAddress, PriorityLevel, PriorityRegistry};
use crate::sched::{SchedError, Scheduler, TaskId, TaskPriority};
use crate::store::{InboxName, InboxStore, StoreError, StoredMessage};

/// Separator placed between the sender address and each part's body.
pub const DISPLAY_SEPARATOR: &str = " :";

#[derive(Debug, Error)]
pub enum RouterError {
    #[error("receive event has no parts")]
    EmptyParts,
    #[error("receive event mixes origins {first} and {other}")]
    MixedOrigins {
        first: ContactAddress,
        other: ContactAddress,
    },
    #[error(transparent)]
    Store(#[from] StoreError),
    #[error(transparent)]
    Sched(#[from] SchedError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MessagePart {
    pub origin: ContactAddress,
    pub body: String,
}

/// One delivery from the platform: a multi-part message.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawReceiveEvent {
    pub tick: u64,
    pub parts: Vec<MessagePart>,
}

impl RawReceiveEvent {
    pub fn single(tick: u64, origin: ContactAddress, body: impl Into<String>) -> Self {
        RawReceiveEvent {
            tick,
            parts: vec![MessagePart {
                origin,
                body: body.into(),
            }],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodedMessage {
    pub id: u64,
    pub origin: ContactAddress,
    pub body: String,
    pub display_text: String,
    pub tick: u64,
}

impl From<&DecodedMessage> for StoredMessage {
    fn from(m: &DecodedMessage) -> Self {
        StoredMessage {
            id: m.id,
            origin: m.origin.clone(),
            body: m.body.clone(),
            display_text: m.display_text.clone(),
            tick: m.tick,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RouteDecision {
    pub level: PriorityLevel,
    pub flash: bool,
    /// Target inboxes, in the order they are written.
    pub boxes: Vec<InboxName>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RouterEvent {
    Stored { inbox: InboxName, id: u64 },
    Flashed { id: u64, display_text: String },
}

/// Result of handling one receive event.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Receipt {
    pub message: DecodedMessage,
    pub level: PriorityLevel,
    /// The flash task, when one was enqueued.
    pub flash_task: Option<TaskId>,
    /// Stored events first, then Flashed. Any scheduler events caused by the
    /// flash enqueue happen between the last Stored and the Flashed.
    pub events: Vec<RouterEvent>,
}

/// Flash task parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RouterConfig {
    pub flash_priority: TaskPriority,
    pub flash_ticks: u64,
}

impl Default for RouterConfig {
    fn default() -> Self {
        RouterConfig {
            flash_priority: TaskPriority::MOST_URGENT,
            flash_ticks: 1,
        }
    }
}

/// Priority a foreground activity gets when none is specified.
pub const DEFAULT_FOREGROUND_PRIORITY: u32 = 100;

/// Concatenate part bodies; build the display text as
/// `origin + " :" + body` for each part in turn.
pub fn decode_receive(raw: &RawReceiveEvent, next_id: u64) -> Result<DecodedMessage, RouterError> {
    let first = raw.parts.first().ok_or(RouterError::EmptyParts)?;
    let mut body = String::new();
    let mut display_text = String::new();
    for part in &raw.parts {
        if part.origin != first.origin {
            return Err(RouterError::MixedOrigins {
                first: first.origin.clone(),
                other: part.origin.clone(),
            });
        }
        display_text.push_str(part.origin.as_str());
        display_text.push_str(DISPLAY_SEPARATOR);
        display_text.push_str(&part.body);
        body.push_str(&part.body);
    }
    Ok(DecodedMessage {
        id: next_id,
        origin: first.origin.clone(),
        body,
        display_text,
        tick: raw.tick,
    })
}

/// Exact full-address lookup; unlike the inbox view filter there is no
/// substring matching here.
pub fn classify(msg: &DecodedMessage, reg: &PriorityRegistry) -> PriorityLevel {
    reg.get_priority(&msg.origin)
}

pub fn route(level: PriorityLevel) -> RouteDecision {
    match level {
        PriorityLevel::High => RouteDecision {
            level,
            flash: true,
            boxes: vec![InboxName::Priority, InboxName::Default],
        },
        PriorityLevel::Default => RouteDecision {
            level,
            flash: false,
            boxes: vec![InboxName::Default],
        },
    }
}

/// Name given to the task that flashes message `id`.
pub fn flash_task_name(id: u64) -> String {
    format!("flash:{id}")
}

/// Stateful receive path. Assigns message ids starting at 1.
#[derive(Debug, Clone)]
pub struct MessageRouter {
    config: RouterConfig,
    next_id: u64,
}

impl Default for MessageRouter {
    fn default() -> Self {
        Self::new(RouterConfig::default())
    }
}

impl MessageRouter {
    pub fn new(config: RouterConfig) -> Self {
        MessageRouter { config, next_id: 1 }
    }

    pub fn config(&self) -> RouterConfig {
        self.config
    }

    pub fn next_id(&self) -> u64 {
        self.next_id
    }

    /// Decode, classify and route one event. Inbox writes happen before the
    /// flash task is enqueued. Nothing is modified if the event fails to
    /// decode or an inbox would reject the id.
    pub fn on_receive(
        &mut self,
        raw: &RawReceiveEvent,
        reg: &PriorityRegistry,
        sched: &mut Scheduler,
        store: &mut InboxStore,
    ) -> Result<Receipt, RouterError> {
        let msg = decode_receive(raw, self.next_id)?;
        let level = classify(&msg, reg);
        let decision = route(level);

        for &inbox in &decision.boxes {
            store.check_append(inbox, msg.id)?;
        }
        let mut events = Vec::with_capacity(decision.boxes.len() + 1);
        for &inbox in &decision.boxes {
            store.append_message(inbox, StoredMessage::from(&msg))?;
            events.push(RouterEvent::Stored { inbox, id: msg.id });
        }
        self.next_id += 1;

        let mut flash_task = None;
        if decision.flash {
            let id = sched.spawn(
                flash_task_name(msg.id),
                self.config.flash_priority,
                self.config.flash_ticks,
            )?;
            flash_task = Some(id);
            events.push(RouterEvent::Flashed {
                id: msg.id,
                display_text: msg.display_text.clone(),
            });
        }

        Ok(Receipt {
            message: msg,
            level,
            flash_task,
            events,
        })
    }
}
