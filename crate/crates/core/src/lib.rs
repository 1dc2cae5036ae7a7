//! Priority-message dispatch engine.
//!
//! Contacts are either High or Default priority. A message from a High
//! contact is stored in both the Priority and the Default inbox and is
//! flashed by a task that pre-empts whatever is running; anything else goes
//! quietly to the Default inbox. Tasks run on a 140-level fixed-priority
//! scheduler whose ready queue selects the next task in constant time.
//!
//! [`sim`] replays scenario traces against all of it and produces a
//! byte-stable report.

pub mod registry;
pub mod router;
pub mod sched;
pub mod sim;
pub mod store;

pub use registry::{ContactAddress, PriorityLevel, PriorityRegistry, RegistryError};
pub use router::{
    classify, decode_receive, route, DecodedMessage, MessagePart, MessageRouter, RawReceiveEvent,
    Receipt, RouteDecision, RouterConfig, RouterError, RouterEvent,
};
pub use sched::{
    RunQueue, SchedError, SchedEvent, SchedEventKind, Scheduler, Task, TaskId, TaskPriority,
    TaskState,
};
pub use sim::{parse_trace, run_trace, simulate, SimError, SimOutcome, SimReport, Simulator, Trace};
pub use store::{InboxName, InboxStore, StoreError, StoredMessage};
