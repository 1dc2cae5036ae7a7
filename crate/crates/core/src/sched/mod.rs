//! Fixed-priority pre-emptive scheduler over a tick clock.
//!
//! A task whose priority value is strictly smaller than the running task's
//! interrupts it. The interrupted task goes back to the head of its own level
//! and resumes once nothing more urgent is ready. Equal priorities never
//! pre-empt each other, and there is no time slicing within a level.

mod runqueue;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

pub use runqueue::RunQueue;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SchedError {
    #[error("task priority {0} outside 0..=139")]
    PriorityOutOfRange(u32),
    #[error("task duration must be at least one tick")]
    ZeroDuration,
    #[error("task id {0} already known to the scheduler")]
    DuplicateTaskId(TaskId),
    #[error("task {0} is already queued")]
    AlreadyQueued(TaskId),
    #[error("task {0} must be Ready to be enqueued")]
    NotReady(TaskId),
}

/// Priority value in `0..=139`; lower is more urgent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TaskPriority(u8);

impl TaskPriority {
    pub const LEVELS: usize = 140;
    pub const MOST_URGENT: TaskPriority = TaskPriority(0);
    pub const LEAST_URGENT: TaskPriority = TaskPriority(139);

    pub fn new(value: u32) -> Result<Self, SchedError> {
        if value as usize >= Self::LEVELS {
            return Err(SchedError::PriorityOutOfRange(value));
        }
        Ok(TaskPriority(value as u8))
    }

    pub fn value(self) -> u8 {
        self.0
    }

    pub(crate) fn index(self) -> usize {
        self.0 as usize
    }

    pub(crate) fn from_index(i: usize) -> Self {
        debug_assert!(i < Self::LEVELS);
        TaskPriority(i as u8)
    }

    /// True when `self` would pre-empt a task running at `other`.
    pub fn preempts(self, other: TaskPriority) -> bool {
        self.0 < other.0
    }
}

impl fmt::Display for TaskPriority {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TaskId(pub u64);

impl fmt::Display for TaskId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TaskState {
    Ready,
    Running,
    /// Pre-empted while running; keeps its remaining ticks.
    Suspended,
    Done,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Task {
    pub id: TaskId,
    pub name: String,
    pub priority: TaskPriority,
    pub duration: u64,
    pub remaining: u64,
    pub state: TaskState,
}

impl Task {
    pub fn new(
        id: TaskId,
        name: impl Into<String>,
        priority: TaskPriority,
        duration: u64,
    ) -> Result<Self, SchedError> {
        if duration == 0 {
            return Err(SchedError::ZeroDuration);
        }
        Ok(Task {
            id,
            name: name.into(),
            priority,
            duration,
            remaining: duration,
            state: TaskState::Ready,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchedEventKind {
    Dispatch,
    Preempt { by: TaskId },
    Resume,
    Done,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SchedEvent {
    pub tick: u64,
    pub kind: SchedEventKind,
    pub subject: TaskId,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Scheduler {
    clock: u64,
    running: Option<TaskId>,
    queue: RunQueue,
    tasks: BTreeMap<TaskId, Task>,
    events: Vec<SchedEvent>,
}

impl Scheduler {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn clock(&self) -> u64 {
        self.clock
    }

    pub fn running(&self) -> Option<&Task> {
        self.running.map(|id| &self.tasks[&id])
    }

    pub fn is_idle(&self) -> bool {
        self.running.is_none() && self.queue.is_empty()
    }

    pub fn queue(&self) -> &RunQueue {
        &self.queue
    }

    pub fn task(&self, id: TaskId) -> Option<&Task> {
        self.tasks.get(&id)
    }

    pub fn tasks(&self) -> impl Iterator<Item = &Task> {
        self.tasks.values()
    }

    pub fn events(&self) -> &[SchedEvent] {
        &self.events
    }

    /// Next id not yet used by any known task.
    pub fn next_task_id(&self) -> TaskId {
        TaskId(self.tasks.keys().next_back().map_or(1, |id| id.0 + 1))
    }

    /// Create a task with a fresh id and enqueue it.
    pub fn spawn(
        &mut self,
        name: impl Into<String>,
        priority: TaskPriority,
        duration: u64,
    ) -> Result<TaskId, SchedError> {
        let task = Task::new(self.next_task_id(), name, priority, duration)?;
        let id = task.id;
        self.enqueue_task(task)?;
        Ok(id)
    }

    /// Append a Ready task to the tail of its level, then pre-empt if it is
    /// more urgent than whatever is running.
    pub fn enqueue_task(&mut self, task: Task) -> Result<(), SchedError> {
        if self.tasks.contains_key(&task.id) {
            return Err(SchedError::DuplicateTaskId(task.id));
        }
        if task.state != TaskState::Ready || task.remaining != task.duration {
            return Err(SchedError::NotReady(task.id));
        }
        self.queue.push_back(task.priority, task.id)?;
        self.tasks.insert(task.id, task);
        self.preempt_check();
        Ok(())
    }

    /// Dispatch the head of the run queue if nothing is running, or if it is
    /// strictly more urgent than the running task. At most one switch.
    pub fn preempt_check(&mut self) {
        let Some((head_prio, _)) = self.queue.peek() else {
            return;
        };
        if let Some(current) = self.running {
            let current_prio = self.tasks[&current].priority;
            if !head_prio.preempts(current_prio) {
                return;
            }
            let (_, next) = self.queue.pop_next().expect("peeked");
            let task = self.tasks.get_mut(&current).expect("running task known");
            task.state = TaskState::Suspended;
            self.queue
                .push_front(current_prio, current)
                .expect("running task is never queued");
            self.events.push(SchedEvent {
                tick: self.clock,
                kind: SchedEventKind::Preempt { by: next },
                subject: current,
            });
            self.dispatch(next);
        } else {
            let (_, next) = self.queue.pop_next().expect("peeked");
            self.dispatch(next);
        }
    }

    fn dispatch(&mut self, id: TaskId) {
        let task = self.tasks.get_mut(&id).expect("queued task known");
        let kind = match task.state {
            TaskState::Suspended => SchedEventKind::Resume,
            _ => SchedEventKind::Dispatch,
        };
        task.state = TaskState::Running;
        self.running = Some(id);
        self.events.push(SchedEvent {
            tick: self.clock,
            kind,
            subject: id,
        });
    }

    /// Advance the clock by `ticks` single-tick iterations.
    pub fn step(&mut self, ticks: u64) {
        for _ in 0..ticks {
            self.tick();
        }
    }

    fn tick(&mut self) {
        self.clock += 1;
        let Some(id) = self.running else {
            return;
        };
        let task = self.tasks.get_mut(&id).expect("running task known");
        task.remaining -= 1;
        if task.remaining == 0 {
            task.state = TaskState::Done;
            self.running = None;
            self.events.push(SchedEvent {
                tick: self.clock,
                kind: SchedEventKind::Done,
                subject: id,
            });
            self.preempt_check();
        }
    }

    /// Step forward until the clock reads `tick`. Does nothing if the clock
    /// is already there or past it.
    pub fn advance_to(&mut self, tick: u64) {
        if tick > self.clock {
            self.step(tick - self.clock);
        }
    }

    /// Step until nothing is running or queued. Returns the ticks taken.
    pub fn drain(&mut self) -> u64 {
        let start = self.clock;
        while !self.is_idle() {
            // Jump straight to the running task's completion; nothing can
            // arrive in between.
            let remaining = self.running().map_or(1, |t| t.remaining);
            self.step(remaining);
        }
        self.clock - start
    }

    /// No Ready or Suspended task is strictly more urgent than the running one.
    pub fn no_pending_preemption(&self) -> bool {
        match (self.running(), self.queue.peek()) {
            (None, Some(_)) => false,
            (Some(run), Some((head, _))) => !head.preempts(run.priority),
            _ => true,
        }
    }
}
