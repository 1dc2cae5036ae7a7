//! Trace-driven simulator.
//!
//! Before each trace event the scheduler clock is stepped forward to the
//! event's tick; events sharing a tick apply in file order. An event whose
//! tick the clock has already passed (after an `ADVANCE`) applies at the
//! current clock. After the last event the scheduler runs until idle.

mod report;
mod trace;

use thiserror::Error;

pub use report::{ReportEntry, SimReport, ViewItem, REPORT_HEADER};
pub use trace::{parse_trace, Action, ScenarioEvent, Trace, TraceError};

use crate::registry::PriorityRegistry;
use crate::router::{MessageRouter, RawReceiveEvent, RouterConfig, RouterError, RouterEvent};
use crate::sched::{SchedError, SchedEventKind, Scheduler};
use crate::store::InboxStore;

#[derive(Debug, Error)]
pub enum SimError {
    #[error(transparent)]
    Parse(#[from] TraceError),
    #[error("trace line {line}: {source}")]
    Runtime {
        line: usize,
        #[source]
        source: RuntimeError,
    },
}

#[derive(Debug, Error)]
pub enum RuntimeError {
    #[error(transparent)]
    Router(#[from] RouterError),
    #[error(transparent)]
    Sched(#[from] SchedError),
}

/// Final state of a simulation run.
#[derive(Debug, Clone)]
pub struct SimOutcome {
    pub report: SimReport,
    pub registry: PriorityRegistry,
    pub store: InboxStore,
    pub scheduler: Scheduler,
}

#[derive(Debug, Clone, Default)]
pub struct Simulator {
    registry: PriorityRegistry,
    store: InboxStore,
    scheduler: Scheduler,
    router: MessageRouter,
    entries: Vec<ReportEntry>,
    // scheduler events already copied into `entries`
    reported: usize,
}

impl Simulator {
    pub fn new(config: RouterConfig) -> Self {
        Simulator {
            router: MessageRouter::new(config),
            ..Default::default()
        }
    }

    pub fn registry(&self) -> &PriorityRegistry {
        &self.registry
    }

    pub fn store(&self) -> &InboxStore {
        &self.store
    }

    pub fn scheduler(&self) -> &Scheduler {
        &self.scheduler
    }

    pub fn entries(&self) -> &[ReportEntry] {
        &self.entries
    }

    pub fn apply(&mut self, event: &ScenarioEvent) -> Result<(), RuntimeError> {
        self.scheduler.advance_to(event.tick);
        self.flush_sched();
        let now = self.scheduler.clock();
        match &event.action {
            Action::SetPrio { addr, level } => self.registry.set_priority(addr, *level),
            Action::TaskStart {
                name,
                priority,
                duration,
            } => {
                self.scheduler.spawn(name.clone(), *priority, *duration)?;
                self.flush_sched();
            }
            Action::Sms { origin, body } => {
                let raw = RawReceiveEvent::single(now, origin.clone(), body.clone());
                let receipt =
                    self.router
                        .on_receive(&raw, &self.registry, &mut self.scheduler, &mut self.store)?;
                let mut flashed = None;
                for ev in receipt.events {
                    match ev {
                        RouterEvent::Stored { inbox, id } => {
                            self.entries.push(ReportEntry::Store { tick: now, inbox, id })
                        }
                        RouterEvent::Flashed { display_text, .. } => flashed = Some(display_text),
                    }
                }
                // the flash enqueue may have pre-empted; those lines come first
                self.flush_sched();
                if let Some(display_text) = flashed {
                    self.entries.push(ReportEntry::Flash { tick: now, display_text });
                }
            }
            Action::View { inbox, filter } => {
                let items = self
                    .store
                    .view_messages(*inbox, filter)
                    .into_iter()
                    .map(|m| ViewItem {
                        id: m.id,
                        origin: m.origin.clone(),
                        display_text: m.display_text.clone(),
                    })
                    .collect();
                self.entries.push(ReportEntry::View {
                    tick: now,
                    inbox: *inbox,
                    items,
                });
            }
            Action::Advance { ticks } => {
                self.scheduler.step(*ticks);
                self.flush_sched();
            }
        }
        Ok(())
    }

    /// Run every remaining task to completion.
    pub fn drain(&mut self) {
        self.scheduler.drain();
        self.flush_sched();
    }

    pub fn run(mut self, trace: &Trace) -> Result<SimOutcome, SimError> {
        for event in &trace.events {
            self.apply(event).map_err(|source| SimError::Runtime {
                line: event.line,
                source,
            })?;
        }
        self.drain();
        Ok(self.finish())
    }

    pub fn finish(self) -> SimOutcome {
        SimOutcome {
            report: SimReport {
                entries: self.entries,
            },
            registry: self.registry,
            store: self.store,
            scheduler: self.scheduler,
        }
    }

    fn flush_sched(&mut self) {
        let name = |s: &Scheduler, id| s.task(id).expect("logged task known").name.clone();
        for ev in &self.scheduler.events()[self.reported..] {
            let task = name(&self.scheduler, ev.subject);
            let tick = ev.tick;
            self.entries.push(match ev.kind {
                SchedEventKind::Dispatch => ReportEntry::Dispatch { tick, task },
                SchedEventKind::Preempt { by } => ReportEntry::Preempt {
                    tick,
                    task,
                    by: name(&self.scheduler, by),
                },
                SchedEventKind::Resume => ReportEntry::Resume { tick, task },
                SchedEventKind::Done => ReportEntry::Done { tick, task },
            });
        }
        self.reported = self.scheduler.events().len();
    }
}

/// Run a parsed trace from empty state with the default router settings.
pub fn run_trace(trace: &Trace) -> Result<SimOutcome, SimError> {
    Simulator::default().run(trace)
}

/// Parse and run trace text.
pub fn simulate(source: &str) -> Result<SimOutcome, SimError> {
    let trace = parse_trace(source)?;
    run_trace(&trace)
}
