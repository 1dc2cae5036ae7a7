use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use preempt_inbox::sim::{SimError, ViewItem};
use preempt_inbox::{ContactAddress, InboxName, InboxStore, PriorityLevel, PriorityRegistry};

#[derive(Parser)]
#[command(name = "preempt-inbox", version, about = "Priority SMS dispatch simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Replay a scenario trace and print the event report.
    Simulate {
        trace: PathBuf,
        /// Write the final inboxes here (JSON Lines).
        #[arg(long)]
        store: Option<PathBuf>,
        /// Write the final contact priorities here.
        #[arg(long)]
        registry: Option<PathBuf>,
        /// Write the report here instead of standard output.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Edit or list contact priorities.
    Priority {
        #[command(subcommand)]
        command: PriorityCommand,
    },
    /// Browse a saved inbox file.
    Inbox {
        #[command(subcommand)]
        command: InboxCommand,
    },
}

#[derive(Subcommand)]
enum PriorityCommand {
    Set {
        addr: String,
        level: Level,
        #[arg(long)]
        registry: PathBuf,
    },
    List {
        #[arg(long)]
        registry: PathBuf,
    },
}

#[derive(Subcommand)]
enum InboxCommand {
    /// List messages whose sender contains the filter text.
    View {
        #[arg(value_name = "BOX")]
        inbox: Box_,
        #[arg(long, default_value = "")]
        filter: String,
        #[arg(long)]
        store: PathBuf,
    },
    /// Print the display text of the message at a list position.
    Read {
        #[arg(value_name = "BOX")]
        inbox: Box_,
        index: usize,
        #[arg(long)]
        store: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Level {
    High,
    Default,
}

impl From<Level> for PriorityLevel {
    fn from(l: Level) -> Self {
        match l {
            Level::High => PriorityLevel::High,
            Level::Default => PriorityLevel::Default,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
#[allow(non_camel_case_types)]
enum Box_ {
    Default,
    Priority,
}

impl From<Box_> for InboxName {
    fn from(b: Box_) -> Self {
        match b {
            Box_::Default => InboxName::Default,
            Box_::Priority => InboxName::Priority,
        }
    }
}

/// Exit status classes.
enum Failure {
    Parse(String),
    Runtime(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Parse(_) => 1,
            Failure::Runtime(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Parse(m) | Failure::Runtime(m) => m,
        }
    }
}

fn runtime(e: impl std::fmt::Display) -> Failure {
    Failure::Runtime(e.to_string())
}

fn parse(e: impl std::fmt::Display) -> Failure {
    Failure::Parse(e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("preempt-inbox: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Simulate {
            trace,
            store,
            registry,
            report,
        } => {
            let text = fs::read_to_string(&trace)
                .map_err(|e| runtime(format!("{}: {e}", trace.display())))?;
            let outcome = preempt_inbox::simulate(&text).map_err(|e| match e {
                SimError::Parse(p) => parse(format!("{}: {p}", trace.display())),
                other => runtime(format!("{}: {other}", trace.display())),
            })?;
            if let Some(path) = store {
                write_file(&path, |w| outcome.store.save(w).map_err(runtime))?;
            }
            if let Some(path) = registry {
                write_file(&path, |w| outcome.registry.save(w).map_err(runtime))?;
            }
            match report {
                Some(path) => write_file(&path, |w| outcome.report.write_to(w).map_err(runtime)),
                None => outcome.report.write_to(io::stdout().lock()).map_err(runtime),
            }
        }
        Command::Priority { command } => match command {
            PriorityCommand::Set {
                addr,
                level,
                registry,
            } => {
                let addr = ContactAddress::new(addr).map_err(parse)?;
                let mut reg = if registry.exists() {
                    load_registry(&registry)?
                } else {
                    PriorityRegistry::new()
                };
                reg.set_priority(&addr, level.into());
                write_file(&registry, |w| reg.save(w).map_err(runtime))
            }
            PriorityCommand::List { registry } => {
                let reg = load_registry(&registry)?;
                let mut out = io::stdout().lock();
                for addr in reg.high_contacts() {
                    writeln!(out, "{addr}").map_err(runtime)?;
                }
                Ok(())
            }
        },
        Command::Inbox { command } => match command {
            InboxCommand::View {
                inbox,
                filter,
                store,
            } => {
                let store = load_store(&store)?;
                let inbox = InboxName::from(inbox);
                let hits = store.view_messages(inbox, &filter);
                let mut out = io::stdout().lock();
                writeln!(out, "VIEW {inbox} {}", hits.len()).map_err(runtime)?;
                for m in hits {
                    let item = ViewItem {
                        id: m.id,
                        origin: m.origin.clone(),
                        display_text: m.display_text.clone(),
                    };
                    writeln!(out, "{item}").map_err(runtime)?;
                }
                Ok(())
            }
            InboxCommand::Read {
                inbox,
                index,
                store,
            } => {
                let store = load_store(&store)?;
                let text = store.read_message(inbox.into(), index).map_err(runtime)?;
                println!("{text}");
                Ok(())
            }
        },
    }
}

fn load_registry(path: &Path) -> Result<PriorityRegistry, Failure> {
    let file = File::open(path).map_err(|e| runtime(format!("{}: {e}", path.display())))?;
    PriorityRegistry::load(BufReader::new(file)).map_err(|e| match e {
        preempt_inbox::RegistryError::Io(io) => runtime(format!("{}: {io}", path.display())),
        other => parse(format!("{}: {other}", path.display())),
    })
}

fn load_store(path: &Path) -> Result<InboxStore, Failure> {
    let file = File::open(path).map_err(|e| runtime(format!("{}: {e}", path.display())))?;
    InboxStore::load(BufReader::new(file)).map_err(|e| match e {
        preempt_inbox::StoreError::Io(io) => runtime(format!("{}: {io}", path.display())),
        other => parse(format!("{}: {other}", path.display())),
    })
}

fn write_file<F>(path: &Path, body: F) -> Result<(), Failure>
where
    F: FnOnce(&mut BufWriter<File>) -> Result<(), Failure>,
{
    let file = File::create(path).map_err(|e| runtime(format!("{}: {e}", path.display())))?;
    let mut w = BufWriter::new(file);
    body(&mut w)?;
    w.flush().map_err(runtime)
}
