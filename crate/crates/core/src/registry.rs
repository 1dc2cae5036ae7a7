//! Contact priority registry.
//!
//! Only High contacts are stored; any address not present is Default. The
//! on-disk form is one `<address>\tHIGH` line per contact, sorted by address.

use std::collections::BTreeSet;
use std::fmt;
use std::io::{self, BufRead, Write};
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum RegistryError {
    #[error("invalid contact address {0:?}: expected one or more decimal digits")]
    InvalidAddress(String),
    #[error("only High contacts can be enumerated")]
    UnsupportedLevel,
    #[error("registry line {line}: {reason} ({text:?})")]
    Parse {
        line: usize,
        text: String,
        reason: String,
    },
    #[error("registry i/o: {0}")]
    Io(#[from] io::Error),
}

/// A phone-number style sender address: nonempty, ASCII digits only.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ContactAddress(String);

impl ContactAddress {
    pub fn new(digits: impl Into<String>) -> Result<Self, RegistryError> {
        let digits = digits.into();
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(RegistryError::InvalidAddress(digits));
        }
        Ok(ContactAddress(digits))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl FromStr for ContactAddress {
    type Err = RegistryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ContactAddress::new(s)
    }
}

impl fmt::Display for ContactAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for ContactAddress {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

/// Sender priority. `High > Default`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PriorityLevel {
    Default,
    High,
}

impl PriorityLevel {
    pub fn as_str(self) -> &'static str {
        match self {
            PriorityLevel::Default => "DEFAULT",
            PriorityLevel::High => "HIGH",
        }
    }
}

impl fmt::Display for PriorityLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PriorityLevel {
    type Err = String;

    /// Case-insensitive `high` / `default`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("high") {
            Ok(PriorityLevel::High)
        } else if s.eq_ignore_ascii_case("default") {
            Ok(PriorityLevel::Default)
        } else {
            Err(format!("unknown priority level {s:?}"))
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PriorityRegistry {
    high: BTreeSet<ContactAddress>,
}

impl PriorityRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Setting Default removes the entry, so the registry never holds a
    /// Default mapping.
    pub fn set_priority(&mut self, addr: &ContactAddress, level: PriorityLevel) {
        match level {
            PriorityLevel::High => {
                self.high.insert(addr.clone());
            }
            PriorityLevel::Default => {
                self.high.remove(addr);
            }
        }
    }

    /// Owned variant of [`set_priority`](Self::set_priority).
    pub fn with_priority(mut self, addr: &ContactAddress, level: PriorityLevel) -> Self {
        self.set_priority(addr, level);
        self
    }

    /// Exact match on the full address.
    pub fn get_priority(&self, addr: &ContactAddress) -> PriorityLevel {
        if self.high.contains(addr) {
            PriorityLevel::High
        } else {
            PriorityLevel::Default
        }
    }

    pub fn list_by_level(&self, level: PriorityLevel) -> Result<Vec<ContactAddress>, RegistryError> {
        match level {
            PriorityLevel::High => Ok(self.high.iter().cloned().collect()),
            PriorityLevel::Default => Err(RegistryError::UnsupportedLevel),
        }
    }

    pub fn high_contacts(&self) -> impl Iterator<Item = &ContactAddress> {
        self.high.iter()
    }

    pub fn len(&self) -> usize {
        self.high.len()
    }

    pub fn is_empty(&self) -> bool {
        self.high.is_empty()
    }

    pub fn save<W: Write>(&self, mut sink: W) -> Result<(), RegistryError> {
        for addr in &self.high {
            writeln!(sink, "{addr}\tHIGH")?;
        }
        sink.flush()?;
        Ok(())
    }

    pub fn load<R: BufRead>(source: R) -> Result<Self, RegistryError> {
        let mut reg = PriorityRegistry::new();
        for (idx, line) in source.lines().enumerate() {
            let line = line?;
            let lineno = idx + 1;
            let parse_err = |reason: &str| RegistryError::Parse {
                line: lineno,
                text: line.clone(),
                reason: reason.to_string(),
            };
            let (addr, level) = line
                .split_once('\t')
                .ok_or_else(|| parse_err("expected <address>\\tHIGH"))?;
            if level != "HIGH" {
                return Err(parse_err("unknown level token"));
            }
            let addr = ContactAddress::new(addr).map_err(|_| parse_err("invalid address"))?;
            if !reg.high.insert(addr) {
                return Err(parse_err("duplicate address"));
            }
        }
        Ok(reg)
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        self.save(&mut out).expect("writing to a Vec cannot fail");
        out
    }
}
