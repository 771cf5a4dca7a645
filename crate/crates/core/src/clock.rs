//! Time source for provenance and audit records. Replayable runs pin it.

use chrono::{DateTime, Utc};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Clock {
    #[default]
    System,
    Fixed(DateTime<Utc>),
}

impl Clock {
    pub fn now(&self) -> DateTime<Utc> {
        match self {
            Clock::System => Utc::now(),
            Clock::Fixed(t) => *t,
        }
    }

    /// Parses an RFC 3339 instant into a fixed clock.
    pub fn fixed(rfc3339: &str) -> Result<Self, chrono::ParseError> {
        Ok(Clock::Fixed(DateTime::parse_from_rfc3339(rfc3339)?.with_timezone(&Utc)))
    }
}
