use std::fmt;

use serde::{Deserialize, Serialize};

/// Three-valued answer of a decider: `Unknown` is the "I don't know" (⊥) option.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Verdict {
    Reject,
    Accept,
    Unknown,
}

impl Verdict {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Verdict::Accept
        } else {
            Verdict::Reject
        }
    }

    pub fn as_bool(self) -> Option<bool> {
        match self {
            Verdict::Reject => Some(false),
            Verdict::Accept => Some(true),
            Verdict::Unknown => None,
        }
    }

    pub fn is_known(self) -> bool {
        self != Verdict::Unknown
    }

    /// True when the answer is ⊥ or agrees with `truth`.
    pub fn consistent_with(self, truth: bool) -> bool {
        match self.as_bool() {
            None => true,
            Some(b) => b == truth,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Reject => "0",
            Verdict::Accept => "1",
            Verdict::Unknown => "⊥",
        })
    }
}
