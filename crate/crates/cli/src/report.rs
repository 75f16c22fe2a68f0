//! Command results, printable as text or JSON.
//!
//! JSON schema (stable):
//!
//! ```text
//! {
//!   "command":      "decompose" | "good-pair",
//!   "status":       "decomposed" | "pair" | "exception" | "no-pair"
//!                   | "invalid" | "violated-precondition" | "internal-error",
//!   "payload":      object, depends on status (see `Payload`),
//!   "verification": "pass" | "fail" | "not-run",
//!   "timing_ms":    number, omitted under --no-timing
//! }
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Decomposed,
    Pair,
    Exception,
    NoPair,
    Invalid,
    ViolatedPrecondition,
    InternalError,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Decomposed | Status::Pair => 0,
            Status::Exception | Status::NoPair => 1,
            Status::Invalid | Status::ViolatedPrecondition => 2,
            Status::InternalError => 3,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Decomposed => "decomposed",
            Status::Pair => "pair",
            Status::Exception => "exception",
            Status::NoPair => "no-pair",
            Status::Invalid => "invalid",
            Status::ViolatedPrecondition => "violated-precondition",
            Status::InternalError => "internal-error",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verification {
    Pass,
    Fail,
    NotRun,
}

pub type NamedArc = (String, String);

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Payload {
    Decomposition {
        a1: Vec<NamedArc>,
        a2: Vec<NamedArc>,
        /// How the decomposition was found.
        route: String,
    },
    /// `witness[c]` is the input vertex playing catalog vertex `c`.
    Exception {
        exception: String,
        witness: BTreeMap<String, String>,
    },
    /// Parent maps: for the out-branching the parent is the predecessor on
    /// the path from the root; for the in-branching, the successor towards it.
    Pair {
        root_out: String,
        root_in: String,
        out_parent: BTreeMap<String, String>,
        in_parent: BTreeMap<String, String>,
        route: String,
    },
    NoPair {
        root_out: String,
        root_in: String,
        route: String,
    },
    Error {
        error: String,
        #[serde(skip_serializing_if = "Option::is_none")]
        line: Option<usize>,
    },
    Empty {},
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub command: &'static str,
    pub status: Status,
    pub payload: Payload,
    pub verification: Verification,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

impl Report {
    pub fn error(command: &'static str, status: Status, error: String, line: Option<usize>) -> Self {
        Report {
            command,
            status,
            payload: Payload::Error { error, line },
            verification: Verification::NotRun,
            timing_ms: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("status: {}\n", self.status.as_str());
        let arcs = |list: &[NamedArc]| list.iter().map(|(t, h)| format!(" {t}->{h}")).collect::<String>();
        let map = |m: &BTreeMap<String, String>| m.iter().map(|(k, v)| format!(" {k}:{v}")).collect::<String>();
        match &self.payload {
            Payload::Decomposition { a1, a2, route } => {
                let _ = writeln!(out, "route: {route}");
                let _ = writeln!(out, "A1:{}", arcs(a1));
                let _ = writeln!(out, "A2:{}", arcs(a2));
            }
            Payload::Exception { exception, witness } => {
                let _ = writeln!(out, "exception: {exception}");
                let _ = writeln!(out, "witness:{}", map(witness));
            }
            Payload::Pair { root_out, root_in, out_parent, in_parent, route } => {
                let _ = writeln!(out, "route: {route}");
                let _ = writeln!(out, "out-branching at {root_out}, parents:{}", map(out_parent));
                let _ = writeln!(out, "in-branching at {root_in}, parents:{}", map(in_parent));
            }
            Payload::NoPair { root_out, root_in, route } => {
                let _ = writeln!(out, "no good ({root_out}, {root_in})-pair ({route})");
            }
            Payload::Error { error, line } => match line {
                Some(l) => {
                    let _ = writeln!(out, "error: line {l}: {error}");
                }
                None => {
                    let _ = writeln!(out, "error: {error}");
                }
            },
            Payload::Empty {} => {}
        }
        let verification = match self.verification {
            Verification::Pass => "pass",
            Verification::Fail => "fail",
            Verification::NotRun => "not-run",
        };
        let _ = writeln!(out, "verification: {verification}");
        if let Some(ms) = self.timing_ms {
            let _ = writeln!(out, "time: {ms:.3} ms");
        }
        out
    }
}
