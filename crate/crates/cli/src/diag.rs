use std::fmt;

use serde_json::json;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiagKind {
    Syntax,
    Type,
    Name,
    Domain,
    ZeroBranchDivisor,
    Limit,
}

impl DiagKind {
    pub fn name(self) -> &'static str {
        match self {
            DiagKind::Syntax => "syntax error",
            DiagKind::Type => "type error",
            DiagKind::Name => "name error",
            DiagKind::Domain => "domain violation",
            DiagKind::ZeroBranchDivisor => "zero-branch divisor",
            DiagKind::Limit => "limit exceeded",
        }
    }
}

/// 1-based line and column.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub kind: DiagKind,
    pub pos: Pos,
    pub message: String,
    /// Token classes that would have been accepted, for syntax errors.
    pub expected: Vec<String>,
}

impl Diagnostic {
    pub fn new(kind: DiagKind, pos: Pos, message: impl Into<String>) -> Self {
        Self { kind, pos, message: message.into(), expected: Vec::new() }
    }

    pub fn syntax(pos: Pos, message: impl Into<String>, expected: &[&str]) -> Self {
        Self {
            kind: DiagKind::Syntax,
            pos,
            message: message.into(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    /// Maps a library error raised while evaluating the node at `pos`.
    pub fn from_error(e: vext::Error, pos: Pos) -> Self {
        use vext::Error::*;
        let kind = match &e {
            ZeroBranchDivisor { .. } | ZeroDenominator => DiagKind::ZeroBranchDivisor,
            DomainViolation(_) => DiagKind::Domain,
            PeriodLimitExceeded { .. } | DegreeLimitExceeded { .. } | SizeLimit { .. } => DiagKind::Limit,
            UnknownName(_) => DiagKind::Name,
            _ => DiagKind::Type,
        };
        Self::new(kind, pos, e.to_string())
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "kind": "error",
            "error": self.kind.name(),
            "line": self.pos.line,
            "column": self.pos.column,
            "message": self.message,
            "expected": self.expected,
        })
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {}:{}: {}", self.kind.name(), self.pos.line, self.pos.column, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(", "))?;
        }
        Ok(())
    }
}
