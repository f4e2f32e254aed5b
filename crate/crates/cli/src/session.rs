//! Session state: ring context, named bindings, and command history,
//! persisted as a `.dds.json` file.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::lower::{parse_rational, Context, LowerError};

#[derive(Debug)]
pub enum SessionError {
    Io(std::io::Error),
    Format(String),
    UnknownBinding(String),
    TypeCheck(String),
}

impl fmt::Display for SessionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SessionError::Io(e) => write!(f, "session i/o: {e}"),
            SessionError::Format(e) => write!(f, "session format: {e}"),
            SessionError::UnknownBinding(n) => write!(f, "unknown binding @{n}"),
            SessionError::TypeCheck(e) => write!(f, "binding rejected: {e}"),
        }
    }
}

impl std::error::Error for SessionError {}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ContextSpec {
    pub vars: usize,
    pub derivations: usize,
    pub base_vars: usize,
    /// exact rationals as strings
    pub shift: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BindingKind {
    Poly,
    Scalar,
    Point,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Binding {
    pub kind: BindingKind,
    pub text: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SessionFile {
    pub context: ContextSpec,
    pub bindings: BTreeMap<String, Binding>,
    pub history: Vec<String>,
}

/// A live session: the context plus its persistent file, when any.
pub struct Session {
    pub context: Context,
    pub file: SessionFile,
    path: Option<PathBuf>,
}

impl Session {
    pub fn ephemeral(context: Context) -> Session {
        let spec = ContextSpec {
            vars: context.vars,
            derivations: context.derivations,
            base_vars: context.base_vars,
            shift: context.shift_offsets.iter().map(|c| c.to_string()).collect(),
        };
        Session {
            context,
            file: SessionFile {
                context: spec,
                bindings: BTreeMap::new(),
                history: Vec::new(),
            },
            path: None,
        }
    }

    /// Load from a `.dds.json` file, or start one with the given context
    /// when the file does not exist yet.
    pub fn open(path: &Path, fallback: Context) -> Result<Session, SessionError> {
        if !path.exists() {
            let mut s = Session::ephemeral(fallback);
            s.path = Some(path.to_path_buf());
            return Ok(s);
        }
        let data = std::fs::read_to_string(path).map_err(SessionError::Io)?;
        let file: SessionFile =
            serde_json::from_str(&data).map_err(|e| SessionError::Format(e.to_string()))?;
        let offsets = file
            .context
            .shift
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>, LowerError>>()
            .map_err(|e| SessionError::Format(e.to_string()))?;
        let context = Context::new(
            file.context.vars,
            file.context.derivations,
            file.context.base_vars,
            offsets,
        )
        .map_err(|e| SessionError::Format(e.to_string()))?;
        Ok(Session {
            context,
            file,
            path: Some(path.to_path_buf()),
        })
    }

    pub fn record(&mut self, line: String) {
        self.file.history.push(line);
    }

    /// Insert a binding; the text must type-check against the context.
    pub fn bind(&mut self, name: &str, kind: BindingKind, text: &str) -> Result<(), SessionError> {
        let check = match kind {
            BindingKind::Poly => self.context.parse_poly(text).map(|_| ()),
            BindingKind::Scalar => self.context.parse_scalar(text).map(|_| ()),
            BindingKind::Point => self.context.parse_point(text).map(|_| ()),
        };
        check.map_err(|e| SessionError::TypeCheck(e.to_string()))?;
        self.file.bindings.insert(
            name.to_string(),
            Binding {
                kind,
                text: text.to_string(),
            },
        );
        Ok(())
    }

    /// `@name` arguments resolve to their bound text; everything else
    /// passes through.
    pub fn resolve<'a>(&'a self, arg: &'a str) -> Result<&'a str, SessionError> {
        match arg.strip_prefix('@') {
            Some(name) => self
                .file
                .bindings
                .get(name)
                .map(|b| b.text.as_str())
                .ok_or_else(|| SessionError::UnknownBinding(name.to_string())),
            None => Ok(arg),
        }
    }

    pub fn save(&self) -> Result<(), SessionError> {
        if let Some(path) = &self.path {
            let data = serde_json::to_string_pretty(&self.file)
                .map_err(|e| SessionError::Format(e.to_string()))?;
            std::fs::write(path, data).map_err(SessionError::Io)?;
        }
        Ok(())
    }
}
