use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Identifier of an ontology entity or individual.
///
/// Either a local name starting with `#` (`#software-system`) or a
/// scheme-prefixed identifier (`http://example.org/onto#thing`). Equality is
/// exact text equality; ordering is lexicographic by text, which is what every
/// report uses for deterministic output.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Iri(String);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IriError {
    #[error("empty IRI")]
    Empty,
    #[error("IRI `{0}` contains whitespace")]
    Whitespace(String),
    #[error("IRI `{0}` is neither a `#` local name nor scheme-prefixed")]
    NoScheme(String),
}

impl Iri {
    pub fn new(value: impl Into<String>) -> Result<Self, IriError> {
        let value = value.into();
        if value.is_empty() {
            return Err(IriError::Empty);
        }
        if value.chars().any(char::is_whitespace) {
            return Err(IriError::Whitespace(value));
        }
        if value.starts_with('#') {
            if value.len() == 1 {
                return Err(IriError::Empty);
            }
            return Ok(Iri(value));
        }
        match value.find(':') {
            Some(pos) if pos > 0 && is_scheme(&value[..pos]) => Ok(Iri(value)),
            _ => Err(IriError::NoScheme(value)),
        }
    }

    /// Builds a local `#name` IRI. Panics on invalid names; meant for
    /// compile-time constants such as the kernel vocabulary.
    pub fn local(name: &str) -> Self {
        Iri::new(format!("#{name}")).expect("valid local IRI name")
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Text after the last `#` or `/`, used to derive fresh names.
    pub fn local_name(&self) -> &str {
        let cut = self.0.rfind(['#', '/']).map(|p| p + 1).unwrap_or(0);
        &self.0[cut..]
    }
}

fn is_scheme(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.'))
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.0)
    }
}

impl FromStr for Iri {
    type Err = IriError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Iri::new(s)
    }
}

impl AsRef<str> for Iri {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

impl Serialize for Iri {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Iri {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Iri::new(s).map_err(serde::de::Error::custom)
    }
}
