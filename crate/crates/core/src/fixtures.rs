//! Golden-file manifest checking.
//!
//! A fixture directory holds a `manifest.toml`:
//!
//! ```toml
//! [[fixture]]
//! path = "fulfills-fragment.owx"
//! description = "fulfills property axioms"
//! origin = "published"          # or "derived"
//! sha256 = "…"
//! invalid = false               # true for files that must fail to parse
//! ```
//!
//! [`verify_fixtures`] checks that each listed file exists, parses as its
//! extension implies, and hashes to the recorded digest, and that no file in
//! the directory is missing from the manifest.

use std::fmt;
use std::fs;
use std::path::Path;

use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::kernel::{default_state_tables, StateTable};
use crate::owl_xml::parse_owl_xml;
use crate::project::{load_events, load_project};

pub const MANIFEST: &str = "manifest.toml";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Origin {
    /// Copied from a published source.
    Published,
    /// Produced by this code and hand-checked.
    Derived,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GoldenFixture {
    pub path: String,
    pub description: String,
    pub origin: Origin,
    pub sha256: String,
    /// The file is a negative example and must fail to parse.
    #[serde(default)]
    pub invalid: bool,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Manifest {
    #[serde(default)]
    fixture: Vec<GoldenFixture>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FixtureFinding {
    ManifestUnreadable(String),
    Missing {
        path: String,
    },
    ParseFailure {
        path: String,
        message: String,
    },
    UnexpectedlyValid {
        path: String,
    },
    HashMismatch {
        path: String,
        expected: String,
        actual: String,
    },
    Unlisted {
        path: String,
    },
}

impl fmt::Display for FixtureFinding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FixtureFinding::ManifestUnreadable(m) => write!(f, "manifest: {m}"),
            FixtureFinding::Missing { path } => write!(f, "{path}: missing"),
            FixtureFinding::ParseFailure { path, message } => write!(f, "{path}: {message}"),
            FixtureFinding::HashMismatch {
                path,
                expected,
                actual,
            } => write!(f, "{path}: sha256 {actual}, manifest says {expected}"),
            FixtureFinding::UnexpectedlyValid { path } => {
                write!(f, "{path}: parses, but is listed as invalid")
            }
            FixtureFinding::Unlisted { path } => write!(f, "{path}: not listed in the manifest"),
        }
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn load_manifest(dir: &Path) -> Result<Vec<GoldenFixture>, String> {
    let text = fs::read_to_string(dir.join(MANIFEST)).map_err(|e| e.to_string())?;
    let manifest: Manifest = toml::from_str(&text).map_err(|e| e.to_string())?;
    Ok(manifest.fixture)
}

fn check_parses(path: &str, text: &str) -> Result<(), String> {
    let ext = Path::new(path)
        .extension()
        .and_then(|e| e.to_str())
        .unwrap_or("");
    match ext {
        "owx" => parse_owl_xml(text).map(drop).map_err(|e| e.to_string()),
        "project" => load_project(text, &default_state_tables())
            .map(drop)
            .map_err(|e| e.to_string()),
        "events" => load_events(text).map(drop).map_err(|e| e.to_string()),
        "toml" => StateTable::from_toml(text)
            .map(drop)
            .map_err(|e| e.to_string()),
        "json" => serde_json::from_str::<serde_json::Value>(text)
            .map(drop)
            .map_err(|e| e.to_string()),
        "jsonl" => text.lines().enumerate().try_for_each(|(i, line)| {
            serde_json::from_str::<serde_json::Value>(line)
                .map(drop)
                .map_err(|e| format!("line {}: {e}", i + 1))
        }),
        "txt" => Ok(()),
        other => Err(format!("no parser for extension `{other}`")),
    }
}

/// Findings for the fixture directory `dir`; empty when everything matches.
pub fn verify_fixtures(dir: &Path) -> Vec<FixtureFinding> {
    let fixtures = match load_manifest(dir) {
        Ok(f) => f,
        Err(e) => return vec![FixtureFinding::ManifestUnreadable(e)],
    };
    let mut findings = Vec::new();
    for fx in &fixtures {
        let bytes = match fs::read(dir.join(&fx.path)) {
            Ok(b) => b,
            Err(_) => {
                findings.push(FixtureFinding::Missing {
                    path: fx.path.clone(),
                });
                continue;
            }
        };
        let actual = sha256_hex(&bytes);
        if actual != fx.sha256 {
            findings.push(FixtureFinding::HashMismatch {
                path: fx.path.clone(),
                expected: fx.sha256.clone(),
                actual,
            });
        }
        let parsed = std::str::from_utf8(&bytes)
            .map_err(|e| e.to_string())
            .and_then(|text| check_parses(&fx.path, text));
        match (parsed, fx.invalid) {
            (Err(message), false) => findings.push(FixtureFinding::ParseFailure {
                path: fx.path.clone(),
                message,
            }),
            (Ok(()), true) => findings.push(FixtureFinding::UnexpectedlyValid {
                path: fx.path.clone(),
            }),
            _ => {}
        }
    }
    let mut on_disk = Vec::new();
    collect_files(dir, dir, &mut on_disk);
    on_disk.sort();
    for path in on_disk {
        if path != MANIFEST && path != "README.md" && !fixtures.iter().any(|f| f.path == path) {
            findings.push(FixtureFinding::Unlisted { path });
        }
    }
    findings
}

fn collect_files(root: &Path, dir: &Path, out: &mut Vec<String>) {
    let Ok(entries) = fs::read_dir(dir) else {
        return;
    };
    for entry in entries.flatten() {
        let path = entry.path();
        if path.is_dir() {
            collect_files(root, &path, out);
        } else if let Ok(rel) = path.strip_prefix(root) {
            out.push(rel.to_string_lossy().replace('\\', "/"));
        }
    }
}
