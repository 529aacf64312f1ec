//! The built-in top-level alpha ontology and the alpha state tables.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::iri::Iri;
use crate::ontology::{Axiom, Ontology};

pub const THING: &str = "#thing";
pub const RUNNABLE: &str = "#runnable";
pub const TANGIBLE: &str = "#tangible";
pub const INTANGIBLE: &str = "#intangible";
pub const EITHER_OR: &str = "#either-or";
pub const FULFILLS: &str = "#fulfills";

/// One of the seven kernel alphas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlphaKind {
    Stakeholders,
    Opportunity,
    Requirements,
    SoftwareSystem,
    Team,
    Work,
    WayOfWorking,
}

/// Which of the three intermediate categories an alpha sits under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Category {
    Tangible,
    Intangible,
    EitherOr,
}

impl Category {
    pub fn class_iri(self) -> Iri {
        Iri::new(match self {
            Category::Tangible => TANGIBLE,
            Category::Intangible => INTANGIBLE,
            Category::EitherOr => EITHER_OR,
        })
        .expect("static IRI")
    }
}

impl AlphaKind {
    pub const ALL: [AlphaKind; 7] = [
        AlphaKind::Stakeholders,
        AlphaKind::Opportunity,
        AlphaKind::Requirements,
        AlphaKind::SoftwareSystem,
        AlphaKind::Team,
        AlphaKind::Work,
        AlphaKind::WayOfWorking,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AlphaKind::Stakeholders => "stakeholders",
            AlphaKind::Opportunity => "opportunity",
            AlphaKind::Requirements => "requirements",
            AlphaKind::SoftwareSystem => "software-system",
            AlphaKind::Team => "team",
            AlphaKind::Work => "work",
            AlphaKind::WayOfWorking => "way-of-working",
        }
    }

    pub fn class_iri(self) -> Iri {
        Iri::local(self.name())
    }

    pub fn category(self) -> Category {
        match self {
            AlphaKind::SoftwareSystem
            | AlphaKind::Stakeholders
            | AlphaKind::Team
            | AlphaKind::WayOfWorking => Category::Tangible,
            AlphaKind::Opportunity => Category::Intangible,
            AlphaKind::Requirements | AlphaKind::Work => Category::EitherOr,
        }
    }
}

impl fmt::Display for AlphaKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown alpha `{0}`")]
pub struct UnknownAlpha(pub String);

impl FromStr for AlphaKind {
    type Err = UnknownAlpha;

    /// Accepts the bare name (`way-of-working`) or the class IRI (`#way-of-working`).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bare = s.strip_prefix('#').unwrap_or(s);
        AlphaKind::ALL
            .into_iter()
            .find(|a| a.name() == bare)
            .ok_or_else(|| UnknownAlpha(s.to_string()))
    }
}

/// The subclass edges of the top-level hierarchy, sub first.
pub fn builtin_subclass_edges() -> Vec<(Iri, Iri)> {
    let mut edges = vec![
        (Iri::local("runnable"), Iri::local("thing")),
        (Iri::local("tangible"), Iri::local("runnable")),
        (Iri::local("intangible"), Iri::local("runnable")),
        (Iri::local("either-or"), Iri::local("runnable")),
    ];
    // alphas in the order tangible, intangible, either-or
    let mut alphas = AlphaKind::ALL.to_vec();
    alphas.sort_by_key(|a| a.category());
    for alpha in alphas {
        edges.push((alpha.class_iri(), alpha.category().class_iri()));
    }
    edges
}

/// Thing, runnable, the three categories, the seven alphas; their subclass
/// tree; the functional `#fulfills` property from software system to
/// requirements; and pairwise disjointness of the three categories.
pub fn builtin_alpha_ontology() -> Ontology {
    let mut o = Ontology::new();
    for name in [THING, RUNNABLE, TANGIBLE, INTANGIBLE, EITHER_OR] {
        o.declare_class(Iri::new(name).expect("static IRI"));
    }
    for alpha in AlphaKind::ALL {
        o.declare_class(alpha.class_iri());
    }
    let fulfills = Iri::new(FULFILLS).expect("static IRI");
    o.declare_property(fulfills.clone());

    let axioms = builtin_subclass_edges()
        .into_iter()
        .map(|(sub, sup)| Axiom::sub_class_of(sub, sup))
        .chain([
            Axiom::functional(fulfills.clone()),
            Axiom::domain(fulfills.clone(), AlphaKind::SoftwareSystem.class_iri()),
            Axiom::range(fulfills, AlphaKind::Requirements.class_iri()),
            Axiom::disjoint([
                Category::Tangible.class_iri(),
                Category::Intangible.class_iri(),
                Category::EitherOr.class_iri(),
            ]),
        ]);
    for axiom in axioms {
        o.add_axiom(axiom)
            .expect("built-in ontology is well formed");
    }
    o
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StateTableError {
    #[error("state table is not valid TOML: {0}")]
    Syntax(String),
    #[error("unsupported state table format {0}, expected 1")]
    Format(u32),
    #[error(transparent)]
    UnknownAlpha(#[from] UnknownAlpha),
    #[error("alpha `{0}` has no states")]
    Empty(AlphaKind),
    #[error("alpha `{alpha}` lists state `{state}` twice")]
    DuplicateState { alpha: AlphaKind, state: String },
    #[error("alpha `{0}` is missing from the state table")]
    MissingAlpha(AlphaKind),
}

/// Ordered state progression for every alpha.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateTable {
    states: BTreeMap<AlphaKind, Vec<String>>,
}

#[derive(Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct StateTableFile {
    format: u32,
    alphas: BTreeMap<String, Vec<String>>,
}

pub const DEFAULT_STATE_TABLES: &str = include_str!("../data/state-tables.toml");

pub fn default_state_tables() -> StateTable {
    StateTable::from_toml(DEFAULT_STATE_TABLES).expect("shipped state table is valid")
}

impl StateTable {
    /// Builds a table from per-alpha lists. Alphas not listed fall back to the
    /// shipped defaults.
    pub fn new(
        entries: impl IntoIterator<Item = (AlphaKind, Vec<String>)>,
    ) -> Result<Self, StateTableError> {
        let mut states = default_state_tables().states;
        for (alpha, list) in entries {
            states.insert(alpha, list);
        }
        let table = StateTable { states };
        table.check()?;
        Ok(table)
    }

    /// Parses a state table document. Alphas absent from the document keep
    /// their default progression.
    pub fn from_toml(text: &str) -> Result<Self, StateTableError> {
        let file: StateTableFile =
            toml::from_str(text).map_err(|e| StateTableError::Syntax(e.to_string()))?;
        if file.format != 1 {
            return Err(StateTableError::Format(file.format));
        }
        let mut states = BTreeMap::new();
        for (name, list) in file.alphas {
            states.insert(name.parse::<AlphaKind>()?, list);
        }
        if states.len() == AlphaKind::ALL.len() {
            let table = StateTable { states };
            table.check()?;
            return Ok(table);
        }
        StateTable::new(states)
    }

    pub fn to_toml(&self) -> String {
        let file = StateTableFile {
            format: 1,
            alphas: self
                .states
                .iter()
                .map(|(k, v)| (k.name().to_string(), v.clone()))
                .collect(),
        };
        toml::to_string(&file).expect("state table serializes")
    }

    fn check(&self) -> Result<(), StateTableError> {
        for alpha in AlphaKind::ALL {
            let list = self
                .states
                .get(&alpha)
                .ok_or(StateTableError::MissingAlpha(alpha))?;
            if list.is_empty() {
                return Err(StateTableError::Empty(alpha));
            }
            let mut seen = BTreeSet::new();
            for state in list {
                if !seen.insert(state) {
                    return Err(StateTableError::DuplicateState {
                        alpha,
                        state: state.clone(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn states(&self, alpha: AlphaKind) -> &[String] {
        &self.states[&alpha]
    }

    pub fn position(&self, alpha: AlphaKind, state: &str) -> Option<usize> {
        self.states(alpha).iter().position(|s| s == state)
    }
}
