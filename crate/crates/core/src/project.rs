//! Project models: individuals, property assertions and alpha instances with
//! their checklists, plus the event runner that advances them.
//!
//! # File format
//!
//! A `.project` file is TOML:
//!
//! ```toml
//! format = 1
//!
//! [[individuals]]
//! iri = "#m1"
//! types = ["#module"]
//! kind = "software"        # optional: human | software
//!
//! [[assertions]]
//! subject = "#m1"
//! property = "#fulfills"
//! target = "#r1"
//!
//! [[alphas]]
//! iri = "#w1"
//! alpha = "work"
//! explicit_done = ["Initiated"]
//!
//! [[alphas.checklist]]
//! state = "Prepared"
//! label = "risks listed"
//! done = true
//! ```
//!
//! Saving is canonical: individuals and assertions sorted, alphas sorted by
//! IRI, checklist states in state-table order.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::abox::{AssertionSet, PropertyAssertion};
use crate::iri::Iri;
use crate::kernel::{AlphaKind, StateTable, FULFILLS};

pub const MODULE_CLASS: &str = "#module";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IndividualKind {
    Human,
    Software,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Individual {
    pub iri: Iri,
    pub types: BTreeSet<Iri>,
    pub kind: Option<IndividualKind>,
}

impl Individual {
    pub fn new(iri: Iri, types: impl IntoIterator<Item = Iri>) -> Self {
        Individual {
            iri,
            types: types.into_iter().collect(),
            kind: None,
        }
    }

    pub fn with_kind(mut self, kind: IndividualKind) -> Self {
        self.kind = Some(kind);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChecklistItem {
    pub label: String,
    #[serde(default)]
    pub done: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateChecklist {
    pub state: String,
    pub items: Vec<ChecklistItem>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaInstance {
    pub iri: Iri,
    pub alpha: AlphaKind,
    /// Only states that have items, in state-table order.
    pub checklist: Vec<StateChecklist>,
    pub explicit_done: BTreeSet<String>,
}

impl AlphaInstance {
    pub fn new(iri: Iri, alpha: AlphaKind) -> Self {
        AlphaInstance {
            iri,
            alpha,
            checklist: Vec::new(),
            explicit_done: BTreeSet::new(),
        }
    }

    pub fn items(&self, state: &str) -> &[ChecklistItem] {
        self.checklist
            .iter()
            .find(|c| c.state == state)
            .map(|c| c.items.as_slice())
            .unwrap_or(&[])
    }

    /// A state is achieved when it is explicitly marked done, or when it has
    /// at least one item and every item is done.
    pub fn is_achieved(&self, state: &str) -> bool {
        if self.explicit_done.contains(state) {
            return true;
        }
        let items = self.items(state);
        !items.is_empty() && items.iter().all(|i| i.done)
    }
}

/// Result of [`compute_alpha_state`]. `index` is `-1` before the first state.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CurrentState {
    pub name: String,
    pub index: isize,
}

pub const NOT_STARTED: &str = "not-started";

impl CurrentState {
    pub fn not_started() -> Self {
        CurrentState {
            name: NOT_STARTED.to_string(),
            index: -1,
        }
    }
}

impl fmt::Display for CurrentState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// Last state of the longest prefix of achieved states. Achieved states after
/// a gap do not count.
pub fn compute_alpha_state(inst: &AlphaInstance, table: &StateTable) -> CurrentState {
    let states = table.states(inst.alpha);
    let prefix = states.iter().take_while(|s| inst.is_achieved(s)).count();
    match prefix {
        0 => CurrentState::not_started(),
        n => CurrentState {
            name: states[n - 1].clone(),
            index: n as isize - 1,
        },
    }
}

/// Achieved states that lie beyond the current state. Non-empty output points
/// at a data-entry error.
pub fn island_states(inst: &AlphaInstance, table: &StateTable) -> Vec<String> {
    let current = compute_alpha_state(inst, table);
    table
        .states(inst.alpha)
        .iter()
        .skip((current.index + 1) as usize)
        .filter(|s| inst.is_achieved(s))
        .cloned()
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProjectError {
    #[error("{}: {message}", if path.is_empty() { "project" } else { path.as_str() })]
    SchemaError { path: String, message: String },
    #[error("dangling reference to {0}")]
    DanglingReference(Iri),
}

fn schema(path: impl Into<String>, message: impl Into<String>) -> ProjectError {
    ProjectError::SchemaError {
        path: path.into(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ProjectModel {
    individuals: BTreeMap<Iri, Individual>,
    property_assertions: BTreeSet<PropertyAssertion>,
    alpha_instances: Vec<AlphaInstance>,
}

impl ProjectModel {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn individuals(&self) -> impl Iterator<Item = &Individual> {
        self.individuals.values()
    }

    pub fn individual(&self, iri: &Iri) -> Option<&Individual> {
        self.individuals.get(iri)
    }

    pub fn property_assertions(&self) -> &BTreeSet<PropertyAssertion> {
        &self.property_assertions
    }

    pub fn alpha_instances(&self) -> &[AlphaInstance] {
        &self.alpha_instances
    }

    pub fn alpha_instance(&self, iri: &Iri) -> Option<&AlphaInstance> {
        self.alpha_instances.iter().find(|a| &a.iri == iri)
    }

    /// Fails if the IRI is already taken.
    pub fn add_individual(&mut self, individual: Individual) -> Result<(), ProjectError> {
        if self.individuals.contains_key(&individual.iri) {
            return Err(schema(
                "individuals",
                format!("duplicate individual {}", individual.iri),
            ));
        }
        self.individuals.insert(individual.iri.clone(), individual);
        Ok(())
    }

    pub fn add_type(&mut self, individual: &Iri, class: Iri) -> Result<(), ProjectError> {
        self.individuals
            .get_mut(individual)
            .ok_or_else(|| ProjectError::DanglingReference(individual.clone()))?
            .types
            .insert(class);
        Ok(())
    }

    /// Both ends must already be individuals of the model.
    pub fn add_assertion(&mut self, assertion: PropertyAssertion) -> Result<bool, ProjectError> {
        for end in [&assertion.subject, &assertion.target] {
            if !self.individuals.contains_key(end) {
                return Err(ProjectError::DanglingReference(end.clone()));
            }
        }
        Ok(self.property_assertions.insert(assertion))
    }

    pub fn add_alpha_instance(&mut self, inst: AlphaInstance) -> Result<(), ProjectError> {
        if self.alpha_instance(&inst.iri).is_some() {
            return Err(schema(
                "alphas",
                format!("duplicate alpha instance {}", inst.iri),
            ));
        }
        let at = self.alpha_instances.partition_point(|a| a.iri < inst.iri);
        self.alpha_instances.insert(at, inst);
        Ok(())
    }

    /// Individuals with their types as class assertions, plus the property
    /// assertions.
    pub fn assertions(&self) -> AssertionSet {
        let mut set = AssertionSet::new();
        for ind in self.individuals.values() {
            set.declare_individual(ind.iri.clone());
            for class in &ind.types {
                set.assert_class(ind.iri.clone(), class.clone());
            }
        }
        for pa in &self.property_assertions {
            set.assert_property(pa.clone());
        }
        set
    }

    /// A model with the given assertions and no alpha instances or kinds.
    pub fn from_assertions(set: &AssertionSet) -> Self {
        let mut model = ProjectModel::new();
        for iri in set.individuals() {
            let types = set.asserted_types(iri).cloned();
            model
                .individuals
                .insert(iri.clone(), Individual::new(iri.clone(), types));
        }
        model.property_assertions = set.property_assertions().clone();
        model
    }

    pub fn alpha_states(&self, table: &StateTable) -> BTreeMap<Iri, CurrentState> {
        self.alpha_instances
            .iter()
            .map(|a| (a.iri.clone(), compute_alpha_state(a, table)))
            .collect()
    }

    pub fn from_toml(text: &str, table: &StateTable) -> Result<Self, ProjectError> {
        load_project(text, table)
    }

    pub fn to_toml(&self) -> String {
        let file = ProjectFile {
            format: 1,
            individuals: self
                .individuals
                .values()
                .map(|i| IndividualEntry {
                    iri: i.iri.to_string(),
                    types: i.types.iter().map(Iri::to_string).collect(),
                    kind: i.kind,
                })
                .collect(),
            assertions: self
                .property_assertions
                .iter()
                .map(|pa| AssertionEntry {
                    subject: pa.subject.to_string(),
                    property: pa.property.to_string(),
                    target: pa.target.to_string(),
                })
                .collect(),
            alphas: self
                .alpha_instances
                .iter()
                .map(|a| AlphaEntry {
                    iri: a.iri.to_string(),
                    alpha: a.alpha.name().to_string(),
                    explicit_done: a.explicit_done.iter().cloned().collect(),
                    checklist: a
                        .checklist
                        .iter()
                        .flat_map(|c| {
                            c.items.iter().map(|item| ItemEntry {
                                state: c.state.clone(),
                                label: item.label.clone(),
                                done: item.done,
                            })
                        })
                        .collect(),
                })
                .collect(),
        };
        toml::to_string(&file).expect("project serializes")
    }

    /// Applies events in order. On failure nothing is applied and the error
    /// names the offending event.
    pub fn apply_events(&self, events: &[Event]) -> Result<ProjectModel, EventError> {
        let mut model = self.clone();
        for (index, event) in events.iter().enumerate() {
            model
                .apply(event)
                .map_err(|reason| EventError { index, reason })?;
        }
        Ok(model)
    }

    fn apply(&mut self, event: &Event) -> Result<(), String> {
        match event {
            Event::MarkItemDone { alpha, state, item } => {
                let inst = self
                    .alpha_instances
                    .iter_mut()
                    .find(|a| &a.iri == alpha)
                    .ok_or_else(|| format!("no alpha instance {alpha}"))?;
                let checklist = inst
                    .checklist
                    .iter_mut()
                    .find(|c| &c.state == state)
                    .ok_or_else(|| format!("{alpha} has no checklist for state `{state}`"))?;
                let entry = checklist
                    .items
                    .iter_mut()
                    .find(|i| &i.label == item)
                    .ok_or_else(|| format!("{alpha} state `{state}` has no item `{item}`"))?;
                entry.done = true;
                Ok(())
            }
            Event::AddIndividual { iri, types, kind } => {
                if self.individuals.contains_key(iri) {
                    return Err(format!("individual {iri} already exists"));
                }
                let mut ind = Individual::new(iri.clone(), types.iter().cloned());
                ind.kind = *kind;
                self.individuals.insert(iri.clone(), ind);
                Ok(())
            }
            Event::AddAssertion {
                subject,
                property,
                target,
            } => self
                .add_assertion(PropertyAssertion::new(
                    subject.clone(),
                    property.clone(),
                    target.clone(),
                ))
                .map(|_| ())
                .map_err(|e| e.to_string()),
            Event::AddModuleFulfilling { requirement } => {
                if !self.individuals.contains_key(requirement) {
                    return Err(format!("no individual {requirement}"));
                }
                let module = fresh_module_iri(requirement);
                if self.individuals.contains_key(&module) {
                    return Err(format!("fresh module name {module} is already taken"));
                }
                self.individuals.insert(
                    module.clone(),
                    Individual::new(
                        module.clone(),
                        [Iri::new(MODULE_CLASS).expect("static IRI")],
                    ),
                );
                self.property_assertions.insert(PropertyAssertion::new(
                    module,
                    Iri::new(FULFILLS).expect("static IRI"),
                    requirement.clone(),
                ));
                Ok(())
            }
        }
    }
}

/// `#module-for-<local name of the requirement>`.
pub fn fresh_module_iri(requirement: &Iri) -> Iri {
    Iri::new(format!("#module-for-{}", requirement.local_name())).expect("valid local name")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Event {
    MarkItemDone {
        alpha: Iri,
        state: String,
        item: String,
    },
    AddIndividual {
        iri: Iri,
        #[serde(default)]
        types: Vec<Iri>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        kind: Option<IndividualKind>,
    },
    AddAssertion {
        subject: Iri,
        property: Iri,
        target: Iri,
    },
    AddModuleFulfilling {
        requirement: Iri,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("event {index}: {reason}")]
pub struct EventError {
    pub index: usize,
    pub reason: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EventFile {
    format: u32,
    #[serde(default)]
    events: Vec<Event>,
}

/// Parses an events file:
///
/// ```toml
/// format = 1
/// [[events]]
/// type = "mark-item-done"
/// alpha = "#w1"
/// state = "Started"
/// item = "backlog groomed"
/// ```
pub fn load_events(text: &str) -> Result<Vec<Event>, ProjectError> {
    let file: EventFile = toml::from_str(text).map_err(|e| schema("", e.to_string()))?;
    if file.format != 1 {
        return Err(schema(
            "format",
            format!("unsupported format {}, expected 1", file.format),
        ));
    }
    Ok(file.events)
}

pub fn events_to_toml(events: &[Event]) -> String {
    toml::to_string(&EventFile {
        format: 1,
        events: events.to_vec(),
    })
    .expect("events serialize")
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProjectFile {
    format: u32,
    #[serde(default)]
    individuals: Vec<IndividualEntry>,
    #[serde(default)]
    assertions: Vec<AssertionEntry>,
    #[serde(default)]
    alphas: Vec<AlphaEntry>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct IndividualEntry {
    iri: String,
    #[serde(default)]
    types: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    kind: Option<IndividualKind>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AssertionEntry {
    subject: String,
    property: String,
    target: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AlphaEntry {
    iri: String,
    alpha: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    explicit_done: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    checklist: Vec<ItemEntry>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ItemEntry {
    state: String,
    label: String,
    #[serde(default)]
    done: bool,
}

fn parse_iri(path: String, text: &str) -> Result<Iri, ProjectError> {
    Iri::new(text).map_err(|e| schema(path, e.to_string()))
}

/// Parses and validates a project file against a state table.
pub fn load_project(text: &str, table: &StateTable) -> Result<ProjectModel, ProjectError> {
    let file: ProjectFile =
        toml::from_str(text).map_err(|e| schema("", e.to_string().trim_end()))?;
    if file.format != 1 {
        return Err(schema(
            "format",
            format!("unsupported format {}, expected 1", file.format),
        ));
    }
    let mut model = ProjectModel::new();
    for (i, entry) in file.individuals.iter().enumerate() {
        let iri = parse_iri(format!("individuals[{i}].iri"), &entry.iri)?;
        let mut types = BTreeSet::new();
        for (j, t) in entry.types.iter().enumerate() {
            types.insert(parse_iri(format!("individuals[{i}].types[{j}]"), t)?);
        }
        if model.individuals.contains_key(&iri) {
            return Err(schema(
                format!("individuals[{i}].iri"),
                format!("duplicate individual {iri}"),
            ));
        }
        model.individuals.insert(
            iri.clone(),
            Individual {
                iri,
                types,
                kind: entry.kind,
            },
        );
    }
    for (i, entry) in file.assertions.iter().enumerate() {
        let pa = PropertyAssertion::new(
            parse_iri(format!("assertions[{i}].subject"), &entry.subject)?,
            parse_iri(format!("assertions[{i}].property"), &entry.property)?,
            parse_iri(format!("assertions[{i}].target"), &entry.target)?,
        );
        model.add_assertion(pa)?;
    }
    for (i, entry) in file.alphas.iter().enumerate() {
        let iri = parse_iri(format!("alphas[{i}].iri"), &entry.iri)?;
        let alpha: AlphaKind = entry
            .alpha
            .parse()
            .map_err(|e: crate::kernel::UnknownAlpha| {
                schema(format!("alphas[{i}].alpha"), e.to_string())
            })?;
        let mut inst = AlphaInstance::new(iri, alpha);
        for (j, state) in entry.explicit_done.iter().enumerate() {
            if table.position(alpha, state).is_none() {
                return Err(schema(
                    format!("alphas[{i}].explicit_done[{j}]"),
                    format!("`{state}` is not a state of {alpha}"),
                ));
            }
            inst.explicit_done.insert(state.clone());
        }
        let mut by_state: BTreeMap<usize, StateChecklist> = BTreeMap::new();
        for (j, item) in entry.checklist.iter().enumerate() {
            let pos = table.position(alpha, &item.state).ok_or_else(|| {
                schema(
                    format!("alphas[{i}].checklist[{j}].state"),
                    format!("`{}` is not a state of {alpha}", item.state),
                )
            })?;
            let list = by_state.entry(pos).or_insert_with(|| StateChecklist {
                state: item.state.clone(),
                items: Vec::new(),
            });
            if list.items.iter().any(|x| x.label == item.label) {
                return Err(schema(
                    format!("alphas[{i}].checklist[{j}].label"),
                    format!("duplicate item `{}` in state `{}`", item.label, item.state),
                ));
            }
            list.items.push(ChecklistItem {
                label: item.label.clone(),
                done: item.done,
            });
        }
        inst.checklist = by_state.into_values().collect();
        model.add_alpha_instance(inst).map_err(|_| {
            schema(
                format!("alphas[{i}].iri"),
                format!("duplicate alpha instance {}", entry.iri),
            )
        })?;
    }
    Ok(model)
}
