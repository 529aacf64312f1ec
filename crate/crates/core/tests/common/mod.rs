//! Brute-force oracles shared by the integration and acceptance tests. None of
//! these call into the reasoner, checker or state engine they check.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use essence_core::abox::{AssertionSet, PropertyAssertion};
use essence_core::kernel::{builtin_alpha_ontology, AlphaKind, StateTable};
use essence_core::ontology::{Axiom, Ontology};
use essence_core::project::{
    AlphaInstance, ChecklistItem, Event, Individual, ProjectModel, StateChecklist,
};
use essence_core::scenarios::rng::SplitMix64;
use essence_core::Iri;

pub fn iri(s: &str) -> Iri {
    Iri::new(s).unwrap()
}

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

/// Floyd–Warshall reachability over an adjacency matrix, reflexive.
pub fn floyd_warshall_closure(nodes: &[Iri], edges: &[(Iri, Iri)]) -> BTreeSet<(Iri, Iri)> {
    let n = nodes.len();
    let idx: BTreeMap<&Iri, usize> = nodes.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let mut reach = vec![vec![false; n]; n];
    for (i, row) in reach.iter_mut().enumerate() {
        row[i] = true;
    }
    for (a, b) in edges {
        reach[idx[a]][idx[b]] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if reach[i][k] && reach[k][j] {
                    reach[i][j] = true;
                }
            }
        }
    }
    let mut out = BTreeSet::new();
    for i in 0..n {
        for j in 0..n {
            if reach[i][j] {
                out.insert((nodes[i].clone(), nodes[j].clone()));
            }
        }
    }
    out
}

/// Random DAG over `n` nodes: a random permutation fixes a topological
/// order and each forward pair becomes an edge with probability 1/3.
pub fn random_dag(rng: &mut SplitMix64, n: usize) -> (Vec<Iri>, Vec<(Iri, Iri)>) {
    let nodes: Vec<Iri> = (0..n).map(|i| iri(&format!("#c{i:02}"))).collect();
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.below(i as u64 + 1) as usize;
        order.swap(i, j);
    }
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.below(3) == 0 {
                edges.push((nodes[order[a]].clone(), nodes[order[b]].clone()));
            }
        }
    }
    (nodes, edges)
}

/// Key identifying a violation independently of explanation text.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum ViolationKey {
    Domain {
        subject: Iri,
        property: Iri,
        class: Iri,
        target: Iri,
    },
    Range {
        target: Iri,
        property: Iri,
        class: Iri,
        subject: Iri,
    },
    Functional {
        subject: Iri,
        property: Iri,
    },
    Disjoint {
        individual: Iri,
        a: Iri,
        b: Iri,
    },
}

/// Naive fixpoint typing: repeat every rule over every fact until nothing
/// changes.
pub fn brute_types(o: &Ontology, abox: &AssertionSet, infer: bool) -> BTreeMap<Iri, BTreeSet<Iri>> {
    let mut types: BTreeMap<Iri, BTreeSet<Iri>> = abox
        .individuals()
        .iter()
        .map(|i| (i.clone(), BTreeSet::new()))
        .collect();
    for ca in abox.class_assertions() {
        types
            .entry(ca.individual.clone())
            .or_default()
            .insert(ca.class.clone());
    }
    loop {
        let mut changed = false;
        for axiom in o.axioms() {
            match axiom {
                Axiom::SubClassOf { sub, sup } => {
                    for t in types.values_mut() {
                        if t.contains(sub) && !t.contains(sup) {
                            t.insert(sup.clone());
                            changed = true;
                        }
                    }
                }
                Axiom::ObjectPropertyDomain { property, class } if infer => {
                    for pa in abox.property_assertions() {
                        if &pa.property == property {
                            changed |= types
                                .entry(pa.subject.clone())
                                .or_default()
                                .insert(class.clone());
                        }
                    }
                }
                Axiom::ObjectPropertyRange { property, class } if infer => {
                    for pa in abox.property_assertions() {
                        if &pa.property == property {
                            changed |= types
                                .entry(pa.target.clone())
                                .or_default()
                                .insert(class.clone());
                        }
                    }
                }
                _ => {}
            }
        }
        if !changed {
            return types;
        }
    }
}

/// Quadratic scan over assertion pairs and type pairs.
pub fn brute_violations(o: &Ontology, abox: &AssertionSet, infer: bool) -> BTreeSet<ViolationKey> {
    let types = brute_types(o, abox, infer);
    let has = |i: &Iri, c: &Iri| types.get(i).is_some_and(|t| t.contains(c));
    let mut out = BTreeSet::new();
    let pas: Vec<&PropertyAssertion> = abox.property_assertions().iter().collect();
    if !infer {
        for pa in &pas {
            for axiom in o.axioms() {
                match axiom {
                    Axiom::ObjectPropertyDomain { property, class }
                        if property == &pa.property && !has(&pa.subject, class) =>
                    {
                        out.insert(ViolationKey::Domain {
                            subject: pa.subject.clone(),
                            property: property.clone(),
                            class: class.clone(),
                            target: pa.target.clone(),
                        });
                    }
                    Axiom::ObjectPropertyRange { property, class }
                        if property == &pa.property && !has(&pa.target, class) =>
                    {
                        out.insert(ViolationKey::Range {
                            target: pa.target.clone(),
                            property: property.clone(),
                            class: class.clone(),
                            subject: pa.subject.clone(),
                        });
                    }
                    _ => {}
                }
            }
        }
    }
    let functional: BTreeSet<&Iri> = o
        .axioms()
        .iter()
        .filter_map(|a| match a {
            Axiom::FunctionalObjectProperty { property } => Some(property),
            _ => None,
        })
        .collect();
    for a in &pas {
        for b in &pas {
            if a.subject == b.subject
                && a.property == b.property
                && a.target != b.target
                && functional.contains(&a.property)
            {
                out.insert(ViolationKey::Functional {
                    subject: a.subject.clone(),
                    property: a.property.clone(),
                });
            }
        }
    }
    for (ind, ts) in &types {
        for a in ts {
            for b in ts {
                if a >= b {
                    continue;
                }
                let clash = o.axioms().iter().any(|ax| {
                    matches!(ax, Axiom::DisjointClasses { classes } if classes.contains(a) && classes.contains(b))
                });
                if clash {
                    out.insert(ViolationKey::Disjoint {
                        individual: ind.clone(),
                        a: a.clone(),
                        b: b.clone(),
                    });
                }
            }
        }
    }
    out
}

pub fn finding_key(f: &essence_core::reasoner::Finding) -> ViolationKey {
    use essence_core::reasoner::{FindingDetail, FindingKind};
    match (&f.kind, &f.detail) {
        (
            FindingKind::DomainViolation,
            FindingDetail::Typing {
                property,
                required,
                other_end,
            },
        ) => ViolationKey::Domain {
            subject: f.subject.clone(),
            property: property.clone(),
            class: required.clone(),
            target: other_end.clone(),
        },
        (
            FindingKind::RangeViolation,
            FindingDetail::Typing {
                property,
                required,
                other_end,
            },
        ) => ViolationKey::Range {
            target: f.subject.clone(),
            property: property.clone(),
            class: required.clone(),
            subject: other_end.clone(),
        },
        (FindingKind::FunctionalViolation, FindingDetail::Functional { property, .. }) => {
            ViolationKey::Functional {
                subject: f.subject.clone(),
                property: property.clone(),
            }
        }
        (FindingKind::DisjointnessViolation, FindingDetail::Disjoint { classes }) => {
            ViolationKey::Disjoint {
                individual: f.subject.clone(),
                a: classes[0].clone(),
                b: classes[1].clone(),
            }
        }
        other => panic!("inconsistent finding shape {other:?}"),
    }
}

/// Built-in ontology plus `#module`, an extra functional property `#uses`
/// and a second disjointness axiom, so every violation kind is reachable.
pub fn oracle_ontology() -> Ontology {
    let mut o = builtin_alpha_ontology();
    o.declare_class(iri("#module"));
    o.declare_property(iri("#uses"));
    for ax in [
        Axiom::sub_class_of(iri("#module"), iri("#software-system")),
        Axiom::functional(iri("#uses")),
        Axiom::domain(iri("#uses"), iri("#team")),
        Axiom::range(iri("#uses"), iri("#way-of-working")),
        Axiom::disjoint([iri("#team"), iri("#software-system")]),
    ] {
        o.add_axiom(ax).unwrap();
    }
    o
}

/// Random assertion set over at most `max_individuals` individuals.
pub fn random_abox(rng: &mut SplitMix64, o: &Ontology, max_individuals: u64) -> AssertionSet {
    let classes: Vec<&Iri> = o.classes().iter().collect();
    let properties: Vec<&Iri> = o.properties().iter().collect();
    let n = 1 + rng.below(max_individuals);
    let inds: Vec<Iri> = (0..n).map(|i| iri(&format!("#i{i}"))).collect();
    let mut a = AssertionSet::new();
    for ind in &inds {
        a.declare_individual(ind.clone());
        for _ in 0..rng.below(3) {
            let c = classes[rng.below(classes.len() as u64) as usize];
            a.assert_class(ind.clone(), c.clone());
        }
    }
    for _ in 0..rng.below(2 * n + 1) {
        let s = &inds[rng.below(n) as usize];
        let t = &inds[rng.below(n) as usize];
        let p = properties[rng.below(properties.len() as u64) as usize];
        a.assert_property(PropertyAssertion::new(s.clone(), p.clone(), t.clone()));
    }
    a
}

/// Completeness by a nested loop: a requirement is an individual whose
/// asserted class is `#requirements`, a part is one asserted `#module` or
/// `#software-system`.
pub fn brute_unfulfilled(requirements: &[Iri], parts: &[Iri], fulfills: &[(Iri, Iri)]) -> Vec<Iri> {
    let mut gaps = Vec::new();
    for r in requirements {
        let mut found = false;
        for m in parts {
            for (s, t) in fulfills {
                if s == m && t == r {
                    found = true;
                }
            }
        }
        if !found {
            gaps.push(r.clone());
        }
    }
    gaps.sort();
    gaps
}

/// Index of the last state in the longest fully achieved prefix, or -1.
pub fn longest_prefix_oracle(achieved: &[bool]) -> isize {
    let mut last = -1isize;
    for (i, &a) in achieved.iter().enumerate() {
        if !a {
            break;
        }
        last = i as isize;
    }
    last
}

/// Straightforward re-implementation of the dissemination rounds. Returns
/// (failed id, rounds, (round, from, to) contacts) and leaves `rng` positioned
/// where the vote draws begin.
pub fn resimulate_dissemination(n: u64, rng: &mut SplitMix64) -> (u64, u64, Vec<(u64, u64, u64)>) {
    let failed = rng.below(n);
    let mut informed = vec![false; n as usize];
    informed[failed as usize] = true;
    let mut rounds = 0;
    let mut contacts = Vec::new();
    while informed.iter().any(|x| !x) {
        rounds += 1;
        let snapshot = informed.clone();
        let uninformed: Vec<u64> = (0..n).filter(|&i| !snapshot[i as usize]).collect();
        for from in 0..n {
            if snapshot[from as usize] {
                let to = uninformed[(rng.next_u64() % uninformed.len() as u64) as usize];
                contacts.push((rounds, from, to));
                informed[to as usize] = true;
            }
        }
    }
    (failed, rounds, contacts)
}

pub const MODULES: usize = 3;
pub const REQUIREMENTS: usize = 3;

pub type FulfillsCase = (ProjectModel, Vec<Iri>, Vec<Iri>, Vec<(Iri, Iri)>);

/// One of the 512 fulfills-subsets over `#m0..#m2` × `#r0..#r2`: bit
/// `3 * m + r` of `mask` asserts `fulfills(#m<m>, #r<r>)`. Returns the model
/// with the oracle's view of it.
pub fn fulfills_case(mask: u16) -> FulfillsCase {
    let modules: Vec<Iri> = (0..MODULES).map(|m| iri(&format!("#m{m}"))).collect();
    let reqs: Vec<Iri> = (0..REQUIREMENTS).map(|r| iri(&format!("#r{r}"))).collect();
    let mut model = ProjectModel::new();
    for m in &modules {
        model
            .add_individual(Individual::new(m.clone(), [iri("#module")]))
            .unwrap();
    }
    for r in &reqs {
        model
            .add_individual(Individual::new(r.clone(), [iri("#requirements")]))
            .unwrap();
    }
    let mut fulfills = Vec::new();
    for (mi, m) in modules.iter().enumerate() {
        for (ri, r) in reqs.iter().enumerate() {
            if mask & (1 << (REQUIREMENTS * mi + ri)) != 0 {
                model
                    .add_assertion(PropertyAssertion::new(
                        m.clone(),
                        iri("#fulfills"),
                        r.clone(),
                    ))
                    .unwrap();
                fulfills.push((m.clone(), r.clone()));
            }
        }
    }
    (model, reqs, modules, fulfills)
}

pub const PATTERN_STATES: [&str; 4] = ["S1", "S2", "S3", "S4"];

/// State table whose `work` alpha has the four states `S1..S4`.
pub fn four_state_table() -> StateTable {
    StateTable::new([(
        AlphaKind::Work,
        PATTERN_STATES.iter().map(|s| s.to_string()).collect(),
    )])
    .unwrap()
}

/// `#w`, a work instance with two items per state; bit `2 * s + i` of `mask`
/// marks item `i` of state `s` done.
pub fn pattern_instance(mask: u8) -> AlphaInstance {
    let mut inst = AlphaInstance::new(iri("#w"), AlphaKind::Work);
    for (s, state) in PATTERN_STATES.iter().enumerate() {
        inst.checklist.push(StateChecklist {
            state: state.to_string(),
            items: (0..2)
                .map(|i| ChecklistItem {
                    label: format!("item-{i}"),
                    done: mask & (1 << (2 * s + i)) != 0,
                })
                .collect(),
        });
    }
    inst
}

/// Per-state achievement read straight off the bit pattern.
pub fn pattern_achieved(mask: u8) -> Vec<bool> {
    (0..PATTERN_STATES.len())
        .map(|s| (mask >> (2 * s)) & 0b11 == 0b11)
        .collect()
}

pub fn random_mark_stream(rng: &mut SplitMix64, len: usize) -> Vec<Event> {
    (0..len)
        .map(|_| Event::MarkItemDone {
            alpha: iri("#w"),
            state: PATTERN_STATES[rng.below(4) as usize].to_string(),
            item: format!("item-{}", rng.below(2)),
        })
        .collect()
}

/// A model with `fulfilled + gaps` requirements under one system; each
/// fulfilled requirement gets its own module, the rest have none. Extra
/// unrelated individuals are sprinkled in.
pub fn random_gap_model(rng: &mut SplitMix64, gaps: u64) -> ProjectModel {
    let mut model = ProjectModel::new();
    model
        .add_individual(Individual::new(iri("#system"), [iri("#software-system")]))
        .unwrap();
    let fulfilled = rng.below(4);
    let mut names: Vec<u64> = (0..fulfilled + gaps).collect();
    for i in (1..names.len()).rev() {
        let j = rng.below(i as u64 + 1) as usize;
        names.swap(i, j);
    }
    for (pos, name) in names.iter().enumerate() {
        let r = iri(&format!("#req-{name}"));
        model
            .add_individual(Individual::new(r.clone(), [iri("#requirements")]))
            .unwrap();
        if (pos as u64) < fulfilled {
            let m = iri(&format!("#mod-{name}"));
            model
                .add_individual(Individual::new(m.clone(), [iri("#module")]))
                .unwrap();
            model
                .add_assertion(PropertyAssertion::new(m, iri("#fulfills"), r))
                .unwrap();
        }
    }
    for i in 0..rng.below(3) {
        model
            .add_individual(Individual::new(
                iri(&format!("#person-{i}")),
                [iri("#stakeholders")],
            ))
            .unwrap();
    }
    model
}

/// Requirements of `model` lacking a `#fulfills` edge from any individual,
/// by a nested scan over the raw model.
pub fn count_gaps(model: &ProjectModel) -> usize {
    let reqs: Vec<&Individual> = model
        .individuals()
        .filter(|i| i.types.contains(&iri("#requirements")))
        .collect();
    reqs.iter()
        .filter(|r| {
            !model
                .property_assertions()
                .iter()
                .any(|pa| pa.property == iri("#fulfills") && pa.target == r.iri)
        })
        .count()
}
