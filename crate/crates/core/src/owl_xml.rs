//! Reader and writer for the OWL/XML subset used by kernel ontologies.
//!
//! Supported elements: `Declaration` (wrapping `Class`, `ObjectProperty` or
//! `NamedIndividual`), `SubClassOf`, `FunctionalObjectProperty`,
//! `ObjectPropertyDomain`, `ObjectPropertyRange`, `DisjointClasses`,
//! `ClassAssertion`, `ObjectPropertyAssertion` and a top-level
//! `NamedIndividual`. An `Ontology` envelope is optional and its attributes are
//! ignored. XML prologs and comments are skipped; DTDs, CDATA and entities other
//! than the five predefined ones are rejected.
//!
//! The reader is a small tokenizer followed by recursive descent over the
//! element tree. It is not a general XML engine.

use std::fmt::Write as _;

use thiserror::Error;

use crate::abox::{AssertionSet, PropertyAssertion};
use crate::iri::Iri;
use crate::ontology::{Axiom, Ontology};

pub const OWL_NAMESPACE: &str = "http://www.w3.org/2002/07/owl#";

/// A parsed `.owx` file: terminological axioms plus assertions.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OwlDocument {
    pub ontology: Ontology,
    pub abox: AssertionSet,
}

impl OwlDocument {
    pub fn new(ontology: Ontology, abox: AssertionSet) -> Self {
        OwlDocument { ontology, abox }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ParseMode {
    /// Any unsupported or ill-formed element aborts the parse.
    #[default]
    Strict,
    /// Element-level problems are skipped and reported as warnings.
    Lenient,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OwlError {
    #[error("{line}:{col}: malformed markup: {message}")]
    MalformedMarkup {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("{line}:{col}: unsupported element <{name}>")]
    UnsupportedElement {
        name: String,
        line: usize,
        col: usize,
    },
    #[error("{line}:{col}: <{element}> has no IRI attribute")]
    MissingIriAttribute {
        element: String,
        line: usize,
        col: usize,
    },
    #[error("{line}:{col}: <{element}>: {message}")]
    InvalidElement {
        element: String,
        line: usize,
        col: usize,
        message: String,
    },
}

impl OwlError {
    fn position(&self) -> (usize, usize) {
        match self {
            OwlError::MalformedMarkup { line, col, .. }
            | OwlError::UnsupportedElement { line, col, .. }
            | OwlError::MissingIriAttribute { line, col, .. }
            | OwlError::InvalidElement { line, col, .. } => (*line, *col),
        }
    }
}

/// An element skipped in lenient mode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseWarning {
    pub line: usize,
    pub col: usize,
    pub error: OwlError,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedDocument {
    pub document: OwlDocument,
    pub warnings: Vec<ParseWarning>,
}

/// Strict parse.
pub fn parse_owl_xml(text: &str) -> Result<OwlDocument, OwlError> {
    parse_owl_xml_with(text, ParseMode::Strict).map(|p| p.document)
}

pub fn parse_owl_xml_with(text: &str, mode: ParseMode) -> Result<ParsedDocument, OwlError> {
    let tokens = tokenize(text)?;
    let nodes = build_tree(tokens)?;
    let mut reader = Reader {
        mode,
        doc: OwlDocument::default(),
        warnings: Vec::new(),
    };
    reader.top_level(&nodes)?;
    Ok(ParsedDocument {
        document: reader.doc,
        warnings: reader.warnings,
    })
}

// ---------------------------------------------------------------------------
// tokenizer

#[derive(Debug)]
enum Token {
    Open {
        name: String,
        attrs: Vec<(String, String)>,
        empty: bool,
        line: usize,
        col: usize,
    },
    Close {
        name: String,
        line: usize,
        col: usize,
    },
    Text {
        text: String,
        line: usize,
        col: usize,
    },
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn starts_with(&self, s: &str) -> bool {
        self.src[self.pos..].starts_with(s)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn advance(&mut self, n: usize) {
        for _ in 0..n {
            self.bump();
        }
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.bump();
        }
    }

    fn err(&self, message: impl Into<String>) -> OwlError {
        OwlError::MalformedMarkup {
            line: self.line,
            col: self.col,
            message: message.into(),
        }
    }

    /// Consumes through `end`, failing at end of input.
    fn skip_past(&mut self, end: &str, what: &str) -> Result<(), OwlError> {
        let (line, col) = (self.line, self.col);
        while !self.starts_with(end) {
            if self.bump().is_none() {
                return Err(OwlError::MalformedMarkup {
                    line,
                    col,
                    message: format!("unterminated {what}"),
                });
            }
        }
        self.advance(end.chars().count());
        Ok(())
    }

    fn name(&mut self) -> Result<String, OwlError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_alphanumeric() || matches!(c, '_' | '-' | '.' | ':'))
        {
            self.bump();
        }
        if start == self.pos {
            return Err(self.err("expected a name"));
        }
        Ok(self.src[start..self.pos].to_string())
    }
}

fn tokenize(src: &str) -> Result<Vec<Token>, OwlError> {
    let mut cur = Cursor {
        src,
        pos: 0,
        line: 1,
        col: 1,
    };
    let mut tokens = Vec::new();
    while cur.peek().is_some() {
        let (line, col) = (cur.line, cur.col);
        if cur.starts_with("<?") {
            cur.skip_past("?>", "processing instruction")?;
        } else if cur.starts_with("<!--") {
            cur.skip_past("-->", "comment")?;
        } else if cur.starts_with("<!") {
            return Err(cur.err("DTDs and CDATA sections are not supported"));
        } else if cur.starts_with("</") {
            cur.advance(2);
            let name = cur.name()?;
            cur.skip_ws();
            if cur.bump() != Some('>') {
                return Err(cur.err(format!("expected `>` to close </{name}")));
            }
            tokens.push(Token::Close { name, line, col });
        } else if cur.starts_with("<") {
            cur.advance(1);
            let name = cur.name()?;
            let mut attrs = Vec::new();
            let empty = loop {
                cur.skip_ws();
                if cur.starts_with("/>") {
                    cur.advance(2);
                    break true;
                }
                if cur.starts_with(">") {
                    cur.advance(1);
                    break false;
                }
                if cur.peek().is_none() {
                    return Err(OwlError::MalformedMarkup {
                        line,
                        col,
                        message: format!("unterminated tag <{name}"),
                    });
                }
                let key = cur.name()?;
                cur.skip_ws();
                if cur.bump() != Some('=') {
                    return Err(cur.err(format!("expected `=` after attribute {key}")));
                }
                cur.skip_ws();
                let quote = match cur.bump() {
                    Some(q @ ('"' | '\'')) => q,
                    _ => return Err(cur.err("attribute value must be quoted")),
                };
                let (vline, vcol) = (cur.line, cur.col);
                let start = cur.pos;
                loop {
                    match cur.peek() {
                        Some(c) if c == quote => break,
                        Some('<') => return Err(cur.err("`<` inside attribute value")),
                        Some(_) => {
                            cur.bump();
                        }
                        None => {
                            return Err(OwlError::MalformedMarkup {
                                line: vline,
                                col: vcol,
                                message: "unterminated attribute value".into(),
                            })
                        }
                    }
                }
                let raw = &src[start..cur.pos];
                cur.bump();
                let value = unescape(raw).ok_or(OwlError::MalformedMarkup {
                    line: vline,
                    col: vcol,
                    message: format!("unsupported entity in `{raw}`"),
                })?;
                attrs.push((key, value));
            };
            tokens.push(Token::Open {
                name,
                attrs,
                empty,
                line,
                col,
            });
        } else {
            let start = cur.pos;
            while matches!(cur.peek(), Some(c) if c != '<') {
                cur.bump();
            }
            let text = &src[start..cur.pos];
            if !text.trim().is_empty() {
                tokens.push(Token::Text {
                    text: text.trim().to_string(),
                    line,
                    col,
                });
            }
        }
    }
    Ok(tokens)
}

fn unescape(raw: &str) -> Option<String> {
    if !raw.contains('&') {
        return Some(raw.to_string());
    }
    let mut out = String::with_capacity(raw.len());
    let mut rest = raw;
    while let Some(i) = rest.find('&') {
        out.push_str(&rest[..i]);
        let tail = &rest[i..];
        let end = tail.find(';')?;
        out.push(match &tail[..=end] {
            "&amp;" => '&',
            "&lt;" => '<',
            "&gt;" => '>',
            "&quot;" => '"',
            "&apos;" => '\'',
            _ => return None,
        });
        rest = &tail[end + 1..];
    }
    out.push_str(rest);
    Some(out)
}

fn escape(value: &str) -> String {
    let mut out = String::with_capacity(value.len());
    for c in value.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            _ => out.push(c),
        }
    }
    out
}

// ---------------------------------------------------------------------------
// element tree

#[derive(Debug)]
enum Node {
    Element(Element),
    Text {
        text: String,
        line: usize,
        col: usize,
    },
}

#[derive(Debug)]
struct Element {
    name: String,
    attrs: Vec<(String, String)>,
    children: Vec<Node>,
    line: usize,
    col: usize,
}

impl Element {
    fn attr(&self, key: &str) -> Option<&str> {
        self.attrs
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    fn elements(&self) -> impl Iterator<Item = &Element> {
        self.children.iter().filter_map(|n| match n {
            Node::Element(e) => Some(e),
            Node::Text { .. } => None,
        })
    }

    fn invalid(&self, message: impl Into<String>) -> OwlError {
        OwlError::InvalidElement {
            element: self.name.clone(),
            line: self.line,
            col: self.col,
            message: message.into(),
        }
    }
}

fn build_tree(tokens: Vec<Token>) -> Result<Vec<Node>, OwlError> {
    let mut stack: Vec<Element> = Vec::new();
    let mut roots = Vec::new();
    let push = |stack: &mut Vec<Element>, roots: &mut Vec<Node>, node: Node| match stack.last_mut()
    {
        Some(parent) => parent.children.push(node),
        None => roots.push(node),
    };
    for token in tokens {
        match token {
            Token::Open {
                name,
                attrs,
                empty,
                line,
                col,
            } => {
                let el = Element {
                    name,
                    attrs,
                    children: Vec::new(),
                    line,
                    col,
                };
                if empty {
                    push(&mut stack, &mut roots, Node::Element(el));
                } else {
                    stack.push(el);
                }
            }
            Token::Close { name, line, col } => {
                let el = stack.pop().ok_or_else(|| OwlError::MalformedMarkup {
                    line,
                    col,
                    message: format!("</{name}> without matching open tag"),
                })?;
                if el.name != name {
                    return Err(OwlError::MalformedMarkup {
                        line,
                        col,
                        message: format!(
                            "</{name}> closes <{}> opened at {}:{}",
                            el.name, el.line, el.col
                        ),
                    });
                }
                push(&mut stack, &mut roots, Node::Element(el));
            }
            Token::Text { text, line, col } => {
                push(&mut stack, &mut roots, Node::Text { text, line, col })
            }
        }
    }
    if let Some(open) = stack.pop() {
        return Err(OwlError::MalformedMarkup {
            line: open.line,
            col: open.col,
            message: format!("<{}> is never closed", open.name),
        });
    }
    Ok(roots)
}

// ---------------------------------------------------------------------------
// element vocabulary

struct Reader {
    mode: ParseMode,
    doc: OwlDocument,
    warnings: Vec<ParseWarning>,
}

enum Item {
    Class(Iri),
    Property(Iri),
    Individual(Iri),
    Axiom(Axiom),
    ClassAssertion(Iri, Iri),
    PropertyAssertion(PropertyAssertion),
}

impl Reader {
    fn top_level(&mut self, nodes: &[Node]) -> Result<(), OwlError> {
        let envelope = nodes
            .iter()
            .filter(|n| matches!(n, Node::Element(e) if e.name == "Ontology"))
            .count();
        let elements = nodes
            .iter()
            .filter(|n| matches!(n, Node::Element(_)))
            .count();
        if envelope > 0 {
            if envelope != 1 || elements != 1 {
                let e = nodes
                    .iter()
                    .find_map(|n| match n {
                        Node::Element(e) => Some(e),
                        _ => None,
                    })
                    .expect("at least one element");
                return Err(OwlError::MalformedMarkup {
                    line: e.line,
                    col: e.col,
                    message: "an <Ontology> envelope must be the only top-level element".into(),
                });
            }
            for node in nodes {
                match node {
                    Node::Element(e) => self.items(&e.children)?,
                    Node::Text { .. } => self.item(node)?,
                }
            }
            Ok(())
        } else {
            self.items(nodes)
        }
    }

    fn items(&mut self, nodes: &[Node]) -> Result<(), OwlError> {
        for node in nodes {
            self.item(node)?;
        }
        Ok(())
    }

    fn item(&mut self, node: &Node) -> Result<(), OwlError> {
        let result = match node {
            Node::Text { text, line, col } => Err(OwlError::MalformedMarkup {
                line: *line,
                col: *col,
                message: format!("unexpected text `{text}`"),
            }),
            Node::Element(e) => read_element(e),
        };
        match result {
            Ok(item) => {
                self.apply(item);
                Ok(())
            }
            Err(error) if self.mode == ParseMode::Lenient => {
                let (line, col) = error.position();
                self.warnings.push(ParseWarning { line, col, error });
                Ok(())
            }
            Err(error) => Err(error),
        }
    }

    fn apply(&mut self, item: Item) {
        let doc = &mut self.doc;
        match item {
            Item::Class(iri) => {
                doc.ontology.declare_class(iri);
            }
            Item::Property(iri) => {
                doc.ontology.declare_property(iri);
            }
            Item::Individual(iri) => {
                doc.abox.declare_individual(iri);
            }
            Item::Axiom(axiom) => {
                doc.ontology.insert_axiom_unchecked(axiom);
            }
            Item::ClassAssertion(class, individual) => {
                doc.abox.assert_class(individual, class);
            }
            Item::PropertyAssertion(pa) => {
                doc.abox.assert_property(pa);
            }
        }
    }
}

fn read_element(e: &Element) -> Result<Item, OwlError> {
    match e.name.as_str() {
        "Declaration" => {
            let [child] = children::<1>(e)?;
            match child.name.as_str() {
                "Class" => Ok(Item::Class(iri_of(child)?)),
                "ObjectProperty" => Ok(Item::Property(iri_of(child)?)),
                "NamedIndividual" => Ok(Item::Individual(iri_of(child)?)),
                _ => Err(e.invalid(format!("cannot declare <{}>", child.name))),
            }
        }
        "NamedIndividual" => {
            leaf(e)?;
            Ok(Item::Individual(iri_of(e)?))
        }
        "SubClassOf" => {
            let [sub, sup] = children::<2>(e)?;
            Ok(Item::Axiom(Axiom::sub_class_of(
                entity(e, sub, "Class")?,
                entity(e, sup, "Class")?,
            )))
        }
        "FunctionalObjectProperty" => {
            let [p] = children::<1>(e)?;
            Ok(Item::Axiom(Axiom::functional(entity(
                e,
                p,
                "ObjectProperty",
            )?)))
        }
        "ObjectPropertyDomain" | "ObjectPropertyRange" => {
            let [p, c] = children::<2>(e)?;
            let p = entity(e, p, "ObjectProperty")?;
            let c = entity(e, c, "Class")?;
            Ok(Item::Axiom(if e.name == "ObjectPropertyDomain" {
                Axiom::domain(p, c)
            } else {
                Axiom::range(p, c)
            }))
        }
        "DisjointClasses" => {
            no_text(e)?;
            let classes = e
                .elements()
                .map(|c| entity(e, c, "Class"))
                .collect::<Result<Vec<_>, _>>()?;
            let axiom = Axiom::disjoint(classes);
            match &axiom {
                Axiom::DisjointClasses { classes } if classes.len() >= 2 => Ok(Item::Axiom(axiom)),
                _ => Err(e.invalid("needs at least two distinct classes")),
            }
        }
        "ClassAssertion" => {
            let [c, i] = children::<2>(e)?;
            Ok(Item::ClassAssertion(
                entity(e, c, "Class")?,
                entity(e, i, "NamedIndividual")?,
            ))
        }
        "ObjectPropertyAssertion" => {
            let [p, s, t] = children::<3>(e)?;
            Ok(Item::PropertyAssertion(PropertyAssertion::new(
                entity(e, s, "NamedIndividual")?,
                entity(e, p, "ObjectProperty")?,
                entity(e, t, "NamedIndividual")?,
            )))
        }
        _ => Err(OwlError::UnsupportedElement {
            name: e.name.clone(),
            line: e.line,
            col: e.col,
        }),
    }
}

fn no_text(e: &Element) -> Result<(), OwlError> {
    match e.children.iter().find_map(|n| match n {
        Node::Text { text, .. } => Some(text),
        Node::Element(_) => None,
    }) {
        Some(text) => Err(e.invalid(format!("unexpected text `{text}`"))),
        None => Ok(()),
    }
}

fn leaf(e: &Element) -> Result<(), OwlError> {
    if e.children.is_empty() {
        Ok(())
    } else {
        Err(e.invalid("expected an empty element"))
    }
}

fn children<const N: usize>(e: &Element) -> Result<[&Element; N], OwlError> {
    no_text(e)?;
    let found: Vec<&Element> = e.elements().collect();
    found.try_into().map_err(|v: Vec<&Element>| {
        e.invalid(format!("expected {N} child elements, found {}", v.len()))
    })
}

fn entity(parent: &Element, child: &Element, expected: &str) -> Result<Iri, OwlError> {
    if child.name != expected {
        return Err(parent.invalid(format!("expected <{expected}>, found <{}>", child.name)));
    }
    leaf(child)?;
    iri_of(child)
}

fn iri_of(e: &Element) -> Result<Iri, OwlError> {
    let raw = e.attr("IRI").ok_or_else(|| OwlError::MissingIriAttribute {
        element: e.name.clone(),
        line: e.line,
        col: e.col,
    })?;
    Iri::new(raw).map_err(|err| e.invalid(err.to_string()))
}

// ---------------------------------------------------------------------------
// writer

/// Canonical form: UTF-8, `\n` line endings, two-space indentation, one
/// element per line, inside an `<Ontology>` envelope. Declarations come first
/// (classes, object properties, individuals; each sorted), then axioms in
/// stored order, then class and property assertions in sorted order.
pub fn serialize_owl_xml(doc: &OwlDocument) -> String {
    let mut w = Writer::default();
    w.line(0, "<?xml version=\"1.0\"?>");
    if doc.ontology.is_empty() && doc.abox.is_empty() {
        w.line(0, &format!("<Ontology xmlns=\"{OWL_NAMESPACE}\"/>"));
        return w.out;
    }
    w.line(0, &format!("<Ontology xmlns=\"{OWL_NAMESPACE}\">"));
    for c in doc.ontology.classes() {
        w.wrap(1, "Declaration", &[("Class", c)]);
    }
    for p in doc.ontology.properties() {
        w.wrap(1, "Declaration", &[("ObjectProperty", p)]);
    }
    for i in doc.abox.individuals() {
        w.wrap(1, "Declaration", &[("NamedIndividual", i)]);
    }
    for axiom in doc.ontology.axioms() {
        match axiom {
            Axiom::SubClassOf { sub, sup } => {
                w.wrap(1, "SubClassOf", &[("Class", sub), ("Class", sup)])
            }
            Axiom::FunctionalObjectProperty { property } => w.wrap(
                1,
                "FunctionalObjectProperty",
                &[("ObjectProperty", property)],
            ),
            Axiom::ObjectPropertyDomain { property, class } => w.wrap(
                1,
                "ObjectPropertyDomain",
                &[("ObjectProperty", property), ("Class", class)],
            ),
            Axiom::ObjectPropertyRange { property, class } => w.wrap(
                1,
                "ObjectPropertyRange",
                &[("ObjectProperty", property), ("Class", class)],
            ),
            Axiom::DisjointClasses { classes } => {
                let members: Vec<(&str, &Iri)> = classes.iter().map(|c| ("Class", c)).collect();
                w.wrap(1, "DisjointClasses", &members)
            }
        }
    }
    for ca in doc.abox.class_assertions() {
        w.wrap(
            1,
            "ClassAssertion",
            &[("Class", &ca.class), ("NamedIndividual", &ca.individual)],
        );
    }
    for pa in doc.abox.property_assertions() {
        w.wrap(
            1,
            "ObjectPropertyAssertion",
            &[
                ("ObjectProperty", &pa.property),
                ("NamedIndividual", &pa.subject),
                ("NamedIndividual", &pa.target),
            ],
        );
    }
    w.line(0, "</Ontology>");
    w.out
}

#[derive(Default)]
struct Writer {
    out: String,
}

impl Writer {
    fn line(&mut self, depth: usize, text: &str) {
        for _ in 0..depth {
            self.out.push_str("  ");
        }
        self.out.push_str(text);
        self.out.push('\n');
    }

    fn wrap(&mut self, depth: usize, name: &str, children: &[(&str, &Iri)]) {
        self.line(depth, &format!("<{name}>"));
        for (tag, iri) in children {
            let mut s = String::new();
            let _ = write!(s, "<{tag} IRI=\"{}\"/>", escape(iri.as_str()));
            self.line(depth + 1, &s);
        }
        self.line(depth, &format!("</{name}>"));
    }
}
