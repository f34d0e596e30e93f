use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use computon_core::compose::Span;
use computon_core::computon::{validate_computon, Colour, InEdge, OutEdge, RawComputon};
use computon_core::morphism::{validate_morphism, MorphismData};
use computon_core::semantics::make_marking;
use computon_core::{Computon, ComputonMorphism, Id};

use super::lexer::{lex, Pos, Spanned, Tok};
use super::{Declaration, Diagnostic, Document, Item, ParseError};

/// A name with where it was written.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Name {
    pub text: String,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeDecl {
    pub name: Option<Name>,
    pub from: Name,
    pub to: Name,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ComputonBlock {
    pub colours: Vec<(u64, Pos)>,
    pub ports: Vec<(Name, u64)>,
    pub units: Vec<Name>,
    pub edges: Vec<EdgeDecl>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorphismBlock {
    pub source: Name,
    pub target: Name,
    pub ports: Vec<(Name, Name)>,
    pub units: Vec<(Name, Name)>,
    pub edges: Vec<(Name, Name)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanBlock {
    pub apex: Name,
    pub left: Name,
    pub right: Name,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkingBlock {
    pub on: Name,
    pub counts: Vec<(Name, u64)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Block {
    Computon(Name, ComputonBlock),
    Morphism(Name, MorphismBlock),
    Span(Name, SpanBlock),
    Marking(Name, MarkingBlock),
}

impl Block {
    pub fn name(&self) -> &Name {
        match self {
            Block::Computon(n, _) | Block::Morphism(n, _) | Block::Span(n, _) | Block::Marking(n, _) => n,
        }
    }
}

/// A document that follows the grammar, before any name is resolved.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Ast {
    pub blocks: Vec<Block>,
}

struct Parser {
    toks: Vec<Spanned>,
    at: usize,
    end: Pos,
}

type PResult<T> = Result<T, Diagnostic>;

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.tok)
    }

    fn pos(&self) -> Pos {
        self.toks.get(self.at).map_or(self.end, |t| t.pos)
    }

    fn unexpected(&self, wanted: &str) -> Diagnostic {
        match self.peek() {
            Some(t) => Diagnostic::syntax(self.pos(), format!("expected {wanted}, found {t}")),
            None => Diagnostic::syntax(self.pos(), format!("expected {wanted}, found end of input")),
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok) -> PResult<()> {
        if self.eat(&tok) {
            Ok(())
        } else {
            Err(self.unexpected(&tok.to_string()))
        }
    }

    fn name(&mut self) -> PResult<Name> {
        let pos = self.pos();
        match self.peek() {
            Some(Tok::Name(s) | Tok::Quoted(s)) => {
                let text = s.clone();
                self.at += 1;
                Ok(Name { text, pos })
            }
            _ => Err(self.unexpected("a name")),
        }
    }

    fn nat(&mut self) -> PResult<u64> {
        match self.peek() {
            Some(Tok::Nat(n)) => {
                let n = *n;
                self.at += 1;
                Ok(n)
            }
            _ => Err(self.unexpected("a number")),
        }
    }

    fn keyword(&mut self, word: &str) -> PResult<Pos> {
        let pos = self.pos();
        match self.peek() {
            Some(Tok::Name(s)) if s == word => {
                self.at += 1;
                Ok(pos)
            }
            _ => Err(self.unexpected(&format!("`{word}`"))),
        }
    }

    /// `item ("," item)* ";"`, or just `";"`.
    fn list<T>(&mut self, mut item: impl FnMut(&mut Self) -> PResult<T>) -> PResult<Vec<T>> {
        let mut out = Vec::new();
        if self.eat(&Tok::Semi) {
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            if self.eat(&Tok::Semi) {
                return Ok(out);
            }
            if !self.eat(&Tok::Comma) {
                return Err(self.unexpected("`,` or `;`"));
            }
        }
    }

    /// Sections `label: list` inside braces, each at most once.
    fn sections(&mut self, allowed: &[&str], mut section: impl FnMut(&mut Self, &str) -> PResult<()>) -> PResult<()> {
        self.expect(Tok::LBrace)?;
        let mut seen = BTreeSet::new();
        while !self.eat(&Tok::RBrace) {
            let pos = self.pos();
            let label = match self.peek() {
                Some(Tok::Name(s)) if allowed.contains(&s.as_str()) => s.clone(),
                _ => {
                    let wanted = allowed.iter().map(|a| format!("`{a}:`")).collect::<Vec<_>>().join(", ");
                    return Err(self.unexpected(&format!("one of {wanted} or `}}`")));
                }
            };
            self.at += 1;
            if !seen.insert(label.clone()) {
                return Err(Diagnostic::syntax(pos, format!("section `{label}` appears twice")));
            }
            self.expect(Tok::Colon)?;
            section(self, &label)?;
        }
        Ok(())
    }

    fn edge(&mut self) -> PResult<EdgeDecl> {
        let first = self.name()?;
        let (name, from) = if self.eat(&Tok::Colon) {
            (Some(first), self.name()?)
        } else {
            (None, first)
        };
        self.expect(Tok::Arrow)?;
        let to = self.name()?;
        Ok(EdgeDecl { name, from, to })
    }

    fn maps_to(&mut self) -> PResult<(Name, Name)> {
        let a = self.name()?;
        self.expect(Tok::FatArrow)?;
        Ok((a, self.name()?))
    }

    fn computon(&mut self) -> PResult<ComputonBlock> {
        let mut b = ComputonBlock::default();
        self.sections(&["colours", "ports", "units", "edges"], |p, label| {
            match label {
                "colours" => {
                    b.colours = p.list(|p| {
                        let pos = p.pos();
                        Ok((p.nat()?, pos))
                    })?
                }
                "ports" => {
                    b.ports = p.list(|p| {
                        let n = p.name()?;
                        p.expect(Tok::Colon)?;
                        Ok((n, p.nat()?))
                    })?
                }
                "units" => b.units = p.list(Self::name)?,
                _ => b.edges = p.list(Self::edge)?,
            }
            Ok(())
        })?;
        Ok(b)
    }

    fn morphism(&mut self) -> PResult<MorphismBlock> {
        self.expect(Tok::Colon)?;
        let source = self.name()?;
        self.expect(Tok::Arrow)?;
        let target = self.name()?;
        let mut b = MorphismBlock {
            source,
            target,
            ports: Vec::new(),
            units: Vec::new(),
            edges: Vec::new(),
        };
        self.sections(&["ports", "units", "edges"], |p, label| {
            let maps = p.list(Self::maps_to)?;
            match label {
                "ports" => b.ports = maps,
                "units" => b.units = maps,
                _ => b.edges = maps,
            }
            Ok(())
        })?;
        Ok(b)
    }

    fn span(&mut self) -> PResult<SpanBlock> {
        let mut parts: BTreeMap<String, Name> = BTreeMap::new();
        let open = self.pos();
        self.sections(&["apex", "left", "right"], |p, label| {
            let n = p.name()?;
            p.expect(Tok::Semi)?;
            parts.insert(label.into(), n);
            Ok(())
        })?;
        let mut take = |k: &str| {
            parts
                .remove(k)
                .ok_or_else(|| Diagnostic::syntax(open, format!("span needs a `{k}:` section")))
        };
        Ok(SpanBlock {
            apex: take("apex")?,
            left: take("left")?,
            right: take("right")?,
        })
    }

    fn marking(&mut self) -> PResult<MarkingBlock> {
        self.keyword("on")?;
        let on = self.name()?;
        self.expect(Tok::LBrace)?;
        let counts = if self.eat(&Tok::RBrace) {
            Vec::new()
        } else {
            let counts = self.list(|p| {
                let n = p.name()?;
                p.expect(Tok::Equals)?;
                Ok((n, p.nat()?))
            })?;
            self.expect(Tok::RBrace)?;
            counts
        };
        Ok(MarkingBlock { on, counts })
    }

    fn document(&mut self) -> PResult<Ast> {
        let mut blocks = Vec::new();
        while self.peek().is_some() {
            let kw = match self.peek() {
                Some(Tok::Name(s)) if matches!(s.as_str(), "computon" | "morphism" | "span" | "marking") => s.clone(),
                _ => return Err(self.unexpected("`computon`, `morphism`, `span` or `marking`")),
            };
            self.at += 1;
            let name = self.name()?;
            blocks.push(match kw.as_str() {
                "computon" => Block::Computon(name, self.computon()?),
                "morphism" => Block::Morphism(name, self.morphism()?),
                "span" => Block::Span(name, self.span()?),
                _ => Block::Marking(name, self.marking()?),
            });
        }
        if blocks.is_empty() {
            return Err(Diagnostic::syntax(self.end, "empty document"));
        }
        Ok(Ast { blocks })
    }
}

/// Checks the grammar only.
pub fn parse_syntax(text: &str) -> Result<Ast, Diagnostic> {
    let toks = lex(text)?;
    let lines: Vec<&str> = text.split('\n').collect();
    let end = Pos {
        line: lines.len(),
        column: lines.last().map_or(0, |l| l.chars().count()) + 1,
    };
    Parser { toks, at: 0, end }.document()
}

fn fresh(prefix: char, used: &BTreeSet<String>, next: &mut usize) -> String {
    loop {
        *next += 1;
        let id = format!("{prefix}{next}");
        if !used.contains(&id) {
            return id;
        }
    }
}

impl ComputonBlock {
    /// The raw structure, with edge directions inferred and unnamed edges
    /// named. Fails only when an edge cannot be placed.
    pub fn to_raw(&self) -> Result<RawComputon, Diagnostic> {
        let ports: BTreeSet<&str> = self.ports.iter().map(|(n, _)| n.text.as_str()).collect();
        let units: BTreeSet<&str> = self.units.iter().map(|n| n.text.as_str()).collect();
        let named: BTreeSet<String> = self
            .edges
            .iter()
            .filter_map(|e| e.name.as_ref().map(|n| n.text.clone()))
            .collect();
        let mut raw = RawComputon {
            units: self.units.iter().map(|n| n.text.clone()).collect(),
            ports: self
                .ports
                .iter()
                .map(|(n, c)| (n.text.clone(), Colour(*c as u32)))
                .collect(),
            colours: self.colours.iter().map(|(c, _)| Colour(*c as u32)).collect(),
            ..RawComputon::default()
        };
        let too_large = self
            .colours
            .iter()
            .map(|(c, pos)| (*c, *pos))
            .chain(self.ports.iter().map(|(n, c)| (*c, n.pos)));
        for (c, pos) in too_large {
            if c > u64::from(u32::MAX) {
                return Err(Diagnostic::invalid(pos, format!("colour {c} is too large")));
            }
        }
        let (mut next_e, mut next_f) = (0, 0);
        for e in &self.edges {
            let (from, to) = (e.from.text.as_str(), e.to.text.as_str());
            let known = |n: &Name| ports.contains(n.text.as_str()) || units.contains(n.text.as_str());
            for n in [&e.from, &e.to] {
                if !known(n) {
                    return Err(Diagnostic::reference(
                        n.pos,
                        format!("edge endpoint `{}` is neither a port nor a unit", n.text),
                    ));
                }
            }
            let is_in = ports.contains(from) && units.contains(to);
            let is_out = units.contains(from) && ports.contains(to);
            match (is_in, is_out) {
                (true, true) => {
                    return Err(Diagnostic::reference(
                        e.from.pos,
                        "edge direction is ambiguous: both ends name a port and a unit",
                    ))
                }
                (false, false) => return Err(Diagnostic::invalid(e.from.pos, "edge must connect a port and a unit")),
                (true, false) => {
                    let id = e
                        .name
                        .as_ref()
                        .map_or_else(|| fresh('f', &named, &mut next_f), |n| n.text.clone());
                    raw.in_edges.push((
                        id,
                        InEdge {
                            port: from.into(),
                            unit: to.into(),
                        },
                    ));
                }
                (false, true) => {
                    let id = e
                        .name
                        .as_ref()
                        .map_or_else(|| fresh('e', &named, &mut next_e), |n| n.text.clone());
                    raw.out_edges.push((
                        id,
                        OutEdge {
                            unit: from.into(),
                            port: to.into(),
                        },
                    ));
                }
            }
        }
        Ok(raw)
    }
}

impl MorphismBlock {
    /// Builds the component maps against the given source and target.
    pub fn to_data(&self, source: Arc<Computon>, target: Arc<Computon>) -> Result<MorphismData, Diagnostic> {
        let mut d = MorphismData::between(source.clone(), target);
        let pairs =
            |v: &[(Name, Name)]| -> Vec<(Id, Id)> { v.iter().map(|(a, b)| (a.text.clone(), b.text.clone())).collect() };
        d.ports = pairs(&self.ports).into_iter().collect();
        d.units = pairs(&self.units).into_iter().collect();
        for (a, b) in &self.edges {
            let (out, inn) = (
                source.out_edges().contains_key(&a.text),
                source.in_edges().contains_key(&a.text),
            );
            if out && inn {
                return Err(Diagnostic::reference(
                    a.pos,
                    format!("`{}` names both an input and an output edge", a.text),
                ));
            }
            let map = if inn { &mut d.in_edges } else { &mut d.out_edges };
            map.insert(a.text.clone(), b.text.clone());
        }
        for (list, what) in [(&self.ports, "port"), (&self.units, "unit"), (&self.edges, "edge")] {
            let mut seen = BTreeSet::new();
            for (a, _) in list {
                if !seen.insert(&a.text) {
                    return Err(Diagnostic::invalid(
                        a.pos,
                        format!("{what} `{}` is mapped twice", a.text),
                    ));
                }
            }
        }
        Ok(d)
    }
}

fn resolve(ast: &Ast) -> Result<Document, ParseError> {
    let mut doc = Document::new();
    let mut diagnostics = Vec::new();
    let mut failed: BTreeSet<String> = BTreeSet::new();
    for block in &ast.blocks {
        let name = block.name();
        if doc.get(&name.text).is_some() || failed.contains(&name.text) {
            diagnostics.push(Diagnostic::reference(
                name.pos,
                format!("`{}` is already declared", name.text),
            ));
            continue;
        }
        match resolve_block(&doc, block, &failed) {
            Ok(Some(item)) => doc.decls.push(Declaration {
                name: name.text.clone(),
                pos: name.pos,
                item,
            }),
            Ok(None) => {
                failed.insert(name.text.clone());
            }
            Err(d) => {
                diagnostics.push(d);
                failed.insert(name.text.clone());
            }
        }
    }
    if diagnostics.is_empty() {
        Ok(doc)
    } else {
        Err(ParseError { diagnostics })
    }
}

fn lookup_computon(doc: &Document, n: &Name, failed: &BTreeSet<String>) -> Result<Option<Arc<Computon>>, Diagnostic> {
    match doc.get(&n.text).map(|d| &d.item) {
        Some(Item::Computon(c)) => Ok(Some(c.clone())),
        Some(other) => Err(Diagnostic::reference(
            n.pos,
            format!("`{}` is a {}, not a computon", n.text, other.kind()),
        )),
        None if failed.contains(&n.text) => Ok(None),
        None => Err(Diagnostic::reference(
            n.pos,
            format!("no computon named `{}` declared before this point", n.text),
        )),
    }
}

fn lookup_morphism(
    doc: &Document,
    n: &Name,
    failed: &BTreeSet<String>,
) -> Result<Option<ComputonMorphism>, Diagnostic> {
    match doc.get(&n.text).map(|d| &d.item) {
        Some(Item::Morphism { value, .. }) => Ok(Some(value.clone())),
        Some(other) => Err(Diagnostic::reference(
            n.pos,
            format!("`{}` is a {}, not a morphism", n.text, other.kind()),
        )),
        None if failed.contains(&n.text) => Ok(None),
        None => Err(Diagnostic::reference(
            n.pos,
            format!("no morphism named `{}` declared before this point", n.text),
        )),
    }
}

// Ok(None) means the block leans on an earlier block that already failed,
// so a second diagnostic would only repeat the first.
fn resolve_block(doc: &Document, block: &Block, failed: &BTreeSet<String>) -> Result<Option<Item>, Diagnostic> {
    match block {
        Block::Computon(name, b) => {
            let raw = b.to_raw()?;
            let report = validate_computon(&raw)
                .map_err(|e| Diagnostic::invalid(name.pos, format!("computon `{}`: {e}", name.text)))?;
            if !report.is_ok() {
                return Err(Diagnostic::invalid(
                    name.pos,
                    format!("computon `{}` is invalid: {report}", name.text),
                ));
            }
            Ok(Some(Item::Computon(Arc::new(
                Computon::new(raw).expect("validated above"),
            ))))
        }
        Block::Morphism(name, b) => {
            let (Some(src), Some(tgt)) = (
                lookup_computon(doc, &b.source, failed)?,
                lookup_computon(doc, &b.target, failed)?,
            ) else {
                return Ok(None);
            };
            let data = b.to_data(src, tgt)?;
            let report = validate_morphism(&data)
                .map_err(|e| Diagnostic::invalid(name.pos, format!("morphism `{}`: {e}", name.text)))?;
            if !report.is_ok() {
                return Err(Diagnostic::invalid(
                    name.pos,
                    format!("morphism `{}` is invalid: {report}", name.text),
                ));
            }
            Ok(Some(Item::Morphism {
                source: b.source.text.clone(),
                target: b.target.text.clone(),
                value: ComputonMorphism::new(data).expect("validated above"),
            }))
        }
        Block::Span(name, b) => {
            let apex = lookup_computon(doc, &b.apex, failed)?;
            let (l, r) = (
                lookup_morphism(doc, &b.left, failed)?,
                lookup_morphism(doc, &b.right, failed)?,
            );
            let (Some(apex), Some(l), Some(r)) = (apex, l, r) else {
                return Ok(None);
            };
            for (leg, n) in [(&l, &b.left), (&r, &b.right)] {
                if leg.source() != &apex {
                    return Err(Diagnostic::reference(
                        n.pos,
                        format!("morphism `{}` does not start at apex `{}`", n.text, b.apex.text),
                    ));
                }
            }
            let value = Span::new(l, r).map_err(|e| Diagnostic::invalid(name.pos, e.to_string()))?;
            Ok(Some(Item::Span {
                apex: b.apex.text.clone(),
                left: b.left.text.clone(),
                right: b.right.text.clone(),
                value,
            }))
        }
        Block::Marking(_, b) => {
            let Some(c) = lookup_computon(doc, &b.on, failed)? else {
                return Ok(None);
            };
            let mut counts = BTreeMap::new();
            for (p, n) in &b.counts {
                if !c.has_port(&p.text) {
                    return Err(Diagnostic::reference(
                        p.pos,
                        format!("computon `{}` has no port `{}`", b.on.text, p.text),
                    ));
                }
                if counts.insert(p.text.clone(), *n as usize).is_some() {
                    return Err(Diagnostic::invalid(p.pos, format!("port `{}` is marked twice", p.text)));
                }
            }
            counts.retain(|_, n| *n > 0);
            let list: Vec<(Id, usize)> = counts.iter().map(|(p, n)| (p.clone(), *n)).collect();
            let value = make_marking(&c, &list).expect("ports checked above");
            Ok(Some(Item::Marking {
                on: b.on.text.clone(),
                counts,
                value,
            }))
        }
    }
}

/// Parses and resolves a document, rejecting invalid computons, morphisms,
/// spans and markings.
pub fn parse(text: &str) -> Result<Document, ParseError> {
    let ast = parse_syntax(text).map_err(|d| ParseError { diagnostics: vec![d] })?;
    resolve(&ast)
}
