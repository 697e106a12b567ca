//! Topology-only Newick reading.
//!
//! Whitespace and `[...]` comments are skipped, branch lengths are checked to
//! be numbers and then dropped, internal node names are dropped. The parser
//! keeps its own stack so that deep caterpillars do not recurse.

use std::collections::HashSet;

use super::rooted::{RootedBuilder, RootedTree};
use super::unrooted::UnrootedTree;
use super::NodeId;
use crate::error::TreeError;
use crate::taxon::Taxon;

/// Result of [`parse_newick`] / [`parse_auto`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParsedTree {
    Rooted(RootedTree),
    Unrooted(UnrootedTree),
}

impl ParsedTree {
    pub fn leaf_count(&self) -> usize {
        match self {
            ParsedTree::Rooted(t) => t.leaf_count(),
            ParsedTree::Unrooted(t) => t.leaf_count(),
        }
    }

    /// The unrooted view: rooted trees are de-rooted, single leaves kept.
    pub fn into_unrooted(self) -> Result<UnrootedTree, TreeError> {
        match self {
            ParsedTree::Unrooted(t) => Ok(t),
            ParsedTree::Rooted(t) if t.leaf_count() == 1 => Ok(UnrootedTree::single(t.taxon_at(0).clone())),
            ParsedTree::Rooted(t) => t.deroot(),
        }
    }
}

struct Raw {
    children: Vec<Vec<usize>>,
    labels: Vec<Option<String>>,
}

impl Raw {
    fn push(&mut self, label: Option<String>) -> usize {
        self.children.push(Vec::new());
        self.labels.push(label);
        self.children.len() - 1
    }

    fn leaf_count(&self) -> usize {
        self.children.iter().filter(|c| c.is_empty()).count()
    }
}

fn is_meta(c: char) -> bool {
    matches!(c, '(' | ')' | ',' | ';' | ':' | '[' | ']') || c.is_whitespace()
}

struct Lexer<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn err(&self, msg: impl Into<String>) -> TreeError {
        TreeError::Syntax { pos: self.pos, msg: msg.into() }
    }

    fn skip_blank(&mut self) -> Result<(), TreeError> {
        loop {
            let rest = &self.text[self.pos..];
            let Some(c) = rest.chars().next() else { return Ok(()) };
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else if c == '[' {
                match rest.find(']') {
                    Some(end) => self.pos += end + 1,
                    None => return Err(self.err("unterminated comment")),
                }
            } else {
                return Ok(());
            }
        }
    }

    fn peek(&mut self) -> Result<Option<char>, TreeError> {
        self.skip_blank()?;
        Ok(self.text[self.pos..].chars().next())
    }

    fn bump(&mut self) {
        if let Some(c) = self.text[self.pos..].chars().next() {
            self.pos += c.len_utf8();
        }
    }

    fn word(&mut self) -> Result<Option<&'a str>, TreeError> {
        self.skip_blank()?;
        let rest = &self.text[self.pos..];
        let len = rest.find(is_meta).unwrap_or(rest.len());
        if len == 0 {
            return Ok(None);
        }
        self.pos += len;
        Ok(Some(&rest[..len]))
    }

    /// Optional `:length`.
    fn branch_length(&mut self) -> Result<(), TreeError> {
        if self.peek()? == Some(':') {
            self.bump();
            let start = self.pos;
            match self.word()? {
                Some(w) if w.parse::<f64>().is_ok() => Ok(()),
                _ => {
                    self.pos = start;
                    Err(self.err("expected a branch length after ':'"))
                }
            }
        } else {
            Ok(())
        }
    }
}

fn parse_raw(text: &str) -> Result<(Raw, usize), TreeError> {
    let mut lx = Lexer { text, pos: 0 };
    let mut raw = Raw { children: Vec::new(), labels: Vec::new() };
    let mut open: Vec<usize> = Vec::new();
    let mut root: Option<usize> = None;

    // Each pass reads one node (leaf or parenthesised group opening).
    'node: loop {
        match lx.peek()? {
            Some('(') => {
                lx.bump();
                let v = raw.push(None);
                match open.last() {
                    Some(&p) => raw.children[p].push(v),
                    None => root = Some(v),
                }
                open.push(v);
                continue 'node;
            }
            Some(_) => {
                let label = lx.word()?.ok_or_else(|| lx.err("expected a taxon label"))?;
                let v = raw.push(Some(label.to_string()));
                match open.last() {
                    Some(&p) => raw.children[p].push(v),
                    None => root = Some(v),
                }
                lx.branch_length()?;
            }
            None => return Err(lx.err("unexpected end of input")),
        }
        // After a node: close groups, then either a sibling or the end.
        loop {
            match lx.peek()? {
                Some(',') if !open.is_empty() => {
                    lx.bump();
                    continue 'node;
                }
                Some(')') => {
                    if open.pop().is_none() {
                        return Err(lx.err("unbalanced ')'"));
                    }
                    lx.bump();
                    // internal node name, ignored
                    lx.word()?;
                    lx.branch_length()?;
                }
                Some(';') if open.is_empty() => {
                    lx.bump();
                    if lx.peek()?.is_some() {
                        return Err(lx.err("trailing input after ';'"));
                    }
                    break 'node;
                }
                Some(';') | None if !open.is_empty() => {
                    return Err(lx.err("unbalanced parenthesis: missing ')'"));
                }
                None => return Err(lx.err("missing terminating ';'")),
                Some(c) => return Err(lx.err(format!("unexpected character {c:?}"))),
            }
        }
    }
    let root = root.expect("a node was read");
    let mut seen = HashSet::new();
    for label in raw.labels.iter().flatten() {
        if !seen.insert(label.as_str()) {
            return Err(TreeError::DuplicateLabel(Taxon::new(label)));
        }
    }
    for (v, kids) in raw.children.iter().enumerate() {
        if kids.is_empty() && raw.labels[v].is_none() {
            return Err(TreeError::Malformed("empty group".into()));
        }
        if kids.len() == 1 {
            return Err(TreeError::Degree("a group has a single child".into()));
        }
    }
    Ok((raw, root))
}

fn postorder(raw: &Raw, root: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(raw.children.len());
    let mut stack = vec![root];
    while let Some(v) = stack.pop() {
        out.push(v);
        stack.extend(raw.children[v].iter().copied());
    }
    out.reverse();
    out
}

fn leaf_label(raw: &Raw, v: usize) -> Taxon {
    Taxon::new(raw.labels[v].as_deref().expect("leaves are labelled"))
}

fn build_rooted(raw: &Raw, root: usize) -> Result<RootedTree, TreeError> {
    let mut b = RootedBuilder::with_capacity(raw.children.len());
    let mut image: Vec<Option<NodeId>> = vec![None; raw.children.len()];
    for v in postorder(raw, root) {
        let kids = &raw.children[v];
        image[v] = Some(match kids.len() {
            0 => b.leaf(leaf_label(raw, v)),
            2 => b.join(image[kids[0]].unwrap(), image[kids[1]].unwrap()),
            k => return Err(TreeError::Degree(format!("rooted node with {k} children"))),
        });
    }
    b.finish(image[root].unwrap())
}

/// Reads a rooted tree; child order is the textual order.
pub fn parse_rooted(text: &str) -> Result<RootedTree, TreeError> {
    let (raw, root) = parse_raw(text)?;
    build_rooted(&raw, root)
}

/// Reads an unrooted tree. The top-level group must have three children,
/// except for trees with at most three leaves where two are accepted.
pub fn parse_unrooted(text: &str) -> Result<UnrootedTree, TreeError> {
    let (raw, root) = parse_raw(text)?;
    let top = raw.children[root].len();
    match top {
        0 => return Ok(UnrootedTree::single(leaf_label(&raw, root))),
        3 => {}
        2 if raw.leaf_count() <= 3 => return build_rooted(&raw, root)?.deroot(),
        k => return Err(TreeError::Degree(format!("unrooted top-level node with {k} children"))),
    }
    let mut edges = Vec::with_capacity(raw.children.len());
    for (v, kids) in raw.children.iter().enumerate() {
        if v != root && !kids.is_empty() && kids.len() != 2 {
            return Err(TreeError::Degree(format!("internal node with {} children", kids.len())));
        }
        edges.extend(kids.iter().map(|&c| (v, c)));
    }
    let labels = (0..raw.children.len())
        .map(|v| raw.children[v].is_empty().then(|| leaf_label(&raw, v)))
        .collect();
    UnrootedTree::from_edges(labels, &edges)
}

/// Reads a tree with the requested rootedness.
pub fn parse_newick(text: &str, rooted: bool) -> Result<ParsedTree, TreeError> {
    if rooted {
        parse_rooted(text).map(ParsedTree::Rooted)
    } else {
        parse_unrooted(text).map(ParsedTree::Unrooted)
    }
}

/// Rootedness from the top-level arity: three children means unrooted,
/// anything else is read as rooted.
pub fn parse_auto(text: &str) -> Result<ParsedTree, TreeError> {
    let (raw, root) = parse_raw(text)?;
    if raw.children[root].len() == 3 {
        parse_unrooted(text).map(ParsedTree::Unrooted)
    } else {
        build_rooted(&raw, root).map(ParsedTree::Rooted)
    }
}
