//! Text formats: edge lists, Newick trees and linkage CSV.

use std::collections::HashSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::dendro::{DendroError, LinkageTable, Merge};
use crate::rational::{ParseRationalError, Rational};
use crate::tree::{build_tree, NodeId, RootedTree, TreeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    TreeAt {
        line: usize,
        #[source]
        source: TreeError,
    },
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error("no branch length on node `{0}`")]
    MissingBranchLength(String),
    #[error("unbalanced parentheses at byte {0}")]
    UnbalancedParens(usize),
    #[error("byte {pos}: {message}")]
    Newick { pos: usize, message: String },
    #[error("bad branch length `{text}`: {source}")]
    BranchLength {
        text: String,
        #[source]
        source: ParseRationalError,
    },
    #[error("linkage header must be `left,right,height,size`, found `{0}`")]
    LinkageHeader(String),
    #[error(transparent)]
    Linkage(#[from] DendroError),
}

impl ParseError {
    pub fn line(&self) -> Option<usize> {
        match self {
            ParseError::Syntax { line, .. } | ParseError::TreeAt { line, .. } => Some(*line),
            _ => None,
        }
    }
}

/// Parses `parent child weight` lines. Blank lines and lines starting with
/// `#` are skipped; fields are separated by tabs or spaces.
pub fn parse_edgelist(text: &str) -> Result<RootedTree, ParseError> {
    let mut edges: Vec<(&str, &str, &str)> = Vec::new();
    let mut lines: Vec<usize> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields.as_slice() {
            [p, c, w] => {
                edges.push((p, c, w));
                lines.push(i + 1);
            }
            _ => {
                return Err(ParseError::Syntax {
                    line: i + 1,
                    message: format!("expected `parent child weight`, found {} field(s)", fields.len()),
                })
            }
        }
    }
    build_tree(&edges).map_err(|source| match source.edge_index() {
        Some(k) => ParseError::TreeAt { line: lines[k], source },
        None => ParseError::Tree(source),
    })
}

/// Edge-list text in preorder; parses back to an isomorphic tree.
pub fn write_edgelist(tree: &RootedTree) -> String {
    let mut out = String::new();
    for v in tree.preorder() {
        for &c in tree.children(v) {
            let w = tree.weight(crate::tree::EdgeId::from_head(c));
            let _ = writeln!(out, "{}\t{}\t{}", tree.label(v), tree.label(c), w);
        }
    }
    out
}

#[derive(Default)]
struct NewickNode {
    label: Option<String>,
    length: Option<Rational>,
    parent: Option<usize>,
}

const NEWICK_DELIMS: &[u8] = b"(),:;[";

/// Parses a Newick tree such as `((X:3,Y:3)a:1,Z:2)R;`.
///
/// Every non-root node needs a branch length; the root's is ignored.
/// Unlabelled nodes are named `node1`, `node2`, ... skipping names already
/// in use. `[...]` comments are skipped.
pub fn parse_newick(text: &str) -> Result<RootedTree, ParseError> {
    let bytes = text.as_bytes();
    let mut nodes: Vec<NewickNode> = Vec::new();
    let mut open: Vec<usize> = Vec::new();
    let mut last: Option<usize> = None;
    let mut expect_child = true;
    let mut finished = false;
    let mut pos = 0;

    let syntax = |pos: usize, message: &str| ParseError::Newick { pos, message: message.to_string() };

    while pos < bytes.len() {
        let b = bytes[pos];
        if b.is_ascii_whitespace() {
            pos += 1;
            continue;
        }
        if finished {
            return Err(syntax(pos, "text after `;`"));
        }
        if b == b'[' {
            match text[pos..].find(']') {
                Some(end) => pos += end + 1,
                None => return Err(syntax(pos, "unterminated comment")),
            }
            continue;
        }
        // a child slot left empty by `(,` or `,)` is an unnamed leaf
        if expect_child && b != b'(' && (b == b',' || b == b')' || b == b';') && !open.is_empty() {
            let id = nodes.len();
            nodes.push(NewickNode { parent: open.last().copied(), ..Default::default() });
            last = Some(id);
            expect_child = false;
        }
        match b {
            b'(' => {
                if !expect_child {
                    return Err(syntax(pos, "unexpected `(`"));
                }
                let id = nodes.len();
                nodes.push(NewickNode { parent: open.last().copied(), ..Default::default() });
                open.push(id);
                pos += 1;
            }
            b',' => {
                if open.is_empty() {
                    return Err(syntax(pos, "`,` outside parentheses"));
                }
                expect_child = true;
                pos += 1;
            }
            b')' => {
                let Some(id) = open.pop() else {
                    return Err(ParseError::UnbalancedParens(pos));
                };
                last = Some(id);
                expect_child = false;
                pos += 1;
            }
            b';' => {
                if !open.is_empty() {
                    return Err(ParseError::UnbalancedParens(pos));
                }
                finished = true;
                pos += 1;
            }
            b':' => {
                let target = if expect_child {
                    let id = nodes.len();
                    nodes.push(NewickNode { parent: open.last().copied(), ..Default::default() });
                    expect_child = false;
                    id
                } else {
                    last.ok_or_else(|| syntax(pos, "branch length without a node"))?
                };
                last = Some(target);
                let start = pos + 1;
                let mut end = start;
                while end < bytes.len() && !NEWICK_DELIMS.contains(&bytes[end]) && !bytes[end].is_ascii_whitespace() {
                    end += 1;
                }
                let raw = &text[start..end];
                let length = raw
                    .parse::<Rational>()
                    .map_err(|source| ParseError::BranchLength { text: raw.to_string(), source })?;
                if nodes[target].length.replace(length).is_some() {
                    return Err(syntax(pos, "node has two branch lengths"));
                }
                pos = end;
            }
            _ => {
                let start = pos;
                let mut end = start;
                while end < bytes.len() && !NEWICK_DELIMS.contains(&bytes[end]) && !bytes[end].is_ascii_whitespace() {
                    end += 1;
                }
                if bytes[start] == b']' {
                    return Err(syntax(pos, "unexpected `]`"));
                }
                let label = text[start..end].to_string();
                let target = if expect_child {
                    let id = nodes.len();
                    nodes.push(NewickNode { parent: open.last().copied(), ..Default::default() });
                    expect_child = false;
                    id
                } else {
                    last.ok_or_else(|| syntax(pos, "label without a node"))?
                };
                if nodes[target].label.replace(label).is_some() {
                    return Err(syntax(pos, "node has two labels"));
                }
                last = Some(target);
                pos = end;
            }
        }
    }
    if !open.is_empty() {
        return Err(ParseError::UnbalancedParens(bytes.len()));
    }
    if nodes.len() < 2 {
        return Err(ParseError::Tree(TreeError::Empty));
    }

    let taken: HashSet<String> = nodes.iter().filter_map(|n| n.label.clone()).collect();
    let mut counter = 0;
    let mut labels = Vec::with_capacity(nodes.len());
    let mut parent = Vec::with_capacity(nodes.len());
    let mut weight = Vec::with_capacity(nodes.len());
    for node in nodes {
        let label = node.label.unwrap_or_else(|| loop {
            counter += 1;
            let name = format!("node{counter}");
            if !taken.contains(&name) {
                break name;
            }
        });
        let w = match (node.parent, node.length) {
            (Some(_), Some(w)) => w,
            (Some(_), None) => return Err(ParseError::MissingBranchLength(label)),
            (None, _) => Rational::zero(),
        };
        labels.push(label);
        parent.push(node.parent.map(NodeId));
        weight.push(w);
    }
    Ok(RootedTree::from_parents(labels, parent, weight)?)
}

/// Parses a `left,right,height,size` CSV into a linkage table with
/// `rows + 1` items.
pub fn parse_linkage_csv(text: &str) -> Result<LinkageTable, ParseError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| ParseError::Syntax { line: 1, message: e.to_string() })?
        .clone();
    if header.iter().collect::<Vec<_>>() != ["left", "right", "height", "size"] {
        return Err(ParseError::LinkageHeader(header.iter().collect::<Vec<_>>().join(",")));
    }
    let mut merges = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| ParseError::Syntax {
            line: e.position().map_or(0, |p| p.line() as usize),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let bad = |field: &str, value: &str| ParseError::Syntax {
            line,
            message: format!("bad {field} `{value}`"),
        };
        let index = |i: usize, name: &str| -> Result<usize, ParseError> {
            record[i].parse::<usize>().map_err(|_| bad(name, &record[i]))
        };
        let height = record[2].parse::<Rational>().map_err(|_| bad("height", &record[2]))?;
        merges.push(Merge { left: index(0, "left")?, right: index(1, "right")?, height, size: index(3, "size")? });
    }
    Ok(LinkageTable::new(merges.len() + 1, merges)?)
}
