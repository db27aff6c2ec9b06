//! Extended Newick, DOT and JSON forms.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};
use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{Network, NetworkBuilder};
use crate::error::NetworkError;
use crate::taxa::TaxonUniverse;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    ENewick,
    Dot,
    Json,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
struct JsonNetwork {
    nodes: usize,
    edges: Vec<[usize; 2]>,
    root: usize,
    labels: Vec<(usize, String)>,
}

impl Network {
    pub fn serialize(&self, format: Format) -> String {
        match format {
            Format::ENewick => self.to_enewick(),
            Format::Dot => self.to_dot(),
            Format::Json => self.to_json(),
        }
    }

    pub fn parse(text: &str, format: Format) -> Result<Network, NetworkError> {
        match format {
            Format::ENewick => Network::from_enewick(text),
            Format::Json => Network::from_json(text),
            Format::Dot => Err(NetworkError::Parse {
                line: 1,
                column: 1,
                reason: "DOT input is not supported".into(),
            }),
        }
    }

    /// Children of every node ordered by their sorted descendant labels,
    /// ties broken by node id.
    fn ordered_children(&self) -> Vec<Vec<usize>> {
        let desc = self.descendants();
        let keys: Vec<Vec<&str>> = desc
            .iter()
            .map(|d| {
                let mut l: Vec<&str> = d.iter().map(|t| self.universe.name(t)).collect();
                l.sort_unstable();
                l
            })
            .collect();
        (0..self.node_count())
            .map(|v| {
                let mut cs: Vec<usize> = self.children[v].to_vec();
                cs.sort_by(|&a, &b| keys[a].cmp(&keys[b]).then(a.cmp(&b)));
                cs
            })
            .collect()
    }

    /// Preorder numbering over ordered children, each node at first visit.
    fn canonical_numbering(&self, ordered: &[Vec<usize>]) -> Vec<usize> {
        let mut pre = vec![usize::MAX; self.node_count()];
        let mut next = 0;
        let mut stack = vec![self.root];
        while let Some(v) = stack.pop() {
            if pre[v] != usize::MAX {
                continue;
            }
            pre[v] = next;
            next += 1;
            for &c in ordered[v].iter().rev() {
                if pre[c] == usize::MAX {
                    stack.push(c);
                }
            }
        }
        pre
    }

    /// Extended Newick with reticulations tagged `#Hk`, numbered in a
    /// deterministic topological order. The subtree below a reticulation is
    /// written at its first occurrence.
    pub fn to_enewick(&self) -> String {
        let ordered = self.ordered_children();
        let pre = self.canonical_numbering(&ordered);
        // Kahn order preferring smaller preorder index.
        let mut indeg: Vec<usize> = self.parents.iter().map(|p| p.len()).collect();
        let mut heap = BinaryHeap::new();
        heap.push(Reverse((pre[self.root], self.root)));
        let mut tag = vec![0usize; self.node_count()];
        let mut next_tag = 1;
        while let Some(Reverse((_, v))) = heap.pop() {
            if self.parents[v].len() > 1 {
                tag[v] = next_tag;
                next_tag += 1;
            }
            for &c in &self.children[v] {
                indeg[c] -= 1;
                if indeg[c] == 0 {
                    heap.push(Reverse((pre[c], c)));
                }
            }
        }
        let mut out = String::new();
        let mut written = vec![false; self.node_count()];
        self.write_newick(self.root, &ordered, &tag, &mut written, &mut out);
        out.push(';');
        out
    }

    fn write_newick(&self, v: usize, ordered: &[Vec<usize>], tag: &[usize], written: &mut [bool], out: &mut String) {
        if written[v] {
            let _ = write!(out, "#H{}", tag[v]);
            return;
        }
        written[v] = true;
        if !ordered[v].is_empty() {
            out.push('(');
            for (i, &c) in ordered[v].iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                self.write_newick(c, ordered, tag, written, out);
            }
            out.push(')');
        }
        if let Some(l) = self.label(v) {
            out.push_str(&quote_label(l));
        }
        if tag[v] > 0 {
            let _ = write!(out, "#H{}", tag[v]);
        }
    }

    pub fn from_enewick(text: &str) -> Result<Network, NetworkError> {
        let mut nets = parse_enewick_all(text)?;
        match nets.len() {
            1 => Ok(nets.pop().unwrap()),
            0 => Err(NetworkError::Parse {
                line: 1,
                column: 1,
                reason: "no network found".into(),
            }),
            _ => Err(NetworkError::Parse {
                line: 1,
                column: 1,
                reason: "more than one network in input".into(),
            }),
        }
    }

    /// DOT rendering; leaves show their labels and reticulations are double circles.
    pub fn to_dot(&self) -> String {
        let ordered = self.ordered_children();
        let pre = self.canonical_numbering(&ordered);
        let mut by_pre: Vec<usize> = (0..self.node_count()).collect();
        by_pre.sort_by_key(|&v| pre[v]);
        let mut out = String::from("digraph network {\n  node [shape=circle, label=\"\", width=0.2];\n");
        for &v in &by_pre {
            let id = pre[v];
            if let Some(l) = self.label(v) {
                let _ = writeln!(out, "  n{id} [shape=plaintext, label=\"{}\"];", l.replace('"', "\\\""));
            } else if self.parents[v].len() > 1 {
                let _ = writeln!(out, "  n{id} [shape=doublecircle];");
            } else {
                let _ = writeln!(out, "  n{id};");
            }
        }
        for &v in &by_pre {
            for &c in &ordered[v] {
                let _ = writeln!(out, "  n{} -> n{};", pre[v], pre[c]);
            }
        }
        out.push_str("}\n");
        out
    }

    /// `{nodes, edges, root, labels}` with nodes renumbered in canonical preorder.
    pub fn to_json(&self) -> String {
        let ordered = self.ordered_children();
        let pre = self.canonical_numbering(&ordered);
        let mut by_pre: Vec<usize> = (0..self.node_count()).collect();
        by_pre.sort_by_key(|&v| pre[v]);
        let doc = JsonNetwork {
            nodes: self.node_count(),
            edges: by_pre
                .iter()
                .flat_map(|&v| ordered[v].iter().map(move |&c| (v, c)))
                .map(|(v, c)| [pre[v], pre[c]])
                .collect(),
            root: pre[self.root],
            labels: by_pre
                .iter()
                .filter_map(|&v| self.label(v).map(|l| (pre[v], l.to_string())))
                .collect(),
        };
        serde_json::to_string(&doc).expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> Result<Network, NetworkError> {
        let doc: JsonNetwork = serde_json::from_str(text).map_err(|e| NetworkError::Parse {
            line: e.line(),
            column: e.column(),
            reason: e.to_string(),
        })?;
        let mut b = NetworkBuilder::new();
        for _ in 0..doc.nodes {
            b.add_node();
        }
        for [u, v] in doc.edges {
            if u >= doc.nodes || v >= doc.nodes {
                return Err(NetworkError::MissingNode(u.max(v)));
            }
            b.add_edge(u, v);
        }
        let mut labels = doc.labels;
        labels.sort();
        for (v, l) in labels {
            if v >= doc.nodes {
                return Err(NetworkError::MissingNode(v));
            }
            b.set_label(v, l);
        }
        let net = b.build()?;
        if net.root != doc.root {
            return Err(NetworkError::Parse {
                line: 1,
                column: 1,
                reason: format!("declared root {} is not the indegree-0 node", doc.root),
            });
        }
        Ok(net)
    }
}

fn quote_label(l: &str) -> String {
    if l.chars().any(|c| c.is_whitespace() || "(),;:#[]'".contains(c)) {
        format!("'{}'", l.replace('\'', "''"))
    } else {
        l.to_string()
    }
}

/// Parses every `;`-terminated network in `text`.
pub fn parse_enewick_all(text: &str) -> Result<Vec<Network>, NetworkError> {
    let mut p = NewickParser {
        chars: text.chars().collect(),
        pos: 0,
    };
    let mut out = Vec::new();
    loop {
        p.skip_ws()?;
        if p.pos >= p.chars.len() {
            break;
        }
        out.push(p.network()?);
    }
    Ok(out)
}

/// Parses every tree or network over one shared universe (labels in order
/// of first appearance across all inputs).
pub fn parse_enewick_shared(text: &str) -> Result<Vec<Network>, NetworkError> {
    let nets = parse_enewick_all(text)?;
    let mut names: Vec<String> = Vec::new();
    for n in &nets {
        for name in n.universe.names() {
            if !names.contains(name) {
                names.push(name.clone());
            }
        }
    }
    if names.is_empty() {
        return Ok(nets);
    }
    let universe = Arc::new(TaxonUniverse::new(names)?);
    nets.iter().map(|n| n.with_universe(&universe)).collect()
}

struct NewickParser {
    chars: Vec<char>,
    pos: usize,
}

#[derive(Default)]
struct Pending {
    children: Vec<Vec<usize>>,
    labels: Vec<Option<String>>,
    tags: HashMap<String, usize>,
}

impl NewickParser {
    fn error(&self, reason: impl Into<String>) -> NetworkError {
        let upto = self.pos.min(self.chars.len());
        let line = 1 + self.chars[..upto].iter().filter(|&&c| c == '\n').count();
        let column = 1 + self.chars[..upto].iter().rev().take_while(|&&c| c != '\n').count();
        NetworkError::Parse {
            line,
            column,
            reason: reason.into(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) -> Result<(), NetworkError> {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += 1;
            } else if c == '[' {
                while let Some(c) = self.peek() {
                    self.pos += 1;
                    if c == ']' {
                        break;
                    }
                }
                if self.chars.get(self.pos - 1) != Some(&']') {
                    return Err(self.error("unterminated comment"));
                }
            } else {
                break;
            }
        }
        Ok(())
    }

    fn network(&mut self) -> Result<Network, NetworkError> {
        let mut st = Pending::default();
        let root = self.subtree(&mut st)?;
        self.skip_ws()?;
        if self.peek() != Some(';') {
            return Err(self.error("expected `;`"));
        }
        self.pos += 1;
        let mut b = NetworkBuilder::new();
        for _ in 0..st.children.len() {
            b.add_node();
        }
        for (u, cs) in st.children.iter().enumerate() {
            for &v in cs {
                b.add_edge(u, v);
            }
        }
        for (v, l) in st.labels.iter().enumerate() {
            if let Some(l) = l {
                if st.children[v].is_empty() {
                    b.set_label(v, l.clone());
                }
            }
        }
        let _ = root;
        b.build()
    }

    fn subtree(&mut self, st: &mut Pending) -> Result<usize, NetworkError> {
        self.skip_ws()?;
        let mut kids = Vec::new();
        let has_list = self.peek() == Some('(');
        if has_list {
            self.pos += 1;
            loop {
                kids.push(self.subtree(st)?);
                self.skip_ws()?;
                match self.peek() {
                    Some(',') => self.pos += 1,
                    Some(')') => {
                        self.pos += 1;
                        break;
                    }
                    _ => return Err(self.error("expected `,` or `)`")),
                }
            }
        }
        self.skip_ws()?;
        let label = self.label()?;
        let mut tag = None;
        if self.peek() == Some('#') {
            self.pos += 1;
            let start = self.pos;
            while matches!(self.peek(), Some(c) if c.is_alphanumeric() || c == '_') {
                self.pos += 1;
            }
            if start == self.pos {
                return Err(self.error("empty reticulation tag"));
            }
            tag = Some(self.chars[start..self.pos].iter().collect::<String>());
        }
        loop {
            self.skip_ws()?;
            if self.peek() != Some(':') {
                break;
            }
            self.pos += 1;
            self.skip_ws()?;
            while matches!(self.peek(), Some(c) if c.is_ascii_digit() || ".eE+-".contains(c)) {
                self.pos += 1;
            }
        }
        if !has_list && label.is_none() && tag.is_none() {
            return Err(self.error("expected a label or `(`"));
        }
        let node = match tag.as_ref().and_then(|t| st.tags.get(t)) {
            Some(&existing) => {
                if !kids.is_empty() && !st.children[existing].is_empty() {
                    return Err(self.error("reticulation subtree given twice"));
                }
                existing
            }
            None => {
                st.children.push(Vec::new());
                st.labels.push(None);
                let v = st.children.len() - 1;
                if let Some(t) = tag {
                    st.tags.insert(t, v);
                }
                v
            }
        };
        st.children[node].extend(kids);
        if label.is_some() {
            if st.labels[node].is_some() && st.labels[node] != label {
                return Err(self.error("reticulation labelled twice"));
            }
            st.labels[node] = label;
        }
        Ok(node)
    }

    fn label(&mut self) -> Result<Option<String>, NetworkError> {
        if self.peek() == Some('\'') {
            self.pos += 1;
            let mut s = String::new();
            loop {
                match self.peek() {
                    None => return Err(self.error("unterminated quoted label")),
                    Some('\'') => {
                        self.pos += 1;
                        if self.peek() == Some('\'') {
                            s.push('\'');
                            self.pos += 1;
                        } else {
                            break;
                        }
                    }
                    Some(c) => {
                        s.push(c);
                        self.pos += 1;
                    }
                }
            }
            return Ok(Some(s));
        }
        let start = self.pos;
        while matches!(self.peek(), Some(c) if !c.is_whitespace() && !"(),;:#[]'".contains(c)) {
            self.pos += 1;
        }
        Ok((self.pos > start).then(|| self.chars[start..self.pos].iter().collect()))
    }
}
