//! Transformational networks for chord progressions.

use std::fmt::Write as _;

use serde::Serialize;

use crate::catalog::chord_label;
use crate::error::{Error, Result};
use crate::perm::{block_shift, is_simply_transitive, GeneratedGroup, Perm, Report};
use crate::pitchclass::PcSeg;

/// The unique element of a simply transitive group carrying `a` to `b`.
pub fn unique_transform(g: &GeneratedGroup, a: &PcSeg, b: &PcSeg) -> Result<Perm> {
    if !is_simply_transitive(g) {
        return Err(Error::NotSimplyTransitive);
    }
    let u = g.universe();
    let (x, y) = (u.require(a)?, u.require(b)?);
    Ok(g.find_mapping(x, y).expect("transitive").clone())
}

/// Names group elements: vocabulary first, then `g*fbar^i` over a base subgroup,
/// then the closure word.
#[derive(Debug, Clone)]
pub struct Analyzer {
    group: GeneratedGroup,
    base: Option<(GeneratedGroup, Perm, String)>,
    vocabulary: Vec<(String, Perm)>,
}

impl Analyzer {
    #[must_use]
    pub fn new(group: GeneratedGroup) -> Self {
        Analyzer { group, base: None, vocabulary: Vec::new() }
    }

    /// Canonical labels `g*rot^i` with `g` named by its word in `base`.
    #[must_use]
    pub fn with_base(mut self, base: GeneratedGroup, rot: Perm, rot_name: impl Into<String>) -> Self {
        self.base = Some((base, rot, rot_name.into()));
        self
    }

    #[must_use]
    pub fn with_vocabulary(mut self, vocabulary: Vec<(String, Perm)>) -> Self {
        self.vocabulary = vocabulary;
        self
    }

    #[must_use]
    pub fn group(&self) -> &GeneratedGroup {
        &self.group
    }

    /// `(label, closure word, block shift)`.
    pub fn describe(&self, p: &Perm) -> Result<(String, String, Option<usize>)> {
        let word = self.group.word_string(p).ok_or(Error::NotAMember)?;
        let shift = block_shift(self.group.universe(), p).cyclic();
        if let Some((name, _)) = self.vocabulary.iter().find(|(_, q)| q == p) {
            return Ok((name.clone(), word, shift));
        }
        if let (Some((base, rot, rot_name)), Some(i)) = (&self.base, shift) {
            let g = p * &rot.pow(-(i as i64));
            if let Some(gw) = base.word_string(&g) {
                let label = match (gw.as_str(), i) {
                    (_, 0) => gw,
                    ("Id", 1) => rot_name.clone(),
                    ("Id", _) => format!("{rot_name}^{i}"),
                    (_, 1) => format!("{}*{rot_name}", paren(&gw)),
                    _ => format!("{}*{rot_name}^{i}", paren(&gw)),
                };
                return Ok((label, word, shift));
            }
        }
        Ok((word.clone(), word, shift))
    }
}

fn paren(w: &str) -> String {
    if w.contains('*') {
        format!("({w})")
    } else {
        w.to_string()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Node {
    pub id: usize,
    pub chord: String,
    pub pcseg: PcSeg,
    pub block: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub label: String,
    pub word: String,
    pub shift: Option<usize>,
    #[serde(skip)]
    pub perm: Perm,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct TransformationNetwork {
    pub nodes: Vec<Node>,
    pub edges: Vec<Edge>,
    /// (rows, columns) when the nodes form a row-major grid.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<(usize, usize)>,
}

impl TransformationNetwork {
    #[must_use]
    pub fn labels(&self) -> Vec<&str> {
        self.edges.iter().map(|e| e.label.as_str()).collect()
    }

    #[must_use]
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }
}

fn node(g: &GeneratedGroup, id: usize, s: &PcSeg) -> Result<Node> {
    let x = g.universe().require(s)?;
    Ok(Node { id, chord: chord_label(s), pcseg: s.clone(), block: g.universe().block_of(x) })
}

fn edge(a: &Analyzer, from: usize, to: usize, s: &PcSeg, t: &PcSeg) -> Result<Edge> {
    let perm = unique_transform(&a.group, s, t)?;
    let (label, word, shift) = a.describe(&perm)?;
    Ok(Edge { from, to, label, word, shift, perm })
}

/// Chain network over consecutive chords.
pub fn analyze(chords: &[PcSeg], a: &Analyzer) -> Result<TransformationNetwork> {
    let nodes = chords.iter().enumerate().map(|(i, s)| node(&a.group, i, s)).collect::<Result<Vec<_>>>()?;
    let edges = chords
        .windows(2)
        .enumerate()
        .map(|(i, w)| edge(a, i, i + 1, &w[0], &w[1]))
        .collect::<Result<Vec<_>>>()?;
    Ok(TransformationNetwork { nodes, edges, grid: None })
}

#[derive(Debug, Clone, Serialize)]
pub struct GridReport {
    pub report: Report,
    pub network: TransformationNetwork,
}

/// Horizontal edges in `row`, vertical edges in `col`; every square is checked as a
/// commuting diagram of functions, and each horizontal edge against each vertical one.
pub fn verify_grid_network(rows: &[Vec<PcSeg>], row: &Analyzer, col: &Analyzer) -> Result<GridReport> {
    let ncols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::Scope("grid rows have different lengths".into()));
    }
    let idx = |r: usize, c: usize| r * ncols + c;
    let mut net = TransformationNetwork { grid: Some((rows.len(), ncols)), ..Default::default() };
    for (r, chords) in rows.iter().enumerate() {
        for (c, s) in chords.iter().enumerate() {
            net.nodes.push(node(&row.group, idx(r, c), s)?);
        }
    }
    let mut h = vec![vec![]; rows.len()];
    for (r, chords) in rows.iter().enumerate() {
        for c in 0..ncols.saturating_sub(1) {
            let e = edge(row, idx(r, c), idx(r, c + 1), &chords[c], &chords[c + 1])?;
            h[r].push(e.perm.clone());
            net.edges.push(e);
        }
    }
    let mut v = vec![vec![]; rows.len().saturating_sub(1)];
    for r in 0..rows.len().saturating_sub(1) {
        for c in 0..ncols {
            let e = edge(col, idx(r, c), idx(r + 1, c), &rows[r][c], &rows[r + 1][c])?;
            v[r].push(e.perm.clone());
            net.edges.push(e);
        }
    }
    let mut report = Report::default();
    let mut all = true;
    let mut cross = true;
    for r in 0..v.len() {
        for c in 0..ncols.saturating_sub(1) {
            let ok = &v[r][c + 1] * &h[r][c] == &h[r + 1][c] * &v[r][c];
            if !ok {
                report.check(format!("square ({r},{c}) commutes"), false, "");
            }
            all &= ok;
        }
    }
    for hr in h.iter().flatten() {
        for vr in v.iter().flatten() {
            cross &= hr.commutes_with(vr);
        }
    }
    let squares = v.len() * ncols.saturating_sub(1);
    report.check("all squares commute", all, format!("{squares} squares"));
    report.check("horizontal and vertical transformations commute", cross, "");
    Ok(GridReport { report, network: net })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FlipFlop {
    /// First and last edge index of the run, inclusive.
    pub first_edge: usize,
    pub last_edge: usize,
    pub pair: (String, String),
}

/// Maximal runs of at least three edges alternating between two distinct involutions.
#[must_use]
pub fn detect_flip_flop(net: &TransformationNetwork) -> Vec<FlipFlop> {
    let e = &net.edges;
    let involution = |p: &Perm| !p.is_identity() && (p * p).is_identity();
    let mut out = Vec::new();
    let mut i = 0;
    while i + 1 < e.len() {
        let (a, b) = (&e[i].perm, &e[i + 1].perm);
        if a == b || !involution(a) || !involution(b) {
            i += 1;
            continue;
        }
        let mut j = i + 1;
        while j + 1 < e.len() && e[j + 1].perm == e[j - 1].perm {
            j += 1;
        }
        if j - i + 1 >= 3 {
            out.push(FlipFlop { first_edge: i, last_edge: j, pair: (e[i].label.clone(), e[i + 1].label.clone()) });
            i = j;
        } else {
            i += 1;
        }
    }
    out
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Deterministic Graphviz rendering.
#[must_use]
pub fn emit_dot(net: &TransformationNetwork) -> String {
    let dir = if net.grid.is_some() { "TB" } else { "LR" };
    let mut out = format!("digraph network {{\n  rankdir={dir};\n  node [shape=box];\n");
    for n in &net.nodes {
        let _ = writeln!(out, "  n{} [label=\"{}\"];", n.id, dot_escape(&format!("{} {}", n.chord, n.pcseg)));
    }
    if let Some((rows, cols)) = net.grid {
        for r in 0..rows {
            let ids: Vec<String> = (0..cols).map(|c| format!("n{}", r * cols + c)).collect();
            let _ = writeln!(out, "  {{ rank=same; {}; }}", ids.join("; "));
        }
    }
    for e in &net.edges {
        let _ = writeln!(out, "  n{} -> n{} [label=\"{}\"];", e.from, e.to, dot_escape(&e.label));
    }
    out.push_str("}\n");
    out
}
