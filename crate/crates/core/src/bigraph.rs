//! Two-sided bipartite incidence structures.
//!
//! Elements on the left-hand side are called *nodes* and elements on the
//! right-hand side *blocks* (hypergraph vertices and hyperedges). Path
//! lengths count edges, so node-to-node distances are always even. The
//! `diameter` here is the longest shortest node-to-node path and the
//! `line_diameter` the longest shortest block-to-block path; neither is the
//! ordinary graph-theoretic diameter.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A node or block, identified by its index on its own side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Elem {
    Node(usize),
    Block(usize),
}

impl Elem {
    pub fn is_node(&self) -> bool {
        matches!(self, Elem::Node(_))
    }
}

/// Degree/rank summary of a bipartite graph.
///
/// `d` is the maximum node degree and `delta` the maximum block rank; when
/// the graph is regular (resp. uniform) these are exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DegreeProfile {
    pub d: usize,
    pub delta: usize,
    pub regular: bool,
    pub uniform: bool,
}

/// An immutable bipartite incidence structure.
#[derive(Debug, Clone)]
pub struct BipartiteGraph {
    node_ids: Vec<String>,
    block_ids: Vec<String>,
    node_index: HashMap<String, usize>,
    block_index: HashMap<String, usize>,
    /// node -> sorted block indices
    node_adj: Vec<Vec<usize>>,
    /// block -> sorted node indices
    block_adj: Vec<Vec<usize>>,
    labels: BTreeMap<String, String>,
}

impl PartialEq for BipartiteGraph {
    fn eq(&self, other: &Self) -> bool {
        self.node_ids == other.node_ids
            && self.block_ids == other.block_ids
            && self.node_adj == other.node_adj
            && self.block_adj == other.block_adj
            && self.labels == other.labels
    }
}
impl Eq for BipartiteGraph {}

impl BipartiteGraph {
    /// Builds a graph from id lists and (node, block) incidence pairs,
    /// checking all structural invariants: disjoint duplicate-free id sets,
    /// resolvable incidences, and no isolated elements.
    pub fn new<S: AsRef<str>>(
        nodes: &[S],
        blocks: &[S],
        edges: &[(S, S)],
        labels: BTreeMap<String, String>,
    ) -> Result<Self> {
        let node_ids: Vec<String> = nodes.iter().map(|s| s.as_ref().to_owned()).collect();
        let block_ids: Vec<String> = blocks.iter().map(|s| s.as_ref().to_owned()).collect();

        let mut node_index = HashMap::new();
        for (i, id) in node_ids.iter().enumerate() {
            if node_index.insert(id.clone(), i).is_some() {
                return Err(Error::MalformedGraph(format!("duplicate node id {id:?}")));
            }
        }
        let mut block_index = HashMap::new();
        for (i, id) in block_ids.iter().enumerate() {
            if block_index.insert(id.clone(), i).is_some() {
                return Err(Error::MalformedGraph(format!("duplicate block id {id:?}")));
            }
            if node_index.contains_key(id) {
                return Err(Error::MalformedGraph(format!(
                    "id {id:?} appears on both sides"
                )));
            }
        }

        let mut node_adj = vec![Vec::new(); node_ids.len()];
        let mut block_adj = vec![Vec::new(); block_ids.len()];
        for (n, b) in edges {
            let (n, b) = (n.as_ref(), b.as_ref());
            let ni = *node_index
                .get(n)
                .ok_or_else(|| Error::MalformedGraph(format!("edge references unknown node {n:?}")))?;
            let bi = *block_index
                .get(b)
                .ok_or_else(|| Error::MalformedGraph(format!("edge references unknown block {b:?}")))?;
            node_adj[ni].push(bi);
            block_adj[bi].push(ni);
        }
        for adj in node_adj.iter_mut().chain(block_adj.iter_mut()) {
            adj.sort_unstable();
            if adj.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::MalformedGraph("duplicate edge".into()));
            }
        }
        if let Some(i) = node_adj.iter().position(|a| a.is_empty()) {
            return Err(Error::MalformedGraph(format!(
                "isolated node {:?}",
                node_ids[i]
            )));
        }
        if let Some(i) = block_adj.iter().position(|a| a.is_empty()) {
            return Err(Error::MalformedGraph(format!(
                "isolated block {:?}",
                block_ids[i]
            )));
        }
        for id in labels.keys() {
            if !node_index.contains_key(id) && !block_index.contains_key(id) {
                return Err(Error::MalformedGraph(format!(
                    "label references unknown element {id:?}"
                )));
            }
        }

        Ok(Self {
            node_ids,
            block_ids,
            node_index,
            block_index,
            node_adj,
            block_adj,
            labels,
        })
    }

    pub fn node_count(&self) -> usize {
        self.node_ids.len()
    }

    pub fn block_count(&self) -> usize {
        self.block_ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.node_adj.iter().map(Vec::len).sum()
    }

    pub fn node_ids(&self) -> &[String] {
        &self.node_ids
    }

    pub fn block_ids(&self) -> &[String] {
        &self.block_ids
    }

    pub fn node_id(&self, i: usize) -> &str {
        &self.node_ids[i]
    }

    pub fn block_id(&self, i: usize) -> &str {
        &self.block_ids[i]
    }

    pub fn node_idx(&self, id: &str) -> Result<usize> {
        self.node_index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownElement(id.to_owned()))
    }

    pub fn block_idx(&self, id: &str) -> Result<usize> {
        self.block_index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownElement(id.to_owned()))
    }

    /// Resolves an id on either side.
    pub fn elem(&self, id: &str) -> Result<Elem> {
        if let Some(&i) = self.node_index.get(id) {
            Ok(Elem::Node(i))
        } else if let Some(&i) = self.block_index.get(id) {
            Ok(Elem::Block(i))
        } else {
            Err(Error::UnknownElement(id.to_owned()))
        }
    }

    pub fn elem_id(&self, e: Elem) -> &str {
        match e {
            Elem::Node(i) => &self.node_ids[i],
            Elem::Block(i) => &self.block_ids[i],
        }
    }

    /// Blocks incident with a node, ascending.
    pub fn blocks_of(&self, node: usize) -> &[usize] {
        &self.node_adj[node]
    }

    /// Nodes incident with a block, ascending.
    pub fn nodes_of(&self, block: usize) -> &[usize] {
        &self.block_adj[block]
    }

    pub fn incident(&self, node: usize, block: usize) -> bool {
        self.node_adj[node].binary_search(&block).is_ok()
    }

    pub fn labels(&self) -> &BTreeMap<String, String> {
        &self.labels
    }

    pub fn degree_profile(&self) -> DegreeProfile {
        let d = self.node_adj.iter().map(Vec::len).max().unwrap_or(0);
        let delta = self.block_adj.iter().map(Vec::len).max().unwrap_or(0);
        DegreeProfile {
            d,
            delta,
            regular: self.node_adj.iter().all(|a| a.len() == d),
            uniform: self.block_adj.iter().all(|a| a.len() == delta),
        }
    }

    /// The dual graph: node and block roles swapped, incidence transposed.
    /// An involution, labels included.
    pub fn dual(&self) -> BipartiteGraph {
        BipartiteGraph {
            node_ids: self.block_ids.clone(),
            block_ids: self.node_ids.clone(),
            node_index: self.block_index.clone(),
            block_index: self.node_index.clone(),
            node_adj: self.block_adj.clone(),
            block_adj: self.node_adj.clone(),
            labels: self.labels.clone(),
        }
    }

    fn neighbours(&self, e: Elem) -> impl Iterator<Item = Elem> + '_ {
        let (adj, node_side): (&[usize], bool) = match e {
            Elem::Node(i) => (&self.node_adj[i], false),
            Elem::Block(i) => (&self.block_adj[i], true),
        };
        adj.iter().map(move |&j| {
            if node_side {
                Elem::Node(j)
            } else {
                Elem::Block(j)
            }
        })
    }

    fn elem_ord(&self, e: Elem) -> usize {
        match e {
            Elem::Node(i) => i,
            Elem::Block(i) => self.node_ids.len() + i,
        }
    }

    /// Single-source BFS distances (in edges) over the whole element set.
    /// Unreachable elements are `None`.
    pub fn bfs_distances(&self, from: Elem) -> Vec<Option<usize>> {
        let total = self.node_ids.len() + self.block_ids.len();
        let mut dist = vec![None; total];
        dist[self.elem_ord(from)] = Some(0);
        let mut queue = VecDeque::from([from]);
        while let Some(e) = queue.pop_front() {
            let d = dist[self.elem_ord(e)].unwrap();
            for nb in self.neighbours(e) {
                let slot = &mut dist[self.elem_ord(nb)];
                if slot.is_none() {
                    *slot = Some(d + 1);
                    queue.push_back(nb);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        if self.node_ids.is_empty() {
            return true;
        }
        self.bfs_distances(Elem::Node(0)).iter().all(Option::is_some)
    }

    /// Shortest distance between two elements, if connected.
    pub fn distance(&self, a: Elem, b: Elem) -> Option<usize> {
        self.bfs_distances(a)[self.elem_ord(b)]
    }

    /// Longest shortest node-to-node path (edge count). Always even.
    pub fn diameter(&self) -> Result<usize> {
        self.side_diameter(true)
    }

    /// Longest shortest block-to-block path (edge count). Always even.
    pub fn line_diameter(&self) -> Result<usize> {
        self.side_diameter(false)
    }

    fn side_diameter(&self, node_side: bool) -> Result<usize> {
        let count = if node_side {
            self.node_ids.len()
        } else {
            self.block_ids.len()
        };
        let mut best = 0;
        for i in 0..count {
            let src = if node_side { Elem::Node(i) } else { Elem::Block(i) };
            let dist = self.bfs_distances(src);
            if dist.iter().any(Option::is_none) {
                return Err(Error::Disconnected);
            }
            for j in 0..count {
                let dst = if node_side { Elem::Node(j) } else { Elem::Block(j) };
                best = best.max(dist[self.elem_ord(dst)].unwrap());
            }
        }
        Ok(best)
    }

    /// A shortest alternating path between two elements, as an [`AltPath`].
    pub fn shortest_path(&self, from: Elem, to: Elem) -> Option<AltPath> {
        let total = self.node_ids.len() + self.block_ids.len();
        let mut prev: Vec<Option<Elem>> = vec![None; total];
        let mut seen = vec![false; total];
        seen[self.elem_ord(from)] = true;
        let mut queue = VecDeque::from([from]);
        while let Some(e) = queue.pop_front() {
            if e == to {
                let mut elems = vec![to];
                let mut cur = to;
                while let Some(p) = prev[self.elem_ord(cur)] {
                    elems.push(p);
                    cur = p;
                }
                elems.reverse();
                return Some(AltPath::from_elems(self, &elems));
            }
            for nb in self.neighbours(e) {
                let o = self.elem_ord(nb);
                if !seen[o] {
                    seen[o] = true;
                    prev[o] = Some(e);
                    queue.push_back(nb);
                }
            }
        }
        None
    }

    // ---- serialization ----

    pub fn to_json(&self) -> GraphJson {
        let mut edges = Vec::new();
        for (n, adj) in self.node_adj.iter().enumerate() {
            for &b in adj {
                edges.push([self.node_ids[n].clone(), self.block_ids[b].clone()]);
            }
        }
        GraphJson {
            nodes: self.node_ids.clone(),
            blocks: self.block_ids.clone(),
            edges,
            meta: GraphMeta {
                labels: self.labels.clone(),
                extra: BTreeMap::new(),
            },
        }
    }

    pub fn from_json(j: &GraphJson) -> Result<Self> {
        let edges: Vec<(&str, &str)> = j
            .edges
            .iter()
            .map(|[n, b]| (n.as_str(), b.as_str()))
            .collect();
        let nodes: Vec<&str> = j.nodes.iter().map(String::as_str).collect();
        let blocks: Vec<&str> = j.blocks.iter().map(String::as_str).collect();
        BipartiteGraph::new(&nodes, &blocks, &edges, j.meta.labels.clone())
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(&self.to_json())?;
        std::fs::write(path, text)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let j: GraphJson = serde_json::from_str(&text)?;
        Self::from_json(&j)
    }

    /// Graphviz export: nodes as circles, blocks as squares, undirected edges.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph bigraph {\n");
        for id in &self.node_ids {
            let label = self.labels.get(id).unwrap_or(id);
            out.push_str(&format!("  \"{id}\" [shape=circle, label=\"{label}\"];\n"));
        }
        for id in &self.block_ids {
            let label = self.labels.get(id).unwrap_or(id);
            out.push_str(&format!("  \"{id}\" [shape=square, label=\"{label}\"];\n"));
        }
        for (n, adj) in self.node_adj.iter().enumerate() {
            for &b in adj {
                out.push_str(&format!(
                    "  \"{}\" -- \"{}\";\n",
                    self.node_ids[n], self.block_ids[b]
                ));
            }
        }
        out.push_str("}\n");
        out
    }
}

/// On-disk JSON form of a bipartite graph.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphJson {
    pub nodes: Vec<String>,
    pub blocks: Vec<String>,
    pub edges: Vec<[String; 2]>,
    #[serde(default)]
    pub meta: GraphMeta,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct GraphMeta {
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub labels: BTreeMap<String, String>,
    #[serde(flatten)]
    pub extra: BTreeMap<String, serde_json::Value>,
}

/// An alternating node/block sequence. Length counts edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AltPath {
    pub elements: Vec<String>,
}

impl AltPath {
    pub fn new(elements: Vec<String>) -> Self {
        Self { elements }
    }

    pub fn from_elems(g: &BipartiteGraph, elems: &[Elem]) -> Self {
        Self {
            elements: elems.iter().map(|&e| g.elem_id(e).to_owned()).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.elements.len() <= 1
    }

    pub fn source(&self) -> Option<&str> {
        self.elements.first().map(String::as_str)
    }

    pub fn destination(&self) -> Option<&str> {
        self.elements.last().map(String::as_str)
    }

    /// Resolves the path against a host graph, or `None` if any id is unknown.
    pub fn resolve(&self, g: &BipartiteGraph) -> Option<Vec<Elem>> {
        self.elements.iter().map(|id| g.elem(id).ok()).collect()
    }
}

/// True iff the path alternates sides, every consecutive pair is incident,
/// and no node or block repeats. A single element is a valid length-0 path;
/// an empty sequence is not a path.
pub fn validate_path(g: &BipartiteGraph, p: &AltPath) -> bool {
    let Some(elems) = p.resolve(g) else {
        return false;
    };
    if elems.is_empty() {
        return false;
    }
    let mut seen = std::collections::HashSet::new();
    for e in &elems {
        if !seen.insert(*e) {
            return false;
        }
    }
    for w in elems.windows(2) {
        match (w[0], w[1]) {
            (Elem::Node(n), Elem::Block(b)) | (Elem::Block(b), Elem::Node(n)) => {
                if !g.incident(n, b) {
                    return false;
                }
            }
            _ => return false,
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::gen_cycle;

    fn c10() -> BipartiteGraph {
        gen_cycle(5).unwrap()
    }

    #[test]
    fn single_edge_profile() {
        let g = BipartiteGraph::new(&["n"], &["b"], &[("n", "b")], BTreeMap::new()).unwrap();
        let p = g.degree_profile();
        assert_eq!((p.d, p.delta, p.regular, p.uniform), (1, 1, true, true));
    }

    #[test]
    fn c10_profile_and_diameters() {
        let g = c10();
        let p = g.degree_profile();
        assert_eq!((p.d, p.delta), (2, 2));
        assert!(p.regular && p.uniform);
        assert_eq!(g.diameter().unwrap(), 4);
        assert_eq!(g.line_diameter().unwrap(), 4);
    }

    #[test]
    fn complete_bipartite_diameter_two() {
        let nodes = ["n0", "n1", "n2"];
        let blocks = ["b0", "b1"];
        let mut edges = Vec::new();
        for n in nodes {
            for b in blocks {
                edges.push((n, b));
            }
        }
        let g = BipartiteGraph::new(&nodes, &blocks, &edges, BTreeMap::new()).unwrap();
        assert_eq!(g.diameter().unwrap(), 2);
    }

    #[test]
    fn dual_is_involution() {
        let g = c10();
        assert_eq!(g.dual().dual(), g);
        let p = g.dual().degree_profile();
        assert_eq!((p.d, p.delta), (2, 2));
    }

    #[test]
    fn line_diameter_is_dual_diameter() {
        let g = c10();
        assert_eq!(g.line_diameter().unwrap(), g.dual().diameter().unwrap());
    }

    #[test]
    fn disconnected_diameter_errors() {
        let g = BipartiteGraph::new(
            &["n0", "n1"],
            &["b0", "b1"],
            &[("n0", "b0"), ("n1", "b1")],
            BTreeMap::new(),
        )
        .unwrap();
        assert!(matches!(g.diameter(), Err(Error::Disconnected)));
    }

    #[test]
    fn rejects_dangling_and_duplicates() {
        assert!(BipartiteGraph::new(&["n"], &["b"], &[("n", "x")], BTreeMap::new()).is_err());
        assert!(BipartiteGraph::new(&["n", "n"], &["b"], &[("n", "b")], BTreeMap::new()).is_err());
        // isolated block
        assert!(BipartiteGraph::new(&["n"], &["b", "c"], &[("n", "b")], BTreeMap::new()).is_err());
    }

    #[test]
    fn path_validation() {
        let g = c10();
        assert!(validate_path(&g, &AltPath::new(vec!["n0".into()])));
        let ok = g.shortest_path(g.elem("n0").unwrap(), g.elem("n2").unwrap()).unwrap();
        assert!(validate_path(&g, &ok));
        assert_eq!(ok.len(), 4);
        // repeated block
        let bad = AltPath::new(vec!["n0".into(), "e0".into(), "n1".into(), "e0".into()]);
        assert!(!validate_path(&g, &bad));
        // non-alternating / non-incident
        let bad2 = AltPath::new(vec!["n0".into(), "e2".into()]);
        assert!(!validate_path(&g, &bad2));
    }

    #[test]
    fn json_round_trip() {
        let g = c10();
        let j = g.to_json();
        let g2 = BipartiteGraph::from_json(&j).unwrap();
        assert_eq!(g, g2);
    }

    #[test]
    fn dot_export_counts() {
        let g = c10();
        let dot = g.to_dot();
        let vertices = dot.lines().filter(|l| l.contains("[shape=")).count();
        let edges = dot.lines().filter(|l| l.contains("--")).count();
        assert_eq!(vertices, 10);
        assert_eq!(edges, 10);
    }
}
