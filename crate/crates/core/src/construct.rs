//! Base-graph generators and the 2-step / 3-step constructions.
//!
//! The 2-step construction takes a connected (d, Δ)-regular base graph H0
//! and a [Δ,k]-transversal design T. Every base node p blows up into a group
//! of k nodes; every base block Q is replaced by a copy T_Q of T whose i-th
//! group is identified with the group of the i-th neighbour of Q (neighbours
//! taken in index order). The result is a connected (dk, Δ)-regular graph on
//! nk nodes and ek² blocks. The 3-step construction is the dual of the
//! 2-step result.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::bigraph::{BipartiteGraph, GraphJson};
use crate::error::{Error, Result};
use crate::tdesign::{TdJson, TransversalDesign};

/// Cycle of length 2n as a bipartite graph: nodes n0..n{n-1}, blocks
/// e0..e{n-1}, node i incident to e_i and e_{i-1 mod n}.
pub fn gen_cycle(n: usize) -> Result<BipartiteGraph> {
    if n < 3 {
        return Err(Error::BadConstruction(format!("cycle needs n >= 3, got {n}")));
    }
    let nodes: Vec<String> = (0..n).map(|i| format!("n{i}")).collect();
    let blocks: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
    let mut edges = Vec::new();
    for i in 0..n {
        edges.push((nodes[i].clone(), blocks[i].clone()));
        edges.push((nodes[i].clone(), blocks[(i + n - 1) % n].clone()));
    }
    BipartiteGraph::new(&nodes, &blocks, &edges, BTreeMap::new())
}

/// Circulant-style (delta, delta)-regular graph on n nodes and n blocks:
/// node i incident to blocks i, i+1, .., i+delta-1 (mod n).
pub fn gen_circulant(n: usize, delta: usize) -> Result<BipartiteGraph> {
    if delta < 2 || delta >= n {
        return Err(Error::BadConstruction(format!(
            "circulant needs 2 <= delta < n, got delta={delta}, n={n}"
        )));
    }
    let nodes: Vec<String> = (0..n).map(|i| format!("n{i}")).collect();
    let blocks: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..delta {
            edges.push((nodes[i].clone(), blocks[(i + j) % n].clone()));
        }
    }
    BipartiteGraph::new(&nodes, &blocks, &edges, BTreeMap::new())
}

/// Joins two copies of an (r, r)-regular square graph (equally many nodes
/// and blocks) by matching node i of one copy with block i of the other,
/// yielding an (r+1, r+1)-regular square graph.
pub fn double_cover_join(g: &BipartiteGraph) -> Result<BipartiteGraph> {
    let prof = g.degree_profile();
    if !prof.regular || !prof.uniform || prof.d != prof.delta {
        return Err(Error::BadConstruction(
            "double cover join needs an (r, r)-regular graph".into(),
        ));
    }
    if g.node_count() != g.block_count() {
        return Err(Error::BadConstruction(
            "double cover join needs equally many nodes and blocks".into(),
        ));
    }
    let side = |suffix: &str, ids: &[String]| -> Vec<String> {
        ids.iter().map(|id| format!("{id}.{suffix}")).collect()
    };
    let nodes: Vec<String> = [side("a", g.node_ids()), side("b", g.node_ids())].concat();
    let blocks: Vec<String> = [side("a", g.block_ids()), side("b", g.block_ids())].concat();
    let mut edges = Vec::new();
    for suffix in ["a", "b"] {
        for n in 0..g.node_count() {
            for &b in g.blocks_of(n) {
                edges.push((
                    format!("{}.{suffix}", g.node_id(n)),
                    format!("{}.{suffix}", g.block_id(b)),
                ));
            }
        }
    }
    for i in 0..g.node_count() {
        edges.push((format!("{}.a", g.node_id(i)), format!("{}.b", g.block_id(i))));
        edges.push((format!("{}.b", g.node_id(i)), format!("{}.a", g.block_id(i))));
    }
    BipartiteGraph::new(&nodes, &blocks, &edges, BTreeMap::new())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    TwoStep,
    ThreeStep,
}

/// A graph built by the 2-step or 3-step construction, together with the
/// provenance needed to route on it: which base node and group position each
/// node came from, and which base block and design block each block came
/// from.
///
/// Provenance always refers to the 2-step orientation. For a
/// [`Variant::ThreeStep`] graph the stored graph is the dual, so its *nodes*
/// are the blocks the provenance maps describe.
#[derive(Debug, Clone)]
pub struct ConstructedGraph {
    graph: BipartiteGraph,
    base: BipartiteGraph,
    td: TransversalDesign,
    variant: Variant,
    iterations: usize,
    /// base block -> its base-node neighbours, ascending; position in this
    /// list is the group index of the block's design copy
    roots_of_copy: Vec<Vec<usize>>,
    /// H node -> (base node, position within group)
    node_origin: Vec<(usize, usize)>,
    /// H block -> (base block, design block)
    block_origin: Vec<(usize, usize)>,
    /// [base node][position] -> H node
    h_node: Vec<Vec<usize>>,
    /// [base block][design block] -> H block
    h_block: Vec<Vec<usize>>,
}

impl ConstructedGraph {
    pub fn graph(&self) -> &BipartiteGraph {
        &self.graph
    }

    pub fn base(&self) -> &BipartiteGraph {
        &self.base
    }

    pub fn td(&self) -> &TransversalDesign {
        &self.td
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    pub fn require_two_step(&self) -> Result<()> {
        if self.variant != Variant::TwoStep {
            return Err(Error::BadRouting(
                "operation requires a 2-step construction".into(),
            ));
        }
        Ok(())
    }

    /// Base-node neighbours of base block `q`, ascending. The design copy
    /// T_q identifies its i-th group with the group of the i-th entry.
    pub fn copy_roots(&self, q: usize) -> &[usize] {
        &self.roots_of_copy[q]
    }

    /// (base node, position within its group) of H node `hn`.
    pub fn node_origin(&self, hn: usize) -> (usize, usize) {
        self.node_origin[hn]
    }

    /// (base block, design block) of H block `hb`.
    pub fn block_origin(&self, hb: usize) -> (usize, usize) {
        self.block_origin[hb]
    }

    pub fn h_node(&self, base_node: usize, pos: usize) -> usize {
        self.h_node[base_node][pos]
    }

    pub fn h_block(&self, base_block: usize, td_block: usize) -> usize {
        self.h_block[base_block][td_block]
    }

    /// Group index of `base_node` within copy T_q, if the node roots it.
    pub fn group_position(&self, q: usize, base_node: usize) -> Option<usize> {
        self.roots_of_copy[q].iter().position(|&p| p == base_node)
    }

    /// The H node playing design node (group, pos) inside copy T_q.
    pub fn node_in_copy(&self, q: usize, group: usize, pos: usize) -> usize {
        self.h_node[self.roots_of_copy[q][group]][pos]
    }

    /// The member of `hb` in group `group` of its own copy.
    pub fn block_member(&self, hb: usize, group: usize) -> Result<usize> {
        let (q, u) = self.block_origin[hb];
        let tn = self.td.member_in_group(u, group)?;
        let (g, pos) = self.td_node_coords(tn);
        debug_assert_eq!(g, group);
        Ok(self.node_in_copy(q, group, pos))
    }

    /// The block of copy T_q generated by two of its nodes from distinct
    /// groups.
    pub fn generated_block_in_copy(&self, q: usize, hx: usize, hy: usize) -> Result<usize> {
        let tx = self.td_node_in_copy(q, hx)?;
        let ty = self.td_node_in_copy(q, hy)?;
        let u = self.td.generated_block(tx, ty)?;
        Ok(self.h_block[q][u])
    }

    /// The design node that H node `hn` plays inside copy T_q; errors if the
    /// node's group does not root that copy.
    pub fn td_node_in_copy(&self, q: usize, hn: usize) -> Result<usize> {
        let (p, pos) = self.node_origin[hn];
        let group = self.group_position(q, p).ok_or_else(|| {
            Error::BadRouting(format!(
                "node {} does not lie in copy {}",
                self.graph_two_step().node_id(hn),
                self.base.block_id(q)
            ))
        })?;
        Ok(self.td.groups()[group][pos])
    }

    fn td_node_coords(&self, tn: usize) -> (usize, usize) {
        let g = self.td.group_of(tn);
        let pos = self.td.groups()[g].iter().position(|&m| m == tn).unwrap();
        (g, pos)
    }

    /// The 2-step orientation of the stored graph (identity for 2-step,
    /// dual for 3-step).
    pub fn graph_two_step(&self) -> BipartiteGraph {
        match self.variant {
            Variant::TwoStep => self.graph.clone(),
            Variant::ThreeStep => self.graph.dual(),
        }
    }

    // ---- serialization ----

    pub fn to_json(&self) -> ConstructedJson {
        ConstructedJson {
            variant: self.variant,
            iterations: self.iterations,
            base: self.base.to_json(),
            td: self.td.to_json(),
            graph: self.graph.to_json(),
        }
    }

    /// Re-runs the construction from the stored base and design and checks
    /// the stored graph matches, so tampered files are rejected.
    pub fn from_json(j: &ConstructedJson) -> Result<Self> {
        let base = BipartiteGraph::from_json(&j.base)?;
        let td = TransversalDesign::from_json(&j.td)?;
        let rebuilt = match j.variant {
            Variant::TwoStep => iterate(&base, &td, j.iterations)?,
            Variant::ThreeStep => three_step_iterated(&base, &td, j.iterations)?,
        };
        let stored = BipartiteGraph::from_json(&j.graph)?;
        if rebuilt.graph != stored {
            return Err(Error::BadConstruction(
                "stored graph does not match its base and design".into(),
            ));
        }
        Ok(rebuilt)
    }

    pub fn save(&self, path: &std::path::Path) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(&self.to_json())?)?;
        Ok(())
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let j: ConstructedJson = serde_json::from_str(&text)?;
        Self::from_json(&j)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConstructedJson {
    pub variant: Variant,
    pub iterations: usize,
    pub base: GraphJson,
    pub td: TdJson,
    pub graph: GraphJson,
}

/// One application of the 2-step construction.
pub fn two_step(base: &BipartiteGraph, td: &TransversalDesign) -> Result<ConstructedGraph> {
    let prof = base.degree_profile();
    if !prof.regular || !prof.uniform {
        return Err(Error::BadConstruction(
            "base graph must be regular and uniform".into(),
        ));
    }
    if !base.is_connected() {
        return Err(Error::BadConstruction("base graph must be connected".into()));
    }
    if prof.delta != td.delta() {
        return Err(Error::BadConstruction(format!(
            "base block rank {} != design delta {}",
            prof.delta,
            td.delta()
        )));
    }
    let report = td.verify();
    if !report.is_valid() {
        return Err(Error::BadConstruction(format!(
            "design is invalid: {}",
            report.violations.join("; ")
        )));
    }

    let k = td.k();
    let tg = td.graph();

    // design node -> (group, position), once
    let mut coords = vec![(0usize, 0usize); tg.node_count()];
    for (g, grp) in td.groups().iter().enumerate() {
        for (pos, &tn) in grp.iter().enumerate() {
            coords[tn] = (g, pos);
        }
    }

    let mut nodes = Vec::with_capacity(base.node_count() * k);
    let mut h_node = Vec::with_capacity(base.node_count());
    let mut node_origin = Vec::with_capacity(base.node_count() * k);
    for p in 0..base.node_count() {
        let mut row = Vec::with_capacity(k);
        for j in 0..k {
            row.push(nodes.len());
            node_origin.push((p, j));
            nodes.push(format!("{}.{}", base.node_id(p), j + 1));
        }
        h_node.push(row);
    }

    let mut blocks = Vec::with_capacity(base.block_count() * k * k);
    let mut h_block = Vec::with_capacity(base.block_count());
    let mut block_origin = Vec::with_capacity(base.block_count() * k * k);
    let mut roots_of_copy = Vec::with_capacity(base.block_count());
    let mut edges = Vec::new();
    for q in 0..base.block_count() {
        let roots = base.nodes_of(q).to_vec();
        let mut row = Vec::with_capacity(tg.block_count());
        for u in 0..tg.block_count() {
            let bid = format!("{}.{}", base.block_id(q), tg.block_id(u));
            for &tn in tg.nodes_of(u) {
                let (g, pos) = coords[tn];
                edges.push((nodes[h_node[roots[g]][pos]].clone(), bid.clone()));
            }
            row.push(blocks.len());
            block_origin.push((q, u));
            blocks.push(bid);
        }
        h_block.push(row);
        roots_of_copy.push(roots);
    }

    let graph = BipartiteGraph::new(&nodes, &blocks, &edges, BTreeMap::new())?;
    Ok(ConstructedGraph {
        graph,
        base: base.clone(),
        td: td.clone(),
        variant: Variant::TwoStep,
        iterations: 1,
        roots_of_copy,
        node_origin,
        block_origin,
        h_node,
        h_block,
    })
}

/// The 2-step construction applied `iterations` times with the same design;
/// provenance refers to the final round, whose base is the previous result.
pub fn iterate(base: &BipartiteGraph, td: &TransversalDesign, iterations: usize) -> Result<ConstructedGraph> {
    if iterations == 0 {
        return Err(Error::BadConstruction("iterations must be at least 1".into()));
    }
    let mut cg = two_step(base, td)?;
    for i in 1..iterations {
        cg = two_step(&cg.graph.clone(), td)?;
        cg.iterations = i + 1;
    }
    Ok(cg)
}

/// The 3-step construction: the dual of the 2-step result.
pub fn three_step(base: &BipartiteGraph, td: &TransversalDesign) -> Result<ConstructedGraph> {
    three_step_iterated(base, td, 1)
}

pub fn three_step_iterated(
    base: &BipartiteGraph,
    td: &TransversalDesign,
    iterations: usize,
) -> Result<ConstructedGraph> {
    let mut cg = iterate(base, td, iterations)?;
    cg.graph = cg.graph.dual();
    cg.variant = Variant::ThreeStep;
    Ok(cg)
}

/// Line-diameter preservation: when the base has line diameter at least 4,
/// the 2-step result has the same line diameter. Returns that common value,
/// or an error when the hypothesis or the conclusion fails.
pub fn check_line_diameter_preserved(base: &BipartiteGraph, td: &TransversalDesign) -> Result<usize> {
    let lambda = base.line_diameter()?;
    if lambda < 4 {
        return Err(Error::BadConstruction(format!(
            "line diameter {lambda} < 4; preservation is not promised"
        )));
    }
    let h = two_step(base, td)?;
    let built = h.graph().line_diameter()?;
    if built != lambda {
        return Err(Error::BadConstruction(format!(
            "line diameter changed: base {lambda}, constructed {built}"
        )));
    }
    Ok(lambda)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_and_circulant_profiles() {
        let c = gen_cycle(5).unwrap();
        let p = c.degree_profile();
        assert_eq!((c.node_count(), c.block_count(), p.d, p.delta), (5, 5, 2, 2));

        let g = gen_circulant(9, 3).unwrap();
        let p = g.degree_profile();
        assert_eq!((g.node_count(), g.block_count(), p.d, p.delta), (9, 9, 3, 3));
        assert!(p.regular && p.uniform && g.is_connected());

        assert!(gen_cycle(2).is_err());
        assert!(gen_circulant(5, 5).is_err());
    }

    #[test]
    fn double_cover_join_profile() {
        let g = double_cover_join(&gen_cycle(5).unwrap()).unwrap();
        let p = g.degree_profile();
        assert_eq!((g.node_count(), g.block_count(), p.d, p.delta), (10, 10, 3, 3));
        assert!(p.regular && p.uniform && g.is_connected());
        // rejects non-square input
        let k23 = BipartiteGraph::new(
            &["n0", "n1"],
            &["b0", "b1", "b2"],
            &[
                ("n0", "b0"),
                ("n0", "b1"),
                ("n0", "b2"),
                ("n1", "b0"),
                ("n1", "b1"),
                ("n1", "b2"),
            ],
            BTreeMap::new(),
        )
        .unwrap();
        assert!(double_cover_join(&k23).is_err());
    }

    #[test]
    fn two_step_counts() {
        let base = gen_cycle(5).unwrap();
        let td = TransversalDesign::build(2, 3).unwrap();
        let h = two_step(&base, &td).unwrap();
        let p = h.graph().degree_profile();
        // nk nodes, ek^2 blocks, degree dk, rank delta
        assert_eq!(h.graph().node_count(), 15);
        assert_eq!(h.graph().block_count(), 45);
        assert_eq!((p.d, p.delta), (6, 2));
        assert!(p.regular && p.uniform && h.graph().is_connected());
    }

    #[test]
    fn two_step_rejects_rank_mismatch() {
        let base = gen_circulant(9, 3).unwrap();
        let td = TransversalDesign::build(2, 3).unwrap();
        assert!(two_step(&base, &td).is_err());
    }

    #[test]
    fn copies_are_design_isomorphic() {
        let base = gen_circulant(9, 3).unwrap();
        let td = TransversalDesign::build(3, 3).unwrap();
        let h = two_step(&base, &td).unwrap();
        let g = h.graph();
        // each copy's incidence, translated through provenance, equals the design's
        for q in 0..base.block_count() {
            for u in 0..td.graph().block_count() {
                let hb = h.h_block(q, u);
                let mut groups: Vec<usize> = Vec::new();
                for &hn in g.nodes_of(hb) {
                    let tn = h.td_node_in_copy(q, hn).unwrap();
                    assert!(td.graph().incident(tn, u));
                    groups.push(td.group_of(tn));
                }
                groups.sort_unstable();
                assert_eq!(groups, (0..td.delta()).collect::<Vec<_>>());
            }
        }
    }

    #[test]
    fn blocks_partition_into_copies() {
        let base = gen_cycle(5).unwrap();
        let td = TransversalDesign::build(2, 2).unwrap();
        let h = two_step(&base, &td).unwrap();
        let mut per_copy = vec![0usize; base.block_count()];
        for hb in 0..h.graph().block_count() {
            per_copy[h.block_origin(hb).0] += 1;
        }
        assert!(per_copy.iter().all(|&c| c == 4));
    }

    #[test]
    fn generated_block_in_copy_is_incident_to_both() {
        let base = gen_circulant(9, 3).unwrap();
        let td = TransversalDesign::build(3, 3).unwrap();
        let h = two_step(&base, &td).unwrap();
        let q = 0;
        let roots = h.copy_roots(q).to_vec();
        let x = h.h_node(roots[0], 1);
        let y = h.h_node(roots[2], 2);
        let hb = h.generated_block_in_copy(q, x, y).unwrap();
        assert!(h.graph().incident(x, hb) && h.graph().incident(y, hb));
        assert_eq!(h.block_origin(hb).0, q);
        // same group fails
        let x2 = h.h_node(roots[0], 0);
        assert!(h.generated_block_in_copy(q, x, x2).is_err());
    }

    #[test]
    fn three_step_is_dual() {
        let base = gen_cycle(5).unwrap();
        let td = TransversalDesign::build(2, 3).unwrap();
        let h3 = three_step(&base, &td).unwrap();
        assert_eq!(h3.graph().node_count(), 45);
        assert_eq!(h3.graph().block_count(), 15);
        let p = h3.graph().degree_profile();
        assert_eq!((p.d, p.delta), (2, 6));
        assert!(h3.require_two_step().is_err());
    }

    #[test]
    fn iterate_counts() {
        let base = gen_cycle(5).unwrap();
        let td = TransversalDesign::build(2, 2).unwrap();
        let h2 = iterate(&base, &td, 2).unwrap();
        // n k^2 nodes, e k^4 blocks, d k^2 degree
        assert_eq!(h2.graph().node_count(), 20);
        assert_eq!(h2.graph().block_count(), 80);
        let p = h2.graph().degree_profile();
        assert_eq!((p.d, p.delta), (8, 2));
    }

    #[test]
    fn line_diameter_preserved_on_cycle() {
        let base = gen_cycle(5).unwrap();
        let td = TransversalDesign::build(2, 3).unwrap();
        assert_eq!(check_line_diameter_preserved(&base, &td).unwrap(), 4);
    }

    #[test]
    fn round_trip_rejects_tampering() {
        let base = gen_cycle(5).unwrap();
        let td = TransversalDesign::build(2, 2).unwrap();
        let h = two_step(&base, &td).unwrap();
        let j = h.to_json();
        let h2 = ConstructedGraph::from_json(&j).unwrap();
        assert_eq!(h.graph(), h2.graph());

        let mut bad = h.to_json();
        bad.graph.edges.swap(0, 7);
        // edge order alone does not change the graph; drop one instead
        bad.graph.edges.pop();
        assert!(ConstructedGraph::from_json(&bad).is_err());
    }
}
