//! [Δ,k]-transversal designs as bipartite graphs.
//!
//! A [Δ,k]-transversal design has Δ groups of k nodes and k² blocks of rank
//! Δ; every block meets every group in exactly one node and every pair of
//! nodes from distinct groups lies in exactly one block (the block they
//! *generate*). Designs are synthesized from a finite field of order k and
//! carry a precomputed pair → generated-block index.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bigraph::{BipartiteGraph, GraphJson};
use crate::error::{Error, Result};
use crate::field::FiniteField;

#[derive(Debug, Clone)]
pub struct TransversalDesign {
    delta: usize,
    k: usize,
    graph: BipartiteGraph,
    /// group -> node indices, in value order
    groups: Vec<Vec<usize>>,
    /// node -> group
    group_of: Vec<usize>,
    /// (lo node, hi node) -> generated block; first writer wins on invalid designs
    gen_index: HashMap<(usize, usize), usize>,
}

impl TransversalDesign {
    /// Assembles a design from its parts. Checks only structural sanity
    /// (ids resolve, groups partition the nodes); Definition-1 compliance is
    /// the job of [`TransversalDesign::verify`], so invalid designs remain
    /// loadable and reportable.
    pub fn from_parts(delta: usize, k: usize, group_ids: &[Vec<String>], graph: BipartiteGraph) -> Result<Self> {
        let mut groups = Vec::with_capacity(group_ids.len());
        let mut group_of = vec![usize::MAX; graph.node_count()];
        for (gi, ids) in group_ids.iter().enumerate() {
            let mut idxs = Vec::with_capacity(ids.len());
            for id in ids {
                let ni = graph.node_idx(id)?;
                if group_of[ni] != usize::MAX {
                    return Err(Error::BadDesignParams(format!(
                        "node {id:?} appears in more than one group"
                    )));
                }
                group_of[ni] = gi;
                idxs.push(ni);
            }
            groups.push(idxs);
        }
        if let Some(ni) = group_of.iter().position(|&g| g == usize::MAX) {
            return Err(Error::BadDesignParams(format!(
                "node {:?} belongs to no group",
                graph.node_id(ni)
            )));
        }

        let mut gen_index = HashMap::new();
        for b in 0..graph.block_count() {
            let members = graph.nodes_of(b);
            for (i, &x) in members.iter().enumerate() {
                for &y in &members[i + 1..] {
                    if group_of[x] != group_of[y] {
                        gen_index.entry((x.min(y), x.max(y))).or_insert(b);
                    }
                }
            }
        }
        Ok(Self {
            delta,
            k,
            graph,
            groups,
            group_of,
            gen_index,
        })
    }

    /// Deterministic construction for prime-power `k` and `2 <= delta <= k+1`.
    ///
    /// Blocks are indexed by pairs (a, b) of field elements; the node with
    /// value v in group i (i <= k) is incident to (a, b) iff v = a*c_i + b
    /// with c_i the i-th field element in the 0,1,… enumeration. When
    /// delta = k+1 the extra group's node v is incident to (a, b) iff v = a.
    pub fn build(delta: usize, k: usize) -> Result<Self> {
        if delta < 2 || delta > k + 1 {
            return Err(Error::BadDesignParams(format!(
                "delta={delta} outside 2..=k+1 for k={k}"
            )));
        }
        let field = FiniteField::new(k as u64)
            .map_err(|_| Error::BadDesignParams(format!("k={k} is not a supported prime power")))?;

        let node_id = |g: usize, v: u64| format!("g{}v{}", g + 1, v);
        let block_id = |a: u64, b: u64| format!("b{a}_{b}");

        let mut nodes = Vec::new();
        let mut group_ids = Vec::new();
        for g in 0..delta {
            let ids: Vec<String> = (0..k as u64).map(|v| node_id(g, v)).collect();
            nodes.extend(ids.clone());
            group_ids.push(ids);
        }
        let mut blocks = Vec::new();
        let mut edges = Vec::new();
        for a in 0..k as u64 {
            for b in 0..k as u64 {
                let bid = block_id(a, b);
                for g in 0..delta {
                    let v = if g < k {
                        field.add(field.mul(a, g as u64), b)
                    } else {
                        a
                    };
                    edges.push((node_id(g, v), bid.clone()));
                }
                blocks.push(bid);
            }
        }
        let graph = BipartiteGraph::new(&nodes, &blocks, &edges, BTreeMap::new())?;
        Self::from_parts(delta, k, &group_ids, graph)
    }

    /// The unique [3,2]-transversal design, with its traditional labelling:
    /// groups {r1,s1}, {r2,s2}, {r3,s3} and blocks B1..B4.
    pub fn canonical_3_2() -> Self {
        let nodes = ["r1", "s1", "r2", "s2", "r3", "s3"];
        let blocks = ["B1", "B2", "B3", "B4"];
        let edges = [
            ("r1", "B1"),
            ("r1", "B2"),
            ("s1", "B3"),
            ("s1", "B4"),
            ("r2", "B1"),
            ("r2", "B3"),
            ("s2", "B2"),
            ("s2", "B4"),
            ("r3", "B1"),
            ("r3", "B4"),
            ("s3", "B2"),
            ("s3", "B3"),
        ];
        let graph = BipartiteGraph::new(&nodes, &blocks, &edges, BTreeMap::new()).unwrap();
        let groups = vec![
            vec!["r1".into(), "s1".into()],
            vec!["r2".into(), "s2".into()],
            vec!["r3".into(), "s3".into()],
        ];
        Self::from_parts(3, 2, &groups, graph).unwrap()
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn graph(&self) -> &BipartiteGraph {
        &self.graph
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    pub fn group_of(&self, node: usize) -> usize {
        self.group_of[node]
    }

    /// The unique node of `group` incident to `block`, when the design is
    /// valid at that intersection.
    pub fn member_in_group(&self, block: usize, group: usize) -> Result<usize> {
        let mut found = None;
        for &n in self.graph.nodes_of(block) {
            if self.group_of[n] == group {
                if found.is_some() {
                    return Err(Error::BadDesignParams(format!(
                        "block {} meets group {} more than once",
                        self.graph.block_id(block),
                        group + 1
                    )));
                }
                found = Some(n);
            }
        }
        found.ok_or_else(|| {
            Error::BadDesignParams(format!(
                "block {} misses group {}",
                self.graph.block_id(block),
                group + 1
            ))
        })
    }

    /// The unique block incident to both nodes; errors on a same-group pair.
    pub fn generated_block(&self, x: usize, y: usize) -> Result<usize> {
        if self.group_of[x] == self.group_of[y] {
            return Err(Error::SameGroupPair(
                self.graph.node_id(x).to_owned(),
                self.graph.node_id(y).to_owned(),
            ));
        }
        self.gen_index
            .get(&(x.min(y), x.max(y)))
            .copied()
            .ok_or_else(|| {
                Error::BadDesignParams(format!(
                    "no block generated by {} and {}",
                    self.graph.node_id(x),
                    self.graph.node_id(y)
                ))
            })
    }

    /// Checks every clause of the transversal-design definition and lists
    /// each violation. An empty report means the design is valid.
    pub fn verify(&self) -> TdReport {
        let mut violations = Vec::new();
        let g = &self.graph;
        if self.groups.len() != self.delta {
            violations.push(format!(
                "expected {} groups, found {}",
                self.delta,
                self.groups.len()
            ));
        }
        for (gi, grp) in self.groups.iter().enumerate() {
            if grp.len() != self.k {
                violations.push(format!("group {} has size {}, expected {}", gi + 1, grp.len(), self.k));
            }
        }
        if g.node_count() != self.delta * self.k {
            violations.push(format!(
                "node count {} != delta*k = {}",
                g.node_count(),
                self.delta * self.k
            ));
        }
        if g.block_count() != self.k * self.k {
            violations.push(format!(
                "block count {} != k^2 = {}",
                g.block_count(),
                self.k * self.k
            ));
        }
        for b in 0..g.block_count() {
            for gi in 0..self.groups.len() {
                let hits = g
                    .nodes_of(b)
                    .iter()
                    .filter(|&&n| self.group_of[n] == gi)
                    .count();
                if hits != 1 {
                    violations.push(format!(
                        "|D_{} ∩ {}| = {hits}, expected 1",
                        gi + 1,
                        g.block_id(b)
                    ));
                }
            }
        }
        // every cross-group pair in exactly one block
        let mut cover: HashMap<(usize, usize), usize> = HashMap::new();
        for b in 0..g.block_count() {
            let members = g.nodes_of(b);
            for (i, &x) in members.iter().enumerate() {
                for &y in &members[i + 1..] {
                    if self.group_of[x] != self.group_of[y] {
                        *cover.entry((x.min(y), x.max(y))).or_insert(0) += 1;
                    }
                }
            }
        }
        for x in 0..g.node_count() {
            for y in x + 1..g.node_count() {
                if self.group_of[x] != self.group_of[y] {
                    let c = cover.get(&(x, y)).copied().unwrap_or(0);
                    if c != 1 {
                        violations.push(format!(
                            "pair ({}, {}) covered by {c} blocks, expected 1",
                            g.node_id(x),
                            g.node_id(y)
                        ));
                    }
                }
            }
        }
        TdReport { violations }
    }

    /// Group-respecting isomorphism test by exhaustive relabelling; intended
    /// for tiny designs only.
    pub fn isomorphic(&self, other: &TransversalDesign) -> bool {
        if self.delta != other.delta || self.k != other.k {
            return false;
        }
        let my_blocks = block_sets(self);
        let other_blocks = {
            let mut v = block_sets(other);
            v.sort();
            v
        };
        let group_perms = permutations(self.delta);
        let value_perms = permutations(self.k);
        // map: group i of self -> group gp[i] of other, value j -> vp_i[j]
        let mut vp_choice = vec![0usize; self.delta];
        for gp in &group_perms {
            if try_value_perms(self, other, gp, &value_perms, &mut vp_choice, 0, &my_blocks, &other_blocks) {
                return true;
            }
        }
        false
    }

    // ---- serialization ----

    pub fn to_json(&self) -> TdJson {
        TdJson {
            delta: self.delta,
            k: self.k,
            groups: self
                .groups
                .iter()
                .map(|g| g.iter().map(|&n| self.graph.node_id(n).to_owned()).collect())
                .collect(),
            graph: self.graph.to_json(),
        }
    }

    pub fn from_json(j: &TdJson) -> Result<Self> {
        let graph = BipartiteGraph::from_json(&j.graph)?;
        Self::from_parts(j.delta, j.k, &j.groups, graph)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(&self.to_json())?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let j: TdJson = serde_json::from_str(&text)?;
        Self::from_json(&j)
    }
}

/// Per-block node sets as (group, value-position) pairs of `t`'s labelling.
fn block_sets(t: &TransversalDesign) -> Vec<Vec<(usize, usize)>> {
    (0..t.graph.block_count())
        .map(|b| {
            let mut s: Vec<(usize, usize)> = t
                .graph
                .nodes_of(b)
                .iter()
                .map(|&n| {
                    let g = t.group_of[n];
                    let v = t.groups[g].iter().position(|&m| m == n).unwrap();
                    (g, v)
                })
                .collect();
            s.sort();
            s
        })
        .collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut items: Vec<usize> = (0..n).collect();
    heap_permute(&mut items, n, &mut out);
    out
}

fn heap_permute(items: &mut Vec<usize>, n: usize, out: &mut Vec<Vec<usize>>) {
    if n <= 1 {
        out.push(items.clone());
        return;
    }
    for i in 0..n {
        heap_permute(items, n - 1, out);
        if n % 2 == 0 {
            items.swap(i, n - 1);
        } else {
            items.swap(0, n - 1);
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn try_value_perms(
    a: &TransversalDesign,
    b: &TransversalDesign,
    gp: &[usize],
    value_perms: &[Vec<usize>],
    vp_choice: &mut Vec<usize>,
    depth: usize,
    a_blocks: &[Vec<(usize, usize)>],
    b_blocks_sorted: &[Vec<(usize, usize)>],
) -> bool {
    if depth == a.delta {
        let mut mapped: Vec<Vec<(usize, usize)>> = a_blocks
            .iter()
            .map(|set| {
                let mut m: Vec<(usize, usize)> = set
                    .iter()
                    .map(|&(g, v)| (gp[g], value_perms[vp_choice[g]][v]))
                    .collect();
                m.sort();
                m
            })
            .collect();
        mapped.sort();
        return mapped == b_blocks_sorted;
    }
    for c in 0..value_perms.len() {
        vp_choice[depth] = c;
        if try_value_perms(a, b, gp, value_perms, vp_choice, depth + 1, a_blocks, b_blocks_sorted) {
            return true;
        }
    }
    false
}

/// Verification report: one entry per violated clause.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TdReport {
    pub violations: Vec<String>,
}

impl TdReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TdJson {
    pub delta: usize,
    pub k: usize,
    pub groups: Vec<Vec<String>>,
    pub graph: GraphJson,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn build_3_2_matches_counts_and_fig() {
        let t = TransversalDesign::build(3, 2).unwrap();
        assert_eq!(t.graph().node_count(), 6);
        assert_eq!(t.graph().block_count(), 4);
        assert!(t.verify().is_valid());
        assert!(t.isomorphic(&TransversalDesign::canonical_3_2()));
    }

    #[test]
    fn build_2_3_and_5_4_verify() {
        for (d, k) in [(2, 3), (5, 4)] {
            let t = TransversalDesign::build(d, k).unwrap();
            assert_eq!(t.graph().node_count(), d * k);
            assert_eq!(t.graph().block_count(), k * k);
            assert!(t.verify().is_valid(), "({d},{k}): {:?}", t.verify().violations);
        }
    }

    #[test]
    fn bad_params_rejected() {
        assert!(TransversalDesign::build(1, 2).is_err());
        assert!(TransversalDesign::build(4, 2).is_err()); // delta > k+1
        assert!(TransversalDesign::build(3, 6).is_err()); // k not a prime power
    }

    #[test]
    fn canonical_3_2_structure() {
        let t = TransversalDesign::canonical_3_2();
        assert!(t.verify().is_valid());
        let r3 = t.graph().node_idx("r3").unwrap();
        let blocks: Vec<&str> = t
            .graph()
            .blocks_of(r3)
            .iter()
            .map(|&b| t.graph().block_id(b))
            .collect();
        assert_eq!(blocks, vec!["B1", "B4"]);
        // (r1, r2) generate B1
        let r1 = t.graph().node_idx("r1").unwrap();
        let r2 = t.graph().node_idx("r2").unwrap();
        assert_eq!(t.graph().block_id(t.generated_block(r1, r2).unwrap()), "B1");
    }

    #[test]
    fn generated_block_same_group_errors() {
        let t = TransversalDesign::canonical_3_2();
        let r1 = t.graph().node_idx("r1").unwrap();
        let s1 = t.graph().node_idx("s1").unwrap();
        assert!(t.generated_block(r1, s1).is_err());
        assert!(t.generated_block(r1, r1).is_err());
    }

    #[test]
    fn gen_blocks_bijective_in_2_3() {
        let t = TransversalDesign::build(2, 3).unwrap();
        let mut seen = std::collections::HashSet::new();
        for &x in &t.groups()[0].clone() {
            for &y in &t.groups()[1].clone() {
                let b = t.generated_block(x, y).unwrap();
                assert!(t.graph().incident(x, b) && t.graph().incident(y, b));
                assert_eq!(t.generated_block(y, x).unwrap(), b);
                assert!(seen.insert(b), "block reused");
            }
        }
        assert_eq!(seen.len(), 9);
    }

    #[test]
    fn mutation_deleted_incidence_reported() {
        let t = TransversalDesign::build(3, 2).unwrap();
        let mut j = t.to_json();
        j.graph.edges.pop();
        // removing an edge may isolate nothing here, so the graph still loads
        let mutated = TransversalDesign::from_json(&j).unwrap();
        let report = mutated.verify();
        assert!(!report.is_valid());
        assert!(report.violations.iter().any(|v| v.contains("expected 1")));
    }

    #[test]
    fn mutation_duplicated_block_reported() {
        let t = TransversalDesign::build(3, 2).unwrap();
        let mut j = t.to_json();
        // clone the first block's incidences under a fresh id, replacing the last block
        let dup_of = j.graph.blocks[0].clone();
        let victim = j.graph.blocks.last().unwrap().clone();
        j.graph.edges.retain(|[_, b]| *b != victim);
        let copies: Vec<[String; 2]> = j
            .graph
            .edges
            .iter()
            .filter(|[_, b]| *b == dup_of)
            .map(|[n, _]| [n.clone(), victim.clone()])
            .collect();
        j.graph.edges.extend(copies);
        let mutated = TransversalDesign::from_json(&j).unwrap();
        let report = mutated.verify();
        assert!(report
            .violations
            .iter()
            .any(|v| v.contains("covered by 2") || v.contains("covered by 0")));
    }

    #[test]
    fn round_trip() {
        let t = TransversalDesign::build(2, 3).unwrap();
        let t2 = TransversalDesign::from_json(&t.to_json()).unwrap();
        assert_eq!(t.graph(), t2.graph());
        assert!(t2.verify().is_valid());
    }
}
