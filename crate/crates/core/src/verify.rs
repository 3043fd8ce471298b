//! Independent verification of path sets.
//!
//! Everything the routing module produces is re-checked here from first
//! principles: path well-formedness, pairwise disjointness (internal or
//! edge), length bounds, and optimality via a max-flow computation of the
//! Menger count between the endpoints.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::bigraph::{validate_path, AltPath, BipartiteGraph, Elem};
use crate::error::{Error, Result};
use crate::tdesign::TransversalDesign;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DisjointMode {
    /// Pairwise internally-disjoint: an element on two paths must be an
    /// endpoint of every path it lies on.
    Internal,
    /// Pairwise edge-disjoint: no incidence is traversed twice.
    Edge,
}

/// A set of paths with its claimed guarantees.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PathSet {
    pub paths: Vec<AltPath>,
    pub mode: DisjointMode,
    pub length_bound: usize,
}

impl PathSet {
    /// All violations of the claims: malformed paths, disjointness
    /// failures, and length-bound breaches. Empty means the set is good.
    pub fn violations(&self, g: &BipartiteGraph) -> Vec<String> {
        let mut out = disjoint_violations(g, &self.paths, self.mode);
        for (i, p) in self.paths.iter().enumerate() {
            if p.len() > self.length_bound {
                out.push(format!(
                    "path {i} has length {} > bound {}",
                    p.len(),
                    self.length_bound
                ));
            }
        }
        out
    }

    pub fn check(&self, g: &BipartiteGraph) -> Result<()> {
        let v = self.violations(g);
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::RoutingSelfCheck(v.join("; ")))
        }
    }

    pub fn max_len(&self) -> usize {
        self.paths.iter().map(AltPath::len).max().unwrap_or(0)
    }
}

/// Disjointness violations of a path set, with witnesses.
pub fn disjoint_violations(g: &BipartiteGraph, paths: &[AltPath], mode: DisjointMode) -> Vec<String> {
    let mut out = Vec::new();
    let mut resolved = Vec::new();
    for (i, p) in paths.iter().enumerate() {
        if !validate_path(g, p) {
            out.push(format!("path {i} is not a valid alternating path"));
            return out;
        }
        resolved.push(p.resolve(g).unwrap());
    }
    match mode {
        DisjointMode::Internal => {
            // element -> (paths it lies on, paths it is interior to)
            let mut on: HashMap<Elem, Vec<usize>> = HashMap::new();
            let mut interior: HashMap<Elem, Vec<usize>> = HashMap::new();
            for (i, elems) in resolved.iter().enumerate() {
                for (pos, &e) in elems.iter().enumerate() {
                    on.entry(e).or_default().push(i);
                    if pos != 0 && pos + 1 != elems.len() {
                        interior.entry(e).or_default().push(i);
                    }
                }
            }
            for (e, paths_on) in &on {
                if paths_on.len() >= 2 {
                    if let Some(ints) = interior.get(e) {
                        out.push(format!(
                            "{} is interior to path {} but also lies on path {}",
                            g.elem_id(*e),
                            ints[0],
                            paths_on.iter().find(|&&p| p != ints[0]).unwrap()
                        ));
                    }
                }
            }
        }
        DisjointMode::Edge => {
            let mut used: HashMap<(usize, usize), usize> = HashMap::new();
            for (i, elems) in resolved.iter().enumerate() {
                for w in elems.windows(2) {
                    let key = match (w[0], w[1]) {
                        (Elem::Node(n), Elem::Block(b)) | (Elem::Block(b), Elem::Node(n)) => (n, b),
                        _ => unreachable!(),
                    };
                    if let Some(&j) = used.get(&key) {
                        out.push(format!(
                            "incidence ({}, {}) used by paths {j} and {i}",
                            g.node_id(key.0),
                            g.block_id(key.1)
                        ));
                    }
                    used.insert(key, i);
                }
            }
        }
    }
    out
}

const INF: i64 = i64::MAX / 4;

/// Maximum number of pairwise internally-disjoint (or edge-disjoint) paths
/// between two distinct elements, by Edmonds-Karp max-flow on the split
/// graph: element x becomes in(x) -> out(x) with capacity 1 for interior
/// elements in internal mode (unbounded otherwise), and every incidence
/// contributes unit arcs both ways.
pub fn menger_count(g: &BipartiteGraph, src: Elem, dst: Elem, mode: DisjointMode) -> Result<usize> {
    if src == dst {
        return Err(Error::BadRouting("source equals destination".into()));
    }
    let total = g.node_count() + g.block_count();
    let ord = |e: Elem| match e {
        Elem::Node(i) => i,
        Elem::Block(i) => g.node_count() + i,
    };
    // vertices: in(x) = 2x, out(x) = 2x+1
    let vcount = 2 * total;
    let mut arcs: Vec<(usize, usize, i64)> = Vec::new();
    for x in 0..total {
        let e = if x < g.node_count() {
            Elem::Node(x)
        } else {
            Elem::Block(x - g.node_count())
        };
        let cap = if mode == DisjointMode::Internal && e != src && e != dst {
            1
        } else {
            INF
        };
        arcs.push((2 * x, 2 * x + 1, cap));
    }
    for n in 0..g.node_count() {
        for &b in g.blocks_of(n) {
            let (xn, xb) = (ord(Elem::Node(n)), ord(Elem::Block(b)));
            arcs.push((2 * xn + 1, 2 * xb, 1));
            arcs.push((2 * xb + 1, 2 * xn, 1));
        }
    }

    // residual graph in arc-list form with paired reverse arcs
    let mut head = Vec::with_capacity(arcs.len() * 2);
    let mut cap = Vec::with_capacity(arcs.len() * 2);
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); vcount];
    for &(u, v, c) in &arcs {
        adj[u].push(head.len());
        head.push(v);
        cap.push(c);
        adj[v].push(head.len());
        head.push(u);
        cap.push(0);
    }
    let s = 2 * ord(src) + 1;
    let t = 2 * ord(dst);
    let mut flow = 0usize;
    loop {
        let mut prev_arc = vec![usize::MAX; vcount];
        let mut seen = vec![false; vcount];
        seen[s] = true;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            if u == t {
                break;
            }
            for &a in &adj[u] {
                let v = head[a];
                if cap[a] > 0 && !seen[v] {
                    seen[v] = true;
                    prev_arc[v] = a;
                    queue.push_back(v);
                }
            }
        }
        if !seen[t] {
            break;
        }
        let mut v = t;
        while v != s {
            let a = prev_arc[v];
            cap[a] -= 1;
            cap[a ^ 1] += 1;
            v = head[a ^ 1];
        }
        flow += 1;
    }
    Ok(flow)
}

/// Exhaustive enumeration of [3,2]-transversal designs on a fixed node set,
/// up to group-respecting isomorphism. Returns the number of raw candidate
/// block sets considered and one representative per isomorphism class.
pub fn enumerate_td_3_2() -> (usize, Vec<TransversalDesign>) {
    let node_ids = ["x1", "y1", "x2", "y2", "x3", "y3"];
    let groups: Vec<Vec<String>> = vec![
        vec!["x1".into(), "y1".into()],
        vec!["x2".into(), "y2".into()],
        vec!["x3".into(), "y3".into()],
    ];
    // the 8 transversals: pick one node per group
    let transversals: Vec<[usize; 3]> = (0..8)
        .map(|m| [m & 1, (m >> 1) & 1, (m >> 2) & 1])
        .collect();

    let mut raw = 0usize;
    let mut classes: Vec<TransversalDesign> = Vec::new();
    // all 4-subsets of the 8 transversals
    for a in 0..8 {
        for b in a + 1..8 {
            for c in b + 1..8 {
                for d in c + 1..8 {
                    raw += 1;
                    let pick = [a, b, c, d];
                    let blocks: Vec<String> = (1..=4).map(|i| format!("U{i}")).collect();
                    let mut edges = Vec::new();
                    for (bi, &ti) in pick.iter().enumerate() {
                        for (gi, &choice) in transversals[ti].iter().enumerate() {
                            edges.push((node_ids[2 * gi + choice].to_owned(), blocks[bi].clone()));
                        }
                    }
                    let nodes: Vec<String> = node_ids.iter().map(|s| s.to_string()).collect();
                    let Ok(graph) = BipartiteGraph::new(&nodes, &blocks, &edges, Default::default())
                    else {
                        continue; // an unused node: not a design
                    };
                    let Ok(td) = TransversalDesign::from_parts(3, 2, &groups, graph) else {
                        continue;
                    };
                    if !td.verify().is_valid() {
                        continue;
                    }
                    if !classes.iter().any(|rep| rep.isomorphic(&td)) {
                        classes.push(td);
                    }
                }
            }
        }
    }
    (raw, classes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::gen_cycle;

    #[test]
    fn internal_violation_has_witness() {
        let g = gen_cycle(6).unwrap();
        // two paths from n0 to n3 sharing interior node n1
        let p1 = AltPath::new(
            ["n0", "e0", "n1", "e1", "n2", "e2", "n3"]
                .map(str::to_owned)
                .to_vec(),
        );
        let p2 = AltPath::new(["n0", "e0", "n1"].map(str::to_owned).to_vec());
        let v = disjoint_violations(&g, &[p1.clone(), p2], DisjointMode::Internal);
        assert!(!v.is_empty());
        assert!(v.iter().any(|w| w.contains("interior")));
        // alone, the path is fine
        assert!(disjoint_violations(&g, &[p1], DisjointMode::Internal).is_empty());
    }

    #[test]
    fn edge_violation_has_witness() {
        let g = gen_cycle(6).unwrap();
        let p1 = AltPath::new(["n0", "e0", "n1"].map(str::to_owned).to_vec());
        let p2 = AltPath::new(["e0", "n1", "e1"].map(str::to_owned).to_vec());
        let v = disjoint_violations(&g, &[p1, p2], DisjointMode::Edge);
        assert!(v.iter().any(|w| w.contains("(n1, e0)")));
    }

    #[test]
    fn shared_endpoints_are_fine() {
        let g = gen_cycle(6).unwrap();
        let cw = AltPath::new(
            ["e0", "n1", "e1", "n2", "e2", "n3", "e3"]
                .map(str::to_owned)
                .to_vec(),
        );
        let ccw = AltPath::new(
            ["e0", "n0", "e5", "n5", "e4", "n4", "e3"]
                .map(str::to_owned)
                .to_vec(),
        );
        for mode in [DisjointMode::Internal, DisjointMode::Edge] {
            assert!(disjoint_violations(&g, &[cw.clone(), ccw.clone()], mode).is_empty());
        }
    }

    #[test]
    fn menger_on_cycle_is_two() {
        let g = gen_cycle(6).unwrap();
        let (a, b) = (g.elem("e0").unwrap(), g.elem("e3").unwrap());
        assert_eq!(menger_count(&g, a, b, DisjointMode::Internal).unwrap(), 2);
        assert_eq!(menger_count(&g, a, b, DisjointMode::Edge).unwrap(), 2);
        let (n, m) = (g.elem("n0").unwrap(), g.elem("n3").unwrap());
        assert_eq!(menger_count(&g, n, m, DisjointMode::Internal).unwrap(), 2);
    }

    #[test]
    fn menger_on_design_blocks() {
        // between two blocks of a [3,3]-design sharing no node there are
        // exactly 3 internally-disjoint paths (one per group)
        let t = TransversalDesign::build(3, 3).unwrap();
        let g = t.graph();
        let b0 = g.block_idx("b0_0").unwrap();
        let other = (0..g.block_count())
            .find(|&b| b != b0 && g.nodes_of(b).iter().all(|n| !g.nodes_of(b0).contains(n)))
            .unwrap();
        let c = menger_count(g, Elem::Block(b0), Elem::Block(other), DisjointMode::Internal).unwrap();
        assert_eq!(c, 3);
    }

    #[test]
    fn menger_adjacent_pair() {
        let g = gen_cycle(6).unwrap();
        let (n, e) = (g.elem("n0").unwrap(), g.elem("e0").unwrap());
        // direct edge plus the long way round
        assert_eq!(menger_count(&g, n, e, DisjointMode::Internal).unwrap(), 2);
    }

    #[test]
    fn pathset_length_bound_enforced() {
        let g = gen_cycle(6).unwrap();
        let ps = PathSet {
            paths: vec![AltPath::new(
                ["n0", "e0", "n1", "e1", "n2"].map(str::to_owned).to_vec(),
            )],
            mode: DisjointMode::Internal,
            length_bound: 2,
        };
        assert!(ps.check(&g).is_err());
    }

    #[test]
    fn unique_3_2_design() {
        let (raw, classes) = enumerate_td_3_2();
        assert_eq!(raw, 70);
        assert_eq!(classes.len(), 1);
        assert!(classes[0].isomorphic(&TransversalDesign::canonical_3_2()));
        assert!(classes[0].isomorphic(&TransversalDesign::build(3, 2).unwrap()));
    }
}
