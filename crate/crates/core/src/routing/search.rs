//! Bounded exhaustive search for disjoint path systems.
//!
//! Used as a completeness fallback when a constructive routine hits an
//! unlucky configuration, and to settle the small ad-hoc cases directly.
//! Enumerates every simple alternating path between the endpoints up to a
//! length bound (optionally restricted to a set of allowed elements), then
//! backtracks over the candidates for a pairwise-disjoint selection.

use std::collections::HashSet;

use crate::bigraph::{AltPath, BipartiteGraph, Elem};
use crate::verify::DisjointMode;

const ENUMERATION_CAP: usize = 200_000;

/// Up to `count` pairwise-disjoint paths from `src` to `dst`, each of
/// length at most `bound`. Interior elements may be restricted to
/// `allowed`. Returns `None` if no such system exists within the cap.
pub fn disjoint_paths_search(
    g: &BipartiteGraph,
    src: Elem,
    dst: Elem,
    count: usize,
    bound: usize,
    mode: DisjointMode,
    allowed: Option<&HashSet<Elem>>,
) -> Option<Vec<AltPath>> {
    if src == dst || count == 0 {
        return None;
    }
    let ok = |e: Elem| allowed.map_or(true, |a| a.contains(&e));
    if !ok(src) || !ok(dst) {
        return None;
    }

    // distance to dst over the allowed subgraph, for pruning
    let total = g.node_count() + g.block_count();
    let vid = |e: Elem| match e {
        Elem::Node(i) => i,
        Elem::Block(i) => g.node_count() + i,
    };
    let neighbours = |e: Elem| -> Vec<Elem> {
        match e {
            Elem::Node(i) => g.blocks_of(i).iter().map(|&b| Elem::Block(b)).collect(),
            Elem::Block(i) => g.nodes_of(i).iter().map(|&n| Elem::Node(n)).collect(),
        }
    };
    let mut dist = vec![usize::MAX; total];
    dist[vid(dst)] = 0;
    let mut queue = std::collections::VecDeque::from([dst]);
    while let Some(e) = queue.pop_front() {
        let d = dist[vid(e)];
        for nb in neighbours(e) {
            if ok(nb) && dist[vid(nb)] == usize::MAX {
                dist[vid(nb)] = d + 1;
                queue.push_back(nb);
            }
        }
    }
    if dist[vid(src)] > bound {
        return None;
    }

    // depth-first enumeration of simple paths
    let mut candidates: Vec<Vec<Elem>> = Vec::new();
    let mut stack: Vec<Elem> = vec![src];
    let mut on_path = vec![false; total];
    on_path[vid(src)] = true;
    fn dfs(
        cur: Elem,
        dst: Elem,
        bound: usize,
        dist: &[usize],
        vid: &dyn Fn(Elem) -> usize,
        neighbours: &dyn Fn(Elem) -> Vec<Elem>,
        ok: &dyn Fn(Elem) -> bool,
        stack: &mut Vec<Elem>,
        on_path: &mut Vec<bool>,
        out: &mut Vec<Vec<Elem>>,
    ) {
        if out.len() >= ENUMERATION_CAP {
            return;
        }
        for nb in neighbours(cur) {
            if nb == dst {
                if stack.len() <= bound {
                    let mut p = stack.clone();
                    p.push(dst);
                    out.push(p);
                }
                continue;
            }
            let i = vid(nb);
            if on_path[i] || !ok(nb) || dist[i] == usize::MAX {
                continue;
            }
            if stack.len() + dist[i] > bound {
                continue;
            }
            stack.push(nb);
            on_path[i] = true;
            dfs(nb, dst, bound, dist, vid, neighbours, ok, stack, on_path, out);
            on_path[i] = false;
            stack.pop();
        }
    }
    dfs(
        src,
        dst,
        bound,
        &dist,
        &vid,
        &neighbours,
        &ok,
        &mut stack,
        &mut on_path,
        &mut candidates,
    );
    candidates.sort_by_key(Vec::len);

    // precompute conflict keys: interior elements or edges
    let keys: Vec<HashSet<(usize, usize)>> = candidates
        .iter()
        .map(|p| match mode {
            DisjointMode::Internal => p[1..p.len() - 1].iter().map(|&e| (vid(e), 0)).collect(),
            DisjointMode::Edge => p.windows(2).map(|w| (vid(w[0]), vid(w[1]))).collect(),
        })
        .collect();

    let mut chosen: Vec<usize> = Vec::new();
    fn select(
        from: usize,
        need: usize,
        keys: &[HashSet<(usize, usize)>],
        chosen: &mut Vec<usize>,
    ) -> bool {
        if need == 0 {
            return true;
        }
        for i in from..keys.len() {
            if keys.len() - i < need {
                return false;
            }
            if chosen.iter().any(|&c| !keys[c].is_disjoint(&keys[i])) {
                continue;
            }
            chosen.push(i);
            if select(i + 1, need - 1, keys, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    if !select(0, count, &keys, &mut chosen) {
        return None;
    }
    Some(
        chosen
            .iter()
            .map(|&i| AltPath::from_elems(g, &candidates[i]))
            .collect(),
    )
}
