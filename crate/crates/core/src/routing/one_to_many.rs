//! Edge-disjoint paths from one block of a 2-step graph to many.
//!
//! A breadth-first skeleton tree in the base graph, rooted at the source
//! block's copy and pruned to the copies holding targets, organises the
//! construction: each tree copy funnels its own targets and the handoff
//! points of its subtrees towards its parent with the within-design fan-in,
//! and the root copy finishes the job with the within-design one-to-many.
//! Copies contribute disjoint edge sets, so the concatenations are
//! edge-disjoint; incidental element repeats are removed by loop erasure.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::bigraph::{AltPath, Elem};
use crate::construct::ConstructedGraph;
use crate::error::{Error, Result};
use crate::verify::{DisjointMode, PathSet};

use super::one_to_one::lift_td_path;
use super::td_paths;

/// Delta pairwise edge-disjoint paths from `src` to the target blocks
/// (`paths[i]` ends at `targets[i]`), each of length at most 3h/2 + 7
/// where h is the skeleton depth. Requires delta <= k; repeated targets
/// are allowed, the source is not.
pub fn one_to_many(h: &ConstructedGraph, src: &str, targets: &[String]) -> Result<PathSet> {
    h.require_two_step()?;
    let g = h.graph();
    let td = h.td();
    let (delta, k) = (td.delta(), td.k());
    if delta > k {
        return Err(Error::BadRouting(format!(
            "construction needs delta <= k, got delta={delta}, k={k}"
        )));
    }
    if targets.len() != delta {
        return Err(Error::BadRouting(format!(
            "expected {delta} targets, got {}",
            targets.len()
        )));
    }
    let hb = g.block_idx(src)?;
    let (q0, u0) = h.block_origin(hb);
    let mut origin = Vec::with_capacity(targets.len());
    for t in targets {
        let ht = g.block_idx(t)?;
        if ht == hb {
            return Err(Error::BadRouting("the source block cannot be a target".into()));
        }
        origin.push((ht, h.block_origin(ht)));
    }

    // breadth-first tree in the base graph from the source copy
    let base = h.base();
    let dists = base.bfs_distances(Elem::Block(q0));
    let vid = |e: Elem| match e {
        Elem::Node(n) => n,
        Elem::Block(b) => base.node_count() + b,
    };
    let mut parent: Vec<Option<Elem>> = vec![None; base.node_count() + base.block_count()];
    let mut queue = VecDeque::from([Elem::Block(q0)]);
    let mut seen = vec![false; parent.len()];
    seen[vid(Elem::Block(q0))] = true;
    while let Some(e) = queue.pop_front() {
        let nbrs: Vec<Elem> = match e {
            Elem::Node(n) => base.blocks_of(n).iter().map(|&b| Elem::Block(b)).collect(),
            Elem::Block(b) => base.nodes_of(b).iter().map(|&n| Elem::Node(n)).collect(),
        };
        for nb in nbrs {
            if !seen[vid(nb)] {
                seen[vid(nb)] = true;
                parent[vid(nb)] = Some(e);
                queue.push_back(nb);
            }
        }
    }

    // prune to the copies that matter
    let mut own: HashMap<usize, Vec<(usize, usize)>> = HashMap::new(); // copy -> (target idx, design block)
    let mut tree_blocks: HashSet<usize> = [q0].into();
    let mut parent_node: HashMap<usize, usize> = HashMap::new();
    let mut children: HashMap<usize, Vec<usize>> = HashMap::new();
    let mut depth = 0usize;
    for (i, &(_, (qt, ut))) in origin.iter().enumerate() {
        own.entry(qt).or_default().push((i, ut));
        depth = depth.max(
            dists[vid(Elem::Block(qt))].ok_or(Error::Disconnected)?,
        );
        let mut q = qt;
        while q != q0 {
            let Some(Elem::Node(p)) = parent[vid(Elem::Block(q))] else {
                return Err(Error::Disconnected);
            };
            let Some(Elem::Block(qp)) = parent[vid(Elem::Node(p))] else {
                return Err(Error::Disconnected);
            };
            if tree_blocks.insert(q) {
                parent_node.insert(q, p);
                children.entry(qp).or_default().push(q);
            }
            q = qp;
        }
    }

    // funnel bottom-up: deepest copies first
    let mut order: Vec<usize> = tree_blocks.iter().copied().filter(|&q| q != q0).collect();
    order.sort_by_key(|&q| std::cmp::Reverse(dists[vid(Elem::Block(q))].unwrap_or(0)));
    let mut pending: HashMap<usize, Vec<(usize, AltPath)>> = HashMap::new();

    let collect_requests = |q: usize, pending: &mut HashMap<usize, Vec<(usize, AltPath)>>| -> Result<Vec<(usize, Elem, Option<AltPath>)>> {
        let mut reqs: Vec<(usize, Elem, Option<AltPath>)> = own
            .get(&q)
            .into_iter()
            .flatten()
            .map(|&(i, ut)| (i, Elem::Block(ut), None))
            .collect();
        for child in children.get(&q).into_iter().flatten() {
            for (i, path) in pending.remove(child).into_iter().flatten() {
                let start = path
                    .source()
                    .and_then(|id| g.node_idx(id).ok())
                    .ok_or_else(|| Error::RoutingSelfCheck("pending path has no source".into()))?;
                reqs.push((i, Elem::Node(h.td_node_in_copy(q, start)?), Some(path)));
            }
        }
        Ok(reqs)
    };

    for &q in &order {
        let reqs = collect_requests(q, &mut pending)?;
        let elems: Vec<Elem> = reqs.iter().map(|&(_, e, _)| e).collect();
        let p0 = parent_node[&q];
        let d0 = h
            .group_position(q, p0)
            .ok_or_else(|| Error::RoutingSelfCheck("parent group missing from copy".into()))?;
        let fan = td_paths::fan_in(td, d0, &elems)?;
        let entry = pending.entry(q).or_default();
        for ((i, _, tail), p) in reqs.into_iter().zip(&fan.paths) {
            let lifted = lift_td_path(h, q, p)?;
            entry.push((i, join(g, lifted, &tail)?));
        }
    }

    let reqs = collect_requests(q0, &mut pending)?;
    let elems: Vec<Elem> = reqs.iter().map(|&(_, e, _)| e).collect();
    let start = td_paths::block_to_targets(td, u0, &elems)?;
    let mut final_paths: Vec<Option<AltPath>> = vec![None; delta];
    for ((i, _, tail), p) in reqs.into_iter().zip(&start.paths) {
        let lifted = lift_td_path(h, q0, p)?;
        final_paths[i] = Some(erase_loops(join(g, lifted, &tail)?));
    }

    let ps = PathSet {
        paths: final_paths
            .into_iter()
            .map(|p| p.ok_or_else(|| Error::RoutingSelfCheck("a target was left unrouted".into())))
            .collect::<Result<_>>()?,
        mode: DisjointMode::Edge,
        length_bound: 3 * depth / 2 + 7,
    };
    ps.check(g)?;
    for (i, p) in ps.paths.iter().enumerate() {
        if p.source() != Some(src) || p.destination() != Some(targets[i].as_str()) {
            return Err(Error::RoutingSelfCheck(format!(
                "path {i} does not join the source to its target"
            )));
        }
    }
    Ok(ps)
}

/// Appends `tail` (if any) to `head`; the tail starts where the head ends.
fn join(g: &crate::bigraph::BipartiteGraph, head: AltPath, tail: &Option<AltPath>) -> Result<AltPath> {
    let Some(tail) = tail else {
        return Ok(head);
    };
    if head.destination() != tail.source() {
        return Err(Error::RoutingSelfCheck("handoff points do not meet".into()));
    }
    let mut elems = head
        .resolve(g)
        .ok_or_else(|| Error::RoutingSelfCheck("path does not fit the graph".into()))?;
    let tail_elems = tail
        .resolve(g)
        .ok_or_else(|| Error::RoutingSelfCheck("path does not fit the graph".into()))?;
    elems.extend_from_slice(&tail_elems[1..]);
    Ok(AltPath::from_elems(g, &elems))
}

/// Removes any cycle an element repeat would create, keeping the edge set
/// a subset of the original.
fn erase_loops(p: AltPath) -> AltPath {
    let mut elems: Vec<String> = p.elements;
    loop {
        let mut seen: HashMap<&str, usize> = HashMap::new();
        let mut cut = None;
        for (i, id) in elems.iter().enumerate() {
            if let Some(&j) = seen.get(id.as_str()) {
                cut = Some((j, i));
                break;
            }
            seen.insert(id, i);
        }
        match cut {
            Some((j, i)) => {
                elems.drain(j + 1..=i);
            }
            None => break,
        }
    }
    AltPath::new(elems)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{gen_circulant, gen_cycle, two_step};
    use crate::tdesign::TransversalDesign;

    fn sample() -> ConstructedGraph {
        two_step(&gen_cycle(5).unwrap(), &TransversalDesign::build(2, 2).unwrap()).unwrap()
    }

    #[test]
    fn targets_in_distant_copies() {
        let h = sample();
        let g = h.graph();
        let src = g.block_id(0).to_owned();
        let targets = vec![g.block_id(5).to_owned(), g.block_id(9).to_owned()];
        let ps = one_to_many(&h, &src, &targets).unwrap();
        assert_eq!(ps.paths.len(), 2);
        assert_eq!(ps.paths[0].destination(), Some(targets[0].as_str()));
        assert_eq!(ps.paths[1].destination(), Some(targets[1].as_str()));
    }

    #[test]
    fn repeated_target() {
        let h = sample();
        let g = h.graph();
        let src = g.block_id(0).to_owned();
        let t = g.block_id(6).to_owned();
        let ps = one_to_many(&h, &src, &[t.clone(), t]).unwrap();
        assert_eq!(ps.paths.len(), 2);
    }

    #[test]
    fn targets_in_source_copy() {
        let h = sample();
        let g = h.graph();
        let src = g.block_id(0).to_owned();
        let targets = vec![g.block_id(1).to_owned(), g.block_id(2).to_owned()];
        let ps = one_to_many(&h, &src, &targets).unwrap();
        assert!(ps.max_len() <= 7);
    }

    #[test]
    fn rejects_source_as_target() {
        let h = sample();
        let g = h.graph();
        let src = g.block_id(0).to_owned();
        assert!(one_to_many(&h, &src, &[src.clone(), g.block_id(1).to_owned()]).is_err());
    }

    #[test]
    fn rejects_full_degree_designs() {
        let h = two_step(&gen_circulant(6, 3).unwrap(), &TransversalDesign::build(3, 2).unwrap()).unwrap();
        let g = h.graph();
        let ids: Vec<String> = (1..4).map(|i| g.block_id(i).to_owned()).collect();
        assert!(one_to_many(&h, g.block_id(0), &ids).is_err());
    }
}
