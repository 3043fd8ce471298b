//! Disjoint-path constructions inside a single transversal design.
//!
//! These are the building blocks for routing on 2-step graphs: every copy
//! of the design inside such a graph supports the same constructions. All
//! functions verify their own output before returning it.

use std::collections::HashSet;

use crate::bigraph::{AltPath, Elem};
use crate::error::{Error, Result};
use crate::tdesign::TransversalDesign;
use crate::verify::{DisjointMode, PathSet};

fn ids(t: &TransversalDesign, elems: &[Elem]) -> AltPath {
    AltPath::from_elems(t.graph(), elems)
}

/// Internally-disjoint paths between two distinct blocks of a design:
/// delta paths, each of length at most 6 (at most 4 unless the blocks
/// differ in exactly one group).
pub fn block_pair_paths(t: &TransversalDesign, u: usize, v: usize) -> Result<PathSet> {
    if u == v {
        return Err(Error::BadRouting("blocks must be distinct".into()));
    }
    let delta = t.delta();
    let r: Vec<usize> = (0..delta).map(|i| t.member_in_group(u, i)).collect::<Result<_>>()?;
    let s: Vec<usize> = (0..delta).map(|i| t.member_in_group(v, i)).collect::<Result<_>>()?;
    let diffs: Vec<usize> = (0..delta).filter(|&i| r[i] != s[i]).collect();

    let mut paths = Vec::with_capacity(delta);
    for i in 0..delta {
        if r[i] == s[i] {
            paths.push(ids(t, &[Elem::Block(u), Elem::Node(r[i]), Elem::Block(v)]));
        }
    }
    match diffs.len() {
        0 => {
            // all members shared: impossible for distinct blocks of a valid design
            return Err(Error::BadRouting("blocks share every member".into()));
        }
        1 => {
            // route the lone differing group through a helper in another group
            let d = diffs[0];
            let o = (0..delta).find(|&i| i != d).unwrap();
            let x = *t.groups()[o]
                .iter()
                .find(|&&x| x != r[o])
                .ok_or_else(|| Error::BadRouting("no helper node available".into()))?;
            let b1 = t.generated_block(r[d], x)?;
            let b2 = t.generated_block(s[d], x)?;
            paths.push(ids(
                t,
                &[
                    Elem::Block(u),
                    Elem::Node(r[d]),
                    Elem::Block(b1),
                    Elem::Node(x),
                    Elem::Block(b2),
                    Elem::Node(s[d]),
                    Elem::Block(v),
                ],
            ));
        }
        b => {
            // cyclic matching r_i -> s_{i+1} over the differing groups
            for j in 0..b {
                let i = diffs[j];
                let nxt = diffs[(j + 1) % b];
                let mid = t.generated_block(r[i], s[nxt])?;
                paths.push(ids(
                    t,
                    &[
                        Elem::Block(u),
                        Elem::Node(r[i]),
                        Elem::Block(mid),
                        Elem::Node(s[nxt]),
                        Elem::Block(v),
                    ],
                ));
            }
        }
    }
    let ps = PathSet {
        paths,
        mode: DisjointMode::Internal,
        length_bound: 6,
    };
    ps.check(t.graph())?;
    Ok(ps)
}

/// Edge-disjoint paths of length at most 7 from a block to any multiset of
/// `delta` target nodes and blocks (requires `delta <= k`). `paths[i]` runs
/// from `u` to `targets[i]`. When every target is a node the paths are in
/// fact pairwise internally-disjoint and the returned mode says so.
pub fn block_to_targets(t: &TransversalDesign, u: usize, targets: &[Elem]) -> Result<PathSet> {
    let (delta, k) = (t.delta(), t.k());
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
    if targets.contains(&Elem::Block(u)) {
        return Err(Error::BadRouting("source block cannot be a target".into()));
    }
    let all_nodes = targets.iter().all(Elem::is_node);

    let roots: Vec<usize> = (0..delta).map(|i| t.member_in_group(u, i)).collect::<Result<_>>()?;

    // reduce target-blocks to target-nodes, remembering how to reattach
    #[derive(Clone, Copy)]
    enum Via {
        Direct,
        Root(usize),  // replaced block: path ends U,r -> append block
        Probe(usize), // replaced block: path ends ..,x -> extend or truncate
    }
    let mut work: Vec<(Elem, Via)> = targets.iter().map(|&e| (e, Via::Direct)).collect();

    let node_groups = |work: &[(Elem, Via)]| -> HashSet<usize> {
        work.iter()
            .filter_map(|&(e, _)| match e {
                Elem::Node(n) => Some(t.group_of(n)),
                _ => None,
            })
            .collect()
    };

    // roots of target-free groups adjacent to a target-block become targets
    loop {
        let occupied = node_groups(&work);
        let Some((wi, root)) = work.iter().enumerate().find_map(|(wi, &(e, _))| match e {
            Elem::Block(b) => roots.iter().find(|&&r| {
                !occupied.contains(&t.group_of(r))
                    && t.graph().incident(r, b)
                    && !work.iter().any(|&(e2, _)| e2 == Elem::Node(r))
            }).map(|&r| (wi, r)),
            _ => None,
        }) else {
            break;
        };
        let Elem::Block(b) = work[wi].0 else { unreachable!() };
        work[wi] = (Elem::Node(root), Via::Root(b));
    }
    // remaining target-blocks probe into distinct target-free groups
    for wi in 0..work.len() {
        let Elem::Block(b) = work[wi].0 else { continue };
        let occupied = node_groups(&work);
        let g = (0..delta)
            .find(|g| !occupied.contains(g))
            .ok_or_else(|| Error::BadRouting("no target-free group left".into()))?;
        let x = t.member_in_group(b, g)?;
        work[wi] = (Elem::Node(x), Via::Probe(b));
    }

    // --- the all-node construction ---
    let nodes: Vec<usize> = work
        .iter()
        .map(|&(e, _)| match e {
            Elem::Node(n) => n,
            _ => unreachable!(),
        })
        .collect();
    let target_set: HashSet<usize> = nodes.iter().copied().collect();

    // rank groups by non-rooted target count desc, then multiplicity desc
    let non_rooted_count = |g: usize| nodes.iter().filter(|&&n| t.group_of(n) == g && n != roots[g]).count();
    let mult = |g: usize| nodes.iter().filter(|&&n| n == roots[g]).count();
    let mut rank: Vec<usize> = (0..delta).collect();
    rank.sort_by_key(|&g| (std::cmp::Reverse(non_rooted_count(g)), std::cmp::Reverse(mult(g)), g));

    // match non-rooted targets (rank order) against zero-multiplicity roots
    // r_{n_2},..,r_{n_delta},r_{n_1}
    let mut root_queue: Vec<usize> = rank[1..]
        .iter()
        .chain([&rank[0]])
        .filter(|&&g| mult(g) == 0)
        .copied()
        .collect();
    let mut ordered_targets: Vec<usize> = Vec::new(); // work indices, non-rooted, rank order
    for &g in &rank {
        for (wi, &n) in nodes.iter().enumerate() {
            if t.group_of(n) == g && n != roots[g] {
                ordered_targets.push(wi);
            }
        }
    }
    let mut matched: Vec<(usize, usize)> = Vec::new(); // (work idx, root node)
    let mut leftover_pair: Option<usize> = None; // work idx for the same-group leftover
    for &wi in &ordered_targets {
        let tg = t.group_of(nodes[wi]);
        if let Some(pos) = root_queue.iter().position(|&g| g != tg) {
            let g = root_queue.remove(pos);
            matched.push((wi, roots[g]));
        } else if root_queue.pop().is_some() {
            // only a same-group root remains: the special 5-edge detour case
            leftover_pair = Some(wi);
        } else {
            return Err(Error::BadRouting("ran out of root nodes".into()));
        }
    }
    // each positive-multiplicity root absorbs one identical target
    let mut identity: Vec<usize> = Vec::new(); // work indices
    let mut extras: Vec<usize> = Vec::new(); // work indices of repeated rooted targets
    for g in 0..delta {
        let mut first = true;
        for (wi, &n) in nodes.iter().enumerate() {
            if n == roots[g] {
                if first {
                    identity.push(wi);
                    first = false;
                } else {
                    extras.push(wi);
                }
            }
        }
    }

    let mut u_blocks: Vec<usize> = Vec::new();
    let mut paths: Vec<Option<Vec<Elem>>> = vec![None; delta];
    for &(wi, r) in &matched {
        let blk = t.generated_block(r, nodes[wi])?;
        u_blocks.push(blk);
        paths[wi] = Some(vec![Elem::Block(u), Elem::Node(r), Elem::Block(blk), Elem::Node(nodes[wi])]);
    }
    for &wi in &identity {
        paths[wi] = Some(vec![Elem::Block(u), Elem::Node(nodes[wi])]);
    }

    let unmatched_roots: Vec<usize> = {
        // in rank order; exactly the zero-multiplicity roots never assigned
        let used: HashSet<usize> = matched.iter().map(|&(_, r)| r).collect();
        rank.iter()
            .filter(|&&g| mult(g) == 0 && !used.contains(&roots[g]))
            .map(|&g| roots[g])
            .collect()
    };

    if let Some(wi) = leftover_pair {
        // one non-rooted target of the top group left over with its own root
        let tp = nodes[wi];
        let r = *unmatched_roots.first().ok_or_else(|| Error::BadRouting("no root left".into()))?;
        let helper_group = rank[1];
        let x = *t.groups()[helper_group]
            .iter()
            .find(|&&x| {
                x != roots[helper_group]
                    && !target_set.contains(&x)
                    && t.generated_block(x, tp).map_or(false, |b| !u_blocks.contains(&b))
            })
            .ok_or_else(|| Error::BadRouting("no helper node for the leftover target".into()))?;
        let b1 = t.generated_block(r, x)?;
        let b2 = t.generated_block(x, tp)?;
        u_blocks.extend([b1, b2]);
        paths[wi] = Some(vec![
            Elem::Block(u),
            Elem::Node(r),
            Elem::Block(b1),
            Elem::Node(x),
            Elem::Block(b2),
            Elem::Node(tp),
        ]);
    } else if !extras.is_empty() {
        route_repeated_targets(t, u, &nodes, &extras, &unmatched_roots, &target_set, &u_blocks, &mut paths)?;
    }

    // reattach the replaced target-blocks
    let mut final_paths = Vec::with_capacity(delta);
    for (wi, (_, via)) in work.iter().enumerate() {
        let mut p = paths[wi]
            .take()
            .ok_or_else(|| Error::RoutingSelfCheck(format!("target {wi} left unrouted")))?;
        match *via {
            Via::Direct => {}
            Via::Root(b) => p.push(Elem::Block(b)),
            Via::Probe(b) => {
                if p.len() >= 2 && p[p.len() - 2] == Elem::Block(b) {
                    p.pop();
                } else {
                    p.push(Elem::Block(b));
                }
            }
        }
        final_paths.push(ids(t, &p));
    }

    let ps = PathSet {
        paths: final_paths,
        mode: if all_nodes {
            DisjointMode::Internal
        } else {
            DisjointMode::Edge
        },
        length_bound: 7,
    };
    ps.check(t.graph())?;
    for (i, p) in ps.paths.iter().enumerate() {
        let want = t.graph().elem_id(targets[i]);
        if p.destination() != Some(want) || p.source() != Some(t.graph().block_id(u)) {
            return Err(Error::RoutingSelfCheck(format!(
                "path {i} does not join the source to its target"
            )));
        }
    }
    Ok(ps)
}

/// The repeated-rooted-target cases: `extras` are target instances equal to
/// an already-used root, `spare` the unmatched roots (same count).
#[allow(clippy::too_many_arguments)]
fn route_repeated_targets(
    t: &TransversalDesign,
    u: usize,
    nodes: &[usize],
    extras: &[usize],
    spare: &[usize],
    target_set: &HashSet<usize>,
    u_blocks: &[usize],
    paths: &mut [Option<Vec<Elem>>],
) -> Result<()> {
    let delta = t.delta();
    let b = extras.len();
    if spare.len() != b {
        return Err(Error::RoutingSelfCheck(format!(
            "{b} repeated targets but {} spare roots",
            spare.len()
        )));
    }
    let non_root_non_target = |g: usize, avoid: &[usize]| -> Option<usize> {
        t.groups()[g]
            .iter()
            .find(|&&x| !target_set.contains(&x) && x != t.member_in_group(u, g).unwrap() && !avoid.contains(&x))
            .copied()
    };

    if b == 1 && delta == 2 {
        // both targets equal one root: a 7-edge chain through both groups
        let wi = extras[0];
        let tgt = nodes[wi];
        let r2 = spare[0];
        let (g1, g2) = (t.group_of(tgt), t.group_of(r2));
        let x1 = non_root_non_target(g1, &[])
            .ok_or_else(|| Error::BadRouting("no spare node in the target group".into()))?;
        let x2 = non_root_non_target(g2, &[])
            .ok_or_else(|| Error::BadRouting("no spare node in the root group".into()))?;
        paths[wi] = Some(vec![
            Elem::Block(u),
            Elem::Node(r2),
            Elem::Block(t.generated_block(r2, x1)?),
            Elem::Node(x1),
            Elem::Block(t.generated_block(x1, x2)?),
            Elem::Node(x2),
            Elem::Block(t.generated_block(x2, tgt)?),
            Elem::Node(tgt),
        ]);
        return Ok(());
    }
    if b == 1 {
        // delta >= 3: a helper group free of non-rooted targets exists
        let wi = extras[0];
        let tgt = nodes[wi];
        let r = spare[0];
        let (x, _) = (0..delta)
            .rev()
            .filter(|&g| g != t.group_of(tgt) && g != t.group_of(r))
            .find_map(|g| non_root_non_target(g, &[]).map(|x| (x, g)))
            .ok_or_else(|| Error::BadRouting("no helper group for the repeated target".into()))?;
        let b1 = t.generated_block(r, x)?;
        let b2 = t.generated_block(x, tgt)?;
        if u_blocks.contains(&b1) || u_blocks.contains(&b2) {
            return Err(Error::RoutingSelfCheck("helper blocks collide".into()));
        }
        paths[wi] = Some(vec![
            Elem::Block(u),
            Elem::Node(r),
            Elem::Block(b1),
            Elem::Node(x),
            Elem::Block(b2),
            Elem::Node(tgt),
        ]);
        return Ok(());
    }

    // b >= 2: chain the spare roots cyclically through helper nodes x'_i,
    // re-choosing helpers when two chain-end blocks collide
    let groups: Vec<usize> = spare.iter().map(|&r| t.group_of(r)).collect();
    let candidates: Vec<Vec<usize>> = groups
        .iter()
        .map(|&g| {
            t.groups()[g]
                .iter()
                .filter(|&&x| !target_set.contains(&x) && !spare.contains(&x))
                .copied()
                .collect()
        })
        .collect();
    for &x1 in &candidates[0] {
        let mut xs = vec![x1];
        let mut bar_blocks: Vec<usize> = Vec::new();
        let mut ok = true;
        // bar block i joins x'_{i+1 cyc} with the i-th repeated target
        for i in 0..b - 1 {
            let ti = nodes[extras[i]];
            let found = candidates[i + 1].iter().find(|&&x| {
                t.generated_block(x, ti).map_or(false, |bb| !bar_blocks.contains(&bb))
            });
            match found {
                Some(&x) => {
                    bar_blocks.push(t.generated_block(x, ti)?);
                    xs.push(x);
                }
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        let tb = nodes[extras[b - 1]];
        let last = t.generated_block(x1, tb)?;
        if bar_blocks.contains(&last) {
            continue;
        }
        bar_blocks.push(last);
        for i in 0..b {
            let wi = extras[i];
            let rho = spare[i];
            let x = xs[(i + 1) % b];
            paths[wi] = Some(vec![
                Elem::Block(u),
                Elem::Node(rho),
                Elem::Block(t.generated_block(rho, x)?),
                Elem::Node(x),
                Elem::Block(bar_blocks[i]),
                Elem::Node(nodes[wi]),
            ]);
        }
        return Ok(());
    }
    Err(Error::BadRouting("could not chain the repeated targets".into()))
}

/// Internally-disjoint paths of length at most 3 from distinct nodes of
/// group `d0` to any multiset of at most `delta` target nodes and blocks,
/// where `d0` contains no target node (requires `delta <= k`). `paths[i]`
/// ends at `targets[i]`; its source is read off the path itself.
pub fn fan_in(t: &TransversalDesign, d0: usize, targets: &[Elem]) -> Result<PathSet> {
    let (delta, k) = (t.delta(), t.k());
    if delta > k {
        return Err(Error::BadRouting(format!(
            "construction needs delta <= k, got delta={delta}, k={k}"
        )));
    }
    if targets.len() > delta {
        return Err(Error::BadRouting(format!(
            "at most {delta} targets supported, got {}",
            targets.len()
        )));
    }
    for &e in targets {
        if let Elem::Node(n) = e {
            if t.group_of(n) == d0 {
                return Err(Error::BadRouting("a target node lies in the source group".into()));
            }
        }
    }

    // equivalence classes of target-blocks by their neighbour in d0
    let d0_neighbour = |b: usize| t.member_in_group(b, d0);
    let mut rep_of_neighbour: Vec<(usize, usize)> = Vec::new(); // (d0 node, rep target idx)
    let mut used_d0: Vec<usize> = Vec::new();
    let mut paths: Vec<Option<Vec<Elem>>> = vec![None; targets.len()];
    for (i, &e) in targets.iter().enumerate() {
        if let Elem::Block(bk) = e {
            let x = d0_neighbour(bk)?;
            if !rep_of_neighbour.iter().any(|&(n, _)| n == x) {
                rep_of_neighbour.push((x, i));
                used_d0.push(x);
                paths[i] = Some(vec![Elem::Node(x), Elem::Block(bk)]);
            }
        }
    }
    let node_groups: HashSet<usize> = targets
        .iter()
        .filter_map(|&e| match e {
            Elem::Node(n) => Some(t.group_of(n)),
            _ => None,
        })
        .collect();
    let fresh_d0 = |used: &[usize]| -> Result<usize> {
        t.groups()[d0]
            .iter()
            .find(|&&x| !used.contains(&x))
            .copied()
            .ok_or_else(|| Error::BadRouting("source group exhausted".into()))
    };
    // remaining block instances detour through distinct target-free groups
    let mut used_groups: Vec<usize> = Vec::new();
    for (i, &e) in targets.iter().enumerate() {
        if paths[i].is_some() {
            continue;
        }
        if let Elem::Block(bk) = e {
            let g = (0..delta)
                .find(|g| *g != d0 && !node_groups.contains(g) && !used_groups.contains(g))
                .ok_or_else(|| Error::BadRouting("no target-free group for a repeated block".into()))?;
            used_groups.push(g);
            let r = t.member_in_group(bk, g)?;
            let x = fresh_d0(&used_d0)?;
            used_d0.push(x);
            paths[i] = Some(vec![
                Elem::Node(x),
                Elem::Block(t.generated_block(x, r)?),
                Elem::Node(r),
                Elem::Block(bk),
            ]);
        }
    }
    for (i, &e) in targets.iter().enumerate() {
        if let Elem::Node(n) = e {
            let x = fresh_d0(&used_d0)?;
            used_d0.push(x);
            paths[i] = Some(vec![Elem::Node(x), Elem::Block(t.generated_block(x, n)?), Elem::Node(n)]);
        }
    }

    let ps = PathSet {
        paths: paths
            .into_iter()
            .map(|p| ids(t, &p.unwrap()))
            .collect(),
        mode: DisjointMode::Internal,
        length_bound: 3,
    };
    ps.check(t.graph())?;
    for (i, p) in ps.paths.iter().enumerate() {
        if p.destination() != Some(t.graph().elem_id(targets[i])) {
            return Err(Error::RoutingSelfCheck(format!("path {i} misses its target")));
        }
    }
    // sources must be pairwise distinct
    let srcs: HashSet<&str> = ps.paths.iter().filter_map(|p| p.source()).collect();
    if srcs.len() != ps.paths.len() {
        return Err(Error::RoutingSelfCheck("fan-in sources are not distinct".into()));
    }
    Ok(ps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::menger_count;

    #[test]
    fn block_pair_all_pairs_3_3() {
        let t = TransversalDesign::build(3, 3).unwrap();
        for u in 0..9 {
            for v in 0..9 {
                if u == v {
                    continue;
                }
                let ps = block_pair_paths(&t, u, v).unwrap();
                assert_eq!(ps.paths.len(), 3);
                assert!(ps.max_len() <= 6);
                assert_eq!(
                    menger_count(t.graph(), Elem::Block(u), Elem::Block(v), DisjointMode::Internal).unwrap(),
                    3
                );
            }
        }
    }

    #[test]
    fn block_pair_delta_k_plus_one() {
        let t = TransversalDesign::build(3, 2).unwrap();
        for u in 0..4 {
            for v in 0..4 {
                if u != v {
                    let ps = block_pair_paths(&t, u, v).unwrap();
                    assert_eq!(ps.paths.len(), 3);
                }
            }
        }
    }

    #[test]
    fn targets_all_roots_repeated() {
        // every target equal to the same root node exercises the chain cases
        let t = TransversalDesign::build(3, 3).unwrap();
        let u = 0;
        let r0 = t.member_in_group(u, 0).unwrap();
        let ps = block_to_targets(&t, u, &[Elem::Node(r0), Elem::Node(r0), Elem::Node(r0)]).unwrap();
        assert_eq!(ps.paths.len(), 3);
        assert!(ps.max_len() <= 7);
    }

    #[test]
    fn targets_mixed_blocks_and_nodes() {
        let t = TransversalDesign::build(3, 3).unwrap();
        let u = 0;
        let n = t.groups()[1][2];
        let ps = block_to_targets(&t, u, &[Elem::Block(5), Elem::Block(5), Elem::Node(n)]).unwrap();
        assert_eq!(ps.mode, DisjointMode::Edge);
        assert_eq!(ps.paths[2].destination(), Some(t.graph().node_id(n)));
    }

    #[test]
    fn targets_reject_wrong_arity_and_large_delta() {
        let t32 = TransversalDesign::build(3, 2).unwrap();
        assert!(block_to_targets(&t32, 0, &[Elem::Node(0), Elem::Node(1), Elem::Node(2)]).is_err());
        let t = TransversalDesign::build(2, 3).unwrap();
        assert!(block_to_targets(&t, 0, &[Elem::Node(0)]).is_err());
        assert!(block_to_targets(&t, 0, &[Elem::Block(0), Elem::Node(0)]).is_err());
    }

    #[test]
    fn fan_in_basic() {
        let t = TransversalDesign::build(3, 3).unwrap();
        let n = t.groups()[1][0];
        let ps = fan_in(&t, 0, &[Elem::Node(n), Elem::Block(4), Elem::Block(4)]).unwrap();
        assert_eq!(ps.paths.len(), 3);
        assert!(ps.max_len() <= 3);
    }

    #[test]
    fn fan_in_rejects_target_in_source_group() {
        let t = TransversalDesign::build(3, 3).unwrap();
        let n = t.groups()[0][0];
        assert!(fan_in(&t, 0, &[Elem::Node(n)]).is_err());
    }
}
