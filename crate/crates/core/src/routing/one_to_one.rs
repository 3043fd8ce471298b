//! Internally-disjoint paths between two blocks of a 2-step graph.
//!
//! Between blocks of the same design copy the within-copy construction
//! applies directly. Across copies the paths are assembled from a shared
//! neighbouring group when the underlying base blocks have a common
//! neighbour, and otherwise piped along a system of internally-disjoint
//! base-graph paths. Every result is verified before being returned; if an
//! unlucky configuration defeats the constructive routine, a bounded
//! exhaustive search over the relevant region completes the path system.

use std::collections::{HashSet, VecDeque};

use crate::bigraph::{AltPath, BipartiteGraph, Elem};
use crate::construct::ConstructedGraph;
use crate::error::{Error, Result};
use crate::verify::{DisjointMode, PathSet};

use super::search::disjoint_paths_search;
use super::td_paths;

/// A verified one-to-one routing outcome.
#[derive(Debug)]
pub struct OneToOne {
    /// how many pairwise internally-disjoint paths the construction promises
    pub promised: usize,
    /// number of internally-disjoint base-graph paths between the host
    /// copies (0 when both blocks live in one copy)
    pub lambda: usize,
    /// longest base-graph path in that system
    pub mu: usize,
    /// common base-graph neighbours of the host copies
    pub common: usize,
    pub pathset: PathSet,
}

/// A maximum system of internally-disjoint block-to-block paths in a
/// bipartite graph, found by max-flow and returned shortest-first.
pub fn h0_disjoint_paths(g: &BipartiteGraph, q1: usize, q2: usize) -> Result<Vec<Vec<Elem>>> {
    if q1 == q2 {
        return Err(Error::BadRouting("blocks must be distinct".into()));
    }
    let (nn, nb) = (g.node_count(), g.block_count());
    let nv = nn + nb;
    let vert = |e: Elem| match e {
        Elem::Node(i) => i,
        Elem::Block(i) => nn + i,
    };
    let elem = |v: usize| {
        if v < nn {
            Elem::Node(v)
        } else {
            Elem::Block(v - nn)
        }
    };
    let (inn, out) = (|v: usize| 2 * v, |v: usize| 2 * v + 1);
    const INF: i64 = i64::MAX / 2;

    let mut to: Vec<usize> = Vec::new();
    let mut cap: Vec<i64> = Vec::new();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); 2 * nv];
    let mut add = |adj: &mut Vec<Vec<usize>>, u: usize, v: usize, c: i64| {
        adj[u].push(to.len());
        to.push(v);
        cap.push(c);
        adj[v].push(to.len());
        to.push(u);
        cap.push(0);
    };
    for v in 0..nv {
        let c = if v == vert(Elem::Block(q1)) || v == vert(Elem::Block(q2)) {
            INF
        } else {
            1
        };
        add(&mut adj, inn(v), out(v), c);
    }
    let mut base_cap = vec![0i64; 0];
    for n in 0..nn {
        for &b in g.blocks_of(n) {
            add(&mut adj, out(n), inn(vert(Elem::Block(b))), 1);
            add(&mut adj, out(vert(Elem::Block(b))), inn(n), 1);
        }
    }
    base_cap.extend_from_slice(&cap);

    let (s, t) = (out(vert(Elem::Block(q1))), inn(vert(Elem::Block(q2))));
    loop {
        let mut prev: Vec<Option<usize>> = vec![None; 2 * nv];
        let mut queue = VecDeque::from([s]);
        let mut seen = vec![false; 2 * nv];
        seen[s] = true;
        while let Some(u) = queue.pop_front() {
            for &a in &adj[u] {
                if cap[a] > 0 && !seen[to[a]] {
                    seen[to[a]] = true;
                    prev[to[a]] = Some(a);
                    queue.push_back(to[a]);
                }
            }
        }
        if !seen[t] {
            break;
        }
        let mut v = t;
        while v != s {
            let a = prev[v].unwrap();
            cap[a] -= 1;
            cap[a ^ 1] += 1;
            v = to[a ^ 1];
        }
    }

    // decompose the flow into paths, erasing any circulation loops
    let mut flow: Vec<i64> = base_cap
        .iter()
        .zip(&cap)
        .map(|(&b, &c)| (b - c).max(0))
        .collect();
    let mut paths: Vec<Vec<Elem>> = Vec::new();
    loop {
        let Some(&first) = adj[s].iter().find(|&&a| flow[a] > 0) else {
            break;
        };
        let mut walk_arcs: Vec<usize> = Vec::new();
        let mut walk_verts: Vec<usize> = vec![s];
        let mut a = first;
        loop {
            flow[a] -= 1;
            let v = to[a];
            if let Some(j) = walk_verts.iter().position(|&w| w == v) {
                walk_verts.truncate(j + 1);
                walk_arcs.truncate(j);
            } else {
                walk_verts.push(v);
                walk_arcs.push(a);
            }
            if v == t {
                break;
            }
            a = *adj[v]
                .iter()
                .find(|&&a| flow[a] > 0)
                .expect("flow conservation");
        }
        let mut p = vec![Elem::Block(q1)];
        for &v in &walk_verts {
            if v % 2 == 0 && v != inn(vert(Elem::Block(q1))) {
                p.push(elem(v / 2));
            }
        }
        paths.push(p);
    }
    paths.sort_by_key(Vec::len);
    Ok(paths)
}

struct Ctx<'a> {
    h: &'a ConstructedGraph,
    hb1: usize,
    hb2: usize,
    q1: usize,
    q2: usize,
    k: usize,
}

impl Ctx<'_> {
    /// hb1's member in the group of base node `p`
    fn member1(&self, p: usize) -> Result<usize> {
        let g = self.h.group_position(self.q1, p).ok_or_else(|| {
            Error::BadRouting("group does not root the source copy".into())
        })?;
        self.h.block_member(self.hb1, g)
    }
    fn member2(&self, p: usize) -> Result<usize> {
        let g = self.h.group_position(self.q2, p).ok_or_else(|| {
            Error::BadRouting("group does not root the destination copy".into())
        })?;
        self.h.block_member(self.hb2, g)
    }
    fn gen1(&self, x: usize, y: usize) -> Result<usize> {
        self.h.generated_block_in_copy(self.q1, x, y)
    }
    fn gen2(&self, x: usize, y: usize) -> Result<usize> {
        self.h.generated_block_in_copy(self.q2, x, y)
    }
    fn group_nodes(&self, p: usize) -> Vec<usize> {
        (0..self.k).map(|pos| self.h.h_node(p, pos)).collect()
    }
}

/// Paths through the shared group of base node `p1`; `pairs` lists the
/// batch groups used on each side. Produces `pairs.len() + 1` paths of
/// length at most 6.
fn shared_paths(ctx: &Ctx, p1: usize, pairs: &[(usize, usize)]) -> Result<(Vec<Vec<Elem>>, Option<usize>)> {
    let (hb1, hb2) = (Elem::Block(ctx.hb1), Elem::Block(ctx.hb2));
    let r0 = ctx.member1(p1)?;
    let s0 = ctx.member2(p1)?;
    let mut pairs = pairs.to_vec();
    let rs = |pairs: &[(usize, usize)], ctx: &Ctx| -> Result<Vec<(usize, usize)>> {
        pairs
            .iter()
            .map(|&(a, b)| Ok((ctx.member1(a)?, ctx.member2(b)?)))
            .collect()
    };
    let mut ends = rs(&pairs, ctx)?;
    if r0 != s0 {
        // keep the entangled first pair conflict-free when possible
        if let Some(j) = ends.iter().position(|&(r, s)| r != s) {
            pairs.swap(0, j);
            ends.swap(0, j);
        }
    }
    let mut tpool: Vec<usize> = ctx
        .group_nodes(p1)
        .into_iter()
        .filter(|&x| x != r0 && x != s0)
        .collect();
    tpool.reverse(); // consume with pop() in value order

    let mut paths: Vec<Vec<Elem>> = Vec::new();
    let mut amendment: Option<usize> = None;
    let mut rest = 0;
    if r0 == s0 {
        paths.push(vec![hb1, Elem::Node(r0), hb2]);
    } else {
        let (r1, s1) = ends[0];
        if r1 != s1 {
            paths.push(vec![hb1, Elem::Node(r0), Elem::Block(ctx.gen2(s1, r0)?), Elem::Node(s1), hb2]);
            paths.push(vec![hb1, Elem::Node(r1), Elem::Block(ctx.gen1(r1, s0)?), Elem::Node(s0), hb2]);
        } else {
            // both would route through the shared node r1: detour instead
            let x1 = ctx
                .group_nodes(pairs[0].0)
                .into_iter()
                .find(|&x| x != r1)
                .ok_or_else(|| Error::BadRouting("no detour node in the batch group".into()))?;
            paths.push(vec![hb1, Elem::Node(r1), hb2]);
            paths.push(vec![hb1, Elem::Node(r0), Elem::Block(ctx.gen1(r0, x1)?), Elem::Node(x1), Elem::Block(ctx.gen2(s0, x1)?), Elem::Node(s0), hb2]);
            amendment = Some(x1);
        }
        rest = 1;
    }
    for &(r, s) in &ends[rest..] {
        if r == s {
            paths.push(vec![hb1, Elem::Node(r), hb2]);
        } else {
            let t = tpool
                .pop()
                .ok_or_else(|| Error::BadRouting("shared group exhausted".into()))?;
            paths.push(vec![hb1, Elem::Node(r), Elem::Block(ctx.gen1(r, t)?), Elem::Node(t), Elem::Block(ctx.gen2(s, t)?), Elem::Node(s), hb2]);
        }
    }
    Ok((paths, amendment))
}

/// The extra path through a second shared group, for the full-degree case.
fn second_shared_path(
    ctx: &Ctx,
    p2: usize,
    pairs: &[(usize, usize)],
    amendment: Option<usize>,
) -> Option<Vec<Elem>> {
    let (hb1, hb2) = (Elem::Block(ctx.hb1), Elem::Block(ctx.hb2));
    let r2 = ctx.member1(p2).ok()?;
    let s2 = ctx.member2(p2).ok()?;
    if r2 == s2 {
        return Some(vec![hb1, Elem::Node(r2), hb2]);
    }
    // needs a batch group shared by both copies to host the detour node
    for &(a, b) in pairs {
        if a != b {
            continue;
        }
        let ra = ctx.member1(a).ok()?;
        let sa = ctx.member2(a).ok()?;
        let x = ctx
            .group_nodes(a)
            .into_iter()
            .find(|&x| x != ra && x != sa && Some(x) != amendment)?;
        let b1 = ctx.gen1(r2, x).ok()?;
        let b2 = ctx.gen2(s2, x).ok()?;
        return Some(vec![hb1, Elem::Node(r2), Elem::Block(b1), Elem::Node(x), Elem::Block(b2), Elem::Node(s2), hb2]);
    }
    None
}

/// A path that transits the intermediate copies of a base-graph path,
/// steering clear of the elements already in use.
fn transit_path(ctx: &Ctx, base_path: &[Elem], used: &HashSet<Elem>) -> Result<Vec<Elem>> {
    let ps: Vec<usize> = base_path
        .iter()
        .filter_map(|&e| match e {
            Elem::Node(p) => Some(p),
            _ => None,
        })
        .collect();
    let qs: Vec<usize> = base_path[1..base_path.len() - 1]
        .iter()
        .filter_map(|&e| match e {
            Elem::Block(q) => Some(q),
            _ => None,
        })
        .collect();
    let m = ps.len();
    if m < 2 {
        return Err(Error::BadRouting("transit needs an indirect base path".into()));
    }
    let first = ctx.member1(ps[0])?;
    let last = ctx.member2(ps[m - 1])?;
    let mut elems = vec![Elem::Block(ctx.hb1), Elem::Node(first)];
    let mut cur = first;
    for i in 0..m - 1 {
        let next = if i == m - 2 {
            last
        } else {
            ctx.group_nodes(ps[i + 1])
                .into_iter()
                .find(|&y| !used.contains(&Elem::Node(y)))
                .ok_or_else(|| Error::BadRouting("transit group exhausted".into()))?
        };
        let blk = ctx.h.generated_block_in_copy(qs[i], cur, next)?;
        if used.contains(&Elem::Block(blk)) || used.contains(&Elem::Node(next)) {
            return Err(Error::BadRouting("transit collides with earlier paths".into()));
        }
        elems.push(Elem::Block(blk));
        elems.push(Elem::Node(next));
        cur = next;
    }
    elems.push(Elem::Block(ctx.hb2));
    Ok(elems)
}

/// Lanes piped through the copies along a base-graph path, entered and
/// left through batch groups at either end. Produces `lanes` paths.
fn pipe_paths(ctx: &Ctx, base_path: &[Elem], lanes: usize, reserve1: Option<usize>, reserve2: Option<usize>) -> Result<Vec<Vec<Elem>>> {
    let (hb1, hb2) = (Elem::Block(ctx.hb1), Elem::Block(ctx.hb2));
    let k = ctx.k;
    let ps: Vec<usize> = base_path
        .iter()
        .filter_map(|&e| match e {
            Elem::Node(p) => Some(p),
            _ => None,
        })
        .collect();
    let qs: Vec<usize> = base_path[1..base_path.len() - 1]
        .iter()
        .filter_map(|&e| match e {
            Elem::Block(q) => Some(q),
            _ => None,
        })
        .collect();
    let m = ps.len();
    let interior: HashSet<usize> = ps[1..m - 1].iter().copied().collect();

    let r_head = ctx.member1(ps[0])?;
    let s_tail = ctx.member2(ps[m - 1])?;
    let pos_of = |hn: usize| ctx.h.node_origin(hn).1;

    // batch groups at each end: the copy's other groups, minus a reserved
    // group and minus (when droppable) groups that the path runs through
    let pick = |q: usize, skip: usize, reserve: Option<usize>, fixed: &dyn Fn(usize) -> Result<usize>| -> Result<(Vec<usize>, Vec<usize>)> {
        let mut cands: Vec<usize> = ctx
            .h
            .copy_roots(q)
            .iter()
            .copied()
            .filter(|&p| p != skip && Some(p) != reserve)
            .collect();
        let mut forbidden = Vec::new();
        if lanes == k {
            // every lane position is in use: conflicting groups must go
            cands.retain(|&p| !interior.contains(&p));
        } else {
            for &p in &cands {
                if interior.contains(&p) {
                    forbidden.push(pos_of(fixed(p)?));
                }
            }
        }
        if cands.len() < lanes - 1 {
            return Err(Error::BadRouting("not enough batch groups at a pipe end".into()));
        }
        cands.truncate(lanes - 1);
        Ok((cands, forbidden))
    };
    let m1 = |p: usize| ctx.member1(p);
    let m2 = |p: usize| ctx.member2(p);
    let (batch1, forb1) = pick(ctx.q1, ps[0], reserve1, &m1)?;
    let (batch2, forb2) = pick(ctx.q2, ps[m - 1], reserve2, &m2)?;

    // lane positions: both entry positions plus unforbidden fillers
    let forbidden: HashSet<usize> = forb1.into_iter().chain(forb2).collect();
    let mut positions = vec![pos_of(r_head)];
    if !positions.contains(&pos_of(s_tail)) {
        positions.push(pos_of(s_tail));
    }
    if positions.iter().any(|p| forbidden.contains(p)) {
        return Err(Error::BadRouting("a forced lane position is blocked".into()));
    }
    for p in 0..k {
        if positions.len() == lanes {
            break;
        }
        if !positions.contains(&p) && !forbidden.contains(&p) {
            positions.push(p);
        }
    }
    if positions.len() < lanes {
        return Err(Error::BadRouting("not enough free lane positions".into()));
    }

    let mut heads: Vec<(usize, Vec<Elem>)> = vec![(pos_of(r_head), vec![hb1, Elem::Node(r_head)])];
    let mut entry = positions.iter().filter(|&&p| p != pos_of(r_head));
    for &bg in &batch1 {
        let p = *entry.next().unwrap();
        let r = ctx.member1(bg)?;
        let t = ctx.h.h_node(ps[0], p);
        heads.push((p, vec![hb1, Elem::Node(r), Elem::Block(ctx.gen1(r, t)?), Elem::Node(t)]));
    }
    let mut tails: Vec<(usize, Vec<Elem>)> = vec![(pos_of(s_tail), vec![Elem::Node(s_tail), hb2])];
    let mut exit = positions.iter().filter(|&&p| p != pos_of(s_tail));
    for &cg in &batch2 {
        let p = *exit.next().unwrap();
        let s = ctx.member2(cg)?;
        let w = ctx.h.h_node(ps[m - 1], p);
        tails.push((p, vec![Elem::Node(w), Elem::Block(ctx.gen2(s, w)?), Elem::Node(s), hb2]));
    }

    let mut paths = Vec::with_capacity(lanes);
    for &p in &positions {
        let mut path = heads.iter().find(|&&(hp, _)| hp == p).unwrap().1.clone();
        for i in 0..m - 1 {
            let x = ctx.h.h_node(ps[i], p);
            let y = ctx.h.h_node(ps[i + 1], p);
            debug_assert_eq!(Some(&Elem::Node(x)), path.last());
            path.push(Elem::Block(ctx.h.generated_block_in_copy(qs[i], x, y)?));
            path.push(Elem::Node(y));
        }
        let tail = &tails.iter().find(|&&(tp, _)| tp == p).unwrap().1;
        path.extend_from_slice(&tail[1..]);
        paths.push(path);
    }
    Ok(paths)
}

/// Verified internally-disjoint paths between two blocks of a 2-step
/// graph: delta paths when the blocks share a copy or their base blocks
/// are joined by two internally-disjoint base paths, min(delta, k) paths
/// otherwise. Lengths are at most 6 via a common neighbour and at most
/// mu + 4 in general.
pub fn one_to_one(h: &ConstructedGraph, src: &str, dst: &str) -> Result<OneToOne> {
    h.require_two_step()?;
    let g = h.graph();
    let hb1 = g.block_idx(src)?;
    let hb2 = g.block_idx(dst)?;
    if hb1 == hb2 {
        return Err(Error::BadRouting("source equals destination".into()));
    }
    let (delta, k) = (h.td().delta(), h.td().k());
    let (q1, u1) = h.block_origin(hb1);
    let (q2, u2) = h.block_origin(hb2);

    if q1 == q2 {
        let td_ps = td_paths::block_pair_paths(h.td(), u1, u2)?;
        let paths = td_ps
            .paths
            .iter()
            .map(|p| lift_td_path(h, q1, p))
            .collect::<Result<Vec<_>>>()?;
        let ps = PathSet {
            paths,
            mode: DisjointMode::Internal,
            length_bound: 6,
        };
        ps.check(g)?;
        return Ok(OneToOne {
            promised: delta,
            lambda: 0,
            mu: 0,
            common: 0,
            pathset: ps,
        });
    }

    let base_paths = h0_disjoint_paths(h.base(), q1, q2)?;
    let lambda = base_paths.len();
    let mu = base_paths.iter().map(|p| p.len() - 1).max().unwrap_or(0);
    let roots2: HashSet<usize> = h.copy_roots(q2).iter().copied().collect();
    let commons: Vec<usize> = h
        .copy_roots(q1)
        .iter()
        .copied()
        .filter(|p| roots2.contains(p))
        .collect();
    let promised = if delta <= k || lambda >= 2 { delta } else { k };
    let full_extra = delta == k + 1 && lambda >= 2;
    let bound = if commons.is_empty() {
        mu + 4
    } else if full_extra && commons.len() == 1 {
        mu.max(6)
    } else {
        6
    };

    let ctx = Ctx {
        h,
        hb1,
        hb2,
        q1,
        q2,
        k,
    };
    let sorted = |mut v: Vec<usize>| {
        v.sort_unstable();
        v
    };
    let non_common = |q: usize, exclude: &[usize]| -> Vec<usize> {
        sorted(
            h.copy_roots(q)
                .iter()
                .copied()
                .filter(|p| !commons.contains(p) && !exclude.contains(p))
                .collect(),
        )
    };

    let attempt = || -> Result<Vec<Vec<Elem>>> {
        if let Some(&p1) = commons.first() {
            if full_extra && commons.len() >= 2 {
                // two shared groups carry delta = k + 1 paths
                let direct = commons
                    .iter()
                    .find(|&&p| ctx.member1(p).ok() == ctx.member2(p).ok());
                let (p1, p2) = match direct {
                    Some(&p2) => (*commons.iter().find(|&&c| c != p2).unwrap(), p2),
                    None => (commons[0], commons[1]),
                };
                let mut pairs: Vec<(usize, usize)> = non_common(q1, &[])
                    .into_iter()
                    .zip(non_common(q2, &[]))
                    .collect();
                pairs.extend(
                    commons
                        .iter()
                        .filter(|&&c| c != p1 && c != p2)
                        .map(|&c| (c, c)),
                );
                let (mut paths, amendment) = shared_paths(&ctx, p1, &pairs)?;
                let extra = second_shared_path(&ctx, p2, &pairs, amendment)
                    .ok_or_else(|| Error::BadRouting("no route through the second shared group".into()))?;
                paths.push(extra);
                Ok(paths)
            } else if full_extra {
                // one shared group plus a transit along a second base path
                let tpath = base_paths
                    .iter()
                    .find(|p| !p.contains(&Elem::Node(p1)))
                    .ok_or_else(|| Error::BadRouting("no base path avoids the shared group".into()))?;
                let tps: Vec<usize> = tpath
                    .iter()
                    .filter_map(|&e| match e {
                        Elem::Node(p) => Some(p),
                        _ => None,
                    })
                    .collect();
                let pairs: Vec<(usize, usize)> = non_common(q1, &[tps[0]])
                    .into_iter()
                    .zip(non_common(q2, &[tps[tps.len() - 1]]))
                    .collect();
                let (mut paths, _) = shared_paths(&ctx, p1, &pairs)?;
                let used: HashSet<Elem> = paths.iter().flatten().copied().collect();
                paths.push(transit_path(&ctx, tpath, &used)?);
                Ok(paths)
            } else {
                // every path rides the one shared group
                let mut pairs: Vec<(usize, usize)> = non_common(q1, &[])
                    .into_iter()
                    .zip(non_common(q2, &[]))
                    .collect();
                pairs.extend(commons.iter().filter(|&&c| c != p1).map(|&c| (c, c)));
                pairs.truncate(promised - 1);
                Ok(shared_paths(&ctx, p1, &pairs)?.0)
            }
        } else {
            let lanes = promised.min(k);
            let (reserve1, reserve2, tpath) = if full_extra {
                let tpath = &base_paths[1];
                let tps: Vec<usize> = tpath
                    .iter()
                    .filter_map(|&e| match e {
                        Elem::Node(p) => Some(p),
                        _ => None,
                    })
                    .collect();
                (Some(tps[0]), Some(tps[tps.len() - 1]), Some(tpath))
            } else {
                (None, None, None)
            };
            let mut paths = pipe_paths(&ctx, &base_paths[0], lanes, reserve1, reserve2)?;
            if let Some(tpath) = tpath {
                let used: HashSet<Elem> = paths.iter().flatten().copied().collect();
                paths.push(transit_path(&ctx, tpath, &used)?);
            }
            Ok(paths)
        }
    };

    let finish = |paths: Vec<AltPath>| -> Result<PathSet> {
        let ps = PathSet {
            paths,
            mode: DisjointMode::Internal,
            length_bound: bound,
        };
        ps.check(g)?;
        for p in &ps.paths {
            if p.source() != Some(g.block_id(hb1)) || p.destination() != Some(g.block_id(hb2)) {
                return Err(Error::RoutingSelfCheck("path endpoints are wrong".into()));
            }
        }
        if ps.paths.len() != promised {
            return Err(Error::RoutingSelfCheck(format!(
                "built {} paths, promised {promised}",
                ps.paths.len()
            )));
        }
        Ok(ps)
    };

    let constructed = attempt()
        .map(|paths| paths.iter().map(|p| AltPath::from_elems(g, p)).collect())
        .and_then(finish);
    let pathset = match constructed {
        Ok(ps) => ps,
        Err(_) => {
            let allowed = region_elems(h, &base_paths, q1, q2);
            let found = disjoint_paths_search(
                g,
                Elem::Block(hb1),
                Elem::Block(hb2),
                promised,
                bound,
                DisjointMode::Internal,
                Some(&allowed),
            )
            .ok_or_else(|| {
                Error::RoutingSelfCheck(format!(
                    "no system of {promised} paths within length {bound} between {src} and {dst}"
                ))
            })?;
            finish(found)?
        }
    };

    Ok(OneToOne {
        promised,
        lambda,
        mu,
        common: commons.len(),
        pathset,
    })
}

/// Re-expresses a within-design path inside copy `q` of the host graph.
pub(crate) fn lift_td_path(h: &ConstructedGraph, q: usize, p: &AltPath) -> Result<AltPath> {
    let td = h.td();
    let g = h.graph();
    let elems = p
        .resolve(td.graph())
        .ok_or_else(|| Error::BadRouting("path does not fit the design".into()))?;
    let lifted: Vec<Elem> = elems
        .into_iter()
        .map(|e| match e {
            Elem::Node(tn) => {
                let grp = td.group_of(tn);
                let pos = td.groups()[grp].iter().position(|&m| m == tn).unwrap();
                Elem::Node(h.node_in_copy(q, grp, pos))
            }
            Elem::Block(u) => Elem::Block(h.h_block(q, u)),
        })
        .collect();
    Ok(AltPath::from_elems(g, &lifted))
}

/// Elements of the copies on and around the given base paths, as the
/// search region for fallback routing.
fn region_elems(h: &ConstructedGraph, base_paths: &[Vec<Elem>], q1: usize, q2: usize) -> HashSet<Elem> {
    let mut blocks: HashSet<usize> = [q1, q2].into();
    let mut nodes: HashSet<usize> = HashSet::new();
    for p in base_paths {
        for &e in p {
            match e {
                Elem::Block(b) => {
                    blocks.insert(b);
                }
                Elem::Node(n) => {
                    nodes.insert(n);
                }
            }
        }
    }
    for &q in &blocks.clone() {
        nodes.extend(h.copy_roots(q).iter().copied());
    }
    let mut out = HashSet::new();
    let td_blocks = h.td().graph().block_count();
    for &q in &blocks {
        for u in 0..td_blocks {
            out.insert(Elem::Block(h.h_block(q, u)));
        }
    }
    for &p in &nodes {
        for pos in 0..h.td().k() {
            out.insert(Elem::Node(h.h_node(p, pos)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{gen_circulant, gen_cycle, two_step};
    use crate::tdesign::TransversalDesign;
    use crate::verify::menger_count;

    fn sample() -> ConstructedGraph {
        two_step(&gen_cycle(5).unwrap(), &TransversalDesign::build(2, 3).unwrap()).unwrap()
    }

    #[test]
    fn base_path_system_on_cycle() {
        let g = gen_cycle(5).unwrap();
        let paths = h0_disjoint_paths(&g, 0, 2).unwrap();
        assert_eq!(paths.len(), 2);
        assert_eq!(paths[0].len() - 1, 4);
        assert_eq!(paths[1].len() - 1, 6);
    }

    #[test]
    fn same_copy_pair() {
        let h = sample();
        let g = h.graph();
        // two blocks from the copy of base block e0
        let r = one_to_one(&h, g.block_id(0), g.block_id(1)).unwrap();
        assert_eq!(r.promised, 2);
        assert_eq!(r.lambda, 0);
        assert!(r.pathset.max_len() <= 6);
    }

    #[test]
    fn adjacent_copy_pair_uses_shared_group() {
        let h = sample();
        let g = h.graph();
        let r = one_to_one(&h, "e0.b0_0", "e1.b0_0").unwrap();
        assert_eq!(r.common, 1);
        assert_eq!(r.promised, 2);
        assert!(r.pathset.max_len() <= 6);
        assert_eq!(
            menger_count(g, g.elem("e0.b0_0").unwrap(), g.elem("e1.b0_0").unwrap(), DisjointMode::Internal).unwrap(),
            2
        );
    }

    #[test]
    fn far_copy_pair_uses_pipes() {
        let h = sample();
        let r = one_to_one(&h, "e0.b0_0", "e2.b1_2").unwrap();
        assert_eq!(r.common, 0);
        assert_eq!(r.promised, 2);
        assert!(r.pathset.max_len() <= r.mu + 4);
    }

    #[test]
    fn full_degree_gets_extra_path() {
        // delta = k + 1 = 3 on a circulant base
        let h = two_step(&gen_circulant(6, 3).unwrap(), &TransversalDesign::build(3, 2).unwrap()).unwrap();
        let g = h.graph();
        let r = one_to_one(&h, g.block_id(0), g.block_id(5)).unwrap();
        if r.lambda >= 2 {
            assert_eq!(r.promised, 3);
        }
        assert_eq!(r.pathset.paths.len(), r.promised);
    }

    #[test]
    fn rejects_identical_endpoints() {
        let h = sample();
        assert!(one_to_one(&h, "e0.b0_0", "e0.b0_0").is_err());
    }
}
