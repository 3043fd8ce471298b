//! Conversion of bipartite graphs into switch-centric DCNs.
//!
//! Method A takes c copies of a regular, uniform bipartite graph whose
//! blocks have rank δ and whose nodes have degree Δ with cΔ < δ. Nodes
//! become level-1 switches (the c copies of a node merged into one), blocks
//! become level-2 switches (one per copy), and the ρ = δ - cΔ spare ports
//! on each level-1 switch host pendant servers, so every switch has exactly
//! δ ports. Method B halves the server count of a Method-A network by
//! pairing level-1 switches and dual-homing the surviving servers.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::bigraph::BipartiteGraph;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DeviceKind {
    Server,
    Level1,
    Level2,
}

/// A switch-centric DCN: servers plus two levels of switches, every switch
/// with the same port count.
#[derive(Debug, Clone)]
pub struct Dcn {
    ids: Vec<String>,
    kinds: Vec<DeviceKind>,
    adj: Vec<Vec<usize>>,
    ports: usize,
}

impl Dcn {
    pub fn ports(&self) -> usize {
        self.ports
    }

    pub fn device_count(&self) -> usize {
        self.ids.len()
    }

    pub fn id(&self, i: usize) -> &str {
        &self.ids[i]
    }

    pub fn kind(&self, i: usize) -> DeviceKind {
        self.kinds[i]
    }

    pub fn count(&self, kind: DeviceKind) -> usize {
        self.kinds.iter().filter(|&&k| k == kind).count()
    }

    pub fn link_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    fn devices_of(&self, kind: DeviceKind) -> Vec<usize> {
        (0..self.ids.len()).filter(|&i| self.kinds[i] == kind).collect()
    }

    /// Checks the port discipline: every switch has exactly `ports` links
    /// and every server one (Method A) or two (Method B).
    pub fn validate(&self) -> Result<()> {
        for i in 0..self.ids.len() {
            let deg = self.adj[i].len();
            match self.kinds[i] {
                DeviceKind::Server => {
                    if deg != 1 && deg != 2 {
                        return Err(Error::BadDcn(format!(
                            "server {} has {deg} links",
                            self.ids[i]
                        )));
                    }
                }
                _ => {
                    if deg != self.ports {
                        return Err(Error::BadDcn(format!(
                            "switch {} uses {deg} of {} ports",
                            self.ids[i], self.ports
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Longest shortest server-to-server path, in links.
    pub fn server_diameter(&self) -> Result<usize> {
        let servers = self.devices_of(DeviceKind::Server);
        let mut best = 0;
        for &s in &servers {
            let mut dist = vec![usize::MAX; self.ids.len()];
            dist[s] = 0;
            let mut queue = std::collections::VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for &w in &self.adj[v] {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[v] + 1;
                        queue.push_back(w);
                    }
                }
            }
            for &t in &servers {
                if dist[t] == usize::MAX {
                    return Err(Error::Disconnected);
                }
                best = best.max(dist[t]);
            }
        }
        Ok(best)
    }

    pub fn to_json(&self) -> DcnJson {
        let by_kind = |k: DeviceKind| -> Vec<String> {
            self.devices_of(k).iter().map(|&i| self.ids[i].clone()).collect()
        };
        let mut links = Vec::new();
        for (i, nb) in self.adj.iter().enumerate() {
            for &j in nb {
                if i < j {
                    links.push([self.ids[i].clone(), self.ids[j].clone()]);
                }
            }
        }
        DcnJson {
            ports: self.ports,
            servers: by_kind(DeviceKind::Server),
            level1: by_kind(DeviceKind::Level1),
            level2: by_kind(DeviceKind::Level2),
            links,
        }
    }

    pub fn from_json(j: &DcnJson) -> Result<Self> {
        let mut ids = Vec::new();
        let mut kinds = Vec::new();
        for (list, kind) in [
            (&j.servers, DeviceKind::Server),
            (&j.level1, DeviceKind::Level1),
            (&j.level2, DeviceKind::Level2),
        ] {
            for id in list {
                ids.push(id.clone());
                kinds.push(kind);
            }
        }
        let mut index = HashMap::new();
        for (i, id) in ids.iter().enumerate() {
            if index.insert(id.clone(), i).is_some() {
                return Err(Error::BadDcn(format!("duplicate device id {id:?}")));
            }
        }
        let mut adj = vec![Vec::new(); ids.len()];
        for [a, b] in &j.links {
            let &ia = index.get(a).ok_or_else(|| Error::BadDcn(format!("unknown device {a:?}")))?;
            let &ib = index.get(b).ok_or_else(|| Error::BadDcn(format!("unknown device {b:?}")))?;
            adj[ia].push(ib);
            adj[ib].push(ia);
        }
        for nb in &mut adj {
            nb.sort_unstable();
            if nb.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::BadDcn("duplicate link".into()));
            }
        }
        Ok(Self {
            ids,
            kinds,
            adj,
            ports: j.ports,
        })
    }

    pub fn save(&self, path: &std::path::Path) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(&self.to_json())?)?;
        Ok(())
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let j: DcnJson = serde_json::from_str(&text)?;
        Self::from_json(&j)
    }

    /// Graphviz export; servers as points, level-1 switches as circles,
    /// level-2 switches as squares.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph dcn {\n");
        for (i, id) in self.ids.iter().enumerate() {
            let shape = match self.kinds[i] {
                DeviceKind::Server => "point",
                DeviceKind::Level1 => "circle",
                DeviceKind::Level2 => "square",
            };
            out.push_str(&format!("  \"{id}\" [shape={shape}];\n"));
        }
        for (i, nb) in self.adj.iter().enumerate() {
            for &j in nb {
                if i < j {
                    out.push_str(&format!("  \"{}\" -- \"{}\";\n", self.ids[i], self.ids[j]));
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DcnJson {
    pub ports: usize,
    pub servers: Vec<String>,
    pub level1: Vec<String>,
    pub level2: Vec<String>,
    pub links: Vec<[String; 2]>,
}

/// Method A applied to a regular, uniform bipartite graph.
pub fn method_a(h: &BipartiteGraph, c: usize) -> Result<Dcn> {
    let prof = h.degree_profile();
    if !prof.regular || !prof.uniform {
        return Err(Error::BadDcn("graph must be regular and uniform".into()));
    }
    let (delta_deg, ports) = (prof.d, prof.delta);
    if c < 1 {
        return Err(Error::BadDcn("c must be at least 1".into()));
    }
    if c * delta_deg >= ports {
        return Err(Error::BadDcn(format!(
            "c * node degree = {} leaves no server ports out of {ports}",
            c * delta_deg
        )));
    }
    let rho = ports - c * delta_deg;

    let mut ids = Vec::new();
    let mut kinds = Vec::new();
    let mut index = HashMap::new();
    let push = |ids: &mut Vec<String>, kinds: &mut Vec<DeviceKind>, index: &mut HashMap<String, usize>, id: String, kind: DeviceKind| -> usize {
        let i = ids.len();
        index.insert(id.clone(), i);
        ids.push(id);
        kinds.push(kind);
        i
    };
    for u in 0..h.node_count() {
        for t in 1..=rho {
            push(&mut ids, &mut kinds, &mut index, format!("srv:{}:{t}", h.node_id(u)), DeviceKind::Server);
        }
    }
    for u in 0..h.node_count() {
        push(&mut ids, &mut kinds, &mut index, format!("s1:{}", h.node_id(u)), DeviceKind::Level1);
    }
    for ci in 1..=c {
        for b in 0..h.block_count() {
            push(&mut ids, &mut kinds, &mut index, format!("s2:{ci}:{}", h.block_id(b)), DeviceKind::Level2);
        }
    }

    let mut adj = vec![Vec::new(); ids.len()];
    let link = |adj: &mut Vec<Vec<usize>>, a: usize, b: usize| {
        adj[a].push(b);
        adj[b].push(a);
    };
    for u in 0..h.node_count() {
        let l1 = index[&format!("s1:{}", h.node_id(u))];
        for t in 1..=rho {
            let s = index[&format!("srv:{}:{t}", h.node_id(u))];
            link(&mut adj, s, l1);
        }
        for ci in 1..=c {
            for &b in h.blocks_of(u) {
                let l2 = index[&format!("s2:{ci}:{}", h.block_id(b))];
                link(&mut adj, l1, l2);
            }
        }
    }
    for nb in &mut adj {
        nb.sort_unstable();
    }
    let dcn = Dcn {
        ids,
        kinds,
        adj,
        ports,
    };
    dcn.validate()?;
    Ok(dcn)
}

/// Method B applied to a Method-A network: level-1 switches are paired in
/// order, ⌊ρ/2⌋ servers are dropped from the first of each pair and ⌈ρ/2⌉
/// from the second, and every surviving server gains a second link to its
/// switch's partner.
pub fn method_b(a: &Dcn) -> Result<Dcn> {
    a.validate()?;
    let level1 = a.devices_of(DeviceKind::Level1);
    if level1.len() % 2 != 0 {
        return Err(Error::BadDcn("method B needs an even number of level-1 switches".into()));
    }
    // servers per level-1 switch, in construction order
    let mut servers_of: HashMap<usize, Vec<usize>> = HashMap::new();
    for s in a.devices_of(DeviceKind::Server) {
        if a.adj[s].len() != 1 {
            return Err(Error::BadDcn("method B input must be a Method-A network".into()));
        }
        servers_of.entry(a.adj[s][0]).or_default().push(s);
    }
    let rho = servers_of.get(&level1[0]).map_or(0, Vec::len);
    if rho == 0 || level1.iter().any(|l| servers_of.get(l).map_or(0, Vec::len) != rho) {
        return Err(Error::BadDcn("level-1 switches must host equally many servers".into()));
    }

    let mut drop = vec![false; a.ids.len()];
    let mut extra_link: Vec<(usize, usize)> = Vec::new();
    for pair in level1.chunks(2) {
        let (first, second) = (pair[0], pair[1]);
        let sf = &servers_of[&first];
        let ss = &servers_of[&second];
        for &s in &sf[rho - rho / 2..] {
            drop[s] = true;
        }
        for &s in &ss[rho - rho.div_ceil(2)..] {
            drop[s] = true;
        }
        for &s in &sf[..rho - rho / 2] {
            extra_link.push((s, second));
        }
        for &s in &ss[..rho - rho.div_ceil(2)] {
            extra_link.push((s, first));
        }
    }

    let mut keep_index = HashMap::new();
    let mut ids = Vec::new();
    let mut kinds = Vec::new();
    for i in 0..a.ids.len() {
        if !drop[i] {
            keep_index.insert(i, ids.len());
            ids.push(a.ids[i].clone());
            kinds.push(a.kinds[i]);
        }
    }
    let mut adj = vec![Vec::new(); ids.len()];
    for (i, nb) in a.adj.iter().enumerate() {
        if drop[i] {
            continue;
        }
        for &j in nb {
            if !drop[j] && i < j {
                adj[keep_index[&i]].push(keep_index[&j]);
                adj[keep_index[&j]].push(keep_index[&i]);
            }
        }
    }
    for (s, l) in extra_link {
        adj[keep_index[&s]].push(keep_index[&l]);
        adj[keep_index[&l]].push(keep_index[&s]);
    }
    for nb in &mut adj {
        nb.sort_unstable();
    }
    let dcn = Dcn {
        ids,
        kinds,
        adj,
        ports: a.ports,
    };
    dcn.validate()?;
    Ok(dcn)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    A,
    B,
}

/// Closed-form device counts for a DCN built by the 3-step method (iterated
/// `iterations` times with the same design) followed by Method A or B.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DcnCounts {
    pub ports: u64,
    pub diameter: u64,
    pub servers: u64,
    pub level1: u64,
    pub level2: u64,
    pub switches: u64,
}

/// Counts for the 3-step graph on an (n, e, d, Δ)-base with a [Δ,k]-design,
/// converted by `method` with copy count `c`. The 3-step graph has e·k^{2i}
/// nodes of degree Δ and n·k^i blocks of rank d·k^i.
#[allow(clippy::too_many_arguments)]
pub fn dcn_counts(
    n: u64,
    e: u64,
    d: u64,
    delta: u64,
    k: u64,
    iterations: u32,
    c: u64,
    method: Method,
) -> Result<DcnCounts> {
    let ki = k.pow(iterations);
    let ports = d * ki;
    if c * delta >= ports {
        return Err(Error::BadDcn(format!(
            "c * delta = {} leaves no server ports out of {ports}",
            c * delta
        )));
    }
    let level1 = e * ki * ki;
    let level2 = c * n * ki;
    let rho = ports - c * delta;
    let mut servers = level1 * rho;
    if method == Method::B {
        if level1 % 2 != 0 || servers % 2 != 0 {
            return Err(Error::BadDcn("method B needs even counts".into()));
        }
        servers /= 2;
    }
    Ok(DcnCounts {
        ports,
        diameter: 6,
        servers,
        level1,
        level2,
        switches: level1 + level2,
    })
}

/// Counts when the 3-step graph is used as a DCN directly: every node is a
/// server (with Δ NIC ports) and every block a switch.
pub fn bare_counts(n: u64, e: u64, d: u64, k: u64, iterations: u32) -> DcnCounts {
    let ki = k.pow(iterations);
    DcnCounts {
        ports: d * ki,
        diameter: 4,
        servers: e * ki * ki,
        level1: 0,
        level2: n * ki,
        switches: n * ki,
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TableRow {
    pub network: String,
    pub counts: DcnCounts,
}

/// The published 64-port comparison table: Fat-Tree, the 3-step graph on an
/// (8,8)-regular 855-node base with a [8,8]-design (bare, Method A with
/// c = 1, 7, 4, and Method B), and the twice-iterated 3-step graph on a
/// (4,4)-regular 80-node base with a [4,4]-design (bare and Method A, c=1).
pub fn table_qfz() -> Vec<TableRow> {
    let row = |network: &str, counts: DcnCounts| TableRow {
        network: network.into(),
        counts,
    };
    let a = |c, method| dcn_counts(855, 855, 8, 8, 8, 1, c, method).unwrap();
    let abar = |c, method| dcn_counts(80, 80, 4, 4, 4, 2, c, method).unwrap();
    vec![
        row(
            "fat-tree",
            DcnCounts {
                ports: 64,
                diameter: 6,
                servers: 65_536,
                level1: 0,
                level2: 0,
                switches: 5_120,
            },
        ),
        row("h-star", bare_counts(855, 855, 8, 8, 1)),
        row("na1(h-star)", a(1, Method::A)),
        row("na2(h-star)", a(7, Method::A)),
        row("na3(h-star)", a(4, Method::A)),
        row("nb(h-star)", a(1, Method::B)),
        row("hbar-star", bare_counts(80, 80, 4, 4, 2)),
        row("na1(hbar-star)", abar(1, Method::A)),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{gen_cycle, three_step};
    use crate::tdesign::TransversalDesign;

    fn small_a(c: usize) -> Dcn {
        let base = gen_cycle(5).unwrap();
        let td = TransversalDesign::build(2, 3).unwrap();
        let h = three_step(&base, &td).unwrap();
        method_a(h.graph(), c).unwrap()
    }

    #[test]
    fn method_a_counts_and_diameter() {
        let dcn = small_a(1);
        // 45 nodes of degree 2, 15 blocks of rank 6, rho = 4
        assert_eq!(dcn.count(DeviceKind::Server), 180);
        assert_eq!(dcn.count(DeviceKind::Level1), 45);
        assert_eq!(dcn.count(DeviceKind::Level2), 15);
        assert_eq!(dcn.ports(), 6);
        assert_eq!(dcn.server_diameter().unwrap(), 6);
    }

    #[test]
    fn method_a_rejects_port_overflow() {
        let base = gen_cycle(5).unwrap();
        let td = TransversalDesign::build(2, 3).unwrap();
        let h = three_step(&base, &td).unwrap();
        assert!(method_a(h.graph(), 3).is_err());
    }

    // 20 level-1 switches, so Method B's pairing applies
    fn even_a() -> Dcn {
        let base = gen_cycle(5).unwrap();
        let td = TransversalDesign::build(2, 2).unwrap();
        let h = three_step(&base, &td).unwrap();
        method_a(h.graph(), 1).unwrap()
    }

    #[test]
    fn method_b_halves_servers_and_keeps_ports() {
        let a = even_a();
        assert_eq!(a.count(DeviceKind::Server), 40);
        let b = method_b(&a).unwrap();
        assert_eq!(b.count(DeviceKind::Server), 20);
        assert_eq!(b.count(DeviceKind::Level1), 20);
        assert_eq!(b.count(DeviceKind::Level2), 10);
        b.validate().unwrap();
        assert!(b.server_diameter().unwrap() <= 6);
    }

    #[test]
    fn method_b_rejects_odd_level1_count() {
        assert!(method_b(&small_a(1)).is_err());
    }

    #[test]
    fn method_b_rejects_odd_pairing(){
        // 9-node circulant dual gives odd level-1 count after method A?
        // simpler: mangle a Method-A network by serializing and dropping a switch
        let a = small_a(2);
        let mut j = a.to_json();
        let victim = j.level1.pop().unwrap();
        j.servers.retain(|s| !s.contains(&victim["s1:".len()..]));
        j.links.retain(|[x, y]| *x != victim && *y != victim);
        // the truncated network is no longer port-uniform, so validation fails
        let odd = Dcn::from_json(&j).unwrap();
        assert!(method_b(&odd).is_err());
    }

    #[test]
    fn counts_match_published_table() {
        let rows = table_qfz();
        let by_name = |n: &str| rows.iter().find(|r| r.network == n).unwrap().counts;
        assert_eq!(by_name("fat-tree").servers, 65_536);
        assert_eq!(by_name("h-star").servers, 54_720);
        assert_eq!(by_name("h-star").switches, 6_840);
        assert_eq!(by_name("na1(h-star)").servers, 3_064_320);
        assert_eq!(by_name("na1(h-star)").switches, 61_560);
        assert_eq!(by_name("na2(h-star)").servers, 437_760);
        assert_eq!(by_name("na2(h-star)").switches, 102_600);
        assert_eq!(by_name("na3(h-star)").servers, 1_751_040);
        assert_eq!(by_name("na3(h-star)").switches, 82_080);
        assert_eq!(by_name("nb(h-star)").servers, 1_532_160);
        assert_eq!(by_name("nb(h-star)").switches, 61_560);
        assert_eq!(by_name("hbar-star").servers, 20_480);
        assert_eq!(by_name("hbar-star").switches, 1_280);
        assert_eq!(by_name("na1(hbar-star)").servers, 1_228_800);
        assert_eq!(by_name("na1(hbar-star)").switches, 21_760);
        assert!(rows.iter().all(|r| r.counts.ports == 64));
    }

    #[test]
    fn counts_match_worked_examples() {
        let c7 = dcn_counts(346, 346, 8, 8, 7, 1, 4, Method::A).unwrap();
        assert_eq!(c7.servers, 406_896);
        assert_eq!(c7.level1, 16_954);
        assert_eq!(c7.level2, 9_688);
        assert_eq!(c7.ports, 56);

        let c8 = dcn_counts(346, 346, 8, 8, 8, 1, 4, Method::A).unwrap();
        assert_eq!(c8.servers, 708_608);
        assert_eq!(c8.level1, 22_144);
        assert_eq!(c8.level2, 11_072);
        assert_eq!(c8.ports, 64);
    }

    #[test]
    fn small_methods_match_closed_form() {
        let counts = dcn_counts(5, 5, 2, 2, 3, 1, 1, Method::A).unwrap();
        let dcn = small_a(1);
        assert_eq!(dcn.count(DeviceKind::Server) as u64, counts.servers);
        assert_eq!(dcn.count(DeviceKind::Level1) as u64, counts.level1);
        assert_eq!(dcn.count(DeviceKind::Level2) as u64, counts.level2);

        let b_counts = dcn_counts(5, 5, 2, 2, 2, 1, 1, Method::B).unwrap();
        let b = method_b(&even_a()).unwrap();
        assert_eq!(b.count(DeviceKind::Server) as u64, b_counts.servers);
    }

    #[test]
    fn json_round_trip() {
        let dcn = small_a(1);
        let j = dcn.to_json();
        let back = Dcn::from_json(&j).unwrap();
        assert_eq!(back.count(DeviceKind::Server), 180);
        back.validate().unwrap();
        assert_eq!(back.server_diameter().unwrap(), 6);
    }
}
