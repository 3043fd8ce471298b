//! Exhaustive and randomized exercises of the routing constructions.
//!
//! Each sweep runs a construction across a whole graph (or a seeded stream
//! of random instances), re-verifies every result from first principles,
//! and reports any failures with witnesses instead of stopping at the
//! first one.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bigraph::Elem;
use crate::construct::ConstructedGraph;
use crate::error::Result;
use crate::routing::{block_to_targets, fan_in, one_to_many, one_to_one};
use crate::tdesign::TransversalDesign;
use crate::verify::{menger_count, DisjointMode};

#[derive(Debug)]
pub struct SweepReport {
    pub cases: usize,
    pub failures: Vec<String>,
}

impl SweepReport {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Runs the one-to-one construction over every ordered pair of blocks,
/// re-verifying the path count against the promise and the promise against
/// the Menger count.
pub fn sweep_one_to_one(h: &ConstructedGraph) -> Result<SweepReport> {
    h.require_two_step()?;
    let g = h.graph();
    let mut cases = 0;
    let mut failures = Vec::new();
    for b1 in 0..g.block_count() {
        for b2 in 0..g.block_count() {
            if b1 == b2 {
                continue;
            }
            cases += 1;
            let pair = format!("{} -> {}", g.block_id(b1), g.block_id(b2));
            let r = match one_to_one(h, g.block_id(b1), g.block_id(b2)) {
                Ok(r) => r,
                Err(e) => {
                    failures.push(format!("{pair}: {e}"));
                    continue;
                }
            };
            if r.pathset.paths.len() != r.promised {
                failures.push(format!(
                    "{pair}: {} paths instead of {}",
                    r.pathset.paths.len(),
                    r.promised
                ));
            }
            for v in r.pathset.violations(g) {
                failures.push(format!("{pair}: {v}"));
            }
            let mc = menger_count(g, Elem::Block(b1), Elem::Block(b2), DisjointMode::Internal)?;
            if mc != r.promised {
                failures.push(format!("{pair}: Menger count {mc}, promised {}", r.promised));
            }
        }
    }
    Ok(SweepReport { cases, failures })
}

/// Seeded random trials of the within-design block-to-targets construction.
pub fn trial_block_to_targets(t: &TransversalDesign, trials: usize, seed: u64) -> SweepReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = t.graph();
    let delta = t.delta();
    let mut failures = Vec::new();
    for trial in 0..trials {
        let u = rng.gen_range(0..g.block_count());
        let targets: Vec<Elem> = (0..delta)
            .map(|_| loop {
                if rng.gen_bool(0.5) {
                    break Elem::Node(rng.gen_range(0..g.node_count()));
                }
                let b = rng.gen_range(0..g.block_count());
                if b != u {
                    break Elem::Block(b);
                }
            })
            .collect();
        let witness = || {
            let ids: Vec<&str> = targets.iter().map(|&e| g.elem_id(e)).collect();
            format!("trial {trial}: {} -> {}", g.block_id(u), ids.join(", "))
        };
        match block_to_targets(t, u, &targets) {
            Ok(ps) => {
                // endpoint checks are part of the construction; re-verify
                // the structural claims here
                for v in ps.violations(g) {
                    failures.push(format!("{}: {v}", witness()));
                }
                let all_nodes = targets.iter().all(Elem::is_node);
                if all_nodes && ps.mode != DisjointMode::Internal {
                    failures.push(format!("{}: node targets but not internally-disjoint", witness()));
                }
            }
            Err(e) => failures.push(format!("{}: {e}", witness())),
        }
    }
    SweepReport {
        cases: trials,
        failures,
    }
}

/// Seeded random trials of the within-design fan-in construction.
pub fn trial_fan_in(t: &TransversalDesign, trials: usize, seed: u64) -> SweepReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = t.graph();
    let delta = t.delta();
    let mut failures = Vec::new();
    for trial in 0..trials {
        let d0 = rng.gen_range(0..delta);
        let count = rng.gen_range(1..=delta);
        let targets: Vec<Elem> = (0..count)
            .map(|_| loop {
                if rng.gen_bool(0.5) {
                    let n = rng.gen_range(0..g.node_count());
                    if t.group_of(n) != d0 {
                        break Elem::Node(n);
                    }
                } else {
                    break Elem::Block(rng.gen_range(0..g.block_count()));
                }
            })
            .collect();
        let witness = || {
            let ids: Vec<&str> = targets.iter().map(|&e| g.elem_id(e)).collect();
            format!("trial {trial}: group {d0} -> {}", ids.join(", "))
        };
        match fan_in(t, d0, &targets) {
            Ok(ps) => {
                for v in ps.violations(g) {
                    failures.push(format!("{}: {v}", witness()));
                }
            }
            Err(e) => failures.push(format!("{}: {e}", witness())),
        }
    }
    SweepReport {
        cases: trials,
        failures,
    }
}

/// Seeded random trials of the one-to-many construction on a 2-step graph.
pub fn trial_one_to_many(h: &ConstructedGraph, trials: usize, seed: u64) -> Result<SweepReport> {
    h.require_two_step()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = h.graph();
    let delta = h.td().delta();
    let mut failures = Vec::new();
    for trial in 0..trials {
        let src = rng.gen_range(0..g.block_count());
        let targets: Vec<String> = (0..delta)
            .map(|_| loop {
                let b = rng.gen_range(0..g.block_count());
                if b != src {
                    break g.block_id(b).to_owned();
                }
            })
            .collect();
        let witness = || format!("trial {trial}: {} -> {}", g.block_id(src), targets.join(", "));
        match one_to_many(h, g.block_id(src), &targets) {
            Ok(ps) => {
                for v in ps.violations(g) {
                    failures.push(format!("{}: {v}", witness()));
                }
            }
            Err(e) => failures.push(format!("{}: {e}", witness())),
        }
    }
    Ok(SweepReport {
        cases: trials,
        failures,
    })
}
