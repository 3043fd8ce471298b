//! End-to-end acceptance checks, one printed line per criterion.

use dcnet::bigraph::BipartiteGraph;
use dcnet::construct::{
    check_line_diameter_preserved, double_cover_join, gen_circulant, gen_cycle, three_step,
    two_step, ConstructedGraph,
};
use dcnet::dcn::{dcn_counts, method_a, table_qfz, Method};
use dcnet::sweeps::{
    sweep_one_to_one, trial_block_to_targets, trial_fan_in, trial_one_to_many, SweepReport,
};
use dcnet::tdesign::TransversalDesign;
use dcnet::verify::enumerate_td_3_2;

const SEED: u64 = 20_260_824;
const TRIALS: usize = 1_000;

type Check = fn() -> Result<(), String>;

fn design_validity() -> Result<(), String> {
    for k in [2usize, 3, 4, 5, 7, 8, 9, 11, 13] {
        for delta in 2..=k + 1 {
            let t = TransversalDesign::build(delta, k)
                .map_err(|e| format!("[{delta},{k}]: {e}"))?;
            let report = t.verify();
            if !report.is_valid() {
                return Err(format!("[{delta},{k}]: {:?}", report.violations));
            }
        }
    }
    Ok(())
}

fn design_3_2_uniqueness() -> Result<(), String> {
    let (raw, classes) = enumerate_td_3_2();
    if classes.len() != 1 {
        return Err(format!("{} isomorphism classes from {raw} candidates", classes.len()));
    }
    if !classes[0].isomorphic(&TransversalDesign::canonical_3_2()) {
        return Err("the surviving class is not the published design".into());
    }
    Ok(())
}

fn line_diameter_preservation() -> Result<(), String> {
    let c10 = gen_cycle(5).map_err(|e| e.to_string())?;
    let bases: Vec<(&str, BipartiteGraph, usize, usize)> = vec![
        ("gen_cycle(5)", c10.clone(), 2, 3),
        ("gen_cycle(6)", gen_cycle(6).map_err(|e| e.to_string())?, 2, 3),
        ("gen_circulant(12,3)", gen_circulant(12, 3).map_err(|e| e.to_string())?, 3, 3),
        ("double_cover_join(C10)", double_cover_join(&c10).map_err(|e| e.to_string())?, 3, 2),
    ];
    for (name, base, delta, k) in bases {
        let lambda = base.line_diameter().map_err(|e| format!("{name}: {e}"))?;
        if lambda < 4 {
            continue; // preservation is only promised from 4 up
        }
        let td = TransversalDesign::build(delta, k).map_err(|e| format!("{name}: {e}"))?;
        let preserved =
            check_line_diameter_preserved(&base, &td).map_err(|e| format!("{name}: {e}"))?;
        if preserved != lambda {
            return Err(format!("{name}: line diameter {lambda} became {preserved}"));
        }
    }
    Ok(())
}

fn published_table() -> Result<(), String> {
    let expect: Vec<(&str, u64, u64, u64)> = vec![
        ("fat-tree", 64, 6, 65_536),
        ("h-star", 64, 4, 54_720),
        ("na1(h-star)", 64, 6, 3_064_320),
        ("na2(h-star)", 64, 6, 437_760),
        ("na3(h-star)", 64, 6, 1_751_040),
        ("nb(h-star)", 64, 6, 1_532_160),
        ("hbar-star", 64, 4, 20_480),
        ("na1(hbar-star)", 64, 6, 1_228_800),
    ];
    let expect_switches: Vec<u64> = vec![5_120, 6_840, 61_560, 102_600, 82_080, 61_560, 1_280, 21_760];
    let rows = table_qfz();
    if rows.len() != expect.len() {
        return Err(format!("{} rows, expected {}", rows.len(), expect.len()));
    }
    for (row, (&(name, ports, diameter, servers), &switches)) in
        rows.iter().zip(expect.iter().zip(&expect_switches))
    {
        let got = (
            row.network.as_str(),
            row.counts.ports,
            row.counts.diameter,
            row.counts.servers,
            row.counts.switches,
        );
        if got != (name, ports, diameter, servers, switches) {
            return Err(format!("row {name}: got {got:?}"));
        }
    }
    // the 346-node example with [8,7] and [8,8] designs, four copies each
    let small = dcn_counts(346, 346, 8, 8, 7, 1, 4, Method::A).map_err(|e| e.to_string())?;
    if (small.servers, small.level1, small.level2, small.ports) != (406_896, 16_954, 9_688, 56) {
        return Err(format!("346/[8,7] counts: {small:?}"));
    }
    let large = dcn_counts(346, 346, 8, 8, 8, 1, 4, Method::A).map_err(|e| e.to_string())?;
    if (large.servers, large.level1, large.level2, large.ports) != (708_608, 22_144, 11_072, 64) {
        return Err(format!("346/[8,8] counts: {large:?}"));
    }
    Ok(())
}

fn sweep_graphs() -> Result<Vec<(String, ConstructedGraph)>, String> {
    let c10 = gen_cycle(5).map_err(|e| e.to_string())?;
    let build = |name: &str, base: &BipartiteGraph, delta, k| -> Result<(String, ConstructedGraph), String> {
        let td = TransversalDesign::build(delta, k).map_err(|e| e.to_string())?;
        Ok((name.to_string(), two_step(base, &td).map_err(|e| e.to_string())?))
    };
    Ok(vec![
        build("two_step(C10, [2,3])", &c10, 2, 3)?,
        build(
            "two_step(gen_circulant(9,3), [3,3])",
            &gen_circulant(9, 3).map_err(|e| e.to_string())?,
            3,
            3,
        )?,
        build(
            "two_step(double_cover_join(C10), [3,2])",
            &double_cover_join(&c10).map_err(|e| e.to_string())?,
            3,
            2,
        )?,
    ])
}

fn summarize(name: &str, report: &SweepReport) -> Result<(), String> {
    if report.is_ok() {
        return Ok(());
    }
    Err(format!(
        "{name}: {} of {} cases failed; first: {}",
        report.failures.len(),
        report.cases,
        report.failures[0]
    ))
}

fn one_to_one_sweeps() -> Result<(), String> {
    for (name, h) in sweep_graphs()? {
        let report = sweep_one_to_one(&h).map_err(|e| format!("{name}: {e}"))?;
        summarize(&name, &report)?;
    }
    Ok(())
}

fn trial_designs() -> Result<Vec<(String, TransversalDesign)>, String> {
    [(3usize, 3usize), (4, 4), (4, 5)]
        .iter()
        .map(|&(delta, k)| {
            TransversalDesign::build(delta, k)
                .map(|t| (format!("[{delta},{k}]"), t))
                .map_err(|e| e.to_string())
        })
        .collect()
}

fn block_to_targets_trials() -> Result<(), String> {
    for (name, t) in trial_designs()? {
        summarize(&name, &trial_block_to_targets(&t, TRIALS, SEED))?;
    }
    Ok(())
}

fn fan_in_trials() -> Result<(), String> {
    for (name, t) in trial_designs()? {
        summarize(&name, &trial_fan_in(&t, TRIALS, SEED))?;
    }
    Ok(())
}

fn one_to_many_trials() -> Result<(), String> {
    let base = gen_circulant(9, 3).map_err(|e| e.to_string())?;
    let td = TransversalDesign::build(3, 3).map_err(|e| e.to_string())?;
    let h = two_step(&base, &td).map_err(|e| e.to_string())?;
    let report = trial_one_to_many(&h, TRIALS, SEED).map_err(|e| e.to_string())?;
    summarize("two_step(gen_circulant(9,3), [3,3])", &report)
}

fn dcn_server_diameter() -> Result<(), String> {
    let base = gen_cycle(5).map_err(|e| e.to_string())?;
    if base.line_diameter().map_err(|e| e.to_string())? != 4 {
        return Err("expected a line-diameter-4 base".into());
    }
    let td = TransversalDesign::build(2, 2).map_err(|e| e.to_string())?;
    let h = three_step(&base, &td).map_err(|e| e.to_string())?;
    let dcn = method_a(h.graph(), 1).map_err(|e| e.to_string())?;
    let diameter = dcn.server_diameter().map_err(|e| e.to_string())?;
    if diameter != 6 {
        return Err(format!("server diameter {diameter}, expected 6"));
    }
    Ok(())
}

#[test]
fn acceptance() {
    let criteria: Vec<(&str, Check)> = vec![
        ("design-validity", design_validity),
        ("design-3-2-uniqueness", design_3_2_uniqueness),
        ("line-diameter-preservation", line_diameter_preservation),
        ("published-table-reproduction", published_table),
        ("one-to-one-sweeps", one_to_one_sweeps),
        ("block-to-targets-trials", block_to_targets_trials),
        ("fan-in-trials", fan_in_trials),
        ("one-to-many-trials", one_to_many_trials),
        ("dcn-server-diameter", dcn_server_diameter),
    ];
    let mut failed = false;
    for (name, check) in criteria {
        match check() {
            Ok(()) => println!("PASS {name}"),
            Err(why) => {
                failed = true;
                println!("FAIL {name}: {why}");
            }
        }
    }
    assert!(!failed, "one or more acceptance criteria failed");
}
