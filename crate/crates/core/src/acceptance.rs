//! The acceptance matrix: every headline result, checked at a pinned
//! tolerance, with one pass/fail line per check.
//!
//! Four published values are not reproducible from the stated procedures and
//! are asserted as stated anyway (the source tables are internally
//! inconsistent there); the affected checks carry an explanatory note. See
//! the project notes for the full analysis.

use std::sync::OnceLock;
use std::time::Instant;

use crate::arrangement::{
    exhaustive_search, optimize_geometry, square_grid_16, Arrangement, MultihelixConfig,
    SearchOptions,
};
use crate::bounds::{self, HullTable, LowerBoundKind};
use crate::closure::{close_link, incremental_ratio_bound, ratio_sweep, ClosureMode};
use crate::constructions::{
    construct_equal, construct_incremental, delta_exact_prefactor, equal_bound_optimal_t,
    equal_sweep, gamma_length, infill, reverse_jenga, InnerRadiusMode,
};
use crate::geometry::{self, Discretization, FitModel};
use crate::helix::{caduceus, ideal_helix};

/// Published single-shell optima (strands, radius, height, length, per crossing).
pub const TABLE1: [(u32, f64, f64, f64, f64); 9] = [
    (2, 1.04587, 5.3934, 17.0026, 8.5013),
    (3, 1.43524, 8.36102, 36.8926, 6.14877),
    (4, 1.86156, 11.2303, 64.8603, 5.40503),
    (5, 2.29861, 14.0787, 100.846, 5.0423),
    (6, 2.7404, 16.9191, 144.839, 4.82797),
    (7, 3.18472, 19.7556, 196.834, 4.68652),
    (8, 3.63056, 22.5898, 256.832, 4.58629),
    (9, 4.07739, 25.4227, 324.83, 4.51153),
    (10, 4.52491, 28.2546, 400.828, 4.45364),
];

/// Published optimal multihelices: component count `q`, length per twist,
/// shell arrangement (rod omitted), and closed-link `L/C^{3/4}` prefactor.
pub const TABLE3: [(u32, f64, &[u32], f64); 38] = [
    (2, 14.72454, &[1], 13.8768),
    (3, 30.73456, &[2], 13.4973),
    (4, 49.78447, &[3], 12.5865),
    (5, 75.83379, &[3, 1], 12.4741),
    (6, 101.8831, &[3, 2], 13.7952),
    (7, 127.9324, &[3, 3], 13.0972),
    (8, 157.7684, &[4, 3], 11.6443),
    (9, 185.0106, &[4, 4], 12.6218),
    (10, 214.4321, &[4, 5], 12.2666),
    (11, 253.6763, &[4, 5, 1], 12.22),
    (12, 292.9205, &[4, 5, 2], 12.1181),
    (13, 332.1647, &[4, 5, 3], 11.9766),
    (14, 371.4089, &[4, 5, 4], 12.8455),
    (15, 410.6531, &[4, 5, 5], 12.613),
    (16, 459.9192, &[5, 7, 3], 12.04),
    (17, 500.1824, &[4, 6, 6], 12.5978),
    (18, 542.8946, &[5, 7, 5], 11.7),
    (19, 584.3822, &[5, 7, 6], 11.5455),
    (20, 625.8699, &[5, 7, 7], 11.91),
    (21, 674.2664, &[5, 7, 8], 12.2183),
    (22, 727.5485, &[5, 7, 8, 1], 12.1617),
    (23, 780.8305, &[5, 7, 8, 2], 12.0935),
    (24, 834.1126, &[5, 7, 8, 3], 12.0181),
    (25, 887.3946, &[5, 7, 8, 4], 11.9359),
    (26, 940.6767, &[5, 7, 8, 5], 11.8492),
    (27, 993.9587, &[5, 7, 8, 6], 11.7592),
    (28, 1047.241, &[5, 7, 8, 7], 12.4236),
    (29, 1100.523, &[5, 7, 8, 8], 12.3093),
    (30, 1165.793, &[5, 7, 8, 8, 1], 12.2867),
    (31, 1226.158, &[5, 8, 9, 8], 12.412),
    (32, 1280.561, &[5, 8, 9, 9], 12.298),
    (33, 1346.749, &[5, 8, 9, 9, 1], 12.2626),
    (34, 1412.937, &[5, 8, 9, 9, 2], 12.2219),
    (35, 1479.125, &[5, 8, 9, 9, 3], 12.1769),
    (36, 1545.313, &[5, 8, 9, 9, 4], 12.1283),
    (37, 1611.501, &[5, 8, 9, 9, 5], 12.0767),
    (38, 1677.689, &[5, 8, 9, 9, 6], 12.0227),
    (39, 1743.877, &[5, 8, 9, 9, 7], 11.97),
];

/// Published rod-and-720 arrangement after the greedy rebalancing pass.
pub const JENGA_720: [u32; 21] = [
    5, 12, 17, 22, 26, 30, 33, 36, 38, 40, 41, 42, 43, 44, 44, 45, 46, 46, 47, 47, 16,
];

/// One named check with its outcome.
#[derive(Debug, Clone, serde::Serialize)]
pub struct CheckLine {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// One acceptance criterion's results.
#[derive(Debug, Clone, serde::Serialize)]
pub struct CriterionResult {
    pub index: usize,
    pub title: String,
    pub checks: Vec<CheckLine>,
    pub elapsed_secs: f64,
}

impl CriterionResult {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn check(
    out: &mut Vec<CheckLine>,
    name: impl Into<String>,
    passed: bool,
    detail: impl Into<String>,
) {
    out.push(CheckLine {
        name: name.into(),
        passed,
        detail: detail.into(),
    });
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// Shared expensive artifacts (the optimal-arrangement sweep).
#[derive(Default)]
pub struct AcceptanceContext {
    table3: OnceLock<std::result::Result<Vec<MultihelixConfig>, String>>,
}

impl AcceptanceContext {
    pub fn new() -> Self {
        Self::default()
    }

    /// Best configuration per component count 2..=39: full enumeration up to
    /// 20 strands, then shell-count windows chained from the previous best.
    pub fn table3_configs(&self) -> std::result::Result<&[MultihelixConfig], String> {
        self.table3
            .get_or_init(|| {
                let mut best: Vec<MultihelixConfig> = Vec::with_capacity(38);
                let mut prev_shells = 1usize;
                for n in 1..=38u32 {
                    let window = if n <= 19 {
                        None
                    } else {
                        Some((prev_shells.saturating_sub(1).max(1), prev_shells + 1))
                    };
                    let options = SearchOptions {
                        shell_count_window: window,
                        keep: 3,
                        ..SearchOptions::default()
                    };
                    let configs = exhaustive_search(n, &options)
                        .map_err(|e| format!("search failed at n={n}: {e}"))?;
                    let top = configs
                        .into_iter()
                        .next()
                        .ok_or_else(|| format!("no configuration at n={n}"))?;
                    prev_shells = top.arrangement.shell_count();
                    best.push(top);
                }
                Ok(best)
            })
            .as_deref()
            .map_err(|e| e.clone())
    }
}

/// Criterion 1: single-shell optima to 5e-4 relative, in under a second.
pub fn criterion_1() -> CriterionResult {
    let start = Instant::now();
    let mut checks = Vec::new();
    for &(n, r, h, l, lc) in &TABLE1 {
        match ideal_helix(n) {
            Ok(p) => {
                let worst = rel(p.radius, r)
                    .max(rel(p.height, h))
                    .max(rel(p.length_per_twist, l))
                    .max(rel(p.length_per_crossing.unwrap_or(f64::NAN), lc));
                check(
                    &mut checks,
                    format!("n={n}"),
                    worst <= 5e-4,
                    format!(
                        "R={:.5} H={:.4} L={:.4} L/C={:.5} (max rel err {:.1e})",
                        p.radius,
                        p.height,
                        p.length_per_twist,
                        p.length_per_crossing.unwrap_or(f64::NAN),
                        worst
                    ),
                );
            }
            Err(e) => check(&mut checks, format!("n={n}"), false, e.to_string()),
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    check(
        &mut checks,
        "runtime",
        elapsed < 1.0,
        format!("{elapsed:.3} s"),
    );
    CriterionResult {
        index: 1,
        title: "Single-shell optimum table".into(),
        checks,
        elapsed_secs: elapsed,
    }
}

/// Criterion 2: optimal arrangements and lengths for 2..=39 components.
pub fn criterion_2(ctx: &AcceptanceContext) -> CriterionResult {
    let start = Instant::now();
    let mut checks = Vec::new();
    match ctx.table3_configs() {
        Ok(configs) => {
            for (cfg, &(q, len_ref, shells_ref, _)) in configs.iter().zip(TABLE3.iter()) {
                let len_ok = rel(cfg.total_length, len_ref) <= 1e-3;
                let arr_match = cfg.arrangement.shells == shells_ref;
                // An equal-length tie with the listed arrangement also counts.
                let tie = !arr_match
                    && Arrangement::new(shells_ref.to_vec())
                        .ok()
                        .and_then(|a| optimize_geometry(&a).ok())
                        .map(|alt| (alt.total_length - cfg.total_length).abs() < 1e-6)
                        .unwrap_or(false);
                check(
                    &mut checks,
                    format!("q={q}"),
                    len_ok && (arr_match || tie),
                    format!(
                        "L={:.4} (ref {len_ref}, rel {:.1e}) arrangement {}{}",
                        cfg.total_length,
                        rel(cfg.total_length, len_ref),
                        cfg.arrangement,
                        if arr_match {
                            ""
                        } else if tie {
                            " [tie with listed]"
                        } else {
                            " [differs]"
                        }
                    ),
                );
            }
        }
        Err(e) => check(&mut checks, "search", false, e),
    }
    let elapsed = start.elapsed().as_secs_f64();
    check(
        &mut checks,
        "runtime",
        elapsed < 1800.0,
        format!("{elapsed:.1} s"),
    );
    CriterionResult {
        index: 2,
        title: "Optimal arrangement table, 2..=39 components".into(),
        checks,
        elapsed_secs: elapsed,
    }
}

/// Criterion 3: two fixed-arrangement spot optima.
pub fn criterion_3() -> CriterionResult {
    let start = Instant::now();
    let mut checks = Vec::new();
    match optimize_geometry(&Arrangement::new(vec![5, 6]).unwrap()) {
        Ok(cfg) => {
            check(
                &mut checks,
                "1-5-6 length",
                (cfg.total_length - 297.45).abs() <= 0.5,
                format!("L={:.4}", cfg.total_length),
            );
            check(
                &mut checks,
                "1-5-6 inner radius",
                (cfg.inner_radius - 2.25).abs() <= 0.05,
                format!("R={:.4}", cfg.inner_radius),
            );
        }
        Err(e) => check(&mut checks, "1-5-6", false, e.to_string()),
    }
    match optimize_geometry(&Arrangement::new(vec![4, 5, 2]).unwrap()) {
        Ok(cfg) => {
            check(
                &mut checks,
                "1-4-5-2 length",
                (cfg.total_length - 292.92).abs() <= 0.5,
                format!("L={:.4}", cfg.total_length),
            );
            check(
                &mut checks,
                "1-4-5-2 radii",
                (cfg.inner_radius - 2.0).abs() <= 0.05,
                format!("radii start at {:.4}", cfg.inner_radius),
            );
        }
        Err(e) => check(&mut checks, "1-4-5-2", false, e.to_string()),
    }
    CriterionResult {
        index: 3,
        title: "Two-shell and three-shell spot optima".into(),
        checks,
        elapsed_secs: start.elapsed().as_secs_f64(),
    }
}

/// Criterion 4: the 4x4 grid bundle against the best concentric packing.
pub fn criterion_4(ctx: &AcceptanceContext) -> CriterionResult {
    let start = Instant::now();
    let mut checks = Vec::new();
    let grid = square_grid_16();
    check(
        &mut checks,
        "spacing",
        (grid.spacing - 2.85).abs() <= 0.05,
        format!("s={:.4}", grid.spacing),
    );
    check(
        &mut checks,
        "height",
        (grid.height - 26.75).abs() <= 0.3,
        format!(
            "H={:.4} (published height is inconsistent with its own spacing and length; \
             L at (2.85, 26.75) would be 615.9)",
            grid.height
        ),
    );
    check(
        &mut checks,
        "length",
        rel(grid.length, 619.4) <= 0.01,
        format!("L={:.2}", grid.length),
    );
    let best16 = ctx
        .table3_configs()
        .ok()
        .and_then(|c| c.iter().find(|cfg| cfg.q() == 16).map(|c| c.total_length))
        .unwrap_or(459.9192);
    let excess = grid.length / best16 - 1.0;
    check(
        &mut checks,
        "excess over concentric",
        (0.33..=0.37).contains(&excess),
        format!("{:.1}% over {:.4}", excess * 100.0, best16),
    );
    CriterionResult {
        index: 4,
        title: "Square-grid bundle comparison".into(),
        checks,
        elapsed_secs: start.elapsed().as_secs_f64(),
    }
}

/// Criterion 5: rod-centred refinement values and where the gain peaks.
pub fn criterion_5() -> CriterionResult {
    let start = Instant::now();
    let mut checks = Vec::new();
    match caduceus(6, true) {
        Ok(c) => {
            check(
                &mut checks,
                "n=6 refined radius",
                rel(c.outer_radius, 2.37) <= 0.01,
                format!("R={:.4}", c.outer_radius),
            );
            check(
                &mut checks,
                "n=6 refined height",
                rel(c.height, 13.62) <= 0.01,
                format!("H={:.4}", c.height),
            );
            check(
                &mut checks,
                "n=6 refined length",
                rel(c.length_per_twist, 114.57) <= 0.01,
                format!("L={:.4}", c.length_per_twist),
            );
        }
        Err(e) => check(&mut checks, "n=6 refined", false, e.to_string()),
    }
    let mut best_n = 0;
    let mut best_gain = f64::NEG_INFINITY;
    let mut detail = String::new();
    for n in 2..=10u32 {
        let gain = match (caduceus(n, true), ideal_helix(n)) {
            (Ok(c), Ok(p)) => (p.length_per_twist - c.length_per_twist) / p.length_per_twist,
            _ => f64::NAN,
        };
        detail.push_str(&format!("n={n}:{:.2}% ", gain * 100.0));
        if gain > best_gain {
            best_gain = gain;
            best_n = n;
        }
    }
    check(
        &mut checks,
        "improvement peaks at n=5",
        best_n == 5,
        detail.trim().to_string(),
    );
    CriterionResult {
        index: 5,
        title: "Rod-centred construction".into(),
        checks,
        elapsed_secs: start.elapsed().as_secs_f64(),
    }
}

/// Criterion 6: asymptotic prefactors at a million strands.
pub fn criterion_6() -> CriterionResult {
    let start = Instant::now();
    let mut checks = Vec::new();
    let q_target = 1_000_000u64;

    let t0 = Instant::now();
    match crate::constructions::incremental_report_at(5, q_target) {
        Ok(rep) => {
            let pf = rep.length / (rep.q as f64).powf(1.5);
            check(
                &mut checks,
                "incremental k=5",
                rel(pf, 10.89) <= 0.02 && t0.elapsed().as_secs_f64() < 60.0,
                format!("L·Q^-3/2={pf:.4} at q={} in {:.2} s", rep.q, t0.elapsed().as_secs_f64()),
            );
        }
        Err(e) => check(&mut checks, "incremental k=5", false, e.to_string()),
    }

    let t0 = Instant::now();
    let t_opt = equal_bound_optimal_t(q_target).round() as u32;
    let ns = ((q_target - 1) as f64 / t_opt as f64).round() as u32;
    match construct_equal(ns, t_opt, InnerRadiusMode::Ideal) {
        Ok(cfg) => {
            let q = cfg.q() as f64;
            let pf = cfg.total_length / q.powf(1.5);
            check(
                &mut checks,
                "equal per shell at optimal count",
                pf <= 10.03 && t0.elapsed().as_secs_f64() < 60.0,
                format!(
                    "L·Q^-3/2={pf:.4} (bound 10.03) at q={} t={t_opt} in {:.2} s",
                    cfg.q(),
                    t0.elapsed().as_secs_f64()
                ),
            );
        }
        Err(e) => check(&mut checks, "equal per shell", false, e.to_string()),
    }

    let t0 = Instant::now();
    match gamma_length(q_target) {
        Ok(l) => {
            let pf = l / (q_target as f64).powf(1.5);
            check(
                &mut checks,
                "analytic equal family",
                rel(pf, 9.34) <= 0.01 && t0.elapsed().as_secs_f64() < 60.0,
                format!("L·Q^-3/2={pf:.4} in {:.2} s", t0.elapsed().as_secs_f64()),
            );
        }
        Err(e) => check(&mut checks, "analytic equal family", false, e.to_string()),
    }

    let t0 = Instant::now();
    let infill_pf = construct_equal(ns, t_opt, InnerRadiusMode::Ideal)
        .and_then(|base| infill(&base))
        .map(|out| {
            let q = out.config.q() as f64;
            out.config.total_length / q.powf(1.5)
        });
    match infill_pf {
        Ok(pf) => check(
            &mut checks,
            "infilled family",
            rel(pf, 7.83) <= 0.01 && t0.elapsed().as_secs_f64() < 60.0,
            format!("L·Q^-3/2={pf:.4} in {:.2} s", t0.elapsed().as_secs_f64()),
        ),
        Err(e) => check(&mut checks, "infilled family", false, e.to_string()),
    }

    let d = delta_exact_prefactor();
    check(
        &mut checks,
        "exact infilled prefactor",
        (d - 7.82869).abs() <= 1e-4,
        format!("{d:.6}"),
    );
    CriterionResult {
        index: 6,
        title: "Asymptotic prefactors".into(),
        checks,
        elapsed_secs: start.elapsed().as_secs_f64(),
    }
}

/// Criterion 7: the rod-and-720 pipeline (sweep, infill, rebalance).
pub fn criterion_7() -> CriterionResult {
    let start = Instant::now();
    let mut checks = Vec::new();
    match equal_sweep(720, InnerRadiusMode::Ideal) {
        Ok(rows) => {
            let best = rows
                .iter()
                .min_by(|a, b| a.length.total_cmp(&b.length))
                .unwrap();
            check(
                &mut checks,
                "sweep minimum at 20 shells",
                best.shell_count == 20,
                format!("t={} L={:.0}", best.shell_count, best.length),
            );
        }
        Err(e) => check(&mut checks, "sweep", false, e.to_string()),
    }
    let pipeline = construct_equal(36, 20, InnerRadiusMode::Ideal).and_then(|base| {
        let filled = infill(&base)?;
        let balanced = reverse_jenga(&filled.config)?;
        Ok((base, filled, balanced))
    });
    match pipeline {
        Ok((base, filled, balanced)) => {
            check(
                &mut checks,
                "base length",
                rel(base.total_length, 175_000.0) <= 0.02,
                format!("L={:.0}", base.total_length),
            );
            check(
                &mut checks,
                "interior shells",
                filled.interior_shells == 7 && filled.helices_moved == 112,
                format!(
                    "{} shells, {} moved ({} full + {} partial removed)",
                    filled.interior_shells,
                    filled.helices_moved,
                    filled.outer_shells_removed,
                    filled.partial_removed
                ),
            );
            check(
                &mut checks,
                "infilled length",
                rel(filled.config.total_length, 152_000.0) <= 0.02,
                format!("L={:.0}", filled.config.total_length),
            );
            let total_entries = balanced.config.arrangement.shell_count() + 1;
            check(
                &mut checks,
                "rebalanced entry count",
                total_entries == 22,
                format!("{total_entries} entries including the rod"),
            );
            let matches = balanced.config.arrangement.shells == JENGA_720;
            check(
                &mut checks,
                "rebalanced arrangement",
                matches,
                format!(
                    "got {:?}{}",
                    balanced.config.arrangement.shells,
                    if matches {
                        String::new()
                    } else {
                        format!(
                            " vs published {:?}; capacities at marginal shells differ by ±1 \
                             under any uniform discretization (see project notes)",
                            JENGA_720
                        )
                    }
                ),
            );
            let reduction = 1.0 - balanced.config.total_length / filled.config.total_length;
            check(
                &mut checks,
                "rebalance reduction",
                (0.07..=0.11).contains(&reduction),
                format!("{:.2}% further", reduction * 100.0),
            );
            check(
                &mut checks,
                "strand conservation",
                balanced.config.arrangement.n_helices() == 720,
                format!("{}", balanced.config.arrangement.n_helices()),
            );
        }
        Err(e) => check(&mut checks, "pipeline", false, e.to_string()),
    }
    CriterionResult {
        index: 7,
        title: "Rod-and-720 pipeline".into(),
        checks,
        elapsed_secs: start.elapsed().as_secs_f64(),
    }
}

/// Criterion 8: torus closure ratios and the length-crossing exponent.
pub fn criterion_8(ctx: &AcceptanceContext) -> CriterionResult {
    let start = Instant::now();
    let mut checks = Vec::new();
    match optimize_geometry(&Arrangement::new(vec![5, 7, 6]).unwrap())
        .and_then(|cfg| close_link(&cfg, 3, ClosureMode::MinimalGrowth))
    {
        Ok(link) => {
            check(
                &mut checks,
                "T(57,19) crossings",
                link.report.crossing_number == 1026,
                format!("{}", link.report.crossing_number),
            );
            check(
                &mut checks,
                "T(57,19) ratio",
                rel(link.report.ratio, 11.54) <= 0.01,
                format!("{:.4} (L={:.1})", link.report.ratio, link.report.total_length),
            );
        }
        Err(e) => check(&mut checks, "T(57,19)", false, e.to_string()),
    }
    let bound3 = incremental_ratio_bound(3);
    check(
        &mut checks,
        "closure bound at p=3",
        (bound3 - 19.11).abs() <= 0.05,
        format!("{bound3:.4}"),
    );
    let argmin = (2..=10u32)
        .min_by(|&a, &b| incremental_ratio_bound(a).total_cmp(&incremental_ratio_bound(b)))
        .unwrap();
    check(
        &mut checks,
        "bound minimized at p=3",
        argmin == 3,
        format!("argmin p={argmin}"),
    );
    match ctx.table3_configs() {
        Ok(configs) => match ratio_sweep(configs, 3) {
            Ok(sweep) => check(
                &mut checks,
                "length-crossing exponent",
                (sweep.exponent - 0.73).abs() <= 0.02,
                format!("{:.4}", sweep.exponent),
            ),
            Err(e) => check(&mut checks, "length-crossing exponent", false, e.to_string()),
        },
        Err(e) => check(&mut checks, "length-crossing exponent", false, e),
    }
    CriterionResult {
        index: 8,
        title: "Torus closure".into(),
        checks,
        elapsed_secs: start.elapsed().as_secs_f64(),
    }
}

/// Criterion 9: hull-based lower bounds.
pub fn criterion_9(ctx: &AcceptanceContext) -> CriterionResult {
    let start = Instant::now();
    let mut checks = Vec::new();
    let table = HullTable::builtin();
    let big = bounds::lower_bound_link(1_000_000, LowerBoundKind::CircularAsymptotic, &table, 3)
        .expect("valid q");
    check(
        &mut checks,
        "circular asymptote",
        (big.ratio - (8.0 * std::f64::consts::PI).sqrt()).abs() <= 1e-3,
        format!("{:.4}", big.ratio),
    );
    let q2 = bounds::lower_bound_link(2, LowerBoundKind::CircularAsymptotic, &table, 3)
        .expect("valid q");
    check(
        &mut checks,
        "circular at q=2",
        (q2.ratio - 5.55).abs() <= 0.01,
        format!("{:.4}", q2.ratio),
    );
    let lowers = bounds::hull_ratio_range(2..=39, &table, 3).expect("table covers the range");
    let (lo, hi) = lowers
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), l| {
            (lo.min(l.ratio), hi.max(l.ratio))
        });
    check(
        &mut checks,
        "tabulated ratios in [7, 9.5]",
        lowers.iter().all(|l| (7.0..=9.5).contains(&l.ratio)),
        format!(
            "range [{lo:.2}, {hi:.2}] over q=2..39; hull bounds fall below 7 beyond q≈11 \
             under the same convention that reproduces the published Solomon-link 33.1 \
             (see project notes)"
        ),
    );
    let uppers: Vec<(u32, f64)> = match ctx.table3_configs() {
        Ok(configs) => configs
            .iter()
            .filter_map(|cfg| {
                close_link(cfg, 3, ClosureMode::MinimalGrowth)
                    .ok()
                    .map(|l| (cfg.q(), l.report.ratio))
            })
            .collect(),
        Err(_) => TABLE3.iter().map(|&(q, _, _, pf)| (q, pf)).collect(),
    };
    match bounds::min_gap(&uppers, &lowers) {
        Some((q, gap)) => {
            check(
                &mut checks,
                "minimal gap value",
                (gap - 1.41).abs() <= 0.05,
                format!("{gap:.4}"),
            );
            check(
                &mut checks,
                "minimal gap at q=31",
                q == 31,
                format!(
                    "minimum sits at q={q}; the published location is not consistent with \
                     the hull formula that reproduces the Solomon-link value (see project notes)"
                ),
            );
        }
        None => check(&mut checks, "minimal gap", false, "no overlap in ranges".into()),
    }
    CriterionResult {
        index: 9,
        title: "Lower bounds".into(),
        checks,
        elapsed_secs: start.elapsed().as_secs_f64(),
    }
}

/// Criterion 10: property suites.
pub fn criterion_10(ctx: &AcceptanceContext) -> CriterionResult {
    let start = Instant::now();
    let mut checks = Vec::new();

    // (a) shipped configurations: tight clearance at the default
    // discretization, stable under refinement.
    let mut shipped: Vec<MultihelixConfig> = Vec::new();
    if let Ok(configs) = ctx.table3_configs() {
        for q in [2u32, 10, 16, 19, 31, 39] {
            if let Some(cfg) = configs.iter().find(|c| c.q() == q) {
                shipped.push(cfg.clone());
            }
        }
    }
    if let Ok(cfg) = optimize_geometry(&Arrangement::new(vec![5, 6]).unwrap()) {
        shipped.push(cfg);
    }
    if let Ok(cfg) = construct_incremental(5, 4) {
        shipped.push(cfg);
    }
    if let Ok(cfg) = construct_equal(36, 20, InnerRadiusMode::Ideal) {
        shipped.push(cfg);
    }
    let mut worst_clearance = f64::INFINITY;
    let mut worst_shift = 0.0f64;
    for cfg in &shipped {
        for (&m, &r) in cfg.arrangement.shells.iter().zip(&cfg.shell_radii) {
            if m < 2 {
                continue;
            }
            let dphase = std::f64::consts::TAU / m as f64;
            let d500 = geometry::helix_pair_min_distance(
                r,
                cfg.height,
                dphase,
                Discretization::with_verts(500),
            );
            let d2000 = geometry::helix_pair_min_distance(
                r,
                cfg.height,
                dphase,
                Discretization::with_verts(2000),
            );
            worst_clearance = worst_clearance.min(d500);
            worst_shift = worst_shift.max((d500 - d2000).abs() / d500);
        }
    }
    check(
        &mut checks,
        "(a) shipped clearance",
        worst_clearance >= 2.0 * (1.0 - 1e-3),
        format!("min adjacent-pair distance {worst_clearance:.5}"),
    );
    check(
        &mut checks,
        "(a) refinement stability",
        worst_shift < 5e-3,
        format!("max 500→2000 vertex shift {:.2e}", worst_shift),
    );

    // (b) height/radius inverse consistency.
    let mut worst_inverse = 0.0f64;
    for m in 3..=8u32 {
        let ideal = ideal_helix(m).expect("m >= 2");
        for dr in [0.05, 0.3, 0.8] {
            let r = ideal.radius + dr;
            if let (Ok(h), true) = (geometry::min_height(m, r), true) {
                if let Ok(r_back) = geometry::min_radius(m, h) {
                    worst_inverse = worst_inverse.max((r_back - r).abs());
                }
            }
        }
    }
    check(
        &mut checks,
        "(b) inverse consistency",
        worst_inverse <= 1e-3,
        format!("max |radius round trip| {worst_inverse:.2e}"),
    );

    // (c) the summand inequality behind the equal-family bound.
    let mut inequality_holds = true;
    let pi = std::f64::consts::PI;
    let mut i = 2u64;
    while i <= 10_000 && inequality_holds {
        let fi = i as f64;
        let mut ns = 2u64;
        while ns <= 1_000 {
            let fns = ns as f64;
            let lhs = 4.0 * pi * (fi - 1.0) + 4.0 * fns;
            let rhs = (16.0 * fns * fns + 16.0 * pi * pi * (fi - 1.0) * fi).sqrt();
            if lhs < rhs {
                inequality_holds = false;
                break;
            }
            ns += 1;
        }
        i += 1;
    }
    check(
        &mut checks,
        "(c) summand inequality",
        inequality_holds,
        "4π(i-1)+4Ns ≥ exact summand over i∈2..10^4, Ns∈2..10^3".into(),
    );

    // (d) greedy rebalancing under randomized feasible starts.
    let jenga_ok = randomized_jenga_suite(20);
    check(
        &mut checks,
        "(d) rebalance monotonicity",
        jenga_ok.0,
        jenga_ok.1,
    );

    // (e) collapse of scaled minimum-height data onto the shared fit.
    let fit = FitModel::default();
    let xs = [0.1, 0.132, 0.2, 0.3, 0.5, 0.8, 1.0];
    let mut detail = String::new();
    let mut collapse_ok = true;
    for m in [3u32, 5, 8, 12, 20] {
        let mut worst = 0.0f64;
        for &x in &xs {
            let r = m as f64 * x + geometry::planar_min_radius(m);
            let exact = match geometry::min_height(m, r) {
                Ok(h) => h,
                Err(_) => continue,
            };
            let fitted = match fit.fit_height(m, r) {
                Ok(h) => h,
                Err(_) => continue,
            };
            worst = worst.max((exact - fitted).abs() / exact);
        }
        detail.push_str(&format!("m={m}:{:.1}% ", worst * 100.0));
        if worst > 0.03 {
            collapse_ok = false;
        }
    }
    detail.push_str(
        "(max relative height deviation from the fit; three-strand shells sit well off \
         the shared curve — their ideal point alone misses it by ~11%, see project notes)",
    );
    check(&mut checks, "(e) fit collapse within 3%", collapse_ok, detail);

    CriterionResult {
        index: 10,
        title: "Property suites".into(),
        checks,
        elapsed_secs: start.elapsed().as_secs_f64(),
    }
}

/// Deterministic pseudo-random feasible configs for the rebalance suite.
fn randomized_jenga_suite(cases: u32) -> (bool, String) {
    // Small linear congruential stream; fixed seed for reproducibility.
    let mut state = 0x2545F4914F6CDD1Du64;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    let mut tested = 0;
    for _ in 0..cases {
        let shell_count = 2 + (next() % 4) as usize;
        let mut radii = Vec::with_capacity(shell_count);
        let mut r = 2.0 + (next() % 200) as f64 / 100.0;
        for _ in 0..shell_count {
            radii.push(r);
            r += 2.0 + (next() % 150) as f64 / 100.0;
        }
        let mut shells = Vec::with_capacity(shell_count);
        for &ri in &radii {
            let cap_planar = (std::f64::consts::PI / (1.0f64 / ri).asin()).floor() as u64;
            let m = 1 + next() % cap_planar.min(20).max(1);
            shells.push(m as u32);
        }
        let mut height = 2.0 * shells.iter().copied().max().unwrap() as f64;
        for (&m, &ri) in shells.iter().zip(&radii) {
            if m >= 2 {
                if let Ok(h) = geometry::min_height(m, ri) {
                    height = height.max(h);
                } else {
                    height = f64::NAN;
                    break;
                }
            }
        }
        if !height.is_finite() {
            continue;
        }
        height *= 1.0 + (next() % 30) as f64 / 100.0;
        let config =
            match MultihelixConfig::from_parts(shells.clone(), radii.clone(), height, None) {
                Ok(c) => c,
                Err(_) => continue,
            };
        if !config.is_feasible(Discretization::default()) {
            continue;
        }
        tested += 1;
        let out = match reverse_jenga(&config) {
            Ok(o) => o,
            Err(e) => return (false, format!("rebalance failed: {e}")),
        };
        if out.config.total_length > config.total_length + 1e-9 {
            return (false, format!("length grew on {shells:?}"));
        }
        if out.config.arrangement.n_helices() != config.arrangement.n_helices() {
            return (false, format!("strand count changed on {shells:?}"));
        }
        if !out.config.is_feasible(Discretization::default()) {
            return (false, format!("result infeasible on {shells:?}"));
        }
    }
    (
        tested >= 10,
        format!("{tested} randomized feasible configs checked"),
    )
}

/// Runs the full matrix in order.
pub fn run_all() -> Vec<CriterionResult> {
    let ctx = AcceptanceContext::new();
    vec![
        criterion_1(),
        criterion_2(&ctx),
        criterion_3(),
        criterion_4(&ctx),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(&ctx),
        criterion_9(&ctx),
        criterion_10(&ctx),
    ]
}

/// Formats results as a fixed-width pass/fail matrix.
pub fn format_matrix(results: &[CriterionResult]) -> String {
    let mut out = String::new();
    for r in results {
        let status = if r.passed() { "PASS" } else { "FAIL" };
        out.push_str(&format!(
            "[{status}] criterion {:>2}: {} ({:.1} s)\n",
            r.index, r.title, r.elapsed_secs
        ));
        for c in &r.checks {
            let mark = if c.passed { "ok  " } else { "FAIL" };
            out.push_str(&format!("    {mark} {:<32} {}\n", c.name, c.detail));
        }
    }
    out
}
