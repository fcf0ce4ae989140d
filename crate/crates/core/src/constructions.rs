//! Scalable multihelix families and their asymptotic length prefactors.
//!
//! Four constructions cover the large-strand-count regime: shells growing by
//! a fixed increment (each at its ideal radius), equal strands per shell,
//! the equal family with its empty core filled in, and a greedy
//! outermost-to-innermost rebalancing pass on top of that.

use std::f64::consts::{PI, TAU};

use crate::arrangement::{length_with_radii, MultihelixConfig};
use crate::error::{Error, Result};
use crate::geometry::{self, Discretization};
use crate::helix::{ideal_height, ideal_radius};
use crate::numeric::{golden_min, CompensatedSum};

/// Which scalable family a report row came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstructionKind {
    Incremental,
    EqualPerShell,
    Infilled,
    ReverseJenga,
}

/// How the innermost shell radius of the equal-per-shell family is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InnerRadiusMode {
    /// Ideal single-shell value for the per-shell strand count.
    Ideal,
    /// One-dimensional minimization of total length over the inner radius.
    Optimized,
}

/// One row of construction-scaling data.
#[derive(Debug, Clone, serde::Serialize)]
pub struct AsymptoticReport {
    pub kind: ConstructionKind,
    pub q: u64,
    pub shell_count: usize,
    pub length: f64,
    pub length_per_crossing: f64,
    /// `length_per_crossing * sqrt(q)`; tends to the family prefactor.
    pub measured_prefactor: f64,
}

impl AsymptoticReport {
    pub fn from_length(kind: ConstructionKind, q: u64, shell_count: usize, length: f64) -> Self {
        let qf = q as f64;
        let per_crossing = length / (qf * (qf - 1.0));
        Self {
            kind,
            q,
            shell_count,
            length,
            length_per_crossing: per_crossing,
            measured_prefactor: per_crossing * qf.sqrt(),
        }
    }
}

/// Shells of `k, 2k, …, tk` helices, each at its ideal radius, height set by
/// the outermost shell. Needs `k >= 5` so adjacent shells clear by 2.
pub fn construct_incremental(k: u32, t_shells: u32) -> Result<MultihelixConfig> {
    if k < 5 {
        return Err(Error::InvalidParameter(format!(
            "per-shell increment must be at least 5, got {k}"
        )));
    }
    if t_shells == 0 {
        return Err(Error::InvalidParameter("need at least one shell".into()));
    }
    let shells: Vec<u32> = (1..=t_shells).map(|i| k * i).collect();
    let radii: Vec<f64> = shells.iter().map(|&m| ideal_radius(m)).collect();
    let height = ideal_height(k * t_shells);
    MultihelixConfig::from_parts(shells, radii, height, Some(t_shells as usize - 1))
}

/// Incremental-family length from the wide-shell closed forms
/// (`R = √2·m/π`, `H = √8·kt`), summed exactly.
pub fn incremental_length_formula(k: u32, t: u32) -> f64 {
    let kf = k as f64;
    let tf = t as f64;
    let mut sum = CompensatedSum::default();
    for i in 1..t {
        let fi = i as f64;
        sum.add(fi * (tf * tf + fi * fi).sqrt());
    }
    8.0_f64.sqrt() * kf * tf + 4.0 * kf * kf * tf * tf + 8.0_f64.sqrt() * kf * kf * sum.value()
}

/// Large-system length-per-crossing prefactor of the incremental family:
/// `L/C ~ prefactor / sqrt(Q)`, smallest at the minimum increment `k = 5`.
pub fn incremental_asymptote(k: u32) -> f64 {
    6.88 * (k as f64 / 2.0).sqrt()
}

/// Builds the incremental construction nearest a target strand total and
/// reports its measured prefactor.
pub fn incremental_report_at(k: u32, q_target: u64) -> Result<AsymptoticReport> {
    let kf = k as f64;
    let t = (((1.0 + 8.0 * (q_target as f64 - 1.0) / kf).sqrt() - 1.0) / 2.0).round() as u32;
    let t = t.max(1);
    let cfg = construct_incremental(k, t)?;
    let q = 1 + (k as u64) * (t as u64) * (t as u64 + 1) / 2;
    Ok(AsymptoticReport::from_length(
        ConstructionKind::Incremental,
        q,
        t as usize,
        cfg.total_length,
    ))
}

/// Equal strands per shell: `t_shells` shells of `n_per_shell`, innermost at
/// its ideal (or length-optimized) radius and setting the height.
pub fn construct_equal(
    n_per_shell: u32,
    t_shells: u32,
    mode: InnerRadiusMode,
) -> Result<MultihelixConfig> {
    if n_per_shell == 0 || t_shells == 0 {
        return Err(Error::InvalidParameter(
            "need at least one strand per shell and one shell".into(),
        ));
    }
    let ns = n_per_shell;
    let (r_inner, height) = match mode {
        InnerRadiusMode::Ideal => (ideal_radius(ns).max(2.0), ideal_height(ns)),
        InnerRadiusMode::Optimized => {
            let lo = 2.0_f64.max(geometry::planar_min_radius(ns) + 1e-6);
            let hi = ideal_radius(ns).max(lo) + 3.0;
            let cost = |r: f64| -> f64 {
                let h = match height_for(ns, r) {
                    Some(h) => h,
                    None => return f64::INFINITY,
                };
                equal_length(ns, t_shells, r, h)
            };
            let (r, _) = golden_min(cost, lo, hi, 1e-5);
            let h = height_for(ns, r).ok_or_else(|| {
                Error::Infeasible(format!("no feasible inner radius for {ns} per shell"))
            })?;
            (r, h)
        }
    };
    let shells = vec![ns; t_shells as usize];
    let radii: Vec<f64> = (0..t_shells)
        .map(|i| r_inner + 2.0 * i as f64)
        .collect();
    MultihelixConfig::from_parts(shells, radii, height, Some(0))
}

fn height_for(m: u32, r: f64) -> Option<f64> {
    let floor = 2.0 * m as f64;
    if m == 1 {
        return Some(floor);
    }
    geometry::min_height(m, r).ok().map(|h| h.max(floor))
}

fn equal_length(ns: u32, t: u32, r_inner: f64, height: f64) -> f64 {
    let mut total = height;
    for i in 0..t {
        let r = r_inner + 2.0 * i as f64;
        total += ns as f64 * (height * height + (TAU * r) * (TAU * r)).sqrt();
    }
    total
}

/// Sweeps shell counts over the divisors of `n_helices` and reports each
/// equal-per-shell construction.
pub fn equal_sweep(n_helices: u32, mode: InnerRadiusMode) -> Result<Vec<AsymptoticReport>> {
    let mut rows = Vec::new();
    for t in 1..=n_helices {
        if n_helices % t != 0 {
            continue;
        }
        let ns = n_helices / t;
        let cfg = construct_equal(ns, t, mode)?;
        rows.push(AsymptoticReport::from_length(
            ConstructionKind::EqualPerShell,
            n_helices as u64 + 1,
            t as usize,
            cfg.total_length,
        ));
    }
    Ok(rows)
}

/// Upper bound on length per crossing for `t` equal shells of `q` strands
/// total: `2πt/q + 4/t`.
pub fn equal_shell_bound(q: u64, t: u64) -> f64 {
    TAU * t as f64 / q as f64 + 4.0 / t as f64
}

/// Shell count minimizing `equal_shell_bound`.
pub fn equal_bound_optimal_t(q: u64) -> f64 {
    (2.0 * q as f64 / PI).sqrt()
}

/// The minimized bound, `4·sqrt(2π/q)`.
pub fn equal_bound_min(q: u64) -> f64 {
    4.0 * (2.0 * PI / q as f64).sqrt()
}

/// Length of the analytic equal-per-shell construction at the bound-optimal
/// shell count, with the inner shell at its wide-limit ideal geometry.
///
/// Summation limits round to the nearest integer; the rounding noise decays
/// as the strand count grows.
pub fn gamma_length(q: u64) -> Result<f64> {
    if q < 10 {
        return Err(Error::InvalidParameter(format!(
            "analytic construction needs q >= 10, got {q}"
        )));
    }
    let qf = q as f64;
    let t = (2.0 * qf / PI).sqrt().round().max(1.0);
    let ns = (PI * qf / 2.0).sqrt();
    let rs = (qf / PI).sqrt();
    let h2 = 4.0 * PI * qf; // height² of the inner shell, (2√(πq))²
    let mut sum = CompensatedSum::default();
    let mut i = 1.0;
    while i <= t + 0.5 {
        let r = rs + 2.0 * (i - 1.0);
        sum.add((h2 + (TAU * r) * (TAU * r)).sqrt());
        i += 1.0;
    }
    Ok(2.0 * (PI * qf).sqrt() + ns * sum.value())
}

/// Outcome of filling the empty core of an equal-per-shell construction.
#[derive(Debug, Clone)]
pub struct InfillOutcome {
    pub config: MultihelixConfig,
    /// False when there was no room inside and the input is returned as-is.
    pub changed: bool,
    pub interior_shells: usize,
    pub helices_moved: u32,
    pub outer_shells_removed: usize,
    pub partial_removed: u32,
}

/// Adds interior shells of `4i` helices at radii `2i` (underconstrained at
/// the shared height) and removes the same number of helices from the
/// outside, whole shells first.
pub fn infill(base: &MultihelixConfig) -> Result<InfillOutcome> {
    let rs = base.inner_radius;
    if rs < 4.0 {
        return Ok(InfillOutcome {
            config: base.clone(),
            changed: false,
            interior_shells: 0,
            helices_moved: 0,
            outer_shells_removed: 0,
            partial_removed: 0,
        });
    }
    let height = base.height;
    let m_int = ((rs - 2.0) / 2.0).floor() as u32;
    let mut interior: Vec<(u32, f64)> = Vec::with_capacity(m_int as usize);
    for i in 1..=m_int {
        let count = 4 * i;
        let radius = 2.0 * i as f64;
        if !geometry::shell_feasible(count, radius, height, 2.0) {
            return Err(Error::Infeasible(format!(
                "interior shell of {count} at radius {radius} does not clear at height {height}"
            )));
        }
        interior.push((count, radius));
    }
    let moved: u32 = interior.iter().map(|&(m, _)| m).sum();
    if moved == 0 {
        return Ok(InfillOutcome {
            config: base.clone(),
            changed: false,
            interior_shells: 0,
            helices_moved: 0,
            outer_shells_removed: 0,
            partial_removed: 0,
        });
    }
    let mut outer: Vec<(u32, f64)> = base
        .arrangement
        .shells
        .iter()
        .copied()
        .zip(base.shell_radii.iter().copied())
        .collect();
    let available: u32 = outer.iter().map(|&(m, _)| m).sum();
    if moved >= available {
        return Err(Error::Infeasible(
            "interior capacity exceeds the strand budget".into(),
        ));
    }
    let mut remaining = moved;
    let mut removed_shells = 0;
    while let Some(&(m, _)) = outer.last() {
        if remaining >= m {
            remaining -= m;
            outer.pop();
            removed_shells += 1;
        } else {
            break;
        }
    }
    if remaining > 0 {
        let last = outer.last_mut().expect("budget checked above");
        last.0 -= remaining;
    }
    let mut shells: Vec<u32> = interior.iter().map(|&(m, _)| m).collect();
    let mut radii: Vec<f64> = interior.iter().map(|&(_, r)| r).collect();
    shells.extend(outer.iter().map(|&(m, _)| m));
    radii.extend(outer.iter().map(|&(_, r)| r));
    let setter = radii
        .iter()
        .position(|r| (r - base.inner_radius).abs() < 1e-12);
    let config = MultihelixConfig::from_parts(shells, radii, height, setter)?;
    Ok(InfillOutcome {
        config,
        changed: true,
        interior_shells: interior.len(),
        helices_moved: moved,
        outer_shells_removed: removed_shells,
        partial_removed: remaining,
    })
}

/// Exact transcendental prefactor of the infilled family, `L/Q^{3/2}` in the
/// large-`Q` limit. Splits as the analytic equal-per-shell coefficient minus
/// the removed-shell integral plus the added-core integral.
pub fn delta_exact_prefactor() -> f64 {
    gamma_exact_prefactor() - infill_removed_prefactor() + infill_added_prefactor()
}

fn antiderivative(v: f64) -> f64 {
    0.5 * (v * (1.0 + v * v).sqrt() + v.asinh())
}

/// `L_γ / Q^{3/2}` in closed form (≈ 9.34).
pub fn gamma_exact_prefactor() -> f64 {
    let a = 1.0 + 2.0 * std::f64::consts::SQRT_2;
    (PI / 2.0).sqrt() * (antiderivative(a) - antiderivative(1.0))
}

/// Coefficient of the length removed from the outermost shells (≈ 2.11).
pub fn infill_removed_prefactor() -> f64 {
    let a = 1.0 + 2.0 * std::f64::consts::SQRT_2;
    let b = a - std::f64::consts::SQRT_2 / PI;
    (PI / 2.0).sqrt() * (antiderivative(a) - antiderivative(b))
}

/// Coefficient of the length added by the interior shells (≈ 0.60).
pub fn infill_added_prefactor() -> f64 {
    (5.0 * 5.0_f64.sqrt() - 8.0) / (3.0 * PI.sqrt())
}

/// Result of the greedy outermost-to-innermost rebalancing.
#[derive(Debug, Clone)]
pub struct JengaOutcome {
    pub config: MultihelixConfig,
    pub moves: u32,
}

/// Moves helices one at a time from the outermost shell to the innermost
/// shell that accepts them at the fixed system height, until no inner shell
/// can take another strand. Shell radii stay fixed; emptied outer shells are
/// dropped. Never lengthens the configuration.
pub fn reverse_jenga(initial: &MultihelixConfig) -> Result<JengaOutcome> {
    reverse_jenga_with(initial, Discretization::default())
}

pub fn reverse_jenga_with(
    initial: &MultihelixConfig,
    disc: Discretization,
) -> Result<JengaOutcome> {
    let height = initial.height;
    let mut shells: Vec<(u32, f64)> = initial
        .arrangement
        .shells
        .iter()
        .copied()
        .zip(initial.shell_radii.iter().copied())
        .collect();
    let mut moves = 0u32;
    'outer: loop {
        while matches!(shells.last(), Some(&(0, _))) {
            shells.pop();
        }
        if shells.len() < 2 {
            break;
        }
        let last = shells.len() - 1;
        for j in 0..last {
            let (m, r) = shells[j];
            let accepts = height >= 2.0 * (m as f64 + 1.0)
                && geometry::shell_feasible_with(m + 1, r, height, 2.0, disc);
            if accepts {
                shells[j].0 += 1;
                shells[last].0 -= 1;
                moves += 1;
                continue 'outer;
            }
        }
        break;
    }
    while matches!(shells.last(), Some(&(0, _))) {
        shells.pop();
    }
    let counts: Vec<u32> = shells.iter().map(|&(m, _)| m).collect();
    let radii: Vec<f64> = shells.iter().map(|&(_, r)| r).collect();
    let setter = initial.height_setting_shell.and_then(|i| {
        let r = initial.shell_radii.get(i)?;
        radii.iter().position(|x| (x - r).abs() < 1e-12)
    });
    let config = MultihelixConfig::from_parts(counts, radii, height, setter)?;
    Ok(JengaOutcome { config, moves })
}

/// Maximum strand count a shell of the given radius accepts at a height.
pub fn shell_capacity(radius: f64, height: f64, disc: Discretization) -> u32 {
    let mut m = 1;
    while height >= 2.0 * (m as f64 + 1.0)
        && geometry::shell_feasible_with(m + 1, radius, height, 2.0, disc)
    {
        m += 1;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn incremental_single_shell_collapses() {
        let cfg = construct_incremental(5, 1).unwrap();
        let ideal = crate::helix::ideal_helix(5).unwrap();
        assert!((cfg.height - ideal.height).abs() < 1e-12);
        assert!((cfg.total_length - (ideal.height + ideal.length_per_twist)).abs() < 1e-9);
        assert!(construct_incremental(4, 2).is_err());
    }

    #[test]
    fn incremental_five_by_four_geometry() {
        let cfg = construct_incremental(5, 4).unwrap();
        let want_radii = [2.29861, 4.52491, 6.7552, 8.9856];
        for (got, want) in cfg.shell_radii.iter().zip(want_radii) {
            assert!((got - want).abs() < 0.02, "{got} vs {want}");
        }
        assert!((cfg.height - 56.554).abs() < 0.05);
        // The exact sum and the wide-shell formula agree closely here.
        let formula = incremental_length_formula(5, 4);
        assert!((cfg.total_length - formula).abs() / formula < 1e-3);
    }

    #[test]
    fn incremental_matches_integral_oracle_at_forty_shells() {
        // Independent oracle: replace the shell sum by its integral,
        // ∫ i√(t²+i²) di = (t²+i²)^{3/2}/3, whose large-t coefficient is
        // √8(√8−1)/3 ≈ 1.7239 per k²t³.
        let c = 8.0_f64.sqrt() * (8.0_f64.sqrt() - 1.0) / 3.0;
        let cfg = construct_incremental(5, 40).unwrap();
        let ratio = cfg.total_length / (c * 25.0 * 40.0_f64.powi(3));
        assert!((0.97..=1.03).contains(&ratio), "ratio={ratio}");
    }

    #[test]
    fn incremental_asymptote_values() {
        assert!((incremental_asymptote(5) - 10.89).abs() < 0.05);
        let k8 = incremental_asymptote(8);
        assert!((k8 - 6.88 * 2.0).abs() < 1e-12);
    }

    #[test]
    fn incremental_measured_prefactor_near_asymptote() {
        let report = incremental_report_at(5, 2500).unwrap();
        assert!(
            (report.measured_prefactor - 10.89).abs() / 10.89 < 0.03,
            "prefactor={}",
            report.measured_prefactor
        );
    }

    #[test]
    fn equal_per_shell_sweep_of_720_minimizes_at_twenty_shells() {
        let rows = equal_sweep(720, InnerRadiusMode::Ideal).unwrap();
        let best = rows
            .iter()
            .min_by(|a, b| a.length.total_cmp(&b.length))
            .unwrap();
        assert_eq!(best.shell_count, 20);
    }

    #[test]
    fn optimized_inner_radius_gains_at_most_a_percent() {
        let ideal = construct_equal(36, 20, InnerRadiusMode::Ideal).unwrap();
        let optimized = construct_equal(36, 20, InnerRadiusMode::Optimized).unwrap();
        assert!(optimized.total_length <= ideal.total_length + 1e-6);
        assert!(ideal.total_length / optimized.total_length < 1.01);
    }

    #[test]
    fn equal_per_shell_respects_upper_bound() {
        for t in [4u32, 9, 16, 36] {
            let ns = 144 / t;
            let cfg = construct_equal(ns, t, InnerRadiusMode::Ideal).unwrap();
            let q = 145u64;
            let per_crossing = cfg.total_length / (145.0 * 144.0);
            assert!(
                per_crossing < equal_shell_bound(q, t as u64),
                "t={t}: {per_crossing}"
            );
        }
    }

    #[test]
    fn bound_optimum_matches_closed_form() {
        let q = 721u64;
        assert!((equal_bound_optimal_t(q) - 21.42).abs() < 0.01);
        assert!((equal_bound_min(q) * (q as f64).sqrt() - 10.03).abs() < 0.01);
        assert!((equal_shell_bound(1_000_000, 1) - 4.0).abs() < 0.01);
    }

    #[test]
    fn analytic_equal_family_prefactor() {
        let q = 1_000_000u64;
        let pf = gamma_length(q).unwrap() / (q as f64).powf(1.5);
        assert!((pf - 9.34).abs() < 0.02, "pf={pf}");
        let q4 = 10_000u64;
        let pf4 = gamma_length(q4).unwrap() / (q4 as f64).powf(1.5);
        assert!((pf4 - 9.34).abs() / 9.34 < 0.05, "pf4={pf4}");
    }

    #[test]
    fn exact_infilled_prefactor_and_parts() {
        let d = delta_exact_prefactor();
        assert!((d - 7.82869).abs() < 1e-4, "delta={d}");
        assert!((gamma_exact_prefactor() - 9.34).abs() < 0.01);
        assert!((infill_removed_prefactor() - 2.11).abs() < 0.01);
        assert!((infill_added_prefactor() - 0.60).abs() < 0.01);
        let recombined = 9.34 - 2.11 + 0.60;
        assert!((d - recombined).abs() < 2e-2);
    }

    #[test]
    fn infill_refuses_when_no_room() {
        let base = construct_equal(4, 3, InnerRadiusMode::Ideal).unwrap();
        assert!(base.inner_radius < 4.0);
        let out = infill(&base).unwrap();
        assert!(!out.changed);
        assert_eq!(out.config.total_length, base.total_length);
    }

    #[test]
    fn appendix_inequality_bounding_the_equal_sum() {
        // 4π(i−1) + 4Ns ≥ √(16Ns² + 16π²(i−1)i) for i > 1, Ns > π/2.
        let mut i = 2.0f64;
        while i <= 1e4 {
            let mut ns = 2.0f64;
            while ns <= 1e3 {
                let lhs = 4.0 * PI * (i - 1.0) + 4.0 * ns;
                let rhs = (16.0 * ns * ns + 16.0 * PI * PI * (i - 1.0) * i).sqrt();
                assert!(lhs >= rhs, "i={i} ns={ns}");
                ns *= 1.37;
            }
            i *= 1.31;
        }
    }

    #[test]
    fn jenga_fixed_point_returns_input() {
        // A two-shell config already at capacity cannot improve.
        let cfg = MultihelixConfig::from_parts(vec![5, 12], vec![2.0, 4.0], 101.8153, Some(0))
            .unwrap();
        assert_eq!(shell_capacity(2.0, 101.8153, Discretization::default()), 5);
        let out = reverse_jenga(&cfg).unwrap();
        assert_eq!(out.moves, 0);
        assert_eq!(out.config.arrangement.shells, vec![5, 12]);
    }

    #[test]
    fn jenga_never_lengthens_and_conserves_strands() {
        let base = construct_equal(12, 4, InnerRadiusMode::Ideal).unwrap();
        let filled = infill(&base).unwrap();
        let out = reverse_jenga(&filled.config).unwrap();
        assert!(out.config.total_length <= filled.config.total_length + 1e-9);
        assert_eq!(
            out.config.arrangement.n_helices(),
            filled.config.arrangement.n_helices()
        );
        assert!(out.config.is_feasible(Discretization::default()));
    }
}
