//! Closing multihelix units into torus links.
//!
//! `p` stacked units bend into a torus: each strand keeps its poloidal radius,
//! advances `p` full poloidal turns while the axis sweeps the major circle
//! once, and the rod becomes the axis circle itself. Bending compresses the
//! inner equator, so the major radius must exceed the isometric value
//! `pH/2π`; each shell needs its local pitch at the inner equator to stay at
//! or above the smallest height that shell tolerates.

use std::f64::consts::TAU;

use rayon::prelude::*;

use crate::arrangement::MultihelixConfig;
use crate::error::{Error, Result};
use crate::geometry::{self, Polyline3};
use crate::numeric::{adaptive_simpson, ols_fit};

/// How the major radius is chosen when closing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosureMode {
    /// Scale the axis circle by `(p+1)/p`, i.e. `R_M = (p+1)H/2π`. Exact for
    /// configurations whose outermost shell sits at its ideal 45° geometry;
    /// too small for arrangements with underconstrained outer shells and too
    /// large for some others.
    Uniform,
    /// Grow the major radius only as far as the per-shell pitch requirement
    /// demands: `R_M = max_i (p·H̃(M_i, R_i)/2π + R_i)`, the smallest radius
    /// at which no shell is compressed below its minimum height at the inner
    /// equator. Single-strand shells contribute only their radius.
    MinimalGrowth,
}

/// Closure result for one multihelix.
#[derive(Debug, Clone, serde::Serialize)]
pub struct TorusLinkReport {
    pub p: u32,
    pub q: u32,
    pub arrangement: String,
    pub major_radius: f64,
    pub total_length: f64,
    pub crossing_number: u64,
    /// `total_length / crossing_number^{3/4}`.
    pub ratio: f64,
    pub mode: ClosureMode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lower_bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lower_bound_kind: Option<String>,
}

/// Closed-link geometry generator.
#[derive(Debug, Clone)]
pub struct ClosedLink {
    pub p: u32,
    pub major_radius: f64,
    /// Per-component poloidal radius and starting phase; the rod is radius 0.
    pub strands: Vec<(f64, f64)>,
    pub report: TorusLinkReport,
}

impl ClosedLink {
    /// Samples each component with `verts_per_unit * p` vertices.
    pub fn polylines(&self, verts_per_unit: usize) -> Vec<Polyline3> {
        let n = (verts_per_unit * self.p as usize).max(3);
        self.strands
            .iter()
            .map(|&(rho, chi0)| {
                let vertices = (0..n)
                    .map(|i| {
                        let psi = TAU * i as f64 / n as f64;
                        let chi = chi0 + self.p as f64 * psi;
                        let r = self.major_radius + rho * chi.cos();
                        [r * psi.cos(), r * psi.sin(), rho * chi.sin()]
                    })
                    .collect();
                Polyline3::new(vertices, true)
            })
            .collect()
    }
}

/// Arc length of one closed strand at poloidal radius `rho`.
fn strand_length(major_radius: f64, rho: f64, p: u32) -> f64 {
    if rho == 0.0 {
        return TAU * major_radius;
    }
    let p2r2 = (p as f64 * rho) * (p as f64 * rho);
    adaptive_simpson(
        &|u: f64| {
            let r = major_radius + rho * u.cos();
            (r * r + p2r2).sqrt()
        },
        0.0,
        TAU,
        1e-10,
    )
}

/// Pitch requirement a shell imposes on the closure; lone strands have no
/// in-shell clearance to preserve.
fn shell_pitch_requirement(m: u32, radius: f64) -> Result<f64> {
    if m <= 1 {
        Ok(0.0)
    } else {
        geometry::min_height(m, radius)
    }
}

/// Closes `p` repeats of a multihelix into a `T(pQ, Q)` torus link.
pub fn close_link(config: &MultihelixConfig, p: u32, mode: ClosureMode) -> Result<ClosedLink> {
    if p < 2 {
        return Err(Error::InvalidParameter(format!(
            "closure needs p >= 2 repeats, got {p}"
        )));
    }
    let q = config.q();
    let pf = p as f64;
    let major_radius = match mode {
        ClosureMode::Uniform => (pf + 1.0) * config.height / TAU,
        ClosureMode::MinimalGrowth => {
            // Isometric axis as a floor; per-shell pitch preservation on top.
            let mut rm = pf * config.height / TAU;
            for (&m, &r) in config.arrangement.shells.iter().zip(&config.shell_radii) {
                let pitch = shell_pitch_requirement(m, r)?;
                rm = rm.max(pf * pitch / TAU + r);
            }
            rm
        }
    };
    let mut strands = vec![(0.0, 0.0)];
    for (&m, &r) in config.arrangement.shells.iter().zip(&config.shell_radii) {
        for j in 0..m {
            strands.push((r, TAU * j as f64 / m as f64));
        }
    }
    let mut total_length = TAU * major_radius;
    for (&m, &r) in config.arrangement.shells.iter().zip(&config.shell_radii) {
        total_length += m as f64 * strand_length(major_radius, r, p);
    }
    let crossing_number = p as u64 * q as u64 * (q as u64 - 1);
    let ratio = total_length / (crossing_number as f64).powf(0.75);
    let report = TorusLinkReport {
        p,
        q,
        arrangement: config.arrangement.to_string(),
        major_radius,
        total_length,
        crossing_number,
        ratio,
        mode,
        lower_bound: None,
        lower_bound_kind: None,
    };
    Ok(ClosedLink {
        p,
        major_radius,
        strands,
        report,
    })
}

/// One row of a closure ratio sweep.
#[derive(Debug, Clone, serde::Serialize)]
pub struct RatioRow {
    pub q: u32,
    pub crossing_number: u64,
    pub length: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct RatioSweep {
    pub rows: Vec<RatioRow>,
    /// Best-fit exponent of `log(length)` against `log(crossings)`.
    pub exponent: f64,
}

/// Closes every configuration at the same `p` and fits the length-crossing
/// scaling exponent.
pub fn ratio_sweep(configs: &[MultihelixConfig], p: u32) -> Result<RatioSweep> {
    let rows: Vec<RatioRow> = configs
        .iter()
        .map(|cfg| {
            let link = close_link(cfg, p, ClosureMode::MinimalGrowth)?;
            Ok(RatioRow {
                q: cfg.q(),
                crossing_number: link.report.crossing_number,
                length: link.report.total_length,
                ratio: link.report.ratio,
            })
        })
        .collect::<Result<_>>()?;
    let xs: Vec<f64> = rows.iter().map(|r| (r.crossing_number as f64).ln()).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.length.ln()).collect();
    let (exponent, _) = ols_fit(&xs, &ys);
    Ok(RatioSweep { rows, exponent })
}

/// Closure-penalized ratio bound for the incremental family,
/// `10.89·p^{1/4}·(p+1)/p`; smallest at `p = 3`.
pub fn incremental_ratio_bound(p: u32) -> f64 {
    let pf = p as f64;
    10.89 * pf.powf(0.25) * (pf + 1.0) / pf
}

/// Result of the overlap audit of a discretized link.
#[derive(Debug, Clone, serde::Serialize)]
pub struct OverlapReport {
    pub min_distance: f64,
    /// Component indices realizing the minimum (equal for self-distance).
    pub components: (usize, usize),
    pub clearance: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Minimum inter-component and intra-component segment distance.
///
/// Self-distances skip segment pairs closer than an arc window of π along the
/// curve: a unit tube of curvature at most one cannot touch itself at shorter
/// arc separation, and nearby segments of any smooth curve are trivially
/// close.
pub fn verify_no_overlap(components: &[Polyline3], clearance: f64, tolerance: f64) -> OverlapReport {
    let mut jobs: Vec<(usize, usize)> = Vec::new();
    for i in 0..components.len() {
        for j in i..components.len() {
            jobs.push((i, j));
        }
    }
    let results: Vec<(f64, (usize, usize))> = jobs
        .par_iter()
        .map(|&(i, j)| {
            let d = if i == j {
                self_min_distance(&components[i])
            } else {
                pair_min_distance(&components[i], &components[j])
            };
            (d, (i, j))
        })
        .collect();
    let (min_distance, pair) = results
        .into_iter()
        .min_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(&b.1)))
        .unwrap_or((f64::INFINITY, (0, 0)));
    OverlapReport {
        min_distance,
        components: pair,
        clearance,
        tolerance,
        pass: min_distance >= clearance * (1.0 - tolerance),
    }
}

fn pair_min_distance(a: &Polyline3, b: &Polyline3) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..a.segment_count() {
        let (p0, p1) = a.segment(i);
        for j in 0..b.segment_count() {
            let (q0, q1) = b.segment(j);
            let d = geometry::segment_segment_dist2(p0, p1, q0, q1);
            if d < best {
                best = d;
            }
        }
    }
    best.sqrt()
}

fn self_min_distance(a: &Polyline3) -> f64 {
    let n = a.segment_count();
    // Mean segment length converts the arc window to an index window.
    let seg_len = a.arc_length() / n as f64;
    let skip = ((std::f64::consts::PI / seg_len).ceil() as usize).max(1);
    let mut best = f64::INFINITY;
    for i in 0..n {
        let (p0, p1) = a.segment(i);
        for j in (i + 1)..n {
            let apart = (j - i).min(if a.closed { n - (j - i) } else { usize::MAX });
            if apart <= skip {
                continue;
            }
            let (q0, q1) = a.segment(j);
            let d = geometry::segment_segment_dist2(p0, p1, q0, q1);
            if d < best {
                best = d;
            }
        }
    }
    best.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{optimize_geometry, Arrangement};

    #[test]
    fn crossing_number_formula() {
        let cfg = optimize_geometry(&Arrangement::new(vec![5, 7, 6]).unwrap()).unwrap();
        let link = close_link(&cfg, 3, ClosureMode::MinimalGrowth).unwrap();
        assert_eq!(link.report.crossing_number, 3 * 19 * 18);
        assert!(close_link(&cfg, 1, ClosureMode::Uniform).is_err());
    }

    #[test]
    fn nineteen_strand_closure_ratio() {
        let cfg = optimize_geometry(&Arrangement::new(vec![5, 7, 6]).unwrap()).unwrap();
        let link = close_link(&cfg, 3, ClosureMode::MinimalGrowth).unwrap();
        assert!(
            (link.report.ratio - 11.54).abs() / 11.54 < 0.01,
            "ratio={}",
            link.report.ratio
        );
        assert!((link.report.total_length - 2093.0).abs() / 2093.0 < 0.01);
    }

    #[test]
    fn rod_plus_one_closure_ratio() {
        let cfg = optimize_geometry(&Arrangement::new(vec![1]).unwrap()).unwrap();
        let link = close_link(&cfg, 3, ClosureMode::MinimalGrowth).unwrap();
        assert!(
            (link.report.ratio - 13.8768).abs() < 0.01,
            "ratio={}",
            link.report.ratio
        );
    }

    #[test]
    fn uniform_mode_reports_scaled_axis() {
        let cfg = optimize_geometry(&Arrangement::new(vec![5, 7, 6]).unwrap()).unwrap();
        let link = close_link(&cfg, 3, ClosureMode::Uniform).unwrap();
        assert!((link.major_radius - 4.0 * cfg.height / TAU).abs() < 1e-12);
    }

    #[test]
    fn closure_bound_minimized_at_three_repeats() {
        assert!((incremental_ratio_bound(3) - 19.11).abs() < 0.05);
        let at3 = incremental_ratio_bound(3);
        for p in 2..=10 {
            if p != 3 {
                assert!(incremental_ratio_bound(p) > at3, "p={p}");
            }
        }
        // (p+1)/p → 1, so the bound approaches 10.89·p^{1/4} from above.
        let big = incremental_ratio_bound(10_000);
        assert!((big / 10_000.0_f64.powf(0.25) - 10.89).abs() < 0.002);
    }

    #[test]
    fn closed_length_approaches_scaled_unit_length_for_ideal_shell() {
        // A single shell at its ideal 45° geometry: uniform closure lengthens
        // the structure by (p+1)/p as p grows.
        let ideal = crate::helix::ideal_helix(10).unwrap();
        let cfg = MultihelixConfig::from_parts(
            vec![10],
            vec![ideal.radius],
            ideal.height,
            Some(0),
        )
        .unwrap();
        let unit = cfg.total_length;
        for p in [8u32, 16, 32] {
            let link = close_link(&cfg, p, ClosureMode::Uniform).unwrap();
            let factor = link.report.total_length / (p as f64 * unit);
            let expect = (p as f64 + 1.0) / p as f64;
            assert!(
                (factor - expect).abs() / expect < 0.02,
                "p={p} factor={factor} expect={expect}"
            );
        }
    }

    #[test]
    fn disjoint_circles_pass_overlap_audit() {
        let mk = |cx: f64| {
            let vertices = (0..64)
                .map(|i| {
                    let t = TAU * i as f64 / 64.0;
                    [cx + 3.0 * t.cos(), 3.0 * t.sin(), 0.0]
                })
                .collect();
            Polyline3::new(vertices, true)
        };
        let report = verify_no_overlap(&[mk(0.0), mk(16.0)], 2.0, 0.002);
        assert!(report.pass);
        assert!((report.min_distance - 10.0).abs() < 0.02);
    }

    #[test]
    fn self_distance_ignores_local_neighbours() {
        // A unit circle of radius 5 never comes near itself; the audit must
        // not flag adjacent segments.
        let vertices = (0..256)
            .map(|i| {
                let t = TAU * i as f64 / 256.0;
                [5.0 * t.cos(), 5.0 * t.sin(), 0.0]
            })
            .collect();
        let loop5 = Polyline3::new(vertices, true);
        let report = verify_no_overlap(&[loop5], 2.0, 0.002);
        assert!(report.pass, "min={}", report.min_distance);
        assert!(report.min_distance > 3.0);
    }
}
