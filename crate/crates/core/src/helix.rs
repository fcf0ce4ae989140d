//! Optimal cylindrical multi-strand helices and the rod-centred variant.
//!
//! A shell of `n` congruent helices winding one cylinder admits a closed-form
//! optimum: the phase separation at closest approach solves a transcendental
//! equation, and the tightest radius and pitch height follow from it.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::geometry;
use crate::numeric::{bisect_root, golden_min};

/// Tightest single-shell geometry for `n` helices, in tube-radius units.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct IdealHelixParams {
    pub n: u32,
    /// Phase separation at closest approach; the negative root of the
    /// optimality equation, in `(-2π/n, 0)`.
    pub phi: f64,
    pub radius: f64,
    /// Height of one full 2π turn.
    pub height: f64,
    /// Total arc length of all `n` strands over one turn.
    pub length_per_twist: f64,
    /// Length per crossing, `L / (n(n-1))`; undefined for a single strand.
    pub length_per_crossing: Option<f64>,
    /// True when produced by the large-`n` closed forms rather than the solve.
    pub approximate: bool,
}

impl IdealHelixParams {
    pub fn pitch_angle(&self) -> f64 {
        (self.height / (TAU * self.radius)).atan()
    }
}

/// Rod-centred shell: one strand straightened into an axial rod, the other
/// `n_total - 1` wound around it.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct CaduceusParams {
    pub n_total: u32,
    pub outer_radius: f64,
    pub height: f64,
    /// Rod height plus helix arc lengths.
    pub length_per_twist: f64,
    pub refined: bool,
}

/// Solves `2 - 2cos(φ + 2π/n) = φ²` for the real root in `(-2π/n, 0)`.
///
/// The root is the strand phase separation at closest approach. The large-`n`
/// Taylor solution of the same equation is `φ = -π/n`; the negative sign is
/// the meaningful branch (the positive one leaves the stated interval).
pub fn solve_phi(n: u32) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "phase equation needs n >= 2 strands, got {n}"
        )));
    }
    let nn = n as f64;
    let f = |p: f64| 2.0 - 2.0 * (p + TAU / nn).cos() - p * p;
    let eps = 1e-12;
    let root = bisect_root(f, -TAU / nn + eps, -eps, 1e-12)?;
    debug_assert!(f(root).abs() < 1e-10);
    Ok(root)
}

/// Tightest radius, height and length for `n >= 2` helices on one cylinder.
pub fn ideal_helix(n: u32) -> Result<IdealHelixParams> {
    let phi = solve_phi(n)?;
    let nn = n as f64;
    let s = (phi + TAU / nn).sin();
    let radius = 2.0 * (1.0 / (phi * phi - phi * s)).sqrt();
    let height = 4.0 * PI * (s / (phi * phi * s - phi * phi * phi)).sqrt();
    let length = nn * (height * height + (TAU * radius) * (TAU * radius)).sqrt();
    Ok(IdealHelixParams {
        n,
        phi,
        radius,
        height,
        length_per_twist: length,
        length_per_crossing: crossing_ratio(n, length),
        approximate: false,
    })
}

/// Large-`n` closed forms: `R = √2·n/π`, `H = √8·n`, `L = 4n²`.
///
/// Accurate to about 1% in height from `n = 4` and 0.4% in radius from
/// `n = 12`; exact values should be preferred when laying out coordinates.
pub fn large_n_helix(n: u32) -> IdealHelixParams {
    let nn = n as f64;
    let radius = std::f64::consts::SQRT_2 / PI * nn;
    let height = 8.0_f64.sqrt() * nn;
    let length = 4.0 * nn * nn;
    IdealHelixParams {
        n,
        phi: -PI / nn,
        radius,
        height,
        length_per_twist: length,
        length_per_crossing: crossing_ratio(n, length),
        approximate: true,
    }
}

fn crossing_ratio(n: u32, length: f64) -> Option<f64> {
    if n >= 2 {
        Some(length / (n as f64 * (n as f64 - 1.0)))
    } else {
        None
    }
}

/// Ideal radius of an `n`-strand shell; a lone strand sits on the axis.
pub fn ideal_radius(n: u32) -> f64 {
    if n <= 1 {
        0.0
    } else {
        ideal_helix(n).expect("n >= 2").radius
    }
}

/// Ideal height of an `n`-strand shell; a lone strand only needs its own
/// turn-to-turn clearance of 2.
pub fn ideal_height(n: u32) -> f64 {
    if n <= 1 {
        2.0
    } else {
        ideal_helix(n).expect("n >= 2").height
    }
}

/// Rod-centred construction for `n_total` strands.
///
/// The outer `(n_total - 1)`-shell starts from its ideal radius, bumped to 2
/// when the ideal would touch the rod. With `refine_radius` the radius is
/// then widened to trade helix length against rod height via the minimum
/// feasible height; the gain is under half a percent and peaks near six
/// strands.
pub fn caduceus(n_total: u32, refine_radius: bool) -> Result<CaduceusParams> {
    if n_total < 2 {
        return Err(Error::InvalidParameter(format!(
            "rod-centred construction needs at least 2 strands, got {n_total}"
        )));
    }
    let m = n_total - 1;
    let base_radius = 2.0_f64.max(ideal_radius(m));
    let length_at = |r: f64| -> f64 {
        let h = height_for_shell(m, r);
        h + m as f64 * (h * h + (TAU * r) * (TAU * r)).sqrt()
    };
    if !refine_radius {
        let h = height_for_shell(m, base_radius);
        return Ok(CaduceusParams {
            n_total,
            outer_radius: base_radius,
            height: h,
            length_per_twist: length_at(base_radius),
            refined: false,
        });
    }
    let (r, length) = golden_min(length_at, base_radius, base_radius + 1.0, 1e-6);
    // The unrefined end of the bracket stays admissible; keep it on ties.
    if length_at(base_radius) <= length {
        let h = height_for_shell(m, base_radius);
        return Ok(CaduceusParams {
            n_total,
            outer_radius: base_radius,
            height: h,
            length_per_twist: length_at(base_radius),
            refined: true,
        });
    }
    Ok(CaduceusParams {
        n_total,
        outer_radius: r,
        height: height_for_shell(m, r),
        length_per_twist: length,
        refined: true,
    })
}

fn height_for_shell(m: u32, r: f64) -> f64 {
    let floor = 2.0 * m as f64;
    if m == 1 {
        return floor;
    }
    geometry::min_height(m, r)
        .map(|h| h.max(floor))
        .unwrap_or(f64::INFINITY)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{min_distance, sample_helix, HelixSpec};

    /// Published single-shell optima used as fixed references.
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

    #[test]
    fn phase_root_lies_in_interval_and_satisfies_equation() {
        for n in 2..=50 {
            let phi = solve_phi(n).unwrap();
            let nn = n as f64;
            assert!(phi > -TAU / nn && phi < 0.0, "n={n} phi={phi}");
            let residual = 2.0 - 2.0 * (phi + TAU / nn).cos() - phi * phi;
            assert!(residual.abs() < 1e-10, "n={n} residual={residual}");
        }
    }

    #[test]
    fn phase_root_tends_to_minus_pi_over_n() {
        let phi = solve_phi(1000).unwrap();
        let expected = -PI / 1000.0;
        assert!((phi - expected).abs() / expected.abs() < 0.01);
    }

    #[test]
    fn reproduces_published_single_shell_optima() {
        for &(n, r, h, l, lc) in &TABLE1 {
            let p = ideal_helix(n).unwrap();
            assert!((p.radius - r).abs() < 1e-3, "n={n} radius");
            assert!((p.height - h).abs() < 1e-3, "n={n} height");
            assert!((p.length_per_twist - l).abs() < 1e-2, "n={n} length");
            assert!(
                (p.length_per_crossing.unwrap() - lc).abs() < 1e-3,
                "n={n} per crossing"
            );
        }
    }

    #[test]
    fn double_helix_matches_to_stated_precision() {
        let p = ideal_helix(2).unwrap();
        assert!((p.radius - 1.04587).abs() < 1e-4);
        let p10 = ideal_helix(10).unwrap();
        assert!((p10.radius - 4.52491).abs() < 1e-4);
    }

    #[test]
    fn five_and_six_strand_examples() {
        let p5 = ideal_helix(5).unwrap();
        assert!((p5.radius - 2.29861).abs() < 1e-2);
        assert!((p5.height - 14.0787).abs() < 1e-2);
        assert!((p5.length_per_twist - 100.846).abs() < 1e-2);
        let p6 = ideal_helix(6).unwrap();
        assert!((p6.length_per_crossing.unwrap() - 4.82797).abs() < 1e-4);
    }

    #[test]
    fn large_n_forms_and_accuracy_remarks() {
        let p1 = large_n_helix(1);
        assert!((p1.radius - 0.45016).abs() < 1e-5);
        assert!((p1.height - 2.82843).abs() < 1e-5);
        assert!((p1.length_per_twist - 4.0).abs() < 1e-12);

        let exact4 = ideal_helix(4).unwrap();
        let approx4 = large_n_helix(4);
        let h_err = (approx4.height - exact4.height) / exact4.height;
        assert!(h_err > 0.0 && h_err < 0.01, "height overshoot {h_err}");
        let r_err = (exact4.radius - approx4.radius) / exact4.radius;
        assert!(r_err > 0.0 && r_err < 0.05, "radius undershoot {r_err}");

        let exact12 = ideal_helix(12).unwrap();
        let approx12 = large_n_helix(12);
        let r12 = (exact12.radius - approx12.radius) / exact12.radius;
        assert!(r12 > 0.0 && r12 < 0.004, "radius undershoot {r12}");
    }

    #[test]
    fn accuracy_invariants_hold_from_four_strands() {
        for n in 4..=40 {
            let exact = ideal_helix(n).unwrap();
            let approx = large_n_helix(n);
            assert!((exact.height - approx.height).abs() / exact.height < 0.01);
            assert!((exact.radius - approx.radius).abs() / exact.radius < 0.05);
            assert!(exact.radius >= 1.0 / (PI / n as f64).sin() - 1e-9);
            assert!(exact.height >= 2.0 * n as f64 - 1e-9);
        }
    }

    #[test]
    fn length_monotonic_in_strand_count() {
        let mut prev = ideal_helix(2).unwrap();
        for n in 3..=50 {
            let cur = ideal_helix(n).unwrap();
            assert!(cur.length_per_twist > prev.length_per_twist);
            assert!(cur.length_per_crossing.unwrap() < prev.length_per_crossing.unwrap());
            prev = cur;
        }
    }

    #[test]
    fn optimum_is_tight_for_all_strand_pairs() {
        // At the optimum the adjacent-pair clearance is active; farther pairs
        // must only stay clear.
        for n in 2..=50u32 {
            let p = ideal_helix(n).unwrap();
            let strands: Vec<_> = (0..n)
                .map(|i| {
                    sample_helix(
                        &HelixSpec {
                            radius: p.radius,
                            height: p.height,
                            phase: TAU * i as f64 / n as f64,
                            turns: 1.0,
                        },
                        500,
                    )
                })
                .collect();
            let mut min_pair = f64::INFINITY;
            for i in 0..strands.len() {
                for j in i + 1..strands.len() {
                    let d = min_distance(&strands[i], &strands[j]);
                    assert!(d >= 2.0 - 1e-3, "n={n} pair ({i},{j}) d={d}");
                    min_pair = min_pair.min(d);
                }
            }
            assert!(min_pair <= 2.0 + 5e-2, "n={n} slack {min_pair}");
        }
    }

    #[test]
    fn rod_centred_refinement_matches_reported_six_strand_values() {
        let unrefined = caduceus(6, false).unwrap();
        assert!((unrefined.length_per_twist - 114.94).abs() / 114.94 < 2e-3);
        let refined = caduceus(6, true).unwrap();
        assert!((refined.outer_radius - 2.37).abs() / 2.37 < 0.01);
        assert!((refined.height - 13.62).abs() / 13.62 < 0.01);
        assert!((refined.length_per_twist - 114.57).abs() / 114.57 < 0.01);
    }

    #[test]
    fn rod_centred_always_beats_plain_shell() {
        for n in 2..=50 {
            let cad = caduceus(n, false).unwrap();
            let plain = ideal_helix(n).unwrap();
            assert!(
                cad.length_per_twist < plain.length_per_twist,
                "n={n}: {} !< {}",
                cad.length_per_twist,
                plain.length_per_twist
            );
        }
    }

    #[test]
    fn outer_radius_bump_only_below_six_strands() {
        for n in 2..=5 {
            assert_eq!(caduceus(n, false).unwrap().outer_radius, 2.0);
        }
        for n in 6..=50 {
            let cad = caduceus(n, false).unwrap();
            let r = ideal_radius(n - 1);
            assert!((cad.outer_radius - r).abs() < 1e-12, "n={n}");
        }
    }

    #[test]
    fn large_strand_counts_approach_closed_form() {
        for n in [20u32, 30, 50] {
            let cad = caduceus(n, false).unwrap();
            let m = (n - 1) as f64;
            let closed = 4.0 * m * m + 8.0_f64.sqrt() * m;
            assert!(
                (cad.length_per_twist - closed).abs() / closed < 0.01,
                "n={n}"
            );
        }
    }
}
