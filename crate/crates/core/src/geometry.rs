//! Discretized curves, minimum distances, and shell feasibility.
//!
//! Feasibility follows the discrete recipe: sample two adjacent helices of a
//! shell with 500 vertices per turn (one turn plus a 10% margin on each end)
//! and require every vertex pair to clear the tube diameter. For two helices
//! sharing a radius and height the vertex-pair distance depends only on the
//! parameter offset, so the scan collapses to one dimension; `min_distance`
//! keeps the literal all-pairs form for arbitrary polylines.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::numeric::bisect_threshold;

/// Vertices per turn used throughout unless a caller overrides it.
pub const DEFAULT_VERTS_PER_TURN: usize = 500;
/// Extra turns sampled past each end of the checked pitch.
pub const CHECK_MARGIN_TURNS: f64 = 0.1;
/// Feasibility clearance slack absorbing float noise at tight optima.
pub const CLEARANCE_EPS: f64 = 1e-6;

/// Discretization settings for feasibility checks.
#[derive(Debug, Clone, Copy)]
pub struct Discretization {
    pub verts_per_turn: usize,
    pub margin_turns: f64,
}

impl Default for Discretization {
    fn default() -> Self {
        Self {
            verts_per_turn: DEFAULT_VERTS_PER_TURN,
            margin_turns: CHECK_MARGIN_TURNS,
        }
    }
}

impl Discretization {
    pub fn with_verts(verts_per_turn: usize) -> Self {
        Self {
            verts_per_turn,
            ..Self::default()
        }
    }
}

/// An ordered 3D vertex list, optionally closed.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize, PartialEq)]
pub struct Polyline3 {
    pub vertices: Vec<[f64; 3]>,
    pub closed: bool,
}

impl Polyline3 {
    pub fn new(vertices: Vec<[f64; 3]>, closed: bool) -> Self {
        debug_assert!(vertices.len() >= 2);
        Self { vertices, closed }
    }

    /// Total edge length, including the closing edge when closed.
    pub fn arc_length(&self) -> f64 {
        let mut total = 0.0;
        for w in self.vertices.windows(2) {
            total += dist(w[0], w[1]);
        }
        if self.closed {
            if let (Some(first), Some(last)) = (self.vertices.first(), self.vertices.last()) {
                total += dist(*first, *last);
            }
        }
        total
    }

    pub fn segment_count(&self) -> usize {
        if self.closed {
            self.vertices.len()
        } else {
            self.vertices.len() - 1
        }
    }

    /// Endpoints of segment `i`, with wraparound when closed.
    pub fn segment(&self, i: usize) -> ([f64; 3], [f64; 3]) {
        let n = self.vertices.len();
        (self.vertices[i], self.vertices[(i + 1) % n])
    }
}

fn dist(a: [f64; 3], b: [f64; 3]) -> f64 {
    dist2(a, b).sqrt()
}

fn dist2(a: [f64; 3], b: [f64; 3]) -> f64 {
    let dx = a[0] - b[0];
    let dy = a[1] - b[1];
    let dz = a[2] - b[2];
    dx * dx + dy * dy + dz * dz
}

/// One helix on a cylinder: `(R cos(θ+φ), R sin(θ+φ), Hθ/2π)`.
#[derive(Debug, Clone, Copy)]
pub struct HelixSpec {
    pub radius: f64,
    pub height: f64,
    pub phase: f64,
    /// Number of 2π turns covered by the sample.
    pub turns: f64,
}

impl HelixSpec {
    pub fn point(&self, theta: f64) -> [f64; 3] {
        [
            self.radius * (theta + self.phase).cos(),
            self.radius * (theta + self.phase).sin(),
            self.height * theta / TAU,
        ]
    }
}

/// Samples `vertex_count` points at uniform parameter over `turns` turns.
pub fn sample_helix(spec: &HelixSpec, vertex_count: usize) -> Polyline3 {
    assert!(vertex_count >= 2, "need at least two vertices");
    let span = TAU * spec.turns;
    let vertices = (0..vertex_count)
        .map(|i| spec.point(span * i as f64 / (vertex_count - 1) as f64))
        .collect();
    Polyline3::new(vertices, false)
}

/// Minimum distance over all vertex pairs of two polylines.
pub fn min_distance(a: &Polyline3, b: &Polyline3) -> f64 {
    let mut best = f64::INFINITY;
    for pa in &a.vertices {
        for pb in &b.vertices {
            let d = dist2(*pa, *pb);
            if d < best {
                best = d;
            }
        }
    }
    best.sqrt()
}

/// Minimum distance over all segment pairs; a refinement of the vertex-pair
/// scan that is exact for piecewise-linear curves.
pub fn min_distance_segments(a: &Polyline3, b: &Polyline3) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..a.segment_count() {
        let (p0, p1) = a.segment(i);
        for j in 0..b.segment_count() {
            let (q0, q1) = b.segment(j);
            let d = segment_segment_dist2(p0, p1, q0, q1);
            if d < best {
                best = d;
            }
        }
    }
    best.sqrt()
}

/// Squared distance between segments `[p0,p1]` and `[q0,q1]`.
pub(crate) fn segment_segment_dist2(
    p0: [f64; 3],
    p1: [f64; 3],
    q0: [f64; 3],
    q1: [f64; 3],
) -> f64 {
    let u = sub(p1, p0);
    let v = sub(q1, q0);
    let w = sub(p0, q0);
    let a = dot(u, u);
    let b = dot(u, v);
    let c = dot(v, v);
    let d = dot(u, w);
    let e = dot(v, w);
    let denom = a * c - b * b;
    let mut s = if denom > 1e-14 * a.max(c).max(1e-300) {
        ((b * e - c * d) / denom).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let mut t = if c > 1e-300 { (b * s + e) / c } else { 0.0 };
    if t < 0.0 {
        t = 0.0;
        s = if a > 1e-300 { (-d / a).clamp(0.0, 1.0) } else { 0.0 };
    } else if t > 1.0 {
        t = 1.0;
        s = if a > 1e-300 {
            ((b - d) / a).clamp(0.0, 1.0)
        } else {
            0.0
        };
    }
    let ps = add(p0, scale(u, s));
    let qt = add(q0, scale(v, t));
    dist2(ps, qt)
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}
fn add(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}
fn scale(a: [f64; 3], s: f64) -> [f64; 3] {
    [a[0] * s, a[1] * s, a[2] * s]
}
fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Vertex-pair minimum distance between two helices of the same radius and
/// height separated in phase by `dphase`.
///
/// Equivalent to sampling both helices on the shared parameter grid and
/// scanning all vertex pairs: the pair distance depends only on the offset
/// `δ = θ_b - θ_a`, so scanning realized offsets covers every pair.
pub fn helix_pair_min_distance(
    radius: f64,
    height: f64,
    dphase: f64,
    disc: Discretization,
) -> f64 {
    let h = TAU / disc.verts_per_turn as f64;
    let k = ((1.0 + 2.0 * disc.margin_turns) * TAU / h).ceil() as i64;
    let c_axial = height / TAU;
    let two_r2 = 2.0 * radius * radius;
    let (cos_dp, sin_dp) = (dphase.cos(), dphase.sin());
    let (cos_h, sin_h) = (h.cos(), h.sin());
    // March δ = 0, ±h, ±2h, … with an incrementally rotated phasor.
    let mut best = two_r2 * (1.0 - cos_dp); // δ = 0
    let mut cos_pos = cos_dp;
    let mut sin_pos = sin_dp;
    let mut cos_neg = cos_dp;
    let mut sin_neg = sin_dp;
    for step in 1..=k {
        let delta = h * step as f64;
        let axial = c_axial * delta;
        let axial2 = axial * axial;
        let (cp, sp) = (
            cos_pos * cos_h - sin_pos * sin_h,
            sin_pos * cos_h + cos_pos * sin_h,
        );
        cos_pos = cp;
        sin_pos = sp;
        let (cn, sn) = (
            cos_neg * cos_h + sin_neg * sin_h,
            sin_neg * cos_h - cos_neg * sin_h,
        );
        cos_neg = cn;
        sin_neg = sn;
        let d_pos = two_r2 * (1.0 - cos_pos) + axial2;
        if d_pos < best {
            best = d_pos;
        }
        let d_neg = two_r2 * (1.0 - cos_neg) + axial2;
        if d_neg < best {
            best = d_neg;
        }
    }
    best.sqrt()
}

/// Whether `m` helices fit on a cylinder of the given radius and height.
///
/// A single strand always fits; otherwise the planar bound, the vertical
/// stacking bound, and the discrete adjacent-pair clearance must all hold.
pub fn shell_feasible(m: u32, radius: f64, height: f64, clearance: f64) -> bool {
    shell_feasible_with(m, radius, height, clearance, Discretization::default())
}

pub fn shell_feasible_with(
    m: u32,
    radius: f64,
    height: f64,
    clearance: f64,
    disc: Discretization,
) -> bool {
    if m <= 1 {
        return true;
    }
    let mm = m as f64;
    if radius < clearance / 2.0 / (PI / mm).sin() {
        return false;
    }
    if height < clearance * mm {
        return false;
    }
    helix_pair_min_distance(radius, height, TAU / mm, disc) >= clearance - CLEARANCE_EPS
}

/// Planar lower bound on the shell radius: `1/sin(π/m)` for `m >= 2`.
pub fn planar_min_radius(m: u32) -> f64 {
    if m <= 1 {
        0.0
    } else {
        1.0 / (PI / m as f64).sin()
    }
}

const HEIGHT_TOL: f64 = 1e-4;
const RADIUS_TOL: f64 = 1e-4;

/// Smallest height accommodating `m` helices at the given radius.
///
/// A single strand needs only its own turn-to-turn clearance of 2.
pub fn min_height(m: u32, radius: f64) -> Result<f64> {
    min_height_with(m, radius, Discretization::default())
}

pub fn min_height_with(m: u32, radius: f64, disc: Discretization) -> Result<f64> {
    if m <= 1 {
        return Ok(2.0);
    }
    let planar = planar_min_radius(m);
    if radius < planar + 1e-9 {
        return Err(Error::Infeasible(format!(
            "radius {radius} below planar minimum {planar} for m={m}"
        )));
    }
    let mm = m as f64;
    let lo = 2.0 * mm - 0.5;
    let mut hi = (2.0 * mm + 1.0).max(8.0_f64.sqrt() * mm * 1.2);
    let feasible = |h: f64| shell_feasible_with(m, radius, h, 2.0, disc);
    while !feasible(hi) {
        hi *= 2.0;
        if hi > 1e9 {
            return Err(Error::Infeasible(format!(
                "no feasible height for m={m} at radius {radius}"
            )));
        }
    }
    Ok(bisect_threshold(feasible, lo, hi, HEIGHT_TOL).max(2.0 * mm))
}

/// Smallest radius accommodating `m` helices at the given height.
pub fn min_radius(m: u32, height: f64) -> Result<f64> {
    min_radius_with(m, height, Discretization::default())
}

pub fn min_radius_with(m: u32, height: f64, disc: Discretization) -> Result<f64> {
    if m <= 1 {
        return Ok(0.0);
    }
    if height < 2.0 * m as f64 + 1e-9 {
        return Err(Error::Infeasible(format!(
            "height {height} below vertical minimum {} for m={m}",
            2.0 * m as f64
        )));
    }
    let planar = planar_min_radius(m);
    let mut hi = (planar + 1.0).max(std::f64::consts::SQRT_2 * m as f64 / PI + 2.0);
    let feasible = |r: f64| shell_feasible_with(m, r, height, 2.0, disc);
    while !feasible(hi) {
        hi *= 2.0;
        if hi > 1e9 {
            return Err(Error::Infeasible(format!(
                "no feasible radius for m={m} at height {height}"
            )));
        }
    }
    Ok(bisect_threshold(feasible, planar, hi, RADIUS_TOL).max(planar))
}

/// Empirical tight-packing fits in the collapsed coordinates
/// `X = R/m - 1/(m sin(π/m))`, `Y = H/m - 2`.
///
/// The fits are approximate and can sit slightly on the overlapping side;
/// results must be re-checked with `shell_feasible` before shipping. The
/// `safety` factor inflates the numerator coefficient when a conservative
/// estimate is wanted.
#[derive(Debug, Clone, Copy)]
pub struct FitModel {
    pub safety: f64,
}

impl Default for FitModel {
    fn default() -> Self {
        Self { safety: 1.0 }
    }
}

impl FitModel {
    pub fn scaled_x(m: u32, radius: f64) -> f64 {
        let mm = m as f64;
        radius / mm - 1.0 / (mm * (PI / mm).sin())
    }

    pub fn scaled_y(m: u32, height: f64) -> f64 {
        height / m as f64 - 2.0
    }

    /// Fit curve `Y(X)`.
    pub fn y_of_x(&self, x: f64) -> Result<f64> {
        if x <= 0.0 {
            return Err(Error::OutOfDomain(format!("scaled radius X={x} <= 0")));
        }
        let t = x.powf(-1.8612);
        Ok(self.safety * 0.0643 * t / (0.1932 * t + 1.0).powf(0.5556))
    }

    /// Fit curve `X(Y)`.
    pub fn x_of_y(&self, y: f64) -> Result<f64> {
        if y <= 0.0 {
            return Err(Error::OutOfDomain(format!("scaled height Y={y} <= 0")));
        }
        let t = y.powf(-1.3239);
        Ok(self.safety * 0.1301 * t / (0.4165 * t + 1.0).powf(0.5896))
    }

    /// Approximate minimum height at a radius, by the fit.
    pub fn fit_height(&self, m: u32, radius: f64) -> Result<f64> {
        let y = self.y_of_x(Self::scaled_x(m, radius))?;
        Ok(m as f64 * (y + 2.0))
    }

    /// Approximate minimum radius at a height, by the fit.
    pub fn fit_radius(&self, m: u32, height: f64) -> Result<f64> {
        let x = self.x_of_y(Self::scaled_y(m, height))?;
        Ok(m as f64 * x + planar_min_radius(m))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn helix_sampling_endpoints() {
        let p = sample_helix(
            &HelixSpec {
                radius: 1.0,
                height: TAU,
                phase: 0.0,
                turns: 1.0,
            },
            5,
        );
        assert_eq!(p.vertices.len(), 5);
        let first = p.vertices[0];
        let last = p.vertices[4];
        assert!((first[0] - 1.0).abs() < 1e-12 && first[1].abs() < 1e-12 && first[2].abs() < 1e-12);
        assert!((last[0] - 1.0).abs() < 1e-9 && last[1].abs() < 1e-9 && (last[2] - TAU).abs() < 1e-12);
    }

    #[test]
    fn zero_radius_is_a_rod() {
        let p = sample_helix(
            &HelixSpec {
                radius: 0.0,
                height: 5.0,
                phase: 0.0,
                turns: 1.0,
            },
            11,
        );
        for v in &p.vertices {
            assert!(v[0].abs() < 1e-15 && v[1].abs() < 1e-15);
        }
        assert!((p.arc_length() - 5.0).abs() < 1e-12);
    }

    #[test]
    fn sampled_arc_length_matches_closed_form() {
        let spec = HelixSpec {
            radius: 1.7,
            height: 9.0,
            phase: 0.3,
            turns: 1.0,
        };
        let exact = (spec.height * spec.height + (TAU * spec.radius).powi(2)).sqrt();
        let sampled = sample_helix(&spec, 500).arc_length();
        assert!((sampled - exact).abs() / exact < 1e-4);
    }

    #[test]
    fn parallel_rods_distance() {
        let a = Polyline3::new(vec![[0.0, 0.0, 0.0], [0.0, 0.0, 5.0]], false);
        let b = Polyline3::new(vec![[2.0, 0.0, 0.0], [2.0, 0.0, 5.0]], false);
        assert_eq!(min_distance(&a, &b), 2.0);
        assert!((min_distance_segments(&a, &b) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn ideal_double_helix_clearance_is_active() {
        let p = crate::helix::ideal_helix(2).unwrap();
        let mk = |phase: f64| {
            sample_helix(
                &HelixSpec {
                    radius: p.radius,
                    height: p.height,
                    phase,
                    turns: 1.0,
                },
                500,
            )
        };
        let d = min_distance(&mk(0.0), &mk(PI));
        assert!((d - 2.0).abs() < 0.02, "d={d}");
    }

    #[test]
    fn refinement_changes_distance_little() {
        let p = crate::helix::ideal_helix(2).unwrap();
        let mk = |n: usize| {
            let a = sample_helix(
                &HelixSpec {
                    radius: p.radius,
                    height: p.height,
                    phase: 0.0,
                    turns: 1.0,
                },
                n,
            );
            let b = sample_helix(
                &HelixSpec {
                    radius: p.radius,
                    height: p.height,
                    phase: PI,
                    turns: 1.0,
                },
                n,
            );
            min_distance(&a, &b)
        };
        let d500 = mk(500);
        let d2000 = mk(2000);
        assert!((d500 - d2000).abs() / d500 < 5e-3);
    }

    #[test]
    fn pair_scan_agrees_with_polyline_scan() {
        // The 1-D offset scan must reproduce the literal all-pairs result on
        // the matching sample grid.
        for &(radius, height, m) in &[(2.3, 14.1, 5u32), (4.0, 17.0, 7), (2.0, 4.3, 2)] {
            let dphase = TAU / m as f64;
            let disc = Discretization::default();
            let fast = helix_pair_min_distance(radius, height, dphase, disc);
            let n_margin = (disc.margin_turns * disc.verts_per_turn as f64).ceil() as usize;
            let total = disc.verts_per_turn + 2 * n_margin + 1;
            let theta0 = -(n_margin as f64) * TAU / disc.verts_per_turn as f64;
            let sample = |phase: f64| {
                let vertices = (0..total)
                    .map(|i| {
                        let theta = theta0 + TAU * i as f64 / disc.verts_per_turn as f64;
                        HelixSpec {
                            radius,
                            height,
                            phase,
                            turns: 1.0,
                        }
                        .point(theta)
                    })
                    .collect();
                Polyline3::new(vertices, false)
            };
            let slow = min_distance(&sample(0.0), &sample(dphase));
            assert!(
                (fast - slow).abs() < 1e-9,
                "fast={fast} slow={slow} m={m}"
            );
        }
    }

    #[test]
    fn single_strand_always_fits() {
        assert!(shell_feasible(1, 0.0, 0.1, 2.0));
        assert!(shell_feasible(1, 100.0, 1e6, 2.0));
    }

    #[test]
    fn five_strand_optimum_is_tight() {
        assert!(shell_feasible(5, 2.29861, 14.0787, 2.0));
        assert!(!shell_feasible(5, 2.29861, 13.9, 2.0));
    }

    #[test]
    fn planar_overlap_rejected_at_any_height() {
        assert!(!shell_feasible(3, 1.0, 100.0, 2.0));
    }

    #[test]
    fn min_height_reproduces_shell_optima() {
        let h5 = min_height(5, 2.29861).unwrap();
        assert!((h5 - 14.0787).abs() < 0.05, "h5={h5}");
        let h2 = min_height(2, 1.04587).unwrap();
        assert!((h2 - 5.3934).abs() < 0.02, "h2={h2}");
    }

    #[test]
    fn min_height_approaches_vertical_bound_at_wide_radius() {
        let mut prev = f64::INFINITY;
        for r in [4.0, 6.0, 10.0, 20.0, 50.0] {
            let h = min_height(4, r).unwrap();
            assert!(h >= 8.0 && h <= prev + 1e-9, "r={r} h={h}");
            prev = h;
        }
        assert!(min_height(4, 50.0).unwrap() - 8.0 < 0.2);
    }

    #[test]
    fn min_radius_reproduces_shell_optima() {
        let r5 = min_radius(5, 14.0787).unwrap();
        assert!((r5 - 2.29861).abs() < 0.01, "r5={r5}");
        let r2 = min_radius(2, 5.3934).unwrap();
        assert!((r2 - 1.04587).abs() < 0.01, "r2={r2}");
    }

    #[test]
    fn min_radius_rejects_too_short() {
        assert!(min_radius(5, 9.9).is_err());
        assert!(min_height(5, 1.5).is_err());
    }

    #[test]
    fn height_radius_inverses_are_consistent() {
        for m in 3..=8u32 {
            let ideal = crate::helix::ideal_helix(m).unwrap();
            for dr in [0.05, 0.2, 0.6] {
                let r = ideal.radius + dr;
                let h = min_height(m, r).unwrap();
                let r_back = min_radius(m, h).unwrap();
                assert!((r_back - r).abs() < 1e-3, "m={m} r={r} back={r_back}");
            }
        }
    }

    #[test]
    fn fit_passes_near_ideal_point() {
        let fit = FitModel::default();
        let y = fit.y_of_x(0.132).unwrap();
        assert!((y - 0.828).abs() / 0.828 < 0.03, "y={y}");
    }

    #[test]
    fn fit_tracks_exact_solver_for_six_strands() {
        let fit = FitModel::default();
        let ideal = crate::helix::ideal_helix(6).unwrap();
        let mut r = ideal.radius - 0.2;
        while r <= ideal.radius + 1.0 {
            let exact = min_height(6, r).unwrap();
            let approx = fit.fit_height(6, r).unwrap();
            assert!((approx - exact).abs() / exact < 0.02, "r={r}");
            r += 0.1;
        }
    }

    #[test]
    fn fit_round_trip_stays_within_fit_error() {
        let fit = FitModel::default();
        let mut x = 0.05;
        while x <= 1.0 {
            let y = fit.y_of_x(x).unwrap();
            let x_back = fit.x_of_y(y).unwrap();
            assert!((x_back - x).abs() / x < 0.03, "x={x} back={x_back}");
            x += 0.05;
        }
    }

    #[test]
    fn fit_rejects_out_of_domain() {
        let fit = FitModel::default();
        assert!(fit.fit_height(4, planar_min_radius(4)).is_err());
        assert!(fit.fit_radius(4, 8.0).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn feasibility_is_monotone(m in 2u32..9, dr in 0.0f64..1.5, dh in 0.0f64..4.0) {
            let ideal = crate::helix::ideal_helix(m).unwrap();
            let (r, h) = (ideal.radius, ideal.height);
            prop_assert!(shell_feasible(m, r, h, 2.0));
            prop_assert!(shell_feasible(m, r + dr, h + dh, 2.0));
        }

        #[test]
        fn min_height_monotone_in_radius(m in 2u32..9, d in 0.01f64..2.0) {
            let r0 = planar_min_radius(m) + 0.15;
            let h0 = min_height(m, r0).unwrap();
            let h1 = min_height(m, r0 + d).unwrap();
            prop_assert!(h1 <= h0 + 1e-6);
        }

        #[test]
        fn fast_pair_scan_matches_vertex_pairs(
            m in 2u32..8,
            radius in 1.2f64..6.0,
            height in 8.0f64..40.0,
        ) {
            prop_assume!(radius >= planar_min_radius(m) * 0.9);
            let dphase = TAU / m as f64;
            let disc = Discretization { verts_per_turn: 120, margin_turns: 0.1 };
            let fast = helix_pair_min_distance(radius, height, dphase, disc);
            let n_margin = (disc.margin_turns * disc.verts_per_turn as f64).ceil() as usize;
            let total = disc.verts_per_turn + 2 * n_margin + 1;
            let theta0 = -(n_margin as f64) * TAU / disc.verts_per_turn as f64;
            let sample = |phase: f64| {
                let vertices = (0..total)
                    .map(|i| {
                        let theta = theta0 + TAU * i as f64 / disc.verts_per_turn as f64;
                        HelixSpec { radius, height, phase, turns: 1.0 }.point(theta)
                    })
                    .collect();
                Polyline3::new(vertices, false)
            };
            let slow = min_distance(&sample(0.0), &sample(dphase));
            prop_assert!((fast - slow).abs() < 1e-9);
        }
    }
}
