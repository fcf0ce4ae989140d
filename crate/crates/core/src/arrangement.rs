//! Combinatorial and geometric optimization of multihelix shell arrangements.
//!
//! A multihelix is a central rod plus concentric shells of helices. Adjacent
//! shells sit 2 apart in radius, so for a fixed distribution of strands the
//! geometry reduces to one free variable: the inner-shell radius. The common
//! height is pinned by whichever shell is most constrained.

use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{self, Discretization, FitModel};
use crate::numeric::golden_min;

use std::f64::consts::TAU;

/// Strand counts per shell, innermost first; the central rod is implicit.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
pub struct Arrangement {
    pub shells: Vec<u32>,
}

impl Arrangement {
    pub fn new(shells: Vec<u32>) -> Result<Self> {
        if shells.is_empty() {
            return Err(Error::InvalidParameter("no shells".into()));
        }
        if shells.iter().any(|&m| m == 0) {
            return Err(Error::InvalidParameter(
                "every shell must hold at least one helix".into(),
            ));
        }
        Ok(Self { shells })
    }

    /// Parses `"1,4,5,2"` (leading 1 is the rod) into shells `[4,5,2]`.
    pub fn parse(text: &str) -> Result<Self> {
        let parts: Vec<u32> = text
            .split([',', '-'])
            .map(|p| {
                p.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::InvalidParameter(format!("bad strand count {p:?}")))
            })
            .collect::<Result<_>>()?;
        match parts.split_first() {
            Some((1, rest)) if !rest.is_empty() => Self::new(rest.to_vec()),
            _ => Err(Error::InvalidParameter(
                "arrangement must start with the rod entry 1".into(),
            )),
        }
    }

    /// Helix count (excludes the rod).
    pub fn n_helices(&self) -> u32 {
        self.shells.iter().sum()
    }

    /// Total strand count including the rod.
    pub fn q(&self) -> u32 {
        self.n_helices() + 1
    }

    pub fn shell_count(&self) -> usize {
        self.shells.len()
    }
}

impl fmt::Display for Arrangement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "1")?;
        for m in &self.shells {
            write!(f, "-{m}")?;
        }
        Ok(())
    }
}

/// A realized multihelix: arrangement plus concrete radii and height.
#[derive(Debug, Clone, serde::Serialize)]
pub struct MultihelixConfig {
    pub arrangement: Arrangement,
    pub inner_radius: f64,
    pub shell_radii: Vec<f64>,
    pub height: f64,
    pub total_length: f64,
    /// Shell whose minimum height pins the system height, when one does.
    pub height_setting_shell: Option<usize>,
    pub length_per_crossing: f64,
}

impl MultihelixConfig {
    /// Builds a config from explicit radii, recomputing the length.
    pub fn from_parts(
        shells: Vec<u32>,
        shell_radii: Vec<f64>,
        height: f64,
        height_setting_shell: Option<usize>,
    ) -> Result<Self> {
        let arrangement = Arrangement::new(shells)?;
        if shell_radii.len() != arrangement.shell_count() {
            return Err(Error::InvalidParameter(
                "radius list does not match shell list".into(),
            ));
        }
        let total_length = length_with_radii(&arrangement.shells, &shell_radii, height);
        let q = arrangement.q() as f64;
        Ok(Self {
            arrangement,
            inner_radius: shell_radii[0],
            shell_radii,
            height,
            total_length,
            height_setting_shell,
            length_per_crossing: total_length / (q * (q - 1.0)),
        })
    }

    pub fn q(&self) -> u32 {
        self.arrangement.q()
    }

    /// Checks every shell with the discrete clearance test.
    pub fn is_feasible(&self, disc: Discretization) -> bool {
        self.arrangement
            .shells
            .iter()
            .zip(&self.shell_radii)
            .all(|(&m, &r)| {
                geometry::shell_feasible_with(m, r, self.height, 2.0, disc)
                    && self.height >= 2.0 * m as f64 - 1e-9
            })
    }
}

/// Rod height plus per-shell helix lengths at the standard spacing-2 radii
/// `R, R+2, R+4, …`.
pub fn config_length(shells: &[u32], inner_radius: f64, height: f64) -> f64 {
    let mut total = height;
    for (i, &m) in shells.iter().enumerate() {
        let r = inner_radius + 2.0 * i as f64;
        total += m as f64 * (height * height + (TAU * r) * (TAU * r)).sqrt();
    }
    total
}

/// As `config_length` but with explicit per-shell radii.
pub fn length_with_radii(shells: &[u32], radii: &[f64], height: f64) -> f64 {
    let mut total = height;
    for (&m, &r) in shells.iter().zip(radii) {
        total += m as f64 * (height * height + (TAU * r) * (TAU * r)).sqrt();
    }
    total
}

/// Inner-radius bounds for geometric optimization.
const INNER_RADIUS_MIN: f64 = 2.0;
const INNER_RADIUS_MAX: f64 = 4.0;
const SEED_STEP: f64 = 0.05;

/// Minimum height over all shells at inner radius `r`, with the vertical
/// stacking floor. `None` when some shell cannot fit.
fn system_height(shells: &[u32], r: f64, disc: Discretization) -> Option<(f64, Option<usize>)> {
    let max_m = *shells.iter().max().unwrap();
    let mut height = 2.0 * max_m as f64;
    let mut setter = None;
    let mut best_req = f64::NEG_INFINITY;
    for (i, &m) in shells.iter().enumerate() {
        let ri = r + 2.0 * i as f64;
        let req = if m == 1 {
            2.0
        } else {
            match geometry::min_height_with(m, ri, disc) {
                Ok(h) => h,
                Err(_) => return None,
            }
        };
        if req >= best_req {
            best_req = req;
            setter = Some(i);
        }
        if req > height {
            height = req;
        }
    }
    // Report the pinned shell only when a clearance constraint (not the
    // stacking floor) is what binds; ties go to the outermost tied shell.
    if best_req + 1e-3 < height {
        setter = shells
            .iter()
            .enumerate()
            .rev()
            .max_by_key(|(_, &m)| m)
            .map(|(i, _)| i);
    }
    Some((height, setter))
}

/// Optimizes inner radius and height for a fixed arrangement.
///
/// The inner radius is searched on `[max(2, planar minimum), 4]` with a
/// seeded grid followed by golden-section refinement; the height is the
/// binding shell's minimum at each candidate radius.
pub fn optimize_geometry(arrangement: &Arrangement) -> Result<MultihelixConfig> {
    optimize_geometry_with(arrangement, Discretization::default())
}

pub fn optimize_geometry_with(
    arrangement: &Arrangement,
    disc: Discretization,
) -> Result<MultihelixConfig> {
    let shells = &arrangement.shells;
    let lo = INNER_RADIUS_MIN.max(geometry::planar_min_radius(shells[0]) + 1e-9);
    if lo > INNER_RADIUS_MAX + 1e-9 {
        return Err(Error::Infeasible(format!(
            "inner shell of {} helices needs radius {lo:.3} > {INNER_RADIUS_MAX}",
            shells[0]
        )));
    }
    for (i, &m) in shells.iter().enumerate() {
        if geometry::planar_min_radius(m) > INNER_RADIUS_MAX + 2.0 * i as f64 + 1e-9 {
            return Err(Error::Infeasible(format!(
                "shell {i} of {m} helices cannot fit below radius {}",
                INNER_RADIUS_MAX + 2.0 * i as f64
            )));
        }
    }
    let cost = |r: f64| -> f64 {
        match system_height(shells, r, disc) {
            Some((h, _)) => config_length(shells, r, h),
            None => f64::INFINITY,
        }
    };
    // Grid seed against local minima, then golden refinement in the winning
    // bracket.
    let mut best_r = lo;
    let mut best_l = cost(lo);
    let mut r = lo + SEED_STEP;
    while r < INNER_RADIUS_MAX + 1e-12 {
        let l = cost(r);
        if l < best_l {
            best_l = l;
            best_r = r;
        }
        r += SEED_STEP;
    }
    let l_top = cost(INNER_RADIUS_MAX);
    if l_top < best_l {
        best_l = l_top;
        best_r = INNER_RADIUS_MAX;
    }
    if !best_l.is_finite() {
        return Err(Error::Infeasible(format!(
            "no feasible inner radius for {arrangement}"
        )));
    }
    let a = (best_r - SEED_STEP).max(lo);
    let b = (best_r + SEED_STEP).min(INNER_RADIUS_MAX);
    let (r_opt, _) = golden_min(cost, a, b, 1e-6);
    let candidates = [r_opt, best_r, lo];
    let r_final = candidates
        .iter()
        .copied()
        .min_by(|x, y| cost(*x).total_cmp(&cost(*y)))
        .unwrap();
    let (height, setter) = system_height(shells, r_final, disc)
        .ok_or_else(|| Error::Infeasible(format!("no feasible height for {arrangement}")))?;
    let radii: Vec<f64> = (0..shells.len())
        .map(|i| r_final + 2.0 * i as f64)
        .collect();
    MultihelixConfig::from_parts(shells.clone(), radii, height, setter)
}

/// Options for the arrangement search.
#[derive(Debug, Clone)]
pub struct SearchOptions {
    /// Restrict to shell counts in this inclusive range.
    pub shell_count_window: Option<(usize, usize)>,
    /// How many optimized configurations to return.
    pub keep: usize,
    /// Screening margin: candidates within this factor of the best screened
    /// length are fully optimized.
    pub screen_margin: f64,
    /// Cap on fully optimized candidates.
    pub max_refine: usize,
    pub discretization: Discretization,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            shell_count_window: None,
            keep: 10,
            screen_margin: 1.04,
            max_refine: 800,
            discretization: Discretization::default(),
        }
    }
}

/// Fast length estimate from the tight-packing fits, for pruning only.
fn screen_length(shells: &[u32]) -> f64 {
    let fit = FitModel::default();
    let max_m = *shells.iter().max().unwrap() as f64;
    let mut best = f64::INFINITY;
    for &r in &[2.0, 2.5, 3.0, 3.5, 4.0] {
        let mut h = 2.0 * max_m;
        let mut ok = true;
        for (i, &m) in shells.iter().enumerate() {
            let ri = r + 2.0 * i as f64;
            if m == 1 {
                continue;
            }
            if geometry::planar_min_radius(m) >= ri {
                ok = false;
                break;
            }
            match fit.fit_height(m, ri) {
                Ok(hf) => h = h.max(hf),
                Err(_) => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            let l = config_length(shells, r, h);
            if l < best {
                best = l;
            }
        }
    }
    best
}

fn composition_possible(shells: &[u32]) -> bool {
    shells.iter().enumerate().all(|(i, &m)| {
        geometry::planar_min_radius(m) <= INNER_RADIUS_MAX + 2.0 * i as f64 + 1e-9
    })
}

/// Visits every composition of `n` whose first part is `first`.
fn visit_compositions(n: u32, first: u32, mut f: impl FnMut(&[u32])) {
    fn recurse(parts: &mut Vec<u32>, remaining: u32, f: &mut impl FnMut(&[u32])) {
        if remaining == 0 {
            f(parts);
            return;
        }
        for part in 1..=remaining {
            parts.push(part);
            recurse(parts, remaining - part, f);
            parts.pop();
        }
    }
    if first > n {
        return;
    }
    let mut parts = vec![first];
    recurse(&mut parts, n - first, &mut f);
}

/// Visits compositions of `n` into exactly `t` parts, first part fixed.
fn visit_compositions_t(n: u32, t: usize, mut f: impl FnMut(&[u32])) {
    fn recurse(parts: &mut Vec<u32>, remaining: u32, slots: usize, f: &mut impl FnMut(&[u32])) {
        if slots == 1 {
            parts.push(remaining);
            f(parts);
            parts.pop();
            return;
        }
        for first in 1..=(remaining - slots as u32 + 1) {
            parts.push(first);
            recurse(parts, remaining - first, slots - 1, f);
            parts.pop();
        }
    }
    if t == 0 || (n as usize) < t {
        return;
    }
    let mut parts = Vec::with_capacity(t);
    recurse(&mut parts, n, t, &mut f);
}

#[derive(Clone)]
struct ScreenBucket {
    best: f64,
    margin: f64,
    cap: usize,
    entries: Vec<(f64, Vec<u32>)>,
}

impl ScreenBucket {
    fn new(margin: f64, cap: usize) -> Self {
        Self {
            best: f64::INFINITY,
            margin,
            cap,
            entries: Vec::new(),
        }
    }

    fn offer(&mut self, l: f64, shells: &[u32]) {
        if !l.is_finite() || l > self.best * self.margin {
            return;
        }
        if l < self.best {
            self.best = l;
        }
        self.entries.push((l, shells.to_vec()));
        if self.entries.len() > 4 * self.cap {
            self.compact();
        }
    }

    fn compact(&mut self) {
        let cutoff = self.best * self.margin;
        self.entries.retain(|(l, _)| *l <= cutoff);
        if self.entries.len() > self.cap {
            self.entries
                .sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
            self.entries.truncate(self.cap);
        }
    }

    fn merge(mut self, other: ScreenBucket) -> ScreenBucket {
        self.best = self.best.min(other.best);
        self.entries.extend(other.entries);
        self.compact();
        self
    }
}

/// Enumerates arrangements of `n_helices`, optimizes the survivors of a fit
/// based screen, and returns them sorted by length (ties broken by
/// lexicographically smallest arrangement).
///
/// Above roughly 20 helices the full composition space is impractical and a
/// shell-count window must be supplied.
pub fn exhaustive_search(
    n_helices: u32,
    options: &SearchOptions,
) -> Result<Vec<MultihelixConfig>> {
    if n_helices == 0 {
        return Err(Error::InvalidParameter("need at least one helix".into()));
    }
    let margin = options.screen_margin;
    let cap = options.max_refine;
    let window = options.shell_count_window;
    let in_window = |len: usize| window.map_or(true, |(a, b)| len >= a && len <= b);

    let bucket = (1..=n_helices)
        .into_par_iter()
        .map(|first| {
            let mut local = ScreenBucket::new(margin, cap);
            match window {
                None => visit_compositions(n_helices, first, |shells| {
                    if in_window(shells.len()) && composition_possible(shells) {
                        local.offer(screen_length(shells), shells);
                    }
                }),
                Some((tmin, tmax)) => {
                    for t in tmin.max(1)..=tmax {
                        if t == 1 {
                            if first == n_helices {
                                let shells = [n_helices];
                                if composition_possible(&shells) {
                                    local.offer(screen_length(&shells), &shells);
                                }
                            }
                            continue;
                        }
                        if first as usize > n_helices as usize - t + 1 {
                            continue;
                        }
                        let mut prefix = vec![first];
                        visit_compositions_t(n_helices - first, t - 1, |rest| {
                            prefix.truncate(1);
                            prefix.extend_from_slice(rest);
                            if composition_possible(&prefix) {
                                local.offer(screen_length(&prefix), &prefix);
                            }
                        });
                    }
                }
            }
            local
        })
        .reduce(
            || ScreenBucket::new(margin, cap),
            |a, b| a.merge(b),
        );

    let mut candidates = bucket.entries;
    candidates.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
    candidates.dedup_by(|a, b| a.1 == b.1);
    candidates.truncate(cap);
    if candidates.is_empty() {
        return Err(Error::Infeasible(format!(
            "no feasible arrangement of {n_helices} helices in the window"
        )));
    }

    let mut configs: Vec<MultihelixConfig> = candidates
        .par_iter()
        .filter_map(|(_, shells)| {
            let arr = Arrangement::new(shells.clone()).ok()?;
            optimize_geometry_with(&arr, options.discretization).ok()
        })
        .collect();
    configs.sort_by(|a, b| {
        a.total_length
            .total_cmp(&b.total_length)
            .then_with(|| a.arrangement.shells.cmp(&b.arrangement.shells))
    });
    // Near-ties (within 1e-6) order by lexicographically smallest arrangement.
    let mut start = 0;
    while start < configs.len() {
        let mut end = start + 1;
        while end < configs.len()
            && configs[end].total_length - configs[start].total_length < 1e-6
        {
            end += 1;
        }
        configs[start..end].sort_by(|a, b| a.arrangement.shells.cmp(&b.arrangement.shells));
        start = end;
    }
    configs.truncate(options.keep);
    Ok(configs)
}

/// Two-shell reference construction needing no optimization: inner shell and
/// outer shell both at their wide-limit ideal radii, outer shell setting the
/// height. Valid for `n >= 5` (the outer shell must hold five more strands
/// than the inner for the radii to clear by 2).
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct TwoShellReference {
    pub n: u32,
    /// Outer strand count used (smallest admissible).
    pub m: u32,
    /// Length evaluated from the two-shell formula at `m`.
    pub length: f64,
    /// Closed form at the real-valued minimizer `(n+5)/2`.
    pub closed_form: f64,
}

/// Length of the two-shell reference at a given outer count `m`.
pub fn two_shell_reference_length(n: u32, m: u32) -> f64 {
    let n = n as f64;
    let m = m as f64;
    8.0_f64.sqrt()
        * (m + std::f64::consts::SQRT_2 * m * m + (n - m) * (m * m + (n - m) * (n - m)).sqrt())
}

pub fn reference_construction_a(n: u32) -> Result<TwoShellReference> {
    if n < 5 {
        return Err(Error::InvalidParameter(format!(
            "two-shell reference needs n >= 5, got {n}"
        )));
    }
    let m = (n + 5).div_ceil(2);
    let nf = n as f64;
    let closed_form = nf * nf
        + (10.0 + std::f64::consts::SQRT_2) * nf
        + (nf - 5.0) * (nf * nf + 25.0).sqrt()
        + 25.0
        + 50.0_f64.sqrt();
    Ok(TwoShellReference {
        n,
        m,
        length: two_shell_reference_length(n, m),
        closed_form,
    })
}

/// Result of optimizing the 4x4 square-grid bundle of 16 helices.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct GridOptimum {
    pub spacing: f64,
    pub height: f64,
    pub length: f64,
}

fn grid_offsets(spacing: f64) -> Vec<(f64, f64)> {
    let mut cs = Vec::with_capacity(16);
    for i in 0..4 {
        for j in 0..4 {
            cs.push(((i as f64 - 1.5) * spacing, (j as f64 - 1.5) * spacing));
        }
    }
    cs
}

/// Minimum vertex-pair distance between two bundle strands with cross-section
/// offsets `a` and `b`, twisted rigidly about the bundle axis.
fn grid_pair_min_distance(a: (f64, f64), b: (f64, f64), height: f64, disc: Discretization) -> f64 {
    let h = TAU / disc.verts_per_turn as f64;
    let k = ((1.0 + 2.0 * disc.margin_turns) * TAU / h).ceil() as i64;
    let c_axial = height / TAU;
    let mut best = f64::INFINITY;
    for step in -k..=k {
        let delta = h * step as f64;
        let (c, s) = (delta.cos(), delta.sin());
        // |a - b e^{iδ}|² + (H δ / 2π)²
        let bx = b.0 * c - b.1 * s;
        let by = b.0 * s + b.1 * c;
        let dx = a.0 - bx;
        let dy = a.1 - by;
        let axial = c_axial * delta;
        let d2 = dx * dx + dy * dy + axial * axial;
        if d2 < best {
            best = d2;
        }
    }
    best.sqrt()
}

/// Whether the 4x4 bundle clears itself at the given spacing and height.
pub fn grid_feasible(spacing: f64, height: f64, disc: Discretization) -> bool {
    let cs = grid_offsets(spacing);
    for i in 0..cs.len() {
        for j in i + 1..cs.len() {
            if grid_pair_min_distance(cs[i], cs[j], height, disc) < 2.0 - geometry::CLEARANCE_EPS
            {
                return false;
            }
        }
    }
    true
}

fn grid_min_height(spacing: f64, disc: Discretization) -> Option<f64> {
    let hi = 500.0;
    if !grid_feasible(spacing, hi, disc) {
        return None;
    }
    let lo = 2.0;
    if grid_feasible(spacing, lo, disc) {
        return Some(lo);
    }
    Some(crate::numeric::bisect_threshold(
        |h| grid_feasible(spacing, h, disc),
        lo,
        hi,
        1e-4,
    ))
}

fn grid_length_at(spacing: f64, disc: Discretization) -> Option<(f64, f64)> {
    let h = grid_min_height(spacing, disc)?;
    let len = grid_offsets(spacing)
        .iter()
        .map(|&(x, y)| {
            let r = (x * x + y * y).sqrt();
            (h * h + (TAU * r) * (TAU * r)).sqrt()
        })
        .sum();
    Some((len, h))
}

/// Optimizes the common spacing and height of 16 helices on a 4x4 grid.
pub fn square_grid_16() -> GridOptimum {
    let disc = Discretization::default();
    let cost = |s: f64| grid_length_at(s, disc).map_or(f64::INFINITY, |(l, _)| l);
    let mut best_s = 2.5;
    let mut best_l = f64::INFINITY;
    let mut s = 2.3;
    while s <= 3.4 {
        let l = cost(s);
        if l < best_l {
            best_l = l;
            best_s = s;
        }
        s += SEED_STEP;
    }
    let (s_opt, _) = golden_min(cost, best_s - SEED_STEP, best_s + SEED_STEP, 1e-5);
    let (length, height) = grid_length_at(s_opt, disc).expect("seeded bracket is feasible");
    GridOptimum {
        spacing: s_opt,
        height,
        length,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arrangement_parsing_and_display() {
        let a = Arrangement::parse("1,4,5,2").unwrap();
        assert_eq!(a.shells, vec![4, 5, 2]);
        assert_eq!(a.q(), 12);
        assert_eq!(a.to_string(), "1-4-5-2");
        assert!(Arrangement::parse("4,5,2").is_err());
        assert!(Arrangement::parse("1,0,2").is_err());
    }

    #[test]
    fn composition_visitor_counts() {
        for n in 1..=12u32 {
            let mut count = 0u64;
            for first in 1..=n {
                visit_compositions(n, first, |_| count += 1);
            }
            assert_eq!(count, 1 << (n - 1), "n={n}");
        }
    }

    #[test]
    fn composition_visitor_with_parts_counts() {
        // compositions of n into t parts = C(n-1, t-1)
        let mut count = 0u64;
        visit_compositions_t(10, 4, |_| count += 1);
        assert_eq!(count, 84);
    }

    #[test]
    fn single_shell_length_reduces_to_formula() {
        let l = config_length(&[7], 2.5, 20.0);
        let expect = 20.0 + 7.0 * (400.0_f64 + (TAU * 2.5) * (TAU * 2.5)).sqrt();
        assert!((l - expect).abs() < 1e-12);
    }

    #[test]
    fn rod_plus_one_optimum() {
        let cfg = optimize_geometry(&Arrangement::new(vec![1]).unwrap()).unwrap();
        assert!((cfg.total_length - 14.72454).abs() < 0.01);
        assert!((cfg.inner_radius - 2.0).abs() < 1e-6);
        assert!((cfg.height - 2.0).abs() < 1e-6);
    }

    #[test]
    fn two_shell_twelve_strand_optimum() {
        let cfg = optimize_geometry(&Arrangement::new(vec![5, 6]).unwrap()).unwrap();
        assert!((cfg.total_length - 297.45).abs() < 0.5, "{}", cfg.total_length);
        assert!((cfg.inner_radius - 2.25).abs() < 0.05, "{}", cfg.inner_radius);
    }

    #[test]
    fn three_shell_twelve_strand_optimum() {
        let cfg = optimize_geometry(&Arrangement::new(vec![4, 5, 2]).unwrap()).unwrap();
        assert!((cfg.total_length - 292.92).abs() < 0.5);
        assert!((cfg.inner_radius - 2.0).abs() < 0.05);
        assert_eq!(cfg.height_setting_shell, Some(1));
    }

    #[test]
    fn search_small_counts() {
        let best = exhaustive_search(1, &SearchOptions::default()).unwrap();
        assert_eq!(best[0].arrangement.shells, vec![1]);

        let best9 = exhaustive_search(9, &SearchOptions::default()).unwrap();
        assert_eq!(best9[0].arrangement.shells, vec![4, 5]);
        assert!((best9[0].total_length - 214.4321).abs() < 0.05);
    }

    #[test]
    fn three_shells_beat_two_at_eleven_helices() {
        let best = exhaustive_search(11, &SearchOptions::default()).unwrap();
        assert_eq!(best[0].arrangement.shells, vec![4, 5, 2]);
        let two_shell = optimize_geometry(&Arrangement::new(vec![5, 6]).unwrap()).unwrap();
        assert!(best[0].total_length < two_shell.total_length);
    }

    #[test]
    fn two_shell_reference_matches_closed_form_at_odd_counts() {
        for n in (5..=25u32).step_by(2) {
            let r = reference_construction_a(n).unwrap();
            assert!(
                (r.length - r.closed_form).abs() < 1e-9,
                "n={n}: {} vs {}",
                r.length,
                r.closed_form
            );
        }
    }

    #[test]
    fn two_shell_reference_minimizer_and_asymptote() {
        for n in 7..=25u32 {
            let r = reference_construction_a(n).unwrap();
            for m in [r.m.saturating_sub(1), r.m + 1] {
                if m > n - 1 || (m as i64) < (n as i64 - m as i64) + 5 {
                    continue;
                }
                assert!(
                    r.length <= two_shell_reference_length(n, m) + 1e-9,
                    "n={n} m={m}"
                );
            }
        }
        let r = reference_construction_a(1001).unwrap();
        let ratio = r.length / (2.0 * 1001.0 * 1001.0);
        assert!((1.0..=1.05).contains(&ratio), "ratio={ratio}");
        assert!(reference_construction_a(4).is_err());
    }

    #[test]
    fn grid_infeasible_at_spacing_two() {
        let disc = Discretization::default();
        assert!(grid_min_height(2.0, disc).is_none());
    }
}
