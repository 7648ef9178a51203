//! Semi-algebraic membership tests and slices of the local orbit space.

use alloc::vec::Vec;

use crate::exact::SQRT_3;
use crate::grad::{grad_local_closed, sigma_surfaces};
use crate::invariants::LocalInvariantPoint;
use crate::su3::BlochVector;

/// Signed slack of one inequality; positive means satisfied.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Slack {
    pub name: &'static str,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MembershipVerdict {
    pub inside: bool,
    pub slacks: Vec<Slack>,
    /// Constraints with `|slack| ≤ tol`.
    pub binding: Vec<&'static str>,
}

impl MembershipVerdict {
    pub fn from_slacks(slacks: Vec<Slack>, tol: f64) -> Self {
        let inside = slacks.iter().all(|s| s.value >= -tol);
        let binding = slacks.iter().filter(|s| s.value.abs() <= tol).map(|s| s.name).collect();
        MembershipVerdict { inside, slacks, binding }
    }

    pub fn slack(&self, name: &str) -> Option<f64> {
        self.slacks.iter().find(|s| s.name == name).map(|s| s.value)
    }

    /// Most violated (or least satisfied) constraint.
    pub fn worst(&self) -> Option<Slack> {
        self.slacks.iter().copied().min_by(|a, b| a.value.total_cmp(&b.value))
    }

    pub fn is_binding(&self, name: &str) -> bool {
        self.binding.contains(&name)
    }

    pub fn on_boundary(&self) -> bool {
        self.inside && !self.binding.is_empty()
    }
}

/// Positivity of `ρ(ξ)` as polynomial inequalities in ξ:
/// `ξ·ξ ≤ 1` and `0 ≤ ξ·ξ − (2/√3) dξξξ ≤ 1/3`.
pub fn is_physical_bloch(xi: &BlochVector, tol: f64) -> MembershipVerdict {
    let r2 = xi.norm_sqr();
    let q = r2 - 2.0 / SQRT_3 * xi.d_contraction();
    MembershipVerdict::from_slacks(
        alloc::vec![
            Slack { name: "pos1", value: 1.0 - r2 },
            Slack { name: "pos2_lower", value: q },
            Slack { name: "pos2_upper", value: 1.0 / 3.0 - q },
        ],
        tol,
    )
}

fn casimir_slacks(c2: f64, c3: f64) -> [Slack; 5] {
    let w = 3.0 * c2 - 2.0 * c3;
    [
        Slack { name: "c2_lower", value: c2 },
        Slack { name: "c2_upper", value: 1.0 - c2 },
        Slack { name: "det_lower", value: w },
        Slack { name: "det_upper", value: 1.0 - w },
        Slack { name: "discriminant", value: c2 * c2 * c2 - c3 * c3 },
    ]
}

/// Curvilinear triangle ABC in the `(c2, c3)` plane.
pub fn in_global_orbit_space(c2: f64, c3: f64, tol: f64) -> MembershipVerdict {
    MembershipVerdict::from_slacks(casimir_slacks(c2, c3).to_vec(), tol)
}

/// Local orbit space: Grad PSD, measured as `λ_min / (1 + tr)`, together with
/// the Casimir bounds and `f2, f3 ≥ 0`. The discriminant condition is implied
/// by PSD of the lower Grad block and is not listed separately.
pub fn in_local_orbit_space(p: &LocalInvariantPoint, tol: f64) -> MembershipVerdict {
    let g = grad_local_closed(p);
    let psd = g.min_eigenvalue() / (1.0 + g.trace().abs());
    let mut slacks = alloc::vec![Slack { name: "grad_psd", value: psd }];
    slacks.extend(casimir_slacks(p.c2, p.c3).into_iter().filter(|s| s.name != "discriminant"));
    slacks.push(Slack { name: "f2", value: p.f2 });
    slacks.push(Slack { name: "f3", value: p.f3() });
    MembershipVerdict::from_slacks(slacks, tol)
}

/// Admissible `c3` interval over `(f1, f2, c2)`: `[Σ−, Σ+]` cut by the
/// Casimir bounds and the discriminant. `None` when empty or `f3 < 0`.
pub fn c3_interval(f1: f64, f2: f64, c2: f64) -> Option<(f64, f64)> {
    if !(0.0..=1.0).contains(&c2) || f2 < 0.0 || c2 - f1 * f1 - f2 < 0.0 {
        return None;
    }
    let (s_lo, s_hi) = sigma_surfaces(f1, f2, c2)?;
    let cap = c2 * libm::sqrt(c2);
    let lo = s_lo.max((3.0 * c2 - 1.0) / 2.0).max(-cap);
    let hi = s_hi.min(1.5 * c2).min(cap);
    (lo <= hi).then_some((lo, hi))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SliceCell {
    pub f2: f64,
    pub c2: f64,
    pub c3_lo: f64,
    pub c3_hi: f64,
}

/// Cells of grid row `j` (fixed `c2` band) for an `n×n` grid over
/// `(f2, c2) ∈ [0, 1]²`. Cells whose center and corners disagree about
/// feasibility are split once into four strips along `f2`. Every cell of the
/// row sits at the band center `c2`, so the projection never leaves the
/// Casimir bounds at that `c2`.
pub fn slice_row(f1: f64, n: usize, j: usize) -> Vec<SliceCell> {
    let h = 1.0 / n as f64;
    let mut out = Vec::new();
    let push = |f2: f64, c2: f64, out: &mut Vec<SliceCell>| {
        if let Some((lo, hi)) = c3_interval(f1, f2, c2) {
            out.push(SliceCell { f2, c2, c3_lo: lo, c3_hi: hi });
        }
    };
    for i in 0..n {
        let (f2, c2) = ((i as f64 + 0.5) * h, (j as f64 + 0.5) * h);
        let center = c3_interval(f1, f2, c2).is_some();
        let corners = [(0.0, 0.0), (h, 0.0), (0.0, h), (h, h)]
            .iter()
            .filter(|(a, b)| c3_interval(f1, i as f64 * h + a, j as f64 * h + b).is_some())
            .count();
        let straddles = (center && corners < 4) || (!center && corners > 0);
        if straddles {
            for df in [-0.375, -0.125, 0.125, 0.375] {
                push(f2 + df * h, c2, &mut out);
            }
        } else if center {
            push(f2, c2, &mut out);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct SliceMesh {
    pub f1: f64,
    pub n: usize,
    pub cells: Vec<SliceCell>,
    /// Closed outline in the `(c2, c3)` plane: upper chain left to right, then
    /// lower chain right to left. Empty when no cell survives.
    pub projection: Vec<(f64, f64)>,
}

impl SliceMesh {
    pub fn from_cells(f1: f64, n: usize, cells: Vec<SliceCell>) -> Self {
        let projection = projection_outline(&cells, n);
        SliceMesh { f1, n, cells, projection }
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn projection_area(&self) -> f64 {
        polygon_area(&self.projection)
    }
}

/// Full `n×n` slice at fixed `f1`.
pub fn slice(f1: f64, n: usize) -> crate::Result<SliceMesh> {
    if n < 2 {
        return Err(crate::Error::InvalidGridSize(n));
    }
    let cells = (0..n).flat_map(|j| slice_row(f1, n, j)).collect();
    Ok(SliceMesh::from_cells(f1, n, cells))
}

/// Hull of the cell intervals per grid row, as `(row center c2, lo, hi)`
/// sorted by `c2`. Subcells count toward their parent row.
pub fn projection_columns(cells: &[SliceCell], n: usize) -> Vec<(f64, f64, f64)> {
    let h = 1.0 / n as f64;
    let mut rows: Vec<Option<(f64, f64)>> = alloc::vec![None; n];
    for c in cells {
        let j = ((c.c2 * n as f64) as usize).min(n - 1);
        rows[j] = Some(match rows[j] {
            Some((lo, hi)) => (lo.min(c.c3_lo), hi.max(c.c3_hi)),
            None => (c.c3_lo, c.c3_hi),
        });
    }
    rows.iter().enumerate().filter_map(|(j, r)| r.map(|(lo, hi)| ((j as f64 + 0.5) * h, lo, hi))).collect()
}

fn projection_outline(cells: &[SliceCell], n: usize) -> Vec<(f64, f64)> {
    let cols = projection_columns(cells, n);
    let mut poly: Vec<(f64, f64)> = cols.iter().map(|&(c2, _, hi)| (c2, hi)).collect();
    poly.extend(cols.iter().rev().map(|&(c2, lo, _)| (c2, lo)));
    poly
}

/// Shoelace area of a closed polygon.
pub fn polygon_area(poly: &[(f64, f64)]) -> f64 {
    if poly.len() < 3 {
        return 0.0;
    }
    let mut s = 0.0;
    for k in 0..poly.len() {
        let (x0, y0) = poly[k];
        let (x1, y1) = poly[(k + 1) % poly.len()];
        s += x0 * y1 - x1 * y0;
    }
    (s / 2.0).abs()
}

/// Boundary of triangle ABC with `m` points per curved edge, counterclockwise
/// from A: lower curve to B, line to C, upper curve back.
pub fn triangle_outline(m: usize) -> Vec<(f64, f64)> {
    let m = m.max(2);
    let mut out = Vec::with_capacity(3 * m);
    for k in 0..m {
        let c2 = 0.25 * k as f64 / m as f64;
        out.push((c2, -c2 * libm::sqrt(c2)));
    }
    for k in 0..m {
        let c2 = 0.25 + 0.75 * k as f64 / m as f64;
        out.push((c2, (3.0 * c2 - 1.0) / 2.0));
    }
    for k in 0..m {
        let c2 = 1.0 - k as f64 / m as f64;
        out.push((c2, c2 * libm::sqrt(c2)));
    }
    out
}

fn segment_distance(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 { 0.0 } else { (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0) };
    let (qx, qy) = (a.0 + t * dx - p.0, a.1 + t * dy - p.1);
    libm::sqrt(qx * qx + qy * qy)
}

fn distance_to_polygon(p: (f64, f64), poly: &[(f64, f64)]) -> f64 {
    (0..poly.len()).map(|k| segment_distance(p, poly[k], poly[(k + 1) % poly.len()])).fold(f64::INFINITY, f64::min)
}

/// Points along the closed polygon spaced at most `step` apart.
fn densify(poly: &[(f64, f64)], step: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for k in 0..poly.len() {
        let (a, b) = (poly[k], poly[(k + 1) % poly.len()]);
        let len = libm::hypot(b.0 - a.0, b.1 - a.1);
        let pieces = libm::ceil(len / step).max(1.0) as usize;
        for s in 0..pieces {
            let t = s as f64 / pieces as f64;
            out.push((a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1)));
        }
    }
    out
}

/// Symmetric Hausdorff distance between two polygon boundaries, sampled at
/// spacing `step`.
pub fn hausdorff_distance(a: &[(f64, f64)], b: &[(f64, f64)], step: f64) -> f64 {
    let one_way = |x: &[(f64, f64)], y: &[(f64, f64)]| {
        densify(x, step).into_iter().map(|p| distance_to_polygon(p, y)).fold(0.0, f64::max)
    };
    one_way(a, b).max(one_way(b, a))
}

/// Even-odd rule.
pub fn point_in_polygon(p: (f64, f64), poly: &[(f64, f64)]) -> bool {
    let mut inside = false;
    for k in 0..poly.len() {
        let (a, b) = (poly[k], poly[(k + 1) % poly.len()]);
        if (a.1 > p.1) != (b.1 > p.1) && p.0 < a.0 + (p.1 - a.1) * (b.0 - a.0) / (b.1 - a.1) {
            inside = !inside;
        }
    }
    inside
}

/// Largest distance by which a vertex of `inner` lies outside `outer`;
/// zero when every vertex is inside.
pub fn containment_excess(inner: &[(f64, f64)], outer: &[(f64, f64)]) -> f64 {
    inner.iter().filter(|&&p| !point_in_polygon(p, outer)).map(|&p| distance_to_polygon(p, outer)).fold(0.0, f64::max)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KeyPoint {
    pub name: &'static str,
    pub c2: f64,
    pub c3: f64,
}

/// A, B, C always; D and E are the ends of the Δ2 segment
/// `c3 = 3 f1 c2 − 4 f1³`, `c2 ≥ f1²` inside triangle ABC, when it meets it.
pub fn key_points(f1: f64) -> Vec<KeyPoint> {
    let mut out = alloc::vec![
        KeyPoint { name: "A", c2: 0.0, c3: 0.0 },
        KeyPoint { name: "B", c2: 0.25, c3: -0.125 },
        KeyPoint { name: "C", c2: 1.0, c3: 1.0 },
    ];
    if let Some((d, e)) = delta2_segment(f1) {
        out.push(KeyPoint { name: "D", c2: d.0, c3: d.1 });
        out.push(KeyPoint { name: "E", c2: e.0, c3: e.1 });
    }
    out
}

const SEGMENT_TOL: f64 = 1e-12;

fn delta2_segment(f1: f64) -> Option<((f64, f64), (f64, f64))> {
    let start = f1 * f1;
    if !(start <= 1.0) {
        return None;
    }
    let at = |c2: f64| (c2, 3.0 * f1 * c2 - 4.0 * f1 * f1 * f1);
    let inside = |c2: f64| {
        let (x, y) = at(c2);
        in_global_orbit_space(x, y, SEGMENT_TOL).inside
    };
    const SCAN: usize = 4096;
    let grid: Vec<f64> = (0..=SCAN).map(|k| start + (1.0 - start) * k as f64 / SCAN as f64).collect();
    let first = grid.iter().position(|&c| inside(c))?;
    let last = grid.iter().rposition(|&c| inside(c))?;
    let bisect = |mut good: f64, mut bad: f64| {
        for _ in 0..80 {
            let mid = 0.5 * (good + bad);
            if inside(mid) {
                good = mid;
            } else {
                bad = mid;
            }
        }
        good
    };
    let lo = if first == 0 { grid[0] } else { bisect(grid[first], grid[first - 1]) };
    let hi = if last == SCAN { grid[SCAN] } else { bisect(grid[last], grid[last + 1]) };
    Some((at(lo), at(hi)))
}
