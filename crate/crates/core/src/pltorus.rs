//! The PL torus of a hypercube diagram.
//!
//! Every rectangle lies in a wx-, yz-, xy- or zw-plane, so it is the product
//! of a segment moving in `w` or `y` with a segment moving in `x` or `z`. The
//! w/y segments are those of the hyperlink projected to the (w, y) plane
//! (curve `C1`), the x/z segments those of its projection to the (x, z) plane
//! (curve `C2`), and the rectangle complex is the product `C1 x C2`: the YZ
//! rectangle in the yz-flat at `(w, x)` spans the y-segment of `C1` in column
//! `w` and the z-segment of `C2` in row `x`.
//!
//! Coordinates are doubled so that cell centres `c + 1/2` become odd
//! integers `2c + 1`.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypercube::{Family, HypercubeDiagram};

pub type Point = [i64; 4];

const W: usize = 0;
const X: usize = 1;
const Y: usize = 2;
const Z: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TorusError {
    #[error("edge {0:?} meets {1} faces")]
    NonManifoldEdge([Point; 2], usize),
    #[error("vertex {0:?} meets {1} edges and {2} faces")]
    NonManifoldVertex(Point, usize, usize),
    #[error("double point circle mixes horizontal and vertical segments")]
    UnclassifiableCircle,
    #[error("double point segments do not close into circles")]
    OpenCircle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RectKind {
    WX,
    YZ,
    XY,
    ZW,
}

/// A segment of `C1` or `C2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    /// Axis along which the segment runs.
    pub axis: usize,
    /// The other axis of its plane, held fixed.
    pub fixed_axis: usize,
    pub fixed: i64,
    pub from: i64,
    pub to: i64,
    /// Hyperlink component.
    pub component: usize,
}

impl Segment {
    fn lo(&self) -> i64 {
        self.from.min(self.to)
    }

    fn hi(&self) -> i64 {
        self.from.max(self.to)
    }

    fn direction(&self) -> i8 {
        if self.to > self.from {
            1
        } else {
            -1
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rectangle {
    pub kind: RectKind,
    pub lo: Point,
    pub hi: Point,
    /// Orientation relative to the plane's ordered basis.
    pub sign: i8,
    pub c1: usize,
    pub c2: usize,
}

impl Rectangle {
    fn corners(&self) -> [Point; 4] {
        let axes: Vec<usize> = (0..4).filter(|&a| self.lo[a] != self.hi[a]).collect();
        let (a, b) = (axes[0], axes[1]);
        let mk = |ua: bool, ub: bool| {
            let mut p = self.lo;
            if ua {
                p[a] = self.hi[a];
            }
            if ub {
                p[b] = self.hi[b];
            }
            p
        };
        [mk(false, false), mk(true, false), mk(true, true), mk(false, true)]
    }

    fn edges(&self) -> [[Point; 2]; 4] {
        let c = self.corners();
        [0, 1, 2, 3].map(|i| {
            let mut e = [c[i], c[(i + 1) % 4]];
            e.sort();
            e
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RectangleComplex {
    pub size: usize,
    pub c1: Vec<Segment>,
    pub c2: Vec<Segment>,
    pub rectangles: Vec<Rectangle>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellCounts {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub euler: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CircleClass {
    /// Constant in `x` and `z`: a horizontal line of the schematic.
    Horizontal,
    /// Constant in `w` and `y`: a vertical line of the schematic.
    Vertical,
}

/// Part of a double point circle: the intersection of two rectangles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DoubleSegment {
    pub rectangles: (usize, usize),
    pub from: Point,
    pub to: Point,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DoublePointCircle {
    pub class: CircleClass,
    pub segments: Vec<DoubleSegment>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TorusClass {
    EmbeddedLagrangian,
    Embedded,
    Immersed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub counts: CellCounts,
    pub circles: Vec<DoublePointCircle>,
    pub class: TorusClass,
}

fn d(c: usize) -> i64 {
    2 * c as i64 + 1
}

/// The projected hyperlink curves `C1` (w/y segments) and `C2` (x/z
/// segments), in hyperlink order.
fn curves(h: &HypercubeDiagram) -> (Vec<Segment>, Vec<Segment>) {
    let link = h.trace_hyperlink().expect("valid diagram");
    let (mut c1, mut c2) = (Vec::new(), Vec::new());
    for (comp, ws) in link.components.iter().enumerate() {
        for &k in ws {
            let w = h.family(Family::W)[k];
            let (_, xi) = h.successor(Family::W, k);
            let x = h.family(Family::X)[xi];
            let (_, yi) = h.successor(Family::X, xi);
            let y = h.family(Family::Y)[yi];
            let (_, zi) = h.successor(Family::Y, yi);
            let z = h.family(Family::Z)[zi];
            let (_, wn) = h.successor(Family::Z, zi);
            let w2 = h.family(Family::W)[wn];
            let seg = |axis, fixed_axis, fixed: usize, from: usize, to: usize| Segment {
                axis,
                fixed_axis,
                fixed: d(fixed),
                from: d(from),
                to: d(to),
                component: comp,
            };
            c1.push(seg(W, Y, w[Y], w[W], x[W]));
            c2.push(seg(X, Z, x[Z], x[X], y[X]));
            c1.push(seg(Y, W, y[W], y[Y], z[Y]));
            c2.push(seg(Z, X, z[X], z[Z], w2[Z]));
        }
    }
    (c1, c2)
}

pub fn build_rectangles(h: &HypercubeDiagram) -> RectangleComplex {
    let (c1, c2) = curves(h);
    let mut rectangles = Vec::with_capacity(c1.len() * c2.len());
    for (i, s) in c1.iter().enumerate() {
        for (j, t) in c2.iter().enumerate() {
            let mut lo = [0; 4];
            let mut hi = [0; 4];
            for seg in [s, t] {
                lo[seg.axis] = seg.lo();
                hi[seg.axis] = seg.hi();
                lo[seg.fixed_axis] = seg.fixed;
                hi[seg.fixed_axis] = seg.fixed;
            }
            let (kind, flip) = match (s.axis, t.axis) {
                (W, X) => (RectKind::WX, 1),
                (Y, Z) => (RectKind::YZ, 1),
                (Y, X) => (RectKind::XY, -1),
                _ => (RectKind::ZW, -1),
            };
            rectangles.push(Rectangle { kind, lo, hi, sign: flip * s.direction() * t.direction(), c1: i, c2: j });
        }
    }
    RectangleComplex { size: h.size(), c1, c2, rectangles }
}

/// Vertex, edge and face counts after identifying shared cells.
pub fn cw_euler_characteristic(rc: &RectangleComplex) -> Result<CellCounts, TorusError> {
    let mut edge_faces: HashMap<[Point; 2], usize> = HashMap::new();
    let mut vertex_faces: HashMap<Point, usize> = HashMap::new();
    for r in &rc.rectangles {
        for e in r.edges() {
            *edge_faces.entry(e).or_default() += 1;
        }
        for v in r.corners() {
            *vertex_faces.entry(v).or_default() += 1;
        }
    }
    let mut bad: Vec<_> = edge_faces.iter().filter(|(_, &c)| c != 2).collect();
    bad.sort();
    if let Some((&e, &c)) = bad.first() {
        return Err(TorusError::NonManifoldEdge(e, c));
    }
    let mut vertex_edges: HashMap<Point, usize> = HashMap::new();
    for e in edge_faces.keys() {
        for v in e {
            *vertex_edges.entry(*v).or_default() += 1;
        }
    }
    let mut vs: Vec<_> = vertex_faces.iter().collect();
    vs.sort();
    for (v, &faces) in vs {
        let edges = vertex_edges.get(v).copied().unwrap_or(0);
        if edges != 4 || faces != 4 {
            return Err(TorusError::NonManifoldVertex(*v, edges, faces));
        }
    }
    let (v, e, f) = (vertex_faces.len(), edge_faces.len(), rc.rectangles.len());
    Ok(CellCounts { vertices: v, edges: e, faces: f, euler: v as i64 - e as i64 + f as i64 })
}

/// Intersection of two rectangles when it is a segment through the interior
/// of both.
fn penetration(a: &Rectangle, b: &Rectangle) -> Option<(Point, Point)> {
    let mut lo = [0; 4];
    let mut hi = [0; 4];
    for k in 0..4 {
        lo[k] = a.lo[k].max(b.lo[k]);
        hi[k] = a.hi[k].min(b.hi[k]);
        if lo[k] > hi[k] {
            return None;
        }
    }
    if (0..4).filter(|&k| lo[k] < hi[k]).count() != 1 {
        return None;
    }
    // Along each spanning axis of each rectangle, the intersection must be
    // a strictly interior value or a proper range.
    for r in [a, b] {
        for k in (0..4).filter(|&k| r.lo[k] < r.hi[k]) {
            if lo[k] == hi[k] && (lo[k] == r.lo[k] || lo[k] == r.hi[k]) {
                return None;
            }
        }
    }
    Some((lo, hi))
}

fn classify_segment(from: &Point, to: &Point) -> Option<CircleClass> {
    let moves: Vec<usize> = (0..4).filter(|&k| from[k] != to[k]).collect();
    match moves.as_slice() {
        [X] | [Z] => Some(CircleClass::Vertical),
        [W] | [Y] => Some(CircleClass::Horizontal),
        _ => None,
    }
}

pub fn double_point_circles(rc: &RectangleComplex) -> Result<Vec<DoublePointCircle>, TorusError> {
    let rects = &rc.rectangles;
    let mut segs: Vec<DoubleSegment> = (0..rects.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            ((i + 1)..rects.len()).filter_map(move |j| {
                penetration(&rects[i], &rects[j]).map(|(from, to)| DoubleSegment { rectangles: (i, j), from, to })
            })
        })
        .collect();
    segs.sort_by_key(|s| (s.from, s.to));
    // Chain segments through shared endpoints.
    let mut at: HashMap<Point, Vec<usize>> = HashMap::new();
    for (i, s) in segs.iter().enumerate() {
        at.entry(s.from).or_default().push(i);
        at.entry(s.to).or_default().push(i);
    }
    if at.values().any(|v| v.len() != 2) {
        return Err(TorusError::OpenCircle);
    }
    let mut used = vec![false; segs.len()];
    let mut circles = Vec::new();
    for start in 0..segs.len() {
        if used[start] {
            continue;
        }
        let mut chain = Vec::new();
        let mut cur = start;
        let mut point = segs[start].from;
        loop {
            used[cur] = true;
            let s = segs[cur];
            let (from, to) = if s.from == point { (s.from, s.to) } else { (s.to, s.from) };
            chain.push(DoubleSegment { rectangles: s.rectangles, from, to });
            point = to;
            match at[&point].iter().find(|&&k| !used[k]) {
                Some(&k) => cur = k,
                None => break,
            }
        }
        if chain.last().map(|s| s.to) != Some(chain[0].from) {
            return Err(TorusError::OpenCircle);
        }
        let class = classify_segment(&chain[0].from, &chain[0].to).ok_or(TorusError::UnclassifiableCircle)?;
        let constant = |s: &DoubleSegment| match class {
            CircleClass::Vertical => (s.from[W], s.from[Y]) == (chain[0].from[W], chain[0].from[Y]),
            CircleClass::Horizontal => (s.from[X], s.from[Z]) == (chain[0].from[X], chain[0].from[Z]),
        };
        if !chain.iter().all(|s| classify_segment(&s.from, &s.to) == Some(class) && constant(s) && constant(&DoubleSegment { from: s.to, ..*s })) {
            return Err(TorusError::UnclassifiableCircle);
        }
        circles.push(DoublePointCircle { class, segments: chain });
    }
    Ok(circles)
}

fn segments_meet(a: &DoubleSegment, b: &DoubleSegment) -> bool {
    (0..4).all(|k| {
        let (alo, ahi) = (a.from[k].min(a.to[k]), a.from[k].max(a.to[k]));
        let (blo, bhi) = (b.from[k].min(b.to[k]), b.from[k].max(b.to[k]));
        alo.max(blo) <= ahi.min(bhi)
    })
}

pub fn classify_circles(circles: &[DoublePointCircle]) -> TorusClass {
    if circles.is_empty() {
        return TorusClass::EmbeddedLagrangian;
    }
    let (hor, ver): (Vec<_>, Vec<_>) = circles.iter().partition(|c| c.class == CircleClass::Horizontal);
    let meet = hor.iter().any(|h| {
        ver.iter().any(|v| h.segments.iter().any(|a| v.segments.iter().any(|b| segments_meet(a, b))))
    });
    if meet {
        TorusClass::Immersed
    } else {
        TorusClass::Embedded
    }
}

pub fn classify_report(h: &HypercubeDiagram) -> Result<ClassificationReport, TorusError> {
    let rc = build_rectangles(h);
    let counts = cw_euler_characteristic(&rc)?;
    let circles = double_point_circles(&rc)?;
    let class = classify_circles(&circles);
    Ok(ClassificationReport { counts, circles, class })
}

pub fn classify_torus(h: &HypercubeDiagram) -> TorusClass {
    classify_report(h).expect("valid diagrams give a closed PL torus").class
}

/// The symplectic form `dw^dy + dz^dx` on two tangent vectors.
pub fn omega(u: [f64; 4], v: [f64; 4]) -> f64 {
    (u[W] * v[Y] - u[Y] * v[W]) + (u[Z] * v[X] - u[X] * v[Z])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PatchKind {
    Edge,
    Vertex,
}

/// Edge rounding `E(s, t)` with its partial derivatives.
pub fn edge_patch(eps: f64, s: f64, t: f64) -> ([f64; 4], [f64; 4], [f64; 4]) {
    let (sn, cs) = (t / eps).sin_cos();
    let p = [s, eps - eps * cs, 0.0, eps - eps * sn];
    let ds = [1.0, 0.0, 0.0, 0.0];
    let dt = [0.0, sn, 0.0, -cs];
    (p, ds, dt)
}

/// Vertex rounding `V(s, t)` with its partial derivatives.
pub fn vertex_patch(eps: f64, s: f64, t: f64) -> ([f64; 4], [f64; 4], [f64; 4]) {
    let (ss, cs) = (s / eps).sin_cos();
    let (st, ct) = (t / eps).sin_cos();
    let p = [eps - eps * cs, eps - eps * ct, eps - eps * ss, eps - eps * st];
    let ds = [ss, 0.0, -cs, 0.0];
    let dt = [0.0, st, 0.0, -ct];
    (p, ds, dt)
}

/// Maximum `|omega|` over a `samples x samples` parameter grid, and the
/// maximum distance between the vertex patch edge `V(eps*pi/2, t)` and the
/// edge patch `E(eps, t)`.
pub fn lagrangian_patch_residual(kind: PatchKind, eps: f64, samples: usize) -> (f64, f64) {
    let quarter = eps * std::f64::consts::FRAC_PI_2;
    let steps = samples.max(2);
    let param = |i: usize, lo: f64, hi: f64| lo + (hi - lo) * i as f64 / (steps - 1) as f64;
    let mut residual = 0.0f64;
    let mut mismatch = 0.0f64;
    for i in 0..steps {
        for j in 0..steps {
            let (_, ds, dt) = match kind {
                PatchKind::Edge => edge_patch(eps, param(i, eps, 1.0 - eps), param(j, 0.0, quarter)),
                PatchKind::Vertex => vertex_patch(eps, param(i, 0.0, quarter), param(j, 0.0, quarter)),
            };
            residual = residual.max(omega(ds, dt).abs());
        }
        let t = param(i, 0.0, quarter);
        let (a, _, _) = vertex_patch(eps, quarter, t);
        let (b, _, _) = edge_patch(eps, eps, t);
        let gap = (0..4).map(|k| (a[k] - b[k]).abs()).fold(0.0, f64::max);
        mismatch = mismatch.max(gap);
    }
    (residual, mismatch)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hmoves::swap;
    use crate::hypercube::examples::standard_torus;
    use crate::hypercube::generate_markings_seeded;

    fn random_valid(n: usize, count: usize) -> Vec<HypercubeDiagram> {
        (0..u64::MAX).filter_map(|s| generate_markings_seeded(n, s).validate().ok()).take(count).collect()
    }

    #[test]
    fn standard_torus_complex() {
        let h = standard_torus();
        let rc = build_rectangles(&h);
        for kind in [RectKind::WX, RectKind::YZ, RectKind::XY, RectKind::ZW] {
            assert_eq!(rc.rectangles.iter().filter(|r| r.kind == kind).count(), 4);
        }
        let c = cw_euler_characteristic(&rc).unwrap();
        assert_eq!((c.vertices, c.edges, c.faces, c.euler), (16, 32, 16, 0));
        assert!(double_point_circles(&rc).unwrap().is_empty());
        assert_eq!(classify_torus(&h), TorusClass::EmbeddedLagrangian);
    }

    #[test]
    fn broken_complex_is_rejected() {
        let mut rc = build_rectangles(&standard_torus());
        rc.rectangles.pop();
        assert!(matches!(cw_euler_characteristic(&rc), Err(TorusError::NonManifoldEdge(_, 1))));
    }

    /// Oracle: circles are the crossings of the two projected curves, one
    /// circle per crossing and per component of the other curve.
    fn crossing_oracle(rc: &RectangleComplex) -> (usize, usize) {
        let crossings = |c: &[Segment]| {
            let mut k = 0;
            for a in c {
                for b in c {
                    if a.axis != b.axis
                        && a.lo() < b.fixed
                        && b.fixed < a.hi()
                        && b.lo() < a.fixed
                        && a.fixed < b.hi()
                        && a.axis < b.axis
                    {
                        k += 1;
                    }
                }
            }
            k
        };
        let comps = |c: &[Segment]| c.iter().map(|s| s.component).max().map_or(0, |m| m + 1);
        (crossings(&rc.c1) * comps(&rc.c2), crossings(&rc.c2) * comps(&rc.c1))
    }

    #[test]
    fn counts_and_circles_on_random_diagrams() {
        for n in 3..=5 {
            for h in random_valid(n, 15) {
                let rc = build_rectangles(&h);
                let c = cw_euler_characteristic(&rc).unwrap();
                let m = 4 * n * n;
                assert_eq!((c.vertices, c.edges, c.faces, c.euler), (m, 2 * m, m, 0));
                let circles = double_point_circles(&rc).unwrap();
                let vert = circles.iter().filter(|c| c.class == CircleClass::Vertical).count();
                let hor = circles.len() - vert;
                assert_eq!((vert, hor), crossing_oracle(&rc));
                let class = classify_circles(&circles);
                let expected = match (vert > 0, hor > 0) {
                    (false, false) => TorusClass::EmbeddedLagrangian,
                    (true, true) => TorusClass::Immersed,
                    _ => TorusClass::Embedded,
                };
                assert_eq!(class, expected);
                assert_eq!(classify_torus(&swap(&h)), class);
            }
        }
    }

    #[test]
    fn rectangles_are_lagrangian_and_patches_vanish() {
        let h = standard_torus();
        for r in build_rectangles(&h).rectangles {
            let axes: Vec<usize> = (0..4).filter(|&k| r.lo[k] < r.hi[k]).collect();
            let e = |k: usize| {
                let mut v = [0.0; 4];
                v[k] = 1.0;
                v
            };
            assert_eq!(omega(e(axes[0]), e(axes[1])), 0.0);
        }
        let (res, gap) = lagrangian_patch_residual(PatchKind::Edge, 0.1, 32);
        assert!(res < 1e-12 && gap < 1e-12);
        let (res, gap) = lagrangian_patch_residual(PatchKind::Vertex, 0.05, 32);
        assert!(res < 1e-12 && gap < 1e-12);
    }

    #[test]
    fn analytic_jacobians_match_finite_differences() {
        let eps = 0.1;
        let hstep = 1e-6;
        for (s, t) in [(0.3, 0.05), (0.12, 0.1), (0.5, 0.01)] {
            for f in [edge_patch, vertex_patch] {
                let (_, ds, dt) = f(eps, s, t);
                let (a, _, _) = f(eps, s + hstep, t);
                let (b, _, _) = f(eps, s - hstep, t);
                let (c, _, _) = f(eps, s, t + hstep);
                let (e, _, _) = f(eps, s, t - hstep);
                for k in 0..4 {
                    assert!(((a[k] - b[k]) / (2.0 * hstep) - ds[k]).abs() < 1e-6);
                    assert!(((c[k] - e[k]) / (2.0 * hstep) - dt[k]).abs() < 1e-6);
                }
            }
        }
    }
}
