//! Hypercube diagrams: four marking families in the `n^4` lattice.
//!
//! Axes are indexed `w = 0, x = 1, y = 2, z = 3` and families
//! `W = 0, X = 1, Y = 2, Z = 3`. Family `f` is joined to family `f + 1`
//! (cyclically) by a segment parallel to axis `f`, so the two markings share
//! every other coordinate.

mod schematic;

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cube::{right_angle_vertex, CubeDiagram, CubeError, CubePlane};
use crate::grid::GridDiagram;

pub use schematic::{parse_schematic, render_schematic};

pub type Point4 = [usize; 4];

pub const FAMILY: [char; 4] = ['W', 'X', 'Y', 'Z'];
pub const AXIS: [char; 4] = ['w', 'x', 'y', 'z'];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    W,
    X,
    Y,
    Z,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::W, Family::X, Family::Y, Family::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Family {
        Family::ALL[i % 4]
    }

    pub fn glyph(self) -> char {
        FAMILY[self.index()]
    }
}

/// The four planes onto which a hypercube projects as grid diagrams.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HyperPlane {
    Wx,
    Yz,
    Xy,
    Zw,
}

impl HyperPlane {
    pub const ALL: [HyperPlane; 4] = [HyperPlane::Wx, HyperPlane::Yz, HyperPlane::Xy, HyperPlane::Zw];

    pub fn name(self) -> &'static str {
        match self {
            HyperPlane::Wx => "wx",
            HyperPlane::Yz => "yz",
            HyperPlane::Xy => "xy",
            HyperPlane::Zw => "zw",
        }
    }

    /// Families of the markings starting the first-axis and second-axis
    /// segments of this projection.
    pub fn segment_families(self) -> (Family, Family) {
        match self {
            HyperPlane::Wx => (Family::W, Family::X),
            HyperPlane::Yz => (Family::Y, Family::Z),
            HyperPlane::Xy => (Family::X, Family::Y),
            HyperPlane::Zw => (Family::Z, Family::W),
        }
    }
}

impl std::str::FromStr for HyperPlane {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        HyperPlane::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| format!("unknown plane {s:?} (expected wx, yz, xy or zw)"))
    }
}

/// The axis collapsed when passing to a 3-dimensional cube structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CollapseAxis {
    /// Merge each W-X pair into an X marking: `C_xyz`.
    W,
    /// Merge each Y-Z pair into a Z marking: `C_wxz`.
    Y,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HypercubeError {
    #[error("expected {expected} {family} markings, found {found}")]
    Length {
        family: char,
        expected: usize,
        found: usize,
    },
    #[error("size must be positive")]
    Empty,
    #[error("{family} marking {index} has a coordinate outside 0..{size}")]
    OutOfRange {
        family: char,
        index: usize,
        size: usize,
    },
    #[error("{axis}-level {level} holds {count} {family} markings")]
    CubeCountViolation {
        axis: char,
        level: usize,
        family: char,
        count: usize,
    },
    #[error("{first} marking {first_index} and {second} marking {second_index} occupy the same cell")]
    SharedCell {
        first: char,
        first_index: usize,
        second: char,
        second_index: usize,
    },
    #[error("cube {axis}={level} has {count} flats with three markings")]
    FlatCountViolation { axis: char, level: usize, count: usize },
    #[error("{flat}-flat at {fixed:?}: markings do not form a right angle")]
    RightAngleViolation { flat: String, fixed: [(char, usize); 2] },
    #[error("{flat}-flat at {fixed:?}: vertex is {found}, which does not match the flat")]
    VertexLabelViolation {
        flat: String,
        fixed: [(char, usize); 2],
        found: char,
    },
    #[error("{family} marking {index} has no partner along the {axis}-axis")]
    UnpairedMarking { family: char, index: usize, axis: char },
    #[error("crossing condition fails in G_{}: {first:?} over {second:?}", plane.name())]
    CrossingViolation {
        plane: HyperPlane,
        first: (Family, usize),
        second: (Family, usize),
    },
    #[error("hyperlink chain starting at W{0} does not close")]
    OpenChain(usize),
    #[error("cube projection failed: {0}")]
    Cube(#[from] CubeError),
    #[error("malformed schematic: {0}")]
    MalformedSchematic(String),
}

/// Raw marking data, not necessarily valid.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Markings {
    pub size: usize,
    #[serde(rename = "W")]
    pub w: Vec<Point4>,
    #[serde(rename = "X")]
    pub x: Vec<Point4>,
    #[serde(rename = "Y")]
    pub y: Vec<Point4>,
    #[serde(rename = "Z")]
    pub z: Vec<Point4>,
}

impl Markings {
    pub fn from_families(size: usize, fams: [Vec<Point4>; 4]) -> Self {
        let [w, x, y, z] = fams;
        Markings { size, w, x, y, z }
    }

    pub fn family(&self, f: Family) -> &[Point4] {
        match f {
            Family::W => &self.w,
            Family::X => &self.x,
            Family::Y => &self.y,
            Family::Z => &self.z,
        }
    }

    pub fn family_mut(&mut self, f: Family) -> &mut Vec<Point4> {
        match f {
            Family::W => &mut self.w,
            Family::X => &mut self.x,
            Family::Y => &mut self.y,
            Family::Z => &mut self.z,
        }
    }

    pub fn families(&self) -> [&[Point4]; 4] {
        [&self.w, &self.x, &self.y, &self.z]
    }

    /// Markings with each family sorted, for comparisons up to relabeling.
    pub fn canonical(&self) -> Markings {
        let mut m = self.clone();
        for f in Family::ALL {
            m.family_mut(f).sort_unstable();
        }
        m
    }

    /// Checks the marking conditions and returns the segment pairing.
    pub fn check_marking_conditions(&self) -> Result<Pairing, HypercubeError> {
        let n = self.size;
        if n == 0 {
            return Err(HypercubeError::Empty);
        }
        let fams = self.families();
        for (f, m) in fams.iter().enumerate() {
            if m.len() != n {
                return Err(HypercubeError::Length { family: FAMILY[f], expected: n, found: m.len() });
            }
            if let Some(index) = m.iter().position(|p| p.iter().any(|&c| c >= n)) {
                return Err(HypercubeError::OutOfRange { family: FAMILY[f], index, size: n });
            }
        }
        for axis in 0..4 {
            for (f, m) in fams.iter().enumerate() {
                let mut count = vec![0usize; n];
                m.iter().for_each(|p| count[p[axis]] += 1);
                if let Some(level) = count.iter().position(|&c| c != 1) {
                    return Err(HypercubeError::CubeCountViolation {
                        axis: AXIS[axis],
                        level,
                        family: FAMILY[f],
                        count: count[level],
                    });
                }
            }
        }
        let mut cells = std::collections::HashMap::with_capacity(4 * n);
        for (f, m) in fams.iter().enumerate() {
            for (i, p) in m.iter().enumerate() {
                if let Some(&(g, j)) = cells.get(p) {
                    return Err(HypercubeError::SharedCell {
                        first: FAMILY[g],
                        first_index: j,
                        second: FAMILY[f],
                        second_index: i,
                    });
                }
                cells.insert(*p, (f, i));
            }
        }
        self.check_flats()?;
        let next = [0, 1, 2, 3].map(|f| -> Result<Vec<usize>, HypercubeError> {
            let g = (f + 1) % 4;
            fams[f]
                .iter()
                .enumerate()
                .map(|(i, p)| {
                    fams[g]
                        .iter()
                        .position(|q| (0..4).all(|k| k == f || p[k] == q[k]))
                        .ok_or(HypercubeError::UnpairedMarking {
                            family: FAMILY[f],
                            index: i,
                            axis: AXIS[f],
                        })
                })
                .collect()
        });
        let [a, b, c, d] = next;
        Ok(Pairing { next: [a?, b?, c?, d?] })
    }

    fn check_flats(&self) -> Result<(), HypercubeError> {
        let n = self.size;
        let fams = self.families();
        // Index of the family-f marking at each level of each axis.
        let mut at = [[(); 4]; 4].map(|r| r.map(|_| vec![0usize; n]));
        for (f, m) in fams.iter().enumerate() {
            for (i, p) in m.iter().enumerate() {
                for axis in 0..4 {
                    at[f][axis][p[axis]] = i;
                }
            }
        }
        for a in 0..4 {
            for level in 0..n {
                let quad: [Point4; 4] = [0, 1, 2, 3].map(|f| fams[f][at[f][a][level]]);
                let mut three = 0;
                for b in (0..4).filter(|&b| b != a) {
                    for t in 0..n {
                        let inside: Vec<usize> = (0..4).filter(|&f| quad[f][b] == t).collect();
                        if inside.len() != 3 {
                            continue;
                        }
                        three += 1;
                        let free: Vec<usize> = (0..4).filter(|&k| k != a && k != b).collect();
                        let flat: String = free.iter().map(|&k| AXIS[k]).collect();
                        let mut fixed = [(AXIS[a], level), (AXIS[b], t)];
                        fixed.sort();
                        let pts = [0, 1, 2].map(|i| (quad[inside[i]][free[0]], quad[inside[i]][free[1]]));
                        let Some(v) = right_angle_vertex(pts) else {
                            return Err(HypercubeError::RightAngleViolation { flat, fixed });
                        };
                        let vertex = inside[v];
                        if flat_vertex(free[0], free[1]) != Some(vertex) {
                            return Err(HypercubeError::VertexLabelViolation {
                                flat,
                                fixed,
                                found: FAMILY[vertex],
                            });
                        }
                    }
                }
                if three != 2 {
                    return Err(HypercubeError::FlatCountViolation { axis: AXIS[a], level, count: three });
                }
            }
        }
        Ok(())
    }

    /// Full validation: marking conditions, then crossing conditions.
    pub fn validate(&self) -> Result<HypercubeDiagram, HypercubeError> {
        let pairing = self.check_marking_conditions()?;
        let h = HypercubeDiagram { marks: self.clone(), pairing };
        if let Some(v) = h.crossing_violations()?.into_iter().next() {
            return Err(v);
        }
        Ok(h)
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    /// Crossing violations of a marking-valid table.
    pub fn crossing_violations(&self) -> Result<Vec<HypercubeError>, HypercubeError> {
        let pairing = self.check_marking_conditions()?;
        HypercubeDiagram { marks: self.clone(), pairing }.crossing_violations()
    }
}

/// Vertex family required for a three-marking flat spanned by two axes.
fn flat_vertex(a: usize, b: usize) -> Option<usize> {
    match (a.min(b), a.max(b)) {
        (0, 3) => Some(0),
        (0, 1) => Some(1),
        (1, 2) => Some(2),
        (2, 3) => Some(3),
        _ => None,
    }
}

/// `next[f][i]`: index of the family `f + 1` marking joined to marking `i` of
/// family `f`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Pairing {
    pub next: [Vec<usize>; 4],
}

/// A hypercube diagram satisfying both marking and crossing conditions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Markings", into = "Markings")]
pub struct HypercubeDiagram {
    marks: Markings,
    pairing: Pairing,
}

impl TryFrom<Markings> for HypercubeDiagram {
    type Error = HypercubeError;

    fn try_from(m: Markings) -> Result<Self, Self::Error> {
        m.validate()
    }
}

impl From<HypercubeDiagram> for Markings {
    fn from(h: HypercubeDiagram) -> Self {
        h.marks
    }
}

/// Closed loops of the hyperlink, each listed by its W markings in order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hyperlink {
    pub components: Vec<Vec<usize>>,
    /// Component of each W marking.
    pub w_component: Vec<usize>,
}

impl Hyperlink {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// `n_i`: W markings per component.
    pub fn marking_counts(&self) -> Vec<usize> {
        self.components.iter().map(|c| c.len()).collect()
    }
}

impl HypercubeDiagram {
    pub fn new(m: Markings) -> Result<Self, HypercubeError> {
        m.validate()
    }

    pub fn size(&self) -> usize {
        self.marks.size
    }

    pub fn markings(&self) -> &Markings {
        &self.marks
    }

    pub fn family(&self, f: Family) -> &[Point4] {
        self.marks.family(f)
    }

    pub fn pairing(&self) -> &Pairing {
        &self.pairing
    }

    /// Index of the marking that follows `(f, i)` along the hyperlink.
    pub fn successor(&self, f: Family, i: usize) -> (Family, usize) {
        (Family::from_index(f.index() + 1), self.pairing.next[f.index()][i])
    }

    /// W marking that starts the chain through `(f, i)`.
    pub fn chain_start(&self, f: Family, i: usize) -> usize {
        let mut idx = i;
        for g in (0..f.index()).rev() {
            idx = self.pairing.next[g].iter().position(|&k| k == idx).expect("pairing is bijective");
        }
        idx
    }

    pub fn project_cube(&self, axis: CollapseAxis) -> Result<CubeDiagram, CubeError> {
        project_cube(&self.marks, axis)
    }

    pub fn project_grid(&self, plane: HyperPlane) -> GridDiagram {
        project_grid(&self.marks, plane).expect("valid hypercube projects to grids")
    }

    /// All crossing-condition violations over the four projections.
    pub fn crossing_violations(&self) -> Result<Vec<HypercubeError>, HypercubeError> {
        let c_xyz = project_cube(&self.marks, CollapseAxis::W)?;
        let c_wxz = project_cube(&self.marks, CollapseAxis::Y)?;
        let mut out = Vec::new();
        let checks = [
            (&c_xyz, CubePlane::Yz, HyperPlane::Yz),
            (&c_xyz, CubePlane::Xy, HyperPlane::Xy),
            (&c_wxz, CubePlane::Xy, HyperPlane::Wx),
            (&c_wxz, CubePlane::Zx, HyperPlane::Zw),
        ];
        for (cube, cp, hp) in checks {
            let (ff, sf) = hp.segment_families();
            for v in cube.check_crossings_in(cp) {
                out.push(HypercubeError::CrossingViolation {
                    plane: hp,
                    first: (ff, v.first_segment),
                    second: (sf, v.second_segment),
                });
            }
        }
        Ok(out)
    }

    pub fn trace_hyperlink(&self) -> Result<Hyperlink, HypercubeError> {
        trace(&self.marks, &self.pairing)
    }

    pub fn render_schematic(&self) -> String {
        render_schematic(&self.marks)
    }

    /// Hyperlink component of marking `(f, i)`.
    pub fn component_of(&self, link: &Hyperlink, f: Family, i: usize) -> usize {
        link.w_component[self.chain_start(f, i)]
    }

    /// For each row of the given projection, the hyperlink component of the
    /// segment in that row.
    pub fn row_components(&self, plane: HyperPlane, link: &Hyperlink) -> Vec<usize> {
        let (ff, _) = plane.segment_families();
        let row_axis = plane_axes(plane).1;
        let mut out = vec![0; self.size()];
        for (i, p) in self.family(ff).iter().enumerate() {
            out[p[row_axis]] = self.component_of(link, ff, i);
        }
        out
    }
}

/// `(column axis, row axis, depth axis)` of each grid projection.
pub fn plane_axes(plane: HyperPlane) -> (usize, usize, usize) {
    match plane {
        HyperPlane::Wx => (0, 1, 3),
        HyperPlane::Yz => (2, 3, 1),
        HyperPlane::Xy => (1, 2, 3),
        HyperPlane::Zw => (3, 0, 1),
    }
}

pub(crate) fn trace(m: &Markings, pairing: &Pairing) -> Result<Hyperlink, HypercubeError> {
    let n = m.size;
    let mut w_component = vec![usize::MAX; n];
    let mut components = Vec::new();
    for start in 0..n {
        if w_component[start] != usize::MAX {
            continue;
        }
        let id = components.len();
        let mut loop_ws = Vec::new();
        let mut i = start;
        for _ in 0..=n {
            if w_component[i] != usize::MAX {
                break;
            }
            w_component[i] = id;
            loop_ws.push(i);
            for f in 0..4 {
                i = pairing.next[f][i];
            }
        }
        if i != start {
            return Err(HypercubeError::OpenChain(start));
        }
        components.push(loop_ws);
    }
    Ok(Hyperlink { components, w_component })
}

/// Collapses one axis; see [`CollapseAxis`].
pub fn project_cube(m: &Markings, axis: CollapseAxis) -> Result<CubeDiagram, CubeError> {
    let pick = |pts: &[Point4], k: [usize; 3]| -> Vec<[usize; 3]> {
        pts.iter().map(|p| [p[k[0]], p[k[1]], p[k[2]]]).collect()
    };
    match axis {
        CollapseAxis::W => {
            let k = [1, 2, 3];
            CubeDiagram::new(m.size, pick(&m.x, k), pick(&m.y, k), pick(&m.z, k))
        }
        CollapseAxis::Y => {
            let k = [0, 1, 3];
            CubeDiagram::new(m.size, pick(&m.w, k), pick(&m.x, k), pick(&m.z, k))
        }
    }
}

/// Grid projection of marking data; requires only the marking conditions.
pub fn project_grid(m: &Markings, plane: HyperPlane) -> Result<GridDiagram, CubeError> {
    match plane {
        HyperPlane::Wx => project_cube(m, CollapseAxis::Y)?.project(CubePlane::Xy),
        HyperPlane::Zw => project_cube(m, CollapseAxis::Y)?.project(CubePlane::Zx),
        HyperPlane::Yz => project_cube(m, CollapseAxis::W)?.project(CubePlane::Yz),
        HyperPlane::Xy => project_cube(m, CollapseAxis::W)?.project(CubePlane::Xy),
    }
}

impl fmt::Display for HypercubeDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_schematic())
    }
}

/// Completes markings from the `(w, x)` positions of W and X and the
/// `(y, z)` positions of W, following the five-step construction. `w_wx[k]`
/// and `w_yz[k]` describe W marking `k`; `x_w[k]` is the w-coordinate of the
/// X marking joined to it.
pub fn complete_markings(w_wx: &[(usize, usize)], w_yz: &[(usize, usize)], x_w: &[usize]) -> Markings {
    let n = w_wx.len();
    let w: Vec<Point4> = (0..n).map(|k| [w_wx[k].0, w_wx[k].1, w_yz[k].0, w_yz[k].1]).collect();
    let x: Vec<Point4> = (0..n).map(|k| [x_w[k], w[k][1], w[k][2], w[k][3]]).collect();
    let mut w_by_col = vec![0; n];
    w.iter().enumerate().for_each(|(k, p)| w_by_col[p[0]] = k);
    let y: Vec<Point4> = x
        .iter()
        .map(|p| {
            let host = w[w_by_col[p[0]]];
            [p[0], host[1], p[2], p[3]]
        })
        .collect();
    let z: Vec<Point4> = y
        .iter()
        .map(|p| {
            let host = w[w_by_col[p[0]]];
            [p[0], p[1], host[2], p[3]]
        })
        .collect();
    Markings { size: n, w, x, y, z }
}

fn random_permutation<R: Rng>(n: usize, rng: &mut R) -> Vec<usize> {
    let mut v: Vec<usize> = (0..n).collect();
    v.shuffle(rng);
    v
}

/// Marking-valid candidate from the five-step construction. Crossing
/// conditions are not enforced.
pub fn generate_markings<R: Rng>(n: usize, rng: &mut R) -> Markings {
    assert!(n >= 2, "generation needs n >= 2");
    let w_col = random_permutation(n, rng);
    let w_wx: Vec<(usize, usize)> = (0..n).map(|x| (w_col[x], x)).collect();
    let ys = random_permutation(n, rng);
    let zs = random_permutation(n, rng);
    let w_yz: Vec<(usize, usize)> = (0..n).map(|k| (ys[k], zs[k])).collect();
    let x_w = loop {
        let p = random_permutation(n, rng);
        if (0..n).all(|k| p[k] != w_col[k]) {
            break p;
        }
    };
    complete_markings(&w_wx, &w_yz, &x_w)
}

pub fn generate_markings_seeded(n: usize, seed: u64) -> Markings {
    generate_markings(n, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Fixture diagrams.
pub mod examples {
    use super::*;

    /// The size-2 standard torus.
    pub fn standard_torus() -> HypercubeDiagram {
        Markings {
            size: 2,
            w: vec![[0, 0, 0, 0], [1, 1, 1, 1]],
            x: vec![[1, 0, 0, 0], [0, 1, 1, 1]],
            y: vec![[1, 1, 0, 0], [0, 0, 1, 1]],
            z: vec![[1, 1, 1, 0], [0, 0, 0, 1]],
        }
        .validate()
        .expect("standard torus is valid")
    }

    /// The printed size-8 Hopf-linked tori table with every coordinate
    /// shifted down by one half. It violates the marking conditions.
    pub fn hopf_table_as_printed() -> Markings {
        Markings {
            size: 8,
            w: vec![
                [3, 0, 7, 7], [5, 1, 0, 0], [6, 2, 3, 1], [2, 3, 1, 4],
                [7, 4, 2, 2], [4, 5, 4, 6], [1, 6, 5, 5], [0, 7, 6, 3],
            ],
            x: vec![
                [3, 2, 3, 1], [5, 3, 1, 4], [7, 4, 2, 2], [2, 7, 5, 5],
                [7, 5, 4, 6], [4, 0, 7, 7], [1, 7, 6, 3], [0, 1, 0, 0],
            ],
            y: vec![
                [3, 0, 3, 1], [5, 1, 1, 4], [6, 2, 2, 2], [2, 3, 5, 5],
                [7, 4, 4, 6], [4, 5, 7, 7], [1, 6, 6, 3], [0, 7, 0, 0],
            ],
            z: vec![
                [3, 0, 7, 1], [5, 1, 0, 4], [6, 2, 3, 2], [2, 3, 1, 5],
                [7, 4, 3, 6], [4, 5, 4, 7], [1, 6, 5, 3], [0, 7, 6, 0],
            ],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::examples::*;
    use super::*;

    #[test]
    fn standard_torus_is_valid() {
        let h = standard_torus();
        let link = h.trace_hyperlink().unwrap();
        assert_eq!(link.marking_counts(), vec![2]);
        for p in HyperPlane::ALL {
            let g = h.project_grid(p);
            assert_eq!(g.trace_components().len(), 1);
            assert!(g.resolve_crossings().is_empty());
        }
        let c = h.project_cube(CollapseAxis::W).unwrap();
        assert!(c.check_crossings().is_empty());
        assert_eq!(c.x_marks().len() + c.y_marks().len() + c.z_marks().len(), 6);
    }

    #[test]
    fn duplicate_w_column() {
        let mut m = standard_torus().markings().clone();
        m.w[1] = [1, 0, 0, 0];
        assert!(matches!(
            m.check_marking_conditions(),
            Err(HypercubeError::CubeCountViolation { family: 'W', .. })
        ));
    }

    #[test]
    fn printed_hopf_table_is_inconsistent() {
        let m = hopf_table_as_printed();
        assert_eq!(m.w[4], m.x[2]);
        assert!(m.check_marking_conditions().is_err());
    }

    #[test]
    fn generation_is_marking_valid() {
        for n in 2..=6 {
            for seed in 0..200 {
                let m = generate_markings_seeded(n, seed);
                let p = m.check_marking_conditions().unwrap_or_else(|e| panic!("n={n} seed={seed}: {e}"));
                let link = trace(&m, &p).unwrap();
                assert_eq!(link.marking_counts().iter().sum::<usize>(), n);
                assert!(project_cube(&m, CollapseAxis::W).is_ok());
                assert!(project_cube(&m, CollapseAxis::Y).is_ok());
            }
        }
    }

    #[test]
    fn size_two_generation_finds_standard_torus() {
        let target = standard_torus().markings().canonical();
        let hit = (0..64).any(|s| generate_markings_seeded(2, s).canonical() == target);
        assert!(hit);
    }

    #[test]
    fn components_match_projections() {
        let mut checked = 0;
        for seed in 0..3000 {
            let Ok(h) = generate_markings_seeded(4, seed).validate() else { continue };
            let k = h.trace_hyperlink().unwrap().len();
            assert_eq!(h.project_grid(HyperPlane::Wx).trace_components().len(), k);
            assert_eq!(h.project_grid(HyperPlane::Yz).trace_components().len(), k);
            checked += 1;
        }
        assert!(checked > 0);
    }
}
