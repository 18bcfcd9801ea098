//! Cube diagrams: three marking families in the `n x n x n` lattice.
//!
//! Markings are joined X -> Y parallel to the x-axis, Y -> Z parallel to the
//! y-axis and Z -> X parallel to the z-axis. The three planar projections are
//! handled uniformly by indexing families and axes cyclically: the projection
//! with index `p` uses axes `(p, p+1)` as the grid's first and second axis,
//! `p+2` as depth, family `p` for the segment starts and family `p+1` for the
//! grid's second marking.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grid::{AxisOrder, GridDiagram, GridError};

pub type Point3 = [usize; 3];

const FAMILY: [char; 3] = ['X', 'Y', 'Z'];
const AXIS: [char; 3] = ['x', 'y', 'z'];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CubeError {
    #[error("expected {expected} {family} markings, found {found}")]
    Length {
        family: char,
        expected: usize,
        found: usize,
    },
    #[error("{family} marking {index} has a coordinate outside 0..{size}")]
    OutOfRange {
        family: char,
        index: usize,
        size: usize,
    },
    #[error("{axis}-flat {level} holds {count} {family} markings")]
    FlatCountViolation {
        axis: char,
        level: usize,
        family: char,
        count: usize,
    },
    #[error("{axis}-flat {level}: markings do not form a right angle")]
    RightAngleViolation { axis: char, level: usize },
    #[error("{axis}-flat {level}: right angle has vertex {found}, expected {expected}")]
    VertexLabelViolation {
        axis: char,
        level: usize,
        expected: char,
        found: char,
    },
    #[error("the two grid projections do not come from one cube diagram")]
    InconsistentProjections,
    #[error("projection is not a grid diagram: {0}")]
    ProjectionNotGrid(#[from] GridError),
}

/// The three coordinate planes onto which a cube diagram projects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CubePlane {
    Xy,
    Yz,
    Zx,
}

impl CubePlane {
    pub const ALL: [CubePlane; 3] = [CubePlane::Xy, CubePlane::Yz, CubePlane::Zx];

    fn index(self) -> usize {
        match self {
            CubePlane::Xy => 0,
            CubePlane::Yz => 1,
            CubePlane::Zx => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "CubeJson", into = "CubeJson")]
pub struct CubeDiagram {
    size: usize,
    marks: [Vec<Point3>; 3],
    /// `next[f][i]`: index of the family `f+1` marking joined to marking `i`
    /// of family `f`.
    next: [Vec<usize>; 3],
}

#[derive(Serialize, Deserialize)]
struct CubeJson {
    size: usize,
    #[serde(rename = "X")]
    x: Vec<Point3>,
    #[serde(rename = "Y")]
    y: Vec<Point3>,
    #[serde(rename = "Z")]
    z: Vec<Point3>,
}

impl TryFrom<CubeJson> for CubeDiagram {
    type Error = CubeError;

    fn try_from(c: CubeJson) -> Result<Self, Self::Error> {
        CubeDiagram::new(c.size, c.x, c.y, c.z)
    }
}

impl From<CubeDiagram> for CubeJson {
    fn from(c: CubeDiagram) -> Self {
        let [x, y, z] = c.marks;
        CubeJson { size: c.size, x, y, z }
    }
}

/// A crossing in one projection where the first-axis segment is not below
/// the second-axis segment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CubeCrossingViolation {
    pub plane: CubePlane,
    /// Index (in its family) of the marking starting the first-axis segment.
    pub first_segment: usize,
    /// Index (in its family) of the marking starting the second-axis segment.
    pub second_segment: usize,
    pub first_depth: usize,
    pub second_depth: usize,
}

/// Position of the right-angle vertex among three in-plane points, if
/// exactly one point qualifies.
pub(crate) fn right_angle_vertex(pts: [(usize, usize); 3]) -> Option<usize> {
    let is_vertex = |v: usize| {
        let p = pts[v];
        let q = pts[(v + 1) % 3];
        let r = pts[(v + 2) % 3];
        let along_a = |s: (usize, usize)| s.1 == p.1 && s.0 != p.0;
        let along_b = |s: (usize, usize)| s.0 == p.0 && s.1 != p.1;
        (along_a(q) && along_b(r)) || (along_b(q) && along_a(r))
    };
    let mut found = (0..3).filter(|&v| is_vertex(v));
    match (found.next(), found.next()) {
        (Some(v), None) => Some(v),
        _ => None,
    }
}

impl CubeDiagram {
    pub fn new(
        size: usize,
        x: Vec<Point3>,
        y: Vec<Point3>,
        z: Vec<Point3>,
    ) -> Result<Self, CubeError> {
        let marks = [x, y, z];
        for (f, m) in marks.iter().enumerate() {
            if m.len() != size {
                return Err(CubeError::Length { family: FAMILY[f], expected: size, found: m.len() });
            }
            if let Some(index) = m.iter().position(|p| p.iter().any(|&c| c >= size)) {
                return Err(CubeError::OutOfRange { family: FAMILY[f], index, size });
            }
        }
        // Flat counts: every family is a permutation along every axis.
        for axis in 0..3 {
            for (f, m) in marks.iter().enumerate() {
                let mut count = vec![0usize; size];
                m.iter().for_each(|p| count[p[axis]] += 1);
                if let Some(level) = count.iter().position(|&c| c != 1) {
                    return Err(CubeError::FlatCountViolation {
                        axis: AXIS[axis],
                        level,
                        family: FAMILY[f],
                        count: count[level],
                    });
                }
            }
        }
        // Right angles: the x-flat vertex is Z, the y-flat vertex X, the
        // z-flat vertex Y, i.e. family `axis + 2`.
        let mut at = [vec![0usize; size], vec![0; size], vec![0; size]];
        for axis in 0..3 {
            for (f, m) in marks.iter().enumerate() {
                m.iter().enumerate().for_each(|(i, p)| at[f][p[axis]] = i);
            }
            for level in 0..size {
                let (a, b) = ((axis + 1) % 3, (axis + 2) % 3);
                let pts = [0, 1, 2].map(|f| {
                    let p = marks[f][at[f][level]];
                    (p[a], p[b])
                });
                let expected = (axis + 2) % 3;
                match right_angle_vertex(pts) {
                    None => {
                        return Err(CubeError::RightAngleViolation { axis: AXIS[axis], level })
                    }
                    Some(v) if v != expected => {
                        return Err(CubeError::VertexLabelViolation {
                            axis: AXIS[axis],
                            level,
                            expected: FAMILY[expected],
                            found: FAMILY[v],
                        })
                    }
                    Some(_) => {}
                }
            }
        }
        // Family f joins family f+1 along axis f, sharing the other two.
        let next = [0, 1, 2].map(|f| {
            let g = (f + 1) % 3;
            marks[f]
                .iter()
                .map(|p| {
                    marks[g]
                        .iter()
                        .position(|q| (0..3).all(|k| k == f || p[k] == q[k]))
                        .expect("right-angle flats pair every marking")
                })
                .collect()
        });
        Ok(CubeDiagram { size, marks, next })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn x_marks(&self) -> &[Point3] {
        &self.marks[0]
    }

    pub fn y_marks(&self) -> &[Point3] {
        &self.marks[1]
    }

    pub fn z_marks(&self) -> &[Point3] {
        &self.marks[2]
    }

    /// The grid diagram of one projection together with, per grid row, the
    /// index of the first-family marking starting that row's segment.
    fn projection_rows(&self, plane: CubePlane) -> (Vec<usize>, Vec<usize>, Vec<usize>) {
        let p = plane.index();
        let (a, b) = (p, (p + 1) % 3);
        let n = self.size;
        let mut x_col = vec![0; n];
        let mut y_col = vec![0; n];
        let mut starter = vec![0; n];
        for (i, m) in self.marks[p].iter().enumerate() {
            let s = self.marks[(p + 1) % 3][self.next[p][i]];
            x_col[m[b]] = m[a];
            y_col[m[b]] = s[a];
            starter[m[b]] = i;
        }
        (x_col, y_col, starter)
    }

    pub fn project(&self, plane: CubePlane) -> Result<GridDiagram, CubeError> {
        let (x_col, y_col, _) = self.projection_rows(plane);
        Ok(GridDiagram::new(self.size, x_col, y_col, AxisOrder::Natural)?)
    }

    /// Crossing conditions for all three projections.
    pub fn check_crossings(&self) -> Vec<CubeCrossingViolation> {
        CubePlane::ALL.iter().flat_map(|&p| self.check_crossings_in(p)).collect()
    }

    pub fn check_crossings_in(&self, plane: CubePlane) -> Vec<CubeCrossingViolation> {
        let p = plane.index();
        let (a, d) = (p, (p + 2) % 3);
        let Ok(grid) = self.project(plane) else {
            return Vec::new();
        };
        let (_, _, starter) = self.projection_rows(plane);
        let second = &self.marks[(p + 1) % 3];
        let mut by_column = vec![0; self.size];
        second.iter().enumerate().for_each(|(j, s)| by_column[s[a]] = j);
        grid.crossing_cells()
            .into_iter()
            .filter_map(|(row, column)| {
                let i = starter[row];
                let j = by_column[column];
                let first_depth = self.marks[p][i][d];
                let second_depth = second[j][d];
                (first_depth >= second_depth).then_some(CubeCrossingViolation {
                    plane,
                    first_segment: i,
                    second_segment: j,
                    first_depth,
                    second_depth,
                })
            })
            .collect()
    }

    /// Rebuilds a cube from its `xy` and `yz` projections.
    pub fn from_projections(g_xy: &GridDiagram, g_yz: &GridDiagram) -> Result<Self, CubeError> {
        let n = g_xy.size();
        let yz_x_row = g_yz.x_row();
        // Y: (x, y) from the second marking of G_xy, (y, z) from the first of G_yz.
        let y: Vec<Point3> = (0..n).map(|yy| [g_xy.y_col()[yy], yy, yz_x_row[yy]]).collect();
        let y_by_z: Vec<usize> = {
            let mut v = vec![0; n];
            y.iter().for_each(|p| v[p[2]] = p[0]);
            v
        };
        let z: Vec<Point3> = (0..n).map(|zz| [y_by_z[zz], g_yz.y_col()[zz], zz]).collect();
        let x: Vec<Point3> = y.iter().map(|p| [g_xy.x_col()[p[1]], p[1], p[2]]).collect();
        let c = CubeDiagram::new(n, x, y, z)?;
        if c.project(CubePlane::Xy)? != *g_xy || c.project(CubePlane::Yz)? != *g_yz {
            return Err(CubeError::InconsistentProjections);
        }
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::examples::unknot2;

    fn unknot_cube() -> CubeDiagram {
        CubeDiagram::new(
            2,
            vec![[0, 0, 0], [1, 1, 1]],
            vec![[1, 0, 0], [0, 1, 1]],
            vec![[1, 1, 0], [0, 0, 1]],
        )
        .unwrap()
    }

    fn all_points(n: usize) -> Vec<Point3> {
        let mut v = Vec::new();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    v.push([a, b, c]);
                }
            }
        }
        v
    }

    #[test]
    fn degenerate_single_cell() {
        assert!(matches!(
            CubeDiagram::new(1, vec![[0, 0, 0]], vec![[0, 0, 0]], vec![[0, 0, 0]]),
            Err(CubeError::RightAngleViolation { .. })
        ));
    }

    #[test]
    fn flat_count() {
        let r = CubeDiagram::new(
            2,
            vec![[0, 0, 0], [1, 1, 0]],
            vec![[1, 0, 0], [0, 1, 1]],
            vec![[1, 1, 0], [0, 0, 1]],
        );
        assert!(matches!(r, Err(CubeError::FlatCountViolation { axis: 'z', family: 'X', .. })));
    }

    #[test]
    fn unknot_cube_projects_to_unknot() {
        let c = unknot_cube();
        assert!(c.check_crossings().is_empty());
        for p in CubePlane::ALL {
            let g = c.project(p).unwrap();
            assert_eq!(g.trace_components().len(), 1);
            assert!(g.resolve_crossings().is_empty());
        }
        assert_eq!(c.project(CubePlane::Xy).unwrap(), unknot2());
    }

    /// Exhaustive oracle: every size-2 lift of the unknot grid that passes
    /// validation is crossing-free and projects back to the unknot grid.
    #[test]
    fn exhaustive_size_two_lifts() {
        let pts = all_points(2);
        let mut valid = 0;
        for &x0 in &pts {
            for &x1 in &pts {
                for &y0 in &pts {
                    for &y1 in &pts {
                        for &z0 in &pts {
                            for &z1 in &pts {
                                let Ok(c) = CubeDiagram::new(2, vec![x0, x1], vec![y0, y1], vec![z0, z1])
                                else {
                                    continue;
                                };
                                valid += 1;
                                assert!(c.check_crossings().is_empty());
                                for p in CubePlane::ALL {
                                    assert_eq!(c.project(p).unwrap().size(), 2);
                                }
                            }
                        }
                    }
                }
            }
        }
        assert!(valid > 0);
        // The hand-built cube is among them.
        assert!(pts.contains(&unknot_cube().x_marks()[0]));
    }

    /// Lift search: pair a grid with every grid of its size as the `yz`
    /// projection and keep the crossing-valid cubes.
    fn lifts(g: &GridDiagram) -> Vec<CubeDiagram> {
        use itertools::Itertools;
        let n = g.size();
        let perms: Vec<Vec<usize>> = (0..n).permutations(n).collect();
        let mut out = Vec::new();
        for a in &perms {
            for b in &perms {
                let Ok(h) = GridDiagram::new(n, a.clone(), b.clone(), AxisOrder::Natural) else {
                    continue;
                };
                if let Ok(c) = CubeDiagram::from_projections(g, &h) {
                    if c.check_crossings().is_empty() {
                        out.push(c);
                    }
                }
            }
        }
        out
    }

    #[test]
    fn trefoil_lift_projects_to_trefoil() {
        use crate::grid::examples::{trefoil5, trefoil5_short};
        // Five same-sign crossings cannot be resolved inside a size-5 cube.
        assert!(lifts(&trefoil5()).is_empty());
        let g = trefoil5_short();
        let found = lifts(&g);
        assert!(!found.is_empty());
        for c in &found {
            assert_eq!(c.project(CubePlane::Xy).unwrap(), g);
            assert!(CubePlane::ALL.iter().all(|&p| c.project(p).is_ok()));
        }
    }

    #[test]
    fn swapping_depth_levels_breaks_one_crossing() {
        let c = lifts(&crate::grid::examples::trefoil5_short()).remove(0);
        let cells = c.project(CubePlane::Xy).unwrap().crossing_cells();
        // Find a crossing whose two depths are adjacent levels and swap them.
        let (_, _, starter) = c.projection_rows(CubePlane::Xy);
        let mut flipped = None;
        for (row, column) in cells {
            let lo = c.marks[0][starter[row]][2];
            let hi = c.marks[1].iter().find(|p| p[0] == column).unwrap()[2];
            if hi == lo + 1 {
                let swap = |p: &Point3| {
                    let mut q = *p;
                    q[2] = if q[2] == lo { hi } else if q[2] == hi { lo } else { q[2] };
                    q
                };
                let [x, y, z] = c.marks.clone().map(|m| m.iter().map(swap).collect::<Vec<_>>());
                flipped = CubeDiagram::new(5, x, y, z).ok();
                break;
            }
        }
        let f = flipped.expect("some crossing sits on adjacent depth levels");
        let v = f.check_crossings_in(CubePlane::Xy);
        assert_eq!(v.len(), 1);
    }

    #[test]
    fn reconstruction_round_trip() {
        let c = unknot_cube();
        let r = CubeDiagram::from_projections(
            &c.project(CubePlane::Xy).unwrap(),
            &c.project(CubePlane::Yz).unwrap(),
        )
        .unwrap();
        assert_eq!(r.project(CubePlane::Zx).unwrap(), c.project(CubePlane::Zx).unwrap());
        let mut a = r.x_marks().to_vec();
        let mut b = c.x_marks().to_vec();
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }
}
