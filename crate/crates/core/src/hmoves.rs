//! Hypercube moves: stabilization, commutation, swap and component swap.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grid::{GridDiagram, LineAxis};
use crate::hypercube::{Family, HyperPlane, HypercubeDiagram, HypercubeError, Markings, Point4};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    W,
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 4] = [Axis::W, Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        self as usize
    }
}

impl std::str::FromStr for Axis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "w" => Ok(Axis::W),
            "x" => Ok(Axis::X),
            "y" => Ok(Axis::Y),
            "z" => Ok(Axis::Z),
            _ => Err(format!("unknown axis {s:?} (expected w, x, y or z)")),
        }
    }
}

/// Marking families at which a stabilization may be centred.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum StabFamily {
    W,
    Y,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum Move {
    Stabilize { family: StabFamily, index: usize },
    Destabilize { family: StabFamily, index: usize },
    Commute { axis: Axis, level: usize },
    Swap,
    ComponentSwap { split: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error("marking index {index} out of range for size {size}")]
    BadIndex { index: usize, size: usize },
    #[error("no unit chain starts at marking {0}")]
    NoUnitChain(usize),
    #[error("commutation of {axis:?} levels {level} and {} is illegal: {reason}", level + 1)]
    IllegalCommutation {
        axis: Axis,
        level: usize,
        reason: HypercubeError,
    },
    #[error("commutation of {axis:?} levels {level} and {} interleaves strands in G_{}", level + 1, plane.name())]
    InterleavedCommutation {
        axis: Axis,
        level: usize,
        plane: HyperPlane,
    },
    #[error("diagram is not in block form at split {0}")]
    NotBlockForm(usize),
    #[error("move produced an invalid diagram: {0}")]
    Invalid(HypercubeError),
}

fn rebuild(m: Markings) -> Result<HypercubeDiagram, MoveError> {
    m.validate().map_err(MoveError::Invalid)
}

/// Inserts a unit chain at W marking `index`. Along each axis the new level
/// goes on the side toward which the original chain leaving W (W -> X -> Y
/// -> Z -> W) moves along that axis.
pub fn stabilize_w(h: &HypercubeDiagram, index: usize) -> Result<HypercubeDiagram, MoveError> {
    let n = h.size();
    if index >= n {
        return Err(MoveError::BadIndex { index, size: n });
    }
    let mut chain = [index; 5];
    let mut f = Family::W;
    for k in 1..5 {
        (f, chain[k]) = h.successor(f, chain[k - 1]);
    }
    let above = [0, 1, 2, 3].map(|a| {
        let from = h.family(Family::from_index(a))[chain[a]];
        let to = h.family(Family::from_index(a + 1))[chain[a + 1]];
        to[a] > from[a]
    });
    stabilize_w_sides(h, index, above)
}

/// Stabilization with an explicit choice, per axis, of whether the new
/// level goes above the old one.
#[doc(hidden)]
pub fn stabilize_w_sides(h: &HypercubeDiagram, index: usize, above: [bool; 4]) -> Result<HypercubeDiagram, MoveError> {
    let n = h.size();
    if index >= n {
        return Err(MoveError::BadIndex { index, size: n });
    }
    let m = h.markings();
    let w = m.w[index];
    let next_x = h.pairing().next[0][index];
    // The predecessor chain X_p -> Y_p -> Z_p -> W.
    let z_p = h.pairing().next[3].iter().position(|&k| k == index).expect("bijective");
    let y_p = h.pairing().next[2].iter().position(|&k| k == z_p).expect("bijective");
    let x_p = h.pairing().next[1].iter().position(|&k| k == y_p).expect("bijective");
    let y_n = h.pairing().next[1][next_x];
    let z_n = h.pairing().next[2][y_n];

    // Shift every coordinate above the split level.
    let shift = |p: Point4| -> Point4 {
        let mut q = p;
        for a in 0..4 {
            if q[a] > w[a] {
                q[a] += 1;
            }
        }
        q
    };
    let mut fams: [Vec<Point4>; 4] = [0, 1, 2, 3].map(|f| m.families()[f].iter().map(|&p| shift(p)).collect());
    // Side 0 of each axis holds the old neighbours before the new chain,
    // side 1 the new levels after it.
    let level = |a: usize, side: usize| w[a] + if above[a] { side } else { 1 - side };
    let (first, second) = (0, 1);
    let set = |fams: &mut [Vec<Point4>; 4], f: usize, i: usize, a: usize, side: usize| {
        fams[f][i][a] = level(a, side);
    };
    // w-axis
    for (f, i) in [(1, x_p), (2, y_p), (3, z_p), (0, index)] {
        set(&mut fams, f, i, 0, first);
    }
    // x-axis
    for (f, i) in [(2, y_p), (3, z_p), (0, index)] {
        set(&mut fams, f, i, 1, first);
    }
    set(&mut fams, 1, next_x, 1, second);
    // y-axis
    for (f, i) in [(3, z_p), (0, index)] {
        set(&mut fams, f, i, 2, first);
    }
    for (f, i) in [(1, next_x), (2, y_n)] {
        set(&mut fams, f, i, 2, second);
    }
    // z-axis
    set(&mut fams, 0, index, 3, first);
    for (f, i) in [(1, next_x), (2, y_n), (3, z_n)] {
        set(&mut fams, f, i, 3, second);
    }
    let wa = fams[0][index];
    let l = |a: usize, side: usize| level(a, side);
    let x_new = [l(0, second), wa[1], wa[2], wa[3]];
    let y_new = [l(0, second), l(1, second), wa[2], wa[3]];
    let z_new = [l(0, second), l(1, second), l(2, second), wa[3]];
    let w_new = [l(0, second), l(1, second), l(2, second), l(3, second)];
    fams[1].push(x_new);
    fams[2].push(y_new);
    fams[3].push(z_new);
    fams[0].push(w_new);
    rebuild(Markings::from_families(n + 1, fams))
}

/// W index of the start of a unit chain `W_a -> X -> Y -> Z -> W_b`, if the
/// chain at `index` is one.
fn unit_chain(h: &HypercubeDiagram, index: usize) -> Option<[usize; 5]> {
    let m = h.markings();
    let p = h.pairing();
    let xi = p.next[0][index];
    let yi = p.next[1][xi];
    let zi = p.next[2][yi];
    let wb = p.next[3][zi];
    if wb == index {
        return None;
    }
    let (a, b) = (m.w[index], m.w[wb]);
    let unit = (0..4).all(|k| a[k].abs_diff(b[k]) == 1);
    (unit && h.size() > 2).then_some([index, xi, yi, zi, wb])
}

/// Removes the unit chain starting at W marking `index`.
pub fn destabilize_w(h: &HypercubeDiagram, index: usize) -> Result<HypercubeDiagram, MoveError> {
    let n = h.size();
    if index >= n {
        return Err(MoveError::BadIndex { index, size: n });
    }
    let [wa, xi, yi, zi, wb] = unit_chain(h, index).ok_or(MoveError::NoUnitChain(index))?;
    let m = h.markings();
    let base: Point4 = [0, 1, 2, 3].map(|k| m.w[wa][k].min(m.w[wb][k]));
    let collapse = |p: Point4| -> Point4 { [0, 1, 2, 3].map(|k| if p[k] > base[k] { p[k] - 1 } else { p[k] }) };
    let drop = [wb, xi, yi, zi];
    let mut fams: [Vec<Point4>; 4] = Default::default();
    for (f, fam) in m.families().iter().enumerate() {
        for (i, &p) in fam.iter().enumerate() {
            if i == drop[f] {
                continue;
            }
            fams[f].push(if f == 0 && i == wa { base } else { collapse(p) });
        }
    }
    rebuild(Markings::from_families(n - 1, fams))
}

/// Indices of W markings at which [`destabilize_w`] succeeds.
pub fn destabilization_sites(h: &HypercubeDiagram) -> Vec<usize> {
    (0..h.size()).filter(|&i| destabilize_w(h, i).is_ok()).collect()
}

pub fn swap_markings(m: &Markings) -> Markings {
    let sw = |p: &Point4| [p[2], p[3], p[0], p[1]];
    let img = |v: &[Point4]| v.iter().map(sw).collect::<Vec<_>>();
    Markings { size: m.size, w: img(&m.y), x: img(&m.z), y: img(&m.w), z: img(&m.x) }
}

/// `SW(w, x, y, z) = (y, z, w, x)` with `W <-> Y` and `X <-> Z`.
pub fn swap(h: &HypercubeDiagram) -> HypercubeDiagram {
    swap_markings(h.markings()).validate().expect("swap preserves validity")
}

pub fn stabilize(h: &HypercubeDiagram, family: StabFamily, index: usize) -> Result<HypercubeDiagram, MoveError> {
    match family {
        StabFamily::W => stabilize_w(h, index),
        StabFamily::Y => Ok(swap(&stabilize_w(&swap(h), index)?)),
    }
}

pub fn destabilize(h: &HypercubeDiagram, family: StabFamily, index: usize) -> Result<HypercubeDiagram, MoveError> {
    match family {
        StabFamily::W => destabilize_w(h, index),
        StabFamily::Y => Ok(swap(&destabilize_w(&swap(h), index)?)),
    }
}

/// `after` differs from `before` by one legal grid commutation.
fn is_grid_commutation(before: &GridDiagram, after: &GridDiagram) -> bool {
    (0..before.size().saturating_sub(1)).any(|i| {
        [LineAxis::Row, LineAxis::Column]
            .into_iter()
            .any(|ax| before.swap_lines(i, ax) == *after && before.commutation_legal(i, ax) == Ok(true))
    })
}

/// Exchanges levels `level` and `level + 1` along `axis`. The result must
/// validate and every projection it changes must change by a legal grid
/// commutation.
pub fn commute(h: &HypercubeDiagram, axis: Axis, level: usize) -> Result<HypercubeDiagram, MoveError> {
    let n = h.size();
    if level + 1 >= n {
        return Err(MoveError::BadIndex { index: level, size: n });
    }
    let a = axis.index();
    let mut m = h.markings().clone();
    for f in Family::ALL {
        for p in m.family_mut(f).iter_mut() {
            if p[a] == level {
                p[a] = level + 1;
            } else if p[a] == level + 1 {
                p[a] = level;
            }
        }
    }
    let c = m.validate().map_err(|reason| MoveError::IllegalCommutation { axis, level, reason })?;
    for plane in HyperPlane::ALL {
        let (before, after) = (h.project_grid(plane), c.project_grid(plane));
        if before != after && !is_grid_commutation(&before, &after) {
            return Err(MoveError::InterleavedCommutation { axis, level, plane });
        }
    }
    Ok(c)
}

fn in_block(p: &Point4, split: usize, lower: bool) -> bool {
    p.iter().all(|&c| (c < split) == lower)
}

/// Swaps the component(s) in `[0, split)^4`, leaving the rest fixed.
pub fn component_swap(h: &HypercubeDiagram, split: usize) -> Result<HypercubeDiagram, MoveError> {
    let n = h.size();
    let m = h.markings();
    if split == 0 || split >= n {
        return Err(MoveError::NotBlockForm(split));
    }
    let block_form = m
        .families()
        .iter()
        .all(|fam| fam.iter().all(|p| in_block(p, split, true) || in_block(p, split, false)));
    if !block_form {
        return Err(MoveError::NotBlockForm(split));
    }
    let sw = |p: &Point4| [p[2], p[3], p[0], p[1]];
    let mut fams: [Vec<Point4>; 4] = Default::default();
    for (f, fam) in m.families().iter().enumerate() {
        for p in fam.iter() {
            if in_block(p, split, true) {
                fams[(f + 2) % 4].push(sw(p));
            } else {
                fams[f].push(*p);
            }
        }
    }
    rebuild(Markings::from_families(n, fams))
}

pub fn apply(h: &HypercubeDiagram, mv: Move) -> Result<HypercubeDiagram, MoveError> {
    match mv {
        Move::Stabilize { family, index } => stabilize(h, family, index),
        Move::Destabilize { family, index } => destabilize(h, family, index),
        Move::Commute { axis, level } => commute(h, axis, level),
        Move::Swap => Ok(swap(h)),
        Move::ComponentSwap { split } => component_swap(h, split),
    }
}

/// Every move that applies to `h`, in a fixed order.
pub fn legal_moves(h: &HypercubeDiagram) -> Vec<Move> {
    let n = h.size();
    let mut candidates = Vec::new();
    for family in [StabFamily::W, StabFamily::Y] {
        for index in 0..n {
            candidates.push(Move::Stabilize { family, index });
            candidates.push(Move::Destabilize { family, index });
        }
    }
    for axis in Axis::ALL {
        for level in 0..n.saturating_sub(1) {
            candidates.push(Move::Commute { axis, level });
        }
    }
    candidates.push(Move::Swap);
    for split in 1..n {
        candidates.push(Move::ComponentSwap { split });
    }
    candidates.into_par_iter().filter(|&mv| apply(h, mv).is_ok()).collect()
}
