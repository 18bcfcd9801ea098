//! Oriented planar grid diagrams.
//!
//! A diagram of size `n` is stored as two row-indexed permutations: `x_col[r]`
//! is the column of the X marking in row `r`, `y_col[r]` the column of the Y
//! marking. Markings live at cell centres `(c + 1/2, r + 1/2)`; everything here
//! works with the integer cell indices.
//!
//! Segments run X -> Y along the row (parallel to the first axis) and
//! Y -> X along the column (parallel to the second axis). With the natural
//! axis order the column segments are the over-strands; reversing the order
//! mirrors the link.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GridError {
    #[error("expected {expected} entries in {field}, found {found}")]
    Length {
        field: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("grid size must be positive")]
    EmptyGrid,
    #[error("{family} marking column {column} out of range in row {row}")]
    OutOfRange {
        family: char,
        row: usize,
        column: usize,
    },
    #[error("column {column} holds two {family} markings (rows {first} and {second})")]
    DuplicateInColumn {
        family: char,
        column: usize,
        first: usize,
        second: usize,
    },
    #[error("row {row} holds more than one {family} marking")]
    DuplicateInRow { family: char, row: usize },
    #[error("row {row}: X and Y markings share cell column {column}")]
    SharedCell { row: usize, column: usize },
    #[error("row {0} does not exist")]
    InvalidRow(usize),
    #[error("column {0} does not carry a stabilization corner")]
    NotDestabilizable(usize),
    #[error("component index {index} out of range ({count} components)")]
    BadComponentIndex { index: usize, count: usize },
    #[error("linking number needs two distinct components")]
    SameComponent,
    #[error("{axis:?} {index} and {next} have interleaved segments")]
    IllegalCommutation {
        axis: LineAxis,
        index: usize,
        next: usize,
    },
    #[error("commutation index {0} has no successor")]
    CommutationOutOfRange(usize),
}

/// Which of the two axes carries the over-strands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AxisOrder {
    /// First axis then second axis (`G_xy`): column segments cross over.
    #[serde(rename = "xy")]
    Natural,
    /// Reversed order (`G_yx`): row segments cross over. This is the mirror.
    #[serde(rename = "yx")]
    Reversed,
}

impl AxisOrder {
    pub fn flipped(self) -> Self {
        match self {
            AxisOrder::Natural => AxisOrder::Reversed,
            AxisOrder::Reversed => AxisOrder::Natural,
        }
    }
}

/// Rows or columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LineAxis {
    Row,
    Column,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GridJson", into = "GridJson")]
pub struct GridDiagram {
    x_col: Vec<usize>,
    y_col: Vec<usize>,
    axis_order: AxisOrder,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct GridJson {
    size: usize,
    x_col: Vec<usize>,
    y_col: Vec<usize>,
    #[serde(default = "natural")]
    axis_order: AxisOrder,
}

fn natural() -> AxisOrder {
    AxisOrder::Natural
}

impl TryFrom<GridJson> for GridDiagram {
    type Error = GridError;

    fn try_from(g: GridJson) -> Result<Self, Self::Error> {
        GridDiagram::new(g.size, g.x_col, g.y_col, g.axis_order)
    }
}

impl From<GridDiagram> for GridJson {
    fn from(g: GridDiagram) -> Self {
        GridJson {
            size: g.size(),
            x_col: g.x_col,
            y_col: g.y_col,
            axis_order: g.axis_order,
        }
    }
}

/// One connected component of the link, as the cyclic list of rows visited.
/// Each row contributes one X and one Y marking.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub rows: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkComponents {
    pub components: Vec<Component>,
    /// Component index of the X marking in each row.
    pub row_component: Vec<usize>,
}

impl LinkComponents {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Number of X markings on each component.
    pub fn marking_counts(&self) -> Vec<usize> {
        self.components.iter().map(|c| c.rows.len()).collect()
    }
}

/// A transverse double point of the segment arrangement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Crossing {
    /// Row of the horizontal (first-axis) segment.
    pub row: usize,
    /// Column of the vertical (second-axis) segment.
    pub column: usize,
    /// Strand that passes over.
    pub over: LineAxis,
    pub sign: i8,
}

/// Where the new column goes in a stabilization and which of the two split
/// rows keeps the X marking.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CornerChoice {
    /// The X marking ends up in the lower of the two new rows.
    pub x_row_lower: bool,
    /// The new column sits next to the X marking (otherwise next to the Y).
    pub beside_x: bool,
}

impl CornerChoice {
    pub const ALL: [CornerChoice; 4] = [
        CornerChoice { x_row_lower: true, beside_x: true },
        CornerChoice { x_row_lower: true, beside_x: false },
        CornerChoice { x_row_lower: false, beside_x: true },
        CornerChoice { x_row_lower: false, beside_x: false },
    ];
}

fn check_permutation(
    family: char,
    size: usize,
    cols: &[usize],
) -> Result<(), GridError> {
    let mut seen = vec![None; size];
    for (row, &c) in cols.iter().enumerate() {
        if c >= size {
            return Err(GridError::OutOfRange { family, row, column: c });
        }
        if let Some(first) = seen[c] {
            return Err(GridError::DuplicateInColumn {
                family,
                column: c,
                first,
                second: row,
            });
        }
        seen[c] = Some(row);
    }
    Ok(())
}

impl GridDiagram {
    /// Validates and builds a diagram. Errors name the first violated
    /// condition in the order: lengths, X columns, Y columns, shared cells.
    pub fn new(
        size: usize,
        x_col: Vec<usize>,
        y_col: Vec<usize>,
        axis_order: AxisOrder,
    ) -> Result<Self, GridError> {
        if size == 0 {
            return Err(GridError::EmptyGrid);
        }
        for (field, v) in [("xCol", &x_col), ("yCol", &y_col)] {
            if v.len() != size {
                return Err(GridError::Length { field, expected: size, found: v.len() });
            }
        }
        check_permutation('X', size, &x_col)?;
        check_permutation('Y', size, &y_col)?;
        if let Some(row) = (0..size).find(|&r| x_col[r] == y_col[r]) {
            return Err(GridError::SharedCell { row, column: x_col[row] });
        }
        Ok(GridDiagram { x_col, y_col, axis_order })
    }

    /// Builds a diagram from marking cells given as `(column, row)` pairs,
    /// checking that every row holds exactly one marking of each family.
    pub fn from_cells(
        size: usize,
        x_cells: &[(usize, usize)],
        y_cells: &[(usize, usize)],
        axis_order: AxisOrder,
    ) -> Result<Self, GridError> {
        let mut x_col = vec![usize::MAX; size];
        let mut y_col = vec![usize::MAX; size];
        for (family, cells, out) in [('X', x_cells, &mut x_col), ('Y', y_cells, &mut y_col)] {
            if cells.len() != size {
                return Err(GridError::Length {
                    field: if family == 'X' { "xCells" } else { "yCells" },
                    expected: size,
                    found: cells.len(),
                });
            }
            for &(c, r) in cells {
                if r >= size {
                    return Err(GridError::OutOfRange { family, row: r, column: c });
                }
                if out[r] != usize::MAX {
                    return Err(GridError::DuplicateInRow { family, row: r });
                }
                out[r] = c;
            }
        }
        GridDiagram::new(size, x_col, y_col, axis_order)
    }

    pub fn size(&self) -> usize {
        self.x_col.len()
    }

    pub fn x_col(&self) -> &[usize] {
        &self.x_col
    }

    pub fn y_col(&self) -> &[usize] {
        &self.y_col
    }

    pub fn axis_order(&self) -> AxisOrder {
        self.axis_order
    }

    /// Row of the X marking in each column.
    pub fn x_row(&self) -> Vec<usize> {
        invert(&self.x_col)
    }

    /// Row of the Y marking in each column.
    pub fn y_row(&self) -> Vec<usize> {
        invert(&self.y_col)
    }

    pub fn mirror(&self) -> GridDiagram {
        GridDiagram {
            x_col: self.x_col.clone(),
            y_col: self.y_col.clone(),
            axis_order: self.axis_order.flipped(),
        }
    }

    /// The same link presented with the natural axis order. A reversed
    /// diagram is rotated a quarter turn, so row segments become column
    /// segments, and the Y markings take over the role of X.
    pub fn normalized(&self) -> GridDiagram {
        match self.axis_order {
            AxisOrder::Natural => self.clone(),
            AxisOrder::Reversed => {
                let n = self.size();
                GridDiagram {
                    x_col: self.y_row().into_iter().map(|r| n - 1 - r).collect(),
                    y_col: self.x_row().into_iter().map(|r| n - 1 - r).collect(),
                    axis_order: AxisOrder::Natural,
                }
            }
        }
    }

    /// Sum of crossing signs.
    pub fn writhe(&self) -> i64 {
        self.resolve_crossings().iter().map(|c| c.sign as i64).sum()
    }

    pub fn trace_components(&self) -> LinkComponents {
        let n = self.size();
        let x_row = self.x_row();
        let mut row_component = vec![usize::MAX; n];
        let mut components = Vec::new();
        for start in 0..n {
            if row_component[start] != usize::MAX {
                continue;
            }
            let id = components.len();
            let mut rows = Vec::new();
            let mut r = start;
            loop {
                row_component[r] = id;
                rows.push(r);
                // X -> Y along row r, then Y -> X down column y_col[r].
                r = x_row[self.y_col[r]];
                if r == start {
                    break;
                }
            }
            components.push(Component { rows });
        }
        LinkComponents { components, row_component }
    }

    /// Row-segment column interval `[lo, hi]` of row `r`.
    pub fn row_span(&self, r: usize) -> (usize, usize) {
        let (a, b) = (self.x_col[r], self.y_col[r]);
        (a.min(b), a.max(b))
    }

    /// Column-segment row interval `[lo, hi]` of column `c`.
    pub fn column_span(&self, c: usize, x_row: &[usize], y_row: &[usize]) -> (usize, usize) {
        let (a, b) = (x_row[c], y_row[c]);
        (a.min(b), a.max(b))
    }

    /// All `(row, column)` pairs whose segments cross transversely.
    pub fn crossing_cells(&self) -> Vec<(usize, usize)> {
        let n = self.size();
        let (x_row, y_row) = (self.x_row(), self.y_row());
        let mut out = Vec::new();
        for r in 0..n {
            let (c0, c1) = self.row_span(r);
            for c in (c0 + 1)..c1 {
                let (r0, r1) = self.column_span(c, &x_row, &y_row);
                if r0 < r && r < r1 {
                    out.push((r, c));
                }
            }
        }
        out
    }

    pub fn resolve_crossings(&self) -> Vec<Crossing> {
        let (x_row, y_row) = (self.x_row(), self.y_row());
        self.crossing_cells()
            .into_iter()
            .map(|(row, column)| {
                // Row segment runs X -> Y, column segment runs Y -> X.
                let h = if self.y_col[row] > self.x_col[row] { 1i64 } else { -1 };
                let v = if x_row[column] > y_row[column] { 1i64 } else { -1 };
                let horizontal = (h, 0i64);
                let vertical = (0i64, v);
                let (over_axis, o, u) = match self.axis_order {
                    AxisOrder::Natural => (LineAxis::Column, vertical, horizontal),
                    AxisOrder::Reversed => (LineAxis::Row, horizontal, vertical),
                };
                let cross = o.0 * u.1 - o.1 * u.0;
                Crossing {
                    row,
                    column,
                    over: over_axis,
                    sign: if cross > 0 { 1 } else { -1 },
                }
            })
            .collect()
    }

    /// Half the signed count of crossings between components `i` and `j`.
    pub fn linking_number(&self, i: usize, j: usize) -> Result<i64, GridError> {
        let comps = self.trace_components();
        let count = comps.len();
        for index in [i, j] {
            if index >= count {
                return Err(GridError::BadComponentIndex { index, count });
            }
        }
        if i == j {
            return Err(GridError::SameComponent);
        }
        let x_row = self.x_row();
        let mut total = 0i64;
        for c in self.resolve_crossings() {
            let a = comps.row_component[c.row];
            // The column segment belongs to the component of the X it ends at.
            let b = comps.row_component[x_row[c.column]];
            if (a == i && b == j) || (a == j && b == i) {
                total += c.sign as i64;
            }
        }
        Ok(total / 2)
    }

    /// Splits row `row` into two rows and inserts a new column between its X
    /// and Y markings.
    pub fn stabilize(&self, row: usize, choice: CornerChoice) -> Result<GridDiagram, GridError> {
        let n = self.size();
        if row >= n {
            return Err(GridError::InvalidRow(row));
        }
        let (cx, cy) = (self.x_col[row], self.y_col[row]);
        let k = stabilization_column(cx, cy, choice.beside_x);
        let shift = |c: usize| if c >= k { c + 1 } else { c };
        let mut x_col = Vec::with_capacity(n + 1);
        let mut y_col = Vec::with_capacity(n + 1);
        for r in 0..n {
            if r == row {
                // X row keeps X and gains Y'; the other keeps Y and gains X'.
                let x_row_pair = (shift(cx), k);
                let y_row_pair = (k, shift(cy));
                let (lo, hi) = if choice.x_row_lower {
                    (x_row_pair, y_row_pair)
                } else {
                    (y_row_pair, x_row_pair)
                };
                x_col.push(lo.0);
                y_col.push(lo.1);
                x_col.push(hi.0);
                y_col.push(hi.1);
            } else {
                x_col.push(shift(self.x_col[r]));
                y_col.push(shift(self.y_col[r]));
            }
        }
        GridDiagram::new(n + 1, x_col, y_col, self.axis_order)
    }

    /// Inverse of [`GridDiagram::stabilize`]: removes column `column`, which
    /// must hold the X'/Y' pair of a stabilization corner, and merges its two
    /// rows.
    pub fn destabilize(&self, column: usize) -> Result<GridDiagram, GridError> {
        let n = self.size();
        if column >= n || n < 2 {
            return Err(GridError::NotDestabilizable(column));
        }
        let (x_row, y_row) = (self.x_row(), self.y_row());
        // Y' sits in the row of the surviving X, X' in the row of the surviving Y.
        let (ry, rx) = (y_row[column], x_row[column]);
        if ry.abs_diff(rx) != 1 {
            return Err(GridError::NotDestabilizable(column));
        }
        let unshift = |c: usize| if c > column { c - 1 } else { c };
        let (ncx, ncy) = (unshift(self.x_col[ry]), unshift(self.y_col[rx]));
        if ncx == ncy {
            return Err(GridError::NotDestabilizable(column));
        }
        let merged = ry.min(rx);
        let mut x_col = Vec::with_capacity(n - 1);
        let mut y_col = Vec::with_capacity(n - 1);
        for r in 0..n {
            if r == merged {
                x_col.push(ncx);
                y_col.push(ncy);
            } else if r == merged + 1 {
                continue;
            } else {
                x_col.push(unshift(self.x_col[r]));
                y_col.push(unshift(self.y_col[r]));
            }
        }
        let g = GridDiagram::new(n - 1, x_col, y_col, self.axis_order)
            .map_err(|_| GridError::NotDestabilizable(column))?;
        let restores = CornerChoice::ALL
            .iter()
            .any(|&ch| g.stabilize(merged, ch).as_ref() == Ok(self));
        if restores {
            Ok(g)
        } else {
            Err(GridError::NotDestabilizable(column))
        }
    }

    /// Reflection in the diagonal. Column segments become row segments, so
    /// the marking roles are exchanged to keep the X -> Y convention.
    fn transposed(&self) -> GridDiagram {
        GridDiagram { x_col: self.y_row(), y_col: self.x_row(), axis_order: self.axis_order }
    }

    /// Stabilization splitting the column segment in column `column` and
    /// inserting a new row. `choice.beside_x` places the new row next to the
    /// X marking's end of the segment.
    pub fn stabilize_column(&self, column: usize, choice: CornerChoice) -> Result<GridDiagram, GridError> {
        Ok(self.transposed().stabilize(column, CornerChoice { beside_x: !choice.beside_x, ..choice })?.transposed())
    }

    /// Inverse of [`GridDiagram::stabilize_column`]: removes row `row`.
    pub fn destabilize_row(&self, row: usize) -> Result<GridDiagram, GridError> {
        Ok(self.transposed().destabilize(row)?.transposed())
    }

    /// Whether `self` is obtained from `smaller` by one stabilization of
    /// either kind.
    pub fn is_stabilization_of(&self, smaller: &GridDiagram) -> bool {
        (0..self.size()).any(|k| {
            self.destabilize(k).as_ref() == Ok(smaller) || self.destabilize_row(k).as_ref() == Ok(smaller)
        })
    }

    /// Columns at which [`GridDiagram::destabilize`] succeeds.
    pub fn destabilization_columns(&self) -> Vec<usize> {
        (0..self.size()).filter(|&c| self.destabilize(c).is_ok()).collect()
    }

    /// Whether rows (or columns) `index` and `index + 1` may be exchanged:
    /// their segment projections must be disjoint, share one endpoint, or be
    /// nested.
    pub fn commutation_legal(&self, index: usize, axis: LineAxis) -> Result<bool, GridError> {
        let n = self.size();
        if index + 1 >= n {
            return Err(GridError::CommutationOutOfRange(index));
        }
        let (a, b) = match axis {
            LineAxis::Row => (self.row_span(index), self.row_span(index + 1)),
            LineAxis::Column => {
                let (x_row, y_row) = (self.x_row(), self.y_row());
                (
                    self.column_span(index, &x_row, &y_row),
                    self.column_span(index + 1, &x_row, &y_row),
                )
            }
        };
        Ok(!interleaved(a, b))
    }

    pub fn commute(&self, index: usize, axis: LineAxis) -> Result<GridDiagram, GridError> {
        if !self.commutation_legal(index, axis)? {
            return Err(GridError::IllegalCommutation { axis, index, next: index + 1 });
        }
        Ok(self.swap_lines(index, axis))
    }

    /// Exchanges two adjacent rows or columns without a legality check.
    pub fn swap_lines(&self, index: usize, axis: LineAxis) -> GridDiagram {
        let mut g = self.clone();
        match axis {
            LineAxis::Row => {
                g.x_col.swap(index, index + 1);
                g.y_col.swap(index, index + 1);
            }
            LineAxis::Column => {
                let swap = |c: usize| {
                    if c == index {
                        index + 1
                    } else if c == index + 1 {
                        index
                    } else {
                        c
                    }
                };
                g.x_col.iter_mut().for_each(|c| *c = swap(*c));
                g.y_col.iter_mut().for_each(|c| *c = swap(*c));
            }
        }
        g
    }

    /// Character rendering, top row first. Cells are `X`, `Y`, `-`, `|` or
    /// `.`; at a crossing the over-strand glyph is shown. Cells are separated
    /// by `-` where a row segment continues and by a space otherwise.
    pub fn render_ascii(&self) -> String {
        let n = self.size();
        let (x_row, y_row) = (self.x_row(), self.y_row());
        let mut out = String::new();
        for r in (0..n).rev() {
            let (c0, c1) = self.row_span(r);
            for c in 0..n {
                let glyph = if self.x_col[r] == c {
                    'X'
                } else if self.y_col[r] == c {
                    'Y'
                } else {
                    let (r0, r1) = self.column_span(c, &x_row, &y_row);
                    let horiz = c0 < c && c < c1;
                    let vert = r0 < r && r < r1;
                    match (horiz, vert) {
                        (true, true) => match self.axis_order {
                            AxisOrder::Natural => '|',
                            AxisOrder::Reversed => '-',
                        },
                        (true, false) => '-',
                        (false, true) => '|',
                        (false, false) => '.',
                    }
                };
                out.push(glyph);
                if c + 1 < n {
                    out.push(if c0 <= c && c < c1 { '-' } else { ' ' });
                }
            }
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for GridDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_ascii())
    }
}

fn invert(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    inv
}

/// Index at which the new column is inserted (columns `>= k` shift right).
fn stabilization_column(cx: usize, cy: usize, beside_x: bool) -> usize {
    match (beside_x, cy > cx) {
        (true, true) => cx + 1,
        (true, false) => cx,
        (false, true) => cy,
        (false, false) => cy + 1,
    }
}

fn interleaved(a: (usize, usize), b: (usize, usize)) -> bool {
    let strictly_inside = |p: usize, s: (usize, usize)| s.0 < p && p < s.1;
    let nested = (a.0 <= b.0 && b.1 <= a.1) || (b.0 <= a.0 && a.1 <= b.1);
    !nested
        && (strictly_inside(b.0, a) || strictly_inside(b.1, a) || strictly_inside(a.0, b))
}

/// Small fixtures used throughout the test-suite and the CLI.
pub mod examples {
    use super::*;

    pub fn unknot2() -> GridDiagram {
        GridDiagram::new(2, vec![0, 1], vec![1, 0], AxisOrder::Natural).unwrap()
    }

    /// Two unlinked unknots in block-diagonal position.
    pub fn split_unknots4() -> GridDiagram {
        GridDiagram::new(4, vec![0, 1, 2, 3], vec![1, 0, 3, 2], AxisOrder::Natural).unwrap()
    }

    pub fn hopf4() -> GridDiagram {
        GridDiagram::new(4, vec![0, 1, 2, 3], vec![2, 3, 0, 1], AxisOrder::Natural).unwrap()
    }

    /// The (2,5)-torus-knot pattern `yCol[i] = i + 2 mod 5`: a trefoil.
    pub fn trefoil5() -> GridDiagram {
        GridDiagram::new(5, (0..5).collect(), (0..5).map(|i| (i + 2) % 5).collect(), AxisOrder::Natural)
            .unwrap()
    }

    /// The shift-by-three pattern: a three-crossing trefoil with a size-5
    /// cube lift.
    pub fn trefoil5_short() -> GridDiagram {
        GridDiagram::new(5, (0..5).collect(), (0..5).map(|i| (i + 3) % 5).collect(), AxisOrder::Natural)
            .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::examples::*;
    use super::*;

    #[test]
    fn validation_errors() {
        assert!(GridDiagram::new(2, vec![0, 1], vec![1, 0], AxisOrder::Natural).is_ok());
        assert!(matches!(
            GridDiagram::new(2, vec![0, 1], vec![0, 1], AxisOrder::Natural),
            Err(GridError::SharedCell { row: 0, column: 0 })
        ));
        assert!(matches!(
            GridDiagram::new(2, vec![0, 0], vec![1, 0], AxisOrder::Natural),
            Err(GridError::DuplicateInColumn { family: 'X', column: 0, .. })
        ));
        assert!(matches!(
            GridDiagram::new(2, vec![0], vec![1, 0], AxisOrder::Natural),
            Err(GridError::Length { .. })
        ));
        assert!(matches!(
            GridDiagram::from_cells(2, &[(0, 0), (1, 0)], &[(1, 1), (0, 0)], AxisOrder::Natural),
            Err(GridError::DuplicateInRow { family: 'X', row: 0 })
        ));
    }

    #[test]
    fn components() {
        let c = unknot2().trace_components();
        assert_eq!(c.marking_counts(), vec![2]);
        let c = split_unknots4().trace_components();
        assert_eq!(c.marking_counts(), vec![2, 2]);
        let g = GridDiagram::new(5, (0..5).collect(), vec![2, 3, 4, 0, 1], AxisOrder::Natural).unwrap();
        assert_eq!(g.trace_components().marking_counts(), vec![5]);
    }

    #[test]
    fn crossings_and_mirror() {
        assert!(unknot2().resolve_crossings().is_empty());
        let t = trefoil5();
        let xs = t.resolve_crossings();
        assert!(xs.len() >= 3);
        assert!(xs.iter().all(|c| c.sign == xs[0].sign));
        let m = t.mirror().resolve_crossings();
        assert_eq!(m.len(), xs.len());
        for (a, b) in xs.iter().zip(&m) {
            assert_eq!((a.row, a.column), (b.row, b.column));
            assert_ne!(a.over, b.over);
            assert_eq!(a.sign, -b.sign);
        }
        assert_eq!(t.mirror().mirror(), t);
    }

    #[test]
    fn linking_numbers() {
        assert_eq!(split_unknots4().linking_number(0, 1), Ok(0));
        assert_eq!(hopf4().linking_number(0, 1).unwrap().abs(), 1);
        assert!(matches!(
            unknot2().linking_number(0, 1),
            Err(GridError::BadComponentIndex { .. })
        ));
    }

    #[test]
    fn stabilization_round_trip() {
        for g in [unknot2(), split_unknots4(), hopf4(), trefoil5()] {
            for row in 0..g.size() {
                for choice in CornerChoice::ALL {
                    let s = g.stabilize(row, choice).unwrap();
                    assert_eq!(s.size(), g.size() + 1);
                    assert_eq!(s.trace_components().len(), g.trace_components().len());
                    let k = stabilization_column(g.x_col[row], g.y_col[row], choice.beside_x);
                    assert_eq!(s.destabilize(k).unwrap(), g, "row {row} {choice:?}");
                }
            }
        }
        assert!(matches!(unknot2().stabilize(2, CornerChoice::ALL[0]), Err(GridError::InvalidRow(2))));
        assert!(unknot2().destabilization_columns().is_empty());
        for g in [hopf4(), trefoil5()] {
            for c in 0..g.size() {
                for choice in CornerChoice::ALL {
                    let s = g.stabilize_column(c, choice).unwrap();
                    assert_eq!(s.trace_components().len(), g.trace_components().len());
                    assert!(s.is_stabilization_of(&g));
                }
            }
        }
    }

    #[test]
    fn commutation() {
        let g = split_unknots4();
        // rows 1 and 2 sit in different blocks
        assert!(g.commute(1, LineAxis::Row).is_ok());
        assert!(g.commute(1, LineAxis::Column).is_ok());
        // spans [0,2] and [1,3] interleave
        let h = hopf4();
        assert!(matches!(h.commute(0, LineAxis::Row), Err(GridError::IllegalCommutation { .. })));
        assert!(matches!(h.commute(3, LineAxis::Row), Err(GridError::CommutationOutOfRange(3))));
    }

    #[test]
    fn normalized_preserves_crossing_structure() {
        let t = trefoil5().mirror();
        let n = t.normalized();
        assert_eq!(n.axis_order(), AxisOrder::Natural);
        assert_eq!(n.resolve_crossings().len(), t.resolve_crossings().len());
        assert_eq!(n.writhe(), t.writhe());
        assert_eq!(n.trace_components().len(), 1);
        assert_eq!(trefoil5().writhe(), -t.writhe());
    }
}
