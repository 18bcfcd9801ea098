use std::collections::HashMap;

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Bigrading, FloerError, GradedComplex, Variant, GRID_SIZE_BOUND};
use crate::grid::{AxisOrder, GridDiagram};

/// `s[r]` is the column of the state's point in row `r`.
pub type GridState = Vec<usize>;

/// A point in doubled coordinates with an integer weight.
pub type WeightedPoint = ((i64, i64), i64);

/// Weighted count of pairs `a < b` in both coordinates.
pub fn pair_count_i(a: &[WeightedPoint], b: &[WeightedPoint]) -> i64 {
    let mut total = 0;
    for &((a1, a2), wa) in a {
        for &((b1, b2), wb) in b {
            if a1 < b1 && a2 < b2 {
                total += wa * wb;
            }
        }
    }
    total
}

/// `2 J(A, B) = I(A, B) + I(B, A)`.
pub fn pair_count_j2(a: &[WeightedPoint], b: &[WeightedPoint]) -> i64 {
    pair_count_i(a, b) + pair_count_i(b, a)
}

fn state_points(s: &[usize], weight: i64) -> Vec<WeightedPoint> {
    s.iter().enumerate().map(|(r, &c)| ((2 * c as i64, 2 * r as i64), weight)).collect()
}

fn marking_points(cols: &[usize], rows: impl Fn(usize) -> bool, weight: i64) -> Vec<WeightedPoint> {
    cols.iter()
        .enumerate()
        .filter(|&(r, _)| rows(r))
        .map(|(r, &c)| ((2 * c as i64 + 1, 2 * r as i64 + 1), weight))
        .collect()
}

/// Precomputed marking data for grading the states of one grid.
#[derive(Debug, Clone)]
pub struct GridGrader {
    pub size: usize,
    x_col: Vec<usize>,
    y_col: Vec<usize>,
    /// Component of the markings in each row.
    pub row_component: Vec<usize>,
    pub marking_counts: Vec<usize>,
    /// `2 J(X, X)` as used by the Maslov grading.
    xx: i64,
    /// Per component, `Y^i - X^i` and `2J(Y + X, Y^i - X^i)`.
    diffs: Vec<(Vec<WeightedPoint>, i64)>,
}

impl GridGrader {
    pub fn new(g: &GridDiagram) -> Self {
        let comps = g.trace_components();
        Self::with_components(g, comps.row_component.clone(), comps.len())
    }

    pub fn with_components(g: &GridDiagram, row_component: Vec<usize>, components: usize) -> Self {
        assert_eq!(g.axis_order(), AxisOrder::Natural, "grade natural grids only");
        let x = marking_points(g.x_col(), |_| true, 1);
        let mut marking_counts = vec![0; components];
        for &c in &row_component {
            marking_counts[c] += 1;
        }
        let both: Vec<_> = x.iter().cloned().chain(marking_points(g.y_col(), |_| true, 1)).collect();
        let diffs = (0..components)
            .map(|i| {
                let mine = |r: usize| row_component[r] == i;
                let d: Vec<_> = marking_points(g.y_col(), mine, 1)
                    .into_iter()
                    .chain(marking_points(g.x_col(), mine, -1))
                    .collect();
                let k = pair_count_j2(&both, &d);
                (d, k)
            })
            .collect();
        GridGrader {
            size: g.size(),
            x_col: g.x_col().to_vec(),
            y_col: g.y_col().to_vec(),
            row_component,
            marking_counts,
            xx: pair_count_i(&x, &x),
            diffs,
        }
    }

    pub fn components(&self) -> usize {
        self.marking_counts.len()
    }

    /// `J(s - X, s - X) + 1`.
    pub fn maslov(&self, s: &[usize]) -> i64 {
        let sp = state_points(s, 1);
        let x = marking_points(&self.x_col, |_| true, 1);
        pair_count_i(&sp, &sp) - pair_count_j2(&sp, &x) + self.xx + 1
    }

    /// Doubled `J(s - (Y + X)/2, Y^i - X^i) - (n_i - 1)/2` per component.
    pub fn alexander(&self, s: &[usize]) -> Vec<i64> {
        let sp = state_points(s, 2);
        self.diffs
            .iter()
            .zip(&self.marking_counts)
            .map(|((d, k), &ni)| {
                let four_j = pair_count_j2(&sp, d) - k;
                debug_assert_eq!(four_j % 2, 0);
                four_j / 2 - (ni as i64 - 1)
            })
            .collect()
    }

    pub fn grading(&self, s: &[usize]) -> Bigrading {
        Bigrading::new(self.maslov(s), self.alexander(s))
    }

    pub fn x_col(&self) -> &[usize] {
        &self.x_col
    }

    pub fn y_col(&self) -> &[usize] {
        &self.y_col
    }
}

pub fn maslov(g: &GridDiagram, s: &[usize]) -> i64 {
    GridGrader::new(g).maslov(s)
}

pub fn alexander(g: &GridDiagram, s: &[usize]) -> Vec<i64> {
    GridGrader::new(g).alexander(s)
}

/// A torus rectangle from `s` to `t`. Rows run cyclically upward from
/// `bottom` to `top`, columns cyclically rightward from `left` to `right`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridRectangle {
    pub bottom: usize,
    pub top: usize,
    pub left: usize,
    pub right: usize,
    pub empty: bool,
    /// Rows of the X and Y markings inside.
    pub x_inside: Vec<usize>,
    pub y_inside: Vec<usize>,
}

impl GridRectangle {
    pub fn x_count(&self) -> usize {
        self.x_inside.len()
    }

    pub fn y_count(&self) -> usize {
        self.y_inside.len()
    }

    pub fn is_tilde(&self) -> bool {
        self.empty && self.x_inside.is_empty() && self.y_inside.is_empty()
    }
}

fn cyc(from: usize, to: usize, n: usize) -> usize {
    (to + n - from) % n
}

/// The rectangle with lower-left corner `(s[a], a)` and upper-right corner
/// `(s[b], b)`.
pub(crate) fn rectangle(n: usize, s: &[usize], a: usize, b: usize, x_col: &[usize], y_col: &[usize]) -> GridRectangle {
    let (left, right) = (s[a], s[b]);
    let (h, w) = (cyc(a, b, n), cyc(left, right, n));
    let cell_in = |c: usize, r: usize| cyc(a, r, n) < h && cyc(left, c, n) < w;
    let point_in = |c: usize, r: usize| {
        let (dr, dc) = (cyc(a, r, n), cyc(left, c, n));
        dr > 0 && dr < h && dc > 0 && dc < w
    };
    GridRectangle {
        bottom: a,
        top: b,
        left,
        right,
        empty: !(0..n).any(|r| point_in(s[r], r)),
        x_inside: (0..n).filter(|&r| cell_in(x_col[r], r)).collect(),
        y_inside: (0..n).filter(|&r| cell_in(y_col[r], r)).collect(),
    }
}

/// Rows where the states differ, when there are exactly two.
pub(crate) fn transposition(s: &[usize], t: &[usize]) -> Option<(usize, usize)> {
    let diff: Vec<usize> = (0..s.len()).filter(|&r| s[r] != t[r]).collect();
    match diff.as_slice() {
        &[a, b] if s[a] == t[b] && s[b] == t[a] => Some((a, b)),
        _ => None,
    }
}

pub fn grid_rectangles(g: &GridDiagram, s: &[usize], t: &[usize]) -> Vec<GridRectangle> {
    let Some((a, b)) = transposition(s, t) else {
        return Vec::new();
    };
    let n = g.size();
    vec![rectangle(n, s, a, b, g.x_col(), g.y_col()), rectangle(n, s, b, a, g.x_col(), g.y_col())]
}

pub(crate) fn all_states(n: usize) -> Vec<GridState> {
    (0..n).permutations(n).collect()
}

/// Targets of the tilde differential from `s`: states reached by an odd
/// number of empty rectangles free of markings.
pub(crate) fn tilde_targets(n: usize, s: &[usize], x_col: &[usize], y_col: &[usize]) -> Vec<GridState> {
    let mut out = Vec::new();
    for (a, b) in (0..n).tuple_combinations() {
        let count = [(a, b), (b, a)]
            .iter()
            .filter(|&&(p, q)| rectangle(n, s, p, q, x_col, y_col).is_tilde())
            .count();
        if count % 2 == 1 {
            let mut t = s.to_vec();
            t.swap(a, b);
            out.push(t);
        }
    }
    out
}

pub fn build_grid_tilde_complex(g: &GridDiagram) -> Result<GradedComplex, FloerError> {
    build_grid_tilde_with(&GridGrader::new(&g.normalized()))
}

pub fn build_grid_tilde_with(gr: &GridGrader) -> Result<GradedComplex, FloerError> {
    let n = gr.size;
    if n > GRID_SIZE_BOUND {
        return Err(FloerError::SizeBound { size: n, bound: GRID_SIZE_BOUND });
    }
    let states = all_states(n);
    let index: HashMap<&GridState, usize> = states.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let generators: Vec<Bigrading> = states.par_iter().map(|s| gr.grading(s)).collect();
    if gr.components() == 1 && generators.iter().any(|g| g.alexander[0] % 2 != 0) {
        return Err(FloerError::NonIntegralAlexander);
    }
    let boundary = states
        .par_iter()
        .map(|s| tilde_targets(n, s, gr.x_col(), gr.y_col()).iter().map(|t| index[t]).collect())
        .collect();
    Ok(GradedComplex {
        variant: Variant::GridTilde,
        size: n,
        components: gr.components(),
        marking_counts: gr.marking_counts.clone(),
        generators,
        boundary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::floer::{euler_characteristic, hat_table, homology_table, total_rank, LaurentPoly};
    use crate::grid::examples;

    fn pts(v: &[(i64, i64)]) -> Vec<WeightedPoint> {
        v.iter().map(|&p| (p, 1)).collect()
    }

    #[test]
    fn pair_counts() {
        assert_eq!(pair_count_i(&pts(&[(0, 0)]), &pts(&[(2, 2)])), 1);
        assert_eq!(pair_count_i(&pts(&[(2, 2)]), &pts(&[(0, 0)])), 0);
        let a = pts(&[(0, 0), (2, 2)]);
        assert_eq!(pair_count_j2(&a, &a), 2);
        assert_eq!(pair_count_i(&a, &pts(&[(1, 1), (3, 3)])), 3);
    }

    #[test]
    fn unknot_gradings() {
        let g = examples::unknot2();
        assert_eq!(g.x_col(), &[0, 1]);
        assert_eq!((maslov(&g, &[0, 1]), alexander(&g, &[0, 1])), (-1, vec![-2]));
        assert_eq!((maslov(&g, &[1, 0]), alexander(&g, &[1, 0])), (0, vec![0]));
        let rects = grid_rectangles(&g, &[0, 1], &[1, 0]);
        assert_eq!(rects.len(), 2);
        assert!(rects.iter().all(|r| r.x_count() + r.y_count() == 1));
        assert_eq!(grid_rectangles(&g, &[1, 0], &[0, 1]).len(), 2);
        assert!(grid_rectangles(&g, &[0, 1], &[0, 1]).is_empty());
        let c = build_grid_tilde_complex(&g).unwrap();
        let t = homology_table(&c).unwrap();
        let expect = [(Bigrading::new(0, vec![0]), 1), (Bigrading::new(-1, vec![-2]), 1)].into_iter().collect();
        assert_eq!(t, expect);
    }

    #[test]
    fn three_row_difference_has_no_rectangle() {
        let g = examples::trefoil5();
        assert!(grid_rectangles(&g, &[0, 1, 2, 3, 4], &[1, 2, 0, 3, 4]).is_empty());
    }

    /// Oracle: rectangles found by scanning every axis-parallel torus
    /// rectangle with corners in `s` and `t`.
    #[test]
    fn rectangles_match_brute_force_scan() {
        let g = examples::trefoil5();
        let n = g.size();
        for s in all_states(n).into_iter().step_by(7) {
            for t in all_states(n) {
                let mut found = Vec::new();
                for (a, b, l, r) in itertools::iproduct!(0..n, 0..n, 0..n, 0..n) {
                    if a == b || l == r {
                        continue;
                    }
                    let s_has = s[a] == l && s[b] == r;
                    let t_has = t[a] == r && t[b] == l;
                    let rest = (0..n).all(|k| k == a || k == b || s[k] == t[k]);
                    if s_has && t_has && rest {
                        found.push((a, b));
                    }
                }
                let got: Vec<_> = grid_rectangles(&g, &s, &t).iter().map(|r| (r.bottom, r.top)).collect();
                assert_eq!(got.len(), found.len());
                assert!(got.iter().all(|x| found.contains(x)));
            }
        }
    }

    #[test]
    fn trefoil_tilde_and_hat() {
        let c = build_grid_tilde_complex(&examples::trefoil5()).unwrap();
        assert!(c.d_squared_is_zero());
        let t = homology_table(&c).unwrap();
        assert_eq!(total_rank(&t), 48);
        let hat = hat_table(&c).unwrap();
        let mine: Vec<(i64, i64)> = hat.keys().map(|g| (g.alexander[0] / 2, g.maslov)).collect();
        let expect = [vec![(-1, -2), (0, -1), (1, 0)], vec![(-1, 0), (0, 1), (1, 2)]];
        assert!(expect.contains(&mine), "{mine:?}");
        let chi = euler_characteristic(&hat, 1);
        let trefoil = LaurentPoly::theta(1, 0) + LaurentPoly::one(1);
        assert!(chi.eq_up_to_sign(&trefoil));
        assert_eq!(euler_characteristic(&t, 1), euler_characteristic(&c.chain_table(), 1));
    }

    #[test]
    fn hopf_and_split_links() {
        let c = build_grid_tilde_complex(&examples::hopf4()).unwrap();
        let hat = hat_table(&c).unwrap();
        assert_eq!(total_rank(&hat), 4);
        assert!(hat.keys().all(|g| g.alexander.len() == 2));
        // A_i lies in lk(L_i, L - L_i)/2 + Z.
        assert_eq!(examples::hopf4().linking_number(0, 1).unwrap().abs(), 1);
        assert!(c.generators.iter().flat_map(|g| &g.alexander).all(|a| a % 2 != 0));
        let c = build_grid_tilde_complex(&examples::split_unknots4()).unwrap();
        assert!(c.generators.iter().all(|g| g.alexander.len() == 2));
        assert!(c.generators.iter().flat_map(|g| &g.alexander).all(|a| a % 2 == 0));
    }
}
