use std::collections::HashMap;

use itertools::Itertools;
use rayon::prelude::*;

use super::grid_complex::{all_states, GridGrader, GridState};
use super::{hyper_size_bound, Bigrading, FloerError, GradedComplex, Variant};
use crate::hypercube::{Family, HyperPlane, HypercubeDiagram, Point4};

/// Points `(w_i, i, y_i, i)`, one per value of `x = z`.
pub type HyperState = Vec<Point4>;

pub fn psi(s: &[usize], t: &[usize]) -> HyperState {
    s.iter().zip(t).enumerate().map(|(i, (&w, &y))| [w, i, y, i]).collect()
}

pub fn pi_wx(h: &[Point4]) -> GridState {
    let mut s = vec![0; h.len()];
    for p in h {
        s[p[1]] = p[0];
    }
    s
}

pub fn pi_yz(h: &[Point4]) -> GridState {
    let mut t = vec![0; h.len()];
    for p in h {
        t[p[3]] = p[2];
    }
    t
}

/// Graders for `G_wx` and `G_yz`, with components labelled by the
/// hyperlink.
pub fn projection_graders(h: &HypercubeDiagram) -> (GridGrader, GridGrader) {
    let link = h.trace_hyperlink().expect("valid diagram");
    let grader = |plane| {
        GridGrader::with_components(&h.project_grid(plane), h.row_components(plane, &link), link.len())
    };
    (grader(HyperPlane::Wx), grader(HyperPlane::Yz))
}

pub fn hyper_gradings(h: &HypercubeDiagram, s: &[Point4]) -> Bigrading {
    let (wx, yz) = projection_graders(h);
    sum_gradings(&wx, &yz, s)
}

fn sum_gradings(wx: &GridGrader, yz: &GridGrader, s: &[Point4]) -> Bigrading {
    let (a, b) = (wx.grading(&pi_wx(s)), yz.grading(&pi_yz(s)));
    Bigrading::new(a.maslov + b.maslov, a.alexander.iter().zip(&b.alexander).map(|(x, y)| x + y).collect())
}

/// A hyperrectangle spanning two axes of the 4-torus and all of the other
/// two. Ranges run cyclically from `lo` to `hi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HyperRect {
    pub axes: (usize, usize),
    pub lo: (usize, usize),
    pub hi: (usize, usize),
}

impl HyperRect {
    fn span(n: usize, from: usize, v: usize, to: usize) -> (usize, usize) {
        ((v + n - from) % n, (to + n - from) % n)
    }

    /// Unit cell with lower corner `p` lies inside.
    pub fn contains_cell(&self, n: usize, p: &Point4) -> bool {
        let (da, wa) = Self::span(n, self.lo.0, p[self.axes.0], self.hi.0);
        let (db, wb) = Self::span(n, self.lo.1, p[self.axes.1], self.hi.1);
        da < wa && db < wb
    }

    /// Lattice point `p` lies in the interior.
    pub fn contains_point(&self, n: usize, p: &Point4) -> bool {
        let (da, wa) = Self::span(n, self.lo.0, p[self.axes.0], self.hi.0);
        let (db, wb) = Self::span(n, self.lo.1, p[self.axes.1], self.hi.1);
        da > 0 && da < wa && db > 0 && db < wb
    }
}

/// The wx- (`col_axis = 0`) or yz- (`col_axis = 2`) hyperrectangles from
/// `s` to the state swapping the points on rows `a` and `b`, together with
/// the target.
pub fn hyper_rectangles(s: &[Point4], col_axis: usize, a: usize, b: usize) -> (HyperState, [HyperRect; 2]) {
    let row_axis = col_axis + 1;
    let at = |r: usize| s.iter().find(|p| p[row_axis] == r).expect("one point per row")[col_axis];
    let rect = |p: usize, q: usize| HyperRect { axes: (col_axis, row_axis), lo: (at(p), p), hi: (at(q), q) };
    let mut t = s.to_vec();
    for pt in &mut t {
        if pt[row_axis] == a {
            pt[col_axis] = at(b);
        } else if pt[row_axis] == b {
            pt[col_axis] = at(a);
        }
    }
    (t, [rect(a, b), rect(b, a)])
}

pub(crate) fn rect_is_tilde(h: &HypercubeDiagram, s: &[Point4], r: &HyperRect) -> bool {
    let n = h.size();
    let fams = if r.axes.0 == 0 { [Family::W, Family::X] } else { [Family::Y, Family::Z] };
    !s.iter().any(|p| r.contains_point(n, p))
        && !fams.iter().any(|&f| h.family(f).iter().any(|m| r.contains_cell(n, m)))
}

pub fn all_hyper_states(n: usize) -> Vec<HyperState> {
    let perms = all_states(n);
    perms.iter().cartesian_product(&perms).map(|(s, t)| psi(s, t)).collect()
}

pub fn build_hyper_tilde_complex(h: &HypercubeDiagram) -> Result<GradedComplex, FloerError> {
    let n = h.size();
    let bound = hyper_size_bound();
    if n > bound {
        return Err(FloerError::SizeBound { size: n, bound });
    }
    let (wx, yz) = projection_graders(h);
    let states = all_hyper_states(n);
    let index: HashMap<&HyperState, usize> = states.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let generators = states.par_iter().map(|s| sum_gradings(&wx, &yz, s)).collect();
    let boundary = states
        .par_iter()
        .map(|s| {
            let mut out = Vec::new();
            for col_axis in [0, 2] {
                for (a, b) in (0..n).tuple_combinations() {
                    let (t, rects) = hyper_rectangles(s, col_axis, a, b);
                    if rects.iter().filter(|r| rect_is_tilde(h, s, r)).count() % 2 == 1 {
                        out.push(index[&t]);
                    }
                }
            }
            out
        })
        .collect();
    Ok(GradedComplex {
        variant: Variant::HyperTilde,
        size: n,
        components: wx.components(),
        marking_counts: wx.marking_counts.clone(),
        generators,
        boundary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::floer::grid_complex::build_grid_tilde_with;
    use crate::floer::{euler_characteristic, hat_table, homology_table, tensor_tables, total_rank};
    use crate::hypercube::examples::standard_torus;
    use crate::hypercube::generate_markings_seeded;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn psi_round_trip() {
        assert_eq!(psi(&[1, 0], &[0, 1]), vec![[1, 0, 0, 0], [0, 1, 1, 1]]);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let mut s: Vec<usize> = (0..6).collect();
            let mut t = s.clone();
            s.shuffle(&mut rng);
            t.shuffle(&mut rng);
            let h = psi(&s, &t);
            assert_eq!((pi_wx(&h), pi_yz(&h)), (s, t));
        }
    }

    /// Oracle: all sets of n lattice points with x = z whose coordinates
    /// are distinct along every axis.
    #[test]
    fn state_count_is_factorial_squared() {
        for n in 1..=3usize {
            let cells: Vec<Point4> = itertools::iproduct!(0..n, 0..n, 0..n).map(|(w, x, y)| [w, x, y, x]).collect();
            let count = cells
                .iter()
                .combinations(n)
                .filter(|pts| (0..4).all(|k| pts.iter().map(|p| p[k]).all_unique()))
                .count();
            let f: usize = (1..=n).product();
            assert_eq!(count, f * f);
            assert_eq!(all_hyper_states(n).len(), f * f);
        }
        assert_eq!(all_hyper_states(4).len(), 576);
    }

    #[test]
    fn standard_torus_homology() {
        let h = standard_torus();
        let c = build_hyper_tilde_complex(&h).unwrap();
        assert!(c.d_squared_is_zero());
        let t = homology_table(&c).unwrap();
        assert_eq!(total_rank(&t), 4);
        let hat = hat_table(&c).unwrap();
        assert_eq!(hat, [(Bigrading::new(0, vec![0]), 1)].into_iter().collect());
        assert!(euler_characteristic(&hat, 1).eq_up_to_sign(&crate::floer::LaurentPoly::one(1)));
    }

    #[test]
    fn gradings_are_additive() {
        let h = standard_torus();
        let (wx, yz) = projection_graders(&h);
        for s in all_hyper_states(2) {
            let g = hyper_gradings(&h, &s);
            let (a, b) = (wx.grading(&pi_wx(&s)), yz.grading(&pi_yz(&s)));
            assert_eq!(g.maslov, a.maslov + b.maslov);
            assert_eq!(g.alexander, vec![a.alexander[0] + b.alexander[0]]);
        }
    }

    #[test]
    fn tensor_theorem_on_random_diagrams() {
        let mut checked = 0;
        for seed in 0..400u64 {
            let n = 3 + (seed % 2) as usize;
            let Ok(h) = generate_markings_seeded(n, seed).validate() else { continue };
            let c = build_hyper_tilde_complex(&h).unwrap();
            assert!(c.d_squared_is_zero());
            let (wx, yz) = projection_graders(&h);
            let a = homology_table(&build_grid_tilde_with(&wx).unwrap()).unwrap();
            let b = homology_table(&build_grid_tilde_with(&yz).unwrap()).unwrap();
            let direct = homology_table(&c).unwrap();
            assert_eq!(direct, tensor_tables(&a, &b));
            assert_eq!(euler_characteristic(&direct, c.components), euler_characteristic(&c.chain_table(), c.components));
            checked += 1;
            if checked == 12 {
                break;
            }
        }
        assert_eq!(checked, 12);
    }
}
