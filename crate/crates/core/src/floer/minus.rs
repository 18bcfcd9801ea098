use std::collections::{BTreeSet, HashMap};

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::grid_complex::{all_states, rectangle, GridState};
use super::hyper_complex::{all_hyper_states, hyper_rectangles, HyperRect, HyperState};
use super::{hyper_size_bound, FloerError, GRID_SIZE_BOUND};
use crate::grid::GridDiagram;
use crate::hypercube::{Family, HypercubeDiagram};

/// Monomial with 4-bit exponents for up to 32 variables.
pub type Monomial = u128;

/// GF(2) polynomial as a set of monomials.
pub type Poly = BTreeSet<Monomial>;

const MAX_VARS: usize = 32;

fn monomial(vars: impl IntoIterator<Item = usize>) -> Monomial {
    vars.into_iter().map(|v| 1u128 << (4 * v)).sum()
}

fn add_mono(p: &mut Poly, m: Monomial) {
    if !p.insert(m) {
        p.remove(&m);
    }
}

/// The full differential: `rows[s][t]` is the coefficient of `t` in `d(s)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinusDifferential {
    pub variables: usize,
    pub rows: Vec<HashMap<usize, Poly>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinusReport {
    pub generators: usize,
    pub variables: usize,
    pub nonzero_entries: usize,
    pub d_squared_zero: bool,
}

impl MinusDifferential {
    pub fn squares_to_zero(&self) -> bool {
        self.rows.par_iter().all(|row| {
            let mut acc: HashMap<usize, Poly> = HashMap::new();
            for (&t, a) in row {
                for (&u, b) in &self.rows[t] {
                    let e = acc.entry(u).or_default();
                    for x in a {
                        for y in b {
                            add_mono(e, x + y);
                        }
                    }
                }
            }
            acc.values().all(|p| p.is_empty())
        })
    }

    pub fn report(&self) -> MinusReport {
        MinusReport {
            generators: self.rows.len(),
            variables: self.variables,
            nonzero_entries: self.rows.iter().map(|r| r.values().filter(|p| !p.is_empty()).count()).sum(),
            d_squared_zero: self.squares_to_zero(),
        }
    }
}

/// Empty rectangles weighted by the X markings they contain, one variable
/// per X marking.
pub fn grid_minus_differential(g: &GridDiagram) -> Result<MinusDifferential, FloerError> {
    let g = g.normalized();
    let n = g.size();
    if n > GRID_SIZE_BOUND {
        return Err(FloerError::SizeBound { size: n, bound: GRID_SIZE_BOUND });
    }
    let states = all_states(n);
    let index: HashMap<&GridState, usize> = states.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let rows = states
        .par_iter()
        .map(|s| {
            let mut row: HashMap<usize, Poly> = HashMap::new();
            for (a, b) in (0..n).tuple_combinations() {
                let mut t = s.clone();
                t.swap(a, b);
                for (p, q) in [(a, b), (b, a)] {
                    let r = rectangle(n, s, p, q, g.x_col(), g.y_col());
                    if r.empty {
                        add_mono(row.entry(index[&t]).or_default(), monomial(r.x_inside));
                    }
                }
            }
            row
        })
        .collect();
    Ok(MinusDifferential { variables: n, rows })
}

/// Empty wx-hyperrectangles weighted by W markings and yz-hyperrectangles
/// by Y markings; variables `0..n` are the W markings, `n..2n` the Y
/// markings.
pub fn hyper_minus_differential(h: &HypercubeDiagram) -> Result<MinusDifferential, FloerError> {
    let n = h.size();
    let bound = hyper_size_bound().min(MAX_VARS / 2);
    if n > bound {
        return Err(FloerError::SizeBound { size: n, bound });
    }
    let states = all_hyper_states(n);
    let index: HashMap<&HyperState, usize> = states.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let weight = |r: &HyperRect, f: Family, offset: usize| {
        monomial(h.family(f).iter().positions(|m| r.contains_cell(n, m)).map(|i| i + offset))
    };
    let rows = states
        .par_iter()
        .map(|s| {
            let mut row: HashMap<usize, Poly> = HashMap::new();
            for (col_axis, fam, offset) in [(0, Family::W, 0), (2, Family::Y, n)] {
                for (a, b) in (0..n).tuple_combinations() {
                    let (t, rects) = hyper_rectangles(s, col_axis, a, b);
                    for r in rects.iter().filter(|r| !s.iter().any(|p| r.contains_point(n, p))) {
                        add_mono(row.entry(index[&t]).or_default(), weight(r, fam, offset));
                    }
                }
            }
            row
        })
        .collect();
    Ok(MinusDifferential { variables: 2 * n, rows })
}

pub enum MinusInput<'a> {
    Grid(&'a GridDiagram),
    Hyper(&'a HypercubeDiagram),
}

pub fn verify_minus_d_squared(input: MinusInput<'_>) -> Result<MinusReport, FloerError> {
    let d = match input {
        MinusInput::Grid(g) => grid_minus_differential(g)?,
        MinusInput::Hyper(h) => hyper_minus_differential(h)?,
    };
    Ok(d.report())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::examples;
    use crate::hypercube::examples::standard_torus;

    #[test]
    fn unknot_minus_complex() {
        let d = grid_minus_differential(&examples::unknot2()).unwrap();
        // From {(0,0),(1,1)} both rectangles hold an X; back, both hold a Y.
        assert_eq!(d.rows[0][&1], [monomial([0]), monomial([1])].into_iter().collect());
        assert!(d.rows[1][&0].is_empty());
        assert!(d.squares_to_zero());
    }

    #[test]
    fn fixtures_square_to_zero() {
        for g in [examples::trefoil5(), examples::hopf4(), examples::split_unknots4()] {
            assert!(verify_minus_d_squared(MinusInput::Grid(&g)).unwrap().d_squared_zero);
        }
        let r = verify_minus_d_squared(MinusInput::Hyper(&standard_torus())).unwrap();
        assert!(r.d_squared_zero);
        assert_eq!(r.generators, 4);
    }

    #[test]
    fn corrupted_count_is_detected() {
        let mut d = grid_minus_differential(&examples::trefoil5()).unwrap();
        let (&t, p) = d.rows[0].iter_mut().find(|(_, p)| !p.is_empty()).unwrap();
        let m = *p.iter().next().unwrap();
        p.remove(&m);
        assert!(!d.squares_to_zero(), "dropping a rectangle into {t} went unnoticed");
    }
}
