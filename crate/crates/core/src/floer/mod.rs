//! Grid and hypercube chain complexes over GF(2).

pub mod determinant;
pub mod gf2;
pub mod grid_complex;
pub mod hyper_complex;
pub mod laurent;
pub mod minus;

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use grid_complex::{
    alexander, build_grid_tilde_complex, grid_rectangles, maslov, pair_count_i, pair_count_j2, GridGrader,
    GridRectangle, GridState,
};
pub use hyper_complex::{build_hyper_tilde_complex, hyper_gradings, pi_wx, pi_yz, psi, HyperState};
pub use determinant::grid_alexander_polynomial;
pub use laurent::LaurentPoly;
pub use minus::{verify_minus_d_squared, MinusReport};

use gf2::BitMatrix;

/// Default cap on the direct hypercube complex size.
pub const HYPER_SIZE_BOUND: usize = 5;
/// Cap on grid complexes (`n!` generators).
pub const GRID_SIZE_BOUND: usize = 8;

/// The hypercube bound, overridable with `HYPERKUBE_SIZE_BOUND`.
pub fn hyper_size_bound() -> usize {
    std::env::var("HYPERKUBE_SIZE_BOUND").ok().and_then(|v| v.parse().ok()).unwrap_or(HYPER_SIZE_BOUND)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FloerError {
    #[error("size {size} exceeds the bound {bound}")]
    SizeBound { size: usize, bound: usize },
    #[error("table is not divisible by the stabilization factor")]
    InexactDivision,
    #[error("differential does not drop maslov by one and preserve alexander")]
    BadGrading,
    #[error("differential squares to a nonzero map")]
    NotAComplex,
    #[error("alexander grading is not integral for a knot")]
    NonIntegralAlexander,
}

/// Maslov grading and doubled Alexander multi-grading.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Bigrading {
    pub maslov: i64,
    pub alexander: Vec<i64>,
}

impl Bigrading {
    pub fn new(maslov: i64, alexander: Vec<i64>) -> Self {
        Bigrading { maslov, alexander }
    }

    fn plus(&self, other: &Bigrading) -> Bigrading {
        Bigrading {
            maslov: self.maslov + other.maslov,
            alexander: self.alexander.iter().zip(&other.alexander).map(|(a, b)| a + b).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    GridTilde,
    HyperTilde,
}

/// Generators with gradings and a GF(2) differential as target lists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedComplex {
    pub variant: Variant,
    pub size: usize,
    pub components: usize,
    /// Markings per component.
    pub marking_counts: Vec<usize>,
    pub generators: Vec<Bigrading>,
    pub boundary: Vec<Vec<usize>>,
}

pub type HomologyTable = BTreeMap<Bigrading, usize>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableEntry {
    pub maslov: i64,
    pub alexander: Vec<i64>,
    pub rank: usize,
}

pub fn table_entries(t: &HomologyTable) -> Vec<TableEntry> {
    t.iter()
        .map(|(g, &rank)| TableEntry { maslov: g.maslov, alexander: g.alexander.clone(), rank })
        .collect()
}

pub fn table_from_entries(entries: &[TableEntry]) -> HomologyTable {
    let mut t = HomologyTable::new();
    for e in entries {
        *t.entry(Bigrading::new(e.maslov, e.alexander.clone())).or_default() += e.rank;
    }
    t.retain(|_, r| *r > 0);
    t
}

pub fn total_rank(t: &HomologyTable) -> usize {
    t.values().sum()
}

impl GradedComplex {
    pub fn check_gradings(&self) -> Result<(), FloerError> {
        for (s, targets) in self.boundary.iter().enumerate() {
            let g = &self.generators[s];
            for &t in targets {
                let h = &self.generators[t];
                if h.maslov != g.maslov - 1 || h.alexander != g.alexander {
                    return Err(FloerError::BadGrading);
                }
            }
        }
        Ok(())
    }

    pub fn d_squared_is_zero(&self) -> bool {
        self.boundary.par_iter().all(|targets| {
            let mut acc = BTreeSet::new();
            for &t in targets {
                for &u in &self.boundary[t] {
                    if !acc.insert(u) {
                        acc.remove(&u);
                    }
                }
            }
            acc.is_empty()
        })
    }

    /// Generator counts per bigrading.
    pub fn chain_table(&self) -> HomologyTable {
        let mut t = HomologyTable::new();
        for g in &self.generators {
            *t.entry(g.clone()).or_default() += 1;
        }
        t
    }
}

/// Homology ranks per bigrading, by elimination within each Alexander
/// degree.
pub fn homology_table(c: &GradedComplex) -> Result<HomologyTable, FloerError> {
    c.check_gradings()?;
    let mut blocks: BTreeMap<&Vec<i64>, BTreeMap<i64, Vec<usize>>> = BTreeMap::new();
    for (i, g) in c.generators.iter().enumerate() {
        blocks.entry(&g.alexander).or_default().entry(g.maslov).or_default().push(i);
    }
    let mut index = vec![0; c.generators.len()];
    for by_m in blocks.values() {
        for gens in by_m.values() {
            for (k, &g) in gens.iter().enumerate() {
                index[g] = k;
            }
        }
    }
    let tables: Vec<HomologyTable> = blocks
        .par_iter()
        .map(|(a, by_m)| {
            let rank_from = |m: i64| -> usize {
                let (Some(src), Some(dst)) = (by_m.get(&m), by_m.get(&(m - 1))) else {
                    return 0;
                };
                let mut mat = BitMatrix::new(src.len(), dst.len());
                for (r, &s) in src.iter().enumerate() {
                    for &t in &c.boundary[s] {
                        mat.toggle(r, index[t]);
                    }
                }
                mat.rank()
            };
            let ranks: BTreeMap<i64, usize> = by_m.keys().map(|&m| (m, rank_from(m))).collect();
            let mut t = HomologyTable::new();
            for (&m, gens) in by_m {
                let h = gens.len() - ranks[&m] - ranks.get(&(m + 1)).copied().unwrap_or(0);
                if h > 0 {
                    t.insert(Bigrading::new(m, (*a).clone()), h);
                }
            }
            t
        })
        .collect();
    Ok(tables.into_iter().flatten().collect())
}

/// Graded tensor product of two tables.
pub fn tensor_tables(a: &HomologyTable, b: &HomologyTable) -> HomologyTable {
    let mut t = HomologyTable::new();
    for (ga, ra) in a {
        for (gb, rb) in b {
            *t.entry(ga.plus(gb)).or_default() += ra * rb;
        }
    }
    t
}

/// `sum rank * q^M * t^A`; the first exponent is `2M`, then doubled `A`.
pub fn poincare_polynomial(t: &HomologyTable) -> LaurentPoly {
    let vars = 1 + t.keys().next().map_or(0, |g| g.alexander.len());
    let mut p = LaurentPoly::zero(vars);
    for (g, &r) in t {
        let mut e = vec![2 * g.maslov];
        e.extend(&g.alexander);
        p.add_term(e, r as i64);
    }
    p
}

fn divide_once(p: &LaurentPoly, var: usize) -> Result<LaurentPoly, FloerError> {
    let mut rest = p.clone();
    let mut q = LaurentPoly::zero(p.vars);
    let floor = p.terms.keys().map(|e| e[0]).min().unwrap_or(0);
    while let Some((e, &c)) = rest.terms.iter().max_by_key(|(e, _)| (e[0], (*e).clone())) {
        if e[0] <= floor || c < 0 {
            return Err(FloerError::InexactDivision);
        }
        let e = e.clone();
        let mut shifted = e.clone();
        shifted[0] -= 2;
        shifted[var] -= 2;
        q.add_term(e.clone(), c);
        rest.add_term(e, -c);
        rest.add_term(shifted, -c);
    }
    Ok(q)
}

/// Divide out `(1 + q^-1 t_i^-1)^k_i`, one factor of `V_i` at a time.
pub fn hat_extract(t: &HomologyTable, k: &[usize]) -> Result<HomologyTable, FloerError> {
    let mut p = poincare_polynomial(t);
    for (i, &ki) in k.iter().enumerate() {
        for _ in 0..ki {
            p = divide_once(&p, i + 1)?;
        }
    }
    let mut out = HomologyTable::new();
    for (e, &c) in &p.terms {
        if c < 0 {
            return Err(FloerError::InexactDivision);
        }
        out.insert(Bigrading::new(e[0] / 2, e[1..].to_vec()), c as usize);
    }
    Ok(out)
}

/// `sum (-1)^M rank t^A`.
pub fn euler_characteristic(t: &HomologyTable, components: usize) -> LaurentPoly {
    let mut p = LaurentPoly::zero(components);
    for (g, &r) in t {
        let sign = if g.maslov.rem_euclid(2) == 0 { 1 } else { -1 };
        p.add_term(g.alexander.clone(), sign * r as i64);
    }
    p
}

/// Stabilization exponents: `n_i - 1` per component for grids, `2n_i - 2`
/// for hypercubes.
pub fn hat_exponents(c: &GradedComplex) -> Vec<usize> {
    let per = match c.variant {
        Variant::GridTilde => 1,
        Variant::HyperTilde => 2,
    };
    c.marking_counts.iter().map(|&n| per * (n - 1)).collect()
}

/// Homology of the hat theory: the tilde table with the `V_i` factors
/// divided out.
pub fn hat_table(c: &GradedComplex) -> Result<HomologyTable, FloerError> {
    hat_extract(&homology_table(c)?, &hat_exponents(c))
}
