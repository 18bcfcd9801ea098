//! Searching for hypercube diagrams with prescribed projections, and
//! repairing inconsistent marking tables.

use std::collections::{BTreeMap, HashSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::floer::{
    self, build_grid_tilde_complex, euler_characteristic, grid_alexander_polynomial, hat_extract, homology_table,
    table_entries, tensor_tables, FloerError, HomologyTable, LaurentPoly, TableEntry,
};
use crate::grid::GridDiagram;
use crate::hmoves::swap_markings;
use crate::hypercube::{complete_markings, Family, HyperPlane, HypercubeDiagram, Markings, AXIS, FAMILY};
use crate::pltorus::{classify_report, CircleClass, TorusClass};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Predicate {
    Any,
    /// One component with trivial Alexander polynomial.
    Unknot,
    /// Two components with linking number +-1.
    Hopf,
    /// Two components, linking number 0, hat rank 2.
    Split2,
    /// One component with Alexander polynomial `t - 1 + t^-1`.
    Trefoil,
    /// One component with Alexander polynomial `2t - 3 + 2t^-1`.
    FiveTwo,
}

impl std::str::FromStr for Predicate {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "any" => Predicate::Any,
            "unknot" => Predicate::Unknot,
            "hopf" => Predicate::Hopf,
            "split2" => Predicate::Split2,
            "trefoil" => Predicate::Trefoil,
            "fivetwo" | "five-two" | "52" => Predicate::FiveTwo,
            _ => return Err(format!("unknown predicate {s:?}")),
        })
    }
}

impl Predicate {
    pub fn holds(self, g: &GridDiagram) -> bool {
        let comps = g.trace_components().len();
        match self {
            Predicate::Any => true,
            Predicate::Unknot => comps == 1 && grid_alexander_polynomial(g) == [1],
            Predicate::Trefoil => comps == 1 && grid_alexander_polynomial(g) == [1, -1, 1],
            Predicate::FiveTwo => comps == 1 && grid_alexander_polynomial(g) == [2, -3, 2],
            Predicate::Hopf => comps == 2 && g.linking_number(0, 1).is_ok_and(|l| l.abs() == 1),
            Predicate::Split2 => {
                comps == 2
                    && g.linking_number(0, 1) == Ok(0)
                    && build_grid_tilde_complex(g)
                        .and_then(|c| floer::hat_table(&c))
                        .is_ok_and(|t| floer::total_rank(&t) == 2)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassFilter {
    Any,
    Lagrangian,
    Embedded,
    Immersed,
}

impl std::str::FromStr for ClassFilter {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "any" => ClassFilter::Any,
            "lagrangian" => ClassFilter::Lagrangian,
            "embedded" => ClassFilter::Embedded,
            "immersed" => ClassFilter::Immersed,
            _ => return Err(format!("unknown class {s:?}")),
        })
    }
}

impl ClassFilter {
    pub fn admits(self, c: TorusClass) -> bool {
        match self {
            ClassFilter::Any => true,
            ClassFilter::Lagrangian => c == TorusClass::EmbeddedLagrangian,
            ClassFilter::Embedded => c == TorusClass::Embedded,
            ClassFilter::Immersed => c == TorusClass::Immersed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// Independent random candidates.
    Sample,
    /// Restarts of a walk over the free `(y, z)` positions of W that lowers
    /// the number of crossing violations.
    Anneal,
}

impl std::str::FromStr for Strategy {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "sample" => Ok(Strategy::Sample),
            "anneal" => Ok(Strategy::Anneal),
            _ => Err(format!("unknown strategy {s:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchSpec {
    pub size: usize,
    /// Exact `G_wx`, pinning the `(w, x)` positions of W and X.
    pub target_wx: Option<GridDiagram>,
    pub wx: Predicate,
    pub yz: Predicate,
    pub class: ClassFilter,
    /// Maximum number of candidates.
    pub budget: usize,
    /// Stop after this many distinct hits.
    pub max_hits: usize,
    pub seed: u64,
    pub strategy: Strategy,
}

impl SearchSpec {
    pub fn new(size: usize) -> Self {
        SearchSpec {
            size,
            target_wx: None,
            wx: Predicate::Any,
            yz: Predicate::Any,
            class: ClassFilter::Any,
            budget: 10_000,
            max_hits: 1,
            seed: 0,
            strategy: Strategy::Sample,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SearchStats {
    pub candidates_tried: usize,
    pub marking_valid: usize,
    pub crossing_valid: usize,
    pub class_histogram: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchHit {
    pub candidate: usize,
    pub class: TorusClass,
    pub markings: Markings,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchResult {
    pub hits: Vec<SearchHit>,
    pub stats: SearchStats,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("no hit within {} candidates", .0.candidates_tried)]
    BudgetExhausted(SearchStats),
    #[error("target grid has size {0}, larger than the search size {1}")]
    TargetTooLarge(usize, usize),
    #[error("no repair within {0} edits")]
    NoRepairWithinBudget(usize),
}

/// Candidate with `(w, x)` positions of W and X copied from `g` and random
/// `(y, z)` positions of W.
pub fn pinned_markings<R: Rng>(g: &GridDiagram, rng: &mut R) -> Markings {
    let (ys, zs) = random_yz(g.size(), rng);
    Lift::pinned(g).markings(&ys, &zs)
}

fn random_yz<R: Rng>(n: usize, rng: &mut R) -> (Vec<usize>, Vec<usize>) {
    let mut ys: Vec<usize> = (0..n).collect();
    let mut zs = ys.clone();
    ys.shuffle(rng);
    zs.shuffle(rng);
    (ys, zs)
}

/// The `(w, x)` positions of W and the `w` positions of X; the rest of a
/// table follows from the `(y, z)` positions of W.
struct Lift {
    w_wx: Vec<(usize, usize)>,
    x_w: Vec<usize>,
}

impl Lift {
    fn pinned(g: &GridDiagram) -> Lift {
        let n = g.size();
        Lift { w_wx: (0..n).map(|x| (g.x_col()[x], x)).collect(), x_w: g.y_col().to_vec() }
    }

    fn of(m: &Markings) -> Lift {
        Lift { w_wx: m.w.iter().map(|p| (p[0], p[1])).collect(), x_w: m.x.iter().map(|p| p[0]).collect() }
    }

    fn markings(&self, ys: &[usize], zs: &[usize]) -> Markings {
        let w_yz: Vec<(usize, usize)> = ys.iter().zip(zs).map(|(&y, &z)| (y, z)).collect();
        complete_markings(&self.w_wx, &w_yz, &self.x_w)
    }
}

enum Outcome {
    MarkingInvalid,
    CrossingInvalid,
    Valid(TorusClass, Option<Markings>),
}

fn evaluate(spec: &SearchSpec, m: Markings) -> Outcome {
    if m.check_marking_conditions().is_err() {
        return Outcome::MarkingInvalid;
    }
    let Ok(h) = m.validate() else { return Outcome::CrossingInvalid };
    let Ok(report) = classify_report(&h) else { return Outcome::CrossingInvalid };
    let keep = spec.class.admits(report.class)
        && spec.wx.holds(&h.project_grid(HyperPlane::Wx))
        && spec.yz.holds(&h.project_grid(HyperPlane::Yz));
    Outcome::Valid(report.class, keep.then_some(m))
}

fn candidate(spec: &SearchSpec, index: usize) -> Markings {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    rng.set_stream(index as u64);
    match &spec.target_wx {
        Some(g) => pinned_markings(g, &mut rng),
        None => crate::hypercube::generate_markings(spec.size, &mut rng),
    }
}

const ANNEAL_STEPS: usize = 4000;
const ANNEAL_UPHILL: f64 = 0.1;

fn violation_count(m: &Markings) -> usize {
    m.crossing_violations().map_or(usize::MAX, |v| v.len())
}

/// One annealing restart: `ANNEAL_STEPS` proposals swapping two `y` or two
/// `z` positions, keeping moves that do not add violations and, with
/// probability `ANNEAL_UPHILL`, moves that do.
fn anneal_restart(spec: &SearchSpec, restart: usize, steps: usize) -> Vec<(usize, Outcome)> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    rng.set_stream(restart as u64);
    let n = spec.size;
    let lift = match &spec.target_wx {
        Some(g) => Lift::pinned(g),
        None => Lift::of(&crate::hypercube::generate_markings(n, &mut rng)),
    };
    let (mut ys, mut zs) = random_yz(n, &mut rng);
    let mut cost = violation_count(&lift.markings(&ys, &zs));
    let mut out = Vec::with_capacity(steps);
    for step in 0..steps {
        let (mut ys2, mut zs2) = (ys.clone(), zs.clone());
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if rng.gen_bool(0.5) {
            ys2.swap(i, j);
        } else {
            zs2.swap(i, j);
        }
        let m = lift.markings(&ys2, &zs2);
        let c = violation_count(&m);
        let outcome = if c == 0 { evaluate(spec, m) } else if c == usize::MAX {
            Outcome::MarkingInvalid
        } else {
            Outcome::CrossingInvalid
        };
        out.push((restart * steps + step, outcome));
        if c <= cost || rng.gen_bool(ANNEAL_UPHILL) {
            (ys, zs, cost) = (ys2, zs2, c);
        }
    }
    out
}

/// Key identifying a diagram up to relabeling and the swap move.
fn swap_class_key(m: &Markings) -> String {
    let a = serde_json::to_string(&m.canonical()).expect("serializable");
    let b = serde_json::to_string(&swap_markings(m).canonical()).expect("serializable");
    a.min(b)
}

/// Randomized search. Sampled candidate `i`, or annealing restart `i`,
/// draws from stream `i` of the seeded generator, so results do not depend
/// on scheduling. Annealing budgets count proposals.
pub fn search_lifts(spec: &SearchSpec) -> Result<SearchResult, SearchError> {
    if let Some(g) = &spec.target_wx {
        if g.size() != spec.size {
            return Err(SearchError::TargetTooLarge(g.size(), spec.size));
        }
    }
    let chunk = match spec.strategy {
        Strategy::Sample => 2048,
        Strategy::Anneal => 4 * ANNEAL_STEPS,
    };
    let mut stats = SearchStats::default();
    let mut hits = Vec::new();
    let mut seen = HashSet::new();
    let mut start = 0;
    while start < spec.budget && hits.len() < spec.max_hits {
        let end = (start + chunk).min(spec.budget);
        let outcomes: Vec<(usize, Outcome)> = match spec.strategy {
            Strategy::Sample => {
                (start..end).into_par_iter().map(|i| (i, evaluate(spec, candidate(spec, i)))).collect()
            }
            Strategy::Anneal => (start / ANNEAL_STEPS..end.div_ceil(ANNEAL_STEPS))
                .into_par_iter()
                .flat_map_iter(|r| anneal_restart(spec, r, ANNEAL_STEPS))
                .filter(|(i, _)| (start..end).contains(i))
                .collect(),
        };
        for (i, outcome) in outcomes {
            if hits.len() >= spec.max_hits {
                break;
            }
            stats.candidates_tried += 1;
            match outcome {
                Outcome::MarkingInvalid => {}
                Outcome::CrossingInvalid => stats.marking_valid += 1,
                Outcome::Valid(class, keep) => {
                    stats.marking_valid += 1;
                    stats.crossing_valid += 1;
                    *stats.class_histogram.entry(format!("{class:?}")).or_default() += 1;
                    if let Some(m) = keep {
                        if seen.insert(swap_class_key(&m)) {
                            hits.push(SearchHit { candidate: i, class, markings: m });
                        }
                    }
                }
            }
        }
        start = end;
    }
    if hits.is_empty() {
        return Err(SearchError::BudgetExhausted(stats));
    }
    Ok(SearchResult { hits, stats })
}

/// One changed coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edit {
    pub family: char,
    pub index: usize,
    pub axis: char,
    pub from: usize,
    pub to: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Repair {
    pub edits: Vec<Edit>,
    pub markings: Markings,
}

/// Per family and axis, the entries sharing a level and the missing levels.
fn permutation_defects(m: &Markings) -> Vec<(usize, usize, Vec<usize>, Vec<usize>)> {
    let n = m.size;
    let mut out = Vec::new();
    for (f, fam) in m.families().iter().enumerate() {
        for axis in 0..4 {
            let mut by_level = vec![Vec::new(); n];
            fam.iter().enumerate().for_each(|(i, p)| by_level[p[axis]].push(i));
            let missing: Vec<usize> = (0..n).filter(|&l| by_level[l].is_empty()).collect();
            if missing.is_empty() {
                continue;
            }
            let dupes: Vec<usize> = by_level.iter().filter(|v| v.len() > 1).flatten().copied().collect();
            out.push((f, axis, dupes, missing));
        }
    }
    out
}

fn apply_edit(m: &mut Markings, f: usize, index: usize, axis: usize, to: usize) -> Edit {
    let p = &mut m.family_mut(Family::from_index(f))[index];
    let e = Edit { family: FAMILY[f], index, axis: AXIS[axis], from: p[axis], to };
    p[axis] = to;
    e
}

fn edit_position(e: &Edit) -> (usize, usize, usize) {
    let pos = |set: &[char; 4], c: char| set.iter().position(|&x| x == c).expect("known label");
    (pos(&FAMILY, e.family), e.index, pos(&AXIS, e.axis))
}

fn repair_rec(m: &Markings, edits: &mut Vec<Edit>, budget: usize, out: &mut Vec<Repair>) {
    if m.validate().is_ok() {
        out.push(Repair { edits: edits.clone(), markings: m.clone() });
        return;
    }
    if edits.len() == budget {
        return;
    }
    let defects = permutation_defects(m);
    let needed: usize = defects.iter().map(|d| d.3.len()).sum();
    if edits.len() + needed > budget {
        return;
    }
    let n = m.size;
    let options: Vec<(usize, usize, usize, usize)> = match defects.first() {
        // Move one duplicated entry to the first missing level.
        Some((f, axis, dupes, missing)) => dupes.iter().map(|&i| (*f, i, *axis, missing[0])).collect(),
        // Permutations hold: try any single coordinate.
        None => (0..4)
            .flat_map(|f| (0..n).flat_map(move |i| (0..4).flat_map(move |a| (0..n).map(move |v| (f, i, a, v)))))
            .filter(|&(f, i, a, v)| m.families()[f][i][a] != v)
            .collect(),
    };
    for (f, i, axis, to) in options {
        // Free edits are taken in increasing position order.
        if defects.is_empty() && edits.last().is_some_and(|e| edit_position(e) >= (f, i, axis)) {
            continue;
        }
        let mut next = m.clone();
        edits.push(apply_edit(&mut next, f, i, axis, to));
        repair_rec(&next, edits, budget, out);
        edits.pop();
    }
}

/// All valid tables within `budget` coordinate edits, fewest edits first.
/// Entries that already form permutations are kept fixed until every
/// family is a permutation on every axis.
pub fn repair_fixture(m: &Markings, budget: usize) -> Result<Vec<Repair>, SearchError> {
    for depth in 0..=budget {
        let mut out = Vec::new();
        repair_rec(m, &mut Vec::new(), depth, &mut out);
        if !out.is_empty() {
            let mut seen = HashSet::new();
            out.retain(|r| seen.insert(serde_json::to_string(&r.markings.canonical()).expect("serializable")));
            return Ok(out);
        }
    }
    Err(SearchError::NoRepairWithinBudget(budget))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ProjectionSummary {
    pub plane: String,
    pub components: usize,
    pub crossings: usize,
    pub writhe: i64,
    pub linking_number: Option<i64>,
    pub alexander_polynomial: Option<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FixtureReport {
    pub size: usize,
    pub components: usize,
    pub marking_counts: Vec<usize>,
    pub projections: Vec<ProjectionSummary>,
    pub class: TorusClass,
    pub horizontal_circles: usize,
    pub vertical_circles: usize,
    pub euler_cells: [usize; 3],
    pub tilde: Vec<TableEntry>,
    pub hat: Vec<TableEntry>,
    pub euler: String,
    pub euler_terms: Vec<(Vec<i64>, i64)>,
}

fn summarize(h: &HypercubeDiagram, plane: HyperPlane) -> ProjectionSummary {
    let g = h.project_grid(plane);
    let comps = g.trace_components().len();
    ProjectionSummary {
        plane: plane.name().to_string(),
        components: comps,
        crossings: g.crossing_cells().len(),
        writhe: g.writhe(),
        linking_number: (comps == 2).then(|| g.linking_number(0, 1).expect("two components")),
        alexander_polynomial: (comps == 1).then(|| grid_alexander_polynomial(&g)),
    }
}

/// Tilde and hat tables of a hypercube through the tensor product of its
/// two grid complexes, with components labelled by the hyperlink.
pub fn hyper_tables_via_tensor(h: &HypercubeDiagram) -> Result<(HomologyTable, HomologyTable), FloerError> {
    let (wx, yz) = floer::hyper_complex::projection_graders(h);
    let a = homology_table(&floer::grid_complex::build_grid_tilde_with(&wx)?)?;
    let b = homology_table(&floer::grid_complex::build_grid_tilde_with(&yz)?)?;
    let tilde = tensor_tables(&a, &b);
    let k: Vec<usize> = wx.marking_counts.iter().map(|&n| 2 * n - 2).collect();
    let hat = hat_extract(&tilde, &k)?;
    Ok((tilde, hat))
}

/// Tilde and hat tables: the direct complex when `n` is within the bound,
/// the tensor route otherwise.
pub fn hyper_tables(h: &HypercubeDiagram) -> Result<(HomologyTable, HomologyTable), FloerError> {
    if h.size() <= floer::hyper_size_bound() {
        let c = floer::build_hyper_tilde_complex(h)?;
        let tilde = homology_table(&c)?;
        let hat = hat_extract(&tilde, &floer::hat_exponents(&c))?;
        Ok((tilde, hat))
    } else {
        hyper_tables_via_tensor(h)
    }
}

pub fn fixture_report(h: &HypercubeDiagram) -> Result<FixtureReport, FloerError> {
    let link = h.trace_hyperlink().expect("valid diagram");
    let torus = classify_report(h).expect("valid diagrams give a closed PL torus");
    let (tilde, hat) = hyper_tables(h)?;
    let chi: LaurentPoly = euler_characteristic(&hat, link.len());
    let count = |c| torus.circles.iter().filter(|x| x.class == c).count();
    Ok(FixtureReport {
        size: h.size(),
        components: link.len(),
        marking_counts: link.marking_counts(),
        projections: HyperPlane::ALL.iter().map(|&p| summarize(h, p)).collect(),
        class: torus.class,
        horizontal_circles: count(CircleClass::Horizontal),
        vertical_circles: count(CircleClass::Vertical),
        euler_cells: [torus.counts.vertices, torus.counts.edges, torus.counts.faces],
        tilde: table_entries(&tilde),
        hat: table_entries(&hat),
        euler: chi.to_string(),
        euler_terms: chi.terms.iter().map(|(e, &c)| (e.clone(), c)).collect(),
    })
}
