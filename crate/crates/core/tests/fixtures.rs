use std::path::PathBuf;

use hyperkube::grid::{examples as grids, GridDiagram};
use hyperkube::hmoves::{stabilize_w, swap_markings};
use hyperkube::hypercube::examples::{hopf_table_as_printed, standard_torus};
use hyperkube::hypercube::parse_schematic;
use hyperkube::hypercube::{HyperPlane, Markings};
use hyperkube::pltorus::{classify_report, CircleClass, TorusClass};
use hyperkube::search::*;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn load(name: &str) -> Markings {
    let text = std::fs::read_to_string(root().join(format!("{name}.json"))).unwrap();
    serde_json::from_str(&text).unwrap()
}

fn five_two_grid() -> GridDiagram {
    serde_json::from_str(&std::fs::read_to_string(root().join("five_two_grid.json")).unwrap()).unwrap()
}

const FIXTURES: [&str; 6] =
    ["standard_torus", "stabilized_torus", "trefoil", "once_linked", "hopf_linked", "trefoil_five_two"];

fn same(a: &Markings, b: &Markings) -> bool {
    a.canonical() == b.canonical()
}

#[test]
fn fixtures_validate_and_round_trip() {
    for name in FIXTURES {
        let m = load(name);
        assert!(m.validate().is_ok(), "{name}");
        let back: Markings = serde_json::from_str(&serde_json::to_string(&m).unwrap()).unwrap();
        assert_eq!(back, m);
    }
}

#[test]
fn standard_fixtures_regenerate() {
    assert!(same(&load("standard_torus"), standard_torus().markings()));
    assert!(same(&load("stabilized_torus"), stabilize_w(&standard_torus(), 0).unwrap().markings()));
}

#[test]
fn trefoil_fixture_regenerates() {
    let mut spec = SearchSpec::new(5);
    spec.target_wx = Some(grids::trefoil5_short());
    spec.class = ClassFilter::Embedded;
    spec.budget = 20_000;
    let r = search_lifts(&spec).unwrap();
    assert_eq!(r.hits[0].candidate, 1355);
    assert!(same(&load("trefoil"), &r.hits[0].markings));
}

#[test]
fn once_linked_fixture_regenerates() {
    let mut spec = SearchSpec::new(4);
    spec.wx = Predicate::Hopf;
    spec.yz = Predicate::Split2;
    spec.class = ClassFilter::Embedded;
    spec.budget = 20_000;
    let r = search_lifts(&spec).unwrap();
    assert_eq!(r.hits[0].candidate, 2376);
    assert!(same(&load("once_linked"), &r.hits[0].markings));
}

#[test]
fn hopf_fixture_is_the_repaired_table() {
    let r = repair_fixture(&hopf_table_as_printed(), 4).unwrap();
    assert!(same(&load("hopf_linked"), &r[0].markings));
}

#[test]
fn trefoil_five_two_fixture_regenerates() {
    let g = five_two_grid();
    assert!(Predicate::FiveTwo.holds(&g));
    let mut spec = SearchSpec::new(7);
    spec.target_wx = Some(g);
    spec.yz = Predicate::Trefoil;
    spec.class = ClassFilter::Immersed;
    spec.strategy = Strategy::Anneal;
    spec.budget = 400_000;
    let r = search_lifts(&spec).unwrap();
    assert_eq!(r.hits[0].candidate, 3680);
    assert!(same(&load("trefoil_five_two"), &swap_markings(&r.hits[0].markings)));
}

#[test]
fn fixture_links_and_classes() {
    let cases: [(&str, TorusClass, Predicate, Predicate); 6] = [
        ("standard_torus", TorusClass::EmbeddedLagrangian, Predicate::Unknot, Predicate::Unknot),
        ("stabilized_torus", TorusClass::EmbeddedLagrangian, Predicate::Unknot, Predicate::Unknot),
        ("trefoil", TorusClass::Embedded, Predicate::Trefoil, Predicate::Unknot),
        ("once_linked", TorusClass::Embedded, Predicate::Hopf, Predicate::Split2),
        ("hopf_linked", TorusClass::Embedded, Predicate::Hopf, Predicate::Hopf),
        ("trefoil_five_two", TorusClass::Immersed, Predicate::Trefoil, Predicate::FiveTwo),
    ];
    for (name, class, wx, yz) in cases {
        let h = load(name).validate().unwrap();
        let r = classify_report(&h).unwrap();
        assert_eq!(r.class, class, "{name}");
        assert!(wx.holds(&h.project_grid(HyperPlane::Wx)), "{name}");
        assert!(yz.holds(&h.project_grid(HyperPlane::Yz)), "{name}");
        let n = h.size();
        assert_eq!((r.counts.vertices, r.counts.edges, r.counts.faces), (4 * n * n, 8 * n * n, 4 * n * n));
    }
    let r = classify_report(&load("trefoil_five_two").validate().unwrap()).unwrap();
    assert!(r.circles.iter().any(|c| c.class == CircleClass::Horizontal));
    assert!(r.circles.iter().any(|c| c.class == CircleClass::Vertical));
}

fn check_golden(name: &str, actual: &str) {
    let path = root().join("golden").join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, actual).unwrap();
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {name}"));
    assert_eq!(actual, expected, "{name} differs from its golden file");
}

#[test]
fn grid_renderings_match_golden_files() {
    for (name, g) in [("unknot2", grids::unknot2()), ("hopf4", grids::hopf4()), ("trefoil5", grids::trefoil5_short())] {
        check_golden(&format!("{name}.txt"), &g.render_ascii());
    }
}

#[test]
fn schematics_match_golden_files_and_parse_back() {
    for name in ["standard_torus", "once_linked", "hopf_linked"] {
        let m = load(name);
        let text = m.validate().unwrap().render_schematic();
        check_golden(&format!("{name}.schematic.txt"), &text);
        assert!(same(&parse_schematic(&text).unwrap(), &m), "{name}");
    }
}
