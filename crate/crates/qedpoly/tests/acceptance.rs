//! End-to-end acceptance gate: six criteria covering the classical
//! polynomials, the wheel cycle catalogue, the identity battery, the
//! theorem verification, the worked one- and two-loop fragments, and the
//! structural property suites. Every comparison is exact equality of
//! canonical forms.

use std::panic::{catch_unwind, resume_unwind, AssertUnwindSafe};
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use qedpoly::corpus;
use qedpoly::fixtures;
use qedpoly::grapoly::{self, IndexLabel, QuadForm};
use qedpoly::graph::{Edge, EdgeKind, Graph};
use qedpoly::identities::CheckSummary;
use qedpoly::integrand::{self, Gauge};
use qedpoly::oracle;
use qedpoly::polyring::{EpsLaurent, Poly};

fn criterion(n: u32, name: &str, f: impl FnOnce()) {
    let result = catch_unwind(AssertUnwindSafe(f));
    let verdict = if result.is_ok() { "pass" } else { "fail" };
    println!("criterion {n} ({name}): {verdict}");
    if let Err(cause) = result {
        resume_unwind(cause);
    }
}

fn v(i: u32) -> Poly {
    Poly::var(i)
}

fn eps(slices: &[(i32, Poly)]) -> EpsLaurent {
    let mut out = EpsLaurent::zero();
    for (k, p) in slices {
        out.add_slice(*k, p.clone());
    }
    out
}

const RANDOM_SEED: u64 = 11;
const RANDOM_SAMPLES: usize = 200;

/// The shared lemma-suite run over the criterion-3 corpus, computed once and
/// reused by criterion 6.
fn battery() -> &'static (usize, usize, CheckSummary, Duration) {
    static BATTERY: OnceLock<(usize, usize, CheckSummary, Duration)> = OnceLock::new();
    BATTERY.get_or_init(|| {
        let start = Instant::now();
        let mut graphs = corpus::exhaustive_connected(5);
        let exhaustive = graphs.len();
        let random = corpus::random_connected(10, RANDOM_SAMPLES, RANDOM_SEED);
        let sampled = random.len();
        graphs.extend(random);
        let summary = qedpoly::identities::check_corpus(&graphs);
        (exhaustive, sampled, summary, start.elapsed())
    })
}

#[test]
fn criterion_1_classical_polynomials() {
    criterion(1, "classical polynomials", || {
        let start = Instant::now();
        let g1 = fixtures::two_loop_vacuum_polarization();
        let g2 = fixtures::one_loop_vertex();

        let psi1 = grapoly::kirchhoff(&g1);
        let expected1 = (v(2) + v(5)) * (v(3) + v(4)) + v(1) * (v(2) + v(3) + v(4) + v(5));
        assert_eq!(psi1, expected1, "two-loop Kirchhoff polynomial");

        let psi2 = grapoly::kirchhoff(&g2);
        assert_eq!(psi2, v(1) + v(2) + v(3), "one-loop Kirchhoff polynomial");

        let phi2 = grapoly::symanzik2(&g2).unwrap();
        let mut expected = QuadForm::zero();
        expected.add_entry(1, 1, v(1) * v(2) + v(1) * v(3));
        expected.add_entry(2, 2, v(1) * v(2) + v(2) * v(3));
        expected.add_entry(3, 3, v(1) * v(3) + v(2) * v(3));
        expected.add_entry(1, 2, -(v(1) * v(2)));
        expected.add_entry(1, 3, -(v(1) * v(3)));
        expected.add_entry(2, 3, -(v(2) * v(3)));
        assert_eq!(phi2, expected, "one-loop symbolic second Symanzik form");

        let ma1 = integrand::momentum_paths(&g1).unwrap();
        let eval1 = integrand::evaluate_quadform(&grapoly::symanzik2(&g1).unwrap(), &ma1);
        let q_sq = v(2) * v(5) * (v(1) + v(3) + v(4))
            + v(3) * v(4) * (v(1) + v(2) + v(5))
            + v(1) * v(2) * v(4)
            + v(1) * v(3) * v(5);
        assert_eq!(eval1.entries.len(), 1, "a propagator graph depends on one momentum");
        assert_eq!(
            eval1.entries[&("q1".to_string(), "q1".to_string())],
            q_sq,
            "two-loop physical second Symanzik polynomial"
        );

        let ma2 = integrand::momentum_paths(&g2).unwrap();
        let eval2 = integrand::evaluate_quadform(&grapoly::symanzik2(&g2).unwrap(), &ma2);
        assert_eq!(eval2.entries.len(), 3, "vertex graph carries two independent momenta");
        assert_eq!(eval2.entries[&("q1".to_string(), "q1".to_string())], v(1) * v(3) + v(2) * v(3));
        assert_eq!(eval2.entries[&("q2".to_string(), "q2".to_string())], v(1) * v(2) + v(1) * v(3));
        assert_eq!(
            eval2.entries[&("q1".to_string(), "q2".to_string())],
            Poly::constant(2) * v(1) * v(3),
            "mixed momentum coefficient of the vertex graph"
        );

        assert!(start.elapsed() < Duration::from_secs(1), "criterion 1 exceeded 1 s");
    });
}

#[test]
fn criterion_2_wheel_cycle_catalogue() {
    criterion(2, "wheel cycle catalogue", || {
        let start = Instant::now();
        let g = fixtures::wheel3();
        let cycles = g.simple_cycles().unwrap();
        assert_eq!(cycles.len(), 7, "the three-spoke wheel has exactly seven simple cycles");

        let expected: Vec<(Vec<u32>, Poly)> = vec![
            (vec![1, 2, 5], v(3) * v(4) + v(3) * v(6) + v(4) * v(6)),
            (vec![1, 3, 4], v(2) * v(5) + v(2) * v(6) + v(5) * v(6)),
            (vec![2, 3, 6], v(1) * v(4) + v(1) * v(5) + v(4) * v(5)),
            (vec![4, 5, 6], v(1) * v(2) + v(1) * v(3) + v(2) * v(3)),
            (vec![1, 2, 4, 6], v(3) * v(5)),
            (vec![1, 3, 5, 6], v(2) * v(4)),
            (vec![2, 3, 4, 5], v(1) * v(6)),
        ];
        for (edges, psi_contracted) in &expected {
            let cycle = cycles
                .iter()
                .find(|c| c.edge_ids().collect::<Vec<_>>() == *edges)
                .unwrap_or_else(|| panic!("cycle {edges:?} not found"));
            let contracted = g.contract(&cycle.edge_ids().collect::<Vec<_>>()).unwrap();
            assert_eq!(
                grapoly::kirchhoff(&contracted),
                *psi_contracted,
                "Kirchhoff polynomial of the wheel contracted along {edges:?}"
            );
        }

        let chi1 = grapoly::chi_edge(&g, 1).unwrap();
        assert_eq!(
            chi1,
            (v(2) + v(3)) * (v(4) + v(5)) + v(6) * (v(2) + v(3) + v(4) + v(5)),
            "diagonal cycle polynomial at the first rim edge"
        );
        assert_eq!(
            grapoly::chi_pair(&g, 1, 2).unwrap(),
            -(v(3) * (v(4) + v(5) + v(6))) - v(4) * v(6),
            "adjacent rim pair"
        );
        assert_eq!(grapoly::chi_pair(&g, 1, 6).unwrap(), v(3) * v(5) - v(2) * v(4), "rim-spoke pair");

        assert!(start.elapsed() < Duration::from_secs(1), "criterion 2 exceeded 1 s");
    });
}

#[test]
fn criterion_3_lemma_suite_over_the_corpus() {
    criterion(3, "lemma suite over the corpus", || {
        let (exhaustive, sampled, summary, elapsed) = battery();
        assert!(*exhaustive > 100, "exhaustive corpus is non-trivial, got {exhaustive}");
        assert_eq!(*sampled, RANDOM_SAMPLES, "random corpus size");
        assert_eq!(summary.graphs, exhaustive + sampled);
        for failure in &summary.failures {
            eprintln!("identity failure: {} on {}: {}", failure.check, failure.graph, failure.detail);
        }
        assert!(summary.is_ok(), "{} identity checks failed", summary.failures.len());
        assert!(summary.checks > 10_000, "battery ran {} checks", summary.checks);
        assert!(*elapsed < Duration::from_secs(120), "criterion 3 exceeded 2 min: {elapsed:?}");
    });
}

#[test]
fn criterion_4_theorem_boundary() {
    criterion(4, "numerator theorem against the oracle", || {
        let start = Instant::now();
        let one_loop = oracle::verify_theorem(&fixtures::one_loop_vertex()).unwrap();
        assert!(one_loop.general.equal, "one-loop vertex, general gauge");
        assert!(one_loop.feynman.equal, "one-loop vertex, Feynman gauge");
        let two_loop = oracle::verify_theorem(&fixtures::two_loop_vacuum_polarization()).unwrap();
        assert!(two_loop.general.equal, "two-loop vacuum polarization, general gauge");
        assert!(two_loop.feynman.equal, "two-loop vacuum polarization, Feynman gauge");
        assert!(start.elapsed() < Duration::from_secs(30), "criterion 4 exceeded 30 s");
    });
}

#[test]
fn criterion_5_worked_fragments() {
    criterion(5, "worked one- and two-loop fragments", || {
        use IndexLabel::{MuEdge, NuVertex};

        // Leading (fully paired) part of the two-loop numerator in Feynman gauge.
        let g1 = fixtures::two_loop_vacuum_polarization();
        let n1 = integrand::numerator(&g1, Gauge::Feynman).unwrap();
        let full: Vec<_> = n1.terms.iter().filter(|t| t.x_factors.is_empty()).collect();
        assert_eq!(full.len(), 3, "three perfect matchings of four fermion edges");
        let expect = |pairs: &[(IndexLabel, IndexLabel)], coeff: Poly| {
            let term = full
                .iter()
                .find(|t| t.metric_pairs == pairs)
                .unwrap_or_else(|| panic!("missing metric structure {pairs:?}"));
            assert_eq!(term.coeff, eps(&[(0, coeff)]), "coefficient of {pairs:?}");
            assert_eq!(term.psi_power, 2);
            assert_eq!(term.two_power, -2);
        };
        expect(
            &[(MuEdge(2), MuEdge(3)), (MuEdge(4), MuEdge(5)), (NuVertex(2), NuVertex(4))],
            v(1) * v(1),
        );
        expect(
            &[(MuEdge(2), MuEdge(4)), (MuEdge(3), MuEdge(5)), (NuVertex(2), NuVertex(4))],
            v(1) * v(1),
        );
        expect(
            &[(MuEdge(2), MuEdge(5)), (MuEdge(3), MuEdge(4)), (NuVertex(2), NuVertex(4))],
            (v(1) + v(3) + v(4)) * (v(1) + v(2) + v(5)),
        );
        for t in &n1.terms {
            assert_eq!(t.coeff.min_power(), Some(0), "Feynman gauge carries no eps poles");
            assert_eq!(t.coeff.max_power(), Some(0), "Feynman gauge carries no eps orders");
        }

        // Leading part of the one-loop vertex numerator in general gauge,
        // split by eps order.
        let g2 = fixtures::one_loop_vertex();
        let n2 = integrand::numerator(&g2, Gauge::General).unwrap();
        let full2: Vec<_> = n2.terms.iter().filter(|t| t.x_factors.is_empty()).collect();
        assert_eq!(full2.len(), 3, "three full pairings of two fermion ends and one photon");
        let lookup = |pairs: &[(IndexLabel, IndexLabel)]| {
            full2
                .iter()
                .find(|t| t.metric_pairs == pairs)
                .unwrap_or_else(|| panic!("missing metric structure {pairs:?}"))
        };
        let merged = lookup(&[(MuEdge(2), MuEdge(3)), (NuVertex(1), NuVertex(2))]);
        let two_psi = Poly::constant(2) * (v(1) + v(2) + v(3));
        assert_eq!(merged.coeff, eps(&[(0, two_psi), (1, v(1))]), "merged photon eps split");
        assert_eq!((merged.psi_power, merged.two_power), (2, -2));
        let cross_a = lookup(&[(MuEdge(2), NuVertex(1)), (MuEdge(3), NuVertex(2))]);
        assert_eq!(cross_a.coeff, eps(&[(1, v(1))]), "crossed pairing is order eps");
        let cross_b = lookup(&[(MuEdge(2), NuVertex(2)), (MuEdge(3), NuVertex(1))]);
        assert_eq!(cross_b.coeff, eps(&[(1, v(1))]), "crossed pairing is order eps");

        // All four evaluated X polynomials of the two-loop graph.
        let ma1 = integrand::momentum_paths(&g1).unwrap();
        let expected_x: Vec<(u32, Poly)> = vec![
            (2, (v(1) + v(5)) * (v(3) + v(4)) + v(1) * v(5) - v(1) * v(3)),
            (3, (v(1) + v(4)) * (v(2) + v(5)) + v(1) * v(4) - v(1) * v(2)),
            (4, -(v(1) * v(2) + v(3) * (v(1) + v(2) + v(5)))),
            (5, -(v(2) * (v(1) + v(3) + v(4)) + v(1) * v(3))),
        ];
        for (e, expected) in &expected_x {
            let x = grapoly::x_poly(&g1, *e, MuEdge(*e)).unwrap();
            let ev = integrand::evaluate_vecpoly(&x, &ma1);
            assert_eq!(ev.entries.len(), 1, "edge {e} carries only the external momentum");
            assert_eq!(ev.entries["q1"], *expected, "evaluated X polynomial of edge {e}");
        }

        // The three symbolic X polynomials of the one-loop vertex.
        let expected_x2: Vec<(u32, Vec<(u32, Poly)>)> = vec![
            (1, vec![(1, v(2) + v(3)), (2, -v(2)), (3, -v(3))]),
            (2, vec![(1, -v(1)), (2, v(1) + v(3)), (3, -v(3))]),
            (3, vec![(1, -v(1)), (2, -v(2)), (3, v(1) + v(2))]),
        ];
        for (e, coeffs) in &expected_x2 {
            let x = grapoly::x_poly(&g2, *e, MuEdge(*e)).unwrap();
            assert_eq!(x.coeffs.len(), coeffs.len(), "support of X for edge {e}");
            for (f, p) in coeffs {
                assert_eq!(x.coeff(*f), *p, "xi_{f} coefficient of X for edge {e}");
            }
        }
    });
}

#[test]
fn criterion_6_property_suites() {
    criterion(6, "property suites", || {
        // Polynomial shape properties (multilinearity, homogeneity, Kirchhoff
        // coefficients, matrix-tree counts, cycle-bond parity) run inside the
        // shared corpus battery.
        let (_, _, summary, _) = battery();
        assert!(summary.is_ok(), "corpus property checks failed");

        let none: Vec<u32> = vec![];
        assert_eq!(integrand::enumerate_pairings(&none).len(), 1, "empty set has one pairing");
        assert_eq!(
            integrand::enumerate_pairings(&[1u32, 2, 3, 4]).len(),
            10,
            "four items admit ten pairings"
        );

        for (name, g) in fixtures::qed_fixtures() {
            let psi = grapoly::kirchhoff(&g);
            let general = integrand::numerator(&g, Gauge::General).unwrap();
            let feynman = integrand::numerator(&g, Gauge::Feynman).unwrap();
            let lifted_general = oracle::lift_numerator(&g, &general).unwrap();
            let lifted_feynman = oracle::lift_numerator(&g, &feynman).unwrap();
            let report =
                oracle::expressions_equal(&oracle::eps_slice(&lifted_general, 0), &lifted_feynman, &psi);
            assert!(report.equal, "{name}: eps^0 slice of the general gauge is the Feynman gauge");
        }

        // Formal orientation-flip invariance: reversing a photon edge flips
        // the sign convention of its xi variable and nothing else. The two
        // double-photon fixtures are checked at the evaluated level below to
        // keep the peak memory of the lifted expressions bounded.
        let mut formal_flips = 0;
        for (name, g) in fixtures::qed_fixtures() {
            if g.edges_of_kind(EdgeKind::Photon).count() > 1 {
                continue;
            }
            let general = integrand::numerator(&g, Gauge::General).unwrap();
            let lifted = oracle::lift_numerator(&g, &general).unwrap();
            let psi = grapoly::kirchhoff(&g);
            for edge in g.edges().iter().filter(|e| e.kind == EdgeKind::Photon) {
                let flipped = flip_edge(&g, edge.id);
                let flipped_numerator = integrand::numerator(&flipped, Gauge::General).unwrap();
                let lifted_flipped = oracle::lift_numerator(&flipped, &flipped_numerator).unwrap();
                let report = oracle::expressions_equal(
                    &oracle::xi_negate(&lifted, edge.id),
                    &lifted_flipped,
                    &psi,
                );
                assert!(
                    report.equal,
                    "{name}: reversing photon edge {} changes the canonical numerator",
                    edge.id
                );
                formal_flips += 1;
            }
        }
        assert_eq!(formal_flips, 3, "single-photon fixtures were exercised");

        // Evaluated orientation-flip invariance: once the momenta are routed,
        // the canonicalized numerator of every fixture is literally unchanged
        // by reversing any photon edge.
        let mut evaluated_flips = 0;
        for (name, g) in fixtures::qed_fixtures() {
            let baseline = evaluated_general(&g);
            for edge in g.edges().iter().filter(|e| e.kind == EdgeKind::Photon) {
                let flipped = flip_edge(&g, edge.id);
                assert_eq!(
                    evaluated_general(&flipped),
                    baseline,
                    "{name}: reversing photon edge {} changes the evaluated numerator",
                    edge.id
                );
                evaluated_flips += 1;
            }
        }
        assert_eq!(evaluated_flips, 7, "every photon edge of the fixture set was reversed");
    });
}

fn flip_edge(g: &Graph, id: u32) -> Graph {
    let reversed: Vec<Edge> = g
        .edges()
        .iter()
        .map(|e| {
            if e.id == id {
                Edge { id: e.id, source: e.target, target: e.source, kind: e.kind }
            } else {
                *e
            }
        })
        .collect();
    Graph::new(g.vertices().iter().copied(), reversed, g.externals().iter().cloned()).unwrap()
}

fn evaluated_general(g: &Graph) -> integrand::EvaluatedNumerator {
    let n = integrand::numerator(g, Gauge::General).unwrap();
    let ma = integrand::momentum_paths(g).unwrap();
    integrand::evaluate_numerator(g, &n, &ma).unwrap()
}
