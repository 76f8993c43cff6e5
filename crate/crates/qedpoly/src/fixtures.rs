//! Reference graphs used by unit tests, integration tests, benches and the
//! bundled example files.
//!
//! Edge directions are fixed deliberately: every sign-dependent expected
//! value in the test suite is derived from these exact orientations.

use crate::graph::{Edge, EdgeKind, External, Graph, VertexId};

fn build(
    vertices: &[VertexId],
    edges: &[(u32, VertexId, VertexId, EdgeKind)],
    externals: &[(VertexId, &str)],
) -> Graph {
    Graph::new(
        vertices.iter().copied(),
        edges.iter().map(|&(id, source, target, kind)| Edge { id, source, target, kind }),
        externals.iter().map(|&(vertex, momentum)| External { vertex, momentum: momentum.into() }),
    )
    .expect("fixture graphs are valid")
}

use EdgeKind::{Fermion, Photon, Scalar};

/// Two vertices joined by `k` parallel scalar edges with alternating
/// directions (edge 1 points into vertex 1).
pub fn banana(k: u32) -> Graph {
    let edges: Vec<_> = (1..=k)
        .map(|i| if i % 2 == 1 { (i, 2, 1, Scalar) } else { (i, 1, 2, Scalar) })
        .collect();
    build(&[1, 2], &edges, &[])
}

/// One-loop QED vertex correction: a consistently oriented triangle with a
/// photon between the two fermion ends and an external photon leg.
pub fn one_loop_vertex() -> Graph {
    build(
        &[1, 2, 3],
        &[(1, 1, 2, Photon), (2, 2, 3, Fermion), (3, 3, 1, Fermion)],
        &[(1, "q3"), (2, "q2"), (3, "q1")],
    )
}

/// Two-loop QED vacuum polarization: a fermion square with an internal
/// photon chord and two external photon legs.
pub fn two_loop_vacuum_polarization() -> Graph {
    build(
        &[1, 2, 3, 4],
        &[
            (1, 4, 2, Photon),
            (2, 3, 4, Fermion),
            (3, 4, 1, Fermion),
            (4, 1, 2, Fermion),
            (5, 2, 3, Fermion),
        ],
        &[(1, "q2"), (3, "q1")],
    )
}

/// The wheel with three spokes (scalar, no externals), with the exact edge
/// directions the cycle-polynomial tests are pinned to.
pub fn wheel3() -> Graph {
    build(
        &[1, 2, 3, 4],
        &[
            (1, 1, 2, Scalar),
            (2, 1, 3, Scalar),
            (3, 1, 4, Scalar),
            (4, 2, 4, Scalar),
            (5, 3, 2, Scalar),
            (6, 4, 3, Scalar),
        ],
        &[],
    )
}

/// Wheel with `k >= 3` spokes: hub 1, rim 2..=k+1, spokes first, then a
/// uniformly directed rim cycle. Used for scaling benches.
pub fn wheel(k: u32) -> Graph {
    assert!(k >= 3, "a wheel needs at least three spokes");
    let vertices: Vec<VertexId> = (1..=k + 1).collect();
    let mut edges = Vec::new();
    for i in 1..=k {
        edges.push((i, 1, i + 1, Scalar));
    }
    for j in 1..=k {
        let from = j + 1;
        let to = if j == k { 2 } else { j + 2 };
        edges.push((k + j, from, to, Scalar));
    }
    build(&vertices, &edges, &[])
}

/// One-loop photon self-energy: a fermion bubble with external photon legs.
pub fn photon_bubble() -> Graph {
    build(
        &[1, 2],
        &[(1, 1, 2, Fermion), (2, 2, 1, Fermion)],
        &[(1, "q1"), (2, "q2")],
    )
}

/// One-loop fermion self-energy: one fermion edge and one photon edge
/// between the same two vertices.
pub fn fermion_self_energy() -> Graph {
    build(
        &[1, 2],
        &[(1, 1, 2, Fermion), (2, 1, 2, Photon)],
        &[(1, "q1"), (2, "q2")],
    )
}

/// Two-loop fermion self-energy with crossed photons.
pub fn crossed_self_energy() -> Graph {
    build(
        &[1, 2, 3, 4],
        &[
            (1, 1, 2, Fermion),
            (2, 2, 3, Fermion),
            (3, 3, 4, Fermion),
            (4, 1, 3, Photon),
            (5, 2, 4, Photon),
        ],
        &[(1, "q1"), (4, "q2")],
    )
}

/// Two-loop fermion self-energy with nested (rainbow) photons.
pub fn rainbow_self_energy() -> Graph {
    build(
        &[1, 2, 3, 4],
        &[
            (1, 1, 2, Fermion),
            (2, 2, 3, Fermion),
            (3, 3, 4, Fermion),
            (4, 1, 4, Photon),
            (5, 2, 3, Photon),
        ],
        &[(1, "q1"), (4, "q2")],
    )
}

/// All bundled QED fixtures, used by theorem-verification sweeps.
pub fn qed_fixtures() -> Vec<(&'static str, Graph)> {
    vec![
        ("photon_bubble", photon_bubble()),
        ("fermion_self_energy", fermion_self_energy()),
        ("one_loop_vertex", one_loop_vertex()),
        ("two_loop_vacuum_polarization", two_loop_vacuum_polarization()),
        ("crossed_self_energy", crossed_self_energy()),
        ("rainbow_self_energy", rainbow_self_energy()),
    ]
}
