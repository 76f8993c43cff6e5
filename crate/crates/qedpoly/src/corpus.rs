//! Generation of connected multigraph corpora for identity checking.
//!
//! Exhaustive generation enumerates canonical edge sequences: vertex ids
//! appear in first-use order and the endpoint pairs are non-decreasing, so
//! each isomorphism-friendly labeled multigraph shape is produced exactly
//! once. Random generation decodes a uniform Pruefer sequence into a
//! spanning tree and sprinkles extra edges on top.

use crate::graph::{Edge, EdgeKind, Graph, VertexId};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn from_pairs(pairs: &[(VertexId, VertexId)]) -> Graph {
    let max_vertex = pairs.iter().map(|&(u, v)| u.max(v)).max().unwrap_or(1);
    Graph::new(
        1..=max_vertex,
        pairs.iter().enumerate().map(|(i, &(source, target))| Edge {
            id: i as u32 + 1,
            source,
            target,
            kind: EdgeKind::Scalar,
        }),
        Vec::new(),
    )
    .expect("generated graphs are structurally valid")
}

/// All connected multigraphs with 1 to `max_edges` edges, in canonical
/// order. Self-loops and parallel edges are included.
pub fn exhaustive_connected(max_edges: usize) -> Vec<Graph> {
    fn rec(
        max_edges: usize,
        seq: &mut Vec<(VertexId, VertexId)>,
        next_new: VertexId,
        out: &mut Vec<Graph>,
    ) {
        if !seq.is_empty() {
            let g = from_pairs(seq);
            if g.is_connected() {
                out.push(g);
            }
        }
        if seq.len() == max_edges {
            return;
        }
        let floor = seq.last().copied().unwrap_or((1, 1));
        for u in 1..=next_new {
            let v_limit = if u == next_new { next_new + 1 } else { next_new };
            for v in u..=v_limit {
                if (u, v) < floor {
                    continue;
                }
                let mut next = next_new;
                if u == next {
                    next += 1;
                }
                if v == next {
                    next += 1;
                }
                seq.push((u, v));
                rec(max_edges, seq, next, out);
                seq.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(max_edges, &mut Vec::new(), 1, &mut out);
    out
}

fn pruefer_decode(n: VertexId, seq: &[VertexId]) -> Vec<(VertexId, VertexId)> {
    let mut degree = vec![1u32; n as usize + 1];
    for &s in seq {
        degree[s as usize] += 1;
    }
    let mut edges = Vec::with_capacity(n as usize - 1);
    for &s in seq {
        let leaf = (1..=n)
            .find(|&v| degree[v as usize] == 1)
            .expect("a Pruefer step always has a leaf");
        edges.push((leaf.min(s), leaf.max(s)));
        degree[leaf as usize] = 0;
        degree[s as usize] -= 1;
    }
    let rest: Vec<VertexId> = (1..=n).filter(|&v| degree[v as usize] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}

/// `samples` random connected multigraphs with at most `max_edges` edges.
/// Each graph is a uniform random spanning tree padded with random extra
/// edges (self-loops allowed), with uniformly random edge directions.
/// Deterministic in `seed`.
pub fn random_connected(max_edges: usize, samples: usize, seed: u64) -> Vec<Graph> {
    assert!(max_edges >= 1, "need room for at least one edge");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .map(|_| {
            let m = rng.gen_range(1..=max_edges);
            let n = rng.gen_range(1..=m + 1) as VertexId;
            let mut pairs: Vec<(VertexId, VertexId)> = if n >= 2 {
                let pruefer: Vec<VertexId> =
                    (0..n - 2).map(|_| rng.gen_range(1..=n)).collect();
                pruefer_decode(n, &pruefer)
            } else {
                Vec::new()
            };
            while pairs.len() < m {
                pairs.push((rng.gen_range(1..=n), rng.gen_range(1..=n)));
            }
            let directed: Vec<(VertexId, VertexId)> = pairs
                .into_iter()
                .map(|(u, v)| if rng.gen_bool(0.5) { (u, v) } else { (v, u) })
                .collect();
            from_pairs(&directed)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exhaustive_counts_are_stable() {
        assert_eq!(exhaustive_connected(1).len(), 2, "a self-loop and a single edge");
        assert_eq!(exhaustive_connected(2).len(), 8);
        let three = exhaustive_connected(3);
        assert!(three.len() > 8, "larger budgets strictly extend the corpus");
        assert!(three.iter().all(|g| g.is_connected()));
        assert_eq!(
            three.iter().filter(|g| g.num_edges() <= 2).count(),
            8,
            "smaller graphs are a prefix-closed subset"
        );
    }

    #[test]
    fn exhaustive_sequences_are_canonical_and_distinct() {
        let graphs = exhaustive_connected(3);
        let mut seen = std::collections::BTreeSet::new();
        for g in &graphs {
            let key = g.to_json_string();
            assert!(seen.insert(key), "no duplicate graphs in the corpus");
            let max_vertex = *g.vertices().iter().max().unwrap();
            assert_eq!(g.num_vertices(), max_vertex as usize, "vertex ids are contiguous");
        }
    }

    #[test]
    fn random_corpus_is_deterministic_and_connected() {
        let a = random_connected(7, 30, 42);
        let b = random_connected(7, 30, 42);
        assert_eq!(a, b, "same seed reproduces the same corpus");
        let c = random_connected(7, 30, 43);
        assert_ne!(a, c, "different seeds differ");
        for g in &a {
            assert!(g.is_connected());
            assert!(g.num_edges() >= 1 && g.num_edges() <= 7);
        }
    }

    #[test]
    fn pruefer_decoding_yields_trees() {
        for n in 2..=7 {
            let seq: Vec<u32> = (0..n - 2).map(|i| (i % n) + 1).collect();
            let edges = pruefer_decode(n, &seq);
            assert_eq!(edges.len(), n as usize - 1);
            let g = from_pairs(&edges);
            assert!(g.is_connected(), "a decoded tree is connected");
            assert_eq!(g.h1(), 0, "a decoded tree has no cycles");
        }
    }
}
