//! Directed multigraphs with typed edges, external legs, and the subgraph
//! enumerations (spanning trees, bonds, simple cycles) that drive the
//! polynomial builders.
//!
//! Edges carry a fixed direction used only as a reference orientation for
//! sign conventions; self-loops and parallel edges are allowed. Bonds are
//! minimal edge cuts of a connected graph; simple cycles are connected
//! 2-regular edge subsets. Both carry orientation signs per edge.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

pub type VertexId = u32;
pub type EdgeId = u32;

/// Particle type of an internal edge.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum EdgeKind {
    Fermion,
    Photon,
    Scalar,
}

impl EdgeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EdgeKind::Fermion => "fermion",
            EdgeKind::Photon => "photon",
            EdgeKind::Scalar => "scalar",
        }
    }

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fermion" => Ok(EdgeKind::Fermion),
            "photon" => Ok(EdgeKind::Photon),
            "scalar" => Ok(EdgeKind::Scalar),
            other => Err(Error::SchemaError(format!(
                "unknown edge kind {other:?}, expected \"fermion\", \"photon\" or \"scalar\""
            ))),
        }
    }
}

impl fmt::Display for EdgeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A directed internal edge.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Edge {
    pub id: EdgeId,
    pub source: VertexId,
    pub target: VertexId,
    pub kind: EdgeKind,
}

impl Edge {
    pub fn is_self_loop(&self) -> bool {
        self.source == self.target
    }

    pub fn is_incident(&self, v: VertexId) -> bool {
        self.source == v || self.target == v
    }
}

/// An external leg: a vertex together with its incoming momentum label.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct External {
    pub vertex: VertexId,
    pub momentum: String,
}

/// An edge subset with a sign per edge, relative to the reference
/// orientation. Used for both bonds and cycles.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OrientedEdgeSet {
    signs: BTreeMap<EdgeId, i8>,
}

pub type Bond = OrientedEdgeSet;
pub type Cycle = OrientedEdgeSet;

impl OrientedEdgeSet {
    pub(crate) fn from_signs(signs: BTreeMap<EdgeId, i8>) -> Self {
        debug_assert!(signs.values().all(|&s| s == 1 || s == -1));
        OrientedEdgeSet { signs }
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.signs.contains_key(&e)
    }

    /// Edge ids in ascending order.
    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.signs.keys().copied()
    }

    /// Orientation sign of an edge, if it belongs to the set.
    pub fn sign(&self, e: EdgeId) -> Option<i8> {
        self.signs.get(&e).copied()
    }

    /// Product of the signs of two member edges (also valid for `e == f`).
    pub fn pair_sign(&self, e: EdgeId, f: EdgeId) -> Option<i8> {
        Some(self.sign(e)? * self.sign(f)?)
    }

    pub fn signs(&self) -> impl Iterator<Item = (EdgeId, i8)> + '_ {
        self.signs.iter().map(|(&e, &s)| (e, s))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphJson {
    vertices: Vec<u32>,
    edges: Vec<EdgeJson>,
    #[serde(default)]
    externals: Vec<ExternalJson>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeJson {
    id: u32,
    source: u32,
    target: u32,
    kind: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExternalJson {
    vertex: u32,
    momentum: String,
}

/// A directed multigraph with typed edges and external legs.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Graph {
    vertices: BTreeSet<VertexId>,
    edges: Vec<Edge>,
    externals: Vec<External>,
}

/// Hard cap on edge count so edge subsets fit into `u64` bitmasks and the
/// exhaustive enumerations stay tractable.
const MAX_ENUM_EDGES: usize = 24;

impl Graph {
    /// Validates and builds a graph. Edges are stored sorted by id,
    /// externals sorted by (vertex, momentum label).
    pub fn new(
        vertices: impl IntoIterator<Item = VertexId>,
        edges: impl IntoIterator<Item = Edge>,
        externals: impl IntoIterator<Item = External>,
    ) -> Result<Graph> {
        let vertices: BTreeSet<VertexId> = vertices.into_iter().collect();
        let mut edges: Vec<Edge> = edges.into_iter().collect();
        edges.sort_by_key(|e| e.id);
        for pair in edges.windows(2) {
            if pair[0].id == pair[1].id {
                return Err(Error::SchemaError(format!("duplicate edge id {}", pair[0].id)));
            }
        }
        for e in &edges {
            for v in [e.source, e.target] {
                if !vertices.contains(&v) {
                    return Err(Error::SchemaError(format!(
                        "edge {} references undeclared vertex {v}",
                        e.id
                    )));
                }
            }
        }
        let mut externals: Vec<External> = externals.into_iter().collect();
        externals.sort();
        let mut labels = BTreeSet::new();
        for x in &externals {
            if !vertices.contains(&x.vertex) {
                return Err(Error::SchemaError(format!(
                    "external leg references undeclared vertex {}",
                    x.vertex
                )));
            }
            if x.momentum.is_empty() {
                return Err(Error::SchemaError("empty momentum label".into()));
            }
            if !labels.insert(x.momentum.clone()) {
                return Err(Error::SchemaError(format!(
                    "duplicate momentum label {:?}",
                    x.momentum
                )));
            }
        }
        Ok(Graph { vertices, edges, externals })
    }

    /// Parses a graph from JSON text. Syntax errors map to `ParseError`,
    /// structural problems to `SchemaError`.
    pub fn from_json(text: &str) -> Result<Graph> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::ParseError(e.to_string()))?;
        let raw: GraphJson =
            serde_json::from_value(value).map_err(|e| Error::SchemaError(e.to_string()))?;
        let edges = raw
            .edges
            .into_iter()
            .map(|e| {
                Ok(Edge {
                    id: e.id,
                    source: e.source,
                    target: e.target,
                    kind: EdgeKind::from_str(&e.kind)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let externals = raw
            .externals
            .into_iter()
            .map(|x| External { vertex: x.vertex, momentum: x.momentum });
        Graph::new(raw.vertices, edges, externals)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let raw = GraphJson {
            vertices: self.vertices.iter().copied().collect(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeJson {
                    id: e.id,
                    source: e.source,
                    target: e.target,
                    kind: e.kind.as_str().to_string(),
                })
                .collect(),
            externals: self
                .externals
                .iter()
                .map(|x| ExternalJson { vertex: x.vertex, momentum: x.momentum.clone() })
                .collect(),
        };
        serde_json::to_value(raw).expect("graph serialization cannot fail")
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("graph serialization cannot fail")
    }

    pub fn vertices(&self) -> &BTreeSet<VertexId> {
        &self.vertices
    }

    /// Edges sorted by id.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Externals sorted by (vertex, momentum label).
    pub fn externals(&self) -> &[External] {
        &self.externals
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, id: EdgeId) -> Result<&Edge> {
        self.edges
            .binary_search_by_key(&id, |e| e.id)
            .map(|i| &self.edges[i])
            .map_err(|_| Error::UnknownEdge(id))
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges.iter().map(|e| e.id)
    }

    fn vertex_index(&self) -> BTreeMap<VertexId, usize> {
        self.vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect()
    }

    /// Number of connected components (isolated vertices count).
    pub fn h0(&self) -> usize {
        if self.vertices.is_empty() {
            return 0;
        }
        let idx = self.vertex_index();
        let mut dsu = Dsu::new(self.vertices.len());
        for e in &self.edges {
            dsu.union(idx[&e.source], idx[&e.target]);
        }
        dsu.component_count()
    }

    /// First Betti number (loop number).
    pub fn h1(&self) -> usize {
        self.edges.len() + self.h0() - self.vertices.len()
    }

    pub fn is_connected(&self) -> bool {
        self.h0() == 1
    }

    /// Connected components as subgraphs, ordered by smallest vertex id.
    pub fn components(&self) -> Vec<Graph> {
        let idx = self.vertex_index();
        let mut dsu = Dsu::new(self.vertices.len());
        for e in &self.edges {
            dsu.union(idx[&e.source], idx[&e.target]);
        }
        let mut groups: BTreeMap<usize, BTreeSet<VertexId>> = BTreeMap::new();
        for &v in &self.vertices {
            groups.entry(dsu.find(idx[&v])).or_default().insert(v);
        }
        let mut comps: Vec<BTreeSet<VertexId>> = groups.into_values().collect();
        comps.sort_by_key(|g| *g.iter().next().expect("components are nonempty"));
        comps
            .into_iter()
            .map(|vs| Graph {
                edges: self.edges.iter().filter(|e| vs.contains(&e.source)).copied().collect(),
                externals: self
                    .externals
                    .iter()
                    .filter(|x| vs.contains(&x.vertex))
                    .cloned()
                    .collect(),
                vertices: vs,
            })
            .collect()
    }

    fn check_edges_known(&self, ids: &[EdgeId]) -> Result<()> {
        for &id in ids {
            self.edge(id)?;
        }
        Ok(())
    }

    /// Deletes the listed edges; vertices and externals are kept.
    pub fn delete(&self, ids: &[EdgeId]) -> Result<Graph> {
        self.check_edges_known(ids)?;
        let drop: BTreeSet<EdgeId> = ids.iter().copied().collect();
        Ok(Graph {
            vertices: self.vertices.clone(),
            edges: self.edges.iter().filter(|e| !drop.contains(&e.id)).copied().collect(),
            externals: self.externals.clone(),
        })
    }

    /// Contracts the listed edges simultaneously: each contracted edge
    /// identifies its endpoints, and every merged vertex class is renamed to
    /// its smallest member. Contracting a self-loop is an error.
    pub fn contract(&self, ids: &[EdgeId]) -> Result<Graph> {
        self.check_edges_known(ids)?;
        let idx = self.vertex_index();
        let verts: Vec<VertexId> = self.vertices.iter().copied().collect();
        let mut dsu = Dsu::new(verts.len());
        let drop: BTreeSet<EdgeId> = ids.iter().copied().collect();
        for &id in ids {
            let e = self.edge(id)?;
            if e.is_self_loop() {
                return Err(Error::TadpoleContraction(id));
            }
            dsu.union(idx[&e.source], idx[&e.target]);
        }
        let mut rep: BTreeMap<usize, VertexId> = BTreeMap::new();
        for (i, &v) in verts.iter().enumerate() {
            let root = dsu.find(i);
            // Vertices are scanned in ascending order, so the first hit is the minimum.
            rep.entry(root).or_insert(v);
        }
        let renamed: BTreeMap<VertexId, VertexId> =
            verts.iter().enumerate().map(|(i, &v)| (v, rep[&dsu.find(i)])).collect();
        let map = |v: VertexId| renamed[&v];
        Ok(Graph {
            vertices: verts.iter().map(|&v| map(v)).collect(),
            edges: self
                .edges
                .iter()
                .filter(|e| !drop.contains(&e.id))
                .map(|e| Edge { id: e.id, source: map(e.source), target: map(e.target), kind: e.kind })
                .collect(),
            externals: self
                .externals
                .iter()
                .map(|x| External { vertex: map(x.vertex), momentum: x.momentum.clone() })
                .collect(),
        })
    }

    fn check_enumerable(&self) -> Result<()> {
        if self.edges.len() > MAX_ENUM_EDGES {
            return Err(Error::Unsupported(format!(
                "subgraph enumeration is limited to {MAX_ENUM_EDGES} edges, got {}",
                self.edges.len()
            )));
        }
        Ok(())
    }

    fn ids_of_mask(&self, mask: u64) -> Vec<EdgeId> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, e)| e.id)
            .collect()
    }

    /// Spanning trees as edge-index bitmasks, ascending.
    pub(crate) fn spanning_tree_masks(&self) -> Result<Vec<u64>> {
        self.check_enumerable()?;
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        let m = self.edges.len();
        let n = self.vertices.len();
        let k = n - 1;
        if k == 0 {
            return Ok(vec![0]);
        }
        if k > m {
            return Ok(vec![]);
        }
        let idx = self.vertex_index();
        let limit: u64 = (1u64 << m) - 1;
        let mut masks = Vec::new();
        let mut mask: u64 = (1u64 << k) - 1;
        loop {
            let mut dsu = Dsu::new(n);
            let mut acyclic = true;
            let mut bits = mask;
            while bits != 0 {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                let e = &self.edges[i];
                if !dsu.union(idx[&e.source], idx[&e.target]) {
                    acyclic = false;
                    break;
                }
            }
            if acyclic {
                masks.push(mask);
            }
            // Gosper's hack: next mask with the same popcount.
            let c = mask & mask.wrapping_neg();
            let r = mask + c;
            mask = (((r ^ mask) >> 2) / c) | r;
            if mask > limit {
                break;
            }
        }
        Ok(masks)
    }

    /// All spanning trees, each as an ascending edge-id list, in ascending
    /// edge-bitset order.
    pub fn spanning_trees(&self) -> Result<Vec<Vec<EdgeId>>> {
        Ok(self.spanning_tree_masks()?.into_iter().map(|m| self.ids_of_mask(m)).collect())
    }

    /// All bonds (minimal edge cuts) of a connected graph, in ascending
    /// edge-bitset order. The sign of an edge is +1 when it points into the
    /// side containing the smallest vertex id.
    pub fn bonds(&self) -> Result<Vec<Bond>> {
        self.check_enumerable()?;
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        let verts: Vec<VertexId> = self.vertices.iter().copied().collect();
        let n = verts.len();
        if n < 2 {
            return Ok(vec![]);
        }
        if n - 1 > MAX_ENUM_EDGES {
            return Err(Error::Unsupported(format!(
                "bond enumeration is limited to {MAX_ENUM_EDGES} non-root vertices, got {}",
                n - 1
            )));
        }
        let idx: BTreeMap<VertexId, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut out: Vec<(u64, Bond)> = Vec::new();
        // Bit i of the partition mask puts vertex verts[i+1] on the far side;
        // the side of verts[0] is the "into" side for signs.
        for part in 1u64..(1u64 << (n - 1)) {
            let in_far = |v: VertexId| -> bool {
                let i = idx[&v];
                i > 0 && part & (1 << (i - 1)) != 0
            };
            if !self.side_connected(&verts, &|v| !in_far(v)) || !self.side_connected(&verts, &|v| in_far(v)) {
                continue;
            }
            let mut signs = BTreeMap::new();
            let mut mask = 0u64;
            for (i, e) in self.edges.iter().enumerate() {
                if in_far(e.source) != in_far(e.target) {
                    signs.insert(e.id, if in_far(e.target) { -1 } else { 1 });
                    mask |= 1 << i;
                }
            }
            out.push((mask, OrientedEdgeSet::from_signs(signs)));
        }
        out.sort_by_key(|(mask, _)| *mask);
        Ok(out.into_iter().map(|(_, b)| b).collect())
    }

    fn side_connected(&self, verts: &[VertexId], in_side: &dyn Fn(VertexId) -> bool) -> bool {
        let side: Vec<VertexId> = verts.iter().copied().filter(|&v| in_side(v)).collect();
        if side.is_empty() {
            return false;
        }
        let idx: BTreeMap<VertexId, usize> = side.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut dsu = Dsu::new(side.len());
        for e in &self.edges {
            if in_side(e.source) && in_side(e.target) {
                dsu.union(idx[&e.source], idx[&e.target]);
            }
        }
        dsu.component_count() == 1
    }

    /// All simple cycles (connected 2-regular edge subsets), in ascending
    /// edge-bitset order. Each cycle is traversed starting from its
    /// lowest-id edge along that edge's direction; the sign of an edge is +1
    /// when the traversal follows its direction. Self-loops are 1-cycles,
    /// parallel pairs are 2-cycles.
    pub fn simple_cycles(&self) -> Result<Vec<Cycle>> {
        self.check_enumerable()?;
        let m = self.edges.len();
        let mut found: Vec<(u64, Cycle)> = Vec::new();
        for s in 0..m {
            let e0 = &self.edges[s];
            if e0.is_self_loop() {
                let signs = BTreeMap::from([(e0.id, 1i8)]);
                found.push((1 << s, OrientedEdgeSet::from_signs(signs)));
                continue;
            }
            let mut walk = CycleWalk {
                visited: BTreeSet::from([e0.source, e0.target]),
                mask: 1 << s,
                signs: vec![(e0.id, 1i8)],
            };
            self.cycle_dfs(s, e0.target, e0.source, &mut walk, &mut found);
        }
        found.sort_by_key(|(mask, _)| *mask);
        Ok(found.into_iter().map(|(_, c)| c).collect())
    }

    fn cycle_dfs(
        &self,
        start: usize,
        current: VertexId,
        goal: VertexId,
        walk: &mut CycleWalk,
        found: &mut Vec<(u64, Cycle)>,
    ) {
        for (t, e) in self.edges.iter().enumerate().skip(start + 1) {
            if walk.mask & (1 << t) != 0 || !e.is_incident(current) || e.is_self_loop() {
                continue;
            }
            let (other, sign) = if e.source == current { (e.target, 1i8) } else { (e.source, -1i8) };
            if other == goal {
                let mut cycle_signs: BTreeMap<EdgeId, i8> = walk.signs.iter().copied().collect();
                cycle_signs.insert(e.id, sign);
                found.push((walk.mask | (1 << t), OrientedEdgeSet::from_signs(cycle_signs)));
            } else if !walk.visited.contains(&other) {
                walk.visited.insert(other);
                walk.signs.push((e.id, sign));
                walk.mask |= 1 << t;
                self.cycle_dfs(start, other, goal, walk, found);
                walk.mask &= !(1 << t);
                walk.signs.pop();
                walk.visited.remove(&other);
            }
        }
    }

    /// Checks the QED vertex rules: no scalar edges; per vertex at most one
    /// incoming internal fermion, one outgoing internal fermion and one
    /// internal photon incidence; and exactly three line slots (internal
    /// incidences plus external legs) per vertex.
    pub fn validate_qed(&self) -> Result<()> {
        let mut violations = Vec::new();
        for e in &self.edges {
            if e.kind == EdgeKind::Scalar {
                violations.push(format!("edge {} has scalar kind", e.id));
            }
        }
        for &v in &self.vertices {
            let mut fermion_in = 0usize;
            let mut fermion_out = 0usize;
            let mut photon = 0usize;
            for e in &self.edges {
                match e.kind {
                    EdgeKind::Fermion => {
                        if e.source == v {
                            fermion_out += 1;
                        }
                        if e.target == v {
                            fermion_in += 1;
                        }
                    }
                    EdgeKind::Photon => {
                        if e.source == v {
                            photon += 1;
                        }
                        if e.target == v {
                            photon += 1;
                        }
                    }
                    EdgeKind::Scalar => {}
                }
            }
            let ext = self.externals.iter().filter(|x| x.vertex == v).count();
            if fermion_in > 1 {
                violations.push(format!("vertex {v} has {fermion_in} incoming internal fermion lines"));
            }
            if fermion_out > 1 {
                violations.push(format!("vertex {v} has {fermion_out} outgoing internal fermion lines"));
            }
            if photon > 1 {
                violations.push(format!("vertex {v} has {photon} internal photon incidences"));
            }
            let total = fermion_in + fermion_out + photon + ext;
            if total != 3 {
                violations.push(format!("vertex {v} has {total} line slots, expected 3"));
            }
        }
        if violations.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidQed(violations))
        }
    }

    /// Internal edges of the given kind, ascending by id.
    pub fn edges_of_kind(&self, kind: EdgeKind) -> impl Iterator<Item = &Edge> + '_ {
        self.edges.iter().filter(move |e| e.kind == kind)
    }
}

/// Disjoint-set union with path halving.
/// Mutable state of the simple-cycle depth-first search.
struct CycleWalk {
    visited: BTreeSet<VertexId>,
    mask: u64,
    signs: Vec<(EdgeId, i8)>,
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the classes of `a` and `b`; false if already joined.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }

    fn component_count(&mut self) -> usize {
        (0..self.parent.len()).filter(|&i| self.find(i) == i).count()
    }
}
