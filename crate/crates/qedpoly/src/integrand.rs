//! Pairing expansion and assembly of the parametric QED numerator.
//!
//! The numerator is a sum over pairings of the fermion edges and the photon
//! end vertices. Every pair contributes a metric factor and a cycle
//! polynomial entry, every unpaired item contributes an X vector factor,
//! and each internal photon contributes a dimensional-regularization
//! prefactor that is absorbed exactly when its own two end vertices are
//! paired with each other.

use crate::error::{Error, Result};
use crate::exec;
use crate::graph::{EdgeId, EdgeKind, Graph, VertexId};
use crate::grapoly::{self, IndexLabel, QuadForm, VecPoly};
use crate::polyring::{EpsLaurent, Poly};
use num_bigint::BigInt;
use std::collections::{BTreeMap, BTreeSet};

/// Gauge choice for the assembled numerator.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Gauge {
    General,
    Feynman,
}

impl Gauge {
    pub fn as_str(self) -> &'static str {
        match self {
            Gauge::General => "general",
            Gauge::Feynman => "feynman",
        }
    }
}

/// An item that participates in the pairing expansion.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum PairItem {
    FermionEdge(EdgeId),
    PhotonVertex(VertexId),
}

/// One pairing: disjoint ordered pairs plus the unpaired remainder.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Pairing<T> {
    pub pairs: Vec<(T, T)>,
    pub singles: Vec<T>,
}

/// All pairings of all even-sized subsets of `items`, including the empty
/// pairing. Ordered by pair count, then lexicographically by the paired
/// index subset, then by recursive matching order (the smallest unpaired
/// index is matched with each later index in turn).
pub fn enumerate_pairings<T: Copy>(items: &[T]) -> Vec<Pairing<T>> {
    let n = items.len();
    let mut out = Vec::new();
    for k in (0..=n).step_by(2) {
        for subset in combinations(n, k) {
            let chosen: BTreeSet<usize> = subset.iter().copied().collect();
            let singles: Vec<T> =
                (0..n).filter(|i| !chosen.contains(i)).map(|i| items[i]).collect();
            for matching in perfect_matchings(&subset) {
                out.push(Pairing {
                    pairs: matching.iter().map(|&(i, j)| (items[i], items[j])).collect(),
                    singles: singles.clone(),
                });
            }
        }
    }
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

fn perfect_matchings(idxs: &[usize]) -> Vec<Vec<(usize, usize)>> {
    if idxs.is_empty() {
        return vec![vec![]];
    }
    let first = idxs[0];
    let mut out = Vec::new();
    for pos in 1..idxs.len() {
        let partner = idxs[pos];
        let rest: Vec<usize> =
            idxs[1..].iter().copied().filter(|&x| x != partner).collect();
        for mut tail in perfect_matchings(&rest) {
            let mut matching = Vec::with_capacity(idxs.len() / 2);
            matching.push((first, partner));
            matching.append(&mut tail);
            out.push(matching);
        }
    }
    out
}

/// One term of the assembled numerator: metric factors, unexpanded X
/// factors, an eps-polynomial coefficient, and exact powers of 1/Psi and 2.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NumTerm {
    pub metric_pairs: Vec<(IndexLabel, IndexLabel)>,
    pub x_factors: Vec<(EdgeId, IndexLabel)>,
    pub coeff: EpsLaurent,
    pub psi_power: u32,
    pub two_power: i32,
}

/// The assembled numerator of a QED graph.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NumeratorExpr {
    pub gauge: Gauge,
    pub terms: Vec<NumTerm>,
}

fn sorted_pair(a: IndexLabel, b: IndexLabel) -> (IndexLabel, IndexLabel) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

struct QedStructure {
    fermions: Vec<EdgeId>,
    photons: Vec<EdgeId>,
    /// Photon end vertex -> its unique internal photon edge.
    ebar: BTreeMap<VertexId, EdgeId>,
}

fn qed_structure(g: &Graph) -> Result<QedStructure> {
    g.validate_qed()?;
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let mut ebar = BTreeMap::new();
    for e in g.edges_of_kind(EdgeKind::Photon) {
        ebar.insert(e.source, e.id);
        ebar.insert(e.target, e.id);
    }
    Ok(QedStructure {
        fermions: g.edges_of_kind(EdgeKind::Fermion).map(|e| e.id).collect(),
        photons: g.edges_of_kind(EdgeKind::Photon).map(|e| e.id).collect(),
        ebar,
    })
}

fn item_edge(s: &QedStructure, item: PairItem) -> EdgeId {
    match item {
        PairItem::FermionEdge(e) => e,
        PairItem::PhotonVertex(v) => s.ebar[&v],
    }
}

fn item_label(item: PairItem) -> IndexLabel {
    match item {
        PairItem::FermionEdge(e) => IndexLabel::MuEdge(e),
        PairItem::PhotonVertex(v) => IndexLabel::NuVertex(v),
    }
}

/// Assembles the numerator of a connected QED graph in the requested gauge.
///
/// In the general gauge the pairing items are the fermion edges and the
/// photon end vertices, and every internal photon carries an `eps * a_e`
/// prefactor; pairing a photon's own two end vertices absorbs that
/// prefactor into `2 Psi + eps a_e chi^{(e)}`. In the Feynman gauge only
/// fermion edges are paired and each photon contributes a fixed metric
/// factor joining its end vertex labels.
pub fn numerator(g: &Graph, gauge: Gauge) -> Result<NumeratorExpr> {
    let s = qed_structure(g)?;
    let psi = grapoly::kirchhoff(g);
    let chi = grapoly::cycle_poly(g)?;

    let mut items: Vec<PairItem> =
        s.fermions.iter().map(|&e| PairItem::FermionEdge(e)).collect();
    if gauge == Gauge::General {
        items.extend(s.ebar.keys().map(|&v| PairItem::PhotonVertex(v)));
    }
    let fixed_photon_pairs: Vec<(IndexLabel, IndexLabel)> = if gauge == Gauge::Feynman {
        s.photons
            .iter()
            .map(|&id| {
                let e = g.edge(id).expect("photon edge exists");
                sorted_pair(IndexLabel::NuVertex(e.source), IndexLabel::NuVertex(e.target))
            })
            .collect()
    } else {
        Vec::new()
    };

    let pairings = enumerate_pairings(&items);
    let built = exec::map_collect(&pairings, |pairing| {
        build_term(g, gauge, &s, &psi, &chi, pairing, &fixed_photon_pairs)
    });
    Ok(NumeratorExpr { gauge, terms: built.into_iter().flatten().collect() })
}

fn build_term(
    _g: &Graph,
    gauge: Gauge,
    s: &QedStructure,
    psi: &Poly,
    chi: &QuadForm,
    pairing: &Pairing<PairItem>,
    fixed_photon_pairs: &[(IndexLabel, IndexLabel)],
) -> Option<NumTerm> {
    let mut metric: Vec<(IndexLabel, IndexLabel)> = fixed_photon_pairs.to_vec();
    let mut coeff = EpsLaurent::one();
    let mut psi_power = 0u32;
    let mut two_power = 0i32;
    let mut merged: BTreeSet<EdgeId> = BTreeSet::new();

    for &(i, j) in &pairing.pairs {
        let (ei, ej) = (item_edge(s, i), item_edge(s, j));
        metric.push(sorted_pair(item_label(i), item_label(j)));
        psi_power += 1;
        two_power -= 1;
        if ei == ej {
            // Both end vertices of one photon: its eps*a prefactor is
            // absorbed here, leaving 2*Psi + eps*a_e*chi^(e).
            let mut piece = EpsLaurent::single(1, Poly::var(ei) * chi.get(ei, ei));
            piece.add_slice(0, psi.scale(&BigInt::from(2)));
            coeff *= &piece;
            merged.insert(ei);
        } else {
            let entry = chi.get(ei, ej);
            if entry.is_zero() {
                return None;
            }
            coeff = coeff.scale_poly(&entry);
        }
    }
    if gauge == Gauge::General {
        for &a in &s.photons {
            if !merged.contains(&a) {
                coeff = coeff.shifted(1).scale_poly(&Poly::var(a));
            }
        }
    }
    let mut x_factors: Vec<(EdgeId, IndexLabel)> = pairing
        .singles
        .iter()
        .map(|&k| (item_edge(s, k), item_label(k)))
        .collect();
    psi_power += x_factors.len() as u32;
    x_factors.sort();
    metric.sort();
    Some(NumTerm { metric_pairs: metric, x_factors, coeff, psi_power, two_power })
}

/// `a_e * chi^{(e,e)}` as a Laurent polynomial in eps:
/// the slice at eps^-1 is `2 Psi`, the slice at eps^0 is `a_e chi^{(e)}`.
/// The `a_e` factor is exactly the one supplied by the photon's `eps a_e`
/// numerator prefactor, which keeps everything polynomial.
pub fn chi_same_edge(g: &Graph, e: EdgeId) -> Result<EpsLaurent> {
    g.edge(e)?;
    let mut out = EpsLaurent::single(-1, grapoly::kirchhoff(g).scale(&BigInt::from(2)));
    out.add_slice(0, Poly::var(e) * grapoly::chi_edge(g, e)?);
    Ok(out)
}

/// Momentum routing through the first spanning tree.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MomentumAssignment {
    /// Vertex of the first external leg; all paths end here.
    pub base_vertex: VertexId,
    /// Momentum label eliminated by overall conservation.
    pub eliminated: String,
    /// Tree path of every other external momentum, as (edge, direction sign).
    pub paths: BTreeMap<String, Vec<(EdgeId, i8)>>,
    /// Resulting edge momentum contents: edge -> label -> integer coefficient.
    pub edge_momenta: BTreeMap<EdgeId, BTreeMap<String, i64>>,
}

/// Routes every external momentum to the base external vertex (the one with
/// the smallest vertex id, then label) through the first spanning tree. The
/// base leg's label is eliminated by momentum conservation. An edge sign is
/// +1 when the path traverses the edge along its direction.
pub fn momentum_paths(g: &Graph) -> Result<MomentumAssignment> {
    let externals = g.externals();
    if externals.is_empty() {
        return Err(Error::NoExternals);
    }
    let tree = g
        .spanning_trees()?
        .into_iter()
        .next()
        .expect("connected graphs have at least one spanning tree");
    let mut adjacency: BTreeMap<VertexId, Vec<(EdgeId, VertexId, i8)>> = BTreeMap::new();
    for id in tree {
        let e = g.edge(id).expect("tree edges exist");
        adjacency.entry(e.source).or_default().push((id, e.target, 1));
        adjacency.entry(e.target).or_default().push((id, e.source, -1));
    }
    let base = &externals[0];
    let mut paths = BTreeMap::new();
    let mut edge_momenta: BTreeMap<EdgeId, BTreeMap<String, i64>> = BTreeMap::new();
    for x in &externals[1..] {
        let path = tree_path(&adjacency, x.vertex, base.vertex);
        for &(e, sign) in &path {
            let slot = edge_momenta.entry(e).or_default().entry(x.momentum.clone()).or_insert(0);
            *slot += i64::from(sign);
            if *slot == 0 {
                edge_momenta.get_mut(&e).unwrap().remove(&x.momentum);
            }
        }
        paths.insert(x.momentum.clone(), path);
    }
    edge_momenta.retain(|_, m| !m.is_empty());
    Ok(MomentumAssignment {
        base_vertex: base.vertex,
        eliminated: base.momentum.clone(),
        paths,
        edge_momenta,
    })
}

fn tree_path(
    adjacency: &BTreeMap<VertexId, Vec<(EdgeId, VertexId, i8)>>,
    from: VertexId,
    to: VertexId,
) -> Vec<(EdgeId, i8)> {
    fn dfs(
        adjacency: &BTreeMap<VertexId, Vec<(EdgeId, VertexId, i8)>>,
        at: VertexId,
        to: VertexId,
        seen: &mut BTreeSet<VertexId>,
        path: &mut Vec<(EdgeId, i8)>,
    ) -> bool {
        if at == to {
            return true;
        }
        if let Some(next) = adjacency.get(&at) {
            for &(e, other, sign) in next {
                if seen.insert(other) {
                    path.push((e, sign));
                    if dfs(adjacency, other, to, seen, path) {
                        return true;
                    }
                    path.pop();
                }
            }
        }
        false
    }
    let mut seen = BTreeSet::from([from]);
    let mut path = Vec::new();
    let found = dfs(adjacency, from, to, &mut seen, &mut path);
    debug_assert!(found, "spanning trees connect all vertices");
    path
}

/// A quadratic form evaluated on external momenta: entries are keyed by
/// unordered momentum label pairs, with cross terms carrying their factor 2.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct MomentumQuad {
    pub entries: BTreeMap<(String, String), Poly>,
}

impl MomentumQuad {
    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.entries
                .iter()
                .map(|((a, b), p)| serde_json::json!({ "q1": a, "q2": b, "poly": p.to_string() }))
                .collect(),
        )
    }
}

/// Evaluates a quadratic form on the routed momenta: the scalar
/// `sum M[e,e] xi_e^2 + 2 sum_{e<f} M[e,f] xi_e.xi_f` expanded in the
/// external momentum products.
pub fn evaluate_quadform(q: &QuadForm, ma: &MomentumAssignment) -> MomentumQuad {
    let mut entries: BTreeMap<(String, String), Poly> = BTreeMap::new();
    for ((e, f), p) in q.entries() {
        let (Some(sub_e), Some(sub_f)) = (ma.edge_momenta.get(&e), ma.edge_momenta.get(&f)) else {
            continue;
        };
        let factor: i64 = if e == f { 1 } else { 2 };
        for (la, &ca) in sub_e {
            for (lb, &cb) in sub_f {
                let key = if la <= lb { (la.clone(), lb.clone()) } else { (lb.clone(), la.clone()) };
                let contrib = p.scale(&BigInt::from(factor * ca * cb));
                let slot = entries.entry(key).or_default();
                *slot += &contrib;
            }
        }
    }
    entries.retain(|_, p| !p.is_zero());
    MomentumQuad { entries }
}

/// An X vector polynomial evaluated on the routed momenta.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MomentumVec {
    pub edge: EdgeId,
    pub index: IndexLabel,
    pub entries: BTreeMap<String, Poly>,
}

impl MomentumVec {
    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({
            "edge": self.edge,
            "index": self.index.to_string(),
            "entries": self
                .entries
                .iter()
                .map(|(l, p)| serde_json::json!({ "momentum": l, "poly": p.to_string() }))
                .collect::<Vec<_>>(),
        })
    }
}

pub fn evaluate_vecpoly(x: &VecPoly, ma: &MomentumAssignment) -> MomentumVec {
    let mut entries: BTreeMap<String, Poly> = BTreeMap::new();
    for (&e, p) in &x.coeffs {
        if let Some(sub) = ma.edge_momenta.get(&e) {
            for (l, &c) in sub {
                let slot = entries.entry(l.clone()).or_default();
                *slot += &p.scale(&BigInt::from(c));
            }
        }
    }
    entries.retain(|_, p| !p.is_zero());
    MomentumVec { edge: x.edge, index: x.index, entries }
}

/// A numerator term with X factors expanded into external momentum factors.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EvalTerm {
    pub metric_pairs: Vec<(IndexLabel, IndexLabel)>,
    pub momentum_factors: Vec<(String, IndexLabel)>,
    pub coeff: EpsLaurent,
    pub psi_power: u32,
    pub two_power: i32,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EvaluatedNumerator {
    pub gauge: Gauge,
    pub terms: Vec<EvalTerm>,
}

/// Expands every X factor of the numerator on the routed momenta and merges
/// terms with identical tensor structure.
pub fn evaluate_numerator(
    g: &Graph,
    n: &NumeratorExpr,
    ma: &MomentumAssignment,
) -> Result<EvaluatedNumerator> {
    type Key = (Vec<(IndexLabel, IndexLabel)>, Vec<(String, IndexLabel)>, u32, i32);
    let mut acc: BTreeMap<Key, EpsLaurent> = BTreeMap::new();
    for term in &n.terms {
        let mut branches: Vec<(Vec<(String, IndexLabel)>, EpsLaurent)> =
            vec![(Vec::new(), term.coeff.clone())];
        for &(e, idx) in &term.x_factors {
            let x = grapoly::x_poly(g, e, idx)?;
            let ev = evaluate_vecpoly(&x, ma);
            let mut next = Vec::new();
            for (factors, coeff) in &branches {
                for (label, p) in &ev.entries {
                    let mut extended = factors.clone();
                    extended.push((label.clone(), idx));
                    next.push((extended, coeff.scale_poly(p)));
                }
            }
            branches = next;
        }
        for (mut factors, coeff) in branches {
            factors.sort();
            let key = (term.metric_pairs.clone(), factors, term.psi_power, term.two_power);
            let slot = acc.entry(key).or_insert_with(EpsLaurent::zero);
            *slot += &coeff;
        }
    }
    let terms = acc
        .into_iter()
        .filter(|(_, coeff)| !coeff.is_zero())
        .map(|((metric_pairs, momentum_factors, psi_power, two_power), coeff)| EvalTerm {
            metric_pairs,
            momentum_factors,
            coeff,
            psi_power,
            two_power,
        })
        .collect();
    Ok(EvaluatedNumerator { gauge: n.gauge, terms })
}

fn eps_to_json(l: &EpsLaurent) -> serde_json::Value {
    let mut map = serde_json::Map::new();
    for (k, p) in l.slices() {
        map.insert(k.to_string(), serde_json::Value::String(p.to_string()));
    }
    serde_json::Value::Object(map)
}

fn labels_json(pairs: &[(IndexLabel, IndexLabel)]) -> serde_json::Value {
    serde_json::Value::Array(
        pairs
            .iter()
            .map(|(a, b)| serde_json::json!([a.to_string(), b.to_string()]))
            .collect(),
    )
}

/// Splits off the monomial content of all eps slices: returns the content
/// as the `prefactor` and the reduced Laurent coefficient.
fn extract_prefactor(coeff: &EpsLaurent) -> (String, EpsLaurent) {
    let mut content: Option<crate::polyring::Monomial> = None;
    for (_, p) in coeff.slices() {
        let c = p.monomial_content();
        content = Some(match content {
            None => c,
            Some(prev) => prev.gcd(&c),
        });
    }
    let content = content.unwrap_or_else(crate::polyring::Monomial::one);
    if content.is_one() {
        return ("1".to_string(), coeff.clone());
    }
    let divisor = Poly::monomial(content.clone(), 1);
    let mut reduced = EpsLaurent::zero();
    for (k, p) in coeff.slices() {
        reduced.add_slice(k, p.div_exact(&divisor).expect("content divides every slice"));
    }
    (content.to_string(), reduced)
}

pub fn numerator_to_json(n: &NumeratorExpr) -> serde_json::Value {
    serde_json::json!({
        "gauge": n.gauge.as_str(),
        "terms": n
            .terms
            .iter()
            .map(|t| {
                let (prefactor, reduced) = extract_prefactor(&t.coeff);
                serde_json::json!({
                    "metric_pairs": labels_json(&t.metric_pairs),
                    "x_factors": t
                        .x_factors
                        .iter()
                        .map(|(e, l)| serde_json::json!({ "edge": e, "index": l.to_string() }))
                        .collect::<Vec<_>>(),
                    "eps_coeff": eps_to_json(&reduced),
                    "psi_power": t.psi_power,
                    "two_power": t.two_power,
                    "prefactor": prefactor,
                })
            })
            .collect::<Vec<_>>(),
    })
}

pub fn evaluated_to_json(n: &EvaluatedNumerator) -> serde_json::Value {
    serde_json::json!({
        "gauge": n.gauge.as_str(),
        "terms": n
            .terms
            .iter()
            .map(|t| {
                let (prefactor, reduced) = extract_prefactor(&t.coeff);
                serde_json::json!({
                    "metric_pairs": labels_json(&t.metric_pairs),
                    "momentum_factors": t
                        .momentum_factors
                        .iter()
                        .map(|(q, l)| serde_json::json!([q, l.to_string()]))
                        .collect::<Vec<_>>(),
                    "eps_coeff": eps_to_json(&reduced),
                    "psi_power": t.psi_power,
                    "two_power": t.two_power,
                    "prefactor": prefactor,
                })
            })
            .collect::<Vec<_>>(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use IndexLabel::{MuEdge, NuVertex};

    fn v(i: u32) -> Poly {
        Poly::var(i)
    }

    #[test]
    fn pairings_of_four_items_follow_the_reference_order() {
        let items = [1, 2, 3, 4];
        let pairings = enumerate_pairings(&items);
        assert_eq!(pairings.len(), 10, "1 empty + 6 single pairs + 3 perfect matchings");
        assert!(pairings[0].pairs.is_empty());
        assert_eq!(pairings[0].singles, vec![1, 2, 3, 4]);
        let singles: Vec<Vec<i32>> = pairings[1..7].iter().map(|p| p.singles.clone()).collect();
        assert_eq!(
            pairings[1..7].iter().map(|p| p.pairs[0]).collect::<Vec<_>>(),
            vec![(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)],
            "single-pair block in lexicographic order"
        );
        assert_eq!(singles[0], vec![3, 4]);
        assert_eq!(
            pairings[7..10].iter().map(|p| p.pairs.clone()).collect::<Vec<_>>(),
            vec![
                vec![(1, 2), (3, 4)],
                vec![(1, 3), (2, 4)],
                vec![(1, 4), (2, 3)],
            ],
            "perfect matchings in recursive order"
        );
        assert_eq!(enumerate_pairings::<u32>(&[]).len(), 1, "empty input has the empty pairing");
    }

    #[test]
    fn photon_bubble_numerator_has_two_terms_and_no_eps() {
        let g = fixtures::photon_bubble();
        let n = numerator(&g, Gauge::General).unwrap();
        assert_eq!(n.terms.len(), 2);
        let t0 = &n.terms[0];
        assert!(t0.metric_pairs.is_empty());
        assert_eq!(t0.x_factors, vec![(1, MuEdge(1)), (2, MuEdge(2))]);
        assert_eq!(t0.coeff, EpsLaurent::one());
        assert_eq!((t0.psi_power, t0.two_power), (2, 0));
        let t1 = &n.terms[1];
        assert_eq!(t1.metric_pairs, vec![(MuEdge(1), MuEdge(2))]);
        assert!(t1.x_factors.is_empty());
        assert_eq!(t1.coeff, EpsLaurent::one(), "the fermion bubble cycle entry is 1");
        assert_eq!((t1.psi_power, t1.two_power), (1, -1));
        let nf = numerator(&g, Gauge::Feynman).unwrap();
        assert_eq!(nf.terms, n.terms, "without internal photons the gauges coincide");
    }

    #[test]
    fn fermion_self_energy_numerator_matches_hand_expansion() {
        let g = fixtures::fermion_self_energy();
        let n = numerator(&g, Gauge::General).unwrap();
        assert_eq!(n.terms.len(), 4);
        let psi2 = grapoly::kirchhoff(&g).scale(&BigInt::from(2));

        let t0 = &n.terms[0];
        assert_eq!(t0.x_factors, vec![(1, MuEdge(1)), (2, NuVertex(1)), (2, NuVertex(2))]);
        assert_eq!(t0.coeff, EpsLaurent::single(1, v(2)), "unmerged photon prefactor eps*a2");
        assert_eq!((t0.psi_power, t0.two_power), (3, 0));

        let t1 = &n.terms[1];
        assert_eq!(t1.metric_pairs, vec![(MuEdge(1), NuVertex(1))]);
        assert_eq!(t1.x_factors, vec![(2, NuVertex(2))]);
        assert_eq!(t1.coeff, EpsLaurent::single(1, -v(2)), "chi^(1,2) = -1 under these directions");
        assert_eq!((t1.psi_power, t1.two_power), (2, -1));

        let t3 = &n.terms[3];
        assert_eq!(t3.metric_pairs, vec![(NuVertex(1), NuVertex(2))]);
        assert_eq!(t3.x_factors, vec![(1, MuEdge(1))]);
        let mut expected = EpsLaurent::single(1, v(2));
        expected.add_slice(0, psi2);
        assert_eq!(t3.coeff, expected, "merged photon absorbs its prefactor");
        assert_eq!((t3.psi_power, t3.two_power), (2, -1));
    }

    #[test]
    fn feynman_gauge_pins_photon_metric_pairs() {
        let g = fixtures::fermion_self_energy();
        let n = numerator(&g, Gauge::Feynman).unwrap();
        assert_eq!(n.terms.len(), 1, "a single fermion edge admits only the empty pairing");
        let t = &n.terms[0];
        assert_eq!(t.metric_pairs, vec![(NuVertex(1), NuVertex(2))]);
        assert_eq!(t.x_factors, vec![(1, MuEdge(1))]);
        assert_eq!(t.coeff, EpsLaurent::one());
        assert_eq!((t.psi_power, t.two_power), (1, 0));
    }

    #[test]
    fn vertex_correction_numerator_eps_structure() {
        let g = fixtures::one_loop_vertex();
        let n = numerator(&g, Gauge::General).unwrap();
        assert_eq!(n.terms.len(), 10, "all cycle entries of the triangle are nonzero");
        for t in &n.terms {
            assert!(t.coeff.min_power().unwrap() >= 0, "prefactors keep eps powers nonnegative");
        }
        let full: Vec<&NumTerm> = n.terms.iter().filter(|t| t.x_factors.is_empty()).collect();
        assert_eq!(full.len(), 3);
        let merged = full
            .iter()
            .find(|t| t.metric_pairs.contains(&(NuVertex(1), NuVertex(2))))
            .expect("the photon-merged pairing exists");
        let mut expected = EpsLaurent::single(1, v(1));
        expected.add_slice(0, grapoly::kirchhoff(&g).scale(&BigInt::from(2)));
        assert_eq!(merged.coeff, expected);
        assert_eq!((merged.psi_power, merged.two_power), (2, -2));
    }

    #[test]
    fn chi_same_edge_combines_psi_pole_and_diagonal() {
        let g = fixtures::one_loop_vertex();
        let l = chi_same_edge(&g, 1).unwrap();
        assert_eq!(l.coeff(-1), (v(1) + v(2) + v(3)).scale(&BigInt::from(2)));
        assert_eq!(l.coeff(0), v(1), "a1 * chi^(1) with chi^(1) = 1");
        assert!(chi_same_edge(&g, 9).is_err());
    }

    #[test]
    fn momentum_routing_on_the_reference_fixtures() {
        let g = fixtures::two_loop_vacuum_polarization();
        let ma = momentum_paths(&g).unwrap();
        assert_eq!(ma.base_vertex, 1);
        assert_eq!(ma.eliminated, "q2");
        assert_eq!(ma.paths["q1"], vec![(2, 1), (3, 1)], "q1 walks the fermion path 3 -> 4 -> 1");
        assert_eq!(ma.edge_momenta[&2], BTreeMap::from([("q1".to_string(), 1)]));
        assert_eq!(ma.edge_momenta[&3], BTreeMap::from([("q1".to_string(), 1)]));
        assert!(!ma.edge_momenta.contains_key(&1));

        let t = fixtures::one_loop_vertex();
        let mt = momentum_paths(&t).unwrap();
        assert_eq!(mt.eliminated, "q3");
        assert_eq!(
            mt.edge_momenta[&1],
            BTreeMap::from([("q1".to_string(), -1), ("q2".to_string(), -1)])
        );
        assert_eq!(mt.edge_momenta[&2], BTreeMap::from([("q1".to_string(), -1)]));

        let no_ext = fixtures::wheel3();
        assert_eq!(momentum_paths(&no_ext).unwrap_err(), Error::NoExternals);
    }

    #[test]
    fn physical_symanzik_polynomial_of_the_vertex_correction() {
        let g = fixtures::one_loop_vertex();
        let phi = grapoly::symanzik2(&g).unwrap();
        let ma = momentum_paths(&g).unwrap();
        let ev = evaluate_quadform(&phi, &ma);
        let q1q1 = ("q1".to_string(), "q1".to_string());
        let q1q2 = ("q1".to_string(), "q2".to_string());
        let q2q2 = ("q2".to_string(), "q2".to_string());
        assert_eq!(ev.entries[&q1q1], v(1) * v(3) + v(2) * v(3));
        assert_eq!(ev.entries[&q2q2], v(1) * v(2) + v(1) * v(3));
        assert_eq!(ev.entries[&q1q2], (v(1) * v(3)).scale(&BigInt::from(2)));
        assert_eq!(ev.entries.len(), 3);
    }

    #[test]
    fn evaluated_x_for_the_vacuum_polarization_edge_two() {
        let g = fixtures::two_loop_vacuum_polarization();
        let ma = momentum_paths(&g).unwrap();
        let x2 = grapoly::x_poly(&g, 2, MuEdge(2)).unwrap();
        let ev = evaluate_vecpoly(&x2, &ma);
        let expected = (v(1) + v(5)) * (v(3) + v(4)) + v(1) * v(5) - v(1) * v(3);
        assert_eq!(ev.entries["q1"], expected);
        assert_eq!(ev.entries.len(), 1, "only q1 flows through the loop edges");
    }

    #[test]
    fn evaluated_numerator_merges_branches() {
        let g = fixtures::photon_bubble();
        let n = numerator(&g, Gauge::General).unwrap();
        let ma = momentum_paths(&g).unwrap();
        let ev = evaluate_numerator(&g, &n, &ma).unwrap();
        assert_eq!(ev.terms.len(), 2);
        let with_momenta = ev
            .terms
            .iter()
            .find(|t| !t.momentum_factors.is_empty())
            .expect("the X.X term survives evaluation");
        assert_eq!(
            with_momenta.momentum_factors,
            vec![("q2".to_string(), MuEdge(1)), ("q2".to_string(), MuEdge(2))],
            "q1 is eliminated at the base vertex, so only q2 survives"
        );
    }

    #[test]
    fn json_shape_of_the_numerator() {
        let g = fixtures::fermion_self_energy();
        let n = numerator(&g, Gauge::General).unwrap();
        let json = numerator_to_json(&n);
        assert_eq!(json["gauge"], "general");
        let terms = json["terms"].as_array().unwrap();
        assert_eq!(terms.len(), 4);
        assert_eq!(terms[0]["eps_coeff"]["1"], "1");
        assert_eq!(terms[0]["prefactor"], "a2", "the photon prefactor monomial is split off");
        assert_eq!(terms[0]["psi_power"], 3);
        assert_eq!(terms[0]["two_power"], 0);
    }
}
