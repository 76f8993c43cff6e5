//! Graph polynomials: Kirchhoff, second Symanzik, cycle and bond
//! polynomials, and the X vector polynomials assembled from them.
//!
//! All polynomials live in the edge variables `a<id>`. Quadratic forms in
//! the auxiliary edge vectors are stored as symmetric matrices over the
//! polynomial ring (upper triangle only); the scalar form is
//! `sum_e M[e,e] xi_e^2 + 2 sum_{e<f} M[e,f] xi_e.xi_f`.

use crate::error::{Error, Result};
use crate::exec;
use crate::graph::{Cycle, EdgeId, Graph, VertexId};
use crate::polyring::{Monomial, Poly};
use num_bigint::BigInt;
use std::collections::BTreeMap;
use std::fmt;

/// A Lorentz index label: `mu_e<id>` on fermion edges, `nu_v<id>` on photon
/// end vertices.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub enum IndexLabel {
    MuEdge(EdgeId),
    NuVertex(VertexId),
}

impl fmt::Display for IndexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexLabel::MuEdge(e) => write!(f, "mu_e{e}"),
            IndexLabel::NuVertex(v) => write!(f, "nu_v{v}"),
        }
    }
}

/// Symmetric matrix of polynomials indexed by edge pairs; only nonzero
/// upper-triangle entries are stored.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct QuadForm {
    entries: BTreeMap<(EdgeId, EdgeId), Poly>,
}

impl QuadForm {
    pub fn zero() -> Self {
        QuadForm::default()
    }

    fn key(e: EdgeId, f: EdgeId) -> (EdgeId, EdgeId) {
        if e <= f {
            (e, f)
        } else {
            (f, e)
        }
    }

    pub fn add_entry(&mut self, e: EdgeId, f: EdgeId, p: Poly) {
        if p.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.entries.entry(Self::key(e, f)) {
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += &p;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
            Entry::Vacant(slot) => {
                slot.insert(p);
            }
        }
    }

    /// Entry at (e, f), symmetric in the arguments; zero if absent.
    pub fn get(&self, e: EdgeId, f: EdgeId) -> Poly {
        self.entries.get(&Self::key(e, f)).cloned().unwrap_or_default()
    }

    pub fn entry(&self, e: EdgeId, f: EdgeId) -> Option<&Poly> {
        self.entries.get(&Self::key(e, f))
    }

    /// Nonzero entries of row `e`, as (column edge, entry) pairs.
    pub fn row(&self, e: EdgeId) -> Vec<(EdgeId, Poly)> {
        self.entries
            .iter()
            .filter_map(|(&(a, b), p)| match (a == e, b == e) {
                (true, _) => Some((b, p.clone())),
                (_, true) => Some((a, p.clone())),
                _ => None,
            })
            .collect()
    }

    /// Nonzero upper-triangle entries in ascending key order.
    pub fn entries(&self) -> impl Iterator<Item = ((EdgeId, EdgeId), &Poly)> {
        self.entries.iter().map(|(&k, p)| (k, p))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn num_entries(&self) -> usize {
        self.entries.len()
    }

    /// Entrywise partial derivative.
    pub fn partial(&self, v: u32) -> QuadForm {
        let mut out = QuadForm::zero();
        for (&(e, f), p) in &self.entries {
            out.add_entry(e, f, p.partial(v));
        }
        out
    }

    /// Entrywise substitution of an integer for a variable.
    pub fn substitute(&self, v: u32, value: i64) -> QuadForm {
        let mut out = QuadForm::zero();
        for (&(e, f), p) in &self.entries {
            out.add_entry(e, f, p.substitute(v, value));
        }
        out
    }

    /// Drops all entries whose row or column touches `e`.
    pub fn without_edge(&self, e: EdgeId) -> QuadForm {
        QuadForm {
            entries: self
                .entries
                .iter()
                .filter(|(&(a, b), _)| a != e && b != e)
                .map(|(&k, p)| (k, p.clone()))
                .collect(),
        }
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.entries
                .iter()
                .map(|(&(e, f), p)| {
                    serde_json::json!({ "e": e, "f": f, "poly": p.to_string() })
                })
                .collect(),
        )
    }
}

/// An edge vector polynomial `X^{(e)}`: the coefficient of each `xi_{e'}`
/// is a polynomial in the edge variables.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VecPoly {
    pub edge: EdgeId,
    pub index: IndexLabel,
    pub coeffs: BTreeMap<EdgeId, Poly>,
}

impl VecPoly {
    /// Coefficient of `xi_{e}`; zero if absent.
    pub fn coeff(&self, e: EdgeId) -> Poly {
        self.coeffs.get(&e).cloned().unwrap_or_default()
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({
            "edge": self.edge,
            "index": self.index.to_string(),
            "coeffs": self
                .coeffs
                .iter()
                .map(|(&e, p)| serde_json::json!({ "edge": e, "poly": p.to_string() }))
                .collect::<Vec<_>>(),
        })
    }
}

fn signed(p: Poly, s: i8) -> Poly {
    if s >= 0 {
        p
    } else {
        -p
    }
}

/// Product of the edge variables of an oriented edge set.
fn alpha_monomial(ids: impl Iterator<Item = EdgeId>) -> Poly {
    Poly::monomial(Monomial::from_exps(ids.map(|e| (e, 1))), 1)
}

/// Kirchhoff (first Symanzik) polynomial: the spanning-tree sum
/// `sum_T prod_{e not in T} a_e` per connected component, multiplied over
/// components. Edgeless components contribute 1.
///
/// Panics if a component exceeds the subgraph-enumeration edge limit.
pub fn kirchhoff(g: &Graph) -> Poly {
    g.components().into_iter().map(|comp| component_psi(&comp)).product()
}

fn component_psi(comp: &Graph) -> Poly {
    if comp.num_edges() == 0 {
        return Poly::one();
    }
    let masks = comp
        .spanning_tree_masks()
        .expect("components are connected and within the enumeration limit");
    let ids: Vec<EdgeId> = comp.edge_ids().collect();
    Poly::from_terms(masks.into_iter().map(|mask| {
        let complement = ids
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) == 0)
            .map(|(_, &id)| (id, 1));
        (Monomial::from_exps(complement), BigInt::from(1))
    }))
}

/// The second Symanzik polynomial as a quadratic form in the edge vectors:
/// `Phi = sum_B (sum_{e in B} o_B(e) xi_e)^2 a_B Psi(G\B)` summed over all
/// bonds B.
pub fn symanzik2(g: &Graph) -> Result<QuadForm> {
    let bonds = g.bonds()?;
    let contribs = exec::map_collect(&bonds, |bond| {
        let ids: Vec<EdgeId> = bond.edge_ids().collect();
        let base = alpha_monomial(ids.iter().copied())
            * kirchhoff(&g.delete(&ids).expect("bond edges exist"));
        (bond.signs().collect::<Vec<_>>(), base)
    });
    let mut out = QuadForm::zero();
    for (signs, base) in contribs {
        for (i, &(e, se)) in signs.iter().enumerate() {
            for &(f, sf) in &signs[i..] {
                out.add_entry(e, f, signed(base.clone(), se * sf));
            }
        }
    }
    Ok(out)
}

/// Kirchhoff polynomial of the cycle quotient G/C. Multi-edge cycles are
/// contracted; a self-loop 1-cycle is deleted instead.
pub(crate) fn cycle_quotient(g: &Graph, c: &Cycle) -> Graph {
    let ids: Vec<EdgeId> = c.edge_ids().collect();
    let single_self_loop =
        ids.len() == 1 && g.edge(ids[0]).map(|e| e.is_self_loop()).unwrap_or(false);
    if single_self_loop {
        g.delete(&ids).expect("cycle edges exist")
    } else {
        g.contract(&ids).expect("multi-edge simple cycles contain no self-loops")
    }
}

fn cycle_psi(g: &Graph, c: &Cycle) -> Poly {
    kirchhoff(&cycle_quotient(g, c))
}

/// The cycle polynomial as a quadratic form:
/// `chi = sum_C (sum_{e in C} o_C(e) xi_e)^2 Psi(G/C)` over simple cycles C.
pub fn cycle_poly(g: &Graph) -> Result<QuadForm> {
    let cycles = g.simple_cycles()?;
    let contribs = exec::map_collect(&cycles, |c| {
        (c.signs().collect::<Vec<_>>(), cycle_psi(g, c))
    });
    let mut out = QuadForm::zero();
    for (signs, base) in contribs {
        for (i, &(e, se)) in signs.iter().enumerate() {
            for &(f, sf) in &signs[i..] {
                out.add_entry(e, f, signed(base.clone(), se * sf));
            }
        }
    }
    Ok(out)
}

/// Diagonal cycle polynomial `chi^{(e)} = sum_{C : e in C} Psi(G/C)`.
/// Bridges and other cycle-free edges give zero.
pub fn chi_edge(g: &Graph, e: EdgeId) -> Result<Poly> {
    g.edge(e)?;
    let cycles = g.simple_cycles()?;
    let relevant: Vec<&Cycle> = cycles.iter().filter(|c| c.contains(e)).collect();
    Ok(exec::map_collect(&relevant, |c| cycle_psi(g, c)).into_iter().sum())
}

/// Off-diagonal cycle polynomial
/// `chi^{(e,f)} = sum_{C : e,f in C} o_C(e) o_C(f) Psi(G/C)` for distinct
/// edges e, f.
pub fn chi_pair(g: &Graph, e: EdgeId, f: EdgeId) -> Result<Poly> {
    if e == f {
        return Err(Error::SameEdge(e));
    }
    g.edge(e)?;
    g.edge(f)?;
    let cycles = g.simple_cycles()?;
    let relevant: Vec<&Cycle> =
        cycles.iter().filter(|c| c.contains(e) && c.contains(f)).collect();
    let parts = exec::map_collect(&relevant, |c| {
        signed(cycle_psi(g, c), c.pair_sign(e, f).expect("both edges lie on the cycle"))
    });
    Ok(parts.into_iter().sum())
}

/// Diagonal bond polynomial `beta^{(e)} = sum_{B : e in B} a_B Psi(G\B)`.
/// Self-loops lie on no bond and give zero.
pub fn beta_edge(g: &Graph, e: EdgeId) -> Result<Poly> {
    g.edge(e)?;
    let bonds = g.bonds()?;
    let relevant: Vec<_> = bonds.iter().filter(|b| b.contains(e)).collect();
    let parts = exec::map_collect(&relevant, |bond| {
        let ids: Vec<EdgeId> = bond.edge_ids().collect();
        alpha_monomial(ids.iter().copied()) * kirchhoff(&g.delete(&ids).expect("bond edges exist"))
    });
    Ok(parts.into_iter().sum())
}

/// Off-diagonal bond polynomial
/// `beta^{(e,f)} = sum_{B : e,f in B} o_B(e) o_B(f) a_B Psi(G\B)` for
/// distinct edges e, f.
pub fn beta_pair(g: &Graph, e: EdgeId, f: EdgeId) -> Result<Poly> {
    if e == f {
        return Err(Error::SameEdge(e));
    }
    g.edge(e)?;
    g.edge(f)?;
    let bonds = g.bonds()?;
    let relevant: Vec<_> = bonds.iter().filter(|b| b.contains(e) && b.contains(f)).collect();
    let parts = exec::map_collect(&relevant, |bond| {
        let ids: Vec<EdgeId> = bond.edge_ids().collect();
        let base = alpha_monomial(ids.iter().copied())
            * kirchhoff(&g.delete(&ids).expect("bond edges exist"));
        signed(base, bond.pair_sign(e, f).expect("both edges lie on the bond"))
    });
    Ok(parts.into_iter().sum())
}

/// The vector polynomial
/// `X^{(e)} = xi_e Psi(G/e) - sum_{e' != e} xi_{e'} a_{e'} chi^{(e,e')}`,
/// stored as its map of xi coefficients.
pub fn x_poly(g: &Graph, e: EdgeId, index: IndexLabel) -> Result<VecPoly> {
    let edge = g.edge(e)?;
    if edge.is_self_loop() {
        return Err(Error::TadpoleContraction(e));
    }
    let mut coeffs = BTreeMap::new();
    let psi_contracted = kirchhoff(&g.contract(&[e])?);
    if !psi_contracted.is_zero() {
        coeffs.insert(e, psi_contracted);
    }
    let cycles = g.simple_cycles()?;
    let through_e: Vec<&Cycle> = cycles.iter().filter(|c| c.contains(e)).collect();
    let contribs = exec::map_collect(&through_e, |c| {
        let base = cycle_psi(g, c);
        let parts: Vec<(EdgeId, Poly)> = c
            .signs()
            .filter(|&(f, _)| f != e)
            .map(|(f, sf)| (f, signed(base.clone(), c.sign(e).expect("e lies on the cycle") * sf)))
            .collect();
        parts
    });
    let mut chi_row: BTreeMap<EdgeId, Poly> = BTreeMap::new();
    for parts in contribs {
        for (f, p) in parts {
            *chi_row.entry(f).or_default() += &p;
        }
    }
    for (f, chi) in chi_row {
        let coeff = -(Poly::var(f) * chi);
        if !coeff.is_zero() {
            coeffs.insert(f, coeff);
        }
    }
    Ok(VecPoly { edge: e, index, coeffs })
}

/// Checks the cycle partition of the Kirchhoff polynomial:
/// `h1 * Psi = sum_C Psi_C Psi(G/C) = sum_e a_e chi^{(e)}` with
/// `Psi_C = sum_{e in C} a_e`.
pub fn psi_cycle_identity_check(g: &Graph) -> Result<bool> {
    let target = kirchhoff(g).scale(&BigInt::from(g.h1() as u64));
    let cycles = g.simple_cycles()?;
    let cycle_sum: Poly = exec::map_collect(&cycles, |c| {
        let psi_c: Poly = c.edge_ids().map(Poly::var).sum();
        psi_c * cycle_psi(g, c)
    })
    .into_iter()
    .sum();
    if cycle_sum != target {
        return Ok(false);
    }
    let mut edge_sum = Poly::zero();
    for e in g.edge_ids() {
        edge_sum += Poly::var(e) * chi_edge(g, e)?;
    }
    Ok(edge_sum == target)
}
