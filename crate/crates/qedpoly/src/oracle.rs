//! Brute-force differentiation oracle for the assembled numerator.
//!
//! The oracle applies the trace derivative operator directly to the
//! Gaussian exponential, using only the second Symanzik quadratic form.
//! It never touches the cycle polynomials or the X vectors, so agreement
//! with the pairing-assembled numerator is an independent confirmation.

use crate::error::{Error, Result};
use crate::graph::{Edge, EdgeId, EdgeKind, Graph};
use crate::grapoly::{self, IndexLabel, QuadForm, VecPoly};
use crate::integrand::{self, Gauge, NumeratorExpr};
use crate::polyring::{EpsLaurent, Monomial, Poly};
use num_bigint::BigInt;
use std::collections::BTreeMap;

/// One tensor-valued term: metric factors, leftover momentum vectors, and
/// an exact rational coefficient split into an eps polynomial, a power of
/// 1/Psi, a monomial denominator and a power of 2.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TensorTerm {
    pub metric: Vec<(IndexLabel, IndexLabel)>,
    pub xi: Vec<(EdgeId, IndexLabel)>,
    pub coeff: EpsLaurent,
    pub psi_power: u32,
    pub alpha_denom: Monomial,
    pub two_power: i32,
}

/// A sum of tensor terms in merged canonical order.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct SymExpr {
    pub terms: Vec<TensorTerm>,
}

type TermKey = (
    Vec<(IndexLabel, IndexLabel)>,
    Vec<(EdgeId, IndexLabel)>,
    u32,
    Monomial,
    i32,
);

impl SymExpr {
    fn unit() -> SymExpr {
        SymExpr {
            terms: vec![TensorTerm {
                metric: Vec::new(),
                xi: Vec::new(),
                coeff: EpsLaurent::one(),
                psi_power: 0,
                alpha_denom: Monomial::one(),
                two_power: 0,
            }],
        }
    }

    /// Merges terms with identical structure and drops zero coefficients.
    fn merged(self) -> SymExpr {
        let mut acc: BTreeMap<TermKey, EpsLaurent> = BTreeMap::new();
        for t in self.terms {
            let key = (t.metric, t.xi, t.psi_power, t.alpha_denom, t.two_power);
            let slot = acc.entry(key).or_insert_with(EpsLaurent::zero);
            *slot += &t.coeff;
        }
        SymExpr {
            terms: acc
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|((metric, xi, psi_power, alpha_denom, two_power), coeff)| TensorTerm {
                    metric,
                    xi,
                    coeff,
                    psi_power,
                    alpha_denom,
                    two_power,
                })
                .collect(),
        }
    }
}

fn sorted_pair(a: IndexLabel, b: IndexLabel) -> (IndexLabel, IndexLabel) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Derivative with respect to `xi_e` carrying `label`, acting on a sum of
/// terms that multiply the Gaussian `exp(-Phi/Psi)`. Each term splits into
/// occurrence hits (a metric factor replaces one xi) and the exponential
/// hit (a new xi row scaled by -2 M[e,.] / Psi).
pub(crate) fn xi_derivative(
    expr: &SymExpr,
    e: EdgeId,
    label: IndexLabel,
    m: &QuadForm,
) -> SymExpr {
    let row = m.row(e);
    let mut out = Vec::new();
    for t in &expr.terms {
        for (pos, &(xe, xl)) in t.xi.iter().enumerate() {
            if xe != e {
                continue;
            }
            let mut nt = t.clone();
            nt.xi.remove(pos);
            nt.metric.push(sorted_pair(label, xl));
            nt.metric.sort();
            out.push(nt);
        }
        for (f, entry) in &row {
            let mut nt = t.clone();
            nt.xi.push((*f, label));
            nt.xi.sort();
            nt.coeff = nt.coeff.scale_poly(entry).scale_int(&BigInt::from(-2));
            nt.psi_power += 1;
            out.push(nt);
        }
    }
    SymExpr { terms: out }.merged()
}

/// Fermion edge operator: `-(1 / 2 a_e) d/dxi_e^{mu_e}`.
pub(crate) fn fermion_op(expr: &SymExpr, e: EdgeId, m: &QuadForm) -> SymExpr {
    let d = xi_derivative(expr, e, IndexLabel::MuEdge(e), m);
    let terms = d
        .terms
        .into_iter()
        .map(|mut t| {
            t.coeff = t.coeff.scale_int(&BigInt::from(-1));
            t.two_power -= 1;
            t.alpha_denom = t.alpha_denom.mul(&Monomial::var(e));
            t
        })
        .collect();
    SymExpr { terms }.merged()
}

/// Photon edge operator with end vertices u, v:
/// `(2 + eps)/2 g^{nu_u nu_v} + eps/(4 a) d2/dxi^{nu_u} dxi^{nu_v}`.
pub(crate) fn photon_op(expr: &SymExpr, photon: &Edge, m: &QuadForm) -> SymExpr {
    let (lu, lv) = (
        IndexLabel::NuVertex(photon.source),
        IndexLabel::NuVertex(photon.target),
    );
    let mut terms = Vec::new();
    for t in &expr.terms {
        let mut nt = t.clone();
        nt.metric.push(sorted_pair(lu, lv));
        nt.metric.sort();
        nt.coeff = &nt.coeff * &EpsLaurent::eps_plus(2);
        nt.two_power -= 1;
        terms.push(nt);
    }
    let second = xi_derivative(&xi_derivative(expr, photon.id, lu, m), photon.id, lv, m);
    for mut t in second.terms {
        t.coeff = t.coeff.shifted(1);
        t.two_power -= 2;
        t.alpha_denom = t.alpha_denom.mul(&Monomial::var(photon.id));
        terms.push(t);
    }
    SymExpr { terms }.merged()
}

/// Applies the full derivative operator of a QED graph to the Gaussian:
/// all photon operators, then all fermion operators, in ascending edge
/// order. The result is the numerator with no pairing structure assumed.
pub fn apply_d(g: &Graph) -> Result<SymExpr> {
    g.validate_qed()?;
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let m = grapoly::symanzik2(g)?;
    let mut expr = SymExpr::unit();
    for photon in g.edges_of_kind(EdgeKind::Photon) {
        expr = photon_op(&expr, photon, &m);
    }
    let fermions: Vec<EdgeId> = g.edges_of_kind(EdgeKind::Fermion).map(|e| e.id).collect();
    for e in fermions {
        expr = fermion_op(&expr, e, &m);
    }
    Ok(expr)
}

/// `(1 / 2 a_e) dPhi/dxi_e` as an X-style coefficient vector, computed from
/// the Symanzik quadratic form row and cross-checked on every call against
/// the cycle-polynomial construction.
pub fn phi_xi_derivative(g: &Graph, e: EdgeId, index: IndexLabel) -> Result<VecPoly> {
    let edge = g.edge(e)?;
    if edge.is_self_loop() {
        return Err(Error::TadpoleContraction(e));
    }
    let m = grapoly::symanzik2(g)?;
    let ae = Poly::var(e);
    let mut coeffs = BTreeMap::new();
    for (f, entry) in m.row(e) {
        let reduced = entry
            .div_exact(&ae)
            .expect("every bond through an edge carries its variable");
        if !reduced.is_zero() {
            coeffs.insert(f, reduced);
        }
    }
    let built = VecPoly { edge: e, index, coeffs };
    let independent = grapoly::x_poly(g, e, index)?;
    assert_eq!(
        built, independent,
        "Symanzik row and cycle construction of X disagree on edge {e}"
    );
    Ok(built)
}

/// Expands every X factor of an assembled numerator into explicit xi
/// factors, producing a tensor expression comparable with the oracle.
pub fn lift_numerator(g: &Graph, n: &NumeratorExpr) -> Result<SymExpr> {
    let mut terms = Vec::new();
    for term in &n.terms {
        let mut branches: Vec<(Vec<(EdgeId, IndexLabel)>, EpsLaurent)> =
            vec![(Vec::new(), term.coeff.clone())];
        for &(e, idx) in &term.x_factors {
            let x = grapoly::x_poly(g, e, idx)?;
            let mut next = Vec::new();
            for (xi, coeff) in &branches {
                for (&f, p) in &x.coeffs {
                    let mut extended = xi.clone();
                    extended.push((f, idx));
                    next.push((extended, coeff.scale_poly(p)));
                }
            }
            branches = next;
        }
        for (mut xi, coeff) in branches {
            xi.sort();
            terms.push(TensorTerm {
                metric: term.metric_pairs.clone(),
                xi,
                coeff,
                psi_power: term.psi_power,
                alpha_denom: Monomial::one(),
                two_power: term.two_power,
            });
        }
    }
    Ok(SymExpr { terms }.merged())
}

/// Substitutes `xi_e -> -xi_e`: negates every term with an odd number of
/// xi factors on edge `e`.
pub fn xi_negate(expr: &SymExpr, e: EdgeId) -> SymExpr {
    let terms = expr
        .terms
        .iter()
        .map(|t| {
            let mut nt = t.clone();
            if t.xi.iter().filter(|&&(f, _)| f == e).count() % 2 == 1 {
                nt.coeff = nt.coeff.scale_int(&BigInt::from(-1));
            }
            nt
        })
        .collect();
    SymExpr { terms }
}

/// Restricts an expression to a single power of eps. Powers of Psi, 2 and
/// the monomial denominators carry no eps, so slicing is exact.
pub fn eps_slice(expr: &SymExpr, k: i32) -> SymExpr {
    let terms = expr
        .terms
        .iter()
        .filter_map(|t| {
            let c = t.coeff.coeff(k);
            if c.is_zero() {
                return None;
            }
            let mut nt = t.clone();
            nt.coeff = EpsLaurent::from_poly(c);
            Some(nt)
        })
        .collect();
    SymExpr { terms }
}

/// One tensor signature on which two expressions differ, with the exact
/// difference over the common denominator.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Divergence {
    pub metric: Vec<(IndexLabel, IndexLabel)>,
    pub xi: Vec<(EdgeId, IndexLabel)>,
    pub eps_diff: EpsLaurent,
}

/// Result of an exact comparison of two tensor expressions.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EqReport {
    pub equal: bool,
    pub divergences: Vec<Divergence>,
}

impl EqReport {
    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({
            "equal": self.equal,
            "divergences": self
                .divergences
                .iter()
                .map(|d| {
                    let mut eps = serde_json::Map::new();
                    for (k, p) in d.eps_diff.slices() {
                        eps.insert(k.to_string(), serde_json::Value::String(p.to_string()));
                    }
                    serde_json::json!({
                        "metric": d
                            .metric
                            .iter()
                            .map(|(a, b)| serde_json::json!([a.to_string(), b.to_string()]))
                            .collect::<Vec<_>>(),
                        "xi": d
                            .xi
                            .iter()
                            .map(|(e, l)| serde_json::json!({ "edge": e, "index": l.to_string() }))
                            .collect::<Vec<_>>(),
                        "eps_diff": serde_json::Value::Object(eps),
                    })
                })
                .collect::<Vec<_>>(),
        })
    }
}

/// Compares two tensor expressions exactly. Terms are grouped by tensor
/// signature; within a group everything is put over the common denominator
/// `2^|two_min| Psi^psi_max alpha_lcm` and the signed coefficients must
/// cancel.
pub fn expressions_equal(a: &SymExpr, b: &SymExpr, psi: &Poly) -> EqReport {
    type Sig = (Vec<(IndexLabel, IndexLabel)>, Vec<(EdgeId, IndexLabel)>);
    let mut groups: BTreeMap<Sig, Vec<(&TensorTerm, i64)>> = BTreeMap::new();
    for t in &a.terms {
        groups.entry((t.metric.clone(), t.xi.clone())).or_default().push((t, 1));
    }
    for t in &b.terms {
        groups.entry((t.metric.clone(), t.xi.clone())).or_default().push((t, -1));
    }
    let mut divergences = Vec::new();
    for ((metric, xi), terms) in groups {
        let psi_max = terms.iter().map(|(t, _)| t.psi_power).max().unwrap();
        let two_min = terms.iter().map(|(t, _)| t.two_power).min().unwrap();
        let denom_lcm = terms
            .iter()
            .fold(Monomial::one(), |acc, (t, _)| acc.lcm(&t.alpha_denom));
        let mut sum = EpsLaurent::zero();
        for (t, sign) in terms {
            let extra = denom_lcm
                .try_div(&t.alpha_denom)
                .expect("the lcm is divisible by each denominator");
            let scale = &psi.pow(psi_max - t.psi_power) * &Poly::monomial(extra, 1);
            let two = BigInt::from(2).pow((t.two_power - two_min) as u32);
            sum += &t.coeff.scale_poly(&scale).scale_int(&(two * BigInt::from(sign)));
        }
        if !sum.is_zero() {
            divergences.push(Divergence { metric, xi, eps_diff: sum });
        }
    }
    EqReport { equal: divergences.is_empty(), divergences }
}

/// Full verification backing the main identity: the pairing-assembled
/// numerator, lifted to explicit xi factors, must equal the differentiation
/// oracle exactly, and the Feynman-gauge numerator must equal the oracle's
/// eps^0 slice.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TheoremReport {
    pub general: EqReport,
    pub feynman: EqReport,
    pub oracle_terms: usize,
    pub general_terms: usize,
    pub feynman_terms: usize,
}

impl TheoremReport {
    pub fn all_equal(&self) -> bool {
        self.general.equal && self.feynman.equal
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({
            "equal": self.all_equal(),
            "general": self.general.to_json_value(),
            "feynman_eps0": self.feynman.to_json_value(),
            "oracle_terms": self.oracle_terms,
            "general_terms": self.general_terms,
            "feynman_terms": self.feynman_terms,
        })
    }
}

pub fn verify_theorem(g: &Graph) -> Result<TheoremReport> {
    let oracle = apply_d(g)?;
    let psi = grapoly::kirchhoff(g);
    let general_num = integrand::numerator(g, Gauge::General)?;
    let lifted_general = lift_numerator(g, &general_num)?;
    let general = expressions_equal(&oracle, &lifted_general, &psi);
    let feynman_num = integrand::numerator(g, Gauge::Feynman)?;
    let lifted_feynman = lift_numerator(g, &feynman_num)?;
    let feynman = expressions_equal(&eps_slice(&oracle, 0), &lifted_feynman, &psi);
    Ok(TheoremReport {
        general,
        feynman,
        oracle_terms: oracle.terms.len(),
        general_terms: lifted_general.terms.len(),
        feynman_terms: lifted_feynman.terms.len(),
    })
}
