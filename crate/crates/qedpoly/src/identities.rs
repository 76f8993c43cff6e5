//! Cross-validation battery: every polynomial identity the construction
//! relies on, checked exactly over a corpus of connected multigraphs.

use crate::exec;
use crate::graph::{Graph, VertexId};
use crate::grapoly;
use crate::polyring::Poly;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// One failed identity on one graph.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CheckFailure {
    /// JSON of the offending graph.
    pub graph: String,
    pub check: String,
    pub detail: String,
}

/// Outcome of running the battery over a corpus.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct CheckSummary {
    pub graphs: usize,
    pub checks: u64,
    pub failures: Vec<CheckFailure>,
}

impl CheckSummary {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({
            "graphs": self.graphs,
            "checks": self.checks,
            "ok": self.is_ok(),
            "failures": self
                .failures
                .iter()
                .map(|f| {
                    let graph: serde_json::Value = serde_json::from_str(&f.graph)
                        .expect("stored graph json is valid");
                    serde_json::json!({
                        "graph": graph,
                        "check": f.check,
                        "detail": f.detail,
                    })
                })
                .collect::<Vec<_>>(),
        })
    }
}

struct Checker {
    checks: u64,
    failures: Vec<(String, String)>,
}

impl Checker {
    fn is(&mut self, name: &str, ok: bool, detail: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push((name.to_string(), detail()));
        }
    }
}

/// Number of spanning trees by the matrix-tree theorem: the determinant of
/// the reduced Laplacian, computed exactly with Bareiss elimination.
pub fn matrix_tree_count(g: &Graph) -> BigInt {
    let verts: Vec<VertexId> = g.vertices().iter().copied().collect();
    let n = verts.len();
    if n <= 1 {
        return BigInt::one();
    }
    let index: BTreeMap<VertexId, usize> =
        verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut lap = vec![vec![BigInt::zero(); n]; n];
    for e in g.edges() {
        if e.is_self_loop() {
            continue;
        }
        let (u, v) = (index[&e.source], index[&e.target]);
        lap[u][u] += 1u32;
        lap[v][v] += 1u32;
        lap[u][v] -= 1u32;
        lap[v][u] -= 1u32;
    }
    let minor: Vec<Vec<BigInt>> =
        (1..n).map(|i| (1..n).map(|j| lap[i][j].clone()).collect()).collect();
    bareiss_det(minor)
}

fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = num / &prev;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

/// Runs every identity on one connected graph. Returns the number of
/// checks performed and the failures.
pub fn check_graph(g: &Graph) -> (u64, Vec<(String, String)>) {
    let mut c = Checker { checks: 0, failures: Vec::new() };
    let psi = grapoly::kirchhoff(g);
    let chi = grapoly::cycle_poly(g).expect("corpus graphs are connected");
    let phi = grapoly::symanzik2(g).expect("corpus graphs are connected");
    let trees = g.spanning_trees().expect("corpus graphs are connected");
    let cycles = g.simple_cycles().expect("corpus graphs are enumerable");
    let bonds = g.bonds().expect("corpus graphs are connected");
    let h1 = g.h1() as u32;

    c.is("psi-multilinear", psi.is_multilinear(), || psi.to_string());
    c.is("psi-homogeneous", psi.homogeneous_degree() == Some(h1), || {
        format!("degree {:?}, h1 {}", psi.homogeneous_degree(), h1)
    });
    c.is(
        "psi-coefficients",
        psi.terms().all(|(_, k)| k == &BigInt::one()),
        || psi.to_string(),
    );
    c.is(
        "matrix-tree",
        matrix_tree_count(g) == BigInt::from(trees.len()),
        || format!("determinant {}, enumerated {}", matrix_tree_count(g), trees.len()),
    );
    c.is(
        "psi-cycle-partition",
        grapoly::psi_cycle_identity_check(g).unwrap_or(false),
        || "h1 * Psi does not match either cycle partition form".to_string(),
    );

    for ((e, f), entry) in phi.entries() {
        if entry.is_zero() {
            continue;
        }
        c.is("phi-homogeneous", entry.homogeneous_degree() == Some(h1 + 1), || {
            format!("entry ({e},{f}) has degree {:?}", entry.homogeneous_degree())
        });
        c.is("phi-multilinear", entry.is_multilinear(), || format!("entry ({e},{f}): {entry}"));
    }
    for ((e, f), entry) in chi.entries() {
        if entry.is_zero() || h1 == 0 {
            continue;
        }
        c.is("chi-homogeneous", entry.homogeneous_degree() == Some(h1 - 1), || {
            format!("entry ({e},{f}) has degree {:?}", entry.homogeneous_degree())
        });
        c.is("chi-multilinear", entry.is_multilinear(), || format!("entry ({e},{f}): {entry}"));
    }

    let edge_ids: Vec<u32> = g.edges().iter().map(|e| e.id).collect();
    for &e in &edge_ids {
        let ae = Poly::var(e);
        let is_tadpole = g.edge(e).unwrap().is_self_loop();
        let is_bridge = cycles.iter().all(|cy| !cy.contains(e));
        let chi_e = chi.get(e, e);
        let beta_e = phi.get(e, e);

        if is_bridge {
            c.is("chi-diagonal-bridge", chi_e.is_zero(), || format!("edge {e}: {chi_e}"));
        } else {
            let deleted = g.delete(&[e]).unwrap();
            c.is("chi-diagonal-deletion", chi_e == grapoly::kirchhoff(&deleted), || {
                format!("edge {e}")
            });
            c.is("chi-diagonal-partial", chi_e == psi.partial(e), || format!("edge {e}"));
        }
        if is_tadpole {
            c.is("beta-diagonal-tadpole", beta_e.is_zero(), || format!("edge {e}: {beta_e}"));
        } else {
            let contracted = g.contract(&[e]).unwrap();
            c.is(
                "beta-diagonal-contraction",
                beta_e == &ae * &grapoly::kirchhoff(&contracted),
                || format!("edge {e}"),
            );
        }
        c.is(
            "alpha-psi-split",
            &ae * &psi == &beta_e + &(&(&ae * &ae) * &chi_e),
            || format!("edge {e}"),
        );

        if !is_bridge && !is_tadpole {
            let deleted = g.delete(&[e]).unwrap();
            let contracted = g.contract(&[e]).unwrap();
            let psi_del = grapoly::kirchhoff(&deleted);
            let psi_con = grapoly::kirchhoff(&contracted);
            c.is(
                "psi-contraction-deletion",
                psi == &psi_con + &(&ae * &psi_del),
                || format!("edge {e}"),
            );
            c.is("psi-set-to-zero", psi.substitute(e, 0) == psi_con, || format!("edge {e}"));
            c.is("psi-partial", psi.partial(e) == psi_del, || format!("edge {e}"));
            if deleted.is_connected() {
                c.is(
                    "chi-matrix-deletion",
                    grapoly::cycle_poly(&deleted).unwrap() == chi.partial(e).without_edge(e),
                    || format!("edge {e}"),
                );
            }
            c.is(
                "chi-matrix-contraction",
                grapoly::cycle_poly(&contracted).unwrap()
                    == chi.substitute(e, 0).without_edge(e),
                || format!("edge {e}"),
            );
        }
    }

    for (i, &e) in edge_ids.iter().enumerate() {
        for &f in &edge_ids[i + 1..] {
            let lhs = phi.get(e, f);
            let rhs = -(&(&Poly::var(e) * &Poly::var(f)) * &chi.get(e, f));
            c.is("beta-offdiagonal-chi", lhs == rhs, || {
                format!("pair ({e},{f}): {lhs} vs {rhs}")
            });
        }
    }

    if g.num_edges() <= 8 {
        for cy in &cycles {
            for b in &bonds {
                let overlap = cy.edge_ids().filter(|&e| b.contains(e)).count();
                c.is("cycle-bond-even-overlap", overlap % 2 == 0, || {
                    let cs: Vec<_> = cy.signs().collect();
                    let bs: Vec<_> = b.signs().collect();
                    format!("cycle {cs:?} and bond {bs:?}")
                });
            }
        }
    }

    (c.checks, c.failures)
}

/// Runs the battery over a corpus, in parallel when enabled.
pub fn check_corpus(graphs: &[Graph]) -> CheckSummary {
    let results = exec::map_collect(graphs, |g| (g.to_json_string(), check_graph(g)));
    let mut summary = CheckSummary { graphs: graphs.len(), ..CheckSummary::default() };
    for (json, (checks, failures)) in results {
        summary.checks += checks;
        for (check, detail) in failures {
            summary.failures.push(CheckFailure { graph: json.clone(), check, detail });
        }
    }
    summary
}
