//! k-colorability through a CDCL SAT solver.
//!
//! Variable `x(v, c)` says vertex `v` gets color `c`; every vertex takes at
//! least one color and adjacent vertices never share one. A model may give
//! a vertex several colors, in which case the smallest is used.

use std::sync::mpsc;
use std::time::Instant;

use varisat::{CnfFormula, ExtendFormula, Lit, Solver, Var};

use super::coloring::Decision;
use super::graph::Graph;

fn lit(v: usize, c: usize, k: usize) -> Lit {
    Lit::from_var(Var::from_index(v * k + c), true)
}

pub(crate) fn encode(g: &Graph, k: usize, precolored: &[usize]) -> CnfFormula {
    let mut f = CnfFormula::new();
    for v in 0..g.n_vertices() {
        let clause: Vec<Lit> = (0..k).map(|c| lit(v, c, k)).collect();
        f.add_clause(&clause);
    }
    for (u, v) in g.edges() {
        for c in 0..k {
            f.add_clause(&[!lit(u, c, k), !lit(v, c, k)]);
        }
    }
    for (c, &v) in precolored.iter().enumerate() {
        f.add_clause(&[lit(v, c, k)]);
    }
    f
}

/// Solves on a worker thread; past the deadline the answer is abandoned
/// and the search reports budget exhaustion.
pub(crate) fn sat_k_colorable(g: &Graph, k: usize, precolored: &[usize], deadline: Instant) -> Decision {
    let formula = encode(g, k, precolored);
    let n = g.n_vertices();
    let (tx, rx) = mpsc::channel();
    std::thread::spawn(move || {
        let mut solver = Solver::new();
        solver.add_formula(&formula);
        let outcome = match solver.solve() {
            Ok(true) => {
                let model = solver.model().expect("satisfiable");
                let mut colors = vec![usize::MAX; n];
                for l in model.into_iter().filter(|l| l.is_positive()) {
                    let idx = l.var().index();
                    let (v, c) = (idx / k, idx % k);
                    colors[v] = colors[v].min(c);
                }
                Decision::Colorable(colors)
            }
            Ok(false) => Decision::NotColorable,
            Err(_) => Decision::BudgetExhausted,
        };
        let _ = tx.send(outcome);
    });
    let wait = deadline.saturating_duration_since(Instant::now());
    rx.recv_timeout(wait).unwrap_or(Decision::BudgetExhausted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist_graph::verify_proper;
    use crate::dist_graph::Coloring;
    use std::time::Duration;

    fn far() -> Instant {
        Instant::now() + Duration::from_secs(60)
    }

    #[test]
    fn odd_cycle_needs_three() {
        let c7 = Graph::cycle(7);
        assert_eq!(sat_k_colorable(&c7, 2, &[], far()), Decision::NotColorable);
        let Decision::Colorable(col) = sat_k_colorable(&c7, 3, &[0, 1], far()) else {
            panic!("C7 is 3-colorable");
        };
        let c = Coloring::new(col, 3).unwrap();
        assert!(verify_proper(&c7, &c).unwrap().proper);
        assert_eq!((c.color(0), c.color(1)), (0, 1));
    }

    #[test]
    fn k5_needs_five() {
        assert_eq!(sat_k_colorable(&Graph::complete(5), 4, &[], far()), Decision::NotColorable);
    }
}
