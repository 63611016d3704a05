use rand::Rng;

use crate::graph::NodeId;
use crate::oracle::{GraphAccess, OracleError};

/// Simulates one alpha-discounted walk from `u` and returns its terminal
/// node and the number of steps taken.
///
/// Each step costs one `deg` and one `neigh` query. A walk that reaches a
/// degree-0 node stops there.
pub fn sample_node<O: GraphAccess>(
    oracle: &mut O,
    u: NodeId,
    alpha: f64,
) -> Result<(NodeId, u64), OracleError> {
    let mut v = u;
    let mut moves = 0u64;
    loop {
        if oracle.rng().random::<f64>() < alpha {
            return Ok((v, moves));
        }
        let d = oracle.deg(v)?;
        if d == 0 {
            return Ok((v, moves));
        }
        let i = oracle.rng().random_range(0..d);
        v = oracle.neigh(v, i)?;
        moves += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::graph::UndirectedGraph;
    use crate::ground_truth::ppr_power;
    use crate::oracle::GraphOracle;

    #[test]
    fn alpha_near_one_stays_put() {
        let g = star(3);
        let mut o = GraphOracle::new(&g, 1);
        for _ in 0..1000 {
            assert_eq!(sample_node(&mut o, 2, 1.0 - 1e-15).unwrap(), (2, 0));
        }
        assert_eq!(o.counters().total(), 0);
    }

    #[test]
    fn isolated_start_never_moves() {
        let (g, _) = UndirectedGraph::from_edges(3, [(0, 1)]).unwrap();
        let mut o = GraphOracle::new(&g, 1);
        for _ in 0..1000 {
            assert_eq!(sample_node(&mut o, 2, 0.2).unwrap(), (2, 0));
        }
        let c = o.counters();
        assert_eq!(c.neigh_calls, 0);
        // Detecting a dead end takes a deg query only when the walk tries to continue.
        assert!(c.deg_calls <= 1000);
    }

    #[test]
    fn out_of_range_start() {
        let g = single_edge();
        let mut o = GraphOracle::new(&g, 1);
        assert!(sample_node(&mut o, 5, 0.2).is_err());
    }

    #[test]
    fn single_edge_terminal_law() {
        let g = single_edge();
        let truth = ppr_power(&g, 0, 0.2, None).unwrap().get(1);
        assert!((truth - 4.0 / 9.0).abs() < 1e-12);
        let mut o = GraphOracle::new(&g, 2024);
        let n = 1_000_000;
        let mut hits = 0u64;
        let mut moves = 0u64;
        for _ in 0..n {
            let (v, m) = sample_node(&mut o, 0, 0.2).unwrap();
            hits += (v == 1) as u64;
            moves += m;
        }
        let p = hits as f64 / n as f64;
        assert!((p - 4.0 / 9.0).abs() < 0.002, "p = {p}");
        let c = o.counters();
        assert_eq!(c.deg_calls, moves);
        assert_eq!(c.neigh_calls, moves);
    }
}
