mod common;

use common::*;
use treerep::bttree::{distance, Vertex};
use treerep::treeharm::*;

#[test]
fn bounded_gain_graphs_reach_zero() {
    for seed in 0..400 {
        let p = [2, 3, 5][seed as usize % 3];
        let (g, flat) = bounded_graph(seed, p, 1 + seed as usize % 6, seed as usize % 5);
        assert_eq!(energy(&g, &flat).unwrap(), 0);
        let run = minimize(&g, TreeAssignment::constant(&g, &Vertex::base(p)), 200).unwrap();
        assert!(run.converged, "seed {seed}");
        assert_eq!(run.final_energy(), 0, "seed {seed}: {:?}", run.energies);
        assert!(reeb_contract(&g, &run.assignment).unwrap().is_point());
        let shift: Vec<u64> =
            (0..g.vertex_count()).map(|u| distance(flat.get(u), run.assignment.get(u))).collect();
        assert!(shift.windows(2).all(|w| w[0] == w[1]), "seed {seed}: {shift:?}");
    }
}

