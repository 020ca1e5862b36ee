//! The exact lattice of 2-local functions on three bits.

use groundspace::fixtures::{self, V_MINUS, V_PLUS};
use groundspace::{build_lattice, Engine, RunConfig};
use itertools::Itertools;

fn main() -> groundspace::Result<()> {
    let u = fixtures::three_bit_subspace();
    let cfg = RunConfig { engine: Some(Engine::ExactCommutative), ..RunConfig::default() };
    let lattice = build_lattice(&u, &cfg)?;

    println!("dim U = {}, {} nodes, {} Hasse edges", u.dim(), lattice.len(), lattice.hasse_edges.len());
    for (rank, count) in lattice.rank_counts() {
        println!("  rank {rank}: {count}");
    }

    println!("coatoms (the missing pair of configurations):");
    for &i in &lattice.coatoms {
        let gone: Vec<usize> = lattice.nodes[i].complement().support().unwrap().to_vec();
        println!("  {}  drops {gone:?}", lattice.label(i));
    }

    let missing: Vec<Vec<usize>> = (0..8usize)
        .combinations(4)
        .filter(|s| {
            let rest: Vec<usize> = (0..8).filter(|x| !s.contains(x)).collect();
            !lattice.contains_support(&rest)
        })
        .collect();
    println!("four-sets whose complement is not a ground space: {missing:?}");
    println!("parity classes: {V_PLUS:?} and {V_MINUS:?}");
    Ok(())
}
