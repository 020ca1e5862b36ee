//! Ground spaces of frustration-free 2-local functions on three bits, next
//! to the full lattice.

use groundspace::fixtures;
use groundspace::manybody::frustration_free_lattice;
use groundspace::{build_lattice, Engine, RunConfig, SiteSystem};
use itertools::Itertools;

fn main() -> groundspace::Result<()> {
    let sys = SiteSystem::bits(3)?;
    let ff = frustration_free_lattice(&sys, 2, 100_000)?;
    let cfg = RunConfig { engine: Some(Engine::ExactCommutative), ..RunConfig::default() };
    let full = build_lattice(&fixtures::three_bit_subspace(), &cfg)?;

    println!("frustration-free: {} nodes, {} coatoms", ff.len(), ff.coatoms.len());
    println!("all 2-local:      {} nodes, {} coatoms", full.len(), full.coatoms.len());
    let inside = ff.nodes.iter().filter(|p| full.contains(p)).count();
    println!("{inside} of {} frustration-free ground spaces are ground spaces", ff.len());

    for size in 3..=7 {
        let (mut a, mut b, mut total) = (0, 0, 0);
        for s in (0..8usize).combinations(size) {
            total += 1;
            a += ff.contains_support(&s) as usize;
            b += full.contains_support(&s) as usize;
        }
        println!("  |p| = {size}: {a} frustration-free, {b} ground spaces, {total} subsets");
    }
    Ok(())
}
