//! Marginals of a random state and the vertices of a classical marginal polytope.

use groundspace::manybody::{affine_dimension, marginal_polytope_vertices};
use groundspace::{marginal_map, HermitianMatrix, SiteSystem};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_state(n: usize, rng: &mut ChaCha8Rng) -> HermitianMatrix {
    let v: Vec<Vec<Complex64>> = (0..n).map(|_| (0..n).map(|_| Complex64::new(rng.random(), rng.random())).collect()).collect();
    let a = HermitianMatrix::outer_sum(n, &v);
    a.scale(1.0 / a.trace())
}

fn main() -> groundspace::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let sys = SiteSystem::qubits(3)?;
    let rho = random_state(sys.total_dim(), &mut rng);
    let m = marginal_map(&rho, &sys, 2)?;
    for (nu, a) in &m.entries {
        println!("marginal on {nu}: trace {:.6}", a.trace());
    }
    println!("largest inconsistency between overlapping marginals: {:.2e}", m.max_inconsistency()?);

    let bits = SiteSystem::bits(3)?;
    let verts = marginal_polytope_vertices(&bits, 2)?;
    println!("3-bit pairwise marginal polytope: {} vertices, affine dimension {}", verts.len(), affine_dimension(&verts));
    Ok(())
}
