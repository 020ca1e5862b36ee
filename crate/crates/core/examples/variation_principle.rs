//! `q_max` on a random subspace: a projection is a ground projection exactly
//! when it is its own `q_max`.

use groundspace::cone::analyze_cone;
use groundspace::{ground_projection, Engine, HermitianMatrix, OperatorSubspace, Projection, RunConfig};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_hermitian(n: usize, rng: &mut ChaCha8Rng) -> HermitianMatrix {
    let v: Vec<Vec<Complex64>> = (0..2).map(|_| (0..n).map(|_| Complex64::new(rng.random(), rng.random())).collect()).collect();
    let mut a = HermitianMatrix::outer_sum(n, &v);
    a.add_scaled(-1.0, &HermitianMatrix::diagonal(&(0..n).map(|_| rng.random::<f64>()).collect::<Vec<_>>()));
    a
}

fn main() -> groundspace::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let n = 4;
    let mut gens = vec![HermitianMatrix::identity(n)];
    // a planted positive element with a two-dimensional kernel
    let w = HermitianMatrix::outer_sum(n, &[(0..n).map(|i| Complex64::new(i as f64, 1.0)).collect(), (0..n).map(|i| Complex64::new(1.0, -(i as f64))).collect()]);
    gens.push(w.clone());
    for _ in 0..2 {
        gens.push(random_hermitian(n, &mut rng));
    }
    let u = OperatorSubspace::from_spanning_set(&gens, Engine::FloatHermitian, 1e-9)?;
    let cfg = RunConfig::default();

    let g = ground_projection(&w, 1e-9)?;
    let candidates = [
        ("0", Projection::zero(n)),
        ("ker w", g.clone()),
        ("first vector of ker w", Projection::from_vectors(n, &[g.basis().column(0)], 1e-9)?),
        ("e0", Projection::from_support(n, [0])?),
        ("id", Projection::identity(n)),
    ];
    for (name, p) in candidates {
        let d = analyze_cone(&p, &u, &cfg)?;
        let member = d.q_max.approx_eq(&p, 1e-7);
        println!("{name:>22}: rank {} -> q_max rank {}, dim K {}, member {member}", p.rank(), d.q_max.rank(), d.dim_k);
    }
    Ok(())
}
