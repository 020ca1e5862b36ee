//! Randomized evidence about 2-local Hamiltonians on three qubits. Nothing here
//! is a proof.
//!
//! Ground spaces of random elements of `U_(2)` are non-degenerate. Random
//! rank-7 projections all have `q_max = id`. Random projections of rank at
//! most 5 are sorted by `dim K(p)` and by the rank of `q_max(p)`; whenever
//! `K(p)` is a ray, `q_max(p)` is the coatom above `p` and its rank is what
//! matters.

use std::collections::BTreeMap;

use groundspace::cone::analyze_cone;
use groundspace::linalg::CMat;
use groundspace::{build_klocal, ground_projection, Projection, RunConfig, SiteSystem};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

fn random_projection(n: usize, r: usize, rng: &mut ChaCha8Rng) -> groundspace::Result<Projection> {
    let m = CMat::from_fn(n, r, |_, _| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)));
    Projection::from_vectors(n, &m.columns(), 1e-9)
}

fn main() -> groundspace::Result<()> {
    let trials: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(40);
    let sys = SiteSystem::qubits(3)?;
    let u = build_klocal(&sys, 2)?;
    let cfg = RunConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(7);

    let mut ranks = BTreeMap::new();
    for _ in 0..trials {
        let a = u.random_element(&mut rng);
        *ranks.entry(ground_projection(&a, 1e-9)?.rank()).or_insert(0) += 1;
    }
    println!("ground-space ranks of {trials} random Hamiltonians: {ranks:?}");

    let mut sevens = 0;
    for _ in 0..trials {
        let p = random_projection(8, 7, &mut rng)?;
        sevens += analyze_cone(&p, &u, &cfg)?.q_max.is_identity() as usize;
    }
    println!("random rank-7 projections with q_max = id: {sevens} of {trials}");

    for r in 1..=5 {
        let mut seen = BTreeMap::new();
        for _ in 0..trials {
            let p = random_projection(8, r, &mut rng)?;
            let d = analyze_cone(&p, &u, &cfg)?;
            *seen.entry((d.dim_k, d.q_max.rank())).or_insert(0) += 1;
        }
        println!("rank {r}: (dim K(p), rank q_max(p)) counts {seen:?}");
    }
    Ok(())
}
