//! The 3×3 example: a two-dimensional family of coatoms `p(-z) ⊕ 0` on the
//! circle, two special coatoms `p±` whose intersection is the corner `0 ⊕ 1`,
//! and a sampled picture of the whole lattice.

use groundspace::cone::analyze_cone;
use groundspace::fixtures;
use groundspace::{build_lattice, coatom_decomposition, extreme_rays, is_coatom, RunConfig};
use num_complex::Complex64;

fn main() -> groundspace::Result<()> {
    let u = fixtures::m3_subspace();
    let cfg = RunConfig::default().with_samples(2000);

    let corner = fixtures::m3_corner();
    let d = analyze_cone(&corner, &u, &cfg)?;
    println!("K(0⊕1): dim {}, ray {}, q_max rank {}", d.dim_k, d.is_ray, d.q_max.rank());
    for r in extreme_rays(&d, &u, &cfg)? {
        let r = r.scale(1.0 / r.frobenius_norm());
        let dist = |sign: f64| {
            let t = fixtures::m3_u_pm(sign);
            (&r - &t.scale(1.0 / t.frobenius_norm())).frobenius_norm()
        };
        println!("  extreme ray: distance {:.1e} to u+, {:.1e} to u-", dist(1.0), dist(-1.0));
    }

    let parts = coatom_decomposition(&corner, &u, &cfg)?;
    println!("0⊕1 is the meet of {} coatoms", parts.len());
    for sign in [1.0, -1.0] {
        let p = fixtures::m3_p_pm(sign);
        let hit = parts.iter().any(|q| q.approx_eq(&p, 1e-7));
        println!("  p{} in decomposition: {hit}", if sign > 0.0 { "+" } else { "-" });
    }

    for angle in [0.3, 1.0, 2.5] {
        let z = Complex64::from_polar(1.0, angle);
        let p = fixtures::m3_family_member(z);
        println!("p(-z) ⊕ 0 with Re z = {:+.3}: coatom {}", z.re, is_coatom(&p, &u, &cfg)?);
    }

    let lattice = build_lattice(&u, &cfg)?;
    println!(
        "sampled lattice: {} nodes, {} coatoms ({}), ranks {:?}",
        lattice.len(),
        lattice.coatoms.len(),
        lattice.completeness.name(),
        lattice.rank_counts()
    );
    Ok(())
}
