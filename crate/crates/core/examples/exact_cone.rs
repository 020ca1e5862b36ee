//! The exact engine on functions over five points: rational witnesses,
//! extreme rays by double description, and `q_max` for every support.

use groundspace::cone::{analyze_cone, exact_rays, exact_witness};
use groundspace::exact::linalg::q;
use groundspace::{OperatorSubspace, Projection, RunConfig};

fn show(v: &[groundspace::exact::Q]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn main() -> groundspace::Result<()> {
    // constants plus f(x) = (x - 2)^2 and g(x) = x
    let fs = vec![vec![q(1); 5], (0..5).map(|x| q((x - 2) * (x - 2))).collect(), (0..5).map(q).collect()];
    let u = OperatorSubspace::from_functions(5, &fs)?;
    let cfg = RunConfig::default();

    let d = analyze_cone(&Projection::from_support(5, [2])?, &u, &cfg)?;
    println!("K(e2): dim {}, witness [{}]", d.dim_k, show(exact_witness(&d).unwrap()));
    for r in exact_rays(&d).unwrap() {
        println!("  ray [{}]", show(&r));
    }

    println!("support -> q_max");
    for mask in 1u32..32 {
        let s: Vec<usize> = (0..5).filter(|x| mask >> x & 1 == 1).collect();
        let qm = analyze_cone(&Projection::from_support(5, s.iter().copied())?, &u, &cfg)?.q_max;
        let t = qm.support().unwrap();
        if t == &s[..] {
            println!("  {s:?} member");
        } else {
            println!("  {s:?} -> {t:?}");
        }
    }
    Ok(())
}
