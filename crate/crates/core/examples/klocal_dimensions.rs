//! Dimensions of k-local spaces against the closed form.

use groundspace::manybody::klocal_dimension;
use groundspace::{build_klocal, SiteSystem};

fn main() -> groundspace::Result<()> {
    println!("{:>6} {:>3} {:>3} {:>8} {:>8}", "kind", "N", "k", "built", "formula");
    for n in 1..=4 {
        for k in 1..=n {
            for sys in [SiteSystem::bits(n)?, SiteSystem::qubits(n)?] {
                let kind = if sys.is_classical() { "bits" } else { "qubits" };
                let built = build_klocal(&sys, k)?.dim();
                println!("{kind:>6} {n:>3} {k:>3} {built:>8} {:>8}", klocal_dimension(&sys, k));
            }
        }
    }
    let mixed: SiteSystem = "sites:dims=[2,3,2]".parse()?;
    println!("{mixed}, k = 2: {}", build_klocal(&mixed, 2)?.dim());
    Ok(())
}
