//! Prints the Hasse diagram of the 2-local lattice of two or three bits as DOT.
//!
//! `cargo run --example lattice_dot -- 3 | dot -Tsvg > lattice.svg`

use groundspace::{build_klocal, build_lattice, RunConfig, SiteSystem};

fn main() -> groundspace::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(2);
    let sys = SiteSystem::bits(n)?;
    let u = build_klocal(&sys, n.min(2))?;
    let lattice = build_lattice(&u, &RunConfig::default())?;
    print!("{}", lattice.to_dot());
    Ok(())
}
