//! Ground projections, image intersections and the Löwner order.

use groundspace::{eig_herm, ground_projection, image_intersection, loewner_leq, HermitianMatrix, Projection};
use num_complex::Complex64;

fn main() -> groundspace::Result<()> {
    let a = HermitianMatrix::from_real_rows(&[&[1.0, 1.0, 0.0], &[1.0, 1.0, 0.0], &[0.0, 0.0, 0.0]])?;
    let e = eig_herm(&a, 1e-12)?;
    println!("eigenvalues from {:.3} to {:.3}", e.min_eigenvalue(), e.max_eigenvalue());
    let p = ground_projection(&a, 1e-9)?;
    println!("ground projection has rank {}", p.rank());

    let s = 0.5f64.sqrt();
    let v = |x: f64, y: f64, z: f64| vec![Complex64::new(x, 0.0), Complex64::new(y, 0.0), Complex64::new(z, 0.0)];
    let plane = Projection::from_vectors(3, &[v(s, -s, 0.0), v(0.0, 0.0, 1.0)], 1e-9)?;
    let xz = Projection::from_support(3, [0, 2])?;
    let m = image_intersection(&plane, &xz, 1e-9);
    println!("plane ∧ xz-plane has rank {}", m.rank());
    println!("meet below both: {}", loewner_leq(&m, &plane, 1e-9) && loewner_leq(&m, &xz, 1e-9));
    println!("plane equals ground projection: {}", plane.approx_eq(&p, 1e-9));
    Ok(())
}
