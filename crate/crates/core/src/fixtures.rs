//! Worked examples as code: the three-dimensional subspace of `M₃` spanned by
//! `id`, `σ_X ⊕ 2` and `σ_Y ⊕ 0`, and the two-local functions on three bits.

use num_complex::Complex64;

use crate::linalg::{HermitianMatrix, Projection};
use crate::manybody::{build_klocal, SiteSystem};
use crate::subspace::{Engine, OperatorSubspace};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `σ_X ⊕ 2`.
pub fn m3_a1() -> HermitianMatrix {
    let (o, z) = (c(1.0, 0.0), c(0.0, 0.0));
    HermitianMatrix::new(3, vec![z, o, z, o, z, z, z, z, o * 2.0]).expect("hermitian")
}

/// `σ_Y ⊕ 0`.
pub fn m3_a2() -> HermitianMatrix {
    let (z, i) = (c(0.0, 0.0), c(0.0, 1.0));
    HermitianMatrix::new(3, vec![z, -i, z, i, z, z, z, z, z]).expect("hermitian")
}

/// `span{id, σ_X ⊕ 2, σ_Y ⊕ 0}`.
pub fn m3_subspace() -> OperatorSubspace {
    OperatorSubspace::from_spanning_set(&[HermitianMatrix::identity(3), m3_a1(), m3_a2()], Engine::FloatHermitian, 1e-9)
        .expect("three independent matrices")
}

/// `z_± = −1/2 ± i√3/2`.
pub fn z_pm(sign: f64) -> Complex64 {
    c(-0.5, sign * 3f64.sqrt() / 2.0)
}

/// `p(z) = ½ [[1, z̄], [z, 1]]` embedded in the upper block: image spanned by `(1, z)/√2`.
pub fn p_of(z: Complex64) -> Vec<Complex64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    vec![c(s, 0.0), z * s, c(0.0, 0.0)]
}

/// `p_± = p(−z_±) ⊕ 1`.
pub fn m3_p_pm(sign: f64) -> Projection {
    Projection::from_vectors(3, &[p_of(-z_pm(sign)), vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]], 1e-12)
        .expect("orthonormal pair")
}

/// `u_± = 2 p(z_±) ⊕ 0`, spanning the ray `K(p_±)`.
pub fn m3_u_pm(sign: f64) -> HermitianMatrix {
    let z = z_pm(sign);
    let (o, zero) = (c(1.0, 0.0), c(0.0, 0.0));
    HermitianMatrix::new(3, vec![o, z.conj(), zero, z, o, zero, zero, zero, zero]).expect("hermitian")
}

/// `0 ⊕ 1 = p_+ ∧ p_-`.
pub fn m3_corner() -> Projection {
    Projection::from_support(3, [2]).expect("in range")
}

/// The rank-one coatom `p(−z) ⊕ 0` for a unit complex `z` with `Re z > −1/2`.
pub fn m3_family_member(z: Complex64) -> Projection {
    Projection::from_vectors(3, &[p_of(-z)], 1e-12).expect("unit vector")
}

/// Two-local functions on three bits, `dim U_(2) = 7`.
pub fn three_bit_subspace() -> OperatorSubspace {
    build_klocal(&SiteSystem::bits(3).expect("valid"), 2).expect("k within range")
}

/// Even-parity configurations `{000, 011, 101, 110}`, where `(−1)^{x₁+x₂+x₃} = +1`.
pub const V_PLUS: [usize; 4] = [0, 3, 5, 6];
/// Odd-parity configurations `{001, 010, 100, 111}`.
pub const V_MINUS: [usize; 4] = [1, 2, 4, 7];

/// `{x, y}` is an edge of the complete bipartite graph between the parity classes.
pub fn is_parity_edge(pair: &[usize]) -> bool {
    pair.len() == 2 && (pair[0].count_ones() + pair[1].count_ones()) % 2 == 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::eig_herm;

    #[test]
    fn u_pm_has_kernel_p_pm() {
        for sign in [1.0, -1.0] {
            let u = m3_u_pm(sign);
            assert!(m3_p_pm(sign).annihilation_residual(&u) < 1e-12);
            let e = eig_herm(&u, 1e-9).unwrap();
            assert!((e.max_eigenvalue() - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn u_pm_lies_in_the_span() {
        let s = m3_subspace();
        for sign in [1.0, -1.0] {
            let u = m3_u_pm(sign);
            assert!((&u - &s.project_onto(&u)).frobenius_norm() < 1e-12);
        }
    }

    #[test]
    fn family_generator_lies_in_the_span() {
        // 2p(z) ⊕ (1 + 2 Re z) is λ id + Re z (σ_X ⊕ 2) + Im z (σ_Y ⊕ 0) with λ = 1
        let s = m3_subspace();
        let z = Complex64::from_polar(1.0, 0.4);
        let (o, zero) = (c(1.0, 0.0), c(0.0, 0.0));
        let good = HermitianMatrix::new(3, vec![o, z.conj(), zero, z, o, zero, zero, zero, o * (1.0 + 2.0 * z.re)]).unwrap();
        assert!((&good - &s.project_onto(&good)).frobenius_norm() < 1e-12);
        let printed = HermitianMatrix::new(3, vec![o, z.conj(), zero, z, o, zero, zero, zero, o * (1.0 + z.re)]).unwrap();
        assert!((&printed - &s.project_onto(&printed)).frobenius_norm() > 1e-3);
    }
}
