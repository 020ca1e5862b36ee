use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::subspace::Engine;

/// Numerical and search settings shared by every computation.
///
/// All randomness is derived from `seed`; identical configs give identical
/// results.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub seed: u64,
    /// Relative gap under which eigenvalues count as degenerate.
    pub tol_spec: f64,
    /// Relative singular-value cutoff for rank and null-space decisions.
    pub tol_rank: f64,
    /// Residual tolerance for reconstruction and membership checks.
    pub tol_resid: f64,
    /// Random elements of U drawn by sampled coatom enumeration.
    pub samples: usize,
    /// Random linear functionals tried per missing ray in the exposed-ray search.
    pub restarts: usize,
    pub max_nodes: usize,
    /// Largest cone dimension for which the float engine searches exposed rays.
    pub max_ray_dim: usize,
    pub engine: Option<Engine>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 0,
            tol_spec: 1e-9,
            tol_rank: 1e-9,
            tol_resid: 1e-9,
            samples: 10_000,
            restarts: 20,
            max_nodes: 100_000,
            max_ray_dim: 16,
            engine: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("tol_spec", self.tol_spec),
            ("tol_rank", self.tol_rank),
            ("tol_resid", self.tol_resid),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::invalid(format!("{name} must be strictly positive, got {v}")));
            }
        }
        if self.max_nodes == 0 {
            return Err(Error::invalid("max_nodes must be positive"));
        }
        Ok(())
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples = samples;
        self
    }

    /// Independent generator for one consumer of randomness.
    pub(crate) fn rng(&self, stream: u64) -> rand_chacha::ChaCha8Rng {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let cfg = RunConfig::default();
        cfg.validate().unwrap();
        assert_eq!(cfg.samples, 10_000);
        assert_eq!(cfg.restarts, 20);
        assert_eq!(cfg.max_nodes, 100_000);
    }

    #[test]
    fn rejects_nonpositive_tolerance() {
        let cfg = RunConfig { tol_rank: 0.0, ..RunConfig::default() };
        assert!(cfg.validate().is_err());
    }
}
