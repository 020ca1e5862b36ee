//! Small dense primal-dual interior-point method for
//!
//! ```text
//! min ⟨C, X⟩  s.t. ⟨A_k, X⟩ = b_k, X ⪰ 0
//! max b·y     s.t. S = C − Σ y_k A_k ⪰ 0
//! ```
//!
//! HKM search direction with a Mehrotra predictor-corrector step.

use crate::linalg::{cholesky, eig_herm, inverse_hpd, lower_solve, solve_spd, CMat, HermitianMatrix};

const STEP_FRACTION: f64 = 0.95;

pub(crate) struct SdpProblem {
    pub c: CMat,
    pub a: Vec<CMat>,
    pub b: Vec<f64>,
}

#[derive(Clone, Debug)]
pub(crate) struct SdpState {
    pub x: CMat,
    pub y: Vec<f64>,
    pub s: CMat,
    pub primal: f64,
    pub dual: f64,
    pub mu: f64,
    pub primal_residual: f64,
    pub dual_residual: f64,
}

impl SdpState {
    pub fn gap(&self) -> f64 {
        self.primal - self.dual
    }
}

impl SdpProblem {
    fn dim(&self) -> usize {
        self.c.rows()
    }

    fn op(&self, x: &CMat) -> Vec<f64> {
        self.a.iter().map(|a| a.trace_product_re(x)).collect()
    }

    fn adjoint(&self, y: &[f64]) -> CMat {
        let mut out = CMat::zeros(self.dim(), self.dim());
        for (a, &yk) in self.a.iter().zip(y) {
            if yk != 0.0 {
                out.add_scaled(yk, a);
            }
        }
        out
    }

    fn state(&self, x: CMat, y: Vec<f64>, s: CMat) -> SdpState {
        let w = self.dim() as f64;
        let rp: f64 = self.b.iter().zip(self.op(&x)).map(|(b, ax)| (b - ax).powi(2)).sum::<f64>().sqrt();
        let mut rd = self.c.clone();
        rd.add_scaled(-1.0, &self.adjoint(&y));
        rd.add_scaled(-1.0, &s);
        SdpState {
            primal: self.c.trace_product_re(&x),
            dual: self.b.iter().zip(&y).map(|(b, y)| b * y).sum(),
            mu: x.trace_product_re(&s) / w,
            primal_residual: rp,
            dual_residual: rd.frobenius_norm(),
            x,
            y,
            s,
        }
    }

    /// Runs from a strictly positive definite `(x, s)` until `done` holds,
    /// progress stalls, or `max_iter` steps have been taken.
    pub fn solve(
        &self,
        x0: CMat,
        y0: Vec<f64>,
        max_iter: usize,
        done: impl Fn(&SdpState) -> bool,
    ) -> SdpState {
        let mut s0 = self.c.clone();
        s0.add_scaled(-1.0, &self.adjoint(&y0));
        let mut st = self.state(x0, y0, s0.hermitian_part());
        for _ in 0..max_iter {
            if done(&st) {
                break;
            }
            let Some(next) = self.step(&st) else { break };
            if !(next.mu.is_finite()) || next.mu <= 0.0 {
                break;
            }
            st = next;
        }
        st
    }

    fn step(&self, st: &SdpState) -> Option<SdpState> {
        let m = self.a.len();
        let (x, s) = (&st.x, &st.s);
        let sinv = inverse_hpd(s)?;
        let rp: Vec<f64> = self.b.iter().zip(self.op(x)).map(|(b, ax)| b - ax).collect();
        let mut rd = self.c.clone();
        rd.add_scaled(-1.0, &self.adjoint(&st.y));
        rd.add_scaled(-1.0, s);
        let rd = rd.hermitian_part();

        let xa_sinv: Vec<CMat> = self.a.iter().map(|a| x.matmul(&a.matmul(&sinv))).collect();
        let mut schur = vec![vec![0.0; m]; m];
        for k in 0..m {
            for l in k..m {
                let v = self.a[k].trace_product_re(&xa_sinv[l]);
                schur[k][l] = v;
                schur[l][k] = v;
            }
        }
        let x_rd_sinv = x.matmul(&rd.matmul(&sinv));
        let direction = |sigma_mu: f64, corr: Option<&CMat>| -> Option<(CMat, Vec<f64>, CMat)> {
            let mut g = sinv.scale(sigma_mu);
            g.add_scaled(-1.0, x);
            g.add_scaled(-1.0, &x_rd_sinv);
            if let Some(c) = corr {
                g.add_scaled(-1.0, c);
            }
            let ag: Vec<f64> = self.a.iter().map(|a| a.trace_product_re(&g)).collect();
            let rhs: Vec<f64> = rp.iter().zip(&ag).map(|(r, a)| r - a).collect();
            let dy = solve_spd(&schur, &rhs)?;
            let ady = self.adjoint(&dy);
            let mut ds = rd.clone();
            ds.add_scaled(-1.0, &ady);
            let mut dx = g;
            dx.add_scaled(1.0, &x.matmul(&ady.matmul(&sinv)));
            Some((dx.hermitian_part(), dy, ds.hermitian_part()))
        };

        let (dxa, _, dsa) = direction(0.0, None)?;
        let ap = max_step(x, &dxa).min(1.0);
        let ad = max_step(s, &dsa).min(1.0);
        let w = self.dim() as f64;
        let mut xa = x.clone();
        xa.add_scaled(ap, &dxa);
        let mut sa = s.clone();
        sa.add_scaled(ad, &dsa);
        let mu_aff = xa.trace_product_re(&sa) / w;
        let sigma = (mu_aff / st.mu).clamp(0.0, 1.0).powi(3);
        let corr = dxa.matmul(&dsa.matmul(&sinv));
        let (dx, dy, ds) = direction(sigma * st.mu, Some(&corr))?;
        let ap = (STEP_FRACTION * max_step(x, &dx)).min(1.0);
        let ad = (STEP_FRACTION * max_step(s, &ds)).min(1.0);
        let mut xn = x.clone();
        xn.add_scaled(ap, &dx);
        let mut sn = s.clone();
        sn.add_scaled(ad, &ds);
        let yn: Vec<f64> = st.y.iter().zip(&dy).map(|(y, d)| y + ad * d).collect();
        Some(self.state(xn.hermitian_part(), yn, sn.hermitian_part()))
    }
}

/// Largest `α` with `m + α d ⪰ 0` for positive definite `m`; infinite if none bounds it.
fn max_step(m: &CMat, d: &CMat) -> f64 {
    let Some(l) = cholesky(m) else { return 0.0 };
    let li_d = lower_solve(&l, d);
    let z = lower_solve(&l, &li_d.adjoint());
    let Ok(e) = eig_herm(&HermitianMatrix::from_cmat(&z), 1e-12) else { return 0.0 };
    let lmin = e.min_eigenvalue();
    if lmin >= 0.0 {
        f64::INFINITY
    } else {
        -1.0 / lmin
    }
}
