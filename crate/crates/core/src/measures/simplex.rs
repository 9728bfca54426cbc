//! Derivative-free Nelder-Mead minimization on small fixed-size parameter vectors.

use crate::error::{Error, Result};

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

#[derive(Debug, Clone, Copy)]
pub struct NelderMead {
    pub max_iters: usize,
    /// Converged once `max f - min f` over the simplex drops below this.
    pub spread_tol: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct SimplexOutcome<const N: usize> {
    pub x: [f64; N],
    pub value: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
}

impl NelderMead {
    /// Minimizes `f` from an axis-aligned initial simplex `x0 + steps[i] e_i`.
    pub fn minimize<const N: usize, F>(
        &self,
        mut f: F,
        x0: [f64; N],
        steps: [f64; N],
    ) -> Result<SimplexOutcome<N>>
    where
        F: FnMut(&[f64; N]) -> Result<f64>,
    {
        let mut evaluations = 0usize;
        let mut eval = |x: &[f64; N]| -> Result<f64> {
            evaluations += 1;
            let v = f(x)?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::numeric(format!("objective is not finite at {x:?}"), None))
            }
        };

        let mut simplex: Vec<([f64; N], f64)> = Vec::with_capacity(N + 1);
        simplex.push((x0, eval(&x0)?));
        for i in 0..N {
            let mut x = x0;
            x[i] += steps[i];
            let v = eval(&x)?;
            simplex.push((x, v));
        }

        let mut iterations = 0;
        let mut converged = false;
        loop {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            if simplex[N].1 - simplex[0].1 < self.spread_tol {
                converged = true;
                break;
            }
            if iterations == self.max_iters {
                break;
            }
            iterations += 1;

            let mut centroid = [0.0; N];
            for (x, _) in &simplex[..N] {
                for d in 0..N {
                    centroid[d] += x[d] / N as f64;
                }
            }
            let worst = simplex[N];
            let along = |t: f64, from: &[f64; N]| -> [f64; N] {
                let mut y = [0.0; N];
                for d in 0..N {
                    y[d] = centroid[d] + t * (from[d] - centroid[d]);
                }
                y
            };

            let reflected = along(-REFLECT, &worst.0);
            let f_reflected = eval(&reflected)?;

            if f_reflected < simplex[0].1 {
                let expanded = along(-REFLECT * EXPAND, &worst.0);
                let f_expanded = eval(&expanded)?;
                simplex[N] = if f_expanded < f_reflected {
                    (expanded, f_expanded)
                } else {
                    (reflected, f_reflected)
                };
                continue;
            }
            if f_reflected < simplex[N - 1].1 {
                simplex[N] = (reflected, f_reflected);
                continue;
            }

            let (contracted, accept) = if f_reflected < worst.1 {
                let c = along(-REFLECT * CONTRACT, &worst.0);
                let fc = eval(&c)?;
                ((c, fc), fc <= f_reflected)
            } else {
                let c = along(CONTRACT, &worst.0);
                let fc = eval(&c)?;
                ((c, fc), fc < worst.1)
            };
            if accept {
                simplex[N] = contracted;
                continue;
            }

            let best = simplex[0].0;
            for vertex in simplex.iter_mut().skip(1) {
                let mut x = [0.0; N];
                for d in 0..N {
                    x[d] = best[d] + SHRINK * (vertex.0[d] - best[d]);
                }
                *vertex = (x, eval(&x)?);
            }
        }

        let (x, value) = simplex[0];
        Ok(SimplexOutcome {
            x,
            value,
            iterations,
            evaluations,
            converged,
        })
    }
}
