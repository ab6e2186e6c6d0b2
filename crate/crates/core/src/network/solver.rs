use serde::{Deserialize, Serialize};

use super::Laplacian;
use crate::error::{CarpetError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum SolverKind {
    /// Sparse Cholesky when compiled in, PCG otherwise.
    #[default]
    Auto,
    Direct,
    Pcg,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    pub kind: SolverKind,
    /// Relative residual target.
    pub tol: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { kind: SolverKind::Auto, tol: 1e-10 }
    }
}

impl SolverOptions {
    pub fn pcg() -> Self {
        SolverOptions { kind: SolverKind::Pcg, ..Default::default() }
    }
}

/// `(L + diag(shift))` restricted to the free vertices, factored or ready for
/// PCG. Build once, solve for many right-hand sides.
pub struct GroundedSystem {
    free: Vec<usize>,
    local: Vec<usize>,
    rows: Vec<Vec<(usize, f64)>>,
    tol: f64,
    backend: Backend,
}

enum Backend {
    #[cfg(feature = "direct")]
    Direct(faer::sparse::linalg::solvers::Llt<usize, f64>),
    Pcg { inv_diag: Vec<f64> },
}

const NOT_FREE: usize = usize::MAX;

impl GroundedSystem {
    /// `fixed[x]` marks vertices removed from the system. With no shift and
    /// nothing fixed the matrix is singular, which is reported as an error.
    pub fn new(lap: &Laplacian, shift: Option<&[f64]>, fixed: &[bool], opts: SolverOptions) -> Result<Self> {
        let n = lap.n();
        let free: Vec<usize> = (0..n).filter(|&i| !fixed[i]).collect();
        let mut local = vec![NOT_FREE; n];
        for (li, &g) in free.iter().enumerate() {
            local[g] = li;
        }
        let rows: Vec<Vec<(usize, f64)>> = free
            .iter()
            .map(|&g| {
                lap.row(g)
                    .filter(|&(j, _)| local[j] != NOT_FREE)
                    .map(|(j, v)| (local[j], if j == g { v + shift.map_or(0.0, |s| s[g]) } else { v }))
                    .collect()
            })
            .collect();
        let use_direct = match opts.kind {
            SolverKind::Pcg => false,
            SolverKind::Direct => {
                if !cfg!(feature = "direct") {
                    return Err(CarpetError::Numerical("built without the direct solver".into()));
                }
                true
            }
            SolverKind::Auto => cfg!(feature = "direct"),
        };
        let backend = if use_direct { Self::factor(&rows)? } else { Self::jacobi(&rows)? };
        Ok(GroundedSystem { free, local, rows, tol: opts.tol, backend })
    }

    fn jacobi(rows: &[Vec<(usize, f64)>]) -> Result<Backend> {
        let inv_diag = rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let d = r.iter().find(|e| e.0 == i).map_or(0.0, |e| e.1);
                if d > 0.0 {
                    Ok(1.0 / d)
                } else {
                    Err(CarpetError::Numerical("zero diagonal in grounded system".into()))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Backend::Pcg { inv_diag })
    }

    #[cfg(feature = "direct")]
    fn factor(rows: &[Vec<(usize, f64)>]) -> Result<Backend> {
        use faer::sparse::{SparseColMat, Triplet};
        let n = rows.len();
        let triplets: Vec<Triplet<usize, usize, f64>> = rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().map(move |&(j, v)| Triplet::new(i, j, v)))
            .collect();
        let m = SparseColMat::<usize, f64>::try_new_from_triplets(n, n, &triplets)
            .map_err(|e| CarpetError::Numerical(format!("{e:?}")))?;
        let llt = m
            .sp_cholesky(faer::Side::Lower)
            .map_err(|e| CarpetError::Numerical(format!("Cholesky failed: {e:?}")))?;
        Ok(Backend::Direct(llt))
    }

    #[cfg(not(feature = "direct"))]
    fn factor(_rows: &[Vec<(usize, f64)>]) -> Result<Backend> {
        Err(CarpetError::Numerical("built without the direct solver".into()))
    }

    /// Free vertices in local order.
    pub fn free(&self) -> &[usize] {
        &self.free
    }

    pub fn local_index(&self, vertex: usize) -> Option<usize> {
        match self.local[vertex] {
            NOT_FREE => None,
            i => Some(i),
        }
    }

    pub fn is_direct(&self) -> bool {
        !matches!(self.backend, Backend::Pcg { .. })
    }

    fn mul(&self, x: &[f64]) -> Vec<f64> {
        self.rows.iter().map(|r| r.iter().map(|&(j, v)| v * x[j]).sum()).collect()
    }

    fn residual(&self, b: &[f64], x: &[f64]) -> (Vec<f64>, f64) {
        let ax = self.mul(x);
        let r: Vec<f64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
        let nr = norm(&r);
        (r, nr)
    }

    /// Solves the free system for a right-hand side in local order.
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        let nb = norm(b);
        if nb == 0.0 {
            return Ok(vec![0.0; b.len()]);
        }
        match &self.backend {
            #[cfg(feature = "direct")]
            Backend::Direct(llt) => {
                let mut x = direct_solve(llt, b);
                // Iterative refinement guards against a poorly conditioned factor.
                for _ in 0..3 {
                    let (r, nr) = self.residual(b, &x);
                    if nr <= self.tol * nb {
                        return Ok(x);
                    }
                    let dx = direct_solve(llt, &r);
                    for (xi, di) in x.iter_mut().zip(&dx) {
                        *xi += di;
                    }
                }
                let (_, nr) = self.residual(b, &x);
                if nr <= self.tol * nb * 10.0 {
                    Ok(x)
                } else {
                    Err(CarpetError::NoConvergence { iterations: 3, residual: nr / nb })
                }
            }
            Backend::Pcg { inv_diag } => self.pcg(b, nb, inv_diag),
        }
    }

    fn pcg(&self, b: &[f64], nb: f64, inv_diag: &[f64]) -> Result<Vec<f64>> {
        let n = b.len();
        let cap = ((50.0 * (n as f64).sqrt()).ceil() as usize).max(50);
        let mut x = vec![0.0; n];
        let mut r = b.to_vec();
        let mut z: Vec<f64> = r.iter().zip(inv_diag).map(|(a, d)| a * d).collect();
        let mut p = z.clone();
        let mut rz = dot(&r, &z);
        for it in 0..cap {
            let ap = self.mul(&p);
            let alpha = rz / dot(&p, &ap);
            for i in 0..n {
                x[i] += alpha * p[i];
                r[i] -= alpha * ap[i];
            }
            if norm(&r) <= self.tol * nb {
                // Confirm with a true residual; recurrence drift is possible.
                let (_, nr) = self.residual(b, &x);
                if nr <= self.tol * nb * 10.0 {
                    return Ok(x);
                }
            }
            for i in 0..n {
                z[i] = r[i] * inv_diag[i];
            }
            let rz_new = dot(&r, &z);
            let beta = rz_new / rz;
            rz = rz_new;
            for i in 0..n {
                p[i] = z[i] + beta * p[i];
            }
            if it + 1 == cap {
                break;
            }
        }
        let (_, nr) = self.residual(b, &x);
        Err(CarpetError::NoConvergence { iterations: cap, residual: nr / nb })
    }
}

#[cfg(feature = "direct")]
fn direct_solve(llt: &faer::sparse::linalg::solvers::Llt<usize, f64>, b: &[f64]) -> Vec<f64> {
    use faer::linalg::solvers::Solve;
    let rhs = faer::Mat::<f64>::from_fn(b.len(), 1, |i, _| b[i]);
    let x = llt.solve(&rhs);
    (0..b.len()).map(|i| x[(i, 0)]).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}
