//! Sparse direct solves and Dirichlet elimination.

use std::collections::BTreeMap;
use std::sync::Once;

use faer::prelude::*;
use faer::sparse::{SparseColMat, Triplet};

use crate::error::{FsiError, Result};
use crate::fem::sparse::{norm2, CsrMatrix};

/// Relative residual accepted from a direct solve.
pub const SOLVE_TOLERANCE: f64 = 1e-10;

static SEQUENTIAL: Once = Once::new();

/// Sparse LU factorization with partial pivoting (faer backend).
pub struct SparseLu {
    matrix: CsrMatrix,
    lu: faer::sparse::linalg::solvers::Lu<usize, f64>,
}

impl std::fmt::Debug for SparseLu {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SparseLu")
            .field("n", &self.matrix.n_rows())
            .field("nnz", &self.matrix.nnz())
            .finish()
    }
}

impl SparseLu {
    pub fn factorize(a: &CsrMatrix) -> Result<Self> {
        // Single-threaded kernels keep results bitwise reproducible.
        SEQUENTIAL.call_once(|| faer::set_global_parallelism(Par::Seq));
        if a.n_rows() != a.n_cols() {
            return Err(FsiError::DimensionMismatch {
                expected: a.n_rows(),
                actual: a.n_cols(),
            });
        }
        let n = a.n_rows();
        let triplets: Vec<Triplet<usize, usize, f64>> =
            a.triplets().map(|(r, c, v)| Triplet::new(r, c, v)).collect();
        let mat = SparseColMat::<usize, f64>::try_new_from_triplets(n, n, &triplets)
            .map_err(|e| FsiError::SingularMatrix(format!("{e:?}")))?;
        let lu = mat
            .sp_lu()
            .map_err(|e| FsiError::SingularMatrix(format!("{e}")))?;
        Ok(SparseLu {
            matrix: a.clone(),
            lu,
        })
    }

    pub fn dim(&self) -> usize {
        self.matrix.n_rows()
    }

    /// Solves `A x = b`, refining once if the first residual is above
    /// tolerance. Non-finite output or a residual that stays above
    /// tolerance is reported as an error.
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        let n = self.dim();
        if b.len() != n {
            return Err(FsiError::DimensionMismatch {
                expected: n,
                actual: b.len(),
            });
        }
        let b_norm = norm2(b);
        if b_norm == 0.0 {
            return Ok(vec![0.0; n]);
        }
        let mut x = self.raw_solve(b);
        let mut res = self.residual(&x, b);
        let mut rel = norm2(&res) / b_norm;
        for _ in 0..2 {
            if !rel.is_finite() || rel <= SOLVE_TOLERANCE {
                break;
            }
            let dx = self.raw_solve(&res);
            x.iter_mut().zip(&dx).for_each(|(xi, di)| *xi += di);
            res = self.residual(&x, b);
            rel = norm2(&res) / b_norm;
        }
        if !rel.is_finite() || x.iter().any(|v| !v.is_finite()) {
            return Err(FsiError::SingularMatrix(
                "non-finite solution from factorization".into(),
            ));
        }
        if rel > SOLVE_TOLERANCE {
            return Err(FsiError::InaccurateSolve {
                residual: rel,
                tolerance: SOLVE_TOLERANCE,
            });
        }
        Ok(x)
    }

    fn raw_solve(&self, b: &[f64]) -> Vec<f64> {
        let rhs = Col::<f64>::from_fn(b.len(), |i| b[i]);
        let x = self.lu.solve(&rhs);
        (0..b.len()).map(|i| x[i]).collect()
    }

    fn residual(&self, x: &[f64], b: &[f64]) -> Vec<f64> {
        let mut r = b.to_vec();
        self.matrix.mul_vec_add(-1.0, x, &mut r);
        r
    }
}

/// One-shot factor-and-solve.
pub fn solve_linear(a: &CsrMatrix, b: &[f64]) -> Result<Vec<f64>> {
    SparseLu::factorize(a)?.solve(b)
}

/// Prescribed values for a set of DOFs.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Constraints {
    values: BTreeMap<usize, f64>,
}

impl Constraints {
    pub fn new() -> Self {
        Self::default()
    }

    /// Re-adding the same value is allowed; a different value is an error.
    pub fn fix(&mut self, dof: usize, value: f64) -> Result<()> {
        match self.values.get(&dof) {
            Some(&old) if old != value => Err(FsiError::ConflictingConstraint {
                dof,
                first: old,
                second: value,
            }),
            _ => {
                self.values.insert(dof, value);
                Ok(())
            }
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn contains(&self, dof: usize) -> bool {
        self.values.contains_key(&dof)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.values.iter().map(|(&d, &v)| (d, v))
    }
}

/// A square system with constrained rows and columns removed symmetrically.
/// The constrained columns are moved to the right-hand side.
#[derive(Debug)]
pub struct ReducedSystem {
    n: usize,
    free: Vec<usize>,
    prescribed: Vec<(usize, f64)>,
    reduced: CsrMatrix,
    /// `A_fc x_c`, subtracted from every reduced right-hand side.
    lift: Vec<f64>,
}

impl ReducedSystem {
    pub fn new(a: &CsrMatrix, constraints: &Constraints) -> Result<Self> {
        let n = a.n_rows();
        if a.n_cols() != n {
            return Err(FsiError::DimensionMismatch {
                expected: n,
                actual: a.n_cols(),
            });
        }
        let mut map: Vec<Option<usize>> = vec![None; n];
        let mut free = Vec::with_capacity(n);
        let mut xc = vec![0.0; n];
        let mut prescribed = Vec::with_capacity(constraints.len());
        for (dof, v) in constraints.iter() {
            if dof >= n {
                return Err(FsiError::DofOutOfRange { index: dof, n_dofs: n });
            }
            xc[dof] = v;
            prescribed.push((dof, v));
        }
        for (dof, slot) in map.iter_mut().enumerate() {
            if !constraints.contains(dof) {
                *slot = Some(free.len());
                free.push(dof);
            }
        }
        let reduced = a.select(&free, &map, free.len());
        let full_lift = a.mul_vec(&xc);
        let lift = free.iter().map(|&d| full_lift[d]).collect();
        Ok(ReducedSystem {
            n,
            free,
            prescribed,
            reduced,
            lift,
        })
    }

    pub fn matrix(&self) -> &CsrMatrix {
        &self.reduced
    }

    pub fn reduce_rhs(&self, b: &[f64]) -> Vec<f64> {
        self.free
            .iter()
            .zip(&self.lift)
            .map(|(&d, l)| b[d] - l)
            .collect()
    }

    pub fn expand(&self, x_free: &[f64]) -> Vec<f64> {
        let mut x = vec![0.0; self.n];
        for (&d, &v) in self.free.iter().zip(x_free) {
            x[d] = v;
        }
        for &(d, v) in &self.prescribed {
            x[d] = v;
        }
        x
    }
}

/// Reduced system plus its factorization, reused across time steps.
#[derive(Debug)]
pub struct DirichletSolver {
    system: ReducedSystem,
    lu: SparseLu,
}

impl DirichletSolver {
    pub fn new(a: &CsrMatrix, constraints: &Constraints) -> Result<Self> {
        let system = ReducedSystem::new(a, constraints)?;
        let lu = SparseLu::factorize(system.matrix())?;
        Ok(DirichletSolver { system, lu })
    }

    pub fn dim(&self) -> usize {
        self.system.n
    }

    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        if b.len() != self.system.n {
            return Err(FsiError::DimensionMismatch {
                expected: self.system.n,
                actual: b.len(),
            });
        }
        if self.system.free.is_empty() {
            return Ok(self.system.expand(&[]));
        }
        let rhs = self.system.reduce_rhs(b);
        let xf = self.lu.solve(&rhs)?;
        Ok(self.system.expand(&xf))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_returns_rhs() {
        let b = vec![1.0, -2.0, 3.5];
        assert_eq!(solve_linear(&CsrMatrix::identity(3), &b).unwrap(), b);
    }

    #[test]
    fn diagonal_two_by_two() {
        let a = CsrMatrix::from_triplets(2, 2, &[(0, 0, 2.0), (1, 1, 4.0)]).unwrap();
        let x = solve_linear(&a, &[2.0, 4.0]).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-15 && (x[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn random_spd_residual() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 50;
        let mut t = Vec::new();
        // B^T B + n I with a sparse random B.
        let mut b = vec![vec![0.0; n]; n];
        for row in b.iter_mut() {
            for _ in 0..4 {
                row[rng.gen_range(0..n)] = rng.gen_range(-1.0..1.0);
            }
        }
        for i in 0..n {
            for j in 0..n {
                let v: f64 = (0..n).map(|k| b[k][i] * b[k][j]).sum::<f64>()
                    + if i == j { n as f64 } else { 0.0 };
                if v != 0.0 {
                    t.push((i, j, v));
                }
            }
        }
        let a = CsrMatrix::from_triplets(n, n, &t).unwrap();
        let rhs: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let x = solve_linear(&a, &rhs).unwrap();
        let mut r = rhs.clone();
        a.mul_vec_add(-1.0, &x, &mut r);
        assert!(norm2(&r) <= 1e-10 * norm2(&rhs));
    }

    #[test]
    fn singular_matrix_reported() {
        let a = CsrMatrix::from_triplets(2, 2, &[(0, 0, 1.0), (0, 1, 1.0), (1, 0, 1.0), (1, 1, 1.0)])
            .unwrap();
        assert!(solve_linear(&a, &[1.0, 2.0]).is_err());
        let empty_row = CsrMatrix::from_triplets(2, 2, &[(0, 0, 1.0)]).unwrap();
        assert!(solve_linear(&empty_row, &[1.0, 1.0]).is_err());
    }

    #[test]
    fn deterministic_solves() {
        let a = CsrMatrix::from_triplets(
            3,
            3,
            &[(0, 0, 4.0), (0, 1, 1.0), (1, 0, 1.0), (1, 1, 3.0), (2, 2, 2.0), (1, 2, 0.5)],
        )
        .unwrap();
        let b = [0.1, 0.7, -0.3];
        let x1 = solve_linear(&a, &b).unwrap();
        let x2 = solve_linear(&a, &b).unwrap();
        assert_eq!(
            x1.iter().map(|v| v.to_bits()).collect::<Vec<_>>(),
            x2.iter().map(|v| v.to_bits()).collect::<Vec<_>>()
        );
    }

    #[test]
    fn constrain_everything() {
        let a = CsrMatrix::from_triplets(2, 2, &[(0, 0, 2.0), (1, 1, 3.0), (0, 1, 1.0)]).unwrap();
        let mut c = Constraints::new();
        c.fix(0, 0.0).unwrap();
        c.fix(1, 0.0).unwrap();
        let s = DirichletSolver::new(&a, &c).unwrap();
        assert_eq!(s.solve(&[5.0, 6.0]).unwrap(), vec![0.0, 0.0]);
    }

    #[test]
    fn constrain_one_of_two() {
        // [[2, 1], [1, 3]] with x1 = 2: 2 x0 = 4 - 2 -> x0 = 1.
        let a = CsrMatrix::from_triplets(2, 2, &[(0, 0, 2.0), (0, 1, 1.0), (1, 0, 1.0), (1, 1, 3.0)])
            .unwrap();
        let mut c = Constraints::new();
        c.fix(1, 2.0).unwrap();
        let s = DirichletSolver::new(&a, &c).unwrap();
        let x = s.solve(&[4.0, 100.0]).unwrap();
        assert_eq!(x[1], 2.0);
        assert!((x[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn elimination_keeps_symmetry() {
        let a = CsrMatrix::from_triplets(
            3,
            3,
            &[
                (0, 0, 4.0),
                (0, 1, 1.0),
                (1, 0, 1.0),
                (1, 1, 3.0),
                (1, 2, 0.5),
                (2, 1, 0.5),
                (2, 2, 2.0),
            ],
        )
        .unwrap();
        let mut c = Constraints::new();
        c.fix(1, 1.0).unwrap();
        let r = ReducedSystem::new(&a, &c).unwrap();
        assert_eq!(r.matrix().n_rows(), 2);
        assert_eq!(r.matrix().asymmetry(), 0.0);
    }

    #[test]
    fn conflicting_values_rejected() {
        let mut c = Constraints::new();
        c.fix(3, 0.0).unwrap();
        c.fix(3, 0.0).unwrap();
        assert!(matches!(
            c.fix(3, 1.0),
            Err(FsiError::ConflictingConstraint { dof: 3, .. })
        ));
    }
}
