//! Small exact linear algebra over ℚ and ℤ.
//!
//! Everything here works on tiny dense matrices (a handful of rows and
//! columns), so clarity wins over asymptotics. Integer routines use
//! arbitrary-precision integers throughout.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn to_i64(x: &BigInt) -> Option<i64> {
    x.to_i64()
}

/// Returns the integer value of `x` if it is integral.
pub fn as_integer(x: &Q) -> Option<BigInt> {
    x.is_integer().then(|| x.to_integer())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveError {
    Inconsistent,
    Underdetermined,
}

/// Solves `a · x = b` exactly. `a` is row-major (`rows × cols`). The system
/// may be overdetermined; it must have exactly one solution.
pub fn solve_unique(a: &[Vec<Q>], b: &[Q]) -> Result<Vec<Q>, SolveError> {
    let rows = a.len();
    assert_eq!(rows, b.len());
    let cols = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<Q>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();

    let mut pivot_row = 0;
    let mut pivots = Vec::new();
    for col in 0..cols {
        let Some(p) = (pivot_row..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(pivot_row, p);
        let inv = m[pivot_row][col].recip();
        for c in col..=cols {
            m[pivot_row][c] = &m[pivot_row][c] * &inv;
        }
        for r in 0..rows {
            if r != pivot_row && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in col..=cols {
                    let delta = &factor * &m[pivot_row][c];
                    m[r][c] -= delta;
                }
            }
        }
        pivots.push(col);
        pivot_row += 1;
    }
    if m[pivot_row..].iter().any(|r| !r[cols].is_zero()) {
        return Err(SolveError::Inconsistent);
    }
    if pivots.len() < cols {
        return Err(SolveError::Underdetermined);
    }
    Ok((0..cols).map(|i| m[i][cols].clone()).collect())
}

/// Inverse of a square rational matrix, `None` if singular.
pub fn inverse(a: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = a.len();
    let mut cols = vec![vec![Q::zero(); n]; n];
    for j in 0..n {
        let e: Vec<Q> = (0..n).map(|i| if i == j { Q::one() } else { Q::zero() }).collect();
        let x = solve_unique(a, &e).ok()?;
        for i in 0..n {
            cols[i][j] = x[i].clone();
        }
    }
    Some(cols)
}

pub type IntMatrix = Vec<Vec<BigInt>>;

pub fn int_matrix(rows: &[Vec<i64>]) -> IntMatrix {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

/// Bilinear form `xᵀ · g · y`.
pub fn bilinear(g: &IntMatrix, x: &[BigInt], y: &[BigInt]) -> BigInt {
    let mut acc = BigInt::zero();
    for (i, xi) in x.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        for (j, yj) in y.iter().enumerate() {
            acc += xi * &g[i][j] * yj;
        }
    }
    acc
}

pub fn mat_vec(m: &IntMatrix, v: &[BigInt]) -> Vec<BigInt> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

/// Sylvester's criterion on a symmetric integer matrix.
pub fn is_positive_definite(g: &IntMatrix) -> bool {
    let n = g.len();
    (1..=n).all(|k| {
        let minor: Vec<Vec<Q>> = (0..k)
            .map(|i| (0..k).map(|j| Q::from_integer(g[i][j].clone())).collect())
            .collect();
        determinant(&minor).is_positive()
    })
}

pub fn determinant(a: &[Vec<Q>]) -> Q {
    let n = a.len();
    let mut m = a.to_vec();
    let mut det = Q::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Q::zero();
        };
        if p != col {
            m.swap(p, col);
            det = -det;
        }
        det *= m[col][col].clone();
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] / &m[col][col];
            for c in col..n {
                let delta = &factor * &m[col][c];
                m[r][c] -= delta;
            }
        }
    }
    det
}

/// Column-style Hermite normal form of an integer matrix together with the
/// unimodular transform: `matrix · transform = hnf`.
///
/// The first `rank` columns of `hnf` are an echelon basis of the column
/// lattice (positive pivots, entries left of a pivot reduced modulo it);
/// the remaining columns are zero, so the trailing columns of `transform`
/// form a saturated basis of the integer kernel.
#[derive(Debug, Clone)]
pub struct ColumnHermite {
    pub matrix: IntMatrix,
    pub hnf: IntMatrix,
    pub transform: IntMatrix,
    pub rank: usize,
    /// Row index of each pivot, one per image basis column.
    pub pivot_rows: Vec<usize>,
}

impl ColumnHermite {
    pub fn new(matrix: IntMatrix, cols: usize) -> Self {
        let rows = matrix.len();
        let mut h = matrix.clone();
        let mut u: IntMatrix = (0..cols)
            .map(|i| (0..cols).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect();
        let mut k = 0;
        let mut pivot_rows = Vec::new();
        for i in 0..rows {
            if k == cols {
                break;
            }
            for j in k + 1..cols {
                if h[i][j].is_zero() {
                    continue;
                }
                let x = h[i][k].clone();
                let y = h[i][j].clone();
                let e = x.extended_gcd(&y);
                let (g, s, t) = (e.gcd, e.x, e.y);
                let yg = &y / &g;
                let xg = &x / &g;
                combine_columns(&mut h, k, j, &s, &t, &yg, &xg);
                combine_columns(&mut u, k, j, &s, &t, &yg, &xg);
            }
            if h[i][k].is_zero() {
                continue;
            }
            if h[i][k].is_negative() {
                negate_column(&mut h, k);
                negate_column(&mut u, k);
            }
            for j in 0..k {
                let f = h[i][j].div_floor(&h[i][k]);
                if !f.is_zero() {
                    sub_column_multiple(&mut h, j, k, &f);
                    sub_column_multiple(&mut u, j, k, &f);
                }
            }
            pivot_rows.push(i);
            k += 1;
        }
        ColumnHermite { matrix, hnf: h, transform: u, rank: k, pivot_rows }
    }

    pub fn cols(&self) -> usize {
        self.transform.len()
    }

    /// Echelon basis of the image, as column vectors.
    pub fn image_basis(&self) -> Vec<Vec<BigInt>> {
        (0..self.rank).map(|c| self.hnf.iter().map(|row| row[c].clone()).collect()).collect()
    }

    /// Saturated basis of the kernel, as column vectors.
    pub fn kernel_basis(&self) -> Vec<Vec<BigInt>> {
        (self.rank..self.cols())
            .map(|c| self.transform.iter().map(|row| row[c].clone()).collect())
            .collect()
    }

    /// An integral `x` with `matrix · x = target`, if one exists.
    pub fn preimage(&self, target: &[BigInt]) -> Option<Vec<BigInt>> {
        let rows = self.hnf.len();
        let mut y = vec![BigInt::zero(); self.cols()];
        for (c, &r) in self.pivot_rows.iter().enumerate() {
            let mut rest = target[r].clone();
            for (j, yj) in y.iter().enumerate().take(c) {
                rest -= &self.hnf[r][j] * yj;
            }
            let (quot, rem) = rest.div_rem(&self.hnf[r][c]);
            if !rem.is_zero() {
                return None;
            }
            y[c] = quot;
        }
        let reached: Vec<BigInt> = (0..rows)
            .map(|r| (0..self.rank).map(|c| &self.hnf[r][c] * &y[c]).sum())
            .collect();
        if reached.as_slice() != target {
            return None;
        }
        Some(mat_vec(&self.transform, &y))
    }
}

fn combine_columns(
    m: &mut IntMatrix,
    k: usize,
    j: usize,
    s: &BigInt,
    t: &BigInt,
    yg: &BigInt,
    xg: &BigInt,
) {
    for row in m.iter_mut() {
        let a = row[k].clone();
        let b = row[j].clone();
        row[k] = s * &a + t * &b;
        row[j] = xg * &b - yg * &a;
    }
}

fn negate_column(m: &mut IntMatrix, k: usize) {
    for row in m.iter_mut() {
        row[k] = -row[k].clone();
    }
}

fn sub_column_multiple(m: &mut IntMatrix, j: usize, k: usize, f: &BigInt) {
    for row in m.iter_mut() {
        let delta = f * &row[k];
        row[j] -= delta;
    }
}

/// LLL reduction (δ = 3/4) of `basis` with respect to the positive definite
/// form `gram`, exact over ℚ.
pub fn lll_reduce(mut basis: Vec<Vec<BigInt>>, gram: &IntMatrix) -> Vec<Vec<BigInt>> {
    let n = basis.len();
    if n < 2 {
        return basis;
    }
    let dot = |a: &[BigInt], b: &[BigInt]| Q::from_integer(bilinear(gram, a, b));
    let delta = q(3, 4);
    let half = q(1, 2);

    let gso = |basis: &[Vec<BigInt>]| {
        let n = basis.len();
        let mut mu = vec![vec![Q::zero(); n]; n];
        let mut norms = vec![Q::zero(); n];
        // Gram-Schmidt through the Gram matrix of the basis only.
        let g: Vec<Vec<Q>> = (0..n)
            .map(|i| (0..n).map(|j| dot(&basis[i], &basis[j])).collect())
            .collect();
        for i in 0..n {
            for j in 0..i {
                let mut v = g[i][j].clone();
                for k in 0..j {
                    v -= &mu[j][k] * &mu[i][k] * &norms[k];
                }
                mu[i][j] = v / &norms[j];
            }
            let mut v = g[i][i].clone();
            for k in 0..i {
                v -= &mu[i][k] * &mu[i][k] * &norms[k];
            }
            norms[i] = v;
        }
        (mu, norms)
    };

    let mut k = 1;
    while k < n {
        for j in (0..k).rev() {
            let (mu, _) = gso(&basis);
            if mu[k][j].abs() > half {
                let r = round_half_up(&mu[k][j]);
                let bj = basis[j].clone();
                for (x, y) in basis[k].iter_mut().zip(&bj) {
                    *x -= &r * y;
                }
            }
        }
        let (mu, norms) = gso(&basis);
        let lhs = &norms[k];
        let rhs = (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * &norms[k - 1];
        if *lhs >= rhs {
            k += 1;
        } else {
            basis.swap(k, k - 1);
            k = (k - 1).max(1);
        }
    }
    basis
}

/// Nearest integer, ties rounded up.
pub fn round_half_up(x: &Q) -> BigInt {
    (x + q(1, 2)).floor().to_integer()
}

/// ⌈√x⌉ for a non-negative rational.
pub fn ceil_sqrt(x: &Q) -> BigInt {
    let c = x.ceil().to_integer();
    if c.is_negative() || c.is_zero() {
        return BigInt::zero();
    }
    let r = c.sqrt();
    if &r * &r == c {
        r
    } else {
        r + 1
    }
}
