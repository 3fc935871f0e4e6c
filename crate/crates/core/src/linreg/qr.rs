//! Householder QR for tall, thin least-squares problems.

/// Columns whose component orthogonal to the preceding columns is below this
/// fraction of their norm count as linearly dependent.
pub(crate) const RANK_TOL: f64 = 1e-10;

/// Compact Householder factorisation `X = Q R` of an `m × k` matrix.
#[derive(Debug, Clone)]
pub(crate) struct HouseholderQr {
    m: usize,
    k: usize,
    /// Column-major working copy; the strict upper triangle holds R.
    a: Vec<f64>,
    /// Diagonal of R.
    diag: Vec<f64>,
    /// Householder vectors, `v_j` acting on rows `j..m`.
    vs: Vec<Vec<f64>>,
    taus: Vec<f64>,
    col_norms: Vec<f64>,
}

impl HouseholderQr {
    /// Factorise from column-major data.
    pub(crate) fn new(m: usize, k: usize, mut a: Vec<f64>) -> Self {
        debug_assert_eq!(a.len(), m * k);
        debug_assert!(m >= k);
        let col_norms: Vec<f64> = (0..k)
            .map(|j| {
                a[j * m..(j + 1) * m]
                    .iter()
                    .map(|x| x * x)
                    .sum::<f64>()
                    .sqrt()
            })
            .collect();
        let mut diag = vec![0.0; k];
        let mut vs = Vec::with_capacity(k);
        let mut taus = Vec::with_capacity(k);

        for j in 0..k {
            let col = &a[j * m + j..(j + 1) * m];
            let norm = col.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm == 0.0 {
                diag[j] = 0.0;
                vs.push(vec![0.0; m - j]);
                taus.push(0.0);
                continue;
            }
            let alpha = if col[0] > 0.0 { -norm } else { norm };
            let mut v = col.to_vec();
            v[0] -= alpha;
            let vtv: f64 = v.iter().map(|x| x * x).sum();
            let tau = if vtv > 0.0 { 2.0 / vtv } else { 0.0 };
            diag[j] = alpha;

            for c in j + 1..k {
                let target = &mut a[c * m + j..(c + 1) * m];
                let s = tau * v.iter().zip(target.iter()).map(|(x, y)| x * y).sum::<f64>();
                for (t, x) in target.iter_mut().zip(&v) {
                    *t -= s * x;
                }
            }
            vs.push(v);
            taus.push(tau);
        }

        Self {
            m,
            k,
            a,
            diag,
            vs,
            taus,
            col_norms,
        }
    }

    /// Entry `(i, j)` of R for `i <= j`.
    pub(crate) fn r(&self, i: usize, j: usize) -> f64 {
        if i == j {
            self.diag[j]
        } else {
            self.a[j * self.m + i]
        }
    }

    /// Whether column `j` is numerically independent of columns `0..j`.
    pub(crate) fn column_independent(&self, j: usize) -> bool {
        self.col_norms[j] > 0.0 && self.diag[j].abs() > RANK_TOL * self.col_norms[j]
    }

    pub(crate) fn rank(&self) -> usize {
        (0..self.k).filter(|&j| self.column_independent(j)).count()
    }

    /// `Qᵀ y` (length m).
    pub(crate) fn qt_mul(&self, y: &[f64]) -> Vec<f64> {
        debug_assert_eq!(y.len(), self.m);
        let mut out = y.to_vec();
        for (j, (v, &tau)) in self.vs.iter().zip(&self.taus).enumerate() {
            let seg = &mut out[j..];
            let s = tau * v.iter().zip(seg.iter()).map(|(x, y)| x * y).sum::<f64>();
            for (t, x) in seg.iter_mut().zip(v) {
                *t -= s * x;
            }
        }
        out
    }

    /// Solve `R[..p, ..p] x = rhs[..p]` by back substitution.
    #[allow(clippy::needless_range_loop)]
    pub(crate) fn solve_upper(&self, rhs: &[f64], p: usize) -> Vec<f64> {
        let mut x = vec![0.0; p];
        for i in (0..p).rev() {
            let mut acc = rhs[i];
            for j in i + 1..p {
                acc -= self.r(i, j) * x[j];
            }
            x[i] = acc / self.r(i, i);
        }
        x
    }

    /// Diagonal of `(R[..p,..p]ᵀ R[..p,..p])⁻¹`, i.e. of `(XᵀX)⁻¹` restricted
    /// to the leading `p` columns.
    #[allow(clippy::needless_range_loop)]
    pub(crate) fn inverse_gram_diag(&self, p: usize) -> Vec<f64> {
        // Rows of R⁻¹ via back substitution on unit vectors.
        let mut rinv = vec![vec![0.0; p]; p];
        for col in 0..p {
            for i in (0..=col).rev() {
                let mut acc = if i == col { 1.0 } else { 0.0 };
                for j in i + 1..=col {
                    acc -= self.r(i, j) * rinv[j][col];
                }
                rinv[i][col] = acc / self.r(i, i);
            }
        }
        rinv.iter()
            .map(|row| row.iter().map(|x| x * x).sum())
            .collect()
    }
}
