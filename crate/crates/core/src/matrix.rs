//! Dense matrices over a finite field.

use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{Felt, Field};

/// Products with at least this many scalar multiplications run on the rayon pool.
const PAR_THRESHOLD: usize = 1 << 18;

/// Row-major dense matrix with entries in a single field.
#[derive(Clone)]
pub struct Mat {
    rows: usize,
    cols: usize,
    field: Field,
    data: Vec<u32>,
}

impl PartialEq for Mat {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.field.id() == other.field.id()
            && self.data == other.data
    }
}
impl Eq for Mat {}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| self.field.format(self.get(i, j)))
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Mat {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Mat {
        Mat {
            rows,
            cols,
            field: field.clone(),
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: &Field, n: usize) -> Mat {
        let mut m = Mat::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn diag(field: &Field, entries: &[Felt]) -> Mat {
        let n = entries.len();
        let mut m = Mat::zeros(field, n, n);
        for (i, &e) in entries.iter().enumerate() {
            m.set(i, i, e);
        }
        m
    }

    pub fn from_fn(
        field: &Field,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Felt,
    ) -> Mat {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let e = f(i, j);
                field.check(e);
                data.push(e.raw());
            }
        }
        Mat {
            rows,
            cols,
            field: field.clone(),
            data,
        }
    }

    /// Builds from nested rows; all rows must have equal length.
    pub fn from_rows(field: &Field, rows: &[Vec<Felt>]) -> Result<Mat> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Mat::from_fn(field, rows.len(), cols, |i, j| rows[i][j]))
    }

    /// Single column from a vector.
    pub fn column_vector(field: &Field, v: &[Felt]) -> Mat {
        Mat::from_fn(field, v.len(), 1, |i, _| v[i])
    }

    /// Matrix whose columns are the given vectors (each of length `rows`).
    pub fn from_columns(field: &Field, rows: usize, cols: &[Vec<Felt>]) -> Result<Mat> {
        if cols.iter().any(|c| c.len() != rows) {
            return Err(Error::DimensionMismatch("column length".into()));
        }
        Ok(Mat::from_fn(field, rows, cols.len(), |i, j| cols[j][i]))
    }

    pub fn random<R: rand::Rng + ?Sized>(field: &Field, rows: usize, cols: usize, rng: &mut R) -> Mat {
        Mat::from_fn(field, rows, cols, |_, _| field.random(rng))
    }

    pub(crate) fn from_raw(field: &Field, rows: usize, cols: usize, data: Vec<u32>) -> Mat {
        debug_assert_eq!(data.len(), rows * cols);
        Mat {
            rows,
            cols,
            field: field.clone(),
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Felt {
        self.field.wrap(self.data[i * self.cols + j])
    }

    #[inline]
    pub(crate) fn rget(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Felt) {
        self.field.check(v);
        self.data[i * self.cols + j] = v.raw();
    }

    pub fn column(&self, j: usize) -> Vec<Felt> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn row(&self, i: usize) -> Vec<Felt> {
        (0..self.cols).map(|j| self.get(i, j)).collect()
    }

    pub fn select_cols(&self, idx: &[usize]) -> Mat {
        Mat::from_fn(&self.field, self.rows, idx.len(), |i, j| self.get(i, idx[j]))
    }

    pub fn select_rows(&self, idx: &[usize]) -> Mat {
        Mat::from_fn(&self.field, idx.len(), self.cols, |i, j| self.get(idx[i], j))
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Mat {
        Mat::from_fn(&self.field, rows.len(), cols.len(), |i, j| {
            self.get(rows[i], cols[j])
        })
    }

    fn same_field(&self, other: &Mat) {
        assert!(
            self.field.id() == other.field.id(),
            "cross-field arithmetic: matrices over different fields"
        );
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &Mat) -> Mat {
        self.same_field(other);
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        Mat::from_fn(&self.field, self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j)
            } else {
                other.get(i, j - self.cols)
            }
        })
    }

    /// `[self; other]`.
    pub fn vstack(&self, other: &Mat) -> Mat {
        self.same_field(other);
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Mat::from_raw(&self.field, self.rows + other.rows, self.cols, data)
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(&self.field, self.cols, self.rows, |i, j| self.get(j, i))
    }

    /// Entrywise conjugation (identity on odd-degree fields).
    pub fn conj(&self) -> Mat {
        let f = &self.field;
        Mat::from_raw(
            f,
            self.rows,
            self.cols,
            self.data.iter().map(|&x| f.rconj(x)).collect(),
        )
    }

    /// `A*`: transpose composed with entrywise conjugation.
    pub fn conj_transpose(&self) -> Mat {
        let f = &self.field;
        let mut data = vec![0u32; self.data.len()];
        for i in 0..self.rows {
            for j in 0..self.cols {
                data[j * self.rows + i] = f.rconj(self.data[i * self.cols + j]);
            }
        }
        Mat::from_raw(f, self.cols, self.rows, data)
    }

    pub fn add(&self, other: &Mat) -> Mat {
        self.same_field(other);
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = &self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.radd(a, b))
            .collect();
        Mat::from_raw(f, self.rows, self.cols, data)
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        self.same_field(other);
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = &self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.rsub(a, b))
            .collect();
        Mat::from_raw(f, self.rows, self.cols, data)
    }

    pub fn scale(&self, s: Felt) -> Mat {
        let f = &self.field;
        f.check(s);
        let data = self.data.iter().map(|&a| f.rmul(a, s.raw())).collect();
        Mat::from_raw(f, self.rows, self.cols, data)
    }

    /// Matrix product; panics on shape or field mismatch.
    pub fn mul(&self, other: &Mat) -> Mat {
        self.same_field(other);
        assert_eq!(
            self.cols, other.rows,
            "product shape mismatch: {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let f = &*self.field;
        let (n, k, m) = (self.rows, self.cols, other.cols);
        let mut out = vec![0u32; n * m];
        let row_job = |i: usize, acc: &mut [u32]| {
            let arow = &self.data[i * k..(i + 1) * k];
            for (t, &a) in arow.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                let brow = &other.data[t * m..(t + 1) * m];
                for (c, &b) in acc.iter_mut().zip(brow) {
                    if b != 0 {
                        *c = f.radd(*c, f.rmul(a, b));
                    }
                }
            }
        };
        if n * k * m >= PAR_THRESHOLD && m > 0 {
            out.par_chunks_mut(m)
                .enumerate()
                .for_each(|(i, acc)| row_job(i, acc));
        } else if m > 0 {
            for (i, acc) in out.chunks_mut(m).enumerate() {
                row_job(i, acc);
            }
        }
        Mat::from_raw(&self.field, n, m, out)
    }

    /// Applies the matrix to a vector.
    pub fn apply(&self, v: &[Felt]) -> Vec<Felt> {
        assert_eq!(self.cols, v.len(), "apply shape mismatch");
        let f = &self.field;
        (0..self.rows)
            .map(|i| {
                let mut acc = 0u32;
                for (j, &x) in v.iter().enumerate() {
                    f.check(x);
                    acc = f.radd(acc, f.rmul(self.rget(i, j), x.raw()));
                }
                f.wrap(acc)
            })
            .collect()
    }

    /// Kronecker product.
    pub fn kron(&self, other: &Mat) -> Mat {
        self.same_field(other);
        let f = &self.field;
        Mat::from_fn(f, self.rows * other.rows, self.cols * other.cols, |i, j| {
            let (a, b) = (i / other.rows, i % other.rows);
            let (c, d) = (j / other.cols, j % other.cols);
            f.mul(self.get(a, c), other.get(b, d))
        })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    /// `Some(c)` when the matrix equals `c I`.
    pub fn scalar_value(&self) -> Option<Felt> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(self.field.zero());
        }
        let c = self.data[0];
        for i in 0..n {
            for j in 0..n {
                let want = if i == j { c } else { 0 };
                if self.data[i * n + j] != want {
                    return None;
                }
            }
        }
        Some(self.field.wrap(c))
    }

    pub fn is_identity(&self) -> bool {
        self.scalar_value() == Some(self.field.one())
    }

    pub fn trace(&self) -> Felt {
        let f = &self.field;
        let n = self.rows.min(self.cols);
        f.wrap((0..n).fold(0, |acc, i| f.radd(acc, self.rget(i, i))))
    }

    /// Reduced row-echelon form together with its pivot columns.
    pub fn rref_with_pivots(&self) -> (Mat, Vec<usize>) {
        let f = &*self.field;
        let (n, m) = (self.rows, self.cols);
        let mut a = self.data.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m {
            if r == n {
                break;
            }
            let Some(p) = (r..n).find(|&i| a[i * m + c] != 0) else {
                continue;
            };
            if p != r {
                for j in 0..m {
                    a.swap(p * m + j, r * m + j);
                }
            }
            let inv = f.rinv(a[r * m + c]);
            for j in c..m {
                a[r * m + j] = f.rmul(a[r * m + j], inv);
            }
            let (before, rest) = a.split_at_mut(r * m);
            let (prow, after) = rest.split_at_mut(m);
            let eliminate = |row: &mut [u32]| {
                let factor = row[c];
                if factor != 0 {
                    let nf = f.rneg(factor);
                    for j in c..m {
                        if prow[j] != 0 {
                            row[j] = f.radd(row[j], f.rmul(nf, prow[j]));
                        }
                    }
                }
            };
            before.chunks_mut(m).for_each(eliminate);
            after.chunks_mut(m).for_each(eliminate);
            pivots.push(c);
            r += 1;
        }
        (Mat::from_raw(&self.field, n, m, a), pivots)
    }

    pub fn rref(&self) -> Mat {
        self.rref_with_pivots().0
    }

    pub fn rank(&self) -> usize {
        // Eliminating along the shorter side is cheaper and gives the same rank.
        if self.rows > self.cols {
            self.transpose().rref_with_pivots().1.len()
        } else {
            self.rref_with_pivots().1.len()
        }
    }

    /// Columns form a basis of `{x : A x = 0}`.
    pub fn kernel_basis(&self) -> Mat {
        let f = &self.field;
        let (r, pivots) = self.rref_with_pivots();
        let m = self.cols;
        let free: Vec<usize> = (0..m).filter(|c| !pivots.contains(c)).collect();
        let mut k = Mat::zeros(f, m, free.len());
        for (t, &fc) in free.iter().enumerate() {
            k.data[fc * free.len() + t] = 1;
            for (pr, &pc) in pivots.iter().enumerate() {
                let v = r.rget(pr, fc);
                k.data[pc * free.len() + t] = f.rneg(v);
            }
        }
        k
    }

    /// Basis (as columns) of the column space, taken from the pivot columns.
    pub fn column_space(&self) -> Mat {
        let (_, pivots) = self.rref_with_pivots();
        self.select_cols(&pivots)
    }

    pub fn inverse(&self) -> Option<Mat> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let aug = self.hstack(&Mat::identity(&self.field, n));
        let (r, pivots) = aug.rref_with_pivots();
        if pivots.len() < n || (n > 0 && pivots[n - 1] != n - 1) {
            return None;
        }
        let idx: Vec<usize> = (n..2 * n).collect();
        let rows: Vec<usize> = (0..n).collect();
        Some(r.submatrix(&rows, &idx))
    }

    pub fn det(&self) -> Result<Felt> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let f = &*self.field;
        let n = self.rows;
        let mut a = self.data.clone();
        let mut det = 1u32;
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| a[i * n + c] != 0) else {
                return Ok(self.field.zero());
            };
            if p != c {
                for j in 0..n {
                    a.swap(p * n + j, c * n + j);
                }
                det = f.rneg(det);
            }
            let piv = a[c * n + c];
            det = f.rmul(det, piv);
            let inv = f.rinv(piv);
            for i in c + 1..n {
                let factor = f.rmul(a[i * n + c], inv);
                if factor == 0 {
                    continue;
                }
                let nf = f.rneg(factor);
                for j in c..n {
                    a[i * n + j] = f.radd(a[i * n + j], f.rmul(nf, a[c * n + j]));
                }
            }
        }
        Ok(f.wrap(det))
    }

    /// Characteristic polynomial `det(xI - A)`, coefficients low-to-high.
    ///
    /// Uses a similarity reduction to upper Hessenberg form followed by the
    /// standard three-term recurrence on leading principal minors.
    pub fn char_poly(&self) -> Result<Vec<Felt>> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let f = &*self.field;
        let n = self.rows;
        let mut h = self.data.clone();
        let at = |i: usize, j: usize| i * n + j;
        for j in 0..n.saturating_sub(2) {
            let Some(p) = (j + 1..n).find(|&i| h[at(i, j)] != 0) else {
                continue;
            };
            if p != j + 1 {
                for c in 0..n {
                    h.swap(at(p, c), at(j + 1, c));
                }
                for r in 0..n {
                    h.swap(at(r, p), at(r, j + 1));
                }
            }
            let inv = f.rinv(h[at(j + 1, j)]);
            for r in j + 2..n {
                let u = f.rmul(h[at(r, j)], inv);
                if u == 0 {
                    continue;
                }
                let nu = f.rneg(u);
                for c in 0..n {
                    h[at(r, c)] = f.radd(h[at(r, c)], f.rmul(nu, h[at(j + 1, c)]));
                }
                for rr in 0..n {
                    h[at(rr, j + 1)] = f.radd(h[at(rr, j + 1)], f.rmul(u, h[at(rr, r)]));
                }
            }
        }
        // p[k] is the char poly of the leading k x k block.
        let mut polys: Vec<Vec<u32>> = vec![vec![1]];
        for k in 1..=n {
            let hkk = h[at(k - 1, k - 1)];
            let mut pk = poly_mul_linear(f, &polys[k - 1], f.rneg(hkk));
            let mut prod = 1u32;
            for i in (1..k).rev() {
                prod = f.rmul(prod, h[at(i, i - 1)]);
                if prod == 0 {
                    break;
                }
                let coef = f.rmul(h[at(i - 1, k - 1)], prod);
                if coef == 0 {
                    continue;
                }
                let ncoef = f.rneg(coef);
                for (t, &c) in polys[i - 1].iter().enumerate() {
                    pk[t] = f.radd(pk[t], f.rmul(ncoef, c));
                }
            }
            polys.push(pk);
        }
        Ok(polys[n].iter().map(|&c| f.wrap(c)).collect())
    }

    /// Eigenvalues in the ambient field with bases of their eigenspaces,
    /// sorted by discrete log (zero first).
    pub fn eigen(&self) -> Result<Vec<(Felt, Mat)>> {
        let cp = self.char_poly()?;
        let f = &self.field;
        let n = self.rows;
        let mut roots: Vec<Felt> = f
            .elements()
            .filter(|&x| eval_poly(f, &cp, x).is_zero())
            .collect();
        roots.sort_by_key(|&x| f.log(x).map_or(0, |l| l + 1));
        Ok(roots
            .into_iter()
            .map(|lam| {
                let shifted = self.sub(&Mat::identity(f, n).scale(lam));
                (lam, shifted.kernel_basis())
            })
            .collect())
    }

    /// Evaluates a polynomial (low-to-high coefficients) at this matrix.
    pub fn eval_poly(&self, coeffs: &[Felt]) -> Mat {
        assert!(self.is_square());
        let f = &self.field;
        let n = self.rows;
        let mut acc = Mat::zeros(f, n, n);
        for &c in coeffs.iter().rev() {
            acc = acc.mul(self).add(&Mat::identity(f, n).scale(c));
        }
        acc
    }
}

fn poly_mul_linear(f: &crate::field::FieldCtx, p: &[u32], c0: u32) -> Vec<u32> {
    // (x + c0) * p
    let mut out = vec![0u32; p.len() + 1];
    for (i, &c) in p.iter().enumerate() {
        out[i + 1] = f.radd(out[i + 1], c);
        out[i] = f.radd(out[i], f.rmul(c0, c));
    }
    out
}

/// Horner evaluation, coefficients low-to-high.
pub fn eval_poly(f: &Field, coeffs: &[Felt], x: Felt) -> Felt {
    coeffs
        .iter()
        .rev()
        .fold(f.zero(), |acc, &c| f.add(f.mul(acc, x), c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldCtx;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f9() -> Field {
        FieldCtx::new(3, 2, None).unwrap()
    }

    /// Determinant by cofactor expansion along the first row, over polynomials.
    fn char_poly_by_minors(a: &Mat) -> Vec<Felt> {
        let f = a.field().clone();
        let n = a.rows();
        // entries of xI - A as polynomials
        let entry = |i: usize, j: usize| -> Vec<Felt> {
            let c = f.neg(a.get(i, j));
            if i == j {
                vec![c, f.one()]
            } else {
                vec![c]
            }
        };
        fn padd(f: &Field, a: &[Felt], b: &[Felt]) -> Vec<Felt> {
            let n = a.len().max(b.len());
            (0..n)
                .map(|i| {
                    f.add(
                        a.get(i).copied().unwrap_or(f.zero()),
                        b.get(i).copied().unwrap_or(f.zero()),
                    )
                })
                .collect()
        }
        fn pmul(f: &Field, a: &[Felt], b: &[Felt]) -> Vec<Felt> {
            let mut r = vec![f.zero(); a.len() + b.len() - 1];
            for (i, &x) in a.iter().enumerate() {
                for (j, &y) in b.iter().enumerate() {
                    r[i + j] = f.add(r[i + j], f.mul(x, y));
                }
            }
            r
        }
        fn det(
            f: &Field,
            rows: &[usize],
            cols: &[usize],
            entry: &dyn Fn(usize, usize) -> Vec<Felt>,
        ) -> Vec<Felt> {
            if rows.is_empty() {
                return vec![f.one()];
            }
            let mut acc = vec![f.zero()];
            for (k, &c) in cols.iter().enumerate() {
                let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
                let mut term = pmul(f, &entry(rows[0], c), &det(f, &rows[1..], &rest, entry));
                if k % 2 == 1 {
                    term = term.iter().map(|&t| f.neg(t)).collect();
                }
                acc = padd(f, &acc, &term);
            }
            acc
        }
        let idx: Vec<usize> = (0..n).collect();
        let mut p = det(&f, &idx, &idx, &entry);
        p.resize(n + 1, f.zero());
        p
    }

    #[test]
    fn conj_transpose_basics() {
        let f = f9();
        let i3 = Mat::identity(&f, 3);
        assert_eq!(i3.conj_transpose(), i3);
        let z = Mat::from_rows(&f, &[vec![f.zeta()]]).unwrap();
        assert_eq!(z.conj_transpose().get(0, 0), f.zeta_pow(3));
    }

    #[test]
    fn rank_examples() {
        let f3 = FieldCtx::new(3, 1, None).unwrap();
        let j = Mat::from_fn(&f3, 3, 3, |_, _| f3.one());
        assert_eq!(j.rank(), 1);
        assert_eq!(Mat::identity(&f3, 4).rank(), 4);
        // Mercedes-Benz Gram over F_5: rows (1,2,2),(2,1,2),(2,2,1); row-reducing by
        // hand: R2 - 2R1 = (0,-3,-2) = (0,2,3), R3 - 2R1 = (0,-2,-3) = (0,3,2) = -R2'.
        let f5 = FieldCtx::new(5, 1, None).unwrap();
        let g = Mat::from_fn(&f5, 3, 3, |i, j| f5.from_int(if i == j { 1 } else { 2 }));
        assert_eq!(g.rank(), 2);
    }

    #[test]
    fn kernel_is_annihilated() {
        let f = f9();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let a = Mat::random(&f, 3, 5, &mut rng);
            let k = a.kernel_basis();
            assert!(a.mul(&k).is_zero());
            assert_eq!(a.rank() + k.cols(), 5);
        }
    }

    #[test]
    fn char_poly_matches_minor_expansion() {
        let f = f9();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=6 {
            for _ in 0..10 {
                let a = Mat::random(&f, n, n, &mut rng);
                assert_eq!(a.char_poly().unwrap(), char_poly_by_minors(&a));
            }
        }
    }

    #[test]
    fn char_poly_sparse_hessenberg_paths() {
        // Matrices with zero subdiagonal pivots exercise the skip branches.
        let f = FieldCtx::new(7, 1, None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let n = 5;
            let a = Mat::from_fn(&f, n, n, |_, _| {
                if rand::Rng::gen_bool(&mut rng, 0.3) {
                    f.random(&mut rng)
                } else {
                    f.zero()
                }
            });
            assert_eq!(a.char_poly().unwrap(), char_poly_by_minors(&a));
        }
    }

    #[test]
    fn eigen_examples() {
        let f = f9();
        let e = Mat::identity(&f, 2).eigen().unwrap();
        assert_eq!(e.len(), 1);
        assert_eq!(e[0].0, f.one());
        assert_eq!(e[0].1.cols(), 2);
        let d = Mat::diag(&f, &[f.zeta(), f.zeta_pow(2)]);
        let e = d.eigen().unwrap();
        assert_eq!(e.iter().map(|x| x.0).collect::<Vec<_>>(), vec![f.zeta(), f.zeta_pow(2)]);
        assert!(e.iter().all(|x| x.1.cols() == 1));
        assert!(matches!(
            Mat::zeros(&f, 2, 3).eigen(),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn inverse_and_det() {
        let f = FieldCtx::new(5, 2, None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..30 {
            let a = Mat::random(&f, 4, 4, &mut rng);
            match a.inverse() {
                Some(inv) => {
                    assert!(a.mul(&inv).is_identity());
                    assert!(!a.det().unwrap().is_zero());
                }
                None => assert!(a.det().unwrap().is_zero()),
            }
        }
    }

    fn grid() -> Vec<Field> {
        vec![
            FieldCtx::new(2, 2, None).unwrap(),
            FieldCtx::new(3, 2, None).unwrap(),
            FieldCtx::new(5, 2, None).unwrap(),
            FieldCtx::new(7, 2, None).unwrap(),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn rref_idempotent_and_rank_conj(seed in any::<u64>(), fi in 0usize..4, r in 1usize..6, c in 1usize..6) {
            let f = &grid()[fi];
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = Mat::random(f, r, c, &mut rng);
            let rr = a.rref();
            prop_assert_eq!(rr.rref(), rr.clone());
            prop_assert_eq!(a.rank(), a.conj_transpose().rank());
            prop_assert!(a.mul(&a.kernel_basis()).is_zero());
        }

        #[test]
        fn star_reverses_products(seed in any::<u64>(), fi in 0usize..4) {
            let f = &grid()[fi];
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = Mat::random(f, 3, 4, &mut rng);
            let b = Mat::random(f, 4, 2, &mut rng);
            prop_assert_eq!(a.mul(&b).conj_transpose(), b.conj_transpose().mul(&a.conj_transpose()));
            prop_assert_eq!(a.conj_transpose().conj_transpose(), a);
        }

        #[test]
        fn cayley_hamilton(seed in any::<u64>(), fi in 0usize..4, n in 1usize..7) {
            let f = &grid()[fi];
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = Mat::random(f, n, n, &mut rng);
            let cp = a.char_poly().unwrap();
            prop_assert!(a.eval_poly(&cp).is_zero());
        }

        #[test]
        fn eigen_exhaustive(seed in any::<u64>(), fi in 0usize..4, n in 1usize..5) {
            let f = &grid()[fi];
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = Mat::random(f, n, n, &mut rng);
            let eig = a.eigen().unwrap();
            let found: Vec<Felt> = eig.iter().map(|e| e.0).collect();
            for lam in f.elements() {
                let shifted = a.sub(&Mat::identity(f, n).scale(lam));
                prop_assert_eq!(shifted.rank() < n, found.contains(&lam));
            }
            for (lam, v) in &eig {
                prop_assert_eq!(a.mul(v), v.scale(*lam));
            }
        }
    }
}
