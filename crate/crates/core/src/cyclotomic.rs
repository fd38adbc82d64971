//! Exact arithmetic in `Z[alpha_k]` and `Q(i)`, reduction into `F_{q^2}`,
//! projection of complex ETF Gram matrices, and the Hoggar-lines lift.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::construct::{gabor_frame, GaborGroup};
use crate::error::{Error, Result};
use crate::field::{unitary_field, Felt, Field};
use crate::form::Case;
use crate::frame::{factor_gram_unitary, FrameRecord};
use crate::matrix::Mat;

/// Coefficients of the `k`-th cyclotomic polynomial, low degree first.
pub fn cyclotomic_poly(k: u32) -> Arc<Vec<i64>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(p) = cache.lock().expect("poisoned").get(&k) {
        return p.clone();
    }
    assert!(k >= 1, "conductor must be positive");
    // x^k - 1 divided by every proper-divisor cyclotomic factor
    let mut num = vec![0i64; k as usize + 1];
    num[0] = -1;
    num[k as usize] = 1;
    for j in (1..k).filter(|j| k % j == 0) {
        num = exact_div_monic(&num, &cyclotomic_poly(j));
    }
    let p = Arc::new(num);
    cache.lock().expect("poisoned").insert(k, p.clone());
    p
}

fn exact_div_monic(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let mut q = vec![0i64; a.len() - db];
    for i in (0..q.len()).rev() {
        let c = r[i + db];
        q[i] = c;
        for (j, &bj) in b.iter().enumerate() {
            r[i + j] -= c * bj;
        }
    }
    debug_assert!(r.iter().all(|&x| x == 0));
    q
}

/// Euler's totient, the rank of `Z[alpha_k]` over `Z`.
pub fn totient(k: u32) -> usize {
    cyclotomic_poly(k).len() - 1
}

/// An element of `Z[alpha_k]` in the power basis modulo the `k`-th cyclotomic
/// polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycInt {
    k: u32,
    coeffs: Vec<BigInt>,
}

impl CycInt {
    pub fn zero(k: u32) -> CycInt {
        CycInt {
            k,
            coeffs: vec![BigInt::zero(); totient(k)],
        }
    }

    pub fn from_int(k: u32, n: impl Into<BigInt>) -> CycInt {
        let mut z = CycInt::zero(k);
        z.coeffs[0] = n.into();
        z
    }

    pub fn one(k: u32) -> CycInt {
        CycInt::from_int(k, 1)
    }

    /// `alpha_k^e`.
    pub fn alpha_pow(k: u32, e: u64) -> CycInt {
        let mut c = vec![BigInt::zero(); (e % k as u64) as usize + 1];
        c[(e % k as u64) as usize] = BigInt::one();
        CycInt::from_poly(k, c)
    }

    /// Reduces an arbitrary integer polynomial in `alpha_k`.
    pub fn from_poly(k: u32, mut c: Vec<BigInt>) -> CycInt {
        let m = cyclotomic_poly(k);
        let deg = m.len() - 1;
        for i in (deg..c.len()).rev() {
            let lead = std::mem::take(&mut c[i]);
            if lead.is_zero() {
                continue;
            }
            for (j, &mj) in m.iter().enumerate().take(deg) {
                c[i - deg + j] -= &lead * mj;
            }
        }
        c.resize(deg, BigInt::zero());
        CycInt { k, coeffs: c }
    }

    pub fn from_i64s(k: u32, c: &[i64]) -> CycInt {
        CycInt::from_poly(k, c.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn k(&self) -> u32 {
        self.k
    }
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn same_ring(&self, other: &CycInt) {
        assert_eq!(self.k, other.k, "cross-ring arithmetic: Z[alpha_{}] vs Z[alpha_{}]", self.k, other.k);
    }

    pub fn add(&self, o: &CycInt) -> CycInt {
        self.same_ring(o);
        CycInt {
            k: self.k,
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, o: &CycInt) -> CycInt {
        self.same_ring(o);
        CycInt {
            k: self.k,
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn neg(&self) -> CycInt {
        CycInt {
            k: self.k,
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }

    pub fn mul(&self, o: &CycInt) -> CycInt {
        self.same_ring(o);
        let n = self.coeffs.len();
        let mut prod = vec![BigInt::zero(); 2 * n - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        CycInt::from_poly(self.k, prod)
    }

    pub fn scale(&self, s: &BigInt) -> CycInt {
        CycInt {
            k: self.k,
            coeffs: self.coeffs.iter().map(|a| a * s).collect(),
        }
    }

    /// Complex conjugation `alpha -> alpha^{k-1}`.
    pub fn conj(&self) -> CycInt {
        let k = self.k as usize;
        let mut c = vec![BigInt::zero(); k.max(1)];
        for (i, a) in self.coeffs.iter().enumerate() {
            c[(i * (k - 1)) % k] += a;
        }
        CycInt::from_poly(self.k, c)
    }

    /// Gcd of the coefficients.
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// The automorphism `alpha -> alpha^j`, for `j` coprime to `k`.
    pub fn galois(&self, j: u32) -> CycInt {
        let k = self.k as usize;
        let mut c = vec![BigInt::zero(); k.max(1)];
        for (i, a) in self.coeffs.iter().enumerate() {
            c[(i * j as usize) % k.max(1)] += a;
        }
        CycInt::from_poly(self.k, c)
    }

    /// Product of the Galois conjugates other than `self`, so that
    /// `self * cofactor` is the integer norm.
    fn norm_cofactor(&self) -> CycInt {
        let k = self.k;
        (2..k.max(2))
            .filter(|&j| j.gcd(&k) == 1)
            .fold(CycInt::one(k), |acc, j| acc.mul(&self.galois(j)))
    }

    /// Field norm down to `Z`.
    pub fn norm(&self) -> BigInt {
        let n = self.mul(&self.norm_cofactor());
        debug_assert!(n.coeffs[1..].iter().all(Zero::is_zero));
        n.coeffs[0].clone()
    }

    /// `self / b` when the quotient lies in `Z[alpha_k]`.
    pub fn exact_div(&self, b: &CycInt) -> Option<CycInt> {
        if b.is_zero() {
            return None;
        }
        let cof = b.norm_cofactor();
        let n = b.mul(&cof).coeffs[0].clone();
        let t = self.mul(&cof);
        let mut coeffs = Vec::with_capacity(t.coeffs.len());
        for x in &t.coeffs {
            let (q, r) = x.div_rem(&n);
            if !r.is_zero() {
                return None;
            }
            coeffs.push(q);
        }
        Some(CycInt { k: self.k, coeffs })
    }

    fn div_int(&self, s: &BigInt) -> CycInt {
        CycInt {
            k: self.k,
            coeffs: self.coeffs.iter().map(|a| a / s).collect(),
        }
    }
}

/// `num / den` with `num` in `Z[i]` and `den > 0`, kept in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    num: CycInt,
    den: BigInt,
}

impl GaussianRational {
    pub fn new(num: CycInt, den: impl Into<BigInt>) -> GaussianRational {
        assert_eq!(num.k(), 4, "Gaussian rationals live over Z[alpha_4]");
        let den = den.into();
        assert!(!den.is_zero(), "zero denominator");
        let mut r = GaussianRational { num, den };
        r.normalize();
        r
    }

    pub fn from_parts(re: i64, im: i64) -> GaussianRational {
        GaussianRational::new(CycInt::from_i64s(4, &[re, im]), 1)
    }

    pub fn zero() -> GaussianRational {
        GaussianRational::from_parts(0, 0)
    }
    pub fn one() -> GaussianRational {
        GaussianRational::from_parts(1, 0)
    }
    pub fn i() -> GaussianRational {
        GaussianRational::from_parts(0, 1)
    }
    /// `i^l`.
    pub fn i_pow(l: u64) -> GaussianRational {
        GaussianRational::new(CycInt::alpha_pow(4, l), 1)
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -&self.den;
            self.num = self.num.neg();
        }
        let g = self.num.content().gcd(&self.den);
        if !g.is_one() && !g.is_zero() {
            self.num = self.num.div_int(&g);
            self.den = &self.den / &g;
        }
        if self.num.is_zero() {
            self.den = BigInt::one();
        }
    }

    pub fn numerator(&self) -> &CycInt {
        &self.num
    }
    pub fn denominator(&self) -> &BigInt {
        &self.den
    }
    pub fn re_num(&self) -> &BigInt {
        &self.num.coeffs[0]
    }
    pub fn im_num(&self) -> &BigInt {
        &self.num.coeffs[1]
    }
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &GaussianRational) -> GaussianRational {
        if self.den == o.den {
            return GaussianRational::new(self.num.add(&o.num), self.den.clone());
        }
        GaussianRational::new(
            self.num.scale(&o.den).add(&o.num.scale(&self.den)),
            &self.den * &o.den,
        )
    }

    pub fn neg(&self) -> GaussianRational {
        GaussianRational {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, o: &GaussianRational) -> GaussianRational {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &GaussianRational) -> GaussianRational {
        GaussianRational::new(self.num.mul(&o.num), &self.den * &o.den)
    }

    pub fn conj(&self) -> GaussianRational {
        GaussianRational {
            num: self.num.conj(),
            den: self.den.clone(),
        }
    }

    /// Exact quotient; `None` for a zero divisor.
    pub fn div(&self, o: &GaussianRational) -> Option<GaussianRational> {
        if o.is_zero() {
            return None;
        }
        // 1/(a+bi) = (a-bi)/(a^2+b^2)
        let (a, b) = (o.re_num(), o.im_num());
        let norm = a * a + b * b;
        let inv = GaussianRational::new(o.num.conj().scale(&o.den), norm);
        Some(self.mul(&inv))
    }
}

/// Dense matrix over `Z[alpha_k]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycMatrix {
    k: u32,
    rows: usize,
    cols: usize,
    entries: Vec<CycInt>,
}

impl CycMatrix {
    pub fn from_fn(k: u32, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> CycInt) -> CycMatrix {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let e = f(i, j);
                assert_eq!(e.k(), k, "entry from another ring");
                entries.push(e);
            }
        }
        CycMatrix { k, rows, cols, entries }
    }

    pub fn from_rows(k: u32, rows: Vec<Vec<CycInt>>) -> Result<CycMatrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        if rows.iter().flatten().any(|e| e.k() != k) {
            return Err(Error::Invalid(format!("entries must lie in Z[alpha_{k}]")));
        }
        Ok(CycMatrix {
            k,
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn k(&self) -> u32 {
        self.k
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn get(&self, i: usize, j: usize) -> &CycInt {
        &self.entries[i * self.cols + j]
    }

    pub fn conj_transpose(&self) -> CycMatrix {
        CycMatrix::from_fn(self.k, self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn mul(&self, o: &CycMatrix) -> CycMatrix {
        assert_eq!(self.cols, o.rows, "dimension mismatch");
        CycMatrix::from_fn(self.k, self.rows, o.cols, |i, j| {
            (0..self.cols).fold(CycInt::zero(self.k), |acc, t| {
                acc.add(&self.get(i, t).mul(o.get(t, j)))
            })
        })
    }

    pub fn is_self_adjoint(&self) -> bool {
        self.rows == self.cols && *self == self.conj_transpose()
    }

    /// Rank over `Q(alpha_k)`.
    pub fn rank(&self) -> usize {
        let mut m: Vec<Vec<CycInt>> = (0..self.rows)
            .map(|i| self.entries[i * self.cols..(i + 1) * self.cols].to_vec())
            .collect();
        bareiss_rank(&mut m, self.cols, self.k)
    }

    /// Integral matrix with the same entries; `None` if some denominator is not 1.
    pub fn from_gauss(m: &GaussMatrix) -> Option<CycMatrix> {
        m.entries
            .iter()
            .all(|x| x.den.is_one())
            .then(|| CycMatrix::from_fn(4, m.rows(), m.cols(), |i, j| m.get(i, j).num.clone()))
    }
}

/// Dense matrix over `Q(i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaussMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<GaussianRational>,
}

impl GaussMatrix {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> GaussianRational) -> GaussMatrix {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        GaussMatrix { rows, cols, entries }
    }

    pub fn identity(n: usize) -> GaussMatrix {
        GaussMatrix::from_fn(n, n, |i, j| {
            if i == j {
                GaussianRational::one()
            } else {
                GaussianRational::zero()
            }
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn get(&self, i: usize, j: usize) -> &GaussianRational {
        &self.entries[i * self.cols + j]
    }

    pub fn conj_transpose(&self) -> GaussMatrix {
        GaussMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn add(&self, o: &GaussMatrix) -> GaussMatrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "dimension mismatch");
        GaussMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).add(o.get(i, j)))
    }

    pub fn scale(&self, s: &GaussianRational) -> GaussMatrix {
        GaussMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).mul(s))
    }

    /// Row `i` of `self * o`.
    pub fn mul_row(&self, i: usize, o: &GaussMatrix) -> Vec<GaussianRational> {
        assert_eq!(self.cols, o.rows, "dimension mismatch");
        (0..o.cols)
            .map(|j| {
                (0..self.cols)
                    .filter(|&t| !self.get(i, t).is_zero())
                    .fold(GaussianRational::zero(), |acc, t| {
                        acc.add(&self.get(i, t).mul(o.get(t, j)))
                    })
            })
            .collect()
    }

    pub fn mul(&self, o: &GaussMatrix) -> GaussMatrix {
        use rayon::prelude::*;
        let rows: Vec<Vec<GaussianRational>> =
            (0..self.rows).into_par_iter().map(|i| self.mul_row(i, o)).collect();
        GaussMatrix {
            rows: self.rows,
            cols: o.cols,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn is_self_adjoint(&self) -> bool {
        self.rows == self.cols && *self == self.conj_transpose()
    }

    /// Rank over `Q(i)` by fraction-free elimination on a cleared copy.
    pub fn rank(&self) -> usize {
        // scale each row by the lcm of its denominators to land in Z[i]
        let mut m: Vec<Vec<CycInt>> = (0..self.rows)
            .map(|i| {
                let row = &self.entries[i * self.cols..(i + 1) * self.cols];
                let l = row.iter().fold(BigInt::one(), |l, x| l.lcm(&x.den));
                row.iter().map(|x| x.num.scale(&(&l / &x.den))).collect()
            })
            .collect();
        bareiss_rank(&mut m, self.cols, 4)
    }

    /// `self^2 = c * self` restricted to the given rows.
    pub fn rows_satisfy_square_identity(&self, c: &GaussianRational, rows: &[usize]) -> bool {
        rows.iter().all(|&i| {
            let sq = self.mul_row(i, self);
            (0..self.cols).all(|j| sq[j] == self.get(i, j).mul(c))
        })
    }
}

/// Rank over `Q(alpha_k)` by fraction-free elimination; every division is
/// exact by Sylvester's identity.
fn bareiss_rank(m: &mut [Vec<CycInt>], cols: usize, k: u32) -> usize {
    let rows = m.len();
    let mut prev = CycInt::one(k);
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, piv);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let t = m[r][c].mul(&m[i][j]).sub(&m[i][c].mul(&m[r][j]));
                m[i][j] = t.exact_div(&prev).expect("Bareiss quotient is integral");
            }
            m[i][c] = CycInt::zero(k);
        }
        prev = m[r][c].clone();
        r += 1;
    }
    r
}

/// The ring map `Z[alpha_k] -> F_{q^2}` with `alpha_k -> root_of_unity(k)`.
#[derive(Clone, Debug)]
pub struct CyclotomicHom {
    k: u32,
    field: Field,
    omega: Felt,
}

pub fn cyclotomic_hom(k: u32, f: &Field) -> Result<CyclotomicHom> {
    let omega = f.root_of_unity(k as u64)?;
    Ok(CyclotomicHom {
        k,
        field: f.clone(),
        omega,
    })
}

impl CyclotomicHom {
    pub fn k(&self) -> u32 {
        self.k
    }
    pub fn field(&self) -> &Field {
        &self.field
    }
    /// Image of `alpha_k`.
    pub fn omega(&self) -> Felt {
        self.omega
    }

    fn reduce_int(&self, n: &BigInt) -> Felt {
        let p = BigInt::from(self.field.characteristic());
        let r = n.mod_floor(&p).to_i64().expect("residue fits");
        self.field.from_int(r)
    }

    pub fn apply(&self, z: &CycInt) -> Felt {
        assert_eq!(z.k(), self.k, "element of another cyclotomic ring");
        let f = &self.field;
        let mut acc = f.zero();
        let mut pw = f.one();
        for c in &z.coeffs {
            acc = f.add(acc, f.mul(self.reduce_int(c), pw));
            pw = f.mul(pw, self.omega);
        }
        acc
    }

    /// Defined when the denominator is a unit mod `p`.
    pub fn apply_gauss(&self, z: &GaussianRational) -> Result<Felt> {
        if self.k != 4 {
            return Err(Error::Invalid("Gaussian rationals need k = 4".into()));
        }
        let den = self
            .field
            .inv(self.reduce_int(&z.den))
            .ok_or_else(|| Error::Invalid("denominator vanishes in the residue field".into()))?;
        Ok(self.field.mul(self.apply(&z.num), den))
    }

    pub fn apply_matrix(&self, m: &CycMatrix) -> Mat {
        Mat::from_fn(&self.field, m.rows(), m.cols(), |i, j| self.apply(m.get(i, j)))
    }

    pub fn apply_gauss_matrix(&self, m: &GaussMatrix) -> Result<Mat> {
        let entries = m
            .entries
            .iter()
            .map(|z| self.apply_gauss(z))
            .collect::<Result<Vec<_>>>()?;
        Ok(Mat::from_fn(&self.field, m.rows(), m.cols(), |i, j| entries[i * m.cols() + j]))
    }
}

/// Reduces an ETF Gram matrix over `Z[alpha_k]` and factors the image.
///
/// Fails with [`Error::FrameConstantVanishes`] when reduction lowers the rank,
/// which requires `f(c) = 0`.
pub fn project_gram(g: &CycMatrix, hom: &CyclotomicHom) -> Result<FrameRecord> {
    if g.k() != hom.k() {
        return Err(Error::Invalid(format!(
            "Gram over Z[alpha_{}] with a map from Z[alpha_{}]",
            g.k(),
            hom.k()
        )));
    }
    if g.rows() != g.cols() {
        return Err(Error::NotSquare {
            rows: g.rows(),
            cols: g.cols(),
        });
    }
    if !g.is_self_adjoint() {
        return Err(Error::NotSelfAdjoint);
    }
    let f = hom.field();
    let fg = hom.apply_matrix(g);
    // f(G)^2 = f(c) f(G), read off from one nonzero entry
    let sq = fg.mul(&fg);
    let (i, j) = (0..fg.rows())
        .flat_map(|i| (0..fg.cols()).map(move |j| (i, j)))
        .find(|&(i, j)| !fg.get(i, j).is_zero())
        .ok_or(Error::FrameConstantVanishes)?;
    let c = f.div(sq.get(i, j), fg.get(i, j)).expect("nonzero");
    if sq != fg.scale(c) {
        return Err(Error::NotTightGram);
    }
    // the rank can only drop when f(c) = 0
    if c.is_zero() && fg.rank() != g.rank() {
        return Err(Error::FrameConstantVanishes);
    }
    factor_gram_unitary(&fg)
}

/// `G = (Z/2)^3` in lexicographic order, the index set of the Hoggar lines.
const HOGGAR_M: usize = 3;

fn hoggar_psi_entry(x: usize) -> GaussianRational {
    if x == 0 {
        GaussianRational::from_parts(-1, 2)
    } else {
        GaussianRational::one()
    }
}

/// Synthesis matrix with columns `T_x M_y psi`, `psi(0) = -1 + 2i`, `psi(x) = 1`
/// otherwise, and `(M_y psi)(x) = (-1)^{x.y} psi(x)`.
pub fn hoggar_frame() -> GaussMatrix {
    let d = 1usize << HOGGAR_M;
    GaussMatrix::from_fn(d, d * d, |z, col| {
        let (x, y) = (col / d, col % d);
        // subtraction in (Z/2)^m is xor
        let w = z ^ x;
        let v = hoggar_psi_entry(w);
        if (w & y).count_ones() % 2 == 1 {
            v.neg()
        } else {
            v
        }
    })
}

/// `Psi* Psi` for the Hoggar frame; its diagonal is `|-1+2i|^2 + 7 = 12`.
pub fn hoggar_gram() -> GaussMatrix {
    let psi = hoggar_frame();
    psi.conj_transpose().mul(&psi)
}

/// `g(H) + 3I` where `g(0) = 0` and `g(zeta^{2l}) = i^l`.
///
/// `H` must be a matrix over `F_9` with zero diagonal and off-diagonal entries
/// in `T_3 = {zeta^0, zeta^2, zeta^4, zeta^6}`.
pub fn hoggar_lift(h: &Mat) -> Result<GaussMatrix> {
    let f = h.field();
    if f.order() != 9 {
        return Err(Error::FieldMismatch);
    }
    if !h.is_square() {
        return Err(Error::NotSquare {
            rows: h.rows(),
            cols: h.cols(),
        });
    }
    let n = h.rows();
    let mut lifted = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let x = h.get(i, j);
            if i == j {
                if !x.is_zero() {
                    return Err(Error::BadEntryDomain);
                }
                lifted.push(GaussianRational::from_parts(3, 0));
                continue;
            }
            match f.log(x) {
                Some(e) if e % 2 == 0 => lifted.push(GaussianRational::i_pow(e / 2)),
                _ => return Err(Error::BadEntryDomain),
            }
        }
    }
    Ok(GaussMatrix {
        rows: n,
        cols: n,
        entries: lifted,
    })
}

/// Whether a Hermitian `S` could have exactly two eigenvalues, judged on row
/// 0: solves `S^2 = alpha S + beta I` there and tests the whole row.
pub fn row_has_quadratic_relation(s: &GaussMatrix) -> bool {
    let sq = s.mul_row(0, s);
    let Some(j) = (1..s.cols()).find(|&j| !s.get(0, j).is_zero()) else {
        return true;
    };
    // off the diagonal: (S^2)_{0j} = alpha S_{0j}
    let alpha = sq[j].div(s.get(0, j)).expect("nonzero");
    let beta = sq[0].sub(&alpha.mul(s.get(0, 0)));
    (0..s.cols()).all(|t| {
        let mut want = alpha.mul(s.get(0, t));
        if t == 0 {
            want = want.add(&beta);
        }
        sq[t] == want
    })
}

/// `(1 + sqrt 3, 1 + i)` in `Z[alpha_24]`, a fiducial for the complex 2x4 Gabor ETF.
pub fn sic_fiducial_d2() -> Vec<CycInt> {
    let sqrt3 = CycInt::alpha_pow(24, 2).add(&CycInt::alpha_pow(24, 22));
    vec![
        CycInt::one(24).add(&sqrt3),
        CycInt::one(24).add(&CycInt::alpha_pow(24, 6)),
    ]
}

/// Projects a complex cyclic-group Gabor fiducial into `F_{q^2}` and builds
/// the Gabor frame there.
///
/// The modulation character uses `f(alpha_k)^{k/d}`, the image of the complex
/// `d`-th root of unity, so the projected frame is the image of the complex one.
pub fn table1_project(fiducial: &[CycInt], k: u32, q: u64) -> Result<FrameRecord> {
    let d = fiducial.len();
    if d == 0 || k as usize % d != 0 {
        return Err(Error::Invalid(format!("dimension {d} must divide the conductor {k}")));
    }
    if (q + 1) % k as u64 != 0 {
        return Err(Error::OrderDoesNotDivide {
            n: k as u64,
            q_plus_one: q + 1,
        });
    }
    let f = unitary_field(q)?;
    let hom = cyclotomic_hom(k, &f)?;
    let w = f.pow(hom.omega(), (k as usize / d) as u64);
    let g = GaborGroup::with_omegas(&[d], &f, vec![w])?;
    let phi: Vec<Felt> = fiducial.iter().map(|z| hom.apply(z)).collect();
    let fr = gabor_frame(&g, &phi)?;
    debug_assert_eq!(fr.space.case(), Case::U);
    Ok(fr)
}
