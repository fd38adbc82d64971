//! Orthogonal and unitary geometries on `F^d`.
//!
//! A [`FormSpace`] pairs a dimension with an invertible self-adjoint Gram
//! matrix `M`, giving `<u, v> = u* M v`. In Case U the star involves the
//! field conjugation `x -> x^q`; in Case O it is the plain transpose.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Felt, Field};
use crate::matrix::Mat;

/// Default cap on the number of vectors an enumeration may visit.
pub const DEFAULT_ENUM_CAP: u128 = 1 << 26;

/// Seed for the randomized tail of the nonisotropic-vector search.
pub const DEFAULT_SEED: u64 = 0x5eed_f00d;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Case {
    /// Orthogonal: trivial conjugation, odd characteristic.
    O,
    /// Unitary: conjugation `x -> x^q` on `F_{q^2}`.
    U,
}

impl Case {
    /// `k` in the Gerzon bound.
    pub fn k(self) -> usize {
        match self {
            Case::O => 1,
            Case::U => 2,
        }
    }
}

/// Square class of a discriminant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DiscClass {
    pub square: bool,
}

#[derive(Clone, Debug)]
pub struct FormSpace {
    field: Field,
    case: Case,
    gram: Mat,
}

impl PartialEq for FormSpace {
    fn eq(&self, other: &Self) -> bool {
        self.case == other.case && self.gram == other.gram
    }
}
impl Eq for FormSpace {}

impl FormSpace {
    pub fn new(case: Case, gram: Mat) -> Result<FormSpace> {
        let field = gram.field().clone();
        match case {
            Case::U => {
                field.q()?;
            }
            Case::O => {
                if field.characteristic() == 2 {
                    return Err(Error::Invalid(
                        "orthogonal geometry requires odd characteristic".into(),
                    ));
                }
            }
        }
        if !gram.is_square() {
            return Err(Error::NotSquare {
                rows: gram.rows(),
                cols: gram.cols(),
            });
        }
        let space = FormSpace { field, case, gram };
        if space.star(&space.gram) != space.gram {
            return Err(match case {
                Case::U => Error::NotSelfAdjoint,
                Case::O => Error::NotSymmetric,
            });
        }
        if space.gram.rank() != space.gram.rows() {
            return Err(Error::Invalid("form Gram matrix is singular".into()));
        }
        Ok(space)
    }

    /// `F_{q^2}^d` with the standard Hermitian form.
    pub fn complex_model(field: &Field, d: usize) -> Result<FormSpace> {
        FormSpace::new(Case::U, Mat::identity(field, d))
    }

    /// `F^d` with the dot product.
    pub fn real_model(field: &Field, d: usize) -> Result<FormSpace> {
        FormSpace::new(Case::O, Mat::identity(field, d))
    }

    /// The standard model of the same case and field in dimension `d`.
    pub fn standard(case: Case, field: &Field, d: usize) -> Result<FormSpace> {
        FormSpace::new(case, Mat::identity(field, d))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn case(&self) -> Case {
        self.case
    }
    pub fn dim(&self) -> usize {
        self.gram.rows()
    }
    pub fn gram(&self) -> &Mat {
        &self.gram
    }
    pub fn is_standard(&self) -> bool {
        self.gram.is_identity()
    }

    /// `A*` for this case.
    pub fn star(&self, a: &Mat) -> Mat {
        match self.case {
            Case::U => a.conj_transpose(),
            Case::O => a.transpose(),
        }
    }

    /// Scalar conjugation for this case.
    pub fn sigma(&self, x: Felt) -> Felt {
        match self.case {
            Case::U => self.field.wrap(self.field.rconj(x.raw())),
            Case::O => x,
        }
    }

    /// Gram matrix `S* M S` of the columns of `s`.
    pub fn gram_of(&self, s: &Mat) -> Mat {
        if self.is_standard() {
            self.star(s).mul(s)
        } else {
            self.star(s).mul(&self.gram.mul(s))
        }
    }

    pub fn form_eval(&self, u: &[Felt], v: &[Felt]) -> Result<Felt> {
        let d = self.dim();
        if u.len() != d || v.len() != d {
            return Err(Error::DimensionMismatch(format!(
                "vectors of length {} and {} in a {d}-dimensional space",
                u.len(),
                v.len()
            )));
        }
        let f = &*self.field;
        let mv = if self.is_standard() {
            v.to_vec()
        } else {
            self.gram.apply(v)
        };
        let mut acc = 0u32;
        for (a, b) in u.iter().zip(&mv) {
            f.check(*a);
            let ca = self.sigma(*a).raw();
            acc = f.radd(acc, f.rmul(ca, b.raw()));
        }
        Ok(f.wrap(acc))
    }

    /// `Q(v) = <v, v>`.
    pub fn quad(&self, v: &[Felt]) -> Result<Felt> {
        self.form_eval(v, v)
    }

    pub fn discriminant(&self) -> Result<DiscClass> {
        if self.case != Case::O {
            return Err(Error::CaseMismatch("O"));
        }
        let det = self.gram.det()?;
        Ok(DiscClass {
            square: self.field.is_square(det),
        })
    }

    /// `A† = N^{-1} A* M` for `A` mapping `from` into `to`.
    pub fn adjoint(a: &Mat, from: &FormSpace, to: &FormSpace) -> Result<Mat> {
        if a.rows() != to.dim() || a.cols() != from.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} map from dimension {} to {}",
                a.rows(),
                a.cols(),
                from.dim(),
                to.dim()
            )));
        }
        if from.case != to.case {
            return Err(Error::CaseMismatch("matching"));
        }
        let n_inv = from
            .gram
            .inverse()
            .expect("form Gram matrices are invertible");
        Ok(n_inv.mul(&to.star(a)).mul(&to.gram))
    }

    /// Basis of `rad(span S)`.
    pub fn radical(&self, s: &Mat) -> Mat {
        let b = s.column_space();
        let k = self.gram_of(&b).kernel_basis();
        b.mul(&k)
    }

    /// Returns `(U, R)` with `span S = span U ⊕ span R` and `R` spanning the radical.
    pub fn complement_of_radical(&self, s: &Mat) -> (Mat, Mat) {
        let b = s.column_space();
        let k = self.gram_of(&b).kernel_basis();
        let rad = b.mul(&k);
        // standard vectors at the non-pivot positions of rref(K^T) extend the
        // kernel coordinates to a basis
        let (_, piv) = k.transpose().rref_with_pivots();
        let extra: Vec<usize> = (0..b.cols()).filter(|i| !piv.contains(i)).collect();
        (b.select_cols(&extra), rad)
    }

    /// Cascade used to find a vector with nonzero `Q` in `span(cols)`.
    fn find_nonisotropic(&self, cols: &[Vec<Felt>], rng: &mut ChaCha8Rng) -> Option<Vec<Felt>> {
        let f = &self.field;
        let q = |v: &[Felt]| self.quad(v).expect("dimension checked");
        for c in cols {
            if !q(c).is_zero() {
                return Some(c.clone());
            }
        }
        let comb = |a: &[Felt], s: Felt, b: &[Felt]| -> Vec<Felt> {
            a.iter().zip(b).map(|(&x, &y)| f.add(x, f.mul(s, y))).collect()
        };
        for scalar in [f.one(), f.zeta()] {
            for i in 0..cols.len() {
                for j in i + 1..cols.len() {
                    let v = comb(&cols[i], scalar, &cols[j]);
                    if !q(&v).is_zero() {
                        return Some(v);
                    }
                }
            }
        }
        for _ in 0..10_000 {
            let mut v = vec![f.zero(); self.dim()];
            for c in cols {
                v = comb(&v, f.random(rng), c);
            }
            if !q(&v).is_zero() {
                return Some(v);
            }
        }
        None
    }

    /// Case U: orthonormal basis of `span S`.
    pub fn orthonormalize(&self, s: &Mat) -> Result<Mat> {
        self.orthonormalize_seeded(s, DEFAULT_SEED)
    }

    pub fn orthonormalize_seeded(&self, s: &Mat, seed: u64) -> Result<Mat> {
        if self.case != Case::U {
            return Err(Error::CaseMismatch("U"));
        }
        let f = &self.field;
        let b = s.column_space();
        let mut rest: Vec<Vec<Felt>> = (0..b.cols()).map(|j| b.column(j)).collect();
        let mut out: Vec<Vec<Felt>> = Vec::new();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        while !rest.is_empty() {
            let v = self
                .find_nonisotropic(&rest, &mut rng)
                .ok_or(Error::DegenerateSpan)?;
            let scale = f.solve_norm(self.quad(&v)?)?;
            let inv = f.inv(scale).expect("nonzero norm");
            let v: Vec<Felt> = v.iter().map(|&x| f.mul(x, inv)).collect();
            // b <- b - <v, b> v keeps span(rest) ⊕ span(v) and makes rest ⊥ v
            let mut next = Vec::new();
            for r in &rest {
                let c = self.form_eval(&v, r)?;
                let w: Vec<Felt> = r
                    .iter()
                    .zip(&v)
                    .map(|(&x, &y)| f.sub(x, f.mul(c, y)))
                    .collect();
                next.push(w);
            }
            // exactly one vector of `next` became dependent; drop it
            rest = independent_subset(f, self.dim(), &next);
            out.push(v);
            if out.len() + rest.len() != b.cols() {
                return Err(Error::DegenerateSpan);
            }
        }
        Mat::from_columns(f, self.dim(), &out)
    }

    /// Orthogonal basis of `span S` (Case O or U), as vectors with their `Q` values.
    fn orthogonal_basis(&self, s: &Mat) -> Result<Vec<(Vec<Felt>, Felt)>> {
        let f = &self.field;
        let b = s.column_space();
        let mut rest: Vec<Vec<Felt>> = (0..b.cols()).map(|j| b.column(j)).collect();
        let mut out = Vec::new();
        let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
        while !rest.is_empty() {
            let v = self
                .find_nonisotropic(&rest, &mut rng)
                .ok_or(Error::DegenerateSpan)?;
            let qv = self.quad(&v)?;
            let qinv = f.inv(qv).expect("nonisotropic");
            let mut next = Vec::new();
            for r in &rest {
                let c = f.mul(self.form_eval(&v, r)?, qinv);
                next.push(
                    r.iter()
                        .zip(&v)
                        .map(|(&x, &y)| f.sub(x, f.mul(c, y)))
                        .collect(),
                );
            }
            rest = independent_subset(f, self.dim(), &next);
            out.push((v, qv));
            if out.len() + rest.len() != b.cols() {
                return Err(Error::DegenerateSpan);
            }
        }
        Ok(out)
    }

    /// Case O: basis `T` of `span S` with `T* M T = target`.
    ///
    /// Both forms are brought to `diag(1, ..., 1, delta)`; a basis exists
    /// exactly when the two `delta`s share a square class.
    pub fn basis_with_gram(&self, s: &Mat, target: &Mat) -> Result<Mat> {
        if self.case != Case::O {
            return Err(Error::CaseMismatch("O"));
        }
        let f = &self.field;
        let k = target.rows();
        if !target.is_square() || target.transpose() != *target {
            return Err(Error::NotSymmetric);
        }
        let (src, src_delta) = self.diag_one_basis(s)?;
        if src.cols() != k {
            return Err(Error::RankMismatch {
                rank: src.cols(),
                dim: k,
            });
        }
        let tspace = FormSpace::new(Case::O, target.clone()).map_err(|e| match e {
            Error::Invalid(_) => Error::DegenerateSpan,
            other => other,
        })?;
        let (tgt, tgt_delta) = tspace.diag_one_basis(&Mat::identity(f, k))?;
        let ratio = f.div(tgt_delta, src_delta).expect("nonzero");
        let s = f.sqrt(ratio).ok_or(Error::DiscriminantMismatch)?;
        let mut src = src;
        for i in 0..self.dim() {
            let v = src.get(i, k - 1);
            src.set(i, k - 1, f.mul(v, s));
        }
        let tinv = tgt.inverse().expect("basis");
        Ok(src.mul(&tinv))
    }

    /// Basis of `span S` whose Gram is `diag(1, ..., 1, delta)`.
    fn diag_one_basis(&self, s: &Mat) -> Result<(Mat, Felt)> {
        let f = &self.field;
        let ob = self.orthogonal_basis(s)?;
        let d = self.dim();
        if ob.is_empty() {
            return Ok((Mat::zeros(f, d, 0), f.one()));
        }
        let mut vecs: Vec<Vec<Felt>> = Vec::new();
        let (mut cur, mut beta) = ob[0].clone();
        for (u2, b2) in ob.into_iter().skip(1) {
            let (x, y) = represent(f, beta, b2, f.one()).ok_or(Error::DegenerateSpan)?;
            let v: Vec<Felt> = cur
                .iter()
                .zip(&u2)
                .map(|(&a, &b)| f.add(f.mul(x, a), f.mul(y, b)))
                .collect();
            let c1 = f.neg(f.mul(b2, y));
            let c2 = f.mul(beta, x);
            let w: Vec<Felt> = cur
                .iter()
                .zip(&u2)
                .map(|(&a, &b)| f.add(f.mul(c1, a), f.mul(c2, b)))
                .collect();
            vecs.push(v);
            beta = f.mul(beta, b2);
            cur = w;
        }
        vecs.push(cur);
        Ok((Mat::from_columns(f, d, &vecs)?, beta))
    }

    fn line_count(&self) -> u128 {
        (self.field.order() as u128).saturating_pow(self.dim() as u32)
    }

    /// Normalized representatives of isotropic lines, sorted by log encoding.
    pub fn enumerate_isotropic_lines(&self) -> Result<Vec<Vec<Felt>>> {
        self.enumerate_isotropic_lines_capped(DEFAULT_ENUM_CAP)
    }

    pub fn enumerate_isotropic_lines_capped(&self, cap: u128) -> Result<Vec<Vec<Felt>>> {
        let lines = self.normalized_vectors(cap)?;
        Ok(lines
            .into_iter()
            .filter(|v| self.quad(v).expect("length d").is_zero())
            .collect())
    }

    /// One unit vector per nonisotropic line (Case U).
    pub fn enumerate_unit_lines(&self) -> Result<Vec<Vec<Felt>>> {
        self.enumerate_unit_lines_capped(DEFAULT_ENUM_CAP)
    }

    pub fn enumerate_unit_lines_capped(&self, cap: u128) -> Result<Vec<Vec<Felt>>> {
        if self.case != Case::U {
            return Err(Error::CaseMismatch("U"));
        }
        let f = &self.field;
        let mut out = Vec::new();
        for v in self.normalized_vectors(cap)? {
            let qv = self.quad(&v)?;
            if qv.is_zero() {
                continue;
            }
            let s = f.inv(f.solve_norm(qv)?).expect("nonzero");
            out.push(v.iter().map(|&x| f.mul(x, s)).collect());
        }
        Ok(out)
    }

    /// Every vector whose leftmost nonzero coordinate is 1, sorted by the
    /// coordinatewise key `0 -> 0`, `z^k -> k + 1`.
    fn normalized_vectors(&self, cap: u128) -> Result<Vec<Vec<Felt>>> {
        let size = self.line_count();
        if size > cap {
            return Err(Error::EnumerationTooLarge { size, cap });
        }
        let f = &self.field;
        let d = self.dim();
        let n = f.order();
        // digit t encodes 0 for t = 0 and z^{t-1} otherwise; lexicographic digit
        // order is the required sort order.
        let digit = |t: u64| if t == 0 { f.zero() } else { f.zeta_pow(t - 1) };
        let mut out = Vec::new();
        for lead in (0..d).rev() {
            let tail = d - lead - 1;
            let total = n.pow(tail as u32);
            for idx in 0..total {
                let mut v = vec![f.zero(); d];
                v[lead] = f.one();
                let mut x = idx;
                for pos in (lead + 1..d).rev() {
                    v[pos] = digit(x % n);
                    x /= n;
                }
                out.push(v);
            }
        }
        Ok(out)
    }
}

/// Greedy maximal independent subset, preserving order.
fn independent_subset(f: &Field, d: usize, vs: &[Vec<Felt>]) -> Vec<Vec<Felt>> {
    let m = Mat::from_columns(f, d, vs).expect("lengths");
    let (_, piv) = m.rref_with_pivots();
    piv.into_iter().map(|j| vs[j].clone()).collect()
}

/// `(x, y)` with `b1 x^2 + b2 y^2 = gamma`, by search over `x`.
pub fn represent(f: &Field, b1: Felt, b2: Felt, gamma: Felt) -> Option<(Felt, Felt)> {
    let b2inv = f.inv(b2)?;
    for x in f.elements() {
        let rest = f.mul(f.sub(gamma, f.mul(b1, f.mul(x, x))), b2inv);
        if let Some(y) = f.sqrt(rest) {
            return Some((x, y));
        }
    }
    None
}

/// `(x, y)` with `x^2 + y^2 = beta`.
pub fn rep_two_squares(f: &Field, beta: Felt) -> Option<(Felt, Felt)> {
    represent(f, f.one(), f.one(), beta)
}

/// `q^{d-1}(q^d + (-1)^{d+1})/(q+1)`, the number of nonisotropic lines in the
/// complex model of dimension `d` over `F_{q^2}`.
pub fn unit_line_count(q: u64, d: u32) -> u128 {
    let q = q as i128;
    let sign: i128 = if d % 2 == 1 { 1 } else { -1 };
    (q.pow(d - 1) * (q.pow(d) + sign) / (q + 1)) as u128
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldCtx;
    use rand::Rng;

    fn f9() -> Field {
        FieldCtx::new(3, 2, None).unwrap()
    }

    fn brute_lines(space: &FormSpace, pred: impl Fn(Felt) -> bool) -> usize {
        // count nonzero vectors with the property, divide by line size
        let f = space.field();
        let d = space.dim();
        let n = f.order();
        let mut count = 0usize;
        for idx in 1..n.pow(d as u32) {
            let mut x = idx;
            let v: Vec<Felt> = (0..d)
                .map(|_| {
                    let r = (x % n) as u32;
                    x /= n;
                    f.from_raw(r).unwrap()
                })
                .collect();
            if pred(space.quad(&v).unwrap()) {
                count += 1;
            }
        }
        count / (n as usize - 1)
    }

    #[test]
    fn form_eval_examples() {
        let f = f9();
        let c = FormSpace::complex_model(&f, 2).unwrap();
        let e1 = vec![f.one(), f.zero()];
        assert_eq!(c.form_eval(&e1, &e1).unwrap(), f.one());
        // 1 + 2 zeta
        let a = f.add(f.one(), f.mul(f.from_int(2), f.zeta()));
        assert_eq!(a, f.sub(f.from_int(-1), f.zeta_pow(2)));
        let u = vec![a, f.one()];
        assert!(c.quad(&u).unwrap().is_zero());

        let f5 = FieldCtx::new(5, 1, None).unwrap();
        let r = FormSpace::real_model(&f5, 2).unwrap();
        let u = vec![f5.one(), f5.from_int(2)];
        assert!(r.quad(&u).unwrap().is_zero());
        assert!(matches!(
            r.form_eval(&u, &[f5.one()]),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn discriminant_examples() {
        let f = f9();
        assert!(FormSpace::real_model(&f, 3).unwrap().discriminant().unwrap().square);
        let m = Mat::diag(&f, &[f.one(), f.zeta()]);
        let w = FormSpace::new(Case::O, m).unwrap();
        assert!(!w.discriminant().unwrap().square);
        let f5 = FieldCtx::new(5, 1, None).unwrap();
        let w = FormSpace::new(Case::O, Mat::diag(&f5, &[f5.from_int(2), f5.from_int(2)])).unwrap();
        assert!(w.discriminant().unwrap().square);
        assert_eq!(
            FormSpace::complex_model(&f, 2).unwrap().discriminant(),
            Err(Error::CaseMismatch("O"))
        );
    }

    #[test]
    fn adjoint_identities() {
        let f = f9();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let v3 = FormSpace::complex_model(&f, 3).unwrap();
        let v2 = FormSpace::complex_model(&f, 2).unwrap();
        for _ in 0..20 {
            let a = Mat::random(&f, 3, 2, &mut rng);
            let adj = FormSpace::adjoint(&a, &v2, &v3).unwrap();
            assert_eq!(adj, a.conj_transpose());
            // Ker A† = (Im A)^⊥ by dimension and containment
            let ker = adj.kernel_basis();
            assert_eq!(ker.cols(), 3 - a.rank());
            assert!(a.conj_transpose().mul(&ker).is_zero());
        }
        // nonstandard forms: <Au, v> = <u, A†v>
        let m = Mat::diag(&f, &[f.zeta_pow(4), f.one(), f.from_int(2)]);
        let w3 = FormSpace::new(Case::U, m).unwrap();
        let n = Mat::diag(&f, &[f.one(), f.from_int(2)]);
        let w2 = FormSpace::new(Case::U, n).unwrap();
        for _ in 0..20 {
            let a = Mat::random(&f, 3, 2, &mut rng);
            let adj = FormSpace::adjoint(&a, &w2, &w3).unwrap();
            let u: Vec<Felt> = (0..2).map(|_| f.random(&mut rng)).collect();
            let v: Vec<Felt> = (0..3).map(|_| f.random(&mut rng)).collect();
            assert_eq!(
                w3.form_eval(&a.apply(&u), &v).unwrap(),
                w2.form_eval(&u, &adj.apply(&v)).unwrap()
            );
        }
        assert_eq!(
            FormSpace::adjoint(&Mat::identity(&f, 3), &w3, &w3).unwrap(),
            Mat::identity(&f, 3)
        );
    }

    #[test]
    fn radical_examples() {
        let f3 = FieldCtx::new(3, 1, None).unwrap();
        let r = FormSpace::real_model(&f3, 3).unwrap();
        let s = Mat::from_fn(&f3, 3, 1, |_, _| f3.one());
        assert_eq!(r.radical(&s).cols(), 1);
        assert_eq!(r.radical(&Mat::identity(&f3, 3)).cols(), 0);

        let f = f9();
        let c = FormSpace::complex_model(&f, 6).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let s = Mat::random(&f, 6, 4, &mut rng);
            let (u, rad) = c.complement_of_radical(&s);
            assert_eq!(u.cols() + rad.cols(), s.rank());
            assert_eq!(u.hstack(&rad).rank(), s.rank());
            assert!(c.gram_of(&s).mul(&Mat::identity(&f, 4)).rank() <= 4);
            // radical vectors are orthogonal to all of span S
            assert!(c.star(&s).mul(&rad).is_zero());
        }
    }

    #[test]
    fn orthonormalize_examples() {
        let f = f9();
        let c = FormSpace::complex_model(&f, 2).unwrap();
        assert_eq!(c.orthonormalize(&Mat::identity(&f, 2)).unwrap(), Mat::identity(&f, 2));
        // (1, zeta) is isotropic since N(zeta) = zeta^4 = -1; (1, zeta^2) is not,
        // because zeta^2 has norm 1.
        let z2 = f.zeta_pow(2);
        assert_eq!(c.quad(&[f.one(), z2]).unwrap(), f.from_int(2));
        let s = Mat::from_rows(&f, &[vec![f.one(), f.one()], vec![f.zeta(), f.neg(f.zeta())]]).unwrap();
        assert!(c.quad(&s.column(0)).unwrap().is_zero());
        assert!(c.quad(&s.column(1)).unwrap().is_zero());
        let t = c.orthonormalize(&s).unwrap();
        assert_eq!(t.cols(), 2);
        assert!(c.gram_of(&t).is_identity());
        // a totally isotropic line is degenerate
        let iso = s.select_cols(&[0]);
        assert_eq!(c.orthonormalize(&iso), Err(Error::DegenerateSpan));
    }

    #[test]
    fn basis_with_gram_examples() {
        // Principal 2x2 block of the Mercedes-Benz Gram over F_5 is [[1,2],[2,1]],
        // det = 1 - 4 = -3 = 2, a nonresidue mod 5 (squares are 1, 4).
        let f5 = FieldCtx::new(5, 1, None).unwrap();
        let r = FormSpace::real_model(&f5, 2).unwrap();
        let block = Mat::from_fn(&f5, 2, 2, |i, j| f5.from_int(if i == j { 1 } else { 2 }));
        assert_eq!(block.det().unwrap(), f5.from_int(2));
        assert!(!f5.is_square(f5.from_int(2)));
        assert_eq!(
            r.basis_with_gram(&Mat::identity(&f5, 2), &block),
            Err(Error::DiscriminantMismatch)
        );
        // same block over F_11: det = -3 = 8, and 8 is not a square mod 11 either,
        // but diag(1, 8) realizes it once the ambient form does.
        let f11 = FieldCtx::new(11, 1, None).unwrap();
        let blk11 = Mat::from_fn(&f11, 2, 2, |i, j| f11.from_int(if i == j { 1 } else { 2 }));
        let amb = FormSpace::new(Case::O, Mat::diag(&f11, &[f11.one(), f11.from_int(8)])).unwrap();
        let t = amb.basis_with_gram(&Mat::identity(&f11, 2), &blk11).unwrap();
        assert_eq!(amb.gram_of(&t), blk11);
    }

    #[test]
    fn basis_with_gram_random() {
        let f = FieldCtx::new(7, 1, None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let r = FormSpace::real_model(&f, 4).unwrap();
        let mut hits = 0;
        for _ in 0..100 {
            let a = Mat::random(&f, 4, 4, &mut rng);
            let target = a.transpose().mul(&a);
            if target.rank() < 4 {
                continue;
            }
            let t = r.basis_with_gram(&Mat::identity(&f, 4), &target).unwrap();
            assert_eq!(r.gram_of(&t), target);
            hits += 1;
            // multiply by a nonsquare scalar in one coordinate to break the class
            let mut bad = target.clone();
            let nz = f.zeta();
            for j in 0..4 {
                let v = bad.get(0, j);
                bad.set(0, j, f.mul(v, nz));
            }
            for i in 0..4 {
                let v = bad.get(i, 0);
                bad.set(i, 0, f.mul(v, nz));
            }
            // scaling a basis vector by zeta changes det by zeta^2: still square class
            let t = r.basis_with_gram(&Mat::identity(&f, 4), &bad).unwrap();
            assert_eq!(r.gram_of(&t), bad);
            let worse = Mat::diag(&f, &[f.one(), f.one(), f.one(), f.zeta()]);
            assert_eq!(
                r.basis_with_gram(&Mat::identity(&f, 4), &worse),
                Err(Error::DiscriminantMismatch)
            );
        }
        assert!(hits > 20);
    }

    #[test]
    fn isotropic_line_counts() {
        let f = f9();
        let c2 = FormSpace::complex_model(&f, 2).unwrap();
        let lines = c2.enumerate_isotropic_lines().unwrap();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines.len(), brute_lines(&c2, |x| x.is_zero()));
        let c3 = FormSpace::complex_model(&f, 3).unwrap();
        assert_eq!(
            c3.enumerate_isotropic_lines().unwrap().len(),
            brute_lines(&c3, |x| x.is_zero())
        );
        let f5 = FieldCtx::new(5, 1, None).unwrap();
        let r = FormSpace::real_model(&f5, 2).unwrap();
        assert_eq!(r.enumerate_isotropic_lines().unwrap().len(), 2);
        let big = FormSpace::complex_model(&f, 9).unwrap();
        assert!(matches!(
            big.enumerate_isotropic_lines(),
            Err(Error::EnumerationTooLarge { .. })
        ));
    }

    #[test]
    fn isotropic_lines_f9_dim5() {
        let f = f9();
        let c = FormSpace::complex_model(&f, 5).unwrap();
        let lines = c.enumerate_isotropic_lines().unwrap();
        assert_eq!(lines.len(), brute_lines(&c, |x| x.is_zero()));
        assert_eq!(lines.len(), 2440);
        // sorted by log encoding
        let key = |v: &Vec<Felt>| -> Vec<u64> {
            v.iter().map(|&x| f.log(x).map_or(0, |l| l + 1)).collect()
        };
        assert!(lines.windows(2).all(|w| key(&w[0]) < key(&w[1])));
    }

    #[test]
    fn unit_line_counts() {
        for (p, e, d) in [(2u64, 1u32, 2usize), (2, 1, 3), (3, 1, 2), (3, 1, 3), (2, 1, 1), (5, 1, 1)] {
            let f = FieldCtx::new(p, 2 * e, None).unwrap();
            let q = p.pow(e);
            let c = FormSpace::complex_model(&f, d).unwrap();
            let lines = c.enumerate_unit_lines().unwrap();
            assert_eq!(lines.len() as u128, unit_line_count(q, d as u32));
            assert_eq!(lines.len(), brute_lines(&c, |x| !x.is_zero()));
            assert!(lines.iter().all(|v| c.quad(v).unwrap() == f.one()));
        }
        assert_eq!(unit_line_count(2, 2), 2);
        assert_eq!(unit_line_count(2, 3), 12);
        assert_eq!(unit_line_count(7, 1), 1);
    }

    #[test]
    fn rep_two_squares_works() {
        for p in [3u64, 5, 7, 11, 13] {
            let f = FieldCtx::new(p, 1, None).unwrap();
            for beta in f.elements() {
                let (x, y) = rep_two_squares(&f, beta).unwrap();
                assert_eq!(f.add(f.mul(x, x), f.mul(y, y)), beta);
            }
        }
    }

    #[test]
    fn complement_dimension_and_isotropic_bound() {
        let f = FieldCtx::new(5, 2, None).unwrap();
        let c = FormSpace::complex_model(&f, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..30 {
            let k = rng.gen_range(1..=4);
            let s = Mat::random(&f, 4, k, &mut rng);
            let w = s.column_space();
            let perp = c.star(&w).kernel_basis();
            assert_eq!(w.cols() + perp.cols(), 4);
        }
        // a totally isotropic subspace has dimension at most d/2
        let iso = c.enumerate_isotropic_lines().unwrap();
        let mut basis: Vec<Vec<Felt>> = vec![iso[0].clone()];
        for v in &iso[1..] {
            let mut trial = basis.clone();
            trial.push(v.clone());
            let m = Mat::from_columns(&f, 4, &trial).unwrap();
            if m.rank() == trial.len() && c.gram_of(&m).is_zero() {
                basis = trial;
            }
        }
        assert!(basis.len() <= 2);
    }
}
