//! Frames, their Gram matrices, ETF classification, Gram factorization and
//! Naimark complements.

use crate::error::{Error, Result};
use crate::field::{Felt, Field};
use crate::form::{rep_two_squares, Case, FormSpace, DEFAULT_SEED};
use crate::matrix::Mat;
use serde::{Deserialize, Serialize};

/// Boolean outcomes of [`FrameRecord::classify`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flags {
    pub is_frame: bool,
    pub is_tight: bool,
    pub is_equal_norm: bool,
    pub is_equiangular: bool,
    pub is_etf: bool,
    pub is_nondegenerate: bool,
    pub gerzon_equality: bool,
}

/// Certified parameters of a frame. `a`, `b`, `c` are present only when the
/// corresponding property holds; `b` is also absent for a single vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ETFParams {
    pub a: Option<Felt>,
    pub b: Option<Felt>,
    pub c: Option<Felt>,
    pub d: usize,
    pub n: usize,
    pub flags: Flags,
}

impl ETFParams {
    /// `a(c - a) = (n - 1) b`; false when any of `a`, `b`, `c` is missing.
    pub fn welch_check(&self, f: &Field) -> bool {
        match (self.a, self.b, self.c) {
            (Some(a), Some(b), Some(c)) => {
                f.mul(a, f.sub(c, a)) == f.mul(f.from_int(self.n as i64 - 1), b)
            }
            (Some(a), None, Some(c)) if self.n == 1 => f.mul(a, f.sub(c, a)).is_zero(),
            _ => false,
        }
    }

    /// `n a = d c`; false unless both `a` and `c` are present.
    pub fn trace_check(&self, f: &Field) -> bool {
        match (self.a, self.c) {
            (Some(a), Some(c)) => {
                f.mul(f.from_int(self.n as i64), a) == f.mul(f.from_int(self.d as i64), c)
            }
            _ => false,
        }
    }

    /// `(a,b,c)` rendered with `0`/`z^k` entries, or `None` if not an ETF.
    pub fn triple(&self, f: &Field) -> Option<(String, String, String)> {
        if !self.flags.is_etf {
            return None;
        }
        let show = |x: Option<Felt>| x.map_or("-".to_string(), |v| f.format(v));
        Some((show(self.a), show(self.b), show(self.c)))
    }
}

/// `d + (k/2)(d^2 - d)` with `k = 1` (Case O) or `2` (Case U).
pub fn gerzon_bound(d: usize, case: Case) -> usize {
    d + case.k() * (d * d - d) / 2
}

/// A synthesis matrix together with its ambient geometry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameRecord {
    pub phi: Mat,
    pub space: FormSpace,
}

impl FrameRecord {
    pub fn new(phi: Mat, space: FormSpace) -> Result<FrameRecord> {
        if phi.rows() != space.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{} rows for a {}-dimensional space",
                phi.rows(),
                space.dim()
            )));
        }
        if phi.field().id() != space.field().id() {
            return Err(Error::FieldMismatch);
        }
        Ok(FrameRecord { phi, space })
    }

    /// Frame in the standard model of the given case.
    pub fn standard(phi: Mat, case: Case) -> Result<FrameRecord> {
        let space = FormSpace::standard(case, phi.field(), phi.rows())?;
        FrameRecord::new(phi, space)
    }

    pub fn field(&self) -> &Field {
        self.space.field()
    }
    pub fn d(&self) -> usize {
        self.phi.rows()
    }
    pub fn n(&self) -> usize {
        self.phi.cols()
    }

    /// `G = Φ* M Φ`.
    pub fn gram(&self) -> Mat {
        self.space.gram_of(&self.phi)
    }

    /// Analysis operator `Φ† = Φ* M`.
    pub fn analysis(&self) -> Mat {
        let s = self.space.star(&self.phi);
        if self.space.is_standard() {
            s
        } else {
            s.mul(self.space.gram())
        }
    }

    /// Frame operator `Φ Φ†`.
    pub fn frame_operator(&self) -> Mat {
        self.phi.mul(&self.analysis())
    }

    pub fn classify(&self) -> ETFParams {
        let d = self.d();
        let n = self.n();
        let mut flags = Flags {
            is_frame: self.phi.rank() == d,
            ..Flags::default()
        };
        let s = self.frame_operator();
        let c = s.scalar_value().filter(|_| flags.is_frame);
        flags.is_tight = c.is_some();
        flags.is_nondegenerate = flags.is_frame && s.rank() == d;

        let g = self.gram();
        let a = if n == 0 {
            None
        } else {
            let a0 = g.get(0, 0);
            (0..n).all(|i| g.get(i, i) == a0).then_some(a0)
        };
        flags.is_equal_norm = a.is_some();

        let (equi, b) = equiangularity(&g);
        flags.is_equiangular = equi;
        flags.is_etf = flags.is_tight && flags.is_equal_norm && flags.is_equiangular;
        flags.gerzon_equality = n == gerzon_bound(d, self.space.case());
        if let Some(c0) = c {
            if c0.is_zero() {
                assert!(n >= 2 * d, "0-tight frame with n < 2d contradicts the isotropic bound");
            }
        }
        ETFParams {
            a,
            b,
            c,
            d,
            n,
            flags,
        }
    }
}

/// Whether all off-diagonal products `G_ij G_ji` agree, and their common value.
fn equiangularity(g: &Mat) -> (bool, Option<Felt>) {
    let f = g.field();
    let n = g.rows();
    if n < 2 {
        return (true, None);
    }
    let b0 = f.rmul(g.rget(0, 1), g.rget(1, 0));
    for i in 0..n {
        for j in i + 1..n {
            if f.rmul(g.rget(i, j), g.rget(j, i)) != b0 {
                return (false, None);
            }
        }
    }
    (true, Some(f.wrap(b0)))
}

/// Upper-triangular `A` with unit diagonal and `(a_i, a_j) = G_ij` for `i < j`.
fn triangular_part(g: &Mat, sigma: impl Fn(Felt) -> Felt) -> Mat {
    let f = g.field();
    let n = g.rows();
    let mut a = Mat::identity(f, n);
    for j in 0..n {
        for i in 0..j {
            let mut v = g.get(i, j);
            for k in 0..i {
                v = f.sub(v, f.mul(sigma(a.get(k, i)), a.get(k, j)));
            }
            a.set(i, j, v);
        }
    }
    a
}

fn require_square(g: &Mat) -> Result<()> {
    if g.is_square() {
        Ok(())
    } else {
        Err(Error::NotSquare {
            rows: g.rows(),
            cols: g.cols(),
        })
    }
}

/// Factors a self-adjoint `G` over `F_{q^2}` as `Φ* Φ` with `Φ` of full row
/// rank in the complex model.
pub fn factor_gram_unitary(g: &Mat) -> Result<FrameRecord> {
    factor_gram_unitary_seeded(g, DEFAULT_SEED)
}

/// [`factor_gram_unitary`] with an explicit seed for the random fallback of
/// the orthonormalization step.
pub fn factor_gram_unitary_seeded(g: &Mat, seed: u64) -> Result<FrameRecord> {
    require_square(g)?;
    let f = g.field().clone();
    f.q()?;
    if g.conj_transpose() != *g {
        return Err(Error::NotSelfAdjoint);
    }
    let n = g.rows();
    let conj = |x: Felt| f.conj(x).expect("Case U field");
    let a = triangular_part(g, conj);
    let mut b = Mat::zeros(&f, n, n);
    for i in 0..n {
        let col = a.column(i);
        let norm = col.iter().fold(f.zero(), |acc, &x| f.add(acc, f.mul(conj(x), x)));
        let beta = f.sub(g.get(i, i), norm);
        b.set(i, i, f.solve_norm(beta)?);
    }
    let psi = a.vstack(&b);
    let big = FormSpace::complex_model(&f, 2 * n)?;
    let (u, _rad) = big.complement_of_radical(&psi);
    let o = big.orthonormalize_seeded(&u, seed)?;
    // columns of O lie in U and are orthogonal to rad(Im Ψ), so O* ψ_j are the
    // coordinates of the U-component of ψ_j in an orthonormal basis
    let phi = o.conj_transpose().mul(&psi);
    let space = FormSpace::complex_model(&f, phi.rows())?;
    FrameRecord::new(phi, space)
}

/// `Ψ ∈ F_q^{3n×n}` with `Ψ^T Ψ = G` (Case O analog of the unitary lift).
fn orthogonal_lift(g: &Mat) -> Result<Mat> {
    let f = g.field().clone();
    let n = g.rows();
    let a = triangular_part(g, |x| x);
    let mut b = Mat::zeros(&f, 2 * n, n);
    for j in 0..n {
        let col = a.column(j);
        let norm = col.iter().fold(f.zero(), |acc, &x| f.add(acc, f.mul(x, x)));
        let beta = f.sub(g.get(j, j), norm);
        let (x, y) = rep_two_squares(&f, beta).ok_or(Error::DegenerateSpan)?;
        b.set(2 * j, j, x);
        b.set(2 * j + 1, j, y);
    }
    Ok(a.vstack(&b))
}

/// Pivot columns of `G` and the determinant of the matching basic submatrix.
pub fn basic_submatrix(g: &Mat) -> (Vec<usize>, Felt) {
    let (_, piv) = g.rref_with_pivots();
    let det = g.submatrix(&piv, &piv).det().expect("square");
    (piv, det)
}

fn check_symmetric(g: &Mat) -> Result<()> {
    require_square(g)?;
    if g.transpose() != *g {
        return Err(Error::NotSymmetric);
    }
    if g.field().characteristic() == 2 {
        return Err(Error::Invalid(
            "orthogonal geometry requires odd characteristic".into(),
        ));
    }
    Ok(())
}

/// Factors a symmetric `G` as the Gram matrix of a frame for `target`.
pub fn factor_gram_orthogonal(g: &Mat, target: &FormSpace) -> Result<FrameRecord> {
    check_symmetric(g)?;
    if target.case() != Case::O {
        return Err(Error::CaseMismatch("O"));
    }
    let f = g.field().clone();
    let (piv, det) = basic_submatrix(g);
    if piv.len() != target.dim() {
        return Err(Error::RankMismatch {
            rank: piv.len(),
            dim: target.dim(),
        });
    }
    let d = target.dim();
    if d > 0 && f.is_square(det) != target.discriminant()?.square {
        return Err(Error::DiscriminantMismatch);
    }
    let psi = orthogonal_lift(g)?;
    let big = FormSpace::real_model(&f, psi.rows())?;
    let (u, _rad) = big.complement_of_radical(&psi);
    let m_u = big.gram_of(&u);
    let t = target.basis_with_gram(&Mat::identity(&f, d), &m_u)?;
    let m_u_inv = m_u.inverse().ok_or(Error::DegenerateSpan)?;
    let phi = t.mul(&m_u_inv).mul(&u.transpose().mul(&psi));
    FrameRecord::new(phi, target.clone())
}

/// Factors a symmetric `G` into whichever orthogonal geometry its basic
/// submatrix allows: the real model when `det G_b` is a square, otherwise
/// `diag(1, ..., 1, zeta)`.
pub fn factor_gram_orthogonal_auto(g: &Mat) -> Result<FrameRecord> {
    check_symmetric(g)?;
    let f = g.field().clone();
    let (piv, det) = basic_submatrix(g);
    let d = piv.len();
    let mut m = Mat::identity(&f, d);
    if d > 0 && !f.is_square(det) {
        m.set(d - 1, d - 1, f.zeta());
    }
    factor_gram_orthogonal(g, &FormSpace::new(Case::O, m)?)
}

/// Tight frame with Gram `cI - G` (Case U) or `a(cI - G)` (Case O).
pub fn naimark_complement(fr: &FrameRecord, a_scale: Option<Felt>) -> Result<FrameRecord> {
    let params = fr.classify();
    let c = params.c.ok_or(Error::NotTight)?;
    if c.is_zero() {
        return Err(Error::ZeroFrameConstant);
    }
    let f = fr.field().clone();
    let n = fr.n();
    let case = fr.space.case();
    if n == fr.d() {
        let space = FormSpace::standard(case, &f, 0)?;
        return FrameRecord::new(Mat::zeros(&f, 0, n), space);
    }
    let h = Mat::identity(&f, n).scale(c).sub(&fr.gram());
    match case {
        Case::U => factor_gram_unitary(&h),
        Case::O => {
            let a = a_scale.unwrap_or(f.one());
            if a.is_zero() {
                return Err(Error::Invalid("Naimark scale must be nonzero".into()));
            }
            factor_gram_orthogonal_auto(&h.scale(a))
        }
    }
}
