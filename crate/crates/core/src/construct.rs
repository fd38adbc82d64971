//! Sources of tight frames and ETFs: DFT and Hadamard matrices, harmonic
//! frames from modular difference sets, Gabor frames, the Zauner family over
//! `F_9`, sphere NTFs, and a small catalog of fixed exemplars.

use crate::error::{Error, Result};
use crate::field::{Felt, Field, FieldCtx};
use crate::form::{Case, FormSpace};
use crate::frame::FrameRecord;
use crate::matrix::Mat;

/// `[w^{ij}]` with `w = root_of_unity(n)`.
pub fn dft_matrix(n: usize, f: &Field) -> Result<Mat> {
    let w = f.root_of_unity(n as u64)?;
    Ok(dft_with_root(n, f, w))
}

fn dft_with_root(n: usize, f: &Field, w: Felt) -> Mat {
    Mat::from_fn(f, n, n, |i, j| f.pow(w, ((i * j) % n) as u64))
}

/// Square, unimodular entries, and `H* H = m I`.
pub fn is_hadamard(h: &Mat) -> bool {
    let f = h.field();
    if !h.is_square() || f.q().is_err() {
        return false;
    }
    let unimodular = (0..h.rows()).all(|i| {
        (0..h.cols()).all(|j| f.norm_to_base(h.get(i, j)).ok() == Some(f.one()))
    });
    unimodular && h.conj_transpose().mul(h).scalar_value() == Some(f.from_int(h.rows() as i64))
}

/// Kronecker product of Hadamard factors.
pub fn hadamard_tensor(factors: &[Mat]) -> Result<Mat> {
    let (first, rest) = factors
        .split_first()
        .ok_or_else(|| Error::Invalid("no factors".into()))?;
    if !factors.iter().all(is_hadamard) {
        return Err(Error::NotHadamard);
    }
    Ok(rest.iter().fold(first.clone(), |acc, m| acc.kron(m)))
}

/// A subset of `Z/nZ` together with the modulus `k` for difference counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffSet {
    n: usize,
    d: Vec<usize>,
    k: u64,
}

impl DiffSet {
    pub fn new(n: usize, mut d: Vec<usize>, k: u64) -> Result<DiffSet> {
        if n == 0 || k == 0 {
            return Err(Error::Invalid("group order and modulus must be positive".into()));
        }
        d.sort_unstable();
        if d.windows(2).any(|w| w[0] == w[1]) || d.iter().any(|&x| x >= n) {
            return Err(Error::Invalid("difference set must be distinct residues".into()));
        }
        Ok(DiffSet { n, d, k })
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn elements(&self) -> &[usize] {
        &self.d
    }
    pub fn k(&self) -> u64 {
        self.k
    }

    /// `c(g) = |{(a,b) in D^2 : a - b = g}|` as plain integers.
    pub fn difference_counts(&self) -> Vec<u64> {
        let mut c = vec![0u64; self.n];
        for &a in &self.d {
            for &b in &self.d {
                c[(a + self.n - b) % self.n] += 1;
            }
        }
        c
    }

    /// `Some(lambda)` with `lambda` in `0..k` when `c(g) mod k` is constant off zero.
    pub fn modular_lambda(&self) -> Option<u64> {
        let c = self.difference_counts();
        let mut vals = c.iter().skip(1).map(|&x| x % self.k);
        match vals.next() {
            None => Some(0),
            Some(l) => vals.all(|v| v == l).then_some(l),
        }
    }

    pub fn is_modular_difference_set(&self) -> bool {
        self.modular_lambda().is_some()
    }
}

/// `F_D`: rows of the DFT matrix indexed by `D`, in the complex model.
pub fn harmonic_frame(ds: &DiffSet, f: &Field) -> Result<FrameRecord> {
    let w = f.root_of_unity(ds.n as u64)?;
    let n = ds.n;
    let phi = Mat::from_fn(f, ds.d.len(), n, |i, j| {
        f.pow(w, ((ds.d[i] * j) % n) as u64)
    });
    FrameRecord::standard(phi, Case::U)
}

/// `G = Z/d_1 x ... x Z/d_m` with `T_q`-valued characters.
///
/// Elements are indexed in mixed radix with the first factor most
/// significant, so index order is lexicographic order on tuples.
#[derive(Clone, Debug)]
pub struct GaborGroup {
    factors: Vec<usize>,
    field: Field,
    omegas: Vec<Felt>,
}

impl GaborGroup {
    pub fn new(factors: &[usize], f: &Field) -> Result<GaborGroup> {
        let omegas = factors
            .iter()
            .map(|&dk| f.root_of_unity(dk as u64))
            .collect::<Result<Vec<_>>>()?;
        Ok(GaborGroup {
            factors: factors.to_vec(),
            field: f.clone(),
            omegas,
        })
    }

    /// Group with explicitly chosen generators `w_k` of order `d_k`.
    pub fn with_omegas(factors: &[usize], f: &Field, omegas: Vec<Felt>) -> Result<GaborGroup> {
        if factors.len() != omegas.len() {
            return Err(Error::DimensionMismatch("one generator per factor".into()));
        }
        for (&dk, &w) in factors.iter().zip(&omegas) {
            if w.is_zero() || f.mult_order(w) != dk as u64 {
                return Err(Error::Invalid(format!("generator of order {dk} expected")));
            }
            if f.norm_to_base(w)? != f.one() {
                return Err(Error::Invalid("generator must be unimodular".into()));
            }
        }
        Ok(GaborGroup {
            factors: factors.to_vec(),
            field: f.clone(),
            omegas,
        })
    }

    pub fn factors(&self) -> &[usize] {
        &self.factors
    }
    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn omegas(&self) -> &[Felt] {
        &self.omegas
    }
    /// `d = |G|`.
    pub fn order(&self) -> usize {
        self.factors.iter().product()
    }

    pub fn coords(&self, mut x: usize) -> Vec<usize> {
        let mut c = vec![0; self.factors.len()];
        for (k, &dk) in self.factors.iter().enumerate().rev() {
            c[k] = x % dk;
            x /= dk;
        }
        c
    }

    pub fn index(&self, c: &[usize]) -> usize {
        c.iter()
            .zip(&self.factors)
            .fold(0, |acc, (&ck, &dk)| acc * dk + ck % dk)
    }

    pub fn add(&self, x: usize, y: usize) -> usize {
        let (a, b) = (self.coords(x), self.coords(y));
        let s: Vec<usize> = a.iter().zip(&b).map(|(p, q)| p + q).collect();
        self.index(&s)
    }

    pub fn neg(&self, x: usize) -> usize {
        let a = self.coords(x);
        let s: Vec<usize> = a
            .iter()
            .zip(&self.factors)
            .map(|(&p, &dk)| (dk - p) % dk)
            .collect();
        self.index(&s)
    }

    pub fn sub(&self, x: usize, y: usize) -> usize {
        self.add(x, self.neg(y))
    }

    /// `y^(x) = prod_k w_k^{x_k y_k}`.
    pub fn character(&self, y: usize, x: usize) -> Felt {
        let f = &self.field;
        let (cy, cx) = (self.coords(y), self.coords(x));
        let mut acc = f.one();
        for k in 0..self.factors.len() {
            let e = (cy[k] * cx[k]) % self.factors[k];
            acc = f.mul(acc, f.pow(self.omegas[k], e as u64));
        }
        acc
    }

    /// `(T_y phi)(x) = phi(x - y)`.
    pub fn translate(&self, phi: &[Felt], y: usize) -> Vec<Felt> {
        (0..self.order()).map(|x| phi[self.sub(x, y)]).collect()
    }

    /// `(M_y phi)(x) = y^(x) phi(x)`.
    pub fn modulate(&self, phi: &[Felt], y: usize) -> Vec<Felt> {
        (0..self.order())
            .map(|x| self.field.mul(self.character(y, x), phi[x]))
            .collect()
    }

    pub fn translation_matrix(&self, y: usize) -> Mat {
        let f = &self.field;
        Mat::from_fn(f, self.order(), self.order(), |x, z| {
            if z == self.sub(x, y) {
                f.one()
            } else {
                f.zero()
            }
        })
    }

    pub fn modulation_matrix(&self, y: usize) -> Mat {
        let d = self.order();
        let entries: Vec<Felt> = (0..d).map(|x| self.character(y, x)).collect();
        Mat::diag(&self.field, &entries)
    }
}

/// Columns `T_x M_y phi` in lexicographic `(x, y)` order.
pub fn gabor_frame(g: &GaborGroup, phi: &[Felt]) -> Result<FrameRecord> {
    let f = &g.field;
    let d = g.order();
    if phi.len() != d {
        return Err(Error::DimensionMismatch(format!(
            "fiducial of length {} for a group of order {d}",
            phi.len()
        )));
    }
    if phi.iter().all(|x| x.is_zero()) {
        return Err(Error::ZeroFiducial);
    }
    // chars[y][z] = y^(z)
    let chars: Vec<Vec<Felt>> = (0..d)
        .map(|y| (0..d).map(|z| g.character(y, z)).collect())
        .collect();
    let diffs: Vec<Vec<usize>> = (0..d)
        .map(|z| (0..d).map(|x| g.sub(z, x)).collect())
        .collect();
    let phi_mat = Mat::from_fn(f, d, d * d, |z, col| {
        let (x, y) = (col / d, col % d);
        let w = diffs[z][x];
        f.mul(chars[y][w], phi[w])
    });
    FrameRecord::standard(phi_mat, Case::U)
}

/// `F_9` under the Conway convention.
pub fn f9() -> Field {
    FieldCtx::new(3, 2, None).expect("F_9 is always constructible")
}

/// `(Z/2)^m` over `F_9`.
pub fn zauner_group(m: u32) -> Result<GaborGroup> {
    if m == 0 || m % 2 == 0 {
        return Err(Error::EvenM(m));
    }
    GaborGroup::new(&vec![2; m as usize], &f9())
}

/// `phi(0) = -1 - zeta^2`, `phi(x) = 1` otherwise, over `F_9` with `G = (Z/2)^m`.
pub fn zauner_fiducial(m: u32) -> Result<Vec<Felt>> {
    if m == 0 || m % 2 == 0 {
        return Err(Error::EvenM(m));
    }
    let f = f9();
    let d = 1usize << m;
    let mut v = vec![f.one(); d];
    v[0] = f.sub(f.from_int(-1), f.zeta_pow(2));
    Ok(v)
}

/// The Gabor frame of the Zauner fiducial.
pub fn zauner_frame(m: u32) -> Result<FrameRecord> {
    gabor_frame(&zauner_group(m)?, &zauner_fiducial(m)?)
}

/// One unit vector from each nonisotropic line of the complex model.
pub fn sphere_ntf(d: usize, f: &Field) -> Result<FrameRecord> {
    if d < 2 {
        return Err(Error::Invalid("sphere NTF needs d > 1".into()));
    }
    let space = FormSpace::complex_model(f, d)?;
    let lines = space.enumerate_unit_lines()?;
    let phi = Mat::from_columns(f, d, &lines)?;
    FrameRecord::new(phi, space)
}

/// `(1/2)[[2,-1,-1],[-1,2,-1],[-1,-1,2]]` over an odd-characteristic field.
pub fn mercedes_benz_gram(f: &Field) -> Result<Mat> {
    let half = f
        .inv(f.from_int(2))
        .ok_or_else(|| Error::Invalid("needs odd characteristic".into()))?;
    Ok(Mat::from_fn(f, 3, 3, |i, j| {
        if i == j {
            f.one()
        } else {
            f.neg(half)
        }
    }))
}

const EX_5X16: [&str; 5] = [
    "1 2 0 0 0 0 0 0 z z z z z3 z3 z3 z3",
    "z z z5 z5 z5 z5 z5 z5 1 1 1 1 z6 z6 z6 z6",
    "0 0 0 0 0 0 1 2 z z z5 z5 z3 z3 z7 z7",
    "0 0 0 0 1 2 0 0 z z5 z z5 z3 z7 z3 z7",
    "0 0 z2 z6 0 0 0 0 z7 z3 z3 z7 z z5 z5 z",
];

const EX_6X28: [&str; 6] = [
    "1 2 0 0 0 0 0 0 0 0 1 1 z z z z z z z z z3 z3 z3 z3 z3 z3 z3 z3",
    "z z z5 z5 z5 z5 z5 z5 z5 z5 0 0 1 1 1 1 1 1 1 1 z6 z6 z6 z6 z6 z6 z6 z6",
    "0 0 0 0 1 z5 z6 z6 z6 z7 1 2 0 2 2 z z z2 z6 z7 0 1 2 z2 z2 z5 z7 z7",
    "0 0 z z3 z5 z2 0 z5 z6 z6 z7 z3 0 z2 z5 0 z2 z7 z2 1 z5 z z z2 z7 1 z z6",
    "0 0 0 1 z 2 z3 z3 2 z7 z z5 1 z5 z z7 z z z2 z6 z 0 z3 0 z6 z6 2 z6",
    "0 0 z3 1 z 0 2 z 1 z3 0 0 z3 z3 z2 z5 z6 z2 0 z5 z7 0 z6 z2 z7 z z6 z",
];

const EX_6X27: [&str; 6] = [
    "1 z 0 0 0 0 0 0 1 1 1 1 1 1 1 1 1 1 1 1 z z z z z z z",
    "z z z z z z z z 0 0 0 0 0 0 0 0 0 0 0 0 1 1 1 1 1 1 1",
    "0 0 0 0 0 0 0 0 0 0 0 0 0 0 1 1 z z z2 z2 0 0 0 0 1 z z2",
    "0 0 1 1 1 z z2 z2 1 1 z z2 z2 z2 z2 z2 z2 z2 z2 z2 0 0 z z z z z",
    "0 0 1 z z 0 1 z2 z z2 0 1 1 z 0 z 0 z 0 z 1 z 0 z2 z z z",
    "0 0 z z 1 0 z2 1 z2 z 0 z 1 1 z 0 z 0 z 0 z 1 z2 0 z z z",
];

/// Fiducial exponents for the four 4x16 Gabor ETFs over `F_{31^2}`.
const EX_4X16: [[u64; 4]; 4] = [
    [0, 1, 784, 70],
    [0, 70, 784, 1],
    [0, 391, 784, 610],
    [0, 610, 784, 391],
];

/// Names accepted by [`exemplar`].
pub const EXEMPLAR_NAMES: &[&str] = &[
    "5x16", "6x28", "6x27", "mb-f25", "mb-f11", "4x16-phi1", "4x16-phi2", "4x16-phi3",
    "4x16-phi4",
];

/// A stored exemplar together with the primitive element `zeta^k` under which
/// its `z`-power entries are read.
#[derive(Clone, Debug)]
pub struct Exemplar {
    pub name: String,
    pub frame: FrameRecord,
    /// Exponent `k`: the exemplar's `z` is the field's `zeta^k`.
    pub convention: u64,
    /// Expected `(a, b, c)` as integers in the prime field; `None` when only
    /// ETF-ness is expected.
    pub expected: Option<(i64, i64, i64)>,
}

fn parse_token(f: &Field, tok: &str, k: u64) -> Result<Felt> {
    if let Some(rest) = tok.strip_prefix('z') {
        let e: u64 = if rest.is_empty() {
            1
        } else {
            rest.parse()
                .map_err(|_| Error::Invalid(format!("bad exemplar token {tok:?}")))?
        };
        Ok(f.zeta_pow(e * k))
    } else {
        let n: i64 = tok
            .parse()
            .map_err(|_| Error::Invalid(format!("bad exemplar token {tok:?}")))?;
        Ok(f.from_int(n))
    }
}

fn table_matrix(f: &Field, rows: &[&str], k: u64) -> Result<Mat> {
    let parsed = rows
        .iter()
        .map(|r| r.split_whitespace().map(|t| parse_token(f, t, k)).collect())
        .collect::<Result<Vec<Vec<Felt>>>>()?;
    Mat::from_rows(f, &parsed)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Exponents `k` coprime to `|F^x|`, i.e. every primitive element `zeta^k`.
pub fn primitive_conventions(f: &Field) -> Vec<u64> {
    let g = f.order() - 1;
    (1..g).filter(|&k| gcd(k, g) == 1).collect()
}

fn exemplar_at(name: &str, k: u64) -> Result<FrameRecord> {
    match name {
        "5x16" | "6x28" => {
            let f = f9();
            let rows: &[&str] = if name == "5x16" { &EX_5X16 } else { &EX_6X28 };
            FrameRecord::standard(table_matrix(&f, rows, k)?, Case::U)
        }
        "6x27" => {
            let f = FieldCtx::new(2, 2, None)?;
            FrameRecord::standard(table_matrix(&f, &EX_6X27, k)?, Case::U)
        }
        "mb-f25" => {
            let f = FieldCtx::new(5, 2, None)?;
            let a = f.zeta_pow(k);
            let w = f.pow(a, 8);
            let s = f.pow(a, 3);
            let rows = vec![
                vec![s, f.mul(s, w), f.mul(s, f.mul(w, w))],
                vec![s, f.mul(s, f.mul(w, w)), f.mul(s, w)],
            ];
            FrameRecord::standard(Mat::from_rows(&f, &rows)?, Case::U)
        }
        "mb-f11" => {
            // (1/2)[[0, -b, b], [2, -1, -1]] with b^2 = 3
            let f = FieldCtx::new(11, 1, None)?;
            let half = f.inv(f.from_int(2)).expect("odd");
            let b = f.sqrt(f.from_int(3)).expect("3 is a square mod 11");
            let rows = vec![
                vec![f.zero(), f.neg(b), b],
                vec![f.from_int(2), f.from_int(-1), f.from_int(-1)],
            ];
            let phi = Mat::from_rows(&f, &rows)?.scale(half);
            FrameRecord::standard(phi, Case::O)
        }
        _ => {
            let idx = match name {
                "4x16-phi1" => 0,
                "4x16-phi2" => 1,
                "4x16-phi3" => 2,
                "4x16-phi4" => 3,
                _ => return Err(Error::UnknownExemplar(name.to_string())),
            };
            let f = FieldCtx::new(31, 2, None)?;
            let z = f.zeta_pow(k);
            // omega = mu^2 = z^240
            let g = GaborGroup::with_omegas(&[4], &f, vec![f.pow(z, 240)])?;
            let phi: Vec<Felt> = EX_4X16[idx].iter().map(|&e| f.pow(z, e)).collect();
            gabor_frame(&g, &phi)
        }
    }
}

fn expected_params(name: &str) -> Option<(i64, i64, i64)> {
    match name {
        "5x16" | "6x28" => Some((0, 1, 0)),
        "6x27" => Some((0, 1, 1)),
        // (1, 1/4, 3/2) over F_5 and F_11
        "mb-f25" => Some((1, 4, 4)),
        "mb-f11" => Some((1, 3, 7)),
        _ => None,
    }
}

fn matches_expected(fr: &FrameRecord, expected: Option<(i64, i64, i64)>) -> bool {
    let p = fr.classify();
    if !p.flags.is_etf {
        return false;
    }
    match expected {
        None => true,
        Some((a, b, c)) => {
            let f = fr.field();
            p.a == Some(f.from_int(a)) && p.b == Some(f.from_int(b)) && p.c == Some(f.from_int(c))
        }
    }
}

/// The stored frame read under the default convention `z = zeta`.
pub fn exemplar(name: &str) -> Result<FrameRecord> {
    exemplar_at(name, 1)
}

/// The stored frame under the first primitive-element convention (in
/// increasing `k`) for which it has its stated parameters.
pub fn exemplar_verified(name: &str) -> Result<Exemplar> {
    let probe = exemplar_at(name, 1)?;
    let expected = expected_params(name);
    let f = probe.field().clone();
    for k in primitive_conventions(&f) {
        let fr = if k == 1 { probe.clone() } else { exemplar_at(name, k)? };
        if matches_expected(&fr, expected) {
            return Ok(Exemplar {
                name: name.to_string(),
                frame: fr,
                convention: k,
                expected,
            });
        }
    }
    Err(Error::Invalid(format!(
        "exemplar {name} has its stated parameters under no primitive element"
    )))
}
