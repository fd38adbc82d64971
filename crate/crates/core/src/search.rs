//! Combinatorial searches: maximum cliques in the isotropic-line graph,
//! eigenspace fiducial scans, and exhaustive modular difference sets.

use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::construct::{gabor_frame, DiffSet, GaborGroup};
use crate::error::{Error, Result};
use crate::field::Felt;
use crate::form::{Case, FormSpace, DEFAULT_ENUM_CAP, DEFAULT_SEED};
use crate::frame::FrameRecord;
use crate::matrix::Mat;

pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;
pub const DEFAULT_TIME_BUDGET: Duration = Duration::from_secs(600);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub nodes: u64,
    pub time: Duration,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            nodes: DEFAULT_NODE_BUDGET,
            time: DEFAULT_TIME_BUDGET,
        }
    }
}

/// Dense symmetric graph stored as bitset rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitGraph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
}

impl BitGraph {
    pub fn new(n: usize) -> BitGraph {
        let words = n.div_ceil(64).max(1);
        BitGraph {
            n,
            words,
            rows: vec![0; n * words],
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> BitGraph {
        let mut g = BitGraph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn len(&self) -> usize {
        self.n
    }
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Adds `u ~ v`; loops are ignored.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        if u == v {
            return;
        }
        self.rows[u * self.words + v / 64] |= 1 << (v % 64);
        self.rows[v * self.words + u / 64] |= 1 << (u % 64);
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.rows[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    pub fn degree(&self, u: usize) -> usize {
        self.row(u).iter().map(|w| w.count_ones() as usize).sum()
    }

    fn row(&self, u: usize) -> &[u64] {
        &self.rows[u * self.words..(u + 1) * self.words]
    }

    pub fn is_clique(&self, vs: &[usize]) -> bool {
        vs.iter()
            .enumerate()
            .all(|(i, &u)| vs[i + 1..].iter().all(|&v| self.adjacent(u, v)))
    }
}

/// The graph on isotropic lines with `u ~ v` iff `<u,v>^{q+1} = 1`.
#[derive(Clone, Debug)]
pub struct CliqueInstance {
    pub space: FormSpace,
    pub vertices: Vec<Vec<Felt>>,
    pub graph: BitGraph,
    /// Stop as soon as a clique of this size is found.
    pub target: Option<usize>,
    pub seed: u64,
    pub budget: Budget,
}

pub fn build_clique_instance(space: &FormSpace) -> Result<CliqueInstance> {
    build_clique_instance_capped(space, DEFAULT_ENUM_CAP)
}

pub fn build_clique_instance_capped(space: &FormSpace, cap: u128) -> Result<CliqueInstance> {
    if space.case() != Case::U {
        return Err(Error::CaseMismatch("U"));
    }
    let f = space.field().clone();
    let vertices = space.enumerate_isotropic_lines_capped(cap)?;
    let n = vertices.len();
    let mut graph = BitGraph::new(n);
    let gram = space.gram();
    // row vectors u* M, so that <u, v> is a plain dot product with v
    let left: Vec<Vec<u32>> = vertices
        .iter()
        .map(|u| {
            let d = u.len();
            (0..d)
                .map(|j| {
                    let mut acc = 0;
                    for (i, &ui) in u.iter().enumerate() {
                        let t = f.rmul(f.rconj(ui.raw()), gram.get(i, j).raw());
                        acc = f.radd(acc, t);
                    }
                    acc
                })
                .collect()
        })
        .collect();
    let raws: Vec<Vec<u32>> = vertices
        .iter()
        .map(|v| v.iter().map(|x| x.raw()).collect())
        .collect();
    let one = f.one().raw();
    let qp1 = f.q()? + 1;
    for a in 0..n {
        for b in a + 1..n {
            let mut ip = 0;
            for (&l, &r) in left[a].iter().zip(&raws[b]) {
                ip = f.radd(ip, f.rmul(l, r));
            }
            if ip != 0 && f.rpow(ip, qp1) == one {
                graph.add_edge(a, b);
            }
        }
    }
    Ok(CliqueInstance {
        space: space.clone(),
        vertices,
        graph,
        target: None,
        seed: DEFAULT_SEED,
        budget: Budget::default(),
    })
}

impl CliqueInstance {
    pub fn with_target(mut self, target: usize) -> Self {
        self.target = Some(target);
        self
    }
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
    pub fn with_budget(mut self, budget: Budget) -> Self {
        self.budget = budget;
        self
    }

    /// Frame whose columns are the clique's line representatives.
    pub fn clique_frame(&self, clique: &[usize]) -> Result<FrameRecord> {
        let cols: Vec<Vec<Felt>> = clique.iter().map(|&i| self.vertices[i].clone()).collect();
        let phi = Mat::from_columns(self.space.field(), self.space.dim(), &cols)?;
        FrameRecord::new(phi, self.space.clone())
    }

    /// Re-checks `Q(v) = 0` and `<u,v>^{q+1} = 1` with the form itself.
    pub fn verify_clique(&self, clique: &[usize]) -> bool {
        let f = self.space.field();
        let Ok(q) = f.q() else { return false };
        clique.iter().enumerate().all(|(i, &u)| {
            let vu = &self.vertices[u];
            self.space.quad(vu).is_ok_and(|x| x.is_zero())
                && clique[i + 1..].iter().all(|&v| {
                    self.space
                        .form_eval(vu, &self.vertices[v])
                        .is_ok_and(|ip| f.pow(ip, q + 1) == f.one())
                })
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchReport {
    /// Sorted vertex indices.
    pub best_clique: Vec<usize>,
    /// Size of `best_clique`; the clique number when `exhausted`.
    pub certified_size: usize,
    pub nodes_explored: u64,
    pub elapsed: Duration,
    /// The whole tree was explored, so `certified_size` is maximum.
    pub exhausted: bool,
    /// The node or time budget ran out before the search finished.
    pub budget_exceeded: bool,
}

struct Search {
    order: Vec<usize>,
    // adjacency re-indexed by position in `order`
    adj: Vec<Vec<u64>>,
    words: usize,
    best: Vec<usize>,
    target: usize,
    nodes: u64,
    budget: Budget,
    start: Instant,
    stopped: bool,
    budget_hit: bool,
}

impl Search {
    fn out_of_budget(&mut self) -> bool {
        if self.nodes >= self.budget.nodes
            || (self.nodes % 1024 == 0 && self.start.elapsed() >= self.budget.time)
        {
            self.budget_hit = true;
            self.stopped = true;
        }
        self.stopped
    }

    /// Greedy sequential coloring of `p`; returns vertices with their color
    /// bound, in increasing color order.
    fn color(&self, p: &[u64]) -> Vec<(usize, usize)> {
        let mut uncolored = p.to_vec();
        let mut out = Vec::new();
        let mut color = 0;
        while uncolored.iter().any(|&w| w != 0) {
            color += 1;
            let mut avail = uncolored.clone();
            while let Some(v) = first_bit(&avail) {
                avail[v / 64] &= !(1 << (v % 64));
                uncolored[v / 64] &= !(1 << (v % 64));
                for (a, n) in avail.iter_mut().zip(&self.adj[v]) {
                    *a &= !n;
                }
                out.push((v, color));
            }
        }
        out
    }

    fn expand(&mut self, r: &mut Vec<usize>, p: &mut [u64]) {
        let colored = self.color(p);
        for &(v, c) in colored.iter().rev() {
            if self.stopped || r.len() + c <= self.best.len() {
                return;
            }
            self.nodes += 1;
            if self.out_of_budget() {
                return;
            }
            r.push(v);
            let mut np: Vec<u64> = p.iter().zip(&self.adj[v]).map(|(a, b)| a & b).collect();
            if np.iter().all(|&w| w == 0) {
                if r.len() > self.best.len() {
                    self.best = r.clone();
                    if self.best.len() >= self.target {
                        self.stopped = true;
                    }
                }
            } else {
                self.expand(r, &mut np);
            }
            r.pop();
            p[v / 64] &= !(1 << (v % 64));
        }
    }

    fn to_original(&self, c: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = c.iter().map(|&i| self.order[i]).collect();
        out.sort_unstable();
        out
    }
}

fn first_bit(s: &[u64]) -> Option<usize> {
    s.iter()
        .enumerate()
        .find(|(_, &w)| w != 0)
        .map(|(i, &w)| i * 64 + w.trailing_zeros() as usize)
}

fn greedy_clique(g: &BitGraph, order: &[usize]) -> Vec<usize> {
    let mut c: Vec<usize> = Vec::new();
    for &v in order {
        if c.iter().all(|&u| g.adjacent(u, v)) {
            c.push(v);
        }
    }
    c
}

/// Branch and bound with greedy-coloring bounds on a bare graph.
///
/// Vertices are ordered by descending degree with ties broken by index;
/// seeded randomized greedy runs supply the initial lower bound. The search
/// is sequential, so the report is a function of the inputs alone.
pub fn max_clique(g: &BitGraph, target: Option<usize>, seed: u64, budget: Budget) -> SearchReport {
    let start = Instant::now();
    let n = g.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    let pos = {
        let mut pos = vec![0; n];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        pos
    };
    let words = n.div_ceil(64).max(1);
    let adj: Vec<Vec<u64>> = order
        .iter()
        .map(|&v| {
            let mut row = vec![0u64; words];
            for u in 0..n {
                if g.adjacent(v, u) {
                    row[pos[u] / 64] |= 1 << (pos[u] % 64);
                }
            }
            row
        })
        .collect();

    let mut best = greedy_clique(g, &order);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut shuffled = order.clone();
    for _ in 0..64 {
        shuffled.shuffle(&mut rng);
        let c = greedy_clique(g, &shuffled);
        if c.len() > best.len() {
            best = c;
        }
    }
    let target = target.unwrap_or(usize::MAX);
    if best.len() >= target {
        let mut clique = best;
        clique.sort_unstable();
        return SearchReport {
            certified_size: clique.len(),
            best_clique: clique,
            nodes_explored: 0,
            elapsed: start.elapsed(),
            exhausted: false,
            budget_exceeded: false,
        };
    }
    let best: Vec<usize> = best.into_iter().map(|v| pos[v]).collect();
    let mut s = Search {
        order,
        adj,
        words,
        best,
        target,
        nodes: 0,
        budget,
        start,
        stopped: false,
        budget_hit: false,
    };
    let mut p = vec![0u64; s.words];
    for v in 0..n {
        p[v / 64] |= 1 << (v % 64);
    }
    s.expand(&mut Vec::new(), &mut p);
    let clique = s.to_original(&s.best);
    SearchReport {
        certified_size: clique.len(),
        best_clique: clique,
        nodes_explored: s.nodes,
        elapsed: start.elapsed(),
        exhausted: !s.stopped,
        budget_exceeded: s.budget_hit,
    }
}

pub fn find_clique(inst: &CliqueInstance) -> SearchReport {
    max_clique(&inst.graph, inst.target, inst.seed, inst.budget)
}

/// `Z = R F` with `F = [w^{ij}]`, `R_jj = mu^{j(j+d)}`, `mu` of order `2d`, `w = mu^2`.
pub fn zauner_matrix(g: &GaborGroup) -> Result<Mat> {
    let [d] = g.factors() else {
        return Err(Error::Invalid("zauner_matrix needs a cyclic group".into()));
    };
    let d = *d;
    let f = g.field();
    let mu = f.root_of_unity(2 * d as u64)?;
    let w = f.mul(mu, mu);
    let two_d = 2 * d;
    Ok(Mat::from_fn(f, d, d, |i, j| {
        let r = f.pow(mu, ((i * (i + d)) % two_d) as u64);
        f.mul(r, f.pow(w, ((i * j) % d) as u64))
    }))
}

/// Projective lines of the column span of `subspace` whose representatives
/// generate Gabor ETFs.
///
/// Representatives are normalized so the leftmost nonzero coordinate is 1.
pub fn fiducial_scan(g: &GaborGroup, subspace: &Mat) -> Result<Vec<Vec<Felt>>> {
    fiducial_scan_capped(g, subspace, DEFAULT_ENUM_CAP)
}

pub fn fiducial_scan_capped(g: &GaborGroup, subspace: &Mat, cap: u128) -> Result<Vec<Vec<Felt>>> {
    let f = g.field();
    if subspace.rows() != g.order() {
        return Err(Error::DimensionMismatch(format!(
            "subspace in dimension {} for a group of order {}",
            subspace.rows(),
            g.order()
        )));
    }
    let basis = subspace.column_space();
    let r = basis.cols();
    if r == 0 {
        return Ok(Vec::new());
    }
    let size = (f.order() as u128).saturating_pow(r as u32);
    if size > cap {
        return Err(Error::EnumerationTooLarge { size, cap });
    }
    let mut hits = Vec::new();
    for c in projective_points(f, r) {
        let v = normalize_leading(f, &basis.apply(&c));
        let p = gabor_frame(g, &v)?.classify();
        if p.flags.is_etf {
            hits.push(v);
        }
    }
    hits.sort_by_key(|v| v.iter().map(|x| digit_key(f, *x)).collect::<Vec<_>>());
    Ok(hits)
}

fn digit_key(f: &crate::field::Field, x: Felt) -> u64 {
    f.log(x).map_or(0, |k| k + 1)
}

fn normalize_leading(f: &crate::field::Field, v: &[Felt]) -> Vec<Felt> {
    match v.iter().find(|x| !x.is_zero()) {
        None => v.to_vec(),
        Some(&lead) => {
            let s = f.inv(lead).expect("nonzero");
            v.iter().map(|&x| f.mul(x, s)).collect()
        }
    }
}

fn projective_points(f: &crate::field::Field, r: usize) -> Vec<Vec<Felt>> {
    let mut out = Vec::new();
    let elems: Vec<Felt> = f.elements().collect();
    for lead in 0..r {
        let tail = r - lead - 1;
        let total = elems.len().pow(tail as u32);
        for mut idx in 0..total {
            let mut v = vec![f.zero(); r];
            v[lead] = f.one();
            for pos in (lead + 1..r).rev() {
                v[pos] = elems[idx % elems.len()];
                idx /= elems.len();
            }
            out.push(v);
        }
    }
    out
}

/// Every subset of `Z/n` that is a `k`-modular difference set, by brute force.
pub fn modular_difference_sets(n: usize, k: u64) -> Result<Vec<DiffSet>> {
    if n > 24 {
        return Err(Error::EnumerationTooLarge {
            size: 1u128 << n,
            cap: 1 << 24,
        });
    }
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        let d: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let ds = DiffSet::new(n, d, k)?;
        if ds.is_modular_difference_set() {
            out.push(ds);
        }
    }
    Ok(out)
}
