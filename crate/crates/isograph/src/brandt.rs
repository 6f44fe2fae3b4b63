//! Exact Brandt-matrix arithmetic built from adjacency matrices, and the
//! inclusion-exclusion counts of principal isogeny cycles derived from their
//! traces and diagonals.

use crate::error::{Error, Result};
use crate::graph::IsogenyGraph;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::HashMap;

/// Dense square matrix of exact rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    n: usize,
    entries: Vec<BigRational>,
}

impl RationalMatrix {
    pub fn zero(n: usize) -> Self {
        RationalMatrix { n, entries: vec![BigRational::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RationalMatrix::zero(n);
        for i in 0..n {
            m.set(i, i, BigRational::one());
        }
        m
    }

    pub fn from_integer_entries(n: usize, ints: &[i64]) -> Self {
        assert_eq!(ints.len(), n * n);
        RationalMatrix {
            n,
            entries: ints.iter().map(|&v| BigRational::from_integer(BigInt::from(v))).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.entries[i * self.n + j] = v;
    }

    pub fn add(&self, o: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.n, o.n);
        let entries = self.entries.iter().zip(&o.entries).map(|(a, b)| a + b).collect();
        RationalMatrix { n: self.n, entries }
    }

    pub fn sub(&self, o: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.n, o.n);
        let entries = self.entries.iter().zip(&o.entries).map(|(a, b)| a - b).collect();
        RationalMatrix { n: self.n, entries }
    }

    pub fn scale(&self, k: &BigRational) -> RationalMatrix {
        RationalMatrix { n: self.n, entries: self.entries.iter().map(|a| a * k).collect() }
    }

    pub fn mul(&self, o: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.n, o.n);
        let n = self.n;
        let mut out = RationalMatrix::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = o.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(i, j) + a * b;
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    pub fn trace(&self) -> BigRational {
        (0..self.n).map(|i| self.get(i, i).clone()).sum()
    }

    pub fn transpose(&self) -> RationalMatrix {
        let mut out = RationalMatrix::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| self.get(i, j).to_string()).collect();
            s.push_str(&row.join(","));
            s.push('\n');
        }
        s
    }
}

/// Prime-power degree pattern (ell_1^{e_1}, ..., ell_r^{e_r}), ells strictly
/// increasing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeVector {
    pairs: Vec<(u64, u32)>,
}

impl DegreeVector {
    pub fn new(mut pairs: Vec<(u64, u32)>) -> Result<DegreeVector> {
        pairs.sort_by_key(|&(l, _)| l);
        for w in pairs.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::NonSquarefreeDegree(w[0].0));
            }
        }
        Ok(DegreeVector { pairs })
    }

    /// Parses "2:1,3:2" style degree lists.
    pub fn parse(s: &str) -> Result<DegreeVector> {
        let mut pairs = Vec::new();
        for part in s.split(',') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let (l, e) = part
                .split_once(':')
                .ok_or_else(|| Error::InvalidInput(format!("expected ell:e, got '{part}'")))?;
            let l: u64 = l.trim().parse().map_err(|_| Error::InvalidInput(format!("bad prime '{l}'")))?;
            let e: u32 = e.trim().parse().map_err(|_| Error::InvalidInput(format!("bad exponent '{e}'")))?;
            pairs.push((l, e));
        }
        DegreeVector::new(pairs)
    }

    pub fn pairs(&self) -> &[(u64, u32)] {
        &self.pairs
    }

    pub fn ells(&self) -> Vec<u64> {
        self.pairs.iter().map(|&(l, _)| l).collect()
    }

    /// Product of ell^e over the vector.
    pub fn product(&self) -> u128 {
        self.pairs.iter().fold(1u128, |acc, &(l, e)| acc * (l as u128).pow(e))
    }

    pub fn render(&self) -> String {
        self.pairs.iter().map(|(l, e)| format!("{l}:{e}")).collect::<Vec<_>>().join(",")
    }
}

/// Memoized Brandt matrices over a fixed graph, held as 64-bit integer
/// matrices internally; entries stay far below the overflow guard for the
/// desk-scale m used here, and every arithmetic step is overflow-checked.
pub struct BrandtEngine<'g> {
    graph: &'g IsogenyGraph,
    memo: HashMap<u128, Vec<i64>>,
}

impl<'g> BrandtEngine<'g> {
    pub fn new(graph: &'g IsogenyGraph) -> Result<BrandtEngine<'g>> {
        if graph.params.p % 12 != 1 {
            return Err(Error::UnsupportedCharacteristic(graph.params.p));
        }
        Ok(BrandtEngine { graph, memo: HashMap::new() })
    }

    fn smallest_ell_dividing(&self, m: u128) -> Option<u64> {
        self.graph.ells.iter().copied().find(|&l| m % l as u128 == 0)
    }

    /// B(m) as a flat row-major integer matrix. m must factor over the
    /// graph's primes.
    pub fn matrix(&mut self, m: u128) -> Result<&Vec<i64>> {
        if !self.memo.contains_key(&m) {
            let n = self.graph.n_vertices();
            let computed: Vec<i64> = if m == 1 {
                let mut ident = vec![0i64; n * n];
                for i in 0..n {
                    ident[i * n + i] = 1;
                }
                ident
            } else {
                let ell = self.smallest_ell_dividing(m).ok_or_else(|| {
                    Error::InvalidInput(format!("{m} does not factor over the graph primes"))
                })?;
                let rest = m / ell as u128;
                let prev = self.matrix(rest)?.clone();
                let adj = self
                    .graph
                    .adjacency_for(ell)
                    .expect("ell belongs to the graph")
                    .clone();
                let mut out = mul_by_adjacency(&prev, &adj, n)?;
                if rest % ell as u128 == 0 {
                    let back = self.matrix(rest / ell as u128)?;
                    for (o, b) in out.iter_mut().zip(back.iter()) {
                        *o = o
                            .checked_sub(
                                (ell as i64)
                                    .checked_mul(*b)
                                    .ok_or_else(|| Error::Overflow(format!("B({m})")))?,
                            )
                            .ok_or_else(|| Error::Overflow(format!("B({m})")))?;
                    }
                }
                out
            };
            self.memo.insert(m, computed);
        }
        Ok(self.memo.get(&m).unwrap())
    }

    pub fn trace(&mut self, m: u128) -> Result<BigInt> {
        let n = self.graph.n_vertices();
        let mat = self.matrix(m)?;
        let mut t = 0i128;
        for i in 0..n {
            t += mat[i * n + i] as i128;
        }
        Ok(BigInt::from(t))
    }

    pub fn diagonal(&mut self, m: u128) -> Result<Vec<i64>> {
        let n = self.graph.n_vertices();
        let mat = self.matrix(m)?;
        Ok((0..n).map(|i| mat[i * n + i]).collect())
    }

    pub fn rational_matrix(&mut self, m: u128) -> Result<RationalMatrix> {
        let n = self.graph.n_vertices();
        let mat = self.matrix(m)?;
        Ok(RationalMatrix::from_integer_entries(n, mat))
    }
}

/// out = prev * A_ell, exploiting the sparsity of the adjacency matrix.
fn mul_by_adjacency(prev: &[i64], adj: &[Vec<u32>], n: usize) -> Result<Vec<i64>> {
    let mut out = vec![0i64; n * n];
    for k in 0..n {
        for (j, &m) in adj[k].iter().enumerate() {
            if m == 0 {
                continue;
            }
            let m = m as i64;
            for i in 0..n {
                let a = prev[i * n + k];
                if a != 0 {
                    out[i * n + j] = out[i * n + j]
                        .checked_add(a.checked_mul(m).ok_or_else(|| Error::Overflow("B(m) entry".into()))?)
                        .ok_or_else(|| Error::Overflow("B(m) entry".into()))?;
                }
            }
        }
    }
    Ok(out)
}

fn require_graph_ells(g: &IsogenyGraph, ells: &[u64]) -> Result<()> {
    for &l in ells {
        if !g.ells.contains(&l) {
            return Err(Error::InvalidInput(format!("prime {l} is not an edge degree of the graph")));
        }
    }
    Ok(())
}

/// B(ell^k) by the three-term recursion, exact.
pub fn brandt_power(g: &IsogenyGraph, ell: u64, k: u32) -> Result<RationalMatrix> {
    require_graph_ells(g, &[ell])?;
    let mut engine = BrandtEngine::new(g)?;
    engine.rational_matrix((ell as u128).pow(k))
}

/// B(prod ell_i^{e_i}) as the commuting product of prime-power factors.
pub fn brandt_matrix(g: &IsogenyGraph, d: &DegreeVector) -> Result<RationalMatrix> {
    require_graph_ells(g, &d.ells())?;
    let mut engine = BrandtEngine::new(g)?;
    engine.rational_matrix(d.product())
}

/// Output of the principal-cycle count: the total and the per-vertex counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrincipalCycleCount {
    pub total: BigInt,
    pub per_vertex: Vec<BigInt>,
}

/// Number of principal isogeny cycles with exactly e_i edges of degree ell_i,
/// by inclusion-exclusion over scalar factors:
/// sum over J of (-1)^|J| Tr B(m / prod_{j in J} ell_j^2), with B of a
/// non-integral argument contributing zero.
pub fn principal_cycle_count(g: &IsogenyGraph, d: &DegreeVector) -> Result<PrincipalCycleCount> {
    require_graph_ells(g, &d.ells())?;
    for &(l, e) in d.pairs() {
        if e == 0 {
            return Err(Error::InvalidExponent(l));
        }
    }
    let mut engine = BrandtEngine::new(g)?;
    let n = g.n_vertices();
    let m = d.product();
    let r = d.pairs().len();
    let mut total = BigInt::zero();
    let mut per_vertex = vec![BigInt::zero(); n];
    for mask in 0u32..(1 << r) {
        let mut arg = m;
        let mut ok = true;
        for (bit, &(l, _)) in d.pairs().iter().enumerate() {
            if mask & (1 << bit) != 0 {
                let l2 = (l as u128) * (l as u128);
                if arg % l2 != 0 {
                    ok = false;
                    break;
                }
                arg /= l2;
            }
        }
        if !ok {
            continue;
        }
        let sign = if mask.count_ones() % 2 == 0 { 1 } else { -1 };
        let diag = engine.diagonal(arg)?;
        for (pv, dv) in per_vertex.iter_mut().zip(diag.iter()) {
            *pv += sign * BigInt::from(*dv);
        }
        total += sign * engine.trace(arg)?;
    }
    Ok(PrincipalCycleCount { total, per_vertex })
}

/// Number of principal isogeny cycles of length R over all degree patterns:
/// sum_{i=0}^{r} (-1)^i C(r, i) sum_{|e| = R - 2i} Tr B(prod ell^e).
pub fn length_r_count(g: &IsogenyGraph, r_len: u32) -> Result<BigRational> {
    if r_len == 0 {
        return Err(Error::InvalidInput("length must be >= 1".into()));
    }
    let mut engine = BrandtEngine::new(g)?;
    let ells = g.ells.clone();
    let r = ells.len();
    let mut acc = BigInt::zero();
    for i in 0..=r as u32 {
        if 2 * i > r_len {
            break;
        }
        let remaining = r_len - 2 * i;
        let mut inner = BigInt::zero();
        let mut exps = vec![0u32; r];
        sum_traces_over_compositions(&mut engine, &ells, remaining, 0, 1u128, &mut exps, &mut inner)?;
        let c = binomial(r as u64, i as u64);
        let term = BigInt::from(c) * inner;
        if i % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(BigRational::from_integer(acc))
}

fn sum_traces_over_compositions(
    engine: &mut BrandtEngine,
    ells: &[u64],
    remaining: u32,
    idx: usize,
    m: u128,
    exps: &mut Vec<u32>,
    acc: &mut BigInt,
) -> Result<()> {
    if idx == ells.len() {
        if remaining == 0 {
            *acc += engine.trace(m)?;
        }
        return Ok(());
    }
    if idx == ells.len() - 1 {
        exps[idx] = remaining;
        let m2 = m * (ells[idx] as u128).pow(remaining);
        *acc += engine.trace(m2)?;
        return Ok(());
    }
    for e in 0..=remaining {
        exps[idx] = e;
        let m2 = m * (ells[idx] as u128).pow(e);
        sum_traces_over_compositions(engine, ells, remaining - e, idx + 1, m2, exps, acc)?;
    }
    Ok(())
}

fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = 1u128;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}
