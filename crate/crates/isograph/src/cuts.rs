//! Edge expansion, Fiedler sweep cuts, neighbour and greedy-neighbour
//! orderings, Cheeger bounds, small-cut diagnostics, distance distributions,
//! and adjacency dot-plot data. Works for any p, directed or not; spectral
//! computations symmetrize the adjacency first.

use crate::error::{Error, Result};
use crate::graph::{Cut, IsogenyGraph};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A permutation of the vertex indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexOrdering {
    perm: Vec<usize>,
}

impl VertexOrdering {
    pub fn new(perm: Vec<usize>) -> Result<VertexOrdering> {
        let n = perm.len();
        let mut seen = vec![false; n];
        for &v in &perm {
            if v >= n || seen[v] {
                return Err(Error::InvalidInput("ordering is not a permutation".into()));
            }
            seen[v] = true;
        }
        Ok(VertexOrdering { perm })
    }

    pub fn identity(n: usize) -> VertexOrdering {
        VertexOrdering { perm: (0..n).collect() }
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.perm
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }
}

/// Eigenvalues (ascending) and matching orthonormal eigenvectors;
/// `eigenvectors[k]` is the eigenvector for `eigenvalues[k]`.
#[derive(Clone, Debug)]
pub struct SpectralData {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<Vec<f64>>,
}

/// Which Laplacian eigenvector drives the spectral ordering.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FiedlerConvention {
    /// The eigenvector of the second largest Laplacian eigenvalue.
    SecondLargest,
    /// The usual algebraic-connectivity eigenvector (second smallest).
    SecondSmallest,
}

/// D - A with D the constant out-degree diagonal; with `symmetrize` the
/// adjacency is replaced by (A + A^T)/2 first.
pub fn laplacian(g: &IsogenyGraph, symmetrize: bool) -> Vec<Vec<f64>> {
    let n = g.n_vertices();
    let total = g.total_adjacency();
    let d = g.regularity() as f64;
    let mut m = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let a = if symmetrize {
                (total[i][j] as f64 + total[j][i] as f64) / 2.0
            } else {
                total[i][j] as f64
            };
            m[i][j] = if i == j { d - a } else { -a };
        }
    }
    m
}

/// Undirected reduction of the graph: a directed edge and its dual count as
/// one edge, so parallel directed edges that differ only by an automorphism
/// of one endpoint collapse (the entry is min(A_uv, A_vu)); loops are kept.
/// Identical to the total adjacency whenever that matrix is symmetric.
pub fn reduced_undirected(g: &IsogenyGraph) -> Vec<Vec<f64>> {
    let n = g.n_vertices();
    let total = g.total_adjacency();
    let mut m = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            m[i][j] = if i == j {
                total[i][i] as f64
            } else {
                total[i][j].min(total[j][i]) as f64
            };
        }
    }
    m
}

/// The Laplacian driving every spectral computation here: D - A on the
/// undirected reduction with D the true degree matrix, so loop contributions
/// cancel. Coincides with `laplacian(g, true)` for p = 1 mod 12; at p with
/// extra-automorphism vertices this is the variant whose second-smallest
/// eigenvalue matches the reference Cheeger data.
pub fn spectral_laplacian(g: &IsogenyGraph) -> Vec<Vec<f64>> {
    let n = g.n_vertices();
    let a = reduced_undirected(g);
    let mut m = vec![vec![0.0; n]; n];
    for i in 0..n {
        let offdeg: f64 = (0..n).filter(|&j| j != i).map(|j| a[i][j]).sum();
        for j in 0..n {
            m[i][j] = if i == j { offdeg } else { -a[i][j] };
        }
    }
    m
}

/// Full spectrum of a symmetric matrix by cyclic Jacobi rotations
/// (threshold 1e-12 relative, at most 100 sweeps), ascending.
pub fn eigen_symmetric(m: &[Vec<f64>]) -> Result<SpectralData> {
    let n = m.len();
    let mut scale = 0.0f64;
    for (i, row) in m.iter().enumerate() {
        if row.len() != n {
            return Err(Error::NotSymmetric);
        }
        for (j, &v) in row.iter().enumerate() {
            if (v - m[j][i]).abs() > 1e-12 * (1.0 + v.abs()) {
                return Err(Error::NotSymmetric);
            }
            scale += v * v;
            let _ = (i, j);
        }
    }
    let scale = scale.sqrt().max(1e-300);
    let mut a: Vec<f64> = m.iter().flatten().copied().collect();
    let mut v = vec![0.0f64; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let threshold = 1e-12 * scale;
    for _sweep in 0..100 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in p + 1..n {
                off += a[p * n + q].abs();
            }
        }
        if off <= threshold {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq.abs() <= threshold / (n as f64 * n as f64) {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].partial_cmp(&a[j * n + j]).unwrap().then(i.cmp(&j)));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[i * n + i]).collect();
    let eigenvectors: Vec<Vec<f64>> =
        order.iter().map(|&col| (0..n).map(|row| v[row * n + col]).collect()).collect();
    Ok(SpectralData { eigenvalues, eigenvectors })
}

/// Directed crossing-edge weight of the cut: the average of the two directed
/// counts, which equals the undirected count when A is symmetric.
pub fn crossing_weight(g: &IsogenyGraph, cut: &Cut) -> f64 {
    let total = g.total_adjacency();
    let n = g.n_vertices();
    let mut out = 0u64;
    let mut into = 0u64;
    for u in 0..n {
        for w in 0..n {
            let m = total[u][w] as u64;
            if m == 0 {
                continue;
            }
            match (cut.contains(u), cut.contains(w)) {
                (true, false) => out += m,
                (false, true) => into += m,
                _ => {}
            }
        }
    }
    (out + into) as f64 / 2.0
}

/// Edge expansion h(C) = cross / min(Vol C, Vol complement), Vol = d |C|.
pub fn edge_expansion(g: &IsogenyGraph, cut: &Cut) -> Result<f64> {
    let n = g.n_vertices();
    let size = cut.size();
    if size == 0 || size == n {
        return Err(Error::EmptySide);
    }
    let cross = crossing_weight(g, cut);
    let d = g.regularity() as f64;
    let vol = d * (size.min(n - size) as f64);
    Ok(cross / vol)
}

/// max of the edge expansion of the cut and of its complement.
pub fn phi_value(g: &IsogenyGraph, cut: &Cut) -> Result<f64> {
    let h1 = edge_expansion(g, cut)?;
    let h2 = edge_expansion(g, &cut.complement())?;
    Ok(h1.max(h2))
}

struct AdjacencyLists {
    out_edges: Vec<Vec<(usize, u32)>>,
    in_edges: Vec<Vec<(usize, u32)>>,
    undirected: Vec<Vec<usize>>,
}

fn adjacency_lists(g: &IsogenyGraph) -> AdjacencyLists {
    let n = g.n_vertices();
    let total = g.total_adjacency();
    let mut out_edges = vec![Vec::new(); n];
    let mut in_edges = vec![Vec::new(); n];
    let mut undirected = vec![Vec::new(); n];
    for u in 0..n {
        for w in 0..n {
            let m = total[u][w];
            if m > 0 {
                out_edges[u].push((w, m));
                in_edges[w].push((u, m));
            }
        }
    }
    for u in 0..n {
        for w in 0..n {
            if u != w && (total[u][w] > 0 || total[w][u] > 0) {
                undirected[u].push(w);
            }
        }
    }
    AdjacencyLists { out_edges, in_edges, undirected }
}

/// Incremental sweep state: twice the crossing weight is tracked as the sum
/// of the two directed counts so everything stays integral.
struct SweepState {
    members: Vec<bool>,
    double_cross: i64,
    size: usize,
}

impl SweepState {
    fn new(n: usize) -> SweepState {
        SweepState { members: vec![false; n], double_cross: 0, size: 0 }
    }

    fn delta_for(&self, v: usize, lists: &AdjacencyLists) -> i64 {
        let mut delta = 0i64;
        for &(w, m) in &lists.out_edges[v] {
            if w == v {
                continue;
            }
            if self.members[w] {
                delta -= m as i64;
            } else {
                delta += m as i64;
            }
        }
        for &(u, m) in &lists.in_edges[v] {
            if u == v {
                continue;
            }
            if self.members[u] {
                delta -= m as i64;
            } else {
                delta += m as i64;
            }
        }
        delta
    }

    fn insert(&mut self, v: usize, lists: &AdjacencyLists) {
        self.double_cross += self.delta_for(v, lists);
        self.members[v] = true;
        self.size += 1;
    }

    fn phi(&self, n: usize, d: f64) -> f64 {
        let small = self.size.min(n - self.size) as f64;
        (self.double_cross as f64 / 2.0) / (d * small)
    }
}

/// phi of every proper prefix of the ordering, in prefix order.
pub fn sweep_profile(g: &IsogenyGraph, order: &VertexOrdering) -> Result<Vec<f64>> {
    let n = g.n_vertices();
    if order.len() != n || n < 2 {
        return Err(Error::InvalidInput("ordering length must match the graph".into()));
    }
    let lists = adjacency_lists(g);
    let d = g.regularity() as f64;
    let mut state = SweepState::new(n);
    let mut out = Vec::with_capacity(n - 1);
    for &v in &order.as_slice()[..n - 1] {
        state.insert(v, &lists);
        out.push(state.phi(n, d));
    }
    Ok(out)
}

/// Evaluates phi on every proper prefix of the ordering and returns the
/// minimizer (the smallest prefix on ties).
pub fn sweep_min(g: &IsogenyGraph, order: &VertexOrdering) -> Result<(Cut, f64)> {
    let profile = sweep_profile(g, order)?;
    let (idx, phi) = profile
        .iter()
        .enumerate()
        .min_by(|(i, a), (j, b)| a.partial_cmp(b).unwrap().then(i.cmp(j)))
        .expect("n >= 2 gives at least one proper prefix");
    let cut = Cut::from_indices(&order.as_slice()[..=idx], g.n_vertices())?;
    Ok((cut, *phi))
}

/// Vertex ordering by the chosen Laplacian eigenvector, components
/// descending, ties by index; the eigenvector sign is fixed so its first
/// nonzero component is positive.
pub fn spectral_order(g: &IsogenyGraph, convention: FiedlerConvention) -> Result<VertexOrdering> {
    let n = g.n_vertices();
    if n < 2 {
        return Err(Error::InvalidInput("spectral ordering needs at least 2 vertices".into()));
    }
    let lap = spectral_laplacian(g);
    let spec = eigen_symmetric(&lap)?;
    let mut vec = match convention {
        FiedlerConvention::SecondLargest => spec.eigenvectors[n - 2].clone(),
        FiedlerConvention::SecondSmallest => spec.eigenvectors[1].clone(),
    };
    if let Some(first) = vec.iter().find(|c| c.abs() > 1e-12) {
        if *first < 0.0 {
            for c in vec.iter_mut() {
                *c = -*c;
            }
        }
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| vec[j].partial_cmp(&vec[i]).unwrap().then(i.cmp(&j)));
    VertexOrdering::new(idx)
}

/// The spectral sweep cut driven by the second-largest Laplacian eigenvector.
pub fn fiedler_sweep(g: &IsogenyGraph) -> Result<(Cut, f64)> {
    fiedler_sweep_with(g, FiedlerConvention::SecondLargest)
}

pub fn fiedler_sweep_with(g: &IsogenyGraph, convention: FiedlerConvention) -> Result<(Cut, f64)> {
    let order = spectral_order(g, convention)?;
    sweep_min(g, &order)
}

/// Breadth-first discovery order from v0, frontier expanded in vertex-index
/// order; any unreached vertices are appended in index order.
pub fn neighbour_order(g: &IsogenyGraph, v0: usize) -> Result<VertexOrdering> {
    let n = g.n_vertices();
    if v0 >= n {
        return Err(Error::InvalidInput(format!("start vertex {v0} out of range")));
    }
    let lists = adjacency_lists(g);
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut queue = std::collections::VecDeque::new();
    queue.push_back(v0);
    seen[v0] = true;
    while let Some(u) = queue.pop_front() {
        order.push(u);
        for &w in &lists.undirected[u] {
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    for v in 0..n {
        if !seen[v] {
            order.push(v);
        }
    }
    VertexOrdering::new(order)
}

/// Greedy expansion: repeatedly append the neighbour of the current set that
/// minimises phi(S + v), ties broken by smallest index; leftover vertices of
/// a disconnected graph are appended in index order.
pub fn greedy_order(g: &IsogenyGraph, v0: usize) -> Result<VertexOrdering> {
    let n = g.n_vertices();
    if v0 >= n {
        return Err(Error::InvalidInput(format!("start vertex {v0} out of range")));
    }
    let lists = adjacency_lists(g);
    let d = g.regularity() as f64;
    let mut state = SweepState::new(n);
    let mut order = Vec::with_capacity(n);
    let mut candidate = vec![false; n];
    state.insert(v0, &lists);
    order.push(v0);
    for &w in &lists.undirected[v0] {
        candidate[w] = true;
    }
    while order.len() < n {
        let mut best: Option<(f64, usize)> = None;
        for (v, &is_cand) in candidate.iter().enumerate() {
            if !is_cand || state.members[v] {
                continue;
            }
            let delta = state.delta_for(v, &lists);
            let size = state.size + 1;
            let small = size.min(n - size).max(1) as f64;
            let phi = ((state.double_cross + delta) as f64 / 2.0) / (d * small);
            if best.map_or(true, |(b, _)| phi < b) {
                best = Some((phi, v));
            }
        }
        let Some((_, v)) = best else {
            // disconnected remainder: index order
            for v in 0..n {
                if !state.members[v] {
                    state.insert(v, &lists);
                    order.push(v);
                }
            }
            break;
        };
        state.insert(v, &lists);
        order.push(v);
        candidate[v] = false;
        for &w in &lists.undirected[v] {
            if !state.members[w] {
                candidate[w] = true;
            }
        }
    }
    VertexOrdering::new(order)
}

/// True when the undirected support of the graph is connected.
pub fn is_connected(g: &IsogenyGraph) -> bool {
    let n = g.n_vertices();
    if n == 0 {
        return false;
    }
    let lists = adjacency_lists(g);
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut count = 1;
    while let Some(u) = stack.pop() {
        for &w in &lists.undirected[u] {
            if !seen[w] {
                seen[w] = true;
                count += 1;
                stack.push(w);
            }
        }
    }
    count == n
}

/// Two-sided Cheeger bracket (lambda/2, sqrt(2 lambda)) from the second
/// smallest eigenvalue of the degree-normalised symmetrised Laplacian L/d.
pub fn cheeger_bounds(g: &IsogenyGraph) -> Result<(f64, f64)> {
    if !is_connected(g) {
        return Err(Error::Disconnected);
    }
    let d = g.regularity() as f64;
    let mut lap = spectral_laplacian(g);
    for row in lap.iter_mut() {
        for v in row.iter_mut() {
            *v /= d;
        }
    }
    let spec = eigen_symmetric(&lap)?;
    let lambda = spec.eigenvalues[1];
    Ok((lambda / 2.0, (2.0 * lambda).sqrt()))
}

/// R_{ell,n} = (n ell + 1)/n, the edge expansion of an induced tree of n
/// vertices in an ell-isogeny graph.
pub fn uniform_bound_r(ell: u64, n: u64) -> Result<BigRational> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be >= 1".into()));
    }
    Ok(BigRational::new(BigInt::from(n * ell + 1), BigInt::from(n)))
}

/// The connected component of the cut's induced subgraph with the smallest
/// edge expansion; never worse than the original when |C| <= |V - C|.
pub fn best_connected_component(g: &IsogenyGraph, cut: &Cut) -> Result<Cut> {
    let n = g.n_vertices();
    if cut.size() == 0 {
        return Err(Error::EmptySide);
    }
    let lists = adjacency_lists(g);
    let mut comp = vec![usize::MAX; n];
    let mut ncomp = 0usize;
    for start in cut.indices() {
        if comp[start] != usize::MAX {
            continue;
        }
        let id = ncomp;
        ncomp += 1;
        let mut stack = vec![start];
        comp[start] = id;
        while let Some(u) = stack.pop() {
            for &w in &lists.undirected[u] {
                if cut.contains(w) && comp[w] == usize::MAX {
                    comp[w] = id;
                    stack.push(w);
                }
            }
        }
    }
    let mut best: Option<(f64, usize, Cut)> = None;
    for id in 0..ncomp {
        let indices: Vec<usize> = (0..n).filter(|&v| comp[v] == id).collect();
        let min_index = indices[0];
        let t = Cut::from_indices(&indices, n)?;
        let h = edge_expansion(g, &t)?;
        let better = match &best {
            None => true,
            Some((bh, bmin, _)) => h < *bh || (h == *bh && min_index < *bmin),
        };
        if better {
            best = Some((h, min_index, t));
        }
    }
    Ok(best.expect("nonempty cut has a component").2)
}

/// BFS level sizes N_0, N_1, ... from v; sums to |V| on a connected graph.
pub fn distance_distribution(g: &IsogenyGraph, v: usize) -> Result<Vec<usize>> {
    let n = g.n_vertices();
    if v >= n {
        return Err(Error::InvalidInput(format!("vertex {v} out of range")));
    }
    let lists = adjacency_lists(g);
    let mut dist = vec![usize::MAX; n];
    dist[v] = 0;
    let mut queue = std::collections::VecDeque::new();
    queue.push_back(v);
    let mut maxd = 0usize;
    while let Some(u) = queue.pop_front() {
        for &w in &lists.undirected[u] {
            if dist[w] == usize::MAX {
                dist[w] = dist[u] + 1;
                maxd = maxd.max(dist[w]);
                queue.push_back(w);
            }
        }
    }
    let mut counts = vec![0usize; maxd + 1];
    for &d in &dist {
        if d != usize::MAX {
            counts[d] += 1;
        }
    }
    Ok(counts)
}

/// A binary PGM (P5) image.
pub struct Pgm {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<u8>,
}

impl Pgm {
    pub fn write_to(&self, w: &mut dyn std::io::Write) -> Result<()> {
        write!(w, "P5\n{} {}\n255\n", self.width, self.height)?;
        w.write_all(&self.pixels)?;
        Ok(())
    }

    pub fn save(&self, path: &std::path::Path) -> Result<()> {
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        self.write_to(&mut f)
    }
}

/// Adjacency dot plot: pixel (row i, col j) is dark iff `A[o(i)][o(j)]` > 0.
/// With `shuffle`, the positions of cut members and of complement members are
/// each permuted independently with the seeded generator.
pub fn adjacency_plot(
    g: &IsogenyGraph,
    order: &VertexOrdering,
    shuffle: Option<(&Cut, u64)>,
) -> Result<Pgm> {
    let n = g.n_vertices();
    if order.len() != n {
        return Err(Error::InvalidInput("ordering length must match the graph".into()));
    }
    let mut perm: Vec<usize> = order.as_slice().to_vec();
    if let Some((cut, seed)) = shuffle {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inside_pos: Vec<usize> = (0..n).filter(|&k| cut.contains(perm[k])).collect();
        let outside_pos: Vec<usize> = (0..n).filter(|&k| !cut.contains(perm[k])).collect();
        for positions in [inside_pos, outside_pos] {
            let mut values: Vec<usize> = positions.iter().map(|&k| perm[k]).collect();
            values.shuffle(&mut rng);
            for (&k, &v) in positions.iter().zip(values.iter()) {
                perm[k] = v;
            }
        }
    }
    let total = g.total_adjacency();
    let mut pixels = vec![255u8; n * n];
    for i in 0..n {
        for j in 0..n {
            if total[perm[i]][perm[j]] > 0 {
                pixels[i * n + j] = 0;
            }
        }
    }
    Ok(Pgm { width: n, height: n, pixels })
}
