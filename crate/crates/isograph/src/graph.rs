//! The supersingular L-isogeny graph: one directed multigraph adjacency
//! matrix per prime in L, over a shared deterministic vertex indexing.

use crate::algebra::{Fp2Element, FpParams};
use crate::curves::find_supersingular_j;
use crate::error::{Error, Result};
use crate::modpoly::{load_modpoly, SUPPORTED_ELLS};
use std::collections::HashMap;
use std::io::{BufRead, Write};

#[derive(Clone, Debug)]
pub struct IsogenyGraph {
    pub params: FpParams,
    /// Sorted list of edge-degree primes.
    pub ells: Vec<u64>,
    /// j-invariants in BFS discovery order; vertex 0 is the canonical start.
    pub vertices: Vec<Fp2Element>,
    /// `adjacency[k][u][v]` = multiplicity of j_v as a root of `Phi_{ells[k]}(j_u, Y)`.
    pub adjacency: Vec<Vec<Vec<u32>>>,
}

/// A nonempty proper subset of vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cut {
    members: Vec<bool>,
}

impl Cut {
    pub fn from_indices(indices: &[usize], n: usize) -> Result<Cut> {
        let mut members = vec![false; n];
        for &i in indices {
            if i >= n {
                return Err(Error::InvalidInput(format!("vertex index {i} out of range")));
            }
            members[i] = true;
        }
        let c = Cut { members };
        c.validate()?;
        Ok(c)
    }

    pub fn from_mask(members: Vec<bool>) -> Result<Cut> {
        let c = Cut { members };
        c.validate()?;
        Ok(c)
    }

    fn validate(&self) -> Result<()> {
        let size = self.size();
        if size == 0 || size == self.members.len() {
            return Err(Error::EmptySide);
        }
        Ok(())
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members[v]
    }

    pub fn size(&self) -> usize {
        self.members.iter().filter(|&&m| m).count()
    }

    pub fn n_vertices(&self) -> usize {
        self.members.len()
    }

    pub fn indices(&self) -> Vec<usize> {
        (0..self.members.len()).filter(|&i| self.members[i]).collect()
    }

    pub fn complement(&self) -> Cut {
        Cut { members: self.members.iter().map(|m| !m).collect() }
    }
}

/// Builds G(p, L) by breadth-first search from a supersingular j-invariant,
/// reading neighbours off the modular polynomial root multisets. Vertices are
/// indexed in discovery order; neighbours explored in (a, b)-lexicographic
/// order of j, with the primes of L in ascending order.
pub fn build_graph(params: &FpParams, ells: &[u64]) -> Result<IsogenyGraph> {
    let mut ells = ells.to_vec();
    ells.sort_unstable();
    ells.dedup();
    if ells.is_empty() {
        return Err(Error::InvalidInput("at least one edge prime is required".into()));
    }
    for &ell in &ells {
        if !SUPPORTED_ELLS.contains(&ell) {
            return Err(Error::UnsupportedPrime(ell));
        }
        if ell == params.p {
            return Err(Error::InvalidInput("p must not belong to L".into()));
        }
    }
    let modpolys: Vec<_> = ells.iter().map(|&ell| load_modpoly(ell)).collect::<Result<_>>()?;
    let j0 = find_supersingular_j(params)?;
    let mut vertices = vec![j0];
    let mut index: HashMap<(u64, u64), usize> = HashMap::new();
    index.insert((j0.a, j0.b), 0);
    // edges[k] holds (from, to, mult) until the vertex count is known
    let mut edges: Vec<Vec<(usize, usize, u32)>> = vec![Vec::new(); ells.len()];
    let mut next = 0usize;
    while next < vertices.len() {
        let u = next;
        let ju = vertices[u];
        next += 1;
        for (k, mp) in modpolys.iter().enumerate() {
            let spec = mp.specialize(&ju, params);
            let roots = spec.roots(params)?;
            let mult_total: usize = roots.iter().map(|(_, m)| m).sum();
            if mult_total != ells[k] as usize + 1 {
                return Err(Error::InvalidInput(format!(
                    "Phi_{}({}, Y) has {} rational roots, expected {}; is j supersingular?",
                    ells[k],
                    ju.render(),
                    mult_total,
                    ells[k] + 1
                )));
            }
            for (r, m) in roots {
                let v = *index.entry((r.a, r.b)).or_insert_with(|| {
                    vertices.push(r);
                    vertices.len() - 1
                });
                edges[k].push((u, v, m as u32));
            }
        }
    }
    let n = vertices.len();
    let mut adjacency = vec![vec![vec![0u32; n]; n]; ells.len()];
    for (k, list) in edges.into_iter().enumerate() {
        for (u, v, m) in list {
            adjacency[k][u][v] += m;
        }
    }
    Ok(IsogenyGraph { params: params.clone(), ells, vertices, adjacency })
}

impl IsogenyGraph {
    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    /// Total out-degree d = sum of (ell + 1) over L.
    pub fn regularity(&self) -> u64 {
        self.ells.iter().map(|&l| l + 1).sum()
    }

    pub fn vertex_index(&self, j: &Fp2Element) -> Option<usize> {
        self.vertices.iter().position(|v| v == j)
    }

    pub fn adjacency_for(&self, ell: u64) -> Option<&Vec<Vec<u32>>> {
        self.ells.iter().position(|&l| l == ell).map(|k| &self.adjacency[k])
    }

    /// Entrywise sum of the per-prime adjacency matrices.
    pub fn total_adjacency(&self) -> Vec<Vec<u32>> {
        let n = self.n_vertices();
        let mut total = vec![vec![0u32; n]; n];
        for mat in &self.adjacency {
            for (u, row) in mat.iter().enumerate() {
                for (v, m) in row.iter().enumerate() {
                    total[u][v] += m;
                }
            }
        }
        total
    }

    /// True when every per-prime adjacency matrix is symmetric.
    pub fn is_symmetric(&self) -> bool {
        self.adjacency.iter().all(|mat| {
            (0..mat.len()).all(|u| (0..u).all(|v| mat[u][v] == mat[v][u]))
        })
    }

    /// Expected vertex count floor(p/12) + eps from the congruence class of p.
    pub fn expected_vertex_count(p: u64) -> u64 {
        let eps = match p % 12 {
            1 => 0,
            5 | 7 => 1,
            11 => 2,
            _ => 0,
        };
        p / 12 + eps
    }

    pub fn save<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "ISOGRAPH 1")?;
        let ells = self.ells.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(",");
        writeln!(w, "p={} ns={} ells={}", self.params.p, self.params.ns, ells)?;
        for (i, j) in self.vertices.iter().enumerate() {
            writeln!(w, "V {} {} {}", i, j.a, j.b)?;
        }
        for (k, mat) in self.adjacency.iter().enumerate() {
            for (u, row) in mat.iter().enumerate() {
                for (v, &m) in row.iter().enumerate() {
                    if m > 0 {
                        writeln!(w, "E {} {} {} {}", self.ells[k], u, v, m)?;
                    }
                }
            }
        }
        Ok(())
    }

    pub fn save_to_path(&self, path: &std::path::Path) -> Result<()> {
        let file = std::fs::File::create(path)?;
        self.save(std::io::BufWriter::new(file))
    }

    pub fn load<R: BufRead>(r: R) -> Result<IsogenyGraph> {
        let fail = |line: usize, msg: &str| Error::FormatError { line, msg: msg.to_string() };
        let mut lines = r.lines().enumerate();
        let (_, first) = lines.next().ok_or_else(|| fail(1, "empty file"))?;
        if first?.trim() != "ISOGRAPH 1" {
            return Err(fail(1, "expected header 'ISOGRAPH 1'"));
        }
        let (_, second) = lines.next().ok_or_else(|| fail(2, "missing parameter line"))?;
        let second = second?;
        let mut p = None;
        let mut ns = None;
        let mut ells: Vec<u64> = Vec::new();
        for tok in second.split_whitespace() {
            let (key, val) = tok.split_once('=').ok_or_else(|| fail(2, "expected key=value"))?;
            match key {
                "p" => p = Some(val.parse().map_err(|_| fail(2, "bad p"))?),
                "ns" => ns = Some(val.parse().map_err(|_| fail(2, "bad ns"))?),
                "ells" => {
                    for e in val.split(',') {
                        ells.push(e.parse().map_err(|_| fail(2, "bad ells"))?);
                    }
                }
                _ => return Err(fail(2, "unknown key")),
            }
        }
        let p = p.ok_or_else(|| fail(2, "missing p"))?;
        let params = FpParams::new(p).map_err(|_| fail(2, "p is not an odd prime"))?;
        if ns != Some(params.ns) {
            return Err(fail(2, "ns does not match the least non-residue of p"));
        }
        if ells.is_empty() {
            return Err(fail(2, "missing ells"));
        }
        let mut vertices: Vec<Fp2Element> = Vec::new();
        let mut edges: Vec<(u64, usize, usize, u32, usize)> = Vec::new();
        let mut saw_edge = false;
        for (idx, line) in lines {
            let lineno = idx + 1;
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            match toks[0] {
                "V" => {
                    if saw_edge {
                        return Err(fail(lineno, "vertex line after edge lines"));
                    }
                    if toks.len() != 4 {
                        return Err(fail(lineno, "expected 'V index a b'"));
                    }
                    let i: usize = toks[1].parse().map_err(|_| fail(lineno, "bad index"))?;
                    if i != vertices.len() {
                        return Err(fail(lineno, "vertex indices must be contiguous ascending"));
                    }
                    let a: u64 = toks[2].parse().map_err(|_| fail(lineno, "bad coordinate"))?;
                    let b: u64 = toks[3].parse().map_err(|_| fail(lineno, "bad coordinate"))?;
                    if a >= p || b >= p {
                        return Err(fail(lineno, "coordinate out of range"));
                    }
                    vertices.push(Fp2Element { a, b });
                }
                "E" => {
                    saw_edge = true;
                    if toks.len() != 5 {
                        return Err(fail(lineno, "expected 'E ell from to mult'"));
                    }
                    let ell: u64 = toks[1].parse().map_err(|_| fail(lineno, "bad ell"))?;
                    let u: usize = toks[2].parse().map_err(|_| fail(lineno, "bad index"))?;
                    let v: usize = toks[3].parse().map_err(|_| fail(lineno, "bad index"))?;
                    let m: u32 = toks[4].parse().map_err(|_| fail(lineno, "bad multiplicity"))?;
                    edges.push((ell, u, v, m, lineno));
                }
                _ => return Err(fail(lineno, "expected a V or E line")),
            }
        }
        if vertices.is_empty() {
            return Err(fail(3, "no vertices"));
        }
        let n = vertices.len();
        let mut adjacency = vec![vec![vec![0u32; n]; n]; ells.len()];
        for (ell, u, v, m, lineno) in edges {
            let k = ells
                .iter()
                .position(|&l| l == ell)
                .ok_or_else(|| fail(lineno, "edge prime not in ells"))?;
            if u >= n || v >= n {
                return Err(fail(lineno, "edge endpoint out of range"));
            }
            adjacency[k][u][v] += m;
        }
        let g = IsogenyGraph { params, ells, vertices, adjacency };
        // regularity is part of the format contract: a truncated file fails here
        for (k, mat) in g.adjacency.iter().enumerate() {
            for (u, row) in mat.iter().enumerate() {
                let sum: u32 = row.iter().sum();
                if sum != g.ells[k] as u32 + 1 {
                    return Err(Error::FormatError {
                        line: 0,
                        msg: format!(
                            "row sum of A_{} at vertex {} is {}, expected {}",
                            g.ells[k],
                            u,
                            sum,
                            g.ells[k] + 1
                        ),
                    });
                }
            }
        }
        Ok(g)
    }

    pub fn load_from_path(path: &std::path::Path) -> Result<IsogenyGraph> {
        let file = std::fs::File::open(path)?;
        IsogenyGraph::load(std::io::BufReader::new(file))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn build(p: u64, ells: &[u64]) -> IsogenyGraph {
        let fp = FpParams::new(p).unwrap();
        build_graph(&fp, ells).unwrap()
    }

    #[test]
    fn p61_graph_shape() {
        let g = build(61, &[2, 3]);
        assert_eq!(g.n_vertices(), 5);
        let in_fp: Vec<_> = g.vertices.iter().filter(|j| j.in_fp()).collect();
        assert_eq!(in_fp.len(), 3);
        let mut rational: Vec<u64> = in_fp.iter().map(|j| j.a).collect();
        rational.sort_unstable();
        assert_eq!(rational, vec![9, 41, 50]);
        // the two remaining vertices are a conjugate pair
        let non_fp: Vec<_> = g.vertices.iter().filter(|j| !j.in_fp()).collect();
        assert_eq!(non_fp.len(), 2);
        assert_eq!(non_fp[0].conj(&g.params), *non_fp[1]);
        assert!(g.is_symmetric());
    }

    #[test]
    fn p419_has_36_vertices() {
        let g = build(419, &[2, 3]);
        assert_eq!(g.n_vertices(), 36);
        assert_eq!(g.n_vertices() as u64, IsogenyGraph::expected_vertex_count(419));
    }

    #[test]
    fn row_sums_are_ell_plus_one() {
        let g = build(61, &[2]);
        let a2 = g.adjacency_for(2).unwrap();
        for row in a2 {
            assert_eq!(row.iter().sum::<u32>(), 3);
        }
    }

    #[test]
    fn total_adjacency_regularity() {
        let g = build(61, &[2, 3]);
        assert_eq!(g.regularity(), 7);
        let total = g.total_adjacency();
        for row in total {
            assert_eq!(row.iter().sum::<u32>(), 7);
        }
    }

    #[test]
    fn vertex_count_formula_several_primes() {
        for p in [13u64, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 71, 83, 97, 101, 157, 211, 419] {
            let ells: &[u64] = if p == 2 { &[3] } else { &[2] };
            let g = build(p, ells);
            assert_eq!(
                g.n_vertices() as u64,
                IsogenyGraph::expected_vertex_count(p),
                "p = {p}"
            );
        }
    }

    #[test]
    fn duality_away_from_extra_automorphism_vertices() {
        // for p = 3 mod 4 the graph contains j = 1728 (and here j = 0 too);
        // multiplicities are symmetric except at those vertices
        let g = build(419, &[2, 3]);
        let fp = &g.params;
        let special: Vec<usize> = g
            .vertices
            .iter()
            .enumerate()
            .filter(|(_, j)| {
                j.is_zero() || **j == crate::algebra::Fp2Element::from_u64(1728, fp)
            })
            .map(|(i, _)| i)
            .collect();
        assert!(!special.is_empty());
        assert!(!g.is_symmetric());
        for mat in &g.adjacency {
            for u in 0..g.n_vertices() {
                for v in 0..g.n_vertices() {
                    if special.contains(&u) || special.contains(&v) {
                        continue;
                    }
                    assert_eq!(mat[u][v], mat[v][u], "asymmetry away from special vertices");
                }
            }
        }
    }

    #[test]
    fn save_load_round_trip() {
        let g = build(61, &[2, 3]);
        let mut buf = Vec::new();
        g.save(&mut buf).unwrap();
        let g2 = IsogenyGraph::load(std::io::Cursor::new(&buf)).unwrap();
        assert_eq!(g.vertices, g2.vertices);
        assert_eq!(g.ells, g2.ells);
        assert_eq!(g.adjacency, g2.adjacency);
        // byte-exact re-serialization
        let mut buf2 = Vec::new();
        g2.save(&mut buf2).unwrap();
        assert_eq!(buf, buf2);
    }

    #[test]
    fn truncated_file_is_rejected() {
        let g = build(61, &[2]);
        let mut buf = Vec::new();
        g.save(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let truncated: String = text.lines().take(6).collect::<Vec<_>>().join("\n");
        assert!(matches!(
            IsogenyGraph::load(std::io::Cursor::new(truncated.as_bytes())),
            Err(Error::FormatError { .. })
        ));
    }

    #[test]
    fn p_in_ells_rejected() {
        let fp = FpParams::new(13).unwrap();
        assert!(build_graph(&fp, &[13]).is_err());
        assert!(build_graph(&fp, &[4]).is_err());
    }
}
