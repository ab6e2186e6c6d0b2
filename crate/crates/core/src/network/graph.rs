use crate::error::{CarpetError, Result};
use crate::geometry::spec::Dsu;

/// Undirected weighted graph on `0..n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize, f64)>,
}

impl Graph {
    /// Parallel edges are merged by adding conductances; self-loops and
    /// non-positive conductances are rejected.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        let mut list: Vec<(usize, usize, f64)> = Vec::new();
        for (a, b, c) in edges {
            if a == b || a >= n || b >= n {
                return Err(CarpetError::InvalidParameter(format!("bad edge ({a}, {b})")));
            }
            if !(c > 0.0) || !c.is_finite() {
                return Err(CarpetError::InvalidParameter(format!("conductance {c} on ({a}, {b})")));
            }
            list.push((a.min(b), a.max(b), c));
        }
        list.sort_by(|x, y| (x.0, x.1).cmp(&(y.0, y.1)));
        let mut edges: Vec<(usize, usize, f64)> = Vec::with_capacity(list.len());
        for e in list {
            match edges.last_mut() {
                Some(last) if last.0 == e.0 && last.1 == e.1 => last.2 += e.2,
                _ => edges.push(e),
            }
        }
        Ok(Graph { n, edges })
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    /// Edges with `a < b`, sorted.
    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn components(&self) -> usize {
        let mut dsu = Dsu::new(self.n);
        for &(a, b, _) in &self.edges {
            dsu.union(a, b);
        }
        dsu.components()
    }

    pub fn is_connected(&self) -> bool {
        self.components() == 1
    }

    /// Weighted degrees `c_x = Σ_y c_xy`.
    pub fn degrees(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.n];
        for &(a, b, c) in &self.edges {
            d[a] += c;
            d[b] += c;
        }
        d
    }

    /// `Σ c_xy (u_x - u_y)²`.
    pub fn energy(&self, u: &[f64]) -> f64 {
        let terms: Vec<f64> = self.edges.iter().map(|&(a, b, c)| c * (u[a] - u[b]).powi(2)).collect();
        crate::par::pairwise_sum(&terms)
    }

    pub fn laplacian(&self) -> Laplacian {
        Laplacian::from_graph(self)
    }

    /// Copy with every conductance multiplied by `f(a, b)`.
    pub fn scaled(&self, f: impl Fn(usize, usize) -> f64) -> Result<Graph> {
        Graph::new(self.n, self.edges.iter().map(|&(a, b, c)| (a, b, c * f(a, b))))
    }
}

/// Graph Laplacian in compressed rows; row `x` holds the diagonal first.
#[derive(Clone, Debug)]
pub struct Laplacian {
    pub(crate) row_ptr: Vec<usize>,
    pub(crate) cols: Vec<usize>,
    pub(crate) vals: Vec<f64>,
}

impl Laplacian {
    fn from_graph(g: &Graph) -> Self {
        let n = g.n_vertices();
        let mut rows: Vec<Vec<(usize, f64)>> = (0..n).map(|i| vec![(i, 0.0)]).collect();
        for &(a, b, c) in g.edges() {
            rows[a][0].1 += c;
            rows[b][0].1 += c;
            rows[a].push((b, -c));
            rows[b].push((a, -c));
        }
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for mut r in rows {
            r[1..].sort_by_key(|e| e.0);
            for (c, v) in r {
                cols.push(c);
                vals.push(v);
            }
            row_ptr.push(cols.len());
        }
        Laplacian { row_ptr, cols, vals }
    }

    pub fn n(&self) -> usize {
        self.row_ptr.len() - 1
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[r.clone()].iter().copied().zip(self.vals[r].iter().copied())
    }

    pub fn diag(&self, i: usize) -> f64 {
        self.vals[self.row_ptr[i]]
    }

    pub fn apply(&self, u: &[f64]) -> Vec<f64> {
        (0..self.n()).map(|i| self.row(i).map(|(j, v)| v * u[j]).sum()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merges_parallel_edges() {
        let g = Graph::new(3, [(0, 1, 1.0), (1, 0, 2.0), (1, 2, 1.0)]).unwrap();
        assert_eq!(g.edges(), &[(0, 1, 3.0), (1, 2, 1.0)]);
        assert!(g.is_connected());
        let l = g.laplacian();
        assert_eq!(l.apply(&[1.0, 1.0, 1.0]), vec![0.0, 0.0, 0.0]);
        assert_eq!(l.diag(1), 4.0);
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(Graph::new(2, [(0, 0, 1.0)]).is_err());
        assert!(Graph::new(2, [(0, 1, 0.0)]).is_err());
        assert!(Graph::new(2, [(0, 2, 1.0)]).is_err());
    }

    #[test]
    fn counts_components() {
        let g = Graph::new(4, [(0, 1, 1.0), (2, 3, 1.0)]).unwrap();
        assert_eq!(g.components(), 2);
    }
}
