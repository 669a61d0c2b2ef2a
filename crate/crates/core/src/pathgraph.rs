//! Weighted digraphs and the algebraic path problem.
//!
//! A digraph on `n` nodes is the same object as an `n × n` matrix: an absent
//! arc is the semiring zero. The closure `A*` holds, for every node pair, the
//! ⊕-sum over all connecting paths of the ⊙-product of their arc weights.
//! Node indices are 0-based here; the file parsers convert from 1-based.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::matalg::{mat_closure, mat_closure_counted, mat_mul, mat_pow, ClosureMethod, Matrix, OpCounters};
use crate::semiring::{Carrier, Instance, Semiring};

/// Largest graph [`WeightedDigraph::brute_force_star`] will enumerate.
pub const BRUTE_FORCE_MAX_NODES: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedDigraph<S: Semiring> {
    semiring: S,
    n_nodes: usize,
    arcs: BTreeMap<(usize, usize), S::Elem>,
}

impl<S: Semiring> WeightedDigraph<S> {
    /// Builds a graph from `(src, dst, weight)` triples. Parallel arcs are
    /// combined with ⊕ and arcs of weight zero are dropped.
    pub fn from_edges(
        semiring: S,
        n_nodes: usize,
        edges: impl IntoIterator<Item = (usize, usize, S::Elem)>,
    ) -> Result<Self> {
        if n_nodes == 0 {
            return Err(Error::dim("graph", "a graph needs at least one node"));
        }
        let mut arcs: BTreeMap<(usize, usize), S::Elem> = BTreeMap::new();
        for (src, dst, w) in edges {
            if src >= n_nodes || dst >= n_nodes {
                return Err(Error::dim(
                    "graph",
                    format!("arc ({src}, {dst}) outside 0..{n_nodes}"),
                ));
            }
            semiring.validate(w)?;
            arcs.entry((src, dst))
                .and_modify(|x| *x = semiring.add(*x, w))
                .or_insert(w);
        }
        arcs.retain(|_, w| !semiring.is_zero(*w));
        Ok(Self {
            semiring,
            n_nodes,
            arcs,
        })
    }

    pub fn from_matrix(a: &Matrix<S>) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::dim(
                "graph",
                format!("adjacency matrix must be square, got {}x{}", a.rows(), a.cols()),
            ));
        }
        let n = a.rows();
        let edges = (0..n).flat_map(|i| (0..n).map(move |j| (i, j, a.get(i, j))));
        Self::from_edges(a.semiring().clone(), n, edges)
    }

    pub fn to_matrix(&self) -> Matrix<S> {
        let z = self.semiring.zero();
        Matrix::from_fn(self.semiring.clone(), self.n_nodes, self.n_nodes, |i, j| {
            self.arcs.get(&(i, j)).copied().unwrap_or(z)
        })
        .expect("arc weights were validated on insertion")
    }

    pub fn semiring(&self) -> &S {
        &self.semiring
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn arcs(&self) -> &BTreeMap<(usize, usize), S::Elem> {
        &self.arcs
    }

    pub fn arc(&self, src: usize, dst: usize) -> S::Elem {
        self.arcs
            .get(&(src, dst))
            .copied()
            .unwrap_or_else(|| self.semiring.zero())
    }

    /// ⊙-product of the arc weights along `path`. A single node is the empty
    /// path and weighs one; a missing arc contributes zero.
    pub fn path_weight(&self, path: &[usize]) -> Result<S::Elem> {
        if path.is_empty() {
            return Err(Error::Domain("a path has at least one node".into()));
        }
        if let Some(&bad) = path.iter().find(|&&v| v >= self.n_nodes) {
            return Err(Error::dim(
                "path_weight",
                format!("node {bad} outside 0..{}", self.n_nodes),
            ));
        }
        Ok(path.windows(2).fold(self.semiring.one(), |acc, w| {
            self.semiring.mul(acc, self.arc(w[0], w[1]))
        }))
    }

    /// Exhaustive ⊕ over every path (simple or not) of length at most
    /// `max_len`. Exponential; meant as a test oracle on small graphs.
    pub fn brute_force_star(&self, max_len: usize) -> Result<Matrix<S>> {
        if self.n_nodes > BRUTE_FORCE_MAX_NODES {
            return Err(Error::Domain(format!(
                "brute-force enumeration is limited to {BRUTE_FORCE_MAX_NODES} nodes, got {}",
                self.n_nodes
            )));
        }
        let n = self.n_nodes;
        let mut adj: Vec<Vec<(usize, S::Elem)>> = vec![Vec::new(); n];
        for (&(i, j), &w) in &self.arcs {
            adj[i].push((j, w));
        }
        let mut out = Matrix::zeros(self.semiring.clone(), n, n)?;
        for start in 0..n {
            let mut stack = vec![(start, self.semiring.one(), 0usize)];
            while let Some((node, w, len)) = stack.pop() {
                let acc = self.semiring.add(out.get(start, node), w);
                out.set(start, node, acc);
                if len < max_len {
                    for &(next, a) in &adj[node] {
                        stack.push((next, self.semiring.mul(w, a), len + 1));
                    }
                }
            }
        }
        Ok(out)
    }

    /// The closure `A*` of the adjacency matrix.
    pub fn closure(&self) -> Result<Matrix<S>> {
        mat_closure(&self.to_matrix(), ClosureMethod::GaussJordan)
    }

    fn require(&self, ok: bool, expected: &str) -> Result<()> {
        if ok {
            Ok(())
        } else {
            Err(Error::WrongSemiring {
                expected: expected.into(),
                actual: self.semiring.name(),
            })
        }
    }

    /// All-pairs shortest path lengths (min-plus); unreachable pairs are `+∞`.
    pub fn shortest_paths(&self) -> Result<Matrix<S>> {
        let ok = self.semiring.base_instance().is_some_and(|b| b.is_min_plus());
        self.require(ok, "minplus or minplus_complete")?;
        self.closure()
    }

    /// All-pairs maximal path width (max-min): the best bottleneck over all paths.
    pub fn max_width_paths(&self) -> Result<Matrix<S>> {
        let ok = matches!(self.semiring.base_instance(), Some(Instance::MaxMin { .. }));
        self.require(ok, "maxmin")?;
        self.closure()
    }

    /// Best total profit from each node, with `terminal` collected on exit.
    /// With a horizon `k` only paths of exactly `k` arcs count (`A^k B`);
    /// without one, paths of every length do (`A* B`).
    pub fn max_profit(&self, terminal: &Matrix<S>, horizon: Option<usize>) -> Result<Matrix<S>> {
        let ok = self.semiring.base_instance().is_some_and(|b| b.is_max_plus());
        self.require(ok, "maxplus or maxplus_complete")?;
        if terminal.rows() != self.n_nodes || terminal.cols() != 1 {
            return Err(Error::dim(
                "max_profit",
                format!(
                    "terminal vector must be {}x1, got {}x{}",
                    self.n_nodes,
                    terminal.rows(),
                    terminal.cols()
                ),
            ));
        }
        let a = self.to_matrix();
        let op = match horizon {
            Some(k) => mat_pow(&a, k)?,
            None => mat_closure(&a, ClosureMethod::GaussJordan)?,
        };
        mat_mul(&op, terminal)
    }
}

fn require_real(a: &Matrix<Instance>) -> Result<()> {
    if *a.semiring() != Instance::RealField {
        return Err(Error::WrongSemiring {
            expected: "real_field".into(),
            actual: a.semiring().name(),
        });
    }
    Ok(())
}

/// `A* = (I − A)⁻¹` over the reals, through the same elimination code used for
/// path problems.
pub fn invert_via_star(a: &Matrix<Instance>) -> Result<Matrix<Instance>> {
    require_real(a)?;
    mat_closure(a, ClosureMethod::GaussJordan)
}

/// Ordinary inverse `A⁻¹`, obtained as the closure of `I − A`.
pub fn inverse(a: &Matrix<Instance>) -> Result<Matrix<Instance>> {
    inverse_counted(a, ClosureMethod::GaussJordan, &mut OpCounters::new())
}

pub fn inverse_counted(
    a: &Matrix<Instance>,
    method: ClosureMethod,
    ctr: &mut OpCounters,
) -> Result<Matrix<Instance>> {
    require_real(a)?;
    let n = a.rows();
    let shifted = Matrix::from_fn(Instance::RealField, n, a.cols(), |i, j| {
        let x = a.get(i, j).num().unwrap_or(0.0);
        Carrier::Num(if i == j { 1.0 - x } else { -x })
    })?;
    mat_closure_counted(&shifted, method, ctr)
}
