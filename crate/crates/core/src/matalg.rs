//! Dense matrices over an arbitrary [`Semiring`] and the universal algorithms
//! built on them: closure (`A*`), triangular and diagonal solves, the semiring
//! LDM factorization and the stationary Bellman equation `X = AX ⊕ B`.
//!
//! Every routine that has a published operation count takes an
//! [`OpCounters`] and bumps it once per semiring operation executed. The
//! loops run literally, with no short-circuit on neutral elements, so the
//! counts do not depend on the data or on the semiring.

use std::fmt;

use crate::error::{Error, Result};
use crate::semiring::Semiring;

/// Per-invocation tally of semiring operations.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OpCounters {
    pub n_add: u64,
    pub n_mul: u64,
    pub n_star: u64,
}

impl OpCounters {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add<S: Semiring>(&mut self, s: &S, a: S::Elem, b: S::Elem) -> S::Elem {
        self.n_add += 1;
        s.add(a, b)
    }

    #[inline]
    pub fn mul<S: Semiring>(&mut self, s: &S, a: S::Elem, b: S::Elem) -> S::Elem {
        self.n_mul += 1;
        s.mul(a, b)
    }

    #[inline]
    pub fn star<S: Semiring>(&mut self, s: &S, a: S::Elem) -> Result<S::Elem> {
        self.n_star += 1;
        s.closure(a)
    }

    /// Counts expressed in base-semiring operations (an interval operation is two).
    pub fn base_ops<S: Semiring>(&self, s: &S) -> OpCounters {
        let w = s.op_width();
        OpCounters {
            n_add: self.n_add * w,
            n_mul: self.n_mul * w,
            n_star: self.n_star * w,
        }
    }
}

impl std::ops::Add for OpCounters {
    type Output = OpCounters;

    fn add(self, o: OpCounters) -> OpCounters {
        OpCounters {
            n_add: self.n_add + o.n_add,
            n_mul: self.n_mul + o.n_mul,
            n_star: self.n_star + o.n_star,
        }
    }
}

/// Closed-form operation counts for an `n × n` system, per right-hand-side column.
pub mod formulas {
    use super::OpCounters;

    /// Forward or back substitution: `(n²−n)/2` of each of ⊕ and ⊙.
    pub fn substitution(n: u64) -> OpCounters {
        let k = (n * n - n) / 2;
        OpCounters {
            n_add: k,
            n_mul: k,
            n_star: 0,
        }
    }

    /// Diagonal closure solve: `n` stars and `n` products.
    pub fn diagonal(n: u64) -> OpCounters {
        OpCounters {
            n_add: 0,
            n_mul: n,
            n_star: n,
        }
    }

    /// Solve with a known factorization: `n²−n` ⊕, `n²` ⊙, `n` stars.
    pub fn ldm_solve(n: u64) -> OpCounters {
        OpCounters {
            n_add: n * n - n,
            n_mul: n * n,
            n_star: n,
        }
    }

    /// Factorization: `(2n³−3n²+n)/6` ⊕, `(2n³+3n²−5n)/6` ⊙, `n(n+1)/2` stars.
    pub fn ldm_factorize(n: u64) -> OpCounters {
        OpCounters {
            n_add: (2 * n * n * n + n - 3 * n * n) / 6,
            n_mul: (2 * n * n * n + 3 * n * n - 5 * n) / 6,
            n_star: n * (n + 1) / 2,
        }
    }
}

/// Dense row-major matrix over a semiring.
#[derive(Clone, PartialEq)]
pub struct Matrix<S: Semiring> {
    semiring: S,
    rows: usize,
    cols: usize,
    data: Vec<S::Elem>,
}

impl<S: Semiring> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix<{}> {}x{}", self.semiring.name(), self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

impl<S: Semiring> Matrix<S> {
    /// Builds a matrix from row-major data, validating shape and every entry.
    pub fn new(semiring: S, rows: usize, cols: usize, data: Vec<S::Elem>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::dim("matrix", format!("empty shape {rows}x{cols}")));
        }
        if data.len() != rows * cols {
            return Err(Error::dim(
                "matrix",
                format!("{} entries for a {rows}x{cols} matrix", data.len()),
            ));
        }
        for &x in &data {
            semiring.validate(x)?;
        }
        Ok(Self {
            semiring,
            rows,
            cols,
            data,
        })
    }

    pub fn from_rows(semiring: S, rows: Vec<Vec<S::Elem>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::dim("matrix", "ragged rows"));
        }
        Self::new(semiring, r, c, rows.into_iter().flatten().collect())
    }

    pub fn from_fn(
        semiring: S,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> S::Elem,
    ) -> Result<Self> {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self::new(semiring, rows, cols, data)
    }

    /// The zero matrix `O`.
    pub fn zeros(semiring: S, rows: usize, cols: usize) -> Result<Self> {
        let z = semiring.zero();
        Self::new(semiring, rows, cols, vec![z; rows * cols])
    }

    /// The identity `I`.
    pub fn identity(semiring: S, n: usize) -> Result<Self> {
        let (z, o) = (semiring.zero(), semiring.one());
        Self::from_fn(semiring, n, n, |i, j| if i == j { o } else { z })
    }

    pub fn semiring(&self) -> &S {
        &self.semiring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[S::Elem] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> S::Elem {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: S::Elem) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[S::Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<S::Elem> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    /// Applies `f` entrywise, producing a matrix over another semiring.
    pub fn map<T: Semiring>(&self, target: T, f: impl Fn(S::Elem) -> T::Elem) -> Result<Matrix<T>> {
        Matrix::new(
            target,
            self.rows,
            self.cols,
            self.data.iter().map(|&x| f(x)).collect(),
        )
    }

    fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        let mut data = Vec::with_capacity((r1 - r0) * (c1 - c0));
        for i in r0..r1 {
            data.extend_from_slice(&self.data[i * self.cols + c0..i * self.cols + c1]);
        }
        Self {
            semiring: self.semiring.clone(),
            rows: r1 - r0,
            cols: c1 - c0,
            data,
        }
    }

    fn paste(&mut self, r0: usize, c0: usize, block: &Self) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r0 + i, c0 + j, block.get(i, j));
            }
        }
    }

    /// Entrywise standard order.
    pub fn leq(&self, other: &Self) -> Result<bool> {
        self.check_same(other, "leq")?;
        for (&a, &b) in self.data.iter().zip(&other.data) {
            if !self.semiring.leq(a, b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Entrywise equality up to the semiring's tolerance.
    pub fn approx_eq(&self, other: &Self) -> bool {
        self.shape() == other.shape()
            && self
                .data
                .iter()
                .zip(&other.data)
                .all(|(&a, &b)| self.semiring.approx_eq(a, b))
    }

    fn check_semiring(&self, other: &Self) -> Result<()> {
        if self.semiring != other.semiring {
            return Err(Error::SemiringMismatch(
                self.semiring.name(),
                other.semiring.name(),
            ));
        }
        Ok(())
    }

    fn check_same(&self, other: &Self, op: &'static str) -> Result<()> {
        self.check_semiring(other)?;
        if self.shape() != other.shape() {
            return Err(Error::dim(
                op,
                format!(
                    "{}x{} vs {}x{}",
                    self.rows, self.cols, other.rows, other.cols
                ),
            ));
        }
        Ok(())
    }

    fn require_square(&self, op: &'static str) -> Result<usize> {
        if !self.is_square() {
            return Err(Error::dim(
                op,
                format!("expected a square matrix, got {}x{}", self.rows, self.cols),
            ));
        }
        Ok(self.rows)
    }
}

/// Entrywise `A ⊕ B`.
pub fn mat_add<S: Semiring>(a: &Matrix<S>, b: &Matrix<S>) -> Result<Matrix<S>> {
    a.check_same(b, "mat_add")?;
    let s = &a.semiring;
    let data = a.data.iter().zip(&b.data).map(|(&x, &y)| s.add(x, y)).collect();
    Ok(Matrix {
        semiring: s.clone(),
        rows: a.rows,
        cols: a.cols,
        data,
    })
}

/// `(AB)_ij = ⊕_k a_ik ⊙ b_kj`.
pub fn mat_mul<S: Semiring>(a: &Matrix<S>, b: &Matrix<S>) -> Result<Matrix<S>> {
    mat_mul_counted(a, b, &mut OpCounters::new())
}

pub fn mat_mul_counted<S: Semiring>(
    a: &Matrix<S>,
    b: &Matrix<S>,
    ctr: &mut OpCounters,
) -> Result<Matrix<S>> {
    a.check_semiring(b)?;
    if a.cols != b.rows {
        return Err(Error::dim(
            "mat_mul",
            format!("{}x{} times {}x{}", a.rows, a.cols, b.rows, b.cols),
        ));
    }
    let s = &a.semiring;
    let mut data = Vec::with_capacity(a.rows * b.cols);
    for i in 0..a.rows {
        for j in 0..b.cols {
            let mut acc = ctr.mul(s, a.get(i, 0), b.get(0, j));
            for k in 1..a.cols {
                let p = ctr.mul(s, a.get(i, k), b.get(k, j));
                acc = ctr.add(s, acc, p);
            }
            data.push(acc);
        }
    }
    Ok(Matrix {
        semiring: s.clone(),
        rows: a.rows,
        cols: b.cols,
        data,
    })
}

/// `A^k`, with `A^0 = I`.
pub fn mat_pow<S: Semiring>(a: &Matrix<S>, k: usize) -> Result<Matrix<S>> {
    let n = a.require_square("mat_pow")?;
    let mut acc = Matrix::identity(a.semiring.clone(), n)?;
    for _ in 0..k {
        acc = mat_mul(a, &acc)?;
    }
    Ok(acc)
}

/// Algorithm used to compute `A*`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosureMethod {
    /// Recursive 2×2 block formula, split at `⌊n/2⌋`.
    Escalator,
    /// In-place elimination, one pivot at a time.
    GaussJordan,
    /// `I ⊕ A ⊕ A² ⊕ …` until it stops changing; idempotent semirings only.
    PowerSum,
}

/// Iteration cap for the stabilizing methods, as a multiple of `n`.
pub const STABILIZATION_FACTOR: usize = 4;

/// Computes the closure `A* = I ⊕ A ⊕ A² ⊕ …`, satisfying `A* = AA* ⊕ I`.
pub fn mat_closure<S: Semiring>(a: &Matrix<S>, method: ClosureMethod) -> Result<Matrix<S>> {
    mat_closure_counted(a, method, &mut OpCounters::new())
}

pub fn mat_closure_counted<S: Semiring>(
    a: &Matrix<S>,
    method: ClosureMethod,
    ctr: &mut OpCounters,
) -> Result<Matrix<S>> {
    a.require_square("mat_closure")?;
    match method {
        ClosureMethod::Escalator => escalator(a, 0, ctr),
        ClosureMethod::GaussJordan => gauss_jordan(a, ctr),
        ClosureMethod::PowerSum => power_sum(a, ctr),
    }
}

fn pivot_error<S: Semiring>(s: &S, index: usize, x: S::Elem, e: Error) -> Error {
    match e {
        Error::UndefinedClosure { semiring, value } => Error::PivotClosure {
            index: index + 1,
            semiring,
            value,
        },
        Error::CarrierMismatch { .. } => Error::PivotClosure {
            index: index + 1,
            semiring: s.name(),
            value: format!("{x:?}"),
        },
        other => other,
    }
}

/// `offset` is the position of this block's first row in the caller's matrix,
/// used only to report pivot indices.
fn escalator<S: Semiring>(a: &Matrix<S>, offset: usize, ctr: &mut OpCounters) -> Result<Matrix<S>> {
    let n = a.rows;
    let s = &a.semiring;
    if n == 1 {
        let x = a.get(0, 0);
        let star = ctr.star(s, x).map_err(|e| pivot_error(s, offset, x, e))?;
        return Ok(Matrix {
            semiring: s.clone(),
            rows: 1,
            cols: 1,
            data: vec![star],
        });
    }
    let k = n / 2;
    let a11 = a.submatrix(0, k, 0, k);
    let a12 = a.submatrix(0, k, k, n);
    let a21 = a.submatrix(k, n, 0, k);
    let a22 = a.submatrix(k, n, k, n);

    let a11s = escalator(&a11, offset, ctr)?;
    let a11s_a12 = mat_mul_counted(&a11s, &a12, ctr)?;
    let a21_a11s = mat_mul_counted(&a21, &a11s, ctr)?;
    // D = A22 ⊕ A21 A11* A12
    let mut d = mat_mul_counted(&a21, &a11s_a12, ctr)?;
    for (x, &y) in d.data.iter_mut().zip(&a22.data) {
        *x = ctr.add(s, y, *x);
    }
    let ds = escalator(&d, offset + k, ctr)?;
    let top_right = mat_mul_counted(&a11s_a12, &ds, ctr)?;
    let bottom_left = mat_mul_counted(&ds, &a21_a11s, ctr)?;
    let mut top_left = mat_mul_counted(&top_right, &a21_a11s, ctr)?;
    for (x, &y) in top_left.data.iter_mut().zip(&a11s.data) {
        *x = ctr.add(s, y, *x);
    }

    let mut out = a.clone();
    out.paste(0, 0, &top_left);
    out.paste(0, k, &top_right);
    out.paste(k, 0, &bottom_left);
    out.paste(k, k, &ds);
    Ok(out)
}

fn gauss_jordan<S: Semiring>(a: &Matrix<S>, ctr: &mut OpCounters) -> Result<Matrix<S>> {
    let n = a.rows;
    let s = a.semiring.clone();
    let mut c = a.clone();
    for k in 0..n {
        let pivot = c.get(k, k);
        let star = ctr.star(&s, pivot).map_err(|e| pivot_error(&s, k, pivot, e))?;
        for i in (0..n).filter(|&i| i != k) {
            let lik = ctr.mul(&s, c.get(i, k), star);
            for j in (0..n).filter(|&j| j != k) {
                let p = ctr.mul(&s, lik, c.get(k, j));
                let v = ctr.add(&s, c.get(i, j), p);
                c.set(i, j, v);
            }
        }
        for i in (0..n).filter(|&i| i != k) {
            let v = ctr.mul(&s, c.get(i, k), star);
            c.set(i, k, v);
        }
        for j in (0..n).filter(|&j| j != k) {
            let v = ctr.mul(&s, star, c.get(k, j));
            c.set(k, j, v);
        }
        c.set(k, k, star);
    }
    Ok(c)
}

fn power_sum<S: Semiring>(a: &Matrix<S>, ctr: &mut OpCounters) -> Result<Matrix<S>> {
    let s = &a.semiring;
    if !s.is_idempotent() {
        return Err(Error::NotIdempotent("power_sum closure".into()));
    }
    let n = a.rows;
    let id = Matrix::identity(s.clone(), n)?;
    let mut x = id.clone();
    let cap = STABILIZATION_FACTOR * n;
    for _ in 0..cap {
        let ax = mat_mul_counted(a, &x, ctr)?;
        let mut next = id.clone();
        for (v, &y) in next.data.iter_mut().zip(&ax.data) {
            *v = ctr.add(s, *v, y);
        }
        if next == x {
            return Ok(x);
        }
        x = next;
    }
    Err(Error::NoStabilization(cap))
}

fn check_rhs<S: Semiring>(a: &Matrix<S>, b: &Matrix<S>, op: &'static str) -> Result<usize> {
    let n = a.require_square(op)?;
    a.check_semiring(b)?;
    if b.rows != n {
        return Err(Error::dim(
            op,
            format!("{n}x{n} system with a {}x{} right-hand side", b.rows, b.cols),
        ));
    }
    Ok(n)
}

/// Least solution of `X = LX ⊕ B` for strictly lower triangular `L`.
pub fn forward_subst<S: Semiring>(
    l: &Matrix<S>,
    b: &Matrix<S>,
    ctr: &mut OpCounters,
) -> Result<Matrix<S>> {
    let n = check_rhs(l, b, "forward_subst")?;
    let s = &l.semiring;
    for i in 0..n {
        for j in i..n {
            if !s.is_zero(l.get(i, j)) {
                return Err(Error::NotTriangular {
                    side: "lower",
                    row: i + 1,
                    col: j + 1,
                });
            }
        }
    }
    let mut x = b.clone();
    for col in 0..b.cols {
        for i in 0..n {
            let mut xi = b.get(i, col);
            for j in 0..i {
                let p = ctr.mul(s, l.get(i, j), x.get(j, col));
                xi = ctr.add(s, xi, p);
            }
            x.set(i, col, xi);
        }
    }
    Ok(x)
}

/// Least solution of `X = MX ⊕ B` for strictly upper triangular `M`.
pub fn back_subst<S: Semiring>(
    m: &Matrix<S>,
    b: &Matrix<S>,
    ctr: &mut OpCounters,
) -> Result<Matrix<S>> {
    let n = check_rhs(m, b, "back_subst")?;
    let s = &m.semiring;
    for i in 0..n {
        for j in 0..=i {
            if !s.is_zero(m.get(i, j)) {
                return Err(Error::NotTriangular {
                    side: "upper",
                    row: i + 1,
                    col: j + 1,
                });
            }
        }
    }
    let mut x = b.clone();
    for col in 0..b.cols {
        for i in (0..n).rev() {
            let mut xi = b.get(i, col);
            for j in (i + 1..n).rev() {
                let p = ctr.mul(s, m.get(i, j), x.get(j, col));
                xi = ctr.add(s, xi, p);
            }
            x.set(i, col, xi);
        }
    }
    Ok(x)
}

/// Solves `X = DX ⊕ B` for diagonal `D = diag(d)`: `x_i = d_i* ⊙ b_i`.
pub fn diag_closure_solve<S: Semiring>(
    d: &[S::Elem],
    b: &Matrix<S>,
    ctr: &mut OpCounters,
) -> Result<Matrix<S>> {
    if d.len() != b.rows {
        return Err(Error::dim(
            "diag_closure_solve",
            format!("{} diagonal entries for {} rows", d.len(), b.rows),
        ));
    }
    let s = &b.semiring;
    let mut x = b.clone();
    for col in 0..b.cols {
        for (i, &di) in d.iter().enumerate() {
            let star = ctr.star(s, di).map_err(|e| pivot_error(s, i, di, e))?;
            let v = ctr.mul(s, star, b.get(i, col));
            x.set(i, col, v);
        }
    }
    Ok(x)
}

/// Semiring LDM factorization: `A* = M* D* L*` with `L` strictly lower,
/// `D` diagonal and `M` strictly upper triangular.
#[derive(Debug, Clone, PartialEq)]
pub struct LdmTriple<S: Semiring> {
    pub l: Matrix<S>,
    pub d: Vec<S::Elem>,
    pub m: Matrix<S>,
}

impl<S: Semiring> LdmTriple<S> {
    pub fn n(&self) -> usize {
        self.d.len()
    }

    /// `D` as a full diagonal matrix.
    pub fn d_matrix(&self) -> Result<Matrix<S>> {
        let s = self.l.semiring.clone();
        let z = s.zero();
        Matrix::from_fn(s, self.n(), self.n(), |i, j| if i == j { self.d[i] } else { z })
    }
}

/// Factorizes `A` in place on a working copy, column by column.
///
/// Column `j` is forward-substituted through the part of `L` already built,
/// its upper part is scaled by the earlier pivots' closures into `M`, the
/// diagonal entry becomes `d_j`, and the lower part is updated and scaled by
/// `d_j*` into `L`.
#[allow(clippy::needless_range_loop)]
pub fn ldm_factorize<S: Semiring>(a: &Matrix<S>, ctr: &mut OpCounters) -> Result<LdmTriple<S>> {
    let n = a.require_square("ldm_factorize")?;
    let s = a.semiring.clone();
    let mut c = a.clone();
    let mut v = vec![s.zero(); n];
    for j in 0..n {
        for i in 0..=j {
            v[i] = c.get(i, j);
        }
        for k in 0..j {
            for i in k + 1..=j {
                let p = ctr.mul(&s, c.get(i, k), v[k]);
                v[i] = ctr.add(&s, v[i], p);
            }
        }
        for i in 0..j {
            let dii = c.get(i, i);
            let star = ctr.star(&s, dii).map_err(|e| pivot_error(&s, i, dii, e))?;
            let mij = ctr.mul(&s, star, v[i]);
            c.set(i, j, mij);
        }
        c.set(j, j, v[j]);
        for k in 0..j {
            for i in j + 1..n {
                let p = ctr.mul(&s, c.get(i, k), v[k]);
                let x = ctr.add(&s, c.get(i, j), p);
                c.set(i, j, x);
            }
        }
        let dstar = ctr.star(&s, v[j]).map_err(|e| pivot_error(&s, j, v[j], e))?;
        for i in j + 1..n {
            let x = ctr.mul(&s, c.get(i, j), dstar);
            c.set(i, j, x);
        }
    }

    let z = s.zero();
    let l = Matrix::from_fn(s.clone(), n, n, |i, j| if i > j { c.get(i, j) } else { z })?;
    let m = Matrix::from_fn(s.clone(), n, n, |i, j| if i < j { c.get(i, j) } else { z })?;
    let d = (0..n).map(|i| c.get(i, i)).collect();
    Ok(LdmTriple { l, d, m })
}

/// Solves `X = AX ⊕ B` from a factorization of `A`:
/// `Z = LZ ⊕ B`, then `Y = DY ⊕ Z`, then `X = MX ⊕ Y`.
pub fn ldm_solve<S: Semiring>(
    t: &LdmTriple<S>,
    b: &Matrix<S>,
    ctr: &mut OpCounters,
) -> Result<Matrix<S>> {
    let z = forward_subst(&t.l, b, ctr)?;
    let y = diag_closure_solve(&t.d, &z, ctr)?;
    back_subst(&t.m, &y, ctr)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BellmanMethod {
    /// `A*B` with `A*` from the given closure algorithm.
    Closure(ClosureMethod),
    /// Factorize, then substitute.
    Ldm,
    /// `X₀ = B`, `X_{k+1} = AX_k ⊕ B` until stable; idempotent semirings only.
    Iterate,
}

/// Solves the stationary Bellman equation `X = AX ⊕ B`, returning `A*B`.
pub fn bellman_solve<S: Semiring>(
    a: &Matrix<S>,
    b: &Matrix<S>,
    method: BellmanMethod,
) -> Result<Matrix<S>> {
    bellman_solve_counted(a, b, method, &mut OpCounters::new())
}

pub fn bellman_solve_counted<S: Semiring>(
    a: &Matrix<S>,
    b: &Matrix<S>,
    method: BellmanMethod,
    ctr: &mut OpCounters,
) -> Result<Matrix<S>> {
    check_rhs(a, b, "bellman_solve")?;
    match method {
        BellmanMethod::Closure(m) => {
            let star = mat_closure_counted(a, m, ctr)?;
            mat_mul_counted(&star, b, ctr)
        }
        BellmanMethod::Ldm => {
            let t = ldm_factorize(a, ctr)?;
            ldm_solve(&t, b, ctr)
        }
        BellmanMethod::Iterate => bellman_iterates(a, b, |_| {}).map(|(x, _)| x),
    }
}

/// Runs `X₀ = B`, `X_{k+1} = AX_k ⊕ B`, calling `visit` on every iterate.
/// Returns the fixed point and the number of steps taken.
pub fn bellman_iterates<S: Semiring>(
    a: &Matrix<S>,
    b: &Matrix<S>,
    mut visit: impl FnMut(&Matrix<S>),
) -> Result<(Matrix<S>, usize)> {
    let n = check_rhs(a, b, "bellman_iterate")?;
    if !a.semiring.is_idempotent() {
        return Err(Error::NotIdempotent("iterative Bellman solve".into()));
    }
    let cap = STABILIZATION_FACTOR * n;
    let mut x = b.clone();
    visit(&x);
    for step in 1..=cap {
        let next = mat_add(&mat_mul(a, &x)?, b)?;
        if next == x {
            return Ok((x, step - 1));
        }
        x = next;
        visit(&x);
    }
    Err(Error::NoStabilization(cap))
}
