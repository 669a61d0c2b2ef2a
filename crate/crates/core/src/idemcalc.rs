//! Idempotent calculus on sampled functions and on finite monomial sums.
//!
//! Functions live on uniform 1-D grids ([`GridFunction`]). Integration is the
//! ⊕-fold of the samples, convolution and integral operators replace `Σ`/`×`
//! by `⊕`/`⊙`, and the Legendre transform is the max-plus Fourier transform.
//! For polynomials with positive coefficients, [`dequant_sample`] evaluates
//! `h·log f(e^{x/h})`, which tends to the support function of the
//! [`NewtonSet`] as `h → 0`.

use crate::error::{Error, Result};
use crate::matalg::Matrix;
use crate::semiring::{Carrier, Instance, Semiring};

fn close(a: f64, b: f64) -> bool {
    a == b || (a - b).abs() <= 1e-12 * a.abs().max(b.abs())
}

/// Uniform grid `origin + i·step`, `i = 0..len`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub origin: f64,
    pub step: f64,
    pub len: usize,
}

impl Grid {
    pub fn new(origin: f64, step: f64, len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::dim("grid", "empty grid"));
        }
        if !(step > 0.0 && step.is_finite() && origin.is_finite()) {
            return Err(Error::Domain(format!(
                "grid needs a finite origin and a positive step, got origin={origin} step={step}"
            )));
        }
        Ok(Self { origin, step, len })
    }

    #[inline]
    pub fn point(&self, i: usize) -> f64 {
        self.origin + i as f64 * self.step
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len).map(|i| self.point(i))
    }

    pub fn same_as(&self, other: &Grid) -> bool {
        self.len == other.len && close(self.origin, other.origin) && close(self.step, other.step)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction<S: Semiring> {
    semiring: S,
    grid: Grid,
    values: Vec<S::Elem>,
}

impl<S: Semiring> GridFunction<S> {
    pub fn new(semiring: S, origin: f64, step: f64, values: Vec<S::Elem>) -> Result<Self> {
        let grid = Grid::new(origin, step, values.len())?;
        Self::on_grid(semiring, grid, values)
    }

    pub fn on_grid(semiring: S, grid: Grid, values: Vec<S::Elem>) -> Result<Self> {
        if values.len() != grid.len {
            return Err(Error::dim(
                "grid function",
                format!("{} values for {} grid points", values.len(), grid.len),
            ));
        }
        for &v in &values {
            semiring.validate(v)?;
        }
        Ok(Self {
            semiring,
            grid,
            values,
        })
    }

    pub fn from_fn(semiring: S, grid: Grid, f: impl FnMut(f64) -> S::Elem) -> Result<Self> {
        let values = grid.points().map(f).collect();
        Self::on_grid(semiring, grid, values)
    }

    /// `δ_y`: one at grid index `at`, zero elsewhere.
    pub fn delta(semiring: S, grid: Grid, at: usize) -> Result<Self> {
        let (z, o) = (semiring.zero(), semiring.one());
        let values = (0..grid.len).map(|i| if i == at { o } else { z }).collect();
        Self::on_grid(semiring, grid, values)
    }

    pub fn semiring(&self) -> &S {
        &self.semiring
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn values(&self) -> &[S::Elem] {
        &self.values
    }

    fn check_same_grid(&self, other: &Self, op: &'static str) -> Result<()> {
        if self.semiring != other.semiring {
            return Err(Error::SemiringMismatch(
                self.semiring.name(),
                other.semiring.name(),
            ));
        }
        if !self.grid.same_as(&other.grid) {
            return Err(Error::dim(op, format!("{:?} vs {:?}", self.grid, other.grid)));
        }
        Ok(())
    }

    /// Pointwise `φ ⊕ ψ`.
    pub fn pointwise_add(&self, other: &Self) -> Result<Self> {
        self.check_same_grid(other, "pointwise_add")?;
        let s = &self.semiring;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| s.add(a, b))
            .collect();
        Ok(Self {
            values,
            ..self.clone()
        })
    }

    /// Pointwise `λ ⊙ φ`.
    pub fn scale(&self, lambda: S::Elem) -> Self {
        let s = &self.semiring;
        Self {
            values: self.values.iter().map(|&v| s.mul(lambda, v)).collect(),
            ..self.clone()
        }
    }
}

fn require_idempotent<S: Semiring>(s: &S, op: &str) -> Result<()> {
    if s.is_idempotent() {
        Ok(())
    } else {
        Err(Error::NotIdempotent(format!("{op} over {}", s.name())))
    }
}

/// `∫⊕ φ = ⊕_x φ(x)`, the supremum in the standard order.
pub fn idem_integral<S: Semiring>(phi: &GridFunction<S>) -> Result<S::Elem> {
    let s = &phi.semiring;
    require_idempotent(s, "idempotent integral")?;
    Ok(phi.values.iter().fold(s.zero(), |acc, &v| s.add(acc, v)))
}

/// `⟨φ, ψ⟩ = ⊕_x φ(x) ⊙ ψ(x)`; equivalently the integral of `φ` against the
/// idempotent measure with density `ψ`.
pub fn scalar_product<S: Semiring>(phi: &GridFunction<S>, psi: &GridFunction<S>) -> Result<S::Elem> {
    phi.check_same_grid(psi, "scalar_product")?;
    let s = &phi.semiring;
    require_idempotent(s, "scalar product")?;
    Ok(phi
        .values
        .iter()
        .zip(&psi.values)
        .fold(s.zero(), |acc, (&a, &b)| s.add(acc, s.mul(a, b))))
}

/// `(φ ⊛ ψ)(g) = ⊕_x φ(x) ⊙ ψ(g − x)`.
///
/// The result lives on the sum grid: origin `o_φ + o_ψ`, `n_φ + n_ψ − 1`
/// points. Only index pairs that fall on both input grids contribute.
pub fn sup_convolution<S: Semiring>(
    phi: &GridFunction<S>,
    psi: &GridFunction<S>,
) -> Result<GridFunction<S>> {
    if phi.semiring != psi.semiring {
        return Err(Error::SemiringMismatch(
            phi.semiring.name(),
            psi.semiring.name(),
        ));
    }
    if !close(phi.grid.step, psi.grid.step) {
        return Err(Error::dim(
            "sup_convolution",
            format!("step {} vs {}", phi.grid.step, psi.grid.step),
        ));
    }
    let s = &phi.semiring;
    require_idempotent(s, "sup-convolution")?;
    let (n, m) = (phi.values.len(), psi.values.len());
    let mut out = vec![s.zero(); n + m - 1];
    for (i, &a) in phi.values.iter().enumerate() {
        for (j, &b) in psi.values.iter().enumerate() {
            out[i + j] = s.add(out[i + j], s.mul(a, b));
        }
    }
    let grid = Grid::new(phi.grid.origin + psi.grid.origin, phi.grid.step, n + m - 1)?;
    GridFunction::on_grid(s.clone(), grid, out)
}

/// `φ̃(ξ) = ⊕_x (ξ·x) ⊙ φ(x)`, tabulated on `xi`. Over max-plus this is
/// `sup_x (ξx + φ(x))`; over min-plus the infimum.
pub fn legendre<S: Semiring>(phi: &GridFunction<S>, xi: Grid) -> Result<GridFunction<S>> {
    let s = &phi.semiring;
    if xi.len == 0 {
        return Err(Error::dim("legendre", "empty frequency grid"));
    }
    if !s.is_idempotent() || s.additive_elem(0.0).is_none() {
        return Err(Error::WrongSemiring {
            expected: "max-plus or min-plus".into(),
            actual: s.name(),
        });
    }
    let mut out = Vec::with_capacity(xi.len);
    for k in 0..xi.len {
        let freq = xi.point(k);
        let mut acc = s.zero();
        for (i, &v) in phi.values.iter().enumerate() {
            let character = s
                .additive_elem(freq * phi.grid.point(i))
                .expect("checked above");
            acc = s.add(acc, s.mul(character, v));
        }
        out.push(acc);
    }
    GridFunction::on_grid(s.clone(), xi, out)
}

/// Sampled kernel `K(x, y)`: rows index the output grid, columns the input grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernel<S: Semiring> {
    out: Grid,
    input: Grid,
    samples: Matrix<S>,
}

impl<S: Semiring> Kernel<S> {
    pub fn new(out: Grid, input: Grid, samples: Matrix<S>) -> Result<Self> {
        if samples.shape() != (out.len, input.len) {
            return Err(Error::dim(
                "kernel",
                format!(
                    "{}x{} samples for a {}x{} grid pair",
                    samples.rows(),
                    samples.cols(),
                    out.len,
                    input.len
                ),
            ));
        }
        Ok(Self {
            out,
            input,
            samples,
        })
    }

    pub fn from_fn(
        semiring: S,
        out: Grid,
        input: Grid,
        mut k: impl FnMut(f64, f64) -> S::Elem,
    ) -> Result<Self> {
        let samples = Matrix::from_fn(semiring, out.len, input.len, |i, j| {
            k(out.point(i), input.point(j))
        })?;
        Self::new(out, input, samples)
    }

    /// One on the diagonal, zero elsewhere.
    pub fn identity(semiring: S, grid: Grid) -> Result<Self> {
        let samples = Matrix::identity(semiring, grid.len)?;
        Self::new(grid, grid, samples)
    }

    pub fn samples(&self) -> &Matrix<S> {
        &self.samples
    }
}

impl Kernel<Instance> {
    /// Min-plus kernel `(x − y)² / 2t` on a single grid (a convenience for
    /// quadratic-Hamiltonian propagation demos).
    pub fn quadratic(t: f64, grid: Grid) -> Result<Self> {
        if t.is_nan() || t <= 0.0 {
            return Err(Error::Domain(format!("time must be positive, got {t}")));
        }
        Self::from_fn(Instance::MinPlus, grid, grid, |x, y| {
            Carrier::Num((x - y) * (x - y) / (2.0 * t))
        })
    }
}

/// `(Kφ)(x) = ⊕_y K(x, y) ⊙ φ(y)`.
pub fn apply_integral_operator<S: Semiring>(
    k: &Kernel<S>,
    phi: &GridFunction<S>,
) -> Result<GridFunction<S>> {
    let s = k.samples.semiring();
    if *s != phi.semiring {
        return Err(Error::SemiringMismatch(s.name(), phi.semiring.name()));
    }
    require_idempotent(s, "integral operator")?;
    if !k.input.same_as(&phi.grid) {
        return Err(Error::dim(
            "apply_integral_operator",
            format!("kernel input {:?} vs function {:?}", k.input, phi.grid),
        ));
    }
    let values = (0..k.out.len)
        .map(|i| {
            k.samples
                .row(i)
                .iter()
                .zip(&phi.values)
                .fold(s.zero(), |acc, (&kv, &v)| s.add(acc, s.mul(kv, v)))
        })
        .collect();
    GridFunction::on_grid(s.clone(), k.out, values)
}

/// A term `coeff · x^exponent` with `x^d = Π x_i^{d_i}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Monomial {
    pub coeff: f64,
    pub exponent: Vec<f64>,
}

/// Finite sum of generalized monomials with positive coefficients and
/// pairwise distinct real exponent vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct MonomialSum {
    terms: Vec<Monomial>,
}

impl MonomialSum {
    pub fn new(terms: Vec<Monomial>) -> Result<Self> {
        let dim = terms
            .first()
            .map(|t| t.exponent.len())
            .ok_or_else(|| Error::Domain("monomial sum needs at least one term".into()))?;
        if dim == 0 {
            return Err(Error::Domain("exponent vectors must be nonempty".into()));
        }
        for (i, t) in terms.iter().enumerate() {
            if t.exponent.len() != dim {
                return Err(Error::dim(
                    "monomial sum",
                    format!("term {i} has dimension {}, expected {dim}", t.exponent.len()),
                ));
            }
            if !(t.coeff > 0.0 && t.coeff.is_finite()) {
                return Err(Error::Domain(format!(
                    "coefficients must be positive and finite, term {i} has {}",
                    t.coeff
                )));
            }
            if t.exponent.iter().any(|d| !d.is_finite()) {
                return Err(Error::Domain(format!("term {i} has a non-finite exponent")));
            }
            if terms[..i].iter().any(|u| u.exponent == t.exponent) {
                return Err(Error::Domain(format!("term {i} repeats an exponent")));
            }
        }
        Ok(Self { terms })
    }

    /// Builds a sum from possibly repeated exponents, merging like terms.
    pub fn collect(terms: impl IntoIterator<Item = Monomial>) -> Result<Self> {
        let mut merged: Vec<Monomial> = Vec::new();
        for t in terms {
            match merged.iter_mut().find(|u| u.exponent == t.exponent) {
                Some(u) => u.coeff += t.coeff,
                None => merged.push(t),
            }
        }
        Self::new(merged)
    }

    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    pub fn dim(&self) -> usize {
        self.terms[0].exponent.len()
    }

    fn check_dim(&self, other: &Self, op: &'static str) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::dim(op, format!("dimension {} vs {}", self.dim(), other.dim())));
        }
        Ok(())
    }

    /// Symbolic product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other, "monomial product")?;
        Self::collect(self.terms.iter().flat_map(|a| {
            other.terms.iter().map(move |b| Monomial {
                coeff: a.coeff * b.coeff,
                exponent: a.exponent.iter().zip(&b.exponent).map(|(x, y)| x + y).collect(),
            })
        }))
    }

    /// Symbolic sum.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other, "monomial sum")?;
        Self::collect(self.terms.iter().chain(&other.terms).cloned())
    }

    /// Plain evaluation at a point of the positive orthant.
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                t.coeff
                    * t.exponent
                        .iter()
                        .zip(x)
                        .map(|(d, xi)| xi.powf(*d))
                        .product::<f64>()
            })
            .sum()
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `f̂_h(x) = h·log f(exp(x/h)) = h·log Σ a_d e^{(d,x)/h}`, evaluated with the
/// largest exponent factored out so it never overflows.
pub fn dequant_sample(f: &MonomialSum, h: f64, x: &[f64]) -> Result<f64> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::Domain(format!("h must be positive, got {h}")));
    }
    if x.len() != f.dim() {
        return Err(Error::dim(
            "dequant_sample",
            format!("point of dimension {} for a sum in {} variables", x.len(), f.dim()),
        ));
    }
    let z: Vec<f64> = f
        .terms
        .iter()
        .map(|t| dot(&t.exponent, x) / h + t.coeff.ln())
        .collect();
    let zmax = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let rest: f64 = z.iter().map(|&zi| (zi - zmax).exp()).sum();
    Ok(h * (zmax + rest.ln()))
}

/// Convex hull of a finite point set, kept as its generating points.
///
/// In one and two dimensions the stored points are exactly the hull's
/// vertices (1-D: the two endpoints; 2-D: counter-clockwise, starting from the
/// lowest-leftmost). Higher dimensions keep the deduplicated generators.
#[derive(Debug, Clone, PartialEq)]
pub struct NewtonSet {
    dim: usize,
    points: Vec<Vec<f64>>,
}

impl NewtonSet {
    pub fn from_points(points: Vec<Vec<f64>>) -> Result<Self> {
        let dim = points
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::Domain("a Newton set needs at least one point".into()))?;
        if dim == 0 || points.iter().any(|p| p.len() != dim) {
            return Err(Error::dim("newton set", "points must share a positive dimension"));
        }
        Ok(Self {
            dim,
            points: hull(dim, points),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.points
    }

    /// `max_p (p, x)`.
    pub fn support(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim {
            return Err(Error::dim(
                "support_function",
                format!("direction of dimension {} for a set in R^{}", x.len(), self.dim),
            ));
        }
        Ok(self
            .points
            .iter()
            .map(|p| dot(p, x))
            .fold(f64::NEG_INFINITY, f64::max))
    }

    /// Whether the two hulls have support functions within `tol` on every direction.
    pub fn agrees_on(&self, other: &Self, directions: &[Vec<f64>], tol: f64) -> Result<bool> {
        for d in directions {
            let (a, b) = (self.support(d)?, other.support(d)?);
            if (a - b).abs() > tol * 1f64.max(a.abs()) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn hull(dim: usize, mut pts: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    pts.sort_by(|a, b| a.partial_cmp(b).expect("finite coordinates"));
    pts.dedup();
    match dim {
        1 => {
            let (lo, hi) = (pts[0].clone(), pts[pts.len() - 1].clone());
            if lo == hi {
                vec![lo]
            } else {
                vec![lo, hi]
            }
        }
        2 => monotone_chain(pts),
        _ => pts,
    }
}

/// Andrew's monotone chain on lexicographically sorted, deduplicated points;
/// collinear points are dropped.
fn monotone_chain(pts: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    if pts.len() <= 2 {
        return pts;
    }
    let cross = |o: &[f64], a: &[f64], b: &[f64]| {
        (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
    };
    let mut lower: Vec<Vec<f64>> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Vec<f64>> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    // every input point collinear: the chain visits both ends twice
    lower.dedup();
    if lower.len() == 2 && lower[0] == lower[1] {
        lower.pop();
    }
    lower
}

/// Hull of the exponent vectors.
pub fn newton_set(f: &MonomialSum) -> NewtonSet {
    NewtonSet::from_points(f.terms.iter().map(|t| t.exponent.clone()).collect())
        .expect("monomial sums are nonempty with uniform dimension")
}

/// Minkowski product `N₁ ⊙ N₂ = {a + b}`.
pub fn newton_mul(a: &NewtonSet, b: &NewtonSet) -> Result<NewtonSet> {
    if a.dim != b.dim {
        return Err(Error::dim("newton_mul", format!("R^{} vs R^{}", a.dim, b.dim)));
    }
    let sums = a
        .points
        .iter()
        .flat_map(|p| b.points.iter().map(move |q| p.iter().zip(q).map(|(x, y)| x + y).collect()))
        .collect();
    NewtonSet::from_points(sums)
}

/// Minkowski sum `N₁ ⊕ N₂ = conv(N₁ ∪ N₂)`.
pub fn newton_add(a: &NewtonSet, b: &NewtonSet) -> Result<NewtonSet> {
    if a.dim != b.dim {
        return Err(Error::dim("newton_add", format!("R^{} vs R^{}", a.dim, b.dim)));
    }
    NewtonSet::from_points(a.points.iter().chain(&b.points).cloned().collect())
}

pub fn support_function(n: &NewtonSet, x: &[f64]) -> Result<f64> {
    n.support(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gf(s: Instance, origin: f64, vals: &[f64]) -> GridFunction<Instance> {
        GridFunction::new(s, origin, 1.0, vals.iter().map(|&v| Carrier::Num(v)).collect()).unwrap()
    }

    fn nums<S: Semiring<Elem = Carrier>>(f: &GridFunction<S>) -> Vec<f64> {
        f.values().iter().map(|c| c.num().unwrap()).collect()
    }

    fn poly(terms: &[(f64, &[f64])]) -> MonomialSum {
        MonomialSum::new(
            terms
                .iter()
                .map(|&(c, e)| Monomial {
                    coeff: c,
                    exponent: e.to_vec(),
                })
                .collect(),
        )
        .unwrap()
    }

    const NEG: f64 = f64::NEG_INFINITY;

    #[test]
    fn integral_examples() {
        assert_eq!(idem_integral(&gf(Instance::MaxPlus, 0.0, &[1.0, 5.0, 3.0])).unwrap(), 5.0.into());
        assert_eq!(idem_integral(&gf(Instance::MinPlus, 0.0, &[1.0, 5.0, 3.0])).unwrap(), 1.0.into());
        assert_eq!(
            idem_integral(&gf(Instance::MaxPlus, 0.0, &[NEG, NEG])).unwrap(),
            Carrier::NEG_INF
        );
        let r = GridFunction::new(Instance::RealField, 0.0, 1.0, vec![1.0.into()]).unwrap();
        assert!(idem_integral(&r).is_err());
    }

    #[test]
    fn scalar_product_examples() {
        let s = Instance::MaxPlus;
        let phi = gf(s, 0.0, &[0.0, 1.0]);
        assert_eq!(scalar_product(&phi, &gf(s, 0.0, &[2.0, 0.0])).unwrap(), 2.0.into());
        let phi = gf(s, 0.0, &[4.0, -1.0, 7.0]);
        let delta = GridFunction::delta(s, phi.grid(), 1).unwrap();
        assert_eq!(scalar_product(&phi, &delta).unwrap(), (-1.0).into());
        let ones = gf(s, 0.0, &[0.0, 0.0, 0.0]);
        assert_eq!(
            scalar_product(&phi, &ones).unwrap(),
            idem_integral(&phi).unwrap()
        );
        assert!(scalar_product(&phi, &gf(s, 1.0, &[0.0, 0.0, 0.0])).is_err());
    }

    #[test]
    fn convolution_examples() {
        let s = Instance::MaxPlus;
        let phi = gf(s, 0.0, &[1.0, 0.0]);
        let psi = gf(s, 0.0, &[0.0, 2.0]);
        let c = sup_convolution(&phi, &psi).unwrap();
        assert_eq!(c.grid().origin, 0.0);
        assert_eq!(nums(&c), vec![1.0, 3.0, 2.0]);
        let delta0 = gf(s, 0.0, &[0.0]);
        let phi = gf(s, -2.0, &[3.0, NEG, 1.5]);
        assert_eq!(sup_convolution(&phi, &delta0).unwrap(), phi);
        let other = GridFunction::new(s, 0.0, 0.5, vec![0.0.into()]).unwrap();
        assert!(sup_convolution(&phi, &other).is_err());
    }

    #[test]
    fn legendre_examples() {
        let s = Instance::MaxPlus;
        let delta_like = gf(s, -2.0, &[NEG, NEG, 0.0, NEG, NEG]);
        let xi = Grid::new(-3.0, 0.5, 13).unwrap();
        let t = legendre(&delta_like, xi).unwrap();
        assert!(nums(&t).iter().all(|&v| v == 0.0));

        let parabola = GridFunction::from_fn(s, Grid::new(-2.0, 1.0, 5).unwrap(), |x| {
            Carrier::Num(-x * x / 2.0)
        })
        .unwrap();
        let t = legendre(&parabola, Grid::new(1.0, 1.0, 2).unwrap()).unwrap();
        // brute force: sup over x ∈ {−2..2} of ξx − x²/2
        let brute = |xi: f64| {
            (-2..=2)
                .map(|x| xi * x as f64 - (x * x) as f64 / 2.0)
                .fold(NEG, f64::max)
        };
        assert_eq!(nums(&t), vec![brute(1.0), brute(2.0)]);
        assert_eq!(nums(&t), vec![0.5, 2.0]);

        let bottom = gf(s, 0.0, &[NEG, NEG]);
        let t = legendre(&bottom, xi).unwrap();
        assert!(nums(&t).iter().all(|&v| v == NEG));
        assert!(legendre(&gf(Instance::MaxMin { lo: 0.0, hi: 1.0 }, 0.0, &[0.5]), xi).is_err());
    }

    #[test]
    fn integral_operator_examples() {
        let s = Instance::MinPlus;
        let grid = Grid::new(-3.0, 1.0, 7).unwrap();
        let phi = GridFunction::from_fn(s, grid, |x| Carrier::Num(x * x - x)).unwrap();
        let id = Kernel::identity(s, grid).unwrap();
        assert_eq!(apply_integral_operator(&id, &phi).unwrap(), phi);

        let k = Kernel::quadratic(1.0, grid).unwrap();
        let point = GridFunction::delta(s, grid, 3).unwrap();
        let u = apply_integral_operator(&k, &point).unwrap();
        let expected: Vec<f64> = grid.points().map(|x| x * x / 2.0).collect();
        assert_eq!(nums(&u), expected);

        let wrong = Grid::new(0.0, 1.0, 7).unwrap();
        let psi = GridFunction::from_fn(s, wrong, |_| Carrier::Num(0.0)).unwrap();
        assert!(apply_integral_operator(&k, &psi).is_err());
    }

    #[test]
    fn dequant_examples() {
        let single = poly(&[(3.0, &[2.0, -1.0])]);
        let v = dequant_sample(&single, 0.1, &[1.0, 2.0]).unwrap();
        assert!((v - (0.0 + 0.1 * 3f64.ln())).abs() < 1e-15);

        let f = poly(&[(1.0, &[2.0]), (3.0, &[1.0]), (2.0, &[0.0])]);
        assert!((dequant_sample(&f, 0.01, &[1.0]).unwrap() - 2.0).abs() < 0.031);
        assert!(dequant_sample(&f, 0.01, &[-1.0]).unwrap().abs() < 0.031);
        // far outside the range of exp()
        assert!((dequant_sample(&f, 1e-3, &[5.0]).unwrap() - 10.0).abs() < 1e-12);
        assert!(dequant_sample(&f, 0.0, &[1.0]).is_err());
        assert!(dequant_sample(&f, 1.0, &[1.0, 2.0]).is_err());
    }

    #[test]
    fn dequant_matches_direct_evaluation() {
        let f = poly(&[(1.0, &[2.0]), (3.0, &[1.0]), (2.0, &[0.0])]);
        for x in [-1.0, 0.0, 0.3, 1.0] {
            let h: f64 = 0.7;
            let direct = h * f.eval(&[(x / h).exp()]).ln();
            assert!((dequant_sample(&f, h, &[x]).unwrap() - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn monomial_validation() {
        let m = |c: f64, e: Vec<f64>| Monomial { coeff: c, exponent: e };
        assert!(MonomialSum::new(vec![]).is_err());
        assert!(MonomialSum::new(vec![m(-1.0, vec![1.0])]).is_err());
        assert!(MonomialSum::new(vec![m(1.0, vec![1.0]), m(2.0, vec![1.0])]).is_err());
        assert!(MonomialSum::new(vec![m(1.0, vec![1.0]), m(2.0, vec![1.0, 0.0])]).is_err());
        let c = MonomialSum::collect(vec![m(1.0, vec![1.0]), m(2.0, vec![1.0])]).unwrap();
        assert_eq!(c.terms(), &[m(3.0, vec![1.0])]);
    }

    #[test]
    fn newton_set_examples() {
        let f = poly(&[(1.0, &[2.0]), (3.0, &[1.0]), (2.0, &[0.0])]);
        assert_eq!(newton_set(&f).vertices(), &[vec![0.0], vec![2.0]]);
        assert_eq!(newton_set(&poly(&[(5.0, &[1.0, 3.0])])).vertices(), &[vec![1.0, 3.0]]);
        let g = poly(&[(1.0, &[1.0, 1.0]), (1.0, &[2.0, 0.0])]);
        assert_eq!(newton_set(&g).vertices(), &[vec![1.0, 1.0], vec![2.0, 0.0]]);

        let seg = |a: f64, b: f64| NewtonSet::from_points(vec![vec![a], vec![b]]).unwrap();
        assert_eq!(newton_mul(&seg(0.0, 1.0), &seg(0.0, 2.0)).unwrap(), seg(0.0, 3.0));
        let origin = NewtonSet::from_points(vec![vec![0.0]]).unwrap();
        assert_eq!(newton_mul(&seg(1.0, 4.0), &origin).unwrap(), seg(1.0, 4.0));
        let p = NewtonSet::from_points(vec![vec![1.0, 0.0]]).unwrap();
        let q = NewtonSet::from_points(vec![vec![0.0, 1.0]]).unwrap();
        assert_eq!(newton_mul(&p, &q).unwrap().vertices(), &[vec![1.0, 1.0]]);

        assert_eq!(newton_add(&seg(0.0, 1.0), &seg(2.0, 3.0)).unwrap(), seg(0.0, 3.0));
        assert_eq!(newton_add(&seg(0.0, 2.0), &seg(0.0, 2.0)).unwrap(), seg(0.0, 2.0));
        assert_eq!(newton_add(&seg(0.0, 2.0), &seg(0.0, 3.0)).unwrap(), seg(0.0, 3.0));
        assert!(newton_add(&seg(0.0, 1.0), &p).is_err());
    }

    #[test]
    fn support_examples() {
        let origin = NewtonSet::from_points(vec![vec![0.0, 0.0]]).unwrap();
        assert_eq!(support_function(&origin, &[3.0, -2.0]).unwrap(), 0.0);
        let seg = NewtonSet::from_points(vec![vec![0.0], vec![2.0]]).unwrap();
        assert_eq!(support_function(&seg, &[1.0]).unwrap(), 2.0);
        assert_eq!(support_function(&seg, &[-1.0]).unwrap(), 0.0);
        assert!(support_function(&seg, &[1.0, 1.0]).is_err());
    }

    #[test]
    fn planar_hull_drops_interior_and_collinear_points() {
        let pts = vec![
            vec![0.0, 0.0],
            vec![2.0, 0.0],
            vec![1.0, 0.0],
            vec![2.0, 2.0],
            vec![0.0, 2.0],
            vec![1.0, 1.0],
        ];
        let h = NewtonSet::from_points(pts).unwrap();
        assert_eq!(
            h.vertices(),
            &[vec![0.0, 0.0], vec![2.0, 0.0], vec![2.0, 2.0], vec![0.0, 2.0]]
        );
        let line = NewtonSet::from_points(vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![2.0, 2.0]]).unwrap();
        assert_eq!(line.vertices(), &[vec![0.0, 0.0], vec![2.0, 2.0]]);
    }

    proptest! {
        #[test]
        fn convolution_is_commutative_and_associative(
            a in prop::collection::vec(-20i32..20, 1..8),
            b in prop::collection::vec(-20i32..20, 1..8),
            c in prop::collection::vec(-20i32..20, 1..8),
        ) {
            let s = Instance::MaxPlus;
            let f = |v: &Vec<i32>| gf(s, 0.0, &v.iter().map(|&x| x as f64).collect::<Vec<_>>());
            let (fa, fb, fc) = (f(&a), f(&b), f(&c));
            prop_assert_eq!(sup_convolution(&fa, &fb).unwrap(), sup_convolution(&fb, &fa).unwrap());
            prop_assert_eq!(
                sup_convolution(&sup_convolution(&fa, &fb).unwrap(), &fc).unwrap(),
                sup_convolution(&fa, &sup_convolution(&fb, &fc).unwrap()).unwrap()
            );
        }

        #[test]
        fn legendre_turns_convolution_into_sum(
            a in prop::collection::vec(-20i32..20, 1..6),
            b in prop::collection::vec(-20i32..20, 1..6),
        ) {
            let s = Instance::MaxPlus;
            let f = |v: &Vec<i32>| gf(s, 0.0, &v.iter().map(|&x| x as f64).collect::<Vec<_>>());
            let (fa, fb) = (f(&a), f(&b));
            let xi = Grid::new(-4.0, 0.5, 17).unwrap();
            let lhs = legendre(&sup_convolution(&fa, &fb).unwrap(), xi).unwrap();
            let (la, lb) = (legendre(&fa, xi).unwrap(), legendre(&fb, xi).unwrap());
            let rhs: Vec<f64> = nums(&la).iter().zip(nums(&lb)).map(|(x, y)| x + y).collect();
            prop_assert_eq!(nums(&lhs), rhs);
        }
    }
}
