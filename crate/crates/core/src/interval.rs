//! Weak interval extension of an idempotent semiring.
//!
//! An interval `[lo, hi]` with `lo ⪯ hi` in the base order stands for every
//! `x` with `lo ⪯ x ⪯ hi`. Operations act on the bounds independently:
//! `x ⊕ y = [lo⊕lo', hi⊕hi']`, `x ⊙ y = [lo⊙lo', hi⊙hi']`, `x* = [lo*, hi*]`.
//! Because the base operations are monotone, any algorithm run over
//! [`IntervalSemiring`] returns exactly the pair of results obtained at the
//! two endpoint inputs.
//!
//! The order is the base semiring's standard order, so for min-plus the
//! lower bound is the numerically *larger* value: `[3, 1]` contains `2`.

use crate::error::{Error, Result};
use crate::matalg::{bellman_solve_counted, BellmanMethod, Matrix, OpCounters};
use crate::semiring::{Instance, Semiring};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval<E> {
    pub lo: E,
    pub hi: E,
}

impl<E: Copy> Interval<E> {
    pub fn point(x: E) -> Self {
        Self { lo: x, hi: x }
    }
}

/// `I(S)`: the weak interval extension of an idempotent semiring `S`.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalSemiring<S: Semiring> {
    base: S,
}

/// Lifts `base` to its interval extension. Fails for non-idempotent bases,
/// which have no standard order.
pub fn lift_semiring<S: Semiring>(base: S) -> Result<IntervalSemiring<S>> {
    if !base.is_idempotent() {
        return Err(Error::NotIdempotent(format!(
            "interval extension of {}",
            base.name()
        )));
    }
    Ok(IntervalSemiring { base })
}

impl<S: Semiring> IntervalSemiring<S> {
    pub fn base(&self) -> &S {
        &self.base
    }

    /// Builds `[lo, hi]`, rejecting bounds that are out of order.
    pub fn interval(&self, lo: S::Elem, hi: S::Elem) -> Result<Interval<S::Elem>> {
        self.base.validate(lo)?;
        self.base.validate(hi)?;
        if !self.base.leq(lo, hi)? {
            return Err(Error::InvalidInterval {
                lower: format!("{lo:?}"),
                upper: format!("{hi:?}"),
            });
        }
        Ok(Interval { lo, hi })
    }

    /// Membership `lo ⪯ a ⪯ hi`.
    pub fn contains(&self, x: Interval<S::Elem>, a: S::Elem) -> bool {
        let b = &self.base;
        b.add(x.lo, a) == a && b.add(a, x.hi) == x.hi
    }
}

/// Free-function form of [`IntervalSemiring::contains`].
pub fn iv_contains<S: Semiring>(s: &IntervalSemiring<S>, x: Interval<S::Elem>, a: S::Elem) -> bool {
    s.contains(x, a)
}

impl<S: Semiring> Semiring for IntervalSemiring<S> {
    type Elem = Interval<S::Elem>;

    fn name(&self) -> String {
        format!("interval({})", self.base.name())
    }

    fn zero(&self) -> Self::Elem {
        Interval::point(self.base.zero())
    }

    fn one(&self) -> Self::Elem {
        Interval::point(self.base.one())
    }

    fn add(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem {
        Interval {
            lo: self.base.add(a.lo, b.lo),
            hi: self.base.add(a.hi, b.hi),
        }
    }

    fn mul(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem {
        Interval {
            lo: self.base.mul(a.lo, b.lo),
            hi: self.base.mul(a.hi, b.hi),
        }
    }

    fn closure(&self, x: Self::Elem) -> Result<Self::Elem> {
        Ok(Interval {
            lo: self.base.closure(x.lo)?,
            hi: self.base.closure(x.hi)?,
        })
    }

    fn is_idempotent(&self) -> bool {
        true
    }

    fn is_complete(&self) -> bool {
        self.base.is_complete()
    }

    fn validate(&self, x: Self::Elem) -> Result<()> {
        self.interval(x.lo, x.hi).map(|_| ())
    }

    fn base_instance(&self) -> Option<Instance> {
        self.base.base_instance()
    }

    fn op_width(&self) -> u64 {
        2 * self.base.op_width()
    }

    fn additive_elem(&self, v: f64) -> Option<Self::Elem> {
        self.base.additive_elem(v).map(Interval::point)
    }
}

/// Lower-bound matrix of an interval matrix.
pub fn lower<S: Semiring>(m: &Matrix<IntervalSemiring<S>>) -> Matrix<S> {
    m.map(m.semiring().base.clone(), |x| x.lo)
        .expect("interval bounds are valid base carriers")
}

/// Upper-bound matrix of an interval matrix.
pub fn upper<S: Semiring>(m: &Matrix<IntervalSemiring<S>>) -> Matrix<S> {
    m.map(m.semiring().base.clone(), |x| x.hi)
        .expect("interval bounds are valid base carriers")
}

/// Pairs two base matrices into an interval matrix, checking `lo ⪯ hi` entrywise.
pub fn from_bounds<S: Semiring>(lo: &Matrix<S>, hi: &Matrix<S>) -> Result<Matrix<IntervalSemiring<S>>> {
    if lo.shape() != hi.shape() {
        return Err(Error::dim(
            "from_bounds",
            format!("{:?} vs {:?}", lo.shape(), hi.shape()),
        ));
    }
    let s = lift_semiring(lo.semiring().clone())?;
    let data = lo
        .data()
        .iter()
        .zip(hi.data())
        .map(|(&l, &h)| Interval { lo: l, hi: h })
        .collect();
    Matrix::new(s, lo.rows(), lo.cols(), data)
}

/// Solves the interval Bellman equation `X = AX ⊕ B` over `I(S)`.
pub fn interval_bellman<S: Semiring>(
    a: &Matrix<IntervalSemiring<S>>,
    b: &Matrix<IntervalSemiring<S>>,
    method: BellmanMethod,
    ctr: &mut OpCounters,
) -> Result<Matrix<IntervalSemiring<S>>> {
    bellman_solve_counted(a, b, method, ctr)
}
