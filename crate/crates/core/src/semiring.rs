//! Semiring abstraction and the built-in numeric instances.
//!
//! A semiring `(S, ⊕, ⊙, 0, 1)` has a commutative, associative addition with
//! neutral `0`, an associative multiplication with neutral `1` that
//! distributes over `⊕`, and `0` absorbing under `⊙`. Idempotent instances
//! (`x ⊕ x = x`) carry the standard order `a ⪯ b ⇔ a ⊕ b = b`.
//!
//! | name                   | carrier              | ⊕        | ⊙    | 0    | 1   |
//! |------------------------|----------------------|----------|------|------|-----|
//! | `maxplus`              | R ∪ {−∞}             | max      | +    | −∞   | 0   |
//! | `maxplus_complete`     | R ∪ {−∞, +∞}         | max      | +    | −∞   | 0   |
//! | `minplus`              | R ∪ {+∞}             | min      | +    | +∞   | 0   |
//! | `minplus_complete`     | R ∪ {−∞, +∞}         | min      | +    | +∞   | 0   |
//! | `maxmin`               | [a, b]               | max      | min  | a    | b   |
//! | `boolean`              | {false, true}        | or       | and  | false| true|
//! | `real_field`           | R                    | +        | ×    | 0    | 1   |
//! | `nonneg_real`          | [0, ∞)               | +        | ×    | 0    | 1   |
//! | `nonneg_real_complete` | [0, ∞]               | +        | ×    | 0    | 1   |
//! | `maslov_deform`        | R ∪ {−∞}             | ⊕_h      | +    | −∞   | 0   |
//!
//! In the complete instances `0 ⊙ ∞ = ∞ ⊙ 0 = 0`, so zero stays absorbing.

use std::fmt;

use crate::error::{Error, Result};

/// A scalar carrier value. Signed infinities are IEEE infinities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Carrier {
    Num(f64),
    Bool(bool),
}

impl Carrier {
    pub const INF: Carrier = Carrier::Num(f64::INFINITY);
    pub const NEG_INF: Carrier = Carrier::Num(f64::NEG_INFINITY);

    pub fn num(self) -> Option<f64> {
        match self {
            Carrier::Num(x) => Some(x),
            Carrier::Bool(_) => None,
        }
    }

    pub fn as_bool(self) -> Option<bool> {
        match self {
            Carrier::Bool(b) => Some(b),
            Carrier::Num(_) => None,
        }
    }
}

impl From<f64> for Carrier {
    fn from(x: f64) -> Self {
        Carrier::Num(x)
    }
}

impl From<bool> for Carrier {
    fn from(b: bool) -> Self {
        Carrier::Bool(b)
    }
}

impl fmt::Display for Carrier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Carrier::Bool(b) => write!(f, "{b}"),
            Carrier::Num(x) => f.write_str(&format_real(*x)),
        }
    }
}

/// Formats a real with at most 15 significant digits, `inf`/`-inf` for
/// infinities. Output is locale independent and parses back with `str::parse`.
pub fn format_real(x: f64) -> String {
    if x == f64::INFINITY {
        return "inf".into();
    }
    if x == f64::NEG_INFINITY {
        return "-inf".into();
    }
    if x.is_nan() {
        return "nan".into();
    }
    if x == 0.0 {
        return "0".into();
    }
    let rounded: f64 = format!("{x:.14e}").parse().unwrap_or(x);
    format!("{rounded}")
}

/// The operations every algorithm in this crate is generic over.
///
/// Elements are passed by value; the implementor guarantees that valid inputs
/// produce valid outputs so inner loops need no error handling. Partial
/// closure is the one fallible operation.
pub trait Semiring: Clone + PartialEq + fmt::Debug + Send + Sync {
    type Elem: Copy + PartialEq + fmt::Debug + Send + Sync;

    fn name(&self) -> String;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn mul(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;

    /// Kleene star `x* = 1 ⊕ x ⊕ x² ⊕ …`, where defined.
    fn closure(&self, x: Self::Elem) -> Result<Self::Elem>;

    fn is_idempotent(&self) -> bool;
    fn is_complete(&self) -> bool;

    /// Comparison slack for the axioms; `0.0` for exact instances.
    fn approx_tolerance(&self) -> f64 {
        0.0
    }

    /// Checks that `x` belongs to this semiring's carrier.
    fn validate(&self, x: Self::Elem) -> Result<()>;

    /// Standard order `a ⪯ b ⇔ a ⊕ b = b`; only defined for idempotent instances.
    fn leq(&self, a: Self::Elem, b: Self::Elem) -> Result<bool> {
        if !self.is_idempotent() {
            return Err(Error::NotIdempotent(format!("order on {}", self.name())));
        }
        Ok(self.add(a, b) == b)
    }

    /// Equality up to [`approx_tolerance`](Self::approx_tolerance).
    fn approx_eq(&self, a: Self::Elem, b: Self::Elem) -> bool {
        a == b
    }

    /// The built-in scalar instance this semiring is (or is lifted from).
    fn base_instance(&self) -> Option<Instance> {
        None
    }

    /// Number of base-semiring operations performed per operation here.
    fn op_width(&self) -> u64 {
        1
    }

    /// For semirings whose `⊙` is real addition, the element representing `v`.
    fn additive_elem(&self, _v: f64) -> Option<Self::Elem> {
        None
    }

    fn checked_add(&self, a: Self::Elem, b: Self::Elem) -> Result<Self::Elem> {
        self.validate(a)?;
        self.validate(b)?;
        Ok(self.add(a, b))
    }

    fn checked_mul(&self, a: Self::Elem, b: Self::Elem) -> Result<Self::Elem> {
        self.validate(a)?;
        self.validate(b)?;
        Ok(self.mul(a, b))
    }

    fn is_zero(&self, x: Self::Elem) -> bool {
        x == self.zero()
    }
}

/// Optional construction parameters: `a`, `b` bound `maxmin`, `h` deforms `maslov_deform`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Params {
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub h: Option<f64>,
}

impl Params {
    /// Parses `a=0,b=1,h=0.5` style lists.
    pub fn parse(s: &str) -> Result<Self> {
        let mut p = Params::default();
        for part in s.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, val) = part
                .split_once('=')
                .ok_or_else(|| Error::parse(0, format!("expected key=value, got `{part}`")))?;
            let val = parse_real(val.trim())
                .ok_or_else(|| Error::parse(0, format!("bad number `{val}` for `{key}`")))?;
            match key.trim() {
                "a" => p.a = Some(val),
                "b" => p.b = Some(val),
                "h" => p.h = Some(val),
                other => return Err(Error::parse(0, format!("unknown parameter `{other}`"))),
            }
        }
        Ok(p)
    }
}

pub(crate) fn parse_real(tok: &str) -> Option<f64> {
    match tok {
        "inf" | "+inf" => Some(f64::INFINITY),
        "-inf" => Some(f64::NEG_INFINITY),
        _ => {
            if !tok.starts_with(|c: char| c.is_ascii_digit() || c == '-' || c == '+' || c == '.') {
                return None;
            }
            tok.parse::<f64>().ok().filter(|x| !x.is_nan())
        }
    }
}

/// Built-in scalar semirings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Instance {
    MaxPlus,
    MaxPlusComplete,
    MinPlus,
    MinPlusComplete,
    MaxMin { lo: f64, hi: f64 },
    Boolean,
    RealField,
    NonnegReal,
    NonnegRealComplete,
    MaslovDeform { h: f64 },
}

pub const SEMIRING_NAMES: [&str; 10] = [
    "maxplus",
    "maxplus_complete",
    "minplus",
    "minplus_complete",
    "maxmin",
    "boolean",
    "real_field",
    "nonneg_real",
    "nonneg_real_complete",
    "maslov_deform",
];

/// Builds a semiring descriptor by name.
///
/// `maxmin` takes bounds `a ≤ b` (default `[−∞, +∞]`); `maslov_deform`
/// requires `h > 0`.
pub fn make_semiring(name: &str, params: Params) -> Result<Instance> {
    let invalid = |reason: &str| Error::InvalidParams {
        semiring: name.to_string(),
        reason: reason.to_string(),
    };
    let inst = match name {
        "maxplus" => Instance::MaxPlus,
        "maxplus_complete" => Instance::MaxPlusComplete,
        "minplus" => Instance::MinPlus,
        "minplus_complete" => Instance::MinPlusComplete,
        "maxmin" => {
            let lo = params.a.unwrap_or(f64::NEG_INFINITY);
            let hi = params.b.unwrap_or(f64::INFINITY);
            if lo > hi {
                return Err(invalid("requires a <= b"));
            }
            Instance::MaxMin { lo, hi }
        }
        "boolean" => Instance::Boolean,
        "real_field" => Instance::RealField,
        "nonneg_real" => Instance::NonnegReal,
        "nonneg_real_complete" => Instance::NonnegRealComplete,
        "maslov_deform" => {
            let h = params.h.ok_or_else(|| invalid("requires h"))?;
            if !(h > 0.0 && h.is_finite()) {
                return Err(invalid("requires finite h > 0"));
            }
            Instance::MaslovDeform { h }
        }
        other => return Err(Error::UnknownSemiring(other.to_string())),
    };
    Ok(inst)
}

impl Instance {
    pub fn base_name(&self) -> &'static str {
        match self {
            Instance::MaxPlus => "maxplus",
            Instance::MaxPlusComplete => "maxplus_complete",
            Instance::MinPlus => "minplus",
            Instance::MinPlusComplete => "minplus_complete",
            Instance::MaxMin { .. } => "maxmin",
            Instance::Boolean => "boolean",
            Instance::RealField => "real_field",
            Instance::NonnegReal => "nonneg_real",
            Instance::NonnegRealComplete => "nonneg_real_complete",
            Instance::MaslovDeform { .. } => "maslov_deform",
        }
    }

    pub fn is_max_plus(&self) -> bool {
        matches!(self, Instance::MaxPlus | Instance::MaxPlusComplete)
    }

    pub fn is_min_plus(&self) -> bool {
        matches!(self, Instance::MinPlus | Instance::MinPlusComplete)
    }

    fn mismatch(&self, x: Carrier) -> Error {
        Error::CarrierMismatch {
            semiring: self.name(),
            value: x.to_string(),
        }
    }

    fn undefined(&self, x: Carrier) -> Error {
        Error::UndefinedClosure {
            semiring: self.name(),
            value: x.to_string(),
        }
    }

    #[inline]
    fn n(x: Carrier) -> f64 {
        match x {
            Carrier::Num(v) => v,
            Carrier::Bool(b) => {
                if b {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    #[inline]
    fn b(x: Carrier) -> bool {
        match x {
            Carrier::Bool(b) => b,
            Carrier::Num(v) => v != 0.0,
        }
    }
}

/// `h·log(e^{u/h} + e^{v/h})`, evaluated by shifting out the larger argument.
pub fn maslov_add(h: f64, u: f64, v: f64) -> f64 {
    if u == f64::NEG_INFINITY {
        return v;
    }
    if v == f64::NEG_INFINITY {
        return u;
    }
    let m = u.max(v);
    let gap = (u - v).abs();
    m + h * (-gap / h).exp().ln_1p()
}

impl Semiring for Instance {
    type Elem = Carrier;

    fn name(&self) -> String {
        match self {
            Instance::MaxMin { lo, hi } => {
                format!("maxmin[{},{}]", format_real(*lo), format_real(*hi))
            }
            Instance::MaslovDeform { h } => format!("maslov_deform(h={})", format_real(*h)),
            other => other.base_name().to_string(),
        }
    }

    fn zero(&self) -> Carrier {
        match self {
            Instance::MaxPlus
            | Instance::MaxPlusComplete
            | Instance::MaslovDeform { .. } => Carrier::NEG_INF,
            Instance::MinPlus | Instance::MinPlusComplete => Carrier::INF,
            Instance::MaxMin { lo, .. } => Carrier::Num(*lo),
            Instance::Boolean => Carrier::Bool(false),
            Instance::RealField | Instance::NonnegReal | Instance::NonnegRealComplete => {
                Carrier::Num(0.0)
            }
        }
    }

    fn one(&self) -> Carrier {
        match self {
            Instance::MaxPlus
            | Instance::MaxPlusComplete
            | Instance::MinPlus
            | Instance::MinPlusComplete
            | Instance::MaslovDeform { .. } => Carrier::Num(0.0),
            Instance::MaxMin { hi, .. } => Carrier::Num(*hi),
            Instance::Boolean => Carrier::Bool(true),
            Instance::RealField | Instance::NonnegReal | Instance::NonnegRealComplete => {
                Carrier::Num(1.0)
            }
        }
    }

    fn add(&self, a: Carrier, b: Carrier) -> Carrier {
        match self {
            Instance::Boolean => Carrier::Bool(Self::b(a) || Self::b(b)),
            Instance::MaxPlus | Instance::MaxPlusComplete | Instance::MaxMin { .. } => {
                Carrier::Num(Self::n(a).max(Self::n(b)))
            }
            Instance::MinPlus | Instance::MinPlusComplete => {
                Carrier::Num(Self::n(a).min(Self::n(b)))
            }
            Instance::RealField | Instance::NonnegReal | Instance::NonnegRealComplete => {
                Carrier::Num(Self::n(a) + Self::n(b))
            }
            Instance::MaslovDeform { h } => Carrier::Num(maslov_add(*h, Self::n(a), Self::n(b))),
        }
    }

    fn mul(&self, a: Carrier, b: Carrier) -> Carrier {
        match self {
            Instance::Boolean => Carrier::Bool(Self::b(a) && Self::b(b)),
            Instance::MaxPlus | Instance::MaxPlusComplete | Instance::MaslovDeform { .. } => {
                let (x, y) = (Self::n(a), Self::n(b));
                if x == f64::NEG_INFINITY || y == f64::NEG_INFINITY {
                    Carrier::NEG_INF
                } else {
                    Carrier::Num(x + y)
                }
            }
            Instance::MinPlus | Instance::MinPlusComplete => {
                let (x, y) = (Self::n(a), Self::n(b));
                if x == f64::INFINITY || y == f64::INFINITY {
                    Carrier::INF
                } else {
                    Carrier::Num(x + y)
                }
            }
            Instance::MaxMin { .. } => Carrier::Num(Self::n(a).min(Self::n(b))),
            Instance::RealField => Carrier::Num(Self::n(a) * Self::n(b)),
            Instance::NonnegReal | Instance::NonnegRealComplete => {
                let (x, y) = (Self::n(a), Self::n(b));
                if x == 0.0 || y == 0.0 {
                    Carrier::Num(0.0)
                } else {
                    Carrier::Num(x * y)
                }
            }
        }
    }

    fn closure(&self, x: Carrier) -> Result<Carrier> {
        self.validate(x)?;
        let v = Self::n(x);
        match self {
            Instance::Boolean => Ok(Carrier::Bool(true)),
            Instance::MaxMin { hi, .. } => Ok(Carrier::Num(*hi)),
            Instance::MaxPlus => {
                if v <= 0.0 {
                    Ok(self.one())
                } else {
                    Err(self.undefined(x))
                }
            }
            Instance::MaxPlusComplete => Ok(if v <= 0.0 {
                self.one()
            } else {
                Carrier::INF
            }),
            Instance::MinPlus => {
                if v >= 0.0 {
                    Ok(self.one())
                } else {
                    Err(self.undefined(x))
                }
            }
            Instance::MinPlusComplete => Ok(if v >= 0.0 {
                self.one()
            } else {
                Carrier::NEG_INF
            }),
            Instance::RealField => {
                if v == 1.0 {
                    Err(self.undefined(x))
                } else {
                    Ok(Carrier::Num(1.0 / (1.0 - v)))
                }
            }
            Instance::NonnegReal => {
                if v < 1.0 {
                    Ok(Carrier::Num(1.0 / (1.0 - v)))
                } else {
                    Err(self.undefined(x))
                }
            }
            Instance::NonnegRealComplete => Ok(if v < 1.0 {
                Carrier::Num(1.0 / (1.0 - v))
            } else {
                Carrier::INF
            }),
            Instance::MaslovDeform { h } => {
                // h·log Σ_k e^{kx/h} = −h·log(1 − e^{x/h}) for x < 0
                if v == f64::NEG_INFINITY {
                    Ok(self.one())
                } else if v < 0.0 {
                    Ok(Carrier::Num(-h * (-(v / h).exp()).ln_1p()))
                } else {
                    Err(self.undefined(x))
                }
            }
        }
    }

    fn is_idempotent(&self) -> bool {
        !matches!(
            self,
            Instance::RealField
                | Instance::NonnegReal
                | Instance::NonnegRealComplete
                | Instance::MaslovDeform { .. }
        )
    }

    fn is_complete(&self) -> bool {
        matches!(
            self,
            Instance::MaxPlusComplete
                | Instance::MinPlusComplete
                | Instance::MaxMin { .. }
                | Instance::Boolean
                | Instance::NonnegRealComplete
        )
    }

    fn approx_tolerance(&self) -> f64 {
        match self {
            Instance::MaslovDeform { .. } => 1e-12,
            Instance::RealField | Instance::NonnegReal | Instance::NonnegRealComplete => 1e-12,
            _ => 0.0,
        }
    }

    fn validate(&self, x: Carrier) -> Result<()> {
        let ok = match (self, x) {
            (Instance::Boolean, Carrier::Bool(_)) => true,
            (Instance::Boolean, Carrier::Num(_)) | (_, Carrier::Bool(_)) => false,
            (_, Carrier::Num(v)) if v.is_nan() => false,
            (Instance::MaxPlus | Instance::MaslovDeform { .. }, Carrier::Num(v)) => {
                v != f64::INFINITY
            }
            (Instance::MinPlus, Carrier::Num(v)) => v != f64::NEG_INFINITY,
            (Instance::MaxPlusComplete | Instance::MinPlusComplete, _) => true,
            (Instance::MaxMin { lo, hi }, Carrier::Num(v)) => *lo <= v && v <= *hi,
            (Instance::RealField, Carrier::Num(v)) => v.is_finite(),
            (Instance::NonnegReal, Carrier::Num(v)) => v >= 0.0 && v.is_finite(),
            (Instance::NonnegRealComplete, Carrier::Num(v)) => v >= 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(self.mismatch(x))
        }
    }

    fn approx_eq(&self, a: Carrier, b: Carrier) -> bool {
        let tol = self.approx_tolerance();
        match (a, b) {
            (Carrier::Num(x), Carrier::Num(y)) if tol > 0.0 => {
                x == y || (x - y).abs() <= tol * 1f64.max(x.abs()).max(y.abs())
            }
            _ => a == b,
        }
    }

    fn base_instance(&self) -> Option<Instance> {
        Some(*self)
    }

    fn additive_elem(&self, v: f64) -> Option<Carrier> {
        match self {
            Instance::MaxPlus
            | Instance::MaxPlusComplete
            | Instance::MinPlus
            | Instance::MinPlusComplete
            | Instance::MaslovDeform { .. } => Some(Carrier::Num(v)),
            _ => None,
        }
    }
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}
