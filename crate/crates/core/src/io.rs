//! Text formats for matrices, graphs, grid functions and monomial sums.
//!
//! Parsing runs in two stages. The structural pass (`read_*`) needs no
//! semiring and records the semiring name found in the file; the decoding
//! pass turns raw tokens into carriers of a chosen semiring through
//! [`TokenCodec`]. Line numbers in errors are 1-based.
//!
//! Carrier tokens are decimal literals, `inf`, `-inf`, `true` and `false`.
//! Interval elements are written `lo..hi`; a bare scalar is the degenerate
//! interval. Graph files index nodes from 1; everything returned here is
//! 0-based.

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::idemcalc::{Grid, GridFunction, Monomial, MonomialSum, NewtonSet};
use crate::interval::{Interval, IntervalSemiring};
use crate::matalg::Matrix;
use crate::semiring::{format_real, parse_real, Carrier, Instance, Semiring};

/// Conversion between carriers and their textual tokens.
pub trait TokenCodec: Semiring {
    /// Name written in file headers.
    fn file_name(&self) -> String;
    fn parse_token(&self, tok: &str) -> std::result::Result<Self::Elem, String>;
    fn format_elem(&self, x: Self::Elem) -> String;
    fn elem_json(&self, x: Self::Elem) -> Value;
}

fn real_json(x: f64) -> Value {
    let canonical: f64 = format_real(x).parse().unwrap_or(x);
    serde_json::Number::from_f64(canonical)
        .map(Value::Number)
        .unwrap_or_else(|| Value::String(format_real(x)))
}

impl TokenCodec for Instance {
    fn file_name(&self) -> String {
        self.base_name().to_string()
    }

    fn parse_token(&self, tok: &str) -> std::result::Result<Carrier, String> {
        match tok {
            "true" => Ok(Carrier::Bool(true)),
            "false" => Ok(Carrier::Bool(false)),
            _ => parse_real(tok)
                .map(Carrier::Num)
                .ok_or_else(|| format!("bad token `{tok}`")),
        }
    }

    fn format_elem(&self, x: Carrier) -> String {
        x.to_string()
    }

    fn elem_json(&self, x: Carrier) -> Value {
        match x {
            Carrier::Bool(b) => Value::Bool(b),
            Carrier::Num(v) => real_json(v),
        }
    }
}

impl<S: TokenCodec> TokenCodec for IntervalSemiring<S> {
    fn file_name(&self) -> String {
        self.base().file_name()
    }

    fn parse_token(&self, tok: &str) -> std::result::Result<Interval<S::Elem>, String> {
        match tok.split_once("..") {
            Some((lo, hi)) => Ok(Interval {
                lo: self.base().parse_token(lo)?,
                hi: self.base().parse_token(hi)?,
            }),
            None => self.base().parse_token(tok).map(Interval::point),
        }
    }

    fn format_elem(&self, x: Interval<S::Elem>) -> String {
        if x.lo == x.hi {
            self.base().format_elem(x.lo)
        } else {
            format!(
                "{}..{}",
                self.base().format_elem(x.lo),
                self.base().format_elem(x.hi)
            )
        }
    }

    fn elem_json(&self, x: Interval<S::Elem>) -> Value {
        if x.lo == x.hi {
            self.base().elem_json(x.lo)
        } else {
            Value::String(self.format_elem(x))
        }
    }
}

/// Parses and validates one token. Carrier errors become parse errors at
/// `line`; out-of-order interval bounds keep their own error.
pub fn decode_elem<S: TokenCodec>(s: &S, line: usize, tok: &str) -> Result<S::Elem> {
    let x = s.parse_token(tok).map_err(|m| Error::parse(line, m))?;
    s.validate(x).map_err(|e| match e {
        Error::InvalidInterval { .. } => e,
        other => Error::parse(line, other.to_string()),
    })?;
    Ok(x)
}

/// Whether the text looks like JSON (first significant byte is `{` or `[`).
pub fn looks_like_json(text: &str) -> bool {
    text.trim_start().starts_with(['{', '['])
}

/// Significant lines: 1-based number and content, skipping blanks and `#` comments.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_usize(line: usize, tok: &str, what: &str) -> Result<usize> {
    tok.parse()
        .map_err(|_| Error::parse(line, format!("bad {what} `{tok}`")))
}

fn parse_f64(line: usize, tok: &str, what: &str) -> Result<f64> {
    parse_real(tok)
        .filter(|x| x.is_finite())
        .ok_or_else(|| Error::parse(line, format!("bad {what} `{tok}`")))
}

/// A matrix before its tokens are decoded.
#[derive(Debug, Clone, PartialEq)]
pub struct RawMatrix {
    pub semiring: String,
    pub rows: usize,
    pub cols: usize,
    /// Row-major `(line, token)` pairs; JSON cells carry line 0.
    pub cells: Vec<(usize, String)>,
}

impl RawMatrix {
    pub fn decode<S: TokenCodec>(&self, s: &S) -> Result<Matrix<S>> {
        if self.semiring != s.file_name() {
            return Err(Error::SemiringMismatch(self.semiring.clone(), s.file_name()));
        }
        let data = self
            .cells
            .iter()
            .map(|(line, tok)| decode_elem(s, *line, tok))
            .collect::<Result<Vec<_>>>()?;
        Matrix::new(s.clone(), self.rows, self.cols, data)
    }
}

/// Reads one or more concatenated TSV matrices.
///
/// Each block is a header `rows cols semiring-name` followed by `rows`
/// lines of `cols` whitespace-separated tokens.
pub fn read_matrices_tsv(text: &str) -> Result<Vec<RawMatrix>> {
    let mut lines = content_lines(text);
    let mut out = Vec::new();
    while let Some((hline, header)) = lines.next() {
        let parts: Vec<&str> = header.split_whitespace().collect();
        let [r, c, name] = parts[..] else {
            return Err(Error::parse(
                hline,
                format!("expected header `rows cols semiring`, got `{header}`"),
            ));
        };
        let rows = parse_usize(hline, r, "row count")?;
        let cols = parse_usize(hline, c, "column count")?;
        let mut cells = Vec::with_capacity(rows * cols);
        for k in 0..rows {
            let (line, body) = lines.next().ok_or_else(|| {
                Error::parse(hline, format!("matrix declares {rows} rows, found {k}"))
            })?;
            let toks: Vec<&str> = body.split_whitespace().collect();
            if toks.len() != cols {
                return Err(Error::parse(
                    line,
                    format!("expected {cols} entries, found {}", toks.len()),
                ));
            }
            cells.extend(toks.into_iter().map(|t| (line, t.to_string())));
        }
        out.push(RawMatrix {
            semiring: name.to_string(),
            rows,
            cols,
            cells,
        });
    }
    if out.is_empty() {
        return Err(Error::parse(0, "no matrix found"));
    }
    Ok(out)
}

fn json_err(e: serde_json::Error) -> Error {
    Error::parse(e.line(), e.to_string())
}

fn json_token(v: &Value, what: &str) -> Result<String> {
    match v {
        Value::Number(n) => Ok(n.to_string()),
        Value::Bool(b) => Ok(b.to_string()),
        Value::String(s) => Ok(s.clone()),
        _ => Err(Error::parse(0, format!("{what}: expected a number, bool or string"))),
    }
}

fn json_field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| Error::parse(0, format!("missing field `{key}`")))
}

fn json_usize(obj: &Map<String, Value>, key: &str) -> Result<usize> {
    json_field(obj, key)?
        .as_u64()
        .map(|v| v as usize)
        .ok_or_else(|| Error::parse(0, format!("field `{key}` must be a non-negative integer")))
}

fn raw_matrix_from_json(v: &Value) -> Result<RawMatrix> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::parse(0, "expected a matrix object"))?;
    let semiring = json_field(obj, "semiring")?
        .as_str()
        .ok_or_else(|| Error::parse(0, "field `semiring` must be a string"))?
        .to_string();
    let rows = json_usize(obj, "rows")?;
    let cols = json_usize(obj, "cols")?;
    let data = json_field(obj, "data")?
        .as_array()
        .ok_or_else(|| Error::parse(0, "field `data` must be an array"))?;
    // accept both a flat row-major array and an array of rows
    let flat: Vec<&Value> = if data.iter().all(Value::is_array) && !data.is_empty() {
        data.iter().flat_map(|r| r.as_array().unwrap()).collect()
    } else {
        data.iter().collect()
    };
    let cells = flat
        .into_iter()
        .enumerate()
        .map(|(k, v)| json_token(v, &format!("data[{k}]")).map(|t| (0, t)))
        .collect::<Result<Vec<_>>>()?;
    Ok(RawMatrix {
        semiring,
        rows,
        cols,
        cells,
    })
}

/// Reads a JSON matrix object, or an array of them.
pub fn read_matrices_json(text: &str) -> Result<Vec<RawMatrix>> {
    let v: Value = serde_json::from_str(text).map_err(json_err)?;
    let out = match &v {
        Value::Array(items) => items.iter().map(raw_matrix_from_json).collect::<Result<Vec<_>>>()?,
        _ => vec![raw_matrix_from_json(&v)?],
    };
    if out.is_empty() {
        return Err(Error::parse(0, "no matrix found"));
    }
    Ok(out)
}

/// Dispatches on [`looks_like_json`].
pub fn read_matrices(text: &str) -> Result<Vec<RawMatrix>> {
    if looks_like_json(text) {
        read_matrices_json(text)
    } else {
        read_matrices_tsv(text)
    }
}

pub fn write_matrix_tsv<S: TokenCodec>(m: &Matrix<S>) -> String {
    let s = m.semiring();
    let mut out = format!("{} {} {}\n", m.rows(), m.cols(), s.file_name());
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|&x| s.format_elem(x)).collect();
        out.push_str(&row.join("\t"));
        out.push('\n');
    }
    out
}

pub fn matrix_json<S: TokenCodec>(m: &Matrix<S>) -> Value {
    let s = m.semiring();
    json!({
        "semiring": s.file_name(),
        "rows": m.rows(),
        "cols": m.cols(),
        "data": m.data().iter().map(|&x| s.elem_json(x)).collect::<Vec<_>>(),
    })
}

/// A graph file before its weights are decoded.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RawGraph {
    pub semiring: Option<String>,
    pub n_nodes: usize,
    /// 0-based `(line, src, dst, token)`.
    pub arcs: Vec<(usize, usize, usize, String)>,
    /// 0-based `(line, node, token)` from `@terminal` lines.
    pub terminal: Vec<(usize, usize, String)>,
}

/// Reads a graph TSV file.
///
/// Directives: `@semiring <name>`, `@nodes <n>` (defaults to the largest
/// node index seen) and `@terminal <node> <value>` for a terminal-reward
/// vector. Arc lines are `src dst weight` with nodes numbered from 1.
pub fn read_graph_tsv(text: &str) -> Result<RawGraph> {
    let mut g = RawGraph::default();
    let mut declared = None;
    let node = |line: usize, tok: &str| -> Result<usize> {
        match parse_usize(line, tok, "node index")? {
            0 => Err(Error::parse(line, "node indices start at 1")),
            k => Ok(k - 1),
        }
    };
    for (line, body) in content_lines(text) {
        let toks: Vec<&str> = body.split_whitespace().collect();
        match toks[..] {
            ["@semiring", name] => g.semiring = Some(name.to_string()),
            ["@nodes", n] => declared = Some(parse_usize(line, n, "node count")?),
            ["@terminal", v, w] => g.terminal.push((line, node(line, v)?, w.to_string())),
            [d, ..] if d.starts_with('@') => {
                return Err(Error::parse(line, format!("unknown directive `{body}`")))
            }
            [src, dst, w] => g.arcs.push((line, node(line, src)?, node(line, dst)?, w.to_string())),
            _ => {
                return Err(Error::parse(
                    line,
                    format!("expected `src dst weight`, got `{body}`"),
                ))
            }
        }
    }
    let seen = g
        .arcs
        .iter()
        .flat_map(|a| [a.1 + 1, a.2 + 1])
        .chain(g.terminal.iter().map(|t| t.1 + 1))
        .max()
        .unwrap_or(0);
    g.n_nodes = match declared {
        Some(n) if n < seen => {
            return Err(Error::dim(
                "graph",
                format!("node {seen} exceeds declared count {n}"),
            ))
        }
        Some(n) => n,
        None => seen,
    };
    if g.n_nodes == 0 {
        return Err(Error::parse(0, "graph has no nodes"));
    }
    Ok(g)
}

impl RawGraph {
    pub fn edges<S: TokenCodec>(&self, s: &S) -> Result<Vec<(usize, usize, S::Elem)>> {
        self.arcs
            .iter()
            .map(|(line, a, b, tok)| Ok((*a, *b, decode_elem(s, *line, tok)?)))
            .collect()
    }

    /// Terminal column (`n × 1`, zero where unspecified), if any `@terminal` line exists.
    pub fn terminal<S: TokenCodec>(&self, s: &S) -> Result<Option<Matrix<S>>> {
        if self.terminal.is_empty() {
            return Ok(None);
        }
        let mut b = Matrix::zeros(s.clone(), self.n_nodes, 1)?;
        for (line, v, tok) in &self.terminal {
            let x = decode_elem(s, *line, tok)?;
            b.set(*v, 0, s.add(b.get(*v, 0), x));
        }
        Ok(Some(b))
    }
}

/// A grid function before its values are decoded.
#[derive(Debug, Clone, PartialEq)]
pub struct RawGrid {
    pub semiring: String,
    pub grid: Grid,
    pub values: Vec<(usize, String)>,
}

impl RawGrid {
    pub fn decode<S: TokenCodec>(&self, s: &S) -> Result<GridFunction<S>> {
        if self.semiring != s.file_name() {
            return Err(Error::SemiringMismatch(self.semiring.clone(), s.file_name()));
        }
        let values = self
            .values
            .iter()
            .map(|(line, tok)| decode_elem(s, *line, tok))
            .collect::<Result<Vec<_>>>()?;
        GridFunction::on_grid(s.clone(), self.grid, values)
    }
}

/// Reads concatenated grid functions: header `origin step n semiring`, then
/// `n` value tokens (any whitespace layout).
pub fn read_grids_tsv(text: &str) -> Result<Vec<RawGrid>> {
    let mut toks = content_lines(text)
        .flat_map(|(line, body)| body.split_whitespace().map(move |t| (line, t)));
    let mut out = Vec::new();
    while let Some((hline, origin)) = toks.next() {
        let mut field = |what: &str| {
            toks.next()
                .map(|(_, t)| t)
                .ok_or_else(|| Error::parse(hline, format!("grid header is missing {what}")))
        };
        let (step, n, name) = (field("step")?, field("n")?, field("semiring")?);
        let origin = parse_f64(hline, origin, "origin")?;
        let step = parse_f64(hline, step, "step")?;
        let n = parse_usize(hline, n, "point count")?;
        let grid = Grid::new(origin, step, n).map_err(|e| Error::parse(hline, e.to_string()))?;
        let values = (0..n)
            .map(|k| {
                toks.next()
                    .map(|(l, t)| (l, t.to_string()))
                    .ok_or_else(|| Error::parse(hline, format!("grid declares {n} values, found {k}")))
            })
            .collect::<Result<Vec<_>>>()?;
        out.push(RawGrid {
            semiring: name.to_string(),
            grid,
            values,
        });
    }
    if out.is_empty() {
        return Err(Error::parse(0, "no grid function found"));
    }
    Ok(out)
}

pub fn write_grid_tsv<S: TokenCodec>(f: &GridFunction<S>) -> String {
    let s = f.semiring();
    let g = f.grid();
    let mut out = format!(
        "{} {} {} {}\n",
        format_real(g.origin),
        format_real(g.step),
        g.len,
        s.file_name()
    );
    for &v in f.values() {
        out.push_str(&s.format_elem(v));
        out.push('\n');
    }
    out
}

pub fn grid_json<S: TokenCodec>(f: &GridFunction<S>) -> Value {
    let s = f.semiring();
    let g = f.grid();
    json!({
        "semiring": s.file_name(),
        "origin": real_json(g.origin),
        "step": real_json(g.step),
        "values": f.values().iter().map(|&v| s.elem_json(v)).collect::<Vec<_>>(),
    })
}

fn monomial_sum_from_json(v: &Value) -> Result<MonomialSum> {
    let terms = v
        .as_array()
        .ok_or_else(|| Error::parse(0, "a monomial sum is an array of terms"))?;
    let terms = terms
        .iter()
        .enumerate()
        .map(|(k, t)| {
            let bad = |m: &str| Error::parse(0, format!("term {k}: {m}"));
            let obj = t.as_object().ok_or_else(|| bad("expected an object"))?;
            let coeff = obj
                .get("coeff")
                .and_then(Value::as_f64)
                .ok_or_else(|| bad("`coeff` must be a number"))?;
            let exponent = obj
                .get("exponent")
                .and_then(Value::as_array)
                .ok_or_else(|| bad("`exponent` must be an array"))?
                .iter()
                .map(|e| e.as_f64().ok_or_else(|| bad("exponents must be numbers")))
                .collect::<Result<Vec<_>>>()?;
            Ok(Monomial { coeff, exponent })
        })
        .collect::<Result<Vec<_>>>()?;
    MonomialSum::new(terms).map_err(|e| match e.class() {
        crate::error::ErrorClass::Dimension => e,
        _ => Error::parse(0, e.to_string()),
    })
}

/// Reads `[{"coeff": c, "exponent": [..]}, ..]`, or an array of such arrays.
pub fn read_monomial_sums(text: &str) -> Result<Vec<MonomialSum>> {
    let v: Value = serde_json::from_str(text).map_err(json_err)?;
    let nested = v
        .as_array()
        .is_some_and(|a| !a.is_empty() && a.iter().all(Value::is_array));
    if nested {
        v.as_array().unwrap().iter().map(monomial_sum_from_json).collect()
    } else {
        Ok(vec![monomial_sum_from_json(&v)?])
    }
}

pub fn monomial_sum_json(f: &MonomialSum) -> Value {
    Value::Array(
        f.terms()
            .iter()
            .map(|t| {
                json!({
                    "coeff": real_json(t.coeff),
                    "exponent": t.exponent.iter().map(|&e| real_json(e)).collect::<Vec<_>>(),
                })
            })
            .collect(),
    )
}

pub fn newton_json(n: &NewtonSet) -> Value {
    json!({
        "dim": n.dim(),
        "vertices": n
            .vertices()
            .iter()
            .map(|p| p.iter().map(|&x| real_json(x)).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    })
}

/// Header `newton d k`, then one point per line.
pub fn write_newton_tsv(n: &NewtonSet) -> String {
    let mut out = format!("newton {} {}\n", n.dim(), n.vertices().len());
    for p in n.vertices() {
        let row: Vec<String> = p.iter().map(|&x| format_real(x)).collect();
        out.push_str(&row.join("\t"));
        out.push('\n');
    }
    out
}
